//! The fixture corpus. Every map here is also shipped as a `.map` file under `fixtures/`.

use crate::map::{FracKnot, PLMap};

fn build(knots: &[FracKnot]) -> PLMap {
    PLMap::from_fracs(knots).expect("fixture knots are valid")
}

/// Full tent `x ↦ 1 - |2x - 1|`.
pub fn tent() -> PLMap {
    build(&[((0, 1), (0, 1)), ((1, 2), (1, 1)), ((1, 1), (0, 1))])
}

pub fn identity() -> PLMap {
    PLMap::identity()
}

/// `x ↦ 1 - x`.
pub fn swap() -> PLMap {
    build(&[((0, 1), (1, 1)), ((1, 1), (0, 1))])
}

/// Exchanges the halves around the fixed point 1/2; the second iterate is a tent on each half.
pub fn swap_tent() -> PLMap {
    build(&[((0, 1), (1, 1)), ((1, 2), (1, 2)), ((3, 4), (0, 1)), ((1, 1), (1, 2))])
}

/// Two invariant halves, each carrying an inverted or upright tent.
pub fn two_halves() -> PLMap {
    build(&[((0, 1), (1, 2)), ((1, 4), (0, 1)), ((1, 2), (1, 2)), ((3, 4), (1, 1)), ((1, 1), (1, 2))])
}

/// Linear contraction toward 1/2 with factor 1/2. Not Markov.
pub fn contraction() -> PLMap {
    build(&[((0, 1), (1, 4)), ((1, 1), (3, 4))])
}

/// Constant 1 on [1/4, 1/2].
pub fn plateau() -> PLMap {
    build(&[((0, 1), (0, 1)), ((1, 4), (1, 1)), ((1, 2), (1, 1)), ((1, 1), (0, 1))])
}

/// Fixes 0 and 1 and pushes every interior point up to 1.
pub fn monotone_push() -> PLMap {
    build(&[((0, 1), (0, 1)), ((1, 3), (2, 3)), ((2, 3), (1, 1)), ((1, 1), (1, 1))])
}

/// The middle third collapses to 1 and then to the fixed point 0; the rest is a Cantor set.
pub fn cantor_gap() -> PLMap {
    build(&[((0, 1), (0, 1)), ((1, 3), (1, 1)), ((2, 3), (1, 1)), ((1, 1), (0, 1))])
}

/// Cover matrix `[[1,1],[1,0]]`; mixing with neither endpoint fixed.
pub fn golden() -> PLMap {
    build(&[((0, 1), (1, 1)), ((1, 2), (0, 1)), ((1, 1), (1, 2))])
}

/// Mixing, three branches, 0 fixed and without interior preimages.
pub fn skew3() -> PLMap {
    build(&[((0, 1), (0, 1)), ((1, 3), (1, 1)), ((2, 3), (1, 3)), ((1, 1), (0, 1))])
}

/// Two full tents side by side; both endpoints have interior preimages.
pub fn double_tent() -> PLMap {
    build(&[((0, 1), (1, 2)), ((1, 4), (1, 1)), ((1, 2), (0, 1)), ((3, 4), (1, 1)), ((1, 1), (1, 2))])
}

/// Inverted tent; 1 is fixed and has no interior preimage.
pub fn valley() -> PLMap {
    build(&[((0, 1), (1, 1)), ((1, 2), (0, 1)), ((1, 1), (1, 1))])
}

/// Halves exchanged around 1/2; the only point with a source side is 1/2 itself.
pub fn central_source() -> PLMap {
    build(&[((0, 1), (1, 1)), ((1, 2), (1, 2)), ((2, 3), (1, 6)), ((5, 6), (0, 1)), ((1, 1), (0, 1))])
}

/// A recurrent region feeding back to the left side of 7/8 through the turning point 3/4,
/// while the left side of 7/8 drains into the invariant half [0, 1/2].
/// 7/8 is non-wandering but no orbit accumulates on it.
pub fn omega_gap() -> PLMap {
    build(&[
        ((0, 1), (0, 1)),
        ((1, 4), (1, 2)),
        ((3, 8), (0, 1)),
        ((1, 2), (1, 2)),
        ((5, 8), (3, 4)),
        ((3, 4), (7, 8)),
        ((13, 16), (0, 1)),
        ((7, 8), (1, 2)),
        ((1, 1), (5, 8)),
    ])
}

pub fn tower(depth: usize) -> PLMap {
    crate::tower::build_doubling_tower(depth).expect("tower depth in range").map
}

/// Every named fixture, in a fixed order. Tower depths 1 to 5 are included.
pub fn corpus() -> Vec<(String, PLMap)> {
    let mut v: Vec<(String, PLMap)> = vec![
        ("tent".into(), tent()),
        ("identity".into(), identity()),
        ("swap".into(), swap()),
        ("swap-tent".into(), swap_tent()),
        ("two-halves".into(), two_halves()),
        ("contraction".into(), contraction()),
        ("plateau".into(), plateau()),
        ("monotone-push".into(), monotone_push()),
        ("cantor-gap".into(), cantor_gap()),
        ("golden".into(), golden()),
        ("skew3".into(), skew3()),
        ("double-tent".into(), double_tent()),
        ("valley".into(), valley()),
        ("central-source".into(), central_source()),
        ("omega-gap".into(), omega_gap()),
    ];
    for d in 1..=5 {
        v.push((format!("tower-{d}"), tower(d)));
    }
    v
}

pub fn by_name(name: &str) -> Option<PLMap> {
    corpus().into_iter().find(|(n, _)| n == name).map(|(_, m)| m)
}
