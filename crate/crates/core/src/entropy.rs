//! Topological entropy of a Markov system as the log spectral radius of its cover graph.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::markov::MarkovSystem;
use crate::rat::{self, Rat};

/// Target relative width of the spectral radius enclosure; gives log-width well below 1e-9.
const RHO_REL_TOL: f64 = 1e-11;
const MAX_ITERS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Entropy {
    /// Midpoint of the enclosure.
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    /// Collatz-Wielandt bounds on the spectral radius, exact.
    pub rho_lo: Rat,
    pub rho_hi: Rat,
    /// Whether the enclosure met the width target within the iteration cap.
    pub certified: bool,
}

impl Entropy {
    fn zero() -> Self {
        Entropy { value: 0.0, lo: 0.0, hi: 0.0, rho_lo: rat::one(), rho_hi: rat::one(), certified: true }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

pub fn entropy(ms: &MarkovSystem) -> Entropy {
    // spectral radius is the max over irreducible blocks; permutation blocks contribute 1
    let blocks: Vec<(Rat, Rat, bool)> =
        ms.cyclic_sccs().iter().filter(|scc| !ms.scc_is_permutation(scc)).map(|scc| block_radius(ms, scc)).collect();
    if blocks.is_empty() {
        return Entropy::zero();
    }
    let lo = blocks.iter().map(|b| b.0.clone()).max().unwrap();
    let hi = blocks.iter().map(|b| b.1.clone()).max().unwrap();
    let ok = blocks.iter().all(|b| b.2);
    let lo_f = down(rat::to_f64(&lo).ln()).max(0.0);
    let hi_f = up(rat::to_f64(&hi).ln());
    Entropy { value: 0.5 * (lo_f + hi_f), lo: lo_f, hi: hi_f, rho_lo: lo, rho_hi: hi, certified: ok }
}

fn down(x: f64) -> f64 {
    x - 4.0 * f64::EPSILON * x.abs().max(1e-300) - 1e-300
}

fn up(x: f64) -> f64 {
    x + 4.0 * f64::EPSILON * x.abs().max(1e-300) + 1e-300
}

/// Power iteration on `I + B` restricted to one irreducible block.
fn block_radius(ms: &MarkovSystem, scc: &[usize]) -> (Rat, Rat, bool) {
    let idx = |c: usize| scc.binary_search(&c).ok();
    let rows: Vec<Vec<usize>> = scc.iter().map(|&c| ms.succ(c).iter().filter_map(|&j| idx(j)).collect()).collect();
    let n = scc.len();
    let mut v: Vec<BigInt> = vec![BigInt::one(); n];
    let mut bounds = (rat::zero(), rat::int(n as i64 + 1));
    for it in 0..MAX_ITERS {
        let w: Vec<BigInt> = (0..n).map(|i| rows[i].iter().fold(v[i].clone(), |acc, &j| acc + &v[j])).collect();
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for i in 0..n {
            let r = Rat::new(w[i].clone(), v[i].clone());
            if lo.as_ref().is_none_or(|l| &r < l) {
                lo = Some(r.clone());
            }
            if hi.as_ref().is_none_or(|h| &r > h) {
                hi = Some(r);
            }
        }
        let lo = lo.unwrap() - rat::one();
        let hi = hi.unwrap() - rat::one();
        let done = !lo.is_zero() && rat::to_f64(&((&hi - &lo) / &lo)) <= RHO_REL_TOL;
        bounds = (lo, hi);
        if done && it > 0 {
            return (bounds.0, bounds.1, true);
        }
        // keep integers small: divide by the gcd of the vector
        let g = w.iter().fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        v = if g > BigInt::one() { w.into_iter().map(|x| x / &g).collect() } else { w };
    }
    (bounds.0, bounds.1, false)
}
