//! Period-doubling towers of PL maps and their odometer coordinates.

use crate::cycle::CycleOfIntervals;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::map::PLMap;
use crate::rat::{self, frac, Rat};

/// Deepest tower the builder accepts; the innermost period is `2^(depth+1)`.
pub const MAX_TOWER_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolenoidTower {
    pub map: PLMap,
    /// `levels[j]` has period `2^(j+1)`; orbits are nested.
    pub levels: Vec<CycleOfIntervals>,
    pub depth: usize,
}

impl SolenoidTower {
    pub fn periods(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.period).collect()
    }

    /// Is `x` in the orbit of the innermost level?
    pub fn in_deepest(&self, x: &Rat) -> bool {
        self.levels.last().is_some_and(|l| l.contains(x))
    }
}

/// Puts `inner` on [3/5,4/5] (scaled into [1/5,2/5]) and swaps [1/5,2/5] onto [3/5,4/5] by translation.
fn wrap(inner: &PLMap) -> Result<PLMap> {
    let fifth = frac(1, 5);
    let scale = |v: &Rat| &fifth + v / rat::int(5);
    let mut knots = vec![(rat::zero(), rat::zero()), (frac(1, 5), frac(3, 5)), (frac(2, 5), frac(4, 5))];
    for (u, v) in inner.knots() {
        knots.push((frac(3, 5) + u / rat::int(5), scale(v)));
    }
    knots.push((rat::one(), rat::one()));
    PLMap::new(knots)
}

/// A map with verified generating intervals `I_0 ⊃ I_1 ⊃ … ⊃ I_depth` of periods 2, 4, …, `2^(depth+1)`.
/// The innermost level carries the identity under its return map.
pub fn build_doubling_tower(depth: usize) -> Result<SolenoidTower> {
    if depth == 0 {
        return Err(Error::domain("tower depth must be at least 1"));
    }
    if depth > MAX_TOWER_DEPTH {
        return Err(Error::resource(format!("tower depth {depth} exceeds {MAX_TOWER_DEPTH}")));
    }
    let mut map = PLMap::identity();
    for _ in 0..=depth {
        map = wrap(&map)?;
    }
    let mut base = Interval::new(frac(1, 5), frac(2, 5));
    let mut levels: Vec<CycleOfIntervals> = Vec::new();
    for j in 0..=depth {
        let c = CycleOfIntervals::generated(&map, base.clone(), 1 << (j + 1))?;
        if c.weak {
            return Err(Error::pre(format!("level {j} is not a cycle of intervals")));
        }
        if let Some(prev) = levels.last() {
            if !c.union().is_subset(&prev.union()) {
                return Err(Error::pre(format!("level {j} is not nested")));
            }
        }
        levels.push(c);
        base = Interval::new(frac(1, 5) + &base.lo / rat::int(5), frac(1, 5) + &base.hi / rat::int(5));
    }
    Ok(SolenoidTower { map, levels, depth })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OdometerAddress {
    pub digits: Vec<usize>,
}

fn check_address(addr: &OdometerAddress, periods: &[usize]) -> Result<()> {
    if addr.digits.len() > periods.len() {
        return Err(Error::domain("address longer than the tower"));
    }
    for (i, &r) in addr.digits.iter().enumerate() {
        if r >= periods[i] {
            return Err(Error::domain(format!("digit {i} out of range")));
        }
        if i > 0 && (!periods[i].is_multiple_of(periods[i - 1]) || r % periods[i - 1] != addr.digits[i - 1]) {
            return Err(Error::domain(format!("digit {i} inconsistent with digit {}", i - 1)));
        }
    }
    Ok(())
}

/// Adds one in every coordinate of the inverse limit.
pub fn odometer_translate(addr: &OdometerAddress, periods: &[usize]) -> Result<OdometerAddress> {
    check_address(addr, periods)?;
    Ok(OdometerAddress { digits: addr.digits.iter().zip(periods).map(|(r, m)| (r + 1) % m).collect() })
}

/// Digits `r_j` with `x ∈ f^{r_j}(I_j)` for every level containing `x`; `None` outside level 0.
pub fn phi_address(tower: &SolenoidTower, x: &Rat) -> Option<OdometerAddress> {
    let mut digits = Vec::new();
    for level in &tower.levels {
        match level.orbit.iter().position(|piece| piece.contains(x)) {
            Some(r) => digits.push(r),
            None => break,
        }
    }
    (!digits.is_empty()).then_some(OdometerAddress { digits })
}
