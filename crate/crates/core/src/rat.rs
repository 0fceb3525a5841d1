//! Rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::Error;

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn half() -> Rat {
    frac(1, 2)
}

/// Parses `p/q` or a bare integer. Whitespace around the parts is rejected.
pub fn parse(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let bad = || Error::Parse { line: 0, msg: format!("not a rational: {s:?}") };
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(p, q))
}

/// Always prints a denominator, so `0` is `0/1`.
pub fn show(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn mid(a: &Rat, b: &Rat) -> Rat {
    (a + b) / int(2)
}

pub fn in_unit(x: &Rat) -> bool {
    !x.is_negative() && x <= &one()
}

pub fn min(a: &Rat, b: &Rat) -> Rat {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rat, b: &Rat) -> Rat {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Simplest rational (least denominator) strictly inside `(lo, hi)`, via the Stern-Brocot walk.
/// Requires `0 <= lo < hi`.
pub fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo < hi && !lo.is_negative());
    let fl = lo.floor();
    let next = &fl + one();
    if &next < hi {
        return next;
    }
    let lo_f = lo - &fl;
    let hi_f = hi - &fl;
    if lo_f.is_zero() {
        let n = (one() / &hi_f).floor() + one();
        return fl + one() / n;
    }
    let inner = simplest_between(&(one() / &hi_f), &(one() / &lo_f));
    fl + one() / inner
}

pub struct Show<'a>(pub &'a Rat);

impl fmt::Display for Show<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show(self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_show() {
        assert_eq!(parse("3/8").unwrap(), frac(3, 8));
        assert_eq!(parse("6/16").unwrap(), frac(3, 8));
        assert_eq!(parse("1").unwrap(), one());
        assert_eq!(show(&zero()), "0/1");
        assert_eq!(show(&frac(-2, 4)), "-1/2");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn simplest() {
        assert_eq!(simplest_between(&frac(1, 3), &frac(1, 2)), frac(2, 5));
        assert_eq!(simplest_between(&frac(0, 1), &frac(1, 3)), frac(1, 4));
        assert_eq!(simplest_between(&frac(3, 10), &frac(7, 10)), frac(1, 2));
        assert_eq!(simplest_between(&frac(1, 2), &frac(3, 2)), one());
        assert_eq!(simplest_between(&frac(66, 100), &frac(67, 100)), frac(2, 3));
    }
}
