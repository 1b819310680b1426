//! Exact rational scalars and the handful of integer-lattice helpers the
//! classical-side code leans on.
//!
//! Everything that decides validity, bounds, or tightness runs on `Rat`
//! (arbitrary-precision rationals). Floats appear only in the quantum-side
//! modules. Coefficient vectors are frequently rescaled to a primitive
//! integer form (gcd 1) so they can be compared, hashed, and printed without
//! denominators; the helpers for that live here too.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a rational. Panics on `d = 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Lossy conversion for the float-world consumers (see-saw, SDP, thresholds).
pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Out-of-range rationals don't occur for Bell coefficients, but don't
        // silently produce NaN if someone feeds us one.
        panic!("rational {} does not fit in f64", x)
    })
}

/// Parse `"-3"`, `"5/2"`, `"-7/3"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

/// Scale a rational vector to the unique primitive integer vector pointing
/// the same way: multiply by the lcm of denominators, divide by the gcd of
/// numerators. The zero vector maps to itself. The sign is preserved (no
/// normalization by leading entry — for inequalities the direction of `≤` is
/// part of the data).
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Primitive integer form of a vector that is already integral, in machine
/// words. Returns `None` when any entry overflows `i128` (does not happen for
/// catalog-sized coefficients).
pub fn primitive_i128(v: &[Rat]) -> Option<Vec<i128>> {
    let big = primitive_integer(v);
    big.iter().map(|x| x.to_i128()).collect()
}

/// Euclidean gcd on machine integers, result non-negative.
pub fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_and_fraction() {
        assert_eq!(parse_rat("-3").unwrap(), rat(-3));
        assert_eq!(parse_rat("5/2").unwrap(), ratio(5, 2));
        assert_eq!(parse_rat(" -7/3 ").unwrap(), ratio(-7, 3));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn primitive_clears_denominators_and_common_factors() {
        let v = vec![ratio(1, 2), ratio(-3, 4), rat(2)];
        let p = primitive_integer(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(8)]);

        let w = vec![rat(4), rat(-6), rat(0)];
        let p = primitive_integer(&w);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }

    #[test]
    fn primitive_zero_vector_is_fixed_point() {
        let v = vec![rat(0), rat(0)];
        assert_eq!(primitive_integer(&v), vec![BigInt::zero(), BigInt::zero()]);
    }
}
