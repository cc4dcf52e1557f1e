//! Exact rational scalars used by every symbolic path.
//!
//! All symbolic computation in this crate runs over arbitrary-precision
//! rationals; floating point appears only in [`crate::numerics`].

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator (zero is `0/1`).
pub type BigRational = num_rational::BigRational;

/// Shorthand constructor from machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer-valued rational.
pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"n"` or `"n/d"` (optionally signed) into a rational.
pub fn rat_from_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(n))
        }
    }
}

/// Canonical `"n"` / `"n/d"` rendering (matches `Display` of the backing type).
pub fn rat_to_string(r: &BigRational) -> String {
    r.to_string()
}

/// Lossy conversion to `f64` that survives numerators and denominators
/// too large for `to_f64` on the parts.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Falling factorial `p (p-1) ... (p-k+1)`; `k = 0` gives 1.
pub fn falling(p: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= p - rat_int(i as i64);
    }
    acc
}

/// True iff the rational has denominator 1.
pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

/// The rational as an `i64` if it is an integer fitting the type.
pub fn as_i64(r: &BigRational) -> Option<i64> {
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Greatest common divisor of the absolute values of all numerators divided
/// by the least common multiple of denominators: the content of a coefficient
/// list. Returns 1 for an empty list.
pub fn content<'a, I: IntoIterator<Item = &'a BigRational>>(coeffs: I) -> BigRational {
    use num_integer::Integer;
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::one();
    for c in coeffs {
        num_gcd = num_gcd.gcd(&c.numer().abs());
        den_lcm = den_lcm.lcm(c.denom());
    }
    if num_gcd.is_zero() {
        BigRational::one()
    } else {
        BigRational::new(num_gcd, den_lcm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(rat_from_str("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(rat_to_string(&rat(-1, 2)), "-1/2");
        assert_eq!(rat_to_string(&rat_int(7)), "7");
        assert!(rat_from_str("1/0").is_none());
        assert!(rat_from_str("x").is_none());
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling(&rat_int(-1), 3), rat_int(-6));
        assert_eq!(falling(&rat_int(-2), 3), rat_int(-24));
        assert_eq!(falling(&rat_int(5), 0), rat_int(1));
        assert_eq!(falling(&rat(1, 2), 2), rat(-1, 4));
    }

    #[test]
    fn content_of_list() {
        let cs = [rat_int(6), rat_int(-9), rat(3, 2)];
        assert_eq!(content(cs.iter()), rat(3, 2));
        assert_eq!(content(std::iter::empty()), rat_int(1));
    }
}
