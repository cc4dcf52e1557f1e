//! Minimal univariate polynomials over the rationals: just enough for
//! balance and resonance polynomials (arithmetic, normalization, rational
//! roots by the rational-root theorem plus synthetic division).

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{content, BigRational};

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    /// The monomial `x + c` (used to build falling factorials in R).
    pub fn linear(c: BigRational) -> Self {
        UniPoly::from_coeffs(vec![c, BigRational::one()])
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        UniPoly::from_coeffs(out)
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, f: &BigRational) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c * f).collect())
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    /// Divides out rational content and fixes a positive leading coefficient;
    /// the result has integer coefficients with gcd 1.
    pub fn normalized(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut f = content(self.coeffs.iter());
        if self.leading().unwrap().is_negative() {
            f = -f;
        }
        self.scale(&(BigRational::one() / f))
    }

    /// Synthetic division by `(x - r)`; returns the quotient when the
    /// remainder is zero.
    pub fn divide_by_root(&self, r: &BigRational) -> Option<UniPoly> {
        if self.is_zero() {
            return None;
        }
        let mut quot = vec![BigRational::zero(); self.coeffs.len() - 1];
        let mut carry = BigRational::zero();
        for i in (0..self.coeffs.len()).rev() {
            let v = &self.coeffs[i] + &(carry.clone() * r);
            if i == 0 {
                if !v.is_zero() {
                    return None;
                }
            } else {
                quot[i - 1] = v.clone();
                carry = v;
            }
        }
        Some(UniPoly::from_coeffs(quot))
    }

    /// All rational roots with multiplicity (ascending), plus the degree of
    /// the rational-root-free cofactor (0 when the polynomial splits over Q)
    /// and a flag set when candidate enumeration had to give up on oversized
    /// integer coefficients.
    pub fn rational_roots(&self) -> RootExtraction {
        let mut p = self.normalized();
        let mut roots: Vec<BigRational> = Vec::new();
        // roots at zero: strip low-order zero coefficients
        while !p.is_zero() && p.coeffs[0].is_zero() {
            roots.push(BigRational::zero());
            p = UniPoly::from_coeffs(p.coeffs[1..].to_vec());
        }
        let mut overflow = false;
        'outer: while p.degree() >= 1 {
            let c0 = p.coeffs[0].numer().clone();
            let cn = p.leading().unwrap().numer().clone();
            let (Some(d0), Some(dn)) = (small_divisors(&c0), small_divisors(&cn)) else {
                overflow = true;
                break;
            };
            for num in &d0 {
                for den in &dn {
                    for sign in [1i64, -1] {
                        let cand = BigRational::new(BigInt::from(sign) * num, den.clone());
                        if let Some(q) = p.divide_by_root(&cand) {
                            roots.push(cand);
                            p = q;
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        roots.sort();
        RootExtraction {
            roots,
            residual_degree: p.degree(),
            overflow,
        }
    }
}

/// Result of rational root extraction.
#[derive(Debug, Clone)]
pub struct RootExtraction {
    pub roots: Vec<BigRational>,
    pub residual_degree: usize,
    pub overflow: bool,
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let v = n.abs().to_u64()?;
    if v == 0 {
        return None;
    }
    if v > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i.saturating_mul(i) <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i != v / i {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
    }
    Some(out)
}
