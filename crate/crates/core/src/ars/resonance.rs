//! Resonance polynomials and Right/Left/Full classification.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::univariate::UniPoly;
use super::{monomial_data, ArsError, Balance, BalanceCoeff};
use crate::jet::poly::JetPoly;
use crate::rational::{as_i64, falling, BigRational};

/// The resonance polynomial of a balance and its extracted rational roots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceResult {
    /// Normalized polynomial in R, ascending coefficients (integer, content
    /// 1, positive leading coefficient).
    pub poly_coeffs: Vec<BigRational>,
    /// Rational roots with multiplicity, ascending.
    pub rational_roots: Vec<BigRational>,
    /// True when a factor without rational roots remains.
    pub has_nonrational_factor: bool,
    /// True iff -1 is a root (the generic resonance).
    pub contains_generic: bool,
}

impl ResonanceResult {
    pub fn degree(&self) -> usize {
        self.poly_coeffs.len().saturating_sub(1)
    }

    /// Sum of extracted roots, for the Vieta cross-check.
    pub fn roots_sum(&self) -> BigRational {
        self.rational_roots
            .iter()
            .fold(BigRational::zero(), |a, r| a + r)
    }
}

/// Expansion side of a Painleve series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Ascending powers; valid in a punctured disc around the singularity.
    Right,
    /// Descending powers; valid in the exterior of a disc.
    Left,
    /// Both sides (annulus); arises for mixed-sign resonances.
    Full,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Right => write!(f, "Right"),
            Direction::Left => write!(f, "Left"),
            Direction::Full => write!(f, "Full"),
        }
    }
}

/// `[p+R]_k` as a polynomial in R: `(R+p)(R+p-1)...(R+p-k+1)`.
fn falling_in_r(p: &BigRational, k: usize) -> UniPoly {
    let mut acc = UniPoly::constant(BigRational::one());
    for i in 0..k {
        acc = acc.mul(&UniPoly::linear(
            p - BigRational::from_integer((i as i64).into()),
        ));
    }
    acc
}

/// Computes the resonance polynomial of `b`: substitute
/// `u = c x^p + m x^(p+R)`, keep the m-linear part, and read off its
/// coefficient at the dominant exponent.
///
/// For an arbitrary-coefficient balance the polynomial is computed with the
/// coefficient symbolic; the roots must then be coefficient-independent
/// (all c-power slices proportional), otherwise an error is returned.
pub fn resonances(delta: &JetPoly, b: &Balance) -> Result<ResonanceResult, ArsError> {
    let mons = monomial_data(delta);
    let mu = mons
        .iter()
        .map(|m| m.exponent_at(&b.p))
        .min()
        .ok_or(ArsError::ZeroEquation)?;
    // m-linear coefficient, collected by the power of the (possibly symbolic)
    // leading coefficient c: slice[d-1] accumulates the monomials of u-degree d
    let mut slices: BTreeMap<i64, UniPoly> = BTreeMap::new();
    for m in &mons {
        if m.exponent_at(&b.p) != mu {
            continue;
        }
        let mut contrib = UniPoly::zero();
        for (k, &e) in m.jet_exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            // e_k * [p+R]_k * prod_j [p]_j^(e_j - delta_jk)
            let mut rest = BigRational::one();
            for (j, &ej) in m.jet_exps.iter().enumerate() {
                let pw = if j == k { ej - 1 } else { ej };
                let f = falling(&b.p, j);
                for _ in 0..pw {
                    rest *= f.clone();
                }
            }
            let term =
                falling_in_r(&b.p, k).scale(&(BigRational::from_integer((e as i64).into()) * rest));
            contrib = contrib.add(&term);
        }
        contrib = contrib.scale(&m.coeff);
        let entry = slices.entry(m.degree - 1).or_insert_with(UniPoly::zero);
        *entry = entry.add(&contrib);
    }
    slices.retain(|_, p| !p.is_zero());

    let q = match &b.coeff {
        BalanceCoeff::Rational(c) => {
            // fold the concrete c powers back in
            let mut acc = UniPoly::zero();
            for (dm1, poly) in &slices {
                let mut cp = BigRational::one();
                for _ in 0..*dm1 {
                    cp *= c.clone();
                }
                acc = acc.add(&poly.scale(&cp));
            }
            acc
        }
        BalanceCoeff::Arbitrary => {
            // every slice must be proportional to the first
            let polys: Vec<&UniPoly> = slices.values().collect();
            let Some(first) = polys.first() else {
                return Err(ArsError::DegenerateResonance);
            };
            let lc0 = first.leading().cloned().unwrap_or_else(BigRational::zero);
            for p in polys.iter().skip(1) {
                let lc = p.leading().cloned().unwrap_or_else(BigRational::zero);
                if p.scale(&lc0) != first.scale(&lc) {
                    return Err(ArsError::CoefficientDependentResonances);
                }
            }
            (*first).clone()
        }
    };
    if q.is_zero() {
        return Err(ArsError::DegenerateResonance);
    }
    let normalized = q.normalized();
    let ex = normalized.rational_roots();
    let contains_generic = normalized
        .eval(&BigRational::from_integer((-1).into()))
        .is_zero();
    Ok(ResonanceResult {
        poly_coeffs: normalized.coeffs().to_vec(),
        rational_roots: ex.roots,
        has_nonrational_factor: ex.residual_degree > 0 || ex.overflow,
        contains_generic,
    })
}

/// Classifies the expansion side from the resonance roots.
///
/// One copy of the generic -1 is set aside; the direction is decided by the
/// signs of the remaining nonzero roots (a 0 root is direction-neutral and
/// makes the leading coefficient free): negatives only give Left, positives
/// only (or none) give Right, both give Full.
pub fn classify(r: &ResonanceResult) -> Result<Direction, ArsError> {
    if r.has_nonrational_factor {
        return Err(ArsError::NonRationalResonanceFactor);
    }
    for root in &r.rational_roots {
        if as_i64(root).is_none() {
            return Err(ArsError::NonIntegerResonance {
                root: root.to_string(),
            });
        }
    }
    let mut rest: Vec<&BigRational> = r.rational_roots.iter().collect();
    if let Some(pos) = rest
        .iter()
        .position(|x| **x == BigRational::from_integer((-1).into()))
    {
        rest.remove(pos);
    }
    let has_pos = rest.iter().any(|x| x.is_positive());
    let has_neg = rest.iter().any(|x| x.is_negative());
    Ok(match (has_pos, has_neg) {
        (true, true) => Direction::Full,
        (false, true) => Direction::Left,
        _ => Direction::Right,
    })
}
