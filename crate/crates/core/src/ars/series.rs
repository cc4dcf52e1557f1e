//! Painleve-series construction by an exact order-by-order solve, and the
//! truncation consistency check.
//!
//! The residual of a one-sided series is collected level by level in
//! decreasing asymptotic dominance (ascending powers for a Right series,
//! descending for a Left one). Level `i` is linear in the coefficient `a_i`:
//! `alpha_i a_i + f_i = 0`. A vanishing `alpha_i` is a resonance: the forcing
//! `f_i` must vanish exactly (else the branch needs logarithms and the build
//! fails) and `a_i` is taken from the supplied free values, defaulting to 1.
//!
//! When the equation's monomials do not all sit at the balance exponent the
//! levels are fed by several exponent offsets ("gaps"); the solve is then
//! banded rather than diagonal, but level `i` still determines `a_i` because
//! a gap only lowers the coefficient indices a monomial can touch at a given
//! level.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use thiserror::Error;

use super::resonance::Direction;
use super::{monomial_data, Balance, BalanceCoeff, MonomialData};
use crate::jet::poly::JetPoly;
use crate::rational::{as_i64, falling, rat_int, BigRational};

/// A truncated one-sided Painleve series `sum_i a_i x^(p + sigma i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PainleveSeries {
    pub direction: Direction,
    /// Leading exponent.
    pub p: BigRational,
    /// `coeffs[i]` multiplies `x^(p + sigma i)` with `sigma = +1` (Right) or
    /// `-1` (Left).
    pub coeffs: Vec<BigRational>,
    /// Indices whose coefficients are free constants of integration.
    pub free_indices: BTreeSet<usize>,
    /// Truncation order N (last computed index).
    pub truncation: usize,
}

impl PainleveSeries {
    pub fn sigma(&self) -> i64 {
        match self.direction {
            Direction::Right => 1,
            Direction::Left => -1,
            Direction::Full => 0,
        }
    }

    /// Exponent of the i-th term.
    pub fn exponent(&self, i: usize) -> BigRational {
        &self.p + rat_int(self.sigma() * i as i64)
    }
}

/// Failure modes of the series construction.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("compatibility failure at index {index}: forcing term {forcing} is nonzero (logarithmic branch required)")]
    Compatibility { index: usize, forcing: String },
    #[error("full (annulus) series construction is unsupported: the two-sided recurrence is not triangular")]
    FullUnsupported,
    #[error("series exponents are incommensurate with integer levels (gap {gap} at monomial {monomial})")]
    IncommensurateGap { gap: String, monomial: String },
}

/// Scalar that is affine in the one unknown coefficient of the current level.
#[derive(Debug, Clone, PartialEq)]
struct Affine {
    c: BigRational,
    t: BigRational,
}

impl Affine {
    fn zero() -> Self {
        Affine {
            c: BigRational::zero(),
            t: BigRational::zero(),
        }
    }

    fn known(c: BigRational) -> Self {
        Affine {
            c,
            t: BigRational::zero(),
        }
    }

    fn unknown(scale: BigRational) -> Self {
        Affine {
            c: BigRational::zero(),
            t: scale,
        }
    }

    fn is_zero(&self) -> bool {
        self.c.is_zero() && self.t.is_zero()
    }

    fn add_assign(&mut self, rhs: &Affine) {
        self.c += rhs.c.clone();
        self.t += rhs.t.clone();
    }

    fn mul(&self, rhs: &Affine) -> Affine {
        // quadratic terms in the unknown cannot reach the level being read
        // (their level is at least twice the unknown's index)
        debug_assert!(self.t.is_zero() || rhs.t.is_zero());
        Affine {
            c: &self.c * &rhs.c,
            t: &self.c * &rhs.t + &self.t * &rhs.c,
        }
    }

    fn scale(&self, f: &BigRational) -> Affine {
        Affine {
            c: &self.c * f,
            t: &self.t * f,
        }
    }
}

/// Per-monomial integer gap above the dominance anchor.
fn integer_gaps(
    mons: &[MonomialData],
    p: &BigRational,
    sigma: i64,
) -> Result<Vec<i64>, SeriesError> {
    let exps: Vec<BigRational> = mons.iter().map(|m| m.exponent_at(p)).collect();
    let anchor = if sigma > 0 {
        exps.iter().min().unwrap().clone()
    } else {
        exps.iter().max().unwrap().clone()
    };
    mons.iter()
        .zip(&exps)
        .map(|(m, e)| {
            let gap = (e - &anchor) * rat_int(sigma);
            as_i64(&gap).ok_or_else(|| SeriesError::IncommensurateGap {
                gap: gap.to_string(),
                monomial: format!("{:?}", m.mono),
            })
        })
        .collect()
}

/// Residual coefficient of `delta` on the truncated series at one level,
/// affine in the coefficient `unknown` (when set).
fn level_coefficient(
    mons: &[MonomialData],
    gaps: &[i64],
    p: &BigRational,
    sigma: i64,
    coeffs: &[Option<BigRational>],
    level: i64,
    unknown: Option<usize>,
) -> Affine {
    let mut total = Affine::zero();
    for (m, &gap) in mons.iter().zip(gaps) {
        let bound = level - gap;
        if bound < 0 {
            continue;
        }
        let bound = bound as usize;
        // convolved product over the series jets of this monomial, truncated
        // at coefficient-index sum `bound`
        let mut prod: Vec<Affine> = vec![Affine::zero(); bound + 1];
        prod[0] = Affine::known(BigRational::one());
        for (k, &e) in m.jet_exps.iter().enumerate() {
            for _ in 0..e {
                // jet factor: sum_j a_j [p + sigma j]_k x^(...)
                let mut jet: Vec<Affine> = Vec::with_capacity(bound + 1);
                for j in 0..=bound {
                    let fall = falling(&(p + rat_int(sigma * j as i64)), k);
                    let a = match coeffs.get(j) {
                        Some(Some(v)) => Affine::known(v * &fall),
                        _ if Some(j) == unknown => Affine::unknown(fall),
                        _ => Affine::zero(),
                    };
                    jet.push(a);
                }
                let mut next: Vec<Affine> = vec![Affine::zero(); bound + 1];
                for (i, a) in prod.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in jet.iter().enumerate() {
                        if i + j > bound {
                            break;
                        }
                        if b.is_zero() {
                            continue;
                        }
                        let v = a.mul(b);
                        next[i + j].add_assign(&v);
                    }
                }
                prod = next;
            }
        }
        total.add_assign(&prod[bound].scale(&m.coeff));
    }
    total
}

/// Builds the truncated series for a classified balance.
///
/// `free_values` supplies the constants of integration by coefficient index;
/// indices found resonant but not supplied default to 1. For an
/// arbitrary-coefficient balance the leading value is `free_values[0]`
/// (default 1).
pub fn build_series(
    delta: &JetPoly,
    balance: &Balance,
    direction: Direction,
    n: usize,
    free_values: &BTreeMap<usize, BigRational>,
) -> Result<PainleveSeries, SeriesError> {
    let sigma = match direction {
        Direction::Right => 1i64,
        Direction::Left => -1i64,
        Direction::Full => return Err(SeriesError::FullUnsupported),
    };
    let mons = monomial_data(delta);
    let gaps = integer_gaps(&mons, &balance.p, sigma)?;

    let mut coeffs: Vec<Option<BigRational>> = vec![None; n + 1];
    let mut free_indices = BTreeSet::new();
    match &balance.coeff {
        BalanceCoeff::Rational(c) => coeffs[0] = Some(c.clone()),
        BalanceCoeff::Arbitrary => {
            coeffs[0] = Some(
                free_values
                    .get(&0)
                    .cloned()
                    .unwrap_or_else(BigRational::one),
            );
            free_indices.insert(0);
        }
    }

    for level in 0..=(n as i64) {
        let idx = level as usize;
        let unknown = if idx >= 1 && coeffs[idx].is_none() {
            Some(idx)
        } else {
            None
        };
        let a = level_coefficient(&mons, &gaps, &balance.p, sigma, &coeffs, level, unknown);
        match unknown {
            None => {
                // no unknown at this level: the residual must vanish outright
                if !a.c.is_zero() {
                    return Err(SeriesError::Compatibility {
                        index: idx,
                        forcing: a.c.to_string(),
                    });
                }
            }
            Some(i) => {
                if a.t.is_zero() {
                    if !a.c.is_zero() {
                        return Err(SeriesError::Compatibility {
                            index: i,
                            forcing: a.c.to_string(),
                        });
                    }
                    coeffs[i] = Some(
                        free_values
                            .get(&i)
                            .cloned()
                            .unwrap_or_else(BigRational::one),
                    );
                    free_indices.insert(i);
                } else {
                    coeffs[i] = Some(-(a.c / a.t));
                }
            }
        }
    }

    Ok(PainleveSeries {
        direction,
        p: balance.p.clone(),
        coeffs: coeffs.into_iter().map(|c| c.unwrap()).collect(),
        free_indices,
        truncation: n,
    })
}

/// Substitutes the truncated series into `delta` exactly and locates the
/// first nonzero residual level. Returns `(all levels <= N vanish, first
/// nonzero level)`; the second component is `None` when the truncated series
/// happens to solve the equation exactly.
pub fn consistency_check(delta: &JetPoly, s: &PainleveSeries) -> (bool, Option<usize>) {
    let sigma = s.sigma();
    if sigma == 0 {
        return (false, Some(0));
    }
    let mons = monomial_data(delta);
    let gaps = match integer_gaps(&mons, &s.p, sigma) {
        Ok(g) => g,
        Err(_) => return (false, Some(0)),
    };
    let n = s.truncation;
    let coeffs: Vec<Option<BigRational>> = s.coeffs.iter().cloned().map(Some).collect();
    // the deepest level any truncated product can feed
    let max_degree = mons.iter().map(|m| m.degree).max().unwrap_or(0);
    let max_gap = gaps.iter().copied().max().unwrap_or(0);
    let max_level = max_gap + max_degree * n as i64;
    let mut first_nonzero: Option<usize> = None;
    for level in 0..=max_level {
        let a = level_coefficient(&mons, &gaps, &s.p, sigma, &coeffs, level, None);
        if !a.c.is_zero() {
            first_nonzero = Some(level as usize);
            break;
        }
    }
    match first_nonzero {
        Some(l) => (l > n, Some(l)),
        None => (true, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ars::find_balances;
    use crate::ars::resonance::{classify, resonances};
    use crate::jet::parse::parse_expr;
    use crate::rational::rat;

    fn poly(s: &str) -> JetPoly {
        parse_expr(s, "y").unwrap().as_poly().unwrap().clone()
    }

    fn chazy() -> JetPoly {
        poly("y''' - 2*y*y'' + 3*y'^2")
    }

    fn build_chazy_left(n: usize) -> PainleveSeries {
        let d = chazy();
        let b = &find_balances(&d)[0];
        let r = resonances(&d, b).unwrap();
        let dir = classify(&r).unwrap();
        assert_eq!(dir, Direction::Left);
        build_series(&d, b, dir, n, &BTreeMap::new()).unwrap()
    }

    /// Independent oracle for the Chazy Left recurrence, written directly
    /// from the convolution form of the residual at index n:
    /// `-a_n (n+1)(n+2)(n+3) + sum_{i+j=n} a_i a_j [ -2(1+j)(2+j) + 3(1+i)(1+j) ] = 0`.
    fn chazy_left_oracle(n_max: usize, free: &[(usize, i64)]) -> Vec<BigRational> {
        let mut a: Vec<Option<BigRational>> = vec![None; n_max + 1];
        a[0] = Some(rat(-6, 1));
        let freemap: BTreeMap<usize, i64> = free.iter().cloned().collect();
        for n in 1..=n_max {
            let mut alpha = -rat_int(((n + 1) * (n + 2) * (n + 3)) as i64);
            let mut forcing = BigRational::zero();
            for i in 0..=n {
                let j = n - i;
                let w = rat_int(-2 * ((1 + j as i64) * (2 + j as i64)))
                    + rat_int(3 * (1 + i as i64) * (1 + j as i64));
                if i == n || j == n {
                    // a_n-linear contributions pair with a_0
                    if n != 0 {
                        alpha += a[0].clone().unwrap() * w;
                    }
                } else {
                    forcing += a[i].clone().unwrap() * a[j].clone().unwrap() * w;
                }
            }
            if alpha.is_zero() {
                assert!(forcing.is_zero(), "oracle compatibility at {n}");
                a[n] = Some(rat_int(*freemap.get(&n).unwrap_or(&1)));
            } else {
                a[n] = Some(-(forcing / alpha));
            }
        }
        a.into_iter().map(|v| v.unwrap()).collect()
    }

    #[test]
    fn chazy_left_series_against_independent_recurrence() {
        let s = build_chazy_left(12);
        let oracle = chazy_left_oracle(12, &[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(s.coeffs, oracle);
        assert_eq!(
            s.free_indices,
            BTreeSet::from([1usize, 2, 3]),
            "all three resonances carry free constants"
        );
    }

    #[test]
    fn chazy_left_series_frozen_values() {
        // frozen from the independent symbolic solve with a1 = a2 = a3 = 1
        let s = build_chazy_left(8);
        assert_eq!(s.coeffs[0], rat(-6, 1));
        assert_eq!(s.coeffs[4], rat(-1, 6));
        assert_eq!(s.coeffs[5], rat(5, 12));
        assert_eq!(s.coeffs[6], rat(-1, 20));
        assert_eq!(s.coeffs[7], rat(-1, 90));
        assert_eq!(s.coeffs[8], rat(17, 360));
    }

    #[test]
    fn chazy_consistency_and_perturbation() {
        let d = chazy();
        let s = build_chazy_left(6);
        let (ok, low) = consistency_check(&d, &s);
        assert!(ok);
        assert!(low.unwrap() >= 7);
        // perturbing a determined coefficient breaks consistency exactly there
        for idx in [4usize, 5, 6] {
            let mut bad = s.clone();
            bad.coeffs[idx] += rat(1, 7);
            let (ok, low) = consistency_check(&d, &bad);
            assert!(!ok);
            assert_eq!(low, Some(idx));
        }
    }

    #[test]
    fn series_determinism() {
        let a = build_chazy_left(8);
        let b = build_chazy_left(8);
        assert_eq!(a, b);
    }

    #[test]
    fn custom_free_values() {
        let d = chazy();
        let b = &find_balances(&d)[0];
        let mut fv = BTreeMap::new();
        fv.insert(1usize, rat(2, 1));
        fv.insert(2usize, rat(0, 1));
        let s = build_series(&d, b, Direction::Left, 6, &fv).unwrap();
        assert_eq!(s.coeffs[1], rat(2, 1));
        assert_eq!(s.coeffs[2], rat(0, 1));
        assert_eq!(s.coeffs[3], rat(1, 1)); // unsupplied free index defaults to 1
        let oracle = chazy_left_oracle(6, &[(1, 2), (2, 0), (3, 1)]);
        assert_eq!(s.coeffs, oracle);
        let (ok, _) = consistency_check(&d, &s);
        assert!(ok);
    }

    #[test]
    fn w_equation_right_series() {
        let w = poly("y^2*y''' - 6*y*y'*y'' + 6*y'^3 - 2*y*y'' + y'^2");
        let b = &find_balances(&w)[0];
        let s = build_series(&w, b, Direction::Right, 7, &BTreeMap::new()).unwrap();
        assert_eq!(s.free_indices, BTreeSet::from([0usize, 1]));
        // frozen from the independent symbolic solve with w0 = w1 = 1
        assert_eq!(s.coeffs[2], rat(3, 2));
        assert_eq!(s.coeffs[3], rat(5, 3));
        assert_eq!(s.coeffs[4], rat(13, 6));
        assert_eq!(s.coeffs[5], rat(8, 3));
        assert_eq!(s.coeffs[6], rat(95, 28));
        assert_eq!(s.coeffs[7], rat(17, 4));
        let (ok, low) = consistency_check(&w, &s);
        assert!(ok);
        assert!(low.unwrap() >= 8);
    }

    #[test]
    fn w_equation_left_branch_fails_compatibility() {
        let w = poly("y^2*y''' - 6*y*y'*y'' + 6*y'^3 - 2*y*y'' + y'^2");
        let b = &find_balances(&w)[1]; // p = -2
        let err = build_series(&w, b, Direction::Left, 6, &BTreeMap::new()).unwrap_err();
        match err {
            SeriesError::Compatibility { index, forcing } => {
                assert_eq!(index, 0);
                assert_eq!(forcing, "-8"); // -8 c0^2 with c0 = 1
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn painleve_ince_series_both_branches() {
        let d = poly("y'' + 3*y*y' + y^3");
        let bals = find_balances(&d);
        // a = 1, Right: free index 1; with b1 = 1 the tail alternates sign
        let s1 = build_series(&d, &bals[0], Direction::Right, 6, &BTreeMap::new()).unwrap();
        assert_eq!(s1.free_indices, BTreeSet::from([1usize]));
        for i in 1..=6 {
            let expect = if i % 2 == 1 { rat(1, 1) } else { rat(-1, 1) };
            assert_eq!(s1.coeffs[i], expect, "index {i}");
        }
        assert!(consistency_check(&d, &s1).0);
        // a = 2, Left: free indices 1 and 2; with a1 = a2 = 1 all ones
        let s2 = build_series(&d, &bals[1], Direction::Left, 6, &BTreeMap::new()).unwrap();
        assert_eq!(s2.free_indices, BTreeSet::from([1usize, 2]));
        assert!(s2.coeffs.iter().skip(1).all(|c| c == &rat(1, 1)));
        assert!(consistency_check(&d, &s2).0);
    }

    #[test]
    fn raised_equation_left_series_is_banded_with_one_free_constant() {
        // the raised third-order equation has monomials above the balance
        // exponent, so the Left recurrence is banded: levels 0 and 1 vanish
        // identically, a1 stays free, and every later coefficient is
        // determined (a_i = (-1)^{i+1} a1^i / 6^{i-1} for a1 = 1)
        let eq = crate::jet::parse::parse_expr_named(
            "Phi'^3*Phi''' + 2*Phi*Phi'^2*Phi''' + Phi^2*Phi'*Phi''' \
             - Phi^2*Phi''^2 - Phi*Phi'*Phi''^2 - 2*Phi^2*Phi'^2*Phi'' - 2*Phi*Phi'^3*Phi'' \
             - 4*Phi*Phi'^2*Phi'' - 4*Phi'^3*Phi'' + 3*Phi'^5 + 4*Phi*Phi'^4 + 6*Phi'^4",
            "s",
            "Phi",
        )
        .unwrap()
        .as_poly()
        .unwrap()
        .clone();
        let bals = find_balances(&eq);
        let b = bals
            .iter()
            .find(|b| b.coeff == crate::ars::BalanceCoeff::Rational(rat(-6, 1)))
            .unwrap();
        let s = build_series(&eq, b, Direction::Left, 8, &BTreeMap::new()).unwrap();
        assert_eq!(s.free_indices, BTreeSet::from([1usize]));
        let expect = [
            rat(-6, 1),
            rat(1, 1),
            rat(-1, 6),
            rat(1, 36),
            rat(-1, 216),
            rat(1, 1296),
            rat(-1, 7776),
            rat(1, 46656),
            rat(-1, 279936),
        ];
        assert_eq!(s.coeffs, expect);
        let (ok, low) = consistency_check(&eq, &s);
        assert!(ok);
        assert!(low.unwrap() >= 9);
    }

    #[test]
    fn full_direction_rejected() {
        let d = chazy();
        let b = &find_balances(&d)[0];
        assert!(matches!(
            build_series(&d, b, Direction::Full, 4, &BTreeMap::new()),
            Err(SeriesError::FullUnsupported)
        ));
    }
}
