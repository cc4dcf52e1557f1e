//! The ARS singularity algorithm: dominant-balance search, resonance
//! polynomials, series classification, coefficient recurrences with
//! compatibility checks, and truncation consistency.

pub mod analyze;
pub mod report;
pub mod resonance;
pub mod series;
pub mod univariate;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::jet::poly::{JetPoly, Monomial, Var};
use crate::rational::{falling, BigRational};

pub use analyze::{
    analyze, analyze_with, AnalysisReport, BranchFailure, BranchOutcome, FailureStage,
};
pub use report::{BalanceEntry, ReportDoc};
pub use resonance::{classify, resonances, Direction, ResonanceResult};
pub use series::{build_series, consistency_check, PainleveSeries, SeriesError};

/// Errors of the ARS layer.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ArsError {
    #[error("equation is identically zero")]
    ZeroEquation,
    #[error(
        "equation depends on x explicitly; the singularity path handles autonomous equations only"
    )]
    NonAutonomous,
    #[error("resonance polynomial is identically zero (degenerate balance)")]
    DegenerateResonance,
    #[error("resonance roots depend on the arbitrary leading coefficient")]
    CoefficientDependentResonances,
    #[error("m-linear dominant exponent disagrees with the balance")]
    InconsistentDominantExponent,
    #[error("classification refused: resonance polynomial has a non-rational factor")]
    NonRationalResonanceFactor,
    #[error("classification refused: non-integer rational resonance {root}")]
    NonIntegerResonance { root: String },
}

/// Leading-order coefficient of a balance: a concrete rational or free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BalanceCoeff {
    Rational(BigRational),
    Arbitrary,
}

/// A leading-order behaviour `u ~ c x^p` of the equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Balance {
    /// Leading exponent.
    pub p: BigRational,
    /// Leading coefficient (or arbitrary when the balance polynomial
    /// vanishes identically).
    pub coeff: BalanceCoeff,
    /// Monomials attaining the common minimal exponent.
    pub dominant_terms: BTreeSet<Monomial>,
    /// Degree in `c` of the coefficient-balance polynomial.
    pub degree_in_coeff: usize,
}

/// One monomial of the input with its substitution bookkeeping.
#[derive(Debug, Clone)]
pub(crate) struct MonomialData {
    pub mono: Monomial,
    pub coeff: BigRational,
    /// Exponent of x.
    pub x_exp: i64,
    /// Jet exponents `e_k`.
    pub jet_exps: Vec<u16>,
    /// Total u-degree `d = sum e_k`.
    pub degree: i64,
    /// Weight `w = sum k e_k`.
    pub weight: i64,
}

impl MonomialData {
    /// Exponent of x after substituting `u = c x^p`.
    pub fn exponent_at(&self, p: &BigRational) -> BigRational {
        BigRational::from_integer(self.x_exp.into())
            + BigRational::from_integer(self.degree.into()) * p
            - BigRational::from_integer(self.weight.into())
    }

    /// `prod_k [p]_k^{e_k}`: the rational factor the substitution produces.
    pub fn gamma(&self, p: &BigRational) -> BigRational {
        let mut acc = BigRational::from_integer(1.into());
        for (k, &e) in self.jet_exps.iter().enumerate() {
            let f = falling(p, k);
            for _ in 0..e {
                acc *= f.clone();
            }
        }
        acc
    }
}

pub(crate) fn monomial_data(delta: &JetPoly) -> Vec<MonomialData> {
    let order = delta.max_jet_order().unwrap_or(0);
    delta
        .terms()
        .map(|(m, c)| {
            let mut jet_exps = vec![0u16; order + 1];
            let mut degree = 0i64;
            let mut weight = 0i64;
            for (v, e) in m.vars() {
                if let Var::U(k) = v {
                    jet_exps[k] = e;
                    degree += e as i64;
                    weight += (k as i64) * (e as i64);
                }
            }
            MonomialData {
                mono: m.clone(),
                coeff: c.clone(),
                x_exp: m.exp(Var::X) as i64,
                jet_exps,
                degree,
                weight,
            }
        })
        .collect()
}

/// Outcome of the balance search, with diagnostics for roots that were found
/// but not emitted (non-rational coefficient roots).
#[derive(Debug, Clone, Default)]
pub struct BalanceSearch {
    pub balances: Vec<Balance>,
    pub diagnostics: Vec<String>,
}

/// Finds the dominant balances `u ~ c x^p` of `delta`.
///
/// Candidate exponents come from pairwise crossings of the affine exponent
/// functions and from rational roots of each same-exponent group's
/// coefficient polynomial; for each candidate the coefficient-balance
/// polynomial in `c` is solved over the rationals. Only `p < 0` balances are
/// retained unless `widen` is set.
pub fn find_balances_with(delta: &JetPoly, widen: bool) -> BalanceSearch {
    let mut out = BalanceSearch::default();
    if delta.is_zero() {
        return out;
    }
    let mons = monomial_data(delta);
    // group monomials by their affine exponent function (slope d, intercept x_exp - w)
    let mut groups: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, m) in mons.iter().enumerate() {
        groups
            .entry((m.degree, m.x_exp - m.weight))
            .or_default()
            .push(i);
    }
    let keys: Vec<(i64, i64)> = groups.keys().cloned().collect();
    let mut candidates: BTreeSet<BigRational> = BTreeSet::new();
    for i in 0..keys.len() {
        for j in (i + 1)..keys.len() {
            let (d1, b1) = keys[i];
            let (d2, b2) = keys[j];
            if d1 != d2 {
                candidates.insert(BigRational::new((b2 - b1).into(), (d1 - d2).into()));
            }
        }
    }
    // degenerations: rational roots of each group's coefficient polynomial
    let pp = sp_falling_group_poly;
    for idxs in groups.values() {
        let g = pp(&mons, idxs);
        if !g.is_zero() {
            for r in g.rational_roots().roots {
                candidates.insert(r);
            }
        }
    }

    let mut balances = Vec::new();
    for p in candidates {
        if !widen && !p.is_negative() {
            continue;
        }
        let exps: Vec<BigRational> = mons.iter().map(|m| m.exponent_at(&p)).collect();
        let mu = exps.iter().min().expect("nonempty").clone();
        let dominant: Vec<usize> = (0..mons.len()).filter(|&i| exps[i] == mu).collect();
        if dominant.len() < 2 {
            // a single monomial cannot balance unless its own factor vanishes
            let only = dominant[0];
            if !mons[only].gamma(&p).is_zero() {
                continue;
            }
        }
        // balance polynomial in c: sum over dominant of coeff * gamma(p) * c^d
        let max_d = dominant
            .iter()
            .map(|&i| mons[i].degree as usize)
            .max()
            .unwrap_or(0);
        let mut bal = vec![BigRational::zero(); max_d + 1];
        for &i in &dominant {
            bal[mons[i].degree as usize] += mons[i].coeff.clone() * mons[i].gamma(&p);
        }
        let balpoly = univariate::UniPoly::from_coeffs(bal);
        let dominant_terms: BTreeSet<Monomial> =
            dominant.iter().map(|&i| mons[i].mono.clone()).collect();
        if balpoly.is_zero() {
            balances.push(Balance {
                p: p.clone(),
                coeff: BalanceCoeff::Arbitrary,
                dominant_terms,
                degree_in_coeff: max_d,
            });
            continue;
        }
        let degree = balpoly.degree();
        let ex = balpoly.rational_roots();
        if ex.residual_degree > 0 || ex.overflow {
            out.diagnostics.push(format!(
                "p = {p}: coefficient balance has a degree-{} factor without rational roots",
                ex.residual_degree
            ));
        }
        for c in ex.roots {
            if !c.is_zero() {
                balances.push(Balance {
                    p: p.clone(),
                    coeff: BalanceCoeff::Rational(c),
                    dominant_terms: dominant_terms.clone(),
                    degree_in_coeff: degree,
                });
            }
        }
    }
    // deterministic order: p descending, then coefficient ascending with
    // arbitrary last
    balances.sort_by(|a, b| {
        b.p.cmp(&a.p).then_with(|| match (&a.coeff, &b.coeff) {
            (BalanceCoeff::Rational(x), BalanceCoeff::Rational(y)) => x.cmp(y),
            (BalanceCoeff::Rational(_), BalanceCoeff::Arbitrary) => std::cmp::Ordering::Less,
            (BalanceCoeff::Arbitrary, BalanceCoeff::Rational(_)) => std::cmp::Ordering::Greater,
            (BalanceCoeff::Arbitrary, BalanceCoeff::Arbitrary) => std::cmp::Ordering::Equal,
        })
    });
    out.balances = balances;
    out
}

fn sp_falling_group_poly(mons: &[MonomialData], idxs: &[usize]) -> univariate::UniPoly {
    use univariate::UniPoly;
    let mut acc = UniPoly::zero();
    for &i in idxs {
        let m = &mons[i];
        let mut term = UniPoly::constant(m.coeff.clone());
        for (k, &e) in m.jet_exps.iter().enumerate() {
            for _ in 0..e {
                // falling factorial in p: p (p-1) ... (p-k+1)
                let mut f = UniPoly::constant(BigRational::from_integer(1.into()));
                for i2 in 0..k {
                    f = f.mul(&UniPoly::linear(BigRational::from_integer(
                        (-(i2 as i64)).into(),
                    )));
                }
                term = term.mul(&f);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// Balance search with the default `p < 0` filter.
pub fn find_balances(delta: &JetPoly) -> Vec<Balance> {
    find_balances_with(delta, false).balances
}
