//! Mechanical variable changes: dependent-variable inversion, the
//! hodograph-type order raise, and verification that reduced equations
//! follow from the originals under stated invariants.

use std::collections::BTreeMap;

use crate::jet::expr::{substitute, RationalJetExpr};
use crate::jet::poly::{JetPoly, Monomial, Var};
use crate::jet::reduce::reduce_mod_equation;
use crate::rational::BigRational;
use crate::JetError;

/// A pair of invariants defining a reduction: the new independent and
/// dependent variables as (rational) jet expressions in the old ones.
#[derive(Debug, Clone)]
pub struct InvariantPair {
    pub r_expr: RationalJetExpr,
    pub w_expr: RationalJetExpr,
    pub labels: (String, String),
}

impl InvariantPair {
    pub fn new(
        r_expr: RationalJetExpr,
        w_expr: RationalJetExpr,
        labels: (String, String),
    ) -> Result<Self, JetError> {
        if r_expr.total_derivative_once().is_zero() {
            return Err(JetError::UnsupportedReduction {
                reason: "the new independent variable has identically zero total derivative"
                    .to_string(),
            });
        }
        Ok(InvariantPair {
            r_expr,
            w_expr,
            labels,
        })
    }
}

/// Rewrites `delta = 0` under `u -> 1/v`: binds every jet variable to the
/// corresponding total derivative of `1/v0`, substitutes, clears the
/// denominator and normalizes (integer content 1, positive leading
/// coefficient).
pub fn invert_dependent(delta: &JetPoly) -> Result<JetPoly, JetError> {
    let order = delta.max_jet_order().unwrap_or(0);
    if order > 4 {
        return Err(JetError::UnsupportedReduction {
            reason: format!("dependent-variable inversion supports order <= 4, got {order}"),
        });
    }
    let inv = RationalJetExpr::new(JetPoly::from_int(1), JetPoly::var(Var::U(0)))?;
    let mut bindings = BTreeMap::new();
    let mut jet = inv;
    bindings.insert(Var::U(0), jet.clone());
    for k in 1..=order {
        jet = jet.total_derivative_once();
        bindings.insert(Var::U(k), jet.clone());
    }
    let substituted = substitute(delta, &bindings)?;
    let (num, _) = crate::jet::expr::clear_denominators(&substituted);
    Ok(num)
}

/// Raises a second-order equation in `psi(chi)` (chi stored in the x slot)
/// to an autonomous third-order equation in `Phi(s)` via `chi = Phi`,
/// `psi = dPhi/ds` and the chain rule `d/dchi = (1/Phi') d/ds`.
pub fn hodograph_raise(delta: &JetPoly) -> Result<JetPoly, JetError> {
    if !matches!(delta.max_jet_order(), Some(1) | Some(2)) {
        return Err(JetError::UnsupportedReduction {
            reason: "hodograph order raise expects an input of order 1 or 2".to_string(),
        });
    }
    let v = |k| JetPoly::var(Var::U(k));
    let mut bindings = BTreeMap::new();
    // chi -> Phi, psi -> Phi', psi' -> Phi''/Phi', psi'' -> (Phi''' Phi' - Phi''^2)/Phi'^3
    bindings.insert(Var::X, RationalJetExpr::from_poly(v(0)));
    bindings.insert(Var::U(0), RationalJetExpr::from_poly(v(1)));
    bindings.insert(Var::U(1), RationalJetExpr::new(v(2), v(1))?);
    bindings.insert(
        Var::U(2),
        RationalJetExpr::new(&(&v(3) * &v(1)) - &v(2).pow(2), v(1).pow(3))?,
    );
    let substituted = substitute(delta, &bindings)?;
    let (num, _) = crate::jet::expr::clear_denominators(&substituted);
    Ok(num)
}

/// Residual of `delta_reduced` under the invariants, reduced modulo
/// `delta_orig`. True iff the reduction identity holds exactly; the second
/// component is the reduced expression (the certificate).
pub fn reduction_residual(
    delta_orig: &JetPoly,
    inv: &InvariantPair,
    delta_reduced: &JetPoly,
) -> Result<(bool, RationalJetExpr), JetError> {
    let dr = inv.r_expr.total_derivative_once();
    if dr.is_zero() {
        return Err(JetError::ZeroDenominator);
    }
    let dw = inv.w_expr.total_derivative_once();
    let dwdr = dw.div(&dr)?;
    let order = delta_reduced.max_jet_order().unwrap_or(0);

    let mut bindings = BTreeMap::new();
    bindings.insert(Var::X, inv.r_expr.clone());
    bindings.insert(Var::U(0), inv.w_expr.clone());
    let mut current = dwdr;
    for k in 1..=order {
        bindings.insert(Var::U(k), current.clone());
        if k < order {
            current = current.total_derivative_once().div(&dr)?;
        }
    }
    let substituted = crate::jet::expr::substitute(delta_reduced, &bindings)?;
    let (num, _den) = crate::jet::expr::clear_denominators(&substituted);
    let reduced = reduce_mod_equation(&RationalJetExpr::from_poly(num), delta_orig)?;
    Ok((reduced.is_zero(), reduced))
}

/// One row of a monomial-level diff between two (normalized) polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialDiff {
    pub monomial: Monomial,
    pub left: BigRational,
    pub right: BigRational,
}

/// Monomial-by-monomial diff of the normalized forms of two polynomials.
/// Empty iff they agree up to overall sign and content.
pub fn monomial_diff(left: &JetPoly, right: &JetPoly) -> Vec<MonomialDiff> {
    let (ln, _) = left.normalized();
    let (rn, _) = right.normalized();
    let mut monos: Vec<Monomial> = ln.terms().map(|(m, _)| m.clone()).collect();
    for (m, _) in rn.terms() {
        if !monos.contains(m) {
            monos.push(m.clone());
        }
    }
    monos.sort();
    monos.reverse();
    monos
        .into_iter()
        .filter_map(|m| {
            let l = ln.coeff(&m);
            let r = rn.coeff(&m);
            if l != r {
                Some(MonomialDiff {
                    monomial: m,
                    left: l,
                    right: r,
                })
            } else {
                None
            }
        })
        .collect()
}
