//! Reduction of jet expressions modulo an equation solved for its highest
//! derivative ("on solutions of" checks).

use std::collections::BTreeMap;

use super::expr::{substitute_rational, RationalJetExpr};
use super::poly::{JetPoly, Var};
use crate::JetError;

/// Solves `eq = 0` for its top jet variable `u_n`, requiring `eq` to be
/// linear in `u_n`. Returns `(n, solution)` with the solution free of any
/// variable of index >= n.
pub fn solve_top(eq: &JetPoly) -> Result<(usize, RationalJetExpr), JetError> {
    let n = eq.max_jet_order().ok_or(JetError::UnsupportedReduction {
        reason: "equation has no jet variables".to_string(),
    })?;
    let top = Var::U(n);
    // split eq = a*u_n + b
    let mut a = JetPoly::zero();
    let mut b = JetPoly::zero();
    for (m, c) in eq.terms() {
        match m.exp(top) {
            0 => b.add_term(m.clone(), c.clone()),
            1 => {
                let rest = m
                    .checked_div(&super::poly::Monomial::var(top))
                    .expect("exponent 1");
                a.add_term(rest, c.clone());
            }
            _ => {
                return Err(JetError::UnsupportedReduction {
                    reason: format!("equation is not linear in its top variable u{n}"),
                })
            }
        }
    }
    if a.is_zero() {
        return Err(JetError::UnsupportedReduction {
            reason: format!("top variable u{n} has zero coefficient"),
        });
    }
    let sol = RationalJetExpr::new(b.scale(&crate::rational::rat_int(-1)), a)?;
    Ok((n, sol))
}

/// Reduces `e` modulo `eq = 0`: eliminates every jet variable of index >= n
/// (n = the order of `eq`) using the solved relation and its total
/// derivatives. The result is zero iff `e` vanishes on the solution manifold
/// of `eq` within this rational reduction.
pub fn reduce_mod_equation(e: &RationalJetExpr, eq: &JetPoly) -> Result<RationalJetExpr, JetError> {
    let (n, sol) = solve_top(eq)?;
    let top_in_e = match e.max_jet_order() {
        Some(k) if k >= n => k,
        _ => return Ok(e.clone()),
    };
    // rels[m] expresses u_{n+m} in variables of index < n
    let mut rels: Vec<RationalJetExpr> = vec![sol.clone()];
    let mut base_binding = BTreeMap::new();
    base_binding.insert(Var::U(n), sol.clone());
    for m in 1..=(top_in_e - n) {
        let d = rels[m - 1].total_derivative_once();
        // the derivative raises the index by one; eliminate the reappearing u_n
        let d = substitute_rational(&d, &base_binding)?;
        rels.push(d);
    }
    let mut bindings = BTreeMap::new();
    for (m, rel) in rels.into_iter().enumerate() {
        bindings.insert(Var::U(n + m), rel);
    }
    substitute_rational(e, &bindings)
}

/// Convenience wrapper for polynomial inputs.
pub fn reduce_poly_mod_equation(e: &JetPoly, eq: &JetPoly) -> Result<RationalJetExpr, JetError> {
    reduce_mod_equation(&RationalJetExpr::from_poly(e.clone()), eq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::parse::parse_expr;
    use crate::rational::rat;

    fn chazy() -> JetPoly {
        parse_expr("y''' - 2*y*y'' + 3*y'^2", "y")
            .unwrap()
            .as_poly()
            .unwrap()
            .clone()
    }

    #[test]
    fn self_reduction_is_zero() {
        let d = chazy();
        let r = reduce_poly_mod_equation(&d, &d).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn single_substitution() {
        // u3 + 1 mod Chazy -> 2 u0 u2 - 3 u1^2 + 1
        let d = chazy();
        let e = parse_expr("y''' + 1", "y")
            .unwrap()
            .as_poly()
            .unwrap()
            .clone();
        let r = reduce_poly_mod_equation(&e, &d).unwrap();
        let expect = parse_expr("2*y*y'' - 3*y'^2 + 1", "y")
            .unwrap()
            .as_poly()
            .unwrap()
            .clone();
        assert!(r.is_polynomial());
        assert_eq!(r.num(), &expect);
    }

    #[test]
    fn differential_consequence_vanishes() {
        let d = chazy();
        let e = d.total_derivative(1);
        let r = reduce_poly_mod_equation(&e, &d).unwrap();
        assert!(r.is_zero());
        let e2 = d.total_derivative(2);
        assert!(reduce_poly_mod_equation(&e2, &d).unwrap().is_zero());
    }

    #[test]
    fn nonconstant_top_coefficient() {
        // w w'' + w'^2 - 2x w' + 3w: top coefficient is u0
        let eq = parse_expr("y*y'' + y'^2 - 2*x*y' + 3*y", "y")
            .unwrap()
            .as_poly()
            .unwrap()
            .clone();
        let (n, sol) = solve_top(&eq).unwrap();
        assert_eq!(n, 2);
        assert_eq!(sol.den(), &JetPoly::var(Var::U(0)));
        // a differential consequence still reduces to zero
        let e = eq.total_derivative(1);
        assert!(reduce_poly_mod_equation(&e, &eq).unwrap().is_zero());
    }

    #[test]
    fn nonlinear_top_rejected() {
        let eq = parse_expr("y''^2 - y", "y")
            .unwrap()
            .as_poly()
            .unwrap()
            .clone();
        assert!(matches!(
            reduce_poly_mod_equation(&eq, &eq),
            Err(JetError::UnsupportedReduction { .. })
        ));
    }

    #[test]
    fn combination_of_consequences_vanishes() {
        let d = chazy();
        let q = parse_expr("x*y' - 2", "y")
            .unwrap()
            .as_poly()
            .unwrap()
            .clone();
        let mut e = &q * &d;
        e = &e + &d.total_derivative(1).scale(&rat(3, 2));
        e = &e - &d.total_derivative(2).scale(&rat(5, 7));
        assert!(reduce_poly_mod_equation(&e, &d).unwrap().is_zero());
    }
}
