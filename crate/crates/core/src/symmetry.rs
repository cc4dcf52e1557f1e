//! Lie point-symmetry verification by prolongation, Lie brackets and
//! structure constants of generator sets.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::jet::poly::{JetPoly, Monomial, Var};
use crate::jet::reduce::reduce_poly_mod_equation;
use crate::rational::BigRational;
use crate::JetError;

/// A point-symmetry generator `xi(x,u0) d/dx + eta(x,u0) d/du0`.
///
/// Both components are polynomials in the base variables only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    xi: JetPoly,
    eta: JetPoly,
}

impl VectorField {
    /// Builds a field, rejecting components that reference derivatives.
    pub fn new(xi: JetPoly, eta: JetPoly) -> Result<Self, JetError> {
        for (name, p) in [("xi", &xi), ("eta", &eta)] {
            if p.max_jet_order().is_some_and(|k| k >= 1) {
                return Err(JetError::UnsupportedReduction {
                    reason: format!("{name} references derivatives; point symmetries depend on x and the dependent variable only"),
                });
            }
        }
        Ok(VectorField { xi, eta })
    }

    pub fn xi(&self) -> &JetPoly {
        &self.xi
    }

    pub fn eta(&self) -> &JetPoly {
        &self.eta
    }

    /// Applies the field (as a first-order operator on base variables).
    fn apply_base(&self, f: &JetPoly) -> JetPoly {
        &(&self.xi * &f.partial(Var::X)) + &(&self.eta * &f.partial(Var::U(0)))
    }

    /// Linear combination `a*self + b*other`.
    pub fn combine(&self, a: &BigRational, other: &VectorField, b: &BigRational) -> VectorField {
        VectorField {
            xi: &self.xi.scale(a) + &other.xi.scale(b),
            eta: &self.eta.scale(a) + &other.eta.scale(b),
        }
    }
}

/// Prolongation coefficients `[eta^(1), ..., eta^(k)]` with
/// `eta^(j) = D_x(eta^(j-1)) - u_j D_x(xi)`.
///
/// Each coefficient is polynomial because `xi` and `eta` are.
pub fn prolong(field: &VectorField, k: usize) -> Vec<JetPoly> {
    assert!(k >= 1, "prolongation order must be >= 1");
    let dxi = field.xi.total_derivative_once();
    let mut out = Vec::with_capacity(k);
    let mut prev = field.eta.clone();
    for j in 1..=k {
        let uj = JetPoly::var(Var::U(j));
        let next = &prev.total_derivative_once() - &(&uj * &dxi);
        out.push(next.clone());
        prev = next;
    }
    out
}

/// Applies the prolonged field to `delta`:
/// `xi d/dx + eta d/du0 + sum_j eta^(j) d/du_j`, cleared to polynomial form.
pub fn apply_prolonged(field: &VectorField, delta: &JetPoly) -> JetPoly {
    let mut acc = field.apply_base(delta);
    if let Some(n) = delta.max_jet_order() {
        if n >= 1 {
            let etas = prolong(field, n);
            for (j, etaj) in etas.iter().enumerate() {
                acc = &acc + &(etaj * &delta.partial(Var::U(j + 1)));
            }
        }
    }
    acc
}

/// Symmetry verdict plus the reduced obstruction (zero on success).
#[derive(Debug, Clone)]
pub struct SymmetryCertificate {
    pub is_symmetry: bool,
    pub obstruction: crate::jet::RationalJetExpr,
}

/// Checks whether `field` generates a point symmetry of `delta = 0`:
/// the prolonged action must vanish modulo the equation.
pub fn is_symmetry(field: &VectorField, delta: &JetPoly) -> Result<SymmetryCertificate, JetError> {
    let action = apply_prolonged(field, delta);
    let reduced = reduce_poly_mod_equation(&action, delta)?;
    Ok(SymmetryCertificate {
        is_symmetry: reduced.is_zero(),
        obstruction: reduced,
    })
}

/// Lie bracket `[X, Y]` of two point fields.
pub fn lie_bracket(x: &VectorField, y: &VectorField) -> VectorField {
    VectorField {
        xi: &x.apply_base(&y.xi) - &y.apply_base(&x.xi),
        eta: &x.apply_base(&y.eta) - &y.apply_base(&x.eta),
    }
}

/// Decomposition of one bracket in the generator basis, or a flag that it
/// lies outside the span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BracketDecomposition {
    InSpan(Vec<BigRational>),
    NotInSpan,
}

/// Pairwise bracket table of a generator list with exact decompositions.
///
/// Only `i < j` pairs are stored; antisymmetry supplies the rest.
#[derive(Debug, Clone)]
pub struct StructureTable {
    pub generators: Vec<VectorField>,
    pub brackets: Vec<((usize, usize), VectorField, BracketDecomposition)>,
}

impl StructureTable {
    /// True iff every bracket decomposes in the span of the generators.
    pub fn is_closed(&self) -> bool {
        self.brackets
            .iter()
            .all(|(_, _, d)| matches!(d, BracketDecomposition::InSpan(_)))
    }
}

/// Computes all pairwise brackets of `gens` and decomposes each exactly in
/// the span of `gens` by solving a rational linear system monomial by
/// monomial over the stacked (xi, eta) coefficient vectors.
pub fn structure_constants(gens: &[VectorField]) -> StructureTable {
    assert!(!gens.is_empty(), "generator list must be nonempty");
    let mut brackets = Vec::new();
    for i in 0..gens.len() {
        for j in (i + 1)..gens.len() {
            let b = lie_bracket(&gens[i], &gens[j]);
            let dec = decompose(&b, gens);
            brackets.push(((i, j), b, dec));
        }
    }
    StructureTable {
        generators: gens.to_vec(),
        brackets,
    }
}

fn decompose(target: &VectorField, basis: &[VectorField]) -> BracketDecomposition {
    // collect the monomial support of both components across all fields
    let mut xi_monos: BTreeSet<Monomial> = BTreeSet::new();
    let mut eta_monos: BTreeSet<Monomial> = BTreeSet::new();
    for f in basis.iter().chain(std::iter::once(target)) {
        xi_monos.extend(f.xi.terms().map(|(m, _)| m.clone()));
        eta_monos.extend(f.eta.terms().map(|(m, _)| m.clone()));
    }
    let rows: Vec<(bool, &Monomial)> = xi_monos
        .iter()
        .map(|m| (true, m))
        .chain(eta_monos.iter().map(|m| (false, m)))
        .collect();
    let mut matrix: Vec<Vec<BigRational>> = Vec::with_capacity(rows.len());
    let mut rhs: Vec<BigRational> = Vec::with_capacity(rows.len());
    for (is_xi, m) in &rows {
        let row: Vec<BigRational> = basis
            .iter()
            .map(|f| {
                if *is_xi {
                    f.xi.coeff(m)
                } else {
                    f.eta.coeff(m)
                }
            })
            .collect();
        rhs.push(if *is_xi {
            target.xi.coeff(m)
        } else {
            target.eta.coeff(m)
        });
        matrix.push(row);
    }
    match solve_rational(matrix, rhs, basis.len()) {
        Some(c) => BracketDecomposition::InSpan(c),
        None => BracketDecomposition::NotInSpan,
    }
}

/// Gaussian elimination over the rationals; returns one exact solution of
/// `matrix * c = rhs` (free variables set to zero) or `None` when
/// inconsistent.
fn solve_rational(
    mut matrix: Vec<Vec<BigRational>>,
    mut rhs: Vec<BigRational>,
    ncols: usize,
) -> Option<Vec<BigRational>> {
    let nrows = matrix.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, p);
        rhs.swap(row, p);
        let inv = BigRational::new(1.into(), 1.into()) / matrix[row][col].clone();
        for v in matrix[row][col..ncols].iter_mut() {
            *v = &*v * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
        for r in 0..nrows {
            if r != row && !matrix[r][col].is_zero() {
                let f = matrix[r][col].clone();
                let pivot_row: Vec<BigRational> = matrix[row][col..ncols].to_vec();
                for (v, pv) in matrix[r][col..ncols].iter_mut().zip(&pivot_row) {
                    let sub = pv * &f;
                    *v = &*v - &sub;
                }
                let sub = &rhs[row] * &f;
                rhs[r] = &rhs[r] - &sub;
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // inconsistent if a zero row has a nonzero rhs
    for r in row..nrows {
        if matrix[r].iter().all(|v| v.is_zero()) && !rhs[r].is_zero() {
            return None;
        }
    }
    // also check rows beyond the pivot sweep (rows < row are pivot rows)
    for r in 0..nrows {
        if matrix[r].iter().all(|v| v.is_zero()) && !rhs[r].is_zero() {
            return None;
        }
    }
    let mut sol = vec![BigRational::zero(); ncols];
    for (col, pv) in pivot_of_col.iter().enumerate() {
        if let Some(r) = pv {
            sol[col] = rhs[*r].clone();
        }
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::parse::parse_expr;
    use crate::rational::{rat, rat_int};

    fn poly(s: &str) -> JetPoly {
        parse_expr(s, "y").unwrap().as_poly().unwrap().clone()
    }

    fn chazy() -> JetPoly {
        poly("y''' - 2*y*y'' + 3*y'^2")
    }

    fn x1() -> VectorField {
        VectorField::new(poly("1"), poly("0")).unwrap()
    }

    fn x2() -> VectorField {
        VectorField::new(poly("x"), poly("-y")).unwrap()
    }

    fn x3() -> VectorField {
        VectorField::new(poly("x^2"), poly("-2*x*y - 6")).unwrap()
    }

    #[test]
    fn rejects_derivative_components() {
        assert!(VectorField::new(poly("y'"), poly("0")).is_err());
    }

    #[test]
    fn prolongation_values() {
        // X1: all prolongation coefficients vanish
        assert!(prolong(&x1(), 3).iter().all(|p| p.is_zero()));
        // X2: eta^(1) = -2 u1
        let e = prolong(&x2(), 1);
        assert_eq!(e[0], poly("-2*y'"));
        // X3: eta^(1) = -2 u0 - 4 x u1
        let e = prolong(&x3(), 1);
        assert_eq!(e[0], poly("-2*y - 4*x*y'"));
    }

    #[test]
    fn prolonged_action_on_chazy() {
        // X1 annihilates the autonomous equation outright
        assert!(apply_prolonged(&x1(), &chazy()).is_zero());
        // X2 scales it by -4
        assert_eq!(apply_prolonged(&x2(), &chazy()), chazy().scale(&rat(-4, 1)));
        // the dilation u0 d/du0 is not a symmetry: nonzero off-shell action
        let dil = VectorField::new(poly("0"), poly("y")).unwrap();
        assert!(!apply_prolonged(&dil, &chazy()).is_zero());
    }

    #[test]
    fn symmetry_verdicts() {
        for f in [x1(), x2(), x3()] {
            let cert = is_symmetry(&f, &chazy()).unwrap();
            assert!(
                cert.is_symmetry,
                "expected symmetry, got {:?}",
                cert.obstruction
            );
        }
        let dil = VectorField::new(poly("0"), poly("y")).unwrap();
        let cert = is_symmetry(&dil, &chazy()).unwrap();
        assert!(!cert.is_symmetry);
        assert!(!cert.obstruction.is_zero());
    }

    #[test]
    fn sl2_brackets() {
        assert_eq!(lie_bracket(&x1(), &x2()), x1());
        assert_eq!(
            lie_bracket(&x1(), &x3()),
            x2().combine(&rat_int(2), &x2(), &rat_int(0))
        );
        assert_eq!(lie_bracket(&x2(), &x3()), x3());
    }

    #[test]
    fn sl2_structure_table() {
        let t = structure_constants(&[x1(), x2(), x3()]);
        assert!(t.is_closed());
        let coeffs: Vec<_> = t
            .brackets
            .iter()
            .map(|(ij, _, d)| (*ij, d.clone()))
            .collect();
        assert_eq!(
            coeffs[0],
            (
                (0, 1),
                BracketDecomposition::InSpan(vec![rat_int(1), rat_int(0), rat_int(0)])
            )
        );
        assert_eq!(
            coeffs[1],
            (
                (0, 2),
                BracketDecomposition::InSpan(vec![rat_int(0), rat_int(2), rat_int(0)])
            )
        );
        assert_eq!(
            coeffs[2],
            (
                (1, 2),
                BracketDecomposition::InSpan(vec![rat_int(0), rat_int(0), rat_int(1)])
            )
        );
    }

    #[test]
    fn single_generator_trivially_closed() {
        let t = structure_constants(&[x1()]);
        assert!(t.brackets.is_empty());
        assert!(t.is_closed());
    }

    #[test]
    fn commuting_pair() {
        // [d/dx, u0 d/du0] = 0, which decomposes with zero coefficients
        let dil = VectorField::new(poly("0"), poly("y")).unwrap();
        let t = structure_constants(&[x1(), dil]);
        assert!(t.is_closed());
        let (_, b, d) = &t.brackets[0];
        assert!(b.xi().is_zero() && b.eta().is_zero());
        assert_eq!(
            d,
            &BracketDecomposition::InSpan(vec![rat_int(0), rat_int(0)])
        );
    }

    #[test]
    fn out_of_span_flagged() {
        // [X2, X3] = X3 is outside span{X1, X2}
        let b = lie_bracket(&x2(), &x3());
        let t = structure_constants(&[x1(), x2()]);
        assert!(t.is_closed()); // [X1,X2]=X1 is fine
        let dec = decompose(&b, &[x1(), x2()]);
        assert_eq!(dec, BracketDecomposition::NotInSpan);
    }

    #[test]
    fn symmetry_of_differential_consequences() {
        // obstruction of a symmetry on D_x^m(delta) also reduces to zero mod delta
        let d = chazy();
        for f in [x1(), x2(), x3()] {
            for m in 1..=2 {
                let dm = d.total_derivative(m);
                let action = apply_prolonged(&f, &dm);
                let r = reduce_poly_mod_equation(&action, &d).unwrap();
                assert!(r.is_zero(), "m={m}");
            }
        }
    }
}
