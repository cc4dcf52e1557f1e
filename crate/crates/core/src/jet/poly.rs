//! Sparse exact polynomials on the jet space `(x, u0, u1, ..., uK)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::rational::{content, rat_int, rat_to_f64, BigRational};
use crate::JetError;

/// A variable of the jet space: the independent variable or a jet coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// The independent variable (slot 0).
    X,
    /// The k-th jet coordinate `u_k` (the k-th derivative of the dependent
    /// variable; `u_0` is the dependent variable itself).
    U(usize),
}

impl Var {
    fn slot(self) -> usize {
        match self {
            Var::X => 0,
            Var::U(k) => k + 1,
        }
    }

    fn from_slot(slot: usize) -> Var {
        if slot == 0 {
            Var::X
        } else {
            Var::U(slot - 1)
        }
    }
}

/// Exponent vector over the slots `[x, u0, u1, ...]`, trailing zeros trimmed.
///
/// Ordered by total degree, ties broken at the first differing slot scanning
/// from `x` upward with the *smaller* exponent winning (graded reverse
/// lexicographic for the variable order `x < u0 < u1 < ...`). This is the
/// canonical order used for printing and sign normalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    /// The constant monomial `1`.
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// A single variable to the first power.
    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    /// A single variable raised to a power.
    pub fn var_pow(v: Var, e: u16) -> Self {
        let mut m = Monomial(vec![0; v.slot() + 1]);
        m.0[v.slot()] = e;
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    /// Exponent of a variable.
    pub fn exp(&self, v: Var) -> u16 {
        self.0.get(v.slot()).copied().unwrap_or(0)
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Iterator over `(Var, exponent)` pairs with nonzero exponent.
    pub fn vars(&self) -> impl Iterator<Item = (Var, u16)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(slot, &e)| (Var::from_slot(slot), e))
    }

    /// True for the constant monomial.
    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of two monomials (exponents add).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0u16; n];
        for (i, &e) in self.0.iter().enumerate() {
            out[i] = out[i].checked_add(e).expect("monomial exponent overflow");
        }
        for (i, &e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_add(e).expect("monomial exponent overflow");
        }
        let mut m = Monomial(out);
        m.trim();
        m
    }

    /// Exact quotient if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, &e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_sub(e)?;
        }
        let mut m = Monomial(out);
        m.trim();
        Some(m)
    }

    /// Decrement the exponent of `v` by one (used by differentiation).
    fn dec(&self, v: Var) -> Monomial {
        let mut out = self.0.clone();
        out[v.slot()] -= 1;
        let mut m = Monomial(out);
        m.trim();
        m
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let n = self.0.len().max(other.0.len());
        for i in 0..n {
            let a = self.0.get(i).copied().unwrap_or(0);
            let b = other.0.get(i).copied().unwrap_or(0);
            match a.cmp(&b) {
                Ordering::Equal => {}
                // smaller exponent at the earliest differing slot wins
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }
}

/// Sparse multivariate polynomial in the jet variables over [`BigRational`].
///
/// Stored coefficients are never zero; two polynomials are equal iff their
/// term maps are equal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JetPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl JetPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        JetPoly::default()
    }

    /// A constant polynomial.
    pub fn constant(c: BigRational) -> Self {
        let mut p = JetPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    /// A machine-integer constant.
    pub fn from_int(n: i64) -> Self {
        Self::constant(rat_int(n))
    }

    /// A single variable.
    pub fn var(v: Var) -> Self {
        let mut p = JetPoly::zero();
        p.add_term(Monomial::var(v), BigRational::one());
        p
    }

    /// Adds `coeff * mono` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterator over `(monomial, coefficient)` in ascending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// The greatest monomial under the canonical order, if any.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Highest jet index appearing with positive exponent, if any.
    pub fn max_jet_order(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|m| m.vars())
            .filter_map(|(v, _)| match v {
                Var::U(k) => Some(k),
                Var::X => None,
            })
            .max()
    }

    /// Differential order: alias of [`Self::max_jet_order`].
    pub fn order(&self) -> Option<usize> {
        self.max_jet_order()
    }

    /// True iff the independent variable occurs explicitly.
    pub fn depends_on_x(&self) -> bool {
        self.terms.keys().any(|m| m.exp(Var::X) > 0)
    }

    /// Coefficient of a monomial (zero if absent).
    pub fn coeff(&self, mono: &Monomial) -> BigRational {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// The polynomial `self * coeff`.
    pub fn scale(&self, coeff: &BigRational) -> JetPoly {
        if coeff.is_zero() {
            return JetPoly::zero();
        }
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * coeff))
                .collect(),
        }
    }

    /// The polynomial `self * mono`.
    pub fn mul_monomial(&self, mono: &Monomial) -> JetPoly {
        JetPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    /// Integer power.
    pub fn pow(&self, e: u32) -> JetPoly {
        let mut acc = JetPoly::from_int(1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to one variable.
    pub fn partial(&self, v: Var) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e > 0 {
                out.add_term(m.dec(v), c * rat_int(e as i64));
            }
        }
        out
    }

    /// Total derivative `D_x = d/dx + sum_k u_{k+1} d/du_k` applied once.
    pub fn total_derivative_once(&self) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            for (v, e) in m.vars() {
                let base = m.dec(v);
                let coeff = c * rat_int(e as i64);
                match v {
                    Var::X => out.add_term(base, coeff),
                    Var::U(k) => out.add_term(base.mul(&Monomial::var(Var::U(k + 1))), coeff),
                }
            }
        }
        out
    }

    /// Total derivative applied `n >= 1` times.
    pub fn total_derivative(&self, n: usize) -> JetPoly {
        assert!(n >= 1, "total_derivative requires n >= 1");
        let mut out = self.total_derivative_once();
        for _ in 1..n {
            out = out.total_derivative_once();
        }
        out
    }

    /// Divides out rational content and flips the sign so the leading
    /// coefficient is positive; the result has integer coefficients with
    /// gcd 1. Zero stays zero. Returns the factor `f` with
    /// `self = f * normalized`.
    pub fn normalized(&self) -> (JetPoly, BigRational) {
        if self.is_zero() {
            return (JetPoly::zero(), BigRational::one());
        }
        let mut factor = content(self.terms.values());
        let lead = self.leading().expect("nonzero").1;
        if lead.is_negative() {
            factor = -factor;
        }
        let inv = BigRational::one() / factor.clone();
        (self.scale(&inv), factor)
    }

    /// Floating evaluation at a complex point. `jet[k]` binds `u_k`;
    /// every variable present must be bound.
    pub fn eval_complex(&self, x: Complex64, jet: &[Complex64]) -> Result<Complex64, JetError> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rat_to_f64(c), 0.0);
            for (v, e) in m.vars() {
                let base = match v {
                    Var::X => x,
                    Var::U(k) => *jet.get(k).ok_or(JetError::UnboundVariable {
                        var: format!("u{k}"),
                    })?,
                };
                t *= base.powi(e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Sum of the term magnitudes at a complex point: the natural scale
    /// against which a residual of this polynomial should be measured.
    pub fn eval_magnitude(&self, x: Complex64, jet: &[Complex64]) -> Result<f64, JetError> {
        let mut acc = 0.0f64;
        for (m, c) in &self.terms {
            let mut t = rat_to_f64(c).abs();
            for (v, e) in m.vars() {
                let base = match v {
                    Var::X => x,
                    Var::U(k) => *jet
                        .get(k)
                        .ok_or(JetError::UnboundVariable { var: format!("u{k}") })?,
                };
                t *= base.norm().powi(e as i32);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact rational evaluation; `jet[k]` binds `u_k`.
    pub fn eval_exact(
        &self,
        x: &BigRational,
        jet: &[BigRational],
    ) -> Result<BigRational, JetError> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                let base = match v {
                    Var::X => x.clone(),
                    Var::U(k) => jet.get(k).cloned().ok_or(JetError::UnboundVariable {
                        var: format!("u{k}"),
                    })?,
                };
                for _ in 0..e {
                    t *= base.clone();
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Renders one monomial with the given variable names (no coefficient).
    pub fn monomial_string(mono: &Monomial, indep: &str, dep: &str) -> String {
        if mono.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (v, e) in mono.vars() {
            let name = match v {
                Var::X => indep.to_string(),
                Var::U(k) => format!("{}{}", dep, "'".repeat(k)),
            };
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        parts.join("*")
    }

    /// Canonical rendering: terms in descending canonical order, dependent
    /// variable written with primes. The output re-parses to the same
    /// polynomial.
    pub fn render(&self, indep: &str, dep: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let ms = Self::monomial_string(m, indep, dep);
            if m.is_one() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&ms);
            } else {
                out.push_str(&format!("{mag}*{ms}"));
            }
        }
        out
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x", "u"))
    }
}

impl Add for &JetPoly {
    type Output = JetPoly;
    fn add(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &JetPoly {
    type Output = JetPoly;
    fn sub(self, rhs: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &JetPoly {
    type Output = JetPoly;
    fn mul(self, rhs: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &JetPoly {
    type Output = JetPoly;
    fn neg(self) -> JetPoly {
        self.scale(&rat_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn u(k: usize) -> JetPoly {
        JetPoly::var(Var::U(k))
    }

    fn xv() -> JetPoly {
        JetPoly::var(Var::X)
    }

    #[test]
    fn canonical_order_examples() {
        // u1^2 beats u0*u2 and u0^2 under the canonical order
        let u1sq = Monomial::var_pow(Var::U(1), 2);
        let u0u2 = Monomial::var(Var::U(0)).mul(&Monomial::var(Var::U(2)));
        let u0sq = Monomial::var_pow(Var::U(0), 2);
        assert!(u1sq > u0u2);
        assert!(u1sq > u0sq);
        assert!(u0u2 > u0sq);
        // degree dominates
        assert!(u0sq > Monomial::var(Var::U(3)));
        // ascending variable order x < u0 < u1 < ...
        assert!(Monomial::var(Var::U(0)) > Monomial::var(Var::X));
        assert!(Monomial::var(Var::U(2)) > Monomial::var(Var::U(1)));
    }

    #[test]
    fn total_derivative_examples() {
        // D_x(u0^2) = 2 u0 u1
        let p = u(0).pow(2);
        assert_eq!(p.total_derivative(1), (&u(0) * &u(1)).scale(&rat(2, 1)));
        // D_x(x u1) = u1 + x u2
        let p = &xv() * &u(1);
        assert_eq!(p.total_derivative(1), &u(1) + &(&xv() * &u(2)));
        // D_x^3(u0) = u3
        assert_eq!(u(0).total_derivative(3), u(3));
    }

    #[test]
    fn normalization_sign_and_content() {
        // -u0*u2 - u0^2 + 2 u1^2 has leading +2 u1^2 -> stays put
        let p = &(&u(1).pow(2).scale(&rat(2, 1)) - &(&u(0) * &u(2))) - &u(0).pow(2);
        let (n, f) = p.normalized();
        assert_eq!(n, p);
        assert_eq!(f, rat(1, 1));
        // negate it: normalization flips the sign back
        let q = (&p).neg();
        let (n2, f2) = q.normalized();
        assert_eq!(n2, p);
        assert_eq!(f2, rat(-1, 1));
        // content is divided out
        let r = p.scale(&rat(4, 6));
        let (n3, _) = r.normalized();
        assert_eq!(n3, p);
    }

    #[test]
    fn evaluation() {
        // Chazy at the jet of -6/x at x=1
        let chazy = &(&u(3) - &(&u(0) * &u(2)).scale(&rat(2, 1))) + &u(1).pow(2).scale(&rat(3, 1));
        let jet = [rat(-6, 1), rat(6, 1), rat(-12, 1), rat(36, 1)];
        assert_eq!(chazy.eval_exact(&rat(1, 1), &jet).unwrap(), rat(0, 1));
        // u0^2 at u0 = 3
        assert_eq!(
            u(0).pow(2).eval_exact(&rat(0, 1), &[rat(3, 1)]).unwrap(),
            rat(9, 1)
        );
        // x*u1 at x=2, u1=1/2
        let p = &xv() * &u(1);
        assert_eq!(
            p.eval_exact(&rat(2, 1), &[rat(0, 1), rat(1, 2)]).unwrap(),
            rat(1, 1)
        );
        // unbound variable errors
        assert!(u(2).eval_exact(&rat(1, 1), &[rat(1, 1)]).is_err());
    }

    #[test]
    fn render_round_shape() {
        let chazy = &(&u(3) - &(&u(0) * &u(2)).scale(&rat(2, 1))) + &u(1).pow(2).scale(&rat(3, 1));
        assert_eq!(chazy.render("x", "y"), "3*y'^2 - 2*y*y'' + y'''");
    }
}
