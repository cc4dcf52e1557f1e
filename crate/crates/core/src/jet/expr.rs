//! Rational jet expressions: quotients of [`JetPoly`] with lightweight
//! normalization (common monomial factor and content only — no full gcd).

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed};

use super::poly::{JetPoly, Monomial, Var};
use crate::rational::{content, BigRational};
use crate::JetError;

/// A quotient `num / den` of jet polynomials, `den != 0`.
///
/// Kept reduced by removing any monomial factor common to every term of
/// numerator and denominator, and by scaling so the denominator is an
/// integer-content-1 polynomial with positive leading coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalJetExpr {
    num: JetPoly,
    den: JetPoly,
}

impl RationalJetExpr {
    /// Builds and normalizes `num / den`. Errors if `den` is zero.
    pub fn new(num: JetPoly, den: JetPoly) -> Result<Self, JetError> {
        if den.is_zero() {
            return Err(JetError::ZeroDenominator);
        }
        let mut e = RationalJetExpr { num, den };
        e.normalize();
        Ok(e)
    }

    /// A polynomial viewed as a rational expression.
    pub fn from_poly(num: JetPoly) -> Self {
        RationalJetExpr {
            num,
            den: JetPoly::from_int(1),
        }
    }

    /// Zero.
    pub fn zero() -> Self {
        Self::from_poly(JetPoly::zero())
    }

    pub fn num(&self) -> &JetPoly {
        &self.num
    }

    pub fn den(&self) -> &JetPoly {
        &self.den
    }

    /// True iff the numerator is zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff the denominator is the constant 1.
    pub fn is_polynomial(&self) -> bool {
        self.den == JetPoly::from_int(1)
    }

    /// The numerator if the expression is polynomial.
    pub fn as_poly(&self) -> Option<&JetPoly> {
        if self.is_polynomial() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Greatest monomial dividing every term of the polynomial.
    fn common_monomial(p: &JetPoly) -> Monomial {
        let mut iter = p.terms();
        let first = match iter.next() {
            Some((m, _)) => m.clone(),
            None => return Monomial::one(),
        };
        let mut mins: BTreeMap<Var, u16> = first.vars().collect();
        for (m, _) in iter {
            mins.retain(|v, e| {
                let other = m.exp(*v);
                if other == 0 {
                    false
                } else {
                    *e = (*e).min(other);
                    true
                }
            });
            if mins.is_empty() {
                break;
            }
        }
        let mut out = Monomial::one();
        for (v, e) in mins {
            out = out.mul(&Monomial::var_pow(v, e));
        }
        out
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = JetPoly::from_int(1);
            return;
        }
        // remove the monomial factor common to both sides
        let gn = Self::common_monomial(&self.num);
        let gd = Self::common_monomial(&self.den);
        let mut g = Monomial::one();
        for (v, en) in gn.vars() {
            let ed = gd.exp(v);
            let e = en.min(ed);
            if e > 0 {
                g = g.mul(&Monomial::var_pow(v, e));
            }
        }
        if !g.is_one() {
            self.num = divide_monomial(&self.num, &g);
            self.den = divide_monomial(&self.den, &g);
        }
        // scale so the denominator is primitive with positive leading coeff
        let mut f = content(self.den.terms().map(|(_, c)| c));
        if self.den.leading().expect("den nonzero").1.is_negative() {
            f = -f;
        }
        let inv = BigRational::one() / f;
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    /// Sum over a common denominator.
    pub fn add(&self, rhs: &RationalJetExpr) -> RationalJetExpr {
        if self.den == rhs.den {
            let mut e = RationalJetExpr {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
            e.normalize();
            return e;
        }
        let mut e = RationalJetExpr {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        };
        e.normalize();
        e
    }

    pub fn sub(&self, rhs: &RationalJetExpr) -> RationalJetExpr {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> RationalJetExpr {
        RationalJetExpr {
            num: self.num.scale(&BigRational::from_integer((-1).into())),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RationalJetExpr) -> RationalJetExpr {
        let mut e = RationalJetExpr {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        };
        e.normalize();
        e
    }

    /// Quotient; errors when the divisor is zero.
    pub fn div(&self, rhs: &RationalJetExpr) -> Result<RationalJetExpr, JetError> {
        if rhs.is_zero() {
            return Err(JetError::ZeroDenominator);
        }
        let mut e = RationalJetExpr {
            num: &self.num * &rhs.den,
            den: &self.den * &rhs.num,
        };
        e.normalize();
        Ok(e)
    }

    /// Integer power.
    pub fn pow(&self, e: u32) -> RationalJetExpr {
        let mut acc = RationalJetExpr::from_poly(JetPoly::from_int(1));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total derivative via the quotient rule.
    pub fn total_derivative_once(&self) -> RationalJetExpr {
        let dn = self.num.total_derivative_once();
        let dd = self.den.total_derivative_once();
        let mut e = RationalJetExpr {
            num: &(&dn * &self.den) - &(&self.num * &dd),
            den: &self.den * &self.den,
        };
        e.normalize();
        e
    }

    /// Highest jet index appearing in numerator or denominator.
    pub fn max_jet_order(&self) -> Option<usize> {
        self.num.max_jet_order().max(self.den.max_jet_order())
    }

    /// Floating evaluation; errors on unbound variables, returns `None`
    /// when the denominator magnitude is below `den_floor`.
    pub fn eval_complex(
        &self,
        x: Complex64,
        jet: &[Complex64],
        den_floor: f64,
    ) -> Result<Option<Complex64>, JetError> {
        let d = self.den.eval_complex(x, jet)?;
        if d.norm() < den_floor {
            return Ok(None);
        }
        let n = self.num.eval_complex(x, jet)?;
        Ok(Some(n / d))
    }
}

impl fmt::Display for RationalJetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

fn divide_monomial(p: &JetPoly, g: &Monomial) -> JetPoly {
    let mut out = JetPoly::zero();
    for (m, c) in p.terms() {
        out.add_term(m.checked_div(g).expect("common factor divides"), c.clone());
    }
    out
}

/// Simultaneous substitution of jet variables (and optionally `x`) by
/// rational expressions; unbound variables pass through.
pub fn substitute(
    e: &JetPoly,
    bindings: &BTreeMap<Var, RationalJetExpr>,
) -> Result<RationalJetExpr, JetError> {
    let mut acc = RationalJetExpr::zero();
    for (mono, coeff) in e.terms() {
        let mut term = RationalJetExpr::from_poly(JetPoly::constant(coeff.clone()));
        for (v, exp) in mono.vars() {
            let factor = match bindings.get(&v) {
                Some(b) => b.pow(exp as u32),
                None => {
                    let mut p = JetPoly::zero();
                    p.add_term(Monomial::var_pow(v, exp), BigRational::one());
                    RationalJetExpr::from_poly(p)
                }
            };
            term = term.mul(&factor);
        }
        acc = acc.add(&term);
    }
    if acc.den().is_zero() {
        return Err(JetError::ZeroDenominator);
    }
    Ok(acc)
}

/// Substitution on a rational expression (applied to both sides).
pub fn substitute_rational(
    e: &RationalJetExpr,
    bindings: &BTreeMap<Var, RationalJetExpr>,
) -> Result<RationalJetExpr, JetError> {
    let n = substitute(e.num(), bindings)?;
    let d = substitute(e.den(), bindings)?;
    if d.is_zero() {
        return Err(JetError::ZeroDenominator);
    }
    n.div(&d)
}

/// Clears the denominator: returns `(num', multiplier)` where `num'` is the
/// content-normalized numerator (integer coefficients, gcd 1, positive
/// leading coefficient under the canonical order) and `multiplier` is the
/// denominator.
pub fn clear_denominators(e: &RationalJetExpr) -> (JetPoly, JetPoly) {
    let (n, _) = e.num().normalized();
    (n, e.den().clone())
}
