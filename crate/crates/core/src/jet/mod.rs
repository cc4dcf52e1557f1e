//! Exact polynomial and rational-expression algebra on the jet space
//! `(x, u0, u1, ..., uK)`: parsing, total derivatives, substitution,
//! denominator clearing, and reduction modulo an equation.

pub mod expr;
pub mod parse;
pub mod poly;
pub mod reduce;

pub use expr::{clear_denominators, substitute, substitute_rational, RationalJetExpr};
pub use parse::{parse_expr, parse_expr_named, ParsedExpr, MAX_PRIME_DEPTH};
pub use poly::{JetPoly, Monomial, Var};
pub use reduce::{reduce_mod_equation, reduce_poly_mod_equation, solve_top};
