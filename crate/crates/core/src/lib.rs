//! painleve-forge: exact-arithmetic singularity analysis for scalar
//! polynomial ODEs.
//!
//! The crate provides four cooperating layers:
//!
//! - [`jet`]: sparse exact polynomials and rational expressions on the jet
//!   space `(x, u0, u1, ...)`, with parsing, total derivatives, substitution,
//!   and reduction modulo an equation;
//! - [`symmetry`]: Lie point-symmetry verification by prolongation, Lie
//!   brackets and structure constants;
//! - [`ars`]: the ARS singularity algorithm — dominant balances, resonance
//!   polynomials, Right/Left Painleve series with compatibility checks;
//! - [`transforms`] and [`numerics`]: mechanical variable changes
//!   (dependent-variable inversion, hodograph-type order raising, reduction
//!   residuals) and floating-point cross-validation (series evaluation,
//!   adaptive complex-path integration, blow-up scans).
//!
//! All symbolic results are exact over arbitrary-precision rationals.

pub mod ars;
mod error;
pub mod jet;
pub mod numerics;
pub mod rational;
pub mod symmetry;
pub mod transforms;

pub use ars::{
    analyze, build_series, classify, consistency_check, find_balances, resonances, AnalysisReport,
    Balance, BalanceCoeff, Direction, PainleveSeries, ResonanceResult,
};
pub use error::JetError;
pub use jet::{
    clear_denominators, parse_expr, parse_expr_named, reduce_mod_equation, JetPoly, Monomial,
    ParsedExpr, RationalJetExpr, Var,
};
pub use rational::BigRational;
pub use symmetry::{
    apply_prolonged, is_symmetry, lie_bracket, prolong, structure_constants, StructureTable,
    VectorField,
};
pub use transforms::{
    hodograph_raise, invert_dependent, monomial_diff, reduction_residual, InvariantPair,
};
