//! End-to-end ARS pipeline: balances -> resonances -> classification ->
//! series -> consistency, with per-branch failures recorded as data.

use std::collections::BTreeMap;
use std::fmt;

use super::resonance::{classify, resonances, Direction, ResonanceResult};
use super::series::{build_series, consistency_check, PainleveSeries, SeriesError};
use super::{find_balances_with, ArsError, Balance};
use crate::jet::poly::JetPoly;
use crate::rational::BigRational;

/// Stage at which a branch left the pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureStage {
    ResonanceComputation,
    GenericResonanceAbsent,
    ResonanceDegreeDeviation { degree: usize, order: usize },
    ClassificationRefused,
    SeriesConstruction,
    CompatibilityFailure { index: usize },
}

impl fmt::Display for FailureStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureStage::ResonanceComputation => write!(f, "resonance computation"),
            FailureStage::GenericResonanceAbsent => write!(f, "generic resonance absent"),
            FailureStage::ResonanceDegreeDeviation { .. } => {
                write!(f, "resonance degree deviation")
            }
            FailureStage::ClassificationRefused => write!(f, "classification refused"),
            FailureStage::SeriesConstruction => write!(f, "series construction"),
            FailureStage::CompatibilityFailure { index } => {
                write!(f, "compatibility failure at index {index}")
            }
        }
    }
}

/// A branch that survived the whole pipeline.
#[derive(Debug, Clone)]
pub struct BranchOutcome {
    pub balance: Balance,
    pub resonance: ResonanceResult,
    pub direction: Direction,
    pub series: PainleveSeries,
    pub compatible: bool,
    /// First nonzero residual level of the truncated series (`None` when the
    /// truncation solves the equation exactly).
    pub lowest_residual_index: Option<usize>,
}

/// A branch that failed, with the stage and a human-readable diagnostic.
#[derive(Debug, Clone)]
pub struct BranchFailure {
    pub balance: Balance,
    pub resonance: Option<ResonanceResult>,
    pub direction: Option<Direction>,
    pub stage: FailureStage,
    pub diagnostic: String,
}

/// Per-equation analysis bundle.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub equation: JetPoly,
    pub truncation: usize,
    pub branches: Vec<BranchOutcome>,
    pub failures: Vec<BranchFailure>,
    /// Balance-search notes (e.g. non-rational coefficient roots).
    pub diagnostics: Vec<String>,
}

impl AnalysisReport {
    pub fn has_compatible_branch(&self) -> bool {
        self.branches.iter().any(|b| b.compatible)
    }
}

/// Runs the full pipeline with default free values (every free index gets 1).
pub fn analyze(delta: &JetPoly, n: usize) -> Result<AnalysisReport, ArsError> {
    analyze_with(delta, n, &BTreeMap::new())
}

/// Runs the full pipeline with user-chosen free constants.
pub fn analyze_with(
    delta: &JetPoly,
    n: usize,
    free_values: &BTreeMap<usize, BigRational>,
) -> Result<AnalysisReport, ArsError> {
    if delta.is_zero() {
        return Err(ArsError::ZeroEquation);
    }
    if delta.depends_on_x() {
        return Err(ArsError::NonAutonomous);
    }
    let order = delta.max_jet_order().unwrap_or(0);
    let search = find_balances_with(delta, false);
    let mut report = AnalysisReport {
        equation: delta.clone(),
        truncation: n,
        branches: Vec::new(),
        failures: Vec::new(),
        diagnostics: search.diagnostics,
    };
    for balance in search.balances {
        match run_branch(delta, &balance, order, n, free_values) {
            Ok(outcome) => report.branches.push(outcome),
            Err(failure) => report.failures.push(failure),
        }
    }
    Ok(report)
}

#[allow(clippy::result_large_err)]
fn run_branch(
    delta: &JetPoly,
    balance: &Balance,
    order: usize,
    n: usize,
    free_values: &BTreeMap<usize, BigRational>,
) -> Result<BranchOutcome, BranchFailure> {
    let fail =
        |stage, resonance: Option<ResonanceResult>, direction, diagnostic: String| BranchFailure {
            balance: balance.clone(),
            resonance,
            direction,
            stage,
            diagnostic,
        };
    let res = resonances(delta, balance).map_err(|e| {
        fail(
            FailureStage::ResonanceComputation,
            None,
            None,
            e.to_string(),
        )
    })?;
    if !res.contains_generic {
        let d = format!(
            "-1 is not a root of the resonance polynomial (roots {:?})",
            res.rational_roots
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
        );
        return Err(fail(
            FailureStage::GenericResonanceAbsent,
            Some(res),
            None,
            d,
        ));
    }
    if res.degree() != order {
        let d = format!(
            "resonance polynomial has degree {} but the equation has order {}",
            res.degree(),
            order
        );
        return Err(fail(
            FailureStage::ResonanceDegreeDeviation {
                degree: res.degree(),
                order,
            },
            Some(res),
            None,
            d,
        ));
    }
    let direction = classify(&res).map_err(|e| {
        fail(
            FailureStage::ClassificationRefused,
            Some(res.clone()),
            None,
            e.to_string(),
        )
    })?;
    let series = match build_series(delta, balance, direction, n, free_values) {
        Ok(s) => s,
        Err(SeriesError::Compatibility { index, forcing }) => {
            return Err(fail(
                FailureStage::CompatibilityFailure { index },
                Some(res),
                Some(direction),
                format!("forcing term {forcing} at index {index}"),
            ));
        }
        Err(e) => {
            return Err(fail(
                FailureStage::SeriesConstruction,
                Some(res),
                Some(direction),
                e.to_string(),
            ));
        }
    };
    let (consistent, lowest) = consistency_check(delta, &series);
    Ok(BranchOutcome {
        balance: balance.clone(),
        resonance: res,
        direction,
        series,
        compatible: consistent,
        lowest_residual_index: lowest,
    })
}
