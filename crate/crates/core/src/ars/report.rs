//! JSON document form of an [`AnalysisReport`].
//!
//! Rationals serialize as `"n"` / `"n/d"` strings to preserve exactness;
//! both successful and failed branches land in the `balances` array, failures
//! carrying `failure_stage`. Serialization is deterministic and re-reading a
//! document then re-serializing is byte-identical.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::analyze::{AnalysisReport, BranchFailure, BranchOutcome};
use super::resonance::Direction;
use super::series::PainleveSeries;
use crate::rational::{rat_from_str, BigRational};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportDoc {
    pub equation: String,
    pub truncation: usize,
    pub balances: Vec<BalanceEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct BalanceEntry {
    pub p: String,
    /// Rational string, or `"arbitrary"`.
    pub coeff: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resonance_poly: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<BTreeMap<u64, String>>,
    pub compatible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lowest_residual_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

fn rs(r: &BigRational) -> String {
    r.to_string()
}

impl ReportDoc {
    /// Converts a report, rendering the equation with the given names.
    pub fn from_report(report: &AnalysisReport, indep: &str, dep: &str) -> ReportDoc {
        let mut balances: Vec<BalanceEntry> = Vec::new();
        for b in &report.branches {
            balances.push(BalanceEntry::from_outcome(b));
        }
        for f in &report.failures {
            balances.push(BalanceEntry::from_failure(f));
        }
        ReportDoc {
            equation: report.equation.render(indep, dep),
            truncation: report.truncation,
            balances,
            diagnostics: report.diagnostics.clone(),
        }
    }

    /// Pretty-printed JSON (the canonical on-disk form).
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> Result<ReportDoc, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// First compatible entry, if any.
    pub fn first_compatible(&self) -> Option<&BalanceEntry> {
        self.balances.iter().find(|b| b.compatible)
    }
}

impl BalanceEntry {
    fn from_outcome(b: &BranchOutcome) -> BalanceEntry {
        BalanceEntry {
            p: rs(&b.balance.p),
            coeff: coeff_string(&b.balance.coeff),
            resonance_poly: Some(b.resonance.poly_coeffs.iter().map(rs).collect()),
            roots: Some(b.resonance.rational_roots.iter().map(rs).collect()),
            direction: Some(b.direction),
            free_indices: Some(b.series.free_indices.iter().copied().collect()),
            coefficients: Some(
                b.series
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (i as u64, rs(c)))
                    .collect(),
            ),
            compatible: b.compatible,
            lowest_residual_index: b.lowest_residual_index,
            failure_stage: None,
            diagnostic: None,
        }
    }

    fn from_failure(f: &BranchFailure) -> BalanceEntry {
        BalanceEntry {
            p: rs(&f.balance.p),
            coeff: coeff_string(&f.balance.coeff),
            resonance_poly: f
                .resonance
                .as_ref()
                .map(|r| r.poly_coeffs.iter().map(rs).collect()),
            roots: f
                .resonance
                .as_ref()
                .map(|r| r.rational_roots.iter().map(rs).collect()),
            direction: f.direction,
            free_indices: None,
            coefficients: None,
            compatible: false,
            lowest_residual_index: None,
            failure_stage: Some(f.stage.to_string()),
            diagnostic: Some(f.diagnostic.clone()),
        }
    }

    /// Rebuilds the series of a compatible entry (used by the numeric
    /// cross-checks when fed a report file).
    pub fn to_series(&self) -> Option<PainleveSeries> {
        let direction = self.direction?;
        let p = rat_from_str(&self.p)?;
        let coeffs_map = self.coefficients.as_ref()?;
        let n = *coeffs_map.keys().max()? as usize;
        let mut coeffs = Vec::with_capacity(n + 1);
        for i in 0..=n {
            coeffs.push(rat_from_str(coeffs_map.get(&(i as u64))?)?);
        }
        let free_indices: BTreeSet<usize> = self.free_indices.as_ref()?.iter().copied().collect();
        Some(PainleveSeries {
            direction,
            p,
            coeffs,
            free_indices,
            truncation: n,
        })
    }
}

fn coeff_string(c: &super::BalanceCoeff) -> String {
    match c {
        super::BalanceCoeff::Rational(r) => rs(r),
        super::BalanceCoeff::Arbitrary => "arbitrary".to_string(),
    }
}
