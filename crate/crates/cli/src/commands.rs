//! Subcommand implementations. Exit codes: 0 success, 1 input/usage error
//! (surfaced as `Err`), 2 analysis found no compatible branch, 3 a symmetry
//! verdict was false, 4 a comparison or threshold failed.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;

use painleve_forge::ars::report::ReportDoc;
use painleve_forge::ars::{analyze_with, Direction};
use painleve_forge::jet::ParsedExpr;
use painleve_forge::numerics::{self, barrier_scan, eval_series_jet, integrate, residual_check_scaled};
use painleve_forge::symmetry::{is_symmetry, structure_constants, BracketDecomposition};
use painleve_forge::transforms::{hodograph_raise, invert_dependent, monomial_diff};
use painleve_forge::{parse_expr_named, JetPoly, VectorField};

use crate::spec_file::OdeSpecFile;
use crate::util::{parse_complex_list, parse_constant, parse_pair, segment_origin_distance};

pub fn analyze(
    file: &Path,
    terms: usize,
    constants: &[String],
    json_out: Option<&Path>,
) -> Result<u8> {
    let spec = OdeSpecFile::load(file)?;
    let delta = spec.equation()?;
    let mut free_values = BTreeMap::new();
    for c in constants {
        let (idx, val) = parse_constant(c)?;
        free_values.insert(idx, val);
    }
    let report =
        analyze_with(&delta, terms, &free_values).map_err(|e| anyhow!("analysis failed: {e}"))?;
    let doc = ReportDoc::from_report(&report, &spec.indep, &spec.dep);

    println!("equation: {}", doc.equation);
    for b in &report.branches {
        let coeff = match &b.balance.coeff {
            painleve_forge::BalanceCoeff::Rational(c) => c.to_string(),
            painleve_forge::BalanceCoeff::Arbitrary => "arbitrary".to_string(),
        };
        let roots: Vec<String> = b
            .resonance
            .rational_roots
            .iter()
            .map(|r| r.to_string())
            .collect();
        println!(
            "balance p = {}, coeff = {}: resonances {{{}}}, {} series, {}",
            b.balance.p,
            coeff,
            roots.join(", "),
            b.direction,
            if b.compatible {
                "compatible"
            } else {
                "inconsistent"
            }
        );
        let free: Vec<String> = b
            .series
            .free_indices
            .iter()
            .map(|i| i.to_string())
            .collect();
        println!("  free indices: {{{}}}", free.join(", "));
    }
    for f in &report.failures {
        let coeff = match &f.balance.coeff {
            painleve_forge::BalanceCoeff::Rational(c) => c.to_string(),
            painleve_forge::BalanceCoeff::Arbitrary => "arbitrary".to_string(),
        };
        println!(
            "balance p = {}, coeff = {}: failed ({}) - {}",
            f.balance.p, coeff, f.stage, f.diagnostic
        );
    }
    for d in &report.diagnostics {
        println!("note: {d}");
    }

    if let Some(path) = json_out {
        std::fs::write(path, doc.to_json_string())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.has_compatible_branch() { 0 } else { 2 })
}

pub fn symmetry(file: &Path, fields: &[String], table: bool) -> Result<u8> {
    let spec = OdeSpecFile::load(file)?;
    let delta = spec.equation()?;
    let mut parsed_fields = Vec::new();
    for (i, raw) in fields.iter().enumerate() {
        let ((n1, e1), (n2, e2)) = parse_pair(raw)?;
        if n1 != "xi" || n2 != "eta" {
            bail!("field {} must be given as 'xi=<expr>;eta=<expr>'", i + 1);
        }
        let xi = base_component(&e1, &spec)?;
        let eta = base_component(&e2, &spec)?;
        let vf = VectorField::new(xi, eta).map_err(|e| anyhow!("field {}: {e}", i + 1))?;
        parsed_fields.push(vf);
    }
    let mut all_true = true;
    for (i, vf) in parsed_fields.iter().enumerate() {
        let cert = is_symmetry(vf, &delta).map_err(|e| anyhow!("field {}: {e}", i + 1))?;
        if cert.is_symmetry {
            println!("X{}: symmetry", i + 1);
        } else {
            all_true = false;
            let num = cert.obstruction.num().render(&spec.indep, &spec.dep);
            println!("X{}: NOT a symmetry; obstruction: {num}", i + 1);
        }
    }
    if table {
        let t = structure_constants(&parsed_fields);
        for ((i, j), bracket, dec) in &t.brackets {
            let rendered = match dec {
                BracketDecomposition::InSpan(cs) => {
                    let terms: Vec<String> = cs
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| *c != &painleve_forge::rational::rat_int(0))
                        .map(|(k, c)| {
                            if c == &painleve_forge::rational::rat_int(1) {
                                format!("X{}", k + 1)
                            } else {
                                format!("{}*X{}", c, k + 1)
                            }
                        })
                        .collect();
                    if terms.is_empty() {
                        "0".to_string()
                    } else {
                        terms.join(" + ")
                    }
                }
                BracketDecomposition::NotInSpan => format!(
                    "not in span (xi = {}, eta = {})",
                    bracket.xi().render(&spec.indep, &spec.dep),
                    bracket.eta().render(&spec.indep, &spec.dep)
                ),
            };
            println!("[X{}, X{}] = {}", i + 1, j + 1, rendered);
        }
        println!(
            "algebra {} under the bracket",
            if t.is_closed() {
                "closes"
            } else {
                "does NOT close"
            }
        );
    }
    Ok(if all_true { 0 } else { 3 })
}

/// Parses a base-variable (xi/eta) expression; derivatives are rejected by
/// `VectorField::new`, non-polynomial input here.
fn base_component(text: &str, spec: &OdeSpecFile) -> Result<JetPoly> {
    let parsed =
        parse_expr_named(text, &spec.indep, &spec.dep).map_err(|e| anyhow!("'{text}': {e}"))?;
    match parsed {
        ParsedExpr::Poly(p) => Ok(p),
        ParsedExpr::Rational(_) => bail!("'{text}': field components must be polynomial"),
    }
}

pub fn transform(
    file: &Path,
    invert_dep: bool,
    hodograph: bool,
    out: Option<&Path>,
    diff_against: Option<&Path>,
) -> Result<u8> {
    if invert_dep == hodograph {
        bail!("exactly one of --invert-dep or --hodograph-raise is required");
    }
    let spec = OdeSpecFile::load(file)?;
    let delta = spec.equation()?;
    let (result, new_spec) = if invert_dep {
        let transformed = invert_dependent(&delta).map_err(|e| anyhow!("{e}"))?;
        let dep = if spec.dep == "w" { "v" } else { "w" }.to_string();
        let mut metadata = BTreeMap::new();
        metadata.insert(
            "derived".to_string(),
            format!("from {} by dependent-variable inversion", spec.name),
        );
        let ns = OdeSpecFile {
            name: format!("{}_{}", spec.name, dep),
            indep: spec.indep.clone(),
            dep: dep.clone(),
            equation_text: transformed.render(&spec.indep, &dep),
            metadata,
        };
        (transformed, ns)
    } else {
        if delta.max_jet_order() != Some(2) {
            bail!("--hodograph-raise requires a second-order equation");
        }
        let transformed = hodograph_raise(&delta).map_err(|e| anyhow!("{e}"))?;
        let dep = if spec.dep == "Phi" { "F" } else { "Phi" }.to_string();
        let indep = if spec.indep == "s" { "t" } else { "s" }.to_string();
        let mut metadata = BTreeMap::new();
        metadata.insert(
            "derived".to_string(),
            format!("from {} by the hodograph-type order raise", spec.name),
        );
        let ns = OdeSpecFile {
            name: format!("{}_raised", spec.name),
            indep: indep.clone(),
            dep: dep.clone(),
            equation_text: transformed.render(&indep, &dep),
            metadata,
        };
        (transformed, ns)
    };

    let out_path: PathBuf = match out {
        Some(p) => p.to_path_buf(),
        None => file.with_file_name(format!("{}.ode", new_spec.name)),
    };
    new_spec.save(&out_path)?;
    println!("wrote {}", out_path.display());

    if let Some(target_path) = diff_against {
        let target_spec = OdeSpecFile::load(target_path)?;
        let target = target_spec.equation()?;
        let diff = monomial_diff(&result, &target);
        let rows: Vec<serde_json::Value> = diff
            .iter()
            .map(|d| {
                serde_json::json!({
                    "monomial": JetPoly::monomial_string(&d.monomial, &target_spec.indep, &target_spec.dep),
                    "left": d.left.to_string(),
                    "right": d.right.to_string(),
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows)?);
        if !diff.is_empty() {
            return Ok(4);
        }
    }
    Ok(0)
}

pub fn reduce_check(file_orig: &Path, file_reduced: &Path, invariants: &str) -> Result<u8> {
    let orig = OdeSpecFile::load(file_orig)?;
    let reduced = OdeSpecFile::load(file_reduced)?;
    let delta_orig = orig.equation()?;
    let delta_reduced = reduced.equation()?;

    let ((rn, re), (wn, we)) = parse_pair(invariants)?;
    if rn != reduced.indep || wn != reduced.dep {
        bail!(
            "invariant names ({rn}, {wn}) must match the reduced file's variables ({}, {})",
            reduced.indep,
            reduced.dep
        );
    }
    let r_expr = parse_expr_named(&re, &orig.indep, &orig.dep)
        .map_err(|e| anyhow!("invariant '{re}': {e}"))?
        .into_rational();
    let w_expr = parse_expr_named(&we, &orig.indep, &orig.dep)
        .map_err(|e| anyhow!("invariant '{we}': {e}"))?
        .into_rational();
    let inv =
        painleve_forge::InvariantPair::new(r_expr, w_expr, (rn, wn)).map_err(|e| anyhow!("{e}"))?;
    let (ok, certificate) = painleve_forge::reduction_residual(&delta_orig, &inv, &delta_reduced)
        .map_err(|e| anyhow!("{e}"))?;
    if ok {
        println!("reduction identity holds exactly");
        Ok(0)
    } else {
        let num = certificate.num().render(&orig.indep, &orig.dep);
        let den = certificate.den().render(&orig.indep, &orig.dep);
        println!("reduction identity FAILS; certificate: ({num}) / ({den})");
        Ok(4)
    }
}

pub struct NumcheckOptions {
    pub file: PathBuf,
    pub series_from: PathBuf,
    pub path: Option<String>,
    pub points: Option<String>,
    pub barrier: Option<usize>,
    pub threshold: f64,
    pub horizon: f64,
    pub out: String,
}

pub fn numcheck(opts: &NumcheckOptions) -> Result<u8> {
    let spec = OdeSpecFile::load(&opts.file)?;
    let delta = spec.equation()?;
    let order = delta.max_jet_order().unwrap_or(0);
    let report_text = std::fs::read_to_string(&opts.series_from)
        .with_context(|| format!("reading {}", opts.series_from.display()))?;
    let doc = ReportDoc::from_json_str(&report_text)
        .with_context(|| format!("parsing {}", opts.series_from.display()))?;
    let entry = doc
        .first_compatible()
        .ok_or_else(|| anyhow!("report contains no compatible series"))?;
    let series = entry
        .to_series()
        .ok_or_else(|| anyhow!("report entry is missing series data"))?;

    let mut summary = serde_json::Map::new();
    let mut csv = String::from("kind,label,value\n");
    let mut threshold_failed = false;

    // residual check at the requested or default points
    let points: Vec<Complex64> = match &opts.points {
        Some(list) => parse_complex_list(list)?,
        None => match series.direction {
            Direction::Left => vec![
                Complex64::new(4.0, 0.0),
                Complex64::new(6.0, 0.0),
                Complex64::new(10.0, 0.0),
            ],
            _ => vec![
                Complex64::new(0.02, 0.0),
                Complex64::new(0.05, 0.0),
                Complex64::new(0.1, 0.0),
            ],
        },
    };
    if points.iter().any(|p| p.norm() == 0.0) {
        bail!("residual points must avoid the origin");
    }
    let mut residual_rows = Vec::new();
    let mut max_residual = 0.0f64;
    let mut max_scaled = 0.0f64;
    for &pt in &points {
        let (r, rs) =
            residual_check_scaled(&delta, &series, &[pt]).map_err(|e| anyhow!("{e}"))?;
        max_residual = max_residual.max(r);
        max_scaled = max_scaled.max(rs);
        residual_rows.push(serde_json::json!({
            "point": [pt.re, pt.im],
            "residual": r,
            "scaled_residual": rs,
        }));
        csv.push_str(&format!("residual,{}+{}i,{r:e}\n", pt.re, pt.im));
        csv.push_str(&format!("scaled_residual,{}+{}i,{rs:e}\n", pt.re, pt.im));
    }
    summary.insert("residuals".into(), serde_json::Value::Array(residual_rows));
    summary.insert("max_residual".into(), serde_json::json!(max_residual));
    summary.insert("max_scaled_residual".into(), serde_json::json!(max_scaled));
    // the threshold applies to the backward-error form, which stays
    // meaningful for ascending series evaluated near the pole
    if max_scaled > opts.threshold {
        threshold_failed = true;
    }

    // integration-vs-series comparison along a straight path
    if let Some(path) = &opts.path {
        let ends = parse_complex_list(path)?;
        if ends.len() != 2 {
            bail!("--path expects exactly two endpoints");
        }
        let (a, b) = (ends[0], ends[1]);
        if segment_origin_distance(a, b) < 1e-3 {
            bail!("integration path passes within 1e-3 of the origin");
        }
        let jet_a =
            eval_series_jet(&series, a, order.saturating_sub(1)).map_err(|e| anyhow!("{e}"))?;
        let traj = integrate(
            &delta,
            &jet_a,
            a,
            b,
            numerics::DEFAULT_RTOL,
            numerics::DEFAULT_ATOL,
        )
        .map_err(|e| anyhow!("{e}"))?;
        if !traj.completed() {
            bail!("integration flagged a blow-up before reaching the endpoint");
        }
        let series_b = eval_series_jet(&series, b, 0).map_err(|e| anyhow!("{e}"))?[0];
        let got = traj.final_state()[0];
        let rel = (got - series_b).norm() / series_b.norm().max(1e-300);
        summary.insert(
            "path".into(),
            serde_json::json!({
                "from": [a.re, a.im],
                "to": [b.re, b.im],
                "series_value": [series_b.re, series_b.im],
                "integrated_value": [got.re, got.im],
                "relative_error": rel,
            }),
        );
        csv.push_str(&format!("path,endpoint_rel_error,{rel:e}\n"));
        if rel > opts.threshold {
            threshold_failed = true;
        }
    }

    // exploratory blow-up scan (no thresholds)
    if let Some(rays) = opts.barrier {
        let anchor = match &opts.path {
            Some(path) => parse_complex_list(path)?[0],
            None => match series.direction {
                Direction::Left => Complex64::new(5.0, 0.0),
                _ => Complex64::new(0.25, 0.0),
            },
        };
        let jet = eval_series_jet(&series, anchor, order.saturating_sub(1))
            .map_err(|e| anyhow!("{e}"))?;
        let dirs: Vec<Complex64> = (0..rays)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * (k as f64) / (rays as f64);
                Complex64::new(th.cos(), th.sin())
            })
            .collect();
        let threads = std::env::var("PAINLEVE_FORGE_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok());
        let scan = barrier_scan(&delta, &jet, anchor, &dirs, opts.horizon, 1e-8, threads)
            .map_err(|e| anyhow!("{e}"))?;
        for ray in &scan.rays {
            csv.push_str(&format!(
                "barrier,{}+{}i,{}\n",
                ray.direction.0,
                ray.direction.1,
                ray.blow_up_radius
                    .map(|r| format!("{r:e}"))
                    .unwrap_or_else(|| "none".into())
            ));
        }
        summary.insert("barrier".into(), serde_json::to_value(&scan)?);
    }

    let json_path = format!("{}.json", opts.out);
    let csv_path = format!("{}.csv", opts.out);
    let mut json_text = serde_json::to_string_pretty(&serde_json::Value::Object(summary))?;
    json_text.push('\n');
    std::fs::write(&json_path, json_text).with_context(|| format!("writing {json_path}"))?;
    std::fs::write(&csv_path, csv).with_context(|| format!("writing {csv_path}"))?;
    println!(
        "wrote {json_path} and {csv_path}; max residual {max_residual:e} (scaled {max_scaled:e})"
    );

    Ok(if threshold_failed { 4 } else { 0 })
}
