//! Adaptive Dormand-Prince 5(4) integration of the first-order complex
//! system along straight segments, with blow-up detection, ray scans and the
//! numeric shadow of the reduction residual.

use num_complex::Complex64;
use serde::Serialize;

use crate::jet::poly::JetPoly;
use crate::jet::reduce::solve_top;
use crate::transforms::InvariantPair;
use crate::JetError;

/// Integration record along one straight path.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub start: Complex64,
    pub end: Complex64,
    /// `(t, state)` samples at accepted steps, `t` in `[0, 1]` along the
    /// segment; the state vector has the equation-order length.
    pub samples: Vec<(f64, Vec<Complex64>)>,
    pub tolerance_used: f64,
    /// Set when the step size underflowed (blow-up suspected); holds the
    /// last good path parameter.
    pub blow_up: Option<f64>,
}

impl Trajectory {
    pub fn final_state(&self) -> &[Complex64] {
        &self.samples.last().expect("at least the initial sample").1
    }

    pub fn completed(&self) -> bool {
        self.blow_up.is_none()
    }

    /// Point on the path at parameter `t`.
    pub fn point_at(&self, t: f64) -> Complex64 {
        self.start + (self.end - self.start) * Complex64::new(t, 0.0)
    }
}

struct System {
    /// Coefficient of the top derivative.
    lead: JetPoly,
    /// Remaining part: `delta = lead * u_n + rest`.
    rest: JetPoly,
    order: usize,
}

impl System {
    fn new(delta: &JetPoly) -> Result<Self, JetError> {
        let (order, _) = solve_top(delta)?;
        let top = crate::jet::poly::Var::U(order);
        let mut lead = JetPoly::zero();
        let mut rest = JetPoly::zero();
        for (m, c) in delta.terms() {
            if m.exp(top) == 1 {
                lead.add_term(
                    m.checked_div(&crate::jet::poly::Monomial::var(top))
                        .unwrap(),
                    c.clone(),
                );
            } else {
                rest.add_term(m.clone(), c.clone());
            }
        }
        Ok(System { lead, rest, order })
    }

    /// Right-hand side of the first-order system at `(x, state)`.
    fn rhs(&self, x: Complex64, state: &[Complex64]) -> Option<Vec<Complex64>> {
        let a = self.lead.eval_complex(x, state).ok()?;
        if a.norm() < 1e-13 {
            return None; // singular leading coefficient
        }
        let b = self.rest.eval_complex(x, state).ok()?;
        let mut out = Vec::with_capacity(self.order);
        out.extend_from_slice(&state[1..self.order]);
        out.push(-b / a);
        Some(out)
    }
}

const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `delta = 0` (solved for its top derivative) from the jet `ic`
/// at `x_a` to `x_b` along the straight segment, with embedded 5(4) error
/// control: local error per step bounded by `atol + rtol * |state|`.
///
/// Step underflow sets the blow-up flag and returns the partial trajectory.
pub fn integrate(
    delta: &JetPoly,
    ic: &[Complex64],
    x_a: Complex64,
    x_b: Complex64,
    rtol: f64,
    atol: f64,
) -> Result<Trajectory, JetError> {
    let sys = System::new(delta)?;
    if ic.len() != sys.order {
        return Err(JetError::UnboundVariable {
            var: format!(
                "initial state must have length {} (equation order), got {}",
                sys.order,
                ic.len()
            ),
        });
    }
    let dir = x_b - x_a;
    let mut t = 0.0f64;
    let mut y = ic.to_vec();
    let mut samples = vec![(0.0, y.clone())];
    let mut h = 1e-4f64;
    let h_min = 1e-14;
    let mut blow_up = None;

    let scaled_rhs = |t: f64, y: &[Complex64]| -> Option<Vec<Complex64>> {
        let x = x_a + dir * Complex64::new(t, 0.0);
        let f = sys.rhs(x, y)?;
        Some(f.into_iter().map(|v| v * dir).collect())
    };

    let mut steps = 0usize;
    while t < 1.0 {
        steps += 1;
        if steps > 1_000_000 {
            blow_up = Some(t);
            break;
        }
        if h > 1.0 - t {
            h = 1.0 - t;
        }
        let mut k: Vec<Vec<Complex64>> = Vec::with_capacity(7);
        let mut failed = false;
        for i in 0..7 {
            let mut yi = y.clone();
            for (j, kj) in k.iter().enumerate() {
                let a = DP_A[i][j];
                if a != 0.0 {
                    for (s, v) in yi.iter_mut().zip(kj) {
                        *s += *v * Complex64::new(a * h, 0.0);
                    }
                }
            }
            match scaled_rhs(t + DP_C[i] * h, &yi) {
                Some(f) => k.push(f),
                None => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            h *= 0.25;
            if h < h_min {
                blow_up = Some(t);
                break;
            }
            continue;
        }
        let mut y5 = y.clone();
        let mut err = 0.0f64;
        let mut y4 = y.clone();
        for i in 0..7 {
            for (s, v) in y5.iter_mut().zip(&k[i]) {
                *s += *v * Complex64::new(DP_B5[i] * h, 0.0);
            }
            for (s, v) in y4.iter_mut().zip(&k[i]) {
                *s += *v * Complex64::new(DP_B4[i] * h, 0.0);
            }
        }
        for i in 0..y.len() {
            let sc = atol + rtol * y[i].norm().max(y5[i].norm());
            let e = (y5[i] - y4[i]).norm() / sc;
            err = err.max(e);
        }
        if !err.is_finite() {
            h *= 0.25;
            if h < h_min {
                blow_up = Some(t);
                break;
            }
            continue;
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            samples.push((t, y.clone()));
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
        if h < h_min {
            blow_up = Some(t);
            break;
        }
    }
    Ok(Trajectory {
        start: x_a,
        end: x_b,
        samples,
        tolerance_used: rtol,
        blow_up,
    })
}

/// Outcome of one ray of a blow-up scan.
#[derive(Debug, Clone, Serialize)]
pub struct RayOutcome {
    pub direction: (f64, f64),
    /// Estimated blow-up radius, or `None` within the horizon.
    pub blow_up_radius: Option<f64>,
}

/// Blow-up scan report.
#[derive(Debug, Clone, Serialize)]
pub struct BarrierReport {
    pub anchor: (f64, f64),
    pub horizon: f64,
    pub rays: Vec<RayOutcome>,
}

/// Integrates outward along each ray from `x_a` until blow-up or the
/// horizon; records the last good distance from the anchor.
///
/// Rays run in parallel, capped by `threads` when given.
pub fn barrier_scan(
    delta: &JetPoly,
    ic: &[Complex64],
    x_a: Complex64,
    directions: &[Complex64],
    horizon: f64,
    rtol: f64,
    threads: Option<usize>,
) -> Result<BarrierReport, JetError> {
    if directions.is_empty() {
        return Ok(BarrierReport {
            anchor: (x_a.re, x_a.im),
            horizon,
            rays: Vec::new(),
        });
    }
    let max_threads = threads
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    let mut rays: Vec<Option<RayOutcome>> = vec![None; directions.len()];
    let chunk = directions.len().div_ceil(max_threads);
    std::thread::scope(|scope| {
        for (slot_chunk, dir_chunk) in rays.chunks_mut(chunk).zip(directions.chunks(chunk)) {
            scope.spawn(move || {
                for (slot, &d) in slot_chunk.iter_mut().zip(dir_chunk) {
                    let unit = d / Complex64::new(d.norm(), 0.0);
                    let target = x_a + unit * Complex64::new(horizon, 0.0);
                    let out = integrate(delta, ic, x_a, target, rtol, 1e-12);
                    let ray = match out {
                        Ok(traj) => RayOutcome {
                            direction: (unit.re, unit.im),
                            blow_up_radius: traj.blow_up.map(|t| t * horizon),
                        },
                        Err(_) => RayOutcome {
                            direction: (unit.re, unit.im),
                            blow_up_radius: Some(0.0),
                        },
                    };
                    *slot = Some(ray);
                }
            });
        }
    });
    Ok(BarrierReport {
        anchor: (x_a.re, x_a.im),
        horizon,
        rays: rays.into_iter().map(|r| r.expect("ray computed")).collect(),
    })
}

/// Numeric shadow of the reduction residual: along the trajectory, evaluates
/// the invariants and their chain-rule quotients and plugs them into the
/// reduced equation. Returns the maximum residual magnitude over the samples
/// (samples whose chain-rule denominator magnitude falls below `1e-10` are
/// skipped and counted).
pub fn reduction_trajectory_check(
    delta_orig: &JetPoly,
    inv: &InvariantPair,
    delta_reduced: &JetPoly,
    traj: &Trajectory,
) -> Result<(f64, usize), JetError> {
    let (order, top_sol) = solve_top(delta_orig)?;
    let red_order = delta_reduced.max_jet_order().unwrap_or(0);
    // chain-rule quotients as exact jet expressions, evaluated numerically
    let dr = inv.r_expr.total_derivative_once();
    let mut quotients = Vec::with_capacity(red_order);
    let mut current = inv.w_expr.total_derivative_once().div(&dr)?;
    for k in 1..=red_order {
        quotients.push(current.clone());
        if k < red_order {
            current = current.total_derivative_once().div(&dr)?;
        }
    }
    let mut max = 0.0f64;
    let mut skipped = 0usize;
    const FLOOR: f64 = 1e-10;
    for (t, state) in &traj.samples {
        let x = traj.point_at(*t);
        // extend the jet with the top derivative from the equation itself
        let mut jet = state.clone();
        let Some(top) = top_sol.eval_complex(x, &jet, FLOOR)? else {
            skipped += 1;
            continue;
        };
        jet.push(top);
        debug_assert_eq!(jet.len(), order + 1);
        let r_val = match inv.r_expr.eval_complex(x, &jet, FLOOR)? {
            Some(v) => v,
            None => {
                skipped += 1;
                continue;
            }
        };
        let w_val = match inv.w_expr.eval_complex(x, &jet, FLOOR)? {
            Some(v) => v,
            None => {
                skipped += 1;
                continue;
            }
        };
        let mut red_jet = vec![w_val];
        let mut skip = false;
        for q in &quotients {
            match q.eval_complex(x, &jet, FLOOR)? {
                Some(v) => red_jet.push(v),
                None => {
                    skip = true;
                    break;
                }
            }
        }
        if skip {
            skipped += 1;
            continue;
        }
        let resid = delta_reduced.eval_complex(r_val, &red_jet)?;
        max = max.max(resid.norm());
    }
    Ok((max, skipped))
}

/// Serializes a trajectory as JSON rows of `(t, re/im pairs)`.
pub fn trajectory_json(traj: &Trajectory) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = traj
        .samples
        .iter()
        .map(|(t, state)| {
            let mut row = vec![serde_json::json!(t)];
            for s in state {
                row.push(serde_json::json!([s.re, s.im]));
            }
            serde_json::Value::Array(row)
        })
        .collect();
    serde_json::json!({
        "start": [traj.start.re, traj.start.im],
        "end": [traj.end.re, traj.end.im],
        "rtol": traj.tolerance_used,
        "blow_up": traj.blow_up,
        "samples": rows,
    })
}

/// Plot-ready CSV: `t, x_re, x_im, y0_re, y0_im, ...`.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let order = traj.samples.first().map(|(_, s)| s.len()).unwrap_or(0);
    let mut out = String::from("t,x_re,x_im");
    for k in 0..order {
        out.push_str(&format!(",y{k}_re,y{k}_im"));
    }
    out.push('\n');
    for (t, state) in &traj.samples {
        let x = traj.point_at(*t);
        out.push_str(&format!("{t},{},{}", x.re, x.im));
        for s in state {
            out.push_str(&format!(",{},{}", s.re, s.im));
        }
        out.push('\n');
    }
    out
}
