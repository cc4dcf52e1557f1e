//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values. Every tolerance is pinned here, in code.
//!
//! Run with `cargo test -p painleve-forge-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;

use painleve_forge::ars::{
    analyze, build_series, classify, consistency_check, find_balances, resonances, Direction,
};
use painleve_forge::numerics::{eval_series_jet, integrate, residual_check};
use painleve_forge::rational::{rat, rat_int, BigRational};
use painleve_forge::symmetry::{
    is_symmetry, lie_bracket, prolong, structure_constants, BracketDecomposition, VectorField,
};
use painleve_forge::transforms::{hodograph_raise, invert_dependent};
use painleve_forge::{parse_expr_named, BalanceCoeff, InvariantPair, JetPoly, RationalJetExpr};
use painleve_forge_cli::spec_file::OdeSpecFile;

fn fixture(name: &str) -> OdeSpecFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    OdeSpecFile::load(&path).expect("fixture loads")
}

fn equation(name: &str) -> JetPoly {
    fixture(name).equation().expect("fixture equation")
}

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&n| rat_int(n)).collect()
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn criterion_01_chazy_balance() {
    let start = Instant::now();
    let delta = equation("chazy.ode");
    let report = analyze(&delta, 8).unwrap();
    assert_eq!(report.branches.len(), 1, "exactly one surviving balance");
    let b = &report.branches[0];
    assert_eq!(b.balance.p, rat_int(-1));
    assert_eq!(b.balance.coeff, BalanceCoeff::Rational(rat_int(-6)));
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime {elapsed:?} >= 1 s");
    println!("criterion 01 PASS: unique balance p=-1, coeff=-6 in {elapsed:?}");
}

#[test]
fn criterion_02_chazy_resonance_polynomial() {
    let delta = equation("chazy.ode");
    let b = &find_balances(&delta)[0];
    let r = resonances(&delta, b).unwrap();
    assert_eq!(
        r.poly_coeffs,
        ints(&[6, 11, 6, 1]),
        "coefficients (1,6,11,6)"
    );
    assert_eq!(r.rational_roots, ints(&[-3, -2, -1]));
    assert!(r.contains_generic);
    assert!(!r.has_nonrational_factor);
    println!("criterion 02 PASS: resonance polynomial R^3+6R^2+11R+6, roots {{-1,-2,-3}}, exact");
}

#[test]
fn criterion_03_chazy_left_series() {
    let delta = equation("chazy.ode");
    let b = &find_balances(&delta)[0];
    let r = resonances(&delta, b).unwrap();
    let dir = classify(&r).unwrap();
    assert_eq!(dir, Direction::Left);
    let mut fv = BTreeMap::new();
    fv.insert(1usize, rat_int(1));
    fv.insert(2usize, rat_int(1));
    let s = build_series(&delta, b, dir, 8, &fv).expect("series builds");
    // compatibility (zero forcing) held at the resonance indices, in
    // particular at 1 and 2; the engine finds index 3 free as well
    assert!(s.free_indices.contains(&1));
    assert!(s.free_indices.contains(&2));
    assert_eq!(s.coeffs[1], rat_int(1));
    assert_eq!(s.coeffs[2], rat_int(1));
    let (ok, lowest) = consistency_check(&delta, &s);
    assert!(ok, "consistency holds");
    let lowest = lowest.expect("truncation leaves a residual");
    assert!(lowest >= 9, "lowest residual index {lowest} >= 9");
    println!(
        "criterion 03 PASS: Left series to N=8 with a1=a2=1 compatible, lowest residual index {lowest}"
    );
}

#[test]
fn criterion_04_w_branch() {
    let delta = equation("chazy.ode");
    let w_eq = invert_dependent(&delta).unwrap();
    assert_eq!(
        w_eq,
        equation("chazy_w.ode"),
        "shipped fixture is the derived equation"
    );
    let report = analyze(&w_eq, 5).unwrap();
    assert_eq!(report.branches.len(), 1, "one surviving branch");
    let b = &report.branches[0];
    assert_eq!(b.balance.p, rat_int(-1));
    assert_eq!(b.resonance.rational_roots, ints(&[-1, 0, 1]));
    assert_eq!(b.direction, Direction::Right);
    assert!(b.series.free_indices.contains(&0), "free indices include 0");
    assert!(b.compatible);
    let f: Vec<_> = report
        .failures
        .iter()
        .filter(|f| f.balance.p == rat_int(-2))
        .collect();
    assert_eq!(f.len(), 1, "the p=-2 branch lands in failures");
    println!(
        "criterion 04 PASS: w-branch p=-1 resonances {{-1,0,1}} Right (free 0), p=-2 fails at '{}'",
        f[0].stage
    );
}

#[test]
fn criterion_05_raised_equation_pipeline() {
    let eq10 = equation("chazy_reduced_scaling.ode");
    let raised = hodograph_raise(&eq10).unwrap();
    assert_eq!(raised, equation("raised_autonomous.ode"));
    let report = analyze(&raised, 5).unwrap();
    let b = report
        .branches
        .iter()
        .find(|b| b.balance.p == rat_int(-1))
        .expect("p=-1 branch");
    assert_eq!(b.balance.coeff, BalanceCoeff::Rational(rat_int(-6)));
    assert_eq!(b.resonance.rational_roots, ints(&[-3, -2, -1]));
    assert_eq!(b.direction, Direction::Left);
    assert!(b.compatible);
    assert!(
        b.lowest_residual_index.is_none_or(|l| l >= 6),
        "N=5 series consistent through level 5"
    );

    let psi_eq = invert_dependent(&raised).unwrap();
    assert_eq!(psi_eq, equation("raised_autonomous_psi.ode"));
    let report2 = analyze(&psi_eq, 5).unwrap();
    let b2 = report2
        .branches
        .iter()
        .find(|b| b.balance.p == rat_int(-1))
        .expect("p=-1 branch of the inverted form");
    assert_eq!(b2.resonance.rational_roots, ints(&[-1, 0, 1]));
    assert_eq!(b2.direction, Direction::Right);
    assert!(b2.compatible);
    println!(
        "criterion 05 PASS: raised equation has balance -6/x with resonances {{-1,-2,-3}}; its inversion has {{-1,0,1}}"
    );
}

#[test]
fn criterion_06_reductions() {
    let chazy = equation("chazy.ode");
    let u = |k| RationalJetExpr::from_poly(JetPoly::var(painleve_forge::Var::U(k)));

    // (1) r = y, w = y'
    let inv1 = InvariantPair::new(u(0), u(1), ("r".into(), "w".into())).unwrap();
    let red1 = equation("chazy_reduced_rw.ode");
    let (ok1, cert1) = painleve_forge::reduction_residual(&chazy, &inv1, &red1).unwrap();
    assert!(
        ok1 && cert1.is_zero(),
        "first reduction certificate nonzero"
    );

    // (2) s = w/r^2, phi = (1/r) dw/dr in the reduced jet space
    let s_expr = parse_expr_named("w/r^2", "r", "w").unwrap().into_rational();
    let phi_expr = parse_expr_named("(1/r)*w'", "r", "w")
        .unwrap()
        .into_rational();
    let inv2 = InvariantPair::new(s_expr, phi_expr, ("s".into(), "phi".into())).unwrap();
    let red2 = equation("chazy_abel.ode");
    let (ok2, cert2) = painleve_forge::reduction_residual(&red1, &inv2, &red2).unwrap();
    assert!(ok2 && cert2.is_zero(), "Abel reduction certificate nonzero");

    // (3) chi = x y, psi = x^2 y'
    let chi = parse_expr_named("x*y", "x", "y").unwrap().into_rational();
    let psi = parse_expr_named("x^2*y'", "x", "y")
        .unwrap()
        .into_rational();
    let inv3 = InvariantPair::new(chi, psi, ("chi".into(), "psi".into())).unwrap();
    let red3 = equation("chazy_reduced_scaling.ode");
    let (ok3, cert3) = painleve_forge::reduction_residual(&chazy, &inv3, &red3).unwrap();
    assert!(
        ok3 && cert3.is_zero(),
        "scaling reduction certificate nonzero"
    );
    println!("criterion 06 PASS: all three reduction identities hold with exact zero certificates");
}

#[test]
fn criterion_07_symmetries() {
    let chazy = equation("chazy.ode");
    let p = |s: &str| {
        parse_expr_named(s, "x", "y")
            .unwrap()
            .into_rational()
            .num()
            .clone()
    };
    let x1 = VectorField::new(p("1"), p("0")).unwrap();
    let x2 = VectorField::new(p("x"), p("-y")).unwrap();
    let x3 = VectorField::new(p("x^2"), p("-2*x*y - 6")).unwrap();
    for (name, f) in [("X1", &x1), ("X2", &x2), ("X3", &x3)] {
        let cert = is_symmetry(f, &chazy).unwrap();
        assert!(cert.is_symmetry, "{name} must be a symmetry");
    }
    let table = structure_constants(&[x1, x2, x3]);
    assert!(table.is_closed());
    let expected = [
        ((0usize, 1usize), ints(&[1, 0, 0])),
        ((0, 2), ints(&[0, 2, 0])),
        ((1, 2), ints(&[0, 0, 1])),
    ];
    for ((ij, want), (got_ij, _, dec)) in expected.iter().zip(&table.brackets) {
        assert_eq!(ij, got_ij);
        assert_eq!(dec, &BracketDecomposition::InSpan(want.clone()));
    }
    println!("criterion 07 PASS: X1..X3 verified; [X1,X2]=X1, [X1,X3]=2X2, [X2,X3]=X3, exact");
}

#[test]
fn criterion_08_painleve_ince() {
    let delta = equation("painleve_ince.ode");
    let bals = find_balances(&delta);
    assert_eq!(bals.len(), 2);
    let coeffs: Vec<_> = bals.iter().map(|b| b.coeff.clone()).collect();
    assert_eq!(
        coeffs,
        vec![
            BalanceCoeff::Rational(rat_int(1)),
            BalanceCoeff::Rational(rat_int(2))
        ],
        "balances exactly a in {{1, 2}}"
    );
    // a = 2: resonances exactly {-1, -2}, Left
    let r2 = resonances(&delta, &bals[1]).unwrap();
    assert_eq!(r2.rational_roots, ints(&[-2, -1]));
    assert_eq!(classify(&r2).unwrap(), Direction::Left);
    let s2 = build_series(&delta, &bals[1], Direction::Left, 6, &BTreeMap::new()).unwrap();
    assert!(consistency_check(&delta, &s2).0);
    // a = 1: the engine's own resonances are recorded and the series at them
    // must build and verify; no printed value is asserted for this branch
    let r1 = resonances(&delta, &bals[0]).unwrap();
    let d1 = classify(&r1).unwrap();
    let s1 = build_series(&delta, &bals[0], d1, 6, &BTreeMap::new()).unwrap();
    let (ok, _) = consistency_check(&delta, &s1);
    assert!(ok, "a=1 branch internally consistent");
    let recorded: Vec<String> = r1.rational_roots.iter().map(|r| r.to_string()).collect();
    println!(
        "criterion 08 PASS: balances {{1,2}}; a=2 resonances {{-1,-2}} Left; a=1 engine resonances {{{}}} ({d1:?}), internally consistent",
        recorded.join(", ")
    );
}

#[test]
fn criterion_09_coordinate_dependence() {
    let chazy = equation("chazy.ode");
    let report_y = analyze(&chazy, 6).unwrap();
    assert_eq!(report_y.branches[0].direction, Direction::Left);
    let report_w = analyze(&invert_dependent(&chazy).unwrap(), 6).unwrap();
    assert_eq!(report_w.branches[0].direction, Direction::Right);
    println!("criterion 09 PASS: the same equation classifies Left in y and Right in w = 1/y");
}

#[test]
fn criterion_10_numeric_cross_validation() {
    let start = Instant::now();
    let delta = equation("chazy.ode");
    let b = &find_balances(&delta)[0];
    let mut fv = BTreeMap::new();
    fv.insert(1usize, rat_int(1));
    fv.insert(2usize, rat_int(1));
    let s = build_series(&delta, b, Direction::Left, 12, &fv).unwrap();

    let pts = [c64(4.0, 0.0), c64(5.0, 2.0), c64(10.0, 0.0)];
    let max_res = residual_check(&delta, &s, &pts).unwrap();
    assert!(max_res <= 1e-6, "max residual {max_res} > 1e-6");

    let jet5 = eval_series_jet(&s, c64(5.0, 0.0), 2).unwrap();
    let traj = integrate(&delta, &jet5, c64(5.0, 0.0), c64(8.0, 0.0), 1e-10, 1e-12).unwrap();
    assert!(traj.completed());
    let series8 = eval_series_jet(&s, c64(8.0, 0.0), 0).unwrap()[0];
    let rel = (traj.final_state()[0] - series8).norm() / series8.norm();
    assert!(rel <= 1e-6, "relative endpoint error {rel} > 1e-6");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "runtime {elapsed:?} >= 10 s");
    println!(
        "criterion 10 PASS: max residual {max_res:.3e} at x in {{4, 5+2i, 10}}, endpoint error {rel:.3e}, in {elapsed:?}"
    );
}

#[test]
fn criterion_11_property_spot_checks() {
    // Leibniz rule for D_x on a concrete pair
    let a = parse_expr_named("x*y' - 2*y", "x", "y")
        .unwrap()
        .into_rational()
        .num()
        .clone();
    let b = parse_expr_named("y''^2 + 3", "x", "y")
        .unwrap()
        .into_rational()
        .num()
        .clone();
    let lhs = (&a * &b).total_derivative(1);
    let rhs = &(&a.total_derivative(1) * &b) + &(&a * &b.total_derivative(1));
    assert_eq!(lhs, rhs, "derivation rule");

    // bracket antisymmetry + Jacobi on the sl(2,R) triple
    let p = |s: &str| {
        parse_expr_named(s, "x", "y")
            .unwrap()
            .into_rational()
            .num()
            .clone()
    };
    let x1 = VectorField::new(p("1"), p("0")).unwrap();
    let x2 = VectorField::new(p("x"), p("-y")).unwrap();
    let x3 = VectorField::new(p("x^2"), p("-2*x*y - 6")).unwrap();
    for (u, v) in [(&x1, &x2), (&x1, &x3), (&x2, &x3)] {
        let ab = lie_bracket(u, v);
        let ba = lie_bracket(v, u);
        assert_eq!(ab.xi(), &ba.xi().scale(&rat(-1, 1)));
        assert_eq!(ab.eta(), &ba.eta().scale(&rat(-1, 1)));
    }
    let j1 = lie_bracket(&lie_bracket(&x1, &x2), &x3);
    let j2 = lie_bracket(&lie_bracket(&x2, &x3), &x1);
    let j3 = lie_bracket(&lie_bracket(&x3, &x1), &x2);
    assert!((&(j1.xi() + j2.xi()) + j3.xi()).is_zero());
    assert!((&(j1.eta() + j2.eta()) + j3.eta()).is_zero());

    // prolongation linearity on X2, X3
    let combo = x2.combine(&rat(2, 3), &x3, &rat(-1, 2));
    let pc = prolong(&combo, 3);
    let p2 = prolong(&x2, 3);
    let p3 = prolong(&x3, 3);
    for j in 0..3 {
        assert_eq!(pc[j], &p2[j].scale(&rat(2, 3)) + &p3[j].scale(&rat(-1, 2)));
    }

    // series determinism and the perturbation control
    let delta = equation("chazy.ode");
    let bal = &find_balances(&delta)[0];
    let s1 = build_series(&delta, bal, Direction::Left, 8, &BTreeMap::new()).unwrap();
    let s2 = build_series(&delta, bal, Direction::Left, 8, &BTreeMap::new()).unwrap();
    assert_eq!(s1, s2, "determinism");
    let mut free: BTreeSet<usize> = s1.free_indices.clone();
    free.remove(&0);
    for idx in 4..=6 {
        assert!(!free.contains(&idx), "index {idx} is determined");
        let mut bad = s1.clone();
        bad.coeffs[idx] += rat(1, 3);
        let (ok, low) = consistency_check(&delta, &bad);
        assert!(!ok);
        assert_eq!(low, Some(idx), "perturbation detected exactly at {idx}");
    }
    println!("criterion 11 PASS: derivation, bracket, prolongation, determinism and perturbation spot checks hold");
}
