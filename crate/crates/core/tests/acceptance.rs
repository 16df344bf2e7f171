//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Orders 6 and 7 of the dimension table run only with
//! `SDEINV_HIGH_ORDERS=1`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use sdeinv_core::algebra::MultiIndex;
use sdeinv_core::counting::formulas::leading_term_check;
use sdeinv_core::counting::{closed_forms, dimension_table, series_check, verify_free_action, Family};
use sdeinv_core::curvature::{derive_sde_and_verify, determinant_check};
use sdeinv_core::invariants::{
    evaluate_invariant, g_ratio_invariance, independence_check, invariance_check,
};
use sdeinv_core::symmetry::{
    infinitesimal_consistency, invariant_two_tensors, lifted_invariance_check,
    shape_lie_derivative_check, stabilizer_reports, verify_commutator_table, verify_tangency,
};
use sdeinv_core::{rng, CheckReport, Dir, Fiber, JetGerm, Result, Scalar, Which};

const SEED: u64 = 2024;

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: vec![] }
    }

    fn reports(&mut self, reps: &[CheckReport]) {
        for r in reps {
            self.ok &= r.ok();
            self.notes.push(format!("{} {}/{}", r.id, r.passed, r.attempted));
        }
    }

    fn expect(&mut self, cond: bool, what: impl Into<String>) {
        let what = what.into();
        if !cond {
            self.ok = false;
            self.notes.push(format!("failed: {what}"));
        }
    }
}

fn seed(id: &str) -> u64 {
    rng::check_seed(SEED, id)
}

fn c1_derivation() -> Result<Outcome> {
    let mut o = Outcome::new();
    let start = Instant::now();
    let d = derive_sde_and_verify(200, seed("c1"))?;
    o.reports(&d.reports);
    let on = &d.reports[0];
    o.expect(on.attempted == 200 && on.passed == 200, "200/200 on-equation");
    let other = on.details["other_half_nonzero_count"].as_u64().unwrap_or(0);
    o.expect(other * 100 >= 95 * 200, format!("other half nonzero at {other}/200"));
    o.expect(d.reports[1].attempted == 200, "200 off-equation samples");
    let el = start.elapsed();
    o.expect(el < Duration::from_secs(60), format!("runtime {el:?}"));
    o.notes.push(format!("orientation {:?}", d.orientation));
    Ok(o)
}

fn c2_determinant() -> Result<Outcome> {
    let mut o = Outcome::new();
    o.reports(&[determinant_check()]);
    Ok(o)
}

fn c3_tangency() -> Result<Outcome> {
    let mut o = Outcome::new();
    let reps = verify_tangency(50, seed("c3"), 4)?;
    o.expect(reps[0].attempted == 50 * 75, "75 generators at 50 germs");
    o.reports(&reps);
    Ok(o)
}

fn c4_brackets() -> Result<Outcome> {
    let mut o = Outcome::new();
    o.reports(&verify_commutator_table(3));
    Ok(o)
}

fn c5_dimension_table() -> Result<Outcome> {
    let mut o = Outcome::new();
    let high = std::env::var_os("SDEINV_HIGH_ORDERS").is_some();
    let kmax = if high { 7 } else { 5 };
    let orbit = [7, 19, 42, 70, 99, 133, 172, 216];
    let sde = [7, 19, 46, 94, 169, 277, 424, 616];
    let codim = [0, 0, 4, 24, 70, 144, 252, 400];
    let h = [0, 0, 4, 20, 46, 74, 108, 148];
    let start = Instant::now();
    let t = dimension_table(kmax, seed("c5"))?;
    o.reports(&[t.check()]);
    for r in &t.rows {
        let k = r.k as usize;
        o.expect(r.orbit == orbit[k], format!("dim O_{k} = {}", r.orbit));
        o.expect(r.dim_sde == sde[k], format!("dim SDE_{k} = {}", r.dim_sde));
        o.expect(r.codim == codim[k], format!("s_{k} = {}", r.codim));
        o.expect(r.hilbert == h[k], format!("H({k}) = {}", r.hilbert));
        if (3..=5).contains(&r.k) {
            let kk = r.k as u64;
            o.expect(r.codim == kk * kk * kk + 2 * kk * kk - 5 * kk - 6, format!("cubic at {k}"));
        }
    }
    o.notes.push(format!("kmax {kmax} in {:?}", start.elapsed()));
    Ok(o)
}

fn c6_free_action() -> Result<Outcome> {
    let mut o = Outcome::new();
    for k in 3..=5u32 {
        let r = verify_free_action(k, seed("c6") ^ k as u64)?;
        let rows = r.details["rows"].as_u64().unwrap_or(0);
        let expect = 4 * (k as u64 + 3) * (k as u64 + 2) / 2 + (k as u64 + 2) * (k as u64 + 1) / 2;
        o.expect(rows == expect, format!("k = {k}: {rows} rows"));
        o.reports(&[r]);
    }
    Ok(o)
}

fn c7_closed_forms() -> Result<Outcome> {
    let mut o = Outcome::new();
    o.reports(&[series_check(13), leading_term_check(12)]);
    let spot = [
        (Family::Sde, 2, 4),
        (Family::Sde, 3, 20),
        (Family::Conformal, 2, 1),
        (Family::Conformal, 3, 13),
        (Family::Metric, 2, 9),
    ];
    for (f, k, v) in spot {
        let got = closed_forms(f).hilbert(k);
        o.expect(got == Scalar::from_int(v), format!("{f} H({k}) = {got}"));
    }
    Ok(o)
}

fn c8_single_entry() -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut g = JetGerm::flat(2);
    g.set_jet(Fiber::Q, &MultiIndex::from_dirs(&[Dir::X, Dir::Y]), &Scalar::one());
    let expect = [-2, -2, 0, -2, 0];
    for (w, e) in [Which::K, Which::I1, Which::I2, Which::I3, Which::I4].into_iter().zip(expect) {
        let v = evaluate_invariant(w, &g)?;
        o.expect(v == Scalar::from_int(e), format!("{w:?} = {v}"));
    }
    Ok(o)
}

fn c9_invariance() -> Result<Outcome> {
    let mut o = Outcome::new();
    let inv = invariance_check(100, seed("c9"), 4)?;
    o.expect(inv[0].attempted == 100 * 75, "75 generators at 100 germs");
    o.reports(&inv);
    let g = g_ratio_invariance(25, seed("c9-g"), 4)?;
    o.expect(g[0].attempted == 25 * 75, "75 generators at 25 germs");
    o.reports(&g);
    Ok(o)
}

fn c10_independence() -> Result<Outcome> {
    let mut o = Outcome::new();
    let reps = independence_check(100, 50, seed("c10"))?;
    o.expect(reps[0].attempted == 100 && reps[1].attempted == 50, "sample counts");
    o.reports(&reps);
    Ok(o)
}

fn c11_shape_and_lift() -> Result<Outcome> {
    let mut o = Outcome::new();
    o.reports(&[shape_lie_derivative_check(4), lifted_invariance_check(4)]);
    Ok(o)
}

fn c12_pseudogroup() -> Result<Outcome> {
    let mut o = Outcome::new();
    let reps = infinitesimal_consistency(20, 20, seed("c12"))?;
    o.expect(reps[0].attempted == 400, "20 tuples × 20 points");
    o.reports(&reps);
    Ok(o)
}

fn c13_stabilizer() -> Result<Outcome> {
    let mut o = Outcome::new();
    let inv = invariant_two_tensors();
    o.expect(inv.symmetric.len() == 1, "one symmetric invariant");
    o.expect(inv.skew.len() == 1, "one skew invariant");
    o.reports(&stabilizer_reports());
    Ok(o)
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn() -> Result<Outcome>);
    let criteria: [Criterion; 13] = [
        (1, "half-Weyl block vanishes exactly on the equation", c1_derivation),
        (2, "metric determinant is 1/16", c2_determinant),
        (3, "symmetry tangency with negative control", c3_tangency),
        (4, "commutator table", c4_brackets),
        (5, "dimension table", c5_dimension_table),
        (6, "free action for k = 3, 4, 5", c6_free_action),
        (7, "Hilbert and Poincaré closed forms", c7_closed_forms),
        (8, "invariants at the single-entry germ", c8_single_entry),
        (9, "invariance of I and of the metric ratios", c9_invariance),
        (10, "independence of the invariants", c10_independence),
        (11, "shape and lift", c11_shape_and_lift),
        (12, "pseudo-group consistency", c12_pseudogroup),
        (13, "stabilizer invariant tensors", c13_stabilizer),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let start = Instant::now();
        let (ok, notes) = match run() {
            Ok(o) => (o.ok, o.notes),
            Err(e) => (false, vec![format!("error: {e}")]),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {n:>2}: {name} ({:.1}s) [{}]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            notes.join("; ")
        );
    }
    println!("{} of 13 criteria passed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
