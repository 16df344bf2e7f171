//! Run configuration and the grouped check runner behind the CLI.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{self, formulas, DimensionTable};
use crate::curvature::{derive_sde_and_verify, determinant_check, Orientation};
use crate::error::{Error, Result};
use crate::invariants::{self, I2Reading};
use crate::report::{self, CheckReport};
use crate::rng;
use crate::symmetry;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleCounts {
    pub derive_sde: usize,
    pub tangency: usize,
    pub invariance: usize,
    pub g_ratios: usize,
    pub det_jacobian: usize,
    pub independence: usize,
    pub i2_reading: usize,
    pub pseudogroup_tuples: usize,
    pub pseudogroup_points: usize,
    /// Distinct seeds in the orbit-dimension stability check.
    pub orbit_seeds: usize,
}

impl Default for SampleCounts {
    fn default() -> Self {
        SampleCounts {
            derive_sde: 200,
            tangency: 50,
            invariance: 100,
            g_ratios: 25,
            det_jacobian: 100,
            independence: 50,
            i2_reading: 20,
            pseudogroup_tuples: 20,
            pseudogroup_points: 20,
            orbit_seeds: 3,
        }
    }
}

impl SampleCounts {
    /// Every count replaced by `n`, keeping at least one orbit seed pair.
    pub fn uniform(n: usize) -> Self {
        SampleCounts {
            derive_sde: n,
            tangency: n,
            invariance: n,
            g_ratios: n,
            det_jacobian: n,
            independence: n,
            i2_reading: n,
            pseudogroup_tuples: n,
            pseudogroup_points: n,
            orbit_seeds: n.clamp(2, 3),
        }
    }
}

/// Monomial degree cutoffs `m + n <= d` per check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DegreeCutoffs {
    pub tangency: u32,
    pub brackets: u32,
    pub shape: u32,
    pub invariance: u32,
    pub g_ratios: u32,
}

impl Default for DegreeCutoffs {
    fn default() -> Self {
        DegreeCutoffs {
            tangency: 4,
            brackets: 3,
            shape: 4,
            invariance: 4,
            g_ratios: 4,
        }
    }
}

impl DegreeCutoffs {
    pub fn uniform(d: u32) -> Self {
        DegreeCutoffs {
            tangency: d,
            brackets: d,
            shape: d,
            invariance: d,
            g_ratios: d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: SampleCounts,
    pub max_degree: DegreeCutoffs,
    pub kmax: u32,
    /// Poincaré series terms compared against `H`.
    pub terms: usize,
    /// Stem for `<out>.md` and `<out>.json`.
    pub out: Option<PathBuf>,
    /// Store wall-clock times; off keeps reports byte-stable.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            samples: SampleCounts::default(),
            max_degree: DegreeCutoffs::default(),
            kmax: 5,
            terms: 13,
            out: None,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn check_seed(&self, id: &str) -> u64 {
        rng::check_seed(self.seed, id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckGroup {
    DeriveSde,
    Symmetries,
    Brackets,
    Shape,
    Lift,
    Pseudogroup,
    Invariants,
    GRatios,
    StabilizerTensors,
    Dims,
    Hilbert,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 11] = [
        CheckGroup::DeriveSde,
        CheckGroup::Symmetries,
        CheckGroup::Brackets,
        CheckGroup::Shape,
        CheckGroup::Lift,
        CheckGroup::Pseudogroup,
        CheckGroup::Invariants,
        CheckGroup::GRatios,
        CheckGroup::StabilizerTensors,
        CheckGroup::Dims,
        CheckGroup::Hilbert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckGroup::DeriveSde => "derive-sde",
            CheckGroup::Symmetries => "symmetries",
            CheckGroup::Brackets => "brackets",
            CheckGroup::Shape => "shape",
            CheckGroup::Lift => "lift",
            CheckGroup::Pseudogroup => "pseudogroup",
            CheckGroup::Invariants => "invariants",
            CheckGroup::GRatios => "g-ratios",
            CheckGroup::StabilizerTensors => "stabilizer-tensors",
            CheckGroup::Dims => "dims",
            CheckGroup::Hilbert => "hilbert",
        }
    }
}

impl fmt::Display for CheckGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::BadParameter(format!("unknown check group {s:?}")))
    }
}

/// Reports plus the derived constants some groups produce.
#[derive(Clone, Debug, Default)]
pub struct RunOutcome {
    pub reports: Vec<CheckReport>,
    pub orientation: Option<Orientation>,
    pub i2_reading: Option<I2Reading>,
    pub table: Option<DimensionTable>,
}

impl RunOutcome {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(CheckReport::ok)
    }

    fn absorb(&mut self, other: RunOutcome) {
        self.reports.extend(other.reports);
        self.orientation = self.orientation.or(other.orientation);
        self.i2_reading = self.i2_reading.or(other.i2_reading);
        if other.table.is_some() {
            self.table = other.table;
        }
    }

    /// Check sections, then the derived constants and the dimension table
    /// when present.
    pub fn markdown(&self) -> String {
        let mut s = report::to_markdown(&self.reports);
        if self.orientation.is_some() || self.i2_reading.is_some() {
            s.push_str("\n## Derived constants\n\n");
            if let Some(o) = self.orientation {
                s.push_str(&format!("- orientation: {}\n", to_name(&o)));
            }
            if let Some(r) = self.i2_reading {
                s.push_str(&format!("- i2 reading: {}\n", r.name()));
            }
        }
        if let Some(t) = &self.table {
            s.push_str("\n## Dimension table\n\n");
            s.push_str(&t.to_markdown());
        }
        s
    }

    pub fn json(&self) -> String {
        let checks: serde_json::Value =
            serde_json::from_str(&report::to_json(&self.reports)).expect("valid json");
        let doc = serde_json::json!({
            "all_passed": self.all_passed(),
            "checks": checks["checks"],
            "orientation": self.orientation,
            "i2_reading": self.i2_reading,
            "dimension_table": self.table,
        });
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn write(&self, stem: &std::path::Path) -> Result<()> {
        std::fs::write(stem.with_extension("md"), self.markdown())?;
        std::fs::write(stem.with_extension("json"), self.json())?;
        Ok(())
    }
}

fn to_name(o: &Orientation) -> String {
    serde_json::to_value(o)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn reports(r: Vec<CheckReport>) -> RunOutcome {
    RunOutcome {
        reports: r,
        ..Default::default()
    }
}

pub fn run_group(group: CheckGroup, cfg: &RunConfig) -> Result<RunOutcome> {
    let start = Instant::now();
    let seed = cfg.check_seed(group.name());
    let n = &cfg.samples;
    let d = &cfg.max_degree;
    let mut out = match group {
        CheckGroup::DeriveSde => {
            let der = derive_sde_and_verify(n.derive_sde, seed)?;
            let mut r = der.reports;
            r.push(determinant_check());
            RunOutcome {
                reports: r,
                orientation: Some(der.orientation),
                ..Default::default()
            }
        }
        CheckGroup::Symmetries => reports(symmetry::verify_tangency(n.tangency, seed, d.tangency)?),
        CheckGroup::Brackets => reports(symmetry::verify_commutator_table(d.brackets)),
        CheckGroup::Shape => reports(vec![symmetry::shape_lie_derivative_check(d.shape)]),
        CheckGroup::Lift => reports(vec![symmetry::lifted_invariance_check(d.shape)]),
        CheckGroup::Pseudogroup => reports(symmetry::infinitesimal_consistency(
            n.pseudogroup_tuples,
            n.pseudogroup_points,
            seed,
        )?),
        CheckGroup::Invariants => {
            let mut r = invariants::invariance_check(n.invariance, seed, d.invariance)?;
            r.extend(invariants::independence_check(
                n.det_jacobian,
                n.independence,
                rng::splitmix64(seed ^ 1),
            )?);
            let (chosen, rep) =
                invariants::disambiguate_i2(n.i2_reading, rng::splitmix64(seed ^ 2), d.invariance)?;
            r.push(rep);
            r.push(invariants::weighted_homogeneity());
            RunOutcome {
                reports: r,
                i2_reading: chosen,
                ..Default::default()
            }
        }
        CheckGroup::GRatios => reports(invariants::g_ratio_invariance(n.g_ratios, seed, d.g_ratios)?),
        CheckGroup::StabilizerTensors => reports(symmetry::stabilizer_reports()),
        CheckGroup::Dims => {
            let table = counting::dimension_table(cfg.kmax, seed)?;
            let mut r = vec![table.check()];
            for k in 3..=cfg.kmax {
                r.push(counting::verify_free_action(k, rng::sample_seed(seed, 100 + k as u64))?);
            }
            let seeds: Vec<u64> = (0..n.orbit_seeds as u64)
                .map(|i| rng::sample_seed(seed, 1000 + i))
                .collect();
            r.push(counting::seed_independence(cfg.kmax, &seeds)?);
            RunOutcome {
                reports: r,
                table: Some(table),
                ..Default::default()
            }
        }
        CheckGroup::Hilbert => reports(vec![
            formulas::series_check(cfg.terms),
            formulas::leading_term_check(cfg.terms.saturating_sub(1) as u32),
        ]),
    };
    if cfg.timings {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut out.reports {
            r.elapsed_ms = Some(ms);
        }
    }
    Ok(out)
}

/// Runs the groups concurrently; reports come back ordered by check id.
pub fn run_groups(groups: &[CheckGroup], cfg: &RunConfig) -> Result<RunOutcome> {
    let parts: Vec<RunOutcome> = groups
        .par_iter()
        .map(|&g| run_group(g, cfg))
        .collect::<Result<_>>()?;
    let mut out = RunOutcome::default();
    for p in parts {
        out.absorb(p);
    }
    out.reports.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

pub fn run_all(cfg: &RunConfig) -> Result<RunOutcome> {
    run_groups(&CheckGroup::ALL, cfg)
}
