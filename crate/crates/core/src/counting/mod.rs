//! Orbit dimensions of the symmetry algebra on the prolonged equation,
//! the resulting invariant counts, and the closed-form Hilbert polynomials.

pub mod formulas;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{certified_rank, Matrix, Scalar};
use crate::error::Result;
use crate::jet::sample::random_germ;
use crate::jet::total::{binom, jet_space_dim};
use crate::jet::{sample_with_counts, sde_dim, JetGerm};
use crate::report::{CheckReport, Failure, Rule};
use crate::rng;
use crate::symmetry::prolong::prolonged_row;
use crate::symmetry::{exponent_pairs, Generator};

pub use formulas::{closed_forms, series_check, CountingFormulas, Family, PowerSeries};

/// Generic orbit dimensions below the range where the action is free.
pub const LOW_ORDER_ORBITS: [u64; 3] = [7, 19, 42];

/// Monomial generators spanning `sym^{(k)}` at a point of the slice
/// `t = z = 0`: families 1, 2, 4, 5 up to degree `k + 1`, family 3 up to `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningSet {
    pub k: u32,
    pub generators: Vec<Generator>,
}

impl SpanningSet {
    pub fn new(k: u32) -> Self {
        let generators = (1..=5u8)
            .flat_map(|family| {
                let d = if family == 3 { k } else { k + 1 };
                exponent_pairs(d)
                    .into_iter()
                    .map(move |(m, n)| Generator { family, m, n })
            })
            .collect();
        SpanningSet { k, generators }
    }

    /// `4 C(k+3, 2) + C(k+2, 2)`.
    pub fn expected_len(k: u32) -> usize {
        (4 * binom(k as u64 + 3, 2) + binom(k as u64 + 2, 2)) as usize
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// `(k+2)(5k+13)/2`, valid from `k = 3` on.
pub fn orbit_dim_formula(k: u32) -> u64 {
    let k = k as u64;
    (k + 2) * (5 * k + 13) / 2
}

/// `k³ + 2k² − 5k − 6`, valid from `k = 3` on.
pub fn codim_formula(k: u32) -> u64 {
    let k = k as u64;
    k * k * k + 2 * k * k - 5 * k - 6
}

/// Germ of order `k + 1` on the slice: on the equation for `k >= 2`,
/// unconstrained below.
pub fn orbit_germ(k: u32, seed: u64) -> Result<JetGerm> {
    let mut r = rng::rng(seed);
    if k <= 1 {
        Ok(random_germ(k + 1, &mut r))
    } else {
        sample_with_counts(k + 1, &mut r).map(|(g, _)| g)
    }
}

/// Rows `X^{(k)}` at `j` for every spanning generator.
pub fn spanning_matrix(k: u32, j: &JetGerm) -> Result<Matrix> {
    let set = SpanningSet::new(k);
    let rows: Vec<Vec<Scalar>> = set
        .generators
        .par_iter()
        .map(|g| prolonged_row(&g.field(), k, j))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_rows(rows))
}

/// Dimension of the orbit of `sym` through a random point of `SDE_k`.
pub fn orbit_dimension(k: u32, seed: u64) -> Result<usize> {
    let g = orbit_germ(k, seed)?;
    Ok(certified_rank(&spanning_matrix(k, &g)?))
}

/// Rank of the spanning matrix against its row count.
pub fn verify_free_action(k: u32, seed: u64) -> Result<CheckReport> {
    let g = orbit_germ(k, seed)?;
    let m = spanning_matrix(k, &g)?;
    let rank = certified_rank(&m);
    let mut rep = CheckReport::new(
        format!("counting.free-action.k{k}"),
        "prolonged spanning generators are independent at a generic point",
        Rule::All,
    )
    .with_seed(seed);
    rep.record(rank == m.rows(), || {
        Failure::new(format!("rank {rank} below {} rows", m.rows())).with_germ(&g)
    });
    rep.detail("k", k);
    rep.detail("rows", m.rows());
    rep.detail("cols", m.cols());
    rep.detail("rank", rank);
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionRow {
    pub k: u32,
    pub dim_jet: u64,
    pub dim_sde: u64,
    pub orbit: u64,
    /// Closed form, only where the action is free.
    pub orbit_formula: Option<u64>,
    pub codim: u64,
    pub hilbert: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionTable {
    pub seed: u64,
    pub rows: Vec<DimensionRow>,
}

pub fn dimension_table(kmax: u32, seed: u64) -> Result<DimensionTable> {
    let mut rows = Vec::new();
    let mut prev = 0;
    for k in 0..=kmax {
        let orbit = orbit_dimension(k, rng::sample_seed(seed, k as u64))? as u64;
        let dim_sde = sde_dim(k);
        let codim = dim_sde - orbit;
        rows.push(DimensionRow {
            k,
            dim_jet: jet_space_dim(k),
            dim_sde,
            orbit,
            orbit_formula: (k >= 3).then(|| orbit_dim_formula(k)),
            codim,
            hilbert: codim - prev,
        });
        prev = codim;
    }
    Ok(DimensionTable { seed, rows })
}

impl DimensionTable {
    pub fn to_markdown(&self) -> String {
        let cells = |f: &dyn Fn(&DimensionRow) -> String| {
            self.rows.iter().map(f).collect::<Vec<_>>().join(" | ")
        };
        let sep = "---:|".repeat(self.rows.len());
        [
            format!("| k | {} |", cells(&|r| r.k.to_string())),
            format!("|---|{sep}"),
            format!("| dim J^k | {} |", cells(&|r| r.dim_jet.to_string())),
            format!("| dim SDE_k | {} |", cells(&|r| r.dim_sde.to_string())),
            format!("| dim O_k | {} |", cells(&|r| r.orbit.to_string())),
            format!("| s_k | {} |", cells(&|r| r.codim.to_string())),
            format!("| H(k) | {} |", cells(&|r| r.hilbert.to_string())),
        ]
        .join("\n")
            + "\n"
    }

    /// Internal consistency: closed forms from `k = 3`, the low-order
    /// orbit dimensions, and agreement of `H` with the closed-form
    /// Hilbert polynomial.
    pub fn check(&self) -> CheckReport {
        let mut rep = CheckReport::new(
            "counting.dimension-table",
            "orbit dimensions, codimensions and pure-order counts",
            Rule::All,
        )
        .with_seed(self.seed);
        let sde = closed_forms(Family::Sde);
        for r in &self.rows {
            let k = r.k;
            let mut bad = vec![];
            if k < 3 {
                if r.orbit != LOW_ORDER_ORBITS[k as usize] {
                    bad.push(format!("dim O_{k} = {}", r.orbit));
                }
            } else {
                if Some(r.orbit) != r.orbit_formula {
                    bad.push(format!("dim O_{k} = {} off the closed form", r.orbit));
                }
                if r.codim != codim_formula(k) {
                    bad.push(format!("s_{k} = {} off the closed form", r.codim));
                }
            }
            if Scalar::from_int(r.hilbert as i64) != sde.hilbert(k) {
                bad.push(format!("H({k}) = {} off the Hilbert polynomial", r.hilbert));
            }
            rep.record(bad.is_empty(), || Failure::new(bad.join("; ")));
        }
        rep.detail("table", self);
        rep
    }
}

/// Orbit dimensions for `k <= kmax` agree across the given seeds.
pub fn seed_independence(kmax: u32, seeds: &[u64]) -> Result<CheckReport> {
    let mut rep = CheckReport::new(
        "counting.seed-independence",
        "generic orbit dimension does not depend on the sample",
        Rule::All,
    );
    let mut seen = vec![];
    for k in 0..=kmax {
        let dims: Vec<usize> = seeds
            .iter()
            .map(|&s| orbit_dimension(k, s))
            .collect::<Result<_>>()?;
        rep.record(dims.windows(2).all(|w| w[0] == w[1]), || {
            Failure::new(format!("k = {k}: dimensions {dims:?}"))
        });
        seen.push(dims);
    }
    rep.detail("seeds", seeds);
    rep.detail("dimensions", seen);
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spanning_set_size() {
        for k in 0..8 {
            let s = SpanningSet::new(k);
            assert_eq!(s.len(), SpanningSet::expected_len(k));
        }
        assert_eq!(SpanningSet::expected_len(3), 70);
        assert_eq!(SpanningSet::expected_len(2), 46);
    }

    #[test]
    fn closed_form_orbits() {
        let o: Vec<u64> = (3..8).map(orbit_dim_formula).collect();
        assert_eq!(o, [70, 99, 133, 172, 216]);
        for k in 3..8 {
            assert_eq!(sde_dim(k) - orbit_dim_formula(k), codim_formula(k));
            assert_eq!(orbit_dim_formula(k) as usize, SpanningSet::expected_len(k));
        }
    }

    #[test]
    fn low_orders() {
        assert_eq!(orbit_dimension(0, 3).unwrap(), 7);
        assert_eq!(orbit_dimension(1, 3).unwrap(), 19);
        assert_eq!(orbit_dimension(2, 3).unwrap(), 42);
    }

    #[test]
    fn free_at_three() {
        let rep = verify_free_action(3, 5).unwrap();
        assert!(rep.ok());
        assert_eq!(rep.details["rank"], 70);
    }

    #[test]
    fn not_free_at_two() {
        let rep = verify_free_action(2, 5).unwrap();
        assert!(!rep.ok());
        assert_eq!(rep.details["rank"], 42);
        assert_eq!(rep.details["rows"], 46);
    }

    #[test]
    fn table_to_three() {
        let t = dimension_table(3, 9).unwrap();
        assert!(t.check().ok());
        let h: Vec<u64> = t.rows.iter().map(|r| r.hilbert).collect();
        assert_eq!(h, [0, 0, 4, 20]);
        assert!(t.to_markdown().contains("| dim O_k | 7 | 19 | 42 | 70 |"));
    }
}
