//! Random points of the prolonged equation, built one jet level at a time.
//!
//! At level `ℓ >= 2` the equations `D_σ F_i = 0` with `|σ| = ℓ - 2` read
//! `Σ_τ (∂F_i/∂u_τ) u_{σ+τ} + (terms of lower level) = 0`, so they are
//! affine in the level-`ℓ` jets with coefficients fixed by the first jet.

use crate::algebra::{linear_solve, Assignment, Dir, Fiber, Matrix, MultiIndex, Scalar, Var};
use crate::error::{Error, Result};
use crate::rng::{self, SampleRng};

use super::germ::{compose_to_degree, JetGerm};
use super::total::SDESystem;

/// Attempts allowed before giving up on a degenerate draw.
pub const RETRY_BUDGET: u32 = 32;

/// Free jet coordinates chosen at each level during one successful draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCounts {
    pub unknowns: Vec<usize>,
    pub equations: Vec<usize>,
    pub free: Vec<usize>,
}

impl LevelCounts {
    /// Base variables plus free coordinates up to order `k`.
    pub fn dimension(&self, k: usize) -> usize {
        4 + self.free[..=k].iter().sum::<usize>()
    }
}

fn random_base(rng: &mut SampleRng) -> [Scalar; 4] {
    let x0 = rng::small_nonzero(rng);
    let y0 = rng::small_nonzero(rng);
    [
        Scalar::zero(),
        Scalar::from_int(x0),
        Scalar::from_int(y0),
        Scalar::zero(),
    ]
}

fn fill_level(g: &mut JetGerm, level: u32, rng: &mut SampleRng) {
    for u in Fiber::ALL {
        for s in MultiIndex::all_of_order(level) {
            g.set_jet(u, &s, &Scalar::from_int(rng::small_int(rng)));
        }
    }
}

/// Germ of order `k` at `(0, x0, y0, 0)` with every jet random. Generically
/// off the equation.
pub fn random_germ(k: u32, rng: &mut SampleRng) -> JetGerm {
    let mut g = JetGerm::new(random_base(rng), k);
    for level in 0..=k {
        fill_level(&mut g, level, rng);
    }
    g
}

/// One draw; `None` when a level system is rank deficient.
fn try_sample(k: u32, rng: &mut SampleRng) -> Option<(JetGerm, LevelCounts)> {
    let sys = SDESystem::get();
    let symbols = SDESystem::linear_symbols();
    let mut g = JetGerm::new(random_base(rng), k);
    let mut counts = LevelCounts {
        unknowns: vec![],
        equations: vec![],
        free: vec![],
    };
    for level in 0..=k.min(1) {
        fill_level(&mut g, level, rng);
        let n = 3 * MultiIndex::all_of_order(level).len();
        counts.unknowns.push(n);
        counts.equations.push(0);
        counts.free.push(n);
    }
    if k < 2 {
        return Some((g, counts));
    }
    // coefficients of the level-ℓ jets only depend on the first jet
    let coeffs: Vec<Vec<(Fiber, MultiIndex, Scalar)>> = symbols
        .iter()
        .map(|syms| {
            syms.iter()
                .map(|(w, c)| {
                    let Var::Jet(u, t) = w else { unreachable!() };
                    (*u, *t, c.evaluate(&g).expect("first jet assigned"))
                })
                .filter(|(_, _, c)| !c.is_zero())
                .collect()
        })
        .collect();

    for level in 2..=k {
        let unknowns: Vec<(Fiber, MultiIndex)> = Fiber::ALL
            .iter()
            .flat_map(|&u| MultiIndex::all_of_order(level).into_iter().map(move |s| (u, s)))
            .collect();
        let col = |u: Fiber, s: &MultiIndex| unknowns.iter().position(|(a, b)| *a == u && b == s);
        let sigmas = MultiIndex::all_of_order(level - 2);
        let rows = 3 * sigmas.len();
        let mut a = Matrix::zeros(rows, unknowns.len());
        let mut rhs = Vec::with_capacity(rows);
        for (i, f) in sys.f.iter().enumerate() {
            let series = compose_to_degree(f, &g, level - 2).expect("germ order covers level");
            for (si, s) in sigmas.iter().enumerate() {
                let r = i * sigmas.len() + si;
                for (u, t, c) in &coeffs[i] {
                    let j = col(*u, &(*s + *t)).unwrap();
                    a[(r, j)] += c;
                }
                rhs.push(-series.derivative_at_origin(s));
            }
        }
        let sol = linear_solve(&a, &rhs).ok()?;
        if sol.rank() < rows {
            return None;
        }
        let free: Vec<Scalar> = sol
            .free_cols
            .iter()
            .map(|_| Scalar::from_int(rng::small_int(rng)))
            .collect();
        let x = sol.particular(&free);
        for ((u, s), val) in unknowns.iter().zip(&x) {
            g.set_jet(*u, s, val);
        }
        counts.unknowns.push(unknowns.len());
        counts.equations.push(rows);
        counts.free.push(sol.free_cols.len());
    }
    Some((g, counts))
}

/// Random germ of order `k` satisfying `D_σ F_i = 0` for `|σ| <= k - 2`,
/// together with the per-level counts of the successful draw.
pub fn sample_with_counts(k: u32, rng: &mut SampleRng) -> Result<(JetGerm, LevelCounts)> {
    for _ in 0..RETRY_BUDGET {
        if let Some(out) = try_sample(k, rng) {
            return Ok(out);
        }
    }
    Err(Error::DegenerateSample(RETRY_BUDGET))
}

pub fn sample_sde_germ(k: u32, seed: u64) -> Result<JetGerm> {
    let mut r = rng::rng(seed);
    sample_with_counts(k, &mut r).map(|(g, _)| g)
}

/// Values of `D_σ F_i` at the germ for all `|σ| <= order - 2`.
pub fn equation_residuals(g: &JetGerm, order: u32) -> Result<Vec<Scalar>> {
    if order < 2 {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for f in &SDESystem::get().f {
        let series = compose_to_degree(f, g, order - 2)?;
        for s in MultiIndex::all_up_to(order - 2) {
            out.push(series.derivative_at_origin(&s));
        }
    }
    Ok(out)
}

/// Whether the germ lies on the prolonged equation up to `order`.
pub fn is_on_equation(g: &JetGerm, order: u32) -> Result<bool> {
    Ok(equation_residuals(g, order)?.iter().all(Scalar::is_zero))
}

/// First-order values `F_i` at a 2-jet.
pub fn equation_values(g: &impl Assignment) -> Result<[Scalar; 3]> {
    let sys = SDESystem::get();
    Ok([
        sys.f[0].evaluate(g)?,
        sys.f[1].evaluate(g)?,
        sys.f[2].evaluate(g)?,
    ])
}

/// The base point offsets of the slice used by every sampler.
pub fn on_slice(g: &JetGerm) -> bool {
    g.base_point()[Dir::T.index()].is_zero() && g.base_point()[Dir::Z.index()].is_zero()
}
