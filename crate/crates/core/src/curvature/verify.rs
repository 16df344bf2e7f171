use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{determinant4, half_block, pr_metric, weyl_half_parts, HalfBlock};
use crate::algebra::{PolyExpr, Scalar};
use crate::error::Result;
use crate::jet::sample::{equation_values, random_germ, sample_sde_germ};
use crate::jet::JetGerm;
use crate::report::{CheckReport, Failure, Rule};
use crate::rng;

/// Which half of the Weyl operator vanishes on solutions, for the volume
/// form `dt∧dx∧dy∧dz`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    PlusVanishes,
    MinusVanishes,
}

impl Orientation {
    pub fn vanishing_is_plus(self) -> bool {
        self == Orientation::PlusVanishes
    }
}

#[derive(Clone, Debug)]
pub struct SdeDerivation {
    pub orientation: Orientation,
    pub reports: Vec<CheckReport>,
    /// The five block components at each on-equation sample.
    pub on_components: Vec<[Scalar; 5]>,
}

struct Sampled {
    germ: JetGerm,
    seed: u64,
    plus: HalfBlock,
    minus: HalfBlock,
    cross_zero: bool,
}

fn analyse(germ: JetGerm, seed: u64) -> Result<Sampled> {
    let halves = weyl_half_parts(&germ)?;
    Ok(Sampled {
        plus: half_block(&halves, true),
        minus: half_block(&halves, false),
        cross_zero: halves.cross.is_zero(),
        germ,
        seed,
    })
}

fn structurally_sound(b: &HalfBlock) -> bool {
    b.m.trace().is_zero() && b.s == b.s.transpose()
}

/// Finds the half of the Weyl operator that vanishes on 2-jets of
/// solutions, then checks it vanishes at every on-equation sample and is
/// nonzero at generic off-equation samples.
pub fn derive_sde_and_verify(samples: usize, seed: u64) -> Result<SdeDerivation> {
    let on: Vec<Sampled> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = rng::sample_seed(seed, i as u64);
            analyse(sample_sde_germ(2, s)?, s)
        })
        .collect::<Result<_>>()?;
    let off: Vec<Sampled> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = rng::sample_seed(seed, (samples + i) as u64);
            let mut r = rng::rng(s);
            loop {
                let g = random_germ(2, &mut r);
                if equation_values(&g)?.iter().any(|f| !f.is_zero()) {
                    return analyse(g, s);
                }
            }
        })
        .collect::<Result<_>>()?;

    let plus_zero = on.iter().filter(|s| s.plus.is_zero()).count();
    let minus_zero = on.iter().filter(|s| s.minus.is_zero()).count();
    let orientation = if plus_zero >= minus_zero {
        Orientation::PlusVanishes
    } else {
        Orientation::MinusVanishes
    };
    let pick = |s: &Sampled| -> (HalfBlock, HalfBlock) {
        if orientation.vanishing_is_plus() {
            (s.plus.clone(), s.minus.clone())
        } else {
            (s.minus.clone(), s.plus.clone())
        }
    };

    let mut on_rep = CheckReport::new(
        "derive-sde.on-equation",
        "one half of the Weyl operator vanishes at every 2-jet solving the system",
        Rule::All,
    )
    .with_seed(seed);
    let mut on_components = Vec::with_capacity(on.len());
    let mut other_nonzero = 0;
    for s in &on {
        let (van, other) = pick(s);
        if !other.is_zero() {
            other_nonzero += 1;
        }
        on_components.push(van.components());
        on_rep.record(van.is_zero(), || {
            Failure::new("vanishing block has a nonzero entry")
                .with_germ(&s.germ)
                .with_seed(s.seed)
        });
    }
    on_rep.detail("orientation", orientation);
    on_rep.detail("plus_zero_count", plus_zero);
    on_rep.detail("minus_zero_count", minus_zero);
    on_rep.detail("other_half_nonzero_count", other_nonzero);

    let mut off_rep = CheckReport::new(
        "derive-sde.off-equation",
        "the same half has a nonzero component at generic 2-jets off the equation",
        Rule::AtLeast { num: 95, den: 100 },
    )
    .with_seed(seed);
    for s in &off {
        let (van, _) = pick(s);
        let nonzero = van.components().iter().any(|x| !x.is_zero());
        off_rep.record(nonzero, || {
            Failure::new("all five components vanish off the equation")
                .with_germ(&s.germ)
                .with_seed(s.seed)
        });
    }

    let mut struct_rep = CheckReport::new(
        "derive-sde.structure",
        "both halves are trace-free and self-adjoint on their eigenspaces and the Weyl operator is block diagonal",
        Rule::All,
    )
    .with_seed(seed);
    for s in on.iter().chain(&off) {
        let ok = s.cross_zero && structurally_sound(&s.plus) && structurally_sound(&s.minus);
        struct_rep.record(ok, || {
            Failure::new("block structure violated")
                .with_germ(&s.germ)
                .with_seed(s.seed)
        });
    }

    Ok(SdeDerivation {
        orientation,
        reports: vec![on_rep, off_rep, struct_rep],
        on_components,
    })
}

/// Signed sum over permutations, independent of the cofactor expansion.
pub fn leibniz_determinant(m: &[[PolyExpr; 4]; 4]) -> PolyExpr {
    let mut acc = PolyExpr::zero();
    for perm in permutations4() {
        let inversions = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let term = (0..4).fold(PolyExpr::one(), |t, i| &t * &m[i][perm[i]]);
        acc = if inversions % 2 == 0 { acc + &term } else { acc - &term };
    }
    acc
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = vec![];
    for a in 0..4 {
        for b in (0..4).filter(|&b| b != a) {
            for c in (0..4).filter(|&c| c != a && c != b) {
                out.push([a, b, c, 6 - a - b - c]);
            }
        }
    }
    out
}

/// `det g = 1/16` identically in `p, q, r`, by cofactors and by the
/// permutation sum.
pub fn determinant_check() -> CheckReport {
    let g = pr_metric();
    let expect = PolyExpr::constant(Scalar::new(1, 16));
    let mut rep = CheckReport::new(
        "derive-sde.determinant",
        "the metric determinant is the constant 1/16",
        Rule::All,
    );
    for (route, d) in [("cofactor", determinant4(&g)), ("permutation", leibniz_determinant(&g))] {
        rep.record(d == expect, || Failure::new(format!("{route} route gives {d}")));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_routes_agree() {
        assert!(determinant_check().ok());
        let mut m = pr_metric();
        m[1][0] = PolyExpr::zero();
        assert_eq!(leibniz_determinant(&m), determinant4(&m));
        assert_ne!(leibniz_determinant(&m), PolyExpr::constant(Scalar::new(1, 16)));
    }

    #[test]
    fn small_run_passes() {
        let d = derive_sde_and_verify(12, 3).unwrap();
        for r in &d.reports {
            assert!(r.ok(), "{}", r.summary_line());
        }
        assert!(d.on_components.iter().all(|c| c.iter().all(Scalar::is_zero)));
    }
}
