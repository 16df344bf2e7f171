//! Prolongation of point fields, evaluated at germs.
//!
//! The coefficient of `X^{(k)}` on `∂_{u_σ}` is
//! `D_σ φ_u + Σ_i a_i u_{σ+1_i}` with generating function
//! `φ_u = X^u − Σ_i a_i u_i` and `a_i` the horizontal components.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{monomial_generators, negative_control, Generator, PointField};
use crate::algebra::poly::v;
use crate::algebra::{Dir, Fiber, MultiIndex, PolyExpr, Scalar, Var};
use crate::error::{Error, Result};
use crate::jet::sample::sample_sde_germ;
use crate::jet::{compose_to_degree, dual_evaluate_poly, JetGerm, SDESystem};
use crate::report::{CheckReport, Failure, Rule};
use crate::rng;

/// `(φ_p, φ_q, φ_r)`.
pub fn generating_functions(x: &PointField) -> [PolyExpr; 3] {
    std::array::from_fn(|k| {
        let u = Fiber::ALL[k];
        let mut phi = x.comps[4 + k].clone();
        for d in Dir::ALL {
            let a = x.horizontal(d);
            if !a.is_zero() {
                phi = phi - &(a * &v(Var::Jet(u, MultiIndex::unit(d))));
            }
        }
        phi
    })
}

/// Components of `X^{(k)}` at a germ, aligned with
/// [`Var::jet_coordinates`]`(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prolonged {
    pub order: u32,
    pub values: Vec<Scalar>,
}

impl Prolonged {
    pub fn coordinates(&self) -> Vec<Var> {
        Var::jet_coordinates(self.order)
    }

    /// As a perturbation map, dropping zero entries.
    pub fn to_map(&self) -> BTreeMap<Var, Scalar> {
        self.coordinates()
            .into_iter()
            .zip(&self.values)
            .filter(|(_, x)| !x.is_zero())
            .map(|(w, x)| (w, x.clone()))
            .collect()
    }
}

/// `X^{(k)}` at `j`; needs `j.order >= k + 1`.
pub fn prolong_eval(x: &PointField, k: u32, j: &JetGerm) -> Result<Prolonged> {
    if j.order() < k + 1 {
        return Err(Error::OrderTooLow {
            have: j.order(),
            need: k + 1,
        });
    }
    let a: Vec<Scalar> = Dir::ALL
        .iter()
        .map(|&d| x.horizontal(d).evaluate(j))
        .collect::<Result<_>>()?;
    let phis = generating_functions(x);
    let mut values = a.clone();
    for (u, phi) in Fiber::ALL.iter().zip(&phis) {
        let series = compose_to_degree(phi, j, k)?;
        for s in MultiIndex::all_up_to(k) {
            let mut val = series.derivative_at_origin(&s);
            for d in Dir::ALL {
                let ad = &a[d.index()];
                if !ad.is_zero() {
                    val += ad * &j.jet(*u, &s.bump(d)).expect("order checked");
                }
            }
            values.push(val);
        }
    }
    Ok(Prolonged { order: k, values })
}

/// `ε`-parts of `F_1, F_2, F_3` along `X^{(2)}` at a germ of order `>= 3`.
pub fn tangency_defect(x: &PointField, j: &JetGerm) -> Result<[Scalar; 3]> {
    let pert = prolong_eval(x, 2, j)?.to_map();
    let sys = SDESystem::get();
    let mut out: [Scalar; 3] = std::array::from_fn(|_| Scalar::zero());
    for (o, f) in out.iter_mut().zip(&sys.f) {
        *o = dual_evaluate_poly(f, j, &pert)?.eps;
    }
    Ok(out)
}

/// Tangency of `X^{(2)}` to the equation for every monomial generator of
/// degree `<= max_degree`, plus the negative control `x ∂_t`.
pub fn verify_tangency(samples: usize, seed: u64, max_degree: u32) -> Result<Vec<CheckReport>> {
    let germs: Vec<(u64, JetGerm)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let s = rng::sample_seed(seed, i as u64);
            sample_sde_germ(3, s).map(|g| (s, g))
        })
        .collect::<Result<_>>()?;
    let gens: Vec<(Generator, PointField)> = monomial_generators(max_degree)
        .into_iter()
        .map(|g| (g, g.field()))
        .collect();
    let per_germ: Vec<Vec<(Generator, bool)>> = germs
        .par_iter()
        .map(|(_, g)| {
            gens.iter()
                .map(|(name, f)| {
                    tangency_defect(f, g).map(|d| (*name, d.iter().all(Scalar::is_zero)))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut rep = CheckReport::new(
        "symmetries.tangency",
        "every prolonged generator is tangent to the second-order equation",
        Rule::All,
    )
    .with_seed(seed);
    for ((s, g), results) in germs.iter().zip(&per_germ) {
        for (name, ok) in results {
            rep.record(*ok, || {
                Failure::new("nonzero directional derivative of an equation")
                    .with_generator(name.to_string())
                    .with_germ(g)
                    .with_seed(*s)
            });
        }
    }
    rep.detail("generators", gens.len());
    rep.detail("germs", germs.len());

    let control = negative_control();
    let mut neg = CheckReport::new(
        "symmetries.negative-control",
        "the non-symmetry x∂_t fails tangency at generic solutions",
        Rule::AtLeast { num: 90, den: 100 },
    )
    .with_seed(seed);
    for (s, g) in &germs {
        let d = tangency_defect(&control, g)?;
        neg.record(d.iter().any(|x| !x.is_zero()), || {
            Failure::new("x∂_t happened to be tangent")
                .with_germ(g)
                .with_seed(*s)
        });
    }
    Ok(vec![rep, neg])
}

/// Base and fiber values of `X^{(k)}` in the order of
/// [`Var::jet_coordinates`], as a plain row.
pub fn prolonged_row(x: &PointField, k: u32, j: &JetGerm) -> Result<Vec<Scalar>> {
    prolong_eval(x, k, j).map(|p| p.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::c;
    use crate::jet::iterated_total_derivative;
    use crate::symmetry::{make_generator, monomial};

    #[test]
    fn translation_prolongs_to_itself() {
        let g = sample_sde_germ(4, 8).unwrap();
        let dt = make_generator(1, &c(1)).unwrap();
        let pr = prolong_eval(&dt, 3, &g).unwrap();
        for (w, val) in pr.coordinates().iter().zip(&pr.values) {
            let expect = if *w == Var::T { Scalar::one() } else { Scalar::zero() };
            assert_eq!(val, &expect, "{w}");
        }
        // the characteristic part alone is minus the total derivative
        let phis = generating_functions(&dt);
        for u in Fiber::ALL {
            let series = compose_to_degree(&phis[u.index()], &g, 3).unwrap();
            for s in MultiIndex::all_up_to(3) {
                assert_eq!(series.derivative_at_origin(&s), -g.jet(u, &s.bump(Dir::T)).unwrap());
            }
        }
    }

    #[test]
    fn x5_generating_functions() {
        let (m, n) = (2, 3);
        let f = make_generator(5, &monomial(m, n)).unwrap();
        let [pp, pq, pr] = generating_functions(&f);
        let e = monomial(m, n);
        let jet = |u, d| v(Var::Jet(u, MultiIndex::unit(d)));
        assert_eq!(pp, -&(&jet(Fiber::P, Dir::Y) * &e));
        let expect_q = &(&monomial(m, n - 1) * &crate::algebra::poly::q(-(n as i64), 2))
            - &(&jet(Fiber::Q, Dir::Y) * &e);
        assert_eq!(pq, expect_q);
        let expect_r = &(&monomial(m - 1, n) * &c(-(m as i64))) - &(&jet(Fiber::R, Dir::Y) * &e);
        assert_eq!(pr, expect_r);
    }

    #[test]
    fn vanishes_on_fiber_over_origin_for_high_degree() {
        // at the origin with the 0-jet and 1-jet zero, X5(z^m t^n) prolonged to
        // order k vanishes when m + n > k + 1
        let j = JetGerm::flat(4);
        for (m, n) in [(3, 2), (5, 0), (0, 6)] {
            let f = make_generator(5, &monomial(m, n)).unwrap();
            assert!(prolong_eval(&f, 3, &j).unwrap().values.iter().all(Scalar::is_zero));
        }
        let f = make_generator(5, &monomial(2, 2)).unwrap();
        assert!(prolong_eval(&f, 3, &j).unwrap().values.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn agrees_with_symbolic_total_derivatives() {
        let g = sample_sde_germ(4, 2).unwrap();
        let f = make_generator(3, &(&v(Var::T) * &v(Var::Z))).unwrap();
        let phis = generating_functions(&f);
        let pr = prolong_eval(&f, 2, &g).unwrap();
        let a: Vec<Scalar> = (0..4).map(|i| f.comps[i].evaluate(&g).unwrap()).collect();
        for (w, val) in pr.coordinates().iter().zip(&pr.values) {
            if let Var::Jet(u, s) = w {
                let mut expect = iterated_total_derivative(&phis[u.index()], s).evaluate(&g).unwrap();
                for d in Dir::ALL {
                    expect += &a[d.index()] * &g.jet(*u, &s.bump(d)).unwrap();
                }
                assert_eq!(val, &expect);
            }
        }
    }

    #[test]
    fn scaling_is_tangent_and_control_is_not() {
        let g = sample_sde_germ(3, 77).unwrap();
        let x3 = make_generator(3, &c(1)).unwrap();
        assert!(tangency_defect(&x3, &g).unwrap().iter().all(Scalar::is_zero));
        assert!(tangency_defect(&negative_control(), &g).unwrap().iter().any(|x| !x.is_zero()));
        let dx = make_generator(4, &c(1)).unwrap();
        assert!(tangency_defect(&dx, &JetGerm::flat(3)).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn order_check() {
        let f = make_generator(4, &c(1)).unwrap();
        assert!(matches!(
            prolong_eval(&f, 2, &JetGerm::flat(2)),
            Err(Error::OrderTooLow { have: 2, need: 3 })
        ));
    }
}
