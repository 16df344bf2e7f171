//! Finite transformations of the symmetry pseudo-group on `J^0`.

use super::{combine, J0};
use crate::algebra::linalg::Numeric;
use crate::algebra::poly::v;
use crate::algebra::{Monomial, PolyExpr, Scalar, Var};
use crate::error::{Error, Result};
use crate::jet::DualScalar;
use crate::report::{CheckReport, Failure, Rule};
use crate::rng;

/// Five functions of `(t, z)` parametrizing a transformation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoGroupElement {
    pub a: PolyExpr,
    pub b: PolyExpr,
    pub c: PolyExpr,
    pub d: PolyExpr,
    pub e: PolyExpr,
}

impl PseudoGroupElement {
    pub fn identity() -> Self {
        PseudoGroupElement {
            a: v(Var::T),
            b: v(Var::Z),
            c: PolyExpr::one(),
            d: PolyExpr::zero(),
            e: PolyExpr::zero(),
        }
    }

    fn params(&self) -> [&PolyExpr; 5] {
        [&self.a, &self.b, &self.c, &self.d, &self.e]
    }
}

/// A function of `(t, z)` and its derivatives up to order two at a point.
#[derive(Clone, Debug)]
struct Derivs<T> {
    f: T,
    t: T,
    z: T,
    tt: T,
    tz: T,
    zz: T,
}

fn derivs_at(e: &PolyExpr, t: &Scalar, z: &Scalar) -> Derivs<Scalar> {
    let mut at = std::collections::BTreeMap::new();
    at.insert(Var::T, t.clone());
    at.insert(Var::Z, z.clone());
    let ev = |p: &PolyExpr| p.evaluate(&at).expect("parameter in t, z");
    let (et, ez) = (e.partial_derivative(&Var::T), e.partial_derivative(&Var::Z));
    Derivs {
        f: ev(e),
        tt: ev(&et.partial_derivative(&Var::T)),
        tz: ev(&et.partial_derivative(&Var::Z)),
        zz: ev(&ez.partial_derivative(&Var::Z)),
        t: ev(&et),
        z: ev(&ez),
    }
}

fn dual_derivs(value: Derivs<Scalar>, eps: Derivs<Scalar>) -> Derivs<DualScalar> {
    Derivs {
        f: DualScalar::new(value.f, eps.f),
        t: DualScalar::new(value.t, eps.t),
        z: DualScalar::new(value.z, eps.z),
        tt: DualScalar::new(value.tt, eps.tt),
        tz: DualScalar::new(value.tz, eps.tz),
        zz: DualScalar::new(value.zz, eps.zz),
    }
}

/// The transformation formulas over any number system.
fn transform<N: Numeric>(g: &[Derivs<N>; 5], point: &[N; 7]) -> Result<[N; 7]> {
    let [a, b, c, d, e] = g;
    let [_, x, y, _, p, q, r] = point.clone();
    let inv_at = a.t.inv().ok_or(Error::SingularJacobian)?;
    let inv_bz = b.z.inv().ok_or(Error::SingularJacobian)?;
    let half = N::from_scalar(&Scalar::new(1, 2));
    let two = N::from_scalar(&Scalar::from_int(2));
    let xx = x.clone() * c.f.clone() * inv_at.clone() - y.clone() * b.t.clone() + d.f.clone();
    let yy = y.clone() * c.f.clone() * inv_bz.clone() - x.clone() * a.z.clone() + e.f.clone();
    let pp = p.clone() * c.f.clone() * inv_at.clone() * inv_at.clone() - d.t.clone()
        - x.clone() * c.t.clone()
        + y.clone() * b.tt.clone()
        - two.clone() * q.clone() * b.t.clone()
        + x.clone() * a.tt.clone();
    let qq = q.clone() * c.f.clone() * inv_bz.clone() * inv_at
        - half
            * (e.t.clone() + d.z.clone() + x.clone() * c.z.clone() + y.clone() * c.t.clone())
        + y.clone() * b.tz.clone()
        - r.clone() * b.t.clone()
        + x.clone() * a.tz.clone()
        - p * a.z.clone();
    let rr = r * c.f.clone() * inv_bz.clone() * inv_bz - e.z.clone() - y.clone() * c.z.clone()
        + y * b.zz.clone()
        + x * a.zz.clone()
        - two * q * a.z.clone();
    Ok([a.f.clone(), xx, yy, b.f.clone(), pp, qq, rr])
}

/// Image of a point of `J^0`, in the order `t, x, y, z, p, q, r`.
pub fn pseudo_group_apply(el: &PseudoGroupElement, point: &[Scalar; 7]) -> Result<[Scalar; 7]> {
    let (t, z) = (&point[0], &point[3]);
    let g = el.params().map(|e| derivs_at(e, t, z));
    transform(&g, point)
}

/// First-order part of the element `(t + εa, z + εb, 1 + εc, εd, εe)`.
pub fn infinitesimal_image(params: &[PolyExpr; 5], point: &[Scalar; 7]) -> Result<[Scalar; 7]> {
    let (t, z) = (&point[0], &point[3]);
    let id = PseudoGroupElement::identity();
    let g: [Derivs<DualScalar>; 5] = std::array::from_fn(|i| {
        dual_derivs(derivs_at(id.params()[i], t, z), derivs_at(&params[i], t, z))
    });
    let pt = point.clone().map(DualScalar::constant);
    Ok(transform(&g, &pt)?.map(|x| x.eps))
}

fn random_tz_poly(r: &mut rng::SampleRng, degree: u32) -> PolyExpr {
    let mut out = PolyExpr::zero();
    for s in 0..=degree {
        for m in 0..=s {
            let coef = rng::small_int(r);
            if coef != 0 {
                out.add_term(
                    Monomial::from_pairs(vec![(Var::Z, m), (Var::T, s - m)]),
                    Scalar::from_int(coef),
                );
            }
        }
    }
    out
}

/// Checks that the derivative of the finite action at the identity is
/// `X1(a) + ... + X5(e)`, and that the identity element fixes points.
pub fn infinitesimal_consistency(tuples: usize, points: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut r = rng::rng(seed);
    let params: Vec<[PolyExpr; 5]> = (0..tuples)
        .map(|_| std::array::from_fn(|_| random_tz_poly(&mut r, 2)))
        .collect();
    let pts: Vec<[Scalar; 7]> = (0..points)
        .map(|_| std::array::from_fn(|_| Scalar::from_int(rng::small_int(&mut r))))
        .collect();
    let mut cons = CheckReport::new(
        "pseudogroup.infinitesimal",
        "the finite action differentiates to the sum of the five generator families",
        Rule::All,
    )
    .with_seed(seed);
    for ps in &params {
        let field = combine(ps);
        for pt in &pts {
            let at: std::collections::BTreeMap<Var, Scalar> =
                J0.iter().cloned().zip(pt.iter().cloned()).collect();
            let expect = field.evaluate(&at)?;
            let got = infinitesimal_image(ps, pt)?;
            cons.record(got == expect, || {
                Failure::new(format!("at {pt:?}: ε-part {got:?}, generator gives {expect:?}"))
                    .with_generator(format!("{ps:?}"))
            });
        }
    }
    let mut ident = CheckReport::new(
        "pseudogroup.identity",
        "the identity element fixes every point",
        Rule::All,
    )
    .with_seed(seed);
    let id = PseudoGroupElement::identity();
    for pt in &pts {
        let img = pseudo_group_apply(&id, pt)?;
        ident.record(&img == pt, || Failure::new(format!("{pt:?} moved to {img:?}")));
    }
    Ok(vec![cons, ident])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::c;

    fn ints(xs: [i64; 7]) -> [Scalar; 7] {
        xs.map(Scalar::from_int)
    }

    #[test]
    fn substitution_example() {
        let el = PseudoGroupElement {
            a: &c(2) * &v(Var::T),
            b: v(Var::Z),
            c: c(2),
            d: PolyExpr::zero(),
            e: PolyExpr::zero(),
        };
        let img = pseudo_group_apply(&el, &ints([1; 7])).unwrap();
        let mut expect = ints([2, 1, 2, 1, 0, 1, 2]);
        expect[4] = Scalar::new(1, 2);
        assert_eq!(img, expect);
    }

    #[test]
    fn singular_jacobian() {
        let mut el = PseudoGroupElement::identity();
        el.a = v(Var::Z);
        assert!(matches!(
            pseudo_group_apply(&el, &ints([0; 7])),
            Err(Error::SingularJacobian)
        ));
    }

    #[test]
    fn identity_and_consistency() {
        for r in infinitesimal_consistency(4, 4, 11).unwrap() {
            assert!(r.ok(), "{}", r.summary_line());
        }
    }

    #[test]
    fn translation_moves_t() {
        let params = [c(1), c(0), c(0), c(0), c(0)];
        let img = infinitesimal_image(&params, &ints([3, 1, 4, 1, 5, 9, 2])).unwrap();
        assert_eq!(img, ints([1, 0, 0, 0, 0, 0, 0]));
    }
}
