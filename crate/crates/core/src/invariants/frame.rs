//! The Tresse frame dual to `d̂I_1, …, d̂I_4` and the metric in that frame.
//!
//! With `J_{mi} = D_m I_i` the frame `∂̂_{I_j} = Σ_m B_{jm} D_m` satisfies
//! `B J = 1`, and `G = B g Bᵀ`.

use crate::algebra::linalg::{invert, Numeric};
use crate::algebra::poly::v;
use crate::algebra::{Assignment, Matrix, PolyExpr, Scalar, Var};
use crate::error::{Error, Result};
use crate::jet::{linearize, DualScalar, JetGerm, Linearized};

use super::{InvariantCatalog, K_POWERS};

/// Upper-triangular slots `(i, j)` of the nine ratios `G_ij / G_44`.
pub const RATIO_SLOTS: [(usize, usize); 9] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
];

/// Values that determine the frame at a point: `K`, `K_i`, their total
/// derivatives and `p, q, r`.
#[derive(Clone, Debug)]
pub struct FrameInputs<N> {
    pub k: N,
    pub num: [N; 4],
    pub dk: [N; 4],
    pub dnum: [[N; 4]; 4],
    pub pqr: [N; 3],
}

impl<N> FrameInputs<N> {
    pub fn map<M>(&self, f: impl Fn(&N) -> M) -> FrameInputs<M> {
        FrameInputs {
            k: f(&self.k),
            num: self.num.each_ref().map(&f),
            dk: self.dk.each_ref().map(&f),
            dnum: self.dnum.each_ref().map(|r| r.each_ref().map(&f)),
            pqr: self.pqr.each_ref().map(&f),
        }
    }
}

fn check_order(j: &JetGerm) -> Result<()> {
    if j.order() < 3 {
        return Err(Error::OrderTooLow {
            have: j.order(),
            need: 3,
        });
    }
    Ok(())
}

impl FrameInputs<Scalar> {
    pub fn evaluate(cat: &InvariantCatalog, j: &JetGerm) -> Result<Self> {
        check_order(j)?;
        let ev = |e: &PolyExpr| e.evaluate(j);
        Ok(FrameInputs {
            k: ev(&cat.k)?,
            num: try_map(&cat.numerators, ev)?,
            dk: try_map(&cat.dk, ev)?,
            dnum: [
                try_map(&cat.dnum[0], ev)?,
                try_map(&cat.dnum[1], ev)?,
                try_map(&cat.dnum[2], ev)?,
                try_map(&cat.dnum[3], ev)?,
            ],
            pqr: pqr(j)?,
        })
    }
}

impl FrameInputs<Linearized> {
    pub fn linearize(cat: &InvariantCatalog, j: &JetGerm) -> Result<Self> {
        check_order(j)?;
        let lin = |e: &PolyExpr| linearize(e, j);
        Ok(FrameInputs {
            k: lin(&cat.k)?,
            num: try_map(&cat.numerators, lin)?,
            dk: try_map(&cat.dk, lin)?,
            dnum: [
                try_map(&cat.dnum[0], lin)?,
                try_map(&cat.dnum[1], lin)?,
                try_map(&cat.dnum[2], lin)?,
                try_map(&cat.dnum[3], lin)?,
            ],
            pqr: [lin(&v(Var::P))?, lin(&v(Var::Q))?, lin(&v(Var::R))?],
        })
    }
}

fn try_map<T, N>(xs: &[T; 4], f: impl Fn(&T) -> Result<N>) -> Result<[N; 4]> {
    let [a, b, c, d] = xs;
    Ok([f(a)?, f(b)?, f(c)?, f(d)?])
}

fn pqr(j: &JetGerm) -> Result<[Scalar; 3]> {
    let get = |w| j.value(&w).ok_or(Error::MissingVariable(format!("{w}")));
    Ok([
        get(Var::P)?,
        get(Var::Q)?,
        get(Var::R)?,
    ])
}

fn pow<N: Numeric>(x: &N, k: u32) -> N {
    (0..k).fold(N::one(), |acc, _| acc * x.clone())
}

/// `J`, `B = J⁻¹` and `G = B g Bᵀ` over any number system.
#[derive(Clone, Debug)]
pub struct FrameValues<N> {
    pub jacobian: Vec<Vec<N>>,
    pub b: Vec<Vec<N>>,
    pub g: Vec<Vec<N>>,
}

/// Fails with `SingularJacobian` on the singular set, where `K = 0` or
/// `det J = 0`.
pub fn frame_values<N: Numeric>(inp: &FrameInputs<N>) -> Result<FrameValues<N>> {
    let kinv = inp.k.inv().ok_or(Error::SingularJacobian)?;
    // J_{mi} = D_m K_i / K^w − w K_i D_m K / K^{w+1}
    let jacobian: Vec<Vec<N>> = (0..4)
        .map(|m| {
            (0..4)
                .map(|i| {
                    let w = K_POWERS[i];
                    let kw = pow(&kinv, w);
                    let w_n = N::from_scalar(&Scalar::from_int(w as i64));
                    inp.dnum[i][m].clone() * kw.clone()
                        - w_n * inp.num[i].clone() * inp.dk[m].clone() * kw * kinv.clone()
                })
                .collect()
        })
        .collect();
    let b = invert(&jacobian).ok_or(Error::SingularJacobian)?;
    let [p, q, r] = inp.pqr.clone();
    let half = N::from_scalar(&Scalar::new(1, 2));
    let zero = N::zero;
    let metric = [
        [p, half.clone(), zero(), q.clone()],
        [half.clone(), zero(), zero(), zero()],
        [zero(), zero(), zero(), half.clone()],
        [q, zero(), half, r],
    ];
    let g: Vec<Vec<N>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let mut s = N::zero();
                    for a in 0..4 {
                        for c in 0..4 {
                            s = s + b[i][a].clone() * metric[a][c].clone() * b[j][c].clone();
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    Ok(FrameValues { jacobian, b, g })
}

/// The nine ratios `G_ij / G_44`.
pub fn ratios<N: Numeric>(g: &[Vec<N>]) -> Result<Vec<N>> {
    let inv = g[3][3].inv().ok_or(Error::ZeroG44)?;
    Ok(RATIO_SLOTS
        .iter()
        .map(|&(i, j)| g[i][j].clone() * inv.clone())
        .collect())
}

/// Jacobian `J_{mi} = D_m I_i` and its inverse at a germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TresseFrame {
    pub jacobian: Matrix,
    pub b: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMatrix {
    pub g: Matrix,
    pub ratios: Vec<Scalar>,
}

pub fn tresse_frame(j: &JetGerm) -> Result<TresseFrame> {
    let f = frame_values(&FrameInputs::evaluate(InvariantCatalog::pinned(), j)?)?;
    Ok(TresseFrame {
        jacobian: Matrix::from_rows(f.jacobian),
        b: Matrix::from_rows(f.b),
    })
}

pub fn g_matrix(j: &JetGerm) -> Result<GMatrix> {
    let f = frame_values(&FrameInputs::evaluate(InvariantCatalog::pinned(), j)?)?;
    let ratios = ratios(&f.g)?;
    Ok(GMatrix {
        g: Matrix::from_rows(f.g),
        ratios,
    })
}

/// Ratios and `I_1 … I_4` as dual numbers along one direction.
pub fn dual_invariants(
    lin: &FrameInputs<Linearized>,
    direction: &std::collections::BTreeMap<Var, Scalar>,
) -> Result<(Vec<DualScalar>, Vec<DualScalar>)> {
    let d = lin.map(|l| l.along(direction));
    let kinv = d.k.inv().ok_or(Error::ZeroDenominator)?;
    let is: Vec<DualScalar> = (0..4)
        .map(|i| d.num[i].clone() * pow(&kinv, K_POWERS[i]))
        .collect();
    let f = frame_values(&d)?;
    Ok((is, ratios(&f.g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::inertia;
    use crate::algebra::{determinant, Dir};
    use crate::jet::sample::sample_sde_germ;
    use crate::jet::total_derivative;

    #[test]
    fn duality_and_symmetry() {
        let mut seen = 0;
        for s in 0..6 {
            let g = sample_sde_germ(3, 100 + s).unwrap();
            let Ok(f) = tresse_frame(&g) else { continue };
            seen += 1;
            assert_eq!(f.b.mul(&f.jacobian), Matrix::identity(4));
            let gm = g_matrix(&g).unwrap();
            assert_eq!(gm.g, gm.g.transpose());
            assert_eq!(inertia(&gm.g), (2, 2));
        }
        assert!(seen >= 5);
    }

    #[test]
    fn flat_germ_has_no_frame() {
        assert!(matches!(tresse_frame(&JetGerm::flat(3)), Err(Error::SingularJacobian)));
        assert!(matches!(
            tresse_frame(&JetGerm::flat(2)),
            Err(Error::OrderTooLow { have: 2, need: 3 })
        ));
    }

    #[test]
    fn jacobian_matches_quotient_rule() {
        let g = sample_sde_germ(3, 41).unwrap();
        let cat = InvariantCatalog::pinned();
        let f = tresse_frame(&g).unwrap();
        let k = cat.k.evaluate(&g).unwrap();
        for i in 0..4 {
            let den = cat.k.pow(K_POWERS[i]);
            let dv = den.evaluate(&g).unwrap();
            for d in Dir::ALL {
                let dn = total_derivative(&cat.numerators[i], d).evaluate(&g).unwrap();
                let dd = total_derivative(&den, d).evaluate(&g).unwrap();
                let n = cat.numerators[i].evaluate(&g).unwrap();
                let expect = (&(&dn * &dv) - &(&n * &dd)) / &(&dv * &dv);
                assert_eq!(f.jacobian[(d.index(), i)], expect);
            }
        }
        assert!(!k.is_zero());
        assert!(!determinant(&f.jacobian).is_zero());
    }

    #[test]
    fn dual_route_matches_direct() {
        let g = sample_sde_germ(3, 7).unwrap();
        let lin = FrameInputs::linearize(InvariantCatalog::pinned(), &g).unwrap();
        let (is, rs) = dual_invariants(&lin, &Default::default()).unwrap();
        let gm = g_matrix(&g).unwrap();
        assert_eq!(rs.iter().map(|d| d.value.clone()).collect::<Vec<_>>(), gm.ratios);
        let i1 = super::super::evaluate_invariant(super::super::Which::I1, &g).unwrap();
        assert_eq!(is[0].value, i1);
    }
}
