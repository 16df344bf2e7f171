//! Levi-Civita curvature of the metric
//! `g = dt dx + dz dy + p dt² + 2q dt dz + r dz²`
//! with `(p, q, r)` arbitrary functions, the Hodge star on 2-forms and the
//! two halves of the Weyl operator.
//!
//! Conventions:
//! - coordinates are ordered `(t, x, y, z)`;
//! - `Γ^a_bc = ½ g^{ad}(∂_b g_dc + ∂_c g_db − ∂_d g_bc)`;
//! - `R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb`,
//!   `R_abcd = g_ae R^e_bcd`, `Ric_bd = g^{ac} R_abcd`;
//! - `W = R − P ⊙ g` with Schouten tensor `P = ½(Ric − S/6 g)`;
//! - 2-forms use the basis `dt∧dx, dt∧dy, dt∧dz, dx∧dy, dx∧dz, dy∧dz`;
//! - volume form `ε_txyz = +√|det g| = ¼`.

mod verify;

use std::sync::OnceLock;

use crate::algebra::poly::{c, q, v};
use crate::algebra::{linear_solve, Assignment, Dir, Matrix, PolyExpr, Scalar, Var};
use crate::error::Result;
use crate::jet::total_derivative;

pub use verify::{derive_sde_and_verify, determinant_check, leibniz_determinant, Orientation, SdeDerivation};

/// Dense array of `4^rank` components, last index fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    rank: usize,
    data: Vec<PolyExpr>,
}

impl Tensor {
    pub fn zeros(rank: usize) -> Self {
        Tensor {
            rank,
            data: vec![PolyExpr::zero(); 4usize.pow(rank as u32)],
        }
    }

    fn offset(&self, idx: &[usize]) -> usize {
        assert_eq!(idx.len(), self.rank);
        idx.iter().fold(0, |acc, &i| acc * 4 + i)
    }

    pub fn get(&self, idx: &[usize]) -> &PolyExpr {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], e: PolyExpr) {
        let o = self.offset(idx);
        self.data[o] = e;
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(PolyExpr::is_zero)
    }

    pub fn components(&self) -> &[PolyExpr] {
        &self.data
    }
}

fn idx4() -> impl Iterator<Item = [usize; 4]> {
    (0..256).map(|n| [n / 64, (n / 16) % 4, (n / 4) % 4, n % 4])
}

const DIRS: [Dir; 4] = Dir::ALL;

/// The metric as a 4×4 symmetric matrix of polynomials in `p, q, r`.
pub fn pr_metric() -> [[PolyExpr; 4]; 4] {
    let (p, qq, r) = (v(Var::P), v(Var::Q), v(Var::R));
    let h = q(1, 2);
    let z = PolyExpr::zero;
    [
        [p, h.clone(), z(), qq.clone()],
        [h.clone(), z(), z(), z()],
        [z(), z(), z(), h.clone()],
        [qq, z(), h, r],
    ]
}

/// Exact inverse; polynomial because `det g = 1/16`.
pub fn pr_metric_inverse() -> [[PolyExpr; 4]; 4] {
    let (p, qq, r) = (v(Var::P), v(Var::Q), v(Var::R));
    let z = PolyExpr::zero;
    [
        [z(), c(2), z(), z()],
        [c(2), &c(-4) * &p, &c(-4) * &qq, z()],
        [z(), &c(-4) * &qq, &c(-4) * &r, c(2)],
        [z(), z(), c(2), z()],
    ]
}

/// Symbolic determinant by cofactor expansion.
pub fn determinant4(m: &[[PolyExpr; 4]; 4]) -> PolyExpr {
    fn det(m: &[Vec<PolyExpr>]) -> PolyExpr {
        if m.len() == 1 {
            return m[0][0].clone();
        }
        let mut acc = PolyExpr::zero();
        for j in 0..m.len() {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<PolyExpr>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * &det(&minor);
            acc = if j % 2 == 0 { acc + &term } else { acc - &term };
        }
        acc
    }
    let rows: Vec<Vec<PolyExpr>> = m.iter().map(|r| r.to_vec()).collect();
    det(&rows)
}

/// All curvature tensors of the metric, computed once.
#[derive(Debug)]
pub struct Curvature {
    pub g: [[PolyExpr; 4]; 4],
    pub ginv: [[PolyExpr; 4]; 4],
    /// `Γ^a_bc` stored at `[a, b, c]`.
    pub christoffel: Tensor,
    /// `R_abcd`, all indices down.
    pub riemann: Tensor,
    pub ricci: [[PolyExpr; 4]; 4],
    pub scalar: PolyExpr,
    /// `W_abcd`, all indices down.
    pub weyl: Tensor,
}

impl Curvature {
    pub fn compute() -> Self {
        let g = pr_metric();
        let ginv = pr_metric_inverse();
        let dg: Vec<Vec<Vec<PolyExpr>>> = (0..4)
            .map(|a| {
                (0..4)
                    .map(|b| DIRS.iter().map(|&d| total_derivative(&g[a][b], d)).collect())
                    .collect()
            })
            .collect();
        // dg[a][b][c] = ∂_c g_ab
        let mut gamma = Tensor::zeros(3);
        for a in 0..4 {
            for b in 0..4 {
                for cc in b..4 {
                    let mut s = PolyExpr::zero();
                    for d in 0..4 {
                        if ginv[a][d].is_zero() {
                            continue;
                        }
                        let inner = &(&dg[d][cc][b] + &dg[d][b][cc]) - &dg[b][cc][d];
                        s = s + &(&ginv[a][d] * &inner);
                    }
                    let s = s.scale(&Scalar::new(1, 2));
                    gamma.set(&[a, b, cc], s.clone());
                    gamma.set(&[a, cc, b], s);
                }
            }
        }
        let dgamma: Vec<Tensor> = DIRS
            .iter()
            .map(|&d| {
                let mut t = Tensor::zeros(3);
                for (i, e) in gamma.data.iter().enumerate() {
                    t.data[i] = total_derivative(e, d);
                }
                t
            })
            .collect();
        // R^a_bcd
        let mut rup = Tensor::zeros(4);
        for [a, b, cc, d] in idx4() {
            if cc >= d {
                continue;
            }
            let mut s = dgamma[cc].get(&[a, d, b]) - dgamma[d].get(&[a, cc, b]);
            for e in 0..4 {
                s = s + &(gamma.get(&[a, cc, e]) * gamma.get(&[e, d, b]));
                s = s - &(gamma.get(&[a, d, e]) * gamma.get(&[e, cc, b]));
            }
            rup.set(&[a, b, d, cc], -&s);
            rup.set(&[a, b, cc, d], s);
        }
        let mut riemann = Tensor::zeros(4);
        for [a, b, cc, d] in idx4() {
            let mut s = PolyExpr::zero();
            for e in 0..4 {
                if !g[a][e].is_zero() {
                    s = s + &(&g[a][e] * rup.get(&[e, b, cc, d]));
                }
            }
            riemann.set(&[a, b, cc, d], s);
        }
        let mut ricci: [[PolyExpr; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| PolyExpr::zero()));
        for b in 0..4 {
            for d in 0..4 {
                let mut s = PolyExpr::zero();
                for a in 0..4 {
                    for cc in 0..4 {
                        if !ginv[a][cc].is_zero() {
                            s = s + &(&ginv[a][cc] * riemann.get(&[a, b, cc, d]));
                        }
                    }
                }
                ricci[b][d] = s;
            }
        }
        let mut scalar = PolyExpr::zero();
        for b in 0..4 {
            for d in 0..4 {
                if !ginv[b][d].is_zero() {
                    scalar = scalar + &(&ginv[b][d] * &ricci[b][d]);
                }
            }
        }
        let sixth = scalar.scale(&Scalar::new(1, 6));
        let schouten: Vec<Vec<PolyExpr>> = (0..4)
            .map(|a| {
                (0..4)
                    .map(|b| (&ricci[a][b] - &(&sixth * &g[a][b])).scale(&Scalar::new(1, 2)))
                    .collect()
            })
            .collect();
        let mut weyl = Tensor::zeros(4);
        for [a, b, cc, d] in idx4() {
            let kn = &(&schouten[a][cc] * &g[b][d]) + &(&schouten[b][d] * &g[a][cc])
                - &(&schouten[a][d] * &g[b][cc])
                - &(&schouten[b][cc] * &g[a][d]);
            weyl.set(&[a, b, cc, d], riemann.get(&[a, b, cc, d]) - &kn);
        }
        Curvature {
            g,
            ginv,
            christoffel: gamma,
            riemann,
            ricci,
            scalar,
            weyl,
        }
    }

    pub fn get() -> &'static Curvature {
        static CURV: OnceLock<Curvature> = OnceLock::new();
        CURV.get_or_init(Curvature::compute)
    }
}

/// Index pairs `a < b` labelling the 2-form basis.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn levi_civita(i: [usize; 4]) -> i64 {
    let mut sign = 1;
    for a in 0..4 {
        for b in a + 1..4 {
            if i[a] == i[b] {
                return 0;
            }
            if i[a] > i[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `g^{ae} g^{bf} − g^{af} g^{be}`: components of the induced inner product
/// on 2-forms, `⟨ω, η⟩ = Σ_{a<b} ω_ab η^{ab}`.
pub fn two_form_gram() -> Vec<Vec<PolyExpr>> {
    let gi = pr_metric_inverse();
    PAIRS
        .iter()
        .map(|&(a, b)| {
            PAIRS
                .iter()
                .map(|&(e, f)| &(&gi[a][e] * &gi[b][f]) - &(&gi[a][f] * &gi[b][e]))
                .collect()
        })
        .collect()
}

/// Hodge star on 2-forms, `(*ω)_cd = Σ_{a<b} ε_abcd ω^{ab}`.
#[derive(Clone, Debug)]
pub struct HodgeBlock {
    pub star: Vec<Vec<PolyExpr>>,
}

impl HodgeBlock {
    /// `(1 + sign·*)/2`.
    pub fn projector(&self, plus: bool) -> Vec<Vec<PolyExpr>> {
        let half = Scalar::new(1, 2);
        let s = if plus { half.clone() } else { -half.clone() };
        (0..6)
            .map(|i| {
                (0..6)
                    .map(|j| {
                        let id = if i == j { PolyExpr::constant(half.clone()) } else { PolyExpr::zero() };
                        id + &self.star[i][j].scale(&s)
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn hodge_star() -> HodgeBlock {
    let gram = two_form_gram();
    let eps = Scalar::new(1, 4);
    let star = PAIRS
        .iter()
        .map(|&(cc, d)| {
            (0..6)
                .map(|ef| {
                    let mut s = PolyExpr::zero();
                    for (ab, &(a, b)) in PAIRS.iter().enumerate() {
                        let lc = levi_civita([a, b, cc, d]);
                        if lc != 0 {
                            s = s + &gram[ab][ef].scale(&(&eps * &Scalar::from_int(lc)));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    HodgeBlock { star }
}

/// The Weyl tensor as an operator on 2-forms,
/// `(Wω)_cd = Σ_{e<f} g^{ea} g^{fb} W_cdab ω_ef`.
pub fn weyl_operator() -> &'static Vec<Vec<PolyExpr>> {
    static OP: OnceLock<Vec<Vec<PolyExpr>>> = OnceLock::new();
    OP.get_or_init(|| {
        let curv = Curvature::get();
        let gi = &curv.ginv;
        PAIRS
            .iter()
            .map(|&(cc, d)| {
                PAIRS
                    .iter()
                    .map(|&(e, f)| {
                        let mut s = PolyExpr::zero();
                        for a in 0..4 {
                            for b in 0..4 {
                                if gi[e][a].is_zero() || gi[f][b].is_zero() {
                                    continue;
                                }
                                let w = curv.weyl.get(&[cc, d, a, b]);
                                if !w.is_zero() {
                                    s = s + &(&(&gi[e][a] * &gi[f][b]) * w);
                                }
                            }
                        }
                        s
                    })
                    .collect()
            })
            .collect()
    })
}

pub fn eval_matrix(m: &[Vec<PolyExpr>], at: &impl Assignment) -> Result<Matrix> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|e| e.evaluate(at)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows))
}

pub fn poly_matmul(a: &[Vec<PolyExpr>], b: &[Vec<PolyExpr>]) -> Vec<Vec<PolyExpr>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    let mut s = PolyExpr::zero();
                    for k in 0..b.len() {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            s = s + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// The halves `W± = P± W P±` and the cross term `P+ W P−` at a point.
#[derive(Clone, Debug)]
pub struct WeylHalves {
    pub plus: Matrix,
    pub minus: Matrix,
    pub cross: Matrix,
    pub projector_plus: Matrix,
    pub projector_minus: Matrix,
    pub weyl: Matrix,
    pub gram: Matrix,
}

pub fn weyl_half_parts(at: &impl Assignment) -> Result<WeylHalves> {
    let hodge = hodge_star();
    let pp = eval_matrix(&hodge.projector(true), at)?;
    let pm = eval_matrix(&hodge.projector(false), at)?;
    let w = eval_matrix(weyl_operator(), at)?;
    let gram = eval_matrix(&two_form_gram(), at)?;
    Ok(WeylHalves {
        plus: pp.mul(&w).mul(&pp),
        minus: pm.mul(&w).mul(&pm),
        cross: pp.mul(&w).mul(&pm),
        projector_plus: pp,
        projector_minus: pm,
        weyl: w,
        gram,
    })
}

/// The restriction of one half to its 3-dimensional eigenspace of `*`.
#[derive(Clone, Debug)]
pub struct HalfBlock {
    /// Operator in the chosen basis.
    pub m: Matrix,
    /// Induced inner product in the chosen basis.
    pub h: Matrix,
    /// `h·m`, symmetric.
    pub s: Matrix,
}

impl HalfBlock {
    /// `S11, S12, S13, S22, S23`.
    pub fn components(&self) -> [Scalar; 5] {
        let s = &self.s;
        [
            s[(0, 0)].clone(),
            s[(0, 1)].clone(),
            s[(0, 2)].clone(),
            s[(1, 1)].clone(),
            s[(1, 2)].clone(),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }
}

/// Basis from the first three independent columns of the projector.
pub fn half_block(halves: &WeylHalves, plus: bool) -> HalfBlock {
    let proj = if plus { &halves.projector_plus } else { &halves.projector_minus };
    let op = if plus { &halves.plus } else { &halves.minus };
    let zero = vec![Scalar::zero(); 6];
    let pivots = linear_solve(proj, &zero).expect("homogeneous").pivot_cols;
    assert_eq!(pivots.len(), 3, "projector rank must be 3");
    let basis = Matrix::from_rows(
        (0..6).map(|i| pivots.iter().map(|&j| proj[(i, j)].clone()).collect()).collect(),
    );
    let image = op.mul(&basis);
    let mut m = Matrix::zeros(3, 3);
    for j in 0..3 {
        let col: Vec<Scalar> = (0..6).map(|i| image[(i, j)].clone()).collect();
        let sol = linear_solve(&basis, &col).expect("half preserves its eigenspace");
        let x = sol.particular(&[]);
        for i in 0..3 {
            m[(i, j)] = x[i].clone();
        }
    }
    let h = basis.transpose().mul(&halves.gram).mul(&basis);
    let s = h.mul(&m);
    HalfBlock { m, h, s }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetGerm;

    fn ident6() -> Vec<Vec<PolyExpr>> {
        (0..6)
            .map(|i| (0..6).map(|j| if i == j { c(1) } else { PolyExpr::zero() }).collect())
            .collect()
    }

    #[test]
    fn metric_determinant_and_inverse() {
        let g = pr_metric();
        assert_eq!(determinant4(&g), q(1, 16));
        let gi = pr_metric_inverse();
        let gv: Vec<Vec<PolyExpr>> = g.iter().map(|r| r.to_vec()).collect();
        let giv: Vec<Vec<PolyExpr>> = gi.iter().map(|r| r.to_vec()).collect();
        let prod = poly_matmul(&giv, &gv);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(prod[i][j], if i == j { c(1) } else { PolyExpr::zero() });
            }
        }
    }

    #[test]
    fn flat_metric_has_split_signature() {
        let g = eval_matrix(
            &pr_metric().iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
            &JetGerm::flat(0),
        )
        .unwrap();
        assert_eq!(crate::algebra::linalg::inertia(&g), (2, 2));
    }

    #[test]
    fn star_squares_to_identity() {
        let h = hodge_star();
        assert_eq!(poly_matmul(&h.star, &h.star), ident6());
        let tr = (0..6).fold(PolyExpr::zero(), |acc, i| acc + &h.star[i][i]);
        assert!(tr.is_zero());
    }

    #[test]
    fn orders_of_curvature() {
        let curv = Curvature::get();
        assert!(curv.christoffel.components().iter().all(|e| e.jet_order() <= 1));
        assert!(curv.riemann.components().iter().all(|e| e.jet_order() <= 2));
        assert!(curv.weyl.components().iter().all(|e| e.jet_order() <= 2));
    }

    #[test]
    fn riemann_symmetries_and_bianchi() {
        let r = &Curvature::get().riemann;
        for [a, b, cc, d] in idx4() {
            let x = r.get(&[a, b, cc, d]);
            assert_eq!(x, &-r.get(&[b, a, cc, d]));
            assert_eq!(x, &-r.get(&[a, b, d, cc]));
            assert_eq!(x, r.get(&[cc, d, a, b]));
            let bianchi = x + r.get(&[a, cc, d, b]) + r.get(&[a, d, b, cc]);
            assert!(bianchi.is_zero());
        }
    }

    #[test]
    fn weyl_is_trace_free() {
        let curv = Curvature::get();
        for b in 0..4 {
            for d in 0..4 {
                let mut s = PolyExpr::zero();
                for a in 0..4 {
                    for cc in 0..4 {
                        s = s + &(&curv.ginv[a][cc] * curv.weyl.get(&[a, b, cc, d]));
                    }
                }
                assert!(s.is_zero(), "trace ({b},{d}) nonzero");
            }
        }
    }

    #[test]
    fn flat_section_has_no_curvature() {
        let g = JetGerm::flat(2);
        let curv = Curvature::get();
        for t in [&curv.christoffel, &curv.riemann, &curv.weyl] {
            for e in t.components() {
                assert!(e.evaluate(&g).unwrap().is_zero());
            }
        }
        let halves = weyl_half_parts(&g).unwrap();
        assert!(halves.plus.is_zero() && halves.minus.is_zero());
    }
}
