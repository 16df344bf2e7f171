//! Second-order differential invariants, the relative invariant `K` and the
//! rank test for the singular set.
//!
//! Each `I_i = K_i / K^{w_i}` with `w = (1, 3, 3, 2)`. The numerators are
//! stored as printed; `K_2` and `K_3` are squares.

pub mod frame;
pub mod verify;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::algebra::poly::{c, v};
use crate::algebra::{matrix_rank, Assignment, Dir, Fiber, Matrix, PolyExpr, RatExpr, Scalar, Var};
use crate::error::{Error, Result};
use crate::jet::total_derivative;

pub use frame::{g_matrix, tresse_frame, GMatrix, TresseFrame, RATIO_SLOTS};
pub use verify::{
    disambiguate_i2, g_ratio_invariance, independence_check, invariance_check, weighted_homogeneity,
};

/// Powers of `K` in the denominators of `I_1 … I_4`.
pub const K_POWERS: [u32; 4] = [1, 3, 3, 2];

/// Homogeneity degrees of `K, K_1, …, K_4` in the second-order jets.
pub const WEIGHTS: [u32; 5] = [2, 2, 6, 6, 4];

/// Candidate readings of the ambiguous jet in the last term of `K_2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum I2Reading {
    QYy,
    QZz,
    RYy,
}

impl I2Reading {
    pub const ALL: [I2Reading; 3] = [I2Reading::QYy, I2Reading::QZz, I2Reading::RYy];

    /// The reading under which every generator leaves `I_2` invariant.
    pub const PINNED: I2Reading = I2Reading::QYy;

    pub fn variable(self) -> Var {
        match self {
            I2Reading::QYy => Var::jet(Fiber::Q, &[Dir::Y, Dir::Y]),
            I2Reading::QZz => Var::jet(Fiber::Q, &[Dir::Z, Dir::Z]),
            I2Reading::RYy => Var::jet(Fiber::R, &[Dir::Y, Dir::Y]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            I2Reading::QYy => "q_yy",
            I2Reading::QZz => "q_zz",
            I2Reading::RYy => "r_yy",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    K,
    I1,
    I2,
    I3,
    I4,
}

impl Which {
    pub const ALL: [Which; 5] = [Which::K, Which::I1, Which::I2, Which::I3, Which::I4];

    pub fn name(self) -> &'static str {
        match self {
            Which::K => "K",
            Which::I1 => "I1",
            Which::I2 => "I2",
            Which::I3 => "I3",
            Which::I4 => "I4",
        }
    }
}

fn u(f: Fiber, a: Dir, b: Dir) -> PolyExpr {
    v(Var::jet(f, &[a, b]))
}

/// The eight second-order jets of `K`.
pub fn core_jets() -> [Var; 8] {
    use Dir::{X, Y};
    use Fiber::{P, Q, R};
    [
        Var::jet(P, &[X, Y]),
        Var::jet(P, &[Y, Y]),
        Var::jet(Q, &[X, X]),
        Var::jet(Q, &[X, Y]),
        Var::jet(Q, &[Y, Y]),
        Var::jet(R, &[X, X]),
        Var::jet(R, &[X, Y]),
        Var::jet(R, &[Y, Y]),
    ]
}

/// `K`, the numerators `K_1 … K_4`, the matrix `𝒜` and the total
/// derivatives needed for the Tresse frame.
#[derive(Clone, Debug)]
pub struct InvariantCatalog {
    pub reading: I2Reading,
    pub k: PolyExpr,
    pub numerators: [PolyExpr; 4],
    pub a_matrix: Vec<Vec<PolyExpr>>,
    /// `D_m K`.
    pub dk: [PolyExpr; 4],
    /// `D_m K_i`, indexed `[i][m]`.
    pub dnum: [[PolyExpr; 4]; 4],
}

impl InvariantCatalog {
    pub fn build(reading: I2Reading) -> Self {
        use Dir::{X, Y};
        use Fiber::{P, Q, R};
        let (pxy, pyy) = (u(P, X, Y), u(P, Y, Y));
        let (qxx, qxy, qyy) = (u(Q, X, X), u(Q, X, Y), u(Q, Y, Y));
        let (rxx, rxy, ryy) = (u(R, X, X), u(R, X, Y), u(R, Y, Y));
        let w = v(reading.variable());
        let n = |k: i64| c(k);
        let sum = |ts: Vec<PolyExpr>| ts.into_iter().fold(PolyExpr::zero(), |a, t| a + &t);

        let k = sum(vec![
            &n(2) * &pxy * &rxy,
            -(&pyy * &rxx),
            &n(2) * &qxx * &qyy,
            &n(-2) * &qxy.pow(2),
            &n(2) * &qxy * &ryy,
            ryy.pow(2),
        ]);
        let k1 = sum(vec![
            &n(2) * &pxy * &qxx,
            &pyy * &rxx,
            &n(4) * &qxy.pow(2),
            &n(2) * &qxy * &ryy,
            &n(2) * &qyy * &rxy,
            ryy.pow(2),
        ]);
        let k2 = sum(vec![
            &pxy * &qxx * &ryy,
            -(&pxy * &qyy * &rxx),
            -(&pyy * &qxx * &rxy),
            &pyy * &qxy * &rxx,
            &n(2) * &qxy.pow(2) * &ryy,
            &n(-2) * &qxy * &qyy * &rxy,
            &qxy * &ryy.pow(2),
            -(&w * &rxy * &ryy),
        ])
        .pow(2);
        let k3 = sum(vec![
            &sum(vec![
                &(&(&n(2) * &rxy) - &(&n(2) * &qxx)) * &pxy,
                &n(4) * &pyy * &rxx,
                &(&n(2) * &qyy) * &(&qxx - &rxy),
            ]) * &qxy,
            &n(-4) * &qxy.pow(3),
            &pxy.pow(2) * &rxx,
            &n(-2) * &pxy * &qyy * &rxx,
            &(&qxx - &rxy).pow(2) * &pyy,
            &qyy.pow(2) * &rxx,
        ])
        .pow(2);
        let k4 = sum(vec![
            &sum(vec![
                &n(-12) * &pxy * &rxy,
                &n(-6) * &pyy * &rxx,
                &n(-12) * &qyy * &qxx,
                &n(12) * &qxy.pow(2),
            ]) * &ryy.pow(2),
            &n(-3) * &ryy.pow(4),
            &sum(vec![
                &sum(vec![
                    &n(24) * &pxy * &(&qxx - &rxy),
                    &n(-12) * &pyy * &rxx,
                    &n(-24) * &qyy * &(&qxx + &rxy),
                ]) * &qxy,
                &n(48) * &qxy.pow(3),
                &n(12) * &(&rxy.pow(2) - &qxx.pow(2)) * &pyy,
                &n(12) * &(&qyy.pow(2) - &pxy.pow(2)) * &rxx,
            ]) * &ryy,
            &n(24)
                * &(&(&(&rxy * &(&qxx + &rxy)) * &pyy) + &(&(&qyy * &rxx) * &(&pxy + &qyy)))
                * &qxy,
            &n(-12) * &qxy * &ryy.pow(3),
            &n(3) * &(&(&n(4) * &pxy * &rxy) - &(&pyy * &rxx))
                * &(&(&pyy * &rxx) - &(&n(4) * &qyy * &qxx)),
            &n(-24) * &(&(&pyy * &rxx) + &(&n(2) * &qyy * &rxy)) * &qxy.pow(2),
        ]);

        let z = PolyExpr::zero;
        let a_matrix = vec![
            vec![z(), &(&n(-2) * &qxy) - &(&n(2) * &ryy), &pxy + &qyy, z()],
            vec![z(), &(&n(2) * &pxy) - &(&n(2) * &qyy), &n(2) * &pyy, pyy.clone()],
            vec![&(&n(4) * &qxy) + &ryy, -&rxx, &n(-2) * &qxx, &n(-2) * &qxx],
            vec![&qyy - &pxy, &qxx - &rxy, z(), -&qxy],
            vec![-&pyy, &(&n(2) * &qxy) - &ryy, qyy.clone(), z()],
            vec![&(&n(-2) * &qxx) + &(&n(2) * &rxy), z(), &n(-2) * &rxx, &n(-3) * &rxx],
            vec![&(&n(-2) * &qxy) + &ryy, rxx.clone(), -&rxy, &n(-2) * &rxy],
            vec![&n(-2) * &qyy, &n(2) * &rxy, z(), -&ryy],
        ];

        let numerators = [k1, k2, k3, k4];
        let dk = Dir::ALL.map(|d| total_derivative(&k, d));
        let dnum = std::array::from_fn(|i| Dir::ALL.map(|d| total_derivative(&numerators[i], d)));
        InvariantCatalog {
            reading,
            k,
            numerators,
            a_matrix,
            dk,
            dnum,
        }
    }

    /// Cached catalog for each reading.
    pub fn get(reading: I2Reading) -> &'static InvariantCatalog {
        static CELLS: [OnceLock<InvariantCatalog>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let i = I2Reading::ALL.iter().position(|r| *r == reading).unwrap();
        CELLS[i].get_or_init(|| InvariantCatalog::build(reading))
    }

    pub fn pinned() -> &'static InvariantCatalog {
        Self::get(I2Reading::PINNED)
    }

    /// `I_{i+1}` as a rational function.
    pub fn invariant(&self, i: usize) -> RatExpr {
        RatExpr::new(self.numerators[i].clone(), self.k.pow(K_POWERS[i])).expect("K is nonzero")
    }

    pub fn expression(&self, which: Which) -> RatExpr {
        match which {
            Which::K => RatExpr::from_poly(self.k.clone()),
            Which::I1 => self.invariant(0),
            Which::I2 => self.invariant(1),
            Which::I3 => self.invariant(2),
            Which::I4 => self.invariant(3),
        }
    }

    /// The polynomial whose homogeneity degree is listed in [`WEIGHTS`].
    pub fn weighted_part(&self, which: Which) -> &PolyExpr {
        match which {
            Which::K => &self.k,
            Which::I1 => &self.numerators[0],
            Which::I2 => &self.numerators[1],
            Which::I3 => &self.numerators[2],
            Which::I4 => &self.numerators[3],
        }
    }
}

/// Exact value of `K` or `I_i` at a point of `J^2`.
pub fn evaluate_invariant(which: Which, at: &impl Assignment) -> Result<Scalar> {
    evaluate_with(InvariantCatalog::pinned(), which, at)
}

pub fn evaluate_with(cat: &InvariantCatalog, which: Which, at: &impl Assignment) -> Result<Scalar> {
    let k = cat.k.evaluate(at)?;
    if which == Which::K {
        return Ok(k);
    }
    if k.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    cat.expression(which).evaluate(at)
}

/// Rank of `𝒜` at a point; below four on the singular set.
pub fn singularity_rank(at: &impl Assignment) -> Result<usize> {
    let a = &InvariantCatalog::pinned().a_matrix;
    let rows = a
        .iter()
        .map(|r| r.iter().map(|e| e.evaluate(at)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(matrix_rank(&Matrix::from_rows(rows)))
}
