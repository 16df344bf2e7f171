//! Invariant constant 2-tensors of the linearized stabilizer at the origin.
//!
//! A linear field `Y = Σ M_ij x^j ∂_i` acts on a constant covariant tensor
//! by `L_Y T = Mᵀ T + T M`.

use crate::algebra::{linear_solve, nullspace, Matrix, Scalar};
use crate::report::{CheckReport, Failure, Rule};

const T: usize = 0;
const X: usize = 1;
const Y: usize = 2;
const Z: usize = 3;

fn entries(list: &[(usize, usize, i64)]) -> Matrix {
    let mut rows = vec![vec![Scalar::zero(); 4]; 4];
    for &(i, j, v) in list {
        rows[i][j] = Scalar::from_int(v);
    }
    Matrix::from_rows(rows)
}

/// `Y1 … Y6` as `4×4` matrices in the coordinate order `t, x, y, z`.
pub fn stabilizer_matrices() -> [Matrix; 6] {
    [
        entries(&[(T, T, 1), (X, X, -1)]),
        entries(&[(T, Z, 1), (Y, X, -1)]),
        entries(&[(Z, T, 1), (X, Y, -1)]),
        entries(&[(Z, Z, 1), (Y, Y, -1)]),
        entries(&[(X, X, 1), (Y, Y, 1)]),
        entries(&[(X, Z, 1), (Y, T, -1)]),
    ]
}

pub fn lie_derivative(m: &Matrix, t: &Matrix) -> Matrix {
    m.transpose().mul(t).add(&t.mul(m))
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a.mul(b).sub(&b.mul(a))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Symmetric,
    Skew,
}

fn basis(kind: Kind) -> Vec<(usize, usize)> {
    (0..4)
        .flat_map(|a| (a..4).map(move |b| (a, b)))
        .filter(|(a, b)| kind == Kind::Symmetric || a < b)
        .collect()
}

fn tensor(kind: Kind, coords: &[(usize, usize)], values: &[Scalar]) -> Matrix {
    let mut rows = vec![vec![Scalar::zero(); 4]; 4];
    for (&(a, b), v) in coords.iter().zip(values) {
        rows[a][b] = v.clone();
        rows[b][a] = match kind {
            Kind::Symmetric => v.clone(),
            Kind::Skew => -v,
        };
    }
    Matrix::from_rows(rows)
}

fn diagonal(m: &Matrix) -> Option<Vec<Scalar>> {
    let mut d = Vec::with_capacity(4);
    for i in 0..4 {
        for j in 0..4 {
            if i != j && !m[(i, j)].is_zero() {
                return None;
            }
        }
        d.push(m[(i, i)].clone());
    }
    Some(d)
}

/// Bases of the invariant symmetric and skew constant 2-tensors.
#[derive(Clone, Debug)]
pub struct InvariantTensors {
    pub symmetric: Vec<Matrix>,
    pub skew: Vec<Matrix>,
}

/// Tensors annihilated by `Y1 − Y4, Y2, Y3, Y6` and scaled by `Y1 + Y4, Y5`.
///
/// The two scaling fields are diagonal, so every basis tensor `dx^a dx^b`
/// is a joint eigenvector; the kernel is solved inside each joint weight
/// space.
pub fn invariant_two_tensors() -> InvariantTensors {
    let y = stabilizer_matrices();
    let annihilate = [y[0].sub(&y[3]), y[1].clone(), y[2].clone(), y[5].clone()];
    let scale = [y[0].add(&y[3]), y[4].clone()];
    let diags: Vec<Vec<Scalar>> = scale
        .iter()
        .map(|m| diagonal(m).expect("scaling fields are diagonal"))
        .collect();
    let solve = |kind: Kind| -> Vec<Matrix> {
        let full = basis(kind);
        let weight = |&(a, b): &(usize, usize)| -> Vec<Scalar> {
            diags.iter().map(|d| &d[a] + &d[b]).collect()
        };
        let mut weights: Vec<Vec<Scalar>> = full.iter().map(weight).collect();
        weights.sort();
        weights.dedup();
        let mut out = Vec::new();
        for w in weights {
            let block: Vec<(usize, usize)> =
                full.iter().copied().filter(|s| weight(s) == w).collect();
            // columns: images of the block basis, rows: coordinates in `full`
            let mut rows = Vec::new();
            for m in &annihilate {
                let images: Vec<Matrix> = block
                    .iter()
                    .map(|s| lie_derivative(m, &tensor(kind, &[*s], &[Scalar::one()])))
                    .collect();
                for &(a, b) in &full {
                    rows.push(images.iter().map(|im| im[(a, b)].clone()).collect());
                }
            }
            for v in nullspace(&Matrix::from_rows(rows)) {
                out.push(tensor(kind, &block, &v));
            }
        }
        out
    };
    InvariantTensors {
        symmetric: solve(Kind::Symmetric),
        skew: solve(Kind::Skew),
    }
}

fn proportional(a: &Matrix, b: &Matrix) -> bool {
    let rank_one = |i: usize, j: usize, k: usize, l: usize| {
        &a[(i, j)] * &b[(k, l)] == &a[(k, l)] * &b[(i, j)]
    };
    !a.is_zero()
        && !b.is_zero()
        && (0..16).all(|x| (0..16).all(|y| rank_one(x / 4, x % 4, y / 4, y % 4)))
}

fn in_span(gens: &[Matrix], m: &Matrix) -> bool {
    let cols: Vec<Vec<Scalar>> = gens
        .iter()
        .map(|g| (0..16).map(|k| g[(k / 4, k % 4)].clone()).collect())
        .collect();
    let a = Matrix::from_rows((0..16).map(|k| cols.iter().map(|c| c[k].clone()).collect()).collect());
    let rhs: Vec<Scalar> = (0..16).map(|k| m[(k / 4, k % 4)].clone()).collect();
    linear_solve(&a, &rhs).is_ok()
}

/// Checks the invariant tensor spaces and the closure of the linear
/// algebra spanned by `Y1 … Y6`.
pub fn stabilizer_reports() -> Vec<CheckReport> {
    let inv = invariant_two_tensors();
    let expected_sym = entries(&[(T, X, 1), (X, T, 1), (Z, Y, 1), (Y, Z, 1)]);
    let expected_skew = entries(&[(Z, T, 1), (T, Z, -1)]);
    let mut tensors = CheckReport::new(
        "stabilizer.tensors",
        "the invariant symmetric 2-tensors are spanned by dt dx + dz dy and the skew ones by dz∧dt",
        Rule::All,
    );
    let sym_ok = inv.symmetric.len() == 1 && proportional(&inv.symmetric[0], &expected_sym);
    tensors.record(sym_ok, || {
        Failure::new(format!("symmetric invariants: {:?}", inv.symmetric))
    });
    let skew_ok = inv.skew.len() == 1 && proportional(&inv.skew[0], &expected_skew);
    tensors.record(skew_ok, || Failure::new(format!("skew invariants: {:?}", inv.skew)));
    tensors.detail("symmetric_dimension", inv.symmetric.len());
    tensors.detail("skew_dimension", inv.skew.len());

    let y = stabilizer_matrices();
    let mut closure = CheckReport::new(
        "stabilizer.closure",
        "commutators of the linear parts close in their span and the semisimple part closes on itself",
        Rule::All,
    );
    for i in 0..6 {
        for j in (i + 1)..6 {
            let c = commutator(&y[i], &y[j]);
            closure.record(in_span(&y, &c), || {
                Failure::new(format!("[Y{}, Y{}] leaves the span", i + 1, j + 1))
            });
        }
    }
    let sl2 = [y[0].sub(&y[3]), y[1].clone(), y[2].clone()];
    for i in 0..3 {
        for j in (i + 1)..3 {
            let c = commutator(&sl2[i], &sl2[j]);
            closure.record(in_span(&sl2, &c), || {
                Failure::new(format!("semisimple commutator {i},{j} leaves its span"))
            });
        }
    }
    vec![tensors, closure]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_is_annihilated_by_the_traceless_part() {
        let y = stabilizer_matrices();
        let g = entries(&[(T, X, 1), (X, T, 1), (Z, Y, 1), (Y, Z, 1)]);
        for m in [y[0].sub(&y[3]), y[1].clone(), y[2].clone(), y[5].clone()] {
            assert!(lie_derivative(&m, &g).is_zero());
        }
        assert!(lie_derivative(&y[0].add(&y[3]), &g).is_zero());
        assert_eq!(lie_derivative(&y[4], &g), g);
    }

    #[test]
    fn reports_pass() {
        for r in stabilizer_reports() {
            assert!(r.ok(), "{}", r.summary_line());
        }
    }

    #[test]
    fn sl2_relations() {
        let y = stabilizer_matrices();
        let h = y[0].sub(&y[3]);
        let two = Scalar::from_int(2);
        let e = commutator(&h, &y[1]);
        assert!(e == y[1].scale(&two) || e == y[1].scale(&-two.clone()));
    }
}
