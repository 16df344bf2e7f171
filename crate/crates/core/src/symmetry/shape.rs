//! Lie derivatives of the metric along horizontal and lifted generators.

use super::{monomial_generators, Generator, PointField};
use crate::algebra::{Dir, PolyExpr, Var};
use crate::curvature::pr_metric;
use crate::report::{CheckReport, Failure, Rule};

type Sym4 = [[PolyExpr; 4]; 4];

/// Slots that must vanish for a shape-preserving field.
pub const FORBIDDEN_SLOTS: [(usize, usize); 5] = [(1, 1), (2, 2), (1, 2), (0, 2), (1, 3)];

/// The two slots carrying the conformal factor, `dt dx` and `dz dy`.
pub const EPSILON_SLOTS: [(usize, usize); 2] = [(0, 1), (3, 2)];

/// `g_cb ∂_a X^c + g_ac ∂_b X^c`.
fn frame_terms(g: &Sym4, x: &PointField) -> Sym4 {
    let dx: [[PolyExpr; 4]; 4] = std::array::from_fn(|a| {
        std::array::from_fn(|c| x.horizontal(Dir::from_index(c)).partial_derivative(&Var::Base(Dir::from_index(a))))
    });
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let mut s = PolyExpr::zero();
            for c in 0..4 {
                s = s + &(&g[c][b] * &dx[a][c]) + &(&g[a][c] * &dx[b][c]);
            }
            s
        })
    })
}

/// `L_X g` for the horizontal part of `X`, with `p, q, r` held fixed.
pub fn horizontal_lie_derivative(x: &PointField) -> Sym4 {
    frame_terms(&pr_metric(), &x.horizontal_part())
}

/// `L_X̂ g` on `J^0`, with the vertical part acting through `∂g/∂u`.
pub fn lifted_lie_derivative(x: &PointField) -> Sym4 {
    let g = pr_metric();
    let mut out = frame_terms(&g, x);
    for (a, row) in out.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = slot.clone() + &x.apply(&g[a][b]);
        }
    }
    out
}

fn shape_ok(l: &Sym4) -> bool {
    let [(a, b), (c, d)] = EPSILON_SLOTS;
    FORBIDDEN_SLOTS.iter().all(|&(i, j)| l[i][j].is_zero()) && l[a][b] == l[c][d]
}

/// `L_ab g_cd = L_cd g_ab` for every pair of slots.
pub fn proportional_to_metric(l: &Sym4) -> bool {
    let g = pr_metric();
    let slots: Vec<(usize, usize)> = (0..4).flat_map(|a| (a..4).map(move |b| (a, b))).collect();
    slots.iter().all(|&(a, b)| {
        slots
            .iter()
            .all(|&(c, d)| &l[a][b] * &g[c][d] == &l[c][d] * &g[a][b])
    })
}

/// Conformal factor `λ` with `L = λ g`, read from the `dt dx` slot.
pub fn conformal_factor(l: &Sym4) -> PolyExpr {
    l[0][1].scale(&crate::algebra::Scalar::from_int(2))
}

fn fields(max_degree: u32) -> Vec<(Generator, PointField)> {
    monomial_generators(max_degree)
        .into_iter()
        .map(|g| (g, g.field()))
        .collect()
}

/// Horizontal parts of the generators preserve the metric shape.
pub fn shape_lie_derivative_check(max_degree: u32) -> CheckReport {
    let mut rep = CheckReport::new(
        "shape.lie-derivative",
        "horizontal parts of all five families preserve the metric shape",
        Rule::All,
    );
    for (name, f) in fields(max_degree) {
        let l = horizontal_lie_derivative(&f.horizontal_part());
        rep.record(shape_ok(&l), || {
            Failure::new("forbidden slot nonzero or ε slots differ").with_generator(name.to_string())
        });
    }
    rep.detail("max_degree", max_degree);
    rep
}

/// The full generators preserve the metric up to a conformal factor.
pub fn lifted_invariance_check(max_degree: u32) -> CheckReport {
    let mut rep = CheckReport::new(
        "shape.lift",
        "the lifted generators preserve the conformal class of the metric",
        Rule::All,
    );
    let mut factors = Vec::new();
    for (name, f) in fields(max_degree) {
        let l = lifted_lie_derivative(&f);
        let ok = proportional_to_metric(&l);
        if ok && max_degree <= 1 {
            factors.push(format!("{name}: {}", conformal_factor(&l)));
        }
        rep.record(ok, || {
            Failure::new("Lie derivative not proportional to the metric").with_generator(name.to_string())
        });
    }
    if !factors.is_empty() {
        rep.detail("conformal_factors", factors);
    }
    rep.detail("max_degree", max_degree);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{c, q, v};
    use crate::symmetry::{make_generator, negative_control};

    #[test]
    fn translation_and_scaling() {
        let dx = make_generator(4, &c(1)).unwrap();
        let l = horizontal_lie_derivative(&dx.horizontal_part());
        assert!(l.iter().flatten().all(PolyExpr::is_zero));
        let x3 = make_generator(3, &c(1)).unwrap();
        let l = horizontal_lie_derivative(&x3.horizontal_part());
        // coefficient 1 on the symmetric products dt dx and dz dy
        assert_eq!(l[0][1], q(1, 2));
        assert_eq!(l[3][2], q(1, 2));
        assert!(FORBIDDEN_SLOTS.iter().all(|&(i, j)| l[i][j].is_zero()));
    }

    #[test]
    fn lifted_factors() {
        let dx = make_generator(4, &c(1)).unwrap();
        let l = lifted_lie_derivative(&dx);
        assert!(conformal_factor(&l).is_zero() && proportional_to_metric(&l));
        let x3 = make_generator(3, &c(1)).unwrap();
        let l = lifted_lie_derivative(&x3);
        assert!(proportional_to_metric(&l));
        assert_eq!(conformal_factor(&l), c(1));
        let x1 = make_generator(1, &v(Var::T)).unwrap();
        let l = lifted_lie_derivative(&x1);
        assert!(proportional_to_metric(&l));
    }

    #[test]
    fn control_is_rejected() {
        let l = lifted_lie_derivative(&negative_control());
        assert!(!proportional_to_metric(&l));
        assert!(!shape_ok(&horizontal_lie_derivative(&negative_control())));
    }

    #[test]
    fn degree_three_passes() {
        assert!(shape_lie_derivative_check(3).ok());
        assert!(lifted_invariance_check(3).ok());
    }
}
