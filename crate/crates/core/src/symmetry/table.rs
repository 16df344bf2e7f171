use super::{exponent_pairs, lie_bracket, make_generator, monomial, decompose, PointField};
use crate::algebra::PolyExpr;
use crate::report::{CheckReport, Failure, Rule};

fn dt(f: &PolyExpr) -> PolyExpr {
    f.partial_derivative(&crate::algebra::Var::T)
}

fn dz(f: &PolyExpr) -> PolyExpr {
    f.partial_derivative(&crate::algebra::Var::Z)
}

fn x(family: u8, p: &PolyExpr) -> PointField {
    make_generator(family, p).expect("parameter in t, z")
}

/// Right-hand side of `[X_i(f), X_j(g)]` from the commutator table.
pub fn table_entry(i: u8, j: u8, f: &PolyExpr, g: &PolyExpr) -> PointField {
    if i > j {
        return table_entry(j, i, g, f).neg();
    }
    let fg = f * g;
    match (i, j) {
        (1, 1) => x(1, &(&(f * &dt(g)) - &(&dt(f) * g))),
        (1, 2) => x(2, &(f * &dt(g))).sub(&x(1, &(&dz(f) * g))),
        (1, 3) => x(3, &(f * &dt(g))),
        (1, 4) => x(4, &dt(&fg)).add(&x(5, &(&dz(f) * g))),
        (1, 5) => x(5, &(f * &dt(g))),
        (2, 2) => x(2, &(&(f * &dz(g)) - &(&dz(f) * g))),
        (2, 3) => x(3, &(f * &dz(g))),
        (2, 4) => x(4, &(f * &dz(g))),
        (2, 5) => x(4, &(&dt(f) * g)).add(&x(5, &dz(&fg))),
        (3, 4) => x(4, &fg).neg(),
        (3, 5) => x(5, &fg).neg(),
        (3, 3) | (4, 4) | (4, 5) | (5, 5) => PointField::zero(),
        _ => panic!("family out of range"),
    }
}

/// Graded piece of a family: `0` for `X1, X2`, `1` for `X3`, `2` for `X4, X5`.
fn piece(family: usize) -> usize {
    match family {
        0 | 1 => 0,
        2 => 1,
        _ => 2,
    }
}

/// Allowed pieces for a bracket of two pieces.
fn bracket_piece(a: usize, b: usize) -> Option<usize> {
    match (a.min(b), a.max(b)) {
        (0, k) => Some(k),
        (1, 1) => None,
        (1, 2) => Some(2),
        (2, 2) => None,
        _ => unreachable!(),
    }
}

/// Compares every bracket of monomial generators of degree
/// `<= max_degree` against the table, and checks that brackets respect the
/// grading `⟨X1, X2⟩ ⊕ ⟨X3⟩ ⊕ ⟨X4, X5⟩`.
pub fn verify_commutator_table(max_degree: u32) -> Vec<CheckReport> {
    let mut table = CheckReport::new(
        "brackets.table",
        "brackets of generator families match the commutator table",
        Rule::All,
    );
    let mut grading = CheckReport::new(
        "brackets.grading",
        "brackets respect the bi-grading of the symmetry algebra",
        Rule::All,
    );
    let pairs = exponent_pairs(max_degree);
    for i in 1..=5u8 {
        for j in 1..=5u8 {
            for &(m1, n1) in &pairs {
                for &(m2, n2) in &pairs {
                    let f = monomial(m1, n1);
                    let g = monomial(m2, n2);
                    let lhs = lie_bracket(&x(i, &f), &x(j, &g));
                    let rhs = table_entry(i, j, &f, &g);
                    let label = format!("[X{i}(z^{m1} t^{n1}), X{j}(z^{m2} t^{n2})]");
                    table.record(lhs == rhs, || {
                        Failure::new(format!("{label}: got {lhs:?}, table gives {rhs:?}"))
                            .with_generator(label.clone())
                    });
                    let graded = match decompose(&lhs) {
                        None => false,
                        Some(parts) => {
                            let allowed = bracket_piece(piece(i as usize - 1), piece(j as usize - 1));
                            parts.iter().enumerate().all(|(k, p)| {
                                p.is_zero() || allowed == Some(piece(k))
                            })
                        }
                    };
                    grading.record(graded, || {
                        Failure::new(format!("{label} leaves its graded piece"))
                            .with_generator(label.clone())
                    });
                }
            }
        }
    }
    table.detail("max_degree", max_degree);
    vec![table, grading]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{c, v};
    use crate::algebra::Var;

    #[test]
    fn spot_entries() {
        let t = v(Var::T);
        // [X1(t), X1(t^2)] = X1(t^2)
        let lhs = lie_bracket(&x(1, &t), &x(1, &(&t * &t)));
        assert_eq!(lhs, x(1, &(&t * &t)));
        // [X2(t), X5(1)] = X4(1)
        let lhs = lie_bracket(&x(2, &t), &x(5, &c(1)));
        assert_eq!(lhs, x(4, &c(1)));
    }

    #[test]
    fn low_degree_table() {
        for r in verify_commutator_table(1) {
            assert!(r.ok(), "{}", r.summary_line());
        }
    }
}
