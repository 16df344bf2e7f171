use std::sync::OnceLock;

use crate::algebra::poly::v;
use crate::algebra::{Dir, Fiber, MultiIndex, PolyExpr, Var};

/// `D_d e = ∂e/∂x_d + Σ (∂e/∂u_σ) u_{σ+1_d}`; auxiliary variables are
/// treated as constants.
pub fn total_derivative(e: &PolyExpr, d: Dir) -> PolyExpr {
    let mut out = e.partial_derivative(&Var::Base(d));
    for w in e.variables() {
        if let Var::Jet(u, s) = w {
            let de = e.partial_derivative(&w);
            out = out + &(&de * &v(Var::Jet(u, s.bump(d))));
        }
    }
    out
}

/// `D_σ e`, applying directions in `(t, x, y, z)` order.
pub fn iterated_total_derivative(e: &PolyExpr, s: &MultiIndex) -> PolyExpr {
    s.dirs().into_iter().fold(e.clone(), |acc, d| total_derivative(&acc, d))
}

fn jet(u: Fiber, dirs: &[Dir]) -> PolyExpr {
    v(Var::jet(u, dirs))
}

/// The three second-order equations `F1 = F2 = F3 = 0` for `(p, q, r)`.
#[derive(Clone, Debug)]
pub struct SDESystem {
    pub m: PolyExpr,
    pub n: PolyExpr,
    pub f: [PolyExpr; 3],
}

impl SDESystem {
    pub fn build() -> Self {
        use Dir::{T, X, Y, Z};
        use Fiber::{P, Q, R};
        let (p, q, r) = (v(Var::P), v(Var::Q), v(Var::R));
        let m = jet(P, &[Z]) - &jet(Q, &[T]) + &(&p * &jet(Q, &[X])) - &(&q * &jet(P, &[X]))
            + &(&q * &jet(Q, &[Y]))
            - &(&r * &jet(P, &[Y]));
        let n = jet(Q, &[Z]) - &jet(R, &[T]) + &(&q * &jet(R, &[Y])) - &(&r * &jet(Q, &[Y]))
            + &(&p * &jet(R, &[X]))
            - &(&q * &jet(Q, &[X]));
        let dm = |d| total_derivative(&m, d);
        let dn = |d| total_derivative(&n, d);

        let f1 = jet(P, &[X, X]) + &(&PolyExpr::int(2) * &jet(Q, &[X, Y])) + &jet(R, &[Y, Y]);
        let f2 = dm(X) + &dn(Y);
        let lhs = dm(Z) - &(&q * &dm(X)) - &(&r * &dm(Y))
            + &(&(jet(Q, &[X]) + &jet(R, &[Y])) * &m);
        let rhs = dn(T) - &(&p * &dn(X)) - &(&q * &dn(Y))
            + &(&(jet(P, &[X]) + &jet(Q, &[Y])) * &n);
        SDESystem {
            m,
            n,
            f: [f1, f2, lhs - &rhs],
        }
    }

    /// Shared instance.
    pub fn get() -> &'static SDESystem {
        static SYS: OnceLock<SDESystem> = OnceLock::new();
        SYS.get_or_init(SDESystem::build)
    }

    /// Nonzero `∂F_i/∂u_τ` over second-order `u_τ`, in canonical variable order.
    pub fn linear_symbols() -> &'static [Vec<(Var, PolyExpr)>; 3] {
        static SYM: OnceLock<[Vec<(Var, PolyExpr)>; 3]> = OnceLock::new();
        SYM.get_or_init(|| {
            let sys = SDESystem::get();
            let second: Vec<Var> = Fiber::ALL
                .iter()
                .flat_map(|&u| MultiIndex::all_of_order(2).into_iter().map(move |s| Var::Jet(u, s)))
                .collect();
            std::array::from_fn(|i| {
                second
                    .iter()
                    .map(|w| (*w, sys.f[i].partial_derivative(w)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            })
        })
    }
}

/// `dim J^k = 4 + 3 C(k+4, 4)`.
pub fn jet_space_dim(k: u32) -> u64 {
    4 + 3 * binom(k as u64 + 4, 4)
}

/// `dim SDE_k = 4 + 3 C(k+4, 4) - 3 C(k+2, 4)`.
pub fn sde_dim(k: u32) -> u64 {
    jet_space_dim(k) - 3 * binom(k as u64 + 2, 4)
}

pub(crate) fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_derivative_examples() {
        assert_eq!(total_derivative(&v(Var::P), Dir::X), jet(Fiber::P, &[Dir::X]));
        let e = &v(Var::P) * &jet(Fiber::Q, &[Dir::X]);
        let expect = &jet(Fiber::P, &[Dir::T]) * &jet(Fiber::Q, &[Dir::X])
            + &(&v(Var::P) * &jet(Fiber::Q, &[Dir::T, Dir::X]));
        assert_eq!(total_derivative(&e, Dir::T), expect);
        let t = v(Var::T);
        assert_eq!(total_derivative(&(&t * &t), Dir::T), &PolyExpr::int(2) * &t);
    }

    #[test]
    fn prolonged_f1() {
        use Dir::{X, Y};
        let sys = SDESystem::get();
        let expect = jet(Fiber::P, &[X, X, X])
            + &(&PolyExpr::int(2) * &jet(Fiber::Q, &[X, X, Y]))
            + &jet(Fiber::R, &[X, Y, Y]);
        assert_eq!(total_derivative(&sys.f[0], X), expect);
    }

    #[test]
    fn system_is_affine_in_second_order() {
        let sys = SDESystem::get();
        for f in &sys.f {
            assert_eq!(f.jet_order(), 2);
            assert!(f.degree_in(|w| w.jet_order() == 2) <= 1);
        }
        for syms in SDESystem::linear_symbols() {
            for (_, c) in syms {
                assert!(c.jet_order() <= 1);
            }
        }
    }

    #[test]
    fn dimension_formula() {
        let dims: Vec<u64> = (0..8).map(sde_dim).collect();
        assert_eq!(dims, [7, 19, 46, 94, 169, 277, 424, 616]);
        for k in 0..8u64 {
            // k^3 + 9/2 k^2 + 13/2 k + 7
            assert_eq!(2 * sde_dim(k as u32), 2 * k * k * k + 9 * k * k + 13 * k + 14);
        }
    }
}
