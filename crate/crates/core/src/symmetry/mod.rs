//! Point symmetries of the system: the five generator families, brackets,
//! prolongation, the metric-shape and lift checks, the finite pseudo-group
//! and invariant tensors of the linearized stabilizer.

pub mod prolong;
pub mod pseudogroup;
pub mod shape;
pub mod stabilizer;
pub mod table;

use std::fmt;

use crate::algebra::poly::v;
use crate::algebra::{Assignment, Dir, PolyExpr, Scalar, Var};
use crate::error::{Error, Result};

pub use prolong::{generating_functions, prolong_eval, verify_tangency, Prolonged};
pub use pseudogroup::{infinitesimal_consistency, pseudo_group_apply, PseudoGroupElement};
pub use shape::{lifted_invariance_check, shape_lie_derivative_check};
pub use stabilizer::{invariant_two_tensors, stabilizer_matrices, stabilizer_reports, InvariantTensors};
pub use table::verify_commutator_table;

/// The seven coordinates of `J^0` in component order.
pub const J0: [Var; 7] = [Var::T, Var::X, Var::Y, Var::Z, Var::P, Var::Q, Var::R];

/// Vector field on `J^0` with polynomial components on
/// `∂_t, ∂_x, ∂_y, ∂_z, ∂_p, ∂_q, ∂_r`.
#[derive(Clone, PartialEq, Eq)]
pub struct PointField {
    pub comps: [PolyExpr; 7],
}

impl PointField {
    pub fn zero() -> Self {
        PointField {
            comps: std::array::from_fn(|_| PolyExpr::zero()),
        }
    }

    pub fn from_components(comps: [PolyExpr; 7]) -> Result<Self> {
        for c in &comps {
            if c.variables().iter().any(|w| w.jet_order() > 0 || matches!(w, Var::Aux(_))) {
                return Err(Error::BadParameter(format!(
                    "component {c} is not a function on J^0"
                )));
            }
        }
        Ok(PointField { comps })
    }

    pub fn component(&self, w: &Var) -> &PolyExpr {
        let i = J0.iter().position(|x| x == w).expect("J^0 coordinate");
        &self.comps[i]
    }

    /// Horizontal coefficient on `∂_d`.
    pub fn horizontal(&self, d: Dir) -> &PolyExpr {
        &self.comps[d.index()]
    }

    pub fn horizontal_part(&self) -> PointField {
        let mut h = self.clone();
        for c in &mut h.comps[4..] {
            *c = PolyExpr::zero();
        }
        h
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(PolyExpr::is_zero)
    }

    /// `X(f) = Σ X^i ∂f/∂x_i` over the `J^0` coordinates.
    pub fn apply(&self, f: &PolyExpr) -> PolyExpr {
        let mut out = PolyExpr::zero();
        for (w, c) in J0.iter().zip(&self.comps) {
            if !c.is_zero() {
                let d = f.partial_derivative(w);
                if !d.is_zero() {
                    out = out + &(c * &d);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PointField) -> PointField {
        PointField {
            comps: std::array::from_fn(|i| &self.comps[i] + &other.comps[i]),
        }
    }

    pub fn sub(&self, other: &PointField) -> PointField {
        PointField {
            comps: std::array::from_fn(|i| &self.comps[i] - &other.comps[i]),
        }
    }

    pub fn neg(&self) -> PointField {
        PointField {
            comps: std::array::from_fn(|i| -&self.comps[i]),
        }
    }

    pub fn evaluate(&self, at: &impl Assignment) -> Result<[Scalar; 7]> {
        let mut out: [Scalar; 7] = std::array::from_fn(|_| Scalar::zero());
        for (o, c) in out.iter_mut().zip(&self.comps) {
            *o = c.evaluate(at)?;
        }
        Ok(out)
    }
}

impl fmt::Debug for PointField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in J0.iter().zip(&self.comps) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})∂_{w}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `[X, Y]^i = X(Y^i) − Y(X^i)`.
pub fn lie_bracket(x: &PointField, y: &PointField) -> PointField {
    PointField {
        comps: std::array::from_fn(|i| x.apply(&y.comps[i]) - &y.apply(&x.comps[i])),
    }
}

fn dt(f: &PolyExpr) -> PolyExpr {
    f.partial_derivative(&Var::T)
}

fn dz(f: &PolyExpr) -> PolyExpr {
    f.partial_derivative(&Var::Z)
}

fn check_param(param: &PolyExpr) -> Result<()> {
    if param.variables().iter().any(|w| *w != Var::T && *w != Var::Z) {
        return Err(Error::BadParameter(format!(
            "generator parameter {param} must depend on t and z only"
        )));
    }
    Ok(())
}

/// `X_family(param)` for `family` in `1..=5`.
pub fn make_generator(family: u8, param: &PolyExpr) -> Result<PointField> {
    check_param(param)?;
    let (x, y) = (v(Var::X), v(Var::Y));
    let (p, q, r) = (v(Var::P), v(Var::Q), v(Var::R));
    let half = Scalar::new(1, 2);
    let two = PolyExpr::int(2);
    let f = param;
    let (ft, fz) = (dt(f), dz(f));
    let (ftt, ftz, fzz) = (dt(&ft), dz(&ft), dz(&fz));
    let zero = PolyExpr::zero;
    let comps: [PolyExpr; 7] = match family {
        1 => [
            f.clone(),
            -&(&x * &ft),
            -&(&x * &fz),
            zero(),
            &(&x * &ftt) - &(&(&two * &p) * &ft),
            &(&(&x * &ftz) - &(&q * &ft)) - &(&p * &fz),
            &(&x * &fzz) - &(&(&two * &q) * &fz),
        ],
        2 => [
            zero(),
            -&(&y * &ft),
            -&(&y * &fz),
            f.clone(),
            &(&y * &ftt) - &(&(&two * &q) * &ft),
            &(&(&y * &ftz) - &(&q * &fz)) - &(&r * &ft),
            &(&y * &fzz) - &(&(&two * &r) * &fz),
        ],
        3 => [
            zero(),
            f * &x,
            f * &y,
            zero(),
            &(f * &p) - &(&x * &ft),
            &(&(f * &q) - &(&x * &fz).scale(&half)) - &(&y * &ft).scale(&half),
            &(f * &r) - &(&y * &fz),
        ],
        4 => [
            zero(),
            f.clone(),
            zero(),
            zero(),
            -&ft,
            (-&fz).scale(&half),
            zero(),
        ],
        5 => [
            zero(),
            zero(),
            f.clone(),
            zero(),
            zero(),
            (-&ft).scale(&half),
            -&fz,
        ],
        _ => return Err(Error::BadParameter(format!("family {family} not in 1..=5"))),
    };
    Ok(PointField { comps })
}

/// Monomial parameter `z^m t^n`.
pub fn monomial(m: u32, n: u32) -> PolyExpr {
    &v(Var::Z).pow(m) * &v(Var::T).pow(n)
}

/// The generator `X_family(z^m t^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub family: u8,
    pub m: u32,
    pub n: u32,
}

impl Generator {
    pub fn field(&self) -> PointField {
        make_generator(self.family, &monomial(self.m, self.n)).expect("monomial parameter")
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}(z^{} t^{})", self.family, self.m, self.n)
    }
}

/// All `(m, n)` with `m + n <= d`, by total degree then `m`.
pub fn exponent_pairs(d: u32) -> Vec<(u32, u32)> {
    (0..=d)
        .flat_map(|s| (0..=s).map(move |m| (m, s - m)))
        .collect()
}

/// Every monomial generator with `m + n <= max_degree` in all five
/// families.
pub fn monomial_generators(max_degree: u32) -> Vec<Generator> {
    (1..=5u8)
        .flat_map(|family| {
            exponent_pairs(max_degree)
                .into_iter()
                .map(move |(m, n)| Generator { family, m, n })
        })
        .collect()
}

/// A field that is not a symmetry: `x ∂_t`.
pub fn negative_control() -> PointField {
    let mut f = PointField::zero();
    f.comps[0] = v(Var::X);
    f
}

/// Splits a field into `X1(a) + ... + X5(e)` when it lies in the algebra.
pub fn decompose(field: &PointField) -> Option<[PolyExpr; 5]> {
    let in_tz = |e: &PolyExpr| e.variables().iter().all(|w| *w == Var::T || *w == Var::Z);
    let a = field.horizontal(Dir::T).clone();
    let b = field.horizontal(Dir::Z).clone();
    if !in_tz(&a) || !in_tz(&b) {
        return None;
    }
    let rest = field
        .sub(&make_generator(1, &a).ok()?)
        .sub(&make_generator(2, &b).ok()?);
    let c = rest.horizontal(Dir::X).partial_derivative(&Var::X);
    let d = rest.horizontal(Dir::X) - &(&c * &v(Var::X));
    let e = rest.horizontal(Dir::Y) - &(&c * &v(Var::Y));
    if !in_tz(&c) || !in_tz(&d) || !in_tz(&e) {
        return None;
    }
    let residual = rest
        .sub(&make_generator(3, &c).ok()?)
        .sub(&make_generator(4, &d).ok()?)
        .sub(&make_generator(5, &e).ok()?);
    residual.is_zero().then_some([a, b, c, d, e])
}

/// `Σ X_i(params[i])`.
pub fn combine(params: &[PolyExpr; 5]) -> PointField {
    params
        .iter()
        .enumerate()
        .fold(PointField::zero(), |acc, (i, p)| {
            acc.add(&make_generator(i as u8 + 1, p).expect("parameter in t, z"))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{c, q};

    #[test]
    fn generator_examples() {
        let one = c(1);
        let mut dx = PointField::zero();
        dx.comps[1] = c(1);
        assert_eq!(make_generator(4, &one).unwrap(), dx);
        let mut dtf = PointField::zero();
        dtf.comps[0] = c(1);
        assert_eq!(make_generator(1, &one).unwrap(), dtf);
        // X5(t) = t ∂_y − ½ ∂_q
        let mut x5 = PointField::zero();
        x5.comps[2] = v(Var::T);
        x5.comps[5] = q(-1, 2);
        assert_eq!(make_generator(5, &v(Var::T)).unwrap(), x5);
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(make_generator(1, &v(Var::X)), Err(Error::BadParameter(_))));
        assert!(matches!(make_generator(3, &v(Var::P)), Err(Error::BadParameter(_))));
        assert!(matches!(make_generator(6, &c(1)), Err(Error::BadParameter(_))));
    }

    #[test]
    fn bracket_examples() {
        let (t, z) = (v(Var::T), v(Var::Z));
        let g1 = |f: u8, p: &PolyExpr| make_generator(f, p).unwrap();
        // [X1(t), X3(z)] = X3(t · 0) = 0
        assert!(lie_bracket(&g1(1, &t), &g1(3, &z)).is_zero());
        // [X1(t), X3(t)] = X3(t)
        assert_eq!(lie_bracket(&g1(1, &t), &g1(3, &t)), g1(3, &t));
        // [X4(tz), X5(z^2)] = 0
        assert!(lie_bracket(&g1(4, &(&t * &z)), &g1(5, &(&z * &z))).is_zero());
        // [X3(t), X4(1)] = −X4(t)
        assert_eq!(lie_bracket(&g1(3, &t), &g1(4, &c(1))), g1(4, &t).neg());
    }

    #[test]
    fn decomposition_round_trip() {
        let (t, z) = (v(Var::T), v(Var::Z));
        let params = [&t * &z, c(3), &z * &z, t.clone(), &c(2) - &z];
        let f = combine(&params);
        assert_eq!(decompose(&f).unwrap(), params);
        assert!(decompose(&negative_control()).is_none());
    }

    #[test]
    fn generator_counts() {
        assert_eq!(monomial_generators(4).len(), 75);
        assert_eq!(exponent_pairs(3).len(), 10);
    }
}
