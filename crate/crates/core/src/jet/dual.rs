use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::algebra::linalg::Numeric;
use crate::algebra::{Assignment, PolyExpr, RatExpr, Scalar, Var};
use crate::error::{Error, Result};

/// `value + ε·eps` with `ε² = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualScalar {
    pub value: Scalar,
    pub eps: Scalar,
}

impl DualScalar {
    pub fn new(value: Scalar, eps: Scalar) -> Self {
        DualScalar { value, eps }
    }

    pub fn constant(value: Scalar) -> Self {
        DualScalar {
            value,
            eps: Scalar::zero(),
        }
    }

    pub fn recip(&self) -> Result<DualScalar> {
        let inv = self.value.recip()?;
        let eps = -(&self.eps * &inv) * &inv;
        Ok(DualScalar { value: inv, eps })
    }
}

impl Add for DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: DualScalar) -> DualScalar {
        DualScalar {
            value: self.value + rhs.value,
            eps: self.eps + rhs.eps,
        }
    }
}

impl Sub for DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: DualScalar) -> DualScalar {
        DualScalar {
            value: self.value - rhs.value,
            eps: self.eps - rhs.eps,
        }
    }
}

impl Mul for DualScalar {
    type Output = DualScalar;
    fn mul(self, rhs: DualScalar) -> DualScalar {
        DualScalar {
            eps: &self.value * &rhs.eps + &self.eps * &rhs.value,
            value: self.value * rhs.value,
        }
    }
}

impl Neg for DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar {
            value: -self.value,
            eps: -self.eps,
        }
    }
}

impl Numeric for DualScalar {
    fn zero() -> Self {
        DualScalar::constant(Scalar::zero())
    }
    fn one() -> Self {
        DualScalar::constant(Scalar::one())
    }
    fn from_scalar(s: &Scalar) -> Self {
        DualScalar::constant(s.clone())
    }
    fn inv(&self) -> Option<Self> {
        self.recip().ok()
    }
}

pub fn dual_evaluate_poly(
    e: &PolyExpr,
    point: &impl Assignment,
    perturbation: &BTreeMap<Var, Scalar>,
) -> Result<DualScalar> {
    e.eval_in(
        |c| DualScalar::constant(c.clone()),
        |w| {
            let x = point
                .value(w)
                .ok_or_else(|| Error::MissingVariable(w.to_string()))?;
            let e = perturbation.get(w).cloned().unwrap_or_else(Scalar::zero);
            Ok(DualScalar::new(x, e))
        },
    )
}

/// Evaluates `e` at `point + ε·perturbation`; the `ε` part is the
/// directional derivative.
pub fn dual_evaluate(
    e: &RatExpr,
    point: &impl Assignment,
    perturbation: &BTreeMap<Var, Scalar>,
) -> Result<DualScalar> {
    let n = dual_evaluate_poly(e.num(), point, perturbation)?;
    let d = dual_evaluate_poly(e.den(), point, perturbation)?;
    Ok(n * d.recip()?)
}

/// Value and gradient of a polynomial at a point, so that directional
/// derivatives along many vectors cost one dot product each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linearized {
    pub value: Scalar,
    pub gradient: BTreeMap<Var, Scalar>,
}

impl Linearized {
    pub fn constant(value: Scalar) -> Self {
        Linearized {
            value,
            gradient: BTreeMap::new(),
        }
    }

    /// Directional derivative as a dual number.
    pub fn along(&self, direction: &BTreeMap<Var, Scalar>) -> DualScalar {
        let mut eps = Scalar::zero();
        for (w, g) in &self.gradient {
            if let Some(x) = direction.get(w) {
                eps += g * x;
            }
        }
        DualScalar::new(self.value.clone(), eps)
    }
}

pub fn linearize(e: &PolyExpr, point: &impl Assignment) -> Result<Linearized> {
    let mut values: BTreeMap<Var, Scalar> = BTreeMap::new();
    for w in e.variables() {
        let x = point
            .value(&w)
            .ok_or_else(|| Error::MissingVariable(w.to_string()))?;
        values.insert(w, x);
    }
    let mut value = Scalar::zero();
    let mut gradient: BTreeMap<Var, Scalar> = BTreeMap::new();
    for (m, c) in e.terms() {
        let f = m.factors();
        let pw: Vec<Scalar> = f.iter().map(|(w, k)| values[w].pow(*k)).collect();
        value += c * &pw.iter().cloned().product::<Scalar>();
        for (i, (w, k)) in f.iter().enumerate() {
            let mut d = c * &Scalar::from_int(*k as i64);
            d *= &values[w].pow(k - 1);
            for (j, p) in pw.iter().enumerate() {
                if j != i {
                    d *= p;
                }
            }
            *gradient.entry(*w).or_insert_with(Scalar::zero) += d;
        }
    }
    gradient.retain(|_, g| !g.is_zero());
    Ok(Linearized { value, gradient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{c, v};

    fn at(x: i64) -> BTreeMap<Var, Scalar> {
        BTreeMap::from([(Var::X, Scalar::from_int(x))])
    }

    #[test]
    fn linearization_matches_dual_evaluation() {
        let (x, y) = (v(Var::X), v(Var::Y));
        let e = &(&(&x * &x) * &y) - &(&c(3) * &y.pow(3)) + c(5);
        let pt = BTreeMap::from([(Var::X, Scalar::from_int(2)), (Var::Y, Scalar::from_int(-3))]);
        let dir = BTreeMap::from([(Var::X, Scalar::new(1, 2)), (Var::Y, Scalar::from_int(7))]);
        let lin = linearize(&e, &pt).unwrap();
        assert_eq!(lin.along(&dir), dual_evaluate_poly(&e, &pt, &dir).unwrap());
    }

    #[test]
    fn square_and_reciprocal() {
        let x = v(Var::X);
        let pert = at(1);
        let sq = RatExpr::from_poly(&x * &x);
        let d = dual_evaluate(&sq, &at(3), &pert).unwrap();
        assert_eq!(d, DualScalar::new(Scalar::from_int(9), Scalar::from_int(6)));
        let inv = RatExpr::new(c(1), x).unwrap();
        let d = dual_evaluate(&inv, &at(2), &pert).unwrap();
        assert_eq!(d, DualScalar::new(Scalar::new(1, 2), Scalar::new(-1, 4)));
        assert!(matches!(
            dual_evaluate(&inv, &at(0), &pert),
            Err(Error::ZeroDenominator)
        ));
    }
}
