//! Rational functions `num / den` over [`PolyExpr`].
//!
//! Normalization divides out the constant content, the monomial gcd and any
//! exact polynomial factor of `num` equal to `den`, and scales so the
//! leading coefficient of `den` is 1. A full multivariate gcd is not
//! computed, so two equal rational functions may be stored as different
//! pairs; equality is decided by cross-multiplication.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::{Assignment, PolyExpr};
use super::scalar::Scalar;
use super::var::Var;
use crate::error::Error;

#[derive(Clone)]
pub struct RatExpr {
    num: PolyExpr,
    den: PolyExpr,
}

impl RatExpr {
    pub fn new(num: PolyExpr, den: PolyExpr) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RatExpr { num, den }.normalized())
    }

    pub fn from_poly(p: PolyExpr) -> Self {
        RatExpr {
            num: p,
            den: PolyExpr::one(),
        }
    }

    pub fn num(&self) -> &PolyExpr {
        &self.num
    }

    pub fn den(&self) -> &PolyExpr {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn normalized(&self) -> RatExpr {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if num.is_zero() {
            return RatExpr {
                num,
                den: PolyExpr::one(),
            };
        }
        if let Some(q) = num.exact_div(&den) {
            return RatExpr {
                num: q,
                den: PolyExpr::one(),
            };
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g);
            den = den.div_monomial(&g);
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip().unwrap();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatExpr { num, den }
    }

    pub fn evaluate(&self, a: &impl Assignment) -> Result<Scalar, Error> {
        let d = self.den.evaluate(a)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.evaluate(a)? / d)
    }

    pub fn partial_derivative(&self, v: &Var) -> RatExpr {
        let n = &(&self.num.partial_derivative(v) * &self.den)
            - &(&self.num * &self.den.partial_derivative(v));
        RatExpr::new(n, &self.den * &self.den).unwrap()
    }

    pub fn recip(&self) -> Result<RatExpr, Error> {
        RatExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn variables(&self) -> std::collections::BTreeSet<Var> {
        let mut s = self.num.variables();
        s.extend(self.den.variables());
        s
    }
}

/// Equality by cross-multiplication.
impl PartialEq for RatExpr {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatExpr {}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == PolyExpr::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl From<PolyExpr> for RatExpr {
    fn from(p: PolyExpr) -> Self {
        RatExpr::from_poly(p)
    }
}

impl Add<&RatExpr> for &RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        if self.den == rhs.den {
            return RatExpr::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatExpr::new(n, &self.den * &rhs.den).unwrap()
    }
}

impl Sub<&RatExpr> for &RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        self + &(-rhs)
    }
}

impl Mul<&RatExpr> for &RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

/// Panics when dividing by the zero function.
impl Div<&RatExpr> for &RatExpr {
    type Output = RatExpr;
    fn div(self, rhs: &RatExpr) -> RatExpr {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::{c, q, v};
    use std::collections::BTreeMap;

    #[test]
    fn one_over_x_at_zero() {
        let r = RatExpr::new(c(1), v(Var::X)).unwrap();
        let mut a = BTreeMap::new();
        a.insert(Var::X, Scalar::zero());
        assert!(matches!(r.evaluate(&a), Err(Error::ZeroDenominator)));
        a.insert(Var::X, Scalar::from_int(4));
        assert_eq!(r.evaluate(&a).unwrap(), Scalar::new(1, 4));
    }

    #[test]
    fn normalization_cancels_exact_factor() {
        let x = v(Var::X);
        let y = v(Var::Y);
        let r = RatExpr::new(&(&x + &y) * &(&x - &y), &c(2) * &(&x + &y)).unwrap();
        assert_eq!(r.den(), &PolyExpr::one());
        assert_eq!(r.num(), &(&(&x - &y) * &PolyExpr::constant(Scalar::new(1, 2))));
    }

    #[test]
    fn leading_coefficient_of_denominator_is_one() {
        let x = v(Var::X);
        let r = RatExpr::new(c(3), &c(-6) * &x + &c(1)).unwrap();
        assert!(r.den().leading().unwrap().1.is_one());
        // 3 / (1 - 6x) == -1 / (2x - 1/3)
        assert_eq!(r, RatExpr::new(c(-1), &(&c(2) * &x) - &q(1, 3)).unwrap());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RatExpr::new(c(1), PolyExpr::zero()).is_err());
    }
}
