//! Dense truncated power series in the four base offsets `(t, x, y, z)`.
//!
//! Coefficients are stored by total degree and, inside one degree, by the
//! partial sums `(x+y+z, y+z, z)`, which gives a closed-form index.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::algebra::{Dir, MultiIndex, Scalar};

/// Largest supported truncation degree.
pub const MAX_DEGREE: u32 = 16;

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree `<= deg` in four variables.
pub fn monomial_count(deg: u32) -> usize {
    binom(deg as usize + 4, 4)
}

/// Position of an exponent vector in the dense layout.
pub fn monomial_index(e: &MultiIndex) -> usize {
    let [_, a, b, c] = e.0.map(usize::from);
    let n = e.order() as usize;
    let s1 = a + b + c;
    let s2 = b + c;
    binom(n + 3, 4) + binom(s1 + 2, 3) + binom(s2 + 1, 2) + c
}

fn exponent_table() -> &'static [MultiIndex] {
    static TABLE: OnceLock<Vec<MultiIndex>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut v = vec![MultiIndex::ZERO; monomial_count(MAX_DEGREE)];
        for s in MultiIndex::all_up_to(MAX_DEGREE) {
            v[monomial_index(&s)] = s;
        }
        v
    })
}

/// Exponent vector stored at a dense position.
pub fn monomial_at(i: usize) -> MultiIndex {
    exponent_table()[i]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorPoly {
    deg: u32,
    coeffs: Vec<Scalar>,
}

impl TaylorPoly {
    pub fn zero(deg: u32) -> Self {
        assert!(deg <= MAX_DEGREE, "truncation degree too large");
        TaylorPoly {
            deg,
            coeffs: vec![Scalar::zero(); monomial_count(deg)],
        }
    }

    pub fn constant(c: Scalar, deg: u32) -> Self {
        let mut p = TaylorPoly::zero(deg);
        p.coeffs[0] = c;
        p
    }

    /// `value + (offset in direction d)`.
    pub fn coordinate(d: Dir, value: Scalar, deg: u32) -> Self {
        let mut p = TaylorPoly::constant(value, deg);
        if deg >= 1 {
            p.coeffs[monomial_index(&MultiIndex::unit(d))] = Scalar::one();
        }
        p
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn coeff(&self, e: &MultiIndex) -> Scalar {
        if e.order() > self.deg {
            return Scalar::zero();
        }
        self.coeffs[monomial_index(e)].clone()
    }

    pub fn set_coeff(&mut self, e: &MultiIndex, c: Scalar) {
        assert!(e.order() <= self.deg, "exponent beyond truncation");
        self.coeffs[monomial_index(e)] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Nonzero coefficients with their exponents, in layout order.
    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, &Scalar)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (monomial_at(i), c))
    }

    pub fn truncate(&self, deg: u32) -> TaylorPoly {
        let deg = deg.min(self.deg);
        TaylorPoly {
            deg,
            coeffs: self.coeffs[..monomial_count(deg)].to_vec(),
        }
    }

    /// `∂/∂d`, dropping one degree of validity.
    pub fn derivative(&self, d: Dir) -> TaylorPoly {
        assert!(self.deg >= 1, "derivative of a degree-0 truncation");
        let mut out = TaylorPoly::zero(self.deg - 1);
        for i in 0..out.coeffs.len() {
            let e = monomial_at(i).bump(d);
            let c = &self.coeffs[monomial_index(&e)];
            if !c.is_zero() {
                out.coeffs[i] = c * Scalar::from_int(e.get(d) as i64);
            }
        }
        out
    }

    /// `∂^τ`, iterated.
    pub fn partial(&self, tau: &MultiIndex) -> TaylorPoly {
        let mut p = self.clone();
        for d in tau.dirs() {
            p = p.derivative(d);
        }
        p
    }

    /// `∂^σ f(0) = σ! · coeff_σ`.
    pub fn derivative_at_origin(&self, s: &MultiIndex) -> Scalar {
        self.coeff(s) * Scalar::from(s.factorial())
    }

    pub fn scale(&self, c: &Scalar) -> TaylorPoly {
        TaylorPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

impl Add for TaylorPoly {
    type Output = TaylorPoly;
    fn add(self, rhs: TaylorPoly) -> TaylorPoly {
        let (mut big, small) = if self.deg <= rhs.deg { (self, rhs) } else { (rhs, self) };
        for (a, b) in big.coeffs.iter_mut().zip(small.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
        big
    }
}

impl Neg for TaylorPoly {
    type Output = TaylorPoly;
    fn neg(self) -> TaylorPoly {
        TaylorPoly {
            deg: self.deg,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for TaylorPoly {
    type Output = TaylorPoly;
    fn sub(self, rhs: TaylorPoly) -> TaylorPoly {
        self + (-rhs)
    }
}

impl Mul for TaylorPoly {
    type Output = TaylorPoly;
    fn mul(self, rhs: TaylorPoly) -> TaylorPoly {
        &self * &rhs
    }
}

impl Mul<&TaylorPoly> for &TaylorPoly {
    type Output = TaylorPoly;
    fn mul(self, rhs: &TaylorPoly) -> TaylorPoly {
        let deg = self.deg.min(rhs.deg);
        let mut out = TaylorPoly::zero(deg);
        let rb: Vec<(MultiIndex, &Scalar)> = rhs.coeffs[..monomial_count(deg)]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (monomial_at(i), c))
            .collect();
        for (i, a) in self.coeffs[..monomial_count(deg)].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = monomial_at(i);
            let room = deg - ea.order();
            for (eb, b) in rb.iter() {
                if eb.order() > room {
                    break;
                }
                out.coeffs[monomial_index(&(ea + *eb))] += a * *b;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_is_a_bijection() {
        let all = MultiIndex::all_up_to(6);
        let mut seen = vec![false; monomial_count(6)];
        for s in &all {
            let i = monomial_index(s);
            assert!(!seen[i]);
            seen[i] = true;
            assert_eq!(monomial_at(i), *s);
        }
        assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn product_of_coordinates() {
        // (1 + t)(2 + x) = 2 + 2t + x + tx
        let a = TaylorPoly::coordinate(Dir::T, Scalar::one(), 3);
        let b = TaylorPoly::coordinate(Dir::X, Scalar::from_int(2), 3);
        let p = &a * &b;
        assert_eq!(p.coeff(&MultiIndex::ZERO), Scalar::from_int(2));
        assert_eq!(p.coeff(&MultiIndex::new(1, 0, 0, 0)), Scalar::from_int(2));
        assert_eq!(p.coeff(&MultiIndex::new(0, 1, 0, 0)), Scalar::one());
        assert_eq!(p.coeff(&MultiIndex::new(1, 1, 0, 0)), Scalar::one());
        assert_eq!(p.iter().count(), 4);
    }

    #[test]
    fn truncation_drops_high_terms() {
        let t = TaylorPoly::coordinate(Dir::T, Scalar::zero(), 2);
        let t3 = &(&t * &t) * &t;
        assert!(t3.is_zero());
    }

    #[test]
    fn derivative_of_monomial() {
        let mut p = TaylorPoly::zero(4);
        p.set_coeff(&MultiIndex::new(0, 2, 1, 0), Scalar::from_int(5));
        let d = p.derivative(Dir::X);
        assert_eq!(d.degree(), 3);
        assert_eq!(d.coeff(&MultiIndex::new(0, 1, 1, 0)), Scalar::from_int(10));
        assert_eq!(p.derivative_at_origin(&MultiIndex::new(0, 2, 1, 0)), Scalar::from_int(10));
    }
}
