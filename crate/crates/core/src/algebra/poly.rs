//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use super::var::Var;
use crate::error::Error;

/// Power product of variables, stored as `(var, exponent)` pairs sorted by
/// variable with no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|a| a.0);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Lowers the exponent of `v` by one, returning the old exponent.
    fn drop_one(&self, v: &Var) -> Option<(u32, Monomial)> {
        let i = self.0.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.0[i].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(i);
        } else {
            out[i].1 -= 1;
        }
        Some((e, Monomial(out)))
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < v {
                return None;
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum (monomial gcd).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(&v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }
}

/// Graded lexicographic order over the variable order of [`Var`]: higher
/// total degree is larger; ties are broken by the exponent of the smallest
/// variable, larger exponent first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            if a.0 != b.0 {
                // the side holding the smaller variable has a positive
                // exponent where the other has zero
                return if a.0 < b.0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        // equal degree and a common prefix imply equal monomials
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse polynomial. No zero coefficients are stored, so the zero
/// polynomial is the empty map and structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyExpr {
    terms: BTreeMap<Monomial, Scalar>,
}

impl PolyExpr {
    pub fn zero() -> Self {
        PolyExpr::default()
    }

    pub fn one() -> Self {
        PolyExpr::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        PolyExpr::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        PolyExpr::constant(Scalar::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        PolyExpr::term(Scalar::one(), Monomial::var(v))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PolyExpr { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = PolyExpr::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Leading term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> PolyExpr {
        if c.is_zero() {
            return PolyExpr::zero();
        }
        PolyExpr {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> PolyExpr {
        let mut acc = PolyExpr::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Degree in the given subset of variables.
    pub fn degree_in(&self, pred: impl Fn(&Var) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|m| m.factors().iter().filter(|(v, _)| pred(v)).map(|&(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect()
    }

    /// Highest jet order among the jet variables present.
    pub fn jet_order(&self) -> u32 {
        self.variables().iter().map(Var::jet_order).max().unwrap_or(0)
    }

    pub fn partial_derivative(&self, v: &Var) -> PolyExpr {
        let mut out = PolyExpr::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.drop_one(v) {
                out.add_term(rest, c * &Scalar::from_int(e as i64));
            }
        }
        out
    }

    /// Replaces `v` by `value` everywhere.
    pub fn substitute(&self, v: &Var, value: &PolyExpr) -> PolyExpr {
        let mut powers: Vec<PolyExpr> = vec![PolyExpr::one()];
        let mut out = PolyExpr::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = Monomial::from_pairs(
                m.factors().iter().filter(|(w, _)| w != v).cloned().collect(),
            );
            out = out + &(&powers[e as usize] * &PolyExpr::term(c.clone(), rest));
        }
        out
    }

    /// Generic evaluation in any commutative ring `R`: `konst` embeds
    /// coefficients, `var` supplies variable values.
    pub fn eval_in<R, E>(
        &self,
        konst: impl Fn(&Scalar) -> R,
        mut var: impl FnMut(&Var) -> Result<R, E>,
    ) -> Result<R, E>
    where
        R: Clone + Add<Output = R> + Mul<Output = R>,
    {
        let mut cache: BTreeMap<Var, Vec<R>> = BTreeMap::new();
        let mut acc: Option<R> = None;
        for (m, c) in &self.terms {
            let mut t = konst(c);
            for &(v, e) in m.factors() {
                let pw = match cache.entry(v) {
                    std::collections::btree_map::Entry::Occupied(o) => o.into_mut(),
                    std::collections::btree_map::Entry::Vacant(slot) => slot.insert(vec![var(&v)?]),
                };
                while pw.len() < e as usize {
                    let next = pw.last().unwrap().clone() * pw[0].clone();
                    pw.push(next);
                }
                t = t * pw[e as usize - 1].clone();
            }
            acc = Some(match acc {
                None => t,
                Some(a) => a + t,
            });
        }
        Ok(acc.unwrap_or_else(|| konst(&Scalar::zero())))
    }

    /// Exact value under an assignment; every occurring variable must be
    /// assigned.
    pub fn evaluate(&self, assignment: &impl Assignment) -> Result<Scalar, Error> {
        self.eval_in(
            |c| c.clone(),
            |v| assignment.value(v).ok_or(Error::MissingVariable(v.to_string())),
        )
    }

    /// Divides by a polynomial when the division is exact, via multivariate
    /// long division under the graded-lex order.
    pub fn exact_div(&self, divisor: &PolyExpr) -> Option<PolyExpr> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = PolyExpr::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.checked_div(&lm)?;
            let qc = c / &lc;
            let t = PolyExpr::term(qc, qm);
            rem = &rem - &(&t * divisor);
            quot = quot + &t;
        }
        Some(quot)
    }

    /// Gcd of all monomials present.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Divides every monomial by `m` (which must divide all of them).
    pub fn div_monomial(&self, m: &Monomial) -> PolyExpr {
        PolyExpr::from_terms(self.terms.iter().map(|(k, c)| {
            (k.checked_div(m).expect("monomial does not divide"), c.clone())
        }))
    }
}

/// Anything that can report exact values of variables.
pub trait Assignment {
    fn value(&self, v: &Var) -> Option<Scalar>;
}

impl Assignment for BTreeMap<Var, Scalar> {
    fn value(&self, v: &Var) -> Option<Scalar> {
        self.get(v).cloned()
    }
}

impl Assignment for std::collections::HashMap<Var, Scalar> {
    fn value(&self, v: &Var) -> Option<Scalar> {
        self.get(v).cloned()
    }
}

impl fmt::Debug for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coef = format!("{a:?}");
            if m.is_one() {
                write!(f, "{coef}")?;
            } else if a.is_one() {
                write!(f, "{m:?}")?;
            } else {
                write!(f, "{coef}*{m:?}")?;
            }
        }
        Ok(())
    }
}

impl From<Var> for PolyExpr {
    fn from(v: Var) -> Self {
        PolyExpr::var(v)
    }
}

impl From<Scalar> for PolyExpr {
    fn from(c: Scalar) -> Self {
        PolyExpr::constant(c)
    }
}

impl Add<&PolyExpr> for PolyExpr {
    type Output = PolyExpr;
    fn add(mut self, rhs: &PolyExpr) -> PolyExpr {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
        self
    }
}

impl Add<PolyExpr> for PolyExpr {
    type Output = PolyExpr;
    fn add(self, rhs: PolyExpr) -> PolyExpr {
        if self.terms.len() < rhs.terms.len() {
            rhs + &self
        } else {
            self + &rhs
        }
    }
}

impl Add<&PolyExpr> for &PolyExpr {
    type Output = PolyExpr;
    fn add(self, rhs: &PolyExpr) -> PolyExpr {
        self.clone() + rhs
    }
}

impl Sub<&PolyExpr> for PolyExpr {
    type Output = PolyExpr;
    fn sub(mut self, rhs: &PolyExpr) -> PolyExpr {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
        self
    }
}

impl Sub<PolyExpr> for PolyExpr {
    type Output = PolyExpr;
    fn sub(self, rhs: PolyExpr) -> PolyExpr {
        self - &rhs
    }
}

impl Sub<&PolyExpr> for &PolyExpr {
    type Output = PolyExpr;
    fn sub(self, rhs: &PolyExpr) -> PolyExpr {
        self.clone() - rhs
    }
}

impl Mul<&PolyExpr> for &PolyExpr {
    type Output = PolyExpr;
    fn mul(self, rhs: &PolyExpr) -> PolyExpr {
        let mut out = PolyExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul<PolyExpr> for PolyExpr {
    type Output = PolyExpr;
    fn mul(self, rhs: PolyExpr) -> PolyExpr {
        &self * &rhs
    }
}

impl Mul<&PolyExpr> for PolyExpr {
    type Output = PolyExpr;
    fn mul(self, rhs: &PolyExpr) -> PolyExpr {
        &self * rhs
    }
}

impl Neg for PolyExpr {
    type Output = PolyExpr;
    fn neg(self) -> PolyExpr {
        PolyExpr {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &PolyExpr {
    type Output = PolyExpr;
    fn neg(self) -> PolyExpr {
        -self.clone()
    }
}

/// Shorthand constructors used throughout the formulas.
pub fn v(var: Var) -> PolyExpr {
    PolyExpr::var(var)
}

pub fn c(n: i64) -> PolyExpr {
    PolyExpr::int(n)
}

pub fn q(num: i64, den: i64) -> PolyExpr {
    PolyExpr::constant(Scalar::new(num, den))
}
