//! Closed-form Hilbert polynomials and Poincaré functions for the metric,
//! conformal and equation settings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Scalar;
use crate::error::Error;
use crate::report::{CheckReport, Failure, Rule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Metric,
    Conformal,
    Sde,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Metric, Family::Conformal, Family::Sde];

    pub fn name(self) -> &'static str {
        match self {
            Family::Metric => "metric",
            Family::Conformal => "conformal",
            Family::Sde => "sde",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::BadParameter(format!("unknown family {s:?}")))
    }
}

/// Truncated power series in `z`, lowest coefficient first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries(pub Vec<Scalar>);

/// `H` for one setting together with `P(z) = N(z) / (1 - z)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingFormulas {
    pub family: Family,
    pub numerator: Vec<Scalar>,
    pub denominator_exp: u32,
}

fn ints(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| Scalar::from_int(x)).collect()
}

pub fn closed_forms(family: Family) -> CountingFormulas {
    let (numerator, denominator_exp) = match family {
        Family::Metric => (ints(&[0, 0, 9, 4, -30, 24, -6]), 4),
        Family::Conformal => (ints(&[0, 0, 1, 10, 5, -17, 7]), 3),
        Family::Sde => (ints(&[0, 0, 4, 8, -2, -8, 4]), 3),
    };
    CountingFormulas {
        family,
        numerator,
        denominator_exp,
    }
}

fn binomial(n: u32, k: u32) -> Scalar {
    (0..k).fold(Scalar::one(), |acc, i| {
        &(&acc * &Scalar::from_int((n - i) as i64)) / &Scalar::from_int((i + 1) as i64)
    })
}

/// Expanded `(1 - z)^e`.
fn one_minus_z_pow(e: u32) -> Vec<Scalar> {
    (0..=e)
        .map(|i| {
            let b = binomial(e, i);
            if i % 2 == 1 {
                -b
            } else {
                b
            }
        })
        .collect()
}

/// Multiplicity of `z = 1` as a root.
fn root_multiplicity_at_one(p: &[Scalar]) -> u32 {
    let mut p: Vec<Scalar> = p.to_vec();
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        return u32::MAX;
    }
    let mut mult = 0;
    loop {
        // synthetic division by (z - 1), highest coefficient first
        let mut q = vec![Scalar::zero(); p.len() - 1];
        let mut carry = Scalar::zero();
        for i in (0..p.len()).rev() {
            carry = &carry + &p[i];
            if i > 0 {
                q[i - 1] = carry.clone();
            }
        }
        if !carry.is_zero() || q.is_empty() {
            return mult;
        }
        mult += 1;
        p = q;
    }
}

impl CountingFormulas {
    /// `H(k)` with the exceptional low orders.
    pub fn hilbert(&self, k: u32) -> Scalar {
        let ki = k as i64;
        let v = match (self.family, k) {
            (_, 0 | 1) => 0,
            (Family::Metric, 2) => 9,
            (Family::Metric, _) => return Scalar::new((ki - 1) * (ki * ki + 25 * ki + 36), 6),
            (Family::Conformal, 2) => 1,
            (Family::Conformal, 3) => 13,
            (Family::Conformal, _) => 3 * ki * ki - 7,
            (Family::Sde, 2) => 4,
            (Family::Sde, 3) => 20,
            (Family::Sde, _) => 3 * ki * ki + ki - 6,
        };
        Scalar::from_int(v)
    }

    pub fn denominator(&self) -> Vec<Scalar> {
        one_minus_z_pow(self.denominator_exp)
    }

    /// First `terms` coefficients of `P(z)` by long division.
    pub fn series(&self, terms: usize) -> PowerSeries {
        let den = self.denominator();
        let mut c: Vec<Scalar> = Vec::with_capacity(terms);
        for n in 0..terms {
            let mut x = self.numerator.get(n).cloned().unwrap_or_else(Scalar::zero);
            for (i, d) in den.iter().enumerate().skip(1).take(n) {
                x = &x - &(d * &c[n - i]);
            }
            c.push(&x / &den[0]);
        }
        PowerSeries(c)
    }

    /// Order of the pole of `P` at `z = 1`.
    pub fn pole_order(&self) -> u32 {
        root_multiplicity_at_one(&self.denominator()) - root_multiplicity_at_one(&self.numerator)
    }

    /// Leading coefficient of `H`, `N(1) / (e - 1)!`, read off the pole.
    pub fn leading_coefficient(&self) -> Scalar {
        let n1 = self
            .numerator
            .iter()
            .fold(Scalar::zero(), |acc, c| &acc + c);
        let fact = (1..self.denominator_exp as i64).product::<i64>();
        &n1 / &Scalar::from_int(fact)
    }
}

/// Series coefficients against `H(k)` for `k < terms`, and the pole order
/// against the stored denominator, for every family.
pub fn series_check(terms: usize) -> CheckReport {
    let mut rep = CheckReport::new(
        "counting.series",
        "Poincaré series coefficients equal the Hilbert polynomial",
        Rule::All,
    );
    for fam in Family::ALL {
        let f = closed_forms(fam);
        let s = f.series(terms);
        for (k, c) in s.0.iter().enumerate() {
            let h = f.hilbert(k as u32);
            rep.record(c == &h, || {
                Failure::new(format!("{fam}: coefficient {k} is {c}, H({k}) = {h}"))
            });
        }
        let pole = f.pole_order();
        rep.record(pole == f.denominator_exp, || {
            Failure::new(format!("{fam}: pole order {pole}"))
        });
        rep.detail(
            &format!("{fam}.series"),
            s.0.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        );
        rep.detail(&format!("{fam}.pole_order"), pole);
    }
    rep
}

/// `H` and `H_c` share the leading term `3k²`: equal leading coefficients
/// from the poles, and `H - H_c` of degree below two on `4 <= k <= kmax`.
pub fn leading_term_check(kmax: u32) -> CheckReport {
    let mut rep = CheckReport::new(
        "counting.leading-term",
        "equation and conformal counts have the same leading term",
        Rule::All,
    );
    let h = closed_forms(Family::Sde);
    let hc = closed_forms(Family::Conformal);
    rep.record(
        h.pole_order() == hc.pole_order() && h.leading_coefficient() == hc.leading_coefficient(),
        || Failure::new("leading coefficients differ"),
    );
    let diffs: Vec<Scalar> = (0..=kmax).map(|k| &h.hilbert(k) - &hc.hilbert(k)).collect();
    for k in 6..=kmax as usize {
        let second = &(&diffs[k] - &(&diffs[k - 1] * &Scalar::from_int(2))) + &diffs[k - 2];
        rep.record(second.is_zero(), || {
            Failure::new(format!("H - H_c is not affine at k = {k}"))
        });
    }
    rep.detail(
        "differences",
        diffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    );
    rep.detail("leading_coefficient", h.leading_coefficient().to_string());
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let m = closed_forms(Family::Metric);
        let c = closed_forms(Family::Conformal);
        let s = closed_forms(Family::Sde);
        assert_eq!(m.hilbert(2), Scalar::from_int(9));
        assert_eq!(m.hilbert(3), Scalar::from_int(40));
        assert_eq!(c.hilbert(3), Scalar::from_int(13));
        assert_eq!(c.hilbert(4), Scalar::from_int(41));
        assert_eq!(s.hilbert(4), Scalar::from_int(46));
    }

    #[test]
    fn sde_series_matches_table_row() {
        let s = closed_forms(Family::Sde).series(8);
        assert_eq!(s.0, ints(&[0, 0, 4, 20, 46, 74, 108, 148]));
    }

    #[test]
    fn series_check_passes() {
        assert!(series_check(13).ok());
    }

    #[test]
    fn pole_orders() {
        let p: Vec<u32> = Family::ALL.iter().map(|&f| closed_forms(f).pole_order()).collect();
        assert_eq!(p, [4, 3, 3]);
        assert_eq!(closed_forms(Family::Metric).leading_coefficient(), Scalar::new(1, 6));
        assert_eq!(root_multiplicity_at_one(&ints(&[1, -2, 1])), 2);
    }

    #[test]
    fn leading_terms_agree() {
        let rep = leading_term_check(12);
        assert!(rep.ok());
        assert_eq!(closed_forms(Family::Conformal).leading_coefficient(), Scalar::from_int(3));
    }

    #[test]
    fn family_names() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("sd".parse::<Family>().is_err());
    }
}
