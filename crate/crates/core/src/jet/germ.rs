use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::taylor::TaylorPoly;
use crate::algebra::{Assignment, Fiber, MultiIndex, PolyExpr, Scalar, Var};
use crate::error::{Error, Result};

/// Truncated Taylor expansion of `(p, q, r)` about a base point.
///
/// Stored values are Taylor coefficients; the jet coordinate `u_σ` equals
/// `σ!` times the coefficient of the offset monomial `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetGerm {
    base: [Scalar; 4],
    order: u32,
    series: [TaylorPoly; 3],
}

impl JetGerm {
    pub fn new(base: [Scalar; 4], order: u32) -> Self {
        JetGerm {
            base,
            order,
            series: std::array::from_fn(|_| TaylorPoly::zero(order)),
        }
    }

    /// `p = q = r = 0` at the origin.
    pub fn flat(order: u32) -> Self {
        JetGerm::new(std::array::from_fn(|_| Scalar::zero()), order)
    }

    pub fn base_point(&self) -> &[Scalar; 4] {
        &self.base
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn series(&self, u: Fiber) -> &TaylorPoly {
        &self.series[u.index()]
    }

    pub fn coeff(&self, u: Fiber, s: &MultiIndex) -> Scalar {
        self.series[u.index()].coeff(s)
    }

    pub fn set_coeff(&mut self, u: Fiber, s: &MultiIndex, c: Scalar) {
        self.series[u.index()].set_coeff(s, c);
    }

    /// Jet coordinate `u_σ`, or `None` beyond the germ order.
    pub fn jet(&self, u: Fiber, s: &MultiIndex) -> Option<Scalar> {
        (s.order() <= self.order).then(|| self.series[u.index()].derivative_at_origin(s))
    }

    pub fn set_jet(&mut self, u: Fiber, s: &MultiIndex, value: &Scalar) {
        let c = value / &Scalar::from(s.factorial());
        self.set_coeff(u, s, c);
    }

    pub fn truncate(&self, order: u32) -> JetGerm {
        JetGerm {
            base: self.base.clone(),
            order: order.min(self.order),
            series: std::array::from_fn(|i| self.series[i].truncate(order)),
        }
    }

    /// Copy with a higher order; the new coefficients are zero.
    pub fn extend(&self, order: u32) -> JetGerm {
        let mut g = JetGerm::new(self.base.clone(), order.max(self.order));
        for u in Fiber::ALL {
            for (s, c) in self.series(u).iter() {
                g.set_coeff(u, &s, c.clone());
            }
        }
        g
    }

    /// Every jet coordinate of order `<= k` with its value, base first.
    pub fn coordinates(&self, k: u32) -> Vec<(Var, Scalar)> {
        Var::jet_coordinates(k.min(self.order))
            .into_iter()
            .map(|v| {
                let x = self.value(&v).unwrap();
                (v, x)
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GermFile::from(self)).unwrap()
    }

    pub fn from_json(s: &str) -> Result<JetGerm> {
        let f: GermFile = serde_json::from_str(s)?;
        f.try_into()
    }
}

impl Assignment for JetGerm {
    fn value(&self, v: &Var) -> Option<Scalar> {
        match v {
            Var::Base(d) => Some(self.base[d.index()].clone()),
            Var::Jet(u, s) => self.jet(*u, s),
            Var::Aux(_) => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GermFile {
    base_point: [Scalar; 4],
    order: u32,
    coefficients: BTreeMap<String, BTreeMap<String, Scalar>>,
}

fn exponent_key(s: &MultiIndex) -> String {
    s.0.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
}

fn parse_key(k: &str) -> Result<MultiIndex> {
    let parts: Vec<u8> = k
        .split_whitespace()
        .map(|x| x.parse::<u8>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad exponent key {k:?}")))?;
    let arr: [u8; 4] = parts
        .try_into()
        .map_err(|_| Error::Parse(format!("exponent key {k:?} needs 4 entries")))?;
    Ok(MultiIndex(arr))
}

impl From<&JetGerm> for GermFile {
    fn from(g: &JetGerm) -> Self {
        let coefficients = Fiber::ALL
            .iter()
            .map(|&u| {
                let m = MultiIndex::all_up_to(g.order)
                    .iter()
                    .map(|s| (exponent_key(s), g.coeff(u, s)))
                    .collect();
                (u.name().to_string(), m)
            })
            .collect();
        GermFile {
            base_point: g.base.clone(),
            order: g.order,
            coefficients,
        }
    }
}

impl TryFrom<GermFile> for JetGerm {
    type Error = Error;
    fn try_from(f: GermFile) -> Result<JetGerm> {
        if f.order > super::taylor::MAX_DEGREE {
            return Err(Error::Parse(format!("germ order {} too large", f.order)));
        }
        let mut g = JetGerm::new(f.base_point, f.order);
        for (name, m) in f.coefficients {
            let u = Fiber::ALL
                .into_iter()
                .find(|u| u.name() == name)
                .ok_or_else(|| Error::Parse(format!("unknown fiber {name:?}")))?;
            for (k, c) in m {
                let s = parse_key(&k)?;
                if s.order() > f.order {
                    return Err(Error::Parse(format!("exponent {k:?} above germ order")));
                }
                g.set_coeff(u, &s, c);
            }
        }
        Ok(g)
    }
}

/// Taylor polynomial of `e ∘ j` about the base point, of degree
/// `j.order - ord(e)`; its `τ`-derivative at 0 is `D_τ e` at the germ.
pub fn compose_with_germ(e: &PolyExpr, j: &JetGerm) -> Result<TaylorPoly> {
    let need = e.jet_order();
    if need > j.order {
        return Err(Error::OrderTooLow { have: j.order, need });
    }
    compose_to_degree(e, j, j.order - need)
}

/// As [`compose_with_germ`] but truncated at `deg`, which must not exceed
/// `j.order - ord(e)`.
pub fn compose_to_degree(e: &PolyExpr, j: &JetGerm, deg: u32) -> Result<TaylorPoly> {
    let need = e.jet_order() + deg;
    if need > j.order {
        return Err(Error::OrderTooLow { have: j.order, need });
    }
    e.eval_in(
        |c| TaylorPoly::constant(c.clone(), deg),
        |v| match v {
            Var::Base(d) => Ok(TaylorPoly::coordinate(*d, j.base[d.index()].clone(), deg)),
            Var::Jet(u, s) => Ok(j.series(*u).partial(s).truncate(deg)),
            Var::Aux(_) => Err(Error::MissingVariable(v.to_string())),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::v;
    use crate::algebra::Dir;

    #[test]
    fn factorial_scaling() {
        let mut g = JetGerm::flat(3);
        let s = MultiIndex::new(0, 2, 1, 0);
        g.set_jet(Fiber::Q, &s, &Scalar::from_int(6));
        assert_eq!(g.coeff(Fiber::Q, &s), Scalar::from_int(3));
        assert_eq!(g.jet(Fiber::Q, &s), Some(Scalar::from_int(6)));
        assert_eq!(g.jet(Fiber::Q, &MultiIndex::new(0, 4, 0, 0)), None);
    }

    #[test]
    fn compose_identity_section() {
        // p = t^2
        let mut g = JetGerm::flat(3);
        g.set_coeff(Fiber::P, &MultiIndex::new(2, 0, 0, 0), Scalar::one());
        let tp = compose_with_germ(&v(Var::P), &g).unwrap();
        assert_eq!(tp.degree(), 3);
        assert_eq!(&tp, g.series(Fiber::P));
    }

    #[test]
    fn order_too_low() {
        let g = JetGerm::flat(1);
        let e = v(Var::jet(Fiber::P, &[Dir::X, Dir::X]));
        assert!(matches!(
            compose_with_germ(&e, &g),
            Err(Error::OrderTooLow { have: 1, need: 2 })
        ));
    }

    #[test]
    fn json_round_trip() {
        let mut g = JetGerm::new(
            [Scalar::zero(), Scalar::new(3, 2), Scalar::from_int(-4), Scalar::zero()],
            2,
        );
        g.set_coeff(Fiber::R, &MultiIndex::new(1, 0, 1, 0), Scalar::new(-7, 3));
        let s = g.to_json();
        assert!(s.contains("\"1 0 1 0\": \"-7/3\""));
        assert_eq!(JetGerm::from_json(&s).unwrap(), g);
    }
}
