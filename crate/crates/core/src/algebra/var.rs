//! Variable universe shared by every polynomial in the crate.
//!
//! Ordering (used by the graded-lex monomial order):
//! base directions `t < x < y < z`, then jet coordinates ordered by fiber
//! (`p < q < r`) and then by multi-index in graded-lex order, then
//! auxiliary variables by index.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Base direction of `M = R^4(t, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    T,
    X,
    Y,
    Z,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::T, Dir::X, Dir::Y, Dir::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Dir {
        Dir::ALL[i]
    }

    pub fn name(self) -> &'static str {
        ["t", "x", "y", "z"][self as usize]
    }
}

/// Fiber coordinate of the bundle `M x R^3(p, q, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Fiber {
    P,
    Q,
    R,
}

impl Fiber {
    pub const ALL: [Fiber; 3] = [Fiber::P, Fiber::Q, Fiber::R];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["p", "q", "r"][self as usize]
    }
}

/// Exponent vector over `(t, x, y, z)`; indexes jet coordinates and
/// iterated total derivatives.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MultiIndex(pub [u8; 4]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; 4]);

    pub fn new(t: u8, x: u8, y: u8, z: u8) -> Self {
        MultiIndex([t, x, y, z])
    }

    pub fn unit(d: Dir) -> Self {
        let mut e = [0; 4];
        e[d.index()] = 1;
        MultiIndex(e)
    }

    /// Builds the index of `u_{d1 d2 ...}`, e.g. `from_dirs(&[X, Y])` is `xy`.
    pub fn from_dirs(dirs: &[Dir]) -> Self {
        dirs.iter().fold(MultiIndex::ZERO, |acc, &d| acc + MultiIndex::unit(d))
    }

    pub fn order(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn get(&self, d: Dir) -> u8 {
        self.0[d.index()]
    }

    pub fn bump(&self, d: Dir) -> Self {
        let mut e = self.0;
        e[d.index()] += 1;
        MultiIndex(e)
    }

    /// `self - other` when componentwise nonnegative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut e = [0u8; 4];
        for i in 0..4 {
            e[i] = self.0[i].checked_sub(other.0[i])?;
        }
        Some(MultiIndex(e))
    }

    /// `σ! = Π σ_i!`
    pub fn factorial(&self) -> u64 {
        self.0
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>())
            .product()
    }

    /// All multi-indices of exactly the given order, ascending in graded-lex.
    pub fn all_of_order(order: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let n = order as u8;
        for t in 0..=n {
            for x in 0..=(n - t) {
                for y in 0..=(n - t - x) {
                    out.push(MultiIndex([t, x, y, n - t - x - y]));
                }
            }
        }
        out.sort();
        out
    }

    /// All multi-indices with order `<= max`, ascending in graded-lex.
    pub fn all_up_to(max: u32) -> Vec<MultiIndex> {
        (0..=max).flat_map(MultiIndex::all_of_order).collect()
    }

    /// Directions with multiplicity, e.g. `txx` -> `[T, X, X]`.
    pub fn dirs(&self) -> Vec<Dir> {
        let mut v = Vec::new();
        for d in Dir::ALL {
            for _ in 0..self.get(d) {
                v.push(d);
            }
        }
        v
    }
}

impl Add for MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: MultiIndex) -> MultiIndex {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(rhs.0) {
            *a += b;
        }
        MultiIndex(e)
    }
}

/// Graded: total order first, then lexicographic on `(t, x, y, z)` with a
/// larger leading exponent sorting first, so `tt < tx < ... < zz`.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order() == 0 {
            return write!(f, "0");
        }
        for d in self.dirs() {
            write!(f, "{}", d.name())?;
        }
        Ok(())
    }
}

/// A coordinate on `J^k` (or an auxiliary symbol).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Base(Dir),
    Jet(Fiber, MultiIndex),
    Aux(u16),
}

impl Var {
    pub const T: Var = Var::Base(Dir::T);
    pub const X: Var = Var::Base(Dir::X);
    pub const Y: Var = Var::Base(Dir::Y);
    pub const Z: Var = Var::Base(Dir::Z);
    pub const P: Var = Var::Jet(Fiber::P, MultiIndex::ZERO);
    pub const Q: Var = Var::Jet(Fiber::Q, MultiIndex::ZERO);
    pub const R: Var = Var::Jet(Fiber::R, MultiIndex::ZERO);

    /// Jet coordinate `u_{dirs}`.
    pub fn jet(u: Fiber, dirs: &[Dir]) -> Var {
        Var::Jet(u, MultiIndex::from_dirs(dirs))
    }

    /// Jet order (0 for base variables and fiber values, 0 for auxiliaries).
    pub fn jet_order(&self) -> u32 {
        match self {
            Var::Jet(_, s) => s.order(),
            _ => 0,
        }
    }

    pub fn is_jet(&self) -> bool {
        matches!(self, Var::Jet(..))
    }

    /// All seven coordinates of `J^0` in canonical order.
    pub fn j0() -> [Var; 7] {
        [Var::T, Var::X, Var::Y, Var::Z, Var::P, Var::Q, Var::R]
    }

    /// Base variables followed by every jet coordinate of order `<= k`,
    /// fiber-major, each fiber in graded-lex order.
    pub fn jet_coordinates(k: u32) -> Vec<Var> {
        let mut out: Vec<Var> = Dir::ALL.iter().map(|&d| Var::Base(d)).collect();
        let idx = MultiIndex::all_up_to(k);
        for u in Fiber::ALL {
            out.extend(idx.iter().map(|&s| Var::Jet(u, s)));
        }
        out
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Base(d) => write!(f, "{}", d.name()),
            Var::Jet(u, s) if s.order() == 0 => write!(f, "{}", u.name()),
            Var::Jet(u, s) => write!(f, "{}_{:?}", u.name(), s),
            Var::Aux(i) => write!(f, "aux{i}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_order_is_base_then_fiber_then_aux() {
        let mut v = vec![
            Var::Aux(0),
            Var::jet(Fiber::Q, &[Dir::X]),
            Var::R,
            Var::Z,
            Var::P,
            Var::T,
            Var::jet(Fiber::P, &[Dir::X, Dir::X]),
            Var::jet(Fiber::P, &[Dir::T]),
            Var::jet(Fiber::P, &[Dir::X]),
        ];
        v.sort();
        let names: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(names, ["t", "z", "p", "p_t", "p_x", "p_xx", "q_x", "r", "aux0"]);
    }

    #[test]
    fn counts_match_binomials() {
        for k in 0..7u32 {
            let n = MultiIndex::all_of_order(k).len() as u64;
            let expect = (k as u64 + 1) * (k as u64 + 2) * (k as u64 + 3) / 6;
            assert_eq!(n, expect);
        }
        assert_eq!(Var::jet_coordinates(2).len(), 4 + 3 * 15);
    }

    #[test]
    fn factorial_and_sub() {
        let s = MultiIndex::new(2, 0, 3, 1);
        assert_eq!(s.factorial(), 2 * 6);
        assert_eq!(
            s.checked_sub(&MultiIndex::new(1, 0, 1, 1)),
            Some(MultiIndex::new(1, 0, 2, 0))
        );
        assert_eq!(s.checked_sub(&MultiIndex::new(0, 1, 0, 0)), None);
    }
}
