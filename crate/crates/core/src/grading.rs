//! Gradings shared by every stage of the computation.
//!
//! A motivic degree `m + nα` is a [`Bidegree`]; Ext groups and spectral
//! sequence pages carry an extra homological degree `s`, giving a
//! [`Tridegree`]. The Adams grading of `(s, m + nα)` is `(m - s) + nα`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The motivic degree `m + nα`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub m: i32,
    pub n: i32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { m: 0, n: 0 };

    pub const fn new(m: i32, n: i32) -> Self {
        Bidegree { m, n }
    }
}

impl std::ops::Add for Bidegree {
    type Output = Bidegree;

    fn add(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.m + rhs.m, self.n + rhs.n)
    }
}

impl std::ops::Sub for Bidegree {
    type Output = Bidegree;

    fn sub(self, rhs: Bidegree) -> Bidegree {
        Bidegree::new(self.m - rhs.m, self.n - rhs.n)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.m, self.n) {
            (m, 0) => write!(f, "{m}"),
            (0, 1) => write!(f, "α"),
            (0, -1) => write!(f, "-α"),
            (0, n) => write!(f, "{n}α"),
            (m, 1) => write!(f, "{m}+α"),
            (m, -1) => write!(f, "{m}-α"),
            (m, n) if n > 0 => write!(f, "{m}+{n}α"),
            (m, n) => write!(f, "{m}{n}α"),
        }
    }
}

/// Homological degree `s` together with the motivic degree `m + nα`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tridegree {
    pub s: u32,
    pub m: i32,
    pub n: i32,
}

impl Tridegree {
    pub const fn new(s: u32, m: i32, n: i32) -> Self {
        Tridegree { s, m, n }
    }

    pub fn motivic(&self) -> Bidegree {
        Bidegree::new(self.m, self.n)
    }

    /// Total motivic degree `m + nα - s`.
    pub fn adams(&self) -> Bidegree {
        Bidegree::new(self.m - self.s as i32, self.n)
    }

    /// Where a `d_r` out of this tridegree lands.
    pub fn shift_dr(&self, r: u32) -> Tridegree {
        Tridegree::new(self.s + r, self.m + r as i32 - 1, self.n)
    }
}

impl fmt::Display for Tridegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.s, self.m, self.n)
    }
}

/// A finite box of tridegrees: `0 <= s <= s_max`, `m_min <= m <= m_max`,
/// `n_min <= n <= n_max`. `m` and `n` are motivic (not Adams) coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub s_max: u32,
    pub m_min: i32,
    pub m_max: i32,
    pub n_min: i32,
    pub n_max: i32,
}

impl Window {
    pub fn new(s_max: u32, m: (i32, i32), n: (i32, i32)) -> Result<Self> {
        if m.0 > m.1 || n.0 > n.1 {
            return Err(Error::EmptyWindow);
        }
        Ok(Window {
            s_max,
            m_min: m.0,
            m_max: m.1,
            n_min: n.0,
            n_max: n.1,
        })
    }

    pub fn contains(&self, t: Tridegree) -> bool {
        t.s <= self.s_max
            && (self.m_min..=self.m_max).contains(&t.m)
            && (self.n_min..=self.n_max).contains(&t.n)
    }

    pub fn contains_bidegree(&self, d: Bidegree) -> bool {
        (self.m_min..=self.m_max).contains(&d.m) && (self.n_min..=self.n_max).contains(&d.n)
    }

    /// Every `(m, n)` column, in lexicographic order.
    pub fn columns(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (self.m_min..=self.m_max)
            .flat_map(move |m| (self.n_min..=self.n_max).map(move |n| Bidegree::new(m, n)))
    }

    /// Every tridegree, ordered by `(s, m, n)`.
    pub fn tridegrees(&self) -> impl Iterator<Item = Tridegree> + '_ {
        (0..=self.s_max).flat_map(move |s| self.columns().map(move |d| Tridegree::new(s, d.m, d.n)))
    }

    /// Grows the box by `ds` homological steps and `dm` simplicial steps on top.
    pub fn extended(&self, ds: u32, dm: i32) -> Window {
        Window {
            s_max: self.s_max + ds,
            m_max: self.m_max + dm,
            ..*self
        }
    }
}
