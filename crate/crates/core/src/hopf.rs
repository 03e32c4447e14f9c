//! The quotient Hopf algebroids `E(n) = H_*[τ_0, …, τ_n] / (τ_i² - ρτ_{i+1}, τ_n²)`.
//!
//! `E(n)` is free over `H_*` on the square-free monomials in the `τ_i`. The
//! `τ_i` are primitive, Milnor K-theory classes are primitive, and the only
//! interesting structure map is the right unit `η_R(τ) = τ + ρτ_0`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arithmetic::{HStarMonomial, MilnorBasis, ResidueData};
use crate::error::{Error, Result};
use crate::grading::{Bidegree, Window};

/// Largest truncation level supported; the τ-bitmask lives in a `u32`.
pub const MAX_LEVEL: u32 = 30;

/// Degree of `τ_i`: `(2^i - 1)(1 + α) + 1`.
pub fn tau_degree(i: u32) -> Bidegree {
    let w = (1i32 << i) - 1;
    Bidegree::new(w + 1, w)
}

/// A square-free monomial `τ_{i_1} ⋯ τ_{i_k}`, stored as a bitmask. Bit `i`
/// stands for `τ_i`, so the `m`-degree of the monomial is the mask itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TauSet(pub u32);

impl TauSet {
    pub const EMPTY: TauSet = TauSet(0);

    pub fn single(i: u32) -> TauSet {
        TauSet(1 << i)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: u32) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> impl Iterator<Item = u32> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn degree(self) -> Bidegree {
        Bidegree::new(self.0 as i32, self.0 as i32 - self.0.count_ones() as i32)
    }

    /// All subsets, the empty set and `self` included, in increasing order.
    pub fn subsets(self) -> impl Iterator<Item = TauSet> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(TauSet(cur))
        })
    }

    pub fn name(self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.indices().map(|i| format!("tau{i}")).collect()
    }
}

/// A basis element `h · τ^E` of `E(n)` over `GF(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EnMonomial {
    pub taus: TauSet,
    pub coeff: HStarMonomial,
}

impl EnMonomial {
    pub fn new(coeff: HStarMonomial, taus: TauSet) -> Self {
        EnMonomial { taus, coeff }
    }

    pub fn scalar(coeff: HStarMonomial) -> Self {
        EnMonomial::new(coeff, TauSet::EMPTY)
    }

    pub fn degree(&self) -> Bidegree {
        self.coeff.bidegree() + self.taus.degree()
    }

    pub fn name(&self) -> String {
        match (self.coeff == HStarMonomial::ONE, self.taus.is_empty()) {
            (_, true) => self.coeff.name(),
            (true, false) => self.taus.name(),
            (false, false) => format!("{} {}", self.coeff.name(), self.taus.name()),
        }
    }
}

impl fmt::Display for EnMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A GF(2) combination of [`EnMonomial`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct EnElement(BTreeSet<EnMonomial>);

impl EnElement {
    pub fn zero() -> Self {
        EnElement::default()
    }

    pub fn monomial(m: EnMonomial) -> Self {
        let mut e = EnElement::zero();
        e.toggle(m);
        e
    }

    pub fn toggle(&mut self, m: EnMonomial) {
        if !self.0.remove(&m) {
            self.0.insert(m);
        }
    }

    pub fn add(&mut self, other: &EnElement) {
        for &m in &other.0 {
            self.toggle(m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &EnMonomial> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for EnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names: Vec<_> = self.0.iter().map(EnMonomial::name).collect();
        f.write_str(&names.join(" + "))
    }
}

/// One term `left ⊗ τ^right` of a comultiplication. Coefficients are always
/// moved into the left factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TensorTerm {
    pub left: EnMonomial,
    pub right: TauSet,
}

/// The relation imposed on `τ_i²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relation {
    pub generator: u32,
    /// `Some((ρ, i + 1))` for `τ_i² = ρτ_{i+1}`, `None` for `τ_i² = 0`.
    pub rhs: Option<(MilnorBasis, u32)>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rhs {
            Some((rho, j)) => write!(f, "tau{}^2 = {} tau{}", self.generator, rho, j),
            None => write!(f, "tau{}^2 = 0", self.generator),
        }
    }
}

/// A presentation of `E(n)` over `H_*` for a fixed field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnPresentation {
    pub rd: ResidueData,
    pub n: u32,
    pub generator_degrees: Vec<Bidegree>,
    pub relations: Vec<Relation>,
}

pub fn en_presentation(rd: &ResidueData, n: u32) -> EnPresentation {
    assert!(n <= MAX_LEVEL, "truncation level {n} is too large");
    let relations = (0..=n)
        .map(|i| Relation {
            generator: i,
            rhs: if i < n {
                rd.rho().map(|rho| (rho, i + 1))
            } else {
                None
            },
        })
        .collect();
    EnPresentation {
        rd: *rd,
        n,
        generator_degrees: (0..=n).map(tau_degree).collect(),
        relations,
    }
}

impl EnPresentation {
    /// Rank of `E(n)` as an `H_*`-module.
    pub fn rank(&self) -> u64 {
        1 << (self.n + 1)
    }

    /// The square-free τ-monomials forming an `H_*`-basis, in mask order.
    pub fn tau_basis(&self) -> impl Iterator<Item = TauSet> {
        (0..(1u32 << (self.n + 1))).map(TauSet)
    }

    /// Nonempty square-free τ-monomials: the bars of the reduced cobar complex.
    pub fn augmentation_basis(&self) -> impl Iterator<Item = TauSet> {
        (1..(1u32 << (self.n + 1))).map(TauSet)
    }

    /// `h·τ^E · τ_i`, reduced with `τ_i² = ρτ_{i+1}` (or `0` at the top).
    fn mul_tau(&self, coeff: HStarMonomial, taus: TauSet, i: u32) -> Option<EnMonomial> {
        if !taus.contains(i) {
            return Some(EnMonomial::new(coeff, TauSet(taus.0 | (1 << i))));
        }
        let rest = TauSet(taus.0 & !(1 << i));
        let rel = self.relations[i as usize];
        let (rho, next) = rel.rhs?;
        let coeff = coeff.mul(&self.rd, &HStarMonomial::new(0, rho))?;
        self.mul_tau(coeff, rest, next)
    }

    pub fn multiply(&self, a: &EnMonomial, b: &EnMonomial) -> Option<EnMonomial> {
        let coeff = a.coeff.mul(&self.rd, &b.coeff)?;
        b.taus
            .indices()
            .try_fold(EnMonomial::new(coeff, a.taus), |acc, i| {
                self.mul_tau(acc.coeff, acc.taus, i)
            })
    }

    pub fn multiply_elements(&self, a: &EnElement, b: &EnElement) -> EnElement {
        let mut out = EnElement::zero();
        for x in a.terms() {
            for y in b.terms() {
                if let Some(p) = self.multiply(x, y) {
                    out.toggle(p);
                }
            }
        }
        out
    }

    pub fn eta_l(&self, h: &HStarMonomial) -> EnElement {
        EnElement::monomial(EnMonomial::scalar(*h))
    }

    /// `η_R(κτ^t) = κ(τ + ρτ_0)^t`, expanded by repeated multiplication.
    pub fn eta_r(&self, h: &HStarMonomial) -> EnElement {
        let mut eta_tau =
            EnElement::monomial(EnMonomial::scalar(HStarMonomial::new(1, MilnorBasis::One)));
        if let Some(rho) = self.rd.rho() {
            eta_tau.toggle(EnMonomial::new(
                HStarMonomial::new(0, rho),
                TauSet::single(0),
            ));
        }
        let mut out = EnElement::monomial(EnMonomial::scalar(HStarMonomial::new(0, h.milnor)));
        for _ in 0..h.tau_exp {
            out = self.multiply_elements(&out, &eta_tau);
        }
        out
    }

    /// `η_R(h) - η_L(h)`: the degree-zero cobar differential.
    pub fn eta_diff(&self, h: &HStarMonomial) -> EnElement {
        let mut d = self.eta_r(h);
        d.add(&self.eta_l(h));
        d
    }

    /// `Δ(h τ^E) = h · ∏_{i ∈ E} (τ_i ⊗ 1 + 1 ⊗ τ_i)`.
    pub fn comultiply(&self, mono: &EnMonomial) -> Vec<TensorTerm> {
        mono.taus
            .subsets()
            .map(|left| TensorTerm {
                left: EnMonomial::new(mono.coeff, left),
                right: TauSet(mono.taus.0 & !left.0),
            })
            .collect()
    }

    /// `Δ` with the `x ⊗ 1` and `1 ⊗ x` terms removed.
    pub fn reduced_comultiply(&self, mono: &EnMonomial) -> Vec<TensorTerm> {
        self.comultiply(mono)
            .into_iter()
            .filter(|t| !t.left.taus.is_empty() && !t.right.is_empty())
            .collect()
    }

    /// Counit: projection onto the `τ`-free part.
    pub fn counit(&self, mono: &EnMonomial) -> Option<HStarMonomial> {
        mono.taus.is_empty().then_some(mono.coeff)
    }
}

/// Smallest `n >= 1` with `2^{n+1} - 1 > D`, where `D` bounds the simplicial
/// degree `m` of the box. Every bar involving `τ_{n+1}` has `m >= 2^{n+1}`,
/// so `Ext` over `E(n)` and over `E(∞)` agree inside the box.
pub fn truncation_level(window: &Window) -> Result<u32> {
    if window.m_min > window.m_max || window.n_min > window.n_max {
        return Err(Error::EmptyWindow);
    }
    Ok(truncation_level_for_degree(window.m_max.max(0) as u32))
}

pub fn truncation_level_for_degree(d: u32) -> u32 {
    let mut n = 1;
    while (1u64 << (n + 1)) - 1 <= d as u64 {
        n += 1;
    }
    n
}
