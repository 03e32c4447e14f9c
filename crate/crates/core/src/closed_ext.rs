//! Closed-form `Ext_{E(n)}(H_*, H_*)` and its derivation by the ρ-Bockstein
//! spectral sequence.
//!
//! When `q ≡ 1 (mod 4)` the answer is the polynomial algebra
//! `k^M_*[τ, v_0, …, v_n]`. When `q ≡ 3 (mod 4)` it is
//!
//! ```text
//! k^M_*[τ², v_0, …, v_n]/(ρ v_0)  ⊕  ρτ · k^M_*[τ², v_0, …, v_n]
//! ```
//!
//! and, with `ρ = u`, a monomial `κ τ^t v^E` belongs to it exactly when odd
//! `t` comes with `κ ∈ {u, πu}`, and even `t` with `κ ∈ {u, πu}` has no `v_0`.
//! Products are only known up to the ideal generated by
//! `πρτ^{2r+1} v_1 - τ^{2r+2} v_0`; monomials on either side carry an
//! [`AmbiguityFlag`] naming their partner.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{HStarMonomial, MilnorBasis, ResidueData};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Block, Subspace};
use crate::grading::{Bidegree, Tridegree, Window};
use crate::hopf::tau_degree;

/// A monomial `κ τ^t v_0^{e_0} ⋯ v_n^{e_n}` of the closed-form Ext algebra.
///
/// The derived order (τ-power, then Milnor symbol, then exponents) is the
/// canonical order used to pick representative names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExtMonomial {
    pub tau: u32,
    pub milnor: MilnorBasis,
    /// `v[i]` is the exponent of `v_i`, with trailing zeros trimmed.
    pub v: Vec<u32>,
}

impl ExtMonomial {
    pub fn new(milnor: MilnorBasis, tau: u32, v: Vec<u32>) -> Self {
        let mut m = ExtMonomial { tau, milnor, v };
        m.trim();
        m
    }

    pub fn one() -> Self {
        ExtMonomial::new(MilnorBasis::One, 0, Vec::new())
    }

    pub fn v_gen(i: u32) -> Self {
        let mut v = vec![0; i as usize + 1];
        v[i as usize] = 1;
        ExtMonomial::new(MilnorBasis::One, 0, v)
    }

    fn trim(&mut self) {
        while self.v.last() == Some(&0) {
            self.v.pop();
        }
    }

    pub fn v_exp(&self, i: usize) -> u32 {
        self.v.get(i).copied().unwrap_or(0)
    }

    pub fn with_v_exp(&self, i: usize, e: u32) -> Self {
        let mut v = self.v.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        ExtMonomial::new(self.milnor, self.tau, v)
    }

    /// Highest `v_i` that appears, if any.
    pub fn top_v(&self) -> Option<u32> {
        self.v.len().checked_sub(1).map(|i| i as u32)
    }

    pub fn coefficient(&self) -> HStarMonomial {
        HStarMonomial::new(self.tau, self.milnor)
    }

    pub fn tridegree(&self) -> Tridegree {
        let mut d = self.coefficient().bidegree();
        let mut s = 0;
        for (i, &e) in self.v.iter().enumerate() {
            let g = tau_degree(i as u32);
            d = Bidegree::new(d.m + e as i32 * g.m, d.n + e as i32 * g.n);
            s += e;
        }
        Tridegree::new(s, d.m, d.n)
    }

    /// Whether the monomial is nonzero in the closed-form algebra.
    pub fn is_valid(&self, rd: &ResidueData) -> bool {
        if rd.is_split() {
            return true;
        }
        let rho_multiple = matches!(self.milnor, MilnorBasis::U | MilnorBasis::PiU);
        if self.tau % 2 == 1 {
            rho_multiple
        } else {
            !rho_multiple || self.v_exp(0) == 0
        }
    }

    /// Whether the monomial lies in the `ρτ`-summand (`q ≡ 3` only).
    pub fn in_rho_tau_summand(&self, rd: &ResidueData) -> bool {
        !rd.is_split() && self.tau % 2 == 1
    }

    /// Product in the closed-form algebra; `None` when it vanishes.
    pub fn product(&self, rd: &ResidueData, other: &ExtMonomial) -> Option<ExtMonomial> {
        self.formal_product(rd, other).filter(|x| x.is_valid(rd))
    }

    /// Product with only the Milnor K-theory relations applied, ignoring
    /// `ρ v_0 = 0`; used for symbolic differential formulas.
    pub fn formal_product(&self, rd: &ResidueData, other: &ExtMonomial) -> Option<ExtMonomial> {
        let milnor = self.milnor.mul(rd, other.milnor)?;
        let len = self.v.len().max(other.v.len());
        let v = (0..len).map(|i| self.v_exp(i) + other.v_exp(i)).collect();
        Some(ExtMonomial::new(milnor, self.tau + other.tau, v))
    }

    /// The monomial `self / other` when `other` divides it in the free
    /// monomial sense (Milnor part must be 1 in `other`).
    pub fn divide(&self, other: &ExtMonomial) -> Option<ExtMonomial> {
        if other.milnor != MilnorBasis::One || other.tau > self.tau {
            return None;
        }
        let mut v = self.v.clone();
        for (i, &e) in other.v.iter().enumerate() {
            if self.v_exp(i) < e {
                return None;
            }
            v[i] -= e;
        }
        Some(ExtMonomial::new(self.milnor, self.tau - other.tau, v))
    }

    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        let coeff = self.coefficient();
        if coeff != HStarMonomial::ONE || self.v.is_empty() {
            parts.push(coeff.name());
        }
        for (i, &e) in self.v.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("v{i}")),
                e => parts.push(format!("v{i}^{e}")),
            }
        }
        parts.join(" ")
    }
}

impl fmt::Display for ExtMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Marks a monomial whose products are only determined modulo the ideal
/// `(πρτ^{2r+1} v_1 - τ^{2r+2} v_0)`. `partner` is the monomial in the same
/// tridegree that it may be identified with.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AmbiguityFlag {
    pub partner: ExtMonomial,
}

/// The ambiguity flag of a monomial, if it carries one.
pub fn ambiguity_flag(rd: &ResidueData, x: &ExtMonomial) -> Option<AmbiguityFlag> {
    if rd.is_split() {
        return None;
    }
    let odd = x.tau % 2 == 1;
    if x.milnor == MilnorBasis::PiU && odd && x.v_exp(1) >= 1 {
        let partner = ExtMonomial::new(MilnorBasis::One, x.tau + 1, x.v.clone())
            .with_v_exp(1, x.v_exp(1) - 1)
            .with_v_exp(0, x.v_exp(0) + 1);
        return Some(AmbiguityFlag { partner });
    }
    if x.milnor == MilnorBasis::One && !odd && x.tau >= 2 && x.v_exp(0) >= 1 {
        let partner = ExtMonomial::new(MilnorBasis::PiU, x.tau - 1, x.v.clone())
            .with_v_exp(0, x.v_exp(0) - 1)
            .with_v_exp(1, x.v_exp(1) + 1);
        return Some(AmbiguityFlag { partner });
    }
    None
}

/// One basis element of the closed form, with its flag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormEntry {
    pub monomial: ExtMonomial,
    pub flag: Option<AmbiguityFlag>,
}

/// Exponent vectors `(e_0, …, e_n)` with `Σ e_i = s` and `Σ e_i 2^i <= m`.
fn v_exponents(n: u32, s: u32, m: i32) -> Vec<Vec<u32>> {
    fn go(i: u32, n: u32, s: u32, m: i32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n {
            // The last slot takes the remainder.
            if s as i64 * (1i64 << i) <= m as i64 {
                cur.push(s);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for e in 0..=s {
            let cost = e as i64 * (1i64 << i);
            if cost > m as i64 {
                break;
            }
            // Whatever is left goes to higher slots, each costing at least 2^{i+1}.
            if (s - e) as i64 * (1i64 << (i + 1)) > m as i64 - cost {
                continue;
            }
            cur.push(e);
            go(i + 1, n, s - e, m - cost as i32, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 0 {
        go(0, n, s, m, &mut Vec::new(), &mut out);
    }
    out
}

/// Every closed-form monomial in tridegree `t`, in canonical order.
pub fn closed_form_basis(rd: &ResidueData, n: u32, t: Tridegree) -> Vec<ClosedFormEntry> {
    let mut out = Vec::new();
    for v in v_exponents(n, t.s, t.m) {
        let probe = ExtMonomial::new(MilnorBasis::One, 0, v.clone()).tridegree();
        let rest = t.motivic() - probe.motivic();
        let tau = rest.m;
        let j = -rest.n - tau;
        if tau < 0 || !(0..=2).contains(&j) {
            continue;
        }
        for k in MilnorBasis::ALL
            .into_iter()
            .filter(|k| k.degree() == j as u32)
        {
            let x = ExtMonomial::new(k, tau as u32, v.clone());
            if x.is_valid(rd) {
                let flag = ambiguity_flag(rd, &x);
                out.push(ClosedFormEntry { monomial: x, flag });
            }
        }
    }
    out.sort_by(|a, b| a.monomial.cmp(&b.monomial));
    out
}

/// Closed-form dimensions on every tridegree of a window.
pub fn closed_form_dimensions(
    rd: &ResidueData,
    n: u32,
    window: &Window,
) -> BTreeMap<Tridegree, usize> {
    window
        .tridegrees()
        .map(|t| (t, closed_form_basis(rd, n, t).len()))
        .collect()
}

/// A basis monomial of the ρ-Bockstein `E_1`-page
/// `(Ext_C ⊕ π Ext_C)[ρ]/(ρ²)` with `Ext_C = 𝔽_2[τ, v_0, …, v_n]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BocksteinMonomial {
    pub rho: bool,
    pub pi: bool,
    pub tau: u32,
    pub v: Vec<u32>,
}

impl BocksteinMonomial {
    pub fn rho_filtration(&self) -> u32 {
        self.rho as u32
    }

    /// The corresponding monomial of the abutment (`ρ = u`).
    pub fn to_ext(&self) -> ExtMonomial {
        let milnor = match (self.pi, self.rho) {
            (false, false) => MilnorBasis::One,
            (true, false) => MilnorBasis::Pi,
            (false, true) => MilnorBasis::U,
            (true, true) => MilnorBasis::PiU,
        };
        ExtMonomial::new(milnor, self.tau, self.v.clone())
    }

    pub fn tridegree(&self) -> Tridegree {
        self.to_ext().tridegree()
    }

    /// `d_1`, determined by `d_1 τ = ρ v_0` and the Leibniz rule.
    pub fn d1(&self) -> Option<BocksteinMonomial> {
        if self.rho || self.tau.is_multiple_of(2) {
            return None;
        }
        let mut v = self.v.clone();
        if v.is_empty() {
            v.push(0);
        }
        v[0] += 1;
        Some(BocksteinMonomial {
            rho: true,
            pi: self.pi,
            tau: self.tau - 1,
            v,
        })
    }

    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        if self.pi {
            parts.push("pi".to_string());
        }
        if self.rho {
            parts.push("rho".to_string());
        }
        let rest = ExtMonomial::new(MilnorBasis::One, self.tau, self.v.clone());
        if rest != ExtMonomial::one() || parts.is_empty() {
            parts.push(rest.name());
        }
        parts.join(" ")
    }
}

/// Basis of `E_1` in tridegree `t`, sorted.
pub fn bockstein_e1_basis(n: u32, t: Tridegree) -> Vec<BocksteinMonomial> {
    let mut out = Vec::new();
    for v in v_exponents(n, t.s, t.m) {
        let probe = ExtMonomial::new(MilnorBasis::One, 0, v.clone()).tridegree();
        let rest = t.motivic() - probe.motivic();
        let tau = rest.m;
        let j = -rest.n - tau;
        if tau < 0 || !(0..=2).contains(&j) {
            continue;
        }
        for (pi, rho) in [(false, false), (true, false), (false, true), (true, true)] {
            if pi as i32 + rho as i32 == j {
                let mut v = v.clone();
                while v.last() == Some(&0) {
                    v.pop();
                }
                out.push(BocksteinMonomial {
                    rho,
                    pi,
                    tau: tau as u32,
                    v,
                });
            }
        }
    }
    out.sort();
    out
}

/// `d_1` evaluated on one generator of `E_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorDifferential {
    pub source: String,
    pub target: Option<String>,
}

/// Outcome of running the ρ-Bockstein spectral sequence on a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoBocksteinResult {
    pub n: u32,
    pub e1_dims: BTreeMap<Tridegree, usize>,
    /// `E_2 = E_∞` classes per tridegree, as abutment monomials.
    pub e2: BTreeMap<Tridegree, Vec<ExtMonomial>>,
    /// `d_1` on `τ, π, ρ, v_0, …, v_n`.
    pub generator_d1: Vec<GeneratorDifferential>,
    /// Largest ρ-filtration carried by an `E_2` class.
    pub max_rho_filtration: u32,
    /// No `d_r` with `r >= 2` can be nonzero: such a differential raises
    /// ρ-filtration by `r`, beyond `max_rho_filtration`.
    pub collapses_at_e2: bool,
}

impl RhoBocksteinResult {
    pub fn e2_dims(&self) -> BTreeMap<Tridegree, usize> {
        self.e2.iter().map(|(t, v)| (*t, v.len())).collect()
    }
}

fn generator_differentials(n: u32) -> Vec<GeneratorDifferential> {
    let mono = |rho, pi, tau, v: Vec<u32>| BocksteinMonomial { rho, pi, tau, v };
    let mut gens = vec![
        mono(false, false, 1, vec![]),
        mono(false, true, 0, vec![]),
        mono(true, false, 0, vec![]),
    ];
    for i in 0..=n {
        let mut v = vec![0; i as usize + 1];
        v[i as usize] = 1;
        gens.push(mono(false, false, 0, v));
    }
    gens.into_iter()
        .map(|g| GeneratorDifferential {
            source: g.name(),
            target: g.d1().map(|t| t.name()),
        })
        .collect()
}

/// Runs the ρ-Bockstein spectral sequence for `q ≡ 3 (mod 4)` on a window:
/// builds `E_1`, takes `d_1`-homology column by column and checks collapse.
pub fn rho_bockstein_e2(rd: &ResidueData, n: u32, window: &Window) -> Result<RhoBocksteinResult> {
    if rd.is_split() {
        return Err(Error::SplitCase { q: rd.q });
    }
    let columns: Vec<Bidegree> = window.columns().collect();
    let per_column: Vec<Vec<(Tridegree, usize, Vec<ExtMonomial>)>> = columns
        .par_iter()
        .map(|&d| {
            // d_1 preserves (m, n) and raises s by one.
            let bases: Vec<Vec<BocksteinMonomial>> = (0..=window.s_max + 1)
                .map(|s| bockstein_e1_basis(n, Tridegree::new(s, d.m, d.n)))
                .collect();
            let blocks: Vec<Gf2Block> = (0..=window.s_max as usize)
                .map(|s| {
                    let rows = bases[s]
                        .iter()
                        .map(|x| match x.d1() {
                            Some(y) => {
                                vec![bases[s + 1].binary_search(&y).expect("d1 target in basis")
                                    as u32]
                            }
                            None => Vec::new(),
                        })
                        .collect();
                    Gf2Block::new(bases[s + 1].len(), rows)
                })
                .collect();
            (0..=window.s_max as usize)
                .map(|s| {
                    let cycles = blocks[s].kernel();
                    let boundaries = if s == 0 {
                        Subspace::new(bases[0].len())
                    } else {
                        blocks[s - 1].image()
                    };
                    let reps = boundaries.complement_in(&cycles);
                    // d_1 sends basis vectors to basis vectors or zero, so
                    // homology has a monomial basis given by the leading terms.
                    let classes: Vec<ExtMonomial> = reps
                        .iter()
                        .map(|r| bases[s][r[0] as usize].to_ext())
                        .collect();
                    (Tridegree::new(s as u32, d.m, d.n), bases[s].len(), classes)
                })
                .collect()
        })
        .collect();
    let mut e1_dims = BTreeMap::new();
    let mut e2 = BTreeMap::new();
    for (t, dim, mut classes) in per_column.into_iter().flatten() {
        classes.sort();
        e1_dims.insert(t, dim);
        e2.insert(t, classes);
    }
    let max_rho_filtration = e2
        .values()
        .flatten()
        .map(|x: &ExtMonomial| matches!(x.milnor, MilnorBasis::U | MilnorBasis::PiU) as u32)
        .max()
        .unwrap_or(0);
    Ok(RhoBocksteinResult {
        n,
        e1_dims,
        e2,
        generator_d1: generator_differentials(n),
        max_rho_filtration,
        collapses_at_e2: max_rho_filtration < 2,
    })
}
