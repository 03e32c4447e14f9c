//! Brute-force `Ext_{E(n)}(H_*, H_*)` through the reduced cobar complex.
//!
//! `C^s` is free over `H_*` on words `[τ^{E_1} | ⋯ | τ^{E_s}]` of nonempty
//! square-free τ-monomials, with coefficients written on the left. The
//! differential of `a[w_1|⋯|w_s]` is
//!
//! ```text
//! (η_R(a) - η_L(a)) | w_1 | ⋯ | w_s   +   Σ_i a[w_1|⋯|Δ̄ w_i|⋯|w_s]
//! ```
//!
//! It preserves the motivic degree, so each `(m, n)` column is an
//! independent chain complex of finite-dimensional blocks.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{h_star_basis, HStarMonomial, ResidueData};
use crate::error::{Error, Result};
use crate::gf2::{self, Gf2Block, SparseVec, Subspace};
use crate::grading::{Bidegree, Tridegree, Window};
use crate::hopf::{en_presentation, EnMonomial, EnPresentation, TauSet};

/// Environment variable capping the bytes of a single cobar block.
pub const MEM_BUDGET_ENV: &str = "MOTIVIC_EXT_MEM_BUDGET";

/// Default block budget: 1 GiB.
pub const DEFAULT_MEM_BUDGET: u64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CobarConfig {
    /// Bytes allowed for one dense copy of a differential block.
    pub mem_budget: u64,
    /// Enumerate each basis in reverse order (used to check that the answer
    /// does not depend on the basis order).
    pub reverse_basis: bool,
}

impl Default for CobarConfig {
    fn default() -> Self {
        CobarConfig {
            mem_budget: DEFAULT_MEM_BUDGET,
            reverse_basis: false,
        }
    }
}

impl CobarConfig {
    /// Reads [`MEM_BUDGET_ENV`], falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        let mut cfg = CobarConfig::default();
        if let Ok(raw) = std::env::var(MEM_BUDGET_ENV) {
            cfg.mem_budget = raw.trim().parse().map_err(|_| {
                Error::InvalidInput(format!(
                    "{MEM_BUDGET_ENV} must be a byte count, got {raw:?}"
                ))
            })?;
        }
        Ok(cfg)
    }
}

/// A basis element `coeff [bars_1 | ⋯ | bars_s]` of the reduced cobar complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CobarWord {
    pub bars: Vec<TauSet>,
    pub coeff: HStarMonomial,
}

impl CobarWord {
    pub fn new(coeff: HStarMonomial, bars: Vec<TauSet>) -> Self {
        debug_assert!(bars.iter().all(|b| !b.is_empty()));
        CobarWord { bars, coeff }
    }

    pub fn tridegree(&self) -> Tridegree {
        let d = self
            .bars
            .iter()
            .fold(self.coeff.bidegree(), |acc, b| acc + b.degree());
        Tridegree::new(self.bars.len() as u32, d.m, d.n)
    }

    pub fn name(&self) -> String {
        let bars: Vec<_> = self.bars.iter().map(|b| b.name()).collect();
        match (self.coeff == HStarMonomial::ONE, bars.is_empty()) {
            (_, true) => self.coeff.name(),
            (true, false) => format!("[{}]", bars.join("|")),
            (false, false) => format!("{} [{}]", self.coeff.name(), bars.join("|")),
        }
    }

    /// Name in `v`-notation when every bar is a single `τ_i` (so the word
    /// represents `coeff · ∏ v_i`), otherwise the bar notation.
    pub fn v_name(&self) -> String {
        if self.bars.is_empty() || self.bars.iter().any(|b| b.len() != 1) {
            return self.name();
        }
        let mut exps = BTreeMap::<u32, u32>::new();
        for b in &self.bars {
            *exps.entry(b.indices().next().unwrap()).or_default() += 1;
        }
        let mut parts = Vec::new();
        if self.coeff != HStarMonomial::ONE {
            parts.push(self.coeff.name());
        }
        for (i, e) in exps {
            parts.push(if e == 1 {
                format!("v{i}")
            } else {
                format!("v{i}^{e}")
            });
        }
        parts.join(" ")
    }
}

impl fmt::Display for CobarWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Every sequence of `len` bars with total degree `(m, n)`-compatible: the
/// bars' `m`-degrees (their masks) sum to at most `m_budget`.
fn bar_sequences(pres: &EnPresentation, len: u32, m_budget: i32) -> Vec<Vec<TauSet>> {
    fn go(
        bars: &[TauSet],
        len: u32,
        budget: i32,
        prefix: &mut Vec<TauSet>,
        out: &mut Vec<Vec<TauSet>>,
    ) {
        if len == 0 {
            out.push(prefix.clone());
            return;
        }
        for &b in bars {
            // Each remaining bar costs at least 1.
            let rest = budget - b.0 as i32;
            if rest < len as i32 - 1 {
                break;
            }
            prefix.push(b);
            go(bars, len - 1, rest, prefix, out);
            prefix.pop();
        }
    }
    let bars: Vec<TauSet> = pres.augmentation_basis().collect();
    let mut out = Vec::new();
    go(&bars, len, m_budget, &mut Vec::new(), &mut out);
    out
}

/// Ordered basis of `C^s` in motivic degree `(t.m, t.n)`.
pub fn cobar_basis(rd: &ResidueData, n: u32, t: Tridegree) -> Vec<CobarWord> {
    let pres = en_presentation(rd, n);
    basis_for(&pres, t, false)
}

fn basis_for(pres: &EnPresentation, t: Tridegree, reverse: bool) -> Vec<CobarWord> {
    let mut out = Vec::new();
    if t.m < 0 {
        return out;
    }
    for bars in bar_sequences(pres, t.s, t.m) {
        let bar_deg = bars.iter().fold(Bidegree::ZERO, |acc, b| acc + b.degree());
        for coeff in h_star_basis(&pres.rd, t.motivic() - bar_deg) {
            out.push(CobarWord::new(coeff, bars.clone()));
        }
    }
    out.sort();
    if reverse {
        out.reverse();
    }
    out
}

/// The cobar differential of one basis word, as a sorted GF(2) combination.
pub fn cobar_differential(rd: &ResidueData, n: u32, w: &CobarWord) -> Vec<CobarWord> {
    differential(&en_presentation(rd, n), w)
}

fn differential(pres: &EnPresentation, w: &CobarWord) -> Vec<CobarWord> {
    let mut terms: Vec<CobarWord> = Vec::new();
    for m in pres.eta_diff(&w.coeff).terms() {
        debug_assert!(!m.taus.is_empty());
        let mut bars = Vec::with_capacity(w.bars.len() + 1);
        bars.push(m.taus);
        bars.extend_from_slice(&w.bars);
        terms.push(CobarWord::new(m.coeff, bars));
    }
    for (i, bar) in w.bars.iter().enumerate() {
        let mono = EnMonomial::new(HStarMonomial::ONE, *bar);
        for t in pres.reduced_comultiply(&mono) {
            let mut bars = Vec::with_capacity(w.bars.len() + 1);
            bars.extend_from_slice(&w.bars[..i]);
            bars.push(t.left.taus);
            bars.push(t.right);
            bars.extend_from_slice(&w.bars[i + 1..]);
            terms.push(CobarWord::new(w.coeff, bars));
        }
    }
    terms.sort();
    // Cancel pairs.
    let mut out: Vec<CobarWord> = Vec::with_capacity(terms.len());
    for t in terms {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    out
}

/// One `(m, n)` column of the cobar complex up to a homological bound.
#[derive(Debug, Clone)]
pub struct CobarColumn {
    pub degree: Bidegree,
    /// `bases[s]` is the ordered basis of `C^s`.
    pub bases: Vec<Vec<CobarWord>>,
    /// `blocks[s]` is `d: C^s -> C^{s+1}`.
    pub blocks: Vec<Gf2Block>,
}

impl CobarColumn {
    pub fn build(
        pres: &EnPresentation,
        degree: Bidegree,
        s_top: u32,
        config: &CobarConfig,
    ) -> Result<Self> {
        let bases: Vec<Vec<CobarWord>> = (0..=s_top + 1)
            .map(|s| {
                basis_for(
                    pres,
                    Tridegree::new(s, degree.m, degree.n),
                    config.reverse_basis,
                )
            })
            .collect();
        let mut blocks = Vec::with_capacity(s_top as usize + 1);
        for s in 0..=s_top as usize {
            let (src, tgt) = (&bases[s], &bases[s + 1]);
            let needed = Gf2Block::dense_bytes(src.len(), tgt.len());
            if needed > config.mem_budget {
                return Err(Error::BudgetExceeded {
                    tridegree: Tridegree::new(s as u32, degree.m, degree.n),
                    needed,
                    budget: config.mem_budget,
                });
            }
            let index: HashMap<&CobarWord, u32> =
                tgt.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
            let rows = src
                .iter()
                .map(|w| {
                    let idx = differential(pres, w)
                        .iter()
                        .map(|t| {
                            *index
                                .get(t)
                                .expect("differential left the degree of its source")
                        })
                        .collect();
                    gf2::from_indices(idx)
                })
                .collect();
            blocks.push(Gf2Block::new(tgt.len(), rows));
        }
        Ok(CobarColumn {
            degree,
            bases,
            blocks,
        })
    }

    /// Cohomology in homological degree `s` (needs `s + 1 <= s_top + 1`).
    pub fn cohomology(&self, s: usize) -> ExtEntry {
        let out_block = &self.blocks[s];
        let cycles = out_block.kernel();
        let boundaries = if s == 0 {
            Subspace::new(self.bases[0].len())
        } else {
            self.blocks[s - 1].image()
        };
        let reps = boundaries.complement_in(&cycles);
        let names = reps
            .iter()
            .map(|v| self.bases[s][v[0] as usize].v_name())
            .collect();
        ExtEntry {
            dim: reps.len(),
            names,
        }
    }
}

/// Dimension of one Ext group together with names of representative cocycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtEntry {
    pub dim: usize,
    pub names: Vec<String>,
}

/// `Ext` over `E(n)` on a window, keyed by tridegree. Every tridegree of the
/// window is present, including those with dimension 0.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExtTable {
    pub entries: BTreeMap<Tridegree, ExtEntry>,
}

impl ExtTable {
    pub fn dim(&self, t: Tridegree) -> usize {
        self.entries.get(&t).map_or(0, |e| e.dim)
    }

    pub fn dimensions(&self) -> BTreeMap<Tridegree, usize> {
        self.entries.iter().map(|(t, e)| (*t, e.dim)).collect()
    }
}

/// Computes `Ext_{E(n)}(H_*, H_*)` in every tridegree of the window. Each
/// column is built one step past `s_max` so the top row is not clipped.
pub fn ext_dimensions(
    rd: &ResidueData,
    n: u32,
    window: &Window,
    config: &CobarConfig,
) -> Result<ExtTable> {
    let pres = en_presentation(rd, n);
    let columns: Vec<Bidegree> = window.columns().collect();
    let results: Vec<Result<Vec<(Tridegree, ExtEntry)>>> = columns
        .par_iter()
        .map(|&d| {
            let col = CobarColumn::build(&pres, d, window.s_max, config)?;
            Ok((0..=window.s_max)
                .map(|s| (Tridegree::new(s, d.m, d.n), col.cohomology(s as usize)))
                .collect())
        })
        .collect();
    let mut table = ExtTable::default();
    for r in results {
        table.entries.extend(r?);
    }
    Ok(table)
}

/// Checks `d ∘ d = 0` on every basis word of every column of the window;
/// returns the offending words.
pub fn check_d_squared(rd: &ResidueData, n: u32, window: &Window) -> Vec<CobarWord> {
    let pres = en_presentation(rd, n);
    let columns: Vec<Bidegree> = window.columns().collect();
    columns
        .par_iter()
        .flat_map_iter(|&d| {
            let pres = &pres;
            (0..=window.s_max).flat_map(move |s| {
                basis_for(pres, Tridegree::new(s, d.m, d.n), false)
                    .into_iter()
                    .filter(move |w| {
                        let mut acc: Vec<CobarWord> = Vec::new();
                        for t in differential(pres, w) {
                            acc.extend(differential(pres, &t));
                        }
                        acc.sort();
                        !cancels(&acc)
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect()
}

fn cancels(sorted: &[CobarWord]) -> bool {
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            return false;
        }
        i = j;
    }
    true
}

/// Basis dimensions of `C^s` over a window, without any elimination.
pub fn complex_size(rd: &ResidueData, n: u32, window: &Window) -> BTreeMap<Tridegree, usize> {
    let pres = en_presentation(rd, n);
    window
        .tridegrees()
        .map(|t| (t, basis_for(&pres, t, false).len()))
        .collect()
}

#[doc(hidden)]
pub fn representative_support(col: &CobarColumn, s: usize) -> Vec<SparseVec> {
    let cycles = col.blocks[s].kernel();
    let boundaries = if s == 0 {
        Subspace::new(col.bases[0].len())
    } else {
        col.blocks[s - 1].image()
    };
    boundaries.complement_in(&cycles)
}
