//! The motivic Adams spectral sequence for `BPGL`, `kgl` and `BPGL⟨0⟩`.
//!
//! `E_2` is the closed-form Ext over `E(n)` for `n = ∞, 1, 0`. Every
//! differential is a multiple of a τ-power differential
//!
//! ```text
//! d_{k+ν(s)} τ^s = u τ^{s-1} v_0^{k+ν(s)}
//! ```
//!
//! seeded by `d_k τ = u v_0^k` (`q ≡ 1`) or `d_2 τ² = ρτ v_0²` (`q ≡ 3`, where
//! `ρ = u` and `k = 1`) and propagated by the higher Leibniz rule
//! `d_{r+1}(x²) = x · d_r(x) · v_0` and the ordinary Leibniz rule.
//!
//! Pages are stored as a pair of subspaces `B_r ⊆ Z_r` of the `E_2` basis
//! in each tridegree, so `E_r = Z_r / B_r`.
//!
//! Charts use Adams coordinates: for these computations the `m` range of a
//! [`Window`] bounds the stem `m - s`, not the motivic `m`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arithmetic::{nu2, MilnorBasis, ResidueData};
use crate::closed_ext::{ambiguity_flag, closed_form_basis, ExtMonomial};
use crate::error::{Error, Result};
use crate::gf2::{self, Gf2Block, SparseVec, Subspace};
use crate::grading::{Bidegree, Tridegree, Window};
use crate::hopf::truncation_level_for_degree;

/// Ring spectra whose Adams spectral sequence is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Spectrum {
    /// Algebraic Brown-Peterson spectrum, `E_2` over `E(∞)`.
    Bpgl,
    /// Connective algebraic K-theory, `E_2` over `E(1)`.
    Kgl,
    /// `BPGL⟨0⟩`, the 2-complete integral motivic cohomology, `E_2` over `E(0)`.
    Bpgl0,
}

impl Spectrum {
    pub const ALL: [Spectrum; 3] = [Spectrum::Bpgl, Spectrum::Kgl, Spectrum::Bpgl0];

    pub fn name(self) -> &'static str {
        match self {
            Spectrum::Bpgl => "BPGL",
            Spectrum::Kgl => "kgl",
            Spectrum::Bpgl0 => "BPGL0",
        }
    }

    /// The `E(n)` level whose Ext is `E_2`, for classes with motivic
    /// `m <= m_top`.
    pub fn ext_level(self, m_top: i32) -> u32 {
        match self {
            Spectrum::Bpgl => truncation_level_for_degree(m_top.max(0) as u32),
            Spectrum::Kgl => 1,
            Spectrum::Bpgl0 => 0,
        }
    }

    /// Indices `i >= 1` of the polynomial generators `v_i` surviving to
    /// `E_∞`, up to `level`.
    pub fn v_generators(self, level: u32) -> Vec<u32> {
        match self {
            Spectrum::Bpgl => (1..=level).collect(),
            Spectrum::Kgl => vec![1],
            Spectrum::Bpgl0 => Vec::new(),
        }
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Spectrum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpgl" => Ok(Spectrum::Bpgl),
            "kgl" => Ok(Spectrum::Kgl),
            "bpgl0" | "hz2" => Ok(Spectrum::Bpgl0),
            _ => Err(Error::InvalidInput(format!("unknown spectrum {s:?}"))),
        }
    }
}

/// A differential `d_r(source) = target` between `E_2` monomials.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Differential {
    pub r: u32,
    pub source: ExtMonomial,
    pub target: ExtMonomial,
}

impl Differential {
    /// Whether the tridegrees fit `d_r: (s, m + nα) -> (s + r, m + nα + r - 1)`.
    pub fn has_valid_shape(&self) -> bool {
        self.target.tridegree() == self.source.tridegree().shift_dr(self.r)
    }
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}({}) = {}", self.r, self.source, self.target)
    }
}

fn tau_pow(t: u32) -> ExtMonomial {
    ExtMonomial::new(MilnorBasis::One, t, Vec::new())
}

fn v0_pow(e: u32) -> ExtMonomial {
    ExtMonomial::new(MilnorBasis::One, 0, vec![e])
}

/// The differentials everything else is propagated from. `BPGL`, `kgl` and
/// `BPGL⟨0⟩` share them.
pub fn seed_differentials(rd: &ResidueData, _spectrum: Spectrum) -> Vec<Differential> {
    let u = ExtMonomial::new(MilnorBasis::U, 0, Vec::new());
    if rd.is_split() {
        vec![Differential {
            r: rd.k,
            source: tau_pow(1),
            target: u.formal_product(rd, &v0_pow(rd.k)).unwrap(),
        }]
    } else {
        vec![Differential {
            r: 2,
            source: tau_pow(2),
            target: ExtMonomial::new(MilnorBasis::U, 1, vec![2]),
        }]
    }
}

/// Applies `d_{r+1}(x²) = x · d_r(x) · v_0` to a differential.
pub fn higher_leibniz_square(rd: &ResidueData, d: &Differential) -> Option<Differential> {
    let source = d.source.formal_product(rd, &d.source)?;
    let target = d
        .source
        .formal_product(rd, &d.target)?
        .formal_product(rd, &v0_pow(1))?;
    Some(Differential {
        r: d.r + 1,
        source,
        target,
    })
}

/// `d(τ^s)` as a formal expression: `d_{k+ν(s)} τ^s = u τ^{s-1} v_0^{k+ν(s)}`
/// for `q ≡ 1`. For `q ≡ 3` only `τ²` and its powers carry differentials,
/// so an odd `s` uses the Leibniz rule `d(τ^s) = τ · d(τ^{s-1})`; `s = 1`
/// has none. The target is not reduced by `ρ v_0 = 0`.
pub fn tau_power_differential(rd: &ResidueData, s: u32) -> Option<Differential> {
    assert!(s >= 1, "τ-power differentials start at s = 1");
    let p = if rd.is_split() { s } else { s & !1 };
    if p == 0 {
        return None;
    }
    let r = rd.k + nu2(p as u64);
    Some(Differential {
        r,
        source: tau_pow(s),
        target: ExtMonomial::new(MilnorBasis::U, s - 1, vec![r]),
    })
}

/// The differential supported by an `E_2` monomial, if any: the τ-power
/// differential on its τ-part (its even τ-part when `q ≡ 3`) times the rest.
/// `None` means the monomial is a permanent cycle.
pub fn differential_of(rd: &ResidueData, x: &ExtMonomial) -> Option<Differential> {
    let p = if rd.is_split() { x.tau } else { x.tau & !1 };
    if p == 0 {
        return None;
    }
    let seed = tau_power_differential(rd, p)?;
    let rest = x.divide(&tau_pow(p))?;
    let target = rest.product(rd, &seed.target)?;
    Some(Differential {
        r: seed.r,
        source: x.clone(),
        target,
    })
}

/// A differential found while turning a page, between named representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordedDifferential {
    pub r: u32,
    pub source: Tridegree,
    pub target: Tridegree,
    pub source_name: String,
    pub target_name: String,
}

impl RecordedDifferential {
    /// `Δs = r` and the Adams stem drops by one.
    pub fn has_valid_shape(&self) -> bool {
        self.target == self.source.shift_dr(self.r)
            && self.target.adams().m == self.source.adams().m - 1
            && self.target.n == self.source.n
    }
}

/// The box of tridegrees a page is computed on, in Adams coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub s_max: u32,
    pub stem_min: i32,
    pub stem_max: i32,
    pub n_min: i32,
    pub n_max: i32,
}

impl Region {
    pub fn from_window(window: &Window) -> Self {
        Region {
            s_max: window.s_max,
            stem_min: window.m_min,
            stem_max: window.m_max,
            n_min: window.n_min,
            n_max: window.n_max,
        }
    }

    pub fn contains(&self, t: Tridegree) -> bool {
        let stem = t.m - t.s as i32;
        t.s <= self.s_max
            && (self.stem_min..=self.stem_max).contains(&stem)
            && (self.n_min..=self.n_max).contains(&t.n)
    }

    /// Adams bidegrees `stem + nα`, in lexicographic order.
    pub fn adams_bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (self.stem_min..=self.stem_max)
            .flat_map(move |a| (self.n_min..=self.n_max).map(move |n| Bidegree::new(a, n)))
    }

    /// Motivic tridegrees, ordered by Adams bidegree then `s`.
    pub fn tridegrees(&self) -> impl Iterator<Item = Tridegree> + '_ {
        self.adams_bidegrees().flat_map(move |d| {
            (0..=self.s_max).map(move |s| Tridegree::new(s, d.m + s as i32, d.n))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Cell {
    basis: Vec<ExtMonomial>,
    z: Subspace,
    b: Subspace,
}

/// One page `E_r` of the spectral sequence over a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SSPage {
    pub rd: ResidueData,
    pub spectrum: Spectrum,
    pub r: u32,
    /// The `E(n)` level providing `E_2`.
    pub level: u32,
    pub region: Region,
    cells: BTreeMap<Tridegree, Cell>,
    /// Every differential `d_2, …, d_{r-1}` found so far.
    pub differentials: Vec<RecordedDifferential>,
    /// Places where a differential was not well defined on the page or
    /// failed `d_r ∘ d_r = 0`. Always empty for a consistent run.
    pub anomalies: Vec<String>,
}

impl SSPage {
    /// The `E_2`-page on a region.
    pub fn e2(rd: &ResidueData, spectrum: Spectrum, region: Region) -> Self {
        let m_top = region.stem_max + region.s_max as i32;
        let level = spectrum.ext_level(m_top);
        let tridegrees: Vec<Tridegree> = region.tridegrees().collect();
        let cells = tridegrees
            .par_iter()
            .filter_map(|&t| {
                let basis: Vec<ExtMonomial> = closed_form_basis(rd, level, t)
                    .into_iter()
                    .map(|e| e.monomial)
                    .collect();
                (!basis.is_empty()).then(|| {
                    let len = basis.len();
                    (
                        t,
                        Cell {
                            basis,
                            z: Subspace::full(len),
                            b: Subspace::new(len),
                        },
                    )
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        SSPage {
            rd: *rd,
            spectrum,
            r: 2,
            level,
            region,
            cells,
            differentials: Vec::new(),
            anomalies: Vec::new(),
        }
    }

    /// Tridegrees with a nonzero `E_2` term.
    pub fn support(&self) -> impl Iterator<Item = Tridegree> + '_ {
        self.cells.keys().copied()
    }

    pub fn e2_basis(&self, t: Tridegree) -> &[ExtMonomial] {
        self.cells.get(&t).map_or(&[], |c| &c.basis)
    }

    /// Representatives of `E_r` in tridegree `t`, each named by its lowest
    /// monomial in the canonical order.
    pub fn classes(&self, t: Tridegree) -> Vec<ExtMonomial> {
        let Some(c) = self.cells.get(&t) else {
            return Vec::new();
        };
        c.b.complement_in(c.z.basis())
            .iter()
            .map(|v| c.basis[v[0] as usize].clone())
            .collect()
    }

    pub fn dim(&self, t: Tridegree) -> usize {
        self.cells.get(&t).map_or(0, |c| c.z.dim() - c.b.dim())
    }

    fn index_of(&self, x: &ExtMonomial) -> Option<(Tridegree, u32)> {
        let t = x.tridegree();
        let c = self.cells.get(&t)?;
        c.basis.binary_search(x).ok().map(|i| (t, i as u32))
    }

    /// Whether `x` is a cycle for `d_2, …, d_{r-1}`.
    pub fn is_cycle(&self, x: &ExtMonomial) -> bool {
        self.index_of(x)
            .is_some_and(|(t, i)| self.cells[&t].z.contains(&[i]))
    }

    /// Whether `x` represents a nonzero class of `E_r`.
    pub fn is_nonzero_class(&self, x: &ExtMonomial) -> bool {
        self.index_of(x).is_some_and(|(t, i)| {
            let c = &self.cells[&t];
            c.z.contains(&[i]) && !c.b.contains(&[i])
        })
    }

    /// `d_r` of a monomial as a monomial (or zero).
    pub fn dr_monomial(&self, x: &ExtMonomial) -> Option<ExtMonomial> {
        differential_of(&self.rd, x)
            .filter(|d| d.r == self.r)
            .map(|d| d.target)
    }

    /// `d_r` of a vector in tridegree `t`, in the basis of `t.shift_dr(r)`.
    /// `None` when the target lies outside the region.
    fn apply_dr(&self, t: Tridegree, v: &[u32]) -> Option<SparseVec> {
        let target = t.shift_dr(self.r);
        if !self.region.contains(target) {
            return None;
        }
        let basis = &self.cells[&t].basis;
        let tbasis = self.e2_basis(target);
        let idx = v
            .iter()
            .filter_map(|&i| self.dr_monomial(&basis[i as usize]))
            .map(|y| {
                tbasis
                    .binary_search(&y)
                    .expect("differential target missing from E_2") as u32
            })
            .collect();
        Some(gf2::from_indices(idx))
    }

    /// `E_{r+1}`: the homology of `d_r`.
    pub fn turn_page(&self) -> SSPage {
        let r = self.r;
        let cells: Vec<(&Tridegree, &Cell)> = self.cells.iter().collect();
        let results: Vec<_> = cells
            .par_iter()
            .map(|&(&t, cell)| {
                let reps = cell.b.complement_in(cell.z.basis());
                let target = t.shift_dr(r);
                let mut anomalies = Vec::new();
                let mut recorded = Vec::new();
                let mut images = Vec::new();
                let mut z = cell.b.clone();
                let tcell = self.cells.get(&target);
                match tcell.filter(|_| self.region.contains(target)) {
                    None => {
                        for rep in &reps {
                            z.insert(rep.clone());
                        }
                    }
                    Some(tc) => {
                        let rows: Vec<SparseVec> = reps
                            .iter()
                            .map(|rep| {
                                let img = self.apply_dr(t, rep).unwrap_or_default();
                                if !tc.z.contains(&img) {
                                    anomalies.push(format!(
                                        "d{r} of {} leaves the cycles of {target}",
                                        cell.basis[rep[0] as usize]
                                    ));
                                }
                                tc.b.reduce(&img)
                            })
                            .collect();
                        for (rep, row) in reps.iter().zip(&rows) {
                            if let Some(&lead) = row.first() {
                                recorded.push(RecordedDifferential {
                                    r,
                                    source: t,
                                    target,
                                    source_name: cell.basis[rep[0] as usize].name(),
                                    target_name: tc.basis[lead as usize].name(),
                                });
                            }
                        }
                        let block = Gf2Block::new(tc.basis.len(), rows);
                        for combo in block.kernel() {
                            let v = combo
                                .iter()
                                .fold(Vec::new(), |acc, &i| gf2::xor(&acc, &reps[i as usize]));
                            z.insert(v);
                        }
                        images = block.image().basis().to_vec();
                    }
                }
                (t, z, target, images, recorded, anomalies)
            })
            .collect();

        let mut new_cells = self.cells.clone();
        let mut differentials = self.differentials.clone();
        let mut anomalies = self.anomalies.clone();
        for (t, z, _, _, recorded, anom) in &results {
            new_cells.get_mut(t).unwrap().z = z.clone();
            differentials.extend(recorded.iter().cloned());
            anomalies.extend(anom.iter().cloned());
        }
        for (_, _, target, images, _, _) in results {
            if images.is_empty() {
                continue;
            }
            let cell = new_cells.get_mut(&target).unwrap();
            for img in images {
                if !cell.z.contains(&img) {
                    anomalies.push(format!("d{r} ∘ d{r} is nonzero into {target}"));
                }
                cell.b.insert(img);
            }
        }
        SSPage {
            rd: self.rd,
            spectrum: self.spectrum,
            r: r + 1,
            level: self.level,
            region: self.region,
            cells: new_cells,
            differentials,
            anomalies,
        }
    }
}

/// Lower bound on the page bound for a window: every τ-power in the chart
/// region supports a differential of length at most `k + ⌊log₂ T⌋`.
pub fn required_page_bound(rd: &ResidueData, window: &Window) -> u32 {
    let t = (window.m_max + 1).max(1) as u32;
    (rd.k + t.ilog2() + 1).max(2)
}

/// Default page bound `k + ⌈log₂ T⌉ + 2`, with `T` the largest τ-power in
/// the chart region.
pub fn default_page_bound(rd: &ResidueData, window: &Window) -> u32 {
    let t = (window.m_max + 1).max(1) as u32;
    rd.k + t.next_power_of_two().ilog2() + 2
}

/// The region a window's pages are computed on: one stem on either side,
/// and enough homological degrees above to follow `v_0`-towers for
/// `r_max + 1` steps and catch every differential out of them.
pub fn computation_region(window: &Window, r_max: u32) -> Region {
    Region {
        s_max: window.s_max + 2 * r_max + 1,
        stem_min: window.m_min - 1,
        stem_max: window.m_max + 1,
        n_min: window.n_min,
        n_max: window.n_max,
    }
}

/// Pages `E_2, …, E_{r_max + 1}`; the last one is `E_∞` on the window.
pub fn adams_pages(
    rd: &ResidueData,
    spectrum: Spectrum,
    window: &Window,
    r_max: Option<u32>,
) -> Result<Vec<SSPage>> {
    let required = required_page_bound(rd, window);
    let r_max = r_max.unwrap_or_else(|| default_page_bound(rd, window));
    if r_max < required {
        return Err(Error::PageBound {
            required,
            given: r_max,
        });
    }
    let mut pages = vec![SSPage::e2(rd, spectrum, computation_region(window, r_max))];
    while pages.last().unwrap().r <= r_max {
        let next = pages.last().unwrap().turn_page();
        pages.push(next);
    }
    Ok(pages)
}

/// Height of a `v_0`-tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Height {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite => f.write_str("inf"),
        }
    }
}

/// A maximal string `x, x v_0, x v_0², …` of nonzero `E_∞` classes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tower {
    pub base_s: u32,
    pub base: ExtMonomial,
    pub height: Height,
}

/// `v_0`-towers per Adams bidegree. Every Adams bidegree of the window has
/// an entry, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TowerDecomposition {
    pub towers: BTreeMap<Bidegree, Vec<Tower>>,
}

/// `E_∞` on a window together with its tower decomposition and the
/// comparisons against the expected answer.
#[derive(Debug, Clone)]
pub struct EInfinity {
    pub r_max: u32,
    pub window: Window,
    pub page: SSPage,
    pub towers: TowerDecomposition,
    /// Adams bidegrees where the towers differ from `Γ'` tensored with the
    /// surviving polynomial generators.
    pub gamma_prime_mismatches: Vec<String>,
    /// Pairs of ambiguity partners that both survive as distinct classes.
    pub surviving_ambiguities: Vec<(ExtMonomial, ExtMonomial)>,
}

/// Runs the spectral sequence to `E_∞` on a window (stems in `m`).
pub fn e_infinity(
    rd: &ResidueData,
    spectrum: Spectrum,
    window: &Window,
    r_max: Option<u32>,
) -> Result<EInfinity> {
    let pages = adams_pages(rd, spectrum, window, r_max)?;
    let r_max = pages.last().unwrap().r - 1;
    let page = pages.into_iter().last().unwrap();
    Ok(finish(page, window, r_max))
}

fn finish(page: SSPage, window: &Window, r_max: u32) -> EInfinity {
    let towers = decompose_towers(&page, window, r_max);
    let expected = gamma_prime_towers(&page.rd, page.spectrum, window, page.level);
    let mut gamma_prime_mismatches = Vec::new();
    for (d, got) in &towers.towers {
        let want = expected.towers.get(d).cloned().unwrap_or_default();
        if *got != want {
            gamma_prime_mismatches.push(format!(
                "at {d}: computed [{}], expected [{}]",
                describe(got),
                describe(&want)
            ));
        }
    }
    let surviving_ambiguities = surviving_ambiguities(&page, window);
    EInfinity {
        r_max,
        window: *window,
        page,
        towers,
        gamma_prime_mismatches,
        surviving_ambiguities,
    }
}

fn describe(towers: &[Tower]) -> String {
    towers
        .iter()
        .map(|t| format!("{} (s={}, h={})", t.base, t.base_s, t.height))
        .collect::<Vec<_>>()
        .join(", ")
}

fn decompose_towers(page: &SSPage, window: &Window, r_max: u32) -> TowerDecomposition {
    let chart = Region::from_window(window);
    let v0 = v0_pow(1);
    let mut out = TowerDecomposition::default();
    for d in chart.adams_bidegrees() {
        let mut towers = Vec::new();
        for s in 0..=window.s_max {
            let t = Tridegree::new(s, d.m + s as i32, d.n);
            for x in page.classes(t) {
                let below =
                    x.v_exp(0) >= 1 && page.is_nonzero_class(&x.with_v_exp(0, x.v_exp(0) - 1));
                if below {
                    continue;
                }
                let mut h = 1;
                let mut cur = x.clone();
                let height = loop {
                    if h > r_max {
                        break Height::Infinite;
                    }
                    match cur.product(&page.rd, &v0) {
                        Some(next) if page.is_nonzero_class(&next) => {
                            cur = next;
                            h += 1;
                        }
                        _ => break Height::Finite(h),
                    }
                };
                towers.push(Tower {
                    base_s: s,
                    base: x,
                    height,
                });
            }
        }
        towers.sort();
        out.towers.insert(d, towers);
    }
    out
}

/// One `v_0`-tower generator of `Γ'`: its base class and height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaPrimeEntry {
    pub degree: Bidegree,
    pub base: ExtMonomial,
    pub height: Height,
}

/// Generators of `Γ'` in stems `0..=stem_max`: `1` and `π` with infinite
/// towers, `u` and `πu` of height `k`, and `γ_i = u τ^{i-1}`, `π γ_i` of
/// height `k + ν(i)` for `i >= 2`.
pub fn gamma_prime(rd: &ResidueData, stem_max: i32) -> Vec<GammaPrimeEntry> {
    let entry = |k: MilnorBasis, tau: u32, height| {
        let base = ExtMonomial::new(k, tau, Vec::new());
        GammaPrimeEntry {
            degree: base.tridegree().adams(),
            base,
            height,
        }
    };
    let mut out = vec![
        entry(MilnorBasis::One, 0, Height::Infinite),
        entry(MilnorBasis::Pi, 0, Height::Infinite),
        entry(MilnorBasis::U, 0, Height::Finite(rd.k)),
        entry(MilnorBasis::PiU, 0, Height::Finite(rd.k)),
    ];
    for i in 2..=(stem_max + 1).max(1) as u32 {
        let h = Height::Finite(rd.k + nu2(i as u64));
        out.push(entry(MilnorBasis::U, i - 1, h));
        out.push(entry(MilnorBasis::PiU, i - 1, h));
    }
    out
}

/// Monomials in `v_i`, `i ∈ gens`, with Adams stem at most `stem_max` and
/// at most `s_max` factors.
fn v_monomials(gens: &[u32], stem_max: i32, s_max: u32) -> Vec<Vec<u32>> {
    fn go(gens: &[u32], stem: i32, s: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&i, rest)) = gens.split_first() else {
            out.push(cur.clone());
            return;
        };
        let w = (1i32 << i) - 1;
        let mut e = 0;
        while e * w <= stem && e <= s as i32 {
            if cur.len() <= i as usize {
                cur.resize(i as usize + 1, 0);
            }
            cur[i as usize] = e as u32;
            go(rest, stem - e * w, s - e as u32, cur, out);
            e += 1;
        }
        cur[i as usize] = 0;
    }
    let mut out = Vec::new();
    if stem_max >= 0 {
        go(gens, stem_max, s_max, &mut Vec::new(), &mut out);
    }
    out
}

/// The towers `E_∞` should have on a window: `Γ'` times the surviving
/// polynomial generators of the spectrum.
pub fn gamma_prime_towers(
    rd: &ResidueData,
    spectrum: Spectrum,
    window: &Window,
    level: u32,
) -> TowerDecomposition {
    let chart = Region::from_window(window);
    let gens = spectrum.v_generators(level);
    let mut out = TowerDecomposition::default();
    for d in chart.adams_bidegrees() {
        out.towers.insert(d, Vec::new());
    }
    let stem_span = window.m_max.max(0);
    for g in gamma_prime(rd, window.m_max) {
        for v in v_monomials(&gens, stem_span, window.s_max) {
            let m = ExtMonomial::new(MilnorBasis::One, 0, v);
            let base = g.base.formal_product(rd, &m).unwrap();
            let t = base.tridegree();
            if let Some(list) = out.towers.get_mut(&t.adams()) {
                if t.s <= window.s_max {
                    list.push(Tower {
                        base_s: t.s,
                        base,
                        height: g.height,
                    });
                }
            }
        }
    }
    for list in out.towers.values_mut() {
        list.sort();
    }
    out
}

fn surviving_ambiguities(page: &SSPage, window: &Window) -> Vec<(ExtMonomial, ExtMonomial)> {
    let chart = Region::from_window(window);
    let mut out = Vec::new();
    for t in chart.tridegrees() {
        for x in page.e2_basis(t) {
            if let Some(flag) = ambiguity_flag(&page.rd, x) {
                if *x < flag.partner
                    && page.is_nonzero_class(x)
                    && page.is_nonzero_class(&flag.partner)
                {
                    out.push((x.clone(), flag.partner));
                }
            }
        }
    }
    out
}

/// Checks `d_r(xy) = d_r(x) y + x d_r(y)` modulo boundaries for every pair
/// of `E_r` classes of the window whose product and its `d_r`-target lie in
/// the page's region. Returns the failures.
pub fn check_leibniz(page: &SSPage, window: &Window) -> Vec<String> {
    let chart = Region::from_window(window);
    let classes: Vec<ExtMonomial> = chart.tridegrees().flat_map(|t| page.classes(t)).collect();
    let rd = &page.rd;
    let vec_of = |x: Option<ExtMonomial>, t: Tridegree| -> SparseVec {
        x.and_then(|x| {
            page.e2_basis(t)
                .binary_search(&x)
                .ok()
                .map(|i| vec![i as u32])
        })
        .unwrap_or_default()
    };
    (0..classes.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = &classes[i];
            let tx = x.tridegree();
            classes[i..].iter().filter_map(move |y| {
                let ty = y.tridegree();
                let txy = Tridegree::new(tx.s + ty.s, tx.m + ty.m, tx.n + ty.n);
                let target = txy.shift_dr(page.r);
                if !page.region.contains(txy) || !page.region.contains(target) {
                    return None;
                }
                let xy = x.product(rd, y);
                if let Some(p) = &xy {
                    if !page.is_cycle(p) {
                        return Some(format!("E{}: {x} * {y} = {p} is not a cycle", page.r));
                    }
                }
                let lhs = vec_of(xy.as_ref().and_then(|p| page.dr_monomial(p)), target);
                let dx_y = page.dr_monomial(x).and_then(|dx| dx.product(rd, y));
                let x_dy = page.dr_monomial(y).and_then(|dy| x.product(rd, &dy));
                let rhs = gf2::xor(&vec_of(dx_y, target), &vec_of(x_dy, target));
                let diff = gf2::xor(&lhs, &rhs);
                let residue = match page.cells.get(&target) {
                    Some(c) => c.b.reduce(&diff),
                    None => diff,
                };
                (!residue.is_empty()).then(|| format!("E{}: Leibniz fails for {x} * {y}", page.r))
            })
        })
        .collect()
}

/// Every recorded differential whose tridegrees do not have the `d_r` shape.
pub fn check_differential_shapes(page: &SSPage) -> Vec<RecordedDifferential> {
    page.differentials
        .iter()
        .filter(|d| !d.has_valid_shape())
        .cloned()
        .collect()
}

/// A finitely generated 2-complete abelian group `ℤ₂^free ⊕ ⊕ ℤ/2^e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CoefficientGroup {
    pub free_rank: u32,
    /// Exponents `e` of the `ℤ/2^e` summands, in descending order.
    #[serde(rename = "torsion")]
    pub torsion_exponents: Vec<u32>,
}

impl CoefficientGroup {
    pub fn trivial() -> Self {
        CoefficientGroup::default()
    }

    pub fn free(rank: u32) -> Self {
        CoefficientGroup {
            free_rank: rank,
            torsion_exponents: Vec::new(),
        }
    }

    pub fn cyclic(exponent: u32) -> Self {
        CoefficientGroup {
            free_rank: 0,
            torsion_exponents: vec![exponent],
        }
    }

    pub fn from_heights(heights: impl IntoIterator<Item = Height>) -> Self {
        let mut g = CoefficientGroup::trivial();
        for h in heights {
            g.add_summand(h);
        }
        g
    }

    pub fn add_summand(&mut self, h: Height) {
        match h {
            Height::Infinite => self.free_rank += 1,
            Height::Finite(e) => {
                let pos = self.torsion_exponents.partition_point(|&x| x >= e);
                self.torsion_exponents.insert(pos, e);
            }
        }
    }

    pub fn direct_sum(&self, other: &CoefficientGroup) -> CoefficientGroup {
        let mut out = self.clone();
        out.free_rank += other.free_rank;
        for &e in &other.torsion_exponents {
            out.add_summand(Height::Finite(e));
        }
        out
    }

    /// `n` copies of the group.
    pub fn times(&self, n: u64) -> CoefficientGroup {
        (0..n).fold(CoefficientGroup::trivial(), |acc, _| acc.direct_sum(self))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_exponents.is_empty()
    }

    /// Number of elements of the torsion subgroup, as a power of two.
    pub fn torsion_log_order(&self) -> u32 {
        self.torsion_exponents.iter().sum()
    }
}

impl fmt::Display for CoefficientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let parts: Vec<String> = std::iter::repeat_n("ℤ₂".to_string(), self.free_rank as usize)
            .chain(
                self.torsion_exponents
                    .iter()
                    .map(|e| format!("ℤ/{}", 1u64 << e)),
            )
            .collect();
        f.write_str(&parts.join(" ⊕ "))
    }
}

/// Reads off coefficient groups: an infinite tower is a `ℤ₂`, a tower of
/// height `h` is a `ℤ/2^h`, and towers do not extend each other.
pub fn resolve_towers(td: &TowerDecomposition) -> BTreeMap<Bidegree, CoefficientGroup> {
    td.towers
        .iter()
        .map(|(d, towers)| {
            (
                *d,
                CoefficientGroup::from_heights(towers.iter().map(|t| t.height)),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::residue_data;

    fn rd(q: u64) -> ResidueData {
        residue_data(q).unwrap()
    }

    fn mono(k: MilnorBasis, tau: u32, v: &[u32]) -> ExtMonomial {
        ExtMonomial::new(k, tau, v.to_vec())
    }

    #[test]
    fn seeds() {
        let s3 = seed_differentials(&rd(3), Spectrum::Kgl);
        assert_eq!(s3.len(), 1);
        assert_eq!(s3[0].to_string(), "d2(tau^2) = u tau v0^2");
        let s5 = seed_differentials(&rd(5), Spectrum::Bpgl);
        assert_eq!(s5[0].to_string(), "d2(tau) = u v0^2");
        let s13 = seed_differentials(&rd(13), Spectrum::Bpgl);
        assert_eq!(s13[0].to_string(), "d2(tau) = u v0^2");
        let s17 = seed_differentials(&rd(17), Spectrum::Bpgl0);
        assert_eq!(s17[0].to_string(), "d4(tau) = u v0^4");
    }

    #[test]
    fn tau_power_examples() {
        let d = tau_power_differential(&rd(5), 6).unwrap();
        assert_eq!(d.to_string(), "d3(tau^6) = u tau^5 v0^3");
        let d = tau_power_differential(&rd(3), 2).unwrap();
        assert_eq!(d.to_string(), "d2(tau^2) = u tau v0^2");
        // Oracle: ordinary Leibniz, d(τ³) = τ · d(τ²).
        let r3 = rd(3);
        let d2 = tau_power_differential(&r3, 2).unwrap();
        let leibniz = tau_pow(1).formal_product(&r3, &d2.target).unwrap();
        let d3 = tau_power_differential(&r3, 3).unwrap();
        assert_eq!((d3.r, d3.target.clone()), (2, leibniz));
        assert_eq!(d3.to_string(), "d2(tau^3) = u tau^2 v0^2");
        assert!(tau_power_differential(&r3, 1).is_none());
    }

    #[test]
    fn higher_leibniz_reproduces_tau_powers() {
        for q in [3, 5, 7, 9, 13, 17, 81] {
            let r = rd(q);
            let seed = seed_differentials(&r, Spectrum::Bpgl).remove(0);
            let p0 = seed.source.tau;
            let mut d = seed;
            for v in 0..6 {
                assert_eq!(
                    Some(d.clone()),
                    tau_power_differential(&r, p0 << v),
                    "q={q} v={v}"
                );
                assert!(d.has_valid_shape());
                d = higher_leibniz_square(&r, &d).unwrap();
            }
        }
    }

    #[test]
    fn boundary_generators_are_permanent() {
        for q in [3, 5, 7, 9] {
            let r = rd(q);
            for x in [
                mono(MilnorBasis::Pi, 0, &[]),
                mono(MilnorBasis::U, 0, &[]),
                ExtMonomial::v_gen(0),
                ExtMonomial::v_gen(1),
                ExtMonomial::v_gen(3),
            ] {
                assert!(differential_of(&r, &x).is_none(), "{x}");
            }
        }
    }

    #[test]
    fn trivial_turn_keeps_page() {
        // For q = 17 (k = 4) no differential has length 2 or 3.
        let w = Window::new(3, (0, 3), (-5, 1)).unwrap();
        let page = SSPage::e2(&rd(17), Spectrum::Kgl, computation_region(&w, 6));
        let next = page.turn_page();
        assert_eq!(next.r, 3);
        assert!(next.differentials.is_empty());
        for t in page.support() {
            assert_eq!(page.classes(t), next.classes(t));
        }
    }

    #[test]
    fn kgl_q3_target_dies_at_e3() {
        let w = Window::new(4, (-1, 4), (-6, 1)).unwrap();
        let pages = adams_pages(&rd(3), Spectrum::Kgl, &w, None).unwrap();
        let target = mono(MilnorBasis::U, 1, &[2]);
        assert!(pages[0].is_nonzero_class(&target));
        assert!(!pages[1].is_nonzero_class(&target));
        assert_eq!(pages[1].r, 3);
    }

    #[test]
    fn q5_towers_of_u_and_u_tau() {
        let w = Window::new(6, (-1, 3), (-4, 1)).unwrap();
        let r5 = rd(5);
        let pages = adams_pages(&r5, Spectrum::Bpgl, &w, None).unwrap();
        // u τ survives to E_{k+1} = E_3, where d_3 τ² = u τ v_0³ cuts it.
        let u_tau = mono(MilnorBasis::U, 1, &[]);
        assert_eq!(pages[1].r, 3);
        assert!(pages[1].is_nonzero_class(&u_tau));
        assert!(pages[1].is_nonzero_class(&mono(MilnorBasis::U, 1, &[3])));
        assert!(!pages[2].is_nonzero_class(&mono(MilnorBasis::U, 1, &[3])));
        let e = e_infinity(&r5, Spectrum::Bpgl, &w, None).unwrap();
        let towers = &e.towers.towers[&Bidegree::new(1, -2)];
        assert!(towers.contains(&Tower {
            base_s: 0,
            base: u_tau,
            height: Height::Finite(3)
        }));
        let minus_alpha = &e.towers.towers[&Bidegree::new(0, -1)];
        let heights: Vec<Height> = minus_alpha.iter().map(|t| t.height).collect();
        assert_eq!(heights, vec![Height::Infinite, Height::Finite(2)]);
    }

    #[test]
    fn e_infinity_matches_gamma_prime() {
        let w = Window::new(6, (-2, 6), (-9, 3)).unwrap();
        for q in [3, 5, 7, 9, 17] {
            for sp in Spectrum::ALL {
                let e = e_infinity(&rd(q), sp, &w, None).unwrap();
                assert!(
                    e.gamma_prime_mismatches.is_empty(),
                    "q={q} {sp}: {:?}",
                    e.gamma_prime_mismatches
                );
                assert!(e.page.anomalies.is_empty(), "{:?}", e.page.anomalies);
                assert!(e.surviving_ambiguities.is_empty());
                assert!(check_differential_shapes(&e.page).is_empty());
            }
        }
    }

    #[test]
    fn leibniz_on_every_page() {
        let w = Window::new(3, (-1, 4), (-6, 2)).unwrap();
        for q in [3, 5] {
            for page in adams_pages(&rd(q), Spectrum::Kgl, &w, None).unwrap() {
                let bad = check_leibniz(&page, &w);
                assert!(bad.is_empty(), "q={q}: {bad:?}");
            }
        }
    }

    #[test]
    fn page_bound_rejection() {
        let w = Window::new(3, (0, 15), (-6, 2)).unwrap();
        assert!(matches!(
            adams_pages(&rd(5), Spectrum::Kgl, &w, Some(3)),
            Err(Error::PageBound { .. })
        ));
    }

    #[test]
    fn multiplicative_spot_checks() {
        let w = Window::new(4, (-1, 5), (-7, 1)).unwrap();
        for q in [3, 5] {
            let r = rd(q);
            let e = e_infinity(&r, Spectrum::Bpgl0, &w, None).unwrap();
            let u = mono(MilnorBasis::U, 0, &[]);
            let pi = mono(MilnorBasis::Pi, 0, &[]);
            for i in 2..=5 {
                let gamma = mono(MilnorBasis::U, i - 1, &[]);
                assert!(e.page.is_nonzero_class(&gamma));
                assert_eq!(u.product(&r, &gamma), None);
                let pg = pi.product(&r, &gamma).unwrap();
                assert_eq!(pg, mono(MilnorBasis::PiU, i - 1, &[]));
                assert!(e.page.is_nonzero_class(&pg));
            }
        }
    }

    #[test]
    fn resolve_examples() {
        let d = Bidegree::ZERO;
        let mk = |h| TowerDecomposition {
            towers: [(d, h)].into_iter().collect(),
        };
        let t = |h| Tower {
            base_s: 0,
            base: ExtMonomial::one(),
            height: h,
        };
        assert_eq!(
            resolve_towers(&mk(vec![t(Height::Infinite)]))[&d],
            CoefficientGroup::free(1)
        );
        assert_eq!(
            resolve_towers(&mk(vec![t(Height::Finite(2))]))[&d],
            CoefficientGroup::cyclic(2)
        );
        assert!(resolve_towers(&mk(vec![]))[&d].is_trivial());
        let g = CoefficientGroup::from_heights([
            Height::Finite(1),
            Height::Infinite,
            Height::Finite(3),
        ]);
        assert_eq!(g.torsion_exponents, vec![3, 1]);
        assert_eq!(g.to_string(), "ℤ₂ ⊕ ℤ/8 ⊕ ℤ/2");
    }
}
