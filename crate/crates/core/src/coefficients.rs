//! Coefficient groups of the 2-completed spectra as bigraded abelian groups.
//!
//! Everything is assembled from `Γ`, the coefficients of 2-complete integral
//! motivic cohomology: `ℤ₂` in degree 0, `ℤ₂ ⊕ ℤ/2^k` in `-α`, `ℤ/2^k` in
//! `-2α`, and `ℤ/2^{k+ν(i)}` in `(i-1)(1-α) - α` and `(i-1)(1-α) - 2α` for
//! `i >= 2`. A spectrum whose coefficients are `Γ[x_1, x_2, …]` with
//! generators in degrees `w(1+α)` has, in degree `d`, one copy of
//! `Γ_{d - w(M)(1+α)}` for each monomial `M` in the generators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adams::{gamma_prime, CoefficientGroup, Height};
use crate::arithmetic::ResidueData;
use crate::error::{Error, Result};
use crate::grading::Bidegree;

/// The spectra whose coefficients can be queried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SpectrumTag {
    Bpgl,
    Kgl,
    Bpgl0,
    Mgl,
    /// 2-complete integral motivic cohomology; the same spectrum as `BPGL0`.
    Hz2,
}

impl SpectrumTag {
    pub const ALL: [SpectrumTag; 5] = [
        SpectrumTag::Bpgl,
        SpectrumTag::Kgl,
        SpectrumTag::Bpgl0,
        SpectrumTag::Mgl,
        SpectrumTag::Hz2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SpectrumTag::Bpgl => "BPGL",
            SpectrumTag::Kgl => "kgl",
            SpectrumTag::Bpgl0 => "BPGL0",
            SpectrumTag::Mgl => "MGL",
            SpectrumTag::Hz2 => "HZ2",
        }
    }

    /// `HZ2` and `BPGL0` name the same spectrum.
    pub fn canonical(self) -> SpectrumTag {
        match self {
            SpectrumTag::Hz2 => SpectrumTag::Bpgl0,
            t => t,
        }
    }
}

impl fmt::Display for SpectrumTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpectrumTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bpgl" => Ok(SpectrumTag::Bpgl),
            "kgl" => Ok(SpectrumTag::Kgl),
            "bpgl0" => Ok(SpectrumTag::Bpgl0),
            "mgl" => Ok(SpectrumTag::Mgl),
            "hz2" => Ok(SpectrumTag::Hz2),
            _ => Err(Error::InvalidInput(format!("unknown spectrum {s:?}"))),
        }
    }
}

/// A polynomial generator over `Γ` in degree `weight · (1 + α)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GeneratorWeight {
    pub name: String,
    pub weight: u32,
}

impl GeneratorWeight {
    pub fn degree(&self) -> Bidegree {
        Bidegree::new(self.weight as i32, self.weight as i32)
    }
}

/// Polynomial generators of weight at most `max_weight`: `v_i` of weight
/// `2^i - 1` for `BPGL`, `v_1` for `kgl`, none for `BPGL0`, and for `MGL` the
/// `v_i` together with `u_j` of weight `j` for every `j` not of the form
/// `2^n - 1`.
pub fn polynomial_generators(tag: SpectrumTag, max_weight: u32) -> Vec<GeneratorWeight> {
    let v = |i: u32| GeneratorWeight {
        name: format!("v{i}"),
        weight: (1 << i) - 1,
    };
    let vs = || {
        (1..32)
            .map(v)
            .take_while(|g| g.weight <= max_weight)
            .collect::<Vec<_>>()
    };
    let mut gens = match tag.canonical() {
        SpectrumTag::Bpgl => vs(),
        SpectrumTag::Kgl => vs().into_iter().take(1).collect(),
        SpectrumTag::Bpgl0 | SpectrumTag::Hz2 => Vec::new(),
        SpectrumTag::Mgl => {
            let mut g = vs();
            g.extend(
                (1..=max_weight)
                    .filter(|j| !(j + 1).is_power_of_two())
                    .map(|j| GeneratorWeight {
                        name: format!("u{j}"),
                        weight: j,
                    }),
            );
            g
        }
    };
    gens.sort_by_key(|g| (g.weight, g.name.clone()));
    gens
}

/// Number of monomials of each weight `0..=max_weight` in the generators.
pub fn monomial_counts(tag: SpectrumTag, max_weight: u32) -> Vec<u64> {
    let mut counts = vec![0u64; max_weight as usize + 1];
    counts[0] = 1;
    for g in polynomial_generators(tag, max_weight) {
        let w = g.weight as usize;
        for a in w..counts.len() {
            counts[a] += counts[a - w];
        }
    }
    counts
}

/// `Γ` in degree `d`.
pub fn gamma(rd: &ResidueData, d: Bidegree) -> CoefficientGroup {
    if d.m < 0 {
        return CoefficientGroup::trivial();
    }
    CoefficientGroup::from_heights(
        gamma_prime(rd, d.m)
            .into_iter()
            .filter(|e| e.degree == d)
            .map(|e| e.height),
    )
}

/// The coefficient group of a spectrum in degree `d`.
pub fn coefficient_group(rd: &ResidueData, tag: SpectrumTag, d: Bidegree) -> CoefficientGroup {
    if d.m < 0 {
        return CoefficientGroup::trivial();
    }
    let counts = monomial_counts(tag, d.m as u32);
    let mut out = CoefficientGroup::trivial();
    for (a, &count) in counts.iter().enumerate() {
        if count > 0 {
            let a = a as i32;
            out = out.direct_sum(&gamma(rd, Bidegree::new(d.m - a, d.n - a)).times(count));
        }
    }
    out
}

/// One summand `Γ_g · v_1^a` of `kgl` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KglSummand {
    /// Degree of the `Γ` generator.
    pub gamma_degree: Bidegree,
    pub v1_power: u32,
    pub height: Height,
}

/// The cyclic summands of `kgl` in degree `d`.
pub fn kgl_summands(rd: &ResidueData, d: Bidegree) -> Vec<KglSummand> {
    let mut out = Vec::new();
    for a in 0..=d.m.max(-1) {
        let g = Bidegree::new(d.m - a, d.n - a);
        if g.m < 0 {
            continue;
        }
        for e in gamma_prime(rd, g.m).into_iter().filter(|e| e.degree == g) {
            out.push(KglSummand {
                gamma_degree: g,
                v1_power: a as u32,
                height: e.height,
            });
        }
    }
    out
}

/// The summands of `kgl` in degree `d` annihilated by some power `v_1^N`
/// with `N <= bound`. Multiplication by `v_1` sends `Γ_g v_1^a` to
/// `Γ_g v_1^{a+1}`, so a summand is torsion exactly when that target is
/// missing from the next degree.
pub fn v1_torsion_summands(rd: &ResidueData, d: Bidegree, bound: u32) -> Vec<KglSummand> {
    let step = Bidegree::new(1, 1);
    kgl_summands(rd, d)
        .into_iter()
        .filter(|s| {
            let mut target_degree = d;
            (1..=bound).any(|n| {
                target_degree = target_degree + step;
                !kgl_summands(rd, target_degree).iter().any(|t| {
                    t.gamma_degree == s.gamma_degree
                        && t.v1_power == s.v1_power + n
                        && t.height >= s.height
                })
            })
        })
        .collect()
}

/// The 2-complete algebraic K-group `K_m(F)^∧_2`, read off as the `kgl`
/// coefficient group in degree `m + 0α` modulo its `v_1`-power torsion.
pub fn algebraic_k_degree(rd: &ResidueData, m: i64) -> Result<CoefficientGroup> {
    if m < 0 {
        return Err(Error::NegativeKDegree(m));
    }
    let d = Bidegree::new(m as i32, 0);
    let torsion = v1_torsion_summands(rd, d, m as u32 + 2);
    let mut torsion_heights: Vec<Height> = torsion.iter().map(|s| s.height).collect();
    let mut out = CoefficientGroup::trivial();
    for s in kgl_summands(rd, d) {
        if let Some(pos) = torsion_heights.iter().position(|&h| h == s.height) {
            torsion_heights.swap_remove(pos);
        } else {
            out.add_summand(s.height);
        }
    }
    Ok(out)
}
