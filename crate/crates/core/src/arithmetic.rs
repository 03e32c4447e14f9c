//! Arithmetic of a nondyadic p-adic field seen through its residue order.
//!
//! Everything downstream only needs the square classes of `F`, which are
//! generated by a uniformizer `π` and a nonsquare Teichmüller unit `u`. When
//! `q ≡ 3 (mod 4)` we take `u = -1`, so that `ρ = {-1}` equals `{u}`; when
//! `q ≡ 1 (mod 4)`, `-1` is a square and `ρ = 0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::Bidegree;

/// Largest residue order accepted by [`residue_data`].
pub const MAX_RESIDUE_ORDER: u64 = 1 << 31;

/// The arithmetic seed of every computation: `q = p^m` with `p` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ResidueData {
    pub q: u32,
    pub p: u32,
    pub m: u32,
    /// `ν₂(q - 1)`.
    pub k: u32,
    /// `q mod 4`, either 1 or 3.
    pub qmod4: u8,
}

impl ResidueData {
    /// Whether `ρ = {-1}` vanishes, i.e. `q ≡ 1 (mod 4)`.
    pub fn is_split(&self) -> bool {
        self.qmod4 == 1
    }

    /// The class `ρ` of `-1` in `k^M_1`, as a basis element if nonzero.
    pub fn rho(&self) -> Option<MilnorBasis> {
        if self.is_split() {
            None
        } else {
            Some(MilnorBasis::U)
        }
    }
}

/// 2-adic valuation of a positive integer.
pub fn nu2(x: u64) -> u32 {
    assert!(x != 0, "nu2(0) is undefined");
    x.trailing_zeros()
}

/// Validates `q` and computes `p`, `m`, `k = ν₂(q - 1)` and `q mod 4`.
pub fn residue_data(q: u64) -> Result<ResidueData> {
    let bad = |reason| Err(Error::InvalidResidueOrder { q, reason });
    if q < 3 {
        return bad("residue order must be at least 3");
    }
    if q.is_multiple_of(2) {
        return bad("residue order must be odd (dyadic fields are excluded)");
    }
    if q > MAX_RESIDUE_ORDER {
        return bad("residue order must be at most 2^31");
    }
    let p = smallest_prime_factor(q);
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    if rest != 1 {
        return bad("residue order must be a prime power");
    }
    Ok(ResidueData {
        q: q as u32,
        p: p as u32,
        m,
        k: nu2(q - 1),
        qmod4: (q % 4) as u8,
    })
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// A square class `π^{eps_pi} u^{eps_u}` of `F^×`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SquareClass {
    pub eps_pi: bool,
    pub eps_u: bool,
}

impl SquareClass {
    pub const ONE: SquareClass = SquareClass::new(false, false);
    pub const U: SquareClass = SquareClass::new(false, true);
    pub const PI: SquareClass = SquareClass::new(true, false);
    pub const U_PI: SquareClass = SquareClass::new(true, true);

    pub const fn new(eps_pi: bool, eps_u: bool) -> Self {
        SquareClass { eps_pi, eps_u }
    }

    /// Valuation of the canonical representative.
    pub fn valuation(self) -> i64 {
        self.eps_pi as i64
    }
}

/// Product in `F^×/(F^×)²`.
impl std::ops::Mul for SquareClass {
    type Output = SquareClass;

    fn mul(self, other: SquareClass) -> SquareClass {
        SquareClass::new(self.eps_pi ^ other.eps_pi, self.eps_u ^ other.eps_u)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match (self.eps_pi, self.eps_u) {
            (false, false) => "1",
            (false, true) => "u",
            (true, false) => "pi",
            (true, true) => "upi",
        };
        f.write_str(s)
    }
}

/// The four square classes together with the class of `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClasses {
    pub classes: [SquareClass; 4],
    pub minus_one: SquareClass,
}

pub fn square_classes(rd: &ResidueData) -> SquareClasses {
    SquareClasses {
        classes: [
            SquareClass::ONE,
            SquareClass::U,
            SquareClass::PI,
            SquareClass::U_PI,
        ],
        minus_one: if rd.is_split() {
            SquareClass::ONE
        } else {
            SquareClass::U
        },
    }
}

/// Tame symbol `(-1)^{v(x)v(y)} x^{v(y)} y^{-v(x)} mod 𝔪` of two square-class
/// representatives, reduced to `𝔽^×/(𝔽^×)²`. Returns `true` for the
/// nonsquare class.
pub fn tame_symbol(rd: &ResidueData, a: SquareClass, b: SquareClass) -> bool {
    let (va, vb) = (a.valuation(), b.valuation());
    let sign_exp = va * vb;
    let pi_exp = a.eps_pi as i64 * vb - b.eps_pi as i64 * va;
    let u_exp = a.eps_u as i64 * vb - b.eps_u as i64 * va;
    debug_assert_eq!(pi_exp, 0);
    let minus_one_nonsquare = !rd.is_split();
    (sign_exp.rem_euclid(2) == 1 && minus_one_nonsquare) ^ (u_exp.rem_euclid(2) == 1)
}

/// Canonical basis of mod 2 Milnor K-theory `k^M_*(F)`: `1` in degree 0,
/// `π, u` in degree 1 and `πu` in degree 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MilnorBasis {
    One,
    Pi,
    U,
    PiU,
}

impl MilnorBasis {
    pub const ALL: [MilnorBasis; 4] = [
        MilnorBasis::One,
        MilnorBasis::Pi,
        MilnorBasis::U,
        MilnorBasis::PiU,
    ];

    pub fn degree(self) -> u32 {
        match self {
            MilnorBasis::One => 0,
            MilnorBasis::Pi | MilnorBasis::U => 1,
            MilnorBasis::PiU => 2,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            MilnorBasis::One => "1",
            MilnorBasis::Pi => "pi",
            MilnorBasis::U => "u",
            MilnorBasis::PiU => "piu",
        }
    }

    fn square_class(self) -> SquareClass {
        match self {
            MilnorBasis::Pi => SquareClass::PI,
            MilnorBasis::U => SquareClass::U,
            _ => unreachable!("only degree-one symbols have a square class"),
        }
    }

    /// Product of two basis symbols, `None` when it vanishes. Degree-one
    /// products are read off through the tame symbol, which identifies
    /// `k^M_2(F)` with `k^M_1(𝔽) = ℤ/2`.
    pub fn mul(self, rd: &ResidueData, other: MilnorBasis) -> Option<MilnorBasis> {
        match (self, other) {
            (MilnorBasis::One, x) | (x, MilnorBasis::One) => Some(x),
            (a, b) if a.degree() + b.degree() >= 3 => None,
            (a, b) => {
                tame_symbol(rd, a.square_class(), b.square_class()).then_some(MilnorBasis::PiU)
            }
        }
    }
}

impl fmt::Display for MilnorBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered basis of `k^M_n(F)`.
pub fn milnor_basis(_rd: &ResidueData, n: u32) -> Vec<MilnorBasis> {
    match n {
        0 => vec![MilnorBasis::One],
        1 => vec![MilnorBasis::Pi, MilnorBasis::U],
        2 => vec![MilnorBasis::PiU],
        _ => Vec::new(),
    }
}

/// A homogeneous element of `k^M_*(F)`: a GF(2) combination of the basis of
/// `k^M_degree`, stored as a bitmask over [`MilnorBasis::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MilnorClass {
    pub degree: u32,
    coeffs: u8,
}

impl MilnorClass {
    pub fn zero(degree: u32) -> Self {
        MilnorClass { degree, coeffs: 0 }
    }

    pub fn basis(b: MilnorBasis) -> Self {
        MilnorClass {
            degree: b.degree(),
            coeffs: 1 << b.index(),
        }
    }

    /// Sum of the given basis symbols, all of which must have degree `degree`.
    pub fn from_terms(degree: u32, terms: &[MilnorBasis]) -> Self {
        let mut c = MilnorClass::zero(degree);
        for &t in terms {
            assert_eq!(t.degree(), degree, "inhomogeneous Milnor class");
            c.coeffs ^= 1 << t.index();
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == 0
    }

    pub fn terms(&self) -> impl Iterator<Item = MilnorBasis> + '_ {
        MilnorBasis::ALL
            .into_iter()
            .filter(move |b| self.coeffs & (1 << b.index()) != 0)
    }

    pub fn add(&self, other: &MilnorClass) -> MilnorClass {
        assert_eq!(
            self.degree, other.degree,
            "adding classes of different degree"
        );
        MilnorClass {
            degree: self.degree,
            coeffs: self.coeffs ^ other.coeffs,
        }
    }
}

impl fmt::Display for MilnorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let names: Vec<_> = self.terms().map(MilnorBasis::name).collect();
        f.write_str(&names.join(" + "))
    }
}

/// Bilinear product in `k^M_*(F)`, reduced to the canonical basis.
pub fn milnor_product(rd: &ResidueData, x: &MilnorClass, y: &MilnorClass) -> MilnorClass {
    let mut out = MilnorClass::zero(x.degree + y.degree);
    for a in x.terms() {
        for b in y.terms() {
            if let Some(c) = a.mul(rd, b) {
                out = out.add(&MilnorClass::basis(c));
            }
        }
    }
    out
}

/// A monomial `τ^t κ` of `H_* = k^M_*(F)[τ]`, in degree `t(1 - α) - deg(κ)α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HStarMonomial {
    pub tau_exp: u32,
    pub milnor: MilnorBasis,
}

impl HStarMonomial {
    pub const ONE: HStarMonomial = HStarMonomial::new(0, MilnorBasis::One);

    pub const fn new(tau_exp: u32, milnor: MilnorBasis) -> Self {
        HStarMonomial { tau_exp, milnor }
    }

    pub fn bidegree(&self) -> Bidegree {
        let t = self.tau_exp as i32;
        Bidegree::new(t, -t - self.milnor.degree() as i32)
    }

    pub fn mul(&self, rd: &ResidueData, other: &HStarMonomial) -> Option<HStarMonomial> {
        self.milnor
            .mul(rd, other.milnor)
            .map(|k| HStarMonomial::new(self.tau_exp + other.tau_exp, k))
    }

    pub fn name(&self) -> String {
        let tau = match self.tau_exp {
            0 => String::new(),
            1 => "tau".to_string(),
            t => format!("tau^{t}"),
        };
        match (self.milnor, tau.is_empty()) {
            (MilnorBasis::One, true) => "1".to_string(),
            (MilnorBasis::One, false) => tau,
            (k, true) => k.name().to_string(),
            (k, false) => format!("{} {}", k.name(), tau),
        }
    }
}

impl fmt::Display for HStarMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// All monomials `τ^t κ` of `H_*` in bidegree `d`.
pub fn h_star_basis(rd: &ResidueData, d: Bidegree) -> Vec<HStarMonomial> {
    if d.m < 0 {
        return Vec::new();
    }
    let j = -d.n - d.m;
    if !(0..=2).contains(&j) {
        return Vec::new();
    }
    milnor_basis(rd, j as u32)
        .into_iter()
        .map(|k| HStarMonomial::new(d.m as u32, k))
        .collect()
}
