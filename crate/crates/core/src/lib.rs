//! Motivic invariants of nondyadic p-adic fields, computed from the residue
//! order `q` alone.
//!
//! The pipeline runs bottom-up:
//!
//! - [`arithmetic`]: square classes, the tame symbol, mod 2 Milnor K-theory
//!   and motivic homology `H_* = k^M_*[τ]`.
//! - [`hopf`]: the quotient Hopf algebroids `E(n)` of the dual Steenrod
//!   algebra.
//! - [`cobar`]: brute-force Ext over `E(n)` via the reduced cobar complex.
//! - [`closed_ext`]: the closed-form Ext and the ρ-Bockstein spectral
//!   sequence that produces it.
//! - [`adams`]: the motivic Adams spectral sequence, `E_∞` and `v_0`-towers.
//! - [`coefficients`]: 2-complete coefficient groups of `BPGL`, `kgl`,
//!   `BPGL⟨0⟩`, `MGL` and algebraic K-groups.
//!
//! Linear algebra is over GF(2) in [`gf2`]; gradings live in [`grading`].

pub mod adams;
pub mod arithmetic;
pub mod closed_ext;
pub mod cobar;
pub mod coefficients;
pub mod error;
pub mod gf2;
pub mod grading;
pub mod hopf;

pub use adams::{
    e_infinity, resolve_towers, seed_differentials, tau_power_differential, CoefficientGroup,
    EInfinity, Height, SSPage, Spectrum, Tower, TowerDecomposition,
};
pub use arithmetic::{
    h_star_basis, milnor_basis, milnor_product, residue_data, square_classes, tame_symbol,
    HStarMonomial, MilnorBasis, MilnorClass, ResidueData, SquareClass,
};
pub use closed_ext::{closed_form_basis, rho_bockstein_e2, AmbiguityFlag, ExtMonomial};
pub use cobar::{
    cobar_basis, cobar_differential, ext_dimensions, CobarConfig, CobarWord, ExtTable,
};
pub use coefficients::{algebraic_k_degree, coefficient_group, gamma, SpectrumTag};
pub use error::{Error, Result};
pub use grading::{Bidegree, Tridegree, Window};
pub use hopf::{en_presentation, truncation_level, EnPresentation};
