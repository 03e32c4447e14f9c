//! Property tests of the public API across residue orders and windows.

use motivic_core::closed_ext::closed_form_dimensions;
use motivic_core::{
    coefficient_group, e_infinity, ext_dimensions, gamma, h_star_basis, milnor_basis,
    milnor_product, residue_data, truncation_level, Bidegree, CobarConfig, CoefficientGroup,
    Height, MilnorBasis, MilnorClass, ResidueData, Spectrum, SpectrumTag, Window,
};
use proptest::prelude::*;

const QS: [u64; 10] = [3, 5, 7, 9, 11, 13, 17, 25, 27, 81];

fn rd(q: u64) -> ResidueData {
    residue_data(q).unwrap()
}

/// Odd prime powers up to `limit`, by trial division.
fn odd_prime_powers(limit: u64) -> Vec<u64> {
    let is_prime = |p: u64| {
        p >= 2
            && (2..)
                .take_while(|d| d * d <= p)
                .all(|d| !p.is_multiple_of(d))
    };
    let mut out: Vec<u64> = (3..=limit)
        .step_by(2)
        .filter(|&p| is_prime(p))
        .flat_map(|p| {
            std::iter::successors(Some(p), move |x| Some(x * p)).take_while(|&x| x <= limit)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Every homogeneous element of `k^M_*`.
fn all_milnor_classes() -> Vec<MilnorClass> {
    let mut out = Vec::new();
    for d in 0..=2 {
        let basis = match d {
            0 => vec![MilnorBasis::One],
            1 => vec![MilnorBasis::Pi, MilnorBasis::U],
            _ => vec![MilnorBasis::PiU],
        };
        for mask in 0..(1u32 << basis.len()) {
            let terms: Vec<_> = basis
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, b)| *b)
                .collect();
            out.push(MilnorClass::from_terms(d, &terms));
        }
    }
    out
}

#[test]
fn milnor_ring_for_every_odd_prime_power_below_1000() {
    let qs = odd_prime_powers(1000);
    assert!(qs.contains(&729) && qs.contains(&961) && !qs.contains(&15));
    let classes = all_milnor_classes();
    for q in qs {
        let rd = rd(q);
        let dims: Vec<usize> = (0..6).map(|n| milnor_basis(&rd, n).len()).collect();
        assert_eq!(dims, [1, 2, 1, 0, 0, 0], "q = {q}");
        assert_eq!(rd.rho(), (q % 4 == 3).then_some(MilnorBasis::U), "q = {q}");
        for x in &classes {
            for y in &classes {
                let xy = milnor_product(&rd, x, y);
                assert_eq!(xy, milnor_product(&rd, y, x), "q = {q}");
                assert_eq!(xy.degree, x.degree + y.degree);
                for z in &classes {
                    assert_eq!(
                        milnor_product(&rd, &xy, z),
                        milnor_product(&rd, x, &milnor_product(&rd, y, z)),
                        "q = {q}"
                    );
                }
            }
        }
    }
}

/// Degrees where `Γ` is allowed to be nonzero: `0`, `-α`, `-2α`, and
/// `(i-1)(1-α) - εα` for `i >= 2`, `ε ∈ {1, 2}`.
fn in_gamma_support(d: Bidegree) -> bool {
    matches!((d.m, d.n), (0, 0) | (0, -1) | (0, -2))
        || (d.m >= 1 && (d.n == -d.m - 1 || d.n == -d.m - 2))
}

fn any_q() -> impl Strategy<Value = u64> {
    prop::sample::select(QS.to_vec())
}

fn small_window() -> impl Strategy<Value = Window> {
    (0u32..5, -3i32..4, 0i32..6, -9i32..1, 0i32..6)
        .prop_map(|(s, m0, dm, n0, dn)| Window::new(s, (m0, m0 + dm), (n0, n0 + dn)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h_star_support(q in any_q(), m in -4i32..12, n in -16i32..4) {
        let d = Bidegree::new(m, n);
        let basis = h_star_basis(&rd(q), d);
        let j = -n - m;
        if !basis.is_empty() {
            prop_assert!(m >= 0 && (0..=2).contains(&j));
        }
        prop_assert!(basis.iter().all(|x| x.bidegree() == d));
    }

    #[test]
    fn gamma_vanishes_off_its_support(q in any_q(), m in -4i32..14, n in -18i32..4) {
        let d = Bidegree::new(m, n);
        let g = gamma(&rd(q), d);
        if !in_gamma_support(d) {
            prop_assert!(g.is_trivial(), "Γ at {} is {}", d, g);
        } else {
            prop_assert!(!g.is_trivial());
        }
        prop_assert_eq!(coefficient_group(&rd(q), SpectrumTag::Hz2, d), g);
    }

    #[test]
    fn mgl_dominates_bpgl(q in any_q(), m in 0i32..9, n in -12i32..2) {
        let d = Bidegree::new(m, n);
        let bp = coefficient_group(&rd(q), SpectrumTag::Bpgl, d);
        let mgl = coefficient_group(&rd(q), SpectrumTag::Mgl, d);
        prop_assert!(bp.free_rank <= mgl.free_rank);
        let mut rest = mgl.torsion_exponents.clone();
        for e in &bp.torsion_exponents {
            let pos = rest.iter().position(|x| x == e);
            prop_assert!(pos.is_some(), "{} does not inject into {}", bp, mgl);
            rest.remove(pos.unwrap());
        }
    }

    #[test]
    fn kgl_and_bpgl_agree_below_v2(q in any_q(), m in 0i32..3, n in -8i32..2) {
        // v_2 has weight 3, so below m = 3 only v_1-monomials fit.
        let d = Bidegree::new(m, n);
        prop_assert_eq!(
            coefficient_group(&rd(q), SpectrumTag::Kgl, d),
            coefficient_group(&rd(q), SpectrumTag::Bpgl, d)
        );
    }

    #[test]
    fn direct_sum_is_commutative_and_associative(
        a in (0u32..3, prop::collection::vec(1u32..6, 0..4)),
        b in (0u32..3, prop::collection::vec(1u32..6, 0..4)),
        c in (0u32..3, prop::collection::vec(1u32..6, 0..4)),
    ) {
        let group = |(f, t): (u32, Vec<u32>)| {
            CoefficientGroup::from_heights(
                std::iter::repeat_n(Height::Infinite, f as usize).chain(t.into_iter().map(Height::Finite)),
            )
        };
        let (a, b, c) = (group(a), group(b), group(c));
        prop_assert_eq!(a.direct_sum(&b), b.direct_sum(&a));
        prop_assert_eq!(a.direct_sum(&b).direct_sum(&c), a.direct_sum(&b.direct_sum(&c)));
        let s = a.direct_sum(&b);
        prop_assert!(s.torsion_exponents.windows(2).all(|w| w[0] >= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cobar_equals_closed_form(q in any_q(), n in 1u32..4, w in small_window()) {
        let rd = rd(q);
        let cobar = ext_dimensions(&rd, n, &w, &CobarConfig::default()).unwrap().dimensions();
        prop_assert_eq!(cobar, closed_form_dimensions(&rd, n, &w));
    }

    #[test]
    fn ext_stabilizes_at_the_truncation_level(q in any_q(), w in small_window()) {
        let rd = rd(q);
        let n = truncation_level(&w).unwrap();
        let at = |level| ext_dimensions(&rd, level, &w, &CobarConfig::default()).unwrap().dimensions();
        prop_assert_eq!(at(n), at(n + 1));
    }

    #[test]
    fn e_infinity_is_gamma_prime(
        q in any_q(),
        spectrum in prop::sample::select(Spectrum::ALL.to_vec()),
        w in small_window(),
    ) {
        let einf = e_infinity(&rd(q), spectrum, &w, None).unwrap();
        prop_assert!(einf.gamma_prime_mismatches.is_empty(), "{:?}", einf.gamma_prime_mismatches);
        prop_assert!(einf.surviving_ambiguities.is_empty());
        prop_assert!(einf.page.anomalies.is_empty(), "{:?}", einf.page.anomalies);
    }
}
