//! Acceptance run: prints one PASS/FAIL line per criterion and exits with a
//! failure status if any criterion fails. Every comparison is exact
//! (tolerance 0); the elapsed time of each criterion is reported alongside.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use motivic_core::adams::{adams_pages, check_differential_shapes, check_leibniz};
use motivic_core::closed_ext::closed_form_dimensions;
use motivic_core::cobar::check_d_squared;
use motivic_core::{
    coefficient_group, e_infinity, ext_dimensions, gamma, milnor_basis, residue_data,
    resolve_towers, rho_bockstein_e2, truncation_level, Bidegree, CobarConfig, CoefficientGroup,
    MilnorBasis, ResidueData, Spectrum, SpectrumTag, Window,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn rd(q: u64) -> ResidueData {
    residue_data(q).expect("valid residue order")
}

fn nu2(i: u32) -> u32 {
    i.trailing_zeros()
}

fn first_difference<K: std::fmt::Debug + Ord, V: PartialEq + std::fmt::Debug>(
    a: &BTreeMap<K, V>,
    b: &BTreeMap<K, V>,
) -> Option<String> {
    if a.len() != b.len() {
        return Some(format!("{} vs {} entries", a.len(), b.len()));
    }
    a.iter()
        .zip(b)
        .find(|(x, y)| x != y)
        .map(|(x, y)| format!("{x:?} vs {y:?}"))
}

/// The Milnor K-theory ring written out by hand: `u² = 0`, `πu = uπ`, and
/// `π² = π·(-1)`, which is `πu` exactly when -1 is not a square (q ≡ 3 mod 4).
fn expected_product(q: u64, x: MilnorBasis, y: MilnorBasis) -> Option<MilnorBasis> {
    use MilnorBasis::*;
    match (x, y) {
        (One, z) | (z, One) => Some(z),
        (Pi, U) | (U, Pi) => Some(PiU),
        (Pi, Pi) if q % 4 == 3 => Some(PiU),
        _ => None,
    }
}

fn criterion_1() -> Check {
    let qs = [3u64, 5, 7, 9, 11, 13, 25, 27, 81];
    for q in qs {
        let rd = rd(q);
        let dims: Vec<usize> = (0..8).map(|n| milnor_basis(&rd, n).len()).collect();
        if dims != [1, 2, 1, 0, 0, 0, 0, 0] {
            return Err(format!("q={q}: dims {dims:?}"));
        }
        for x in MilnorBasis::ALL {
            for y in MilnorBasis::ALL {
                let (got, want) = (x.mul(&rd, y), expected_product(q, x, y));
                if got != want {
                    return Err(format!(
                        "q={q}: {}·{} = {got:?}, expected {want:?}",
                        x.name(),
                        y.name()
                    ));
                }
            }
        }
    }
    Ok(format!("dims (1,2,1,0,...) and products for q in {qs:?}"))
}

fn oracle_window() -> Window {
    Window::new(8, (-6, 10), (-10, 4)).unwrap()
}

fn criterion_2() -> Check {
    let w = oracle_window();
    let mut total = 0;
    for q in [3u64, 5] {
        let rd = rd(q);
        let cobar = ext_dimensions(&rd, 1, &w, &CobarConfig::default())
            .map_err(|e| e.to_string())?
            .dimensions();
        let closed = closed_form_dimensions(&rd, 1, &w);
        if let Some(d) = first_difference(&cobar, &closed) {
            return Err(format!("q={q}: cobar vs closed form: {d}"));
        }
        total += cobar.len();
    }
    Ok(format!(
        "cobar = closed form on {total} tridegrees (q = 3, 5; n = 1)"
    ))
}

fn criterion_3() -> Check {
    let w = oracle_window();
    let n = truncation_level(&w).map_err(|e| e.to_string())?;
    for q in [3u64, 5] {
        let rd = rd(q);
        let at =
            |level| ext_dimensions(&rd, level, &w, &CobarConfig::default()).map(|t| t.dimensions());
        let (a, b) = (
            at(n).map_err(|e| e.to_string())?,
            at(n + 1).map_err(|e| e.to_string())?,
        );
        if let Some(d) = first_difference(&a, &b) {
            return Err(format!("q={q}: E({n}) vs E({}): {d}", n + 1));
        }
        let (ca, cb) = (
            closed_form_dimensions(&rd, n, &w),
            closed_form_dimensions(&rd, n + 1, &w),
        );
        if let Some(d) = first_difference(&ca, &cb) {
            return Err(format!("q={q}: closed form at {n} vs {}: {d}", n + 1));
        }
        if let Some(d) = first_difference(&a, &ca) {
            return Err(format!("q={q}: cobar vs closed form at level {n}: {d}"));
        }
    }
    Ok(format!("levels {n} and {} agree (q = 3, 5)", n + 1))
}

fn criterion_4() -> Check {
    let rd = rd(3);
    let w = oracle_window();
    for n in [1, truncation_level(&w).unwrap()] {
        let res = rho_bockstein_e2(&rd, n, &w).map_err(|e| e.to_string())?;
        let closed = closed_form_dimensions(&rd, n, &w);
        let e2: BTreeMap<_, _> = closed
            .keys()
            .map(|t| (*t, res.e2_dims().get(t).copied().unwrap_or(0)))
            .collect();
        if let Some(t) = res
            .e2_dims()
            .iter()
            .find(|(t, d)| **d > 0 && !closed.contains_key(t))
        {
            return Err(format!("n={n}: E_2 class outside the window at {:?}", t.0));
        }
        if let Some(d) = first_difference(&e2, &closed) {
            return Err(format!("n={n}: E_2 vs closed form: {d}"));
        }
        let nonzero: Vec<(String, String)> = res
            .generator_d1
            .iter()
            .filter_map(|g| g.target.clone().map(|t| (g.source.clone(), t)))
            .collect();
        if nonzero != [("tau".to_string(), "rho v0".to_string())] {
            return Err(format!("n={n}: nonzero d1 on generators {nonzero:?}"));
        }
        if !res.collapses_at_e2 {
            return Err(format!(
                "n={n}: no collapse (ρ-filtration {})",
                res.max_rho_filtration
            ));
        }
    }
    Ok(
        "E_2 = closed form, d1(tau) = rho v0 is the only generator differential, collapse at E_2"
            .into(),
    )
}

fn criterion_5() -> Check {
    let rd = rd(3);
    let w = Window::new(4, (-1, 6), (-8, 1)).unwrap();
    let einf = e_infinity(&rd, Spectrum::Kgl, &w, None).map_err(|e| e.to_string())?;
    if !einf.gamma_prime_mismatches.is_empty() {
        return Err(format!(
            "E_inf vs Γ'[v1]: {:?}",
            einf.gamma_prime_mismatches
        ));
    }
    let three = Bidegree::new(3, 0);
    let want = CoefficientGroup::cyclic(2);
    let got = coefficient_group(&rd, SpectrumTag::Kgl, three);
    let from_ass = resolve_towers(&einf.towers)
        .get(&three)
        .cloned()
        .unwrap_or_default();
    if got != want || from_ass != want {
        return Err(format!(
            "kgl_3 = {got} (formula), {from_ass} (spectral sequence), expected {want}"
        ));
    }
    Ok(format!(
        "E_inf = Γ'[v1] on stems -1..6, kgl_3 = {got} by formula and by towers"
    ))
}

fn criterion_6() -> Check {
    let rd = rd(5);
    let g = |d| coefficient_group(&rd, SpectrumTag::Bpgl, d);
    let minus_alpha = g(Bidegree::new(0, -1));
    let want = CoefficientGroup::free(1).direct_sum(&CoefficientGroup::cyclic(2));
    if minus_alpha != want {
        return Err(format!("BPGL at -α is {minus_alpha}, expected {want}"));
    }
    let minus_two = g(Bidegree::new(0, -2));
    if minus_two != CoefficientGroup::cyclic(2) {
        return Err(format!("BPGL at -2α is {minus_two}, expected ℤ/4"));
    }
    let w = Window::new(2, (0, 8), (-9, 0)).unwrap();
    let einf = e_infinity(&rd, Spectrum::Bpgl, &w, None).map_err(|e| e.to_string())?;
    let from_ass = resolve_towers(&einf.towers);
    for i in 1..=8u32 {
        let slot = Bidegree::new(i as i32 - 1, -(i as i32));
        let want = 2 + nu2(i);
        let slot_gamma = gamma(&rd, slot);
        if slot_gamma.torsion_exponents != [want] {
            return Err(format!(
                "slot i={i} at {slot}: Γ torsion {slot_gamma}, expected ℤ/2^{want}"
            ));
        }
        let tower = einf.towers.towers.get(&slot).and_then(|ts| {
            ts.iter()
                .find(|t| t.base_s == 0 && t.base.milnor == MilnorBasis::U && t.base.v.is_empty())
        });
        if tower.map(|t| t.height.to_string()) != Some(want.to_string()) {
            return Err(format!(
                "slot i={i}: u tower in E_inf is {tower:?}, expected height {want}"
            ));
        }
        if from_ass.get(&slot) != Some(&g(slot)) {
            return Err(format!(
                "slot i={i}: E_inf gives {:?}, formula gives {}",
                from_ass.get(&slot),
                g(slot)
            ));
        }
    }
    Ok("-α: ℤ₂ ⊕ ℤ/4, -2α: ℤ/4, slots i = 1..8 carry ℤ/2^(2+ν(i)) in Γ and in E_inf".into())
}

fn criterion_7() -> Check {
    let mut checked = 0;
    for q in [3u64, 5, 7, 9, 17] {
        let rd = rd(q);
        let w = Window::new(4, (-1, 6), (-8, 1)).unwrap();
        let einf = e_infinity(&rd, Spectrum::Bpgl0, &w, None).map_err(|e| e.to_string())?;
        let from_ass = resolve_towers(&einf.towers);
        for d in w.columns() {
            let want = gamma(&rd, d);
            let got = from_ass.get(&d).cloned().unwrap_or_default();
            for (name, value) in [
                ("E_inf", got),
                ("BPGL0", coefficient_group(&rd, SpectrumTag::Bpgl0, d)),
                ("HZ2", coefficient_group(&rd, SpectrumTag::Hz2, d)),
            ] {
                if value != want {
                    return Err(format!("q={q} at {d}: {name} gives {value}, Γ is {want}"));
                }
            }
            checked += 1;
        }
    }
    Ok(format!(
        "BPGL0 pipeline equals Γ in {checked} degrees (q = 3, 5, 7, 9, 17)"
    ))
}

fn criterion_8() -> Check {
    let mut words = 0usize;
    for q in [3u64, 5, 7, 9] {
        let rd = rd(q);
        for (n, w) in [
            (1, oracle_window()),
            (2, Window::new(6, (-2, 8), (-9, 3)).unwrap()),
            (3, Window::new(5, (-1, 9), (-10, 2)).unwrap()),
        ] {
            let bad = check_d_squared(&rd, n, &w);
            if let Some(b) = bad.first() {
                return Err(format!("q={q} n={n}: d² ≠ 0 on {}", b.name()));
            }
            words += motivic_core::cobar::complex_size(&rd, n, &w)
                .values()
                .sum::<usize>();
        }
    }
    let mut pages = 0;
    let mut differentials = 0;
    for q in [3u64, 5, 7, 9, 11] {
        let rd = rd(q);
        let w = Window::new(3, (0, 5), (-6, 0)).unwrap();
        for sp in Spectrum::ALL {
            for page in adams_pages(&rd, sp, &w, None).map_err(|e| e.to_string())? {
                let leibniz = check_leibniz(&page, &w);
                if let Some(f) = leibniz.first() {
                    return Err(format!("q={q} {sp} E_{}: Leibniz fails: {f}", page.r));
                }
                if let Some(d) = check_differential_shapes(&page).first() {
                    return Err(format!("q={q} {sp}: bad shape {d:?}"));
                }
                if let Some(a) = page.anomalies.first() {
                    return Err(format!("q={q} {sp} E_{}: {a}", page.r));
                }
                differentials += page.differentials.len();
                pages += 1;
            }
            let einf = e_infinity(&rd, sp, &w, None).map_err(|e| e.to_string())?;
            if let Some((a, b)) = einf.surviving_ambiguities.first() {
                return Err(format!(
                    "q={q} {sp}: ambiguous pair {} / {} survives",
                    a.name(),
                    b.name()
                ));
            }
        }
    }
    Ok(format!(
        "d² = 0 on {words} cobar words; Leibniz and shapes on {pages} pages ({differentials} differentials); no ambiguity survives"
    ))
}

fn criterion_9() -> Check {
    for (file, args) in common::CASES {
        let want =
            std::fs::read(common::golden_dir().join(file)).map_err(|e| format!("{file}: {e}"))?;
        for threads in ["1", "4", "1", "4"] {
            let argv = common::with_threads(args, threads);
            let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
            let out = common::motivic(&argv);
            if !out.status.success() {
                return Err(format!("{file}: exit {:?}", out.status.code()));
            }
            if out.stdout != want {
                return Err(format!(
                    "{file}: differs from golden with {threads} threads"
                ));
            }
        }
    }
    Ok(format!(
        "{} golden files byte-identical over 2 runs at 1 and 4 threads",
        common::CASES.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Milnor K-theory", criterion_1),
        ("cobar and closed form agree", criterion_2),
        ("E(n) stabilization", criterion_3),
        ("rho-Bockstein", criterion_4),
        ("kgl at q = 3", criterion_5),
        ("BPGL at q = 5", criterion_6),
        ("HZ2 consistency", criterion_7),
        ("property suites", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!(
                "criterion {}: PASS  {name} [tolerance exact, {secs:.2}s]: {detail}",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name} [tolerance exact, {secs:.2}s]: {detail}",
                    i + 1
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
