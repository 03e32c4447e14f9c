//! Dispatch of parsed commands to the core library and rendering of the
//! resulting tables.

use std::collections::BTreeMap;
use std::fmt::Write;

use motivic_core::adams::{adams_pages, computation_region, SSPage};
use motivic_core::closed_ext::{closed_form_basis, closed_form_dimensions};
use motivic_core::{
    algebraic_k_degree, coefficient_group, e_infinity, ext_dimensions, h_star_basis, milnor_basis,
    residue_data, truncation_level, Bidegree, CobarConfig, CoefficientGroup, Error, MilnorBasis,
    ResidueData, Spectrum, SpectrumTag, Tridegree, Window,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{
    AssSpectrum, ChartSpectrum, Cli, CoeffSpectrum, Command, Format, Oracle, WindowRanges,
};
use crate::chart;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status when `--verify` finds the two oracles disagreeing.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit status for malformed or unsupported input.
pub const EXIT_INVALID: i32 = 2;
/// Exit status when a window or memory budget is rejected.
pub const EXIT_REJECTED: i32 = 3;

/// What a command produced: the document for stdout or `--out`, messages
/// for stderr, and the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub document: String,
    pub diagnostics: Vec<String>,
    pub exit: i32,
}

impl Outcome {
    fn ok(document: String) -> Self {
        Outcome {
            document,
            diagnostics: Vec::new(),
            exit: EXIT_OK,
        }
    }

    fn failure(exit: i32, message: String) -> Self {
        Outcome {
            document: String::new(),
            diagnostics: vec![message],
            exit,
        }
    }
}

/// Exit status for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::EmptyWindow | Error::BudgetExceeded { .. } | Error::PageBound { .. } => {
            EXIT_REJECTED
        }
        Error::InvalidResidueOrder { .. }
        | Error::SplitCase { .. }
        | Error::NegativeKDegree(_)
        | Error::InvalidInput(_) => EXIT_INVALID,
    }
}

/// Runs a parsed command line, on a dedicated thread pool when `--threads`
/// is given.
pub fn run(cli: &Cli) -> Outcome {
    match cli.threads {
        Some(0) => Outcome::failure(EXIT_INVALID, "--threads must be positive".into()),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Outcome::failure(EXIT_INVALID, format!("cannot start thread pool: {e}")),
        },
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let result = (|| -> Result<Outcome, Error> {
        let q = cli
            .q
            .ok_or_else(|| Error::InvalidInput("--q is required".into()))?;
        let rd = residue_data(q)?;
        let format = cli.format.unwrap_or(match cli.command {
            Command::Chart { .. } => Format::Svg,
            _ => Format::Tsv,
        });
        let is_chart = matches!(cli.command, Command::Chart { .. });
        if (format == Format::Svg) != is_chart {
            return Err(Error::InvalidInput(if is_chart {
                "chart only writes svg".into()
            } else {
                "svg output is only available for chart".into()
            }));
        }
        match &cli.command {
            Command::Milnor { degree, products } => milnor(&rd, *degree, *products, format),
            Command::Hstar(w) => hstar(&rd, &w.window()?, format),
            Command::Ext {
                n,
                oracle,
                verify,
                window,
            } => ext(&rd, *n, *oracle, *verify, &window.window()?, format),
            Command::Ass {
                spectrum,
                page,
                rmax,
                towers,
                window,
            } => ass(
                &rd,
                ass_spectrum(*spectrum),
                *page,
                *rmax,
                *towers,
                &window.window()?,
                format,
            ),
            Command::Coeff {
                spectrum,
                degree,
                window,
            } => coeff(&rd, *spectrum, *degree, *window, format),
            Command::Kdeg { m } => kdeg(&rd, *m, format),
            Command::Chart {
                spectrum,
                page,
                rmax,
                window,
            } => chart_command(&rd, *spectrum, *page, *rmax, &window.window()?),
        }
    })();
    result.unwrap_or_else(|e| Outcome::failure(exit_code(&e), format!("error: {e}")))
}

fn ass_spectrum(s: AssSpectrum) -> Spectrum {
    match s {
        AssSpectrum::Bpgl => Spectrum::Bpgl,
        AssSpectrum::Kgl => Spectrum::Kgl,
        AssSpectrum::Bpgl0 => Spectrum::Bpgl0,
    }
}

fn coeff_tag(s: CoeffSpectrum) -> SpectrumTag {
    match s {
        CoeffSpectrum::Bpgl => SpectrumTag::Bpgl,
        CoeffSpectrum::Kgl => SpectrumTag::Kgl,
        CoeffSpectrum::Bpgl0 => SpectrumTag::Bpgl0,
        CoeffSpectrum::Mgl => SpectrumTag::Mgl,
        CoeffSpectrum::Hz2 => SpectrumTag::Hz2,
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// A table rendered as TSV (with a header row) or as aligned plain text.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn tsv(&self) -> String {
        let mut out = self.header.join("\t");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    fn txt(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: Vec<&str>| {
            let mut s = String::new();
            for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
                if i + 1 == cells.len() {
                    s.push_str(cell);
                } else {
                    let _ = write!(s, "{cell:<w$}  ", w = *w);
                }
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = line(self.header.clone());
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        out
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Txt => self.txt(),
            _ => self.tsv(),
        }
    }
}

fn list(names: &[String]) -> String {
    if names.is_empty() {
        "-".into()
    } else {
        names.join(", ")
    }
}

fn milnor(
    rd: &ResidueData,
    degree: Option<u32>,
    products: bool,
    format: Format,
) -> Result<Outcome, Error> {
    if let Some(d) = degree.filter(|d| *d > 2) {
        return Err(Error::InvalidInput(format!(
            "Milnor K-theory of a local field vanishes above degree 2 (asked for {d})"
        )));
    }
    let basis: Vec<MilnorBasis> = (0..=2)
        .filter(|d| degree.is_none_or(|want| want == *d))
        .flat_map(|d| milnor_basis(rd, d))
        .collect();
    if products {
        let rows: Vec<(MilnorBasis, MilnorBasis, Option<MilnorBasis>)> = basis
            .iter()
            .flat_map(|&x| MilnorBasis::ALL.map(|y| (x, y, x.mul(rd, y))))
            .collect();
        let doc = match format {
            Format::Json => to_json(&json!({
                "q": rd.q,
                "products": rows.iter().map(|(x, y, z)| json!({
                    "x": x.name(),
                    "y": y.name(),
                    "product": z.map_or("0", |z| z.name()),
                })).collect::<Vec<_>>(),
            })),
            _ => {
                let mut t = Table::new(vec!["x", "y", "product"]);
                for (x, y, z) in rows {
                    t.push(vec![
                        x.name().into(),
                        y.name().into(),
                        z.map_or("0", |z| z.name()).into(),
                    ]);
                }
                t.render(format)
            }
        };
        return Ok(Outcome::ok(doc));
    }
    let doc = match format {
        Format::Json => to_json(&json!({
            "q": rd.q,
            "k": rd.k,
            "rho": rd.rho().map_or("0", |r| r.name()),
            "basis": basis.iter().map(|b| json!({"degree": b.degree(), "name": b.name()})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut t = Table::new(vec!["degree", "basis"]);
            for b in basis {
                t.push(vec![b.degree().to_string(), b.name().into()]);
            }
            t.render(format)
        }
    };
    Ok(Outcome::ok(doc))
}

fn hstar(rd: &ResidueData, window: &Window, format: Format) -> Result<Outcome, Error> {
    let rows: Vec<(Bidegree, Vec<String>)> = window
        .columns()
        .map(|d| {
            (
                d,
                h_star_basis(rd, d)
                    .iter()
                    .map(|x| x.name())
                    .collect::<Vec<_>>(),
            )
        })
        .filter(|(_, names)| !names.is_empty())
        .collect();
    let doc = match format {
        Format::Json => to_json(&json!({
            "q": rd.q,
            "entries": rows.iter().map(|(d, names)| json!({
                "m": d.m, "n": d.n, "dim": names.len(), "basis": names,
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut t = Table::new(vec!["m", "n", "dim", "basis"]);
            for (d, names) in rows {
                t.push(vec![
                    d.m.to_string(),
                    d.n.to_string(),
                    names.len().to_string(),
                    list(&names),
                ]);
            }
            t.render(format)
        }
    };
    Ok(Outcome::ok(doc))
}

/// One row of a per-tridegree table.
struct ClassRow {
    t: Tridegree,
    names: Vec<String>,
}

fn class_table(
    rows: &[ClassRow],
    first: &'static str,
    format: Format,
    extra: serde_json::Value,
) -> String {
    match format {
        Format::Json => {
            let mut v = extra;
            v["entries"] = rows
                .iter()
                .map(|r| json!({"s": r.t.s, first: r.t.m, "n": r.t.n, "dim": r.names.len(), "classes": r.names}))
                .collect();
            to_json(&v)
        }
        _ => {
            let mut t = Table::new(vec!["s", first, "n", "dim", "classes"]);
            for r in rows {
                t.push(vec![
                    r.t.s.to_string(),
                    r.t.m.to_string(),
                    r.t.n.to_string(),
                    r.names.len().to_string(),
                    list(&r.names),
                ]);
            }
            t.render(format)
        }
    }
}

fn ext(
    rd: &ResidueData,
    n: Option<u32>,
    oracle: Oracle,
    verify: bool,
    window: &Window,
    format: Format,
) -> Result<Outcome, Error> {
    let n = match n {
        Some(n) => n,
        None => truncation_level(window)?,
    };
    let config = CobarConfig::from_env()?;
    let closed_rows = || -> Vec<ClassRow> {
        window
            .tridegrees()
            .map(|t| ClassRow {
                t,
                names: closed_form_basis(rd, n, t)
                    .into_iter()
                    .map(|e| e.monomial.name())
                    .collect(),
            })
            .filter(|r| !r.names.is_empty())
            .collect()
    };
    let mut diagnostics = Vec::new();
    let mut exit = EXIT_OK;
    let rows = match oracle {
        Oracle::Closed => closed_rows(),
        Oracle::Cobar => {
            let table = ext_dimensions(rd, n, window, &config)?;
            if verify {
                let closed = closed_form_dimensions(rd, n, window);
                let cobar = table.dimensions();
                for (t, c) in &cobar {
                    let want = closed.get(t).copied().unwrap_or(0);
                    if *c != want {
                        diagnostics.push(format!("mismatch at {t}: cobar {c}, closed form {want}"));
                    }
                }
                if diagnostics.is_empty() {
                    diagnostics.push(format!(
                        "verified: cobar and closed form agree on {} tridegrees",
                        cobar.len()
                    ));
                } else {
                    exit = EXIT_MISMATCH;
                }
            }
            table
                .entries
                .into_iter()
                .filter(|(_, e)| e.dim > 0)
                .map(|(t, e)| ClassRow { t, names: e.names })
                .collect()
        }
    };
    if verify && oracle == Oracle::Closed {
        return Err(Error::InvalidInput(
            "--verify runs the cobar oracle; drop --oracle closed".into(),
        ));
    }
    let extra = json!({"q": rd.q, "level": n, "oracle": match oracle { Oracle::Cobar => "cobar", Oracle::Closed => "closed" }});
    Ok(Outcome {
        document: class_table(&rows, "m", format, extra),
        diagnostics,
        exit,
    })
}

fn page_rows(page: &SSPage, window: &Window) -> Vec<ClassRow> {
    let mut rows = Vec::new();
    for s in 0..=window.s_max {
        for stem in window.m_min..=window.m_max {
            for n in window.n_min..=window.n_max {
                let t = Tridegree::new(s, stem + s as i32, n);
                let names: Vec<String> = page.classes(t).iter().map(|x| x.name()).collect();
                if !names.is_empty() {
                    rows.push(ClassRow {
                        t: Tridegree::new(s, stem, n),
                        names,
                    });
                }
            }
        }
    }
    rows
}

/// Pages `E_2 … E_∞` and the index of the requested one.
fn select_page(
    rd: &ResidueData,
    spectrum: Spectrum,
    page: Option<u32>,
    rmax: Option<u32>,
    window: &Window,
) -> Result<(Vec<SSPage>, usize), Error> {
    let pages = adams_pages(rd, spectrum, window, rmax)?;
    let last = pages.len() - 1;
    let index = match page {
        None => last,
        Some(r) if r >= 2 && (r - 2) as usize <= last => (r - 2) as usize,
        Some(r) => {
            return Err(Error::InvalidInput(format!(
                "page {r} is outside E_2..E_{}",
                pages[last].r
            )))
        }
    };
    Ok((pages, index))
}

fn ass(
    rd: &ResidueData,
    spectrum: Spectrum,
    page: Option<u32>,
    rmax: Option<u32>,
    towers: bool,
    window: &Window,
    format: Format,
) -> Result<Outcome, Error> {
    if towers {
        if page.is_some() {
            return Err(Error::InvalidInput(
                "--towers describes E_∞; drop --page".into(),
            ));
        }
        return ass_towers(rd, spectrum, rmax, window, format);
    }
    let (pages, index) = select_page(rd, spectrum, page, rmax, window)?;
    let current = &pages[index];
    let region = computation_region(window, pages.last().unwrap().r - 1);
    let rows = page_rows(current, window);
    // d_r on E_r is recorded on the following page.
    let diffs: Vec<_> = pages
        .get(index + 1)
        .map(|next| {
            next.differentials
                .iter()
                .filter(|d| d.r == current.r)
                .filter(|d| {
                    let a = d.source.adams();
                    window.contains_bidegree(Bidegree::new(a.m, d.source.n))
                        && d.source.s <= window.s_max
                })
                .cloned()
                .collect()
        })
        .unwrap_or_default();
    let mut diagnostics: Vec<String> = current.anomalies.clone();
    if region.s_max < window.s_max {
        diagnostics.push("computation region is smaller than the window".into());
    }
    let is_last = index + 1 == pages.len();
    let page_name = if is_last {
        "inf".to_string()
    } else {
        current.r.to_string()
    };
    let doc = match format {
        Format::Json => {
            let extra = json!({
                "q": rd.q,
                "spectrum": spectrum.name(),
                "page": page_name,
                "differentials": diffs.iter().map(|d| json!({
                    "r": d.r,
                    "source": d.source_name,
                    "source_s": d.source.s,
                    "source_stem": d.source.adams().m,
                    "n": d.source.n,
                    "target": d.target_name,
                })).collect::<Vec<_>>(),
            });
            class_table(&rows, "stem", format, extra)
        }
        _ => {
            let mut out = class_table(&rows, "stem", format, serde_json::Value::Null);
            if !diffs.is_empty() {
                out.push('\n');
                let mut t = Table::new(vec!["r", "s", "stem", "n", "source", "target"]);
                for d in &diffs {
                    t.push(vec![
                        d.r.to_string(),
                        d.source.s.to_string(),
                        d.source.adams().m.to_string(),
                        d.source.n.to_string(),
                        d.source_name.clone(),
                        d.target_name.clone(),
                    ]);
                }
                out.push_str(&t.render(format));
            }
            out
        }
    };
    Ok(Outcome {
        document: doc,
        diagnostics,
        exit: EXIT_OK,
    })
}

fn ass_towers(
    rd: &ResidueData,
    spectrum: Spectrum,
    rmax: Option<u32>,
    window: &Window,
    format: Format,
) -> Result<Outcome, Error> {
    let einf = e_infinity(rd, spectrum, window, rmax)?;
    let groups: BTreeMap<Bidegree, CoefficientGroup> = motivic_core::resolve_towers(&einf.towers)
        .into_iter()
        .filter(|(_, g)| !g.is_trivial())
        .collect();
    let mut diagnostics: Vec<String> = einf
        .gamma_prime_mismatches
        .iter()
        .map(|m| format!("E_inf disagrees with the expected answer {m}"))
        .collect();
    for (a, b) in &einf.surviving_ambiguities {
        diagnostics.push(format!(
            "ambiguous pair survives: {} and {}",
            a.name(),
            b.name()
        ));
    }
    diagnostics.extend(einf.page.anomalies.iter().cloned());
    let describe = |d: &Bidegree| -> Vec<String> {
        einf.towers.towers[d]
            .iter()
            .map(|t| format!("{}@{}:{}", t.base.name(), t.base_s, t.height))
            .collect()
    };
    let doc = match format {
        Format::Json => to_json(&json!({
            "q": rd.q,
            "spectrum": spectrum.name(),
            "r_max": einf.r_max,
            "entries": groups.iter().map(|(d, g)| json!({
                "stem": d.m,
                "n": d.n,
                "group": g,
                "towers": einf.towers.towers[d].iter().map(|t| json!({
                    "base": t.base.name(),
                    "s": t.base_s,
                    "height": t.height.to_string(),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })),
        _ => {
            let mut t = Table::new(vec!["stem", "n", "group", "towers"]);
            for (d, g) in &groups {
                t.push(vec![
                    d.m.to_string(),
                    d.n.to_string(),
                    g.to_string(),
                    describe(d).join("; "),
                ]);
            }
            t.render(format)
        }
    };
    Ok(Outcome {
        document: doc,
        diagnostics,
        exit: EXIT_OK,
    })
}

fn group_fields(g: &CoefficientGroup) -> [String; 3] {
    let torsion: Vec<String> = g.torsion_exponents.iter().map(u32::to_string).collect();
    [g.free_rank.to_string(), torsion.join(","), g.to_string()]
}

fn coeff(
    rd: &ResidueData,
    spectrum: CoeffSpectrum,
    degree: Option<Bidegree>,
    window: Option<WindowRanges>,
    format: Format,
) -> Result<Outcome, Error> {
    let tag = coeff_tag(spectrum);
    if let Some(d) = degree {
        let g = coefficient_group(rd, tag, d);
        let doc = match format {
            Format::Json => to_json(&g),
            Format::Txt => format!("{g}\n"),
            _ => {
                let mut t = Table::new(vec!["m", "n", "free_rank", "torsion", "group"]);
                let [f, tor, name] = group_fields(&g);
                t.push(vec![d.m.to_string(), d.n.to_string(), f, tor, name]);
                t.tsv()
            }
        };
        return Ok(Outcome::ok(doc));
    }
    let Some((mr, nr)) = window else {
        return Err(Error::InvalidInput(
            "coeff needs --degree or --window".into(),
        ));
    };
    let w = Window::new(0, mr, nr)?;
    let groups: BTreeMap<Bidegree, CoefficientGroup> = w
        .columns()
        .map(|d| (d, coefficient_group(rd, tag, d)))
        .filter(|(_, g)| !g.is_trivial())
        .collect();
    let doc = match format {
        Format::Json => to_json(&json!({
            "q": rd.q,
            "spectrum": tag.name(),
            "entries": groups.iter().map(|(d, g)| json!({"m": d.m, "n": d.n, "group": g})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut t = Table::new(vec!["m", "n", "free_rank", "torsion", "group"]);
            for (d, g) in &groups {
                let [f, tor, name] = group_fields(g);
                t.push(vec![d.m.to_string(), d.n.to_string(), f, tor, name]);
            }
            t.render(format)
        }
    };
    Ok(Outcome::ok(doc))
}

fn kdeg(rd: &ResidueData, m: i64, format: Format) -> Result<Outcome, Error> {
    let g = algebraic_k_degree(rd, m)?;
    let doc = match format {
        Format::Json => to_json(&g),
        Format::Txt => format!("{g}\n"),
        _ => {
            let mut t = Table::new(vec!["m", "free_rank", "torsion", "group"]);
            let [f, tor, name] = group_fields(&g);
            t.push(vec![m.to_string(), f, tor, name]);
            t.tsv()
        }
    };
    Ok(Outcome::ok(doc))
}

fn chart_command(
    rd: &ResidueData,
    spectrum: ChartSpectrum,
    page: Option<u32>,
    rmax: Option<u32>,
    window: &Window,
) -> Result<Outcome, Error> {
    let spectrum = match spectrum {
        ChartSpectrum::Hstar => {
            if page.is_some() || rmax.is_some() {
                return Err(Error::InvalidInput(
                    "--page and --rmax apply to spectral sequence charts".into(),
                ));
            }
            let (svg, _) = chart::hstar_chart(rd, window);
            return Ok(Outcome::ok(svg));
        }
        ChartSpectrum::Bpgl => Spectrum::Bpgl,
        ChartSpectrum::Kgl => Spectrum::Kgl,
        ChartSpectrum::Bpgl0 => Spectrum::Bpgl0,
    };
    let (pages, index) = select_page(rd, spectrum, page, rmax, window)?;
    let current = &pages[index];
    let is_last = index + 1 == pages.len();
    let title = if is_last {
        format!(
            "E_∞ of the Adams spectral sequence for {}, q = {}",
            spectrum.name(),
            rd.q
        )
    } else {
        format!(
            "E_{} of the Adams spectral sequence for {}, q = {}",
            current.r,
            spectrum.name(),
            rd.q
        )
    };
    let diffs: Vec<_> = pages
        .get(index + 1)
        .map(|next| {
            next.differentials
                .iter()
                .filter(|d| d.r == current.r)
                .cloned()
                .collect()
        })
        .unwrap_or_default();
    let (svg, _) = chart::page_chart(current, window, &title, &diffs);
    Ok(Outcome::ok(svg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn run_args(args: &[&str]) -> Outcome {
        let mut full = vec!["motivic"];
        full.extend_from_slice(args);
        run(&Cli::try_parse_from(full).unwrap())
    }

    #[test]
    fn kgl_degree_three_as_json() {
        let o = run_args(&[
            "--q",
            "3",
            "coeff",
            "--spectrum",
            "kgl",
            "--degree",
            "3,0",
            "--format",
            "json",
        ]);
        assert_eq!(o.exit, EXIT_OK);
        assert_eq!(o.document.trim(), r#"{"free_rank":0,"torsion":[2]}"#);
    }

    #[test]
    fn milnor_degree_two_lists_piu() {
        let o = run_args(&["--q", "5", "milnor", "--degree", "2"]);
        assert_eq!(o.exit, EXIT_OK);
        assert!(
            o.document
                .lines()
                .any(|l| l.split('\t').any(|c| c == "piu")),
            "{}",
            o.document
        );
    }

    #[test]
    fn error_statuses() {
        assert_eq!(run_args(&["--q", "4", "milnor"]).exit, EXIT_INVALID);
        assert_eq!(run_args(&["milnor"]).exit, EXIT_INVALID);
        assert_eq!(
            run_args(&["--q", "3", "kdeg", "--m", "-1"]).exit,
            EXIT_INVALID
        );
        assert_eq!(
            run_args(&["--q", "3", "hstar", "--format", "svg"]).exit,
            EXIT_INVALID
        );
        assert_eq!(
            run_args(&["--q", "3", "ass", "--spectrum", "kgl", "--rmax", "1"]).exit,
            EXIT_REJECTED
        );
    }

    #[test]
    fn verify_agrees() {
        let o = run_args(&[
            "--q",
            "3",
            "ext",
            "--n",
            "1",
            "--verify",
            "--window",
            "-1:4,-5:1",
            "--smax",
            "3",
        ]);
        assert_eq!(o.exit, EXIT_OK, "{:?}", o.diagnostics);
    }
}
