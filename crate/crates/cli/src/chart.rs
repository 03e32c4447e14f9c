//! SVG charts. The horizontal axis is the integer part `m` of a degree
//! `m + nα` and the vertical axis its `α` part `n`, increasing upwards.
//!
//! Motivic homology charts draw one dot per basis element. The Milnor
//! K-theory copy `{1; π, u; πu}` attached to each `τ^t` forms a diamond, and
//! τ-multiplication is drawn as arrows of slope -1.
//!
//! Spectral sequence charts use the Adams grading `m + nα - s`, suppressing
//! the homological degree. Classes in higher `s` are nudged up and to the
//! right so `v_0`-towers, which would otherwise sit on one point, fan out as
//! short segments; a tower leaving the computed range ends in an arrow.

use std::collections::BTreeMap;
use std::fmt::Write;

use motivic_core::adams::{RecordedDifferential, SSPage};
use motivic_core::closed_ext::ExtMonomial;
use motivic_core::{
    h_star_basis, Bidegree, HStarMonomial, MilnorBasis, ResidueData, Tridegree, Window,
};

const UNIT: f64 = 56.0;
const MARGIN: f64 = 64.0;
const DOT_RADIUS: f64 = 4.0;
const S_NUDGE: f64 = 0.07;

struct Canvas {
    window: Window,
    body: String,
}

impl Canvas {
    fn new(window: Window) -> Self {
        Canvas {
            window,
            body: String::new(),
        }
    }

    fn width(&self) -> f64 {
        2.0 * MARGIN + UNIT * (self.window.m_max - self.window.m_min + 1) as f64
    }

    fn height(&self) -> f64 {
        2.0 * MARGIN + UNIT * (self.window.n_max - self.window.n_min + 1) as f64
    }

    /// Pixel position of the degree `(x, y)`, allowing fractional offsets.
    fn at(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + UNIT * (x - self.window.m_min as f64 + 0.5),
            MARGIN + UNIT * (self.window.n_max as f64 - y + 0.5),
        )
    }

    fn grid(&mut self, title: &str, x_label: &str) {
        let (w, h) = (self.width(), self.height());
        let _ = writeln!(
            self.body,
            r##"<text x="{:.1}" y="{:.1}" font-size="16" text-anchor="middle">{}</text>"##,
            w / 2.0,
            MARGIN / 2.0,
            escape(title)
        );
        for m in self.window.m_min..=self.window.m_max {
            let (x, _) = self.at(m as f64, 0.0);
            let _ = writeln!(
                self.body,
                r##"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="#e4e4e4"/>"##,
                MARGIN,
                h - MARGIN
            );
            let _ = writeln!(
                self.body,
                r##"<text x="{x:.1}" y="{:.1}" font-size="11" text-anchor="middle">{m}</text>"##,
                h - MARGIN + 16.0
            );
        }
        for n in self.window.n_min..=self.window.n_max {
            let (_, y) = self.at(0.0, n as f64);
            let _ = writeln!(
                self.body,
                r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#e4e4e4"/>"##,
                MARGIN,
                w - MARGIN
            );
            let _ = writeln!(
                self.body,
                r##"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{n}α</text>"##,
                MARGIN - 6.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            self.body,
            r##"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"##,
            w / 2.0,
            h - MARGIN / 4.0,
            escape(x_label)
        );
    }

    fn line(&mut self, a: (f64, f64), b: (f64, f64), style: &str) {
        let _ = writeln!(
            self.body,
            r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" {style}/>"##,
            a.0, a.1, b.0, b.1
        );
    }

    fn dot(&mut self, p: (f64, f64), label: &str, fill: &str) {
        let _ = writeln!(
            self.body,
            r##"<circle cx="{:.1}" cy="{:.1}" r="{DOT_RADIUS}" fill="{fill}"><title>{}</title></circle>"##,
            p.0,
            p.1,
            escape(label)
        );
    }

    fn finish(self) -> String {
        let (w, h) = (self.width(), self.height());
        let mut out = String::new();
        let _ = writeln!(
            out,
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif">"##
        );
        out.push_str(concat!(
            r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto-start-reverse">"##,
            r##"<path d="M 0 0 L 10 5 L 0 10 z" fill="#555"/></marker></defs>"##,
            "\n"
        ));
        let _ = writeln!(
            out,
            r##"<rect width="{w:.0}" height="{h:.0}" fill="white"/>"##
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Horizontal offset of a Milnor symbol inside its diamond.
fn milnor_offset(k: MilnorBasis) -> f64 {
    match k {
        MilnorBasis::Pi => -0.18,
        MilnorBasis::U => 0.18,
        _ => 0.0,
    }
}

fn hstar_position(c: &Canvas, x: &HStarMonomial) -> (f64, f64) {
    let d = x.bidegree();
    c.at(d.m as f64 + milnor_offset(x.milnor), d.n as f64)
}

/// Chart of `H_*` on a window. Returns the document and the number of dots.
pub fn hstar_chart(rd: &ResidueData, window: &Window) -> (String, usize) {
    let mut c = Canvas::new(*window);
    c.grid(
        &format!("Mod 2 motivic homology, q = {}", rd.q),
        "m (horizontal) and nα (vertical)",
    );
    let classes: Vec<HStarMonomial> = window.columns().flat_map(|d| h_star_basis(rd, d)).collect();
    let inside = |x: &HStarMonomial| window.contains_bidegree(x.bidegree());
    // Diamond edges join 1 to π and u, and those to πu.
    let edges = [
        (MilnorBasis::One, MilnorBasis::Pi),
        (MilnorBasis::One, MilnorBasis::U),
        (MilnorBasis::Pi, MilnorBasis::PiU),
        (MilnorBasis::U, MilnorBasis::PiU),
    ];
    for x in classes.iter().filter(|x| x.milnor == MilnorBasis::One) {
        for (a, b) in edges {
            let (xa, xb) = (
                HStarMonomial::new(x.tau_exp, a),
                HStarMonomial::new(x.tau_exp, b),
            );
            if inside(&xa) && inside(&xb) {
                let (pa, pb) = (hstar_position(&c, &xa), hstar_position(&c, &xb));
                c.line(pa, pb, r##"stroke="#9bb7d4" stroke-width="1.5""##);
            }
        }
    }
    for x in &classes {
        let y = HStarMonomial::new(x.tau_exp + 1, x.milnor);
        if inside(&y) {
            let (a, b) = (hstar_position(&c, x), hstar_position(&c, &y));
            let shrink = |p: (f64, f64), q: (f64, f64)| {
                let (dx, dy) = (q.0 - p.0, q.1 - p.1);
                let len = (dx * dx + dy * dy).sqrt();
                let k = (DOT_RADIUS + 2.0) / len;
                ((p.0 + dx * k, p.1 + dy * k), (q.0 - dx * k, q.1 - dy * k))
            };
            let (a, b) = shrink(a, b);
            c.line(
                a,
                b,
                r##"stroke="#555" stroke-width="1" marker-end="url(#arrow)""##,
            );
        }
    }
    for x in &classes {
        let p = hstar_position(&c, x);
        c.dot(p, &x.name(), "black");
    }
    (c.finish(), classes.len())
}

/// Chart of a spectral sequence page on a window (stems in `m`). `d_r` of the
/// page, if given, is drawn in red. Returns the document and the number of
/// dots.
pub fn page_chart(
    page: &SSPage,
    window: &Window,
    title: &str,
    page_differentials: &[RecordedDifferential],
) -> (String, usize) {
    let mut c = Canvas::new(*window);
    c.grid(title, "stem m - s (horizontal) and nα (vertical)");
    let mut positions: BTreeMap<(Tridegree, String), (f64, f64)> = BTreeMap::new();
    let mut classes: Vec<(Tridegree, ExtMonomial, (f64, f64))> = Vec::new();
    for stem in window.m_min..=window.m_max {
        for n in window.n_min..=window.n_max {
            for s in 0..=window.s_max {
                let t = Tridegree::new(s, stem + s as i32, n);
                let here = page.classes(t);
                let count = here.len();
                for (i, x) in here.into_iter().enumerate() {
                    let spread = (i as f64 - (count as f64 - 1.0) / 2.0) * 0.2;
                    let p = c.at(
                        stem as f64 + spread + S_NUDGE * s as f64,
                        n as f64 + S_NUDGE * s as f64,
                    );
                    positions.insert((t, x.name()), p);
                    classes.push((t, x, p));
                }
            }
        }
    }
    let v0 = ExtMonomial::v_gen(0);
    for (t, x, p) in &classes {
        let Some(y) = x.product(&page.rd, &v0) else {
            continue;
        };
        if !page.is_nonzero_class(&y) {
            continue;
        }
        let ty = Tridegree::new(t.s + 1, t.m + 1, t.n);
        match positions.get(&(ty, y.name())) {
            Some(&q) => c.line(*p, q, r##"stroke="#333" stroke-width="1.2""##),
            None => {
                let q = (p.0 + UNIT * S_NUDGE * 2.0, p.1 - UNIT * S_NUDGE * 2.0);
                c.line(
                    *p,
                    q,
                    r##"stroke="#333" stroke-width="1.2" marker-end="url(#arrow)""##,
                );
            }
        }
    }
    for d in page_differentials {
        let (Some(&a), Some(&b)) = (
            positions.get(&(d.source, d.source_name.clone())),
            positions.get(&(d.target, d.target_name.clone())),
        ) else {
            continue;
        };
        c.line(
            a,
            b,
            r##"stroke="#c0392b" stroke-width="1.2" marker-end="url(#arrow)""##,
        );
    }
    let count = classes.len();
    for (_, x, p) in classes {
        let fill = if x.milnor == MilnorBasis::One || x.milnor == MilnorBasis::Pi {
            "black"
        } else {
            "#2c6fbb"
        };
        c.dot(p, &x.name(), fill);
    }
    (c.finish(), count)
}

/// Number of class dots in a chart document.
pub fn count_dots(svg: &str) -> usize {
    svg.matches("<circle").count()
}

/// Motivic degree of an `H_*` chart point, for tests.
pub fn degree_of(x: &HStarMonomial) -> Bidegree {
    x.bidegree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use motivic_core::adams::adams_pages;
    use motivic_core::{residue_data, Spectrum};

    #[test]
    fn hstar_dot_count_matches_basis() {
        let rd = residue_data(5).unwrap();
        let w = Window::new(0, (-1, 6), (-6, 1)).unwrap();
        let (svg, dots) = hstar_chart(&rd, &w);
        let want: usize = w.columns().map(|d| h_star_basis(&rd, d).len()).sum();
        assert_eq!(dots, want);
        assert_eq!(count_dots(&svg), want);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("marker-end"));
    }

    #[test]
    fn page_dot_count_matches_dimensions() {
        let rd = residue_data(3).unwrap();
        let w = Window::new(4, (0, 5), (-7, 1)).unwrap();
        for page in adams_pages(&rd, Spectrum::Kgl, &w, None).unwrap() {
            let (svg, dots) = page_chart(&page, &w, "test", &[]);
            let want: usize = (0..=5)
                .flat_map(|a| {
                    (-7..=1)
                        .flat_map(move |n| (0..=4).map(move |s| Tridegree::new(s, a + s as i32, n)))
                })
                .map(|t| page.dim(t))
                .sum();
            assert_eq!(dots, want);
            assert_eq!(count_dots(&svg), want);
        }
    }
}
