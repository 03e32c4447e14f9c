use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use motivic_core::{Bidegree, Window};

/// Motivic invariants of nondyadic p-adic fields from the residue order q.
#[derive(Parser, Debug, Clone)]
#[command(name = "motivic", version)]
pub struct Cli {
    /// Residue order q = p^m of the field, p odd.
    #[arg(long, global = true)]
    pub q: Option<u64>,

    /// Output format; `svg` is only available for `chart`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the document here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for the parallel stages (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Tsv,
    Json,
    Svg,
    Txt,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    /// Brute force through the cobar complex.
    Cobar,
    /// The closed-form answer.
    Closed,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssSpectrum {
    Bpgl,
    Kgl,
    Bpgl0,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffSpectrum {
    Bpgl,
    Kgl,
    Bpgl0,
    Mgl,
    Hz2,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartSpectrum {
    Hstar,
    Bpgl,
    Kgl,
    Bpgl0,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Basis and products of mod 2 Milnor K-theory.
    Milnor {
        /// Only this degree (0, 1 or 2).
        #[arg(long)]
        degree: Option<u32>,
        /// Print the multiplication table instead of the basis.
        #[arg(long)]
        products: bool,
    },
    /// Basis of motivic homology H_* = k^M_*[τ] on a window.
    Hstar(WindowArgs),
    /// Ext over E(n) on a window.
    Ext {
        /// Truncation level of E(n); defaults to the level where Ext stabilizes.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, value_enum, default_value = "cobar")]
        oracle: Oracle,
        /// Compute with both oracles and fail on any difference.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Pages of the motivic Adams spectral sequence.
    Ass {
        #[arg(long, value_enum)]
        spectrum: AssSpectrum,
        /// Page to print; defaults to E_∞.
        #[arg(long)]
        page: Option<u32>,
        /// Longest differential to run; defaults to a bound derived from the window.
        #[arg(long)]
        rmax: Option<u32>,
        /// Print v_0-towers and coefficient groups of E_∞ instead of classes.
        #[arg(long)]
        towers: bool,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Coefficient groups of a spectrum in one degree or over a window.
    Coeff {
        #[arg(long, value_enum)]
        spectrum: CoeffSpectrum,
        /// Degree `m,n` meaning m + nα.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_degree, conflicts_with = "window")]
        degree: Option<Bidegree>,
        /// Window `m_min:m_max,n_min:n_max`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_window_ranges)]
        window: Option<WindowRanges>,
    },
    /// 2-complete algebraic K-group in degree m.
    Kdeg {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// SVG chart of motivic homology or of an Adams spectral sequence page.
    Chart {
        #[arg(long, value_enum)]
        spectrum: ChartSpectrum,
        /// Page of the spectral sequence; defaults to E_∞.
        #[arg(long)]
        page: Option<u32>,
        #[arg(long)]
        rmax: Option<u32>,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct WindowArgs {
    /// Window `m_min:m_max,n_min:n_max` (stems for spectral sequence pages).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window_ranges, default_value = "-1:6,-8:2")]
    pub window: WindowRanges,
    /// Largest homological degree.
    #[arg(long, default_value_t = 4)]
    pub smax: u32,
}

impl WindowArgs {
    pub fn window(&self) -> motivic_core::Result<Window> {
        Window::new(self.smax, self.window.0, self.window.1)
    }
}

fn parse_int(s: &str) -> Result<i32, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("{s:?} is not an integer"))
}

/// `(m_min, m_max)` and `(n_min, n_max)` of a window.
pub type WindowRanges = ((i32, i32), (i32, i32));

/// Parses `m,n` into the degree `m + nα`.
pub fn parse_degree(s: &str) -> Result<Bidegree, String> {
    let (m, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `m,n`, got {s:?}"))?;
    Ok(Bidegree::new(parse_int(m)?, parse_int(n)?))
}

fn parse_range(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `lo:hi`, got {s:?}"))?;
    let (a, b) = (parse_int(a)?, parse_int(b)?);
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

/// Parses `m_min:m_max,n_min:n_max`.
pub fn parse_window_ranges(s: &str) -> Result<WindowRanges, String> {
    let (m, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `m_min:m_max,n_min:n_max`, got {s:?}"))?;
    Ok((parse_range(m)?, parse_range(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_degree("3,0"), Ok(Bidegree::new(3, 0)));
        assert_eq!(parse_degree("0,-2"), Ok(Bidegree::new(0, -2)));
        assert!(parse_degree("3").is_err());
        assert_eq!(parse_window_ranges("-1:6,-6:1"), Ok(((-1, 6), (-6, 1))));
        assert!(parse_window_ranges("3:1,0:0").is_err());
        assert!(parse_window_ranges("1:3").is_err());
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
