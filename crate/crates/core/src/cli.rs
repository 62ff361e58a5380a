//! `dualbern` command line: matrices, convergence tables, operator reports
//! and SVG plots with CSV sidecars.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::bernstein::{xi_nodes, BPoly, BernsteinError, Interval};
use crate::operators::{
    bernstein_like_report, quasi_interpolant_report, BuiltinFn, GridOptions, OperatorError,
    Smoothness,
};
use crate::ratmat::{Mat, MatError};
use crate::subspace::{
    dual_basis, make_selection, verify_duality, DualBasis, Embedding, EmbeddingKind, SelectionMap,
    SubspaceError,
};
use crate::symmetric::{convergence_table_with_grid, write_convergence_csv, SUP_GRID};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

/// Float formatting for CSV and SVG data: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{:.16e}", x)
}

#[derive(Debug, Parser)]
#[command(
    name = "dualbern",
    version,
    about = "Dual bases for polynomial subspaces in Bernstein form"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree elevation matrix E with B^m = B^n E
    Elevate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dual basis transform A = E(s,:)^{-1}
    DualBasis {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long, value_enum, default_value_t = BasisArg::Bernstein)]
        basis: BasisArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Distance of the symmetric dual bases to the Lagrange basis, k = 1..K
    Convergence {
        #[arg(long)]
        m: usize,
        /// largest k
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        grid: GridArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// SVG plot of the dual basis or of a control polygon
    Plot {
        #[arg(value_enum)]
        kind: PlotKind,
        #[command(flatten)]
        config: ConfigArgs,
        /// coefficients alpha for `polygon`, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<f64>>,
        #[command(flatten)]
        grid: GridArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Error report for Q_s (quasi) or D_m (bernop) on a built-in function
    Operator {
        #[arg(value_enum)]
        which: OperatorKind,
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long = "fn")]
        fname: String,
        #[arg(long, value_enum, default_value_t = SmoothnessArg::C0)]
        smoothness: SmoothnessArg,
        #[command(flatten)]
        grid: GridArg,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_delimiter = ',', conflicts_with = "symmetric")]
    pub selection: Option<Vec<usize>>,
    /// s(i) = i k with n = m k
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub b: f64,
}

#[derive(Debug, Args)]
pub struct GridArg {
    /// number of sample points
    #[arg(long, env = "DUALBERN_GRID")]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Bernstein,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotKind {
    Basis,
    Polygon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorKind {
    Quasi,
    Bernop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmoothnessArg {
    C0,
    C1,
    C2,
}

impl From<SmoothnessArg> for Smoothness {
    fn from(s: SmoothnessArg) -> Self {
        match s {
            SmoothnessArg::C0 => Smoothness::C0,
            SmoothnessArg::C1 => Smoothness::C1,
            SmoothnessArg::C2 => Smoothness::C2,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Bernstein(#[from] BernsteinError),
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    fn is_singular(&self) -> bool {
        matches!(
            self,
            CliError::Subspace(SubspaceError::Singular)
                | CliError::Operator(OperatorError::Subspace(SubspaceError::Singular))
                | CliError::Matrix(MatError::Singular { .. })
        )
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            _ if self.is_singular() => EXIT_SINGULAR,
            CliError::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            _ if self.is_singular() => "singular",
            CliError::Io(_) => "io",
            CliError::Usage(_) | CliError::Operator(OperatorError::UnknownFunction(_)) => "usage",
            _ => "precondition",
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": self.kind(), "message": self.to_string() })
    }
}

/// Parses `std::env::args`, runs the command and returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Elevate { m, n, output } => cmd_elevate(*m, *n, output),
        Command::DualBasis {
            config,
            basis,
            output,
        } => cmd_dual_basis(config, *basis, output),
        Command::Convergence { m, k, grid, output } => cmd_convergence(*m, *k, grid.size(), output),
        Command::Plot {
            kind,
            config,
            coeffs,
            grid,
            output,
        } => cmd_plot(*kind, config, coeffs.as_deref(), grid.size(), output),
        Command::Operator {
            which,
            config,
            fname,
            smoothness,
            grid,
            output,
        } => cmd_operator(
            *which,
            config,
            fname,
            (*smoothness).into(),
            grid.size(),
            output,
        ),
    }
}

impl GridArg {
    fn size(&self) -> usize {
        self.grid.unwrap_or(SUP_GRID)
    }
}

impl ConfigArgs {
    pub fn interval(&self) -> Result<Interval, CliError> {
        Ok(Interval::new(self.a, self.b)?)
    }

    /// Resolves `n` and the selection; `--symmetric` needs `k` or `n = m k`.
    pub fn selection(&self) -> Result<SelectionMap, CliError> {
        let m = self.m;
        if self.symmetric {
            let k = match (self.k, self.n) {
                (Some(k), Some(n)) if n != m * k => {
                    return Err(CliError::Usage(format!(
                        "--symmetric needs n = m k, got n = {n}, m = {m}, k = {k}"
                    )))
                }
                (Some(k), _) => k,
                (None, Some(n)) if m > 0 && n % m == 0 => n / m,
                _ => {
                    return Err(CliError::Usage(
                        "--symmetric needs --k, or --n divisible by --m".into(),
                    ))
                }
            };
            if m == 0 || k == 0 {
                return Err(CliError::Usage(
                    "--symmetric needs m >= 1 and k >= 1".into(),
                ));
            }
            return Ok(SelectionMap::symmetric(m, k)?);
        }
        let n = self
            .n
            .ok_or_else(|| CliError::Usage("--n is required without --symmetric".into()))?;
        let indices = match &self.selection {
            Some(s) => s.clone(),
            None => (0..=m).collect(),
        };
        Ok(make_selection(m, n, &indices)?)
    }

    pub fn dual_basis(&self, basis: BasisArg) -> Result<DualBasis, CliError> {
        let s = self.selection()?;
        let kind = match basis {
            BasisArg::Bernstein => EmbeddingKind::Bernstein,
            BasisArg::Power => EmbeddingKind::Power,
        };
        let emb = Embedding::new(kind, s.m(), s.n())?;
        Ok(dual_basis(&emb, &s)?.with_interval(self.interval()?))
    }
}

fn require_format(output: &OutputArgs, allowed: &[Format]) -> Result<Format, CliError> {
    match output.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(CliError::Usage(format!(
            "format {:?} not supported by this command",
            f
        ))),
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serializable");
    s.push('\n');
    s
}

pub fn cmd_elevate(m: usize, n: usize, output: &OutputArgs) -> Result<(), CliError> {
    require_format(output, &[Format::Json])?;
    let e = crate::bernstein::elevation_matrix(m, n)?;
    emit(output, &to_json_line(&e))
}

#[derive(Serialize)]
struct DualBasisOutput<'a> {
    #[serde(rename = "A")]
    a: &'a Mat,
    s: &'a [usize],
    dual_check: bool,
}

pub fn cmd_dual_basis(
    config: &ConfigArgs,
    basis: BasisArg,
    output: &OutputArgs,
) -> Result<(), CliError> {
    require_format(output, &[Format::Json])?;
    let db = config.dual_basis(basis)?;
    let out = DualBasisOutput {
        a: db.transform(),
        s: db.selection().indices(),
        dual_check: verify_duality(&db),
    };
    emit(output, &to_json_line(&out))
}

pub fn cmd_convergence(
    m: usize,
    k_max: usize,
    grid: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    let format = require_format(output, &[Format::Csv, Format::Json])?;
    if m == 0 || k_max == 0 {
        return Err(CliError::Usage(
            "convergence needs m >= 1 and k >= 1".into(),
        ));
    }
    check_grid(grid)?;
    let ks: Vec<usize> = (1..=k_max).collect();
    let rows = convergence_table_with_grid(m, &ks, grid);
    let text = match format {
        Format::Json => to_json_line(&rows),
        _ => {
            let mut buf = Vec::new();
            write_convergence_csv(&mut buf, &rows)?;
            String::from_utf8(buf).expect("ascii csv")
        }
    };
    emit(output, &text)
}

fn check_grid(grid: usize) -> Result<(), CliError> {
    if grid < 2 {
        return Err(CliError::Usage(format!(
            "grid needs at least 2 points, got {grid}"
        )));
    }
    Ok(())
}

pub fn cmd_operator(
    which: OperatorKind,
    config: &ConfigArgs,
    fname: &str,
    smoothness: Smoothness,
    grid: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    require_format(output, &[Format::Json])?;
    check_grid(grid)?;
    let f: BuiltinFn = fname.parse()?;
    let s = config.selection()?;
    let iv = config.interval()?;
    let opts = GridOptions::with_sup(grid);
    let text = match which {
        OperatorKind::Quasi => to_json_line(&quasi_interpolant_report(
            s.m(),
            s.n(),
            s.indices(),
            &f,
            iv,
            &opts,
        )?),
        OperatorKind::Bernop => to_json_line(&bernstein_like_report(
            s.m(),
            s.n(),
            s.indices(),
            &f,
            smoothness,
            f.derivative_bounds(iv),
            iv,
            &opts,
        )?),
    };
    emit(output, &text)
}

/// Path of the CSV written next to an SVG plot.
pub fn sidecar_path(svg: &Path) -> PathBuf {
    svg.with_extension("csv")
}

pub fn cmd_plot(
    kind: PlotKind,
    config: &ConfigArgs,
    coeffs: Option<&[f64]>,
    grid: usize,
    output: &OutputArgs,
) -> Result<(), CliError> {
    require_format(output, &[Format::Svg])?;
    check_grid(grid)?;
    let out = output
        .out
        .as_ref()
        .ok_or_else(|| CliError::Usage("plot needs --out PATH".into()))?;
    let db = config.dual_basis(BasisArg::Bernstein)?;
    let (svg, csv) = match kind {
        PlotKind::Basis => basis_plot(&db, grid),
        PlotKind::Polygon => {
            let alpha = coeffs.ok_or_else(|| CliError::Usage("polygon needs --coeffs".into()))?;
            if alpha.len() != db.m() + 1 {
                return Err(CliError::Usage(format!(
                    "polygon needs {} coefficients, got {}",
                    db.m() + 1,
                    alpha.len()
                )));
            }
            polygon_plot(&db, alpha, grid)?
        }
    };
    fs::write(out, svg)?;
    fs::write(sidecar_path(out), csv)?;
    Ok(())
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 50.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn new(iv: Interval, ys: impl Iterator<Item = f64>) -> Self {
        let (mut lo, mut hi) = ys.fold((0.0f64, 1.0f64), |(lo, hi), y| (lo.min(y), hi.max(y)));
        let pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
        Frame {
            x0: iv.a(),
            x1: iv.b(),
            y0: lo,
            y1: hi,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", self.px(x), self.py(y)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn svg_open(title: &str, frame: &Frame) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(s, "<!-- dualbern {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">"
    );
    let _ = writeln!(s, "<title>{title}</title>");
    let _ = writeln!(
        s,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let axis = |x1: f64, y1: f64, x2: f64, y2: f64| {
        format!(
            "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"#888\" stroke-width=\"1\"/>\n"
        )
    };
    let zero = frame.py(0.0);
    s.push_str(&axis(MARGIN, zero, WIDTH - MARGIN, zero));
    s.push_str(&axis(MARGIN, MARGIN, MARGIN, HEIGHT - MARGIN));
    s
}

fn polyline(points: &str, color: &str, dashed: bool) -> String {
    let dash = if dashed {
        " stroke-dasharray=\"8 5\""
    } else {
        ""
    };
    format!(
        "<polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>\n"
    )
}

fn markers(frame: &Frame, pts: &[(f64, f64)], color: &str) -> String {
    pts.iter()
        .map(|&(x, y)| {
            format!(
                "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"{color}\"/>\n",
                frame.px(x),
                frame.py(y)
            )
        })
        .collect()
}

/// SVG of the `m + 1` dual basis curves, and CSV `t,D0,..,Dm`.
fn basis_plot(db: &DualBasis, grid: usize) -> (String, String) {
    let iv = db.interval();
    let ts = iv.grid(grid);
    let values: Vec<Vec<f64>> = ts.iter().map(|&t| db.eval_all(t)).collect();
    let frame = Frame::new(iv, values.iter().flatten().copied());

    let mut svg = svg_open(&format!("dual basis m={} n={}", db.m(), db.n()), &frame);
    for i in 0..=db.m() {
        let pts: Vec<(f64, f64)> = ts.iter().zip(&values).map(|(&t, v)| (t, v[i])).collect();
        svg.push_str(&polyline(
            &frame.points(&pts),
            PALETTE[i % PALETTE.len()],
            false,
        ));
    }
    svg.push_str("</svg>\n");

    let mut csv = String::from("t");
    for i in 0..=db.m() {
        let _ = write!(csv, ",D{i}");
    }
    csv.push('\n');
    for (t, v) in ts.iter().zip(&values) {
        csv.push_str(&fmt_float(*t));
        for x in v {
            csv.push(',');
            csv.push_str(&fmt_float(*x));
        }
        csv.push('\n');
    }
    (svg, csv)
}

/// SVG of the control polygon `(xi_i, alpha_i)`, the transformed polygon
/// `(xi_i, (A alpha)_i)` and the curve; CSV rows `series,x,y`.
fn polygon_plot(db: &DualBasis, alpha: &[f64], grid: usize) -> Result<(String, String), CliError> {
    let iv = db.interval();
    let m = db.m();
    let xs: Vec<f64> = if m == 0 {
        vec![iv.a()]
    } else {
        xi_nodes(m, iv)?.nodes().to_vec()
    };
    let beta = db.coefficients_of(alpha);
    let curve = BPoly::new(iv, beta.clone())?;
    let ts = iv.grid(grid);
    let control: Vec<(f64, f64)> = xs.iter().copied().zip(alpha.iter().copied()).collect();
    let transformed: Vec<(f64, f64)> = xs.iter().copied().zip(beta.iter().copied()).collect();
    let samples: Vec<(f64, f64)> = ts.iter().map(|&t| (t, curve.eval(t))).collect();
    let frame = Frame::new(
        iv,
        control
            .iter()
            .chain(&transformed)
            .chain(&samples)
            .map(|p| p.1),
    );

    let mut svg = svg_open(&format!("control polygon m={} n={}", m, db.n()), &frame);
    svg.push_str(&polyline(&frame.points(&control), PALETTE[0], false));
    svg.push_str(&markers(&frame, &control, PALETTE[0]));
    svg.push_str(&polyline(&frame.points(&transformed), PALETTE[1], true));
    svg.push_str(&markers(&frame, &transformed, PALETTE[1]));
    svg.push_str(&polyline(&frame.points(&samples), PALETTE[2], false));
    svg.push_str("</svg>\n");

    let mut csv = String::from("series,x,y\n");
    for (name, pts) in [
        ("control", &control),
        ("transformed", &transformed),
        ("curve", &samples),
    ] {
        for (x, y) in pts.iter() {
            let _ = writeln!(csv, "{name},{},{}", fmt_float(*x), fmt_float(*y));
        }
    }
    Ok((svg, csv))
}
