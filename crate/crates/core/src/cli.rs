//! The `fockbridge` command line.
//!
//! Data commands read a coefficient JSON file or a CSV signal (`-` for
//! stdin) and write the same kind of file unless `--format` says otherwise.
//! `--config FILE` supplies a JSON object whose keys are flag names; flags
//! given on the command line win.
//!
//! Exit codes: 0 success, 1 failed checks, 2 usage or input errors, 3
//! numerical failures. Diagnostics are one line on stderr:
//! `fockbridge: error kind=<kind> message="<text>"`.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::formats::{read_signal_csv, signal_to_csv, Basis, CoeffFile, SymbolFile};
use crate::frft::{fock_rotation, frft_coeffs, frft_integral, FrftAngle};
use crate::hilbert::{fractional_hilbert, hilbert_classical_grid, HilbertParams, HilbertWork};
use crate::quadrature::{default_plane_rule, gauss_hermite_rule};
use crate::representation::{
    analyze_signal, bargmann_coeff, bargmann_direct, fock_eval, hermite_eval, inverse_bargmann_coeff, synthesize,
    FockCoeffs, GridGeometry, HermiteCoeffs, SampledSignal, DEFAULT_TRUNCATION, MAX_TRUNCATION,
};
use crate::singular::{
    constant_symbol, gaussian_symbol, hilbert_symbol, phi_from_g, polynomial_symbol, s_phi_alpha_apply,
    s_phi_alpha_matrix, s_phi_apply_deriv, s_phi_matrix, wavelet_transform_sampled, FockSymbol, WaveletSpec,
};
use crate::verify::{emit_report, run_suite, Suite, VerifyConfig, DEFAULT_SEED};

pub const THREADS_ENV: &str = "FOCKBRIDGE_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "fockbridge", version, about = "Bargmann transform numerics and identity checks")]
struct Cli {
    /// JSON file of default flag values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output format for data commands.
    #[arg(long, global = true, value_enum)]
    format: Option<OutFormat>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fractional Fourier transform.
    Frft(FrftArgs),
    /// Fractional or classical Hilbert transform.
    Hilbert(HilbertArgs),
    /// Bargmann transform and its inverse.
    Bargmann(BargmannArgs),
    /// Singular integral operators on the Fock space.
    Sop {
        #[command(subcommand)]
        command: SopCommand,
    },
    /// Wavelet transform of a sampled signal.
    Wavelet(WaveletArgs),
    /// Run the identity checks and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FrftRoute {
    Coeff,
    Integral,
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Output grid `x0,dx,len` when a coefficient file is written as CSV.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    grid: Option<GridGeometry>,
}

#[derive(Debug, Args)]
struct FrftArgs {
    /// Input coefficient JSON or CSV signal.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Hermite truncation used for CSV input.
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    n: usize,
    #[arg(long, value_enum, default_value = "coeff")]
    route: FrftRoute,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct HilbertArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
    phi: f64,
    /// Classical transform through the FFT grid multiplier (CSV input) or
    /// the coefficient chain with `α = 0, φ = π/2`.
    #[arg(long)]
    classical: bool,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    n: usize,
    /// Output truncation; defaults to twice the input length.
    #[arg(long)]
    n_out: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct BargmannArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Map Fock coefficients back to Hermite coefficients.
    #[arg(long)]
    inverse: bool,
    /// Evaluate the transform at `re,im` instead of writing coefficients.
    #[arg(long = "at", value_parser = parse_complex, allow_hyphen_values = true)]
    at: Vec<C64>,
    /// Evaluate through the Bargmann integral rather than the coefficients.
    #[arg(long)]
    direct: bool,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    n: usize,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct SymbolArgs {
    /// Symbol kind.
    #[arg(long, value_parser = ["const", "poly", "gauss", "hilbert", "from-g"])]
    symbol: Option<String>,
    /// Load the symbol from a JSON file instead.
    #[arg(long, value_name = "FILE", conflicts_with = "symbol")]
    symbol_file: Option<PathBuf>,
    /// Constant value `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    value: Option<C64>,
    /// Polynomial coefficient `re,im`, lowest degree first; repeatable.
    #[arg(long = "coeff", value_parser = parse_complex, allow_hyphen_values = true)]
    coeffs: Vec<C64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Wavelet CSV for `from-g`.
    #[arg(long, value_name = "FILE")]
    g: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// Also write the symbol as JSON.
    #[arg(long, value_name = "FILE")]
    save_symbol: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SopRoute {
    Quadrature,
    Deriv,
}

#[derive(Debug, Subcommand)]
enum SopCommand {
    /// Apply `S_φ` (or `S^α_φ`) to a Fock function.
    Apply {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, short)]
        input: PathBuf,
        /// Evaluation point `re,im`; repeatable.
        #[arg(long = "z", value_parser = parse_complex, allow_hyphen_values = true)]
        z: Vec<C64>,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value = "quadrature")]
        route: SopRoute,
    },
    /// Truncated matrix `⟨S e_m, e_n⟩`.
    Matrix {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
    },
}

#[derive(Debug, Args)]
struct WaveletArgs {
    /// Input CSV signal or Hermite coefficient JSON.
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    s: f64,
    /// Wavelet as a CSV signal.
    #[arg(long, value_name = "FILE", conflicts_with = "g_moment")]
    g: Option<PathBuf>,
    /// Use `g(x) = xⁿ e^{−x²}`.
    #[arg(long, value_name = "N")]
    g_moment: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all", value_parser = ["all", "basis", "frft", "hilbert", "sop", "wavelet"])]
    suite: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Length of random coefficient vectors.
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = crate::quadrature::DEFAULT_RADIAL)]
    radial: usize,
    #[arg(long, default_value_t = crate::quadrature::DEFAULT_ANGULAR)]
    angular: usize,
    #[arg(long)]
    pretty: bool,
    /// Record wall time per check; the report is then no longer reproducible.
    #[arg(long)]
    timings: bool,
}

fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number `{p}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(C64::new(num(re)?, 0.0)),
        [re, im] => Ok(C64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected `re,im`, got `{s}`")),
    }
}

fn parse_grid(s: &str) -> std::result::Result<GridGeometry, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected `x0,dx,len`, got `{s}`"));
    }
    let x0 = parts[0].parse::<f64>().map_err(|e| e.to_string())?;
    let dx = parts[1].parse::<f64>().map_err(|e| e.to_string())?;
    let len = parts[2].parse::<usize>().map_err(|e| e.to_string())?;
    GridGeometry::new(x0, dx, len).map_err(|e| e.to_string())
}

enum Data {
    Coeffs(CoeffFile),
    Signal(SampledSignal),
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn read_data(path: &Path) -> Result<Data> {
    let text = read_text(path)?;
    if text.trim_start().starts_with('{') {
        Ok(Data::Coeffs(CoeffFile::from_json(&text)?))
    } else {
        Ok(Data::Signal(read_signal_csv(text.as_bytes())?))
    }
}

fn check_truncation(n: usize) -> Result<()> {
    if n == 0 || n > MAX_TRUNCATION {
        return Err(Error::InvalidArgument(format!("truncation must be in 1..={MAX_TRUNCATION}, got {n}")));
    }
    Ok(())
}

fn analyze_csv(s: &SampledSignal, n: usize) -> Result<HermiteCoeffs> {
    check_truncation(n)?;
    let rule = gauss_hermite_rule(2 * n)?;
    analyze_signal(s, n, &rule)
}

fn default_grid() -> GridGeometry {
    GridGeometry::centered(256, 0.1).expect("valid default grid")
}

fn coeffs_output(h: &HermiteCoeffs, basis: Basis, format: Option<OutFormat>, grid: Option<GridGeometry>) -> String {
    match format {
        Some(OutFormat::Csv) => signal_to_csv(&synthesize(h, grid.unwrap_or_else(default_grid))),
        _ => match basis {
            Basis::Hermite => CoeffFile::from_hermite(h).to_json(),
            Basis::Fock => CoeffFile::from_fock(&bargmann_coeff(h)).to_json(),
        },
    }
}

fn signal_output(s: &SampledSignal, h: Option<&HermiteCoeffs>, format: Option<OutFormat>) -> Result<String> {
    match (format, h) {
        (Some(OutFormat::Json), Some(h)) => Ok(CoeffFile::from_hermite(h).to_json()),
        (Some(OutFormat::Json), None) => {
            Err(Error::InvalidArgument("this route produces samples only; use --format csv".into()))
        }
        _ => Ok(signal_to_csv(s)),
    }
}

fn evaluations_output(points: &[(C64, C64)], format: Option<OutFormat>) -> String {
    match format {
        Some(OutFormat::Csv) => {
            let mut s = String::from("z_re,z_im,re,im\n");
            for (z, v) in points {
                s.push_str(&format!("{:?},{:?},{:?},{:?}\n", z.re, z.im, v.re, v.im));
            }
            s
        }
        _ => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|(z, v)| serde_json::json!({"z": [z.re, z.im], "value": [v.re, v.im]}))
                .collect();
            serde_json::to_string(&rows).expect("evaluations serialize")
        }
    }
}

fn cmd_frft(a: &FrftArgs, format: Option<OutFormat>) -> Result<String> {
    let angle = FrftAngle::new(a.alpha)?;
    match read_data(&a.input)? {
        Data::Coeffs(file) => {
            if a.route == FrftRoute::Integral {
                return Err(Error::InvalidArgument("the integral route needs a CSV signal".into()));
            }
            match (file.basis, format) {
                (Basis::Hermite, Some(OutFormat::Json) | None) => {
                    Ok(CoeffFile::from_hermite(&frft_coeffs(&file.to_hermite()?, angle)).to_json())
                }
                (Basis::Fock, Some(OutFormat::Json) | None) => {
                    Ok(CoeffFile::from_fock(&fock_rotation(&file.to_fock()?, angle)).to_json())
                }
                (_, f) => Ok(coeffs_output(&frft_coeffs(&file.to_hermite()?, angle), file.basis, f, a.grid.grid)),
            }
        }
        Data::Signal(s) => match a.route {
            FrftRoute::Coeff => {
                let h = frft_coeffs(&analyze_csv(&s, a.n)?, angle);
                signal_output(&synthesize(&h, s.geometry()), Some(&h), format)
            }
            FrftRoute::Integral => {
                let values = s
                    .geometry()
                    .points()
                    .map(|x| frft_integral(|t| s.interpolate(t), angle, x))
                    .collect::<Result<Vec<_>>>()?;
                let out = SampledSignal::new(s.geometry().x0, s.geometry().dx, values)?;
                signal_output(&out, None, format)
            }
        },
    }
}

fn cmd_hilbert(a: &HilbertArgs, format: Option<OutFormat>) -> Result<String> {
    let params = if a.classical { HilbertParams::classical() } else { HilbertParams::new(a.alpha, a.phi)? };
    let apply = |h: &HermiteCoeffs| {
        let n_out = a.n_out.unwrap_or(2 * h.len());
        check_truncation(n_out)?;
        fractional_hilbert(h, params, &HilbertWork::new(h.len(), n_out)?)
    };
    match read_data(&a.input)? {
        Data::Coeffs(file) => {
            let h = apply(&file.to_hermite()?)?;
            Ok(coeffs_output(&h, file.basis, format, a.grid.grid))
        }
        Data::Signal(s) if a.classical => signal_output(&hilbert_classical_grid(&s), None, format),
        Data::Signal(s) => {
            let h = apply(&analyze_csv(&s, a.n)?)?;
            signal_output(&synthesize(&h, s.geometry()), Some(&h), format)
        }
    }
}

fn cmd_bargmann(a: &BargmannArgs, format: Option<OutFormat>) -> Result<String> {
    let data = read_data(&a.input)?;
    if a.inverse {
        let f = match &data {
            Data::Coeffs(file) if file.basis == Basis::Fock => file.to_fock()?,
            _ => return Err(Error::InvalidArgument("--inverse needs a Fock coefficient file".into())),
        };
        let h = inverse_bargmann_coeff(&f);
        return Ok(coeffs_output(&h, Basis::Hermite, format, a.grid.grid));
    }
    let h = match &data {
        Data::Coeffs(file) if file.basis == Basis::Hermite => file.to_hermite()?,
        Data::Coeffs(_) => return Err(Error::InvalidArgument("expected a Hermite coefficient file".into())),
        Data::Signal(s) => analyze_csv(s, a.n)?,
    };
    if a.at.is_empty() {
        return Ok(match format {
            Some(OutFormat::Csv) => {
                return Err(Error::InvalidArgument("Fock coefficients have no CSV form; use --at for values".into()))
            }
            _ => CoeffFile::from_fock(&bargmann_coeff(&h)).to_json(),
        });
    }
    let f = bargmann_coeff(&h);
    let rule = gauss_hermite_rule(128)?;
    let points = a
        .at
        .iter()
        .map(|&z| {
            let v = if !a.direct {
                fock_eval(&f, z)
            } else {
                match &data {
                    Data::Signal(s) => bargmann_direct(|x| s.interpolate(x), z, &rule)?,
                    _ => bargmann_direct(|x| hermite_eval(&h, x), z, &rule)?,
                }
            };
            Ok((z, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(evaluations_output(&points, format))
}

fn build_symbol(a: &SymbolArgs) -> Result<FockSymbol> {
    let sym = if let Some(path) = &a.symbol_file {
        let file: SymbolFile = serde_json::from_str(&read_text(path)?)?;
        FockSymbol::from_file(&file)?
    } else {
        let kind = a.symbol.as_deref().ok_or_else(|| Error::InvalidArgument("need --symbol or --symbol-file".into()))?;
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidArgument(format!("--symbol {kind} needs --{name}")))
        };
        match kind {
            "const" => constant_symbol(a.value.ok_or_else(|| Error::InvalidArgument("--symbol const needs --value".into()))?),
            "poly" => {
                if a.coeffs.is_empty() {
                    return Err(Error::InvalidArgument("--symbol poly needs at least one --coeff".into()));
                }
                polynomial_symbol(a.coeffs.clone())?
            }
            "gauss" => gaussian_symbol(need(a.a, "a")?, a.b.unwrap_or(0.0))?,
            "hilbert" => hilbert_symbol(),
            "from-g" => {
                let g = a.g.as_ref().ok_or_else(|| Error::InvalidArgument("--symbol from-g needs --g".into()))?;
                let signal = read_signal_csv(read_text(g)?.as_bytes())?;
                let w = WaveletSpec::from_signal(signal, need(a.s, "s")?)?;
                phi_from_g(&w, &*gauss_hermite_rule(128)?)?
            }
            other => return Err(Error::InvalidArgument(format!("unknown symbol kind `{other}`"))),
        }
    };
    if let Some(path) = &a.save_symbol {
        let text = serde_json::to_string(&sym.to_file())?;
        std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(sym)
}

fn read_fock(path: &Path) -> Result<FockCoeffs> {
    match read_data(path)? {
        Data::Coeffs(file) => match file.basis {
            Basis::Fock => file.to_fock(),
            Basis::Hermite => Ok(bargmann_coeff(&file.to_hermite()?)),
        },
        Data::Signal(_) => Err(Error::InvalidArgument("operators act on coefficient files".into())),
    }
}

fn cmd_sop(c: &SopCommand, format: Option<OutFormat>) -> Result<String> {
    match c {
        SopCommand::Apply { symbol, input, z, alpha, route } => {
            let sym = build_symbol(symbol)?;
            let f = read_fock(input)?;
            match route {
                SopRoute::Deriv => {
                    if alpha.is_some() {
                        return Err(Error::InvalidArgument("the derivative route has no rotated form".into()));
                    }
                    let out = s_phi_apply_deriv(sym.taylor(), &f)?;
                    if z.is_empty() {
                        return Ok(CoeffFile::from_fock(&out).to_json());
                    }
                    let points: Vec<(C64, C64)> = z.iter().map(|&p| (p, fock_eval(&out, p))).collect();
                    Ok(evaluations_output(&points, format))
                }
                SopRoute::Quadrature => {
                    if z.is_empty() {
                        return Err(Error::InvalidArgument("the quadrature route needs at least one --z".into()));
                    }
                    let angle = FrftAngle::new(alpha.unwrap_or(0.0))?;
                    let plane = default_plane_rule();
                    let points = z
                        .iter()
                        .map(|&p| s_phi_alpha_apply(&sym, angle, &f, p, &plane).map(|v| (p, v)))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(evaluations_output(&points, format))
                }
            }
        }
        SopCommand::Matrix { symbol, n, alpha } => {
            let sym = build_symbol(symbol)?;
            let plane = default_plane_rule();
            let m = match alpha {
                Some(a) => s_phi_alpha_matrix(&sym, FrftAngle::new(*a)?, *n, &plane)?,
                None => s_phi_matrix(&sym, *n, &plane)?,
            };
            Ok(match format {
                Some(OutFormat::Csv) => {
                    let mut s = String::from("row,col,re,im\n");
                    for r in 0..m.size() {
                        for c in 0..m.size() {
                            let v = m.get(r, c);
                            s.push_str(&format!("{r},{c},{:?},{:?}\n", v.re, v.im));
                        }
                    }
                    s
                }
                _ => serde_json::to_string(&m.to_file())?,
            })
        }
    }
}

fn cmd_wavelet(a: &WaveletArgs, format: Option<OutFormat>) -> Result<String> {
    let w = match (&a.g, a.g_moment) {
        (Some(path), None) => WaveletSpec::from_signal(read_signal_csv(read_text(path)?.as_bytes())?, a.s)?,
        (None, Some(n)) => WaveletSpec::gaussian_moment(n, a.s)?,
        _ => return Err(Error::InvalidArgument("give exactly one of --g and --g-moment".into())),
    };
    let f = match read_data(&a.input)? {
        Data::Signal(s) => s,
        Data::Coeffs(file) => synthesize(&file.to_hermite()?, a.grid.grid.unwrap_or_else(default_grid)),
    };
    if format == Some(OutFormat::Json) {
        return Err(Error::InvalidArgument("wavelet output is a CSV signal".into()));
    }
    Ok(signal_to_csv(&wavelet_transform_sampled(&f, &w)))
}

fn cmd_verify(a: &VerifyArgs) -> Result<(String, bool)> {
    let config = VerifyConfig {
        suite: Suite::parse(&a.suite)?,
        seed: a.seed,
        n: a.n,
        plane_radial: a.radial,
        plane_angular: a.angular,
        timings: a.timings,
    };
    let report = run_suite(&config)?;
    Ok((emit_report(&report, a.pretty), report.passed))
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::InvalidArgument(_) => ("invalid-argument", 2),
        Error::Format(_) => ("format", 2),
        Error::Io(_) => ("io", 2),
        Error::Configuration(_) => ("configuration", 3),
        Error::Evaluation { .. } => ("evaluation", 3),
        Error::RepresentationUnavailable(_) => ("representation-unavailable", 3),
    }
}

fn diagnostic(err: &mut dyn Write, kind: &str, message: &str) {
    let one_line = message.split_whitespace().collect::<Vec<_>>().join(" ").replace('"', "'");
    let _ = writeln!(err, "fockbridge: error kind={kind} message=\"{one_line}\"");
}

/// Appends `--key value` for each config entry whose flag is not already on
/// the command line.
fn merge_config(argv: &[String]) -> Result<Vec<String>> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv.to_vec()) };
    let text = read_text(Path::new(&path))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let obj = value.as_object().ok_or_else(|| Error::Format("config must be a JSON object".into()))?;
    let mut out = argv.to_vec();
    for (key, v) in obj {
        let flag = format!("--{}", key.replace('_', "-"));
        if argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}="))) {
            continue;
        }
        let mut push = |s: String| {
            out.push(flag.clone());
            out.push(s);
        };
        match v {
            serde_json::Value::Bool(true) => out.push(flag.clone()),
            serde_json::Value::Bool(false) | serde_json::Value::Null => {}
            serde_json::Value::String(s) => push(s.clone()),
            serde_json::Value::Number(n) => push(n.to_string()),
            serde_json::Value::Array(items) => {
                for item in items {
                    match item {
                        serde_json::Value::String(s) => push(s.clone()),
                        other => push(other.to_string()),
                    }
                }
            }
            serde_json::Value::Object(_) => {
                return Err(Error::Format(format!("config key `{key}` must not be an object")));
            }
        }
    }
    Ok(out)
}

fn apply_thread_cap() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
    // a second call in the same process finds the pool already built
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs the command line with the given arguments (including the program
/// name) and returns the exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Err(e) = apply_thread_cap() {
        diagnostic(err, "usage", &e.to_string());
        return 2;
    }
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            diagnostic(err, error_kind(&e).0, &e.to_string());
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("").trim_start_matches("error: ");
            diagnostic(err, "usage", first);
            return 2;
        }
    };
    let format = cli.format;
    let result = match &cli.command {
        Command::Frft(a) => cmd_frft(a, format).map(|s| (s, true)),
        Command::Hilbert(a) => cmd_hilbert(a, format).map(|s| (s, true)),
        Command::Bargmann(a) => cmd_bargmann(a, format).map(|s| (s, true)),
        Command::Sop { command } => cmd_sop(command, format).map(|s| (s, true)),
        Command::Wavelet(a) => cmd_wavelet(a, format).map(|s| (s, true)),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok((mut text, ok)) => {
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
                None => out.write_all(text.as_bytes()).map_err(Error::from),
            };
            if let Err(e) = written {
                diagnostic(err, "io", &e.to_string());
                return 2;
            }
            if ok {
                0
            } else {
                diagnostic(err, "check-failed", "one or more checks failed");
                1
            }
        }
        Err(e) => {
            let (kind, code) = error_kind(&e);
            diagnostic(err, kind, &e.to_string());
            code
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
