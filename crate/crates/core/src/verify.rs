//! Named identity checks and the JSON verification report.
//!
//! Each check compares two independently computed routes and records the
//! worst discrepancy against a fixed tolerance. Random test vectors come from
//! a ChaCha8 stream keyed by the report seed and the check's position in
//! [`CHECKS`], so a report is reproducible bit for bit from its config.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frft::{fock_rotation, frft_coeffs, frft_integral, spectral_projection, FrftAngle};
use crate::hilbert::{
    fractional_hilbert, hilbert_classical_grid, hilbert_fock_chain_apply, hilbert_fock_kernel_apply,
    hilbert_fock_s_apply, HilbertParams, HilbertWork,
};
use crate::quadrature::{gauss_hermite_rule, plane_gaussian_rule, PlaneRule};
use crate::representation::{
    bargmann_coeff, bargmann_direct, fock_eval, hermite_eval, inverse_bargmann_coeff, FockCoeffs, GridGeometry,
    HermiteCoeffs, SampledSignal,
};
use crate::singular::{
    gaussian_symbol, hilbert_symbol, hilbert_symbol_pv_integral, phi_from_g, phi_n_closed, phi_n_leading_coefficient,
    phi_n_polynomial, polynomial_symbol, s_phi_alpha_matrix, s_phi_apply, s_phi_apply_deriv, s_phi_matrix,
    wavelet_conjugated_direct, wavelet_fock_apply, WaveletSpec,
};
use crate::special::{fock_basis_eval, gaussian_integral_closed, hermite_fns, NormConstant};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Basis,
    Frft,
    Hilbert,
    Sop,
    Wavelet,
}

impl Suite {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "basis" => Suite::Basis,
            "frft" => Suite::Frft,
            "hilbert" => Suite::Hilbert,
            "sop" => Suite::Sop,
            "wavelet" => Suite::Wavelet,
            other => return Err(Error::InvalidArgument(format!("unknown suite `{other}`"))),
        })
    }
}

/// Check names with their suites, in report order.
pub const CHECKS: [(&str, Suite); 15] = [
    ("basis.orthonormality", Suite::Basis),
    ("basis.gaussian_integral", Suite::Basis),
    ("basis.bargmann_hermite", Suite::Basis),
    ("frft.fock_rotation", Suite::Frft),
    ("frft.plancherel", Suite::Frft),
    ("frft.eigenfunctions", Suite::Frft),
    ("frft.spectral_decomposition", Suite::Frft),
    ("hilbert.kernel_vs_chain", Suite::Hilbert),
    ("hilbert.angle_decomposition", Suite::Hilbert),
    ("hilbert.classical_fock", Suite::Hilbert),
    ("wavelet.three_paths", Suite::Wavelet),
    ("wavelet.induced_symbols", Suite::Wavelet),
    ("sop.rotation_conjugation", Suite::Sop),
    ("sop.hilbert_symbol", Suite::Sop),
    ("sop.derivative_oracle", Suite::Sop),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Length of random coefficient vectors.
    pub n: usize,
    pub plane_radial: usize,
    pub plane_angular: usize,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            seed: DEFAULT_SEED,
            n: 64,
            plane_radial: crate::quadrature::DEFAULT_RADIAL,
            plane_angular: crate::quadrature::DEFAULT_ANGULAR,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckPart {
    pub label: String,
    pub max_error: Option<f64>,
    pub tolerance: f64,
}

/// One named check. `max_error` is `None` when the error is not finite or
/// the computation failed, in which case `detail` says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub parts: Vec<CheckPart>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time: Option<f64>,
}

impl CheckResult {
    /// Combines parts; the reported error and tolerance are those of the
    /// part with the largest error-to-tolerance ratio.
    pub fn from_parts(name: &str, parts: Vec<CheckPart>) -> Self {
        let ratio = |p: &CheckPart| match p.max_error {
            Some(e) if p.tolerance > 0.0 => e / p.tolerance,
            Some(e) if e == 0.0 => 0.0,
            _ => f64::INFINITY,
        };
        let passed = parts.iter().all(|p| p.max_error.is_some_and(|e| e <= p.tolerance));
        let worst = parts.iter().max_by(|a, b| ratio(a).total_cmp(&ratio(b)));
        let (max_error, tolerance) = worst.map_or((Some(0.0), 0.0), |p| (p.max_error, p.tolerance));
        let parts = if parts.len() > 1 { parts } else { Vec::new() };
        Self { name: name.to_string(), max_error, tolerance, passed, parts, detail: None, wall_time: None }
    }

    pub fn failed(name: &str, err: &Error) -> Self {
        Self {
            name: name.to_string(),
            max_error: None,
            tolerance: 0.0,
            passed: false,
            parts: Vec::new(),
            detail: Some(err.to_string()),
            wall_time: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    /// Sorts checks by name and sets the top-level flag.
    pub fn new(config: VerifyConfig, mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().all(|c| c.passed);
        Self { passed, config, checks }
    }
}

pub fn emit_report(report: &VerificationReport, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(report).expect("report serializes")
    } else {
        serde_json::to_string(report).expect("report serializes")
    }
}

fn part(label: &str, err: f64, tolerance: f64) -> CheckPart {
    CheckPart { label: label.to_string(), max_error: err.is_finite().then_some(err), tolerance }
}

fn rng_for(seed: u64, index: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index as u64);
    r
}

fn random_coeffs(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Uniform point in the disk of radius `r`.
fn random_z(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    let rad = r * rng.gen::<f64>().sqrt();
    C64::from_polar(rad, rng.gen_range(0.0..2.0 * PI))
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

struct Ctx {
    rng: ChaCha8Rng,
    n: usize,
    plane: std::sync::Arc<PlaneRule>,
}

type CheckFn = fn(&mut Ctx) -> Result<Vec<CheckPart>>;

fn check_fn(name: &str) -> Option<CheckFn> {
    Some(match name {
        "basis.orthonormality" => basis_orthonormality,
        "basis.gaussian_integral" => basis_gaussian_integral,
        "basis.bargmann_hermite" => basis_bargmann_hermite,
        "frft.fock_rotation" => frft_fock_rotation,
        "frft.plancherel" => frft_plancherel,
        "frft.eigenfunctions" => frft_eigenfunctions,
        "frft.spectral_decomposition" => frft_spectral_decomposition,
        "hilbert.kernel_vs_chain" => hilbert_kernel_vs_chain,
        "hilbert.angle_decomposition" => hilbert_angle_decomposition,
        "hilbert.classical_fock" => hilbert_classical_fock,
        "wavelet.three_paths" => wavelet_three_paths,
        "wavelet.induced_symbols" => wavelet_induced_symbols,
        "sop.rotation_conjugation" => sop_rotation_conjugation,
        "sop.hilbert_symbol" => sop_hilbert_symbol,
        "sop.derivative_oracle" => sop_derivative_oracle,
        _ => return None,
    })
}

/// Runs one check by name.
pub fn run_check(name: &str, config: &VerifyConfig) -> Result<CheckResult> {
    let index = CHECKS
        .iter()
        .position(|(n, _)| *n == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown check `{name}`")))?;
    let f = check_fn(name).expect("every listed check has an implementation");
    let plane = plane_gaussian_rule(config.plane_radial, config.plane_angular)?;
    let mut ctx = Ctx { rng: rng_for(config.seed, index), n: config.n, plane };
    let start = Instant::now();
    let mut result = match f(&mut ctx) {
        Ok(parts) => CheckResult::from_parts(name, parts),
        Err(e) => CheckResult::failed(name, &e),
    };
    if config.timings {
        result.wall_time = Some(start.elapsed().as_secs_f64());
    }
    Ok(result)
}

pub fn checks_in(suite: Suite) -> Vec<&'static str> {
    CHECKS.iter().filter(|(_, s)| suite == Suite::All || *s == suite).map(|(n, _)| *n).collect()
}

/// Runs every check of the configured suite concurrently.
pub fn run_suite(config: &VerifyConfig) -> Result<VerificationReport> {
    if config.n == 0 || config.n > crate::representation::MAX_TRUNCATION {
        return Err(Error::InvalidArgument(format!(
            "n must be in 1..={}, got {}",
            crate::representation::MAX_TRUNCATION,
            config.n
        )));
    }
    plane_gaussian_rule(config.plane_radial, config.plane_angular)?;
    let checks = checks_in(config.suite)
        .into_par_iter()
        .map(|name| run_check(name, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(config.clone(), checks))
}

fn basis_orthonormality(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let rule = gauss_hermite_rule(200)?;
    let mut gram = vec![[0.0f64; 31]; 31];
    for (&x, &w) in rule.nodes().iter().zip(rule.dx_weights()) {
        let h = hermite_fns(31, x);
        for m in 0..31 {
            for n in 0..31 {
                gram[m][n] += w * h[m] * h[n];
            }
        }
    }
    let mut line_err: f64 = 0.0;
    for (m, row) in gram.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            line_err = line_err.max((v - if m == n { 1.0 } else { 0.0 }).abs());
        }
    }
    let plane = &ctx.plane;
    let plane_err = max_of((0..=30).map(|n| {
        crate::quadrature::integrate_plane(plane, |z| C64::new(fock_basis_eval(n, z).norm_sqr(), 0.0))
            .map_or(f64::NAN, |v| (v - 1.0).norm())
    }));
    Ok(vec![part("hermite gram matrix", line_err, 1e-9), part("monomial norms", plane_err, 1e-10)])
}

/// Shifts are drawn with `|Re z| ≤ 2` and `|Im z|` small enough that the
/// integrand on the real line peaks below `e^8`; past that the O(1) result
/// is the difference of far larger values and cannot be resolved in double
/// precision.
fn basis_gaussian_integral(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let mut closed_err: f64 = 0.0;
    let mut variation: f64 = 0.0;
    for _ in 0..10 {
        let a = ctx.rng.gen_range(0.5..3.0);
        let b = ctx.rng.gen_range(-3.0..3.0);
        let closed = gaussian_integral_closed(a, b)?;
        let ab = C64::new(a, b);
        let im_max = (8.0 / (a + b * b / a)).sqrt().min(2.0);
        let values: Vec<C64> = (0..5)
            .map(|_| {
                let z = C64::new(ctx.rng.gen_range(-2.0..2.0), ctx.rng.gen_range(-im_max..im_max));
                crate::oracle::integrate(|x| (-(ab * (z + x) * (z + x))).exp(), -z.re - 12.0, -z.re + 12.0, 1e-13)
            })
            .collect();
        for v in &values {
            closed_err = closed_err.max((v - closed).norm());
            variation = variation.max((v - values[0]).norm());
        }
    }
    Ok(vec![part("closed form vs adaptive quadrature", closed_err, 1e-9), part("variation over z", variation, 1e-9)])
}

fn basis_bargmann_hermite(_ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let rule = gauss_hermite_rule(128)?;
    let mut err: f64 = 0.0;
    for n in 0..=15 {
        for i in 0..5 {
            for j in 0..5 {
                let z = C64::new(-1.5 + 0.75 * i as f64, -1.5 + 0.75 * j as f64);
                let v = bargmann_direct(|x| C64::new(crate::special::hermite_fn(n, x), 0.0), z, &rule)?;
                err = err.max((v - fock_basis_eval(n, z)).norm());
            }
        }
    }
    Ok(vec![part("B h_n vs e_n", err, 1e-8)])
}

fn frft_fock_rotation(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let rule = gauss_hermite_rule(96)?;
    let mut direct_err: f64 = 0.0;
    let mut coeff_err: f64 = 0.0;
    for &alpha in &[0.3, FRAC_PI_2, 2.1] {
        let a = FrftAngle::new(alpha)?;
        let f = FockCoeffs::new(random_coeffs(&mut ctx.rng, 9))?;
        let h = inverse_bargmann_coeff(&f);
        let rot = C64::from_polar(1.0, -alpha);
        let zs: Vec<C64> = (0..10).map(|_| random_z(&mut ctx.rng, 1.5)).collect();
        let transformed: Vec<(f64, C64)> = rule
            .nodes()
            .iter()
            .map(|&x| frft_integral(|t| hermite_eval(&h, t), a, x).map(|v| (x, v)))
            .collect::<Result<_>>()?;
        let lookup = |x: f64| {
            transformed.iter().find(|(n, _)| *n == x).map_or(C64::new(f64::NAN, f64::NAN), |(_, v)| *v)
        };
        for &z in &zs {
            let v = bargmann_direct(lookup, z, &rule)?;
            direct_err = direct_err.max((v - fock_eval(&f, rot * z)).norm());
        }
        let big = HermiteCoeffs::new(random_coeffs(&mut ctx.rng, ctx.n))?;
        let lhs = bargmann_coeff(&frft_coeffs(&big, a));
        let rhs = fock_rotation(&bargmann_coeff(&big), a);
        coeff_err = coeff_err.max(lhs.max_diff(&rhs));
    }
    Ok(vec![part("integral route vs rotation", direct_err, 1e-7), part("coefficient intertwining", coeff_err, 1e-12)])
}

fn frft_plancherel(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let mut coeff_err: f64 = 0.0;
    let mut group_err: f64 = 0.0;
    let mut integral_err: f64 = 0.0;
    let rule = gauss_hermite_rule(64)?;
    for &alpha in &[0.3, 1.2, FRAC_PI_2, 2.5, -1.7, PI] {
        let a = FrftAngle::new(alpha)?;
        let h = HermiteCoeffs::new(random_coeffs(&mut ctx.rng, ctx.n))?;
        let t = frft_coeffs(&h, a);
        coeff_err = coeff_err.max((t.norm() - h.norm()).abs());
        group_err = group_err.max(frft_coeffs(&t, a.negated()).max_diff(&h));
        if alpha.sin().abs() >= 0.1 {
            let small = h.resized(9);
            let values: Vec<C64> = rule
                .nodes()
                .iter()
                .map(|&x| frft_integral(|s| hermite_eval(&small, s), a, x))
                .collect::<Result<_>>()?;
            let norm2: f64 = values.iter().zip(rule.dx_weights()).map(|(v, w)| v.norm_sqr() * w).sum();
            integral_err = integral_err.max((norm2.sqrt() - small.norm()).abs());
        }
    }
    Ok(vec![
        part("coefficient norms", coeff_err, 1e-12),
        part("integral norms", integral_err, 1e-6),
        part("group law", group_err, 1e-13),
    ])
}

fn frft_eigenfunctions(_ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let mut err: f64 = 0.0;
    for &alpha in &[0.4, FRAC_PI_2, 2.1, -1.3] {
        let a = FrftAngle::new(alpha)?;
        for n in 0..=12 {
            for i in 0..7 {
                let x = -3.0 + i as f64;
                let v = frft_integral(|t| C64::new(crate::special::hermite_fn(n, t), 0.0), a, x)?;
                err = err.max((v - a.phase(n) * crate::special::hermite_fn(n, x)).norm());
            }
        }
    }
    Ok(vec![part("integral route on h_n", err, 1e-7)])
}

fn frft_spectral_decomposition(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let quarter = FrftAngle::new(FRAC_PI_2)?;
    let h = HermiteCoeffs::new(random_coeffs(&mut ctx.rng, ctx.n))?;
    let i = C64::new(0.0, 1.0);
    let p: Vec<HermiteCoeffs> = (0..4).map(|k| spectral_projection(k, &h)).collect::<Result<_>>()?;
    let combo = HermiteCoeffs::new(
        (0..h.len())
            .map(|n| p[0].coeffs()[n] - i * p[1].coeffs()[n] - p[2].coeffs()[n] + i * p[3].coeffs()[n])
            .collect(),
    )?;
    let exact = frft_coeffs(&h, quarter).max_diff(&combo);
    let fixed = HermiteCoeffs::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.3])?;
    let mut fixed_err: f64 = 0.0;
    for j in 0..13 {
        let x = -3.0 + 0.5 * j as f64;
        let v = frft_integral(|t| hermite_eval(&fixed, t), quarter, x)?;
        fixed_err = fixed_err.max((v - hermite_eval(&fixed, x)).norm());
    }
    Ok(vec![part("quarter turn vs projections", exact, 0.0), part("fixed point via integral", fixed_err, 1e-9)])
}

fn hilbert_kernel_vs_chain(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let work = HilbertWork::new(7, 160)?;
    let pairs = [(FRAC_PI_2, FRAC_PI_2), (0.6, 1.0), (-2.0, 2.7)];
    let zs: Vec<C64> = (0..10).map(|_| random_z(&mut ctx.rng, 1.5)).collect();
    let plane = ctx.plane.clone();
    let errs: Vec<f64> = (0..=6usize)
        .into_par_iter()
        .map(|n| {
            let f = FockCoeffs::unit(n, 7);
            let mut err: f64 = 0.0;
            for &(alpha, phi) in &pairs {
                let p = HilbertParams::new(alpha, phi)?;
                for &z in &zs {
                    let a = hilbert_fock_kernel_apply(&f, p, z, &plane)?;
                    let b = hilbert_fock_chain_apply(&f, p, z, &work)?;
                    err = err.max((a - b).norm());
                }
            }
            Ok(err)
        })
        .collect::<Result<_>>()?;
    Ok(vec![part("kernel vs multiplier chain", max_of(errs), 1e-5)])
}

fn hilbert_angle_decomposition(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let n_in = ctx.n.min(32);
    let work = HilbertWork::new(n_in, 2 * n_in)?;
    let mut err: f64 = 0.0;
    for &(alpha, phi) in &[(0.3, 0.4), (1.0, 1.3), (-2.2, 2.9)] {
        let h = HermiteCoeffs::new(random_coeffs(&mut ctx.rng, n_in))?;
        let general = fractional_hilbert(&h, HilbertParams::new(alpha, phi)?, &work)?;
        let quarter = fractional_hilbert(&h, HilbertParams::new(alpha, FRAC_PI_2)?, &work)?;
        let padded = h.resized(work.n_out());
        let combo = HermiteCoeffs::new(
            (0..work.n_out())
                .map(|n| padded.coeffs()[n] * phi.cos() + quarter.coeffs()[n] * phi.sin())
                .collect(),
        )?;
        let diff: f64 = general.coeffs().iter().zip(combo.coeffs()).map(|(a, b)| (a - b).norm_sqr()).sum();
        err = err.max(diff.sqrt());
    }
    Ok(vec![part("H_phi vs cos phi I + sin phi H_quarter", err, 1e-6)])
}

/// Bargmann transform of grid samples by the trapezoid rule.
fn grid_bargmann(s: &SampledSignal, z: C64) -> C64 {
    let dx = s.geometry().dx;
    let zz = z * z * 0.5;
    let terms = s.values().iter().enumerate().filter_map(|(i, v)| {
        let x = s.x(i);
        (x.abs() < 12.0).then(|| v * (z * (2.0 * x) - x * x - zz).exp() * dx)
    });
    crate::quadrature::compensated_sum(terms) * NormConstant::VALUE
}

fn hilbert_classical_fock(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let geom = GridGeometry::centered(1 << 16, 0.05)?;
    let zs: Vec<C64> = (0..5).map(|_| random_z(&mut ctx.rng, 1.5)).collect();
    let mut kernel_err: f64 = 0.0;
    let mut involution_err: f64 = 0.0;
    for n in 0..=4 {
        let s = SampledSignal::from_fn(geom, |x| C64::new(crate::special::hermite_fn(n, x), 0.0));
        let hs = hilbert_classical_grid(&s);
        let f = FockCoeffs::unit(n, n + 1);
        for &z in &zs {
            let a = hilbert_fock_s_apply(&f, z, &ctx.plane)?;
            kernel_err = kernel_err.max((a - grid_bargmann(&hs, z)).norm());
        }
        if n % 2 == 1 {
            let hh = hilbert_classical_grid(&hs);
            let e = max_of(hh.values().iter().zip(s.values()).map(|(a, b)| (a + b).norm()));
            involution_err = involution_err.max(e);
        }
    }
    Ok(vec![part("S kernel vs grid multiplier", kernel_err, 1e-5), part("H H = -I on grid", involution_err, 1e-6)])
}

fn wavelet_three_paths(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let line = gauss_hermite_rule(128)?;
    let mut err: f64 = 0.0;
    for &s in &[1.0, -1.0, 2.0] {
        let w = WaveletSpec::gaussian_moment(0, s)?;
        let phi = phi_n_closed(0, s)?;
        let f = FockCoeffs::new(random_coeffs(&mut ctx.rng, 5))?;
        for _ in 0..4 {
            let z = random_z(&mut ctx.rng, 1.5);
            let nested = wavelet_fock_apply(&f, &w, z, &ctx.plane, &line)?;
            let symbol = s_phi_apply(&phi, &f, z, &ctx.plane)?;
            let direct = wavelet_conjugated_direct(&f, &w, z, &line)?;
            err = err.max((nested - symbol).norm()).max((nested - direct).norm()).max((symbol - direct).norm());
        }
    }
    Ok(vec![part("nested vs symbol vs conjugated", err, 1e-5)])
}

fn wavelet_induced_symbols(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let line = gauss_hermite_rule(128)?;
    let zs: Vec<C64> = (0..8).map(|_| random_z(&mut ctx.rng, 2.0)).collect();
    let mut moment_err: f64 = 0.0;
    let mut lead_err: f64 = 0.0;
    for &s in &[1.0, -1.0, 2.0] {
        for n in 0..=6 {
            let a = phi_from_g(&WaveletSpec::gaussian_moment(n, s)?, &line)?;
            let b = phi_n_closed(n, s)?;
            for &z in &zs {
                moment_err = moment_err.max((a.eval(z) - b.eval(z)).norm());
            }
        }
        for n in 0..=30 {
            let p = phi_n_polynomial(n, s);
            let want = phi_n_leading_coefficient(n, s);
            lead_err = lead_err.max((p[n] - want).abs() / want.abs());
        }
    }
    let mut gauss_err: f64 = 0.0;
    for &(eps, b) in &[(1.0, 0.5), (0.5, -1.0), (2.0, 0.0)] {
        let a = phi_from_g(&WaveletSpec::shifted_gaussian(eps, b, 1.0)?, &line)?;
        for &z in &zs {
            let want = ((z - b) * (z - b) / (2.0 * (1.0 + eps))).exp() * (2.0 / (1.0 + eps)).sqrt();
            gauss_err = gauss_err.max((a.eval(z) - want).norm());
        }
    }
    Ok(vec![
        part("phi from g_n vs closed form", moment_err, 1e-8),
        part("leading coefficient", lead_err, 1e-10),
        part("gaussian wavelet symbol", gauss_err, 1e-8),
    ])
}

fn sop_rotation_conjugation(_ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let plane = crate::quadrature::default_plane_rule();
    let mut err: f64 = 0.0;
    let cases = [(gaussian_symbol(0.25, 0.5)?, 0.7), (gaussian_symbol(0.25, 0.5)?, -2.3), (hilbert_symbol(), 1.1)];
    for (phi, alpha) in &cases {
        let a = FrftAngle::new(*alpha)?;
        let m = s_phi_matrix(phi, 16, &plane)?;
        let rotated = s_phi_alpha_matrix(phi, a, 16, &plane)?;
        err = err.max(m.conjugate_by_rotation(a).max_diff(&rotated));
    }
    Ok(vec![part("D* M D vs rotated matrix", err, 1e-6)])
}

fn sop_hilbert_symbol(_ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let h = hilbert_symbol();
    let origin = h.eval(C64::new(0.0, 0.0)).norm();
    let step = 1e-5;
    let pts = [C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(-1.0, 0.5), C64::new(0.3, -1.2), C64::new(1.5, 1.0)];
    let fd_err = max_of(pts.iter().map(|&z| {
        let d = (h.eval(z + step) - h.eval(z - step)) / (2.0 * step);
        (d - (z * z * 0.5).exp() * (2.0 / PI).sqrt()).norm()
    }));
    let pv_err = max_of(
        [C64::new(0.5, 0.0), C64::new(-0.4, 1.0), C64::new(1.2, -0.8)]
            .iter()
            .map(|&z| (hilbert_symbol_pv_integral(z, 1e-12) - h.eval(z)).norm()),
    );
    Ok(vec![
        part("value at origin", origin, 0.0),
        part("finite-difference derivative", fd_err, 1e-6),
        part("principal value integral", pv_err, 1e-6),
    ])
}

fn sop_derivative_oracle(ctx: &mut Ctx) -> Result<Vec<CheckPart>> {
    let mut err: f64 = 0.0;
    for &dp in &[0usize, 1, 3, 5, 8] {
        for &df in &[0usize, 2, 4, 8] {
            let phi = polynomial_symbol(random_coeffs(&mut ctx.rng, dp + 1))?;
            let f = FockCoeffs::new(random_coeffs(&mut ctx.rng, df + 1))?;
            let exact = s_phi_apply_deriv(phi.taylor(), &f)?;
            for _ in 0..3 {
                let z = random_z(&mut ctx.rng, 2.0);
                let q = s_phi_apply(&phi, &f, z, &ctx.plane)?;
                err = err.max((q - fock_eval(&exact, z)).norm());
            }
        }
    }
    Ok(vec![part("quadrature vs derivative expansion", err, 1e-6)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_valid() {
        let r = VerificationReport::new(VerifyConfig::default(), Vec::new());
        assert!(r.passed);
        let text = emit_report(&r, false);
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.checks.len(), 0);
    }

    #[test]
    fn failing_check_propagates() {
        let ok = CheckResult::from_parts("b", vec![part("x", 1e-9, 1e-8)]);
        let bad = CheckResult::from_parts("a", vec![part("x", 1e-3, 1e-8), part("y", 0.0, 1e-8)]);
        assert!(ok.passed && !bad.passed);
        assert_eq!(bad.max_error, Some(1e-3));
        let r = VerificationReport::new(VerifyConfig::default(), vec![ok, bad]);
        assert!(!r.passed);
        assert_eq!(r.checks[0].name, "a");
        assert!(emit_report(&r, true).contains("\"passed\": false"));
        let nan = CheckResult::from_parts("c", vec![part("x", f64::NAN, 1.0)]);
        assert!(!nan.passed && nan.max_error.is_none());
    }

    #[test]
    fn names_are_unique_and_resolvable() {
        let mut names: Vec<_> = CHECKS.iter().map(|(n, _)| *n).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 15);
        for n in names {
            assert!(check_fn(n).is_some());
        }
        assert_eq!(checks_in(Suite::Frft).len(), 4);
    }

    #[test]
    fn quick_checks_pass() {
        let cfg = VerifyConfig::default();
        for name in ["basis.gaussian_integral", "frft.spectral_decomposition", "sop.hilbert_symbol"] {
            let r = run_check(name, &cfg).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
