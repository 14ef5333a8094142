//! Singular integral operators on the Fock space,
//!
//! `S_φ f(z) = ∫ f(w) e^{z w̄} φ(z − w̄) dλ(w)` and the rotated family
//! `S^α_φ f(z) = ∫ f(w) e^{z w̄} φ(e^{iα}z − e^{−iα}w̄) dλ(w)`,
//!
//! together with the wavelet transform and the symbols it induces.
//!
//! Every integrand here is a holomorphic function of `w` times an
//! antiholomorphic one, so averaging over the angular nodes leaves a power
//! series in `|w|²` and the Laguerre radial rule is exact up to rounding
//! whenever the symbol grows more slowly than `e^{|z|²/2}`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formats::{MatrixFile, SymbolFile};
use crate::frft::FrftAngle;
use crate::quadrature::{
    compensated_sum, gauss_hermite_rule, integrate_line, integrate_plane, integrate_plane_projections,
    CompensatedSum, LineRule, PlaneRule,
};
use crate::representation::{
    bargmann_direct, fock_eval, hermite_eval, inverse_bargmann_coeff, FockCoeffs, SampledSignal,
};
use crate::special::{a_eval, fock_basis_all, SQRT_PI};

/// Number of stored Taylor coefficients for non-polynomial symbols.
pub const TAYLOR_TERMS: usize = 64;
/// Largest symbol growth rate accepted by the quadrature routes.
pub const MAX_GROWTH: f64 = 0.4;
pub const MAX_Z: f64 = 2.0;
pub const MAX_TRUNCATION: usize = 24;
/// Cap on `N` and `K` in [`s_phi_apply_deriv`].
pub const MAX_DERIV_DEGREE: usize = 64;
pub const MAX_PHI_N: usize = 30;
const CONSISTENCY_TOL: f64 = 1e-8;
/// Circle used to read Taylor coefficients off quadrature values.
const CAUCHY_RADIUS: f64 = 2.0;
const CAUCHY_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolKind {
    Constant,
    Polynomial,
    Gaussian,
    Hilbert,
    PhiN,
    FromG,
}

impl SymbolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SymbolKind::Constant => "const",
            SymbolKind::Polynomial => "poly",
            SymbolKind::Gaussian => "gauss",
            SymbolKind::Hilbert => "hilbert",
            SymbolKind::PhiN => "phi-n",
            SymbolKind::FromG => "from-g",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "const" => SymbolKind::Constant,
            "poly" => SymbolKind::Polynomial,
            "gauss" => SymbolKind::Gaussian,
            "hilbert" => SymbolKind::Hilbert,
            "phi-n" => SymbolKind::PhiN,
            "from-g" => SymbolKind::FromG,
            other => return Err(Error::InvalidArgument(format!("unknown symbol kind `{other}`"))),
        })
    }
}

type Evaluator = Arc<dyn Fn(C64) -> C64 + Send + Sync>;

/// A symbol `φ ∈ F²` carried both as a closed-form evaluator and as its
/// monomial Taylor coefficients `φ(z) = Σ a_k z^k`.
#[derive(Clone)]
pub struct FockSymbol {
    kind: SymbolKind,
    params: serde_json::Value,
    eval: Evaluator,
    taylor: Vec<C64>,
    growth_bound: f64,
}

impl fmt::Debug for FockSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockSymbol")
            .field("kind", &self.kind)
            .field("params", &self.params)
            .field("taylor_len", &self.taylor.len())
            .field("growth_bound", &self.growth_bound)
            .finish()
    }
}

fn horner(a: &[C64], z: C64) -> C64 {
    a.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
}

impl FockSymbol {
    /// Builds a symbol and checks that the Taylor coefficients reproduce
    /// the evaluator to 1e-8 on `|z| ≤ 2`.
    pub fn new(
        kind: SymbolKind,
        params: serde_json::Value,
        eval: Evaluator,
        taylor: Vec<C64>,
        growth_bound: f64,
    ) -> Result<Self> {
        if taylor.is_empty() {
            return Err(Error::InvalidArgument("symbol needs at least one Taylor coefficient".into()));
        }
        if !(growth_bound >= 0.0) || !growth_bound.is_finite() {
            return Err(Error::InvalidArgument(format!("growth bound must be finite and non-negative, got {growth_bound}")));
        }
        let sym = Self { kind, params, eval, taylor, growth_bound };
        let err = sym.consistency_error();
        if !(err <= CONSISTENCY_TOL) {
            return Err(Error::InvalidArgument(format!(
                "{} symbol: Taylor coefficients miss the evaluator by {err:.3e} on |z| <= 2",
                kind.as_str()
            )));
        }
        Ok(sym)
    }

    /// Symbol given only by Taylor coefficients.
    pub fn from_taylor(kind: SymbolKind, params: serde_json::Value, taylor: Vec<C64>, growth_bound: f64) -> Result<Self> {
        let a = taylor.clone();
        Self::new(kind, params, Arc::new(move |z| horner(&a, z)), taylor, growth_bound)
    }

    /// Largest `|φ(z) − Σ a_k z^k| / max(1, |φ(z)|)` over circles of radius
    /// 0, 0.5, …, 2.
    pub fn consistency_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for ring in 0..=4 {
            let r = 0.5 * ring as f64;
            for j in 0..16 {
                let z = C64::from_polar(r, 2.0 * PI * (j as f64 + 0.25) / 16.0);
                let e = self.eval(z);
                let t = horner(&self.taylor, z);
                let d = (e - t).norm() / e.norm().max(1.0);
                worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
            }
        }
        worst
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.eval)(z)
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn params(&self) -> &serde_json::Value {
        &self.params
    }

    /// Monomial coefficients `a_k`.
    pub fn taylor(&self) -> &[C64] {
        &self.taylor
    }

    pub fn growth_bound(&self) -> f64 {
        self.growth_bound
    }

    /// Coefficients in the `e_n` basis, `a_n √n!`, for `n < len`.
    pub fn fock_coeffs(&self, len: usize) -> FockCoeffs {
        let mut scale = 1.0;
        let v = (0..len.max(1))
            .map(|n| {
                if n > 0 {
                    scale *= (n as f64).sqrt();
                }
                self.taylor.get(n).copied().unwrap_or_default() * scale
            })
            .collect();
        FockCoeffs::new(v).expect("finite coefficients")
    }

    /// Truncated `F²` norm `(Σ_{n<len} |a_n|² n!)^{1/2}`.
    pub fn fock_norm(&self, len: usize) -> f64 {
        self.fock_coeffs(len).norm()
    }

    pub fn to_file(&self) -> SymbolFile {
        SymbolFile {
            kind: self.kind.as_str().to_string(),
            params: self.params.clone(),
            taylor: self.taylor.iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    /// Rebuilds a symbol from a file. Closed forms are restored from the
    /// parameters where they exist; otherwise the Taylor coefficients are used.
    pub fn from_file(file: &SymbolFile) -> Result<Self> {
        let kind = SymbolKind::parse(&file.kind)?;
        let taylor: Vec<C64> = file.taylor.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        let num = |key: &str| {
            file.params
                .get(key)
                .and_then(serde_json::Value::as_f64)
                .ok_or_else(|| Error::Format(format!("{} symbol needs numeric parameter `{key}`", file.kind)))
        };
        match kind {
            SymbolKind::Gaussian => gaussian_symbol(num("a")?, num("b")?),
            SymbolKind::Hilbert => Ok(hilbert_symbol()),
            SymbolKind::PhiN => phi_n_closed(num("n")? as usize, num("s")?),
            SymbolKind::Constant | SymbolKind::Polynomial => {
                Self::from_taylor(kind, file.params.clone(), taylor, 0.0)
            }
            SymbolKind::FromG => {
                let growth = num("growth_bound")?;
                Self::from_taylor(kind, file.params.clone(), taylor, growth)
            }
        }
    }
}

/// `φ ≡ κ`.
pub fn constant_symbol(kappa: C64) -> FockSymbol {
    FockSymbol::from_taylor(SymbolKind::Constant, serde_json::json!({"re": kappa.re, "im": kappa.im}), vec![kappa], 0.0)
        .expect("constant symbol is consistent")
}

/// `φ(z) = Σ a_k z^k`.
pub fn polynomial_symbol(a: Vec<C64>) -> Result<FockSymbol> {
    if a.len() > MAX_DERIV_DEGREE {
        return Err(Error::InvalidArgument(format!("polynomial degree must be below {MAX_DERIV_DEGREE}")));
    }
    let degree = a.len().saturating_sub(1);
    FockSymbol::from_taylor(SymbolKind::Polynomial, serde_json::json!({"degree": degree}), a, 0.0)
}

/// Taylor coefficients of `e^{a(z−b)²}` from `(n+1)c_{n+1} = 2a(c_{n−1} − b c_n)`.
fn gaussian_taylor(a: f64, b: f64, len: usize) -> Vec<C64> {
    let mut c = vec![0.0; len];
    c[0] = (a * b * b).exp();
    if len > 1 {
        c[1] = -2.0 * a * b * c[0];
    }
    for n in 1..len.saturating_sub(1) {
        c[n + 1] = 2.0 * a * (c[n - 1] - b * c[n]) / (n + 1) as f64;
    }
    c.into_iter().map(|v| C64::new(v, 0.0)).collect()
}

/// `φ(z) = e^{a(z−b)²}` for `0 < a ≤ 0.4`.
pub fn gaussian_symbol(a: f64, b: f64) -> Result<FockSymbol> {
    if !(a > 0.0 && a <= MAX_GROWTH) {
        return Err(Error::InvalidArgument(format!(
            "gaussian symbol needs 0 < a <= {MAX_GROWTH} (S_phi is bounded only for a < 1/2), got a = {a}"
        )));
    }
    if !b.is_finite() {
        return Err(Error::InvalidArgument(format!("gaussian symbol needs finite b, got {b}")));
    }
    FockSymbol::new(
        SymbolKind::Gaussian,
        serde_json::json!({"a": a, "b": b}),
        Arc::new(move |z: C64| ((z - b) * (z - b) * a).exp()),
        gaussian_taylor(a, b, TAYLOR_TERMS),
        a,
    )
}

/// `φ(z) = (2/√π) A(z/√2)`, whose operator `S_φ` is the Fock-side Hilbert
/// transform. Only odd powers appear:
/// `a_{2k+1} = (2/√π) / (2^{k+1/2} k! (2k+1))`.
pub fn hilbert_symbol() -> FockSymbol {
    let mut taylor = vec![C64::new(0.0, 0.0); TAYLOR_TERMS];
    let mut term = 2.0 / SQRT_PI * FRAC_1_SQRT_2;
    let mut k = 0usize;
    while 2 * k + 1 < TAYLOR_TERMS {
        taylor[2 * k + 1] = C64::new(term / (2 * k + 1) as f64, 0.0);
        k += 1;
        term /= 2.0 * k as f64;
    }
    FockSymbol::new(
        SymbolKind::Hilbert,
        serde_json::json!({}),
        Arc::new(|z: C64| a_eval(z * FRAC_1_SQRT_2) * (2.0 / SQRT_PI)),
        taylor,
        0.5,
    )
    .expect("hilbert symbol is consistent")
}

/// `ln n!` for `n < len`.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    for n in 0..len {
        if n > 0 {
            acc += (n as f64).ln();
        }
        out.push(acc);
    }
    out
}

/// Product of two truncated power series.
fn series_product(p: &[C64], q: &[C64], len: usize) -> Vec<C64> {
    (0..len)
        .map(|n| compensated_sum((0..=n).filter(|&i| i < p.len() && n - i < q.len()).map(|i| p[i] * q[n - i])))
        .collect()
}

/// Polynomial part `P_n` of `φ_n = P_n(z) e^{s²z²/(2(s²+2))}`, built from
/// `P_0 = √(2|s|/(s²+2))`, `P_1 = −(sz/(s²+2)) P_0` and
/// `P_n = −(sz/(s²+2)) P_{n−1} + ((n−1)/(s²+2)) P_{n−2}`.
pub fn phi_n_polynomial(n: usize, s: f64) -> Vec<f64> {
    let d = s * s + 2.0;
    let mut prev: Vec<f64> = Vec::new();
    let mut cur = vec![(2.0 * s.abs() / d).sqrt()];
    for k in 1..=n {
        let mut next = vec![0.0; k + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] -= s / d * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] += (k as f64 - 1.0) / d * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// The symbol induced by the wavelet `g_n(x) = xⁿ e^{−x²}` at dilation `s`,
/// in closed form.
pub fn phi_n_closed(n: usize, s: f64) -> Result<FockSymbol> {
    if n > MAX_PHI_N {
        return Err(Error::InvalidArgument(format!("phi_n supports n <= {MAX_PHI_N}, got {n}")));
    }
    if s == 0.0 || !s.is_finite() {
        return Err(Error::InvalidArgument(format!("dilation must be finite and nonzero, got {s}")));
    }
    let beta = s * s / (2.0 * (s * s + 2.0));
    let p = phi_n_polynomial(n, s);
    let pc: Vec<C64> = p.iter().map(|&v| C64::new(v, 0.0)).collect();
    let len = TAYLOR_TERMS.max(n + 1);
    let taylor = series_product(&pc, &gaussian_taylor(beta, 0.0, len), len);
    FockSymbol::new(
        SymbolKind::PhiN,
        serde_json::json!({"n": n, "s": s}),
        Arc::new(move |z: C64| horner(&pc, z) * (z * z * beta).exp()),
        taylor,
        beta,
    )
}

/// Leading coefficient `√(2|s|/(s²+2)) (−1)ⁿ sⁿ / (s²+2)ⁿ` of `P_n`.
pub fn phi_n_leading_coefficient(n: usize, s: f64) -> f64 {
    let d = s * s + 2.0;
    (2.0 * s.abs() / d).sqrt() * (-s / d).powi(n as i32)
}

type Wavelet = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// A wavelet `g` with dilation `s ≠ 0`.
///
/// When `g` is a polynomial times `e^{−c x²}` the decay rate `c` may be
/// declared, which fixes the growth rate of the induced symbol at
/// `s²/(2(s² + 2c))`; otherwise the rate is estimated numerically.
#[derive(Clone)]
pub struct WaveletSpec {
    g: Wavelet,
    s: f64,
    gaussian_decay: Option<f64>,
    label: String,
}

impl fmt::Debug for WaveletSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WaveletSpec")
            .field("label", &self.label)
            .field("s", &self.s)
            .field("gaussian_decay", &self.gaussian_decay)
            .finish()
    }
}

impl WaveletSpec {
    pub fn new<G: Fn(f64) -> C64 + Send + Sync + 'static>(g: G, s: f64, label: &str) -> Result<Self> {
        if s == 0.0 || !s.is_finite() {
            return Err(Error::InvalidArgument(format!("dilation must be finite and nonzero, got {s}")));
        }
        Ok(Self { g: Arc::new(g), s, gaussian_decay: None, label: label.to_string() })
    }

    /// Declares `g = polynomial × e^{−c x²}`.
    pub fn with_gaussian_decay(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("gaussian decay rate must be positive, got {c}")));
        }
        self.gaussian_decay = Some(c);
        Ok(self)
    }

    /// `g_n(x) = xⁿ e^{−x²}`.
    pub fn gaussian_moment(n: usize, s: f64) -> Result<Self> {
        let p = n as i32;
        Self::new(move |x| C64::new(x.powi(p) * (-x * x).exp(), 0.0), s, &format!("x^{n} e^(-x^2)"))?
            .with_gaussian_decay(1.0)
    }

    /// `g(x) = e^{−(ε/2)x² + bx}`.
    pub fn shifted_gaussian(eps: f64, b: f64, s: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon must be positive, got {eps}")));
        }
        Self::new(move |x| C64::new((-0.5 * eps * x * x + b * x).exp(), 0.0), s, &format!("e^(-{eps}/2 x^2 + {b} x)"))?
            .with_gaussian_decay(0.5 * eps)
    }

    /// Cubic interpolant of grid samples, zero outside the grid.
    pub fn from_signal(signal: SampledSignal, s: f64) -> Result<Self> {
        Self::new(move |x| signal.interpolate(x), s, "sampled")
    }

    pub fn g(&self, x: f64) -> C64 {
        (self.g)(x)
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn gaussian_decay(&self) -> Option<f64> {
        self.gaussian_decay
    }

    /// `(‖g‖₁, ‖g‖₂)` by quadrature.
    pub fn norms(&self, rule: &LineRule) -> Result<(f64, f64)> {
        let l1 = integrate_line(rule, |x| C64::new(self.g(x).norm(), 0.0), false)?.re;
        let l2 = integrate_line(rule, |x| C64::new(self.g(x).norm_sqr(), 0.0), false)?.re.sqrt();
        Ok((l1, l2))
    }

    /// `∫ g(t) e^{−s²t²/2 − s t u} dt`.
    fn inner(&self, u: C64, rule: &LineRule) -> Result<C64> {
        let s = self.s;
        integrate_line(rule, |t| self.g(t) * (C64::new(-0.5 * s * s * t * t, 0.0) - u * (s * t)).exp(), false)
    }
}

/// Rejects wavelets whose quadrature norms are not finite or change between
/// a rule and one of half its size by more than 0.1% (`L²`) or 2% (`L¹`,
/// whose integrand has kinks at the zeros of `g`).
fn check_integrable(w: &WaveletSpec, rule: &LineRule) -> Result<()> {
    let half = gauss_hermite_rule((rule.len() / 2).max(1))?;
    let (a1, a2) = w.norms(rule)?;
    let (b1, b2) = w.norms(&half)?;
    let stable = |a: f64, b: f64, tol: f64| a.is_finite() && b.is_finite() && (a - b).abs() <= tol * a.abs().max(1e-300);
    if !(stable(a1, b1, 2e-2) && stable(a2, b2, 1e-3)) || a2 == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "wavelet `{}` does not look integrable: L1 norm {a1:.6e} vs {b1:.6e}, L2 norm {a2:.6e} vs {b2:.6e} at two rule sizes",
            w.label
        )));
    }
    Ok(())
}

/// Growth rate of `φ` read off `max log|φ|` on the circles `r = 6` and `r = 8`.
fn estimate_growth(eval: &dyn Fn(C64) -> C64) -> f64 {
    let max_log = |r: f64| {
        (0..64)
            .map(|j| eval(C64::from_polar(r, 2.0 * PI * j as f64 / 64.0)).norm().ln())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (m6, m8) = (max_log(6.0), max_log(8.0));
    ((m8 - m6) / (64.0 - 36.0)).clamp(0.0, 0.5)
}

/// `φ(z) = √(|s|/π) ∫ g(t) e^{−s²t²/2 − tsz} dt`, the symbol with
/// `S_φ = B W_g B⁻¹`.
///
/// The evaluator is the line quadrature; the Taylor coefficients come from
/// projecting onto `e_n` with the default plane rule.
pub fn phi_from_g(w: &WaveletSpec, rule: &LineRule) -> Result<FockSymbol> {
    check_integrable(w, rule)?;
    let s = w.s;
    let pref = (s.abs() / PI).sqrt();
    let rule_arc = Arc::new(rule.clone());
    let spec = w.clone();
    let eval: Evaluator = Arc::new(move |z: C64| {
        spec.inner(z, &rule_arc).map(|v| v * pref).unwrap_or(C64::new(f64::NAN, f64::NAN))
    });
    let growth = match w.gaussian_decay {
        Some(c) => s * s / (2.0 * (s * s + 2.0 * c)),
        None => estimate_growth(eval.as_ref()),
    };
    let plane = crate::quadrature::default_plane_rule();
    let e = eval.clone();
    let proj = integrate_plane_projections(
        &plane,
        move |z| e(z),
        |z, row: &mut [C64]| {
            let zb = z.conj();
            let mut t = C64::new(1.0, 0.0);
            for (n, r) in row.iter_mut().enumerate() {
                if n > 0 {
                    t *= zb / n as f64;
                }
                *r = t;
            }
        },
        TAYLOR_TERMS,
    )?;
    FockSymbol::new(
        SymbolKind::FromG,
        serde_json::json!({"g": w.label, "s": s, "growth_bound": growth}),
        eval,
        proj,
        growth,
    )
}

fn check_envelope(phi: &FockSymbol, f: &FockCoeffs, z: C64) -> Result<()> {
    if phi.growth_bound > MAX_GROWTH && phi.kind != SymbolKind::Hilbert {
        return Err(Error::InvalidArgument(format!(
            "symbol growth rate {:.3} exceeds the validated bound {MAX_GROWTH}",
            phi.growth_bound
        )));
    }
    if z.norm() > MAX_Z {
        return Err(Error::InvalidArgument(format!("|z| = {:.3} exceeds {MAX_Z}", z.norm())));
    }
    if f.len() > MAX_TRUNCATION {
        return Err(Error::InvalidArgument(format!(
            "operator routes support truncations up to {MAX_TRUNCATION}, got {}",
            f.len()
        )));
    }
    Ok(())
}

/// `S_φ f(z)` by plane quadrature.
///
/// The symbol's growth rate must be at most 0.4. The Hilbert symbol grows
/// at rate 1/2 but its kernel still leaves an integrand decaying like
/// `e^{−|w|²/2}`, and it is accepted.
pub fn s_phi_apply(phi: &FockSymbol, f: &FockCoeffs, z: C64, rule: &PlaneRule) -> Result<C64> {
    s_phi_alpha_apply(phi, FrftAngle::new(0.0)?, f, z, rule)
}

/// `S^α_φ f(z)` by plane quadrature.
pub fn s_phi_alpha_apply(phi: &FockSymbol, alpha: FrftAngle, f: &FockCoeffs, z: C64, rule: &PlaneRule) -> Result<C64> {
    check_envelope(phi, f, z)?;
    let rot = C64::from_polar(1.0, alpha.radians());
    let ez = rot * z;
    integrate_plane(rule, |w| {
        let wb = w.conj();
        fock_eval(f, w) * (z * wb).exp() * phi.eval(ez - rot.conj() * wb)
    })
}

/// `S_φ f` for polynomial `φ = Σ a_k z^k` and `f`, exactly, from
/// `S_φ f(z) = Σ_k a_k Σ_j C(k,j) z^{k−j} (−1)^j f^{(j)}(z)`.
///
/// The result has `N + K − 1` coefficients; `N` and `K` are capped at 64.
pub fn s_phi_apply_deriv(a: &[C64], f: &FockCoeffs) -> Result<FockCoeffs> {
    let (k_len, n_len) = (a.len(), f.len());
    if k_len == 0 || k_len > MAX_DERIV_DEGREE || n_len > MAX_DERIV_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "derivative route needs 1 <= K <= {MAX_DERIV_DEGREE} and N <= {MAX_DERIV_DEGREE}, got K = {k_len}, N = {n_len}"
        )));
    }
    let out_len = n_len + k_len - 1;
    let lf = ln_factorials(out_len + 1);
    let mut acc = vec![CompensatedSum::new(); out_len];
    for (k, ak) in a.iter().enumerate() {
        if *ak == C64::new(0.0, 0.0) {
            continue;
        }
        for j in 0..=k {
            let ln_binom = lf[k] - lf[j] - lf[k - j];
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            for (n, cn) in f.coeffs().iter().enumerate().skip(j) {
                let m = n + k - 2 * j;
                // c_n/√n! · n!/(n−j)! · √m!
                let factor = (ln_binom + 0.5 * lf[n] - lf[n - j] + 0.5 * lf[m]).exp();
                acc[m].add(ak * cn * (sign * factor));
            }
        }
    }
    FockCoeffs::new(acc.iter().map(CompensatedSum::value).collect())
}

/// Truncated matrix `M[n][m] = ⟨S e_m, e_n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    n: usize,
    entries: Vec<C64>,
}

impl OperatorMatrix {
    pub fn from_fn<F: Fn(usize, usize) -> C64>(n: usize, f: F) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                entries.push(f(r, c));
            }
        }
        Self { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.n + col]
    }

    /// `D_α* M D_α` with `D_α = diag(e^{−inα})`.
    pub fn conjugate_by_rotation(&self, alpha: FrftAngle) -> Self {
        Self::from_fn(self.n, |r, c| alpha.phase(r).conj() * self.get(r, c) * alpha.phase(c))
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n).map(|r| compensated_sum((0..self.n).map(|c| self.get(r, c) * v[c]))).collect()
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n).map(|c| compensated_sum((0..self.n).map(|r| self.get(r, c).conj() * v[r]))).collect()
    }

    /// Largest singular value by power iteration on `M*M` from a fixed
    /// starting vector.
    pub fn operator_norm(&self) -> f64 {
        let mut v: Vec<C64> = (0..self.n).map(|i| C64::new(1.0, 0.1 * i as f64)).collect();
        let mut sigma = 0.0;
        for _ in 0..2000 {
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|c| *c /= norm);
            let w = self.apply_adjoint(&self.apply(&v));
            let next = w.iter().zip(&v).map(|(a, b)| (a * b.conj()).re).sum::<f64>().max(0.0).sqrt();
            v = w;
            if (next - sigma).abs() <= 1e-14 * next {
                return next;
            }
            sigma = next;
        }
        sigma
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            n: self.n,
            entries: (0..self.n).map(|r| (0..self.n).map(|c| [self.get(r, c).re, self.get(r, c).im]).collect()).collect(),
        }
    }
}

/// Matrix of `S_φ`: exact from the Taylor coefficients when `2N − 1` of
/// them are stored, otherwise by quadrature.
pub fn s_phi_matrix(phi: &FockSymbol, n: usize, rule: &PlaneRule) -> Result<OperatorMatrix> {
    if n == 0 || n > MAX_TRUNCATION {
        return Err(Error::InvalidArgument(format!("matrix size must be in 1..={MAX_TRUNCATION}, got {n}")));
    }
    let needed = 2 * n - 1;
    let exact_poly = matches!(phi.kind, SymbolKind::Constant | SymbolKind::Polynomial);
    if phi.taylor.len() >= needed || exact_poly {
        let a: Vec<C64> = phi.taylor.iter().take(needed).copied().collect();
        let cols: Vec<FockCoeffs> =
            (0..n).map(|m| s_phi_apply_deriv(&a, &FockCoeffs::unit(m, m + 1))).collect::<Result<_>>()?;
        return Ok(OperatorMatrix::from_fn(n, |r, c| cols[c].coeffs().get(r).copied().unwrap_or_default()));
    }
    s_phi_alpha_matrix(phi, FrftAngle::new(0.0)?, n, rule)
}

/// Matrix of `S^α_φ` by plane quadrature: each column `S^α_φ e_m` is
/// sampled on the circle `|z| = 2` and its Taylor coefficients are read off
/// with an FFT of length 64.
pub fn s_phi_alpha_matrix(phi: &FockSymbol, alpha: FrftAngle, n: usize, rule: &PlaneRule) -> Result<OperatorMatrix> {
    if n == 0 || n > MAX_TRUNCATION {
        return Err(Error::InvalidArgument(format!("matrix size must be in 1..={MAX_TRUNCATION}, got {n}")));
    }
    let m_pts = CAUCHY_POINTS;
    let points: Vec<C64> =
        (0..m_pts).map(|j| C64::from_polar(CAUCHY_RADIUS, 2.0 * PI * j as f64 / m_pts as f64)).collect();
    let cols: Vec<Vec<C64>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let e_m = FockCoeffs::unit(m, m + 1);
            let mut vals = points
                .iter()
                .map(|&z| s_phi_alpha_apply(phi, alpha, &e_m, z, rule))
                .collect::<Result<Vec<C64>>>()?;
            let mut planner = rustfft::FftPlanner::<f64>::new();
            planner.plan_fft_forward(m_pts).process(&mut vals);
            let mut scale = 1.0 / m_pts as f64;
            Ok((0..n)
                .map(|k| {
                    if k > 0 {
                        scale *= (k as f64).sqrt() / CAUCHY_RADIUS;
                    }
                    vals[k] * scale
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(OperatorMatrix::from_fn(n, |r, c| cols[c][r]))
}

/// `W_g f(x) = (|s|π)^{−1/2} ∫ f(t) g((t − x)/s) dt`.
pub fn wavelet_transform<F: Fn(f64) -> C64>(f: F, w: &WaveletSpec, x: f64, rule: &LineRule) -> Result<C64> {
    let s = w.s;
    let v = integrate_line(rule, |t| f(t) * w.g((t - x) / s), false)?;
    Ok(v / (s.abs() * PI).sqrt())
}

/// `W_g f` on the grid of `f`, by the trapezoid rule over the samples.
pub fn wavelet_transform_sampled(f: &SampledSignal, w: &WaveletSpec) -> SampledSignal {
    let geom = f.geometry();
    let scale = geom.dx / (w.s.abs() * PI).sqrt();
    let values: Vec<C64> = (0..f.len())
        .into_par_iter()
        .map(|i| {
            let x = f.x(i);
            compensated_sum(f.values().iter().enumerate().map(|(j, v)| v * w.g((f.x(j) - x) / w.s))) * scale
        })
        .collect();
    SampledSignal::new(geom.x0, geom.dx, values).expect("same grid as the input")
}

fn wavelet_growth(w: &WaveletSpec) -> Result<f64> {
    let s = w.s;
    match w.gaussian_decay {
        Some(c) => Ok(s * s / (2.0 * (s * s + 2.0 * c))),
        None => Err(Error::InvalidArgument(
            "the nested wavelet route needs a wavelet with declared gaussian decay".into(),
        )),
    }
}

/// `√(|s|/π) ∫ f(w) e^{z w̄} [∫ g(t) e^{−s²t²/2 − st(z − w̄)} dt] dλ(w)`, the
/// Fock-side wavelet operator, by nested quadrature.
pub fn wavelet_fock_apply(f: &FockCoeffs, w: &WaveletSpec, z: C64, plane: &PlaneRule, line: &LineRule) -> Result<C64> {
    let growth = wavelet_growth(w)?;
    if growth > MAX_GROWTH {
        return Err(Error::InvalidArgument(format!(
            "induced symbol growth {growth:.3} exceeds the validated bound {MAX_GROWTH}"
        )));
    }
    if z.norm() > MAX_Z || f.len() > MAX_TRUNCATION {
        return Err(Error::InvalidArgument(format!(
            "wavelet route needs |z| <= {MAX_Z} and truncation <= {MAX_TRUNCATION}"
        )));
    }
    let pref = (w.s.abs() / PI).sqrt();
    let v = integrate_plane(plane, |u| {
        let ub = u.conj();
        match w.inner(z - ub, line) {
            Ok(inner) => fock_eval(f, u) * (z * ub).exp() * inner,
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    })?;
    Ok(v * pref)
}

/// `B W_g B⁻¹ F (z)` on the real line: synthesize `B⁻¹F`, apply the wavelet
/// transform at the nodes of the Bargmann integral, then integrate.
pub fn wavelet_conjugated_direct(f: &FockCoeffs, w: &WaveletSpec, z: C64, line: &LineRule) -> Result<C64> {
    let h = inverse_bargmann_coeff(f);
    let inner_rule = line;
    let outer = gauss_hermite_rule(line.len().max(64))?;
    let values: Vec<(f64, C64)> = outer
        .nodes()
        .iter()
        .map(|&x| wavelet_transform(|t| hermite_eval(&h, t), w, x, inner_rule).map(|v| (x, v)))
        .collect::<Result<_>>()?;
    let lookup = |x: f64| {
        values
            .binary_search_by(|(n, _)| n.partial_cmp(&x).expect("finite nodes"))
            .map(|i| values[i].1)
            .unwrap_or(C64::new(f64::NAN, f64::NAN))
    };
    bargmann_direct(lookup, z, &outer)
}

/// `(1/π) ∫ e^{−t²}(e^{√2 t z} − 1)/t dt` by adaptive quadrature, the
/// ordinary-integral form of the principal value defining the Hilbert
/// symbol.
pub fn hilbert_symbol_pv_integral(z: C64, tol: f64) -> C64 {
    let r2 = std::f64::consts::SQRT_2;
    let v = crate::oracle::integrate_real_line(
        |t| {
            if t == 0.0 {
                return z * r2;
            }
            let e = (z * (r2 * t)).exp() - 1.0;
            // expm1-style series near 0 avoids cancellation
            let e = if (z * (r2 * t)).norm() < 1e-3 {
                let u = z * (r2 * t);
                u * (1.0 + u * (0.5 + u / 6.0))
            } else {
                e
            };
            e * ((-t * t).exp() / t)
        },
        tol,
    );
    v / PI
}

/// `e_n(z)` for `n < len`; re-exported for callers building test vectors.
pub fn basis_row(len: usize, z: C64) -> Vec<C64> {
    fock_basis_all(len, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::default_plane_rule;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn gaussian_taylor_matches_closed_form() {
        let s = gaussian_symbol(0.25, 1.0).unwrap();
        assert!((s.eval(c(1.0)) - 1.0).norm() < 1e-15);
        assert!(s.consistency_error() < 1e-12);
        assert!(gaussian_symbol(0.5, 0.0).is_err());
        assert!(gaussian_symbol(0.0, 0.0).is_err());
        assert!(gaussian_symbol(0.41, 0.0).is_err());
    }

    #[test]
    fn inconsistent_symbols_are_rejected() {
        let r = FockSymbol::new(SymbolKind::FromG, serde_json::json!({}), Arc::new(|z: C64| z.exp()), vec![c(1.0), c(1.0)], 0.0);
        assert!(r.is_err());
    }

    #[test]
    fn hilbert_symbol_basics() {
        let h = hilbert_symbol();
        assert_eq!(h.eval(c(0.0)), c(0.0));
        let d = (h.eval(c(0.5 + 1e-5)) - h.eval(c(0.5 - 1e-5))) / 2e-5;
        assert!((d - (2.0 / PI).sqrt() * 0.125f64.exp()).norm() < 1e-6);
        let n30 = h.fock_norm(30);
        let n60 = h.fock_norm(60);
        assert!(n60.is_finite() && n60 > n30);
    }

    #[test]
    fn phi_n_recursion_values() {
        let p2 = phi_n_polynomial(2, 1.0);
        let p0 = (2.0f64 / 3.0).sqrt();
        assert!((p2[0] - p0 / 3.0).abs() < 1e-15 && p2[1].abs() < 1e-15 && (p2[2] - p0 / 9.0).abs() < 1e-15);
        for n in 0..=30 {
            for &s in &[1.0, -1.0, 2.0, 0.5] {
                let p = phi_n_polynomial(n, s);
                let lead = phi_n_leading_coefficient(n, s);
                assert!(lead != 0.0);
                assert!((p[n] - lead).abs() <= 1e-12 * lead.abs());
            }
        }
    }

    #[test]
    fn phi_from_g_matches_closed_forms() {
        let rule = gauss_hermite_rule(128).unwrap();
        for n in 0..=3 {
            let w = WaveletSpec::gaussian_moment(n, 1.0).unwrap();
            let a = phi_from_g(&w, &rule).unwrap();
            let b = phi_n_closed(n, 1.0).unwrap();
            for &z in &[c(0.0), C64::new(1.2, -0.7), C64::new(-2.0, 0.0)] {
                assert!((a.eval(z) - b.eval(z)).norm() < 1e-8);
            }
        }
        let w = WaveletSpec::shifted_gaussian(1.0, 0.5, 1.0).unwrap();
        let a = phi_from_g(&w, &rule).unwrap();
        for &z in &[c(0.3), C64::new(-1.0, 1.5)] {
            let want = ((z - 0.5) * (z - 0.5) / 4.0).exp();
            assert!((a.eval(z) - want).norm() < 1e-8);
        }
    }

    #[test]
    fn non_integrable_wavelet_is_rejected() {
        let rule = gauss_hermite_rule(128).unwrap();
        let w = WaveletSpec::new(|x| c(1.0 / (SQRT_PI * x)), -1.0, "1/(sqrt(pi) x)").unwrap();
        assert!(phi_from_g(&w, &rule).is_err());
        assert!(WaveletSpec::new(|_| c(0.0), 0.0, "zero").is_err());
    }

    #[test]
    fn deriv_route_examples() {
        let f = FockCoeffs::from_real(&[0.3, -1.0, 2.0]).unwrap();
        let out = s_phi_apply_deriv(&[C64::new(2.0, 1.0)], &f).unwrap();
        assert!(out.max_diff(&f.map_indexed(|_, v| v * C64::new(2.0, 1.0))) < 1e-15);
        let out = s_phi_apply_deriv(&[c(0.0), c(1.0)], &FockCoeffs::unit(0, 1)).unwrap();
        assert!(out.max_diff(&FockCoeffs::unit(1, 2)) < 1e-15);
        // φ(z) = z on e_1 gives z² − 1
        let out = s_phi_apply_deriv(&[c(0.0), c(1.0)], &FockCoeffs::unit(1, 2)).unwrap();
        assert!(out.max_diff(&FockCoeffs::from_real(&[-1.0, 0.0, 2f64.sqrt()]).unwrap()) < 1e-15);
    }

    #[test]
    fn quadrature_matches_deriv_route() {
        let rule = default_plane_rule();
        let phi = polynomial_symbol(vec![C64::new(0.5, 0.1), c(-1.0), C64::new(0.0, 0.3), c(0.2)]).unwrap();
        let f = FockCoeffs::new(vec![c(1.0), C64::new(0.0, -0.5), c(0.25), C64::new(0.1, 0.1)]).unwrap();
        let exact = s_phi_apply_deriv(phi.taylor(), &f).unwrap();
        for &z in &[c(0.0), C64::new(1.0, 0.5), C64::new(-0.3, -1.4)] {
            let q = s_phi_apply(&phi, &f, z, &rule).unwrap();
            assert!((q - fock_eval(&exact, z)).norm() < 1e-10);
        }
        let k = constant_symbol(C64::new(0.0, 2.0));
        let z = C64::new(0.7, 0.7);
        assert!((s_phi_apply(&k, &f, z, &rule).unwrap() - fock_eval(&f, z) * C64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn envelope_guards() {
        let rule = default_plane_rule();
        let f = FockCoeffs::unit(0, 1);
        let phi = phi_n_closed(0, 3.0).unwrap();
        assert!(phi.growth_bound() > MAX_GROWTH);
        assert!(s_phi_apply(&phi, &f, c(0.0), &rule).is_err());
        assert!(s_phi_apply(&constant_symbol(c(1.0)), &f, c(2.5), &rule).is_err());
        assert!(s_phi_apply(&constant_symbol(c(1.0)), &FockCoeffs::zeros(25), c(0.0), &rule).is_err());
        assert!(s_phi_apply(&hilbert_symbol(), &f, c(1.0), &rule).is_ok());
    }

    #[test]
    fn matrices() {
        let rule = default_plane_rule();
        let id = s_phi_matrix(&constant_symbol(c(1.0)), 6, &rule).unwrap();
        assert!(id.max_diff(&OperatorMatrix::from_fn(6, |r, c| if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })) < 1e-15);
        let z = s_phi_matrix(&polynomial_symbol(vec![c(0.0), c(1.0)]).unwrap(), 5, &rule).unwrap();
        // z e_m = √(m+1) e_{m+1}, ∂ e_m = √m e_{m−1}
        for r in 0..5 {
            for col in 0..5 {
                let want = if r == col + 1 {
                    (r as f64).sqrt()
                } else if r + 1 == col {
                    -(col as f64).sqrt()
                } else {
                    0.0
                };
                assert!((z.get(r, col) - want).norm() < 1e-14);
            }
        }
        let g = gaussian_symbol(0.25, 0.0).unwrap();
        let alpha = FrftAngle::new(0.7).unwrap();
        let exact = s_phi_matrix(&g, 8, &rule).unwrap();
        let quad = s_phi_alpha_matrix(&g, FrftAngle::new(0.0).unwrap(), 8, &rule).unwrap();
        assert!(exact.max_diff(&quad) < 1e-9);
        let rotated = s_phi_alpha_matrix(&g, alpha, 8, &rule).unwrap();
        assert!(exact.conjugate_by_rotation(alpha).max_diff(&rotated) < 1e-9);
    }

    #[test]
    fn wavelet_paths_agree() {
        let plane = default_plane_rule();
        let line = gauss_hermite_rule(128).unwrap();
        let w = WaveletSpec::gaussian_moment(0, 1.0).unwrap();
        let phi = phi_n_closed(0, 1.0).unwrap();
        let f = FockCoeffs::new(vec![c(0.4), C64::new(0.0, 1.0), c(-0.3)]).unwrap();
        for &z in &[c(0.0), C64::new(0.8, -0.6)] {
            let a = wavelet_fock_apply(&f, &w, z, &plane, &line).unwrap();
            let b = s_phi_apply(&phi, &f, z, &plane).unwrap();
            let d = wavelet_conjugated_direct(&f, &w, z, &line).unwrap();
            assert!((a - b).norm() < 1e-10, "{a} {b}");
            assert!((a - d).norm() < 1e-8, "{a} {d}");
        }
    }

    #[test]
    fn wavelet_of_gaussian_closed_form() {
        // g = e^{−x²}, s = 1, f = h_0: W f(x) = c/√2 · e^{−x²/2}
        let rule = gauss_hermite_rule(64).unwrap();
        let w = WaveletSpec::gaussian_moment(0, 1.0).unwrap();
        let cst = crate::special::NormConstant::VALUE;
        for &x in &[-1.0, 0.0, 0.6, 2.0] {
            let v = wavelet_transform(|t| c(crate::special::hermite_fn(0, t)), &w, x, &rule).unwrap();
            assert!((v - cst / 2f64.sqrt() * (-x * x / 2.0).exp()).norm() < 1e-12);
        }
        assert_eq!(wavelet_transform(|_| c(0.0), &w, 0.3, &rule).unwrap(), c(0.0));
    }

    #[test]
    fn pv_rewrite_matches_symbol() {
        let h = hilbert_symbol();
        for &z in &[c(0.5), C64::new(-0.4, 1.0), C64::new(1.2, -0.8)] {
            let v = hilbert_symbol_pv_integral(z, 1e-13);
            assert!((v - h.eval(z)).norm() < 1e-9, "{v} {}", h.eval(z));
        }
    }
}
