//! Fixed Gaussian rules for integrals over `ℝ` and over `ℂ` against the
//! Gaussian measure `dλ(z) = π⁻¹ e^{−|z|²} dA(z)`.
//!
//! Rules are immutable, cached by size and shared through `Arc`. Integrand
//! values may be computed in parallel but the reduction always runs in node
//! order with compensated summation, so results are bit-reproducible.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const MAX_LINE_NODES: usize = 512;
pub const MAX_RADIAL_NODES: usize = 256;
pub const MAX_ANGULAR_NODES: usize = 1024;

/// Default plane rule: 64 Gauss–Laguerre radial nodes times 256 angles.
pub const DEFAULT_RADIAL: usize = 64;
pub const DEFAULT_ANGULAR: usize = 256;

const PARALLEL_THRESHOLD: usize = 2048;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: C64) {
        self.sum.re = two_sum(self.sum.re, v.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, v.im, &mut self.comp.im);
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

#[inline]
fn two_sum(s: f64, v: f64, comp: &mut f64) -> f64 {
    let t = s + v;
    *comp += if s.abs() >= v.abs() { (s - t) + v } else { (v - t) + s };
    t
}

/// Sum in order with compensation.
pub fn compensated_sum<I: IntoIterator<Item = C64>>(it: I) -> C64 {
    let mut acc = CompensatedSum::new();
    for v in it {
        acc.add(v);
    }
    acc.value()
}

fn check_finite(values: &[C64]) -> Result<()> {
    if let Some((node, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.re.is_finite() && v.im.is_finite()))
    {
        return Err(Error::Evaluation {
            node,
            detail: format!("integrand value {v} is not finite"),
        });
    }
    Ok(())
}

/// Gauss–Hermite rule: `Σ wᵢ f(xᵢ) ≈ ∫_ℝ f(x) e^{−x²} dx`.
///
/// Nodes ascend. Alongside the Gaussian weights the rule keeps
/// `wᵢ e^{xᵢ²}`, computed without forming `e^{xᵢ²}`, for plain `∫ f dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    dx_weights: Vec<f64>,
}

impl LineRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights against `e^{−x²}`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights against `dx`, i.e. `wᵢ e^{xᵢ²}`.
    pub fn dx_weights(&self) -> &[f64] {
        &self.dx_weights
    }

    /// `∫_ℝ f(x) dx` through the substitution `x = σy`, which makes the rule
    /// exact for polynomials times `e^{−x²/σ²}`.
    pub fn integrate_dilated<F: Fn(f64) -> C64>(&self, sigma: f64, f: F) -> Result<C64> {
        let values: Vec<C64> = self.nodes.iter().map(|&y| f(sigma * y)).collect();
        check_finite(&values)?;
        let s = compensated_sum(values.iter().zip(&self.dx_weights).map(|(v, w)| v * *w));
        Ok(s * sigma)
    }
}

fn line_cache() -> &'static Mutex<HashMap<usize, Arc<LineRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<LineRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `k`-point Gauss–Hermite rule, `1 ≤ k ≤ 512`.
pub fn gauss_hermite_rule(k: usize) -> Result<Arc<LineRule>> {
    if k == 0 || k > MAX_LINE_NODES {
        return Err(Error::InvalidArgument(format!(
            "Gauss-Hermite rule size must be in 1..={MAX_LINE_NODES}, got {k}"
        )));
    }
    let mut cache = line_cache().lock().expect("rule cache poisoned");
    if let Some(rule) = cache.get(&k) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_gauss_hermite(k));
    cache.insert(k, Arc::clone(&rule));
    Ok(rule)
}

/// Roots of `ψ_n`, the orthonormal Hermite functions, by scanning for sign
/// changes on a grid finer than the smallest root gap and bisecting.
///
/// With `ψ` normalized, the Gaussian weight is `e^{−x²}/(n ψ_{n−1}(x)²)` and
/// the `dx` weight is `1/(n ψ_{n−1}(x)²)`, neither of which overflows.
fn build_gauss_hermite(n: usize) -> LineRule {
    let nf = n as f64;
    let step = 0.25 * PI / (2.0 * nf + 1.0).sqrt();
    let x_max = (2.0 * nf + 1.0).sqrt() + 1.0;
    let mut pos = Vec::with_capacity(n / 2);
    let mut lo = 0.5 * step;
    let mut f_lo = hermite_orthonormal_pair(n, lo).0;
    while lo < x_max && pos.len() < n / 2 {
        let hi = lo + step;
        let f_hi = hermite_orthonormal_pair(n, hi).0;
        if f_lo == 0.0 {
            pos.push(lo);
        } else if f_lo.signum() != f_hi.signum() {
            pos.push(bisect_root(n, lo, hi, f_lo));
        }
        lo = hi;
        f_lo = f_hi;
    }
    assert_eq!(pos.len(), n / 2, "Gauss-Hermite root scan missed roots for n = {n}");

    let weight_pair = |x: f64| {
        let (_, prev) = hermite_orthonormal_pair(n, x);
        let dxw = 1.0 / (nf * prev * prev);
        (dxw * (-x * x).exp(), dxw)
    };
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut dx_weights = Vec::with_capacity(n);
    for &x in pos.iter().rev() {
        let (w, d) = weight_pair(x);
        nodes.push(-x);
        weights.push(w);
        dx_weights.push(d);
    }
    if n % 2 == 1 {
        let (w, d) = weight_pair(0.0);
        nodes.push(0.0);
        weights.push(w);
        dx_weights.push(d);
    }
    for &x in &pos {
        let (w, d) = weight_pair(x);
        nodes.push(x);
        weights.push(w);
        dx_weights.push(d);
    }
    LineRule { nodes, weights, dx_weights }
}

fn bisect_root(n: usize, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let s_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = hermite_orthonormal_pair(n, mid).0;
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `(ψ_n(x), ψ_{n−1}(x))` for the orthonormal Hermite functions.
fn hermite_orthonormal_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25) * (-0.5 * x * x).exp();
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = x * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// Integral over `ℝ` with a Gauss–Hermite rule.
///
/// With `gaussian_part_removed` the caller passes `f(x) = F(x) e^{x²}` and the
/// Gaussian weights are used; otherwise `f` is the full integrand and the
/// `dx` weights are used.
pub fn integrate_line<F: Fn(f64) -> C64>(
    rule: &LineRule,
    f: F,
    gaussian_part_removed: bool,
) -> Result<C64> {
    let values: Vec<C64> = rule.nodes.iter().map(|&x| f(x)).collect();
    check_finite(&values)?;
    let w = if gaussian_part_removed { &rule.weights } else { &rule.dx_weights };
    Ok(compensated_sum(values.iter().zip(w).map(|(v, w)| v * *w)))
}

/// `(L_n(z), L_{n−1}(z), s)` with the true values equal to the returned
/// ones times `e^s`; rescaling keeps orders up to 256 in range.
fn laguerre_pair(n: usize, z: f64) -> (f64, f64, f64) {
    const RESCALE: f64 = 1e100;
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    let mut scale = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
        if p1.abs() > RESCALE {
            p1 /= RESCALE;
            p2 /= RESCALE;
            scale += RESCALE.ln();
        }
    }
    (p1, p2, scale)
}

/// `ln Σ_{k<n} L_k(t)²`. The weight at a node is the reciprocal of this sum,
/// which has no cancellation and is far less sensitive to the last bits of
/// the node than the derivative formula.
fn christoffel_log_sum(n: usize, z: f64) -> f64 {
    const RESCALE: f64 = 1e100;
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    let mut scale = 0.0;
    let mut acc = 1.0;
    for j in 1..n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
        if p1.abs() > RESCALE {
            p1 /= RESCALE;
            p2 /= RESCALE;
            acc /= RESCALE * RESCALE;
            scale += RESCALE.ln();
        }
        acc += p1 * p1;
    }
    acc.ln() + 2.0 * scale
}

/// Gauss–Laguerre nodes, weights and `wᵢ e^{tᵢ}` for `∫_0^∞ f(t) e^{−t} dt`.
fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut dtw = vec![0.0; n];
    let mut z = 0.0f64;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - x[i - 2])
            }
        };
        for _ in 0..200 {
            let (p1, p2, _) = laguerre_pair(n, z);
            let pp = nf * (p1 - p2) / z;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 4.0 * f64::EPSILON * z {
                break;
            }
        }
        let log_w = -christoffel_log_sum(n, z);
        x[i] = z;
        w[i] = log_w.exp();
        dtw[i] = (log_w + z).exp();
    }
    (x, w, dtw)
}

/// Product rule for `∫_ℂ f dλ`: Gauss–Laguerre in `t = |z|²` times a uniform
/// angular rule.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneRule {
    nodes: Vec<C64>,
    weights: Vec<f64>,
    k_radial: usize,
    k_angular: usize,
}

impl PlaneRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[C64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn k_radial(&self) -> usize {
        self.k_radial
    }

    pub fn k_angular(&self) -> usize {
        self.k_angular
    }
}

fn plane_cache() -> &'static Mutex<HashMap<(usize, usize), Arc<PlaneRule>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<PlaneRule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Plane rule with `k_radial ≤ 256` Laguerre nodes and `k_angular ≤ 1024`
/// equispaced angles.
pub fn plane_gaussian_rule(k_radial: usize, k_angular: usize) -> Result<Arc<PlaneRule>> {
    if k_radial == 0 || k_radial > MAX_RADIAL_NODES {
        return Err(Error::InvalidArgument(format!(
            "radial rule size must be in 1..={MAX_RADIAL_NODES}, got {k_radial}"
        )));
    }
    if k_angular == 0 || k_angular > MAX_ANGULAR_NODES {
        return Err(Error::InvalidArgument(format!(
            "angular rule size must be in 1..={MAX_ANGULAR_NODES}, got {k_angular}"
        )));
    }
    let key = (k_radial, k_angular);
    let mut cache = plane_cache().lock().expect("rule cache poisoned");
    if let Some(rule) = cache.get(&key) {
        return Ok(Arc::clone(rule));
    }
    let (t, w, _) = gauss_laguerre(k_radial);
    let mut nodes = Vec::with_capacity(k_radial * k_angular);
    let mut weights = Vec::with_capacity(k_radial * k_angular);
    let m = k_angular as f64;
    for (ti, wi) in t.iter().zip(&w) {
        let r = ti.sqrt();
        for j in 0..k_angular {
            let theta = 2.0 * PI * j as f64 / m;
            nodes.push(C64::from_polar(r, theta));
            weights.push(wi / m);
        }
    }
    let rule = Arc::new(PlaneRule { nodes, weights, k_radial, k_angular });
    cache.insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// The default 64 × 256 plane rule.
pub fn default_plane_rule() -> Arc<PlaneRule> {
    plane_gaussian_rule(DEFAULT_RADIAL, DEFAULT_ANGULAR).expect("default sizes are valid")
}

/// `∫_ℂ f(z) dλ(z)`.
///
/// The integrand must grow slower than `e^{|z|²}` along the radial nodes;
/// values are evaluated in parallel for large rules and summed in node order.
pub fn integrate_plane<F: Fn(C64) -> C64 + Sync>(rule: &PlaneRule, f: F) -> Result<C64> {
    let values: Vec<C64> = if rule.len() >= PARALLEL_THRESHOLD {
        rule.nodes.par_iter().map(|&z| f(z)).collect()
    } else {
        rule.nodes.iter().map(|&z| f(z)).collect()
    };
    check_finite(&values)?;
    Ok(compensated_sum(values.iter().zip(&rule.weights).map(|(v, w)| v * *w)))
}

/// Same integrand against several weight rows at once: returns
/// `∫ f(z) g_k(z) dλ(z)` for each `k`, evaluating `f` only once per node.
pub fn integrate_plane_projections<F, G>(rule: &PlaneRule, f: F, g: G, count: usize) -> Result<Vec<C64>>
where
    F: Fn(C64) -> C64 + Sync,
    G: Fn(C64, &mut [C64]) + Sync,
{
    let values: Vec<C64> = if rule.len() >= PARALLEL_THRESHOLD {
        rule.nodes.par_iter().map(|&z| f(z)).collect()
    } else {
        rule.nodes.iter().map(|&z| f(z)).collect()
    };
    check_finite(&values)?;
    let mut acc = vec![CompensatedSum::new(); count];
    let mut row = vec![C64::new(0.0, 0.0); count];
    for ((z, v), w) in rule.nodes.iter().zip(&values).zip(&rule.weights) {
        g(*z, &mut row);
        let vw = v * *w;
        for (a, r) in acc.iter_mut().zip(&row) {
            a.add(vw * r);
        }
    }
    Ok(acc.iter().map(CompensatedSum::value).collect())
}

/// Split rule for `∫_0^∞ G` and `∫_{−∞}^0 G` when `G` is a polynomial times
/// `e^{−2x²}`; exact for such `G` up to the rule degree.
///
/// The even part of `G` goes through a dilated Gauss–Hermite rule on the whole
/// line. The odd part goes through Gauss–Laguerre in `t = 2x²`, whose nodes
/// sit strictly inside the half-lines, so the origin is never sampled by the
/// half-line part.
#[derive(Debug, Clone)]
pub struct HalfLineRule {
    even: Arc<LineRule>,
    odd_nodes: Vec<f64>,
    odd_weights: Vec<f64>,
}

impl HalfLineRule {
    pub fn new(k_even: usize, k_odd: usize) -> Result<Self> {
        if k_odd == 0 || k_odd > MAX_RADIAL_NODES {
            return Err(Error::InvalidArgument(format!(
                "half-line rule size must be in 1..={MAX_RADIAL_NODES}, got {k_odd}"
            )));
        }
        let even = gauss_hermite_rule(k_even)?;
        let (t, _, dtw) = gauss_laguerre(k_odd);
        // ∫_0^∞ G_odd(x) dx = ∫_0^∞ e^{−t} [e^{t} G_odd(x) / (4x)] dt, x = √(t/2)
        let odd_nodes: Vec<f64> = t.iter().map(|t| (t / 2.0).sqrt()).collect();
        let odd_weights = dtw.iter().zip(&odd_nodes).map(|(w, x)| w / (4.0 * x)).collect();
        Ok(Self { even, odd_nodes, odd_weights })
    }

    pub fn even_len(&self) -> usize {
        self.even.len()
    }

    pub fn odd_len(&self) -> usize {
        self.odd_nodes.len()
    }

    /// `(∫_0^∞ G, ∫_{−∞}^0 G)`.
    pub fn split_integrals<F: Fn(f64) -> C64>(&self, g: F) -> Result<(C64, C64)> {
        let whole = self.even.integrate_dilated(std::f64::consts::FRAC_1_SQRT_2, &g)?;
        let mut acc = CompensatedSum::new();
        for (i, (x, w)) in self.odd_nodes.iter().zip(&self.odd_weights).enumerate() {
            let v = (g(*x) - g(-*x)) * 0.5;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Evaluation { node: i, detail: format!("half-line value {v} is not finite") });
            }
            acc.add(v * *w);
        }
        let odd = acc.value();
        Ok((whole * 0.5 + odd, whole * 0.5 - odd))
    }

    /// Many integrands at once: `g(x, out)` fills `out[k] = G_k(x)`.
    pub fn split_integrals_many<F: FnMut(f64, &mut [C64])>(&self, count: usize, mut g: F) -> Result<Vec<(C64, C64)>> {
        let sigma = std::f64::consts::FRAC_1_SQRT_2;
        let mut whole = vec![CompensatedSum::new(); count];
        let mut odd = vec![CompensatedSum::new(); count];
        let mut a = vec![C64::new(0.0, 0.0); count];
        let mut b = vec![C64::new(0.0, 0.0); count];
        for (i, (y, w)) in self.even.nodes().iter().zip(self.even.dx_weights()).enumerate() {
            g(sigma * y, &mut a);
            for (acc, v) in whole.iter_mut().zip(&a) {
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::Evaluation { node: i, detail: format!("value {v} is not finite") });
                }
                acc.add(v * (w * sigma));
            }
        }
        for (i, (x, w)) in self.odd_nodes.iter().zip(&self.odd_weights).enumerate() {
            g(*x, &mut a);
            g(-*x, &mut b);
            for ((acc, p), q) in odd.iter_mut().zip(&a).zip(&b) {
                let v = (p - q) * 0.5;
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::Evaluation { node: i, detail: format!("half-line value {v} is not finite") });
                }
                acc.add(v * *w);
            }
        }
        Ok(whole
            .iter()
            .zip(&odd)
            .map(|(w, o)| {
                let (w, o) = (w.value(), o.value());
                (w * 0.5 + o, w * 0.5 - o)
            })
            .collect())
    }
}
