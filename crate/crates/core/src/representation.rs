//! Functions on both sides of the Bargmann transform.
//!
//! On `L²(ℝ)` a function is either a [`SampledSignal`] on a uniform grid or a
//! truncated [`HermiteCoeffs`] expansion. On `F²` it is a truncated
//! [`FockCoeffs`] expansion in `e_n(z) = zⁿ/√n!`. Since `B h_n = e_n`, the
//! coefficient form of the transform is the identity on the vector; the
//! direct integral forms are kept for cross-checking.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{compensated_sum, integrate_plane, CompensatedSum, LineRule, PlaneRule};
use crate::special::{hermite_fns, hermite_fns_into, NormConstant};

pub const DEFAULT_TRUNCATION: usize = 64;
pub const MAX_TRUNCATION: usize = 256;
/// Largest `|z|` accepted by the direct transforms without a larger rule.
pub const DEFAULT_Z_RANGE: f64 = 3.0;
pub const MAX_INVERSE_DIRECT_TRUNCATION: usize = 40;

/// Uniform grid `x_i = x0 + i·dx`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub x0: f64,
    pub dx: f64,
    pub len: usize,
}

impl GridGeometry {
    pub fn new(x0: f64, dx: f64, len: usize) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(Error::InvalidArgument(format!("grid needs finite x0 and dx > 0, got x0 = {x0}, dx = {dx}")));
        }
        if len < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {len}")));
        }
        Ok(Self { x0, dx, len })
    }

    /// Grid of `len` points centred on 0 with spacing `dx`.
    pub fn centered(len: usize, dx: f64) -> Result<Self> {
        Self::new(-(len as f64 / 2.0) * dx, dx, len)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.x(i))
    }
}

/// Complex samples of a function on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    geometry: GridGeometry,
    values: Vec<C64>,
}

impl SampledSignal {
    pub fn new(x0: f64, dx: f64, values: Vec<C64>) -> Result<Self> {
        let geometry = GridGeometry::new(x0, dx, values.len())?;
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidArgument(format!("sample {i} is not finite")));
        }
        Ok(Self { geometry, values })
    }

    pub fn from_fn<F: Fn(f64) -> C64>(geometry: GridGeometry, f: F) -> Self {
        let values = geometry.points().map(f).collect();
        Self { geometry, values }
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.geometry.x(i)
    }

    /// Discrete `L²` norm `(dx Σ |vᵢ|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        (s * self.geometry.dx).sqrt()
    }

    /// Cubic Lagrange interpolation on the four surrounding samples, zero
    /// outside the grid. Near the ends the stencil shifts inward.
    pub fn interpolate(&self, x: f64) -> C64 {
        let g = &self.geometry;
        let m = self.values.len();
        let t = (x - g.x0) / g.dx;
        if !(t >= 0.0 && t <= (m - 1) as f64) {
            return C64::new(0.0, 0.0);
        }
        if m < 4 {
            let i = (t.floor() as usize).min(m - 2);
            let u = t - i as f64;
            return self.values[i] * (1.0 - u) + self.values[i + 1] * u;
        }
        let i = (t.floor() as usize).clamp(1, m - 3);
        let u = t - i as f64;
        let (p0, p1, p2, p3) = (self.values[i - 1], self.values[i], self.values[i + 1], self.values[i + 2]);
        let w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
        let w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
        let w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
        let w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
        p0 * w0 + p1 * w1 + p2 * w2 + p3 * w3
    }
}

macro_rules! coeff_vector {
    ($name:ident, $basis:literal) => {
        #[doc = concat!("Truncated coefficient vector in the ", $basis, " basis.")]
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(Vec<C64>);

        impl $name {
            pub fn new(coeffs: Vec<C64>) -> Result<Self> {
                if coeffs.is_empty() {
                    return Err(Error::InvalidArgument("coefficient vector must be non-empty".into()));
                }
                if let Some(i) = coeffs.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
                    return Err(Error::InvalidArgument(format!("coefficient {i} is not finite")));
                }
                Ok(Self(coeffs))
            }

            pub fn zeros(n: usize) -> Self {
                Self(vec![C64::new(0.0, 0.0); n.max(1)])
            }

            /// The `n`-th basis vector in a truncation of length `len`.
            pub fn unit(n: usize, len: usize) -> Self {
                let mut v = vec![C64::new(0.0, 0.0); len.max(n + 1)];
                v[n] = C64::new(1.0, 0.0);
                Self(v)
            }

            pub fn from_real(coeffs: &[f64]) -> Result<Self> {
                Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
            }

            pub fn coeffs(&self) -> &[C64] {
                &self.0
            }

            pub fn into_vec(self) -> Vec<C64> {
                self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn norm(&self) -> f64 {
                self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
            }

            /// Zero-padded or truncated copy of length `len`.
            pub fn resized(&self, len: usize) -> Self {
                let mut v = self.0.clone();
                v.resize(len.max(1), C64::new(0.0, 0.0));
                Self(v)
            }

            /// Max-norm distance after zero-padding the shorter vector.
            pub fn max_diff(&self, other: &Self) -> f64 {
                let n = self.len().max(other.len());
                let zero = C64::new(0.0, 0.0);
                (0..n)
                    .map(|i| (self.0.get(i).copied().unwrap_or(zero) - other.0.get(i).copied().unwrap_or(zero)).norm())
                    .fold(0.0, f64::max)
            }

            pub fn map_indexed<F: Fn(usize, C64) -> C64>(&self, f: F) -> Self {
                Self(self.0.iter().enumerate().map(|(n, c)| f(n, *c)).collect())
            }
        }
    };
}

coeff_vector!(HermiteCoeffs, "Hermite function `h_n`");
coeff_vector!(FockCoeffs, "normalized monomial `e_n(z) = zⁿ/√n!`");

/// `c_n = ∫ f(x) h_n(x) dx` for `n < n_coeffs`.
///
/// The rule is dilated by `1/√2` so that it matches the width of `f·h_n` when
/// `f` is a polynomial times `e^{−x²}`; for such `f` of degree below
/// `2k − n_coeffs` the projection is exact. The rule must have at least
/// `2·n_coeffs` nodes.
pub fn analyze<F: Fn(f64) -> C64>(f: F, n_coeffs: usize, rule: &LineRule) -> Result<HermiteCoeffs> {
    if n_coeffs == 0 || n_coeffs > MAX_TRUNCATION {
        return Err(Error::InvalidArgument(format!("truncation must be in 1..={MAX_TRUNCATION}, got {n_coeffs}")));
    }
    if rule.len() < 2 * n_coeffs {
        return Err(Error::Configuration(format!(
            "analysis with {n_coeffs} coefficients needs a rule of at least {} nodes, got {}",
            2 * n_coeffs,
            rule.len()
        )));
    }
    let mut acc = vec![CompensatedSum::new(); n_coeffs];
    let mut h = vec![0.0; n_coeffs];
    for (i, (&y, &w)) in rule.nodes().iter().zip(rule.dx_weights()).enumerate() {
        let x = FRAC_1_SQRT_2 * y;
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Evaluation { node: i, detail: format!("function value {v} is not finite") });
        }
        hermite_fns_into(x, &mut h);
        let vw = v * (w * FRAC_1_SQRT_2);
        for (a, hn) in acc.iter_mut().zip(&h) {
            a.add(vw * *hn);
        }
    }
    HermiteCoeffs::new(acc.iter().map(CompensatedSum::value).collect())
}

/// [`analyze`] applied to the cubic interpolant of a sampled signal.
pub fn analyze_signal(s: &SampledSignal, n_coeffs: usize, rule: &LineRule) -> Result<HermiteCoeffs> {
    analyze(|x| s.interpolate(x), n_coeffs, rule)
}

/// Value of `Σ c_n h_n(x)`.
pub fn hermite_eval(h: &HermiteCoeffs, x: f64) -> C64 {
    let basis = hermite_fns(h.len(), x);
    compensated_sum(h.coeffs().iter().zip(&basis).map(|(c, b)| c * *b))
}

/// Samples of `Σ c_n h_n` on a grid.
pub fn synthesize(h: &HermiteCoeffs, geometry: GridGeometry) -> SampledSignal {
    let mut basis = vec![0.0; h.len()];
    let values = geometry
        .points()
        .map(|x| {
            hermite_fns_into(x, &mut basis);
            compensated_sum(h.coeffs().iter().zip(&basis).map(|(c, b)| c * *b))
        })
        .collect();
    SampledSignal { geometry, values }
}

/// `B` in coefficients: `B h_n = e_n`, so the vector is carried over as is.
pub fn bargmann_coeff(h: &HermiteCoeffs) -> FockCoeffs {
    FockCoeffs(h.0.clone())
}

/// `B⁻¹` in coefficients.
pub fn inverse_bargmann_coeff(f: &FockCoeffs) -> HermiteCoeffs {
    HermiteCoeffs(f.0.clone())
}

/// `Σ c_n e_n(z)`.
pub fn fock_eval(f: &FockCoeffs, z: C64) -> C64 {
    let mut acc = CompensatedSum::new();
    let mut t = C64::new(1.0, 0.0);
    for (n, c) in f.coeffs().iter().enumerate() {
        if n > 0 {
            t *= z / (n as f64).sqrt();
        }
        acc.add(c * t);
    }
    acc.value()
}

fn check_z_range(z: C64, rule: &LineRule) -> Result<()> {
    let r = z.norm();
    let reach = (2.0 * rule.len() as f64).sqrt() - 8.0;
    if r <= DEFAULT_Z_RANGE || r <= reach {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "|z| = {r:.3} exceeds the range {:.3} resolvable by a {}-node rule",
            DEFAULT_Z_RANGE.max(reach),
            rule.len()
        )))
    }
}

/// `Bf(z) = c ∫ f(x) e^{2xz − x² − z²/2} dx` by quadrature.
///
/// `|z|` must be at most 3, or at most `√(2k) − 8` for a `k`-node rule.
pub fn bargmann_direct<F: Fn(f64) -> C64>(f: F, z: C64, rule: &LineRule) -> Result<C64> {
    check_z_range(z, rule)?;
    let zz = z * z * 0.5;
    let mut acc = CompensatedSum::new();
    for (i, (&x, &w)) in rule.nodes().iter().zip(rule.dx_weights()).enumerate() {
        let v = f(x) * (z * (2.0 * x) - x * x - zz).exp();
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Evaluation { node: i, detail: format!("Bargmann integrand {v} is not finite") });
        }
        acc.add(v * w);
    }
    Ok(acc.value() * NormConstant::VALUE)
}

/// `B⁻¹F(x) = c ∫ F(z) e^{2x z̄ − x² − z̄²/2} dλ(z)` by plane quadrature,
/// for truncations up to 40.
pub fn inverse_bargmann_direct(f: &FockCoeffs, x: f64, rule: &PlaneRule) -> Result<C64> {
    if f.len() > MAX_INVERSE_DIRECT_TRUNCATION {
        return Err(Error::InvalidArgument(format!(
            "direct inverse transform supports truncations up to {MAX_INVERSE_DIRECT_TRUNCATION}, got {}",
            f.len()
        )));
    }
    let v = integrate_plane(rule, |z| {
        let zb = z.conj();
        fock_eval(f, z) * (zb * (2.0 * x) - x * x - zb * zb * 0.5).exp()
    })?;
    Ok(v * NormConstant::VALUE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{default_plane_rule, gauss_hermite_rule};
    use crate::special::{fock_basis_eval, hermite_fn};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn analyze_basis_functions() {
        let rule = gauss_hermite_rule(128).unwrap();
        let v = analyze(|x| c(hermite_fn(3, x)), 32, &rule).unwrap();
        for (n, cn) in v.coeffs().iter().enumerate() {
            let e = if n == 3 { 1.0 } else { 0.0 };
            assert!((cn - e).norm() < 1e-10, "n={n} {cn}");
        }
        let v = analyze(|x| c((-x * x).exp()), 16, &rule).unwrap();
        assert!((v.coeffs()[0].re - 1.0 / NormConstant::VALUE).abs() < 1e-12);
        assert!(v.coeffs()[1..].iter().all(|c| c.norm() < 1e-12));
        let v = analyze(|x| c(hermite_fn(1, x) + 2.0 * hermite_fn(5, x)), 8, &rule).unwrap();
        let want = HermiteCoeffs::from_real(&[0.0, 1.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0]).unwrap();
        assert!(v.max_diff(&want) < 1e-12);
    }

    #[test]
    fn analyze_needs_margin() {
        let rule = gauss_hermite_rule(40).unwrap();
        assert!(matches!(analyze(|_| c(0.0), 21, &rule), Err(Error::Configuration(_))));
        assert!(analyze(|_| c(0.0), 20, &rule).is_ok());
    }

    #[test]
    fn synthesize_round_trip() {
        let geom = GridGeometry::centered(64, 0.25).unwrap();
        let s = synthesize(&HermiteCoeffs::unit(0, 4), geom);
        for (i, v) in s.values().iter().enumerate() {
            assert!((v.re - hermite_fn(0, geom.x(i))).abs() < 1e-15);
        }
        let z = synthesize(&HermiteCoeffs::zeros(8), geom);
        assert!(z.values().iter().all(|v| *v == c(0.0)));

        let coeffs: Vec<C64> = (0..32).map(|n| C64::new((n as f64 * 0.37).sin(), (n as f64 * 0.11).cos())).collect();
        let h = HermiteCoeffs::new(coeffs).unwrap();
        let rule = gauss_hermite_rule(96).unwrap();
        let back = analyze(|x| hermite_eval(&h, x), 32, &rule).unwrap();
        assert!(back.max_diff(&h) < 1e-9, "{}", back.max_diff(&h));
    }

    #[test]
    fn interpolation_is_exact_for_cubics() {
        let geom = GridGeometry::new(-2.0, 0.1, 41).unwrap();
        let p = |x: f64| c(1.0 - 2.0 * x + 0.5 * x * x * x);
        let s = SampledSignal::from_fn(geom, p);
        for &x in &[-2.0, -1.97, -0.33, 0.0, 1.234, 1.99, 2.0] {
            assert!((s.interpolate(x) - p(x)).norm() < 1e-12, "x={x}");
        }
        assert_eq!(s.interpolate(2.01), c(0.0));
        assert_eq!(s.interpolate(-3.0), c(0.0));
    }

    #[test]
    fn coefficient_transforms_are_identity() {
        let h = HermiteCoeffs::from_real(&[0.0, 1.0, 0.0]).unwrap();
        let f = bargmann_coeff(&h);
        assert_eq!(f.coeffs(), h.coeffs());
        assert_eq!(f.norm(), h.norm());
        assert_eq!(inverse_bargmann_coeff(&f), h);
    }

    #[test]
    fn direct_bargmann_of_basis() {
        let rule = gauss_hermite_rule(128).unwrap();
        let z = C64::new(0.3, 0.1);
        let v = bargmann_direct(|x| c(hermite_fn(0, x)), z, &rule).unwrap();
        assert!((v - 1.0).norm() < 1e-8);
        for k in 0..8 {
            let z = C64::from_polar(1.5, k as f64 * 0.8);
            let v = bargmann_direct(|x| c(hermite_fn(4, x)), z, &rule).unwrap();
            assert!((v - fock_basis_eval(4, z)).norm() < 1e-8);
        }
        let v = bargmann_direct(|x| c((-x * x).exp()), C64::new(-1.0, 2.0), &rule).unwrap();
        assert!((v - (std::f64::consts::PI / 2.0).powf(0.25)).norm() < 1e-10);
        assert!(bargmann_direct(|_| c(0.0), C64::new(7.5, 0.0), &rule).is_ok());
        assert!(bargmann_direct(|_| c(0.0), C64::new(7.5, 0.0), &gauss_hermite_rule(40).unwrap()).is_err());
    }

    #[test]
    fn direct_inverse_bargmann_of_basis() {
        let rule = default_plane_rule();
        for &x in &[-2.0, -0.5, 0.0, 0.7, 2.0] {
            let v = inverse_bargmann_direct(&FockCoeffs::unit(0, 1), x, &rule).unwrap();
            assert!((v - hermite_fn(0, x)).norm() < 1e-7);
            let v = inverse_bargmann_direct(&FockCoeffs::unit(2, 3), x, &rule).unwrap();
            assert!((v - hermite_fn(2, x)).norm() < 1e-7);
        }
        let v = inverse_bargmann_direct(&FockCoeffs::unit(1, 2), 0.0, &rule).unwrap();
        assert!(v.norm() < 1e-12);
        assert!(inverse_bargmann_direct(&FockCoeffs::zeros(41), 0.0, &rule).is_err());
    }

    #[test]
    fn fock_eval_values() {
        assert_eq!(fock_eval(&FockCoeffs::unit(0, 3), C64::new(5.0, -2.0)), c(1.0));
        let v = fock_eval(&FockCoeffs::unit(1, 2), C64::new(0.0, 2.0));
        assert!((v - C64::new(0.0, 2.0)).norm() < 1e-15);
    }
}
