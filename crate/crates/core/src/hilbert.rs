//! Classical and fractional Hilbert transforms.
//!
//! `H^α_φ = F_α⁻¹ m_φ F_α` with the Heaviside phase multiplier
//! `m_φ(x) = e^{−iφ} h(x) + e^{iφ} h(−x)`. The reference route runs this
//! chain on Hermite coefficients, applying `m_φ` on two half-line rules so
//! the jump at the origin is never straddled. The Fock-side kernel route
//! integrates `π^{−1/2} f(w) e^{z w̄} A_φ((e^{iα}z + e^{−iα}w̄)/√2)` against
//! `dλ(w)`, and the grid route multiplies an FFT by `−i sgn ξ`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::frft::{frft_coeffs, FrftAngle};
use crate::quadrature::{integrate_plane, HalfLineRule, PlaneRule, MAX_LINE_NODES, MAX_RADIAL_NODES};
use crate::representation::{bargmann_coeff, fock_eval, inverse_bargmann_coeff, FockCoeffs, HermiteCoeffs, SampledSignal};
use crate::special::{a_eval, a_phi_eval, hermite_fns_into, SQRT_PI};

/// Largest `|z|` for the Fock kernel routes.
pub const KERNEL_Z_MAX: f64 = 2.0;
/// Largest truncation for the Fock kernel routes.
pub const KERNEL_MAX_TRUNCATION: usize = 24;
/// Largest tolerated error of the chain on the identity multiplier.
pub const CHAIN_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HilbertParams {
    pub alpha: FrftAngle,
    pub phi: f64,
}

impl HilbertParams {
    pub fn new(alpha: f64, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidArgument(format!("phi must be finite, got {phi}")));
        }
        Ok(Self { alpha: FrftAngle::new(alpha)?, phi })
    }

    /// `α = φ = π/2`, the classical Hilbert transform.
    pub fn classical() -> Self {
        Self::new(FRAC_PI_2, FRAC_PI_2).expect("finite angles")
    }
}

/// Quadrature for the multiplier chain: a half-line rule sized for inputs of
/// `n_in` coefficients and outputs of `n_out` coefficients.
#[derive(Debug, Clone)]
pub struct HilbertWork {
    rule: HalfLineRule,
    n_in: usize,
    n_out: usize,
}

impl HilbertWork {
    /// Rules exact for every product `h_n h_m` with `n < n_in`, `m < n_out`.
    pub fn new(n_in: usize, n_out: usize) -> Result<Self> {
        if n_in == 0 || n_out == 0 {
            return Err(Error::InvalidArgument("truncations must be positive".into()));
        }
        let degree = n_in + n_out;
        let k_even = degree.div_ceil(2) + 4;
        let k_odd = degree.div_ceil(4) + 4;
        if k_even > MAX_LINE_NODES || k_odd > MAX_RADIAL_NODES {
            return Err(Error::Configuration(format!(
                "truncations {n_in} + {n_out} exceed the largest available half-line rules"
            )));
        }
        Ok(Self { rule: HalfLineRule::new(k_even, k_odd)?, n_in, n_out })
    }

    /// Explicit rule sizes; too small a rule is caught by the identity check
    /// inside [`fractional_hilbert`].
    pub fn with_rules(n_in: usize, n_out: usize, k_even: usize, k_odd: usize) -> Result<Self> {
        if n_in == 0 || n_out == 0 {
            return Err(Error::InvalidArgument("truncations must be positive".into()));
        }
        Ok(Self { rule: HalfLineRule::new(k_even, k_odd)?, n_in, n_out })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }
}

/// `(∫_0^∞ g h_m, ∫_{−∞}^0 g h_m)` for `g = Σ c_n h_n`, `m < n_out`.
fn half_line_projections(g: &HermiteCoeffs, work: &HilbertWork) -> Result<Vec<(C64, C64)>> {
    let n_basis = g.len().max(work.n_out);
    let mut basis = vec![0.0; n_basis];
    work.rule.split_integrals_many(work.n_out, |x, out| {
        hermite_fns_into(x, &mut basis);
        let gx: C64 = g.coeffs().iter().zip(&basis).map(|(c, h)| c * *h).sum();
        for (o, h) in out.iter_mut().zip(&basis) {
            *o = gx * *h;
        }
    })
}

/// `H^α_φ` on Hermite coefficients; the output has `work.n_out()` entries.
///
/// The same half-line integrals also give the chain with `φ = 0`, which must
/// reproduce its input; if it misses by more than 1e-6 the work rules are
/// too small and a configuration error is returned.
pub fn fractional_hilbert(h: &HermiteCoeffs, p: HilbertParams, work: &HilbertWork) -> Result<HermiteCoeffs> {
    if h.len() > work.n_in {
        return Err(Error::Configuration(format!(
            "input has {} coefficients but the work rules were sized for {}",
            h.len(),
            work.n_in
        )));
    }
    let g = frft_coeffs(h, p.alpha);
    let parts = half_line_projections(&g, work)?;
    let identity_err = parts
        .iter()
        .enumerate()
        .map(|(m, (pos, neg))| {
            let want = g.coeffs().get(m).copied().unwrap_or_default();
            (pos + neg - want).norm()
        })
        .fold(0.0, f64::max);
    if identity_err > CHAIN_TOLERANCE * g.norm().max(1.0) {
        return Err(Error::Configuration(format!(
            "multiplier chain misses the identity by {identity_err:.3e}; enlarge the work rules"
        )));
    }
    let (s, c) = p.phi.sin_cos();
    let minus = C64::new(c, -s);
    let plus = C64::new(c, s);
    let d: Vec<C64> = parts.iter().map(|(pos, neg)| minus * pos + plus * neg).collect();
    Ok(frft_coeffs(&HermiteCoeffs::new(d)?, p.alpha.negated()))
}

/// `B H^α_φ B⁻¹ F` evaluated at `z` through the multiplier chain.
pub fn hilbert_fock_chain_apply(f: &FockCoeffs, p: HilbertParams, z: C64, work: &HilbertWork) -> Result<C64> {
    let out = fractional_hilbert(&inverse_bargmann_coeff(f), p, work)?;
    Ok(fock_eval(&bargmann_coeff(&out), z))
}

fn check_kernel_envelope(f: &FockCoeffs, z: C64) -> Result<()> {
    if z.norm() > KERNEL_Z_MAX {
        return Err(Error::InvalidArgument(format!("|z| = {:.3} exceeds the kernel range {KERNEL_Z_MAX}", z.norm())));
    }
    if f.len() > KERNEL_MAX_TRUNCATION {
        return Err(Error::InvalidArgument(format!(
            "kernel routes support truncations up to {KERNEL_MAX_TRUNCATION}, got {}",
            f.len()
        )));
    }
    Ok(())
}

/// `π^{−1/2} ∫ f(w) e^{z w̄} A_φ((e^{iα}z + e^{−iα}w̄)/√2) dλ(w)`.
pub fn hilbert_fock_kernel_apply(f: &FockCoeffs, p: HilbertParams, z: C64, rule: &PlaneRule) -> Result<C64> {
    check_kernel_envelope(f, z)?;
    let rot = C64::from_polar(1.0, p.alpha.radians());
    let ez = rot * z;
    let v = integrate_plane(rule, |w| {
        let wb = w.conj();
        let u = (ez + rot.conj() * wb) * FRAC_1_SQRT_2;
        fock_eval(f, w) * (z * wb).exp() * a_phi_eval(p.phi, u)
    })?;
    Ok(v / SQRT_PI)
}

/// `(2/√π) ∫ f(w) e^{z w̄} A((z − w̄)/√2) dλ(w)`, the Fock-side classical
/// Hilbert transform.
pub fn hilbert_fock_s_apply(f: &FockCoeffs, z: C64, rule: &PlaneRule) -> Result<C64> {
    check_kernel_envelope(f, z)?;
    let v = integrate_plane(rule, |w| {
        let wb = w.conj();
        fock_eval(f, w) * (z * wb).exp() * a_eval((z - wb) * FRAC_1_SQRT_2)
    })?;
    Ok(v * (2.0 / SQRT_PI))
}

/// Classical Hilbert transform of grid samples: FFT, multiply by `−i sgn ξ`
/// (zero at the DC and Nyquist bins), inverse FFT.
///
/// The grid is treated as one period, so the result approximates the
/// transform on `ℝ` up to an error of order `x/L²` for grid length `L`.
pub fn hilbert_classical_grid(s: &SampledSignal) -> SampledSignal {
    let m = s.len();
    let mut buf = s.values().to_vec();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(m).process(&mut buf);
    for (k, v) in buf.iter_mut().enumerate() {
        let sign = if k == 0 || 2 * k == m {
            0.0
        } else if 2 * k < m {
            1.0
        } else {
            -1.0
        };
        *v *= C64::new(0.0, -sign / m as f64);
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let g = s.geometry();
    SampledSignal::new(g.x0, g.dx, buf).expect("transform of finite samples is finite")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::default_plane_rule;
    use crate::representation::{hermite_eval, GridGeometry};
    use crate::special::hermite_fn;

    fn test_vector() -> HermiteCoeffs {
        HermiteCoeffs::new((0..8).map(|n| C64::new(1.0 / (n as f64 + 1.0), (n as f64).sin() * 0.3)).collect()).unwrap()
    }

    #[test]
    fn identity_multiplier() {
        let work = HilbertWork::new(8, 64).unwrap();
        let h = test_vector();
        for &alpha in &[0.0, 0.4, FRAC_PI_2, -2.5] {
            let out = fractional_hilbert(&h, HilbertParams::new(alpha, 0.0).unwrap(), &work).unwrap();
            assert!(out.max_diff(&h) < 1e-10);
        }
    }

    #[test]
    fn undersized_rules_are_rejected() {
        let work = HilbertWork::with_rules(8, 64, 8, 4).unwrap();
        let err = fractional_hilbert(&test_vector(), HilbertParams::classical(), &work);
        assert!(matches!(err, Err(Error::Configuration(_))));
        let small = HilbertWork::new(4, 16).unwrap();
        assert!(matches!(fractional_hilbert(&test_vector(), HilbertParams::classical(), &small), Err(Error::Configuration(_))));
    }

    #[test]
    fn phase_decomposition() {
        let work = HilbertWork::new(8, 48).unwrap();
        let h = test_vector();
        for &(alpha, phi) in &[(0.3, 1.1), (-1.7, 2.4), (FRAC_PI_2, -0.6)] {
            let a = fractional_hilbert(&h, HilbertParams::new(alpha, phi).unwrap(), &work).unwrap();
            let b = fractional_hilbert(&h, HilbertParams::new(alpha, FRAC_PI_2).unwrap(), &work).unwrap();
            let combo = b.map_indexed(|n, c| {
                c * phi.sin() + h.coeffs().get(n).copied().unwrap_or_default() * phi.cos()
            });
            assert!(a.max_diff(&combo) < 1e-12);
        }
    }

    #[test]
    fn classical_chain_matches_grid() {
        let work = HilbertWork::new(1, 200).unwrap();
        let out = fractional_hilbert(&HermiteCoeffs::unit(0, 1), HilbertParams::classical(), &work).unwrap();
        let geom = GridGeometry::centered(1 << 16, 1.0 / 32.0).unwrap();
        let grid = hilbert_classical_grid(&SampledSignal::from_fn(geom, |x| C64::new(hermite_fn(0, x), 0.0)));
        let mid = geom.len / 2;
        for k in [-40i64, -7, 0, 3, 32] {
            let i = (mid as i64 + k) as usize;
            let x = geom.x(i);
            let chain = hermite_eval(&out, x);
            assert!((chain - grid.values()[i]).norm() < 2e-3, "x={x} chain={chain} grid={}", grid.values()[i]);
        }
    }

    #[test]
    fn grid_transform_properties() {
        let geom = GridGeometry::centered(1 << 14, 0.05).unwrap();
        let zero = SampledSignal::from_fn(geom, |_| C64::new(0.0, 0.0));
        assert!(hilbert_classical_grid(&zero).values().iter().all(|v| v.norm() == 0.0));
        let h0 = SampledSignal::from_fn(geom, |x| C64::new(hermite_fn(0, x), 0.0));
        let t = hilbert_classical_grid(&h0);
        assert!(t.values().iter().all(|v| v.im.abs() < 1e-12));
        let mid = geom.len / 2;
        for k in 1..200 {
            assert!((t.values()[mid + k].re + t.values()[mid - k].re).abs() < 1e-9);
        }
        let h1 = SampledSignal::from_fn(geom, |x| C64::new(hermite_fn(1, x), 0.0));
        let back = hilbert_classical_grid(&hilbert_classical_grid(&h1));
        for (a, b) in back.values().iter().zip(h1.values()) {
            assert!((a + b).norm() < 1e-10);
        }
    }

    #[test]
    fn kernel_at_zero_angle_is_reproducing() {
        let rule = default_plane_rule();
        let f = FockCoeffs::new(vec![C64::new(0.5, 0.0), C64::new(0.0, 1.0), C64::new(-0.2, 0.1)]).unwrap();
        let z = C64::new(0.4, -0.9);
        let v = hilbert_fock_kernel_apply(&f, HilbertParams::new(0.8, 0.0).unwrap(), z, &rule).unwrap();
        assert!((v - fock_eval(&f, z)).norm() < 1e-12);
        assert!(hilbert_fock_kernel_apply(&f, HilbertParams::classical(), C64::new(2.5, 0.0), &rule).is_err());
    }

    #[test]
    fn kernel_matches_chain() {
        let rule = default_plane_rule();
        let work = HilbertWork::new(7, 160).unwrap();
        for &(alpha, phi) in &[(FRAC_PI_2, FRAC_PI_2), (0.6, 1.0), (-2.0, 2.7)] {
            let p = HilbertParams::new(alpha, phi).unwrap();
            for n in [0usize, 3, 6] {
                let f = FockCoeffs::unit(n, 7);
                for &z in &[C64::new(0.2, 0.1), C64::new(-1.0, 0.8), C64::new(0.0, -1.5)] {
                    let a = hilbert_fock_kernel_apply(&f, p, z, &rule).unwrap();
                    let b = hilbert_fock_chain_apply(&f, p, z, &work).unwrap();
                    assert!((a - b).norm() < 1e-5, "alpha={alpha} phi={phi} n={n} z={z}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn s_kernel_is_the_classical_member() {
        let rule = default_plane_rule();
        let f = FockCoeffs::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.0)]).unwrap();
        for &z in &[C64::new(0.0, 0.0), C64::new(1.2, -0.3)] {
            let a = hilbert_fock_s_apply(&f, z, &rule).unwrap();
            let b = hilbert_fock_kernel_apply(&f, HilbertParams::classical(), z, &rule).unwrap();
            assert!((a - b).norm() < 1e-10);
        }
        let v = hilbert_fock_s_apply(&FockCoeffs::unit(0, 1), C64::new(0.0, 0.0), &rule).unwrap();
        assert!(v.norm() < 1e-12);
    }
}
