//! Scalar special functions used by the transform kernels.
//!
//! Everything here is a pure function of its arguments. Square roots of
//! complex radicands go through [`BranchConvention`] so the two branch rules
//! used by the kernels cannot drift apart.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// `√π`.
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// The normalization constant `c = (2/π)^{1/4}` shared by the Bargmann
/// transform and the Hermite functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormConstant;

impl NormConstant {
    pub const VALUE: f64 = 0.893_243_841_738_002_3;

    pub fn value(self) -> f64 {
        Self::VALUE
    }
}

/// Which square root of a complex radicand to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchConvention {
    /// `√(a + ib)` with `a > 0`; the root has argument in `(−π/4, π/4)`.
    PrincipalHalfArg,
    /// `√(1 − i cot α)`; the root has argument in `(−π/2, π/2]`.
    ArgInHalfOpen,
}

impl BranchConvention {
    /// Square root of `z` under this convention.
    pub fn root(self, z: C64) -> C64 {
        // Normalize a signed-zero imaginary part so a negative real radicand
        // lands on +π/2 rather than −π/2.
        let z = if z.im == 0.0 { C64::new(z.re, 0.0) } else { z };
        let r = z.sqrt();
        match self {
            BranchConvention::PrincipalHalfArg => {
                debug_assert!(z.re > 0.0, "PrincipalHalfArg needs a positive real part");
                r
            }
            BranchConvention::ArgInHalfOpen => {
                let arg = r.arg();
                if arg <= -PI / 2.0 || arg > PI / 2.0 {
                    -r
                } else {
                    r
                }
            }
        }
    }

    /// Half-open interval `(lo, hi]` the argument of the root must lie in.
    pub fn arg_interval(self) -> (f64, f64) {
        match self {
            BranchConvention::PrincipalHalfArg => (-PI / 4.0, PI / 4.0),
            BranchConvention::ArgInHalfOpen => (-PI / 2.0, PI / 2.0),
        }
    }
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence.
pub fn hermite_poly(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Hermite function `h_n(x) = c/√(2ⁿn!) e^{−x²} H_n(√2 x)`.
///
/// Runs the recurrence on the normalized values directly, so orders in the
/// hundreds neither overflow nor lose precision.
pub fn hermite_fn(n: usize, x: f64) -> f64 {
    let mut prev = NormConstant::VALUE * (-x * x).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = 2.0 * x / (kf + 1.0).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `h_0(x), …, h_{len−1}(x)` written into `out`.
pub fn hermite_fns_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = NormConstant::VALUE * (-x * x).exp();
    if out.len() > 1 {
        out[1] = 2.0 * x * out[0];
    }
    for k in 1..out.len().saturating_sub(1) {
        let kf = k as f64;
        out[k + 1] = 2.0 * x / (kf + 1.0).sqrt() * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
}

/// `h_0(x), …, h_{len−1}(x)`.
pub fn hermite_fns(len: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; len];
    hermite_fns_into(x, &mut out);
    out
}

/// Fock basis element `e_n(z) = zⁿ/√n!`.
pub fn fock_basis_eval(n: usize, z: C64) -> C64 {
    let mut t = C64::new(1.0, 0.0);
    for k in 1..=n {
        t *= z / (k as f64).sqrt();
    }
    t
}

/// `e_0(z), …, e_{len−1}(z)`.
pub fn fock_basis_all(len: usize, z: C64) -> Vec<C64> {
    let mut out = Vec::with_capacity(len);
    let mut t = C64::new(1.0, 0.0);
    for k in 0..len {
        if k > 0 {
            t *= z / (k as f64).sqrt();
        }
        out.push(t);
    }
    out
}

/// Reproducing kernel of the Fock space, `K(z, w) = e^{z w̄}`.
pub fn reproducing_kernel(z: C64, w: C64) -> C64 {
    (z * w.conj()).exp()
}

/// Closed form of `∫_ℝ e^{−(a+ib)(x+z)²} dx = √π / √(a+ib)`, valid for every
/// complex shift `z` when `a > 0`.
pub fn gaussian_integral_closed(a: f64, b: f64) -> Result<C64> {
    if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "gaussian integral needs a > 0 and finite b, got a = {a}, b = {b}"
        )));
    }
    let root = BranchConvention::PrincipalHalfArg.root(C64::new(a, b));
    Ok(C64::new(SQRT_PI, 0.0) / root)
}

/// `∫_0^z e^{−u²} du`, which equals `(√π/2) erf(z)`.
///
/// Maclaurin series where it does not cancel (`|Re z| ≤ 1.5` or `|z| ≤ 2`),
/// otherwise the Laplace continued fraction for the complementary integral
/// in the right half-plane and oddness for the left. Relative error stays
/// near 1e-14 on `|z| ≤ 6`.
pub fn erf_half_integral(z: C64) -> C64 {
    if z.re.abs() <= 1.5 || z.norm() <= 2.0 {
        return erf_half_series(z);
    }
    if z.re < 0.0 {
        return -erf_half_complement(-z);
    }
    erf_half_complement(z)
}

fn erf_half_series(z: C64) -> C64 {
    let zz = z * z;
    let mut term = z;
    let mut sum = z;
    let mut comp = C64::new(0.0, 0.0);
    for k in 1..4000 {
        let kf = k as f64;
        term *= -zz / kf;
        let add = term / (2.0 * kf + 1.0);
        // Neumaier-compensated accumulation.
        let t = sum + add;
        comp += if sum.norm_sqr() >= add.norm_sqr() {
            (sum - t) + add
        } else {
            (add - t) + sum
        };
        sum = t;
        if add.norm() <= 1e-17 * (sum.norm() + f64::MIN_POSITIVE) && kf > zz.norm() {
            break;
        }
    }
    sum + comp
}

/// `√π/2 − ∫_z^∞ e^{−u²} du` for `Re z > 0`, where the tail is
/// `(e^{−z²}/2) · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + …))))`.
fn erf_half_complement(z: C64) -> C64 {
    const TINY: f64 = 1e-300;
    let tiny = C64::new(TINY, 0.0);
    let mut f = z;
    let mut c = f;
    let mut d = C64::new(0.0, 0.0);
    for n in 1..5000 {
        let a = n as f64 / 2.0;
        d = z + d * a;
        if d.norm() < TINY {
            d = tiny;
        }
        c = z + c.inv() * a;
        if c.norm() < TINY {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    C64::new(SQRT_PI / 2.0, 0.0) - (-z * z).exp() / (f * 2.0)
}

/// `erf(z)`.
pub fn erf(z: C64) -> C64 {
    erf_half_integral(z) * FRAC_2_SQRT_PI
}

/// `A_φ(z) = √π cos φ − 2i sin φ ∫_0^z e^{−u²} du`.
pub fn a_phi_eval(phi: f64, z: C64) -> C64 {
    let (s, c) = phi.sin_cos();
    let base = C64::new(SQRT_PI * c, 0.0);
    if s == 0.0 {
        return base;
    }
    base + C64::new(0.0, -2.0 * s) * erf_half_integral(z)
}

/// `A(z) = ∫_0^z e^{u²} du`, the antiderivative of `e^{z²}` vanishing at 0.
pub fn a_eval(z: C64) -> C64 {
    let iz = C64::new(-z.im, z.re);
    let v = erf_half_integral(iz);
    C64::new(v.im, -v.re)
}

/// Heaviside phase multiplier `e^{−iφ} h(x) + e^{iφ} h(−x)` with `h(0) = 1`,
/// so the value at `x = 0` is `2 cos φ`.
pub fn heaviside_multiplier(phi: f64, x: f64) -> C64 {
    let (s, c) = phi.sin_cos();
    if x > 0.0 {
        C64::new(c, -s)
    } else if x < 0.0 {
        C64::new(c, s)
    } else {
        C64::new(2.0 * c, 0.0)
    }
}
