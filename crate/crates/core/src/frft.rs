//! Fractional Fourier transform `F_α`.
//!
//! The canonical realization multiplies Hermite coefficients by `e^{−inα}`,
//! which is exact for every angle. The chirp integral
//!
//! `F_α f(x) = c′ e^{ix² cot α} ∫ e^{−2i(x t csc α − t² cot α / 2)} f(t) dt`
//!
//! and the Fock-side rotation `f(z) ↦ f(e^{−iα}z)` are the cross-checks.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::quadrature::CompensatedSum;
use crate::representation::{FockCoeffs, HermiteCoeffs};
use crate::special::{BranchConvention, SQRT_PI};

/// Smallest `|sin α|` for which the chirp integral is evaluated.
pub const MIN_SIN_ALPHA: f64 = 1e-3;

/// Half-width of the interval the chirp integral is truncated to.
pub const INTEGRAL_HALF_WIDTH: f64 = 10.0;

/// A rotation angle reduced once to `(−π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrftAngle {
    alpha: f64,
}

impl FrftAngle {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("angle must be finite, got {alpha}")));
        }
        let mut a = alpha.rem_euclid(TAU);
        if a > PI {
            a -= TAU;
        }
        Ok(Self { alpha: a })
    }

    pub fn radians(self) -> f64 {
        self.alpha
    }

    pub fn negated(self) -> Self {
        // −π is outside the range; π is its own negative mod 2π
        if self.alpha == PI {
            self
        } else {
            Self { alpha: -self.alpha }
        }
    }

    /// `e^{−inα}`, exact at `α ∈ {0, π, ±π/2}` and conjugate-symmetric in `α`.
    pub fn phase(self, n: usize) -> C64 {
        let a = self.alpha;
        if a == 0.0 {
            return C64::new(1.0, 0.0);
        }
        if a == PI {
            return C64::new(if n % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        }
        if a.abs() == FRAC_PI_2 {
            let p = match n % 4 {
                0 => C64::new(1.0, 0.0),
                1 => C64::new(0.0, -1.0),
                2 => C64::new(-1.0, 0.0),
                _ => C64::new(0.0, 1.0),
            };
            return if a > 0.0 { p } else { p.conj() };
        }
        let t = (n as f64 * a.abs()) % TAU;
        let (s, c) = t.sin_cos();
        C64::new(c, -a.signum() * s)
    }

    pub fn phases(self, len: usize) -> Vec<C64> {
        (0..len).map(|n| self.phase(n)).collect()
    }
}

/// `c′ = √(1 − i cot α)/√π`, root argument in `(−π/2, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedPrefactor {
    value: C64,
}

impl BranchedPrefactor {
    pub fn new(angle: FrftAngle) -> Result<Self> {
        let (s, c) = angle.radians().sin_cos();
        if s.abs() < MIN_SIN_ALPHA {
            return Err(Error::RepresentationUnavailable(format!(
                "|sin α| = {:.3e} is below {MIN_SIN_ALPHA:e}; use the coefficient transform",
                s.abs()
            )));
        }
        let root = BranchConvention::ArgInHalfOpen.root(C64::new(1.0, -c / s));
        Ok(Self { value: root / SQRT_PI })
    }

    pub fn value(self) -> C64 {
        self.value
    }
}

/// `c_n ↦ e^{−inα} c_n`.
pub fn frft_coeffs(h: &HermiteCoeffs, alpha: FrftAngle) -> HermiteCoeffs {
    h.map_indexed(|n, c| c * alpha.phase(n))
}

/// Taylor coefficients of `z ↦ f(e^{−iα}z)`.
pub fn fock_rotation(f: &FockCoeffs, alpha: FrftAngle) -> FockCoeffs {
    f.map_indexed(|n, c| c * alpha.phase(n))
}

/// Keeps the coefficients with `n ≡ k (mod 4)`.
pub fn spectral_projection(k: usize, h: &HermiteCoeffs) -> Result<HermiteCoeffs> {
    if k > 3 {
        return Err(Error::InvalidArgument(format!("projection index must be in 0..=3, got {k}")));
    }
    Ok(h.map_indexed(|n, c| if n % 4 == k { c } else { C64::new(0.0, 0.0) }))
}

/// Eigenvalues `e^{−inα}` for `n < len`.
pub fn frft_spectrum(alpha: FrftAngle, len: usize) -> Vec<C64> {
    alpha.phases(len)
}

/// The chirp integral at one point.
///
/// `f` must be negligible outside `[−10, 10]`. The integral is a trapezoid
/// sum with a step resolving the fastest phase of the chirp there, which for
/// rapidly decaying smooth `f` converges geometrically.
pub fn frft_integral<F: Fn(f64) -> C64>(f: F, alpha: FrftAngle, x: f64) -> Result<C64> {
    let pref = BranchedPrefactor::new(alpha)?;
    let (s, c) = alpha.radians().sin_cos();
    let csc = 1.0 / s;
    let cot = c / s;
    let l = INTEGRAL_HALF_WIDTH;
    let h_max = PI / (2.0 * (x * csc).abs() + 16.0 * cot.abs() + 16.0);
    let intervals = ((2.0 * l / h_max).ceil() as usize).max(2);
    let h = 2.0 * l / intervals as f64;
    let mut acc = CompensatedSum::new();
    for j in 0..=intervals {
        let t = -l + j as f64 * h;
        let v = f(t);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Evaluation { node: j, detail: format!("function value {v} is not finite") });
        }
        let phase = -2.0 * (x * t * csc - 0.5 * cot * t * t);
        let w = if j == 0 || j == intervals { 0.5 * h } else { h };
        acc.add(v * C64::from_polar(w, phase));
    }
    Ok(pref.value() * C64::from_polar(1.0, x * x * cot) * acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::hermite_fn;

    #[test]
    fn reduction() {
        assert_eq!(FrftAngle::new(PI).unwrap().radians(), PI);
        assert_eq!(FrftAngle::new(-PI).unwrap().radians(), PI);
        assert!((FrftAngle::new(3.0 * PI / 2.0).unwrap().radians() + FRAC_PI_2).abs() < 1e-15);
        assert!((FrftAngle::new(7.0).unwrap().radians() - (7.0 - TAU)).abs() < 1e-15);
        assert!(FrftAngle::new(f64::NAN).is_err());
        let a = FrftAngle::new(0.9).unwrap();
        let b = FrftAngle::new(0.9 + 4.0 * PI).unwrap();
        for n in 0..40 {
            assert!((a.phase(n) - b.phase(n)).norm() < 1e-13);
        }
    }

    #[test]
    fn phases_are_exact_at_special_angles() {
        let half = FrftAngle::new(FRAC_PI_2).unwrap();
        assert_eq!(half.phases(5), vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(1.0, 0.0)
        ]);
        let pi = FrftAngle::new(PI).unwrap();
        assert_eq!(pi.phase(3), C64::new(-1.0, 0.0));
        let a = FrftAngle::new(1.1).unwrap();
        for n in 0..50 {
            assert_eq!(a.negated().phase(n), a.phase(n).conj());
        }
    }

    #[test]
    fn prefactor_branch() {
        for &alpha in &[0.3, 1.0, FRAC_PI_2, 2.5, -0.4, -2.9, PI - 1e-2] {
            let a = FrftAngle::new(alpha).unwrap();
            let p = BranchedPrefactor::new(a).unwrap().value() * SQRT_PI;
            let cot = 1.0 / alpha.tan();
            assert!((p * p - C64::new(1.0, -cot)).norm() < 1e-12 * (1.0 + cot.abs()));
            assert!(p.arg() > -FRAC_PI_2 && p.arg() <= FRAC_PI_2);
        }
        assert!(matches!(
            BranchedPrefactor::new(FrftAngle::new(1e-4).unwrap()),
            Err(Error::RepresentationUnavailable(_))
        ));
    }

    #[test]
    fn coefficient_examples() {
        let h = HermiteCoeffs::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(frft_coeffs(&h, FrftAngle::new(0.0).unwrap()), h);
        let flipped = frft_coeffs(&h, FrftAngle::new(PI).unwrap());
        assert_eq!(flipped, HermiteCoeffs::from_real(&[1.0, -2.0, 3.0, -4.0]).unwrap());
        let e4 = HermiteCoeffs::unit(4, 6);
        assert_eq!(frft_coeffs(&e4, FrftAngle::new(FRAC_PI_2).unwrap()), e4);
        let f = FockCoeffs::unit(2, 3);
        assert_eq!(fock_rotation(&f, FrftAngle::new(FRAC_PI_2).unwrap()).coeffs()[2], C64::new(-1.0, 0.0));
    }

    #[test]
    fn projections_partition() {
        let h = HermiteCoeffs::from_real(&[1.0, 1.0, 1.0, 1.0, 1.0, 0.0]).unwrap();
        let p0 = spectral_projection(0, &h).unwrap();
        assert_eq!(p0, HermiteCoeffs::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap());
        assert!(spectral_projection(4, &h).is_err());
    }

    #[test]
    fn spectrum_distinct_for_generic_angle() {
        let s = frft_spectrum(FrftAngle::new(1.0).unwrap(), 64);
        for i in 0..s.len() {
            for j in 0..i {
                assert!((s[i] - s[j]).norm() > 1e-3);
            }
        }
    }

    #[test]
    fn integral_matches_eigenvalues() {
        for &alpha in &[FRAC_PI_2, 0.7, -2.2, PI - 1e-2] {
            let a = FrftAngle::new(alpha).unwrap();
            let tol = if alpha == PI - 1e-2 { 1e-4 } else { 1e-7 };
            for n in [0usize, 1, 5, 12] {
                for &x in &[-3.0, -0.4, 0.0, 1.3, 3.0] {
                    let v = frft_integral(|t| C64::new(hermite_fn(n, t), 0.0), a, x).unwrap();
                    let want = a.phase(n) * hermite_fn(n, x);
                    assert!((v - want).norm() < tol, "alpha={alpha} n={n} x={x} err={}", (v - want).norm());
                }
            }
        }
        let err = frft_integral(|_| C64::new(0.0, 0.0), FrftAngle::new(PI).unwrap(), 0.0);
        assert!(matches!(err, Err(Error::RepresentationUnavailable(_))));
    }
}
