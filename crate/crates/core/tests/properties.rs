use std::f64::consts::{FRAC_PI_2, PI};

use fockbridge::formats::{read_signal_csv, signal_to_csv, CoeffFile};
use fockbridge::frft::{fock_rotation, frft_coeffs, spectral_projection, FrftAngle};
use fockbridge::hilbert::{fractional_hilbert, hilbert_classical_grid, HilbertParams, HilbertWork};
use fockbridge::representation::{
    bargmann_coeff, fock_eval, hermite_eval, inverse_bargmann_coeff, FockCoeffs, GridGeometry, HermiteCoeffs,
    SampledSignal,
};
use fockbridge::singular::{
    constant_symbol, gaussian_symbol, phi_n_leading_coefficient, phi_n_polynomial, s_phi_apply_deriv,
};
use fockbridge::special::hermite_fn;
use fockbridge::Complex64 as C64;
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(complex(), 1..=max_len)
}

fn angle() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frft_is_a_unitary_group(c in coeffs(80), a in angle(), b in angle()) {
        let h = HermiteCoeffs::new(c).unwrap();
        let (fa, fb) = (FrftAngle::new(a).unwrap(), FrftAngle::new(b).unwrap());
        let composed = frft_coeffs(&frft_coeffs(&h, fa), fb);
        let direct = frft_coeffs(&h, FrftAngle::new(a + b).unwrap());
        prop_assert!(composed.max_diff(&direct) < 1e-12);
        prop_assert!((frft_coeffs(&h, fa).norm() - h.norm()).abs() < 1e-12 * (1.0 + h.norm()));
        prop_assert!(frft_coeffs(&frft_coeffs(&h, fa), fa.negated()).max_diff(&h) < 1e-13);
    }

    #[test]
    fn bargmann_intertwines_frft_and_rotation(c in coeffs(40), a in angle(), re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let h = HermiteCoeffs::new(c).unwrap();
        let fa = FrftAngle::new(a).unwrap();
        let f = bargmann_coeff(&h);
        prop_assert_eq!(bargmann_coeff(&frft_coeffs(&h, fa)), fock_rotation(&f, fa));
        prop_assert_eq!(inverse_bargmann_coeff(&f), h.clone());
        prop_assert!((f.norm() - h.norm()).abs() < 1e-13 * (1.0 + h.norm()));
        let z = C64::new(re, im);
        let rotated = fock_eval(&fock_rotation(&f, fa), z);
        let direct = fock_eval(&f, C64::from_polar(1.0, -fa.radians()) * z);
        prop_assert!((rotated - direct).norm() < 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn spectral_projections_resolve_identity(c in coeffs(50)) {
        let h = HermiteCoeffs::new(c).unwrap();
        let parts: Vec<HermiteCoeffs> = (0..4).map(|k| spectral_projection(k, &h).unwrap()).collect();
        let sum = HermiteCoeffs::new((0..h.len()).map(|n| parts.iter().map(|p| p.coeffs()[n]).sum()).collect()).unwrap();
        prop_assert_eq!(&sum, &h);
        for (k, p) in parts.iter().enumerate() {
            prop_assert_eq!(&spectral_projection(k, p).unwrap(), p);
        }
        let quarter = frft_coeffs(&h, FrftAngle::new(FRAC_PI_2).unwrap());
        let i = C64::new(0.0, 1.0);
        for n in 0..h.len() {
            let want = parts[0].coeffs()[n] - i * parts[1].coeffs()[n] - parts[2].coeffs()[n] + i * parts[3].coeffs()[n];
            prop_assert_eq!(quarter.coeffs()[n], want);
        }
    }

    #[test]
    fn fractional_hilbert_is_linear_in_cos_sin(c in coeffs(24), a in angle(), phi in -PI..PI) {
        let h = HermiteCoeffs::new(c).unwrap();
        let work = HilbertWork::new(h.len(), 48).unwrap();
        let general = fractional_hilbert(&h, HilbertParams::new(a, phi).unwrap(), &work).unwrap();
        let quarter = fractional_hilbert(&h, HilbertParams::new(a, FRAC_PI_2).unwrap(), &work).unwrap();
        let padded = h.resized(48);
        for n in 0..48 {
            let want = padded.coeffs()[n] * phi.cos() + quarter.coeffs()[n] * phi.sin();
            prop_assert!((general.coeffs()[n] - want).norm() < 1e-12);
        }
        // truncation can only lose energy
        prop_assert!(general.norm() <= h.norm() * (1.0 + 1e-10));
    }

    #[test]
    fn grid_hilbert_squares_to_minus_identity_on_odd_functions(c in prop::collection::vec(-1.0f64..1.0, 1..6)) {
        let geom = GridGeometry::centered(1 << 12, 0.05).unwrap();
        let f = |x: f64| c.iter().enumerate().map(|(k, v)| v * hermite_fn(2 * k + 1, x)).sum::<f64>();
        let s = SampledSignal::from_fn(geom, |x| C64::new(f(x), 0.0));
        let hh = hilbert_classical_grid(&hilbert_classical_grid(&s));
        for (a, b) in hh.values().iter().zip(s.values()) {
            prop_assert!((a + b).norm() < 1e-9);
        }
    }

    #[test]
    fn derivative_route_is_bilinear(a in coeffs(6), b in coeffs(6), f in coeffs(8), k in complex()) {
        let fc = FockCoeffs::new(f.clone()).unwrap();
        let len = a.len().max(b.len());
        let sum: Vec<C64> = (0..len).map(|i| a.get(i).copied().unwrap_or_default() + k * b.get(i).copied().unwrap_or_default()).collect();
        let lhs = s_phi_apply_deriv(&sum, &fc).unwrap();
        let ra = s_phi_apply_deriv(&a, &fc).unwrap().resized(lhs.len());
        let rb = s_phi_apply_deriv(&b, &fc).unwrap().resized(lhs.len());
        let rhs = FockCoeffs::new((0..lhs.len()).map(|i| ra.coeffs()[i] + k * rb.coeffs()[i]).collect()).unwrap();
        prop_assert!(lhs.max_diff(&rhs) < 1e-9);
        let scaled = s_phi_apply_deriv(constant_symbol(k).taylor(), &fc).unwrap();
        prop_assert!(scaled.max_diff(&fc.map_indexed(|_, v| v * k)) < 1e-15);
    }

    #[test]
    fn gaussian_symbol_taylor_is_consistent(a in 0.01f64..0.4, b in -2.0f64..2.0, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let s = gaussian_symbol(a, b).unwrap();
        let z = C64::new(re, im);
        let series: C64 = s.taylor().iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
        let want = ((z - b) * (z - b) * a).exp();
        prop_assert!((series - want).norm() < 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn phi_n_leading_coefficient_closed_form(n in 0usize..=30, s in prop_oneof![-4.0f64..-0.1, 0.1f64..4.0]) {
        let p = phi_n_polynomial(n, s);
        prop_assert_eq!(p.len(), n + 1);
        let lead = phi_n_leading_coefficient(n, s);
        prop_assert!((p[n] - lead).abs() <= 1e-12 * lead.abs());
    }

    #[test]
    fn hermite_expansion_evaluates_pointwise(c in coeffs(12), x in -4.0f64..4.0) {
        let h = HermiteCoeffs::new(c.clone()).unwrap();
        let want: C64 = c.iter().enumerate().map(|(n, v)| v * hermite_fn(n, x)).sum();
        prop_assert!((hermite_eval(&h, x) - want).norm() < 1e-13);
    }

    #[test]
    fn files_round_trip_exactly(c in coeffs(20), x0 in -5.0f64..5.0, dx in 0.01f64..1.0) {
        let h = HermiteCoeffs::new(c.clone()).unwrap();
        let text = CoeffFile::from_hermite(&h).to_json();
        prop_assert_eq!(CoeffFile::from_json(&text).unwrap().to_hermite().unwrap(), h);
        if c.len() >= 2 {
            let s = SampledSignal::new(x0, dx, c).unwrap();
            let back = read_signal_csv(signal_to_csv(&s).as_bytes()).unwrap();
            prop_assert_eq!(back.values(), s.values());
        }
    }
}
