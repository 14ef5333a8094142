//! Acceptance run: one line per criterion, non-zero exit if any fails.

use fockbridge::verify::{run_check, CheckResult, VerifyConfig, CHECKS};

const CRITERIA: [(&str, &str); 15] = [
    ("basis.orthonormality", "Hermite functions and normalized monomials are orthonormal"),
    ("basis.gaussian_integral", "complex Gaussian integral matches its closed form for every shift"),
    ("basis.bargmann_hermite", "Bargmann transform maps h_n to e_n"),
    ("frft.fock_rotation", "conjugated fractional Fourier transform is the rotation f(e^{-ia}z)"),
    ("frft.plancherel", "fractional Fourier transform is unitary with inverse F_{-a}"),
    ("frft.eigenfunctions", "h_n are eigenfunctions of the chirp integral with eigenvalue e^{-ina}"),
    ("frft.spectral_decomposition", "quarter turn equals P0 - iP1 - P2 + iP3"),
    ("hilbert.kernel_vs_chain", "Fock kernel of H_phi^a matches the multiplier chain"),
    ("hilbert.angle_decomposition", "H_phi^a = cos phi I + sin phi H_{pi/2}^a"),
    ("hilbert.classical_fock", "S kernel matches the grid Hilbert transform; H H = -I"),
    ("wavelet.three_paths", "nested, symbol and conjugated wavelet routes agree"),
    ("wavelet.induced_symbols", "symbols induced by Gaussian-type wavelets match closed forms"),
    ("sop.rotation_conjugation", "D_a* M(S_phi) D_a = M(S_phi^a)"),
    ("sop.hilbert_symbol", "Hilbert symbol: value, derivative and principal-value form"),
    ("sop.derivative_oracle", "S_phi quadrature matches the derivative expansion"),
];

fn describe(r: &CheckResult) -> String {
    match (r.max_error, &r.detail) {
        (_, Some(d)) => format!("error: {d}"),
        (Some(e), None) => {
            let op = if r.passed { "<=" } else { ">" };
            format!("max_error {e:.3e} {op} {:.1e}", r.tolerance)
        }
        (None, None) => "max_error not finite".to_string(),
    }
}

fn main() {
    assert_eq!(CRITERIA.len(), CHECKS.len());
    for ((a, _), (b, _)) in CRITERIA.iter().zip(CHECKS.iter()) {
        assert_eq!(a, b, "criterion list out of step with the check list");
    }
    let config = VerifyConfig::default();
    let mut failures = 0;
    for (i, (name, what)) in CRITERIA.iter().enumerate() {
        let r = run_check(name, &config).expect("check name is known");
        let status = if r.passed { "PASS" } else { "FAIL" };
        if !r.passed {
            failures += 1;
        }
        println!("{status} [{:02}] {name}: {what} ({})", i + 1, describe(&r));
    }
    println!("acceptance: {} passed, {failures} failed", CRITERIA.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
