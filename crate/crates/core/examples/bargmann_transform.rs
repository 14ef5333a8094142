//! The Bargmann transform carries Hermite functions to normalized monomials.

use fockbridge::quadrature::gauss_hermite_rule;
use fockbridge::representation::{analyze, bargmann_coeff, bargmann_direct, fock_eval};
use fockbridge::special::{fock_basis_eval, hermite_fn};
use fockbridge::Complex64 as C64;

fn main() -> fockbridge::Result<()> {
    let rule = gauss_hermite_rule(128)?;
    let z = C64::new(0.8, 0.5);
    for n in [0, 1, 4, 9] {
        let direct = bargmann_direct(|x| C64::new(hermite_fn(n, x), 0.0), z, &rule)?;
        println!("B h_{n}(z) = {direct:.12}   e_{n}(z) = {:.12}", fock_basis_eval(n, z));
    }

    // a function outside the basis: a shifted Gaussian with a phase
    let f = |x: f64| C64::from_polar((-(x - 0.7).powi(2) / 2.0).exp(), 0.3 * x);
    let h = analyze(f, 48, &rule)?;
    let fc = bargmann_coeff(&h);
    let direct = bargmann_direct(f, z, &rule)?;
    println!("series {:.12}  integral {direct:.12}", fock_eval(&fc, z));
    println!("‖f‖ from coefficients: {:.12}", fc.norm());
    Ok(())
}
