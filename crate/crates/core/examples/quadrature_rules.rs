//! Gauss–Hermite and plane rules: moments and the reproducing formula.

use fockbridge::quadrature::{default_plane_rule, gauss_hermite_rule, integrate_line, integrate_plane};
use fockbridge::special::{fock_basis_eval, reproducing_kernel, SQRT_PI};
use fockbridge::Complex64 as C64;

fn main() -> fockbridge::Result<()> {
    let rule = gauss_hermite_rule(32)?;
    for k in [0, 2, 10, 30] {
        let m = integrate_line(&rule, |x| C64::new(x.powi(k), 0.0), true)?;
        println!("∫ x^{k:<2} e^(-x²) dx = {:.15}", m.re);
    }
    println!("√π                  = {SQRT_PI:.15}");

    let plane = default_plane_rule();
    println!("plane rule: {} radial × {} angular nodes", plane.k_radial(), plane.k_angular());
    let f = |z: C64| fock_basis_eval(3, z) + fock_basis_eval(1, z) * 0.5;
    let z = C64::new(0.6, -0.4);
    let reproduced = integrate_plane(&plane, |w| f(w) * reproducing_kernel(z, w))?;
    println!("f(z)              = {:.15}", f(z));
    println!("∫ f(w) e^(z w̄) dλ = {:.15}", reproduced);
    Ok(())
}
