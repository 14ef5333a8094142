//! Three routes to the fractional Fourier transform.

use fockbridge::frft::{fock_rotation, frft_coeffs, frft_integral, FrftAngle};
use fockbridge::representation::{bargmann_coeff, fock_eval, hermite_eval, HermiteCoeffs};
use fockbridge::Complex64 as C64;

fn main() -> fockbridge::Result<()> {
    let h = HermiteCoeffs::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(-0.3, 0.0), C64::new(0.2, 0.2)])?;
    let alpha = FrftAngle::new(0.9)?;
    let t = frft_coeffs(&h, alpha);
    println!("alpha = {}", alpha.radians());
    for x in [-1.5, 0.0, 0.8, 2.0] {
        let integral = frft_integral(|s| hermite_eval(&h, s), alpha, x)?;
        println!("x = {x:>4}: coefficients {:.10}  chirp integral {integral:.10}", hermite_eval(&t, x));
    }

    let f = bargmann_coeff(&h);
    let z = C64::new(0.4, -1.1);
    let rotated = fock_eval(&fock_rotation(&f, alpha), z);
    let by_point = fock_eval(&f, C64::from_polar(1.0, -alpha.radians()) * z);
    println!("Fock side: F(e^(-ia) z) = {by_point:.12}, rotated series = {rotated:.12}");
    println!("norm before {:.15}, after {:.15}", h.norm(), t.norm());
    Ok(())
}
