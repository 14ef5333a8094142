//! Wavelet transforms and the Fock-space symbols they induce.

use fockbridge::quadrature::{default_plane_rule, gauss_hermite_rule};
use fockbridge::representation::FockCoeffs;
use fockbridge::singular::{
    phi_from_g, phi_n_closed, s_phi_apply, wavelet_conjugated_direct, wavelet_fock_apply, WaveletSpec,
};
use fockbridge::Complex64 as C64;

fn main() -> fockbridge::Result<()> {
    let line = gauss_hermite_rule(128)?;
    let plane = default_plane_rule();
    for n in 0..4 {
        let w = WaveletSpec::gaussian_moment(n, 1.5)?;
        let numeric = phi_from_g(&w, &line)?;
        let closed = phi_n_closed(n, 1.5)?;
        let z = C64::new(1.0, -0.6);
        println!("{}: φ(z) numeric {:.12}  closed {:.12}", w.label(), numeric.eval(z), closed.eval(z));
    }

    let w = WaveletSpec::gaussian_moment(0, -1.0)?;
    let phi = phi_n_closed(0, -1.0)?;
    let f = FockCoeffs::new(vec![C64::new(0.5, 0.0), C64::new(0.0, 1.0)])?;
    let z = C64::new(0.3, 0.9);
    println!("nested     {:.12}", wavelet_fock_apply(&f, &w, z, &plane, &line)?);
    println!("symbol     {:.12}", s_phi_apply(&phi, &f, z, &plane)?);
    println!("conjugated {:.12}", wavelet_conjugated_direct(&f, &w, z, &line)?);

    let bad = WaveletSpec::new(|x| C64::new(1.0 / x, 0.0), 1.0, "1/x")?;
    match phi_from_g(&bad, &line) {
        Ok(_) => println!("1/x accepted"),
        Err(e) => println!("1/x rejected: {e}"),
    }
    Ok(())
}
