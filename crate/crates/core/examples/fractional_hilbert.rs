//! Fractional Hilbert transform through the phase multiplier and through
//! its Fock-space kernel.

use std::f64::consts::FRAC_PI_2;

use fockbridge::hilbert::{fractional_hilbert, hilbert_fock_chain_apply, hilbert_fock_kernel_apply, HilbertParams, HilbertWork};
use fockbridge::quadrature::default_plane_rule;
use fockbridge::representation::{FockCoeffs, HermiteCoeffs};
use fockbridge::Complex64 as C64;

fn main() -> fockbridge::Result<()> {
    let p = HilbertParams::new(0.6, 1.0)?;
    let work = HilbertWork::new(4, 160)?;
    let f = FockCoeffs::new(vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0), C64::new(0.25, 0.0)])?;
    let plane = default_plane_rule();
    for z in [C64::new(0.0, 0.0), C64::new(0.9, 0.3), C64::new(-0.4, 1.2)] {
        let chain = hilbert_fock_chain_apply(&f, p, z, &work)?;
        let kernel = hilbert_fock_kernel_apply(&f, p, z, &plane)?;
        println!("z = {z:.2}: chain {chain:.10}  kernel {kernel:.10}");
    }

    // H with phi = pi/2 is a rotation of the classical transform; its
    // truncated output keeps at most the input energy
    let h = HermiteCoeffs::from_real(&[0.0, 1.0, 0.0, 0.5])?;
    let out = fractional_hilbert(&h, HilbertParams::new(0.0, FRAC_PI_2)?, &HilbertWork::new(4, 64)?)?;
    println!("‖h‖ = {:.12}, ‖Hh‖ over 64 terms = {:.12}", h.norm(), out.norm());
    Ok(())
}
