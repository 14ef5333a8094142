//! `S_φ` on the Fock space: quadrature, the derivative expansion, and the
//! rotated family through its matrix.

use fockbridge::frft::FrftAngle;
use fockbridge::quadrature::default_plane_rule;
use fockbridge::representation::{fock_eval, FockCoeffs};
use fockbridge::singular::{
    gaussian_symbol, hilbert_symbol, polynomial_symbol, s_phi_alpha_matrix, s_phi_apply, s_phi_apply_deriv, s_phi_matrix,
};
use fockbridge::Complex64 as C64;

fn main() -> fockbridge::Result<()> {
    let plane = default_plane_rule();
    let f = FockCoeffs::new(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.5), C64::new(0.3, 0.0)])?;

    let phi = polynomial_symbol(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.2)])?;
    let exact = s_phi_apply_deriv(phi.taylor(), &f)?;
    let z = C64::new(0.7, -0.2);
    println!("polynomial symbol: quadrature {:.12}  derivatives {:.12}", s_phi_apply(&phi, &f, z, &plane)?, fock_eval(&exact, z));

    let g = gaussian_symbol(0.25, 0.5)?;
    let alpha = FrftAngle::new(0.7)?;
    let m = s_phi_matrix(&g, 8, &plane)?;
    let rotated = s_phi_alpha_matrix(&g, alpha, 8, &plane)?;
    println!("gaussian symbol: ‖M‖ ≈ {:.6}, max |D* M D − M_a| = {:.2e}", m.operator_norm(), m.conjugate_by_rotation(alpha).max_diff(&rotated));

    let h = hilbert_symbol();
    let mh = s_phi_matrix(&h, 16, &plane)?;
    println!("Hilbert symbol: |φ(0)| = {}, ‖M_16‖ ≈ {:.6}", h.eval(C64::new(0.0, 0.0)).norm(), mh.operator_norm());
    Ok(())
}
