//! Gauss–Hermite rules against Golub–Welsch: eigenvalues of the symmetric
//! Jacobi matrix with off-diagonal `√(k/2)` are the nodes and `√π` times the
//! squared first eigenvector components are the weights.

use fockbridge::quadrature::gauss_hermite_rule;
use nalgebra::DMatrix;

fn golub_welsch(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(k, k);
    for i in 1..k {
        let b = (i as f64 / 2.0).sqrt();
        j[(i, i - 1)] = b;
        j[(i - 1, i)] = b;
    }
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..k)
        .map(|i| (eig.eigenvalues[i], std::f64::consts::PI.sqrt() * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

#[test]
fn nodes_and_weights_match_eigen_decomposition() {
    for k in [1usize, 2, 5, 16, 40, 64, 100] {
        let rule = gauss_hermite_rule(k).unwrap();
        let (x, w) = golub_welsch(k);
        for i in 0..k {
            assert!((rule.nodes()[i] - x[i]).abs() < 1e-12 * (1.0 + x[i].abs()), "k={k} node {i}");
            // small weights lose relative accuracy in the eigenvector route
            assert!((rule.weights()[i] - w[i]).abs() < 1e-12 * w.iter().cloned().fold(0.0, f64::max), "k={k} weight {i}");
        }
    }
}

#[test]
fn nodes_are_sorted_and_symmetric() {
    for k in [7usize, 128, 200, 512] {
        let rule = gauss_hermite_rule(k).unwrap();
        let x = rule.nodes();
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        for i in 0..k {
            assert!((x[i] + x[k - 1 - i]).abs() < 1e-12 * (1.0 + x[i].abs()));
        }
    }
}
