//! Classical Hilbert transform on a sampled grid via the FFT multiplier.

use fockbridge::hilbert::hilbert_classical_grid;
use fockbridge::representation::{GridGeometry, SampledSignal};
use fockbridge::Complex64 as C64;

fn main() -> fockbridge::Result<()> {
    // H[1/(1+x²)] = x/(1+x²)
    let geom = GridGeometry::centered(1 << 16, 0.05)?;
    let s = SampledSignal::from_fn(geom, |x| C64::new(1.0 / (1.0 + x * x), 0.0));
    let hs = hilbert_classical_grid(&s);
    for x in [-2.0, -0.5, 0.0, 1.0, 3.0] {
        println!("x = {x:>4}: grid {:.6}  exact {:.6}", hs.interpolate(x).re, x / (1.0 + x * x));
    }
    Ok(())
}
