//! Adaptive Gauss–Kronrod integration used only as an independent reference
//! when checking the fixed Gaussian rules. Not part of the transform API.

use num_complex::Complex64 as C64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod value, `|K − G|` error estimate and `∫|f|` estimate.
fn kronrod<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64) -> (C64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let (l, r) = (f(c - dx), f(c + dx));
        let s = l + r;
        abs += (l.norm() + r.norm()) * WGK[j];
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    (k * h, ((k - g) * h).norm(), abs * h.abs())
}

/// `∫_a^b f(x) dx` to absolute tolerance `tol` by bisection. Intervals whose
/// error estimate is already at the rounding level of `∫|f|` are accepted.
pub fn integrate<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, tol: f64) -> C64 {
    let mut total = C64::new(0.0, 0.0);
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err, abs) = kronrod(&f, lo, hi);
        let width = (hi - lo) / (b - a).abs();
        if err <= tol * width.max(1e-12) || err <= 50.0 * f64::EPSILON * abs || depth >= 48 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, depth + 1));
            stack.push((lo, mid, depth + 1));
        }
    }
    total
}

/// `∫_ℝ f(x) dx` through `x = t/(1 − t²)` on `(−1, 1)`.
pub fn integrate_real_line<F: Fn(f64) -> C64>(f: F, tol: f64) -> C64 {
    let g = |t: f64| {
        let d = 1.0 - t * t;
        if d <= 0.0 {
            return C64::new(0.0, 0.0);
        }
        let x = t / d;
        let jac = (1.0 + t * t) / (d * d);
        let v = f(x) * jac;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            C64::new(0.0, 0.0)
        }
    };
    integrate(g, -1.0, 0.0, tol) + integrate(g, 0.0, 1.0, tol)
}

/// Path integral `∫_0^z f(u) du` along the straight segment.
pub fn integrate_segment<F: Fn(C64) -> C64>(f: F, z: C64, tol: f64) -> C64 {
    integrate(|t| f(z * t) * z, 0.0, 1.0, tol)
}
