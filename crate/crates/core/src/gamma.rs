//! Complex log-gamma via the Lanczos approximation (g = 7, 9 terms).

use core::f64::consts::PI;

use crate::linalg::Complex;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(z)` on the principal branch of each factor; the imaginary part is
/// therefore `arg Γ(z)` modulo `2π`.
pub fn ln_gamma(z: Complex) -> Complex {
    if z.re < 0.5 {
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz).
        let s = (z * PI).sin();
        return Complex::new(libm::log(PI), 0.0) - s.ln() - ln_gamma(Complex::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex::new(LANCZOS_COEF[0], 0.0);
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Complex::new(0.5 * libm::log(2.0 * PI), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

/// `arg Γ(z)` reduced to `(−π, π]`.
pub fn arg_gamma(z: Complex) -> f64 {
    wrap_phase(ln_gamma(z).im)
}

/// Reduces an angle to `(−π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = libm::fmod(theta, two_pi);
    if r <= -PI {
        r += two_pi;
    } else if r > PI {
        r -= two_pi;
    }
    r
}
