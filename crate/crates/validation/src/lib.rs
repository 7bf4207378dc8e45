//! Reference values computed without the workspace crates.
//!
//! The acceptance target compares library output against these.

use std::f64::consts::PI;

/// Γ(x) by the Lanczos approximation with g = 7.
pub fn gamma_lanczos(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + G + 0.5;
    let a = C.iter().enumerate().skip(1).fold(C[0], |acc, (i, &c)| acc + c / (x + i as f64));
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Power series of J₀ and J₁, accurate for moderate arguments.
fn bessel_j0_j1(x: f64) -> (f64, f64) {
    let q = -(x * x) / 4.0;
    let (mut t0, mut s0) = (1.0, 1.0);
    let (mut t1, mut s1) = (x / 2.0, x / 2.0);
    for k in 1..60 {
        let k = k as f64;
        t0 *= q / (k * k);
        t1 *= q / (k * (k + 1.0));
        s0 += t0;
        s1 += t1;
    }
    (s0, s1)
}

/// First positive zero of J₀, by Newton iteration using J₀' = -J₁.
pub fn bessel_j0_first_zero() -> f64 {
    let mut x = 2.4;
    for _ in 0..30 {
        let (j0, j1) = bessel_j0_j1(x);
        x += j0 / j1;
    }
    x
}

/// Ground-state eigenvalue of the five-point Laplacian on the unit square.
pub fn discrete_square_lambda1(h: f64) -> f64 {
    8.0 / (h * h) * (PI * h / 2.0).sin().powi(2)
}
