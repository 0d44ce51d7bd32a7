//! Slow reference evaluations used only to validate the production kernels.
//!
//! Each routine uses a different algorithm from its production counterpart in
//! the parent module and trades speed for transparency.

use std::f64::consts::{FRAC_PI_2, PI};

/// Ascending series Σ (−1)^m (x/2)^{2m+n} / (m!(m+n)!) summed until the
/// terms drop below machine precision. Accurate for moderate |x| only.
pub fn bessel_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    for m in 1..1000u32 {
        term *= -half * half / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// Bessel's integral Jₙ(x) = (1/π)∫₀^π cos(nτ − x sin τ) dτ by the
/// trapezoidal rule, which converges geometrically for this periodic
/// integrand.
pub fn bessel_integral(n: u32, x: f64) -> f64 {
    let panels = 64 + 2 * (x.abs().ceil() as usize + n as usize);
    let h = PI / panels as f64;
    let f = |tau: f64| (n as f64 * tau - x * tau.sin()).cos();
    let mut sum = 0.5 * (f(0.0) + f(PI));
    for i in 1..panels {
        sum += f(i as f64 * h);
    }
    sum * h / PI
}

/// K(k) = (π/2) Σ [(2m)! / (2^{2m} (m!)²)]² k^{2m}.
pub fn elliptic_k_series(k: f64) -> f64 {
    assert!((0.0..1.0).contains(&k));
    let k2 = k * k;
    let mut coeff = 1.0; // ((2m-1)!!/(2m)!!)^2 k^{2m}
    let mut sum = 1.0;
    let mut m = 0u64;
    loop {
        m += 1;
        let ratio = (2 * m - 1) as f64 / (2 * m) as f64;
        coeff *= ratio * ratio * k2;
        sum += coeff;
        // remaining tail is bounded by coeff * k2 / (1 - k2)
        if coeff * k2 / (1.0 - k2) < 1e-17 * sum {
            break;
        }
    }
    FRAC_PI_2 * sum
}

/// AGM oracle K = π / (2·AGM(1, √(1−k²))), iterated to exact convergence.
pub fn elliptic_k_agm(k: f64) -> f64 {
    let mut a = 1.0_f64;
    let mut b = (1.0 - k * k).sqrt();
    while (a - b).abs() > 4.0 * f64::EPSILON * a {
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    FRAC_PI_2 / (0.5 * (a + b))
}
