//! Bessel functions of the first kind Jₙ(x) for integer order and the
//! complete elliptic integral of the first kind K(k).

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

pub mod reference;

/// Largest supported Bessel order.
pub const MAX_BESSEL_ORDER: u32 = 64;
/// Largest supported |x| for [`bessel_j`].
pub const MAX_BESSEL_ARG: f64 = 1e3;
/// Below this |x| the ascending series is used, above it Miller's algorithm.
const SERIES_LIMIT: f64 = 12.0;

/// Non-negative integer Bessel order, `n <= 64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BesselOrder(u32);

impl BesselOrder {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_BESSEL_ORDER {
            return Err(Error::OutOfRange {
                field: "bessel order",
                value: n as f64,
                range: "[0, 64]",
            });
        }
        Ok(Self(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

/// Jₙ(x).
pub fn bessel_j(n: BesselOrder, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            field: "x",
            reason: format!("must be finite, got {x}"),
        });
    }
    if x.abs() > MAX_BESSEL_ARG {
        return Err(Error::OutOfRange {
            field: "x",
            value: x,
            range: "[-1e3, 1e3]",
        });
    }
    let n = n.get();
    let value = if x.abs() < SERIES_LIMIT {
        ascending_series(n, x.abs())
    } else {
        miller(n, x.abs())
    };
    // J_n(-x) = (-1)^n J_n(x)
    Ok(if x < 0.0 && n % 2 == 1 { -value } else { value })
}

/// Jₙ(x) for signed order: J₋ₙ = (−1)ⁿ Jₙ.
pub fn bessel_j_signed(l: i32, x: f64) -> Result<f64> {
    let v = bessel_j(BesselOrder::new(l.unsigned_abs())?, x)?;
    Ok(if l < 0 && l % 2 != 0 { -v } else { v })
}

fn ascending_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    // (x/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    let mut m = 0u32;
    loop {
        m += 1;
        term *= q / (m as f64 * (m + n) as f64);
        sum += term;
        if term.abs() <= f64::EPSILON * 1e-3 * sum.abs().max(1e-300) || m > 500 {
            break;
        }
    }
    sum
}

/// Miller's downward recurrence normalised with J₀ + 2ΣJ₂ₖ = 1. `x > 0`.
fn miller(n: u32, x: f64) -> f64 {
    const RESCALE: f64 = 1e250;
    let top = (n as f64).max(x);
    let mut start = (top + 30.0 + (50.0 * top).sqrt()) as u32;
    start += start % 2;

    let mut j_next = 0.0; // J_{k+1}
    let mut j_k = 1e-30; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let j_prev = 2.0 * k as f64 / x * j_k - j_next;
        j_next = j_k;
        j_k = j_prev;
        // j_k now holds J_{k-1}
        if j_k.abs() > RESCALE {
            j_k /= RESCALE;
            j_next /= RESCALE;
            norm /= RESCALE;
            wanted /= RESCALE;
        }
        let order = k - 1;
        if order == n {
            wanted = j_k;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j_k;
        }
    }
    norm += j_k;
    wanted / norm
}

/// Complete elliptic integral of the first kind K(k), modulus convention
/// (not parameter m = k²), by the arithmetic–geometric mean.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::OutOfRange {
            field: "k",
            value: k,
            range: "[0, 1)",
        });
    }
    let mut a = 1.0_f64;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    for _ in 0..40 {
        if (a - b).abs() < 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(FRAC_PI_2 / a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(n: u32, x: f64) -> f64 {
        bessel_j(BesselOrder::new(n).unwrap(), x).unwrap()
    }

    #[test]
    fn bessel_examples() {
        assert_eq!(j(0, 0.0), 1.0);
        assert_eq!(j(3, 0.0), 0.0);
        assert!((j(1, 0.1) - 0.049937526).abs() < 1e-9);
        assert!(j(0, 2.404826).abs() < 1e-6);
    }

    #[test]
    fn bessel_parity() {
        for n in 0..8 {
            for x in [0.3, 5.0, 11.9, 12.1, 40.0] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(j(n, -x), sign * j(n, x));
            }
        }
        assert_eq!(bessel_j_signed(-1, 0.7).unwrap(), -j(1, 0.7));
        assert_eq!(bessel_j_signed(-2, 0.7).unwrap(), j(2, 0.7));
    }

    #[test]
    fn series_and_miller_agree_at_the_switch() {
        for n in [0, 1, 5, 20, 64] {
            for x in [8.0, 11.0, 11.999] {
                let a = ascending_series(n, x);
                let b = miller(n, x);
                assert!((a - b).abs() < 1e-11, "n={n} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn bessel_errors() {
        assert!(BesselOrder::new(65).is_err());
        let n = BesselOrder::new(0).unwrap();
        assert!(bessel_j(n, f64::NAN).is_err());
        assert!(bessel_j(n, 1001.0).is_err());
        assert!(bessel_j(n, 1000.0).is_ok());
    }

    #[test]
    fn elliptic_examples() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert!((elliptic_k(0.3636).unwrap() - 1.627).abs() < 0.002);
        let k: f64 = 1.0 - 1e-8;
        let asym = (4.0 / ((1.0 - k) * (1.0 + k)).sqrt()).ln();
        assert!((elliptic_k(k).unwrap() - asym).abs() < 1e-6);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
    }
}
