//! Shared inputs for the criterion benches.

use qtd_core::spectroscopy::converted_photon_lineshape;

/// Noiseless Lorentzian (FWHM 858 MHz) on `n` points over ±4 GHz, as
/// `(x, y, σ)` samples for the fit adapters.
pub fn lorentzian_data(n: usize) -> Vec<(f64, f64, Option<f64>)> {
    (0..n)
        .map(|i| {
            let x = -4e9 + 8e9 * i as f64 / (n - 1) as f64;
            (x, converted_photon_lineshape(x - 1e7, 858e6, 100.0) + 2.0, None)
        })
        .collect()
}

/// Sheet resistances log-spaced over 10⁻²…10⁶ Ω/sq.
pub fn sheet_resistances(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 10f64.powf(-2.0 + 8.0 * i as f64 / (n - 1) as f64))
        .collect()
}
