//! Analytical model of microwave–optical transduction through a single
//! quantum-dot molecule (QDM) coupled to a superconducting coplanar-waveguide
//! resonator, together with the fitting pipelines used to extract coupling
//! strengths, dipole sizes, linewidths and Q factors from spectra.
//!
//! Module map:
//!
//! - [`units`]: physical constants, [`AngularFrequency`] and the shared
//!   parameter records ([`QdmParams`], [`ResonatorParams`], [`DriveState`]).
//! - [`specfun`]: Bessel functions of the first kind and the complete
//!   elliptic integral of the first kind.
//! - [`circuit`]: CPW geometry, kinetic inductance, Q factors, the lumped loss
//!   simulation, photon-number calibration and the theoretical g₀.
//! - [`qdm`]: anticrossing branches, DC-Stark shift, effective dipole and the
//!   tunnel-splitting model.
//! - [`transduction`]: cooperativity, internal efficiency and gain, detuning
//!   and bandwidth.
//! - [`spectroscopy`]: lineshapes, Bessel sideband spectra and the etalon.
//! - [`fit`]: Levenberg–Marquardt engine, error propagation and model adapters.
//! - [`reproduce`]: the end-to-end validation checks behind `qtd reproduce`.
//!
//! Internally every frequency is angular (rad/s). Anything that crosses a file
//! or command-line boundary is ordinary frequency in Hz.

pub mod circuit;
pub mod error;
pub mod fit;
pub mod presets;
pub mod qdm;
pub mod reproduce;
pub mod specfun;
pub mod spectroscopy;
pub mod transduction;
pub mod units;

pub use error::{Error, Result};
pub use spectroscopy::Spectrum;
pub use units::{
    from_angular, to_angular, AngularFrequency, AnticrossingParams, ConversionBranch, DriveState,
    PhysConstants, QdmParams, ResonatorParams, CODATA_2018,
};
