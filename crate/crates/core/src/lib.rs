//! Postquench stationary states of the XY chain in the thermodynamic limit.
//!
//! After a sudden quench `(gamma0, h0) -> (gamma, h)` the integrable chain
//! relaxes to a generalized Gibbs ensemble (GGE); a weak integrability
//! breaking perturbation eventually drives it to a Gibbs state at the
//! energy-matched temperature `T_th`. The crate computes the nearest-neighbor
//! correlators of both states, detects two-site entanglement through the two
//! partial-transpose minima `mu1`, `mu2`, and scans the `(h0, h)` plane.

pub mod correlators;
pub mod ensemble;
pub mod entanglement;
pub mod error;
pub mod oracle;
pub mod output;
pub mod quadrature;
pub mod roots;
pub mod scan;
pub mod spectrum;

pub use correlators::{g_functions, nn_correlators, CorrelatorSet, GFunctions};
pub use ensemble::{
    effective_temperature, energy_density, thermal_mode_energy, thermalization_temperature, EffectiveTemperature,
    ModeWeight, Occupancy, Temperature, Thermalization,
};
pub use entanglement::{
    analyze, analyze_with_threshold, mu_min_1, mu_min_2, partial_transpose, reduced_density_matrix,
    witness_expectation, Detection, Detector, TwoQubitState, WitnessReport, DEFAULT_DETECTION_THRESHOLD,
};
pub use error::{Error, Result};
pub use quadrature::{periodic_quadrature, QuadratureSpec};
pub use scan::{
    evaluate_cell, refine_boundary, run_scan, AxisRange, CellEntry, CellResult, Region, RegionMap, ScanConfig,
    ScanOutput,
};
pub use spectrum::{
    bogoliubov_angle, cos_delta, dispersion, gapless_momenta, occupation, ModelParams, Momentum, Occupation,
    QuenchSpec,
};
