//! Fixed-point, spectral, scan, orbit, and definition analysis.

mod definitions;
mod eigen;
mod fixed_point;
mod orbit;
mod scan;

pub use definitions::{check_definition, Definition, DefinitionReport, Threshold, Witness};
pub use eigen::{
    classify_stability, det3, eig2, eig3, eigenvalues, principal_minor_sum, trace3, EigenTriple,
    StabilityClass, StabilityReport, ZERO_REAL_TOL,
};
pub use fixed_point::find_fixed_point_newton;
pub use orbit::{
    amplitude_trend, amplitude_trend_with, classify_cycle, orbit_orientation, CycleClass,
    CycleReport, Orientation, Trend, TrendConfig,
};
pub use scan::{detect_hopf, s_grid, scan_parameter, HopfCrossing, ScanResult, ScanRow};
