//! Bound states of the one-dimensional Schrödinger equation
//! `-phi''/2 + v(x) phi = eps phi` by Wronskian matching.
//!
//! A single pair of canonical solutions `C`, `S` (with `C = S' = 1`,
//! `C' = S = 0` at the anchor `x0`) is integrated per trial energy. The
//! quantization condition pairs them with the convergent asymptotic
//! solutions at both ends through Wronskians, which settle to their limit
//! long before the raw solutions do.
//!
//! ```
//! use wronski::{find_eigenvalues, potentials, Method, SolveOptions};
//!
//! let problem = potentials::poschl_teller(10.0).unwrap();
//! let report = find_eigenvalues(&problem, Method::Wm, &SolveOptions::default()).unwrap();
//! let energies = report.energies();
//! assert_eq!(energies.len(), 4);
//! assert!((energies[0] + 8.0).abs() < 1e-4);
//! ```

pub mod asymptotic;
pub mod cfm;
pub mod characteristic;
pub mod error;
pub mod grid;
pub mod integrate;
pub mod oracle;
pub mod potential;
pub mod potentials;
pub mod problem;
pub mod roots;
pub mod wm;

pub use asymptotic::{decay_constant, exponential_pair, AsymptoticModel, Boundary, Point, SolutionForm};
pub use cfm::{
    box_characteristic, box_characteristic_analytic, cfm_characteristic, cfm_characteristic_symmetric,
    cfm_l_ratios, dirichlet_determinant, saturation_profile, SaturationProfile, SaturationRow,
};
pub use characteristic::{CharacteristicFunction, Eval};
pub use error::{Error, Result, Side};
pub use grid::{make_grid, Grid};
pub use integrate::{canonical_pair, propagate, CanonicalPair, CanonicalSample, Direction, Trajectory};
pub use oracle::{fd_box_dispersion, fd_box_recurrence_eigenvalues, shooting_reference};
pub use potential::{Domain, PotentialSpec};
pub use problem::{EigenResult, Parity, Problem, WaveSample};
pub use roots::{find_eigenvalues, refine_root, scan_brackets, Bracket, EigenReport, Method, Scan, SolveOptions};
pub use wm::{wm_characteristic, wm_characteristic_symmetric, wm_eigenfunction, wm_endpoint_data, WmEndpointData};

/// `W(y1, y2) = y1 y2' - y2 y1'`.
#[inline]
pub fn wronskian(y1: f64, dy1: f64, y2: f64, dy2: f64) -> f64 {
    y1 * dy2 - y2 * dy1
}
