//! Steady-state light transport through a pair of two-level emitters coupled
//! to a one-dimensional waveguide.
//!
//! The full-quantum description solves the two-emitter master equation in the
//! frame rotating with the drive ([`generator`], [`steady_state`]); the
//! semi-classical one factorizes the same equations ([`semiclassical`]).
//! [`observables`] turns either set of expectation values into
//! transmittance, reflectance, intracavity intensity and the diode figures of
//! merit; [`analytic`] holds the weak-drive closed forms, and [`sweep`]
//! drives parameter scans and CSV output.
//!
//! ```
//! use ptls::{observables::{rectification, Model}, SystemParams};
//!
//! let params = SystemParams::new(0.12, 0.0, 0.982, 0.04);
//! let diode = rectification(&params, Model::FullQuantum).unwrap();
//! assert!(diode.t12 > 0.5 && diode.t21 < 0.1);
//! ```

pub mod analytic;
pub mod error;
pub mod generator;
pub mod model;
pub mod observables;
pub mod semiclassical;
pub mod steady_state;
pub mod sweep;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use model::{collective_rates, rabi_amplitude, swap_direction, CollectiveRates, Direction, SystemParams};
pub use observables::Model;
