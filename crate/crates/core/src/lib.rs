//! Analytical physical-optics scattering models for reconfigurable
//! intelligent surfaces (RISs).
//!
//! The crate builds up from a single rectangular conducting patch
//! ([`patch`]) to arbitrary arrays of patches ([`array`]), the in-plane
//! linear RIS ([`linear`]) and its factored matrix form ([`mimo`]), and the
//! configuration schemes that drive it ([`config`]). [`scenario`], [`sweep`]
//! and [`reproduce`] turn those models into CSV/JSON artifacts.
//!
//! Lengths are in metres (or any consistent unit), angles in radians;
//! degrees appear only at the scenario and CLI boundary.

pub mod array;
pub mod config;
pub mod em;
pub mod error;
pub mod linear;
pub mod mimo;
pub mod patch;
pub mod pattern;
pub mod quadrature;
pub mod reproduce;
pub mod scenario;
pub mod sweep;

pub use error::{Error, Result};
