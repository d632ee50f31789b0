//! Doubled Hahn, dual Hahn and Racah polynomial systems.
//!
//! The crate evaluates the polynomials exactly over the rationals, verifies
//! the doubling recurrence pairs and the related Christoffel/Geronimus
//! identities, builds the corresponding two-diagonal matrices with their
//! closed-form spectra and eigenvectors, and provides a floating-point
//! tridiagonal eigensolver for benchmarking against those closed forms.

pub mod arith;
pub mod catalog;
pub mod doubles;
pub mod error;
pub mod io;
pub mod numeig;
pub mod oscalg;
pub mod orthosys;
pub mod polyfam;
pub mod specmat;
pub mod suite;
pub mod transforms;

pub use error::{Error, Result};
