//! Exact classification of rational isochronous potentials, cross-validated
//! by independent numerical oracles.
//!
//! The crate has two halves that deliberately do not share code paths:
//!
//! * an exact half ([`rational`], [`poly`], [`bipoly`], [`classify`]) that
//!   decides, in arbitrary-precision rational arithmetic, whether a rational
//!   potential `U = p/q` is isochronous and extracts its canonical
//!   parameters;
//! * a numeric half ([`period`], [`dynamics`], [`quantum`]) that measures the
//!   same physics three independent ways — singular quadrature of the period
//!   integral, Hamiltonian trajectory integration (including the many-body
//!   inverse-square chain), and spectra of the matching Schrödinger
//!   operators — so the exact verdicts can be checked against oracles that
//!   know nothing about the decision procedure.
//!
//! [`corpus`] ties the halves together: seeded random potentials are run
//! through both the classifier and the period oracle, and any disagreement is
//! a test failure.

pub mod bipoly;
pub mod classify;
pub mod corpus;
pub mod dynamics;
pub mod io;
pub mod ode;
pub mod period;
pub mod poly;
pub mod potential;
pub mod quad;
pub mod quantum;
pub mod rational;
pub mod roots;
pub mod tridiag;

pub use classify::{classify, reconstruct, Classification, RationalPotential, RefusalReason};
pub use poly::Polynomial;
pub use rational::Rational;
