//! Census of peculiar polynomials: monic polynomials whose zero multiset
//! equals their coefficient list.
//!
//! [`systems`] builds the symmetric-function equations, [`homotopy`] solves
//! them by total-degree continuation, [`classify`] sorts the solutions into
//! classes and audits the counts, and [`intpoly`] holds exact integer
//! tooling for the explicit low-degree answers. [`report`] renders results.

pub mod classify;
pub mod dd;
pub mod error;
pub mod homotopy;
pub mod intpoly;
pub mod linalg;
pub mod matching;
pub mod poly;
pub mod report;
pub mod systems;
