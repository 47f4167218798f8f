//! Exact analysis of total displacement in linear probing hashing.
//!
//! Everything here is exact: polynomials and series carry big integers or
//! rationals, and every closed form has an independent route to check it.

pub mod checks;
pub mod cli;
pub mod graphs;
pub mod moments;
pub mod parking;
pub mod polyalg;
pub mod simulate;
