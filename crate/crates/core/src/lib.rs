//! Exact engine for compressed Drinfeld associators in the metabelian
//! quotient of free Lie algebras.
//!
//! The crate computes extended Bernoulli numbers, the compressed CBH
//! series, solutions of the hexagon equations, pentagon residuals in a
//! faithful metabelian model, and the zeta-symbolic Drinfeld associator.

pub mod exact_arith;
pub mod series_core;
pub mod cbh_engine;
pub mod hexagon_solver;
pub mod linalg;
pub mod pentagon_checker;
pub mod zeta_symbols;
pub mod verify;
pub mod cli;

pub use exact_arith::{bernoulli, int, rat, Rational};
pub use series_core::{BiSeries, CoeffRing, SeriesError, UniSeries};
