//! The cannibal animal game: a partial Tic-Tac-Toe variant on the infinite
//! grid where Alice claims one cell per turn and Bob claims a whole copy of
//! the agreed animal.
//!
//! * [`animal`]: polyominoes, symmetries, named families, punching.
//! * [`engine`]: rules, win detection, game records.
//! * [`bob`]: block-pairing strategies and the static crack check.
//! * [`alice`]: the stab-set strategy, the bounding strategy and the fast
//!   square strategy.
//! * [`solver`]: exact search for small bounded boards.
//! * [`harness`]: strategy registry, matches and series.

pub mod animal;
pub mod engine;
pub mod bob;
pub mod alice;
pub mod solver;
pub mod harness;
#[cfg(feature = "server")]
pub mod service;
