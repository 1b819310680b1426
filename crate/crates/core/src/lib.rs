//! Tools for two-party, two-outcome Bell inequalities.
//!
//! The crate covers the full working loop for this family of inequalities:
//!
//! * an exact model of scenarios, behaviours, and Bell expressions in
//!   probability (Collins–Gisin) coordinates, with rational arithmetic for
//!   classical bounds and facet (tightness) tests ([`ineq`]);
//! * relabeling symmetries and canonical forms for equivalence checking
//!   ([`sym`]), plus plain-text catalogs of named inequalities ([`catalog`]);
//! * generation of new tight inequalities from old ones by polytope slicing
//!   and shelling ([`facet`]);
//! * variational lower bounds on the quantum value over fixed local
//!   dimension, by alternating projective-measurement and state updates
//!   ([`seesaw`]);
//! * certified upper bounds from the moment-matrix (NPA) hierarchy, solved
//!   by a hand-rolled primal–dual interior-point method ([`npa`]);
//! * detection-efficiency thresholds for the resulting quantum strategies
//!   ([`detect`]).
//!
//! The numeric kernels (simplex, double description, eigensolver,
//! Nelder–Mead, semidefinite solver) are implemented in [`solvers`] with no
//! external dependencies, so results do not hinge on a system BLAS or an
//! installed solver binary.

pub mod catalog;
pub mod detect;
pub mod facet;
pub mod ineq;
pub mod known;
pub mod linalg;
pub mod npa;
pub mod rat;
pub mod seesaw;
pub mod solvers;
pub mod sym;

pub use ineq::{BellInequality, CorrelationPoint, DeterministicVertex, Scenario};
pub use rat::Rat;
