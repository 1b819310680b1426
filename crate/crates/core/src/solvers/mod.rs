//! Self-contained numeric kernels.
//!
//! Each submodule is a from-scratch implementation sized for this crate's
//! workloads: exact rational linear programming ([`lp`]), double-description
//! facet enumeration ([`dd`]), dense symmetric/Hermitian eigendecomposition
//! ([`eig`]), derivative-free maximization ([`nm`]), and a primal–dual
//! interior-point semidefinite solver ([`sdp`]). Keeping them in-tree (rather
//! than binding an external solver) makes every reported bound reproducible
//! from the source alone.

pub mod dd;
pub mod eig;
pub mod lp;
pub mod nm;
pub mod sdp;
