//! Ideal-simplicial-volume toolkit for 3-manifolds with boundary.
//!
//! The crate has three layers:
//!
//! * geometry — Minkowski/Klein-model linear algebra ([`hyperlin`]), special
//!   functions and 1-D numerics ([`specfun`]), and (partially) truncated
//!   tetrahedra with hyperbolic volume quadrature ([`trunc`]);
//! * search — a multistart derivative-free estimate of the extremal volume
//!   `V_ell` of fully truncated tetrahedra with a lower bound on the internal
//!   edge lengths ([`extremal`]);
//! * combinatorics and reporting — ideal-triangulation quotients, vertex
//!   links, the alternated fundamental cycle and marked homology ranks
//!   ([`idtri`]), plus the invariant calculator assembling lower/upper/exact
//!   bounds and mapping-degree bounds ([`bounds`]).
//!
//! All geometric routines work in double precision; the combinatorial module
//! uses exact rational arithmetic throughout.

mod la;

pub mod bounds;
pub mod extremal;
pub mod hyperlin;
pub mod idtri;
pub mod specfun;
pub mod trunc;
