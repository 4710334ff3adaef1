//! Exact bounded solvers for Thue–Mahler and S-unit equations over the
//! rationals, together with the constructive maps that carry solutions of
//! one equation to solutions of another.

pub mod sarith;
pub mod linalg;
pub mod poly;
pub mod projective;
pub mod unitsolve;
pub mod thuemahler;
pub mod interval;
pub mod approx;
pub mod hyperarr;
pub mod curves;
pub mod cli;
