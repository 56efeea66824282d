//! Exact Lipschitz-free norms on finite pointed metric spaces.
//!
//! The crate covers metric spaces with rational distances and their sum and
//! quotient constructions ([`metric`]), base-point-vanishing Lipschitz
//! functions ([`lip`]), finitely supported elements of the free space and
//! their norm computed by two independent solvers ([`free`]), linear
//! equivalence witnesses between free spaces ([`witness`], [`constructions`]),
//! and covering-number based doubling estimates ([`doubling`]).

// distance matrices are indexed on both axes
#![allow(clippy::needless_range_loop)]

pub mod constructions;
pub mod doubling;
pub mod error;
pub mod exec;
pub mod free;
pub mod io;
pub mod linalg;
pub mod lip;
pub mod metric;
pub mod random;
pub mod rational;
pub mod simplex;
pub mod suite;
pub mod transport;
pub mod witness;

pub use error::{Error, Result};
pub use exec::Exec;
pub use free::{FlowSolution, FreeVector};
pub use lip::LipFunction;
pub use metric::{MetricSpace, PointMap, SpaceRef};
pub use rational::Rational;
pub use witness::LinearWitness;
