//! Exact lower bounds on the integrality gap of Steiner tree LP relaxations.
//!
//! The pipeline: build a relaxation ([`formulation`]), produce candidate
//! points (exhaustive [`vertices`] or the heuristics in [`heuristics`]),
//! certify them as vertices ([`rank`]), and solve the per-vertex gap LP
//! ([`gap`]) whose optimum is the largest integrality gap any metric cost
//! can realise at that vertex.

pub mod error;
pub mod formulation;
pub mod guards;
pub mod instance;
pub mod lp;
pub mod rank;
pub mod scalar;
pub mod system;
pub mod vertices;
pub mod relax;
pub mod steiner;
pub mod canon;
pub mod digraph;
pub mod gap;
pub mod builtins;
pub mod generate;
pub mod catalog;
pub mod heuristics;
pub mod reproduce;

pub use error::{Error, Result};
pub use formulation::Kind;
pub use scalar::{Field, Rational};
pub use num_traits::{One, Zero};

/// The default exact scalar.
pub type Q = Rational;
pub type Instance = instance::SteinerInstance<Q>;
pub type Point = instance::ArcVector<Q>;
pub type System = system::ConstraintSystem<Q>;
