//! Exact witness-tree objectives for Steiner-type host trees.

pub mod claw_solver;
pub mod error;
pub mod harmonic;
pub mod instances;
pub mod json;
pub mod laminar;
pub mod lemma_audit;
pub mod nwt_solver;
pub mod oracle;
pub mod rational;
pub mod tree;
pub mod witness;

pub use error::{Result, WitnessError};
pub use harmonic::harmonic;
pub use rational::{q, Rational};
pub use tree::{EdgeSpec, NodeId, NodeSpec, Tree};
pub use witness::{eval, eval_ewt, eval_nwt, impose, ImposedVector, Variant, WitnessTree};
