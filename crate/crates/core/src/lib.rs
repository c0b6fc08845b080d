//! Schmidt games on self-similar fractals of the real line.
//!
//! Alice's constructive strategies (orbit avoidance for lacunary sequences
//! and badly approximable numbers) are played against adversarial Bobs on
//! IFS attractors, and the separation each strategy promises is
//! re-checked afterwards with exact rational arithmetic.

pub mod alice;
pub mod bob;
pub mod certify;
pub mod cli;
pub mod fractal;
pub mod game;
pub mod numerics;
pub mod spec_doc;
