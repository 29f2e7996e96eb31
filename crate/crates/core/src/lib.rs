//! Expectation of gambles under probability measures, credal sets, belief
//! functions and possibility measures, together with exact decision
//! procedures for logics that reason about those expectations.
//!
//! All arithmetic is exact: values are arbitrary-precision rationals and the
//! linear-programming layer is an exact simplex with infeasibility
//! certificates.
//!
//! Module map:
//!
//! * [`atoms`]: finite world spaces, propositional formulas, gambles.
//! * [`measures`]: the four uncertainty representations and their checks.
//! * [`expectation`]: expectation operators, each with an independent route.
//! * [`logic`]: syntax, parsing, normal forms and formula transformations.
//! * [`linsolve`]: exact rational LP with Farkas/Motzkin certificates.
//! * [`semantics`]: truth of formulas in finite structures.
//! * [`decide`]: satisfiability and validity.
//! * [`coherence`]: coherence of lower-expectation assessments and natural
//!   extension.
//! * [`document`]: JSON model and assessment documents.
//! * [`sample`]: seeded random generators for models, gambles and formulas.

pub mod atoms;
pub mod coherence;
pub mod decide;
pub mod document;
pub mod error;
pub mod expectation;
pub mod linsolve;
pub mod logic;
pub mod measures;
pub mod rational;
pub mod sample;
pub mod semantics;

pub use error::{Error, Result};
pub use rational::Rational;
