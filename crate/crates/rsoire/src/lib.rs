//! Learns restricted single-occurrence regular expressions with interleaving
//! from positive word samples.
//!
//! The pipeline builds a single-occurrence automaton from the sample
//! ([`soa`]), then rewrites it to an expression ([`infer`]): strongly
//! connected components are decomposed along maximum independent sets of a
//! symbol conflict graph and rejoined with the interleaving operator `&`,
//! while chains, branches, and bypasses become concatenation, disjunction,
//! and optionals. The learnt expression always lies in the restricted class
//! that [`expr::Expr::classify`] recognizes: interleaving only joins
//! sequential blocks, and repetition applies to single symbols only.
//!
//! [`lang`] gives the interleaving semantics itself — the shuffle of words,
//! membership through symbolic derivatives, bounded enumeration, and bounded
//! equivalence checking — and [`gen`] supplies random in-class expressions
//! plus characteristic samples for round-trip experiments.
//!
//! With the default `parallel` feature, batch learning and the shuffle
//! products inside enumeration fan out across threads; disabling the feature
//! yields the sequential fallback with identical results.

pub mod error;
pub mod expr;
pub mod gen;
pub mod infer;
pub mod lang;
pub mod soa;

pub use error::{Error, Result};
pub use expr::{parse, Expr, SoClass, Symbol};
pub use infer::{learn, learn_batch, InferenceTrace, LearnResult};
pub use lang::{bounded_equiv, enumerate, matches, BoundedLang, Equiv, Word};
pub use soa::{Sample, Soa};
