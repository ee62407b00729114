//! Deciding Cauchy density and related properties of functors between
//! finite categories, ordinary or enriched in a posetal base, together with
//! Cauchy completions and Morita equivalence.
//!
//! The generic decisions live in [`prof`] and are computed from coends;
//! [`contexts`] holds specialised criteria for preorders, monoids, groups
//! and metric spaces, each of which is cross-checked against the generic
//! route by the [`harness`].

pub mod base;
pub mod completion;
pub mod contexts;
pub mod fincat;
pub mod harness;
pub mod json;
pub mod prof;
pub mod search;
