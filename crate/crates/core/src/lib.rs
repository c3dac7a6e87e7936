//! Computational toolkit for monoid varieties given by words: Rees quotient
//! monoids S(W), identity checking, bounded derivations, exact deciders for
//! small varieties, and relational products of fully invariant congruences
//! on the free monoid.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod deciders;
pub mod engine;
pub mod error;
pub mod lab;
pub mod monoid;
pub mod suite;
pub mod word;

pub use error::{Error, Result};
pub use word::{Identity, Letter, Word};
