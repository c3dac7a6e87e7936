//! Derivations in identity systems, refutation by models, and structural
//! predicates on identities.

mod derive;
mod predicates;
mod quotient;
mod rewrite;

pub use derive::{derive, derive_with, replay, AuditedModels, DerivationResult, Limits, RewriteStep, UnknownReason};
pub use predicates::{invertibility_degree, is_efficient, is_linear_balanced, Invertibility};
pub use quotient::sw_modulo;
