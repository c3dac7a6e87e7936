//! Membership in products of fully invariant congruences, witness cases,
//! and the lattice and lifting checks.

mod assign;
mod cases;
mod handle;
mod lattice;
mod lifting;
mod product;

pub use cases::{
    cnm_chain, run_case, run_witness, witness_case, wn_chain, CaseReport, CheckReport, IsotermClaim, LinkReport,
    Params, ReverseSearch, RunOptions, Verdict, WitnessCase, CASE_IDS,
};
pub use handle::{default_models, relate, Answer, Backend, BasisBounds, VarietyHandle};
pub use lattice::{fig1, fig2, m3, n5, named_poset, FinitePoset, PosetSpec};
pub use lifting::{all_equivalences, lifting_exhaustive, lifting_on_words, Equivalence, LiftingSummary, WordLifting};
pub use product::{
    alternating, default_alphabet, meet_candidates, product_member, product_member_over, Candidates, ProductResult,
};
