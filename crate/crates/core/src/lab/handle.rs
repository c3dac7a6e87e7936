//! Handles answering whether two words are related by `θ_V`.

use std::fmt;

use serde::Serialize;

use crate::catalog::{variety_basis, IdentitySystem, Representation, Variety};
use crate::deciders::{decide, ExactTheory};
use crate::engine::{derive_with, sw_modulo, AuditedModels, DerivationResult, Limits};
use crate::error::Result;
use crate::monoid::{build_sw, dual_monoid, satisfies, Assignment, FiniteMonoid, Satisfaction};
use crate::word::{w, Identity, Word};

/// Three-valued answer of a membership test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    #[serde(rename = "true")]
    Yes,
    #[serde(rename = "false")]
    No,
    #[serde(rename = "unknown")]
    Unknown,
}

impl Answer {
    pub fn from_bool(b: bool) -> Answer {
        if b {
            Answer::Yes
        } else {
            Answer::No
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "true",
            Answer::No => "false",
            Answer::Unknown => "unknown",
        })
    }
}

/// Search bounds for equational backends. The length bound of a derivation
/// is the longer goal side plus `len_slack`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisBounds {
    pub len_slack: usize,
    pub max_steps: usize,
    pub max_mem_bytes: Option<usize>,
}

impl Default for BasisBounds {
    fn default() -> Self {
        BasisBounds { len_slack: 2, max_steps: 200_000, max_mem_bytes: None }
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    Exact(ExactTheory),
    /// `θ_{var M}`: identity checking in `M`.
    Generator(FiniteMonoid),
    /// Bounded derivation, refuted by audited models.
    Basis {
        system: IdentitySystem,
        bounds: BasisBounds,
        models: AuditedModels,
    },
}

#[derive(Clone, Debug)]
pub struct VarietyHandle {
    pub name: String,
    pub backend: Backend,
}

impl VarietyHandle {
    pub fn exact(th: ExactTheory) -> VarietyHandle {
        VarietyHandle { name: th.to_string(), backend: Backend::Exact(th) }
    }

    pub fn generator(name: impl Into<String>, m: FiniteMonoid) -> VarietyHandle {
        VarietyHandle { name: name.into(), backend: Backend::Generator(m) }
    }

    pub fn basis(
        name: impl Into<String>,
        system: IdentitySystem,
        bounds: BasisBounds,
        models: Vec<FiniteMonoid>,
    ) -> VarietyHandle {
        let models = AuditedModels::new(&system, models);
        VarietyHandle { name: name.into(), backend: Backend::Basis { system, bounds, models } }
    }

    /// Builds the preferred backend for a catalog variety. Equational
    /// backends get the catalog's default refutation models.
    pub fn from_variety(v: &Variety, cap: usize, bounds: BasisBounds) -> Result<VarietyHandle> {
        let name = v.to_string();
        Ok(match v.representation(cap)? {
            Representation::Exact(th) => VarietyHandle { name, backend: Backend::Exact(th) },
            Representation::Generator(ws) => VarietyHandle::generator(name, build_sw(&ws)),
            Representation::Basis(sys) => {
                let models = default_models(v, cap)?;
                VarietyHandle::basis(name, sys, bounds, models)
            }
        })
    }

    pub fn parse(name: &str, cap: usize, bounds: BasisBounds) -> Result<VarietyHandle> {
        VarietyHandle::from_variety(&name.parse()?, cap, bounds)
    }

    pub fn kind(&self) -> &'static str {
        match self.backend {
            Backend::Exact(_) => "exact",
            Backend::Generator(_) => "generator",
            Backend::Basis { .. } => "basis",
        }
    }

    /// Is `u θ_V v`?
    pub fn relate(&self, u: &Word, v: &Word) -> Answer {
        if u == v {
            return Answer::Yes;
        }
        let id = Identity::new(u.clone(), v.clone());
        match &self.backend {
            Backend::Exact(th) => Answer::from_bool(decide(*th, &id)),
            Backend::Generator(m) => Answer::from_bool(satisfies(m, &id).holds()),
            Backend::Basis { system, bounds, models } => {
                if models.refute(&id).is_some() {
                    return Answer::No;
                }
                let limits = Limits {
                    max_len: u.len().max(v.len()) + bounds.len_slack,
                    max_steps: bounds.max_steps,
                    max_mem_bytes: bounds.max_mem_bytes,
                };
                match derive_with(system, &id, limits, models) {
                    DerivationResult::Proved(_) => Answer::Yes,
                    DerivationResult::RefutedByModel { .. } => Answer::No,
                    DerivationResult::Unknown(_) => {
                        match sw_modulo(&[u.clone(), v.clone()], system, u.len().max(v.len())) {
                            Ok(m) if !satisfies(&m, &id).holds() => Answer::No,
                            _ => Answer::Unknown,
                        }
                    }
                }
            }
        }
    }

    /// Monoids in the variety, usable to refute membership.
    pub fn models(&self) -> Vec<&FiniteMonoid> {
        match &self.backend {
            Backend::Exact(_) => Vec::new(),
            Backend::Generator(m) => vec![m],
            Backend::Basis { models, .. } => models.valid().collect(),
        }
    }

    /// A model of the variety with an assignment separating `u` and `v`,
    /// found without derivations.
    pub fn refute(&self, u: &Word, v: &Word) -> Option<(&FiniteMonoid, Assignment)> {
        let id = Identity::new(u.clone(), v.clone());
        self.models().into_iter().find_map(|m| match satisfies(m, &id) {
            Satisfaction::Fails(a) => Some((m, a)),
            Satisfaction::Holds => None,
        })
    }

    /// Cheap test used for pruning: `false` only when `u θ_V v` is known to
    /// fail. Equational backends consult their stored models only.
    pub fn may_relate(&self, u: &Word, v: &Word) -> bool {
        if u == v {
            return true;
        }
        let id = Identity::new(u.clone(), v.clone());
        match &self.backend {
            Backend::Exact(th) => decide(*th, &id),
            Backend::Generator(m) => satisfies(m, &id).holds(),
            Backend::Basis { models, .. } => models.refute(&id).is_none(),
        }
    }
}

/// `relate(h, u, v)`.
pub fn relate(h: &VarietyHandle, u: &Word, v: &Word) -> Answer {
    h.relate(u, v)
}

/// Refutation models for varieties handled equationally.
pub fn default_models(v: &Variety, cap: usize) -> Result<Vec<FiniteMonoid>> {
    Ok(match v {
        Variety::E => {
            let sys = variety_basis(v, cap)?;
            vec![sw_modulo(&[w("xxy"), w("yxx")], &sys, 4)?]
        }
        Variety::N => {
            let sys = variety_basis(v, cap)?;
            vec![build_sw(&[w("xyx")]), sw_modulo(&[w("xytxy")], &sys, 7)?]
        }
        Variety::Dual(inner) => default_models(inner, cap)?.iter().map(dual_monoid).collect(),
        _ => Vec::new(),
    })
}
