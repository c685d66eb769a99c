//! Groups with a tuple of distinguished automorphisms, and embeddings that
//! respect them.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::GroupHom;
use crate::table::{Elem, TableGroup};

/// `⟨G, φ₁, …, φₙ⟩`.
#[derive(Clone, Debug)]
pub struct EquivariantSystem {
    group: Arc<TableGroup>,
    autos: Vec<GroupHom>,
}

impl EquivariantSystem {
    pub fn new(group: &Arc<TableGroup>, autos: Vec<GroupHom>) -> Result<Self> {
        for (i, a) in autos.iter().enumerate() {
            if !Arc::ptr_eq(a.domain(), group) || !a.is_automorphism() || !a.is_surjective() {
                return Err(Error::NotAnAutomorphism(format!("automorphism {} of the system", i + 1)));
            }
        }
        Ok(EquivariantSystem {
            group: group.clone(),
            autos,
        })
    }

    /// The group with `n` identity automorphisms.
    pub fn with_identities(group: &Arc<TableGroup>, n: usize) -> Self {
        EquivariantSystem {
            group: group.clone(),
            autos: vec![GroupHom::identity(group); n],
        }
    }

    pub fn group(&self) -> &Arc<TableGroup> {
        &self.group
    }

    pub fn autos(&self) -> &[GroupHom] {
        &self.autos
    }

    pub fn n(&self) -> usize {
        self.autos.len()
    }
}

/// An injective `f: A → B` with `f ∘ αᵢ = βᵢ ∘ f` for every `i`.
#[derive(Clone, Debug)]
pub struct EquivariantEmbedding {
    hom: GroupHom,
    source: EquivariantSystem,
    target: EquivariantSystem,
}

impl EquivariantEmbedding {
    pub fn new(hom: GroupHom, source: &EquivariantSystem, target: &EquivariantSystem) -> Result<Self> {
        if !Arc::ptr_eq(hom.domain(), source.group()) || !Arc::ptr_eq(hom.codomain(), target.group()) {
            return Err(Error::CodomainMismatch("embedding does not join the given systems".into()));
        }
        if source.n() != target.n() {
            return Err(Error::MismatchedSystems {
                left: source.n(),
                right: target.n(),
            });
        }
        if !hom.is_injective() {
            return Err(Error::NotInjective);
        }
        for (i, (a, b)) in source.autos().iter().zip(target.autos()).enumerate() {
            let bad = source
                .group()
                .elements()
                .find(|&x| hom.apply(a.apply(x)) != b.apply(hom.apply(x)));
            if let Some(x) = bad {
                return Err(Error::NotEquivariant(format!(
                    "f∘α{0} ≠ β{0}∘f at element {x}",
                    i + 1
                )));
            }
        }
        Ok(EquivariantEmbedding {
            hom,
            source: source.clone(),
            target: target.clone(),
        })
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    pub fn source(&self) -> &EquivariantSystem {
        &self.source
    }

    pub fn target(&self) -> &EquivariantSystem {
        &self.target
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.hom.apply(x)
    }
}
