//! Finite-group constructions that emit independently checkable certificates.
//!
//! Permutations compose left to right (`p * q` applies `p` first) and
//! conjugation is `x^h = h⁻¹ x h`.

pub mod amalgam;
pub mod catalog;
pub mod certificate;
pub mod chain;
pub mod error;
pub mod format;
pub mod hom;
pub mod hrushovski;
pub mod iso;
pub mod perm;
pub mod permgroup;
pub mod regular;
pub mod roots;
pub mod system;
pub mod table;
pub mod tower;

pub use amalgam::{
    amalgamate, equivariant_amalgamate, equivariant_joint_embed, fiber_product, restriction_epimorphism,
    restriction_into, AmalgamCertificate, EquivariantAmalgamCertificate, FiberProduct,
};
pub use catalog::{catalog, catalog_names, NamedGroup, Word};
pub use chain::StabChain;
pub use hrushovski::{align_conjugator, hrushovski_extend, Extension, PartialIso};
pub use iso::{all_subgroups, find_isomorphism};
pub use roots::{commuting_extension, root_extension, CommutingCertificate, Realization, RootCertificate};
pub use regular::{regular_rep, regular_representation};
pub use error::{Error, Result};
pub use perm::{parse_cycles, Permutation};
pub use permgroup::{extends_to_hom, hom_is_injective, orbit, schreier_sims, PermGroup};
pub use system::{EquivariantEmbedding, EquivariantSystem};
pub use table::{Elem, TableGroup};
pub use tower::{
    generic_power_tower, hall_tower, stage_conjugacy_check, stage_embedding_check, ConjugacyReport, EmbeddingReport,
    HallTower, PairOutcome, PairReport, PowerStep, PowerTower, PowerTowerStage, MAX_HALL_DEPTH,
};
pub use hom::{generated_automorphism_group, make_homomorphism, restrict_automorphism, AutomorphismGroup, GroupHom, PermRep};

/// Size limits shared by every construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest group that may be enumerated element by element.
    pub enumeration: usize,
    /// Largest permutation degree a regular-representation ambient may have.
    pub degree_cap: usize,
}

pub const ENUM_BOUND_VAR: &str = "HALLFORGE_ENUM_BOUND";

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            enumeration: 20_000,
            degree_cap: 5_000,
        }
    }
}

impl Bounds {
    /// Defaults, with the enumeration bound taken from `HALLFORGE_ENUM_BOUND` when set.
    pub fn from_env() -> Result<Self> {
        let mut b = Bounds::default();
        if let Ok(v) = std::env::var(ENUM_BOUND_VAR) {
            b.enumeration = v.trim().parse().map_err(|_| Error::Parse {
                line: 0,
                message: format!("{ENUM_BOUND_VAR} must be a positive integer, got `{v}`"),
            })?;
        }
        Ok(b)
    }

    pub fn with_degree_cap(mut self, cap: usize) -> Self {
        self.degree_cap = cap;
        self
    }
}
