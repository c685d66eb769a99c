//! Realizing partial isomorphisms of a finite group as conjugations inside
//! the symmetric group on its elements.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::{GroupHom, PermRep};
use crate::perm::Permutation;
use crate::permgroup::PermGroup;
use crate::regular::regular_rep;
use crate::table::{Elem, TableGroup};
use crate::Bounds;

/// An isomorphism between two subgroups of a common ambient group.
#[derive(Clone, Debug)]
pub struct PartialIso {
    ambient: Arc<TableGroup>,
    domain: Arc<TableGroup>,
    /// domain subgroup → ambient, injective, image = codomain subgroup
    hom: GroupHom,
    codomain: Vec<Elem>,
}

impl PartialIso {
    /// The isomorphism `⟨domain_gens⟩ → ⟨images⟩` sending `domain_gens[i] ↦ images[i]`.
    pub fn new(ambient: &Arc<TableGroup>, domain_gens: &[Elem], images: &[Elem], bound: usize) -> Result<Self> {
        if domain_gens.len() != images.len() {
            return Err(Error::InvalidPartialIso("generator and image counts differ".into()));
        }
        let domain = Arc::new(
            TableGroup::subgroup_generated(ambient, domain_gens, bound)
                .map_err(|e| Error::InvalidPartialIso(e.to_string()))?,
        );
        let hom = GroupHom::new(&domain, ambient, images.to_vec())
            .map_err(|e| Error::InvalidPartialIso(format!("map is not a homomorphism ({e})")))?;
        Self::from_hom(hom)
    }

    /// Wraps an injective homomorphism from a subgroup into its parent.
    pub fn from_hom(hom: GroupHom) -> Result<Self> {
        let domain = hom.domain().clone();
        let (ambient, _) = domain
            .parent()
            .ok_or_else(|| Error::InvalidPartialIso("domain is not a subgroup".into()))?;
        if !Arc::ptr_eq(ambient, hom.codomain()) {
            return Err(Error::InvalidPartialIso("codomain is not the ambient group".into()));
        }
        if !hom.is_injective() {
            return Err(Error::InvalidPartialIso("map is not injective".into()));
        }
        let codomain = hom.image();
        Ok(PartialIso {
            ambient: ambient.clone(),
            domain,
            hom,
            codomain,
        })
    }

    pub fn identity(sub: &Arc<TableGroup>) -> Result<Self> {
        Self::from_hom(GroupHom::inclusion(sub)?)
    }

    pub fn ambient(&self) -> &Arc<TableGroup> {
        &self.ambient
    }

    pub fn domain(&self) -> &Arc<TableGroup> {
        &self.domain
    }

    pub fn hom(&self) -> &GroupHom {
        &self.hom
    }

    /// Ambient indices of the domain subgroup, in its canonical order.
    pub fn domain_elements(&self) -> &[Elem] {
        self.domain.parent().unwrap().1
    }

    /// Ambient indices of the codomain subgroup, ascending.
    pub fn codomain_elements(&self) -> &[Elem] {
        &self.codomain
    }

    /// `(k, ψ(k))` for every `k` in the domain, as ambient indices.
    pub fn pairs(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        self.domain_elements()
            .iter()
            .enumerate()
            .map(|(i, &k)| (k, self.hom.apply(i as Elem)))
    }
}

/// Least element of each left coset `xK`, ascending, and the coset of each element.
fn coset_representatives(g: &TableGroup, k: &[Elem]) -> Vec<Elem> {
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if covered[x as usize] {
            continue;
        }
        reps.push(x);
        for &kk in k {
            covered[g.mul(x, kk) as usize] = true;
        }
    }
    reps
}

/// A permutation `h` of the elements of `G` (point `i + 1` is element `i`)
/// with `ρ(k)^h = ρ(ψ(k))` for every `k` in the domain of `ψ`.
///
/// The `ρ(K)`-orbits are the cosets `xK`; pairing the least representatives
/// `xᵢ` of `K`-cosets with the least representatives `x′ᵢ` of `ψ(K)`-cosets in
/// ascending order, `h(xᵢ·k) = x′ᵢ·ψ(k)`.
pub fn align_conjugator(g: &TableGroup, psi: &PartialIso) -> Result<Permutation> {
    if g.order() != psi.ambient().order() {
        return Err(Error::InvalidPartialIso("partial isomorphism of a different group".into()));
    }
    let pairs: Vec<(Elem, Elem)> = psi.pairs().collect();
    let reps = coset_representatives(g, psi.domain_elements());
    let reps_image = coset_representatives(g, psi.codomain_elements());
    if reps.len() != reps_image.len() {
        return Err(Error::InvalidPartialIso("domain and codomain sizes differ".into()));
    }
    let mut images = vec![u32::MAX; g.order()];
    for (&x, &y) in reps.iter().zip(&reps_image) {
        for &(k, pk) in &pairs {
            images[g.mul(x, k) as usize] = g.mul(y, pk);
        }
    }
    Permutation::from_images(images).map_err(|_| Error::InvalidPartialIso("alignment is not a bijection".into()))
}

/// A finite group in `Sym(|A|)` where every partial isomorphism becomes
/// conjugation by an explicit element.
#[derive(Clone, Debug)]
pub struct Extension {
    pub group: Arc<TableGroup>,
    pub psis: Vec<PartialIso>,
    pub ambient: PermGroup,
    pub rho: PermRep,
    pub conjugators: Vec<Permutation>,
}

pub fn hrushovski_extend(a: &Arc<TableGroup>, psis: &[PartialIso], bounds: &Bounds) -> Result<Extension> {
    if a.order() > bounds.degree_cap {
        return Err(Error::DegreeCapExceeded {
            degree: a.order(),
            cap: bounds.degree_cap,
        });
    }
    let rho = regular_rep(a, bounds.degree_cap)?;
    if !rho.is_injective() {
        return Err(Error::CheckFailed("regular representation is not injective".into()));
    }
    let ambient = PermGroup::symmetric(a.order());
    let mut conjugators = Vec::new();
    for (i, psi) in psis.iter().enumerate() {
        if !Arc::ptr_eq(psi.ambient(), a) {
            return Err(Error::InvalidPartialIso(format!("map {} is not on the given group", i + 1)));
        }
        let h = align_conjugator(a, psi)?;
        if !ambient.contains(&h) {
            return Err(Error::CheckFailed(format!("conjugator {} outside the ambient", i + 1)));
        }
        for (k, pk) in psi.pairs() {
            if rho.apply(k).conjugate_by(&h) != *rho.apply(pk) {
                return Err(Error::CheckFailed(format!("conjugator {} fails at element {k}", i + 1)));
            }
        }
        conjugators.push(h);
    }
    Ok(Extension {
        group: a.clone(),
        psis: psis.to_vec(),
        ambient,
        rho,
        conjugators,
    })
}
