//! Homomorphisms given by generator images, verified by the graph test.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permgroup::PermGroup;
use crate::table::{Elem, TableGroup};

/// A verified homomorphism between enumerated groups, stored as a full element map.
#[derive(Clone, Debug)]
pub struct GroupHom {
    domain: Arc<TableGroup>,
    codomain: Arc<TableGroup>,
    gen_images: Vec<Elem>,
    map: Vec<Elem>,
}

/// Walks the graph of the generator assignment breadth-first. The graph
/// subgroup `⟨(s, image(s))⟩` has order `|domain|` exactly when no element is
/// reached with two different images.
fn graph_closure<T, F>(domain: &TableGroup, identity: T, gen_images: &[T], mul: F) -> Option<Vec<T>>
where
    T: Clone + PartialEq,
    F: Fn(&T, &T) -> T,
{
    let mut map: Vec<Option<T>> = vec![None; domain.order()];
    map[0] = Some(identity);
    let mut queue = VecDeque::from([0 as Elem]);
    while let Some(x) = queue.pop_front() {
        for (k, &s) in domain.gens().iter().enumerate() {
            let xs = domain.mul(x, s);
            let y = mul(map[x as usize].as_ref().unwrap(), &gen_images[k]);
            match &map[xs as usize] {
                Some(existing) if *existing != y => return None,
                Some(_) => {}
                None => {
                    map[xs as usize] = Some(y);
                    queue.push_back(xs);
                }
            }
        }
    }
    map.into_iter().collect()
}

impl GroupHom {
    /// Builds the homomorphism sending `domain.gens()[i]` to `gen_images[i]`.
    pub fn new(domain: &Arc<TableGroup>, codomain: &Arc<TableGroup>, gen_images: Vec<Elem>) -> Result<GroupHom> {
        if gen_images.len() != domain.gens().len() {
            return Err(Error::CheckFailed(format!(
                "{} images for {} generators",
                gen_images.len(),
                domain.gens().len()
            )));
        }
        if let Some(&y) = gen_images.iter().find(|&&y| y as usize >= codomain.order()) {
            return Err(Error::NotAMember(format!("image {y} outside the codomain")));
        }
        let map = graph_closure(domain, 0, &gen_images, |a, b| codomain.mul(*a, *b))
            .ok_or(Error::NotAHomomorphism)?;
        Ok(GroupHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            gen_images,
            map,
        })
    }

    /// Accepts a full element map after checking `m(a·s) = m(a)·m(s)` for every
    /// element `a` and generator `s`.
    pub fn from_map(domain: &Arc<TableGroup>, codomain: &Arc<TableGroup>, map: Vec<Elem>) -> Result<GroupHom> {
        if map.len() != domain.order() || map.iter().any(|&y| y as usize >= codomain.order()) {
            return Err(Error::NotAHomomorphism);
        }
        let gen_images: Vec<Elem> = domain.gens().iter().map(|&s| map[s as usize]).collect();
        let h = GroupHom::new(domain, codomain, gen_images)?;
        if h.map != map {
            return Err(Error::NotAHomomorphism);
        }
        Ok(h)
    }

    pub fn identity(group: &Arc<TableGroup>) -> GroupHom {
        GroupHom {
            domain: group.clone(),
            codomain: group.clone(),
            gen_images: group.gens().to_vec(),
            map: group.elements().collect(),
        }
    }

    /// The inclusion of a subgroup into its parent.
    pub fn inclusion(sub: &Arc<TableGroup>) -> Result<GroupHom> {
        let (parent, elements) = sub
            .parent()
            .ok_or_else(|| Error::CheckFailed("not a subgroup".into()))?;
        Ok(GroupHom {
            domain: sub.clone(),
            codomain: parent.clone(),
            gen_images: sub.gens().iter().map(|&s| elements[s as usize]).collect(),
            map: elements.to_vec(),
        })
    }

    pub fn domain(&self) -> &Arc<TableGroup> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<TableGroup> {
        &self.codomain
    }

    pub fn gen_images(&self) -> &[Elem] {
        &self.gen_images
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x as usize]
    }

    pub fn kernel(&self) -> Vec<Elem> {
        self.domain.elements().filter(|&x| self.apply(x) == 0).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn image(&self) -> Vec<Elem> {
        let set: HashSet<Elem> = self.map.iter().copied().collect();
        let mut v: Vec<Elem> = set.into_iter().collect();
        v.sort_unstable();
        v
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.codomain.order()
    }

    pub fn is_endomorphism(&self) -> bool {
        Arc::ptr_eq(&self.domain, &self.codomain)
    }

    pub fn is_automorphism(&self) -> bool {
        self.is_endomorphism() && self.is_injective()
    }

    /// Exhaustive `φ(xy) = φ(x)φ(y)` over all pairs; an independent re-check.
    pub fn check_all_pairs(&self) -> bool {
        let (g, h) = (&self.domain, &self.codomain);
        g.elements().all(|x| {
            g.elements()
                .all(|y| self.apply(g.mul(x, y)) == h.mul(self.apply(x), self.apply(y)))
        })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if !Arc::ptr_eq(&self.codomain, &next.domain) {
            return Err(Error::CodomainMismatch("composition of unrelated maps".into()));
        }
        Ok(GroupHom {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            gen_images: self.gen_images.iter().map(|&y| next.apply(y)).collect(),
            map: self.map.iter().map(|&y| next.apply(y)).collect(),
        })
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Result<GroupHom> {
        if !self.is_injective() || !self.is_surjective() {
            return Err(Error::NotAnAutomorphism("not bijective".into()));
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as Elem;
        }
        GroupHom::from_map(&self.codomain, &self.domain, inv)
    }

    /// Order of an automorphism as an element map.
    pub fn automorphism_order(&self) -> usize {
        assert!(self.is_endomorphism());
        let mut cur = self.map.clone();
        let mut k = 1;
        while cur.iter().enumerate().any(|(i, &x)| i as Elem != x) {
            cur = cur.iter().map(|&x| self.apply(x)).collect();
            k += 1;
        }
        k
    }

    /// `self^k` for an automorphism (`k` may be negative).
    pub fn power(&self, k: i64) -> GroupHom {
        assert!(self.is_endomorphism());
        let base = if k < 0 {
            self.inverse().expect("automorphism")
        } else {
            self.clone()
        };
        let mut map: Vec<Elem> = self.domain.elements().collect();
        for _ in 0..k.unsigned_abs() {
            map = map.iter().map(|&x| base.apply(x)).collect();
        }
        GroupHom::from_map(&self.domain, &self.domain, map).expect("power of an automorphism")
    }

    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.map == other.map
    }

    /// The element map as a permutation of `0..|G|`.
    pub fn as_point_map(&self) -> Permutation {
        Permutation::from_images(self.map.clone()).expect("bijective map")
    }
}

/// Verified `make_homomorphism` entry point.
pub fn make_homomorphism(domain: &Arc<TableGroup>, codomain: &Arc<TableGroup>, gen_images: Vec<Elem>) -> Result<GroupHom> {
    GroupHom::new(domain, codomain, gen_images)
}

/// A homomorphism from an enumerated group into `Sym(degree)`.
#[derive(Clone, Debug)]
pub struct PermRep {
    domain: Arc<TableGroup>,
    degree: usize,
    gen_images: Vec<Permutation>,
    images: Vec<Permutation>,
}

impl PermRep {
    pub fn new(domain: &Arc<TableGroup>, degree: usize, gen_images: Vec<Permutation>) -> Result<PermRep> {
        if gen_images.len() != domain.gens().len() {
            return Err(Error::CheckFailed("wrong number of generator images".into()));
        }
        if let Some(p) = gen_images.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: p.degree(),
            });
        }
        let images = graph_closure(domain, Permutation::identity(degree), &gen_images, |a, b| {
            a.mul_unchecked(b)
        })
        .ok_or(Error::NotAHomomorphism)?;
        Ok(PermRep {
            domain: domain.clone(),
            degree,
            gen_images,
            images,
        })
    }

    pub fn domain(&self) -> &Arc<TableGroup> {
        &self.domain
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn gen_images(&self) -> &[Permutation] {
        &self.gen_images
    }

    pub fn apply(&self, x: Elem) -> &Permutation {
        &self.images[x as usize]
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    pub fn is_injective(&self) -> bool {
        let set: HashSet<&Permutation> = self.images.iter().collect();
        set.len() == self.images.len()
    }

    pub fn image_group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.gen_images.clone()).expect("degrees checked")
    }

    /// The same map with every image conjugated by `h`.
    pub fn conjugated(&self, h: &Permutation) -> PermRep {
        PermRep {
            domain: self.domain.clone(),
            degree: self.degree,
            gen_images: self.gen_images.iter().map(|p| p.conjugate_by(h)).collect(),
            images: self.images.iter().map(|p| p.conjugate_by(h)).collect(),
        }
    }
}

/// `β↾A` for a subgroup `A` of the domain of `β`.
pub fn restrict_automorphism(beta: &GroupHom, a: &Arc<TableGroup>) -> Result<GroupHom> {
    let (parent, elements) = a
        .parent()
        .ok_or_else(|| Error::CheckFailed("restriction target is not a subgroup".into()))?;
    if !Arc::ptr_eq(parent, beta.domain()) || !beta.is_endomorphism() {
        return Err(Error::CodomainMismatch("subgroup of a different group".into()));
    }
    let gen_images = a
        .gens()
        .iter()
        .map(|&s| a.from_parent(beta.apply(elements[s as usize])))
        .collect::<Option<Vec<Elem>>>()
        .ok_or(Error::SubgroupNotInvariant)?;
    GroupHom::new(a, a, gen_images)
}

/// The finite group generated by some automorphisms of one group, multiplied
/// as functions: `σ·τ = σ∘τ`.
#[derive(Clone, Debug)]
pub struct AutomorphismGroup {
    base: Arc<TableGroup>,
    group: Arc<TableGroup>,
}

impl AutomorphismGroup {
    pub fn base(&self) -> &Arc<TableGroup> {
        &self.base
    }

    pub fn group(&self) -> &Arc<TableGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// The element map of element `w`.
    pub fn map_of(&self, w: Elem) -> &[u32] {
        self.group.raw_permutation(w).expect("map group").images()
    }

    pub fn automorphism(&self, w: Elem) -> GroupHom {
        GroupHom::from_map(&self.base, &self.base, self.map_of(w).to_vec()).expect("closure of automorphisms")
    }

    pub fn index_of(&self, auto: &GroupHom) -> Option<Elem> {
        self.group.index_of_permutation(&auto.as_point_map())
    }
}

pub fn generated_automorphism_group(
    base: &Arc<TableGroup>,
    autos: &[GroupHom],
    bound: usize,
) -> Result<AutomorphismGroup> {
    for a in autos {
        if !Arc::ptr_eq(a.domain(), base) || !a.is_automorphism() {
            return Err(Error::NotAnAutomorphism("generator is not an automorphism of the group".into()));
        }
    }
    let gens: Vec<Permutation> = autos.iter().map(GroupHom::as_point_map).collect();
    let group = TableGroup::from_maps(base.order(), &gens, bound)?;
    Ok(AutomorphismGroup {
        base: base.clone(),
        group: Arc::new(group),
    })
}
