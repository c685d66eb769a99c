use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A finitely generated permutation group with a lazily built stabilizer chain.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: OnceLock<StabChain>,
}

impl std::fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators)
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::DegreeMismatch { left: 0, right: 1 });
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        Ok(PermGroup {
            degree,
            generators,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).expect("positive degree")
    }

    /// `Sym(n)` generated by `(1 2)` and `(1 2 … n)`.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::cycle(n, &[1, 2]).unwrap());
        }
        if n >= 3 {
            let all: Vec<usize> = (1..=n).collect();
            gens.push(Permutation::cycle(n, &all).unwrap());
        }
        PermGroup::new(n.max(1), gens).unwrap()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn order_usize(&self) -> Option<usize> {
        self.order().to_usize()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain().contains(p)
    }

    pub fn orbit(&self, point: usize) -> Result<Vec<usize>> {
        orbit(self.degree, &self.generators, point)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(1).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// All elements, breadth-first from the identity with generators in input order.
    pub fn enumerate(&self, bound: usize) -> Result<Vec<Permutation>> {
        let order = self.order();
        if order > BigUint::from(bound) {
            return Err(Error::OrderTooLarge {
                order: order.to_string(),
                bound,
            });
        }
        Ok(closure(self.degree, &self.generators))
    }
}

/// Graph test: `gens[i] ↦ images[i]` extends to a homomorphism on
/// `⟨gens⟩` iff the diagonal group `⟨gens[i] ⊕ images[i]⟩` is no larger
/// than `⟨gens⟩`.
pub fn extends_to_hom(domain: &PermGroup, images: &[Permutation]) -> Result<bool> {
    if images.len() != domain.generators().len() {
        return Err(Error::CheckFailed("wrong number of generator images".into()));
    }
    let Some(first) = images.first() else {
        return Ok(true);
    };
    let d = first.degree();
    if let Some(p) = images.iter().find(|p| p.degree() != d) {
        return Err(Error::DegreeMismatch {
            left: d,
            right: p.degree(),
        });
    }
    let diag = domain
        .generators()
        .iter()
        .zip(images)
        .map(|(g, h)| Permutation::direct_sum(&[g, h]))
        .collect();
    Ok(PermGroup::new(domain.degree() + d, diag)?.order() == domain.order())
}

/// Whether the homomorphism given by `images` is injective on `domain`.
pub fn hom_is_injective(domain: &PermGroup, images: &[Permutation]) -> Result<bool> {
    if !extends_to_hom(domain, images)? {
        return Err(Error::NotAHomomorphism);
    }
    let Some(first) = images.first() else {
        return Ok(domain.order() == BigUint::from(1u32));
    };
    Ok(PermGroup::new(first.degree(), images.to_vec())?.order() == domain.order())
}

/// Breadth-first closure of `gens` from the identity; returns the elements in
/// discovery order.
pub(crate) fn closure(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, usize> = HashMap::new();
    let mut elements = vec![id.clone()];
    seen.insert(id, 0);
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let x = elements[i].mul_unchecked(g);
            if !seen.contains_key(&x) {
                seen.insert(x.clone(), elements.len());
                elements.push(x);
            }
        }
        i += 1;
    }
    elements
}

/// The orbit of a 1-indexed `point` under `gens`, in breadth-first discovery order.
pub fn orbit(degree: usize, gens: &[Permutation], point: usize) -> Result<Vec<usize>> {
    if point == 0 || point > degree {
        return Err(Error::PointOutOfRange { point, degree });
    }
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
    }
    let mut seen = vec![false; degree];
    let mut out = vec![point];
    seen[point - 1] = true;
    let mut queue = VecDeque::from([point - 1]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.apply(p);
            if !seen[q] {
                seen[q] = true;
                out.push(q + 1);
                queue.push_back(q);
            }
        }
    }
    Ok(out)
}

/// Runs Schreier–Sims on a nonempty generator list.
pub fn schreier_sims(gens: &[Permutation]) -> Result<StabChain> {
    let first = gens
        .first()
        .ok_or_else(|| Error::CheckFailed("schreier_sims needs at least one generator".into()))?;
    let degree = first.degree();
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(Error::DegreeMismatch {
            left: degree,
            right: g.degree(),
        });
    }
    Ok(StabChain::build(degree, gens))
}
