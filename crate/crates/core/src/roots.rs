//! Extending automorphisms to conjugations by commuting elements, and
//! extracting `n`-th roots of automorphisms.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::amalgam::{amalgamate, AmalgamCertificate};
use crate::error::{Error, Result};
use crate::hom::{restrict_automorphism, GroupHom};
use crate::perm::Permutation;
use crate::permgroup::PermGroup;
use crate::table::{Elem, TableGroup};
use crate::Bounds;

/// Elements `f, g` of a permutation group `C ≥ e(B)` with `fg = gf`,
/// `e(x)^f = e(α(x))` on `A` and `e(y)^g = e(β(y))` on `B`.
#[derive(Clone, Debug)]
pub struct CommutingCertificate {
    pub a: Arc<TableGroup>,
    pub b: Arc<TableGroup>,
    pub alpha: GroupHom,
    pub beta: GroupHom,
    /// `⟨f⟩ × ⟨g⟩` with `f = (1, 0)`, `g = (0, 1)`.
    pub h: Arc<TableGroup>,
    /// `A ⋊ H`.
    pub g_group: Arc<TableGroup>,
    /// `B ⋊ ⟨β⟩`.
    pub b_prime: Arc<TableGroup>,
    /// `A ⋊ ⟨g⟩`, the common subgroup of `G` and `B′`.
    pub x: Arc<TableGroup>,
    pub amalgam: AmalgamCertificate,
    pub f_elem: Permutation,
    pub g_elem: Permutation,
}

impl CommutingCertificate {
    pub fn degree(&self) -> usize {
        self.amalgam.degree()
    }

    /// `e(y)` for `y ∈ B`.
    pub fn e(&self, y: Elem) -> Permutation {
        self.amalgam.s(self.b_prime.from_pair(y, 0))
    }

    /// Index in `B` of an element of `A`.
    pub fn a_in_b(&self, x: Elem) -> Elem {
        self.a.parent().unwrap().1[x as usize]
    }

    /// The output group.
    pub fn c(&self) -> &PermGroup {
        &self.amalgam.d
    }
}

fn check_invariant(b: &Arc<TableGroup>, a: &Arc<TableGroup>, beta: &GroupHom) -> Result<GroupHom> {
    match a.parent() {
        Some((p, _)) if Arc::ptr_eq(p, b) => {}
        _ => return Err(Error::HypothesisFailed("A is not a subgroup of B".into())),
    }
    if !Arc::ptr_eq(beta.domain(), b) || !beta.is_automorphism() || !beta.is_surjective() {
        return Err(Error::HypothesisFailed("β is not an automorphism of B".into()));
    }
    restrict_automorphism(beta, a).map_err(|_| Error::HypothesisFailed("β(A) ≠ A".into()))
}

fn check_alpha(a: &Arc<TableGroup>, alpha: &GroupHom) -> Result<()> {
    if !Arc::ptr_eq(alpha.domain(), a) || !alpha.is_automorphism() || !alpha.is_surjective() {
        return Err(Error::HypothesisFailed("α is not an automorphism of A".into()));
    }
    Ok(())
}

pub fn commuting_extension(
    b: &Arc<TableGroup>,
    a: &Arc<TableGroup>,
    alpha: &GroupHom,
    beta: &GroupHom,
    bounds: &Bounds,
) -> Result<CommutingCertificate> {
    let beta_a = check_invariant(b, a, beta)?;
    check_alpha(a, alpha)?;
    if let Some(x) = a.elements().find(|&x| alpha.apply(beta_a.apply(x)) != beta_a.apply(alpha.apply(x))) {
        return Err(Error::HypothesisFailed(format!("α∘β ≠ β∘α at element {x} of A")));
    }
    let bound = bounds.enumeration;
    let (ord_a, ord_b) = (alpha.automorphism_order(), beta.automorphism_order());
    let cf = Arc::new(TableGroup::cyclic(ord_a));
    let cg = Arc::new(TableGroup::cyclic(ord_b));
    let h = Arc::new(TableGroup::direct_product(&cf, &cg, bound)?);
    let alpha_inv = alpha.power(-1).map().to_vec();
    let beta_a_inv = beta_a.power(-1).map().to_vec();
    // conjugation by (1, f) in A ⋊ H is α, so f acts by α⁻¹
    // cyclic groups of order 1 have no generators
    let on = |grp: &TableGroup, act: &Vec<Elem>| vec![act.clone(); grp.gens().len()];
    let h_actions = [on(&cf, &alpha_inv), on(&cg, &beta_a_inv)].concat();
    let g_group = Arc::new(TableGroup::semidirect_product(a, &h, &h_actions, bound)?);
    let beta_inv = beta.power(-1).map().to_vec();
    let b_prime = Arc::new(TableGroup::semidirect_product(b, &cg, &on(&cg, &beta_inv), bound)?);
    let x = Arc::new(TableGroup::semidirect_product(a, &cg, &on(&cg, &beta_a_inv), bound)?);
    let on_g = x
        .gens()
        .iter()
        .map(|&s| {
            let (u, j) = x.pair(s);
            g_group.from_pair(u, h.from_pair(0, j))
        })
        .collect();
    let a_in_b = a.parent().unwrap().1;
    let on_b = x
        .gens()
        .iter()
        .map(|&s| {
            let (u, j) = x.pair(s);
            b_prime.from_pair(a_in_b[u as usize], j)
        })
        .collect();
    let psi = GroupHom::new(&x, &g_group, on_g)?;
    let iota = GroupHom::new(&x, &b_prime, on_b)?;
    let amalgam = amalgamate(&psi, &iota, bounds)?;

    let f_elem = amalgam.r(g_group.from_pair(0, h.from_pair(1 % ord_a as Elem, 0)));
    let g_elem = amalgam.r(g_group.from_pair(0, h.from_pair(0, 1 % ord_b as Elem)));
    if g_elem != amalgam.s(b_prime.from_pair(0, 1 % ord_b as Elem)) {
        return Err(Error::CheckFailed("the two images of g differ".into()));
    }
    let cert = CommutingCertificate {
        a: a.clone(),
        b: b.clone(),
        alpha: alpha.clone(),
        beta: beta.clone(),
        h,
        g_group,
        b_prime,
        x,
        amalgam,
        f_elem,
        g_elem,
    };
    verify_commuting(&cert)?;
    Ok(cert)
}

fn verify_commuting(cert: &CommutingCertificate) -> Result<()> {
    let (f, g) = (&cert.f_elem, &cert.g_elem);
    if !f.commutes_with(g) {
        return Err(Error::CheckFailed("fg ≠ gf".into()));
    }
    for x in cert.a.elements() {
        let ex = cert.e(cert.a_in_b(x));
        if ex.conjugate_by(f) != cert.e(cert.a_in_b(cert.alpha.apply(x))) {
            return Err(Error::CheckFailed(format!("e(x)^f ≠ e(α(x)) at element {x}")));
        }
    }
    for y in cert.b.elements() {
        if cert.e(y).conjugate_by(g) != cert.e(cert.beta.apply(y)) {
            return Err(Error::CheckFailed(format!("e(y)^g ≠ e(β(y)) at element {y}")));
        }
    }
    Ok(())
}

/// How `C = Dⁿ` was handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Realization {
    /// enumerated; `γ` checked on every element
    Table,
    /// kept as a permutation group; `γ` checked on generators
    Permutation,
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Realization::Table => "table",
            Realization::Permutation => "permutation",
        })
    }
}

/// `C = Dⁿ` on `n` blocks of `deg D` points, `φ(x) = (x, x^f, …, x^{f^{n-1}})`
/// and `γ(z) = π⁻¹zπ = (z₂, …, zₙ, z₁^g)`.
#[derive(Clone, Debug)]
pub struct RootCertificate {
    pub n: usize,
    pub inner: CommutingCertificate,
    pub c: PermGroup,
    pub pi: Permutation,
    pub realization: Realization,
}

impl RootCertificate {
    pub fn block_degree(&self) -> usize {
        self.inner.degree()
    }

    pub fn degree(&self) -> usize {
        self.n * self.block_degree()
    }

    /// `φ(e(y))` for `y ∈ B`.
    pub fn phi(&self, y: Elem) -> Permutation {
        let mut z = self.inner.e(y);
        let mut parts = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            parts.push(z.clone());
            z = z.conjugate_by(&self.inner.f_elem);
        }
        Permutation::direct_sum(&parts.iter().collect::<Vec<_>>())
    }

    pub fn gamma(&self, z: &Permutation) -> Permutation {
        z.conjugate_by(&self.pi)
    }

    pub fn gamma_pow(&self, z: &Permutation, k: i64) -> Permutation {
        z.conjugate_by(&self.pi.pow(k))
    }

    /// The `i`-th coordinate (block) of an element of `C`.
    pub fn coordinate(&self, z: &Permutation, i: usize) -> Option<Permutation> {
        let m = self.block_degree();
        z.block(i * m, m)
    }
}

/// `π` with `π(j+1, p) = (j, p)` and `π(0, p) = (n-1, g(p))`.
fn shift_twist(n: usize, g: &Permutation) -> Permutation {
    let m = g.degree();
    let mut images = vec![0u32; n * m];
    for j in 0..n {
        for p in 0..m {
            images[j * m + p] = if j == 0 {
                ((n - 1) * m + g.apply(p)) as u32
            } else {
                ((j - 1) * m + p) as u32
            };
        }
    }
    Permutation::from_images(images).expect("block shift is a bijection")
}

pub fn root_extension(
    b: &Arc<TableGroup>,
    a: &Arc<TableGroup>,
    alpha: &GroupHom,
    beta: &GroupHom,
    n: usize,
    bounds: &Bounds,
) -> Result<RootCertificate> {
    if n == 0 {
        return Err(Error::HypothesisFailed("n must be positive".into()));
    }
    let beta_a = check_invariant(b, a, beta)?;
    check_alpha(a, alpha)?;
    let alpha_n = alpha.power(n as i64);
    if let Some(x) = a.elements().find(|&x| alpha_n.apply(x) != beta_a.apply(x)) {
        return Err(Error::HypothesisFailed(format!("αⁿ ≠ β on A at element {x}")));
    }
    let inner = commuting_extension(b, a, alpha, beta, bounds)?;
    let m = inner.degree();
    let degree = n * m;
    let d = inner.c();
    let id = Permutation::identity(m);
    let mut gens = Vec::new();
    for j in 0..n {
        for p in d.generators() {
            let parts: Vec<&Permutation> = (0..n).map(|i| if i == j { p } else { &id }).collect();
            gens.push(Permutation::direct_sum(&parts));
        }
    }
    let c = PermGroup::new(degree, gens)?;
    let pi = shift_twist(n, &inner.g_elem);
    let realization = if d.order().pow(n as u32) <= BigUint::from(bounds.enumeration) {
        Realization::Table
    } else {
        Realization::Permutation
    };
    let cert = RootCertificate {
        n,
        inner,
        c,
        pi,
        realization,
    };
    verify_root(&cert, bounds)?;
    Ok(cert)
}

fn verify_root(cert: &RootCertificate, bounds: &Bounds) -> Result<()> {
    let inner = &cert.inner;
    let d = inner.c();
    // γ(C) ⊆ C, blockwise against D
    let in_c = |z: &Permutation| (0..cert.n).all(|i| cert.coordinate(z, i).is_some_and(|p| d.contains(&p)));
    match cert.realization {
        Realization::Table => {
            let els = TableGroup::from_permutations(cert.degree(), cert.c.generators(), bounds.enumeration)?;
            for x in els.elements() {
                if !in_c(&cert.gamma(&els.as_permutation(x).unwrap())) {
                    return Err(Error::CheckFailed(format!("γ leaves C at element {x}")));
                }
            }
        }
        Realization::Permutation => {
            if !cert.c.generators().iter().all(|z| in_c(&cert.gamma(z))) {
                return Err(Error::CheckFailed("γ leaves C".into()));
            }
        }
    }
    for x in inner.a.elements() {
        let y = inner.a_in_b(x);
        let lhs = cert.gamma(&cert.phi(y));
        if lhs != cert.phi(inner.a_in_b(inner.alpha.apply(x))) {
            return Err(Error::CheckFailed(format!("γ∘φ ≠ φ∘α at element {x}")));
        }
    }
    for y in inner.b.elements() {
        let lhs = cert.gamma_pow(&cert.phi(y), cert.n as i64);
        if lhs != cert.phi(inner.beta.apply(y)) {
            return Err(Error::CheckFailed(format!("γⁿ∘φ ≠ φ∘β at element {y}")));
        }
    }
    Ok(())
}
