//! Amalgamation of finite groups, plain and with automorphism tuples.
//!
//! The plain construction works inside `P = B × C`: the partial isomorphism
//! `(f(a), 1) ↦ (1, g(a))` is realized by a conjugator `h` of the regular
//! representation of `P`, and `r(b) = ρ(b,1)^h`, `s(c) = ρ(1,c)`.

use std::sync::Arc;

use crate::error::{Error, Result, StageExt};
use crate::hom::{generated_automorphism_group, AutomorphismGroup, GroupHom};
use crate::hrushovski::{align_conjugator, PartialIso};
use crate::perm::Permutation;
use crate::permgroup::{hom_is_injective, PermGroup};
use crate::system::{EquivariantEmbedding, EquivariantSystem};
use crate::table::{Elem, TableGroup};
use crate::Bounds;

/// `r: B → Sym(|B||C|)`, `s: C → Sym(|B||C|)` with `r∘f = s∘g`.
#[derive(Clone, Debug)]
pub struct AmalgamCertificate {
    pub f: GroupHom,
    pub g: GroupHom,
    /// `B × C`; point `i + 1` of the ambient is element `i`.
    pub product: Arc<TableGroup>,
    pub conjugator: Permutation,
    /// `⟨r(B), s(C)⟩`, generated by the images of the generators of `B` then `C`.
    pub d: PermGroup,
}

impl AmalgamCertificate {
    pub fn degree(&self) -> usize {
        self.product.order()
    }

    pub fn b(&self) -> &Arc<TableGroup> {
        self.f.codomain()
    }

    pub fn c(&self) -> &Arc<TableGroup> {
        self.g.codomain()
    }

    pub fn r(&self, b: Elem) -> Permutation {
        self.product
            .regular_image(self.product.from_pair(b, 0))
            .conjugate_by(&self.conjugator)
    }

    pub fn s(&self, c: Elem) -> Permutation {
        self.product.regular_image(self.product.from_pair(0, c))
    }

    pub fn r_gens(&self) -> &[Permutation] {
        &self.d.generators()[..self.b().gens().len()]
    }

    pub fn s_gens(&self) -> &[Permutation] {
        &self.d.generators()[self.b().gens().len()..]
    }
}

fn check_embedding(h: &GroupHom) -> Result<()> {
    if h.is_injective() {
        Ok(())
    } else {
        Err(Error::NotInjective)
    }
}

/// Both maps must share their domain and be injective; `|B|·|C|` must not
/// exceed the degree cap.
pub fn amalgamate(f: &GroupHom, g: &GroupHom, bounds: &Bounds) -> Result<AmalgamCertificate> {
    if !Arc::ptr_eq(f.domain(), g.domain()) {
        return Err(Error::CodomainMismatch("embeddings have different domains".into()));
    }
    check_embedding(f)?;
    check_embedding(g)?;
    let (a, b, c) = (f.domain(), f.codomain(), g.codomain());
    let degree = b.order().saturating_mul(c.order());
    if degree > bounds.degree_cap {
        return Err(Error::DegreeCapExceeded {
            degree,
            cap: bounds.degree_cap,
        });
    }
    let product = Arc::new(TableGroup::direct_product(b, c, degree)?);
    let dom: Vec<Elem> = a.gens().iter().map(|&x| product.from_pair(f.apply(x), 0)).collect();
    let cod: Vec<Elem> = a.gens().iter().map(|&x| product.from_pair(0, g.apply(x))).collect();
    let psi = PartialIso::new(&product, &dom, &cod, degree)?;
    let h = align_conjugator(&product, &psi)?;
    for (k, pk) in psi.pairs() {
        if product.regular_image(k).conjugate_by(&h) != product.regular_image(pk) {
            return Err(Error::CheckFailed(format!("conjugator fails at element {k}")));
        }
    }

    let mut cert = AmalgamCertificate {
        f: f.clone(),
        g: g.clone(),
        product: product.clone(),
        conjugator: h,
        d: PermGroup::trivial(degree),
    };
    let gens: Vec<Permutation> = b
        .gens()
        .iter()
        .map(|&x| cert.r(x))
        .chain(c.gens().iter().map(|&y| cert.s(y)))
        .collect();
    cert.d = PermGroup::new(degree, gens)?;
    verify_amalgam(&cert)?;
    Ok(cert)
}

fn verify_amalgam(cert: &AmalgamCertificate) -> Result<()> {
    let a = cert.f.domain();
    if let Some(x) = a.elements().find(|&x| cert.r(cert.f.apply(x)) != cert.s(cert.g.apply(x))) {
        return Err(Error::CheckFailed(format!("r∘f ≠ s∘g at element {x}")));
    }
    for (grp, images, name) in [(cert.b(), cert.r_gens(), "r"), (cert.c(), cert.s_gens(), "s")] {
        let (deg, real) = grp.realization_gens();
        let dom = PermGroup::new(deg, real)?;
        if !hom_is_injective(&dom, images)? {
            return Err(Error::CheckFailed(format!("{name} is not injective")));
        }
    }
    Ok(())
}

/// `φ(y) = f⁻¹∘(y↾f(A))∘f` for automorphisms `y` of `B` leaving `f(A)` invariant.
fn restrict_through(y: &[Elem], f: &GroupHom) -> Result<Vec<Elem>> {
    let b = f.codomain();
    let mut pre = vec![None; b.order()];
    for x in f.domain().elements() {
        pre[f.apply(x) as usize] = Some(x);
    }
    f.domain()
        .elements()
        .map(|x| pre[y[f.apply(x) as usize] as usize].ok_or(Error::SubgroupNotInvariant))
        .collect()
}

/// `φ: Y → X` into a given group `X` of automorphisms of `A`.
pub fn restriction_into(y: &AutomorphismGroup, f: &GroupHom, x: &AutomorphismGroup) -> Result<GroupHom> {
    if !Arc::ptr_eq(y.base(), f.codomain()) || !Arc::ptr_eq(x.base(), f.domain()) {
        return Err(Error::CodomainMismatch("automorphism groups of other groups".into()));
    }
    check_embedding(f)?;
    let mut images = Vec::new();
    for &w in y.group().gens() {
        let m = restrict_through(y.map_of(w), f)?;
        let auto = GroupHom::from_map(f.domain(), f.domain(), m)?;
        let idx = x
            .index_of(&auto)
            .ok_or_else(|| Error::NotAMember("restricted automorphism outside X".into()))?;
        images.push(idx);
    }
    let phi = GroupHom::new(y.group(), x.group(), images)?;
    // f∘φ(y) = y∘f
    for w in y.group().elements() {
        let (ym, xm) = (y.map_of(w), x.map_of(phi.apply(w)));
        if f.domain().elements().any(|a| f.apply(xm[a as usize]) != ym[f.apply(a) as usize]) {
            return Err(Error::CheckFailed("f∘φ(y) ≠ y∘f".into()));
        }
    }
    Ok(phi)
}

/// `φ: Y → X` with `X` generated by the restrictions of the generators of `Y`.
pub fn restriction_epimorphism(
    y: &AutomorphismGroup,
    f: &GroupHom,
    bound: usize,
) -> Result<(AutomorphismGroup, GroupHom)> {
    if !Arc::ptr_eq(y.base(), f.codomain()) {
        return Err(Error::CodomainMismatch("Y does not act on the codomain of f".into()));
    }
    let restricted = y
        .group()
        .gens()
        .iter()
        .map(|&w| GroupHom::from_map(f.domain(), f.domain(), restrict_through(y.map_of(w), f)?))
        .collect::<Result<Vec<_>>>()?;
    let x = generated_automorphism_group(f.domain(), &restricted, bound)?;
    let phi = restriction_into(y, f, &x)?;
    Ok((x, phi))
}

/// `W = {(y, z) : φ(y) = ψ(z)} ≤ Y × Z` with its projections.
#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub w: Arc<TableGroup>,
    pub proj_y: GroupHom,
    pub proj_z: GroupHom,
}

impl FiberProduct {
    /// The element `(y, z)` of `W`, if it belongs to it.
    pub fn element(&self, y: Elem, z: Elem) -> Option<Elem> {
        let (yz, _) = self.w.parent()?;
        self.w.from_parent(yz.from_pair(y, z))
    }
}

pub fn fiber_product(phi: &GroupHom, psi: &GroupHom, bound: usize) -> Result<FiberProduct> {
    if !Arc::ptr_eq(phi.codomain(), psi.codomain()) {
        return Err(Error::CodomainMismatch("fiber product over different groups".into()));
    }
    if !phi.is_surjective() || !psi.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let (y, z) = (phi.domain(), psi.domain());
    let yz = Arc::new(TableGroup::direct_product(y, z, usize::MAX)?);
    let members: Vec<Elem> = y
        .elements()
        .flat_map(|a| z.elements().map(move |b| (a, b)))
        .filter(|&(a, b)| phi.apply(a) == psi.apply(b))
        .map(|(a, b)| yz.from_pair(a, b))
        .collect();
    if members.len() > bound {
        return Err(Error::OrderTooLarge {
            order: members.len().to_string(),
            bound,
        });
    }
    // greedy generating set in ascending order
    let mut gens = Vec::new();
    let mut cur = TableGroup::subgroup_generated(&yz, &[], bound)?;
    for &m in &members {
        if cur.from_parent(m).is_none() {
            gens.push(m);
            cur = TableGroup::subgroup_generated(&yz, &gens, bound)?;
        }
    }
    let w = Arc::new(cur);
    if w.order() != members.len() {
        return Err(Error::CheckFailed("fiber product is not closed".into()));
    }
    let (_, els) = w.parent().unwrap();
    let proj_y = GroupHom::new(&w, y, w.gens().iter().map(|&s| yz.pair(els[s as usize]).0).collect())?;
    let proj_z = GroupHom::new(&w, z, w.gens().iter().map(|&s| yz.pair(els[s as usize]).1).collect())?;
    if !proj_y.is_surjective() || !proj_z.is_surjective() {
        return Err(Error::CheckFailed("fiber product projection is not onto".into()));
    }
    if w.order() * phi.codomain().order() != y.order() * z.order() {
        return Err(Error::CheckFailed("|W|·|X| ≠ |Y|·|Z|".into()));
    }
    Ok(FiberProduct { w, proj_y, proj_z })
}

/// Every intermediate of the equivariant amalgamation and its outputs
/// `s: B → D`, `t: C → D`, `δᵢ(d) = δ̃ᵢ·d·δ̃ᵢ⁻¹`.
#[derive(Clone, Debug)]
pub struct EquivariantAmalgamCertificate {
    pub a: EquivariantSystem,
    pub b: EquivariantSystem,
    pub c: EquivariantSystem,
    pub f: EquivariantEmbedding,
    pub g: EquivariantEmbedding,
    pub x: AutomorphismGroup,
    pub y: AutomorphismGroup,
    pub z: AutomorphismGroup,
    pub phi: GroupHom,
    pub psi: GroupHom,
    pub w: FiberProduct,
    /// `(βᵢ, γᵢ)` as elements of `W`.
    pub w_autos: Vec<Elem>,
    pub l: Arc<TableGroup>,
    pub m: Arc<TableGroup>,
    pub n: Arc<TableGroup>,
    pub inner: AmalgamCertificate,
    pub delta_tilde: Vec<Permutation>,
    /// `⟨s(B), t(C)⟩`, generated by the images of the generators of `B` then `C`.
    pub d: PermGroup,
}

impl EquivariantAmalgamCertificate {
    pub fn degree(&self) -> usize {
        self.inner.degree()
    }

    /// `s(b) = s̃(b, 1)`.
    pub fn s(&self, b: Elem) -> Permutation {
        self.inner.r(self.m.from_pair(b, 0))
    }

    /// `t(c) = t̃(c, 1)`.
    pub fn t(&self, c: Elem) -> Permutation {
        self.inner.s(self.n.from_pair(c, 0))
    }

    /// `δᵢ(d) = δ̃ᵢ·d·δ̃ᵢ⁻¹`.
    pub fn delta(&self, i: usize, d: &Permutation) -> Permutation {
        d.conjugate_by(&self.delta_tilde[i].inverse())
    }
}

fn action_maps(auto: &AutomorphismGroup, top: &[Elem]) -> Vec<Vec<Elem>> {
    top.iter().map(|&w| auto.map_of(w).to_vec()).collect()
}

/// Pairwise map `(a, w) ↦ (f(a), w)` between semidirect products over `W`.
fn lift(f: &GroupHom, from: &Arc<TableGroup>, to: &Arc<TableGroup>) -> Result<GroupHom> {
    let images = from
        .gens()
        .iter()
        .map(|&s| {
            let (a, w) = from.pair(s);
            to.from_pair(f.apply(a), w)
        })
        .collect();
    GroupHom::new(from, to, images)
}

pub fn equivariant_amalgamate(
    f: &EquivariantEmbedding,
    g: &EquivariantEmbedding,
    bounds: &Bounds,
) -> Result<EquivariantAmalgamCertificate> {
    let (a, b, c) = (f.source(), f.target(), g.target());
    if !Arc::ptr_eq(a.group(), g.source().group()) {
        return Err(Error::CodomainMismatch("embeddings have different sources".into()));
    }
    if a.n() != c.n() {
        return Err(Error::MismatchedSystems {
            left: a.n(),
            right: c.n(),
        });
    }
    let n = a.n();
    let bound = bounds.enumeration;

    let (x, y, z) = (|| {
        Ok((
            generated_automorphism_group(a.group(), a.autos(), bound)?,
            generated_automorphism_group(b.group(), b.autos(), bound)?,
            generated_automorphism_group(c.group(), c.autos(), bound)?,
        ))
    })()
    .stage("automorphism groups")?;

    let (phi, psi) = (|| {
        let phi = restriction_into(&y, f.hom(), &x)?;
        let psi = restriction_into(&z, g.hom(), &x)?;
        for i in 0..n {
            let (ai, bi, ci) = (
                x.group().gens()[i],
                y.group().gens()[i],
                z.group().gens()[i],
            );
            if phi.apply(bi) != ai || psi.apply(ci) != ai {
                return Err(Error::CheckFailed(format!("(β{0}, γ{0}) is not in the fiber product", i + 1)));
            }
        }
        Ok((phi, psi))
    })()
    .stage("restriction")?;

    let w = fiber_product(&phi, &psi, bound).stage("fiber product")?;
    let w_autos = (0..n)
        .map(|i| {
            w.element(y.group().gens()[i], z.group().gens()[i])
                .ok_or_else(|| Error::NotAMember("(βᵢ, γᵢ) outside W".into()))
        })
        .collect::<Result<Vec<_>>>()
        .stage("fiber product")?;

    let (l, m, nn) = (|| {
        let top = w.w.gens();
        let on_a: Vec<Elem> = top.iter().map(|&s| phi.apply(w.proj_y.apply(s))).collect();
        let on_b: Vec<Elem> = top.iter().map(|&s| w.proj_y.apply(s)).collect();
        let on_c: Vec<Elem> = top.iter().map(|&s| w.proj_z.apply(s)).collect();
        Ok((
            Arc::new(TableGroup::semidirect_product(a.group(), &w.w, &action_maps(&x, &on_a), bound)?),
            Arc::new(TableGroup::semidirect_product(b.group(), &w.w, &action_maps(&y, &on_b), bound)?),
            Arc::new(TableGroup::semidirect_product(c.group(), &w.w, &action_maps(&z, &on_c), bound)?),
        ))
    })()
    .stage("semidirect products")?;

    let (f_tilde, g_tilde) = (|| Ok((lift(f.hom(), &l, &m)?, lift(g.hom(), &l, &nn)?)))().stage("lifted embeddings")?;
    let inner = amalgamate(&f_tilde, &g_tilde, bounds).stage("amalgamation")?;

    let delta_tilde: Vec<Permutation> = w_autos.iter().map(|&wi| inner.r(m.from_pair(0, wi))).collect();
    let mut cert = EquivariantAmalgamCertificate {
        a: a.clone(),
        b: b.clone(),
        c: c.clone(),
        f: f.clone(),
        g: g.clone(),
        x,
        y,
        z,
        phi,
        psi,
        w,
        w_autos,
        l,
        m,
        n: nn,
        inner,
        delta_tilde,
        d: PermGroup::trivial(1),
    };
    let gens: Vec<Permutation> = b
        .group()
        .gens()
        .iter()
        .map(|&v| cert.s(v))
        .chain(c.group().gens().iter().map(|&v| cert.t(v)))
        .collect();
    cert.d = PermGroup::new(cert.degree(), gens).stage("verification")?;
    verify_equivariant(&cert).stage("verification")?;
    Ok(cert)
}

fn verify_equivariant(cert: &EquivariantAmalgamCertificate) -> Result<()> {
    let (a, b, c) = (cert.a.group(), cert.b.group(), cert.c.group());
    if let Some(x) = a.elements().find(|&x| cert.s(cert.f.apply(x)) != cert.t(cert.g.apply(x))) {
        return Err(Error::CheckFailed(format!("s∘f ≠ t∘g at element {x}")));
    }
    for i in 0..cert.delta_tilde.len() {
        let (beta, gamma) = (&cert.b.autos()[i], &cert.c.autos()[i]);
        if let Some(y) = b.elements().find(|&y| cert.delta(i, &cert.s(y)) != cert.s(beta.apply(y))) {
            return Err(Error::CheckFailed(format!("δ{}∘s ≠ s∘β at element {y}", i + 1)));
        }
        if let Some(y) = c.elements().find(|&y| cert.delta(i, &cert.t(y)) != cert.t(gamma.apply(y))) {
            return Err(Error::CheckFailed(format!("δ{}∘t ≠ t∘γ at element {y}", i + 1)));
        }
        // conjugation is injective, so mapping the generators into the finite D
        // makes δᵢ an automorphism of D
        if cert.d.generators().iter().any(|p| !cert.d.contains(&cert.delta(i, p))) {
            return Err(Error::CheckFailed(format!("δ{} does not preserve D", i + 1)));
        }
    }
    Ok(())
}

/// `𝒜 × ℬ` with componentwise automorphisms and the two coordinate embeddings.
pub fn equivariant_joint_embed(
    a: &EquivariantSystem,
    b: &EquivariantSystem,
    bound: usize,
) -> Result<(EquivariantSystem, EquivariantEmbedding, EquivariantEmbedding)> {
    if a.n() != b.n() {
        return Err(Error::MismatchedSystems {
            left: a.n(),
            right: b.n(),
        });
    }
    let p = Arc::new(TableGroup::direct_product(a.group(), b.group(), bound)?);
    let autos = a
        .autos()
        .iter()
        .zip(b.autos())
        .map(|(al, be)| {
            let map = p
                .elements()
                .map(|x| {
                    let (u, v) = p.pair(x);
                    p.from_pair(al.apply(u), be.apply(v))
                })
                .collect();
            GroupHom::from_map(&p, &p, map)
        })
        .collect::<Result<Vec<_>>>()?;
    let joint = EquivariantSystem::new(&p, autos)?;
    let ia = GroupHom::new(a.group(), &p, a.group().gens().iter().map(|&s| p.from_pair(s, 0)).collect())?;
    let ib = GroupHom::new(b.group(), &p, b.group().gens().iter().map(|&s| p.from_pair(0, s)).collect())?;
    let ea = EquivariantEmbedding::new(ia, a, &joint)?;
    let eb = EquivariantEmbedding::new(ib, b, &joint)?;
    Ok((joint, ea, eb))
}
