//! Turning construction results into certificates.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigUint;

use crate::amalgam::{AmalgamCertificate, EquivariantAmalgamCertificate};
use crate::chain::StabChain;
use crate::hom::GroupHom;
use crate::hrushovski::Extension;
use crate::perm::Permutation;
use crate::roots::{CommutingCertificate, RootCertificate};
use crate::table::{Elem, TableGroup};
use crate::tower::{ConjugacyReport, HallTower, PairOutcome, PowerTower};
use crate::Bounds;

use super::model::{Certificate, GroupData, Kind, MapData, Payload, PermData, FORMAT_VERSION};
use super::templates;

/// Element lists are written only while `order · degree` stays below this.
const LIST_POINT_BUDGET: usize = 1 << 22;

pub type Inputs = BTreeMap<String, String>;

struct Builder {
    payload: Payload,
    summary: BTreeMap<String, String>,
    list_bound: usize,
}

fn cycles(p: &Permutation) -> String {
    p.to_string()
}

/// Breadth-first spanning tree of `⟨gens⟩`, in the encoding the verifier reads.
fn element_tree(degree: usize, gens: &[Permutation]) -> Vec<[usize; 2]> {
    let mut elements = vec![Permutation::identity(degree)];
    let mut seen: HashMap<Permutation, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut tree = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        for (j, g) in gens.iter().enumerate() {
            let x = &elements[i] * g;
            if !seen.contains_key(&x) {
                seen.insert(x.clone(), elements.len());
                elements.push(x);
                tree.push([i, j]);
            }
        }
        i += 1;
    }
    tree
}

impl Builder {
    fn new(bounds: &Bounds) -> Self {
        Builder {
            payload: Payload::default(),
            summary: BTreeMap::new(),
            list_bound: bounds.enumeration,
        }
    }

    /// Adds a group; its elements are listed when that is affordable and
    /// `list` allows it.
    fn group(&mut self, name: &str, degree: usize, gens: &[Permutation], list: bool, claim: bool) -> BigUint {
        let order = StabChain::build(degree, gens).order();
        let listable = list
            && order <= BigUint::from(self.list_bound)
            && order.clone() * BigUint::from(degree) <= BigUint::from(LIST_POINT_BUDGET);
        self.payload.groups.insert(
            name.into(),
            GroupData {
                degree,
                generators: gens.iter().map(cycles).collect(),
                elements: listable.then(|| element_tree(degree, gens)),
                order: claim.then(|| order.to_string()),
            },
        );
        order
    }

    /// A table group through its faithful realization.
    fn table(&mut self, name: &str, t: &TableGroup, claim: bool) {
        let (degree, gens) = t.realization_gens();
        self.group(name, degree, &gens, true, claim);
    }

    /// A subgroup given by the parent's realization, so both share a degree.
    fn sub_in_parent(&mut self, name: &str, sub: &TableGroup, parent: &TableGroup, claim: bool) {
        let gens: Vec<Permutation> = sub.gens().iter().map(|&g| realize_in_parent(sub, parent, g)).collect();
        self.group(name, parent.realization_degree(), &gens, true, claim);
    }

    fn perm(&mut self, name: &str, p: &Permutation) {
        self.payload.perms.insert(
            name.into(),
            PermData {
                degree: p.degree(),
                cycles: cycles(p),
            },
        );
    }

    fn map(&mut self, name: &str, domain: &str, codomain: &str, images: impl IntoIterator<Item = Permutation>) {
        self.payload.maps.insert(
            name.into(),
            MapData {
                domain: domain.into(),
                codomain: codomain.into(),
                images: images.into_iter().map(|p| cycles(&p)).collect(),
            },
        );
    }

    /// A homomorphism between table groups, both through their realizations.
    fn hom(&mut self, name: &str, domain: &str, codomain: &str, h: &GroupHom) {
        let cod = h.codomain().clone();
        let images: Vec<Permutation> = h.gen_images().iter().map(|&y| cod.realize(y)).collect();
        self.map(name, domain, codomain, images);
    }

    fn param(&mut self, name: &str, v: usize) {
        self.payload.params.insert(name.into(), v as i64);
    }

    fn finish(self, kind: Kind, inputs: Inputs) -> Certificate {
        let equations = templates::expected(kind, &self.payload).expect("builder payload matches its layout");
        Certificate {
            kind,
            version: FORMAT_VERSION,
            inputs,
            payload: self.payload,
            equations,
            summary: self.summary,
        }
    }
}

fn realize_in_parent(sub: &TableGroup, parent: &TableGroup, x: Elem) -> Permutation {
    let (_, els) = sub.parent().expect("a subgroup");
    parent.realize(els[x as usize])
}

pub fn extension_certificate(ext: &Extension, inputs: Inputs, bounds: &Bounds) -> Certificate {
    let mut b = Builder::new(bounds);
    let a = &ext.group;
    b.table("A", a, false);
    b.group("H", ext.ambient.degree(), ext.ambient.generators(), false, false);
    b.map("rho", "A", "H", ext.rho.gen_images().to_vec());
    b.param("count", ext.psis.len());
    for (i, (psi, h)) in ext.psis.iter().zip(&ext.conjugators).enumerate() {
        let k = format!("K{}", i + 1);
        b.sub_in_parent(&k, psi.domain(), a, false);
        b.hom(&format!("psi{}", i + 1), &k, "A", psi.hom());
        b.perm(&format!("h{}", i + 1), h);
    }
    b.finish(Kind::Extension, inputs)
}

pub fn amalgam_certificate(am: &AmalgamCertificate, inputs: Inputs, bounds: &Bounds) -> Certificate {
    let mut b = Builder::new(bounds);
    b.table("A", am.f.domain(), false);
    b.table("B", am.b(), false);
    b.table("C", am.c(), false);
    b.group("D", am.degree(), am.d.generators(), true, false);
    b.hom("f", "A", "B", &am.f);
    b.hom("g", "A", "C", &am.g);
    b.map("r", "B", "D", am.b().gens().iter().map(|&x| am.r(x)));
    b.map("s", "C", "D", am.c().gens().iter().map(|&x| am.s(x)));
    b.finish(Kind::Amalgam, inputs)
}

pub fn equivariant_certificate(cert: &EquivariantAmalgamCertificate, inputs: Inputs, bounds: &Bounds) -> Certificate {
    let mut b = Builder::new(bounds);
    let (ga, gb, gc) = (cert.a.group(), cert.b.group(), cert.c.group());
    b.table("A", ga, false);
    b.table("B", gb, false);
    b.table("C", gc, false);
    b.group("D", cert.degree(), cert.d.generators(), true, false);
    b.table("W", &cert.w.w, true);
    b.table("L", &cert.l, true);
    b.table("M", &cert.m, true);
    b.table("N", &cert.n, true);
    b.hom("f", "A", "B", cert.f.hom());
    b.hom("g", "A", "C", cert.g.hom());
    b.map("s", "B", "D", gb.gens().iter().map(|&x| cert.s(x)));
    b.map("t", "C", "D", gc.gens().iter().map(|&x| cert.t(x)));
    b.param("n", cert.a.n());
    for i in 0..cert.a.n() {
        b.hom(&format!("alpha{}", i + 1), "A", "A", &cert.a.autos()[i]);
        b.hom(&format!("beta{}", i + 1), "B", "B", &cert.b.autos()[i]);
        b.hom(&format!("gamma{}", i + 1), "C", "C", &cert.c.autos()[i]);
        b.perm(&format!("delta{}", i + 1), &cert.delta_tilde[i]);
    }
    b.finish(Kind::EquivariantAmalgam, inputs)
}

/// The shared part of commuting and root certificates; `out` names the
/// group holding `f` and `g`.
fn commuting_payload(b: &mut Builder, cert: &CommutingCertificate, out: &str, claim_out: bool) {
    let (a, bg) = (&cert.a, &cert.b);
    b.table("B", bg, false);
    b.sub_in_parent("A", a, bg, false);
    b.group(out, cert.degree(), cert.c().generators(), true, claim_out);
    b.map(
        "alpha",
        "A",
        "A",
        a.gens().iter().map(|&x| realize_in_parent(a, bg, cert.alpha.apply(x))),
    );
    b.hom("beta", "B", "B", &cert.beta);
    b.map("e", "B", out, bg.gens().iter().map(|&y| cert.e(y)));
    b.perm("f", &cert.f_elem);
    b.perm("g", &cert.g_elem);
}

pub fn commuting_certificate(cert: &CommutingCertificate, inputs: Inputs, bounds: &Bounds) -> Certificate {
    let mut b = Builder::new(bounds);
    commuting_payload(&mut b, cert, "C", false);
    b.finish(Kind::Commuting, inputs)
}

pub fn root_certificate(root: &RootCertificate, inputs: Inputs, bounds: &Bounds) -> Certificate {
    let mut b = Builder::new(bounds);
    commuting_payload(&mut b, &root.inner, "D", true);
    b.group("C", root.degree(), root.c.generators(), true, false);
    b.map("phi", "B", "C", root.inner.b.gens().iter().map(|&y| root.phi(y)));
    b.perm("pi", &root.pi);
    b.param("n", root.n);
    b.summary.insert("realization".into(), root.realization.to_string());
    b.finish(Kind::Root, inputs)
}

/// `report` adds the conjugating elements found for isomorphic subgroup
/// pairs of its stage.
pub fn hall_certificate(
    tower: &HallTower,
    report: Option<&ConjugacyReport>,
    inputs: Inputs,
    bounds: &Bounds,
) -> Certificate {
    let mut b = Builder::new(bounds);
    for (k, stage) in tower.stages.iter().enumerate() {
        b.group(&format!("H{k}"), stage.degree(), stage.generators(), true, k == 0);
    }
    for (k, t) in tower.tables.iter().enumerate() {
        let images = tower.stages[k].generators().iter().map(|p| {
            let x = t.index_of_permutation(p).expect("generator lies in its stage");
            t.regular_image(x)
        });
        b.map(&format!("rho{k}"), &format!("H{k}"), &format!("H{}", k + 1), images);
    }
    b.param("depth", tower.depth());
    let mut count = 0;
    if let Some(r) = report {
        b.param("stage", r.stage);
        let hk = format!("H{}", r.stage);
        let t: &Arc<TableGroup> = &tower.tables[r.stage];
        for pair in &r.pairs {
            let PairOutcome::Conjugate { iso, conjugator } = &pair.outcome else {
                continue;
            };
            count += 1;
            let (l, rr) = (iso.domain(), iso.codomain());
            let k = format!("K{count}");
            let gens: Vec<Permutation> = l.gens().iter().map(|&g| realize_in_parent(l, t, g)).collect();
            b.group(&k, t.realization_degree(), &gens, true, false);
            let images: Vec<Permutation> = l
                .gens()
                .iter()
                .map(|&g| realize_in_parent(rr, t, iso.apply(g)))
                .collect();
            b.map(&format!("psi{count}"), &k, &hk, images);
            b.perm(&format!("c{count}"), conjugator);
        }
    }
    b.param("pairs", count);
    b.finish(Kind::HallTower, inputs)
}

pub fn power_certificate(tower: &PowerTower, inputs: Inputs, bounds: &Bounds) -> Certificate {
    let mut b = Builder::new(bounds);
    b.param("n", tower.n);
    b.param("depth", tower.stages.len() - 1);
    for (i, stage) in tower.stages.iter().enumerate() {
        let a = format!("A{i}");
        b.group(&a, stage.a.degree(), stage.a.generators(), true, true);
        b.perm(&format!("G{i}"), &stage.g);
        b.perm(&format!("F{i}"), &stage.f);
        let Some(step) = &stage.step else {
            continue;
        };
        let prev = &tower.stages[i - 1];
        let bi = format!("B{i}");
        let bgens: Vec<Permutation> = step.b.gens().iter().map(|&y| step.b.realize(y)).collect();
        b.group(&bi, step.b.realization_degree(), &bgens, true, true);
        b.perm(&format!("h{i}"), &step.h);
        b.map(
            &format!("iota{i}"),
            &format!("A{}", i - 1),
            &bi,
            prev.a.generators().iter().map(|x| step.iota(x)),
        );
        b.map(&format!("E{i}"), &bi, &a, step.b.gens().iter().map(|&y| step.root.phi(y)));
    }
    b.finish(Kind::PowerTower, inputs)
}
