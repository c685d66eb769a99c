//! Finite stages of two towers: iterated symmetric groups on the previous
//! stage's elements, and a tower of groups carrying an automorphism together
//! with an `n`-th root of it.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::catalog::{catalog_names, catalog, NamedGroup};
use crate::error::{Error, Result, StageExt};
use crate::hom::GroupHom;
use crate::hrushovski::{align_conjugator, PartialIso};
use crate::iso::{all_subgroups, find_isomorphism, SEARCH_LIMIT};
use crate::perm::Permutation;
use crate::permgroup::{hom_is_injective, PermGroup};
use crate::roots::{root_extension, RootCertificate};
use crate::system::EquivariantSystem;
use crate::table::{Elem, TableGroup};
use crate::Bounds;

/// Deepest Hall tower: one more stage would have degree `720!`.
pub const MAX_HALL_DEPTH: usize = 3;

/// `H₀ ≤ H₁ ≤ …` with `H_{k+1} = Sym(|H_k|)` and regular embeddings.
#[derive(Clone, Debug)]
pub struct HallTower {
    pub seed: String,
    pub stages: Vec<PermGroup>,
    /// Enumeration of `H_k` for every stage that has a successor; element `i`
    /// is point `i + 1` of `H_{k+1}`.
    pub tables: Vec<Arc<TableGroup>>,
    /// `ρ_k` on the generators of `H_k`.
    pub embeddings: Vec<Vec<Permutation>>,
}

impl HallTower {
    pub fn depth(&self) -> usize {
        self.embeddings.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.stages.iter().map(PermGroup::degree).collect()
    }

    pub fn orders(&self) -> Vec<BigUint> {
        self.stages.iter().map(PermGroup::order).collect()
    }
}

pub fn hall_tower(depth: usize, seed: &NamedGroup, bounds: &Bounds) -> Result<HallTower> {
    if depth > MAX_HALL_DEPTH {
        return Err(Error::DepthTooLarge {
            depth,
            max: MAX_HALL_DEPTH,
        });
    }
    let mut stages = vec![seed.perm_group()];
    let mut tables = Vec::new();
    let mut embeddings = Vec::new();
    for k in 0..depth {
        let label = format!("hall stage {}", k + 1);
        let step = || -> Result<(Arc<TableGroup>, Vec<Permutation>, PermGroup)> {
            let h = &stages[k];
            let t = Arc::new(TableGroup::from_perm_group(h, bounds.enumeration)?);
            if t.order() > bounds.degree_cap {
                return Err(Error::DegreeCapExceeded {
                    degree: t.order(),
                    cap: bounds.degree_cap,
                });
            }
            let images: Vec<Permutation> = t.gens().iter().map(|&s| t.regular_image(s)).collect();
            if !hom_is_injective(h, &images)? {
                return Err(Error::NotInjective);
            }
            let next = PermGroup::symmetric(t.order());
            if images.iter().any(|p| !next.contains(p)) {
                return Err(Error::NotAMember("regular image outside the next stage".into()));
            }
            Ok((t, images, next))
        };
        let (t, images, next) = step().stage(&label)?;
        tables.push(t);
        embeddings.push(images);
        stages.push(next);
    }
    Ok(HallTower {
        seed: seed.name.clone(),
        stages,
        tables,
        embeddings,
    })
}

#[derive(Clone, Debug)]
pub enum PairOutcome {
    /// `ρ(k)^h = ρ(ψ(k))` for the isomorphism found
    Conjugate { iso: GroupHom, conjugator: Permutation },
    NotIsomorphic,
}

#[derive(Clone, Debug)]
pub struct PairReport {
    /// generators of the two subgroups, as elements of `H_k`
    pub left: Vec<Permutation>,
    pub right: Vec<Permutation>,
    pub order_left: usize,
    pub order_right: usize,
    pub outcome: PairOutcome,
}

#[derive(Clone, Debug)]
pub struct ConjugacyReport {
    pub stage: usize,
    pub pairs: Vec<PairReport>,
}

impl ConjugacyReport {
    pub fn isomorphic_pairs(&self) -> usize {
        self.pairs
            .iter()
            .filter(|p| matches!(p.outcome, PairOutcome::Conjugate { .. }))
            .count()
    }
}

fn sub_from_perms(t: &Arc<TableGroup>, gens: &[Permutation]) -> Result<Arc<TableGroup>> {
    let idx = gens
        .iter()
        .map(|p| {
            t.index_of_permutation(p)
                .ok_or_else(|| Error::NotAMember(format!("{p} is not in the stage")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(TableGroup::subgroup_generated(t, &idx, t.order())?))
}

/// Isomorphic subgroups of `H_k` become conjugate in `H_{k+1}`. Without
/// explicit pairs every pair of subgroups (`K ≤ K′` in enumeration order,
/// including `K = K′`) is checked, which needs `|H_k| ≤ 64`.
pub fn stage_conjugacy_check(
    tower: &HallTower,
    k: usize,
    pairs: Option<&[(Vec<Permutation>, Vec<Permutation>)]>,
) -> Result<ConjugacyReport> {
    let t = tower.tables.get(k).ok_or(Error::DepthTooLarge {
        depth: k + 1,
        max: tower.depth(),
    })?;
    let subs: Vec<(Arc<TableGroup>, Arc<TableGroup>)> = match pairs {
        Some(ps) => ps
            .iter()
            .map(|(l, r)| Ok((sub_from_perms(t, l)?, sub_from_perms(t, r)?)))
            .collect::<Result<_>>()?,
        None => {
            if t.order() > SEARCH_LIMIT {
                return Err(Error::SizeBoundExceeded {
                    what: "exhaustive subgroup pairs",
                    order: t.order(),
                    bound: SEARCH_LIMIT,
                });
            }
            let all = all_subgroups(t)?;
            let mut v = Vec::new();
            for i in 0..all.len() {
                for j in i..all.len() {
                    v.push((all[i].clone(), all[j].clone()));
                }
            }
            v
        }
    };
    let ambient = &tower.stages[k + 1];
    let perms_of = |s: &Arc<TableGroup>| -> Vec<Permutation> {
        let els = s.parent().unwrap().1;
        s.gens()
            .iter()
            .map(|&g| t.as_permutation(els[g as usize]).unwrap())
            .collect()
    };
    let mut out = Vec::new();
    for (l, r) in subs {
        let outcome = match find_isomorphism(&l, &r)? {
            None => PairOutcome::NotIsomorphic,
            Some(iso) => {
                let psi = PartialIso::from_hom(iso.then(&GroupHom::inclusion(&r)?)?)?;
                let h = align_conjugator(t, &psi)?;
                if !ambient.contains(&h) {
                    return Err(Error::CheckFailed("conjugator outside the next stage".into()));
                }
                for (x, y) in psi.pairs() {
                    if t.regular_image(x).conjugate_by(&h) != t.regular_image(y) {
                        return Err(Error::CheckFailed(format!("conjugator fails at element {x}")));
                    }
                }
                PairOutcome::Conjugate { iso, conjugator: h }
            }
        };
        out.push(PairReport {
            left: perms_of(&l),
            right: perms_of(&r),
            order_left: l.order(),
            order_right: r.order(),
            outcome,
        });
    }
    Ok(ConjugacyReport { stage: k, pairs: out })
}

#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub group: String,
    pub order: usize,
    pub stage: usize,
    pub stage_degree: usize,
    /// images of the generators of `G`, regular and padded to the stage degree
    pub images: Vec<Permutation>,
}

/// The regular embedding `G → Sym(|G|) ≤ H_k`.
pub fn stage_embedding_check(tower: &HallTower, k: usize, g: &NamedGroup, bounds: &Bounds) -> Result<EmbeddingReport> {
    let stage = tower.stages.get(k).ok_or(Error::DepthTooLarge {
        depth: k,
        max: tower.depth(),
    })?;
    let t = g.table(bounds.enumeration)?;
    if t.order() > stage.degree() {
        return Err(Error::SizeBoundExceeded {
            what: "embedding into the stage",
            order: t.order(),
            bound: stage.degree(),
        });
    }
    let images: Vec<Permutation> = t
        .gens()
        .iter()
        .map(|&s| t.regular_image(s).extend_to(stage.degree()))
        .collect();
    if !hom_is_injective(&g.perm_group(), &images)? {
        return Err(Error::NotInjective);
    }
    if images.iter().any(|p| !stage.contains(p)) {
        return Err(Error::NotAMember("embedded generator outside the stage".into()));
    }
    Ok(EmbeddingReport {
        group: g.name.clone(),
        order: t.order(),
        stage: k,
        stage_degree: stage.degree(),
        images,
    })
}

/// How stage `i + 1` of the power tower arose from stage `i`.
#[derive(Clone, Debug)]
pub struct PowerStep {
    /// catalog group joined as a new direct factor
    pub joined: NamedGroup,
    /// `B = A_i × Q`, enumerated, on `deg A_i + deg Q` points
    pub b: Arc<TableGroup>,
    /// `h = g_i ⊕ id`; conjugation by it extends `g_i`
    pub h: Permutation,
    pub root: RootCertificate,
}

#[derive(Clone, Debug)]
pub struct PowerTowerStage {
    pub a: PermGroup,
    /// acts on `A` by conjugation, `x ↦ g⁻¹xg`
    pub g: Permutation,
    pub f: Permutation,
    pub step: Option<PowerStep>,
}

impl PowerStep {
    /// `ι: A_i → B`.
    pub fn iota(&self, x: &Permutation) -> Permutation {
        let q = Permutation::identity(self.joined.degree);
        Permutation::direct_sum(&[x, &q])
    }

    /// `E: B → A_{i+1}` on a permutation of `B`.
    pub fn embed(&self, y: &Permutation) -> Result<Permutation> {
        let idx = self
            .b
            .index_of_permutation(y)
            .ok_or_else(|| Error::NotAMember(format!("{y} is not in B")))?;
        Ok(self.root.phi(idx))
    }
}

#[derive(Clone, Debug)]
pub struct PowerTower {
    pub n: usize,
    pub stages: Vec<PowerTowerStage>,
}

/// The seed in its regular representation: `ρ(x)^σ = ρ(g₀(x))` for the
/// point map `σ` of `g₀`.
fn seed_stage(seed: &EquivariantSystem, n: usize) -> Result<PowerTowerStage> {
    let [g0] = seed.autos() else {
        return Err(Error::HypothesisFailed("seed needs exactly one automorphism".into()));
    };
    let grp = seed.group();
    let a = PermGroup::new(grp.order(), grp.gens().iter().map(|&s| grp.regular_image(s)).collect())?;
    let g = g0.as_point_map();
    Ok(PowerTowerStage {
        a,
        f: g.pow(n as i64),
        g,
        step: None,
    })
}

fn conjugation_auto(b: &Arc<TableGroup>, h: &Permutation) -> Result<GroupHom> {
    let map = b
        .elements()
        .map(|x| {
            b.index_of_permutation(&b.as_permutation(x).unwrap().conjugate_by(h))
                .ok_or_else(|| Error::HypothesisFailed("h does not normalize B".into()))
        })
        .collect::<Result<Vec<Elem>>>()?;
    GroupHom::from_map(b, b, map)
}

fn power_step(prev: &PowerTowerStage, joined: NamedGroup, n: usize, bounds: &Bounds) -> Result<PowerTowerStage> {
    let (da, dq) = (prev.a.degree(), joined.degree);
    let (ia, iq) = (Permutation::identity(da), Permutation::identity(dq));
    let gens: Vec<Permutation> = prev
        .a
        .generators()
        .iter()
        .map(|x| Permutation::direct_sum(&[x, &iq]))
        .chain(joined.gens.iter().map(|q| Permutation::direct_sum(&[&ia, q])))
        .collect();
    let b = Arc::new(TableGroup::from_permutations(da + dq, &gens, bounds.enumeration)?);
    let h = Permutation::direct_sum(&[&prev.g, &iq]);
    let alpha = conjugation_auto(&b, &h)?;
    let beta = alpha.power(n as i64);
    let whole = Arc::new(TableGroup::subgroup_generated(&b, b.gens(), bounds.enumeration)?);
    let alpha_sub = GroupHom::from_map(&whole, &whole, alpha.map().to_vec())?;
    let root = root_extension(&b, &whole, &alpha_sub, &beta, n, bounds)?;
    let g = root.pi.clone();
    let stage = PowerTowerStage {
        a: root.c.clone(),
        f: g.pow(n as i64),
        g,
        step: Some(PowerStep { joined, b, h, root }),
    };
    verify_step(prev, &stage, n)?;
    Ok(stage)
}

fn verify_step(prev: &PowerTowerStage, next: &PowerTowerStage, n: usize) -> Result<()> {
    let step = next.step.as_ref().unwrap();
    if next.f != next.g.pow(n as i64) {
        return Err(Error::CheckFailed("f ≠ gⁿ".into()));
    }
    // g_{i+1} extends h through E, on every element of B
    for y in step.b.elements() {
        let py = step.root.phi(y);
        let hy = step.b.as_permutation(y).unwrap().conjugate_by(&step.h);
        if py.conjugate_by(&next.g) != step.embed(&hy)? {
            return Err(Error::CheckFailed(format!("g does not extend h at element {y}")));
        }
    }
    // h extends g_i, and f_{i+1} extends f_i, on the generators of A_i
    for x in prev.a.generators() {
        if step.iota(x).conjugate_by(&step.h) != step.iota(&x.conjugate_by(&prev.g)) {
            return Err(Error::CheckFailed("h does not extend g".into()));
        }
        let lhs = step.embed(&step.iota(x))?.conjugate_by(&next.f);
        if lhs != step.embed(&step.iota(&x.conjugate_by(&prev.f)))? {
            return Err(Error::CheckFailed("f does not extend the previous f".into()));
        }
    }
    Ok(())
}

/// Stage `i` joins the `i`-th catalog group (in listing order, starting
/// with the trivial `C1`) and then takes an `n`-th root.
pub fn generic_power_tower(n: usize, depth: usize, seed: &EquivariantSystem, bounds: &Bounds) -> Result<PowerTower> {
    if n == 0 {
        return Err(Error::HypothesisFailed("n must be positive".into()));
    }
    let names = catalog_names();
    if depth > names.len() {
        return Err(Error::DepthTooLarge {
            depth,
            max: names.len(),
        });
    }
    let mut stages = vec![seed_stage(seed, n).stage("power stage 0")?];
    for (i, name) in names.iter().enumerate().take(depth) {
        let label = format!("power stage {}", i + 1);
        let joined = catalog(name).stage(&label)?;
        let next = power_step(stages.last().unwrap(), joined, n, bounds).stage(&label)?;
        stages.push(next);
    }
    Ok(PowerTower { n, stages })
}
