//! Brute-force isomorphism search and subgroup enumeration for small groups.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::GroupHom;
use crate::table::{closure_by, Elem, TableGroup};

/// Largest order accepted by [`find_isomorphism`] and [`all_subgroups`].
pub const SEARCH_LIMIT: usize = 64;

fn order_profile(g: &TableGroup) -> Vec<usize> {
    let mut v: Vec<usize> = g.elements().map(|a| g.element_order(a)).collect();
    v.sort_unstable();
    v
}

/// Greedy irredundant generating set: scan `candidates` in order, keeping each
/// element not already in the span of those kept.
fn irredundant(g: &TableGroup, candidates: impl IntoIterator<Item = Elem>) -> Vec<Elem> {
    let mut kept = Vec::new();
    let mut span: HashSet<Elem> = HashSet::from([0]);
    for c in candidates {
        if span.contains(&c) {
            continue;
        }
        kept.push(c);
        span = closure_by(0, &kept, g.order(), |a, b| g.mul(*a, *b))
            .expect("bounded by the group order")
            .into_iter()
            .collect();
    }
    kept
}

/// Finds an isomorphism `G → H`, trying generator images in ascending order.
/// When `G` and `H` are the same group the identity is returned.
pub fn find_isomorphism(g: &Arc<TableGroup>, h: &Arc<TableGroup>) -> Result<Option<GroupHom>> {
    for x in [g, h] {
        if x.order() > SEARCH_LIMIT {
            return Err(Error::SizeBoundExceeded {
                what: "isomorphism search",
                order: x.order(),
                bound: SEARCH_LIMIT,
            });
        }
    }
    if Arc::ptr_eq(g, h) {
        return Ok(Some(GroupHom::identity(g)));
    }
    if g.order() != h.order() || order_profile(g) != order_profile(h) {
        return Ok(None);
    }
    let gens = irredundant(g, g.gens().iter().copied());
    // prefix subgroups, for pruning partial assignments
    let prefixes: Vec<Arc<TableGroup>> = (1..=gens.len())
        .map(|k| Arc::new(TableGroup::subgroup_generated(g, &gens[..k], SEARCH_LIMIT).unwrap()))
        .collect();
    let gen_orders: Vec<usize> = gens.iter().map(|&s| g.element_order(s)).collect();
    let mut images = Vec::with_capacity(gens.len());
    let found = search(h, &prefixes, &gen_orders, &mut images);
    match found {
        None => Ok(None),
        Some(images) => {
            // express the assignment on g's own generators
            let sub = prefixes.last().cloned();
            let full = match sub {
                None => GroupHom::new(g, h, vec![0; g.gens().len()])?,
                Some(sub) => {
                    let partial = GroupHom::new(&sub, h, images)?;
                    let (_, els) = sub.parent().unwrap();
                    let mut map = vec![0; g.order()];
                    for (i, &e) in els.iter().enumerate() {
                        map[e as usize] = partial.apply(i as Elem);
                    }
                    GroupHom::from_map(g, h, map)?
                }
            };
            Ok(Some(full))
        }
    }
}

fn search(
    h: &Arc<TableGroup>,
    prefixes: &[Arc<TableGroup>],
    gen_orders: &[usize],
    images: &mut Vec<Elem>,
) -> Option<Vec<Elem>> {
    let k = images.len();
    if k == prefixes.len() {
        return Some(images.clone());
    }
    for cand in h.elements() {
        if h.element_order(cand) != gen_orders[k] {
            continue;
        }
        images.push(cand);
        let sub = &prefixes[k];
        let ok = GroupHom::new(sub, h, images.clone())
            .map(|f| f.is_injective())
            .unwrap_or(false);
        let last = k + 1 == prefixes.len();
        if ok && (!last || GroupHom::new(sub, h, images.clone()).unwrap().is_surjective()) {
            if let Some(found) = search(h, prefixes, gen_orders, images) {
                return Some(found);
            }
        }
        images.pop();
    }
    None
}

/// Every subgroup of `g`, as sorted element sets, ordered by size then contents.
pub fn all_subgroup_sets(g: &Arc<TableGroup>) -> Result<Vec<Vec<Elem>>> {
    if g.order() > SEARCH_LIMIT {
        return Err(Error::SizeBoundExceeded {
            what: "subgroup enumeration",
            order: g.order(),
            bound: SEARCH_LIMIT,
        });
    }
    let span = |gens: &[Elem]| -> BTreeSet<Elem> {
        closure_by(0, gens, g.order(), |a, b| g.mul(*a, *b))
            .unwrap()
            .into_iter()
            .collect()
    };
    let mut found: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let mut frontier: Vec<BTreeSet<Elem>> = Vec::new();
    for x in g.elements() {
        let s = span(&[x]);
        if found.insert(s.iter().copied().collect()) {
            frontier.push(s);
        }
    }
    while let Some(s) = frontier.pop() {
        for x in g.elements() {
            if s.contains(&x) {
                continue;
            }
            let mut gens: Vec<Elem> = s.iter().copied().collect();
            gens.push(x);
            let t = span(&gens);
            if found.insert(t.iter().copied().collect()) {
                frontier.push(t);
            }
        }
    }
    let mut out: Vec<Vec<Elem>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    Ok(out)
}

/// Every subgroup of `g` as a subgroup object with an irredundant generating set.
pub fn all_subgroups(g: &Arc<TableGroup>) -> Result<Vec<Arc<TableGroup>>> {
    all_subgroup_sets(g)?
        .into_iter()
        .map(|set| {
            let gens = irredundant(g, set);
            TableGroup::subgroup_generated(g, &gens, SEARCH_LIMIT).map(Arc::new)
        })
        .collect()
}
