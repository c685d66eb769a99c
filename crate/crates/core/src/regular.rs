//! The right regular representation `ρ(g): x ↦ x·g`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hom::PermRep;
use crate::permgroup::PermGroup;
use crate::table::TableGroup;

/// Image of `ρ` in `Sym(|G|)` plus the labeling element `i` ↦ point `i + 1`.
pub fn regular_representation(g: &Arc<TableGroup>, bound: usize) -> Result<(PermGroup, Vec<usize>)> {
    if g.order() > bound {
        return Err(Error::OrderTooLarge {
            order: g.order().to_string(),
            bound,
        });
    }
    let gens = g.gens().iter().map(|&s| g.regular_image(s)).collect();
    let group = PermGroup::new(g.order(), gens)?;
    Ok((group, (1..=g.order()).collect()))
}

/// `ρ` as a verified homomorphism with every image materialized.
pub fn regular_rep(g: &Arc<TableGroup>, degree_cap: usize) -> Result<PermRep> {
    if g.order() > degree_cap {
        return Err(Error::DegreeCapExceeded {
            degree: g.order(),
            cap: degree_cap,
        });
    }
    let gens = g.gens().iter().map(|&s| g.regular_image(s)).collect();
    PermRep::new(g, g.order(), gens)
}
