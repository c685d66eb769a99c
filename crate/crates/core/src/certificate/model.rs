//! The certificate wire format.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Extension,
    Amalgam,
    EquivariantAmalgam,
    Commuting,
    Root,
    HallTower,
    PowerTower,
}

impl Kind {
    pub const ALL: [Kind; 7] = [
        Kind::Extension,
        Kind::Amalgam,
        Kind::EquivariantAmalgam,
        Kind::Commuting,
        Kind::Root,
        Kind::HallTower,
        Kind::PowerTower,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Extension => "extension",
            Kind::Amalgam => "amalgam",
            Kind::EquivariantAmalgam => "equivariant-amalgam",
            Kind::Commuting => "commuting",
            Kind::Root => "root",
            Kind::HallTower => "hall-tower",
            Kind::PowerTower => "power-tower",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A permutation group by generators in cycle notation. `elements`, when
/// present, lists every element as a spanning tree: entry `i` is
/// `[p, j]`, meaning element `i + 1` is element `p` times generator `j`;
/// element `0` is the identity. `order`, when present, is a claim the
/// verifier checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupData {
    pub degree: usize,
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<[usize; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermData {
    pub degree: usize,
    pub cycles: String,
}

/// A homomorphism by the images of the domain's generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapData {
    pub domain: String,
    pub codomain: String,
    pub images: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Payload {
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupData>,
    #[serde(default)]
    pub perms: BTreeMap<String, PermData>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapData>,
}

/// A bound variable: `domain` is a group name (all of its listed elements)
/// or `gens:<group>` (its generators).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Binding {
    pub var: String,
    pub domain: String,
}

impl Binding {
    pub fn new(var: &str, domain: impl Into<String>) -> Self {
        Binding {
            var: var.into(),
            domain: domain.into(),
        }
    }
}

/// One family of equations. `source` says which construction the family
/// belongs to and is not compared against the expected layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// `lhs = rhs` for every assignment of the bound variables.
    Eq {
        name: String,
        source: String,
        over: Vec<Binding>,
        lhs: String,
        rhs: String,
    },
    /// `expr` lies in `group` for every assignment.
    Member {
        name: String,
        source: String,
        over: Vec<Binding>,
        expr: String,
        group: String,
    },
    /// The generator images define a homomorphism into the codomain group.
    Hom { name: String, source: String, map: String },
    /// The homomorphism has trivial kernel.
    Injective { name: String, source: String, map: String },
    Order {
        name: String,
        source: String,
        group: String,
        value: String,
    },
    Degree {
        name: String,
        source: String,
        group: String,
        value: usize,
    },
}

impl Family {
    pub fn name(&self) -> &str {
        match self {
            Family::Eq { name, .. }
            | Family::Member { name, .. }
            | Family::Hom { name, .. }
            | Family::Injective { name, .. }
            | Family::Order { name, .. }
            | Family::Degree { name, .. } => name,
        }
    }

    pub fn source(&self) -> &str {
        match self {
            Family::Eq { source, .. }
            | Family::Member { source, .. }
            | Family::Hom { source, .. }
            | Family::Injective { source, .. }
            | Family::Order { source, .. }
            | Family::Degree { source, .. } => source,
        }
    }

    fn source_mut(&mut self) -> &mut String {
        match self {
            Family::Eq { source, .. }
            | Family::Member { source, .. }
            | Family::Hom { source, .. }
            | Family::Injective { source, .. }
            | Family::Order { source, .. }
            | Family::Degree { source, .. } => source,
        }
    }

    /// Equality up to `source`.
    pub fn same_shape(&self, other: &Family) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.source_mut().clear();
        b.source_mut().clear();
        a == b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub kind: Kind,
    pub version: u32,
    /// Echo of what the construction was asked to do; not verified.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    pub payload: Payload,
    pub equations: Vec<Family>,
    /// Informational notes such as the chosen realization; not verified.
    #[serde(default)]
    pub summary: BTreeMap<String, String>,
}

impl Certificate {
    /// Canonical text: keys sorted, two-space indentation, trailing newline.
    pub fn emit(&self) -> String {
        // serde_json's map type is ordered, so going through `Value` sorts keys
        let value = serde_json::to_value(self).expect("certificate serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Certificate> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Certificate(format!("malformed JSON: {e}")))?;
        if let Some(v) = value.get("version") {
            if v.as_u64() != Some(FORMAT_VERSION as u64) {
                return Err(Error::Certificate(format!("unsupported version {v}")));
            }
        }
        if let Some(k) = value.get("kind").and_then(|k| k.as_str()) {
            if !Kind::ALL.iter().any(|x| x.as_str() == k) {
                return Err(Error::Certificate(format!("unknown kind `{k}`")));
            }
        }
        serde_json::from_value(value).map_err(|e| Error::Certificate(format!("invalid certificate: {e}")))
    }
}
