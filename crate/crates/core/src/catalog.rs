//! Built-in permutation groups and named generators.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::{parse_cycles, Permutation};
use crate::permgroup::PermGroup;
use crate::table::{Elem, TableGroup};

/// A permutation group with named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGroup {
    pub name: String,
    pub degree: usize,
    pub gen_names: Vec<String>,
    pub gens: Vec<Permutation>,
}

/// A product of generator powers, `(generator index, exponent)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(pub Vec<(usize, i64)>);

const AUTO_NAMES: [&str; 4] = ["x", "y", "z", "w"];

pub(crate) fn auto_name(i: usize) -> String {
    AUTO_NAMES
        .get(i)
        .map(|s| s.to_string())
        .unwrap_or_else(|| format!("g{}", i + 1))
}

impl NamedGroup {
    /// Generators without a name get `x`, `y`, `z`, `w`, then `g5`, `g6`, ….
    pub fn new(name: impl Into<String>, degree: usize, gens: Vec<(Option<String>, Permutation)>) -> Result<Self> {
        let mut gen_names = Vec::new();
        let mut perms = Vec::new();
        for (i, (n, p)) in gens.into_iter().enumerate() {
            if p.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: p.degree(),
                });
            }
            let n = n.unwrap_or_else(|| auto_name(i));
            if gen_names.contains(&n) {
                return Err(Error::Parse {
                    line: 0,
                    message: format!("generator name `{n}` used twice"),
                });
            }
            gen_names.push(n);
            perms.push(p);
        }
        Ok(NamedGroup {
            name: name.into(),
            degree,
            gen_names,
            gens: perms,
        })
    }

    fn from_cycles(name: &str, degree: usize, gens: &[String]) -> NamedGroup {
        let gens = gens
            .iter()
            .map(|c| (None, parse_cycles(c, degree).expect("catalog cycles are valid")))
            .collect();
        NamedGroup::new(name, degree, gens).expect("catalog groups are well formed")
    }

    pub fn perm_group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.gens.clone()).expect("degrees checked")
    }

    /// The enumerated group; its generators are this group's generators in order.
    pub fn table(&self, bound: usize) -> Result<Arc<TableGroup>> {
        TableGroup::from_permutations(self.degree, &self.gens, bound).map(Arc::new)
    }

    /// Parses `x y^-1 z^2` (factors separated by spaces or `*`); `1`, `e` and
    /// `id` denote the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            if matches!(tok, "1" | "e" | "id") {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>().map_err(|_| Error::Parse {
                        line: 0,
                        message: format!("bad exponent in `{tok}`"),
                    })?,
                ),
                None => (tok, 1),
            };
            let idx = self
                .gen_names
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    message: format!("unknown generator `{name}` in group {}", self.name),
                })?;
            out.push((idx, exp));
        }
        Ok(Word(out))
    }

    pub fn word_permutation(&self, w: &Word) -> Permutation {
        w.0.iter().fold(Permutation::identity(self.degree), |acc, &(i, e)| {
            acc.mul_unchecked(&self.gens[i].pow(e))
        })
    }

    /// Evaluates a word in an enumeration produced by [`NamedGroup::table`].
    pub fn word_element(&self, table: &TableGroup, w: &Word) -> Elem {
        w.0.iter().fold(0, |acc, &(i, e)| table.mul(acc, table.pow(table.gens()[i], e)))
    }

    pub fn eval(&self, table: &TableGroup, text: &str) -> Result<Elem> {
        Ok(self.word_element(table, &self.parse_word(text)?))
    }

    /// Text in the group file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("group {}\ndegree {}\n", self.name, self.degree);
        for (n, g) in self.gen_names.iter().zip(&self.gens) {
            s.push_str(&format!("gen {n} {g}\n"));
        }
        s
    }
}

fn cycle_text(points: impl IntoIterator<Item = usize>) -> String {
    let pts: Vec<String> = points.into_iter().map(|p| p.to_string()).collect();
    if pts.len() < 2 {
        "()".into()
    } else {
        format!("({})", pts.join(" "))
    }
}

/// Catalog names in listing order.
pub fn catalog_names() -> Vec<String> {
    let mut v: Vec<String> = (1..=32).map(|n| format!("C{n}")).collect();
    v.extend((1..=8).map(|n| format!("S{n}")));
    v.extend((1..=8).map(|n| format!("A{n}")));
    v.extend((1..=12).map(|n| format!("D{n}")));
    v.push("Q8".into());
    v.push("V4".into());
    v
}

/// Looks up a built-in group: `Cn` (n ≤ 32), `Sn`, `An` (n ≤ 8), `Dn` of
/// order `2n` (n ≤ 12), `Q8`, `V4`. A `catalog:` prefix is accepted.
pub fn catalog(name: &str) -> Result<NamedGroup> {
    let key = name.strip_prefix("catalog:").unwrap_or(name).trim();
    let unknown = || Error::UnknownCatalogGroup(key.to_string());
    match key {
        "Q8" => return Ok(quaternion()),
        "V4" => {
            return Ok(NamedGroup::from_cycles(
                "V4",
                4,
                &["(1 2)(3 4)".into(), "(1 3)(2 4)".into()],
            ))
        }
        _ => {}
    }
    let (family, n) = key.split_at(1.min(key.len()));
    let n: usize = n.parse().map_err(|_| unknown())?;
    let g = match family {
        "C" if (1..=32).contains(&n) => NamedGroup::from_cycles(key, n, &[cycle_text(1..=n)]),
        "S" if (1..=8).contains(&n) => {
            let mut gens = vec![if n >= 2 { "(1 2)".to_string() } else { "()".to_string() }];
            if n >= 3 {
                gens.push(cycle_text(1..=n));
            }
            NamedGroup::from_cycles(key, n, &gens)
        }
        "A" if (1..=8).contains(&n) => {
            let mut gens = vec![if n >= 3 { "(1 2 3)".to_string() } else { "()".to_string() }];
            if n >= 4 {
                let start = if n % 2 == 1 { 1 } else { 2 };
                gens.push(cycle_text(start..=n));
            }
            NamedGroup::from_cycles(key, n, &gens)
        }
        "D" if (1..=12).contains(&n) => match n {
            1 => NamedGroup::from_cycles(key, 2, &["(1 2)".into()]),
            2 => NamedGroup::from_cycles(key, 4, &["(1 2)(3 4)".into(), "(1 3)(2 4)".into()]),
            _ => {
                let refl: String = (1..=n / 2).map(|i| cycle_text([i, n + 1 - i])).collect();
                NamedGroup::from_cycles(key, n, &[cycle_text(1..=n), refl])
            }
        },
        _ => return Err(unknown()),
    };
    Ok(g)
}

/// `Q8` in its regular representation; points label `1, i, j, k, -1, -i, -j, -k`.
fn quaternion() -> NamedGroup {
    // unit index 0..4 = 1,i,j,k; product table of units with signs
    const UNIT: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let mul = |a: usize, b: usize| -> usize {
        let (sa, ua) = (a >= 4, a % 4);
        let (sb, ub) = (b >= 4, b % 4);
        let (s, u) = UNIT[ua][ub];
        u + if sa ^ sb ^ s { 4 } else { 0 }
    };
    let right = |g: usize| {
        Permutation::from_images((0..8).map(|x| mul(x, g) as u32).collect()).unwrap()
    };
    NamedGroup::new("Q8", 8, vec![(None, right(1)), (None, right(2))]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn order(name: &str) -> BigUint {
        catalog(name).unwrap().perm_group().order()
    }

    #[test]
    fn orders() {
        for n in 1..=32u32 {
            assert_eq!(order(&format!("C{n}")), BigUint::from(n));
        }
        let mut f = 1u32;
        for n in 1..=8u32 {
            f *= n;
            assert_eq!(order(&format!("S{n}")), BigUint::from(f));
            let a = if n >= 2 { f / 2 } else { 1 };
            assert_eq!(order(&format!("A{n}")), BigUint::from(a), "A{n}");
        }
        for n in 1..=12u32 {
            assert_eq!(order(&format!("D{n}")), BigUint::from(2 * n), "D{n}");
        }
        assert_eq!(order("Q8"), BigUint::from(8u32));
        assert_eq!(order("V4"), BigUint::from(4u32));
        assert_eq!(catalog_names().len(), 32 + 8 + 8 + 12 + 2);
    }

    #[test]
    fn quaternion_has_one_involution() {
        let q = catalog("Q8").unwrap().table(100).unwrap();
        let involutions = q.elements().filter(|&a| q.element_order(a) == 2).count();
        assert_eq!(involutions, 1);
        assert!(!q.is_abelian());
    }

    #[test]
    fn unknown_names() {
        for bad in ["C33", "S9", "D13", "X3", "", "C", "Cx"] {
            assert!(matches!(catalog(bad), Err(Error::UnknownCatalogGroup(_))), "{bad}");
        }
    }

    #[test]
    fn words() {
        let s3 = catalog("catalog:S3").unwrap();
        let t = s3.table(100).unwrap();
        assert_eq!(s3.gen_names, vec!["x", "y"]);
        let w = s3.parse_word("x y^-1 * x").unwrap();
        assert_eq!(w, Word(vec![(0, 1), (1, -1), (0, 1)]));
        assert_eq!(
            t.as_permutation(s3.word_element(&t, &w)).unwrap(),
            s3.word_permutation(&w)
        );
        assert_eq!(s3.eval(&t, "1").unwrap(), 0);
        assert!(s3.parse_word("q").is_err());
        assert!(s3.parse_word("x^a").is_err());
    }
}
