//! Text formats: group files, `map` lines, partial-isomorphism files and
//! amalgam specs. `#` starts a comment everywhere.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::catalog::{catalog, NamedGroup};
use crate::error::{Error, Result};
use crate::hom::GroupHom;
use crate::hrushovski::PartialIso;
use crate::perm::parse_cycles;
use crate::system::{EquivariantEmbedding, EquivariantSystem};
use crate::table::{Elem, TableGroup};

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn with_line(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { line: 0, message } => Error::Parse { line, message },
        Error::Parse { .. } => e,
        other => perr(line, other.to_string()),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

#[derive(Default)]
struct GroupBuilder {
    name: Option<String>,
    degree: Option<usize>,
    gens: Vec<(usize, Option<String>, String)>,
}

impl GroupBuilder {
    /// Consumes a `group`, `degree` or `gen` line; returns false for other keywords.
    fn accept(&mut self, line: usize, l: &str) -> Result<bool> {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        match kw {
            "group" => self.name = Some(rest.to_string()),
            "degree" => {
                let d: usize = rest.parse().map_err(|_| perr(line, format!("bad degree `{rest}`")))?;
                if d == 0 {
                    return Err(perr(line, "degree must be positive"));
                }
                self.degree = Some(d);
            }
            "gen" => {
                if rest.starts_with('(') {
                    self.gens.push((line, None, rest.to_string()));
                } else {
                    let (n, c) = rest
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| perr(line, "expected `gen [name] <cycles>`"))?;
                    self.gens.push((line, Some(n.to_string()), c.trim().to_string()));
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn build(self, default_name: &str, line: usize) -> Result<NamedGroup> {
        let degree = self.degree.ok_or_else(|| perr(line, "missing `degree` line"))?;
        let gens = self
            .gens
            .into_iter()
            .map(|(l, n, c)| parse_cycles(&c, degree).map(|p| (n, p)).map_err(|e| with_line(e, l)))
            .collect::<Result<Vec<_>>>()?;
        NamedGroup::new(self.name.unwrap_or_else(|| default_name.to_string()), degree, gens)
            .map_err(|e| with_line(e, line))
    }
}

/// Parses a group file: `group <name>`, `degree <d>`, `gen [<name>] <cycles>`
/// lines, or a single `catalog:<name>` line.
pub fn parse_group_text(text: &str) -> Result<NamedGroup> {
    let mut b = GroupBuilder::default();
    let mut last = 1;
    for (line, l) in content_lines(text) {
        last = line;
        if l.starts_with("catalog:") {
            return catalog(l).map_err(|e| with_line(e, line));
        }
        if !b.accept(line, l)? {
            return Err(perr(line, format!("unexpected line `{l}`")));
        }
    }
    b.build("G", last)
}

/// `catalog:<name>` or the path of a group file.
pub fn load_group(spec: &str) -> Result<NamedGroup> {
    load_group_relative(spec, None)
}

fn load_group_relative(spec: &str, base: Option<&Path>) -> Result<NamedGroup> {
    if spec.starts_with("catalog:") {
        return catalog(spec);
    }
    let path = match base {
        Some(b) if Path::new(spec).is_relative() => b.join(spec),
        _ => PathBuf::from(spec),
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| perr(0, format!("cannot read {}: {e}", path.display())))?;
    parse_group_text(&text)
}

/// A `map <lhs> -> <rhs>` line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapLine {
    pub line: usize,
    pub lhs: String,
    pub rhs: String,
}

fn parse_map_body(line: usize, body: &str) -> Result<MapLine> {
    let body = body
        .strip_prefix("map")
        .ok_or_else(|| perr(line, format!("expected `map <word> -> <word>`, got `{body}`")))?;
    let (l, r) = body
        .split_once("->")
        .ok_or_else(|| perr(line, "missing `->`"))?;
    Ok(MapLine {
        line,
        lhs: l.trim().to_string(),
        rhs: r.trim().to_string(),
    })
}

/// Map lines separated by newlines or `;`, as given to `--alpha`/`--beta`.
pub fn parse_map_lines(text: &str) -> Result<Vec<MapLine>> {
    let mut out = Vec::new();
    for (line, l) in content_lines(text) {
        for part in l.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            out.push(parse_map_body(line, part)?);
        }
    }
    Ok(out)
}

/// Builds the homomorphism assigning each domain generator its mapped word.
/// With `default_identity`, unmentioned generators map to themselves (the
/// domain and codomain must then be the same group).
pub fn hom_from_lines(
    domain: &NamedGroup,
    dtab: &Arc<TableGroup>,
    codomain: &NamedGroup,
    ctab: &Arc<TableGroup>,
    lines: &[MapLine],
    default_identity: bool,
) -> Result<GroupHom> {
    let mut images: Vec<Option<Elem>> = vec![None; domain.gens.len()];
    for m in lines {
        let idx = domain
            .gen_names
            .iter()
            .position(|g| *g == m.lhs)
            .ok_or_else(|| perr(m.line, format!("`{}` is not a generator of {}", m.lhs, domain.name)))?;
        if images[idx].is_some() {
            return Err(perr(m.line, format!("generator `{}` mapped twice", m.lhs)));
        }
        images[idx] = Some(codomain.eval(ctab, &m.rhs).map_err(|e| with_line(e, m.line))?);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, im)| match im {
            Some(y) => Ok(y),
            None if default_identity => Ok(dtab.gens()[i]),
            None => Err(perr(0, format!("generator `{}` has no image", domain.gen_names[i]))),
        })
        .collect::<Result<Vec<_>>>()?;
    GroupHom::new(dtab, ctab, images)
}

/// Contents of a partial-isomorphism file.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PartialIsoSpec {
    /// Generators of the domain subgroup; defaults to the left sides of the maps.
    pub domain: Option<Vec<String>>,
    /// Generators of the codomain subgroup; checked against the images when given.
    pub codomain: Option<Vec<String>>,
    pub maps: Vec<MapLine>,
}

/// Parses `domain <word>, <word>…`, `codomain …` and `map <word> -> <word>` lines.
pub fn parse_partial_iso(text: &str) -> Result<PartialIsoSpec> {
    let mut spec = PartialIsoSpec::default();
    let words = |rest: &str| -> Vec<String> {
        rest.split(',')
            .map(|w| w.trim().to_string())
            .filter(|w| !w.is_empty())
            .collect()
    };
    for (line, l) in content_lines(text) {
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match kw {
            "domain" => spec.domain = Some(words(rest)),
            "codomain" => spec.codomain = Some(words(rest)),
            "map" => spec.maps.push(parse_map_body(line, l)?),
            _ => return Err(perr(line, format!("unexpected line `{l}`"))),
        }
    }
    Ok(spec)
}

/// Contents of an amalgam spec: three systems `A`, `B`, `C`, their
/// automorphisms and the embeddings `f: A → B`, `g: A → C`.
#[derive(Clone, Debug)]
pub struct AmalgamSpec {
    pub systems: BTreeMap<String, NamedGroup>,
    /// system → automorphism number (1-based) → map lines
    pub autos: BTreeMap<String, BTreeMap<usize, Vec<MapLine>>>,
    pub f: Vec<MapLine>,
    pub g: Vec<MapLine>,
}

impl AmalgamSpec {
    pub fn system(&self, name: &str) -> Result<&NamedGroup> {
        self.systems
            .get(name)
            .ok_or_else(|| perr(0, format!("spec does not define system `{name}`")))
    }

    /// Number of automorphisms declared for a system (highest index used).
    pub fn auto_count(&self, name: &str) -> usize {
        self.autos
            .get(name)
            .and_then(|m| m.keys().next_back().copied())
            .unwrap_or(0)
    }
}

/// Parses an amalgam spec.
///
/// ```text
/// system A catalog:C3
/// system B
/// degree 3
/// gen x (1 2 3)
/// gen y (1 2)
/// system C path/to/group.txt
/// auto A 1 map x -> x^-1
/// auto B 1 map x -> x^-1
/// auto B 1 map y -> y
/// auto C 1 identity
/// embed f map x -> x
/// embed g map x -> x^2
/// ```
pub fn parse_amalgam_spec(text: &str, base_dir: Option<&Path>) -> Result<AmalgamSpec> {
    let mut spec = AmalgamSpec {
        systems: BTreeMap::new(),
        autos: BTreeMap::new(),
        f: Vec::new(),
        g: Vec::new(),
    };
    let mut open: Option<(String, usize, GroupBuilder)> = None;
    let close = |open: &mut Option<(String, usize, GroupBuilder)>, spec: &mut AmalgamSpec| -> Result<()> {
        if let Some((name, line, b)) = open.take() {
            let g = b.build(&name, line)?;
            spec.systems.insert(name, g);
        }
        Ok(())
    };
    for (line, l) in content_lines(text) {
        let mut toks = l.split_whitespace();
        let kw = toks.next().unwrap_or("");
        if let Some((_, _, b)) = open.as_mut() {
            if b.accept(line, l)? {
                continue;
            }
        }
        close(&mut open, &mut spec)?;
        match kw {
            "system" => {
                let name = toks
                    .next()
                    .ok_or_else(|| perr(line, "expected `system <name> [<group>]`"))?
                    .to_string();
                if spec.systems.contains_key(&name) {
                    return Err(perr(line, format!("system `{name}` defined twice")));
                }
                match toks.next() {
                    Some(r) => {
                        let mut g = load_group_relative(r, base_dir).map_err(|e| with_line(e, line))?;
                        g.name = name.clone();
                        spec.systems.insert(name, g);
                    }
                    None => open = Some((name, line, GroupBuilder::default())),
                }
            }
            "auto" => {
                let sys = toks.next().ok_or_else(|| perr(line, "expected `auto <system> <i> …`"))?;
                let idx: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| perr(line, "automorphism number must be a positive integer"))?;
                let rest: Vec<&str> = toks.collect();
                let entry = spec
                    .autos
                    .entry(sys.to_string())
                    .or_default()
                    .entry(idx)
                    .or_default();
                if rest == ["identity"] {
                    continue;
                }
                entry.push(parse_map_body(line, &rest.join(" "))?);
            }
            "embed" => {
                let which = toks.next().unwrap_or("");
                let rest: Vec<&str> = toks.collect();
                let m = parse_map_body(line, &rest.join(" "))?;
                match which {
                    "f" => spec.f.push(m),
                    "g" => spec.g.push(m),
                    _ => return Err(perr(line, "embeddings are named `f` or `g`")),
                }
            }
            _ => return Err(perr(line, format!("unexpected line `{l}`"))),
        }
    }
    close(&mut open, &mut spec)?;
    Ok(spec)
}

/// The partial isomorphism described by a partial-isomorphism file, with
/// words read in `g`.
pub fn partial_iso_from_spec(
    g: &NamedGroup,
    table: &Arc<TableGroup>,
    spec: &PartialIsoSpec,
    bound: usize,
) -> Result<PartialIso> {
    let eval = |m: &MapLine, w: &str| g.eval(table, w).map_err(|e| with_line(e, m.line));
    let lhs = spec.maps.iter().map(|m| eval(m, &m.lhs)).collect::<Result<Vec<_>>>()?;
    let rhs = spec.maps.iter().map(|m| eval(m, &m.rhs)).collect::<Result<Vec<_>>>()?;
    let psi = PartialIso::new(table, &lhs, &rhs, bound)?;
    let same = |words: &[String], got: &[Elem], what: &str| -> Result<()> {
        let sub = subgroup_from_words(g, table, words, bound)?;
        let mut want: Vec<Elem> = sub.parent().expect("a subgroup").1.to_vec();
        let mut got = got.to_vec();
        want.sort_unstable();
        got.sort_unstable();
        if want != got {
            return Err(Error::InvalidPartialIso(format!(
                "the listed {what} generators do not generate the {what} of the maps"
            )));
        }
        Ok(())
    };
    if let Some(d) = &spec.domain {
        same(d, psi.domain_elements(), "domain")?;
    }
    if let Some(c) = &spec.codomain {
        same(c, psi.codomain_elements(), "codomain")?;
    }
    Ok(psi)
}

/// `⟨words⟩ ≤ g`.
pub fn subgroup_from_words(
    g: &NamedGroup,
    table: &Arc<TableGroup>,
    words: &[String],
    bound: usize,
) -> Result<Arc<TableGroup>> {
    let gens = words.iter().map(|w| g.eval(table, w)).collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(TableGroup::subgroup_generated(table, &gens, bound)?))
}

/// An automorphism of `sub ≤ g` from map lines whose words are read in `g`.
/// A left side must evaluate to one of the subgroup's generators;
/// unmentioned generators are fixed.
pub fn automorphism_from_lines(
    g: &NamedGroup,
    table: &Arc<TableGroup>,
    sub: &Arc<TableGroup>,
    lines: &[MapLine],
) -> Result<GroupHom> {
    let mut images: Vec<Elem> = sub.gens().to_vec();
    let mut set = vec![false; images.len()];
    for m in lines {
        let x = g.eval(table, &m.lhs).map_err(|e| with_line(e, m.line))?;
        let x = sub.from_parent(x);
        let idx = x
            .and_then(|x| sub.gens().iter().position(|&s| s == x))
            .ok_or_else(|| perr(m.line, format!("`{}` is not a generator of the subgroup", m.lhs)))?;
        if std::mem::replace(&mut set[idx], true) {
            return Err(perr(m.line, format!("generator `{}` mapped twice", m.lhs)));
        }
        let y = g.eval(table, &m.rhs).map_err(|e| with_line(e, m.line))?;
        images[idx] = sub
            .from_parent(y)
            .ok_or_else(|| perr(m.line, format!("`{}` is not in the subgroup", m.rhs)))?;
    }
    let hom = GroupHom::new(sub, sub, images)?;
    if !hom.is_automorphism() {
        return Err(Error::NotAnAutomorphism(format!("map lines on {}", g.name)));
    }
    Ok(hom)
}

fn system_table(spec: &AmalgamSpec, name: &str, bound: usize) -> Result<(NamedGroup, Arc<TableGroup>)> {
    let g = spec.system(name)?.clone();
    let t = g.table(bound)?;
    Ok((g, t))
}

/// The plain embeddings `f: A → B`, `g: A → C` of an amalgam spec.
pub fn embeddings_from_spec(spec: &AmalgamSpec, bound: usize) -> Result<(GroupHom, GroupHom)> {
    let (a, ta) = system_table(spec, "A", bound)?;
    let (b, tb) = system_table(spec, "B", bound)?;
    let (c, tc) = system_table(spec, "C", bound)?;
    let f = hom_from_lines(&a, &ta, &b, &tb, &spec.f, false)?;
    let g = hom_from_lines(&a, &ta, &c, &tc, &spec.g, false)?;
    Ok((f, g))
}

/// The equivariant embeddings of an amalgam spec. Every system gets as many
/// automorphisms as the most any system declares; missing ones are the
/// identity.
pub fn equivariant_embeddings_from_spec(
    spec: &AmalgamSpec,
    bound: usize,
) -> Result<(EquivariantEmbedding, EquivariantEmbedding)> {
    let n = ["A", "B", "C"].iter().map(|s| spec.auto_count(s)).max().unwrap_or(0);
    let system = |name: &str| -> Result<(NamedGroup, Arc<TableGroup>, EquivariantSystem)> {
        let (g, t) = system_table(spec, name, bound)?;
        let autos = (1..=n)
            .map(|i| {
                let lines = spec.autos.get(name).and_then(|m| m.get(&i)).cloned().unwrap_or_default();
                let h = hom_from_lines(&g, &t, &g, &t, &lines, true)?;
                if !h.is_automorphism() {
                    return Err(Error::NotAnAutomorphism(format!("automorphism {i} of system {name}")));
                }
                Ok(h)
            })
            .collect::<Result<Vec<_>>>()?;
        let sys = EquivariantSystem::new(&t, autos)?;
        Ok((g, t, sys))
    };
    let (a, ta, sa) = system("A")?;
    let (b, tb, sb) = system("B")?;
    let (c, tc, sc) = system("C")?;
    let f = hom_from_lines(&a, &ta, &b, &tb, &spec.f, false)?;
    let g = hom_from_lines(&a, &ta, &c, &tc, &spec.g, false)?;
    Ok((
        EquivariantEmbedding::new(f, &sa, &sb)?,
        EquivariantEmbedding::new(g, &sa, &sc)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_file() {
        let g = parse_group_text("# S3\ngroup S3\ndegree 3\ngen r (1 2 3)\ngen (1 2)\n").unwrap();
        assert_eq!(g.name, "S3");
        assert_eq!(g.gen_names, vec!["r", "y"]);
        assert_eq!(g.perm_group().order(), 6u32.into());
        assert_eq!(parse_group_text("catalog:C5").unwrap().degree, 5);
        let e = parse_group_text("degree 3\ngen (1 4)\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        assert!(matches!(parse_group_text("gen (1 2)\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_group_text("degree 3\nfoo\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn group_text_round_trip() {
        let g = catalog("D5").unwrap();
        assert_eq!(parse_group_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn map_lines() {
        let m = parse_map_lines("map x -> x^-1; map y -> y x").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m[1].rhs, "y x");
        assert!(parse_map_lines("x -> y").is_err());
        assert!(parse_map_lines("map x y").is_err());
    }

    #[test]
    fn homs_from_lines() {
        let c4 = catalog("C4").unwrap();
        let c2 = catalog("C2").unwrap();
        let (t4, t2) = (c4.table(100).unwrap(), c2.table(100).unwrap());
        let h = hom_from_lines(&c4, &t4, &c2, &t2, &parse_map_lines("map x -> x").unwrap(), false).unwrap();
        assert_eq!(h.kernel().len(), 2);
        assert!(hom_from_lines(&c4, &t4, &c2, &t2, &[], false).is_err());
        let id = hom_from_lines(&c4, &t4, &c4, &t4, &[], true).unwrap();
        assert!(id.same_map(&GroupHom::identity(&t4)));
    }

    #[test]
    fn partial_iso_file() {
        let s = parse_partial_iso("domain x^2\nmap x^2 -> x^4\n").unwrap();
        assert_eq!(s.domain, Some(vec!["x^2".to_string()]));
        assert_eq!(s.maps[0].rhs, "x^4");
        assert!(parse_partial_iso("bogus\n").is_err());
    }

    #[test]
    fn amalgam_spec() {
        let text = "system A catalog:C3\nsystem B\ndegree 3\ngen x (1 2 3)\ngen y (1 2)\nsystem C catalog:C6\n\
                    auto A 1 map x -> x^-1\nauto B 1 map x -> x^-1\nauto C 1 map x -> x^-1\n\
                    embed f map x -> x\nembed g map x -> x^2\n";
        let s = parse_amalgam_spec(text, None).unwrap();
        assert_eq!(s.systems.len(), 3);
        assert_eq!(s.system("B").unwrap().gens.len(), 2);
        assert_eq!(s.auto_count("A"), 1);
        assert_eq!(s.f.len(), 1);
        assert_eq!(s.g[0].rhs, "x^2");
        assert!(parse_amalgam_spec("system A catalog:C99\n", None).is_err());
        assert!(parse_amalgam_spec("embed h map x -> x\n", None).is_err());
    }
}
