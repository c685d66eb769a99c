//! Independent certificate checking.
//!
//! Everything here works on raw permutations and stabilizer chains; nothing
//! from the constructions is consulted. A homomorphism given by generator
//! images is evaluated through its graph: the chain of
//! `⟨gᵢ ⊕ φ(gᵢ)⟩` has its base inside the domain points, so sifting
//! `x ⊕ 1` leaves `1 ⊕ φ(x)⁻¹`.

use std::cell::OnceCell;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::chain::StabChain;
use crate::error::Result;
use crate::perm::{parse_cycles, Permutation};

use super::expr::{parse_expr, Expr};
use super::model::{Binding, Certificate, Family, GroupData, Kind, Payload};
use super::templates;

/// Listing more than this many points across a group's elements is refused.
const ELEMENT_POINT_BUDGET: usize = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyOutcome {
    pub name: String,
    pub source: String,
    /// Number of assignments evaluated (1 for unquantified families).
    pub checked: usize,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub kind: Kind,
    pub families: Vec<FamilyOutcome>,
    /// Structural problems outside any family: bad payload or wrong layout.
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.families.iter().all(|f| f.failure.is_none())
    }

    pub fn violations(&self) -> impl Iterator<Item = &FamilyOutcome> {
        self.families.iter().filter(|f| f.failure.is_some())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind: {}", self.kind)?;
        for fam in &self.families {
            match &fam.failure {
                None => writeln!(f, "  ok    {} [{} checked]", fam.name, fam.checked)?,
                Some(why) => writeln!(f, "  FAIL  {} [{} checked]: {why}", fam.name, fam.checked)?,
            }
        }
        for e in &self.errors {
            writeln!(f, "  error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "  warning: {w}")?;
        }
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Parses and checks a certificate. Only unreadable text is an `Err`; every
/// mathematical problem ends up in the report.
pub fn verify_certificate(text: &str) -> Result<VerifyReport> {
    Ok(verify(&Certificate::parse(text)?))
}

pub fn verify(cert: &Certificate) -> VerifyReport {
    let mut report = VerifyReport {
        kind: cert.kind,
        families: Vec::new(),
        errors: Vec::new(),
        warnings: Vec::new(),
    };
    if cert.equations.is_empty() {
        report.warnings.push("certificate lists no equations; it passes vacuously".into());
        return report;
    }
    let ctx = match Context::build(&cert.payload) {
        Ok(c) => c,
        Err(e) => {
            report.errors.push(format!("payload: {e}"));
            return report;
        }
    };
    match templates::expected(cert.kind, &cert.payload) {
        Err(e) => report.errors.push(format!("layout: {e}")),
        Ok(expected) => {
            if let Some(e) = layout_mismatch(&expected, &cert.equations) {
                report.errors.push(format!("layout: {e}"));
            }
        }
    }
    for fam in &cert.equations {
        let outcome = ctx.check(fam);
        if outcome.checked == 0 && outcome.failure.is_none() {
            report
                .warnings
                .push(format!("family `{}` has an empty domain", outcome.name));
        }
        report.families.push(outcome);
    }
    report
}

fn layout_mismatch(expected: &[Family], actual: &[Family]) -> Option<String> {
    for (i, (e, a)) in expected.iter().zip(actual).enumerate() {
        if !e.same_shape(a) {
            return Some(format!(
                "family {} is `{}`, expected `{}`",
                i + 1,
                a.name(),
                e.name()
            ));
        }
    }
    match expected.len().cmp(&actual.len()) {
        std::cmp::Ordering::Less => Some(format!(
            "{} families beyond the expected {}",
            actual.len() - expected.len(),
            expected.len()
        )),
        std::cmp::Ordering::Greater => Some(format!("missing family `{}`", expected[actual.len()].name())),
        std::cmp::Ordering::Equal => None,
    }
}

type Check<T> = std::result::Result<T, String>;

struct Group {
    degree: usize,
    gens: Vec<Permutation>,
    elements: Option<Vec<Permutation>>,
    chain: OnceCell<StabChain>,
}

impl Group {
    fn chain(&self) -> &StabChain {
        self.chain.get_or_init(|| StabChain::build(self.degree, &self.gens))
    }
}

struct Map {
    domain: String,
    codomain: String,
    images: Vec<Permutation>,
    /// `Err` when some image lies outside the codomain.
    graph: OnceCell<Check<StabChain>>,
}

struct Context {
    groups: BTreeMap<String, Group>,
    perms: BTreeMap<String, Permutation>,
    maps: BTreeMap<String, Map>,
}

fn parse_perm(text: &str, degree: usize) -> Check<Permutation> {
    parse_cycles(text, degree).map_err(|e| format!("`{text}`: {e}"))
}

impl Context {
    fn build(payload: &Payload) -> Check<Context> {
        let mut groups = BTreeMap::new();
        for (name, data) in &payload.groups {
            groups.insert(name.clone(), build_group(name, data)?);
        }
        let mut perms = BTreeMap::new();
        for (name, data) in &payload.perms {
            perms.insert(name.clone(), parse_perm(&data.cycles, data.degree)?);
        }
        let mut maps = BTreeMap::new();
        for (name, data) in &payload.maps {
            let dom = groups
                .get(&data.domain)
                .ok_or_else(|| format!("map `{name}` has unknown domain `{}`", data.domain))?;
            let cod = groups
                .get(&data.codomain)
                .ok_or_else(|| format!("map `{name}` has unknown codomain `{}`", data.codomain))?;
            if data.images.len() != dom.gens.len() {
                return Err(format!(
                    "map `{name}` lists {} images for {} generators",
                    data.images.len(),
                    dom.gens.len()
                ));
            }
            let images = data
                .images
                .iter()
                .map(|t| parse_perm(t, cod.degree))
                .collect::<Check<Vec<_>>>()?;
            maps.insert(
                name.clone(),
                Map {
                    domain: data.domain.clone(),
                    codomain: data.codomain.clone(),
                    images,
                    graph: OnceCell::new(),
                },
            );
        }
        Ok(Context { groups, perms, maps })
    }

    fn group(&self, name: &str) -> Check<&Group> {
        self.groups.get(name).ok_or_else(|| format!("unknown group `{name}`"))
    }

    fn map(&self, name: &str) -> Check<&Map> {
        self.maps.get(name).ok_or_else(|| format!("unknown map `{name}`"))
    }

    fn graph<'a>(&self, name: &str, m: &'a Map) -> Check<&'a StabChain> {
        let dom = self.group(&m.domain)?;
        let cod = self.group(&m.codomain)?;
        m.graph
            .get_or_init(|| {
                if let Some(i) = m.images.iter().position(|h| !cod.chain().contains(h)) {
                    return Err(format!("image {} of {name} is not in {}", i + 1, m.codomain));
                }
                let diag: Vec<Permutation> = dom
                    .gens
                    .iter()
                    .zip(&m.images)
                    .map(|(g, h)| Permutation::direct_sum(&[g, h]))
                    .collect();
                Ok(StabChain::build_general(dom.degree + cod.degree, &diag))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn is_hom(&self, name: &str, m: &Map) -> Check<bool> {
        let dom = self.group(&m.domain)?;
        match self.graph(name, m) {
            Ok(g) => Ok(g.order() == dom.chain().order()),
            Err(_) => Ok(false),
        }
    }

    fn apply(&self, name: &str, x: &Permutation) -> Check<Permutation> {
        let m = self.map(name)?;
        let dom = self.group(&m.domain)?;
        let cod = self.group(&m.codomain)?;
        if x.degree() != dom.degree {
            return Err(format!("{name} applied to a permutation of degree {}", x.degree()));
        }
        let lifted = Permutation::direct_sum(&[x, &Permutation::identity(cod.degree)]);
        let residue = self
            .graph(name, m)?
            .residue(&lifted)
            .ok_or_else(|| format!("{name} has a degenerate graph"))?;
        let left = residue.block(0, dom.degree);
        if !left.is_some_and(|p| p.is_identity()) {
            return Err(format!("{name} applied outside its domain or is not a homomorphism"));
        }
        let right = residue
            .block(dom.degree, cod.degree)
            .ok_or_else(|| format!("{name} has an inconsistent graph"))?;
        Ok(right.inverse())
    }

    fn eval(&self, e: &Expr, env: &HashMap<&str, Permutation>) -> Check<Permutation> {
        Ok(match e {
            Expr::Name(n) => match env.get(n.as_str()) {
                Some(p) => p.clone(),
                None => self
                    .perms
                    .get(n)
                    .cloned()
                    .ok_or_else(|| format!("unknown name `{n}`"))?,
            },
            Expr::Apply(m, x) => self.apply(m, &self.eval(x, env)?)?,
            Expr::Mul(a, b) => {
                let (a, b) = (self.eval(a, env)?, self.eval(b, env)?);
                a.compose(&b).map_err(|e| e.to_string())?
            }
            Expr::Pow(a, k) => self.eval(a, env)?.pow(*k),
            Expr::Conj(a, h) => {
                let (a, h) = (self.eval(a, env)?, self.eval(h, env)?);
                if a.degree() != h.degree() {
                    return Err(format!("conjugating degree {} by degree {}", a.degree(), h.degree()));
                }
                a.conjugate_by(&h)
            }
            Expr::Blocks(parts) => {
                let ps = parts
                    .iter()
                    .map(|p| self.eval(p, env))
                    .collect::<Check<Vec<_>>>()?;
                Permutation::direct_sum(&ps.iter().collect::<Vec<_>>())
            }
            Expr::Id(d) => Permutation::identity(*d),
        })
    }

    fn domain(&self, b: &Binding) -> Check<Vec<Permutation>> {
        if let Some(g) = b.domain.strip_prefix("gens:") {
            return Ok(self.group(g)?.gens.clone());
        }
        self.group(&b.domain)?
            .elements
            .clone()
            .ok_or_else(|| format!("group `{}` carries no element list", b.domain))
    }

    /// Runs `f` on every assignment of `over`, returning the count.
    fn for_each(
        &self,
        over: &[Binding],
        mut f: impl FnMut(&HashMap<&str, Permutation>) -> Check<()>,
    ) -> Check<usize> {
        let domains = over.iter().map(|b| self.domain(b)).collect::<Check<Vec<_>>>()?;
        let mut seen = HashSet::new();
        for b in over {
            if !seen.insert(b.var.as_str()) || self.perms.contains_key(&b.var) {
                return Err(format!("variable `{}` is ambiguous", b.var));
            }
        }
        if domains.iter().any(|d| d.is_empty()) {
            return Ok(0);
        }
        let mut idx = vec![0usize; over.len()];
        let mut count = 0;
        loop {
            let env: HashMap<&str, Permutation> = over
                .iter()
                .zip(&idx)
                .zip(&domains)
                .map(|((b, &i), d)| (b.var.as_str(), d[i].clone()))
                .collect();
            f(&env).map_err(|e| {
                let at: Vec<String> = env.iter().map(|(k, v)| format!("{k} = {v}")).collect();
                if at.is_empty() {
                    e
                } else {
                    format!("{e} at {}", at.join(", "))
                }
            })?;
            count += 1;
            let mut k = over.len();
            loop {
                if k == 0 {
                    return Ok(count);
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < domains[k].len() {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    fn check(&self, fam: &Family) -> FamilyOutcome {
        let mut checked = 0;
        let result = self.run(fam, &mut checked);
        FamilyOutcome {
            name: fam.name().to_string(),
            source: fam.source().to_string(),
            checked,
            failure: result.err(),
        }
    }

    fn run(&self, fam: &Family, checked: &mut usize) -> Check<()> {
        match fam {
            Family::Eq { over, lhs, rhs, .. } => {
                let (l, r) = (parse_expr(lhs)?, parse_expr(rhs)?);
                *checked = self.for_each(over, |env| {
                    let (x, y) = (self.eval(&l, env)?, self.eval(&r, env)?);
                    if x == y {
                        Ok(())
                    } else {
                        Err(format!("{lhs} = {x} but {rhs} = {y}"))
                    }
                })?;
            }
            Family::Member { over, expr, group, .. } => {
                let e = parse_expr(expr)?;
                let g = self.group(group)?;
                *checked = self.for_each(over, |env| {
                    let x = self.eval(&e, env)?;
                    if x.degree() == g.degree && g.chain().contains(&x) {
                        Ok(())
                    } else {
                        Err(format!("{expr} = {x} is not in {group}"))
                    }
                })?;
            }
            Family::Hom { map, .. } => {
                *checked = 1;
                if !self.is_hom(map, self.map(map)?)? {
                    return Err(format!("{map} does not define a homomorphism into its codomain"));
                }
            }
            Family::Injective { map, .. } => {
                *checked = 1;
                let m = self.map(map)?;
                if !self.is_hom(map, m)? {
                    return Err(format!("{map} is not a homomorphism"));
                }
                let dom = self.group(&m.domain)?;
                let cod = self.group(&m.codomain)?;
                let image = StabChain::build(cod.degree, &m.images);
                if image.order() != dom.chain().order() {
                    return Err(format!("{map} has a nontrivial kernel"));
                }
            }
            Family::Order { group, value, .. } => {
                *checked = 1;
                let actual = self.group(group)?.chain().order().to_string();
                if &actual != value {
                    return Err(format!("{group} has order {actual}, not {value}"));
                }
            }
            Family::Degree { group, value, .. } => {
                *checked = 1;
                let actual = self.group(group)?.degree;
                if actual != *value {
                    return Err(format!("{group} has degree {actual}, not {value}"));
                }
            }
        }
        Ok(())
    }
}

fn build_group(name: &str, data: &GroupData) -> Check<Group> {
    if data.degree == 0 {
        return Err(format!("group `{name}` has degree 0"));
    }
    let gens = data
        .generators
        .iter()
        .map(|t| parse_perm(t, data.degree))
        .collect::<Check<Vec<_>>>()?;
    let group = Group {
        degree: data.degree,
        gens,
        elements: None,
        chain: OnceCell::new(),
    };
    let Some(tree) = &data.elements else {
        return Ok(group);
    };
    if (tree.len() + 1).saturating_mul(data.degree) > ELEMENT_POINT_BUDGET {
        return Err(format!("element list of `{name}` is too large"));
    }
    let mut elements = vec![Permutation::identity(data.degree)];
    let mut seen: HashSet<Permutation> = elements.iter().cloned().collect();
    for (i, &[p, j]) in tree.iter().enumerate() {
        if p > i || j >= group.gens.len() {
            return Err(format!("element {} of `{name}` has a bad tree entry [{p}, {j}]", i + 1));
        }
        let x = elements[p].compose(&group.gens[j]).map_err(|e| e.to_string())?;
        if !seen.insert(x.clone()) {
            return Err(format!("element {} of `{name}` repeats an earlier element", i + 1));
        }
        elements.push(x);
    }
    // a finite set holding the identity and closed under the generators is the group
    for x in &elements {
        for g in &group.gens {
            if !seen.contains(&x.mul_unchecked(g)) {
                return Err(format!("the listed elements of `{name}` are not closed under its generators"));
            }
        }
    }
    Ok(Group {
        elements: Some(elements),
        ..group
    })
}
