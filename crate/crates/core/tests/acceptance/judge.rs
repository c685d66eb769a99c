//! A deliberately naive second opinion on certificate validity.
//!
//! Every group is enumerated by breadth-first closure, every map is
//! tabulated element by element, and every quantifier ranges over whole
//! groups. Nothing here touches stabilizer chains or the verifier.

use std::collections::{HashMap, HashSet, VecDeque};

use hall_forge::certificate::{expected, parse_expr, Certificate, Expr, Family, Payload};
use hall_forge::{parse_cycles, Permutation};

const CLOSURE_LIMIT: usize = 100_000;

struct Group {
    degree: usize,
    elements: Vec<Permutation>,
    set: HashSet<Permutation>,
}

struct Map {
    domain: String,
    /// `None` when the images do not define a homomorphism into the codomain.
    table: Option<HashMap<Permutation, Permutation>>,
}

struct World {
    groups: HashMap<String, Group>,
    perms: HashMap<String, Permutation>,
    maps: HashMap<String, Map>,
}

type Verdict = Result<(), String>;

fn closure(degree: usize, gens: &[Permutation]) -> Result<Vec<Permutation>, String> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g).map_err(|e| e.to_string())?;
            if seen.insert(y.clone()) {
                if out.len() >= CLOSURE_LIMIT {
                    return Err("group too large for the judge".into());
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

fn build_group(data: &hall_forge::certificate::GroupData) -> Result<Group, String> {
    let gens = data
        .generators
        .iter()
        .map(|c| parse_cycles(c, data.degree).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let elements = closure(data.degree, &gens)?;
    let set: HashSet<Permutation> = elements.iter().cloned().collect();
    if let Some(tree) = &data.elements {
        let mut listed = vec![Permutation::identity(data.degree)];
        for (i, &[parent, gen]) in tree.iter().enumerate() {
            if parent > i || gen >= gens.len() {
                return Err("element tree refers forward or to a missing generator".into());
            }
            listed.push(listed[parent].compose(&gens[gen]).map_err(|e| e.to_string())?);
        }
        let listed_set: HashSet<&Permutation> = listed.iter().collect();
        if listed_set.len() != listed.len() || listed.len() != set.len() || !listed.iter().all(|x| set.contains(x)) {
            return Err("listed elements are not exactly the group".into());
        }
    }
    if let Some(order) = &data.order {
        if order.parse::<usize>().ok() != Some(set.len()) {
            return Err(format!("claimed order {order}, actual {}", set.len()));
        }
    }
    Ok(Group {
        degree: data.degree,
        elements,
        set,
    })
}

fn tabulate(domain: &Group, codomain: &Group, gens: &[Permutation], images: &[Permutation]) -> Option<HashMap<Permutation, Permutation>> {
    if gens.len() != images.len() || images.iter().any(|y| !codomain.set.contains(y)) {
        return None;
    }
    let mut table = HashMap::from([(Permutation::identity(domain.degree), Permutation::identity(codomain.degree))]);
    let mut queue = VecDeque::from([Permutation::identity(domain.degree)]);
    while let Some(x) = queue.pop_front() {
        let fx = table[&x].clone();
        for (g, y) in gens.iter().zip(images) {
            let (xg, fxy) = (x.compose(g).ok()?, fx.compose(y).ok()?);
            match table.get(&xg) {
                Some(prev) if *prev != fxy => return None,
                Some(_) => {}
                None => {
                    table.insert(xg.clone(), fxy);
                    queue.push_back(xg);
                }
            }
        }
    }
    Some(table)
}

fn build_world(p: &Payload) -> Result<World, String> {
    let mut groups = HashMap::new();
    let mut gens_of = HashMap::new();
    for (name, data) in &p.groups {
        groups.insert(name.clone(), build_group(data)?);
        let gens = data
            .generators
            .iter()
            .map(|c| parse_cycles(c, data.degree).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        gens_of.insert(name.clone(), gens);
    }
    let perms = p
        .perms
        .iter()
        .map(|(n, d)| Ok((n.clone(), parse_cycles(&d.cycles, d.degree).map_err(|e| e.to_string())?)))
        .collect::<Result<HashMap<_, _>, String>>()?;
    let mut maps = HashMap::new();
    for (name, m) in &p.maps {
        let (Some(dom), Some(cod)) = (groups.get(&m.domain), groups.get(&m.codomain)) else {
            return Err(format!("map {name} names a missing group"));
        };
        let images = m
            .images
            .iter()
            .map(|c| parse_cycles(c, cod.degree).map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        let table = tabulate(dom, cod, &gens_of[&m.domain], &images);
        maps.insert(
            name.clone(),
            Map {
                domain: m.domain.clone(),
                table,
            },
        );
    }
    Ok(World { groups, perms, maps })
}

impl World {
    fn eval(&self, e: &Expr, env: &HashMap<String, Permutation>) -> Result<Permutation, String> {
        Ok(match e {
            Expr::Name(n) => env
                .get(n)
                .or_else(|| self.perms.get(n))
                .cloned()
                .ok_or_else(|| format!("unknown name {n}"))?,
            Expr::Apply(m, x) => {
                let x = self.eval(x, env)?;
                let map = self.maps.get(m).ok_or_else(|| format!("unknown map {m}"))?;
                let table = map.table.as_ref().ok_or_else(|| format!("{m} is not a homomorphism"))?;
                table
                    .get(&x)
                    .cloned()
                    .ok_or_else(|| format!("{x} is outside the domain {} of {m}", map.domain))?
            }
            Expr::Mul(a, b) => self
                .eval(a, env)?
                .compose(&self.eval(b, env)?)
                .map_err(|e| e.to_string())?,
            Expr::Pow(a, k) => self.eval(a, env)?.pow(*k),
            Expr::Conj(a, h) => {
                let (a, h) = (self.eval(a, env)?, self.eval(h, env)?);
                if a.degree() != h.degree() {
                    return Err("degree mismatch in conjugation".into());
                }
                a.conjugate_by(&h)
            }
            Expr::Blocks(parts) => {
                let parts = parts.iter().map(|p| self.eval(p, env)).collect::<Result<Vec<_>, _>>()?;
                Permutation::direct_sum(&parts.iter().collect::<Vec<_>>())
            }
            Expr::Id(n) => Permutation::identity(*n),
        })
    }

    fn group(&self, name: &str) -> Result<&Group, String> {
        self.groups.get(name).ok_or_else(|| format!("unknown group {name}"))
    }

    /// Calls `f` on every assignment, each variable ranging over its whole group.
    fn for_all(
        &self,
        over: &[hall_forge::certificate::Binding],
        f: &mut dyn FnMut(&HashMap<String, Permutation>) -> Verdict,
    ) -> Verdict {
        let ranges = over
            .iter()
            .map(|b| {
                let g = b.domain.strip_prefix("gens:").unwrap_or(&b.domain);
                Ok((b.var.clone(), &self.group(g)?.elements))
            })
            .collect::<Result<Vec<_>, String>>()?;
        let mut env = HashMap::new();
        fn go(
            ranges: &[(String, &Vec<Permutation>)],
            env: &mut HashMap<String, Permutation>,
            f: &mut dyn FnMut(&HashMap<String, Permutation>) -> Verdict,
        ) -> Verdict {
            match ranges.split_first() {
                None => f(env),
                Some(((var, elems), rest)) => {
                    for x in elems.iter() {
                        env.insert(var.clone(), x.clone());
                        go(rest, env, f)?;
                    }
                    Ok(())
                }
            }
        }
        go(&ranges, &mut env, f)
    }

    fn holds(&self, fam: &Family) -> Verdict {
        match fam {
            Family::Eq { over, lhs, rhs, name, .. } => {
                let (l, r) = (parse_expr(lhs)?, parse_expr(rhs)?);
                self.for_all(over, &mut |env| {
                    if self.eval(&l, env)? == self.eval(&r, env)? {
                        Ok(())
                    } else {
                        Err(format!("{name} fails"))
                    }
                })
            }
            Family::Member { over, expr, group, name, .. } => {
                let e = parse_expr(expr)?;
                let g = self.group(group)?;
                self.for_all(over, &mut |env| {
                    if g.set.contains(&self.eval(&e, env)?) {
                        Ok(())
                    } else {
                        Err(format!("{name} fails"))
                    }
                })
            }
            Family::Hom { map, .. } => match self.maps.get(map) {
                Some(Map { table: Some(_), .. }) => Ok(()),
                _ => Err(format!("{map} is not a homomorphism")),
            },
            Family::Injective { map, .. } => {
                let m = self.maps.get(map).ok_or_else(|| format!("unknown map {map}"))?;
                let t = m.table.as_ref().ok_or_else(|| format!("{map} is not a homomorphism"))?;
                let images: HashSet<&Permutation> = t.values().collect();
                if images.len() == self.group(&m.domain)?.set.len() {
                    Ok(())
                } else {
                    Err(format!("{map} is not injective"))
                }
            }
            Family::Order { group, value, .. } => {
                let n = self.group(group)?.set.len();
                if value.parse::<usize>().ok() == Some(n) {
                    Ok(())
                } else {
                    Err(format!("|{group}| = {n}, not {value}"))
                }
            }
            Family::Degree { group, value, .. } => {
                if self.group(group)?.degree == *value {
                    Ok(())
                } else {
                    Err(format!("{group} does not have degree {value}"))
                }
            }
        }
    }
}

/// `Ok` when the payload really establishes every claim its kind makes.
pub fn judge(c: &Certificate) -> Verdict {
    let families = expected(c.kind, &c.payload)?;
    let world = build_world(&c.payload)?;
    families.iter().try_for_each(|f| world.holds(f))
}
