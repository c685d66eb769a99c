//! Acceptance criteria. Each prints one PASS/FAIL line with its runtime.

mod judge;

use std::collections::{HashMap, HashSet, VecDeque};
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hall_forge::certificate::{self, verify_certificate, Certificate, Inputs, Kind, Payload};
use hall_forge::{
    all_subgroups, amalgamate, catalog, catalog_names, commuting_extension, equivariant_amalgamate, find_isomorphism,
    generic_power_tower, hall_tower, hrushovski_extend, parse_cycles, root_extension, stage_conjugacy_check, Bounds,
    Elem, EquivariantEmbedding, EquivariantSystem, GroupHom, PairOutcome, PartialIso, Permutation, StabChain,
    TableGroup,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * k)
}

fn cyc(n: usize) -> Arc<TableGroup> {
    Arc::new(TableGroup::cyclic(n))
}

fn inversion(g: &Arc<TableGroup>) -> GroupHom {
    GroupHom::from_map(g, g, g.elements().map(|x| g.inv(x)).collect()).unwrap()
}

/// Right regular image computed straight from the multiplication table.
fn regular(t: &TableGroup, x: Elem) -> Permutation {
    let images: Vec<usize> = t.elements().map(|y| t.mul(y, x) as usize + 1).collect();
    Permutation::from_one_based(&images).unwrap()
}

fn closure_size(degree: usize, gens: &[Permutation]) -> usize {
    let id = Permutation::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g).unwrap();
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

/// Every permutation of `{1..n}` (Heap's algorithm).
fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut a: Vec<u32> = (0..n as u32).collect();
    let mut out = vec![Permutation::from_images(a.clone()).unwrap()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(Permutation::from_images(a.clone()).unwrap());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

fn passes(c: &Certificate) -> Result<usize, String> {
    let report = verify_certificate(&c.emit()).map_err(err)?;
    ensure!(report.passed(), "{} certificate fails:\n{report}", c.kind);
    Ok(report.families.len())
}

fn sym_orders() -> Outcome {
    for n in 1..=10usize {
        let transposition = match n {
            1 => Permutation::identity(1),
            _ => Permutation::cycle(n, &[1, 2]).unwrap(),
        };
        let gens = [transposition, Permutation::cycle(n, &(1..=n).collect::<Vec<_>>()).unwrap()];
        let chain = StabChain::build_general(n, &gens);
        ensure!(!chain.is_symmetric(), "Sym({n}) took the symmetric shortcut");
        ensure!(chain.order() == factorial(n as u32), "|Sym({n})| = {} via the chain", chain.order());
        if n <= 7 {
            let count = closure_size(n, &gens);
            ensure!(BigUint::from(count) == chain.order(), "Sym({n}) enumerates {count} elements");
        }
    }
    Ok("chain orders equal n! for n ≤ 10, enumeration agrees for n ≤ 7".into())
}

/// Every isomorphism `k → k2`, as generator images in `k2`.
fn isomorphisms(k: &Arc<TableGroup>, k2: &Arc<TableGroup>) -> Vec<GroupHom> {
    let mut out = Vec::new();
    let r = k.gens().len();
    let total = k2.order().pow(r as u32);
    for code in 0..total {
        let mut c = code;
        let images: Vec<Elem> = (0..r)
            .map(|_| {
                let e = (c % k2.order()) as Elem;
                c /= k2.order();
                e
            })
            .collect();
        if let Ok(h) = GroupHom::new(k, k2, images) {
            if h.is_injective() {
                out.push(h);
            }
        }
    }
    out
}

fn hrushovski_suite() -> Outcome {
    let bounds = Bounds::default();
    let mut syms: HashMap<usize, Vec<Permutation>> = HashMap::new();
    let (mut groups, mut isos) = (0, 0);
    for name in catalog_names() {
        let named = catalog(&name).map_err(err)?;
        if named.perm_group().order() > BigUint::from(8u32) {
            continue;
        }
        groups += 1;
        let t = named.table(100).map_err(err)?;
        let n = t.order();
        let rho: Vec<Permutation> = t.elements().map(|x| regular(&t, x)).collect();
        let sym = syms.entry(n).or_insert_with(|| all_permutations(n));
        let subs = all_subgroups(&t).map_err(err)?;
        for k in &subs {
            for k2 in subs.iter().filter(|k2| k2.order() == k.order()) {
                let (kp, k2p) = (k.parent().unwrap().1, k2.parent().unwrap().1);
                for h in isomorphisms(k, k2) {
                    let dom: Vec<Elem> = k.gens().iter().map(|&x| kp[x as usize]).collect();
                    let img: Vec<Elem> = k.gens().iter().map(|&x| k2p[h.apply(x) as usize]).collect();
                    let psi = PartialIso::new(&t, &dom, &img, 1000).map_err(err)?;
                    let ext = hrushovski_extend(&t, &[psi], &bounds).map_err(err)?;
                    let valid = |c: &Permutation| {
                        dom.iter()
                            .zip(&img)
                            .all(|(&d, &e)| rho[d as usize].conjugate_by(c) == rho[e as usize])
                    };
                    let found = sym.iter().filter(|c| valid(c)).count();
                    ensure!(found > 0, "{name}: no conjugator exists in Sym({n})");
                    let h = &ext.conjugators[0];
                    ensure!(h.degree() == n && valid(h), "{name}: constructed conjugator {h} is not valid");
                    passes(&certificate::extension_certificate(&ext, Inputs::new(), &bounds))?;
                    isos += 1;
                }
            }
        }
    }
    Ok(format!("{groups} groups, {isos} partial isomorphisms, all conjugators confirmed"))
}

fn random_amalgams() -> Outcome {
    let bounds = Bounds::default();
    let pool: Vec<(String, Arc<TableGroup>, Vec<Arc<TableGroup>>)> = catalog_names()
        .into_iter()
        .filter_map(|name| {
            let t = catalog(&name).ok()?.table(100).ok()?;
            (t.order() <= 30).then(|| {
                let subs = all_subgroups(&t).unwrap();
                (name, t, subs)
            })
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4841_4c4c);
    let (mut done, mut max_degree, mut nontrivial) = (0, 0, 0);
    for _ in 0..100_000 {
        if done == 50 {
            break;
        }
        let (bn, b, subs) = pool.choose(&mut rng).unwrap();
        let (cn, c, _) = pool.choose(&mut rng).unwrap();
        if b.order() * c.order() > 60 {
            continue;
        }
        // prefer a nontrivial common subgroup when B has one
        let proper: Vec<&Arc<TableGroup>> = subs.iter().filter(|s| s.order() > 1).collect();
        let a = if proper.is_empty() || rng.gen_bool(0.02) {
            subs.choose(&mut rng).unwrap()
        } else {
            *proper.choose(&mut rng).unwrap()
        };
        let g = (0..200).find_map(|_| {
            let imgs = a.gens().iter().map(|_| rng.gen_range(0..c.order()) as Elem).collect();
            GroupHom::new(a, c, imgs).ok().filter(|h| h.is_injective())
        });
        let Some(g) = g else { continue };
        let f = GroupHom::inclusion(a).map_err(err)?;
        let am = amalgamate(&f, &g, &bounds).map_err(|e| format!("{bn}, {cn}: {e}"))?;
        for x in a.elements() {
            ensure!(am.r(f.apply(x)) == am.s(g.apply(x)), "{bn}, {cn}: r∘f ≠ s∘g at {x}");
        }
        let rs: HashSet<Permutation> = b.elements().map(|y| am.r(y)).collect();
        let ss: HashSet<Permutation> = c.elements().map(|y| am.s(y)).collect();
        ensure!(rs.len() == b.order() && ss.len() == c.order(), "{bn}, {cn}: r or s not injective");
        ensure!(
            am.d.order() >= BigUint::from(b.order().max(c.order())),
            "{bn}, {cn}: amalgam smaller than a factor"
        );
        passes(&certificate::amalgam_certificate(&am, Inputs::new(), &bounds))?;
        max_degree = max_degree.max(am.degree());
        nontrivial += usize::from(a.order() > 1);
        done += 1;
    }
    ensure!(done == 50, "only {done} instances generated");
    Ok(format!("50 instances ({nontrivial} over a nontrivial A), largest degree {max_degree}"))
}

fn equivariant_instance() -> Outcome {
    let bounds = Bounds::default();
    let s3 = catalog("S3").map_err(err)?.table(100).map_err(err)?;
    let t = s3.gens()[0];
    let conj = GroupHom::from_map(&s3, &s3, s3.elements().map(|x| s3.conj(x, t)).collect()).map_err(err)?;
    let c3 = Arc::new(TableGroup::subgroup_generated(&s3, &[s3.gens()[1]], 100).map_err(err)?);
    let a = EquivariantSystem::new(&c3, vec![inversion(&c3)]).map_err(err)?;
    let b = EquivariantSystem::new(&s3, vec![conj]).map_err(err)?;
    let c6 = cyc(6);
    let c = EquivariantSystem::new(&c6, vec![inversion(&c6)]).map_err(err)?;
    let f = EquivariantEmbedding::new(GroupHom::inclusion(&c3).map_err(err)?, &a, &b).map_err(err)?;
    let g = EquivariantEmbedding::new(GroupHom::new(&c3, &c6, vec![2]).map_err(err)?, &a, &c).map_err(err)?;
    let cert = equivariant_amalgamate(&f, &g, &bounds).map_err(err)?;
    let orders = (cert.w.w.order(), cert.l.order(), cert.m.order(), cert.n.order());
    ensure!(orders == (2, 6, 12, 12), "|W|, |L|, |M|, |N| = {orders:?}");
    let c = certificate::equivariant_certificate(&cert, Inputs::new(), &bounds);
    let families = passes(&c)?;
    let sources: HashSet<&str> = c.equations.iter().map(|f| f.source()).collect();

    // no distinguished automorphisms: the construction is plain amalgamation
    let c2 = cyc(2);
    let (c4, c6) = (cyc(4), cyc(6));
    let sys = |g: &Arc<TableGroup>| EquivariantSystem::with_identities(g, 0);
    let (f0, g0) = (
        GroupHom::new(&c2, &c4, vec![2]).map_err(err)?,
        GroupHom::new(&c2, &c6, vec![3]).map_err(err)?,
    );
    let ef = EquivariantEmbedding::new(f0.clone(), &sys(&c2), &sys(&c4)).map_err(err)?;
    let eg = EquivariantEmbedding::new(g0.clone(), &sys(&c2), &sys(&c6)).map_err(err)?;
    let zero = equivariant_amalgamate(&ef, &eg, &bounds).map_err(err)?;
    let plain = amalgamate(&f0, &g0, &bounds).map_err(err)?;
    ensure!(zero.w.w.order() == 1, "W is not trivial for n = 0");
    ensure!(zero.d.order() == plain.d.order(), "n = 0 amalgam has order {} vs {}", zero.d.order(), plain.d.order());
    for x in c4.elements() {
        ensure!(zero.s(x) == plain.r(x), "n = 0: s differs from plain r at {x}");
    }
    for x in c6.elements() {
        ensure!(zero.t(x) == plain.s(x), "n = 0: t differs from plain s at {x}");
    }
    passes(&certificate::equivariant_certificate(&zero, Inputs::new(), &bounds))?;
    Ok(format!(
        "|W|=2 |L|=6 |M|=|N|=12, {families} families from {} sources pass; n = 0 matches plain amalgamation",
        sources.len()
    ))
}

fn roots_suite() -> Outcome {
    let bounds = Bounds::default();
    let whole = |g: &Arc<TableGroup>| Arc::new(TableGroup::subgroup_generated(g, g.gens(), 100).unwrap());
    // (name, B, A, α, β for the commuting case, β for exponent n)
    type Instance = (&'static str, Arc<TableGroup>, Arc<TableGroup>, GroupHom, GroupHom, Box<dyn Fn(usize) -> GroupHom>);
    let mut instances: Vec<Instance> = Vec::new();
    let c2 = cyc(2);
    let a2 = whole(&c2);
    instances.push((
        "C2 identities",
        c2.clone(),
        a2.clone(),
        GroupHom::identity(&a2),
        GroupHom::identity(&c2),
        Box::new(move |_| GroupHom::identity(&c2)),
    ));
    let c3 = cyc(3);
    let a3 = whole(&c3);
    let c3b = c3.clone();
    instances.push((
        "C3 inversions",
        c3.clone(),
        a3.clone(),
        inversion(&a3),
        inversion(&c3),
        Box::new(move |n| inversion(&c3b).power(n as i64)),
    ));
    let c4 = cyc(4);
    let a4 = Arc::new(TableGroup::subgroup_generated(&c4, &[2], 100).unwrap());
    let c4b = c4.clone();
    instances.push((
        "C2 in C4",
        c4.clone(),
        a4.clone(),
        GroupHom::identity(&a4),
        inversion(&c4),
        Box::new(move |_| inversion(&c4b)),
    ));
    let mut certs = 0;
    for (name, b, a, alpha, beta, beta_n) in &instances {
        let cc = commuting_extension(b, a, alpha, beta, &bounds).map_err(|e| format!("{name}: {e}"))?;
        ensure!(cc.f_elem.commutes_with(&cc.g_elem), "{name}: fg ≠ gf");
        for x in a.elements() {
            let e = cc.e(cc.a_in_b(x));
            ensure!(e.conjugate_by(&cc.f_elem) == cc.e(cc.a_in_b(alpha.apply(x))), "{name}: f contract at {x}");
        }
        for y in b.elements() {
            ensure!(cc.e(y).conjugate_by(&cc.g_elem) == cc.e(beta.apply(y)), "{name}: g contract at {y}");
        }
        passes(&certificate::commuting_certificate(&cc, Inputs::new(), &bounds))?;
        certs += 1;
        for n in 1..=3usize {
            let beta = beta_n(n);
            let root = root_extension(b, a, alpha, &beta, n, &bounds).map_err(|e| format!("{name}, n={n}: {e}"))?;
            let inner = &root.inner;
            for x in a.elements() {
                let lhs = root.gamma(&root.phi(inner.a_in_b(x)));
                ensure!(lhs == root.phi(inner.a_in_b(alpha.apply(x))), "{name}, n={n}: γ∘φ ≠ φ∘α at {x}");
            }
            for y in b.elements() {
                let lhs = root.gamma_pow(&root.phi(y), n as i64);
                ensure!(lhs == root.phi(beta.apply(y)), "{name}, n={n}: γⁿ∘φ ≠ φ∘β at {y}");
            }
            passes(&certificate::root_certificate(&root, Inputs::new(), &bounds))?;
            certs += 1;
        }
    }
    Ok(format!("{certs} certificates over 3 instances and n = 1, 2, 3"))
}

fn hall_suite() -> Outcome {
    let bounds = Bounds::default();
    let tower = hall_tower(3, &catalog("C3").map_err(err)?, &bounds).map_err(err)?;
    ensure!(tower.degrees() == [3, 3, 6, 720], "degrees {:?}", tower.degrees());
    let top = tower.orders()[3].clone();
    ensure!(top == factorial(720), "final order differs from 720!");

    let s3 = &tower.tables[1];
    ensure!(s3.order() == 6 && !s3.is_abelian(), "stage 1 is not S3");
    let subs = all_subgroups(s3).map_err(err)?;
    let mut expected = 0;
    for (i, k) in subs.iter().enumerate() {
        for k2 in &subs[i..] {
            expected += usize::from(find_isomorphism(k, k2).map_err(err)?.is_some());
        }
    }
    let report = stage_conjugacy_check(&tower, 1, None).map_err(err)?;
    ensure!(report.isomorphic_pairs() == expected, "{} of {expected} isomorphic pairs conjugated", report.isomorphic_pairs());
    for p in &report.pairs {
        if let PairOutcome::Conjugate { iso, conjugator } = &p.outcome {
            let (kd, kc) = (iso.domain(), iso.codomain());
            let (dp, cp) = (kd.parent().unwrap().1, kc.parent().unwrap().1);
            for &x in kd.gens() {
                let lhs = regular(s3, dp[x as usize]).conjugate_by(conjugator);
                ensure!(lhs == regular(s3, cp[iso.apply(x) as usize]), "pair conjugator fails");
            }
        }
    }
    let c = certificate::hall_certificate(&tower, Some(&report), Inputs::new(), &bounds);
    passes(&c)?;
    Ok(format!(
        "degrees [3, 3, 6, 720], order 720! ({} digits), {expected} isomorphic pairs conjugate in Sym(6)",
        top.to_string().len()
    ))
}

fn power_suite() -> Outcome {
    let bounds = Bounds::default().with_degree_cap(20_000);
    let c3 = cyc(3);
    let seed = EquivariantSystem::new(&c3, vec![inversion(&c3)]).map_err(err)?;
    let tower = generic_power_tower(2, 2, &seed, &bounds).map_err(err)?;
    ensure!(tower.stages.len() == 3, "{} stages", tower.stages.len());
    for (i, s) in tower.stages.iter().enumerate() {
        let g2 = s.g.pow(2);
        for x in s.a.generators() {
            ensure!(x.conjugate_by(&s.f) == x.conjugate_by(&g2), "stage {i}: f ≠ g² on {x}");
        }
        let Some(step) = &s.step else { continue };
        let prev = &tower.stages[i - 1];
        let emb = |x: &Permutation| step.embed(&step.iota(x)).map_err(err);
        for x in prev.a.generators() {
            ensure!(emb(x)?.conjugate_by(&s.g) == emb(&x.conjugate_by(&prev.g))?, "stage {i}: g does not extend");
            ensure!(emb(x)?.conjugate_by(&s.f) == emb(&x.conjugate_by(&prev.f))?, "stage {i}: f does not extend");
        }
    }
    let c = certificate::power_certificate(&tower, Inputs::new(), &bounds);
    passes(&c)?;
    let orders: Vec<String> = tower.stages.iter().map(|s| s.a.order().to_string()).collect();
    Ok(format!("stage orders [{}], every stage f = g², both extensions hold", orders.join(", ")))
}

enum Field {
    Degree(String),
    Gen(String, usize),
    Element(String, usize),
    Order(String),
    Perm(String),
    Domain(String),
    Codomain(String),
    Image(String, usize),
    Param(String),
}

fn fields(p: &Payload) -> Vec<Field> {
    let mut out = Vec::new();
    for (n, g) in &p.groups {
        out.push(Field::Degree(n.clone()));
        out.extend((0..g.generators.len()).map(|i| Field::Gen(n.clone(), i)));
        if let Some(e) = &g.elements {
            out.extend((0..e.len()).map(|i| Field::Element(n.clone(), i)));
        }
        if g.order.is_some() {
            out.push(Field::Order(n.clone()));
        }
    }
    for n in p.perms.keys() {
        out.push(Field::Perm(n.clone()));
    }
    for (n, m) in &p.maps {
        out.push(Field::Domain(n.clone()));
        out.push(Field::Codomain(n.clone()));
        out.extend((0..m.images.len()).map(|i| Field::Image(n.clone(), i)));
    }
    out.extend(p.params.keys().map(|n| Field::Param(n.clone())));
    out
}

fn scramble(text: &str, degree: usize, rng: &mut ChaCha8Rng) -> String {
    let p = parse_cycles(text, degree).unwrap_or_else(|_| Permutation::identity(degree));
    let q = match rng.gen_range(0..3) {
        0 if degree >= 2 => {
            let a = rng.gen_range(1..=degree);
            let b = (a % degree) + 1;
            p.compose(&Permutation::cycle(degree, &[a, b]).unwrap()).unwrap()
        }
        1 => {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            images.shuffle(rng);
            Permutation::from_images(images).unwrap()
        }
        _ => Permutation::identity(degree),
    };
    q.to_string()
}

fn bump(v: i64, rng: &mut ChaCha8Rng) -> i64 {
    if rng.gen_bool(0.5) {
        v + 1
    } else {
        v - 1
    }
}

fn mutate(c: &Certificate, rng: &mut ChaCha8Rng) -> Certificate {
    loop {
        let mut m = c.clone();
        let fs = fields(&m.payload);
        let p = &mut m.payload;
        let names: Vec<String> = p.groups.keys().cloned().collect();
        match fs.choose(rng).unwrap() {
            Field::Degree(n) => {
                let g = p.groups.get_mut(n).unwrap();
                g.degree = bump(g.degree as i64, rng).max(1) as usize;
            }
            Field::Gen(n, i) => {
                let g = p.groups.get_mut(n).unwrap();
                g.generators[*i] = scramble(&g.generators[*i], g.degree, rng);
            }
            Field::Element(n, i) => {
                let g = p.groups.get_mut(n).unwrap();
                let k = g.generators.len();
                let e = &mut g.elements.as_mut().unwrap()[*i];
                if rng.gen_bool(0.5) {
                    e[0] = rng.gen_range(0..=*i);
                } else {
                    e[1] = rng.gen_range(0..k.max(1));
                }
            }
            Field::Order(n) => {
                let o = p.groups.get_mut(n).unwrap().order.as_mut().unwrap();
                let v: i64 = o.parse().unwrap_or(1);
                *o = if rng.gen_bool(0.5) { (v * 2).to_string() } else { bump(v, rng).to_string() };
            }
            Field::Perm(n) => {
                let q = p.perms.get_mut(n).unwrap();
                q.cycles = scramble(&q.cycles, q.degree, rng);
            }
            Field::Domain(n) => p.maps.get_mut(n).unwrap().domain = names.choose(rng).unwrap().clone(),
            Field::Codomain(n) => p.maps.get_mut(n).unwrap().codomain = names.choose(rng).unwrap().clone(),
            Field::Image(n, i) => {
                let cod = p.maps[n].codomain.clone();
                let degree = p.groups[&cod].degree;
                let im = &mut p.maps.get_mut(n).unwrap().images[*i];
                *im = scramble(im, degree, rng);
            }
            Field::Param(n) => {
                let v = p.params.get_mut(n).unwrap();
                *v = bump(*v, rng);
            }
        }
        if m.payload != c.payload {
            return m;
        }
    }
}

fn fuzz_certificates() -> Result<Vec<Certificate>, String> {
    let b = Bounds::default();
    let i = Inputs::new;
    let c6 = cyc(6);
    let psi = PartialIso::new(&c6, &[2], &[4], 100).map_err(err)?;
    let swap = PartialIso::new(&c6, &[3], &[3], 100).map_err(err)?;
    let ext = hrushovski_extend(&c6, &[psi, swap], &b).map_err(err)?;
    let c2 = cyc(2);
    let am = amalgamate(
        &GroupHom::new(&c2, &cyc(4), vec![2]).map_err(err)?,
        &GroupHom::new(&c2, &cyc(6), vec![3]).map_err(err)?,
        &b,
    )
    .map_err(err)?;
    let s3 = catalog("S3").map_err(err)?.table(100).map_err(err)?;
    let t = s3.gens()[0];
    let conj = GroupHom::from_map(&s3, &s3, s3.elements().map(|x| s3.conj(x, t)).collect()).map_err(err)?;
    let sub3 = Arc::new(TableGroup::subgroup_generated(&s3, &[s3.gens()[1]], 100).map_err(err)?);
    let sa = EquivariantSystem::new(&sub3, vec![inversion(&sub3)]).map_err(err)?;
    let sb = EquivariantSystem::new(&s3, vec![conj]).map_err(err)?;
    let sc = EquivariantSystem::new(&c6, vec![inversion(&c6)]).map_err(err)?;
    let eq = equivariant_amalgamate(
        &EquivariantEmbedding::new(GroupHom::inclusion(&sub3).map_err(err)?, &sa, &sb).map_err(err)?,
        &EquivariantEmbedding::new(GroupHom::new(&sub3, &c6, vec![2]).map_err(err)?, &sa, &sc).map_err(err)?,
        &b,
    )
    .map_err(err)?;
    let c4 = cyc(4);
    let a4 = Arc::new(TableGroup::subgroup_generated(&c4, &[2], 100).map_err(err)?);
    let cc = commuting_extension(&c4, &a4, &GroupHom::identity(&a4), &inversion(&c4), &b).map_err(err)?;
    let c3 = cyc(3);
    let a3 = Arc::new(TableGroup::subgroup_generated(&c3, c3.gens(), 100).map_err(err)?);
    let root = root_extension(&c3, &a3, &inversion(&a3), &GroupHom::identity(&c3), 2, &b).map_err(err)?;
    let hall = hall_tower(2, &catalog("C3").map_err(err)?, &b).map_err(err)?;
    let report = stage_conjugacy_check(&hall, 1, None).map_err(err)?;
    let seed = EquivariantSystem::new(&c3, vec![inversion(&c3)]).map_err(err)?;
    let power = generic_power_tower(2, 1, &seed, &b).map_err(err)?;
    Ok(vec![
        certificate::extension_certificate(&ext, i(), &b),
        certificate::amalgam_certificate(&am, i(), &b),
        certificate::equivariant_certificate(&eq, i(), &b),
        certificate::commuting_certificate(&cc, i(), &b),
        certificate::root_certificate(&root, i(), &b),
        certificate::hall_certificate(&hall, Some(&report), i(), &b),
        certificate::power_certificate(&power, i(), &b),
    ])
}

fn robustness() -> Outcome {
    let certs = fuzz_certificates()?;
    let kinds: HashSet<Kind> = certs.iter().map(|c| c.kind).collect();
    ensure!(kinds.len() == Kind::ALL.len(), "not every kind is covered");
    let mut rng = ChaCha8Rng::seed_from_u64(0x6675_7a7a);
    let (mut rejected, mut benign) = (0, 0);
    for c in &certs {
        passes(c)?;
        judge::judge(c).map_err(|e| format!("judge rejects the genuine {} certificate: {e}", c.kind))?;
        for _ in 0..100 {
            let m = mutate(c, &mut rng);
            let accepted = verify_certificate(&m.emit()).map(|r| r.passed()).unwrap_or(false);
            if !accepted {
                rejected += 1;
                continue;
            }
            if let Err(why) = judge::judge(&m) {
                return Err(format!("false pass on a {} certificate: {why}", c.kind));
            }
            benign += 1;
        }
    }
    Ok(format!(
        "{} mutations over {} kinds: {rejected} rejected, {benign} accepted and confirmed valid, 0 false passes",
        100 * certs.len(),
        certs.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("permutation core", sym_orders, 5),
        ("partial isomorphism extension", hrushovski_suite, 60),
        ("amalgamation", random_amalgams, 60),
        ("equivariant amalgamation", equivariant_instance, 120),
        ("commuting extensions and roots", roots_suite, 60),
        ("symmetric tower", hall_suite, 120),
        ("power tower", power_suite, 120),
        ("certificate robustness", robustness, 600),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err(format!("exceeded the {limit} s limit")),
            r => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("criterion {} [{tag}] {name} ({:.2} s): {detail}", i + 1, elapsed.as_secs_f64());
        failed += usize::from(result.is_err());
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
