use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;

use hall_forge::{
    all_subgroups, amalgamate, catalog, commuting_extension, find_isomorphism, fiber_product, generic_power_tower,
    hall_tower, hrushovski_extend, orbit, root_extension, Bounds, Elem, EquivariantSystem, GroupHom, PartialIso,
    PermGroup, Permutation, TableGroup,
};

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn perm_gens(max_degree: usize) -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (1..=max_degree).prop_flat_map(|d| (Just(d), prop::collection::vec(perm(d), 1..4)))
}

fn closure(degree: usize, gens: &[Permutation]) -> HashSet<Permutation> {
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
    seen
}

fn cyc(n: usize) -> Arc<TableGroup> {
    Arc::new(TableGroup::cyclic(n))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `x ↦ x^u` on a cyclic group.
fn power_map(g: &Arc<TableGroup>, u: usize) -> GroupHom {
    let images = g.gens().iter().map(|&s| g.pow(s, u as i64)).collect();
    GroupHom::new(g, g, images).unwrap()
}

fn small_group() -> impl Strategy<Value = Arc<TableGroup>> {
    prop_oneof![
        (1usize..=12).prop_map(cyc),
        prop::sample::select(vec!["S3", "V4", "D4", "Q8", "D5", "A4"])
            .prop_map(|n| catalog(n).unwrap().table(100).unwrap()),
        (1usize..4, 1usize..4).prop_map(|(m, n)| Arc::new(TableGroup::direct_product(&cyc(m), &cyc(n), 100).unwrap())),
    ]
}

/// Number of orbits of `⟨gens⟩` on `{1..degree}`, checking each has size `size`.
fn orbits_of_size(degree: usize, gens: &[Permutation], size: usize) -> Option<usize> {
    let mut seen = vec![false; degree];
    let mut count = 0;
    for p in 1..=degree {
        if seen[p - 1] {
            continue;
        }
        let o = orbit(degree, gens, p).unwrap();
        if o.len() != size {
            return None;
        }
        for q in o {
            seen[q - 1] = true;
        }
        count += 1;
    }
    Some(count)
}

/// Smallest `k > 0` with `x^(g^k) = x` for every generator `x`.
fn action_order(g: &Permutation, gens: &[Permutation]) -> usize {
    let mut k = 1;
    let mut p = g.clone();
    while !gens.iter().all(|x| x.conjugate_by(&p) == *x) {
        p = p.compose(g).unwrap();
        k += 1;
    }
    k
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn composition_is_associative((d, p, q, r) in (1usize..10).prop_flat_map(|d| (Just(d), perm(d), perm(d), perm(d)))) {
        let id = Permutation::identity(d);
        prop_assert_eq!(p.compose(&q).unwrap().compose(&r).unwrap(), p.compose(&q.compose(&r).unwrap()).unwrap());
        prop_assert_eq!(p.compose(&id).unwrap(), p.clone());
        prop_assert_eq!(id.compose(&p).unwrap(), p.clone());
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
    }

    #[test]
    fn orbits_partition_the_points((d, gens) in perm_gens(9)) {
        let mut owner = vec![None; d];
        for p in 1..=d {
            let o = orbit(d, &gens, p).unwrap();
            let set: HashSet<usize> = o.iter().copied().collect();
            prop_assert_eq!(set.len(), o.len());
            for &q in &o {
                match &owner[q - 1] {
                    None => owner[q - 1] = Some(set.clone()),
                    Some(s) => prop_assert_eq!(s, &set),
                }
            }
        }
        prop_assert!(owner.iter().all(Option::is_some));
    }

    #[test]
    fn chain_order_matches_enumeration((d, gens) in perm_gens(7)) {
        let g = PermGroup::new(d, gens.clone()).unwrap();
        let elements = closure(d, &gens);
        prop_assert_eq!(g.order(), BigUint::from(elements.len()));
        prop_assert_eq!(g.enumerate(20_000).unwrap().len(), elements.len());
    }

    #[test]
    fn membership_of_words_and_strangers((d, gens) in perm_gens(9), word in prop::collection::vec((0usize..3, any::<bool>()), 0..12)) {
        let g = PermGroup::new(d, gens.clone()).unwrap();
        let mut x = Permutation::identity(d);
        for (i, inv) in word {
            let s = &gens[i % gens.len()];
            x = x.compose(&if inv { s.inverse() } else { s.clone() }).unwrap();
        }
        prop_assert!(g.contains(&x));
        let o = orbit(d, &gens, 1).unwrap();
        if let Some(q) = (1..=d).find(|q| !o.contains(q)) {
            prop_assert!(!g.contains(&Permutation::cycle(d, &[1, q]).unwrap()));
        }
    }

    #[test]
    fn regular_extension_is_semiregular(g in small_group(), pick in any::<prop::sample::Index>()) {
        let subs = all_subgroups(&g).unwrap();
        let k = pick.get(&subs);
        let k2 = subs
            .iter()
            .find_map(|k2| {
                (k2.order() == k.order()).then(|| find_isomorphism(k, k2).unwrap().map(|h| (k2.clone(), h))).flatten()
            })
            .unwrap();
        let (k2, h) = k2;
        let (kp, k2p) = (k.parent().unwrap().1, k2.parent().unwrap().1);
        let dom: Vec<Elem> = k.gens().iter().map(|&x| kp[x as usize]).collect();
        let img: Vec<Elem> = k.gens().iter().map(|&x| k2p[h.apply(x) as usize]).collect();
        let psi = PartialIso::new(&g, &dom, &img, 1000).unwrap();
        let ext = hrushovski_extend(&g, &[psi.clone()], &Bounds::default()).unwrap();
        let n = g.order();
        let on = |elems: &[Elem]| elems.iter().map(|&x| ext.rho.apply(x).clone()).collect::<Vec<_>>();
        let (rk, rk2) = (on(psi.domain_elements()), on(psi.codomain_elements()));
        prop_assert_eq!(orbits_of_size(n, &rk, k.order()), Some(n / k.order()));
        prop_assert_eq!(orbits_of_size(n, &rk2, k.order()), Some(n / k.order()));
        let c = &ext.conjugators[0];
        for (x, y) in psi.pairs() {
            prop_assert_eq!(ext.rho.apply(x).conjugate_by(c), ext.rho.apply(y).clone());
        }
    }

    #[test]
    fn fiber_product_counts(d in 1usize..5, a in 1usize..4, b in 1usize..4, u in 1usize..8, v in 1usize..8) {
        let (y, z, x) = (cyc(d * a), cyc(d * b), cyc(d));
        let unit = |w: usize| (w..w + d).find(|&w| gcd(w, d) == 1).unwrap();
        let phi = GroupHom::new(&y, &x, y.gens().iter().map(|_| x.pow(x.gens().first().copied().unwrap_or(0), unit(u) as i64)).collect()).unwrap();
        let psi = GroupHom::new(&z, &x, z.gens().iter().map(|_| x.pow(x.gens().first().copied().unwrap_or(0), unit(v) as i64)).collect()).unwrap();
        let fp = fiber_product(&phi, &psi, 10_000).unwrap();
        let pairs: Vec<(Elem, Elem)> = y
            .elements()
            .flat_map(|s| z.elements().map(move |t| (s, t)))
            .filter(|&(s, t)| phi.apply(s) == psi.apply(t))
            .collect();
        prop_assert_eq!(fp.w.order(), pairs.len());
        prop_assert_eq!(fp.w.order() * x.order(), y.order() * z.order());
        prop_assert!(fp.proj_y.is_surjective() && fp.proj_z.is_surjective());
        for &(s1, t1) in &pairs {
            for &(s2, t2) in pairs.iter().take(8) {
                prop_assert!(fp.element(y.mul(s1, s2), z.mul(t1, t2)).is_some());
            }
        }
    }

    #[test]
    fn small_amalgams_embed_isomorphically(m in 1usize..5, a in 1usize..4, b in 1usize..4) {
        let (ca, cb, cc) = (cyc(m), cyc(m * a), cyc(m * b));
        let gen_to = |t: &Arc<TableGroup>, k: usize| ca.gens().iter().map(|_| t.pow(t.gens()[0], k as i64)).collect::<Vec<_>>();
        let f = GroupHom::new(&ca, &cb, gen_to(&cb, a)).unwrap();
        let g = GroupHom::new(&ca, &cc, gen_to(&cc, b)).unwrap();
        let am = amalgamate(&f, &g, &Bounds::default()).unwrap();
        for x in ca.elements() {
            prop_assert_eq!(am.r(f.apply(x)), am.s(g.apply(x)));
        }
        if am.d.order() <= BigUint::from(24u32) {
            let rb = Arc::new(TableGroup::from_permutations(am.degree(), am.r_gens(), 100).unwrap());
            let sc = Arc::new(TableGroup::from_permutations(am.degree(), am.s_gens(), 100).unwrap());
            prop_assert!(find_isomorphism(&rb, &cb).unwrap().is_some());
            prop_assert!(find_isomorphism(&sc, &cc).unwrap().is_some());
        }
    }

    #[test]
    fn commuting_elements_generate_an_abelian_group(m in 1usize..7, div in 1usize..4, u in 1usize..9, v in 1usize..9) {
        let b = cyc(m);
        let step = if m % div == 0 { div } else { 1 };
        let a = Arc::new(TableGroup::subgroup_generated(&b, &[b.pow(b.gens().first().copied().unwrap_or(0), step as i64)], 100).unwrap());
        let unit = |w: usize, n: usize| (w..w + n.max(1)).find(|&w| gcd(w, n) == 1).unwrap_or(1);
        let alpha = power_map(&a, unit(u, a.order()));
        let beta = power_map(&b, unit(v, m));
        let cert = commuting_extension(&b, &a, &alpha, &beta, &Bounds::default()).unwrap();
        let (f, g) = (&cert.f_elem, &cert.g_elem);
        let group = closure(f.degree(), &[f.clone(), g.clone()]);
        prop_assert!(group.iter().all(|x| group.iter().all(|y| x.commutes_with(y))));
    }

    #[test]
    fn root_of_degree_one_is_the_commuting_contract(m in 1usize..7, v in 1usize..9) {
        let b = cyc(m);
        let a = Arc::new(TableGroup::subgroup_generated(&b, b.gens(), 100).unwrap());
        let unit = (v..v + m).find(|&w| gcd(w, m) == 1).unwrap_or(1);
        let (alpha, beta) = (power_map(&a, unit), power_map(&b, unit));
        let root = root_extension(&b, &a, &alpha, &beta, 1, &Bounds::default()).unwrap();
        let plain = commuting_extension(&b, &a, &alpha, &beta, &Bounds::default()).unwrap();
        prop_assert_eq!(&root.pi, &root.inner.g_elem);
        for y in b.elements() {
            prop_assert_eq!(root.phi(y), root.inner.e(y));
            prop_assert_eq!(root.gamma(&root.phi(y)), root.phi(beta.apply(y)));
            prop_assert_eq!(plain.e(y).conjugate_by(&plain.g_elem), plain.e(beta.apply(y)));
        }
    }
}

#[test]
fn hall_embeddings_are_regular() {
    for seed in ["C2", "C3", "C4", "V4", "S3", "C5"] {
        let tower = hall_tower(2, &catalog(seed).unwrap(), &Bounds::default()).unwrap();
        let orders = tower.orders();
        for (k, images) in tower.embeddings.iter().enumerate() {
            let degree = tower.degrees()[k + 1];
            let image = PermGroup::new(degree, images.clone()).unwrap();
            assert!(image.is_transitive(), "{seed}: ρ{k} image is not transitive");
            assert_eq!(image.order(), orders[k], "{seed}: ρ{k} image has the wrong order");
        }
    }
}

#[test]
fn power_tower_orders_grow() {
    let c3 = cyc(3);
    let inv = GroupHom::from_map(&c3, &c3, c3.elements().map(|x| c3.inv(x)).collect()).unwrap();
    let c2 = cyc(2);
    let seeds = [
        EquivariantSystem::new(&c3, vec![inv]).unwrap(),
        EquivariantSystem::new(&c2, vec![GroupHom::identity(&c2)]).unwrap(),
    ];
    let bounds = Bounds::default().with_degree_cap(20_000);
    for seed in &seeds {
        for n in 1..=3 {
            let tower = generic_power_tower(n, 1, seed, &bounds).unwrap();
            for pair in tower.stages.windows(2) {
                let (prev, next) = (&pair[0], &pair[1]);
                let step = next.step.as_ref().unwrap();
                let joined = step.joined.perm_group().order();
                assert!(next.a.order() >= prev.a.order() * joined, "n = {n}: stage did not grow");
                let (op, on) = (
                    action_order(&prev.g, prev.a.generators()),
                    action_order(&next.g, next.a.generators()),
                );
                assert_eq!(on % op, 0, "n = {n}: order {on} of g is not a multiple of {op}");
                assert_eq!(next.f, next.g.pow(n as i64));
            }
        }
    }
}
