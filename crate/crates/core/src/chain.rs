//! Stabilizer chains via deterministic Schreier–Sims.
//!
//! Before running the general algorithm the builder looks for a transposition
//! (directly among the generators, or as an odd power of one). If the
//! conjugation closure of that transposition connects every point, the
//! group is the full symmetric group and a closed-form chain is used. This is
//! what makes `Sym(720)` from two generators cheap.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;

use crate::perm::Permutation;

const ABSENT: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<u32>,
    /// point -> position in `orbit`, or ABSENT
    position: Vec<u32>,
    reps: Vec<Permutation>,
    inv_reps: Vec<Permutation>,
    /// per orbit point, how many of `gens` have been paired with it
    done: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut position = vec![ABSENT; degree];
        position[base] = 0;
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base as u32],
            position,
            reps: vec![Permutation::identity(degree)],
            inv_reps: vec![Permutation::identity(degree)],
            done: vec![0],
        }
    }
}

#[derive(Clone, Debug)]
enum Shape {
    /// The full symmetric group on `degree` points.
    Symmetric,
    Levels(Vec<Level>),
}

/// Base and strong generating set with transversals.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    shape: Shape,
}

impl StabChain {
    /// Runs Schreier–Sims on `gens`, all of degree `degree`.
    pub fn build(degree: usize, gens: &[Permutation]) -> StabChain {
        Self::build_with(degree, gens, true)
    }

    /// Same as [`StabChain::build`] but never takes the symmetric-group shortcut.
    pub fn build_general(degree: usize, gens: &[Permutation]) -> StabChain {
        Self::build_with(degree, gens, false)
    }

    fn build_with(degree: usize, gens: &[Permutation], shortcut: bool) -> StabChain {
        let mut distinct: Vec<Permutation> = Vec::new();
        for g in gens {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
            if !g.is_identity() && !distinct.contains(g) {
                distinct.push(g.clone());
            }
        }
        if shortcut && degree >= 2 && generates_symmetric(degree, &distinct) {
            return StabChain {
                degree,
                shape: Shape::Symmetric,
            };
        }
        let mut chain = StabChain {
            degree,
            shape: Shape::Levels(Vec::new()),
        };
        chain.schreier_sims(distinct);
        chain
    }

    fn levels_mut(&mut self) -> &mut Vec<Level> {
        match &mut self.shape {
            Shape::Levels(l) => l,
            Shape::Symmetric => unreachable!(),
        }
    }

    fn schreier_sims(&mut self, gens: Vec<Permutation>) {
        let degree = self.degree;
        let levels = self.levels_mut();
        for g in &gens {
            if levels.iter().all(|l| g.apply(l.base) == l.base) {
                let b = g.first_moved().expect("identity filtered out");
                levels.push(Level::new(b, degree));
            }
        }
        for k in 0..levels.len() {
            let fixed: Vec<usize> = levels[..k].iter().map(|l| l.base).collect();
            levels[k].gens = gens
                .iter()
                .filter(|g| fixed.iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect();
        }
        if levels.is_empty() {
            return;
        }
        let mut i = levels.len() - 1;
        loop {
            match complete_level(levels, i) {
                None => {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                }
                Some((h, j)) => {
                    if j == levels.len() {
                        let b = h.first_moved().expect("nontrivial residue");
                        levels.push(Level::new(b, degree));
                    }
                    for level in levels.iter_mut().take(j + 1) {
                        level.gens.push(h.clone());
                    }
                    i = j;
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_symmetric(&self) -> bool {
        matches!(self.shape, Shape::Symmetric)
    }

    /// Base points, 1-indexed.
    pub fn base(&self) -> Vec<usize> {
        match &self.shape {
            Shape::Symmetric => (1..self.degree).collect(),
            Shape::Levels(l) => l.iter().map(|l| l.base + 1).collect(),
        }
    }

    /// Basic orbit lengths along the base.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        match &self.shape {
            Shape::Symmetric => (2..=self.degree).rev().collect(),
            Shape::Levels(l) => l.iter().map(|l| l.orbit.len()).collect(),
        }
    }

    /// Strong generators (deduplicated), for the general shape.
    pub fn strong_generators(&self) -> Vec<Permutation> {
        match &self.shape {
            Shape::Symmetric => (1..self.degree)
                .map(|i| Permutation::cycle(self.degree, &[i, i + 1]).unwrap())
                .collect(),
            Shape::Levels(l) => l.first().map(|l| l.gens.clone()).unwrap_or_default(),
        }
    }

    pub fn order(&self) -> BigUint {
        self.orbit_lengths()
            .into_iter()
            .fold(BigUint::from(1u32), |acc, n| acc * BigUint::from(n))
    }

    /// What is left of `p` after sifting it through every level; the
    /// identity exactly when `p` is in the group. `None` for the symmetric
    /// shape, which stores no transversals.
    pub fn residue(&self, p: &Permutation) -> Option<Permutation> {
        assert_eq!(p.degree(), self.degree, "degree mismatch");
        match &self.shape {
            Shape::Symmetric => None,
            Shape::Levels(levels) => Some(sift(levels, p.clone(), 0).0),
        }
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.degree() != self.degree {
            return false;
        }
        match &self.shape {
            Shape::Symmetric => true,
            Shape::Levels(levels) => {
                let (residue, _) = sift(levels, p.clone(), 0);
                residue.is_identity()
            }
        }
    }
}

fn sift(levels: &[Level], mut y: Permutation, from: usize) -> (Permutation, usize) {
    for (k, level) in levels.iter().enumerate().skip(from) {
        let image = y.apply(level.base);
        let pos = level.position[image];
        if pos == ABSENT {
            return (y, k);
        }
        y = y.mul_unchecked(&level.inv_reps[pos as usize]);
    }
    (y, levels.len())
}

/// Closes the orbit of level `i` and sifts its unprocessed Schreier generators
/// through the (complete) levels below. Returns the first nontrivial residue.
fn complete_level(levels: &mut [Level], i: usize) -> Option<(Permutation, usize)> {
    let mut idx = 0;
    while idx < levels[i].orbit.len() {
        while levels[i].done[idx] < levels[i].gens.len() {
            let level = &mut levels[i];
            let s = level.gens[level.done[idx]].clone();
            let p = level.orbit[idx] as usize;
            let q = s.apply(p);
            let qpos = level.position[q];
            if qpos == ABSENT {
                let rep = level.reps[idx].mul_unchecked(&s);
                level.position[q] = level.orbit.len() as u32;
                level.orbit.push(q as u32);
                level.inv_reps.push(rep.inverse());
                level.reps.push(rep);
                level.done.push(0);
                level.done[idx] += 1;
                continue;
            }
            let y = level.reps[idx]
                .mul_unchecked(&s)
                .mul_unchecked(&level.inv_reps[qpos as usize]);
            level.done[idx] += 1;
            if y.is_identity() {
                continue;
            }
            let (h, j) = sift(levels, y, i + 1);
            if !h.is_identity() {
                return Some((h, j));
            }
        }
        idx += 1;
    }
    None
}

/// Decides whether `gens` generate `Sym(degree)` by exhibiting transpositions:
/// a transposition in the group, closed under conjugation by the generators,
/// whose support graph is connected.
fn generates_symmetric(degree: usize, gens: &[Permutation]) -> bool {
    let Some(seed) = gens.iter().find_map(transposition_power) else {
        return false;
    };
    let mut uf = UnionFind::new(degree);
    let mut components = degree;
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(seed);
    queue.push_back(seed);
    while let Some((a, b)) = queue.pop_front() {
        if uf.union(a as usize, b as usize) {
            components -= 1;
            if components == 1 {
                return true;
            }
        }
        for g in gens {
            let (x, y) = (g.apply(a as usize) as u32, g.apply(b as usize) as u32);
            let t = (x.min(y), x.max(y));
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    false
}

/// If some odd power of `g` is a transposition, returns its support (0-indexed).
fn transposition_power(g: &Permutation) -> Option<(u32, u32)> {
    let cycles = g.cycles();
    let twos: Vec<&Vec<usize>> = cycles.iter().filter(|c| c.len() == 2).collect();
    if twos.len() != 1 || cycles.iter().any(|c| c.len() != 2 && c.len() % 2 == 0) {
        return None;
    }
    let t = twos[0];
    Some(((t[0] - 1) as u32, (t[1] - 1) as u32))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
