//! Explicitly enumerated finite groups.
//!
//! Elements are indices `0..order` with `0` the identity. Small groups keep a
//! dense multiplication table; products, subgroups and permutation groups keep
//! structure instead so that groups with tens of thousands of elements stay
//! cheap to hold.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::permgroup::PermGroup;

pub type Elem = u32;

/// Groups up to this order get a dense multiplication table.
pub const DENSE_LIMIT: usize = 2048;

#[derive(Clone)]
struct Dense {
    mul: Vec<Elem>,
    inv: Vec<Elem>,
}

#[derive(Clone)]
enum Repr {
    Table,
    Cyclic,
    /// Pairs `(a, w)` stored as `a * |right| + w`.
    Product {
        left: Arc<TableGroup>,
        right: Arc<TableGroup>,
        /// `action[w]` is the automorphism of `left` by which `w` acts.
        action: Option<Arc<Vec<Vec<Elem>>>>,
    },
    Sub {
        parent: Arc<TableGroup>,
        elements: Vec<Elem>,
        index: HashMap<Elem, Elem>,
    },
    Perm {
        degree: usize,
        elements: Vec<Permutation>,
        index: HashMap<Permutation, Elem>,
        /// multiply as functions (`a * b = a ∘ b`) rather than left to right
        reversed: bool,
    },
}

#[derive(Clone)]
pub struct TableGroup {
    order: usize,
    gens: Vec<Elem>,
    repr: Repr,
    dense: Option<Dense>,
}

impl fmt::Debug for TableGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Table => "table",
            Repr::Cyclic => "cyclic",
            Repr::Product { action: None, .. } => "direct-product",
            Repr::Product { .. } => "semidirect-product",
            Repr::Sub { .. } => "subgroup",
            Repr::Perm { .. } => "permutation",
        };
        write!(f, "TableGroup({kind}, order {}, gens {:?})", self.order, self.gens)
    }
}

/// Breadth-first closure from `identity`, multiplying on the right by `gens`
/// in input order. Fails once more than `bound` elements appear.
pub(crate) fn closure_by<T, F>(identity: T, gens: &[T], bound: usize, mul: F) -> Result<Vec<T>>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let mut seen: HashMap<T, ()> = HashMap::new();
    seen.insert(identity.clone(), ());
    let mut out = vec![identity];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let x = mul(&out[i], g);
            if seen.insert(x.clone(), ()).is_none() {
                out.push(x);
                if out.len() > bound {
                    return Err(Error::OrderTooLarge {
                        order: format!("more than {bound}"),
                        bound,
                    });
                }
            }
        }
        i += 1;
    }
    Ok(out)
}

impl TableGroup {
    fn finish(order: usize, gens: Vec<Elem>, repr: Repr) -> TableGroup {
        let mut g = TableGroup {
            order,
            gens,
            repr,
            dense: None,
        };
        if order <= DENSE_LIMIT && !matches!(g.repr, Repr::Cyclic | Repr::Table) {
            g.densify();
        }
        g
    }

    fn densify(&mut self) {
        let n = self.order;
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n as Elem {
            for b in 0..n as Elem {
                mul.push(self.mul_slow(a, b));
            }
        }
        let inv = (0..n as Elem).map(|a| self.inv_slow(a)).collect();
        self.dense = Some(Dense { mul, inv });
    }

    /// Validates a full multiplication table (`mul[a * n + b]`) with identity `0`.
    pub fn from_table(order: usize, mul: Vec<Elem>, gens: Vec<Elem>) -> Result<TableGroup> {
        let n = order;
        if n == 0 || mul.len() != n * n {
            return Err(Error::CheckFailed("table has the wrong size".into()));
        }
        for a in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                let x = mul[a * n + b] as usize;
                let y = mul[b * n + a] as usize;
                if x >= n || y >= n || row[x] || col[y] {
                    return Err(Error::CheckFailed("table is not a Latin square".into()));
                }
                row[x] = true;
                col[y] = true;
            }
            if mul[a] as usize != a || mul[a * n] as usize != a {
                return Err(Error::CheckFailed("element 0 is not the identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab = mul[a * n + b] as usize;
                    let bc = mul[b * n + c] as usize;
                    if mul[ab * n + c] != mul[a * n + bc] {
                        return Err(Error::CheckFailed("table is not associative".into()));
                    }
                }
            }
        }
        if gens.iter().any(|&g| g as usize >= n) {
            return Err(Error::CheckFailed("generator out of range".into()));
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as Elem;
                }
            }
        }
        let g = TableGroup {
            order: n,
            gens,
            repr: Repr::Table,
            dense: Some(Dense { mul, inv }),
        };
        if g.closure_order() != n {
            return Err(Error::CheckFailed("generators do not generate the table".into()));
        }
        Ok(g)
    }

    fn closure_order(&self) -> usize {
        closure_by(0, &self.gens, self.order, |a, b| self.mul(*a, *b))
            .map(|v| v.len())
            .unwrap_or(usize::MAX)
    }

    pub fn trivial() -> TableGroup {
        TableGroup::cyclic(1)
    }

    /// `Z/n` with generator `1` (no generators when `n = 1`).
    pub fn cyclic(n: usize) -> TableGroup {
        assert!(n >= 1, "cyclic group of order 0");
        let gens = if n > 1 { vec![1] } else { Vec::new() };
        TableGroup {
            order: n,
            gens,
            repr: Repr::Cyclic,
            dense: None,
        }
    }

    /// Enumerates `⟨gens⟩ ≤ Sym(degree)`; multiplication is left to right.
    pub fn from_permutations(degree: usize, gens: &[Permutation], bound: usize) -> Result<TableGroup> {
        let group = PermGroup::new(degree, gens.to_vec())?;
        let order = group.order();
        if order > bound.into() {
            return Err(Error::OrderTooLarge {
                order: order.to_string(),
                bound,
            });
        }
        Self::perm_closure(degree, gens, false, bound)
    }

    pub fn from_perm_group(group: &PermGroup, bound: usize) -> Result<TableGroup> {
        Self::from_permutations(group.degree(), group.generators(), bound)
    }

    /// Group of permutations of `0..degree` under function composition,
    /// `a * b = a ∘ b` (apply `b` first). Used for groups of element maps.
    pub fn from_maps(degree: usize, gens: &[Permutation], bound: usize) -> Result<TableGroup> {
        Self::perm_closure(degree, gens, true, bound)
    }

    fn perm_closure(degree: usize, gens: &[Permutation], reversed: bool, bound: usize) -> Result<TableGroup> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        let elements = closure_by(Permutation::identity(degree), gens, bound, |a, b| {
            if reversed {
                b.mul_unchecked(a)
            } else {
                a.mul_unchecked(b)
            }
        })?;
        let index: HashMap<Permutation, Elem> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as Elem))
            .collect();
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok(Self::finish(
            elements.len(),
            gen_idx,
            Repr::Perm {
                degree,
                elements,
                index,
                reversed,
            },
        ))
    }

    /// `⟨gens⟩ ≤ parent`, elements in breadth-first order.
    pub fn subgroup_generated(parent: &Arc<TableGroup>, gens: &[Elem], bound: usize) -> Result<TableGroup> {
        if let Some(&g) = gens.iter().find(|&&g| g as usize >= parent.order) {
            return Err(Error::NotAMember(format!("element {g} of a group of order {}", parent.order)));
        }
        let elements = closure_by(0, gens, bound, |a, b| parent.mul(*a, *b))?;
        let index: HashMap<Elem, Elem> = elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as Elem))
            .collect();
        let gen_idx = gens.iter().map(|g| index[g]).collect();
        Ok(Self::finish(
            elements.len(),
            gen_idx,
            Repr::Sub {
                parent: parent.clone(),
                elements,
                index,
            },
        ))
    }

    /// `G × H` on pairs, generators `(g,1)` then `(1,h)`.
    pub fn direct_product(left: &Arc<TableGroup>, right: &Arc<TableGroup>, bound: usize) -> Result<TableGroup> {
        Self::product(left, right, None, bound)
    }

    /// `A ⋊ W` with `(a₁,w₁)(a₂,w₂) = (a₁·φ(w₁)(a₂), w₁w₂)`.
    ///
    /// `gen_actions[i]` is the element map of `A` by which the `i`-th generator
    /// of `W` acts. The action of every element is derived by closure; a
    /// conflict means the assignment does not extend to a homomorphism
    /// `W → Aut(A)` under composition.
    pub fn semidirect_product(
        base: &Arc<TableGroup>,
        top: &Arc<TableGroup>,
        gen_actions: &[Vec<Elem>],
        bound: usize,
    ) -> Result<TableGroup> {
        if gen_actions.len() != top.gens.len() {
            return Err(Error::InvalidAction(format!(
                "{} generator actions for {} generators",
                gen_actions.len(),
                top.gens.len()
            )));
        }
        for (i, m) in gen_actions.iter().enumerate() {
            if !base.is_automorphism_map(m) {
                return Err(Error::InvalidAction(format!(
                    "generator {i} does not act by an automorphism"
                )));
            }
        }
        let n = base.order;
        let mut action: Vec<Option<Vec<Elem>>> = vec![None; top.order];
        action[0] = Some((0..n as Elem).collect());
        let mut queue = VecDeque::from([0 as Elem]);
        while let Some(w) = queue.pop_front() {
            for (k, &s) in top.gens.iter().enumerate() {
                let ws = top.mul(w, s);
                let cur = action[w as usize].as_ref().unwrap();
                // φ(ws) = φ(w) ∘ φ(s)
                let composed: Vec<Elem> = gen_actions[k]
                    .iter()
                    .map(|&x| cur[x as usize])
                    .collect();
                match &action[ws as usize] {
                    Some(existing) => {
                        if *existing != composed {
                            return Err(Error::InvalidAction(
                                "generator actions do not define a homomorphism".into(),
                            ));
                        }
                    }
                    None => {
                        action[ws as usize] = Some(composed);
                        queue.push_back(ws);
                    }
                }
            }
        }
        let action: Vec<Vec<Elem>> = action
            .into_iter()
            .map(|a| a.expect("top generators reach every element"))
            .collect();
        Self::product(base, top, Some(Arc::new(action)), bound)
    }

    fn product(
        left: &Arc<TableGroup>,
        right: &Arc<TableGroup>,
        action: Option<Arc<Vec<Vec<Elem>>>>,
        bound: usize,
    ) -> Result<TableGroup> {
        let order = left
            .order
            .checked_mul(right.order)
            .filter(|&o| o <= bound)
            .ok_or_else(|| Error::OrderTooLarge {
                order: format!("{} x {}", left.order, right.order),
                bound,
            })?;
        let m = right.order as Elem;
        let gens = left
            .gens
            .iter()
            .map(|&a| a * m)
            .chain(right.gens.iter().copied())
            .collect();
        Ok(Self::finish(
            order,
            gens,
            Repr::Product {
                left: left.clone(),
                right: right.clone(),
                action,
            },
        ))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.dense {
            Some(d) => d.mul[a as usize * self.order + b as usize],
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        match &self.dense {
            Some(d) => d.inv[a as usize],
            None => self.inv_slow(a),
        }
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Table => unreachable!("tables are dense"),
            Repr::Cyclic => ((a as usize + b as usize) % self.order) as Elem,
            Repr::Product { left, right, action } => {
                let m = right.order as Elem;
                let (a1, w1) = (a / m, a % m);
                let (a2, w2) = (b / m, b % m);
                let a2 = match action {
                    Some(act) => act[w1 as usize][a2 as usize],
                    None => a2,
                };
                left.mul(a1, a2) * m + right.mul(w1, w2)
            }
            Repr::Sub {
                parent,
                elements,
                index,
            } => index[&parent.mul(elements[a as usize], elements[b as usize])],
            Repr::Perm {
                elements,
                index,
                reversed,
                ..
            } => {
                let (x, y) = (&elements[a as usize], &elements[b as usize]);
                let p = if *reversed {
                    y.mul_unchecked(x)
                } else {
                    x.mul_unchecked(y)
                };
                index[&p]
            }
        }
    }

    fn inv_slow(&self, a: Elem) -> Elem {
        match &self.repr {
            Repr::Table => unreachable!("tables are dense"),
            Repr::Cyclic => ((self.order - a as usize) % self.order) as Elem,
            Repr::Product { left, right, action } => {
                let m = right.order as Elem;
                let (x, w) = (a / m, a % m);
                let wi = right.inv(w);
                // (x,w)⁻¹ = (φ(w⁻¹)(x⁻¹), w⁻¹)
                let xi = left.inv(x);
                let xi = match action {
                    Some(act) => act[wi as usize][xi as usize],
                    None => xi,
                };
                xi * m + wi
            }
            Repr::Sub {
                parent,
                elements,
                index,
            } => index[&parent.inv(elements[a as usize])],
            Repr::Perm {
                elements, index, ..
            } => index[&elements[a as usize].inverse()],
        }
    }

    pub fn pow(&self, a: Elem, exp: i64) -> Elem {
        let base = if exp < 0 { self.inv(a) } else { a };
        let mut e = exp.unsigned_abs();
        let (mut acc, mut sq) = (0, base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            e >>= 1;
        }
        acc
    }

    /// `b⁻¹ a b`.
    pub fn conj(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| {
            self.gens
                .iter()
                .all(|&b| self.mul(a, b) == self.mul(b, a))
        })
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .fold(1, num_lcm)
    }

    /// Whether `map` (an element map) is a bijective homomorphism of this group.
    pub fn is_automorphism_map(&self, map: &[Elem]) -> bool {
        if map.len() != self.order || map[0] != 0 {
            return false;
        }
        let mut seen = vec![false; self.order];
        for &x in map {
            if x as usize >= self.order || seen[x as usize] {
                return false;
            }
            seen[x as usize] = true;
        }
        self.elements().all(|a| {
            self.gens.iter().all(|&s| {
                map[self.mul(a, s) as usize] == self.mul(map[a as usize], map[s as usize])
            })
        })
    }

    /// Degree and element permutation, for groups enumerated from permutations.
    pub fn perm_degree(&self) -> Option<usize> {
        match &self.repr {
            Repr::Perm {
                degree,
                reversed: false,
                ..
            } => Some(*degree),
            Repr::Sub { parent, .. } => parent.perm_degree(),
            _ => None,
        }
    }

    pub fn as_permutation(&self, a: Elem) -> Option<Permutation> {
        match &self.repr {
            Repr::Perm {
                elements,
                reversed: false,
                ..
            } => Some(elements[a as usize].clone()),
            Repr::Sub {
                parent, elements, ..
            } => parent.as_permutation(elements[a as usize]),
            _ => None,
        }
    }

    /// The permutation behind an element of a permutation or element-map group.
    pub(crate) fn raw_permutation(&self, a: Elem) -> Option<&Permutation> {
        match &self.repr {
            Repr::Perm { elements, .. } => Some(&elements[a as usize]),
            _ => None,
        }
    }

    /// Index of a permutation in a group enumerated from permutations.
    pub fn index_of_permutation(&self, p: &Permutation) -> Option<Elem> {
        match &self.repr {
            Repr::Perm { index, .. } => index.get(p).copied(),
            Repr::Sub { parent, index, .. } => parent
                .index_of_permutation(p)
                .and_then(|x| index.get(&x).copied()),
            _ => None,
        }
    }

    /// For a subgroup, the parent group and the parent index of each element.
    pub fn parent(&self) -> Option<(&Arc<TableGroup>, &[Elem])> {
        match &self.repr {
            Repr::Sub {
                parent, elements, ..
            } => Some((parent, elements)),
            _ => None,
        }
    }

    /// For a subgroup, the index of a parent element if it belongs to it.
    pub fn from_parent(&self, x: Elem) -> Option<Elem> {
        match &self.repr {
            Repr::Sub { index, .. } => index.get(&x).copied(),
            _ => None,
        }
    }

    /// Factors of a (semi)direct product.
    pub fn factors(&self) -> Option<(&Arc<TableGroup>, &Arc<TableGroup>)> {
        match &self.repr {
            Repr::Product { left, right, .. } => Some((left, right)),
            _ => None,
        }
    }

    pub fn pair(&self, a: Elem) -> (Elem, Elem) {
        let (_, right) = self.factors().expect("not a product");
        let m = right.order as Elem;
        (a / m, a % m)
    }

    pub fn from_pair(&self, a: Elem, w: Elem) -> Elem {
        let (_, right) = self.factors().expect("not a product");
        a * right.order as Elem + w
    }

    /// A faithful permutation representation: the enumerating permutations
    /// when there are any, a sum of factor representations for direct
    /// products, and the right regular representation otherwise.
    pub fn realization(&self) -> (usize, Vec<Permutation>) {
        let els: Vec<Permutation> = self.elements().map(|x| self.realize(x)).collect();
        (self.realization_degree(), els)
    }

    pub fn realization_degree(&self) -> usize {
        if let Some(d) = self.perm_degree() {
            return d;
        }
        match &self.repr {
            Repr::Product {
                left,
                right,
                action: None,
            } => left.realization_degree() + right.realization_degree(),
            _ => self.order,
        }
    }

    /// One element under [`TableGroup::realization`].
    pub fn realize(&self, x: Elem) -> Permutation {
        if self.perm_degree().is_some() {
            return self.as_permutation(x).unwrap();
        }
        if let Repr::Product {
            left,
            right,
            action: None,
        } = &self.repr
        {
            let (a, w) = self.pair(x);
            return Permutation::direct_sum(&[&left.realize(a), &right.realize(w)]);
        }
        self.regular_image(x)
    }

    /// The generators under the same faithful representation as
    /// [`TableGroup::realization`], without touching other elements.
    pub fn realization_gens(&self) -> (usize, Vec<Permutation>) {
        if let Some(d) = self.perm_degree() {
            return (d, self.gens.iter().map(|&a| self.as_permutation(a).unwrap()).collect());
        }
        if let Repr::Product {
            left,
            right,
            action: None,
        } = &self.repr
        {
            let (dl, l) = left.realization_gens();
            let (dr, r) = right.realization_gens();
            let (il, ir) = (Permutation::identity(dl), Permutation::identity(dr));
            let gens = l
                .iter()
                .map(|p| Permutation::direct_sum(&[p, &ir]))
                .chain(r.iter().map(|p| Permutation::direct_sum(&[&il, p])))
                .collect();
            return (dl + dr, gens);
        }
        (self.order, self.gens.iter().map(|&x| self.regular_image(x)).collect())
    }

    /// `ρ(x): y ↦ y·x` on the points `1..=order` (point `i+1` is element `i`).
    pub fn regular_image(&self, x: Elem) -> Permutation {
        let images = self.elements().map(|y| self.mul(y, x)).collect();
        Permutation::from_images_unchecked(images)
    }
}

fn num_lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}
