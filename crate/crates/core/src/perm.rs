//! Permutations of `{1..degree}`.
//!
//! Points are 1-indexed at every public boundary (cycle notation, `image`),
//! and stored 0-indexed. Products read left to right: `p * q` applies `p`
//! first, so `(p * q)(x) = q(p(x))`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer_lcm::lcm;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-indexed images.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-indexed images, `images[i-1]` being the image of `i`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let zero: Vec<u32> = images
            .iter()
            .map(|&x| {
                if x == 0 {
                    Err(Error::NotAPermutation(format!("{images:?}")))
                } else {
                    Ok((x - 1) as u32)
                }
            })
            .collect::<Result<_>>()?;
        Self::from_images(zero)
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// A single cycle on the given 1-indexed points.
    pub fn cycle(degree: usize, points: &[usize]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        for (i, &p) in points.iter().enumerate() {
            if p == 0 || p > degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            if seen[p - 1] {
                return Err(Error::RepeatedPoint(p));
            }
            seen[p - 1] = true;
            let next = points[(i + 1) % points.len()];
            images[p - 1] = (next - 1) as u32;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-indexed image.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// 1-indexed image.
    pub fn image(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Left-to-right product, checked.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            sq = sq.mul_unchecked(&sq);
            e >>= 1;
        }
        acc
    }

    /// `h⁻¹ · self · h`, written `self^h`.
    pub fn conjugate_by(&self, h: &Permutation) -> Permutation {
        assert_eq!(self.degree(), h.degree(), "degree mismatch in conjugation");
        // (h⁻¹ x h)(h(p)) = h(x(p))
        let mut images = vec![0u32; self.images.len()];
        for (p, &xp) in self.images.iter().enumerate() {
            images[h.images[p] as usize] = h.images[xp as usize];
        }
        Permutation { images }
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.degree() == other.degree() && self.mul_unchecked(other) == other.mul_unchecked(self)
    }

    /// Smallest 0-indexed point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }

    /// Disjoint cycles of length at least two, 1-indexed, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cyc.push(p + 1);
                p = self.images[p] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.cycles()
            .iter()
            .fold(BigUint::from(1u32), |acc, c| lcm(&acc, &BigUint::from(c.len())))
    }

    /// Pads with fixed points up to `degree`.
    pub fn extend_to(&self, degree: usize) -> Permutation {
        assert!(degree >= self.degree());
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Permutation { images }
    }

    /// Block-diagonal sum: block `j` acts on points `offset_j + 1 ..`.
    pub fn direct_sum(parts: &[&Permutation]) -> Permutation {
        let total: usize = parts.iter().map(|p| p.degree()).sum();
        let mut images = Vec::with_capacity(total);
        let mut offset = 0u32;
        for p in parts {
            images.extend(p.images.iter().map(|&x| x + offset));
            offset += p.degree() as u32;
        }
        Permutation { images }
    }

    /// Restricts to points `offset+1 ..= offset+degree`, which must be invariant.
    pub fn block(&self, offset: usize, degree: usize) -> Option<Permutation> {
        let slice = self.images.get(offset..offset + degree)?;
        let images: Option<Vec<u32>> = slice
            .iter()
            .map(|&x| {
                let x = x as usize;
                (offset..offset + degree)
                    .contains(&x)
                    .then(|| (x - offset) as u32)
            })
            .collect();
        Some(Permutation { images: images? })
    }

    pub fn parse(text: &str, degree: usize) -> Result<Permutation> {
        parse_cycles(text, degree)
    }
}

/// Parses disjoint cycle notation such as `(1 2 3)(4 5)`; `()` is the identity.
///
/// Whitespace is insignificant apart from separating points; commas are accepted
/// as separators too.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    if degree == 0 {
        return Err(Error::MalformedCycles("degree must be positive".into()));
    }
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut seen = vec![false; degree];
    let bytes = text.trim();
    if bytes.is_empty() {
        return Err(Error::MalformedCycles("empty string".into()));
    }
    if bytes.replace(char::is_whitespace, "") == "()" {
        return Ok(Permutation { images });
    }
    let mut rest = bytes;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return Err(Error::MalformedCycles(format!("expected `(` in `{text}`")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::MalformedCycles(format!("unclosed `(` in `{text}`")))?;
        let inner = &rest[1..close];
        if inner.contains('(') {
            return Err(Error::MalformedCycles(format!("nested `(` in `{text}`")));
        }
        let points: Vec<usize> = inner
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::MalformedCycles(format!("bad point `{s}` in `{text}`")))
            })
            .collect::<Result<_>>()?;
        if points.is_empty() {
            return Err(Error::MalformedCycles(format!("empty cycle in `{text}`")));
        }
        for (i, &p) in points.iter().enumerate() {
            if p == 0 || p > degree {
                return Err(Error::PointOutOfRange { point: p, degree });
            }
            if seen[p - 1] {
                return Err(Error::RepeatedPoint(p));
            }
            seen[p - 1] = true;
            let next = points[(i + 1) % points.len()];
            images[p - 1] = (next - 1) as u32;
        }
        rest = &rest[close + 1..];
    }
    Ok(Permutation { images })
}

/// Left-to-right product; panics on a degree mismatch. Use [`Permutation::compose`]
/// for the checked form.
impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        self.mul_unchecked(rhs)
    }
}

impl Mul for Permutation {
    type Output = Permutation;
    fn mul(self, rhs: Permutation) -> Permutation {
        &self * &rhs
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

mod num_integer_lcm {
    use num_bigint::BigUint;
    use num_traits::Zero;

    pub fn lcm(a: &BigUint, b: &BigUint) -> BigUint {
        if a.is_zero() || b.is_zero() {
            return BigUint::zero();
        }
        a / gcd(a.clone(), b.clone()) * b
    }

    fn gcd(mut a: BigUint, mut b: BigUint) -> BigUint {
        while !b.is_zero() {
            let r = &a % &b;
            a = b;
            b = r;
        }
        a
    }
}
