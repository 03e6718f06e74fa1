use std::fmt;

use super::domain::{advance, Domain};
use crate::error::{arg, Error, Result};

/// A relation stored as a dense membership bitset over tuple indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    domain: Domain,
    arity: usize,
    bits: Vec<u64>,
}

fn words_for(cells: usize) -> usize {
    cells.div_ceil(64)
}

impl Relation {
    pub fn empty(domain: Domain, arity: usize) -> Result<Self> {
        if arity == 0 {
            return arg("relations must have arity at least 1");
        }
        let cells = domain.tuple_count(arity)?;
        Ok(Relation {
            domain,
            arity,
            bits: vec![0; words_for(cells)],
        })
    }

    pub fn full(domain: Domain, arity: usize) -> Result<Self> {
        let mut r = Self::empty(domain, arity)?;
        for i in 0..r.cells() {
            r.insert_index(i);
        }
        Ok(r)
    }

    pub fn from_tuples<T: AsRef<[u8]>>(
        domain: Domain,
        arity: usize,
        tuples: impl IntoIterator<Item = T>,
    ) -> Result<Self> {
        let mut r = Self::empty(domain, arity)?;
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return arg(format!("tuple of length {} in a relation of arity {arity}", t.len()));
            }
            domain.check_tuple(t)?;
            r.insert_index(domain.encode(t));
        }
        Ok(r)
    }

    pub fn from_indices(domain: Domain, arity: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut r = Self::empty(domain, arity)?;
        let cells = r.cells();
        for i in indices {
            if i >= cells {
                return arg(format!("tuple index {i} out of range"));
            }
            r.insert_index(i);
        }
        Ok(r)
    }

    pub fn from_predicate(domain: Domain, arity: usize, mut pred: impl FnMut(&[u8]) -> bool) -> Result<Self> {
        let mut r = Self::empty(domain, arity)?;
        let mut t = vec![0u8; arity];
        let mut i = 0;
        loop {
            if pred(&t) {
                r.insert_index(i);
            }
            i += 1;
            if !advance(&mut t, domain.size()) {
                break;
            }
        }
        Ok(r)
    }

    /// Unary relation holding the listed elements.
    pub fn unary(domain: Domain, elements: &[u8]) -> Result<Self> {
        Self::from_tuples(domain, 1, elements.iter().map(|&a| [a]))
    }

    pub fn equality(domain: Domain) -> Self {
        Self::from_predicate(domain, 2, |t| t[0] == t[1]).expect("equality fits")
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cells(&self) -> usize {
        self.domain.size().pow(self.arity as u32)
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub(crate) fn insert_index(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub(crate) fn remove_index(&mut self, i: usize) {
        self.bits[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn contains(&self, tuple: &[u8]) -> bool {
        tuple.len() == self.arity
            && tuple.iter().all(|&a| self.domain.contains(a))
            && self.contains_index(self.domain.encode(tuple))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.cells()
    }

    /// Member indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    /// Member tuples in index order.
    pub fn tuples(&self) -> Vec<Vec<u8>> {
        self.indices().map(|i| self.domain.decode(i, self.arity)).collect()
    }

    /// Member tuples concatenated into one buffer of `len() * arity` entries.
    pub fn flat_tuples(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len() * self.arity];
        for (k, i) in self.indices().enumerate() {
            self.domain.decode_into(i, &mut out[k * self.arity..(k + 1) * self.arity]);
        }
        out
    }

    fn check_same(&self, other: &Relation) -> Result<()> {
        if self.domain != other.domain || self.arity != other.arity {
            return arg("relations differ in domain or arity");
        }
        Ok(())
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.check_same(other)?;
        let mut r = self.clone();
        r.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a &= b);
        Ok(r)
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.check_same(other)?;
        let mut r = self.clone();
        r.bits.iter_mut().zip(&other.bits).for_each(|(a, b)| *a |= b);
        Ok(r)
    }

    pub fn complement(&self) -> Relation {
        let mut r = self.clone();
        for i in 0..self.cells() {
            if self.contains_index(i) {
                r.remove_index(i);
            } else {
                r.insert_index(i);
            }
        }
        r
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.domain == other.domain
            && self.arity == other.arity
            && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// `{ t : (t[map[0]], .., t[map[k-1]]) ∈ self }` as an `r`-ary relation.
    ///
    /// With a bijective `map` this permutes coordinates; repeated targets identify them.
    pub fn substitute(&self, map: &[usize], r: usize) -> Result<Relation> {
        if map.len() != self.arity || map.iter().any(|&j| j >= r) {
            return arg("substitution map does not fit the relation");
        }
        let mut out = Relation::empty(self.domain, r)?;
        let mut t = vec![0u8; r];
        let mut s = vec![0u8; self.arity];
        let mut i = 0;
        loop {
            for (k, &j) in map.iter().enumerate() {
                s[k] = t[j];
            }
            if self.contains_index(self.domain.encode(&s)) {
                out.insert_index(i);
            }
            i += 1;
            if !advance(&mut t, self.domain.size()) {
                break;
            }
        }
        Ok(out)
    }

    /// Coordinate permutation: coordinate `i` of the result is coordinate `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Relation> {
        let mut inverse = vec![usize::MAX; self.arity];
        if perm.len() != self.arity {
            return arg("permutation length differs from arity");
        }
        for (i, &p) in perm.iter().enumerate() {
            if p >= self.arity || inverse[p] != usize::MAX {
                return arg("not a permutation");
            }
            inverse[p] = i;
        }
        self.substitute(&inverse, self.arity)
    }

    /// Projection onto the listed coordinates, in that order.
    pub fn project(&self, keep: &[usize]) -> Result<Relation> {
        if keep.is_empty() || keep.iter().any(|&j| j >= self.arity) {
            return arg("projection coordinates out of range");
        }
        let mut out = Relation::empty(self.domain, keep.len())?;
        let mut t = vec![0u8; self.arity];
        let mut s = vec![0u8; keep.len()];
        for i in self.indices() {
            self.domain.decode_into(i, &mut t);
            for (k, &j) in keep.iter().enumerate() {
                s[k] = t[j];
            }
            out.insert_index(self.domain.encode(&s));
        }
        Ok(out)
    }

    pub fn product(&self, other: &Relation) -> Result<Relation> {
        if self.domain != other.domain {
            return arg("relations live on different domains");
        }
        let mut out = Relation::empty(self.domain, self.arity + other.arity)?;
        let shift = other.cells();
        for i in self.indices() {
            for j in other.indices() {
                out.insert_index(i * shift + j);
            }
        }
        Ok(out)
    }

    /// Converse of a binary relation.
    pub fn converse(&self) -> Result<Relation> {
        if self.arity != 2 {
            return arg("converse needs a binary relation");
        }
        self.permute(&[1, 0])
    }

    /// Image under a domain permutation `perm` (element `a` becomes `perm[a]`).
    pub fn relabel(&self, perm: &[u8]) -> Result<Relation> {
        check_relabeling(self.domain, perm)?;
        let mut out = Relation::empty(self.domain, self.arity)?;
        let mut t = vec![0u8; self.arity];
        for i in self.indices() {
            self.domain.decode_into(i, &mut t);
            t.iter_mut().for_each(|a| *a = perm[*a as usize]);
            out.insert_index(self.domain.encode(&t));
        }
        Ok(out)
    }

    /// True if coordinate `i` is dummy: membership does not depend on it.
    pub fn is_dummy(&self, i: usize) -> bool {
        let mut t = vec![0u8; self.arity];
        for idx in 0..self.cells() {
            self.domain.decode_into(idx, &mut t);
            let member = self.contains_index(idx);
            for a in self.domain.elements() {
                t[i] = a;
                if self.contains(&t) != member {
                    return false;
                }
            }
        }
        true
    }

    /// Parallelogram property over every proper nonempty coordinate split.
    pub fn has_parallelogram(&self) -> Result<bool> {
        if self.arity < 2 {
            return arg("the parallelogram property needs arity at least 2");
        }
        let n = self.arity;
        let tuples = self.tuples();
        for mask in 1..(1u32 << n) - 1 {
            // Left part: coordinates in `mask`; right part: the rest.
            let split = |t: &Vec<u8>| {
                let (mut l, mut r) = (0usize, 0usize);
                for (j, &a) in t.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        l = l * self.domain.size() + a as usize;
                    } else {
                        r = r * self.domain.size() + a as usize;
                    }
                }
                (l, r)
            };
            let pairs: std::collections::HashSet<(usize, usize)> = tuples.iter().map(split).collect();
            let mut rights: std::collections::HashMap<usize, Vec<usize>> = Default::default();
            for &(l, r) in &pairs {
                rights.entry(l).or_default().push(r);
            }
            // (a,c),(a,d),(b,c) ∈ R ⇒ (b,d) ∈ R: rows sharing one right value share all of them.
            for (&a, ra) in &rights {
                for &c in ra {
                    for &(b, c2) in &pairs {
                        if c2 != c || b == a {
                            continue;
                        }
                        if ra.iter().any(|&d| !pairs.contains(&(b, d))) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

pub(crate) fn check_relabeling(domain: Domain, perm: &[u8]) -> Result<()> {
    let mut seen = vec![false; domain.size()];
    if perm.len() != domain.size() {
        return arg("relabeling length differs from the domain size");
    }
    for &p in perm {
        if !domain.contains(p) || seen[p as usize] {
            return Err(Error::Argument("relabeling is not a permutation".into()));
        }
        seen[p as usize] = true;
    }
    Ok(())
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation/{}{{", self.arity)?;
        for (k, t) in self.tuples().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "(")?;
            for (j, a) in t.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}
