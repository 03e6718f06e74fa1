use super::domain::Domain;
use super::operation::Operation;
use super::relation::Relation;
use crate::error::{arg, Result};

/// An equivalence relation given by block ids in first-occurrence order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    domain: Domain,
    block: Vec<usize>,
}

impl Partition {
    /// Normalizes arbitrary labels to contiguous ids in first-occurrence order.
    pub fn from_labels(domain: Domain, labels: &[usize]) -> Result<Self> {
        if labels.len() != domain.size() {
            return arg("one label per element is required");
        }
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let block = labels
            .iter()
            .map(|&l| match seen.iter().find(|(x, _)| *x == l) {
                Some(&(_, id)) => id,
                None => {
                    seen.push((l, seen.len()));
                    seen.len() - 1
                }
            })
            .collect();
        Ok(Partition { domain, block })
    }

    pub fn from_blocks(domain: Domain, blocks: &[Vec<u8>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; domain.size()];
        for (b, block) in blocks.iter().enumerate() {
            for &a in block {
                domain.check_tuple(&[a])?;
                if labels[a as usize] != usize::MAX {
                    return arg(format!("element {a} occurs in two blocks"));
                }
                labels[a as usize] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return arg("blocks do not cover the domain");
        }
        Self::from_labels(domain, &labels)
    }

    /// The equality partition.
    pub fn discrete(domain: Domain) -> Self {
        Partition { domain, block: (0..domain.size()).collect() }
    }

    /// The one-block partition.
    pub fn total(domain: Domain) -> Self {
        Partition { domain, block: vec![0; domain.size()] }
    }

    /// `{i} | rest` on a three-element set is written μ_i elsewhere.
    pub fn singleton_split(domain: Domain, i: u8) -> Result<Self> {
        let labels: Vec<usize> = domain.elements().map(|a| usize::from(a == i)).collect();
        Self::from_labels(domain, &labels)
    }

    /// Reads an equivalence relation; errors if `rel` is not one.
    pub fn from_relation(rel: &Relation) -> Result<Self> {
        let d = rel.domain();
        if rel.arity() != 2 {
            return arg("an equivalence relation must be binary");
        }
        let mut labels = vec![0; d.size()];
        for a in d.elements() {
            labels[a as usize] = d.elements().find(|&b| rel.contains(&[a, b])).map_or(usize::MAX, |b| b as usize);
        }
        let p = Self::from_labels(d, &labels)?;
        if p.to_relation() != *rel {
            return arg("relation is not an equivalence relation");
        }
        Ok(p)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn block_of(&self, a: u8) -> usize {
        self.block[a as usize]
    }

    pub fn labels(&self) -> &[usize] {
        &self.block
    }

    pub fn num_blocks(&self) -> usize {
        self.block.iter().max().map_or(0, |m| m + 1)
    }

    pub fn blocks(&self) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for a in self.domain.elements() {
            out[self.block[a as usize]].push(a);
        }
        out
    }

    pub fn related(&self, a: u8, b: u8) -> bool {
        self.block[a as usize] == self.block[b as usize]
    }

    pub fn is_discrete(&self) -> bool {
        self.num_blocks() == self.domain.size()
    }

    pub fn is_total(&self) -> bool {
        self.num_blocks() == 1
    }

    /// True if every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.domain == other.domain
            && self.domain.elements().all(|a| {
                self.domain
                    .elements()
                    .all(|b| !self.related(a, b) || other.related(a, b))
            })
    }

    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.domain != other.domain {
            return arg("partitions live on different domains");
        }
        let labels: Vec<usize> = (0..self.domain.size())
            .map(|a| self.block[a] * self.domain.size() + other.block[a])
            .collect();
        Self::from_labels(self.domain, &labels)
    }

    pub fn to_relation(&self) -> Relation {
        Relation::from_predicate(self.domain, 2, |t| self.related(t[0], t[1])).expect("binary fits")
    }

    pub fn is_congruence(&self, ops: &[Operation]) -> Result<bool> {
        let rel = self.to_relation();
        for op in ops {
            if !op.preserves(&rel)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every partition of the domain, in restricted-growth-string order.
    pub fn all(domain: Domain) -> Vec<Partition> {
        let n = domain.size();
        let mut out = Vec::new();
        let mut labels = vec![0usize; n];
        fn rec(k: usize, max: usize, labels: &mut Vec<usize>, domain: Domain, out: &mut Vec<Partition>) {
            if k == labels.len() {
                out.push(Partition { domain, block: labels.clone() });
                return;
            }
            for b in 0..=max + 1 {
                labels[k] = b;
                rec(k + 1, max.max(b), labels, domain, out);
            }
        }
        if n == 1 {
            return vec![Partition::discrete(domain)];
        }
        rec(1, 0, &mut labels, domain, &mut out);
        out
    }
}

/// Blocks separated by `|`, e.g. `01|2`.
impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, b) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for a in b {
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}
