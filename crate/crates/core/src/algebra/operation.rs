use super::domain::{advance, Domain};
use super::relation::Relation;
use crate::error::{arg, Result};

/// A finitary operation stored as a dense value table.
///
/// Entry `i` holds the value at the tuple with leftmost-major index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Operation {
    domain: Domain,
    arity: usize,
    table: Vec<u8>,
}

impl Operation {
    pub fn new(domain: Domain, arity: usize, table: Vec<u8>) -> Result<Self> {
        if arity == 0 {
            return arg("operations must have arity at least 1");
        }
        let cells = domain.tuple_count(arity)?;
        if table.len() != cells {
            return arg(format!(
                "table has {} entries, expected {cells}",
                table.len()
            ));
        }
        domain.check_tuple(&table)?;
        Ok(Operation { domain, arity, table })
    }

    pub fn from_fn(domain: Domain, arity: usize, mut f: impl FnMut(&[u8]) -> u8) -> Result<Self> {
        if arity == 0 {
            return arg("operations must have arity at least 1");
        }
        let cells = domain.tuple_count(arity)?;
        let mut table = Vec::with_capacity(cells);
        let mut t = vec![0u8; arity];
        loop {
            table.push(f(&t));
            if !advance(&mut t, domain.size()) {
                break;
            }
        }
        Self::new(domain, arity, table)
    }

    /// The `i`-th `n`-ary projection (0-based).
    pub fn projection(domain: Domain, n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return arg("projection index out of range");
        }
        Self::from_fn(domain, n, |t| t[i])
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[u8] {
        &self.table
    }

    pub fn eval(&self, args: &[u8]) -> u8 {
        debug_assert_eq!(args.len(), self.arity);
        self.table[self.domain.encode(args)]
    }

    pub fn eval_index(&self, index: usize) -> u8 {
        self.table[index]
    }

    /// `g(x_0..x_{r-1}) = f(x_{σ(0)}, .., x_{σ(n-1)})`.
    pub fn take_minor(&self, sigma: &[usize], r: usize) -> Result<Operation> {
        if r == 0 {
            return arg("minor arity must be at least 1");
        }
        if sigma.len() != self.arity {
            return arg(format!(
                "minor map has {} entries for an operation of arity {}",
                sigma.len(),
                self.arity
            ));
        }
        if let Some(&j) = sigma.iter().find(|&&j| j >= r) {
            return arg(format!("minor map target {j} out of range for arity {r}"));
        }
        let mut args = vec![0u8; self.arity];
        Self::from_fn(self.domain, r, |x| {
            for (k, &j) in sigma.iter().enumerate() {
                args[k] = x[j];
            }
            self.eval(&args)
        })
    }

    /// `h(a) = f(g_1(a), .., g_n(a))`.
    pub fn compose(&self, gs: &[Operation]) -> Result<Operation> {
        if gs.len() != self.arity {
            return arg(format!(
                "composition needs {} inner operations, got {}",
                self.arity,
                gs.len()
            ));
        }
        let m = gs[0].arity;
        if gs.iter().any(|g| g.arity != m || g.domain != self.domain) {
            return arg("inner operations must share arity and domain with the outer one");
        }
        let mut args = vec![0u8; self.arity];
        let mut i = 0;
        Self::from_fn(self.domain, m, |_| {
            for (k, g) in gs.iter().enumerate() {
                args[k] = g.table[i];
            }
            i += 1;
            self.eval(&args)
        })
    }

    pub fn is_idempotent(&self) -> bool {
        self.domain.elements().all(|a| self.eval(&vec![a; self.arity]) == a)
    }

    /// Image under a domain permutation: `perm ∘ f ∘ perm⁻¹`.
    pub fn relabel(&self, perm: &[u8]) -> Result<Operation> {
        super::relation::check_relabeling(self.domain, perm)?;
        let mut inv = vec![0u8; perm.len()];
        for (a, &p) in perm.iter().enumerate() {
            inv[p as usize] = a as u8;
        }
        let mut args = vec![0u8; self.arity];
        Self::from_fn(self.domain, self.arity, |x| {
            for (k, &a) in x.iter().enumerate() {
                args[k] = inv[a as usize];
            }
            perm[self.eval(&args) as usize]
        })
    }

    /// Restriction to a subset closed under the operation, relabeled to `0..subset.len()`.
    pub fn restrict(&self, subset: &[u8]) -> Result<Operation> {
        let sub = Domain::with_limit(subset.len(), 255)?;
        let mut pos = vec![None; self.domain.size()];
        for (k, &a) in subset.iter().enumerate() {
            self.domain.check_tuple(&[a])?;
            pos[a as usize] = Some(k as u8);
        }
        let mut args = vec![0u8; self.arity];
        let mut closed = true;
        let op = Self::from_fn(sub, self.arity, |x| {
            for (k, &a) in x.iter().enumerate() {
                args[k] = subset[a as usize];
            }
            pos[self.eval(&args) as usize].unwrap_or_else(|| {
                closed = false;
                0
            })
        })?;
        if !closed {
            return arg("subset is not closed under the operation");
        }
        Ok(op)
    }

    /// Whether every coordinatewise image of `arity` tuples of `rel` lies in `rel`.
    pub fn preserves(&self, rel: &Relation) -> Result<bool> {
        if rel.domain() != self.domain {
            return arg("operation and relation live on different domains");
        }
        Ok(preserves_flat(self, &rel.flat_tuples(), rel))
    }
}

/// Preservation test over pre-decoded tuples of `rel`.
pub(crate) fn preserves_flat(f: &Operation, flat: &[u8], rel: &Relation) -> bool {
    let k = rel.arity();
    let m = flat.len() / k;
    if m == 0 {
        return true;
    }
    let n = f.arity;
    let size = f.domain.size();
    // partial[level*k + j]: table index prefix of row j after `level` columns.
    let mut partial = vec![0usize; (n + 1) * k];
    let mut choice = vec![0usize; n];
    let mut level = 0;
    let mut image = vec![0u8; k];
    loop {
        if level == n {
            for j in 0..k {
                image[j] = f.table[partial[n * k + j]];
            }
            if !rel.contains_index(f.domain.encode(&image)) {
                return false;
            }
            level -= 1;
            choice[level] += 1;
        }
        if choice[level] == m {
            if level == 0 {
                return true;
            }
            choice[level] = 0;
            level -= 1;
            choice[level] += 1;
            continue;
        }
        let col = &flat[choice[level] * k..(choice[level] + 1) * k];
        for j in 0..k {
            partial[(level + 1) * k + j] = partial[level * k + j] * size + col[j] as usize;
        }
        level += 1;
    }
}
