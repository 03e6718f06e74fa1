//! Bounded saturation of a relation set under pp-operations, with replayable traces.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::algebra::{Domain, Relation};
use crate::error::{Error, Result};

/// One step of a derivation; operands refer to earlier steps by position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// The `k`-th premise.
    Premise(usize),
    /// The binary equality relation.
    Equality,
    /// Coordinate `i` of the result is coordinate `perm[i]` of the operand.
    Permute { of: usize, perm: Vec<usize> },
    /// Keep tuples whose coordinates `i < j` agree, then drop coordinate `j`.
    Identify { of: usize, i: usize, j: usize },
    /// Existentially quantify coordinate `drop`.
    Project { of: usize, drop: usize },
    Intersect { a: usize, b: usize },
    /// Cartesian product; coordinates of `a` come first.
    Product { a: usize, b: usize },
}

/// A straight-line derivation whose last step is the derived relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

fn apply(step: &Step, premises: &[Relation], done: &[Relation], domain: Domain) -> Result<Relation> {
    let get = |k: usize| {
        done.get(k)
            .ok_or_else(|| Error::Argument(format!("derivation refers to a later step {k}")))
    };
    match step {
        Step::Premise(k) => premises
            .get(*k)
            .cloned()
            .ok_or_else(|| Error::Argument(format!("derivation refers to missing premise {k}"))),
        Step::Equality => Ok(Relation::equality(domain)),
        Step::Permute { of, perm } => get(*of)?.permute(perm),
        Step::Identify { of, i, j } => identify(get(*of)?, *i, *j),
        Step::Project { of, drop } => {
            let r = get(*of)?;
            let keep: Vec<usize> = (0..r.arity()).filter(|&c| c != *drop).collect();
            r.project(&keep)
        }
        Step::Intersect { a, b } => get(*a)?.intersection(get(*b)?),
        Step::Product { a, b } => get(*a)?.product(get(*b)?),
    }
}

impl Derivation {
    /// Evaluates every step and returns the final relation.
    pub fn replay(&self, premises: &[Relation], domain: Domain) -> Result<Relation> {
        let mut done: Vec<Relation> = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let r = apply(step, premises, &done, domain)?;
            done.push(r);
        }
        done.pop().ok_or_else(|| Error::Argument("empty derivation".into()))
    }

    /// Human-readable listing, one step per line, with premise names substituted.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            let line = match s {
                Step::Premise(p) => format!("premise {}", names.get(*p).map_or("?", |n| n.as_str())),
                Step::Equality => "equality".to_string(),
                Step::Permute { of, perm } => format!("permute #{of} by {perm:?}"),
                Step::Identify { of, i, j } => format!("identify #{of} coordinates {i} and {j}"),
                Step::Project { of, drop } => format!("project #{of} dropping coordinate {drop}"),
                Step::Intersect { a, b } => format!("intersect #{a} and #{b}"),
                Step::Product { a, b } => format!("product #{a} x #{b}"),
            };
            out.push_str(&format!("#{k}: {line}\n"));
        }
        out
    }
}

pub(crate) fn identify(r: &Relation, i: usize, j: usize) -> Result<Relation> {
    if i >= j || j >= r.arity() || r.arity() < 2 {
        return Err(Error::Argument("identify needs coordinates i < j within the arity".into()));
    }
    let map: Vec<usize> = (0..r.arity()).map(|c| if c == j { i } else if c > j { c - 1 } else { c }).collect();
    r.substitute(&map, r.arity() - 1)
}

const CANONICAL_ARITY: usize = 4;

#[derive(Clone, Debug)]
enum Origin {
    Premise(usize),
    Equality,
    Identify(usize, usize, usize),
    Project(usize, usize),
    Intersect(usize, usize, Vec<usize>),
    /// Product of `a` and `b` with coordinate pairs `(i, j)` merged; `j` coordinates are dropped.
    Join { a: usize, b: usize, pairs: Vec<(usize, usize)> },
}

struct Entry {
    rel: Relation,
    /// Number of premise atoms in the derivation.
    size: usize,
    flat: Vec<u8>,
    origin: Origin,
}

/// Least permutation image of `r`, trying only orders that sort coordinates by value counts.
pub(crate) fn canonical(r: &Relation, perms: &[Vec<Vec<usize>>]) -> Relation {
    let a = r.arity();
    let mut best: Option<Relation> = None;
    let mut consider = |p: &[usize]| {
        let q = r.permute(p).expect("valid permutation");
        if best.as_ref().is_none_or(|b| q < *b) {
            best = Some(q);
        }
    };
    if a <= 3 {
        for p in &perms[a] {
            consider(p);
        }
        return best.expect("at least one permutation");
    }
    let d = r.domain().size();
    let mut sig = vec![vec![0usize; d]; a];
    for t in r.flat_tuples().chunks_exact(a) {
        for (c, &v) in t.iter().enumerate() {
            sig[c][v as usize] += 1;
        }
    }
    for s in &mut sig {
        s.sort_unstable();
    }
    let mut order: Vec<usize> = (0..a).collect();
    order.sort_by(|&x, &y| sig[x].cmp(&sig[y]).then(x.cmp(&y)));
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=a {
        if i == a || sig[order[i]] != sig[order[start]] {
            groups.push((start, i));
            start = i;
        }
    }
    let mut current = order.clone();
    fn rec(g: usize, groups: &[(usize, usize)], order: &[usize], cur: &mut Vec<usize>, perms: &[Vec<Vec<usize>>], f: &mut dyn FnMut(&[usize])) {
        if g == groups.len() {
            f(cur);
            return;
        }
        let (lo, hi) = groups[g];
        for p in &perms[hi - lo] {
            for (i, &x) in p.iter().enumerate() {
                cur[lo + i] = order[lo + x];
            }
            rec(g + 1, groups, order, cur, perms, f);
        }
    }
    rec(0, &groups, &order, &mut current, perms, &mut consider);
    best.expect("at least one permutation")
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

/// Budgets for saturation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationLimits {
    /// Largest arity kept in the result.
    pub max_arity: usize,
    /// Extra arity allowed for intermediate relations.
    pub aux: usize,
    /// Maximum number of candidate relations generated.
    pub work: usize,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        SaturationLimits { max_arity: 4, aux: 4, work: 2_000_000 }
    }
}

pub(crate) struct Saturation {
    domain: Domain,
    limits: SaturationLimits,
    entries: Vec<Entry>,
    canon: HashMap<Relation, usize>,
    perms: Vec<Vec<Vec<usize>>>,
    queue: BinaryHeap<Reverse<(usize, usize, usize)>>,
    premises: usize,
    work: usize,
    pub budget_limited: bool,
}

impl Saturation {
    pub fn new(domain: Domain, premises: &[Relation], limits: SaturationLimits) -> Self {
        let top = limits.max_arity + limits.aux;
        let widest = premises.iter().map(|r| r.arity()).max().unwrap_or(2).max(top).max(2);
        let mut s = Saturation {
            domain,
            limits,
            entries: Vec::new(),
            canon: HashMap::new(),
            perms: (0..=widest).map(permutations).collect(),
            queue: BinaryHeap::new(),
            premises: 0,
            work: 0,
            budget_limited: false,
        };
        s.insert(Relation::equality(domain), Origin::Equality);
        for (k, p) in premises.iter().enumerate() {
            s.insert(p.clone(), Origin::Premise(k));
        }
        s.premises = s.entries.len();
        s
    }

    /// Dedup key: canonical up to coordinate order for small arities, the relation itself above.
    fn canonical(&self, r: &Relation) -> Relation {
        if r.arity() > CANONICAL_ARITY {
            return r.clone();
        }
        canonical(r, &self.perms)
    }

    /// Adds `r` unless an equivalent relation up to coordinate order is known, then adds
    /// its projections.
    fn insert(&mut self, r: Relation, origin: Origin) {
        let mut pending = vec![(r, origin)];
        while let Some((r, origin)) = pending.pop() {
            let is_premise = matches!(origin, Origin::Premise(_) | Origin::Equality);
            if !is_premise && r.arity() > self.limits.max_arity + self.limits.aux {
                continue;
            }
            let key = self.canonical(&r);
            if self.canon.contains_key(&key) {
                continue;
            }
            let id = self.entries.len();
            self.canon.insert(key, id);
            let size = match &origin {
                Origin::Premise(_) | Origin::Equality => 1,
                Origin::Identify(of, ..) | Origin::Project(of, _) => self.entries[*of].size,
                Origin::Intersect(a, b, _) | Origin::Join { a, b, .. } => self.entries[*a].size + self.entries[*b].size,
            };
            self.queue.push(Reverse((r.arity(), size, id)));
            let a = r.arity();
            if a > 1 {
                for c in (0..a).rev() {
                    let keep: Vec<usize> = (0..a).filter(|&x| x != c).collect();
                    pending.push((r.project(&keep).expect("valid"), Origin::Project(id, c)));
                }
            }
            self.entries.push(Entry { flat: r.flat_tuples(), rel: r, size, origin });
        }
    }

    fn charge(&mut self) -> bool {
        self.work += 1;
        if self.work > self.limits.work {
            self.budget_limited = true;
        }
        !self.budget_limited
    }

    /// Runs until the queue empties, the budget ends, or `target` is derived.
    pub fn run(&mut self, target: Option<&Relation>) -> Option<usize> {
        let key = target.map(|t| self.canonical(t));
        let hit = |s: &Self| key.as_ref().and_then(|k| s.canon.get(k).copied());
        if let Some(id) = hit(self) {
            return Some(id);
        }
        while let Some(Reverse((_, _, id))) = self.queue.pop() {
            self.expand(id);
            if let Some(id) = hit(self) {
                return Some(id);
            }
            if self.budget_limited {
                return None;
            }
        }
        None
    }

    fn expand(&mut self, id: usize) {
        let n = self.entries[id].rel.clone();
        let a = n.arity();
        for i in 0..a {
            for j in i + 1..a {
                if !self.charge() {
                    return;
                }
                self.insert(identify(&n, i, j).expect("valid"), Origin::Identify(id, i, j));
            }
        }
        let top = self.limits.max_arity + self.limits.aux;
        // Each step conjoins one premise atom, so derivations are chains of atoms.
        for m_id in 0..self.premises {
            let m = self.entries[m_id].rel.clone();
            let b = m.arity();
            if a == b && a <= self.limits.max_arity.max(2) {
                let perms = self.perms[b].clone();
                for p in perms {
                    if !self.charge() {
                        return;
                    }
                    let q = m.permute(&p).expect("valid");
                    let r = n.intersection(&q).expect("same shape");
                    if r != n && r != q {
                        self.insert(r, Origin::Intersect(id, m_id, p));
                    }
                }
            }
            for i in 0..a {
                for j in 0..b {
                    if a + b - 1 <= top {
                        if !self.charge() {
                            return;
                        }
                        let pairs = vec![(i, j)];
                        let r = self.join(id, m_id, &pairs);
                        self.insert(r, Origin::Join { a: id, b: m_id, pairs });
                    }
                    if a + b - 2 > top || a < 2 || b < 2 {
                        continue;
                    }
                    for i2 in i + 1..a {
                        for j2 in 0..b {
                            if j2 == j {
                                continue;
                            }
                            if !self.charge() {
                                return;
                            }
                            let pairs = vec![(i, j), (i2, j2)];
                            let r = self.join(id, m_id, &pairs);
                            self.insert(r, Origin::Join { a: id, b: m_id, pairs });
                        }
                    }
                }
            }
            if a + b <= self.limits.max_arity || (a + b <= top && (a == 1 || b == 1)) {
                if !self.charge() {
                    return;
                }
                let r = self.join(id, m_id, &[]);
                self.insert(r, Origin::Join { a: id, b: m_id, pairs: vec![] });
            }
        }
    }

    fn join(&self, ia: usize, ib: usize, pairs: &[(usize, usize)]) -> Relation {
        let (ea, eb) = (&self.entries[ia], &self.entries[ib]);
        let (a, b) = (ea.rel.arity(), eb.rel.arity());
        let arity = a + b - pairs.len();
        let mut out = Relation::empty(self.domain, arity).expect("within limits");
        let mut t = vec![0u8; arity];
        let rest: Vec<usize> = (0..b).filter(|j| pairs.iter().all(|p| p.1 != *j)).collect();
        for ta in ea.flat.chunks_exact(a) {
            t[..a].copy_from_slice(ta);
            'b: for tb in eb.flat.chunks_exact(b) {
                for &(i, j) in pairs {
                    if tb[j] != ta[i] {
                        continue 'b;
                    }
                }
                for (p, &j) in rest.iter().enumerate() {
                    t[a + p] = tb[j];
                }
                out.insert_index(self.domain.encode(&t));
            }
        }
        out
    }

    pub fn relations(&self) -> impl Iterator<Item = &Relation> {
        self.entries.iter().map(|e| &e.rel)
    }

    /// A derivation of entry `id`, followed by a permutation producing exactly `target`.
    pub fn derivation(&self, id: usize, target: &Relation) -> Derivation {
        let mut steps = Vec::new();
        let mut memo: HashMap<usize, usize> = HashMap::new();
        let last = self.emit(id, &mut steps, &mut memo);
        let got = &self.entries[id].rel;
        if got != target {
            let perm = self.perms[got.arity()]
                .iter()
                .find(|p| got.permute(p).ok().as_ref() == Some(target))
                .expect("target equals the entry up to coordinate order")
                .clone();
            steps.push(Step::Permute { of: last, perm });
        }
        Derivation { steps }
    }

    fn emit(&self, id: usize, steps: &mut Vec<Step>, memo: &mut HashMap<usize, usize>) -> usize {
        if let Some(&k) = memo.get(&id) {
            return k;
        }
        let k = match &self.entries[id].origin {
            Origin::Premise(p) => push(steps, Step::Premise(*p)),
            Origin::Equality => push(steps, Step::Equality),
            Origin::Identify(of, i, j) => {
                let of = self.emit(*of, steps, memo);
                push(steps, Step::Identify { of, i: *i, j: *j })
            }
            Origin::Project(of, drop) => {
                let of = self.emit(*of, steps, memo);
                push(steps, Step::Project { of, drop: *drop })
            }
            Origin::Intersect(x, y, perm) => {
                let a = self.emit(*x, steps, memo);
                let b = self.emit(*y, steps, memo);
                let b = push(steps, Step::Permute { of: b, perm: perm.clone() });
                push(steps, Step::Intersect { a, b })
            }
            Origin::Join { a, b, pairs } => {
                let arity_a = self.entries[*a].rel.arity();
                let x = self.emit(*a, steps, memo);
                let y = self.emit(*b, steps, memo);
                let mut cur = push(steps, Step::Product { a: x, b: y });
                let mut dropped: Vec<usize> = Vec::new();
                for &(i, j) in pairs {
                    let shift = dropped.iter().filter(|&&d| d < j).count();
                    cur = push(steps, Step::Identify { of: cur, i, j: arity_a + j - shift });
                    dropped.push(j);
                }
                cur
            }
        };
        memo.insert(id, k);
        k
    }
}

fn push(steps: &mut Vec<Step>, s: Step) -> usize {
    steps.push(s);
    steps.len() - 1
}
