//! Finite-domain constraint solver shared by polymorphism and homomorphism search.
//!
//! Variables range over `0..d` with `d ≤ 32` and carry a bitmask domain. Constraints are
//! table constraints propagated to generalized arc consistency by scanning allowed tuples.

use std::collections::{HashMap, HashSet};

use crate::algebra::Relation;

pub(crate) struct Table {
    arity: usize,
    flat: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Solve {
    Found(Vec<u8>),
    Exhausted,
    Limit,
}

pub(crate) struct Csp {
    d: usize,
    doms: Vec<u32>,
    tables: Vec<Table>,
    table_ids: HashMap<Relation, u32>,
    con_table: Vec<u32>,
    con_start: Vec<u32>,
    con_vars: Vec<u32>,
    con_repeats: Vec<bool>,
    seen: HashSet<(u32, [u32; 4])>,
    seen_long: HashSet<(u32, Vec<u32>)>,
    watch: Vec<Vec<u32>>,
    injective: bool,
    pub nodes: u64,
    pub node_limit: Option<u64>,
    failed: bool,
}

impl Csp {
    pub fn new(num_vars: usize, d: usize) -> Self {
        assert!(d >= 1 && d <= 32, "value range must fit a 32-bit mask");
        Csp {
            d,
            doms: vec![full_mask(d); num_vars],
            tables: Vec::new(),
            table_ids: HashMap::new(),
            con_table: Vec::new(),
            con_start: vec![0],
            con_vars: Vec::new(),
            con_repeats: Vec::new(),
            seen: HashSet::new(),
            seen_long: HashSet::new(),
            watch: vec![Vec::new(); num_vars],
            injective: false,
            nodes: 0,
            node_limit: None,
            failed: false,
        }
    }

    pub fn num_constraints(&self) -> usize {
        self.con_table.len()
    }

    /// Requires all variables to take pairwise distinct values.
    pub fn set_injective(&mut self) {
        self.injective = true;
    }

    pub fn restrict(&mut self, var: usize, mask: u32) {
        self.doms[var] &= mask;
        if self.doms[var] == 0 {
            self.failed = true;
        }
    }

    pub fn table(&mut self, rel: &Relation) -> u32 {
        debug_assert_eq!(rel.domain().size(), self.d);
        if let Some(&id) = self.table_ids.get(rel) {
            return id;
        }
        let id = self.tables.len() as u32;
        self.tables.push(Table { arity: rel.arity(), flat: rel.flat_tuples() });
        self.table_ids.insert(rel.clone(), id);
        id
    }

    /// Adds `(vars) ∈ table`, skipping exact duplicates.
    pub fn constrain(&mut self, table: u32, vars: &[u32]) {
        debug_assert_eq!(self.tables[table as usize].arity, vars.len());
        if vars.len() <= 4 {
            let mut key = [u32::MAX; 4];
            key[..vars.len()].copy_from_slice(vars);
            if !self.seen.insert((table, key)) {
                return;
            }
        } else if !self.seen_long.insert((table, vars.to_vec())) {
            return;
        }
        let t = &self.tables[table as usize];
        if t.flat.is_empty() {
            self.failed = true;
        }
        let id = self.con_table.len() as u32;
        let mut repeats = false;
        for (i, &v) in vars.iter().enumerate() {
            if vars[..i].contains(&v) {
                repeats = true;
            } else {
                self.watch[v as usize].push(id);
            }
        }
        self.con_table.push(table);
        self.con_vars.extend_from_slice(vars);
        self.con_start.push(self.con_vars.len() as u32);
        self.con_repeats.push(repeats);
    }

    fn revise(&self, c: usize, doms: &mut [u32], queue: &mut Vec<u32>, queued: &mut [bool]) -> bool {
        let vars = &self.con_vars[self.con_start[c] as usize..self.con_start[c + 1] as usize];
        let table = &self.tables[self.con_table[c] as usize];
        let k = vars.len();
        let mut support = [0u32; 8];
        let mut support_long;
        let support: &mut [u32] = if k <= 8 {
            &mut support[..k]
        } else {
            support_long = vec![0u32; k];
            &mut support_long
        };
        let repeats = self.con_repeats[c];
        'tuples: for t in table.flat.chunks_exact(k) {
            for j in 0..k {
                if doms[vars[j] as usize] >> t[j] & 1 == 0 {
                    continue 'tuples;
                }
            }
            if repeats {
                for j in 0..k {
                    for i in 0..j {
                        if vars[i] == vars[j] && t[i] != t[j] {
                            continue 'tuples;
                        }
                    }
                }
            }
            for j in 0..k {
                support[j] |= 1 << t[j];
            }
        }
        for j in 0..k {
            let v = vars[j] as usize;
            let new = doms[v] & support[j];
            if new == 0 {
                return false;
            }
            if new != doms[v] {
                doms[v] = new;
                for &w in &self.watch[v] {
                    if !queued[w as usize] {
                        queued[w as usize] = true;
                        queue.push(w);
                    }
                }
            }
        }
        true
    }

    fn propagate(&self, doms: &mut [u32], start: &[u32]) -> bool {
        let mut queued = vec![false; self.con_table.len()];
        let mut queue: Vec<u32> = Vec::new();
        for &c in start {
            if !queued[c as usize] {
                queued[c as usize] = true;
                queue.push(c);
            }
        }
        loop {
            while let Some(c) = queue.pop() {
                queued[c as usize] = false;
                if !self.revise(c as usize, doms, &mut queue, &mut queued) {
                    return false;
                }
            }
            if !self.injective {
                return true;
            }
            // Singleton values are removed from every other variable.
            let mut changed = false;
            for v in 0..doms.len() {
                if doms[v].count_ones() == 1 {
                    for w in 0..doms.len() {
                        if w != v && doms[w] & doms[v] != 0 {
                            doms[w] &= !doms[v];
                            if doms[w] == 0 {
                                return false;
                            }
                            changed = true;
                            for &c in &self.watch[w] {
                                if !queued[c as usize] {
                                    queued[c as usize] = true;
                                    queue.push(c);
                                }
                            }
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn pick(&self, doms: &[u32]) -> Option<usize> {
        let mut best: Option<(u32, usize, usize)> = None;
        for (v, &m) in doms.iter().enumerate() {
            let size = m.count_ones();
            if size <= 1 {
                continue;
            }
            let degree = self.watch[v].len();
            let better = match best {
                None => true,
                Some((bs, bd, _)) => size < bs || (size == bs && degree > bd),
            };
            if better {
                best = Some((size, degree, v));
            }
        }
        best.map(|(_, _, v)| v)
    }

    /// Depth-first search calling `visit` on each solution until it returns false.
    ///
    /// Returns false if the node limit stopped the search.
    pub fn search(&mut self, mut visit: impl FnMut(&[u8]) -> bool) -> bool {
        if self.failed {
            return true;
        }
        let mut doms = self.doms.clone();
        let all: Vec<u32> = (0..self.con_table.len() as u32).collect();
        if !self.propagate(&mut doms, &all) {
            return true;
        }
        let mut stop = false;
        let mut limited = false;
        self.dfs(doms, &mut visit, &mut stop, &mut limited);
        !limited
    }

    fn dfs(&mut self, doms: Vec<u32>, visit: &mut impl FnMut(&[u8]) -> bool, stop: &mut bool, limited: &mut bool) {
        self.nodes += 1;
        if let Some(limit) = self.node_limit {
            if self.nodes > limit {
                *limited = true;
                *stop = true;
                return;
            }
        }
        let Some(v) = self.pick(&doms) else {
            let values: Vec<u8> = doms.iter().map(|m| m.trailing_zeros() as u8).collect();
            if !visit(&values) {
                *stop = true;
            }
            return;
        };
        let mut mask = doms[v];
        while mask != 0 && !*stop {
            let a = mask.trailing_zeros();
            mask &= mask - 1;
            let mut next = doms.clone();
            next[v] = 1 << a;
            let watchers = self.watch[v].clone();
            if self.propagate(&mut next, &watchers) {
                self.dfs(next, visit, stop, limited);
            }
        }
    }

    /// Marks the current constraint set so later additions can be undone.
    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint { constraints: self.con_table.len(), failed: self.failed }
    }

    /// Removes every constraint added after `cp`.
    pub fn rollback(&mut self, cp: Checkpoint) {
        while self.con_table.len() > cp.constraints {
            let id = self.con_table.len() - 1;
            let table = self.con_table.pop().expect("nonempty");
            let start = self.con_start[id] as usize;
            let vars: Vec<u32> = self.con_vars.drain(start..).collect();
            self.con_start.pop();
            self.con_repeats.pop();
            for &v in &vars {
                let w = &mut self.watch[v as usize];
                if w.last() == Some(&(id as u32)) {
                    w.pop();
                }
            }
            if vars.len() <= 4 {
                let mut key = [u32::MAX; 4];
                key[..vars.len()].copy_from_slice(&vars);
                self.seen.remove(&(table, key));
            } else {
                self.seen_long.remove(&(table, vars));
            }
        }
        self.failed = cp.failed;
    }

    pub fn first_solution(&mut self) -> Solve {
        let mut found = None;
        let complete = self.search(|s| {
            found = Some(s.to_vec());
            false
        });
        match found {
            Some(s) => Solve::Found(s),
            None if complete => Solve::Exhausted,
            None => Solve::Limit,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Checkpoint {
    constraints: usize,
    failed: bool,
}

pub(crate) fn full_mask(d: usize) -> u32 {
    if d == 32 {
        u32::MAX
    } else {
        (1u32 << d) - 1
    }
}
