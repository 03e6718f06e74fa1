use super::condition::{MinorCondition, Term};
use super::csp::{full_mask, Csp, Solve};
use crate::algebra::{advance, Domain, Operation, Relation, Structure};
use crate::error::{Error, Result};

/// Limits for operation search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_arity: usize,
    pub node_limit: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_arity: 5, node_limit: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    Exhausted,
}

/// Result of a complete search; `witness` is present exactly when something was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<Vec<(String, Operation)>>,
    pub nodes: u64,
    pub free_cells: usize,
    pub constraints: usize,
}

impl SearchOutcome {
    pub fn found(&self) -> bool {
        self.status == SearchStatus::Found
    }

    pub fn operation(&self, symbol: &str) -> Option<&Operation> {
        self.witness.as_ref()?.iter().find(|(s, _)| s == symbol).map(|(_, f)| f)
    }
}

/// Restricts the value of `symbol` at `args` to `allowed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueConstraint {
    pub symbol: usize,
    pub args: Vec<u8>,
    pub allowed: Vec<u8>,
}

/// Requires the values of the listed cells, read in order, to form a tuple of `rel`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CellConstraint {
    pub cells: Vec<(usize, Vec<u8>)>,
    pub rel: Relation,
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, mut a: u32) -> u32 {
        while self.0[a as usize] != a {
            let p = self.0[self.0[a as usize] as usize];
            self.0[a as usize] = p;
            a = p;
        }
        a
    }

    fn union(&mut self, a: u32, b: u32) {
        let (a, b) = (self.find(a), self.find(b));
        // The smaller index stays the root so class order is deterministic.
        if a < b {
            self.0[b as usize] = a;
        } else if b < a {
            self.0[a as usize] = b;
        }
    }
}

/// Maximum number of column choices enumerated while generating preservation constraints.
const MAX_COLUMN_CHOICES: usize = 60_000_000;

pub(crate) struct Layout {
    pub domain: Domain,
    pub offsets: Vec<usize>,
    pub arities: Vec<usize>,
    pub class_of: Vec<u32>,
    pub class_mask: Vec<u32>,
    pub contradictory: bool,
}

impl Layout {
    pub fn cell(&self, symbol: usize, args: &[u8]) -> usize {
        self.offsets[symbol] + self.domain.encode(args)
    }

    pub fn num_classes(&self) -> usize {
        self.class_mask.len()
    }
}

/// Collapses all cells of all symbols into classes forced equal by the identities.
pub(crate) fn layout(domain: Domain, cond: &MinorCondition) -> Result<Layout> {
    let d = domain.size();
    let mut offsets = Vec::new();
    let mut total = 0usize;
    for (_, a) in &cond.symbols {
        offsets.push(total);
        total += domain.tuple_count(*a)?;
    }
    let mut uf = UnionFind((0..total as u32).collect());
    let mut fixed = vec![full_mask(d); total];
    let mut contradictory = false;
    for i in 0..cond.identities.len() {
        let (l, r) = &cond.identities[i];
        let v = cond.var_count(i);
        let mut a = vec![0u8; v];
        let mut args = Vec::new();
        loop {
            let mut side = |t: &Term| -> std::result::Result<usize, u8> {
                match t {
                    Term::Var(j) => Err(a[*j]),
                    Term::App { symbol, args: map } => {
                        args.clear();
                        args.extend(map.iter().map(|&j| a[j]));
                        Ok(offsets[*symbol] + domain.encode(&args))
                    }
                }
            };
            match (side(l), side(r)) {
                (Ok(x), Ok(y)) => uf.union(x as u32, y as u32),
                (Ok(x), Err(val)) | (Err(val), Ok(x)) => fixed[x] &= 1 << val,
                (Err(p), Err(q)) => contradictory |= p != q,
            }
            if !advance(&mut a, d) {
                break;
            }
        }
    }
    let mut class_of = vec![0u32; total];
    let mut root_class = vec![u32::MAX; total];
    let mut class_mask = Vec::new();
    for c in 0..total {
        let root = uf.find(c as u32) as usize;
        if root_class[root] == u32::MAX {
            root_class[root] = class_mask.len() as u32;
            class_mask.push(full_mask(d));
        }
        let id = root_class[root];
        class_of[c] = id;
        class_mask[id as usize] &= fixed[c];
    }
    contradictory |= class_mask.iter().any(|&m| m == 0);
    Ok(Layout {
        domain,
        offsets,
        arities: cond.symbols.iter().map(|(_, a)| *a).collect(),
        class_of,
        class_mask,
        contradictory,
    })
}

/// Adds the constraints saying that symbol `s` preserves `rel`.
pub(crate) fn add_preservation(csp: &mut Csp, lay: &Layout, s: usize, rel: &Relation) -> Result<()> {
    if rel.is_empty() || rel.is_full() {
        return Ok(());
    }
    let n = lay.arities[s];
    let k = rel.arity();
    let flat = rel.flat_tuples();
    let m = flat.len() / k;
    let choices = (m as f64).powi(n as i32);
    if choices > MAX_COLUMN_CHOICES as f64 {
        return Err(Error::Capability(format!(
            "preservation of a {m}-tuple relation by a {n}-ary symbol needs too many column choices"
        )));
    }
    let table = csp.table(rel);
    let d = lay.domain.size();
    let base = lay.offsets[s];
    let mut partial = vec![0usize; (n + 1) * k];
    let mut choice = vec![0usize; n];
    let mut vars = vec![0u32; k];
    let mut level = 0;
    loop {
        if level == n {
            for j in 0..k {
                vars[j] = lay.class_of[base + partial[n * k + j]];
            }
            csp.constrain(table, &vars);
            level -= 1;
            choice[level] += 1;
        }
        if choice[level] == m {
            if level == 0 {
                return Ok(());
            }
            choice[level] = 0;
            level -= 1;
            choice[level] += 1;
            continue;
        }
        let col = &flat[choice[level] * k..(choice[level] + 1) * k];
        for j in 0..k {
            partial[(level + 1) * k + j] = partial[level * k + j] * d + col[j] as usize;
        }
        level += 1;
    }
}

pub(crate) fn build_csp(
    rels: &[Relation],
    domain: Domain,
    cond: &MinorCondition,
    values: &[ValueConstraint],
    cells: &[CellConstraint],
    config: &SearchConfig,
) -> Result<(Layout, Csp)> {
    if let Some((s, a)) = cond.symbols.iter().find(|(_, a)| *a > config.max_arity) {
        return Err(Error::Capability(format!(
            "symbol `{s}` has arity {a}, above the configured bound {}",
            config.max_arity
        )));
    }
    if domain.size() > 32 {
        return Err(Error::Capability("operation search supports domains of at most 32 elements".into()));
    }
    let lay = layout(domain, cond)?;
    let mut csp = Csp::new(lay.num_classes(), domain.size());
    csp.node_limit = config.node_limit;
    for (c, &m) in lay.class_mask.iter().enumerate() {
        csp.restrict(c, m);
    }
    if lay.contradictory {
        csp.restrict(0, 0);
    }
    for vc in values {
        if vc.symbol >= lay.arities.len() || vc.args.len() != lay.arities[vc.symbol] {
            return Err(Error::Argument("value constraint does not match a symbol".into()));
        }
        domain.check_tuple(&vc.args)?;
        let mask = vc.allowed.iter().filter(|&&a| domain.contains(a)).fold(0u32, |m, &a| m | 1 << a);
        csp.restrict(lay.class_of[lay.cell(vc.symbol, &vc.args)] as usize, mask);
    }
    for s in 0..lay.arities.len() {
        for r in rels {
            add_preservation(&mut csp, &lay, s, r)?;
        }
    }
    for cc in cells {
        let vars: Vec<u32> = cc.cells.iter().map(|(s, args)| lay.class_of[lay.cell(*s, args)]).collect();
        let t = csp.table(&cc.rel);
        csp.constrain(t, &vars);
    }
    Ok((lay, csp))
}

pub(crate) fn witness_from(lay: &Layout, cond: &MinorCondition, values: &[u8]) -> Result<Vec<(String, Operation)>> {
    cond.symbols
        .iter()
        .enumerate()
        .map(|(s, (name, arity))| {
            let cells = lay.domain.tuple_count(*arity)?;
            let table = (0..cells).map(|i| values[lay.class_of[lay.offsets[s] + i] as usize]).collect();
            Ok((name.clone(), Operation::new(lay.domain, *arity, table)?))
        })
        .collect()
}

/// Checks every identity of `cond` on every input.
pub fn satisfies_identities(cond: &MinorCondition, ops: &[(String, Operation)]) -> bool {
    let Some(domain) = ops.first().map(|(_, f)| f.domain()) else {
        return cond.identities.is_empty();
    };
    for i in 0..cond.identities.len() {
        let (l, r) = &cond.identities[i];
        let mut a = vec![0u8; cond.var_count(i)];
        loop {
            let eval = |t: &Term| match t {
                Term::Var(j) => a[*j],
                Term::App { symbol, args } => {
                    let x: Vec<u8> = args.iter().map(|&j| a[j]).collect();
                    ops[*symbol].1.eval(&x)
                }
            };
            if eval(l) != eval(r) {
                return false;
            }
            if !advance(&mut a, domain.size()) {
                break;
            }
        }
    }
    true
}

/// Searches for polymorphisms of `s` satisfying `cond`, subject to optional value constraints.
pub fn search_operation(
    s: &Structure,
    cond: &MinorCondition,
    values: &[ValueConstraint],
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    search_relations(&s.relation_list(), s.domain(), cond, values, &[], config)
}

pub(crate) fn search_relations(
    rels: &[Relation],
    domain: Domain,
    cond: &MinorCondition,
    values: &[ValueConstraint],
    cells: &[CellConstraint],
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let (lay, mut csp) = build_csp(rels, domain, cond, values, cells, config)?;
    let free_cells = lay.num_classes();
    let constraints = csp.num_constraints();
    match csp.first_solution() {
        Solve::Found(v) => {
            let witness = witness_from(&lay, cond, &v)?;
            verify_witness(rels, cond, values, cells, &witness)?;
            Ok(SearchOutcome { status: SearchStatus::Found, witness: Some(witness), nodes: csp.nodes, free_cells, constraints })
        }
        Solve::Exhausted => Ok(SearchOutcome { status: SearchStatus::Exhausted, witness: None, nodes: csp.nodes, free_cells, constraints }),
        Solve::Limit => Err(Error::Capability(format!(
            "search node budget of {} exhausted",
            config.node_limit.unwrap_or(0)
        ))),
    }
}

fn verify_witness(
    rels: &[Relation],
    cond: &MinorCondition,
    values: &[ValueConstraint],
    cells: &[CellConstraint],
    witness: &[(String, Operation)],
) -> Result<()> {
    let bad = |what: &str| Err(Error::Validation(format!("search witness failed re-verification: {what}")));
    for (_, f) in witness {
        for r in rels {
            if !f.preserves(r)? {
                return bad("a relation is not preserved");
            }
        }
    }
    if !satisfies_identities(cond, witness) {
        return bad("an identity fails");
    }
    for vc in values {
        if !vc.allowed.contains(&witness[vc.symbol].1.eval(&vc.args)) {
            return bad("a value constraint fails");
        }
    }
    for cc in cells {
        let t: Vec<u8> = cc.cells.iter().map(|(s, args)| witness[*s].1.eval(args)).collect();
        if !cc.rel.contains(&t) {
            return bad("a cell constraint fails");
        }
    }
    Ok(())
}
