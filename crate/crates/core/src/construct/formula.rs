use std::fmt;

use crate::algebra::{all_tuples, Domain, Relation, Structure};
use crate::error::{Error, Result};

/// A coordinate of a power-domain variable; indices are zero-based internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoordRef {
    /// Coordinate `coord` of free variable `var`, written `x<var+1>.<coord+1>`.
    Free { var: usize, coord: usize },
    /// Coordinate `coord` of existential variable `var`, written `e<var+1>.<coord+1>`.
    Exists { var: usize, coord: usize },
}

impl CoordRef {
    fn coord(self) -> usize {
        match self {
            CoordRef::Free { coord, .. } | CoordRef::Exists { coord, .. } => coord,
        }
    }
}

impl fmt::Display for CoordRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordRef::Free { var, coord } => write!(f, "x{}.{}", var + 1, coord + 1),
            CoordRef::Exists { var, coord } => write!(f, "e{}.{}", var + 1, coord + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    /// Premise relation name; `=` is equality.
    pub relation: String,
    pub args: Vec<CoordRef>,
}

/// A conjunction of atoms over coordinates of power-domain variables.
///
/// Text form: `rel(name; x1.1, e1.2) & rel(=; x1.2, x2.1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PpFormula {
    pub arity: usize,
    pub atoms: Vec<Atom>,
    /// Existential variables referenced by the atoms, zero-based and sorted.
    pub existentials: Vec<usize>,
}

fn formula_err(msg: impl Into<String>) -> Error {
    Error::Formula(msg.into())
}

fn parse_ref(text: &str) -> Result<CoordRef> {
    let bad = || formula_err(format!("bad coordinate reference `{text}`"));
    let (kind, rest) = text.split_at(text.chars().next().map_or(0, char::len_utf8));
    let (var, coord) = rest.split_once('.').ok_or_else(bad)?;
    let var: usize = var.parse().map_err(|_| bad())?;
    let coord: usize = coord.parse().map_err(|_| bad())?;
    if var == 0 || coord == 0 {
        return Err(formula_err(format!("references are 1-based: `{text}`")));
    }
    match kind {
        "x" => Ok(CoordRef::Free { var: var - 1, coord: coord - 1 }),
        "e" => Ok(CoordRef::Exists { var: var - 1, coord: coord - 1 }),
        _ => Err(bad()),
    }
}

impl PpFormula {
    pub fn parse(arity: usize, text: &str) -> Result<PpFormula> {
        if arity == 0 {
            return Err(formula_err("a defined relation needs arity at least 1"));
        }
        let mut atoms = Vec::new();
        for part in text.split(['&', '∧']).map(str::trim) {
            if part.is_empty() {
                return Err(formula_err("empty conjunct"));
            }
            let inner = part
                .strip_prefix("rel(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| formula_err(format!("expected `rel(name; refs)`, found `{part}`")))?;
            let (name, refs) = inner
                .split_once(';')
                .ok_or_else(|| formula_err(format!("missing `;` in `{part}`")))?;
            let name = name.trim();
            if name.is_empty() {
                return Err(formula_err(format!("missing relation name in `{part}`")));
            }
            let args = refs.split(',').map(|r| parse_ref(r.trim())).collect::<Result<Vec<_>>>()?;
            atoms.push(Atom { relation: name.to_string(), args });
        }
        let mut existentials = Vec::new();
        for a in &atoms {
            for r in &a.args {
                match *r {
                    CoordRef::Free { var, .. } if var >= arity => {
                        return Err(formula_err(format!("{r} exceeds the arity {arity}")));
                    }
                    CoordRef::Exists { var, .. } if !existentials.contains(&var) => existentials.push(var),
                    _ => {}
                }
            }
        }
        existentials.sort_unstable();
        Ok(PpFormula { arity, atoms, existentials })
    }

    /// Evaluates the formula in the `n`-th power of `s`; power elements are encoded leftmost-major.
    pub fn evaluate(&self, s: &Structure, n: usize) -> Result<Relation> {
        let base = s.domain();
        let power = power_domain(base, n)?;
        let mut resolved: Vec<(&Relation, &[CoordRef])> = Vec::with_capacity(self.atoms.len());
        let equality = Relation::equality(base);
        for a in &self.atoms {
            let rel = if a.relation == "=" {
                &equality
            } else {
                s.relation(&a.relation)
                    .ok_or_else(|| formula_err(format!("unknown premise `{}`", a.relation)))?
            };
            if rel.arity() != a.args.len() {
                return Err(formula_err(format!(
                    "`{}` has arity {} but is applied to {} arguments",
                    a.relation,
                    rel.arity(),
                    a.args.len()
                )));
            }
            if let Some(r) = a.args.iter().find(|r| r.coord() >= n) {
                return Err(formula_err(format!("{r} exceeds the power dimension {n}")));
            }
            resolved.push((rel, &a.args));
        }
        // Existential coordinates actually used, each an independent base-domain variable.
        let mut slots: Vec<CoordRef> = resolved
            .iter()
            .flat_map(|(_, args)| args.iter().copied())
            .filter(|r| matches!(r, CoordRef::Exists { .. }))
            .collect();
        slots.sort_unstable();
        slots.dedup();
        let (ground, open): (Vec<_>, Vec<_>) = resolved
            .iter()
            .partition(|(_, args)| args.iter().all(|r| matches!(r, CoordRef::Free { .. })));
        let mut free_vals = vec![0u8; self.arity * n];
        let mut exist_vals = vec![0u8; slots.len()];
        let value = |r: &CoordRef, free: &[u8], ex: &[u8]| -> u8 {
            match *r {
                CoordRef::Free { var, coord } => free[var * n + coord],
                CoordRef::Exists { .. } => ex[slots.binary_search(r).expect("collected")],
            }
        };
        let holds = |atoms: &[&(&Relation, &[CoordRef])], free: &[u8], ex: &[u8]| {
            atoms.iter().all(|(rel, args)| {
                let t: Vec<u8> = args.iter().map(|r| value(r, free, ex)).collect();
                rel.contains(&t)
            })
        };
        let ground: Vec<&(&Relation, &[CoordRef])> = ground.into_iter().collect();
        let open: Vec<&(&Relation, &[CoordRef])> = open.into_iter().collect();
        Relation::from_predicate(power, self.arity, |t| {
            for (v, &e) in t.iter().enumerate() {
                base.decode_into(e as usize, &mut free_vals[v * n..(v + 1) * n]);
            }
            if !holds(&ground, &free_vals, &[]) {
                return false;
            }
            if open.is_empty() {
                return true;
            }
            exist_vals.iter_mut().for_each(|x| *x = 0);
            loop {
                if holds(&open, &free_vals, &exist_vals) {
                    return true;
                }
                if !crate::algebra::advance(&mut exist_vals, base.size()) {
                    return false;
                }
            }
        })
    }
}

impl fmt::Display for PpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            let args: Vec<String> = a.args.iter().map(ToString::to_string).collect();
            write!(f, "rel({}; {})", a.relation, args.join(", "))?;
        }
        Ok(())
    }
}

/// The domain `A^n`, whose elements are tuples encoded leftmost-major.
pub fn power_domain(base: Domain, n: usize) -> Result<Domain> {
    if n == 0 {
        return Err(Error::Argument("power dimension must be positive".into()));
    }
    let size = base.tuple_count(n)?;
    Domain::new(size).map_err(|_| {
        Error::Capability(format!("a power with {size} elements exceeds the supported domain size"))
    })
}

/// The structure on `A^n` whose relations are defined by the named formulas.
pub fn build_pp_power(s: &Structure, n: usize, formulas: &[(String, PpFormula)]) -> Result<Structure> {
    let power = power_domain(s.domain(), n)?;
    let rels = formulas
        .iter()
        .map(|(name, phi)| Ok((name.clone(), phi.evaluate(s, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Structure::new(power, rels)
}

/// Encodes a tuple of base elements as a power element.
pub fn power_element(base: Domain, tuple: &[u8]) -> Result<u8> {
    base.check_tuple(tuple)?;
    Ok(base.encode(tuple) as u8)
}

/// Every tuple of `A^n`, indexed by power element.
pub fn power_tuples(base: Domain, n: usize) -> Vec<Vec<u8>> {
    all_tuples(base, n).collect()
}
