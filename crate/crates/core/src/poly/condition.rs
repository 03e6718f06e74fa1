use std::fmt;

use crate::error::{Error, Result};

/// One side of an identity: a function symbol applied to variables, or a bare variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// `symbol(x_{args[0]}, .., x_{args[n-1]})`, where `symbol` indexes the condition's symbol list.
    App { symbol: usize, args: Vec<usize> },
    Var(usize),
}

/// A finite set of identities over abstract function symbols.
///
/// Height-1 identities have function symbols on both sides. Bare-variable sides express
/// idempotent variants such as the Mal'cev identities `m(x,x,y) ≈ y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorCondition {
    pub name: String,
    pub symbols: Vec<(String, usize)>,
    pub identities: Vec<(Term, Term)>,
}

impl Term {
    fn max_var(&self) -> usize {
        match self {
            Term::App { args, .. } => args.iter().copied().max().unwrap_or(0),
            Term::Var(v) => *v,
        }
    }
}

impl MinorCondition {
    pub fn new(name: impl Into<String>, symbols: Vec<(String, usize)>, identities: Vec<(Term, Term)>) -> Result<Self> {
        let c = MinorCondition { name: name.into(), symbols, identities };
        for (l, r) in &c.identities {
            for t in [l, r] {
                if let Term::App { symbol, args } = t {
                    let (_, arity) = c.symbols.get(*symbol).ok_or_else(|| {
                        Error::Argument(format!("identity uses unknown symbol #{symbol}"))
                    })?;
                    if args.len() != *arity {
                        return Err(Error::Argument(format!(
                            "symbol `{}` applied to {} arguments",
                            c.symbols[*symbol].0,
                            args.len()
                        )));
                    }
                }
            }
        }
        if c.symbols.iter().any(|(_, a)| *a == 0) {
            return Err(Error::Argument("function symbols need arity at least 1".into()));
        }
        Ok(c)
    }

    /// Number of shared variables of identity `i`.
    pub fn var_count(&self, i: usize) -> usize {
        let (l, r) = &self.identities[i];
        l.max_var().max(r.max_var()) + 1
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|(_, a)| *a).max().unwrap_or(0)
    }

    pub fn is_height_one(&self) -> bool {
        self.identities
            .iter()
            .all(|(l, r)| matches!(l, Term::App { .. }) && matches!(r, Term::App { .. }))
    }

    /// Builtin conditions by name; `cycN` and `sym-N` take the arity in the name.
    pub fn builtin(name: &str) -> Result<MinorCondition> {
        let app = |args: &[usize]| Term::App { symbol: 0, args: args.to_vec() };
        let chain = |terms: Vec<Term>| -> Vec<(Term, Term)> {
            terms.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
        };
        let one = |sym: &str, arity: usize, ids: Vec<(Term, Term)>| {
            MinorCondition::new(name, vec![(sym.to_string(), arity)], ids)
        };
        // Variables: x = 0, y = 1, z = 2.
        let (x, y, z) = (0, 1, 2);
        match name {
            "malcev" => one("m", 3, vec![(app(&[x, x, y]), Term::Var(y)), (app(&[y, x, x]), Term::Var(y))]),
            "quasi-malcev" => one(
                "m",
                3,
                vec![(app(&[x, x, y]), app(&[y, y, y])), (app(&[y, x, x]), app(&[y, y, y]))],
            ),
            "majority" => one(
                "m",
                3,
                vec![
                    (app(&[x, x, y]), Term::Var(x)),
                    (app(&[x, y, x]), Term::Var(x)),
                    (app(&[y, x, x]), Term::Var(x)),
                ],
            ),
            "quasi-majority" => one("m", 3, chain(vec![app(&[x, y, y]), app(&[y, x, y]), app(&[y, y, x]), app(&[y, y, y])])),
            "minority" => one(
                "m",
                3,
                vec![
                    (app(&[x, y, y]), Term::Var(x)),
                    (app(&[y, x, y]), Term::Var(x)),
                    (app(&[y, y, x]), Term::Var(x)),
                ],
            ),
            "quasi-minority" => one("m", 3, chain(vec![app(&[x, y, y]), app(&[y, x, y]), app(&[y, y, x]), app(&[x, x, x])])),
            "sigma1" => {
                let mut ids = chain(vec![app(&[x, y, y]), app(&[y, x, y]), app(&[y, y, x]), app(&[y, y, y])]);
                ids.push((app(&[x, y, z]), app(&[z, y, x])));
                one("m", 3, ids)
            }
            "sigma2" => {
                let mut ids = symmetric_identities(5);
                ids.push((app(&[x, x, y, y, z]), app(&[x, y, y, z, z])));
                one("f", 5, ids)
            }
            "const" => one("f", 1, vec![(app(&[x]), app(&[y]))]),
            _ => {
                if let Some(n) = name.strip_prefix("cyc").and_then(|n| n.parse::<usize>().ok()) {
                    if n < 2 {
                        return Err(Error::Argument("cyclic conditions need arity at least 2".into()));
                    }
                    let args: Vec<usize> = (0..n).collect();
                    let rotated: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                    return one("c", n, vec![(app(&args), app(&rotated))]);
                }
                if let Some(n) = name.strip_prefix("sym-").and_then(|n| n.parse::<usize>().ok()) {
                    if n < 2 {
                        return Err(Error::Argument("symmetric conditions need arity at least 2".into()));
                    }
                    return one("f", n, symmetric_identities(n));
                }
                Err(Error::Lookup(name.to_string()))
            }
        }
    }

    /// Parses identities such as `f(x,y,y) = f(y,x,x) = y`, one chain per line; `#` starts a comment.
    pub fn parse(name: &str, text: &str) -> Result<MinorCondition> {
        let mut symbols: Vec<(String, usize)> = Vec::new();
        let mut identities = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut vars: Vec<String> = Vec::new();
            let mut terms = Vec::new();
            for part in line.split(['=', '≈']).map(str::trim) {
                terms.push(parse_term(part, &mut symbols, &mut vars).map_err(|e| {
                    Error::Input(format!("line {}: {e}", lineno + 1))
                })?);
            }
            if terms.len() < 2 {
                return Err(Error::Input(format!("line {}: an identity needs two sides", lineno + 1)));
            }
            for w in terms.windows(2) {
                identities.push((w[0].clone(), w[1].clone()));
            }
        }
        MinorCondition::new(name, symbols, identities)
    }
}

fn parse_term(text: &str, symbols: &mut Vec<(String, usize)>, vars: &mut Vec<String>) -> std::result::Result<Term, String> {
    let mut var_id = |v: &str| -> std::result::Result<usize, String> {
        if v.is_empty() || !v.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(format!("bad variable `{v}`"));
        }
        Ok(match vars.iter().position(|w| w == v) {
            Some(i) => i,
            None => {
                vars.push(v.to_string());
                vars.len() - 1
            }
        })
    };
    match text.find('(') {
        None => Ok(Term::Var(var_id(text)?)),
        Some(open) => {
            let sym = text[..open].trim();
            let inner = text[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| format!("unbalanced parentheses in `{text}`"))?;
            if sym.is_empty() {
                return Err(format!("missing function symbol in `{text}`"));
            }
            let args = inner
                .split(',')
                .map(|v| var_id(v.trim()))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let symbol = match symbols.iter().position(|(s, _)| s == sym) {
                Some(i) if symbols[i].1 == args.len() => i,
                Some(_) => return Err(format!("symbol `{sym}` used with two arities")),
                None => {
                    symbols.push((sym.to_string(), args.len()));
                    symbols.len() - 1
                }
            };
            Ok(Term::App { symbol, args })
        }
    }
}

fn symmetric_identities(n: usize) -> Vec<(Term, Term)> {
    let args: Vec<usize> = (0..n).collect();
    let mut swap = args.clone();
    swap.swap(0, 1);
    let rotated: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let app = |a: Vec<usize>| Term::App { symbol: 0, args: a };
    vec![(app(args.clone()), app(swap)), (app(args), app(rotated))]
}

/// Names accepted by [`MinorCondition::builtin`] besides the `cycN` / `sym-N` families.
pub const BUILTIN_CONDITIONS: &[&str] = &[
    "malcev", "quasi-malcev", "majority", "quasi-majority", "minority", "quasi-minority", "cyc2", "cyc3",
    "sigma1", "sigma2", "const",
];

impl fmt::Display for MinorCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
        let var = |v: usize| NAMES.get(v).map_or(format!("x{v}"), |s| s.to_string());
        let term = |t: &Term| match t {
            Term::Var(v) => var(*v),
            Term::App { symbol, args } => {
                let a: Vec<String> = args.iter().map(|&v| var(v)).collect();
                format!("{}({})", self.symbols[*symbol].0, a.join(","))
            }
        };
        for (i, (l, r)) in self.identities.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} = {}", term(l), term(r))?;
        }
        Ok(())
    }
}
