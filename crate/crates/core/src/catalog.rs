//! Named relations, structures and operations used throughout the crate.
//!
//! Two-row matrices such as ψ₂ are read column-wise: the top entry is the argument and the
//! bottom entry its image, so `psi2 = {(0,1),(1,0),(2,2)}`.

use crate::algebra::{Domain, Operation, Partition, Relation, Structure};
use crate::error::{Error, Result};

fn d3() -> Domain {
    Domain::new(3).expect("3 is a valid domain size")
}

fn d2() -> Domain {
    Domain::new(2).expect("2 is a valid domain size")
}

fn pairs(pairs: &[(u8, u8)]) -> Relation {
    Relation::from_tuples(d3(), 2, pairs.iter().map(|&(a, b)| [a, b])).expect("valid pairs")
}

/// Minority on a two-element set: the value occurring an odd number of times.
pub fn minority(x: u8, y: u8, z: u8) -> u8 {
    if x == y {
        z
    } else if x == z {
        y
    } else {
        x
    }
}

fn distinct3(x: u8, y: u8, z: u8) -> bool {
    x != y && y != z && x != z
}

fn transposition_fixing(i: u8) -> [u8; 3] {
    let mut p = [0, 1, 2];
    let others: Vec<u8> = (0..3).filter(|&a| a != i).collect();
    p[others[0] as usize] = others[1];
    p[others[1] as usize] = others[0];
    p
}

/// The μ_i partition `{i} | rest` of {0,1,2}.
pub fn mu_partition(i: u8) -> Partition {
    Partition::singleton_split(d3(), i).expect("element in range")
}

/// `T^μ = {(x,y,z,u) : u/μ = min(x/μ, y/μ, z/μ)}` for a partition with two blocks.
pub fn t_mu(mu: &Partition) -> Result<Relation> {
    if mu.num_blocks() != 2 {
        return Err(Error::Argument("T^μ needs a partition with exactly two blocks".into()));
    }
    Relation::from_predicate(mu.domain(), 4, |t| {
        let b = |a: u8| mu.block_of(a) as u8;
        b(t[3]) == minority(b(t[0]), b(t[1]), b(t[2]))
    })
}

/// `S_ab` with columns (a,a,a),(a,a,b),(b,b,a),(b,b,b),(a,b,c),(b,a,c), c the remaining element.
/// Symmetric in `a` and `b`, so only `S01`, `S02`, `S12` are catalog keys.
pub fn s_ab(a: u8, b: u8) -> Result<Relation> {
    if a == b || a > 2 || b > 2 {
        return Err(Error::Argument("S_ab needs two distinct elements of {0,1,2}".into()));
    }
    let c = 3 - a - b;
    Relation::from_tuples(
        d3(),
        3,
        [[a, a, a], [a, a, b], [b, b, a], [b, b, b], [a, b, c], [b, a, c]],
    )
}

/// Graph of the affine operation x − y + z modulo the domain size.
pub fn affine_graph(domain: Domain) -> Relation {
    let n = domain.size() as u8;
    Relation::from_predicate(domain, 4, |t| (t[0] + n - t[1] + t[2]) % n == t[3]).expect("4-ary fits")
}

fn t_prime(i: u8) -> Relation {
    Relation::from_predicate(d3(), 4, |t| {
        t[..3].iter().all(|&a| a != i) && t[3] == minority(t[0], t[1], t[2])
    })
    .expect("4-ary fits")
}

/// τ-type map with block `A∖{k}` sent to `b` and `k` sent to `c`.
fn tau(b: u8, c: u8, k: u8) -> Relation {
    pairs(&[(0, if k == 0 { c } else { b }), (1, if k == 1 { c } else { b }), (2, if k == 2 { c } else { b })])
}

/// Keys of every catalog relation on {0,1,2}, in catalog order.
pub const RELATION_KEYS: &[&str] = &[
    "U0", "U1", "U2", "U01", "U02", "U12", "eq", "mu0", "mu1", "mu2", "rho0", "rho1", "rho2", "psi0",
    "psi1", "psi2", "psi0'", "psi1'", "psi2'", "phi", "phiinv", "phi0'", "phi1'", "phi2'", "phi3'",
    "phi4'", "phi5'", "phi0'inv", "phi1'inv", "phi2'inv", "phi3'inv", "phi4'inv", "phi5'inv", "tau0",
    "tau1", "tau021", "tau120", "tau201", "tau210", "S01", "S02", "S12", "T",
    "T0'", "T1'", "T2'", "T0", "T1", "T2", "Tmu0", "Tmu1", "Tmu2",
];

fn phi_prime(j: usize) -> Relation {
    match j {
        0 => pairs(&[(1, 2), (2, 0)]),
        1 => pairs(&[(0, 1), (2, 0)]),
        2 => pairs(&[(0, 1), (1, 2)]),
        3 => pairs(&[(1, 2), (0, 0)]),
        4 => pairs(&[(0, 2), (1, 1)]),
        _ => pairs(&[(0, 1), (2, 2)]),
    }
}

fn digit(key: &str, prefix: &str, suffix: &str) -> Option<u8> {
    let rest = key.strip_prefix(prefix)?.strip_suffix(suffix)?;
    match rest {
        "0" => Some(0),
        "1" => Some(1),
        "2" => Some(2),
        _ => None,
    }
}

/// Looks up a relation on {0,1,2} by key.
pub fn standard_relation(key: &str) -> Result<Relation> {
    let lookup = || Error::Lookup(key.to_string());
    let r = match key {
        "eq" => Relation::equality(d3()),
        "U01" => Relation::unary(d3(), &[0, 1])?,
        "U02" => Relation::unary(d3(), &[0, 2])?,
        "U12" => Relation::unary(d3(), &[1, 2])?,
        "phi" => pairs(&[(0, 1), (1, 2), (2, 0)]),
        "phiinv" => pairs(&[(1, 0), (2, 1), (0, 2)]),
        "tau0" => tau(0, 1, 2),
        "tau1" => tau(1, 0, 2),
        "T" => affine_graph(d3()),
        _ => {
            if let Some(i) = digit(key, "U", "") {
                Relation::unary(d3(), &[i])?
            } else if let Some(i) = digit(key, "mu", "") {
                mu_partition(i).to_relation()
            } else if let Some(i) = digit(key, "rho", "") {
                mu_partition(i).to_relation().complement()
            } else if let Some(i) = digit(key, "psi", "'") {
                let p = transposition_fixing(i);
                Relation::from_tuples(d3(), 2, (0..3u8).filter(|&a| a != i).map(|a| [a, p[a as usize]]))?
            } else if let Some(i) = digit(key, "psi", "") {
                let p = transposition_fixing(i);
                Relation::from_tuples(d3(), 2, (0..3u8).map(|a| [a, p[a as usize]]))?
            } else if let Some(i) = digit(key, "T", "'") {
                t_prime(i)
            } else if let Some(i) = digit(key, "T", "") {
                let mut r = t_prime(i);
                r.insert_index(d3().encode(&[i, i, i, i]));
                r
            } else if let Some(i) = digit(key, "Tmu", "") {
                t_mu(&mu_partition(i))?
            } else if let Some(rest) = key.strip_prefix("phi") {
                let (j, inv) = match rest.strip_suffix("'inv") {
                    Some(j) => (j, true),
                    None => (rest.strip_suffix('\'').ok_or_else(lookup)?, false),
                };
                let j: usize = j.parse().ok().filter(|&j| j < 6).ok_or_else(lookup)?;
                let r = phi_prime(j);
                if inv {
                    r.converse()?
                } else {
                    r
                }
            } else if let Some(rest) = key.strip_prefix('S') {
                let b = rest.as_bytes();
                if b.len() != 2 || !(b'0'..=b'2').contains(&b[0]) || !(b'0'..=b'2').contains(&b[1]) {
                    return Err(lookup());
                }
                s_ab(b[0] - b'0', b[1] - b'0').map_err(|_| lookup())?
            } else if let Some(rest) = key.strip_prefix("tau") {
                let b = rest.as_bytes();
                let ok = b.len() == 3 && b.iter().all(|c| (b'0'..=b'2').contains(c)) && distinct3(b[0], b[1], b[2]);
                if !ok {
                    return Err(lookup());
                }
                tau(b[0] - b'0', b[1] - b'0', b[2] - b'0')
            } else {
                return Err(lookup());
            }
        }
    };
    Ok(r)
}

/// Keys of every catalog structure.
pub const STRUCTURE_KEYS: &[&str] = &[
    "T", "T_3", "I2", "I2_3", "C2", "C2_3", "Z2", "Z2_3", "C3", "M1", "M0", "D", "L2", "Z3", "B2", "M0'",
    "M1'", "M1''", "H", "H'", "C2*", "C2**",
];

fn rels3(keys: &[&str]) -> Result<Structure> {
    let rels = keys
        .iter()
        .map(|k| Ok((k.to_string(), standard_relation(k)?)))
        .collect::<Result<Vec<_>>>()?;
    Structure::new(d3(), rels)
}

fn consts2(extra: Vec<(String, Relation)>) -> Result<Structure> {
    let mut rels = extra;
    rels.push(("U0".into(), Relation::unary(d2(), &[0])?));
    rels.push(("U1".into(), Relation::unary(d2(), &[1])?));
    Structure::new(d2(), rels)
}

/// Looks up a structure by key.
pub fn standard_structure(key: &str) -> Result<Structure> {
    const C: [&str; 3] = ["U0", "U1", "U2"];
    let with_consts = |keys: &[&str]| {
        let mut all = keys.to_vec();
        all.extend(C);
        rels3(&all)
    };
    match key {
        "T" => Structure::new(Domain::new(1)?, vec![]),
        "T_3" => Structure::new(d3(), vec![]),
        "I2" => consts2(vec![]),
        "I2_3" => with_consts(&[]),
        "C2" => consts2(vec![(
            "neq".into(),
            Relation::from_predicate(d2(), 2, |t| t[0] != t[1])?,
        )]),
        "C2_3" => with_consts(&["psi2'"]),
        "Z2" => consts2(vec![("T".into(), affine_graph(d2()))]),
        "Z2_3" => rels3(&["psi2'", "T2'"]),
        "C3" => with_consts(&["phi"]),
        "M1" => with_consts(&["psi2", "mu2"]),
        "M0" => with_consts(&["psi2", "rho2", "U01"]),
        "D" => with_consts(&["phi", "psi2'"]),
        "L2" => rels3(&["phi", "psi2", "T2'"]),
        "Z3" => with_consts(&["T"]),
        "B2" => consts2(vec![(
            "B".into(),
            Relation::from_predicate(d2(), 2, |t| t != [0, 0])?,
        )]),
        "M0'" => with_consts(&["psi2", "rho2", "tau0", "tau1", "U01"]),
        "M1'" => with_consts(&["psi2'", "psi2", "mu2", "U01"]),
        "M1''" => with_consts(&["psi2", "psi2'", "mu2", "U01", "U12", "U02"]),
        "H" => with_consts(&["mu2", "tau0", "tau1", "psi2'", "rho2", "U02", "U12"]),
        "H'" => rels3(&["tau0", "psi2'", "U02", "U12"]),
        "C2*" => with_consts(&[
            "psi2", "psi0'", "psi1'", "psi2'", "phi0'", "phi1'", "phi2'", "phi3'", "phi4'", "phi5'", "U01",
            "U02", "U12",
        ]),
        "C2**" => rels3(&["psi2", "phi2'"]),
        _ => Err(Error::Lookup(key.to_string())),
    }
}

/// Keys of every catalog operation; `fk` takes the parameter k ≥ 1.
pub const OPERATION_KEYS: &[&str] = &[
    "d0", "d1", "d2", "g", "maj5ext", "fk", "affine3", "twosum3", "minority2", "majority2", "maj5",
];

/// `f_k` in closed form: 2 when the number of 2s is odd, else the parity of the other entries.
pub fn f_k_value(args: &[u8]) -> u8 {
    let twos = args.iter().filter(|&&a| a == 2).count();
    if twos % 2 == 1 {
        2
    } else {
        args.iter().filter(|&&a| a != 2).map(|&a| a as usize).sum::<usize>() as u8 % 2
    }
}

/// Looks up an operation by key; `param` is k for `fk` and ignored otherwise.
pub fn builtin_operation(key: &str, param: Option<usize>) -> Result<Operation> {
    match key {
        "d0" | "d1" | "d2" => {
            let i = key.as_bytes()[1] - b'0';
            Operation::from_fn(d3(), 3, |t| {
                if distinct3(t[0], t[1], t[2]) {
                    i
                } else {
                    minority(t[0], t[1], t[2])
                }
            })
        }
        "g" => Operation::from_fn(d3(), 3, |t| {
            if distinct3(t[0], t[1], t[2]) {
                t[0]
            } else {
                minority(t[0], t[1], t[2])
            }
        }),
        "maj5ext" => Operation::from_fn(d3(), 5, |t| {
            if t.iter().all(|&a| a < 2) {
                u8::from(t.iter().filter(|&&a| a == 1).count() >= 3)
            } else {
                2
            }
        }),
        "fk" => {
            let k = param.filter(|&k| k >= 1).ok_or_else(|| {
                Error::Argument("fk needs a parameter k ≥ 1".into())
            })?;
            Operation::from_fn(d3(), 2 * k + 1, f_k_value)
        }
        "affine3" => Operation::from_fn(d3(), 3, |t| (t[0] + 3 - t[1] + t[2]) % 3),
        "twosum3" => Operation::from_fn(d3(), 2, |t| (2 * (t[0] + t[1])) % 3),
        "minority2" => Operation::from_fn(d2(), 3, |t| t[0] ^ t[1] ^ t[2]),
        "majority2" => Operation::from_fn(d2(), 3, |t| u8::from(t[0] + t[1] + t[2] >= 2)),
        "maj5" => Operation::from_fn(d2(), 5, |t| u8::from(t.iter().sum::<u8>() >= 3)),
        _ => Err(Error::Lookup(key.to_string())),
    }
}

/// All six permutations of {0,1,2}, identity first.
pub const RELABELINGS: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
