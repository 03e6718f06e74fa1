//! Command-line entry point: argument parsing, dispatch and report formatting.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::format::{
    operation_text, operation_value, parse_operation, parse_structure, relation_value, structure_text,
    structure_value,
};
use crate::algebra::{Domain, Operation, Partition, Relation, Structure};
use crate::catalog::{
    builtin_operation, standard_relation, standard_structure, OPERATION_KEYS, RELATION_KEYS, STRUCTURE_KEYS,
};
use crate::classifier::{classify_with, separation_table, ClassifyConfig, Evidence, MAIN_SEPARATIONS, SELFDUAL_SEPARATIONS};
use crate::construct::verify_paper_constructions;
use crate::enumeration::{
    enumerate_malcev, ingest_generator_db, monolith_sweep, read_mapping, ColumnMapping, EnumerationConfig,
};
use crate::error::{Error, Result};
use crate::poly::{satisfies_condition, search_operation, Certificate, MinorCondition, SearchConfig};
use crate::relclosure::{
    centralizer, centralizes, congruence_lattice, coordinate_kernels, is_abelian, is_critical, pp_definable,
    upper_covers, verify_zp_basis, Algebra, PpConfig, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub aux_budget: usize,
    pub max_arity: usize,
    pub refutation_arity: usize,
    pub jobs: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { aux_budget: 2, max_arity: 5, refutation_arity: 4, jobs: 1, format: OutputFormat::Text }
    }
}

impl RunConfig {
    fn search(&self) -> SearchConfig {
        SearchConfig { max_arity: self.max_arity, node_limit: None }
    }

    fn pp(&self) -> PpConfig {
        PpConfig { aux_budget: self.aux_budget, refutation_arity: self.refutation_arity, ..PpConfig::default() }
    }
}

#[derive(Parser, Debug)]
#[command(name = "malcev", about = "Clones, relations and minor conditions on small finite domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Extra arity allowed for intermediate relations in pp-derivations.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(0..))]
    aux_budget: Option<u64>,
    /// Largest operation arity in condition searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_arity: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog keys, print one object, or dump the whole inventory.
    Catalog { key: Option<String> },
    /// Search for polymorphisms satisfying a condition and print them.
    Polsearch { structure: String, condition: String },
    /// Decide a condition with a witness or an exhaustion record.
    CheckCondition { structure: String, condition: String },
    /// Decide whether a structure pp-defines a relation.
    Ppdef { structure: String, relation: String },
    /// Congruence lattice of the algebra generated by the given operations.
    Congruences { operations: Vec<String> },
    /// Centralizer and Abelianness tests for congruences written like `01|2`.
    Commutator {
        #[arg(long)]
        malcev: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: Option<String>,
        operations: Vec<String>,
    },
    /// Coordinate kernels, reduced representation and criticality of a relation.
    Critical { relation: String, operations: Vec<String> },
    /// Verify the printed pp-constructions, or the relational basis of Z_p with `--zp`.
    PpVerify {
        #[arg(long)]
        zp: Option<usize>,
        #[arg(long, default_value_t = 3)]
        arity: usize,
    },
    /// Classify the polymorphism clone of a structure.
    Classify {
        structure: String,
        #[arg(long)]
        certificate: bool,
    },
    /// Enumerate the Mal'cev clones on {0,1,2}.
    Enumerate,
    /// Read the appendix generator tables and check their preservation flags.
    Ingest {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Verify both separation tables.
    Separations,
}

/// A finished report: text and structured renderings plus the verification status.
struct Report {
    text: String,
    value: Value,
    verified: bool,
}

impl Report {
    fn ok(text: String, value: Value) -> Report {
        Report { text, value, verified: true }
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_) => 1,
        Error::Argument(_) | Error::Lookup(_) | Error::Input(_) | Error::Precondition(_) | Error::Formula(_) => 2,
        Error::Capability(_) => 3,
        Error::OutOfScope(_) => 4,
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let defaults = RunConfig::default();
    let config = RunConfig {
        aux_budget: cli.aux_budget.map_or(defaults.aux_budget, |v| v as usize),
        max_arity: cli.max_arity.map_or(defaults.max_arity, |v| v as usize),
        jobs: cli.jobs.map_or(defaults.jobs, |v| v as usize),
        format: cli.format.unwrap_or(defaults.format),
        ..defaults
    };
    let report = match dispatch(&cli.command, &config) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let body = match config.format {
        OutputFormat::Text => report.text,
        OutputFormat::Structured => {
            serde_json::to_string_pretty(&report.value).expect("reports are plain JSON values") + "\n"
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body.as_bytes()).map_err(|e| Error::Input(format!("{}: {e}", path.display()))),
        None => out.write_all(body.as_bytes()).map_err(|e| Error::Input(e.to_string())),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    if report.verified {
        0
    } else {
        1
    }
}

fn dispatch(cmd: &Command, config: &RunConfig) -> Result<Report> {
    match cmd {
        Command::Catalog { key } => catalog(key.as_deref()),
        Command::Polsearch { structure, condition } => polsearch(structure, condition, config),
        Command::CheckCondition { structure, condition } => check_condition(structure, condition, config),
        Command::Ppdef { structure, relation } => ppdef(structure, relation, config),
        Command::Congruences { operations } => congruences(operations),
        Command::Commutator { malcev, alpha, beta, operations } => {
            commutator(malcev, alpha, beta.as_deref(), operations)
        }
        Command::Critical { relation, operations } => critical(relation, operations),
        Command::PpVerify { zp, arity } => pp_verify(*zp, *arity, config),
        Command::Classify { structure, certificate } => classify_cmd(structure, *certificate, config),
        Command::Enumerate => enumerate(config),
        Command::Ingest { dir, mapping } => ingest(dir, mapping.as_deref()),
        Command::Separations => separations(),
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// A structure file in the canonical format, or a catalog key.
fn load_structure(arg: &str) -> Result<Structure> {
    let p = Path::new(arg);
    if p.is_file() {
        parse_structure(&read_file(p)?)
    } else {
        standard_structure(arg)
    }
}

/// A catalog relation key, or a structure file holding exactly one relation.
fn load_relation(arg: &str) -> Result<(String, Relation)> {
    let p = Path::new(arg);
    if !p.is_file() {
        return Ok((arg.to_string(), standard_relation(arg)?));
    }
    let s = parse_structure(&read_file(p)?)?;
    match s.relations() {
        [(name, r)] => Ok((name.clone(), r.clone())),
        _ => Err(Error::Input(format!("{arg}: expected exactly one relation"))),
    }
}

/// An operation file, or a catalog key such as `d2` or `fk:3`.
fn load_operation(arg: &str) -> Result<Operation> {
    let p = Path::new(arg);
    if p.is_file() {
        return parse_operation(&read_file(p)?);
    }
    match arg.split_once(':') {
        Some((key, k)) => {
            let k = k.parse().map_err(|_| Error::Argument(format!("bad parameter in `{arg}`")))?;
            builtin_operation(key, Some(k))
        }
        None => builtin_operation(arg, None),
    }
}

fn load_condition(arg: &str) -> Result<MinorCondition> {
    let p = Path::new(arg);
    if p.is_file() {
        let name = p.file_stem().and_then(|s| s.to_str()).unwrap_or("condition");
        MinorCondition::parse(name, &read_file(p)?)
    } else {
        MinorCondition::builtin(arg)
    }
}

fn load_algebra(operations: &[String]) -> Result<Algebra> {
    let ops = operations.iter().map(|o| load_operation(o)).collect::<Result<Vec<_>>>()?;
    let domain = ops.first().map(Operation::domain).ok_or_else(|| Error::Argument("no operations given".into()))?;
    Algebra::new(domain, ops)
}

/// Parses a partition written as blocks separated by `|`, e.g. `01|2`.
fn parse_partition(domain: Domain, text: &str) -> Result<Partition> {
    let blocks = text
        .split('|')
        .map(|b| {
            b.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Argument(format!("bad element `{c}` in partition `{text}`")))
                })
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::from_blocks(domain, &blocks)
}

fn tuples_text(r: &Relation) -> String {
    let ts: Vec<String> = r
        .tuples()
        .iter()
        .map(|t| format!("({})", t.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{{{}}}", ts.join(", "))
}

fn catalog(key: Option<&str>) -> Result<Report> {
    let fk_range = 1..=3usize;
    match key {
        None | Some("list") => {
            let text = format!(
                "relations: {}\nstructures: {}\noperations: {}\n",
                RELATION_KEYS.join(" "),
                STRUCTURE_KEYS.join(" "),
                OPERATION_KEYS.join(" ")
            );
            let value = json!({"relations": RELATION_KEYS, "structures": STRUCTURE_KEYS, "operations": OPERATION_KEYS});
            Ok(Report::ok(text, value))
        }
        Some("dump") => {
            let mut text = String::new();
            let mut rels = serde_json::Map::new();
            let mut structs = serde_json::Map::new();
            let mut ops = serde_json::Map::new();
            for k in RELATION_KEYS {
                let r = standard_relation(k)?;
                text.push_str(&format!("relation {k} {}\n", serde_json::to_string(&relation_value(&r)).expect("json")));
                rels.insert(k.to_string(), relation_value(&r));
            }
            for k in STRUCTURE_KEYS {
                let s = standard_structure(k)?;
                text.push_str(&format!("structure {k} {}\n", structure_text(&s)));
                structs.insert(k.to_string(), structure_value(&s));
            }
            for k in OPERATION_KEYS {
                let params: Vec<Option<usize>> =
                    if *k == "fk" { fk_range.clone().map(Some).collect() } else { vec![None] };
                for p in params {
                    let f = builtin_operation(k, p)?;
                    let name = p.map_or(k.to_string(), |p| format!("{k}:{p}"));
                    text.push_str(&format!("operation {name} {}\n", operation_text(&f)));
                    ops.insert(name, operation_value(&f));
                }
            }
            Ok(Report::ok(text, json!({"relations": rels, "structures": structs, "operations": ops})))
        }
        Some(k) => {
            if let Ok(s) = standard_structure(k) {
                return Ok(Report::ok(structure_text(&s) + "\n", structure_value(&s)));
            }
            if let Ok(r) = standard_relation(k) {
                let v = relation_value(&r);
                return Ok(Report::ok(format!("{}\n", serde_json::to_string(&v).expect("json")), v));
            }
            let f = load_operation(k)?;
            Ok(Report::ok(operation_text(&f) + "\n", operation_value(&f)))
        }
    }
}

fn certificate_parts(cert: &Certificate) -> (String, Value) {
    match cert {
        Certificate::Witness(ops) => {
            let mut text = String::new();
            let mut value = serde_json::Map::new();
            for (sym, f) in ops {
                text.push_str(&format!("  {sym} = {}\n", operation_text(f)));
                value.insert(sym.clone(), operation_value(f));
            }
            (text, json!({"witness": value}))
        }
        Certificate::Exhaustion { nodes, free_cells } => (
            format!("  exhaustive search: {nodes} nodes over {free_cells} free cells\n"),
            json!({"exhaustion": {"nodes": nodes, "free_cells": free_cells}}),
        ),
    }
}

fn polsearch(structure: &str, condition: &str, config: &RunConfig) -> Result<Report> {
    let s = load_structure(structure)?;
    let cond = load_condition(condition)?;
    let outcome = search_operation(&s, &cond, &[], &config.search())?;
    let cert = match outcome.witness {
        Some(w) => Certificate::Witness(w),
        None => Certificate::Exhaustion { nodes: outcome.nodes, free_cells: outcome.free_cells },
    };
    let (body, value) = certificate_parts(&cert);
    let head = if outcome.status == crate::poly::SearchStatus::Found { "found" } else { "none" };
    Ok(Report::ok(
        format!("{}: {head}\n{body}", cond.name),
        json!({"condition": cond.name, "found": head == "found", "certificate": value}),
    ))
}

fn check_condition(structure: &str, condition: &str, config: &RunConfig) -> Result<Report> {
    let s = load_structure(structure)?;
    let cond = load_condition(condition)?;
    let (holds, cert) = satisfies_condition(&s, &cond, &config.search())?;
    let (body, value) = certificate_parts(&cert);
    let verdict = if holds { "satisfied" } else { "refuted" };
    Ok(Report::ok(
        format!("{}: {verdict}\n{body}", cond.name),
        json!({"condition": cond.name, "satisfied": holds, "certificate": value}),
    ))
}

fn ppdef(structure: &str, relation: &str, config: &RunConfig) -> Result<Report> {
    let s = load_structure(structure)?;
    let (name, target) = load_relation(relation)?;
    let names: Vec<String> = s.relations().iter().map(|(n, _)| n.clone()).collect();
    let answer = pp_definable(&s.relation_list(), &target, &config.pp())?;
    let mut text = format!("{name}: {}\n", answer.verdict.as_str());
    let mut value = json!({"relation": name, "verdict": answer.verdict.as_str()});
    if let Some(d) = &answer.proof {
        text.push_str(&d.render(&names));
        value["derivation"] = Value::String(d.render(&names));
    }
    if let Some(r) = &answer.refutation {
        text.push_str(&format!("polymorphism {}\n", operation_text(&r.operation)));
        text.push_str(&format!("maps {:?} to {:?}\n", r.tuples, r.image()));
        value["refutation"] = json!({"operation": operation_value(&r.operation), "tuples": r.tuples, "image": r.image()});
    }
    if answer.verdict == Verdict::Unknown {
        return Err(Error::Capability(format!("{name}: both certificate searches exhausted their budgets")));
    }
    Ok(Report::ok(text, value))
}

fn congruences(operations: &[String]) -> Result<Report> {
    let a = load_algebra(operations)?;
    let lattice = congruence_lattice(&a)?;
    let mut text = String::new();
    let mut list = Vec::new();
    for (i, p) in lattice.congruences.iter().enumerate() {
        let mark = if lattice.monolith == Some(i) { " (monolith)" } else { "" };
        text.push_str(&format!("{p}{mark}\n"));
        list.push(Value::String(p.to_string()));
    }
    let monolith = lattice.monolith.map(|i| lattice.congruences[i].to_string());
    Ok(Report::ok(text, json!({"congruences": list, "monolith": monolith})))
}

fn commutator(malcev: &str, alpha: &str, beta: Option<&str>, operations: &[String]) -> Result<Report> {
    let d = load_operation(malcev)?;
    let mut names = operations.to_vec();
    if names.is_empty() {
        names.push(malcev.to_string());
    }
    let a = load_algebra(&names)?;
    let alpha = parse_partition(a.domain(), alpha)?;
    let beta = match beta {
        Some(b) => parse_partition(a.domain(), b)?,
        None => alpha.clone(),
    };
    let c = centralizes(&a, &d, &alpha, &beta)?;
    let z = centralizer(&a, &d, &alpha)?;
    let ab = is_abelian(&a, &d, Some(&alpha))?;
    let whole = is_abelian(&a, &d, None)?;
    let text = format!(
        "alpha {alpha} centralizes beta {beta}: {c}\ncentralizer of alpha: {z}\nalpha abelian: {ab}\nalgebra abelian: {whole}\n"
    );
    let value = json!({
        "alpha": alpha.to_string(),
        "beta": beta.to_string(),
        "centralizes": c,
        "centralizer": z.to_string(),
        "alpha_abelian": ab,
        "abelian": whole,
    });
    Ok(Report::ok(text, value))
}

fn critical(relation: &str, operations: &[String]) -> Result<Report> {
    let (name, r) = load_relation(relation)?;
    let a = load_algebra(operations)?;
    let k = coordinate_kernels(&r, &a)?;
    let covers = upper_covers(&r, &a)?;
    let crit = is_critical(&r, &a)?;
    let kernels: Vec<String> = k.kernels.iter().map(Partition::to_string).collect();
    let text = format!(
        "{name}\nkernels: {}\nreduced: {}\nupper covers: {}\ncritical: {crit}\n",
        kernels.join(" "),
        tuples_text(&k.reduced),
        covers.len()
    );
    let value = json!({
        "relation": name,
        "kernels": kernels,
        "reduced": relation_value(&k.reduced),
        "upper_covers": covers.iter().map(relation_value).collect::<Vec<_>>(),
        "critical": crit,
    });
    Ok(Report::ok(text, value))
}

fn pp_verify(zp: Option<usize>, arity: usize, config: &RunConfig) -> Result<Report> {
    if let Some(p) = zp {
        let report = verify_zp_basis(p, arity, &config.pp())?;
        let mut text = format!("Z{p} up to arity {arity}: invariant relations per arity {:?}\n", report.counts);
        for f in report.failures() {
            text.push_str(&format!("  {}: {}\n", tuples_text(&f.relation), f.verdict.as_str()));
        }
        text.push_str(if report.passed() { "pass\n" } else { "FAIL\n" });
        let value = json!({"p": p, "arity": arity, "counts": report.counts, "checked": report.checked.len(), "passed": report.passed()});
        return Ok(Report { text, value, verified: report.passed() });
    }
    let report = verify_paper_constructions(&config.pp())?;
    let mut text = String::new();
    for f in &report.fixtures {
        text.push_str(&format!("{} ({}): {}\n", f.name, f.claim, if f.passed() { "pass" } else { "FAIL" }));
        for c in &f.conjuncts {
            text.push_str(&format!("  [{}] {}\n", if c.passed { "ok" } else { "FAIL" }, c.name));
            if let Some(d) = &c.detail {
                text.push_str(&format!("      {d}\n"));
            }
        }
    }
    let value = serde_json::to_value(&report).expect("serializable report");
    Ok(Report { text, value, verified: report.passed() })
}

fn classify_cmd(structure: &str, certificate: bool, config: &RunConfig) -> Result<Report> {
    let s = load_structure(structure)?;
    let cfg = ClassifyConfig { search: config.search(), pp: config.pp() };
    let (label, cert) = classify_with(&s, &cfg)?;
    let mut text = format!("{label}\n");
    let mut value = json!({"label": label});
    if certificate {
        text.push_str(&format!(
            "core: {:?}\nrelabeling: {:?}\nbranch: {}\n",
            cert.core,
            cert.relabeling,
            cert.branch.case()
        ));
        if cert.cyclic_tiebreak {
            text.push_str("C2/I2 decided by the 2-cyclic test\n");
        }
        let mut tests = Vec::new();
        for t in &cert.tests {
            let evidence = match &t.evidence {
                Evidence::Search(Certificate::Witness(ops)) => {
                    let (sym, f) = &ops[0];
                    format!("witness {sym} = {}", operation_text(f))
                }
                Evidence::Search(Certificate::Exhaustion { nodes, .. }) => format!("exhausted after {nodes} nodes"),
                Evidence::Derivation(d) => format!("derivation with {} steps", d.steps.len()),
                Evidence::Refutation(r) => format!("refuted by {}", operation_text(&r.operation)),
            };
            text.push_str(&format!("  {}: {} ({evidence})\n", t.test.describe(), if t.holds { "yes" } else { "no" }));
            tests.push(json!({"test": t.test.describe(), "holds": t.holds, "evidence": evidence}));
        }
        value["certificate"] = json!({
            "core": cert.core,
            "relabeling": cert.relabeling,
            "branch": cert.branch.case(),
            "cyclic_tiebreak": cert.cyclic_tiebreak,
            "tests": tests,
        });
    }
    Ok(Report::ok(text, value))
}

fn enumerate(config: &RunConfig) -> Result<Report> {
    let mut cfg = EnumerationConfig { jobs: config.jobs, ..EnumerationConfig::default() };
    cfg.budget.aux_budget = config.aux_budget;
    cfg.max_aux_budget = cfg.max_aux_budget.max(config.aux_budget);
    let e = enumerate_malcev(&cfg)?;
    let summary = e.summary();
    let violations = monolith_sweep(&e)?;
    let mut text = format!(
        "clones: {} literal, {} up to relabeling\nidempotent: {}\nminimal: {}\naux budget: {}\nunknown verdicts: {}\n",
        summary.literal, summary.up_to_relabeling, summary.idempotent, summary.minimal, summary.aux_budget, summary.unknown_verdicts
    );
    let hist: Vec<String> = summary.histogram.iter().map(|(l, n)| format!("{l}={n}")).collect();
    text.push_str(&format!("classes: {}\nmonolith violations: {}\n", hist.join(" "), violations.len()));
    for r in &e.records {
        text.push_str(&format!(
            "{} basis=[{}]{}{}\n",
            r.label,
            r.basis.join(","),
            if r.minimal { " minimal" } else { "" },
            if r.idempotent { " idempotent" } else { "" }
        ));
    }
    let value = json!({"summary": summary, "monolith_violations": violations, "records": e.records});
    Ok(Report::ok(text, value))
}

fn ingest(dir: &Path, mapping: Option<&Path>) -> Result<Report> {
    if !dir.is_dir() {
        return Err(Error::Input(format!("{}: not a directory", dir.display())));
    }
    let mapping = match mapping {
        Some(p) => read_mapping(p)?,
        None => ColumnMapping::default(),
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    paths.sort();
    let gens = ingest_generator_db(&paths, &mapping)?;
    let mut text = format!("{} generators from {} files; every flag matches\n", gens.len(), paths.len());
    for g in &gens {
        text.push_str(&format!("{} arity {} flags {}\n", g.name, g.arity, g.flags.len()));
    }
    let list: Vec<Value> = gens.iter().map(|g| json!({"name": g.name, "arity": g.arity, "flags": g.flags})).collect();
    Ok(Report::ok(text, json!({"files": paths.len(), "generators": list})))
}

fn separations() -> Result<Report> {
    let cells = separation_table()?;
    let mut text = String::new();
    for fig in [MAIN_SEPARATIONS, SELFDUAL_SEPARATIONS] {
        text.push_str(&format!("{} figure\n{:>4}", fig.name, ""));
        for c in fig.columns {
            text.push_str(&format!(" {:>15}", format!("{c}⊭")));
        }
        text.push('\n');
        for (r, row) in fig.rows.iter().zip(fig.cells) {
            text.push_str(&format!("{:>4}", format!("{r}⊨")));
            for cell in row.iter() {
                text.push_str(&format!(" {cell:>15}"));
            }
            text.push('\n');
        }
    }
    let failed: Vec<_> = cells.iter().filter(|c| !c.verified()).collect();
    for c in &failed {
        text.push_str(&format!("FAIL {} {} ⊨ / {} ⊭ {}\n", c.figure, c.satisfies, c.refutes, c.condition));
    }
    text.push_str(&format!("{} cells verified, {} failed\n", cells.len() - failed.len(), failed.len()));
    let summaries: Vec<crate::classifier::CellSummary> = cells.iter().map(Into::into).collect();
    Ok(Report { text, value: json!({"cells": summaries}), verified: failed.is_empty() })
}
