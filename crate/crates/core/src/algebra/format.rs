//! Canonical text format.
//!
//! A structure reads
//! `{"domain": 3, "relations": {"psi2": {"arity": 2, "tuples": [[0,1],[1,0],[2,2]]}}}`
//! and an operation reads `{"domain": 3, "arity": 2, "table": [..]}`, where the table
//! is listed in leftmost-major order. Relation order is preserved on reading and writing.

use serde_json::{Map, Value};

use super::domain::Domain;
use super::operation::Operation;
use super::relation::Relation;
use super::structure::Structure;
use crate::error::{Error, Result};

fn input(msg: String) -> Error {
    Error::Input(msg)
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| input(format!("malformed document: {e}")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| input(format!("{path}: missing field `{key}`")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| input(format!("{path}: expected an object")))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| input(format!("{path}: expected a nonnegative integer")))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| input(format!("{path}: expected an array")))
}

fn parse_domain(obj: &Map<String, Value>, path: &str) -> Result<Domain> {
    let n = as_usize(field(obj, "domain", path)?, &format!("{path}.domain"))?;
    Domain::new(n).map_err(|e| input(format!("{path}.domain: {e}")))
}

fn element(v: &Value, domain: Domain, path: &str) -> Result<u8> {
    let a = as_usize(v, path)?;
    if a >= domain.size() {
        return Err(input(format!("{path}: value {a} outside a domain of size {}", domain.size())));
    }
    Ok(a as u8)
}

pub(crate) fn relation_from_value(v: &Value, domain: Domain, path: &str) -> Result<Relation> {
    let obj = as_object(v, path)?;
    let arity = as_usize(field(obj, "arity", path)?, &format!("{path}.arity"))?;
    if arity == 0 {
        return Err(input(format!("{path}.arity: must be at least 1")));
    }
    let tuples = as_array(field(obj, "tuples", path)?, &format!("{path}.tuples"))?;
    let mut parsed = Vec::with_capacity(tuples.len());
    for (i, t) in tuples.iter().enumerate() {
        let tp = format!("{path}.tuples[{i}]");
        let t = as_array(t, &tp)?;
        if t.len() != arity {
            return Err(input(format!("{tp}: length {} differs from arity {arity}", t.len())));
        }
        parsed.push(
            t.iter()
                .enumerate()
                .map(|(j, a)| element(a, domain, &format!("{tp}[{j}]")))
                .collect::<Result<Vec<u8>>>()?,
        );
    }
    Relation::from_tuples(domain, arity, parsed).map_err(|e| input(format!("{path}: {e}")))
}

pub(crate) fn structure_from_value(v: &Value, path: &str) -> Result<Structure> {
    let obj = as_object(v, path)?;
    let domain = parse_domain(obj, path)?;
    let rels = as_object(field(obj, "relations", path)?, &format!("{path}.relations"))?;
    let mut out = Vec::with_capacity(rels.len());
    for (name, r) in rels {
        out.push((name.clone(), relation_from_value(r, domain, &format!("{path}.relations.{name}"))?));
    }
    Structure::new(domain, out).map_err(|e| input(format!("{path}: {e}")))
}

pub(crate) fn operation_from_value(v: &Value, path: &str) -> Result<Operation> {
    let obj = as_object(v, path)?;
    let domain = parse_domain(obj, path)?;
    let arity = as_usize(field(obj, "arity", path)?, &format!("{path}.arity"))?;
    let table = as_array(field(obj, "table", path)?, &format!("{path}.table"))?;
    let table = table
        .iter()
        .enumerate()
        .map(|(i, a)| element(a, domain, &format!("{path}.table[{i}]")))
        .collect::<Result<Vec<u8>>>()?;
    Operation::new(domain, arity, table).map_err(|e| input(format!("{path}: {e}")))
}

pub fn parse_structure(text: &str) -> Result<Structure> {
    structure_from_value(&parse_json(text)?, "$")
}

pub fn parse_operation(text: &str) -> Result<Operation> {
    operation_from_value(&parse_json(text)?, "$")
}

fn tuple_text(t: &[u8]) -> String {
    let inner: Vec<String> = t.iter().map(|a| a.to_string()).collect();
    format!("[{}]", inner.join(","))
}

pub(crate) fn relation_text(r: &Relation) -> String {
    let tuples: Vec<String> = r.tuples().iter().map(|t| tuple_text(t)).collect();
    format!("{{\"arity\": {}, \"tuples\": [{}]}}", r.arity(), tuples.join(","))
}

fn quote(s: &str) -> String {
    Value::String(s.to_string()).to_string()
}

/// Canonical rendering with one relation per line, indented by `indent` spaces.
pub fn structure_text_indented(s: &Structure, indent: usize) -> String {
    let pad = " ".repeat(indent);
    let mut out = format!("{{\n{pad}  \"domain\": {},\n{pad}  \"relations\": {{", s.domain().size());
    for (k, (name, r)) in s.relations().iter().enumerate() {
        out.push_str(if k == 0 { "\n" } else { ",\n" });
        out.push_str(&format!("{pad}    {}: {}", quote(name), relation_text(r)));
    }
    if s.relations().is_empty() {
        out.push_str("}\n");
    } else {
        out.push_str(&format!("\n{pad}  }}\n"));
    }
    out.push_str(&format!("{pad}}}"));
    out
}

pub fn structure_text(s: &Structure) -> String {
    structure_text_indented(s, 0)
}

pub fn operation_text(f: &Operation) -> String {
    format!(
        "{{\"domain\": {}, \"arity\": {}, \"table\": {}}}",
        f.domain().size(),
        f.arity(),
        tuple_text(f.table())
    )
}

pub fn relation_value(r: &Relation) -> Value {
    serde_json::json!({"arity": r.arity(), "tuples": r.tuples()})
}

pub fn operation_value(f: &Operation) -> Value {
    serde_json::json!({"domain": f.domain().size(), "arity": f.arity(), "table": f.table()})
}

pub fn structure_value(s: &Structure) -> Value {
    let mut rels = Map::new();
    for (n, r) in s.relations() {
        rels.insert(n.clone(), relation_value(r));
    }
    serde_json::json!({"domain": s.domain().size(), "relations": rels})
}
