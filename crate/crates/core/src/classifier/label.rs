use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Structure;
use crate::catalog::standard_structure;
use crate::error::{Error, Result};

/// The ten minor-equivalence classes of clones on three elements with a quasi Mal'cev operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    T,
    I2,
    C2,
    Z2,
    C3,
    M1,
    M0,
    D,
    L2,
    Z3,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 10] = [
        ClassLabel::T,
        ClassLabel::I2,
        ClassLabel::C2,
        ClassLabel::Z2,
        ClassLabel::C3,
        ClassLabel::M1,
        ClassLabel::M0,
        ClassLabel::D,
        ClassLabel::L2,
        ClassLabel::Z3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::T => "T",
            ClassLabel::I2 => "I2",
            ClassLabel::C2 => "C2",
            ClassLabel::Z2 => "Z2",
            ClassLabel::C3 => "C3",
            ClassLabel::M1 => "M1",
            ClassLabel::M0 => "M0",
            ClassLabel::D => "D",
            ClassLabel::L2 => "L2",
            ClassLabel::Z3 => "Z3",
        }
    }

    /// The catalog structure whose polymorphism clone represents the class.
    pub fn representative(self) -> Structure {
        standard_structure(self.as_str()).expect("every label is a catalog key")
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<ClassLabel> {
        ClassLabel::ALL.into_iter().find(|l| l.as_str() == s).ok_or_else(|| Error::Lookup(s.to_string()))
    }
}

/// Position of two classes in the minor order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderRelation {
    Leq,
    Geq,
    Equal,
    Incomparable,
}

/// Covering pairs `(lower, upper)` of the Hasse diagram.
pub const HASSE_EDGES: [(ClassLabel, ClassLabel); 11] = [
    (ClassLabel::Z3, ClassLabel::C3),
    (ClassLabel::L2, ClassLabel::Z2),
    (ClassLabel::L2, ClassLabel::D),
    (ClassLabel::Z2, ClassLabel::M0),
    (ClassLabel::M0, ClassLabel::M1),
    (ClassLabel::M1, ClassLabel::C2),
    (ClassLabel::D, ClassLabel::C2),
    (ClassLabel::D, ClassLabel::C3),
    (ClassLabel::C2, ClassLabel::I2),
    (ClassLabel::C3, ClassLabel::I2),
    (ClassLabel::I2, ClassLabel::T),
];

fn below(a: ClassLabel, b: ClassLabel) -> bool {
    let mut stack = vec![a];
    let mut seen = vec![a];
    while let Some(x) = stack.pop() {
        if x == b {
            return true;
        }
        for &(lo, hi) in &HASSE_EDGES {
            if lo == x && !seen.contains(&hi) {
                seen.push(hi);
                stack.push(hi);
            }
        }
    }
    false
}

pub fn class_order(a: ClassLabel, b: ClassLabel) -> OrderRelation {
    match (a == b, below(a, b), below(b, a)) {
        (true, _, _) => OrderRelation::Equal,
        (_, true, _) => OrderRelation::Leq,
        (_, _, true) => OrderRelation::Geq,
        _ => OrderRelation::Incomparable,
    }
}
