use serde::Serialize;

use crate::error::Result;
use crate::poly::{satisfies_condition, Certificate, MinorCondition, SearchConfig};

use super::label::{class_order, ClassLabel, OrderRelation};

use ClassLabel::*;

/// A table of minor conditions: the cell in row `X`, column `Y` holds a condition `X` satisfies and `Y` does not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeparationFigure {
    pub name: &'static str,
    pub rows: &'static [ClassLabel],
    pub columns: &'static [ClassLabel],
    pub cells: &'static [&'static [&'static str]],
}

const MAIN_ROWS: &[ClassLabel] = &[Z3, L2, Z2, M0, M1, D, C2, C3, I2, T];
const MAIN_COLUMNS: &[ClassLabel] = &[Z3, L2, Z2, M0, M1, D, C2, C3, I2];
const MAIN_CELLS: &[&[&str]] = &[
    &["", "cyc2", "cyc2", "cyc2", "cyc2", "cyc2", "cyc2", "", ""],
    &["quasi-minority", "", "", "", "", "", "", "", ""],
    &["quasi-minority", "cyc3", "", "", "", "cyc3", "", "cyc3", ""],
    &["quasi-minority", "cyc3", "quasi-majority", "", "", "cyc3", "", "cyc3", ""],
    &["quasi-minority", "cyc3", "quasi-majority", "sigma2", "", "cyc3", "", "cyc3", ""],
    &["quasi-minority", "quasi-majority", "quasi-majority", "sigma1", "sigma1", "", "", "", ""],
    &["quasi-minority", "cyc3", "quasi-majority", "sigma1", "sigma1", "cyc3", "", "cyc3", ""],
    &["quasi-minority", "quasi-majority", "quasi-majority", "cyc2", "cyc2", "cyc2", "cyc2", "", ""],
    &["quasi-minority", "cyc3", "quasi-majority", "cyc2", "cyc2", "cyc2", "cyc2", "cyc3", ""],
    &["quasi-minority", "cyc3", "quasi-majority", "cyc2", "cyc2", "cyc2", "cyc2", "cyc3", "const"],
];

const SELFDUAL_ROWS: &[ClassLabel] = &[Z3, L2, D, C3];
const SELFDUAL_COLUMNS: &[ClassLabel] = &[Z3, L2, D];
const SELFDUAL_CELLS: &[&[&str]] = &[
    &["", "cyc2", "cyc2"],
    &["quasi-minority", "", ""],
    &["quasi-minority", "quasi-majority", ""],
    &["quasi-minority", "quasi-majority", "cyc2"],
];

/// Separating conditions between all ten classes.
pub const MAIN_SEPARATIONS: SeparationFigure =
    SeparationFigure { name: "main", rows: MAIN_ROWS, columns: MAIN_COLUMNS, cells: MAIN_CELLS };

/// Separating conditions among the self-dual classes.
pub const SELFDUAL_SEPARATIONS: SeparationFigure =
    SeparationFigure { name: "self-dual", rows: SELFDUAL_ROWS, columns: SELFDUAL_COLUMNS, cells: SELFDUAL_CELLS };

impl SeparationFigure {
    /// Nonempty cells as `(row, column, condition)`.
    pub fn entries(&self) -> Vec<(ClassLabel, ClassLabel, &'static str)> {
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().zip(self.cells) {
            for (c, &cond) in self.columns.iter().zip(row.iter()) {
                if !cond.is_empty() {
                    out.push((*r, *c, cond));
                }
            }
        }
        out
    }
}

/// Both sides of one verified cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationCell {
    pub figure: &'static str,
    pub satisfies: ClassLabel,
    pub refutes: ClassLabel,
    pub condition: &'static str,
    pub witness: Certificate,
    pub refutation: Certificate,
    /// The row class is not below the column class in the Hasse order.
    pub order_consistent: bool,
}

impl SeparationCell {
    pub fn verified(&self) -> bool {
        matches!(self.witness, Certificate::Witness(_))
            && matches!(self.refutation, Certificate::Exhaustion { .. })
            && self.order_consistent
    }
}

/// Summary line for one cell, used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellSummary {
    pub figure: String,
    pub row: String,
    pub column: String,
    pub condition: String,
    pub verified: bool,
}

impl From<&SeparationCell> for CellSummary {
    fn from(c: &SeparationCell) -> CellSummary {
        CellSummary {
            figure: c.figure.to_string(),
            row: c.satisfies.to_string(),
            column: c.refutes.to_string(),
            condition: c.condition.to_string(),
            verified: c.verified(),
        }
    }
}

pub fn verify_figure(fig: &SeparationFigure, config: &SearchConfig) -> Result<Vec<SeparationCell>> {
    let mut out = Vec::new();
    for (row, col, name) in fig.entries() {
        let cond = MinorCondition::builtin(name)?;
        let (_, witness) = satisfies_condition(&row.representative(), &cond, config)?;
        let (_, refutation) = satisfies_condition(&col.representative(), &cond, config)?;
        out.push(SeparationCell {
            figure: fig.name,
            satisfies: row,
            refutes: col,
            condition: name,
            witness,
            refutation,
            order_consistent: !matches!(class_order(row, col), OrderRelation::Leq | OrderRelation::Equal),
        });
    }
    Ok(out)
}

/// Verifies every nonempty cell of both separation figures.
pub fn separation_table() -> Result<Vec<SeparationCell>> {
    let config = SearchConfig::default();
    let mut cells = verify_figure(&MAIN_SEPARATIONS, &config)?;
    cells.extend(verify_figure(&SELFDUAL_SEPARATIONS, &config)?);
    Ok(cells)
}
