//! The ten-class decision procedure, separation tables and the minor order.

mod classify;
mod label;
mod separations;

pub use classify::{classify, classify_with, Branch, ClassificationCertificate, ClassifyConfig, Evidence, Test, TestRecord};
pub use label::{class_order, ClassLabel, OrderRelation, HASSE_EDGES};
pub use separations::{
    separation_table, verify_figure, CellSummary, SeparationCell, SeparationFigure, MAIN_SEPARATIONS,
    SELFDUAL_SEPARATIONS,
};
