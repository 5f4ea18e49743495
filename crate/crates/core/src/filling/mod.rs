//! Homological area and filling tables.

pub mod harea;
pub mod tables;

pub use harea::{harea, FillStatus, FillingCertificate, HareaOptions, HareaSolver};
pub use tables::{
    affine_dominance, closure_table, conformal_cycles, delta_ab_table, fa_table, harea_many, simple_cycles,
    superadditive_closure, FaMode, FillingTable, TableEntry, TableKind, TableOptions,
};
