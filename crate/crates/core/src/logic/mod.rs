//! The modal language over RS-frames: syntax, parsing, satisfaction,
//! algebraic evaluation, validity and correspondence.

mod formula;
mod model;
mod parser;
mod validity;

pub use formula::{Formula, Inequality};
pub use model::{Model, Valuation};
pub use parser::{parse_formula, parse_inequality};
pub use validity::{
    correspondent_holds, frame_valid, frame_valid_with_limit, Axiom, Validity, ValidityMode,
    DEFAULT_VALUATION_LIMIT,
};
