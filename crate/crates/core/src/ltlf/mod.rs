//! Linear temporal logic over finite traces.

mod ast;
mod bounded;
mod eval;
mod nnf;

pub use ast::{parse_ltlf, Alphabet, Ltlf, Prop};
pub use bounded::{
    all_models, min_weight_model, sat_bounded, solver_calls, BoundedEncoding, Model, SatQuery,
    SatResult,
};
pub use eval::{evaluate, holds, positions};
pub use nnf::{is_nnf, negate_nnf, nnf};
