//! A small expression language over wavefronts, compiled to machine code.
//!
//! ```
//! use racelogic::lang::{evaluate, Bindings};
//! use racelogic::MachineConfig;
//!
//! let b = Bindings::from_json(r#"{"x": [1, "inf"], "y": [4, 2]}"#).unwrap();
//! let out = evaluate("x + 1 * y", &b, &MachineConfig::default()).unwrap();
//! assert_eq!(out.value.to_string(), "[1, 3]");
//! ```

mod ast;
mod compile;
mod parser;

pub use ast::{BinOp, Expr};
pub use compile::{compile, direct_eval, evaluate, evaluate_expr, Bindings, Compiled, Evaluation};
pub use parser::parse;
