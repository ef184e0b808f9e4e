//! Bounds on the length of controlled bad sequences over sums of powers of
//! the naturals, with exhaustive oracles and three applications: Karp-Miller
//! coverability trees, forward saturation of incrementing counter automata,
//! and disjunctive termination arguments for loop programs.

pub mod apps;
pub mod bounds;
pub mod control;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod sequences;
pub mod typemultiset;
pub mod verify;

pub use bounds::{check_prop_lower, lex_len, lex_rbad_lower, n_of_k, ubound, BoundResult, LexLen, Method};
pub use control::{ackermann_eval, ctrl_eval, fgh_eval, g_eval, ControlFunction, EvalBudget, Meter};
pub use error::{Error, Resource, Result};
pub use exec::Exec;
pub use typemultiset::{Dim, PartialOrderKind, TypeMultiset};
