//! Applications: coverability trees for vector addition systems, forward
//! saturation for incrementing counter automata, and disjunctive
//! termination arguments for loop programs.

pub mod ica;
pub mod km;
pub mod program;
pub mod samples;
pub mod termination;

pub use ica::{ica_post_min, ica_saturate, Ica, MinUpwardSet, Saturation};
pub use km::{km_tree, vas_queries, KmTree, OmegaMarking, OmegaNat, Vas, VasReport};
pub use program::{Affine, Guard, LoopProgram, Ranking, RankingSpec};
pub use termination::{term_check, InitReport, TermReport};
