//! Command-line grammar and its canonical rendering.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use dickson::sequences::SeqOrder;
use dickson::{ControlFunction, EvalBudget, Method, TypeMultiset};
use num_bigint::{BigInt, BigUint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Clone, Debug, PartialEq, Eq)]
#[command(name = "dickson", version, about = "Length bounds for controlled bad sequences over N^k and their applications")]
pub struct Cli {
    /// Output mode: human-readable text or JSON lines.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Largest admissible result, in bits.
    #[arg(long, global = true, env = "DICKSON_MAX_BITS", default_value_t = EvalBudget::DEFAULT_BITS)]
    pub max_bits: u64,

    /// Largest number of evaluation steps.
    #[arg(long, global = true, env = "DICKSON_MAX_STEPS", default_value_t = EvalBudget::DEFAULT_STEPS)]
    pub max_steps: u64,

    /// Run on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq)]
pub enum Cmd {
    /// Upper bound M_tau(t) on controlled bad sequences over N^tau.
    Bound {
        #[arg(long)]
        tau: TypeMultiset,
        #[arg(long)]
        t: BigUint,
        #[arg(long, default_value = "succ")]
        f: ControlFunction,
        /// One or more of naive, min-strategy, fast (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "fast")]
        method: Vec<Method>,
    },
    /// Lexicographic lower bound l_k(t) and offset o_k(t).
    Lex {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: BigUint,
        #[arg(long, default_value = "succ")]
        f: ControlFunction,
        /// Also report the r-bad lower bound l_{r,k}(t).
        #[arg(long)]
        r: Option<u64>,
    },
    /// The longest controlled bad sequence for the lexicographic ordering.
    GenerateLex {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value = "succ")]
        f: ControlFunction,
    },
    /// Goodness profile, badness and control of a sequence file.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value = "product")]
        order: SeqOrder,
        /// Control offset; checks control together with --f.
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, requires = "t")]
        f: Option<ControlFunction>,
    },
    /// Region decomposition of a bad controlled sequence over N^k.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value = "succ")]
        f: ControlFunction,
    },
    /// Layers an r-bad sequence into a bad one over r copies, or collapses back.
    Layer {
        file: PathBuf,
        /// Defaults to the least r for which the input is r-bad.
        #[arg(long)]
        r: Option<usize>,
        /// Collapse a layered sequence instead (requires --r).
        #[arg(long, requires = "r")]
        collapse: bool,
    },
    /// Exhaustive search for the longest controlled r-bad sequence.
    Oracle {
        #[arg(long)]
        tau: TypeMultiset,
        #[arg(long)]
        t: u64,
        #[arg(long, default_value = "succ")]
        f: ControlFunction,
        #[arg(long, default_value = "product")]
        order: SeqOrder,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
    /// Longest run of a loop program (a file, `builtin:choice` or `builtin:lex:K`).
    RunProgram {
        program: String,
        /// Input values, comma separated, in declaration order.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        inputs: Vec<BigInt>,
        /// Print the longest run.
        #[arg(long)]
        trace: bool,
    },
    /// Karp-Miller coverability tree of a VAS file.
    Km {
        file: PathBuf,
        /// States explored when sampling covering soundness.
        #[arg(long, default_value_t = 2000)]
        explore: usize,
    },
    /// Forward saturation of an incrementing counter automaton file.
    Ica {
        file: PathBuf,
        /// Compare against explicit search with counters up to this value.
        #[arg(long)]
        bfs_cap: Option<u64>,
    },
    /// Checks a disjunctive termination argument on all explored runs.
    Terminate {
        program: String,
        /// Ranking file with lines `rank <affine> when <guard>`.
        #[arg(long)]
        ranks: PathBuf,
        /// An input vector, comma separated; repeatable.
        #[arg(long = "init", allow_negative_numbers = true)]
        inits: Vec<String>,
        /// Every input vector with entries in 0..=N.
        #[arg(long)]
        grid: Option<u64>,
    },
    /// Runs the cross-module invariant suites.
    Verify {
        /// Only suites whose name contains this text.
        #[arg(long)]
        suite: Option<String>,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
    },
}

impl Cmd {
    pub fn name(&self) -> &'static str {
        match self {
            Cmd::Bound { .. } => "bound",
            Cmd::Lex { .. } => "lex",
            Cmd::GenerateLex { .. } => "generate-lex",
            Cmd::Analyze { .. } => "analyze",
            Cmd::Decompose { .. } => "decompose",
            Cmd::Layer { .. } => "layer",
            Cmd::Oracle { .. } => "oracle",
            Cmd::RunProgram { .. } => "run-program",
            Cmd::Km { .. } => "km",
            Cmd::Ica { .. } => "ica",
            Cmd::Terminate { .. } => "terminate",
            Cmd::Verify { .. } => "verify",
        }
    }
}

fn opt(out: &mut Vec<String>, flag: &str, value: impl ToString) {
    out.push(format!("--{flag}"));
    out.push(value.to_string());
}

fn path(p: &std::path::Path) -> String {
    p.to_string_lossy().into_owned()
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl Cli {
    pub fn budget(&self) -> EvalBudget {
        EvalBudget::default().with_bits(self.max_bits).with_steps(self.max_steps)
    }

    pub fn exec(&self) -> dickson::Exec {
        if self.sequential {
            dickson::Exec::Sequential
        } else {
            dickson::Exec::Parallel
        }
    }

    /// Arguments (without the program name) that parse back to `self`, with
    /// every default spelled out.
    pub fn canonical_args(&self) -> Vec<String> {
        let mut a = vec![self.command.name().to_string()];
        match &self.command {
            Cmd::Bound { tau, t, f, method } => {
                opt(&mut a, "tau", tau);
                opt(&mut a, "t", t);
                opt(&mut a, "f", f);
                opt(&mut a, "method", joined(method));
            }
            Cmd::Lex { k, t, f, r } => {
                opt(&mut a, "k", k);
                opt(&mut a, "t", t);
                opt(&mut a, "f", f);
                if let Some(r) = r {
                    opt(&mut a, "r", r);
                }
            }
            Cmd::GenerateLex { k, t, f } => {
                opt(&mut a, "k", k);
                opt(&mut a, "t", t);
                opt(&mut a, "f", f);
            }
            Cmd::Analyze { file, order, t, f } => {
                a.push(path(file));
                opt(&mut a, "order", order);
                if let Some(t) = t {
                    opt(&mut a, "t", t);
                }
                if let Some(f) = f {
                    opt(&mut a, "f", f);
                }
            }
            Cmd::Decompose { file, t, f } => {
                a.push(path(file));
                opt(&mut a, "t", t);
                opt(&mut a, "f", f);
            }
            Cmd::Layer { file, r, collapse } => {
                a.push(path(file));
                if let Some(r) = r {
                    opt(&mut a, "r", r);
                }
                if *collapse {
                    a.push("--collapse".into());
                }
            }
            Cmd::Oracle { tau, t, f, order, r } => {
                opt(&mut a, "tau", tau);
                opt(&mut a, "t", t);
                opt(&mut a, "f", f);
                opt(&mut a, "order", order);
                opt(&mut a, "r", r);
            }
            Cmd::RunProgram { program, inputs, trace } => {
                a.push(program.clone());
                if !inputs.is_empty() {
                    opt(&mut a, "inputs", joined(inputs));
                }
                if *trace {
                    a.push("--trace".into());
                }
            }
            Cmd::Km { file, explore } => {
                a.push(path(file));
                opt(&mut a, "explore", explore);
            }
            Cmd::Ica { file, bfs_cap } => {
                a.push(path(file));
                if let Some(c) = bfs_cap {
                    opt(&mut a, "bfs-cap", c);
                }
            }
            Cmd::Terminate { program, ranks, inits, grid } => {
                a.push(program.clone());
                opt(&mut a, "ranks", path(ranks));
                for i in inits {
                    opt(&mut a, "init", i);
                }
                if let Some(g) = grid {
                    opt(&mut a, "grid", g);
                }
            }
            Cmd::Verify { suite, list } => {
                if let Some(s) = suite {
                    opt(&mut a, "suite", s);
                }
                if *list {
                    a.push("--list".into());
                }
            }
        }
        opt(&mut a, "format", if self.format == Format::Json { "json" } else { "text" });
        opt(&mut a, "max-bits", self.max_bits);
        opt(&mut a, "max-steps", self.max_steps);
        if self.sequential {
            a.push("--sequential".into());
        }
        a
    }
}
