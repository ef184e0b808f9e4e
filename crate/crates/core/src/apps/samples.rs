//! Small hand-written models shared by the verification suites, tests and
//! benchmarks.

use crate::apps::ica::{CounterOp, Ica, Rule};
use crate::apps::km::Vas;

/// The three small VAS examples plus two richer nets, with names.
pub fn vas_examples() -> Vec<(&'static str, Vas)> {
    let mk = |init: Vec<u64>, deltas: Vec<Vec<i64>>| Vas::new(init, deltas).expect("valid sample VAS");
    vec![
        ("inc", mk(vec![0], vec![vec![1]])),
        ("dec", mk(vec![1], vec![vec![-1]])),
        ("second-grows", mk(vec![0, 0], vec![vec![0, 1]])),
        ("transfer", mk(vec![1, 0, 0], vec![vec![-1, 1, 0], vec![1, -1, 1], vec![0, -1, -1]])),
        ("mutex", mk(vec![1, 0, 1, 0], vec![vec![-1, 1, -1, 0], vec![1, -1, 1, 0], vec![0, 0, -1, 1], vec![0, 0, 1, -1]])),
    ]
}

fn machine(states: &[&str], k: usize, rules: &[(usize, CounterOp, usize)], init: (usize, Vec<u64>)) -> Ica {
    let rules = rules.iter().map(|&(from, op, to)| Rule { from, op, to }).collect();
    Ica::new(states.iter().map(|s| s.to_string()).collect(), k, rules, init).expect("valid sample ICA")
}

/// Five machines small enough for a truncated explicit search.
pub fn ica_machines() -> Vec<(&'static str, Ica)> {
    use CounterOp::{Dec, Inc, Zero};
    vec![
        ("dec-loop", machine(&["q"], 1, &[(0, Dec(0), 0)], (0, vec![2]))),
        ("ping-pong", machine(&["p", "q"], 2, &[(0, Dec(0), 1), (1, Inc(1), 0)], (0, vec![2, 0]))),
        (
            "countdown-then-fill",
            machine(&["p", "q", "r"], 2, &[(0, Dec(0), 0), (0, Zero(0), 1), (1, Inc(1), 1), (1, Zero(1), 2)], (0, vec![1, 0])),
        ),
        (
            "transfer",
            machine(&["q", "r", "s"], 2, &[(0, Dec(0), 1), (1, Inc(1), 0), (0, Zero(0), 2), (2, Dec(1), 2)], (0, vec![3, 0])),
        ),
        ("guarded-start", machine(&["p", "q"], 1, &[(0, Inc(0), 0), (0, Zero(0), 1), (1, Dec(0), 0)], (0, vec![0]))),
    ]
}
