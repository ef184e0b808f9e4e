//! Checking disjunctive termination arguments on explored behaviours.
//!
//! Every run from every given input is explored. For each pair of states
//! `x_i, x_j` with `i < j` on a run, some ranking relation must cover the
//! pair. The tuples of ranks along a run then form a bad sequence, whose
//! length is compared against the bound for `N^k` when the ranks are
//! controlled by the successor function.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::apps::program::{LoopProgram, RankingSpec};
use crate::bounds::{ubound, Method};
use crate::control::{ControlFunction, EvalBudget, Meter};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::oracle::show_state;
use crate::typemultiset::TypeMultiset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitReport {
    pub inputs: Vec<BigInt>,
    /// Most loop iterations over all runs.
    pub max_run: usize,
    pub runs: u64,
    pub pairs_checked: u64,
    /// Rank tuples are bad on every run.
    pub tuples_bad: bool,
    /// `t`: the norm of the initial rank tuple.
    pub t: BigUint,
    /// Rank tuples satisfy `||rho(x_i)|| <= i + t` on every run.
    pub control_ok: bool,
    /// Bound on the rank-tuple sequence length over `{k}`, when controlled.
    pub predicted: Option<BigUint>,
}

impl InitReport {
    /// `max_run + 1` states fit under the prediction (vacuous without one).
    pub fn bound_ok(&self) -> bool {
        self.predicted.as_ref().is_none_or(|p| BigUint::from(self.max_run + 1) <= *p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermReport {
    pub per_init: Vec<InitReport>,
}

impl TermReport {
    pub fn max_run(&self) -> Option<&InitReport> {
        self.per_init.iter().fold(None, |best: Option<&InitReport>, r| match best {
            Some(b) if b.max_run >= r.max_run => Some(b),
            _ => Some(r),
        })
    }

    pub fn tuples_bad(&self) -> bool {
        self.per_init.iter().all(|r| r.tuples_bad)
    }

    pub fn bound_ok(&self) -> bool {
        self.per_init.iter().all(InitReport::bound_ok)
    }

    pub fn pairs_checked(&self) -> u64 {
        self.per_init.iter().map(|r| r.pairs_checked).sum()
    }
}

struct Explorer<'a> {
    program: &'a LoopProgram,
    spec: &'a RankingSpec,
    meter: Meter,
    states: Vec<Vec<BigInt>>,
    tuples: Vec<Vec<BigInt>>,
    t: BigInt,
    report: InitReport,
}

impl Explorer<'_> {
    fn ranks(&self, state: &[BigInt]) -> Result<Vec<BigInt>> {
        self.spec
            .rankings
            .iter()
            .enumerate()
            .map(|(j, r)| {
                let v = r.rank.eval(state);
                if v.is_negative() {
                    Err(Error::RankNegative {
                        rank: j + 1,
                        value: v.to_string(),
                        state: show_state(self.program, state),
                    })
                } else {
                    Ok(v)
                }
            })
            .collect()
    }

    fn visit(&mut self, state: Vec<BigInt>) -> Result<()> {
        self.meter.tick()?;
        let tuple = self.ranks(&state)?;
        let depth = self.states.len();
        for (prev, prev_tuple) in self.states.iter().zip(&self.tuples) {
            self.meter.tick()?;
            self.report.pairs_checked += 1;
            if !self.spec.rankings.iter().any(|r| r.covers(prev, &state)) {
                return Err(Error::CoverageGap {
                    from: show_state(self.program, prev),
                    to: show_state(self.program, &state),
                });
            }
            if prev_tuple.iter().zip(&tuple).all(|(a, b)| a <= b) {
                self.report.tuples_bad = false;
            }
        }
        let norm = tuple.iter().max().cloned().unwrap_or_default();
        if norm > &self.t + BigInt::from(depth) {
            self.report.control_ok = false;
        }
        let next = self.program.successors(&state);
        self.states.push(state);
        self.tuples.push(tuple);
        if next.is_empty() {
            self.report.runs += 1;
            self.report.max_run = self.report.max_run.max(depth);
        }
        for n in next {
            self.visit(n)?;
        }
        self.states.pop();
        self.tuples.pop();
        Ok(())
    }
}

fn check_init(program: &LoopProgram, spec: &RankingSpec, inputs: &[BigInt], caps: EvalBudget) -> Result<InitReport> {
    let init = program.initial_state(inputs)?;
    let mut ex = Explorer {
        program,
        spec,
        meter: Meter::new(caps),
        states: Vec::new(),
        tuples: Vec::new(),
        t: BigInt::default(),
        report: InitReport {
            inputs: inputs.to_vec(),
            max_run: 0,
            runs: 0,
            pairs_checked: 0,
            tuples_bad: true,
            t: BigUint::default(),
            control_ok: true,
            predicted: None,
        },
    };
    let t = ex.ranks(&init)?.into_iter().max().unwrap_or_default();
    ex.t = t.clone();
    ex.visit(init)?;
    let mut report = ex.report;
    report.t = t.to_biguint().unwrap_or_default();
    if report.control_ok {
        let tau = TypeMultiset::singleton(spec.rankings.len() as u32);
        report.predicted = match ubound(&tau, &report.t, &ControlFunction::Successor, Method::Fast, caps) {
            Ok(b) => Some(b.value),
            Err(e) if e.is_budget() => None,
            Err(e) => return Err(e),
        };
    }
    Ok(report)
}

/// Explores every run from each input vector. Inputs are independent and
/// may be checked in parallel; the first failing input, in input order,
/// decides the error.
pub fn term_check(
    program: &LoopProgram,
    spec: &RankingSpec,
    inits: &[Vec<BigInt>],
    caps: EvalBudget,
    exec: Exec,
) -> Result<TermReport> {
    let per_init = exec
        .map(inits, |inputs| check_init(program, spec, inputs, caps))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(TermReport { per_init })
}

/// All input vectors with `n` entries in `0..=max`, in lexicographic order.
pub fn input_grid(n: usize, max: u64) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut v = vec![0u64; n];
    loop {
        out.push(v.iter().map(|&x| BigInt::from(x)).collect());
        let mut carry = true;
        for x in v.iter_mut().rev() {
            if *x < max {
                *x += 1;
                carry = false;
                break;
            }
            *x = 0;
        }
        if carry {
            return out;
        }
    }
}
