//! Exhaustive ground truth for small instances.
//!
//! [`longest_bad`] enumerates every `t`-controlled `r`-bad sequence by depth
//! first search. Candidates at each index are tried with summands ascending
//! and vectors in lexicographic order, so the witness is the first maximal
//! sequence met in that order. The subtrees below each first element are
//! independent and may be searched in parallel; each gets the full step
//! budget, which keeps the outcome identical in both modes.

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::apps::program::LoopProgram;
use crate::control::{ControlFunction, EvalBudget, Meter};
use crate::error::{Error, Resource, Result};
use crate::exec::Exec;
use crate::sequences::{Item, SeqOrder, Summand, TaggedSequence};
use crate::typemultiset::{Dim, TypeMultiset};

/// Outcome of an exhaustive search. When `exhausted` is false the search ran
/// out of steps and `length` is only a lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub length: usize,
    pub witness: TaggedSequence,
    pub exhausted: bool,
    pub steps_used: u64,
}

impl SearchResult {
    /// The exact length, or a budget error for a partial search.
    pub fn exact(&self, budget: EvalBudget) -> Result<usize> {
        if self.exhausted {
            Ok(self.length)
        } else {
            Err(Error::BudgetExceeded { resource: Resource::Steps, limit: budget.max_steps })
        }
    }
}

struct Search<'a> {
    summands: Vec<Summand>,
    order: SeqOrder,
    r: usize,
    t: u64,
    f: &'a ControlFunction,
    meter: Meter,
    bounds: Vec<u64>,
    items: Vec<Item>,
    heights: Vec<usize>,
    best: Vec<Item>,
    out_of_steps: bool,
}

impl Search<'_> {
    fn bound(&mut self, depth: usize) -> Result<u64> {
        while self.bounds.len() <= depth {
            let x = self.t + self.bounds.len() as u64;
            let v = self.f.eval_u64(x, &mut self.meter)?;
            let v = v
                .to_u64()
                .ok_or_else(|| Error::Precondition(format!("control value f({x}) is too large to enumerate")))?;
            self.bounds.push(v);
        }
        Ok(self.bounds[depth])
    }

    /// Height of the longest increasing chain ending at `item`, or `None`
    /// when it would exceed `r`.
    fn height(&self, item: &Item) -> Option<usize> {
        let h = 1 + self
            .items
            .iter()
            .zip(&self.heights)
            .filter(|(x, _)| self.order.leq(x, item))
            .map(|(_, h)| *h)
            .max()
            .unwrap_or(0);
        (h <= self.r).then_some(h)
    }

    fn candidates(&mut self, depth: usize) -> Result<Vec<Item>> {
        let b = self.bound(depth)?;
        let mut out = Vec::new();
        if b == 0 {
            return Ok(out);
        }
        for &s in &self.summands {
            let d = s.dim as usize;
            let mut v = vec![0u64; d];
            loop {
                self.meter.tick()?;
                out.push(Item::new(s, v.clone()));
                // odometer, last coordinate fastest: lexicographic order
                let mut carry = true;
                for x in v.iter_mut().rev() {
                    *x += 1;
                    if *x < b {
                        carry = false;
                        break;
                    }
                    *x = 0;
                }
                if carry {
                    break;
                }
            }
        }
        Ok(out)
    }

    fn push(&mut self, item: Item, h: usize) {
        self.items.push(item);
        self.heights.push(h);
        if self.items.len() > self.best.len() {
            self.best = self.items.clone();
        }
    }

    fn pop(&mut self) {
        self.items.pop();
        self.heights.pop();
    }

    fn dfs(&mut self) -> Result<()> {
        let depth = self.items.len();
        for item in self.candidates(depth)? {
            self.meter.tick()?;
            if let Some(h) = self.height(&item) {
                self.push(item, h);
                let res = self.dfs();
                self.pop();
                res?;
            }
        }
        Ok(())
    }

    fn run(&mut self) -> Result<()> {
        match self.dfs() {
            Err(Error::BudgetExceeded { resource: Resource::Steps, .. }) => {
                self.out_of_steps = true;
                Ok(())
            }
            other => other,
        }
    }
}

/// The longest `t`-controlled `r`-bad sequence over `N^tau` for `order`.
/// The lexicographic ordering needs `tau = {k}`.
pub fn longest_bad(
    tau: &TypeMultiset,
    t: u64,
    f: &ControlFunction,
    order: SeqOrder,
    r: usize,
    caps: EvalBudget,
    exec: Exec,
) -> Result<SearchResult> {
    if r == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    if order == SeqOrder::Lex && tau.to_sorted_desc(1).map(|v| v.len()) != Some(1) {
        return Err(Error::Precondition(format!("the lexicographic ordering needs a type {{k}}, got {tau}")));
    }
    let mut summands = Vec::new();
    for (k, m) in tau.iter() {
        let m = m
            .to_u64()
            .filter(|&m| m <= 1 << 16)
            .ok_or_else(|| Error::Precondition(format!("multiplicity of {k} in {tau} is too large to search")))?;
        summands.extend((0..m).map(|c| Summand::new(k, c)));
    }
    let new_search = || Search {
        summands: summands.clone(),
        order,
        r,
        t,
        f,
        meter: Meter::new(caps),
        bounds: Vec::new(),
        items: Vec::new(),
        heights: Vec::new(),
        best: Vec::new(),
        out_of_steps: false,
    };

    let mut root = new_search();
    let firsts = match root.candidates(0) {
        Ok(c) => c,
        Err(Error::BudgetExceeded { resource: Resource::Steps, .. }) => {
            return finish(tau, Vec::new(), false, root.meter.steps_used());
        }
        Err(e) => return Err(e),
    };
    let root_steps = root.meter.steps_used();
    let branches = exec.map(&firsts, |first| -> Result<(Vec<Item>, bool, u64)> {
        let mut s = new_search();
        s.push(first.clone(), 1);
        s.run()?;
        Ok((s.best, !s.out_of_steps, s.meter.steps_used()))
    });
    let mut best: Vec<Item> = Vec::new();
    let mut exhausted = true;
    let mut steps = root_steps;
    for branch in branches {
        let (seq, done, used) = branch?;
        exhausted &= done;
        steps = steps.saturating_add(used);
        if seq.len() > best.len() {
            best = seq;
        }
    }
    finish(tau, best, exhausted, steps)
}

fn finish(tau: &TypeMultiset, items: Vec<Item>, exhausted: bool, steps_used: u64) -> Result<SearchResult> {
    let length = items.len();
    let witness = TaggedSequence::new(tau.clone(), items)?;
    Ok(SearchResult { length, witness, exhausted, steps_used })
}

/// Outcome of [`longest_run`]: the most loop iterations over all choice
/// resolutions and a trace realising it, states included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub length: usize,
    pub trace: Vec<Vec<BigInt>>,
    pub exhausted: bool,
    pub steps_used: u64,
}

/// Longest run of a loop program from the given inputs. States are
/// memoized; revisiting a state on the current path means the program can
/// loop forever.
pub fn longest_run(program: &LoopProgram, inputs: &[BigInt], caps: EvalBudget) -> Result<RunResult> {
    let init = program.initial_state(inputs)?;
    let mut meter = Meter::new(caps);
    let mut memo: HashMap<Vec<BigInt>, (usize, Option<usize>)> = HashMap::new();
    let mut on_path: HashSet<Vec<BigInt>> = HashSet::new();
    let res = run_from(program, &init, &mut meter, &mut memo, &mut on_path);
    match res {
        Ok(length) => {
            let mut trace = vec![init.clone()];
            let mut cur = init;
            while let Some(&(_, Some(b))) = memo.get(&cur) {
                cur = program.successors(&cur).swap_remove(b);
                trace.push(cur.clone());
            }
            Ok(RunResult { length, trace, exhausted: true, steps_used: meter.steps_used() })
        }
        Err(e) => Err(e),
    }
}

fn run_from(
    program: &LoopProgram,
    state: &[BigInt],
    meter: &mut Meter,
    memo: &mut HashMap<Vec<BigInt>, (usize, Option<usize>)>,
    on_path: &mut HashSet<Vec<BigInt>>,
) -> Result<usize> {
    if let Some(&(len, _)) = memo.get(state) {
        return Ok(len);
    }
    meter.tick()?;
    if !on_path.insert(state.to_vec()) {
        return Err(Error::NonTerminating(format!("state {} repeats", show_state(program, state))));
    }
    let mut best = (0usize, None);
    for (b, next) in program.successors(state).into_iter().enumerate() {
        let len = 1 + run_from(program, &next, meter, memo, on_path)?;
        if best.1.is_none() || len > best.0 {
            best = (len, Some(b));
        }
    }
    on_path.remove(state);
    memo.insert(state.to_vec(), best);
    Ok(best.0)
}

pub(crate) fn show_state(program: &LoopProgram, state: &[BigInt]) -> String {
    let parts: Vec<String> = program.vars.iter().zip(state).map(|(v, x)| format!("{v}={x}")).collect();
    format!("({})", parts.join(", "))
}

/// Re-checks a search witness: type, control and `r`-badness.
pub fn verify_witness(
    res: &SearchResult,
    t: u64,
    f: &ControlFunction,
    order: SeqOrder,
    r: usize,
    budget: EvalBudget,
) -> Result<bool> {
    let profile = crate::sequences::goodness_profile_with(&res.witness, order, Exec::Sequential);
    Ok(res.witness.len() == res.length
        && profile.is_r_bad(r)
        && crate::sequences::is_controlled(&res.witness, t, f, budget)?)
}

/// Convenience for a single summand `N^k`.
pub fn longest_bad_dim(k: Dim, t: u64, f: &ControlFunction, order: SeqOrder, caps: EvalBudget) -> Result<SearchResult> {
    longest_bad(&TypeMultiset::singleton(k), t, f, order, 1, caps, Exec::default())
}

/// Upper bound on the search result from the fast bound on `r x tau`.
pub fn predicted_bound(tau: &TypeMultiset, t: u64, f: &ControlFunction, r: usize, budget: EvalBudget) -> Result<BigUint> {
    let scaled = tau.scale(&BigUint::from(r));
    Ok(crate::bounds::ubound(&scaled, &BigUint::from(t), f, crate::bounds::Method::Fast, budget)?.value)
}
