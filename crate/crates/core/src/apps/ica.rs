//! Forward saturation for incrementing counter automata, on upward-closed
//! sets represented by their minimal elements.
//!
//! ICA file format: `state <q>` lines, one `init <q> <n1 .. nk>` line, and
//! `rule <q> inc|dec|zero <c> <q'>` lines. Counters are numbered from 0.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::control::{EvalBudget, Meter};
use crate::error::{Error, Result};
use crate::sequences::{Item, Summand, TaggedSequence};
use crate::typemultiset::TypeMultiset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CounterOp {
    Inc(usize),
    Dec(usize),
    Zero(usize),
}

impl CounterOp {
    fn counter(self) -> usize {
        match self {
            CounterOp::Inc(c) | CounterOp::Dec(c) | CounterOp::Zero(c) => c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub from: usize,
    pub op: CounterOp,
    pub to: usize,
}

/// A configuration: control state and counter values.
pub type Config = (usize, Vec<u64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ica {
    pub states: Vec<String>,
    pub k: usize,
    pub rules: Vec<Rule>,
    pub init: Config,
}

impl Ica {
    pub fn new(states: Vec<String>, k: usize, rules: Vec<Rule>, init: Config) -> Result<Self> {
        let n = states.len();
        if init.0 >= n || init.1.len() != k {
            return Err(Error::Precondition("initial configuration does not fit the machine".into()));
        }
        if let Some(r) = rules.iter().find(|r| r.from >= n || r.to >= n || r.op.counter() >= k) {
            return Err(Error::Precondition(format!("rule {r:?} refers to an unknown state or counter")));
        }
        Ok(Self { states, k, rules, init })
    }

    /// The type `|Q| x {k}`: one copy of `N^k` per control state.
    pub fn conf_type(&self) -> TypeMultiset {
        TypeMultiset::repeated(self.states.len() as u64, self.k as u32)
    }

    pub fn show(&self, c: &Config) -> String {
        let vals: Vec<String> = c.1.iter().map(ToString::to_string).collect();
        format!("({}, {})", self.states[c.0], vals.join(","))
    }

    /// Successors of a concrete configuration under the plain counter
    /// machine semantics (no spurious increments).
    fn machine_steps(&self, c: &Config) -> Vec<Config> {
        let mut out = Vec::new();
        for r in self.rules.iter().filter(|r| r.from == c.0) {
            let mut v = c.1.clone();
            match r.op {
                CounterOp::Inc(i) => v[i] += 1,
                CounterOp::Dec(i) if v[i] > 0 => v[i] -= 1,
                CounterOp::Zero(i) if v[i] == 0 => {}
                _ => continue,
            }
            out.push((r.to, v));
        }
        out
    }
}

impl FromStr for Ica {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut states: Vec<String> = Vec::new();
        let mut init: Option<(String, Vec<u64>, usize)> = None;
        let mut raw_rules: Vec<(String, String, usize, String, usize)> = Vec::new();
        let mut last = 1;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            last = lineno;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<u64>().map_err(|_| Error::parse(lineno, format!("bad number {s:?}")));
            match words[0] {
                "state" => {
                    if words.len() != 2 {
                        return Err(Error::parse(lineno, "expected `state <q>`"));
                    }
                    if states.iter().any(|s| s == words[1]) {
                        return Err(Error::parse(lineno, format!("duplicate state {:?}", words[1])));
                    }
                    states.push(words[1].to_string());
                }
                "init" => {
                    if words.len() < 2 {
                        return Err(Error::parse(lineno, "expected `init <q> <n1 .. nk>`"));
                    }
                    if init.is_some() {
                        return Err(Error::parse(lineno, "duplicate init line"));
                    }
                    let vals = words[2..].iter().map(|s| num(s)).collect::<Result<Vec<_>>>()?;
                    init = Some((words[1].to_string(), vals, lineno));
                }
                "rule" => {
                    let [_, from, op, c, to] = words.as_slice() else {
                        return Err(Error::parse(lineno, "expected `rule <q> inc|dec|zero <c> <q'>`"));
                    };
                    if !matches!(*op, "inc" | "dec" | "zero") {
                        return Err(Error::parse(lineno, format!("unknown operation {op:?}")));
                    }
                    let c = num(c)? as usize;
                    raw_rules.push((from.to_string(), op.to_string(), c, to.to_string(), lineno));
                }
                other => return Err(Error::parse(lineno, format!("unknown directive {other:?}"))),
            }
        }
        let (q0, v0, init_line) = init.ok_or_else(|| Error::parse(last, "missing init line"))?;
        let k = v0.len();
        let find = |name: &str, line: usize| {
            states.iter().position(|s| s == name).ok_or_else(|| Error::parse(line, format!("unknown state {name:?}")))
        };
        let q0 = find(&q0, init_line)?;
        let mut rules = Vec::new();
        for (from, op, c, to, line) in raw_rules {
            if c >= k {
                return Err(Error::parse(line, format!("counter {c} out of range for {k} counters")));
            }
            let op = match op.as_str() {
                "inc" => CounterOp::Inc(c),
                "dec" => CounterOp::Dec(c),
                _ => CounterOp::Zero(c),
            };
            rules.push(Rule { from: find(&from, line)?, op, to: find(&to, line)? });
        }
        Ica::new(states, k, rules, (q0, v0))
    }
}

impl fmt::Display for Ica {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.states {
            writeln!(f, "state {s}")?;
        }
        let vals: Vec<String> = self.init.1.iter().map(ToString::to_string).collect();
        writeln!(f, "init {} {}", self.states[self.init.0], vals.join(" "))?;
        for r in &self.rules {
            let (name, c) = match r.op {
                CounterOp::Inc(c) => ("inc", c),
                CounterOp::Dec(c) => ("dec", c),
                CounterOp::Zero(c) => ("zero", c),
            };
            writeln!(f, "rule {} {name} {c} {}", self.states[r.from], self.states[r.to])?;
        }
        Ok(())
    }
}

/// An antichain of configurations, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MinUpwardSet {
    elems: Vec<Config>,
}

fn conf_leq(a: &Config, b: &Config) -> bool {
    a.0 == b.0 && a.1.iter().zip(&b.1).all(|(x, y)| x <= y)
}

impl MinUpwardSet {
    /// Minimal elements of the upward closure of `items`.
    pub fn from_elems(items: impl IntoIterator<Item = Config>) -> Self {
        let all: BTreeSet<Config> = items.into_iter().collect();
        let all: Vec<Config> = all.into_iter().collect();
        let elems = all
            .iter()
            .filter(|a| !all.iter().any(|b| b != *a && conf_leq(b, a)))
            .cloned()
            .collect();
        Self { elems }
    }

    pub fn elems(&self) -> &[Config] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, c: &Config) -> bool {
        self.elems.iter().any(|m| conf_leq(m, c))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_elems(self.elems.iter().chain(&other.elems).cloned())
    }
}

/// Minimal elements of `Post` of an upward-closed set. A decrement on a
/// zero counter still applies to the members above, so it is cut off at 0;
/// a zero test applies only when the minimal element has the counter at 0.
pub fn ica_post_min(set: &MinUpwardSet, m: &Ica) -> MinUpwardSet {
    let mut out = Vec::new();
    for (q, a) in &set.elems {
        for r in m.rules.iter().filter(|r| r.from == *q) {
            let mut v = a.clone();
            match r.op {
                CounterOp::Inc(c) => v[c] += 1,
                CounterOp::Dec(c) => v[c] = v[c].saturating_sub(1),
                CounterOp::Zero(c) if v[c] == 0 => {}
                CounterOp::Zero(_) => continue,
            }
            out.push((r.to, v));
        }
    }
    MinUpwardSet::from_elems(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    pub reach_min: MinUpwardSet,
    /// Least `l` with `Y_l = Y_{l+1}`.
    pub rounds: usize,
    /// `v_0, v_1, .., v_l` over `|Q| x {k}`: the initial configuration then
    /// one new minimal element per round.
    pub witness: TaggedSequence,
}

pub fn ica_saturate(m: &Ica, caps: EvalBudget) -> Result<Saturation> {
    let mut meter = Meter::new(caps);
    let v0 = m.init.clone();
    let mut x = MinUpwardSet::from_elems([v0.clone()]);
    let mut y = x.clone();
    let mut chosen = vec![v0];
    loop {
        meter.tick_n(1 + x.len() as u64 * m.rules.len().max(1) as u64)?;
        let next = ica_post_min(&x, m);
        let Some(fresh) = next.elems.iter().find(|c| !y.contains(c)).cloned() else {
            break;
        };
        chosen.push(fresh);
        y = y.union(&next);
        x = next;
    }
    let rounds = chosen.len() - 1;
    let items = chosen.into_iter().map(|(q, v)| Item::new(Summand::new(m.k as u32, q as u64), v)).collect();
    let witness = TaggedSequence::new(m.conf_type(), items)?;
    Ok(Saturation { reach_min: y, rounds, witness })
}

/// `||v_i|| <= i + ||v_0||` along the witness.
pub fn witness_norms_ok(witness: &TaggedSequence) -> bool {
    let items = witness.items();
    let Some(first) = items.first() else { return true };
    let n0 = first.norm();
    items.iter().enumerate().all(|(i, it)| it.norm() <= n0 + i as u64)
}

/// Configurations with every counter at most `cap` reachable from the
/// initial one through such configurations, allowing spurious increments
/// after each step.
pub fn truncated_reach(m: &Ica, cap: u64, caps: EvalBudget) -> Result<HashSet<Config>> {
    let mut meter = Meter::new(caps);
    let mut seen = HashSet::new();
    if m.init.1.iter().any(|&x| x > cap) {
        return Ok(seen);
    }
    let mut queue = VecDeque::from([m.init.clone()]);
    seen.insert(m.init.clone());
    while let Some(c) = queue.pop_front() {
        meter.tick()?;
        let mut next: Vec<Config> = m.machine_steps(&c);
        // spurious increments from the current configuration
        next.extend((0..m.k).filter(|&i| c.1[i] < cap).map(|i| {
            let mut v = c.1.clone();
            v[i] += 1;
            (c.0, v)
        }));
        for n in next {
            if n.1.iter().all(|&x| x <= cap) && seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
    }
    Ok(seen)
}

/// Compares the saturation against [`truncated_reach`] on every
/// configuration with counters at most `cap`. Returns the first mismatch.
pub fn compare_with_bfs(m: &Ica, sat: &Saturation, cap: u64, caps: EvalBudget) -> Result<Option<Config>> {
    let reach = truncated_reach(m, cap, caps)?;
    let mut v = vec![0u64; m.k];
    loop {
        for q in 0..m.states.len() {
            let c = (q, v.clone());
            if sat.reach_min.contains(&c) != reach.contains(&c) {
                return Ok(Some(c));
            }
        }
        let mut carry = true;
        for x in v.iter_mut() {
            if *x < cap {
                *x += 1;
                carry = false;
                break;
            }
            *x = 0;
        }
        if carry {
            return Ok(None);
        }
    }
}

/// Predicted bound on `rounds + 1` from the fast bound over `|Q| x {k}`.
pub fn rounds_bound(m: &Ica, budget: EvalBudget) -> Result<BigUint> {
    let t = BigUint::from(m.init.1.iter().copied().max().unwrap_or(0));
    let f = crate::control::ControlFunction::Successor;
    Ok(crate::bounds::ubound(&m.conf_type(), &t, &f, crate::bounds::Method::Fast, budget)?.value)
}
