//! Nondeterministic single-loop programs with affine updates, and ranking
//! specifications for disjunctive termination arguments.
//!
//! Program file format:
//!
//! ```text
//! vars a b
//! guard a > 0 && b > 1
//! branch
//!   a := a - 1
//!   b := a
//! branch
//!   a := b - 2
//!   b := a + 1
//! init c := 1
//! ```
//!
//! Variables not assigned in a branch keep their value. `init` lines fix a
//! variable before the loop; the remaining variables are program inputs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `c + sum coef * var`, over variable indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub constant: BigInt,
    pub terms: Vec<(BigInt, usize)>,
}

impl Affine {
    pub fn var(v: usize) -> Self {
        Self { constant: BigInt::zero(), terms: vec![(BigInt::one(), v)] }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self { constant: c.into(), terms: Vec::new() }
    }

    pub fn scaled(coef: impl Into<BigInt>, v: usize) -> Self {
        Self { constant: BigInt::zero(), terms: vec![(coef.into(), v)] }
    }

    pub fn plus(mut self, c: impl Into<BigInt>) -> Self {
        self.constant += c.into();
        self
    }

    pub fn eval(&self, state: &[BigInt]) -> BigInt {
        self.terms.iter().fold(self.constant.clone(), |acc, (c, v)| acc + c * &state[*v])
    }

    /// Parses `2*a - b + 3` style expressions over the given variable names.
    pub fn parse(text: &str, vars: &[String]) -> Result<Self> {
        let mut constant = BigInt::zero();
        let mut terms: Vec<(BigInt, usize)> = Vec::new();
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::usage(text, "empty expression"));
        }
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = BigInt::one();
            if let Some(r) = rest.strip_prefix('+') {
                if first {
                    return Err(Error::usage(text, "leading '+'"));
                }
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r;
            } else if !first {
                return Err(Error::usage(rest, "expected '+' or '-'"));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            let (coef, var) = parse_term(term, vars)?;
            match var {
                Some(v) => match terms.iter_mut().find(|(_, w)| *w == v) {
                    Some((c, _)) => *c += sign * coef,
                    None => terms.push((sign * coef, v)),
                },
                None => constant += sign * coef,
            }
        }
        terms.retain(|(c, _)| !c.is_zero());
        Ok(Self { constant, terms })
    }

    pub fn render(&self, vars: &[String]) -> String {
        let mut out = String::new();
        for (c, v) in &self.terms {
            let name = &vars[*v];
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if mag.is_one() {
                out.push_str(name);
            } else {
                out.push_str(&format!("{mag}*{name}"));
            }
        }
        if out.is_empty() {
            return self.constant.to_string();
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { " - " } else { " + " };
            out.push_str(&format!("{sign}{}", self.constant.abs()));
        }
        out
    }
}

fn parse_term(term: &str, vars: &[String]) -> Result<(BigInt, Option<usize>)> {
    let lookup = |name: &str| {
        vars.iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::usage(name, "unknown variable"))
    };
    let number = |s: &str| s.parse::<BigInt>().map_err(|_| Error::usage(s, "expected a number"));
    if term.is_empty() {
        return Err(Error::usage(term, "missing term"));
    }
    if let Some((a, b)) = term.split_once('*') {
        return if a.chars().all(|c| c.is_ascii_digit()) {
            Ok((number(a)?, Some(lookup(b)?)))
        } else {
            Ok((number(b)?, Some(lookup(a)?)))
        };
    }
    if term.chars().all(|c| c.is_ascii_digit()) {
        Ok((number(term)?, None))
    } else {
        Ok((BigInt::one(), Some(lookup(term)?)))
    }
}

/// A conjunction of `var > constant` atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Guard {
    pub atoms: Vec<(usize, BigInt)>,
}

impl Guard {
    pub fn holds(&self, state: &[BigInt]) -> bool {
        self.atoms.iter().all(|(v, c)| &state[*v] > c)
    }

    /// Accepts `&&`, `and`, `∧` or `,` between atoms, each `v > c` or `v >= c`.
    pub fn parse(text: &str, vars: &[String]) -> Result<Self> {
        let normalized = text.replace("&&", ",").replace('∧', ",").replace(" and ", ",");
        let mut atoms = Vec::new();
        for atom in normalized.split(',').map(str::trim) {
            if atom.is_empty() || atom == "true" {
                continue;
            }
            let (lhs, rhs, strict) = if let Some((l, r)) = atom.split_once(">=") {
                (l, r, false)
            } else if let Some((l, r)) = atom.split_once('>') {
                (l, r, true)
            } else {
                return Err(Error::usage(atom, "expected `v > c`"));
            };
            let v = vars
                .iter()
                .position(|x| x == lhs.trim())
                .ok_or_else(|| Error::usage(lhs.trim(), "unknown variable"))?;
            let c = rhs.trim().parse::<BigInt>().map_err(|_| Error::usage(rhs.trim(), "expected a number"))?;
            atoms.push((v, if strict { c } else { c - 1 }));
        }
        Ok(Self { atoms })
    }

    pub fn render(&self, vars: &[String]) -> String {
        if self.atoms.is_empty() {
            return "true".into();
        }
        self.atoms.iter().map(|(v, c)| format!("{} > {c}", vars[*v])).collect::<Vec<_>>().join(" && ")
    }
}

/// `while guard: one of the branches`, each branch a simultaneous update.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopProgram {
    pub vars: Vec<String>,
    pub guard: Guard,
    /// One update per variable in every branch.
    pub branches: Vec<Vec<Affine>>,
    /// Variables fixed before the loop.
    pub fixed: Vec<(usize, BigInt)>,
}

impl LoopProgram {
    /// The example `while a > 0 && b > 1: (a,b) <- (a-1, a) or (b-2, a+1)`.
    pub fn choice() -> Self {
        let vars = vec!["a".to_string(), "b".to_string()];
        let guard = Guard { atoms: vec![(0, BigInt::zero()), (1, BigInt::one())] };
        let branches = vec![
            vec![Affine::var(0).plus(-1), Affine::var(0)],
            vec![Affine::var(1).plus(-2), Affine::var(0).plus(1)],
        ];
        Self { vars, guard, branches, fixed: Vec::new() }
    }

    /// The `k`-variable program whose `j`-th branch decrements `a_j` and
    /// resets every later `a_i` and `c` to `2c`, starting from `c = 1`.
    pub fn lex(k: usize) -> Self {
        let mut vars: Vec<String> = (1..=k).map(|j| format!("a{j}")).collect();
        vars.push("c".into());
        let c = k;
        let guard = Guard { atoms: (0..k).map(|j| (j, BigInt::zero())).collect() };
        let branches = (0..k)
            .map(|j| {
                (0..=k)
                    .map(|i| match i.cmp(&j) {
                        std::cmp::Ordering::Less => Affine::var(i),
                        std::cmp::Ordering::Equal => Affine::var(i).plus(-1),
                        std::cmp::Ordering::Greater => Affine::scaled(2, c),
                    })
                    .collect()
            })
            .collect();
        Self { vars, guard, branches, fixed: vec![(c, BigInt::one())] }
    }

    /// Variables that are not fixed, in declaration order.
    pub fn inputs(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|v| !self.fixed.iter().any(|(w, _)| w == v)).collect()
    }

    /// Builds the initial state from values for [`LoopProgram::inputs`].
    pub fn initial_state(&self, inputs: &[BigInt]) -> Result<Vec<BigInt>> {
        let free = self.inputs();
        if free.len() != inputs.len() {
            return Err(Error::Precondition(format!(
                "program expects {} inputs, got {}",
                free.len(),
                inputs.len()
            )));
        }
        let mut state = vec![BigInt::zero(); self.vars.len()];
        for (v, x) in free.iter().zip(inputs) {
            state[*v] = x.clone();
        }
        for (v, x) in &self.fixed {
            state[*v] = x.clone();
        }
        Ok(state)
    }

    /// Successor states in branch order; empty when the guard fails.
    pub fn successors(&self, state: &[BigInt]) -> Vec<Vec<BigInt>> {
        if !self.guard.holds(state) {
            return Vec::new();
        }
        self.branches.iter().map(|b| b.iter().map(|e| e.eval(state)).collect()).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

impl FromStr for LoopProgram {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut vars: Option<Vec<String>> = None;
        let mut guard = Guard::default();
        let mut branches: Vec<Vec<Affine>> = Vec::new();
        let mut fixed = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let wrap = |e: Error| match e {
                Error::Usage { token, message } => Error::parse(lineno, format!("{message}: {token:?}")),
                other => Error::parse(lineno, other.to_string()),
            };
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            if head == "vars" {
                if vars.is_some() {
                    return Err(Error::parse(lineno, "duplicate vars line"));
                }
                let names: Vec<String> = rest.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect();
                if names.is_empty() {
                    return Err(Error::parse(lineno, "no variables declared"));
                }
                if let Some(bad) = names.iter().find(|n| !valid_name(n)) {
                    return Err(Error::parse(lineno, format!("invalid variable name {bad:?}")));
                }
                vars = Some(names);
                continue;
            }
            let names = vars.as_ref().ok_or_else(|| Error::parse(lineno, "`vars` must come first"))?;
            match head {
                "guard" => guard.atoms.extend(Guard::parse(rest, names).map_err(wrap)?.atoms),
                "branch" => branches.push((0..names.len()).map(Affine::var).collect()),
                "init" => {
                    let (v, e) = parse_assignment(rest, names).map_err(wrap)?;
                    if !e.terms.is_empty() {
                        return Err(Error::parse(lineno, "init value must be a constant"));
                    }
                    fixed.retain(|(w, _)| *w != v);
                    fixed.push((v, e.constant));
                }
                _ if line.contains(":=") => {
                    let branch = branches
                        .last_mut()
                        .ok_or_else(|| Error::parse(lineno, "assignment outside a branch"))?;
                    let (v, e) = parse_assignment(line, names).map_err(wrap)?;
                    branch[v] = e;
                }
                _ => return Err(Error::parse(lineno, format!("unknown directive {head:?}"))),
            }
        }
        let vars = vars.ok_or_else(|| Error::parse(1, "missing vars line"))?;
        if branches.is_empty() {
            return Err(Error::parse(text.lines().count().max(1), "program has no branch"));
        }
        fixed.sort_by_key(|(v, _)| *v);
        Ok(Self { vars, guard, branches, fixed })
    }
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn parse_assignment(text: &str, vars: &[String]) -> Result<(usize, Affine)> {
    let (lhs, rhs) = text.split_once(":=").ok_or_else(|| Error::usage(text, "expected `v := expr`"))?;
    let v = vars
        .iter()
        .position(|x| x == lhs.trim())
        .ok_or_else(|| Error::usage(lhs.trim(), "unknown variable"))?;
    Ok((v, Affine::parse(rhs, vars)?))
}

impl fmt::Display for LoopProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars {}", self.vars.join(" "))?;
        writeln!(f, "guard {}", self.guard.render(&self.vars))?;
        for branch in &self.branches {
            writeln!(f, "branch")?;
            for (v, e) in branch.iter().enumerate() {
                if *e != Affine::var(v) {
                    writeln!(f, "  {} := {}", self.vars[v], e.render(&self.vars))?;
                }
            }
        }
        for (v, x) in &self.fixed {
            writeln!(f, "init {} := {x}", self.vars[*v])?;
        }
        Ok(())
    }
}

/// One ranking map into the naturals with the condition enabling its
/// relation: `(x, x')` is in the relation iff `when` holds at `x` and the
/// rank strictly decreases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranking {
    pub rank: Affine,
    pub when: Guard,
}

impl Ranking {
    pub fn covers(&self, from: &[BigInt], to: &[BigInt]) -> bool {
        self.when.holds(from) && self.rank.eval(from) > self.rank.eval(to)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankingSpec {
    pub rankings: Vec<Ranking>,
}

impl RankingSpec {
    /// Parses lines `rank <affine> when <guard>`; `when` may be omitted.
    pub fn parse(text: &str, program: &LoopProgram) -> Result<Self> {
        let mut rankings = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let body = line
                .strip_prefix("rank")
                .filter(|r| r.starts_with(char::is_whitespace))
                .ok_or_else(|| Error::parse(lineno, "expected `rank <affine> when <guard>`"))?;
            let (rank, when) = match body.split_once(" when ") {
                Some((r, w)) => (r, w),
                None => (body, ""),
            };
            let wrap = |e: Error| Error::parse(lineno, e.to_string());
            rankings.push(Ranking {
                rank: Affine::parse(rank, &program.vars).map_err(wrap)?,
                when: Guard::parse(when, &program.vars).map_err(wrap)?,
            });
        }
        if rankings.is_empty() {
            return Err(Error::parse(1, "no rank lines"));
        }
        Ok(Self { rankings })
    }

    /// `rank v when v > c` for each `(v, c)`.
    pub fn decreasing(atoms: &[(usize, i64)]) -> Self {
        let rankings = atoms
            .iter()
            .map(|&(v, c)| Ranking { rank: Affine::var(v), when: Guard { atoms: vec![(v, BigInt::from(c))] } })
            .collect();
        Self { rankings }
    }

    pub fn render(&self, program: &LoopProgram) -> String {
        self.rankings
            .iter()
            .map(|r| format!("rank {} when {}\n", r.rank.render(&program.vars), r.when.render(&program.vars)))
            .collect()
    }
}
