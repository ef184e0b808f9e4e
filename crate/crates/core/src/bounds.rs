//! Upper bounds `M_tau(t)` on the length of controlled bad sequences and the
//! lexicographic lower-bound functions `l_k`, `o_k`.
//!
//! `M` is evaluated three ways. [`Method::Naive`] expands the defining
//! recursion (maximum over every `k` in `tau`) with memoisation,
//! [`Method::MinStrategy`] always removes the smallest element, and
//! [`Method::Fast`] splits `tau` by dimension and uses the iteration
//! hierarchy `G_k`. The first two are oracles for the third.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use crate::control::{fgh_iter, g_iter, region_count, ControlFunction, EvalBudget, Meter};
use crate::error::{Error, Result};
use crate::typemultiset::{Dim, TypeMultiset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Naive,
    MinStrategy,
    Fast,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Naive, Method::MinStrategy, Method::Fast];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::MinStrategy => "min-strategy",
            Method::Fast => "fast",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "min-strategy" | "min" => Ok(Method::MinStrategy),
            "fast" => Ok(Method::Fast),
            _ => Err(Error::usage(s, "expected naive, min-strategy or fast")),
        }
    }
}

/// An exact value of `M_tau(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub value: BigUint,
    pub method: Method,
    pub steps_used: u64,
}

/// `N_k(t) = k * (f(t) - 1)`.
pub fn n_of_k(k: Dim, t: &BigUint, f: &ControlFunction, budget: EvalBudget) -> Result<BigUint> {
    region_count(k, t, f, &mut Meter::new(budget))
}

/// `M_tau(t)`.
pub fn ubound(
    tau: &TypeMultiset,
    t: &BigUint,
    f: &ControlFunction,
    method: Method,
    budget: EvalBudget,
) -> Result<BoundResult> {
    let mut meter = Meter::new(budget);
    let value = match method {
        Method::Naive => naive(tau, t, f, &mut meter)?,
        Method::MinStrategy => min_strategy(tau, t, f, &mut meter)?,
        Method::Fast => fast(tau, t, f, &mut meter)?,
    };
    Ok(BoundResult { value, method, steps_used: meter.steps_used() })
}

fn residual_at(tau: &TypeMultiset, k: Dim, t: &BigUint, f: &ControlFunction, meter: &mut Meter) -> Result<TypeMultiset> {
    let n = region_count(k, t, f, meter)?;
    tau.residual(k, &n)
}

struct Frame {
    tau: TypeMultiset,
    t: BigUint,
    children: Vec<Dim>,
    next: usize,
    best: BigUint,
}

// One step per distinct (tau, t) node. The explicit stack keeps deep
// recursions off the call stack.
fn naive(tau: &TypeMultiset, t: &BigUint, f: &ControlFunction, meter: &mut Meter) -> Result<BigUint> {
    match compact_naive_input(tau, t, f, meter.budget()) {
        Some((mults, t)) => naive_compact(mults, t, f, meter),
        None => naive_general(tau, t, f, meter),
    }
}

// Multiplicities of dimensions 0..=3 and `t` as machine words, when every
// value the budgeted search can reach provably fits: a path has at most
// `max_steps` nodes, each adding at most `k * f(t_max)` elements.
fn compact_naive_input(tau: &TypeMultiset, t: &BigUint, f: &ControlFunction, budget: EvalBudget) -> Option<(Mults, u64)> {
    let top = tau.max_dim()?;
    if top as usize >= COMPACT_DIMS {
        return None;
    }
    let steps = budget.max_steps;
    let t0 = t.to_u64()?;
    let t_max = t0.checked_add(steps)?.checked_add(1)?;
    let f_max = f.eval_u64(t_max, &mut Meter::new(EvalBudget::default())).ok()?.to_u64()?;
    let mut mults = [0u64; COMPACT_DIMS];
    let mut total = 0u64;
    for (k, m) in tau.iter() {
        mults[k as usize] = m.to_u64()?;
        total = total.checked_add(mults[k as usize])?;
    }
    let grow = steps.checked_mul(u64::from(top))?.checked_mul(f_max)?;
    (total.checked_add(grow)? < 1 << 62).then_some((mults, t0))
}

const COMPACT_DIMS: usize = 4;

type Mults = [u64; COMPACT_DIMS];

struct CompactFrame {
    mults: Mults,
    t: u64,
    next: usize,
    best: u64,
}

fn naive_compact(mults: Mults, t: u64, f: &ControlFunction, meter: &mut Meter) -> Result<BigUint> {
    let cap = meter.budget().max_steps.min(1 << 22) as usize;
    let mut memo: FxHashMap<(Mults, u64), u64> = FxHashMap::with_capacity_and_hasher(cap, Default::default());
    let mut regions: FxHashMap<(usize, u64), u64> = FxHashMap::default();
    meter.tick()?;
    let mut stack = vec![CompactFrame { mults, t, next: 0, best: 0 }];
    loop {
        let top = stack.last_mut().expect("stack is never empty here");
        if let Some(k) = (top.next..COMPACT_DIMS).find(|&k| top.mults[k] > 0) {
            top.next = k;
            let n = match regions.get(&(k, top.t)) {
                Some(n) => *n,
                None => {
                    let n = region_count(k as Dim, &BigUint::from(top.t), f, meter)?
                        .to_u64()
                        .expect("bounded by the precheck");
                    regions.insert((k, top.t), n);
                    n
                }
            };
            let mut child = top.mults;
            child[k] -= 1;
            if k > 0 {
                child[k - 1] += n;
            }
            let key = (child, top.t + 1);
            if let Some(v) = memo.get(&key) {
                top.best = top.best.max(v + 1);
                top.next += 1;
            } else {
                meter.tick()?;
                stack.push(CompactFrame { mults: child, t: key.1, next: 0, best: 0 });
            }
            continue;
        }
        let done = stack.pop().expect("checked above");
        match stack.last_mut() {
            Some(parent) => {
                parent.best = parent.best.max(done.best + 1);
                parent.next += 1;
                memo.insert((done.mults, done.t), done.best);
            }
            None => return meter.checked(BigUint::from(done.best)),
        }
    }
}

fn naive_general(tau: &TypeMultiset, t: &BigUint, f: &ControlFunction, meter: &mut Meter) -> Result<BigUint> {
    let mut memo: HashMap<(TypeMultiset, BigUint), BigUint> = HashMap::new();
    let open = |tau: TypeMultiset, t: BigUint, meter: &mut Meter| -> Result<Frame> {
        meter.tick()?;
        let children = tau.dims().collect();
        Ok(Frame { tau, t, children, next: 0, best: BigUint::zero() })
    };
    let mut stack = vec![open(tau.clone(), t.clone(), meter)?];
    loop {
        let top = stack.last_mut().expect("stack is never empty here");
        if top.next < top.children.len() {
            let k = top.children[top.next];
            let child = residual_at(&top.tau, k, &top.t, f, meter)?;
            let key = (child, &top.t + 1u32);
            if let Some(v) = memo.get(&key) {
                let cand = v + 1u32;
                if cand > top.best {
                    top.best = cand;
                }
                top.next += 1;
            } else {
                let frame = open(key.0, key.1, meter)?;
                stack.push(frame);
            }
            continue;
        }
        let done = stack.pop().expect("checked above");
        meter.check(&done.best)?;
        match stack.last_mut() {
            Some(parent) => {
                let cand = &done.best + 1u32;
                if cand > parent.best {
                    parent.best = cand;
                }
                parent.next += 1;
                memo.insert((done.tau, done.t), done.best);
            }
            None => return Ok(done.best),
        }
    }
}

// Removing a 0 costs one unit and advances t by one, so a run of m zeros is
// folded into a single step.
fn min_strategy(tau: &TypeMultiset, t: &BigUint, f: &ControlFunction, meter: &mut Meter) -> Result<BigUint> {
    let mut tau = tau.clone();
    let mut t = t.clone();
    let mut count = BigUint::zero();
    while let Some(k) = tau.min_dim() {
        meter.tick()?;
        if k == 0 {
            let m = tau.multiplicity(0);
            tau.remove_many(0, &m)?;
            count += &m;
            t += m;
        } else {
            let n = region_count(k, &t, f, meter)?;
            tau.remove_one(k)?;
            tau.insert_many(k - 1, n);
            count += 1u32;
            t += 1u32;
        }
        meter.check(&count)?;
        meter.check(&t)?;
    }
    Ok(count)
}

// M_{tau + tau'}(t) = M_{tau'}(t) + M_tau(t + M_{tau'}(t)) whenever every
// element of tau' is <= min tau, so the dimensions are consumed in ascending
// order, each block r x {k} contributing G_k^r(t) - t.
fn fast(tau: &TypeMultiset, t: &BigUint, f: &ControlFunction, meter: &mut Meter) -> Result<BigUint> {
    let mut tau = tau.clone();
    let mut t = t.clone();
    let mut total = BigUint::zero();
    // While f(t) = 0 the cut-off region count is 0, which the closed form
    // does not model; peel those leading steps explicitly.
    while let Some(k) = tau.min_dim() {
        meter.tick()?;
        if !f.eval(&t, meter)?.is_zero() {
            break;
        }
        tau.remove_one(k)?;
        total += 1u32;
        t += 1u32;
    }
    for (k, r) in tau.iter() {
        let m = if k == 0 {
            meter.tick()?;
            r.clone()
        } else {
            g_iter(k, r, t.clone(), f, meter)? - &t
        };
        total += &m;
        t += m;
        meter.check(&total)?;
        meter.check(&t)?;
    }
    Ok(total)
}

/// `(l_k(t), o_k(t))` with `o_k(t) = t + l_k(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexLen {
    pub length: BigUint,
    pub offset: BigUint,
    pub steps_used: u64,
}

// `l_k(t)`, or `None` once the value is known to exceed `cap`.
pub(crate) fn lex_eval(
    k: Dim,
    t: &BigUint,
    f: &ControlFunction,
    meter: &mut Meter,
    cap: Option<&BigUint>,
) -> Result<Option<BigUint>> {
    if k == 0 {
        return Err(Error::Precondition("lexicographic dimension must be >= 1".into()));
    }
    let ft = f.eval(t, meter)?;
    if k == 1 {
        meter.tick()?;
        return Ok(if cap.is_some_and(|c| ft > *c) { None } else { Some(ft) });
    }
    let sections = ft.to_u64().unwrap_or(u64::MAX);
    let mut sum = BigUint::zero();
    let mut start = t.clone();
    for _ in 0..sections {
        meter.tick()?;
        let Some(len) = lex_eval(k - 1, &start, f, meter, cap)? else {
            return Ok(None);
        };
        sum += &len;
        start += len;
        if cap.is_some_and(|c| sum > *c) {
            return Ok(None);
        }
        meter.check(&sum)?;
        meter.check(&start)?;
    }
    Ok(Some(sum))
}

/// Length of the longest `t`-controlled bad sequence for the lexicographic
/// ordering on `N^k`, and its offset.
pub fn lex_len(k: Dim, t: &BigUint, f: &ControlFunction, budget: EvalBudget) -> Result<LexLen> {
    let mut meter = Meter::new(budget);
    let length = lex_eval(k, t, f, &mut meter, None)?.expect("uncapped evaluation");
    let offset = meter.checked(t + &length)?;
    Ok(LexLen { length, offset, steps_used: meter.steps_used() })
}

fn rbad_sum(
    r: u64,
    k: Dim,
    t: &BigUint,
    f: &ControlFunction,
    meter: &mut Meter,
    cap: Option<&BigUint>,
) -> Result<Option<BigUint>> {
    if r == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    let mut sum = BigUint::zero();
    let mut start = t.clone();
    for _ in 0..r {
        let Some(len) = lex_eval(k, &start, f, meter, cap)? else {
            return Ok(None);
        };
        sum += &len;
        start += len;
        if cap.is_some_and(|c| sum > *c) {
            return Ok(None);
        }
        meter.check(&sum)?;
    }
    Ok(Some(sum))
}

/// `sum_{j=1..r} l_k(o_k^{j-1}(t))`, a lower bound on the longest
/// `t`-controlled `r`-bad lexicographic sequence.
pub fn lex_rbad_lower(r: u64, k: Dim, t: &BigUint, f: &ControlFunction, budget: EvalBudget) -> Result<BigUint> {
    let mut meter = Meter::new(budget);
    Ok(rbad_sum(r, k, t, f, &mut meter, None)?.expect("uncapped evaluation"))
}

/// Checks `l^{F_gamma}_{r,k}(t) >= F^r_{gamma+k-1}(t)` on one instance.
///
/// The right-hand side is evaluated exactly; the left-hand side stops as soon
/// as it passes the right-hand side. A budget error means the instance is
/// inconclusive, not that the inequality fails.
pub fn check_prop_lower(gamma: u32, k: Dim, r: u64, t: &BigUint, budget: EvalBudget) -> Result<bool> {
    if k == 0 || r == 0 {
        return Err(Error::Precondition("k and r must be >= 1".into()));
    }
    let mut meter = Meter::new(budget);
    let rhs = fgh_iter(gamma + k - 1, &BigUint::from(r), t.clone(), &mut meter)?;
    let f = ControlFunction::Fgh(gamma);
    let mut meter = Meter::new(budget);
    Ok(match rbad_sum(r, k, t, &f, &mut meter, Some(&rhs))? {
        None => true,
        Some(lhs) => lhs >= rhs,
    })
}

/// `M_{r x {k}}(x) + x`, handy for comparing with `G_k^r(x)`.
pub fn ubound_block_plus(k: Dim, r: u64, x: &BigUint, f: &ControlFunction, budget: EvalBudget) -> Result<BigUint> {
    let tau = TypeMultiset::repeated(r, k);
    Ok(ubound(&tau, x, f, Method::Fast, budget)?.value + x)
}
