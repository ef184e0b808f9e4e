//! Named invariant suites spanning all modules, run on small exhaustive
//! grids. Suites are independent and may run in parallel; the report keeps
//! the suite order.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::apps::ica::{compare_with_bfs, ica_saturate, rounds_bound, witness_norms_ok};
use crate::apps::km::{km_tree, uncovered_reachable, vas_queries};
use crate::apps::program::{LoopProgram, RankingSpec};
use crate::apps::samples::{ica_machines, vas_examples};
use crate::apps::termination::{input_grid, term_check};
use crate::bounds::{check_prop_lower, lex_len, ubound, ubound_block_plus, Method};
use crate::control::{ackermann_eval, fgh_eval, g_eval, ControlFunction, EvalBudget, Meter};
use crate::error::{Error, Resource, Result};
use crate::exec::Exec;
use crate::oracle::{longest_bad, longest_run, verify_witness};
use crate::sequences::{
    collapse_sum, decompose_regions, gen_lex_max, goodness_profile, goodness_profile_with, is_bad, is_controlled,
    layer_by_goodness, SeqOrder, TaggedSequence,
};
use crate::typemultiset::{PartialOrderKind, TypeMultiset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub name: &'static str,
    pub passed: bool,
    pub checked: u64,
    /// First failures, empty when the suite passed.
    pub failures: Vec<String>,
}

#[derive(Default)]
struct Tally {
    checked: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 8 {
            self.failures.push(what());
        }
    }
}

type Suite = fn(&mut Tally) -> Result<()>;

const SUITES: &[(&str, Suite)] = &[
    ("ordering-laws", ordering_laws),
    ("residual-laws", residual_laws),
    ("hierarchy", hierarchy),
    ("method-agreement", method_agreement),
    ("dominance-monotonicity", dominance_monotonicity),
    ("closed-form", closed_form),
    ("sum-identity", sum_identity),
    ("lex-monotone", lex_monotone),
    ("lex-generator", lex_generator),
    ("lex-lower-bound", lex_lower_bound),
    ("oracle-formula", oracle_formula),
    ("oracle-r-bad-equality", oracle_r_bad_equality),
    ("oracle-lex-agreement", oracle_lex_agreement),
    ("sandwich", sandwich),
    ("decompose-regions", decompose_suite),
    ("layer-collapse", layer_collapse),
    ("km-branches", km_branches),
    ("ica-saturation", ica_saturation),
    ("choice-termination", choice_termination),
    ("lex-program", lex_program),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs the suites whose name contains `filter` (all when `None`).
pub fn run_suites(filter: Option<&str>, exec: Exec) -> Vec<Outcome> {
    let chosen: Vec<&(&str, Suite)> = SUITES.iter().filter(|(n, _)| filter.is_none_or(|f| n.contains(f))).collect();
    exec.map(&chosen, |(name, suite)| {
        let mut tally = Tally::default();
        if let Err(e) = suite(&mut tally) {
            tally.failures.push(format!("{}: {e}", e.name()));
        }
        Outcome { name, passed: tally.failures.is_empty(), checked: tally.checked, failures: tally.failures }
    })
}

fn b() -> EvalBudget {
    EvalBudget::default()
}

fn n(x: u64) -> BigUint {
    BigUint::from(x)
}

fn controls() -> [ControlFunction; 2] {
    [ControlFunction::Successor, ControlFunction::MulConst(2)]
}

/// Every multiset with elements at most `max_dim` and at most `max_len`
/// elements.
pub fn small_types(max_dim: u32, max_len: usize) -> Vec<TypeMultiset> {
    fn go(start: u32, max_dim: u32, left: usize, cur: &mut Vec<u32>, out: &mut Vec<TypeMultiset>) {
        out.push(TypeMultiset::from_dims(cur));
        if left == 0 {
            return;
        }
        for d in start..=max_dim {
            cur.push(d);
            go(d, max_dim, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, max_dim, max_len, &mut Vec::new(), &mut out);
    out
}

/// The textbook multiset ordering: `a < b` iff `a != b` and every element
/// with more copies in `a` is dominated by a larger one with more copies in `b`.
pub fn multiset_lt_reference(a: &TypeMultiset, b: &TypeMultiset) -> bool {
    if a == b {
        return false;
    }
    a.iter().all(|(x, m)| {
        *m <= b.multiplicity(x) || b.iter().any(|(y, my)| y > x && *my > a.multiplicity(y))
    })
}

fn ordering_laws(t: &mut Tally) -> Result<()> {
    use std::cmp::Ordering::*;
    let types = small_types(2, 3);
    for a in &types {
        for b in &types {
            let c = a.cmp(b);
            t.check(c == Less && multiset_lt_reference(a, b) || c != Less && !multiset_lt_reference(a, b), || {
                format!("{a} vs {b}: reference disagrees")
            });
            t.check((c == Equal) == (a == b), || format!("{a} vs {b}: equality"));
            let inc = a.leq(PartialOrderKind::Inclusion, b);
            let dom = a.leq(PartialOrderKind::Dominance, b);
            t.check(!inc || dom, || format!("{a} included in {b} but not dominated"));
            t.check(!dom || c != Greater, || format!("{a} dominated by {b} but greater"));
            for x in &types {
                let ab = a.add(x).cmp(&b.add(x));
                t.check(ab == c, || format!("adding {x} changes {a} vs {b}"));
            }
        }
        if let Some(top) = a.max_dim() {
            let k = top + 1;
            t.check(a < &TypeMultiset::singleton(k), || format!("{a} not below {{{k}}}"));
        }
    }
    for a in &types {
        for b in types.iter().filter(|b| a <= *b) {
            for c in types.iter().filter(|c| b <= *c) {
                t.check(a <= c, || format!("transitivity {a} {b} {c}"));
            }
        }
    }
    Ok(())
}

fn residual_laws(t: &mut Tally) -> Result<()> {
    let types = small_types(3, 3);
    for f in controls() {
        for tau in types.iter().filter(|x| !x.is_empty()) {
            for k in tau.dims() {
                for s in 0..=2u64 {
                    let nk = crate::bounds::n_of_k(k, &n(s), &f, b())?;
                    let r = tau.residual(k, &nk)?;
                    t.check(r < *tau, || format!("residual of {tau} at {k} does not descend"));
                }
            }
            for k in tau.dims() {
                for l in tau.dims().filter(|&l| l >= k) {
                    if k == l && tau.multiplicity(k) < n(2) {
                        continue;
                    }
                    for (s, s2) in [(0u64, 0u64), (0, 1), (1, 2), (2, 2)] {
                        let nk = |d, x| crate::bounds::n_of_k(d, &n(x), &f, b());
                        let kl = tau.residual(k, &nk(k, s)?)?.residual(l, &nk(l, s2)?)?;
                        let lk = tau.residual(l, &nk(l, s2)?)?.residual(k, &nk(k, s)?)?;
                        t.check(kl == lk, || format!("commutation fails on {tau} at {k},{l}"));
                        let left = tau.residual(l, &nk(l, s)?)?.residual(k, &nk(k, s2)?)?;
                        let right = tau.residual(k, &nk(k, s)?)?.residual(l, &nk(l, s2)?)?;
                        t.check(left.leq(PartialOrderKind::Dominance, &right), || {
                            format!("dominance swap fails on {tau} with k={k} l={l} t={s} t'={s2} f={f}")
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn hierarchy(t: &mut Tally) -> Result<()> {
    for x in 0..=50u64 {
        t.check(fgh_eval(1, &n(1), &n(x), b())? == n(2 * x + 1), || format!("F_1({x})"));
    }
    let cmp_mono = |a: Result<BigUint>, c: Result<BigUint>| match (a, c) {
        (Ok(a), Ok(c)) => Some(a < c),
        (Ok(_), Err(e)) if bits_error(&e) => Some(true),
        (Err(e), Err(e2)) if bits_error(&e) && bits_error(&e2) => Some(true),
        _ => None,
    };
    for x in 0..20u64 {
        let y = x + 1;
        for level in 0..=2u32 {
            let ok = cmp_mono(fgh_eval(level, &n(1), &n(x), b()), fgh_eval(level, &n(1), &n(y), b()));
            t.check(ok == Some(true), || format!("F_{level} not increasing at {x}"));
        }
        for k in 1..=3u32 {
            let ok = cmp_mono(ackermann_eval(k, &n(x.max(1)), b()), ackermann_eval(k, &n(y.max(2)), b()));
            t.check(ok == Some(true), || format!("A_{k} not increasing at {x}"));
        }
    }
    let wide = b().with_bits(70_000);
    for k in 1..=3u32 {
        for x in 0..=5u64 {
            let a = ackermann_eval(k, &n(x), wide)?;
            let ok = match fgh_eval(k, &n(1), &n(x), wide) {
                Ok(f) => a <= f,
                Err(e) => bits_error(&e) && a.bits() < 70_000,
                };
            t.check(ok, || format!("A_{k}({x}) > F_{k}({x})"));
        }
    }
    let succ = ControlFunction::Successor;
    for m in 0..=20u64 {
        for x in 0..=10u64 {
            let want = (BigUint::from(1u32) << m) * (x + 1) - 1u32;
            t.check(g_eval(1, &n(m), &n(x), &succ, b())? == want, || format!("G_1^{m}({x})"));
        }
    }
    Ok(())
}

fn bits_error(e: &Error) -> bool {
    matches!(e, Error::BudgetExceeded { resource: Resource::Bits, .. })
}

/// Instances of the method-agreement grid: elements at most 2, at most two
/// elements, `t <= 2`, successor and doubling.
pub fn method_grid() -> Vec<(TypeMultiset, u64, ControlFunction)> {
    let mut out = Vec::new();
    for f in controls() {
        for tau in small_types(2, 2) {
            for s in 0..=2u64 {
                out.push((tau.clone(), s, f.clone()));
            }
        }
    }
    out
}

/// Naive evaluation is compared wherever it fits this many steps.
pub const NAIVE_STEPS: u64 = 1_000_000;

fn method_agreement(t: &mut Tally) -> Result<()> {
    for (tau, s, f) in method_grid() {
        let fast = ubound(&tau, &n(s), &f, Method::Fast, b())?.value;
        let min = ubound(&tau, &n(s), &f, Method::MinStrategy, b())?.value;
        t.check(fast == min, || format!("{tau} t={s} f={f}: fast {fast} != min {min}"));
        match ubound(&tau, &n(s), &f, Method::Naive, b().with_steps(NAIVE_STEPS)) {
            Ok(naive) => t.check(naive.value == fast, || format!("{tau} t={s} f={f}: naive differs")),
            Err(e) if e.is_budget() => t.check(fast > n(300), || format!("{tau} t={s} f={f}: naive ran out on {fast}")),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

fn dominance_monotonicity(t: &mut Tally) -> Result<()> {
    let types = small_types(2, 2);
    for f in controls() {
        for s in 0..=2u64 {
            let vals: Vec<Result<BigUint>> =
                types.iter().map(|x| ubound(x, &n(s), &f, Method::Fast, b()).map(|r| r.value)).collect();
            for (i, a) in types.iter().enumerate() {
                for (j, c) in types.iter().enumerate() {
                    if !a.leq(PartialOrderKind::Dominance, c) {
                        continue;
                    }
                    let ok = match (&vals[i], &vals[j]) {
                        (Ok(x), Ok(y)) => x <= y,
                        (_, Err(e)) => bits_error(e),
                        (Err(_), Ok(_)) => false,
                    };
                    t.check(ok, || format!("M_{a} > M_{c} at t={s} f={f}"));
                }
            }
        }
    }
    Ok(())
}

fn closed_form(t: &mut Tally) -> Result<()> {
    for f in controls() {
        for k in 1..=2u32 {
            for r in 1..=3u64 {
                for x in 0..=3u64 {
                    if f.eval_u64(x, &mut Meter::new(b()))?.is_zero() {
                        continue;
                    }
                    let tau = TypeMultiset::repeated(r, k);
                    let fast = ubound(&tau, &n(x), &f, Method::Fast, b()).map(|v| v.value);
                    let g = g_eval(k, &n(r), &n(x), &f, b());
                    let ok = match (fast, g) {
                        (Ok(v), Ok(g)) => g >= n(x) && v == g - x,
                        (Err(a), Err(c)) => bits_error(&a) && bits_error(&c),
                        _ => false,
                    };
                    t.check(ok, || format!("closed form for {r} x {{{k}}} at {x}, f={f}"));
                    if let Ok(v) = ubound_block_plus(k, r, &n(x), &f, b()) {
                        t.check(v >= n(x), || "block bound below start".into());
                    }
                }
            }
        }
    }
    Ok(())
}

fn sum_identity(t: &mut Tally) -> Result<()> {
    let types = small_types(2, 2);
    for f in controls() {
        for tau in types.iter().filter(|x| !x.is_empty()) {
            let low = TypeMultiset::singleton(tau.min_dim().expect("nonempty"));
            for tp in types.iter().filter(|x| **x <= low) {
                for s in 0..=2u64 {
                    let lhs = ubound(&tau.add(tp), &n(s), &f, Method::Fast, b());
                    let m1 = ubound(tp, &n(s), &f, Method::Fast, b())?.value;
                    let rhs = ubound(tau, &(n(s) + &m1), &f, Method::Fast, b()).map(|r| r.value + &m1);
                    let ok = match (lhs, rhs) {
                        (Ok(l), Ok(r)) => l.value == r,
                        (Err(a), Err(c)) => bits_error(&a) && bits_error(&c),
                        _ => false,
                    };
                    t.check(ok, || format!("sum identity for {tau} + {tp} at t={s}, f={f}"));
                }
            }
        }
    }
    Ok(())
}

fn lex_monotone(t: &mut Tally) -> Result<()> {
    for f in controls() {
        for (k, tmax) in [(1u32, 8u64), (2, 4), (3, 1)] {
            let mut prev: Option<BigUint> = None;
            for s in 0..=tmax {
                let v = lex_len(k, &n(s), &f, b())?.length;
                if let Some(p) = &prev {
                    t.check(*p <= v, || format!("lex length drops at k={k} t={s} f={f}"));
                }
                prev = Some(v);
            }
        }
    }
    Ok(())
}

fn lex_generator(t: &mut Tally) -> Result<()> {
    for f in controls() {
        for k in 1..=2u32 {
            for s in 0..=3u64 {
                let seq = gen_lex_max(k, s, &f, b())?;
                let want = lex_len(k, &n(s), &f, b())?.length;
                t.check(BigUint::from(seq.len()) == want, || format!("generator length k={k} t={s} f={f}"));
                t.check(is_controlled(&seq, s, &f, b())?, || format!("generator control k={k} t={s} f={f}"));
                let p = goodness_profile_with(&seq, SeqOrder::Lex, Exec::Sequential);
                t.check(p.is_bad(), || format!("generator lex-badness k={k} t={s} f={f}"));
            }
        }
    }
    Ok(())
}

fn lex_lower_bound(t: &mut Tally) -> Result<()> {
    for gamma in 0..=1u32 {
        for k in 1..=2u32 {
            for r in 1..=2u64 {
                for s in 0..=3u64 {
                    let ok = check_prop_lower(gamma, k, r, &n(s), b())?;
                    t.check(ok, || format!("lower bound fails for gamma={gamma} k={k} r={r} t={s}"));
                }
            }
        }
    }
    Ok(())
}

fn exact(res: &crate::oracle::SearchResult) -> Option<usize> {
    res.exhausted.then_some(res.length)
}

fn oracle_formula(t: &mut Tally) -> Result<()> {
    for f in controls() {
        for s in 0..=4u64 {
            let res = longest_bad(&TypeMultiset::singleton(1), s, &f, SeqOrder::Product, 1, b(), Exec::Sequential)?;
            let want = f.eval_u64(s, &mut Meter::new(b()))?.to_usize();
            t.check(exact(&res) == want, || format!("L_{{1}}({s}) for f={f}"));
        }
    }
    for r in 1..=4u32 {
        let res = longest_bad(&TypeMultiset::repeated(r, 0), 3, &ControlFunction::Successor, SeqOrder::Product, 1, b(), Exec::Sequential)?;
        t.check(exact(&res) == Some(r as usize), || format!("L_{{{r} x {{0}}}}"));
    }
    Ok(())
}

fn oracle_r_bad_equality(t: &mut Tally) -> Result<()> {
    let succ = ControlFunction::Successor;
    for r in 1..=2usize {
        for s in 0..=2u64 {
            let one = TypeMultiset::singleton(1);
            let a = longest_bad(&one, s, &succ, SeqOrder::Product, r, b(), Exec::Sequential)?;
            let c = longest_bad(&one.scale(&BigUint::from(r)), s, &succ, SeqOrder::Product, 1, b(), Exec::Sequential)?;
            t.check(exact(&a).is_some() && exact(&a) == exact(&c), || format!("r={r} t={s}"));
        }
    }
    Ok(())
}

fn oracle_lex_agreement(t: &mut Tally) -> Result<()> {
    let succ = ControlFunction::Successor;
    for (k, tmax) in [(1u32, 3u64), (2, 1)] {
        for s in 0..=tmax {
            let res = longest_bad(&TypeMultiset::singleton(k), s, &succ, SeqOrder::Lex, 1, b(), Exec::Sequential)?;
            let want = lex_len(k, &n(s), &succ, b())?.length.to_usize();
            t.check(exact(&res) == want, || format!("lex oracle k={k} t={s}"));
        }
    }
    Ok(())
}

fn sandwich(t: &mut Tally) -> Result<()> {
    let mut cases: Vec<(TypeMultiset, u64, ControlFunction, usize)> = Vec::new();
    for f in controls() {
        for s in 0..=3u64 {
            cases.push((TypeMultiset::singleton(1), s, f.clone(), 1));
        }
    }
    let succ = ControlFunction::Successor;
    for s in 0..=1u64 {
        cases.push((TypeMultiset::singleton(2), s, succ.clone(), 1));
    }
    for (ty, r) in [("{1,0}", 1usize), ("{1,0}", 2), ("{0}", 2), ("{1,1}", 1)] {
        for s in 0..=2u64 {
            cases.push((ty.parse()?, s, succ.clone(), r));
        }
    }
    for (tau, s, f, r) in cases {
        let res = longest_bad(&tau, s, &f, SeqOrder::Product, r, b(), Exec::Sequential)?;
        t.check(res.exhausted, || format!("oracle did not finish on {tau} t={s}"));
        t.check(verify_witness(&res, s, &f, SeqOrder::Product, r, b())?, || format!("bad witness on {tau} t={s}"));
        let upper = crate::oracle::predicted_bound(&tau, s, &f, r, b())?;
        t.check(BigUint::from(res.length) <= upper, || format!("oracle above bound on {tau} t={s} r={r}"));
        if r == 1 {
            if let Some(k) = tau.to_sorted_desc(2).filter(|v| v.len() == 1).map(|v| v[0]) {
                let lower = lex_len(k, &n(s), &f, b())?.length;
                t.check(lower <= BigUint::from(res.length), || format!("lex above oracle on {tau} t={s}"));
            }
        }
    }
    Ok(())
}

/// The example of the region decomposition, with its least controlling `t`.
pub fn region_example() -> (TaggedSequence, u64) {
    let vs = [[2, 2], [1, 5], [4, 0], [1, 1], [0, 100], [0, 99], [3, 0]];
    let seq = TaggedSequence::over_dim(2, vs.iter().map(|v| v.to_vec()).collect()).expect("valid example");
    (seq, 96)
}

fn decompose_suite(t: &mut Tally) -> Result<()> {
    let succ = ControlFunction::Successor;
    let mut cases = vec![(region_example().0, region_example().1, succ.clone())];
    for (k, s, f) in [(1u32, 3u64, succ.clone()), (2, 1, succ.clone()), (2, 1, ControlFunction::MulConst(2)), (3, 0, succ.clone())] {
        let res = longest_bad(&TypeMultiset::singleton(k), s, &f, SeqOrder::Product, 1, b().with_steps(200_000), Exec::Sequential)?;
        cases.push((res.witness, s, f));
    }
    for (seq, s, f) in cases {
        if seq.is_empty() {
            continue;
        }
        let d = decompose_regions(&seq, s, &f, b())?;
        t.check(d.len() + 1 == seq.len(), || "decomposition drops more than the head".into());
        t.check(is_bad(&d), || format!("decomposition of {} items is not bad", seq.len()));
        t.check(is_controlled(&d, s + 1, &f, b())?, || "decomposition is not (t+1)-controlled".into());
        let k = d.tau().max_dim().unwrap_or(0);
        let nk = crate::bounds::n_of_k(k + 1, &n(s), &f, b())?;
        t.check(d.tau().is_empty() && nk.is_zero() || *d.tau() == TypeMultiset::repeated(nk, k), || {
            "decomposition has the wrong type".into()
        });
    }
    Ok(())
}

/// Every sequence over `N^dim` with entries below `below` and at most
/// `max_len` items.
fn all_sequences(dim: usize, below: u64, max_len: usize) -> Vec<TaggedSequence> {
    let mut vectors: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..dim {
        vectors = vectors.into_iter().flat_map(|v| (0..below).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    let mut out: Vec<Vec<Vec<u64>>> = vec![Vec::new()];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        frontier = frontier
            .into_iter()
            .flat_map(|s| vectors.iter().map(move |v| [s.clone(), vec![v.clone()]].concat()))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out.into_iter()
        .map(|vs| TaggedSequence::over_dim(dim as u32, vs).expect("well-formed"))
        .collect()
}

fn layer_collapse(t: &mut Tally) -> Result<()> {
    for (dim, below, len) in [(1usize, 3u64, 5usize), (2, 2, 4)] {
        for seq in all_sequences(dim, below, len) {
            let p = goodness_profile(&seq);
            let r = p.max_goodness + 1;
            let layered = layer_by_goodness(&seq, r)?;
            t.check(is_bad(&layered), || format!("layers not bad:\n{seq}"));
            t.check(collapse_sum(&layered, r)? == seq, || format!("round trip fails:\n{seq}"));
            if r > 1 {
                t.check(layer_by_goodness(&seq, r - 1).is_err(), || "layering accepted a too small r".into());
            }
        }
    }
    Ok(())
}

fn km_branches(t: &mut Tally) -> Result<()> {
    for (name, vas) in vas_examples() {
        let tree = km_tree(&vas, b())?;
        let rep = vas_queries(&vas, &tree, Exec::Sequential);
        t.check(rep.branches_bad, || format!("{name}: a branch is not (k+1)-bad"));
        t.check(rep.sizes_ok, || format!("{name}: a branch breaks the size inequality"));
        t.check(uncovered_reachable(&vas, &tree, 2_000).is_none(), || format!("{name}: covering misses a state"));
    }
    Ok(())
}

fn ica_saturation(t: &mut Tally) -> Result<()> {
    for (name, m) in ica_machines() {
        let sat = ica_saturate(&m, b())?;
        t.check(is_bad(&sat.witness), || format!("{name}: witness not bad"));
        t.check(witness_norms_ok(&sat.witness), || format!("{name}: witness norms too large"));
        t.check(compare_with_bfs(&m, &sat, 6, b())?.is_none(), || format!("{name}: disagrees with explicit search"));
        let ok = match rounds_bound(&m, b()) {
            Ok(bound) => BigUint::from(sat.rounds + 1) <= bound,
            Err(e) => bits_error(&e),
        };
        t.check(ok, || format!("{name}: rounds above bound"));
    }
    Ok(())
}

fn choice_termination(t: &mut Tally) -> Result<()> {
    let p = LoopProgram::choice();
    let spec = RankingSpec::decreasing(&[(0, 0), (1, 1)]);
    let rep = term_check(&p, &spec, &input_grid(2, 4), b(), Exec::Sequential)?;
    t.check(rep.tuples_bad(), || "rank tuples not bad".into());
    t.check(rep.bound_ok(), || "run above predicted bound".into());
    for inputs in input_grid(2, 4) {
        let run = longest_run(&p, &inputs, b())?;
        let m = inputs.iter().max().and_then(|x| x.to_u64()).unwrap_or(0);
        let bound = ubound(&TypeMultiset::singleton(2), &n(m), &ControlFunction::Successor, Method::Fast, b())?.value;
        t.check(BigUint::from(run.length) <= bound, || format!("Time{inputs:?} above bound"));
        let explored = rep.per_init.iter().find(|r| r.inputs == inputs).map(|r| r.max_run);
        t.check(explored == Some(run.length), || format!("explorers disagree on {inputs:?}"));
    }
    Ok(())
}

fn lex_program(t: &mut Tally) -> Result<()> {
    let p = LoopProgram::lex(2);
    let inputs = [num_bigint::BigInt::from(2), num_bigint::BigInt::from(2)];
    let run = longest_run(&p, &inputs, b())?;
    let a = ackermann_eval(3, &n(2), b())?;
    t.check(BigUint::from(run.length) > a, || format!("run {} not above A_3(2) = {a}", run.length));
    let spec = RankingSpec::decreasing(&[(0, 0), (1, 0)]);
    let rep = term_check(&p, &spec, &[inputs.to_vec()], b(), Exec::Sequential)?;
    t.check(rep.tuples_bad(), || "rank tuples not bad".into());
    t.check(rep.per_init[0].max_run == run.length, || "explorers disagree".into());
    Ok(())
}
