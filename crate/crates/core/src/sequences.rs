//! Concrete sequences over `N^tau`: control, goodness, the region
//! decomposition of a bad sequence's suffix, layering by goodness and the
//! extremal sequences for the lexicographic ordering.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::control::{ControlFunction, EvalBudget, Meter};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::typemultiset::{Dim, TypeMultiset};

/// One copy of `N^dim` inside `N^tau`; copies are numbered from 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Summand {
    pub dim: Dim,
    pub copy: u64,
}

impl Summand {
    pub fn new(dim: Dim, copy: u64) -> Self {
        Self { dim, copy }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Item {
    pub summand: Summand,
    pub vector: Vec<u64>,
}

impl Item {
    pub fn new(summand: Summand, vector: Vec<u64>) -> Self {
        Self { summand, vector }
    }

    /// Infinity norm, 0 for the empty tuple.
    pub fn norm(&self) -> u64 {
        self.vector.iter().copied().max().unwrap_or(0)
    }
}

/// Orderings used to compare items of the same summand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqOrder {
    Product,
    Lex,
}

impl SeqOrder {
    /// `a <= b` in the sum ordering: items of different summands are incomparable.
    pub fn leq(self, a: &Item, b: &Item) -> bool {
        if a.summand != b.summand {
            return false;
        }
        match self {
            SeqOrder::Product => a.vector.iter().zip(&b.vector).all(|(x, y)| x <= y),
            SeqOrder::Lex => a.vector.cmp(&b.vector) != Ordering::Greater,
        }
    }
}

impl FromStr for SeqOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "product" => Ok(SeqOrder::Product),
            "lex" => Ok(SeqOrder::Lex),
            _ => Err(Error::usage(s, "expected product or lex")),
        }
    }
}

impl fmt::Display for SeqOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeqOrder::Product => "product",
            SeqOrder::Lex => "lex",
        })
    }
}

/// A finite sequence over `N^tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedSequence {
    tau: TypeMultiset,
    items: Vec<Item>,
}

impl TaggedSequence {
    pub fn new(tau: TypeMultiset, items: Vec<Item>) -> Result<Self> {
        for (i, item) in items.iter().enumerate() {
            let Summand { dim, copy } = item.summand;
            let mult = tau.multiplicity(dim);
            if BigUint::from(copy) >= mult {
                return Err(Error::MalformedSequence(format!(
                    "item {i}: summand {dim}#{copy} is not in {tau}"
                )));
            }
            if item.vector.len() != dim as usize {
                return Err(Error::MalformedSequence(format!(
                    "item {i}: vector of length {} in dimension {dim}",
                    item.vector.len()
                )));
            }
        }
        Ok(Self { tau, items })
    }

    pub fn empty(tau: TypeMultiset) -> Self {
        Self { tau, items: Vec::new() }
    }

    /// A sequence over the single summand `N^k`.
    pub fn over_dim(k: Dim, vectors: Vec<Vec<u64>>) -> Result<Self> {
        let items = vectors.into_iter().map(|v| Item::new(Summand::new(k, 0), v)).collect();
        Self::new(TypeMultiset::singleton(k), items)
    }

    /// Builds a sequence whose type is the smallest one containing every
    /// summand used.
    pub fn infer(items: Vec<Item>) -> Result<Self> {
        let mut tau = TypeMultiset::empty();
        let mut needed: std::collections::BTreeMap<Dim, u64> = Default::default();
        for item in &items {
            let e = needed.entry(item.summand.dim).or_default();
            *e = (*e).max(item.summand.copy + 1);
        }
        for (k, m) in needed {
            tau.insert_many(k, BigUint::from(m));
        }
        Self::new(tau, items)
    }

    pub fn tau(&self) -> &TypeMultiset {
        &self.tau
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn vectors(&self) -> Vec<Vec<u64>> {
        self.items.iter().map(|i| i.vector.clone()).collect()
    }

    /// Re-types the sequence over a larger type.
    pub fn with_tau(self, tau: TypeMultiset) -> Result<Self> {
        Self::new(tau, self.items)
    }
}

impl fmt::Display for TaggedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inferred = Self::infer(self.items.clone()).ok();
        if inferred.as_ref().map(Self::tau) != Some(&self.tau) {
            writeln!(f, "type {}", self.tau)?;
        }
        for item in &self.items {
            let Summand { dim, copy } = item.summand;
            if copy == 0 {
                write!(f, "{dim}:")?;
            } else {
                write!(f, "{dim}#{copy}:")?;
            }
            for v in &item.vector {
                write!(f, " {v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Parses the line format `k: v1 ... vk`, with `k#c:` selecting copy `c`.
/// Blank lines, lines starting with `#` and a `type` header are ignored.
pub fn parse_items(text: &str) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("type ") {
            continue;
        }
        let lineno = idx + 1;
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| Error::parse(lineno, "expected `k: v1 ... vk`"))?;
        let (dim, copy) = match head.trim().split_once('#') {
            Some((d, c)) => (d.trim(), c.trim()),
            None => (head.trim(), "0"),
        };
        let dim = dim.parse::<Dim>().map_err(|_| Error::parse(lineno, "bad dimension"))?;
        let copy = copy.parse::<u64>().map_err(|_| Error::parse(lineno, "bad copy index"))?;
        let vector = body
            .split_whitespace()
            .map(|v| v.parse::<u64>().map_err(|_| Error::parse(lineno, format!("bad value {v:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if vector.len() != dim as usize {
            return Err(Error::parse(lineno, format!("expected {dim} values, found {}", vector.len())));
        }
        items.push(Item::new(Summand::new(dim, copy), vector));
    }
    Ok(items)
}

impl FromStr for TaggedSequence {
    type Err = Error;

    /// An optional `type {..}` line fixes the type; otherwise it is the
    /// least type covering the items.
    fn from_str(s: &str) -> Result<Self> {
        let items = parse_items(s)?;
        let header = s.lines().enumerate().find_map(|(i, l)| l.trim().strip_prefix("type ").map(|t| (i + 1, t)));
        match header {
            Some((lineno, t)) => {
                let tau = t.parse::<TypeMultiset>().map_err(|e| Error::parse(lineno, e.to_string()))?;
                Self::new(tau, items)
            }
            None => Self::infer(items),
        }
    }
}

/// `||x_i|| < f(i + t)` for every index.
pub fn is_controlled(seq: &TaggedSequence, t: u64, f: &ControlFunction, budget: EvalBudget) -> Result<bool> {
    Ok(first_uncontrolled(seq, t, f, budget)?.is_none())
}

/// The first index violating the control, with its norm and bound.
pub fn first_uncontrolled(
    seq: &TaggedSequence,
    t: u64,
    f: &ControlFunction,
    budget: EvalBudget,
) -> Result<Option<(usize, u64, BigUint)>> {
    let mut meter = Meter::new(budget);
    for (i, item) in seq.items.iter().enumerate() {
        let bound = f.eval(&(BigUint::from(t) + i), &mut meter)?;
        let norm = item.norm();
        if BigUint::from(norm) >= bound {
            return Ok(Some((i, norm, bound)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessProfile {
    pub goodness: Vec<usize>,
    pub max_goodness: usize,
}

impl GoodnessProfile {
    /// No increasing subsequence of length `r + 1`.
    pub fn is_r_bad(&self, r: usize) -> bool {
        self.goodness.is_empty() || self.max_goodness < r
    }

    pub fn is_bad(&self) -> bool {
        self.is_r_bad(1)
    }
}

/// Goodness of every index for an arbitrary quasi-order on `0..n`, computed
/// right to left. Each index scans its suffix; the scans at one index are
/// independent and may run in parallel.
pub fn goodness_by<F>(n: usize, leq: F, exec: Exec) -> GoodnessProfile
where
    F: Fn(usize, usize) -> bool + Sync + Send,
{
    const PAR_THRESHOLD: usize = 2048;
    let mut goodness = vec![0usize; n];
    for i in (0..n).rev() {
        let suffix = n - i - 1;
        let best = if exec.is_parallel() && suffix >= PAR_THRESHOLD {
            let g = &goodness;
            exec.map_range(suffix, |off| {
                let j = i + 1 + off;
                if leq(i, j) { 1 + g[j] } else { 0 }
            })
            .into_iter()
            .max()
            .unwrap_or(0)
        } else {
            (i + 1..n).filter(|&j| leq(i, j)).map(|j| 1 + goodness[j]).max().unwrap_or(0)
        };
        goodness[i] = best;
    }
    let max_goodness = goodness.iter().copied().max().unwrap_or(0);
    GoodnessProfile { goodness, max_goodness }
}

pub fn goodness_profile_with(seq: &TaggedSequence, order: SeqOrder, exec: Exec) -> GoodnessProfile {
    let items = &seq.items;
    goodness_by(items.len(), |i, j| order.leq(&items[i], &items[j]), exec)
}

/// Goodness under the product ordering.
pub fn goodness_profile(seq: &TaggedSequence) -> GoodnessProfile {
    goodness_profile_with(seq, SeqOrder::Product, Exec::default())
}

/// The first increasing pair `(i, j)`, if any.
pub fn first_increasing_pair(seq: &TaggedSequence, order: SeqOrder) -> Option<(usize, usize)> {
    let items = &seq.items;
    (0..items.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .find(|&(i, j)| order.leq(&items[i], &items[j]))
}

pub fn is_bad(seq: &TaggedSequence) -> bool {
    first_increasing_pair(seq, SeqOrder::Product).is_none()
}

/// Splits the suffix of a bad, `t`-controlled sequence over `N^k` into the
/// regions `R_{j,s} = {x | x[j] = s}` with `s < x_0[j]`, dropping coordinate
/// `j`. Region `(j, s)` (1-based `j`) becomes copy `(j-1)(f(t)-1) + s` of
/// `N^{k-1}`; each item goes to the smallest `j`.
pub fn decompose_regions(
    seq: &TaggedSequence,
    t: u64,
    f: &ControlFunction,
    budget: EvalBudget,
) -> Result<TaggedSequence> {
    let k = match seq.tau.to_sorted_desc(1).as_deref() {
        Some([k]) if *k >= 1 => *k,
        _ => {
            return Err(Error::Precondition(format!(
                "region decomposition needs a type {{k}} with k >= 1, got {}",
                seq.tau
            )))
        }
    };
    let Some(first) = seq.items.first() else {
        return Err(Error::Precondition("region decomposition needs a nonempty sequence".into()));
    };
    if let Some((i, j)) = first_increasing_pair(seq, SeqOrder::Product) {
        return Err(Error::NotBad { i, j });
    }
    if let Some((index, norm, bound)) = first_uncontrolled(seq, t, f, budget)? {
        return Err(Error::NotControlled { index, norm: norm.to_string(), bound: bound.to_string() });
    }
    let mut meter = Meter::new(budget);
    let ft = f.eval_u64(t, &mut meter)?;
    let per_coord = (ft - 1u32)
        .to_u64()
        .ok_or_else(|| Error::Precondition("f(t) too large to index regions".into()))?;
    let regions = per_coord
        .checked_mul(u64::from(k))
        .ok_or_else(|| Error::Precondition("too many regions".into()))?;
    let x0 = &first.vector;
    let mut items = Vec::with_capacity(seq.len() - 1);
    for (i, item) in seq.items.iter().enumerate().skip(1) {
        let j = (0..k as usize)
            .find(|&j| item.vector[j] < x0[j])
            .ok_or(Error::NotBad { i: 0, j: i })?;
        let s = item.vector[j];
        let mut projected = item.vector.clone();
        projected.remove(j);
        items.push(Item::new(Summand::new(k - 1, j as u64 * per_coord + s), projected));
    }
    TaggedSequence::new(TypeMultiset::repeated(regions, k - 1), items)
}

/// Moves each item to the copy of its summand indexed by its goodness,
/// producing a bad sequence over `r x tau`. Item `(d, c)` at goodness `g`
/// lands in copy `g * tau(d) + c`.
pub fn layer_by_goodness(seq: &TaggedSequence, r: usize) -> Result<TaggedSequence> {
    if r == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    let profile = goodness_profile(seq);
    if let Some(index) = profile.goodness.iter().position(|&g| g >= r) {
        return Err(Error::NotRBad { r, index, goodness: profile.goodness[index] });
    }
    let items = seq
        .items
        .iter()
        .zip(&profile.goodness)
        .map(|(item, &g)| {
            let m = copies(&seq.tau, item.summand.dim)?;
            let copy = (g as u64) * m + item.summand.copy;
            Ok(Item::new(Summand::new(item.summand.dim, copy), item.vector.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    TaggedSequence::new(seq.tau.scale(&BigUint::from(r)), items)
}

/// Maps `N^{r x tau}` back onto `N^tau`, inverting [`layer_by_goodness`].
pub fn collapse_sum(seq: &TaggedSequence, r: usize) -> Result<TaggedSequence> {
    if r == 0 {
        return Err(Error::Precondition("r must be >= 1".into()));
    }
    let r_big = BigUint::from(r);
    let mut base = TypeMultiset::empty();
    for (k, m) in seq.tau.iter() {
        if !(m % &r_big).is_zero() {
            return Err(Error::Precondition(format!("{} is not a multiple of {r}", seq.tau)));
        }
        base.insert_many(k, m / &r_big);
    }
    let items = seq
        .items
        .iter()
        .map(|item| {
            let m = copies(&base, item.summand.dim)?;
            Ok(Item::new(Summand::new(item.summand.dim, item.summand.copy % m), item.vector.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    TaggedSequence::new(base, items)
}

fn copies(tau: &TypeMultiset, dim: Dim) -> Result<u64> {
    tau.multiplicity(dim)
        .to_u64()
        .filter(|&m| m > 0)
        .ok_or_else(|| Error::Precondition(format!("multiplicity of {dim} in {tau} is unusable")))
}

/// The longest `t`-controlled bad sequence for the lexicographic ordering
/// on `N^k`: the first coordinate runs from `f(t)-1` down to 0 and each
/// constant section is itself such a sequence in dimension `k-1`, started at
/// the section's absolute index.
pub fn gen_lex_max(k: Dim, t: u64, f: &ControlFunction, budget: EvalBudget) -> Result<TaggedSequence> {
    if k == 0 {
        return Err(Error::Precondition("lexicographic dimension must be >= 1".into()));
    }
    let mut meter = Meter::new(budget);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k as usize);
    gen_lex(k, t, f, &mut meter, &mut prefix, &mut out)?;
    TaggedSequence::over_dim(k, out)
}

fn gen_lex(
    k: Dim,
    t: u64,
    f: &ControlFunction,
    meter: &mut Meter,
    prefix: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) -> Result<()> {
    let ft = f
        .eval_u64(t, meter)?
        .to_u64()
        .ok_or_else(|| Error::Precondition("f(t) does not fit a machine word".into()))?;
    let base = out.len();
    for v in (0..ft).rev() {
        meter.tick()?;
        prefix.push(v);
        if k == 1 {
            out.push(prefix.clone());
        } else {
            let start = t + (out.len() - base) as u64;
            gen_lex(k - 1, start, f, meter, prefix, out)?;
        }
        prefix.pop();
    }
    Ok(())
}
