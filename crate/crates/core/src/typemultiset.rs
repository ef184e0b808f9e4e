//! Types: finite multisets of dimensions describing `N^tau = sum_i N^{k_i}`.
//!
//! Multiplicities are unbounded because residual transforms add `N_k(t)`
//! copies of `k - 1`, and `N_k(t)` grows with the control function.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dimension of one summand `N^k`.
pub type Dim = u32;

/// Canonical multiset of dimensions: no zero multiplicities are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypeMultiset {
    counts: BTreeMap<Dim, BigUint>,
}

/// The two partial orderings on types.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartialOrderKind {
    Inclusion,
    Dominance,
}

impl TypeMultiset {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(k: Dim) -> Self {
        Self::repeated(1u32, k)
    }

    /// `r x {k}`.
    pub fn repeated(r: impl Into<BigUint>, k: Dim) -> Self {
        let mut t = Self::empty();
        t.insert_many(k, r.into());
        t
    }

    pub fn from_dims(dims: &[Dim]) -> Self {
        let mut t = Self::empty();
        for &k in dims {
            t.insert_many(k, BigUint::one());
        }
        t
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn contains(&self, k: Dim) -> bool {
        self.counts.contains_key(&k)
    }

    pub fn multiplicity(&self, k: Dim) -> BigUint {
        self.counts.get(&k).cloned().unwrap_or_default()
    }

    /// Multiplicity as a machine word, if it fits.
    pub fn multiplicity_usize(&self, k: Dim) -> Option<usize> {
        self.counts.get(&k).map_or(Some(0), |m| m.to_usize())
    }

    /// Total number of elements.
    pub fn len(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn min_dim(&self) -> Option<Dim> {
        self.counts.keys().next().copied()
    }

    pub fn max_dim(&self) -> Option<Dim> {
        self.counts.keys().next_back().copied()
    }

    /// Distinct dimensions with their multiplicities, ascending.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (Dim, &BigUint)> + '_ {
        self.counts.iter().map(|(&k, m)| (k, m))
    }

    pub fn dims(&self) -> impl Iterator<Item = Dim> + '_ {
        self.counts.keys().copied()
    }

    /// All elements sorted descending, or `None` if there are more than `cap`.
    pub fn to_sorted_desc(&self, cap: usize) -> Option<Vec<Dim>> {
        let mut out = Vec::new();
        for (&k, m) in self.counts.iter().rev() {
            let m = m.to_usize()?;
            if out.len() + m > cap {
                return None;
            }
            out.extend(std::iter::repeat_n(k, m));
        }
        Some(out)
    }

    pub fn insert_many(&mut self, k: Dim, n: BigUint) {
        if !n.is_zero() {
            *self.counts.entry(k).or_default() += n;
        }
    }

    pub fn insert(&mut self, k: Dim) {
        self.insert_many(k, BigUint::one());
    }

    pub fn remove_one(&mut self, k: Dim) -> Result<()> {
        self.remove_many(k, &BigUint::one())
    }

    pub fn remove_many(&mut self, k: Dim, n: &BigUint) -> Result<()> {
        if n.is_zero() {
            return Ok(());
        }
        match self.counts.get_mut(&k) {
            Some(m) if *m >= *n => {
                *m -= n;
                if m.is_zero() {
                    self.counts.remove(&k);
                }
                Ok(())
            }
            Some(_) => Err(Error::SubtractUndefined {
                minuend: self.to_string(),
                subtrahend: TypeMultiset::repeated(n.clone(), k).to_string(),
            }),
            None => Err(Error::ElementAbsent { dim: k, tau: self.to_string() }),
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &TypeMultiset) -> TypeMultiset {
        let mut out = self.clone();
        for (k, m) in other.iter() {
            out.insert_many(k, m.clone());
        }
        out
    }

    /// `p x self`.
    pub fn scale(&self, p: &BigUint) -> TypeMultiset {
        if p.is_zero() {
            return TypeMultiset::empty();
        }
        TypeMultiset { counts: self.counts.iter().map(|(&k, m)| (k, m * p)).collect() }
    }

    /// `self - other`, defined only when `other` is included in `self`.
    pub fn subtract(&self, other: &TypeMultiset) -> Result<TypeMultiset> {
        if !other.leq(PartialOrderKind::Inclusion, self) {
            return Err(Error::SubtractUndefined {
                minuend: self.to_string(),
                subtrahend: other.to_string(),
            });
        }
        let mut out = self.clone();
        for (k, m) in other.iter() {
            out.remove_many(k, m)?;
        }
        Ok(out)
    }

    /// Inclusion or dominance comparison `self <= other`.
    pub fn leq(&self, order: PartialOrderKind, other: &TypeMultiset) -> bool {
        match order {
            PartialOrderKind::Inclusion => {
                self.iter().all(|(k, m)| other.counts.get(&k).is_some_and(|n| n >= m))
            }
            PartialOrderKind::Dominance => self.dominated_by(other),
        }
    }

    // Pairing sorted-descending lists elementwise is equivalent to comparing,
    // for every threshold d, how many elements are >= d. Thresholds at the
    // keys of `self` suffice, and the smallest key also bounds |self| <= |other|.
    fn dominated_by(&self, other: &TypeMultiset) -> bool {
        let mut mine = BigUint::zero();
        let mut theirs = BigUint::zero();
        let mut other_iter = other.counts.iter().rev().peekable();
        for (&d, m) in self.counts.iter().rev() {
            mine += m;
            while let Some((&k, n)) = other_iter.peek() {
                if k >= d {
                    theirs += *n;
                    other_iter.next();
                } else {
                    break;
                }
            }
            if mine > theirs {
                return false;
            }
        }
        true
    }

    /// `tau_<k,t> = tau - {k} + n x {k-1}` where the caller supplies `n = N_k(t)`.
    /// For `k = 0` this is simply `tau - {0}`.
    pub fn residual(&self, k: Dim, n: &BigUint) -> Result<TypeMultiset> {
        if !self.contains(k) {
            return Err(Error::ElementAbsent { dim: k, tau: self.to_string() });
        }
        let mut out = self.clone();
        out.remove_one(k)?;
        if k > 0 {
            out.insert_many(k - 1, n.clone());
        }
        Ok(out)
    }

    /// Textual form with `r x {k}` terms, used when the expanded list is long.
    pub fn to_compact_string(&self) -> String {
        if self.is_empty() {
            return "{}".to_owned();
        }
        self.counts
            .iter()
            .rev()
            .map(|(k, m)| if m.is_one() { format!("{{{k}}}") } else { format!("{m} x {{{k}}}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The multiset ordering `<_m`, computed as the lexicographic comparison of
/// the sorted-descending element lists where running out is smallest.
impl Ord for TypeMultiset {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.counts.iter().rev();
        let mut b = other.counts.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ka, ma)), Some((kb, mb))) => {
                    if ka != kb {
                        return ka.cmp(kb);
                    }
                    if ma != mb {
                        // the side with more copies of k continues with k
                        // where the other continues with something smaller
                        return ma.cmp(mb);
                    }
                }
            }
        }
    }
}

impl PartialOrd for TypeMultiset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const EXPANDED_DISPLAY_CAP: usize = 32;

impl fmt::Display for TypeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_sorted_desc(EXPANDED_DISPLAY_CAP) {
            Some(dims) => {
                let body: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                write!(f, "{{{}}}", body.join(","))
            }
            None => f.write_str(&self.to_compact_string()),
        }
    }
}

impl FromStr for TypeMultiset {
    type Err = Error;

    /// Accepts `{k1,k2,...}`, `r x {k1,...}` and sums of those joined by `+`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::usage(s, "empty type"));
        }
        let mut out = TypeMultiset::empty();
        for term in s.split('+') {
            let term = term.trim();
            let (factor, braces) = match term.find('{') {
                Some(0) => (BigUint::one(), term),
                Some(pos) => {
                    let head = term[..pos].trim();
                    let head = head
                        .strip_suffix('x')
                        .or_else(|| head.strip_suffix('×'))
                        .or_else(|| head.strip_suffix('*'))
                        .ok_or_else(|| Error::usage(term, "expected `r x {...}`"))?;
                    let r = head
                        .trim()
                        .parse::<BigUint>()
                        .map_err(|_| Error::usage(term, "bad repetition factor"))?;
                    (r, &term[pos..])
                }
                None => return Err(Error::usage(term, "expected `{`")),
            };
            let inner = braces
                .strip_prefix('{')
                .and_then(|b| b.strip_suffix('}'))
                .ok_or_else(|| Error::usage(term, "unbalanced braces"))?;
            let inner = inner.trim();
            if inner.is_empty() {
                continue;
            }
            for item in inner.split(',') {
                let k = item
                    .trim()
                    .parse::<Dim>()
                    .map_err(|_| Error::usage(term, "expected a dimension"))?;
                out.insert_many(k, factor.clone());
            }
        }
        Ok(out)
    }
}
