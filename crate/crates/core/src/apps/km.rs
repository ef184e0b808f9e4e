//! Karp-Miller coverability trees for vector addition systems.
//!
//! VAS file format: `k <n>`, `init <n1 .. nk>`, then one or more
//! `delta <d1 .. dk>` lines.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::control::EvalBudget;
use crate::error::{Error, Resource, Result};
use crate::exec::Exec;
use crate::sequences::goodness_by;

/// A natural number or ω. `Fin(n) < Omega` for every `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OmegaNat {
    Fin(u64),
    Omega,
}

impl fmt::Display for OmegaNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaNat::Fin(n) => write!(f, "{n}"),
            OmegaNat::Omega => f.write_str("ω"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaMarking(pub Vec<OmegaNat>);

impl OmegaMarking {
    pub fn finite(v: &[u64]) -> Self {
        Self(v.iter().map(|&x| OmegaNat::Fin(x)).collect())
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.leq(other) && self != other
    }

    /// Largest finite entry; ω entries do not count.
    pub fn size(&self) -> u64 {
        self.0
            .iter()
            .filter_map(|x| match x {
                OmegaNat::Fin(n) => Some(*n),
                OmegaNat::Omega => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn omega_count(&self) -> usize {
        self.0.iter().filter(|x| **x == OmegaNat::Omega).count()
    }

    /// `self + delta`, or `None` when a finite entry would go negative.
    pub fn step(&self, delta: &[i64]) -> Result<Option<Self>> {
        let mut out = Vec::with_capacity(self.0.len());
        for (x, d) in self.0.iter().zip(delta) {
            out.push(match x {
                OmegaNat::Omega => OmegaNat::Omega,
                OmegaNat::Fin(n) => {
                    let v = i128::from(*n) + i128::from(*d);
                    if v < 0 {
                        return Ok(None);
                    }
                    OmegaNat::Fin(u64::try_from(v).map_err(|_| Error::bits(64))?)
                }
            });
        }
        Ok(Some(Self(out)))
    }
}

impl fmt::Display for OmegaMarking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vas {
    pub k: usize,
    pub init: Vec<u64>,
    pub deltas: Vec<Vec<i64>>,
}

impl Vas {
    pub fn new(init: Vec<u64>, deltas: Vec<Vec<i64>>) -> Result<Self> {
        let k = init.len();
        if deltas.is_empty() {
            return Err(Error::Precondition("a VAS needs at least one delta".into()));
        }
        if let Some(d) = deltas.iter().find(|d| d.len() != k) {
            return Err(Error::Precondition(format!("delta {d:?} does not have {k} entries")));
        }
        Ok(Self { k, init, deltas })
    }

    /// Largest absolute entry over all deltas.
    pub fn delta_norm(&self) -> u64 {
        self.deltas.iter().flatten().map(|d| d.unsigned_abs()).max().unwrap_or(0)
    }

    /// Configurations reachable within `max_states` distinct states,
    /// breadth first.
    pub fn explore(&self, max_states: usize) -> Vec<Vec<u64>> {
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.init.clone()]);
        seen.insert(self.init.clone());
        while let Some(v) = queue.pop_front() {
            order.push(v.clone());
            if order.len() >= max_states {
                break;
            }
            for d in &self.deltas {
                let next: Option<Vec<u64>> = v
                    .iter()
                    .zip(d)
                    .map(|(x, d)| u64::try_from(i128::from(*x) + i128::from(*d)).ok())
                    .collect();
                if let Some(next) = next {
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        order
    }
}

impl FromStr for Vas {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut k: Option<usize> = None;
        let mut init: Option<Vec<u64>> = None;
        let mut deltas = Vec::new();
        let mut last = 1;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            last = lineno;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or("");
            let rest: Vec<&str> = words.collect();
            match head {
                "k" => {
                    let [n] = rest.as_slice() else {
                        return Err(Error::parse(lineno, "expected `k <n>`"));
                    };
                    k = Some(n.parse().map_err(|_| Error::parse(lineno, format!("bad dimension {n:?}")))?);
                }
                "init" | "delta" => {
                    let dim = k.ok_or_else(|| Error::parse(lineno, "`k` must come first"))?;
                    if rest.len() != dim {
                        return Err(Error::parse(lineno, format!("expected {dim} values, found {}", rest.len())));
                    }
                    if head == "init" {
                        let v = rest
                            .iter()
                            .map(|s| s.parse::<u64>().map_err(|_| Error::parse(lineno, format!("bad value {s:?}"))))
                            .collect::<Result<Vec<_>>>()?;
                        init = Some(v);
                    } else {
                        let v = rest
                            .iter()
                            .map(|s| {
                                s.trim_start_matches('+')
                                    .parse::<i64>()
                                    .map_err(|_| Error::parse(lineno, format!("bad value {s:?}")))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        deltas.push(v);
                    }
                }
                _ => return Err(Error::parse(lineno, format!("unknown directive {head:?}"))),
            }
        }
        let init = init.ok_or_else(|| Error::parse(last, "missing init line"))?;
        if deltas.is_empty() {
            return Err(Error::parse(last, "missing delta line"));
        }
        Vas::new(init, deltas)
    }
}

impl fmt::Display for Vas {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k {}", self.k)?;
        let join = |v: Vec<String>| v.join(" ");
        writeln!(f, "init {}", join(self.init.iter().map(ToString::to_string).collect()))?;
        for d in &self.deltas {
            writeln!(f, "delta {}", join(d.iter().map(ToString::to_string).collect()))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmNode {
    pub label: OmegaMarking,
    pub parent: Option<usize>,
    /// Index of the delta on the edge from the parent.
    pub delta: Option<usize>,
}

fn path_of(nodes: &[KmNode], mut n: usize) -> Vec<usize> {
    let mut out = vec![n];
    while let Some(p) = nodes[n].parent {
        out.push(p);
        n = p;
    }
    out.reverse();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KmTree {
    pub k: usize,
    pub nodes: Vec<KmNode>,
}

impl KmTree {
    /// Node indices from the root to `n`.
    pub fn path(&self, n: usize) -> Vec<usize> {
        path_of(&self.nodes, n)
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.nodes.len()];
        for node in &self.nodes {
            if let Some(p) = node.parent {
                has_child[p] = true;
            }
        }
        (0..self.nodes.len()).filter(|&i| !has_child[i]).collect()
    }

    /// Root-to-leaf label sequences.
    pub fn branches(&self) -> Vec<Vec<OmegaMarking>> {
        self.leaves()
            .into_iter()
            .map(|l| self.path(l).into_iter().map(|i| self.nodes[i].label.clone()).collect())
            .collect()
    }

    /// Distinct labels in node order.
    pub fn covering(&self) -> Vec<OmegaMarking> {
        let mut seen = HashSet::new();
        self.nodes.iter().filter(|n| seen.insert(n.label.clone())).map(|n| n.label.clone()).collect()
    }
}

/// Builds the tree breadth first, children in delta order. A successor
/// equal to some label on its path ends the branch; otherwise it is
/// accelerated against every strictly smaller label on the path. The step
/// budget caps the number of nodes.
pub fn km_tree(vas: &Vas, caps: EvalBudget) -> Result<KmTree> {
    let mut nodes = vec![KmNode { label: OmegaMarking::finite(&vas.init), parent: None, delta: None }];
    let mut queue = VecDeque::from([0usize]);
    let cap = caps.max_steps;
    while let Some(n) = queue.pop_front() {
        let path = path_of(&nodes, n);
        for (di, d) in vas.deltas.iter().enumerate() {
            let Some(mut w) = nodes[n].label.step(d)? else { continue };
            if path.iter().any(|&a| w == nodes[a].label) {
                continue;
            }
            let base = w.clone();
            for &a in &path {
                let wa = &nodes[a].label;
                if wa.lt(&base) {
                    for j in 0..vas.k {
                        if base.0[j] > wa.0[j] {
                            w.0[j] = OmegaNat::Omega;
                        }
                    }
                }
            }
            if nodes.len() as u64 >= cap {
                return Err(Error::BudgetExceeded { resource: Resource::Nodes, limit: cap });
            }
            nodes.push(KmNode { label: w, parent: Some(n), delta: Some(di) });
            queue.push_back(nodes.len() - 1);
        }
    }
    Ok(KmTree { k: vas.k, nodes })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VasReport {
    /// Coordinate `j` is unbounded iff some label has ω at `j`.
    pub unbounded: Vec<bool>,
    pub nodes: usize,
    /// Number of labels on the longest root-to-leaf path.
    pub max_branch_len: usize,
    /// Every branch is `(k+1)`-bad for the product ordering on `N_ω^k`.
    pub branches_bad: bool,
    /// `||w_{i+1}|| <= ||w_i|| + ||Δ||` along every branch.
    pub sizes_ok: bool,
    pub covering: Vec<OmegaMarking>,
}

pub fn vas_queries(vas: &Vas, tree: &KmTree, exec: Exec) -> VasReport {
    let k = tree.k;
    let unbounded = (0..k).map(|j| tree.nodes.iter().any(|n| n.label.0[j] == OmegaNat::Omega)).collect();
    let branches = tree.branches();
    let norm = vas.delta_norm();
    let checks = exec.map(&branches, |b| {
        let profile = goodness_by(b.len(), |i, j| b[i].leq(&b[j]), Exec::Sequential);
        let bad = profile.is_r_bad(k + 1);
        let sizes = b.windows(2).all(|w| w[1].size() <= w[0].size().saturating_add(norm));
        (b.len(), bad, sizes)
    });
    VasReport {
        unbounded,
        nodes: tree.nodes.len(),
        max_branch_len: checks.iter().map(|c| c.0).max().unwrap_or(0),
        branches_bad: checks.iter().all(|c| c.1),
        sizes_ok: checks.iter().all(|c| c.2),
        covering: tree.covering(),
    }
}

/// Every configuration met in a bounded breadth-first exploration lies
/// below some covering label. Returns the first counterexample.
pub fn uncovered_reachable(vas: &Vas, tree: &KmTree, max_states: usize) -> Option<Vec<u64>> {
    let covering = tree.covering();
    vas.explore(max_states)
        .into_iter()
        .find(|v| !covering.iter().any(|w| OmegaMarking::finite(v).leq(w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use OmegaNat::{Fin, Omega};

    fn labels(tree: &KmTree) -> Vec<Vec<OmegaNat>> {
        tree.covering().into_iter().map(|w| w.0).collect()
    }

    #[test]
    fn single_increment() {
        let vas: Vas = "k 1\ninit 0\ndelta +1\n".parse().unwrap();
        let tree = km_tree(&vas, EvalBudget::default()).unwrap();
        assert_eq!(tree.nodes.len(), 2);
        assert_eq!(labels(&tree), vec![vec![Fin(0)], vec![Omega]]);
        let r = vas_queries(&vas, &tree, Exec::Sequential);
        assert_eq!(r.unbounded, vec![true]);
        assert!(r.branches_bad && r.sizes_ok);
    }

    #[test]
    fn single_decrement() {
        let vas = Vas::new(vec![1], vec![vec![-1]]).unwrap();
        let tree = km_tree(&vas, EvalBudget::default()).unwrap();
        assert_eq!(labels(&tree), vec![vec![Fin(1)], vec![Fin(0)]]);
        let r = vas_queries(&vas, &tree, Exec::Sequential);
        assert_eq!(r.unbounded, vec![false]);
        assert_eq!(r.max_branch_len, 2);
    }

    #[test]
    fn second_coordinate_grows() {
        let vas = Vas::new(vec![0, 0], vec![vec![0, 1]]).unwrap();
        let tree = km_tree(&vas, EvalBudget::default()).unwrap();
        assert_eq!(labels(&tree), vec![vec![Fin(0), Fin(0)], vec![Fin(0), Omega]]);
        assert_eq!(vas_queries(&vas, &tree, Exec::Sequential).unbounded, vec![false, true]);
    }

    #[test]
    fn transfer_net_is_covered() {
        let vas = Vas::new(vec![1, 0, 0], vec![vec![-1, 1, 0], vec![1, -1, 1], vec![0, -1, -1]]).unwrap();
        let tree = km_tree(&vas, EvalBudget::default()).unwrap();
        let r = vas_queries(&vas, &tree, Exec::Parallel);
        assert!(r.branches_bad && r.sizes_ok);
        assert_eq!(r.unbounded, vec![false, false, true]);
        assert_eq!(uncovered_reachable(&vas, &tree, 500), None);
    }

    #[test]
    fn node_cap() {
        let vas = Vas::new(vec![1, 0], vec![vec![-1, 1], vec![1, -1], vec![0, 1]]).unwrap();
        let err = km_tree(&vas, EvalBudget::default().with_steps(2)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { resource: Resource::Nodes, .. }));
    }

    #[test]
    fn vas_format() {
        let vas = Vas::new(vec![1, 0], vec![vec![-1, 2]]).unwrap();
        assert_eq!(vas.to_string().parse::<Vas>().unwrap(), vas);
        assert!(matches!("k 2\ninit 1\n".parse::<Vas>(), Err(Error::ModelParse { line: 2, .. })));
        assert!(matches!("k 1\ninit 1\n".parse::<Vas>(), Err(Error::ModelParse { .. })));
    }

    #[test]
    fn omega_arithmetic() {
        let w = OmegaMarking(vec![Omega, Fin(3)]);
        assert_eq!(w.size(), 3);
        assert_eq!(w.step(&[-5, 1]).unwrap(), Some(OmegaMarking(vec![Omega, Fin(4)])));
        assert_eq!(w.step(&[0, -4]).unwrap(), None);
        assert!(OmegaMarking::finite(&[9, 3]).lt(&w));
    }
}
