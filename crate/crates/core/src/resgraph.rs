//! Resolution graphs: path counts, the arrow-removal trick, discrepancy
//! groups and the Noether–Fano-type inequalities.
//!
//! Vertices are `E_1..E_K` (1-based). An arrow `i -> j` requires `i > j`, so
//! the graph is acyclic by construction and vertex order is a topological
//! order. The text form is
//!
//! ```text
//! K=4; L=2; delta=3,3,2,1; arrows=(4>3),(4>1),(3>2),(2>1)
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("bad graph: {0}")]
    Invalid(String),
    #[error("cannot parse graph: {0}")]
    Parse(String),
    #[error("expected {expected} multiplicities, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Which discrepancy values are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Levels {
    Three,
    Four,
}

impl Levels {
    pub fn max_delta(self) -> u32 {
        match self {
            Levels::Three => 3,
            Levels::Four => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionGraph {
    k: usize,
    /// Last vertex of the lower part.
    l: usize,
    /// `delta[i-1]` is the discrepancy of `E_i`.
    delta: Vec<u32>,
    arrows: BTreeSet<(usize, usize)>,
}

impl ResolutionGraph {
    /// Build and validate a graph. Besides `i > j` on arrows, every vertex
    /// `i >= 2` needs an outgoing arrow and `1 <= L <= K`.
    pub fn new(k: usize, l: usize, delta: Vec<u32>, arrows: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let bad = |m: String| Err(GraphError::Invalid(m));
        if k == 0 {
            return bad("K must be positive".into());
        }
        if !(1..=k).contains(&l) {
            return bad(format!("L = {l} is not in 1..={k}"));
        }
        if delta.len() != k {
            return bad(format!("{} discrepancies for {k} vertices", delta.len()));
        }
        if let Some(d) = delta.iter().find(|&&d| d == 0) {
            return bad(format!("discrepancy {d} is not positive"));
        }
        let arrows: BTreeSet<(usize, usize)> = arrows.into_iter().collect();
        for &(i, j) in &arrows {
            if !(1 <= j && j < i && i <= k) {
                return bad(format!("arrow {i}->{j} must go from a later to an earlier vertex in 1..={k}"));
            }
        }
        for i in 2..=k {
            if !arrows.iter().any(|&(a, _)| a == i) {
                return bad(format!("vertex {i} has no outgoing arrow"));
            }
        }
        Ok(ResolutionGraph { k, l, delta, arrows })
    }

    /// Additionally require discrepancies in `1..=levels.max_delta()`.
    pub fn check_levels(&self, levels: Levels) -> Result<(), GraphError> {
        match self.delta.iter().position(|&d| d > levels.max_delta()) {
            Some(i) => Err(GraphError::Invalid(format!("delta_{} = {} exceeds {}", i + 1, self.delta[i], levels.max_delta()))),
            None => Ok(()),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn delta(&self, i: usize) -> u32 {
        self.delta[i - 1]
    }

    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arrows.iter().copied()
    }

    pub fn has_arrow(&self, i: usize, j: usize) -> bool {
        self.arrows.contains(&(i, j))
    }
}

impl fmt::Display for ResolutionGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let delta: Vec<String> = self.delta.iter().map(u32::to_string).collect();
        // later vertices first, as the arrows point downwards
        let mut arrows: Vec<_> = self.arrows.iter().collect();
        arrows.sort_by(|a, b| b.cmp(a));
        let arrows: Vec<String> = arrows.iter().map(|(i, j)| format!("({i}>{j})")).collect();
        write!(f, "K={}; L={}; delta={}; arrows={}", self.k, self.l, delta.join(","), arrows.join(","))
    }
}

impl FromStr for ResolutionGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        let perr = |m: &str| GraphError::Parse(m.to_string());
        let (mut k, mut l, mut delta, mut arrows) = (None, None, None, Vec::new());
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| perr(&format!("expected key=value, got `{part}`")))?;
            let val = val.trim();
            match key.trim() {
                "K" => k = Some(val.parse::<usize>().map_err(|_| perr(&format!("bad K `{val}`")))?),
                "L" => l = Some(val.parse::<usize>().map_err(|_| perr(&format!("bad L `{val}`")))?),
                "delta" => {
                    delta = Some(
                        val.split(',')
                            .map(|d| d.trim().parse::<u32>().map_err(|_| perr(&format!("bad discrepancy `{d}`"))))
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "arrows" => {
                    for a in val.split(',').map(str::trim).filter(|a| !a.is_empty()) {
                        let inner = a.strip_prefix('(').and_then(|a| a.strip_suffix(')')).ok_or_else(|| perr(&format!("bad arrow `{a}`")))?;
                        let (i, j) = inner.split_once('>').ok_or_else(|| perr(&format!("bad arrow `{a}`")))?;
                        let p = |x: &str| x.trim().parse::<usize>().map_err(|_| perr(&format!("bad arrow `{a}`")));
                        arrows.push((p(i)?, p(j)?));
                    }
                }
                other => return Err(perr(&format!("unknown key `{other}`"))),
            }
        }
        let k = k.ok_or_else(|| perr("missing K"))?;
        ResolutionGraph::new(k, l.ok_or_else(|| perr("missing L"))?, delta.ok_or_else(|| perr("missing delta"))?, arrows)
    }
}

/// `p[j]` = number of paths from `from` to `j` (`p[from] = 1`), indexed
/// `1..=K`; entry 0 is unused. Dynamic programming in decreasing index
/// order, which is topological since arrows only go down.
pub fn path_counts(g: &ResolutionGraph, from: usize) -> Vec<BigInt> {
    assert!((1..=g.k).contains(&from), "vertex {from} out of range");
    let mut p = vec![BigInt::zero(); g.k + 1];
    p[from] = BigInt::one();
    for v in (1..=from).rev() {
        if p[v].is_zero() {
            continue;
        }
        let pv = p[v].clone();
        for &(_, j) in g.arrows.range((v, 0)..(v + 1, 0)) {
            p[j] += &pv;
        }
    }
    p
}

/// Delete every arrow from the upper part (`i > L`) to `E_1`.
pub fn remove_arrows(g: &ResolutionGraph) -> ResolutionGraph {
    let mut out = g.clone();
    out.arrows.retain(|&(i, j)| !(j == 1 && i > g.l));
    out
}

/// Path counts from `E_K` grouped by discrepancy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaGroups {
    pub p1: BigInt,
    /// `sigma[0]` collects the largest discrepancy (3, resp. 4), down to
    /// `sigma[last]` for discrepancy 1; only vertices `i >= 2` count.
    pub sigma: Vec<BigInt>,
}

/// `Σ_0 = Σ_{δ_i = top, i >= 2} p_i`, ..., `Σ_last = Σ_{δ_i = 1} p_i`, with
/// `p_i = p_{K,i}` computed in `g` (pass the modified graph to get the
/// modified `p_1`).
pub fn sigma_groups(g: &ResolutionGraph, levels: Levels) -> Result<SigmaGroups, GraphError> {
    g.check_levels(levels)?;
    let p = path_counts(g, g.k);
    let top = levels.max_delta();
    let mut sigma = vec![BigInt::zero(); top as usize];
    for i in 2..=g.k {
        sigma[(top - g.delta(i)) as usize] += &p[i];
    }
    Ok(SigmaGroups { p1: p[1].clone(), sigma })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NfKind {
    /// `Σ p_i ν_i > 3p_1 + Σ_{i>=2} p_i δ_i`
    Canonical3,
    /// `Σ p_i ν_i > 4p_1 + Σ_{i>=2} p_i δ_i`
    LogCanonical4,
    /// `Σ p_i ν_i > 3p_1 + 2Σ_0 + Σ_1` with `Σ_0` over the lower part
    /// `2..=L` and `Σ_1` over the upper part.
    Case51,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NfEvaluation {
    pub lhs: Rat,
    pub rhs: Rat,
    pub satisfied: bool,
}

fn check_len(g: &ResolutionGraph, nu: &[Rat]) -> Result<(), GraphError> {
    if nu.len() != g.k {
        return Err(GraphError::LengthMismatch { expected: g.k, got: nu.len() });
    }
    Ok(())
}

/// Evaluate a Noether–Fano-type inequality with `n = 1` and
/// `p_i = p_{K,i}` in `g`.
pub fn evaluate_nf(g: &ResolutionGraph, nu: &[Rat], kind: NfKind) -> Result<NfEvaluation, GraphError> {
    check_len(g, nu)?;
    let p: Vec<Rat> = path_counts(g, g.k).into_iter().map(Rat::from_integer).collect();
    let lhs: Rat = (1..=g.k).map(|i| &p[i] * &nu[i - 1]).sum();
    let by_delta = || -> Rat { (2..=g.k).map(|i| &p[i] * Rat::from_integer(g.delta(i).into())).sum() };
    let rhs = match kind {
        NfKind::Canonical3 => Rat::from_integer(3.into()) * &p[1] + by_delta(),
        NfKind::LogCanonical4 => Rat::from_integer(4.into()) * &p[1] + by_delta(),
        NfKind::Case51 => {
            let s0: Rat = (2..=g.l).map(|i| p[i].clone()).sum();
            let s1: Rat = (g.l + 1..=g.k).map(|i| p[i].clone()).sum();
            Rat::from_integer(3.into()) * &p[1] + Rat::from_integer(2.into()) * s0 + s1
        }
    };
    let satisfied = lhs > rhs;
    Ok(NfEvaluation { lhs, rhs, satisfied })
}

/// `Σ p_i ν_i²`, the lower bound the multiplicities of the self-intersection
/// must meet.
pub fn counting_mult_bound(g: &ResolutionGraph, nu: &[Rat]) -> Result<Rat, GraphError> {
    check_len(g, nu)?;
    let p = path_counts(g, g.k);
    Ok((1..=g.k).map(|i| Rat::from_integer(p[i].clone()) * &nu[i - 1] * &nu[i - 1]).sum())
}

/// Path count by explicit enumeration of paths (exponential; an oracle).
pub fn enumerate_paths(g: &ResolutionGraph, from: usize, to: usize) -> u64 {
    if from == to {
        return 1;
    }
    g.arrows.range((from, 0)..(from + 1, 0)).filter(|&&(_, j)| j >= to).map(|&(_, j)| enumerate_paths(g, j, to)).sum()
}

/// Every valid arrow set on `K` vertices (each vertex `i >= 2` with an
/// outgoing arrow), all discrepancies set to `delta`.
pub fn all_graphs(k: usize, l: usize, delta: u32) -> Vec<ResolutionGraph> {
    let slots: Vec<(usize, usize)> = (2..=k).flat_map(|i| (1..i).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let arrows = slots.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, a)| *a);
        if let Ok(g) = ResolutionGraph::new(k, l, vec![delta; k], arrows) {
            out.push(g);
        }
    }
    out
}

/// A random valid graph with `K` in `1..=k_max`: each vertex `i >= 2` gets
/// a nonempty random set of targets.
pub fn random_graph<R: Rng>(rng: &mut R, k_max: usize, levels: Levels) -> ResolutionGraph {
    let k = rng.gen_range(1..=k_max);
    let l = rng.gen_range(1..=k);
    let delta = (0..k).map(|_| rng.gen_range(1..=levels.max_delta())).collect();
    let mut arrows = Vec::new();
    for i in 2..=k {
        let before = arrows.len();
        for j in 1..i {
            if rng.gen_bool(0.5) {
                arrows.push((i, j));
            }
        }
        if arrows.len() == before {
            arrows.push((i, rng.gen_range(1..i)));
        }
    }
    ResolutionGraph::new(k, l, delta, arrows).expect("generator respects the invariants")
}

/// Multiplicities with `ν_2 >= ... >= ν_K` (small nonnegative rationals).
pub fn random_multiplicities<R: Rng>(rng: &mut R, k: usize) -> Vec<Rat> {
    let mut nu = vec![Rat::new(rng.gen_range(0..=12).into(), 4.into())];
    let mut cur = rng.gen_range(0..=24);
    for _ in 1..k {
        nu.push(Rat::new(cur.into(), 4.into()));
        cur = rng.gen_range(0..=cur);
    }
    nu
}

/// Tallies from running the path-count and arrow-removal checks over a
/// corpus of graphs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusReport {
    pub graphs: usize,
    /// Path-count DP disagreeing with enumeration.
    pub dp_mismatches: usize,
    /// `p_{K,j}`, `j >= 2`, changed by arrow removal.
    pub preserve_violations: usize,
    /// `p_1` increased by arrow removal.
    pub p1_increases: usize,
    /// Graphs with `L >= 2` checked against `p_1 <= Σ_{i=2}^{L} p_i`.
    pub bound_checked: usize,
    pub bound_violations: usize,
}

impl CorpusReport {
    pub fn violations(&self) -> usize {
        self.dp_mismatches + self.preserve_violations + self.p1_increases + self.bound_violations
    }

    pub fn merge(mut self, o: &CorpusReport) -> Self {
        self.graphs += o.graphs;
        self.dp_mismatches += o.dp_mismatches;
        self.preserve_violations += o.preserve_violations;
        self.p1_increases += o.p1_increases;
        self.bound_checked += o.bound_checked;
        self.bound_violations += o.bound_violations;
        self
    }
}

/// Run every corpus check on one graph.
pub fn check_graph(g: &ResolutionGraph) -> CorpusReport {
    let mut r = CorpusReport { graphs: 1, ..Default::default() };
    for from in 1..=g.k {
        let dp = path_counts(g, from);
        if (1..=g.k).any(|to| dp[to] != BigInt::from(enumerate_paths(g, from, to))) {
            r.dp_mismatches += 1;
        }
    }
    let h = remove_arrows(g);
    let (before, after) = (path_counts(g, g.k), path_counts(&h, g.k));
    if (2..=g.k).any(|j| before[j] != after[j]) {
        r.preserve_violations += 1;
    }
    if after[1] > before[1] {
        r.p1_increases += 1;
    }
    if g.l >= 2 {
        r.bound_checked += 1;
        let lower: BigInt = (2..=g.l).map(|i| after[i].clone()).sum();
        if after[1] > lower {
            r.bound_violations += 1;
        }
    }
    r
}

/// Every graph with `K <= k_max`, every `L`, run through [`check_graph`].
pub fn exhaustive_corpus(k_max: usize) -> CorpusReport {
    (1..=k_max)
        .flat_map(|k| (1..=k).flat_map(move |l| all_graphs(k, l, 1)))
        .fold(CorpusReport::default(), |acc, g| acc.merge(&check_graph(&g)))
}

/// `count` random graphs with `K <= k_max` from a seeded ChaCha stream.
pub fn random_corpus(seed: u64, count: usize, k_max: usize) -> CorpusReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).fold(CorpusReport::default(), |acc, _| acc.merge(&check_graph(&random_graph(&mut rng, k_max, Levels::Four))))
}
