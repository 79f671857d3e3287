//! Ground truth for `xi_m` and `lambda_h` computed from the graph alone.
//!
//! Nothing here calls into [`crate::extremal`]. Small graphs (`n <= 6`) are
//! handled with one `u64` bitmask per vertex set. Connected sets are
//! enumerated with the ESU extension scheme: each connected set is grown
//! only from its minimum vertex, and a candidate is added to the extension
//! set only if it is exclusive to the vertex just added, so every connected
//! set is produced exactly once. The `xi` searches only grow sets through
//! vertex 0, which is enough because every family member is vertex
//! transitive under XOR translation.

use std::env;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{GraphSpec, VertexSet};

/// Largest dimension the bitmask enumerator supports.
pub const MAX_MASK_DIM: u32 = 6;
/// Largest dimension accepted by exhaustive oracles.
pub const MAX_EXHAUSTIVE_DIM: u32 = 5;
/// Largest dimension for which every `m`-subset is scanned by [`ex_bruteforce`].
pub const MAX_ALL_SUBSETS_DIM: u32 = 4;
/// Largest dimension accepted by [`sample_cuts`].
pub const MAX_SAMPLE_DIM: u32 = 12;
/// Default cap on extension steps for one exhaustive run.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;
/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "EXTRACONN_BUDGET";

/// Work limits for exhaustive runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Maximum number of sets visited (one step per visited set).
    pub budget: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl OracleConfig {
    /// Default config with the budget taken from `EXTRACONN_BUDGET` if set.
    pub fn from_env() -> Result<Self> {
        match env::var(BUDGET_ENV) {
            Ok(raw) => {
                let budget = raw.trim().parse::<u64>().map_err(|_| {
                    Error::Domain(format!(
                        "{BUDGET_ENV} must be a non-negative integer, got {raw:?}"
                    ))
                })?;
                Ok(Self { budget })
            }
            Err(_) => Ok(Self::default()),
        }
    }
}

/// Adjacency of a small graph as one neighbor mask per vertex.
#[derive(Debug, Clone)]
struct MaskGraph {
    adj: Vec<u64>,
    degree: u32,
    all: u64,
}

impl MaskGraph {
    fn new(spec: GraphSpec) -> Result<Self> {
        if spec.n() > MAX_MASK_DIM {
            return Err(Error::Resource(format!(
                "bitmask enumeration supports n <= {MAX_MASK_DIM}, got {}",
                spec.n()
            )));
        }
        let count = spec.vertex_count();
        let adj = (0..count)
            .map(|v| spec.neighbor_ids(v).fold(0u64, |acc, u| acc | 1 << u))
            .collect();
        let all = if count == 64 {
            u64::MAX
        } else {
            (1u64 << count) - 1
        };
        Ok(Self {
            adj,
            degree: spec.regularity(),
            all,
        })
    }

    fn size(&self) -> u32 {
        self.adj.len() as u32
    }

    fn is_connected(&self, set: u64) -> bool {
        if set == 0 {
            return true;
        }
        let mut reached = set & set.wrapping_neg();
        let mut frontier = reached;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                next |= self.adj[f.trailing_zeros() as usize];
                f &= f - 1;
            }
            frontier = next & set & !reached;
            reached |= frontier;
        }
        reached == set
    }

    fn double_edges(&self, set: u64) -> u32 {
        let mut s = set;
        let mut total = 0;
        while s != 0 {
            total += (self.adj[s.trailing_zeros() as usize] & set).count_ones();
            s &= s - 1;
        }
        total
    }
}

/// One node of the extension tree.
#[derive(Debug, Clone, Copy)]
struct Frame {
    set: u64,
    /// Vertices that may still extend `set` in this subtree.
    ext: u64,
    /// `set` together with all its neighbors.
    closed: u64,
    size: u32,
    double_edges: u32,
}

/// Depth-first walk over every connected set of size `<= max_size`.
struct Walker {
    graph: MaskGraph,
    max_size: u32,
    next_seed: u32,
    /// Seeds `next_seed..seed_end` remain.
    seed_end: u32,
    /// Vertices greater than the current seed.
    above_seed: u64,
    stack: Vec<Frame>,
    steps: u64,
    budget: u64,
}

impl Walker {
    fn new(graph: MaskGraph, max_size: u32, budget: u64) -> Self {
        let seed_end = graph.size();
        Self {
            graph,
            max_size,
            next_seed: 0,
            seed_end,
            above_seed: 0,
            stack: Vec::with_capacity(max_size as usize + 1),
            steps: 0,
            budget,
        }
    }

    fn charge(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::Resource(format!(
                "enumeration exceeded its budget of {} steps (set {BUDGET_ENV} to raise it)",
                self.budget
            )));
        }
        Ok(())
    }

    /// Next visited set, or `None` once every seed has been used.
    fn advance(&mut self) -> Option<Result<Frame>> {
        loop {
            let Some(top) = self.stack.last_mut() else {
                if self.next_seed >= self.seed_end {
                    return None;
                }
                let v = self.next_seed;
                self.next_seed += 1;
                self.above_seed = if v == 63 { 0 } else { u64::MAX << (v + 1) };
                let set = 1u64 << v;
                let adj = self.graph.adj[v as usize];
                let root = Frame {
                    set,
                    ext: adj & self.above_seed,
                    closed: set | adj,
                    size: 1,
                    double_edges: 0,
                };
                if let Err(e) = self.charge() {
                    return Some(Err(e));
                }
                if self.max_size > 1 {
                    self.stack.push(root);
                }
                return Some(Ok(root));
            };
            if top.ext == 0 {
                self.stack.pop();
                continue;
            }
            let w = top.ext.trailing_zeros();
            let wbit = 1u64 << w;
            top.ext &= !wbit;
            let adj = self.graph.adj[w as usize];
            let child = Frame {
                set: top.set | wbit,
                ext: top.ext | (adj & !top.closed & self.above_seed),
                closed: top.closed | adj,
                size: top.size + 1,
                double_edges: top.double_edges + 2 * (adj & top.set).count_ones(),
            };
            if let Err(e) = self.charge() {
                return Some(Err(e));
            }
            if child.size < self.max_size {
                self.stack.push(child);
            }
            return Some(Ok(child));
        }
    }
}

impl Iterator for Walker {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        self.advance()
    }
}

/// Stream of all connected `m`-vertex sets, each yielded exactly once.
///
/// Yields one `Err` and then stops if the step budget runs out.
pub struct ConnectedSubsets {
    walker: Walker,
    n: u32,
    m: u32,
    failed: bool,
}

impl Iterator for ConnectedSubsets {
    type Item = Result<VertexSet>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        for frame in self.walker.by_ref() {
            match frame {
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
                Ok(frame) if frame.size == self.m => {
                    return Some(VertexSet::from_mask(self.n, frame.set));
                }
                Ok(_) => {}
            }
        }
        None
    }
}

pub fn enumerate_connected_subsets(
    spec: GraphSpec,
    m: u64,
    config: OracleConfig,
) -> Result<ConnectedSubsets> {
    let graph = MaskGraph::new(spec)?;
    if m == 0 || m > spec.vertex_count() {
        return domain(format!("m = {m} outside 1..={}", spec.vertex_count()));
    }
    Ok(ConnectedSubsets {
        walker: Walker::new(graph, m as u32, config.budget),
        n: spec.n(),
        m: m as u32,
        failed: false,
    })
}

/// Exact `xi_m` with one minimizing set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub n: u32,
    pub k: Option<u32>,
    pub m: u64,
    pub xi_exact: u64,
    pub witness: VertexSet,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    cut: u32,
    set: u64,
}

/// Minimum cut with both sides connected, for every size `1..=max_m`.
///
/// With `rooted` only sets containing vertex 0 are visited. Every family
/// member is a Cayley graph on `Z_2^n` (neighbors are `v ^ g` for a fixed
/// generator set), so `x -> x ^ a` is an automorphism and each connected set
/// has a translate through vertex 0 with the same cut.
fn best_cuts(
    graph: &MaskGraph,
    max_m: u32,
    budget: u64,
    rooted: bool,
) -> Result<Vec<Option<Best>>> {
    let mut best: Vec<Option<Best>> = vec![None; max_m as usize + 1];
    let mut walker = Walker::new(graph.clone(), max_m, budget);
    if rooted {
        walker.seed_end = 1;
    }
    for frame in walker {
        let frame = frame?;
        let cut = graph.degree * frame.size - frame.double_edges;
        let slot = &mut best[frame.size as usize];
        if slot.is_some_and(|b| b.cut <= cut) {
            continue;
        }
        let rest = graph.all & !frame.set;
        if rest != 0 && graph.is_connected(rest) {
            *slot = Some(Best {
                cut,
                set: frame.set,
            });
        }
    }
    Ok(best)
}

fn check_exhaustive(spec: GraphSpec, m: u64) -> Result<()> {
    if spec.n() > MAX_EXHAUSTIVE_DIM {
        return Err(Error::Resource(format!(
            "exhaustive oracle supports n <= {MAX_EXHAUSTIVE_DIM}, got {}",
            spec.n()
        )));
    }
    let half = spec.vertex_count() / 2;
    if m == 0 || m > half {
        return domain(format!("m = {m} outside 1..={half}"));
    }
    Ok(())
}

fn to_result(spec: GraphSpec, m: u64, best: Option<Best>) -> Result<OracleResult> {
    let best = best.ok_or_else(|| Error::Verification {
        h: m,
        reason: "no set with both sides connected".into(),
    })?;
    Ok(OracleResult {
        n: spec.n(),
        k: spec.k(),
        m,
        xi_exact: u64::from(best.cut),
        witness: VertexSet::from_mask(spec.n(), best.set)?,
    })
}

/// Exact `xi_m` by exhaustive search over connected sets.
pub fn xi_bruteforce(spec: GraphSpec, m: u64, config: OracleConfig) -> Result<OracleResult> {
    check_exhaustive(spec, m)?;
    let graph = MaskGraph::new(spec)?;
    let best = best_cuts(&graph, m as u32, config.budget, true)?;
    to_result(spec, m, best[m as usize])
}

/// Exact `xi_m` for every `1 <= m <= max_m` from a single enumeration.
pub fn xi_bruteforce_all(
    spec: GraphSpec,
    max_m: u64,
    config: OracleConfig,
) -> Result<Vec<OracleResult>> {
    check_exhaustive(spec, max_m)?;
    let graph = MaskGraph::new(spec)?;
    let best = best_cuts(&graph, max_m as u32, config.budget, true)?;
    (1..=max_m)
        .map(|m| to_result(spec, m, best[m as usize]))
        .collect()
}

/// Exact `lambda_h` as the minimum of exact `xi_m` over `h <= m <= 2^{n-1}`.
pub fn lambda_bruteforce(spec: GraphSpec, h: u64, config: OracleConfig) -> Result<u64> {
    let half = spec.vertex_count() / 2;
    check_exhaustive(spec, h)?;
    let all = xi_bruteforce_all(spec, half, config)?;
    Ok(all[h as usize - 1..]
        .iter()
        .map(|r| r.xi_exact)
        .min()
        .expect("h <= half"))
}

/// Exact `lambda_h` for every `1 <= h <= 2^{n-1}`.
pub fn lambda_bruteforce_all(spec: GraphSpec, config: OracleConfig) -> Result<Vec<u64>> {
    let half = spec.vertex_count() / 2;
    let all = xi_bruteforce_all(spec, half, config)?;
    let mut lambda: Vec<u64> = all.iter().map(|r| r.xi_exact).collect();
    for i in (0..lambda.len().saturating_sub(1)).rev() {
        lambda[i] = lambda[i].min(lambda[i + 1]);
    }
    Ok(lambda)
}

/// `2 * max |E(G[X])|` over `m`-sets: every `m`-subset for `n <= 4`, connected
/// `m`-subsets for `n = 5`.
pub fn ex_bruteforce(spec: GraphSpec, m: u64, config: OracleConfig) -> Result<u64> {
    if m == 0 || m > spec.vertex_count() {
        return domain(format!("m = {m} outside 1..={}", spec.vertex_count()));
    }
    let graph = MaskGraph::new(spec)?;
    if spec.n() <= MAX_ALL_SUBSETS_DIM {
        return Ok(u64::from(max_over_all_subsets(
            &graph,
            m as u32,
            config.budget,
        )?));
    }
    if spec.n() > MAX_EXHAUSTIVE_DIM {
        return Err(Error::Resource(format!(
            "ex oracle supports n <= {MAX_EXHAUSTIVE_DIM}, got {}",
            spec.n()
        )));
    }
    let mut best = 0;
    for frame in Walker::new(graph, m as u32, config.budget) {
        let frame = frame?;
        if frame.size == m as u32 {
            best = best.max(frame.double_edges);
        }
    }
    Ok(u64::from(best))
}

fn max_over_all_subsets(graph: &MaskGraph, m: u32, budget: u64) -> Result<u32> {
    let size = graph.size();
    if m == size {
        return Ok(graph.double_edges(graph.all));
    }
    // Walk all m-bit masks below 2^size in increasing order (Gosper's hack).
    let mut set = (1u64 << m) - 1;
    let mut best = 0;
    let mut steps = 0u64;
    while set >> size == 0 {
        steps += 1;
        if steps > budget {
            return Err(Error::Resource(format!(
                "subset scan exceeded its budget of {budget}"
            )));
        }
        best = best.max(graph.double_edges(set));
        let low = set & set.wrapping_neg();
        let ripple = set + low;
        set = (((ripple ^ set) >> 2) / low) | ripple;
    }
    Ok(best)
}

/// A sampled edge cut `[X, X̄]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSample {
    /// Size of the smaller side.
    pub h: u64,
    pub cut_size: u64,
    pub both_connected: bool,
}

/// Settings for [`sample_cuts`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub samples: u64,
    pub seed: u64,
    /// Attempts per sample before it is skipped.
    pub max_retries: u32,
}

impl SampleConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            max_retries: 64,
        }
    }
}

/// Seeded stream of random edge cuts with both sides connected.
///
/// Each attempt picks a target size uniformly in `1..2^n` and a start vertex
/// uniformly, then grows a connected set by adding a uniformly chosen
/// frontier vertex until the target size is reached. Attempts whose
/// complement is disconnected are retried up to `max_retries` times; after
/// that the sample slot is skipped. The generator is ChaCha8 seeded through
/// `SeedableRng::seed_from_u64`, so a seed reproduces the same stream on
/// every platform.
pub struct CutSampler {
    spec: GraphSpec,
    rng: ChaCha8Rng,
    remaining: u64,
    max_retries: u32,
}

impl CutSampler {
    fn grow(&mut self) -> VertexSet {
        let total = self.spec.vertex_count();
        let target = self.rng.gen_range(1..total);
        let start = self.rng.gen_range(0..total);
        let mut set = VertexSet::empty(self.spec.n()).expect("n checked on construction");
        let mut queued = set.clone();
        let mut frontier = Vec::new();
        set.insert(start);
        queued.insert(start);
        let mut v = start;
        while set.len() < target {
            for u in self.spec.neighbor_ids(v) {
                if !queued.contains(u) {
                    queued.insert(u);
                    frontier.push(u);
                }
            }
            let pick = self.rng.gen_range(0..frontier.len());
            v = frontier.swap_remove(pick);
            set.insert(v);
        }
        set
    }
}

impl Iterator for CutSampler {
    type Item = CutSample;

    fn next(&mut self) -> Option<CutSample> {
        while self.remaining > 0 {
            self.remaining -= 1;
            for _ in 0..=self.max_retries {
                let set = self.grow();
                let rest = set.complement();
                if !self
                    .spec
                    .is_connected_subset(&rest)
                    .expect("same dimension")
                {
                    continue;
                }
                let cut_size = self.spec.boundary_size(&set).expect("proper nonempty set");
                return Some(CutSample {
                    h: set.len().min(rest.len()),
                    cut_size,
                    both_connected: true,
                });
            }
        }
        None
    }
}

pub fn sample_cuts(spec: GraphSpec, config: SampleConfig) -> Result<CutSampler> {
    if spec.n() > MAX_SAMPLE_DIM {
        return Err(Error::Resource(format!(
            "sampling supports n <= {MAX_SAMPLE_DIM}, got {}",
            spec.n()
        )));
    }
    Ok(CutSampler {
        spec,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        remaining: config.samples,
        max_retries: config.max_retries,
    })
}
