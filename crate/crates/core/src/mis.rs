//! The full line-intersection graph and exact maximum independent (skew) set
//! search.
//!
//! Vertices are numbered canonically, `v(s,k,i) = s·d² + k·d + i`; adjacency
//! rows are fixed-width bit vectors. The solver is a deterministic
//! branch-and-bound: branch on the highest-degree vertex among the remaining
//! candidates, prune with the smaller of a greedy clique-cover bound and the
//! per-stratum structural bound (each stratum can contribute at most
//! min(d, distinct rows, distinct columns-or-antidiagonals) lines).

use std::io::Write;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::line::{enumerate_lines, meets_raw, LineId};
use crate::residue::SurfaceParams;

/// Default cap on graph size: d ≤ 258, i.e. at most 3·258² vertices.
pub const DEFAULT_VERTEX_CAP: usize = 3 * 258 * 258;

#[derive(Debug, Clone)]
pub struct IntersectionGraph {
    d: u32,
    n: usize,
    words: usize,
    adj: Vec<u64>,
    edges: usize,
}

impl IntersectionGraph {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn are_adjacent(&self, u: usize, v: usize) -> bool {
        self.row(u)[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }
}

/// Builds the intersection graph under the default vertex cap, enforcing the
/// 4d−2 regularity invariant.
pub fn build_graph(params: &SurfaceParams) -> Result<IntersectionGraph> {
    build_graph_with_cap(params, DEFAULT_VERTEX_CAP)
}

pub fn build_graph_with_cap(params: &SurfaceParams, cap: usize) -> Result<IntersectionGraph> {
    let d = params.d();
    let n = 3 * (d as usize) * (d as usize);
    if n > cap {
        return Err(Error::ResourceLimit { vertices: n, cap });
    }
    let lines = enumerate_lines(params);
    let words = n.div_ceil(64);
    let mut adj = vec![0u64; n * words];
    for x in 0..n {
        for y in (x + 1)..n {
            if meets_raw(params, lines[x], lines[y]) {
                adj[x * words + y / 64] |= 1 << (y % 64);
                adj[y * words + x / 64] |= 1 << (x % 64);
            }
        }
    }
    let graph = IntersectionGraph {
        d,
        n,
        words,
        adj,
        edges: 0,
    };
    let mut total = 0usize;
    for v in 0..n {
        let deg = graph.degree(v);
        assert_eq!(
            deg,
            (4 * d - 2) as usize,
            "regularity violated at vertex {v}"
        );
        total += deg;
    }
    Ok(IntersectionGraph {
        edges: total / 2,
        ..graph
    })
}

/// The stratification bound 3d on the number of pairwise skew lines.
pub fn structural_upper_bound(params: &SurfaceParams) -> u32 {
    3 * params.d()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Optimal,
    LowerBoundOnly,
    Timeout,
}

impl std::fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchStatus::Optimal => "optimal",
            SearchStatus::LowerBoundOnly => "lower_bound_only",
            SearchStatus::Timeout => "timeout",
        })
    }
}

impl std::str::FromStr for SearchStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<SearchStatus> {
        match s {
            "optimal" => Ok(SearchStatus::Optimal),
            "lower_bound_only" => Ok(SearchStatus::LowerBoundOnly),
            "timeout" => Ok(SearchStatus::Timeout),
            other => Err(Error::Parse(format!("unknown status `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MisOptions {
    pub time_limit: Duration,
    /// Optional search-tree node budget; exceeding it yields
    /// `LowerBoundOnly` rather than `Timeout`.
    pub node_limit: Option<u64>,
    /// A known independent set to seed the search; the result is never
    /// smaller than the seed.
    pub seed: Option<Vec<usize>>,
    /// Single-threaded canonical-order search; kept for interface stability,
    /// the solver currently has no nondeterministic mode.
    pub deterministic: bool,
}

impl Default for MisOptions {
    fn default() -> Self {
        MisOptions {
            time_limit: Duration::from_secs(900),
            node_limit: None,
            seed: None,
            deterministic: true,
        }
    }
}

/// A claimed independent set with provenance: how the search ended and how
/// much work it did.
#[derive(Debug, Clone)]
pub struct Certificate {
    vertices: Vec<usize>,
    status: SearchStatus,
    elapsed: Duration,
    nodes: u64,
}

impl Certificate {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn status(&self) -> SearchStatus {
        self.status
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// The members as lines, canonical order.
    pub fn to_family(&self, d: u32) -> Result<Family> {
        let lines = self
            .vertices
            .iter()
            .map(|&v| LineId::from_vertex_id(d, v))
            .collect::<Result<Vec<_>>>()?;
        Family::new(d, lines)
    }

    /// Certificate file: `size <k> status <s>`, then one `s k i` line per
    /// member in canonical order.
    pub fn write_to(&self, d: u32, w: &mut impl Write) -> Result<()> {
        writeln!(w, "size {} status {}", self.size(), self.status)?;
        for &v in &self.vertices {
            writeln!(w, "{}", LineId::from_vertex_id(d, v)?)?;
        }
        Ok(())
    }
}

/// True iff the claimed vertex set is pairwise non-adjacent (duplicates
/// rejected); independent of how the certificate was produced.
pub fn verify_certificate(graph: &IntersectionGraph, cert: &Certificate) -> Result<bool> {
    verify_vertex_set(graph, cert.vertices())
}

fn verify_vertex_set(graph: &IntersectionGraph, vs: &[usize]) -> Result<bool> {
    for &v in vs {
        if v >= graph.vertex_count() {
            return Err(Error::InvalidCertificate(format!(
                "vertex {v} out of range for n={}",
                graph.vertex_count()
            )));
        }
    }
    for (x, &u) in vs.iter().enumerate() {
        for &v in &vs[x + 1..] {
            if u == v {
                return Err(Error::InvalidCertificate(format!("duplicate vertex {u}")));
            }
            if graph.are_adjacent(u, v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Standard DIMACS edge format, deterministic byte-for-byte: `p edge n m`,
/// then `e u v` with u < v, 1-based.
pub fn export_dimacs(graph: &IntersectionGraph, sink: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        sink,
        "p edge {} {}",
        graph.vertex_count(),
        graph.edge_count()
    )?;
    for u in 0..graph.vertex_count() {
        for v in (u + 1)..graph.vertex_count() {
            if graph.are_adjacent(u, v) {
                writeln!(sink, "e {} {}", u + 1, v + 1)?;
            }
        }
    }
    Ok(())
}

/// Exact maximum independent set by branch-and-bound. A time-limit expiry is
/// reported in the status, not as an error.
pub fn max_independent_set(graph: &IntersectionGraph, opts: &MisOptions) -> Result<Certificate> {
    let start = Instant::now();
    let mut best: Vec<usize> = match &opts.seed {
        Some(seed) => {
            if !verify_vertex_set(graph, seed)? {
                return Err(Error::InvalidCertificate(
                    "seed set is not independent".into(),
                ));
            }
            let mut s = seed.clone();
            s.sort_unstable();
            s
        }
        None => Vec::new(),
    };

    let mut searcher = Searcher {
        graph,
        deadline: start + opts.time_limit,
        node_limit: opts.node_limit.unwrap_or(u64::MAX),
        nodes: 0,
        stopped: None,
        current: Vec::new(),
        scratch_rows: vec![0u64; graph.d() as usize],
        scratch_cols: vec![0u64; graph.d() as usize],
        stamp: 0,
    };
    let full: Vec<u64> = {
        let mut v = vec![u64::MAX; graph.words];
        let extra = graph.words * 64 - graph.n;
        if extra > 0 {
            v[graph.words - 1] = u64::MAX >> extra;
        }
        v
    };
    searcher.search(full, &mut best);

    // `best` is in discovery order; certificates are canonical.
    best.sort_unstable();
    Ok(Certificate {
        vertices: best,
        status: searcher.stopped.unwrap_or(SearchStatus::Optimal),
        elapsed: start.elapsed(),
        nodes: searcher.nodes,
    })
}

struct Searcher<'g> {
    graph: &'g IntersectionGraph,
    deadline: Instant,
    node_limit: u64,
    nodes: u64,
    stopped: Option<SearchStatus>,
    current: Vec<usize>,
    scratch_rows: Vec<u64>,
    scratch_cols: Vec<u64>,
    stamp: u64,
}

fn first_bit(set: &[u64]) -> Option<usize> {
    set.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn popcount(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

impl<'g> Searcher<'g> {
    fn search(&mut self, cand: Vec<u64>, best: &mut Vec<usize>) {
        if self.stopped.is_some() {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit {
            self.stopped = Some(SearchStatus::LowerBoundOnly);
            return;
        }
        if self.nodes.is_multiple_of(1024) && Instant::now() >= self.deadline {
            self.stopped = Some(SearchStatus::Timeout);
            return;
        }

        // `current` is always independent, so any strict improvement counts
        // immediately (matters for honest best-found on timeout).
        if self.current.len() > best.len() {
            *best = self.current.clone();
        }
        let count = popcount(&cand);
        if count == 0 {
            return;
        }
        if self.current.len() + count <= best.len() {
            return;
        }
        let bound = self
            .clique_cover_bound(&cand, best.len().saturating_sub(self.current.len()))
            .min(self.stratum_bound(&cand));
        if self.current.len() + bound <= best.len() {
            return;
        }

        // Branch on the highest-degree candidate (lowest id on ties).
        let words = self.graph.words;
        let mut pick = usize::MAX;
        let mut pick_deg = usize::MAX;
        let mut seen = 0usize;
        for w in 0..words {
            let mut bits = cand[w];
            while bits != 0 {
                let v = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let row = self.graph.row(v);
                let deg: usize = row
                    .iter()
                    .zip(&cand)
                    .map(|(r, c)| (r & c).count_ones() as usize)
                    .sum();
                if pick == usize::MAX || deg > pick_deg {
                    pick = v;
                    pick_deg = deg;
                }
                seen += 1;
            }
        }
        debug_assert_eq!(seen, count);

        // Include `pick`.
        let mut included = cand.clone();
        included[pick / 64] &= !(1u64 << (pick % 64));
        for (c, r) in included.iter_mut().zip(self.graph.row(pick)) {
            *c &= !r;
        }
        self.current.push(pick);
        self.search(included, best);
        self.current.pop();

        // Exclude `pick`.
        let mut excluded = cand;
        excluded[pick / 64] &= !(1u64 << (pick % 64));
        self.search(excluded, best);
    }

    /// Greedy clique cover of the candidate set; its size bounds any
    /// independent subset. Stops early once the bound exceeds `enough`.
    fn clique_cover_bound(&self, cand: &[u64], enough: usize) -> usize {
        let mut rest = cand.to_vec();
        let mut cliques = 0usize;
        while let Some(v) = first_bit(&rest) {
            cliques += 1;
            if cliques > enough {
                return cliques;
            }
            rest[v / 64] &= !(1u64 << (v % 64));
            let mut common: Vec<u64> = self
                .graph
                .row(v)
                .iter()
                .zip(&rest)
                .map(|(r, c)| r & c)
                .collect();
            while let Some(u) = first_bit(&common) {
                rest[u / 64] &= !(1u64 << (u % 64));
                common[u / 64] &= !(1u64 << (u % 64));
                for (c, r) in common.iter_mut().zip(self.graph.row(u)) {
                    *c &= r;
                }
            }
        }
        cliques
    }

    /// Σ over strata of min(distinct rows, distinct columns/antidiagonals):
    /// a skew set repeats neither invariant within a stratum.
    fn stratum_bound(&mut self, cand: &[u64]) -> usize {
        let d = self.graph.d() as usize;
        self.stamp += 1;
        let stamp = self.stamp;
        let mut bound = 0usize;
        let mut rows = [0usize; 3];
        let mut cols = [0usize; 3];
        for (w, &word) in cand.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let v = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let s = v / (d * d);
                let k = (v / d) % d;
                let i = v % d;
                // Rows are `i`; the second repeated invariant is `k` for ℒ⁰
                // and the anti-diagonal k+i for ℒ¹/ℒ².
                let col = if s == 0 { k } else { (k + i) % d };
                // Vertex ids are stratum-major, so marks for one stratum are
                // never interleaved with another's and one scratch cell per
                // index suffices.
                let mark = stamp * 3 + s as u64;
                if self.scratch_rows[i] != mark {
                    self.scratch_rows[i] = mark;
                    rows[s] += 1;
                }
                if self.scratch_cols[col] != mark {
                    self.scratch_cols[col] = mark;
                    cols[s] += 1;
                }
            }
        }
        for s in 0..3 {
            bound += rows[s].min(cols[s]);
        }
        bound
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::construct_builtin;

    fn p(d: u32) -> SurfaceParams {
        SurfaceParams::canonical(d).unwrap()
    }

    #[test]
    fn graph_counts() {
        for (d, edges) in [(3u32, 135usize), (4, 336), (5, 675)] {
            let g = build_graph(&p(d)).unwrap();
            assert_eq!(g.vertex_count(), 3 * (d as usize) * (d as usize));
            assert_eq!(g.edge_count(), edges);
            for v in 0..g.vertex_count() {
                assert_eq!(g.degree(v), (4 * d - 2) as usize);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_graph_with_cap(&p(5), 74),
            Err(Error::ResourceLimit {
                vertices: 75,
                cap: 74
            })
        ));
    }

    #[test]
    fn upper_bound() {
        assert_eq!(structural_upper_bound(&p(5)), 15);
        assert_eq!(structural_upper_bound(&p(3)), 9);
        assert_eq!(structural_upper_bound(&p(12)), 36);
    }

    #[test]
    fn solver_small_degrees() {
        let g3 = build_graph(&p(3)).unwrap();
        let cert = max_independent_set(&g3, &MisOptions::default()).unwrap();
        assert_eq!(cert.size(), 6);
        assert_eq!(cert.status(), SearchStatus::Optimal);
        assert!(verify_certificate(&g3, &cert).unwrap());
        let fam = cert.to_family(3).unwrap();
        let rep = crate::family::is_skew_family(&p(3), &fam).unwrap();
        assert!(rep.is_skew);

        let g4 = build_graph(&p(4)).unwrap();
        let cert = max_independent_set(&g4, &MisOptions::default()).unwrap();
        assert_eq!(cert.size(), 12);
        assert_eq!(cert.status(), SearchStatus::Optimal);
    }

    /// Independent exhaustive oracle on the d=3 graph: straight enumeration
    /// with no bounds beyond candidate count.
    #[test]
    fn d3_exhaustive_enumeration_agrees() {
        let g = build_graph(&p(3)).unwrap();
        let n = g.vertex_count();
        fn rec(g: &IntersectionGraph, v: usize, chosen: &mut Vec<usize>, best: &mut usize) {
            if v == g.vertex_count() {
                *best = (*best).max(chosen.len());
                return;
            }
            if chosen.len() + (g.vertex_count() - v) <= *best {
                return;
            }
            if chosen.iter().all(|&u| !g.are_adjacent(u, v)) {
                chosen.push(v);
                rec(g, v + 1, chosen, best);
                chosen.pop();
            }
            rec(g, v + 1, chosen, best);
        }
        let mut best = 0usize;
        rec(&g, 0, &mut Vec::new(), &mut best);
        assert_eq!(best, 6);
        assert_eq!(n, 27);
    }

    #[test]
    fn seeded_search_returns_at_least_the_seed() {
        let g = build_graph(&p(5)).unwrap();
        let seed: Vec<usize> = construct_builtin(5)
            .unwrap()
            .lines()
            .iter()
            .map(|l| l.vertex_id(5))
            .collect();
        let opts = MisOptions {
            seed: Some(seed.clone()),
            ..Default::default()
        };
        let cert = max_independent_set(&g, &opts).unwrap();
        assert_eq!(cert.size(), 13);
        assert_eq!(cert.status(), SearchStatus::Optimal);
        // An invalid seed is rejected.
        let opts = MisOptions {
            seed: Some(vec![0, 1]),
            ..Default::default()
        };
        assert!(max_independent_set(&g, &opts).is_err());
    }

    #[test]
    fn node_limit_gives_lower_bound_status() {
        let g = build_graph(&p(5)).unwrap();
        let opts = MisOptions {
            node_limit: Some(3),
            ..Default::default()
        };
        let cert = max_independent_set(&g, &opts).unwrap();
        assert_eq!(cert.status(), SearchStatus::LowerBoundOnly);
        assert!(verify_certificate(&g, &cert).unwrap());
    }

    #[test]
    fn certificate_verification_examples() {
        let g = build_graph(&p(5)).unwrap();
        let vs: Vec<usize> = construct_builtin(5)
            .unwrap()
            .lines()
            .iter()
            .map(|l| l.vertex_id(5))
            .collect();
        let ok = Certificate {
            vertices: vs.clone(),
            status: SearchStatus::Optimal,
            elapsed: Duration::ZERO,
            nodes: 0,
        };
        assert!(verify_certificate(&g, &ok).unwrap());
        // Add a neighbor of a member: no longer independent.
        let neighbor = (0..g.vertex_count())
            .find(|&v| !vs.contains(&v) && g.are_adjacent(vs[0], v))
            .unwrap();
        let mut bad_vs = vs.clone();
        bad_vs.push(neighbor);
        let bad = Certificate {
            vertices: bad_vs,
            ..ok.clone()
        };
        assert!(!verify_certificate(&g, &bad).unwrap());
        let empty = Certificate {
            vertices: vec![],
            ..ok.clone()
        };
        assert!(verify_certificate(&g, &empty).unwrap());
        let out = Certificate {
            vertices: vec![75],
            ..ok
        };
        assert!(verify_certificate(&g, &out).is_err());
    }

    #[test]
    fn dimacs_export() {
        let g5 = build_graph(&p(5)).unwrap();
        let mut buf = Vec::new();
        export_dimacs(&g5, &mut buf).unwrap();
        assert!(String::from_utf8(buf)
            .unwrap()
            .starts_with("p edge 75 675\n"));

        let g = build_graph(&p(3)).unwrap();
        let mut buf = Vec::new();
        export_dimacs(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("p edge 27 135"));
        assert_eq!(text.lines().count(), 136);
        // Every edge line is `e u v` with 1-based u < v.
        for line in text.lines().skip(1) {
            let mut it = line.split(' ');
            assert_eq!(it.next(), Some("e"));
            let u: usize = it.next().unwrap().parse().unwrap();
            let v: usize = it.next().unwrap().parse().unwrap();
            assert!(1 <= u && u < v && v <= 27);
        }
    }

    #[test]
    fn certificate_file_format() {
        let g = build_graph(&p(3)).unwrap();
        let cert = max_independent_set(&g, &MisOptions::default()).unwrap();
        let mut buf = Vec::new();
        cert.write_to(3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("size 6 status optimal\n"));
        assert_eq!(text.lines().count(), 7);
        // Members in canonical order.
        let members: Vec<LineId> = text
            .lines()
            .skip(1)
            .map(|l| l.parse().unwrap())
            .collect();
        assert!(members.windows(2).all(|w| w[0] < w[1]));
    }

    // The unseeded d=5 search needs thousands of nodes, so a zero budget is
    // guaranteed to trip a deadline check before completion.
    #[test]
    fn zero_time_limit_times_out_honestly() {
        let g = build_graph(&p(5)).unwrap();
        let opts = MisOptions {
            time_limit: Duration::ZERO,
            ..Default::default()
        };
        let cert = max_independent_set(&g, &opts).unwrap();
        assert_eq!(cert.status(), SearchStatus::Timeout);
        assert!(verify_certificate(&g, &cert).unwrap());
        assert!(cert.size() <= structural_upper_bound(&p(5)) as usize);
    }
}
