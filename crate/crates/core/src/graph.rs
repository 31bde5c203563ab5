//! Graph families of 3-choice-critical graphs, graph cores, and
//! classification against the Erdős–Rubin–Taylor and Voigt characterizations.
//!
//! Vertex numbering of realized families is fixed: hubs first (`u = 0`,
//! `v = 1`, or the single shared vertex `0`), then internal path vertices
//! path by path in traversal order.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Symbolic description of a graph family member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FamilySpec {
    OddCycle(usize),
    EvenCycle(usize),
    /// Two even cycles of lengths `p` and `q` with one common vertex.
    TwoCyclesShared { p: usize, q: usize },
    /// Two vertex-disjoint even cycles joined by a path with `path_len` edges.
    TwoCyclesJoined {
        p: usize,
        q: usize,
        #[serde(rename = "pathLen")]
        path_len: usize,
    },
    /// Internally disjoint paths of the given lengths between two hubs.
    Theta(Vec<usize>),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::OddCycle(n) | FamilySpec::EvenCycle(n) => write!(f, "C{n}"),
            FamilySpec::TwoCyclesShared { p, q } => write!(f, "C{p}.C{q}"),
            FamilySpec::TwoCyclesJoined { p, q, path_len } => write!(f, "C{p}-P{path_len}-C{q}"),
            FamilySpec::Theta(ls) => {
                let parts: Vec<String> = ls.iter().map(|k| k.to_string()).collect();
                write!(f, "Theta({})", parts.join(","))
            }
        }
    }
}

impl FamilySpec {
    pub fn theta(lengths: &[usize]) -> Self {
        FamilySpec::Theta(lengths.to_vec())
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidSpec(msg));
        match self {
            FamilySpec::OddCycle(n) => {
                if *n < 3 || n % 2 == 0 {
                    return bad(format!("odd cycle length must be odd and >= 3, got {n}"));
                }
            }
            FamilySpec::EvenCycle(n) => {
                if *n < 4 || n % 2 == 1 {
                    return bad(format!("even cycle length must be even and >= 4, got {n}"));
                }
            }
            FamilySpec::TwoCyclesShared { p, q } | FamilySpec::TwoCyclesJoined { p, q, .. } => {
                for len in [p, q] {
                    if *len < 4 || len % 2 == 1 {
                        return bad(format!("cycle length must be even and >= 4, got {len}"));
                    }
                }
                if let FamilySpec::TwoCyclesJoined { path_len, .. } = self {
                    if *path_len < 1 {
                        return bad("connecting path needs at least one edge".into());
                    }
                }
            }
            FamilySpec::Theta(ls) => {
                if ls.len() < 3 {
                    return bad(format!("theta needs at least 3 paths, got {}", ls.len()));
                }
                if ls.contains(&0) {
                    return bad("theta path lengths must be >= 1".into());
                }
                if ls.iter().filter(|&&k| k == 1).count() > 1 {
                    return bad("at most one theta path may have length 1 (simple graph)".into());
                }
            }
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            FamilySpec::OddCycle(n) | FamilySpec::EvenCycle(n) => *n,
            FamilySpec::TwoCyclesShared { p, q } => p + q - 1,
            FamilySpec::TwoCyclesJoined { p, q, path_len } => p + q + path_len - 1,
            FamilySpec::Theta(ls) => 2 + ls.iter().map(|k| k - 1).sum::<usize>(),
        }
    }
}

/// Simple, undirected, connected graph with sorted neighbour lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph")]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawGraph {
    adjacency: Vec<Vec<usize>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawGraph> for Graph {
    type Error = GraphError;
    fn try_from(raw: RawGraph) -> Result<Self, GraphError> {
        Graph::from_adjacency(raw.adjacency, raw.labels)
    }
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::InvalidGraph("graph has no vertices".into()));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::InvalidGraph(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(GraphError::InvalidGraph(format!("self-loop at {a}")));
            }
            if adjacency[a].contains(&b) {
                return Err(GraphError::InvalidGraph(format!("parallel edge ({a},{b})")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        Self::from_adjacency(adjacency, None)
    }

    pub fn from_adjacency(
        mut adjacency: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GraphError> {
        let n = adjacency.len();
        if n == 0 {
            return Err(GraphError::InvalidGraph("graph has no vertices".into()));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(GraphError::InvalidGraph("label count differs from vertex count".into()));
            }
        }
        for nbrs in adjacency.iter_mut() {
            nbrs.sort_unstable();
        }
        for (v, nbrs) in adjacency.iter().enumerate() {
            for w in nbrs.windows(2) {
                if w[0] == w[1] {
                    return Err(GraphError::InvalidGraph(format!("parallel edge ({v},{})", w[0])));
                }
            }
            for &w in nbrs {
                if w >= n || w == v {
                    return Err(GraphError::InvalidGraph(format!("bad neighbour {w} of {v}")));
                }
                if adjacency[w].binary_search(&v).is_err() {
                    return Err(GraphError::InvalidGraph(format!("edge ({v},{w}) not symmetric")));
                }
            }
        }
        let g = Graph { adjacency, labels };
        if !g.is_connected() {
            return Err(GraphError::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// `n`-vertex path `0 - 1 - .. - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path is a valid graph")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle is a valid graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (a, nbrs) in self.adjacency.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        out
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.vertex_count()).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.vertex_count();
        let mut side = vec![None; n];
        side[0] = Some(false);
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            let s = side[v].unwrap();
            for &w in &self.adjacency[v] {
                match side[w] {
                    None => {
                        side[w] = Some(!s);
                        queue.push_back(w);
                    }
                    Some(t) if t == s => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Induced subgraph on `keep` (sorted, distinct), labelled by original label.
    fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let adjacency = keep
            .iter()
            .map(|&v| {
                self.adjacency[v]
                    .iter()
                    .filter(|&&w| index[w] != usize::MAX)
                    .map(|&w| index[w])
                    .collect()
            })
            .collect();
        let labels = Some(keep.iter().map(|&v| self.label(v)).collect());
        Graph { adjacency, labels }
    }
}

/// Builds the concrete graph of a family member.
pub fn realize(spec: &FamilySpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let n = spec.vertex_count();
    let mut b = Builder::default();
    match spec {
        FamilySpec::OddCycle(k) | FamilySpec::EvenCycle(k) => {
            return Ok(Graph::cycle(*k));
        }
        FamilySpec::TwoCyclesShared { p, q } => {
            let hub = b.vertex();
            b.path(hub, hub, *p);
            b.path(hub, hub, *q);
        }
        FamilySpec::TwoCyclesJoined { p, q, path_len } => {
            let u = b.vertex();
            let v = b.vertex();
            b.path(u, u, *p);
            b.path(u, v, *path_len);
            b.path(v, v, *q);
        }
        FamilySpec::Theta(ls) => {
            let u = b.vertex();
            let v = b.vertex();
            for &k in ls {
                b.path(u, v, k);
            }
        }
    }
    debug_assert_eq!(b.next, n);
    Graph::from_edges(n, &b.edges)
}

#[derive(Default)]
struct Builder {
    next: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.next += 1;
        self.next - 1
    }

    /// A path of `len` edges from `from` to `to` through fresh vertices.
    fn path(&mut self, from: usize, to: usize, len: usize) {
        let mut prev = from;
        for _ in 1..len {
            let v = self.vertex();
            self.edges.push((prev, v));
            prev = v;
        }
        self.edges.push((prev, to));
    }
}

/// Iterated deletion of degree-1 vertices, leaving a graph of minimum degree
/// at least 2 or a single vertex. Leaves are removed smallest id first; the
/// result is labelled with the original vertex labels.
pub fn core(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut remaining = n;
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(v) = leaves.pop_first() {
        if remaining <= 1 || !alive[v] || deg[v] != 1 {
            continue;
        }
        alive[v] = false;
        remaining -= 1;
        for &w in g.neighbours(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    leaves.insert(w);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    if keep.len() == n {
        return g.clone();
    }
    g.induced(&keep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CoreKind {
    K1,
    EvenCycle,
    /// `Θ_{2,2,2p}`.
    Theta222p,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Kind {
    TwoChoosable,
    ThreeChoiceCritical,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Classification {
    #[serde(rename_all = "camelCase")]
    TwoChoosable { core: CoreKind },
    /// `case` is the item number (1..=5) of Voigt's characterization.
    #[serde(rename_all = "camelCase")]
    ThreeChoiceCritical {
        case: u8,
        bipartite: bool,
        #[serde(rename = "known42Choosable")]
        known_42_choosable: bool,
    },
    Other,
}

impl Classification {
    pub fn kind(&self) -> Kind {
        match self {
            Classification::TwoChoosable { .. } => Kind::TwoChoosable,
            Classification::ThreeChoiceCritical { .. } => Kind::ThreeChoiceCritical,
            Classification::Other => Kind::Other,
        }
    }
}

fn critical(case: u8, bipartite: bool, known_42_choosable: bool) -> Classification {
    Classification::ThreeChoiceCritical { case, bipartite, known_42_choosable }
}

/// Symbolic classification of a family member. Invalid specs are `Other`.
pub fn classify(spec: &FamilySpec) -> Classification {
    if spec.validate().is_err() {
        return Classification::Other;
    }
    match spec {
        FamilySpec::OddCycle(_) => critical(1, false, false),
        FamilySpec::EvenCycle(_) => Classification::TwoChoosable { core: CoreKind::EvenCycle },
        FamilySpec::TwoCyclesJoined { .. } => critical(2, true, true),
        FamilySpec::TwoCyclesShared { .. } => critical(3, true, true),
        FamilySpec::Theta(ls) => {
            let mut ls = ls.clone();
            ls.sort_unstable();
            let all_even = ls.iter().all(|k| k % 2 == 0);
            let all_odd = ls.iter().all(|k| k % 2 == 1);
            match ls.as_slice() {
                [2, 2, _] if all_even => Classification::TwoChoosable { core: CoreKind::Theta222p },
                // Θ_{2r,2s,2t}, r >= 1, s,t > 1 (the smallest two are not both 2 here).
                [r, _, _] if all_even => critical(4, true, *r <= 2),
                // Θ_{2r+1,2s+1,2t+1}; validity rules out two paths of length 1.
                [r, _, _] if all_odd => critical(4, true, *r <= 2),
                [2, 2, 2, t] if t % 2 == 0 => critical(5, true, *t == 2),
                _ => Classification::Other,
            }
        }
    }
}

/// Classifies an arbitrary graph: compute its core, then match the core
/// against the recognised family shapes.
pub fn classify_graph(g: &Graph) -> Classification {
    let c = core(g);
    if c.vertex_count() == 1 {
        return Classification::TwoChoosable { core: CoreKind::K1 };
    }
    match recognize(&c) {
        Some(spec) => classify(&spec),
        None => Classification::Other,
    }
}

/// Recovers a [`FamilySpec`] from a graph whose shape is a cycle, a theta,
/// or two cycles sharing a vertex or joined by a path. Parity is not
/// checked here; callers validate the returned spec.
pub fn recognize(g: &Graph) -> Option<FamilySpec> {
    let n = g.vertex_count();
    if (0..n).any(|v| g.degree(v) < 2) {
        return None;
    }
    let hubs: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    if hubs.is_empty() {
        return Some(if n % 2 == 1 { FamilySpec::OddCycle(n) } else { FamilySpec::EvenCycle(n) });
    }
    let segments = hub_segments(g, &hubs);
    let loops_at = |h: usize| segments.iter().filter(|s| s.from == h && s.to == h).count();
    match hubs.as_slice() {
        [h] if g.degree(*h) == 4 && segments.len() == 2 && loops_at(*h) == 2 => {
            Some(FamilySpec::TwoCyclesShared { p: segments[0].len, q: segments[1].len })
        }
        [u, v] => {
            let between: Vec<usize> =
                segments.iter().filter(|s| s.from != s.to).map(|s| s.len).collect();
            if between.len() == segments.len() && g.degree(*u) == g.degree(*v) {
                return Some(FamilySpec::Theta(between));
            }
            if g.degree(*u) == 3 && g.degree(*v) == 3 && loops_at(*u) == 1 && loops_at(*v) == 1 && between.len() == 1 {
                let loop_len = |h| segments.iter().find(|s| s.from == h && s.to == h).unwrap().len;
                return Some(FamilySpec::TwoCyclesJoined {
                    p: loop_len(*u),
                    q: loop_len(*v),
                    path_len: between[0],
                });
            }
            None
        }
        _ => None,
    }
}

struct Segment {
    from: usize,
    to: usize,
    len: usize,
}

/// Maximal paths whose internal vertices have degree 2, between hubs.
fn hub_segments(g: &Graph, hubs: &[usize]) -> Vec<Segment> {
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut out = Vec::new();
    for &h in hubs {
        for &first in g.neighbours(h) {
            if used.contains(&(h, first)) {
                continue;
            }
            let (mut prev, mut cur, mut len) = (h, first, 1);
            while g.degree(cur) == 2 {
                let next = *g.neighbours(cur).iter().find(|&&w| w != prev).unwrap_or(&prev);
                prev = cur;
                cur = next;
                len += 1;
            }
            used.insert((h, first));
            used.insert((cur, prev));
            out.push(Segment { from: h, to: cur, len });
        }
    }
    out
}
