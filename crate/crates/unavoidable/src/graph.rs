//! Simple undirected graphs over dense ids `0..n`.

use std::collections::{BTreeSet, VecDeque};
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    InvalidVertex { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
}

/// Immutable simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
}

/// A sequence of distinct vertices, consecutive entries adjacent in some host.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexPath(pub Vec<Vertex>);

impl Deref for VertexPath {
    type Target = [Vertex];
    fn deref(&self) -> &[Vertex] {
        &self.0
    }
}

impl From<Vec<Vertex>> for VertexPath {
    fn from(v: Vec<Vertex>) -> Self {
        VertexPath(v)
    }
}

impl VertexPath {
    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn reversed(&self) -> VertexPath {
        VertexPath(self.0.iter().rev().copied().collect())
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }

    /// True if the vertices are distinct and consecutive ones are adjacent in `g`.
    pub fn is_path_in(&self, g: &Graph) -> bool {
        let mut seen = BTreeSet::new();
        self.0.iter().all(|&v| v < g.n() && seen.insert(v))
            && self.0.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list, deduplicating repeated and reversed pairs.
    pub fn from_edge_list(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Edges of the subgraph induced by `s`, as sorted `(u, v)` pairs with `u < v`.
    pub fn induced_edges(&self, s: &[Vertex]) -> BTreeSet<(Vertex, Vertex)> {
        let set: BTreeSet<Vertex> = s.iter().copied().collect();
        let mut out = BTreeSet::new();
        for &u in &set {
            for &v in &self.adj[u] {
                if u < v && set.contains(&v) {
                    out.insert((u, v));
                }
            }
        }
        out
    }

    /// Induced subgraph on `s`. The returned vector maps new ids to old ids;
    /// new ids follow the sorted order of `s`.
    pub fn induced_subgraph(&self, s: &[Vertex]) -> Result<(Graph, Vec<Vertex>), GraphError> {
        let mut old: Vec<Vertex> = s.to_vec();
        old.sort_unstable();
        old.dedup();
        if let Some(&bad) = old.iter().find(|&&v| v >= self.n) {
            return Err(GraphError::InvalidVertex { vertex: bad, n: self.n });
        }
        let mut new_of = vec![usize::MAX; self.n];
        for (i, &v) in old.iter().enumerate() {
            new_of[v] = i;
        }
        let adj = old
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (new_of[w] != usize::MAX).then_some(new_of[w]))
                    .collect()
            })
            .collect();
        Ok((Graph { n: old.len(), adj }, old))
    }

    /// Induced subgraph on the complement of `removed`.
    pub fn without_vertices(&self, removed: &[Vertex]) -> (Graph, Vec<Vertex>) {
        let drop: BTreeSet<Vertex> = removed.iter().copied().collect();
        let keep: Vec<Vertex> = (0..self.n).filter(|v| !drop.contains(v)).collect();
        self.induced_subgraph(&keep).expect("kept ids are in range")
    }

    /// Same ids, keeping only edges whose ends both satisfy `keep`.
    pub fn restricted(&self, keep: &[bool]) -> Graph {
        let adj = (0..self.n)
            .map(|v| if keep[v] { self.adj[v].iter().copied().filter(|&w| keep[w]).collect() } else { Vec::new() })
            .collect();
        Graph { n: self.n, adj }
    }

    /// Breadth-first distances from `sources`, never entering `blocked`.
    pub fn bfs_distances(&self, sources: &[Vertex], blocked: &[bool]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() && !blocked.get(s).copied().unwrap_or(false) {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() && !blocked.get(w).copied().unwrap_or(false) {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().len() == 1
    }

    /// Articulation points via an iterative low-point DFS.
    pub fn cut_vertices(&self) -> BTreeSet<Vertex> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut cut = BTreeSet::new();
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            let mut root_children = 0;
            // (vertex, parent, next neighbor index)
            let mut stack: Vec<(Vertex, Vertex, usize)> = vec![(root, usize::MAX, 0)];
            while let Some(top) = stack.last_mut() {
                let (u, parent, idx) = *top;
                if idx < self.adj[u].len() {
                    top.2 += 1;
                    let w = self.adj[u][idx];
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        if u == root {
                            root_children += 1;
                        }
                        stack.push((w, u, 0));
                    } else if w != parent {
                        low[u] = low[u].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if parent != usize::MAX {
                        low[parent] = low[parent].min(low[u]);
                        if parent != root && low[u] >= disc[parent] {
                            cut.insert(parent);
                        }
                    }
                }
            }
            if root_children >= 2 {
                cut.insert(root);
            }
        }
        cut
    }

    pub fn is_two_connected(&self) -> bool {
        self.n >= 3 && self.is_connected() && self.cut_vertices().is_empty()
    }

    /// Lexicographically smallest among the shortest paths from `sources` to
    /// `targets` whose vertices all avoid `forbidden`.
    pub fn shortest_path(
        &self,
        sources: &[Vertex],
        targets: &[Vertex],
        forbidden: &[Vertex],
    ) -> Option<VertexPath> {
        let mut blocked = vec![false; self.n];
        for &f in forbidden {
            blocked[f] = true;
        }
        let dist = self.bfs_distances(targets, &blocked);
        let start = sources
            .iter()
            .copied()
            .filter(|&s| !blocked[s])
            .filter_map(|s| dist[s].map(|d| (d, s)))
            .min()?;
        let mut path = vec![start.1];
        let mut cur = start.1;
        let mut d = start.0;
        while d > 0 {
            cur = *self.adj[cur]
                .iter()
                .find(|&&w| dist[w] == Some(d - 1))
                .expect("bfs layer has a predecessor");
            path.push(cur);
            d -= 1;
        }
        Some(VertexPath(path))
    }

    /// Maximum number of `a`–`b` paths that are pairwise disjoint outside `a ∪ b`.
    /// Vertices of `a ∪ b` are uncapacitated; each direct `a`–`b` edge counts once.
    pub fn disjoint_path_count(&self, a: &[Vertex], b: &[Vertex]) -> usize {
        let n = self.n;
        let big = n + 1;
        let mut terminal = vec![false; n];
        for &v in a.iter().chain(b) {
            terminal[v] = true;
        }
        let source = 2 * n;
        let sink = 2 * n + 1;
        let mut net = FlowNetwork::new(2 * n + 2);
        for v in 0..n {
            net.add_edge(2 * v, 2 * v + 1, if terminal[v] { big } else { 1 });
            for &w in &self.adj[v] {
                net.add_edge(2 * v + 1, 2 * w, 1);
            }
        }
        for &v in a {
            net.add_edge(source, 2 * v, big);
        }
        for &v in b {
            net.add_edge(2 * v + 1, sink, big);
        }
        net.max_flow(source, sink)
    }

    pub fn is_induced_path(&self, p: &[Vertex]) -> bool {
        if !VertexPath(p.to_vec()).is_path_in(self) {
            return false;
        }
        self.induced_edges(p).len() + 1 == p.len().max(1)
    }

    /// True iff `c` (listed in cyclic order, length ≥ 3) induces exactly a cycle.
    pub fn is_induced_cycle(&self, c: &[Vertex]) -> bool {
        if c.len() < 3 || !VertexPath(c.to_vec()).is_path_in(self) {
            return false;
        }
        self.has_edge(c[0], c[c.len() - 1]) && self.induced_edges(c).len() == c.len()
    }
}

struct FlowEdge {
    to: usize,
    cap: usize,
}

/// Unit-scale max-flow by breadth-first augmenting paths.
struct FlowNetwork {
    edges: Vec<FlowEdge>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { edges: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: usize) {
        self.out[from].push(self.edges.len());
        self.edges.push(FlowEdge { to, cap });
        self.out[to].push(self.edges.len());
        self.edges.push(FlowEdge { to: from, cap: 0 });
    }

    fn max_flow(&mut self, s: usize, t: usize) -> usize {
        let mut flow = 0;
        loop {
            let mut via = vec![usize::MAX; self.out.len()];
            let mut seen = vec![false; self.out.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &e in &self.out[u] {
                    let to = self.edges[e].to;
                    if self.edges[e].cap > 0 && !seen[to] {
                        seen[to] = true;
                        via[to] = e;
                        queue.push_back(to);
                    }
                }
            }
            if !seen[t] {
                return flow;
            }
            let mut bottleneck = usize::MAX;
            let mut v = t;
            while v != s {
                let e = via[v];
                bottleneck = bottleneck.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while v != s {
                let e = via[v];
                self.edges[e].cap -= bottleneck;
                self.edges[e ^ 1].cap += bottleneck;
                v = self.edges[e ^ 1].to;
            }
            flow += bottleneck;
        }
    }
}

/// Standard small graphs used by tests, generators, and the CLI.
pub mod named {
    use super::{Graph, Vertex};

    fn build(n: usize, edges: Vec<(Vertex, Vertex)>) -> Graph {
        Graph::from_edge_list(n, &edges).expect("named graph edges are valid")
    }

    pub fn path(n: usize) -> Graph {
        build(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    pub fn cycle(n: usize) -> Graph {
        build(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn complete(n: usize) -> Graph {
        build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect())
    }

    /// Parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        build(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))).collect())
    }

    /// Star with centre 0.
    pub fn star(leaves: usize) -> Graph {
        complete_bipartite(1, leaves)
    }

    /// Rim `0..rim` as a cycle, hub `rim`.
    pub fn wheel(rim: usize) -> Graph {
        let mut e: Vec<_> = (0..rim).map(|i| (i, (i + 1) % rim)).collect();
        e.extend((0..rim).map(|i| (i, rim)));
        build(rim + 1, e)
    }

    /// `2 × len` grid: top row `0..len`, bottom row `len..2len`, rung `i – len+i`.
    pub fn ladder_grid(len: usize) -> Graph {
        let mut e = Vec::new();
        for i in 0..len {
            e.push((i, len + i));
            if i + 1 < len {
                e.push((i, i + 1));
                e.push((len + i, len + i + 1));
            }
        }
        build(2 * len, e)
    }

    pub fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        build(10, e)
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn brute_two_connected(g: &Graph) -> bool {
        g.n() >= 3 && (0..g.n()).all(|v| g.without_vertices(&[v]).0.is_connected())
    }

    #[test]
    fn edge_list_construction() {
        assert_eq!(Graph::from_edge_list(3, &[(0, 1), (1, 2), (2, 0)]).unwrap(), cycle(3));
        assert_eq!(Graph::from_edge_list(2, &[(0, 1), (1, 0)]).unwrap().edge_count(), 1);
        assert_eq!(
            Graph::from_edge_list(4, &[(0, 4)]),
            Err(GraphError::InvalidVertex { vertex: 4, n: 4 })
        );
        assert_eq!(Graph::from_edge_list(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
    }

    #[test]
    fn induced_subgraph_examples() {
        let (h, map) = complete(4).induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(h, cycle(3));
        assert_eq!(map, vec![0, 1, 2]);
        assert_eq!(cycle(5).induced_subgraph(&[0, 2]).unwrap().0.edge_count(), 0);
        assert_eq!(cycle(4).induced_subgraph(&[0, 1, 2]).unwrap().0, path(3));
        assert!(cycle(4).induced_subgraph(&[7]).is_err());
    }

    #[test]
    fn two_connectivity_examples() {
        let bowtie = Graph::from_edge_list(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert!(cycle(4).is_two_connected());
        assert!(!path(3).is_two_connected());
        assert!(!bowtie.is_two_connected());
        assert_eq!(path(3).cut_vertices().into_iter().collect::<Vec<_>>(), vec![1]);
        assert!(cycle(5).cut_vertices().is_empty());
        assert_eq!(bowtie.cut_vertices().into_iter().collect::<Vec<_>>(), vec![2]);
        for g in [complete(4), petersen(), wheel(6), ladder_grid(5), bowtie, path(5)] {
            assert_eq!(g.is_two_connected(), brute_two_connected(&g));
        }
    }

    #[test]
    fn shortest_path_examples() {
        let c6 = cycle(6);
        assert_eq!(c6.shortest_path(&[0], &[3], &[]).unwrap().0, vec![0, 1, 2, 3]);
        assert_eq!(c6.shortest_path(&[0], &[3], &[1, 2]).unwrap().0, vec![0, 5, 4, 3]);
        let two = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(two.shortest_path(&[0], &[3], &[]).is_none());
        assert_eq!(c6.shortest_path(&[2], &[2], &[]).unwrap().0, vec![2]);
    }

    #[test]
    fn disjoint_path_examples() {
        assert_eq!(complete(4).disjoint_path_count(&[0], &[3]), 3);
        assert_eq!(path(3).disjoint_path_count(&[0], &[2]), 1);
        assert_eq!(cycle(4).disjoint_path_count(&[0], &[2]), 2);
        assert_eq!(ladder_grid(6).disjoint_path_count(&[0, 1, 2], &[6, 7, 8]), 4);
    }

    #[test]
    fn induced_path_and_cycle_examples() {
        assert!(cycle(5).is_induced_cycle(&[0, 1, 2, 3, 4]));
        assert!(!complete(4).is_induced_path(&[0, 1, 2]));
        let mut e: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        e.push((0, 3));
        let chorded = Graph::from_edge_list(6, &e).unwrap();
        assert!(!chorded.is_induced_cycle(&[0, 1, 2, 3, 4, 5]));
        assert!(path(4).is_induced_path(&[0, 1, 2, 3]));
        assert!(path(1).is_induced_path(&[0]));
    }
}
