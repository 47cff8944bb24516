//! Ramsey extraction, the connected trichotomy, and the König dichotomy at
//! finite scale.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{Certificate, ConnectedWitness};
use crate::graph::{Graph, Vertex, VertexPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RamseyKind {
    Clique,
    IndependentSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyWitness {
    pub kind: RamseyKind,
    pub vertices: Vec<Vertex>,
}

impl RamseyWitness {
    pub fn verify(&self, g: &Graph) -> bool {
        let want = self.kind == RamseyKind::Clique;
        self.vertices.iter().enumerate().all(|(i, &u)| {
            self.vertices[i + 1..].iter().all(|&v| u != v && g.has_edge(u, v) == want)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KonigWitness {
    HighDegree { vertex: Vertex, degree: usize },
    LongInducedPath { path: VertexPath },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("order must be at least 1")]
    BadOrder,
    #[error("graph is not connected")]
    NotConnected,
}

/// `binomial(s + t − 2, s − 1)`: enough vertices to force `K_s` or an independent `t`-set.
pub fn ramsey_bound(s: usize, t: usize) -> usize {
    if s == 0 || t == 0 {
        return 0;
    }
    let (n, k) = (s + t - 2, (s - 1).min(t - 1));
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub fn ramsey_extract(g: &Graph, r: usize) -> Result<Option<RamseyWitness>, RamseyError> {
    if r == 0 {
        return Err(RamseyError::BadOrder);
    }
    let all: Vec<Vertex> = (0..g.n()).collect();
    Ok(pivot_extract(g, &all, r, r))
}

/// Pivot search for a clique of size `s` or an independent set of size `t`
/// inside `pool`. Each pivot is the smallest remaining id; the branch taken is
/// the one still large enough to guarantee success, otherwise the larger side
/// (ties go to the neighborhood).
pub fn pivot_extract(g: &Graph, pool: &[Vertex], s: usize, t: usize) -> Option<RamseyWitness> {
    if s == 0 || t == 0 {
        return None;
    }
    let mut pool: Vec<Vertex> = pool.to_vec();
    pool.sort_unstable();
    pool.dedup();
    let (mut need_c, mut need_i) = (s, t);
    let mut clique = Vec::new();
    let mut indep = Vec::new();
    while let Some((&pivot, rest)) = pool.split_first() {
        if need_c == 1 {
            clique.push(pivot);
            return Some(RamseyWitness { kind: RamseyKind::Clique, vertices: sorted(clique) });
        }
        if need_i == 1 {
            indep.push(pivot);
            return Some(RamseyWitness { kind: RamseyKind::IndependentSet, vertices: sorted(indep) });
        }
        let (nbrs, non): (Vec<Vertex>, Vec<Vertex>) = rest.iter().partition(|&&v| g.has_edge(pivot, v));
        let go_in = if nbrs.len() >= ramsey_bound(need_c - 1, need_i) {
            true
        } else if non.len() >= ramsey_bound(need_c, need_i - 1) {
            false
        } else {
            nbrs.len() >= non.len()
        };
        if go_in {
            clique.push(pivot);
            need_c -= 1;
            pool = nbrs;
        } else {
            indep.push(pivot);
            need_i -= 1;
            pool = non;
        }
    }
    None
}

fn sorted(mut v: Vec<Vertex>) -> Vec<Vertex> {
    v.sort_unstable();
    v
}

/// Vertex count that forces an induced `K_r`, `K_{1,r}` or `P_r` in a connected graph:
/// either some degree reaches the Ramsey bound, or bounded degree forces a long
/// shortest path.
pub fn connected_bound(r: usize) -> usize {
    let d = ramsey_bound(r - 1, r).max(2);
    // A connected graph of max degree < d and radius < r−1 has at most 1 + d·Σ(d−1)^i vertices.
    let mut total = 1usize;
    let mut layer = d;
    for _ in 0..r.saturating_sub(1) {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(d - 1);
    }
    total
}

pub fn connected_unavoidable(g: &Graph, r: usize) -> Result<Option<ConnectedWitness>, RamseyError> {
    if r == 0 {
        return Err(RamseyError::BadOrder);
    }
    if !g.is_connected() {
        return Err(RamseyError::NotConnected);
    }
    let mut by_degree: Vec<Vertex> = (0..g.n()).collect();
    by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    for &v in &by_degree {
        if g.degree(v) < r.saturating_sub(1).max(1) {
            break;
        }
        if let Some(w) = pivot_extract(g, g.neighbors(v), r.saturating_sub(1).max(1), r) {
            return Ok(Some(match w.kind {
                RamseyKind::Clique => {
                    let mut vs = w.vertices;
                    if r > 1 {
                        vs.push(v);
                    }
                    ConnectedWitness::Clique(Certificate::clique(&sorted(vs)))
                }
                RamseyKind::IndependentSet => ConnectedWitness::Star { center: v, leaves: w.vertices },
            }));
        }
    }
    let path = longest_shortest_path(g);
    Ok((path.len() >= r).then(|| ConnectedWitness::Path(VertexPath(path[..r].to_vec()))))
}

/// A shortest path realizing the diameter; shortest paths are induced.
fn longest_shortest_path(g: &Graph) -> Vec<Vertex> {
    let blocked = vec![false; g.n()];
    let mut best: Option<(usize, Vertex, Vertex)> = None;
    for s in 0..g.n() {
        let dist = g.bfs_distances(&[s], &blocked);
        for (t, d) in dist.iter().enumerate() {
            if let Some(d) = *d {
                if best.is_none_or(|b| d > b.0) {
                    best = Some((d, s, t));
                }
            }
        }
    }
    match best {
        Some((_, s, t)) => g.shortest_path(&[s], &[t], &[]).map(|p| p.0).unwrap_or_default(),
        None => Vec::new(),
    }
}

pub fn konig_witness(g: &Graph, k: usize) -> Result<Option<KonigWitness>, RamseyError> {
    if k == 0 {
        return Err(RamseyError::BadOrder);
    }
    if !g.is_connected() {
        return Err(RamseyError::NotConnected);
    }
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) >= k) {
        return Ok(Some(KonigWitness::HighDegree { vertex: v, degree: g.degree(v) }));
    }
    if g.n() == 0 {
        return Ok(None);
    }
    let dist = g.bfs_distances(&[0], &vec![false; g.n()]);
    let far = (0..g.n()).max_by_key(|&v| (dist[v], std::cmp::Reverse(v))).expect("nonempty");
    let path = g.shortest_path(&[0], &[far], &[]).expect("connected");
    Ok((path.len() >= k).then_some(KonigWitness::LongInducedPath { path }))
}
