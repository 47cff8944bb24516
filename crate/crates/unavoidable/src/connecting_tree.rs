//! Connecting trees over an independent target set, sidestep scanning, and the
//! high-degree extraction pipeline producing Θ, fan, and Δ-fan certificates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{Certificate, FamilyTag, Witness};
use crate::graph::{Graph, Vertex, VertexPath};
use crate::ramsey::{pivot_extract, ramsey_bound, RamseyKind};

/// `(length, index of the path holding the endpoint, distance from that path's anchor)`.
pub type Grade = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathRecord {
    /// 1-based step number.
    pub index: usize,
    /// Runs from the anchor `t_i` to the target `v_i`.
    pub path: VertexPath,
    pub anchor: Vertex,
    pub target: Vertex,
    pub grade: Grade,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectingTree {
    host: Graph,
    forbidden: Vec<Vertex>,
    targets: Vec<Vertex>,
    records: Vec<PathRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("targets {0} and {1} are adjacent")]
    NotIndependent(Vertex, Vertex),
    #[error("target {0} cannot reach the tree")]
    Unreachable(Vertex),
    #[error("need at least two targets")]
    TooFewTargets,
    #[error("vertex {0} is out of range")]
    InvalidVertex(Vertex),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("structure violation: {0}")]
    StructureViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservationViolation {
    /// One of "iii", "v", "vi", "vii".
    pub clause: &'static str,
    pub detail: String,
    pub vertices: Vec<Vertex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepType {
    One,
    Two,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidestep {
    /// `(ε_i, ε_j)`: the first end is on the abandoned tail of the earlier path,
    /// the second on the ray.
    pub edge: (Vertex, Vertex),
    pub steptype: StepType,
    pub owner: Vertex,
    pub ray_index: usize,
    /// Record indices `(i, j)` of the two consecutive ray paths.
    pub paths: (usize, usize),
}

impl ConnectingTree {
    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn forbidden(&self) -> &[Vertex] {
        &self.forbidden
    }

    pub fn targets(&self) -> &[Vertex] {
        &self.targets
    }

    pub fn records(&self) -> &[PathRecord] {
        &self.records
    }

    pub fn root(&self) -> Vertex {
        self.records[0].target
    }

    pub fn record(&self, index: usize) -> &PathRecord {
        &self.records[index - 1]
    }

    /// Tree from explicit paths, each running anchor→target; the first path is
    /// the single root vertex. Grades are computed but not checked for minimality.
    pub fn from_paths(
        host: Graph,
        forbidden: Vec<Vertex>,
        targets: Vec<Vertex>,
        paths: Vec<Vec<Vertex>>,
    ) -> Result<ConnectingTree, TreeError> {
        let mut t = ConnectingTree { host, forbidden, targets, records: Vec::new() };
        for p in paths {
            if p.is_empty() {
                return Err(TreeError::StructureViolation("empty path".into()));
            }
            if let Some(&bad) = p.iter().find(|&&v| v >= t.host.n()) {
                return Err(TreeError::InvalidVertex(bad));
            }
            let anchor = p[0];
            let grade = if t.records.is_empty() {
                (0, 0, 0)
            } else {
                let (i, d) = t
                    .owner_and_depth(anchor)
                    .ok_or_else(|| TreeError::StructureViolation(format!("anchor {anchor} is not on the tree")))?;
                (p.len() - 1, i, d)
            };
            let index = t.records.len() + 1;
            t.records.push(PathRecord { index, anchor, target: *p.last().unwrap(), path: VertexPath(p), grade });
        }
        Ok(t)
    }

    /// Smallest record index whose path holds `v`, with `v`'s distance from that path's anchor.
    pub fn owner_and_depth(&self, v: Vertex) -> Option<(usize, usize)> {
        self.records.iter().find_map(|r| r.path.position(v).map(|p| (r.index, p)))
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.records.iter().flat_map(|r| r.path.iter().copied()).collect()
    }

    pub fn edges(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.records
            .iter()
            .flat_map(|r| r.path.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))))
            .collect()
    }

    /// Tree adjacency keyed by vertex.
    pub fn adjacency(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for v in self.vertices() {
            adj.entry(v).or_default();
        }
        for (u, v) in self.edges() {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        adj
    }

    pub fn max_tree_degree(&self) -> (Vertex, usize) {
        self.adjacency()
            .into_iter()
            .map(|(v, n)| (v, n.len()))
            .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
            .unwrap_or((self.root(), 0))
    }

    pub fn max_path_length(&self) -> usize {
        self.records.iter().map(|r| r.grade.0).max().unwrap_or(0)
    }

    /// Record indices traversed by the deepest root-to-leaf ray, root first.
    pub fn ray_chain(&self) -> Vec<usize> {
        let depth_of = |mut i: usize| {
            let mut d = 0;
            while i > 1 {
                i = self.record(i).grade.1;
                d += 1;
            }
            d
        };
        let leaf = (1..=self.records.len())
            .max_by_key(|&i| (depth_of(i), self.chain_length(i), std::cmp::Reverse(i)))
            .unwrap_or(1);
        let mut chain = vec![leaf];
        let mut i = leaf;
        while i > 1 {
            i = self.record(i).grade.1;
            chain.push(i);
        }
        chain.reverse();
        chain
    }

    fn chain_length(&self, leaf: usize) -> usize {
        self.ray_for_chain(&self.chain_to(leaf)).len()
    }

    fn chain_to(&self, leaf: usize) -> Vec<usize> {
        let mut chain = vec![leaf];
        let mut i = leaf;
        while i > 1 {
            i = self.record(i).grade.1;
            chain.push(i);
        }
        chain.reverse();
        chain
    }

    fn ray_for_chain(&self, chain: &[usize]) -> Vec<Vertex> {
        let mut ray = vec![self.root()];
        for (l, &c) in chain.iter().enumerate().skip(1) {
            let p = &self.record(c).path;
            let end = chain.get(l + 1).map_or(p.len() - 1, |&next| self.record(next).grade.2);
            ray.extend_from_slice(&p[1..=end]);
        }
        ray
    }

    /// The ray along [`ConnectingTree::ray_chain`].
    pub fn ray(&self) -> VertexPath {
        VertexPath(self.ray_for_chain(&self.ray_chain()))
    }

    /// Recomputes every step by enumerating all candidate paths and confirms
    /// none had a strictly smaller grade. Exponential; small hosts only.
    pub fn verify_grades_exhaustive(&self) -> Result<(), String> {
        let mut forbid = vec![false; self.host.n()];
        for &f in &self.forbidden {
            forbid[f] = true;
        }
        for step in 1..self.records.len() {
            let partial = ConnectingTree { records: self.records[..step].to_vec(), ..self.clone() };
            let on_tree = partial.vertices();
            let used: BTreeSet<Vertex> = partial.records.iter().map(|r| r.target).collect();
            let mut best: Option<Grade> = None;
            for &s in self.targets.iter().filter(|v| !used.contains(v)) {
                let mut stack = vec![(s, vec![s])];
                while let Some((v, path)) = stack.pop() {
                    for &w in self.host.neighbors(v) {
                        if forbid[w] || path.contains(&w) {
                            continue;
                        }
                        if on_tree.contains(&w) {
                            let (i, d) = partial.owner_and_depth(w).unwrap();
                            let g = (path.len(), i, d);
                            best = Some(best.map_or(g, |b| b.min(g)));
                        } else if best.is_none_or(|b| path.len() < b.0) {
                            let mut next = path.clone();
                            next.push(w);
                            stack.push((w, next));
                        }
                    }
                }
            }
            let got = self.records[step].grade;
            if best != Some(got) {
                return Err(format!("step {}: recorded grade {got:?}, minimum {best:?}", step + 1));
            }
        }
        Ok(())
    }
}

/// Builds the connecting tree over `targets` in `host` for `min(budget, |targets|)` steps.
pub fn build_connecting_tree(host: &Graph, targets: &[Vertex], budget: usize) -> Result<ConnectingTree, TreeError> {
    build_connecting_tree_avoiding(host, targets, budget, &[])
}

/// As [`build_connecting_tree`] in `host − forbidden`.
pub fn build_connecting_tree_avoiding(
    host: &Graph,
    targets: &[Vertex],
    budget: usize,
    forbidden: &[Vertex],
) -> Result<ConnectingTree, TreeError> {
    let mut targets: Vec<Vertex> = targets.to_vec();
    targets.sort_unstable();
    targets.dedup();
    if let Some(&bad) = targets.iter().chain(forbidden).find(|&&v| v >= host.n()) {
        return Err(TreeError::InvalidVertex(bad));
    }
    if targets.len() < 2 {
        return Err(TreeError::TooFewTargets);
    }
    for (i, &a) in targets.iter().enumerate() {
        if let Some(&b) = targets[i + 1..].iter().find(|&&b| host.has_edge(a, b)) {
            return Err(TreeError::NotIndependent(a, b));
        }
    }
    let mut tree = ConnectingTree::from_paths(host.clone(), forbidden.to_vec(), targets.clone(), vec![vec![targets[0]]])?;
    let mut blocked = vec![false; host.n()];
    for &f in forbidden {
        blocked[f] = true;
    }
    let steps = budget.min(targets.len());
    let mut used: BTreeSet<Vertex> = BTreeSet::from([targets[0]]);
    while tree.records.len() < steps {
        let on_tree = tree.vertices();
        let mut off = blocked.clone();
        for &v in &on_tree {
            off[v] = true;
        }
        // Distances to the tree through off-tree vertices.
        let tree_list: Vec<Vertex> = on_tree.iter().copied().collect();
        let mut dist_to_tree = vec![None; host.n()];
        let mut queue = VecDeque::new();
        for &v in &tree_list {
            dist_to_tree[v] = Some(0usize);
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist_to_tree[v].unwrap();
            for &w in host.neighbors(v) {
                if dist_to_tree[w].is_none() && !blocked[w] {
                    dist_to_tree[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        let remaining: Vec<Vertex> = targets.iter().copied().filter(|v| !used.contains(v)).collect();
        let Some(len) = remaining.iter().filter_map(|&v| dist_to_tree[v]).min() else {
            return Err(TreeError::Unreachable(remaining[0]));
        };
        let mut best: Option<(Grade, Vertex, Vec<Vertex>)> = None;
        for &s in remaining.iter().filter(|&&v| dist_to_tree[v] == Some(len)) {
            // Tree vertices reachable from `s` by a path of exactly `len` edges.
            let ds = host.bfs_distances(&[s], &off);
            for &u in &tree_list {
                let reach = host.neighbors(u).iter().any(|&x| if len == 1 { x == s } else { ds[x] == Some(len - 1) });
                if !reach {
                    continue;
                }
                let (i, d) = tree.owner_and_depth(u).unwrap();
                let grade = (len, i, d);
                let mut avoid: Vec<Vertex> = tree_list.iter().copied().filter(|&v| v != u).collect();
                avoid.extend_from_slice(forbidden);
                let path = host.shortest_path(&[s], &[u], &avoid).expect("reachable").0;
                let cand = (grade, s, path);
                if best.as_ref().is_none_or(|b| (cand.0, cand.1, &cand.2) < (b.0, b.1, &b.2)) {
                    best = Some(cand);
                }
            }
        }
        let (grade, s, mut path) = best.expect("a target at minimum distance reaches the tree");
        path.reverse();
        used.insert(s);
        let index = tree.records.len() + 1;
        tree.records.push(PathRecord { index, anchor: path[0], target: s, path: VertexPath(path), grade });
    }
    Ok(tree)
}

pub fn check_observations(t: &ConnectingTree) -> Vec<ObservationViolation> {
    let mut out = Vec::new();
    let g = &t.host;
    let target_set: BTreeSet<Vertex> = t.targets.iter().copied().collect();
    let mut earlier: BTreeSet<Vertex> = BTreeSet::new();
    let mut earlier_paths: Vec<&PathRecord> = Vec::new();
    for (k, r) in t.records.iter().enumerate() {
        let p = &r.path;
        if !p.is_path_in(g) {
            out.push(ObservationViolation { clause: "iii", detail: format!("P^{} is not a path", r.index), vertices: p.0.clone() });
        }
        if k > 0 {
            if !earlier.contains(&p[0]) {
                out.push(ObservationViolation {
                    clause: "iii",
                    detail: format!("P^{} does not start on the earlier tree", r.index),
                    vertices: vec![p[0]],
                });
            }
            for &v in &p[1..] {
                if earlier.contains(&v) {
                    out.push(ObservationViolation {
                        clause: "iii",
                        detail: format!("P^{} meets the earlier tree away from its anchor", r.index),
                        vertices: vec![v],
                    });
                }
            }
        }
        if !target_set.contains(&r.target) {
            out.push(ObservationViolation { clause: "v", detail: format!("v_{} is not a target", r.index), vertices: vec![r.target] });
        }
        if p.len() > 2 {
            for &v in &p[1..p.len() - 1] {
                if target_set.contains(&v) {
                    out.push(ObservationViolation {
                        clause: "v",
                        detail: format!("internal vertex of P^{} is a target", r.index),
                        vertices: vec![v],
                    });
                }
            }
        }
        if k > 0 && p.len() >= 2 {
            let u = p[1];
            for &x in p.iter().skip(2) {
                for &y in g.neighbors(x) {
                    if earlier.contains(&y) {
                        out.push(ObservationViolation {
                            clause: "vi",
                            detail: format!("edge from deep vertex of P^{} to the earlier tree", r.index),
                            vertices: vec![x, y],
                        });
                    }
                }
            }
            for q in &earlier_paths {
                let hits: Vec<usize> = g.neighbors(u).iter().filter_map(|&y| q.path.position(y)).collect();
                if let (Some(&lo), Some(&hi)) = (hits.iter().min(), hits.iter().max()) {
                    if hi - lo > 2 {
                        out.push(ObservationViolation {
                            clause: "vii",
                            detail: format!("neighbors of u on P^{} span {} edges", q.index, hi - lo),
                            vertices: vec![u, q.path[lo], q.path[hi]],
                        });
                    }
                }
            }
        }
        earlier.extend(p.iter().copied());
        earlier_paths.push(r);
    }
    out
}

/// Classifies every non-tree edge among the paths traversed by `ray`.
pub fn scan_sidesteps(g: &Graph, t: &ConnectingTree, ray: &VertexPath) -> Result<Vec<Sidestep>, TreeError> {
    let chain = chain_for_ray(t, ray)?;
    let ray_pos: BTreeMap<Vertex, usize> = ray.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let tree_edges = t.edges();
    let mut region: BTreeSet<Vertex> = BTreeSet::new();
    for &c in &chain {
        region.extend(t.record(c).path.iter().copied());
    }
    let mut found = Vec::new();
    let mut explained: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    for pair in chain.windows(2) {
        let (i, j) = (pair[0], pair[1]);
        let pi = &t.record(i).path;
        let tj = t.record(j).anchor;
        let Some(at) = pi.position(tj) else { continue };
        for (dist, &a) in pi[at + 1..].iter().enumerate().map(|(d, a)| (d + 1, a)) {
            for &b in t.record(j).path.iter().filter(|b| ray_pos.contains_key(b)) {
                if !g.has_edge(a, b) || tree_edges.contains(&(a.min(b), a.max(b))) {
                    continue;
                }
                let steptype = match dist {
                    1 => StepType::One,
                    2 => StepType::Two,
                    _ => {
                        return Err(TreeError::StructureViolation(format!(
                            "sidestep {a}-{b} lies {dist} steps from its anchor {tj}"
                        )))
                    }
                };
                explained.insert((a.min(b), a.max(b)));
                found.push(Sidestep { edge: (a, b), steptype, owner: tj, ray_index: ray_pos[&b], paths: (i, j) });
            }
        }
    }
    for &a in &region {
        for &b in g.neighbors(a) {
            let e = (a.min(b), a.max(b));
            if a < b && region.contains(&b) && !tree_edges.contains(&e) && !explained.contains(&e) {
                return Err(TreeError::StructureViolation(format!("edge {a}-{b} is neither a tree edge nor a sidestep")));
            }
        }
    }
    found.sort_by_key(|s| (s.ray_index, s.edge));
    Ok(found)
}

fn chain_for_ray(t: &ConnectingTree, ray: &VertexPath) -> Result<Vec<usize>, TreeError> {
    let chain = t.ray_chain();
    let full = t.ray_for_chain(&chain);
    if ray.0 == full {
        return Ok(chain);
    }
    for leaf in 1..=t.records.len() {
        let c = t.chain_to(leaf);
        if t.ray_for_chain(&c) == ray.0 {
            return Ok(c);
        }
    }
    Err(TreeError::NotApplicable("ray is not a root-to-target path of the tree".into()))
}

/// Checks that `paths` and `extra` edges form an induced subgraph of `g` on
/// exactly `expect_vertices` distinct vertices.
fn induced_exactly(g: &Graph, paths: &[&[Vertex]], extra: &[(Vertex, Vertex)], expect_vertices: usize) -> bool {
    let mut verts = BTreeSet::new();
    let mut edges = BTreeSet::new();
    for p in paths {
        verts.extend(p.iter().copied());
        for w in p.windows(2) {
            edges.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    for &(a, b) in extra {
        verts.insert(a);
        verts.insert(b);
        edges.insert((a.min(b), a.max(b)));
    }
    if verts.len() != expect_vertices {
        return false;
    }
    let list: Vec<Vertex> = verts.into_iter().collect();
    g.induced_edges(&list) == edges
}

/// Greedily keeps the candidate `a`–`b` paths whose union stays an induced theta.
fn greedy_theta(g: &Graph, a: Vertex, b: Vertex, candidates: &[Vec<Vertex>], k: usize) -> Option<Certificate> {
    if a == b || g.has_edge(a, b) {
        return None;
    }
    let mut kept: Vec<Vec<Vertex>> = Vec::new();
    let mut interior = 0;
    for c in candidates {
        if c.len() < 3 || c[0] != a || c[c.len() - 1] != b {
            continue;
        }
        let mut trial: Vec<&[Vertex]> = kept.iter().map(|p| p.as_slice()).collect();
        trial.push(c);
        if induced_exactly(g, &trial, &[], 2 + interior + c.len() - 2) {
            interior += c.len() - 2;
            kept.push(c.clone());
        }
    }
    if kept.len() < 3 {
        return None;
    }
    let cert = Certificate::new(
        FamilyTag::Theta,
        Witness::Theta { branch: [a, b], paths: kept.into_iter().map(VertexPath).collect() },
        &[],
    )
    .ok()?;
    (cert.order >= k && crate::families::verify_certificate(g, &cert)).then_some(cert)
}

/// A fan spoke candidate: path from the apex ending at `rim[foot]`.
struct SpokeCandidate {
    foot: usize,
    path: Vec<Vertex>,
}

/// Greedily assembles a fan on `rim` from candidate spokes; apex neighbors on
/// the covered rim become direct spokes.
fn greedy_fan(g: &Graph, apex: Vertex, rim: &[Vertex], mut candidates: Vec<SpokeCandidate>, k: usize) -> Option<Certificate> {
    candidates.sort_by_key(|c| (c.foot, c.path.len()));
    let direct = |lo: usize, hi: usize| -> Vec<SpokeCandidate> {
        (lo..=hi).filter(|&p| g.has_edge(apex, rim[p])).map(|p| SpokeCandidate { foot: p, path: vec![apex, rim[p]] }).collect()
    };
    let assemble = |kept: &[SpokeCandidate]| -> Option<Vec<Vec<Vertex>>> {
        let lo = kept.first()?.foot;
        let hi = kept.last()?.foot;
        let mut spokes: BTreeMap<usize, Vec<Vertex>> = kept.iter().map(|c| (c.foot, c.path.clone())).collect();
        for d in direct(lo, hi) {
            match spokes.get(&d.foot) {
                Some(p) if p.len() != 2 => return None,
                _ => {
                    spokes.insert(d.foot, d.path);
                }
            }
        }
        let rim_part = &rim[lo..=hi];
        let mut all: Vec<&[Vertex]> = spokes.values().map(|p| p.as_slice()).collect();
        all.push(rim_part);
        let expect = 1 + rim_part.len() + spokes.values().map(|p| p.len() - 2).sum::<usize>();
        induced_exactly(g, &all, &[], expect).then(|| spokes.into_values().collect())
    };
    let mut kept: Vec<SpokeCandidate> = Vec::new();
    for c in candidates {
        if kept.last().is_some_and(|l| c.foot <= l.foot) || c.path.first() != Some(&apex) {
            continue;
        }
        kept.push(c);
        if assemble(&kept).is_none() {
            kept.pop();
        }
    }
    let spokes = assemble(&kept)?;
    if spokes.len() < 3 {
        return None;
    }
    let lo = kept.first()?.foot;
    let hi = kept.last()?.foot;
    let cert = Certificate::new(
        FamilyTag::Fan,
        Witness::Fan { apex, spokes: spokes.into_iter().map(VertexPath).collect(), rim: VertexPath(rim[lo..=hi].to_vec()) },
        &[],
    )
    .ok()?;
    (cert.order >= k && crate::families::verify_certificate(g, &cert)).then_some(cert)
}

struct TipCandidate {
    /// Rim position of the first foot; the second is the next rim vertex.
    foot: usize,
    path: Vec<Vertex>,
}

fn greedy_delta_fan(g: &Graph, apex: Vertex, rim: &[Vertex], mut candidates: Vec<TipCandidate>, k: usize) -> Option<Certificate> {
    candidates.sort_by_key(|c| (c.foot, c.path.len()));
    let check = |kept: &[TipCandidate]| -> bool {
        let lo = kept[0].foot;
        let hi = kept[kept.len() - 1].foot + 1;
        let rim_part = &rim[lo..=hi];
        let mut all: Vec<&[Vertex]> = kept.iter().map(|c| c.path.as_slice()).collect();
        all.push(rim_part);
        let extra: Vec<(Vertex, Vertex)> = kept
            .iter()
            .flat_map(|c| {
                let tip = *c.path.last().unwrap();
                [(tip, rim[c.foot]), (tip, rim[c.foot + 1])]
            })
            .collect();
        let expect = 1 + rim_part.len() + kept.iter().map(|c| c.path.len() - 1).sum::<usize>();
        induced_exactly(g, &all, &extra, expect)
    };
    let mut kept: Vec<TipCandidate> = Vec::new();
    for c in candidates {
        if c.foot + 1 >= rim.len() || kept.last().is_some_and(|l| c.foot <= l.foot + 1) || c.path.first() != Some(&apex) {
            continue;
        }
        kept.push(c);
        if !check(&kept) {
            kept.pop();
        }
    }
    if kept.len() < 2 {
        return None;
    }
    let lo = kept[0].foot;
    let hi = kept[kept.len() - 1].foot + 1;
    let feet = kept.iter().map(|c| [rim[c.foot], rim[c.foot + 1]]).collect();
    let cert = Certificate::new(
        FamilyTag::DeltaFan,
        Witness::DeltaFan {
            apex,
            spokes: kept.into_iter().map(|c| VertexPath(c.path)).collect(),
            rim: VertexPath(rim[lo..=hi].to_vec()),
            feet,
        },
        &[],
    )
    .ok()?;
    (cert.order >= k && crate::families::verify_certificate(g, &cert)).then_some(cert)
}

/// Tree path from `x` through its tree neighbor `y` to the nearest apex
/// neighbor in that branch.
fn branch_to_apex_neighbor(g: &Graph, apex: Vertex, adj: &BTreeMap<Vertex, Vec<Vertex>>, x: Vertex, y: Vertex) -> Option<Vec<Vertex>> {
    let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::from([(y, x)]);
    let mut queue = VecDeque::from([y]);
    while let Some(v) = queue.pop_front() {
        if g.has_edge(apex, v) {
            let mut path = vec![v];
            let mut cur = v;
            while cur != x {
                cur = parent[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &w in &adj[&v] {
            if w != x && !parent.contains_key(&w) {
                parent.insert(w, v);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Θ from a tree vertex with many branches.
pub fn extract_theta_high_tree_degree(
    g: &Graph,
    apex: Vertex,
    t: &ConnectingTree,
    k: usize,
) -> Result<Option<Certificate>, TreeError> {
    let adj = t.adjacency();
    let (x, deg) = t.max_tree_degree();
    if deg < k.max(3) {
        return Err(TreeError::NotApplicable(format!("largest tree degree {deg} is below {k}")));
    }
    let mut nbrs: Vec<Vertex> = adj[&x].clone();
    nbrs.sort_unstable();
    // Independent part of N_T(x).
    let mut indep: Vec<Vertex> = Vec::new();
    for &y in &nbrs {
        if indep.iter().all(|&z| !g.has_edge(y, z)) {
            indep.push(y);
        }
    }
    if indep.len() < k {
        if let Some(w) = pivot_extract(g, &nbrs, k, k) {
            if w.kind == RamseyKind::Clique {
                let mut vs = w.vertices;
                vs.push(x);
                vs.sort_unstable();
                return Ok(Some(Certificate::clique(&vs)));
            }
        }
    }
    let branches: Vec<(Vertex, Vec<Vertex>)> =
        indep.iter().filter_map(|&y| branch_to_apex_neighbor(g, apex, &adj, x, y).map(|b| (y, b))).collect();

    // Case (a): many x_i adjacent to the apex.
    let direct: Vec<Vec<Vertex>> = branches.iter().filter(|(_, b)| b.len() == 2).map(|(y, _)| vec![x, *y, apex]).collect();
    if direct.len() >= k {
        if let Some(c) = greedy_theta(g, x, apex, &direct, k) {
            return Ok(Some(c));
        }
    }
    // Case (b): N_1 = x_i with longer branches, N_2 = their successors.
    let long: Vec<&Vec<Vertex>> = branches.iter().filter(|(_, b)| b.len() > 2).map(|(_, b)| b).collect();
    let n1: Vec<Vertex> = long.iter().map(|b| b[1]).collect();
    let n2: Vec<Vertex> = long.iter().map(|b| b[2]).collect();
    for (i, &u) in n1.iter().enumerate() {
        let cands: Vec<Vec<Vertex>> = long
            .iter()
            .enumerate()
            .filter(|&(j, b)| j != i && g.has_edge(u, b[2]))
            .map(|(_, b)| {
                let mut p = vec![u];
                p.extend_from_slice(&b[2..]);
                p.push(apex);
                p
            })
            .collect();
        if cands.len() >= k {
            if let Some(c) = greedy_theta(g, u, apex, &cands, k) {
                return Ok(Some(c));
            }
        }
    }
    for &u in &n2 {
        let cands: Vec<Vec<Vertex>> = n1.iter().filter(|&&y| g.has_edge(u, y)).map(|&y| vec![x, y, u]).collect();
        if cands.len() >= k {
            if let Some(c) = greedy_theta(g, x, u, &cands, k) {
                return Ok(Some(c));
            }
        }
    }
    // Case (c): induced matching of N_1–N_2 edges, tree edges first.
    let mut edges: Vec<(usize, usize)> = (0..long.len()).map(|i| (i, i)).collect();
    for i in 0..long.len() {
        for j in 0..long.len() {
            if i != j && g.has_edge(n1[i], n2[j]) {
                edges.push((i, j));
            }
        }
    }
    let cands: Vec<Vec<Vertex>> = edges
        .iter()
        .map(|&(i, j)| {
            let mut p = vec![x, n1[i]];
            p.extend_from_slice(&long[j][2..]);
            p.push(apex);
            p
        })
        .collect();
    let mut all = cands;
    all.extend(direct);
    Ok(greedy_theta(g, x, apex, &all, k))
}

/// Fan or Δ-fan along a ray of a tree with few branches.
pub fn extract_fan_locally_finite_tree(
    g: &Graph,
    apex: Vertex,
    t: &ConnectingTree,
    ray: &VertexPath,
    k: usize,
) -> Result<Option<Certificate>, TreeError> {
    let chain = chain_for_ray(t, ray)?;
    if chain.len() < 2 {
        return Err(TreeError::NotApplicable("ray passes fewer than two anchors".into()));
    }
    let rim: &[Vertex] = ray;
    let pos: BTreeMap<Vertex, usize> = rim.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // (1) apex neighbors on the ray itself.
    if let Some(c) = greedy_fan(g, apex, rim, direct_spokes(g, apex, rim), k) {
        return Ok(Some(c));
    }
    // (2) tails of traversed paths beyond the point where the ray leaves them.
    let mut tails = Vec::new();
    for pair in chain.windows(2) {
        let (i, j) = (pair[0], pair[1]);
        let p = &t.record(i).path;
        let at = t.record(j).grade.2;
        if at + 1 < p.len() {
            let mut spoke = vec![apex];
            spoke.extend(p[at..].iter().rev());
            tails.push(SpokeCandidate { foot: pos[&p[at]], path: spoke });
        }
    }
    if let Some(c) = greedy_fan(g, apex, rim, tails, k) {
        return Ok(Some(c));
    }
    let sidesteps = scan_sidesteps(g, t, ray)?;
    let tail_spoke = |s: &Sidestep| -> Vec<Vertex> {
        let p = &t.record(s.paths.0).path;
        let at = p.position(s.edge.0).expect("sidestep end on the earlier path");
        let mut spoke = vec![apex];
        spoke.extend(p[at..].iter().rev());
        spoke
    };
    // (3) type-two sidesteps become spoke ends.
    let two: Vec<SpokeCandidate> = sidesteps
        .iter()
        .filter(|s| s.steptype == StepType::Two)
        .map(|s| {
            let mut path = tail_spoke(s);
            path.push(s.edge.1);
            SpokeCandidate { foot: s.ray_index, path }
        })
        .collect();
    if let Some(c) = greedy_fan(g, apex, rim, two, k) {
        return Ok(Some(c));
    }
    // (4, 5) type-one sidesteps give triangles on consecutive ray vertices.
    let one: Vec<TipCandidate> = sidesteps
        .iter()
        .filter(|s| s.steptype == StepType::One)
        .filter_map(|s| {
            let a = pos[&s.owner];
            let b = s.ray_index;
            (b == a + 1).then(|| TipCandidate { foot: a, path: tail_spoke(s) })
        })
        .collect();
    Ok(greedy_delta_fan(g, apex, rim, one, k))
}

fn direct_spokes(g: &Graph, apex: Vertex, rim: &[Vertex]) -> Vec<SpokeCandidate> {
    rim.iter()
        .enumerate()
        .filter(|&(_, &r)| g.has_edge(apex, r))
        .map(|(foot, &r)| SpokeCandidate { foot, path: vec![apex, r] })
        .collect()
}

/// Ray length above which the tree is treated as locally finite when routing.
pub fn ray_threshold(k: usize, t: &ConnectingTree) -> usize {
    k * (t.max_path_length() + 2)
}

/// Degree at which Ramsey on the neighborhood is guaranteed to give `K_k` or an independent `k`-set.
pub fn degree_threshold(k: usize) -> usize {
    ramsey_bound(k, k)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HighDegreeTrace {
    pub apex: Vertex,
    pub targets: usize,
    pub tree_paths: usize,
    pub max_tree_degree: usize,
    pub ray_length: usize,
    pub steps: Vec<String>,
}

pub fn high_degree_pipeline(g: &Graph, v: Vertex, k: usize) -> Result<Option<Certificate>, TreeError> {
    high_degree_pipeline_traced(g, v, k).map(|(c, _)| c)
}

pub fn high_degree_pipeline_traced(g: &Graph, v: Vertex, k: usize) -> Result<(Option<Certificate>, HighDegreeTrace), TreeError> {
    if v >= g.n() {
        return Err(TreeError::InvalidVertex(v));
    }
    let k = k.max(3);
    if g.degree(v) < k {
        return Err(TreeError::NotApplicable(format!("degree {} is below {k}", g.degree(v))));
    }
    let mut trace = HighDegreeTrace { apex: v, targets: 0, tree_paths: 0, max_tree_degree: 0, ray_length: 0, steps: Vec::new() };
    let nbrs = g.neighbors(v);
    let Some(w) = pivot_extract(g, nbrs, k - 1, k) else {
        trace.steps.push("ramsey: no clique or independent set in the neighborhood".into());
        return Ok((None, trace));
    };
    if w.kind == RamseyKind::Clique {
        let mut vs = w.vertices;
        vs.push(v);
        vs.sort_unstable();
        trace.steps.push(format!("ramsey: clique of order {}", vs.len()));
        return Ok((Some(Certificate::clique(&vs)), trace));
    }
    let mut targets = w.vertices;
    for &u in nbrs {
        if !targets.contains(&u) && targets.iter().all(|&x| !g.has_edge(u, x)) {
            targets.push(u);
        }
    }
    targets.sort_unstable();
    trace.targets = targets.len();
    trace.steps.push(format!("ramsey: independent target set of size {}", targets.len()));
    let tree = build_connecting_tree_avoiding(g, &targets, targets.len(), &[v])?;
    let (_, deg) = tree.max_tree_degree();
    let ray = tree.ray();
    trace.tree_paths = tree.records().len();
    trace.max_tree_degree = deg;
    trace.ray_length = ray.len();
    let high_first = deg >= k;
    trace.steps.push(if high_first {
        format!("tree: vertex of tree degree {deg}")
    } else {
        format!("tree: ray of {} vertices (threshold {})", ray.len(), ray_threshold(k, &tree))
    });
    let mut attempts: Vec<bool> = vec![high_first, !high_first];
    attempts.dedup();
    if !high_first {
        attempts.push(true);
    }
    for theta in attempts {
        let got = if theta {
            match extract_theta_high_tree_degree(g, v, &tree, k) {
                Ok(c) => c,
                Err(TreeError::NotApplicable(_)) => None,
                Err(e) => return Err(e),
            }
        } else {
            match extract_fan_locally_finite_tree(g, v, &tree, &ray, k) {
                Ok(c) => c,
                Err(TreeError::NotApplicable(_) | TreeError::StructureViolation(_)) => None,
                Err(e) => return Err(e),
            }
        };
        trace.steps.push(format!("{}: {}", if theta { "theta" } else { "fan" }, if got.is_some() { "found" } else { "absent" }));
        if got.is_some() {
            return Ok((got, trace));
        }
    }
    Ok((None, trace))
}
