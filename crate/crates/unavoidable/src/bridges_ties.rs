//! Bridges of a subgraph, ties between two rails, and the pipeline from a
//! bounded-degree host to a messy ladder or a ladder-family certificate.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connecting_tree::build_connecting_tree_avoiding;
use crate::families::{verify_certificate, Certificate, FamilyTag, TieWitness, Witness};
use crate::graph::{Graph, Vertex, VertexPath};
use crate::ladder::{validate_ladder, Ladder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("bad subgraph: {0}")]
    BadSubgraph(String),
    #[error("path is not induced")]
    NotInduced,
    #[error("bad rails: {0}")]
    BadRails(String),
    #[error("tie {index} has type {found:?}, expected fork, rake or fork-rake")]
    BadTieType { index: usize, found: TieType },
    #[error("structure violation: {0}")]
    StructureViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bridge {
    /// Every vertex of the bridge, attachments included, sorted.
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
    pub attachments: Vec<Vertex>,
    pub degenerate: bool,
}

impl Bridge {
    pub fn interior(&self) -> Vec<Vertex> {
        self.vertices.iter().copied().filter(|v| self.attachments.binary_search(v).is_err()).collect()
    }

    /// Extreme attachment positions on `path`.
    pub fn span_on(&self, path: &[Vertex]) -> Option<(usize, usize)> {
        let pos: Vec<usize> = self.attachments.iter().filter_map(|a| path.iter().position(|x| x == a)).collect();
        Some((*pos.iter().min()?, *pos.iter().max()?))
    }
}

pub fn bridge_decompose(g: &Graph, h_vertices: &[Vertex], h_edges: &[(Vertex, Vertex)]) -> Result<Vec<Bridge>, BridgeError> {
    let mut in_h = vec![false; g.n()];
    for &v in h_vertices {
        if v >= g.n() {
            return Err(BridgeError::BadSubgraph(format!("vertex {v} out of range")));
        }
        in_h[v] = true;
    }
    let mut h_set = BTreeSet::new();
    for &(a, b) in h_edges {
        if !g.has_edge(a, b) || !in_h[a] || !in_h[b] {
            return Err(BridgeError::BadSubgraph(format!("{a}-{b} is not an edge on the subgraph's vertices")));
        }
        h_set.insert((a.min(b), a.max(b)));
    }
    let mut out = Vec::new();
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if in_h[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut attach = BTreeSet::new();
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                if in_h[w] {
                    attach.insert(w);
                } else if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        let set: BTreeSet<Vertex> = comp.iter().copied().collect();
        let mut edges = Vec::new();
        for &v in &set {
            for &w in g.neighbors(v) {
                if (in_h[w] || v < w) && (in_h[w] || set.contains(&w)) {
                    edges.push((v.min(w), v.max(w)));
                }
            }
        }
        edges.sort_unstable();
        let mut vertices: Vec<Vertex> = set.into_iter().chain(attach.iter().copied()).collect();
        vertices.sort_unstable();
        out.push(Bridge { vertices, edges, attachments: attach.into_iter().collect(), degenerate: false });
    }
    for (a, b) in g.edges() {
        if in_h[a] && in_h[b] && !h_set.contains(&(a, b)) {
            out.push(Bridge { vertices: vec![a, b], edges: vec![(a, b)], attachments: vec![a, b], degenerate: true });
        }
    }
    out.sort_by(|x, y| (x.vertices[0], &x.edges).cmp(&(y.vertices[0], &y.edges)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub bridge: Bridge,
    /// Span `[u, v]` as positions on the reference path.
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BridgeChain {
    Perpetual(Bridge),
    Chain(Vec<ChainLink>),
    Neither,
}

/// Checks `u_1 < u_2 < v_1 ≤ u_3 < v_2 ≤ u_4 < …` on the link spans.
pub fn chain_interleaves(links: &[ChainLink]) -> bool {
    links.iter().enumerate().all(|(i, l)| {
        l.u < l.v
            && match i {
                0 => true,
                1 => links[0].u < l.u && l.u < links[0].v && links[0].v < l.v,
                _ => links[i - 2].v <= l.u && l.u < links[i - 1].v && links[i - 1].v < l.v,
            }
    })
}

pub fn find_bridge_chain(g: &Graph, r: &VertexPath, k: usize) -> Result<BridgeChain, BridgeError> {
    if !g.is_induced_path(r) {
        return Err(BridgeError::NotInduced);
    }
    let edges: Vec<(Vertex, Vertex)> = r.windows(2).map(|w| (w[0], w[1])).collect();
    let bridges = bridge_decompose(g, r, &edges)?;
    if let Some(b) = bridges
        .iter()
        .filter(|b| b.attachments.len() >= k.max(3))
        .max_by_key(|b| (b.attachments.len(), std::cmp::Reverse(b.vertices[0])))
    {
        return Ok(BridgeChain::Perpetual(b.clone()));
    }
    let spans: Vec<Option<(usize, usize)>> = bridges.iter().map(|b| b.span_on(r)).collect();
    let best = |lo: usize, hi: usize, beyond: usize| -> Option<usize> {
        (0..bridges.len())
            .filter(|&i| spans[i].is_some_and(|(u, v)| lo <= u && u < hi && v > beyond))
            .max_by_key(|&i| (spans[i].unwrap().1, std::cmp::Reverse(bridges[i].vertices[0])))
    };
    let mut links: Vec<ChainLink> = Vec::new();
    let mut next = best(0, 1, 0);
    while let Some(i) = next {
        let (u, v) = spans[i].unwrap();
        links.push(ChainLink { bridge: bridges[i].clone(), u, v });
        let m = links.len();
        next = if m == 1 { best(u + 1, v, v) } else { best(links[m - 2].v, v, v) };
    }
    debug_assert!(chain_interleaves(&links));
    Ok(if links.len() >= k { BridgeChain::Chain(links) } else { BridgeChain::Neither })
}

/// Two disjoint induced paths; edges between them are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RailPair {
    pub p: VertexPath,
    pub q: VertexPath,
}

impl RailPair {
    pub fn new(g: &Graph, p: Vec<Vertex>, q: Vec<Vertex>) -> Result<RailPair, BridgeError> {
        if p.is_empty() || q.is_empty() {
            return Err(BridgeError::BadRails("empty rail".into()));
        }
        if !g.is_induced_path(&p) || !g.is_induced_path(&q) {
            return Err(BridgeError::BadRails("rail is not an induced path".into()));
        }
        let ps: BTreeSet<Vertex> = p.iter().copied().collect();
        if let Some(v) = q.iter().find(|v| ps.contains(v)) {
            return Err(BridgeError::BadRails(format!("rails share vertex {v}")));
        }
        Ok(RailPair { p: VertexPath(p), q: VertexPath(q) })
    }

    fn positions(&self) -> (BTreeMap<Vertex, usize>, BTreeMap<Vertex, usize>) {
        let map = |r: &VertexPath| r.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        (map(&self.p), map(&self.q))
    }

    /// Edges between the rails as `(P position, Q position)`.
    pub fn cross_edges(&self, g: &Graph) -> Vec<(usize, usize)> {
        let (_, qp) = self.positions();
        let mut out: Vec<(usize, usize)> = self
            .p
            .iter()
            .enumerate()
            .flat_map(|(i, &v)| g.neighbors(v).iter().filter_map(|w| qp.get(w)).map(move |&j| (i, j)))
            .collect();
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TieType {
    I,
    Y,
    Lambda,
    YLambda,
    Fork,
    Rake,
    ForkRake,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tie {
    pub vertices: Vec<Vertex>,
    /// Vertices off both rails.
    pub interior: Vec<Vertex>,
    /// Attachments in rail order.
    pub p_attach: Vec<Vertex>,
    pub q_attach: Vec<Vertex>,
    pub p_span: (usize, usize),
    pub q_span: (usize, usize),
    pub tie_type: TieType,
    /// Hub adjacent to every P attachment when there are several.
    pub u: Option<Vertex>,
    /// Hub adjacent to every Q attachment when there are several.
    pub v: Option<Vertex>,
    /// The induced path from the P side (hub or single attachment) to the Q side.
    pub core: Vec<Vertex>,
}

impl Tie {
    pub fn is_single_rung(&self) -> bool {
        self.interior.is_empty() && self.p_attach.len() == 1 && self.q_attach.len() == 1
    }

    /// All edges go from one rail vertex to several vertices of the other rail.
    pub fn is_fan_remnant(&self) -> bool {
        self.interior.is_empty()
            && ((self.p_attach.len() == 1 && self.q_attach.len() >= 2) || (self.q_attach.len() == 1 && self.p_attach.len() >= 2))
    }
}

fn tie_edge(pp: &BTreeMap<Vertex, usize>, qp: &BTreeMap<Vertex, usize>, a: Vertex, b: Vertex) -> bool {
    !(pp.contains_key(&a) && pp.contains_key(&b)) && !(qp.contains_key(&a) && qp.contains_key(&b))
}

fn tie_from_component(g: &Graph, rails: &RailPair, comp: Vec<Vertex>) -> Option<Tie> {
    let (pp, qp) = rails.positions();
    let mut p_attach: Vec<Vertex> = comp.iter().copied().filter(|v| pp.contains_key(v)).collect();
    let mut q_attach: Vec<Vertex> = comp.iter().copied().filter(|v| qp.contains_key(v)).collect();
    if p_attach.is_empty() || q_attach.is_empty() {
        return None;
    }
    p_attach.sort_by_key(|v| pp[v]);
    q_attach.sort_by_key(|v| qp[v]);
    let interior = comp.iter().copied().filter(|v| !pp.contains_key(v) && !qp.contains_key(v)).collect();
    let mut tie = Tie {
        p_span: (pp[&p_attach[0]], pp[p_attach.last().unwrap()]),
        q_span: (qp[&q_attach[0]], qp[q_attach.last().unwrap()]),
        vertices: comp,
        interior,
        p_attach,
        q_attach,
        tie_type: TieType::Other,
        u: None,
        v: None,
        core: Vec::new(),
    };
    let (t, u, v, core) = classify_parts(g, rails, &tie);
    tie.tie_type = t;
    tie.u = u;
    tie.v = v;
    tie.core = core;
    Some(tie)
}

/// Ties of `rails` in `g`, ordered by appearance on Q.
pub fn find_ties(g: &Graph, rails: &RailPair) -> Vec<Tie> {
    let (pp, qp) = rails.positions();
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] || g.degree(s) == 0 {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                if !seen[w] && tie_edge(&pp, &qp, v, w) {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        if let Some(t) = tie_from_component(g, rails, comp) {
            out.push(t);
        }
    }
    out.sort_by_key(|t| (t.q_span, t.p_span, t.vertices[0]));
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SpanShape {
    Point,
    Edge,
    Wide,
}

fn span_shape(att: usize, span: (usize, usize)) -> SpanShape {
    match (att, span.1 - span.0) {
        (1, _) => SpanShape::Point,
        (2, 1) => SpanShape::Edge,
        _ => SpanShape::Wide,
    }
}

pub fn classify_tie(g: &Graph, rails: &RailPair, tie: &Tie) -> TieType {
    classify_parts(g, rails, tie).0
}

fn classify_parts(g: &Graph, rails: &RailPair, tie: &Tie) -> (TieType, Option<Vertex>, Option<Vertex>, Vec<Vertex>) {
    let other = (TieType::Other, None, None, Vec::new());
    let (pp, qp) = rails.positions();
    let in_tie: BTreeSet<Vertex> = tie.vertices.iter().copied().collect();
    let interior: BTreeSet<Vertex> = tie.interior.iter().copied().collect();
    let jn = |x: Vertex| -> Vec<Vertex> {
        g.neighbors(x).iter().copied().filter(|y| in_tie.contains(y) && tie_edge(&pp, &qp, x, *y)).collect()
    };
    // The unique interior vertex that is the only tie neighbor of every attachment.
    let hub = |att: &[Vertex]| -> Result<Option<Vertex>, ()> {
        if att.len() == 1 {
            return Ok(None);
        }
        let first = jn(att[0]);
        match first.as_slice() {
            [h] if interior.contains(h) && att.iter().all(|&a| jn(a) == first) => Ok(Some(*h)),
            _ => Err(()),
        }
    };
    let (Ok(u), Ok(v)) = (hub(&tie.p_attach), hub(&tie.q_attach)) else { return other };
    let start = u.unwrap_or(tie.p_attach[0]);
    let end = v.unwrap_or(tie.q_attach[0]);
    let central: BTreeSet<Vertex> = tie
        .vertices
        .iter()
        .copied()
        .filter(|x| !(u.is_some() && pp.contains_key(x)) && !(v.is_some() && qp.contains_key(x)))
        .collect();
    let core = if start == end {
        if central.len() != 1 || u.is_none() || v.is_none() {
            return other;
        }
        vec![start]
    } else {
        let cn = |x: Vertex| -> Vec<Vertex> { jn(x).into_iter().filter(|y| central.contains(y)).collect() };
        let mut path = vec![start];
        let mut prev = None;
        let mut cur = start;
        loop {
            let nb = cn(cur);
            let want = if cur == start || cur == end { 1 } else { 2 };
            if nb.len() != want {
                return other;
            }
            if cur == end {
                break;
            }
            let Some(&nxt) = nb.iter().find(|&&y| Some(y) != prev) else { return other };
            if path.contains(&nxt) {
                return other;
            }
            path.push(nxt);
            prev = Some(cur);
            cur = nxt;
        }
        if path.len() != central.len() {
            return other;
        }
        path
    };
    use SpanShape::*;
    let t = match (span_shape(tie.p_attach.len(), tie.p_span), span_shape(tie.q_attach.len(), tie.q_span)) {
        (Point, Point) => TieType::I,
        (Edge, Point) => TieType::Y,
        (Point, Edge) => TieType::Lambda,
        (Edge, Edge) => TieType::YLambda,
        (Wide, Point) => TieType::Fork,
        (Point, Wide) => TieType::Rake,
        (Wide, Wide) => TieType::ForkRake,
        _ => return other,
    };
    (t, u, v, core)
}

pub fn ties_cross(t1: &Tie, t2: &Tie) -> bool {
    (t1.q_span.1 < t2.q_span.0 && t2.p_span.1 < t1.p_span.0) || (t1.p_span.1 < t2.p_span.0 && t2.q_span.1 < t1.q_span.0)
}

fn disjoint(a: (usize, usize), b: (usize, usize)) -> bool {
    a.1 < b.0 || b.1 < a.0
}

pub fn ties_independent(t1: &Tie, t2: &Tie) -> bool {
    disjoint(t1.p_span, t2.p_span) && disjoint(t1.q_span, t2.q_span)
}

pub fn tie_full(all: &[Tie], t: &Tie) -> bool {
    !all.iter().any(|o| {
        o.vertices != t.vertices
            && o.p_span.0 <= t.p_span.0
            && t.p_span.1 <= o.p_span.1
            && o.q_span.0 <= t.q_span.0
            && t.q_span.1 <= o.q_span.1
    })
}

/// P order and Q order agree on consecutive elements.
pub fn sequence_is_ordered(seq: &[Tie]) -> bool {
    seq.windows(2).all(|w| w[0].p_span.1 <= w[1].p_span.0 && w[0].q_span.1 <= w[1].q_span.0)
}

pub fn max_noncrossing_sequence(ties: &[Tie]) -> Vec<Tie> {
    let mut js: Vec<&Tie> = ties.iter().filter(|t| tie_full(ties, t)).collect();
    js.sort_by_key(|t| (t.q_span, t.p_span, t.vertices[0]));
    let mut indep: Vec<&Tie> = Vec::new();
    for t in js {
        if indep.iter().all(|o| ties_independent(o, t)) {
            indep.push(t);
        }
    }
    let mut out: Vec<Tie> = Vec::new();
    let mut h = 0;
    while h < indep.len() {
        let cur = indep[h];
        if out.iter().any(|o| ties_cross(o, cur)) {
            h += 1;
            continue;
        }
        out.push(cur.clone());
        h = match (h + 1..indep.len()).rev().find(|&j| ties_cross(cur, indep[j])) {
            Some(last) => last + 1,
            None => h + 1,
        };
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub tie: Tie,
    pub deleted: Vec<Vertex>,
}

pub fn resolve_tie(g: &Graph, rails: &RailPair, tie: &Tie) -> Resolution {
    let in_tie: BTreeSet<Vertex> = tie.vertices.iter().copied().collect();
    let outside: Vec<Vertex> = (0..g.n()).filter(|v| !in_tie.contains(v)).collect();
    let r = g.shortest_path(&tie.p_attach, &tie.q_attach, &outside).expect("a tie joins its rails").0;
    let on_r: BTreeSet<Vertex> = r.iter().copied().collect();
    let deleted: Vec<Vertex> = tie.interior.iter().copied().filter(|v| !on_r.contains(v)).collect();
    let mut keep = vec![false; g.n()];
    for &v in &tie.vertices {
        keep[v] = true;
    }
    for &v in &deleted {
        keep[v] = false;
    }
    let h = g.restricted(&keep);
    let (pp, qp) = rails.positions();
    let mut comp = vec![r[0]];
    let mut seen: BTreeSet<Vertex> = BTreeSet::from([r[0]]);
    let mut i = 0;
    while i < comp.len() {
        let v = comp[i];
        i += 1;
        for &w in h.neighbors(v) {
            if tie_edge(&pp, &qp, v, w) && seen.insert(w) {
                comp.push(w);
            }
        }
    }
    comp.sort_unstable();
    let tie = tie_from_component(g, rails, comp).expect("the shortest path keeps both attachments");
    Resolution { tie, deleted }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rerouted {
    pub rails: RailPair,
    pub ties: Vec<Tie>,
    /// Vertex set of the induced subgraph holding the new rails and ties.
    pub kept: Vec<Vertex>,
}

fn splice(rail: &[Vertex], left: Vertex, right: Vertex, hub: Vertex) -> Vec<Vertex> {
    let a = rail.iter().position(|&x| x == left).expect("left foot on rail");
    let b = rail.iter().position(|&x| x == right).expect("right foot on rail");
    let mut out = rail[..=a].to_vec();
    out.push(hub);
    out.extend_from_slice(&rail[b..]);
    out
}

pub fn reroute_rays(g: &Graph, rails: &RailPair, ties: &[Tie]) -> Result<Rerouted, BridgeError> {
    let mut p = rails.p.0.clone();
    let mut q = rails.q.0.clone();
    for (index, t) in ties.iter().enumerate() {
        let (reroute_p, reroute_q) = match t.tie_type {
            TieType::Fork => (true, false),
            TieType::Rake => (false, true),
            TieType::ForkRake => (true, t.u != t.v),
            found => return Err(BridgeError::BadTieType { index, found }),
        };
        if reroute_p {
            p = splice(&p, t.p_attach[0], *t.p_attach.last().unwrap(), t.u.expect("fork hub"));
        }
        if reroute_q {
            q = splice(&q, t.q_attach[0], *t.q_attach.last().unwrap(), t.v.expect("rake hub"));
        }
    }
    let mut keep = vec![false; g.n()];
    for &v in p.iter().chain(&q) {
        keep[v] = true;
    }
    let on_old: BTreeSet<Vertex> = rails.p.iter().chain(rails.q.iter()).copied().collect();
    for t in ties {
        for &v in &t.interior {
            keep[v] = true;
        }
        for &v in &t.vertices {
            if on_old.contains(&v) && (p.contains(&v) || q.contains(&v)) {
                keep[v] = true;
            }
        }
    }
    let h = g.restricted(&keep);
    let new_rails = RailPair::new(&h, p, q).map_err(|e| BridgeError::StructureViolation(format!("rerouted rails: {e}")))?;
    let ties = find_ties(&h, &new_rails);
    Ok(Rerouted { rails: new_rails, ties, kept: (0..g.n()).filter(|&v| keep[v]).collect() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LadderOutcome {
    MessyLadder(Ladder),
    Cert(Certificate),
    Insufficient,
}

/// Ladder-family certificate from ties of one type. Ties are taken in rail
/// order and each is kept only if the certificate still verifies, so rung
/// edges between the kept ties are skipped over.
pub fn ladder_family_certificate(g: &Graph, rails: &RailPair, ties: &[Tie]) -> Option<Certificate> {
    let tag = match ties.first()?.tie_type {
        TieType::I => FamilyTag::LadderI,
        TieType::Y | TieType::Lambda => FamilyTag::LadderDelta,
        TieType::YLambda => FamilyTag::LadderNablaDelta,
        _ => return None,
    };
    let mut ties: Vec<&Tie> = ties.iter().collect();
    ties.sort_by_key(|t| t.p_span);
    let mut chosen: Vec<&Tie> = Vec::new();
    let mut best = None;
    for t in ties {
        chosen.push(t);
        match build_ladder_certificate(g, rails, tag, &chosen) {
            Some(c) => best = Some(c),
            None if chosen.len() == 1 => best = None,
            None => {
                chosen.pop();
            }
        }
        if best.is_none() {
            chosen.clear();
        }
    }
    best
}

fn build_ladder_certificate(g: &Graph, rails: &RailPair, tag: FamilyTag, ties: &[&Tie]) -> Option<Certificate> {
    let (pp, qp) = rails.positions();
    let p0 = ties[0].p_span.0;
    let q0 = ties[0].q_span.0;
    let p1 = ties.iter().map(|t| t.p_span.1).max()?;
    let q1 = ties.iter().map(|t| t.q_span.1).max()?;
    if q1 < q0 {
        return None;
    }
    let witness_ties = ties
        .iter()
        .map(|t| TieWitness {
            p_feet: t.p_attach.clone(),
            q_feet: t.q_attach.clone(),
            path: t.core.iter().copied().filter(|v| !pp.contains_key(v) && !qp.contains_key(v)).collect(),
        })
        .collect();
    let witness = Witness::Ladder {
        rail_p: VertexPath(rails.p[p0..=p1].to_vec()),
        rail_q: VertexPath(rails.q[q0..=q1].to_vec()),
        ties: witness_ties,
    };
    let cert = Certificate::new(tag, witness, &[]).ok()?;
    verify_certificate(g, &cert).then_some(cert)
}

/// Messy ladder on the rails alone with at least `k` rungs. The start rung is
/// the edge with the most edges weakly after it on both rails.
pub fn messy_ladder_from(g: &Graph, p: &[Vertex], q: &[Vertex], k: usize) -> Option<Ladder> {
    let rails = RailPair { p: VertexPath(p.to_vec()), q: VertexPath(q.to_vec()) };
    let edges = rails.cross_edges(g);
    let after = |&(i, j): &(usize, usize)| edges.iter().filter(|e| e.0 >= i && e.1 >= j).count();
    let &(i, j) = edges.iter().max_by_key(|e| (after(e), std::cmp::Reverse(**e)))?;
    if after(&(i, j)) < k {
        return None;
    }
    let last_i = edges.iter().filter(|e| e.0 >= i && e.1 >= j).map(|e| e.0).max()?;
    let last_j = edges.iter().filter(|e| e.0 >= i && e.1 >= j).map(|e| e.1).max()?;
    let l = Ladder::from_rails(g, p[i..=last_i].to_vec(), q[j..=last_j].to_vec());
    (validate_ladder(&l).is_empty() && l.rungs().len() >= k).then_some(l)
}

/// Splits a tie with many attachments into finite ties by deleting the
/// interiors of skipped disjoint P–Q paths. Returns the deleted vertices.
pub fn peel_oversized_tie(g: &Graph, rails: &RailPair, tie: &Tie) -> Vec<Vertex> {
    let (pp, qp) = rails.positions();
    let in_tie: BTreeSet<Vertex> = tie.vertices.iter().copied().collect();
    let mut forbidden: Vec<Vertex> = (0..g.n()).filter(|v| !in_tie.contains(v)).collect();
    let mut paths: Vec<Vec<Vertex>> = Vec::new();
    while let Some(a) = g.shortest_path(&tie.q_attach, &tie.p_attach, &forbidden) {
        if a.len() < 3 {
            forbidden.extend(a.iter().copied());
            continue;
        }
        forbidden.extend(a.iter().copied());
        paths.push(a.0);
    }
    paths.sort_by_key(|a| qp[&a[0]]);
    let mut owner: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, a) in paths.iter().enumerate() {
        for &v in a {
            owner.insert(v, i);
        }
    }
    let mut deleted: BTreeSet<Vertex> = BTreeSet::new();
    let is_internal = |v: Vertex| !pp.contains_key(&v) && !qp.contains_key(&v);
    let mut h = 0;
    while h < paths.len() {
        // Paths reachable from A_h without crossing the interior of another path.
        let mut seen: BTreeSet<Vertex> = paths[h].iter().copied().collect();
        let mut queue: VecDeque<Vertex> = paths[h].iter().copied().collect();
        let mut reached_max = h;
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if !in_tie.contains(&w) || deleted.contains(&w) || !tie_edge(&pp, &qp, v, w) || !seen.insert(w) {
                    continue;
                }
                match owner.get(&w) {
                    Some(&o) if o != h => {
                        reached_max = reached_max.max(o);
                        if !is_internal(w) {
                            queue.push_back(w);
                        }
                    }
                    _ => queue.push_back(w),
                }
            }
        }
        for a in &paths[h + 1..=reached_max] {
            deleted.extend(a.iter().copied().filter(|&v| is_internal(v)));
        }
        h = reached_max + 1;
    }
    deleted.into_iter().collect()
}

fn count_attachments(t: &Tie) -> usize {
    t.p_attach.len() + t.q_attach.len()
}

pub fn ladder_or_family(g: &Graph, rails: &RailPair, k: usize) -> Result<LadderOutcome, BridgeError> {
    ladder_or_family_traced(g, rails, k).map(|(o, _)| o)
}

pub fn ladder_or_family_traced(g: &Graph, rails: &RailPair, k: usize) -> Result<(LadderOutcome, Vec<String>), BridgeError> {
    let mut trace = Vec::new();
    let rails = RailPair::new(g, rails.p.0.clone(), rails.q.0.clone())?;
    let mut keep = vec![true; g.n()];
    let mut h = g.clone();
    for _ in 0..8 {
        let big: Vec<Tie> = find_ties(&h, &rails).into_iter().filter(|t| count_attachments(t) > 4 * k).collect();
        if big.is_empty() {
            break;
        }
        let mut progress = false;
        for t in &big {
            let del = peel_oversized_tie(&h, &rails, t);
            trace.push(format!("peel: tie with {} attachments, {} vertices deleted", count_attachments(t), del.len()));
            for v in del {
                progress |= keep[v];
                keep[v] = false;
            }
        }
        h = g.restricted(&keep);
        if !progress {
            break;
        }
    }
    let ties = find_ties(&h, &rails);
    let seq = max_noncrossing_sequence(&ties);
    trace.push(format!("ties: {} found, {} in the non-crossing sequence", ties.len(), seq.len()));
    if !sequence_is_ordered(&seq) {
        return Err(BridgeError::StructureViolation("non-crossing sequence is not ordered".into()));
    }
    // Drop ties outside the sequence, then resolve the rest.
    let in_seq: BTreeSet<Vertex> = seq.iter().flat_map(|t| t.interior.iter().copied()).collect();
    for t in &ties {
        for &v in &t.interior {
            if !in_seq.contains(&v) {
                keep[v] = false;
            }
        }
    }
    for t in &seq {
        for v in resolve_tie(&h, &rails, t).deleted {
            keep[v] = false;
        }
    }
    h = g.restricted(&keep);
    let resolved = find_ties(&h, &rails);
    let mut by_type: BTreeMap<TieType, Vec<Tie>> = BTreeMap::new();
    for t in resolved {
        by_type.entry(t.tie_type).or_default().push(t);
    }
    trace.push(format!(
        "resolved types: {}",
        by_type.iter().map(|(t, v)| format!("{t:?}={}", v.len())).collect::<Vec<_>>().join(" ")
    ));
    for ty in [TieType::I, TieType::Y, TieType::Lambda, TieType::YLambda] {
        if let Some(group) = by_type.get(&ty).filter(|v| v.len() >= k) {
            if let Some(c) = ladder_family_certificate(g, &rails, group).filter(|c| c.order >= k) {
                trace.push(format!("certificate from {} ties of type {ty:?}", group.len()));
                return Ok((LadderOutcome::Cert(c), trace));
            }
        }
    }
    let mut forks: Vec<Tie> =
        [TieType::Fork, TieType::Rake, TieType::ForkRake].iter().flat_map(|t| by_type.get(t).cloned().unwrap_or_default()).collect();
    if forks.len() < k {
        trace.push("insufficient ties".into());
        return Ok((LadderOutcome::Insufficient, trace));
    }
    forks.sort_by_key(|t| t.p_span);
    let mut only = vec![false; g.n()];
    for &v in rails.p.iter().chain(rails.q.iter()) {
        only[v] = true;
    }
    for t in &forks {
        for &v in &t.vertices {
            only[v] = true;
        }
    }
    let h2 = h.restricted(&only);
    let rr = reroute_rays(&h2, &rails, &forks)?;
    let rungs = rr.rails.cross_edges(g).len();
    trace.push(format!("rerouted: {} ties, {rungs} rung edges", rr.ties.len()));
    if let Some(l) = messy_ladder_from(g, &rr.rails.p, &rr.rails.q, k) {
        return Ok((LadderOutcome::MessyLadder(l), trace));
    }
    let i_ties: Vec<Tie> = rr.ties.iter().filter(|t| t.tie_type == TieType::I).cloned().collect();
    if i_ties.len() >= k {
        if let Some(c) = ladder_family_certificate(g, &rr.rails, &i_ties).filter(|c| c.order >= k) {
            return Ok((LadderOutcome::Cert(c), trace));
        }
    }
    trace.push("insufficient after rerouting".into());
    Ok((LadderOutcome::Insufficient, trace))
}

/// A shortest path realizing the diameter of the component of vertex 0.
fn diameter_path(g: &Graph) -> Vec<Vertex> {
    let none = vec![false; g.n()];
    let mut best: Option<(usize, Vertex, Vertex)> = None;
    for s in 0..g.n() {
        for (t, d) in g.bfs_distances(&[s], &none).iter().enumerate() {
            if let Some(d) = *d {
                if best.is_none_or(|b| d > b.0) {
                    best = Some((d, s, t));
                }
            }
        }
    }
    best.and_then(|(_, s, t)| g.shortest_path(&[s], &[t], &[])).map(|p| p.0).unwrap_or_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PipelineBranch {
    Perpetual,
    Chain,
    Neither,
}

pub fn locally_finite_pipeline(g: &Graph, k: usize) -> Result<LadderOutcome, BridgeError> {
    locally_finite_pipeline_traced(g, k).map(|(o, _, _)| o)
}

pub fn locally_finite_pipeline_traced(g: &Graph, k: usize) -> Result<(LadderOutcome, PipelineBranch, Vec<String>), BridgeError> {
    let r = VertexPath(diameter_path(g));
    let mut trace = vec![format!("induced path of {} vertices", r.len())];
    if r.len() < 3 {
        return Ok((LadderOutcome::Insufficient, PipelineBranch::Neither, trace));
    }
    match find_bridge_chain(g, &r, k)? {
        BridgeChain::Perpetual(b) => {
            trace.push(format!("perpetual bridge with {} attachments", b.attachments.len()));
            let (out, mut t) = perpetual_branch(g, &r, &b, k)?;
            trace.append(&mut t);
            Ok((out, PipelineBranch::Perpetual, trace))
        }
        BridgeChain::Chain(links) => {
            trace.push(format!("bridge chain of {} links", links.len()));
            let (out, mut t) = chain_branch(g, &r, &links, k)?;
            trace.append(&mut t);
            Ok((out, PipelineBranch::Chain, trace))
        }
        BridgeChain::Neither => {
            trace.push("no perpetual bridge or long chain".into());
            Ok((LadderOutcome::Insufficient, PipelineBranch::Neither, trace))
        }
    }
}

/// Continues on rails `p`, `q` after the last edge between them, inside `g`
/// minus everything before that edge.
fn trim_and_continue(
    g: &Graph,
    p: &[Vertex],
    q: &[Vertex],
    drop: &[Vertex],
    k: usize,
    trace: &mut Vec<String>,
) -> Result<LadderOutcome, BridgeError> {
    let rails = RailPair { p: VertexPath(p.to_vec()), q: VertexPath(q.to_vec()) };
    let edges = rails.cross_edges(g);
    // Maximal edge: nothing lies weakly after it on both rails.
    let (i, j) = edges
        .iter()
        .copied()
        .filter(|&(a, b)| !edges.iter().any(|&(c, d)| (c, d) != (a, b) && c >= a && d >= b))
        .max()
        .unwrap_or((0, 0));
    let (cut_p, cut_q) = if edges.is_empty() { (0, 0) } else { (i + 1, j + 1) };
    if cut_p >= p.len() || cut_q >= q.len() {
        trace.push("rails end at the last edge between them".into());
        return Ok(LadderOutcome::Insufficient);
    }
    let mut keep = vec![true; g.n()];
    for &v in p[..cut_p].iter().chain(&q[..cut_q]).chain(drop) {
        keep[v] = false;
    }
    let h = g.restricted(&keep);
    let rails = match RailPair::new(&h, p[cut_p..].to_vec(), q[cut_q..].to_vec()) {
        Ok(r) => r,
        Err(e) => {
            trace.push(format!("trimmed rails rejected: {e}"));
            return Ok(LadderOutcome::Insufficient);
        }
    };
    trace.push(format!("trimmed rails to {} and {} vertices", rails.p.len(), rails.q.len()));
    let (out, mut t) = ladder_or_family_traced(&h, &rails, k)?;
    trace.append(&mut t);
    Ok(out)
}

fn perpetual_branch(g: &Graph, r: &VertexPath, b: &Bridge, k: usize) -> Result<(LadderOutcome, Vec<String>), BridgeError> {
    let mut trace = Vec::new();
    let insufficient = |mut trace: Vec<String>, why: &str| {
        trace.push(why.to_string());
        Ok((LadderOutcome::Insufficient, trace))
    };
    let rpos: BTreeMap<Vertex, usize> = r.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let interior: BTreeSet<Vertex> = b.interior().into_iter().collect();
    let w = *b.attachments.iter().min_by_key(|a| rpos[a]).expect("attachments");
    let mut targets: Vec<Vertex> = Vec::new();
    for &c in &interior {
        if g.neighbors(c).iter().any(|x| rpos.contains_key(x)) && targets.iter().all(|&t| !g.has_edge(t, c)) {
            targets.push(c);
        }
    }
    if targets.len() < 2 {
        return insufficient(trace, "too few bridge vertices next to the path");
    }
    let outside: Vec<Vertex> = (0..g.n()).filter(|v| !interior.contains(v)).collect();
    let tree = match build_connecting_tree_avoiding(g, &targets, targets.len(), &outside) {
        Ok(t) => t,
        Err(e) => return insufficient(trace, &format!("connecting tree failed: {e}")),
    };
    let mut ray = tree.ray().0;
    if !g.is_induced_path(&ray) {
        ray = g.shortest_path(&[ray[0]], &[*ray.last().unwrap()], &outside).expect("ray ends are connected").0;
    }
    trace.push(format!("second rail seed: ray of {} vertices", ray.len()));
    let mut forbid_s = outside.clone();
    forbid_s.retain(|&v| v != w);
    let s = g.shortest_path(&[w], &ray, &forbid_s).expect("bridge is connected").0;
    let ray_pos: BTreeMap<Vertex, usize> = ray.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let ri = s
        .iter()
        .flat_map(|&x| g.neighbors(x).iter().filter_map(|y| ray_pos.get(y).copied()))
        .max()
        .expect("the splice path ends next to the ray");
    let sk = s.iter().position(|&x| g.has_edge(x, ray[ri])).expect("some splice vertex sees r_i");
    let mut q: Vec<Vertex> = s[..=sk].to_vec();
    q.extend_from_slice(&ray[ri..]);
    if !g.is_induced_path(&q) {
        return insufficient(trace, "spliced rail is not induced");
    }
    let p_full: Vec<Vertex> = r[rpos[&w]..].to_vec();
    let q_full: Vec<Vertex> = q[1..].to_vec();
    if q_full.is_empty() {
        return insufficient(trace, "second rail is empty");
    }
    let rails = RailPair { p: VertexPath(p_full.clone()), q: VertexPath(q_full.clone()) };
    let edges = rails.cross_edges(g);
    trace.push(format!("{} edges between the rails", edges.len()));
    if let Some(l) = messy_ladder_from(g, &p_full, &q_full, k) {
        return Ok((LadderOutcome::MessyLadder(l), trace));
    }
    let before: Vec<Vertex> = r[..rpos[&w]].to_vec();
    let out = trim_and_continue(g, &p_full, &q_full, &before, k, &mut trace)?;
    Ok((out, trace))
}

fn chain_branch(g: &Graph, r: &VertexPath, links: &[ChainLink], k: usize) -> Result<(LadderOutcome, Vec<String>), BridgeError> {
    let mut trace = Vec::new();
    if links.len() < 2 {
        trace.push("chain too short".into());
        return Ok((LadderOutcome::Insufficient, trace));
    }
    let qs: Vec<Vec<Vertex>> = links
        .iter()
        .map(|l| {
            let inner: BTreeSet<Vertex> = l.bridge.interior().into_iter().collect();
            let forbid: Vec<Vertex> = (0..g.n()).filter(|v| !inner.contains(v) && *v != r[l.u] && *v != r[l.v]).collect();
            g.shortest_path(&[r[l.u]], &[r[l.v]], &forbid).expect("bridge joins its span").0
        })
        .collect();
    let seg = |a: usize, b: usize| -> Vec<Vertex> { if a + 1 < b { r[a + 1..b].to_vec() } else { Vec::new() } };
    let mut w: Vec<Vertex> = qs[0].clone();
    let mut x: Vec<Vertex> = seg(links[0].u, links[1].u);
    x.extend_from_slice(&qs[1]);
    for j in 2..links.len() {
        let rail = if j % 2 == 0 { &mut w } else { &mut x };
        let mid = seg(links[j - 2].v, links[j].u);
        if links[j - 2].v == links[j].u {
            rail.extend_from_slice(&qs[j][1..]);
        } else {
            rail.extend_from_slice(&mid);
            rail.extend_from_slice(&qs[j]);
        }
    }
    let used: BTreeSet<Vertex> = w.iter().chain(&x).copied().collect();
    let last = links.last().unwrap().v;
    let dropped: Vec<Vertex> = r[..=last].iter().copied().filter(|v| !used.contains(v)).collect();
    let mut keep = vec![false; g.n()];
    for &v in &used {
        keep[v] = true;
    }
    let h = g.restricted(&keep);
    if used.len() != w.len() + x.len() || !h.is_induced_path(&w) || !h.is_induced_path(&x) {
        trace.push("chain rails are not induced and disjoint".into());
        return Ok((LadderOutcome::Insufficient, trace));
    }
    let rails = RailPair { p: VertexPath(w.clone()), q: VertexPath(x.clone()) };
    let edges = rails.cross_edges(g);
    trace.push(format!("chain rails of {} and {} vertices, {} edges between", w.len(), x.len(), edges.len()));
    if let Some(l) = messy_ladder_from(g, &w, &x, k) {
        return Ok((LadderOutcome::MessyLadder(l), trace));
    }
    let out = trim_and_continue(g, &w, &x, &dropped, k, &mut trace)?;
    Ok((out, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_fan, make_ladder_family};
    use crate::graph::named;

    fn rails(g: &Graph, p: &[Vertex], q: &[Vertex]) -> RailPair {
        RailPair::new(g, p.to_vec(), q.to_vec()).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let g = named::cycle(6);
        let b = bridge_decompose(&g, &[0, 1], &[(0, 1)]).unwrap();
        assert_eq!(b.len(), 1);
        assert!(!b[0].degenerate);
        assert_eq!(b[0].attachments, vec![0, 1]);
        assert_eq!(b[0].edges.len(), 5);

        let g = named::complete(4);
        let b = bridge_decompose(&g, &[0, 1, 2], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].attachments, vec![0, 1, 2]);

        let g = Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap();
        let b = bridge_decompose(&g, &[0, 1, 2, 3], &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b[0].degenerate);

        assert!(bridge_decompose(&g, &[0, 1], &[(0, 3)]).is_err());
    }

    #[test]
    fn bridge_chain_examples() {
        let (g, cert) = make_fan(&[0; 8], &[0; 7]).unwrap();
        let Witness::Fan { rim, .. } = cert.witness else { panic!() };
        assert!(matches!(find_bridge_chain(&g, &rim, 4).unwrap(), BridgeChain::Perpetual(b) if b.attachments.len() == 8));
        let g = named::cycle(5);
        assert_eq!(find_bridge_chain(&g, &VertexPath(vec![0, 1, 2, 3]), 3).unwrap(), BridgeChain::Neither);
        assert_eq!(find_bridge_chain(&g, &VertexPath(vec![0, 1, 2, 3, 4]), 3), Err(BridgeError::NotInduced));
    }

    #[test]
    fn overlapping_arcs_form_a_chain() {
        // Path 0..=12 with arcs 0~4, 2~6, 5~8, 7~10, 9~12 through one fresh vertex each.
        let arcs = [(0, 4), (2, 6), (5, 8), (7, 10), (9, 12)];
        let mut e: Vec<(Vertex, Vertex)> = (0..12).map(|i| (i, i + 1)).collect();
        for (i, &(a, b)) in arcs.iter().enumerate() {
            e.extend([(a, 13 + i), (13 + i, b)]);
        }
        let g = Graph::from_edge_list(18, &e).unwrap();
        let BridgeChain::Chain(links) = find_bridge_chain(&g, &VertexPath((0..13).collect()), 4).unwrap() else { panic!() };
        let spans: Vec<(usize, usize)> = links.iter().map(|l| (l.u, l.v)).collect();
        assert_eq!(spans, arcs.to_vec());
        assert!(chain_interleaves(&links));
    }

    #[test]
    fn tie_examples() {
        let g = named::ladder_grid(3);
        let rp = rails(&g, &[0, 1, 2], &[3, 4, 5]);
        let t = find_ties(&g, &rp);
        assert_eq!(t.len(), 3);
        assert!(t.iter().all(|t| t.tie_type == TieType::I));

        let (g, cert) = make_ladder_family(FamilyTag::LadderDelta, 2, &[2], &[1, 1]).unwrap();
        let Witness::Ladder { rail_p, rail_q, .. } = cert.witness else { panic!() };
        let t = find_ties(&g, &rails(&g, &rail_p, &rail_q));
        assert_eq!(t.iter().map(|t| t.tie_type).collect::<Vec<_>>(), vec![TieType::Y, TieType::Y]);

        let g = Graph::from_edge_list(7, &[(0, 1), (1, 2), (3, 4), (4, 5), (1, 6)]).unwrap();
        assert!(find_ties(&g, &rails(&g, &[0, 1, 2], &[3, 4, 5])).is_empty());
    }

    #[test]
    fn classify_examples() {
        // P = 0,1,2,3,4; Q = 10..14.
        let base: Vec<(Vertex, Vertex)> = (0..4).map(|i| (i, i + 1)).chain((10..14).map(|i| (i, i + 1))).collect();
        let classify = |extra: &[(Vertex, Vertex)]| {
            let mut e = base.clone();
            e.extend_from_slice(extra);
            let g = Graph::from_edge_list(20, &e).unwrap();
            let t = find_ties(&g, &rails(&g, &[0, 1, 2, 3, 4], &[10, 11, 12, 13, 14]));
            assert_eq!(t.len(), 1);
            t[0].tie_type
        };
        assert_eq!(classify(&[(1, 11)]), TieType::I);
        assert_eq!(classify(&[(1, 15), (2, 15), (15, 16), (16, 12)]), TieType::Y);
        assert_eq!(classify(&[(1, 15), (15, 11), (15, 12)]), TieType::Lambda);
        assert_eq!(classify(&[(1, 15), (2, 15), (15, 16), (16, 11), (16, 12)]), TieType::YLambda);
        assert_eq!(classify(&[(1, 15), (2, 15), (3, 15), (15, 16), (16, 12)]), TieType::Fork);
        assert_eq!(classify(&[(2, 15), (15, 11), (15, 13)]), TieType::Rake);
        assert_eq!(classify(&[(1, 15), (3, 15), (15, 11), (15, 13)]), TieType::ForkRake);
        assert_eq!(classify(&[(1, 15), (2, 15), (15, 11), (15, 13)]), TieType::Other);
        assert_eq!(classify(&[(1, 15), (15, 16), (16, 12), (1, 16)]), TieType::Other);
    }

    fn span_tie(p: (usize, usize), q: (usize, usize), id: Vertex) -> Tie {
        Tie {
            vertices: vec![id],
            interior: vec![],
            p_attach: vec![],
            q_attach: vec![],
            p_span: p,
            q_span: q,
            tie_type: TieType::I,
            u: None,
            v: None,
            core: vec![],
        }
    }

    #[test]
    fn crossing_predicates() {
        let a = span_tie((1, 1), (1, 1), 0);
        let b = span_tie((3, 3), (3, 3), 1);
        assert!(!ties_cross(&a, &b) && ties_independent(&a, &b));
        let c = span_tie((5, 5), (0, 0), 2);
        let d = span_tie((0, 0), (5, 5), 3);
        assert!(ties_cross(&c, &d));
        let big = span_tie((0, 6), (0, 6), 4);
        let inner = span_tie((2, 3), (2, 3), 5);
        assert!(!tie_full(&[big.clone(), inner.clone()], &inner));
        assert!(tie_full(&[big.clone(), inner], &big));
    }

    #[test]
    fn noncrossing_sequence_examples() {
        assert!(max_noncrossing_sequence(&[]).is_empty());
        let ordered: Vec<Tie> = (0..4).map(|i| span_tie((2 * i, 2 * i), (2 * i, 2 * i), i)).collect();
        assert_eq!(max_noncrossing_sequence(&ordered), ordered);
        let mixed = vec![
            span_tie((4, 4), (0, 0), 0),
            span_tie((0, 0), (2, 2), 1),
            span_tie((6, 6), (4, 4), 2),
            span_tie((8, 8), (6, 6), 3),
        ];
        let out = max_noncrossing_sequence(&mixed);
        assert_eq!(out.iter().map(|t| t.vertices[0]).collect::<Vec<_>>(), vec![0, 2, 3]);
        assert!(sequence_is_ordered(&out));
        for (i, a) in out.iter().enumerate() {
            for b in &out[i + 1..] {
                assert!(!ties_cross(a, b) && ties_independent(a, b));
            }
        }
    }

    #[test]
    fn resolve_examples() {
        let base: Vec<(Vertex, Vertex)> = (0..4).map(|i| (i, i + 1)).chain((10..14).map(|i| (i, i + 1))).collect();
        let p = [0, 1, 2, 3, 4];
        let q = [10, 11, 12, 13, 14];
        let run = |extra: &[(Vertex, Vertex)]| {
            let mut e = base.clone();
            e.extend_from_slice(extra);
            let g = Graph::from_edge_list(20, &e).unwrap();
            let rp = rails(&g, &p, &q);
            let t = find_ties(&g, &rp);
            resolve_tie(&g, &rp, &t[0])
        };
        let r = run(&[(1, 15), (15, 11)]);
        assert_eq!(r.tie.tie_type, TieType::I);
        assert!(r.deleted.is_empty());
        // Blob: 2-15-12 plus side vertices 16, 17.
        let r = run(&[(2, 15), (15, 12), (15, 16), (16, 17), (17, 13), (16, 3)]);
        assert_eq!(r.tie.tie_type, TieType::I);
        assert_eq!(r.deleted, vec![16, 17]);
        // Hub 15 sees three P vertices; a longer detour is dropped.
        let r = run(&[(1, 15), (2, 15), (3, 15), (15, 16), (16, 12), (3, 17), (17, 18), (18, 19), (19, 13)]);
        assert_eq!(r.tie.tie_type, TieType::Fork);
        assert_eq!(r.deleted, vec![17, 18, 19]);
    }

    #[test]
    fn reroute_four_ties() {
        // P = 0..=19, Q = 20..=39; fork at P 1..3, rake at Q 6..8,
        // fork-rake with u = v at 11..13 / 11..13, fork-rake with u != v at 16..18.
        let mut e: Vec<(Vertex, Vertex)> = (0..19).map(|i| (i, i + 1)).chain((20..39).map(|i| (i, i + 1))).collect();
        e.extend([(1, 40), (2, 40), (3, 40), (40, 41), (41, 22)]);
        e.extend([(7, 42), (42, 43), (43, 26), (43, 27), (43, 28)]);
        e.extend([(11, 44), (13, 44), (44, 31), (44, 33)]);
        e.extend([(16, 45), (18, 45), (45, 46), (46, 36), (46, 38)]);
        let g = Graph::from_edge_list(47, &e).unwrap();
        let rp = rails(&g, &(0..20).collect::<Vec<_>>(), &(20..40).collect::<Vec<_>>());
        let ties = find_ties(&g, &rp);
        let types: Vec<TieType> = ties.iter().map(|t| t.tie_type).collect();
        assert_eq!(types, vec![TieType::Fork, TieType::Rake, TieType::ForkRake, TieType::ForkRake]);
        let rr = reroute_rays(&g, &rp, &ties).unwrap();
        assert!(rr.rails.p.contains(&40) && rr.rails.p.contains(&44) && rr.rails.p.contains(&45));
        assert!(rr.rails.q.contains(&43) && rr.rails.q.contains(&46) && !rr.rails.q.contains(&44));
        let h = g.restricted(&(0..g.n()).map(|v| rr.kept.contains(&v)).collect::<Vec<_>>());
        assert!(h.is_induced_path(&rr.rails.p) && h.is_induced_path(&rr.rails.q));
        assert_eq!(rr.ties.len(), 4);
        assert!(rr.ties.iter().all(|t| t.tie_type == TieType::I || t.is_fan_remnant()));
        assert_eq!(rr.ties.iter().filter(|t| t.is_fan_remnant()).count(), 1);
        let empty = reroute_rays(&g, &rp, &[]).unwrap();
        assert_eq!(empty.rails, rp);
        let bad = find_ties(&named::ladder_grid(3), &rails(&named::ladder_grid(3), &[0, 1, 2], &[3, 4, 5]));
        assert!(matches!(
            reroute_rays(&named::ladder_grid(3), &rails(&named::ladder_grid(3), &[0, 1, 2], &[3, 4, 5]), &bad),
            Err(BridgeError::BadTieType { index: 0, found: TieType::I })
        ));
    }

    #[test]
    fn ladder_or_family_examples() {
        let (g, cert) = make_ladder_family(FamilyTag::LadderI, 5, &[2; 4], &[2; 5]).unwrap();
        let Witness::Ladder { rail_p, rail_q, .. } = cert.witness else { panic!() };
        let out = ladder_or_family(&g, &rails(&g, &rail_p, &rail_q), 5).unwrap();
        assert!(matches!(out, LadderOutcome::Cert(c) if c.tag == FamilyTag::LadderI && c.order >= 5));

        // Fork ties whose hub sees the Q vertex directly.
        let k = 4;
        let len = 4 * k + 2;
        let mut e: Vec<(Vertex, Vertex)> = (0..len - 1).map(|i| (i, i + 1)).chain((len..2 * len - 1).map(|i| (i, i + 1))).collect();
        for i in 0..k {
            let hub = 2 * len + i;
            let a = 4 * i + 1;
            e.extend([(a, hub), (a + 1, hub), (a + 2, hub), (hub, len + a + 1)]);
        }
        let g = Graph::from_edge_list(2 * len + k, &e).unwrap();
        let rp = rails(&g, &(0..len).collect::<Vec<_>>(), &(len..2 * len).collect::<Vec<_>>());
        match ladder_or_family(&g, &rp, k).unwrap() {
            LadderOutcome::MessyLadder(l) => {
                assert!(validate_ladder(&l).is_empty());
                assert!(l.rungs().len() >= k);
            }
            other => panic!("{other:?}"),
        }

        let g = named::ladder_grid(2);
        assert_eq!(ladder_or_family(&g, &rails(&g, &[0, 1], &[2, 3]), 5).unwrap(), LadderOutcome::Insufficient);
    }

    #[test]
    fn pipeline_examples() {
        let g = named::ladder_grid(12);
        match locally_finite_pipeline(&g, 4).unwrap() {
            LadderOutcome::MessyLadder(l) => assert!(validate_ladder(&l).is_empty() && l.rungs().len() >= 4),
            LadderOutcome::Cert(c) => assert!(verify_certificate(&g, &c) && c.order >= 4),
            LadderOutcome::Insufficient => panic!("grid should give a ladder"),
        }
        assert_eq!(locally_finite_pipeline(&named::cycle(10), 4).unwrap(), LadderOutcome::Insufficient);
    }
}
