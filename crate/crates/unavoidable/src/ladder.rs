//! Messy ladders, crosses, and cross resolution.
//!
//! Rail positions are indices along each rail. A rung `e` has ends `e_W` on
//! rail W and `e_X` on rail X; the ordered pair `(e, f)` is a cross when
//! `e_W < f_W` and `f_X < e_X`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{Certificate, FamilyTag, Witness};
use crate::graph::{Graph, Vertex, VertexPath};

const NONE: usize = usize::MAX;

/// Two disjoint rails in a graph plus the rungs between them. Vertex ids are
/// those of the graph the ladder was cut from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladder {
    graph: Graph,
    w: Vec<Vertex>,
    x: Vec<Vertex>,
    rungs: Vec<(Vertex, Vertex)>,
    pos_w: Vec<usize>,
    pos_x: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rail {
    W,
    X,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LadderViolation {
    EmptyRail(Rail),
    RailsOverlap(Vertex),
    RailNotPath { rail: Rail, index: usize },
    RailNotInduced { rail: Rail, u: Vertex, v: Vertex },
    RungEndpoints { u: Vertex, v: Vertex },
    RungMissing { u: Vertex, v: Vertex },
    UnlistedEdge { u: Vertex, v: Vertex },
    VertexOffRails(Vertex),
    NoInitialRung,
}

impl fmt::Display for LadderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LadderViolation::EmptyRail(r) => write!(f, "rail {r:?} is empty"),
            LadderViolation::RailsOverlap(v) => write!(f, "rails overlap at {v}"),
            LadderViolation::RailNotPath { rail, index } => {
                write!(f, "rail {rail:?} is not a path at index {index}")
            }
            LadderViolation::RailNotInduced { rail, u, v } => {
                write!(f, "rail not induced: {rail:?} has chord {u}-{v}")
            }
            LadderViolation::RungEndpoints { u, v } => write!(f, "rung endpoints: {u}-{v} does not join W to X"),
            LadderViolation::RungMissing { u, v } => write!(f, "rung {u}-{v} is not an edge"),
            LadderViolation::UnlistedEdge { u, v } => write!(f, "edge {u}-{v} is neither rail edge nor rung"),
            LadderViolation::VertexOffRails(v) => write!(f, "vertex {v} has edges but lies on neither rail"),
            LadderViolation::NoInitialRung => write!(f, "no rung joins the initial rail vertices"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("invalid ladder: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    BadLadder(Vec<LadderViolation>),
    #[error("the rung pair is not a cross of this ladder")]
    NotACross,
    #[error("cross is not full")]
    NotFull,
    #[error("structure violation: {0}")]
    StructureViolation(String),
}

/// Ordered rung pair `(e, f)` with `e_W < f_W` and `f_X < e_X`. Rungs are
/// stored as `(W end, X end)`; spans are rail positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cross {
    pub e: (Vertex, Vertex),
    pub f: (Vertex, Vertex),
    pub w_span: (usize, usize),
    pub x_span: (usize, usize),
    pub degenerate: bool,
    pub full: bool,
}

impl Cross {
    pub fn independent(&self, other: &Cross) -> bool {
        let disjoint = |a: (usize, usize), b: (usize, usize)| a.1 <= b.0 || b.1 <= a.0;
        disjoint(self.w_span, other.w_span) && disjoint(self.x_span, other.x_span)
    }

    pub fn contains(&self, other: &Cross) -> bool {
        self.w_span.0 <= other.w_span.0
            && self.w_span.1 >= other.w_span.1
            && self.x_span.0 <= other.x_span.0
            && self.x_span.1 >= other.x_span.1
    }

    pub fn corners(&self) -> [Vertex; 4] {
        [self.e.0, self.e.1, self.f.0, self.f.1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrossSequence {
    Sequence(Vec<Cross>),
    /// Rail positions from which the ladder is cross-free.
    CrossFreeTail { w: usize, x: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    /// Parity of the 1-based sequence position.
    pub fn of_position(i: usize) -> Parity {
        if i % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

fn positions_of(n: usize, rail: &[Vertex]) -> Vec<usize> {
    let mut pos = vec![NONE; n];
    for (i, &v) in rail.iter().enumerate() {
        if v < n {
            pos[v] = i;
        }
    }
    pos
}

impl Ladder {
    /// Raw constructor; use [`validate_ladder`] to check it.
    pub fn new(graph: Graph, w: Vec<Vertex>, x: Vec<Vertex>, rungs: Vec<(Vertex, Vertex)>) -> Ladder {
        let pos_w = positions_of(graph.n(), &w);
        let pos_x = positions_of(graph.n(), &x);
        Ladder { graph, w, x, rungs, pos_w, pos_x }
    }

    /// Ladder on the subgraph of `host` induced by the rails; every non-rail edge is a rung.
    pub fn from_rails(host: &Graph, w: Vec<Vertex>, x: Vec<Vertex>) -> Ladder {
        let mut verts: Vec<Vertex> = w.iter().chain(&x).copied().collect();
        verts.sort_unstable();
        let edges: Vec<_> = host.induced_edges(&verts).into_iter().collect();
        let graph = Graph::from_edge_list(host.n(), &edges).expect("host edges are valid");
        let pos_w = positions_of(graph.n(), &w);
        let pos_x = positions_of(graph.n(), &x);
        let mut rungs = Vec::new();
        for &(u, v) in &edges {
            if pos_w[u] != NONE && pos_x[v] != NONE {
                rungs.push((u, v));
            } else if pos_x[u] != NONE && pos_w[v] != NONE {
                rungs.push((v, u));
            }
        }
        rungs.sort_by_key(|&(a, b)| (pos_w[a], pos_x[b]));
        Ladder { graph, w, x, rungs, pos_w, pos_x }
    }

    /// Fresh ladder with W = `0..w_len`, X = `w_len..w_len+x_len` and rungs given by rail positions.
    pub fn from_positions(w_len: usize, x_len: usize, rungs: &[(usize, usize)]) -> Result<Ladder, LadderError> {
        let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
        edges.extend((1..w_len).map(|i| (i - 1, i)));
        edges.extend((1..x_len).map(|i| (w_len + i - 1, w_len + i)));
        for &(i, j) in rungs {
            if i >= w_len || j >= x_len {
                return Err(LadderError::StructureViolation(format!("rung ({i}, {j}) is off the rails")));
            }
            edges.push((i, w_len + j));
        }
        let g = Graph::from_edge_list(w_len + x_len, &edges).expect("positions are in range");
        let l = Ladder::from_rails(&g, (0..w_len).collect(), (w_len..w_len + x_len).collect());
        let report = validate_ladder(&l);
        if report.is_empty() {
            Ok(l)
        } else {
            Err(LadderError::BadLadder(report))
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rail_w(&self) -> &[Vertex] {
        &self.w
    }

    pub fn rail_x(&self) -> &[Vertex] {
        &self.x
    }

    /// Rungs as `(W end, X end)`.
    pub fn rungs(&self) -> &[(Vertex, Vertex)] {
        &self.rungs
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.w.iter().chain(&self.x).copied().collect();
        v.sort_unstable();
        v
    }

    pub fn pos_w(&self, v: Vertex) -> Option<usize> {
        self.pos_w.get(v).copied().filter(|&p| p != NONE)
    }

    pub fn pos_x(&self, v: Vertex) -> Option<usize> {
        self.pos_x.get(v).copied().filter(|&p| p != NONE)
    }

    /// Rungs as rail positions, sorted.
    pub fn rung_positions(&self) -> Vec<(usize, usize)> {
        let mut r: Vec<_> = self.rungs.iter().map(|&(a, b)| (self.pos_w[a], self.pos_x[b])).collect();
        r.sort_unstable();
        r
    }

    /// Edge set of the ladder graph.
    pub fn edge_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.graph.induced_edges(&self.vertices())
    }

    /// The ladder read as a clean-ladder certificate, when it is clean and valid.
    pub fn to_certificate(&self) -> Option<Certificate> {
        if !validate_ladder(self).is_empty() || !is_clean(self) {
            return None;
        }
        let mut rungs: Vec<[Vertex; 2]> = self.rungs.iter().map(|&(a, b)| [a, b]).collect();
        let first = rungs.iter().position(|r| *r == [self.w[0], self.x[0]])?;
        rungs.swap(0, first);
        Certificate::new(
            FamilyTag::CleanLadder,
            Witness::CleanLadder { rail_w: VertexPath(self.w.clone()), rail_x: VertexPath(self.x.clone()), rungs },
            &[],
        )
        .ok()
    }

    /// Sub-ladder on rail prefixes `W[..w_len]` and `X[..x_len]`.
    pub fn prefix(&self, w_len: usize, x_len: usize) -> Ladder {
        Ladder::from_rails(&self.graph, self.w[..w_len.min(self.w.len())].to_vec(), self.x[..x_len.min(self.x.len())].to_vec())
    }

    /// Sub-ladder on rail suffixes `W[w..]` and `X[x..]`.
    pub fn suffix(&self, w: usize, x: usize) -> Ladder {
        Ladder::from_rails(&self.graph, self.w[w.min(self.w.len())..].to_vec(), self.x[x.min(self.x.len())..].to_vec())
    }

    fn cross_at(&self, e: (usize, usize), f: (usize, usize)) -> Option<Cross> {
        (e.0 < f.0 && f.1 < e.1).then(|| Cross {
            e: (self.w[e.0], self.x[e.1]),
            f: (self.w[f.0], self.x[f.1]),
            w_span: (e.0, f.0),
            x_span: (f.1, e.1),
            degenerate: f.0 - e.0 == 1 && e.1 - f.1 == 1,
            full: false,
        })
    }
}

pub fn validate_ladder(l: &Ladder) -> Vec<LadderViolation> {
    let mut out = Vec::new();
    let g = &l.graph;
    for (rail, list) in [(Rail::W, &l.w), (Rail::X, &l.x)] {
        if list.is_empty() {
            out.push(LadderViolation::EmptyRail(rail));
            continue;
        }
        for (i, pair) in list.windows(2).enumerate() {
            if !g.has_edge(pair[0], pair[1]) {
                out.push(LadderViolation::RailNotPath { rail, index: i });
            }
        }
        let pos = positions_of(g.n(), list);
        for (i, &u) in list.iter().enumerate() {
            for &v in g.neighbors(u) {
                if pos[v] != NONE && pos[v] > i + 1 {
                    out.push(LadderViolation::RailNotInduced { rail, u, v });
                }
            }
        }
    }
    if !out.is_empty() && out.iter().any(|v| matches!(v, LadderViolation::EmptyRail(_))) {
        return out;
    }
    let mut on_w = BTreeSet::new();
    for &v in &l.w {
        on_w.insert(v);
    }
    for &v in &l.x {
        if on_w.contains(&v) {
            out.push(LadderViolation::RailsOverlap(v));
        }
    }
    let mut listed = BTreeSet::new();
    for &(u, v) in &l.rungs {
        let joins = (l.pos_w(u).is_some() && l.pos_x(v).is_some()) || (l.pos_x(u).is_some() && l.pos_w(v).is_some());
        if !joins {
            out.push(LadderViolation::RungEndpoints { u, v });
        }
        if !g.has_edge(u, v) {
            out.push(LadderViolation::RungMissing { u, v });
        }
        listed.insert((u.min(v), u.max(v)));
    }
    for (u, v) in g.edges() {
        let on = |a: Vertex| l.pos_w(a).is_some() || l.pos_x(a).is_some();
        for a in [u, v] {
            if !on(a) {
                out.push(LadderViolation::VertexOffRails(a));
            }
        }
        let rail_edge = matches!((l.pos_w(u), l.pos_w(v)), (Some(a), Some(b)) if a.abs_diff(b) == 1)
            || matches!((l.pos_x(u), l.pos_x(v)), (Some(a), Some(b)) if a.abs_diff(b) == 1);
        if !rail_edge && !listed.contains(&(u, v)) {
            out.push(LadderViolation::UnlistedEdge { u, v });
        }
    }
    if !g.has_edge(l.w[0], l.x[0]) {
        out.push(LadderViolation::NoInitialRung);
    }
    out.dedup();
    out
}

type RungSet = BTreeSet<(usize, usize)>;

/// Rungs with no other rung weakly up-left of them (`g_W ≤ e_W`, `g_X ≥ e_X`),
/// and rungs with no other rung weakly down-right (`h_W ≥ f_W`, `h_X ≤ f_X`).
fn extremal_rungs(rungs: &[(usize, usize)]) -> (RungSet, RungSet) {
    let mut up_left = BTreeSet::new();
    let mut best_x: Option<usize> = None;
    // Sorted by W ascending; within equal W, larger X first.
    let mut by_w = rungs.to_vec();
    by_w.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    for &r in &by_w {
        if best_x.is_none_or(|bx| r.1 > bx) {
            up_left.insert(r);
        }
        best_x = Some(best_x.map_or(r.1, |bx| bx.max(r.1)));
    }
    let mut down_right = BTreeSet::new();
    let mut best_x: Option<usize> = None;
    by_w.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for &r in &by_w {
        if best_x.is_none_or(|bx| r.1 < bx) {
            down_right.insert(r);
        }
        best_x = Some(best_x.map_or(r.1, |bx| bx.min(r.1)));
    }
    (up_left, down_right)
}

/// All crosses, with degenerate and full flags set.
pub fn find_crosses(l: &Ladder) -> Vec<Cross> {
    let rungs = l.rung_positions();
    let (ul, dr) = extremal_rungs(&rungs);
    let mut out = Vec::new();
    for &e in &rungs {
        for &f in &rungs {
            if let Some(mut c) = l.cross_at(e, f) {
                c.full = ul.contains(&e) && dr.contains(&f);
                out.push(c);
            }
        }
    }
    out
}

/// Only the full crosses; cheaper than filtering [`find_crosses`].
pub fn full_crosses(l: &Ladder) -> Vec<Cross> {
    let rungs = l.rung_positions();
    let (ul, dr) = extremal_rungs(&rungs);
    let mut out = Vec::new();
    for &e in &ul {
        for &f in &dr {
            if let Some(mut c) = l.cross_at(e, f) {
                c.full = true;
                out.push(c);
            }
        }
    }
    out.sort_by_key(|c| (c.w_span.0, c.w_span.1, c.x_span.0, c.x_span.1));
    out
}

fn locate(l: &Ladder, c: &Cross) -> Option<((usize, usize), (usize, usize))> {
    let e = (l.pos_w(c.e.0)?, l.pos_x(c.e.1)?);
    let f = (l.pos_w(c.f.0)?, l.pos_x(c.f.1)?);
    l.graph.has_edge(c.e.0, c.e.1).then_some(())?;
    l.graph.has_edge(c.f.0, c.f.1).then_some(())?;
    Some((e, f))
}

/// A full cross whose spans contain those of `c`: the extremal rung up-left of
/// `e` paired with the extremal rung down-right of `f`.
pub fn full_cross_closure(l: &Ladder, c: &Cross) -> Result<Cross, LadderError> {
    let (e, f) = locate(l, c).ok_or(LadderError::NotACross)?;
    l.cross_at(e, f).ok_or(LadderError::NotACross)?;
    let rungs = l.rung_positions();
    let g = rungs
        .iter()
        .copied()
        .filter(|r| r.0 <= e.0 && r.1 >= e.1)
        .min_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("e itself qualifies");
    let h = rungs
        .iter()
        .copied()
        .filter(|r| r.0 >= f.0 && r.1 <= f.1)
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("f itself qualifies");
    let mut out = l.cross_at(g, h).expect("extremal rungs around a cross still cross");
    out.full = true;
    Ok(out)
}

/// Greedy maximal sequence of pairwise independent full crosses, scanned by
/// leftmost W position.
pub fn independent_full_sequence(l: &Ladder) -> CrossSequence {
    let mut chosen: Vec<Cross> = Vec::new();
    for c in full_crosses(l) {
        if chosen.iter().all(|d| d.independent(&c)) {
            chosen.push(c);
        }
    }
    if chosen.is_empty() {
        CrossSequence::CrossFreeTail { w: 0, x: 0 }
    } else {
        chosen.sort_by_key(|c| (c.w_span.1, c.x_span.1));
        CrossSequence::Sequence(chosen)
    }
}

/// Resolves one cross of the original sequence on the current ladder. Odd
/// positions use `(e, f)` as given; even positions meet the cross on swapped
/// rails and use `(f, e)`.
pub fn resolve_cross(l: &Ladder, c: &Cross, parity: Parity) -> Result<(Ladder, Vec<Vertex>), LadderError> {
    let oriented = match parity {
        Parity::Odd => *c,
        Parity::Even => Cross { e: (c.f.1, c.f.0), f: (c.e.1, c.e.0), ..*c },
    };
    resolve_current(l, &oriented)
}

/// Resolves a cross given in the current ladder's orientation.
pub fn resolve_current(l: &Ladder, c: &Cross) -> Result<(Ladder, Vec<Vertex>), LadderError> {
    let ((a, d), (b, cx)) = locate(l, c).ok_or(LadderError::NotACross)?;
    let cross = l.cross_at((a, d), (b, cx)).ok_or(LadderError::NotACross)?;
    let closure = full_cross_closure(l, &cross)?;
    if closure.w_span != cross.w_span || closure.x_span != cross.x_span {
        return Err(LadderError::NotFull);
    }
    let mut new_w = l.w[..=a].to_vec();
    new_w.extend_from_slice(&l.x[d..]);
    let mut new_x = l.x[..=cx].to_vec();
    new_x.extend_from_slice(&l.w[b..]);
    let mut deleted = l.w[a + 1..b].to_vec();
    deleted.extend_from_slice(&l.x[cx + 1..d]);
    let out = Ladder::from_rails(&l.graph, new_w, new_x);
    let report = validate_ladder(&out);
    if !report.is_empty() {
        return Err(LadderError::StructureViolation(format!("resolution broke the ladder: {report:?}")));
    }
    Ok((out, deleted))
}

/// True iff every cross is degenerate.
pub fn is_clean(l: &Ladder) -> bool {
    first_nondegenerate_cross(&l.rung_positions(), l.w.len()).is_none()
}

/// Some non-degenerate crossing pair of rung positions, by a prefix-maximum sweep.
fn first_nondegenerate_cross(rungs: &[(usize, usize)], w_len: usize) -> Option<((usize, usize), (usize, usize))> {
    let mut at: Vec<Option<(usize, usize)>> = vec![None; w_len];
    for &r in rungs {
        if at[r.0].is_none_or(|best| r.1 > best.1) {
            at[r.0] = Some(r);
        }
    }
    let mut upto: Vec<Option<(usize, usize)>> = vec![None; w_len];
    for i in 0..w_len {
        let prev = if i > 0 { upto[i - 1] } else { None };
        upto[i] = match (prev, at[i]) {
            (Some(p), Some(a)) => Some(if a.1 > p.1 { a } else { p }),
            (p, a) => p.or(a),
        };
    }
    for &f in rungs {
        if f.0 >= 2 {
            if let Some(e) = upto[f.0 - 2] {
                if e.1 > f.1 {
                    return Some((e, f));
                }
            }
        }
        if f.0 >= 1 {
            if let Some(e) = at[f.0 - 1] {
                if e.1 > f.1 + 1 {
                    return Some((e, f));
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct CleanReport {
    pub ladder: Ladder,
    /// The sequence resolved in the first round, in the input's rail positions.
    pub sequence: Vec<Cross>,
    pub crosses_resolved: usize,
    pub deleted: Vec<Vertex>,
    /// Rounds of sequence-and-resolve; more than one means the first round left
    /// non-degenerate crosses behind.
    pub rounds: usize,
}

pub fn clean_ladder(l: &Ladder) -> Result<Ladder, LadderError> {
    clean_ladder_report(l).map(|r| r.ladder)
}

pub fn clean_ladder_report(l: &Ladder) -> Result<CleanReport, LadderError> {
    let report = validate_ladder(l);
    if !report.is_empty() {
        return Err(LadderError::BadLadder(report));
    }
    if is_clean(l) {
        return Ok(CleanReport { ladder: l.clone(), sequence: Vec::new(), crosses_resolved: 0, deleted: Vec::new(), rounds: 0 });
    }
    let mut current = l.clone();
    let mut first_sequence = None;
    let mut resolved = 0;
    let mut deleted = Vec::new();
    let mut rounds = 0;
    loop {
        let seq = match independent_full_sequence(&current) {
            CrossSequence::CrossFreeTail { w, x } => {
                current = current.suffix(w, x);
                break;
            }
            CrossSequence::Sequence(s) => s,
        };
        if rounds > 0 && seq.iter().all(|c| c.degenerate) && is_clean(&current) {
            break;
        }
        rounds += 1;
        if rounds > l.w.len() + l.x.len() + 2 {
            return Err(LadderError::StructureViolation("cleaning did not converge".into()));
        }
        for (i, c) in seq.iter().enumerate() {
            let (next, gone) = resolve_cross(&current, c, Parity::of_position(i + 1))?;
            check_no_new_crosses(&current, &next, c.corners())?;
            deleted.extend(gone);
            current = next;
            resolved += 1;
        }
        if first_sequence.is_none() {
            first_sequence = Some(seq);
        }
        if is_clean(&current) {
            break;
        }
    }
    Ok(CleanReport {
        ladder: current,
        sequence: first_sequence.unwrap_or_default(),
        crosses_resolved: resolved,
        deleted,
        rounds,
    })
}

/// Positions of a rung of `l` as `(W, X)`, whatever order its ends are given in.
fn rung_at(l: &Ladder, r: (Vertex, Vertex)) -> Option<(usize, usize)> {
    if !l.graph.has_edge(r.0, r.1) {
        return None;
    }
    match (l.pos_w(r.0), l.pos_x(r.1), l.pos_w(r.1), l.pos_x(r.0)) {
        (Some(a), Some(b), _, _) | (_, _, Some(a), Some(b)) => Some((a, b)),
        _ => None,
    }
}

/// Whether two rung positions cross, and if so whether non-degenerately.
fn cross_kind(a: (usize, usize), b: (usize, usize)) -> Option<bool> {
    let (e, f) = if a.0 < b.0 { (a, b) } else { (b, a) };
    (e.0 < f.0 && f.1 < e.1).then(|| !(f.0 - e.0 == 1 && e.1 - f.1 == 1))
}

/// Resolution never creates a non-degenerate crossing pair that was not
/// already crossing. Only rungs at the cross corners can change their relative
/// order, so only those are compared.
fn check_no_new_crosses(before: &Ladder, after: &Ladder, corners: [Vertex; 4]) -> Result<(), LadderError> {
    for &g in after.rungs.iter().filter(|r| corners.contains(&r.0) || corners.contains(&r.1)) {
        let pg = rung_at(after, g).expect("listed rung");
        for &h in &after.rungs {
            let ph = rung_at(after, h).expect("listed rung");
            if cross_kind(pg, ph) != Some(true) {
                continue;
            }
            let old = match (rung_at(before, g), rung_at(before, h)) {
                (Some(a), Some(b)) => cross_kind(a, b).is_some(),
                _ => false,
            };
            if !old {
                return Err(LadderError::StructureViolation(format!(
                    "resolution created a non-degenerate cross between {g:?} and {h:?}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(len: usize) -> Ladder {
        Ladder::from_positions(len, len, &(0..len).map(|i| (i, i)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_ladder(&grid(4)).is_empty());
        let g = grid(4);
        let mut e = g.graph().edges();
        e.push((0, 2));
        let chorded = Graph::from_edge_list(8, &e).unwrap();
        let l = Ladder::new(chorded.clone(), vec![0, 1, 2, 3], vec![4, 5, 6, 7], g.rungs().to_vec());
        let report = validate_ladder(&l);
        assert!(report.iter().any(|v| v.to_string().starts_with("rail not induced")), "{report:?}");
        let mut rungs = g.rungs().to_vec();
        rungs.push((0, 2));
        let l = Ladder::new(chorded, vec![0, 1, 2, 3], vec![4, 5, 6, 7], rungs);
        assert!(validate_ladder(&l).iter().any(|v| v.to_string().starts_with("rung endpoints")));
    }

    #[test]
    fn cross_examples() {
        assert!(find_crosses(&grid(5)).is_empty());
        let l = Ladder::from_positions(3, 3, &[(0, 0), (1, 2), (2, 1)]).unwrap();
        let cs = find_crosses(&l);
        assert_eq!(cs.len(), 1);
        assert!(cs[0].degenerate && cs[0].full);
        assert!(is_clean(&l));
        let messy = Ladder::from_positions(5, 5, &[(0, 0), (1, 4), (3, 1)]).unwrap();
        assert!(!is_clean(&messy));
    }

    #[test]
    fn closure_examples() {
        let l = Ladder::from_positions(6, 6, &[(0, 0), (1, 5), (2, 3), (3, 2), (4, 1)]).unwrap();
        let all = find_crosses(&l);
        let inner = *all.iter().find(|c| c.w_span == (2, 3)).unwrap();
        assert!(!inner.full);
        let outer = full_cross_closure(&l, &inner).unwrap();
        assert_eq!((outer.w_span, outer.x_span), ((1, 4), (1, 5)));
        assert_eq!(full_cross_closure(&l, &outer).unwrap(), outer);
        // Brute-force maximum over containing crosses.
        let best = all.iter().filter(|c| c.contains(&inner)).max_by_key(|c| (c.w_span.1 - c.w_span.0) + (c.x_span.1 - c.x_span.0)).unwrap();
        assert_eq!((best.w_span, best.x_span), (outer.w_span, outer.x_span));
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(independent_full_sequence(&grid(4)), CrossSequence::CrossFreeTail { w: 0, x: 0 });
        let two = Ladder::from_positions(6, 6, &[(0, 0), (1, 2), (2, 1), (3, 4), (4, 3)]).unwrap();
        let CrossSequence::Sequence(s) = independent_full_sequence(&two) else { panic!() };
        assert_eq!(s.len(), 2);
        assert!(s[0].w_span.1 <= s[1].w_span.0);
        // Both full crosses use rung (1,3) and overlap on W; only one is kept.
        let shared = Ladder::from_positions(5, 5, &[(0, 0), (1, 3), (2, 1), (3, 2)]).unwrap();
        let CrossSequence::Sequence(s) = independent_full_sequence(&shared) else { panic!() };
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn degenerate_resolution_deletes_nothing() {
        let l = Ladder::from_positions(4, 4, &[(0, 0), (1, 2), (2, 1), (3, 3)]).unwrap();
        let c = find_crosses(&l)[0];
        let (out, gone) = resolve_cross(&l, &c, Parity::Odd).unwrap();
        assert!(gone.is_empty());
        assert_eq!(out.edge_set(), l.edge_set());
        assert!(validate_ladder(&out).is_empty());
    }

    #[test]
    fn single_full_cross_resolution() {
        // 2x5 grid variant: rung (1,3) and (3,1) cross; rung (2,2) sits inside both spans.
        let l = Ladder::from_positions(5, 5, &[(0, 0), (1, 3), (2, 2), (3, 1), (4, 4)]).unwrap();
        let c = *find_crosses(&l).iter().find(|c| c.full).unwrap();
        assert_eq!((c.w_span, c.x_span), ((1, 3), (1, 3)));
        let (out, gone) = resolve_cross(&l, &c, Parity::Odd).unwrap();
        assert_eq!(gone, vec![2, 7]);
        assert!(is_clean(&out));
        assert_eq!(out.vertices().len(), 8);
    }

    #[test]
    fn non_full_cross_is_rejected() {
        let l = Ladder::from_positions(6, 6, &[(0, 0), (1, 5), (2, 3), (3, 2), (4, 1)]).unwrap();
        let inner = *find_crosses(&l).iter().find(|c| c.w_span == (2, 3)).unwrap();
        assert_eq!(resolve_cross(&l, &inner, Parity::Odd).unwrap_err(), LadderError::NotFull);
    }

    #[test]
    fn cleaning_examples() {
        let g = grid(5);
        assert_eq!(clean_ladder(&g).unwrap().edge_set(), g.edge_set());
        let crossed = Ladder::from_positions(4, 4, &[(0, 0), (1, 2), (2, 1), (3, 3)]).unwrap();
        assert_eq!(clean_ladder_report(&crossed).unwrap().crosses_resolved, 0);
        let messy = Ladder::from_positions(8, 8, &[(0, 0), (1, 4), (2, 2), (4, 1), (5, 7), (7, 5)]).unwrap();
        let report = clean_ladder_report(&messy).unwrap();
        assert!(is_clean(&report.ladder));
        assert!(validate_ladder(&report.ladder).is_empty());
        for c in &report.sequence {
            for v in c.corners() {
                assert!(report.ladder.vertices().contains(&v));
            }
        }
    }

    /// Five pairwise independent full crosses; only the first is non-degenerate
    /// and it has one rung inside both spans.
    fn five_cross_ladder() -> Ladder {
        let rungs = [
            (0, 0), (1, 3), (3, 1), (2, 2), (4, 5), (5, 4), (5, 6), (6, 5), (7, 7),
            (8, 9), (9, 8), (10, 10), (10, 11), (10, 12), (11, 14), (12, 13), (13, 15),
        ];
        Ladder::from_positions(14, 16, &rungs).unwrap()
    }

    #[test]
    fn five_cross_example() {
        let l = five_cross_ladder();
        let CrossSequence::Sequence(s) = independent_full_sequence(&l) else { panic!() };
        assert_eq!(s.len(), 5);
        assert_eq!(s.iter().filter(|c| !c.degenerate).count(), 1);
        // The first cross's spans hold the only deleted rung.
        let (out, gone) = resolve_cross(&l, &s[0], Parity::Odd).unwrap();
        assert_eq!(gone, vec![2, 14 + 2]);
        assert!(validate_ladder(&out).is_empty());
        let report = clean_ladder_report(&l).unwrap();
        assert!(is_clean(&report.ladder));
        assert_eq!(report.deleted, vec![2, 16]);
        assert_eq!(report.crosses_resolved, 5);
        assert_eq!(report.rounds, 1);
        let kept = report.ladder.vertices();
        for c in &s {
            for v in c.corners() {
                assert!(kept.contains(&v));
            }
        }
        // Order consistency: for independent full crosses, f_W <= g_W iff e_X <= h_X.
        for a in &s {
            for b in &s {
                if a != b {
                    assert_eq!(a.w_span.1 <= b.w_span.0, a.x_span.1 <= b.x_span.0);
                }
            }
        }
    }
}
