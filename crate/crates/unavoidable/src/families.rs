//! Unavoidable families: certificate types, generators, and the certifier.
//!
//! A [`Certificate`] names a family, lists the embedded vertices of the host
//! graph, and carries a witness from which the exact expected edge set is
//! rebuilt. Verification compares that edge set with the one induced by the
//! host on the embedded vertices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    Clique,
    Theta,
    Lambda,
    Fan,
    DeltaFan,
    LadderI,
    LadderDelta,
    LadderNablaDelta,
    CleanLadder,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 9] = [
        FamilyTag::Clique,
        FamilyTag::Theta,
        FamilyTag::Lambda,
        FamilyTag::Fan,
        FamilyTag::DeltaFan,
        FamilyTag::LadderI,
        FamilyTag::LadderDelta,
        FamilyTag::LadderNablaDelta,
        FamilyTag::CleanLadder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Clique => "clique",
            FamilyTag::Theta => "theta",
            FamilyTag::Lambda => "lambda",
            FamilyTag::Fan => "fan",
            FamilyTag::DeltaFan => "delta-fan",
            FamilyTag::LadderI => "ladder-i",
            FamilyTag::LadderDelta => "ladder-delta",
            FamilyTag::LadderNablaDelta => "ladder-nabla-delta",
            FamilyTag::CleanLadder => "clean-ladder",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyTag> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name() == key || format!("{t:?}").to_ascii_lowercase() == key)
    }

    pub fn is_ladder_family(self) -> bool {
        matches!(self, FamilyTag::LadderI | FamilyTag::LadderDelta | FamilyTag::LadderNablaDelta)
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Block of a lambda chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    K3,
    K4,
}

/// One tie of a ladder-family member. `path` lists the off-rail vertices from
/// the P side to the Q side; `path[0]` is adjacent to every P foot and the last
/// entry to every Q foot. An empty path means a single edge between the feet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieWitness {
    pub p_feet: Vec<Vertex>,
    pub q_feet: Vec<Vertex>,
    pub path: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Clique,
    Theta {
        branch: [Vertex; 2],
        paths: Vec<VertexPath>,
    },
    /// Block `i` lists its vertices so that its first two are the edge shared
    /// with block `i - 1` and its last two the edge shared with block `i + 1`.
    Lambda {
        blocks: Vec<Vec<Vertex>>,
        deleted: Vec<bool>,
    },
    Fan {
        apex: Vertex,
        spokes: Vec<VertexPath>,
        rim: VertexPath,
    },
    DeltaFan {
        apex: Vertex,
        spokes: Vec<VertexPath>,
        rim: VertexPath,
        feet: Vec<[Vertex; 2]>,
    },
    Ladder {
        rail_p: VertexPath,
        rail_q: VertexPath,
        ties: Vec<TieWitness>,
    },
    CleanLadder {
        rail_w: VertexPath,
        rail_x: VertexPath,
        rungs: Vec<[Vertex; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tag: FamilyTag,
    pub order: usize,
    pub vertices: Vec<Vertex>,
    pub witness: Witness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_order: Option<usize>,
}

/// First violated verification clause.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("(a) malformed witness: {0}")]
    Malformed(String),
    #[error("(a) vertex list differs from the vertices named by the witness")]
    VertexMismatch,
    #[error("(b) not induced: missing edges {missing:?}, extra edges {extra:?}")]
    NotInduced {
        missing: Vec<(Vertex, Vertex)>,
        extra: Vec<(Vertex, Vertex)>,
    },
    #[error("(c) order {order} below required {required}")]
    OrderTooSmall { order: usize, required: usize },
}

impl Violation {
    pub fn clause(&self) -> char {
        match self {
            Violation::Malformed(_) | Violation::VertexMismatch => 'a',
            Violation::NotInduced { .. } => 'b',
            Violation::OrderTooSmall { .. } => 'c',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("a theta needs at least three paths")]
    TooFewPaths,
    #[error("two paths of length one would be parallel edges")]
    ParallelEdges,
    #[error("path lengths must be positive")]
    ZeroLength,
    #[error("delete flags must have one entry per identified edge")]
    BadFlags,
    #[error("a fan needs at least three spokes")]
    TooFewSpokes,
    #[error("specification shape is invalid: {0}")]
    BadSpec(String),
    #[error("empty specification")]
    Empty,
    #[error("generated graph is not 2-connected")]
    NotTwoConnected,
}

/// Expected structure rebuilt from a witness.
#[derive(Default)]
struct Shape {
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<(Vertex, Vertex)>,
}

impl Shape {
    fn edge(&mut self, u: Vertex, v: Vertex) -> Result<(), String> {
        if u == v {
            return Err(format!("loop at {u}"));
        }
        self.vertices.insert(u);
        self.vertices.insert(v);
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    fn path(&mut self, p: &[Vertex]) -> Result<(), String> {
        if p.iter().collect::<BTreeSet<_>>().len() != p.len() {
            return Err(format!("path {p:?} repeats a vertex"));
        }
        self.vertices.extend(p.iter().copied());
        for w in p.windows(2) {
            self.edge(w[0], w[1])?;
        }
        Ok(())
    }

    fn expect_count(&self, expected: usize, what: &str) -> Result<(), String> {
        if self.vertices.len() == expected {
            Ok(())
        } else {
            Err(format!("{what}: expected {expected} distinct vertices, found {}", self.vertices.len()))
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn positions(rail: &[Vertex]) -> std::collections::BTreeMap<Vertex, usize> {
    rail.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

fn theta_shape(branch: [Vertex; 2], paths: &[VertexPath]) -> Result<(Shape, usize), String> {
    let [a, b] = branch;
    ensure(a != b, || "branch vertices coincide".into())?;
    ensure(paths.len() >= 3, || format!("{} paths, need at least 3", paths.len()))?;
    let mut s = Shape::default();
    let mut expected = 2;
    let mut direct = 0;
    for p in paths {
        ensure(p.len() >= 2 && p[0] == a && p[p.len() - 1] == b, || {
            format!("path {:?} does not run between the branch vertices", p.0)
        })?;
        if p.len() == 2 {
            direct += 1;
        }
        expected += p.len() - 2;
        s.path(p)?;
    }
    ensure(direct <= 1, || "more than one direct branch edge".into())?;
    s.expect_count(expected, "theta paths must be internally disjoint")?;
    Ok((s, paths.len()))
}

fn lambda_shape(blocks: &[Vec<Vertex>], deleted: &[bool]) -> Result<(Shape, usize), String> {
    ensure(!blocks.is_empty(), || "no blocks".into())?;
    ensure(deleted.len() + 1 == blocks.len(), || "one delete flag per identified edge".into())?;
    let mut s = Shape::default();
    let mut expected = 0;
    for (i, b) in blocks.iter().enumerate() {
        ensure(b.len() == 3 || b.len() == 4, || format!("block {i} has {} vertices", b.len()))?;
        ensure(b.iter().collect::<BTreeSet<_>>().len() == b.len(), || format!("block {i} repeats a vertex"))?;
        expected += b.len();
        for x in 0..b.len() {
            for y in x + 1..b.len() {
                s.edge(b[x], b[y])?;
            }
        }
        if i > 0 {
            let prev = &blocks[i - 1];
            let f: BTreeSet<_> = prev[prev.len() - 2..].iter().collect();
            let e: BTreeSet<_> = b[..2].iter().collect();
            ensure(e == f, || format!("block {i} does not start with the last edge of block {}", i - 1))?;
            expected -= 2;
        }
    }
    s.expect_count(expected, "lambda blocks may only share identified edges")?;
    for (i, &del) in deleted.iter().enumerate() {
        if del {
            let b = &blocks[i + 1];
            s.edges.remove(&(b[0].min(b[1]), b[0].max(b[1])));
        }
    }
    Ok((s, blocks.len()))
}

fn fan_shape(apex: Vertex, spokes: &[VertexPath], rim: &VertexPath) -> Result<(Shape, usize), String> {
    ensure(spokes.len() >= 3, || format!("{} spokes, need at least 3", spokes.len()))?;
    let mut s = Shape::default();
    s.path(rim)?;
    let pos = positions(rim);
    let mut expected = 1 + rim.len();
    let mut last_pos: Option<usize> = None;
    for (i, p) in spokes.iter().enumerate() {
        ensure(p.len() >= 2 && p[0] == apex, || format!("spoke {i} does not start at the apex"))?;
        let foot = p[p.len() - 1];
        let at = *pos.get(&foot).ok_or_else(|| format!("spoke {i} does not end on the rim"))?;
        ensure(last_pos.is_none_or(|l| at > l), || "feet must increase along the rim".into())?;
        last_pos = Some(at);
        if i == 0 {
            ensure(at == 0, || "rim must start at the first foot".into())?;
        }
        expected += p.len() - 2;
        s.path(p)?;
    }
    ensure(last_pos == Some(rim.len() - 1), || "rim must end at the last foot".into())?;
    s.expect_count(expected, "spokes must be disjoint from each other and the rim")?;
    Ok((s, spokes.len()))
}

fn delta_fan_shape(
    apex: Vertex,
    spokes: &[VertexPath],
    rim: &VertexPath,
    feet: &[[Vertex; 2]],
) -> Result<(Shape, usize), String> {
    let t = spokes.len();
    ensure(t >= 2, || format!("{t} tips, need at least 2"))?;
    ensure(feet.len() == t, || "one foot pair per tip".into())?;
    let mut s = Shape::default();
    s.path(rim)?;
    let pos = positions(rim);
    let mut expected = 1 + rim.len();
    let mut prev_end: Option<usize> = None;
    for (i, (p, pair)) in spokes.iter().zip(feet).enumerate() {
        ensure(p.len() >= 2 && p[0] == apex, || format!("spoke {i} does not start at the apex"))?;
        let a = *pos.get(&pair[0]).ok_or_else(|| format!("foot pair {i} is off the rim"))?;
        let b = *pos.get(&pair[1]).ok_or_else(|| format!("foot pair {i} is off the rim"))?;
        ensure(b == a + 1, || format!("foot pair {i} is not a rim edge in rim order"))?;
        ensure(prev_end.is_none_or(|e| a > e), || "foot pairs must be disjoint and increasing".into())?;
        if i == 0 {
            ensure(a == 0, || "rim must start at the first foot".into())?;
        }
        prev_end = Some(b);
        let tip = p[p.len() - 1];
        expected += p.len() - 1;
        s.path(p)?;
        s.edge(tip, pair[0])?;
        s.edge(tip, pair[1])?;
    }
    ensure(prev_end == Some(rim.len() - 1), || "rim must end at the last foot".into())?;
    s.expect_count(expected, "spokes must be disjoint from each other and the rim")?;
    Ok((s, t))
}

fn consecutive_on(pos: &std::collections::BTreeMap<Vertex, usize>, feet: &[Vertex]) -> bool {
    match feet {
        [a, b] => match (pos.get(a), pos.get(b)) {
            (Some(&x), Some(&y)) => x.abs_diff(y) == 1,
            _ => false,
        },
        _ => false,
    }
}

fn ladder_shape(
    tag: FamilyTag,
    rail_p: &VertexPath,
    rail_q: &VertexPath,
    ties: &[TieWitness],
) -> Result<(Shape, usize), String> {
    ensure(!ties.is_empty(), || "no ties".into())?;
    ensure(!rail_p.is_empty() && !rail_q.is_empty(), || "empty rail".into())?;
    let mut s = Shape::default();
    s.path(rail_p)?;
    s.path(rail_q)?;
    let pp = positions(rail_p);
    let qp = positions(rail_q);
    let mut expected = rail_p.len() + rail_q.len();
    let mut all_feet = BTreeSet::new();
    let mut kinds = BTreeSet::new();
    for (i, tie) in ties.iter().enumerate() {
        ensure(tie.p_feet.iter().all(|v| pp.contains_key(v)), || format!("tie {i} has a P foot off P"))?;
        ensure(tie.q_feet.iter().all(|v| qp.contains_key(v)), || format!("tie {i} has a Q foot off Q"))?;
        for &f in tie.p_feet.iter().chain(&tie.q_feet) {
            ensure(all_feet.insert(f), || format!("foot {f} is shared between ties"))?;
        }
        let kind = match (tie.p_feet.len(), tie.q_feet.len()) {
            (1, 1) => 'I',
            (2, 1) if consecutive_on(&pp, &tie.p_feet) => 'Y',
            (1, 2) if consecutive_on(&qp, &tie.q_feet) => 'L',
            (2, 2) if consecutive_on(&pp, &tie.p_feet) && consecutive_on(&qp, &tie.q_feet) => 'X',
            _ => return Err(format!("tie {i} has an invalid foot pattern")),
        };
        ensure(kind == 'I' || !tie.path.is_empty(), || format!("tie {i} needs an off-rail vertex"))?;
        kinds.insert(kind);
        expected += tie.path.len();
        s.path(&tie.path)?;
        match (tie.path.first(), tie.path.last()) {
            (Some(&u), Some(&v)) => {
                for &f in &tie.p_feet {
                    s.edge(u, f)?;
                }
                for &f in &tie.q_feet {
                    s.edge(v, f)?;
                }
            }
            _ => s.edge(tie.p_feet[0], tie.q_feet[0])?,
        }
    }
    let allowed: &[char] = match tag {
        FamilyTag::LadderI => &['I'],
        FamilyTag::LadderDelta => &['Y', 'L'],
        FamilyTag::LadderNablaDelta => &['X'],
        _ => unreachable!("ladder_shape called with a non-ladder tag"),
    };
    ensure(kinds.iter().all(|k| allowed.contains(k)) && kinds.len() == 1, || {
        format!("tie kinds {kinds:?} do not fit {tag}")
    })?;
    let first = &ties[0];
    ensure(first.p_feet.contains(&rail_p[0]) && first.q_feet.contains(&rail_q[0]), || {
        "first tie must join the initial rail vertices".into()
    })?;
    s.expect_count(expected, "rails and tie paths must be disjoint")?;
    Ok((s, ties.len()))
}

fn clean_ladder_shape(
    rail_w: &VertexPath,
    rail_x: &VertexPath,
    rungs: &[[Vertex; 2]],
) -> Result<(Shape, usize), String> {
    ensure(!rungs.is_empty(), || "no rungs".into())?;
    let mut s = Shape::default();
    s.path(rail_w)?;
    s.path(rail_x)?;
    s.expect_count(rail_w.len() + rail_x.len(), "rails must be disjoint")?;
    let wp = positions(rail_w);
    let xp = positions(rail_x);
    let mut at = Vec::with_capacity(rungs.len());
    for (i, &[w, x]) in rungs.iter().enumerate() {
        let pw = *wp.get(&w).ok_or_else(|| format!("rung {i} does not start on W"))?;
        let px = *xp.get(&x).ok_or_else(|| format!("rung {i} does not end on X"))?;
        at.push((pw, px));
        s.edge(w, x)?;
    }
    ensure(at.iter().collect::<BTreeSet<_>>().len() == at.len(), || "repeated rung".into())?;
    ensure(at[0] == (0, 0), || "first rung must join the initial rail vertices".into())?;
    for &(a, b) in &at {
        for &(c, d) in &at {
            if a < c && d < b {
                ensure(c - a == 1 && b - d == 1, || format!("non-degenerate cross at W {a}..{c}, X {d}..{b}"))?;
            }
        }
    }
    Ok((s, rungs.len()))
}

fn witness_shape(tag: FamilyTag, w: &Witness, vertices: &[Vertex]) -> Result<(Shape, usize), String> {
    match (tag, w) {
        (FamilyTag::Clique, Witness::Clique) => {
            let mut s = Shape::default();
            s.vertices.extend(vertices.iter().copied());
            ensure(!vertices.is_empty(), || "empty clique".into())?;
            for (i, &u) in vertices.iter().enumerate() {
                for &v in &vertices[i + 1..] {
                    s.edge(u, v)?;
                }
            }
            Ok((s, vertices.len()))
        }
        (FamilyTag::Theta, Witness::Theta { branch, paths }) => theta_shape(*branch, paths),
        (FamilyTag::Lambda, Witness::Lambda { blocks, deleted }) => lambda_shape(blocks, deleted),
        (FamilyTag::Fan, Witness::Fan { apex, spokes, rim }) => fan_shape(*apex, spokes, rim),
        (FamilyTag::DeltaFan, Witness::DeltaFan { apex, spokes, rim, feet }) => {
            delta_fan_shape(*apex, spokes, rim, feet)
        }
        (t, Witness::Ladder { rail_p, rail_q, ties }) if t.is_ladder_family() => {
            ladder_shape(t, rail_p, rail_q, ties)
        }
        (FamilyTag::CleanLadder, Witness::CleanLadder { rail_w, rail_x, rungs }) => {
            clean_ladder_shape(rail_w, rail_x, rungs)
        }
        _ => Err(format!("witness kind does not match tag {tag}")),
    }
}

impl Certificate {
    /// Builds a certificate whose vertex list and order are derived from the witness.
    pub fn new(tag: FamilyTag, witness: Witness, clique_vertices: &[Vertex]) -> Result<Certificate, String> {
        let mut cv = clique_vertices.to_vec();
        cv.sort_unstable();
        let (shape, order) = witness_shape(tag, &witness, &cv)?;
        Ok(Certificate {
            tag,
            order,
            vertices: shape.vertices.into_iter().collect(),
            witness,
            min_order: None,
        })
    }

    pub fn clique(vertices: &[Vertex]) -> Certificate {
        Certificate::new(FamilyTag::Clique, Witness::Clique, vertices).expect("nonempty clique")
    }

    pub fn with_min_order(mut self, r: usize) -> Certificate {
        self.min_order = Some(r);
        self
    }

    /// Witness edge set, when the witness is well-formed.
    pub fn expected_edges(&self) -> Option<BTreeSet<(Vertex, Vertex)>> {
        witness_shape(self.tag, &self.witness, &self.vertices).ok().map(|(s, _)| s.edges)
    }
}

/// Checks the three clauses in order and reports the first violation.
pub fn check_certificate(g: &Graph, cert: &Certificate) -> Result<(), Violation> {
    if let Some(&v) = cert.vertices.iter().find(|&&v| v >= g.n()) {
        return Err(Violation::Malformed(format!("vertex {v} is not in the host graph")));
    }
    let (shape, order) =
        witness_shape(cert.tag, &cert.witness, &cert.vertices).map_err(Violation::Malformed)?;
    if order != cert.order {
        return Err(Violation::Malformed(format!("stated order {} but witness has {order}", cert.order)));
    }
    let listed: BTreeSet<Vertex> = cert.vertices.iter().copied().collect();
    if listed.len() != cert.vertices.len() || listed != shape.vertices {
        return Err(Violation::VertexMismatch);
    }
    let induced = g.induced_edges(&cert.vertices);
    if induced != shape.edges {
        return Err(Violation::NotInduced {
            missing: shape.edges.difference(&induced).copied().collect(),
            extra: induced.difference(&shape.edges).copied().collect(),
        });
    }
    match cert.min_order {
        Some(required) if order < required => Err(Violation::OrderTooSmall { order, required }),
        _ => Ok(()),
    }
}

pub fn verify_certificate(g: &Graph, cert: &Certificate) -> bool {
    check_certificate(g, cert).is_ok()
}

/// Witnesses for the connected trichotomy that are not among the nine families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConnectedWitness {
    Clique(Certificate),
    Star { center: Vertex, leaves: Vec<Vertex> },
    Path(VertexPath),
}

impl ConnectedWitness {
    pub fn order(&self) -> usize {
        match self {
            ConnectedWitness::Clique(c) => c.order,
            ConnectedWitness::Star { leaves, .. } => leaves.len(),
            ConnectedWitness::Path(p) => p.len(),
        }
    }

    pub fn verify(&self, g: &Graph) -> bool {
        match self {
            ConnectedWitness::Clique(c) => c.tag == FamilyTag::Clique && verify_certificate(g, c),
            ConnectedWitness::Star { center, leaves } => {
                let mut all = leaves.clone();
                all.push(*center);
                let distinct = all.iter().collect::<BTreeSet<_>>().len() == all.len();
                distinct
                    && all.iter().all(|&v| v < g.n())
                    && g.induced_edges(&all) == leaves.iter().map(|&l| (l.min(*center), l.max(*center))).collect()
            }
            ConnectedWitness::Path(p) => g.is_induced_path(p),
        }
    }
}

/// Incremental builder that hands out fresh vertex ids.
#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

impl Builder {
    fn fresh(&mut self) -> Vertex {
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, u: Vertex, v: Vertex) {
        self.edges.push((u, v));
    }

    /// Path from `from` through `internal` fresh vertices, ending at `to` if given
    /// or at a new vertex otherwise. Returns the full vertex sequence.
    fn path(&mut self, from: Vertex, internal: usize, to: Option<Vertex>) -> Vec<Vertex> {
        let mut p = vec![from];
        for _ in 0..internal {
            let v = self.fresh();
            self.edge(*p.last().unwrap(), v);
            p.push(v);
        }
        let end = to.unwrap_or_else(|| self.fresh());
        self.edge(*p.last().unwrap(), end);
        p.push(end);
        p
    }

    fn finish(self) -> Graph {
        Graph::from_edge_list(self.n, &self.edges).expect("builder edges are valid")
    }
}

fn finish(b: Builder, tag: FamilyTag, w: Witness) -> (Graph, Certificate) {
    let g = b.finish();
    let cert = Certificate::new(tag, w, &[]).expect("generator witnesses are well-formed");
    (g, cert)
}

pub fn make_clique(r: usize) -> Result<(Graph, Certificate), FamilyError> {
    if r == 0 {
        return Err(FamilyError::Empty);
    }
    let g = crate::graph::named::complete(r);
    let all: Vec<Vertex> = (0..r).collect();
    Ok((g, Certificate::clique(&all)))
}

/// Two branch vertices `0` and `1` joined by paths of the given lengths.
pub fn make_theta(path_lengths: &[usize]) -> Result<(Graph, Certificate), FamilyError> {
    if path_lengths.len() < 3 {
        return Err(FamilyError::TooFewPaths);
    }
    if path_lengths.contains(&0) {
        return Err(FamilyError::ZeroLength);
    }
    if path_lengths.iter().filter(|&&l| l == 1).count() > 1 {
        return Err(FamilyError::ParallelEdges);
    }
    let mut b = Builder::default();
    let (a, z) = (b.fresh(), b.fresh());
    let paths = path_lengths.iter().map(|&l| VertexPath(b.path(a, l - 1, Some(z)))).collect();
    Ok(finish(b, FamilyTag::Theta, Witness::Theta { branch: [a, z], paths }))
}

pub fn make_lambda(kinds: &[BlockKind], delete_identified: &[bool]) -> Result<(Graph, Certificate), FamilyError> {
    if kinds.is_empty() {
        return Err(FamilyError::Empty);
    }
    if delete_identified.len() + 1 != kinds.len() {
        return Err(FamilyError::BadFlags);
    }
    let mut b = Builder::default();
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    for &kind in kinds {
        let mut block = match blocks.last() {
            Some(prev) => prev[prev.len() - 2..].to_vec(),
            None => vec![b.fresh(), b.fresh()],
        };
        let extra = if kind == BlockKind::K3 { 1 } else { 2 };
        for _ in 0..extra {
            block.push(b.fresh());
        }
        blocks.push(block);
    }
    let mut edges = BTreeSet::new();
    for block in &blocks {
        for i in 0..block.len() {
            for j in i + 1..block.len() {
                edges.insert((block[i], block[j]));
            }
        }
    }
    for (i, &del) in delete_identified.iter().enumerate() {
        if del {
            let e = &blocks[i + 1];
            edges.remove(&(e[0].min(e[1]), e[0].max(e[1])));
        }
    }
    b.edges = edges.into_iter().collect();
    let (g, cert) = finish(
        b,
        FamilyTag::Lambda,
        Witness::Lambda { blocks, deleted: delete_identified.to_vec() },
    );
    if !g.is_two_connected() {
        return Err(FamilyError::NotTwoConnected);
    }
    Ok((g, cert))
}

/// Apex `0`; spoke `i` carries `spoke_subdivisions[i]` internal vertices and the
/// rim between feet `i` and `i + 1` carries `rim_gap_subdivisions[i]`.
pub fn make_fan(spoke_subdivisions: &[usize], rim_gap_subdivisions: &[usize]) -> Result<(Graph, Certificate), FamilyError> {
    let s = spoke_subdivisions.len();
    if s < 3 {
        return Err(FamilyError::TooFewSpokes);
    }
    if rim_gap_subdivisions.len() + 1 != s {
        return Err(FamilyError::BadSpec(format!("{s} spokes need {} rim gaps", s - 1)));
    }
    let mut b = Builder::default();
    let apex = b.fresh();
    let mut rim = vec![b.fresh()];
    let mut feet = vec![rim[0]];
    for &gap in rim_gap_subdivisions {
        let seg = b.path(*rim.last().unwrap(), gap, None);
        rim.extend_from_slice(&seg[1..]);
        feet.push(*rim.last().unwrap());
    }
    let spokes = feet
        .iter()
        .zip(spoke_subdivisions)
        .map(|(&f, &sub)| VertexPath(b.path(apex, sub, Some(f))))
        .collect();
    Ok(finish(b, FamilyTag::Fan, Witness::Fan { apex, spokes, rim: VertexPath(rim) }))
}

pub fn make_delta_fan(
    t: usize,
    spoke_subdivisions: &[usize],
    gap_subdivisions: &[usize],
) -> Result<(Graph, Certificate), FamilyError> {
    if t < 2 {
        return Err(FamilyError::BadSpec("a delta-fan needs t >= 2".into()));
    }
    if spoke_subdivisions.len() != t || gap_subdivisions.len() + 1 != t {
        return Err(FamilyError::BadSpec(format!("t = {t} needs {t} spoke and {} gap entries", t - 1)));
    }
    let mut b = Builder::default();
    let apex = b.fresh();
    let mut rim: Vec<Vertex> = Vec::new();
    let mut feet = Vec::new();
    for i in 0..t {
        let first = match rim.last() {
            None => b.fresh(),
            Some(&prev) => {
                let seg = b.path(prev, gap_subdivisions[i - 1], None);
                rim.extend_from_slice(&seg[1..seg.len() - 1]);
                seg[seg.len() - 1]
            }
        };
        let second = b.fresh();
        b.edge(first, second);
        rim.push(first);
        rim.push(second);
        feet.push([first, second]);
    }
    let mut spokes = Vec::new();
    for (pair, &sub) in feet.iter().zip(spoke_subdivisions) {
        let spoke = b.path(apex, sub, None);
        let tip = *spoke.last().unwrap();
        b.edge(tip, pair[0]);
        b.edge(tip, pair[1]);
        spokes.push(VertexPath(spoke));
    }
    Ok(finish(b, FamilyTag::DeltaFan, Witness::DeltaFan { apex, spokes, rim: VertexPath(rim), feet }))
}

/// `spacing[i]` is the rail distance between unit `i` and unit `i + 1` on both
/// rails; `tie_path_lengths[i]` is the edge length of the tie path between its
/// P-side vertex and its Q-side vertex.
pub fn make_ladder_family(
    kind: FamilyTag,
    unit_count: usize,
    spacing: &[usize],
    tie_path_lengths: &[usize],
) -> Result<(Graph, Certificate), FamilyError> {
    if !kind.is_ladder_family() {
        return Err(FamilyError::BadSpec(format!("{kind} is not a ladder family")));
    }
    if unit_count == 0 {
        return Err(FamilyError::Empty);
    }
    if spacing.len() + 1 != unit_count || tie_path_lengths.len() != unit_count {
        return Err(FamilyError::BadSpec(format!(
            "{unit_count} units need {} spacings and {unit_count} tie lengths",
            unit_count - 1
        )));
    }
    if spacing.contains(&0) || tie_path_lengths.contains(&0) {
        return Err(FamilyError::BadSpec("spacings and tie lengths must be positive".into()));
    }
    let (p_width, q_width) = match kind {
        FamilyTag::LadderI => (1, 1),
        FamilyTag::LadderDelta => (2, 1),
        _ => (2, 2),
    };
    let mut b = Builder::default();
    let mut rail_p: Vec<Vertex> = Vec::new();
    let mut rail_q: Vec<Vertex> = Vec::new();
    let mut ties = Vec::new();
    let extend = |b: &mut Builder, rail: &mut Vec<Vertex>, gap: usize, width: usize| -> Vec<Vertex> {
        let mut feet = Vec::new();
        match rail.last() {
            None => rail.push(b.fresh()),
            Some(&last) => {
                let seg = b.path(last, gap - 1, None);
                rail.extend_from_slice(&seg[1..]);
            }
        }
        feet.push(*rail.last().unwrap());
        if width == 2 {
            let seg = b.path(*rail.last().unwrap(), 0, None);
            rail.push(seg[1]);
            feet.push(seg[1]);
        }
        feet
    };
    for unit in 0..unit_count {
        let gap = if unit == 0 { 0 } else { spacing[unit - 1] };
        let p_feet = extend(&mut b, &mut rail_p, gap, p_width);
        let q_feet = extend(&mut b, &mut rail_q, gap, q_width);
        let len = tie_path_lengths[unit];
        let path = if kind == FamilyTag::LadderI {
            let full = b.path(p_feet[0], len - 1, Some(q_feet[0]));
            full[1..full.len() - 1].to_vec()
        } else {
            // Off-rail vertices: the P-side vertex, internals, and for two Q feet the Q-side vertex.
            let off = if q_width == 2 { len + 1 } else { len };
            let start = b.fresh();
            let mut path = vec![start];
            for _ in 1..off {
                let v = b.fresh();
                b.edge(*path.last().unwrap(), v);
                path.push(v);
            }
            for &f in &p_feet {
                b.edge(start, f);
            }
            for &f in &q_feet {
                b.edge(*path.last().unwrap(), f);
            }
            path
        };
        ties.push(TieWitness { p_feet, q_feet, path });
    }
    Ok(finish(
        b,
        kind,
        Witness::Ladder { rail_p: VertexPath(rail_p), rail_q: VertexPath(rail_q), ties },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RungSpec {
    /// Advance W by `gap_w` and X by `gap_x`, then add a rung. Gaps of the first entry are ignored.
    Plain { gap_w: usize, gap_x: usize },
    /// Extend both rails by two and add the rungs `(w+1, x+2)` and `(w+2, x+1)`.
    DegenerateCross,
}

pub fn make_clean_ladder(spec: &[RungSpec]) -> Result<(Graph, Certificate), FamilyError> {
    if spec.is_empty() {
        return Err(FamilyError::Empty);
    }
    if spec[0] == RungSpec::DegenerateCross {
        return Err(FamilyError::BadSpec("the first rung must join the initial vertices".into()));
    }
    let mut b = Builder::default();
    let mut w = vec![b.fresh()];
    let mut x = vec![b.fresh()];
    let mut rungs = vec![[w[0], x[0]]];
    let grow = |b: &mut Builder, rail: &mut Vec<Vertex>, by: usize| {
        for _ in 0..by {
            let v = b.fresh();
            b.edge(*rail.last().unwrap(), v);
            rail.push(v);
        }
    };
    for item in &spec[1..] {
        match *item {
            RungSpec::Plain { gap_w, gap_x } => {
                if gap_w == 0 || gap_x == 0 {
                    return Err(FamilyError::BadSpec("rung gaps must be positive".into()));
                }
                grow(&mut b, &mut w, gap_w);
                grow(&mut b, &mut x, gap_x);
                rungs.push([*w.last().unwrap(), *x.last().unwrap()]);
            }
            RungSpec::DegenerateCross => {
                grow(&mut b, &mut w, 2);
                grow(&mut b, &mut x, 2);
                let (lw, lx) = (w.len(), x.len());
                rungs.push([w[lw - 2], x[lx - 1]]);
                rungs.push([w[lw - 1], x[lx - 2]]);
            }
        }
    }
    for &[a, c] in &rungs {
        b.edge(a, c);
    }
    Ok(finish(
        b,
        FamilyTag::CleanLadder,
        Witness::CleanLadder { rail_w: VertexPath(w), rail_x: VertexPath(x), rungs },
    ))
}

/// Reads a plain fan (no subdivisions) as a chain of triangles sharing the apex.
pub fn fan_as_lambda(apex: Vertex, rim: &[Vertex]) -> Option<Certificate> {
    if rim.len() < 2 {
        return None;
    }
    let blocks: Vec<Vec<Vertex>> = rim.windows(2).map(|w| vec![w[0], apex, w[1]]).collect();
    let deleted = vec![false; blocks.len() - 1];
    Certificate::new(FamilyTag::Lambda, Witness::Lambda { blocks, deleted }, &[]).ok()
}

/// Reads an induced cycle of length `L` as a lambda chain of `L - 2` triangles
/// around `cycle[0]` with every identified edge deleted.
pub fn cycle_as_lambda(cycle: &[Vertex]) -> Option<Certificate> {
    if cycle.len() < 3 {
        return None;
    }
    let apex = cycle[0];
    let blocks: Vec<Vec<Vertex>> = cycle[1..].windows(2).map(|w| vec![w[0], apex, w[1]]).collect();
    let deleted = vec![true; blocks.len() - 1];
    Certificate::new(FamilyTag::Lambda, Witness::Lambda { blocks, deleted }, &[]).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn theta_examples() {
        let (g, c) = make_theta(&[2, 2, 2]).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(c.order, 3);
        assert!(verify_certificate(&g, &c));
        let (g, c) = make_theta(&[1, 2, 2]).unwrap();
        assert!(g.has_edge(0, 1) && verify_certificate(&g, &c));
        assert_eq!(make_theta(&[1, 1, 2]), Err(FamilyError::ParallelEdges));
        assert_eq!(make_theta(&[2, 2]), Err(FamilyError::TooFewPaths));
    }

    #[test]
    fn lambda_examples() {
        let (g, c) = make_lambda(&[BlockKind::K3, BlockKind::K3], &[false]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 5));
        assert!(verify_certificate(&g, &c));
        let (g, c) = make_lambda(&[BlockKind::K3; 3], &[true, true]).unwrap();
        assert_eq!(g.n(), 5);
        let order: Vec<_> = vec![0, 1, 3, 4, 2];
        assert!(g.is_induced_cycle(&order));
        assert!(verify_certificate(&g, &c));
        let (g, c) = make_lambda(&[BlockKind::K4], &[]).unwrap();
        assert_eq!(g, named::complete(4));
        assert!(verify_certificate(&g, &c));
        assert_eq!(make_lambda(&[BlockKind::K3, BlockKind::K3], &[]), Err(FamilyError::BadFlags));
    }

    #[test]
    fn fan_examples() {
        let (g, c) = make_fan(&[0, 0, 0], &[0, 0]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 5));
        assert!(verify_certificate(&g, &c));
        let (g, c) = make_fan(&[1, 0, 0], &[2, 0]).unwrap();
        assert_eq!(g.n(), 7);
        assert!(verify_certificate(&g, &c));
        assert_eq!(make_fan(&[0, 0], &[0]), Err(FamilyError::TooFewSpokes));
    }

    #[test]
    fn delta_fan_examples() {
        let (g, c) = make_delta_fan(2, &[0, 0], &[0]).unwrap();
        assert_eq!(g.n(), 7);
        assert!(verify_certificate(&g, &c));
        let (g, c) = make_delta_fan(2, &[1, 1], &[3]).unwrap();
        assert_eq!(g.n(), 12);
        assert!(verify_certificate(&g, &c));
        let (g, c) = make_delta_fan(3, &[0, 2, 1], &[1, 0]).unwrap();
        assert!(verify_certificate(&g, &c));
        assert!(matches!(make_delta_fan(1, &[0], &[]), Err(FamilyError::BadSpec(_))));
    }

    #[test]
    fn ladder_examples() {
        let (g, c) = make_ladder_family(FamilyTag::LadderI, 3, &[1, 1], &[1, 1, 1]).unwrap();
        assert_eq!((g.n(), g.edge_count(), c.order), (6, 7, 3));
        assert!(verify_certificate(&g, &c));
        for kind in [FamilyTag::LadderDelta, FamilyTag::LadderNablaDelta] {
            let (g, c) = make_ladder_family(kind, 2, &[1], &[1, 1]).unwrap();
            assert!(verify_certificate(&g, &c), "{kind}");
            assert!(g.is_two_connected());
        }
        assert_eq!(make_ladder_family(FamilyTag::LadderI, 0, &[], &[]), Err(FamilyError::Empty));
    }

    #[test]
    fn clean_ladder_examples() {
        let plain = RungSpec::Plain { gap_w: 1, gap_x: 1 };
        let (g, c) = make_clean_ladder(&[plain; 3]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 7));
        assert!(verify_certificate(&g, &c));
        let (g, c) = make_clean_ladder(&[plain, RungSpec::DegenerateCross, plain]).unwrap();
        assert_eq!(c.order, 4);
        assert!(verify_certificate(&g, &c));
        assert_eq!(make_clean_ladder(&[]), Err(FamilyError::Empty));
    }

    #[test]
    fn verify_examples() {
        let k5 = named::complete(5);
        assert!(verify_certificate(&k5, &Certificate::clique(&[0, 2, 3, 4])));
        let (g, c) = make_theta(&[2, 2, 2]).unwrap();
        let mut e = g.edges();
        e.push((2, 3));
        let tampered = Graph::from_edge_list(g.n(), &e).unwrap();
        assert_eq!(check_certificate(&tampered, &c).unwrap_err().clause(), 'b');
        let (g, c) = make_delta_fan(3, &[0, 0, 0], &[0, 0]).unwrap();
        assert!(verify_certificate(&g, &c));
        let c = c.with_min_order(4);
        assert_eq!(check_certificate(&g, &c).unwrap_err().clause(), 'c');
    }

    #[test]
    fn plain_fan_reads_as_triangle_chain() {
        for spokes in 3..=7 {
            let (g, c) = make_fan(&vec![0; spokes], &vec![0; spokes - 1]).unwrap();
            let Witness::Fan { apex, rim, .. } = &c.witness else { unreachable!() };
            let lam = fan_as_lambda(*apex, rim).unwrap();
            assert_eq!(lam.order, spokes - 1);
            assert!(verify_certificate(&g, &lam));
        }
    }

    #[test]
    fn cycle_reads_as_lambda() {
        for len in 3..9 {
            let g = named::cycle(len);
            let cyc: Vec<_> = (0..len).collect();
            let lam = cycle_as_lambda(&cyc).unwrap();
            assert_eq!(lam.order, len - 2);
            assert!(verify_certificate(&g, &lam));
        }
    }
}
