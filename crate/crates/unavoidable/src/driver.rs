//! Top-level search: vertex enumeration without long induced cycles, the
//! high-degree / bounded-degree case split, and reduction of structural
//! certificates to a clique, theta or lambda witness.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bridges_ties::{locally_finite_pipeline_traced, LadderOutcome};
use crate::connecting_tree::high_degree_pipeline_traced;
use crate::families::{check_certificate, cycle_as_lambda, verify_certificate, Certificate, FamilyTag, Witness};
use crate::graph::{Graph, Vertex};
use crate::ladder::clean_ladder;
use crate::oracle::{find_small_theorem_witness, MAX_LIMIT};
use crate::ramsey::ramsey_bound;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DriverError {
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("order {0} is below 3")]
    BadOrder(usize),
    #[error("invalid certificate: {0}")]
    BadCertificate(String),
}

/// Outcome of the no-long-cycle enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Enumeration {
    /// Vertex ordering and the vertices added by each accretion step.
    Ordering { order: Vec<Vertex>, steps: Vec<Vec<Vertex>> },
    /// An induced cycle of at least the requested length.
    LongCycle { cycle: Vec<Vertex> },
}

impl Enumeration {
    pub fn lambda_witness(&self) -> Option<Certificate> {
        match self {
            Enumeration::LongCycle { cycle } => cycle_as_lambda(cycle),
            Enumeration::Ordering { .. } => None,
        }
    }
}

/// Search-node budget for the exhaustive induced-cycle search.
pub const CYCLE_SEARCH_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("search budget exhausted")]
pub struct BudgetExhausted;

/// Backtracking search for an induced cycle with at least `c` vertices.
pub fn find_long_induced_cycle(g: &Graph, c: usize, budget: usize) -> Result<Option<Vec<Vertex>>, BudgetExhausted> {
    let n = g.n();
    let mut nodes = 0usize;
    let mut on_path = vec![false; n];
    // Number of path vertices adjacent to each vertex.
    let mut touch = vec![0usize; n];
    fn push(g: &Graph, v: Vertex, path: &mut Vec<Vertex>, on_path: &mut [bool], touch: &mut [usize]) {
        path.push(v);
        on_path[v] = true;
        for &w in g.neighbors(v) {
            touch[w] += 1;
        }
    }
    fn pop(g: &Graph, path: &mut Vec<Vertex>, on_path: &mut [bool], touch: &mut [usize]) {
        let v = path.pop().expect("nonempty path");
        on_path[v] = false;
        for &w in g.neighbors(v) {
            touch[w] -= 1;
        }
    }
    for s in 0..n {
        let mut path = Vec::new();
        push(g, s, &mut path, &mut on_path, &mut touch);
        let mut stack: Vec<usize> = vec![0];
        while let Some(idx) = stack.last_mut() {
            let last = *path.last().expect("path holds the start");
            let nb = g.neighbors(last);
            if *idx >= nb.len() {
                stack.pop();
                if path.len() > 1 {
                    pop(g, &mut path, &mut on_path, &mut touch);
                }
                continue;
            }
            let w = nb[*idx];
            *idx += 1;
            nodes += 1;
            if nodes > budget {
                return Err(BudgetExhausted);
            }
            if w <= s || on_path[w] {
                continue;
            }
            let sees_start = path.len() > 1 && g.has_edge(w, s);
            let allowed = 1 + usize::from(sees_start);
            if touch[w] != allowed {
                continue;
            }
            if sees_start {
                if path.len() + 1 >= c.max(3) {
                    path.push(w);
                    return Ok(Some(path));
                }
                continue;
            }
            push(g, w, &mut path, &mut on_path, &mut touch);
            stack.push(0);
        }
        pop(g, &mut path, &mut on_path, &mut touch);
    }
    Ok(None)
}

/// Shortest cycle through vertex 0, lexicographically smallest among those.
fn initial_cycle(g: &Graph) -> Option<Vec<Vertex>> {
    let nb = g.neighbors(0);
    let mut best: Option<Vec<Vertex>> = None;
    for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if let Some(p) = g.shortest_path(&[a], &[b], &[0]) {
                let mut cyc = vec![0];
                cyc.extend(p.0);
                if best.as_ref().is_none_or(|c| (cyc.len(), &cyc) < (c.len(), c)) {
                    best = Some(cyc);
                }
            }
        }
    }
    best
}

/// Shortest ear: a path with both ends in `inside`, distinct, and at least one
/// interior vertex, all outside. Returns the full path `a, x_1, …, x_m, b`.
fn shortest_ear(g: &Graph, inside: &[bool]) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut best: Option<Vec<Vertex>> = None;
    for a in (0..n).filter(|&a| inside[a]) {
        let mut parent = vec![usize::MAX; n];
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &x in g.neighbors(a) {
            if !inside[x] && dist[x] == usize::MAX {
                dist[x] = 1;
                parent[x] = a;
                queue.push_back(x);
            }
        }
        let mut found: Option<Vec<Vertex>> = None;
        while let Some(x) = queue.pop_front() {
            if found.as_ref().is_some_and(|f| dist[x] + 2 > f.len()) {
                break;
            }
            if let Some(&b) = g.neighbors(x).iter().find(|&&b| inside[b] && b != a) {
                let mut p = vec![b, x];
                let mut cur = x;
                while parent[cur] != a {
                    cur = parent[cur];
                    p.push(cur);
                }
                p.push(a);
                p.reverse();
                if found.as_ref().is_none_or(|f| p.len() < f.len()) {
                    found = Some(p);
                }
                continue;
            }
            for &y in g.neighbors(x) {
                if !inside[y] && dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if let Some(p) = found {
            if best.as_ref().is_none_or(|b| p.len() < b.len()) {
                best = Some(p);
            }
        }
    }
    best
}

pub fn nobigcycle_enumerate(g: &Graph, c: usize) -> Result<Enumeration, DriverError> {
    nobigcycle_enumerate_with_budget(g, c, CYCLE_SEARCH_BUDGET)
}

/// As [`nobigcycle_enumerate`], with an explicit budget for the exhaustive
/// cycle search that runs before accretion (zero skips it).
pub fn nobigcycle_enumerate_with_budget(g: &Graph, c: usize, budget: usize) -> Result<Enumeration, DriverError> {
    if c < 3 {
        return Err(DriverError::BadOrder(c));
    }
    if !g.is_two_connected() {
        return Err(DriverError::NotTwoConnected);
    }
    if budget > 0 {
        if let Ok(Some(cycle)) = find_long_induced_cycle(g, c, budget) {
            return Ok(Enumeration::LongCycle { cycle });
        }
    }
    let d0 = initial_cycle(g).expect("2-connected graphs have a cycle through every vertex");
    if d0.len() >= c {
        return Ok(Enumeration::LongCycle { cycle: d0 });
    }
    let mut inside = vec![false; g.n()];
    for &v in &d0 {
        inside[v] = true;
    }
    let mut order = d0.clone();
    let mut steps = vec![d0];
    while order.len() < g.n() {
        let ear = shortest_ear(g, &inside).expect("2-connected graphs admit an ear");
        let (a, b) = (ear[0], *ear.last().unwrap());
        let outside: Vec<Vertex> = (0..g.n()).filter(|&v| !inside[v]).collect();
        let back = g.shortest_path(&[b], &[a], &outside).expect("the prefix is connected");
        let mut cycle = ear[..ear.len() - 1].to_vec();
        cycle.extend_from_slice(&back[..back.len() - 1]);
        if cycle.len() >= c && g.is_induced_cycle(&cycle) {
            return Ok(Enumeration::LongCycle { cycle });
        }
        let new: Vec<Vertex> = ear[1..ear.len() - 1].to_vec();
        for &v in &new {
            inside[v] = true;
        }
        order.extend_from_slice(&new);
        steps.push(new);
    }
    Ok(Enumeration::Ordering { order, steps })
}

/// `prefix_two_connected(g, order)[j]` tells whether the first `j` vertices induce a 2-connected graph.
pub fn prefix_two_connected(g: &Graph, order: &[Vertex]) -> Vec<bool> {
    (0..=order.len())
        .map(|j| j >= 3 && g.induced_subgraph(&order[..j]).map(|(h, _)| h.is_two_connected()).unwrap_or(false))
        .collect()
}

/// For every `i` in `[c, n]` some `j` in `[i − c, i]` has a 2-connected prefix.
pub fn ordering_property_holds(g: &Graph, order: &[Vertex], c: usize) -> bool {
    let ok = prefix_two_connected(g, order);
    (c..=order.len()).all(|i| (i.saturating_sub(c)..=i).any(|j| ok[j]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    HighDegree,
    LocallyBounded,
    CleanLadder,
    LongCycle,
    Oracle,
    Absent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub k: usize,
    /// Degree at which the high-degree branch is taken first.
    pub degree: usize,
    /// Minimum number of ties or rungs a ladder outcome needs.
    pub length: usize,
    pub max_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub certificate: Option<Certificate>,
    /// The certificate reduced to a clique, theta or lambda of order at least r.
    pub reduced: Option<Certificate>,
    /// Stages in the order tried; the last one produced the certificate.
    pub route: Vec<Stage>,
    pub thresholds: Thresholds,
    pub log: Vec<String>,
}

/// Degree threshold for scale `k`.
pub fn degree_threshold(k: usize) -> usize {
    ramsey_bound(k, k)
}

/// Apex candidates tried by the high-degree branch.
const APEX_TRIES: usize = 6;

pub fn find_unavoidable(g: &Graph, r: usize, k: usize) -> Result<SearchReport, DriverError> {
    if r < 3 {
        return Err(DriverError::BadOrder(r));
    }
    if !g.is_two_connected() {
        return Err(DriverError::NotTwoConnected);
    }
    let k = k.max(3);
    let thresholds = Thresholds { k, degree: degree_threshold(k), length: k, max_degree: g.max_degree() };
    let mut report = SearchReport { certificate: None, reduced: None, route: Vec::new(), thresholds, log: Vec::new() };
    let branches = if thresholds.max_degree >= thresholds.degree {
        [Stage::HighDegree, Stage::LocallyBounded]
    } else {
        [Stage::LocallyBounded, Stage::HighDegree]
    };
    for stage in branches {
        report.route.push(stage);
        for cert in run_branch(g, stage, k, &mut report) {
            if accept(g, cert, r, &mut report) {
                return Ok(report);
            }
        }
    }
    report.route.push(Stage::LongCycle);
    match find_long_induced_cycle(g, r + 2, CYCLE_SEARCH_BUDGET / 10) {
        Ok(Some(cycle)) => {
            if let Some(cert) = cycle_as_lambda(&cycle) {
                report.log.push(format!("induced cycle of length {}", cycle.len()));
                if accept(g, cert, r, &mut report) {
                    return Ok(report);
                }
            }
        }
        Ok(None) => report.log.push(format!("no induced cycle of length {}", r + 2)),
        Err(BudgetExhausted) => report.log.push("cycle search budget exhausted".into()),
    }
    if g.n() <= MAX_LIMIT {
        report.route.push(Stage::Oracle);
        if let Ok(Some(cert)) = find_small_theorem_witness(g, r) {
            report.log.push(format!("oracle found {} of order {}", cert.tag, cert.order));
            if accept(g, cert, r, &mut report) {
                return Ok(report);
            }
        } else {
            report.log.push("oracle found no witness".into());
        }
    }
    report.route.push(Stage::Absent);
    Ok(report)
}

/// Records a verified structural certificate; true once it reduces to order `r`.
fn accept(g: &Graph, cert: Certificate, r: usize, report: &mut SearchReport) -> bool {
    if !verify_certificate(g, &cert) {
        report.log.push(format!("discarded unverifiable {} certificate", cert.tag));
        return false;
    }
    let reduced = reduce_certificate(g, &cert, r).ok().flatten();
    let better = report.certificate.as_ref().is_none_or(|c| reduced.is_some() || c.order < cert.order);
    if better {
        report.certificate = Some(cert);
    }
    if reduced.is_some() {
        report.reduced = reduced;
        return true;
    }
    false
}

fn run_branch(g: &Graph, stage: Stage, k: usize, report: &mut SearchReport) -> Vec<Certificate> {
    let mut out = Vec::new();
    match stage {
        Stage::HighDegree => {
            let mut by_degree: Vec<Vertex> = (0..g.n()).filter(|&v| g.degree(v) >= k).collect();
            by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
            for &v in by_degree.iter().take(APEX_TRIES) {
                match high_degree_pipeline_traced(g, v, k) {
                    Ok((Some(c), _)) => {
                        report.log.push(format!("high degree at {v}: {} of order {}", c.tag, c.order));
                        out.push(c);
                    }
                    Ok((None, _)) => report.log.push(format!("high degree at {v}: nothing extracted")),
                    Err(e) => report.log.push(format!("high degree at {v}: {e}")),
                }
            }
        }
        Stage::LocallyBounded => match locally_finite_pipeline_traced(g, k) {
            Ok((LadderOutcome::Cert(c), branch, _)) => {
                report.log.push(format!("bounded degree ({branch:?}): {} of order {}", c.tag, c.order));
                out.push(c);
            }
            Ok((LadderOutcome::MessyLadder(l), branch, _)) => {
                report.log.push(format!("bounded degree ({branch:?}): messy ladder with {} rungs", l.rungs().len()));
                report.route.push(Stage::CleanLadder);
                match clean_ladder(&l).map(|c| c.to_certificate()) {
                    Ok(Some(c)) => out.push(c),
                    Ok(None) => report.log.push("cleaned ladder has no certificate".into()),
                    Err(e) => report.log.push(format!("cleaning failed: {e}")),
                }
            }
            Ok((LadderOutcome::Insufficient, branch, _)) => {
                report.log.push(format!("bounded degree ({branch:?}): insufficient"))
            }
            Err(e) => report.log.push(format!("bounded degree: {e}")),
        },
        _ => {}
    }
    out
}

/// Lambda chain over two rails joined by rungs at the given rail positions,
/// listed in weakly increasing order on both rails. The rung edges are kept,
/// all other identified edges deleted.
pub fn rail_chain_lambda(w: &[Vertex], x: &[Vertex], rungs: &[(usize, usize)]) -> Option<Certificate> {
    let (mut p, mut q) = *rungs.first()?;
    let kept: BTreeSet<(usize, usize)> = rungs.iter().copied().collect();
    let mut blocks = Vec::new();
    let mut deleted = Vec::new();
    for &(a, b) in &rungs[1..] {
        if a < p || b < q {
            return None;
        }
        while (p, q) != (a, b) {
            if !blocks.is_empty() {
                deleted.push(!kept.contains(&(p, q)));
            }
            if p < a {
                blocks.push(vec![w[p], x[q], w[p + 1]]);
                p += 1;
            } else {
                blocks.push(vec![x[q], w[p], x[q + 1]]);
                q += 1;
            }
        }
    }
    if blocks.is_empty() {
        return None;
    }
    Certificate::new(FamilyTag::Lambda, Witness::Lambda { blocks, deleted }, &[]).ok()
}

/// Longest verified rail chains, grown greedily over rungs sorted by position.
fn rail_chain_candidates(g: &Graph, w: &[Vertex], x: &[Vertex], rungs: &[(usize, usize)]) -> Vec<Certificate> {
    let mut rungs = rungs.to_vec();
    rungs.sort_unstable();
    rungs.dedup();
    let mut out = Vec::new();
    let mut chain: Vec<(usize, usize)> = Vec::new();
    let mut best: Option<Certificate> = None;
    for &r in &rungs {
        chain.push(r);
        if chain.len() == 1 {
            continue;
        }
        match rail_chain_lambda(w, x, &chain).filter(|c| verify_certificate(g, c)) {
            Some(c) => best = Some(c),
            None => {
                out.extend(best.take());
                chain = vec![r];
            }
        }
    }
    out.extend(best);
    out
}

fn cycle_candidate(g: &Graph, cycle: &[Vertex]) -> Option<Certificate> {
    if g.is_induced_cycle(cycle) {
        cycle_as_lambda(cycle)
    } else {
        None
    }
}

/// Cycle through two rungs given as rail positions `(a, b)` before `(c, d)`.
fn rung_cycle(w: &[Vertex], x: &[Vertex], (a, b): (usize, usize), (c, d): (usize, usize), inner: (&[Vertex], &[Vertex])) -> Vec<Vertex> {
    let mut cyc: Vec<Vertex> = w[a..=c].to_vec();
    cyc.extend(inner.1.iter().copied());
    cyc.extend(x[b..=d].iter().rev().copied());
    cyc.extend(inner.0.iter().rev().copied());
    cyc.dedup();
    if cyc.len() > 1 && cyc[0] == *cyc.last().unwrap() {
        cyc.pop();
    }
    cyc
}

pub fn reduce_certificate(g: &Graph, cert: &Certificate, r: usize) -> Result<Option<Certificate>, DriverError> {
    if r < 3 {
        return Err(DriverError::BadOrder(r));
    }
    check_certificate(g, cert).map_err(|v| DriverError::BadCertificate(v.to_string()))?;
    let mut candidates: Vec<Certificate> = Vec::new();
    match &cert.witness {
        Witness::Clique | Witness::Lambda { .. } => candidates.push(cert.clone()),
        Witness::Theta { paths, .. } => {
            candidates.push(cert.clone());
            let mut by_len: Vec<&crate::graph::VertexPath> = paths.iter().collect();
            by_len.sort_by_key(|p| std::cmp::Reverse(p.len()));
            if let [p1, p2, ..] = by_len.as_slice() {
                let mut cyc = p1.0.clone();
                cyc.extend(p2.iter().rev().skip(1).take(p2.len() - 2));
                candidates.extend(cycle_candidate(g, &cyc));
            }
        }
        Witness::Fan { apex, spokes, rim } => {
            let pos = |v: Vertex| rim.position(v).expect("feet lie on the rim");
            let direct: Vec<(usize, usize)> = spokes.iter().filter(|s| s.len() == 2).map(|s| (0, pos(s[1]))).collect();
            candidates.extend(rail_chain_candidates(g, &[*apex], rim, &direct));
            for i in 0..spokes.len() {
                for j in i + 1..spokes.len() {
                    if spokes[i + 1..j].iter().any(|s| s.len() == 2) {
                        break;
                    }
                    let (fi, fj) = (pos(spokes[i][spokes[i].len() - 1]), pos(spokes[j][spokes[j].len() - 1]));
                    let mut cyc: Vec<Vertex> = spokes[i].0.clone();
                    cyc.extend_from_slice(&rim[fi + 1..=fj]);
                    cyc.extend(spokes[j].iter().rev().skip(1).take(spokes[j].len() - 2));
                    candidates.extend(cycle_candidate(g, &cyc));
                }
            }
        }
        Witness::DeltaFan { spokes, rim, feet, .. } => {
            for i in 0..spokes.len() {
                for j in i + 1..spokes.len() {
                    let (b, a) = (rim.position(feet[i][1]).unwrap(), rim.position(feet[j][0]).unwrap());
                    let mut cyc: Vec<Vertex> = spokes[i].0.clone();
                    cyc.extend_from_slice(&rim[b..=a]);
                    cyc.extend(spokes[j].iter().rev().take(spokes[j].len() - 1));
                    candidates.extend(cycle_candidate(g, &cyc));
                }
            }
        }
        Witness::Ladder { rail_p, rail_q, ties } => {
            let pp = |v: &Vertex| rail_p.position(*v).expect("P foot on P");
            let qp = |v: &Vertex| rail_q.position(*v).expect("Q foot on Q");
            let direct: Vec<(usize, usize)> =
                ties.iter().filter(|t| t.path.is_empty()).map(|t| (pp(&t.p_feet[0]), qp(&t.q_feet[0]))).collect();
            candidates.extend(rail_chain_candidates(g, rail_p, rail_q, &direct));
            let mut sorted: Vec<_> = ties.iter().collect();
            sorted.sort_by_key(|t| t.p_feet.iter().map(pp).min());
            for pair in sorted.windows(2) {
                let (s, t) = (pair[0], pair[1]);
                let from = (s.p_feet.iter().map(pp).max().unwrap(), s.q_feet.iter().map(qp).max().unwrap());
                let to = (t.p_feet.iter().map(pp).min().unwrap(), t.q_feet.iter().map(qp).min().unwrap());
                if from.0 <= to.0 && from.1 <= to.1 {
                    let cyc = rung_cycle(rail_p, rail_q, from, to, (&s.path, &t.path));
                    candidates.extend(cycle_candidate(g, &cyc));
                }
            }
        }
        Witness::CleanLadder { rail_w, rail_x, rungs } => {
            let at: Vec<(usize, usize)> =
                rungs.iter().map(|[a, b]| (rail_w.position(*a).unwrap(), rail_x.position(*b).unwrap())).collect();
            candidates.extend(rail_chain_candidates(g, rail_w, rail_x, &at));
            let mut sorted = at.clone();
            sorted.sort_unstable();
            for pair in sorted.windows(2) {
                if pair[0].1 <= pair[1].1 {
                    let cyc = rung_cycle(rail_w, rail_x, pair[0], pair[1], (&[], &[]));
                    candidates.extend(cycle_candidate(g, &cyc));
                }
            }
        }
    }
    Ok(candidates
        .into_iter()
        .filter(|c| matches!(c.tag, FamilyTag::Clique | FamilyTag::Theta | FamilyTag::Lambda) && c.order >= r)
        .map(|c| c.with_min_order(r))
        .filter(|c| verify_certificate(g, c))
        .max_by_key(|c| (c.order, std::cmp::Reverse(c.vertices.clone()))))
}
