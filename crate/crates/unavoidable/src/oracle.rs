//! Brute-force ground truth and random instance generation.
//!
//! The recognizers here are deliberately written from the family definitions
//! without calling into `families`, so that the certifier and the oracle can
//! check each other.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{
    make_clean_ladder, make_clique, make_delta_fan, make_fan, make_lambda, make_ladder_family, make_theta, BlockKind, Certificate,
    FamilyError, FamilyTag, RungSpec, TieWitness, Witness,
};
use crate::graph::{Graph, Vertex, VertexPath};
use crate::ladder::Ladder;

/// Exhaustive search budget.
pub const MAX_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleFamily {
    Family(FamilyTag),
    InducedCycleAtLeast(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleQuery {
    pub family: OracleFamily,
    pub min_order: usize,
    limit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {n} vertices, above the oracle limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("limit {0} exceeds the exhaustive budget of {MAX_LIMIT}")]
    LimitTooHigh(usize),
}

impl OracleQuery {
    pub fn new(family: OracleFamily, min_order: usize, limit: usize) -> Result<Self, OracleError> {
        if limit > MAX_LIMIT {
            return Err(OracleError::LimitTooHigh(limit));
        }
        Ok(OracleQuery { family, min_order, limit })
    }

    pub fn family(tag: FamilyTag, min_order: usize) -> Self {
        OracleQuery { family: OracleFamily::Family(tag), min_order, limit: MAX_LIMIT }
    }

    pub fn cycle_at_least(r: usize) -> Self {
        OracleQuery { family: OracleFamily::InducedCycleAtLeast(r), min_order: r, limit: MAX_LIMIT }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Fewest vertices any witness of this query can have.
    fn min_size(&self) -> usize {
        let m = self.min_order;
        match self.family {
            OracleFamily::InducedCycleAtLeast(r) => r.max(3),
            OracleFamily::Family(tag) => match tag {
                FamilyTag::Clique => m.max(1),
                FamilyTag::Theta => m.max(3) + 1,
                FamilyTag::Lambda => m.max(1) + 2,
                FamilyTag::Fan => m.max(3) + 1,
                FamilyTag::DeltaFan => 3 * m.max(2) + 1,
                FamilyTag::LadderI => 2 * m.max(1),
                FamilyTag::LadderDelta => 4 * m.max(1),
                FamilyTag::LadderNablaDelta => 5 * m.max(1),
                FamilyTag::CleanLadder => 2,
            },
        }
    }
}

/// Local view of an induced subgraph with host ids.
struct Sub<'a> {
    g: &'a Graph,
    set: Vec<Vertex>,
    inside: Vec<bool>,
}

impl<'a> Sub<'a> {
    fn new(g: &'a Graph, set: &[Vertex]) -> Self {
        let mut inside = vec![false; g.n()];
        for &v in set {
            inside[v] = true;
        }
        Sub { g, set: set.to_vec(), inside }
    }

    fn nbrs(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.g.neighbors(v).iter().copied().filter(|&w| self.inside[w])
    }

    fn deg(&self, v: Vertex) -> usize {
        self.nbrs(v).count()
    }

    fn adj(&self, u: Vertex, v: Vertex) -> bool {
        self.g.has_edge(u, v)
    }

    fn edge_count(&self) -> usize {
        self.set.iter().map(|&v| self.deg(v)).sum::<usize>() / 2
    }

    /// Components of the subgraph restricted to `part`.
    fn components_of(&self, part: &[Vertex]) -> Vec<Vec<Vertex>> {
        let allowed: BTreeSet<Vertex> = part.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &s in part {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for w in self.nbrs(u) {
                    if allowed.contains(&w) && seen.insert(w) {
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Orders `comp` as a path if it induces one.
    fn as_path(&self, comp: &[Vertex]) -> Option<Vec<Vertex>> {
        let set: BTreeSet<Vertex> = comp.iter().copied().collect();
        let inner = |v: Vertex| self.nbrs(v).filter(|w| set.contains(w)).collect::<Vec<_>>();
        if comp.len() == 1 {
            return Some(comp.to_vec());
        }
        let ends: Vec<Vertex> = comp.iter().copied().filter(|&v| inner(v).len() == 1).collect();
        if ends.len() != 2 || comp.iter().any(|&v| inner(v).len() > 2) {
            return None;
        }
        let mut path = vec![ends[0]];
        let mut prev = usize::MAX;
        let mut cur = ends[0];
        while let Some(&next) = inner(cur).iter().find(|&&w| w != prev) {
            path.push(next);
            prev = cur;
            cur = next;
            if path.len() > comp.len() {
                return None;
            }
        }
        (path.len() == comp.len()).then_some(path)
    }
}

fn raw_certificate(tag: FamilyTag, order: usize, witness: Witness, vertices: &[Vertex]) -> Certificate {
    let mut vs = vertices.to_vec();
    vs.sort_unstable();
    Certificate { tag, order, vertices: vs, witness, min_order: None }
}

fn match_clique(s: &Sub, m: usize) -> Option<Certificate> {
    let v = &s.set;
    if v.len() < m.max(1) {
        return None;
    }
    let all = v.iter().enumerate().all(|(i, &a)| v[i + 1..].iter().all(|&b| s.adj(a, b)));
    all.then(|| raw_certificate(FamilyTag::Clique, v.len(), Witness::Clique, v))
}

fn match_cycle(s: &Sub, r: usize) -> Option<Certificate> {
    if s.set.len() < r.max(3) || s.set.iter().any(|&v| s.deg(v) != 2) {
        return None;
    }
    if s.components_of(&s.set).len() != 1 {
        return None;
    }
    // Walk the cycle from its smallest vertex.
    let mut cyc = vec![s.set[0]];
    let mut prev = usize::MAX;
    loop {
        let cur = *cyc.last().unwrap();
        let next = s.nbrs(cur).find(|&w| w != prev && (cyc.len() < 2 || w != cyc[cyc.len() - 2]))?;
        if next == cyc[0] {
            break;
        }
        prev = cur;
        cyc.push(next);
    }
    let apex = cyc[0];
    let blocks: Vec<Vec<Vertex>> = cyc[1..].windows(2).map(|w| vec![w[0], apex, w[1]]).collect();
    let deleted = vec![true; blocks.len() - 1];
    let order = blocks.len();
    Some(raw_certificate(FamilyTag::Lambda, order, Witness::Lambda { blocks, deleted }, &s.set))
}

fn match_theta(s: &Sub, m: usize) -> Option<Certificate> {
    let v = &s.set;
    let hubs: Vec<Vertex> = v.iter().copied().filter(|&x| s.deg(x) != 2).collect();
    if hubs.len() != 2 {
        return None;
    }
    let (a, b) = (hubs[0], hubs[1]);
    let k = s.deg(a);
    if k != s.deg(b) || k < m.max(3) {
        return None;
    }
    let rest: Vec<Vertex> = v.iter().copied().filter(|&x| x != a && x != b).collect();
    let mut paths = Vec::new();
    if s.adj(a, b) {
        paths.push(VertexPath(vec![a, b]));
    }
    for comp in s.components_of(&rest) {
        let mut p = s.as_path(&comp)?;
        if !s.adj(a, p[0]) {
            p.reverse();
        }
        let (first, last) = (p[0], p[p.len() - 1]);
        if !s.adj(a, first) || !s.adj(b, last) {
            return None;
        }
        let mut full = vec![a];
        full.extend(p);
        full.push(b);
        paths.push(VertexPath(full));
    }
    if paths.len() != k || s.edge_count() != paths.iter().map(|p| p.len() - 1).sum::<usize>() {
        return None;
    }
    Some(raw_certificate(FamilyTag::Theta, k, Witness::Theta { branch: [a, b], paths }, v))
}

/// Backtracking over block chains covering the subset.
fn match_lambda(s: &Sub, m: usize) -> Option<Certificate> {
    let n = s.set.len();
    if n < 3 {
        return None;
    }
    let mut best: Option<Vec<Vec<Vertex>>> = None;
    let mut chain: Vec<Vec<Vertex>> = Vec::new();
    let mut used: BTreeSet<Vertex> = BTreeSet::new();

    fn block_edges_ok(s: &Sub, blocks: &[Vec<Vertex>]) -> bool {
        let mut identified = BTreeSet::new();
        for b in &blocks[1..] {
            identified.insert((b[0].min(b[1]), b[0].max(b[1])));
        }
        let mut expected = BTreeSet::new();
        for b in blocks {
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    let e = (b[i].min(b[j]), b[i].max(b[j]));
                    if !identified.contains(&e) && !s.adj(e.0, e.1) {
                        return false;
                    }
                    expected.insert(e);
                }
            }
        }
        for &u in &s.set {
            for w in s.nbrs(u) {
                if u < w && !expected.contains(&(u, w)) {
                    return false;
                }
            }
        }
        true
    }

    fn extend(
        s: &Sub,
        m: usize,
        chain: &mut Vec<Vec<Vertex>>,
        used: &mut BTreeSet<Vertex>,
        best: &mut Option<Vec<Vec<Vertex>>>,
    ) {
        if best.is_some() {
            return;
        }
        if used.len() == s.set.len() {
            if chain.len() >= m && block_edges_ok(s, chain) {
                *best = Some(chain.clone());
            }
            return;
        }
        let last = chain.last().unwrap().clone();
        let (x, y) = (last[last.len() - 2], last[last.len() - 1]);
        let free: Vec<Vertex> = s.set.iter().copied().filter(|v| !used.contains(v)).collect();
        for (a, b) in [(x, y), (y, x)] {
            for &w in &free {
                // New vertices only touch their own block.
                if !s.adj(a, w) || s.nbrs(w).any(|z| used.contains(&z) && z != a && z != b) {
                    continue;
                }
                chain.push(vec![a, b, w]);
                used.insert(w);
                extend(s, m, chain, used, best);
                used.remove(&w);
                chain.pop();
                for &w2 in &free {
                    if w2 == w
                        || !s.adj(a, w2)
                        || !s.adj(b, w2)
                        || !s.adj(b, w)
                        || s.nbrs(w2).any(|z| used.contains(&z) && z != a && z != b)
                    {
                        continue;
                    }
                    // K4 block: e and f disjoint, only the pair (w, w2) may later disappear.
                    chain.push(vec![a, b, w, w2]);
                    used.insert(w);
                    used.insert(w2);
                    extend(s, m, chain, used, best);
                    used.remove(&w);
                    used.remove(&w2);
                    chain.pop();
                }
            }
        }
    }

    let v = s.set.clone();
    for &a in &v {
        for &b in &v {
            if a == b {
                continue;
            }
            for &c in &v {
                if c == a || c == b || !s.adj(a, c) {
                    continue;
                }
                chain.push(vec![a, b, c]);
                used.extend([a, b, c]);
                extend(s, m, &mut chain, &mut used, &mut best);
                used.clear();
                chain.clear();
                for &d in &v {
                    if [a, b, c].contains(&d) || !s.adj(a, d) || !s.adj(b, d) || !s.adj(b, c) {
                        continue;
                    }
                    if !s.adj(a, c) {
                        continue;
                    }
                    chain.push(vec![a, b, c, d]);
                    used.extend([a, b, c, d]);
                    extend(s, m, &mut chain, &mut used, &mut best);
                    used.clear();
                    chain.clear();
                }
                if best.is_some() {
                    break;
                }
            }
        }
    }
    let blocks = best?;
    let deleted: Vec<bool> = blocks[1..].iter().map(|b| !s.adj(b[0], b[1])).collect();
    let order = blocks.len();
    Some(raw_certificate(FamilyTag::Lambda, order, Witness::Lambda { blocks, deleted }, &s.set))
}

fn match_fan(s: &Sub, m: usize) -> Option<Certificate> {
    for &apex in &s.set {
        let spokes_n = s.deg(apex);
        if spokes_n < m.max(3) {
            continue;
        }
        let rest: Vec<Vertex> = s.set.iter().copied().filter(|&v| v != apex).collect();
        if s.components_of(&rest).len() != 1 {
            continue;
        }
        let tree_edges = rest.iter().map(|&v| s.nbrs(v).filter(|&w| w != apex).count()).sum::<usize>() / 2;
        if tree_edges + 1 != rest.len() {
            continue;
        }
        let on_apex = |v: Vertex| s.adj(apex, v);
        for (i, &x) in rest.iter().enumerate() {
            for &y in &rest[i + 1..] {
                if let Some(c) = fan_with_rim_ends(s, apex, &rest, x, y, spokes_n, &on_apex) {
                    return Some(c);
                }
            }
        }
    }
    None
}

fn tree_path(s: &Sub, rest: &[Vertex], x: Vertex, y: Vertex, skip: Vertex) -> Option<Vec<Vertex>> {
    let allowed: BTreeSet<Vertex> = rest.iter().copied().collect();
    let mut parent = std::collections::BTreeMap::new();
    parent.insert(x, x);
    let mut queue = std::collections::VecDeque::from([x]);
    while let Some(u) = queue.pop_front() {
        for w in s.nbrs(u) {
            if w != skip && allowed.contains(&w) && !parent.contains_key(&w) {
                parent.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![y];
    let mut cur = y;
    while cur != x {
        cur = *parent.get(&cur)?;
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

fn fan_with_rim_ends(
    s: &Sub,
    apex: Vertex,
    rest: &[Vertex],
    x: Vertex,
    y: Vertex,
    spokes_n: usize,
    on_apex: &dyn Fn(Vertex) -> bool,
) -> Option<Certificate> {
    let rim = tree_path(s, rest, x, y, apex)?;
    let rim_set: BTreeSet<Vertex> = rim.iter().copied().collect();
    let off: Vec<Vertex> = rest.iter().copied().filter(|v| !rim_set.contains(v)).collect();
    let mut pendant: std::collections::BTreeMap<Vertex, Vec<Vertex>> = Default::default();
    for comp in s.components_of(&off) {
        let path = s.as_path(&comp)?;
        let touching: Vec<(Vertex, Vertex)> = comp
            .iter()
            .flat_map(|&c| s.nbrs(c).filter(|w| rim_set.contains(w)).map(move |w| (c, w)))
            .collect();
        if touching.len() != 1 {
            return None;
        }
        let (c1, foot) = touching[0];
        let mut p = path;
        if p[0] != c1 {
            p.reverse();
        }
        if p[0] != c1 || on_apex(foot) || pendant.contains_key(&foot) {
            return None;
        }
        let apex_hits: Vec<&Vertex> = p.iter().filter(|&&v| on_apex(v)).collect();
        if apex_hits != vec![p.last().unwrap()] {
            return None;
        }
        pendant.insert(foot, p);
    }
    let mut spokes = Vec::new();
    for &r in &rim {
        if on_apex(r) {
            spokes.push(VertexPath(vec![apex, r]));
        } else if let Some(p) = pendant.get(&r) {
            let mut sp = vec![apex];
            sp.extend(p.iter().rev());
            sp.push(r);
            spokes.push(VertexPath(sp));
        }
    }
    let is_foot = |v: Vertex| on_apex(v) || pendant.contains_key(&v);
    if spokes.len() != spokes_n || !is_foot(x) || !is_foot(y) || spokes.len() < 3 {
        return None;
    }
    let expected = rim.len() - 1 + spokes.iter().map(|p| p.len() - 1).sum::<usize>();
    if expected != s.edge_count() {
        return None;
    }
    let order = spokes.len();
    Some(raw_certificate(
        FamilyTag::Fan,
        order,
        Witness::Fan { apex, spokes, rim: VertexPath(rim) },
        &s.set,
    ))
}

fn match_delta_fan(s: &Sub, m: usize) -> Option<Certificate> {
    'apex: for &apex in &s.set {
        let t = s.deg(apex);
        if t < m.max(2) {
            continue;
        }
        let mut spokes = Vec::new();
        let mut pairs = Vec::new();
        let mut taken: BTreeSet<Vertex> = BTreeSet::from([apex]);
        for start in s.nbrs(apex).collect::<Vec<_>>() {
            let mut spoke = vec![apex, start];
            let mut prev = apex;
            let mut cur = start;
            while s.deg(cur) == 2 {
                let next = s.nbrs(cur).find(|&w| w != prev).unwrap();
                if spoke.contains(&next) {
                    continue 'apex;
                }
                spoke.push(next);
                prev = cur;
                cur = next;
            }
            let others: Vec<Vertex> = s.nbrs(cur).filter(|&w| w != prev).collect();
            if s.deg(cur) != 3 || others.len() != 2 || !s.adj(others[0], others[1]) {
                continue 'apex;
            }
            for &v in &spoke[1..] {
                if !taken.insert(v) {
                    continue 'apex;
                }
            }
            spokes.push(spoke);
            pairs.push([others[0], others[1]]);
        }
        let rim_part: Vec<Vertex> = s.set.iter().copied().filter(|v| !taken.contains(v)).collect();
        let comps = s.components_of(&rim_part);
        if comps.len() != 1 {
            continue;
        }
        let Some(rim) = s.as_path(&comps[0]) else { continue };
        let pos = |v: Vertex| rim.iter().position(|&r| r == v);
        let mut units: Vec<(usize, usize)> = Vec::new();
        for (i, pair) in pairs.iter_mut().enumerate() {
            let (Some(a), Some(b)) = (pos(pair[0]), pos(pair[1])) else { continue 'apex };
            if a.abs_diff(b) != 1 {
                continue 'apex;
            }
            if a > b {
                pair.swap(0, 1);
            }
            units.push((a.min(b), i));
        }
        units.sort_unstable();
        let ok_shape = units.first().map(|u| u.0) == Some(0)
            && units.last().map(|u| u.0 + 1) == Some(rim.len() - 1)
            && units.windows(2).all(|w| w[1].0 >= w[0].0 + 2);
        let expected = rim.len() - 1 + spokes.iter().map(|p| p.len() - 1).sum::<usize>() + 2 * t;
        if !ok_shape || expected != s.edge_count() {
            continue;
        }
        let spokes_sorted: Vec<VertexPath> = units.iter().map(|&(_, i)| VertexPath(spokes[i].clone())).collect();
        let feet: Vec<[Vertex; 2]> = units.iter().map(|&(_, i)| pairs[i]).collect();
        return Some(raw_certificate(
            FamilyTag::DeltaFan,
            t,
            Witness::DeltaFan { apex, spokes: spokes_sorted, rim: VertexPath(rim), feet },
            &s.set,
        ));
    }
    None
}

/// All induced paths of the subgraph starting at `start`, as vertex sequences.
fn induced_paths_from(s: &Sub, start: Vertex, out: &mut Vec<Vec<Vertex>>) {
    fn go(s: &Sub, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        out.push(path.clone());
        let last = *path.last().unwrap();
        let cands: Vec<Vertex> = s.nbrs(last).collect();
        for w in cands {
            if path.contains(&w) || path[..path.len() - 1].iter().any(|&p| s.adj(p, w)) {
                continue;
            }
            path.push(w);
            go(s, path, out);
            path.pop();
        }
    }
    go(s, &mut vec![start], out);
}

fn match_ladder(s: &Sub, tag: FamilyTag, m: usize) -> Option<Certificate> {
    let mut all_paths = Vec::new();
    for &v in &s.set {
        induced_paths_from(s, v, &mut all_paths);
    }
    for p in &all_paths {
        for q in &all_paths {
            if q.iter().any(|v| p.contains(v)) || !rails_start_joined(s, tag, p, q) {
                continue;
            }
            if let Some(c) = ladder_on_rails(s, tag, m, p, q) {
                return Some(c);
            }
        }
    }
    None
}

fn rails_start_joined(s: &Sub, tag: FamilyTag, p: &[Vertex], q: &[Vertex]) -> bool {
    match tag {
        FamilyTag::LadderI | FamilyTag::CleanLadder => true,
        FamilyTag::LadderDelta => p.len() >= 2 || q.len() >= 2,
        _ => p.len() >= 2 && q.len() >= 2 && !s.adj(p[0], q[0]),
    }
}

fn ladder_on_rails(s: &Sub, tag: FamilyTag, m: usize, p: &[Vertex], q: &[Vertex]) -> Option<Certificate> {
    let on_p = |v: Vertex| p.iter().position(|&x| x == v);
    let on_q = |v: Vertex| q.iter().position(|&x| x == v);
    let rest: Vec<Vertex> = s.set.iter().copied().filter(|&v| on_p(v).is_none() && on_q(v).is_none()).collect();
    let mut direct = Vec::new();
    for &a in p {
        for &b in q {
            if s.adj(a, b) {
                direct.push([a, b]);
            }
        }
    }
    if tag == FamilyTag::CleanLadder {
        if !rest.is_empty() || direct.first() != Some(&[p[0], q[0]]) || direct.len() < m.max(1) {
            return None;
        }
        for &[a, b] in &direct {
            for &[c, d] in &direct {
                let (pa, pb, pc, pd) = (on_p(a)?, on_q(b)?, on_p(c)?, on_q(d)?);
                if pa < pc && pd < pb && (pc - pa != 1 || pb - pd != 1) {
                    return None;
                }
            }
        }
        let order = direct.len();
        return Some(raw_certificate(
            tag,
            order,
            Witness::CleanLadder { rail_w: VertexPath(p.to_vec()), rail_x: VertexPath(q.to_vec()), rungs: direct },
            &s.set,
        ));
    }
    let mut ties: Vec<TieWitness> = Vec::new();
    if tag == FamilyTag::LadderI {
        ties.extend(direct.iter().map(|&[a, b]| TieWitness { p_feet: vec![a], q_feet: vec![b], path: vec![] }));
    } else if !direct.is_empty() {
        return None;
    }
    let mut tie_edges = direct.len();
    for comp in s.components_of(&rest) {
        let mut path = s.as_path(&comp)?;
        let feet_of = |v: Vertex, rail: &dyn Fn(Vertex) -> Option<usize>| -> Vec<Vertex> {
            let mut f: Vec<Vertex> = s.nbrs(v).filter(|&w| rail(w).is_some()).collect();
            f.sort_by_key(|&w| rail(w));
            f
        };
        if feet_of(path[0], &on_p).is_empty() {
            path.reverse();
        }
        let (first, last) = (path[0], path[path.len() - 1]);
        let pf = feet_of(first, &on_p);
        let qf = feet_of(last, &on_q);
        let interior_clean = path.iter().all(|&v| {
            let touches_p = s.nbrs(v).any(|w| on_p(w).is_some());
            let touches_q = s.nbrs(v).any(|w| on_q(w).is_some());
            (!touches_p || v == first) && (!touches_q || v == last)
        });
        let consecutive = |f: &[Vertex], rail: &dyn Fn(Vertex) -> Option<usize>| {
            f.len() == 2 && rail(f[1]).unwrap() == rail(f[0]).unwrap() + 1
        };
        let shape_ok = match tag {
            FamilyTag::LadderI => pf.len() == 1 && qf.len() == 1,
            FamilyTag::LadderDelta => {
                (consecutive(&pf, &on_p) && qf.len() == 1) || (pf.len() == 1 && consecutive(&qf, &on_q))
            }
            _ => consecutive(&pf, &on_p) && consecutive(&qf, &on_q),
        };
        if !interior_clean || !shape_ok {
            return None;
        }
        tie_edges += path.len() - 1 + pf.len() + qf.len();
        ties.push(TieWitness { p_feet: pf, q_feet: qf, path });
    }
    if tag == FamilyTag::LadderDelta {
        let widths: BTreeSet<usize> = ties.iter().map(|t| t.p_feet.len()).collect();
        if widths.len() != 1 {
            return None;
        }
    }
    let mut feet = BTreeSet::new();
    for t in &ties {
        for &f in t.p_feet.iter().chain(&t.q_feet) {
            if !feet.insert(f) {
                return None;
            }
        }
    }
    let first = ties.iter().position(|t| t.p_feet.contains(&p[0]) && t.q_feet.contains(&q[0]))?;
    ties.swap(0, first);
    if ties.len() < m.max(1) || s.edge_count() != p.len() - 1 + q.len() - 1 + tie_edges {
        return None;
    }
    let order = ties.len();
    Some(raw_certificate(
        tag,
        order,
        Witness::Ladder { rail_p: VertexPath(p.to_vec()), rail_q: VertexPath(q.to_vec()), ties },
        &s.set,
    ))
}

fn match_subset(s: &Sub, q: &OracleQuery) -> Option<Certificate> {
    let m = q.min_order;
    match q.family {
        OracleFamily::InducedCycleAtLeast(r) => match_cycle(s, r),
        OracleFamily::Family(tag) => match tag {
            FamilyTag::Clique => match_clique(s, m),
            FamilyTag::Theta => match_theta(s, m),
            FamilyTag::Lambda => match_lambda(s, m),
            FamilyTag::Fan => match_fan(s, m),
            FamilyTag::DeltaFan => match_delta_fan(s, m),
            t => match_ladder(s, t, m),
        },
    }
}

/// Visits `k`-subsets of `0..n` in lexicographic order until `f` returns `Some`.
fn first_subset<T>(n: usize, k: usize, mut f: impl FnMut(&[Vertex]) -> Option<T>) -> Option<T> {
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if let Some(t) = f(&idx) {
            return Some(t);
        }
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Smallest witness of the queried family, searching subsets by size and then lexicographically.
pub fn brute_force_find(g: &Graph, q: &OracleQuery) -> Result<Option<Certificate>, OracleError> {
    if g.n() > q.limit {
        return Err(OracleError::TooLarge { n: g.n(), limit: q.limit });
    }
    for size in q.min_size()..=g.n() {
        let found = first_subset(g.n(), size, |set| match_subset(&Sub::new(g, set), q));
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// First witness among `K_r`, `Θ_r`, `Λ_r`, in that order.
pub fn find_small_theorem_witness(g: &Graph, r: usize) -> Result<Option<Certificate>, OracleError> {
    for tag in [FamilyTag::Clique, FamilyTag::Theta, FamilyTag::Lambda] {
        if let Some(c) = brute_force_find(g, &OracleQuery::family(tag, r))? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Longest induced cycle, by exhaustive search.
pub fn longest_induced_cycle(g: &Graph) -> Result<Option<Vec<Vertex>>, OracleError> {
    if g.n() > MAX_LIMIT {
        return Err(OracleError::TooLarge { n: g.n(), limit: MAX_LIMIT });
    }
    for size in (3..=g.n()).rev() {
        if let Some(c) = first_subset(g.n(), size, |set| match_cycle(&Sub::new(g, set), size)) {
            let Witness::Lambda { blocks, .. } = &c.witness else { unreachable!() };
            let mut cyc = vec![blocks[0][1], blocks[0][0]];
            cyc.extend(blocks.iter().map(|b| b[2]));
            return Ok(Some(cyc));
        }
    }
    Ok(None)
}

/// Random 2-connected graph grown by ears from a random cycle.
pub fn random_two_connected(n: usize, seed: u64, extra_ear_count: usize) -> Graph {
    let n = n.max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = rng.gen_range(3..=n);
    let mut edges: BTreeSet<(Vertex, Vertex)> = (0..base).map(|i| (i.min((i + 1) % base), i.max((i + 1) % base))).collect();
    let mut count = base;
    let has = |e: &BTreeSet<(Vertex, Vertex)>, a: Vertex, b: Vertex| e.contains(&(a.min(b), a.max(b)));
    while count < n {
        let internal = rng.gen_range(1..=(n - count).min(4));
        let a = rng.gen_range(0..count);
        let mut b = rng.gen_range(0..count - 1);
        if b >= a {
            b += 1;
        }
        let mut prev = a;
        for _ in 0..internal {
            edges.insert((prev.min(count), prev.max(count)));
            prev = count;
            count += 1;
        }
        edges.insert((prev.min(b), prev.max(b)));
    }
    let mut placed = 0;
    let mut attempts = 0;
    while placed < extra_ear_count && attempts < 50 * (extra_ear_count + 1) {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b && !has(&edges, a, b) {
            edges.insert((a.min(b), a.max(b)));
            placed += 1;
        }
    }
    let list: Vec<_> = edges.into_iter().collect();
    Graph::from_edge_list(n, &list).expect("ear construction keeps ids in range")
}

/// Random member of `tag` with the given order; subdivision counts, block
/// kinds and gaps are drawn from `seed`.
pub fn random_family_member(tag: FamilyTag, order: usize, seed: u64) -> Result<(Graph, Certificate), FamilyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = |rng: &mut ChaCha8Rng, n: usize, lo: usize, hi: usize| -> Vec<usize> { (0..n).map(|_| rng.gen_range(lo..=hi)).collect() };
    match tag {
        FamilyTag::Clique => make_clique(order),
        FamilyTag::Theta => {
            let mut lengths = small(&mut rng, order, 2, 4);
            if rng.gen_bool(0.3) {
                lengths[0] = 1;
            }
            make_theta(&lengths)
        }
        FamilyTag::Lambda => {
            let kinds: Vec<BlockKind> =
                (0..order).map(|_| if rng.gen_bool(0.3) { BlockKind::K4 } else { BlockKind::K3 }).collect();
            let deleted: Vec<bool> = (1..order).map(|_| rng.gen_bool(0.5)).collect();
            make_lambda(&kinds, &deleted)
        }
        FamilyTag::Fan => {
            let spokes = small(&mut rng, order, 0, 2);
            let gaps = small(&mut rng, order.saturating_sub(1), 0, 2);
            make_fan(&spokes, &gaps)
        }
        FamilyTag::DeltaFan => {
            let spokes = small(&mut rng, order, 0, 2);
            let gaps = small(&mut rng, order.saturating_sub(1), 0, 2);
            make_delta_fan(order, &spokes, &gaps)
        }
        FamilyTag::LadderI | FamilyTag::LadderDelta | FamilyTag::LadderNablaDelta => {
            let spacing = small(&mut rng, order.saturating_sub(1), 1, 3);
            let lengths = small(&mut rng, order, 1, 3);
            make_ladder_family(tag, order, &spacing, &lengths)
        }
        FamilyTag::CleanLadder => {
            let mut spec = vec![RungSpec::Plain { gap_w: 1, gap_x: 1 }];
            let mut rungs = 1;
            while rungs < order {
                if rungs + 2 <= order && rng.gen_bool(0.3) {
                    spec.push(RungSpec::DegenerateCross);
                    rungs += 2;
                } else {
                    spec.push(RungSpec::Plain { gap_w: rng.gen_range(1..=3), gap_x: rng.gen_range(1..=3) });
                    rungs += 1;
                }
            }
            make_clean_ladder(&spec)
        }
    }
}

/// Random messy ladder: rails `0..len` and `len..2len`, initial rung forced.
pub fn random_messy_ladder(n_per_rail: usize, rung_density: f64, seed: u64) -> Ladder {
    let len = n_per_rail.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rungs = vec![(0, 0)];
    for i in 0..len {
        for j in 0..len {
            if (i, j) != (0, 0) && rng.gen_bool(rung_density.clamp(0.0, 1.0)) {
                rungs.push((i, j));
            }
        }
    }
    Ladder::from_positions(len, len, &rungs).expect("random ladder is valid by construction")
}

/// Sparse random messy ladder with about `rungs_per_vertex * len` rungs, each
/// joining positions at most `window` apart.
pub fn random_local_ladder(len: usize, rungs_per_vertex: f64, window: usize, seed: u64) -> Ladder {
    let len = len.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = ((len as f64) * rungs_per_vertex).round() as usize;
    let mut rungs = BTreeSet::from([(0usize, 0usize)]);
    for _ in 0..target {
        let i = rng.gen_range(0..len);
        let lo = i.saturating_sub(window);
        let hi = (i + window).min(len - 1);
        rungs.insert((i, rng.gen_range(lo..=hi)));
    }
    let list: Vec<_> = rungs.into_iter().collect();
    Ladder::from_positions(len, len, &list).expect("random ladder is valid by construction")
}

/// Canonical adjacency bitmask for graphs on at most 8 vertices.
pub fn canonical_form(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= 8, "canonical_form supports at most 8 vertices");
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    let edges = g.edges();
    loop {
        let mut code = 0u64;
        for &(u, v) in &edges {
            let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
            code |= 1 << (b * (b - 1) / 2 + a);
        }
        best = best.min(code);
        if !next_permutation(&mut perm) {
            return best;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every 2-connected graph on `n` vertices up to isomorphism (`n ≤ 6`).
pub fn all_two_connected(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "exhaustive enumeration is limited to 6 vertices");
    let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        if edges.len() < n {
            continue;
        }
        let g = Graph::from_edge_list(n, &edges).unwrap();
        if g.is_two_connected() && seen.insert(canonical_form(&g)) {
            out.push(g);
        }
    }
    out
}

/// Distinct-up-to-isomorphism random 2-connected graphs on `n ≤ 8` vertices,
/// sampled at several edge densities.
pub fn sample_two_connected(n: usize, samples: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vertex, Vertex)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..samples {
        let density: f64 = rng.gen_range(0.25..0.9);
        let mut edges: Vec<_> = pairs.iter().copied().filter(|_| rng.gen_bool(density)).collect();
        edges.shuffle(&mut rng);
        let g = Graph::from_edge_list(n, &edges).unwrap();
        if g.is_two_connected() && seen.insert(canonical_form(&g)) {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{self, verify_certificate, BlockKind};
    use crate::graph::named;

    #[test]
    fn oracle_examples() {
        let theta = OracleQuery::family(FamilyTag::Theta, 3);
        assert_eq!(brute_force_find(&named::cycle(5), &theta).unwrap(), None);
        let k23 = named::complete_bipartite(2, 3);
        let c = brute_force_find(&k23, &theta).unwrap().unwrap();
        assert_eq!(c.vertices.len(), 5);
        assert!(verify_certificate(&k23, &c));
        let pet = named::petersen();
        let c = brute_force_find(&pet, &OracleQuery::cycle_at_least(5)).unwrap().unwrap();
        assert_eq!(c.vertices.len(), 5);
        assert!(verify_certificate(&pet, &c));
        assert!(matches!(
            brute_force_find(&named::cycle(15), &theta),
            Err(OracleError::TooLarge { .. })
        ));
        assert!(OracleQuery::new(OracleFamily::InducedCycleAtLeast(3), 3, 15).is_err());
    }

    #[test]
    fn oracle_recognises_generated_members() {
        let cases = vec![
            families::make_theta(&[1, 2, 3]).unwrap(),
            families::make_lambda(&[BlockKind::K3, BlockKind::K4, BlockKind::K3], &[false, true]).unwrap(),
            families::make_fan(&[1, 0, 0, 1], &[0, 1, 0]).unwrap(),
            families::make_delta_fan(2, &[1, 0], &[1]).unwrap(),
            families::make_ladder_family(FamilyTag::LadderI, 3, &[1, 2], &[1, 2, 1]).unwrap(),
            families::make_ladder_family(FamilyTag::LadderDelta, 2, &[1], &[1, 1]).unwrap(),
            families::make_ladder_family(FamilyTag::LadderNablaDelta, 2, &[1], &[1, 1]).unwrap(),
            families::make_clean_ladder(&[
                families::RungSpec::Plain { gap_w: 1, gap_x: 1 },
                families::RungSpec::DegenerateCross,
            ])
            .unwrap(),
        ];
        for (g, cert) in cases {
            let q = OracleQuery::family(cert.tag, cert.order);
            let found = brute_force_find(&g, &q).unwrap().unwrap_or_else(|| panic!("{} not found", cert.tag));
            assert!(found.order >= cert.order);
            assert!(verify_certificate(&g, &found), "{}: {:?}", cert.tag, families::check_certificate(&g, &found));
        }
    }

    #[test]
    fn c5_has_no_small_theorem_witness_of_order_three_except_lambda() {
        let c5 = named::cycle(5);
        assert_eq!(brute_force_find(&c5, &OracleQuery::family(FamilyTag::Clique, 3)).unwrap(), None);
        let lam = brute_force_find(&c5, &OracleQuery::family(FamilyTag::Lambda, 3)).unwrap().unwrap();
        assert!(verify_certificate(&c5, &lam));
    }

    #[test]
    fn random_two_connected_is_two_connected() {
        for seed in 0..200 {
            for (n, extra) in [(3, 0), (10, 0), (30, 8)] {
                assert!(random_two_connected(n, seed, extra).is_two_connected());
            }
        }
        assert_eq!(random_two_connected(3, 7, 0), named::cycle(3));
    }

    #[test]
    fn enumeration_counts_match_known_values() {
        // Unlabelled 2-connected graphs on 3, 4, 5 vertices: 1, 3, 10.
        assert_eq!(all_two_connected(3).len(), 1);
        assert_eq!(all_two_connected(4).len(), 3);
        assert_eq!(all_two_connected(5).len(), 10);
    }
}
