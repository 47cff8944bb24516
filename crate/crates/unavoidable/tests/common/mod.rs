//! Instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unavoidable::bridges_ties::{RailPair, TieType};
use unavoidable::graph::{Graph, Vertex};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn graph_from(n: usize, edges: &[(Vertex, Vertex)]) -> Graph {
    let set: BTreeSet<(Vertex, Vertex)> = edges.iter().filter(|(a, b)| a != b).map(|&(a, b)| (a.min(b), a.max(b))).collect();
    Graph::from_edge_list(n, &set.into_iter().collect::<Vec<_>>()).expect("edges in range")
}

/// The host with the pair `{u, v}` toggled.
pub fn toggle_edge(g: &Graph, u: Vertex, v: Vertex) -> Graph {
    let mut e: BTreeSet<(Vertex, Vertex)> = g.edges().into_iter().collect();
    let key = (u.min(v), u.max(v));
    if !e.remove(&key) {
        e.insert(key);
    }
    Graph::from_edge_list(g.n(), &e.into_iter().collect::<Vec<_>>()).expect("same vertex set")
}

fn rail_edges(len: usize) -> Vec<(Vertex, Vertex)> {
    (0..len - 1).map(|i| (i, i + 1)).chain((len..2 * len - 1).map(|i| (i, i + 1))).collect()
}

fn rails(g: &Graph, len: usize) -> RailPair {
    RailPair::new(g, (0..len).collect(), (len..2 * len).collect()).expect("rails are induced and disjoint")
}

/// Two rails of equal length with several random ties; ties may cross, overlap
/// and carry extra edges back to the rails.
pub fn random_rails(seed: u64) -> (Graph, RailPair) {
    let mut rng = rng(seed);
    let len = rng.gen_range(6..40);
    let mut e = rail_edges(len);
    let mut n = 2 * len;
    for _ in 0..rng.gen_range(1..12) {
        let a = rng.gen_range(0..len);
        let b = len + rng.gen_range(0..len);
        let inner = rng.gen_range(0..4);
        let mut prev = a;
        let start = n;
        for _ in 0..inner {
            e.push((prev, n));
            prev = n;
            n += 1;
        }
        e.push((prev, b));
        if inner > 0 {
            for _ in 0..rng.gen_range(0..3) {
                let x = rng.gen_range(start..n);
                let y = if rng.gen_bool(0.5) { rng.gen_range(0..len) } else { len + rng.gen_range(0..len) };
                e.push((x, y));
            }
        }
    }
    let g = graph_from(n, &e);
    let r = rails(&g, len);
    (g, r)
}

/// Attachment positions inside `lo..lo + width`, sorted; `wide` forces a span of at least two edges.
fn attachments(rng: &mut ChaCha8Rng, lo: usize, width: usize, count: usize, wide: bool) -> Vec<usize> {
    loop {
        let mut pos: Vec<usize> = (lo..lo + width).collect();
        pos.shuffle(rng);
        pos.truncate(count);
        pos.sort_unstable();
        if !wide || pos.last().unwrap() - pos[0] >= 2 {
            return pos;
        }
    }
}

/// Rails with one tie: a random connected blob of interior vertices, each
/// attachment joined to one or two blob vertices, and no rung edges.
pub fn blob_tie(seed: u64) -> (Graph, RailPair) {
    let mut rng = rng(seed);
    let len = rng.gen_range(8..16);
    let mut e = rail_edges(len);
    let m = rng.gen_range(2..9);
    let blob: Vec<Vertex> = (2 * len..2 * len + m).collect();
    for i in 1..m {
        e.push((blob[rng.gen_range(0..i)], blob[i]));
    }
    for _ in 0..rng.gen_range(0..m) {
        let (a, b) = (blob[rng.gen_range(0..m)], blob[rng.gen_range(0..m)]);
        e.push((a, b));
    }
    let width = 5;
    for offset in [0, len] {
        let lo = rng.gen_range(0..len - width);
        let count = rng.gen_range(1..=4);
        for p in attachments(&mut rng, lo, width, count, false) {
            for _ in 0..rng.gen_range(1..=2) {
                e.push((offset + p, blob[rng.gen_range(0..m)]));
            }
        }
    }
    let g = graph_from(2 * len + m, &e);
    let r = rails(&g, len);
    (g, r)
}

/// Rails with pairwise independent, non-crossing ties of the given types, in rail order.
pub fn rerouting_config(seed: u64) -> (Graph, RailPair, Vec<TieType>) {
    let mut rng = rng(seed);
    let count = rng.gen_range(1..=5);
    let width = 6;
    let len = count * (width + 2) + 2;
    let mut e = rail_edges(len);
    let mut n = 2 * len;
    let mut types = Vec::new();
    let fresh = |n: &mut usize| {
        *n += 1;
        *n - 1
    };
    for t in 0..count {
        let lo = 1 + t * (width + 2);
        let kind = [TieType::Fork, TieType::Rake, TieType::ForkRake][rng.gen_range(0..3)];
        types.push(kind);
        let fan_p = kind != TieType::Rake;
        let fan_q = kind != TieType::Fork;
        let (pc, qc) = (rng.gen_range(2..=4), rng.gen_range(2..=4));
        let p_att = if fan_p { attachments(&mut rng, lo, width, pc, true) } else { vec![lo + rng.gen_range(0..width)] };
        let q_att: Vec<usize> = if fan_q {
            attachments(&mut rng, lo, width, qc, true).into_iter().map(|p| p + len).collect()
        } else {
            vec![len + lo + rng.gen_range(0..width)]
        };
        let u = if fan_p { Some(fresh(&mut n)) } else { None };
        let v = if fan_q {
            if fan_p && rng.gen_bool(0.3) {
                u
            } else {
                Some(fresh(&mut n))
            }
        } else {
            None
        };
        if let Some(u) = u {
            e.extend(p_att.iter().map(|&p| (p, u)));
        }
        if let Some(v) = v {
            e.extend(q_att.iter().map(|&q| (q, v)));
        }
        let start = u.unwrap_or(p_att[0]);
        let end = v.unwrap_or(q_att[0]);
        if start != end {
            let mut prev = start;
            for _ in 0..rng.gen_range(0..3) {
                let x = fresh(&mut n);
                e.push((prev, x));
                prev = x;
            }
            e.push((prev, end));
        }
    }
    let g = graph_from(n, &e);
    let r = rails(&g, len);
    (g, r, types)
}

/// An induced path `0..len` with arcs over interleaving spans
/// `u_1 < u_2 < v_1 ≤ u_3 < v_2 ≤ u_4 < …`; each arc has at least one interior vertex.
pub fn arc_chain(seed: u64, arcs: usize) -> (Graph, Vec<Vertex>, Vec<(usize, usize)>) {
    let mut rng = rng(seed);
    let mut spans: Vec<(usize, usize)> = Vec::new();
    for i in 0..arcs {
        let (u, v) = match i {
            0 => (0, rng.gen_range(2..5)),
            _ => {
                let prev = spans[i - 1];
                let floor = if i >= 2 { spans[i - 2].1 } else { prev.0 + 1 };
                let u = rng.gen_range(floor..prev.1);
                (u, prev.1 + rng.gen_range(1..4))
            }
        };
        spans.push((u, v));
    }
    let len = spans.last().unwrap().1 + 1 + rng.gen_range(0..3);
    let mut e: Vec<(Vertex, Vertex)> = (0..len - 1).map(|i| (i, i + 1)).collect();
    let mut n = len;
    for &(u, v) in &spans {
        let mut prev = u;
        for _ in 0..rng.gen_range(1..4) {
            e.push((prev, n));
            prev = n;
            n += 1;
        }
        e.push((prev, v));
    }
    (graph_from(n, &e), (0..len).collect(), spans)
}

/// 2-connected chordal graph: a triangle grown by vertices joined to both ends of an existing edge.
pub fn random_two_tree(n: usize, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let mut e = vec![(0, 1), (1, 2), (0, 2)];
    for v in 3..n.max(3) {
        let (a, b) = e[rng.gen_range(0..e.len())];
        e.push((a, v));
        e.push((b, v));
    }
    graph_from(n.max(3), &e)
}

/// Apex over a rim path whose consecutive spoke feet are at most `max_gap` apart.
/// Its longest induced cycle has `max_gap + 2` vertices.
pub fn gapped_fan(rim: usize, max_gap: usize, seed: u64) -> Graph {
    let mut rng = rng(seed);
    let apex = rim;
    let mut e: Vec<(Vertex, Vertex)> = (0..rim - 1).map(|i| (i, i + 1)).collect();
    let mut foot = 0;
    e.push((0, apex));
    while foot < rim - 1 {
        foot = (foot + rng.gen_range(1..=max_gap)).min(rim - 1);
        e.push((foot, apex));
    }
    graph_from(rim + 1, &e)
}
