#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use qgs::{MetricGraph, OpenGraph};

/// Forward propagation of the entrance wave by bounce count: the amplitude
/// on each directed edge is pushed through its head vertex `bounces` times,
/// leaking through the leads on the way. Returns the entrance column.
pub fn path_sum(og: &OpenGraph, k: f64, bounces: usize) -> Vec<Complex64> {
    let g = og.base();
    let amps = og.all_vertex_amplitudes();
    let at = |v: usize| amps[v - 1];
    let mut out = vec![Complex64::new(0.0, 0.0); og.channel_count()];
    let entry = og.entrance_vertex();
    out[og.entrance()] += at(entry).r;

    // (edge, head) -> amplitude arriving at head
    let mut wave: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    for (s, e) in g.edges().iter().enumerate() {
        let z = Complex64::from_polar(1.0, k * e.length);
        for (x, y) in [(e.a, e.b), (e.b, e.a)] {
            if x == entry {
                *wave.entry((s, y)).or_default() += at(entry).t * z;
            }
        }
    }
    for _ in 0..bounces {
        let mut next: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (&(s, j), &a) in &wave {
            let va = at(j);
            if let Some(f) = og.lead_of(j) {
                out[f] += va.t * a;
            }
            for (s2, e) in g.edges().iter().enumerate() {
                let z = Complex64::from_polar(1.0, k * e.length);
                for (x, y) in [(e.a, e.b), (e.b, e.a)] {
                    if x != j {
                        continue;
                    }
                    let c = if s2 == s { va.r } else { va.t };
                    *next.entry((s2, y)).or_default() += c * a * z;
                }
            }
        }
        wave = next;
    }
    out
}

fn canonical(v: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut perm: Vec<usize> = (0..v).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut e: Vec<_> = edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Connected loopless multigraphs with `1..=max_edges` edges, up to
/// isomorphism, as `(vertex_count, 0-based edges)`.
pub fn small_multigraphs(max_edges: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut found = BTreeSet::new();
    for e in 1..=max_edges {
        for v in 2..=e + 1 {
            let pairs: Vec<(usize, usize)> = (0..v)
                .flat_map(|a| (a + 1..v).map(move |b| (a, b)))
                .collect();
            // multisets of e pairs
            let mut idx = vec![0usize; e];
            loop {
                let edges: Vec<_> = idx.iter().map(|&i| pairs[i]).collect();
                if connected(v, &edges) {
                    found.insert((v, canonical(v, &edges)));
                }
                let Some(pos) = (0..e).rev().find(|&p| idx[p] + 1 < pairs.len()) else {
                    break;
                };
                idx[pos] += 1;
                for q in pos + 1..e {
                    idx[q] = idx[pos];
                }
            }
        }
    }
    found.into_iter().collect()
}

/// Unit lengths, Neumann vertices, one lead per vertex.
pub fn open_unit(v: usize, edges: &[(usize, usize)], entrance: usize) -> OpenGraph {
    let triples: Vec<_> = edges.iter().map(|&(a, b)| (a + 1, b + 1, 1.0)).collect();
    let g = MetricGraph::from_triples(v, &triples).unwrap();
    OpenGraph::new(g, (1..=v).collect(), entrance).unwrap()
}

/// Random connected loopless Neumann multigraph with at most `max_v`
/// vertices and `max_e` edges, lengths in `[0.5, 2]`, a random nonempty
/// lead set and entrance.
pub fn random_open_graph(rng: &mut StdRng, max_v: usize, max_e: usize) -> OpenGraph {
    let v = rng.random_range(2..=max_v);
    let e = rng.random_range(v - 1..=max_e);
    let mut triples = Vec::with_capacity(e);
    for b in 2..=v {
        let a = rng.random_range(1..b);
        triples.push((a, b, rng.random_range(0.5..=2.0)));
    }
    while triples.len() < e {
        let a = rng.random_range(1..=v);
        let b = rng.random_range(1..=v);
        if a != b {
            triples.push((a.min(b), a.max(b), rng.random_range(0.5..=2.0)));
        }
    }
    let g = MetricGraph::from_triples(v, &triples).unwrap();
    let mut leads: Vec<usize> = (1..=v).filter(|_| rng.random_bool(0.5)).collect();
    if leads.is_empty() {
        leads.push(rng.random_range(1..=v));
    }
    let entrance = rng.random_range(0..leads.len());
    OpenGraph::new(g, leads, entrance).unwrap()
}

/// Uniform sample from the `l`-simplex.
pub fn simplex(rng: &mut StdRng, l: usize) -> Vec<f64> {
    let x: Vec<f64> = (0..l).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = x.iter().sum();
    x.iter().map(|v| v / s).collect()
}

/// `|V| = 2` scattering at a vertex of degree `d`: `e^{iγ}(cJ − I)` with
/// `c = (1 + e^{iψ})/d` is unitary for every `γ`, `ψ`.
pub fn random_vertex(rng: &mut StdRng, d: usize) -> (Complex64, Complex64) {
    let gamma = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    let c = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
        / d as f64;
    (gamma * (c - 1.0), gamma * c)
}

pub fn max_delta(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
