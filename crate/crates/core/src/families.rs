//! Builders for the graph families used throughout: paths, cycles, wheels,
//! complete graphs and series/parallel bundles of two-edge blocks.
//!
//! Every builder returns an [`OpenGraph`] with Neumann vertices unless noted.

use crate::graph::{BoundaryCondition, GraphError, MetricGraph, OpenGraph, VertexAmplitudes};

/// `P_n` with leads on both ends; entrance at vertex 1.
pub fn path(n: usize, length: f64) -> Result<OpenGraph, GraphError> {
    let edges: Vec<_> = (1..n).map(|i| (i, i + 1, length)).collect();
    let g = MetricGraph::from_triples(n, &edges)?;
    let leads = if n == 1 { vec![1] } else { vec![1, n] };
    OpenGraph::new(g, leads, 0)
}

/// `C_n` with one lead per vertex; entrance at vertex 1, whose neighbours are 2 and `n`.
pub fn cycle(n: usize, length: f64) -> Result<OpenGraph, GraphError> {
    let edges: Vec<_> = (1..=n).map(|i| (i, i % n + 1, length)).collect();
    let g = MetricGraph::from_triples(n, &edges)?;
    OpenGraph::new(g, (1..=n).collect(), 0)
}

/// `W_n`: hub 1 joined to rim vertices `2..=n`, which form a cycle. One lead
/// per vertex; entrance at the hub.
pub fn wheel(n: usize, length: f64) -> Result<OpenGraph, GraphError> {
    let mut edges: Vec<_> = (2..=n).map(|j| (1, j, length)).collect();
    edges.extend((2..=n).map(|j| (j, if j < n { j + 1 } else { 2 }, length)));
    let g = MetricGraph::from_triples(n, &edges)?;
    OpenGraph::new(g, (1..=n).collect(), 0)
}

/// `K_n` with one lead per vertex; entrance at vertex 1.
pub fn complete(n: usize, length: f64) -> Result<OpenGraph, GraphError> {
    let mut edges = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            edges.push((a, b, length));
        }
    }
    let g = MetricGraph::from_triples(n, &edges)?;
    OpenGraph::new(g, (1..=n).collect(), 0)
}

/// Two vertices joined by two edges, a lead on each vertex.
pub fn two_edge(l1: f64, l2: f64) -> Result<OpenGraph, GraphError> {
    let g = MetricGraph::from_triples(2, &[(1, 2, l1), (1, 2, l2)])?;
    OpenGraph::new(g, vec![1, 2], 0)
}

/// `n` two-edge blocks (edge length `block`) chained by links of length
/// `link`. Block `b` occupies vertices `2b+1, 2b+2`; leads on vertices 1 and `2n`.
pub fn series_bundle(n: usize, block: f64, link: f64) -> Result<OpenGraph, GraphError> {
    let mut edges = Vec::new();
    for b in 0..n {
        let a = 2 * b + 1;
        edges.push((a, a + 1, block));
        edges.push((a, a + 1, block));
        if b + 1 < n {
            edges.push((a + 1, a + 2, link));
        }
    }
    let g = MetricGraph::from_triples(2 * n, &edges)?;
    OpenGraph::new(g, vec![1, 2 * n], 0)
}

/// `n` two-edge blocks in parallel between lead vertices 1 and 2; every block
/// hangs on links of length `link`. Block `b` occupies vertices `2b+3, 2b+4`.
pub fn parallel_bundle(n: usize, block: f64, link: f64) -> Result<OpenGraph, GraphError> {
    let mut edges = Vec::new();
    for b in 0..n {
        let a = 2 * b + 3;
        edges.push((1, a, link));
        edges.push((a, a + 1, block));
        edges.push((a, a + 1, block));
        edges.push((a + 1, 2, link));
    }
    let g = MetricGraph::from_triples(2 * n + 2, &edges)?;
    OpenGraph::new(g, vec![1, 2], 0)
}

/// Diamond: lead vertices 1 and 2 with amplitudes `ends`, inner vertices 3
/// and 4 (amplitudes `a`, `b`) at distance `l1`, `l2` from both lead vertices.
pub fn diamond(
    l1: f64,
    l2: f64,
    ends: VertexAmplitudes,
    a: VertexAmplitudes,
    b: VertexAmplitudes,
) -> Result<OpenGraph, GraphError> {
    let custom = |v: VertexAmplitudes| BoundaryCondition::Custom { r: v.r, t: v.t };
    let g = MetricGraph::from_triples(4, &[(1, 3, l1), (3, 2, l1), (1, 4, l2), (4, 2, l2)])?
        .with_boundary(1, custom(ends))?
        .with_boundary(2, custom(ends))?
        .with_boundary(3, custom(a))?
        .with_boundary(4, custom(b))?;
    OpenGraph::new(g, vec![1, 2], 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_match_family_descriptions() {
        let c7 = cycle(7, 1.0).unwrap();
        assert!((1..=7).all(|v| c7.effective_degree(v).unwrap() == 3));
        for n in 4..=7 {
            let w = wheel(n, 1.0).unwrap();
            assert_eq!(w.effective_degree(1).unwrap(), n);
            assert!((2..=n).all(|v| w.effective_degree(v).unwrap() == 4));
        }
        let k5 = complete(5, 1.0).unwrap();
        assert!((1..=5).all(|v| k5.effective_degree(v).unwrap() == 5));
        assert_eq!(k5.base().edge_count(), 10);
    }

    #[test]
    fn bundles() {
        let s = series_bundle(3, 1.0, 1.0).unwrap();
        assert_eq!(s.base().edge_count(), 8);
        assert!((1..=6).all(|v| s.effective_degree(v).unwrap() == 3));
        let p = parallel_bundle(4, 1.0, 1.0).unwrap();
        assert_eq!(p.effective_degree(1).unwrap(), 5);
        assert_eq!(p.effective_degree(3).unwrap(), 3);
        assert_eq!(p.base().edge_count(), 16);
    }

    #[test]
    fn isolated_vertex_degree() {
        let g = MetricGraph::from_triples(3, &[(1, 2, 1.0)]).unwrap();
        let og = OpenGraph::new(g, vec![1], 0).unwrap();
        assert_eq!(og.effective_degree(3).unwrap(), 0);
    }
}
