//! Metric multigraphs, lead attachment and vertex scattering amplitudes.
//!
//! Vertex ids are 1-based throughout. Edges are stored as an ordered list so
//! that parallel edges between the same pair of vertices stay distinct.

use num_complex::Complex64;
use thiserror::Error;

/// Vertex identifier, 1-based.
pub type VertexId = usize;

/// Deviation from local unitarity above which a custom vertex is flagged.
pub const CUSTOM_UNITARITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("edge {edge} has endpoint {vertex} outside 1..={vertex_count}")]
    BadEndpoint {
        edge: usize,
        vertex: VertexId,
        vertex_count: usize,
    },
    #[error("edge {edge} has non-positive length {length}")]
    NonPositiveLength { edge: usize, length: f64 },
    #[error("edge {edge} is a self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: VertexId },
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} carries more than one lead")]
    DuplicateLead(VertexId),
    #[error("an open graph needs at least one lead")]
    NoLeads,
    #[error("entrance index {entrance} out of range for {leads} leads")]
    BadEntrance { entrance: usize, leads: usize },
    #[error("graph must have at least one vertex")]
    Empty,
}

/// Boundary condition imposed at a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    Neumann,
    Dirichlet,
    /// Fixed reflection/transmission amplitudes, taken as given.
    Custom { r: Complex64, t: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: VertexId,
    pub b: VertexId,
    pub length: f64,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId, length: f64) -> Self {
        Self { a, b, length }
    }

    /// The endpoint opposite to `v`, if `v` is an endpoint.
    pub fn other(&self, v: VertexId) -> Option<VertexId> {
        if v == self.a {
            Some(self.b)
        } else if v == self.b {
            Some(self.a)
        } else {
            None
        }
    }
}

/// A metric multigraph with per-vertex boundary conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    boundary: Vec<BoundaryCondition>,
}

impl MetricGraph {
    /// Builds a graph with Neumann conditions everywhere and validates it.
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let g = Self {
            vertex_count,
            edges,
            boundary: vec![BoundaryCondition::Neumann; vertex_count],
        };
        validate_graph(&g)?;
        Ok(g)
    }

    /// Convenience constructor from `(a, b, length)` triples.
    pub fn from_triples(
        vertex_count: usize,
        triples: &[(VertexId, VertexId, f64)],
    ) -> Result<Self, GraphError> {
        let edges = triples
            .iter()
            .map(|&(a, b, l)| Edge::new(a, b, l))
            .collect();
        Self::new(vertex_count, edges)
    }

    /// Builds a graph without validation. Use [`validate_graph`] to check it.
    pub fn new_unchecked(vertex_count: usize, edges: Vec<Edge>) -> Self {
        Self {
            vertex_count,
            edges,
            boundary: vec![BoundaryCondition::Neumann; vertex_count],
        }
    }

    pub fn with_boundary(
        mut self,
        vertex: VertexId,
        bc: BoundaryCondition,
    ) -> Result<Self, GraphError> {
        self.check_vertex(vertex)?;
        self.boundary[vertex - 1] = bc;
        Ok(self)
    }

    pub fn set_boundary(
        &mut self,
        vertex: VertexId,
        bc: BoundaryCondition,
    ) -> Result<(), GraphError> {
        self.check_vertex(vertex)?;
        self.boundary[vertex - 1] = bc;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn boundary(&self, vertex: VertexId) -> Result<BoundaryCondition, GraphError> {
        self.check_vertex(vertex)?;
        Ok(self.boundary[vertex - 1])
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        1..=self.vertex_count
    }

    /// Number of edge endpoints at `vertex` (parallel edges counted separately).
    pub fn edge_degree(&self, vertex: VertexId) -> Result<usize, GraphError> {
        self.check_vertex(vertex)?;
        Ok(self
            .edges
            .iter()
            .map(|e| usize::from(e.a == vertex) + usize::from(e.b == vertex))
            .sum())
    }

    /// 0/1 adjacency matrix, row-major, `v × v`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.vertex_count;
        let mut adj = vec![vec![0u8; n]; n];
        for e in &self.edges {
            if (1..=n).contains(&e.a) && (1..=n).contains(&e.b) {
                adj[e.a - 1][e.b - 1] = 1;
                adj[e.b - 1][e.a - 1] = 1;
            }
        }
        adj
    }

    /// Edge lengths, in edge order.
    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.edges.iter().map(|e| e.length)
    }

    fn check_vertex(&self, vertex: VertexId) -> Result<(), GraphError> {
        if vertex == 0 || vertex > self.vertex_count {
            Err(GraphError::UnknownVertex(vertex))
        } else {
            Ok(())
        }
    }
}

/// Checks every structural invariant, reporting the first violation in edge order.
pub fn validate_graph(g: &MetricGraph) -> Result<(), GraphError> {
    if g.vertex_count == 0 {
        return Err(GraphError::Empty);
    }
    for (idx, e) in g.edges.iter().enumerate() {
        for v in [e.a, e.b] {
            if v == 0 || v > g.vertex_count {
                return Err(GraphError::BadEndpoint {
                    edge: idx,
                    vertex: v,
                    vertex_count: g.vertex_count,
                });
            }
        }
        if !(e.length > 0.0) || !e.length.is_finite() {
            return Err(GraphError::NonPositiveLength {
                edge: idx,
                length: e.length,
            });
        }
        if e.a == e.b {
            return Err(GraphError::SelfLoop {
                edge: idx,
                vertex: e.a,
            });
        }
    }
    Ok(())
}

/// Reflection and transmission amplitudes of a single vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexAmplitudes {
    pub r: Complex64,
    pub t: Complex64,
}

impl VertexAmplitudes {
    pub fn new(r: Complex64, t: Complex64) -> Self {
        Self { r, t }
    }

    pub fn real(r: f64, t: f64) -> Self {
        Self::new(Complex64::new(r, 0.0), Complex64::new(t, 0.0))
    }

    /// Amplitudes of a Neumann vertex of effective degree `d`.
    ///
    /// Degree one is a dead end with `r = 1`; degree zero carries no waves and
    /// is given the same values so that callers never divide by zero.
    pub fn neumann(d: usize) -> Self {
        if d >= 2 {
            let d = d as f64;
            Self::real(2.0 / d - 1.0, 2.0 / d)
        } else {
            Self::real(1.0, 0.0)
        }
    }

    pub fn dirichlet() -> Self {
        Self::real(-1.0, 0.0)
    }

    /// `|r|² + (d−1)|t|² − 1`, zero for a flux-conserving symmetric vertex.
    pub fn unitarity_defect(&self, d: usize) -> f64 {
        if d == 0 {
            return 0.0;
        }
        self.r.norm_sqr() + (d as f64 - 1.0) * self.t.norm_sqr() - 1.0
    }
}

/// A metric graph opened to scattering by semi-infinite leads.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenGraph {
    base: MetricGraph,
    leads: Vec<VertexId>,
    entrance: usize,
    degrees: Vec<usize>,
    lead_index: Vec<Option<usize>>,
}

impl OpenGraph {
    /// Attaches one lead to each vertex in `leads`; `entrance` indexes into `leads`.
    pub fn new(
        base: MetricGraph,
        leads: Vec<VertexId>,
        entrance: usize,
    ) -> Result<Self, GraphError> {
        validate_graph(&base)?;
        if leads.is_empty() {
            return Err(GraphError::NoLeads);
        }
        let n = base.vertex_count();
        let mut lead_index = vec![None; n];
        for (idx, &v) in leads.iter().enumerate() {
            if v == 0 || v > n {
                return Err(GraphError::UnknownVertex(v));
            }
            if lead_index[v - 1].is_some() {
                return Err(GraphError::DuplicateLead(v));
            }
            lead_index[v - 1] = Some(idx);
        }
        if entrance >= leads.len() {
            return Err(GraphError::BadEntrance {
                entrance,
                leads: leads.len(),
            });
        }
        let mut degrees = vec![0usize; n];
        for e in base.edges() {
            degrees[e.a - 1] += 1;
            degrees[e.b - 1] += 1;
        }
        for &v in &leads {
            degrees[v - 1] += 1;
        }
        Ok(Self {
            base,
            leads,
            entrance,
            degrees,
            lead_index,
        })
    }

    /// Same graph, different entrance channel.
    pub fn with_entrance(&self, entrance: usize) -> Result<Self, GraphError> {
        if entrance >= self.leads.len() {
            return Err(GraphError::BadEntrance {
                entrance,
                leads: self.leads.len(),
            });
        }
        let mut g = self.clone();
        g.entrance = entrance;
        Ok(g)
    }

    pub fn base(&self) -> &MetricGraph {
        &self.base
    }

    pub fn leads(&self) -> &[VertexId] {
        &self.leads
    }

    pub fn channel_count(&self) -> usize {
        self.leads.len()
    }

    pub fn entrance(&self) -> usize {
        self.entrance
    }

    pub fn entrance_vertex(&self) -> VertexId {
        self.leads[self.entrance]
    }

    /// Channel index of the lead at `vertex`, if it has one.
    pub fn lead_of(&self, vertex: VertexId) -> Option<usize> {
        if vertex == 0 || vertex > self.lead_index.len() {
            return None;
        }
        self.lead_index[vertex - 1]
    }

    pub fn has_lead(&self, vertex: VertexId) -> bool {
        self.lead_of(vertex).is_some()
    }

    /// Edge incidences plus one if the vertex carries a lead.
    pub fn effective_degree(&self, vertex: VertexId) -> Result<usize, GraphError> {
        if vertex == 0 || vertex > self.degrees.len() {
            return Err(GraphError::UnknownVertex(vertex));
        }
        Ok(self.degrees[vertex - 1])
    }

    pub fn vertex_amplitudes(&self, vertex: VertexId) -> Result<VertexAmplitudes, GraphError> {
        let d = self.effective_degree(vertex)?;
        Ok(match self.base.boundary(vertex)? {
            BoundaryCondition::Neumann => VertexAmplitudes::neumann(d),
            BoundaryCondition::Dirichlet => VertexAmplitudes::dirichlet(),
            BoundaryCondition::Custom { r, t } => VertexAmplitudes::new(r, t),
        })
    }

    /// Amplitudes of every vertex, indexed by `vertex − 1`.
    pub fn all_vertex_amplitudes(&self) -> Vec<VertexAmplitudes> {
        self.base
            .vertices()
            .map(|v| self.vertex_amplitudes(v).expect("vertex in range"))
            .collect()
    }

    /// Custom vertices whose amplitudes do not conserve flux, with their defect.
    pub fn unitarity_warnings(&self) -> Vec<(VertexId, f64)> {
        self.base
            .vertices()
            .filter_map(|v| match self.base.boundary[v - 1] {
                BoundaryCondition::Custom { r, t } => {
                    let defect = VertexAmplitudes::new(r, t).unitarity_defect(self.degrees[v - 1]);
                    (defect.abs() > CUSTOM_UNITARITY_TOL).then_some((v, defect))
                }
                _ => None,
            })
            .collect()
    }
}
