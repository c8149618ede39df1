//! JSON graph specification files.
//!
//! ```json
//! {"vertices": 3,
//!  "edges": [[1, 2, 1.0], [2, 3, 1.0]],
//!  "boundary": {"default": "neumann", "overrides": {"3": "dirichlet"}},
//!  "leads": [1, 2],
//!  "entrance": 0}
//! ```
//!
//! `entrance` is a 0-based index into `leads`. A boundary value is either
//! `"neumann"`, `"dirichlet"` or `{"custom": {"r": [re, im], "t": [re, im]}}`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{BoundaryCondition, Edge, GraphError, MetricGraph, OpenGraph, VertexId};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed graph spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad boundary override key {0:?}")]
    BadOverrideKey(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: usize,
    pub edges: Vec<(VertexId, VertexId, f64)>,
    #[serde(default)]
    pub boundary: BoundarySpec,
    pub leads: Vec<VertexId>,
    #[serde(default)]
    pub entrance: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    #[serde(default)]
    pub default: BoundaryKind,
    #[serde(default)]
    pub overrides: BTreeMap<String, BoundaryKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    #[default]
    Neumann,
    Dirichlet,
    Custom(CustomAmplitudes),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomAmplitudes {
    pub r: [f64; 2],
    pub t: [f64; 2],
}

impl From<BoundaryKind> for BoundaryCondition {
    fn from(kind: BoundaryKind) -> Self {
        match kind {
            BoundaryKind::Neumann => BoundaryCondition::Neumann,
            BoundaryKind::Dirichlet => BoundaryCondition::Dirichlet,
            BoundaryKind::Custom(c) => BoundaryCondition::Custom {
                r: Complex64::new(c.r[0], c.r[1]),
                t: Complex64::new(c.t[0], c.t[1]),
            },
        }
    }
}

impl GraphSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn to_open_graph(&self) -> Result<OpenGraph, SpecError> {
        let edges = self
            .edges
            .iter()
            .map(|&(a, b, l)| Edge::new(a, b, l))
            .collect();
        let mut g = MetricGraph::new(self.vertices, edges)?;
        let default: BoundaryCondition = self.boundary.default.into();
        for v in 1..=self.vertices {
            g.set_boundary(v, default)?;
        }
        for (key, kind) in &self.boundary.overrides {
            let v: VertexId = key
                .trim()
                .parse()
                .map_err(|_| SpecError::BadOverrideKey(key.clone()))?;
            g.set_boundary(v, (*kind).into())?;
        }
        Ok(OpenGraph::new(g, self.leads.clone(), self.entrance)?)
    }

    /// Inverse of [`GraphSpec::to_open_graph`] for graphs built in code.
    pub fn from_open_graph(og: &OpenGraph) -> Self {
        let base = og.base();
        let mut overrides = BTreeMap::new();
        for v in base.vertices() {
            let kind = match base.boundary(v).expect("vertex in range") {
                BoundaryCondition::Neumann => continue,
                BoundaryCondition::Dirichlet => BoundaryKind::Dirichlet,
                BoundaryCondition::Custom { r, t } => BoundaryKind::Custom(CustomAmplitudes {
                    r: [r.re, r.im],
                    t: [t.re, t.im],
                }),
            };
            overrides.insert(v.to_string(), kind);
        }
        Self {
            vertices: base.vertex_count(),
            edges: base.edges().iter().map(|e| (e.a, e.b, e.length)).collect(),
            boundary: BoundarySpec {
                default: BoundaryKind::Neumann,
                overrides,
            },
            leads: og.leads().to_vec(),
            entrance: og.entrance(),
        }
    }
}

pub fn load_open_graph(path: &Path) -> Result<OpenGraph, SpecError> {
    GraphSpec::load(path)?.to_open_graph()
}
