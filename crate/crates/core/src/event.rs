use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::geometry::{Edge, Model, RegionGraph, Vertex};

/// A finite set of pairwise disjoint lattice edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderEvent {
    model: Model,
    edges: Vec<Edge>,
}

impl CylinderEvent {
    pub fn new(model: Model, edges: Vec<Edge>) -> Result<Self> {
        let mut seen: HashSet<Vertex> = HashSet::new();
        for e in &edges {
            if e.model() != model {
                return Err(Error::ModelMismatch(model, e.model()));
            }
            for v in [e.black(), e.white()] {
                if !seen.insert(v) {
                    return Err(Error::OverlappingEdges(v.to_string()));
                }
            }
        }
        Ok(CylinderEvent { model, edges })
    }

    pub fn empty(model: Model) -> Self {
        CylinderEvent {
            model,
            edges: Vec::new(),
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn translate(&self, d: (i64, i64)) -> Self {
        CylinderEvent {
            model: self.model,
            edges: self.edges.iter().map(|e| e.translate(d)).collect(),
        }
    }

    /// Union of two events; fails if they share a vertex.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.model != other.model {
            return Err(Error::ModelMismatch(self.model, other.model));
        }
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().copied());
        Self::new(self.model, edges)
    }

    /// Graph edge indices of the event, checking disjointness after torus
    /// reduction.
    pub fn edge_ids(&self, graph: &RegionGraph) -> Result<Vec<usize>> {
        if graph.model() != self.model {
            return Err(Error::ModelMismatch(graph.model(), self.model));
        }
        let mut blacks = HashSet::new();
        let mut whites = HashSet::new();
        let mut ids = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let id = graph.edge_id(e)?;
            let ge = graph.edges()[id];
            if !blacks.insert(ge.black) {
                return Err(Error::OverlappingEdges(graph.blacks()[ge.black].to_string()));
            }
            if !whites.insert(ge.white) {
                return Err(Error::OverlappingEdges(graph.whites()[ge.white].to_string()));
            }
            ids.push(id);
        }
        Ok(ids)
    }

    /// Smallest Euclidean distance between vertices of the two events.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut best = f64::INFINITY;
        for e in &self.edges {
            for f in &other.edges {
                for u in [e.black(), e.white()] {
                    for v in [f.black(), f.white()] {
                        let (a, b) = u.position();
                        let (c, d) = v.position();
                        best = best.min(((a - c).powi(2) + (b - d).powi(2)).sqrt());
                    }
                }
            }
        }
        best
    }
}
