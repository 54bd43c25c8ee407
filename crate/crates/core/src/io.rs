//! Reading and writing geometry and event descriptions.
//!
//! JSON geometry:
//!
//! ```json
//! {"model": "lozenge", "kind": "torus", "m": 4, "n": 4}
//! {"model": "domino", "kind": "region", "faces": [[0, 0], [1, 0]]}
//! ```
//!
//! Plain-text geometry, one directive per line, `#` starts a comment:
//!
//! ```text
//! model lozenge
//! torus 4 4
//! ```
//!
//! or `model domino` followed by one `face x y` line per face.
//!
//! Event JSON lists edges as `[black, white]` coordinate pairs, and may carry
//! the geometry it lives on:
//!
//! ```json
//! {"model": "lozenge", "edges": [[[0, 0, 0], [0, 0, 1]]], "torus": [4, 4]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::CylinderEvent;
use crate::geometry::{build_region, build_torus, Edge, Face, Model, RegionGraph, Vertex};

/// Where an event lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Geometry {
    Plane,
    Torus { m: i64, n: i64 },
    Region { faces: Vec<Face> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometrySpec {
    pub model: Model,
    pub geometry: Geometry,
}

impl GeometrySpec {
    /// The finite graph; `None` for the plane.
    pub fn build(&self) -> Result<Option<RegionGraph>> {
        match &self.geometry {
            Geometry::Plane => Ok(None),
            Geometry::Torus { m, n } => build_torus(self.model, *m, *n).map(Some),
            Geometry::Region { faces } => build_region(self.model, faces).map(Some),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GeometryJson {
    Plane { model: Model },
    Torus { model: Model, m: i64, n: i64 },
    Region { model: Model, faces: Vec<[i64; 2]> },
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn faces_of(model: Model, faces: &[[i64; 2]]) -> Vec<Face> {
    faces.iter().map(|&[a, b]| Face::new(model, a, b)).collect()
}

pub fn geometry_from_json(s: &str) -> Result<GeometrySpec> {
    let g: GeometryJson = serde_json::from_str(s).map_err(parse_err)?;
    Ok(match g {
        GeometryJson::Plane { model } => GeometrySpec {
            model,
            geometry: Geometry::Plane,
        },
        GeometryJson::Torus { model, m, n } => GeometrySpec {
            model,
            geometry: Geometry::Torus { m, n },
        },
        GeometryJson::Region { model, faces } => GeometrySpec {
            model,
            geometry: Geometry::Region {
                faces: faces_of(model, &faces),
            },
        },
    })
}

pub fn geometry_to_json(spec: &GeometrySpec) -> String {
    let model = spec.model;
    let g = match &spec.geometry {
        Geometry::Plane => GeometryJson::Plane { model },
        Geometry::Torus { m, n } => GeometryJson::Torus { model, m: *m, n: *n },
        Geometry::Region { faces } => GeometryJson::Region {
            model,
            faces: faces.iter().map(|f| f.coords().into()).collect(),
        },
    };
    serde_json::to_string(&g).expect("geometry serializes")
}

fn ints(words: &[&str], line: usize) -> Result<Vec<i64>> {
    words
        .iter()
        .map(|w| {
            w.parse::<i64>()
                .map_err(|e| Error::Parse(format!("line {line}: {w:?}: {e}")))
        })
        .collect()
}

pub fn geometry_from_text(s: &str) -> Result<GeometrySpec> {
    let mut model = None;
    let mut torus = None;
    let mut faces = Vec::new();
    for (i, raw) in s.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        let words: Vec<&str> = text.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["model", tag] => model = Some(tag.parse::<Model>()?),
            ["torus", rest @ ..] => match ints(rest, line)?.as_slice() {
                &[m, n] => torus = Some((m, n)),
                _ => return Err(Error::Parse(format!("line {line}: torus takes two integers"))),
            },
            ["face", rest @ ..] => match ints(rest, line)?.as_slice() {
                &[a, b] => faces.push([a, b]),
                _ => return Err(Error::Parse(format!("line {line}: face takes two integers"))),
            },
            _ => return Err(Error::Parse(format!("line {line}: unrecognised directive {text:?}"))),
        }
    }
    let model = model.ok_or_else(|| Error::Parse("missing model line".into()))?;
    let geometry = match (torus, faces.is_empty()) {
        (Some(_), false) => return Err(Error::Parse("give either a torus or faces, not both".into())),
        (Some((m, n)), true) => Geometry::Torus { m, n },
        (None, false) => Geometry::Region {
            faces: faces_of(model, &faces),
        },
        (None, true) => Geometry::Plane,
    };
    Ok(GeometrySpec { model, geometry })
}

/// JSON when the input starts with `{`, plain text otherwise.
pub fn parse_geometry(s: &str) -> Result<GeometrySpec> {
    if s.trim_start().starts_with('{') {
        geometry_from_json(s)
    } else {
        geometry_from_text(s)
    }
}

#[derive(Serialize, Deserialize)]
struct EventJson {
    model: Model,
    edges: Vec<[Vec<i64>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    torus: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<[i64; 2]>>,
}

/// An event together with the geometry it was given on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventSpec {
    pub event: CylinderEvent,
    pub geometry: GeometrySpec,
}

pub fn event_from_json(s: &str) -> Result<EventSpec> {
    let e: EventJson = serde_json::from_str(s).map_err(parse_err)?;
    let model = e.model;
    let edges = e
        .edges
        .iter()
        .map(|[b, w]| Edge::new(Vertex::from_slice(model, b)?, Vertex::from_slice(model, w)?))
        .collect::<Result<Vec<_>>>()?;
    let geometry = match (e.torus, e.faces) {
        (Some(_), Some(_)) => return Err(Error::Parse("give either a torus or faces, not both".into())),
        (Some([m, n]), None) => Geometry::Torus { m, n },
        (None, Some(f)) => Geometry::Region {
            faces: faces_of(model, &f),
        },
        (None, None) => Geometry::Plane,
    };
    Ok(EventSpec {
        event: CylinderEvent::new(model, edges)?,
        geometry: GeometrySpec { model, geometry },
    })
}

pub fn event_to_json(spec: &EventSpec) -> String {
    let (torus, faces) = match &spec.geometry.geometry {
        Geometry::Plane => (None, None),
        Geometry::Torus { m, n } => (Some([*m, *n]), None),
        Geometry::Region { faces } => (None, Some(faces.iter().map(|f| f.coords().into()).collect())),
    };
    let e = EventJson {
        model: spec.event.model(),
        edges: spec
            .event
            .edges()
            .iter()
            .map(|e| [e.black().to_vec(), e.white().to_vec()])
            .collect(),
        torus,
        faces,
    };
    serde_json::to_string(&e).expect("event serializes")
}
