//! Square lattice ℤ² and honeycomb lattice H: vertices, edges, faces, and
//! the finite and toroidal graphs built from them.
//!
//! Honeycomb vertex `(a, b, t)` sits at `a·x̂ + b·ŷ + t` with
//! `x̂ = 3/2 − i√3/2`, `ŷ = 3/2 + i√3/2`; `t = 0` is black. The hexagon
//! `Face::Hex(a, b)` is centred at `a·x̂ + b·ŷ + e^{iπ/3}`, so `Hex(0, 0)` is
//! the face above and to the right of the origin. `Face::Square(x, y)` is
//! the unit square with lower-left corner `(x, y)`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Lozenge,
    Domino,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Lozenge => "lozenge",
            Model::Domino => "domino",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lozenge" | "hex" | "honeycomb" => Ok(Model::Lozenge),
            "domino" | "square" => Ok(Model::Domino),
            other => Err(Error::Parse(format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Black,
    White,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// `t` is 0 (black) or 1 (white).
    Hex {
        a: i64,
        b: i64,
        t: u8,
    },
    Square {
        x: i64,
        y: i64,
    },
}

impl Vertex {
    pub fn hex(a: i64, b: i64, t: u8) -> Self {
        assert!(t <= 1, "honeycomb vertex sublattice must be 0 or 1");
        Vertex::Hex { a, b, t }
    }

    pub fn square(x: i64, y: i64) -> Self {
        Vertex::Square { x, y }
    }

    pub fn model(&self) -> Model {
        match self {
            Vertex::Hex { .. } => Model::Lozenge,
            Vertex::Square { .. } => Model::Domino,
        }
    }

    pub fn color(&self) -> Color {
        match *self {
            Vertex::Hex { t, .. } => {
                if t == 0 {
                    Color::Black
                } else {
                    Color::White
                }
            }
            Vertex::Square { x, y } => {
                if (x + y).rem_euclid(2) == 0 {
                    Color::Black
                } else {
                    Color::White
                }
            }
        }
    }

    /// The two lattice coordinates, without the sublattice bit.
    pub fn coords(&self) -> (i64, i64) {
        match *self {
            Vertex::Hex { a, b, .. } => (a, b),
            Vertex::Square { x, y } => (x, y),
        }
    }

    pub fn translate(&self, d: (i64, i64)) -> Self {
        match *self {
            Vertex::Hex { a, b, t } => Vertex::Hex {
                a: a + d.0,
                b: b + d.1,
                t,
            },
            Vertex::Square { x, y } => Vertex::Square { x: x + d.0, y: y + d.1 },
        }
    }

    /// Position in the plane.
    pub fn position(&self) -> (f64, f64) {
        match *self {
            Vertex::Hex { a, b, t } => {
                let h = 3f64.sqrt() / 2.0;
                (1.5 * (a + b) as f64 + t as f64, h * (b - a) as f64)
            }
            Vertex::Square { x, y } => (x as f64, y as f64),
        }
    }

    /// Coordinates as a flat list: `[a, b, t]` or `[x, y]`.
    pub fn to_vec(&self) -> Vec<i64> {
        match *self {
            Vertex::Hex { a, b, t } => vec![a, b, t as i64],
            Vertex::Square { x, y } => vec![x, y],
        }
    }

    pub fn from_slice(model: Model, c: &[i64]) -> Result<Self> {
        match (model, c) {
            (Model::Lozenge, &[a, b, t]) if t == 0 || t == 1 => Ok(Vertex::hex(a, b, t as u8)),
            (Model::Domino, &[x, y]) => Ok(Vertex::square(x, y)),
            _ => Err(Error::Parse(format!("bad {model} vertex coordinates {c:?}"))),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Hex { a, b, t } => write!(f, "({a},{b},{t})"),
            Vertex::Square { x, y } => write!(f, "({x},{y})"),
        }
    }
}

pub fn vertex_color(v: &Vertex) -> Color {
    v.color()
}

/// Lattice neighbours of `v` in the infinite lattice.
pub fn neighbors(v: &Vertex) -> Vec<Vertex> {
    match *v {
        Vertex::Hex { a, b, t: 0 } => vec![Vertex::hex(a, b, 1), Vertex::hex(a - 1, b, 1), Vertex::hex(a, b - 1, 1)],
        Vertex::Hex { a, b, .. } => vec![Vertex::hex(a, b, 0), Vertex::hex(a + 1, b, 0), Vertex::hex(a, b + 1, 0)],
        Vertex::Square { x, y } => vec![
            Vertex::square(x + 1, y),
            Vertex::square(x - 1, y),
            Vertex::square(x, y + 1),
            Vertex::square(x, y - 1),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// An edge of the infinite lattice, stored black endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    black: Vertex,
    white: Vertex,
}

impl Edge {
    /// Accepts the endpoints in either order.
    pub fn new(u: Vertex, v: Vertex) -> Result<Self> {
        if u.model() != v.model() {
            return Err(Error::ModelMismatch(u.model(), v.model()));
        }
        let (black, white) = match (u.color(), v.color()) {
            (Color::Black, Color::White) => (u, v),
            (Color::White, Color::Black) => (v, u),
            _ => return Err(Error::UnknownEdge(format!("{u}-{v} (same color)"))),
        };
        if !neighbors(&black).contains(&white) {
            return Err(Error::UnknownEdge(format!("{u}-{v} (not adjacent)")));
        }
        Ok(Edge { black, white })
    }

    pub fn black(&self) -> Vertex {
        self.black
    }

    pub fn white(&self) -> Vertex {
        self.white
    }

    pub fn model(&self) -> Model {
        self.black.model()
    }

    /// Domino edges only.
    pub fn orientation(&self) -> Option<Orientation> {
        match (self.black, self.white) {
            (Vertex::Square { y: y0, .. }, Vertex::Square { y: y1, .. }) => Some(if y0 == y1 {
                Orientation::Horizontal
            } else {
                Orientation::Vertical
            }),
            _ => None,
        }
    }

    pub fn translate(&self, d: (i64, i64)) -> Self {
        Edge {
            black: self.black.translate(d),
            white: self.white.translate(d),
        }
    }

    /// The two faces on either side of the edge.
    pub fn faces(&self) -> [Face; 2] {
        match (self.black, self.white) {
            (Vertex::Hex { a: p, b: q, .. }, Vertex::Hex { a, b, .. }) => {
                if (a, b) == (p, q) {
                    [Face::Hex(p, q), Face::Hex(p + 1, q - 1)]
                } else if (a, b) == (p - 1, q) {
                    [Face::Hex(p, q), Face::Hex(p, q - 1)]
                } else {
                    [Face::Hex(p, q - 1), Face::Hex(p + 1, q - 1)]
                }
            }
            (u @ Vertex::Square { .. }, v @ Vertex::Square { .. }) => {
                let (x0, y0) = u.coords();
                let (x1, y1) = v.coords();
                let (x, y) = (x0.min(x1), y0.min(y1));
                if y0 == y1 {
                    [Face::Square(x, y), Face::Square(x, y - 1)]
                } else {
                    [Face::Square(x, y), Face::Square(x - 1, y)]
                }
            }
            _ => unreachable!("edge endpoints share a model"),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.black, self.white)
    }
}

/// A basic hexagon of H or unit square of ℤ².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    Hex(i64, i64),
    Square(i64, i64),
}

impl Face {
    pub fn model(&self) -> Model {
        match self {
            Face::Hex(..) => Model::Lozenge,
            Face::Square(..) => Model::Domino,
        }
    }

    pub fn coords(&self) -> (i64, i64) {
        match *self {
            Face::Hex(a, b) | Face::Square(a, b) => (a, b),
        }
    }

    pub fn new(model: Model, a: i64, b: i64) -> Self {
        match model {
            Model::Lozenge => Face::Hex(a, b),
            Model::Domino => Face::Square(a, b),
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        match *self {
            Face::Hex(a, b) => vec![
                Vertex::hex(a, b, 0),
                Vertex::hex(a, b, 1),
                Vertex::hex(a, b + 1, 0),
                Vertex::hex(a - 1, b + 1, 1),
                Vertex::hex(a - 1, b + 1, 0),
                Vertex::hex(a - 1, b, 1),
            ],
            Face::Square(x, y) => vec![
                Vertex::square(x, y),
                Vertex::square(x + 1, y),
                Vertex::square(x + 1, y + 1),
                Vertex::square(x, y + 1),
            ],
        }
    }

    /// Centre in the plane.
    pub fn centre(&self) -> (f64, f64) {
        match *self {
            Face::Hex(a, b) => {
                let h = 3f64.sqrt() / 2.0;
                (1.5 * (a + b) as f64 + 0.5, h * (b - a) as f64 + h)
            }
            Face::Square(x, y) => (x as f64 + 0.5, y as f64 + 0.5),
        }
    }

    /// Bounding edges, walking around the face.
    pub fn edges(&self) -> Vec<Edge> {
        let vs = self.vertices();
        (0..vs.len())
            .map(|k| Edge::new(vs[k], vs[(k + 1) % vs.len()]).expect("face boundary edges are lattice edges"))
            .collect()
    }

    pub fn translate(&self, d: (i64, i64)) -> Self {
        match *self {
            Face::Hex(a, b) => Face::Hex(a + d.0, b + d.1),
            Face::Square(x, y) => Face::Square(x + d.0, y + d.1),
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Face::Hex(a, b) => write!(f, "hex({a},{b})"),
            Face::Square(x, y) => write!(f, "square({x},{y})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionKind {
    SimplyConnected,
    Torus { m: i64, n: i64 },
}

/// An edge of a [`RegionGraph`], by index into the black and white blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub black: usize,
    pub white: usize,
    /// Representative lattice edge (reduced coordinates on a torus).
    pub edge: Edge,
    /// Wraps around the first period of a torus.
    pub seam_x: bool,
    /// Wraps around the second period of a torus.
    pub seam_y: bool,
}

/// Finite bipartite graph: a simply connected region or a torus.
///
/// Vertices are ordered black block first, each block lexicographically, so
/// matrix indices are reproducible.
#[derive(Clone, Debug)]
pub struct RegionGraph {
    model: Model,
    kind: RegionKind,
    blacks: Vec<Vertex>,
    whites: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    edges: Vec<GraphEdge>,
    edge_index: HashMap<(usize, usize), usize>,
    faces: Vec<Face>,
    warnings: Vec<String>,
}

impl RegionGraph {
    fn assemble(
        model: Model,
        kind: RegionKind,
        vertices: BTreeSet<Vertex>,
        raw: Vec<(Vertex, Vertex, Edge, bool, bool)>,
        faces: Vec<Face>,
    ) -> Self {
        let mut blacks = Vec::new();
        let mut whites = Vec::new();
        for v in vertices {
            match v.color() {
                Color::Black => blacks.push(v),
                Color::White => whites.push(v),
            }
        }
        let mut index = HashMap::new();
        for (i, v) in blacks.iter().enumerate() {
            index.insert(*v, i);
        }
        for (i, v) in whites.iter().enumerate() {
            index.insert(*v, i);
        }
        let mut edges: Vec<GraphEdge> = raw
            .into_iter()
            .map(|(b, w, edge, seam_x, seam_y)| GraphEdge {
                black: index[&b],
                white: index[&w],
                edge,
                seam_x,
                seam_y,
            })
            .collect();
        edges.sort_by_key(|e| (e.black, e.white));
        edges.dedup_by_key(|e| (e.black, e.white));
        let edge_index = edges.iter().enumerate().map(|(k, e)| ((e.black, e.white), k)).collect();
        RegionGraph {
            model,
            kind,
            blacks,
            whites,
            index,
            edges,
            edge_index,
            faces,
            warnings: Vec::new(),
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn kind(&self) -> RegionKind {
        self.kind
    }

    pub fn blacks(&self) -> &[Vertex] {
        &self.blacks
    }

    pub fn whites(&self) -> &[Vertex] {
        &self.whites
    }

    /// All vertices, black block first.
    pub fn vertices(&self) -> Vec<Vertex> {
        self.blacks.iter().chain(&self.whites).copied().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.blacks.len() + self.whites.len()
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// Input faces of a region; empty for a torus.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn is_balanced(&self) -> bool {
        self.blacks.len() == self.whites.len()
    }

    /// Reduces torus coordinates into the fundamental domain.
    pub fn reduce(&self, v: &Vertex) -> Vertex {
        match (self.kind, *v) {
            (RegionKind::Torus { m, n }, Vertex::Hex { a, b, t }) => Vertex::hex(a.rem_euclid(m), b.rem_euclid(n), t),
            (RegionKind::Torus { m, n }, Vertex::Square { x, y }) => {
                Vertex::square(x.rem_euclid(2 * m), y.rem_euclid(2 * n))
            }
            _ => *v,
        }
    }

    /// Index of `v` within its color block.
    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        let r = self.reduce(v);
        if r.model() != self.model {
            return None;
        }
        self.index.get(&r).copied()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index_of(v).is_some()
    }

    /// Index into [`RegionGraph::edges`] of a lattice edge, reducing on a torus.
    pub fn edge_id(&self, e: &Edge) -> Result<usize> {
        let b = self
            .index_of(&e.black())
            .ok_or_else(|| Error::UnknownVertex(e.black().to_string()))?;
        let w = self
            .index_of(&e.white())
            .ok_or_else(|| Error::UnknownVertex(e.white().to_string()))?;
        self.edge_index
            .get(&(b, w))
            .copied()
            .ok_or_else(|| Error::UnknownEdge(e.to_string()))
    }

    /// Indices of edges incident to black vertex `b`.
    pub fn black_incident(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.edges.partition_point(|e| e.black < b);
        (start..self.edges.len()).take_while(move |&k| self.edges[k].black == b)
    }

    pub fn degree(&self, v: &Vertex) -> usize {
        let Some(i) = self.index_of(v) else { return 0 };
        match v.color() {
            Color::Black => self.black_incident(i).count(),
            Color::White => self.edges.iter().filter(|e| e.white == i).count(),
        }
    }
}

/// The torus H_{m,n} (lozenge) or the 2m×2n torus ℤ²_{m,n} (domino).
///
/// Sizes outside the even/even (and, for lozenge, prime-to-3) regime are
/// built with a warning: the four-determinant sign pattern is only known
/// there.
pub fn build_torus(model: Model, m: i64, n: i64) -> Result<RegionGraph> {
    if m < 2 || n < 2 {
        return Err(Error::TorusTooSmall { m, n });
    }
    let kind = RegionKind::Torus { m, n };
    let mut vertices = BTreeSet::new();
    let mut raw = Vec::new();
    match model {
        Model::Lozenge => {
            for a in 0..m {
                for b in 0..n {
                    vertices.insert(Vertex::hex(a, b, 0));
                    vertices.insert(Vertex::hex(a, b, 1));
                    let bl = Vertex::hex(a, b, 0);
                    for w in neighbors(&bl) {
                        let (wa, wb) = w.coords();
                        let red = Vertex::hex(wa.rem_euclid(m), wb.rem_euclid(n), 1);
                        let edge = Edge::new(bl, w).expect("lattice neighbour");
                        raw.push((bl, red, edge, wa < 0, wb < 0));
                    }
                }
            }
        }
        Model::Domino => {
            let (w2, h2) = (2 * m, 2 * n);
            for x in 0..w2 {
                for y in 0..h2 {
                    let v = Vertex::square(x, y);
                    vertices.insert(v);
                    if v.color() != Color::Black {
                        continue;
                    }
                    for w in neighbors(&v) {
                        let (wx, wy) = w.coords();
                        let red = Vertex::square(wx.rem_euclid(w2), wy.rem_euclid(h2));
                        let edge = Edge::new(v, w).expect("lattice neighbour");
                        raw.push((v, red, edge, !(0..w2).contains(&wx), !(0..h2).contains(&wy)));
                    }
                }
            }
        }
    }
    let mut g = RegionGraph::assemble(model, kind, vertices, raw, Vec::new());
    let even = m % 2 == 0 && n % 2 == 0;
    let prime3 = model == Model::Domino || (m % 3 != 0 && n % 3 != 0);
    if !even {
        g.warnings.push(format!(
            "torus {m}x{n}: four-determinant signs are only established for even m and n"
        ));
    }
    if !prime3 {
        g.warnings.push(format!(
            "torus {m}x{n}: a dimension divisible by 3 makes a Kasteleyn determinant vanish"
        ));
    }
    Ok(g)
}

/// The 1-skeleton of a finite union of faces.
///
/// The union must be edge-connected and simply connected (Euler
/// characteristic 1). The empty face set gives the empty graph.
pub fn build_region(model: Model, faces: &[Face]) -> Result<RegionGraph> {
    let faces: BTreeSet<Face> = faces.iter().copied().collect();
    if let Some(f) = faces.iter().find(|f| f.model() != model) {
        return Err(Error::ModelMismatch(model, f.model()));
    }
    let mut vertices = BTreeSet::new();
    let mut edge_set = BTreeSet::new();
    let mut by_edge: BTreeMap<Edge, Vec<Face>> = BTreeMap::new();
    for f in &faces {
        vertices.extend(f.vertices());
        for e in f.edges() {
            edge_set.insert(e);
            by_edge.entry(e).or_default().push(*f);
        }
    }
    if let Some(&start) = faces.iter().next() {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for e in f.edges() {
                for g in &by_edge[&e] {
                    if seen.insert(*g) {
                        queue.push_back(*g);
                    }
                }
            }
        }
        if seen.len() != faces.len() {
            return Err(Error::Disconnected);
        }
        let chi = vertices.len() as i64 - edge_set.len() as i64 + faces.len() as i64;
        if chi != 1 {
            return Err(Error::NotSimplyConnected { holes: 1 - chi });
        }
    }
    let raw = edge_set
        .iter()
        .map(|e| (e.black(), e.white(), *e, false, false))
        .collect();
    Ok(RegionGraph::assemble(
        model,
        RegionKind::SimplyConnected,
        vertices,
        raw,
        faces.into_iter().collect(),
    ))
}

/// Crossing from one face to an adjacent one through a region edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub from: Face,
    pub to: Face,
    /// Index into the region's edge list.
    pub edge: usize,
    /// `to − from` in face coordinates.
    pub direction: (i64, i64),
}

#[derive(Clone, Debug, Default)]
pub struct FaceAdjacency {
    /// Every face touching at least one region edge, sorted.
    pub faces: Vec<Face>,
    /// Faces all of whose bounding edges are region edges.
    pub interior: Vec<Face>,
    /// Both directions of every crossing.
    pub crossings: Vec<Crossing>,
}

pub fn faces_and_adjacency(region: &RegionGraph) -> Result<FaceAdjacency> {
    if region.kind() != RegionKind::SimplyConnected {
        return Err(Error::Precondition(
            "face adjacency is defined for finite regions only".into(),
        ));
    }
    let mut all = BTreeSet::new();
    let mut crossings = Vec::new();
    for (k, ge) in region.edges().iter().enumerate() {
        let [f, g] = ge.edge.faces();
        all.insert(f);
        all.insert(g);
        let d = (g.coords().0 - f.coords().0, g.coords().1 - f.coords().1);
        crossings.push(Crossing {
            from: f,
            to: g,
            edge: k,
            direction: d,
        });
        crossings.push(Crossing {
            from: g,
            to: f,
            edge: k,
            direction: (-d.0, -d.1),
        });
    }
    let interior = all
        .iter()
        .filter(|f| f.edges().iter().all(|e| region.edge_id(e).is_ok()))
        .copied()
        .collect();
    Ok(FaceAdjacency {
        faces: all.into_iter().collect(),
        interior,
        crossings,
    })
}
