//! Brute-force perfect-matching enumeration, the ground truth for every
//! determinant formula.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::event::CylinderEvent;
use crate::geometry::RegionGraph;

/// Default largest graph the enumerator accepts.
pub const DEFAULT_CAP: usize = 36;

/// All perfect matchings of a graph, each as a sorted list of edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingSet {
    matchings: Vec<Vec<usize>>,
}

impl MatchingSet {
    pub fn matchings(&self) -> &[Vec<usize>] {
        &self.matchings
    }

    pub fn len(&self) -> usize {
        self.matchings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matchings.is_empty()
    }

    /// Number of matchings containing every listed edge.
    pub fn count_containing(&self, edge_ids: &[usize]) -> usize {
        self.matchings
            .iter()
            .filter(|m| edge_ids.iter().all(|e| m.binary_search(e).is_ok()))
            .count()
    }
}

fn check_cap(graph: &RegionGraph, cap: usize) -> Result<()> {
    if graph.vertex_count() > cap {
        return Err(Error::OracleCap {
            vertices: graph.vertex_count(),
            cap,
        });
    }
    Ok(())
}

/// Backtracking over the edges of the lowest-indexed uncovered vertex.
///
/// Vertices are ordered black first, so the lowest uncovered vertex is always
/// black while any black remains, and each matching is produced once.
fn search(
    graph: &RegionGraph,
    b: usize,
    used_white: &mut [bool],
    current: &mut Vec<usize>,
    out: &mut dyn FnMut(&[usize]),
) {
    if b == graph.blacks().len() {
        out(current);
        return;
    }
    for k in graph.black_incident(b) {
        let w = graph.edges()[k].white;
        if used_white[w] {
            continue;
        }
        used_white[w] = true;
        current.push(k);
        search(graph, b + 1, used_white, current, out);
        current.pop();
        used_white[w] = false;
    }
}

fn for_each_matching(graph: &RegionGraph, out: &mut dyn FnMut(&[usize])) {
    if !graph.is_balanced() {
        return;
    }
    let mut used = vec![false; graph.whites().len()];
    search(graph, 0, &mut used, &mut Vec::new(), out);
}

pub fn enumerate_matchings(graph: &RegionGraph) -> Result<MatchingSet> {
    enumerate_matchings_capped(graph, DEFAULT_CAP)
}

pub fn enumerate_matchings_capped(graph: &RegionGraph, cap: usize) -> Result<MatchingSet> {
    check_cap(graph, cap)?;
    let mut matchings = Vec::new();
    for_each_matching(graph, &mut |m| {
        let mut v = m.to_vec();
        v.sort_unstable();
        matchings.push(v);
    });
    Ok(MatchingSet { matchings })
}

/// Number of perfect matchings, without storing them.
pub fn count_matchings(graph: &RegionGraph, cap: usize) -> Result<BigInt> {
    check_cap(graph, cap)?;
    let mut count: u64 = 0;
    for_each_matching(graph, &mut |_| count += 1);
    Ok(BigInt::from(count))
}

/// Fraction of perfect matchings containing every edge of the event.
pub fn oracle_probability(graph: &RegionGraph, event: &CylinderEvent) -> Result<BigRational> {
    oracle_probability_capped(graph, event, DEFAULT_CAP)
}

pub fn oracle_probability_capped(graph: &RegionGraph, event: &CylinderEvent, cap: usize) -> Result<BigRational> {
    check_cap(graph, cap)?;
    let ids = event.edge_ids(graph)?;
    let mut total: u64 = 0;
    let mut hits: u64 = 0;
    for_each_matching(graph, &mut |m| {
        total += 1;
        if ids.iter().all(|e| m.contains(e)) {
            hits += 1;
        }
    });
    if total == 0 {
        return Err(Error::NoMatchings);
    }
    Ok(BigRational::new(BigInt::from(hits), BigInt::from(total)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::geometry::{build_region, build_torus, Edge, Face, Model, Vertex};

    fn hexagon() -> RegionGraph {
        build_region(Model::Lozenge, &[Face::Hex(0, 0)]).unwrap()
    }

    #[test]
    fn hexagon_has_two_matchings() {
        let set = enumerate_matchings(&hexagon()).unwrap();
        assert_eq!(set.len(), 2);
        assert_ne!(set.matchings()[0], set.matchings()[1]);
        for m in set.matchings() {
            assert_eq!(m.len(), 3);
        }
    }

    #[test]
    fn unbalanced_region_has_none() {
        let sq: Vec<Face> = (0..2).flat_map(|x| (0..2).map(move |y| Face::Square(x, y))).collect();
        let g = build_region(Model::Domino, &sq).unwrap();
        assert!(enumerate_matchings(&g).unwrap().is_empty());
        let ev = CylinderEvent::empty(Model::Domino);
        assert_eq!(oracle_probability(&g, &ev), Err(Error::NoMatchings));
    }

    #[test]
    fn hexagon_edge_probability() {
        let g = hexagon();
        let e = Edge::new(Vertex::hex(0, 0, 0), Vertex::hex(0, 0, 1)).unwrap();
        let ev = CylinderEvent::new(Model::Lozenge, vec![e]).unwrap();
        assert_eq!(oracle_probability(&g, &ev).unwrap(), rat(1, 2));
    }

    #[test]
    fn cap_is_enforced() {
        let t = build_torus(Model::Lozenge, 4, 6).unwrap();
        assert_eq!(
            enumerate_matchings(&t).unwrap_err(),
            Error::OracleCap {
                vertices: 48,
                cap: DEFAULT_CAP
            }
        );
        assert!(count_matchings(&t, 48).is_ok());
    }

    #[test]
    fn domino_strip_counts() {
        // 2×n strips of cells: Fibonacci numbers.
        let fib = [1u32, 2, 3, 5, 8, 13];
        for (len, want) in (1..=6).zip(fib.iter().skip(1)) {
            let faces: Vec<Face> = (0..len).map(|x| Face::Square(x, 0)).collect();
            let g = build_region(Model::Domino, &faces).unwrap();
            assert_eq!(
                count_matchings(&g, DEFAULT_CAP).unwrap(),
                BigInt::from(*want),
                "1x{len}"
            );
        }
    }
}
