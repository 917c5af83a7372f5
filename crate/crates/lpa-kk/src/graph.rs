//! Directed multigraphs with finitely many vertices.
//!
//! Edges carry multiplicities; a vertex may additionally be flagged as an
//! infinite emitter, in which case any listed outgoing edges are treated as
//! witnesses only (they count for source detection, never for the reduced
//! adjacency matrix). Vertex order is fixed at ingestion and used for all
//! matrix indexing.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("edge multiplicity must be >= 1 (got {0})")]
    BadMultiplicity(u64),
    #[error("operation requires a graph without infinite emitters")]
    InfiniteEmitter,
    #[error("edge name `{0}` is not unique")]
    DuplicateEdgeName(String),
    #[error("edge names list for {0}->{1} must have length equal to the multiplicity")]
    BadNamesLength(String, String),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeSpec {
    pub src: String,
    pub dst: String,
    #[serde(default = "one")]
    pub mult: u64,
    /// Optional names for the individual parallel edges, used by the
    /// path-algebra expression parser. Auto-generated when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub infinite_emitters: Vec<String>,
}

/// A single edge of the expanded edge list (multiplicities unfolded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    /// (src index, dst index) -> multiplicity, in vertex order.
    multiplicities: BTreeMap<(usize, usize), u64>,
    /// Expanded edge list; order follows the input edge list.
    edges: Vec<Edge>,
    infinite_emitters: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexKind {
    Regular,
    Sink,
    InfiniteEmitter,
}

/// Per-vertex classification, in vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    pub kinds: Vec<VertexKind>,
    pub is_source: Vec<bool>,
}

impl VertexClass {
    pub fn regular_indices(&self) -> Vec<usize> {
        self.indices_of(VertexKind::Regular)
    }

    pub fn sink_indices(&self) -> Vec<usize> {
        self.indices_of(VertexKind::Sink)
    }

    pub fn singular_count(&self) -> usize {
        self.kinds.len() - self.regular_indices().len()
    }

    fn indices_of(&self, kind: VertexKind) -> Vec<usize> {
        self.kinds
            .iter()
            .enumerate()
            .filter(|(_, k)| **k == kind)
            .map(|(i, _)| i)
            .collect()
    }
}

impl Graph {
    pub fn from_spec(spec: &GraphSpec) -> Result<Graph, GraphError> {
        let mut index = BTreeMap::new();
        for (i, v) in spec.vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |id: &String| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| GraphError::UnknownVertex(id.clone()))
        };
        let mut multiplicities: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut edges = Vec::new();
        let mut names = BTreeSet::new();
        for e in &spec.edges {
            if e.mult == 0 {
                return Err(GraphError::BadMultiplicity(0));
            }
            let src = lookup(&e.src)?;
            let dst = lookup(&e.dst)?;
            *multiplicities.entry((src, dst)).or_insert(0) += e.mult;
            if let Some(ns) = &e.names {
                if ns.len() as u64 != e.mult {
                    return Err(GraphError::BadNamesLength(e.src.clone(), e.dst.clone()));
                }
            }
            for k in 0..e.mult {
                let name = match &e.names {
                    Some(ns) => ns[k as usize].clone(),
                    None => format!("e{}", edges.len()),
                };
                if !names.insert(name.clone()) {
                    return Err(GraphError::DuplicateEdgeName(name));
                }
                edges.push(Edge { name, src, dst });
            }
        }
        let mut infinite_emitters = BTreeSet::new();
        for v in &spec.infinite_emitters {
            infinite_emitters.insert(lookup(v)?);
        }
        Ok(Graph {
            vertices: spec.vertices.clone(),
            multiplicities,
            edges,
            infinite_emitters,
        })
    }

    pub fn to_spec(&self) -> GraphSpec {
        let edges = self
            .multiplicities
            .iter()
            .map(|(&(src, dst), &mult)| EdgeSpec {
                src: self.vertices[src].clone(),
                dst: self.vertices[dst].clone(),
                mult,
                names: None,
            })
            .collect();
        GraphSpec {
            vertices: self.vertices.clone(),
            edges,
            infinite_emitters: self
                .infinite_emitters
                .iter()
                .map(|&i| self.vertices[i].clone())
                .collect(),
        }
    }

    /// Square non-negative adjacency matrix -> graph with auto-named
    /// vertices. Zero rows become sinks; no infinite emitters.
    pub fn from_adjacency(adj: &IntMatrix) -> Result<Graph, GraphError> {
        assert_eq!(adj.rows(), adj.cols(), "adjacency matrix must be square");
        let n = adj.rows();
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut multiplicities = BTreeMap::new();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let m: u64 = (&adj[(i, j)])
                    .try_into()
                    .expect("adjacency entries must be non-negative integers");
                if m == 0 {
                    continue;
                }
                multiplicities.insert((i, j), m);
                for _ in 0..m {
                    edges.push(Edge {
                        name: format!("e{}", edges.len()),
                        src: i,
                        dst: j,
                    });
                }
            }
        }
        Ok(Graph {
            vertices,
            multiplicities,
            edges,
            infinite_emitters: BTreeSet::new(),
        })
    }

    /// Graph with one vertex and `n` loops.
    pub fn rose(n: u64) -> Graph {
        let spec = GraphSpec {
            vertices: vec!["v".into()],
            edges: if n == 0 {
                vec![]
            } else {
                vec![EdgeSpec { src: "v".into(), dst: "v".into(), mult: n, names: None }]
            },
            infinite_emitters: vec![],
        };
        Graph::from_spec(&spec).expect("rose is always valid")
    }

    /// Loop at `v` plus an edge `v -> w` into a sink.
    pub fn toeplitz() -> Graph {
        let spec = GraphSpec {
            vertices: vec!["v".into(), "w".into()],
            edges: vec![
                EdgeSpec { src: "v".into(), dst: "v".into(), mult: 1, names: None },
                EdgeSpec { src: "v".into(), dst: "w".into(), mult: 1, names: None },
            ],
            infinite_emitters: vec![],
        };
        Graph::from_spec(&spec).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_by_name(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn multiplicity(&self, src: usize, dst: usize) -> u64 {
        self.multiplicities.get(&(src, dst)).copied().unwrap_or(0)
    }

    pub fn is_infinite_emitter(&self, v: usize) -> bool {
        self.infinite_emitters.contains(&v)
    }

    pub fn has_infinite_emitters(&self) -> bool {
        !self.infinite_emitters.is_empty()
    }

    pub fn out_degree(&self, v: usize) -> u64 {
        (0..self.vertex_count()).map(|w| self.multiplicity(v, w)).sum()
    }

    pub fn classify_vertices(&self) -> VertexClass {
        let n = self.vertex_count();
        let kinds = (0..n)
            .map(|v| {
                if self.infinite_emitters.contains(&v) {
                    VertexKind::InfiniteEmitter
                } else if self.out_degree(v) == 0 {
                    VertexKind::Sink
                } else {
                    VertexKind::Regular
                }
            })
            .collect();
        // witness edges out of infinite emitters do count for incidence
        let is_source = (0..n)
            .map(|v| (0..n).all(|u| self.multiplicity(u, v) == 0))
            .collect();
        VertexClass { kinds, is_source }
    }

    /// Rows indexed by non-infinite-emitter vertices, columns by all
    /// vertices; entry = edge count.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let n = self.vertex_count();
        let row_vertices: Vec<usize> = (0..n)
            .filter(|v| !self.infinite_emitters.contains(v))
            .collect();
        IntMatrix::from_fn(row_vertices.len(), n, |i, j| {
            BigInt::from(self.multiplicity(row_vertices[i], j))
        })
    }

    /// The reduced adjacency matrix `A_E` (rows at regular vertices only)
    /// together with the rectangular identity `I` of shape `E^0 x reg(E)`.
    pub fn reduced_matrix(&self) -> (IntMatrix, IntMatrix) {
        let n = self.vertex_count();
        let regular = self.classify_vertices().regular_indices();
        let a = IntMatrix::from_fn(regular.len(), n, |i, j| {
            BigInt::from(self.multiplicity(regular[i], j))
        });
        let i = IntMatrix::identity_embedding(n, &regular);
        (a, i)
    }

    /// 0/1 matrix over `E^1 ⊔ sink(E)` describing the maximal out-split
    /// graph. Requires a finite graph with no infinite emitters.
    pub fn out_split_matrix(&self) -> Result<IntMatrix, GraphError> {
        if self.has_infinite_emitters() {
            return Err(GraphError::InfiniteEmitter);
        }
        let sinks = self.classify_vertices().sink_indices();
        let ne = self.edges.len();
        let size = ne + sinks.len();
        // index x < ne is edge x; index ne + k is sink k
        let range_of = |x: usize| self.edges[x].dst;
        Ok(IntMatrix::from_fn(size, size, |x, y| {
            if x >= ne {
                return BigInt::from(0u8);
            }
            let hit = if y < ne {
                range_of(x) == self.edges[y].src
            } else {
                range_of(x) == sinks[y - ne]
            };
            BigInt::from(hit as u8)
        }))
    }

    /// The maximal out-split graph itself.
    pub fn out_split(&self) -> Result<Graph, GraphError> {
        Ok(Graph::from_adjacency(&self.out_split_matrix()?)?)
    }

    /// Attach the two-vertex splice at `v`: new vertices `w1`, `w2` with
    /// edges `v <-> w1`, `w1 <-> w2` and loops at `w1` and `w2`.
    pub fn cuntz_splice(&self, v: &str) -> Result<Graph, GraphError> {
        let vi = self
            .vertex_index(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        let mut spec = self.to_spec();
        let fresh = |base: &str, taken: &[String]| {
            if !taken.iter().any(|t| t == base) {
                return base.to_string();
            }
            (0..)
                .map(|k| format!("{base}_{k}"))
                .find(|c| !taken.iter().any(|t| t == c))
                .unwrap()
        };
        let w1 = fresh("w1", &spec.vertices);
        spec.vertices.push(w1.clone());
        let w2 = fresh("w2", &spec.vertices);
        spec.vertices.push(w2.clone());
        let vname = self.vertices[vi].clone();
        for (src, dst) in [
            (vname.clone(), w1.clone()),
            (w1.clone(), vname),
            (w1.clone(), w1.clone()),
            (w1.clone(), w2.clone()),
            (w2.clone(), w1.clone()),
            (w2.clone(), w2.clone()),
        ] {
            spec.edges.push(EdgeSpec { src, dst, mult: 1, names: None });
        }
        Graph::from_spec(&spec)
    }
}

/// Minimal DOT digraph reader; repeated edges accumulate multiplicity.
pub fn parse_dot(input: &str) -> Result<Graph, GraphError> {
    let body = match (input.find('{'), input.rfind('}')) {
        (Some(a), Some(b)) if a < b => &input[a + 1..b],
        _ => input,
    };
    let mut vertices: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut add_vertex = |name: &str, vertices: &mut Vec<String>| {
        if seen.insert(name.to_string()) {
            vertices.push(name.to_string());
        }
    };
    let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
    for stmt in body.split(';') {
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        let clean = |s: &str| s.trim().trim_matches('"').to_string();
        if let Some((lhs, rhs)) = stmt.split_once("->") {
            let src = clean(lhs);
            let dst = clean(rhs);
            add_vertex(&src, &mut vertices);
            add_vertex(&dst, &mut vertices);
            *counts.entry((src, dst)).or_insert(0) += 1;
        } else {
            add_vertex(&clean(stmt), &mut vertices);
        }
    }
    let edges = counts
        .into_iter()
        .map(|((src, dst), mult)| EdgeSpec { src, dst, mult, names: None })
        .collect();
    Graph::from_spec(&GraphSpec { vertices, edges, infinite_emitters: vec![] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    #[test]
    fn classify_rose_two() {
        let g = Graph::rose(2);
        let c = g.classify_vertices();
        assert_eq!(c.kinds, vec![VertexKind::Regular]);
        assert!(!c.is_source[0]);
    }

    #[test]
    fn classify_isolated_vertex() {
        let g = Graph::rose(0);
        let c = g.classify_vertices();
        assert_eq!(c.kinds, vec![VertexKind::Sink]);
        assert!(c.is_source[0]);
    }

    #[test]
    fn classify_toeplitz() {
        let g = Graph::toeplitz();
        let c = g.classify_vertices();
        assert_eq!(c.kinds, vec![VertexKind::Regular, VertexKind::Sink]);
        // the loop ranges at v, so neither vertex is a source
        assert_eq!(c.is_source, vec![false, false]);
    }

    #[test]
    fn classification_exhaustive_and_disjoint() {
        let spec = GraphSpec {
            vertices: vec!["a".into(), "b".into(), "u".into()],
            edges: vec![EdgeSpec { src: "a".into(), dst: "b".into(), mult: 2, names: None }],
            infinite_emitters: vec!["u".into()],
        };
        let g = Graph::from_spec(&spec).unwrap();
        let c = g.classify_vertices();
        assert_eq!(
            c.kinds,
            vec![VertexKind::Regular, VertexKind::Sink, VertexKind::InfiniteEmitter]
        );
        assert_eq!(c.singular_count(), 2);
    }

    #[test]
    fn adjacency_rose_three() {
        let a = Graph::rose(3).adjacency_matrix();
        assert_eq!(a, IntMatrix::from_i64_rows(&[&[3]]));
    }

    #[test]
    fn adjacency_toeplitz() {
        let a = Graph::toeplitz().adjacency_matrix();
        assert_eq!(a, IntMatrix::from_i64_rows(&[&[1, 1], &[0, 0]]));
    }

    #[test]
    fn adjacency_skips_infinite_emitter_rows() {
        let spec = GraphSpec {
            vertices: vec!["u".into(), "w".into()],
            edges: vec![],
            infinite_emitters: vec!["u".into()],
        };
        let g = Graph::from_spec(&spec).unwrap();
        let a = g.adjacency_matrix();
        assert_eq!(a, IntMatrix::from_i64_rows(&[&[0, 0]]));
    }

    #[test]
    fn reduced_matrix_shapes() {
        let (a, i) = Graph::rose(5).reduced_matrix();
        assert_eq!(a, IntMatrix::from_i64_rows(&[&[5]]));
        assert_eq!(i, IntMatrix::identity(1));

        let (a, i) = Graph::rose(0).reduced_matrix();
        assert_eq!((a.rows(), a.cols()), (0, 1));
        assert_eq!((i.rows(), i.cols()), (1, 0));

        let (a, i) = Graph::toeplitz().reduced_matrix();
        assert_eq!(a, IntMatrix::from_i64_rows(&[&[1, 1]]));
        assert_eq!(i, IntMatrix::from_i64_rows(&[&[1], &[0]]));
    }

    #[test]
    fn out_split_rose_two() {
        let b = Graph::rose(2).out_split_matrix().unwrap();
        assert_eq!(b, IntMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]));
    }

    #[test]
    fn out_split_single_sink() {
        let b = Graph::rose(0).out_split_matrix().unwrap();
        assert_eq!(b, IntMatrix::from_i64_rows(&[&[0]]));
    }

    #[test]
    fn out_split_toeplitz() {
        let b = Graph::toeplitz().out_split_matrix().unwrap();
        assert_eq!(
            b,
            IntMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 0, 1], &[0, 0, 0]])
        );
    }

    #[test]
    fn out_split_rejects_infinite_emitters() {
        let spec = GraphSpec {
            vertices: vec!["u".into()],
            edges: vec![],
            infinite_emitters: vec!["u".into()],
        };
        let g = Graph::from_spec(&spec).unwrap();
        assert_eq!(g.out_split_matrix(), Err(GraphError::InfiniteEmitter));
    }

    #[test]
    fn cuntz_splice_adjacency() {
        let g = Graph::rose(2).cuntz_splice("v").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(
            g.adjacency_matrix(),
            IntMatrix::from_i64_rows(&[&[2, 1, 0], &[1, 1, 1], &[0, 1, 1]])
        );
    }

    #[test]
    fn cuntz_splice_on_sink_makes_it_regular() {
        let g = Graph::rose(0).cuntz_splice("v").unwrap();
        let c = g.classify_vertices();
        assert_eq!(c.kinds[0], VertexKind::Regular);
    }

    #[test]
    fn cuntz_splice_unknown_vertex() {
        assert!(matches!(
            Graph::rose(2).cuntz_splice("nope"),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let json = r#"{"vertices":["v","w"],"edges":[{"src":"v","dst":"w","mult":2}],"infinite_emitters":["v"]}"#;
        let spec: GraphSpec = serde_json::from_str(json).unwrap();
        let g = Graph::from_spec(&spec).unwrap();
        assert_eq!(g.multiplicity(0, 1), 2);
        assert!(g.is_infinite_emitter(0));
        let back = g.to_spec();
        assert_eq!(spec, back);
    }

    #[test]
    fn dot_reader_multiplicity() {
        let g = parse_dot("digraph { v -> v; v -> w; v -> w; u; }").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.multiplicity(0, 0), 1);
        let w = g.vertex_index("w").unwrap();
        assert_eq!(g.multiplicity(0, w), 2);
    }

    #[test]
    fn rejects_bad_specs() {
        let dup = GraphSpec {
            vertices: vec!["v".into(), "v".into()],
            edges: vec![],
            infinite_emitters: vec![],
        };
        assert!(matches!(Graph::from_spec(&dup), Err(GraphError::DuplicateVertex(_))));
        let bad_edge = GraphSpec {
            vertices: vec!["v".into()],
            edges: vec![EdgeSpec { src: "v".into(), dst: "x".into(), mult: 1, names: None }],
            infinite_emitters: vec![],
        };
        assert!(matches!(Graph::from_spec(&bad_edge), Err(GraphError::UnknownVertex(_))));
        let zero_mult = GraphSpec {
            vertices: vec!["v".into()],
            edges: vec![EdgeSpec { src: "v".into(), dst: "v".into(), mult: 0, names: None }],
            infinite_emitters: vec![],
        };
        assert!(matches!(Graph::from_spec(&zero_mult), Err(GraphError::BadMultiplicity(0))));
    }
}
