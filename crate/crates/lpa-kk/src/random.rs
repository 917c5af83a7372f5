//! Seeded random generation of graphs, matrices, and groups for
//! self-tests.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fgab::FgAbGroup;
use crate::graph::{EdgeSpec, Graph, GraphSpec};
use crate::matrix::IntMatrix;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small random graph: up to 8 vertices, out-degree up to 3 per vertex,
/// multiplicities up to 3, with occasional sinks.
pub fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    random_graph_with(rng, false)
}

/// As `random_graph`, and when `allow_infinite` is set each vertex has a
/// small chance of being flagged as an infinite emitter.
pub fn random_graph_with(rng: &mut ChaCha8Rng, allow_infinite: bool) -> Graph {
    let n = rng.gen_range(1..=8usize);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for v in 0..n {
        let out = rng.gen_range(0..=3usize);
        for _ in 0..out {
            edges.push(EdgeSpec {
                src: vertices[v].clone(),
                dst: vertices[rng.gen_range(0..n)].clone(),
                mult: rng.gen_range(1..=3u64),
                names: None,
            });
        }
    }
    let infinite_emitters = if allow_infinite {
        vertices
            .iter()
            .filter(|_| rng.gen_ratio(1, 5))
            .cloned()
            .collect()
    } else {
        vec![]
    };
    let spec = GraphSpec { vertices, edges, infinite_emitters };
    Graph::from_spec(&spec).expect("generated spec is valid")
}

/// Random matrix up to `max_dim` in each dimension, entries in
/// `[-max_entry, max_entry]`. Zero-dimensional shapes are allowed.
pub fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, max_entry: i64) -> IntMatrix {
    let rows = rng.gen_range(0..=max_dim);
    let cols = rng.gen_range(0..=max_dim);
    IntMatrix::from_fn(rows, cols, |_, _| {
        BigInt::from(rng.gen_range(-max_entry..=max_entry))
    })
}

/// Random group with rank at most 2 and at most two torsion factors <= 12.
pub fn random_group(rng: &mut ChaCha8Rng) -> FgAbGroup {
    let rank = rng.gen_range(0..=2usize);
    let k = rng.gen_range(0..=2usize);
    let moduli = (0..k).map(|_| BigInt::from(rng.gen_range(2..=12u64))).collect();
    FgAbGroup::new(rank, moduli)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let a = random_graph(&mut seeded_rng(7));
        let b = random_graph(&mut seeded_rng(7));
        assert_eq!(a, b);
        let c = random_graph(&mut seeded_rng(8));
        assert!(a != c || a.vertex_count() == c.vertex_count());
    }

    #[test]
    fn respects_bounds() {
        let mut rng = seeded_rng(1);
        for _ in 0..50 {
            let g = random_graph_with(&mut rng, true);
            assert!(g.vertex_count() >= 1 && g.vertex_count() <= 8);
            for v in 0..g.vertex_count() {
                assert!(g.out_degree(v) <= 9);
            }
        }
    }
}
