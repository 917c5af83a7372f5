//! Truncated matrix representation on the free module spanned by paths.
//!
//! A monomial `alpha beta*` sends the basis vector of a path `beta theta`
//! to the basis vector of `alpha theta`. Truncating to paths of length at
//! most `maxlen` keeps the matrices finite; products are then only faithful
//! on a window of paths short enough that no image falls off the end.

use num_traits::Zero;

use super::{AlgebraElement, AlgebraError, Path};
use crate::graph::Graph;
use crate::matrix::IntMatrix;

/// All paths of length at most `maxlen`, ordered length-lexicographically.
pub fn paths_up_to(g: &Graph, maxlen: usize) -> Vec<Path> {
    let mut all: Vec<Path> = (0..g.vertex_count()).map(Path::at_vertex).collect();
    let mut frontier = all.clone();
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for p in &frontier {
            let r = p.range(g);
            for (i, e) in g.edges().iter().enumerate() {
                if e.src == r {
                    let mut edges = p.edges().to_vec();
                    edges.push(i);
                    next.push(Path::from_edges(g, edges));
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all.sort();
    all
}

/// The matrix of `el` on paths of length at most `maxlen`. Rows and columns
/// are indexed by `paths_up_to(g, maxlen)`.
pub fn rho_truncated(
    g: &Graph,
    el: &AlgebraElement,
    maxlen: usize,
) -> Result<(IntMatrix, Vec<Path>), AlgebraError> {
    if g.has_infinite_emitters() {
        return Err(AlgebraError::InfiniteEmitter);
    }
    let paths = paths_up_to(g, maxlen);
    let index = |p: &Path| paths.binary_search(p).expect("path enumerated");
    let mut m = IntMatrix::zero(paths.len(), paths.len());
    for (mono, c) in el.terms() {
        let tail = mono.alpha.range(g);
        for theta in &paths {
            if theta.source() != tail
                || mono.alpha.len() + theta.len() > maxlen
                || mono.beta.len() + theta.len() > maxlen
            {
                continue;
            }
            let row = index(&mono.alpha.concat(g, theta));
            let col = index(&mono.beta.concat(g, theta));
            m[(row, col)] += c;
        }
    }
    Ok((m, paths))
}

/// Compare two truncated matrices only on entries indexed by paths of
/// length at most `window` on both sides.
pub fn agree_on_window(
    a: &IntMatrix,
    b: &IntMatrix,
    paths: &[Path],
    window: usize,
) -> bool {
    assert_eq!(a.rows(), paths.len());
    assert_eq!(b.rows(), paths.len());
    for (i, pi) in paths.iter().enumerate() {
        for (j, pj) in paths.iter().enumerate() {
            if pi.len() <= window && pj.len() <= window && a[(i, j)] != b[(i, j)] {
                return false;
            }
        }
    }
    true
}

/// Stack the truncated matrices of `elements` as flattened rows and return
/// the rank; equals the element count exactly when the truncated images are
/// linearly independent.
pub fn flattened_rank(
    g: &Graph,
    elements: &[AlgebraElement],
    maxlen: usize,
) -> Result<usize, AlgebraError> {
    let n = paths_up_to(g, maxlen).len();
    let mut stacked = IntMatrix::zero(elements.len(), n * n);
    for (k, el) in elements.iter().enumerate() {
        let (m, _) = rho_truncated(g, el, maxlen)?;
        for i in 0..n {
            for j in 0..n {
                if !m[(i, j)].is_zero() {
                    stacked[(k, i * n + j)] = m[(i, j)].clone();
                }
            }
        }
    }
    Ok(crate::matrix::rank(&stacked))
}
