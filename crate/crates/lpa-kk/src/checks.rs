//! Shared consistency checks used by `selftest` and the acceptance tests.
//!
//! Each check recomputes its claim through an independent route (a second
//! Smith normal form, the Hermite pipeline, or a different exact sequence)
//! and reports the first discrepancy as an error string.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::fgab::FgAbGroup;
use crate::graph::Graph;
use crate::invariants::{invariants, presentation_matrix};
use crate::matrix::{cokernel, cokernel_via_hnf, snf, IntMatrix};
use crate::sequences::{homk0_check, kunneth, structure_direct, uct, CoefficientData};

/// Out-splitting must preserve every component of the invariants.
pub fn check_out_split_invariance(g: &Graph) -> Result<(), String> {
    let split = g.out_split().map_err(|e| e.to_string())?;
    let a = invariants(g);
    let b = invariants(&split);
    if a.kh0 != b.kh0 {
        return Err(format!("KH_0 changed under out-split: {} vs {}", a.kh0, b.kh0));
    }
    if a.kh1_upper != b.kh1_upper {
        return Err(format!(
            "KH^1 changed under out-split: {} vs {}",
            a.kh1_upper, b.kh1_upper
        ));
    }
    if a.sing_count != b.sing_count || a.free_rank != b.free_rank {
        return Err("singular count or free rank changed under out-split".into());
    }
    if a.invariant_factors != b.invariant_factors {
        return Err("invariant factors changed under out-split".into());
    }
    Ok(())
}

/// Torsion parts of the two cokernels agree and the rank difference counts
/// the singular vertices; both cokernels are recomputed by separate Smith
/// normal forms of the matrix and its transpose.
pub fn check_rank_torsion_relation(g: &Graph) -> Result<(), String> {
    let m = presentation_matrix(g);
    let kh0 = cokernel(&m);
    let kh1 = cokernel(&m.transpose());
    if kh0.torsion_part() != kh1.torsion_part() {
        return Err(format!("torsion parts differ: {} vs {}", kh0, kh1));
    }
    let sing = g.classify_vertices().singular_count();
    if kh0.rank != kh1.rank + sing {
        return Err(format!(
            "rank relation fails: rank {} vs rank {} with {} singular",
            kh0.rank, kh1.rank, sing
        ));
    }
    let inv = invariants(g);
    if inv.kh0 != kh0 || inv.kh1_upper != kh1 {
        return Err("invariants disagree with the two-SNF recomputation".into());
    }
    Ok(())
}

/// The decomposition witnesses multiply back to the diagonal, the
/// transforms are unimodular, the diagonal divides along, and the cokernel
/// agrees with the Hermite pipeline.
pub fn check_snf_witness(m: &IntMatrix) -> Result<(), String> {
    let s = snf(m);
    let recomposed = s
        .p
        .matmul(m)
        .and_then(|pm| pm.matmul(&s.q))
        .map_err(|e| e.to_string())?;
    if recomposed != s.d {
        return Err("P*M*Q does not equal D".into());
    }
    for (name, t) in [("P", &s.p), ("Q", &s.q)] {
        let det = t.det();
        if det.abs() != BigInt::one() {
            return Err(format!("{name} is not unimodular (det {det})"));
        }
    }
    for w in s.invariant_factors.windows(2) {
        if (&w[1] % &w[0]) != BigInt::from(0) {
            return Err(format!("divisibility chain broken: {} does not divide {}", w[0], w[1]));
        }
    }
    if cokernel(m) != cokernel_via_hnf(m) {
        return Err("cokernel disagrees between the Smith and Hermite pipelines".into());
    }
    Ok(())
}

/// The four bookkeeping passes must agree on the rank and order of
/// `kk_n(L(E), R)`.
pub fn check_sequence_consistency(
    g: &Graph,
    coeffs: &CoefficientData,
    n: i64,
) -> Result<(), String> {
    let u = uct(g, coeffs, n).map_err(|e| e.to_string())?;
    let k = kunneth(g, coeffs, n).map_err(|e| e.to_string())?;
    let d = structure_direct(g, coeffs, n).map_err(|e| e.to_string())?;
    let reports = [&u, &k, &d];
    for r in &reports[1..] {
        if r.middle_rank != u.middle_rank {
            return Err(format!(
                "middle rank disagrees: {} gives {}, UCT gives {}",
                r.sequence_label, r.middle_rank, u.middle_rank
            ));
        }
        if r.middle_order != u.middle_order {
            return Err(format!(
                "middle order disagrees: {} gives {:?}, UCT gives {:?}",
                r.sequence_label, r.middle_order, u.middle_order
            ));
        }
    }
    let forced: Vec<&FgAbGroup> = reports
        .iter()
        .filter_map(|r| r.middle_exact_group.as_ref())
        .collect();
    if let Some(first) = forced.first() {
        if forced.iter().any(|g| g != first) {
            return Err("forced middle groups disagree".into());
        }
    }
    // homk0_check asserts its own bookkeeping internally
    let khn = coeffs.get(n).map_err(|e| e.to_string())?;
    let _ = homk0_check(g, khn);
    Ok(())
}
