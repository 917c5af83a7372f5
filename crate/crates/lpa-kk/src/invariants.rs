//! The group invariants of `L(E)`, the normal form they determine, and the
//! equivalence decision.
//!
//! Everything is read off one Smith normal form of `I - A_E^t`: its
//! cokernel is `KH_0`, the cokernel of the transpose is `KH^1`, and the
//! invariant factors together with the singular-vertex count and the free
//! rank of `KH^1` pin down the normal form
//! `L_0^s + L_1^r + sum of L_{d_i + 1}`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::fgab::FgAbGroup;
use crate::graph::Graph;
use crate::matrix::{snf, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KkInvariants {
    pub kh0: FgAbGroup,
    pub kh1_upper: FgAbGroup,
    /// ker(I - A_E^t), free.
    pub ker_transpose: FgAbGroup,
    /// ker(I - A_E), free.
    pub ker_plain: FgAbGroup,
    /// Number of singular vertices.
    pub sing_count: usize,
    /// Free rank of KH^1.
    pub free_rank: usize,
    /// Invariant factors d_i >= 2 of the torsion.
    pub invariant_factors: Vec<BigInt>,
    pub is_kk_zero: bool,
}

/// The normal form `L_0^s + L_1^r + sum_i L_{d_i + 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureForm {
    pub s: usize,
    pub r: usize,
    /// The subscripts `d_i + 1` of the cyclic summands.
    pub cycles: Vec<BigInt>,
}

impl StructureForm {
    pub fn is_empty(&self) -> bool {
        self.s == 0 && self.r == 0 && self.cycles.is_empty()
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if self.s > 0 {
            parts.push(if self.s == 1 { "L_0".into() } else { format!("L_0^{}", self.s) });
        }
        if self.r > 0 {
            parts.push(if self.r == 1 { "L_1".into() } else { format!("L_1^{}", self.r) });
        }
        for c in &self.cycles {
            parts.push(format!("L_{c}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `I - A_E^t` as a map `Z^{reg(E)} -> Z^{E^0}`.
pub fn presentation_matrix(g: &Graph) -> IntMatrix {
    let (a, i) = g.reduced_matrix();
    i.sub(&a.transpose()).expect("I and A^t share the shape E^0 x reg(E)")
}

/// `KH_0(L(E)) = Coker(I - A_E^t)`.
pub fn kh0(g: &Graph) -> FgAbGroup {
    crate::matrix::cokernel(&presentation_matrix(g))
}

/// `KH^1(L(E)) = Coker(I - A_E : Z^{E^0} -> Z^{reg(E)})`.
pub fn kh1_upper(g: &Graph) -> FgAbGroup {
    crate::matrix::cokernel(&presentation_matrix(g).transpose())
}

pub fn invariants(g: &Graph) -> KkInvariants {
    let m = presentation_matrix(g);
    let n_vertices = m.rows();
    let n_regular = m.cols();
    let s = snf(&m);
    let k = s.rank();
    let factors: Vec<BigInt> = s
        .invariant_factors
        .iter()
        .filter(|d| **d > BigInt::one())
        .cloned()
        .collect();
    let kh0 = FgAbGroup::new(n_vertices - k, factors.clone());
    let kh1_upper = FgAbGroup::new(n_regular - k, factors.clone());
    let sing_count = g.classify_vertices().singular_count();
    let inv = KkInvariants {
        ker_transpose: FgAbGroup::free(n_regular - k),
        ker_plain: FgAbGroup::free(n_vertices - k),
        sing_count,
        free_rank: kh1_upper.rank,
        invariant_factors: factors,
        is_kk_zero: kh0.is_trivial() && kh1_upper.is_trivial(),
        kh0,
        kh1_upper,
    };
    // internal consistency before anything is returned
    assert_eq!(inv.kh0.torsion_part(), inv.kh1_upper.torsion_part());
    assert_eq!(inv.kh0.rank - inv.kh1_upper.rank, inv.sing_count);
    assert_eq!(inv.is_kk_zero, structure_form_of(&inv).is_empty());
    inv
}

fn structure_form_of(inv: &KkInvariants) -> StructureForm {
    StructureForm {
        s: inv.sing_count,
        r: inv.free_rank,
        cycles: inv
            .invariant_factors
            .iter()
            .map(|d| d + BigInt::one())
            .collect(),
    }
}

pub fn structure_form(g: &Graph) -> StructureForm {
    structure_form_of(&invariants(g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionReport {
    pub equivalent: bool,
    /// Criterion i): equal normal forms.
    pub same_structure_form: bool,
    /// Criterion ii): KH_0 and KH^1 both isomorphic.
    pub same_kh0_and_kh1: bool,
    /// Criterion iii): KH_0 isomorphic and equal singular counts.
    pub same_kh0_and_sing: bool,
    pub left_form: String,
    pub right_form: String,
}

/// Decide whether `L(E)` and `L(F)` are isomorphic in kk, evaluating all
/// three equivalent criteria. Their disagreement would be a defect, not a
/// reportable state, hence the assertion.
pub fn kk_equivalent(e: &Graph, f: &Graph) -> DecisionReport {
    let ie = invariants(e);
    let iff = invariants(f);
    let fe = structure_form_of(&ie);
    let ff = structure_form_of(&iff);
    let same_structure_form = fe == ff;
    let same_kh0_and_kh1 =
        ie.kh0.is_iso(&iff.kh0) && ie.kh1_upper.is_iso(&iff.kh1_upper);
    let same_kh0_and_sing = ie.kh0.is_iso(&iff.kh0) && ie.sing_count == iff.sing_count;
    assert!(
        same_structure_form == same_kh0_and_kh1 && same_kh0_and_kh1 == same_kh0_and_sing,
        "equivalence criteria disagree: {fe:?} vs {ff:?}"
    );
    DecisionReport {
        equivalent: same_structure_form,
        same_structure_form,
        same_kh0_and_kh1,
        same_kh0_and_sing,
        left_form: fe.render(),
        right_form: ff.render(),
    }
}
