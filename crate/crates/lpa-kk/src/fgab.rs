//! Finitely generated abelian groups in canonical form.
//!
//! A group is a value: a free rank together with invariant factors
//! `d_1 | d_2 | ... | d_k`, all `>= 2`. Two values are equal exactly when
//! the groups are isomorphic, so isomorphism testing is `==`. The six
//! bifunctors (Hom, Ext^1, Tor_1, tensor, d-torsion, mod-d quotient) are
//! computed by bilinear expansion over cyclic summands.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbGroup {
    pub rank: usize,
    /// Invariant factors, each >= 2, in a divisibility chain.
    pub torsion: Vec<BigInt>,
}

impl FgAbGroup {
    /// Canonicalize an arbitrary list of cyclic orders into a chain.
    pub fn new(rank: usize, moduli: Vec<BigInt>) -> Self {
        let mut factors: Vec<BigInt> = moduli
            .into_iter()
            .map(|m| m.abs())
            .filter(|m| *m > BigInt::one())
            .collect();
        // pairwise (a, b) -> (gcd, lcm) until the chain holds
        loop {
            let mut changed = false;
            for i in 0..factors.len() {
                for j in i + 1..factors.len() {
                    if !factors[j].mod_floor(&factors[i]).is_zero() {
                        let g = factors[i].gcd(&factors[j]);
                        let l = factors[i].lcm(&factors[j]);
                        factors[i] = g;
                        factors[j] = l;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        factors.sort();
        factors.retain(|f| *f > BigInt::one());
        FgAbGroup { rank, torsion: factors }
    }

    pub fn trivial() -> Self {
        FgAbGroup { rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { rank, torsion: vec![] }
    }

    pub fn cyclic(n: u64) -> Self {
        FgAbGroup::new(0, vec![BigInt::from(n)])
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }

    pub fn torsion_part(&self) -> FgAbGroup {
        FgAbGroup { rank: 0, torsion: self.torsion.clone() }
    }

    pub fn direct_sum(parts: &[FgAbGroup]) -> FgAbGroup {
        let rank = parts.iter().map(|p| p.rank).sum();
        let moduli = parts.iter().flat_map(|p| p.torsion.iter().cloned()).collect();
        FgAbGroup::new(rank, moduli)
    }

    pub fn sum(&self, other: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::direct_sum(&[self.clone(), other.clone()])
    }

    pub fn repeated(&self, n: usize) -> FgAbGroup {
        let mut moduli = Vec::with_capacity(self.torsion.len() * n);
        for _ in 0..n {
            moduli.extend(self.torsion.iter().cloned());
        }
        FgAbGroup::new(self.rank * n, moduli)
    }

    pub fn is_iso(&self, other: &FgAbGroup) -> bool {
        self == other
    }

    /// Hom_Z(self, other).
    ///
    /// Hom(Z, G) = G, Hom(Z/m, Z) = 0, Hom(Z/m, Z/n) = Z/gcd(m, n).
    pub fn hom(&self, other: &FgAbGroup) -> FgAbGroup {
        let rank = self.rank * other.rank;
        let mut moduli: Vec<BigInt> = Vec::new();
        for _ in 0..self.rank {
            moduli.extend(other.torsion.iter().cloned());
        }
        for m in &self.torsion {
            for n in &other.torsion {
                moduli.push(m.gcd(n));
            }
        }
        FgAbGroup::new(rank, moduli)
    }

    /// Ext^1_Z(self, other).
    ///
    /// Ext(Z, G) = 0, Ext(Z/m, Z) = Z/m, Ext(Z/m, Z/n) = Z/gcd(m, n).
    pub fn ext1(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut moduli: Vec<BigInt> = Vec::new();
        for m in &self.torsion {
            for _ in 0..other.rank {
                moduli.push(m.clone());
            }
            for n in &other.torsion {
                moduli.push(m.gcd(n));
            }
        }
        FgAbGroup::new(0, moduli)
    }

    /// Tor_1^Z(self, other); symmetric and always finite.
    pub fn tor1(&self, other: &FgAbGroup) -> FgAbGroup {
        let mut moduli: Vec<BigInt> = Vec::new();
        for m in &self.torsion {
            for n in &other.torsion {
                moduli.push(m.gcd(n));
            }
        }
        FgAbGroup::new(0, moduli)
    }

    /// self ⊗_Z other.
    pub fn tensor(&self, other: &FgAbGroup) -> FgAbGroup {
        let rank = self.rank * other.rank;
        let mut moduli: Vec<BigInt> = Vec::new();
        for _ in 0..self.rank {
            moduli.extend(other.torsion.iter().cloned());
        }
        for _ in 0..other.rank {
            moduli.extend(self.torsion.iter().cloned());
        }
        for m in &self.torsion {
            for n in &other.torsion {
                moduli.push(m.gcd(n));
            }
        }
        FgAbGroup::new(rank, moduli)
    }

    /// Subgroup of elements killed by `d`.
    pub fn d_torsion(&self, d: &BigInt) -> FgAbGroup {
        assert!(!d.is_zero(), "d-torsion requires d != 0");
        let moduli = self.torsion.iter().map(|m| m.gcd(d)).collect();
        FgAbGroup::new(0, moduli)
    }

    /// Quotient by `d` times the group.
    pub fn mod_d(&self, d: &BigInt) -> FgAbGroup {
        assert!(!d.is_zero(), "mod-d requires d != 0");
        let mut moduli: Vec<BigInt> = vec![d.abs(); self.rank];
        moduli.extend(self.torsion.iter().map(|m| m.gcd(d)));
        FgAbGroup::new(0, moduli)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}
