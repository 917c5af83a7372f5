//! Brute-force oracles for finite abelian group functors.
//!
//! Groups are realized as explicit element sets (tuples of residues) and
//! the functors are evaluated by enumeration: Hom and Tor through the
//! subgroup killed by each factor, Ext and tensor through quotients by
//! multiples. Structures are identified from annihilator counts, never
//! from the gcd formulas under test.

use lpa_kk::FgAbGroup;
use num_bigint::BigInt;

/// Moduli of a finite group as small integers.
fn moduli(g: &FgAbGroup) -> Vec<u64> {
    assert_eq!(g.rank, 0, "oracle handles finite groups only");
    g.torsion
        .iter()
        .map(|d| u64::try_from(d).expect("small factor"))
        .collect()
}

/// All tuples of residues; the element set of the group.
fn elements(moduli: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &m in moduli {
        out = out
            .into_iter()
            .flat_map(|base| {
                (0..m).map(move |r| {
                    let mut e = base.clone();
                    e.push(r);
                    e
                })
            })
            .collect();
    }
    out
}

fn scalar_mul(k: u64, x: &[u64], moduli: &[u64]) -> Vec<u64> {
    x.iter().zip(moduli).map(|(&a, &m)| (a * k) % m).collect()
}

/// Number of elements of the set killed by `d`.
fn annihilator_count(set: &[Vec<u64>], moduli: &[u64], d: u64) -> usize {
    set.iter()
        .filter(|x| scalar_mul(d, x, moduli).iter().all(|&r| r == 0))
        .count()
}

/// All divisibility chains of factors >= 2 with the given product.
fn chains_with_product(product: u64, min: u64) -> Vec<Vec<u64>> {
    if product == 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in min..=product {
        if product % first != 0 {
            continue;
        }
        for mut rest in chains_with_product(product / first, first) {
            // a chain requires every later factor to be a multiple
            if rest.iter().all(|&r| r % first == 0) {
                let mut chain = vec![first];
                chain.append(&mut rest);
                out.push(chain);
            }
        }
    }
    out
}

/// Identify the unique invariant-factor chain matching the annihilator
/// counts of the element set.
fn identify(set: &[Vec<u64>], moduli: &[u64]) -> FgAbGroup {
    let order = set.len() as u64;
    let candidates = chains_with_product(order, 2);
    let mut found = None;
    'cand: for chain in candidates {
        for d in 1..=order {
            if order % d != 0 {
                continue;
            }
            let predicted: u64 = chain.iter().map(|&c| gcd(c, d)).product();
            if predicted as usize != annihilator_count(set, moduli, d) {
                continue 'cand;
            }
        }
        assert!(found.is_none(), "annihilator counts identify a unique chain");
        found = Some(chain);
    }
    let chain = found.expect("some chain matches");
    FgAbGroup::new(0, chain.into_iter().map(BigInt::from).collect())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The subgroup `B[m]` of elements killed by `m`, as an abstract group.
fn torsion_subgroup(b_moduli: &[u64], m: u64) -> FgAbGroup {
    let all = elements(b_moduli);
    let killed: Vec<Vec<u64>> = all
        .into_iter()
        .filter(|x| scalar_mul(m, x, b_moduli).iter().all(|&r| r == 0))
        .collect();
    identify(&killed, b_moduli)
}

/// The quotient `B / mB`, identified by counting coset annihilators.
fn quotient_mod_m(b_moduli: &[u64], m: u64) -> FgAbGroup {
    let all = elements(b_moduli);
    let image: std::collections::BTreeSet<Vec<u64>> = all
        .iter()
        .map(|x| scalar_mul(m, x, b_moduli))
        .collect();
    let order = all.len() / image.len();
    // N_d in the quotient counts x with d x in mB, divided by |mB|
    let candidates = chains_with_product(order as u64, 2);
    let mut found = None;
    'cand: for chain in candidates {
        for d in 1..=order as u64 {
            if order as u64 % d != 0 {
                continue;
            }
            let count = all
                .iter()
                .filter(|x| image.contains(&scalar_mul(d, x, b_moduli)))
                .count()
                / image.len();
            let predicted: u64 = chain.iter().map(|&c| gcd(c, d)).product();
            if predicted as usize != count {
                continue 'cand;
            }
        }
        assert!(found.is_none(), "quotient counts identify a unique chain");
        found = Some(chain);
    }
    FgAbGroup::new(0, found.expect("some chain matches").into_iter().map(BigInt::from).collect())
}

/// `Hom(A, B) = direct sum over factors m of A of B[m]`.
pub fn hom_oracle(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let bm = moduli(b);
    let parts: Vec<FgAbGroup> = moduli(a).iter().map(|&m| torsion_subgroup(&bm, m)).collect();
    FgAbGroup::direct_sum(&parts)
}

/// `Tor(A, B) = direct sum over factors m of A of B[m]`.
pub fn tor_oracle(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    hom_oracle(a, b)
}

/// `Ext(A, B) = direct sum over factors m of A of B/mB`.
pub fn ext_oracle(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let bm = moduli(b);
    let parts: Vec<FgAbGroup> = moduli(a).iter().map(|&m| quotient_mod_m(&bm, m)).collect();
    FgAbGroup::direct_sum(&parts)
}

/// `A tensor B = direct sum over factors m of A of B/mB`.
pub fn tensor_oracle(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    ext_oracle(a, b)
}

/// Every finite abelian group of order at most `max_order`, one per
/// isomorphism class.
pub fn all_groups_up_to(max_order: u64) -> Vec<FgAbGroup> {
    let mut out = Vec::new();
    for n in 1..=max_order {
        for chain in chains_with_product(n, 2) {
            out.push(FgAbGroup::new(0, chain.into_iter().map(BigInt::from).collect()));
        }
    }
    out
}
