//! Acceptance suite: each criterion prints one pass/fail line; the process
//! exits nonzero if any criterion fails. Run with
//! `cargo test --test acceptance`.

mod oracle;

use num_bigint::BigInt;
use std::time::{Duration, Instant};

use lpa_kk::algebra::parse::parse_element;
use lpa_kk::algebra::rho::{agree_on_window, paths_up_to, rho_truncated};
use lpa_kk::algebra::{AlgebraElement, Mode, ReductionOrder};
use lpa_kk::checks;
use lpa_kk::fgab::FgAbGroup;
use lpa_kk::graph::Graph;
use lpa_kk::invariants::{invariants, kk_equivalent, structure_form};
use lpa_kk::random::{random_graph, random_graph_with, random_group, random_matrix, seeded_rng};
use lpa_kk::sequences::{kk_pair, kunneth, uct, CoefficientData};

fn main() {
    let criteria: Vec<(&str, Duration, fn() -> Result<(), String>)> = vec![
        ("rose graphs", Duration::from_secs(1), criterion_roses),
        ("Cuntz-splice kk-zero", Duration::from_millis(100), criterion_splice),
        ("out-split invariance", Duration::from_secs(30), criterion_out_split),
        ("rank/torsion relation", Duration::from_secs(30), criterion_rank_torsion),
        ("SNF witnesses", Duration::from_secs(60), criterion_snf),
        ("group functor oracles", Duration::from_secs(60), criterion_fgab_oracles),
        ("sequence cross-consistency", Duration::from_secs(30), criterion_sequences),
        ("worked pair kk(L3, L3)", Duration::from_secs(1), criterion_worked_pair),
        ("path-algebra relations", Duration::from_secs(30), criterion_path_algebra),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let timing = if elapsed <= *budget {
            Ok(())
        } else {
            Err(format!("exceeded {budget:?} budget ({elapsed:?})"))
        };
        match result.and(timing) {
            Ok(()) => println!("criterion {} ({name}): PASS ({elapsed:.2?})", i + 1),
            Err(msg) => {
                println!("criterion {} ({name}): FAIL — {msg}", i + 1);
                failures += 1;
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

fn criterion_roses() -> Result<(), String> {
    for n in 2..50u64 {
        let inv = invariants(&Graph::rose(n));
        let expect = FgAbGroup::cyclic(n - 1);
        if inv.kh0 != expect || inv.kh1_upper != expect {
            return Err(format!("rose({n}) groups are {} and {}", inv.kh0, inv.kh1_upper));
        }
        if inv.sing_count != 0 || inv.free_rank != 0 {
            return Err(format!("rose({n}) has s or r nonzero"));
        }
        let form = structure_form(&Graph::rose(n));
        let rendered = form.render();
        let expected_form = if n == 2 { "0".to_string() } else { format!("L_{n}") };
        if rendered != expected_form {
            return Err(format!("rose({n}) normal form is {rendered}"));
        }
    }
    Ok(())
}

fn criterion_splice() -> Result<(), String> {
    let rose = Graph::rose(2);
    let spliced = rose.cuntz_splice("v").map_err(|e| e.to_string())?;
    if !invariants(&rose).is_kk_zero || !invariants(&spliced).is_kk_zero {
        return Err("rose(2) or its splice is not kk-zero".into());
    }
    if !kk_equivalent(&rose, &spliced).equivalent {
        return Err("rose(2) and its splice are not equivalent".into());
    }
    Ok(())
}

fn criterion_out_split() -> Result<(), String> {
    let mut rng = seeded_rng(1003);
    for case in 0..500 {
        let g = random_graph(&mut rng);
        checks::check_out_split_invariance(&g).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(())
}

fn criterion_rank_torsion() -> Result<(), String> {
    let mut rng = seeded_rng(1004);
    let mut saw_sink = false;
    let mut saw_infinite = false;
    for case in 0..1000 {
        let g = random_graph_with(&mut rng, true);
        let class = g.classify_vertices();
        saw_sink |= !class.sink_indices().is_empty();
        saw_infinite |= g.has_infinite_emitters();
        checks::check_rank_torsion_relation(&g).map_err(|e| format!("case {case}: {e}"))?;
    }
    if !saw_sink || !saw_infinite {
        return Err("sample missed sinks or infinite emitters".into());
    }
    Ok(())
}

fn criterion_snf() -> Result<(), String> {
    let mut rng = seeded_rng(1005);
    for case in 0..1000 {
        let m = random_matrix(&mut rng, 20, 10);
        checks::check_snf_witness(&m).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(())
}

fn criterion_fgab_oracles() -> Result<(), String> {
    let groups = oracle::all_groups_up_to(64);
    for a in &groups {
        for b in &groups {
            if a.hom(b) != oracle::hom_oracle(a, b) {
                return Err(format!("hom({a}, {b}) disagrees with the oracle"));
            }
            if a.ext1(b) != oracle::ext_oracle(a, b) {
                return Err(format!("ext1({a}, {b}) disagrees with the oracle"));
            }
            if a.tor1(b) != oracle::tor_oracle(a, b) {
                return Err(format!("tor1({a}, {b}) disagrees with the oracle"));
            }
            if a.tensor(b) != oracle::tensor_oracle(a, b) {
                return Err(format!("tensor({a}, {b}) disagrees with the oracle"));
            }
        }
    }
    Ok(())
}

fn criterion_sequences() -> Result<(), String> {
    let mut rng = seeded_rng(1007);
    for case in 0..300 {
        let g = random_graph(&mut rng);
        let mut coeffs = CoefficientData::new();
        for degree in -1..=2 {
            coeffs.insert(degree, random_group(&mut rng));
        }
        for n in [-1, 0, 1] {
            checks::check_sequence_consistency(&g, &coeffs, n)
                .map_err(|e| format!("case {case}, degree {n}: {e}"))?;
        }
    }
    Ok(())
}

fn criterion_worked_pair() -> Result<(), String> {
    let rose3 = Graph::rose(3);
    // coefficients of L(L_3): KH_0 = Z/2, KH_1 = 0 under the trivial-K1 base
    let coeffs = CoefficientData::new()
        .with(0, FgAbGroup::cyclic(2))
        .with(1, FgAbGroup::trivial());
    let u = uct(&rose3, &coeffs, 0).map_err(|e| e.to_string())?;
    if u.left != FgAbGroup::trivial() || u.right != FgAbGroup::cyclic(2) {
        return Err(format!("UCT ends are {} and {}", u.left, u.right));
    }
    if u.middle_exact_group != Some(FgAbGroup::cyclic(2)) {
        return Err("UCT does not force Z/2".into());
    }
    let k = kunneth(&rose3, &coeffs, 0).map_err(|e| e.to_string())?;
    if k.left != FgAbGroup::trivial() || k.right != FgAbGroup::cyclic(2) {
        return Err(format!("Kunneth ends are {} and {}", k.left, k.right));
    }
    let pair = kk_pair(&rose3, &rose3, &CoefficientData::trivial_k1_profile())
        .map_err(|e| e.to_string())?;
    if pair.middle_order != Some(BigInt::from(2)) {
        return Err(format!("kk(L3, L3) has order {:?}", pair.middle_order));
    }
    Ok(())
}

fn criterion_path_algebra() -> Result<(), String> {
    for g in [Graph::rose(2), Graph::rose(3), Graph::toeplitz()] {
        relation_suite(&g)?;
    }
    confluence(&Graph::rose(2))?;
    confluence(&Graph::toeplitz())?;
    rho_windows(&Graph::rose(2))?;
    rho_windows(&Graph::toeplitz())?;
    Ok(())
}

fn relation_suite(g: &Graph) -> Result<(), String> {
    let fail = |msg: String| -> Result<(), String> { Err(msg) };
    for mode in [Mode::Cohn, Mode::Leavitt] {
        let unit = AlgebraElement::unit(g, mode);
        // (V): vertices are orthogonal idempotents
        for v in 0..g.vertex_count() {
            let ev = AlgebraElement::vertex(g, v, mode);
            if ev.multiply(g, &ev).unwrap() != ev {
                return fail(format!("vertex {v} not idempotent"));
            }
            for w in 0..g.vertex_count() {
                if w != v {
                    let ew = AlgebraElement::vertex(g, w, mode);
                    if !ev.multiply(g, &ew).unwrap().is_zero() {
                        return fail(format!("vertices {v}, {w} not orthogonal"));
                    }
                }
            }
        }
        for (i, edge) in g.edges().iter().enumerate() {
            let e = AlgebraElement::edge(g, i, mode);
            let es = e.star(g);
            let s = AlgebraElement::vertex(g, edge.src, mode);
            let r = AlgebraElement::vertex(g, edge.dst, mode);
            // (E1): s(e) e = e = e r(e)
            if s.multiply(g, &e).unwrap() != e || e.multiply(g, &r).unwrap() != e {
                return fail(format!("(E1) fails for edge {}", edge.name));
            }
            // (E2): r(e) e* = e* = e* s(e)
            if r.multiply(g, &es).unwrap() != es || es.multiply(g, &s).unwrap() != es {
                return fail(format!("(E2) fails for edge {}", edge.name));
            }
            // unit is the identity on generators
            if unit.multiply(g, &e).unwrap() != e || e.multiply(g, &unit).unwrap() != e {
                return fail(format!("unit fails on edge {}", edge.name));
            }
            // (CK1): e* f = delta r(e)
            for (j, _) in g.edges().iter().enumerate() {
                let f = AlgebraElement::edge(g, j, mode);
                let prod = es.multiply(g, &f).unwrap();
                let expect = if i == j { r.clone() } else { AlgebraElement::zero(mode) };
                if prod != expect {
                    return fail(format!("(CK1) fails for edges {i}, {j}"));
                }
            }
        }
        // (mv): m_v is a self-adjoint idempotent absorbing its edges
        for v in 0..g.vertex_count() {
            let m = AlgebraElement::m_v(g, v, mode).unwrap();
            if m.multiply(g, &m).unwrap() != m || m.star(g) != m {
                return fail(format!("(mv) fails at vertex {v}"));
            }
            for (i, edge) in g.edges().iter().enumerate() {
                if edge.src == v {
                    let e = AlgebraElement::edge(g, i, mode);
                    if m.multiply(g, &e).unwrap() != e {
                        return fail(format!("(mv) absorption fails at vertex {v}"));
                    }
                }
            }
        }
    }
    // (CK2): q_v = 0 in Leavitt mode at regular vertices
    let class = g.classify_vertices();
    for v in class.regular_indices() {
        let q = AlgebraElement::q_v(g, v, Mode::Leavitt).unwrap();
        if !q.is_zero() {
            return fail(format!("(CK2) fails at vertex {v}"));
        }
        let q_cohn = AlgebraElement::q_v(g, v, Mode::Cohn).unwrap();
        if q_cohn.is_zero() {
            return fail(format!("q_{v} collapses already in Cohn mode"));
        }
    }
    Ok(())
}

/// Random generator words of length at most 4, multiplied in two
/// association orders and with both term-selection strategies.
fn confluence(g: &Graph) -> Result<(), String> {
    let mut rng = seeded_rng(1009);
    use rand::Rng;
    let generators: Vec<String> = g
        .vertex_names()
        .iter()
        .cloned()
        .chain(g.edges().iter().map(|e| e.name.clone()))
        .chain(g.edges().iter().map(|e| format!("{}*", e.name)))
        .collect();
    for mode in [Mode::Cohn, Mode::Leavitt] {
        for case in 0..200 {
            let len = rng.gen_range(1..=4usize);
            let word: Vec<&str> = (0..len)
                .map(|_| generators[rng.gen_range(0..generators.len())].as_str())
                .collect();
            let letters: Vec<AlgebraElement> = word
                .iter()
                .map(|w| parse_element(g, w, mode).unwrap())
                .collect();
            let foldl = |order: ReductionOrder| {
                let mut acc = letters[0].clone();
                for l in &letters[1..] {
                    acc = acc.multiply_with(g, l, order).unwrap();
                }
                acc
            };
            let foldr = |order: ReductionOrder| {
                let mut acc = letters[letters.len() - 1].clone();
                for l in letters[..letters.len() - 1].iter().rev() {
                    acc = l.multiply_with(g, &acc, order).unwrap();
                }
                acc
            };
            let a = foldl(ReductionOrder::FirstTerm);
            let b = foldr(ReductionOrder::LastTerm);
            if a != b {
                return Err(format!(
                    "case {case} ({mode}): word {word:?} normalizes differently"
                ));
            }
        }
    }
    Ok(())
}

fn rho_windows(g: &Graph) -> Result<(), String> {
    let mut rng = seeded_rng(1011);
    use rand::Rng;
    let paths1 = paths_up_to(g, 1);
    let random_element = |rng: &mut rand_chacha::ChaCha8Rng| {
        // short random combination of degree <= 1 monomials
        let mut acc = AlgebraElement::zero(Mode::Cohn);
        for _ in 0..rng.gen_range(1..=3usize) {
            let alpha = &paths1[rng.gen_range(0..paths1.len())];
            let beta = &paths1[rng.gen_range(0..paths1.len())];
            if alpha.range(g) != beta.range(g) {
                continue;
            }
            let m = AlgebraElement::monomial(g, alpha.clone(), beta.clone(), Mode::Cohn);
            acc = acc.add(g, &m.scale(&BigInt::from(rng.gen_range(-2..=2i64)))).unwrap();
        }
        acc
    };
    for maxlen in 2..=4usize {
        for _ in 0..30 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let prod = a.multiply(g, &b).unwrap();
            let (ma, paths) = rho_truncated(g, &a, maxlen).map_err(|e| e.to_string())?;
            let (mb, _) = rho_truncated(g, &b, maxlen).map_err(|e| e.to_string())?;
            let (mp, _) = rho_truncated(g, &prod, maxlen).map_err(|e| e.to_string())?;
            let composed = ma.matmul(&mb).map_err(|e| e.to_string())?;
            let deg = a.degree().max(b.degree()).max(prod.degree());
            if deg > maxlen {
                continue;
            }
            let window = maxlen - deg;
            if !agree_on_window(&composed, &mp, &paths, window) {
                return Err(format!("multiplicativity fails at maxlen {maxlen}"));
            }
        }
    }
    Ok(())
}
