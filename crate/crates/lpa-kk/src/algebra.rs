//! Cohn and Leavitt path algebra elements over integer coefficients.
//!
//! Elements are kept in normal form over the monomial basis
//! `{alpha beta* : r(alpha) = r(beta)}`. Products collapse the inner word
//! `beta* alpha` by common-prefix cancellation; in Leavitt mode the second
//! Cuntz-Krieger relation additionally rewrites `gamma gamma*` for the
//! distinguished edge `gamma` at each regular vertex, which makes the
//! normal form unique again.

pub mod parse;
pub mod rho;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

use crate::graph::{Graph, VertexKind};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("`q_{0}` is not defined at an infinite emitter")]
    QAtInfiniteEmitter(String),
    #[error("operation mixes Cohn and Leavitt elements")]
    ModeMismatch,
    #[error("elements belong to different graphs")]
    GraphMismatch,
    #[error("operation requires a graph without infinite emitters")]
    InfiniteEmitter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Cohn,
    Leavitt,
}

/// A finite path: a vertex (length 0) or a chain of edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    /// Source vertex; redundant when `edges` is nonempty but kept so the
    /// empty path knows where it lives.
    vertex: usize,
    edges: Vec<usize>,
}

impl Path {
    pub fn at_vertex(v: usize) -> Path {
        Path { vertex: v, edges: vec![] }
    }

    pub fn from_edges(g: &Graph, edges: Vec<usize>) -> Path {
        assert!(!edges.is_empty());
        for w in edges.windows(2) {
            assert_eq!(g.edges()[w[0]].dst, g.edges()[w[1]].src, "edges do not compose");
        }
        Path { vertex: g.edges()[edges[0]].src, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn source(&self) -> usize {
        self.vertex
    }

    pub fn range(&self, g: &Graph) -> usize {
        match self.edges.last() {
            Some(&e) => g.edges()[e].dst,
            None => self.vertex,
        }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// If `self` extends `prefix`, the remaining path (starting at
    /// `r(prefix)`).
    fn strip_prefix(&self, g: &Graph, prefix: &Path) -> Option<Path> {
        if prefix.is_empty() {
            if self.source() != prefix.vertex {
                return None;
            }
            return Some(self.clone());
        }
        if self.edges.len() < prefix.edges.len() || self.edges[..prefix.edges.len()] != prefix.edges
        {
            return None;
        }
        let rest = self.edges[prefix.edges.len()..].to_vec();
        Some(if rest.is_empty() {
            Path::at_vertex(prefix.range(g))
        } else {
            Path { vertex: g.edges()[rest[0]].src, edges: rest }
        })
    }

    fn concat(&self, g: &Graph, other: &Path) -> Path {
        debug_assert_eq!(self.range(g), other.source());
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Path { vertex: self.vertex, edges }
    }
}

// length-lexicographic, so printing order is stable under refinement
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.edges.len(), &self.edges, self.vertex).cmp(&(
            other.edges.len(),
            &other.edges,
            other.vertex,
        ))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Basis monomial `alpha beta*` with `r(alpha) = r(beta)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub alpha: Path,
    pub beta: Path,
}

impl Monomial {
    pub fn vertex(v: usize) -> Monomial {
        Monomial { alpha: Path::at_vertex(v), beta: Path::at_vertex(v) }
    }

    pub fn degree(&self) -> usize {
        self.alpha.len().max(self.beta.len())
    }
}

/// Finite integer combination of basis monomials, in normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    mode: Mode,
    terms: BTreeMap<Monomial, BigInt>,
}

/// Order in which reducible monomials are picked during Leavitt-mode
/// rewriting; the normal form must not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionOrder {
    FirstTerm,
    LastTerm,
}

impl AlgebraElement {
    pub fn zero(mode: Mode) -> AlgebraElement {
        AlgebraElement { mode, terms: BTreeMap::new() }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn vertex(g: &Graph, v: usize, mode: Mode) -> AlgebraElement {
        let _ = g;
        Self::from_terms(mode, [(Monomial::vertex(v), BigInt::one())])
    }

    pub fn edge(g: &Graph, e: usize, mode: Mode) -> AlgebraElement {
        let m = Monomial {
            alpha: Path::from_edges(g, vec![e]),
            beta: Path::at_vertex(g.edges()[e].dst),
        };
        Self::from_terms(mode, [(m, BigInt::one())])
    }

    /// Single basis monomial `alpha beta*` with coefficient 1.
    pub fn monomial(g: &Graph, alpha: Path, beta: Path, mode: Mode) -> AlgebraElement {
        assert_eq!(alpha.range(g), beta.range(g), "monomial needs matching ranges");
        let mut el = Self::from_terms(mode, [(Monomial { alpha, beta }, BigInt::one())]);
        el.reduce(g, ReductionOrder::FirstTerm);
        el
    }

    /// The unit `sum of all vertices`; exists because the vertex set is
    /// finite.
    pub fn unit(g: &Graph, mode: Mode) -> AlgebraElement {
        Self::from_terms(
            mode,
            (0..g.vertex_count()).map(|v| (Monomial::vertex(v), BigInt::one())),
        )
    }

    /// `m_v = sum of e e*` over edges leaving `v` (zero for sources).
    pub fn m_v(g: &Graph, v: usize, mode: Mode) -> Result<AlgebraElement, AlgebraError> {
        if g.is_infinite_emitter(v) {
            return Err(AlgebraError::QAtInfiniteEmitter(g.vertex_names()[v].clone()));
        }
        let terms = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.src == v)
            .map(|(i, _)| {
                let p = Path::from_edges(g, vec![i]);
                (Monomial { alpha: p.clone(), beta: p }, BigInt::one())
            });
        let mut el = Self::from_terms(mode, terms);
        el.reduce(g, ReductionOrder::FirstTerm);
        Ok(el)
    }

    /// `q_v = v - m_v`, stored expanded over the monomial basis.
    pub fn q_v(g: &Graph, v: usize, mode: Mode) -> Result<AlgebraElement, AlgebraError> {
        let vert = Self::vertex(g, v, mode);
        let m = Self::m_v(g, v, mode)?;
        vert.sub(g, &m)
    }

    fn from_terms(
        mode: Mode,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> AlgebraElement {
        let mut el = AlgebraElement::zero(mode);
        for (m, c) in terms {
            el.add_term(m, c);
        }
        el
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> AlgebraElement {
        Self::from_terms(self.mode, self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn add(&self, _g: &Graph, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if self.mode != other.mode {
            return Err(AlgebraError::ModeMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, g: &Graph, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.add(g, &other.scale(&BigInt::from(-1)))
    }

    pub fn multiply(&self, g: &Graph, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.multiply_with(g, other, ReductionOrder::FirstTerm)
    }

    pub fn multiply_with(
        &self,
        g: &Graph,
        other: &AlgebraElement,
        order: ReductionOrder,
    ) -> Result<AlgebraElement, AlgebraError> {
        if self.mode != other.mode {
            return Err(AlgebraError::ModeMismatch);
        }
        let mut out = AlgebraElement::zero(self.mode);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                // alpha1 (beta1* alpha2) beta2*: the inner word collapses
                // iff one of beta1, alpha2 extends the other
                if let Some(theta) = m2.alpha.strip_prefix(g, &m1.beta) {
                    let m = Monomial {
                        alpha: m1.alpha.concat(g, &theta),
                        beta: m2.beta.clone(),
                    };
                    out.add_term(m, c1 * c2);
                } else if let Some(theta) = m1.beta.strip_prefix(g, &m2.alpha) {
                    let m = Monomial {
                        alpha: m1.alpha.clone(),
                        beta: m2.beta.concat(g, &theta),
                    };
                    out.add_term(m, c1 * c2);
                }
            }
        }
        out.reduce(g, order);
        Ok(out)
    }

    /// Involution: reverse each word and star each letter.
    pub fn star(&self, g: &Graph) -> AlgebraElement {
        let mut el = Self::from_terms(
            self.mode,
            self.terms
                .iter()
                .map(|(m, c)| (Monomial { alpha: m.beta.clone(), beta: m.alpha.clone() }, c.clone())),
        );
        el.reduce(g, ReductionOrder::FirstTerm);
        el
    }

    /// The distinguished edge at a regular vertex: the highest-index edge
    /// leaving it.
    fn distinguished_edge(g: &Graph, v: usize) -> Option<usize> {
        g.edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.src == v)
            .map(|(i, _)| i)
            .max()
    }

    fn reducible(&self, g: &Graph, m: &Monomial) -> bool {
        if self.mode != Mode::Leavitt {
            return false;
        }
        let (Some(&ea), Some(&eb)) = (m.alpha.edges.last(), m.beta.edges.last()) else {
            return false;
        };
        if ea != eb {
            return false;
        }
        let v = g.edges()[ea].src;
        if g.classify_vertices().kinds[v] != VertexKind::Regular {
            return false;
        }
        Self::distinguished_edge(g, v) == Some(ea)
    }

    /// Rewrite to the Leavitt normal form: replace `alpha' g g* beta'*`
    /// (distinguished `g` at regular `v`) by
    /// `alpha' beta'* - sum over other edges of alpha' f f* beta'*`.
    fn reduce(&mut self, g: &Graph, order: ReductionOrder) {
        if self.mode != Mode::Leavitt {
            return;
        }
        loop {
            let target = {
                let mut it = self.terms.keys().filter(|m| self.reducible(g, m));
                match order {
                    ReductionOrder::FirstTerm => it.next().cloned(),
                    ReductionOrder::LastTerm => it.last().cloned(),
                }
            };
            let Some(m) = target else { break };
            let c = self.terms.remove(&m).expect("term present");
            let gamma = *m.alpha.edges.last().unwrap();
            let v = g.edges()[gamma].src;
            let alpha_stub = Self::drop_last(g, &m.alpha);
            let beta_stub = Self::drop_last(g, &m.beta);
            self.add_term(
                Monomial { alpha: alpha_stub.clone(), beta: beta_stub.clone() },
                c.clone(),
            );
            for (i, e) in g.edges().iter().enumerate() {
                if e.src != v || i == gamma {
                    continue;
                }
                let one_edge = Path::from_edges(g, vec![i]);
                self.add_term(
                    Monomial {
                        alpha: alpha_stub.concat(g, &one_edge),
                        beta: beta_stub.concat(g, &one_edge),
                    },
                    -c.clone(),
                );
            }
        }
    }

    fn drop_last(g: &Graph, p: &Path) -> Path {
        let mut edges = p.edges.clone();
        let last = edges.pop().expect("nonempty path");
        if edges.is_empty() {
            Path::at_vertex(g.edges()[last].src)
        } else {
            Path { vertex: p.vertex, edges }
        }
    }

    pub fn render(&self, g: &Graph) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = render_monomial(g, m);
            let abs = c.magnitude().to_string();
            let coeff = if abs == "1" { String::new() } else { format!("{abs} ") };
            if i == 0 {
                if c.sign() == num_bigint::Sign::Minus {
                    out.push_str("- ");
                }
            } else if c.sign() == num_bigint::Sign::Minus {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&coeff);
            out.push_str(&mono);
        }
        out
    }
}

fn render_monomial(g: &Graph, m: &Monomial) -> String {
    if m.alpha.is_empty() && m.beta.is_empty() {
        return g.vertex_names()[m.alpha.vertex].clone();
    }
    let mut parts: Vec<String> = m
        .alpha
        .edges
        .iter()
        .map(|&e| g.edges()[e].name.clone())
        .collect();
    parts.extend(
        m.beta
            .edges
            .iter()
            .rev()
            .map(|&e| format!("{}*", g.edges()[e].name)),
    );
    parts.join(" ")
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Cohn => write!(f, "cohn"),
            Mode::Leavitt => write!(f, "leavitt"),
        }
    }
}
