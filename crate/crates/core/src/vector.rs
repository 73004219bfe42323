//! Formal rational combinations of canonical classes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::canon::{canonicalize, AsMode, SignedClass};
use crate::graph::{key_degree, Graph};

/// Sparse map from canonical key to a nonzero rational coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphVector {
    terms: BTreeMap<String, BigRational>,
}

impl GraphVector {
    pub fn new() -> GraphVector {
        GraphVector::default()
    }

    /// The class of a single graph with coefficient one (empty if it is zero).
    pub fn from_graph(g: &Graph, mode: AsMode) -> GraphVector {
        let mut v = GraphVector::new();
        v.add_graph(g, mode, &BigRational::one());
        v
    }

    pub fn from_key(key: &str) -> GraphVector {
        let mut v = GraphVector::new();
        v.add_key(key, &BigRational::one());
        v
    }

    pub fn add_key(&mut self, key: &str, coeff: &BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(key) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(key);
                }
            }
            None => {
                self.terms.insert(key.to_string(), coeff.clone());
            }
        }
    }

    pub fn add_class(&mut self, class: &SignedClass, coeff: &BigRational) {
        if !class.zero {
            self.add_key(&class.key, &(coeff * BigRational::from_integer(class.sign.into())));
        }
    }

    pub fn add_graph(&mut self, g: &Graph, mode: AsMode, coeff: &BigRational) {
        self.add_class(&canonicalize(g, mode), coeff);
    }

    pub fn add_scaled(&mut self, other: &GraphVector, coeff: &BigRational) {
        for (k, c) in &other.terms {
            self.add_key(k, &(c * coeff));
        }
    }

    pub fn scaled(&self, coeff: &BigRational) -> GraphVector {
        let mut v = GraphVector::new();
        v.add_scaled(self, coeff);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &BigRational)> {
        self.terms.iter().map(|(k, c)| (k.as_str(), c))
    }

    pub fn get(&self, key: &str) -> Option<&BigRational> {
        self.terms.get(key)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The common degree of all terms; `Err` lists the first two that differ.
    pub fn degree(&self) -> Result<Option<usize>, (usize, usize)> {
        let mut deg = None;
        for k in self.terms.keys() {
            let d = key_degree(k).expect("vector keys are graph keys");
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err((e, d)),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Re-canonicalizes every term under `mode`, dropping zero classes.
    pub fn recanonicalized(&self, mode: AsMode) -> GraphVector {
        let mut v = GraphVector::new();
        for (k, c) in &self.terms {
            let g: Graph = k.parse().expect("vector keys are graph keys");
            v.add_graph(&g, mode, c);
        }
        v
    }

    /// One `<coeff> <key>` line per term, sorted by key.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, c) in &self.terms {
            writeln!(s, "{c} {k}").unwrap();
        }
        s
    }
}

impl FromIterator<(String, BigRational)> for GraphVector {
    fn from_iter<I: IntoIterator<Item = (String, BigRational)>>(iter: I) -> Self {
        let mut v = GraphVector::new();
        for (k, c) in iter {
            v.add_key(&k, &c);
        }
        v
    }
}

/// A parse failure in a vector file, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct VectorParseError {
    pub line: usize,
    pub message: String,
}

/// Parses `<coeff> <graph>` lines. Blank lines and `#` comments are skipped.
pub fn parse_terms(text: &str) -> Result<Vec<(BigRational, Graph)>, VectorParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| VectorParseError { line: i + 1, message };
        let (c, k) = line.split_once(char::is_whitespace).ok_or_else(|| err("expected `<coeff> <graph>`".into()))?;
        let coeff: BigRational = c.parse().map_err(|e| err(format!("bad coefficient `{c}`: {e}")))?;
        let g: Graph = k.trim().parse().map_err(|e| err(format!("{e}")))?;
        out.push((coeff, g));
    }
    Ok(out)
}

/// Parses a vector file and canonicalizes its terms under `mode`.
pub fn parse_vector(text: &str, mode: AsMode) -> Result<GraphVector, VectorParseError> {
    let mut v = GraphVector::new();
    for (c, g) in parse_terms(text)? {
        v.add_graph(&g, mode, &c);
    }
    Ok(v)
}

/// Sparse map from ordered key pairs to rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorVector {
    terms: BTreeMap<(String, String), BigRational>,
}

impl TensorVector {
    pub fn new() -> TensorVector {
        TensorVector::default()
    }

    pub fn add(&mut self, left: &str, right: &str, coeff: &BigRational) {
        if coeff.is_zero() {
            return;
        }
        let key = (left.to_string(), right.to_string());
        let entry = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &TensorVector, coeff: &BigRational) {
        for ((l, r), c) in &other.terms {
            self.add(l, r, &(c * coeff));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &BigRational)> {
        self.terms.iter().map(|((l, r), c)| (l.as_str(), r.as_str(), c))
    }

    pub fn get(&self, left: &str, right: &str) -> Option<&BigRational> {
        self.terms.get(&(left.to_string(), right.to_string()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exchanges the two tensor legs.
    pub fn swapped(&self) -> TensorVector {
        let mut t = TensorVector::new();
        for ((l, r), c) in &self.terms {
            t.add(r, l, c);
        }
        t
    }
}
