//! Product, coproducts, deframing, the Θ = 2Y normalization and manifold
//! weight systems.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::canon::{canonicalize, AsMode};
use crate::engine::Engine;
use crate::enumerate::Space;
use crate::error::{Error, Result};
use crate::graph::{theta, Cell, Graph};
use crate::vector::{GraphVector, TensorVector};

fn parse(key: &str) -> Graph {
    key.parse().expect("vector keys are graph keys")
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Bilinear extension of disjoint union.
pub fn product(v1: &GraphVector, v2: &GraphVector, mode: AsMode) -> GraphVector {
    let mut out = GraphVector::new();
    for (k1, c1) in v1.iter() {
        let g1 = parse(k1);
        for (k2, c2) in v2.iter() {
            out.add_graph(&g1.disjoint_union(&parse(k2)), mode, &(c1 * c2));
        }
    }
    out
}

/// Sum over the ordered ways of distributing the connected components of `g`
/// into a left and a right block.
pub fn coproduct(g: &Graph, mode: AsMode) -> TensorVector {
    let comps = g.components();
    let mut out = TensorVector::new();
    for mask in 0u64..(1u64 << comps.len()) {
        let (mut left, mut right) = (Graph::empty(), Graph::empty());
        for (i, c) in comps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                left = left.disjoint_union(c);
            } else {
                right = right.disjoint_union(c);
            }
        }
        let (l, r) = (canonicalize(&left, mode), canonicalize(&right, mode));
        if !l.zero && !r.zero {
            out.add(&l.key, &r.key, &rational((l.sign * r.sign) as i64));
        }
    }
    out
}

pub fn coproduct_vec(v: &GraphVector, mode: AsMode) -> TensorVector {
    let mut out = TensorVector::new();
    for (k, c) in v.iter() {
        out.add_scaled(&coproduct(&parse(k), mode), c);
    }
    out
}

/// Leg-wise product of tensors: `(a ⊗ b)(c ⊗ d) = ac ⊗ bd`.
pub fn tensor_product(t1: &TensorVector, t2: &TensorVector, mode: AsMode) -> TensorVector {
    let mut out = TensorVector::new();
    for (l1, r1, c1) in t1.iter() {
        for (l2, r2, c2) in t2.iter() {
            let l = canonicalize(&parse(l1).disjoint_union(&parse(l2)), mode);
            let r = canonicalize(&parse(r1).disjoint_union(&parse(r2)), mode);
            if !l.zero && !r.zero {
                out.add(&l.key, &r.key, &(c1 * c2 * rational((l.sign * r.sign) as i64)));
            }
        }
    }
    out
}

/// The subgraph of `g` on the edges with `color[e] == side`. Trivalent
/// vertices keeping all three edges stay trivalent with their cyclic order;
/// vertices keeping one or two edges become that many univalent vertices;
/// vertices keeping none disappear.
fn colored_side(g: &Graph, color: &[bool], side: bool) -> Graph {
    let edges = g.edges();
    let mut keep = vec![false; g.half_edge_count()];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if color[i] == side {
            keep[a] = true;
            keep[b] = true;
        }
    }
    let mut new_id = vec![usize::MAX; keep.len()];
    let mut n = 0;
    for h in 0..keep.len() {
        if keep[h] {
            new_id[h] = n;
            n += 1;
        }
    }
    let mut cells = Vec::new();
    for cell in g.cells() {
        match *cell {
            Cell::Tri(t) if t.iter().all(|&h| keep[h]) => cells.push(Cell::Tri(t.map(|h| new_id[h]))),
            _ => cells.extend(cell.half_edges().iter().filter(|&&h| keep[h]).map(|&h| Cell::Uni(new_id[h]))),
        }
    }
    let pairs: Vec<(usize, usize)> =
        edges.iter().enumerate().filter(|(i, _)| color[*i] == side).map(|(_, &(a, b))| (new_id[a], new_id[b])).collect();
    Graph::new(cells, &pairs).expect("a colored side is a valid graph")
}

/// All `2^m` (left, right) pairs from colorings of the edges, before any
/// canonicalization or relation is applied. Bit `i` of the coloring index set
/// means edge `i` goes left.
pub fn extended_splittings(g: &Graph) -> Vec<(Graph, Graph)> {
    let m = g.degree();
    assert!(m < 63, "too many edges to enumerate colorings");
    (0u64..(1u64 << m))
        .map(|mask| {
            let color: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
            (colored_side(g, &color, true), colored_side(g, &color, false))
        })
        .collect()
}

/// Edge-coloring coproduct on the extended space. Terms where either side
/// has an interval component vanish.
pub fn coproduct_extended(g: &Graph) -> TensorVector {
    let mut out = TensorVector::new();
    for (left, right) in extended_splittings(g) {
        if left.has_interval_component() || right.has_interval_component() {
            continue;
        }
        let (l, r) = (canonicalize(&left, AsMode::YExempt), canonicalize(&right, AsMode::YExempt));
        if !l.zero && !r.zero {
            out.add(&l.key, &r.key, &rational((l.sign * r.sign) as i64));
        }
    }
    out
}

/// Dimension of the primitive part in degree `m`, i.e. of the connected
/// classes modulo IHX.
pub fn primitives_dim(engine: &Engine, m: usize) -> Result<usize> {
    engine.quotient_dim(m, Space::Cmc, true)
}

/// `g` with every trivalent vertex in `subset` split into three univalent ones.
pub fn split_vertices(g: &Graph, subset: &[usize]) -> Graph {
    let mut cells = Vec::with_capacity(g.cells().len() + 2 * subset.len());
    for (i, cell) in g.cells().iter().enumerate() {
        match *cell {
            Cell::Tri(t) if subset.contains(&i) => cells.extend(t.map(Cell::Uni)),
            c => cells.push(c),
        }
    }
    Graph::new(cells, &g.edges()).expect("splitting keeps a valid graph")
}

fn deframe_with(g: &Graph, alternating: bool) -> GraphVector {
    let tri: Vec<usize> = (0..g.cells().len()).filter(|&i| g.cells()[i].is_trivalent()).collect();
    assert!(tri.len() < 63, "too many trivalent vertices");
    let mut out = GraphVector::new();
    for mask in 0u64..(1u64 << tri.len()) {
        let subset: Vec<usize> = tri.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c).collect();
        let sign = if alternating && subset.len() % 2 == 1 { -1 } else { 1 };
        out.add_graph(&split_vertices(g, &subset), AsMode::Raw, &rational(sign));
    }
    out
}

/// Signed sum over subsets of trivalent vertices of the split graphs, in the
/// raw span (no AS, no IS).
pub fn deframe(g: &Graph) -> GraphVector {
    deframe_with(g, true)
}

/// Same sum with all signs positive; the inverse of [`deframe`].
pub fn deframe_inv(g: &Graph) -> GraphVector {
    deframe_with(g, false)
}

/// Linear extension of [`deframe`] or [`deframe_inv`] over raw vectors.
pub fn deframe_vec(v: &GraphVector, inverse: bool) -> GraphVector {
    let mut out = GraphVector::new();
    for (k, c) in v.iter() {
        out.add_scaled(&deframe_with(&parse(k), !inverse), c);
    }
    out
}

/// Projects a raw vector onto the span modulo AS (and IS on the extended
/// space).
pub fn impose_relations(v: &GraphVector, space: Space) -> GraphVector {
    let mut out = GraphVector::new();
    for (k, c) in v.iter() {
        let g = parse(k);
        if space == Space::Ecmc && g.has_interval_component() {
            continue;
        }
        out.add_graph(&g, space.default_mode(), c);
    }
    out
}

/// Replaces every Y component by half a Θ component. The result lies in the
/// trivalent span, canonicalized with full AS.
pub fn theta_normalize(v: &GraphVector) -> GraphVector {
    let half = BigRational::new(1.into(), 2.into());
    let mut out = GraphVector::new();
    for (k, c) in v.iter() {
        let mut kept = Graph::empty();
        let mut coeff = c.clone();
        for comp in parse(k).components() {
            if comp.is_y() {
                kept = kept.disjoint_union(&theta());
                coeff *= &half;
            } else {
                kept = kept.disjoint_union(&comp);
            }
        }
        out.add_graph(&kept, AsMode::Full, &coeff);
    }
    out
}

/// A linear functional on the degree-`m` quotient, given by its values on the
/// echelon-selected basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    pub degree: usize,
    pub space: Space,
    pub basis: Vec<String>,
    pub values: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct WeightSystemFile {
    degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    space: Option<Space>,
    basis: Vec<String>,
    values: Vec<String>,
}

impl WeightSystem {
    pub fn from_values(engine: &Engine, degree: usize, space: Space, values: Vec<BigRational>) -> Result<WeightSystem> {
        let basis = engine.quotient(degree, space, false)?.basis_keys();
        if values.len() != basis.len() {
            return Err(Error::WeightSystem(format!(
                "{} values for a {}-dimensional quotient in degree {degree}",
                values.len(),
                basis.len()
            )));
        }
        Ok(WeightSystem { degree, space, basis, values })
    }

    /// The functional that is one on basis class `key` and zero on the others.
    pub fn dual(engine: &Engine, degree: usize, space: Space, key: &str) -> Result<WeightSystem> {
        let basis = engine.quotient(degree, space, false)?.basis_keys();
        let i = basis.iter().position(|k| k == key).ok_or_else(|| Error::UnknownClass(key.to_string()))?;
        let mut values = vec![BigRational::zero(); basis.len()];
        values[i] = BigRational::one();
        Ok(WeightSystem { degree, space, basis, values })
    }

    /// The dual of Θ in degree 3.
    pub fn dual_theta(engine: &Engine) -> Result<WeightSystem> {
        WeightSystem::dual(engine, 3, Space::Cmc, &canonicalize(&theta(), AsMode::Full).key)
    }

    /// The counit: one on the empty graph.
    pub fn counit(engine: &Engine, space: Space) -> Result<WeightSystem> {
        WeightSystem::dual(engine, 0, space, "deg=0;v=;p=")
    }

    pub fn to_json(&self) -> String {
        let file = WeightSystemFile {
            degree: self.degree,
            space: (self.space != Space::Cmc).then_some(self.space),
            basis: self.basis.clone(),
            values: self.values.iter().map(|v| v.to_string()).collect(),
        };
        serde_json::to_string_pretty(&file).expect("weight systems serialize")
    }

    /// Parses a weight system and checks its basis against the canonical
    /// echelon basis of its degree.
    pub fn from_json(engine: &Engine, text: &str) -> Result<WeightSystem> {
        let file: WeightSystemFile = serde_json::from_str(text).map_err(|e| Error::WeightSystem(e.to_string()))?;
        let space = file.space.unwrap_or(Space::Cmc);
        let expected = engine.quotient(file.degree, space, false)?.basis_keys();
        if file.basis != expected {
            return Err(Error::WeightSystem(format!(
                "basis does not match the canonical degree-{} basis ({} classes)",
                file.degree,
                expected.len()
            )));
        }
        if file.values.len() != expected.len() {
            return Err(Error::WeightSystem("values and basis differ in length".into()));
        }
        let values = file
            .values
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(|e| Error::WeightSystem(format!("bad value `{s}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightSystem { degree: file.degree, space, basis: file.basis, values })
    }
}

/// `W` applied to the quotient coordinates of `v`.
pub fn ws_eval(engine: &Engine, w: &WeightSystem, v: &GraphVector) -> Result<BigRational> {
    let coords = engine.reduce_to_basis(v, w.degree, w.space)?;
    Ok(coords.iter().zip(&w.values).map(|(a, b)| a * b).fold(BigRational::zero(), |acc, x| acc + x))
}

/// The dual product `(W1 W2)(Γ) = Σ W1(Γ1) W2(Γ2)` over the coproduct of Γ.
pub fn ws_product(engine: &Engine, w1: &WeightSystem, w2: &WeightSystem) -> Result<WeightSystem> {
    if w1.space != w2.space {
        return Err(Error::WeightSystem("weight systems live on different spaces".into()));
    }
    let space = w1.space;
    let degree = w1.degree + w2.degree;
    let q = engine.quotient(degree, space, false)?;
    let mut values = Vec::with_capacity(q.dim());
    for i in 0..q.dim() {
        values.push(ws_on_coproduct(engine, w1, w2, &q.basis_vector(i))?);
    }
    WeightSystem::from_values(engine, degree, space, values)
}

/// `Σ c · W1(L) · W2(R)` over the terms of Δ(v) whose legs have the weight
/// systems' degrees.
pub fn ws_on_coproduct(engine: &Engine, w1: &WeightSystem, w2: &WeightSystem, v: &GraphVector) -> Result<BigRational> {
    let mode = w1.space.default_mode();
    let mut total = BigRational::zero();
    for (l, r, c) in coproduct_vec(v, mode).iter() {
        let (gl, gr) = (parse(l), parse(r));
        if gl.degree() != w1.degree || gr.degree() != w2.degree {
            continue;
        }
        let a = ws_eval(engine, w1, &GraphVector::from_key(l))?;
        let b = ws_eval(engine, w2, &GraphVector::from_key(r))?;
        total += c * a * b;
    }
    Ok(total)
}
