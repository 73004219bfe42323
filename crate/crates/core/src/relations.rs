//! IHX relations over a catalog and the resulting quotient.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::canon::{canonicalize, AsMode};
use crate::enumerate::Catalog;
use crate::error::{Error, Result};
use crate::exactla::{echelonize, Echelon, SparseMat, SparseRow};
use crate::graph::{Cell, Graph};
use crate::vector::GraphVector;

/// The four outer legs around an internal edge. With the edge running from
/// vertex `u` to vertex `v`, `u` reads `(A, B, e)` and `v` reads `(e, C, D)`
/// cyclically.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Leg {
    A,
    B,
    C,
    D,
}

/// The three terms of one IHX instance: coefficient, legs at `u` (followed by
/// the edge), legs at `v` (preceded by the edge). The terms are the Jacobi
/// identity `f(a,b,e)f(e,c,d) + f(b,c,e)f(e,a,d) + f(c,a,e)f(e,b,d) = 0` for a
/// totally antisymmetric vertex, i.e. I - H + X after AS.
pub const IHX_TERMS: [(i64, [Leg; 2], [Leg; 2]); 3] =
    [(1, [Leg::A, Leg::B], [Leg::C, Leg::D]), (1, [Leg::B, Leg::C], [Leg::A, Leg::D]), (1, [Leg::C, Leg::A], [Leg::B, Leg::D])];

/// Half-edges `h < partner(h)` of edges joining two distinct trivalent vertices.
pub fn internal_edges(g: &Graph) -> Vec<usize> {
    g.edges()
        .into_iter()
        .filter(|&(a, b)| {
            let (u, v) = (g.cell_of(a), g.cell_of(b));
            u != v && g.cells()[u].is_trivalent() && g.cells()[v].is_trivalent()
        })
        .map(|(a, _)| a)
        .collect()
}

/// The three reconnections of `g` at the internal edge through half-edge `h`,
/// with their coefficients, the first being `g` itself.
pub fn ihx_terms(g: &Graph, h: usize) -> [(i64, Graph); 3] {
    let h2 = g.partner(h);
    let (cu, cv) = (g.cell_of(h), g.cell_of(h2));
    let (Cell::Tri(tu), Cell::Tri(tv)) = (g.cells()[cu], g.cells()[cv]) else {
        panic!("half-edge {h} is not on an internal edge");
    };
    assert_ne!(cu, cv, "half-edge {h} lies on a loop");
    let iu = tu.iter().position(|&x| x == h).unwrap();
    let iv = tv.iter().position(|&x| x == h2).unwrap();
    // u = (a, b, h), v = (h2, c, d)
    let (a, b) = (tu[(iu + 1) % 3], tu[(iu + 2) % 3]);
    let (c, d) = (tv[(iv + 1) % 3], tv[(iv + 2) % 3]);
    let leg = |l: Leg| match l {
        Leg::A => a,
        Leg::B => b,
        Leg::C => c,
        Leg::D => d,
    };
    IHX_TERMS.map(|(coeff, lu, lv)| {
        let mut cells = g.cells().to_vec();
        cells[cu] = Cell::Tri([leg(lu[0]), leg(lu[1]), h]);
        cells[cv] = Cell::Tri([h2, leg(lv[0]), leg(lv[1])]);
        (coeff, Graph::new(cells, &g.edges()).expect("reconnection keeps a valid graph"))
    })
}

/// The IHX instance at one internal edge as a vector of classes.
pub fn ihx_vector(g: &Graph, h: usize, mode: AsMode) -> GraphVector {
    let mut v = GraphVector::new();
    for (c, term) in ihx_terms(g, h) {
        v.add_graph(&term, mode, &BigRational::from_integer(c.into()));
    }
    v
}

/// IHX relation rows over a catalog basis.
#[derive(Clone, Debug)]
pub struct RelationMatrix {
    pub basis: Arc<Catalog>,
    pub matrix: SparseMat,
    /// `(basis index, edge half-edge)` for each row.
    pub provenance: Vec<(usize, usize)>,
}

impl RelationMatrix {
    pub fn to_triples(&self) -> String {
        let b = &self.basis;
        let header = format!(
            "ihx space={} mode={} deg={} connected={} version={}",
            b.space, b.mode, b.degree, b.connected, b.tool_version
        );
        self.matrix.to_triples(&header)
    }
}

/// One row per (basis graph, internal edge). Rows that cancel completely are
/// dropped. In a connected catalog every term stays connected.
pub fn ihx_rows(cat: &Arc<Catalog>) -> Result<RelationMatrix> {
    type Tagged = Vec<((usize, usize), SparseRow)>;
    let per_graph: Vec<Result<Tagged>> = (0..cat.len())
        .into_par_iter()
        .map(|i| {
            let g = cat.graph(i);
            let mut rows = Vec::new();
            for h in internal_edges(&g) {
                let mut row: SparseRow = Vec::with_capacity(3);
                for (c, term) in ihx_terms(&g, h) {
                    let class = canonicalize(&term, cat.mode);
                    if class.zero {
                        continue;
                    }
                    let col = cat.index_of(&class.key).ok_or_else(|| Error::UnknownClass(class.key.clone()))?;
                    row.push((col, BigRational::from_integer((c * class.sign as i64).into())));
                }
                rows.push(((i, h), row));
            }
            Ok(rows)
        })
        .collect();
    let mut provenance = Vec::new();
    let mut rows = Vec::new();
    for r in per_graph {
        for (prov, row) in r? {
            provenance.push(prov);
            rows.push(row);
        }
    }
    let matrix = SparseMat::from_rows(cat.len(), rows);
    let keep: Vec<usize> = (0..matrix.n_rows()).filter(|&r| !matrix.rows()[r].is_empty()).collect();
    let matrix = SparseMat::from_rows(cat.len(), keep.iter().map(|&r| matrix.rows()[r].clone()).collect());
    let provenance = keep.iter().map(|&r| provenance[r]).collect();
    Ok(RelationMatrix { basis: Arc::clone(cat), matrix, provenance })
}

/// A catalog modulo its IHX rows, with the echelon-selected basis.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub relations: RelationMatrix,
    pub echelon: Echelon,
    /// Catalog positions of the basis classes (the non-pivot columns).
    pub basis: Vec<usize>,
}

impl Quotient {
    pub fn new(cat: &Arc<Catalog>) -> Result<Quotient> {
        let relations = ihx_rows(cat)?;
        let echelon = echelonize(&relations.matrix);
        let basis = echelon.free_columns();
        Ok(Quotient { relations, echelon, basis })
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.relations.basis
    }

    pub fn degree(&self) -> usize {
        self.catalog().degree
    }

    pub fn classes(&self) -> usize {
        self.catalog().len()
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_keys(&self) -> Vec<String> {
        self.basis.iter().map(|&i| self.catalog().classes[i].clone()).collect()
    }

    /// Coordinates of `v` in the quotient basis.
    pub fn reduce(&self, v: &GraphVector) -> Result<Vec<BigRational>> {
        let cat = self.catalog();
        let mut dense = vec![BigRational::zero(); cat.len()];
        for (k, c) in v.iter() {
            let d = crate::graph::key_degree(k)?;
            if d != cat.degree {
                return Err(Error::DegreeMismatch { expected: cat.degree, found: d });
            }
            let i = cat.index_of(k).ok_or_else(|| Error::UnknownClass(k.to_string()))?;
            dense[i] += c;
        }
        self.echelon.reduce(&mut dense);
        Ok(self.basis.iter().map(|&i| dense[i].clone()).collect())
    }

    /// The basis class at coordinate `i` as a vector.
    pub fn basis_vector(&self, i: usize) -> GraphVector {
        let mut v = GraphVector::new();
        v.add_key(&self.catalog().classes[self.basis[i]], &BigRational::one());
        v
    }
}
