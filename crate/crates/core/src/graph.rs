//! Half-edge multigraphs with trivalent (cyclically ordered) and univalent
//! vertices.
//!
//! A graph on `H` half-edges is a partition of `0..H` into vertex cells plus
//! a fixed-point-free involution pairing half-edges into edges. A trivalent
//! cell stores its half-edges in cyclic order: rotations of the stored triple
//! denote the same vertex, reversal does not. Loops and parallel edges are
//! allowed.

use std::fmt;
use std::str::FromStr;

use crate::error::GraphError;

/// One vertex of a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    /// A trivalent vertex; the triple is read cyclically.
    Tri([usize; 3]),
    /// A univalent vertex.
    Uni(usize),
}

impl Cell {
    pub fn half_edges(&self) -> &[usize] {
        match self {
            Cell::Tri(t) => t,
            Cell::Uni(h) => std::slice::from_ref(h),
        }
    }

    pub fn is_trivalent(&self) -> bool {
        matches!(self, Cell::Tri(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    cells: Vec<Cell>,
    partner: Vec<usize>,
    cell_of: Vec<usize>,
}

/// Builds a graph from vertex cells (sizes 1 or 3) and an edge list.
pub fn make_graph(vertex_cells: &[Vec<usize>], pairing: &[(usize, usize)]) -> Result<Graph, GraphError> {
    let cells = vertex_cells
        .iter()
        .map(|c| match c.as_slice() {
            [a] => Ok(Cell::Uni(*a)),
            [a, b, c] => Ok(Cell::Tri([*a, *b, *c])),
            other => Err(GraphError::BadCellSize(other.len())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Graph::new(cells, pairing)
}

impl Graph {
    pub fn new(cells: Vec<Cell>, pairing: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let h: usize = cells.iter().map(|c| c.half_edges().len()).sum();
        const NONE: usize = usize::MAX;
        let mut cell_of = vec![NONE; h];
        for (ci, cell) in cells.iter().enumerate() {
            for &x in cell.half_edges() {
                if x >= h {
                    return Err(GraphError::OutOfRange(x, h));
                }
                if cell_of[x] != NONE {
                    return Err(GraphError::OverlappingCells(x));
                }
                cell_of[x] = ci;
            }
        }
        let mut partner = vec![NONE; h];
        for &(a, b) in pairing {
            if a >= h || b >= h {
                return Err(GraphError::OutOfRange(a.max(b), h));
            }
            if a == b {
                return Err(GraphError::SelfPaired(a));
            }
            for x in [a, b] {
                if partner[x] != NONE {
                    return Err(GraphError::DoublyPaired(x));
                }
            }
            partner[a] = b;
            partner[b] = a;
        }
        if let Some(x) = partner.iter().position(|&p| p == NONE) {
            return Err(GraphError::DanglingHalfEdge(x));
        }
        Ok(Graph { cells, partner, cell_of })
    }

    pub fn empty() -> Graph {
        Graph { cells: Vec::new(), partner: Vec::new(), cell_of: Vec::new() }
    }

    pub fn half_edge_count(&self) -> usize {
        self.partner.len()
    }

    /// Number of edges.
    pub fn degree(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn partner(&self, h: usize) -> usize {
        self.partner[h]
    }

    pub fn cell_of(&self, h: usize) -> usize {
        self.cell_of[h]
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn trivalent_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_trivalent()).count()
    }

    pub fn univalent_count(&self) -> usize {
        self.cells.len() - self.trivalent_count()
    }

    /// Edges as `(h, partner(h))` with `h < partner(h)`, ordered by `h`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.partner.len())
            .filter(|&h| h < self.partner[h])
            .map(|h| (h, self.partner[h]))
            .collect()
    }

    /// The same graph with the cyclic order at trivalent cell `cell` reversed.
    pub fn reversed_at(&self, cell: usize) -> Graph {
        let mut g = self.clone();
        if let Cell::Tri([a, b, c]) = g.cells[cell] {
            g.cells[cell] = Cell::Tri([a, c, b]);
        }
        g
    }

    /// Relabels half-edges by `perm` (old id -> new id), keeping cell order.
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        let cells = self
            .cells
            .iter()
            .map(|c| match *c {
                Cell::Tri([a, b, c]) => Cell::Tri([perm[a], perm[b], perm[c]]),
                Cell::Uni(a) => Cell::Uni(perm[a]),
            })
            .collect::<Vec<_>>();
        let pairs: Vec<_> = self.edges().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
        Graph::new(cells, &pairs).expect("relabeling by a permutation preserves validity")
    }

    /// Rotates the stored triple of trivalent cell `cell` by `k` steps.
    pub fn rotated_at(&self, cell: usize, k: usize) -> Graph {
        let mut g = self.clone();
        if let Cell::Tri(t) = &mut g.cells[cell] {
            t.rotate_left(k % 3);
        }
        g
    }

    /// Component index of every cell, numbered by first appearance in cell order.
    pub fn component_of_cells(&self) -> (usize, Vec<usize>) {
        const NONE: usize = usize::MAX;
        let mut comp = vec![NONE; self.cells.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..self.cells.len() {
            if comp[start] != NONE {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(c) = stack.pop() {
                for &h in self.cells[c].half_edges() {
                    let d = self.cell_of[self.partner[h]];
                    if comp[d] == NONE {
                        comp[d] = count;
                        stack.push(d);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn component_count(&self) -> usize {
        self.component_of_cells().0
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Connected components, ordered by their lowest half-edge id. Half-edges
    /// are renumbered in increasing order of their old ids; cell order and
    /// cyclic orders are preserved.
    pub fn components(&self) -> Vec<Graph> {
        let (count, comp) = self.component_of_cells();
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (ci, &k) in comp.iter().enumerate() {
            groups[k].push(ci);
        }
        let mut out: Vec<(usize, Graph)> = groups
            .into_iter()
            .map(|cell_ids| {
                let mut hs: Vec<usize> =
                    cell_ids.iter().flat_map(|&c| self.cells[c].half_edges().iter().copied()).collect();
                hs.sort_unstable();
                let mut new_id = std::collections::HashMap::with_capacity(hs.len());
                for (i, &h) in hs.iter().enumerate() {
                    new_id.insert(h, i);
                }
                let cells = cell_ids
                    .iter()
                    .map(|&c| match self.cells[c] {
                        Cell::Tri([a, b, c]) => Cell::Tri([new_id[&a], new_id[&b], new_id[&c]]),
                        Cell::Uni(a) => Cell::Uni(new_id[&a]),
                    })
                    .collect();
                let pairs: Vec<_> = hs
                    .iter()
                    .filter(|&&h| h < self.partner[h])
                    .map(|&h| (new_id[&h], new_id[&self.partner[h]]))
                    .collect();
                (hs[0], Graph::new(cells, &pairs).expect("component of a valid graph"))
            })
            .collect();
        out.sort_by_key(|(min, _)| *min);
        out.into_iter().map(|(_, g)| g).collect()
    }

    /// Disjoint union; the half-edges of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.half_edge_count();
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().map(|c| match *c {
            Cell::Tri([a, b, c]) => Cell::Tri([a + off, b + off, c + off]),
            Cell::Uni(a) => Cell::Uni(a + off),
        }));
        let mut partner = self.partner.clone();
        partner.extend(other.partner.iter().map(|p| p + off));
        let mut cell_of = self.cell_of.clone();
        cell_of.extend(other.cell_of.iter().map(|c| c + self.cells.len()));
        Graph { cells, partner, cell_of }
    }

    pub fn union_all<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> Graph {
        graphs.into_iter().fold(Graph::empty(), |acc, g| acc.disjoint_union(g))
    }

    /// True for a single trivalent vertex with three legs.
    pub fn is_y(&self) -> bool {
        self.trivalent_count() == 1
            && self.univalent_count() == 3
            && self.cells.iter().all(|c| match c {
                Cell::Tri(t) => t.iter().all(|&h| !self.cells[self.cell_of[self.partner[h]]].is_trivalent()),
                Cell::Uni(_) => true,
            })
    }

    /// True for a single edge between two univalent vertices.
    pub fn is_interval(&self) -> bool {
        self.cells.len() == 2 && self.univalent_count() == 2
    }

    /// True if some connected component is an interval.
    pub fn has_interval_component(&self) -> bool {
        self.cells.iter().any(|c| match *c {
            Cell::Uni(h) => matches!(self.cells[self.cell_of[self.partner[h]]], Cell::Uni(_)),
            Cell::Tri(_) => false,
        })
    }

    /// Serializes this labeled graph in the text format used for canonical
    /// keys. Cells are written in stored order, pairs sorted.
    pub fn to_text(&self) -> String {
        let mut s = format!("deg={};v=", self.degree());
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                s.push('|');
            }
            match c {
                Cell::Tri([a, b, c]) => s.push_str(&format!("({a},{b},{c})")),
                Cell::Uni(a) => s.push_str(&format!("({a})")),
            }
        }
        s.push_str(";p=");
        let pairs: Vec<String> = self.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        s.push_str(&pairs.join(","));
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Reads the `deg=` field of a graph text line without parsing the rest.
pub fn key_degree(key: &str) -> Result<usize, GraphError> {
    let rest = key.strip_prefix("deg=").ok_or_else(|| GraphError::Parse("missing `deg=`".into()))?;
    let end = rest.find(';').ok_or_else(|| GraphError::Parse("missing `;` after degree".into()))?;
    rest[..end].parse().map_err(|_| GraphError::Parse(format!("bad degree `{}`", &rest[..end])))
}

fn parse_num(s: &str) -> Result<usize, GraphError> {
    s.parse().map_err(|_| GraphError::Parse(format!("bad half-edge id `{s}`")))
}

impl FromStr for Graph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Graph, GraphError> {
        let deg = key_degree(s)?;
        let mut parts = s.split(';');
        parts.next();
        let v = parts
            .next()
            .and_then(|p| p.strip_prefix("v="))
            .ok_or_else(|| GraphError::Parse("missing `v=` section".into()))?;
        let p = parts
            .next()
            .and_then(|p| p.strip_prefix("p="))
            .ok_or_else(|| GraphError::Parse("missing `p=` section".into()))?;
        if parts.next().is_some() {
            return Err(GraphError::Parse("trailing section".into()));
        }
        let mut cells = Vec::new();
        if !v.is_empty() {
            for cell in v.split('|') {
                let inner = cell
                    .strip_prefix('(')
                    .and_then(|c| c.strip_suffix(')'))
                    .ok_or_else(|| GraphError::Parse(format!("bad cell `{cell}`")))?;
                let ids = inner.split(',').map(parse_num).collect::<Result<Vec<_>, _>>()?;
                cells.push(ids);
            }
        }
        let mut pairs = Vec::new();
        if !p.is_empty() {
            for pair in p.split(',') {
                let (a, b) = pair.split_once('-').ok_or_else(|| GraphError::Parse(format!("bad pair `{pair}`")))?;
                pairs.push((parse_num(a)?, parse_num(b)?));
            }
        }
        let g = make_graph(&cells, &pairs)?;
        if g.degree() != deg {
            return Err(GraphError::Parse(format!("declared degree {deg} but graph has {} edges", g.degree())));
        }
        Ok(g)
    }
}

/// The Θ graph: two trivalent vertices joined by three edges.
pub fn theta() -> Graph {
    make_graph(&[vec![0, 1, 2], vec![3, 4, 5]], &[(0, 3), (1, 4), (2, 5)]).unwrap()
}

/// The Y graph: one trivalent vertex with three legs.
pub fn y_graph() -> Graph {
    make_graph(&[vec![0, 1, 2], vec![3], vec![4], vec![5]], &[(0, 3), (1, 4), (2, 5)]).unwrap()
}

/// The single-edge interval.
pub fn interval() -> Graph {
    make_graph(&[vec![0], vec![1]], &[(0, 1)]).unwrap()
}
