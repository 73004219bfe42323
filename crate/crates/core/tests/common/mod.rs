//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! canonicalizer unless stated.

#![allow(dead_code)]

use std::collections::BTreeMap;

use mw_core::canon::AsMode;
use mw_core::graph::{make_graph, Cell, Graph};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Every perfect matching of `0..n`.
pub fn matchings(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(free: &mut Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(acc.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            acc.push((a, b));
            go(free, acc, out);
            acc.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Every graph with `t` trivalent cells `(0,1,2), (3,4,5), ...` followed by
/// `u` univalent cells, one per perfect matching of the half-edges.
pub fn graphs_with(t: usize, u: usize) -> Vec<Graph> {
    let h = 3 * t + u;
    let mut cells: Vec<Vec<usize>> = (0..t).map(|i| vec![3 * i, 3 * i + 1, 3 * i + 2]).collect();
    cells.extend((3 * t..h).map(|i| vec![i]));
    matchings(h).into_iter().map(|p| make_graph(&cells, &p).unwrap()).collect()
}

/// Every labeled graph of degree `m`; with `trivalent_only`, no univalent cells.
pub fn all_graphs(m: usize, trivalent_only: bool) -> Vec<Graph> {
    let mut out = Vec::new();
    for t in 0..=(2 * m / 3) {
        let u = 2 * m - 3 * t;
        if trivalent_only && u != 0 {
            continue;
        }
        out.extend(graphs_with(t, u));
    }
    out
}

/// Whether some component is a single edge between two univalent cells.
pub fn has_interval(g: &Graph) -> bool {
    g.cells().iter().any(|c| match *c {
        Cell::Uni(h) => matches!(g.cells()[g.cell_of(g.partner(h))], Cell::Uni(_)),
        _ => false,
    })
}

/// Whether a trivalent cell counts reversals under `mode`. Under `Raw`
/// orientations are rigid and reversals are not allowed at all.
fn active(g: &Graph, cell: usize, mode: AsMode) -> bool {
    match (mode, g.cells()[cell]) {
        (AsMode::Raw, _) => false,
        (AsMode::Full, Cell::Tri(_)) => true,
        (AsMode::YExempt, Cell::Tri(t)) => !t.iter().all(|&h| matches!(g.cells()[g.cell_of(g.partner(h))], Cell::Uni(_))),
        (_, Cell::Uni(_)) => false,
    }
}

#[derive(Clone)]
struct State {
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    odd: bool,
}

/// Parities of the reversal counts over all isomorphisms `g1 -> g2`:
/// `(some even, some odd)`. `(false, false)` means not isomorphic.
pub fn iso_parities(g1: &Graph, g2: &Graph, mode: AsMode) -> (bool, bool) {
    let mut found = (false, false);
    if g1.half_edge_count() != g2.half_edge_count()
        || g1.trivalent_count() != g2.trivalent_count()
        || g1.univalent_count() != g2.univalent_count()
    {
        return found;
    }
    let n = g1.half_edge_count();
    let state = State { map: vec![None; n], used: vec![false; n], odd: false };
    search(g1, g2, mode, state, &mut found);
    found
}

fn search(g1: &Graph, g2: &Graph, mode: AsMode, state: State, found: &mut (bool, bool)) {
    if found.0 && found.1 {
        return;
    }
    let Some(h) = state.map.iter().position(Option::is_none) else {
        if state.odd {
            found.1 = true;
        } else {
            found.0 = true;
        }
        return;
    };
    for target in 0..g2.half_edge_count() {
        if !state.used[target] {
            propagate(g1, g2, mode, state.clone(), vec![(h, target)], found);
        }
    }
}

fn propagate(g1: &Graph, g2: &Graph, mode: AsMode, mut s: State, mut pending: Vec<(usize, usize)>, found: &mut (bool, bool)) {
    while let Some((a, b)) = pending.pop() {
        match s.map[a] {
            Some(x) if x == b => continue,
            Some(_) => return,
            None if s.used[b] => return,
            None => {}
        }
        let (ca, cb) = (g1.cells()[g1.cell_of(a)], g2.cells()[g2.cell_of(b)]);
        match (ca, cb) {
            (Cell::Uni(_), Cell::Uni(_)) => {
                s.map[a] = Some(b);
                s.used[b] = true;
                pending.push((g1.partner(a), g2.partner(b)));
            }
            (Cell::Tri(ta), Cell::Tri(tb)) => {
                let i = ta.iter().position(|&x| x == a).unwrap();
                let j = tb.iter().position(|&x| x == b).unwrap();
                let flip = active(g1, g1.cell_of(a), mode);
                for reflect in [false, true] {
                    if reflect && mode == AsMode::Raw {
                        continue;
                    }
                    let mut s2 = s.clone();
                    let mut p2 = pending.clone();
                    let mut ok = true;
                    for k in 0..3 {
                        let src = ta[(i + k) % 3];
                        let dst = if reflect { tb[(j + 3 - k) % 3] } else { tb[(j + k) % 3] };
                        if s2.map[src].is_some() || s2.used[dst] {
                            ok = false;
                            break;
                        }
                        s2.map[src] = Some(dst);
                        s2.used[dst] = true;
                        p2.push((g1.partner(src), g2.partner(dst)));
                    }
                    if !ok {
                        continue;
                    }
                    if reflect && flip {
                        s2.odd = !s2.odd;
                    }
                    propagate(g1, g2, mode, s2, p2, found);
                }
                return;
            }
            _ => return,
        }
    }
    search(g1, g2, mode, s, found);
}

/// Whether `g` has an automorphism reversing an odd number of active vertices.
pub fn oracle_zero(g: &Graph, mode: AsMode) -> bool {
    iso_parities(g, g, mode).1
}

/// The three Jacobi terms at the edge through half-edge `h`, built directly:
/// with `u = (a, b, e)` and `v = (e', c, d)` the terms rewire the four legs as
/// `(a,b|c,d)`, `(b,c|a,d)`, `(c,a|b,d)`.
pub fn jacobi_terms(g: &Graph, h: usize) -> Vec<Graph> {
    let h2 = g.partner(h);
    let (cu, cv) = (g.cell_of(h), g.cell_of(h2));
    let (Cell::Tri(tu), Cell::Tri(tv)) = (g.cells()[cu], g.cells()[cv]) else { unreachable!() };
    let rot = |t: [usize; 3], x: usize| {
        let i = t.iter().position(|&y| y == x).unwrap();
        [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
    };
    let [_, a, b] = rot(tu, h);
    let [_, c, d] = rot(tv, h2);
    [([a, b], [c, d]), ([b, c], [a, d]), ([c, a], [b, d])]
        .into_iter()
        .map(|(x, y)| {
            let cells: Vec<Vec<usize>> = g
                .cells()
                .iter()
                .enumerate()
                .map(|(i, cell)| {
                    if i == cu {
                        vec![x[0], x[1], h]
                    } else if i == cv {
                        vec![h2, y[0], y[1]]
                    } else {
                        cell.half_edges().to_vec()
                    }
                })
                .collect();
            make_graph(&cells, &g.edges()).unwrap()
        })
        .collect()
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = BigRational::one() / rows[rank][col].clone();
        let pivot: Vec<BigRational> = rows[rank].iter().map(|x| x * &inv).collect();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..n_cols {
                    let d = &pivot[c] * &f;
                    rows[r][c] -= d;
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Dimension of span(all graphs)/{AS, IHX(, IS)} in degree `m`, built from
/// every labeled graph rather than from catalog representatives. Classes are
/// identified by canonical key.
pub fn brute_quotient_dim(m: usize, trivalent_only: bool, connected_only: bool, mode: AsMode) -> (usize, usize) {
    use mw_core::canon::canonicalize;
    let graphs: Vec<Graph> = all_graphs(m, trivalent_only)
        .into_iter()
        .filter(|g| !has_interval(g) && (!connected_only || g.is_connected()))
        .collect();
    let mut index = BTreeMap::new();
    for g in &graphs {
        let c = canonicalize(g, mode);
        if !c.zero {
            let n = index.len();
            index.entry(c.key).or_insert(n);
        }
    }
    let n = index.len();
    let mut rows = Vec::new();
    for g in &graphs {
        for (a, b) in g.edges() {
            let (u, v) = (g.cell_of(a), g.cell_of(b));
            if u == v || !g.cells()[u].is_trivalent() || !g.cells()[v].is_trivalent() {
                continue;
            }
            let mut row = vec![BigRational::zero(); n];
            for term in jacobi_terms(g, a) {
                let c = canonicalize(&term, mode);
                if !c.zero {
                    row[index[&c.key]] += BigRational::from_integer(c.sign.into());
                }
            }
            rows.push(row);
        }
    }
    let rank = dense_rank(rows);
    (n, n - rank)
}
