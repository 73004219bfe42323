//! Signed canonical labeling.
//!
//! Each connected component is labeled by a breadth-first traversal driven by
//! two permutations of its half-edges: the cyclic successor at each vertex and
//! the edge pairing. Together they act transitively on a connected component,
//! so a start half-edge plus an orientation choice at every trivalent vertex
//! determines the whole labeling, and the sequence of (successor, partner)
//! labels is a complete invariant of the oriented, rooted component. The
//! canonical form is the lexicographically least such code over all starts and
//! all orientation choices, found by branch and bound.
//!
//! Two optimal leaves whose orientation choices differ by an odd number of
//! reversals witness an automorphism that reverses an odd number of vertices;
//! such a graph equals its own negative under AS and is reported as zero.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Cell, Graph};

/// Which trivalent vertices carry the AS sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsMode {
    /// Every trivalent vertex is AS-active.
    Full,
    /// Vertices of Y components are AS-inactive; all others are active.
    YExempt,
    /// No AS at all: classes are isomorphism classes of oriented graphs.
    Raw,
}

impl AsMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            AsMode::Full => "full",
            AsMode::YExempt => "y_exempt",
            AsMode::Raw => "raw",
        }
    }
}

impl fmt::Display for AsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AsMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "full" => Ok(AsMode::Full),
            "y_exempt" => Ok(AsMode::YExempt),
            "raw" => Ok(AsMode::Raw),
            other => Err(format!("unknown AS mode `{other}`")),
        }
    }
}

/// The image of a graph in the AS-quotient basis.
///
/// `sign` is meaningless when `zero` is set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedClass {
    pub key: String,
    pub sign: i8,
    pub zero: bool,
}

impl SignedClass {
    /// `sign` as a coefficient, or 0 for a zero class.
    pub fn coefficient(&self) -> i64 {
        if self.zero {
            0
        } else {
            self.sign as i64
        }
    }
}

const NONE: u32 = u32::MAX;

/// One connected component in local half-edge numbering.
struct Component {
    n: usize,
    succ: Vec<u32>,
    pred: Vec<u32>,
    partner: Vec<u32>,
    vertex: Vec<u32>,
    trivalent: Vec<bool>,
    starts: Vec<u32>,
}

impl Component {
    fn from_graph(g: &Graph) -> Component {
        let n = g.half_edge_count();
        let mut succ = vec![0u32; n];
        let mut pred = vec![0u32; n];
        let mut vertex = vec![0u32; n];
        let mut trivalent = Vec::with_capacity(g.cells().len());
        for (ci, cell) in g.cells().iter().enumerate() {
            match *cell {
                Cell::Tri([a, b, c]) => {
                    succ[a] = b as u32;
                    succ[b] = c as u32;
                    succ[c] = a as u32;
                    pred[b] = a as u32;
                    pred[c] = b as u32;
                    pred[a] = c as u32;
                    for h in [a, b, c] {
                        vertex[h] = ci as u32;
                    }
                    trivalent.push(true);
                }
                Cell::Uni(a) => {
                    succ[a] = a as u32;
                    pred[a] = a as u32;
                    vertex[a] = ci as u32;
                    trivalent.push(false);
                }
            }
        }
        let partner: Vec<u32> = (0..n).map(|h| g.partner(h) as u32).collect();

        // Restrict start half-edges to the smallest class of an
        // isomorphism-invariant, orientation-independent statistic.
        let starts = if trivalent.iter().any(|&t| t) {
            let legs = |v: usize| {
                g.cells()[v].half_edges().iter().filter(|&&h| !trivalent[vertex[partner[h] as usize] as usize]).count()
            };
            let loops = |v: usize| {
                g.cells()[v].half_edges().iter().filter(|&&h| vertex[partner[h] as usize] as usize == v).count()
            };
            let mult = |h: usize| {
                let (u, w) = (vertex[h], vertex[partner[h] as usize]);
                g.cells()[u as usize].half_edges().iter().filter(|&&x| vertex[partner[x] as usize] == w).count()
            };
            let invariant = |h: usize| {
                let v = vertex[h] as usize;
                let far = vertex[partner[h] as usize] as usize;
                (legs(v), loops(v), mult(h), !trivalent[far])
            };
            let cands: Vec<usize> = (0..n).filter(|&h| trivalent[vertex[h] as usize]).collect();
            let best = cands.iter().map(|&h| invariant(h)).min().unwrap();
            cands.into_iter().filter(|&h| invariant(h) == best).map(|h| h as u32).collect()
        } else {
            (0..n as u32).collect()
        };
        Component { n, succ, pred, partner, vertex, trivalent, starts }
    }
}

struct Best {
    code: Vec<(u32, u32)>,
    order: Vec<u32>,
    orient: Vec<i8>,
    parity: u32,
}

struct Search<'a> {
    comp: &'a Component,
    flexible: bool,
    label: Vec<u32>,
    order: Vec<u32>,
    orient: Vec<i8>,
    flips: u32,
    code: Vec<(u32, u32)>,
    best: Option<Best>,
    strict_from: Option<usize>,
    odd: bool,
}

impl<'a> Search<'a> {
    fn new(comp: &'a Component, flexible: bool) -> Self {
        Search {
            comp,
            flexible,
            label: vec![NONE; comp.n],
            order: Vec::with_capacity(comp.n),
            orient: vec![0; comp.trivalent.len()],
            flips: 0,
            code: Vec::with_capacity(comp.n),
            best: None,
            strict_from: None,
            odd: false,
        }
    }

    fn run(mut self) -> Best {
        for i in 0..self.comp.starts.len() {
            let s = self.comp.starts[i];
            self.label[s as usize] = 0;
            self.order.push(s);
            self.step(0);
            self.order.clear();
            self.label[s as usize] = NONE;
        }
        let mut best = self.best.expect("every component has a start half-edge");
        if self.odd {
            best.parity = u32::MAX;
        }
        best
    }

    fn step(&mut self, pos: usize) {
        if pos == self.comp.n {
            self.leaf();
            return;
        }
        let h = self.order[pos] as usize;
        let v = self.comp.vertex[h] as usize;
        if self.comp.trivalent[v] && self.orient[v] == 0 {
            self.orient[v] = 1;
            self.emit(pos);
            if self.flexible {
                self.orient[v] = -1;
                self.flips += 1;
                self.emit(pos);
                self.flips -= 1;
            }
            self.orient[v] = 0;
        } else {
            self.emit(pos);
        }
    }

    fn assign(&mut self, h: u32) {
        if self.label[h as usize] == NONE {
            self.label[h as usize] = self.order.len() as u32;
            self.order.push(h);
        }
    }

    fn emit(&mut self, pos: usize) {
        let c = self.comp;
        let h = self.order[pos] as usize;
        let v = c.vertex[h] as usize;
        let s = if !c.trivalent[v] || self.orient[v] > 0 { c.succ[h] } else { c.pred[h] };
        let a = c.partner[h];
        let mark = self.order.len();
        self.assign(s);
        self.assign(a);
        let entry = (self.label[s as usize], self.label[a as usize]);
        let proceed = match (&self.best, self.strict_from) {
            (Some(best), None) => match entry.cmp(&best.code[pos]) {
                Ordering::Greater => false,
                Ordering::Less => {
                    self.strict_from = Some(pos);
                    true
                }
                Ordering::Equal => true,
            },
            _ => true,
        };
        if proceed {
            self.code.push(entry);
            self.step(pos + 1);
            self.code.pop();
            if self.strict_from == Some(pos) {
                self.strict_from = None;
            }
        }
        for &x in &self.order[mark..] {
            self.label[x as usize] = NONE;
        }
        self.order.truncate(mark);
    }

    fn leaf(&mut self) {
        let parity = self.flips % 2;
        match &self.best {
            Some(best) if self.strict_from.is_none() => {
                if best.parity != parity {
                    self.odd = true;
                }
            }
            _ => {
                self.best = Some(Best {
                    code: self.code.clone(),
                    order: self.order.clone(),
                    orient: self.orient.clone(),
                    parity,
                });
                self.strict_from = None;
            }
        }
    }
}

/// Canonical form of one component.
struct CanonicalComponent {
    code: Vec<(u32, u32)>,
    trivalent: usize,
    /// Pairs in the canonical local numbering (trivalent cells occupy
    /// `3k..3k+3`, univalent cells follow).
    pairs: Vec<(usize, usize)>,
    n: usize,
    sign: i8,
    zero: bool,
}

fn canonical_component(g: &Graph, mode: AsMode) -> CanonicalComponent {
    let comp = Component::from_graph(g);
    let exempt = mode == AsMode::YExempt && g.is_y();
    let flexible = mode != AsMode::Raw && !exempt;
    let best = Search::new(&comp, flexible).run();

    let nv = comp.trivalent.len();
    let mut new_id = vec![usize::MAX; comp.n];
    let mut seen = vec![false; nv];
    let tri_total = comp.trivalent.iter().filter(|&&t| t).count();
    let (mut next_tri, mut next_uni) = (0usize, 3 * tri_total);
    for &h in &best.order {
        let v = comp.vertex[h as usize] as usize;
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if comp.trivalent[v] {
            let step = |x: u32| if best.orient[v] > 0 { comp.succ[x as usize] } else { comp.pred[x as usize] };
            let h1 = step(h);
            let h2 = step(h1);
            new_id[h as usize] = next_tri;
            new_id[h1 as usize] = next_tri + 1;
            new_id[h2 as usize] = next_tri + 2;
            next_tri += 3;
        } else {
            new_id[h as usize] = next_uni;
            next_uni += 1;
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..comp.n)
        .filter(|&h| h < comp.partner[h] as usize)
        .map(|h| {
            let (a, b) = (new_id[h], new_id[comp.partner[h] as usize]);
            (a.min(b), a.max(b))
        })
        .collect();
    pairs.sort_unstable();
    let zero = flexible && best.parity == u32::MAX;
    let sign = if !flexible || best.parity == 0 || zero { 1 } else { -1 };
    CanonicalComponent { code: best.code, trivalent: tri_total, pairs, n: comp.n, sign, zero }
}

/// Canonical key and AS sign of `g`.
pub fn canonicalize(g: &Graph, mode: AsMode) -> SignedClass {
    let mut comps: Vec<CanonicalComponent> =
        g.components().iter().map(|c| canonical_component(c, mode)).collect();
    comps.sort_by(|a, b| (a.n, &a.code).cmp(&(b.n, &b.code)));

    let zero = comps.iter().any(|c| c.zero);
    let sign = comps.iter().map(|c| c.sign).product::<i8>();

    let mut cells = Vec::new();
    let mut pairs = Vec::new();
    let mut off = 0;
    for c in &comps {
        for k in 0..c.trivalent {
            let b = off + 3 * k;
            cells.push(format!("({},{},{})", b, b + 1, b + 2));
        }
        for u in 3 * c.trivalent..c.n {
            cells.push(format!("({})", off + u));
        }
        pairs.extend(c.pairs.iter().map(|&(a, b)| format!("{}-{}", a + off, b + off)));
        off += c.n;
    }
    let key = format!("deg={};v={};p={}", g.degree(), cells.join("|"), pairs.join(","));
    SignedClass { key, sign: if zero { 1 } else { sign }, zero }
}

/// Relative AS sign between two graphs of the same nonzero class.
pub fn is_isomorphic(g1: &Graph, g2: &Graph, mode: AsMode) -> Option<i8> {
    let a = canonicalize(g1, mode);
    let b = canonicalize(g2, mode);
    (a.key == b.key && !a.zero && !b.zero).then_some(a.sign * b.sign)
}

/// The canonical representative of the class of `g`.
pub fn representative(g: &Graph, mode: AsMode) -> (SignedClass, Graph) {
    let c = canonicalize(g, mode);
    let rep = c.key.parse().expect("canonical keys parse");
    (c, rep)
}
