//! Enumeration of canonical classes by degree, and the catalog file format.
//!
//! Connected classes are grown from a single Y by two moves on the underlying
//! loopless multigraph of trivalent vertices: attach a new trivalent vertex to
//! a free leg, or join two free legs at distinct vertices. Free legs are the
//! univalent vertices. Every connected graph is reached through a spanning
//! tree followed by its remaining edges, so deduplicating each level by
//! canonical key loses nothing. Graphs with a loop at a trivalent vertex are
//! never generated: swapping the two ends of the loop reverses that vertex
//! alone, so they vanish under AS in every mode that has AS. Interval
//! components are never generated either; they vanish under IS, and the
//! trivalent space has none.
//!
//! Full catalogs are products: every multiset of connected classes whose
//! degrees sum to `m`, canonicalized as a disjoint union.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::SystemTime;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonicalize, AsMode};
use crate::error::{Error, Result};
use crate::graph::{Cell, Graph};

/// Bumped whenever the canonical form or enumeration changes.
pub const TOOL_VERSION: &str = concat!("mw-", env!("CARGO_PKG_VERSION"), "+c1");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// Graphs with only trivalent vertices.
    Cmc,
    /// Graphs with trivalent and univalent vertices.
    Ecmc,
}

impl Space {
    pub fn default_mode(&self) -> AsMode {
        match self {
            Space::Cmc => AsMode::Full,
            Space::Ecmc => AsMode::YExempt,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Space::Cmc => "cmc",
            Space::Ecmc => "ecmc",
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Space {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "cmc" => Ok(Space::Cmc),
            "ecmc" => Ok(Space::Ecmc),
            other => Err(format!("unknown space `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    pub degree: usize,
    pub space: Space,
    pub mode: AsMode,
    /// Restricted to connected classes.
    pub connected: bool,
    /// Distinct, sorted, nonzero canonical keys.
    pub classes: Vec<String>,
    pub generated_at: SystemTime,
    pub tool_version: String,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        (self.degree, self.space, self.mode, self.connected, &self.classes, &self.tool_version)
            == (other.degree, other.space, other.mode, other.connected, &other.classes, &other.tool_version)
    }
}

impl Catalog {
    pub fn new(degree: usize, space: Space, mode: AsMode, connected: bool, mut classes: Vec<String>) -> Catalog {
        classes.sort();
        classes.dedup();
        Catalog {
            degree,
            space,
            mode,
            connected,
            classes,
            generated_at: SystemTime::now(),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.classes.binary_search_by(|k| k.as_str().cmp(key)).ok()
    }

    /// The canonical representative of class `i`.
    pub fn graph(&self, i: usize) -> Graph {
        self.classes[i].parse().expect("catalog keys parse")
    }

    pub fn connected_part(&self) -> Catalog {
        let classes = self.classes.iter().filter(|k| self.key_is_connected(k)).cloned().collect();
        Catalog { connected: true, classes, ..self.clone() }
    }

    fn key_is_connected(&self, key: &str) -> bool {
        key.parse::<Graph>().map(|g| g.is_connected()).unwrap_or(false)
    }

    pub fn header(&self) -> String {
        format!("#catalog space={} mode={} deg={} version={}", self.space, self.mode, self.degree, self.tool_version)
    }

    pub fn to_file_string(&self) -> String {
        let mut s = self.header();
        s.push('\n');
        for k in &self.classes {
            s.push_str(k);
            s.push('\n');
        }
        s
    }
}

/// Loopless multigraph on trivalent vertices; free slots are legs.
#[derive(Clone, Debug)]
struct Core {
    t: usize,
    edges: Vec<(usize, usize)>,
}

impl Core {
    fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.t];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    fn to_graph(&self) -> Graph {
        let mut slot = vec![0usize; self.t];
        let mut pairs = Vec::with_capacity(3 * self.t);
        for &(u, v) in &self.edges {
            pairs.push((3 * u + slot[u], 3 * v + slot[v]));
            slot[u] += 1;
            slot[v] += 1;
        }
        let mut cells: Vec<Cell> = (0..self.t).map(|v| Cell::Tri([3 * v, 3 * v + 1, 3 * v + 2])).collect();
        let mut next = 3 * self.t;
        for v in 0..self.t {
            for s in slot[v]..3 {
                cells.push(Cell::Uni(next));
                pairs.push((3 * v + s, next));
                next += 1;
            }
        }
        Graph::new(cells, &pairs).expect("core graphs are valid")
    }

    /// Reads the core back from a graph whose univalent vertices are all legs.
    fn from_graph(g: &Graph) -> Core {
        let mut index = vec![usize::MAX; g.cells().len()];
        let mut t = 0;
        for (ci, c) in g.cells().iter().enumerate() {
            if c.is_trivalent() {
                index[ci] = t;
                t += 1;
            }
        }
        let edges = g
            .edges()
            .into_iter()
            .filter_map(|(a, b)| {
                let (u, v) = (index[g.cell_of(a)], index[g.cell_of(b)]);
                (u != usize::MAX && v != usize::MAX).then_some((u.min(v), u.max(v)))
            })
            .collect();
        Core { t, edges }
    }

    fn children(&self, max_vertices: usize) -> Vec<Core> {
        let deg = self.degrees();
        let mut out = Vec::new();
        if self.t < max_vertices {
            for v in 0..self.t {
                if deg[v] < 3 {
                    let mut edges = self.edges.clone();
                    edges.push((v, self.t));
                    out.push(Core { t: self.t + 1, edges });
                }
            }
        }
        for u in 0..self.t {
            for v in u + 1..self.t {
                if deg[u] < 3 && deg[v] < 3 {
                    let mut edges = self.edges.clone();
                    edges.push((u, v));
                    out.push(Core { t: self.t, edges });
                }
            }
        }
        out
    }
}

/// Nonzero connected classes per degree, for both spaces.
#[derive(Clone, Debug, Default)]
pub struct ConnectedClasses {
    pub max_degree: usize,
    pub cmc: BTreeMap<usize, Vec<String>>,
    pub ecmc: BTreeMap<usize, Vec<String>>,
}

impl ConnectedClasses {
    pub fn of(&self, space: Space, degree: usize) -> &[String] {
        let map = match space {
            Space::Cmc => &self.cmc,
            Space::Ecmc => &self.ecmc,
        };
        map.get(&degree).map_or(&[], |v| v.as_slice())
    }
}

/// Generates every connected class of degree at most `max_degree`.
pub fn connected_classes(max_degree: usize) -> ConnectedClasses {
    let mut out = ConnectedClasses { max_degree, ..Default::default() };
    // degree = 3t - edges >= 3t/2, so no vertex count beyond 2m/3 can matter.
    let max_vertices = 2 * max_degree / 3;
    if max_vertices == 0 {
        return out;
    }
    let seed = Core { t: 1, edges: Vec::new() };
    let seed_class = canonicalize(&seed.to_graph(), AsMode::Full);
    let mut level: HashMap<String, (Core, bool)> = HashMap::from([(seed_class.key, (seed, seed_class.zero))]);
    while !level.is_empty() {
        for (key, (core, zero)) in &level {
            let legs = 3 * core.t - 2 * core.edges.len();
            let degree = 3 * core.t - core.edges.len();
            if degree > max_degree {
                continue;
            }
            // Only a Y survives AS-exemption; any other zero stays zero.
            let y_exempt_zero = *zero && !(core.t == 1 && core.edges.is_empty());
            if legs == 0 && !zero {
                out.cmc.entry(degree).or_default().push(key.clone());
            }
            if !y_exempt_zero {
                out.ecmc.entry(degree).or_default().push(key.clone());
            }
        }
        let states: Vec<&Core> = level.values().map(|(c, _)| c).collect();
        let children: Vec<(String, Core, bool)> = states
            .par_iter()
            .flat_map_iter(|c| c.children(max_vertices))
            .map(|child| {
                let class = canonicalize(&child.to_graph(), AsMode::Full);
                let rep: Graph = class.key.parse().expect("canonical keys parse");
                (class.key, Core::from_graph(&rep), class.zero)
            })
            .collect();
        level = HashMap::with_capacity(children.len());
        for (k, c, z) in children {
            level.entry(k).or_insert((c, z));
        }
    }
    for v in out.cmc.values_mut().chain(out.ecmc.values_mut()) {
        v.sort();
    }
    out
}

/// All classes of degree `m`: multisets of connected classes, canonicalized
/// as disjoint unions. `connected` must cover degree `m`.
pub fn full_classes(m: usize, space: Space, mode: AsMode, connected: &ConnectedClasses) -> Vec<String> {
    assert!(connected.max_degree >= m, "connected classes cover degree {} < {m}", connected.max_degree);
    let pool: Vec<(usize, Graph)> = (1..=m)
        .flat_map(|d| connected.of(space, d).iter().map(move |k| (d, k.parse::<Graph>().expect("canonical keys parse"))))
        .collect();
    let mut found = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    multisets(&pool, m, 0, &mut chosen, &mut |parts| {
        let g = Graph::union_all(parts.iter().map(|&i| &pool[i].1));
        let c = canonicalize(&g, mode);
        if !c.zero {
            found.insert(c.key);
        }
    });
    found.into_iter().collect()
}

fn multisets(
    pool: &[(usize, Graph)],
    remaining: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if remaining == 0 {
        visit(chosen);
        return;
    }
    for i in from..pool.len() {
        if pool[i].0 <= remaining {
            chosen.push(i);
            multisets(pool, remaining - pool[i].0, i, chosen, visit);
            chosen.pop();
        }
    }
}

/// On-disk catalog cache. Files are written to a temporary name and renamed
/// into place.
#[derive(Clone, Debug, Default)]
pub struct CatalogStore {
    dir: Option<PathBuf>,
}

impl CatalogStore {
    pub fn new(dir: Option<PathBuf>) -> CatalogStore {
        CatalogStore { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn path(&self, space: Space, mode: AsMode, degree: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{space}-{mode}-deg{degree}.cat")))
    }

    /// `Ok(None)` when there is no cache or it was written by another version.
    pub fn load(&self, space: Space, mode: AsMode, degree: usize) -> Result<Option<Catalog>> {
        let Some(path) = self.path(space, mode, degree) else { return Ok(None) };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let generated_at = fs::metadata(&path).and_then(|m| m.modified()).unwrap_or_else(|_| SystemTime::now());
        parse_catalog(&text, &path, space, mode, degree).map(|c| c.map(|c| Catalog { generated_at, ..c }))
    }

    pub fn save(&self, cat: &Catalog) -> Result<()> {
        let Some(path) = self.path(cat.space, cat.mode, cat.degree) else { return Ok(()) };
        let dir = path.parent().expect("cache files live in a directory");
        fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(cat.to_file_string().as_bytes())?;
        tmp.persist(&path).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }
}

fn parse_catalog(text: &str, path: &Path, space: Space, mode: AsMode, degree: usize) -> Result<Option<Catalog>> {
    let corrupt = |reason: String| Error::CacheCorrupt { path: path.to_path_buf(), reason };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| corrupt("empty file".into()))?;
    let fields: HashMap<&str, &str> = header
        .strip_prefix("#catalog ")
        .ok_or_else(|| corrupt("missing `#catalog` header".into()))?
        .split(' ')
        .filter_map(|w| w.split_once('='))
        .collect();
    let field = |name: &str| fields.get(name).copied().ok_or_else(|| corrupt(format!("header lacks `{name}`")));
    let version = field("version")?;
    if version != TOOL_VERSION {
        return Ok(None);
    }
    if field("space")? != space.as_str() || field("mode")? != mode.as_str() || field("deg")? != degree.to_string() {
        return Err(corrupt(format!("header `{header}` does not match {space}/{mode}/{degree}")));
    }
    let mut classes: Vec<String> = Vec::new();
    for (i, line) in lines.enumerate() {
        let g: Graph = line.parse().map_err(|e| corrupt(format!("line {}: {e}", i + 2)))?;
        if g.degree() != degree {
            return Err(corrupt(format!("line {}: degree {} in a degree-{degree} catalog", i + 2, g.degree())));
        }
        let c = canonicalize(&g, mode);
        if c.key != line || c.zero {
            return Err(corrupt(format!("line {}: not a nonzero canonical key", i + 2)));
        }
        if classes.last().is_some_and(|prev| prev.as_str() >= line) {
            return Err(corrupt(format!("line {}: keys not strictly increasing", i + 2)));
        }
        classes.push(line.to_string());
    }
    Ok(Some(Catalog {
        degree,
        space,
        mode,
        connected: false,
        classes,
        generated_at: SystemTime::now(),
        tool_version: version.to_string(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{theta, y_graph};

    fn key(g: &Graph, mode: AsMode) -> String {
        canonicalize(g, mode).key
    }

    #[test]
    fn degree_three() {
        let conn = connected_classes(3);
        assert_eq!(conn.of(Space::Cmc, 3), &[key(&theta(), AsMode::Full)]);
        let mut expected = vec![key(&theta(), AsMode::Full), key(&y_graph(), AsMode::YExempt)];
        expected.sort();
        assert_eq!(conn.of(Space::Ecmc, 3), expected.as_slice());
    }

    #[test]
    fn small_full_catalogs() {
        let conn = connected_classes(6);
        assert_eq!(full_classes(0, Space::Cmc, AsMode::Full, &conn), vec!["deg=0;v=;p=".to_string()]);
        assert!(full_classes(4, Space::Cmc, AsMode::Full, &conn).is_empty());
        assert!(full_classes(1, Space::Ecmc, AsMode::YExempt, &conn).is_empty());
        let six = full_classes(6, Space::Cmc, AsMode::Full, &conn);
        assert!(six.contains(&key(&theta().disjoint_union(&theta()), AsMode::Full)));
    }

    #[test]
    fn core_round_trip() {
        let core = Core { t: 2, edges: vec![(0, 1), (0, 1)] };
        let g = core.to_graph();
        assert_eq!((g.trivalent_count(), g.univalent_count(), g.degree()), (2, 2, 4));
        let back = Core::from_graph(&g);
        assert_eq!(back.edges, core.edges);
    }

    #[test]
    fn store_round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let store = CatalogStore::new(Some(dir.path().to_path_buf()));
        assert!(store.load(Space::Cmc, AsMode::Full, 3).unwrap().is_none());
        let cat = Catalog::new(3, Space::Cmc, AsMode::Full, false, vec![key(&theta(), AsMode::Full)]);
        store.save(&cat).unwrap();
        assert_eq!(store.load(Space::Cmc, AsMode::Full, 3).unwrap().unwrap(), cat);

        let path = store.path(Space::Cmc, AsMode::Full, 3).unwrap();
        fs::write(&path, format!("{}\nnot a graph\n", cat.header())).unwrap();
        assert!(matches!(store.load(Space::Cmc, AsMode::Full, 3), Err(Error::CacheCorrupt { .. })));

        fs::write(&path, "#catalog space=cmc mode=full deg=3 version=old\n").unwrap();
        assert!(store.load(Space::Cmc, AsMode::Full, 3).unwrap().is_none());
    }
}
