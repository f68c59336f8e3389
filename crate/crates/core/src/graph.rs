//! Level-M approximation graphs under a root cell.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::address::Address;
use crate::cells::Cell;
use crate::engine::{EquivalenceClass, RuleEngine};
use crate::error::{Error, Result};

/// Largest number of leaf cells `build_graph` will materialize.
pub const MAX_CELLS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphMode {
    /// Nodes are vertex classes; edges join vertices of a common cell.
    Vertex,
    /// Nodes are leaf cells; edges join adjacent cells.
    Cell,
}

impl fmt::Display for GraphMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphMode::Vertex => "vertex",
            GraphMode::Cell => "cell",
        })
    }
}

impl FromStr for GraphMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vertex" => Ok(GraphMode::Vertex),
            "cell" => Ok(GraphMode::Cell),
            _ => Err(format!(
                "unknown graph mode {s:?} (expected vertex or cell)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeRepr {
    Class(EquivalenceClass),
    Cell(Cell),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphNode {
    pub id: usize,
    pub repr: NodeRepr,
}

impl GraphNode {
    pub fn label(&self, n_parts: u32) -> String {
        match &self.repr {
            NodeRepr::Class(c) => c.representative().format(n_parts),
            NodeRepr::Cell(c) => c.format(n_parts),
        }
    }

    pub fn members(&self, n_parts: u32) -> Vec<String> {
        match &self.repr {
            NodeRepr::Class(c) => c.members().iter().map(|a| a.format(n_parts)).collect(),
            NodeRepr::Cell(_) => Vec::new(),
        }
    }
}

/// Graph of a level-M approximation. Node ids are dense and follow the sorted
/// order of representatives (vertex mode) or cell words (cell mode); edges are
/// sorted pairs `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelGraph {
    pub mode: GraphMode,
    pub level: u32,
    pub root: Cell,
    pub n_parts: u32,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<(usize, usize)>,
}

impl LevelGraph {
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.nodes.len());
        for &(i, j) in &self.edges {
            uf.union(i, j);
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }
}

/// Connectivity probe: `(connected, component count)`.
pub fn graph_connected(g: &LevelGraph) -> (bool, usize) {
    let count = g.component_count();
    (count == 1, count)
}

fn check_root(root: &Cell, level: u32, engine: &RuleEngine<'_>) -> Result<()> {
    let spec = engine.spec();
    let n = spec.n_parts();
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    if (n as u64).checked_pow(level).is_none_or(|c| c > MAX_CELLS) {
        return Err(Error::SizeLimitExceeded { level, n_parts: n });
    }
    if let Some(&digit) = root.word().iter().find(|&&d| d >= n) {
        return Err(Error::DigitOutOfRange { digit, n_parts: n });
    }
    let outside = |reason: String| Error::CellOutsideSpace {
        cell: root.format(n),
        space: spec.name().to_string(),
        reason,
    };
    if let Some(k) = spec.left_limit() {
        let top = root.top_position();
        let too_high = root
            .word()
            .iter()
            .enumerate()
            .any(|(j, &d)| d != 0 && top - j as i64 >= k as i64);
        if too_high {
            return Err(outside(format!(
                "digits above position {} are not allowed",
                k as i64 - 1
            )));
        }
    }
    if let Some(r) = spec.right_limit() {
        let finest = root.scale() - level as i64;
        if finest < -(r as i64) {
            return Err(outside(format!(
                "level {level} resolves position {finest}, below the finest position {}",
                -(r as i64)
            )));
        }
    }
    Ok(())
}

/// Builds the level-`level` graph of the `N^level` descendants of `root`.
pub fn build_graph(
    engine: &RuleEngine<'_>,
    root: &Cell,
    level: u32,
    mode: GraphMode,
) -> Result<LevelGraph> {
    check_root(root, level, engine)?;
    let n = engine.spec().n_parts();
    let leaves = root.descendants(n, level);

    // representative of every vertex point, shared across cells
    let mut rep_of: HashMap<Address, Address> = HashMap::new();
    let mut classes: BTreeMap<Address, EquivalenceClass> = BTreeMap::new();
    let mut cell_vertices: Vec<Vec<Address>> = Vec::with_capacity(leaves.len());
    let sides = engine.spec().sides();
    for cell in &leaves {
        let mut reps = BTreeSet::new();
        for side in sides.iter().filter(|s| s.digit == cell.last_digit()) {
            let p = cell.point(&side.tail);
            let rep = match rep_of.get(&p) {
                Some(r) => r.clone(),
                None => {
                    let class = engine.class_members(&p)?;
                    let rep = class.representative().clone();
                    for m in class.members() {
                        rep_of.insert(m.clone(), rep.clone());
                    }
                    classes.entry(rep.clone()).or_insert(class);
                    rep
                }
            };
            reps.insert(rep);
        }
        cell_vertices.push(reps.into_iter().collect());
    }

    let mut edges = BTreeSet::new();
    let nodes = match mode {
        GraphMode::Vertex => {
            let id_of: HashMap<&Address, usize> =
                classes.keys().enumerate().map(|(i, a)| (a, i)).collect();
            for reps in &cell_vertices {
                for (x, a) in reps.iter().enumerate() {
                    for b in &reps[x + 1..] {
                        let (i, j) = (id_of[a], id_of[b]);
                        edges.insert((i.min(j), i.max(j)));
                    }
                }
            }
            classes
                .into_values()
                .enumerate()
                .map(|(id, c)| GraphNode {
                    id,
                    repr: NodeRepr::Class(c),
                })
                .collect()
        }
        GraphMode::Cell => {
            let mut cells_at: BTreeMap<&Address, Vec<usize>> = BTreeMap::new();
            for (i, reps) in cell_vertices.iter().enumerate() {
                for r in reps {
                    cells_at.entry(r).or_default().push(i);
                }
            }
            for ids in cells_at.values() {
                for (x, &i) in ids.iter().enumerate() {
                    for &j in &ids[x + 1..] {
                        edges.insert((i.min(j), i.max(j)));
                    }
                }
            }
            leaves
                .iter()
                .cloned()
                .enumerate()
                .map(|(id, c)| GraphNode {
                    id,
                    repr: NodeRepr::Cell(c),
                })
                .collect()
        }
    };

    Ok(LevelGraph {
        mode,
        level,
        root: root.clone(),
        n_parts: n,
        nodes,
        edges: edges.into_iter().collect(),
    })
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    count: usize,
}

impl UnionFind {
    pub fn new(len: usize) -> UnionFind {
        UnionFind {
            parent: (0..len).collect(),
            size: vec![1; len],
            count: len,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.count -= 1;
        true
    }

    /// Number of disjoint sets.
    pub fn count(&self) -> usize {
        self.count
    }
}
