//! Generator-labeled directed multigraphs over generic vertex keys, with a
//! truncation frontier, breadth-first orbit construction, and DOT/JSON
//! export.
//!
//! Every Schreier and Cayley graph in the crate is a `LabeledGraph`.
//! Vertices carry opaque hashable keys (exact dyadics, tuples, Haar indices,
//! forests); the frontier flags vertices whose out-neighborhoods were not
//! fully explored, and structural queries refuse to treat those as complete.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::Serialize;

use crate::exec;
use crate::word::Letter;

/// Requirements on a graph key: exact equality/hashing, a total order for
/// deterministic construction, and a text rendering for export.
pub trait VertexKey: Clone + Eq + Hash + Ord + fmt::Display + Send + Sync {}
impl<T: Clone + Eq + Hash + Ord + fmt::Display + Send + Sync> VertexKey for T {}

/// Edge label: a generator index plus direction. Orbit builders store only
/// positive labels (an inverse move is the reverse traversal of the stored
/// edge); induced-subgraph builders may store explicit inverse labels.
pub type EdgeLabel = Letter;

/// Stop condition for breadth-first orbit enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Explore vertices at BFS depth strictly below this bound; vertices at
    /// the bound remain frontier.
    Depth(u32),
    /// Stop expanding once this many vertices have been discovered.
    MaxVertices(usize),
}

#[derive(Clone, Debug)]
pub struct LabeledGraph<V> {
    vertices: Vec<V>,
    index: HashMap<V, usize>,
    out_edges: Vec<BTreeSet<(EdgeLabel, usize)>>,
    in_edges: Vec<BTreeSet<(EdgeLabel, usize)>>,
    frontier: Vec<bool>,
}

impl<V: VertexKey> Default for LabeledGraph<V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<V: VertexKey> LabeledGraph<V> {
    pub fn new() -> Self {
        LabeledGraph {
            vertices: Vec::new(),
            index: HashMap::new(),
            out_edges: Vec::new(),
            in_edges: Vec::new(),
            frontier: Vec::new(),
        }
    }

    /// Inserts a vertex (idempotent) and returns its id.
    pub fn add_vertex(&mut self, v: V) -> usize {
        if let Some(&id) = self.index.get(&v) {
            return id;
        }
        let id = self.vertices.len();
        self.index.insert(v.clone(), id);
        self.vertices.push(v);
        self.out_edges.push(BTreeSet::new());
        self.in_edges.push(BTreeSet::new());
        self.frontier.push(false);
        id
    }

    pub fn add_edge(&mut self, from: usize, label: EdgeLabel, to: usize) {
        self.out_edges[from].insert((label, to));
        self.in_edges[to].insert((label, from));
    }

    pub fn set_frontier(&mut self, id: usize, flag: bool) {
        self.frontier[id] = flag;
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn explored_count(&self) -> usize {
        self.frontier.iter().filter(|f| !**f).count()
    }

    pub fn vertex(&self, id: usize) -> &V {
        &self.vertices[id]
    }

    pub fn vertex_id(&self, v: &V) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &V) -> bool {
        self.index.contains_key(v)
    }

    pub fn is_frontier(&self, id: usize) -> bool {
        self.frontier[id]
    }

    pub fn vertex_ids(&self) -> std::ops::Range<usize> {
        0..self.vertices.len()
    }

    pub fn out(&self, id: usize) -> impl Iterator<Item = (EdgeLabel, usize)> + '_ {
        self.out_edges[id].iter().copied()
    }

    pub fn incoming(&self, id: usize) -> impl Iterator<Item = (EdgeLabel, usize)> + '_ {
        self.in_edges[id].iter().copied()
    }

    /// All edges in deterministic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, EdgeLabel, usize)> + '_ {
        self.vertex_ids()
            .flat_map(move |v| self.out(v).map(move |(l, w)| (v, l, w)))
    }

    pub fn edge_count(&self) -> usize {
        self.out_edges.iter().map(BTreeSet::len).sum()
    }

    /// Neighbors through edges in either direction, loops ignored.
    pub fn neighbors(&self, id: usize) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.out(id).map(|(_, w)| w).collect();
        out.extend(self.incoming(id).map(|(_, w)| w));
        out.remove(&id);
        out
    }

    /// Undirected BFS distances from the given sources (`None` = unreached).
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertices.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Vertices within undirected distance `k` of the set (the set itself
    /// included).
    pub fn ball(&self, sources: &BTreeSet<usize>, k: u32) -> BTreeSet<usize> {
        let mut seen: BTreeSet<usize> = sources.clone();
        let mut layer: BTreeSet<usize> = sources.clone();
        for _ in 0..k {
            let mut next = BTreeSet::new();
            for &v in &layer {
                for w in self.neighbors(v) {
                    if seen.insert(w) {
                        next.insert(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            layer = next;
        }
        seen
    }

    /// Checks Schreier regularity: every explored vertex has exactly one
    /// outgoing and one incoming edge per generator index. Returns offending
    /// `(vertex, generator)` pairs.
    pub fn regularity_violations(&self, gens: &[u32]) -> Vec<(usize, u32)> {
        let mut bad = Vec::new();
        for v in self.vertex_ids() {
            if self.frontier[v] {
                continue;
            }
            for &g in gens {
                let outs = self
                    .out(v)
                    .filter(|(l, _)| l.index == g && !l.inverse)
                    .count();
                let ins = self
                    .incoming(v)
                    .filter(|(l, _)| l.index == g && !l.inverse)
                    .count();
                if outs != 1 || ins != 1 {
                    bad.push((v, g));
                }
            }
        }
        bad
    }

    /// DOT rendering in the labeling style of the figures: `x_0` edges
    /// dashed, `x_1` edges solid; frontier vertices drawn gray.
    pub fn to_dot(&self, name: &str) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        writeln!(s, "digraph {name} {{").unwrap();
        for v in self.vertex_ids() {
            let extra = if self.frontier[v] {
                " color=gray fontcolor=gray"
            } else {
                ""
            };
            writeln!(s, "  n{v} [label=\"{}\"{extra}];", self.vertices[v]).unwrap();
        }
        for (v, l, w) in self.edges() {
            let style = if l.index == 0 { "dashed" } else { "solid" };
            writeln!(s, "  n{v} -> n{w} [label=\"{l}\" style={style}];").unwrap();
        }
        writeln!(s, "}}").unwrap();
        s
    }

    /// JSON rendering: vertex keys with frontier flags plus labeled edges,
    /// in deterministic discovery order.
    pub fn to_json(&self) -> String {
        let g = JsonGraph {
            vertices: self
                .vertex_ids()
                .map(|v| JsonVertex {
                    key: self.vertices[v].to_string(),
                    frontier: self.frontier[v],
                })
                .collect(),
            edges: self
                .edges()
                .map(|(v, l, w)| JsonEdge {
                    from: self.vertices[v].to_string(),
                    to: self.vertices[w].to_string(),
                    label: l.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&g).expect("graph serialization")
    }
}

#[derive(Serialize, serde::Deserialize)]
struct JsonVertex {
    key: String,
    frontier: bool,
}

#[derive(Serialize, serde::Deserialize)]
struct JsonEdge {
    from: String,
    to: String,
    label: String,
}

#[derive(Serialize, serde::Deserialize)]
struct JsonGraph {
    vertices: Vec<JsonVertex>,
    edges: Vec<JsonEdge>,
}

/// Reads a graph back from the JSON rendering, with plain strings as keys.
pub fn graph_from_json(s: &str) -> Result<LabeledGraph<String>, String> {
    let data: JsonGraph = serde_json::from_str(s).map_err(|e| e.to_string())?;
    let mut g = LabeledGraph::new();
    for v in &data.vertices {
        let id = g.add_vertex(v.key.clone());
        g.set_frontier(id, v.frontier);
    }
    for e in &data.edges {
        let from = g
            .vertex_id(&e.from)
            .ok_or_else(|| format!("unknown vertex {}", e.from))?;
        let to = g
            .vertex_id(&e.to)
            .ok_or_else(|| format!("unknown vertex {}", e.to))?;
        let label: Letter = e
            .label
            .parse()
            .map_err(|_| format!("bad label {}", e.label))?;
        g.add_edge(from, label, to);
    }
    Ok(g)
}

/// Breadth-first closure of `seed` under the labeled generators and their
/// inverses, up to the truncation bound.
///
/// `act(g, inverse, v)` must realize a bijective action per generator. Only
/// positive labels are stored: exploring `v` records the arrow
/// `v -> act(g, false, v)` and the arrow `act(g, true, v) -> v`, so an
/// explored vertex has its complete in/out neighborhood present even when a
/// neighbor itself remains unexplored. Discovery order is deterministic:
/// layers are processed in sorted key order (image computation may fan out
/// over threads, but the merge is sequential in input order).
pub fn build_orbit_graph<V, F>(seed: V, gens: &[u32], act: F, limit: Truncation) -> LabeledGraph<V>
where
    V: VertexKey,
    F: Fn(u32, bool, &V) -> V + Send + Sync,
{
    let mut graph = LabeledGraph::new();
    graph.add_vertex(seed);
    let mut expanded: Vec<bool> = Vec::new();
    let mut layer: Vec<usize> = vec![0];
    let mut depth = 0u32;
    loop {
        let stop = match limit {
            Truncation::Depth(d) => depth >= d,
            Truncation::MaxVertices(n) => graph.len() >= n,
        };
        if stop || layer.is_empty() {
            break;
        }
        // Sorted key order within the layer fixes vertex ids and edge order.
        layer.sort_by(|&a, &b| graph.vertex(a).cmp(graph.vertex(b)));
        let work: Vec<(usize, V)> = layer
            .iter()
            .map(|&id| (id, graph.vertex(id).clone()))
            .collect();
        let images = exec::map_collect(&work, |(_, v)| {
            gens.iter()
                .map(|&g| (act(g, false, v), act(g, true, v)))
                .collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for ((id, _), imgs) in work.iter().zip(images) {
            for (&g, (fwd, back)) in gens.iter().zip(imgs) {
                let before = graph.len();
                let fid = graph.add_vertex(fwd);
                if fid >= before {
                    next.push(fid);
                }
                graph.add_edge(*id, Letter::gen(g), fid);
                let before = graph.len();
                let bid = graph.add_vertex(back);
                if bid >= before {
                    next.push(bid);
                }
                graph.add_edge(bid, Letter::gen(g), *id);
            }
        }
        expanded.resize(graph.len(), false);
        for &id in &layer {
            expanded[id] = true;
        }
        next.sort_unstable();
        next.dedup();
        layer = next;
        depth += 1;
    }
    expanded.resize(graph.len(), false);
    for (id, done) in expanded.iter().enumerate() {
        if !done {
            graph.set_frontier(id, true);
        }
    }
    graph
}
