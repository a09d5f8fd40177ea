//! Finite undirected multigraphs whose edges carry an orientation.
//!
//! Every edge `e` has two ends, `e(+1)` and `e(-1)`. Loops and parallel edges are
//! allowed. Vertex and edge ids are strings and all iteration is in id order, so
//! spanning trees (and everything built on top of them) are reproducible.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::freewords::Sign;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    /// `e(+1)`
    pub plus: String,
    /// `e(-1)`
    pub minus: String,
}

impl Edge {
    pub fn end(&self, sign: Sign) -> &str {
        match sign {
            Sign::Pos => &self.plus,
            Sign::Neg => &self.minus,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.plus == self.minus
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    vertices: BTreeSet<String>,
    edges: BTreeMap<String, Edge>,
}

impl Multigraph {
    pub fn new<V, I>(vertices: V, edges: I) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        I: IntoIterator<Item = Edge>,
    {
        let mut g = Multigraph::default();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: impl Into<String>) -> Result<()> {
        let v = v.into();
        if !self.vertices.insert(v.clone()) {
            return Err(Error::DuplicateId(v));
        }
        Ok(())
    }

    /// Adds edge `id` with `e(+1) = plus` and `e(-1) = minus`.
    pub fn add_edge(&mut self, e: Edge) -> Result<()> {
        for end in [&e.plus, &e.minus] {
            if !self.vertices.contains(end) {
                return Err(Error::UnknownVertex(end.clone()));
            }
        }
        if self.edges.contains_key(&e.id) {
            return Err(Error::DuplicateId(e.id));
        }
        self.edges.insert(e.id.clone(), e);
        Ok(())
    }

    pub fn vertices(&self) -> impl Iterator<Item = &str> + '_ {
        self.vertices.iter().map(String::as_str)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.values()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.contains(v)
    }

    pub fn edge(&self, id: &str) -> Result<&Edge> {
        self.edges
            .get(id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Incidences at each vertex as `(edge id, sign of the far end)`, so that walking
    /// the edge lands on `e(sign)`. Loops appear twice.
    fn adjacency(&self) -> BTreeMap<&str, Vec<(&Edge, Sign)>> {
        let mut adj: BTreeMap<&str, Vec<(&Edge, Sign)>> = self
            .vertices
            .iter()
            .map(|v| (v.as_str(), Vec::new()))
            .collect();
        for e in self.edges.values() {
            adj.get_mut(e.minus.as_str()).unwrap().push((e, Sign::Pos));
            adj.get_mut(e.plus.as_str()).unwrap().push((e, Sign::Neg));
        }
        adj
    }

    pub fn is_connected(&self) -> Result<bool> {
        let start = self.vertices.iter().next().ok_or(Error::EmptyGraph)?;
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([start.as_str()]);
        let mut queue = VecDeque::from([start.as_str()]);
        while let Some(v) = queue.pop_front() {
            for (e, s) in &adj[v] {
                let w = e.end(*s);
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        Ok(seen.len() == self.vertices.len())
    }

    /// Breadth-first spanning tree rooted at the smallest vertex id, scanning the
    /// incident edges of each vertex in edge-id order.
    pub fn spanning_tree(&self) -> Result<SpanningTree> {
        let start = self.vertices.iter().next().ok_or(Error::EmptyGraph)?;
        let adj = self.adjacency();
        let mut seen = BTreeSet::from([start.as_str()]);
        let mut queue = VecDeque::from([start.as_str()]);
        let mut edges = BTreeSet::new();
        while let Some(v) = queue.pop_front() {
            let mut incident = adj[v].clone();
            incident.sort_by(|a, b| a.0.id.cmp(&b.0.id));
            for (e, s) in incident {
                let w = e.end(s);
                if seen.insert(w) {
                    edges.insert(e.id.clone());
                    queue.push_back(w);
                }
            }
        }
        if seen.len() != self.vertices.len() {
            return Err(Error::Disconnected);
        }
        Ok(SpanningTree { edges })
    }

    /// No loops, no parallel edges and no longer cycles.
    pub fn is_forest(&self) -> bool {
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut parent: Vec<usize> = (0..index.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.edges.values() {
            let a = find(&mut parent, index[e.plus.as_str()]);
            let b = find(&mut parent, index[e.minus.as_str()]);
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    pub fn is_tree(&self) -> Result<bool> {
        Ok(self.is_connected()? && self.is_forest())
    }

    pub fn has_loops(&self) -> bool {
        self.edges.values().any(Edge::is_loop)
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut pairs = BTreeSet::new();
        self.edges.values().any(|e| {
            let key = if e.plus <= e.minus {
                (&e.plus, &e.minus)
            } else {
                (&e.minus, &e.plus)
            };
            !pairs.insert(key)
        })
    }

    /// Subgraph on all vertices and the given edges.
    pub fn spanning_subgraph<'a>(&self, edges: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut g = Multigraph {
            vertices: self.vertices.clone(),
            edges: BTreeMap::new(),
        };
        for id in edges {
            g.add_edge(self.edge(id)?.clone())?;
        }
        Ok(g)
    }

    /// The unique simple chain between two vertices of a forest, if any.
    pub fn forest_path(&self, from: &str, to: &str) -> Result<Option<Chain<String, String>>> {
        for v in [from, to] {
            if !self.has_vertex(v) {
                return Err(Error::UnknownVertex(v.to_string()));
            }
        }
        if !self.is_forest() {
            return Err(Error::NotATree);
        }
        let adj = self.adjacency();
        let mut came_from: BTreeMap<&str, (&Edge, Sign, &str)> = BTreeMap::new();
        let mut seen = BTreeSet::from([from]);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for (e, s) in &adj[v] {
                let w = e.end(*s);
                if seen.insert(w) {
                    came_from.insert(w, (e, *s, v));
                    queue.push_back(w);
                }
            }
        }
        if !seen.contains(to) {
            return Ok(None);
        }
        let mut steps = Vec::new();
        let mut cur = to;
        while cur != from {
            let (e, s, prev) = came_from[cur];
            steps.push(ChainStep {
                edge: e.id.clone(),
                sign: s,
                to: cur.to_string(),
            });
            cur = prev;
        }
        steps.reverse();
        Ok(Some(Chain {
            start: from.to_string(),
            steps,
        }))
    }

    /// Checks that consecutive incidences of `c` are edges of this graph.
    pub fn validate_chain(&self, c: &Chain<String, String>) -> Result<()> {
        if !self.has_vertex(&c.start) {
            return Err(Error::UnknownVertex(c.start.clone()));
        }
        let mut at = c.start.as_str();
        for (k, step) in c.steps.iter().enumerate() {
            let e = self.edge(&step.edge)?;
            if e.end(-step.sign) != at || e.end(step.sign) != step.to {
                return Err(Error::InvalidChain(format!(
                    "step {k} does not follow edge {}",
                    step.edge
                )));
            }
            at = &step.to;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpanningTree {
    pub edges: BTreeSet<String>,
}

impl SpanningTree {
    pub fn contains(&self, edge: &str) -> bool {
        self.edges.contains(edge)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Errors unless the edges form a maximal tree of `g`.
    pub fn validate(&self, g: &Multigraph) -> Result<()> {
        let sub = g.spanning_subgraph(self.edges.iter().map(String::as_str))?;
        if !sub.is_forest() {
            return Err(Error::NotSpanning("tree edges contain a cycle".into()));
        }
        if !sub.is_connected()? {
            return Err(Error::NotSpanning(
                "tree edges do not reach every vertex".into(),
            ));
        }
        Ok(())
    }
}

/// One traversal: walk `edge` from `e(-sign)` to `e(sign) = to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainStep<V, E> {
    pub edge: E,
    pub sign: Sign,
    pub to: V,
}

/// Alternating sequence vertex, edge, vertex, ...
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain<V, E> {
    pub start: V,
    pub steps: Vec<ChainStep<V, E>>,
}

impl<V: Clone + Ord, E> Chain<V, E> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &V {
        self.steps.last().map_or(&self.start, |s| &s.to)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &V> + '_ {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.to))
    }

    /// No vertex is visited twice.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.vertices().all(|v| seen.insert(v.clone()))
    }
}

/// On-disk graph description.
///
/// ```json
/// { "vertices": ["u", "v"], "edges": [{ "id": "e", "from": "u", "to": "v" }] }
/// ```
///
/// `from` is the end `e(-1)` and `to` is the end `e(+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: String,
    pub from: String,
    pub to: String,
}

impl GraphFile {
    pub fn to_graph(&self) -> Result<Multigraph> {
        Multigraph::new(
            self.vertices.iter().cloned(),
            self.edges.iter().map(|r| Edge {
                id: r.id.clone(),
                plus: r.to.clone(),
                minus: r.from.clone(),
            }),
        )
    }

    pub fn from_graph(g: &Multigraph) -> Self {
        GraphFile {
            vertices: g.vertices().map(str::to_string).collect(),
            edges: g
                .edges()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    from: e.minus.clone(),
                    to: e.plus.clone(),
                })
                .collect(),
        }
    }
}

/// A random tree on `v0 .. v{n-1}`: each `v_i` (`i > 0`) hangs off a random
/// earlier vertex through `e_i`, oriented at random.
pub fn random_tree(n: usize, rng: &mut impl rand::Rng) -> Result<Multigraph> {
    random_connected(n, 0, rng)
}

/// A random tree as in [`random_tree`] plus `extra` edges `x_k` (loops and
/// parallel edges allowed).
pub fn random_connected(n: usize, extra: usize, rng: &mut impl rand::Rng) -> Result<Multigraph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut g = Multigraph::new(vs.iter().cloned(), [])?;
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (a, b) = if rng.random_bool(0.5) { (j, i) } else { (i, j) };
        g.add_edge(edge(&format!("e{i:02}"), &vs[a], &vs[b]))?;
    }
    for k in 0..extra {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        g.add_edge(edge(&format!("x{k:02}"), &vs[a], &vs[b]))?;
    }
    Ok(g)
}

/// Shorthand used by tests and examples: `edge("e", "u", "v")` runs from `u` to `v`.
pub fn edge(id: &str, from: &str, to: &str) -> Edge {
    Edge {
        id: id.to_string(),
        plus: to.to_string(),
        minus: from.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Multigraph {
        let vs: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let es = (1..n).map(|i| edge(&format!("e{i}"), &vs[i - 1], &vs[i]));
        Multigraph::new(vs.clone(), es).unwrap()
    }

    #[test]
    fn connectivity() {
        assert_eq!(Multigraph::default().is_connected(), Err(Error::EmptyGraph));
        assert!(Multigraph::new(["a"], []).unwrap().is_connected().unwrap());
        assert!(!Multigraph::new(["a", "b"], [])
            .unwrap()
            .is_connected()
            .unwrap());
        assert!(path(3).is_connected().unwrap());
    }

    #[test]
    fn spanning_trees() {
        let single = Multigraph::new(["a"], []).unwrap();
        assert!(single.spanning_tree().unwrap().is_empty());

        let tri = Multigraph::new(
            ["a", "b", "c"],
            [
                edge("x", "a", "b"),
                edge("y", "b", "c"),
                edge("z", "c", "a"),
            ],
        )
        .unwrap();
        let t = tri.spanning_tree().unwrap();
        assert_eq!(t.len(), 2);
        t.validate(&tri).unwrap();
        // from `a`: edges x and z in id order
        assert_eq!(t.edges, BTreeSet::from(["x".to_string(), "z".to_string()]));

        let loops = Multigraph::new(["a"], [edge("l1", "a", "a"), edge("l2", "a", "a")]).unwrap();
        assert!(loops.spanning_tree().unwrap().is_empty());

        let two = Multigraph::new(["a", "b"], []).unwrap();
        assert_eq!(two.spanning_tree(), Err(Error::Disconnected));
    }

    #[test]
    fn forests() {
        assert!(path(4).is_forest());
        assert!(!Multigraph::new(["a"], [edge("l", "a", "a")])
            .unwrap()
            .is_forest());
        let par = Multigraph::new(["a", "b"], [edge("x", "a", "b"), edge("y", "b", "a")]).unwrap();
        assert!(!par.is_forest());
        assert!(par.has_parallel_edges());
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = Multigraph::new(["a"], []).unwrap();
        assert_eq!(
            g.add_edge(edge("e", "a", "b")),
            Err(Error::UnknownVertex("b".into()))
        );
        g.add_edge(edge("e", "a", "a")).unwrap();
        assert_eq!(
            g.add_edge(edge("e", "a", "a")),
            Err(Error::DuplicateId("e".into()))
        );
    }

    #[test]
    fn non_spanning_tree_rejected() {
        let g = path(3);
        let t = SpanningTree {
            edges: BTreeSet::from(["e1".to_string()]),
        };
        assert!(matches!(t.validate(&g), Err(Error::NotSpanning(_))));
    }

    #[test]
    fn forest_paths_are_valid_simple_chains() {
        let g = path(5);
        let c = g.forest_path("v4", "v1").unwrap().unwrap();
        g.validate_chain(&c).unwrap();
        assert!(c.is_simple());
        assert_eq!(c.len(), 3);
        assert_eq!(c.end(), "v1");
        assert_eq!(c.steps[0].sign, Sign::Neg);
    }

    #[test]
    fn graph_file_orientation() {
        let f: GraphFile = serde_json::from_str(
            r#"{"vertices":["u","v"],"edges":[{"id":"e","from":"u","to":"v"}]}"#,
        )
        .unwrap();
        let g = f.to_graph().unwrap();
        let e = g.edge("e").unwrap();
        assert_eq!((e.minus.as_str(), e.plus.as_str()), ("u", "v"));
        assert_eq!(GraphFile::from_graph(&g), f);
    }
}
