//! Unfolding a tree of groups into a forest indexed by the free group `T` on
//! the edge letters `t_e`.
//!
//! The unfolding has vertices `(v, t)` and, for every edge `e` and `t` in `T`,
//! an edge `(e, t)` from `(e(-1), t)` to `(e(1), t_e t)`. Only the radius-`r`
//! ball of `T` is built, and an edge is kept only when both ends lie in it.
//! Vertex ids are `v@t` and edge ids `e@t`, with `t` written as a word (`1`
//! for the empty word).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::exec::{map_slice, Execution};
use crate::freewords::{Letter, Sign, Word};
use crate::gog::{stable_letter, GraphOfGroups};
use crate::multigraph::{edge, Chain, ChainStep, GraphFile, Multigraph};
use crate::normalform::{FreeProduct, HnnLetter, HnnSpec, HnnWord, PermOps, Syllable};
use crate::permgroup::Perm;
use crate::{Error, Result};

/// Reduced words in the letters `t_e`, of length at most `r`, shortest first.
pub fn ball(edges: &[String], r: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &frontier {
            for e in edges {
                for sign in [Sign::Pos, Sign::Neg] {
                    let l = Letter::new(stable_letter(e), sign);
                    if w.letters().first() == Some(&l.inverse()) {
                        continue;
                    }
                    let mut letters = vec![l];
                    letters.extend_from_slice(w.letters());
                    next.push(Word(letters));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn vertex_id(v: &str, t: &Word) -> String {
    format!("{v}@{t}")
}

#[derive(Debug, Clone)]
pub struct UnfoldedGraph {
    pub radius: usize,
    pub graph: Multigraph,
    /// `v@t -> (v, t)`
    pub vertices: BTreeMap<String, (String, Word)>,
    /// `e@t -> (e, t)`
    pub edges: BTreeMap<String, (String, Word)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnfoldCheck {
    pub vertices: usize,
    pub edges: usize,
    pub is_forest: bool,
    pub has_loops: bool,
    pub has_parallel_edges: bool,
}

impl UnfoldCheck {
    pub fn passed(&self) -> bool {
        self.is_forest && !self.has_loops && !self.has_parallel_edges
    }
}

/// Truncation of the unfolding of the tree `g` to the radius-`r` ball.
pub fn unfold(g: &Multigraph, r: usize) -> Result<UnfoldedGraph> {
    unfold_with(Execution::default(), g, r)
}

pub fn unfold_with(mode: Execution, g: &Multigraph, r: usize) -> Result<UnfoldedGraph> {
    if !g.is_tree()? {
        return Err(Error::NotATree);
    }
    let names: Vec<String> = g.edges().map(|e| e.id.clone()).collect();
    let words = ball(&names, r);
    let mut vertices = BTreeMap::new();
    for v in g.vertices() {
        for t in &words {
            vertices.insert(vertex_id(v, t), (v.to_string(), t.clone()));
        }
    }
    let base_edges: Vec<_> = g.edges().cloned().collect();
    let kept = map_slice(mode, &base_edges, |e| {
        let te = Word::gen(stable_letter(&e.id));
        words
            .iter()
            .filter_map(|t| {
                let s = te.mul_reduced(t);
                (s.len() <= r).then(|| {
                    let id = vertex_id(&e.id, t);
                    let rec = edge(&id, &vertex_id(&e.minus, t), &vertex_id(&e.plus, &s));
                    (id, e.id.clone(), t.clone(), rec)
                })
            })
            .collect::<Vec<_>>()
    });
    let mut graph = Multigraph::new(vertices.keys().cloned(), [])?;
    let mut edges = BTreeMap::new();
    for (id, e, t, rec) in kept.into_iter().flatten() {
        graph.add_edge(rec)?;
        edges.insert(id, (e, t));
    }
    Ok(UnfoldedGraph {
        radius: r,
        graph,
        vertices,
        edges,
    })
}

impl UnfoldedGraph {
    pub fn check(&self) -> UnfoldCheck {
        UnfoldCheck {
            vertices: self.graph.vertex_count(),
            edges: self.graph.edge_count(),
            is_forest: self.graph.is_forest(),
            has_loops: self.graph.has_loops(),
            has_parallel_edges: self.graph.has_parallel_edges(),
        }
    }

    pub fn to_graph_file(&self) -> GraphFile {
        GraphFile::from_graph(&self.graph)
    }

    /// The element `t` of a vertex id.
    pub fn coordinate(&self, vertex: &str) -> Result<&Word> {
        self.vertices
            .get(vertex)
            .map(|(_, t)| t)
            .ok_or_else(|| Error::UnknownVertex(vertex.to_string()))
    }
}

/// The product, in reverse order, of the letters of the traversed edges: `t_e`
/// when `(e, t)` is walked from `(e(-1), t)` to `(e(1), t_e t)` and `t_e^-1` the
/// other way. Freely reduced.
pub fn chain_label(u: &UnfoldedGraph, c: &Chain<String, String>) -> Result<Word> {
    u.graph.validate_chain(c)?;
    let mut tau = Word::empty();
    for step in &c.steps {
        let (e, _) = &u.edges[&step.edge];
        let l = Word(vec![Letter::new(stable_letter(e), step.sign)]);
        tau = l.mul_reduced(&tau);
    }
    Ok(tau)
}

/// `tau r = s` for a chain from `(u, r)` to `(w, s)`.
pub fn chain_label_moves_endpoints(u: &UnfoldedGraph, c: &Chain<String, String>) -> Result<bool> {
    let tau = chain_label(u, c)?;
    let r = u.coordinate(&c.start)?;
    let s = u.coordinate(c.end())?;
    Ok(tau.mul_reduced(r) == *s)
}

/// A non-backtracking walk of at most `len` steps from `start`, stopping early
/// at a leaf. In a forest such a walk is a simple chain.
pub fn random_walk(
    u: &UnfoldedGraph,
    start: &str,
    len: usize,
    rng: &mut impl rand::Rng,
) -> Result<Chain<String, String>> {
    if !u.graph.has_vertex(start) {
        return Err(Error::UnknownVertex(start.to_string()));
    }
    let mut chain: Chain<String, String> = Chain {
        start: start.to_string(),
        steps: Vec::new(),
    };
    for _ in 0..len {
        let at = chain.end().clone();
        let last = chain.steps.last().map(|s| s.edge.as_str());
        let options: Vec<ChainStep<String, String>> = u
            .graph
            .edges()
            .filter(|e| Some(e.id.as_str()) != last)
            .flat_map(|e| {
                let out = (e.minus == at).then(|| ChainStep {
                    edge: e.id.clone(),
                    sign: Sign::Pos,
                    to: e.plus.clone(),
                });
                let back = (e.plus == at).then(|| ChainStep {
                    edge: e.id.clone(),
                    sign: Sign::Neg,
                    to: e.minus.clone(),
                });
                out.into_iter().chain(back)
            })
            .collect();
        if options.is_empty() {
            break;
        }
        let i = rng.random_range(0..options.len());
        chain.steps.push(options[i].clone());
    }
    Ok(chain)
}

/// `t(v)` for every vertex of a tree, relative to a base vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexLabeling {
    pub base: String,
    pub labels: BTreeMap<String, Word>,
}

/// `t(u) = 1`; if `e` is the last edge on the path from `u` to `v` and
/// `v = e(eps)`, then `t(v) = t_e^eps t(parent)`.
pub fn embed_vertices(g: &Multigraph, u: &str) -> Result<VertexLabeling> {
    if !g.has_vertex(u) {
        return Err(Error::UnknownVertex(u.to_string()));
    }
    if !g.is_tree()? {
        return Err(Error::NotATree);
    }
    let mut labels = BTreeMap::from([(u.to_string(), Word::empty())]);
    for v in g.vertices() {
        let path = g.forest_path(u, v)?.ok_or(Error::Disconnected)?;
        let mut t = Word::empty();
        for step in &path.steps {
            let l = Word(vec![Letter::new(stable_letter(&step.edge), step.sign)]);
            t = l.mul_reduced(&t);
        }
        labels.insert(v.to_string(), t);
    }
    Ok(VertexLabeling {
        base: u.to_string(),
        labels,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageCheck {
    pub injective: bool,
    pub vertices_present: bool,
    pub edges_present: bool,
    /// Edges of the unfolding between image vertices; equals the edge count of
    /// the tree exactly when the image is an induced copy.
    pub induced_edges: usize,
    pub tree_edges: usize,
}

impl ImageCheck {
    pub fn passed(&self) -> bool {
        self.injective
            && self.vertices_present
            && self.edges_present
            && self.induced_edges == self.tree_edges
    }
}

impl VertexLabeling {
    /// Checks that `v -> (v, t(v))` maps `g` isomorphically onto an induced
    /// subgraph of `u`.
    pub fn image_check(&self, g: &Multigraph, u: &UnfoldedGraph) -> Result<ImageCheck> {
        let image: BTreeSet<String> = self.labels.iter().map(|(v, t)| vertex_id(v, t)).collect();
        let vertices_present = image.iter().all(|x| u.graph.has_vertex(x));
        let mut edges_present = true;
        for e in g.edges() {
            let t = self.label(&e.minus)?;
            let ok = u.graph.edge(&vertex_id(&e.id, t)).is_ok_and(|img| {
                img.minus == vertex_id(&e.minus, t)
                    && img.plus == vertex_id(&e.plus, self.labels.get(&e.plus).unwrap_or(t))
            });
            edges_present &= ok;
        }
        let induced_edges = u
            .graph
            .edges()
            .filter(|e| image.contains(&e.plus) && image.contains(&e.minus))
            .count();
        Ok(ImageCheck {
            injective: image.len() == g.vertex_count(),
            vertices_present,
            edges_present,
            induced_edges,
            tree_edges: g.edge_count(),
        })
    }

    pub fn label(&self, v: &str) -> Result<&Word> {
        self.labels
            .get(v)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    /// Negative control: `t(v)` with its leading letter inverted.
    pub fn corrupted(&self, v: &str) -> Result<VertexLabeling> {
        let t = self.label(v)?;
        let first = t
            .letters()
            .first()
            .ok_or_else(|| Error::Precondition(format!("t({v}) is empty")))?;
        let mut letters = t.letters().to_vec();
        letters[0] = first.inverse();
        let mut out = self.clone();
        out.labels.insert(v.to_string(), Word(letters));
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingCheck {
    pub relators: usize,
    /// `(edge, generator)` pairs whose relator does not reduce to the identity.
    pub failures: Vec<(String, String)>,
}

impl EmbeddingCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// The HNN-extension of the free product of the vertex groups (in vertex id
/// order) with stable letter `t_e` for every edge and relations
/// `t_e^-1 (h phi_+) t_e = h phi_-`.
pub fn hnn_of_tree(g: &GraphOfGroups) -> Result<HnnSpec<PermOps>> {
    let vertices: Vec<&str> = g.graph().vertices().collect();
    let factors = vertices
        .iter()
        .map(|v| g.vertex_group(v)?.realize(v))
        .collect::<Result<Vec<_>>>()?;
    let mut spec = HnnSpec::new(FreeProduct::new(factors));
    for e in g.graph().edges() {
        let ip = vertices
            .iter()
            .position(|v| *v == e.plus)
            .expect("endpoint");
        let im = vertices
            .iter()
            .position(|v| *v == e.minus)
            .expect("endpoint");
        let pairs =
            g.edge_generator_pairs(&e.id, spec.base().factor(ip)?, spec.base().factor(im)?)?;
        spec.add_stable_letter(stable_letter(&e.id), ip, im, &pairs)?;
    }
    Ok(spec)
}

/// For every edge `e` and generator `h` of `H_e`, Britton-reduces
/// `t(e(1))^-1 (h phi_+) t(e(1)) . [t(e(-1))^-1 (h phi_-) t(e(-1))]^-1`
/// and records the pairs that do not reduce to the identity.
pub fn check_algebraic_embedding(
    g: &GraphOfGroups,
    labeling: &VertexLabeling,
) -> Result<EmbeddingCheck> {
    if !g.graph().is_tree()? {
        return Err(Error::NotATree);
    }
    for v in g.graph().vertices() {
        if !g.vertex_group(v)?.is_enumerable() {
            return Err(Error::NotEnumerable(format!("group at {v}")));
        }
    }
    let spec = hnn_of_tree(g)?;
    let vertices: Vec<&str> = g.graph().vertices().collect();
    let t_word = |w: &Word| -> Result<Vec<HnnLetter<Perm>>> {
        w.letters()
            .iter()
            .map(|l| {
                let letter = spec
                    .stable_index(&l.gen)
                    .ok_or_else(|| Error::UnknownGenerator(l.gen.clone()))?;
                Ok(HnnLetter::Stable {
                    letter,
                    sign: l.sign,
                })
            })
            .collect()
    };
    // t^-1 x t for x in the factor of vertex v
    let conj = |v: &str, x: Perm| -> Result<Vec<HnnLetter<Perm>>> {
        let t = labeling.label(v)?;
        let factor = vertices.iter().position(|w| *w == v).expect("vertex");
        let mut out = t_word(&t.inverse())?;
        out.push(HnnLetter::Base(Syllable::new(factor, x)));
        out.extend(t_word(t)?);
        Ok(out)
    };
    let mut relators = 0;
    let mut failures = Vec::new();
    for e in g.graph().edges() {
        let ip = vertices
            .iter()
            .position(|v| *v == e.plus)
            .expect("endpoint");
        let im = vertices
            .iter()
            .position(|v| *v == e.minus)
            .expect("endpoint");
        let pairs =
            g.edge_generator_pairs(&e.id, spec.base().factor(ip)?, spec.base().factor(im)?)?;
        let data = g.edge_data(&e.id)?;
        let labels = data.plus.images(&data.group, None)?;
        for ((hp, hm), (h, _)) in pairs.into_iter().zip(labels) {
            relators += 1;
            let mut word = conj(&e.plus, hp)?;
            let mut rhs = conj(&e.minus, hm.inverse())?;
            // [t^-1 y t]^-1 = t^-1 y^-1 t
            word.append(&mut rhs);
            if !spec.reduce(&HnnWord(word))?.is_empty() {
                failures.push((e.id.clone(), h));
            }
        }
    }
    Ok(EmbeddingCheck { relators, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::trial_rng;
    use crate::multigraph::random_tree;
    use rand::Rng;

    fn cyclic_tree(g: &Multigraph, order: usize) -> GraphOfGroups {
        GraphOfGroups::uniform_cyclic(g.clone(), order).unwrap()
    }

    #[test]
    fn ball_sizes() {
        let one = vec!["e".to_string()];
        assert_eq!(ball(&one, 0).len(), 1);
        assert_eq!(ball(&one, 3).len(), 7);
        let two = vec!["e".to_string(), "f".to_string()];
        // 1 + 4 + 12
        assert_eq!(ball(&two, 2).len(), 17);
        assert!(ball(&two, 3).iter().all(Word::is_reduced));
    }

    #[test]
    fn single_edge() {
        let g = Multigraph::new(["u", "v"], [edge("e", "u", "v")]).unwrap();
        let u0 = unfold(&g, 0).unwrap();
        assert_eq!(u0.graph.vertex_count(), 2);
        assert_eq!(u0.graph.edge_count(), 0);
        let u1 = unfold(&g, 1).unwrap();
        assert_eq!(u1.graph.vertex_count(), 6);
        assert!(u1.check().passed());
        // (e, 1) joins (u, 1) and (v, t_e); (e, t_e^-1) joins (u, t_e^-1) and (v, 1)
        assert_eq!(u1.graph.edge_count(), 2);
        let e = u1.graph.edge("e@1").unwrap();
        assert_eq!((e.minus.as_str(), e.plus.as_str()), ("u@1", "v@t_e"));
    }

    #[test]
    fn chain_labels_of_single_edges() {
        let g = Multigraph::new(["u", "v"], [edge("e", "u", "v")]).unwrap();
        let u = unfold(&g, 1).unwrap();
        let down = u.graph.forest_path("v@t_e", "u@1").unwrap().unwrap();
        assert_eq!(chain_label(&u, &down).unwrap().to_string(), "t_e^-1");
        let up = u.graph.forest_path("u@1", "v@t_e").unwrap().unwrap();
        assert_eq!(chain_label(&u, &up).unwrap().to_string(), "t_e");
        assert!(chain_label_moves_endpoints(&u, &down).unwrap());
    }

    #[test]
    fn labeling_rules() {
        let g =
            Multigraph::new(["u", "v", "w"], [edge("e", "u", "v"), edge("f", "w", "v")]).unwrap();
        let lab = embed_vertices(&g, "u").unwrap();
        assert_eq!(lab.label("u").unwrap(), &Word::empty());
        assert_eq!(lab.label("v").unwrap().to_string(), "t_e");
        assert_eq!(lab.label("w").unwrap().to_string(), "t_f^-1 t_e");
        let u = unfold(&g, 2).unwrap();
        assert!(lab.image_check(&g, &u).unwrap().passed());
        assert!(embed_vertices(&g, "x").is_err());
    }

    #[test]
    fn algebraic_embedding_and_negative_control() {
        let g = Multigraph::new(["u", "v"], [edge("e", "u", "v")]).unwrap();
        let gog = cyclic_tree(&g, 2);
        let lab = embed_vertices(&g, "u").unwrap();
        assert!(check_algebraic_embedding(&gog, &lab).unwrap().passed());
        let bad = lab.corrupted("v").unwrap();
        assert!(!check_algebraic_embedding(&gog, &bad).unwrap().passed());

        let path =
            Multigraph::new(["a", "b", "c"], [edge("e", "a", "b"), edge("f", "b", "c")]).unwrap();
        let gog = cyclic_tree(&path, 3);
        let lab = embed_vertices(&path, "b").unwrap();
        assert!(check_algebraic_embedding(&gog, &lab).unwrap().passed());
        assert!(
            !check_algebraic_embedding(&gog, &lab.corrupted("c").unwrap())
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn random_trees_unfold_to_forests() {
        for i in 0..12 {
            let mut rng = trial_rng(3, i);
            let g = random_tree(rng.random_range(1..=5), &mut rng).unwrap();
            let r = rng.random_range(0..=2);
            let u = unfold(&g, r).unwrap();
            assert!(u.check().passed());
            let seq = unfold_with(Execution::Sequential, &g, r).unwrap();
            assert_eq!(seq.graph, u.graph);
        }
    }

    #[test]
    fn non_tree_is_rejected() {
        let g = Multigraph::new(["u"], [edge("e", "u", "u")]).unwrap();
        assert_eq!(unfold(&g, 1).unwrap_err(), Error::NotATree);
    }
}
