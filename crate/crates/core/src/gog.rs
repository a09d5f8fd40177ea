//! Graphs of groups and the presentation of their fundamental group relative to
//! a maximal tree.
//!
//! Vertex generators are namespaced as `v.g`; the stable letter of a non-tree
//! edge `e` is `t_e`. Edge relators are imposed for the generators of each edge
//! group only, which generates the same normal closure as imposing them for every
//! element.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::elemabelian::{check_window, wreath_perm, FpVector, IndexBijection, IndexSet};
use crate::freewords::{Presentation, Word};
use crate::multigraph::{GraphFile, Multigraph, SpanningTree};
use crate::normalform::{extend_hom, FiniteGroupHandle, Group, PermOps};
use crate::permgroup::{Perm, DEFAULT_CAP};
use crate::{Error, Result};

/// `c_i`
pub fn basis_label(i: i64) -> String {
    format!("c{i}")
}

/// Inverse of [`basis_label`].
pub fn parse_basis_label(s: &str) -> Option<i64> {
    let rest = s.strip_prefix('c')?;
    if rest.is_empty() || rest.starts_with('+') {
        return None;
    }
    rest.parse().ok()
}

pub fn namespaced(vertex: &str, gen: &str) -> String {
    format!("{vertex}.{gen}")
}

pub fn stable_letter(edge: &str) -> String {
    format!("t_{edge}")
}

/// A vertex or edge group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Presented(Presentation),
    Permutation {
        degree: usize,
        generators: Vec<(String, Perm)>,
    },
    /// `H_n`, generated by `c_0 .. c_{n-1}`.
    VectorWindow {
        p: u32,
        n: u64,
    },
    /// `H_inf`. A declared window `[lo, hi)` makes the subgroup spanned by those
    /// coordinates presentable; without one the spec has no finite presentation.
    VectorInf {
        p: u32,
        window: Option<(i64, i64)>,
    },
    /// Vector group extended by a cyclic group whose generator `letter` acts
    /// through `automorphism`. `window = Some(n)` means `H_n`, `None` means `H_inf`.
    Split {
        p: u32,
        window: Option<u64>,
        automorphism: IndexBijection,
        letter: String,
    },
}

impl GroupSpec {
    pub fn trivial() -> Self {
        GroupSpec::Presented(Presentation::default())
    }

    /// `Z/order` as the permutation group generated by one `order`-cycle.
    pub fn cyclic(label: &str, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("cyclic group of order 0".into()));
        }
        let g = Perm::from_fn(order, |i| (i + 1) % order)?;
        Ok(GroupSpec::Permutation {
            degree: order,
            generators: vec![(label.to_string(), g)],
        })
    }

    /// `A_n` or `A_inf`: the vector group extended by `mu`.
    pub fn split_alpha(p: u32, window: Option<u64>, letter: &str) -> Result<Self> {
        let domain = window.map_or(IndexSet::Integers, IndexSet::Finite);
        Self::split(p, window, IndexBijection::alpha(p, domain)?, letter)
    }

    /// `B_n` or `B_inf`: the vector group extended by `lambda^-1 mu lambda`.
    pub fn split_beta(p: u32, window: Option<u64>, letter: &str) -> Result<Self> {
        let domain = window.map_or(IndexSet::Integers, IndexSet::Finite);
        Self::split(p, window, IndexBijection::beta(p, domain)?, letter)
    }

    pub fn split(
        p: u32,
        window: Option<u64>,
        automorphism: IndexBijection,
        letter: &str,
    ) -> Result<Self> {
        let s = GroupSpec::Split {
            p,
            window,
            automorphism,
            letter: letter.to_string(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Presented(pr) => pr.validate(),
            GroupSpec::Permutation { degree, generators } => {
                let mut seen = BTreeSet::new();
                for (label, g) in generators {
                    if !seen.insert(label) {
                        return Err(Error::DuplicateId(label.clone()));
                    }
                    if g.degree() != *degree {
                        return Err(Error::DegreeMismatch {
                            expected: *degree,
                            found: g.degree(),
                        });
                    }
                }
                Ok(())
            }
            GroupSpec::VectorWindow { p, n } => check_window(*p, *n),
            GroupSpec::VectorInf { p, window } => {
                crate::elemabelian::check_prime(*p)?;
                match window {
                    Some((lo, hi)) if lo >= hi => {
                        Err(Error::Precondition(format!("empty window [{lo}, {hi})")))
                    }
                    _ => Ok(()),
                }
            }
            GroupSpec::Split {
                p,
                window,
                automorphism,
                letter,
            } => {
                let domain = match window {
                    Some(n) => {
                        check_window(*p, *n)?;
                        IndexSet::Finite(*n)
                    }
                    None => {
                        crate::elemabelian::check_prime(*p)?;
                        IndexSet::Integers
                    }
                };
                if automorphism.p() != *p || automorphism.domain() != domain {
                    return Err(Error::ParameterMismatch(format!(
                        "automorphism {automorphism} does not act on the vector group of this spec"
                    )));
                }
                if parse_basis_label(letter).is_some() {
                    return Err(Error::DuplicateId(letter.clone()));
                }
                Ok(())
            }
        }
    }

    /// Prime and index set of the vector part, if the spec has one.
    pub fn vector_part(&self) -> Option<(u32, IndexSet)> {
        match *self {
            GroupSpec::VectorWindow { p, n } => Some((p, IndexSet::Finite(n))),
            GroupSpec::VectorInf { p, .. } => Some((p, IndexSet::Integers)),
            GroupSpec::Split { p, window, .. } => {
                Some((p, window.map_or(IndexSet::Integers, IndexSet::Finite)))
            }
            _ => None,
        }
    }

    /// Whether `label` names an element of the group (a generator, or any `c_i`
    /// of the vector part).
    pub fn knows_generator(&self, label: &str) -> bool {
        match self {
            GroupSpec::Presented(pr) => pr.generators.iter().any(|g| g == label),
            GroupSpec::Permutation { generators, .. } => generators.iter().any(|(l, _)| l == label),
            GroupSpec::VectorInf {
                window: Some((lo, hi)),
                ..
            } => parse_basis_label(label).is_some_and(|i| (*lo..*hi).contains(&i)),
            GroupSpec::Split { letter, .. } if letter == label => true,
            _ => {
                let Some((_, domain)) = self.vector_part() else {
                    return false;
                };
                parse_basis_label(label).is_some_and(|i| domain.contains(i))
            }
        }
    }

    /// Generator labels, when the spec is finitely generated as declared.
    pub fn generator_labels(&self) -> Result<Vec<String>> {
        match self {
            GroupSpec::Presented(pr) => Ok(pr.generators.clone()),
            GroupSpec::Permutation { generators, .. } => {
                Ok(generators.iter().map(|(l, _)| l.clone()).collect())
            }
            GroupSpec::VectorWindow { n, .. } => Ok((0..*n as i64).map(basis_label).collect()),
            GroupSpec::VectorInf {
                window: Some((lo, hi)),
                ..
            } => Ok((*lo..*hi).map(basis_label).collect()),
            GroupSpec::Split {
                window: Some(n),
                letter,
                ..
            } => {
                let mut v: Vec<String> = (0..*n as i64).map(basis_label).collect();
                v.push(letter.clone());
                Ok(v)
            }
            _ => Err(Error::NotPresentable(self.to_string())),
        }
    }

    pub fn is_enumerable(&self) -> bool {
        matches!(
            self,
            GroupSpec::Permutation { .. }
                | GroupSpec::VectorWindow { .. }
                | GroupSpec::Split {
                    window: Some(_),
                    ..
                }
        )
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        self.validate()?;
        match self {
            GroupSpec::Presented(pr) => Ok(pr.clone()),
            GroupSpec::Permutation { .. } => Ok(cayley_presentation(&self.realize("G")?)),
            GroupSpec::VectorWindow { p, n } => Ok(vector_presentation(*p, 0..*n as i64)),
            GroupSpec::VectorInf {
                p,
                window: Some((lo, hi)),
            } => Ok(vector_presentation(*p, *lo..*hi)),
            GroupSpec::Split {
                p,
                window: Some(n),
                automorphism,
                letter,
            } => {
                let mut pr = vector_presentation(*p, 0..*n as i64);
                let a = Word::gen(letter.as_str());
                pr.generators.push(letter.clone());
                pr.relators
                    .push(a.pow(automorphism.to_perm()?.order() as i64));
                for i in 0..*n as i64 {
                    let c = Word::gen(basis_label(i));
                    let img = Word::gen(basis_label(automorphism.eval(i)?));
                    pr.relators
                        .push(&(&(&a.inverse() * &c) * &a) * &img.inverse());
                }
                Ok(pr)
            }
            _ => Err(Error::NotPresentable(self.to_string())),
        }
    }

    /// A faithful permutation representation. Vector groups and split
    /// extensions over `Z/n` act on `p * n` points (see
    /// [`crate::elemabelian::wreath_perm`]).
    pub fn realize(&self, label: &str) -> Result<FiniteGroupHandle<PermOps>> {
        self.validate()?;
        let (degree, gens) = match self {
            GroupSpec::Permutation { degree, generators } => (*degree, generators.clone()),
            GroupSpec::VectorWindow { p, n } => {
                (*p as usize * *n as usize, vector_generators(*p, *n)?)
            }
            GroupSpec::Split {
                p,
                window: Some(n),
                automorphism,
                letter,
            } => {
                let mut gens = vector_generators(*p, *n)?;
                let zero = FpVector::zero(*p, IndexSet::Finite(*n));
                gens.push((
                    letter.clone(),
                    wreath_perm(&zero, &automorphism.to_perm()?)?,
                ));
                (*p as usize * *n as usize, gens)
            }
            _ => return Err(Error::NotEnumerable(self.to_string())),
        };
        FiniteGroupHandle::new(label, PermOps { degree }, gens, DEFAULT_CAP)
    }
}

fn vector_generators(p: u32, n: u64) -> Result<Vec<(String, Perm)>> {
    let domain = IndexSet::Finite(n);
    let id = Perm::identity(n as usize);
    (0..n as i64)
        .map(|i| {
            Ok((
                basis_label(i),
                wreath_perm(&FpVector::basis(p, domain, i)?, &id)?,
            ))
        })
        .collect()
}

fn vector_presentation(p: u32, range: std::ops::Range<i64>) -> Presentation {
    let idx: Vec<i64> = range.collect();
    let mut relators = Vec::new();
    for (k, &i) in idx.iter().enumerate() {
        let c = Word::gen(basis_label(i));
        relators.push(c.pow(p as i64));
        for &j in &idx[k + 1..] {
            relators.push(Word::commutator(&c, &Word::gen(basis_label(j))));
        }
    }
    Presentation {
        generators: idx.into_iter().map(basis_label).collect(),
        relators,
    }
}

/// Presentation read off the Cayley graph: one relator `w(g) s w(gs)^-1` per
/// element `g` and generator `s`, where `w` spells a BFS tree.
pub fn cayley_presentation<G: Group>(h: &FiniteGroupHandle<G>) -> Presentation {
    let gens = h.generators();
    let mut spell: HashMap<G::Elem, Word> = HashMap::from([(h.identity(), Word::empty())]);
    let mut queue = VecDeque::from([h.identity()]);
    let mut order = Vec::new();
    while let Some(x) = queue.pop_front() {
        order.push(x.clone());
        for (label, g) in gens {
            let y = h.mul(&x, g);
            if !spell.contains_key(&y) {
                let w = &spell[&x] * &Word::gen(label.as_str());
                spell.insert(y.clone(), w);
                queue.push_back(y);
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut relators = Vec::new();
    for x in &order {
        for (label, g) in gens {
            let r = (&(&spell[x] * &Word::gen(label.as_str())) * &spell[&h.mul(x, g)].inverse())
                .reduce();
            if !r.is_empty() && seen.insert(r.to_string()) {
                relators.push(r);
            }
        }
    }
    Presentation {
        generators: gens.iter().map(|(l, _)| l.clone()).collect(),
        relators,
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Presented(pr) => {
                let rels: Vec<String> = pr.relators.iter().map(|r| r.to_string()).collect();
                write!(f, "<{} | {}>", pr.generators.join(", "), rels.join(", "))
            }
            GroupSpec::Permutation { degree, generators } => {
                let gs: Vec<String> = generators.iter().map(|(l, g)| format!("{l}={g}")).collect();
                write!(f, "Sym({degree}) > <{}>", gs.join(", "))
            }
            GroupSpec::VectorWindow { p, n } => write!(f, "H_{n} (p={p})"),
            GroupSpec::VectorInf { p, window: None } => write!(f, "H_inf (p={p})"),
            GroupSpec::VectorInf {
                p,
                window: Some((lo, hi)),
            } => write!(f, "H_inf[{lo},{hi}) (p={p})"),
            GroupSpec::Split {
                p,
                window,
                automorphism,
                letter,
            } => {
                let h = window.map_or("H_inf".to_string(), |n| format!("H_{n}"));
                write!(f, "{h} x| <{letter}> via {automorphism} (p={p})")
            }
        }
    }
}

/// How an edge group maps into an endpoint group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Injection {
    /// Image word (in the endpoint's local labels) for every edge-group generator.
    Words(BTreeMap<String, Word>),
    /// `c_i -> c_{s(i)}` between vector groups.
    Induced(IndexBijection),
}

impl Injection {
    pub fn identity_on(spec: &GroupSpec) -> Result<Self> {
        match spec.vector_part() {
            Some((p, domain)) if !matches!(spec, GroupSpec::Split { .. }) => {
                Ok(Injection::Induced(IndexBijection::identity(p, domain)?))
            }
            _ => Ok(Injection::Words(
                spec.generator_labels()?
                    .into_iter()
                    .map(|l| (l.clone(), Word::gen(l)))
                    .collect(),
            )),
        }
    }

    /// `(generator, image word)` pairs. `window` supplies the generators of an
    /// edge group `H_inf` that declares none.
    pub fn images(
        &self,
        edge_group: &GroupSpec,
        window: Option<(i64, i64)>,
    ) -> Result<Vec<(String, Word)>> {
        let labels = match (edge_group, window) {
            (GroupSpec::VectorInf { p, window: None }, Some(w)) => GroupSpec::VectorInf {
                p: *p,
                window: Some(w),
            }
            .generator_labels()?,
            _ => edge_group.generator_labels()?,
        };
        match self {
            Injection::Words(map) => labels
                .into_iter()
                .map(|l| {
                    let w = map
                        .get(&l)
                        .cloned()
                        .ok_or_else(|| Error::UnknownGenerator(l.clone()))?;
                    Ok((l, w))
                })
                .collect(),
            Injection::Induced(b) => labels
                .into_iter()
                .map(|l| {
                    let i =
                        parse_basis_label(&l).ok_or_else(|| Error::UnknownGenerator(l.clone()))?;
                    Ok((l, Word::gen(basis_label(b.eval(i)?))))
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub group: GroupSpec,
    /// `phi_+ : H_e -> G_{e(+1)}`
    pub plus: Injection,
    /// `phi_- : H_e -> G_{e(-1)}`
    pub minus: Injection,
}

impl EdgeData {
    pub fn trivial() -> Self {
        EdgeData {
            group: GroupSpec::trivial(),
            plus: Injection::Words(BTreeMap::new()),
            minus: Injection::Words(BTreeMap::new()),
        }
    }

    pub fn injection(&self, sign: crate::freewords::Sign) -> &Injection {
        match sign {
            crate::freewords::Sign::Pos => &self.plus,
            crate::freewords::Sign::Neg => &self.minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphOfGroups {
    graph: Multigraph,
    vertex_groups: BTreeMap<String, GroupSpec>,
    edges: BTreeMap<String, EdgeData>,
}

impl GraphOfGroups {
    pub fn new(
        graph: Multigraph,
        vertex_groups: BTreeMap<String, GroupSpec>,
        edges: BTreeMap<String, EdgeData>,
    ) -> Result<Self> {
        for v in vertex_groups.keys() {
            if !graph.has_vertex(v) {
                return Err(Error::UnknownVertex(v.clone()));
            }
        }
        for e in edges.keys() {
            graph.edge(e)?;
        }
        for v in graph.vertices() {
            vertex_groups
                .get(v)
                .ok_or_else(|| Error::Precondition(format!("vertex {v} has no group")))?
                .validate()?;
        }
        let g = GraphOfGroups {
            graph,
            vertex_groups,
            edges,
        };
        for e in g.graph.edges() {
            let data = g
                .edges
                .get(&e.id)
                .ok_or_else(|| Error::Precondition(format!("edge {} has no group", e.id)))?;
            data.group.validate()?;
            for sign in [crate::freewords::Sign::Pos, crate::freewords::Sign::Neg] {
                g.check_injection(
                    &e.id,
                    &data.group,
                    data.injection(sign),
                    &g.vertex_groups[e.end(sign)],
                )?;
            }
        }
        Ok(g)
    }

    /// Every vertex and edge group trivial.
    pub fn trivial(graph: Multigraph) -> Result<Self> {
        let vg = graph
            .vertices()
            .map(|v| (v.to_string(), GroupSpec::trivial()))
            .collect();
        let eg = graph
            .edges()
            .map(|e| (e.id.clone(), EdgeData::trivial()))
            .collect();
        Self::new(graph, vg, eg)
    }

    /// `Z/order` at every vertex and edge, with identity injections.
    pub fn uniform_cyclic(graph: Multigraph, order: usize) -> Result<Self> {
        let group = GroupSpec::cyclic("g", order)?;
        let id = Injection::identity_on(&group)?;
        let vg = graph
            .vertices()
            .map(|v| (v.to_string(), group.clone()))
            .collect();
        let eg = graph
            .edges()
            .map(|e| {
                let data = EdgeData {
                    group: group.clone(),
                    plus: id.clone(),
                    minus: id.clone(),
                };
                (e.id.clone(), data)
            })
            .collect();
        Self::new(graph, vg, eg)
    }

    fn check_injection(
        &self,
        e: &str,
        src: &GroupSpec,
        inj: &Injection,
        tgt: &GroupSpec,
    ) -> Result<()> {
        let bad = |msg: String| Error::BadEmbedding(format!("edge {e}: {msg}"));
        match inj {
            Injection::Induced(b) => {
                let (GroupSpec::VectorWindow { p, .. } | GroupSpec::VectorInf { p, .. }) = src
                else {
                    return Err(bad("induced injection needs a vector edge group".into()));
                };
                let src_domain = src.vector_part().map(|(_, d)| d);
                if b.p() != *p
                    || Some(b.domain()) != src_domain
                    || tgt.vector_part() != Some((*p, b.domain()))
                {
                    return Err(bad(format!("{b} does not map {src} into {tgt}")));
                }
                // Words in lambda, mu are invertible; spot-check that the inverse undoes it.
                let inv = b.inverse();
                let probe: Vec<i64> = match b.domain() {
                    IndexSet::Finite(n) => (0..n as i64).collect(),
                    IndexSet::Integers => (-64..64).collect(),
                };
                for i in probe {
                    if inv.eval(b.eval(i)?)? != i {
                        return Err(bad(format!("{b} is not invertible at {i}")));
                    }
                }
                if let GroupSpec::VectorInf {
                    window: Some((lo, hi)),
                    ..
                } = tgt
                {
                    if let GroupSpec::VectorInf {
                        window: Some((a, z)),
                        ..
                    } = src
                    {
                        for i in *a..*z {
                            if !(*lo..*hi).contains(&b.eval(i)?) {
                                return Err(bad(format!("c{i} leaves the target window")));
                            }
                        }
                    } else {
                        return Err(bad("unbounded source, windowed target".into()));
                    }
                }
                Ok(())
            }
            Injection::Words(map) => {
                if matches!(
                    src,
                    GroupSpec::VectorInf { window: None, .. }
                        | GroupSpec::Split { window: None, .. }
                ) {
                    return Err(bad(
                        "infinitely generated edge group needs an induced injection".into(),
                    ));
                }
                let labels = src.generator_labels()?;
                for k in map.keys() {
                    if !labels.contains(k) {
                        return Err(Error::UnknownGenerator(k.clone()));
                    }
                }
                let images = inj.images(src, None)?;
                for (_, w) in &images {
                    for l in w.letters() {
                        if !tgt.knows_generator(&l.gen) {
                            return Err(bad(format!("image letter {} not in {tgt}", l.gen)));
                        }
                    }
                }
                if src.is_enumerable() && tgt.is_enumerable() {
                    let hs = src.realize("H")?;
                    let ht = tgt.realize("G")?;
                    let pairs = images
                        .iter()
                        .map(|(l, w)| Ok((hs.generator(l)?.clone(), ht.eval_word(w)?)))
                        .collect::<Result<Vec<_>>>()?;
                    extend_hom(hs.group(), ht.group(), &pairs, hs.order())
                        .map_err(|err| bad(err.to_string()))?;
                }
                Ok(())
            }
        }
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn vertex_group(&self, v: &str) -> Result<&GroupSpec> {
        self.vertex_groups
            .get(v)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn vertex_groups(&self) -> &BTreeMap<String, GroupSpec> {
        &self.vertex_groups
    }

    pub fn edge_data(&self, e: &str) -> Result<&EdgeData> {
        self.edges
            .get(e)
            .ok_or_else(|| Error::UnknownEdge(e.to_string()))
    }

    /// `(h phi_+, h phi_-)` for each generator `h` of `H_e`, as elements of the
    /// realized endpoint groups.
    pub fn edge_generator_pairs(
        &self,
        e: &str,
        plus_group: &FiniteGroupHandle<PermOps>,
        minus_group: &FiniteGroupHandle<PermOps>,
    ) -> Result<Vec<(Perm, Perm)>> {
        let data = self.edge_data(e)?;
        let plus = data.plus.images(&data.group, None)?;
        let minus = data.minus.images(&data.group, None)?;
        plus.iter()
            .zip(&minus)
            .map(|((_, a), (_, b))| Ok((plus_group.eval_word(a)?, minus_group.eval_word(b)?)))
            .collect()
    }
}

/// Presentation of the fundamental group relative to the maximal tree `t`.
///
/// Generators: every vertex generator `v.g` (vertices in id order), then `t_e`
/// for each non-tree edge in id order. Relators: vertex relators, then per edge
/// in id order and per edge-group generator `h`: `(h phi_+)(h phi_-)^-1` for tree
/// edges and `t_e^-1 (h phi_+) t_e (h phi_-)^-1` otherwise. Relators are freely
/// reduced and empty ones dropped.
pub fn build_presentation(g: &GraphOfGroups, t: &SpanningTree) -> Result<Presentation> {
    if !g.graph.is_connected()? {
        return Err(Error::Disconnected);
    }
    t.validate(&g.graph)?;
    let mut generators = Vec::new();
    let mut relators = Vec::new();
    for (v, spec) in &g.vertex_groups {
        let pr = spec.to_presentation()?;
        generators.extend(pr.generators.iter().map(|x| namespaced(v, x)));
        relators.extend(pr.relators.iter().map(|r| r.rename(|x| namespaced(v, x))));
    }
    for e in g.graph.edges() {
        let data = &g.edges[&e.id];
        let plus = data.plus.images(&data.group, None)?;
        let minus = data.minus.images(&data.group, None)?;
        let tree = t.contains(&e.id);
        let te = Word::gen(stable_letter(&e.id));
        if !tree {
            generators.push(stable_letter(&e.id));
        }
        for ((_, hp), (_, hm)) in plus.iter().zip(&minus) {
            let hp = hp.rename(|x| namespaced(&e.plus, x));
            let hm = hm.rename(|x| namespaced(&e.minus, x));
            let r = if tree {
                &hp * &hm.inverse()
            } else {
                &(&(&te.inverse() * &hp) * &te) * &hm.inverse()
            };
            relators.push(r);
        }
    }
    let relators = relators
        .into_iter()
        .map(|r| r.reduce())
        .filter(|r| !r.is_empty())
        .collect();
    Presentation::new(generators, relators)
}

/// Image of an edge group inside one endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupImage {
    pub vertex: String,
    /// `(edge generator, image word in the vertex's own labels)`
    pub generators: Vec<(String, Word)>,
    /// The enumerated image when both groups are finite.
    pub elements: Option<Vec<Perm>>,
    /// The image is the entire vector subgroup of the vertex group.
    pub whole_vector_part: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeImages {
    pub plus: SubgroupImage,
    pub minus: SubgroupImage,
}

/// `H_{+e}` and `H_{-e}`. An edge group `H_inf` is described by the images of
/// `c_i` for `i` in `window`, which is then required.
pub fn edge_subgroup_images(
    g: &GraphOfGroups,
    e: &str,
    window: Option<(i64, i64)>,
) -> Result<EdgeImages> {
    let edge = g.graph.edge(e)?;
    let data = g.edge_data(e)?;
    if matches!(data.group, GroupSpec::VectorInf { window: None, .. }) && window.is_none() {
        return Err(Error::Precondition(
            "an index window is needed to describe H_inf".into(),
        ));
    }
    let side = |sign| -> Result<SubgroupImage> {
        let inj = data.injection(sign);
        let vertex = edge.end(sign).to_string();
        let tgt = g.vertex_group(&vertex)?;
        let generators = inj.images(&data.group, window)?;
        let elements = if data.group.is_enumerable() && tgt.is_enumerable() {
            let h = tgt.realize(&vertex)?;
            let gens = generators
                .iter()
                .map(|(_, w)| h.eval_word(w))
                .collect::<Result<Vec<_>>>()?;
            Some(h.subgroup(&gens)?)
        } else {
            None
        };
        let whole_vector_part = matches!(inj, Injection::Induced(_))
            && matches!(
                data.group,
                GroupSpec::VectorWindow { .. } | GroupSpec::VectorInf { window: None, .. }
            );
        Ok(SubgroupImage {
            vertex,
            generators,
            elements,
            whole_vector_part,
        })
    };
    Ok(EdgeImages {
        plus: side(crate::freewords::Sign::Pos)?,
        minus: side(crate::freewords::Sign::Neg)?,
    })
}

/// On-disk description: the multigraph schema plus `vertex_groups`,
/// `edge_groups` and `injections`. Missing edge groups are trivial.
///
/// ```json
/// {
///   "vertices": ["u", "v"],
///   "edges": [{"id": "e", "from": "u", "to": "v"}],
///   "vertex_groups": {
///     "u": {"kind": "cyclic", "order": 4},
///     "v": {"kind": "permutation", "degree": 4, "generators": {"x": "(0 1 2 3)"}}
///   },
///   "edge_groups": {"e": {"kind": "cyclic", "order": 2}},
///   "injections": {"e": {"plus": {"g": "x^2"}, "minus": {"g": "g^2"}}}
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphOfGroupsFile {
    #[serde(flatten)]
    pub graph: GraphFile,
    #[serde(default)]
    pub vertex_groups: BTreeMap<String, GroupRecord>,
    #[serde(default)]
    pub edge_groups: BTreeMap<String, GroupRecord>,
    #[serde(default)]
    pub injections: BTreeMap<String, InjectionPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupRecord {
    Trivial,
    Presentation {
        #[serde(default)]
        generators: Vec<String>,
        #[serde(default)]
        relators: Vec<String>,
    },
    /// Generated by `g`.
    Cyclic {
        order: usize,
    },
    Permutation {
        degree: usize,
        generators: BTreeMap<String, String>,
    },
    Vector {
        p: u32,
        n: u64,
    },
    VectorInf {
        p: u32,
        #[serde(default)]
        window: Option<(i64, i64)>,
    },
    Split {
        p: u32,
        #[serde(default)]
        n: Option<u64>,
        automorphism: String,
        letter: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InjectionPair {
    pub plus: InjectionRecord,
    pub minus: InjectionRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InjectionRecord {
    Induced { induced: String },
    Words(BTreeMap<String, String>),
}

impl GroupRecord {
    pub fn to_spec(&self) -> Result<GroupSpec> {
        let spec = match self {
            GroupRecord::Trivial => GroupSpec::trivial(),
            GroupRecord::Presentation {
                generators,
                relators,
            } => GroupSpec::Presented(Presentation::new(
                generators.clone(),
                relators.iter().map(|r| r.parse()).collect::<Result<_>>()?,
            )?),
            GroupRecord::Cyclic { order } => GroupSpec::cyclic("g", *order)?,
            GroupRecord::Permutation { degree, generators } => GroupSpec::Permutation {
                degree: *degree,
                generators: generators
                    .iter()
                    .map(|(l, c)| Ok((l.clone(), Perm::parse_cycles(*degree, c)?)))
                    .collect::<Result<_>>()?,
            },
            GroupRecord::Vector { p, n } => GroupSpec::VectorWindow { p: *p, n: *n },
            GroupRecord::VectorInf { p, window } => GroupSpec::VectorInf {
                p: *p,
                window: *window,
            },
            GroupRecord::Split {
                p,
                n,
                automorphism,
                letter,
            } => {
                let domain = n.map_or(IndexSet::Integers, IndexSet::Finite);
                GroupSpec::split(
                    *p,
                    *n,
                    IndexBijection::parse(*p, domain, automorphism)?,
                    letter,
                )?
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl InjectionRecord {
    fn to_injection(&self, edge_group: &GroupSpec) -> Result<Injection> {
        match self {
            InjectionRecord::Induced { induced } => {
                let (p, domain) = edge_group.vector_part().ok_or_else(|| {
                    Error::BadEmbedding("induced injection needs a vector edge group".into())
                })?;
                Ok(Injection::Induced(IndexBijection::parse(
                    p, domain, induced,
                )?))
            }
            InjectionRecord::Words(m) => Ok(Injection::Words(
                m.iter()
                    .map(|(k, v)| Ok((k.clone(), v.parse()?)))
                    .collect::<Result<_>>()?,
            )),
        }
    }
}

impl GraphOfGroupsFile {
    pub fn to_gog(&self) -> Result<GraphOfGroups> {
        let graph = self.graph.to_graph()?;
        for k in self.edge_groups.keys().chain(self.injections.keys()) {
            graph.edge(k)?;
        }
        let vertex_groups = graph
            .vertices()
            .map(|v| {
                let spec = match self.vertex_groups.get(v) {
                    Some(r) => r.to_spec()?,
                    None => GroupSpec::trivial(),
                };
                Ok((v.to_string(), spec))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let edges = graph
            .edges()
            .map(|e| {
                let group = match self.edge_groups.get(&e.id) {
                    Some(r) => r.to_spec()?,
                    None => GroupSpec::trivial(),
                };
                let data = match self.injections.get(&e.id) {
                    Some(pair) => EdgeData {
                        plus: pair.plus.to_injection(&group)?,
                        minus: pair.minus.to_injection(&group)?,
                        group,
                    },
                    None if group == GroupSpec::trivial() => EdgeData::trivial(),
                    None => {
                        let id = Injection::identity_on(&group)?;
                        EdgeData {
                            plus: id.clone(),
                            minus: id,
                            group,
                        }
                    }
                };
                Ok((e.id.clone(), data))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        GraphOfGroups::new(graph, vertex_groups, edges)
    }
}
