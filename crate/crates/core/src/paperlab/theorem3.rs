use std::collections::BTreeMap;

use serde::Serialize;

use super::quotient::{windowed_relators, FinitePQuotient, VectorImage};
use super::semidirect::{ControlLetter, SemidirectElement, SemidirectModel};
use crate::elemabelian::{check_prime, wreath_perm, FpVector, IndexBijection, IndexSet};
use crate::freewords::Word;
use crate::gog::{
    basis_label, namespaced, stable_letter, EdgeData, GraphOfGroups, GroupSpec, Injection,
};
use crate::multigraph::{Multigraph, SpanningTree};
use crate::permgroup::Perm;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum Theorem3Case {
    /// Vertex group `H_inf`; every edge is a loop with `phi_+ = id`,
    /// `phi_- = alpha^-1 beta`. `gamma = t_edge`.
    SingleVertex { edge: String },
    /// `f(1)` carries `A_inf`, every other vertex `B_inf`, all edge maps are the
    /// identity of `H_inf`.
    MultiVertex { f: String, f_in_tree: bool },
}

/// The graph of groups from the proof of the counterexample theorem, with its
/// fundamental group modelled as `H_inf x| Q`.
///
/// In the model every vertex copy of `H_inf` is identified (tree edges are the
/// identity), a vertex letter `v.a` or `v.b` has order `p` and acts as `mu` or
/// `lambda^-1 mu lambda`, and the stable letter `t_e` of a non-tree edge acts as
/// `phi_-` (the identity in the multi-vertex case).
#[derive(Debug, Clone)]
pub struct Theorem3Instance {
    pub p: u32,
    pub gog: GraphOfGroups,
    pub tree: SpanningTree,
    pub case: Theorem3Case,
    pub model: SemidirectModel,
    pub gamma: SemidirectElement,
}

pub fn build_theorem3(g: &Multigraph, t: &SpanningTree, p: u32) -> Result<Theorem3Instance> {
    check_prime(p)?;
    if g.edge_count() == 0 {
        return Err(Error::Precondition(
            "the graph needs at least one edge".into(),
        ));
    }
    if !g.is_connected()? {
        return Err(Error::Disconnected);
    }
    t.validate(g)?;
    let h = GroupSpec::VectorInf { p, window: None };
    let id = IndexBijection::identity(p, IndexSet::Integers)?;
    let twist = IndexBijection::alpha_inv_beta(p, IndexSet::Integers)?;

    if g.vertex_count() == 1 {
        let v = g.vertices().next().expect("one vertex").to_string();
        let edges: BTreeMap<String, EdgeData> = g
            .edges()
            .map(|e| {
                (
                    e.id.clone(),
                    EdgeData {
                        group: h.clone(),
                        plus: Injection::Induced(id.clone()),
                        minus: Injection::Induced(twist.clone()),
                    },
                )
            })
            .collect();
        let gog = GraphOfGroups::new(g.clone(), BTreeMap::from([(v, h.clone())]), edges)?;
        let letters = g
            .edges()
            .map(|e| ControlLetter {
                name: stable_letter(&e.id),
                order: None,
                action: twist.clone(),
            })
            .collect();
        let model = SemidirectModel::new(p, IndexSet::Integers, letters)?;
        let edge = g.edges().next().expect("non-empty").id.clone();
        let gamma = model.letter(&stable_letter(&edge), 1)?;
        return Ok(Theorem3Instance {
            p,
            gog,
            tree: t.clone(),
            case: Theorem3Case::SingleVertex { edge },
            model,
            gamma,
        });
    }

    let f = g
        .edges()
        .find(|e| !e.is_loop())
        .ok_or_else(|| Error::Precondition("no edge joins two distinct vertices".into()))?
        .clone();
    let mut vertex_groups = BTreeMap::new();
    let mut letters = Vec::new();
    for v in g.vertices() {
        let (spec, letter, action) = if v == f.plus {
            (
                GroupSpec::split_alpha(p, None, "a")?,
                "a",
                IndexBijection::alpha(p, IndexSet::Integers)?,
            )
        } else {
            (
                GroupSpec::split_beta(p, None, "b")?,
                "b",
                IndexBijection::beta(p, IndexSet::Integers)?,
            )
        };
        vertex_groups.insert(v.to_string(), spec);
        letters.push(ControlLetter {
            name: namespaced(v, letter),
            order: Some(p),
            action,
        });
    }
    let mut edges = BTreeMap::new();
    for e in g.edges() {
        edges.insert(
            e.id.clone(),
            EdgeData {
                group: h.clone(),
                plus: Injection::Induced(id.clone()),
                minus: Injection::Induced(id.clone()),
            },
        );
        if !t.contains(&e.id) {
            letters.push(ControlLetter {
                name: stable_letter(&e.id),
                order: None,
                action: id.clone(),
            });
        }
    }
    let gog = GraphOfGroups::new(g.clone(), vertex_groups, edges)?;
    let model = SemidirectModel::new(p, IndexSet::Integers, letters)?;
    let a_inv = model.letter(&namespaced(&f.plus, "a"), -1)?;
    let b = model.letter(&namespaced(&f.minus, "b"), 1)?;
    let f_in_tree = t.contains(&f.id);
    let gamma = if f_in_tree {
        model.mul(&a_inv, &b)?
    } else {
        // (t_f^-1 a t_f)^-1 b
        let tf = model.letter(&stable_letter(&f.id), 1)?;
        let tf_inv = model.inverse(&tf)?;
        model.product([&tf_inv, &a_inv, &tf, &b])?
    };
    Ok(Theorem3Instance {
        p,
        gog,
        tree: t.clone(),
        case: Theorem3Case::MultiVertex { f: f.id, f_in_tree },
        model,
        gamma,
    })
}

impl Theorem3Instance {
    /// Defining relators of the model on indices in `window`. Tree-edge relators
    /// `c_i c_i^-1` are trivial once the vertex copies of `H_inf` are identified.
    pub fn relators(&self, window: (i64, i64)) -> Result<Vec<Word>> {
        windowed_relators(&self.model, window)
    }

    /// `act(gamma)`
    pub fn gamma_action(&self) -> Result<IndexBijection> {
        self.model.act(&self.gamma.control)
    }

    /// Whether `gamma^-1 c_i gamma = c_i . alpha^-1 beta` for every `i` in `samples`.
    pub fn gamma_acts_as_alpha_inv_beta(
        &self,
        samples: impl IntoIterator<Item = i64>,
    ) -> Result<bool> {
        let twist = IndexBijection::alpha_inv_beta(self.p, IndexSet::Integers)?;
        let gi = self.model.inverse(&self.gamma)?;
        for i in samples {
            let c = self.model.basis(i)?;
            let conj = self.model.product([&gi, &c, &self.gamma])?;
            if conj != self.model.basis(twist.eval(i)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `pi . sigma_n` extended to the model: `c_i -> c_{i mod n}`, `v.a -> mu`,
    /// `v.b -> lambda^-1 mu lambda`, and each stable letter to the index
    /// permutation it acts by.
    pub fn wreath_quotient(&self, n: u64) -> Result<FinitePQuotient> {
        let zero = FpVector::zero(self.p, IndexSet::Finite(n));
        let letters = self
            .model
            .letters()
            .iter()
            .map(|l| {
                let s = IndexBijection::from_word(self.p, IndexSet::Finite(n), l.action.word())?;
                Ok((l.name.clone(), wreath_perm(&zero, &s.to_perm()?)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        FinitePQuotient::new(
            format!("W_{n}"),
            self.p,
            self.p as usize * n as usize,
            VectorImage::Wreath { n },
            letters,
        )
    }

    /// Onto `Z/p`: kills `H_inf` and the stable letters, sends vertex letters to
    /// a generator.
    pub fn cyclic_quotient(&self) -> Result<FinitePQuotient> {
        let p = self.p as usize;
        let gen = Perm::from_fn(p, |i| (i + 1) % p)?;
        let letters = self
            .model
            .letters()
            .iter()
            .map(|l| {
                let img = if l.order.is_some() {
                    gen.clone()
                } else {
                    Perm::identity(p)
                };
                (l.name.clone(), img)
            })
            .collect();
        FinitePQuotient::new(format!("Z/{p}"), self.p, p, VectorImage::Trivial, letters)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem3Witness {
    pub quotient: String,
    /// Order of the image of `gamma`.
    pub k: u64,
    pub h: String,
    pub w: String,
    pub nontrivial: bool,
    pub in_vector_subgroup: bool,
    pub killed: bool,
    pub relators_checked: usize,
}

impl Theorem3Witness {
    pub fn passed(&self) -> bool {
        self.nontrivial && self.in_vector_subgroup && self.killed
    }
}

/// `w = [c_0, gamma^k]` with `k` the order of the image of `gamma` in `q`.
/// The three properties are recorded separately. Errors if `q` fails a model
/// relator on its window.
pub fn theorem3_witness(
    inst: &Theorem3Instance,
    q: &FinitePQuotient,
) -> Result<(SemidirectElement, Theorem3Witness)> {
    if q.p() != inst.p {
        return Err(Error::ParameterMismatch(format!(
            "quotient over p = {}",
            q.p()
        )));
    }
    let relators = inst.relators(q.relator_window())?;
    let bad = q.failing_relators(&relators)?;
    if let Some(&i) = bad.first() {
        return Err(Error::NotAHomomorphism(format!(
            "{} does not kill {}",
            q.label, relators[i]
        )));
    }
    let k = q.image(&inst.model, &inst.gamma)?.order();
    if k == 0 {
        return Err(Error::InfiniteTarget(q.label.clone()));
    }
    let m = &inst.model;
    let h = m.basis(0)?;
    let gk = m.pow(&inst.gamma, k as i64)?;
    let w = m.commutator(&h, &gk)?;
    let nontrivial = !w.is_identity();
    let in_vector_subgroup = w.control.is_empty();
    let killed = q.image(m, &w)?.is_identity();
    let report = Theorem3Witness {
        quotient: q.label.clone(),
        k,
        h: basis_label(0),
        w: m.display(&w).to_string(),
        nontrivial,
        in_vector_subgroup,
        killed,
        relators_checked: relators.len(),
    };
    Ok((w, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::edge;

    fn tree_without(g: &Multigraph, skip: &str) -> SpanningTree {
        let keep: Vec<&str> = g
            .edges()
            .map(|e| e.id.as_str())
            .filter(|&e| e != skip)
            .collect();
        g.spanning_subgraph(keep).unwrap().spanning_tree().unwrap()
    }

    #[test]
    fn single_vertex_two_loops() {
        let g = Multigraph::new(["v"], [edge("e", "v", "v"), edge("f", "v", "v")]).unwrap();
        let inst = build_theorem3(&g, &g.spanning_tree().unwrap(), 2).unwrap();
        assert_eq!(inst.case, Theorem3Case::SingleVertex { edge: "e".into() });
        for e in ["e", "f"] {
            assert_eq!(
                inst.gog.edge_data(e).unwrap().minus,
                Injection::Induced(IndexBijection::alpha_inv_beta(2, IndexSet::Integers).unwrap())
            );
        }
        assert!(inst.gamma_acts_as_alpha_inv_beta(-6..6).unwrap());
        for q in [
            inst.wreath_quotient(2).unwrap(),
            inst.wreath_quotient(4).unwrap(),
            inst.cyclic_quotient().unwrap(),
        ] {
            let (w, rep) = theorem3_witness(&inst, &q).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert!(w.control.is_empty());
        }
    }

    #[test]
    fn path_and_triangle() {
        let path = Multigraph::new(["u", "v"], [edge("e", "u", "v")]).unwrap();
        let inst = build_theorem3(&path, &path.spanning_tree().unwrap(), 3).unwrap();
        assert_eq!(
            inst.gog.vertex_group("v").unwrap(),
            &GroupSpec::split_alpha(3, None, "a").unwrap()
        );
        assert_eq!(
            inst.gog.vertex_group("u").unwrap(),
            &GroupSpec::split_beta(3, None, "b").unwrap()
        );
        assert!(inst.gamma_acts_as_alpha_inv_beta(-9..9).unwrap());

        let tri = Multigraph::new(
            ["u", "v", "w"],
            [
                edge("e", "u", "v"),
                edge("f", "v", "w"),
                edge("g", "w", "u"),
            ],
        )
        .unwrap();
        let inst = build_theorem3(&tri, &tree_without(&tri, "e"), 2).unwrap();
        assert_eq!(
            inst.case,
            Theorem3Case::MultiVertex {
                f: "e".into(),
                f_in_tree: false
            }
        );
        assert!(inst.model.display(&inst.gamma).to_string().contains("t_e"));
        assert!(inst.gamma_acts_as_alpha_inv_beta(-8..8).unwrap());
        let (_, rep) = theorem3_witness(&inst, &inst.wreath_quotient(8).unwrap()).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn bad_quotient_is_rejected() {
        let g = Multigraph::new(["v"], [edge("e", "v", "v")]).unwrap();
        let inst = build_theorem3(&g, &g.spanning_tree().unwrap(), 2).unwrap();
        let letters = BTreeMap::from([("t_e".to_string(), Perm::identity(8))]);
        let q = FinitePQuotient::new("bad", 2, 8, VectorImage::Wreath { n: 4 }, letters).unwrap();
        assert!(matches!(
            theorem3_witness(&inst, &q),
            Err(Error::NotAHomomorphism(_))
        ));
        let no_edges = Multigraph::new(["v"], []).unwrap();
        assert!(build_theorem3(&no_edges, &no_edges.spanning_tree().unwrap(), 2).is_err());
    }

    #[test]
    fn shift_law() {
        let g = Multigraph::new(["v"], [edge("e", "v", "v")]).unwrap();
        let inst = build_theorem3(&g, &g.spanning_tree().unwrap(), 3).unwrap();
        for k in 1..5 {
            let gk = inst.model.pow(&inst.gamma, k).unwrap();
            let moved = inst
                .model
                .conjugate_vector(&inst.model.basis(0).unwrap().vector, &gk.control)
                .unwrap();
            assert_eq!(moved.support().collect::<Vec<_>>(), [3 * k]);
        }
    }
}
