use std::collections::{HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use crate::freewords::{Sign, Word};
use crate::permgroup::Perm;
use crate::{Error, Result};

/// Group operations on an element type.
pub trait Group: Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        let base = if k < 0 { self.inv(a) } else { a.clone() };
        (0..k.unsigned_abs()).fold(self.identity(), |acc, _| self.mul(&acc, &base))
    }
}

/// Permutations of a fixed degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermOps {
    pub degree: usize,
}

impl Group for PermOps {
    type Elem = Perm;
    fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }
    fn mul(&self, a: &Perm, b: &Perm) -> Perm {
        a * b
    }
    fn inv(&self, a: &Perm) -> Perm {
        a.inverse()
    }
}

/// A finite group with its full element list, sorted so that "minimal element"
/// is well defined.
#[derive(Debug, Clone)]
pub struct FiniteGroupHandle<G: Group> {
    pub label: String,
    group: G,
    generators: Vec<(String, G::Elem)>,
    elements: Vec<G::Elem>,
    members: HashSet<G::Elem>,
}

impl<G: Group> FiniteGroupHandle<G> {
    pub fn new(
        label: impl Into<String>,
        group: G,
        generators: Vec<(String, G::Elem)>,
        cap: usize,
    ) -> Result<Self> {
        let label = label.into();
        let gens: Vec<G::Elem> = generators.iter().map(|(_, g)| g.clone()).collect();
        let mut elements = closure(&group, &gens, cap)?;
        elements.sort();
        let members = elements.iter().cloned().collect();
        Ok(FiniteGroupHandle {
            label,
            group,
            generators,
            elements,
            members,
        })
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn generators(&self) -> &[(String, G::Elem)] {
        &self.generators
    }

    pub fn generator(&self, label: &str) -> Result<&G::Elem> {
        self.generators
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, g)| g)
            .ok_or_else(|| Error::UnknownGenerator(label.to_string()))
    }

    pub fn elements(&self) -> &[G::Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &G::Elem) -> bool {
        self.members.contains(x)
    }

    pub fn check(&self, x: &G::Elem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::OutsideUniverse(self.label.clone()))
        }
    }

    pub fn identity(&self) -> G::Elem {
        self.group.identity()
    }

    pub fn mul(&self, a: &G::Elem, b: &G::Elem) -> G::Elem {
        self.group.mul(a, b)
    }

    pub fn inv(&self, a: &G::Elem) -> G::Elem {
        self.group.inv(a)
    }

    /// Value of a word in the generator labels.
    pub fn eval_word(&self, w: &Word) -> Result<G::Elem> {
        let mut acc = self.identity();
        for l in w.letters() {
            let g = self.generator(&l.gen)?;
            acc = match l.sign {
                Sign::Pos => self.mul(&acc, g),
                Sign::Neg => self.mul(&acc, &self.inv(g)),
            };
        }
        Ok(acc)
    }

    /// Elements of the subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[G::Elem]) -> Result<Vec<G::Elem>> {
        for g in gens {
            self.check(g)?;
        }
        let mut s = closure(&self.group, gens, self.elements.len())?;
        s.sort();
        Ok(s)
    }
}

fn closure<G: Group>(group: &G, gens: &[G::Elem], cap: usize) -> Result<Vec<G::Elem>> {
    let id = group.identity();
    let mut seen = HashSet::from([id.clone()]);
    let mut out = vec![id.clone()];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in gens {
                let y = group.mul(x, g);
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    out.push(y.clone());
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Extends a generator assignment `src_gen -> tgt_image` to the whole (finite)
/// source group, failing if the result is not a well-defined injective map.
pub fn extend_hom<S: Group, T: Group>(
    src: &S,
    tgt: &T,
    gens: &[(S::Elem, T::Elem)],
    cap: usize,
) -> Result<HashMap<S::Elem, T::Elem>> {
    let mut map = HashMap::from([(src.identity(), tgt.identity())]);
    let mut frontier = vec![(src.identity(), tgt.identity())];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (x, y) in &frontier {
            for (g, h) in gens {
                let xg = src.mul(x, g);
                let yh = tgt.mul(y, h);
                match map.get(&xg) {
                    Some(prev) if *prev != yh => {
                        return Err(Error::BadEmbedding(format!(
                            "{xg:?} would map to both {prev:?} and {yh:?}"
                        )))
                    }
                    Some(_) => {}
                    None => {
                        if map.len() >= cap {
                            return Err(Error::CapExceeded(cap));
                        }
                        map.insert(xg.clone(), yh.clone());
                        next.push((xg, yh));
                    }
                }
            }
        }
        frontier = next;
    }
    let images: HashSet<&T::Elem> = map.values().collect();
    if images.len() != map.len() {
        return Err(Error::BadEmbedding("map is not injective".into()));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn handles_enumerate_and_evaluate() {
        let ops = PermOps { degree: 4 };
        let g = FiniteGroupHandle::new(
            "D4",
            ops,
            vec![
                ("r".into(), cyc(4, "(0 1 2 3)")),
                ("s".into(), cyc(4, "(0 1)(2 3)")),
            ],
            100,
        )
        .unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.elements()[0], Perm::identity(4));
        let w: Word = "r r r r s s".parse().unwrap();
        assert!(g.eval_word(&w).unwrap().is_identity());
        assert_eq!(g.subgroup(&[cyc(4, "(0 2)(1 3)")]).unwrap().len(), 2);
        assert!(g.check(&cyc(4, "(0 1)")).is_err());
    }

    #[test]
    fn hom_extension() {
        let c4 = PermOps { degree: 4 };
        let c2 = PermOps { degree: 2 };
        // Z/4 -> Z/4 squaring-free embedding is fine, Z/4 -> Z/2 is not injective
        let r = cyc(4, "(0 1 2 3)");
        let ok = extend_hom(&c4, &c4, &[(r.clone(), r.pow(3))], 100).unwrap();
        assert_eq!(ok.len(), 4);
        assert!(matches!(
            extend_hom(&c4, &c2, &[(r.clone(), cyc(2, "(0 1)"))], 100),
            Err(Error::BadEmbedding(_))
        ));
        // not well defined: r has order 4, image order 3
        let c3 = PermOps { degree: 3 };
        assert!(matches!(
            extend_hom(&c4, &c3, &[(r, cyc(3, "(0 1 2)"))], 100),
            Err(Error::BadEmbedding(_))
        ));
    }
}
