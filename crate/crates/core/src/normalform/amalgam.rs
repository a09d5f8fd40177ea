use std::collections::HashMap;

use super::{extend_hom, FiniteGroupHandle, Group, Rule, Syllable, Trace, TraceStep};
use crate::{Error, Result};

/// `head * r_1 * ... * r_k`: `head` is an element of the common subgroup, the `r_i`
/// are non-trivial coset representatives alternating between the two factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmalgamNormalForm<E> {
    pub head: E,
    pub syllables: Vec<Syllable<E>>,
}

/// Per-factor data: the embedding of the common subgroup and the right-coset
/// decomposition `g = embed(h) * rep`.
#[derive(Debug, Clone)]
struct Side<G: Group> {
    factor: FiniteGroupHandle<G>,
    embed: HashMap<G::Elem, G::Elem>,
    split: HashMap<G::Elem, (G::Elem, G::Elem)>,
}

impl<G: Group> Side<G> {
    fn build(
        factor: FiniteGroupHandle<G>,
        sub: &FiniteGroupHandle<G>,
        gen_images: &[G::Elem],
    ) -> Result<Self> {
        if gen_images.len() != sub.generators().len() {
            return Err(Error::BadEmbedding(format!(
                "{} generator images given for {} generators",
                gen_images.len(),
                sub.generators().len()
            )));
        }
        for g in gen_images {
            factor.check(g)?;
        }
        let pairs: Vec<_> = sub
            .generators()
            .iter()
            .map(|(_, g)| g.clone())
            .zip(gen_images.iter().cloned())
            .collect();
        let embed = extend_hom(sub.group(), factor.group(), &pairs, sub.order())?;
        let pullback: HashMap<&G::Elem, &G::Elem> = embed.iter().map(|(h, x)| (x, h)).collect();

        // right cosets H g, each represented by its smallest element
        let mut split = HashMap::with_capacity(factor.order());
        for g in factor.elements() {
            if split.contains_key(g) {
                continue;
            }
            let coset: Vec<G::Elem> = embed.values().map(|x| factor.mul(x, g)).collect();
            // H itself is represented by the identity
            let id = factor.identity();
            let rep = if coset.contains(&id) {
                id
            } else {
                coset.iter().min().expect("subgroup is non-empty").clone()
            };
            let rep_inv = factor.inv(&rep);
            for x in coset {
                let h = (*pullback[&factor.mul(&x, &rep_inv)]).clone();
                split.insert(x, (h, rep.clone()));
            }
        }
        Ok(Side {
            factor,
            embed,
            split,
        })
    }
}

/// Amalgamated free product of two finite groups over a common subgroup.
#[derive(Debug, Clone)]
pub struct Amalgam<G: Group> {
    sub: FiniteGroupHandle<G>,
    sides: [Side<G>; 2],
}

impl<G: Group> Amalgam<G> {
    /// `a_images[i]` and `b_images[i]` are the images of the `i`-th generator of `sub`.
    pub fn new(
        a: FiniteGroupHandle<G>,
        b: FiniteGroupHandle<G>,
        sub: FiniteGroupHandle<G>,
        a_images: &[G::Elem],
        b_images: &[G::Elem],
    ) -> Result<Self> {
        let sa = Side::build(a, &sub, a_images)?;
        let sb = Side::build(b, &sub, b_images)?;
        Ok(Amalgam {
            sub,
            sides: [sa, sb],
        })
    }

    pub fn factor(&self, i: usize) -> Result<&FiniteGroupHandle<G>> {
        self.sides
            .get(i)
            .map(|s| &s.factor)
            .ok_or(Error::UnknownFactor(i))
    }

    pub fn subgroup(&self) -> &FiniteGroupHandle<G> {
        &self.sub
    }

    /// Image of a subgroup element inside factor `i`.
    pub fn embed(&self, i: usize, h: &G::Elem) -> Result<G::Elem> {
        let side = self.sides.get(i).ok_or(Error::UnknownFactor(i))?;
        side.embed
            .get(h)
            .cloned()
            .ok_or_else(|| Error::OutsideUniverse(self.sub.label.clone()))
    }

    pub fn reduce(&self, raw: &[Syllable<G::Elem>]) -> Result<AmalgamNormalForm<G::Elem>> {
        Ok(self.reduce_traced(raw)?.0)
    }

    /// Left-multiplies the normal form by each letter, right to left.
    pub fn reduce_traced(
        &self,
        raw: &[Syllable<G::Elem>],
    ) -> Result<(AmalgamNormalForm<G::Elem>, Vec<TraceStep>)> {
        for s in raw {
            self.factor(s.factor)?.check(&s.elem)?;
        }
        let mut trace = Trace::default();
        let mut head = self.sub.identity();
        // reversed: the first representative sits at the end
        let mut reps: Vec<Syllable<G::Elem>> = Vec::new();
        for (pos, s) in raw.iter().enumerate().rev() {
            let side = &self.sides[s.factor];
            let f = &side.factor;
            let mut y = f.mul(&s.elem, &side.embed[&head]);
            if let Some(r) = reps.pop_if(|r| r.factor == s.factor) {
                y = f.mul(&y, &r.elem);
                trace.push(Rule::Merge, pos);
            }
            let (h, rep) = side.split[&y].clone();
            trace.push(Rule::Transversal, pos);
            head = h;
            if rep == f.identity() {
                trace.push(Rule::Cancel, pos);
            } else {
                reps.push(Syllable::new(s.factor, rep));
            }
        }
        reps.reverse();
        Ok((
            AmalgamNormalForm {
                head,
                syllables: reps,
            },
            trace.steps,
        ))
    }

    pub fn is_identity(&self, nf: &AmalgamNormalForm<G::Elem>) -> bool {
        nf.syllables.is_empty() && nf.head == self.sub.identity()
    }

    /// A raw word spelling the normal form: the head (inside factor 0) then the
    /// representatives.
    pub fn spell(&self, nf: &AmalgamNormalForm<G::Elem>) -> Result<Vec<Syllable<G::Elem>>> {
        let mut out = vec![Syllable::new(0, self.embed(0, &nf.head)?)];
        out.extend(nf.syllables.iter().cloned());
        Ok(out)
    }
}

pub fn amalgam_reduce<G: Group>(
    amalgam: &Amalgam<G>,
    raw: &[Syllable<G::Elem>],
) -> Result<AmalgamNormalForm<G::Elem>> {
    amalgam.reduce(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalform::PermOps;
    use crate::permgroup::Perm;
    use proptest::prelude::*;

    fn cyc(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    /// Z/4 *_{Z/2} Z/6 realised on 4 and 6 points.
    fn z4_z6() -> Amalgam<PermOps> {
        let a = FiniteGroupHandle::new(
            "A",
            PermOps { degree: 4 },
            vec![("x".into(), cyc(4, "(0 1 2 3)"))],
            100,
        )
        .unwrap();
        let b = FiniteGroupHandle::new(
            "B",
            PermOps { degree: 6 },
            vec![("y".into(), cyc(6, "(0 1 2 3 4 5)"))],
            100,
        )
        .unwrap();
        let h = FiniteGroupHandle::new(
            "H",
            PermOps { degree: 2 },
            vec![("z".into(), cyc(2, "(0 1)"))],
            100,
        )
        .unwrap();
        Amalgam::new(
            a,
            b,
            h,
            &[cyc(4, "(0 2)(1 3)")],
            &[cyc(6, "(0 3)(1 4)(2 5)")],
        )
        .unwrap()
    }

    #[test]
    fn examples() {
        let am = z4_z6();
        let x = cyc(4, "(0 1 2 3)");
        // x^2 lies in H
        let nf = am.reduce(&[Syllable::new(0, x.pow(2))]).unwrap();
        assert!(nf.syllables.is_empty());
        assert_eq!(nf.head, cyc(2, "(0 1)"));
        let nf = am.reduce(&[Syllable::new(0, x.clone())]).unwrap();
        assert_eq!(nf.syllables.len(), 1);
        // x^2 = y^3 in the amalgam
        let y = cyc(6, "(0 1 2 3 4 5)");
        let nf = am
            .reduce(&[Syllable::new(0, x.pow(2)), Syllable::new(1, y.pow(3))])
            .unwrap();
        assert!(am.is_identity(&nf));
        assert!(am.is_identity(&am.reduce(&[]).unwrap()));
    }

    #[test]
    fn rejects_bad_input() {
        let am = z4_z6();
        assert!(matches!(
            am.reduce(&[Syllable::new(1, cyc(4, "(0 1)"))]),
            Err(Error::OutsideUniverse(_))
        ));
        assert_eq!(
            am.reduce(&[Syllable::new(2, cyc(4, "()"))]),
            Err(Error::UnknownFactor(2))
        );
        let a = FiniteGroupHandle::new(
            "A",
            PermOps { degree: 4 },
            vec![("x".into(), cyc(4, "(0 1 2 3)"))],
            100,
        )
        .unwrap();
        let h = FiniteGroupHandle::new(
            "H",
            PermOps { degree: 2 },
            vec![("z".into(), cyc(2, "(0 1)"))],
            100,
        )
        .unwrap();
        // an element of order 4 cannot be the image of an involution
        assert!(matches!(
            Amalgam::new(
                a.clone(),
                a,
                h,
                &[cyc(4, "(0 1 2 3)")],
                &[cyc(4, "(0 2)(1 3)")]
            ),
            Err(Error::BadEmbedding(_))
        ));
    }

    proptest! {
        #[test]
        fn normal_form_is_multiplicative(u in prop::collection::vec((0..2usize, 0..6i64), 0..16),
                                         v in prop::collection::vec((0..2usize, 0..6i64), 0..16)) {
            let am = z4_z6();
            let gens = [cyc(4, "(0 1 2 3)"), cyc(6, "(0 1 2 3 4 5)")];
            let raw = |w: &[(usize, i64)]| -> Vec<Syllable<Perm>> {
                w.iter().map(|&(f, k)| Syllable::new(f, gens[f].pow(k))).collect()
            };
            let (u, v) = (raw(&u), raw(&v));
            let nu = am.reduce(&u).unwrap();
            let nv = am.reduce(&v).unwrap();
            prop_assert_eq!(am.reduce(&am.spell(&nu).unwrap()).unwrap(), nu.clone());
            let mut joined = am.spell(&nu).unwrap();
            joined.extend(am.spell(&nv).unwrap());
            let uv: Vec<_> = u.iter().chain(&v).cloned().collect();
            prop_assert_eq!(am.reduce(&uv).unwrap(), am.reduce(&joined).unwrap());
            prop_assert!(nu.syllables.windows(2).all(|w| w[0].factor != w[1].factor));
        }
    }
}
