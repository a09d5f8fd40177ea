use std::collections::HashMap;

use super::{extend_hom, FreeProduct, Group, Rule, Syllable, Trace, TraceStep};
use crate::freewords::Sign;
use crate::{Error, Result};

/// Stable letter `t` with relation `t^-1 (h phi_+) t = h phi_-`, where the two
/// associated subgroups live in factors `plus_factor` and `minus_factor`.
#[derive(Debug, Clone)]
pub struct StableLetter<E> {
    pub name: String,
    pub plus_factor: usize,
    pub minus_factor: usize,
    plus_to_minus: HashMap<E, E>,
    minus_to_plus: HashMap<E, E>,
}

impl<E> StableLetter<E> {
    /// Order of the associated subgroups.
    pub fn subgroup_order(&self) -> usize {
        self.plus_to_minus.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HnnLetter<E> {
    Base(Syllable<E>),
    Stable { letter: usize, sign: Sign },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HnnWord<E>(pub Vec<HnnLetter<E>>);

impl<E> HnnWord<E> {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn stable_count(&self) -> usize {
        self.0
            .iter()
            .filter(|l| matches!(l, HnnLetter::Stable { .. }))
            .count()
    }

    pub fn stable_count_of(&self, letter: usize) -> usize {
        self.0
            .iter()
            .filter(|l| matches!(l, HnnLetter::Stable { letter: x, .. } if *x == letter))
            .count()
    }
}

enum Item<E> {
    Base(Vec<Syllable<E>>),
    Stable(usize, Sign),
}

/// HNN-extension of a free product of finite groups.
#[derive(Debug, Clone)]
pub struct HnnSpec<G: Group> {
    base: FreeProduct<G>,
    stable: Vec<StableLetter<G::Elem>>,
}

impl<G: Group> HnnSpec<G> {
    pub fn new(base: FreeProduct<G>) -> Self {
        HnnSpec {
            base,
            stable: Vec::new(),
        }
    }

    pub fn base(&self) -> &FreeProduct<G> {
        &self.base
    }

    pub fn stable_letters(&self) -> &[StableLetter<G::Elem>] {
        &self.stable
    }

    pub fn stable_index(&self, name: &str) -> Option<usize> {
        self.stable.iter().position(|s| s.name == name)
    }

    /// Adds a stable letter. `pairs` lists `(h phi_+, h phi_-)` for the generators
    /// `h` of the edge group; the isomorphism between the associated subgroups is
    /// obtained by extending it and must be well defined.
    pub fn add_stable_letter(
        &mut self,
        name: impl Into<String>,
        plus_factor: usize,
        minus_factor: usize,
        pairs: &[(G::Elem, G::Elem)],
    ) -> Result<usize> {
        let fp = self.base.factor(plus_factor)?;
        let fm = self.base.factor(minus_factor)?;
        for (a, b) in pairs {
            fp.check(a)?;
            fm.check(b)?;
        }
        let plus_to_minus = extend_hom(fp.group(), fm.group(), pairs, fp.order())?;
        let minus_to_plus = plus_to_minus
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        self.stable.push(StableLetter {
            name: name.into(),
            plus_factor,
            minus_factor,
            plus_to_minus,
            minus_to_plus,
        });
        Ok(self.stable.len() - 1)
    }

    fn push_base(
        &self,
        stack: &mut Vec<Item<G::Elem>>,
        s: Syllable<G::Elem>,
        trace: &mut Trace,
        pos: usize,
    ) {
        if let Some(Item::Base(seg)) = stack.last_mut() {
            self.base.push(seg, s, trace, pos);
            if seg.is_empty() {
                stack.pop();
            }
        } else {
            let mut seg = Vec::new();
            self.base.push(&mut seg, s, trace, pos);
            if !seg.is_empty() {
                stack.push(Item::Base(seg));
            }
        }
    }

    /// The element `g'` when `t^prev g t^sign` is a pinch.
    fn pinch(
        &self,
        letter: usize,
        prev: Sign,
        sign: Sign,
        seg: &[Syllable<G::Elem>],
    ) -> Option<Option<Syllable<G::Elem>>> {
        if prev == sign {
            return None;
        }
        let st = &self.stable[letter];
        match seg {
            [] => Some(None),
            [g] => {
                // t^-1 g t with g in H_+, or t g t^-1 with g in H_-
                let (from, to, map) = match prev {
                    Sign::Neg => (st.plus_factor, st.minus_factor, &st.plus_to_minus),
                    Sign::Pos => (st.minus_factor, st.plus_factor, &st.minus_to_plus),
                };
                if g.factor != from {
                    return None;
                }
                map.get(&g.elem).map(|h| Some(Syllable::new(to, h.clone())))
            }
            _ => None,
        }
    }

    pub fn reduce(&self, w: &HnnWord<G::Elem>) -> Result<HnnWord<G::Elem>> {
        Ok(self.reduce_traced(w)?.0)
    }

    /// Stack-based Britton reduction: the stack is kept reduced, and a new pinch
    /// can only appear when a stable letter is pushed.
    pub fn reduce_traced(
        &self,
        w: &HnnWord<G::Elem>,
    ) -> Result<(HnnWord<G::Elem>, Vec<TraceStep>)> {
        let mut stack: Vec<Item<G::Elem>> = Vec::new();
        let mut trace = Trace::default();
        for (pos, letter) in w.0.iter().enumerate() {
            match letter {
                HnnLetter::Base(s) => {
                    self.base.check(s)?;
                    self.push_base(&mut stack, s.clone(), &mut trace, pos);
                }
                &HnnLetter::Stable { letter, sign } => {
                    if letter >= self.stable.len() {
                        return Err(Error::MalformedLetter(format!("no stable letter {letter}")));
                    }
                    let n = stack.len();
                    let (prev, seg): (Option<Sign>, &[Syllable<G::Elem>]) = match stack.as_slice() {
                        [.., Item::Stable(l, s)] if *l == letter => (Some(*s), &[]),
                        [.., Item::Stable(l, s), Item::Base(seg)] if *l == letter => {
                            (Some(*s), seg)
                        }
                        _ => (None, &[]),
                    };
                    let reduced = prev.and_then(|s| self.pinch(letter, s, sign, seg));
                    match reduced {
                        Some(replacement) => {
                            let drop = if seg.is_empty() { 1 } else { 2 };
                            stack.truncate(n - drop);
                            trace.push(Rule::Pinch, pos);
                            if let Some(g) = replacement {
                                self.push_base(&mut stack, g, &mut trace, pos);
                            }
                        }
                        None => stack.push(Item::Stable(letter, sign)),
                    }
                }
            }
        }
        let mut out = Vec::new();
        for item in stack {
            match item {
                Item::Base(seg) => out.extend(seg.into_iter().map(HnnLetter::Base)),
                Item::Stable(letter, sign) => out.push(HnnLetter::Stable { letter, sign }),
            }
        }
        Ok((HnnWord(out), trace.steps))
    }
}

pub fn britton_reduce<G: Group>(
    spec: &HnnSpec<G>,
    w: &HnnWord<G::Elem>,
) -> Result<HnnWord<G::Elem>> {
    spec.reduce(w)
}
