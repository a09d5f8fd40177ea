use super::{FiniteGroupHandle, Group, Rule, Trace, TraceStep};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable<E> {
    pub factor: usize,
    pub elem: E,
}

impl<E> Syllable<E> {
    pub fn new(factor: usize, elem: E) -> Self {
        Syllable { factor, elem }
    }
}

/// Alternating syllables, none of them the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeProductWord<E>(pub Vec<Syllable<E>>);

impl<E> FreeProductWord<E> {
    pub fn empty() -> Self {
        FreeProductWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn syllables(&self) -> &[Syllable<E>] {
        &self.0
    }
}

/// Free product of finite groups sharing an element type.
#[derive(Debug, Clone)]
pub struct FreeProduct<G: Group> {
    factors: Vec<FiniteGroupHandle<G>>,
}

impl<G: Group> FreeProduct<G> {
    pub fn new(factors: Vec<FiniteGroupHandle<G>>) -> Self {
        FreeProduct { factors }
    }

    pub fn factors(&self) -> &[FiniteGroupHandle<G>] {
        &self.factors
    }

    pub fn factor(&self, i: usize) -> Result<&FiniteGroupHandle<G>> {
        self.factors.get(i).ok_or(Error::UnknownFactor(i))
    }

    pub fn check(&self, s: &Syllable<G::Elem>) -> Result<()> {
        self.factor(s.factor)?.check(&s.elem)
    }

    /// Appends one syllable to a normal form held as a stack.
    pub(crate) fn push(
        &self,
        stack: &mut Vec<Syllable<G::Elem>>,
        s: Syllable<G::Elem>,
        trace: &mut Trace,
        position: usize,
    ) {
        let f = &self.factors[s.factor];
        match stack.last_mut() {
            Some(top) if top.factor == s.factor => {
                top.elem = f.mul(&top.elem, &s.elem);
                trace.push(Rule::Merge, position);
                if top.elem == f.identity() {
                    stack.pop();
                    trace.push(Rule::Cancel, position);
                }
            }
            _ if s.elem == f.identity() => trace.push(Rule::Cancel, position),
            _ => stack.push(s),
        }
    }

    pub fn reduce(&self, raw: &[Syllable<G::Elem>]) -> Result<FreeProductWord<G::Elem>> {
        Ok(self.reduce_traced(raw)?.0)
    }

    pub fn reduce_traced(
        &self,
        raw: &[Syllable<G::Elem>],
    ) -> Result<(FreeProductWord<G::Elem>, Vec<TraceStep>)> {
        let mut stack = Vec::with_capacity(raw.len());
        let mut trace = Trace::default();
        for (pos, s) in raw.iter().enumerate() {
            self.check(s)?;
            self.push(&mut stack, s.clone(), &mut trace, pos);
        }
        Ok((FreeProductWord(stack), trace.steps))
    }

    pub fn multiply(
        &self,
        a: &FreeProductWord<G::Elem>,
        b: &FreeProductWord<G::Elem>,
    ) -> Result<FreeProductWord<G::Elem>> {
        let raw: Vec<_> = a.0.iter().chain(&b.0).cloned().collect();
        self.reduce(&raw)
    }

    pub fn inverse(&self, a: &FreeProductWord<G::Elem>) -> FreeProductWord<G::Elem> {
        FreeProductWord(
            a.0.iter()
                .rev()
                .map(|s| Syllable::new(s.factor, self.factors[s.factor].inv(&s.elem)))
                .collect(),
        )
    }
}

pub fn free_product_reduce<G: Group>(
    fp: &FreeProduct<G>,
    raw: &[Syllable<G::Elem>],
) -> Result<FreeProductWord<G::Elem>> {
    fp.reduce(raw)
}
