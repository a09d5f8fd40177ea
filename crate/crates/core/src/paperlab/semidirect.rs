use std::fmt;

use rand::Rng;

use crate::elemabelian::{
    check_prime, check_window, FpVector, IndexBijection, IndexSet, InducedAutomorphism,
};
use crate::freewords::{Sign, Word};
use crate::gog::parse_basis_label;
use crate::normalform::{FreeProductWord, Syllable};
use crate::{Error, Result};

/// Reduced control word: syllables `(letter index, exponent)` with adjacent
/// letters distinct and, for letters of finite order `m`, exponents in `1..m`.
pub type ControlWord = FreeProductWord<i64>;

/// A generator of the control group, acting on the vector group through the
/// automorphism induced by `action`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlLetter {
    pub name: String,
    /// `None` for a free letter.
    pub order: Option<u32>,
    pub action: IndexBijection,
}

/// `h * w`: the vector part comes first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SemidirectElement {
    pub vector: FpVector,
    pub control: ControlWord,
}

impl SemidirectElement {
    pub fn is_identity(&self) -> bool {
        self.vector.is_zero() && self.control.is_empty()
    }
}

/// `H x| Q` with `H` a vector group over `Z/p` and `Q` the free product of the
/// cyclic groups generated by the control letters. Conjugation satisfies
/// `w^-1 h w = h . act(w)`, where `act` composes the letters' automorphisms
/// left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemidirectModel {
    p: u32,
    domain: IndexSet,
    letters: Vec<ControlLetter>,
}

impl SemidirectModel {
    pub fn new(p: u32, domain: IndexSet, letters: Vec<ControlLetter>) -> Result<Self> {
        check_prime(p)?;
        if let IndexSet::Finite(n) = domain {
            check_window(p, n)?;
        }
        let probe: Vec<i64> = match domain {
            IndexSet::Finite(n) => (0..n as i64).collect(),
            IndexSet::Integers => (-64..64).collect(),
        };
        for (k, l) in letters.iter().enumerate() {
            if letters[..k].iter().any(|m| m.name == l.name) || parse_basis_label(&l.name).is_some()
            {
                return Err(Error::DuplicateId(l.name.clone()));
            }
            if l.action.p() != p || l.action.domain() != domain {
                return Err(Error::ParameterMismatch(format!(
                    "letter {} acts on another group",
                    l.name
                )));
            }
            if let Some(m) = l.order {
                if m < 2 {
                    return Err(Error::Precondition(format!(
                        "letter {} has order {m}",
                        l.name
                    )));
                }
                // The cyclic group must act: action^m fixes every index.
                let power = l.action.pow(m as i64);
                for &i in &probe {
                    if power.eval(i)? != i {
                        return Err(Error::Precondition(format!(
                            "action of {} does not have order dividing {m}",
                            l.name
                        )));
                    }
                }
            }
        }
        Ok(SemidirectModel { p, domain, letters })
    }

    fn ab(p: u32, domain: IndexSet) -> Result<Self> {
        let letters = vec![
            ControlLetter {
                name: "a".into(),
                order: Some(p),
                action: IndexBijection::alpha(p, domain)?,
            },
            ControlLetter {
                name: "b".into(),
                order: Some(p),
                action: IndexBijection::beta(p, domain)?,
            },
        ];
        Self::new(p, domain, letters)
    }

    /// `P_n`: `H_n` extended by `a` (acting as `mu`) and `b` (as `lambda^-1 mu lambda`).
    pub fn p_n(p: u32, n: u64) -> Result<Self> {
        Self::ab(p, IndexSet::Finite(n))
    }

    /// `P_inf`, the same over `Z`.
    pub fn p_inf(p: u32) -> Result<Self> {
        Self::ab(p, IndexSet::Integers)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn domain(&self) -> IndexSet {
        self.domain
    }

    pub fn letters(&self) -> &[ControlLetter] {
        &self.letters
    }

    pub fn letter_index(&self, name: &str) -> Result<usize> {
        self.letters
            .iter()
            .position(|l| l.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn identity(&self) -> SemidirectElement {
        SemidirectElement {
            vector: FpVector::zero(self.p, self.domain),
            control: ControlWord::empty(),
        }
    }

    pub fn vector(&self, v: FpVector) -> Result<SemidirectElement> {
        if v.p() != self.p || v.domain() != self.domain {
            return Err(Error::ParameterMismatch(format!(
                "vector {v} is not in this model"
            )));
        }
        Ok(SemidirectElement {
            vector: v,
            control: ControlWord::empty(),
        })
    }

    /// `c_i`
    pub fn basis(&self, i: i64) -> Result<SemidirectElement> {
        self.vector(FpVector::basis(self.p, self.domain, i)?)
    }

    /// `letter^k`
    pub fn letter(&self, name: &str, k: i64) -> Result<SemidirectElement> {
        let idx = self.letter_index(name)?;
        let mut control = Vec::new();
        self.push(&mut control, idx, k);
        Ok(SemidirectElement {
            vector: FpVector::zero(self.p, self.domain),
            control: FreeProductWord(control),
        })
    }

    fn normalize(&self, letter: usize, k: i64) -> i64 {
        match self.letters[letter].order {
            Some(m) => k.rem_euclid(m as i64),
            None => k,
        }
    }

    fn push(&self, word: &mut Vec<Syllable<i64>>, letter: usize, k: i64) {
        let k = self.normalize(letter, k);
        if k == 0 {
            return;
        }
        match word.last_mut() {
            Some(top) if top.factor == letter => {
                let sum = self.normalize(letter, top.elem + k);
                if sum == 0 {
                    word.pop();
                } else {
                    top.elem = sum;
                }
            }
            _ => word.push(Syllable::new(letter, k)),
        }
    }

    /// Errors unless `x` belongs to this model with a reduced control word.
    pub fn check(&self, x: &SemidirectElement) -> Result<()> {
        if x.vector.p() != self.p || x.vector.domain() != self.domain {
            return Err(Error::ParameterMismatch(format!(
                "vector {} is not in this model",
                x.vector
            )));
        }
        let mut rebuilt = Vec::new();
        for s in x.control.syllables() {
            if s.factor >= self.letters.len() {
                return Err(Error::UnknownFactor(s.factor));
            }
            self.push(&mut rebuilt, s.factor, s.elem);
        }
        if rebuilt != x.control.0 {
            return Err(Error::Precondition("control word is not reduced".into()));
        }
        Ok(())
    }

    /// `act(w)` as a single index bijection.
    pub fn act(&self, w: &ControlWord) -> Result<IndexBijection> {
        let mut b = IndexBijection::identity(self.p, self.domain)?;
        for s in w.syllables() {
            b = b.then(&self.letters[s.factor].action.pow(s.elem))?;
        }
        Ok(b)
    }

    /// `h . act(w)`, i.e. `w^-1 h w`.
    pub fn conjugate_vector(&self, h: &FpVector, w: &ControlWord) -> Result<FpVector> {
        let mut v = h.clone();
        for s in w.syllables() {
            v = InducedAutomorphism::new(self.letters[s.factor].action.pow(s.elem)).apply(&v)?;
        }
        Ok(v)
    }

    /// `h . act(w)^-1`, i.e. `w h w^-1`.
    fn conjugate_vector_inv(&self, h: &FpVector, w: &ControlWord) -> Result<FpVector> {
        let mut v = h.clone();
        for s in w.syllables().iter().rev() {
            v = InducedAutomorphism::new(self.letters[s.factor].action.pow(-s.elem)).apply(&v)?;
        }
        Ok(v)
    }

    fn mul_control(&self, a: &ControlWord, b: &ControlWord) -> ControlWord {
        let mut out = a.0.clone();
        for s in b.syllables() {
            self.push(&mut out, s.factor, s.elem);
        }
        FreeProductWord(out)
    }

    fn inverse_control(&self, a: &ControlWord) -> ControlWord {
        let mut out = Vec::new();
        for s in a.syllables().iter().rev() {
            self.push(&mut out, s.factor, -s.elem);
        }
        FreeProductWord(out)
    }

    /// `(h1 w1)(h2 w2) = (h1 + w1 h2 w1^-1) w1 w2`
    pub fn mul(&self, x: &SemidirectElement, y: &SemidirectElement) -> Result<SemidirectElement> {
        self.check(x)?;
        self.check(y)?;
        let moved = self.conjugate_vector_inv(&y.vector, &x.control)?;
        Ok(SemidirectElement {
            vector: x.vector.add(&moved)?,
            control: self.mul_control(&x.control, &y.control),
        })
    }

    /// `(h w)^-1 = w^-1 h^-1 = ((-h) . act(w)) w^-1`
    pub fn inverse(&self, x: &SemidirectElement) -> Result<SemidirectElement> {
        self.check(x)?;
        Ok(SemidirectElement {
            vector: self.conjugate_vector(&x.vector.neg(), &x.control)?,
            control: self.inverse_control(&x.control),
        })
    }

    pub fn pow(&self, x: &SemidirectElement, k: i64) -> Result<SemidirectElement> {
        let base = if k < 0 { self.inverse(x)? } else { x.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    /// `x^-1 y^-1 x y`
    pub fn commutator(
        &self,
        x: &SemidirectElement,
        y: &SemidirectElement,
    ) -> Result<SemidirectElement> {
        let xi = self.inverse(x)?;
        let yi = self.inverse(y)?;
        self.mul(&self.mul(&xi, &yi)?, &self.mul(x, y)?)
    }

    pub fn product<'a>(
        &self,
        xs: impl IntoIterator<Item = &'a SemidirectElement>,
    ) -> Result<SemidirectElement> {
        xs.into_iter()
            .try_fold(self.identity(), |acc, x| self.mul(&acc, x))
    }

    /// Evaluates a word whose letters are `c_i` or control-letter names.
    pub fn eval_word(&self, w: &Word) -> Result<SemidirectElement> {
        let mut acc = self.identity();
        for l in w.letters() {
            let k = l.sign.as_i64();
            let x = match parse_basis_label(&l.gen) {
                Some(i) => self.vector(FpVector::from_entries(self.p, self.domain, [(i, k)])?)?,
                None => self.letter(&l.gen, k)?,
            };
            acc = self.mul(&acc, &x)?;
        }
        Ok(acc)
    }

    /// The control word spelled with letter names.
    pub fn control_to_word(&self, w: &ControlWord) -> Word {
        let mut out = Word::empty();
        for s in w.syllables() {
            let sign = if s.elem < 0 { Sign::Neg } else { Sign::Pos };
            for _ in 0..s.elem.unsigned_abs() {
                out.0.push(crate::freewords::Letter::new(
                    self.letters[s.factor].name.as_str(),
                    sign,
                ));
            }
        }
        out
    }

    pub fn display<'a>(&'a self, x: &'a SemidirectElement) -> impl fmt::Display + 'a {
        DisplayElement { model: self, x }
    }

    /// A random element: vector entries on `support` and up to `max_syllables`
    /// control syllables. Free letters get exponents in `-2..=2`.
    pub fn random_element(
        &self,
        rng: &mut impl Rng,
        support: std::ops::Range<i64>,
        max_syllables: usize,
    ) -> Result<SemidirectElement> {
        let p = self.p as i64;
        let mut entries = Vec::new();
        for i in support {
            if rng.random_bool(0.3) {
                entries.push((i, rng.random_range(1..p)));
            }
        }
        let mut control = Vec::new();
        if !self.letters.is_empty() {
            for _ in 0..rng.random_range(0..=max_syllables) {
                let letter = rng.random_range(0..self.letters.len());
                let k = match self.letters[letter].order {
                    Some(m) => rng.random_range(1..m as i64),
                    None => [-2, -1, 1, 2][rng.random_range(0..4)],
                };
                self.push(&mut control, letter, k);
            }
        }
        Ok(SemidirectElement {
            vector: FpVector::from_entries(self.p, self.domain, entries)?,
            control: FreeProductWord(control),
        })
    }
}

struct DisplayElement<'a> {
    model: &'a SemidirectModel,
    x: &'a SemidirectElement,
}

impl fmt::Display for DisplayElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = self.x;
        match (x.vector.is_zero(), x.control.is_empty()) {
            (true, true) => write!(f, "1"),
            (false, true) => write!(f, "{}", x.vector),
            (true, false) => write!(f, "{}", syllables(self.model, &x.control)),
            (false, false) => write!(f, "{} {}", x.vector, syllables(self.model, &x.control)),
        }
    }
}

fn syllables(model: &SemidirectModel, w: &ControlWord) -> String {
    w.syllables()
        .iter()
        .map(|s| {
            let name = &model.letters[s.factor].name;
            if s.elem == 1 {
                name.clone()
            } else {
                format!("{name}^{}", s.elem)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
