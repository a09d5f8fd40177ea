//! Words over signed generator alphabets and finite presentations.
//!
//! Text formats: a word is whitespace-separated tokens `g` or `g^-1` (the empty word
//! may be written `1`); a presentation is a `generators:` line followed by one
//! `relator:` line per relator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: String,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: impl Into<String>, sign: Sign) -> Self {
        Letter {
            gen: gen.into(),
            sign,
        }
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            gen: self.gen.clone(),
            sign: -self.sign,
        }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// A word in the generators; not necessarily reduced.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: impl Into<String>) -> Self {
        Word(vec![Letter::new(g, Sign::Pos)])
    }

    pub fn gen_inv(g: impl Into<String>) -> Self {
        Word(vec![Letter::new(g, Sign::Neg)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(Letter::inverse).collect())
    }

    /// Free reduction with a stack.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if out.last().is_some_and(|top| top.cancels(l)) {
                out.pop();
            } else {
                out.push(l.clone());
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    /// Concatenation followed by free reduction.
    pub fn mul_reduced(&self, other: &Word) -> Word {
        (self * other).reduce()
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            out.extend(base.0.iter().cloned());
        }
        Word(out)
    }

    /// `a^-1 b^-1 a b`
    pub fn commutator(a: &Word, b: &Word) -> Word {
        &(&(&a.inverse() * &b.inverse()) * a) * b
    }

    /// Applies `f` to every generator name.
    pub fn rename(&self, f: impl Fn(&str) -> String) -> Word {
        Word(
            self.0
                .iter()
                .map(|l| Letter::new(f(&l.gen), l.sign))
                .collect(),
        )
    }

    /// Exponent sum of every generator.
    pub fn exponent_sums(&self) -> BTreeMap<&str, i64> {
        let mut sums = BTreeMap::new();
        for l in &self.0 {
            *sums.entry(l.gen.as_str()).or_insert(0) += l.sign.as_i64();
        }
        sums
    }

    /// Count of letters per generator, ignoring sign.
    pub fn occurrences(&self, gen: &str) -> usize {
        self.0.iter().filter(|l| l.gen == gen).count()
    }
}

/// Free reduction of `w`.
pub fn reduce(w: &Word) -> Word {
    w.reduce()
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend(rhs.0.iter().cloned());
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match l.sign {
                Sign::Pos => write!(f, "{}", l.gen)?,
                Sign::Neg => write!(f, "{}^-1", l.gen)?,
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let bad = || Error::Parse(format!("bad word token `{tok}`"));
            let (gen, exp) = match tok.split_once('^') {
                Some((g, k)) => (g, k.parse::<i64>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            if gen.is_empty() || exp.unsigned_abs() > 1 << 20 {
                return Err(bad());
            }
            let sign = if exp < 0 { Sign::Neg } else { Sign::Pos };
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter::new(gen, sign));
            }
        }
        Ok(Word(letters))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let p = Presentation {
            generators,
            relators,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &self.generators {
            if !seen.insert(g.as_str()) {
                return Err(Error::DuplicateId(g.clone()));
            }
        }
        for r in &self.relators {
            for l in r.letters() {
                if !seen.contains(l.gen.as_str()) {
                    return Err(Error::UnknownGenerator(l.gen.clone()));
                }
            }
        }
        Ok(())
    }

    /// Relators x generators matrix of exponent sums.
    pub fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        let col: BTreeMap<&str, usize> = self
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.as_str(), i))
            .collect();
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.generators.len()];
                for (g, s) in r.exponent_sums() {
                    row[col[g]] += s;
                }
                row
            })
            .collect()
    }

    pub fn abelianization(&self) -> Result<Abelianization> {
        let diag = smith_diagonal(self.exponent_matrix())?;
        let rank = diag.len();
        Ok(Abelianization {
            free_rank: self.generators.len() - rank,
            torsion: diag.into_iter().filter(|&d| d > 1).collect(),
        })
    }
}

/// Free rank of the abelianization of `p`.
pub fn abelianization_rank(p: &Presentation) -> Result<usize> {
    Ok(p.abelianization()?.free_rank)
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.generators.join(" "))?;
        for r in &self.relators {
            writeln!(f, "relator: {r}")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Presentation> {
        let mut generators = None;
        let mut relators = Vec::new();
        for line in s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            if let Some(rest) = line.strip_prefix("generators:") {
                if generators.is_some() {
                    return Err(Error::Parse("repeated generators line".into()));
                }
                generators = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = line.strip_prefix("relator:") {
                relators.push(rest.parse()?);
            } else {
                return Err(Error::Parse(format!("unexpected line `{line}`")));
            }
        }
        let generators =
            generators.ok_or_else(|| Error::Parse("missing generators line".into()))?;
        Presentation::new(generators, relators)
    }
}

/// Structure of a finitely generated abelian group: `Z^free_rank + sum Z/d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<i64>,
}

/// `m[dst] -= q * m[src]` on columns `from..`, with overflow checks.
fn row_sub(m: &mut [Vec<i64>], dst: usize, src: usize, q: i64, from: usize) -> Result<()> {
    let (d, s) = if src < dst {
        let (a, b) = m.split_at_mut(dst);
        (&mut b[0], &a[src])
    } else {
        let (a, b) = m.split_at_mut(src);
        (&mut a[dst], &b[0])
    };
    for (x, y) in d[from..].iter_mut().zip(&s[from..]) {
        let sub = q
            .checked_mul(*y)
            .ok_or(Error::Overflow("Smith normal form"))?;
        *x = x
            .checked_sub(sub)
            .ok_or(Error::Overflow("Smith normal form"))?;
    }
    Ok(())
}

/// Non-zero invariant factors of an integer matrix (Smith normal form diagonal).
pub fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Result<Vec<i64>> {
    const OP: &str = "Smith normal form";
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // smallest non-zero entry of the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].unsigned_abs());
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t] != 0 {
                    let q = m[i][t] / m[t][t];
                    row_sub(&mut m, i, t, q, t)?;
                    if m[i][t] != 0 {
                        dirty = true;
                        if m[i][t].abs() < m[t][t].abs() {
                            m.swap(t, i);
                        }
                    }
                }
            }
            for j in t + 1..cols {
                if m[t][j] != 0 {
                    let q = m[t][j] / m[t][t];
                    for row in m.iter_mut().skip(t) {
                        let sub = q.checked_mul(row[t]).ok_or(Error::Overflow(OP))?;
                        row[j] = row[j].checked_sub(sub).ok_or(Error::Overflow(OP))?;
                    }
                    if m[t][j] != 0 {
                        dirty = true;
                        if m[t][j].abs() < m[t][t].abs() {
                            for row in m.iter_mut() {
                                row.swap(t, j);
                            }
                        }
                    }
                }
            }
            if dirty {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| m[i][j] % m[t][t] != 0);
            match bad {
                Some((i, _)) => row_sub(&mut m, t, i, -1, t)?,
                None => break,
            }
        }
        diag.push(m[t][t].abs());
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(w("a a^-1").reduce(), Word::empty());
        assert_eq!(w("a b b^-1 a").reduce(), w("a a"));
        assert_eq!(w("a^-1 b a a^-1 b^-1 a").reduce(), Word::empty());
        assert!(w("a b a^-1 b^-1").is_reduced());
    }

    #[test]
    fn word_text_round_trip() {
        let x = w("t_e^-1 v.a t_e");
        assert_eq!(x.to_string(), "t_e^-1 v.a t_e");
        assert_eq!(Word::empty().to_string(), "1");
        assert_eq!(w("1"), Word::empty());
        assert!("a^x".parse::<Word>().is_err());
        assert_eq!(w("a^2 b^-2"), w("a a b^-1 b^-1"));
    }

    #[test]
    fn abelianization_examples() {
        let free = Presentation::new(vec!["a".into()], vec![]).unwrap();
        assert_eq!(abelianization_rank(&free).unwrap(), 1);
        let trivial = Presentation::new(vec!["a".into()], vec![w("a")]).unwrap();
        assert_eq!(abelianization_rank(&trivial).unwrap(), 0);
        // Z/2 x Z/4 x Z
        let p = Presentation::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![w("a a"), w("b b b b"), w("a^-1 b^-1 a b")],
        )
        .unwrap();
        let ab = p.abelianization().unwrap();
        assert_eq!(ab.free_rank, 1);
        assert_eq!(ab.torsion, vec![2, 4]);
    }

    #[test]
    fn smith_needs_divisibility_fix() {
        // diag(2, 3) ~ diag(1, 6)
        assert_eq!(
            smith_diagonal(vec![vec![2, 0], vec![0, 3]]).unwrap(),
            vec![1, 6]
        );
        assert_eq!(smith_diagonal(vec![vec![0, 0]]).unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn smith_overflow_is_reported() {
        let m = vec![vec![i64::MAX, 3], vec![i64::MAX - 1, i64::MAX]];
        assert_eq!(smith_diagonal(m), Err(Error::Overflow("Smith normal form")));
    }

    #[test]
    fn presentation_text_round_trip() {
        let p: Presentation = "generators: a b\nrelator: a a\nrelator: a^-1 b a b\n"
            .parse()
            .unwrap();
        assert_eq!(p.relators.len(), 2);
        assert_eq!(p.to_string().parse::<Presentation>().unwrap(), p);
        assert_eq!(
            "generators: a\nrelator: b".parse::<Presentation>(),
            Err(Error::UnknownGenerator("b".into()))
        );
    }

    #[test]
    fn rank_invariant_under_consequence_relators() {
        // appending a product of conjugates of existing relators
        let base = Presentation::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![w("a a b"), w("c b^-1 c")],
        )
        .unwrap();
        let r0 = &base.relators[0];
        let r1 = &base.relators[1];
        let conj = |x: &Word, by: &Word| &(&by.inverse() * x) * by;
        let extra = &conj(r0, &w("c a")) * &conj(&r1.inverse(), &w("b"));
        let mut bigger = base.clone();
        bigger.relators.push(extra);
        assert_eq!(
            base.abelianization().unwrap(),
            bigger.abelianization().unwrap()
        );
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((0..3u8, any::<bool>()), 0..24).prop_map(|v| {
            Word(
                v.into_iter()
                    .map(|(g, s)| {
                        Letter::new(
                            ["a", "b", "c"][g as usize],
                            if s { Sign::Pos } else { Sign::Neg },
                        )
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn reduce_idempotent_and_shrinking(x in arb_word()) {
            let r = x.reduce();
            prop_assert!(r.is_reduced());
            prop_assert!(r.len() <= x.len());
            prop_assert_eq!(r.reduce(), r.clone());
            prop_assert!((&x * &x.inverse()).reduce().is_empty());
        }

        #[test]
        fn reduced_product_is_associative(x in arb_word(), y in arb_word(), z in arb_word()) {
            let left = x.mul_reduced(&y).mul_reduced(&z);
            let right = x.mul_reduced(&y.mul_reduced(&z));
            prop_assert_eq!(left, right);
        }
    }
}
