//! Index bijections `lambda`, `mu` on `Z/n` and on `Z`, finitely supported vectors
//! over `Z/p`, and the automorphisms obtained by permuting coordinates.
//!
//! For a prime `p`:
//!
//! ```text
//! lambda(i) = i + 1                  (mod n on the finite window)
//! mu(i)     = i + 1        if i mod p != p - 1
//!           = i - (p - 1)  if i mod p == p - 1
//! ```
//!
//! Composite bijections are words in these primitives read left to right, so
//! `lambda^-1 mu lambda` applies `lambda^-1` first. A bijection `s` induces the
//! automorphism `c_i -> c_{s(i)}` of the vector group, acting on the right.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::freewords::Sign;
use crate::permgroup::Perm;
use crate::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

pub fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `Some(k)` when `n = p^k` (including `k = 0`).
pub fn p_power_exponent(mut n: u64, p: u32) -> Option<u32> {
    let p = p as u64;
    if n == 0 || p < 2 {
        return None;
    }
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    (n == 1).then_some(k)
}

/// Errors unless `p` is prime and `n = p^l` with `l >= 1`.
pub fn check_window(p: u32, n: u64) -> Result<()> {
    check_prime(p)?;
    match p_power_exponent(n, p) {
        Some(l) if l >= 1 => Ok(()),
        _ => Err(Error::NotPowerOfP { p, n }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IndexSet {
    /// `{0, ..., n-1}`
    Finite(u64),
    Integers,
}

impl IndexSet {
    pub fn contains(self, i: i64) -> bool {
        match self {
            IndexSet::Finite(n) => i >= 0 && (i as u64) < n,
            IndexSet::Integers => true,
        }
    }

    fn check(self, i: i64) -> Result<()> {
        match self {
            IndexSet::Finite(n) if !self.contains(i) => Err(Error::IndexOutOfRange { index: i, n }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Primitive {
    Lambda,
    Mu,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexBijection {
    p: u32,
    domain: IndexSet,
    word: Vec<(Primitive, Sign)>,
}

impl IndexBijection {
    pub fn identity(p: u32, domain: IndexSet) -> Result<Self> {
        check_prime(p)?;
        if let IndexSet::Finite(n) = domain {
            check_window(p, n)?;
        }
        Ok(IndexBijection {
            p,
            domain,
            word: Vec::new(),
        })
    }

    fn primitive(p: u32, domain: IndexSet, prim: Primitive) -> Result<Self> {
        let mut b = Self::identity(p, domain)?;
        b.word.push((prim, Sign::Pos));
        Ok(b)
    }

    /// `lambda` on `Z/n`.
    pub fn lambda(p: u32, n: u64) -> Result<Self> {
        Self::primitive(p, IndexSet::Finite(n), Primitive::Lambda)
    }

    /// `mu` on `Z/n`.
    pub fn mu(p: u32, n: u64) -> Result<Self> {
        Self::primitive(p, IndexSet::Finite(n), Primitive::Mu)
    }

    /// `lambda` on `Z`.
    pub fn lambda_inf(p: u32) -> Result<Self> {
        Self::primitive(p, IndexSet::Integers, Primitive::Lambda)
    }

    /// `mu` on `Z`.
    pub fn mu_inf(p: u32) -> Result<Self> {
        Self::primitive(p, IndexSet::Integers, Primitive::Mu)
    }

    /// The bijection behind `alpha`: `mu`.
    pub fn alpha(p: u32, domain: IndexSet) -> Result<Self> {
        Self::primitive(p, domain, Primitive::Mu)
    }

    /// The bijection behind `beta`: `lambda^-1 mu lambda`.
    pub fn beta(p: u32, domain: IndexSet) -> Result<Self> {
        let l = Self::primitive(p, domain, Primitive::Lambda)?;
        let m = Self::primitive(p, domain, Primitive::Mu)?;
        l.inverse().then(&m)?.then(&l)
    }

    /// The bijection behind `alpha^-1 beta`: `mu^-1 lambda^-1 mu lambda`.
    pub fn alpha_inv_beta(p: u32, domain: IndexSet) -> Result<Self> {
        Self::alpha(p, domain)?
            .inverse()
            .then(&Self::beta(p, domain)?)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn domain(&self) -> IndexSet {
        self.domain
    }

    pub fn word(&self) -> &[(Primitive, Sign)] {
        &self.word
    }

    pub fn is_identity_word(&self) -> bool {
        self.word.is_empty()
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &IndexBijection) -> Result<Self> {
        if self.p != other.p || self.domain != other.domain {
            return Err(Error::ParameterMismatch(format!(
                "cannot compose bijections over {:?}/{} and {:?}/{}",
                self.domain, self.p, other.domain, other.p
            )));
        }
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Ok(IndexBijection {
            p: self.p,
            domain: self.domain,
            word,
        })
    }

    pub fn inverse(&self) -> Self {
        IndexBijection {
            p: self.p,
            domain: self.domain,
            word: self.word.iter().rev().map(|&(x, s)| (x, -s)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut word = Vec::with_capacity(base.word.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            word.extend_from_slice(&base.word);
        }
        IndexBijection { word, ..base }
    }

    /// `self^-1 other^-1 self other`
    pub fn commutator(&self, other: &IndexBijection) -> Result<Self> {
        self.inverse()
            .then(&other.inverse())?
            .then(self)?
            .then(other)
    }

    fn step(&self, prim: Primitive, sign: Sign, i: i64) -> i64 {
        let p = self.p as i64;
        let j = match (prim, sign) {
            (Primitive::Lambda, Sign::Pos) => i + 1,
            (Primitive::Lambda, Sign::Neg) => i - 1,
            (Primitive::Mu, Sign::Pos) if i.rem_euclid(p) == p - 1 => i - (p - 1),
            (Primitive::Mu, Sign::Pos) => i + 1,
            (Primitive::Mu, Sign::Neg) if i.rem_euclid(p) == 0 => i + (p - 1),
            (Primitive::Mu, Sign::Neg) => i - 1,
        };
        match self.domain {
            IndexSet::Finite(n) => j.rem_euclid(n as i64),
            IndexSet::Integers => j,
        }
    }

    pub fn eval(&self, i: i64) -> Result<i64> {
        self.domain.check(i)?;
        Ok(self
            .word
            .iter()
            .fold(i, |acc, &(prim, sign)| self.step(prim, sign, acc)))
    }

    /// The same word over `Z/n`; requires `p | n` with `n` a power of `p`.
    pub fn reduce_mod(&self, n: u64) -> Result<Self> {
        if self.domain != IndexSet::Integers {
            return Err(Error::ParameterMismatch(
                "already a finite bijection".into(),
            ));
        }
        check_window(self.p, n)?;
        Ok(IndexBijection {
            p: self.p,
            domain: IndexSet::Finite(n),
            word: self.word.clone(),
        })
    }

    /// The permutation of `{0..n-1}` for a finite bijection.
    pub fn to_perm(&self) -> Result<Perm> {
        match self.domain {
            IndexSet::Finite(n) => Perm::from_fn(n as usize, |i| {
                self.eval(i as i64).expect("in range") as usize
            }),
            IndexSet::Integers => Err(Error::NotEnumerable("bijection of Z".into())),
        }
    }
}

impl fmt::Display for IndexBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "id");
        }
        let suffix = if self.domain == IndexSet::Integers {
            "_inf"
        } else {
            ""
        };
        let parts: Vec<String> = self
            .word
            .iter()
            .map(|(x, s)| {
                let name = match x {
                    Primitive::Lambda => "lambda",
                    Primitive::Mu => "mu",
                };
                match s {
                    Sign::Pos => format!("{name}{suffix}"),
                    Sign::Neg => format!("{name}{suffix}^-1"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl IndexBijection {
    pub fn from_word(p: u32, domain: IndexSet, word: &[(Primitive, Sign)]) -> Result<Self> {
        let mut b = Self::identity(p, domain)?;
        b.word = word.to_vec();
        Ok(b)
    }

    /// Parses a word such as `mu^-1 lambda^-1 mu lambda`; `id` is the identity.
    /// An `_inf` suffix on the tokens is accepted and ignored.
    pub fn parse(p: u32, domain: IndexSet, s: &str) -> Result<Self> {
        let mut b = Self::identity(p, domain)?;
        for tok in s.split_whitespace() {
            if tok == "id" {
                continue;
            }
            let (name, sign) = match tok.strip_suffix("^-1") {
                Some(n) => (n, Sign::Neg),
                None => (tok, Sign::Pos),
            };
            let prim = match name.strip_suffix("_inf").unwrap_or(name) {
                "lambda" => Primitive::Lambda,
                "mu" => Primitive::Mu,
                _ => return Err(Error::Parse(format!("unknown bijection token `{tok}`"))),
            };
            b.word.push((prim, sign));
        }
        Ok(b)
    }
}

pub fn eval_bijection(b: &IndexBijection, i: i64) -> Result<i64> {
    b.eval(i)
}

/// A finitely supported vector over `Z/p`; entries absent from the map are zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FpVector {
    p: u32,
    domain: IndexSetKey,
    entries: BTreeMap<i64, u32>,
}

// `IndexSet` with a total order so vectors can be sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum IndexSetKey {
    Finite(u64),
    Integers,
}

impl From<IndexSet> for IndexSetKey {
    fn from(d: IndexSet) -> Self {
        match d {
            IndexSet::Finite(n) => IndexSetKey::Finite(n),
            IndexSet::Integers => IndexSetKey::Integers,
        }
    }
}

impl From<IndexSetKey> for IndexSet {
    fn from(d: IndexSetKey) -> Self {
        match d {
            IndexSetKey::Finite(n) => IndexSet::Finite(n),
            IndexSetKey::Integers => IndexSet::Integers,
        }
    }
}

impl FpVector {
    pub fn zero(p: u32, domain: IndexSet) -> Self {
        FpVector {
            p,
            domain: domain.into(),
            entries: BTreeMap::new(),
        }
    }

    /// The basis vector `c_i`.
    pub fn basis(p: u32, domain: IndexSet, i: i64) -> Result<Self> {
        Self::from_entries(p, domain, [(i, 1)])
    }

    /// Exponents are reduced mod `p`; repeated indices add up.
    pub fn from_entries(
        p: u32,
        domain: IndexSet,
        entries: impl IntoIterator<Item = (i64, i64)>,
    ) -> Result<Self> {
        check_prime(p)?;
        let mut v = Self::zero(p, domain);
        for (i, e) in entries {
            domain.check(i)?;
            v.add_at(i, e.rem_euclid(p as i64) as u32);
        }
        Ok(v)
    }

    fn add_at(&mut self, i: i64, e: u32) {
        let cur = self.entries.get(&i).copied().unwrap_or(0);
        let next = (cur + e) % self.p;
        if next == 0 {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, next);
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn domain(&self) -> IndexSet {
        self.domain.into()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: i64) -> u32 {
        self.entries.get(&i).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<i64, u32> {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    fn compatible(&self, other: &FpVector) -> Result<()> {
        if self.p != other.p || self.domain != other.domain {
            return Err(Error::ParameterMismatch(format!(
                "vectors over {:?}/{} and {:?}/{}",
                self.domain, self.p, other.domain, other.p
            )));
        }
        Ok(())
    }

    /// Group operation (written multiplicatively elsewhere).
    pub fn add(&self, other: &FpVector) -> Result<FpVector> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (&i, &e) in &other.entries {
            out.add_at(i, e);
        }
        Ok(out)
    }

    pub fn neg(&self) -> FpVector {
        let mut out = self.clone();
        for e in out.entries.values_mut() {
            *e = self.p - *e;
        }
        out
    }

    pub fn sub(&self, other: &FpVector) -> Result<FpVector> {
        self.add(&other.neg())
    }

    /// Moves coordinate `i` to `f(i)`. `f` must be injective on the support.
    pub fn reindex(&self, f: impl Fn(i64) -> Result<i64>) -> Result<FpVector> {
        let mut out = Self::zero(self.p, self.domain());
        for (&i, &e) in &self.entries {
            let j = f(i)?;
            self.domain().check(j)?;
            out.add_at(j, e);
        }
        Ok(out)
    }

    /// The coordinate map `c_i -> c_{i mod n}` onto the window `Z/n`.
    pub fn reduce_mod(&self, n: u64) -> Result<FpVector> {
        if self.domain() != IndexSet::Integers {
            return Err(Error::ParameterMismatch("vector is already finite".into()));
        }
        let mut out = Self::zero(self.p, IndexSet::Finite(n));
        for (&i, &e) in &self.entries {
            out.add_at(i.rem_euclid(n as i64), e);
        }
        Ok(out)
    }

    /// Embeds a window vector into `Z`-indexed vectors at the same indices.
    pub fn lift(&self) -> FpVector {
        FpVector {
            p: self.p,
            domain: IndexSetKey::Integers,
            entries: self.entries.clone(),
        }
    }
}

impl fmt::Display for FpVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(i, e)| {
                if *e == 1 {
                    format!("c{i}")
                } else {
                    format!("c{i}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The automorphism `c_i -> c_{s(i)}` of the vector group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InducedAutomorphism {
    pub bijection: IndexBijection,
}

impl InducedAutomorphism {
    pub fn new(bijection: IndexBijection) -> Self {
        InducedAutomorphism { bijection }
    }

    pub fn apply(&self, v: &FpVector) -> Result<FpVector> {
        if v.p() != self.bijection.p() || v.domain() != self.bijection.domain() {
            return Err(Error::ParameterMismatch(format!(
                "automorphism over {:?} applied to vector over {:?}",
                self.bijection.domain(),
                v.domain()
            )));
        }
        v.reindex(|i| self.bijection.eval(i))
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &InducedAutomorphism) -> Result<Self> {
        Ok(InducedAutomorphism::new(
            self.bijection.then(&other.bijection)?,
        ))
    }
}

pub fn apply_automorphism(a: &InducedAutomorphism, v: &FpVector) -> Result<FpVector> {
    a.apply(v)
}

/// Pointwise check over `Z/n` of the relations tying `lambda` to `mu`:
/// the two case formulas for `lambda` and `lambda^-1`, `mu^p = 1` and
/// `[lambda^p, mu] = 1`.
pub fn check_lambda_mu_identities(p: u32, n: u64) -> Result<bool> {
    check_window(p, n)?;
    let pi = p as i64;
    let lam = IndexBijection::lambda(p, n)?;
    let mu = IndexBijection::mu(p, n)?;
    let lam_p = lam.pow(pi);
    // mu, then lambda^p
    let mu_lam_p = mu.then(&lam_p)?;
    // lambda^-p, then mu^-1
    let lam_mp_mu_inv = lam_p.inverse().then(&mu.inverse())?;
    let mu_p = mu.pow(pi);
    let comm = lam_p.commutator(&mu)?;
    for i in 0..n as i64 {
        let forward = if i.rem_euclid(pi) != pi - 1 {
            mu.eval(i)?
        } else {
            mu_lam_p.eval(i)?
        };
        let backward = if i.rem_euclid(pi) != 0 {
            mu.inverse().eval(i)?
        } else {
            lam_mp_mu_inv.eval(i)?
        };
        if lam.eval(i)? != forward
            || lam.inverse().eval(i)? != backward
            || mu_p.eval(i)? != i
            || comm.eval(i)? != i
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `[mu_inf, lambda_inf](i) = i + p` for every `i = 0 mod p` with `|i| <= bound`.
pub fn commutator_shift_check(p: u32, bound: i64) -> Result<bool> {
    check_prime(p)?;
    if bound < 1 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    let comm = IndexBijection::mu_inf(p)?.commutator(&IndexBijection::lambda_inf(p)?)?;
    let pi = p as i64;
    for i in (-bound..=bound).filter(|i| i.rem_euclid(pi) == 0) {
        if comm.eval(i)? != i + pi {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Iterates `alpha_inf^-1 beta_inf` on `c_0` and checks that the `s`-th image is
/// `c_{ps}` (hence never `c_0`) for `1 <= s <= steps`.
pub fn infinite_order_witness(p: u32, steps: u64) -> Result<bool> {
    check_prime(p)?;
    if steps < 1 {
        return Err(Error::Precondition("steps must be at least 1".into()));
    }
    let aut = InducedAutomorphism::new(IndexBijection::alpha_inv_beta(p, IndexSet::Integers)?);
    let c0 = FpVector::basis(p, IndexSet::Integers, 0)?;
    let mut v = c0.clone();
    for s in 1..=steps as i64 {
        v = aut.apply(&v)?;
        let expected = FpVector::basis(p, IndexSet::Integers, p as i64 * s)?;
        if v != expected || v == c0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Embeds `(v, s)`, with `v` a vector over `Z/n` and `s` a permutation of the
/// indices, into `Sym(p * n)`: point `i * p + x` goes to `s(i) * p + (x + v_i)`.
/// Products match the semidirect rule `(v, s)(w, t) = (v + w.s^-1, st)`.
pub fn wreath_perm(v: &FpVector, s: &Perm) -> Result<Perm> {
    let IndexSet::Finite(n) = v.domain() else {
        return Err(Error::NotEnumerable("vector over Z".into()));
    };
    if s.degree() as u64 != n {
        return Err(Error::DegreeMismatch {
            expected: n as usize,
            found: s.degree(),
        });
    }
    let p = v.p() as usize;
    Perm::from_fn(p * n as usize, |pt| {
        let (i, x) = (pt / p, pt % p);
        s.apply(i) * p + (x + v.get(i as i64) as usize) % p
    })
}

/// Inverse of [`wreath_perm`]; errors if `g` is not in the image.
pub fn wreath_decode(g: &Perm, p: u32, n: u64) -> Result<(FpVector, Perm)> {
    let pu = p as usize;
    if g.degree() != pu * n as usize {
        return Err(Error::DegreeMismatch {
            expected: pu * n as usize,
            found: g.degree(),
        });
    }
    let s = Perm::from_fn(n as usize, |i| g.apply(i * pu) / pu)?;
    let v = FpVector::from_entries(
        p,
        IndexSet::Finite(n),
        (0..n as i64).map(|i| (i, (g.apply(i as usize * pu) % pu) as i64)),
    )?;
    if wreath_perm(&v, &s)? != *g {
        return Err(Error::OutsideUniverse("C_p wreath S_n".into()));
    }
    Ok((v, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_helpers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(97));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(0));
        assert_eq!(p_power_exponent(8, 2), Some(3));
        assert_eq!(p_power_exponent(1, 3), Some(0));
        assert_eq!(p_power_exponent(6, 2), None);
        assert_eq!(check_window(2, 3), Err(Error::NotPowerOfP { p: 2, n: 3 }));
        assert_eq!(check_window(2, 1), Err(Error::NotPowerOfP { p: 2, n: 1 }));
    }

    #[test]
    fn bijection_examples() {
        let mu = IndexBijection::mu(2, 4).unwrap();
        assert_eq!(mu.eval(0).unwrap(), 1);
        assert_eq!(mu.eval(1).unwrap(), 0);
        assert_eq!(IndexBijection::lambda(2, 4).unwrap().eval(3).unwrap(), 0);
        assert_eq!(mu.eval(4), Err(Error::IndexOutOfRange { index: 4, n: 4 }));
        let mu3 = IndexBijection::mu_inf(3).unwrap();
        assert_eq!(mu3.eval(2).unwrap(), 0);
        assert_eq!(mu3.eval(-1).unwrap(), -3);
        assert_eq!(mu3.inverse().eval(-3).unwrap(), -1);
    }

    #[test]
    fn finite_bijections_are_permutations() {
        for (p, n) in [(2, 2), (2, 8), (3, 9), (5, 25)] {
            for b in [
                IndexBijection::lambda(p, n).unwrap(),
                IndexBijection::mu(p, n).unwrap(),
                IndexBijection::beta(p, IndexSet::Finite(n)).unwrap(),
            ] {
                let perm = b.to_perm().unwrap();
                assert_eq!(perm.degree(), n as usize);
            }
        }
    }

    #[test]
    fn identities() {
        assert!(check_lambda_mu_identities(2, 4).unwrap());
        assert!(check_lambda_mu_identities(3, 9).unwrap());
        assert_eq!(
            check_lambda_mu_identities(2, 3),
            Err(Error::NotPowerOfP { p: 2, n: 3 })
        );
    }

    #[test]
    fn commutator_shift() {
        assert!(commutator_shift_check(2, 100).unwrap());
        assert!(commutator_shift_check(3, 100).unwrap());
        // off the residue class the shift law fails, which is why it is excluded
        let comm = IndexBijection::mu_inf(2)
            .unwrap()
            .commutator(&IndexBijection::lambda_inf(2).unwrap())
            .unwrap();
        assert_ne!(comm.eval(1).unwrap(), 3);
        assert!(commutator_shift_check(2, 0).is_err());
    }

    #[test]
    fn automorphism_examples() {
        let ab = InducedAutomorphism::new(
            IndexBijection::alpha_inv_beta(2, IndexSet::Integers).unwrap(),
        );
        let c0 = FpVector::basis(2, IndexSet::Integers, 0).unwrap();
        assert_eq!(
            ab.apply(&c0).unwrap(),
            FpVector::basis(2, IndexSet::Integers, 2).unwrap()
        );
        let id = InducedAutomorphism::new(IndexBijection::identity(3, IndexSet::Integers).unwrap());
        let v = FpVector::from_entries(3, IndexSet::Integers, [(-4, 2), (7, 1)]).unwrap();
        assert_eq!(id.apply(&v).unwrap(), v);
        let alpha4 =
            InducedAutomorphism::new(IndexBijection::alpha(2, IndexSet::Finite(4)).unwrap());
        let c1 = FpVector::basis(2, IndexSet::Finite(4), 1).unwrap();
        assert_eq!(
            alpha4.apply(&c1).unwrap(),
            FpVector::basis(2, IndexSet::Finite(4), 0).unwrap()
        );
        assert!(alpha4.apply(&c0).is_err());
    }

    #[test]
    fn infinite_order() {
        assert!(infinite_order_witness(2, 1000).unwrap());
        assert!(infinite_order_witness(3, 1000).unwrap());
        assert!(infinite_order_witness(2, 0).is_err());
    }

    #[test]
    fn vectors() {
        let v = FpVector::from_entries(3, IndexSet::Integers, [(0, 2), (0, 1), (5, 4)]).unwrap();
        assert_eq!(v.support().collect::<Vec<_>>(), vec![5]);
        assert_eq!(v.get(5), 1);
        assert!(v.add(&v.neg()).unwrap().is_zero());
        let w = FpVector::from_entries(2, IndexSet::Integers, [(-1, 1), (0, 1), (1, 1)]).unwrap();
        let r = w.reduce_mod(4).unwrap();
        assert_eq!(r.support().collect::<Vec<_>>(), vec![0, 1, 3]);
        assert!(FpVector::basis(2, IndexSet::Finite(4), 4).is_err());
        assert!(FpVector::basis(4, IndexSet::Integers, 0).is_err());
    }

    #[test]
    fn parse_bijections() {
        let b = IndexBijection::parse(2, IndexSet::Integers, "mu^-1 lambda^-1 mu lambda").unwrap();
        assert_eq!(
            b,
            IndexBijection::alpha_inv_beta(2, IndexSet::Integers).unwrap()
        );
        assert_eq!(b.to_string(), "mu_inf^-1 lambda_inf^-1 mu_inf lambda_inf");
        assert_eq!(
            IndexBijection::parse(2, IndexSet::Integers, &b.to_string()).unwrap(),
            b
        );
        assert!(IndexBijection::parse(2, IndexSet::Integers, "nu").is_err());
        assert!(IndexBijection::parse(2, IndexSet::Finite(4), "id")
            .unwrap()
            .is_identity_word());
    }

    #[test]
    fn wreath_embedding_is_a_homomorphism() {
        let (p, n) = (3u32, 3u64);
        let d = IndexSet::Finite(n);
        let v = FpVector::from_entries(p, d, [(0, 1), (2, 2)]).unwrap();
        let w = FpVector::from_entries(p, d, [(1, 1), (2, 1)]).unwrap();
        let s = IndexBijection::mu(p, n).unwrap().to_perm().unwrap();
        let t = IndexBijection::lambda(p, n).unwrap().to_perm().unwrap();
        // (v, s)(w, t) = (v + w.s^-1, st)
        let ws = InducedAutomorphism::new(IndexBijection::mu(p, n).unwrap().inverse())
            .apply(&w)
            .unwrap();
        let prod = wreath_perm(&v.add(&ws).unwrap(), &(&s * &t)).unwrap();
        assert_eq!(
            &wreath_perm(&v, &s).unwrap() * &wreath_perm(&w, &t).unwrap(),
            prod
        );
        assert_eq!(
            wreath_decode(&prod, p, n).unwrap(),
            (v.add(&ws).unwrap(), &s * &t)
        );
        assert!(wreath_decode(&Perm::parse_cycles(9, "(0 1)").unwrap(), p, n).is_err());
    }

    proptest! {
        #[test]
        fn mu_inf_intertwines_with_mu(p in prop::sample::select(vec![2u32, 3, 5]), l in 1u32..4, i in -500i64..500) {
            let n = (p as u64).pow(l);
            let mu_inf = IndexBijection::mu_inf(p).unwrap();
            let mu = IndexBijection::mu(p, n).unwrap();
            prop_assert_eq!(mu_inf.eval(i).unwrap().rem_euclid(n as i64), mu.eval(i.rem_euclid(n as i64)).unwrap());
            let lam_inf = IndexBijection::lambda_inf(p).unwrap();
            let lam = IndexBijection::lambda(p, n).unwrap();
            prop_assert_eq!(lam_inf.eval(i).unwrap().rem_euclid(n as i64), lam.eval(i.rem_euclid(n as i64)).unwrap());
        }

        #[test]
        fn induced_action_is_a_group_action(
            word_a in prop::collection::vec((any::<bool>(), any::<bool>()), 0..6),
            word_b in prop::collection::vec((any::<bool>(), any::<bool>()), 0..6),
            entries in prop::collection::vec((-20i64..20, 1i64..3), 0..6),
        ) {
            let p = 3;
            let build = |w: &[(bool, bool)]| {
                w.iter().fold(IndexBijection::identity(p, IndexSet::Integers).unwrap(), |acc, &(is_mu, inv)| {
                    let x = if is_mu { IndexBijection::mu_inf(p) } else { IndexBijection::lambda_inf(p) }.unwrap();
                    acc.then(&if inv { x.inverse() } else { x }).unwrap()
                })
            };
            let a = InducedAutomorphism::new(build(&word_a));
            let b = InducedAutomorphism::new(build(&word_b));
            let v = FpVector::from_entries(p, IndexSet::Integers, entries).unwrap();
            let composed = a.then(&b).unwrap().apply(&v).unwrap();
            prop_assert_eq!(composed, b.apply(&a.apply(&v).unwrap()).unwrap());
            let back = InducedAutomorphism::new(a.bijection.inverse()).apply(&a.apply(&v).unwrap()).unwrap();
            prop_assert_eq!(back, v);
        }
    }
}
