use rand::Rng;
use serde::Serialize;

use super::semidirect::{SemidirectElement, SemidirectModel};
use crate::elemabelian::{wreath_decode, IndexBijection, IndexSet};
use crate::exec::{map_indexed, trial_rng, Execution};
use crate::gog::GroupSpec;
use crate::normalform::{Amalgam, AmalgamNormalForm, PermOps, Syllable};
use crate::permgroup::Perm;
use crate::{Error, Result};

/// `P_n` twice: as the generic amalgam of the permutation realizations of
/// `A_n` and `B_n` over `H_n`, and as the semidirect model.
pub struct PnAmalgam {
    p: u32,
    n: u64,
    amalgam: Amalgam<PermOps>,
    model: SemidirectModel,
    /// Index permutations of `a^k`, `b^k` for `k < p`.
    tops: [Vec<Perm>; 2],
}

impl PnAmalgam {
    pub fn new(p: u32, n: u64) -> Result<Self> {
        let a = GroupSpec::split_alpha(p, Some(n), "a")?.realize("A")?;
        let b = GroupSpec::split_beta(p, Some(n), "b")?.realize("B")?;
        let h = GroupSpec::VectorWindow { p, n }.realize("H")?;
        let images: Vec<Perm> = h.generators().iter().map(|(_, g)| g.clone()).collect();
        let amalgam = Amalgam::new(a, b, h, &images, &images)?;
        let d = IndexSet::Finite(n);
        let powers = |s: IndexBijection| -> Result<Vec<Perm>> {
            let s = s.to_perm()?;
            Ok((0..p as i64).map(|k| s.pow(k)).collect())
        };
        Ok(PnAmalgam {
            p,
            n,
            amalgam,
            model: SemidirectModel::p_n(p, n)?,
            tops: [
                powers(IndexBijection::alpha(p, d)?)?,
                powers(IndexBijection::beta(p, d)?)?,
            ],
        })
    }

    pub fn amalgam(&self) -> &Amalgam<PermOps> {
        &self.amalgam
    }

    pub fn model(&self) -> &SemidirectModel {
        &self.model
    }

    /// The model element of a factor element `g = (v, s)`, with `s = a^k` or `b^k`.
    pub fn decode(&self, s: &Syllable<Perm>) -> Result<SemidirectElement> {
        let (v, top) = wreath_decode(&s.elem, self.p, self.n)?;
        let tops = self
            .tops
            .get(s.factor)
            .ok_or(Error::UnknownFactor(s.factor))?;
        let k = tops
            .iter()
            .position(|t| *t == top)
            .ok_or_else(|| Error::OutsideUniverse(format!("factor {}", s.factor)))?;
        let letter = if s.factor == 0 { "a" } else { "b" };
        self.model.mul(
            &self.model.vector(v)?,
            &self.model.letter(letter, k as i64)?,
        )
    }

    pub fn evaluate(&self, raw: &[Syllable<Perm>]) -> Result<SemidirectElement> {
        raw.iter().try_fold(self.model.identity(), |acc, s| {
            self.model.mul(&acc, &self.decode(s)?)
        })
    }

    pub fn reduce(&self, raw: &[Syllable<Perm>]) -> Result<AmalgamNormalForm<Perm>> {
        self.amalgam.reduce(raw)
    }

    /// A raw word of `len` syllables with random factors (adjacent repeats
    /// allowed) and uniformly random factor elements.
    pub fn random_word(&self, rng: &mut impl Rng, len: usize) -> Result<Vec<Syllable<Perm>>> {
        (0..len)
            .map(|_| {
                let factor = rng.random_range(0..2);
                let elems = self.amalgam.factor(factor)?.elements();
                Ok(Syllable::new(
                    factor,
                    elems[rng.random_range(0..elems.len())].clone(),
                ))
            })
            .collect()
    }

    fn inverse_word(&self, raw: &[Syllable<Perm>]) -> Vec<Syllable<Perm>> {
        raw.iter()
            .rev()
            .map(|s| Syllable::new(s.factor, s.elem.inverse()))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossCheckReport {
    pub p: u32,
    pub n: u64,
    pub trials: usize,
    pub seed: u64,
    pub identities: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub trial: usize,
    pub check: &'static str,
    pub detail: String,
}

/// Compares the semidirect model with generic amalgam normal forms on random
/// raw words of up to 20 syllables (trial 0 uses the empty word). Per word:
/// the normal form spells the same model element; triviality agrees;
/// `w w^-1` is trivial in both; inserting `g g^-1` keeps the normal form;
/// and equality with a second random word agrees.
pub fn cross_check_amalgam(
    p: u32,
    n: u64,
    trials: usize,
    seed: u64,
    mode: Execution,
) -> Result<CrossCheckReport> {
    let pn = PnAmalgam::new(p, n)?;
    let results = map_indexed(mode, trials, |t| trial(&pn, t, seed));
    let mut mismatches = Vec::new();
    let mut identities = 0;
    for r in results {
        let (id, mut m) = r?;
        identities += id as usize;
        mismatches.append(&mut m);
    }
    Ok(CrossCheckReport {
        p,
        n,
        trials,
        seed,
        identities,
        mismatches,
    })
}

fn trial(pn: &PnAmalgam, t: usize, seed: u64) -> Result<(bool, Vec<Mismatch>)> {
    let mut rng = trial_rng(seed, t as u64);
    let len = if t == 0 { 0 } else { rng.random_range(1..=20) };
    let raw = pn.random_word(&mut rng, len)?;
    let mut out = Vec::new();
    let mut fail = |check: &'static str, detail: String| {
        out.push(Mismatch {
            trial: t,
            check,
            detail,
        })
    };

    let value = pn.evaluate(&raw)?;
    let nf = pn.reduce(&raw)?;
    let spelled = pn.evaluate(&pn.amalgam.spell(&nf)?)?;
    if spelled != value {
        fail(
            "normal form value",
            format!(
                "{} vs {}",
                pn.model.display(&spelled),
                pn.model.display(&value)
            ),
        );
    }
    let trivial = pn.amalgam.is_identity(&nf);
    if trivial != value.is_identity() {
        fail(
            "triviality",
            format!("amalgam says {trivial}, model {}", pn.model.display(&value)),
        );
    }

    let mut round = raw.clone();
    round.extend(pn.inverse_word(&raw));
    if !pn.amalgam.is_identity(&pn.reduce(&round)?) || !pn.evaluate(&round)?.is_identity() {
        fail("w w^-1", format!("length {}", round.len()));
    }

    let pad = pn.random_word(&mut rng, 1)?;
    let mut padded = raw.clone();
    let at = rng.random_range(0..=raw.len());
    padded.splice(at..at, pad.iter().cloned().chain(pn.inverse_word(&pad)));
    if pn.reduce(&padded)? != nf || pn.evaluate(&padded)? != value {
        fail("inserted identity", format!("at {at}"));
    }

    let other = pn.random_word(&mut rng, len)?;
    let same_nf = pn.reduce(&other)? == nf;
    let same_value = pn.evaluate(&other)? == value;
    if same_nf != same_value {
        fail(
            "equality",
            format!("normal forms equal: {same_nf}, model values equal: {same_value}"),
        );
    }
    Ok((value.is_identity(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cross_checks_agree() {
        for (p, n) in [(2, 2), (2, 4), (3, 3)] {
            let r = cross_check_amalgam(p, n, 60, 1, Execution::Parallel).unwrap();
            assert!(r.passed(), "{:?}", r.mismatches);
            assert!(r.identities >= 1);
        }
    }

    #[test]
    fn modes_agree() {
        let a = cross_check_amalgam(2, 2, 30, 9, Execution::Sequential).unwrap();
        let b = cross_check_amalgam(2, 2, 30, 9, Execution::Parallel).unwrap();
        assert_eq!(a.identities, b.identities);
        assert_eq!(a.mismatches.len(), b.mismatches.len());
    }

    #[test]
    fn decode_matches_letters() {
        let pn = PnAmalgam::new(2, 4).unwrap();
        let a = pn
            .amalgam()
            .factor(0)
            .unwrap()
            .generator("a")
            .unwrap()
            .clone();
        assert_eq!(
            pn.decode(&Syllable::new(0, a)).unwrap(),
            pn.model().letter("a", 1).unwrap()
        );
        let c1 = pn
            .amalgam()
            .factor(1)
            .unwrap()
            .generator("c1")
            .unwrap()
            .clone();
        assert_eq!(
            pn.decode(&Syllable::new(1, c1)).unwrap(),
            pn.model().basis(1).unwrap()
        );
    }
}
