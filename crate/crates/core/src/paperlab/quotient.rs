use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use super::semidirect::{SemidirectElement, SemidirectModel};
use crate::elemabelian::{
    check_window, wreath_decode, wreath_perm, FpVector, IndexBijection, IndexSet,
};
use crate::freewords::Word;
use crate::gog::{
    build_presentation, parse_basis_label, EdgeData, GraphOfGroups, GroupSpec, Injection,
};
use crate::multigraph::{edge, Multigraph};
use crate::normalform::FreeProductWord;
use crate::permgroup::{Perm, PermGroup};
use crate::{Error, Result};

/// Where the vector coordinates `c_i` go.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VectorImage {
    /// Every `c_i` is killed.
    Trivial,
    /// `c_i -> c_{i mod n}` inside `C_p wr S_n` on `p * n` points.
    Wreath { n: u64 },
}

/// A homomorphism from a semidirect model onto a finite permutation group,
/// given by the images of `c_i` and of the control letters.
#[derive(Debug, Clone)]
pub struct FinitePQuotient {
    pub label: String,
    p: u32,
    degree: usize,
    vector: VectorImage,
    letters: BTreeMap<String, Perm>,
}

impl FinitePQuotient {
    pub fn new(
        label: impl Into<String>,
        p: u32,
        degree: usize,
        vector: VectorImage,
        letters: BTreeMap<String, Perm>,
    ) -> Result<Self> {
        for g in letters.values() {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        if let VectorImage::Wreath { n } = vector {
            check_window(p, n)?;
            if degree != p as usize * n as usize {
                return Err(Error::DegreeMismatch {
                    expected: p as usize * n as usize,
                    found: degree,
                });
            }
            for g in letters.values() {
                wreath_decode(g, p, n)?;
            }
        }
        Ok(FinitePQuotient {
            label: label.into(),
            p,
            degree,
            vector,
            letters,
        })
    }

    /// Order of the image group. With a wreath vector image the target contains
    /// every `c_i`, so it is `H_n x| S` where `S` is generated by the index
    /// permutations of the letter images; its order is `p^n |S|`.
    pub fn order(&self) -> Result<u128> {
        match self.vector {
            VectorImage::Wreath { n } => {
                let tops = self
                    .letters
                    .values()
                    .map(|g| Ok(wreath_decode(g, self.p, n)?.1))
                    .collect::<Result<Vec<_>>>()?;
                let top = PermGroup::new(n as usize, tops)?;
                Ok((self.p as u128).pow(n as u32) * top.order()? as u128)
            }
            VectorImage::Trivial => Ok(PermGroup::new(
                self.degree,
                self.letters.values().cloned().collect(),
            )?
            .order()? as u128),
        }
    }

    pub fn is_p_group(&self) -> Result<bool> {
        let mut m = self.order()?;
        while m % self.p as u128 == 0 {
            m /= self.p as u128;
        }
        Ok(m == 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vector_image(&self) -> VectorImage {
        self.vector
    }

    pub fn letter_images(&self) -> &BTreeMap<String, Perm> {
        &self.letters
    }

    /// Largest index window on which relators are checked.
    pub fn relator_window(&self) -> (i64, i64) {
        let n = match self.vector {
            VectorImage::Wreath { n } => n as i64,
            VectorImage::Trivial => self.p as i64,
        };
        (-2 * n, 2 * n)
    }

    fn vector_perm(&self, v: &FpVector) -> Result<Perm> {
        match self.vector {
            VectorImage::Trivial => Ok(Perm::identity(self.degree)),
            VectorImage::Wreath { n } => {
                let reduced = match v.domain() {
                    IndexSet::Integers => v.reduce_mod(n)?,
                    IndexSet::Finite(m) if m == n => v.clone(),
                    IndexSet::Finite(m) => {
                        return Err(Error::ParameterMismatch(format!(
                            "vector over Z/{m} sent to Z/{n}"
                        )))
                    }
                };
                wreath_perm(&reduced, &Perm::identity(n as usize))
            }
        }
    }

    pub fn image_of_label(&self, label: &str) -> Result<Perm> {
        match parse_basis_label(label) {
            Some(i) => self.vector_perm(&FpVector::basis(self.p, IndexSet::Integers, i)?),
            None => self
                .letters
                .get(label)
                .cloned()
                .ok_or_else(|| Error::UnknownGenerator(label.to_string())),
        }
    }

    pub fn image_of_word(&self, w: &Word) -> Result<Perm> {
        let mut acc = Perm::identity(self.degree);
        for l in w.letters() {
            let g = self.image_of_label(&l.gen)?;
            acc = &acc * &g.pow(l.sign.as_i64());
        }
        Ok(acc)
    }

    /// Image of `h w`.
    pub fn image(&self, model: &SemidirectModel, x: &SemidirectElement) -> Result<Perm> {
        model.check(x)?;
        let h = self.vector_perm(&x.vector)?;
        Ok(&h * &self.image_of_word(&model.control_to_word(&x.control))?)
    }

    /// Indices of relators that do not map to the identity.
    pub fn failing_relators(&self, relators: &[Word]) -> Result<Vec<usize>> {
        let mut bad = Vec::new();
        for (i, r) in relators.iter().enumerate() {
            if !self.image_of_word(r)?.is_identity() {
                bad.push(i);
            }
        }
        Ok(bad)
    }
}

/// The two-vertex graph of groups `A_n <- H_n -> B_n` with identity edge maps.
/// Its presentation is the amalgam `P_n`.
pub fn pn_graph_of_groups(p: u32, n: u64) -> Result<GraphOfGroups> {
    let g = Multigraph::new(["A", "B"], [edge("h", "B", "A")])?;
    let h = GroupSpec::VectorWindow { p, n };
    let id = Injection::identity_on(&h)?;
    GraphOfGroups::new(
        g,
        BTreeMap::from([
            ("A".to_string(), GroupSpec::split_alpha(p, Some(n), "a")?),
            ("B".to_string(), GroupSpec::split_beta(p, Some(n), "b")?),
        ]),
        BTreeMap::from([(
            "h".to_string(),
            EdgeData {
                group: h,
                plus: id.clone(),
                minus: id,
            },
        )]),
    )
}

/// `pi : P_n -> W_n`, `(h, w) -> (h, act(w))`, realized in `C_p wr S_n`.
/// Errors if the images fail a relator of the presentation of `P_n` built from
/// its graph of groups, or if the target is not a `p`-group.
pub fn build_pi(p: u32, n: u64) -> Result<FinitePQuotient> {
    let q = pi_map(p, n)?;
    let gog = pn_graph_of_groups(p, n)?;
    let pres = build_presentation(&gog, &gog.graph().spanning_tree()?)?;
    let local: Vec<Word> = pres
        .relators
        .iter()
        .map(|r| r.rename(strip_vertex))
        .collect();
    let bad = q.failing_relators(&local)?;
    if !bad.is_empty() {
        return Err(Error::NotAHomomorphism(format!(
            "relator {} of P_{n}",
            pres.relators[bad[0]]
        )));
    }
    if !q.is_p_group()? {
        return Err(Error::Precondition(format!(
            "|W_{n}| = {} is not a power of {p}",
            q.order()?
        )));
    }
    Ok(q)
}

fn strip_vertex(label: &str) -> String {
    label.split_once('.').map_or(label, |(_, g)| g).to_string()
}

/// The images defining `pi`, without the relator and order checks of [`build_pi`].
pub fn pi_map(p: u32, n: u64) -> Result<FinitePQuotient> {
    let zero = FpVector::zero(p, IndexSet::Finite(n));
    let d = IndexSet::Finite(n);
    let letters = BTreeMap::from([
        (
            "a".to_string(),
            wreath_perm(&zero, &IndexBijection::alpha(p, d)?.to_perm()?)?,
        ),
        (
            "b".to_string(),
            wreath_perm(&zero, &IndexBijection::beta(p, d)?.to_perm()?)?,
        ),
    ]);
    FinitePQuotient::new(
        format!("W_{n}"),
        p,
        p as usize * n as usize,
        VectorImage::Wreath { n },
        letters,
    )
}

/// Everything checked about `pi` for one `(p, n)`.
#[derive(Debug, Clone, Serialize)]
pub struct PiCheck {
    pub p: u32,
    pub n: u64,
    pub order: u128,
    pub aut_order: u128,
    pub is_p_group: bool,
    pub relators_checked: usize,
    pub failing_relators: Vec<String>,
    pub injective_on_a: bool,
    pub injective_on_b: bool,
    /// A non-trivial element `(ab)^k` of `P_n` with trivial image.
    pub kernel_witness: String,
    pub kernel_witness_ok: bool,
}

impl PiCheck {
    pub fn passed(&self) -> bool {
        self.is_p_group
            && self.failing_relators.is_empty()
            && self.injective_on_a
            && self.injective_on_b
            && self.kernel_witness_ok
    }
}

/// Full check of `pi`, enumerating `A_n` and `B_n`; needs `n <= 9`.
pub fn check_pi(p: u32, n: u64) -> Result<PiCheck> {
    check_window(p, n)?;
    if n > 9 {
        return Err(Error::Precondition(format!(
            "n = {n} is too large to enumerate"
        )));
    }
    let q = pi_map(p, n)?;
    let order = q.order()?;
    let model = SemidirectModel::p_n(p, n)?;
    let gog = pn_graph_of_groups(p, n)?;
    let pres = build_presentation(&gog, &gog.graph().spanning_tree()?)?;
    let local: Vec<Word> = pres
        .relators
        .iter()
        .map(|r| r.rename(strip_vertex))
        .collect();
    let failing = q
        .failing_relators(&local)?
        .into_iter()
        .map(|i| pres.relators[i].to_string())
        .collect();
    let injective = |letter: &str| -> Result<bool> {
        let mut seen = HashSet::new();
        for k in 0..p as i64 {
            let w = model.letter(letter, k)?;
            for v in all_vectors(p, n) {
                let x = model.mul(&model.vector(v)?, &w)?;
                if !seen.insert(q.image(&model, &x)?) {
                    return Ok(false);
                }
            }
        }
        Ok(seen.len() as u128 == (p as u128).pow(n as u32 + 1))
    };
    let ab = model.mul(&model.letter("a", 1)?, &model.letter("b", 1)?)?;
    let k = q.image(&model, &ab)?.order() as i64;
    let witness = model.pow(&ab, k)?;
    let kernel_witness_ok = !witness.is_identity() && q.image(&model, &witness)?.is_identity();
    let kernel_witness = model.display(&witness).to_string();
    Ok(PiCheck {
        p,
        n,
        order,
        aut_order: order / (p as u128).pow(n as u32),
        is_p_group: q.is_p_group()?,
        relators_checked: local.len(),
        failing_relators: failing,
        injective_on_a: injective("a")?,
        injective_on_b: injective("b")?,
        kernel_witness,
        kernel_witness_ok,
    })
}

fn all_vectors(p: u32, n: u64) -> impl Iterator<Item = FpVector> {
    let total = (p as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let mut entries = Vec::new();
        for i in 0..n as i64 {
            entries.push((i, (code % p as u64) as i64));
            code /= p as u64;
        }
        FpVector::from_entries(p, IndexSet::Finite(n), entries).expect("p checked by caller")
    })
}

/// `sigma : P_inf -> P_n`, `c_i -> c_{i mod n}`, `a -> a`, `b -> b`.
#[derive(Debug, Clone)]
pub struct Sigma {
    p: u32,
    n: u64,
    source: SemidirectModel,
    target: SemidirectModel,
}

/// Errors with `SigmaUndefined` when `p` does not divide `n`.
pub fn build_sigma(p: u32, n: u64) -> Result<Sigma> {
    crate::elemabelian::check_prime(p)?;
    if n == 0 || !n.is_multiple_of(p as u64) {
        return Err(Error::SigmaUndefined { p, n });
    }
    check_window(p, n)?;
    Ok(Sigma {
        p,
        n,
        source: SemidirectModel::p_inf(p)?,
        target: SemidirectModel::p_n(p, n)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SigmaCertificate {
    pub p: u32,
    pub n: u64,
    pub window: (i64, i64),
    pub intertwining_checked: usize,
    pub relators_checked: usize,
    pub failures: Vec<String>,
}

impl SigmaCertificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Sigma {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn source(&self) -> &SemidirectModel {
        &self.source
    }

    pub fn target(&self) -> &SemidirectModel {
        &self.target
    }

    pub fn apply(&self, x: &SemidirectElement) -> Result<SemidirectElement> {
        self.source.check(x)?;
        Ok(SemidirectElement {
            vector: x.vector.reduce_mod(self.n)?,
            control: FreeProductWord(x.control.0.clone()),
        })
    }

    /// Checks `mu_inf(i) mod n = mu(i mod n)` (and likewise for `lambda`) for
    /// `i` in `[-w, w)`, and that every relator of the windowed split-extension
    /// presentations of `A_inf`, `B_inf` maps to the identity of `P_n`.
    pub fn certify(&self, w: i64) -> Result<SigmaCertificate> {
        let (p, n) = (self.p, self.n);
        let mut failures = Vec::new();
        let mut intertwining = 0;
        for (inf, fin) in [
            (IndexBijection::mu_inf(p)?, IndexBijection::mu(p, n)?),
            (
                IndexBijection::lambda_inf(p)?,
                IndexBijection::lambda(p, n)?,
            ),
        ] {
            for i in -w..w {
                intertwining += 1;
                if inf.eval(i)?.rem_euclid(n as i64) != fin.eval(i.rem_euclid(n as i64))? {
                    failures.push(format!("{inf} at {i}"));
                }
            }
        }
        let relators = windowed_relators(&self.source, (-w, w))?;
        for r in &relators {
            if !self.source.eval_word(r)?.is_identity() {
                failures.push(format!("{r} is not a relator of P_inf"));
            }
            let image = r.rename(|g| match parse_basis_label(g) {
                Some(i) => crate::gog::basis_label(i.rem_euclid(n as i64)),
                None => g.to_string(),
            });
            if !self.target.eval_word(&image)?.is_identity() {
                failures.push(format!("sigma({r}) != 1"));
            }
        }
        Ok(SigmaCertificate {
            p,
            n,
            window: (-w, w),
            intertwining_checked: intertwining,
            relators_checked: relators.len(),
            failures,
        })
    }
}

/// Defining relators of a semidirect model restricted to indices in `window`:
/// `c_i^p`, `[c_i, c_j]`, `x^m` for letters of order `m`, and
/// `x^-1 c_i x c_{s(i)}^-1` where `x` acts through `s`.
pub fn windowed_relators(model: &SemidirectModel, window: (i64, i64)) -> Result<Vec<Word>> {
    use crate::gog::basis_label;
    let idx: Vec<i64> = (window.0..window.1)
        .filter(|&i| model.domain().contains(i))
        .collect();
    let mut out = Vec::new();
    for (k, &i) in idx.iter().enumerate() {
        let c = Word::gen(basis_label(i));
        out.push(c.pow(model.p() as i64));
        for &j in &idx[k + 1..] {
            out.push(Word::commutator(&c, &Word::gen(basis_label(j))));
        }
    }
    for l in model.letters() {
        let x = Word::gen(l.name.as_str());
        if let Some(m) = l.order {
            out.push(x.pow(m as i64));
        }
        for &i in &idx {
            let lhs = &(&x.inverse() * &Word::gen(basis_label(i))) * &x;
            out.push(&lhs * &Word::gen_inv(basis_label(l.action.eval(i)?)));
        }
    }
    Ok(out)
}
