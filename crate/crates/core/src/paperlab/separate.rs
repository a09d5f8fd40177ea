use serde::{Deserialize, Serialize};

use super::quotient::{build_sigma, pi_map};
use super::semidirect::{SemidirectElement, SemidirectModel};
use crate::elemabelian::p_power_exponent;
use crate::permgroup::Perm;
use crate::{Error, Result};

/// Evidence that an element of `P_inf` is not the identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SeparationCertificate {
    /// The element lies in `H_inf`; its image under `pi . sigma_n` in the finite
    /// `p`-group `W_n` moves some point.
    FiniteQuotient { p: u32, n: u64, image: String },
    /// The image in `P_inf / H_inf = Z/p * Z/p` is the non-empty reduced word
    /// `reduced`. `finite` records a finite `W_n` separating the element when
    /// one was found among `n = p, p^2, p^3`.
    FreeProduct {
        p: u32,
        reduced: Vec<(String, i64)>,
        finite: Option<FiniteWitness>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteWitness {
    pub n: u64,
    pub image: String,
}

/// Least `p`-power `n >= p` with `-n/2 <= i < n/2` on the support.
pub fn separating_window(p: u32, support: impl IntoIterator<Item = i64>) -> u64 {
    let support: Vec<i64> = support.into_iter().collect();
    let mut n = p as u64;
    while !support
        .iter()
        .all(|&i| 2 * i >= -(n as i64) && 2 * i < n as i64)
    {
        n *= p as u64;
    }
    n
}

/// Certifies that `x != 1` in `P_inf` (the model must be `P_inf`).
pub fn separate(model: &SemidirectModel, x: &SemidirectElement) -> Result<SeparationCertificate> {
    model.check(x)?;
    if *model != SemidirectModel::p_inf(model.p())? {
        return Err(Error::ParameterMismatch("separate works in P_inf".into()));
    }
    if x.is_identity() {
        return Err(Error::IdentityElement);
    }
    let p = model.p();
    if x.control.is_empty() {
        let n = separating_window(p, x.vector.support());
        let image = pi_sigma(model, n, x)?;
        return Ok(SeparationCertificate::FiniteQuotient {
            p,
            n,
            image: image.to_string(),
        });
    }
    let reduced = x
        .control
        .syllables()
        .iter()
        .map(|s| (model.letters()[s.factor].name.clone(), s.elem))
        .collect();
    let mut finite = None;
    let mut n = p as u64;
    for _ in 0..3 {
        let image = pi_sigma(model, n, x)?;
        if !image.is_identity() {
            finite = Some(FiniteWitness {
                n,
                image: image.to_string(),
            });
            break;
        }
        n *= p as u64;
    }
    Ok(SeparationCertificate::FreeProduct { p, reduced, finite })
}

fn pi_sigma(model: &SemidirectModel, n: u64, x: &SemidirectElement) -> Result<Perm> {
    let sigma = build_sigma(model.p(), n)?;
    pi_map(model.p(), n)?.image(sigma.target(), &sigma.apply(x)?)
}

impl SeparationCertificate {
    /// Rechecks the certificate against `x` without reusing the code that
    /// produced it.
    pub fn verify(&self, x: &SemidirectElement) -> Result<bool> {
        match self {
            SeparationCertificate::FiniteQuotient { p, n, image } => {
                if !x.control.is_empty()
                    || x.vector.p() != *p
                    || p_power_exponent(*n, *p).is_none_or(|l| l == 0)
                {
                    return Ok(false);
                }
                let half = *n as i64;
                if !x.vector.support().all(|i| -half <= 2 * i && 2 * i < half) {
                    return Ok(false);
                }
                // (x, j) -> (x + h_j, j) on p * n points, with h_j summed over i = j mod n.
                let (pu, nu) = (*p as usize, *n as usize);
                let mut h = vec![0usize; nu];
                for (&i, &e) in x.vector.entries() {
                    let j = i.rem_euclid(half) as usize;
                    h[j] = (h[j] + e as usize) % pu;
                }
                let expected =
                    Perm::from_fn(pu * nu, |pt| (pt / pu) * pu + (pt % pu + h[pt / pu]) % pu)?;
                Ok(!expected.is_identity() && expected.to_string() == *image)
            }
            SeparationCertificate::FreeProduct { p, reduced, finite } => {
                let names = ["a", "b"];
                if reduced.is_empty() || reduced.len() != x.control.len() {
                    return Ok(false);
                }
                for (k, ((name, e), s)) in reduced.iter().zip(x.control.syllables()).enumerate() {
                    let ok_letter = names.get(s.factor) == Some(&name.as_str());
                    let ok_exp = *e == s.elem && (1..*p as i64).contains(e);
                    let alternates = k == 0 || reduced[k - 1].0 != *name;
                    if !(ok_letter && ok_exp && alternates) {
                        return Ok(false);
                    }
                }
                if let Some(w) = finite {
                    let model = SemidirectModel::p_inf(*p)?;
                    let image = pi_sigma(&model, w.n, x)?;
                    if image.is_identity() || image.to_string() != w.image {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}
