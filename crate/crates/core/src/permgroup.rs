//! Permutations of `{0..n-1}` and the groups they generate.
//!
//! Products are read left to right: `a * b` applies `a` first. This matches the
//! postfix notation used for automorphisms elsewhere in the crate (`c_i * alpha`).

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::Mul;
use std::sync::OnceLock;

use crate::elemabelian::p_power_exponent;
use crate::exec::Execution;
use crate::freewords::{Presentation, Sign, Word};
use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut seen[i as usize], true) {
                return Err(Error::NotAPermutation(format!("{images:?}")));
            }
        }
        Ok(Perm { images })
    }

    pub fn from_fn(degree: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        Self::from_images((0..degree).map(|i| f(i) as u32).collect())
    }

    /// Product of the given cycles, applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut p = Perm::identity(degree);
        for c in cycles {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            for (k, &x) in c.iter().enumerate() {
                let y = c[(k + 1) % c.len()];
                if x >= degree || y >= degree {
                    return Err(Error::NotAPermutation(format!("point outside 0..{degree}")));
                }
                images[x] = y as u32;
            }
            p = &p * &Perm::from_images(images)?;
        }
        Ok(p)
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    pub fn parse_cycles(degree: usize, s: &str) -> Result<Self> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::Parse(format!("bad cycle notation `{s}`")))?;
            let cycle = body
                .0
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            let distinct: HashSet<_> = cycle.iter().collect();
            if distinct.len() != cycle.len() {
                return Err(Error::Parse(format!("repeated point in `{s}`")));
            }
            cycles.push(cycle);
            rest = body.1.trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Self::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, k: i64) -> Perm {
        let mut base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Perm::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        fn gcd(a: u64, b: u64) -> u64 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .map(|c| c.len() as u64)
            .fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// Non-trivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.apply(x);
            }
            if c.len() > 1 {
                out.push(c);
            }
        }
        out
    }

    /// `a^-1 b^-1 a b`
    pub fn commutator(a: &Perm, b: &Perm) -> Perm {
        &(&(&a.inverse() * &b.inverse()) * a) * b
    }

    fn check_degree(&self, other: &Perm) -> Result<()> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                found: other.degree(),
            });
        }
        Ok(())
    }
}

impl Mul for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm {
            images: self
                .images
                .iter()
                .map(|&i| rhs.images[i as usize])
                .collect(),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self)
    }
}

/// Breadth-first closure of `gens` in `Sym(degree)`, identity first.
pub fn closure(degree: usize, gens: &[Perm], cap: usize) -> Result<Vec<Perm>> {
    closure_with(Execution::default(), degree, gens, cap)
}

pub fn closure_with(
    mode: Execution,
    degree: usize,
    gens: &[Perm],
    cap: usize,
) -> Result<Vec<Perm>> {
    for g in gens {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
    }
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut frontier = vec![id];
    if cap == 0 {
        return Err(Error::CapExceeded(cap));
    }
    while !frontier.is_empty() {
        // in a finite group right multiplication by generators reaches everything
        let candidates: Vec<Vec<Perm>> =
            crate::exec::map_slice(mode, &frontier, |x| gens.iter().map(|g| x * g).collect());
        let mut next = Vec::new();
        for y in candidates.into_iter().flatten() {
            if !seen.contains(&y) {
                seen.insert(y.clone());
                elements.push(y.clone());
                next.push(y);
                if elements.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
            }
        }
        frontier = next;
    }
    Ok(elements)
}

/// A finitely generated permutation group with a lazily enumerated element list.
#[derive(Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    cap: usize,
    elements: OnceLock<Vec<Perm>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            cap: self.cap,
            elements,
        }
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        Self::with_cap(degree, generators, DEFAULT_CAP)
    }

    pub fn with_cap(degree: usize, generators: Vec<Perm>, cap: usize) -> Result<Self> {
        for g in &generators {
            Perm::identity(degree).check_degree(g)?;
        }
        Ok(PermGroup {
            degree,
            generators,
            cap,
            elements: OnceLock::new(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> Result<&[Perm]> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let e = closure(self.degree, &self.generators, self.cap)?;
        Ok(self.elements.get_or_init(|| e))
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, x: &Perm) -> Result<bool> {
        Ok(self.elements()?.contains(x))
    }

    pub fn is_p_group(&self, p: u32) -> Result<bool> {
        Ok(p_power_exponent(self.order()? as u64, p).is_some())
    }

    /// Whether `x^n = 1` for every element.
    pub fn exponent_divides(&self, n: i64) -> Result<bool> {
        Ok(self.elements()?.iter().all(|x| x.pow(n).is_identity()))
    }
}

pub fn is_p_group(g: &PermGroup, p: u32) -> Result<bool> {
    g.is_p_group(p)
}

pub fn exponent_divides(g: &PermGroup, n: i64) -> Result<bool> {
    g.exponent_divides(n)
}

/// Evaluates a word left to right under a generator assignment.
pub fn evaluate(w: &Word, images: &BTreeMap<String, Perm>, degree: usize) -> Result<Perm> {
    let mut acc = Perm::identity(degree);
    for l in w.letters() {
        let g = images
            .get(&l.gen)
            .ok_or_else(|| Error::UnknownGenerator(l.gen.clone()))?;
        acc = match l.sign {
            Sign::Pos => &acc * g,
            Sign::Neg => &acc * &g.inverse(),
        };
    }
    Ok(acc)
}

/// True iff every relator of `src` maps to the identity.
pub fn verify_hom(src: &Presentation, images: &BTreeMap<String, Perm>) -> Result<bool> {
    Ok(failing_relators(src, images)?.is_empty())
}

/// Indices of relators that do not map to the identity.
pub fn failing_relators(src: &Presentation, images: &BTreeMap<String, Perm>) -> Result<Vec<usize>> {
    let mut degree = None;
    for g in &src.generators {
        let img = images
            .get(g)
            .ok_or_else(|| Error::UnknownGenerator(g.clone()))?;
        match degree {
            None => degree = Some(img.degree()),
            Some(d) if d != img.degree() => {
                return Err(Error::DegreeMismatch {
                    expected: d,
                    found: img.degree(),
                })
            }
            _ => {}
        }
    }
    let degree = degree.unwrap_or(0);
    let mut bad = Vec::new();
    for (k, r) in src.relators.iter().enumerate() {
        if !evaluate(r, images, degree)?.is_identity() {
            bad.push(k);
        }
    }
    Ok(bad)
}

/// Errors unless `set` is a subgroup (closed, contains the identity).
pub fn check_subgroup(set: &HashSet<Perm>, degree: usize) -> Result<()> {
    if !set.contains(&Perm::identity(degree)) {
        return Err(Error::NotASubgroup("identity missing".into()));
    }
    for a in set {
        if !set.contains(&a.inverse()) {
            return Err(Error::NotASubgroup(format!("inverse of {a} missing")));
        }
        for b in set {
            if !set.contains(&(a * b)) {
                return Err(Error::NotASubgroup(format!("product {a} * {b} missing")));
            }
        }
    }
    Ok(())
}

/// For a normal subgroup `Y` of `X` with p-power index and a subgroup `Z` of `X`,
/// whether `Y ∩ Z` has p-power index in `Z` (finite p-groups as the class).
pub fn intersection_has_p_power_index(
    x: &PermGroup,
    y_normal: &HashSet<Perm>,
    z: &HashSet<Perm>,
    p: u32,
) -> Result<bool> {
    let elements = x.elements()?;
    let whole: HashSet<&Perm> = elements.iter().collect();
    for (name, s) in [("Y", y_normal), ("Z", z)] {
        check_subgroup(s, x.degree())?;
        if let Some(outside) = s.iter().find(|g| !whole.contains(g)) {
            return Err(Error::NotASubgroup(format!(
                "{name} contains {outside} outside X"
            )));
        }
    }
    for g in x.generators() {
        let gi = g.inverse();
        if y_normal
            .iter()
            .any(|y| !y_normal.contains(&(&(&gi * y) * g)))
        {
            return Err(Error::NotNormal);
        }
    }
    if elements.len() % y_normal.len() != 0
        || p_power_exponent((elements.len() / y_normal.len()) as u64, p).is_none()
    {
        return Err(Error::Precondition("[X : Y] is not a power of p".into()));
    }
    let meet = z.iter().filter(|g| y_normal.contains(g)).count();
    Ok(p_power_exponent((z.len() / meet) as u64, p).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    fn set(v: &[Perm]) -> HashSet<Perm> {
        v.iter().cloned().collect()
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = cyc(3, "(0 1)");
        let b = cyc(3, "(1 2)");
        // 0 -a-> 1 -b-> 2
        assert_eq!((&a * &b).apply(0), 2);
        assert_eq!((&a * &b).to_string(), "(0 2 1)");
        assert_eq!(cyc(4, "(0 1 2 3)").order(), 4);
        assert_eq!(cyc(4, "(0 1 2 3)").pow(-1), cyc(4, "(0 3 2 1)"));
        assert!(cyc(5, "()").is_identity());
    }

    #[test]
    fn cycle_notation_errors() {
        assert!(Perm::parse_cycles(3, "(0 3)").is_err());
        assert!(Perm::parse_cycles(3, "(0 0)").is_err());
        assert!(Perm::parse_cycles(3, "0 1").is_err());
        assert!(Perm::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(closure(4, &[], 10).unwrap(), vec![Perm::identity(4)]);
        let d4 = closure(4, &[cyc(4, "(0 1 2 3)"), cyc(4, "(0 1)(2 3)")], 100).unwrap();
        assert_eq!(d4.len(), 8);
        assert_eq!(closure(2, &[cyc(2, "(0 1)")], 10).unwrap().len(), 2);
        assert_eq!(
            closure(3, &[cyc(3, "(0 1)"), cyc(3, "(0 1 2)")], 5),
            Err(Error::CapExceeded(5))
        );
        assert!(matches!(
            closure(3, &[cyc(4, "(0 1)")], 5),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn closure_modes_agree() {
        let gens = [cyc(6, "(0 1 2 3 4 5)"), cyc(6, "(0 1)")];
        let a = closure_with(Execution::Sequential, 6, &gens, DEFAULT_CAP).unwrap();
        let b = closure_with(Execution::Parallel, 6, &gens, DEFAULT_CAP).unwrap();
        assert_eq!(a.len(), 720);
        assert_eq!(a, b);
    }

    #[test]
    fn closure_is_a_group_and_lagrange_holds() {
        let g = PermGroup::new(5, vec![cyc(5, "(0 1 2 3 4)"), cyc(5, "(1 4)(2 3)")]).unwrap();
        let all = set(g.elements().unwrap());
        check_subgroup(&all, 5).unwrap();
        let sub = set(&closure(5, &[cyc(5, "(1 4)(2 3)")], 100).unwrap());
        assert_eq!(all.len() % sub.len(), 0);
        assert_eq!(all.len(), 10);
    }

    #[test]
    fn p_group_predicates() {
        let d4 = PermGroup::new(4, vec![cyc(4, "(0 1 2 3)"), cyc(4, "(0 1)(2 3)")]).unwrap();
        assert!(d4.is_p_group(2).unwrap());
        assert!(d4.exponent_divides(4).unwrap());
        assert!(!d4.exponent_divides(2).unwrap());
        let s3 = PermGroup::new(3, vec![cyc(3, "(0 1)"), cyc(3, "(0 1 2)")]).unwrap();
        assert!(!s3.is_p_group(2).unwrap());
        assert!(PermGroup::new(3, vec![]).unwrap().is_p_group(7).unwrap());
        let c3 = PermGroup::new(3, vec![cyc(3, "(0 1 2)")]).unwrap();
        assert!(!c3.exponent_divides(2).unwrap());
    }

    #[test]
    fn homomorphism_checks() {
        let p: Presentation = "generators: a\nrelator: a a".parse().unwrap();
        let img = |s: &str, n| BTreeMap::from([("a".to_string(), cyc(n, s))]);
        assert!(verify_hom(&p, &img("(0 1)", 2)).unwrap());
        assert!(!verify_hom(&p, &img("(0 1 2)", 3)).unwrap());
        assert_eq!(
            verify_hom(&p, &BTreeMap::new()),
            Err(Error::UnknownGenerator("a".into()))
        );
        let q: Presentation = "generators: a b\nrelator: a b".parse().unwrap();
        let mixed = BTreeMap::from([
            ("a".to_string(), cyc(2, "(0 1)")),
            ("b".to_string(), cyc(3, "()")),
        ]);
        assert!(matches!(
            verify_hom(&q, &mixed),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn p_power_index_passes_to_subgroups() {
        let r = cyc(4, "(0 1 2 3)");
        let s = cyc(4, "(0 1)(2 3)");
        let d4 = PermGroup::new(4, vec![r.clone(), s.clone()]).unwrap();
        let rot = set(&closure(4, std::slice::from_ref(&r), 100).unwrap());
        let refl = set(&closure(4, std::slice::from_ref(&s), 100).unwrap());
        assert!(intersection_has_p_power_index(&d4, &rot, &refl, 2).unwrap());
        let all = set(d4.elements().unwrap());
        assert!(intersection_has_p_power_index(&d4, &all, &refl, 2).unwrap());

        let s3 = PermGroup::new(3, vec![cyc(3, "(0 1)"), cyc(3, "(0 1 2)")]).unwrap();
        let a3 = set(&closure(3, &[cyc(3, "(0 1 2)")], 10).unwrap());
        let z = set(&closure(3, &[cyc(3, "(0 1)")], 10).unwrap());
        assert!(intersection_has_p_power_index(&s3, &a3, &z, 2).unwrap());

        // a reflection subgroup of D4 is not normal
        assert_eq!(
            intersection_has_p_power_index(&d4, &refl, &rot, 2),
            Err(Error::NotNormal)
        );
        let not_sub = set(&[Perm::identity(4), r]);
        assert!(matches!(
            intersection_has_p_power_index(&d4, &rot, &not_sub, 2),
            Err(Error::NotASubgroup(_))
        ));
    }
}
