//! The enveloping algebra `U_h` over `C[h]`, with relations
//! `X_a X_b - X_b X_a = h [X_a, X_b]`.
//!
//! Elements are kept in PBW normal form: linear combinations of ordered
//! monomials `X_{i1} ... X_{ik}` with `i1 <= ... <= ik` (declaration order).
//! Arbitrary words are normalized by rewriting the leftmost descent
//! `X_a X_b -> X_b X_a + h Σ_k c_ab^k X_k` (for `a > b`). Each rewrite either
//! lowers the inversion count at fixed length or shortens the word, so the
//! process terminates; normal forms of words are memoized.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, RwLock};

use crate::commpoly::{CommPoly, Exponents};
use crate::error::{Error, Result};
use crate::liealg::{BasisChange, LieAlgebra};
use crate::scalar::{format_sum, GaussRat, HPoly, Scalar};

/// Ordered PBW monomial; compared by degree first, then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PbwMonomial(Vec<u16>);

impl PbwMonomial {
    /// Sorts `indices` into PBW order.
    pub fn from_indices(mut indices: Vec<u16>) -> Self {
        indices.sort_unstable();
        PbwMonomial(indices)
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        let mut v = Vec::new();
        for (i, &k) in e.iter().enumerate() {
            v.extend(std::iter::repeat_n(i as u16, k as usize));
        }
        PbwMonomial(v)
    }

    pub fn indices(&self) -> &[u16] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self, n: usize) -> Exponents {
        let mut e = vec![0; n];
        for &i in &self.0 {
            e[i as usize] += 1;
        }
        e
    }

    fn factors(&self, labels: &[String]) -> Vec<String> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let g = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == g {
                j += 1;
            }
            let label = &labels[g as usize];
            if j - i == 1 {
                out.push(label.clone());
            } else {
                out.push(format!("{label}^{}", j - i));
            }
            i = j;
        }
        out
    }
}

impl Ord for PbwMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PbwMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of `U_h` in PBW normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UElement {
    terms: BTreeMap<PbwMonomial, HPoly>,
}

impl UElement {
    pub fn zero() -> Self {
        UElement::default()
    }

    pub fn one() -> Self {
        UElement::constant(HPoly::one())
    }

    pub fn constant(c: HPoly) -> Self {
        UElement::term(PbwMonomial::default(), c)
    }

    pub fn generator(i: usize) -> Self {
        UElement::term(PbwMonomial(vec![i as u16]), HPoly::one())
    }

    pub fn term(m: PbwMonomial, c: HPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        UElement { terms }
    }

    /// Ordered lift of a commutative polynomial: each monomial goes to the
    /// PBW monomial with the same exponents.
    pub fn ordered_lift(f: &CommPoly) -> Self {
        let mut out = UElement::zero();
        for (e, c) in f.terms() {
            out.add_term(PbwMonomial::from_exponents(e), c);
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<PbwMonomial, HPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &PbwMonomial) -> HPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: PbwMonomial, c: &HPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn add_scaled(&mut self, other: &UElement, c: &HPoly) {
        for (m, a) in &other.terms {
            self.add_term(m.clone(), &(a * c));
        }
    }

    /// Degree of the filtration; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(PbwMonomial::degree)
    }

    /// The value when only the unit monomial occurs.
    pub fn as_constant(&self) -> Option<HPoly> {
        match self.terms.len() {
            0 => Some(HPoly::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &HPoly) -> UElement {
        let mut out = UElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// Classical projection: set `h = 0` and read PBW monomials as
    /// commutative ones.
    pub fn project_classical(&self, n: usize) -> CommPoly {
        let mut out = CommPoly::zero(n);
        for (m, c) in &self.terms {
            out.add_term(m.exponents(n), &HPoly::constant(c.constant_term()));
        }
        out
    }

    /// Reads PBW monomials as commutative ones, keeping full `h` coefficients.
    pub fn commutative_image(&self, n: usize) -> CommPoly {
        let mut out = CommPoly::zero(n);
        for (m, c) in &self.terms {
            out.add_term(m.exponents(n), c);
        }
        out
    }

    /// Specializes `h = h0` in the coefficients. Products of specialized
    /// elements must then use the rescaled bracket `h0 [·,·]`; see
    /// [`Enveloping::multiply_specialized`].
    pub fn evaluate_h(&self, h0: &GaussRat) -> UElement {
        let mut out = UElement::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &HPoly::constant(c.eval(h0)));
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&HPoly) -> HPoly) -> UElement {
        let mut out = UElement::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    /// Canonical text: highest degree first, then lexicographic.
    pub fn to_text(&self, labels: &[String]) -> String {
        let mut keys: Vec<&PbwMonomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.degree().cmp(&a.degree()).then_with(|| a.0.cmp(&b.0)));
        let mut summands = Vec::new();
        for m in keys {
            let mono = m.factors(labels);
            for (c, mut factors) in self.terms[m].summands() {
                factors.extend(mono.iter().cloned());
                summands.push((c, factors));
            }
        }
        format_sum(summands)
    }
}

impl<'a> Add<&'a UElement> for &'a UElement {
    type Output = UElement;
    fn add(self, rhs: &UElement) -> UElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a UElement> for &'a UElement {
    type Output = UElement;
    fn sub(self, rhs: &UElement) -> UElement {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl Neg for &UElement {
    type Output = UElement;
    fn neg(self) -> UElement {
        self.map_coeffs(|c| -c)
    }
}

/// Default cap on the degree accepted by [`Enveloping::symmetrize`].
pub const DEFAULT_SYMMETRIZE_CAP: usize = 8;

/// `U_h` for a fixed Lie algebra, with a shared memo of word normal forms.
#[derive(Debug)]
pub struct Enveloping {
    lie: LieAlgebra,
    /// `h * c_ab^k` for every pair, precomputed.
    rules: Vec<Vec<Vec<(u16, HPoly)>>>,
    cache: RwLock<HashMap<Vec<u16>, Arc<UElement>>>,
    symmetrize_cap: usize,
}

impl Enveloping {
    pub fn new(lie: LieAlgebra) -> Self {
        let n = lie.dim();
        let rules = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        lie.bracket(a, b)
                            .iter()
                            .map(|(k, c)| (*k as u16, HPoly::monomial(Scalar::from(c.clone()), 1)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Enveloping {
            lie,
            rules,
            cache: RwLock::new(HashMap::new()),
            symmetrize_cap: DEFAULT_SYMMETRIZE_CAP,
        }
    }

    pub fn with_symmetrize_cap(mut self, cap: usize) -> Self {
        self.symmetrize_cap = cap;
        self
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    /// PBW normal form of an arbitrary word of generator indices.
    pub fn normal_form_word(&self, word: &[usize]) -> UElement {
        assert!(word.iter().all(|&i| i < self.dim()), "generator index out of range");
        let w: Vec<u16> = word.iter().map(|&i| i as u16).collect();
        (*self.nf(&w)).clone()
    }

    fn nf(&self, w: &[u16]) -> Arc<UElement> {
        let Some(i) = w.windows(2).position(|p| p[0] > p[1]) else {
            return Arc::new(UElement::term(PbwMonomial(w.to_vec()), HPoly::one()));
        };
        if let Some(hit) = self.cache.read().expect("cache lock").get(w) {
            return hit.clone();
        }
        let mut swapped = w.to_vec();
        swapped.swap(i, i + 1);
        let mut out = (*self.nf(&swapped)).clone();
        for (k, c) in &self.rules[w[i] as usize][w[i + 1] as usize] {
            let mut shorter = Vec::with_capacity(w.len() - 1);
            shorter.extend_from_slice(&w[..i]);
            shorter.push(*k);
            shorter.extend_from_slice(&w[i + 2..]);
            out.add_scaled(&self.nf(&shorter), c);
        }
        let out = Arc::new(out);
        self.cache
            .write()
            .expect("cache lock")
            .insert(w.to_vec(), out.clone());
        out
    }

    /// Normal form computed without memoization, rewriting the descent chosen
    /// by `pick` (given the list of descent positions) at every step.
    pub fn normal_form_word_with<F>(&self, word: &[usize], pick: &mut F) -> UElement
    where
        F: FnMut(&[usize]) -> usize,
    {
        let descents: Vec<usize> = word.windows(2).enumerate().filter(|(_, p)| p[0] > p[1]).map(|(i, _)| i).collect();
        if descents.is_empty() {
            let m = PbwMonomial(word.iter().map(|&i| i as u16).collect());
            return UElement::term(m, HPoly::one());
        }
        let i = descents[pick(&descents) % descents.len()];
        let mut swapped = word.to_vec();
        swapped.swap(i, i + 1);
        let mut out = self.normal_form_word_with(&swapped, pick);
        for (k, c) in &self.rules[word[i]][word[i + 1]] {
            let mut shorter = word[..i].to_vec();
            shorter.push(*k as usize);
            shorter.extend_from_slice(&word[i + 2..]);
            out.add_scaled(&self.normal_form_word_with(&shorter, pick), c);
        }
        out
    }

    fn mul_monomials(&self, a: &PbwMonomial, b: &PbwMonomial) -> Arc<UElement> {
        match (a.0.last(), b.0.first()) {
            (Some(x), Some(y)) if x > y => {
                let mut w = a.0.clone();
                w.extend_from_slice(&b.0);
                self.nf(&w)
            }
            _ => {
                let mut w = a.0.clone();
                w.extend_from_slice(&b.0);
                Arc::new(UElement::term(PbwMonomial(w), HPoly::one()))
            }
        }
    }

    pub fn multiply(&self, a: &UElement, b: &UElement) -> UElement {
        let mut out = UElement::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let c = ca * cb;
                out.add_scaled(&self.mul_monomials(ma, mb), &c);
            }
        }
        out
    }

    pub fn power(&self, a: &UElement, k: u32) -> UElement {
        let mut acc = UElement::one();
        for _ in 0..k {
            acc = self.multiply(&acc, a);
        }
        acc
    }

    pub fn commutator(&self, a: &UElement, b: &UElement) -> UElement {
        &self.multiply(a, b) - &self.multiply(b, a)
    }

    /// Product in the specialization at `h = h0`, whose bracket is
    /// `h0 [·,·]`: multiply in `U_h`, then specialize.
    pub fn multiply_specialized(&self, a: &UElement, b: &UElement, h0: &GaussRat) -> UElement {
        self.multiply(&a.evaluate_h(h0), &b.evaluate_h(h0)).evaluate_h(h0)
    }

    pub fn is_central(&self, a: &UElement) -> bool {
        (0..self.dim()).all(|i| self.commutator(a, &UElement::generator(i)).is_zero())
    }

    /// Symmetrizer: each monomial of degree `p` goes to the average of the
    /// `p!` orderings of its factors, returned in normal form. Distinct
    /// orderings are enumerated once, weighted by their multiplicity.
    pub fn symmetrize(&self, f: &CommPoly) -> Result<UElement> {
        let mut out = UElement::zero();
        for (e, c) in f.terms() {
            out.add_scaled(&self.symmetrize_monomial(e)?, c);
        }
        Ok(out)
    }

    fn symmetrize_monomial(&self, e: &[u32]) -> Result<UElement> {
        let mut word: Vec<u16> = PbwMonomial::from_exponents(e).0;
        let p = word.len();
        if p > self.symmetrize_cap {
            return Err(Error::DegreeCap {
                degree: p,
                cap: self.symmetrize_cap,
            });
        }
        let mut sum = UElement::zero();
        let mut count: i64 = 0;
        let one = HPoly::one();
        loop {
            sum.add_scaled(&self.nf(&word), &one);
            count += 1;
            if !next_permutation(&mut word) {
                break;
            }
        }
        Ok(sum.scale(&HPoly::from(GaussRat::ratio(1, count))))
    }

    /// Direct `(1/p!) Σ_{s ∈ S_p}` over all permutations; exponential, used as
    /// a reference for [`Enveloping::symmetrize`].
    pub fn symmetrize_naive(&self, f: &CommPoly) -> UElement {
        let mut out = UElement::zero();
        for (e, c) in f.terms() {
            let word: Vec<usize> = PbwMonomial::from_exponents(e).0.iter().map(|&i| i as usize).collect();
            let p = word.len();
            let mut perm: Vec<usize> = (0..p).collect();
            let mut sum = UElement::zero();
            let mut fact: i64 = 0;
            loop {
                let w: Vec<usize> = perm.iter().map(|&k| word[k]).collect();
                sum = &sum + &self.normal_form_word_with(&w, &mut |_| 0);
                fact += 1;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            out.add_scaled(&sum, &c.scale_rat(&GaussRat::ratio(1, fact)));
        }
        out
    }

    /// Extends the generator map `X_i -> Σ_j B_ij X_j` multiplicatively.
    pub fn apply_automorphism(&self, a: &UElement, b: &BasisChange) -> Result<UElement> {
        if !self.lie.is_automorphism(b) {
            return Err(Error::NotAutomorphism);
        }
        let n = self.dim();
        let images: Vec<UElement> = (0..n)
            .map(|i| {
                let mut u = UElement::zero();
                for j in 0..n {
                    u.add_term(
                        PbwMonomial(vec![j as u16]),
                        &HPoly::from(b.matrix().get(i, j).clone()),
                    );
                }
                u
            })
            .collect();
        let mut out = UElement::zero();
        for (m, c) in &a.terms {
            let mut img = UElement::one();
            for &g in &m.0 {
                img = self.multiply(&img, &images[g as usize]);
            }
            out.add_scaled(&img, c);
        }
        Ok(out)
    }
}

/// Advances to the next lexicographic permutation; `false` after the last.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
