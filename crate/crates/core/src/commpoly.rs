//! Commutative polynomials on the dual of a Lie algebra.
//!
//! Coordinates `x_1..x_n` are the generators themselves viewed as linear
//! functions, so `{x_i, x_j} = Σ_k c_ij^k x_k` is the Lie–Poisson bracket.
//! This module also provides the Gröbner machinery used to reduce modulo the
//! classical orbit ideal and to enumerate the standard monomial basis.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::matrix::Matrix;
use crate::scalar::{format_sum, GaussRat, HPoly};

/// Exponent vector of a commutative monomial.
pub type Exponents = Vec<u32>;

pub fn total_degree(e: &[u32]) -> usize {
    e.iter().map(|&x| x as usize).sum()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn quotient(b: &[u32], a: &[u32]) -> Exponents {
    b.iter().zip(a).map(|(x, y)| x - y).collect()
}

fn add_exps(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Degree-lexicographic order. Among monomials of equal total degree the one
/// with the larger exponent in `precedence[0]` wins, then `precedence[1]`, ...
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    precedence: Vec<usize>,
}

impl MonomialOrder {
    /// Declaration order: `x_1 > x_2 > ... > x_n`.
    pub fn deglex(n: usize) -> Self {
        MonomialOrder {
            precedence: (0..n).collect(),
        }
    }

    pub fn with_precedence(precedence: Vec<usize>) -> Result<Self> {
        let mut sorted = precedence.clone();
        sorted.sort_unstable();
        if sorted != (0..precedence.len()).collect::<Vec<_>>() {
            return Err(Error::Load(format!(
                "precedence {precedence:?} is not a permutation"
            )));
        }
        Ok(MonomialOrder { precedence })
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn nvars(&self) -> usize {
        self.precedence.len()
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        total_degree(a).cmp(&total_degree(b)).then_with(|| {
            self.precedence
                .iter()
                .map(|&v| a[v].cmp(&b[v]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }

    /// Printing order: ascending total degree, and within a degree the
    /// larger monomial first.
    pub fn display_cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        total_degree(a)
            .cmp(&total_degree(b))
            .then_with(|| self.cmp(b, a))
    }
}

/// Polynomial in `n` commuting variables with `HPoly` coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CommPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, HPoly>,
}

impl CommPoly {
    pub fn zero(nvars: usize) -> Self {
        CommPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        CommPoly::constant(nvars, HPoly::one())
    }

    pub fn constant(nvars: usize, c: HPoly) -> Self {
        CommPoly::monomial(vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        CommPoly::monomial(e, HPoly::one())
    }

    pub fn monomial(exps: Exponents, c: HPoly) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        CommPoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, HPoly)>) -> Self {
        let mut p = CommPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, HPoly> {
        &self.terms
    }

    pub fn coeff(&self, e: &[u32]) -> HPoly {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: Exponents, c: &HPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| total_degree(e)).max()
    }

    /// True when no coefficient involves `h`.
    pub fn is_h_free(&self) -> bool {
        self.terms.values().all(|c| c.degree().unwrap_or(0) == 0)
    }

    pub fn scale(&self, c: &HPoly) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero(self.nvars);
        }
        CommPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, a)| (e.clone(), a * c)),
        )
    }

    pub fn scale_rat(&self, c: &GaussRat) -> CommPoly {
        self.scale(&HPoly::from(c.clone()))
    }

    pub fn mul_monomial(&self, e: &[u32], c: &HPoly) -> CommPoly {
        CommPoly::from_terms(
            self.nvars,
            self.terms.iter().map(|(f, a)| (add_exps(f, e), a * c)),
        )
    }

    pub fn pow(&self, k: u32) -> CommPoly {
        let mut acc = CommPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> CommPoly {
        let mut out = CommPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[var] -= 1;
            out.add_term(f, &c.scale_rat(&GaussRat::from_int(e[var] as i64)));
        }
        out
    }

    /// Value at a point of the dual space.
    pub fn evaluate(&self, point: &[GaussRat]) -> HPoly {
        let mut acc = HPoly::zero();
        for (e, c) in &self.terms {
            let mut m = GaussRat::one();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    m = &m * &x.pow(k);
                }
            }
            acc += &c.scale_rat(&m);
        }
        acc
    }

    /// Specializes `h` in every coefficient.
    pub fn eval_h(&self, h0: &GaussRat) -> CommPoly {
        CommPoly::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), HPoly::constant(c.eval(h0)))),
        )
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&HPoly) -> HPoly) -> CommPoly {
        CommPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Coefficientwise exact division by `h`.
    pub fn divide_by_h(&self) -> Result<CommPoly> {
        let mut out = CommPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.divide_by_h()?);
        }
        Ok(out)
    }

    /// The largest term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Exponents, &HPoly)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Linear substitution `x_i -> Σ_a sub[i][a] y_a`.
    pub fn linear_substitute(&self, sub: &Matrix) -> CommPoly {
        let m = sub.cols();
        let images: Vec<CommPoly> = (0..self.nvars)
            .map(|i| {
                CommPoly::from_terms(
                    m,
                    (0..m).map(|a| {
                        let mut e = vec![0; m];
                        e[a] = 1;
                        (e, HPoly::from(sub.get(i, a).clone()))
                    }),
                )
            })
            .collect();
        let mut out = CommPoly::zero(m);
        for (e, c) in &self.terms {
            let mut term = CommPoly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = &term * &images[i].pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Canonical text with the given coordinate names, ascending degree.
    pub fn to_text(&self, names: &[String], order: &MonomialOrder) -> String {
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| order.display_cmp(a, b));
        let mut summands = Vec::new();
        for e in keys {
            let mono = monomial_factors(e, names);
            for (c, mut factors) in self.terms[e].summands() {
                factors.extend(mono.iter().cloned());
                summands.push((c, factors));
            }
        }
        format_sum(summands)
    }
}

pub(crate) fn monomial_factors(e: &[u32], names: &[String]) -> Vec<String> {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                names[i].clone()
            } else {
                format!("{}^{k}", names[i])
            }
        })
        .collect()
}

impl<'a> Add<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl<'a> Sub<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }
}

impl<'a> Mul<&'a CommPoly> for &'a CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(add_exps(e1, e2), &(c1 * c2));
            }
        }
        out
    }
}

impl Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        self.map_coeffs(|c| -c)
    }
}

/// Lie–Poisson bracket `{f, g} = Σ_ij ∂_i f ∂_j g Σ_k c_ij^k x_k`.
pub fn poisson_bracket(f: &CommPoly, g: &CommPoly, lie: &LieAlgebra) -> CommPoly {
    let n = lie.dim();
    let df: Vec<CommPoly> = (0..n).map(|i| f.derivative(i)).collect();
    let dg: Vec<CommPoly> = (0..n).map(|j| g.derivative(j)).collect();
    let mut out = CommPoly::zero(n);
    for i in 0..n {
        if df[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if i == j || dg[j].is_zero() {
                continue;
            }
            let bracket = lie.bracket(i, j);
            if bracket.is_empty() {
                continue;
            }
            let mut xij = CommPoly::zero(n);
            for (k, c) in bracket {
                xij = &xij + &CommPoly::var(n, *k).scale_rat(c);
            }
            out = &out + &(&(&df[i] * &dg[j]) * &xij);
        }
    }
    out
}

/// Infinitesimal invariance: `{p, x_i} = 0` for every coordinate.
pub fn is_invariant(p: &CommPoly, lie: &LieAlgebra) -> bool {
    let n = lie.dim();
    (0..n).all(|i| poisson_bracket(p, &CommPoly::var(n, i), lie).is_zero())
}

/// Rank of the Jacobian of `polys` at `point`. Coefficients must evaluate to
/// numeric constants.
pub fn jacobian_rank(polys: &[CommPoly], point: &[GaussRat]) -> Result<usize> {
    let n = point.len();
    let mut rows = Vec::with_capacity(polys.len());
    for p in polys {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let v = p.derivative(j).evaluate(point);
            row.push(
                v.as_constant()
                    .ok_or_else(|| Error::NotNumeric(v.to_string()))?,
            );
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(Matrix::from_rows(rows).rank())
}

/// Gröbner data for an ideal generated by polynomials with `h`-free
/// coefficients.
#[derive(Clone, Debug)]
pub struct IdealBasis {
    nvars: usize,
    order: MonomialOrder,
    generators: Vec<CommPoly>,
    groebner: Vec<CommPoly>,
    /// `groebner[j] = Σ_i cofactors[j][i] * generators[i]`.
    cofactors: Vec<Vec<CommPoly>>,
    leading: Vec<Exponents>,
}

/// Remainder of a division together with quotients expressed against the
/// original generators: `f = Σ quotients[i] * generators[i] + remainder`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub remainder: CommPoly,
    pub quotients: Vec<CommPoly>,
}

struct Division {
    quotients: Vec<CommPoly>,
    remainder: CommPoly,
}

/// Multivariate division by a list of monic polynomials.
fn divide(f: &CommPoly, divisors: &[CommPoly], leading: &[Exponents], order: &MonomialOrder) -> Division {
    let n = f.nvars();
    let mut quotients = vec![CommPoly::zero(n); divisors.len()];
    let mut remainder = CommPoly::zero(n);
    let mut p = f.clone();
    while let Some((lm, lc)) = p.leading_term(order).map(|(e, c)| (e.clone(), c.clone())) {
        match leading.iter().position(|l| divides(l, &lm)) {
            Some(k) => {
                let shift = quotient(&lm, &leading[k]);
                quotients[k].add_term(shift.clone(), &lc);
                p = &p - &divisors[k].mul_monomial(&shift, &lc);
            }
            None => {
                remainder.add_term(lm.clone(), &lc);
                p.terms.remove(&lm);
            }
        }
    }
    Division {
        quotients,
        remainder,
    }
}

fn make_monic(p: &CommPoly, cof: &[CommPoly], order: &MonomialOrder) -> Result<(CommPoly, Vec<CommPoly>)> {
    let (_, lc) = p.leading_term(order).expect("nonzero polynomial");
    let c = lc
        .as_constant()
        .filter(|c| !c.is_zero())
        .ok_or_else(|| Error::SymbolicPivot(lc.to_string()))?;
    let inv = c.inv()?;
    Ok((
        p.scale_rat(&inv),
        cof.iter().map(|q| q.scale_rat(&inv)).collect(),
    ))
}

fn combine(cofs: &[CommPoly], weights: &[CommPoly], nvars: usize, count: usize) -> Vec<CommPoly> {
    let mut out = vec![CommPoly::zero(nvars); count];
    if count == 0 {
        return out;
    }
    for (w, cof) in weights.iter().zip(cofs.chunks(count)) {
        if w.is_zero() {
            continue;
        }
        for (o, c) in out.iter_mut().zip(cof) {
            *o = &*o + &(w * c);
        }
    }
    out
}

/// Buchberger completion with the product and chain criteria, followed by
/// inter-reduction. Leading coefficients must be invertible constants.
pub fn groebner(gens: &[CommPoly], order: &MonomialOrder) -> Result<IdealBasis> {
    let nvars = order.nvars();
    let generators: Vec<CommPoly> = gens.to_vec();
    for g in &generators {
        if g.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: g.nvars(),
            });
        }
        if !g.is_h_free() {
            return Err(Error::NotNumeric(g.to_text(&default_names(nvars), order)));
        }
    }
    let m = generators.len();
    let mut basis: Vec<CommPoly> = Vec::new();
    let mut cofs: Vec<Vec<CommPoly>> = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let mut unit = vec![CommPoly::zero(nvars); m];
        unit[i] = CommPoly::one(nvars);
        let (g, c) = make_monic(g, &unit, order)?;
        basis.push(g);
        cofs.push(c);
    }
    let lm = |p: &CommPoly| p.leading_term(order).unwrap().0.clone();
    let mut leading: Vec<Exponents> = basis.iter().map(lm).collect();
    let mut pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    let mut done: std::collections::HashSet<(usize, usize)> = Default::default();

    while let Some((i, j)) = pairs.pop() {
        done.insert((i, j));
        let l = lcm(&leading[i], &leading[j]);
        if l == add_exps(&leading[i], &leading[j]) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(&leading[k], &l)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let si = quotient(&l, &leading[i]);
        let sj = quotient(&l, &leading[j]);
        let one = HPoly::one();
        let s = &basis[i].mul_monomial(&si, &one) - &basis[j].mul_monomial(&sj, &one);
        let s_cof: Vec<CommPoly> = cofs[i]
            .iter()
            .zip(&cofs[j])
            .map(|(a, b)| &a.mul_monomial(&si, &one) - &b.mul_monomial(&sj, &one))
            .collect();
        let div = divide(&s, &basis, &leading, order);
        if div.remainder.is_zero() {
            continue;
        }
        let flat: Vec<CommPoly> = cofs.iter().flatten().cloned().collect();
        let sub = combine(&flat, &div.quotients, nvars, m);
        let r_cof: Vec<CommPoly> = s_cof.iter().zip(&sub).map(|(a, b)| a - b).collect();
        let (r, r_cof) = make_monic(&div.remainder, &r_cof, order)?;
        let k = basis.len();
        leading.push(lm(&r));
        basis.push(r);
        cofs.push(r_cof);
        pairs.extend((0..k).map(|i| (i, k)));
    }

    // Minimize.
    let mut keep: Vec<usize> = Vec::new();
    for i in 0..basis.len() {
        let redundant = (0..basis.len()).any(|j| {
            j != i
                && divides(&leading[j], &leading[i])
                && (leading[j] != leading[i] || j < i)
        });
        if !redundant {
            keep.push(i);
        }
    }
    let mut basis: Vec<CommPoly> = keep.iter().map(|&i| basis[i].clone()).collect();
    let mut cofs: Vec<Vec<CommPoly>> = keep.iter().map(|&i| cofs[i].clone()).collect();
    let mut leading: Vec<Exponents> = keep.iter().map(|&i| leading[i].clone()).collect();

    // Inter-reduce the tails.
    for i in 0..basis.len() {
        let others: Vec<usize> = (0..basis.len()).filter(|&j| j != i).collect();
        let divisors: Vec<CommPoly> = others.iter().map(|&j| basis[j].clone()).collect();
        let lms: Vec<Exponents> = others.iter().map(|&j| leading[j].clone()).collect();
        let div = divide(&basis[i], &divisors, &lms, order);
        let flat: Vec<CommPoly> = others.iter().flat_map(|&j| cofs[j].clone()).collect();
        let sub = combine(&flat, &div.quotients, nvars, m);
        cofs[i] = cofs[i].iter().zip(&sub).map(|(a, b)| a - b).collect();
        basis[i] = div.remainder;
        leading[i] = lm(&basis[i]);
    }

    let mut idx: Vec<usize> = (0..basis.len()).collect();
    idx.sort_by(|&a, &b| order.cmp(&leading[a], &leading[b]));
    Ok(IdealBasis {
        nvars,
        order: order.clone(),
        generators,
        groebner: idx.iter().map(|&i| basis[i].clone()).collect(),
        cofactors: idx.iter().map(|&i| cofs[i].clone()).collect(),
        leading: idx.iter().map(|&i| leading[i].clone()).collect(),
    })
}

fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl IdealBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> &[CommPoly] {
        &self.generators
    }

    pub fn groebner(&self) -> &[CommPoly] {
        &self.groebner
    }

    pub fn leading_monomials(&self) -> &[Exponents] {
        &self.leading
    }

    pub fn cofactors(&self) -> &[Vec<CommPoly>] {
        &self.cofactors
    }

    /// True when `e` is not divisible by any leading monomial.
    pub fn is_standard(&self, e: &[u32]) -> bool {
        !self.leading.iter().any(|l| divides(l, e))
    }

    /// Remainder modulo the ideal plus quotients against the original
    /// generators. Coefficients may involve `h`; they are carried along.
    pub fn normal_form(&self, f: &CommPoly) -> NormalForm {
        let div = divide(f, &self.groebner, &self.leading, &self.order);
        let m = self.generators.len();
        let flat: Vec<CommPoly> = self.cofactors.iter().flatten().cloned().collect();
        let quotients = combine(&flat, &div.quotients, self.nvars, m);
        NormalForm {
            remainder: div.remainder,
            quotients,
        }
    }

    pub fn reduce(&self, f: &CommPoly) -> CommPoly {
        divide(f, &self.groebner, &self.leading, &self.order).remainder
    }

    pub fn contains(&self, f: &CommPoly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Standard monomials of degree at most `max_degree`, ascending degree
    /// and larger monomials first within a degree.
    pub fn standard_monomials(&self, max_degree: usize) -> Vec<Exponents> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            let mut level: Vec<Exponents> = monomials_of_degree(self.nvars, d)
                .into_iter()
                .filter(|e| self.is_standard(e))
                .collect();
            level.sort_by(|a, b| self.order.cmp(b, a));
            out.extend(level);
        }
        out
    }
}

/// All exponent vectors in `n` variables of total degree `d`.
pub fn monomials_of_degree(n: usize, d: usize) -> Vec<Exponents> {
    fn go(n: usize, d: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            go(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, d as u32, &mut Vec::new(), &mut out);
    out
}
