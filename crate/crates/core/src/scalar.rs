//! Exact coefficient arithmetic.
//!
//! Three layers, each embedding into the next:
//!
//! - [`GaussRat`]: a Gaussian rational `re + im*i` with arbitrary-precision parts.
//! - [`Scalar`]: a polynomial over `GaussRat` in named symbolic constants
//!   (`a`, `c0`, `c1`, ...). Orbit constants may be left symbolic; they only
//!   ever get multiplied, never inverted.
//! - [`HPoly`]: a polynomial in the deformation parameter `h` with `Scalar`
//!   coefficients, stored lowest degree first.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Gaussian rational `re + im*i`. Both parts are kept in lowest terms by
/// `BigRational`, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    re: BigRational,
    im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        GaussRat::from_int(1)
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// `num/den` as a real Gaussian rational. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn complex(re: GaussRat, im: GaussRat) -> Self {
        re + im * GaussRat::i()
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(GaussRat::new(self.re.recip(), BigRational::zero()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Ok(GaussRat::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn div(&self, other: &GaussRat) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussRat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Splits off a sign so that sums print as `a - b` rather than `a + -b`.
    /// Returns `(negative, magnitude)`; mixed complex values are never negated.
    fn sign_split(&self) -> (bool, GaussRat) {
        if self.im.is_zero() && self.re.is_negative() {
            (true, -self.clone())
        } else if self.re.is_zero() && self.im.is_negative() {
            (true, -self.clone())
        } else {
            (false, self.clone())
        }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_imag(r: &BigRational) -> String {
    if r.is_one() {
        "i".to_string()
    } else if (-r).is_one() {
        "-i".to_string()
    } else {
        format!("{}*i", fmt_rat(r))
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}", fmt_imag(&self.im)),
            (false, false) => {
                let im = fmt_imag(&self.im);
                if im.starts_with('-') {
                    write!(f, "{}{}", fmt_rat(&self.re), im)
                } else {
                    write!(f, "{}+{}", fmt_rat(&self.re), im)
                }
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussRat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = crate::expr::parse_scalar(s, &[])?;
        value
            .as_constant()
            .ok_or_else(|| Error::NotNumeric(s.to_string()))
    }
}

impl From<i64> for GaussRat {
    fn from(n: i64) -> Self {
        GaussRat::from_int(n)
    }
}

impl<'a> Add<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussRat> for &'a GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::new(&self.re * &rhs.re, BigRational::zero());
        }
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(GaussRat, Add add, Sub sub, Mul mul);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re, -self.im)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        -self.clone()
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussRat> for GaussRat {
    fn sub_assign(&mut self, rhs: &GaussRat) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

/// Name of a symbolic constant.
pub type Symbol = Arc<str>;

/// Product of symbolic constants with exponents, sorted by name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ParamMonomial(Vec<(Symbol, u32)>);

impl ParamMonomial {
    pub fn one() -> Self {
        ParamMonomial(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbol(name: &str) -> Self {
        ParamMonomial(vec![(Arc::from(name), 1)])
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    fn mul(&self, other: &ParamMonomial) -> ParamMonomial {
        if self.0.is_empty() {
            return other.clone();
        }
        if other.0.is_empty() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => out.push(b.next().unwrap().clone()),
                    Ordering::Equal => {
                        let (s, e1) = a.next().unwrap();
                        let (_, e2) = b.next().unwrap();
                        out.push((s.clone(), e1 + e2));
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => out.push(b.next().unwrap().clone()),
                (None, None) => break,
            }
        }
        ParamMonomial(out)
    }

    fn factor_strings(&self) -> Vec<String> {
        self.0
            .iter()
            .map(|(s, e)| {
                if *e == 1 {
                    s.to_string()
                } else {
                    format!("{s}^{e}")
                }
            })
            .collect()
    }
}

/// Polynomial over `GaussRat` in symbolic constants. Terms are sorted by
/// monomial and never carry a zero coefficient; the empty list is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(ParamMonomial, GaussRat)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from(GaussRat::one())
    }

    pub fn symbol(name: &str) -> Self {
        Scalar {
            terms: vec![(ParamMonomial::symbol(name), GaussRat::one())],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from(GaussRat::from_int(n))
    }

    pub fn terms(&self) -> &[(ParamMonomial, GaussRat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value as a Gaussian rational, if no symbolic constant occurs.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.as_slice() {
            [] => Some(GaussRat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Names of all symbolic constants that occur.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self
            .terms
            .iter()
            .flat_map(|(m, _)| m.0.iter().map(|(s, _)| s.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Divides by a numeric scalar.
    pub fn div_numeric(&self, d: &Scalar) -> Result<Scalar> {
        let c = d
            .as_constant()
            .ok_or_else(|| Error::SymbolicPivot(d.to_string()))?;
        Ok(self.scale(&c.inv()?))
    }

    /// Substitutes numeric values for the named symbols that appear in `values`.
    pub fn substitute(&self, values: &[(Symbol, GaussRat)]) -> Scalar {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for (s, e) in &m.0 {
                match values.iter().find(|(name, _)| name == s) {
                    Some((_, v)) => coeff = &coeff * &v.pow(*e),
                    None => rest.push((s.clone(), *e)),
                }
            }
            out += &Scalar::from_terms(vec![(ParamMonomial(rest), coeff)]);
        }
        out
    }

    fn from_terms(mut terms: Vec<(ParamMonomial, GaussRat)>) -> Scalar {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(ParamMonomial, GaussRat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Scalar { terms: out }
    }

    /// Summands of this scalar as `(coefficient, factors)` for printing.
    pub(crate) fn summands(&self) -> impl Iterator<Item = (GaussRat, Vec<String>)> + '_ {
        self.terms
            .iter()
            .map(|(m, c)| (c.clone(), m.factor_strings()))
    }
}

impl From<GaussRat> for Scalar {
    fn from(c: GaussRat) -> Self {
        if c.is_zero() {
            Scalar::zero()
        } else {
            Scalar {
                terms: vec![(ParamMonomial::one(), c)],
            }
        }
    }
}

fn merge_terms(
    a: &[(ParamMonomial, GaussRat)],
    b: &[(ParamMonomial, GaussRat)],
    negate_b: bool,
) -> Vec<(ParamMonomial, GaussRat)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0.clone(), c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            terms: merge_terms(&self.terms, &rhs.terms, false),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            terms: merge_terms(&self.terms, &rhs.terms, true),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return Scalar::zero();
        }
        if let ([(m1, c1)], [(m2, c2)]) = (self.terms.as_slice(), rhs.terms.as_slice()) {
            return Scalar {
                terms: vec![(m1.mul(m2), c1 * c2)],
            };
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                terms.push((m1.mul(m2), c1 * c2));
            }
        }
        Scalar::from_terms(terms)
    }
}

forward_owned!(Scalar, Add add, Sub sub, Mul mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if rhs.terms.is_empty() {
            return;
        }
        self.terms = merge_terms(&self.terms, &rhs.terms, false);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if rhs.terms.is_empty() {
            return;
        }
        self.terms = merge_terms(&self.terms, &rhs.terms, true);
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sum(self.summands()))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders `Σ coeff * factor_1 * ... * factor_k` in the canonical textual
/// form shared by every printer in the crate. An empty sum renders as `0`.
pub(crate) fn format_sum<I>(summands: I) -> String
where
    I: IntoIterator<Item = (GaussRat, Vec<String>)>,
{
    let mut out = String::new();
    for (idx, (coeff, factors)) in summands.into_iter().enumerate() {
        let (negative, mag) = coeff.sign_split();
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let product = factors.join("*");
        if factors.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&product);
        } else if mag.is_real() || mag.re().is_zero() {
            out.push_str(&format!("{mag}*{product}"));
        } else {
            out.push_str(&format!("({mag})*{product}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Polynomial in `h` with `Scalar` coefficients, lowest degree first and with
/// trailing zeros trimmed. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HPoly {
    coeffs: Vec<Scalar>,
}

impl HPoly {
    pub fn zero() -> Self {
        HPoly::default()
    }

    pub fn one() -> Self {
        HPoly::constant(Scalar::one())
    }

    /// The deformation parameter itself.
    pub fn h() -> Self {
        HPoly::monomial(Scalar::one(), 1)
    }

    pub fn constant(c: Scalar) -> Self {
        HPoly::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        HPoly::constant(Scalar::from_int(n))
    }

    pub fn monomial(c: Scalar, power: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); power];
        coeffs.push(c);
        HPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        HPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> Scalar {
        self.coeffs.get(power).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree in `h`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0)
    }

    /// The constant value if the polynomial does not involve `h`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.coeffs.len() {
            0 => Some(Scalar::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// The numeric value if the polynomial involves neither `h` nor symbols.
    pub fn as_constant(&self) -> Option<GaussRat> {
        self.as_scalar().and_then(|s| s.as_constant())
    }

    pub fn scale(&self, c: &Scalar) -> HPoly {
        if c.is_zero() {
            return HPoly::zero();
        }
        HPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn scale_rat(&self, c: &GaussRat) -> HPoly {
        if c.is_zero() {
            return HPoly::zero();
        }
        HPoly {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Multiplies by `h^k`.
    pub fn shift(&self, k: usize) -> HPoly {
        if self.is_zero() {
            return HPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        HPoly { coeffs }
    }

    pub fn pow(&self, e: u32) -> HPoly {
        let mut acc = HPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `h = h0`.
    pub fn eval(&self, h0: &GaussRat) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(h0) + c;
        }
        acc
    }

    /// Returns `q` with `h*q == self`.
    pub fn divide_by_h(&self) -> Result<HPoly> {
        match self.coeffs.first() {
            None => Ok(HPoly::zero()),
            Some(c) if !c.is_zero() => Err(Error::NotDivisible(c.to_string())),
            Some(_) => Ok(HPoly {
                coeffs: self.coeffs[1..].to_vec(),
            }),
        }
    }

    /// Substitutes numeric values for symbolic constants coefficientwise.
    pub fn substitute(&self, values: &[(Symbol, GaussRat)]) -> HPoly {
        HPoly::from_coeffs(self.coeffs.iter().map(|c| c.substitute(values)).collect())
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = self.coeffs.iter().flat_map(|c| c.symbols()).collect();
        out.sort();
        out.dedup();
        out
    }

    /// Summands `(coefficient, factors)` where the factors are the symbolic
    /// constants followed by the power of `h`.
    pub(crate) fn summands(&self) -> Vec<(GaussRat, Vec<String>)> {
        let mut out = Vec::new();
        for (power, c) in self.coeffs.iter().enumerate() {
            for (coeff, mut factors) in c.summands() {
                match power {
                    0 => {}
                    1 => factors.push("h".to_string()),
                    p => factors.push(format!("h^{p}")),
                }
                out.push((coeff, factors));
            }
        }
        out
    }
}

impl From<Scalar> for HPoly {
    fn from(c: Scalar) -> Self {
        HPoly::constant(c)
    }
}

impl From<GaussRat> for HPoly {
    fn from(c: GaussRat) -> Self {
        HPoly::constant(Scalar::from(c))
    }
}

fn zip_coeffs(a: &[Scalar], b: &[Scalar], f: impl Fn(&Scalar, &Scalar) -> Scalar) -> HPoly {
    let zero = Scalar::zero();
    let n = a.len().max(b.len());
    HPoly::from_coeffs(
        (0..n)
            .map(|k| f(a.get(k).unwrap_or(&zero), b.get(k).unwrap_or(&zero)))
            .collect(),
    )
}

impl<'a> Add<&'a HPoly> for &'a HPoly {
    type Output = HPoly;
    fn add(self, rhs: &HPoly) -> HPoly {
        zip_coeffs(&self.coeffs, &rhs.coeffs, |x, y| x + y)
    }
}

impl<'a> Sub<&'a HPoly> for &'a HPoly {
    type Output = HPoly;
    fn sub(self, rhs: &HPoly) -> HPoly {
        zip_coeffs(&self.coeffs, &rhs.coeffs, |x, y| x - y)
    }
}

impl<'a> Mul<&'a HPoly> for &'a HPoly {
    type Output = HPoly;
    fn mul(self, rhs: &HPoly) -> HPoly {
        if self.is_zero() || rhs.is_zero() {
            return HPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += &(a * b);
                }
            }
        }
        HPoly::from_coeffs(coeffs)
    }
}

forward_owned!(HPoly, Add add, Sub sub, Mul mul);

impl Neg for &HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        HPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for HPoly {
    type Output = HPoly;
    fn neg(self) -> HPoly {
        -&self
    }
}

impl AddAssign<&HPoly> for HPoly {
    fn add_assign(&mut self, rhs: &HPoly) {
        if rhs.coeffs.len() > self.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Scalar::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }
}

impl SubAssign<&HPoly> for HPoly {
    fn sub_assign(&mut self, rhs: &HPoly) {
        *self += &(-rhs);
    }
}

impl fmt::Display for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sum(self.summands()))
    }
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for HPoly {
    type Err = Error;

    /// Parses an expression in `h`, the imaginary unit and symbolic constants.
    fn from_str(s: &str) -> Result<Self> {
        crate::expr::parse_hpoly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> GaussRat {
        GaussRat::ratio(n, d)
    }

    fn hp(cs: &[i64]) -> HPoly {
        HPoly::from_coeffs(cs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    #[test]
    fn hpoly_add_and_mul() {
        assert_eq!(&HPoly::h() + &HPoly::h(), hp(&[0, 2]));
        assert_eq!(&hp(&[1, 1]) * &hp(&[1, -1]), hp(&[1, 0, -1]));
        assert_eq!(&HPoly::zero() * &hp(&[3, 4, 5]), HPoly::zero());
        assert_eq!(&hp(&[1, 2]) - &hp(&[1, 2]), HPoly::zero());
        assert!((&hp(&[1, 2]) - &hp(&[1, 2])).coeffs().is_empty());
    }

    #[test]
    fn hpoly_eval_examples() {
        let p = hp(&[1, 2]);
        assert_eq!(p.eval(&q(1, 2)), Scalar::from_int(2));
        let p = hp(&[7, 3, 5]);
        assert_eq!(p.eval(&GaussRat::zero()), Scalar::from_int(7));
        assert_eq!(HPoly::h().pow(2).eval(&q(3, 1)), Scalar::from_int(9));
    }

    #[test]
    fn divide_by_h_examples() {
        assert_eq!(hp(&[0, 2, 1]).divide_by_h().unwrap(), hp(&[2, 1]));
        assert_eq!(HPoly::zero().divide_by_h().unwrap(), HPoly::zero());
        assert!(matches!(
            hp(&[1, 1]).divide_by_h(),
            Err(Error::NotDivisible(_))
        ));
    }

    #[test]
    fn gaussrat_text() {
        assert_eq!(q(3, 4).to_string(), "3/4");
        assert_eq!(q(-6, 8).to_string(), "-3/4");
        assert_eq!(GaussRat::i().to_string(), "i");
        assert_eq!((GaussRat::i() * q(-1, 2)).to_string(), "-1/2*i");
        let z = GaussRat::complex(q(1, 2), q(-3, 4));
        assert_eq!(z.to_string(), "1/2-3/4*i");
        assert_eq!("1/2-3/4*i".parse::<GaussRat>().unwrap(), z);
        assert_eq!("-i".parse::<GaussRat>().unwrap(), -GaussRat::i());
    }

    #[test]
    fn gaussrat_inverse() {
        let z = GaussRat::complex(q(1, 1), q(2, 1));
        assert!((&z * &z.inv().unwrap()).is_one());
        assert_eq!(GaussRat::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn hpoly_text() {
        let p = HPoly::from_coeffs(vec![
            Scalar::from(q(3, 4)),
            Scalar::from_int(2),
            Scalar::from_int(-1),
        ]);
        assert_eq!(p.to_string(), "3/4 + 2*h - h^2");
        assert_eq!(HPoly::zero().to_string(), "0");
        let c = HPoly::from_coeffs(vec![Scalar::symbol("a").pow(2), -Scalar::symbol("c1")]);
        assert_eq!(c.to_string(), "a^2 - c1*h");
        assert_eq!("a^2 - c1*h".parse::<HPoly>().unwrap(), c);
    }

    #[test]
    fn symbolic_scalars() {
        let a = Scalar::symbol("a");
        let b = Scalar::symbol("b");
        let lhs = (&a + &b) * (&a - &b);
        let rhs = &a.pow(2) - &b.pow(2);
        assert_eq!(lhs, rhs);
        assert!(lhs.as_constant().is_none());
        let v = lhs.substitute(&[(Arc::from("a"), q(3, 1)), (Arc::from("b"), q(1, 1))]);
        assert_eq!(v, Scalar::from_int(8));
    }

    fn arb_gauss() -> impl Strategy<Value = GaussRat> {
        (-6i64..7, 1i64..5, -3i64..4, 1i64..4)
            .prop_map(|(a, b, c, d)| GaussRat::complex(q(a, b), q(c, d)))
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (arb_gauss(), arb_gauss(), 0u32..2).prop_map(|(c, d, e)| {
            &Scalar::from(c) + &Scalar::symbol("a").pow(e).scale(&d)
        })
    }

    fn arb_hpoly() -> impl Strategy<Value = HPoly> {
        prop::collection::vec(arb_scalar(), 0..4).prop_map(HPoly::from_coeffs)
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_hpoly(), b in arb_hpoly(), c in arb_hpoly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn degree_of_product(a in arb_hpoly(), b in arb_hpoly()) {
            if let (Some(da), Some(db)) = (a.degree(), b.degree()) {
                prop_assert_eq!((&a * &b).degree(), Some(da + db));
            }
        }

        #[test]
        fn eval_is_homomorphism(a in arb_hpoly(), b in arb_hpoly(), h0 in arb_gauss()) {
            prop_assert_eq!((&a * &b).eval(&h0), &a.eval(&h0) * &b.eval(&h0));
            prop_assert_eq!((&a + &b).eval(&h0), &a.eval(&h0) + &b.eval(&h0));
        }

        #[test]
        fn divide_inverts_shift(a in arb_hpoly()) {
            prop_assert_eq!((&HPoly::h() * &a).divide_by_h().unwrap(), a);
        }

        #[test]
        fn text_round_trip(a in arb_hpoly()) {
            prop_assert_eq!(a.to_string().parse::<HPoly>().unwrap(), a);
        }
    }
}
