//! Expression front end.
//!
//! Grammar (standard precedence, `^` binds tightest):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' INT)?
//! atom  := INT | IDENT | '(' expr ')'
//! ```
//!
//! `h` is the deformation parameter and `i` the imaginary unit. Juxtaposition
//! is rejected; products need an explicit `*`. Division is only allowed by
//! nonzero numeric constants. Whether `*` commutes depends on the target the
//! tree is evaluated into.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::commpoly::CommPoly;
use crate::error::{Error, Result};
use crate::liealg::LieAlgebra;
use crate::scalar::{GaussRat, HPoly, Scalar};
use crate::uea::{Enveloping, UElement};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Ident { name: String, pos: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut pos = 0;
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_whitespace() {
            pos += 1;
        } else if c.is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            let s: String = bytes[start..pos].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_alphanumeric() || bytes[pos] == '_') {
                pos += 1;
            }
            out.push((Tok::Ident(bytes[start..pos].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            pos += 1;
        } else {
            return Err(Error::Syntax {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(_, p)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .or_else(|_| self.err("exponent too large"))?;
                    self.idx += 1;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return self.err("exponent must be a nonnegative integer"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.idx += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(name)) => {
                self.idx += 1;
                Ok(Expr::Ident { name, pos })
            }
            Some(Tok::Op('(')) => {
                self.idx += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        end: text.chars().count(),
    };
    let e = p.expr()?;
    if p.idx < p.toks.len() {
        return p.err("unexpected token (products need an explicit `*`)");
    }
    Ok(e)
}

/// Which bare identifiers (other than `h`, `i` and generator names) are
/// accepted as symbolic constants.
#[derive(Clone, Debug, Default)]
pub enum Symbols {
    #[default]
    None,
    Any,
    Only(Vec<String>),
}

impl Symbols {
    fn allows(&self, name: &str) -> bool {
        match self {
            Symbols::None => false,
            Symbols::Any => true,
            Symbols::Only(list) => list.iter().any(|s| s == name),
        }
    }
}

/// A ring an expression can be evaluated into.
pub trait EvalTarget {
    type Value: Clone;

    fn constant(&self, c: HPoly) -> Self::Value;
    /// Resolves a generator (or other named value); `None` if unknown.
    fn identifier(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// The value as a numeric constant, if it is one.
    fn as_numeric(&self, v: &Self::Value) -> Option<GaussRat>;
}

pub fn evaluate<T: EvalTarget>(e: &Expr, target: &T, symbols: &Symbols) -> Result<T::Value> {
    Ok(match e {
        Expr::Int(n) => target.constant(HPoly::from(GaussRat::new(
            BigRational::from_integer(n.clone()),
            BigRational::zero(),
        ))),
        Expr::Ident { name, .. } => match name.as_str() {
            "h" => target.constant(HPoly::h()),
            "i" => target.constant(HPoly::from(GaussRat::i())),
            _ => match target.identifier(name) {
                Some(v) => v,
                None if symbols.allows(name) => {
                    target.constant(HPoly::constant(Scalar::symbol(name)))
                }
                None => return Err(Error::UnknownIdentifier(name.clone())),
            },
        },
        Expr::Neg(a) => {
            let v = evaluate(a, target, symbols)?;
            target.sub(&target.constant(HPoly::zero()), &v)
        }
        Expr::Add(a, b) => target.add(&evaluate(a, target, symbols)?, &evaluate(b, target, symbols)?),
        Expr::Sub(a, b) => target.sub(&evaluate(a, target, symbols)?, &evaluate(b, target, symbols)?),
        Expr::Mul(a, b) => target.mul(&evaluate(a, target, symbols)?, &evaluate(b, target, symbols)?),
        Expr::Div(a, b) => {
            let num = evaluate(a, target, symbols)?;
            let den = evaluate(b, target, symbols)?;
            let d = target.as_numeric(&den).ok_or(Error::DivisionByNonConstant)?;
            let inv = d.inv()?;
            target.mul(&num, &target.constant(HPoly::from(inv)))
        }
        Expr::Pow(a, k) => {
            let base = evaluate(a, target, symbols)?;
            let mut acc = target.constant(HPoly::one());
            for _ in 0..*k {
                acc = target.mul(&acc, &base);
            }
            acc
        }
    })
}

/// Target for plain coefficients: polynomials in `h` and symbols.
pub struct HPolyTarget;

impl EvalTarget for HPolyTarget {
    type Value = HPoly;

    fn constant(&self, c: HPoly) -> HPoly {
        c
    }
    fn identifier(&self, _: &str) -> Option<HPoly> {
        None
    }
    fn add(&self, a: &HPoly, b: &HPoly) -> HPoly {
        a + b
    }
    fn sub(&self, a: &HPoly, b: &HPoly) -> HPoly {
        a - b
    }
    fn mul(&self, a: &HPoly, b: &HPoly) -> HPoly {
        a * b
    }
    fn as_numeric(&self, v: &HPoly) -> Option<GaussRat> {
        v.as_constant()
    }
}

/// Parses a coefficient in `h` where any other identifier is a symbolic constant.
pub fn parse_hpoly(text: &str) -> Result<HPoly> {
    evaluate(&parse(text)?, &HPolyTarget, &Symbols::Any)
}

/// Parses an `h`-free scalar, allowing the listed symbolic constants.
pub fn parse_scalar(text: &str, symbols: &[&str]) -> Result<Scalar> {
    let syms = Symbols::Only(symbols.iter().map(|s| s.to_string()).collect());
    let v = evaluate(&parse(text)?, &HPolyTarget, &syms)?;
    v.as_scalar().ok_or_else(|| Error::NotNumeric(text.to_string()))
}

/// Commutative polynomials; identifiers are `x_<label>` or the bare label.
pub struct CommTarget<'a> {
    pub lie: &'a LieAlgebra,
}

impl EvalTarget for CommTarget<'_> {
    type Value = CommPoly;

    fn constant(&self, c: HPoly) -> CommPoly {
        CommPoly::constant(self.lie.dim(), c)
    }
    fn identifier(&self, name: &str) -> Option<CommPoly> {
        let label = name.strip_prefix("x_").unwrap_or(name);
        self.lie
            .index_of(label)
            .or_else(|| self.lie.index_of(name))
            .map(|i| CommPoly::var(self.lie.dim(), i))
    }
    fn add(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a + b
    }
    fn sub(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a - b
    }
    fn mul(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a * b
    }
    fn as_numeric(&self, v: &CommPoly) -> Option<GaussRat> {
        match v.terms().len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (e, c) = v.terms().iter().next()?;
                if e.iter().all(|&k| k == 0) {
                    c.as_constant()
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

pub fn parse_commpoly(text: &str, lie: &LieAlgebra, symbols: &Symbols) -> Result<CommPoly> {
    evaluate(&parse(text)?, &CommTarget { lie }, symbols)
}

/// Elements of `U_h`; `*` is order-significant. Extra bindings let callers
/// name composite elements (for instance `V1 = G^2`).
pub struct NcTarget<'a> {
    pub env: &'a Enveloping,
    pub bindings: &'a [(String, UElement)],
}

impl EvalTarget for NcTarget<'_> {
    type Value = UElement;

    fn constant(&self, c: HPoly) -> UElement {
        UElement::constant(c)
    }
    fn identifier(&self, name: &str) -> Option<UElement> {
        if let Some((_, v)) = self.bindings.iter().find(|(n, _)| n == name) {
            return Some(v.clone());
        }
        self.env.lie().index_of(name).map(UElement::generator)
    }
    fn add(&self, a: &UElement, b: &UElement) -> UElement {
        a + b
    }
    fn sub(&self, a: &UElement, b: &UElement) -> UElement {
        a - b
    }
    fn mul(&self, a: &UElement, b: &UElement) -> UElement {
        self.env.multiply(a, b)
    }
    fn as_numeric(&self, v: &UElement) -> Option<GaussRat> {
        v.as_constant().and_then(|c| c.as_constant())
    }
}

pub fn parse_uelement(text: &str, env: &Enveloping, symbols: &Symbols) -> Result<UElement> {
    evaluate(
        &parse(text)?,
        &NcTarget {
            env,
            bindings: &[],
        },
        symbols,
    )
}

/// Generic ring of named commutative values, used for classical relations in
/// composite generators such as `v1 = x_G^2`.
pub struct BoundCommTarget<'a> {
    pub lie: &'a LieAlgebra,
    pub bindings: &'a [(String, CommPoly)],
}

impl EvalTarget for BoundCommTarget<'_> {
    type Value = CommPoly;

    fn constant(&self, c: HPoly) -> CommPoly {
        CommPoly::constant(self.lie.dim(), c)
    }
    fn identifier(&self, name: &str) -> Option<CommPoly> {
        if let Some((_, v)) = self.bindings.iter().find(|(n, _)| n == name) {
            return Some(v.clone());
        }
        CommTarget { lie: self.lie }.identifier(name)
    }
    fn add(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a + b
    }
    fn sub(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a - b
    }
    fn mul(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a * b
    }
    fn as_numeric(&self, v: &CommPoly) -> Option<GaussRat> {
        CommTarget { lie: self.lie }.as_numeric(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commpoly::MonomialOrder;
    use crate::liealg::presets;

    #[test]
    fn precedence() {
        let v = parse_hpoly("1 + 2*3^2 - -4").unwrap();
        assert_eq!(v, HPoly::from_int(23));
        let v = parse_hpoly("-2^2").unwrap();
        assert_eq!(v, HPoly::from_int(-4));
        let v = parse_hpoly("(1+h)^2").unwrap();
        assert_eq!(v.to_string(), "1 + 2*h + h^2");
        let v = parse_hpoly("1/2*i").unwrap();
        assert_eq!(v.as_constant().unwrap(), GaussRat::i() * GaussRat::ratio(1, 2));
    }

    #[test]
    fn casimir_text() {
        let sl2 = presets::sl2();
        let p = parse_commpoly("1/4*x_H^2 + x_X*x_Y", &sl2, &Symbols::None).unwrap();
        assert_eq!(&p, &sl2.invariants()[0]);
        let q = parse_commpoly("1/4*H^2 + X*Y", &sl2, &Symbols::None).unwrap();
        assert_eq!(p, q);
        let names = sl2.coordinate_names();
        assert_eq!(
            p.to_text(&names, &MonomialOrder::deglex(3)),
            "1/4*x_H^2 + x_X*x_Y"
        );
    }

    #[test]
    fn noncommutative_product() {
        let env = Enveloping::new(presets::sl2());
        let u = parse_uelement("X*H", &env, &Symbols::None).unwrap();
        assert_eq!(u.to_text(env.lie().labels()), "H*X - 2*h*X");
    }

    #[test]
    fn errors() {
        let sl2 = presets::sl2();
        assert_eq!(
            parse_commpoly("x_Q", &sl2, &Symbols::None),
            Err(Error::UnknownIdentifier("x_Q".into()))
        );
        assert!(matches!(parse("x_H x_X"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("x_H^-1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(1 + h"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1 $ 2"), Err(Error::Syntax { pos: 2, .. })));
        assert_eq!(
            parse_commpoly("x_H/x_X", &sl2, &Symbols::None),
            Err(Error::DivisionByNonConstant)
        );
        assert_eq!(parse_hpoly("1/0"), Err(Error::DivisionByZero));
        assert!(parse_scalar("h", &[]).is_err());
        assert!(parse_scalar("c0", &[]).is_err());
        assert!(parse_scalar("c0", &["c0"]).is_ok());
    }
}
