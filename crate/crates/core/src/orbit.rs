//! The deformed orbit algebra `U_h / I_h`, with `I_h = (P_i - c_i(h))`.
//!
//! Elements are represented in the standard-monomial basis `A` of the
//! classical orbit ideal `I_0 = (p_i - c_i(0))`. A PBW monomial `m` outside
//! `A` is reduced by dividing its commutative image by the Gröbner basis of
//! `I_0`, lifting the quotients and remainder back to `U_h`, and recursing on
//! the defect, which has strictly lower degree:
//!
//! ```text
//! m = Σ lift(q_i) (P_i - c_i(h)) + lift(r) + D,   deg D < deg m.
//! ```

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::commpoly::{groebner, poisson_bracket, CommPoly, Exponents, IdealBasis, MonomialOrder};
use crate::error::{Error, Result};
use crate::expr::{evaluate, parse, parse_commpoly, BoundCommTarget, NcTarget, Symbols};
use crate::liealg::{BasisChange, LieAlgebra};
use crate::scalar::{format_sum, GaussRat, HPoly, Scalar};
use crate::uea::{Enveloping, PbwMonomial, UElement};

/// How a polynomial function is sent into `U_h / I_h`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantizationMap {
    /// Reduce mod `I_0`, then send each standard monomial to the ordered PBW
    /// monomial with the same exponents.
    #[default]
    Standard,
    /// Symmetrize, then reduce mod `I_h`.
    Symmetric,
}

impl FromStr for QuantizationMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(QuantizationMap::Standard),
            "symmetric" => Ok(QuantizationMap::Symmetric),
            other => Err(Error::Load(format!(
                "unknown quantization map `{other}` (expected standard or symmetric)"
            ))),
        }
    }
}

impl fmt::Display for QuantizationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuantizationMap::Standard => "standard",
            QuantizationMap::Symmetric => "symmetric",
        })
    }
}

/// Data defining an orbit and its quantization.
#[derive(Clone, Debug)]
pub struct OrbitSpec {
    pub algebra: LieAlgebra,
    pub invariants: Vec<CommPoly>,
    /// `c_i(h)`; the classical orbit uses `c_i(0)` unless overridden.
    pub constants: Vec<HPoly>,
    /// Explicit constants of `I_0`; must equal `c_i(0)` for a valid orbit.
    pub classical_constants: Option<Vec<Scalar>>,
    /// A point of the orbit, checked for regularity at build time.
    pub witness: Option<Vec<GaussRat>>,
}

impl OrbitSpec {
    /// Uses the algebra's invariants (declared, or the quadratic Casimir).
    pub fn new(algebra: LieAlgebra, constants: Vec<HPoly>) -> Result<Self> {
        let invariants = algebra.effective_invariants()?;
        if invariants.len() != constants.len() {
            return Err(Error::DimensionMismatch {
                expected: invariants.len(),
                found: constants.len(),
            });
        }
        Ok(OrbitSpec {
            algebra,
            invariants,
            constants,
            classical_constants: None,
            witness: None,
        })
    }

    pub fn with_classical_constants(mut self, c: Vec<Scalar>) -> Self {
        self.classical_constants = Some(c);
        self
    }

    pub fn with_witness(mut self, point: Vec<GaussRat>) -> Self {
        self.witness = Some(point);
        self
    }

    /// Constants of `I_0`.
    pub fn ideal_constants(&self) -> Vec<Scalar> {
        match &self.classical_constants {
            Some(c) => c.clone(),
            None => self.constants.iter().map(HPoly::constant_term).collect(),
        }
    }

    /// Names of the symbolic constants appearing in `c_i(h)`.
    pub fn symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .constants
            .iter()
            .flat_map(HPoly::symbols)
            .map(|s| s.to_string())
            .collect();
        if let Some(c) = &self.classical_constants {
            out.extend(c.iter().flat_map(Scalar::symbols).map(|s| s.to_string()));
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Element of `U_h / I_h` in the standard-monomial basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrbitElement {
    poly: CommPoly,
}

impl OrbitElement {
    pub fn zero(nvars: usize) -> Self {
        OrbitElement {
            poly: CommPoly::zero(nvars),
        }
    }

    pub fn poly(&self) -> &CommPoly {
        &self.poly
    }

    pub fn into_poly(self) -> CommPoly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, e: &[u32]) -> HPoly {
        self.poly.coeff(e)
    }

    pub fn scale(&self, c: &HPoly) -> OrbitElement {
        OrbitElement {
            poly: self.poly.scale(c),
        }
    }

    /// Specializes `h = h0` in every coefficient.
    pub fn eval_h(&self, h0: &GaussRat) -> OrbitElement {
        OrbitElement {
            poly: self.poly.eval_h(h0),
        }
    }

    pub fn divide_by_h(&self) -> Result<OrbitElement> {
        Ok(OrbitElement {
            poly: self.poly.divide_by_h()?,
        })
    }

    pub fn to_text(&self, names: &[String], order: &MonomialOrder) -> String {
        self.poly.to_text(names, order)
    }

    /// `{monomial: coefficient}` with canonical textual forms; the unit
    /// monomial is written `1`.
    pub fn to_json(&self, names: &[String]) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (e, c) in self.poly.terms() {
            map.insert(monomial_text(e, names), serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(map)
    }
}

fn monomial_text(e: &[u32], names: &[String]) -> String {
    let factors: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                names[i].clone()
            } else {
                format!("{}^{k}", names[i])
            }
        })
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

impl<'a> Add<&'a OrbitElement> for &'a OrbitElement {
    type Output = OrbitElement;
    fn add(self, rhs: &OrbitElement) -> OrbitElement {
        OrbitElement {
            poly: &self.poly + &rhs.poly,
        }
    }
}

impl<'a> Sub<&'a OrbitElement> for &'a OrbitElement {
    type Output = OrbitElement;
    fn sub(self, rhs: &OrbitElement) -> OrbitElement {
        OrbitElement {
            poly: &self.poly - &rhs.poly,
        }
    }
}

/// Which deformation property a violation concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// `f ⋆ g` at `h = 0` differs from the commutative product mod `I_0`.
    ClassicalLimit,
    /// `f ⋆ g - g ⋆ f` is not divisible by `h`.
    CommutatorNotDivisible,
    /// The first-order commutator differs from the Poisson bracket.
    PoissonBracket,
    /// `(f ⋆ g) ⋆ k ≠ f ⋆ (g ⋆ k)`.
    Associativity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witnesses: Vec<String>,
    pub found: String,
    pub expected: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DeformationReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub violations: Vec<Violation>,
}

impl DeformationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One row of a commutator table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationRow {
    /// E.g. `V4*V1 - V1*V4`.
    pub lhs: String,
    /// Value in the standard-monomial basis.
    pub value: String,
    /// Value rewritten in the named generators, when found.
    pub generator_form: Option<String>,
}

/// Outcome of checking `lhs = rhs` in `U_h / I_h`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    /// Reduction steps: both sides in the PBW basis and modulo `I_h`, and the
    /// reduction of every PBW monomial of the difference.
    pub transcript: Vec<String>,
}

/// Generators and relations of a subalgebra fixed by an involution.
#[derive(Clone, Debug)]
pub struct InvariantSubalgebra {
    /// `(name, expression in U_h)`, e.g. `("V1", "G^2")`; the classical
    /// shadow is bound to the lower-cased name.
    pub generators: Vec<(String, String)>,
    /// Relations in the classical orbit algebra, over the lower-cased names.
    pub classical_relations: Vec<(String, String)>,
    /// Relations in `U_h / I_h`, over the generator names.
    pub quantum_relations: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubalgebraReport {
    pub invariant_generators: Vec<(String, bool)>,
    pub classical_relations: Vec<(String, bool)>,
    pub quantum_relations: Vec<RelationCheck>,
    pub table: Vec<RelationRow>,
}

impl SubalgebraReport {
    pub fn passed(&self) -> bool {
        self.invariant_generators.iter().all(|(_, ok)| *ok)
            && self.classical_relations.iter().all(|(_, ok)| *ok)
            && self.quantum_relations.iter().all(|r| r.holds)
    }
}

/// `U_h / I_h` together with the data needed to reduce into it.
#[derive(Debug)]
pub struct OrbitAlgebra {
    spec: OrbitSpec,
    env: Enveloping,
    order: MonomialOrder,
    map: QuantizationMap,
    ideal: IdealBasis,
    casimirs: Vec<UElement>,
    /// `P_i - c_i(h)`.
    relations: Vec<UElement>,
    cache: RwLock<HashMap<PbwMonomial, Arc<CommPoly>>>,
}

impl OrbitAlgebra {
    /// Validates the spec (invariance, regularity of the witness, constants)
    /// and prepares the Gröbner basis of `I_0` and the central elements `P_i`.
    pub fn build(spec: OrbitSpec, order: MonomialOrder, map: QuantizationMap) -> Result<Self> {
        if let Some(classical) = &spec.classical_constants {
            for (i, (c, expected)) in spec.constants.iter().zip(classical).enumerate() {
                let found = c.constant_term();
                if &found != expected {
                    return Err(Error::InconsistentConstants {
                        index: i,
                        found: found.to_string(),
                        expected: expected.to_string(),
                    });
                }
            }
        }
        if let Some(point) = &spec.witness {
            if !spec.algebra.is_regular(point)? {
                return Err(Error::NotRegular(format!("{point:?}")));
            }
        }
        Self::build_unchecked(spec, order, map)
    }

    /// Like [`OrbitAlgebra::build`] but without the constant-consistency and
    /// regularity checks; `I_0` uses the spec's classical constants as given.
    pub fn build_unchecked(spec: OrbitSpec, order: MonomialOrder, map: QuantizationMap) -> Result<Self> {
        let lie = spec.algebra.clone();
        let n = lie.dim();
        if order.nvars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: order.nvars(),
            });
        }
        if spec.invariants.len() != spec.constants.len() {
            return Err(Error::DimensionMismatch {
                expected: spec.invariants.len(),
                found: spec.constants.len(),
            });
        }
        let names = lie.coordinate_names();
        for p in &spec.invariants {
            if !crate::commpoly::is_invariant(p, &lie) {
                return Err(Error::NotInvariant(p.to_text(&names, &order)));
            }
        }
        let generators: Vec<CommPoly> = spec
            .invariants
            .iter()
            .zip(spec.ideal_constants())
            .map(|(p, c)| p - &CommPoly::constant(n, HPoly::constant(c)))
            .collect();
        let ideal = groebner(&generators, &order)?;
        let env = Enveloping::new(lie);
        let mut casimirs = Vec::new();
        let mut relations = Vec::new();
        for (p, c) in spec.invariants.iter().zip(&spec.constants) {
            let cas = env.symmetrize(p)?;
            if !env.is_central(&cas) {
                return Err(Error::NotCentral(cas.to_text(env.lie().labels())));
            }
            relations.push(&cas - &UElement::constant(c.clone()));
            casimirs.push(cas);
        }
        Ok(OrbitAlgebra {
            spec,
            env,
            order,
            map,
            ideal,
            casimirs,
            relations,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &OrbitSpec {
        &self.spec
    }

    pub fn lie(&self) -> &LieAlgebra {
        self.env.lie()
    }

    pub fn enveloping(&self) -> &Enveloping {
        &self.env
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn map(&self) -> QuantizationMap {
        self.map
    }

    pub fn ideal(&self) -> &IdealBasis {
        &self.ideal
    }

    pub fn casimirs(&self) -> &[UElement] {
        &self.casimirs
    }

    pub fn nvars(&self) -> usize {
        self.lie().dim()
    }

    pub fn names(&self) -> Vec<String> {
        self.lie().coordinate_names()
    }

    /// Canonical text of an element.
    pub fn format(&self, a: &OrbitElement) -> String {
        a.to_text(&self.names(), &self.order)
    }

    /// Standard monomials of degree at most `d`.
    pub fn basis(&self, d: usize) -> Vec<Exponents> {
        self.ideal.standard_monomials(d)
    }

    /// Reduces an element of `U_h` modulo `I_h` onto the standard basis.
    pub fn reduce(&self, a: &UElement) -> Result<OrbitElement> {
        let mut out = CommPoly::zero(self.nvars());
        for (m, c) in a.terms() {
            let r = self.reduce_monomial(m)?;
            out = &out + &r.scale(c);
        }
        Ok(OrbitElement { poly: out })
    }

    fn reduce_monomial(&self, m: &PbwMonomial) -> Result<Arc<CommPoly>> {
        let n = self.nvars();
        let e = m.exponents(n);
        if self.ideal.is_standard(&e) {
            return Ok(Arc::new(CommPoly::monomial(e, HPoly::one())));
        }
        if let Some(hit) = self.cache.read().expect("cache lock").get(m) {
            return Ok(hit.clone());
        }
        let nf = self.ideal.normal_form(&CommPoly::monomial(e, HPoly::one()));
        let mut defect = UElement::term(m.clone(), HPoly::one());
        for (q, rel) in nf.quotients.iter().zip(&self.relations) {
            if !q.is_zero() {
                defect = &defect - &self.env.multiply(&UElement::ordered_lift(q), rel);
            }
        }
        defect = &defect - &UElement::ordered_lift(&nf.remainder);
        if let Some(d) = defect.degree() {
            if d >= m.degree() {
                return Err(Error::NonTermination {
                    from: m.degree(),
                    to: d,
                });
            }
        }
        let rest = self.reduce(&defect)?;
        let out = Arc::new(&nf.remainder + &rest.poly);
        self.cache
            .write()
            .expect("cache lock")
            .insert(m.clone(), out.clone());
        Ok(out)
    }

    /// Ordered lift of a standard-basis element back into `U_h`.
    pub fn lift(&self, a: &OrbitElement) -> UElement {
        UElement::ordered_lift(&a.poly)
    }

    /// Quantizes with the algebra's default map.
    pub fn quantize(&self, f: &CommPoly) -> Result<OrbitElement> {
        self.quantize_with(f, self.map)
    }

    pub fn quantize_with(&self, f: &CommPoly, map: QuantizationMap) -> Result<OrbitElement> {
        match map {
            QuantizationMap::Standard => {
                self.reduce(&UElement::ordered_lift(&self.ideal.reduce(f)))
            }
            QuantizationMap::Symmetric => self.reduce(&self.env.symmetrize(f)?),
        }
    }

    /// Product of two elements of `U_h / I_h`.
    pub fn star_elements(&self, a: &OrbitElement, b: &OrbitElement) -> Result<OrbitElement> {
        self.reduce(&self.env.multiply(&self.lift(a), &self.lift(b)))
    }

    /// `f ⋆ g`: quantize both factors, multiply in `U_h`, reduce.
    pub fn star(&self, f: &CommPoly, g: &CommPoly) -> Result<OrbitElement> {
        self.star_elements(&self.quantize(f)?, &self.quantize(g)?)
    }

    /// Normal form of `f` modulo `I_0` as an orbit element.
    pub fn classical(&self, f: &CommPoly) -> OrbitElement {
        OrbitElement {
            poly: self.ideal.reduce(f),
        }
    }

    /// Checks the deformation properties on all standard monomials: pairs up
    /// to `max_degree` (classical limit, first-order Poisson bracket) and
    /// triples up to `assoc_degree` (associativity).
    pub fn verify_deformation(&self, max_degree: usize, assoc_degree: usize) -> Result<DeformationReport> {
        let names = self.names();
        let zero = GaussRat::zero();
        let n = self.nvars();
        let text = |p: &CommPoly| p.to_text(&names, &self.order);
        let mut report = DeformationReport::default();
        let monos: Vec<CommPoly> = self
            .basis(max_degree)
            .into_iter()
            .map(|e| CommPoly::monomial(e, HPoly::one()))
            .collect();
        let mut products: HashMap<(usize, usize), OrbitElement> = HashMap::new();
        for (i, f) in monos.iter().enumerate() {
            for (j, g) in monos.iter().enumerate() {
                let s = self.star(f, g)?;
                products.insert((i, j), s);
            }
        }
        for (i, f) in monos.iter().enumerate() {
            for (j, g) in monos.iter().enumerate() {
                report.pairs_checked += 1;
                let fg = &products[&(i, j)];
                let gf = &products[&(j, i)];
                let witnesses = vec![text(f), text(g)];
                let found = fg.eval_h(&zero);
                let expected = self.classical(&(f * g)).eval_h(&zero);
                if found != expected {
                    report.violations.push(Violation {
                        kind: ViolationKind::ClassicalLimit,
                        witnesses: witnesses.clone(),
                        found: self.format(&found),
                        expected: self.format(&expected),
                    });
                }
                let comm = fg - gf;
                match comm.divide_by_h() {
                    Err(_) => report.violations.push(Violation {
                        kind: ViolationKind::CommutatorNotDivisible,
                        witnesses,
                        found: self.format(&comm),
                        expected: "a multiple of h".to_string(),
                    }),
                    Ok(q) => {
                        let found = q.eval_h(&zero);
                        let expected = self.classical(&poisson_bracket(f, g, self.lie())).eval_h(&zero);
                        if found != expected {
                            report.violations.push(Violation {
                                kind: ViolationKind::PoissonBracket,
                                witnesses,
                                found: self.format(&found),
                                expected: self.format(&expected),
                            });
                        }
                    }
                }
            }
        }
        let small: Vec<(usize, &CommPoly)> = monos
            .iter()
            .enumerate()
            .filter(|(_, m)| m.degree().unwrap_or(0) <= assoc_degree)
            .collect();
        let quantized: Vec<OrbitElement> = monos
            .iter()
            .map(|m| self.quantize(m))
            .collect::<Result<_>>()?;
        for &(i, f) in &small {
            for &(j, g) in &small {
                for &(k, h) in &small {
                    report.triples_checked += 1;
                    let left = self.star_elements(&products[&(i, j)], &quantized[k])?;
                    let right = self.star_elements(&quantized[i], &products[&(j, k)])?;
                    if left != right {
                        report.violations.push(Violation {
                            kind: ViolationKind::Associativity,
                            witnesses: vec![text(f), text(g), text(h)],
                            found: self.format(&left),
                            expected: self.format(&right),
                        });
                    }
                }
            }
        }
        debug_assert!(monos.iter().all(|m| m.nvars() == n));
        Ok(report)
    }

    fn symbols(&self) -> Symbols {
        Symbols::Only(self.spec.symbols())
    }

    /// Parses an expression in `U_h`, with optional named elements.
    pub fn parse_element(&self, text: &str, bindings: &[(String, UElement)]) -> Result<UElement> {
        let target = NcTarget {
            env: &self.env,
            bindings,
        };
        evaluate(&parse(text)?, &target, &self.symbols())
    }

    /// Parses a commutative polynomial over the coordinates.
    pub fn parse_function(&self, text: &str) -> Result<CommPoly> {
        parse_commpoly(text, self.lie(), &self.symbols())
    }

    /// Decides `lhs = rhs` in `U_h / I_h`, recording the reduction.
    pub fn check_relation(&self, lhs: &str, rhs: &str, bindings: &[(String, UElement)]) -> Result<RelationCheck> {
        let labels = self.lie().labels().to_vec();
        let l = self.parse_element(lhs, bindings)?;
        let r = self.parse_element(rhs, bindings)?;
        let diff = &l - &r;
        let rl = self.reduce(&l)?;
        let rr = self.reduce(&r)?;
        let reduced = self.reduce(&diff)?;
        let mut transcript = vec![
            format!("lhs in U_h: {}", l.to_text(&labels)),
            format!("rhs in U_h: {}", r.to_text(&labels)),
            format!("lhs mod I_h: {}", self.format(&rl)),
            format!("rhs mod I_h: {}", self.format(&rr)),
        ];
        for (m, c) in diff.terms() {
            let single = UElement::term(m.clone(), HPoly::one());
            let red = self.reduce(&single)?;
            transcript.push(format!(
                "  ({c}) * {} -> {}",
                single.to_text(&labels),
                self.format(&red)
            ));
        }
        transcript.push(format!("lhs - rhs mod I_h: {}", self.format(&reduced)));
        Ok(RelationCheck {
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            holds: reduced.is_zero(),
            transcript,
        })
    }

    /// For every pair `a < b` of named generators, the reduced commutator
    /// `V_b V_a - V_a V_b`, also rewritten in the generators when the greedy
    /// leading-term matching succeeds.
    pub fn relations_table(&self, gens: &[(String, UElement)]) -> Result<Vec<RelationRow>> {
        let candidates = self.generator_words(gens, 3)?;
        let mut rows = Vec::new();
        for b in 0..gens.len() {
            for a in 0..b {
                let (na, va) = &gens[a];
                let (nb, vb) = &gens[b];
                let comm = self.env.commutator(vb, va);
                let value = self.reduce(&comm)?;
                rows.push(RelationRow {
                    lhs: format!("{nb}*{na} - {na}*{nb}"),
                    value: self.format(&value),
                    generator_form: self.express_in_generators(&value, &candidates),
                });
            }
        }
        Ok(rows)
    }

    /// Reduced values of all non-decreasing generator words up to `max_len`,
    /// shortest first.
    fn generator_words(&self, gens: &[(String, UElement)], max_len: usize) -> Result<Vec<(Vec<usize>, OrbitElement)>> {
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                let start = w.last().copied().unwrap_or(0);
                for g in start..gens.len() {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        words
            .into_iter()
            .map(|w| {
                let mut u = UElement::one();
                for &g in &w {
                    u = self.env.multiply(&u, &gens[g].1);
                }
                Ok((w, self.reduce(&u)?))
            })
            .collect()
    }

    fn express_in_generators(&self, value: &OrbitElement, candidates: &[(Vec<usize>, OrbitElement)]) -> Option<String> {
        self.greedy_match(value, candidates).map(|mut terms| {
            terms.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.1.cmp(&b.1)));
            let summands = terms.into_iter().flat_map(|(c, word)| {
                c.summands().into_iter().map(move |(k, mut f)| {
                    f.extend(word.iter().map(|g| format!("V{}", g + 1)));
                    (k, f)
                })
            });
            format_sum(summands)
        })
    }

    fn greedy_match(&self, value: &OrbitElement, candidates: &[(Vec<usize>, OrbitElement)]) -> Option<Vec<(HPoly, Vec<usize>)>> {
        let mut rem = value.poly.clone();
        let mut terms: Vec<(HPoly, Vec<usize>)> = Vec::new();
        for _ in 0..256 {
            let Some((lm, lc)) = rem.leading_term(&self.order).map(|(e, c)| (e.clone(), c.clone())) else {
                return Some(terms);
            };
            let (word, cand) = candidates.iter().find(|(_, c)| {
                c.poly
                    .leading_term(&self.order)
                    .is_some_and(|(e, c)| *e == lm && c.as_constant().is_some_and(|k| !k.is_zero()))
            })?;
            let (_, clc) = cand.poly.leading_term(&self.order)?;
            let k = lc.scale_rat(&clc.as_constant()?.inv().ok()?);
            rem = &rem - &cand.poly.scale(&k);
            match terms.iter_mut().find(|(_, w)| w == word) {
                Some((c, _)) => *c += &k,
                None => terms.push((k, word.clone())),
            }
        }
        None
    }

    /// Checks an involutive automorphism against a presented subalgebra:
    /// invariance of its generators, classical relations modulo `I_0`, the
    /// quantum relations modulo `I_h`, and emits its commutator table.
    pub fn invariant_subalgebra_demo(&self, aut: &BasisChange, sub: &InvariantSubalgebra) -> Result<SubalgebraReport> {
        if !aut.is_involution() {
            return Err(Error::NotInvolution);
        }
        let names = self.names();
        for p in &self.spec.invariants {
            if p.linear_substitute(aut.matrix()) != *p {
                return Err(Error::CasimirNotFixed(p.to_text(&names, &self.order)));
            }
        }
        if !self.lie().is_automorphism(aut) {
            return Err(Error::NotAutomorphism);
        }
        for cas in &self.casimirs {
            if self.env.apply_automorphism(cas, aut)? != *cas {
                return Err(Error::CasimirNotFixed(cas.to_text(self.lie().labels())));
            }
        }
        let mut bindings: Vec<(String, UElement)> = Vec::new();
        for (name, expr) in &sub.generators {
            let v = self.parse_element(expr, &bindings)?;
            bindings.push((name.clone(), v));
        }
        let invariant_generators = bindings
            .iter()
            .map(|(name, v)| Ok((name.clone(), self.env.apply_automorphism(v, aut)? == *v)))
            .collect::<Result<Vec<_>>>()?;
        let n = self.nvars();
        let classical_bindings: Vec<(String, CommPoly)> = bindings
            .iter()
            .map(|(name, v)| (name.to_lowercase(), v.project_classical(n)))
            .collect();
        let target = BoundCommTarget {
            lie: self.lie(),
            bindings: &classical_bindings,
        };
        let symbols = self.symbols();
        let mut classical_relations = Vec::new();
        for (lhs, rhs) in &sub.classical_relations {
            let l = evaluate(&parse(lhs)?, &target, &symbols)?;
            let r = evaluate(&parse(rhs)?, &target, &symbols)?;
            classical_relations.push((format!("{lhs} = {rhs}"), self.ideal.contains(&(&l - &r))));
        }
        let quantum_relations = sub
            .quantum_relations
            .iter()
            .map(|(lhs, rhs)| self.check_relation(lhs, rhs, &bindings))
            .collect::<Result<Vec<_>>>()?;
        let table = self.relations_table(&bindings)?;
        Ok(SubalgebraReport {
            invariant_generators,
            classical_relations,
            quantum_relations,
            table,
        })
    }
}

/// Ready-made orbits for the preset algebras.
pub mod presets {
    use super::*;
    use crate::expr::parse_hpoly;
    use crate::liealg::presets as lie;

    /// Default variable precedence: the variable whose square leads the
    /// invariant comes first.
    pub fn default_order(name: &str) -> Option<MonomialOrder> {
        let prec = match name {
            "sl2" => vec![0, 1, 2],
            "su2" => vec![0, 1, 2],
            "so21" => vec![2, 1, 0],
            _ => return None,
        };
        MonomialOrder::with_precedence(prec).ok()
    }

    /// Default `c(h)` text for each preset.
    pub fn default_constant(name: &str) -> Option<&'static str> {
        match name {
            "sl2" => Some("c0"),
            "su2" => Some("-a^2"),
            "so21" => Some("a^2 - c1*h"),
            _ => None,
        }
    }

    pub fn spec(name: &str, constant: &HPoly) -> Result<OrbitSpec> {
        let algebra = lie::by_name(name).ok_or_else(|| Error::Load(format!("unknown preset `{name}`")))?;
        OrbitSpec::new(algebra, vec![constant.clone()])
    }

    /// Builds a preset orbit with the given `c(h)` (default when `None`).
    pub fn orbit(name: &str, constant: Option<&str>, map: QuantizationMap) -> Result<OrbitAlgebra> {
        let text = match constant {
            Some(t) => t,
            None => default_constant(name).ok_or_else(|| Error::Load(format!("unknown preset `{name}`")))?,
        };
        let c = parse_hpoly(text)?;
        let order = default_order(name).ok_or_else(|| Error::Load(format!("unknown preset `{name}`")))?;
        OrbitAlgebra::build(spec(name, &c)?, order, map)
    }

    /// Subalgebra of the `so21` orbit fixed by the reflection
    /// `G -> -G, Et -> -Et`, with its classical and quantum relations.
    pub fn so21_subalgebra(constant: &str) -> InvariantSubalgebra {
        let s = |a: &str, b: &str| (a.to_string(), b.to_string());
        InvariantSubalgebra {
            generators: vec![s("V1", "G^2"), s("V2", "Et^2"), s("V3", "G*Et"), s("V4", "Ft")],
            classical_relations: vec![s("v3^2", "v1*v2"), s("v1 - v2 - v4^2", "a^2")],
            quantum_relations: vec![
                s("V3*V3", "V1*V2 - h*V3*V4 - h^2*V1"),
                s("V1 - V2 - V4^2", constant),
                s("V4*V1 - V1*V4", "2*h*V3 - h^2*V4"),
                s("V4*V2 - V2*V4", "2*h*V3 - h^2*V4"),
                s("V4*V3 - V3*V4", "h*(V1 + V2)"),
                s("V3*V1 - V1*V3", "-2*h*V1*V4 - h^2*V3"),
                s("V3*V2 - V2*V3", "h*(V4*V2 + V2*V4) + h^2*V3 - h^3*V4"),
                s("V2*V1 - V1*V2", "-2*h*V3*V4 + h^2*(V4^2 - V2 - V1)"),
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_hpoly;
    use crate::liealg::presets as lie;
    use proptest::prelude::*;

    fn sl2(c: &str) -> OrbitAlgebra {
        presets::orbit("sl2", Some(c), QuantizationMap::Standard).unwrap()
    }

    fn f(o: &OrbitAlgebra, s: &str) -> CommPoly {
        o.parse_function(s).unwrap()
    }

    fn u(o: &OrbitAlgebra, s: &str) -> UElement {
        o.parse_element(s, &[]).unwrap()
    }

    #[test]
    fn sl2_casimir_element() {
        let o = sl2("c0");
        assert_eq!(o.casimirs()[0].to_text(o.lie().labels()), "1/4*H^2 + X*Y - 1/2*h*H");
    }

    #[test]
    fn reduction_examples() {
        let o = sl2("c0 + c1*h");
        let r = o.reduce(&u(&o, "H^2")).unwrap();
        assert_eq!(o.format(&r), "4*c0 + 4*c1*h + 2*h*x_H - 4*x_X*x_Y");
        let gen = &o.casimirs()[0] - &UElement::constant(parse_hpoly("c0 + c1*h").unwrap());
        assert!(o.reduce(&gen).unwrap().is_zero());
        let a = u(&o, "H*X*Y + 3*h*X^2");
        assert_eq!(o.lift(&o.reduce(&a).unwrap()), a);
    }

    #[test]
    fn star_examples() {
        let o = sl2("c0");
        let (x, y, h) = (f(&o, "x_X"), f(&o, "x_Y"), f(&o, "x_H"));
        assert_eq!(o.format(&o.star(&x, &y).unwrap()), "x_X*x_Y");
        assert_eq!(o.format(&o.star(&y, &x).unwrap()), "-h*x_H + x_X*x_Y");
        let comm = &o.star(&x, &y).unwrap() - &o.star(&y, &x).unwrap();
        assert_eq!(o.format(&comm), "h*x_H");
        assert_eq!(o.format(&o.star(&h, &h).unwrap()), "4*c0 + 2*h*x_H - 4*x_X*x_Y");
        let one = CommPoly::one(3);
        let g = f(&o, "x_H*x_X^2 + 2*x_Y");
        assert_eq!(o.star(&one, &g).unwrap(), o.quantize(&g).unwrap());
    }

    #[test]
    fn quantization_maps() {
        let o = sl2("c0");
        let xy = f(&o, "x_X*x_Y");
        let std = o.quantize_with(&xy, QuantizationMap::Standard).unwrap();
        let sym = o.quantize_with(&xy, QuantizationMap::Symmetric).unwrap();
        assert_eq!(o.format(&std), "x_X*x_Y");
        assert_eq!(o.format(&(&std - &sym)), "1/2*h*x_H");
        let h2 = f(&o, "x_H^2");
        assert_eq!(o.format(&o.quantize_with(&h2, QuantizationMap::Standard).unwrap()), "4*c0 - 4*x_X*x_Y");
        let p = o.spec().invariants[0].clone();
        assert_eq!(o.format(&o.quantize_with(&p, QuantizationMap::Symmetric).unwrap()), "c0");
    }

    #[test]
    fn symmetric_centrality_with_h_dependent_constant() {
        let o = sl2("c0 - 2*c1*h + h^2");
        let p = o.spec().invariants[0].clone();
        let q = o.quantize_with(&p, QuantizationMap::Symmetric).unwrap();
        assert_eq!(o.format(&q), "c0 - 2*c1*h + h^2");
    }

    #[test]
    fn build_validation() {
        let spec = presets::spec("sl2", &parse_hpoly("1 + h").unwrap())
            .unwrap()
            .with_classical_constants(vec![Scalar::from_int(2)]);
        let err = OrbitAlgebra::build(spec, MonomialOrder::deglex(3), QuantizationMap::Standard).unwrap_err();
        assert!(matches!(err, Error::InconsistentConstants { index: 0, .. }));

        let mut spec = presets::spec("sl2", &HPoly::one()).unwrap();
        spec.invariants = vec![f(&sl2("1"), "x_H^2")];
        let err = OrbitAlgebra::build(spec, MonomialOrder::deglex(3), QuantizationMap::Standard).unwrap_err();
        assert!(matches!(err, Error::NotInvariant(_)));

        let spec = presets::spec("sl2", &HPoly::one()).unwrap().with_witness(vec![0.into(), 1.into(), 0.into()]);
        let err = OrbitAlgebra::build(spec, MonomialOrder::deglex(3), QuantizationMap::Standard).unwrap_err();
        assert!(matches!(err, Error::NotRegular(_)));

        let spec = presets::spec("sl2", &HPoly::one()).unwrap().with_witness(lie::witness_point("sl2").unwrap());
        assert!(OrbitAlgebra::build(spec, MonomialOrder::deglex(3), QuantizationMap::Standard).is_ok());
    }

    #[test]
    fn deformation_holds() {
        let o = sl2("1");
        let r = o.verify_deformation(3, 1).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.pairs_checked, 16 * 16);
        let o = presets::orbit("so21", None, QuantizationMap::Standard).unwrap();
        let r = o.verify_deformation(2, 1).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
        let o = presets::orbit("su2", None, QuantizationMap::Symmetric).unwrap();
        let r = o.verify_deformation(2, 1).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
    }

    #[test]
    fn corrupted_constant_is_detected() {
        let spec = presets::spec("sl2", &parse_hpoly("2 + h").unwrap())
            .unwrap()
            .with_classical_constants(vec![Scalar::from_int(1)]);
        let o = OrbitAlgebra::build_unchecked(spec, MonomialOrder::deglex(3), QuantizationMap::Standard).unwrap();
        let r = o.verify_deformation(2, 1).unwrap();
        assert!(!r.is_ok());
        assert!(r.violations.iter().any(|v| v.kind == ViolationKind::ClassicalLimit));
    }

    #[test]
    fn round_trip_on_basis() {
        let o = sl2("c0");
        for e in o.basis(4) {
            let m = CommPoly::monomial(e, HPoly::one());
            let q = o.quantize(&m).unwrap();
            assert_eq!(q.poly(), &m);
            assert_eq!(o.reduce(&o.lift(&q)).unwrap(), q);
        }
    }

    #[test]
    fn relations_of_the_so21_subalgebra() {
        let o = presets::orbit("so21", None, QuantizationMap::Standard).unwrap();
        let sub = presets::so21_subalgebra("a^2 - c1*h");
        let report = o.invariant_subalgebra_demo(&lie::so21_reflection(), &sub).unwrap();
        assert!(report.invariant_generators.iter().all(|(_, ok)| *ok));
        assert!(report.classical_relations.iter().all(|(_, ok)| *ok));
        for r in &report.quantum_relations[..7] {
            assert!(r.holds, "{}", r.transcript.join("\n"));
        }
        // The last commutator's first-order term is fixed by the Poisson
        // bracket {v2, v1} = {e^2, g^2} = -4 g e f, so it carries -4*h*V3*V4.
        let bindings: Vec<(String, UElement)> = sub
            .generators
            .iter()
            .map(|(n, e)| (n.clone(), o.parse_element(e, &[]).unwrap()))
            .collect();
        let r = o
            .check_relation("V2*V1 - V1*V2", "-4*h*V3*V4 + 2*h^2*(V4^2 - V2 - V1)", &bindings)
            .unwrap();
        assert!(r.holds, "{}", r.transcript.join("\n"));
        assert_eq!(report.table.len(), 6);
        let row = report.table.iter().find(|r| r.lhs == "V4*V3 - V3*V4").unwrap();
        assert_eq!(row.generator_form.as_deref(), Some("h*V1 + h*V2"));

        let id = BasisChange::identity(3);
        assert!(o.invariant_subalgebra_demo(&id, &sub).is_ok());
        let bad = BasisChange::new(crate::matrix::Matrix::diagonal(&[2.into(), 1.into(), 1.into()])).unwrap();
        assert_eq!(o.invariant_subalgebra_demo(&bad, &sub).unwrap_err(), Error::NotInvolution);
        // exchanging G and Et is an involution that moves the Casimir
        let swap = BasisChange::new(crate::matrix::Matrix::from_int_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])).unwrap();
        assert!(matches!(o.invariant_subalgebra_demo(&swap, &sub), Err(Error::CasimirNotFixed(_))));
        // the Weyl involution of sl2 fixes its Casimir
        let s = sl2("1");
        let w = BasisChange::new(crate::matrix::Matrix::from_int_rows(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]])).unwrap();
        let empty = InvariantSubalgebra {
            generators: vec![],
            classical_relations: vec![],
            quantum_relations: vec![],
        };
        assert!(s.invariant_subalgebra_demo(&w, &empty).unwrap().passed());
    }

    #[test]
    fn json_emission() {
        let o = sl2("c0");
        let s = o.star(&f(&o, "x_H"), &f(&o, "x_H")).unwrap();
        let j = s.to_json(&o.names());
        assert_eq!(j["1"], "4*c0");
        assert_eq!(j["x_H"], "2*h");
        assert_eq!(j["x_X*x_Y"], "-4");
    }

    fn arb_uelement() -> impl Strategy<Value = UElement> {
        prop::collection::vec((prop::collection::vec(0u16..3, 0..5), -3i64..4, 0usize..3), 1..5).prop_map(|terms| {
            let mut u = UElement::zero();
            for (w, c, hp) in terms {
                u.add_term(PbwMonomial::from_indices(w), &HPoly::monomial(Scalar::from_int(c), hp));
            }
            u
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn torsion_free(a in arb_uelement()) {
            let o = sl2("c0 + h");
            let ha = a.scale(&HPoly::h());
            prop_assert_eq!(o.reduce(&ha).unwrap(), o.reduce(&a).unwrap().scale(&HPoly::h()));
        }

        #[test]
        fn reduction_is_idempotent_and_in_the_class(a in arb_uelement()) {
            let o = sl2("c0");
            let r = o.reduce(&a).unwrap();
            for e in r.poly().terms().keys() {
                prop_assert!(o.ideal().is_standard(e));
            }
            prop_assert_eq!(o.reduce(&o.lift(&r)).unwrap(), r.clone());
            // a and its reduction differ by an element reducing to zero
            let diff = &a - &o.lift(&r);
            prop_assert!(o.reduce(&diff).unwrap().is_zero());
        }

        #[test]
        fn classical_limit_of_star(a in arb_uelement(), b in arb_uelement()) {
            let o = sl2("1");
            let fa = a.project_classical(3);
            let fb = b.project_classical(3);
            let s = o.star(&fa, &fb).unwrap().eval_h(&GaussRat::zero());
            prop_assert_eq!(s, o.classical(&(&fa * &fb)).eval_h(&GaussRat::zero()));
        }
    }

    #[test]
    fn order_independence_to_first_order() {
        let c = parse_hpoly("c0").unwrap();
        let orders = [vec![0, 1, 2], vec![1, 2, 0]];
        let algebras: Vec<OrbitAlgebra> = orders
            .iter()
            .map(|p| {
                OrbitAlgebra::build(
                    presets::spec("sl2", &c).unwrap(),
                    MonomialOrder::with_precedence(p.clone()).unwrap(),
                    QuantizationMap::Standard,
                )
                .unwrap()
            })
            .collect();
        let reference = &algebras[0];
        let zero = GaussRat::zero();
        for i in 0..3 {
            for j in 0..3 {
                let (xi, xj) = (CommPoly::var(3, i), CommPoly::var(3, j));
                let expected0 = reference.classical(&(&xi * &xj));
                let expected1 = reference.classical(&poisson_bracket(&xi, &xj, reference.lie()));
                for o in &algebras {
                    let fg = o.star(&xi, &xj).unwrap();
                    let gf = o.star(&xj, &xi).unwrap();
                    let zeroth = reference.classical(&fg.eval_h(&zero).into_poly());
                    prop_assert_helper(&zeroth, &expected0);
                    let first = (&fg - &gf).divide_by_h().unwrap().eval_h(&zero);
                    let first = reference.classical(first.poly());
                    prop_assert_helper(&first, &expected1);
                }
            }
        }
    }

    fn prop_assert_helper(a: &OrbitElement, b: &OrbitElement) {
        assert_eq!(a, b);
    }
}
