//! sl(2) acting on homogeneous polynomials in two variables.
//!
//! `P_m` has basis `γ^{m-j} ρ^j` for `j = 0..m` (index `j`). The Euler-type
//! operators `γ∂_γ, γ∂_ρ, ρ∂_γ, ρ∂_ρ` preserve `P_m`; the map
//!
//! ```text
//! p(X) = -γ∂_ρ,   p(Y) = -ρ∂_γ,   p(H) = -γ∂_γ + ρ∂_ρ
//! ```
//!
//! reverses products: its matrices satisfy the sl(2) relations of the
//! opposite algebra. `R_m = -p` is therefore a representation of `U`, and
//! both give the same Casimir operator `C = (XY + YX + H²/2)/2`, which acts on
//! `P_m` as the scalar `(m/2)(m/2 + 1)`.

use serde::Serialize;

use crate::commpoly::CommPoly;
use crate::error::{Error, Result};
use crate::liealg::presets;
use crate::matrix::Matrix;
use crate::orbit::{OrbitAlgebra, OrbitSpec, QuantizationMap};
use crate::scalar::{GaussRat, HPoly, Scalar};
use crate::uea::{PbwMonomial, UElement};

/// Default bound on `m` for representation-level checks.
pub const DEFAULT_MAX_M: usize = 8;

/// `γ∂_γ, γ∂_ρ, ρ∂_γ, ρ∂_ρ` on `P_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerOperators {
    pub g_dg: Matrix,
    pub g_dr: Matrix,
    pub r_dg: Matrix,
    pub r_dr: Matrix,
}

impl EulerOperators {
    /// `D = γ∂_γ + ρ∂_ρ`.
    pub fn degree_operator(&self) -> Matrix {
        &self.g_dg + &self.r_dr
    }

    pub fn all(&self) -> [&Matrix; 4] {
        [&self.g_dg, &self.g_dr, &self.r_dg, &self.r_dr]
    }
}

pub fn euler_operators(m: usize) -> EulerOperators {
    let n = m + 1;
    let mut g_dg = Matrix::zeros(n, n);
    let mut g_dr = Matrix::zeros(n, n);
    let mut r_dg = Matrix::zeros(n, n);
    let mut r_dr = Matrix::zeros(n, n);
    for j in 0..n {
        let (a, b) = ((m - j) as i64, j as i64);
        g_dg.set(j, j, a.into());
        r_dr.set(j, j, b.into());
        // γ∂_ρ (γ^a ρ^b) = b γ^{a+1} ρ^{b-1}
        if j > 0 {
            g_dr.set(j - 1, j, b.into());
        }
        // ρ∂_γ (γ^a ρ^b) = a γ^{a-1} ρ^{b+1}
        if j < m {
            r_dg.set(j + 1, j, a.into());
        }
    }
    EulerOperators {
        g_dg,
        g_dr,
        r_dg,
        r_dr,
    }
}

/// Images of `H, X, Y` (in that order, matching the sl2 preset).
#[derive(Clone, Debug, PartialEq)]
pub struct Triple {
    pub h: Matrix,
    pub x: Matrix,
    pub y: Matrix,
}

impl Triple {
    pub fn generators(&self) -> [&Matrix; 3] {
        [&self.h, &self.x, &self.y]
    }

    pub fn scale(&self, c: &GaussRat) -> Triple {
        Triple {
            h: self.h.scale(c),
            x: self.x.scale(c),
            y: self.y.scale(c),
        }
    }

    /// `(XY + YX + H²/2) / 2`.
    pub fn casimir(&self) -> Matrix {
        let half = GaussRat::ratio(1, 2);
        let xy = &self.x * &self.y;
        let yx = &self.y * &self.x;
        let hh = (&self.h * &self.h).scale(&half);
        (&(&xy + &yx) + &hh).scale(&half)
    }

    /// Checks `[H,X] = 2sX, [H,Y] = -2sY, [X,Y] = sH` with `s = sign`.
    pub fn satisfies_relations(&self, sign: i64) -> bool {
        let comm = |a: &Matrix, b: &Matrix| &(a * b) - &(b * a);
        let s = GaussRat::from_int(sign);
        comm(&self.h, &self.x) == self.x.scale(&(&s * &GaussRat::from_int(2)))
            && comm(&self.h, &self.y) == self.y.scale(&(&s * &GaussRat::from_int(-2)))
            && comm(&self.x, &self.y) == self.h.scale(&s)
    }
}

/// `p(H) = -γ∂_γ + ρ∂_ρ, p(X) = -γ∂_ρ, p(Y) = -ρ∂_γ`.
pub fn p_map(m: usize) -> Triple {
    let e = euler_operators(m);
    let minus = GaussRat::from_int(-1);
    Triple {
        h: &e.r_dr - &e.g_dg,
        x: e.g_dr.scale(&minus),
        y: e.r_dg.scale(&minus),
    }
}

/// The representation `R_m = -p` of sl(2) on `P_m`.
pub fn representation(m: usize) -> Triple {
    p_map(m).scale(&GaussRat::from_int(-1))
}

/// `(m/2)(m/2 + 1)`.
pub fn expected_casimir(m: usize) -> GaussRat {
    let l = GaussRat::ratio(m as i64, 2);
    &l * &(&l + &GaussRat::one())
}

/// The scalar by which `C` acts on `P_m`, computed from matrices.
pub fn casimir_scalar(m: usize) -> Result<GaussRat> {
    p_map(m).casimir().as_scalar().ok_or(Error::NotScalar)
}

/// Image of `u ∈ U_h` at `h = h0` under `X_i ↦ gens[i]`.
pub fn represent(u: &UElement, gens: &[&Matrix], h0: &GaussRat) -> Result<Matrix> {
    let n = gens.first().map_or(0, |g| g.rows());
    let mut out = Matrix::zeros(n, n);
    for (mono, c) in u.terms() {
        let c = c.eval(h0);
        let c = c.as_constant().ok_or_else(|| Error::NotNumeric(c.to_string()))?;
        let mut prod = Matrix::identity(n);
        for &g in mono.indices() {
            prod = &prod * gens[g as usize];
        }
        out = &out + &prod.scale(&c);
    }
    Ok(out)
}

/// Rescaled Casimir check on `P_m` at `h = ħ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescaledCheck {
    pub m: usize,
    pub hbar: String,
    /// The scalar by which the rescaled Casimir acts, if it is scalar.
    pub scalar: Option<String>,
    /// `l (l + ħ)` with `l = ħ m / 2`.
    pub expected: String,
    /// The quantized orbit with `c(h) = l (l + h)`, specialized at `h = ħ`,
    /// is compatible with the rescaled representation.
    pub orbit_consistent: bool,
    pub passed: bool,
}

/// Generators `ħ R_m(X)` satisfy `[X̃, Ỹ] = ħ H̃`; checks that their Casimir is
/// `l(l+ħ)`, and that the sl2 orbit algebra with `c(h) = l² + l h` is
/// compatible with them at `h = ħ`: `P - c(ħ)` acts as zero and every PBW
/// word of degree ≤ 3 acts like its reduction.
pub fn rescaled_casimir_check(m: usize, hbar: &GaussRat) -> Result<RescaledCheck> {
    let rep = representation(m).scale(hbar);
    let l = &GaussRat::ratio(m as i64, 2) * hbar;
    let expected = &l * &(&l + hbar);
    let scalar = rep.casimir().as_scalar();
    let orbit_consistent = orbit_cross_check(hbar, &rep, &l)?;
    let passed = scalar.as_ref() == Some(&expected) && orbit_consistent;
    Ok(RescaledCheck {
        m,
        hbar: hbar.to_string(),
        scalar: scalar.map(|s| s.to_string()),
        expected: expected.to_string(),
        orbit_consistent,
        passed,
    })
}

fn orbit_cross_check(hbar: &GaussRat, rep: &Triple, l: &GaussRat) -> Result<bool> {
    let c = HPoly::from_coeffs(vec![Scalar::from(l * l), Scalar::from(l.clone())]);
    let spec = OrbitSpec::new(presets::sl2(), vec![c.clone()])?;
    let orbit = OrbitAlgebra::build(spec, crate::commpoly::MonomialOrder::deglex(3), QuantizationMap::Standard)?;
    let gens = rep.generators();
    let relation = &orbit.casimirs()[0] - &UElement::constant(c);
    if !represent(&relation, &gens, hbar)?.is_zero() {
        return Ok(false);
    }
    for word in words_up_to(3, 3) {
        let u = orbit.enveloping().normal_form_word(&word);
        let r = orbit.lift(&orbit.reduce(&u)?);
        let lhs = represent(&u, &gens, hbar)?;
        let rhs = represent(&r, &gens, hbar)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

fn words_up_to(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in 0..n {
                let mut v: Vec<usize> = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// On `P_m`: `C = (D/2)(D/2 + 1)` with `D = m Id`, and `D` commutes with the
/// four Euler operators.
pub fn d_centrality_check(m: usize) -> bool {
    d_centrality_check_with(m, &p_map(m))
}

/// [`d_centrality_check`] for an arbitrary triple (used with corrupted
/// inputs as a negative control).
pub fn d_centrality_check_with(m: usize, triple: &Triple) -> bool {
    let e = euler_operators(m);
    let d = e.degree_operator();
    let half = GaussRat::ratio(1, 2);
    let dh = d.scale(&half);
    let expected = &dh * &(&dh + &Matrix::identity(m + 1));
    let commutes = e.all().iter().all(|op| &d * *op == &**op * &d);
    commutes && triple.casimir() == expected
}

/// Number of PBW monomials of degree ≤ `degree` in `U` (at `h = 1`) and the
/// rank of their images under `R_0 ⊕ … ⊕ R_max_m`. Equal values mean the
/// family separates all elements of that degree.
pub fn faithfulness_rank(degree: usize, max_m: usize) -> Result<(usize, usize)> {
    let monomials: Vec<PbwMonomial> = (0..=degree)
        .flat_map(|d| crate::commpoly::monomials_of_degree(3, d))
        .map(|e| PbwMonomial::from_exponents(&e))
        .collect();
    let reps: Vec<Triple> = (0..=max_m).map(representation).collect();
    let one = GaussRat::one();
    let mut rows = Vec::new();
    for mono in &monomials {
        let u = UElement::term(mono.clone(), HPoly::one());
        let mut row = Vec::new();
        for rep in &reps {
            let mat = represent(&u, &rep.generators(), &one)?;
            row.extend(mat.to_rows().into_iter().flatten());
        }
        rows.push(row);
    }
    Ok((monomials.len(), Matrix::from_rows(rows).rank()))
}

/// `trace p(H) = 0` and the characteristic polynomial of `p(H)²` is
/// `Π_j (T - (m - 2j)²)`.
pub fn weight_identities(m: usize) -> bool {
    let ph = p_map(m).h;
    if !ph.trace().is_zero() {
        return false;
    }
    let sq = &ph * &ph;
    let mut expected = CommPoly::one(1);
    for j in 0..=m {
        let w = m as i64 - 2 * j as i64;
        let factor = &CommPoly::var(1, 0) - &CommPoly::constant(1, HPoly::from_int(w * w));
        expected = &expected * &factor;
    }
    let cp = sq.char_poly();
    (0..=m + 1).all(|k| {
        let c = expected.coeff(&[k as u32]);
        c.as_constant().unwrap_or_else(GaussRat::zero) == cp[k]
    })
}

/// One line of the representation table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepRow {
    pub m: usize,
    pub dim: usize,
    pub casimir: Option<String>,
    pub rescaled: Option<String>,
    pub expected_rescaled: String,
    pub passed: bool,
}

/// Rows for `m = 0..=max_m` at the given `ħ`.
pub fn rep_table(max_m: usize, hbar: &GaussRat) -> Result<Vec<RepRow>> {
    (0..=max_m)
        .map(|m| {
            let casimir = casimir_scalar(m).ok();
            let rescaled = rescaled_casimir_check(m, hbar)?;
            let passed = casimir.as_ref() == Some(&expected_casimir(m))
                && rescaled.passed
                && d_centrality_check(m)
                && p_map(m).satisfies_relations(-1)
                && representation(m).satisfies_relations(1)
                && weight_identities(m);
            Ok(RepRow {
                m,
                dim: m + 1,
                casimir: casimir.map(|c| c.to_string()),
                rescaled: rescaled.scalar,
                expected_rescaled: rescaled.expected,
                passed,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> GaussRat {
        GaussRat::ratio(n, d)
    }

    #[test]
    fn euler_examples() {
        let e = euler_operators(1);
        assert_eq!(e.g_dg, Matrix::diagonal(&[1.into(), 0.into()]));
        assert_eq!(e.degree_operator(), Matrix::identity(2));
        let e0 = euler_operators(0);
        assert!(e0.all().iter().all(|m| m.is_zero()));
        for m in 0..6 {
            let e = euler_operators(m);
            assert_eq!(e.degree_operator(), Matrix::identity(m + 1).scale(&(m as i64).into()));
        }
    }

    #[test]
    fn euler_operators_differentiate() {
        // γ∂_ρ(γ ρ²) = 2 γ² ρ on P_3: basis index 2 -> index 1 with weight 2
        let e = euler_operators(3);
        assert_eq!(e.g_dr.get(1, 2), &GaussRat::from_int(2));
        // ρ∂_γ(γ³) = 3 γ² ρ
        assert_eq!(e.r_dg.get(1, 0), &GaussRat::from_int(3));
    }

    #[test]
    fn p_map_examples() {
        assert_eq!(p_map(1).h, Matrix::diagonal(&[(-1).into(), 1.into()]));
        for m in 0..6 {
            assert!(p_map(m).satisfies_relations(-1), "m = {m}");
            assert!(representation(m).satisfies_relations(1), "m = {m}");
        }
        assert!(p_map(0).generators().iter().all(|g| g.is_zero()));
        assert!(p_map(0).satisfies_relations(1));
        assert!(!p_map(2).satisfies_relations(1));
    }

    #[test]
    fn casimir_scalars() {
        assert_eq!(casimir_scalar(0).unwrap(), GaussRat::zero());
        assert_eq!(casimir_scalar(1).unwrap(), q(3, 4));
        assert_eq!(casimir_scalar(2).unwrap(), q(2, 1));
        for m in 0..=8 {
            assert_eq!(casimir_scalar(m).unwrap(), expected_casimir(m));
            assert_eq!(representation(m).casimir(), p_map(m).casimir());
        }
    }

    #[test]
    fn rescaled_examples() {
        let r = rescaled_casimir_check(2, &GaussRat::one()).unwrap();
        assert!(r.passed);
        assert_eq!(r.scalar.as_deref(), Some("2"));
        let r = rescaled_casimir_check(5, &GaussRat::zero()).unwrap();
        assert!(r.passed);
        assert_eq!(r.scalar.as_deref(), Some("0"));
        let r = rescaled_casimir_check(3, &q(1, 2)).unwrap();
        assert!(r.passed);
        assert_eq!(r.scalar.as_deref(), Some("15/16"));
    }

    #[test]
    fn orbit_cross_check_detects_wrong_constant() {
        let rep = representation(2);
        assert!(!orbit_cross_check(&GaussRat::one(), &rep, &q(1, 2)).unwrap());
        assert!(orbit_cross_check(&GaussRat::one(), &rep, &q(1, 1)).unwrap());
    }

    #[test]
    fn d_centrality() {
        for m in 0..=8 {
            assert!(d_centrality_check(m));
            let e = euler_operators(m);
            let d = e.degree_operator();
            let px = p_map(m).x;
            assert!((&(&d * &px) - &(&px * &d)).is_zero());
        }
        let mut bad = p_map(3);
        bad.y = bad.y.scale(&GaussRat::from_int(-1));
        assert!(!d_centrality_check_with(3, &bad));
    }

    #[test]
    fn faithful_in_low_degree() {
        let (count, rank) = faithfulness_rank(3, 8).unwrap();
        assert_eq!(count, 20);
        assert_eq!(rank, 20);
        // a single small representation cannot separate degree-3 elements
        let (count, rank) = faithfulness_rank(3, 1).unwrap();
        assert!(rank < count);
    }

    #[test]
    fn weights() {
        for m in 0..=8 {
            assert!(weight_identities(m), "m = {m}");
        }
    }

    #[test]
    fn table() {
        let rows = rep_table(4, &GaussRat::one()).unwrap();
        let scalars: Vec<&str> = rows.iter().map(|r| r.casimir.as_deref().unwrap()).collect();
        assert_eq!(scalars, ["0", "3/4", "2", "15/4", "6"]);
        assert!(rows.iter().all(|r| r.passed));
    }
}
