//! Lie algebras given by structure constants.

use crate::commpoly::{self, CommPoly};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{GaussRat, HPoly};

/// Sparse bracket `[X_i, X_j] = Σ_k c_ij^k X_k` as `(k, c_ij^k)` pairs.
pub type Bracket = Vec<(usize, GaussRat)>;

/// A finite-dimensional Lie algebra over the Gaussian rationals.
///
/// The full antisymmetric table is stored. `rank` is declared by the user and
/// checked against the number of invariant polynomials when those are given.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    table: Vec<Vec<Bracket>>,
    rank: usize,
    invariants: Vec<CommPoly>,
    killing_scale: GaussRat,
    casimir_scale: GaussRat,
}

fn push_coeff(b: &mut Bracket, k: usize, c: GaussRat) {
    if c.is_zero() {
        return;
    }
    match b.iter_mut().find(|(kk, _)| *kk == k) {
        Some(entry) => entry.1 += &c,
        None => b.push((k, c)),
    }
    b.retain(|(_, c)| !c.is_zero());
    b.sort_by_key(|(k, _)| *k);
}

impl LieAlgebra {
    /// Builds the algebra from brackets `(i, j, [(k, c)])` with `i != j`.
    /// The opposite bracket is filled in by antisymmetry; if both orders are
    /// supplied they must agree.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        brackets: &[(usize, usize, Bracket)],
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        for (a, l) in labels.iter().enumerate() {
            if labels[..a].contains(l) {
                return Err(Error::InvalidAlgebra(format!("duplicate label {l}")));
            }
            if l == "h" || l == "i" || l.is_empty() {
                return Err(Error::InvalidAlgebra(format!("reserved label `{l}`")));
            }
        }
        let mut table = vec![vec![Bracket::new(); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (i, j, coeffs) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n || coeffs.iter().any(|(k, _)| *k >= n) {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket index out of range in [{i},{j}]"
                )));
            }
            if i == j {
                if coeffs.iter().any(|(_, c)| !c.is_zero()) {
                    return Err(Error::InvalidAlgebra(format!(
                        "[X_{i}, X_{i}] must vanish"
                    )));
                }
                continue;
            }
            let mut b = Bracket::new();
            for (k, c) in coeffs {
                push_coeff(&mut b, *k, c.clone());
            }
            let neg: Bracket = b.iter().map(|(k, c)| (*k, -c)).collect();
            if seen[j][i] && table[j][i] != neg {
                return Err(Error::InvalidAlgebra(format!(
                    "brackets [{i},{j}] and [{j},{i}] are not antisymmetric"
                )));
            }
            seen[i][j] = true;
            seen[j][i] = true;
            table[i][j] = b;
            table[j][i] = neg;
        }
        Ok(LieAlgebra {
            name: name.into(),
            labels,
            table,
            rank: 1,
            invariants: Vec::new(),
            killing_scale: GaussRat::one(),
            casimir_scale: GaussRat::one(),
        })
    }

    pub fn with_rank(mut self, rank: usize) -> Result<Self> {
        if rank == 0 || rank > self.dim() {
            return Err(Error::InvalidAlgebra(format!("rank {rank} out of range")));
        }
        if !self.invariants.is_empty() && self.invariants.len() != rank {
            return Err(Error::InvalidAlgebra(format!(
                "{} invariants declared for rank {rank}",
                self.invariants.len()
            )));
        }
        self.rank = rank;
        Ok(self)
    }

    /// Declares the Chevalley generators of the invariant ring.
    pub fn with_invariants(mut self, invariants: Vec<CommPoly>) -> Result<Self> {
        if invariants.len() != self.rank {
            return Err(Error::InvalidAlgebra(format!(
                "{} invariants declared for rank {}",
                invariants.len(),
                self.rank
            )));
        }
        for p in &invariants {
            if p.nvars() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: p.nvars(),
                });
            }
        }
        self.invariants = invariants;
        Ok(self)
    }

    pub fn with_killing_scale(mut self, scale: GaussRat) -> Self {
        self.killing_scale = scale;
        self
    }

    pub fn with_casimir_scale(mut self, scale: GaussRat) -> Self {
        self.casimir_scale = scale;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Coordinate names `x_<label>` used for commutative polynomials.
    pub fn coordinate_names(&self) -> Vec<String> {
        self.labels.iter().map(|l| format!("x_{l}")).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariants(&self) -> &[CommPoly] {
        &self.invariants
    }

    pub fn killing_scale(&self) -> &GaussRat {
        &self.killing_scale
    }

    pub fn casimir_scale(&self) -> &GaussRat {
        &self.casimir_scale
    }

    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, GaussRat)] {
        &self.table[i][j]
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket_vec(&self, u: &[GaussRat], v: &[GaussRat]) -> Vec<GaussRat> {
        let n = self.dim();
        let mut out = vec![GaussRat::zero(); n];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<GaussRat> {
        let mut v = vec![GaussRat::zero(); self.dim()];
        v[i] = GaussRat::one();
        v
    }

    /// Index triples `i < j < k` where the Jacobi identity fails.
    pub fn jacobi_check(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (xi, xj, xk) = (self.unit(i), self.unit(j), self.unit(k));
                    let t1 = self.bracket_vec(&self.bracket_vec(&xi, &xj), &xk);
                    let t2 = self.bracket_vec(&self.bracket_vec(&xj, &xk), &xi);
                    let t3 = self.bracket_vec(&self.bracket_vec(&xk, &xi), &xj);
                    if t1.iter().zip(&t2).zip(&t3).any(|((a, b), c)| !(&(a + b) + c).is_zero()) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// True when every structure constant is real.
    pub fn is_real(&self) -> bool {
        self.table
            .iter()
            .flatten()
            .flatten()
            .all(|(_, c)| c.is_real())
    }

    /// Matrix of `ad(v)`; column `j` holds the coordinates of `[v, X_j]`.
    pub fn adjoint_matrix(&self, v: &[GaussRat]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket_vec(v, &self.unit(j));
            for (k, c) in col.into_iter().enumerate() {
                m.set(k, j, c);
            }
        }
        m
    }

    /// `Tr(ad X_i ad X_j)` without normalization.
    pub fn trace_form(&self) -> Matrix {
        let n = self.dim();
        let ads: Vec<Matrix> = (0..n).map(|i| self.adjoint_matrix(&self.unit(i))).collect();
        let mut k = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let t = (&ads[i] * &ads[j]).trace();
                k.set(i, j, t.clone());
                k.set(j, i, t);
            }
        }
        k
    }

    /// The Killing form scaled by `killing_scale`. Fails on degenerate forms.
    pub fn killing_form(&self) -> Result<Matrix> {
        let k = self.trace_form().scale(&self.killing_scale);
        if k.det().is_zero() {
            return Err(Error::SingularForm);
        }
        Ok(k)
    }

    /// `casimir_scale * Σ g^ij x_i x_j` with `g` the inverse Killing matrix.
    pub fn quadratic_casimir(&self) -> Result<CommPoly> {
        self.quadratic_casimir_scaled(&self.casimir_scale)
    }

    pub fn quadratic_casimir_scaled(&self, scale: &GaussRat) -> Result<CommPoly> {
        let n = self.dim();
        let g = self.killing_form()?.inverse().map_err(|_| Error::SingularForm)?;
        let mut p = CommPoly::zero(n);
        for i in 0..n {
            for j in 0..n {
                let c = g.get(i, j);
                if c.is_zero() {
                    continue;
                }
                let mut e = vec![0; n];
                e[i] += 1;
                e[j] += 1;
                p.add_term(e, &HPoly::from(c * scale));
            }
        }
        Ok(p)
    }

    /// Invariants used for regularity and orbit construction: the declared
    /// ones, or the quadratic Casimir for rank one.
    pub fn effective_invariants(&self) -> Result<Vec<CommPoly>> {
        if !self.invariants.is_empty() {
            return Ok(self.invariants.clone());
        }
        if self.rank == 1 {
            return Ok(vec![self.quadratic_casimir()?]);
        }
        Err(Error::InvalidAlgebra(format!(
            "rank {} requires declared invariants",
            self.rank
        )))
    }

    /// Coefficients `q_0..q_n` of `det(T - ad*(ξ))` for `ξ` in the dual,
    /// identified with the algebra through the Killing form.
    pub fn coadjoint_char_poly(&self, point: &[GaussRat]) -> Result<Vec<GaussRat>> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: point.len(),
            });
        }
        let kinv = self.killing_form()?.inverse()?;
        let v = kinv.apply(point);
        Ok(self.adjoint_matrix(&v).char_poly())
    }

    /// Regularity of `point ∈ 𝒢*`: the coefficient of `T^rank` in the
    /// characteristic polynomial of the coadjoint action is nonzero.
    ///
    /// When invariants are available the Jacobian of `(p_1..p_m)` at the point
    /// must then have full rank; a regular point with a rank-deficient
    /// Jacobian is reported as [`Error::InconsistentRegularity`]. The converse
    /// is not required: regular nilpotent points have full Jacobian rank but
    /// vanishing `q_m`.
    pub fn is_regular(&self, point: &[GaussRat]) -> Result<bool> {
        let q = self.coadjoint_char_poly(point)?;
        let regular = !q[self.rank].is_zero();
        if regular {
            let invs = self.effective_invariants()?;
            let rank = commpoly::jacobian_rank(&invs, point)?;
            if rank < self.rank {
                return Err(Error::InconsistentRegularity {
                    point: format!("{point:?}"),
                    rank,
                    expected: self.rank,
                });
            }
        }
        Ok(regular)
    }

    /// Re-expresses the algebra in the basis `Y_a = Σ_i B_ai X_i`.
    /// Invariants are rewritten in the new coordinates.
    pub fn change_basis(&self, b: &BasisChange, labels: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim();
        if b.dim() != n || labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.dim().min(labels.len()),
            });
        }
        let binv = b.inverse_matrix();
        let rows: Vec<Vec<GaussRat>> = b.matrix().to_rows();
        let mut brackets = Vec::new();
        for a in 0..n {
            for c in a + 1..n {
                let old = self.bracket_vec(&rows[a], &rows[c]);
                // coordinates in the new basis: w = old * B^{-1}
                let mut coeffs = Bracket::new();
                for d in 0..n {
                    let mut acc = GaussRat::zero();
                    for (k, o) in old.iter().enumerate() {
                        if !o.is_zero() {
                            acc += &(o * binv.get(k, d));
                        }
                    }
                    if !acc.is_zero() {
                        coeffs.push((d, acc));
                    }
                }
                brackets.push((a, c, coeffs));
            }
        }
        let invariants: Vec<CommPoly> = self
            .invariants
            .iter()
            .map(|p| p.linear_substitute(binv))
            .collect();
        let mut out = LieAlgebra::new(self.name.clone(), labels, &brackets)?
            .with_killing_scale(self.killing_scale.clone())
            .with_casimir_scale(self.casimir_scale.clone());
        out.rank = self.rank;
        out.invariants = invariants;
        Ok(out)
    }

    /// True when `x -> Σ_j B_ij X_j` on generators preserves brackets.
    pub fn is_automorphism(&self, b: &BasisChange) -> bool {
        let n = self.dim();
        if b.dim() != n {
            return false;
        }
        let image = |v: &[GaussRat]| -> Vec<GaussRat> {
            let mut out = vec![GaussRat::zero(); n];
            for (i, a) in v.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, o) in out.iter_mut().enumerate() {
                    *o += &(a * b.matrix().get(i, j));
                }
            }
            out
        };
        for i in 0..n {
            for j in i + 1..n {
                let lhs = image(&self.bracket_vec(&self.unit(i), &self.unit(j)));
                let rhs = self.bracket_vec(b.matrix().row(i), b.matrix().row(j));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Invertible change of generators; row `a` expresses the new generator `a`
/// in the old basis.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    matrix: Matrix,
    inverse: Matrix,
}

impl BasisChange {
    pub fn new(matrix: Matrix) -> Result<Self> {
        let inverse = matrix.inverse()?;
        Ok(BasisChange { matrix, inverse })
    }

    pub fn identity(n: usize) -> Self {
        BasisChange {
            matrix: Matrix::identity(n),
            inverse: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.inverse
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange {
            matrix: self.inverse.clone(),
            inverse: self.matrix.clone(),
        }
    }

    pub fn compose(&self, then: &BasisChange) -> BasisChange {
        BasisChange {
            matrix: &then.matrix * &self.matrix,
            inverse: &self.inverse * &then.inverse,
        }
    }

    /// Components of a dual vector in the new basis: `ξ'_a = ξ(Y_a)`.
    pub fn transform_point(&self, point: &[GaussRat]) -> Vec<GaussRat> {
        self.matrix.apply(point)
    }

    pub fn is_involution(&self) -> bool {
        &self.matrix * &self.matrix == Matrix::identity(self.dim())
    }
}

/// The three rank-one presets used throughout: `sl2 {H,X,Y}`, `su2 {E,F,G}`
/// and `so21 {G,Et,Ft}`, each with its degree-two invariant.
pub mod presets {
    use super::*;

    fn q(n: i64, d: i64) -> GaussRat {
        GaussRat::ratio(n, d)
    }

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    fn quadratic(terms: &[([u32; 3], GaussRat)]) -> CommPoly {
        CommPoly::from_terms(
            3,
            terms.iter().map(|(e, c)| (e.to_vec(), HPoly::from(c.clone()))),
        )
    }

    /// `[H,X] = 2X, [H,Y] = -2Y, [X,Y] = H`, invariant `x_H²/4 + x_X x_Y`.
    pub fn sl2() -> LieAlgebra {
        LieAlgebra::new(
            "sl2",
            labels(&["H", "X", "Y"]),
            &[
                (0, 1, vec![(1, 2.into())]),
                (0, 2, vec![(2, (-2).into())]),
                (1, 2, vec![(0, 1.into())]),
            ],
        )
        .and_then(|l| l.with_rank(1))
        .and_then(|l| {
            l.with_invariants(vec![quadratic(&[
                ([2, 0, 0], q(1, 4)),
                ([0, 1, 1], q(1, 1)),
            ])])
        })
        .map(|l| l.with_casimir_scale(2.into()))
        .expect("sl2 preset is valid")
    }

    /// Rows of `E = (X-Y)/2, F = (i/2)(X+Y), G = (i/2)H` over `(H, X, Y)`.
    pub fn sl2_to_su2() -> BasisChange {
        let half = q(1, 2);
        let ihalf = GaussRat::i() * q(1, 2);
        BasisChange::new(Matrix::from_rows(vec![
            vec![0.into(), half.clone(), -half],
            vec![0.into(), ihalf.clone(), ihalf.clone()],
            vec![ihalf, 0.into(), 0.into()],
        ]))
        .expect("invertible")
    }

    /// `[E,F] = G, [F,G] = E, [G,E] = F`, invariant `-(x_E²+x_F²+x_G²)`.
    /// The Killing form carries the `-1/2` normalization, making it the
    /// identity matrix.
    pub fn su2() -> LieAlgebra {
        LieAlgebra::new(
            "su2",
            labels(&["E", "F", "G"]),
            &[
                (0, 1, vec![(2, 1.into())]),
                (1, 2, vec![(0, 1.into())]),
                (2, 0, vec![(1, 1.into())]),
            ],
        )
        .and_then(|l| l.with_rank(1))
        .and_then(|l| {
            l.with_invariants(vec![quadratic(&[
                ([2, 0, 0], q(-1, 1)),
                ([0, 2, 0], q(-1, 1)),
                ([0, 0, 2], q(-1, 1)),
            ])])
        })
        .map(|l| l.with_killing_scale(q(-1, 2)).with_casimir_scale(q(-1, 1)))
        .expect("su2 preset is valid")
    }

    /// Rows of `G, Et = iE, Ft = iF` over `(E, F, G)`.
    pub fn su2_to_so21() -> BasisChange {
        let i = GaussRat::i();
        BasisChange::new(Matrix::from_rows(vec![
            vec![0.into(), 0.into(), 1.into()],
            vec![i.clone(), 0.into(), 0.into()],
            vec![0.into(), i, 0.into()],
        ]))
        .expect("invertible")
    }

    /// `[G,Et] = Ft, [G,Ft] = -Et, [Et,Ft] = -G`, invariant
    /// `x_G² - x_Et² - x_Ft²`.
    pub fn so21() -> LieAlgebra {
        LieAlgebra::new(
            "so21",
            labels(&["G", "Et", "Ft"]),
            &[
                (0, 1, vec![(2, 1.into())]),
                (0, 2, vec![(1, (-1).into())]),
                (1, 2, vec![(0, (-1).into())]),
            ],
        )
        .and_then(|l| l.with_rank(1))
        .and_then(|l| {
            l.with_invariants(vec![quadratic(&[
                ([2, 0, 0], q(1, 1)),
                ([0, 2, 0], q(-1, 1)),
                ([0, 0, 2], q(-1, 1)),
            ])])
        })
        .map(|l| l.with_killing_scale(q(-1, 2)))
        .expect("so21 preset is valid")
    }

    /// The involution `G -> -G, Et -> -Et, Ft -> Ft` on `(G, Et, Ft)`.
    pub fn so21_reflection() -> BasisChange {
        BasisChange::new(Matrix::diagonal(&[(-1).into(), (-1).into(), 1.into()]))
            .expect("invertible")
    }

    /// A regular semisimple point of each preset, in dual coordinates.
    pub fn witness_point(name: &str) -> Option<Vec<GaussRat>> {
        let v: [i64; 3] = match name {
            "sl2" => [1, 0, 0],
            "su2" => [0, 0, 1],
            "so21" => [1, 0, 0],
            _ => return None,
        };
        Some(v.iter().map(|&x| x.into()).collect())
    }

    pub fn by_name(name: &str) -> Option<LieAlgebra> {
        match name {
            "sl2" => Some(sl2()),
            "su2" => Some(su2()),
            "so21" => Some(so21()),
            _ => None,
        }
    }

    pub const NAMES: [&str; 3] = ["sl2", "su2", "so21"];
}
