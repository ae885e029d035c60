//! Cubic forms stored through their full symmetric trilinear tensor.
//!
//! The stored value for an index triple is `T_ijk = u(e_i; e_j; e_k)`, the
//! third derivative of `u`, so that `u(x) = ⅙ Σ T_ijk xᵢxⱼx_k` over all
//! ordered triples. The monomial coefficient of `xᵢxⱼx_k` (sorted indices)
//! is `T_ijk · m / 6` where `m ∈ {1, 3, 6}` is the number of distinct
//! orderings of the triple.

mod expand;

pub use expand::{ScalarExpr, VectorExpr, MAX_DEGREE};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::poly::{Monomial, PolynomialMap};
use crate::quadspace::{Isometry, QuadraticSpace};
use crate::scalar::FieldElem;

#[derive(Clone, PartialEq, Eq)]
pub struct CubicForm {
    dim: usize,
    /// Nonzero entries keyed by sorted index triples.
    tri: BTreeMap<[usize; 3], FieldElem>,
}

fn sorted([i, j, k]: [usize; 3]) -> [usize; 3] {
    let mut s = [i, j, k];
    s.sort_unstable();
    s
}

/// Distinct orderings of a sorted triple.
pub(crate) fn orderings([i, j, k]: [usize; 3]) -> impl Iterator<Item = [usize; 3]> {
    let all: &[[usize; 3]] = if i == j && j == k {
        &[[0, 1, 2]]
    } else if i == j {
        &[[0, 1, 2], [0, 2, 1], [2, 0, 1]]
    } else if j == k {
        &[[0, 1, 2], [1, 0, 2], [1, 2, 0]]
    } else {
        &[
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ]
    };
    let idx = [i, j, k];
    all.iter().map(move |p| [idx[p[0]], idx[p[1]], idx[p[2]]])
}

fn multiplicity(idx: [usize; 3]) -> i64 {
    orderings(idx).count() as i64
}

impl CubicForm {
    pub fn zero(dim: usize) -> Self {
        CubicForm {
            dim,
            tri: BTreeMap::new(),
        }
    }

    /// Builds a form from trilinear values `u(e_i; e_j; e_k)` (0-based).
    /// Index order inside a triple is irrelevant; repeated triples must agree.
    pub fn from_trilinear(
        dim: usize,
        entries: impl IntoIterator<Item = ([usize; 3], FieldElem)>,
    ) -> Result<Self> {
        let mut tri = BTreeMap::new();
        for (idx, val) in entries {
            if let Some(&index) = idx.iter().find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index, dim });
            }
            let key = sorted(idx);
            match tri.get(&key) {
                Some(prev) if prev != &val => return Err(Error::ConflictingEntry(key)),
                _ => {
                    tri.insert(key, val);
                }
            }
        }
        tri.retain(|_, v: &mut FieldElem| !v.is_zero());
        Ok(CubicForm { dim, tri })
    }

    /// Converts a homogeneous cubic polynomial.
    pub fn from_polynomial(p: &PolynomialMap) -> Result<Self> {
        if !p.is_homogeneous(3) {
            return Err(Error::NotCubic);
        }
        let mut tri = BTreeMap::new();
        for (m, c) in p.terms() {
            let mut idx = Vec::with_capacity(3);
            for (i, &e) in m.exponents().iter().enumerate() {
                idx.extend(std::iter::repeat_n(i, e as usize));
            }
            let key = [idx[0], idx[1], idx[2]];
            let t = c * &FieldElem::ratio(6, multiplicity(key));
            tri.insert(key, t);
        }
        Ok(CubicForm {
            dim: p.n_vars(),
            tri,
        })
    }

    pub fn to_polynomial(&self) -> PolynomialMap {
        let n = self.dim;
        PolynomialMap::from_terms(
            n,
            self.tri.iter().map(|(&idx, t)| {
                let mut exps = vec![0u8; n];
                for i in idx {
                    exps[i] += 1;
                }
                (
                    Monomial::from_exponents(&exps),
                    t * &FieldElem::ratio(multiplicity(idx), 6),
                )
            }),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `u(e_i; e_j; e_k)` for any index order.
    pub fn get(&self, i: usize, j: usize, k: usize) -> FieldElem {
        self.tri.get(&sorted([i, j, k])).cloned().unwrap_or_default()
    }

    /// Nonzero entries with sorted indices, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize; 3], &FieldElem)> {
        self.tri.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.tri.is_empty()
    }

    pub fn scale(&self, k: &FieldElem) -> CubicForm {
        CubicForm {
            dim: self.dim,
            tri: self
                .tri
                .iter()
                .map(|(i, v)| (*i, v * k))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    fn check(&self, v: &Vector) -> Result<()> {
        v.check_dim(self.dim)
    }

    /// The full linearization `u(x; y; z)`.
    pub fn trilinear(&self, x: &Vector, y: &Vector, z: &Vector) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        self.check(z)?;
        Ok(self.trilinear_unchecked(x, y, z))
    }

    pub(crate) fn trilinear_unchecked(&self, x: &Vector, y: &Vector, z: &Vector) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (&idx, t) in &self.tri {
            for [a, b, c] in orderings(idx) {
                if x[a].is_zero() || y[b].is_zero() || z[c].is_zero() {
                    continue;
                }
                acc.add_mul(t, &(&x[a] * &y[b] * &z[c]));
            }
        }
        acc
    }

    /// `u(x) = ⅙ u(x; x; x)`.
    pub fn eval(&self, x: &Vector) -> Result<FieldElem> {
        self.check(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Vector) -> FieldElem {
        let mut acc = FieldElem::zero();
        for (&[i, j, k], t) in &self.tri {
            if x[i].is_zero() || x[j].is_zero() || x[k].is_zero() {
                continue;
            }
            let w = FieldElem::ratio(multiplicity([i, j, k]), 6);
            acc.add_mul(&(t * &w), &(&x[i] * &x[j] * &x[k]));
        }
        acc
    }

    /// Directional derivative `u(x; y) = ∂_y u|_x = ½ u(x; x; y)`.
    pub fn dir_deriv(&self, x: &Vector, y: &Vector) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.trilinear_unchecked(x, x, y) * FieldElem::ratio(1, 2))
    }

    /// The covector `m ↦ u(x; y; e_m) = Σ T_ijm xᵢyⱼ`.
    pub(crate) fn contract2(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim);
        for (&idx, t) in &self.tri {
            for [a, b, c] in orderings(idx) {
                if x[a].is_zero() || y[b].is_zero() {
                    continue;
                }
                out[c].add_mul(t, &(&x[a] * &y[b]));
            }
        }
        out
    }

    /// The Hessian matrix `H_jk = Σ T_ijk xᵢ`.
    pub fn hessian(&self, x: &Vector) -> Result<Matrix> {
        self.check(x)?;
        Ok(self.hessian_unchecked(x))
    }

    pub(crate) fn hessian_unchecked(&self, x: &Vector) -> Matrix {
        let mut h = Matrix::zeros(self.dim, self.dim);
        for (&idx, t) in &self.tri {
            for [a, b, c] in orderings(idx) {
                if !x[a].is_zero() {
                    h[(b, c)].add_mul(t, &x[a]);
                }
            }
        }
        h
    }

    fn check_space(&self, space: &QuadraticSpace) -> Result<()> {
        if space.dim() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found: space.dim(),
            })
        }
    }

    /// Covariant gradient: `Q(∇u(x); y) = u(x; y)` for all `y`.
    pub fn grad(&self, space: &QuadraticSpace, x: &Vector) -> Result<Vector> {
        self.h_bilinear(space, x, x)
    }

    /// `h(x; y) = ½(∇u(x+y) − ∇u(x) − ∇u(y))`, the polarized gradient.
    pub fn h_bilinear(&self, space: &QuadraticSpace, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_space(space)?;
        self.check(x)?;
        self.check(y)?;
        Ok(self.h_unchecked(space, x, y))
    }

    pub(crate) fn h_unchecked(&self, space: &QuadraticSpace, x: &Vector, y: &Vector) -> Vector {
        let w = self.contract2(x, y).scale(&FieldElem::ratio(1, 2));
        space.gram_inv().apply(&w)
    }

    /// Covariant Laplacian `tr(Q⁻¹ · Hess u)`, a linear form in `x`.
    pub fn laplacian(&self, space: &QuadraticSpace) -> Result<PolynomialMap> {
        self.check_space(space)?;
        let inv = space.gram_inv();
        let mut coeffs = Vector::zeros(self.dim);
        for (&idx, t) in &self.tri {
            for [a, b, c] in orderings(idx) {
                let q = &inv[(a, b)];
                if !q.is_zero() {
                    coeffs[c].add_mul(q, t);
                }
            }
        }
        Ok(PolynomialMap::linear(&coeffs))
    }

    /// The form `y ↦ u(M y)` where `M` is `dim × m`.
    pub fn pullback(&self, m: &Matrix) -> Result<CubicForm> {
        if m.rows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.rows(),
            });
        }
        let n = self.dim;
        let k = m.cols();
        // sparse columns of M per row
        let row_nz: Vec<Vec<(usize, &FieldElem)>> = (0..n)
            .map(|i| {
                (0..k)
                    .filter(|&c| !m[(i, c)].is_zero())
                    .map(|c| (c, &m[(i, c)]))
                    .collect()
            })
            .collect();
        // stage 1: A[i][j][c] = Σ_l T_ijl M_lc
        let mut a = vec![FieldElem::zero(); n * n * k];
        for (&idx, t) in &self.tri {
            for [i, j, l] in orderings(idx) {
                for &(c, mv) in &row_nz[l] {
                    a[(i * n + j) * k + c].add_mul(t, mv);
                }
            }
        }
        // stage 2: B[i][b][c] = Σ_j A[i][j][c] M_jb
        let mut b = vec![FieldElem::zero(); n * k * k];
        for i in 0..n {
            for j in 0..n {
                for c in 0..k {
                    let av = &a[(i * n + j) * k + c];
                    if av.is_zero() {
                        continue;
                    }
                    for &(bb, mv) in &row_nz[j] {
                        b[(i * k + bb) * k + c].add_mul(av, mv);
                    }
                }
            }
        }
        drop(a);
        // stage 3: C[a][b][c] = Σ_i B[i][b][c] M_ia, sorted triples only
        let mut tri = BTreeMap::new();
        for i in 0..n {
            for &(aa, mv) in &row_nz[i] {
                for bb in aa..k {
                    for c in bb..k {
                        let bv = &b[(i * k + bb) * k + c];
                        if bv.is_zero() {
                            continue;
                        }
                        tri.entry([aa, bb, c])
                            .or_insert_with(FieldElem::zero)
                            .add_mul(bv, mv);
                    }
                }
            }
        }
        tri.retain(|_, v: &mut FieldElem| !v.is_zero());
        Ok(CubicForm { dim: k, tri })
    }

    /// `ũ` with `ũ(O x) = u(x)`, for a verified isometry `O`.
    pub fn pushforward(&self, iso: &Isometry) -> Result<CubicForm> {
        if iso.source().dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: iso.source().dim(),
            });
        }
        iso.require_verified()?;
        self.pullback(&iso.matrix().inverse()?)
    }
}

impl std::fmt::Debug for CubicForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CubicForm(dim={}, {:?})", self.dim, self.to_polynomial())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryWire {
    idx: [usize; 3],
    val: FieldElem,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubicFormWire {
    dim: usize,
    tri: Vec<EntryWire>,
}

impl Serialize for CubicForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CubicFormWire {
            dim: self.dim,
            tri: self
                .tri
                .iter()
                .map(|(&[i, j, k], v)| EntryWire {
                    idx: [i + 1, j + 1, k + 1],
                    val: v.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubicForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = CubicFormWire::deserialize(d)?;
        let mut entries = Vec::with_capacity(w.tri.len());
        for e in w.tri {
            let [i, j, k] = e.idx;
            if i == 0 || j == 0 || k == 0 {
                return Err(D::Error::custom("cubic form indices are 1-based"));
            }
            if !(i <= j && j <= k) {
                return Err(D::Error::custom(format!(
                    "cubic form index {:?} must satisfy i ≤ j ≤ k",
                    e.idx
                )));
            }
            entries.push(([i - 1, j - 1, k - 1], e.val));
        }
        CubicForm::from_trilinear(w.dim, entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coordinates;

    fn fi(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    /// u = x₂³ − 3x₂x₁²
    fn diagonal() -> CubicForm {
        let x = coordinates(2);
        let p = x[1]
            .mul(&x[1])
            .mul(&x[1])
            .sub(&x[1].mul(&x[0]).mul(&x[0]).scale(&fi(3)));
        CubicForm::from_polynomial(&p).unwrap()
    }

    #[test]
    fn storage_convention() {
        let u = diagonal();
        // x₂³ has coefficient 1 = T₂₂₂/6
        assert_eq!(u.get(1, 1, 1), fi(6));
        // x₁²x₂ has coefficient −3 = T₁₁₂·3/6
        assert_eq!(u.get(0, 1, 0), fi(-6));
        assert_eq!(u.get(0, 0, 0), fi(0));
        assert_eq!(CubicForm::from_polynomial(&u.to_polynomial()).unwrap(), u);
        assert_eq!(
            CubicForm::from_trilinear(2, [([1, 1, 1], fi(6)), ([1, 0, 0], fi(-6))]).unwrap(),
            u
        );
    }

    #[test]
    fn eval_examples() {
        let u = diagonal();
        assert_eq!(u.eval(&Vector::from_ints(&[1, 1])).unwrap(), fi(-2));
        assert_eq!(u.eval(&Vector::zeros(2)).unwrap(), fi(0));
        assert!(u.eval(&Vector::zeros(3)).is_err());
    }

    #[test]
    fn dir_deriv_examples() {
        let u = diagonal();
        let x = Vector::from_ints(&[0, 1]);
        assert_eq!(u.dir_deriv(&x, &x).unwrap(), fi(3));
        assert_eq!(u.dir_deriv(&x, &Vector::zeros(2)).unwrap(), fi(0));
        let x = Vector::from_ints(&[2, -3]);
        assert_eq!(u.dir_deriv(&x, &x).unwrap(), u.eval(&x).unwrap() * fi(3));
    }

    #[test]
    fn grad_and_h_examples() {
        let u = diagonal();
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let x = Vector::from_ints(&[0, 1]);
        assert_eq!(u.grad(&e2, &x).unwrap(), Vector::from_ints(&[0, 3]));
        assert_eq!(u.grad(&e2, &Vector::zeros(2)).unwrap(), Vector::zeros(2));
        // ∇u = (−6x₁x₂, 3x₂² − 3x₁²) at (1,0)
        assert_eq!(
            u.grad(&e2, &Vector::from_ints(&[1, 0])).unwrap(),
            Vector::from_ints(&[0, -3])
        );
        let t = FieldElem::ratio(5, 7);
        let y = Vector::new(vec![fi(0), t.clone()]);
        assert_eq!(
            u.h_bilinear(&e2, &x, &y).unwrap(),
            Vector::new(vec![fi(0), t * fi(3)])
        );
        assert_eq!(u.h_bilinear(&e2, &x, &Vector::zeros(2)).unwrap(), Vector::zeros(2));
    }

    #[test]
    fn laplacian_examples() {
        let cube = CubicForm::from_trilinear(1, [([0, 0, 0], fi(6))]).unwrap();
        let line = QuadraticSpace::euclidean(1).unwrap();
        assert_eq!(
            cube.laplacian(&line).unwrap(),
            PolynomialMap::var(1, 0).scale(&fi(6))
        );
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        assert!(diagonal().laplacian(&e2).unwrap().is_zero());
    }

    #[test]
    fn pushforward_by_coordinate_swap() {
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let swap = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
        let iso = Isometry::new(e2.clone(), e2.clone(), swap).unwrap();
        let pushed = diagonal().pushforward(&iso).unwrap();
        // x₁³ − 3x₁x₂²
        let expected =
            CubicForm::from_trilinear(2, [([0, 0, 0], fi(6)), ([0, 1, 1], fi(-6))]).unwrap();
        assert_eq!(pushed, expected);
        let back = pushed.pushforward(&iso.inverse().unwrap()).unwrap();
        assert_eq!(back, diagonal());
        assert_eq!(diagonal().pushforward(&Isometry::identity(&e2)).unwrap(), diagonal());
    }

    #[test]
    fn pushforward_rejects_non_isometry() {
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let iso = Isometry::new(e2.clone(), e2, Matrix::identity(2).scale(&fi(2))).unwrap();
        assert!(matches!(
            diagonal().pushforward(&iso),
            Err(Error::UnverifiedIsometry(_))
        ));
    }

    #[test]
    fn json_uses_one_based_sorted_indices() {
        let u = diagonal();
        let json = serde_json::to_value(&u).unwrap();
        assert_eq!(json["dim"], 2);
        assert_eq!(json["tri"][0]["idx"], serde_json::json!([1, 1, 2]));
        assert_eq!(json["tri"][1]["idx"], serde_json::json!([2, 2, 2]));
        let back: CubicForm = serde_json::from_value(json).unwrap();
        assert_eq!(back, u);
        let bad = serde_json::json!({"dim": 2, "tri": [{"idx": [2, 1, 1], "val": {"q":"1/1","r2":"0/1","r3":"0/1","r6":"0/1"}}]});
        assert!(serde_json::from_value::<CubicForm>(bad).is_err());
    }
}
