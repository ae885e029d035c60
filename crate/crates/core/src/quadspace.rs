//! Nondegenerate quadratic spaces `(W, Q)` and isometries between them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::FieldElem;

/// A nondegenerate quadratic space given by a symmetric invertible Gram
/// matrix `Q_ij = Q(e_i; e_j)`. The inverse `Q^ij` is cached.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: Matrix,
    gram_inv: Matrix,
}

impl QuadraticSpace {
    pub fn new(gram: Matrix) -> Result<Self> {
        if gram.rows() == 0 {
            return Err(Error::EmptySpace);
        }
        if !gram.is_square() {
            return Err(Error::DimensionMismatch {
                expected: gram.rows(),
                found: gram.cols(),
            });
        }
        if let Some((row, col)) = gram.first_asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        let gram_inv = gram.inverse().map_err(|_| Error::SingularGram)?;
        Ok(QuadraticSpace { gram, gram_inv })
    }

    /// `Q(x) = |x|²` on `n` coordinates.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(Matrix::identity(n))
    }

    pub fn diagonal(entries: &[FieldElem]) -> Result<Self> {
        Self::new(Matrix::diagonal(entries))
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn gram_inv(&self) -> &Matrix {
        &self.gram_inv
    }

    pub fn q_eval(&self, x: &Vector) -> Result<FieldElem> {
        x.check_dim(self.dim())?;
        Ok(self.gram.bilinear(x, x))
    }

    /// The polarization `Q(x;y) = ½(Q(x+y) − Q(x) − Q(y)) = xᵀ Q y`.
    pub fn q_polar(&self, x: &Vector, y: &Vector) -> Result<FieldElem> {
        x.check_dim(self.dim())?;
        y.check_dim(self.dim())?;
        Ok(self.gram.bilinear(x, y))
    }

    /// Index raising: the unique `v` with `Q(v; y) = wᵀy` for all `y`.
    pub fn raise(&self, w: &Vector) -> Result<Vector> {
        self.gram_inv.mul_vec(w)
    }

    /// Index lowering, `v ↦ Q·v`.
    pub fn lower(&self, v: &Vector) -> Result<Vector> {
        self.gram.mul_vec(v)
    }

    /// A basis of the Q-orthogonal complement of a non-isotropic `v`.
    ///
    /// Completes `v` to a basis with the standard vectors other than the
    /// first coordinate where `v` is nonzero, then projects each of them
    /// once against `v`. Output order follows the coordinate order.
    pub fn orth_complement(&self, v: &Vector) -> Result<Vec<Vector>> {
        let qv = self.q_eval(v)?;
        if qv.is_zero() {
            return Err(Error::IsotropicVector);
        }
        let pivot = v
            .iter()
            .position(|c| !c.is_zero())
            .expect("non-isotropic vector is nonzero");
        let qv_inv = qv.inv()?;
        let lowered = self.gram.apply(v);
        let mut basis = Vec::with_capacity(self.dim() - 1);
        for i in (0..self.dim()).filter(|&i| i != pivot) {
            let mut w = Vector::basis(self.dim(), i);
            // Q(e_i; v) is the i-th coordinate of Q·v
            let coef = &lowered[i] * &qv_inv;
            w.axpy(&-coef, v);
            basis.push(w);
        }
        Ok(basis)
    }

    /// The space spanned by `basis` with the restricted form, in the
    /// coordinates of that basis.
    pub fn restrict(&self, basis: &[Vector]) -> Result<QuadraticSpace> {
        let n = basis.len();
        let lowered: Vec<Vector> = basis
            .iter()
            .map(|b| self.lower(b))
            .collect::<Result<_>>()?;
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let g = lowered[i].dot(&basis[j]);
                gram[(j, i)] = g.clone();
                gram[(i, j)] = g;
            }
        }
        QuadraticSpace::new(gram)
    }
}

impl std::fmt::Debug for QuadraticSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuadraticSpace")
            .field("gram", &self.gram)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuadraticSpaceWire {
    dim: usize,
    gram: Matrix,
}

impl Serialize for QuadraticSpace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadraticSpaceWire {
            dim: self.dim(),
            gram: self.gram.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticSpace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = QuadraticSpaceWire::deserialize(d)?;
        if w.gram.rows() != w.dim {
            return Err(serde::de::Error::custom(format!(
                "dim is {} but gram has {} rows",
                w.dim,
                w.gram.rows()
            )));
        }
        QuadraticSpace::new(w.gram).map_err(serde::de::Error::custom)
    }
}

/// A linear map `O: (W, Q) → (W̃, Q̃)` claimed to be an isometry. The claim
/// is only trusted after [`Isometry::verify`].
#[derive(Clone, Debug)]
pub struct Isometry {
    source: QuadraticSpace,
    target: QuadraticSpace,
    matrix: Matrix,
}

/// Outcome of [`Isometry::verify`].
#[derive(Clone, Debug, PartialEq)]
pub enum IsometryReport {
    Pass,
    NotInvertible,
    /// `(OᵀQ̃O)_{row,col}` differs from `Q_{row,col}`.
    GramMismatch {
        row: usize,
        col: usize,
        expected: FieldElem,
        found: FieldElem,
    },
}

impl IsometryReport {
    pub fn passed(&self) -> bool {
        matches!(self, IsometryReport::Pass)
    }
}

impl std::fmt::Display for IsometryReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IsometryReport::Pass => f.write_str("pass"),
            IsometryReport::NotInvertible => f.write_str("matrix is not invertible"),
            IsometryReport::GramMismatch {
                row,
                col,
                expected,
                found,
            } => write!(
                f,
                "pulled-back Gram entry ({row}, {col}) is {found}, expected {expected}"
            ),
        }
    }
}

impl Isometry {
    /// Checks shapes only; `matrix` is `target.dim × source.dim`.
    pub fn new(source: QuadraticSpace, target: QuadraticSpace, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim(),
                found: matrix.cols(),
            });
        }
        Ok(Isometry {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(space: &QuadraticSpace) -> Self {
        Isometry {
            source: space.clone(),
            target: space.clone(),
            matrix: Matrix::identity(space.dim()),
        }
    }

    pub fn source(&self) -> &QuadraticSpace {
        &self.source
    }

    pub fn target(&self) -> &QuadraticSpace {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.matrix.mul_vec(x)
    }

    /// Exact check of invertibility and `OᵀQ̃O = Q`.
    pub fn verify(&self) -> IsometryReport {
        if self.source.dim() != self.target.dim() || self.matrix.rank() != self.source.dim() {
            return IsometryReport::NotInvertible;
        }
        let pulled = self
            .matrix
            .transpose()
            .mul(self.target.gram())
            .and_then(|m| m.mul(&self.matrix))
            .expect("shapes checked at construction");
        let n = self.source.dim();
        for row in 0..n {
            for col in 0..n {
                if pulled[(row, col)] != self.source.gram()[(row, col)] {
                    return IsometryReport::GramMismatch {
                        row,
                        col,
                        expected: self.source.gram()[(row, col)].clone(),
                        found: pulled[(row, col)].clone(),
                    };
                }
            }
        }
        IsometryReport::Pass
    }

    pub(crate) fn require_verified(&self) -> Result<()> {
        match self.verify() {
            IsometryReport::Pass => Ok(()),
            other => Err(Error::UnverifiedIsometry(other.to_string())),
        }
    }

    /// The inverse isometry. Fails unless the map verifies.
    pub fn inverse(&self) -> Result<Isometry> {
        self.require_verified()?;
        Ok(Isometry {
            source: self.target.clone(),
            target: self.source.clone(),
            matrix: self.matrix.inverse()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fi(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    #[test]
    fn q_eval_examples() {
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        assert_eq!(e2.q_eval(&Vector::from_ints(&[3, 4])).unwrap(), fi(25));
        assert_eq!(e2.q_eval(&Vector::zeros(2)).unwrap(), fi(0));
        let mink = QuadraticSpace::diagonal(&[fi(1), fi(-1)]).unwrap();
        assert_eq!(mink.q_eval(&Vector::from_ints(&[1, 1])).unwrap(), fi(0));
        assert!(matches!(
            e2.q_eval(&Vector::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn q_polar_examples() {
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let p = |a: &[i64], b: &[i64]| {
            e2.q_polar(&Vector::from_ints(a), &Vector::from_ints(b))
                .unwrap()
        };
        assert_eq!(p(&[1, 0], &[0, 1]), fi(0));
        assert_eq!(p(&[1, 2], &[3, 4]), fi(11));
        assert_eq!(p(&[1, 2], &[1, 2]), fi(5));
    }

    #[test]
    fn raise_examples() {
        let e3 = QuadraticSpace::euclidean(3).unwrap();
        let w = Vector::from_ints(&[1, -2, 7]);
        assert_eq!(e3.raise(&w).unwrap(), w);
        let s = QuadraticSpace::diagonal(&[fi(2)]).unwrap();
        assert_eq!(
            s.raise(&Vector::from_ints(&[3])).unwrap(),
            Vector::new(vec![FieldElem::ratio(3, 2)])
        );
        let mink = QuadraticSpace::diagonal(&[fi(1), fi(-1)]).unwrap();
        assert_eq!(
            mink.raise(&Vector::from_ints(&[1, 1])).unwrap(),
            Vector::from_ints(&[1, -1])
        );
    }

    #[test]
    fn orth_complement_examples() {
        let e3 = QuadraticSpace::euclidean(3).unwrap();
        let basis = e3.orth_complement(&Vector::basis(3, 2)).unwrap();
        assert_eq!(basis, vec![Vector::basis(3, 0), Vector::basis(3, 1)]);

        let line = QuadraticSpace::diagonal(&[fi(5)]).unwrap();
        assert!(line.orth_complement(&Vector::from_ints(&[2])).unwrap().is_empty());

        let mink = QuadraticSpace::diagonal(&[fi(1), fi(-1)]).unwrap();
        assert_eq!(
            mink.orth_complement(&Vector::from_ints(&[1, 1])),
            Err(Error::IsotropicVector)
        );
    }

    #[test]
    fn singular_and_asymmetric_grams_are_rejected() {
        let singular = Matrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(QuadraticSpace::new(singular).unwrap_err(), Error::SingularGram);
        let asym = Matrix::from_int_rows(&[&[1, 2], &[0, 1]]);
        assert_eq!(
            QuadraticSpace::new(asym).unwrap_err(),
            Error::NotSymmetric { row: 0, col: 1 }
        );
        assert_eq!(
            QuadraticSpace::new(Matrix::zeros(0, 0)).unwrap_err(),
            Error::EmptySpace
        );
    }

    #[test]
    fn verify_isometry_examples() {
        let e3 = QuadraticSpace::euclidean(3).unwrap();
        assert!(Isometry::identity(&e3).verify().passed());
        let perm = Matrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let iso = Isometry::new(e3.clone(), e3.clone(), perm).unwrap();
        assert!(iso.verify().passed());
        let double = Matrix::identity(3).scale(&fi(2));
        let iso = Isometry::new(e3.clone(), e3, double).unwrap();
        assert_eq!(
            iso.verify(),
            IsometryReport::GramMismatch {
                row: 0,
                col: 0,
                expected: fi(1),
                found: fi(4)
            }
        );
    }

    #[test]
    fn space_json_round_trip() {
        let s = QuadraticSpace::diagonal(&[fi(1), FieldElem::sqrt2()]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.starts_with(r#"{"dim":2,"gram":[["#));
        let back: QuadraticSpace = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let singular = r#"{"dim":1,"gram":[[{"q":"0/1","r2":"0/1","r3":"0/1","r6":"0/1"}]]}"#;
        assert!(serde_json::from_str::<QuadraticSpace>(singular).is_err());
    }
}
