//! Expression trees over a cubic form and a quadratic form, expanded into
//! explicit coefficient maps or evaluated at a point.
//!
//! Every identity in this crate that is checked "at coefficient level" is
//! phrased as one of these trees and expanded here.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::poly::{coordinates, mat_vec, PolynomialMap, ProductAccumulator};
use crate::quadspace::QuadraticSpace;
use crate::scalar::FieldElem;

use super::{orderings, CubicForm};

/// Highest total degree an expression may have.
pub const MAX_DEGREE: usize = 6;

/// A scalar-valued polynomial expression in the point `x`.
#[derive(Clone, Debug)]
pub enum ScalarExpr<'a> {
    Const(FieldElem),
    /// The coordinate `x_i` (0-based).
    Coord(usize),
    /// `u(v)`
    Cubic(&'a CubicForm, Box<VectorExpr<'a>>),
    /// `Q(v)`
    Quad(&'a QuadraticSpace, Box<VectorExpr<'a>>),
    /// `Q(v; w)`
    Polar(&'a QuadraticSpace, Box<VectorExpr<'a>>, Box<VectorExpr<'a>>),
    /// `u(v; w)`
    DirDeriv(&'a CubicForm, Box<VectorExpr<'a>>, Box<VectorExpr<'a>>),
    Sum(Vec<ScalarExpr<'a>>),
    Product(Vec<ScalarExpr<'a>>),
    Scaled(FieldElem, Box<ScalarExpr<'a>>),
}

/// A vector-valued polynomial expression in the point `x`.
#[derive(Clone, Debug)]
pub enum VectorExpr<'a> {
    /// The point `x` itself.
    Point,
    Const(Vector),
    /// `∇u(v)` with respect to the given quadratic form.
    Grad(&'a CubicForm, &'a QuadraticSpace, Box<VectorExpr<'a>>),
    /// `h(v; w)`
    Hess(
        &'a CubicForm,
        &'a QuadraticSpace,
        Box<VectorExpr<'a>>,
        Box<VectorExpr<'a>>,
    ),
    Sum(Vec<VectorExpr<'a>>),
    /// A scalar expression times a vector expression.
    Times(Box<ScalarExpr<'a>>, Box<VectorExpr<'a>>),
    Scaled(FieldElem, Box<VectorExpr<'a>>),
}

impl<'a> ScalarExpr<'a> {
    pub fn cubic(u: &'a CubicForm, v: VectorExpr<'a>) -> Self {
        ScalarExpr::Cubic(u, Box::new(v))
    }

    pub fn quad(q: &'a QuadraticSpace, v: VectorExpr<'a>) -> Self {
        ScalarExpr::Quad(q, Box::new(v))
    }

    pub fn polar(q: &'a QuadraticSpace, v: VectorExpr<'a>, w: VectorExpr<'a>) -> Self {
        ScalarExpr::Polar(q, Box::new(v), Box::new(w))
    }

    pub fn dir_deriv(u: &'a CubicForm, v: VectorExpr<'a>, w: VectorExpr<'a>) -> Self {
        ScalarExpr::DirDeriv(u, Box::new(v), Box::new(w))
    }

    pub fn scaled(self, k: FieldElem) -> Self {
        ScalarExpr::Scaled(k, Box::new(self))
    }

    pub fn plus(self, other: ScalarExpr<'a>) -> Self {
        ScalarExpr::Sum(vec![self, other])
    }

    pub fn minus(self, other: ScalarExpr<'a>) -> Self {
        self.plus(other.scaled(FieldElem::from_int(-1)))
    }

    pub fn times(self, other: ScalarExpr<'a>) -> Self {
        ScalarExpr::Product(vec![self, other])
    }

    pub fn degree(&self) -> usize {
        match self {
            ScalarExpr::Const(_) => 0,
            ScalarExpr::Coord(_) => 1,
            ScalarExpr::Cubic(_, v) => 3 * v.degree(),
            ScalarExpr::Quad(_, v) => 2 * v.degree(),
            ScalarExpr::Polar(_, v, w) => v.degree() + w.degree(),
            ScalarExpr::DirDeriv(_, v, w) => 2 * v.degree() + w.degree(),
            ScalarExpr::Sum(xs) => xs.iter().map(Self::degree).max().unwrap_or(0),
            ScalarExpr::Product(xs) => xs.iter().map(Self::degree).sum(),
            ScalarExpr::Scaled(_, x) => x.degree(),
        }
    }

    /// Fully expanded coefficient map in `n_vars` variables.
    pub fn expand(&self, n_vars: usize) -> Result<PolynomialMap> {
        check_degree(self.degree())?;
        self.expand_inner(n_vars)
    }

    fn expand_inner(&self, n: usize) -> Result<PolynomialMap> {
        Ok(match self {
            ScalarExpr::Const(c) => PolynomialMap::constant(n, c.clone()),
            ScalarExpr::Coord(i) => {
                if *i >= n {
                    return Err(Error::IndexOutOfRange { index: *i, dim: n });
                }
                PolynomialMap::var(n, *i)
            }
            ScalarExpr::Cubic(u, v) => {
                if matches!(**v, VectorExpr::Point) && u.dim() == n {
                    u.to_polynomial()
                } else {
                    let p = v.expand_inner(n, u.dim())?;
                    cubic_of(u, &p, n)
                }
            }
            ScalarExpr::Quad(q, v) => {
                let p = v.expand_inner(n, q.dim())?;
                crate::poly::bilinear(q.gram(), &p, &p)
            }
            ScalarExpr::Polar(q, v, w) => {
                let p = v.expand_inner(n, q.dim())?;
                let r = w.expand_inner(n, q.dim())?;
                crate::poly::bilinear(q.gram(), &p, &r)
            }
            ScalarExpr::DirDeriv(u, v, w) => {
                let p = v.expand_inner(n, u.dim())?;
                let r = w.expand_inner(n, u.dim())?;
                let half = FieldElem::ratio(1, 2);
                let mut acc = ProductAccumulator::new(n);
                for (&idx, t) in u.entries() {
                    let k = t * &half;
                    for [a, b, c] in orderings(idx) {
                        if p[a].is_zero() || p[b].is_zero() || r[c].is_zero() {
                            continue;
                        }
                        acc.add_product(&k, &p[a].mul(&p[b]), &r[c]);
                    }
                }
                acc.finish()
            }
            ScalarExpr::Sum(xs) => {
                let mut out = PolynomialMap::zero(n);
                for x in xs {
                    out.add_assign(&x.expand_inner(n)?);
                }
                out
            }
            ScalarExpr::Product(xs) => {
                let mut out = PolynomialMap::constant(n, FieldElem::one());
                for x in xs {
                    out = out.mul(&x.expand_inner(n)?);
                }
                out
            }
            ScalarExpr::Scaled(k, x) => x.expand_inner(n)?.scale(k),
        })
    }

    /// Exact value at `point`.
    pub fn eval(&self, point: &Vector) -> Result<FieldElem> {
        Ok(match self {
            ScalarExpr::Const(c) => c.clone(),
            ScalarExpr::Coord(i) => {
                if *i >= point.dim() {
                    return Err(Error::IndexOutOfRange {
                        index: *i,
                        dim: point.dim(),
                    });
                }
                point[*i].clone()
            }
            ScalarExpr::Cubic(u, v) => u.eval(&v.eval(point)?)?,
            ScalarExpr::Quad(q, v) => q.q_eval(&v.eval(point)?)?,
            ScalarExpr::Polar(q, v, w) => q.q_polar(&v.eval(point)?, &w.eval(point)?)?,
            ScalarExpr::DirDeriv(u, v, w) => u.dir_deriv(&v.eval(point)?, &w.eval(point)?)?,
            ScalarExpr::Sum(xs) => {
                let mut acc = FieldElem::zero();
                for x in xs {
                    acc += x.eval(point)?;
                }
                acc
            }
            ScalarExpr::Product(xs) => {
                let mut acc = FieldElem::one();
                for x in xs {
                    acc *= &x.eval(point)?;
                }
                acc
            }
            ScalarExpr::Scaled(k, x) => k * &x.eval(point)?,
        })
    }
}

impl<'a> VectorExpr<'a> {
    pub fn grad(u: &'a CubicForm, q: &'a QuadraticSpace, v: VectorExpr<'a>) -> Self {
        VectorExpr::Grad(u, q, Box::new(v))
    }

    pub fn hess(
        u: &'a CubicForm,
        q: &'a QuadraticSpace,
        v: VectorExpr<'a>,
        w: VectorExpr<'a>,
    ) -> Self {
        VectorExpr::Hess(u, q, Box::new(v), Box::new(w))
    }

    pub fn times(s: ScalarExpr<'a>, v: VectorExpr<'a>) -> Self {
        VectorExpr::Times(Box::new(s), Box::new(v))
    }

    pub fn scaled(self, k: FieldElem) -> Self {
        VectorExpr::Scaled(k, Box::new(self))
    }

    pub fn plus(self, other: VectorExpr<'a>) -> Self {
        VectorExpr::Sum(vec![self, other])
    }

    pub fn minus(self, other: VectorExpr<'a>) -> Self {
        self.plus(other.scaled(FieldElem::from_int(-1)))
    }

    pub fn degree(&self) -> usize {
        match self {
            VectorExpr::Point => 1,
            VectorExpr::Const(_) => 0,
            VectorExpr::Grad(_, _, v) => 2 * v.degree(),
            VectorExpr::Hess(_, _, v, w) => v.degree() + w.degree(),
            VectorExpr::Sum(xs) => xs.iter().map(Self::degree).max().unwrap_or(0),
            VectorExpr::Times(s, v) => s.degree() + v.degree(),
            VectorExpr::Scaled(_, v) => v.degree(),
        }
    }

    /// Expanded components; `n_vars` is the number of variables of `x`.
    pub fn expand(&self, n_vars: usize) -> Result<Vec<PolynomialMap>> {
        check_degree(self.degree())?;
        let out_dim = self.output_dim(n_vars)?;
        self.expand_inner(n_vars, out_dim)
    }

    fn output_dim(&self, n: usize) -> Result<usize> {
        Ok(match self {
            VectorExpr::Point => n,
            VectorExpr::Const(v) => v.dim(),
            VectorExpr::Grad(u, _, _) | VectorExpr::Hess(u, _, _, _) => u.dim(),
            VectorExpr::Sum(xs) => match xs.first() {
                Some(x) => x.output_dim(n)?,
                None => n,
            },
            VectorExpr::Times(_, v) | VectorExpr::Scaled(_, v) => v.output_dim(n)?,
        })
    }

    fn expand_inner(&self, n: usize, expected_dim: usize) -> Result<Vec<PolynomialMap>> {
        let check = |found: usize| {
            if found == expected_dim {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: expected_dim,
                    found,
                })
            }
        };
        Ok(match self {
            VectorExpr::Point => {
                check(n)?;
                coordinates(n)
            }
            VectorExpr::Const(v) => {
                check(v.dim())?;
                v.iter()
                    .map(|c| PolynomialMap::constant(n, c.clone()))
                    .collect()
            }
            VectorExpr::Grad(u, q, v) => {
                check(u.dim())?;
                check_pair(u, q)?;
                let p = v.expand_inner(n, u.dim())?;
                h_of(u, q, &p, &p, n)
            }
            VectorExpr::Hess(u, q, v, w) => {
                check(u.dim())?;
                check_pair(u, q)?;
                let p = v.expand_inner(n, u.dim())?;
                let r = w.expand_inner(n, u.dim())?;
                h_of(u, q, &p, &r, n)
            }
            VectorExpr::Sum(xs) => {
                let mut out = vec![PolynomialMap::zero(n); expected_dim];
                for x in xs {
                    for (o, c) in out.iter_mut().zip(x.expand_inner(n, expected_dim)?) {
                        o.add_assign(&c);
                    }
                }
                out
            }
            VectorExpr::Times(s, v) => {
                let f = s.expand_inner(n)?;
                v.expand_inner(n, expected_dim)?
                    .iter()
                    .map(|c| f.mul(c))
                    .collect()
            }
            VectorExpr::Scaled(k, v) => v
                .expand_inner(n, expected_dim)?
                .iter()
                .map(|c| c.scale(k))
                .collect(),
        })
    }

    /// Exact value at `point`.
    pub fn eval(&self, point: &Vector) -> Result<Vector> {
        Ok(match self {
            VectorExpr::Point => point.clone(),
            VectorExpr::Const(v) => v.clone(),
            VectorExpr::Grad(u, q, v) => u.grad(q, &v.eval(point)?)?,
            VectorExpr::Hess(u, q, v, w) => u.h_bilinear(q, &v.eval(point)?, &w.eval(point)?)?,
            VectorExpr::Sum(xs) => {
                let mut it = xs.iter();
                let Some(first) = it.next() else {
                    return Ok(Vector::zeros(point.dim()));
                };
                let mut acc = first.eval(point)?;
                for x in it {
                    let v = x.eval(point)?;
                    v.check_dim(acc.dim())?;
                    acc = &acc + &v;
                }
                acc
            }
            VectorExpr::Times(s, v) => v.eval(point)?.scale(&s.eval(point)?),
            VectorExpr::Scaled(k, v) => v.eval(point)?.scale(k),
        })
    }
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        Err(Error::DegreeTooHigh {
            degree,
            max: MAX_DEGREE,
        })
    } else {
        Ok(())
    }
}

fn check_pair(u: &CubicForm, q: &QuadraticSpace) -> Result<()> {
    if u.dim() == q.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: q.dim(),
        })
    }
}

/// `u(p)` for a vector of polynomials `p`.
fn cubic_of(u: &CubicForm, p: &[PolynomialMap], n: usize) -> PolynomialMap {
    let mut acc = ProductAccumulator::new(n);
    for (&[i, j, k], t) in u.entries() {
        if p[i].is_zero() || p[j].is_zero() || p[k].is_zero() {
            continue;
        }
        let w = t * &FieldElem::ratio(orderings([i, j, k]).count() as i64, 6);
        acc.add_product(&w, &p[i].mul(&p[j]), &p[k]);
    }
    acc.finish()
}

/// `h(p; r) = ½ Q⁻¹ u(p; r; ·)` for vectors of polynomials.
fn h_of(
    u: &CubicForm,
    q: &QuadraticSpace,
    p: &[PolynomialMap],
    r: &[PolynomialMap],
    n: usize,
) -> Vec<PolynomialMap> {
    let half = FieldElem::ratio(1, 2);
    let mut cov: Vec<ProductAccumulator> = (0..u.dim()).map(|_| ProductAccumulator::new(n)).collect();
    for (&idx, t) in u.entries() {
        let k = t * &half;
        for [a, b, c] in orderings(idx) {
            cov[c].add_product(&k, &p[a], &r[b]);
        }
    }
    let cov: Vec<PolynomialMap> = cov.into_iter().map(ProductAccumulator::finish).collect();
    mat_vec(q.gram_inv(), &cov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

    fn fi(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    fn diagonal() -> CubicForm {
        CubicForm::from_trilinear(2, [([1, 1, 1], fi(6)), ([0, 0, 1], fi(-6))]).unwrap()
    }

    #[test]
    fn q_of_x_expands_to_sum_of_squares() {
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let p = ScalarExpr::quad(&e2, VectorExpr::Point).expand(2).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(&Monomial::from_exponents(&[2, 0])), fi(1));
        assert_eq!(p.coeff(&Monomial::from_exponents(&[0, 2])), fi(1));
    }

    #[test]
    fn euler_relation_expands_to_zero() {
        let u = diagonal();
        let e = ScalarExpr::dir_deriv(&u, VectorExpr::Point, VectorExpr::Point)
            .minus(ScalarExpr::cubic(&u, VectorExpr::Point).scaled(fi(3)));
        assert!(e.expand(2).unwrap().is_zero());
    }

    #[test]
    fn eiconal_residual_of_diagonal_cubic_is_zero() {
        let u = diagonal();
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let q = || ScalarExpr::quad(&e2, VectorExpr::Point);
        let e = ScalarExpr::quad(&e2, VectorExpr::grad(&u, &e2, VectorExpr::Point))
            .minus(q().times(q()).scaled(fi(9)));
        assert!(e.expand(2).unwrap().is_zero());
    }

    #[test]
    fn point_evaluation_matches_expansion() {
        let u = diagonal();
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let hx = VectorExpr::grad(&u, &e2, VectorExpr::Point);
        let e = ScalarExpr::polar(&e2, VectorExpr::Point, hx)
            .times(ScalarExpr::Coord(0))
            .plus(ScalarExpr::Const(FieldElem::sqrt2()));
        let p = e.expand(2).unwrap();
        let pt = Vector::new(vec![FieldElem::ratio(2, 3), fi(-5)]);
        assert_eq!(p.eval(pt.coords()), e.eval(&pt).unwrap());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let u = diagonal();
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let e = ScalarExpr::cubic(&u, VectorExpr::grad(&u, &e2, VectorExpr::Point));
        assert_eq!(e.degree(), 6);
        let too_high = ScalarExpr::Product(vec![
            ScalarExpr::cubic(&u, VectorExpr::Point),
            ScalarExpr::cubic(&u, VectorExpr::Point),
            ScalarExpr::Coord(0),
        ]);
        assert_eq!(
            too_high.expand(2).unwrap_err(),
            Error::DegreeTooHigh { degree: 7, max: 6 }
        );
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let u = diagonal();
        let e3 = QuadraticSpace::euclidean(3).unwrap();
        let e = VectorExpr::grad(&u, &e3, VectorExpr::Point);
        assert!(matches!(e.expand(2), Err(Error::DimensionMismatch { .. })));
    }
}
