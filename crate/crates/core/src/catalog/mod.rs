//! Concrete triples and algebras: the Cartan cubics, the spin-type and
//! diagonal cubics, hermitian 3×3 matrices and spin factors.

mod division;

pub use division::{real_triple_products, DivisionAlgebraElem};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::correspondence::alpha_with_basis;
use crate::cubicform::CubicForm;
use crate::eiconal::EiconalTriple;
use crate::error::{Error, Result};
use crate::jordan::{CubicJordanAlgebra, SpinFactor};
use crate::linalg::{Matrix, Vector};
use crate::poly::{Monomial, PolynomialMap};
use crate::quadspace::{Isometry, QuadraticSpace};
use crate::scalar::FieldElem;

/// Spin factor dimension used when the family name gives none.
pub const DEFAULT_SPIN_FACTOR_DIM: usize = 3;

fn monomial(n: usize, vars: &[usize]) -> Monomial {
    let mut exps = vec![0u8; n];
    for &v in vars {
        exps[v] += 1;
    }
    Monomial::from_exponents(&exps)
}

fn euclidean_triple(p: &PolynomialMap) -> Result<EiconalTriple> {
    let n = p.n_vars();
    EiconalTriple::new(QuadraticSpace::euclidean(n)?, CubicForm::from_polynomial(p)?)
}

/// `u = x₂³ − 3x₂x₁²` on Euclidean `𝔽²`.
pub fn diagonal_cubic() -> EiconalTriple {
    let p = PolynomialMap::from_terms(
        2,
        [
            (monomial(2, &[1, 1, 1]), FieldElem::from_int(1)),
            (monomial(2, &[0, 0, 1]), FieldElem::from_int(-3)),
        ],
    );
    euclidean_triple(&p).expect("fixed dimension-2 cubic")
}

/// `u = 4xₙ³ − 3xₙ|x|²` on Euclidean `𝔽ⁿ`.
pub fn spin_cubic(n: usize) -> Result<EiconalTriple> {
    if n == 0 {
        return Err(Error::InvalidFamily("spin:0".into()));
    }
    let last = n - 1;
    let mut p = PolynomialMap::zero(n);
    p.add_term(monomial(n, &[last, last, last]), FieldElem::from_int(4));
    for i in 0..n {
        p.add_term(monomial(n, &[last, i, i]), FieldElem::from_int(-3));
    }
    euclidean_triple(&p)
}

/// The Cartan isoparametric cubic on `𝔽^{3d+2}`, with `z₁, z₂, z₃ ∈ 𝔽_d`
/// in the first `3d` coordinates followed by `x_{3d+1}, x_{3d+2}`:
///
/// `u = x_{3d+2}³ + (3/2) x_{3d+2} (|z₁|² + |z₂|² − 2|z₃|² − 2x_{3d+1}²)
///     + (3√3/2) x_{3d+1} (|z₂|² − |z₁|²) + 3√3 re((z₁z₂)z₃)`
pub fn cartan_cubic(d: usize) -> Result<EiconalTriple> {
    let triples = real_triple_products(d)?;
    let n = 3 * d + 2;
    let (x4, x5) = (3 * d, 3 * d + 1);
    let z = |k: usize, s: usize| k * d + s;
    let f = FieldElem::ratio;
    let root3 = FieldElem::sqrt3();
    let mut p = PolynomialMap::zero(n);

    p.add_term(monomial(n, &[x5, x5, x5]), FieldElem::one());
    for s in 0..d {
        p.add_term(monomial(n, &[x5, z(0, s), z(0, s)]), f(3, 2));
        p.add_term(monomial(n, &[x5, z(1, s), z(1, s)]), f(3, 2));
        p.add_term(monomial(n, &[x5, z(2, s), z(2, s)]), f(-3, 1));
    }
    p.add_term(monomial(n, &[x5, x4, x4]), f(-3, 1));
    let half_root27 = &root3 * &f(3, 2);
    for s in 0..d {
        p.add_term(monomial(n, &[x4, z(1, s), z(1, s)]), half_root27.clone());
        p.add_term(monomial(n, &[x4, z(0, s), z(0, s)]), -half_root27.clone());
    }
    let root27 = &root3 * &f(3, 1);
    for ([a, b, c], sign) in triples {
        p.add_term(monomial(n, &[z(0, a), z(1, b), z(2, c)]), &root27 * &sign);
    }
    euclidean_triple(&p)
}

type Herm3 = [[DivisionAlgebraElem; 3]; 3];

/// Above-diagonal positions in coordinate order.
const OFF_DIAGONAL: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn herm3_dim(d: usize) -> usize {
    3 + 3 * d
}

fn herm3_matrix(d: usize, coords: &Vector) -> Result<Herm3> {
    let zero = DivisionAlgebraElem::zero(d)?;
    let mut m: Herm3 = std::array::from_fn(|_| std::array::from_fn(|_| zero.clone()));
    for i in 0..3 {
        m[i][i] = DivisionAlgebraElem::one(d)?.scale(&coords[i]);
    }
    for (p, &(r, c)) in OFF_DIAGONAL.iter().enumerate() {
        let entry = DivisionAlgebraElem::new(coords.coords()[3 + p * d..3 + (p + 1) * d].to_vec())?;
        m[c][r] = entry.conj();
        m[r][c] = entry;
    }
    Ok(m)
}

fn herm3_coords(d: usize, m: &Herm3) -> Vector {
    let mut out = Vec::with_capacity(herm3_dim(d));
    for i in 0..3 {
        out.push(m[i][i].re().clone());
    }
    for &(r, c) in &OFF_DIAGONAL {
        out.extend(m[r][c].coords().iter().cloned());
    }
    Vector::new(out)
}

fn herm3_mul(a: &Herm3, b: &Herm3) -> Result<Herm3> {
    let d = a[0][0].d();
    let zero = DivisionAlgebraElem::zero(d)?;
    let mut out: Herm3 = std::array::from_fn(|_| std::array::from_fn(|_| zero.clone()));
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j])?)?;
            }
        }
    }
    Ok(out)
}

/// `½(xy + yx)` on hermitian matrices, in coordinates.
fn herm3_jordan_product(d: usize, x: &Vector, y: &Vector) -> Result<Vector> {
    let (a, b) = (herm3_matrix(d, x)?, herm3_matrix(d, y)?);
    let (ab, ba) = (herm3_mul(&a, &b)?, herm3_mul(&b, &a)?);
    let sum = herm3_coords(d, &ab);
    let other = herm3_coords(d, &ba);
    Ok((&sum + &other).scale(&FieldElem::ratio(1, 2)))
}

/// Hermitian 3×3 matrices over `𝔽_d` (`d ∈ {1, 2, 4}`) with
/// `x•y = ½(xy + yx)`. Coordinates are the three diagonal entries followed
/// by the entries at (1,2), (1,3), (2,3), each expanded in the units of
/// `𝔽_d`. The norm comes from Newton's identities,
/// `N = (t₁³ − 3t₁t₂ + 2t₃)/6` with `t_k(x) = trace(x^k)`.
pub fn herm3(d: usize) -> Result<CubicJordanAlgebra> {
    match d {
        1 | 2 | 4 => {}
        8 => return Err(Error::InvalidFamily("herm3:8".into())),
        _ => return Err(Error::InvalidDivisionDim(d)),
    }
    let n = herm3_dim(d);
    let mut products = vec![vec![Vector::zeros(n); n]; n];
    for i in 0..n {
        for j in i..n {
            let p = herm3_jordan_product(d, &Vector::basis(n, i), &Vector::basis(n, j))?;
            products[j][i] = p.clone();
            products[i][j] = p;
        }
    }
    let trace = |v: &Vector| &(&v[0] + &v[1]) + &v[2];
    // trace(e_i • e_j)
    let pair_trace: Vec<Vec<FieldElem>> = products
        .iter()
        .map(|row| row.iter().map(trace).collect())
        .collect();

    let t1 = PolynomialMap::linear(&Vector::new(
        (0..n).map(|i| FieldElem::from_int(i64::from(i < 3))).collect(),
    ));
    let mut t2 = PolynomialMap::zero(n);
    for i in 0..n {
        for j in 0..n {
            t2.add_term(monomial(n, &[i, j]), pair_trace[i][j].clone());
        }
    }
    let mut t3 = PolynomialMap::zero(n);
    for j in 0..n {
        for k in 0..n {
            for (l, c) in products[j][k].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for i in 0..n {
                    let w = c * &pair_trace[i][l];
                    if !w.is_zero() {
                        t3.add_term(monomial(n, &[i, j, k]), w);
                    }
                }
            }
        }
    }
    let t1_cubed = t1.mul(&t1).mul(&t1);
    let newton = t1_cubed
        .sub(&t1.mul(&t2).scale(&FieldElem::from_int(3)))
        .add(&t3.scale(&FieldElem::from_int(2)))
        .scale(&FieldElem::ratio(1, 6));
    let norm = CubicForm::from_polynomial(&newton)?;

    let mut unit = vec![FieldElem::zero(); n];
    for u in unit.iter_mut().take(3) {
        *u = FieldElem::one();
    }
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i..n {
            for (k, c) in products[i][j].iter().enumerate() {
                if !c.is_zero() {
                    entries.push(([i, j, k], c.clone()));
                }
            }
        }
    }
    CubicJordanAlgebra::with_structure_constants(norm, Vector::new(unit), entries)
}

/// The linear map `𝔽^{3d+2} → Herm₃(𝔽_d)` onto the trace-free matrices
/// that carries `√2·det` to the Cartan cubic `u_d`:
///
/// diagonal `√2·(−x₅/2 − (√3/2)x₄, x₅, −x₅/2 + (√3/2)x₄)`, and
/// off-diagonal `x₁₂ = (√6/2) z₁`, `x₂₃ = (√6/2) z₂`, `x₁₃ = (√6/2) z̄₃`,
/// writing `x₄, x₅` for the last two coordinates.
pub fn cartan_to_herm3(d: usize) -> Result<Matrix> {
    let rows = herm3_dim(d);
    let cols = 3 * d + 2;
    let (x4, x5) = (3 * d, 3 * d + 1);
    let f = FieldElem::ratio;
    let root2 = FieldElem::sqrt2();
    let root6 = FieldElem::sqrt6();
    let mut m = Matrix::zeros(rows, cols);
    m[(0, x5)] = &root2 * &f(-1, 2);
    m[(0, x4)] = &root6 * &f(-1, 2);
    m[(1, x5)] = root2.clone();
    m[(2, x5)] = &root2 * &f(-1, 2);
    m[(2, x4)] = &root6 * &f(1, 2);
    let half_root6 = &root6 * &f(1, 2);
    for s in 0..d {
        // positions (1,2), (1,3), (2,3) hold z₁, z̄₃, z₂
        m[(3 + s, s)] = half_root6.clone();
        let conj_sign = if s == 0 { f(1, 1) } else { f(-1, 1) };
        m[(3 + d + s, 2 * d + s)] = &half_root6 * &conj_sign;
        m[(3 + 2 * d + s, d + s)] = half_root6.clone();
    }
    Ok(m)
}

/// A verified isometry from `α(herm3(d))` to Euclidean `𝔽^{3d+2}` that
/// carries the trace-free norm cubic to `cartan_cubic(d)`.
pub fn herm3_cartan_isometry(d: usize) -> Result<Isometry> {
    let alg = herm3(d)?;
    let (triple, basis) = alpha_with_basis(&alg)?;
    let embed = Matrix::from_columns(alg.dim(), &basis)?;
    let lowered = alg.tau().gram().mul(&cartan_to_herm3(d)?)?;
    // Euclidean coordinates → coordinates in the basis of e^⊥
    let to_alpha = triple
        .space()
        .gram_inv()
        .mul(&embed.transpose().mul(&lowered)?)?;
    let iso = Isometry::new(
        triple.space().clone(),
        QuadraticSpace::euclidean(3 * d + 2)?,
        to_alpha.inverse()?,
    )?;
    iso.require_verified()?;
    Ok(iso)
}

/// The spin factor on `(𝔽ⁿ, x₁² − x₂² − … − xₙ²)` with unit `e₁`.
pub fn lorentzian_spin_factor(n: usize) -> Result<SpinFactor> {
    if n < 2 {
        return Err(Error::InvalidFamily(format!("spinfactor:{n}")));
    }
    let signs: Vec<FieldElem> = (0..n)
        .map(|i| FieldElem::from_int(if i == 0 { 1 } else { -1 }))
        .collect();
    SpinFactor::new(QuadraticSpace::diagonal(&signs)?, Vector::basis(n, 0))
}

/// A spin factor on an arbitrary quadratic space with `Q(e) = 1`.
pub fn spin_factor(space: QuadraticSpace, unit: Vector) -> Result<SpinFactor> {
    SpinFactor::new(space, unit)
}

/// Catalog families by their command-line names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Cartan(usize),
    Spin(usize),
    Diagonal,
    Herm3(usize),
    /// `𝔽 ⊕` the Lorentzian spin factor of the given dimension.
    SpinFactor(usize),
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFamily(s.to_string());
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        Ok(match (name, arg) {
            ("cartan", Some(d @ (1 | 2 | 4 | 8))) => Family::Cartan(d),
            ("spin", Some(n)) if n >= 1 => Family::Spin(n),
            ("diagonal", None) => Family::Diagonal,
            ("herm3", Some(d @ (1 | 2 | 4))) => Family::Herm3(d),
            ("spinfactor", None) => Family::SpinFactor(DEFAULT_SPIN_FACTOR_DIM),
            ("spinfactor", Some(n)) if n >= 2 => Family::SpinFactor(n),
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cartan(d) => write!(f, "cartan:{d}"),
            Family::Spin(n) => write!(f, "spin:{n}"),
            Family::Diagonal => write!(f, "diagonal"),
            Family::Herm3(d) => write!(f, "herm3:{d}"),
            Family::SpinFactor(n) => write!(f, "spinfactor:{n}"),
        }
    }
}

/// A catalog object as written to disk.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum CatalogEntry {
    Triple(EiconalTriple),
    Algebra(CubicJordanAlgebra),
}

impl Family {
    pub fn build(&self) -> Result<CatalogEntry> {
        Ok(match *self {
            Family::Cartan(d) => CatalogEntry::Triple(cartan_cubic(d)?),
            Family::Spin(n) => CatalogEntry::Triple(spin_cubic(n)?),
            Family::Diagonal => CatalogEntry::Triple(diagonal_cubic()),
            Family::Herm3(d) => CatalogEntry::Algebra(herm3(d)?),
            Family::SpinFactor(n) => {
                CatalogEntry::Algebra(lorentzian_spin_factor(n)?.with_real_summand()?)
            }
        })
    }
}
