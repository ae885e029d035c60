//! The two constructions between eiconal triples and cubic Jordan
//! algebras, and the explicit maps showing they are mutually inverse.
//!
//! * `beta` builds the algebra on `𝔽 × W` with unit `(1, 0)` and norm
//!   `N(x₀, x) = x₀³ − (3/2) x₀ Q(x) + u(x)/√2`.
//! * `alpha` restricts `τ` and `√2·N` to the trace-free subspace `e^⊥`.

use serde::{Deserialize, Serialize};

use crate::cubicform::CubicForm;
use crate::eiconal::{verify_eiconal, EiconalTriple};
use crate::error::{Error, Result};
use crate::jordan::CubicJordanAlgebra;
use crate::linalg::{Matrix, Vector};
use crate::quadspace::Isometry;
use crate::report::{CheckOutcome, Report, SampleConfig};
use crate::scalar::FieldElem;

/// Largest dimension for which multiplicativity is also checked on every
/// pair of basis vectors.
pub const BASIS_PAIR_MAX_DIM: usize = 30;

/// The algebra of an eiconal triple.
///
/// Products, for `x, y ∈ W`: `e₀` is the unit, and
/// `x • y = Q(x; y) e₀ + (√2/12) Q⁻¹ u(x; y; ·)`.
pub fn beta(t: &EiconalTriple) -> Result<CubicJordanAlgebra> {
    let cert = verify_eiconal(t);
    if !cert.passed() {
        return Err(Error::NotEiconal(cert.witnesses.len()));
    }
    let (q, u) = (t.space(), t.cubic());
    let n = t.dim();
    let gram = q.gram();

    let mut norm = vec![([0, 0, 0], FieldElem::from_int(6))];
    let minus_three = FieldElem::from_int(-3);
    for i in 0..n {
        for j in i..n {
            if !gram[(i, j)].is_zero() {
                norm.push(([0, i + 1, j + 1], &gram[(i, j)] * &minus_three));
            }
        }
    }
    let half_root2 = FieldElem::sqrt2() * FieldElem::ratio(1, 2);
    for (&[i, j, k], c) in u.entries() {
        norm.push(([i + 1, j + 1, k + 1], c * &half_root2));
    }
    let norm = CubicForm::from_trilinear(n + 1, norm)?;

    let mut mult = vec![([0, 0, 0], FieldElem::one())];
    for i in 0..n {
        mult.push(([0, i + 1, i + 1], FieldElem::one()));
    }
    let weight = FieldElem::sqrt2() * FieldElem::ratio(1, 12);
    let inv = q.gram_inv();
    for i in 0..n {
        for j in i..n {
            if !gram[(i, j)].is_zero() {
                mult.push(([i + 1, j + 1, 0], gram[(i, j)].clone()));
            }
            let covector = Vector::new((0..n).map(|m| u.get(i, j, m)).collect());
            if covector.is_zero() {
                continue;
            }
            let spatial = inv.apply(&covector);
            for (k, c) in spatial.into_coords().into_iter().enumerate() {
                if !c.is_zero() {
                    mult.push(([i + 1, j + 1, k + 1], c * &weight));
                }
            }
        }
    }
    CubicJordanAlgebra::with_structure_constants(norm, Vector::basis(n + 1, 0), mult)
}

/// The triple of an algebra, with the basis of `e^⊥` it is expressed in.
pub fn alpha_with_basis(alg: &CubicJordanAlgebra) -> Result<(EiconalTriple, Vec<Vector>)> {
    let tau = alg.tau();
    let basis = tau.orth_complement(alg.unit())?;
    if basis.is_empty() {
        return Err(Error::EmptySpace);
    }
    let space = tau.restrict(&basis)?;
    let embed = Matrix::from_columns(alg.dim(), &basis)?;
    let cubic = alg.norm().pullback(&embed)?.scale(&FieldElem::sqrt2());
    Ok((EiconalTriple::new(space, cubic)?, basis))
}

/// The triple `(e^⊥, τ, √2·N)` of an algebra.
pub fn alpha(alg: &CubicJordanAlgebra) -> Result<EiconalTriple> {
    alpha_with_basis(alg).map(|(t, _)| t)
}

/// A linear map between algebras, claimed to be an isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    source: CubicJordanAlgebra,
    target: CubicJordanAlgebra,
    matrix: Matrix,
}

impl AlgebraMorphism {
    pub fn new(source: CubicJordanAlgebra, target: CubicJordanAlgebra, matrix: Matrix) -> Result<Self> {
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
        Ok(AlgebraMorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn source(&self) -> &CubicJordanAlgebra {
        &self.source
    }

    pub fn target(&self) -> &CubicJordanAlgebra {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.matrix.mul_vec(x)
    }
}

/// The on-disk form of a morphism; source and target are file references.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    pub matrix: Matrix,
    pub source: String,
    pub target: String,
}

/// Unit, invertibility, multiplicativity, norm and `τ` preservation.
pub fn verify_morphism(m: &AlgebraMorphism, cfg: &SampleConfig) -> Report {
    let (src, tgt) = (&m.source, &m.target);
    let n = src.dim();
    let mut report = Report::new();

    let image_of_unit = m.matrix.apply(src.unit());
    report.push(CheckOutcome::exact(
        "unit: phi(e) = e",
        &image_of_unit == tgt.unit(),
        || format!("phi(e) = {image_of_unit:?}"),
    ));
    report.push(CheckOutcome::exact(
        "invertible",
        n == tgt.dim() && m.matrix.rank() == n,
        || format!("rank {} for a {}x{} matrix", m.matrix.rank(), m.matrix.rows(), n),
    ));
    let phi = |x: &Vector| m.apply(x);
    report.push(cfg.run("multiplicativity: phi(x•y) = phi(x)•phi(y)", n, 2, |p| {
        let (x, y) = (&p[0], &p[1]);
        Ok(phi(&src.bullet(x, y)?)? == tgt.bullet(&phi(x)?, &phi(y)?)?)
    }));
    if n <= BASIS_PAIR_MAX_DIM {
        let images: Vec<Vector> = (0..n).map(|i| m.matrix.column(i)).collect();
        let bad = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let lhs = src
                    .bullet(&Vector::basis(n, i), &Vector::basis(n, j))
                    .and_then(|v| phi(&v));
                let rhs = tgt.bullet(&images[i], &images[j]);
                !matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b)
            });
        report.push(CheckOutcome::exact(
            "multiplicativity on basis pairs",
            bad.is_none(),
            || {
                let (i, j) = bad.unwrap_or_default();
                format!("fails for e_{} • e_{}", i + 1, j + 1)
            },
        ));
    }
    report.push(cfg.run("norm: N(x) = N(phi(x))", n, 1, |p| {
        Ok(src.norm_eval(&p[0])? == tgt.norm_eval(&phi(&p[0])?)?)
    }));
    report.push(cfg.run("tau-isometry: tau(x;y) = tau(phi(x);phi(y))", n, 2, |p| {
        let (x, y) = (&p[0], &p[1]);
        Ok(src.tau().q_polar(x, y)? == tgt.tau().q_polar(&phi(x)?, &phi(y)?)?)
    }));
    report
}

fn failure_names(report: &Report) -> String {
    report
        .failures()
        .map(|c| c.name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

/// The map `β(α(J)) → J`, `(x₀, x) ↦ x₀ e + x`, verified.
pub fn roundtrip_beta_alpha(
    alg: &CubicJordanAlgebra,
    cfg: &SampleConfig,
) -> Result<(AlgebraMorphism, Report)> {
    let (triple, basis) = alpha_with_basis(alg)?;
    let rebuilt = beta(&triple)?;
    let mut columns = vec![alg.unit().clone()];
    columns.extend(basis);
    let matrix = Matrix::from_columns(alg.dim(), &columns)?;
    let phi = AlgebraMorphism::new(rebuilt, alg.clone(), matrix)?;
    let report = verify_morphism(&phi, cfg);
    if !report.passed() {
        return Err(Error::RoundTripFailed(failure_names(&report)));
    }
    Ok((phi, report))
}

/// Compares `α(β(t))` with `t` entry by entry.
pub fn roundtrip_alpha_beta(t: &EiconalTriple) -> Result<CheckOutcome> {
    let back = alpha(&beta(t)?)?;
    let same_space = back.space() == t.space();
    let same_cubic = back.cubic() == t.cubic();
    Ok(CheckOutcome::exact(
        "alpha(beta(t)) = t",
        same_space && same_cubic,
        || match (same_space, same_cubic) {
            (false, false) => "quadratic form and cubic differ".into(),
            (false, true) => "quadratic form differs".into(),
            _ => "cubic differs".into(),
        },
    ))
}

/// The isomorphism `β(t₁) → β(t₂)`, `(x₀, x) ↦ (x₀, O x)`, for an
/// isometry `O` carrying `u₁` to `u₂`.
pub fn equivalence_to_isomorphism(
    t1: &EiconalTriple,
    t2: &EiconalTriple,
    iso: &Isometry,
    cfg: &SampleConfig,
) -> Result<(AlgebraMorphism, Report)> {
    iso.require_verified()?;
    if iso.source() != t1.space() || iso.target() != t2.space() {
        return Err(Error::UnverifiedIsometry(
            "isometry does not connect the two triples' spaces".into(),
        ));
    }
    if &t1.cubic().pushforward(iso)? != t2.cubic() {
        return Err(Error::CubicMismatch);
    }
    let (a1, a2) = (beta(t1)?, beta(t2)?);
    let n = t1.dim();
    let mut psi = Matrix::zeros(n + 1, n + 1);
    psi[(0, 0)] = FieldElem::one();
    for i in 0..n {
        for j in 0..n {
            psi[(i + 1, j + 1)] = iso.matrix()[(i, j)].clone();
        }
    }
    let psi = AlgebraMorphism::new(a1, a2, psi)?;
    let report = verify_morphism(&psi, cfg);
    if !report.passed() {
        return Err(Error::MorphismFailed(failure_names(&report)));
    }
    Ok((psi, report))
}

/// The restriction of a morphism to the trace-free parts, as an isometry
/// `α(J₁) → α(J₂)` in the coordinates `alpha` uses.
pub fn morphism_to_isometry(m: &AlgebraMorphism) -> Result<Isometry> {
    let (t1, w1) = alpha_with_basis(&m.source)?;
    let (t2, w2) = alpha_with_basis(&m.target)?;
    let w1 = Matrix::from_columns(m.source.dim(), &w1)?;
    let w2 = Matrix::from_columns(m.target.dim(), &w2)?;
    // coordinates of Φ W₁ in the basis W₂: G₂⁻¹ W₂ᵀ τ₂ Φ W₁
    let lowered = m.target.tau().gram().mul(&m.matrix.mul(&w1)?)?;
    let coords = t2.space().gram_inv().mul(&w2.transpose().mul(&lowered)?)?;
    let iso = Isometry::new(t1.space().clone(), t2.space().clone(), coords)?;
    iso.require_verified()?;
    Ok(iso)
}
