//! Cubic Jordan algebras given by a cubic norm with basepoint, optionally
//! together with explicit structure constants.
//!
//! All derived data comes from the norm `N` and unit `e`:
//!
//! * `Trace(x) = N(e; x)`
//! * `S(x) = N(x; e)`, with polarization `S(x; y) = xᵀ S y`
//! * `T(x; y) = Trace(x) Trace(y) − S(x; y)`, and `τ = T / 3`
//! * `T(x#; y) = N(x; y)` defines the sharp map.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cubicform::{CubicForm, ScalarExpr, VectorExpr};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::quadspace::QuadraticSpace;
use crate::report::{CheckMode, CheckOutcome, Report, SampleConfig};
use crate::scalar::FieldElem;

/// Name of the basepoint check, `Trace(e) = S(e) = 3N(e) = 3`.
pub const BASEPOINT_CHECK: &str = "basepoint TC3: Trace(e) = S(e) = 3N(e) = 3";

/// Dimensions up to which the adjoint identity is also expanded.
pub const ADJOINT_EXPAND_DIM: usize = 9;

/// Candidates drawn per sample when looking for a regular element.
pub const MIN_POLY_CANDIDATES: usize = 8;

#[derive(Clone, PartialEq, Eq)]
pub struct CubicJordanAlgebra {
    unit: Vector,
    norm: CubicForm,
    trace_vec: Vector,
    spur: Matrix,
    trace_form: Matrix,
    trace_form_inv: Matrix,
    tau: QuadraticSpace,
    /// `e_i • e_j` for `i ≤ j`, sparse, omitting zero products.
    mult: BTreeMap<(usize, usize), Vec<(usize, FieldElem)>>,
}

/// Trace, spur and norm values at the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasepointValues {
    pub trace: FieldElem,
    pub spur: FieldElem,
    pub norm: FieldElem,
}

impl BasepointValues {
    pub fn of(norm: &CubicForm, unit: &Vector) -> Result<Self> {
        let n = norm.eval(unit)?;
        let s = norm.dir_deriv(unit, unit)?;
        // for the unit both polarizations coincide: N(e; e) = 3N(e)
        Ok(BasepointValues {
            trace: s.clone(),
            spur: s,
            norm: n,
        })
    }

    pub fn holds(&self) -> bool {
        let three = FieldElem::from_int(3);
        self.norm.is_one() && self.trace == three && self.spur == three
    }

    pub fn outcome(&self) -> CheckOutcome {
        CheckOutcome::exact(BASEPOINT_CHECK, self.holds(), || self.to_string())
    }
}

impl std::fmt::Display for BasepointValues {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Trace(e) = {}, S(e) = {}, N(e) = {}",
            self.trace, self.spur, self.norm
        )
    }
}

/// Coefficients of `λ³ − σ₁λ² + σ₂λ − σ₃`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPoly {
    pub sigma1: FieldElem,
    pub sigma2: FieldElem,
    pub sigma3: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinPolyOutcome {
    Regular(MinPoly),
    /// `e, x, x²` are linearly dependent.
    NotRegular,
    /// `x³` is not in the span of `e, x, x²`; impossible in a rank-3 algebra.
    HigherRank,
}

impl CubicJordanAlgebra {
    /// The Springer construction: the product is recovered from the norm as
    /// `x•y = ½(x#y + Trace(x)y + Trace(y)x − S(x;y)e)`.
    pub fn from_norm(norm: CubicForm, unit: Vector) -> Result<Self> {
        let mut alg = Self::without_product(norm, unit)?;
        let n = alg.dim();
        let covectors = alg.pair_covectors();
        let half = FieldElem::ratio(1, 2);
        for i in 0..n {
            for j in i..n {
                let mut v = match covectors.get(&(i, j)) {
                    Some(c) => alg.trace_form_inv.apply(c),
                    None => Vector::zeros(n),
                };
                let ti = alg.trace_vec[i].clone();
                let tj = alg.trace_vec[j].clone();
                v[j] += ti;
                v[i] += tj;
                let sij = -alg.spur[(i, j)].clone();
                v.axpy(&sij, &alg.unit);
                let entries: Vec<_> = v
                    .into_coords()
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c * &half))
                    .collect();
                if !entries.is_empty() {
                    alg.mult.insert((i, j), entries);
                }
            }
        }
        Ok(alg)
    }

    /// An algebra whose product is given by `e_i • e_j = Σ_k c_ij^k e_k`.
    ///
    /// Entries are `([i, j, k], c)` with 0-based indices; `(i, j)` and
    /// `(j, i)` may both be listed but must agree.
    pub fn with_structure_constants(
        norm: CubicForm,
        unit: Vector,
        entries: impl IntoIterator<Item = ([usize; 3], FieldElem)>,
    ) -> Result<Self> {
        let mut alg = Self::without_product(norm, unit)?;
        let n = alg.dim();
        let mut given: BTreeMap<(usize, usize, usize), FieldElem> = BTreeMap::new();
        for ([i, j, k], c) in entries {
            for idx in [i, j, k] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, dim: n });
                }
            }
            match given.get(&(i, j, k)) {
                Some(prev) if *prev != c => return Err(Error::ConflictingEntry([i, j, k])),
                _ => {
                    given.insert((i, j, k), c);
                }
            }
        }
        // products per ordered pair, zeros dropped
        let mut ordered: BTreeMap<(usize, usize), BTreeMap<usize, FieldElem>> = BTreeMap::new();
        for ((i, j, k), c) in given {
            let row = ordered.entry((i, j)).or_default();
            if !c.is_zero() {
                row.insert(k, c);
            }
        }
        for (&(i, j), row) in &ordered {
            if i < j {
                if let Some(mirror) = ordered.get(&(j, i)) {
                    if mirror != row {
                        return Err(Error::NotCommutative { i, j });
                    }
                }
            }
        }
        alg.mult = ordered
            .into_iter()
            .filter(|(_, row)| !row.is_empty())
            .map(|((i, j), row)| ((i.min(j), i.max(j)), row.into_iter().collect()))
            .collect();
        Ok(alg)
    }

    fn without_product(norm: CubicForm, unit: Vector) -> Result<Self> {
        unit.check_dim(norm.dim())?;
        let values = BasepointValues::of(&norm, &unit)?;
        if !values.holds() {
            return Err(Error::NotBasepoint(values.to_string()));
        }
        let n = norm.dim();
        let trace_vec = norm.contract2(&unit, &unit).scale(&FieldElem::ratio(1, 2));
        let spur = norm.hessian_unchecked(&unit);
        let mut trace_form = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                trace_form[(i, j)] = &(&trace_vec[i] * &trace_vec[j]) - &spur[(i, j)];
            }
        }
        let trace_form_inv = trace_form
            .inverse()
            .map_err(|_| Error::DegenerateTraceForm)?;
        let tau = QuadraticSpace::new(trace_form.scale(&FieldElem::ratio(1, 3)))
            .map_err(|_| Error::DegenerateTraceForm)?;
        Ok(CubicJordanAlgebra {
            unit,
            norm,
            trace_vec,
            spur,
            trace_form,
            trace_form_inv,
            tau,
            mult: BTreeMap::new(),
        })
    }

    /// `m ↦ N(e_i; e_j; e_m)` for every pair `i ≤ j` with a nonzero result.
    fn pair_covectors(&self) -> BTreeMap<(usize, usize), Vector> {
        let n = self.dim();
        let mut out: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
        for (&idx, t) in self.norm.entries() {
            for [a, b, c] in crate::cubicform::orderings(idx) {
                if a <= b {
                    out.entry((a, b)).or_insert_with(|| Vector::zeros(n))[c] += t.clone();
                }
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.unit.dim()
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn norm(&self) -> &CubicForm {
        &self.norm
    }

    /// The covector with `Trace(x) = trace_vec · x`.
    pub fn trace_vec(&self) -> &Vector {
        &self.trace_vec
    }

    /// The symmetric matrix of `S(x; y)`.
    pub fn spur_matrix(&self) -> &Matrix {
        &self.spur
    }

    /// The Gram matrix of the trace form `T`.
    pub fn trace_form(&self) -> &Matrix {
        &self.trace_form
    }

    /// The quadratic space `(V, τ)` with `τ = T/3`.
    pub fn tau(&self) -> &QuadraticSpace {
        &self.tau
    }

    /// Nonzero structure constants `(i, j, k, c_ij^k)` with `i ≤ j`.
    pub fn structure_constants(&self) -> impl Iterator<Item = (usize, usize, usize, &FieldElem)> {
        self.mult
            .iter()
            .flat_map(|(&(i, j), row)| row.iter().map(move |(k, c)| (i, j, *k, c)))
    }

    fn check(&self, x: &Vector) -> Result<()> {
        x.check_dim(self.dim())
    }

    pub fn bullet(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.bullet_unchecked(x, y))
    }

    fn bullet_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for (&(i, j), row) in &self.mult {
            let mut coef = &x[i] * &y[j];
            if i != j {
                coef.add_mul(&x[j], &y[i]);
            }
            if coef.is_zero() {
                continue;
            }
            for (k, c) in row {
                out[*k].add_mul(&coef, c);
            }
        }
        out
    }

    pub fn square(&self, x: &Vector) -> Result<Vector> {
        self.bullet(x, x)
    }

    pub fn trace(&self, x: &Vector) -> Result<FieldElem> {
        self.check(x)?;
        Ok(self.trace_vec.dot(x))
    }

    pub fn spur(&self, x: &Vector) -> Result<FieldElem> {
        Ok(self.spur_polar(x, x)? * FieldElem::ratio(1, 2))
    }

    pub fn spur_polar(&self, x: &Vector, y: &Vector) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.spur.bilinear(x, y))
    }

    pub fn trace_bilinear(&self, x: &Vector, y: &Vector) -> Result<FieldElem> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.trace_form.bilinear(x, y))
    }

    pub fn norm_eval(&self, x: &Vector) -> Result<FieldElem> {
        self.norm.eval(x)
    }

    /// `x#`, defined by `T(x#; y) = N(x; y)`.
    pub fn sharp(&self, x: &Vector) -> Result<Vector> {
        self.check(x)?;
        let g = self.norm.contract2(x, x).scale(&FieldElem::ratio(1, 2));
        Ok(self.trace_form_inv.apply(&g))
    }

    /// The polarized sharp `x#y = (x+y)# − x# − y#`.
    pub fn sharp_polar(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.trace_form_inv.apply(&self.norm.contract2(x, y)))
    }

    /// `x² − Trace(x) x + S(x) e`, computed from the product.
    pub fn sharp_via_identity(&self, x: &Vector) -> Result<Vector> {
        let mut out = self.square(x)?;
        out.axpy(&-self.trace(x)?, x);
        out.axpy(&self.spur(x)?, &self.unit);
        Ok(out)
    }

    pub fn min_poly(&self, x: &Vector) -> Result<MinPolyOutcome> {
        let x2 = self.square(x)?;
        let powers = Matrix::from_columns(self.dim(), &[self.unit.clone(), x.clone(), x2.clone()])?;
        if powers.rank() < 3 {
            return Ok(MinPolyOutcome::NotRegular);
        }
        let x3 = self.bullet_unchecked(x, &x2);
        let system = Matrix::from_columns(self.dim(), &[x2, -x, self.unit.clone()])?;
        Ok(match system.solve(&x3)? {
            Some(s) => {
                let [sigma1, sigma2, sigma3]: [FieldElem; 3] = s
                    .into_coords()
                    .try_into()
                    .expect("three unknowns");
                MinPolyOutcome::Regular(MinPoly {
                    sigma1,
                    sigma2,
                    sigma3,
                })
            }
            None => MinPolyOutcome::HigherRank,
        })
    }

    pub fn check_basepoint(&self) -> CheckOutcome {
        match BasepointValues::of(&self.norm, &self.unit) {
            Ok(v) => v.outcome(),
            Err(e) => CheckOutcome::error(BASEPOINT_CHECK, CheckMode::Exact, &e),
        }
    }

    /// `e • e_i = e_i` on every basis vector.
    pub fn check_unit(&self) -> CheckOutcome {
        let n = self.dim();
        let bad = (0..n).find(|&i| {
            let ei = Vector::basis(n, i);
            self.bullet_unchecked(&self.unit, &ei) != ei
        });
        CheckOutcome::exact("unit: e•x = x", bad.is_none(), || {
            format!("e•e_{} differs from e_{}", bad.unwrap_or(0) + 1, bad.unwrap_or(0) + 1)
        })
    }

    pub fn check_commutativity(&self, cfg: &SampleConfig) -> CheckOutcome {
        cfg.run("commutativity: x•y = y•x", self.dim(), 2, |p| {
            Ok(self.bullet(&p[0], &p[1])? == self.bullet(&p[1], &p[0])?)
        })
    }

    /// `(x#)# = N(x) x`.
    pub fn check_adjoint(&self, cfg: &SampleConfig) -> Report {
        let name = "adjoint: (x#)# = N(x)x";
        let mut report = Report::new();
        report.push(cfg.run(name, self.dim(), 1, |p| {
            let x = &p[0];
            Ok(self.sharp(&self.sharp(x)?)? == x.scale(&self.norm_eval(x)?))
        }));
        if self.dim() <= ADJOINT_EXPAND_DIM.min(cfg.max_expand_dim) {
            let third = FieldElem::ratio(1, 3);
            let sharp_x = VectorExpr::grad(&self.norm, &self.tau, VectorExpr::Point).scaled(third.clone());
            let expr = VectorExpr::grad(&self.norm, &self.tau, sharp_x)
                .scaled(third)
                .minus(VectorExpr::times(
                    ScalarExpr::cubic(&self.norm, VectorExpr::Point),
                    VectorExpr::Point,
                ));
            report.push(CheckOutcome::from_residuals(name, expr.expand(self.dim())));
        }
        report
    }

    /// `x² • (x • y) = x • (x² • y)`.
    pub fn check_jordan_identity(&self, cfg: &SampleConfig) -> CheckOutcome {
        cfg.run("Jordan identity: x²•(x•y) = x•(x²•y)", self.dim(), 2, |p| {
            let (x, y) = (&p[0], &p[1]);
            let x2 = self.square(x)?;
            let lhs = self.bullet(&x2, &self.bullet(x, y)?)?;
            let rhs = self.bullet(x, &self.bullet(&x2, y)?)?;
            Ok(lhs == rhs)
        })
    }

    /// `x³ − Trace(x) x² + S(x) x − N(x) e = 0`.
    pub fn check_cubic_identity(&self, cfg: &SampleConfig) -> CheckOutcome {
        cfg.run(
            "cubic identity: x³ - Trace(x)x² + S(x)x - N(x)e = 0",
            self.dim(),
            1,
            |p| Ok(self.cubic_residual(&p[0])?.is_zero()),
        )
    }

    /// `x³ − Trace(x) x² + S(x) x − N(x) e`.
    pub fn cubic_residual(&self, x: &Vector) -> Result<Vector> {
        let x2 = self.square(x)?;
        let mut r = self.bullet(x, &x2)?;
        r.axpy(&-self.trace(x)?, &x2);
        r.axpy(&self.spur(x)?, x);
        r.axpy(&-self.norm_eval(x)?, &self.unit);
        Ok(r)
    }

    pub fn check_trace_identities(&self, cfg: &SampleConfig) -> Report {
        let n = self.dim();
        let mut report = Report::new();
        report.push(cfg.run("Trace(x#y) = S(x;y)", n, 2, |p| {
            Ok(self.trace(&self.sharp_polar(&p[0], &p[1])?)? == self.spur_polar(&p[0], &p[1])?)
        }));
        report.push(cfg.run("S(x;y) = Trace(x)Trace(y) - Trace(x•y)", n, 2, |p| {
            let (x, y) = (&p[0], &p[1]);
            let rhs = &(self.trace(x)? * self.trace(y)?) - &self.trace(&self.bullet(x, y)?)?;
            Ok(self.spur_polar(x, y)? == rhs)
        }));
        report.push(cfg.run("Trace(x•y) = T(x;y)", n, 2, |p| {
            let (x, y) = (&p[0], &p[1]);
            Ok(self.trace(&self.bullet(x, y)?)? == self.trace_bilinear(x, y)?)
        }));
        report.push(cfg.run("Trace(x#) = S(x)", n, 1, |p| {
            Ok(self.trace(&self.sharp(&p[0])?)? == self.spur(&p[0])?)
        }));
        report
    }

    /// Sharp by `T`-duality agrees with `x² − Trace(x)x + S(x)e`.
    pub fn check_sharp_agreement(&self, cfg: &SampleConfig) -> CheckOutcome {
        cfg.run("sharp: T-duality = sharp identity", self.dim(), 1, |p| {
            Ok(self.sharp(&p[0])? == self.sharp_via_identity(&p[0])?)
        })
    }

    /// For random regular elements, the minimum polynomial has coefficients
    /// `(Trace(x), S(x), N(x))`. Each sample draws a few candidates and
    /// uses the first regular one; from dimension 3 on, a sample without
    /// any regular candidate fails.
    pub fn check_min_poly(&self, cfg: &SampleConfig) -> CheckOutcome {
        cfg.run("min_poly = (Trace, S, N)", self.dim(), MIN_POLY_CANDIDATES, |p| {
            for x in p {
                match self.min_poly(x)? {
                    MinPolyOutcome::Regular(m) => {
                        return Ok(m.sigma1 == self.trace(x)?
                            && m.sigma2 == self.spur(x)?
                            && m.sigma3 == self.norm_eval(x)?)
                    }
                    MinPolyOutcome::NotRegular => continue,
                    MinPolyOutcome::HigherRank => return Ok(false),
                }
            }
            Ok(self.dim() < 3)
        })
    }

    fn grad_norm(&self) -> VectorExpr<'_> {
        VectorExpr::grad(&self.norm, &self.tau, VectorExpr::Point)
    }

    fn unit_expr(&self) -> VectorExpr<'_> {
        VectorExpr::Const(self.unit.clone())
    }

    fn lemma_first(&self) -> ScalarExpr<'_> {
        ScalarExpr::polar(&self.tau, self.grad_norm(), self.unit_expr()).minus(
            ScalarExpr::dir_deriv(&self.norm, VectorExpr::Point, self.unit_expr()),
        )
    }

    fn lemma_second(&self) -> ScalarExpr<'_> {
        let spur = || ScalarExpr::dir_deriv(&self.norm, VectorExpr::Point, self.unit_expr());
        let t = ScalarExpr::polar(&self.tau, VectorExpr::Point, self.unit_expr());
        let n = ScalarExpr::cubic(&self.norm, VectorExpr::Point);
        ScalarExpr::quad(&self.tau, self.grad_norm())
            .minus(spur().times(spur()).scaled(FieldElem::from_int(3)))
            .plus(t.times(n).scaled(FieldElem::from_int(18)))
    }

    /// `τ(∇N; ∇τ(∇N)) − 108 τ(x) N(x)`, using `∇τ(∇N) = 4 h(x; ∇N)`.
    fn lemma_third(&self) -> ScalarExpr<'_> {
        let grad_f = VectorExpr::hess(&self.norm, &self.tau, VectorExpr::Point, self.grad_norm())
            .scaled(FieldElem::from_int(4));
        ScalarExpr::polar(&self.tau, self.grad_norm(), grad_f).minus(
            ScalarExpr::quad(&self.tau, VectorExpr::Point)
                .times(ScalarExpr::cubic(&self.norm, VectorExpr::Point))
                .scaled(FieldElem::from_int(108)),
        )
    }

    /// With `∇` the gradient for `τ` and `t = τ(x; e)`:
    ///
    /// 1. `τ(∇N; e) = S(x)`
    /// 2. `τ(∇N) = 3S(x)² − 18 t N(x)`
    /// 3. `τ(∇N; ∇τ(∇N)) = 108 τ(x) N(x)`
    pub fn check_lemma(&self, cfg: &SampleConfig) -> Report {
        let n = self.dim();
        let exprs = [self.lemma_first(), self.lemma_second(), self.lemma_third()];
        let mut report = Report::new();
        for (name, expr) in LEMMA_CHECKS.iter().zip(&exprs) {
            report.push(cfg.run(*name, n, 1, |p| expr.eval(&p[0]).map(|v| v.is_zero())));
        }
        if n <= cfg.max_expand_dim {
            for (name, expr) in LEMMA_CHECKS.iter().zip(&exprs).take(2) {
                report.push(CheckOutcome::from_residuals(
                    *name,
                    expr.expand(n).map(|p| vec![p]),
                ));
            }
        }
        report.push(self.check_infinity_laplacian(cfg));
        report
    }

    /// The third lemma identity, the invariant form of
    /// `Δ_∞ N = 108 |x|² N`; expanded when `dim ≤ cfg.max_expand_dim`,
    /// otherwise tested at sample points.
    pub fn check_infinity_laplacian(&self, cfg: &SampleConfig) -> CheckOutcome {
        let expr = self.lemma_third();
        let n = self.dim();
        if n <= cfg.max_expand_dim {
            CheckOutcome::from_residuals(LEMMA_CHECKS[2], expr.expand(n).map(|p| vec![p]))
        } else {
            cfg.run(LEMMA_CHECKS[2], n, 1, |p| expr.eval(&p[0]).map(|v| v.is_zero()))
        }
    }

    /// Every algebra identity other than the lemma.
    pub fn check_all(&self, cfg: &SampleConfig) -> Report {
        let mut report = Report::new();
        report.push(self.check_basepoint());
        report.push(self.check_unit());
        report.push(self.check_commutativity(cfg));
        report.extend(self.check_adjoint(cfg));
        report.push(self.check_cubic_identity(cfg));
        report.push(self.check_jordan_identity(cfg));
        report.extend(self.check_trace_identities(cfg));
        report.push(self.check_sharp_agreement(cfg));
        report.push(self.check_min_poly(cfg));
        report
    }
}

pub const LEMMA_CHECKS: [&str; 3] = [
    "lemma (i): tau(grad N; e) = S(x)",
    "lemma (ii): tau(grad N) = 3S(x)^2 - 18tN(x)",
    "lemma (iii): tau(grad N; grad tau(grad N)) = 108 tau(x)N(x)",
];

impl std::fmt::Debug for CubicJordanAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CubicJordanAlgebra")
            .field("dim", &self.dim())
            .field("unit", &self.unit)
            .field("norm", &self.norm)
            .finish_non_exhaustive()
    }
}

/// One structure constant in an algebra file, with 1-based indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub val: FieldElem,
}

/// The on-disk form of an algebra, before any algebraic validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub unit: Vector,
    pub norm: CubicForm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<Vec<MultEntry>>,
}

impl AlgebraFile {
    pub fn into_algebra(self) -> Result<CubicJordanAlgebra> {
        if self.norm.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: self.norm.dim(),
            });
        }
        match self.mult {
            None => CubicJordanAlgebra::from_norm(self.norm, self.unit),
            Some(entries) => {
                let mut converted = Vec::with_capacity(entries.len());
                for e in entries {
                    if e.i == 0 || e.j == 0 || e.k == 0 {
                        return Err(Error::Parse("structure constant indices are 1-based".into()));
                    }
                    converted.push(([e.i - 1, e.j - 1, e.k - 1], e.val));
                }
                CubicJordanAlgebra::with_structure_constants(self.norm, self.unit, converted)
            }
        }
    }
}

impl From<&CubicJordanAlgebra> for AlgebraFile {
    fn from(alg: &CubicJordanAlgebra) -> Self {
        AlgebraFile {
            dim: alg.dim(),
            unit: alg.unit.clone(),
            norm: alg.norm.clone(),
            mult: Some(
                alg.structure_constants()
                    .map(|(i, j, k, c)| MultEntry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        val: c.clone(),
                    })
                    .collect(),
            ),
        }
    }
}

impl Serialize for CubicJordanAlgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgebraFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CubicJordanAlgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        AlgebraFile::deserialize(d)?
            .into_algebra()
            .map_err(serde::de::Error::custom)
    }
}

/// The rank-2 algebra `x•y = Q(x;e)y + Q(y;e)x − Q(x;y)e` on a quadratic
/// space with `Q(e) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinFactor {
    space: QuadraticSpace,
    unit: Vector,
}

impl SpinFactor {
    pub fn new(space: QuadraticSpace, unit: Vector) -> Result<Self> {
        let q = space.q_eval(&unit)?;
        if !q.is_one() {
            return Err(Error::NotBasepoint(format!("Q(e) = {q}")));
        }
        Ok(SpinFactor { space, unit })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn bullet(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        let q = &self.space;
        let mut out = y.scale(&q.q_polar(x, &self.unit)?);
        out.axpy(&q.q_polar(y, &self.unit)?, x);
        out.axpy(&-q.q_polar(x, y)?, &self.unit);
        Ok(out)
    }

    pub fn trace(&self, x: &Vector) -> Result<FieldElem> {
        Ok(self.space.q_polar(x, &self.unit)? * FieldElem::from_int(2))
    }

    pub fn norm(&self, x: &Vector) -> Result<FieldElem> {
        self.space.q_eval(x)
    }

    /// `x² − Trace(x) x + N(x) e = 0`.
    pub fn check_quadratic_identity(&self, cfg: &SampleConfig) -> CheckOutcome {
        cfg.run("quadratic identity: x² - 2Q(x;e)x + Q(x)e = 0", self.dim(), 1, |p| {
            let x = &p[0];
            let mut r = self.bullet(x, x)?;
            r.axpy(&-self.trace(x)?, x);
            r.axpy(&self.norm(x)?, &self.unit);
            Ok(r.is_zero())
        })
    }

    pub fn check_unit(&self, cfg: &SampleConfig) -> CheckOutcome {
        cfg.run("unit: e•x = x", self.dim(), 1, |p| {
            Ok(self.bullet(&self.unit, &p[0])? == p[0])
        })
    }

    pub fn check_jordan_identity(&self, cfg: &SampleConfig) -> CheckOutcome {
        cfg.run("Jordan identity: x²•(x•y) = x•(x²•y)", self.dim(), 2, |p| {
            let (x, y) = (&p[0], &p[1]);
            let x2 = self.bullet(x, x)?;
            Ok(self.bullet(&x2, &self.bullet(x, y)?)? == self.bullet(x, &self.bullet(&x2, y)?)?)
        })
    }

    /// The cubic algebra `𝔽 ⊕ V` with unit `(1, e)`, norm `N(s, x) = s Q(x)`
    /// and the componentwise product.
    pub fn with_real_summand(&self) -> Result<CubicJordanAlgebra> {
        let n = self.dim();
        let gram = self.space.gram();
        let mut norm_entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                let g = &gram[(i, j)];
                if !g.is_zero() {
                    norm_entries.push(([0, i + 1, j + 1], g * &FieldElem::from_int(2)));
                }
            }
        }
        let norm = CubicForm::from_trilinear(n + 1, norm_entries)?;
        let mut unit = vec![FieldElem::one()];
        unit.extend(self.unit.iter().cloned());
        let mut mult = vec![([0, 0, 0], FieldElem::one())];
        for i in 0..n {
            for j in i..n {
                let p = self.bullet(&Vector::basis(n, i), &Vector::basis(n, j))?;
                for (k, c) in p.into_coords().into_iter().enumerate() {
                    if !c.is_zero() {
                        mult.push(([i + 1, j + 1, k + 1], c));
                    }
                }
            }
        }
        CubicJordanAlgebra::with_structure_constants(norm, Vector::new(unit), mult)
    }
}
