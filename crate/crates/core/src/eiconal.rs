//! Eiconal triples `(V, Q, u)` with `Q(∇u(x)) = 9 Q(x)²`.

use serde::{Deserialize, Serialize};

use crate::cubicform::{CubicForm, ScalarExpr, VectorExpr};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::poly::PolynomialMap;
use crate::quadspace::{Isometry, QuadraticSpace};
use crate::report::{leading_witnesses, CheckOutcome, MonomialWitness, Report, SampleConfig};
use crate::scalar::FieldElem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EiconalTriple {
    space: QuadraticSpace,
    cubic: CubicForm,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTriple {
    space: QuadraticSpace,
    cubic: CubicForm,
}

impl<'de> Deserialize<'de> for EiconalTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawTriple::deserialize(d)?;
        EiconalTriple::new(raw.space, raw.cubic).map_err(serde::de::Error::custom)
    }
}

impl EiconalTriple {
    /// Pairs a space with a cubic. Nothing about the eiconal equation is
    /// assumed; see [`verify_eiconal`].
    pub fn new(space: QuadraticSpace, cubic: CubicForm) -> Result<Self> {
        if space.dim() != cubic.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: cubic.dim(),
            });
        }
        Ok(EiconalTriple { space, cubic })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn cubic(&self) -> &CubicForm {
        &self.cubic
    }

    /// The quartic `Q(∇u(x)) − 9 Q(x)²`, expanded.
    pub fn residual(&self) -> Result<PolynomialMap> {
        let (q, u) = (&self.space, &self.cubic);
        let grad_sq = ScalarExpr::quad(q, VectorExpr::grad(u, q, VectorExpr::Point));
        let q_sq = ScalarExpr::quad(q, VectorExpr::Point).times(ScalarExpr::quad(q, VectorExpr::Point));
        grad_sq
            .minus(q_sq.scaled(FieldElem::from_int(9)))
            .expand(self.dim())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EiconalStatus {
    Pass,
    Fail,
}

/// Result of the coefficient-level eiconal check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EiconalCertificate {
    pub status: EiconalStatus,
    pub witnesses: Vec<MonomialWitness>,
}

impl EiconalCertificate {
    pub fn passed(&self) -> bool {
        self.status == EiconalStatus::Pass
    }
}

/// Expands `Q(∇u) − 9Q²` and passes iff every coefficient vanishes.
pub fn verify_eiconal(t: &EiconalTriple) -> EiconalCertificate {
    let residual = t
        .residual()
        .expect("the eiconal residual is a quartic in the triple's own dimension");
    if residual.is_zero() {
        EiconalCertificate {
            status: EiconalStatus::Pass,
            witnesses: Vec::new(),
        }
    } else {
        EiconalCertificate {
            status: EiconalStatus::Fail,
            witnesses: leading_witnesses(std::slice::from_ref(&residual)),
        }
    }
}

/// The same equation tested at seeded random points only.
pub fn point_check(t: &EiconalTriple, cfg: &SampleConfig) -> CheckOutcome {
    let (q, u) = (&t.space, &t.cubic);
    cfg.run("eiconal equation", t.dim(), 1, |p| {
        let x = &p[0];
        let qx = q.q_eval(x)?;
        Ok(q.q_eval(&u.grad(q, x)?)? == FieldElem::from_int(9) * &qx * &qx)
    })
}

/// `(iso.target, u ∘ iso⁻¹)`: the triple seen through a verified isometry.
pub fn transport(t: &EiconalTriple, iso: &Isometry) -> Result<EiconalTriple> {
    iso.require_verified()?;
    if iso.source() != &t.space {
        return Err(Error::UnverifiedIsometry(
            "isometry source differs from the triple's space".into(),
        ));
    }
    EiconalTriple::new(iso.target().clone(), t.cubic.pushforward(iso)?)
}

/// The gradient identities satisfied by every eiconal triple, with
/// `h(x) = ∇u(x)`:
///
/// * `h(x; h(x)) = 9 Q(x) x`
/// * `h(h(x); h(x)) = 54 u(x) x − 9 Q(x) h(x)`
/// * `Q(x; h(x)) = 3 u(x)`
///
/// Each is checked at sample points and, up to `cfg.max_expand_dim`, at
/// coefficient level.
pub fn check_gradient_identities(t: &EiconalTriple, cfg: &SampleConfig) -> Result<Report> {
    let cert = verify_eiconal(t);
    if !cert.passed() {
        return Err(Error::NotEiconal(cert.witnesses.len()));
    }
    let (q, u) = (&t.space, &t.cubic);
    let n = t.dim();
    let fe = FieldElem::from_int;
    let h = || VectorExpr::grad(u, q, VectorExpr::Point);
    let qx = || ScalarExpr::quad(q, VectorExpr::Point);
    let ux = || ScalarExpr::cubic(u, VectorExpr::Point);

    let first = VectorExpr::hess(u, q, VectorExpr::Point, h())
        .minus(VectorExpr::times(qx(), VectorExpr::Point).scaled(fe(9)));
    let second = VectorExpr::hess(u, q, h(), h())
        .minus(VectorExpr::times(ux(), VectorExpr::Point).scaled(fe(54)))
        .plus(VectorExpr::times(qx(), h()).scaled(fe(9)));
    let third = ScalarExpr::polar(q, VectorExpr::Point, h()).minus(ux().scaled(fe(3)));

    let mut report = Report::new();
    let names = [
        "h(x; h(x)) = 9Q(x)x",
        "h(h(x); h(x)) = 54u(x)x - 9Q(x)h(x)",
        "Q(x; h(x)) = 3u(x)",
    ];
    report.push(cfg.run(names[0], n, 1, |p| first.eval(&p[0]).map(|v| v.is_zero())));
    report.push(cfg.run(names[1], n, 1, |p| second.eval(&p[0]).map(|v| v.is_zero())));
    report.push(cfg.run(names[2], n, 1, |p| third.eval(&p[0]).map(|v| v.is_zero())));
    if n <= cfg.max_expand_dim {
        report.push(CheckOutcome::from_residuals(names[0], first.expand(n)));
        report.push(CheckOutcome::from_residuals(names[1], second.expand(n)));
        report.push(CheckOutcome::from_residuals(
            names[2],
            third.expand(n).map(|p| vec![p]),
        ));
    }
    Ok(report)
}

/// `h(x; y)` of the triple at explicit vectors.
pub fn h(t: &EiconalTriple, x: &Vector, y: &Vector) -> Result<Vector> {
    t.cubic.h_bilinear(&t.space, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::poly::Monomial;

    fn fi(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    fn diagonal() -> EiconalTriple {
        let u = CubicForm::from_trilinear(2, [([1, 1, 1], fi(6)), ([0, 0, 1], fi(-6))]).unwrap();
        EiconalTriple::new(QuadraticSpace::euclidean(2).unwrap(), u).unwrap()
    }

    #[test]
    fn diagonal_cubic_is_eiconal() {
        assert!(verify_eiconal(&diagonal()).passed());
        assert!(point_check(&diagonal(), &SampleConfig::default()).passed());
    }

    #[test]
    fn doubled_cubic_fails_with_x2_quartic_witness() {
        let t = diagonal();
        let doubled = EiconalTriple::new(t.space().clone(), t.cubic().scale(&fi(2))).unwrap();
        let cert = verify_eiconal(&doubled);
        assert!(!cert.passed());
        let w = cert
            .witnesses
            .iter()
            .find(|w| w.monomial == [0, 4])
            .expect("x2^4 witness");
        assert_eq!(w.coeff, fi(27));
    }

    #[test]
    fn reflection_transport() {
        let t = diagonal();
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let flip = Isometry::new(e2.clone(), e2, Matrix::diagonal(&[fi(1), fi(-1)])).unwrap();
        let moved = transport(&t, &flip).unwrap();
        let p = moved.cubic().to_polynomial();
        assert_eq!(p.coeff(&Monomial::from_exponents(&[0, 3])), fi(-1));
        assert_eq!(p.coeff(&Monomial::from_exponents(&[2, 1])), fi(3));
        assert!(verify_eiconal(&moved).passed());
    }

    #[test]
    fn transport_rejects_non_isometry() {
        let e2 = QuadraticSpace::euclidean(2).unwrap();
        let scale = Isometry::new(e2.clone(), e2, Matrix::identity(2).scale(&fi(2))).unwrap();
        assert!(matches!(
            transport(&diagonal(), &scale),
            Err(Error::UnverifiedIsometry(_))
        ));
    }

    #[test]
    fn gradient_identities_at_a_point() {
        let t = diagonal();
        let x = Vector::from_ints(&[0, 1]);
        let hx = h(&t, &x, &x).unwrap();
        assert_eq!(hx, Vector::from_ints(&[0, 3]));
        assert_eq!(h(&t, &x, &hx).unwrap(), Vector::from_ints(&[0, 9]));
        let report = check_gradient_identities(&t, &SampleConfig::new(0, 20)).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 6);
    }

    #[test]
    fn gradient_identities_require_an_eiconal_triple() {
        let t = diagonal();
        let bad = EiconalTriple::new(t.space().clone(), t.cubic().scale(&fi(2))).unwrap();
        assert!(matches!(
            check_gradient_identities(&bad, &SampleConfig::default()),
            Err(Error::NotEiconal(_))
        ));
    }

    #[test]
    fn json_round_trip_and_certificate_shape() {
        let t = diagonal();
        let s = serde_json::to_string(&t).unwrap();
        assert!(s.starts_with("{\"space\":"));
        let back: EiconalTriple = serde_json::from_str(&s).unwrap();
        assert_eq!(back, t);
        let cert = serde_json::to_value(verify_eiconal(&t)).unwrap();
        assert_eq!(cert, serde_json::json!({"status": "pass", "witnesses": []}));
    }
}
