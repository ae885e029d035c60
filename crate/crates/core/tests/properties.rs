use std::collections::BTreeMap;

use cubic_jordan::catalog::{cartan_cubic, diagonal_cubic};
use cubic_jordan::eiconal::{point_check, transport};
use cubic_jordan::{
    verify_eiconal, CubicForm, EiconalTriple, FieldElem, Isometry, Matrix, QuadraticSpace,
    SampleConfig, Vector,
};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = FieldElem> {
    (-9i64..=9, 1i64..=4).prop_map(|(p, q)| FieldElem::ratio(p, q))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(scalar(), dim).prop_map(Vector::new)
}

fn nonzero() -> impl Strategy<Value = FieldElem> {
    scalar().prop_filter("nonzero", |x| !x.is_zero())
}

/// `Pᵀ D P` with `D` diagonal invertible and `P` unit upper triangular,
/// so the Gram matrix is invertible but generally neither diagonal nor
/// definite.
fn space(dim: usize) -> impl Strategy<Value = QuadraticSpace> {
    (
        prop::collection::vec(nonzero(), dim),
        prop::collection::vec(scalar(), dim * (dim - 1) / 2),
    )
        .prop_map(move |(d, upper)| {
            let mut p = Matrix::identity(dim);
            let mut it = upper.into_iter();
            for i in 0..dim {
                for j in i + 1..dim {
                    p[(i, j)] = it.next().unwrap();
                }
            }
            let gram = p.transpose().mul(&Matrix::diagonal(&d)).unwrap().mul(&p).unwrap();
            QuadraticSpace::new(gram).unwrap()
        })
}

fn cubic(dim: usize) -> impl Strategy<Value = CubicForm> {
    let mut slots = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            for k in j..dim {
                slots.push([i, j, k]);
            }
        }
    }
    prop::collection::vec(scalar(), slots.len()).prop_map(move |vals| {
        CubicForm::from_trilinear(dim, slots.iter().copied().zip(vals)).unwrap()
    })
}

fn signed_permutation(dim: usize) -> impl Strategy<Value = Matrix> {
    (Just((0..dim).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), dim))
        .prop_map(move |(perm, signs)| {
            let mut m = Matrix::zeros(dim, dim);
            for (col, (&row, neg)) in perm.iter().zip(signs).enumerate() {
                m[(row, col)] = FieldElem::from_int(if neg { -1 } else { 1 });
            }
            m
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn raise_inverts_lower(q in space(3), v in vector(3)) {
        prop_assert_eq!(q.raise(&q.lower(&v).unwrap()).unwrap(), v);
    }

    #[test]
    fn polar_form_is_symmetric_and_bilinear(
        q in space(3), x in vector(3), y in vector(3), z in vector(3), k in scalar()
    ) {
        prop_assert_eq!(q.q_polar(&x, &y).unwrap(), q.q_polar(&y, &x).unwrap());
        let mut xk = x.scale(&k);
        xk.axpy(&FieldElem::one(), &z);
        let lhs = q.q_polar(&xk, &y).unwrap();
        let rhs = k * q.q_polar(&x, &y).unwrap() + q.q_polar(&z, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(q.q_polar(&x, &x).unwrap(), q.q_eval(&x).unwrap());
    }

    #[test]
    fn orth_complement_is_orthogonal_and_nondegenerate(q in space(4), v in vector(4)) {
        prop_assume!(!q.q_eval(&v).unwrap().is_zero());
        let basis = q.orth_complement(&v).unwrap();
        prop_assert_eq!(basis.len(), 3);
        for b in &basis {
            prop_assert!(q.q_polar(b, &v).unwrap().is_zero());
        }
        let restricted = q.restrict(&basis).unwrap();
        prop_assert!(!restricted.gram().determinant().unwrap().is_zero());
    }

    #[test]
    fn verified_isometries_preserve_the_form(m in signed_permutation(4), x in vector(4)) {
        let e = QuadraticSpace::euclidean(4).unwrap();
        let iso = Isometry::new(e.clone(), e.clone(), m).unwrap();
        prop_assert!(iso.verify().passed());
        prop_assert_eq!(e.q_eval(&iso.apply(&x).unwrap()).unwrap(), e.q_eval(&x).unwrap());
    }

    #[test]
    fn polarizations_are_symmetric(u in cubic(3), q in space(3), x in vector(3), y in vector(3), z in vector(3)) {
        let t = u.trilinear(&x, &y, &z).unwrap();
        prop_assert_eq!(&t, &u.trilinear(&y, &z, &x).unwrap());
        prop_assert_eq!(&t, &u.trilinear(&z, &y, &x).unwrap());
        let h_xy = u.h_bilinear(&q, &x, &y).unwrap();
        prop_assert_eq!(&h_xy, &u.h_bilinear(&q, &y, &x).unwrap());
        prop_assert_eq!(q.q_polar(&h_xy, &z).unwrap(), t.clone() / FieldElem::from_int(2));
    }

    #[test]
    fn euler_chain(u in cubic(3), x in vector(3)) {
        let value = u.eval(&x).unwrap();
        prop_assert_eq!(u.trilinear(&x, &x, &x).unwrap(), FieldElem::from_int(6) * &value);
        prop_assert_eq!(u.dir_deriv(&x, &x).unwrap(), FieldElem::from_int(3) * &value);
    }

    #[test]
    fn hessian_is_self_adjoint(u in cubic(3), q in space(3), x in vector(3), y in vector(3), z in vector(3)) {
        let lhs = q.q_polar(&x, &u.h_bilinear(&q, &y, &z).unwrap()).unwrap();
        let rhs = q.q_polar(&u.h_bilinear(&q, &x, &y).unwrap(), &z).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(u.h_bilinear(&q, &x, &x).unwrap(), u.grad(&q, &x).unwrap());
    }

    #[test]
    fn gradient_matches_finite_differences(u in cubic(3), point in prop::collection::vec(-3i64..=3, 3)) {
        let e = QuadraticSpace::euclidean(3).unwrap();
        let x = Vector::from_ints(&point);
        let grad = u.grad(&e, &x).unwrap();
        let coeffs = u.to_polynomial();
        let f = |p: &[f64]| -> f64 {
            coeffs
                .terms()
                .map(|(m, c)| {
                    c.to_f64().unwrap()
                        * m.exponents().iter().zip(p).map(|(&k, v)| v.powi(k as i32)).product::<f64>()
                })
                .sum()
        };
        let step = 1e-4;
        for i in 0..3 {
            let mut up: Vec<f64> = point.iter().map(|&v| v as f64).collect();
            let mut down = up.clone();
            up[i] += step;
            down[i] -= step;
            let numeric = (f(&up) - f(&down)) / (2.0 * step);
            let exact = grad.coords()[i].to_f64().unwrap();
            prop_assert!((numeric - exact).abs() <= 1e-6 * exact.abs().max(1.0), "{numeric} vs {exact}");
        }
    }

    #[test]
    fn pushforward_then_pullback_is_identity(u in cubic(3), m in signed_permutation(3)) {
        let e = QuadraticSpace::euclidean(3).unwrap();
        let iso = Isometry::new(e.clone(), e, m.clone()).unwrap();
        let moved = u.pushforward(&iso).unwrap();
        prop_assert_eq!(moved.pullback(&m).unwrap(), u);
    }

    #[test]
    fn eiconal_status_is_transport_invariant(
        m in signed_permutation(5),
        doubled in any::<bool>(),
    ) {
        let t = cartan_cubic(1).unwrap();
        let k = FieldElem::from_int(if doubled { 2 } else { 1 });
        let t = EiconalTriple::new(t.space().clone(), t.cubic().scale(&k)).unwrap();
        let e = QuadraticSpace::euclidean(5).unwrap();
        let moved = transport(&t, &Isometry::new(e.clone(), e, m).unwrap()).unwrap();
        prop_assert_eq!(verify_eiconal(&t).passed(), verify_eiconal(&moved).passed());
        prop_assert_eq!(verify_eiconal(&moved).passed(), !doubled);
    }
}

#[test]
fn coefficient_pass_implies_point_pass() {
    let cfg = SampleConfig::default();
    for t in [diagonal_cubic(), cartan_cubic(1).unwrap(), cartan_cubic(2).unwrap()] {
        assert!(verify_eiconal(&t).passed());
        let outcome = point_check(&t, &cfg);
        assert!(outcome.passed());
        assert_eq!(outcome.samples, Some(100));
    }
}

#[test]
fn graded_lex_witnesses_are_capped() {
    let t = cartan_cubic(2).unwrap();
    let doubled = EiconalTriple::new(t.space().clone(), t.cubic().scale(&FieldElem::from_int(2))).unwrap();
    let cert = verify_eiconal(&doubled);
    assert!(!cert.passed());
    assert_eq!(cert.witnesses.len(), 10);
    let degrees: BTreeMap<usize, usize> = cert
        .witnesses
        .iter()
        .map(|w| (w.monomial.iter().map(|&e| e as usize).sum::<usize>(), 1))
        .collect();
    assert_eq!(degrees.keys().copied().collect::<Vec<_>>(), vec![4]);
}
