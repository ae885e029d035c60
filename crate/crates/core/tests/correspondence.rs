use cubic_jordan::catalog::{cartan_cubic, diagonal_cubic, herm3, spin_cubic};
use cubic_jordan::correspondence::{
    alpha_with_basis, equivalence_to_isomorphism, morphism_to_isometry, roundtrip_alpha_beta,
    roundtrip_beta_alpha, verify_morphism,
};
use cubic_jordan::eiconal::{check_gradient_identities, transport};
use cubic_jordan::report::CheckMode;
use cubic_jordan::{
    alpha, beta, verify_eiconal, AlgebraMorphism, CubicForm, CubicJordanAlgebra, EiconalTriple,
    Error, FieldElem, Isometry, Matrix, QuadraticSpace, SampleConfig, Vector,
};

fn fi(n: i64) -> FieldElem {
    FieldElem::from_int(n)
}

fn cfg() -> SampleConfig {
    SampleConfig::new(0, 40)
}

fn sign_flip(dim: usize, axis: usize) -> Isometry {
    let e = QuadraticSpace::euclidean(dim).unwrap();
    let mut m = Matrix::identity(dim);
    m[(axis, axis)] = fi(-1);
    Isometry::new(e.clone(), e, m).unwrap()
}

/// A fixed signed permutation of ℝ⁵.
fn scramble() -> Isometry {
    let e = QuadraticSpace::euclidean(5).unwrap();
    let m = Matrix::from_int_rows(&[
        &[0, 0, 0, -1, 0],
        &[1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1],
        &[0, -1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
    ]);
    Isometry::new(e.clone(), e, m).unwrap()
}

fn componentwise_cube() -> CubicJordanAlgebra {
    let norm = CubicForm::from_trilinear(3, [([0, 1, 2], fi(1))]).unwrap();
    let entries = (0..3).map(|i| ([i, i, i], fi(1)));
    CubicJordanAlgebra::with_structure_constants(norm, Vector::from_ints(&[1, 1, 1]), entries).unwrap()
}

#[test]
fn cartan_4_gradient_identities_vanish_identically() {
    let t = cartan_cubic(4).unwrap();
    let report = check_gradient_identities(&t, &SampleConfig::new(0, 10)).unwrap();
    assert!(report.passed(), "{report}");
    let expanded = report.checks.iter().filter(|c| c.mode == CheckMode::Coefficients).count();
    assert_eq!(expanded, 3);
}

#[test]
fn spin_2_is_the_diagonal_cubic() {
    let spin = spin_cubic(2).unwrap();
    let diag = diagonal_cubic();
    let iso = Isometry::identity(diag.space());
    assert_eq!(transport(&spin, &iso).unwrap(), diag);
    let (psi, report) = equivalence_to_isomorphism(&spin, &diag, &iso, &cfg()).unwrap();
    assert!(report.passed());
    assert_eq!(psi.matrix(), &Matrix::identity(3));
}

#[test]
fn coordinate_swap_of_diagonal_gives_isomorphism_and_back() {
    let diag = diagonal_cubic();
    let e = QuadraticSpace::euclidean(2).unwrap();
    let swap = Isometry::new(e.clone(), e, Matrix::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap();
    let swapped = transport(&diag, &swap).unwrap();
    let (psi, report) = equivalence_to_isomorphism(&diag, &swapped, &swap, &cfg()).unwrap();
    assert!(report.passed(), "{report}");
    let recovered = morphism_to_isometry(&psi).unwrap();
    assert_eq!(recovered.matrix(), swap.matrix());
}

#[test]
fn sign_flip_of_cartan_1_gives_isomorphism() {
    let u1 = cartan_cubic(1).unwrap();
    let flip = sign_flip(5, 4);
    let flipped = transport(&u1, &flip).unwrap();
    assert!(verify_eiconal(&flipped).passed());
    let (psi, report) = equivalence_to_isomorphism(&u1, &flipped, &flip, &cfg()).unwrap();
    assert!(report.passed(), "{report}");

    // restricted back to the trace-free parts, the morphism carries one cubic to the other
    let iso = morphism_to_isometry(&psi).unwrap();
    let a1 = alpha(psi.source()).unwrap();
    let a2 = alpha(psi.target()).unwrap();
    assert_eq!(&a1.cubic().pushforward(&iso).unwrap(), a2.cubic());
}

#[test]
fn equivalence_requires_matching_cubics() {
    let u1 = cartan_cubic(1).unwrap();
    let flip = sign_flip(5, 4);
    assert_eq!(
        equivalence_to_isomorphism(&u1, &u1, &flip, &cfg()).unwrap_err(),
        Error::CubicMismatch
    );
}

#[test]
fn alpha_beta_is_exact_on_catalog_and_moved_triples() {
    let mut triples = vec![diagonal_cubic(), cartan_cubic(8).unwrap()];
    triples.extend((1..=5).map(|n| spin_cubic(n).unwrap()));
    triples.push(transport(&cartan_cubic(1).unwrap(), &scramble()).unwrap());
    for t in &triples {
        assert!(roundtrip_alpha_beta(t).unwrap().passed());
    }
}

#[test]
fn beta_alpha_morphisms() {
    for (name, alg) in [
        ("herm3:1", herm3(1).unwrap()),
        ("beta(cartan:2)", beta(&cartan_cubic(2).unwrap()).unwrap()),
    ] {
        let (phi, report) = roundtrip_beta_alpha(&alg, &cfg()).unwrap();
        assert!(report.passed(), "{name}: {report}");
        let unit = Vector::basis(alg.dim(), 0);
        assert_eq!(&phi.apply(&unit).unwrap(), alg.unit(), "{name}");
        assert!(verify_morphism(&phi, &cfg()).get("norm: N(x) = N(phi(x))").unwrap().passed());
    }
}

#[test]
fn alpha_of_componentwise_cube_is_a_plane_triple() {
    let (t, basis) = alpha_with_basis(&componentwise_cube()).unwrap();
    assert_eq!(t.dim(), 2);
    assert_eq!(basis.len(), 2);
    assert!(verify_eiconal(&t).passed());
    let (phi, report) = roundtrip_beta_alpha(&componentwise_cube(), &cfg()).unwrap();
    assert!(report.passed(), "{report}");
    assert_eq!(phi.matrix().column(0), Vector::from_ints(&[1, 1, 1]));
}

#[test]
fn beta_of_cartan_2_satisfies_trace_identities() {
    let alg = beta(&cartan_cubic(2).unwrap()).unwrap();
    assert_eq!(alg.dim(), 9);
    assert!(alg.check_trace_identities(&SampleConfig::default()).passed());
}

#[test]
fn herm3_complex_jordan_identity_at_100_pairs() {
    let alg = herm3(2).unwrap();
    assert_eq!(alg.dim(), 9);
    let outcome = alg.check_jordan_identity(&SampleConfig::default());
    assert!(outcome.passed());
    assert_eq!(outcome.samples, Some(100));
}

#[test]
fn beta_rejects_non_eiconal_and_morphism_checks_shape() {
    let t = diagonal_cubic();
    let doubled = EiconalTriple::new(t.space().clone(), t.cubic().scale(&fi(2))).unwrap();
    assert!(matches!(beta(&doubled), Err(Error::NotEiconal(_))));
    let a = herm3(1).unwrap();
    let b = beta(&t).unwrap();
    assert!(AlgebraMorphism::new(a, b, Matrix::identity(6)).is_err());
}
