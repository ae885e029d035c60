//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in a `BTreeMap` under graded lexicographic order, so
//! iteration (and therefore every certificate built from it) is
//! deterministic. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::linalg::{Matrix, Vector};
use crate::scalar::FieldElem;

/// Exponent vector of a monomial `x₁^a₁ ⋯ x_n^a_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u8]>);

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars].into_boxed_slice())
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        Monomial(exps.into())
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    fn eval(&self, point: &[FieldElem]) -> FieldElem {
        let mut acc = FieldElem::one();
        for (x, &e) in point.iter().zip(self.0.iter()) {
            for _ in 0..e {
                acc *= x;
            }
        }
        acc
    }
}

/// Graded lexicographic: total degree first, then the exponent of `x₁`,
/// then `x₂`, and so on. Larger compares greater.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("·")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial in `n_vars` variables as an explicit coefficient map.
#[derive(Clone, PartialEq, Eq)]
pub struct PolynomialMap {
    n_vars: usize,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl PolynomialMap {
    pub fn zero(n_vars: usize) -> Self {
        PolynomialMap {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: FieldElem) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::one(n_vars), c);
        p
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::var(n_vars, i), FieldElem::one());
        p
    }

    /// The linear form `Σ cᵢxᵢ`.
    pub fn linear(coeffs: &Vector) -> Self {
        let n = coeffs.dim();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    /// The quadratic form `xᵀ M x`.
    pub fn quadratic(m: &Matrix) -> Self {
        let n = m.rows();
        let mut p = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let c = &m[(i, j)];
                if !c.is_zero() {
                    let mono = Monomial::var(n, i).mul(&Monomial::var(n, j));
                    p.add_term(mono, c.clone());
                }
            }
        }
        p
    }

    pub fn from_terms(n_vars: usize, terms: impl IntoIterator<Item = (Monomial, FieldElem)>) -> Self {
        let mut p = Self::zero(n_vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), n_vars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree among the terms (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms.keys().next_back().map_or(0, Monomial::degree)
    }

    pub fn is_homogeneous(&self, degree: usize) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Terms in descending graded lexicographic order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter().rev()
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &PolynomialMap) {
        debug_assert_eq!(self.n_vars, other.n_vars);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += k·other`
    pub fn add_scaled(&mut self, k: &FieldElem, other: &PolynomialMap) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn add(&self, other: &PolynomialMap) -> PolynomialMap {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &PolynomialMap) -> PolynomialMap {
        let mut out = self.clone();
        out.add_scaled(&FieldElem::from_int(-1), other);
        out
    }

    pub fn scale(&self, k: &FieldElem) -> PolynomialMap {
        if k.is_zero() {
            return Self::zero(self.n_vars);
        }
        PolynomialMap {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &PolynomialMap) -> PolynomialMap {
        let mut acc = ProductAccumulator::new(self.n_vars);
        acc.add_product(&FieldElem::one(), self, other);
        acc.finish()
    }

    /// ∂/∂x_i
    pub fn partial(&self, i: usize) -> PolynomialMap {
        let mut out = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[i] -= 1;
            out.terms
                .insert(Monomial(d), c * &FieldElem::from_int(e as i64));
        }
        out
    }

    pub fn eval(&self, point: &[FieldElem]) -> FieldElem {
        assert_eq!(point.len(), self.n_vars, "point arity mismatch");
        let mut acc = FieldElem::zero();
        for (m, c) in &self.terms {
            acc.add_mul(c, &m.eval(point));
        }
        acc
    }
}

impl fmt::Debug for PolynomialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})·{m:?}")?;
        }
        Ok(())
    }
}

/// Accumulates `Σ k·p·q` into a hash map before ordering the result once.
pub(crate) struct ProductAccumulator {
    n_vars: usize,
    acc: HashMap<Monomial, FieldElem>,
}

impl ProductAccumulator {
    pub(crate) fn new(n_vars: usize) -> Self {
        ProductAccumulator {
            n_vars,
            acc: HashMap::new(),
        }
    }

    pub(crate) fn add_product(&mut self, k: &FieldElem, p: &PolynomialMap, q: &PolynomialMap) {
        if k.is_zero() {
            return;
        }
        for (m1, c1) in &p.terms {
            let kc1 = c1 * k;
            for (m2, c2) in &q.terms {
                self.acc
                    .entry(m1.mul(m2))
                    .or_insert_with(FieldElem::zero)
                    .add_mul(&kc1, c2);
            }
        }
    }

    pub(crate) fn finish(self) -> PolynomialMap {
        PolynomialMap {
            n_vars: self.n_vars,
            terms: self.acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// `M·p` for a vector of polynomials.
pub fn mat_vec(m: &Matrix, p: &[PolynomialMap]) -> Vec<PolynomialMap> {
    let n_vars = p.first().map_or(0, PolynomialMap::n_vars);
    (0..m.rows())
        .map(|i| {
            let mut out = PolynomialMap::zero(n_vars);
            for (j, pj) in p.iter().enumerate() {
                out.add_scaled(&m[(i, j)], pj);
            }
            out
        })
        .collect()
}

/// `pᵀ M q` for vectors of polynomials.
pub fn bilinear(m: &Matrix, p: &[PolynomialMap], q: &[PolynomialMap]) -> PolynomialMap {
    let n_vars = p.first().map_or(0, PolynomialMap::n_vars);
    let mut acc = ProductAccumulator::new(n_vars);
    for (i, pi) in p.iter().enumerate() {
        if pi.is_zero() {
            continue;
        }
        for (j, qj) in q.iter().enumerate() {
            acc.add_product(&m[(i, j)], pi, qj);
        }
    }
    acc.finish()
}

/// The coordinate functions `(x₁, …, x_n)`.
pub fn coordinates(n_vars: usize) -> Vec<PolynomialMap> {
    (0..n_vars).map(|i| PolynomialMap::var(n_vars, i)).collect()
}
