//! Check outcomes, reports, and reproducible random sampling.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::Vector;
use crate::poly::PolynomialMap;
use crate::scalar::FieldElem;

/// Witnesses listed for a failing coefficient-level check.
pub const MAX_WITNESSES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

/// How a check was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    /// Exact evaluation at seeded random rational points.
    Points,
    /// Full expansion into a coefficient map.
    Coefficients,
    /// A finite exact comparison (tensors, basis vectors, single values).
    Exact,
}

/// One nonzero coefficient of a residual that should have vanished.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialWitness {
    pub monomial: Vec<u8>,
    pub coeff: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The first sample (by index) at which a pointwise identity failed.
    Sample { index: usize, points: Vec<Vector> },
    /// Leading nonzero coefficients of the residual, in graded-lex order.
    Monomials {
        total: usize,
        terms: Vec<MonomialWitness>,
    },
    Message { text: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub mode: CheckMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    pub fn pass(name: impl Into<String>, mode: CheckMode) -> Self {
        CheckOutcome {
            name: name.into(),
            status: CheckStatus::Pass,
            mode,
            samples: None,
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, mode: CheckMode, witness: Witness) -> Self {
        CheckOutcome {
            name: name.into(),
            status: CheckStatus::Fail,
            mode,
            samples: None,
            witness: Some(witness),
        }
    }

    /// An exact yes/no comparison, with a message attached on failure.
    pub fn exact(name: impl Into<String>, ok: bool, message: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(name, CheckMode::Exact)
        } else {
            Self::fail(name, CheckMode::Exact, Witness::Message { text: message() })
        }
    }

    /// A check that could not be carried out at all.
    pub fn error(name: impl Into<String>, mode: CheckMode, err: &crate::Error) -> Self {
        Self::fail(
            name,
            mode,
            Witness::Message {
                text: err.to_string(),
            },
        )
    }

    /// Passes iff every coefficient map in `residuals` is empty.
    pub fn from_residuals(name: impl Into<String>, residuals: Result<Vec<PolynomialMap>>) -> Self {
        let name = name.into();
        let residuals = match residuals {
            Ok(r) => r,
            Err(e) => return Self::error(name, CheckMode::Coefficients, &e),
        };
        let total: usize = residuals.iter().map(PolynomialMap::len).sum();
        if total == 0 {
            return Self::pass(name, CheckMode::Coefficients);
        }
        Self::fail(
            name,
            CheckMode::Coefficients,
            Witness::Monomials {
                total,
                terms: leading_witnesses(&residuals),
            },
        )
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Up to [`MAX_WITNESSES`] nonzero terms, leading terms first.
pub fn leading_witnesses(residuals: &[PolynomialMap]) -> Vec<MonomialWitness> {
    let mut terms: Vec<_> = residuals.iter().flat_map(PolynomialMap::terms).collect();
    terms.sort_by(|a, b| b.0.cmp(a.0));
    terms
        .into_iter()
        .take(MAX_WITNESSES)
        .map(|(m, c)| MonomialWitness {
            monomial: m.exponents().to_vec(),
            coeff: c.clone(),
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: CheckOutcome) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let mode = match c.mode {
                CheckMode::Points => format!("points x{}", c.samples.unwrap_or(0)),
                CheckMode::Coefficients => "coefficients".to_string(),
                CheckMode::Exact => "exact".to_string(),
            };
            writeln!(f, "{status} {} ({mode})", c.name)?;
        }
        Ok(())
    }
}

/// Parameters shared by every randomized check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub samples: usize,
    /// Largest dimension for which expensive identities are also expanded
    /// at coefficient level.
    pub max_expand_dim: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            seed: 0,
            samples: 100,
            max_expand_dim: 27,
        }
    }
}

impl SampleConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        SampleConfig {
            seed,
            samples,
            ..Self::default()
        }
    }

    /// The random source for sample `index`; independent of evaluation order.
    pub fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }

    /// `count` random rational vectors of dimension `dim` for sample `index`.
    pub fn points(&self, index: usize, dim: usize, count: usize) -> Vec<Vector> {
        let mut rng = self.rng(index);
        (0..count).map(|_| random_vector(&mut rng, dim)).collect()
    }

    /// Runs `check` on `arity` random vectors per sample, in parallel.
    ///
    /// The reported failure is always the lowest failing sample index.
    pub fn run<F>(&self, name: impl Into<String>, dim: usize, arity: usize, check: F) -> CheckOutcome
    where
        F: Fn(&[Vector]) -> Result<bool> + Sync,
    {
        let name = name.into();
        let results: Vec<(usize, Result<bool>)> = (0..self.samples)
            .into_par_iter()
            .map(|i| (i, check(&self.points(i, dim, arity))))
            .collect();
        let first_bad = results
            .into_iter()
            .find(|(_, r)| !matches!(r, Ok(true)));
        let mut outcome = match first_bad {
            None => CheckOutcome::pass(&name, CheckMode::Points),
            Some((_, Err(e))) => CheckOutcome::error(&name, CheckMode::Points, &e),
            Some((index, Ok(_))) => CheckOutcome::fail(
                &name,
                CheckMode::Points,
                Witness::Sample {
                    index,
                    points: self.points(index, dim, arity),
                },
            ),
        };
        outcome.samples = Some(self.samples);
        outcome
    }
}

/// A random rational in `{p/q : |p| ≤ 9, 1 ≤ q ≤ 4}`.
pub fn random_rational<R: Rng>(rng: &mut R) -> FieldElem {
    let p = rng.gen_range(-9i64..=9);
    let q = rng.gen_range(1i64..=4);
    FieldElem::ratio(p, q)
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| random_rational(rng)).collect())
}
