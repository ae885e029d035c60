//! The real division algebras ℝ, ℂ, ℍ, 𝕆 by Cayley–Dickson doubling,
//! `(a, b)(c, d) = (ac − d̄b, da + bc̄)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::FieldElem;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisionAlgebraElem {
    coords: Vec<FieldElem>,
}

fn check_d(d: usize) -> Result<()> {
    if matches!(d, 1 | 2 | 4 | 8) {
        Ok(())
    } else {
        Err(Error::InvalidDivisionDim(d))
    }
}

impl DivisionAlgebraElem {
    pub fn new(coords: Vec<FieldElem>) -> Result<Self> {
        check_d(coords.len())?;
        Ok(DivisionAlgebraElem { coords })
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::new(vec![FieldElem::zero(); d])
    }

    pub fn one(d: usize) -> Result<Self> {
        Self::unit(d, 0)
    }

    /// The `s`-th basis unit; `unit(d, 0)` is the real unit.
    pub fn unit(d: usize, s: usize) -> Result<Self> {
        check_d(d)?;
        if s >= d {
            return Err(Error::IndexOutOfRange { index: s, dim: d });
        }
        let mut coords = vec![FieldElem::zero(); d];
        coords[s] = FieldElem::one();
        Ok(DivisionAlgebraElem { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| FieldElem::from_int(c)).collect())
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn re(&self) -> &FieldElem {
        &self.coords[0]
    }

    pub fn conj(&self) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { c.clone() } else { -c })
            .collect();
        DivisionAlgebraElem { coords }
    }

    /// `|x|² = Σ xᵢ²`.
    pub fn norm_sq(&self) -> FieldElem {
        self.coords.iter().map(|c| c * c).sum()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.d() == other.d() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.d(),
                found: other.d(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(DivisionAlgebraElem {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(DivisionAlgebraElem {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, k: &FieldElem) -> Self {
        DivisionAlgebraElem {
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(DivisionAlgebraElem {
            coords: cd_mul(&self.coords, &other.coords),
        })
    }
}

fn cd_conj(x: &[FieldElem]) -> Vec<FieldElem> {
    x.iter()
        .enumerate()
        .map(|(i, c)| if i == 0 { c.clone() } else { -c })
        .collect()
}

fn cd_mul(x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
    if x.len() == 1 {
        return vec![&x[0] * &y[0]];
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let ac = cd_mul(a, c);
    let dbar_b = cd_mul(&cd_conj(d), b);
    let da = cd_mul(d, a);
    let b_cbar = cd_mul(b, &cd_conj(c));
    ac.iter()
        .zip(&dbar_b)
        .map(|(p, q)| p - q)
        .chain(da.iter().zip(&b_cbar).map(|(p, q)| p + q))
        .collect()
}

/// `re((u_a u_b) u_c)` for every triple of basis units, as
/// `((a, b, c), ±1)` for the nonzero ones.
pub fn real_triple_products(d: usize) -> Result<Vec<([usize; 3], FieldElem)>> {
    check_d(d)?;
    let units: Vec<_> = (0..d)
        .map(|s| DivisionAlgebraElem::unit(d, s))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let ab = units[a].mul(&units[b])?;
            for c in 0..d {
                let re = ab.mul(&units[c])?.re().clone();
                if !re.is_zero() {
                    out.push(([a, b, c], re));
                }
            }
        }
    }
    Ok(out)
}

impl fmt::Debug for DivisionAlgebraElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coords).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(d: usize, s: usize) -> DivisionAlgebraElem {
        DivisionAlgebraElem::unit(d, s).unwrap()
    }

    #[test]
    fn quaternion_i_j_is_k() {
        assert_eq!(unit(4, 1).mul(&unit(4, 2)).unwrap(), unit(4, 3));
        assert_eq!(unit(4, 2).mul(&unit(4, 1)).unwrap(), unit(4, 3).scale(&FieldElem::from_int(-1)));
    }

    #[test]
    fn octonion_e1_e2_is_e3() {
        assert_eq!(unit(8, 1).mul(&unit(8, 2)).unwrap(), unit(8, 3));
    }

    #[test]
    fn octonions_are_not_associative() {
        let (a, b, c) = (unit(8, 1), unit(8, 2), unit(8, 4));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert_ne!(left, right);
    }

    #[test]
    fn invalid_dimension() {
        assert_eq!(
            DivisionAlgebraElem::from_ints(&[1, 2, 3]).unwrap_err(),
            Error::InvalidDivisionDim(3)
        );
        assert!(unit(2, 0).mul(&unit(4, 0)).is_err());
    }

    #[test]
    fn conjugate_reverses_products() {
        let x = DivisionAlgebraElem::from_ints(&[1, 2, -3, 4, 0, 5, -1, 2]).unwrap();
        let y = DivisionAlgebraElem::from_ints(&[3, -1, 0, 2, 7, 1, 1, -4]).unwrap();
        assert_eq!(x.mul(&y).unwrap().conj(), y.conj().mul(&x.conj()).unwrap());
    }

    fn elem(d: usize) -> impl Strategy<Value = DivisionAlgebraElem> {
        prop::collection::vec((-9i64..=9, 1i64..=4), d).prop_map(|v| {
            DivisionAlgebraElem::new(v.into_iter().map(|(p, q)| FieldElem::ratio(p, q)).collect())
                .unwrap()
        })
    }

    fn triple() -> impl Strategy<Value = (DivisionAlgebraElem, DivisionAlgebraElem, DivisionAlgebraElem)> {
        prop_oneof![Just(1usize), Just(2), Just(4), Just(8)]
            .prop_flat_map(|d| (elem(d), elem(d), elem(d)))
    }

    proptest! {
        #[test]
        fn composition_law((x, y, _) in triple()) {
            prop_assert_eq!(x.mul(&y).unwrap().norm_sq(), x.norm_sq() * y.norm_sq());
        }

        #[test]
        fn real_part_is_associative((x, y, z) in triple()) {
            let left = x.mul(&y).unwrap().mul(&z).unwrap();
            let right = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert_eq!(left.re(), right.re());
        }

        #[test]
        fn alternative_law((x, y, _) in triple()) {
            let xx_y = x.mul(&x).unwrap().mul(&y).unwrap();
            let x_xy = x.mul(&x.mul(&y).unwrap()).unwrap();
            prop_assert_eq!(xx_y, x_xy);
        }
    }
}
