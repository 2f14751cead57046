//! Normalized ℤ/m-valued 2-cochains on a subgroup.
//!
//! Multiplicative k×-valued cocycles are represented additively: a residue
//! `r` mod `m` stands for the root of unity `exp(2πi·r/m)`. Cochains are
//! normalized (zero whenever an argument is the identity), which every
//! cohomology class admits. Values are stored densely, indexed by position
//! in the subgroup's sorted member list.
//!
//! Conventions, fixed once for the whole crate: `ᵃK = a·K·a⁻¹` and
//! `xᵃ = a⁻¹·x·a`, so conjugating a cochain on `K` by `a` yields one on
//! `ᵃK` with `cᵃ(x, y) = c(xᵃ, yᵃ)`.

use thiserror::Error;

use crate::group::GroupError;
use crate::subgroup::Subgroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CocycleError {
    #[error("cochains live on different subgroups")]
    SubgroupMismatch,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: i64, right: i64 },
    #[error("target subgroup is not contained in the cochain's subgroup")]
    NotContained,
    #[error("cochain is not normalized at the identity")]
    NotNormalized,
    #[error("value out of range for modulus {modulus}")]
    ValueOutOfRange { modulus: i64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A normalized 1-cochain: a function on subgroup members vanishing at the
/// identity, with values in ℤ/m.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain1 {
    subgroup: Subgroup,
    modulus: i64,
    values: Vec<i64>,
}

impl Cochain1 {
    pub fn zero(subgroup: Subgroup, modulus: i64) -> Self {
        let n = subgroup.order();
        Cochain1 {
            subgroup,
            modulus,
            values: vec![0; n],
        }
    }

    pub fn from_values(
        subgroup: Subgroup,
        modulus: i64,
        values: Vec<i64>,
    ) -> Result<Self, CocycleError> {
        assert_eq!(values.len(), subgroup.order(), "value count mismatch");
        if values[0] != 0 {
            return Err(CocycleError::NotNormalized);
        }
        if values.iter().any(|&v| v < 0 || v >= modulus) {
            return Err(CocycleError::ValueOutOfRange { modulus });
        }
        Ok(Cochain1 {
            subgroup,
            modulus,
            values,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn value(&self, elem: usize) -> i64 {
        let i = self.subgroup.local_index(elem).expect("element not in subgroup");
        self.values[i]
    }

    /// The coboundary `(df)(g, h) = f(g) + f(h) − f(gh)`, always a cocycle.
    pub fn coboundary(&self) -> Cochain2 {
        let sub = &self.subgroup;
        let g = sub.group();
        let h = sub.order();
        let m = self.modulus;
        let mut values = vec![0i64; h * h];
        for a in 0..h {
            for b in 0..h {
                let prod = g.mul(sub.members()[a], sub.members()[b]);
                let pl = sub.local_index(prod).expect("subgroup closed");
                values[a * h + b] =
                    (self.values[a] + self.values[b] - self.values[pl]).rem_euclid(m);
            }
        }
        Cochain2 {
            subgroup: self.subgroup.clone(),
            modulus: m,
            values,
        }
    }

    /// Transport along conjugation: a cochain on `ᵃH` with `fᵃ(x) = f(xᵃ)`.
    pub fn conjugate(&self, a: usize) -> Result<Cochain1, CocycleError> {
        let g = self.subgroup.group().clone();
        g.check_index(a)?;
        let target = self.subgroup.conjugate(a)?;
        let ainv = g.inv(a);
        let values = target
            .members()
            .iter()
            .map(|&x| self.value(g.mul(g.mul(ainv, x), a)))
            .collect();
        Ok(Cochain1 {
            subgroup: target,
            modulus: self.modulus,
            values,
        })
    }
}

/// A normalized 2-cochain on a subgroup, values in ℤ/m, stored densely
/// (row-major over local member positions).
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain2 {
    subgroup: Subgroup,
    modulus: i64,
    values: Vec<i64>,
}

impl std::fmt::Debug for Cochain2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Cochain2(|H|={}, m={}, {:?})",
            self.subgroup.order(),
            self.modulus,
            self.values
        )
    }
}

impl Cochain2 {
    pub fn zero(subgroup: Subgroup, modulus: i64) -> Self {
        let n = subgroup.order();
        Cochain2 {
            subgroup,
            modulus,
            values: vec![0; n * n],
        }
    }

    /// Builds from a dense row-major value table over local indices,
    /// checking normalization and value range.
    pub fn from_values(
        subgroup: Subgroup,
        modulus: i64,
        values: Vec<i64>,
    ) -> Result<Self, CocycleError> {
        let h = subgroup.order();
        assert_eq!(values.len(), h * h, "value count mismatch");
        for i in 0..h {
            if values[i] != 0 || values[i * h] != 0 {
                return Err(CocycleError::NotNormalized);
            }
        }
        if values.iter().any(|&v| v < 0 || v >= modulus) {
            return Err(CocycleError::ValueOutOfRange { modulus });
        }
        Ok(Cochain2 {
            subgroup,
            modulus,
            values,
        })
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn values_row_major(&self) -> &[i64] {
        &self.values
    }

    #[inline]
    pub(crate) fn value_local(&self, a: usize, b: usize) -> i64 {
        self.values[a * self.subgroup.order() + b]
    }

    /// Value at a pair of global element indices (both must be members).
    pub fn value(&self, x: usize, y: usize) -> i64 {
        let a = self.subgroup.local_index(x).expect("element not in subgroup");
        let b = self.subgroup.local_index(y).expect("element not in subgroup");
        self.value_local(a, b)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Checks `c(g,h) + c(gh,k) = c(h,k) + c(g,hk)` over every member triple.
    pub fn is_cocycle(&self) -> bool {
        let sub = &self.subgroup;
        let grp = sub.group();
        let h = sub.order();
        let m = self.modulus;
        let local_mul = |a: usize, b: usize| -> usize {
            sub.local_index(grp.mul(sub.members()[a], sub.members()[b]))
                .expect("subgroup closed")
        };
        for a in 0..h {
            for b in 0..h {
                let ab = local_mul(a, b);
                for c in 0..h {
                    let bc = local_mul(b, c);
                    let lhs = self.value_local(a, b) + self.value_local(ab, c);
                    let rhs = self.value_local(b, c) + self.value_local(a, bc);
                    if (lhs - rhs).rem_euclid(m) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Pointwise restriction to a subgroup `L ≤ H`.
    pub fn restrict(&self, l: &Subgroup) -> Result<Cochain2, CocycleError> {
        if !l.is_subset_of(&self.subgroup) {
            return Err(CocycleError::NotContained);
        }
        let n = l.order();
        let mut values = vec![0i64; n * n];
        for a in 0..n {
            for b in 0..n {
                values[a * n + b] = self.value(l.members()[a], l.members()[b]);
            }
        }
        Ok(Cochain2 {
            subgroup: l.clone(),
            modulus: self.modulus,
            values,
        })
    }

    /// Transport to `ᵃK = aKa⁻¹`: the cochain `cᵃ(x, y) = c(xᵃ, yᵃ)` with
    /// `xᵃ = a⁻¹xa`. Preserves the cocycle property.
    pub fn conjugate(&self, a: usize) -> Result<Cochain2, CocycleError> {
        let g = self.subgroup.group().clone();
        g.check_index(a)?;
        let target = self.subgroup.conjugate(a)?;
        let ainv = g.inv(a);
        let n = target.order();
        let mut values = vec![0i64; n * n];
        for (i, &x) in target.members().iter().enumerate() {
            let xa = g.mul(g.mul(ainv, x), a);
            for (j, &y) in target.members().iter().enumerate() {
                let ya = g.mul(g.mul(ainv, y), a);
                values[i * n + j] = self.value(xa, ya);
            }
        }
        Ok(Cochain2 {
            subgroup: target,
            modulus: self.modulus,
            values,
        })
    }

    pub fn add(&self, other: &Cochain2) -> Result<Cochain2, CocycleError> {
        if self.subgroup != other.subgroup {
            return Err(CocycleError::SubgroupMismatch);
        }
        if self.modulus != other.modulus {
            return Err(CocycleError::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| (x + y).rem_euclid(self.modulus))
            .collect();
        Ok(Cochain2 {
            subgroup: self.subgroup.clone(),
            modulus: self.modulus,
            values,
        })
    }

    pub fn negate(&self) -> Cochain2 {
        let values = self
            .values
            .iter()
            .map(|&x| (-x).rem_euclid(self.modulus))
            .collect();
        Cochain2 {
            subgroup: self.subgroup.clone(),
            modulus: self.modulus,
            values,
        }
    }

    pub fn scale(&self, k: i64) -> Cochain2 {
        let values = self
            .values
            .iter()
            .map(|&x| {
                x.checked_mul(k)
                    .expect("integer overflow in cochain scaling")
                    .rem_euclid(self.modulus)
            })
            .collect();
        Cochain2 {
            subgroup: self.subgroup.clone(),
            modulus: self.modulus,
            values,
        }
    }

    /// Flattens the nonidentity value grid to the vector the cohomology
    /// linear algebra works on: entry `(a−1)·(h−1) + (b−1)` for local
    /// indices `a, b ≥ 1`.
    pub(crate) fn pair_vector(&self) -> Vec<i64> {
        let h = self.subgroup.order();
        let w = h.saturating_sub(1);
        let mut out = vec![0i64; w * w];
        for a in 1..h {
            for b in 1..h {
                out[(a - 1) * w + (b - 1)] = self.value_local(a, b);
            }
        }
        out
    }

    /// Inverse of [`Cochain2::pair_vector`]; entries are reduced mod m.
    pub(crate) fn from_pair_vector(subgroup: Subgroup, modulus: i64, vec: &[i64]) -> Cochain2 {
        let h = subgroup.order();
        let w = h.saturating_sub(1);
        assert_eq!(vec.len(), w * w, "pair vector length mismatch");
        let mut values = vec![0i64; h * h];
        for a in 1..h {
            for b in 1..h {
                values[a * h + b] = vec[(a - 1) * w + (b - 1)].rem_euclid(modulus);
            }
        }
        Cochain2 {
            subgroup,
            modulus,
            values,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;
    use crate::subgroup::SubgroupClassTable;
    use std::sync::Arc;

    fn c2_in_c4() -> (Subgroup, Subgroup) {
        let g = named_group("C4", 10).unwrap();
        let table = SubgroupClassTable::build(&g);
        let c2 = table.class(1).representative.clone();
        let whole = crate::subgroup::Subgroup::whole(Arc::clone(&g));
        (c2, whole)
    }

    #[test]
    fn zero_cochain_has_zero_coboundary() {
        let (c2, _) = c2_in_c4();
        let f = Cochain1::zero(c2.clone(), 4);
        assert!(f.coboundary().is_zero());
    }

    #[test]
    fn coboundary_on_c2_mod_4() {
        // C2 = {e, x}, f(x) = 1: (df)(x, x) = 1 + 1 − f(e) = 2.
        let (c2, _) = c2_in_c4();
        let f = Cochain1::from_values(c2.clone(), 4, vec![0, 1]).unwrap();
        let df = f.coboundary();
        let x = c2.members()[1];
        assert_eq!(df.value(x, x), 2);
        assert!(df.is_cocycle());
    }

    #[test]
    fn coboundary_on_c2_mod_2_vanishes() {
        let (c2, _) = c2_in_c4();
        let f = Cochain1::from_values(c2.clone(), 2, vec![0, 1]).unwrap();
        assert!(f.coboundary().is_zero());
    }

    #[test]
    fn nontrivial_c2_cochain_is_a_cocycle() {
        let (c2, _) = c2_in_c4();
        let x_local = 1;
        let mut values = vec![0i64; 4];
        values[x_local * 2 + x_local] = 1;
        let c = Cochain2::from_values(c2, 2, values).unwrap();
        assert!(c.is_cocycle());
    }

    #[test]
    fn restriction_to_self_and_trivial() {
        let (c2, whole) = c2_in_c4();
        let f = Cochain1::from_values(whole.clone(), 4, vec![0, 1, 2, 3]).unwrap();
        let c = f.coboundary();
        assert_eq!(c.restrict(&whole).unwrap(), c);
        let trivial = crate::subgroup::Subgroup::trivial(Arc::clone(whole.group()));
        assert!(c.restrict(&trivial).unwrap().is_zero());
        let restricted = c.restrict(&c2).unwrap();
        assert!(restricted.is_cocycle());
    }

    #[test]
    fn conjugation_by_identity_is_identity() {
        let (c2, whole) = c2_in_c4();
        let f = Cochain1::from_values(whole, 4, vec![0, 3, 1, 2]).unwrap();
        let c = f.coboundary().restrict(&c2).unwrap();
        assert_eq!(c.conjugate(0).unwrap(), c);
    }

    #[test]
    fn transport_composition_law() {
        // (cᵃ)ᵇ = c^(ba) on a nonabelian group.
        let g = named_group("S3", 100).unwrap();
        let table = SubgroupClassTable::build(&g);
        let h = table.class(1).representative.clone();
        let m = 6;
        let mut values = vec![0i64; 4];
        values[3] = 5;
        let c = Cochain2::from_values(h, m, values).unwrap();
        for a in 0..g.order() {
            for b in 0..g.order() {
                let two = c.conjugate(a).unwrap().conjugate(b).unwrap();
                let one = c.conjugate(g.mul(b, a)).unwrap();
                assert_eq!(two, one);
            }
        }
    }

    #[test]
    fn add_negate_scale_laws() {
        let (c2, whole) = c2_in_c4();
        let f = Cochain1::from_values(whole, 4, vec![0, 1, 3, 2]).unwrap();
        let c = f.coboundary().restrict(&c2).unwrap();
        let zero = Cochain2::zero(c2, 4);
        assert_eq!(c.add(&zero).unwrap(), c);
        assert!(c.add(&c.negate()).unwrap().is_zero());
        assert!(c.scale(4).is_zero());
    }

    #[test]
    fn mismatched_moduli_rejected() {
        let (c2, _) = c2_in_c4();
        let a = Cochain2::zero(c2.clone(), 4);
        let b = Cochain2::zero(c2, 2);
        assert!(matches!(
            a.add(&b),
            Err(CocycleError::ModulusMismatch { .. })
        ));
    }
}
