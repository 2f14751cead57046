//! Finite permutation groups with fully enumerated multiplication tables.
//!
//! Elements are canonically sorted by image sequence (identity at index 0)
//! and all arithmetic downstream works on element indices, so multiplication
//! and inversion are table lookups.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::groupspec;
use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("image sequence is not a bijection")]
    InvalidPermutation,
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group order exceeds cap {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
    #[error("subgroups belong to different groups")]
    GroupMismatch,
    #[error("set is not a subgroup: {0}")]
    NotASubgroup(&'static str),
    #[error("subgroup is not contained in the target subgroup")]
    NotContained,
    #[error("group spec parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A finite group realized as permutations, with precomputed Cayley and
/// inverse tables for O(1) index arithmetic.
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Permutation>,
    cayley: Vec<u32>,
    inverses: Vec<u32>,
    spec: String,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for FiniteGroup {}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup({:?}, order {})", self.spec, self.order())
    }
}

impl FiniteGroup {
    /// Closes the generators under composition and inversion, then builds the
    /// canonical element list and lookup tables.
    ///
    /// Fails if the closure grows past `order_cap` or the generators disagree
    /// on degree.
    pub fn from_generators(
        degree: usize,
        generators: &[Permutation],
        order_cap: usize,
        spec: impl Into<String>,
    ) -> Result<Arc<Self>, GroupError> {
        if order_cap == 0 {
            return Err(GroupError::OrderCapExceeded { cap: 0 });
        }
        for g in generators {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                });
            }
        }
        // BFS closure; generator set extended with inverses so right
        // multiplication alone reaches every element.
        let mut gens: Vec<Permutation> = Vec::new();
        for g in generators {
            let inv = g.inverse();
            if !gens.contains(g) {
                gens.push(g.clone());
            }
            if !gens.contains(&inv) {
                gens.push(inv);
            }
        }
        let mut elements = vec![Permutation::identity(degree)];
        let mut seen: HashMap<Permutation, usize> = HashMap::new();
        seen.insert(elements[0].clone(), 0);
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            let base = elements[i].clone();
            for g in &gens {
                let next = base.compose(g)?;
                if !seen.contains_key(&next) {
                    if elements.len() >= order_cap {
                        return Err(GroupError::OrderCapExceeded { cap: order_cap });
                    }
                    seen.insert(next.clone(), elements.len());
                    frontier.push(elements.len());
                    elements.push(next);
                }
            }
        }
        elements.sort();
        debug_assert!(elements[0].is_identity());
        let index: HashMap<&Permutation, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = elements.len();
        let mut cayley = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = elements[i].compose(&elements[j])?;
                cayley[i * n + j] = index[&prod] as u32;
            }
        }
        let mut inverses = vec![0u32; n];
        for i in 0..n {
            inverses[i] = index[&elements[i].inverse()] as u32;
        }
        Ok(Arc::new(FiniteGroup {
            degree,
            elements,
            cayley,
            inverses,
            spec: spec.into(),
        }))
    }

    pub fn trivial() -> Arc<Self> {
        FiniteGroup::from_generators(1, &[], 1, "C1").expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    /// Product of elements by index: `mul(i, j)` is `element(i) ∘ element(j)`
    /// (apply `j` first).
    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.cayley[i * self.elements.len() + j] as usize
    }

    #[inline]
    pub fn inv(&self, i: usize) -> usize {
        self.inverses[i] as usize
    }

    /// Conjugate `a·x·a⁻¹`.
    #[inline]
    pub fn conj(&self, a: usize, x: usize) -> usize {
        self.mul(self.mul(a, x), self.inv(a))
    }

    pub fn check_index(&self, i: usize) -> Result<(), GroupError> {
        if i < self.order() {
            Ok(())
        } else {
            Err(GroupError::IndexOutOfRange {
                index: i,
                order: self.order(),
            })
        }
    }

    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// Exponent: lcm of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, i| lcm(acc, self.element_order(i)))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (i..n).all(|j| self.mul(i, j) == self.mul(j, i)))
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Builds the group described by a textual spec (`C4`, `D6`, `S3xC2`,
/// `perm:3:(0,1);(0,1,2)`, …); see the grammar in [`crate::groupspec`].
pub fn named_group(spec: &str, order_cap: usize) -> Result<Arc<FiniteGroup>, GroupError> {
    let plan = groupspec::parse(spec).map_err(|e| GroupError::Parse {
        pos: e.pos,
        msg: e.msg,
    })?;
    if let Some(est) = plan.order_estimate() {
        if est > order_cap {
            return Err(GroupError::OrderCapExceeded { cap: order_cap });
        }
    }
    let (degree, generators) = plan.generators()?;
    FiniteGroup::from_generators(degree, &generators, order_cap, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        named_group("S3", 100).unwrap()
    }

    #[test]
    fn closure_of_s3_generators() {
        let g = FiniteGroup::from_generators(
            3,
            &[
                Permutation::from_cycles(3, &[vec![0, 1]]).unwrap(),
                Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
            ],
            100,
            "S3",
        )
        .unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn trivial_group_has_order_one() {
        let g = FiniteGroup::from_generators(1, &[], 10, "C1").unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.element(0).is_identity());
    }

    #[test]
    fn q8_has_order_eight_and_one_involution() {
        let g = named_group("Q8", 100).unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        let involutions = (1..g.order()).filter(|&i| g.element_order(i) == 2).count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn identity_is_index_zero_and_unit() {
        let g = s3();
        assert!(g.element(0).is_identity());
        for i in 0..g.order() {
            assert_eq!(g.mul(0, i), i);
            assert_eq!(g.mul(i, 0), i);
            assert_eq!(g.mul(i, g.inv(i)), 0);
        }
    }

    #[test]
    fn cayley_is_associative_at_desk_scale() {
        for spec in ["S3", "C2xC2", "Q8"] {
            let g = named_group(spec, 100).unwrap();
            let n = g.order();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let err = named_group("S3", 4).unwrap_err();
        assert!(matches!(err, GroupError::OrderCapExceeded { .. }));
    }

    #[test]
    fn mismatched_generator_degrees_rejected() {
        let err = FiniteGroup::from_generators(
            3,
            &[Permutation::identity(4)],
            10,
            "bad",
        )
        .unwrap_err();
        assert!(matches!(err, GroupError::DegreeMismatch { .. }));
    }

    #[test]
    fn exponent_of_c2xc2_is_two() {
        let g = named_group("C2xC2", 10).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.exponent(), 2);
    }

    #[test]
    fn element_orders_divide_group_order() {
        let g = named_group("D4", 100).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.order() % g.element_order(i), 0);
        }
    }
}
