//! The untwisted Burnside ring: formal integer combinations of transitive
//! G-sets `G/H` indexed by subgroup classes.
//!
//! The product has two independent computation paths. `basis_product` uses
//! the double-coset decomposition `⟨H⟩⟨K⟩ = Σ_{HaK} ⟨H ∩ ᵃK⟩` with
//! `ᵃK = aKa⁻¹`; `product_oracle` builds the G-set `G/H × G/K` explicitly,
//! decomposes it into diagonal orbits and classifies point stabilizers.
//! The table of marks gives a third route: marks are pointwise
//! multiplicative, embedding the ring into a product of copies of ℤ.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::group::{FiniteGroup, GroupError};
use crate::subgroup::{double_cosets, left_cosets, Subgroup, SubgroupClassTable};

/// Sparse integer combination of subgroup classes; no explicit zeros stored.
#[derive(Clone, PartialEq, Eq)]
pub struct BurnsideElement {
    group: Arc<FiniteGroup>,
    coeffs: BTreeMap<usize, i64>,
}

impl std::fmt::Debug for BurnsideElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BurnsideElement{:?}", self.coeffs)
    }
}

impl BurnsideElement {
    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        BurnsideElement {
            group,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(group: Arc<FiniteGroup>, class: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(class, 1);
        BurnsideElement { group, coeffs }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeff(&self, class: usize) -> i64 {
        self.coeffs.get(&class).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, i64> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn insert_checked(&mut self, class: usize, delta: i64) {
        let entry = self.coeffs.entry(class).or_insert(0);
        *entry = entry
            .checked_add(delta)
            .expect("integer overflow in Burnside coefficients");
        if *entry == 0 {
            self.coeffs.remove(&class);
        }
    }

    pub fn add(&self, other: &BurnsideElement) -> Result<BurnsideElement, GroupError> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(GroupError::GroupMismatch);
        }
        let mut out = self.clone();
        for (&class, &c) in &other.coeffs {
            out.insert_checked(class, c);
        }
        Ok(out)
    }

    pub fn scale(&self, k: i64) -> BurnsideElement {
        let mut out = BurnsideElement::zero(Arc::clone(&self.group));
        for (&class, &c) in &self.coeffs {
            out.insert_checked(class, c.checked_mul(k).expect("integer overflow"));
        }
        out
    }
}

/// Marks of one basis element: entry at class `K` is the number of
/// `K`-fixed cosets in `G/H`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarksVector {
    pub entries: Vec<i64>,
}

/// Ring operations over a fixed subgroup class table.
pub struct BurnsideRing {
    classes: Arc<SubgroupClassTable>,
}

impl BurnsideRing {
    pub fn new(classes: Arc<SubgroupClassTable>) -> Self {
        BurnsideRing { classes }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.classes.group()
    }

    pub fn classes(&self) -> &SubgroupClassTable {
        &self.classes
    }

    /// Basis indices in canonical class order.
    pub fn basis(&self) -> Vec<usize> {
        (0..self.classes.len()).collect()
    }

    /// The unit `⟨G⟩`.
    pub fn one(&self) -> BurnsideElement {
        BurnsideElement::basis(Arc::clone(self.group()), self.classes.whole_group_class())
    }

    pub fn basis_element(&self, class: usize) -> BurnsideElement {
        BurnsideElement::basis(Arc::clone(self.group()), class)
    }

    /// `⟨H⟩⟨K⟩ = Σ_{HaK ∈ H\G/K} ⟨class of H ∩ aKa⁻¹⟩`.
    pub fn basis_product(&self, hc: usize, kc: usize) -> BurnsideElement {
        let h = &self.classes.class(hc).representative;
        let k = &self.classes.class(kc).representative;
        let mut out = BurnsideElement::zero(Arc::clone(self.group()));
        for coset in double_cosets(h, k).expect("same group") {
            let conj_k = k.conjugate(coset.representative).expect("valid index");
            let meet = h.intersect(&conj_k).expect("same group");
            let (class, _) = self.classes.class_of(&meet).expect("known subgroup");
            out.insert_checked(class, 1);
        }
        out
    }

    /// Bilinear extension of `basis_product`.
    pub fn product(
        &self,
        x: &BurnsideElement,
        y: &BurnsideElement,
    ) -> Result<BurnsideElement, GroupError> {
        if !Arc::ptr_eq(x.group(), self.group()) || !Arc::ptr_eq(y.group(), self.group()) {
            return Err(GroupError::GroupMismatch);
        }
        let mut out = BurnsideElement::zero(Arc::clone(self.group()));
        for (&ci, &a) in &x.coeffs {
            for (&cj, &b) in &y.coeffs {
                let base = self.basis_product(ci, cj);
                let scale = a.checked_mul(b).expect("integer overflow");
                for (&class, &c) in &base.coeffs {
                    out.insert_checked(class, c.checked_mul(scale).expect("integer overflow"));
                }
            }
        }
        Ok(out)
    }

    /// Independent oracle: decomposes `G/H × G/K` under the diagonal action
    /// into orbits and classifies each point stabilizer.
    pub fn product_oracle(&self, hc: usize, kc: usize) -> BurnsideElement {
        let g = self.group();
        let n = g.order();
        let h = &self.classes.class(hc).representative;
        let k = &self.classes.class(kc).representative;
        let (cosets_h, coset_of_h) = left_cosets(h);
        let (cosets_k, coset_of_k) = left_cosets(k);
        // Action of each group element on coset indices.
        let act = |cosets: &[Vec<usize>], coset_of: &[usize], g_elem: usize, c: usize| {
            coset_of[g.mul(g_elem, cosets[c][0])]
        };
        let total = cosets_h.len() * cosets_k.len();
        let mut seen = vec![false; total];
        let mut out = BurnsideElement::zero(Arc::clone(g));
        for start in 0..total {
            if seen[start] {
                continue;
            }
            let (sh, sk) = (start / cosets_k.len(), start % cosets_k.len());
            // Orbit of (sh, sk) and, along the way, its stabilizer.
            let mut stabilizer = Vec::new();
            for a in 0..n {
                let ph = act(&cosets_h, &coset_of_h, a, sh);
                let pk = act(&cosets_k, &coset_of_k, a, sk);
                seen[ph * cosets_k.len() + pk] = true;
                if ph == sh && pk == sk {
                    stabilizer.push(a);
                }
            }
            let stab = Subgroup::from_members_unchecked(Arc::clone(g), stabilizer);
            let (class, _) = self.classes.class_of(&stab).expect("stabilizer is a subgroup");
            out.insert_checked(class, 1);
        }
        out
    }

    /// The marks vector of `G/H`: the mark of class `K` counts cosets `xH`
    /// with `K·xH = xH`.
    pub fn marks(&self, hc: usize) -> MarksVector {
        let g = self.group();
        let h = &self.classes.class(hc).representative;
        let (cosets_h, coset_of_h) = left_cosets(h);
        let entries = (0..self.classes.len())
            .map(|kc| {
                let k = &self.classes.class(kc).representative;
                cosets_h
                    .iter()
                    .filter(|coset| {
                        let x = coset[0];
                        k.members()
                            .iter()
                            .all(|&a| coset_of_h[g.mul(a, x)] == coset_of_h[x])
                    })
                    .count() as i64
            })
            .collect();
        MarksVector { entries }
    }

    /// Linear extension of marks to arbitrary elements.
    pub fn marks_of(&self, x: &BurnsideElement) -> Vec<i64> {
        let mut out = vec![0i64; self.classes.len()];
        for (&class, &c) in &x.coeffs {
            let marks = self.marks(class);
            for (slot, &m) in out.iter_mut().zip(&marks.entries) {
                *slot = slot
                    .checked_add(c.checked_mul(m).expect("integer overflow"))
                    .expect("integer overflow");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;

    fn ring(spec: &str) -> BurnsideRing {
        let g = named_group(spec, 2000).unwrap();
        BurnsideRing::new(Arc::new(SubgroupClassTable::build(&g)))
    }

    #[test]
    fn s3_basis_has_four_elements() {
        assert_eq!(ring("S3").basis().len(), 4);
        assert_eq!(ring("C1").basis().len(), 1);
        assert_eq!(ring("C2xC2").basis().len(), 5);
    }

    #[test]
    fn s3_products_match_hand_values() {
        let r = ring("S3");
        // Classes in order: 1, C2, C3, S3.
        let c2c2 = r.basis_product(1, 1);
        assert_eq!(c2c2.coeff(0), 1);
        assert_eq!(c2c2.coeff(1), 1);
        let c3c3 = r.basis_product(2, 2);
        assert_eq!(c3c3.coeff(2), 2);
        let c2c3 = r.basis_product(1, 2);
        assert_eq!(c2c3.coeff(0), 1);
        assert_eq!(c2c3.coeffs().len(), 1);
    }

    #[test]
    fn unit_laws() {
        for spec in ["S3", "C2xC2", "D4"] {
            let r = ring(spec);
            let g_class = r.classes.whole_group_class();
            let trivial = r.classes.trivial_class();
            for hc in r.basis() {
                // ⟨H⟩⟨G⟩ = ⟨H⟩
                let with_unit = r.basis_product(hc, g_class);
                assert_eq!(with_unit, r.basis_element(hc));
                // ⟨H⟩⟨1⟩ = [G:H]⟨1⟩
                let with_point = r.basis_product(hc, trivial);
                let index =
                    r.group().order() / r.classes.class(hc).representative.order();
                assert_eq!(with_point.coeff(trivial), index as i64);
                assert_eq!(with_point.coeffs().len(), 1);
            }
        }
    }

    #[test]
    fn oracle_matches_double_coset_product() {
        for spec in ["S3", "C2xC2", "D4", "A4"] {
            let r = ring(spec);
            for i in r.basis() {
                for j in r.basis() {
                    assert_eq!(
                        r.basis_product(i, j),
                        r.product_oracle(i, j),
                        "{spec} at classes {i},{j}"
                    );
                }
            }
        }
    }

    #[test]
    fn oracle_s3_c2_squared_decomposition() {
        // 9 points: diagonal orbit of size 3 plus one free orbit of size 6.
        let r = ring("S3");
        let prod = r.product_oracle(1, 1);
        assert_eq!(prod.coeff(1), 1);
        assert_eq!(prod.coeff(0), 1);
    }

    #[test]
    fn oracle_c2xc2_distinct_lines_give_free_orbit() {
        let r = ring("C2xC2");
        // Classes 1..3 are the three C2 subgroups.
        let prod = r.product_oracle(1, 2);
        assert_eq!(prod.coeff(0), 1);
        assert_eq!(prod.coeffs().len(), 1);
    }

    #[test]
    fn marks_of_s3_c2_class() {
        let r = ring("S3");
        let marks = r.marks(1);
        assert_eq!(marks.entries, vec![3, 1, 0, 0]);
    }

    #[test]
    fn marks_edge_rows() {
        let r = ring("D4");
        let n = r.classes.len();
        for hc in r.basis() {
            let marks = r.marks(hc);
            let h = &r.classes.class(hc).representative;
            // Trivial class fixes everything: [G:H].
            assert_eq!(marks.entries[0], (r.group().order() / h.order()) as i64);
            // Whole group fixes nothing unless H = G.
            let expected = if hc == n - 1 { 1 } else { 0 };
            assert_eq!(marks.entries[n - 1], expected);
            // Mark of H on G/H is [N_G(H):H] ≥ 1.
            assert!(marks.entries[hc] >= 1);
        }
    }

    #[test]
    fn marks_are_multiplicative() {
        for spec in ["S3", "D4"] {
            let r = ring(spec);
            for i in r.basis() {
                for j in r.basis() {
                    let lhs = r.marks_of(&r.basis_product(i, j));
                    let mi = r.marks(i).entries;
                    let mj = r.marks(j).entries;
                    let rhs: Vec<i64> = mi.iter().zip(&mj).map(|(a, b)| a * b).collect();
                    assert_eq!(lhs, rhs, "{spec} marks at {i},{j}");
                }
            }
        }
    }

    #[test]
    fn marks_diagonal_nonzero() {
        for spec in ["S3", "C2xC2", "D4", "Q8"] {
            let r = ring(spec);
            for hc in r.basis() {
                assert!(r.marks(hc).entries[hc] > 0);
            }
        }
    }

    #[test]
    fn product_is_commutative_and_associative() {
        let r = ring("D4");
        let b = r.basis();
        for &i in &b {
            for &j in &b {
                assert_eq!(r.basis_product(i, j), r.basis_product(j, i));
            }
        }
        for &i in &b {
            for &j in &b {
                for &k in &b {
                    let left = r
                        .product(&r.basis_product(i, j), &r.basis_element(k))
                        .unwrap();
                    let right = r
                        .product(&r.basis_element(i), &r.basis_product(j, k))
                        .unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}
