//! Structure of finite abelian groups from element-order statistics, plus
//! human-readable names for small groups.
//!
//! The abelian machinery here deliberately avoids the matrix/Smith-normal-form
//! path: it recovers the primary decomposition purely by counting solutions
//! of `a^(p^k) = e`, so it serves as an independent oracle for the
//! cohomology computations.

use crate::subgroup::Subgroup;

/// Primary decomposition of a finite abelian group given the multiset of its
/// element orders: for each prime, the descending exponent partition
/// `λ₁ ≥ λ₂ ≥ …` with the p-component `Π ℤ/p^λᵢ`.
///
/// Counting argument: `#{a : a^(p^k) = e} = p^(Σᵢ min(λᵢ, k))`, so consecutive
/// log-differences give the conjugate partition.
pub fn primary_decomposition(orders: &[usize]) -> Vec<(usize, Vec<u32>)> {
    let n = orders.len();
    let mut out = Vec::new();
    for p in prime_divisors(n) {
        // counts[k] = #elements whose order divides p^k
        let mut conjugate = Vec::new();
        let mut prev_log = 0u32;
        let mut pk = 1usize;
        loop {
            pk = pk.checked_mul(p).expect("order overflow");
            let count = orders.iter().filter(|&&o| pk.is_multiple_of(o)).count();
            let log = exact_log(count, p);
            if log == prev_log {
                break;
            }
            conjugate.push(log - prev_log);
            prev_log = log;
        }
        // conjugate[k-1] = #parts ≥ k; flip to the parts themselves.
        let mut parts = Vec::new();
        if let Some(&max_parts) = conjugate.first() {
            for i in 1..=max_parts {
                let part = conjugate.iter().filter(|&&c| c >= i).count() as u32;
                parts.push(part);
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        if !parts.is_empty() {
            out.push((p, parts));
        }
    }
    out
}

/// Invariant factors `d₁ | d₂ | … | d_r` (ascending divisibility) of a finite
/// abelian group with the given element orders.
pub fn invariant_factors_from_orders(orders: &[usize]) -> Vec<i64> {
    let primary = primary_decomposition(orders);
    let slots = primary.iter().map(|(_, parts)| parts.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for j in 0..slots {
        let mut d: i64 = 1;
        for (p, parts) in &primary {
            if let Some(&lambda) = parts.get(j) {
                d = d
                    .checked_mul((*p as i64).pow(lambda))
                    .expect("invariant factor overflow");
            }
        }
        if d > 1 {
            factors.push(d);
        }
    }
    factors.reverse(); // largest-first construction → ascending chain
    factors
}

/// Order of the exterior square `Λ²A` of a finite abelian group with the
/// given element orders: for `A ≅ Π ℤ/nᵢ`, `|Λ²A| = Π_{i<j} gcd(nᵢ, nⱼ)`,
/// evaluated on the primary decomposition.
pub fn exterior_square_order(orders: &[usize]) -> i64 {
    let mut total: i64 = 1;
    for (p, parts) in primary_decomposition(orders) {
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let exp = parts[i].min(parts[j]);
                total = total
                    .checked_mul((p as i64).pow(exp))
                    .expect("exterior square overflow");
            }
        }
    }
    total
}

/// Element orders read off an abstract multiplication table.
pub fn element_orders_from_table(
    n: usize,
    identity: usize,
    mul: impl Fn(usize, usize) -> usize,
) -> Vec<usize> {
    (0..n)
        .map(|i| {
            let mut ord = 1;
            let mut x = i;
            while x != identity {
                x = mul(x, i);
                ord += 1;
            }
            ord
        })
        .collect()
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut primes = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            primes.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

fn exact_log(count: usize, p: usize) -> u32 {
    let mut log = 0;
    let mut c = count;
    while c.is_multiple_of(p) {
        c /= p;
        log += 1;
    }
    assert_eq!(c, 1, "subgroup counting is not a p-power: group not abelian?");
    log
}

/// Best-effort isomorphism-type name for a small group: the originating
/// spec text for the whole group, exact names for abelian groups, the
/// dihedral/dicyclic/quaternion families at the orders that occur in
/// desk-scale lattices, `G<order>` otherwise.
pub fn small_group_name(sub: &Subgroup) -> String {
    let n = sub.order();
    if sub.is_whole_group() && !sub.group().spec().is_empty() {
        return sub.group().spec().to_string();
    }
    if n == 1 {
        return "C1".to_string();
    }
    if sub.is_abelian() {
        let factors = invariant_factors_from_orders(&sub.element_orders());
        return factors
            .iter()
            .map(|d| format!("C{d}"))
            .collect::<Vec<_>>()
            .join("x");
    }
    let orders = sub.element_orders();
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    if n == 6 {
        return "S3".to_string();
    }
    if n == 8 && involutions == 1 {
        return "Q8".to_string();
    }
    if is_dihedral(sub) {
        return format!("D{}", n / 2);
    }
    if n == 12 && involutions == 1 {
        return "Dic3".to_string();
    }
    if n == 12 && orders.iter().all(|&o| o <= 3) {
        return "A4".to_string();
    }
    format!("G{n}")
}

fn is_dihedral(sub: &Subgroup) -> bool {
    let n = sub.order();
    if !n.is_multiple_of(2) || n < 6 {
        return false;
    }
    let g = sub.group();
    let half = n / 2;
    for &r in sub.members() {
        if g.element_order(r) != half {
            continue;
        }
        // ⟨r⟩ has index 2; look for an inverting involution outside it.
        let mut cyc = Vec::with_capacity(half);
        let mut x = 0;
        loop {
            cyc.push(x);
            x = g.mul(x, r);
            if x == 0 {
                break;
            }
        }
        for &s in sub.members() {
            if g.element_order(s) == 2 && !cyc.contains(&s) && g.conj(s, r) == g.inv(r) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::named_group;
    use crate::subgroup::{Subgroup, SubgroupClassTable};
    use std::sync::Arc;

    #[test]
    fn primary_decomposition_of_products() {
        // C2×C2: one prime, partition (1,1).
        assert_eq!(
            primary_decomposition(&[1, 2, 2, 2]),
            vec![(2, vec![1, 1])]
        );
        // C4: partition (2).
        assert_eq!(primary_decomposition(&[1, 4, 2, 4]), vec![(2, vec![2])]);
        // C6: 2-part (1), 3-part (1).
        assert_eq!(
            primary_decomposition(&[1, 6, 3, 2, 3, 6]),
            vec![(2, vec![1]), (3, vec![1])]
        );
    }

    #[test]
    fn invariant_factors_chain() {
        // C2×C4 has orders {1,2,2,2,4,4,4,4}: chain [2, 4].
        assert_eq!(
            invariant_factors_from_orders(&[1, 2, 2, 2, 4, 4, 4, 4]),
            vec![2, 4]
        );
        // C6 is cyclic: [6].
        assert_eq!(
            invariant_factors_from_orders(&[1, 6, 3, 2, 3, 6]),
            vec![6]
        );
        assert_eq!(invariant_factors_from_orders(&[1]), Vec::<i64>::new());
    }

    #[test]
    fn exterior_square_oracle_values() {
        // Λ²(C_n) = 0, Λ²(C2×C2) = ℤ/2, Λ²(C2×C4) = ℤ/2, Λ²(C2)³ order 8.
        assert_eq!(exterior_square_order(&[1, 2]), 1);
        assert_eq!(exterior_square_order(&[1, 6, 3, 2, 3, 6]), 1);
        assert_eq!(exterior_square_order(&[1, 2, 2, 2]), 2);
        assert_eq!(exterior_square_order(&[1, 2, 2, 2, 4, 4, 4, 4]), 2);
        let elementary_cube = [1, 2, 2, 2, 2, 2, 2, 2]; // (C2)³
        assert_eq!(exterior_square_order(&elementary_cube), 8);
    }

    #[test]
    fn names_for_common_groups() {
        for (spec, want) in [
            ("C6", "C6"),
            ("C2xC2", "C2xC2"),
            ("S3", "S3"),
            ("D4", "D4"),
            ("Q8", "Q8"),
            ("A4", "A4"),
            ("D6", "D6"),
            ("C2xC4", "C2xC4"),
        ] {
            let g = named_group(spec, 100).unwrap();
            let whole = Subgroup::whole(Arc::clone(&g));
            assert_eq!(small_group_name(&whole), want, "naming {spec}");
        }
    }

    #[test]
    fn subgroup_names_inside_d6() {
        let g = named_group("D6", 100).unwrap();
        let table = SubgroupClassTable::build(&g);
        let names: Vec<String> = table
            .classes
            .iter()
            .map(|c| small_group_name(&c.representative))
            .collect();
        assert!(names.contains(&"S3".to_string()));
        assert!(names.contains(&"C2xC2".to_string()));
        assert!(names.contains(&"C6".to_string()));
    }
}
