//! Runnable verification suites: the ring laws, oracle equivalences and
//! invariance properties, checkable on any group within the caps.
//!
//! Each suite reports one pass/fail line per invariant. The oracles here
//! are deliberately independent of the implementation paths they check:
//! the orbit-stabilizer product, the table of marks, the exterior-square
//! formula on order statistics, Sylow restriction, and brute-force subgroup
//! enumeration by subset scan.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::burnside::BurnsideRing;
use crate::cache::H2Cache;
use crate::cocycle::{Cochain1, Cochain2};
use crate::cohomology::{h2_units, CohomologyCaps, CohomologyError};
use crate::group::FiniteGroup;
use crate::structure;
use crate::subgroup::{double_cosets, Subgroup, SubgroupClassTable};
use crate::twisted::{FusionBasisKey, FusionRing};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn run(&mut self, name: &str, body: impl FnOnce() -> Result<String, String>) {
        let (passed, detail) = match body() {
            Ok(detail) => (true, detail),
            Err(detail) => (false, detail),
        };
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

/// Counts subgroups by scanning every subset containing the identity;
/// only sensible for `|G| ≤ 16`.
pub fn brute_force_subgroup_count(group: &FiniteGroup) -> usize {
    let n = group.order();
    assert!(n <= 16, "subset scan is for |G| <= 16");
    let mut count = 0;
    'mask: for mask in 0u32..(1 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        for &a in &members {
            for &b in &members {
                if mask >> group.mul(a, b) & 1 == 0 {
                    continue 'mask;
                }
            }
        }
        count += 1;
    }
    count
}

/// A uniformly random normalized 1-cochain.
pub fn random_cochain1(sub: &Subgroup, modulus: i64, rng: &mut impl Rng) -> Cochain1 {
    let mut values = vec![0i64];
    for _ in 1..sub.order() {
        values.push(rng.gen_range(0..modulus));
    }
    Cochain1::from_values(sub.clone(), modulus, values).expect("normalized by construction")
}

/// A random cocycle on the class representative: random coordinates plus a
/// random coboundary.
pub fn random_cocycle(
    ring: &FusionRing,
    class: usize,
    rng: &mut impl Rng,
) -> Result<Cochain2, CohomologyError> {
    let h2 = ring.h2(class);
    let coords: Vec<i64> = h2
        .invariant_factors()
        .iter()
        .map(|&d| rng.gen_range(0..d))
        .collect();
    let rep = h2.representative(&coords)?;
    let f = random_cochain1(h2.subgroup(), ring.modulus(), rng);
    Ok(rep.add(&f.coboundary())?)
}

/// A Sylow p-subgroup of `h`, found among the enumerated subgroups of the
/// ambient group.
pub fn sylow_subgroup(table: &SubgroupClassTable, h: &Subgroup, p: usize) -> Option<Subgroup> {
    let mut p_part = 1usize;
    let mut rest = h.order();
    while rest.is_multiple_of(p) {
        rest /= p;
        p_part *= p;
    }
    for class in &table.classes {
        if class.representative.order() != p_part {
            continue;
        }
        for conj in &class.conjugates {
            if conj.is_subset_of(h) {
                return Some(conj.clone());
            }
        }
    }
    None
}

fn tuple_order(factors: &[i64], tuple: &[i64]) -> i64 {
    factors
        .iter()
        .zip(tuple)
        .map(|(&d, &t)| d / gcd(d, t))
        .fold(1, lcm)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

fn is_prime_power(mut n: i64, p: i64) -> bool {
    if n < 1 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

/// Runs every suite appropriate for the group at the requested level.
pub fn verify_group(
    group: &Arc<FiniteGroup>,
    level: VerifyLevel,
    caps: &CohomologyCaps,
    cache: Option<&mut H2Cache>,
) -> Result<VerifyReport, CohomologyError> {
    let classes = Arc::new(SubgroupClassTable::build(group));
    let burnside = BurnsideRing::new(Arc::clone(&classes));
    let fusion = FusionRing::new(Arc::clone(&classes), caps, cache)?;
    let mut suite = Suite { checks: Vec::new() };

    group_checks(&mut suite, group, level);
    subgroup_checks(&mut suite, group, &classes);
    double_coset_checks(&mut suite, &burnside);
    burnside_checks(&mut suite, &burnside, level);
    cocycle_checks(&mut suite, &fusion, level);
    cohomology_checks(&mut suite, &fusion, caps, level)?;
    twisted_checks(&mut suite, &burnside, &fusion, level);

    Ok(VerifyReport {
        checks: suite.checks,
    })
}

fn group_checks(suite: &mut Suite, group: &Arc<FiniteGroup>, level: VerifyLevel) {
    let n = group.order();
    suite.run("group.identity_and_inverses", || {
        for i in 0..n {
            if group.mul(0, i) != i || group.mul(i, 0) != i {
                return Err(format!("identity law fails at element {i}"));
            }
            if group.mul(i, group.inv(i)) != 0 || group.mul(group.inv(i), i) != 0 {
                return Err(format!("inverse law fails at element {i}"));
            }
        }
        Ok(format!("{n} elements"))
    });
    suite.run("group.cayley_associativity", || {
        if n <= 24 || level == VerifyLevel::Full {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if group.mul(group.mul(a, b), c) != group.mul(a, group.mul(b, c)) {
                            return Err(format!("({a}·{b})·{c} != {a}·({b}·{c})"));
                        }
                    }
                }
            }
            Ok(format!("all {} triples", n * n * n))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..4000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if group.mul(group.mul(a, b), c) != group.mul(a, group.mul(b, c)) {
                    return Err(format!("({a}·{b})·{c} != {a}·({b}·{c})"));
                }
            }
            Ok("4000 sampled triples".to_string())
        }
    });
}

fn subgroup_checks(suite: &mut Suite, group: &Arc<FiniteGroup>, classes: &SubgroupClassTable) {
    suite.run("subgroups.class_partition", || {
        let all = crate::subgroup::all_subgroups(group);
        if classes.total_subgroup_count() != all.len() {
            return Err(format!(
                "classes cover {} subgroups, enumeration found {}",
                classes.total_subgroup_count(),
                all.len()
            ));
        }
        for sub in &all {
            let (ci, a) = classes.class_of(sub).map_err(|e| e.to_string())?;
            let rep = &classes.class(ci).representative;
            if &rep.conjugate(a).map_err(|e| e.to_string())? != sub {
                return Err(format!("lookup conjugator wrong for {:?}", sub.members()));
            }
        }
        Ok(format!(
            "{} subgroups in {} classes",
            all.len(),
            classes.len()
        ))
    });
    suite.run("subgroups.normalizer_orbit_sizes", || {
        for (ci, class) in classes.classes.iter().enumerate() {
            let expected = group.order() / class.normalizer.order();
            if class.conjugates.len() != expected {
                return Err(format!(
                    "class {ci}: {} conjugates, normalizer predicts {expected}",
                    class.conjugates.len()
                ));
            }
        }
        Ok(format!("{} classes", classes.len()))
    });
    if group.order() <= 16 {
        suite.run("subgroups.brute_force_count", || {
            let brute = brute_force_subgroup_count(group);
            if brute != classes.total_subgroup_count() {
                return Err(format!(
                    "subset scan found {brute}, class table covers {}",
                    classes.total_subgroup_count()
                ));
            }
            Ok(format!("{brute} subgroups"))
        });
    }
}

fn double_coset_checks(suite: &mut Suite, burnside: &BurnsideRing) {
    let classes = burnside.classes();
    let group = burnside.group();
    suite.run("double_cosets.partition_and_size_formula", || {
        for hc in 0..classes.len() {
            for kc in 0..classes.len() {
                let h = &classes.class(hc).representative;
                let k = &classes.class(kc).representative;
                let cosets = double_cosets(h, k).map_err(|e| e.to_string())?;
                let total: usize = cosets.iter().map(|c| c.size).sum();
                if total != group.order() {
                    return Err(format!("classes {hc},{kc}: sizes sum to {total}"));
                }
                if !cosets.windows(2).all(|w| w[0].representative < w[1].representative) {
                    return Err(format!("classes {hc},{kc}: representatives unsorted"));
                }
                for coset in &cosets {
                    let conj = k.conjugate(coset.representative).map_err(|e| e.to_string())?;
                    let meet = h.intersect(&conj).map_err(|e| e.to_string())?;
                    let predicted = h.order() * k.order() / meet.order();
                    if coset.size != predicted {
                        return Err(format!(
                            "classes {hc},{kc} at rep {}: size {} != |H||K|/|H∩aKa⁻¹| = {predicted}",
                            coset.representative, coset.size
                        ));
                    }
                }
            }
        }
        Ok(format!("{}² class pairs", classes.len()))
    });
    suite.run("double_cosets.count_equals_orbit_count", || {
        for hc in 0..classes.len() {
            for kc in 0..classes.len() {
                let h = &classes.class(hc).representative;
                let k = &classes.class(kc).representative;
                let cosets = double_cosets(h, k).map_err(|e| e.to_string())?;
                let orbits: i64 = burnside.product_oracle(hc, kc).coeffs().values().sum();
                if orbits != cosets.len() as i64 {
                    return Err(format!(
                        "classes {hc},{kc}: {} double cosets but {orbits} orbits",
                        cosets.len()
                    ));
                }
            }
        }
        Ok("orbit bijection".to_string())
    });
}

fn burnside_checks(suite: &mut Suite, ring: &BurnsideRing, level: VerifyLevel) {
    let n = ring.classes().len();
    suite.run("burnside.product_equals_orbit_oracle", || {
        for i in 0..n {
            for j in 0..n {
                if ring.basis_product(i, j) != ring.product_oracle(i, j) {
                    return Err(format!("mismatch at classes {i},{j}"));
                }
            }
        }
        Ok(format!("{}² basis pairs", n))
    });
    suite.run("burnside.unit_laws", || {
        let g_class = ring.classes().whole_group_class();
        let trivial = ring.classes().trivial_class();
        for hc in 0..n {
            if ring.basis_product(hc, g_class) != ring.basis_element(hc) {
                return Err(format!("⟨H⟩⟨G⟩ != ⟨H⟩ at class {hc}"));
            }
            let with_point = ring.basis_product(hc, trivial);
            let index = ring.group().order() / ring.classes().class(hc).representative.order();
            if with_point.coeff(trivial) != index as i64 || with_point.coeffs().len() != 1 {
                return Err(format!("⟨H⟩⟨1⟩ != [G:H]⟨1⟩ at class {hc}"));
            }
        }
        Ok("both unit laws".to_string())
    });
    suite.run("burnside.marks_homomorphism", || {
        let marks: Vec<Vec<i64>> = (0..n).map(|i| ring.marks(i).entries).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = ring.marks_of(&ring.basis_product(i, j));
                let rhs: Vec<i64> = marks[i]
                    .iter()
                    .zip(&marks[j])
                    .map(|(a, b)| a * b)
                    .collect();
                if lhs != rhs {
                    return Err(format!("marks not multiplicative at {i},{j}"));
                }
            }
        }
        Ok("pointwise multiplicative".to_string())
    });
    suite.run("burnside.marks_diagonal_nonzero", || {
        for i in 0..n {
            if ring.marks(i).entries[i] == 0 {
                return Err(format!("zero diagonal mark at class {i}"));
            }
        }
        Ok("injective on the basis".to_string())
    });
    suite.run("burnside.commutativity", || {
        for i in 0..n {
            for j in i..n {
                if ring.basis_product(i, j) != ring.basis_product(j, i) {
                    return Err(format!("xy != yx at {i},{j}"));
                }
            }
        }
        Ok("all pairs".to_string())
    });
    suite.run("burnside.associativity", || {
        let triples: Vec<(usize, usize, usize)> = if level == VerifyLevel::Full {
            (0..n)
                .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            (0..60)
                .map(|_| {
                    (
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                    )
                })
                .collect()
        };
        let count = triples.len();
        for (i, j, k) in triples {
            let left = ring
                .product(&ring.basis_product(i, j), &ring.basis_element(k))
                .map_err(|e| e.to_string())?;
            let right = ring
                .product(&ring.basis_element(i), &ring.basis_product(j, k))
                .map_err(|e| e.to_string())?;
            if left != right {
                return Err(format!("associativity fails at ({i},{j},{k})"));
            }
        }
        Ok(format!("{count} triples"))
    });
}

fn cocycle_checks(suite: &mut Suite, fusion: &FusionRing, level: VerifyLevel) {
    let classes = fusion.classes();
    let group = fusion.group().clone();
    let m = fusion.modulus();
    let samples = if level == VerifyLevel::Full { 12 } else { 4 };
    suite.run("cocycle.coboundaries_are_cocycles", || {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for class in &classes.classes {
            for _ in 0..samples {
                let f = random_cochain1(&class.representative, m, &mut rng);
                if !f.coboundary().is_cocycle() {
                    return Err(format!(
                        "df not a cocycle on {:?}",
                        class.representative.members()
                    ));
                }
            }
        }
        Ok(format!("{} samples per class", samples))
    });
    suite.run("cocycle.transport_composition", || {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for ci in 0..classes.len() {
            let c = random_cocycle(fusion, ci, &mut rng).map_err(|e| e.to_string())?;
            for _ in 0..samples {
                let a = rng.gen_range(0..group.order());
                let b = rng.gen_range(0..group.order());
                let two = c
                    .conjugate(a)
                    .and_then(|x| x.conjugate(b))
                    .map_err(|e| e.to_string())?;
                let one = c.conjugate(group.mul(b, a)).map_err(|e| e.to_string())?;
                if two != one {
                    return Err(format!("(c^a)^b != c^(ba) at class {ci}, a={a}, b={b}"));
                }
            }
        }
        Ok("transport composes contravariantly".to_string())
    });
    suite.run("cocycle.transport_commutes_with_restriction", || {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for ci in 0..classes.len() {
            let k = &classes.class(ci).representative;
            let c = random_cocycle(fusion, ci, &mut rng).map_err(|e| e.to_string())?;
            for _ in 0..samples {
                let a = rng.gen_range(0..group.order());
                let ak = k.conjugate(a).map_err(|e| e.to_string())?;
                // Any subgroup of ᵃK works; use a cyclic one.
                let pick = ak.members()[rng.gen_range(0..ak.order())];
                let l = Subgroup::generated_by(Arc::clone(&group), &[pick])
                    .map_err(|e| e.to_string())?;
                let ainv = group.inv(a);
                let l_pre = l.conjugate(ainv).map_err(|e| e.to_string())?;
                let lhs = c
                    .conjugate(a)
                    .and_then(|x| x.restrict(&l))
                    .map_err(|e| e.to_string())?;
                let rhs = c
                    .restrict(&l_pre)
                    .and_then(|x| x.conjugate(a))
                    .map_err(|e| e.to_string())?;
                if lhs != rhs {
                    return Err(format!("restriction/transport clash at class {ci}"));
                }
            }
        }
        Ok("squares commute".to_string())
    });
    suite.run("cocycle.transport_preserves_coboundaries", || {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for class in &classes.classes {
            for _ in 0..samples {
                let f = random_cochain1(&class.representative, m, &mut rng);
                let a = rng.gen_range(0..group.order());
                let lhs = f.coboundary().conjugate(a).map_err(|e| e.to_string())?;
                let rhs = f.conjugate(a).map_err(|e| e.to_string())?.coboundary();
                if lhs != rhs {
                    return Err("d(f^a) != (df)^a".to_string());
                }
            }
        }
        Ok("coboundaries transport to coboundaries".to_string())
    });
}

fn cohomology_checks(
    suite: &mut Suite,
    fusion: &FusionRing,
    caps: &CohomologyCaps,
    level: VerifyLevel,
) -> Result<(), CohomologyError> {
    let classes = fusion.classes();
    let m = fusion.modulus();
    let samples = if level == VerifyLevel::Full { 10 } else { 4 };
    suite.run("cohomology.generator_coordinates", || {
        for ci in 0..classes.len() {
            let h2 = fusion.h2(ci);
            for (i, gen) in h2.generators().iter().enumerate() {
                let coords = h2.class_coordinates(gen).map_err(|e| e.to_string())?;
                let unit: Vec<i64> = (0..h2.rank()).map(|j| i64::from(j == i)).collect();
                if coords != unit {
                    return Err(format!("generator {i} of class {ci} has coords {coords:?}"));
                }
            }
        }
        Ok("generators coordinate to unit tuples".to_string())
    });
    suite.run("cohomology.roundtrip", || {
        for ci in 0..classes.len() {
            let h2 = fusion.h2(ci);
            for tuple in h2.all_coordinate_tuples() {
                let rep = h2.representative(&tuple).map_err(|e| e.to_string())?;
                let back = h2.class_coordinates(&rep).map_err(|e| e.to_string())?;
                if back != tuple {
                    return Err(format!("class {ci}: {tuple:?} -> {back:?}"));
                }
            }
        }
        Ok("representative/coordinates round trip".to_string())
    });
    suite.run("cohomology.gauge_invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for ci in 0..classes.len() {
            let h2 = fusion.h2(ci);
            for _ in 0..samples {
                let c = random_cocycle(fusion, ci, &mut rng).map_err(|e| e.to_string())?;
                let f = random_cochain1(h2.subgroup(), m, &mut rng);
                let shifted = c.add(&f.coboundary()).map_err(|e| e.to_string())?;
                let a = h2.class_coordinates(&c).map_err(|e| e.to_string())?;
                let b = h2.class_coordinates(&shifted).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("coboundary shift changed coords at class {ci}"));
                }
            }
        }
        Ok("coboundaries are invisible".to_string())
    });
    suite.run("cohomology.inner_conjugation_invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for ci in 0..classes.len() {
            let h2 = fusion.h2(ci);
            let h = h2.subgroup();
            for _ in 0..samples {
                let c = random_cocycle(fusion, ci, &mut rng).map_err(|e| e.to_string())?;
                let inner = h.members()[rng.gen_range(0..h.order())];
                let moved = c.conjugate(inner).map_err(|e| e.to_string())?;
                let a = h2.class_coordinates(&c).map_err(|e| e.to_string())?;
                let b = h2.class_coordinates(&moved).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("inner conjugation moved class at {ci}"));
                }
            }
        }
        Ok("inner automorphisms act trivially".to_string())
    });
    suite.run("cohomology.abelian_exterior_square_oracle", || {
        let mut checked = 0;
        for ci in 0..classes.len() {
            let rep = &classes.class(ci).representative;
            if !rep.is_abelian() {
                continue;
            }
            let expected = structure::exterior_square_order(&rep.element_orders());
            let got = fusion.h2(ci).order();
            if got != expected {
                return Err(format!(
                    "class {ci}: |H²| = {got}, exterior square predicts {expected}"
                ));
            }
            checked += 1;
        }
        Ok(format!("{checked} abelian classes"))
    });
    suite.run("cohomology.order_divides_subgroup_order", || {
        for ci in 0..classes.len() {
            let h2 = fusion.h2(ci);
            let h_ord = classes.class(ci).representative.order() as i64;
            if h_ord % h2.order() != 0 {
                return Err(format!(
                    "class {ci}: |H²| = {} does not divide |H| = {h_ord}",
                    h2.order()
                ));
            }
        }
        Ok("Schur multiplier order divides group order".to_string())
    });
    // Sylow restriction needs fresh cohomology at non-representative
    // subgroups, so it can raise cap errors; surface them as failures.
    let sylow = || -> Result<String, String> {
        let mut checked = 0;
        for ci in 0..classes.len() {
            let h2 = fusion.h2(ci);
            if h2.rank() == 0 {
                continue;
            }
            let h = &classes.class(ci).representative;
            let factors = h2.invariant_factors().to_vec();
            let primes: Vec<i64> = {
                let mut ps = Vec::new();
                for &d in &factors {
                    let mut n = d;
                    let mut p = 2;
                    while p * p <= n {
                        if n % p == 0 {
                            ps.push(p);
                            while n % p == 0 {
                                n /= p;
                            }
                        }
                        p += 1;
                    }
                    if n > 1 {
                        ps.push(n);
                    }
                }
                ps.sort_unstable();
                ps.dedup();
                ps
            };
            for p in primes {
                let syl = sylow_subgroup(classes, h, p as usize)
                    .ok_or_else(|| format!("no Sylow {p}-subgroup found in class {ci}"))?;
                let h2p = h2_units(&syl, m, caps).map_err(|e| e.to_string())?;
                let p_part: i64 = factors
                    .iter()
                    .map(|&d| {
                        let mut d = d;
                        let mut part = 1;
                        while d % p == 0 {
                            part *= p;
                            d /= p;
                        }
                        part
                    })
                    .product();
                if h2p.order() % p_part != 0 {
                    return Err(format!(
                        "class {ci}, p={p}: p-part {p_part} exceeds |H²(Syl_p)| = {}",
                        h2p.order()
                    ));
                }
                // Restriction must be injective on the p-primary part.
                for tuple in h2.all_coordinate_tuples() {
                    if tuple.iter().all(|&t| t == 0) {
                        continue;
                    }
                    if !is_prime_power(tuple_order(&factors, &tuple), p) {
                        continue;
                    }
                    let rep = h2.representative(&tuple).map_err(|e| e.to_string())?;
                    let res = rep.restrict(&syl).map_err(|e| e.to_string())?;
                    let coords = h2p.class_coordinates(&res).map_err(|e| e.to_string())?;
                    if coords.iter().all(|&c| c == 0) {
                        return Err(format!(
                            "class {ci}, p={p}: {tuple:?} restricts to zero on the Sylow subgroup"
                        ));
                    }
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} p-power classes checked"))
    };
    let result = sylow();
    suite.run("cohomology.sylow_restriction_injectivity", || result);
    Ok(())
}

fn twisted_checks(
    suite: &mut Suite,
    burnside: &BurnsideRing,
    fusion: &FusionRing,
    level: VerifyLevel,
) {
    let basis = fusion.basis().to_vec();
    let n = basis.len();
    let group = fusion.group().clone();
    let m = fusion.modulus();
    suite.run("twisted.commutativity", || {
        for i in 0..n {
            for j in i..n {
                let xy = fusion.basis_product(&basis[i], &basis[j]).map_err(|e| e.to_string())?;
                let yx = fusion.basis_product(&basis[j], &basis[i]).map_err(|e| e.to_string())?;
                if xy != yx {
                    return Err(format!("xy != yx at basis {i},{j}"));
                }
            }
        }
        Ok(format!("{n}² basis pairs"))
    });
    suite.run("twisted.unit", || {
        let one = fusion.unit_key();
        for key in &basis {
            let prod = fusion.basis_product(&one, key).map_err(|e| e.to_string())?;
            if prod != fusion.basis_element(key) {
                return Err(format!("unit fails at {key:?}"));
            }
        }
        Ok("⟨G, 0⟩ is neutral".to_string())
    });
    suite.run("twisted.associativity", || {
        let triples: Vec<(usize, usize, usize)> = if level == VerifyLevel::Full && n <= 12 {
            (0..n)
                .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(59);
            let count = if level == VerifyLevel::Full { 200 } else { 40 };
            (0..count)
                .map(|_| {
                    (
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                    )
                })
                .collect()
        };
        let count = triples.len();
        for (i, j, k) in triples {
            let left = fusion
                .basis_product(&basis[i], &basis[j])
                .and_then(|xy| fusion.product(&xy, &fusion.basis_element(&basis[k])))
                .map_err(|e| e.to_string())?;
            let right = fusion
                .basis_product(&basis[j], &basis[k])
                .and_then(|yz| fusion.product(&fusion.basis_element(&basis[i]), &yz))
                .map_err(|e| e.to_string())?;
            if left != right {
                return Err(format!("associativity fails at ({i},{j},{k})"));
            }
        }
        Ok(format!("{count} triples"))
    });
    suite.run("twisted.forget_twist_homomorphism", || {
        for i in 0..n {
            for j in 0..n {
                let twisted = fusion.basis_product(&basis[i], &basis[j]).map_err(|e| e.to_string())?;
                let forgotten = fusion.forget_twist(&twisted);
                let expected =
                    burnside.basis_product(basis[i].subgroup_class, basis[j].subgroup_class);
                let oracle =
                    burnside.product_oracle(basis[i].subgroup_class, basis[j].subgroup_class);
                if forgotten != expected || forgotten != oracle {
                    return Err(format!("forget_twist not multiplicative at {i},{j}"));
                }
            }
        }
        Ok("onto the untwisted ring, against both product paths".to_string())
    });
    suite.run("twisted.canonicalize_transport_invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let rounds = if level == VerifyLevel::Full { 200 } else { 40 };
        for _ in 0..rounds {
            let key = &basis[rng.gen_range(0..n)];
            let c = fusion.representative_cocycle(key).map_err(|e| e.to_string())?;
            let f = random_cochain1(c.subgroup(), m, &mut rng);
            let shifted = c.add(&f.coboundary()).map_err(|e| e.to_string())?;
            let a = rng.gen_range(0..group.order());
            let moved = shifted.conjugate(a).map_err(|e| e.to_string())?;
            let back = fusion.canonicalize(&moved).map_err(|e| e.to_string())?;
            if &back != key {
                return Err(format!("transported pair canonicalized to {back:?}, not {key:?}"));
            }
        }
        Ok(format!("{rounds} random shifts and transports"))
    });
    suite.run("twisted.projective_rank_gauge_invariance", || {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let rounds = if level == VerifyLevel::Full { 100 } else { 20 };
        for _ in 0..rounds {
            let key = &basis[rng.gen_range(0..n)];
            let h = &fusion.classes().class(key.subgroup_class).representative;
            let mu = fusion.representative_cocycle(key).map_err(|e| e.to_string())?;
            let f = random_cochain1(h, m, &mut rng);
            let shifted = mu.add(&f.coboundary()).map_err(|e| e.to_string())?;
            let direct = fusion.projective_rank(key).map_err(|e| e.to_string())?;
            let rank = crate::twisted::regular_class_count(&shifted).map_err(|e| e.to_string())?;
            if rank != direct {
                return Err(format!("gauge shift changed projective rank at {key:?}"));
            }
        }
        Ok(format!("{rounds} gauge shifts"))
    });
    suite.run("twisted.invertibles_match_h2", || {
        let report = fusion.invertibles().map_err(|e| e.to_string())?;
        if !report.matches_h2 {
            return Err(format!(
                "invertibles {:?} with factors {:?}, H² factors {:?}",
                report.elements.len(),
                report.invariant_factors,
                report.h2_invariant_factors
            ));
        }
        Ok(format!(
            "{} invertibles ≅ H²(G,k×) with factors {:?}",
            report.elements.len(),
            report.invariant_factors
        ))
    });
    suite.run("twisted.whole_group_twists_add", || {
        let whole = fusion.classes().whole_group_class();
        let h2 = fusion.h2(whole);
        for a in h2.all_coordinate_tuples() {
            for b in h2.all_coordinate_tuples() {
                let ka = FusionBasisKey {
                    subgroup_class: whole,
                    coords: fusion.canonical_coords(whole, &a).map_err(|e| e.to_string())?,
                };
                let kb = FusionBasisKey {
                    subgroup_class: whole,
                    coords: fusion.canonical_coords(whole, &b).map_err(|e| e.to_string())?,
                };
                let sum: Vec<i64> = a
                    .iter()
                    .zip(&b)
                    .zip(h2.invariant_factors())
                    .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
                    .collect();
                let expect = FusionBasisKey {
                    subgroup_class: whole,
                    coords: fusion.canonical_coords(whole, &sum).map_err(|e| e.to_string())?,
                };
                let prod = fusion.basis_product(&ka, &kb).map_err(|e| e.to_string())?;
                if prod != fusion.basis_element(&expect) {
                    return Err(format!("⟨G,{a:?}⟩⟨G,{b:?}⟩ != ⟨G,{sum:?}⟩"));
                }
            }
        }
        Ok("⟨G,μ⟩⟨G,μ'⟩ = ⟨G,μ+μ'⟩ for all class pairs".to_string())
    });
}
