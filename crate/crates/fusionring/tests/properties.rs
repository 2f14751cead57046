//! Property tests for the algebraic invariants that are naturally
//! quantified over random inputs.

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fusionring::cocycle::Cochain1;
use fusionring::cohomology::CohomologyCaps;
use fusionring::group::named_group;
use fusionring::perm::Permutation;
use fusionring::subgroup::{double_cosets, Subgroup, SubgroupClassTable};
use fusionring::twisted::{FusionRing, TwistedElement};

fn arb_permutation(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

proptest! {
    #[test]
    fn composition_is_associative_and_inverses_cancel(
        p in arb_permutation(6),
        q in arb_permutation(6),
        r in arb_permutation(6),
    ) {
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(p.compose(&p.inverse()).unwrap(), Permutation::identity(6));
    }

    #[test]
    fn coboundaries_are_always_cocycles(values in proptest::collection::vec(0i64..12, 11)) {
        // d∘d = 0 on a subgroup of D6 with modulus 12.
        let g = named_group("D6", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let mut vals = vec![0i64];
        vals.extend(values);
        let f = Cochain1::from_values(whole, 12, vals).unwrap();
        prop_assert!(f.coboundary().is_cocycle());
    }

    #[test]
    fn cochain_addition_laws(
        a in proptest::collection::vec(0i64..8, 7),
        k in 0i64..8,
    ) {
        let g = named_group("D4", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let mut vals = vec![0i64];
        vals.extend(a);
        let c = Cochain1::from_values(whole.clone(), 8, vals).unwrap().coboundary();
        let zero = fusionring::cocycle::Cochain2::zero(whole, 8);
        prop_assert_eq!(c.add(&zero).unwrap(), c.clone());
        prop_assert!(c.add(&c.negate()).unwrap().is_zero());
        prop_assert!(c.scale(8).is_zero());
        // scale distributes over repeated addition
        let mut acc = zero;
        for _ in 0..k {
            acc = acc.add(&c).unwrap();
        }
        prop_assert_eq!(acc, c.scale(k));
    }
}

/// The fusion product must not depend on which element represents each
/// double coset: recompute products with random coset representatives and
/// compare against the canonical (minimal-representative) result.
#[test]
fn fusion_product_independent_of_coset_representatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0D0C_05E7);
    for spec in ["S3", "C2xC2", "D4", "A4"] {
        let group = named_group(spec, 2000).unwrap();
        let classes = Arc::new(SubgroupClassTable::build(&group));
        let fusion = FusionRing::new(Arc::clone(&classes), &CohomologyCaps::default(), None).unwrap();
        let basis = fusion.basis().to_vec();
        for left in &basis {
            for right in &basis {
                let canonical = fusion.basis_product(left, right).unwrap();
                let h = &classes.class(left.subgroup_class).representative;
                let k = &classes.class(right.subgroup_class).representative;
                let mu = fusion.representative_cocycle(left).unwrap();
                let sigma = fusion.representative_cocycle(right).unwrap();
                let mut alt = TwistedElement::zero(Arc::clone(&group));
                for coset in double_cosets(h, k).unwrap() {
                    // Pick a random member h·r·k of the same double coset.
                    let hh = h.members()[rng.gen_range(0..h.order())];
                    let kk = k.members()[rng.gen_range(0..k.order())];
                    let a = group.mul(group.mul(hh, coset.representative), kk);
                    let sigma_a = sigma.conjugate(a).unwrap();
                    let meet = h.intersect(sigma_a.subgroup()).unwrap();
                    let twist = mu
                        .restrict(&meet)
                        .unwrap()
                        .add(&sigma_a.restrict(&meet).unwrap())
                        .unwrap();
                    let key = fusion.canonicalize(&twist).unwrap();
                    alt = alt
                        .add(&TwistedElement::basis(Arc::clone(&group), key))
                        .unwrap();
                }
                assert_eq!(
                    canonical, alt,
                    "{spec}: product {left:?}·{right:?} depends on coset representatives"
                );
            }
        }
    }
}

/// Conjugate-subgroup transport composes contravariantly and the class
/// lookup's conjugator always maps representative onto query.
#[test]
fn subgroup_transport_laws_on_sampled_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5AB6_0123);
    for spec in ["D6", "A4", "Q8"] {
        let group = named_group(spec, 2000).unwrap();
        let classes = SubgroupClassTable::build(&group);
        for class in &classes.classes {
            let h = &class.representative;
            for _ in 0..20 {
                let a = rng.gen_range(0..group.order());
                let b = rng.gen_range(0..group.order());
                let two = h.conjugate(a).unwrap().conjugate(b).unwrap();
                let one = h.conjugate(group.mul(b, a)).unwrap();
                assert_eq!(two, one, "{spec}: conjugation composition");
            }
            for conj in &class.conjugates {
                let (ci, g) = classes.class_of(conj).unwrap();
                assert_eq!(
                    &classes.class(ci).representative.conjugate(g).unwrap(),
                    conj
                );
            }
        }
    }
}

/// Verifying the full suite end to end on the two groups with the richest
/// twisted structure among the small test set.
#[test]
fn full_verification_passes_on_a4_and_d6() {
    for spec in ["A4", "D6"] {
        let group = named_group(spec, 2000).unwrap();
        let report = fusionring::verify::verify_group(
            &group,
            fusionring::verify::VerifyLevel::Full,
            &CohomologyCaps::default(),
            None,
        )
        .unwrap();
        let failures: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
        assert!(failures.is_empty(), "{spec}: {failures:?}");
    }
}
