//! Cross-module invariants: algebraic laws on random inputs, independent
//! small-box oracles, and the mutual checks between the two irreducibility
//! routes and the two length enumerators.

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quadorders::davenport::{irreducible_with_conductor_prime, ProductList};
use quadorders::elasticity::{factorization_lengths, is_irreducible_in_order, lengths_by_peeling};
use quadorders::factorization::{
    find_prime_in_residue_class, is_prime_element, splitting_tag, splitting_type, SplitTag,
    DEFAULT_CLASS_SEARCH_BUDGET,
};
use quadorders::field::{make_field, CLASS_NUMBER_ONE};
use quadorders::orders::Order;
use quadorders::quadint::QuadInt;
use quadorders::residue::{coset_order, ResidueField, SubgroupMode, UnitCorrectedSubgroup};

proptest! {
    #[test]
    fn norm_is_multiplicative(
        idx in 0usize..9,
        a1 in -1000i64..=1000, b1 in -1000i64..=1000,
        a2 in -1000i64..=1000, b2 in -1000i64..=1000,
    ) {
        let ctx = make_field(CLASS_NUMBER_ONE[idx]).unwrap();
        let x = QuadInt::new(a1, b1);
        let y = QuadInt::new(a2, b2);
        let xy = ctx.mul(&x, &y);
        prop_assert_eq!(ctx.norm(&xy), ctx.norm(&x) * ctx.norm(&y));
        prop_assert_eq!(ctx.conj(&xy), ctx.mul(&ctx.conj(&x), &ctx.conj(&y)));
        // x * conj(x) is the norm as a rational element
        let n = ctx.mul(&x, &ctx.conj(&x));
        prop_assert!(n.is_rational());
        prop_assert_eq!(n.a, ctx.norm(&x));
        // conjugation is an involution and trace is conj-invariant
        prop_assert_eq!(ctx.conj(&ctx.conj(&x)), x.clone());
        prop_assert_eq!(ctx.trace(&x), ctx.trace(&ctx.conj(&x)));
    }

    #[test]
    fn canonical_associate_is_orbit_canonical(
        idx in 0usize..9,
        a in -500i64..=500, b in -500i64..=500,
    ) {
        let ctx = make_field(CLASS_NUMBER_ONE[idx]).unwrap();
        let x = QuadInt::new(a, b);
        prop_assume!(!x.is_zero());
        let (canon, unit) = ctx.canonical_associate(&x).unwrap();
        prop_assert_eq!(&ctx.mul(&unit, &x), &canon);
        // invariant on the whole unit orbit, and idempotent
        for u in ctx.units() {
            let (c2, _) = ctx.canonical_associate(&ctx.mul(u, &x)).unwrap();
            prop_assert_eq!(&c2, &canon);
        }
        let (c3, u3) = ctx.canonical_associate(&canon).unwrap();
        prop_assert_eq!(&c3, &canon);
        prop_assert_eq!(u3, QuadInt::one());
    }

    #[test]
    fn element_text_roundtrip(
        idx in 0usize..9,
        a in proptest::num::i64::ANY, b in proptest::num::i64::ANY,
    ) {
        let ctx = make_field(CLASS_NUMBER_ONE[idx]).unwrap();
        let x = QuadInt::new(a, b);
        prop_assert_eq!(ctx.parse_element(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn division_matches_construction(
        idx in 0usize..9,
        a1 in -40i64..=40, b1 in -40i64..=40,
        a2 in -40i64..=40, b2 in -40i64..=40,
    ) {
        let ctx = make_field(CLASS_NUMBER_ONE[idx]).unwrap();
        let x = QuadInt::new(a1, b1);
        prop_assume!(!x.is_zero());
        let q = QuadInt::new(a2, b2);
        let y = ctx.mul(&x, &q);
        prop_assert!(ctx.divides(&x, &y).unwrap());
        prop_assert_eq!(ctx.exact_div(&x, &y).unwrap(), q);
    }
}

#[test]
fn divisibility_against_small_box_oracle() {
    // independent oracle: search the quotient over a coordinate box
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let d = CLASS_NUMBER_ONE[rng.gen_range(0..9)];
        let ctx = make_field(d).unwrap();
        let x = QuadInt::new(rng.gen_range(-6i64..=6), rng.gen_range(-6i64..=6));
        let y = QuadInt::new(rng.gen_range(-36i64..=36), rng.gen_range(-36i64..=36));
        if x.is_zero() {
            continue;
        }
        let claimed = ctx.divides(&x, &y).unwrap();
        let mut found = false;
        'search: for qa in -80i64..=80 {
            for qb in -80i64..=80 {
                if ctx.mul(&x, &QuadInt::new(qa, qb)) == y {
                    found = true;
                    break 'search;
                }
            }
        }
        assert_eq!(claimed, found, "divides({}, {}) in d = {}", x, y, d);
    }
}

#[test]
fn residue_reduction_is_ring_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (d, p) in [(-1i64, 3u64), (-1, 7), (-7, 5), (-11, 7), (-19, 3)] {
        let ctx = make_field(d).unwrap();
        let fld = ResidueField::new(&ctx, p).unwrap();
        for _ in 0..2000 {
            let x = QuadInt::new(rng.gen_range(-500i64..=500), rng.gen_range(-500i64..=500));
            let y = QuadInt::new(rng.gen_range(-500i64..=500), rng.gen_range(-500i64..=500));
            assert_eq!(
                fld.reduce(&ctx.mul(&x, &y)),
                fld.mul(fld.reduce(&x), fld.reduce(&y))
            );
            assert_eq!(
                fld.reduce(&(&x + &y)),
                fld.element(
                    (fld.reduce(&x).a + fld.reduce(&y).a) % p,
                    (fld.reduce(&x).b + fld.reduce(&y).b) % p
                )
            );
        }
    }
}

#[test]
fn residue_group_laws_exhaustive_small() {
    // every nonzero x satisfies x^(p^2-1) = 1 and its coset order divides
    // the quotient order; exhaustive for p <= 7
    for (d, p) in [(-1i64, 3u64), (-7, 5), (-1, 7), (-11, 7)] {
        let ctx = make_field(d).unwrap();
        let fld = ResidueField::new(&ctx, p).unwrap();
        let base = UnitCorrectedSubgroup::new(&fld, &ctx, SubgroupMode::BaseField).unwrap();
        let corrected =
            UnitCorrectedSubgroup::new(&fld, &ctx, SubgroupMode::BaseFieldWithUnits).unwrap();
        for a in 0..p {
            for b in 0..p {
                let x = fld.element(a, b);
                if x.is_zero() {
                    continue;
                }
                assert_eq!(fld.pow(x, p * p - 1), fld.one());
                let k = coset_order(&fld, x, &base).unwrap();
                assert_eq!(base.quotient_order() % k, 0);
                let k2 = coset_order(&fld, x, &corrected).unwrap();
                assert_eq!(corrected.quotient_order() % k2, 0);
            }
        }
    }
}

#[test]
fn order_membership_laws_sampled() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..2000 {
        let d = CLASS_NUMBER_ONE[rng.gen_range(0..9)];
        let f = rng.gen_range(2u64..=12);
        let ctx = make_field(d).unwrap();
        let order = Order::new(ctx.clone(), f).unwrap();
        let r = f as i64 * 3;
        let x = QuadInt::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        let y = QuadInt::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
        // multiplicative closure
        if order.contains(&x) && order.contains(&y) {
            assert!(order.contains(&ctx.mul(&x, &y)));
        }
        // the conductor pulls arbitrary elements into the order
        if order.conductor_contains(&x) {
            assert!(order.contains(&ctx.mul(&x, &y)));
        }
    }
}

#[test]
fn residue_class_primes_land_in_their_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (d, p) in [(-1i64, 3u64), (-1, 19), (-7, 5), (-11, 7)] {
        let ctx = make_field(d).unwrap();
        for _ in 0..25 {
            let a = rng.gen_range(0..p) as i64;
            let b = rng.gen_range(0..p) as i64;
            if (a, b) == (0, 0) {
                continue;
            }
            let r = QuadInt::new(a, b);
            let gamma =
                find_prime_in_residue_class(&r, p, &ctx, DEFAULT_CLASS_SEARCH_BUDGET).unwrap();
            assert!(is_prime_element(&gamma, &ctx).unwrap());
            let diff = &gamma - &r;
            let pb = BigInt::from(p);
            assert!((&diff.a % &pb) == BigInt::from(0) && (&diff.b % &pb) == BigInt::from(0));
        }
    }
}

/// Small pools of primes used to assemble random products.
fn prime_pool(ctx: &quadorders::field::FieldContext) -> Vec<QuadInt> {
    let mut pool = Vec::new();
    for q in 2u64..=40 {
        if !quadorders::intfactor::is_prime_u64(q) {
            continue;
        }
        if let Ok(st) = splitting_type(q, ctx) {
            match st.tag {
                SplitTag::Inert => {
                    if q <= 13 {
                        pool.push(QuadInt::from_int(q));
                    }
                }
                _ => {
                    pool.push(st.witness.clone());
                    let (c, _) = ctx.canonical_associate(&ctx.conj(&st.witness)).unwrap();
                    if c != st.witness {
                        pool.push(c);
                    }
                }
            }
        }
    }
    pool
}

#[test]
fn conductor_prime_criterion_matches_divisor_enumeration() {
    // the two irreducibility routes agree: the subproduct criterion for
    // p * prod(P), and the direct divisor enumeration
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for (d, p) in [(-1i64, 3u64), (-1, 7), (-7, 5), (-11, 7)] {
        let ctx = make_field(d).unwrap();
        let order = Order::new(ctx.clone(), p).unwrap();
        let pool = prime_pool(&ctx);
        let pq = QuadInt::from_int(p);
        for _ in 0..40 {
            let len = rng.gen_range(0..=4usize);
            let factors: Vec<QuadInt> = (0..len)
                .map(|_| pool[rng.gen_range(0..pool.len())].clone())
                .collect();
            let list = ProductList::new(&ctx, factors.clone()).unwrap();
            let via_criterion = irreducible_with_conductor_prime(&pq, &list, &order).unwrap();
            let mut x = pq.clone();
            for f in &factors {
                x = ctx.mul(&x, f);
            }
            let via_enumeration = is_irreducible_in_order(&x, &order).unwrap();
            assert_eq!(
                via_criterion, via_enumeration,
                "routes disagree for p = {} times {:?} at d = {}",
                p, factors, d
            );
        }
    }
}

#[test]
fn generator_power_constructions() {
    // a generator prime power below the coset order has no subproduct, so
    // the conductor-prime product is irreducible; adding a conjugate pair
    // creates a subproduct and kills irreducibility
    for (d, p) in [(-7i64, 5u64), (-11, 7), (-19, 3)] {
        let ctx = make_field(d).unwrap();
        let order = Order::new(ctx.clone(), p).unwrap();
        let fld = ResidueField::new(&ctx, p).unwrap();
        let base = UnitCorrectedSubgroup::new(&fld, &ctx, SubgroupMode::BaseField).unwrap();
        let gamma =
            quadorders::residue::find_generator_prime(&ctx, p, &base, DEFAULT_CLASS_SEARCH_BUDGET)
                .unwrap();
        let pq = QuadInt::from_int(p);
        let list = ProductList::repeated(&ctx, &gamma, p as usize).unwrap();
        assert!(irreducible_with_conductor_prime(&pq, &list, &order).unwrap());

        let mut with_pair = list.factors().to_vec();
        let (gbar, _) = ctx.canonical_associate(&ctx.conj(&gamma)).unwrap();
        with_pair.push(gbar);
        let list2 = ProductList::new(&ctx, with_pair).unwrap();
        assert!(!irreducible_with_conductor_prime(&pq, &list2, &order).unwrap());
    }
}

#[test]
fn enumerators_agree_on_random_small_elements() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut checked = 0;
    while checked < 120 {
        let (d, f) = [(-1i64, 3u64), (-1, 5), (-1, 7), (-7, 5), (-11, 7)][rng.gen_range(0..5)];
        let ctx = make_field(d).unwrap();
        let order = Order::new(ctx.clone(), f).unwrap();
        let pool = prime_pool(&ctx);
        let len = rng.gen_range(1..=6usize);
        let mut x = ctx.units()[rng.gen_range(0..ctx.units().len())].clone();
        for _ in 0..len {
            x = ctx.mul(&x, &pool[rng.gen_range(0..pool.len())]);
        }
        if !order.contains(&x) || ctx.is_unit(&x) {
            continue;
        }
        let by_partitions = factorization_lengths(&x, &order).unwrap();
        by_partitions.verify(&order).unwrap();
        let by_peeling = lengths_by_peeling(&x, &order).unwrap();
        assert_eq!(
            by_partitions.lengths, by_peeling,
            "length sets disagree for {} in d = {}, f = {}",
            x, d, f
        );
        checked += 1;
    }
}

#[test]
fn split_prime_powers_stay_outside_the_order() {
    // the mechanism behind infinite constants: no power of a split-conductor
    // prime multiplies into the order, even up to units
    let g = make_field(-1).unwrap();
    let o5 = Order::new(g.clone(), 5).unwrap();
    let st = splitting_type(5, &g).unwrap();
    assert_eq!(st.tag, SplitTag::Split);
    let mut power = QuadInt::one();
    for _ in 1..=10 {
        power = g.mul(&power, &st.witness);
        for u in g.units() {
            assert!(!o5.contains(&g.mul(u, &power)));
        }
    }
}

#[test]
fn splitting_tags_and_witness_norms() {
    for d in CLASS_NUMBER_ONE {
        let ctx = make_field(d).unwrap();
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23] {
            let st = splitting_type(q, &ctx).unwrap();
            match st.tag {
                SplitTag::Inert => assert_eq!(st.witness, QuadInt::from_int(q)),
                _ => assert_eq!(ctx.norm(&st.witness), BigInt::from(q)),
            }
            assert_eq!(splitting_tag(q, &ctx), st.tag);
        }
    }
    // d = -163 keeps every prime below 41 inert, while 41 itself is the norm
    // of w and splits
    let ctx = make_field(-163).unwrap();
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        assert_eq!(splitting_tag(q, &ctx), SplitTag::Inert, "q = {}", q);
    }
    let st = splitting_type(41, &ctx).unwrap();
    assert_eq!(st.tag, SplitTag::Split);
    assert_eq!(ctx.norm(&ctx.omega()), BigInt::from(41));
}
