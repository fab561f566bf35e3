//! Exhaustive checks that the move calculus preserves the Hurwitz-system
//! conditions, the ν-type, and the ε-class, that every move with an inverse
//! partner actually round-trips, and that the =modfr congruence families
//! hold as class identities.

use hurwitz_core::bar::GroupContext;
use hurwitz_core::group::FiniteGroup;
use hurwitz_core::hurwitz::{
    enumerate_hs, epsilon, nu_type, verify_congruences_exhaustive, verify_congruences_sampled,
    word_inverse, words_congruent, HurwitzVector,
};
use hurwitz_core::moves::{apply_move, neighbor_states, Move, MoveSet};
use hurwitz_core::orbits::{
    verify_epsilon_on_moves, verify_epsilon_random_walks, OrbitOptions,
};

fn all_hs(ctx: &GroupContext, d: usize, genus: usize) -> Vec<HurwitzVector> {
    enumerate_hs(ctx.group(), ctx.classes(), d, genus, None, 100_000_000).unwrap()
}

#[test]
fn moves_preserve_hs_nu_and_epsilon() {
    let shapes = [
        (FiniteGroup::symmetric(3), 2usize, 1usize),
        (FiniteGroup::symmetric(3), 0, 2),
        (FiniteGroup::abelian(&[2, 2]), 2, 1),
        (FiniteGroup::abelian(&[2, 2]), 0, 2),
        (FiniteGroup::cyclic(4), 2, 1),
        (FiniteGroup::cyclic(6), 1, 1),
    ];
    for (group, d, genus) in shapes {
        let ctx = GroupContext::new(group);
        for v in all_hs(&ctx, d, genus) {
            let nu = nu_type(&v, ctx.classes()).unwrap();
            let eps = epsilon(&ctx, &v).unwrap();
            let kg = eps.k_gamma();
            for (mv, w) in neighbor_states(ctx.group(), &v, &MoveSet::all()) {
                assert!(
                    w.is_hurwitz_generating_system(ctx.group()),
                    "{} broke the HS conditions on {:?}",
                    mv.name(),
                    v.entries()
                );
                assert_eq!(
                    nu_type(&w, ctx.classes()).unwrap(),
                    nu,
                    "{} changed ν on {:?}",
                    mv.name(),
                    v.entries()
                );
                let eps_w = epsilon(&ctx, &w).unwrap();
                assert!(
                    kg.same_class_i64(eps.raw(), eps_w.raw()),
                    "{} changed ε on {:?} -> {:?}",
                    mv.name(),
                    v.entries(),
                    w.entries()
                );
            }
        }
    }
}

#[test]
fn invertible_moves_round_trip() {
    let shapes = [
        (FiniteGroup::symmetric(3), 2usize, 1usize),
        (FiniteGroup::abelian(&[2, 2]), 0, 2),
        (FiniteGroup::quaternion8(), 1, 1),
    ];
    for (group, d, genus) in shapes {
        let ctx = GroupContext::new(group);
        let group = ctx.group();
        for v in all_hs(&ctx, d, genus) {
            let mut pairs: Vec<(Move, Move)> = Vec::new();
            if d >= 2 {
                for i in 0..d - 1 {
                    pairs.push((Move::BraidTwist(i), Move::BraidTwistInv(i)));
                    pairs.push((Move::BraidTwistInv(i), Move::BraidTwist(i)));
                }
            }
            for j in 0..genus {
                pairs.push((Move::HandleT1(j), Move::HandleT1Inv(j)));
                pairs.push((Move::HandleT1Inv(j), Move::HandleT1(j)));
                pairs.push((Move::HandleT2(j), Move::HandleT2Inv(j)));
                pairs.push((Move::HandleT2Inv(j), Move::HandleT2(j)));
            }
            if genus >= 2 {
                for j in 0..genus - 1 {
                    pairs.push((Move::HandleSwap(j), Move::HandleSwapInv(j)));
                    pairs.push((Move::HandleSwapInv(j), Move::HandleSwap(j)));
                    pairs.push((Move::HandleSlide(j), Move::HandleSlideInv(j)));
                    pairs.push((Move::HandleSlideInv(j), Move::HandleSlide(j)));
                }
            }
            if d >= 1 && genus >= 1 {
                pairs.push((Move::Mixed, Move::MixedInv));
                pairs.push((Move::MixedInv, Move::Mixed));
            }
            for u in 0..group.order() {
                pairs.push((Move::GlobalConj(u), Move::GlobalConj(group.inv(u))));
            }
            for (forward, backward) in pairs {
                let w = apply_move(group, &v, forward).unwrap();
                let back = apply_move(group, &w, backward).unwrap();
                assert_eq!(
                    back.entries(),
                    v.entries(),
                    "{} then {} must round-trip on {:?}",
                    forward.name(),
                    backward.name(),
                    v.entries()
                );
            }
        }
    }
}

#[test]
fn exhaustive_move_invariance_passes() {
    let opts = OrbitOptions::default();
    for group in [
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::symmetric(3),
    ] {
        let ctx = GroupContext::new(group);
        let stats = verify_epsilon_on_moves(&ctx, 2, 1, &opts).unwrap();
        assert!(stats.states > 0, "{} must have some HS", ctx.group().name());
        assert!(stats.edges > stats.states, "every state has several moves");
    }
}

#[test]
fn random_walks_are_deterministic_and_pass() {
    let ctx = GroupContext::new(FiniteGroup::symmetric(3));
    let first =
        verify_epsilon_random_walks(&ctx, 2, 1, 20, 30, 42, &MoveSet::all()).unwrap();
    let second =
        verify_epsilon_random_walks(&ctx, 2, 1, 20, 30, 42, &MoveSet::all()).unwrap();
    assert_eq!(first.states, second.states);
    assert_eq!(first.edges, second.edges);
    assert_eq!(first.states, 20);
    assert_eq!(first.edges, 600);
}

#[test]
fn congruence_families_hold_exhaustively_on_small_groups() {
    for group in [
        FiniteGroup::cyclic(2),
        FiniteGroup::cyclic(3),
        FiniteGroup::cyclic(4),
        FiniteGroup::abelian(&[2, 2]),
        FiniteGroup::symmetric(3),
        FiniteGroup::cyclic(6),
    ] {
        let ctx = GroupContext::new(group);
        let checked = verify_congruences_exhaustive(&ctx).unwrap();
        assert!(checked > 0, "{} checked nothing", ctx.group().name());
    }
}

#[test]
fn congruence_families_hold_on_samples_of_larger_groups() {
    for group in [FiniteGroup::dihedral(4), FiniteGroup::alternating4()] {
        let ctx = GroupContext::new(group);
        let checked = verify_congruences_sampled(&ctx, 2_000, 1).unwrap();
        assert_eq!(checked, 2_000);
    }
}

#[test]
fn inequivalent_words_are_detected() {
    // ĝĥ(ĝh)⁻¹ with g = h = the involution of ℤ/2 is *not* ≡ the empty word
    // mod [F,R]: its class has nonzero ∂₂-image.
    let ctx = GroupContext::new(FiniteGroup::cyclic(2));
    let w1 = vec![(1usize, 1i8), (1, 1), (0, -1)];
    let empty: Vec<(usize, i8)> = Vec::new();
    assert!(!words_congruent(&ctx, &w1, &empty).unwrap());
    // But every word is congruent to itself, and inverse-of-inverse is
    // identity on letters.
    assert!(words_congruent(&ctx, &w1, &w1).unwrap());
    assert_eq!(word_inverse(&word_inverse(&w1)), w1);
}

#[test]
fn move_set_parsing() {
    let ms = MoveSet::parse("braid,handle").unwrap();
    assert!(ms.contains("braid"));
    assert!(ms.contains("handle"));
    assert!(!ms.contains("conj"));
    assert_eq!(ms.families(), vec!["braid", "handle"]);
    assert!(MoveSet::parse("bogus").is_err());
    assert_eq!(MoveSet::all().families().len(), 6);
}
