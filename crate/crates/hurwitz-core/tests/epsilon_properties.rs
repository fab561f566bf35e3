//! Structural properties of the ε-invariant, each checked against an
//! independent computation:
//!
//! - ∂₂(ε_raw(v)) = Σᵢ e_{cᵢ}: the boundary of the folded class reads off
//!   exactly the branch entries (handle contributions cancel).
//! - ν(v) = A(ε(v)): the Γ-weight functional recovers the ν-type.
//! - every Hurwitz generating system has an admissible ν-type.
//! - ε is Aut-equivariant on raw vectors (exact vector identity) and on
//!   classes (via the cached transport).
//! - pushing ε_raw through π: G → G/⟨⟨c-part⟩⟩ equals the classical
//!   unbranched invariant plus d·[1|1] — an exact commuting square.

use hurwitz_core::bar::{gamma_image, transport_raw_i64, GroupContext};
use hurwitz_core::group::FiniteGroup;
use hurwitz_core::hurwitz::{
    classical_h, enumerate_hs, epsilon, fold_letters, is_admissible, nu_from_epsilon, nu_type,
    push_raw_i64, relation_vector_i64, HurwitzVector,
};
use hurwitz_core::lattice::Int;
use num_traits::Zero;

fn shapes() -> Vec<(FiniteGroup, usize, usize)> {
    vec![
        (FiniteGroup::cyclic(2), 0, 2),
        (FiniteGroup::cyclic(2), 3, 1),
        (FiniteGroup::cyclic(3), 3, 1),
        (FiniteGroup::cyclic(4), 2, 1),
        (FiniteGroup::abelian(&[2, 2]), 0, 2),
        (FiniteGroup::abelian(&[2, 2]), 2, 1),
        (FiniteGroup::symmetric(3), 2, 1),
        (FiniteGroup::symmetric(3), 3, 0),
    ]
}

fn all_hs(ctx: &GroupContext, d: usize, genus: usize) -> Vec<HurwitzVector> {
    enumerate_hs(ctx.group(), ctx.classes(), d, genus, None, 100_000_000).unwrap()
}

#[test]
fn boundary_of_epsilon_raw_counts_branch_entries() {
    for (group, d, genus) in shapes() {
        let ctx = GroupContext::new(group);
        let n = ctx.group().order();
        let complex = ctx.bar().unwrap().complex();
        for v in all_hs(&ctx, d, genus) {
            let eps = epsilon(&ctx, &v).unwrap();
            let raw_int: Vec<Int> = eps.raw().iter().map(|&x| Int::from(x)).collect();
            let boundary = complex.d2_apply(&raw_int);
            let mut expected = vec![Int::zero(); n];
            for &c in v.branch_entries() {
                expected[c] += 1;
            }
            assert_eq!(boundary, expected, "∂₂ε for {:?} in {}", v.entries(), ctx.group().name());
        }
    }
}

#[test]
fn nu_factors_through_epsilon() {
    for (group, d, genus) in shapes() {
        let ctx = GroupContext::new(group);
        for v in all_hs(&ctx, d, genus) {
            let direct = nu_type(&v, ctx.classes()).unwrap();
            let eps = epsilon(&ctx, &v).unwrap();
            let through = nu_from_epsilon(&ctx, &eps).unwrap();
            assert_eq!(direct, through, "ν = A∘ε for {:?}", v.entries());
        }
    }
}

#[test]
fn every_hs_has_admissible_nu() {
    for (group, d, genus) in shapes() {
        let ctx = GroupContext::new(group);
        for v in all_hs(&ctx, d, genus) {
            let nu = nu_type(&v, ctx.classes()).unwrap();
            assert!(
                is_admissible(&nu, ctx.classes(), ctx.abelianization()),
                "HS {:?} in {} must have admissible ν",
                v.entries(),
                ctx.group().name()
            );
        }
    }
}

#[test]
fn epsilon_is_aut_equivariant() {
    for (group, d, genus) in [
        (FiniteGroup::symmetric(3), 2, 1),
        (FiniteGroup::abelian(&[2, 2]), 2, 1),
        (FiniteGroup::cyclic(4), 2, 1),
    ] {
        let ctx = GroupContext::new(group);
        let n = ctx.group().order();
        let auts = ctx.automorphisms().unwrap();
        for v in all_hs(&ctx, d, genus) {
            let eps = epsilon(&ctx, &v).unwrap();
            for f in auts {
                let mapped = HurwitzVector::new(
                    v.d(),
                    v.genus(),
                    v.entries().iter().map(|&e| f.apply(e)).collect(),
                )
                .unwrap();
                assert!(mapped.is_hurwitz_generating_system(ctx.group()));
                let eps_mapped = epsilon(&ctx, &mapped).unwrap();
                // Exact raw-vector identity: fold commutes with f.
                assert_eq!(
                    eps_mapped.raw().to_vec(),
                    transport_raw_i64(f, n, eps.raw()),
                    "raw equivariance for {:?} under {:?}",
                    v.entries(),
                    f
                );
                // Class-level transport agrees.
                let (target, moved) = ctx.aut_transport(f, eps.k_gamma(), eps.class()).unwrap();
                assert_eq!(target.gamma(), eps_mapped.gamma());
                assert_eq!(
                    target.gamma(),
                    gamma_image(ctx.classes(), f, eps.gamma()).as_slice()
                );
                assert_eq!(moved.coords(), eps_mapped.class().coords());
            }
        }
    }
}

#[test]
fn pushing_epsilon_to_branch_quotient_recovers_classical_invariant() {
    for (group, d, genus) in [
        (FiniteGroup::symmetric(3), 2, 1),
        (FiniteGroup::symmetric(3), 3, 1),
        (FiniteGroup::abelian(&[2, 2]), 2, 1),
        (FiniteGroup::cyclic(4), 2, 1),
        (FiniteGroup::cyclic(2), 0, 2),
    ] {
        let ctx = GroupContext::new(group);
        let n = ctx.group().order();
        for v in all_hs(&ctx, d, genus) {
            let eps = epsilon(&ctx, &v).unwrap();
            let closure = ctx.group().normal_closure(v.branch_entries());
            let (quotient, proj) = ctx.group().quotient(&closure).unwrap();
            let q = quotient.order();
            let pushed = push_raw_i64(&proj, n, q, eps.raw());
            // Independent recomputation of the classical raw vector: fold
            // the projected handle word in the quotient.
            let mut letters = Vec::new();
            for j in 0..v.genus() {
                let (a, b) = v.handle(j);
                letters.push((proj[a], 1i8));
                letters.push((proj[b], 1));
                letters.push((proj[a], -1));
                letters.push((proj[b], -1));
            }
            let state = fold_letters(&quotient, letters.iter().copied());
            let mut classical_raw = relation_vector_i64(&quotient, &state);
            // push_π(ε_raw) = classical_raw + d·[1|1], exactly.
            classical_raw[0] += v.d() as i64;
            assert_eq!(pushed, classical_raw, "commuting square for {:?}", v.entries());
            // And the packaged invariant agrees with the H₂-key of the
            // pushed vector (minus the d·[1|1] correction).
            let packaged = classical_h(&ctx, &v).unwrap();
            assert_eq!(packaged.quotient_order, q);
            let qctx = GroupContext::new(quotient);
            let mut cycle: Vec<Int> = pushed.iter().map(|&x| Int::from(x)).collect();
            cycle[0] -= Int::from(v.d() as i64);
            let key = qctx
                .bar()
                .unwrap()
                .h2()
                .canonical_key(&cycle)
                .expect("classical vector is a cycle");
            assert_eq!(key, packaged.key);
        }
    }
}
