//! Hurwitz vectors, generating systems, and the ε-invariant.
//!
//! A Hurwitz vector over a finite group `G` is a tuple
//! `v = (c₁..c_d; a₁,b₁,..,a_{g′},b_{g′})` of group elements; its evaluation
//! is `∏cᵢ·∏[aⱼ,bⱼ]` (left to right, `[a,b] = aba⁻¹b⁻¹`). A *Hurwitz
//! generating system* (HS) additionally has all `cᵢ ≠ 1`, entries generating
//! `G`, and trivial evaluation.
//!
//! The ε-invariant lifts `v` tautologically to the free group `F` on symbols
//! `ĝ` and reads the resulting relation off in `K_{Γ_v}`, where `Γ_v` is the
//! union of the conjugacy classes of the `cᵢ`. The computation is a *fold*
//! over the letters of the lifted word, maintaining the pair `(κ, p)`:
//! the processed prefix equals (central class of κ)·`p̂` modulo `[F,R]`,
//! using the factor-set identity `ĝĥ = r_{g,h}·(gh)-hat` with `r_{g,h}`
//! corresponding to the bar basis vector `[g|h]`:
//!
//! - start: `κ = −[1|1]`, `p = 1` (the empty word is the identity, and
//!   `1̂ = r_{1,1}`);
//! - append `ĝ`:   `κ += [p|g]`, `p := pg`;
//! - append `ĝ⁻¹`: `κ += [p|g⁻¹] − [g|g⁻¹] − [1|1]`, `p := pg⁻¹`
//!   (from `ĝ⁻¹ = r_{g,g⁻¹}⁻¹·r_{1,1}⁻¹·(g⁻¹)-hat`);
//! - a closed word (`p = 1`) represents the relation class `κ + [1|1]`.
//!
//! All κ arithmetic stays on raw `C₂` vectors; comparisons happen after
//! reduction in the relation-class group or a `K_Γ` (module [`crate::bar`]).

use crate::bar::GroupContext;
use crate::group::{Abelianization, ConjugacyClassTable, FiniteGroup};
use crate::lattice::{AbelianClass, Int};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

/// Errors from Hurwitz-vector operations.
#[derive(Debug, Error)]
pub enum HurwitzError {
    #[error("entry list has length {len}, expected d + 2·genus = {expected}")]
    LengthMismatch { len: usize, expected: usize },
    #[error("entry {value} at position {position} is out of range for group order {order}")]
    EntryOutOfRange {
        position: usize,
        value: usize,
        order: usize,
    },
    #[error("branch entry at position {position} is the identity")]
    IdentityBranchEntry { position: usize },
    #[error("evaluation is nontrivial (element index {value})")]
    EvaluationNotTrivial { value: usize },
    #[error("enumeration would visit {required} raw tuples, exceeding the cap of {cap}")]
    BudgetExceeded { required: u128, cap: u128 },
    #[error("ν-filter counts sum to {total}, but d = {d}")]
    NuFilterMismatch { total: usize, d: usize },
    #[error("ν-filter references class id {id}, which is not a nontrivial class")]
    NuFilterBadClass { id: usize },
    #[error("congruence ({family}) failed at {detail}")]
    CongruenceViolation { family: &'static str, detail: String },
}

impl HurwitzError {
    pub fn is_budget(&self) -> bool {
        matches!(self, HurwitzError::BudgetExceeded { .. })
    }
}

/// A Hurwitz vector `(c₁..c_d; a₁,b₁,..,a_{g′},b_{g′})` over element indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "HurwitzVectorRepr", into = "HurwitzVectorRepr")]
pub struct HurwitzVector {
    d: usize,
    genus: usize,
    entries: Vec<usize>,
}

/// Serialization shape: `{"d": int, "genus": int, "entries": [int]}`.
#[derive(Serialize, Deserialize)]
struct HurwitzVectorRepr {
    d: usize,
    genus: usize,
    entries: Vec<usize>,
}

impl TryFrom<HurwitzVectorRepr> for HurwitzVector {
    type Error = HurwitzError;
    fn try_from(r: HurwitzVectorRepr) -> Result<Self, HurwitzError> {
        HurwitzVector::new(r.d, r.genus, r.entries)
    }
}

impl From<HurwitzVector> for HurwitzVectorRepr {
    fn from(v: HurwitzVector) -> Self {
        HurwitzVectorRepr {
            d: v.d,
            genus: v.genus,
            entries: v.entries,
        }
    }
}

impl HurwitzVector {
    pub fn new(d: usize, genus: usize, entries: Vec<usize>) -> Result<Self, HurwitzError> {
        let expected = d + 2 * genus;
        if entries.len() != expected {
            return Err(HurwitzError::LengthMismatch {
                len: entries.len(),
                expected,
            });
        }
        Ok(HurwitzVector { d, genus, entries })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// The branch part `(c₁..c_d)`.
    pub fn branch_entries(&self) -> &[usize] {
        &self.entries[..self.d]
    }

    /// The `j`-th handle pair `(a_j, b_j)`, `j` starting at 0.
    pub fn handle(&self, j: usize) -> (usize, usize) {
        (self.entries[self.d + 2 * j], self.entries[self.d + 2 * j + 1])
    }

    /// Check entry ranges against a concrete group.
    pub fn validate_for(&self, group: &FiniteGroup) -> Result<(), HurwitzError> {
        for (position, &value) in self.entries.iter().enumerate() {
            if value >= group.order() {
                return Err(HurwitzError::EntryOutOfRange {
                    position,
                    value,
                    order: group.order(),
                });
            }
        }
        Ok(())
    }

    /// `∏cᵢ·∏[aⱼ,bⱼ]`, left to right.
    pub fn evaluate(&self, group: &FiniteGroup) -> usize {
        let mut acc = 0usize;
        for &c in self.branch_entries() {
            acc = group.mul(acc, c);
        }
        for j in 0..self.genus {
            let (a, b) = self.handle(j);
            acc = group.mul(acc, group.commutator(a, b));
        }
        acc
    }

    /// All three HS conditions: no identity branch entries, entries generate
    /// the group, trivial evaluation.
    pub fn is_hurwitz_generating_system(&self, group: &FiniteGroup) -> bool {
        self.branch_entries().iter().all(|&c| c != 0)
            && self.evaluate(group) == 0
            && group.generates(&self.entries)
    }

    /// Append `h` trivial handle pairs (the h-stabilization `v^h`).
    pub fn stabilize(&self, h: usize) -> HurwitzVector {
        let mut entries = self.entries.clone();
        entries.extend(std::iter::repeat(0).take(2 * h));
        HurwitzVector {
            d: self.d,
            genus: self.genus + h,
            entries,
        }
    }

    /// Sorted distinct conjugacy-class ids of the branch entries (Γ_v).
    pub fn gamma(&self, classes: &ConjugacyClassTable) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .branch_entries()
            .iter()
            .map(|&c| classes.class_of(c))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// The ν-type: branch-entry counts per nontrivial conjugacy class
/// (index `i` holds the count for class id `i + 1`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NuType(Vec<usize>);

impl NuType {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        NuType(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// Count for a nontrivial class id.
    pub fn count_for_class(&self, class_id: usize) -> usize {
        self.0[class_id - 1]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Class ids with nonzero count (the support Γ of the ν-type).
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

/// ν-type of a vector; errors if some branch entry is the identity.
pub fn nu_type(
    v: &HurwitzVector,
    classes: &ConjugacyClassTable,
) -> Result<NuType, HurwitzError> {
    let mut counts = vec![0usize; classes.class_count() - 1];
    for (position, &c) in v.branch_entries().iter().enumerate() {
        if c == 0 {
            return Err(HurwitzError::IdentityBranchEntry { position });
        }
        counts[classes.class_of(c) - 1] += 1;
    }
    Ok(NuType(counts))
}

/// Is `Σ_C n_C·[C] = 0` in `G^{ab}`?
pub fn is_admissible(nu: &NuType, classes: &ConjugacyClassTable, ab: &Abelianization) -> bool {
    let mut acc = ab.zero();
    for (i, &count) in nu.counts().iter().enumerate() {
        if count > 0 {
            ab.add_scaled(&mut acc, classes.representative(i + 1), count as i64);
        }
    }
    acc.iter().all(|x| x.is_zero())
}

/// Fold bookkeeping: the processed word equals (central class of κ)·`p̂`
/// in `F/[F,R]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldState {
    /// Raw C₂ vector (coefficients of the bar basis `[g|h]` at `g·n + h`).
    pub kappa: Vec<i64>,
    /// Image in `G` of the processed word.
    pub p: usize,
}

/// Fold a word given as letters `(g, ±1)` (the tautological lift `ĝ^{±1}`).
pub fn fold_letters(
    group: &FiniteGroup,
    letters: impl IntoIterator<Item = (usize, i8)>,
) -> FoldState {
    let n = group.order();
    let mut kappa = vec![0i64; n * n];
    kappa[0] -= 1; // −[1|1]
    let mut p = 0usize;
    for (g, exponent) in letters {
        debug_assert!(g < n, "letter out of range");
        match exponent {
            1 => {
                kappa[p * n + g] += 1;
                p = group.mul(p, g);
            }
            -1 => {
                let gi = group.inv(g);
                kappa[p * n + gi] += 1;
                kappa[g * n + gi] -= 1;
                kappa[0] -= 1;
                p = group.mul(p, gi);
            }
            other => panic!("letter exponent must be ±1, got {other}"),
        }
    }
    FoldState { kappa, p }
}

/// The relation-class numerator `κ + [1|1]` of a closed word
/// (panics if the word is not closed — that is a caller bug).
pub fn relation_vector_i64(group: &FiniteGroup, state: &FoldState) -> Vec<i64> {
    assert_eq!(
        state.p, 0,
        "relation class requires a word evaluating to the identity in {}",
        group.name()
    );
    let mut out = state.kappa.clone();
    out[0] += 1;
    out
}

/// The letters of the tautological lift `∏ĉᵢ·∏[âⱼ,b̂ⱼ]` of a Hurwitz vector
/// (commutators expanded as `â b̂ â⁻¹ b̂⁻¹`).
pub fn hs_word(v: &HurwitzVector) -> Vec<(usize, i8)> {
    let mut letters = Vec::with_capacity(v.d() + 4 * v.genus());
    for &c in v.branch_entries() {
        letters.push((c, 1));
    }
    for j in 0..v.genus() {
        let (a, b) = v.handle(j);
        letters.push((a, 1));
        letters.push((b, 1));
        letters.push((a, -1));
        letters.push((b, -1));
    }
    letters
}

/// The ε-invariant of a vector: its class in `K_{Γ_v}` together with the raw
/// numerator it was reduced from. Classes attached to different Γ are
/// different objects and must not be compared.
pub struct EpsilonClass {
    gamma: Vec<usize>,
    raw: Vec<i64>,
    k_gamma: Arc<crate::bar::KGammaGroup>,
    class: AbelianClass,
}

impl EpsilonClass {
    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    /// Raw relation-class numerator in C₂ (pre-reduction).
    pub fn raw(&self) -> &[i64] {
        &self.raw
    }

    pub fn k_gamma(&self) -> &Arc<crate::bar::KGammaGroup> {
        &self.k_gamma
    }

    /// Canonical class in `K_Γ`.
    pub fn class(&self) -> &AbelianClass {
        &self.class
    }
}

impl PartialEq for EpsilonClass {
    fn eq(&self, other: &Self) -> bool {
        self.gamma == other.gamma && self.class == other.class
    }
}
impl Eq for EpsilonClass {}

/// Compute ε(v) for a vector with trivial evaluation and no identity branch
/// entries (generation is *not* required; ε is defined for any such vector).
pub fn epsilon(ctx: &GroupContext, v: &HurwitzVector) -> crate::Result<EpsilonClass> {
    let group = ctx.group();
    v.validate_for(group)?;
    for (position, &c) in v.branch_entries().iter().enumerate() {
        if c == 0 {
            return Err(HurwitzError::IdentityBranchEntry { position }.into());
        }
    }
    let value = v.evaluate(group);
    if value != 0 {
        return Err(HurwitzError::EvaluationNotTrivial { value }.into());
    }
    let gamma = v.gamma(ctx.classes());
    let k_gamma = ctx.k_gamma(&gamma)?;
    let state = fold_letters(group, hs_word(v));
    let raw = relation_vector_i64(group, &state);
    let class = k_gamma.reduce_raw_i64(&raw);
    Ok(EpsilonClass {
        gamma,
        raw,
        k_gamma,
        class,
    })
}

/// Recover the ν-type from an ε-class (`ν = A∘ε`): apply `∂₂` to the
/// canonical representative and sum coordinates over each Γ-class. The
/// result is independent of the representative because boundaries die under
/// `∂₂` and relators only move weight within a class.
pub fn nu_from_epsilon(ctx: &GroupContext, eps: &EpsilonClass) -> crate::Result<NuType> {
    let bar = ctx.bar()?;
    let classes = ctx.classes();
    let w = bar.complex().d2_apply(eps.class().coords());
    let mut counts = vec![0usize; classes.class_count() - 1];
    for (g, weight) in w.iter().enumerate() {
        let class_id = classes.class_of(g);
        if class_id != 0 && eps.gamma().contains(&class_id) {
            continue; // summed below
        }
        assert!(
            weight.is_zero(),
            "∂₂ of an ε-representative must vanish outside Γ (element {g})"
        );
    }
    for &id in eps.gamma() {
        let total: Int = classes.classes()[id].iter().map(|&g| w[g].clone()).sum();
        let total_i64 = i64::try_from(&total).expect("class count fits in i64");
        assert!(total_i64 >= 0, "class counts are nonnegative");
        counts[id - 1] = total_i64 as usize;
    }
    Ok(NuType(counts))
}

/// Inverse of a letter word: reversed order, flipped exponents.
pub fn word_inverse(word: &[(usize, i8)]) -> Vec<(usize, i8)> {
    word.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

/// Are two words with equal image in `G` congruent modulo `[F,R]`? Checks
/// that the relation word `w₁·w₂⁻¹` has trivial class in the relation-class
/// group `C₂/im∂₃`.
pub fn words_congruent(
    ctx: &GroupContext,
    w1: &[(usize, i8)],
    w2: &[(usize, i8)],
) -> crate::Result<bool> {
    let group = ctx.group();
    let mut word = w1.to_vec();
    word.extend(word_inverse(w2));
    let state = fold_letters(group, word.iter().copied());
    assert_eq!(state.p, 0, "words must have equal image in the group");
    let raw = relation_vector_i64(group, &state);
    let rcg = ctx.k_gamma(&[])?;
    let zero = vec![0i64; raw.len()];
    Ok(rcg.same_class_i64(&raw, &zero))
}

/// The four congruence families of the fold model. Preconditions:
/// (i)–(iii) require `z = y⁻¹xy` (and `z₁ = y₁⁻¹zy₁` for (iii)); (iv) holds
/// unconditionally for every `(x, y, z, σ)`.
#[derive(Clone, Copy, Debug)]
enum CongruenceCase {
    /// x̂ŷẑ⁻¹ŷ⁻¹ ≡ ŷ⁻¹x̂ŷẑ⁻¹
    TwistForm { x: usize, y: usize },
    /// ŷẑŷ⁻¹x̂⁻¹ ≡ ẑŷ⁻¹x̂⁻¹ŷ  (the inverse relation)
    InverseForm { x: usize, y: usize },
    /// (x̂ŷẑ⁻¹ŷ⁻¹)(ẑŷ₁ẑ₁⁻¹ŷ₁⁻¹) ≡ x̂·(yy₁)-hat·ẑ₁⁻¹·(yy₁)-hat⁻¹
    Composition { x: usize, y: usize, y1: usize },
    /// x̂ŷ^σẑ⁻¹ŷ^{−σ} ≡ x̂·(y^σ)-hat·ẑ⁻¹·(y^σ)-hat⁻¹
    SignedConjugator { x: usize, y: usize, z: usize, sigma: i8 },
}

fn check_congruence(ctx: &GroupContext, case: CongruenceCase) -> crate::Result<()> {
    let group = ctx.group();
    let (family, w1, w2): (&'static str, Vec<(usize, i8)>, Vec<(usize, i8)>) = match case {
        CongruenceCase::TwistForm { x, y } => {
            let z = group.conj(group.inv(y), x);
            (
                "i",
                vec![(x, 1), (y, 1), (z, -1), (y, -1)],
                vec![(y, -1), (x, 1), (y, 1), (z, -1)],
            )
        }
        CongruenceCase::InverseForm { x, y } => {
            let z = group.conj(group.inv(y), x);
            (
                "ii",
                vec![(y, 1), (z, 1), (y, -1), (x, -1)],
                vec![(z, 1), (y, -1), (x, -1), (y, 1)],
            )
        }
        CongruenceCase::Composition { x, y, y1 } => {
            let z = group.conj(group.inv(y), x);
            let z1 = group.conj(group.inv(y1), z);
            let yy1 = group.mul(y, y1);
            (
                "iii",
                vec![
                    (x, 1),
                    (y, 1),
                    (z, -1),
                    (y, -1),
                    (z, 1),
                    (y1, 1),
                    (z1, -1),
                    (y1, -1),
                ],
                vec![(x, 1), (yy1, 1), (z1, -1), (yy1, -1)],
            )
        }
        CongruenceCase::SignedConjugator { x, y, z, sigma } => {
            let y_pow = if sigma == 1 { y } else { group.inv(y) };
            (
                "iv",
                vec![(x, 1), (y, sigma), (z, -1), (y, -sigma)],
                vec![(x, 1), (y_pow, 1), (z, -1), (y_pow, -1)],
            )
        }
    };
    if !words_congruent(ctx, &w1, &w2)? {
        return Err(HurwitzError::CongruenceViolation {
            family,
            detail: format!("{case:?} in {}", group.name()),
        }
        .into());
    }
    Ok(())
}

/// Exhaustively verify the four congruence families over all parameter
/// tuples satisfying their preconditions. Returns the number of identities
/// checked.
pub fn verify_congruences_exhaustive(ctx: &GroupContext) -> crate::Result<u64> {
    let n = ctx.group().order();
    let mut checked = 0u64;
    for x in 0..n {
        for y in 0..n {
            check_congruence(ctx, CongruenceCase::TwistForm { x, y })?;
            check_congruence(ctx, CongruenceCase::InverseForm { x, y })?;
            checked += 2;
            for y1 in 0..n {
                check_congruence(ctx, CongruenceCase::Composition { x, y, y1 })?;
                checked += 1;
            }
            for z in 0..n {
                for sigma in [1i8, -1] {
                    check_congruence(ctx, CongruenceCase::SignedConjugator { x, y, z, sigma })?;
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

/// Verify `samples` random congruence instances (round-robin over the four
/// families), fully determined by `seed`.
pub fn verify_congruences_sampled(
    ctx: &GroupContext,
    samples: usize,
    seed: u64,
) -> crate::Result<u64> {
    use rand::{Rng, SeedableRng};
    let n = ctx.group().order();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let x = rng.gen_range(0..n);
        let y = rng.gen_range(0..n);
        let case = match i % 4 {
            0 => CongruenceCase::TwistForm { x, y },
            1 => CongruenceCase::InverseForm { x, y },
            2 => CongruenceCase::Composition {
                x,
                y,
                y1: rng.gen_range(0..n),
            },
            _ => CongruenceCase::SignedConjugator {
                x,
                y,
                z: rng.gen_range(0..n),
                sigma: if rng.gen_bool(0.5) { 1 } else { -1 },
            },
        };
        check_congruence(ctx, case)?;
    }
    Ok(samples as u64)
}

/// Push a raw C₂ vector through an element map `π: G → Q` on both tensor
/// slots (`[g|h] ↦ [π(g)|π(h)]`).
pub fn push_raw_i64(map: &[usize], n_src: usize, n_dst: usize, raw: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; n_dst * n_dst];
    for g in 0..n_src {
        for h in 0..n_src {
            let value = raw[g * n_src + h];
            if value != 0 {
                out[map[g] * n_dst + map[h]] += value;
            }
        }
    }
    out
}

/// The classical homology invariant `h(v) ∈ H₂(G″,ℤ)` where
/// `G″ = G/⟨⟨c₁..c_d⟩⟩`: project the handles to `G″`, fold their commutator
/// product, and reduce in the Schur multiplier of `G″`.
pub struct ClassicalH {
    pub quotient_order: usize,
    pub h2_factors: Vec<Int>,
    /// Complete comparison key of the class in `H₂(G″,ℤ)` (values from the
    /// same group and quotient construction are comparable).
    pub key: Vec<Int>,
}

pub fn classical_h(ctx: &GroupContext, v: &HurwitzVector) -> crate::Result<ClassicalH> {
    let group = ctx.group();
    v.validate_for(group)?;
    let value = v.evaluate(group);
    if value != 0 {
        return Err(HurwitzError::EvaluationNotTrivial { value }.into());
    }
    let closure = group.normal_closure(v.branch_entries());
    let (quotient, proj) = group.quotient(&closure)?;
    let qctx = GroupContext::new(quotient);
    let mut letters = Vec::with_capacity(4 * v.genus());
    for j in 0..v.genus() {
        let (a, b) = v.handle(j);
        letters.push((proj[a], 1i8));
        letters.push((proj[b], 1));
        letters.push((proj[a], -1));
        letters.push((proj[b], -1));
    }
    let state = fold_letters(qctx.group(), letters);
    let raw = relation_vector_i64(qctx.group(), &state);
    let raw_int: Vec<Int> = raw.iter().map(|&x| Int::from(x)).collect();
    let bar = qctx.bar()?;
    let h2 = bar.h2();
    let key = h2
        .canonical_key(&raw_int)
        .expect("a closed commutator word folds to a ∂₂-cycle");
    Ok(ClassicalH {
        quotient_order: qctx.group().order(),
        h2_factors: h2.invariant_factors().to_vec(),
        key,
    })
}

/// Exact number of raw tuples the enumeration for `(d, genus, filter)` will
/// visit (the cap is checked against this before any scan starts).
pub fn raw_tuple_count(
    group: &FiniteGroup,
    classes: &ConjugacyClassTable,
    d: usize,
    genus: usize,
    filter: Option<&NuType>,
) -> Result<u128, HurwitzError> {
    let n = group.order() as u128;
    let c_count: u128 = match filter {
        None => {
            let nontrivial = (group.order() - 1) as u128;
            checked_pow(nontrivial, d)?
        }
        Some(nu) => {
            validate_filter(classes, d, nu)?;
            // multinomial(d; counts) · ∏ |C|^{n_C}
            let mut result: u128 = 1;
            let mut remaining = d as u128;
            for (i, &count) in nu.counts().iter().enumerate() {
                result = result
                    .checked_mul(binomial(remaining, count as u128))
                    .ok_or(HurwitzError::BudgetExceeded {
                        required: u128::MAX,
                        cap: 0,
                    })?;
                remaining -= count as u128;
                let size = classes.classes()[i + 1].len() as u128;
                result = result
                    .checked_mul(checked_pow(size, count)?)
                    .ok_or(HurwitzError::BudgetExceeded {
                        required: u128::MAX,
                        cap: 0,
                    })?;
            }
            result
        }
    };
    c_count
        .checked_mul(checked_pow(n, 2 * genus)?)
        .ok_or(HurwitzError::BudgetExceeded {
            required: u128::MAX,
            cap: 0,
        })
}

fn checked_pow(base: u128, exp: usize) -> Result<u128, HurwitzError> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base).ok_or(HurwitzError::BudgetExceeded {
            required: u128::MAX,
            cap: 0,
        })?;
    }
    Ok(acc)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) / (i + 1);
    }
    result
}

fn validate_filter(
    classes: &ConjugacyClassTable,
    d: usize,
    nu: &NuType,
) -> Result<(), HurwitzError> {
    if nu.counts().len() != classes.class_count() - 1 {
        return Err(HurwitzError::NuFilterBadClass {
            id: nu.counts().len(),
        });
    }
    let total = nu.total();
    if total != d {
        return Err(HurwitzError::NuFilterMismatch { total, d });
    }
    Ok(())
}

/// Branch-part prefixes partitioning the scan into at least `target_tasks`
/// independent pieces (fewer when the branch part is too small). Prefixes are
/// lexicographically ordered, so concatenating per-prefix results reproduces
/// the sequential order.
pub fn scan_prefixes(
    group: &FiniteGroup,
    classes: &ConjugacyClassTable,
    d: usize,
    filter: Option<&NuType>,
    target_tasks: usize,
) -> Vec<Vec<usize>> {
    let mut prefixes: Vec<Vec<usize>> = vec![Vec::new()];
    while prefixes.len() < target_tasks && prefixes[0].len() < d {
        let mut next = Vec::with_capacity(prefixes.len() * group.order());
        for prefix in &prefixes {
            for c in 1..group.order() {
                if let Some(nu) = filter {
                    let class_id = classes.class_of(c);
                    let used = prefix
                        .iter()
                        .filter(|&&x| classes.class_of(x) == class_id)
                        .count();
                    if used >= nu.count_for_class(class_id) {
                        continue;
                    }
                }
                let mut extended = prefix.clone();
                extended.push(c);
                next.push(extended);
            }
        }
        prefixes = next;
        if prefixes.is_empty() {
            return prefixes; // filter admits no branch part
        }
    }
    prefixes
}

/// Enumerate every Hurwitz generating system with the given shape whose
/// entries start with `prefix`, in lexicographic order, calling `visit` on
/// each. The ν-filter (if any) restricts branch entries by class counts.
pub fn scan_hs(
    group: &FiniteGroup,
    classes: &ConjugacyClassTable,
    d: usize,
    genus: usize,
    filter: Option<&NuType>,
    prefix: &[usize],
    visit: &mut dyn FnMut(&HurwitzVector),
) {
    let length = d + 2 * genus;
    assert!(prefix.len() <= length, "prefix longer than the vector");
    let mut remaining: Option<Vec<usize>> = filter.map(|nu| nu.counts().to_vec());
    if let Some(rem) = &mut remaining {
        for &c in prefix.iter().take(d) {
            let class_id = classes.class_of(c);
            if class_id == 0 || rem[class_id - 1] == 0 {
                return; // prefix incompatible with the filter
            }
            rem[class_id - 1] -= 1;
        }
    } else if prefix.iter().take(d).any(|&c| c == 0) {
        return;
    }
    let mut entries = prefix.to_vec();
    entries.resize(length, 0);
    let mut scratch = ScanScratch::new(group.order());
    scan_rec(
        group,
        classes,
        d,
        genus,
        prefix.len(),
        &mut entries,
        &mut remaining,
        &mut scratch,
        visit,
    );
}

struct ScanScratch {
    member: Vec<bool>,
    worklist: Vec<usize>,
}

impl ScanScratch {
    fn new(n: usize) -> Self {
        ScanScratch {
            member: vec![false; n],
            worklist: Vec::with_capacity(n),
        }
    }

    /// Does `entries` generate the whole group? (Reusing buffers.)
    fn generates(&mut self, group: &FiniteGroup, entries: &[usize]) -> bool {
        self.member.iter_mut().for_each(|m| *m = false);
        self.worklist.clear();
        self.member[0] = true;
        self.worklist.push(0);
        let mut count = 1;
        while let Some(x) = self.worklist.pop() {
            for &g in entries {
                let y = group.mul(x, g);
                if !self.member[y] {
                    self.member[y] = true;
                    count += 1;
                    self.worklist.push(y);
                }
            }
        }
        count == group.order()
    }
}

#[allow(clippy::too_many_arguments)]
fn scan_rec(
    group: &FiniteGroup,
    classes: &ConjugacyClassTable,
    d: usize,
    genus: usize,
    position: usize,
    entries: &mut Vec<usize>,
    remaining: &mut Option<Vec<usize>>,
    scratch: &mut ScanScratch,
    visit: &mut dyn FnMut(&HurwitzVector),
) {
    let length = d + 2 * genus;
    if position == length {
        let v = HurwitzVector {
            d,
            genus,
            entries: entries.clone(),
        };
        if v.evaluate(group) == 0 && scratch.generates(group, entries) {
            visit(&v);
        }
        return;
    }
    if position < d {
        for c in 1..group.order() {
            if let Some(rem) = remaining {
                let class_id = classes.class_of(c);
                if rem[class_id - 1] == 0 {
                    continue;
                }
                rem[class_id - 1] -= 1;
                entries[position] = c;
                scan_rec(
                    group, classes, d, genus, position + 1, entries, remaining, scratch, visit,
                );
                if let Some(rem) = remaining {
                    rem[classes.class_of(c) - 1] += 1;
                }
            } else {
                entries[position] = c;
                scan_rec(
                    group, classes, d, genus, position + 1, entries, remaining, scratch, visit,
                );
            }
        }
    } else {
        for g in 0..group.order() {
            entries[position] = g;
            scan_rec(
                group, classes, d, genus, position + 1, entries, remaining, scratch, visit,
            );
        }
    }
    entries[position] = 0;
}

/// Collect all Hurwitz generating systems of the given shape, in
/// lexicographic order, after checking the enumeration budget.
pub fn enumerate_hs(
    group: &FiniteGroup,
    classes: &ConjugacyClassTable,
    d: usize,
    genus: usize,
    filter: Option<&NuType>,
    cap: u128,
) -> Result<Vec<HurwitzVector>, HurwitzError> {
    let required = raw_tuple_count(group, classes, d, genus, filter)?;
    if required > cap {
        return Err(HurwitzError::BudgetExceeded { required, cap });
    }
    let mut out = Vec::new();
    scan_hs(group, classes, d, genus, filter, &[], &mut |v| {
        out.push(v.clone())
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_relation_class_is_zero_vector() {
        let g = FiniteGroup::cyclic(3);
        let state = fold_letters(&g, std::iter::empty());
        assert_eq!(state.p, 0);
        let raw = relation_vector_i64(&g, &state);
        assert!(raw.iter().all(|&x| x == 0));
    }

    #[test]
    fn fold_of_product_word_hits_pair_basis() {
        // ĝĥ((gh)-hat)⁻¹ folds raw to [1|g] + [g|h] − [1|1]; the extra part
        // [1|g] − [1|1] = ∂₃[1|1|g] is a boundary, so the class is the
        // [g|h]-class (reduction identities live in the integration tests).
        let group = FiniteGroup::cyclic(4);
        let n = group.order();
        for g in 0..n {
            for h in 0..n {
                let gh = group.mul(g, h);
                let state = fold_letters(&group, [(g, 1i8), (h, 1), (gh, -1)].iter().copied());
                assert_eq!(state.p, 0);
                let raw = relation_vector_i64(&group, &state);
                let mut expected = vec![0i64; n * n];
                expected[g] += 1; // [1|g] from the first letter
                expected[g * n + h] += 1; // [g|h]
                expected[0] -= 1; // −[1|1]
                assert_eq!(raw, expected, "g={g}, h={h}");
            }
        }
    }

    #[test]
    fn z2_hs_enumeration() {
        let group = FiniteGroup::cyclic(2);
        let classes = group.conjugacy_classes();
        let hs = enumerate_hs(&group, &classes, 0, 1, None, 1 << 20).unwrap();
        let got: Vec<Vec<usize>> = hs.iter().map(|v| v.entries().to_vec()).collect();
        assert_eq!(got, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        // d = 1 is always empty: c₁ = 1 is forced by evaluation yet forbidden
        let hs = enumerate_hs(&group, &classes, 1, 1, None, 1 << 20).unwrap();
        assert!(hs.is_empty());
    }

    #[test]
    fn admissibility_parity() {
        let group = FiniteGroup::cyclic(2);
        let classes = group.conjugacy_classes();
        let ab = group.abelianization();
        assert!(!is_admissible(&NuType(vec![3]), &classes, &ab));
        assert!(is_admissible(&NuType(vec![2]), &classes, &ab));
    }
}
