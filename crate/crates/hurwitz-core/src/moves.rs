//! The mapping-class-group move calculus on Hurwitz vectors.
//!
//! Six move families act on a vector `(c₁..c_d; a₁,b₁,..,a_{g′},b_{g′})`:
//!
//! - `braid`: the braid twist `σᵢ: (cᵢ, cᵢ₊₁) ↦ (cᵢ₊₁, cᵢ₊₁⁻¹cᵢcᵢ₊₁)` and its
//!   inverse `(x, y) ↦ (xyx⁻¹, x)`;
//! - `handle`: the handle twists `T₁: (a,b) ↦ (ab, b)` and
//!   `T₂: (a,b) ↦ (a, ba)` with inverses;
//! - `swap`: adjacent handle interchange
//!   `(aⱼ,bⱼ,aⱼ₊₁,bⱼ₊₁) ↦ (c aⱼ₊₁ c⁻¹, c bⱼ₊₁ c⁻¹, aⱼ, bⱼ)`, `c = [aⱼ,bⱼ]`;
//! - `mixed`: the branch/handle interaction
//!   `(c_d, a₁) ↦ (g c_d g⁻¹, c_d a₁)` with `g = c_d a₁ b₁ a₁⁻¹`;
//! - `trivial`: on a trivial first handle `(1, 1)`, set `a₁ := x` for any `x`
//!   (and the reverse, which needs the remaining entries to generate);
//! - `conj`: global conjugation `e ↦ u e u⁻¹` of every entry.
//!
//! Every move sends Hurwitz generating systems to Hurwitz generating systems
//! and preserves `d` and the genus. Orbit generation uses
//! [`neighbor_states`], which emits candidates in a fixed deterministic
//! order.

use crate::group::{Automorphism, FiniteGroup};
use crate::hurwitz::HurwitzVector;
use thiserror::Error;

/// Errors from applying a move to a vector it does not fit.
#[derive(Debug, Error)]
pub enum MoveError {
    #[error("move {move_name} requires {requirement}")]
    ShapeMismatch {
        move_name: &'static str,
        requirement: String,
    },
    #[error("move {move_name} precondition failed: {reason}")]
    Precondition {
        move_name: &'static str,
        reason: String,
    },
    #[error("element index {value} is out of range for group order {order}")]
    ElementOutOfRange { value: usize, order: usize },
    #[error("unknown move family {name:?} (expected one of {expected})")]
    UnknownFamily { name: String, expected: String },
}

/// A single move instance. Positional indices are 0-based: `BraidTwist(i)`
/// acts on branch entries `i, i+1`; handle indices count handle pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    BraidTwist(usize),
    BraidTwistInv(usize),
    HandleT1(usize),
    HandleT1Inv(usize),
    HandleT2(usize),
    HandleT2Inv(usize),
    HandleSwap(usize),
    HandleSwapInv(usize),
    HandleSlide(usize),
    HandleSlideInv(usize),
    Mixed,
    MixedInv,
    TrivialHandleSet(usize),
    TrivialHandleClear,
    GlobalConj(usize),
}

/// Canonical move-family names accepted by `--moves`.
pub const MOVE_FAMILIES: [&str; 6] = ["braid", "handle", "swap", "mixed", "trivial", "conj"];

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::BraidTwist(_) => "BraidTwist",
            Move::BraidTwistInv(_) => "BraidTwistInv",
            Move::HandleT1(_) => "HandleT1",
            Move::HandleT1Inv(_) => "HandleT1Inv",
            Move::HandleT2(_) => "HandleT2",
            Move::HandleT2Inv(_) => "HandleT2Inv",
            Move::HandleSwap(_) => "HandleSwap",
            Move::HandleSwapInv(_) => "HandleSwapInv",
            Move::HandleSlide(_) => "HandleSlide",
            Move::HandleSlideInv(_) => "HandleSlideInv",
            Move::Mixed => "Mixed",
            Move::MixedInv => "MixedInv",
            Move::TrivialHandleSet(_) => "TrivialHandleSet",
            Move::TrivialHandleClear => "TrivialHandleClear",
            Move::GlobalConj(_) => "GlobalConj",
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            Move::BraidTwist(_) | Move::BraidTwistInv(_) => "braid",
            Move::HandleT1(_)
            | Move::HandleT1Inv(_)
            | Move::HandleT2(_)
            | Move::HandleT2Inv(_)
            | Move::HandleSlide(_)
            | Move::HandleSlideInv(_) => "handle",
            Move::HandleSwap(_) | Move::HandleSwapInv(_) => "swap",
            Move::Mixed | Move::MixedInv => "mixed",
            Move::TrivialHandleSet(_) | Move::TrivialHandleClear => "trivial",
            Move::GlobalConj(_) => "conj",
        }
    }

    /// How the move transforms under an automorphism `f`: applying `f`
    /// entrywise intertwines each move with its transport
    /// (`f(v)·transport(m) = f(v·m)`). Only element parameters change.
    pub fn transport(&self, f: &Automorphism) -> Move {
        match *self {
            Move::TrivialHandleSet(x) => Move::TrivialHandleSet(f.apply(x)),
            Move::GlobalConj(u) => Move::GlobalConj(f.apply(u)),
            other => other,
        }
    }
}

/// Which move families an orbit computation uses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSet {
    enabled: [bool; 6],
}

impl MoveSet {
    pub fn all() -> Self {
        MoveSet { enabled: [true; 6] }
    }

    pub fn none() -> Self {
        MoveSet {
            enabled: [false; 6],
        }
    }

    /// Parse a comma-separated family list (e.g. `"braid,handle,conj"`).
    pub fn parse(list: &str) -> Result<Self, MoveError> {
        let mut set = MoveSet::none();
        for raw in list.split(',') {
            let name = raw.trim();
            if name.is_empty() {
                continue;
            }
            set.enable(name)?;
        }
        Ok(set)
    }

    pub fn enable(&mut self, family: &str) -> Result<(), MoveError> {
        match MOVE_FAMILIES.iter().position(|&f| f == family) {
            Some(i) => {
                self.enabled[i] = true;
                Ok(())
            }
            None => Err(MoveError::UnknownFamily {
                name: family.to_string(),
                expected: MOVE_FAMILIES.join(", "),
            }),
        }
    }

    pub fn contains(&self, family: &str) -> bool {
        MOVE_FAMILIES
            .iter()
            .position(|&f| f == family)
            .map(|i| self.enabled[i])
            .unwrap_or(false)
    }

    /// Enabled families in canonical order.
    pub fn families(&self) -> Vec<&'static str> {
        MOVE_FAMILIES
            .iter()
            .enumerate()
            .filter(|(i, _)| self.enabled[*i])
            .map(|(_, &f)| f)
            .collect()
    }
}

impl Default for MoveSet {
    fn default() -> Self {
        MoveSet::all()
    }
}

fn shape_err(move_name: &'static str, requirement: impl Into<String>) -> MoveError {
    MoveError::ShapeMismatch {
        move_name,
        requirement: requirement.into(),
    }
}

/// Apply a move, returning the new vector. Shape requirements (enough branch
/// points or handles) and preconditions (trivial handle slots, generation for
/// `TrivialHandleClear`) are checked and reported as errors.
pub fn apply_move(
    group: &FiniteGroup,
    v: &HurwitzVector,
    mv: Move,
) -> Result<HurwitzVector, MoveError> {
    let d = v.d();
    let genus = v.genus();
    let mut entries = v.entries().to_vec();
    match mv {
        Move::BraidTwist(i) => {
            if i + 1 >= d {
                return Err(shape_err("BraidTwist", format!("i + 1 < d (i = {i}, d = {d})")));
            }
            let (x, y) = (entries[i], entries[i + 1]);
            entries[i] = y;
            entries[i + 1] = group.mul(group.mul(group.inv(y), x), y);
        }
        Move::BraidTwistInv(i) => {
            if i + 1 >= d {
                return Err(shape_err(
                    "BraidTwistInv",
                    format!("i + 1 < d (i = {i}, d = {d})"),
                ));
            }
            let (x, y) = (entries[i], entries[i + 1]);
            entries[i] = group.mul(group.mul(x, y), group.inv(x));
            entries[i + 1] = x;
        }
        Move::HandleT1(j) | Move::HandleT1Inv(j) | Move::HandleT2(j) | Move::HandleT2Inv(j) => {
            if j >= genus {
                return Err(shape_err(
                    mv.name(),
                    format!("handle index j < genus (j = {j}, genus = {genus})"),
                ));
            }
            let (a, b) = (entries[d + 2 * j], entries[d + 2 * j + 1]);
            match mv {
                Move::HandleT1(_) => entries[d + 2 * j] = group.mul(a, b),
                Move::HandleT1Inv(_) => entries[d + 2 * j] = group.mul(a, group.inv(b)),
                Move::HandleT2(_) => entries[d + 2 * j + 1] = group.mul(b, a),
                Move::HandleT2Inv(_) => entries[d + 2 * j + 1] = group.mul(b, group.inv(a)),
                _ => unreachable!(),
            }
        }
        Move::HandleSwap(j) => {
            if j + 1 >= genus {
                return Err(shape_err(
                    "HandleSwap",
                    format!("j + 1 < genus (j = {j}, genus = {genus})"),
                ));
            }
            let base = d + 2 * j;
            let (a1, b1, a2, b2) = (
                entries[base],
                entries[base + 1],
                entries[base + 2],
                entries[base + 3],
            );
            let c = group.commutator(a1, b1);
            entries[base] = group.conj(c, a2);
            entries[base + 1] = group.conj(c, b2);
            entries[base + 2] = a1;
            entries[base + 3] = b1;
        }
        Move::HandleSwapInv(j) => {
            if j + 1 >= genus {
                return Err(shape_err(
                    "HandleSwapInv",
                    format!("j + 1 < genus (j = {j}, genus = {genus})"),
                ));
            }
            let base = d + 2 * j;
            let (x1, y1, x2, y2) = (
                entries[base],
                entries[base + 1],
                entries[base + 2],
                entries[base + 3],
            );
            let c_inv = group.inv(group.commutator(x2, y2));
            entries[base] = x2;
            entries[base + 1] = y2;
            entries[base + 2] = group.conj(c_inv, x1);
            entries[base + 3] = group.conj(c_inv, y1);
        }
        Move::HandleSlide(j) => {
            if j + 1 >= genus {
                return Err(shape_err(
                    "HandleSlide",
                    format!("j + 1 < genus (j = {j}, genus = {genus})"),
                ));
            }
            let base = d + 2 * j;
            let (a1, b1, a2, b2) = (
                entries[base],
                entries[base + 1],
                entries[base + 2],
                entries[base + 3],
            );
            // Slide handle j+1 through handle j: with q = b₁a₁⁻¹b₁⁻¹ the
            // images a₂′ = qa₂q⁻¹, b₁′ = a₂′b₁, b₂′ = b₂·b₁a₁b₁⁻¹ satisfy
            // [a₁, b₁′][a₂′, b₂′] = [a₁, b₁][a₂, b₂] identically in the free
            // group on a₁, b₁, a₂, b₂ (checked symbolically in the tests), so
            // the full evaluation and the generated subgroup are unchanged.
            // On homology it is the transvection b₁ += a₂, b₂ += a₁, which
            // mixes entries across handles — the per-handle twists and swaps
            // alone never do.
            let q = group.mul(group.mul(b1, group.inv(a1)), group.inv(b1));
            let a2_new = group.conj(q, a2);
            entries[base + 1] = group.mul(a2_new, b1);
            entries[base + 2] = a2_new;
            entries[base + 3] = group.mul(b2, group.conj(b1, a1));
        }
        Move::HandleSlideInv(j) => {
            if j + 1 >= genus {
                return Err(shape_err(
                    "HandleSlideInv",
                    format!("j + 1 < genus (j = {j}, genus = {genus})"),
                ));
            }
            let base = d + 2 * j;
            let (x1, y1, x2, y2) = (
                entries[base],
                entries[base + 1],
                entries[base + 2],
                entries[base + 3],
            );
            // Solve the slide images for the originals: b₁ = x₂⁻¹y₁ (because
            // b₁′ = a₂′b₁), then with r = b₁a₁b₁⁻¹ = q⁻¹ recover a₂ = rx₂r⁻¹
            // and b₂ = y₂r⁻¹.
            let b1 = group.mul(group.inv(x2), y1);
            let r = group.conj(b1, x1);
            entries[base + 1] = b1;
            entries[base + 2] = group.conj(r, x2);
            entries[base + 3] = group.mul(y2, group.inv(r));
        }
        Move::Mixed => {
            if d == 0 || genus == 0 {
                return Err(shape_err("Mixed", "d ≥ 1 and genus ≥ 1"));
            }
            let (c, a, b) = (entries[d - 1], entries[d], entries[d + 1]);
            let g = group.mul(group.mul(group.mul(c, a), b), group.inv(a));
            entries[d - 1] = group.conj(g, c);
            entries[d] = group.mul(c, a);
        }
        Move::MixedInv => {
            if d == 0 || genus == 0 {
                return Err(shape_err("MixedInv", "d ≥ 1 and genus ≥ 1"));
            }
            let (c_new, a_new, b) = (entries[d - 1], entries[d], entries[d + 1]);
            let u = group.conj(a_new, b);
            let c = group.conj(group.inv(u), c_new);
            entries[d - 1] = c;
            entries[d] = group.mul(group.inv(c), a_new);
        }
        Move::TrivialHandleSet(x) => {
            if genus == 0 {
                return Err(shape_err("TrivialHandleSet", "genus ≥ 1"));
            }
            if x >= group.order() {
                return Err(MoveError::ElementOutOfRange {
                    value: x,
                    order: group.order(),
                });
            }
            if entries[d] != 0 || entries[d + 1] != 0 {
                return Err(MoveError::Precondition {
                    move_name: "TrivialHandleSet",
                    reason: "the first handle must be (1, 1)".to_string(),
                });
            }
            entries[d] = x;
        }
        Move::TrivialHandleClear => {
            if genus == 0 {
                return Err(shape_err("TrivialHandleClear", "genus ≥ 1"));
            }
            if entries[d + 1] != 0 {
                return Err(MoveError::Precondition {
                    move_name: "TrivialHandleClear",
                    reason: "the first handle must have b₁ = 1".to_string(),
                });
            }
            let rest: Vec<usize> = entries
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != d && *i != d + 1)
                .map(|(_, &e)| e)
                .collect();
            if !group.generates(&rest) {
                return Err(MoveError::Precondition {
                    move_name: "TrivialHandleClear",
                    reason: "remaining entries must generate the group".to_string(),
                });
            }
            entries[d] = 0;
        }
        Move::GlobalConj(u) => {
            if u >= group.order() {
                return Err(MoveError::ElementOutOfRange {
                    value: u,
                    order: group.order(),
                });
            }
            for e in entries.iter_mut() {
                *e = group.conj(u, *e);
            }
        }
    }
    Ok(HurwitzVector::new(d, genus, entries).expect("moves preserve the shape"))
}

/// All single-move successors of `v` for the enabled families, in a fixed
/// deterministic order: braid twists (ascending position, twist before
/// inverse), handle twists then handle slides, handle swaps, mixed,
/// trivial-handle moves, global conjugations. Moves whose preconditions fail
/// are skipped; no-op parameter choices (`TrivialHandleSet(1)`,
/// `GlobalConj(1)`) are omitted.
pub fn neighbor_states(
    group: &FiniteGroup,
    v: &HurwitzVector,
    moves: &MoveSet,
) -> Vec<(Move, HurwitzVector)> {
    let d = v.d();
    let genus = v.genus();
    let mut out = Vec::new();
    let push = |mv: Move, out: &mut Vec<(Move, HurwitzVector)>| {
        let w = apply_move(group, v, mv).expect("candidate moves satisfy their preconditions");
        out.push((mv, w));
    };
    if moves.contains("braid") {
        for i in 0..d.saturating_sub(1) {
            push(Move::BraidTwist(i), &mut out);
            push(Move::BraidTwistInv(i), &mut out);
        }
    }
    if moves.contains("handle") {
        for j in 0..genus {
            push(Move::HandleT1(j), &mut out);
            push(Move::HandleT1Inv(j), &mut out);
            push(Move::HandleT2(j), &mut out);
            push(Move::HandleT2Inv(j), &mut out);
        }
        for j in 0..genus.saturating_sub(1) {
            push(Move::HandleSlide(j), &mut out);
            push(Move::HandleSlideInv(j), &mut out);
        }
    }
    if moves.contains("swap") {
        for j in 0..genus.saturating_sub(1) {
            push(Move::HandleSwap(j), &mut out);
            push(Move::HandleSwapInv(j), &mut out);
        }
    }
    if moves.contains("mixed") && d >= 1 && genus >= 1 {
        push(Move::Mixed, &mut out);
        push(Move::MixedInv, &mut out);
    }
    if moves.contains("trivial") && genus >= 1 {
        let entries = v.entries();
        if entries[d] == 0 && entries[d + 1] == 0 {
            for x in 1..group.order() {
                push(Move::TrivialHandleSet(x), &mut out);
            }
        } else if entries[d + 1] == 0 {
            let rest: Vec<usize> = entries
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != d && *i != d + 1)
                .map(|(_, &e)| e)
                .collect();
            if group.generates(&rest) {
                push(Move::TrivialHandleClear, &mut out);
            }
        }
    }
    if moves.contains("conj") {
        for u in 1..group.order() {
            push(Move::GlobalConj(u), &mut out);
        }
    }
    out
}
