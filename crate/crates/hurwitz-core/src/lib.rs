//! Exact classification engine for Hurwitz generating systems of finite
//! groups.
//!
//! Given a finite group `G`, the engine works with tuples
//! `v = (c₁..c_d; a₁,b₁,..,a_{g′},b_{g′})` over `G` (Hurwitz vectors). A
//! *Hurwitz generating system* additionally satisfies: every `cᵢ ≠ 1`, the
//! entries generate `G`, and the evaluation `∏cᵢ·∏[aⱼ,bⱼ]` is trivial. These
//! systems encode branched `G`-coverings of a genus-`g′` surface with `d`
//! branch points, and are acted on by a mapping-class-group move calculus and
//! by `Aut(G)`.
//!
//! The engine provides, all in exact integer arithmetic:
//!
//! - [`group`]: finite-group tables, conjugacy classes, abelianization,
//!   automorphism groups.
//! - [`lattice`]: Smith/Hermite normal forms, quotient presentations of
//!   finitely generated abelian groups, kernels and preimages of integer
//!   maps.
//! - [`bar`]: the bar complex of `G`; the relation-class group `C₂/im ∂₃`
//!   (a model of `R/[F,R]`), the Schur multiplier `H₂(G,ℤ)`, the quotients
//!   `K_Γ` and `H_{2,Γ}(G)` attached to a union `Γ` of nontrivial conjugacy
//!   classes, and transport along automorphisms.
//! - [`hurwitz`]: Hurwitz vectors and generating systems, ν-types and
//!   admissibility, the word-folding computation of the ε-invariant in
//!   `K_Γ`, stabilization, and the classical homology invariant.
//! - [`moves`]: the generating moves (braid half-twists, handle
//!   automorphisms, handle swap, the mixed move, trivial-handle replacement,
//!   global conjugation).
//! - [`orbits`]: canonical forms modulo `Aut(G)`, move-orbit decomposition,
//!   classification reports, and the genus-stabilization experiments
//!   (orbits ↔ admissible ε-classes).

pub mod bar;
pub mod group;
pub mod hurwitz;
pub mod lattice;
pub mod moves;
pub mod orbits;

use thiserror::Error;

/// Unified error type for the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] group::GroupError),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
    #[error(transparent)]
    Bar(#[from] bar::BarError),
    #[error(transparent)]
    Hurwitz(#[from] hurwitz::HurwitzError),
    #[error(transparent)]
    Move(#[from] moves::MoveError),
    #[error(transparent)]
    Orbit(#[from] orbits::OrbitError),
}

impl Error {
    /// True when the error is a resource-budget abort (caps on enumeration
    /// size, state counts, group order) rather than invalid input. Budget
    /// aborts map to a distinct process exit code and never come with
    /// partial results.
    pub fn is_budget(&self) -> bool {
        match self {
            Error::Group(e) => e.is_budget(),
            Error::Bar(e) => e.is_budget(),
            Error::Hurwitz(e) => e.is_budget(),
            Error::Orbit(e) => e.is_budget(),
            Error::Lattice(_) | Error::Move(_) => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
