//! Orbit decomposition of Hurwitz generating systems and the stabilization
//! experiments.
//!
//! States are Aut-canonical packed vectors: a Hurwitz vector is encoded with
//! `⌈log₂|G|⌉` bits per entry (entry 0 most significant, so integer order is
//! lexicographic order) and minimized over all automorphisms applied
//! entrywise. Moves are Aut-equivariant, so the move graph descends to
//! canonical states: the neighbor multiset of any member of an Aut-class,
//! read through canonicalization, is the same. Orbits of the combined
//! (moves × Aut) action are therefore the connected components over
//! canonical states, with edges generated from one representative each.
//!
//! The decomposition checks per edge that ν and ε are preserved exactly
//! (raw fold vectors compared in `K_Γ`), aborting on any violation.
//!
//! Reports compare realized orbits against the predicted stable picture:
//! for each admissible ν̂-type the ε-fiber over ν is the coset
//! `ε₀ + image(H_{2,Γ})` in `K_Γ`, computed from a synthesized anchor vector
//! and closed under shifts by the `H_{2,Γ}` numerator basis, then
//! Aut-canonicalized into ε̂-classes. Genus stabilization holds when the
//! realized ε̂-classes biject with the predicted admissible ones, one orbit
//! each.

use crate::bar::{gamma_image, transport_raw, GroupContext, KGammaGroup};
use crate::group::{Automorphism, ConjugacyClassTable, FiniteGroup};
use crate::hurwitz::{
    epsilon, fold_letters, hs_word, is_admissible, nu_type, raw_tuple_count, relation_vector_i64,
    scan_hs, scan_prefixes, EpsilonClass, HurwitzError, HurwitzVector, NuType,
};
use crate::lattice::Int;
use crate::moves::{neighbor_states, Move, MoveSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default raw-tuple budget for orbit enumerations.
pub const DEFAULT_MAX_STATES: u128 = 100_000_000;

/// Errors from orbit computations.
#[derive(Debug, Error)]
pub enum OrbitError {
    #[error(
        "vector length {length} over a group of order {order} exceeds the packed-state capacity"
    )]
    StateSpaceTooLarge { length: usize, order: usize },
    #[error("state count {states} exceeds the id space")]
    TooManyStates { states: usize },
    #[error("invariant violation: {reason}")]
    InvariantViolation { reason: String },
    #[error("no handle completion found for the anchor of ν = {nu}")]
    AnchorSearch { nu: String },
}

impl OrbitError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            OrbitError::StateSpaceTooLarge { .. } | OrbitError::TooManyStates { .. }
        )
    }
}

/// Fixed-width bit packing of entry tuples into `u128` keys.
#[derive(Clone, Copy, Debug)]
pub struct StatePacking {
    bits: u32,
    length: usize,
}

impl StatePacking {
    pub fn new(order: usize, length: usize) -> Result<Self, OrbitError> {
        let bits = (usize::BITS - (order.max(2) - 1).leading_zeros()).max(1);
        if length as u32 * bits > 128 {
            return Err(OrbitError::StateSpaceTooLarge { length, order });
        }
        Ok(StatePacking { bits, length })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn pack(&self, entries: &[usize]) -> u128 {
        debug_assert_eq!(entries.len(), self.length);
        let mut key = 0u128;
        for &e in entries {
            key = (key << self.bits) | e as u128;
        }
        key
    }

    fn pack_mapped(&self, entries: &[usize], f: &Automorphism) -> u128 {
        let mut key = 0u128;
        for &e in entries {
            key = (key << self.bits) | f.apply(e) as u128;
        }
        key
    }

    pub fn unpack(&self, key: u128) -> Vec<usize> {
        let mask = (1u128 << self.bits) - 1;
        let mut out = vec![0usize; self.length];
        let mut k = key;
        for slot in out.iter_mut().rev() {
            *slot = (k & mask) as usize;
            k >>= self.bits;
        }
        out
    }

    /// Minimum packed key over all automorphisms applied entrywise.
    pub fn canonical_key(&self, entries: &[usize], auts: &[Automorphism]) -> u128 {
        auts.iter()
            .map(|f| self.pack_mapped(entries, f))
            .min()
            .expect("automorphism list contains at least the identity")
    }
}

/// Options for orbit enumeration.
#[derive(Clone, Debug)]
pub struct OrbitOptions {
    pub moves: MoveSet,
    /// Cap on raw tuples visited per enumeration.
    pub max_states: u128,
    /// Verify ν/ε preservation on every generated edge (abort on violation).
    pub check_edges: bool,
    /// Parallel split hint; results are independent of it.
    pub target_tasks: usize,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            moves: MoveSet::all(),
            max_states: DEFAULT_MAX_STATES,
            check_edges: true,
            target_tasks: 256,
        }
    }
}

/// Aut-canonicalized ε-class: the minimum over all automorphisms of the
/// transported (Γ, canonical `K_Γ` key) pair.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EpsilonHat {
    pub gamma: Vec<usize>,
    pub key: Vec<Int>,
}

impl EpsilonHat {
    pub fn label(&self) -> String {
        let g = join(self.gamma.iter());
        let k = join(self.key.iter());
        format!("({g})|({k})")
    }
}

fn join<T: std::fmt::Display>(items: impl Iterator<Item = T>) -> String {
    items
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Label for a ν̂ counts vector, e.g. `[2,0,1]`.
pub fn nu_label(counts: &[usize]) -> String {
    format!("[{}]", join(counts.iter()))
}

/// ε̂ of an ε-class.
pub fn epsilon_hat(ctx: &GroupContext, eps: &EpsilonClass) -> crate::Result<EpsilonHat> {
    let raw: Vec<Int> = eps.raw().iter().map(|&x| Int::from(x)).collect();
    epsilon_hat_from_raw(ctx, eps.gamma(), &raw)
}

/// ε̂ of a raw relation vector attached to Γ.
pub fn epsilon_hat_from_raw(
    ctx: &GroupContext,
    gamma: &[usize],
    raw: &[Int],
) -> crate::Result<EpsilonHat> {
    let n = ctx.group().order();
    let classes = ctx.classes();
    let auts = ctx.automorphisms()?;
    let mut best: Option<EpsilonHat> = None;
    for f in auts {
        let gamma_f = gamma_image(classes, f, gamma);
        let raw_f = transport_raw(f, n, raw);
        let kg = ctx.k_gamma(&gamma_f)?;
        let candidate = EpsilonHat {
            key: kg.canonical_key(&raw_f),
            gamma: gamma_f,
        };
        if best.as_ref().map_or(true, |b| candidate < *b) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("automorphism list contains at least the identity"))
}

/// For each automorphism, the induced permutation of conjugacy-class ids.
pub fn class_permutations(ctx: &GroupContext) -> crate::Result<Vec<Vec<usize>>> {
    let classes = ctx.classes();
    let auts = ctx.automorphisms()?;
    Ok(auts
        .iter()
        .map(|f| {
            (0..classes.class_count())
                .map(|id| classes.class_of(f.apply(classes.representative(id))))
                .collect()
        })
        .collect())
}

/// ν̂: the lexicographically minimal class-permuted counts vector.
pub fn nu_hat_counts(nu: &NuType, perms: &[Vec<usize>]) -> Vec<usize> {
    let counts = nu.counts();
    let mut best: Option<Vec<usize>> = None;
    for perm in perms {
        let mut out = vec![0usize; counts.len()];
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                debug_assert_ne!(perm[i + 1], 0, "automorphisms fix the identity class");
                out[perm[i + 1] - 1] = c;
            }
        }
        if best.as_ref().map_or(true, |b| out < *b) {
            best = Some(out);
        }
    }
    best.expect("automorphism list contains at least the identity")
}

/// One orbit of the (moves × Aut) action.
#[derive(Clone, Debug)]
pub struct OrbitInfo {
    /// The minimal canonical state of the orbit.
    pub representative: HurwitzVector,
    /// Number of Aut-canonical states in the orbit.
    pub size: usize,
    /// ν-type of the representative.
    pub nu: NuType,
    /// Aut-canonicalized ν counts (constant on the orbit).
    pub nu_hat: Vec<usize>,
    /// Aut-canonicalized ε-class (constant on the orbit).
    pub eps_hat: EpsilonHat,
}

/// The orbit partition of all Hurwitz generating systems of one shape.
pub struct OrbitPartition {
    packing: StatePacking,
    d: usize,
    genus: usize,
    states: Vec<u128>,
    orbit_of: Vec<u32>,
    orbits: Vec<OrbitInfo>,
}

impl OrbitPartition {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Number of Aut-canonical HS states.
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    /// Orbits ordered by minimal canonical state.
    pub fn orbits(&self) -> &[OrbitInfo] {
        &self.orbits
    }

    /// Orbit id containing the given entry tuple, if it is one of the states.
    pub fn orbit_of_entries(&self, auts: &[Automorphism], entries: &[usize]) -> Option<usize> {
        if entries.len() != self.packing.length() {
            return None;
        }
        let key = self.packing.canonical_key(entries, auts);
        self.states
            .binary_search(&key)
            .ok()
            .map(|i| self.orbit_of[i] as usize)
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    /// Union keeping the smaller index as root, so every component's root is
    /// its minimal state id.
    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

fn violation(reason: String) -> crate::Error {
    OrbitError::InvariantViolation { reason }.into()
}

/// Check that a single move edge preserves ν, the HS conditions, and ε
/// (raw vectors compared in the source's `K_Γ`).
fn check_edge(
    group: &FiniteGroup,
    classes: &ConjugacyClassTable,
    kg: &KGammaGroup,
    nu_v: &NuType,
    raw_v: &[i64],
    mv: Move,
    w: &HurwitzVector,
) -> crate::Result<()> {
    let nu_w = nu_type(w, classes).map_err(|_| {
        violation(format!(
            "move {} introduced an identity branch entry in {:?}",
            mv.name(),
            w.entries()
        ))
    })?;
    if nu_w != *nu_v {
        return Err(violation(format!(
            "move {} changed the ν-type at {:?}",
            mv.name(),
            w.entries()
        )));
    }
    if w.evaluate(group) != 0 {
        return Err(violation(format!(
            "move {} broke the evaluation condition at {:?}",
            mv.name(),
            w.entries()
        )));
    }
    if !w.is_hurwitz_generating_system(group) {
        return Err(violation(format!(
            "move {} broke the generation condition at {:?}",
            mv.name(),
            w.entries()
        )));
    }
    let raw_w = relation_vector_i64(group, &fold_letters(group, hs_word(w)));
    if !kg.same_class_i64(raw_v, &raw_w) {
        return Err(violation(format!(
            "move {} changed ε at {:?}",
            mv.name(),
            w.entries()
        )));
    }
    Ok(())
}

/// Decompose all Hurwitz generating systems of shape `(d, genus)` (optionally
/// restricted to a ν-filter) into orbits of the enabled moves and Aut(G).
pub fn orbit_decompose(
    ctx: &GroupContext,
    d: usize,
    genus: usize,
    filter: Option<&NuType>,
    options: &OrbitOptions,
) -> crate::Result<OrbitPartition> {
    let group = ctx.group();
    let classes = ctx.classes();
    let required = raw_tuple_count(group, classes, d, genus, filter)?;
    if required > options.max_states {
        return Err(HurwitzError::BudgetExceeded {
            required,
            cap: options.max_states,
        }
        .into());
    }
    let packing = StatePacking::new(group.order(), d + 2 * genus)?;
    let auts = ctx.automorphisms()?;

    // Phase A: canonical keys of every HS, globally sorted and deduplicated.
    let prefixes = scan_prefixes(group, classes, d, filter, options.target_tasks);
    let mut states: Vec<u128> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut local = Vec::new();
            scan_hs(group, classes, d, genus, filter, prefix, &mut |v| {
                local.push(packing.canonical_key(v.entries(), auts));
            });
            local
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });
    states.par_sort_unstable();
    states.dedup();
    if states.len() > u32::MAX as usize {
        return Err(OrbitError::TooManyStates {
            states: states.len(),
        }
        .into());
    }
    if states.is_empty() {
        return Ok(OrbitPartition {
            packing,
            d,
            genus,
            states,
            orbit_of: Vec::new(),
            orbits: Vec::new(),
        });
    }

    // Phase B: edges from one representative per canonical state
    // (sound by Aut-equivariance of the move set).
    let chunk_size = (states.len() / (options.target_tasks.max(1))).max(1);
    let edge_chunks: Vec<Vec<(u32, u32)>> = states
        .par_chunks(chunk_size)
        .enumerate()
        .map(|(ci, chunk)| -> crate::Result<Vec<(u32, u32)>> {
            let base = ci * chunk_size;
            let mut edges = Vec::new();
            for (offset, &key) in chunk.iter().enumerate() {
                let id = (base + offset) as u32;
                let v = HurwitzVector::new(d, genus, packing.unpack(key))
                    .expect("packed states have the right length");
                let check_data = if options.check_edges {
                    let nu_v = nu_type(&v, classes)
                        .expect("canonical representatives have nontrivial branch entries");
                    let kg = ctx.k_gamma(&v.gamma(classes))?;
                    let raw_v = relation_vector_i64(group, &fold_letters(group, hs_word(&v)));
                    Some((nu_v, kg, raw_v))
                } else {
                    None
                };
                for (mv, w) in neighbor_states(group, &v, &options.moves) {
                    if let Some((nu_v, kg, raw_v)) = &check_data {
                        check_edge(group, classes, kg, nu_v, raw_v, mv, &w)?;
                    }
                    let wkey = packing.canonical_key(w.entries(), auts);
                    let widx = states.binary_search(&wkey).map_err(|_| {
                        violation(format!(
                            "move {} left the enumerated HS set at {:?}",
                            mv.name(),
                            w.entries()
                        ))
                    })?;
                    edges.push((id, widx as u32));
                }
            }
            Ok(edges)
        })
        .collect::<crate::Result<_>>()?;

    let mut uf = UnionFind::new(states.len());
    for chunk in &edge_chunks {
        for &(a, b) in chunk {
            uf.union(a, b);
        }
    }

    // Roots are minimal ids, so a single ascending pass assigns orbit ids in
    // minimal-representative order.
    let mut orbit_of = vec![0u32; states.len()];
    let mut first_state: Vec<usize> = Vec::new();
    let mut sizes: Vec<usize> = Vec::new();
    for i in 0..states.len() {
        let root = uf.find(i as u32);
        if root == i as u32 {
            orbit_of[i] = first_state.len() as u32;
            first_state.push(i);
            sizes.push(1);
        } else {
            let oid = orbit_of[root as usize];
            orbit_of[i] = oid;
            sizes[oid as usize] += 1;
        }
    }

    let perms = class_permutations(ctx)?;
    let mut orbits = Vec::with_capacity(first_state.len());
    for (oid, &idx) in first_state.iter().enumerate() {
        let representative = HurwitzVector::new(d, genus, packing.unpack(states[idx]))
            .expect("packed states have the right length");
        let nu = nu_type(&representative, classes)
            .expect("canonical representatives have nontrivial branch entries");
        let nu_hat = nu_hat_counts(&nu, &perms);
        let eps = epsilon(ctx, &representative)?;
        let eps_hat = epsilon_hat(ctx, &eps)?;
        orbits.push(OrbitInfo {
            representative,
            size: sizes[oid],
            nu,
            nu_hat,
            eps_hat,
        });
    }

    Ok(OrbitPartition {
        packing,
        d,
        genus,
        states,
        orbit_of,
        orbits,
    })
}

/// All admissible ν̂-types with `d` branch points, as canonical counts
/// vectors in ascending order.
pub fn admissible_nu_hats(ctx: &GroupContext, d: usize) -> crate::Result<Vec<Vec<usize>>> {
    let classes = ctx.classes();
    let ab = ctx.abelianization();
    let perms = class_permutations(ctx)?;
    let k = classes.class_count() - 1;
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut counts = vec![0usize; k];
    fn rec(
        counts: &mut Vec<usize>,
        pos: usize,
        left: usize,
        sink: &mut dyn FnMut(&[usize]),
    ) {
        if pos + 1 == counts.len() {
            counts[pos] = left;
            sink(counts);
            counts[pos] = 0;
            return;
        }
        for take in 0..=left {
            counts[pos] = take;
            rec(counts, pos + 1, left - take, sink);
        }
        counts[pos] = 0;
    }
    if k == 0 {
        return Ok(if d == 0 { vec![Vec::new()] } else { Vec::new() });
    }
    rec(&mut counts, 0, d, &mut |c| {
        let nu = NuType::from_counts(c.to_vec());
        if is_admissible(&nu, classes, ab) {
            out.push(nu_hat_counts(&nu, &perms));
        }
    });
    out.sort();
    out.dedup();
    Ok(out)
}

/// Synthesize a vector with the given ν counts, trivial evaluation and no
/// identity branch entries (generation is not required): branch entries are
/// class representatives in ascending class order; handles are found by a
/// breadth-first search over products of commutators. Requires an admissible
/// ν (otherwise no handle completion exists).
pub fn anchor_vector(ctx: &GroupContext, nu_counts: &[usize]) -> crate::Result<HurwitzVector> {
    let group = ctx.group();
    let classes = ctx.classes();
    let mut c_part = Vec::new();
    for (i, &count) in nu_counts.iter().enumerate() {
        for _ in 0..count {
            c_part.push(classes.representative(i + 1));
        }
    }
    let mut w = 0usize;
    for &c in &c_part {
        w = group.mul(w, c);
    }
    let d = c_part.len();
    if w == 0 {
        return Ok(HurwitzVector::new(d, 0, c_part).expect("lengths match"));
    }
    let target = group.inv(w);
    // Minimal commutator pair per value, scanning (a, b) ascending.
    let n = group.order();
    let mut pair_for: Vec<Option<(usize, usize)>> = vec![None; n];
    for a in 0..n {
        for b in 0..n {
            let c = group.commutator(a, b);
            if pair_for[c].is_none() {
                pair_for[c] = Some((a, b));
            }
        }
    }
    // BFS over right-multiplication by commutator values.
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n]; // (prev, commutator value)
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        if x == target {
            break;
        }
        for (c, pair) in pair_for.iter().enumerate() {
            if pair.is_none() {
                continue;
            }
            let y = group.mul(x, c);
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, c));
                queue.push_back(y);
            }
        }
    }
    if !seen[target] {
        return Err(OrbitError::AnchorSearch {
            nu: nu_label(nu_counts),
        }
        .into());
    }
    let mut chain = Vec::new();
    let mut x = target;
    while let Some((prev, c)) = parent[x] {
        chain.push(c);
        x = prev;
    }
    chain.reverse();
    let genus = chain.len();
    let mut entries = c_part;
    for c in chain {
        let (a, b) = pair_for[c].expect("BFS only steps through realizable commutators");
        entries.push(a);
        entries.push(b);
    }
    Ok(HurwitzVector::new(d, genus, entries).expect("lengths match"))
}

/// The predicted stable ε̂-classes over one ν̂-type: the `K_Γ` coset
/// `ε(anchor) + image(H_{2,Γ})`, Aut-canonicalized and deduplicated.
pub fn predicted_epsilon_hats(
    ctx: &GroupContext,
    nu_counts: &[usize],
) -> crate::Result<Vec<EpsilonHat>> {
    let anchor = anchor_vector(ctx, nu_counts)?;
    let eps = epsilon(ctx, &anchor)?;
    let gamma = eps.gamma().to_vec();
    let kg = ctx.k_gamma(&gamma)?;
    let h2g = ctx.h2_gamma(&gamma)?;
    let raw0: Vec<Int> = eps.raw().iter().map(|&x| Int::from(x)).collect();
    let basis = h2g.numerator_basis();
    let mut fiber: BTreeMap<Vec<Int>, Vec<Int>> = BTreeMap::new();
    fiber.insert(kg.canonical_key(&raw0), raw0.clone());
    let mut stack = vec![raw0];
    while let Some(raw) = stack.pop() {
        for r in 0..basis.rows() {
            let shifted: Vec<Int> = (0..raw.len()).map(|i| &raw[i] + basis.get(r, i)).collect();
            let key = kg.canonical_key(&shifted);
            if !fiber.contains_key(&key) {
                fiber.insert(key, shifted.clone());
                stack.push(shifted);
            }
        }
    }
    assert_eq!(
        Int::from(fiber.len()),
        h2g.order(),
        "ε-fiber size must equal |H_2,Γ| (injectivity of H_2,Γ → K_Γ)"
    );
    let mut hats = Vec::with_capacity(fiber.len());
    for raw in fiber.values() {
        hats.push(epsilon_hat_from_raw(ctx, &gamma, raw)?);
    }
    hats.sort();
    hats.dedup();
    Ok(hats)
}

/// Per-genus classification statistics.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub genus: usize,
    pub orbits: usize,
    pub per_nu: BTreeMap<String, usize>,
    pub per_epsilon: BTreeMap<String, usize>,
    /// Predicted number of admissible ε̂-classes (genus-independent).
    pub admissible: usize,
    /// Realized ε̂-classes equal the predicted admissible set, one orbit each.
    pub bijection: bool,
}

/// One `(genus, ν̂)` line of the report (the CSV rows).
#[derive(Clone, Debug, Serialize)]
pub struct NuRow {
    pub genus: usize,
    pub nu: String,
    pub orbits: usize,
    pub realized_epsilon: usize,
    pub predicted_epsilon: usize,
    pub bijection: bool,
}

/// Classification of HS orbits over a genus range, with the stable-range
/// comparison against predicted admissible ε̂-classes.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub group: String,
    pub d: usize,
    pub rows: Vec<ReportRow>,
    pub stable_from: Option<usize>,
    #[serde(skip)]
    pub nu_rows: Vec<NuRow>,
}

/// Compute orbit partitions for each genus in `genus_range` (inclusive) and
/// assemble the classification report.
pub fn classification_report(
    ctx: &GroupContext,
    d: usize,
    genus_range: (usize, usize),
    filter: Option<&NuType>,
    options: &OrbitOptions,
) -> crate::Result<ClassificationReport> {
    let (lo, hi) = genus_range;
    let mut partitions = Vec::new();
    for genus in lo..=hi {
        partitions.push((genus, orbit_decompose(ctx, d, genus, filter, options)?));
    }
    build_report(ctx, d, &partitions, filter)
}

/// Assemble the report from precomputed partitions.
pub fn build_report(
    ctx: &GroupContext,
    d: usize,
    partitions: &[(usize, OrbitPartition)],
    filter: Option<&NuType>,
) -> crate::Result<ClassificationReport> {
    let perms = class_permutations(ctx)?;
    let mut scope = admissible_nu_hats(ctx, d)?;
    if let Some(nu) = filter {
        let hat = nu_hat_counts(nu, &perms);
        scope.retain(|s| *s == hat);
    }
    let mut predicted: BTreeMap<Vec<usize>, Vec<EpsilonHat>> = BTreeMap::new();
    for nu_hat in &scope {
        predicted.insert(nu_hat.clone(), predicted_epsilon_hats(ctx, nu_hat)?);
    }
    let admissible_total: usize = predicted.values().map(Vec::len).sum();

    let mut rows = Vec::new();
    let mut nu_rows = Vec::new();
    for (genus, partition) in partitions {
        let mut per_nu: BTreeMap<String, usize> = BTreeMap::new();
        let mut per_epsilon: BTreeMap<String, usize> = BTreeMap::new();
        let mut realized: BTreeMap<Vec<usize>, BTreeMap<EpsilonHat, usize>> = BTreeMap::new();
        for orbit in partition.orbits() {
            if !scope.contains(&orbit.nu_hat) {
                return Err(violation(format!(
                    "orbit with inadmissible ν̂ {} at genus {genus}",
                    nu_label(&orbit.nu_hat)
                )));
            }
            *per_nu.entry(nu_label(&orbit.nu_hat)).or_default() += 1;
            *per_epsilon.entry(orbit.eps_hat.label()).or_default() += 1;
            *realized
                .entry(orbit.nu_hat.clone())
                .or_default()
                .entry(orbit.eps_hat.clone())
                .or_default() += 1;
        }
        let mut row_bijection = true;
        for nu_hat in &scope {
            let expected = &predicted[nu_hat];
            let empty = BTreeMap::new();
            let got = realized.get(nu_hat).unwrap_or(&empty);
            let got_classes: Vec<&EpsilonHat> = got.keys().collect();
            let nu_bijection = got_classes.len() == expected.len()
                && got_classes
                    .iter()
                    .zip(expected.iter())
                    .all(|(a, b)| **a == *b)
                && got.values().all(|&c| c == 1);
            row_bijection &= nu_bijection;
            nu_rows.push(NuRow {
                genus: *genus,
                nu: nu_label(nu_hat),
                orbits: got.values().sum(),
                realized_epsilon: got_classes.len(),
                predicted_epsilon: expected.len(),
                bijection: nu_bijection,
            });
        }
        rows.push(ReportRow {
            genus: *genus,
            orbits: partition.orbit_count(),
            per_nu,
            per_epsilon,
            admissible: admissible_total,
            bijection: row_bijection,
        });
    }

    let mut stable_from = None;
    for row in rows.iter().rev() {
        if row.bijection {
            stable_from = Some(row.genus);
        } else {
            break;
        }
    }

    Ok(ClassificationReport {
        group: ctx.group().name().to_string(),
        d,
        rows,
        stable_from,
        nu_rows,
    })
}

/// One surjectivity check of the stabilization map between consecutive
/// genera: every orbit at `to_genus` must contain a stabilized
/// representative from `from_genus`.
#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityCheck {
    pub from_genus: usize,
    pub to_genus: usize,
    pub covered: usize,
    pub orbits: usize,
    pub pass: bool,
}

/// Verdict of the genus-stabilization experiment.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizationVerdict {
    pub group: String,
    pub d: usize,
    pub max_genus: usize,
    pub surjectivity: Vec<SurjectivityCheck>,
    pub injective_at_top: bool,
    pub bijection_at_top: bool,
    pub stable_from: Option<usize>,
    /// Failure hypotheses when the bijection does not hold at the top genus.
    pub hypotheses: Vec<String>,
    pub report: ClassificationReport,
}

/// Run the three stabilization checks up to `max_genus`:
/// (a) surjectivity of stabilization between consecutive genera (from
/// `surjectivity_from`, default `|G|`), (b) ε̂ injectivity on orbits at the
/// top genus, (c) the orbit ↔ admissible-ε̂ bijection at the top genus.
pub fn verify_genus_stabilization(
    ctx: &GroupContext,
    d: usize,
    max_genus: usize,
    surjectivity_from: Option<usize>,
    options: &OrbitOptions,
) -> crate::Result<StabilizationVerdict> {
    let auts = ctx.automorphisms()?;
    let mut partitions = Vec::new();
    for genus in 0..=max_genus {
        partitions.push((genus, orbit_decompose(ctx, d, genus, None, options)?));
    }
    let report = build_report(ctx, d, &partitions, None)?;

    let surj_lo = surjectivity_from.unwrap_or(ctx.group().order());
    let mut surjectivity = Vec::new();
    for g in surj_lo..max_genus {
        let (_, lower) = &partitions[g];
        let (_, upper) = &partitions[g + 1];
        let mut covered = vec![false; upper.orbit_count()];
        for orbit in lower.orbits() {
            let stabilized = orbit.representative.stabilize(1);
            let oid = upper
                .orbit_of_entries(auts, stabilized.entries())
                .ok_or_else(|| {
                    violation(format!(
                        "stabilized representative {:?} is not an HS state at genus {}",
                        stabilized.entries(),
                        g + 1
                    ))
                })?;
            covered[oid] = true;
        }
        let covered_count = covered.iter().filter(|&&c| c).count();
        surjectivity.push(SurjectivityCheck {
            from_genus: g,
            to_genus: g + 1,
            covered: covered_count,
            orbits: upper.orbit_count(),
            pass: covered_count == upper.orbit_count(),
        });
    }

    let top_row = report.rows.last();
    let injective_at_top = top_row.map_or(true, |row| row.per_epsilon.values().all(|&c| c <= 1));
    let bijection_at_top = top_row.map_or(false, |row| row.bijection);
    let mut hypotheses = Vec::new();
    if !bijection_at_top {
        hypotheses.push(format!(
            "genus {max_genus} may be below the stable range; rerun with a larger --max-genus"
        ));
        let gaps: Vec<String> = report
            .nu_rows
            .iter()
            .filter(|r| r.genus == max_genus && !r.bijection)
            .map(|r| {
                format!(
                    "ν̂ {}: {} orbits over {} realized ε̂-classes vs {} predicted",
                    r.nu, r.orbits, r.realized_epsilon, r.predicted_epsilon
                )
            })
            .collect();
        hypotheses.push(format!(
            "the move set may be missing a generator; per-ν̂ gaps at genus {max_genus}: {}",
            if gaps.is_empty() {
                "none".to_string()
            } else {
                gaps.join("; ")
            }
        ));
    }

    Ok(StabilizationVerdict {
        group: ctx.group().name().to_string(),
        d,
        max_genus,
        surjectivity,
        injective_at_top,
        bijection_at_top,
        stable_from: report.stable_from,
        hypotheses,
        report,
    })
}

/// Counters from a move-invariance verification pass.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct MoveInvarianceStats {
    pub states: u64,
    pub edges: u64,
}

impl MoveInvarianceStats {
    fn merge(self, other: MoveInvarianceStats) -> MoveInvarianceStats {
        MoveInvarianceStats {
            states: self.states + other.states,
            edges: self.edges + other.edges,
        }
    }
}

/// Exhaustively verify that every enabled move preserves ν and ε on every
/// HS of every shape with `d ≤ d_max`, `genus ≤ genus_max`. Aborts with an
/// invariant violation on the first failure.
pub fn verify_epsilon_on_moves(
    ctx: &GroupContext,
    d_max: usize,
    genus_max: usize,
    options: &OrbitOptions,
) -> crate::Result<MoveInvarianceStats> {
    let group = ctx.group();
    let classes = ctx.classes();
    let mut total = MoveInvarianceStats::default();
    for d in 0..=d_max {
        for genus in 0..=genus_max {
            let required = raw_tuple_count(group, classes, d, genus, None)?;
            if required > options.max_states {
                return Err(HurwitzError::BudgetExceeded {
                    required,
                    cap: options.max_states,
                }
                .into());
            }
            let prefixes = scan_prefixes(group, classes, d, None, options.target_tasks);
            let stats = prefixes
                .par_iter()
                .map(|prefix| -> crate::Result<MoveInvarianceStats> {
                    let mut local = MoveInvarianceStats::default();
                    let mut failure: Option<crate::Error> = None;
                    scan_hs(group, classes, d, genus, None, prefix, &mut |v| {
                        if failure.is_some() {
                            return;
                        }
                        if let Err(e) = check_all_moves_at(ctx, v, &options.moves, &mut local) {
                            failure = Some(e);
                        }
                    });
                    match failure {
                        Some(e) => Err(e),
                        None => Ok(local),
                    }
                })
                .try_reduce(MoveInvarianceStats::default, |a, b| Ok(a.merge(b)))?;
            total = total.merge(stats);
        }
    }
    Ok(total)
}

fn check_all_moves_at(
    ctx: &GroupContext,
    v: &HurwitzVector,
    moves: &MoveSet,
    stats: &mut MoveInvarianceStats,
) -> crate::Result<()> {
    let group = ctx.group();
    let classes = ctx.classes();
    let nu_v = nu_type(v, classes)?;
    let kg = ctx.k_gamma(&v.gamma(classes))?;
    let raw_v = relation_vector_i64(group, &fold_letters(group, hs_word(v)));
    stats.states += 1;
    for (mv, w) in neighbor_states(group, v, moves) {
        check_edge(group, classes, &kg, &nu_v, &raw_v, mv, &w)?;
        stats.edges += 1;
    }
    Ok(())
}

/// Verify ν/ε preservation along random move walks: each walk starts at a
/// rejection-sampled HS of shape `(d, genus)` and applies `length` uniformly
/// chosen applicable moves, comparing every state against the walk's initial
/// ε. Fully determined by `seed`. Returns zero counters if no HS can be
/// sampled for this shape.
pub fn verify_epsilon_random_walks(
    ctx: &GroupContext,
    d: usize,
    genus: usize,
    walks: usize,
    length: usize,
    seed: u64,
    moves: &MoveSet,
) -> crate::Result<MoveInvarianceStats> {
    let group = ctx.group();
    let classes = ctx.classes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = MoveInvarianceStats::default();
    for _ in 0..walks {
        let Some(start) = sample_hs(group, d, genus, &mut rng, 100_000) else {
            return Ok(stats);
        };
        let nu_0 = nu_type(&start, classes)?;
        let kg = ctx.k_gamma(&start.gamma(classes))?;
        let raw_0 = relation_vector_i64(group, &fold_letters(group, hs_word(&start)));
        stats.states += 1;
        let mut v = start;
        for _ in 0..length {
            let neighbors = neighbor_states(group, &v, moves);
            if neighbors.is_empty() {
                break;
            }
            let (mv, w) = neighbors[rng.gen_range(0..neighbors.len())].clone();
            check_edge(group, classes, &kg, &nu_0, &raw_0, mv, &w)?;
            stats.edges += 1;
            v = w;
        }
    }
    Ok(stats)
}

fn sample_hs(
    group: &FiniteGroup,
    d: usize,
    genus: usize,
    rng: &mut ChaCha8Rng,
    attempts: usize,
) -> Option<HurwitzVector> {
    let n = group.order();
    if d > 0 && n == 1 {
        return None;
    }
    for _ in 0..attempts {
        let mut entries = Vec::with_capacity(d + 2 * genus);
        for _ in 0..d {
            entries.push(rng.gen_range(1..n));
        }
        for _ in 0..2 * genus {
            entries.push(rng.gen_range(0..n));
        }
        let v = HurwitzVector::new(d, genus, entries).expect("lengths match");
        if v.is_hurwitz_generating_system(group) {
            return Some(v);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_roundtrip_and_lex_order() {
        let packing = StatePacking::new(6, 4).unwrap();
        let a = [0usize, 3, 5, 1];
        let b = [0usize, 4, 0, 0];
        assert_eq!(packing.unpack(packing.pack(&a)), a.to_vec());
        assert!(packing.pack(&a) < packing.pack(&b), "packing preserves lex order");
        assert!(StatePacking::new(2, 128).is_ok());
        assert!(StatePacking::new(2, 129).is_err());
        assert!(StatePacking::new(64, 21).is_ok());
        assert!(StatePacking::new(64, 22).is_err());
    }

    #[test]
    fn z2_unramified_single_orbit() {
        let ctx = GroupContext::new(FiniteGroup::cyclic(2));
        let partition =
            orbit_decompose(&ctx, 0, 1, None, &OrbitOptions::default()).unwrap();
        assert_eq!(partition.state_count(), 3);
        assert_eq!(partition.orbit_count(), 1);
        assert_eq!(partition.orbits()[0].size, 3);
        assert_eq!(partition.orbits()[0].representative.entries(), &[0, 1]);
    }

    #[test]
    fn z2_d3_has_no_admissible_nu() {
        let ctx = GroupContext::new(FiniteGroup::cyclic(2));
        assert!(admissible_nu_hats(&ctx, 3).unwrap().is_empty());
        let partition =
            orbit_decompose(&ctx, 3, 1, None, &OrbitOptions::default()).unwrap();
        assert_eq!(partition.orbit_count(), 0);
        let report =
            classification_report(&ctx, 3, (0, 2), None, &OrbitOptions::default()).unwrap();
        assert!(report.rows.iter().all(|r| r.orbits == 0 && r.bijection));
        assert_eq!(report.stable_from, Some(0));
    }

    #[test]
    fn v4_unramified_prediction_is_two_classes() {
        let ctx = GroupContext::new(FiniteGroup::abelian(&[2, 2]));
        let hats = predicted_epsilon_hats(&ctx, &[0, 0, 0]).unwrap();
        assert_eq!(hats.len(), 2, "|H₂(V₄)| = 2 and Aut acts trivially on it");
    }

    #[test]
    fn s3_anchor_realizes_nu() {
        let ctx = GroupContext::new(FiniteGroup::symmetric(3));
        // Two transpositions (class 2 in the frozen ordering is the
        // transposition class with representative index 2).
        let anchor = anchor_vector(&ctx, &[0, 2]).unwrap();
        assert_eq!(anchor.evaluate(ctx.group()), 0);
        let nu = nu_type(&anchor, ctx.classes()).unwrap();
        assert_eq!(nu.counts(), &[0, 2]);
    }

    #[test]
    fn random_walks_preserve_epsilon() {
        let ctx = GroupContext::new(FiniteGroup::symmetric(3));
        let stats =
            verify_epsilon_random_walks(&ctx, 2, 1, 5, 30, 7, &MoveSet::all()).unwrap();
        assert_eq!(stats.states, 5);
        assert_eq!(stats.edges, 150);
    }
}
