//! Exact finite-group arithmetic.
//!
//! A [`FiniteGroup`] is a fully validated multiplication table over element
//! indices `0..n` with the identity at index `0`. Groups are built either
//! from an explicit table or from permutation generators (breadth-first
//! closure, elements ordered by discovery), and are immutable afterwards.
//!
//! On top of the table the module provides conjugacy classes, subgroup
//! closure, normal closures and quotient groups, the abelianization `G^{ab}`
//! in invariant-factor form, and the full automorphism group `Aut(G)` for
//! small orders (backtracking over images of a minimal generating tuple).

use crate::lattice::{Int, IntMatrix, QuotientPresentation};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard default on closure size when building from permutation generators.
pub const DEFAULT_CLOSURE_CAP: usize = 4096;
/// Default cap on |G| for automorphism-group enumeration.
pub const DEFAULT_AUT_CAP: usize = 24;

/// Errors from group construction and group-level algorithms.
#[derive(Debug, Error)]
pub enum GroupError {
    #[error("group table is empty")]
    EmptyTable,
    #[error("table row {row} has length {len}, expected {expected}")]
    RaggedTable {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("table entry ({i},{j}) = {value} is out of range for order {order}")]
    EntryOutOfRange {
        i: usize,
        j: usize,
        value: usize,
        order: usize,
    },
    #[error("identity axiom violated at element {i} (index 0 must be the identity)")]
    IdentityAxiom { i: usize },
    #[error("row {row} is not a permutation")]
    RowNotPermutation { row: usize },
    #[error("column {col} is not a permutation")]
    ColNotPermutation { col: usize },
    #[error("associativity fails at ({i},{j},{k})")]
    NonAssociative { i: usize, j: usize, k: usize },
    #[error("left and right inverses disagree for element {element}")]
    InverseMismatch { element: usize },
    #[error("generator {index} is invalid: {reason}")]
    BadPermutation { index: usize, reason: String },
    #[error("permutation closure exceeds the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("group order {order} exceeds the automorphism-search cap {cap}")]
    AutCapExceeded { order: usize, cap: usize },
    #[error("element set is not a normal subgroup: {reason}")]
    NotNormal { reason: String },
    #[error("invalid group spec: {reason}")]
    BadSpec { reason: String },
}

impl GroupError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            GroupError::ClosureCapExceeded { .. } | GroupError::AutCapExceeded { .. }
        )
    }
}

/// JSON group description: either a full multiplication table (identity at
/// index 0) or permutation generators on `0..degree`, given as image lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<usize>>>,
}

/// Build a group from a [`GroupSpec`] (table or permutation generators).
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    match (&spec.table, &spec.generators) {
        (Some(table), None) => {
            if spec.degree.is_some() {
                return Err(GroupError::BadSpec {
                    reason: "\"degree\" is only valid with \"generators\"".into(),
                });
            }
            FiniteGroup::from_table(&spec.name, table)
        }
        (None, Some(gens)) => {
            let degree = spec.degree.ok_or_else(|| GroupError::BadSpec {
                reason: "\"generators\" requires \"degree\"".into(),
            })?;
            FiniteGroup::from_permutations(&spec.name, degree, gens, DEFAULT_CLOSURE_CAP)
        }
        (Some(_), Some(_)) => Err(GroupError::BadSpec {
            reason: "spec must contain exactly one of \"table\" or \"generators\", not both"
                .into(),
        }),
        (None, None) => Err(GroupError::BadSpec {
            reason: "spec must contain \"table\" or \"generators\"".into(),
        }),
    }
}

/// A finite group as a validated multiplication table.
///
/// Elements are the indices `0..n` with `0` the identity. The table is
/// immutable after construction and all invariants (identity, Latin-square
/// rows/columns, associativity, two-sided inverses) have been checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    n: usize,
    /// Flattened `n×n` multiplication table: `mult[i*n + j] = i·j`.
    mult: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteGroup {
    /// Validate and wrap an explicit multiplication table.
    pub fn from_table(name: &str, table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::EmptyTable);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::RaggedTable {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            for (j, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange {
                        i: row,
                        j,
                        value,
                        order: n,
                    });
                }
            }
        }
        let mut mult = Vec::with_capacity(n * n);
        for r in table {
            mult.extend_from_slice(r);
        }
        Self::validated(name.to_string(), n, mult, None)
    }

    fn validated(
        name: String,
        n: usize,
        mult: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        for i in 0..n {
            if mult[i] != i || mult[i * n] != i {
                return Err(GroupError::IdentityAxiom { i });
            }
        }
        let mut seen = vec![false; n];
        for row in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for j in 0..n {
                let v = mult[row * n + j];
                if seen[v] {
                    return Err(GroupError::RowNotPermutation { row });
                }
                seen[v] = true;
            }
        }
        for col in 0..n {
            seen.iter_mut().for_each(|s| *s = false);
            for i in 0..n {
                let v = mult[i * n + col];
                if seen[v] {
                    return Err(GroupError::ColNotPermutation { col });
                }
                seen[v] = true;
            }
        }
        // Full associativity check for small orders; deterministic sampling
        // beyond (O(n³) would be prohibitive there).
        if n <= 64 {
            for i in 0..n {
                for j in 0..n {
                    let ij = mult[i * n + j];
                    for k in 0..n {
                        if mult[ij * n + k] != mult[i * n + mult[j * n + k]] {
                            return Err(GroupError::NonAssociative { i, j, k });
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            for _ in 0..200_000 {
                state = state.wrapping_mul(0x5851_f42d_4c95_7f2d).wrapping_add(1);
                let i = (state >> 40) as usize % n;
                let j = (state >> 20) as usize % n;
                let k = state as usize % n;
                let ij = mult[i * n + j];
                if mult[ij * n + k] != mult[i * n + mult[j * n + k]] {
                    return Err(GroupError::NonAssociative { i, j, k });
                }
            }
        }
        let mut inv = vec![0usize; n];
        for i in 0..n {
            let j = (0..n)
                .find(|&j| mult[i * n + j] == 0)
                .expect("row is a permutation, so it contains 0");
            if mult[j * n + i] != 0 {
                return Err(GroupError::InverseMismatch { element: i });
            }
            inv[i] = j;
        }
        Ok(FiniteGroup {
            name,
            n,
            mult,
            inv,
            labels,
        })
    }

    /// Breadth-first closure of permutation generators on `0..degree`.
    ///
    /// Permutations are image lists; the product `p·q` acts left to right
    /// (`(p·q)(x) = q(p(x))`). The identity gets index 0 and the remaining
    /// elements are indexed in discovery order, which makes reports
    /// deterministic for a fixed generator list.
    pub fn from_permutations(
        name: &str,
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        if degree == 0 {
            return Err(GroupError::BadSpec {
                reason: "degree must be positive".into(),
            });
        }
        for (index, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::BadPermutation {
                    index,
                    reason: format!("length {} does not match degree {degree}", g.len()),
                });
            }
            let mut seen = vec![false; degree];
            for &image in g {
                if image >= degree || seen[image] {
                    return Err(GroupError::BadPermutation {
                        index,
                        reason: "not a permutation of 0..degree".into(),
                    });
                }
                seen[image] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements: Vec<Vec<usize>> = vec![identity.clone()];
        let mut index_of = std::collections::HashMap::new();
        index_of.insert(identity, 0usize);
        let mut frontier = 0usize;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            for g in generators {
                // left-to-right product: apply `current`, then `g`
                let product: Vec<usize> = current.iter().map(|&x| g[x]).collect();
                if !index_of.contains_key(&product) {
                    if elements.len() >= cap {
                        return Err(GroupError::ClosureCapExceeded { cap });
                    }
                    index_of.insert(product.clone(), elements.len());
                    elements.push(product);
                }
            }
            frontier += 1;
        }
        let n = elements.len();
        let mut mult = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                let product: Vec<usize> = elements[i].iter().map(|&x| elements[j][x]).collect();
                mult[i * n + j] = index_of[&product];
            }
        }
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::validated(name.to_string(), n, mult, Some(labels))
    }

    /// Cyclic group ℤ/m with addition.
    pub fn cyclic(m: usize) -> Self {
        assert!(m >= 1);
        let mut table = vec![0usize; m * m];
        for i in 0..m {
            for j in 0..m {
                table[i * m + j] = (i + j) % m;
            }
        }
        let labels = (0..m).map(|i| i.to_string()).collect();
        Self::validated(format!("Z{m}"), m, table, Some(labels)).expect("cyclic table is a group")
    }

    /// Direct product with index `(i, j) ↦ i·|B| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.n, b.n);
        let n = na * nb;
        let mut mult = vec![0usize; n * n];
        for i1 in 0..na {
            for j1 in 0..nb {
                for i2 in 0..na {
                    for j2 in 0..nb {
                        let x = i1 * nb + j1;
                        let y = i2 * nb + j2;
                        mult[x * n + y] = a.mul(i1, i2) * nb + b.mul(j1, j2);
                    }
                }
            }
        }
        let labels = match (&a.labels, &b.labels) {
            (Some(la), Some(lb)) => {
                let mut out = Vec::with_capacity(n);
                for i in 0..na {
                    for j in 0..nb {
                        out.push(format!("({},{})", la[i], lb[j]));
                    }
                }
                Some(out)
            }
            _ => None,
        };
        Self::validated(format!("{}x{}", a.name, b.name), n, mult, labels)
            .expect("product of groups is a group")
    }

    /// Direct product of cyclic groups ℤ/d₁ × ℤ/d₂ × …
    pub fn abelian(factors: &[usize]) -> Self {
        assert!(!factors.is_empty());
        let mut g = Self::cyclic(factors[0]);
        for &d in &factors[1..] {
            g = Self::direct_product(&g, &Self::cyclic(d));
        }
        g
    }

    /// Dihedral group of order 2m: elements `r^a s^b` with `s r s⁻¹ = r⁻¹`,
    /// indexed `a + m·b`.
    pub fn dihedral(m: usize) -> Self {
        assert!(m >= 1);
        let n = 2 * m;
        let mut mult = vec![0usize; n * n];
        for a1 in 0..m {
            for b1 in 0..2usize {
                for a2 in 0..m {
                    for b2 in 0..2usize {
                        // r^a1 s^b1 · r^a2 s^b2 = r^(a1 ± a2) s^(b1+b2)
                        let a = if b1 == 0 {
                            (a1 + a2) % m
                        } else {
                            (a1 + m - a2 % m) % m
                        };
                        let b = (b1 + b2) % 2;
                        mult[(a1 + m * b1) * n + (a2 + m * b2)] = a + m * b;
                    }
                }
            }
        }
        let mut labels = Vec::with_capacity(n);
        for b in 0..2 {
            for a in 0..m {
                labels.push(match (a, b == 0) {
                    (0, true) => "1".to_string(),
                    (_, true) => format!("r{a}"),
                    (0, false) => "s".to_string(),
                    (_, false) => format!("r{a}s"),
                });
            }
        }
        Self::validated(format!("D{m}"), n, mult, Some(labels)).expect("dihedral table is a group")
    }

    /// Quaternion group Q₈ = {±1, ±i, ±j, ±k}.
    pub fn quaternion8() -> Self {
        // element = (sign, unit) with unit ∈ {1, i, j, k}; index = 2·unit + sign
        const UNIT: [[(usize, usize); 4]; 4] = [
            // unit multiplication table: (resulting unit, sign flip)
            [(0, 0), (1, 0), (2, 0), (3, 0)], // 1·x
            [(1, 0), (0, 1), (3, 0), (2, 1)], // i·{1,i,j,k} = {i, -1, k, -j}
            [(2, 0), (3, 1), (0, 1), (1, 0)], // j·{1,i,j,k} = {j, -k, -1, i}
            [(3, 0), (2, 0), (1, 1), (0, 1)], // k·{1,i,j,k} = {k, j, -i, -1}
        ];
        let n = 8;
        let mut mult = vec![0usize; n * n];
        for u1 in 0..4 {
            for s1 in 0..2 {
                for u2 in 0..4 {
                    for s2 in 0..2 {
                        let (u, flip) = UNIT[u1][u2];
                        let s = (s1 + s2 + flip) % 2;
                        mult[(2 * u1 + s1) * n + (2 * u2 + s2)] = 2 * u + s;
                    }
                }
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::validated("Q8".to_string(), n, mult, Some(labels))
            .expect("quaternion table is a group")
    }

    /// Symmetric group on `k` points via the standard generators
    /// (full cycle, transposition).
    pub fn symmetric(k: usize) -> Self {
        assert!(k >= 1);
        let cycle: Vec<usize> = (0..k).map(|x| (x + 1) % k).collect();
        let mut transposition: Vec<usize> = (0..k).collect();
        if k >= 2 {
            transposition.swap(0, 1);
        }
        let gens = if k >= 3 {
            vec![cycle, transposition]
        } else {
            vec![transposition]
        };
        Self::from_permutations(&format!("S{k}"), k, &gens, DEFAULT_CLOSURE_CAP)
            .expect("symmetric group generators are valid")
    }

    /// Alternating group A₄ via (0 1 2) and (0 1)(2 3).
    pub fn alternating4() -> Self {
        let gens = vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]];
        Self::from_permutations("A4", 4, &gens, DEFAULT_CLOSURE_CAP)
            .expect("alternating group generators are valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(labels) => labels[g].clone(),
            None => g.to_string(),
        }
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// Conjugate `u a u⁻¹`.
    #[inline]
    pub fn conj(&self, u: usize, a: usize) -> usize {
        self.mul(self.mul(u, a), self.inv[u])
    }

    /// Commutator `[a,b] = a b a⁻¹ b⁻¹`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv[a], self.inv[b]))
    }

    pub fn pow(&self, a: usize, mut e: i64) -> usize {
        let base = if e < 0 {
            e = -e;
            self.inv[a]
        } else {
            a
        };
        let mut acc = 0usize;
        for _ in 0..e {
            acc = self.mul(acc, base);
        }
        acc
    }

    /// Order of an element.
    pub fn order_of(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Smallest subset containing `seed ∪ {identity}` closed under
    /// multiplication (and hence inverses), as a sorted list.
    pub fn subgroup_generated(&self, seed: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.n];
        member[0] = true;
        let mut worklist = vec![0usize];
        while let Some(x) = worklist.pop() {
            for &g in seed {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    worklist.push(y);
                }
            }
        }
        (0..self.n).filter(|&i| member[i]).collect()
    }

    /// Do the given elements generate the whole group?
    pub fn generates(&self, seed: &[usize]) -> bool {
        self.subgroup_generated(seed).len() == self.n
    }

    /// Sorted element list of the normal closure ⟨⟨seed⟩⟩.
    pub fn normal_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut conjugates = Vec::new();
        for &s in seed {
            for u in 0..self.n {
                conjugates.push(self.conj(u, s));
            }
        }
        conjugates.sort_unstable();
        conjugates.dedup();
        self.subgroup_generated(&conjugates)
    }

    /// Quotient by a normal subgroup (given as a sorted element list).
    /// Returns the quotient group and the projection `element → coset index`.
    /// Coset indices are assigned by ascending minimal coset element, so the
    /// identity coset is index 0.
    pub fn quotient(&self, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        let closure = self.subgroup_generated(normal);
        if closure != normal {
            return Err(GroupError::NotNormal {
                reason: "set is not closed under multiplication".into(),
            });
        }
        for &s in normal {
            for u in 0..self.n {
                if normal.binary_search(&self.conj(u, s)).is_err() {
                    return Err(GroupError::NotNormal {
                        reason: format!("conjugate of element {s} escapes the set"),
                    });
                }
            }
        }
        // minimal element of each left coset g·N
        let mut coset_min = vec![usize::MAX; self.n];
        for g in 0..self.n {
            let min = normal.iter().map(|&s| self.mul(g, s)).min().unwrap();
            coset_min[g] = min;
        }
        let mut reps: Vec<usize> = coset_min.clone();
        reps.sort_unstable();
        reps.dedup();
        let proj: Vec<usize> = coset_min
            .iter()
            .map(|m| reps.binary_search(m).unwrap())
            .collect();
        let m = reps.len();
        let mut mult = vec![0usize; m * m];
        for (qi, &ri) in reps.iter().enumerate() {
            for (qj, &rj) in reps.iter().enumerate() {
                mult[qi * m + qj] = proj[self.mul(ri, rj)];
            }
        }
        let q = Self::validated(format!("{}/N{}", self.name, normal.len()), m, mult, None)?;
        Ok((q, proj))
    }

    /// Conjugacy class partition with deterministic ids (ordered by minimal
    /// element; class 0 is always the identity class).
    pub fn conjugacy_classes(&self) -> ConjugacyClassTable {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes = Vec::new();
        for g in 0..self.n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let id = classes.len();
            let mut members = Vec::new();
            for u in 0..self.n {
                let c = self.conj(u, g);
                if class_of[c] == usize::MAX {
                    class_of[c] = id;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        ConjugacyClassTable { class_of, classes }
    }

    /// Abelianization `G^{ab} = G/[G,G]` in invariant-factor form, with the
    /// projection map. Modeled as ℤ^G modulo the lattice spanned by
    /// `[g] + [h] − [gh]` (whose quotient is exactly `G^{ab}`: the identity
    /// relation forces `[1] = 0` and the rows force `g ↦ [g]` to be a
    /// homomorphism, universal among maps to abelian groups).
    pub fn abelianization(&self) -> Abelianization {
        let n = self.n;
        let mut rows = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let mut row = vec![Int::zero(); n];
                row[g] += 1;
                row[h] += 1;
                row[self.mul(g, h)] -= 1;
                rows.push(row);
            }
        }
        let gens = IntMatrix::from_rows(n, rows).expect("consistent widths");
        let pres = QuotientPresentation::new(n, &gens).expect("dimensions agree");
        assert_eq!(
            pres.free_rank(),
            0,
            "abelianization of a finite group is finite"
        );
        let proj: Vec<Vec<Int>> = (0..n)
            .map(|g| {
                let mut e = vec![Int::zero(); n];
                e[g] = Int::from(1);
                pres.canonical_coords(&e)
            })
            .collect();
        let moduli = pres.invariant_factors().to_vec();
        Abelianization { moduli, proj }
    }

    /// The full automorphism group, with the default order cap.
    pub fn automorphism_group(&self) -> Result<Vec<Automorphism>, GroupError> {
        self.automorphism_group_with_cap(DEFAULT_AUT_CAP)
    }

    /// Automorphisms by backtracking over images of a minimal generating
    /// tuple: candidate images must match element orders, and the partial
    /// map is closed under multiplication (with consistency checks) at every
    /// level. The result is sorted, contains the identity, and is closed
    /// under composition.
    pub fn automorphism_group_with_cap(
        &self,
        cap: usize,
    ) -> Result<Vec<Automorphism>, GroupError> {
        if self.n > cap {
            return Err(GroupError::AutCapExceeded {
                order: self.n,
                cap,
            });
        }
        let gens = self.minimal_generating_tuple();
        let orders: Vec<usize> = (0..self.n).map(|g| self.order_of(g)).collect();
        let mut out = Vec::new();
        let initial = {
            let mut phi = vec![usize::MAX; self.n];
            phi[0] = 0;
            phi
        };
        self.extend_automorphism(&gens, &orders, initial, &mut out);
        out.sort();
        debug_assert!(out.windows(2).all(|w| w[0] != w[1]));
        let auts: Vec<Automorphism> = out.into_iter().map(|perm| Automorphism { perm }).collect();
        debug_assert!(auts.iter().any(|a| a.is_identity()));
        Ok(auts)
    }

    /// First generating tuple in (length, lexicographic) order, among
    /// strictly increasing index tuples.
    fn minimal_generating_tuple(&self) -> Vec<usize> {
        fn search(
            group: &FiniteGroup,
            len: usize,
            start: usize,
            acc: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            if acc.len() == len {
                return group.generates(acc).then(|| acc.clone());
            }
            for g in start..group.n {
                acc.push(g);
                if let Some(found) = search(group, len, g + 1, acc) {
                    return Some(found);
                }
                acc.pop();
            }
            None
        }
        if self.n == 1 {
            return Vec::new();
        }
        for len in 1..=self.n {
            let mut acc = Vec::new();
            if let Some(found) = search(self, len, 1, &mut acc) {
                return found;
            }
        }
        unreachable!("the full element list generates")
    }

    fn extend_automorphism(
        &self,
        remaining_gens: &[usize],
        orders: &[usize],
        phi: Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some((&g, rest)) = remaining_gens.split_first() else {
            // All generators mapped and the closure succeeded, so phi is
            // total. Verify it is a bijective homomorphism outright.
            if phi.iter().any(|&x| x == usize::MAX) {
                return;
            }
            let mut seen = vec![false; self.n];
            for &x in &phi {
                if seen[x] {
                    return;
                }
                seen[x] = true;
            }
            for i in 0..self.n {
                for j in 0..self.n {
                    if phi[self.mul(i, j)] != self.mul(phi[i], phi[j]) {
                        return;
                    }
                }
            }
            out.push(phi);
            return;
        };
        for h in 0..self.n {
            if orders[h] != orders[g] {
                continue;
            }
            let mut next = phi.clone();
            if Self::close_partial_map(self, &mut next, g, h) {
                self.extend_automorphism(rest, orders, next, out);
            }
        }
    }

    /// Add `g ↦ h` to a partial homomorphism and close under products.
    /// Returns false on any inconsistency (map would not be a injective
    /// homomorphism).
    fn close_partial_map(&self, phi: &mut [usize], g: usize, h: usize) -> bool {
        if phi[g] != usize::MAX {
            return phi[g] == h;
        }
        phi[g] = h;
        let mut defined: Vec<usize> = (0..self.n).filter(|&x| phi[x] != usize::MAX).collect();
        let mut frontier: Vec<usize> = vec![g];
        while let Some(x) = frontier.pop() {
            let snapshot = defined.clone();
            for &y in &snapshot {
                for (p, q) in [(x, y), (y, x)] {
                    let z = self.mul(p, q);
                    let w = self.mul(phi[p], phi[q]);
                    if phi[z] == usize::MAX {
                        phi[z] = w;
                        defined.push(z);
                        frontier.push(z);
                    } else if phi[z] != w {
                        return false;
                    }
                }
            }
        }
        // injectivity on the defined part
        let mut seen = vec![false; self.n];
        for &x in &defined {
            if seen[phi[x]] {
                return false;
            }
            seen[phi[x]] = true;
        }
        true
    }
}

/// Conjugacy class partition of a group.
#[derive(Clone, Debug)]
pub struct ConjugacyClassTable {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl ConjugacyClassTable {
    #[inline]
    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// All classes, each a sorted element list; class 0 is `{identity}`.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Ids of the nontrivial classes (everything except the identity class).
    pub fn nontrivial_ids(&self) -> Vec<usize> {
        (1..self.classes.len()).collect()
    }

    /// Minimal element of a class (its canonical representative).
    pub fn representative(&self, class_id: usize) -> usize {
        self.classes[class_id][0]
    }
}

/// The abelianization `G^{ab}` in invariant-factor coordinates.
#[derive(Clone, Debug)]
pub struct Abelianization {
    /// Invariant factors d₁ | d₂ | … (each > 1); the group is ⊕ ℤ/dᵢ.
    moduli: Vec<Int>,
    /// Reduced coordinate vector of each group element.
    proj: Vec<Vec<Int>>,
}

impl Abelianization {
    pub fn invariant_factors(&self) -> &[Int] {
        &self.moduli
    }

    pub fn order(&self) -> Int {
        self.moduli.iter().product()
    }

    /// Coordinates of the class of element `g`.
    pub fn project(&self, g: usize) -> &[Int] {
        &self.proj[g]
    }

    pub fn zero(&self) -> Vec<Int> {
        vec![Int::zero(); self.moduli.len()]
    }

    /// Add `scale` copies of element `g`'s class into the accumulator,
    /// reducing modulo the invariant factors.
    pub fn add_scaled(&self, acc: &mut [Int], g: usize, scale: i64) {
        use num_integer::Integer;
        for (a, (x, m)) in acc.iter_mut().zip(self.proj[g].iter().zip(&self.moduli)) {
            *a = (&*a + x * Int::from(scale)).mod_floor(m);
        }
    }
}

/// An automorphism of a [`FiniteGroup`], stored as the image permutation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism {
            perm: (0..n).collect(),
        }
    }

    pub fn from_perm(perm: Vec<usize>) -> Self {
        Automorphism { perm }
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.perm[g]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            perm: other.perm.iter().map(|&x| self.perm[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut perm = vec![0usize; self.perm.len()];
        for (i, &x) in self.perm.iter().enumerate() {
            perm[x] = i;
        }
        Automorphism { perm }
    }
}

/// Cycle notation for a permutation given as an image list (identity = "()").
fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&x.to_string());
            first = false;
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}
