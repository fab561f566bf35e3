//! Independent oracles for the exact linear algebra: a naive textbook Smith
//! reduction, an adjugate-based coset equality test, and box-enumeration
//! membership checks for kernels and preimage lattices.

use hurwitz_core::lattice::{
    kernel, preimage_lattice, smith_normal_form, Int, IntMatrix, QuotientPresentation,
};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Textbook Smith reduction over i128: repeatedly move a minimal nonzero
/// entry to the pivot, clear its row and column by division steps, and
/// enforce divisibility into the remaining block. Returns the nonzero
/// diagonal (the invariant factors including 1s).
fn naive_smith_diagonal(mut m: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut t = 0;
    while t < rows.min(cols) {
        // Find a minimal-|value| nonzero entry in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut dirty = false;
        for i in t + 1..rows {
            if m[i][t] != 0 {
                let q = m[i][t].div_euclid(m[t][t]);
                for j in 0..cols {
                    m[i][j] -= q * m[t][j];
                }
                dirty |= m[i][t] != 0;
            }
        }
        for j in t + 1..cols {
            if m[t][j] != 0 {
                let q = m[t][j].div_euclid(m[t][t]);
                for row in m.iter_mut() {
                    row[j] -= q * row[t];
                }
                dirty |= m[t][j] != 0;
            }
        }
        if dirty {
            continue;
        }
        // Pivot divides everything in its row/column; enforce divisibility
        // into the remaining block.
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if m[i][j] % m[t][t] != 0 {
                    for k in 0..cols {
                        let add = m[i][k];
                        m[t][k] += add;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }
    (0..t).map(|i| m[i][i].abs()).collect()
}

fn invariant_factors_via_engine(rows: &[Vec<i64>], cols: usize) -> Vec<Int> {
    let m = IntMatrix::from_i64_rows(cols, rows);
    let snf = smith_normal_form(&m);
    snf.diagonal()
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.abs())
        .collect()
}

#[test]
fn snf_matches_naive_oracle_on_frozen_examples() {
    let cases: Vec<(Vec<Vec<i64>>, usize, Vec<i64>)> = vec![
        (vec![vec![2, 4], vec![6, 8]], 2, vec![2, 4]),
        (
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]],
            3,
            vec![2, 2, 156],
        ),
        (vec![vec![0, 0], vec![0, 0]], 2, vec![]),
        (vec![vec![1, 0, 0], vec![0, 1, 0]], 3, vec![1, 1]),
    ];
    for (rows, cols, expected) in cases {
        let engine = invariant_factors_via_engine(&rows, cols);
        let naive = naive_smith_diagonal(
            rows.iter()
                .map(|r| r.iter().map(|&x| x as i128).collect())
                .collect(),
        );
        let expected: Vec<Int> = expected.into_iter().map(Int::from).collect();
        let naive: Vec<Int> = naive.into_iter().map(Int::from).collect();
        assert_eq!(engine, expected);
        assert_eq!(naive, expected);
    }
}

#[test]
fn snf_matches_naive_oracle_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let engine = invariant_factors_via_engine(&m, cols);
        let naive: Vec<Int> = naive_smith_diagonal(
            m.iter()
                .map(|r| r.iter().map(|&x| x as i128).collect())
                .collect(),
        )
        .into_iter()
        .map(Int::from)
        .collect();
        assert_eq!(engine, naive, "matrix {m:?}");
    }
}

#[test]
fn snf_transforms_are_unimodular_and_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-9..=9)).collect())
            .collect();
        let a = IntMatrix::from_i64_rows(cols, &m);
        let snf = smith_normal_form(&a);
        let uav = snf.u.mul(&a).mul(&snf.v);
        for i in 0..uav.rows() {
            for j in 0..uav.cols() {
                let expected = if i == j { snf.d.get(i, i).clone() } else { Int::zero() };
                assert_eq!(*uav.get(i, j), expected, "U·A·V is the diagonal form");
            }
        }
        assert_eq!(snf.u.determinant().abs(), Int::one());
        assert_eq!(snf.v.determinant().abs(), Int::one());
        // Divisibility chain on the nonzero diagonal.
        let diag: Vec<Int> = snf
            .diagonal()
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| x.abs())
            .collect();
        for w in diag.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
        }
    }
}

/// Adjugate of a 3×3 i128 matrix.
fn adjugate3(b: &[[i128; 3]; 3]) -> [[i128; 3]; 3] {
    let c = |i: usize, j: usize| -> i128 {
        let r: Vec<usize> = (0..3).filter(|&x| x != i).collect();
        let s: Vec<usize> = (0..3).filter(|&x| x != j).collect();
        let minor = b[r[0]][s[0]] * b[r[1]][s[1]] - b[r[0]][s[1]] * b[r[1]][s[0]];
        if (i + j) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    // adj(B)[i][j] = cofactor(j, i)
    let mut adj = [[0i128; 3]; 3];
    for (i, row) in adj.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = c(j, i);
        }
    }
    adj
}

fn det3(b: &[[i128; 3]; 3]) -> i128 {
    b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0])
}

#[test]
fn quotient_coset_equality_matches_adjugate_oracle() {
    // ℤ³ / ⟨(2,4,4), (−6,6,12), (10,4,16)⟩: full-rank, |det| = 624,
    // invariant factors (2, 2, 156). For a full-rank lattice with basis rows
    // B, x ≡ y mod L ⟺ adj(Bᵀ)·(x−y) ≡ 0 mod det — an independent test of
    // coset equality.
    let rows = vec![vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
    let basis = [[2i128, 4, 4], [-6, 6, 12], [10, 4, 16]];
    // Columns of Bᵀ are the basis vectors; membership of v: solve Bᵀ·c = v.
    let bt = {
        let mut t = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                t[i][j] = basis[j][i];
            }
        }
        t
    };
    let det = det3(&bt);
    assert_eq!(det.abs(), 624);
    let adj = adjugate3(&bt);
    let in_lattice = |v: [i128; 3]| -> bool {
        (0..3).all(|i| {
            let s: i128 = (0..3).map(|j| adj[i][j] * v[j]).sum();
            s % det == 0
        })
    };
    let m = IntMatrix::from_i64_rows(3, &rows);
    let pres = QuotientPresentation::new(3, &m).unwrap();
    assert_eq!(
        pres.invariant_factors().to_vec(),
        vec![Int::from(2), Int::from(2), Int::from(156)]
    );
    assert_eq!(pres.free_rank(), 0);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let x: [i128; 3] = [
            rng.gen_range(-40..=40),
            rng.gen_range(-40..=40),
            rng.gen_range(-40..=40),
        ];
        let y: [i128; 3] = [
            rng.gen_range(-40..=40),
            rng.gen_range(-40..=40),
            rng.gen_range(-40..=40),
        ];
        let cx: Vec<Int> = x.iter().map(|&v| Int::from(v)).collect();
        let cy: Vec<Int> = y.iter().map(|&v| Int::from(v)).collect();
        let equal_engine = pres.canonical_coords(&cx) == pres.canonical_coords(&cy);
        let diff = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
        let equal_oracle = in_lattice(diff);
        assert_eq!(equal_engine, equal_oracle, "x = {x:?}, y = {y:?}");
        assert_eq!(pres.lattice_contains(&cx), in_lattice(x));
    }
}

fn box_vectors(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for v in &out {
            for x in -radius..=radius {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

#[test]
fn kernel_is_saturated_and_exact_on_boxes() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let rows = rng.gen_range(1..=3);
        let cols = rng.gen_range(1..=3);
        let m: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let a = IntMatrix::from_i64_rows(cols, &m);
        let k = kernel(&a);
        // Every kernel basis row maps to zero (column convention: A·x).
        for i in 0..k.rows() {
            let img = a.mul_vec(k.row(i));
            assert!(img.iter().all(Zero::is_zero));
        }
        // Every box vector with A·x = 0 lies in the row span (saturation
        // implies integral membership, not just rational).
        let pres = QuotientPresentation::from_hnf_basis(
            cols,
            hurwitz_core::lattice::row_hnf(&k),
        );
        for v in box_vectors(cols, 2) {
            let x: Vec<Int> = v.iter().map(|&t| Int::from(t)).collect();
            let img = a.mul_vec(&x);
            if img.iter().all(Zero::is_zero) {
                assert!(pres.lattice_contains(&x), "kernel box member {v:?}");
            } else {
                assert!(!pres.lattice_contains(&x) || x.iter().all(Zero::is_zero));
            }
        }
    }
}

#[test]
fn preimage_lattice_matches_box_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..40 {
        // A is an m×n map on column vectors: x ∈ ℤⁿ, A·x ∈ ℤᵐ, L ⊆ ℤᵐ.
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=3);
        let a_rows: Vec<Vec<i64>> = (0..m)
            .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let l_rows: Vec<Vec<i64>> = (0..rng.gen_range(1..=2))
            .map(|_| (0..m).map(|_| rng.gen_range(-3..=3) * 2).collect())
            .collect();
        let a = IntMatrix::from_i64_rows(n, &a_rows);
        let l = IntMatrix::from_i64_rows(m, &l_rows);
        let pre = preimage_lattice(&a, &l).unwrap();
        let l_pres = QuotientPresentation::new(m, &l).unwrap();
        let pre_pres = QuotientPresentation::from_hnf_basis(n, pre.clone());
        // Inclusion: every basis row of the preimage maps into L.
        for i in 0..pre.rows() {
            let img = a.mul_vec(pre.row(i));
            assert!(l_pres.lattice_contains(&img), "row {i} maps into L");
        }
        // Exactness on a box: x ∈ preimage ⟺ A(x) ∈ L.
        for v in box_vectors(n, 2) {
            let x: Vec<Int> = v.iter().map(|&t| Int::from(t)).collect();
            let img = a.mul_vec(&x);
            assert_eq!(
                pre_pres.lattice_contains(&x),
                l_pres.lattice_contains(&img),
                "box member {v:?}"
            );
        }
    }
}
