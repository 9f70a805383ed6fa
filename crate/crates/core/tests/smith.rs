use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use slitkit::algebra::{
    in_column_space_mod_p, preimage_order, rank, rank_mod_p, smith_normal_form, DenseIntMatrix,
};
use slitkit::{Coefficients, Error, Order, SparseIntMatrix};

fn det(m: &[Vec<BigInt>]) -> BigInt {
    // Laplace expansion; only used on k×k minors with k ≤ 4
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][c] * det(&minor);
        if c % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `d_1 ⋯ d_k = gcd of all k×k minors`.
fn determinantal_divisors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(a[r][c])).collect())
                    .collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(g);
    }
    out
}

fn factors_from_divisors(d: &[BigInt]) -> Vec<BigInt> {
    let mut prev = BigInt::one();
    d.iter()
        .map(|x| {
            let f = x / &prev;
            prev = x.clone();
            f
        })
        .collect()
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, c), r)
    })
}

fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn worked_example_matrices() {
    let d4 = SparseIntMatrix::from_dense(&[vec![-1, 1], vec![0, 1], vec![1, 1], vec![0, -1]]);
    let d5 = SparseIntMatrix::from_dense(&[vec![0, -1, 0, -1], vec![0, -1, 0, -1]]);
    assert!(d5.mul(&d4).unwrap().is_zero());
    assert_eq!(smith_normal_form(&d4, false).invariant_factors, big_vec(&[1, 1]));
    assert_eq!(smith_normal_form(&d5, false).invariant_factors, big_vec(&[1]));
}

#[test]
fn large_entries_fall_back_to_big_integers() {
    let x = i64::MAX / 3;
    let m = SparseIntMatrix::from_dense(&[vec![x, x - 1], vec![x - 2, x]]);
    let s = smith_normal_form(&m, false);
    let expected = factors_from_divisors(&determinantal_divisors(&[vec![x, x - 1], vec![x - 2, x]]));
    assert_eq!(s.invariant_factors, expected);
}

#[test]
fn composite_moduli_are_rejected() {
    let m = SparseIntMatrix::from_dense(&[vec![1]]);
    assert!(matches!(rank_mod_p(&m, 4), Err(Error::NotPrime(4))));
    assert!(in_column_space_mod_p(&m, &big_vec(&[1]), 9).is_err());
}

#[test]
fn preimage_orders_of_a_diagonal() {
    let m = SparseIntMatrix::from_dense(&[vec![4, 0], vec![0, 6], vec![0, 0]]);
    assert_eq!(preimage_order(&m, &big_vec(&[2, 3, 0])).unwrap(), Order::finite(2));
    assert_eq!(preimage_order(&m, &big_vec(&[1, 1, 0])).unwrap(), Order::finite(12));
    assert_eq!(preimage_order(&m, &big_vec(&[0, 0, 1])).unwrap(), Order::Infinite);
    assert_eq!(preimage_order(&m, &big_vec(&[0, 0, 0])).unwrap(), Order::finite(1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn invariant_factors_match_minor_gcds(a in small_matrix()) {
        let m = SparseIntMatrix::from_dense(&a);
        let s = smith_normal_form(&m, false);
        let expected = factors_from_divisors(&determinantal_divisors(&a));
        prop_assert_eq!(&s.invariant_factors, &expected);
        for w in s.invariant_factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert_eq!(rank(&m, Coefficients::Integers).unwrap(), expected.len());
    }

    #[test]
    fn dense_and_sparse_agree(a in small_matrix()) {
        let m = SparseIntMatrix::from_dense(&a);
        let sparse = smith_normal_form(&m, false);
        let dense = smith_normal_form(&m, true);
        prop_assert_eq!(&sparse.invariant_factors, &dense.invariant_factors);
        let t = dense.transforms.unwrap();
        let d = t.u.mul(&m.to_dense()).mul(&t.v);
        for r in 0..d.rows() {
            for c in 0..d.cols() {
                let want = if r == c && r < dense.rank { dense.invariant_factors[r].clone() } else { BigInt::zero() };
                prop_assert_eq!(d.get(r, c), &want);
            }
        }
        prop_assert_eq!(t.u.mul(&t.u_inv), DenseIntMatrix::identity(m.rows()));
        prop_assert_eq!(t.v.mul(&t.v_inv), DenseIntMatrix::identity(m.cols()));
    }

    #[test]
    fn invariant_under_permutation_and_sign(
        a in small_matrix(),
        flips in prop::collection::vec(any::<bool>(), 8),
        seed in any::<prop::sample::Index>(),
    ) {
        let rows = a.len();
        let cols = a[0].len();
        let shift = seed.index(rows.max(1));
        let mut b: Vec<Vec<i64>> = (0..rows).map(|r| a[(r + shift) % rows].clone()).collect();
        for (r, row) in b.iter_mut().enumerate() {
            row.rotate_left(seed.index(cols.max(1)));
            if flips[r % 8] {
                for x in row.iter_mut() {
                    *x = -*x;
                }
            }
        }
        let sa = smith_normal_form(&SparseIntMatrix::from_dense(&a), false);
        let sb = smith_normal_form(&SparseIntMatrix::from_dense(&b), false);
        prop_assert_eq!(sa.invariant_factors, sb.invariant_factors);
    }

    #[test]
    fn invariant_under_row_operations(a in small_matrix(), k in -3i64..=3, i in 0usize..4, j in 0usize..4) {
        let rows = a.len();
        let (i, j) = (i % rows, j % rows);
        prop_assume!(i != j);
        let mut b = a.clone();
        for c in 0..b[0].len() {
            b[i][c] += k * a[j][c];
        }
        let sa = smith_normal_form(&SparseIntMatrix::from_dense(&a), false);
        let sb = smith_normal_form(&SparseIntMatrix::from_dense(&b), false);
        prop_assert_eq!(sa.invariant_factors, sb.invariant_factors);
    }

    #[test]
    fn rank_mod_p_counts_coprime_factors(a in small_matrix(), pi in 0usize..4) {
        let p = [2u64, 3, 5, 7][pi];
        let m = SparseIntMatrix::from_dense(&a);
        let s = smith_normal_form(&m, false);
        let pb = BigInt::from(p);
        let expected = s.invariant_factors.iter().filter(|d| !d.is_multiple_of(&pb)).count();
        prop_assert_eq!(rank_mod_p(&m, p).unwrap(), expected);
    }

    // conjugating a diagonal by unimodular transforms keeps preimage orders
    #[test]
    fn preimage_order_oracle(
        diag in prop::collection::vec(0i64..6, 1..4),
        v in prop::collection::vec(-5i64..=5, 4),
        ops in prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..6),
    ) {
        let n = diag.len();
        let v: Vec<i64> = v[..n].to_vec();
        let mut order = Some(BigInt::one());
        for (d, x) in diag.iter().zip(&v) {
            if *d == 0 {
                if *x != 0 {
                    order = None;
                }
            } else if let Some(o) = order.as_mut() {
                let d = BigInt::from(*d);
                *o = o.lcm(&(&d / d.gcd(&BigInt::from(*x))));
            }
        }
        // M = U D with elementary row operations U, and v' = U v
        let mut m: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| if r == c { diag[r] } else { 0 }).collect()).collect();
        let mut w = v.clone();
        for (i, j, k) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                continue;
            }
            for c in 0..n {
                m[i][c] += k * m[j][c];
            }
            w[i] += k * w[j];
        }
        let got = preimage_order(&SparseIntMatrix::from_dense(&m), &big_vec(&w)).unwrap();
        let want = match order {
            None => Order::Infinite,
            Some(o) => Order::Finite(o.magnitude().clone()),
        };
        prop_assert_eq!(got, want);
        for p in [2u64, 3, 5] {
            let pb = BigInt::from(p);
            let inside = diag.iter().zip(&v).all(|(d, x)| BigInt::from(*x).is_multiple_of(&pb) || !BigInt::from(*d).is_multiple_of(&pb));
            prop_assert_eq!(in_column_space_mod_p(&SparseIntMatrix::from_dense(&m), &big_vec(&w), p).unwrap(), inside);
        }
    }

    #[test]
    fn transpose_and_products(a in small_matrix()) {
        let m = SparseIntMatrix::from_dense(&a);
        let t = m.transpose();
        prop_assert_eq!(t.transpose(), m.clone());
        let mtm = t.mul(&m).unwrap();
        let dense = mtm.to_dense_i64();
        for i in 0..dense.len() {
            for j in 0..dense.len() {
                let want: i64 = (0..a.len()).map(|r| a[r][i] * a[r][j]).sum();
                prop_assert_eq!(dense[i][j], want);
            }
        }
        prop_assert!(mtm.triplets().all(|(_, _, v)| !v.is_zero() && v.abs() <= BigInt::from(200)));
    }
}
