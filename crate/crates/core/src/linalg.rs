//! Exact rank computations: fraction-free elimination over the integers and
//! Gaussian elimination over prime fields.

use num_bigint::BigInt;
use num_traits::Zero;

/// Prime used for modular rank certificates (2^31 - 1).
///
/// The rank of an integer (or p-integral rational) matrix modulo a prime never
/// exceeds its rank over the rationals, so modular ranks are certified lower
/// bounds.
pub const CERT_PRIME: u64 = 2_147_483_647;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Rank of an integer matrix by Bareiss fraction-free elimination.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        let pval = prow[col].clone();
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for c in col..ncols {
                let v = &pval * &row[c] - &factor * &prow[c];
                // exact by Sylvester's identity
                row[c] = v / &prev;
            }
        }
        prev = pval;
        rank += 1;
    }
    rank
}

/// Rank over `GF(p)` of a matrix whose entries are residues `< p`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col] % p, p);
        for v in &mut rows[rank][col..ncols] {
            *v = mul_mod(*v, inv, p);
        }
        let (top, rest) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            let f = row[col] % p;
            if f == 0 {
                continue;
            }
            let neg = p - f;
            for c in col..ncols {
                if prow[c] != 0 {
                    row[c] = (row[c] + mul_mod(neg, prow[c], p)) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of a sparse matrix over `GF(p)` given as rows of `(column, value)`.
///
/// Elimination keeps rows sparse, which matters for the graded slices of
/// polynomial matrices where most entries vanish.
pub fn sparse_rank_mod_p(rows: Vec<Vec<(usize, u64)>>, p: u64) -> usize {
    use std::collections::HashMap;
    // pivot column -> normalized pivot row (sorted by column, leading entry 1)
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for mut row in rows {
        row.retain(|&(_, v)| v % p != 0);
        row.sort_unstable_by_key(|&(c, _)| c);
        while let Some(&(lead, lv)) = row.first() {
            match pivots.get(&lead) {
                Some(prow) => {
                    row = axpy_sparse(&row, p - lv % p, prow, p);
                }
                None => {
                    let inv = inv_mod(lv % p, p);
                    let norm: Vec<(usize, u64)> =
                        row.iter().map(|&(c, v)| (c, mul_mod(v, inv, p))).collect();
                    pivots.insert(lead, norm);
                    break;
                }
            }
        }
    }
    pivots.len()
}

fn axpy_sparse(x: &[(usize, u64)], a: u64, y: &[(usize, u64)], p: u64) -> Vec<(usize, u64)> {
    // x + a*y
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push(x[i]);
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, mul_mod(a, y[j].1, p)));
            j += 1;
        } else {
            let v = (x[i].1 + mul_mod(a, y[j].1, p)) % p;
            if v != 0 {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn bareiss_small_cases() {
        assert_eq!(bareiss_rank(big(&[])), 0);
        assert_eq!(bareiss_rank(big(&[vec![0, 0], vec![0, 0]])), 0);
        assert_eq!(
            bareiss_rank(big(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])),
            3
        );
        assert_eq!(
            bareiss_rank(big(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]])),
            2
        );
        assert_eq!(bareiss_rank(big(&[vec![0, 2], vec![0, 3], vec![1, 0]])), 2);
    }

    #[test]
    fn sparse_and_dense_agree_on_example() {
        let dense = vec![vec![1, 2, 0], vec![2, 4, 0], vec![0, 1, 5]];
        let sparse: Vec<Vec<(usize, u64)>> = dense
            .iter()
            .map(|r: &Vec<u64>| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(c, &v)| (c, v))
                    .collect()
            })
            .collect();
        assert_eq!(rank_mod_p(dense, 7), 2);
        assert_eq!(sparse_rank_mod_p(sparse, 7), 2);
    }

    proptest! {
        // modular rank is a lower bound for the rational rank, and the three
        // routines agree for a large prime on small entries
        #[test]
        fn ranks_agree(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 0..6)) {
            let q = bareiss_rank(big(&rows));
            let p = CERT_PRIME;
            let res: Vec<Vec<u64>> = rows.iter()
                .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
                .collect();
            let sparse: Vec<Vec<(usize, u64)>> = res.iter()
                .map(|r| r.iter().enumerate().map(|(c, &v)| (c, v)).collect())
                .collect();
            let m = rank_mod_p(res, p);
            prop_assert!(m <= q);
            prop_assert_eq!(m, q);
            prop_assert_eq!(sparse_rank_mod_p(sparse, p), q);
            let small: Vec<Vec<u64>> = rows.iter()
                .map(|r| r.iter().map(|&x| x.rem_euclid(5) as u64).collect())
                .collect();
            prop_assert!(rank_mod_p(small, 5) <= q);
        }
    }
}
