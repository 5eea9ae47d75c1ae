//! Determinants of small dense matrices.

/// Determinant by Gaussian elimination with partial pivoting.
///
/// `m` must be square; the empty matrix has determinant 1.
pub fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap_or(col);
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in (col + 1)..n {
            let factor = a[r][col] / p;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= factor * a[col][c];
            }
        }
    }
    det
}

/// `m` with row `row` and column `col` removed.
pub fn minor(m: &[Vec<f64>], row: usize, col: usize) -> Vec<Vec<f64>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != row)
        .map(|(_, rv)| {
            rv.iter()
                .enumerate()
                .filter(|(c, _)| *c != col)
                .map(|(_, v)| *v)
                .collect()
        })
        .collect()
}

/// Signed cofactor `(−1)^{row+col} · det(minor(row, col))`.
pub fn cofactor(m: &[Vec<f64>], row: usize, col: usize) -> f64 {
    let d = determinant(&minor(m, row, col));
    if (row + col) % 2 == 0 {
        d
    } else {
        -d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Leibniz expansion over all permutations.
    fn leibniz(m: &[Vec<f64>]) -> f64 {
        fn perms(k: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in 0..k {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    perms(k, used, cur, out);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        let n = m.len();
        let mut all = Vec::new();
        perms(n, &mut vec![false; n], &mut Vec::new(), &mut all);
        all.iter()
            .map(|p| {
                let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                sign * (0..n).map(|i| m[i][p[i]]).product::<f64>()
            })
            .sum()
    }

    #[test]
    fn small_known_values() {
        assert_eq!(determinant(&[]), 1.0);
        assert_eq!(determinant(&[vec![3.0]]), 3.0);
        assert_eq!(determinant(&[vec![0.0, 1.0], vec![1.0, 0.0]]), -1.0);
        let bordered = vec![vec![0.0, 2.0, 2.0], vec![2.0, 2.0, 0.0], vec![2.0, 0.0, 2.0]];
        assert!((determinant(&bordered) + 16.0).abs() < 1e-12);
        assert_eq!(determinant(&[vec![1.0, 2.0], vec![2.0, 4.0]]), 0.0);
    }

    #[test]
    fn cofactor_signs() {
        let m = vec![vec![0.0, 0.5, 0.5], vec![0.5, -0.25, 0.25], vec![0.5, 0.25, -0.25]];
        // minor(1,2) = [[0, .5], [.5, .25]] → det -0.25, sign (-1)^3
        assert_eq!(cofactor(&m, 1, 2), 0.25);
    }

    proptest::proptest! {
        #[test]
        fn matches_leibniz(vals in proptest::collection::vec(-3.0f64..3.0, 16), n in 1usize..=4) {
            let m: Vec<Vec<f64>> = (0..n).map(|i| vals[i * 4..i * 4 + n].to_vec()).collect();
            let d = determinant(&m);
            let l = leibniz(&m);
            let scale: f64 = m.iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).product::<f64>();
            proptest::prop_assert!((d - l).abs() <= 1e-12 * (1.0 + scale));
        }
    }
}
