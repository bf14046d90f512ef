//! Integer matrices: echelon forms, kernels and Smith normal form.

pub type IMat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let (n, m, k) = (a.len(), b[0].len(), b.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Row-reduces `a` to echelon form with unimodular row operations.
/// Returns `(u, uinv, rank)` with `u * a_original = a` and `uinv = u^-1`.
pub fn row_echelon(a: &mut IMat) -> (IMat, IMat, usize) {
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut u = identity(n);
    let mut uinv = identity(n);
    let mut row = 0;
    for col in 0..m {
        if row == n {
            break;
        }
        loop {
            let piv = (row..n)
                .filter(|&i| a[i][col] != 0)
                .min_by_key(|&i| a[i][col].abs());
            let Some(p) = piv else { break };
            a.swap(row, p);
            u.swap(row, p);
            for r in uinv.iter_mut() {
                r.swap(row, p);
            }
            let mut done = true;
            for i in row + 1..n {
                let c = a[i][col] / a[row][col];
                if c != 0 {
                    // row_i -= c row_row; inverse adds c col_i to col_row
                    for j in 0..m {
                        a[i][j] -= c * a[row][j];
                    }
                    for j in 0..n {
                        u[i][j] -= c * u[row][j];
                    }
                    for r in uinv.iter_mut() {
                        r[row] += c * r[i];
                    }
                }
                if a[i][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[row][col] != 0 {
            row += 1;
        }
    }
    (u, uinv, row)
}

/// A basis of the integer kernel `{ v : a v = 0 }`, as rows.
pub fn integer_kernel(a: &IMat, ncols: usize) -> IMat {
    let mut t = transpose(a);
    if t.is_empty() {
        t = vec![Vec::new(); ncols];
    }
    let (u, _, r) = row_echelon(&mut t);
    u[r..].to_vec()
}

/// Diagonal of the Smith normal form, including zeros, in divisibility order.
pub fn smith_diagonal(a: &IMat) -> Vec<i128> {
    let mut a = a.clone();
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    for t in 0..n.min(m) {
        loop {
            let piv = (t..n)
                .flat_map(|i| (t..m).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = piv else {
                diag.push(0);
                break;
            };
            a.swap(t, pi);
            for r in a.iter_mut() {
                r.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..n {
                let c = a[i][t] / a[t][t];
                for j in t..m {
                    a[i][j] -= c * a[t][j];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..m {
                let c = a[t][j] / a[t][t];
                for r in a.iter_mut().skip(t) {
                    r[j] -= c * r[t];
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            if let Some(i) = (t + 1..n).find(|&i| (t + 1..m).any(|j| a[i][j] % a[t][t] != 0)) {
                for j in t..m {
                    a[t][j] += a[i][j];
                }
                continue;
            }
            diag.push(a[t][t].abs());
            break;
        }
    }
    diag.extend(std::iter::repeat_n(0, n.min(m).saturating_sub(diag.len())));
    let mut nz: Vec<i128> = diag.iter().copied().filter(|&d| d != 0).collect();
    for i in 0..nz.len() {
        for j in i + 1..nz.len() {
            let g = gcd(nz[i], nz[j]);
            let l = nz[i] / g * nz[j];
            nz[i] = g;
            nz[j] = l;
        }
    }
    let zeros = diag.len() - nz.len();
    nz.extend(std::iter::repeat_n(0, zeros));
    nz
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix() -> impl Strategy<Value = IMat> {
        (1usize..5, 1usize..5)
            .prop_flat_map(|(n, m)| prop::collection::vec(prop::collection::vec(-6i128..7, m), n))
    }

    fn det(a: &IMat) -> i128 {
        let n = a.len();
        if n == 1 {
            return a[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: IMat = a[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * a[0][j] * det(&minor)
            })
            .sum()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(
            smith_diagonal(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            vec![2, 6, 12]
        );
        assert_eq!(smith_diagonal(&vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_diagonal(&vec![vec![0, 0], vec![0, 0]]), vec![0, 0]);
    }

    proptest! {
        #[test]
        fn echelon_transform_is_consistent(a in small_matrix()) {
            let mut e = a.clone();
            let (u, uinv, r) = row_echelon(&mut e);
            prop_assert_eq!(mat_mul(&u, &a), e.clone());
            prop_assert_eq!(mat_mul(&u, &uinv), identity(a.len()));
            prop_assert!(e[r..].iter().all(|row| row.iter().all(|&x| x == 0)));
        }

        #[test]
        fn kernel_vectors_are_killed(a in small_matrix()) {
            let m = a[0].len();
            for v in integer_kernel(&a, m) {
                for row in &a {
                    prop_assert_eq!(row.iter().zip(&v).map(|(x, y)| x * y).sum::<i128>(), 0);
                }
            }
        }

        #[test]
        fn smith_product_is_determinant(n in 1usize..5, seed in prop::collection::vec(-5i128..6, 16)) {
            let a: IMat = (0..n).map(|i| (0..n).map(|j| seed[i * 4 + j]).collect()).collect();
            let d = smith_diagonal(&a);
            prop_assert_eq!(d.iter().product::<i128>(), det(&a).abs());
            for w in d.windows(2) {
                prop_assert!(w[1] == 0 || w[1] % w[0] == 0);
            }
        }
    }
}
