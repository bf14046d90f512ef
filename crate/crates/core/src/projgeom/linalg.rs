use crate::ffield::{Fe, FieldCtx};

/// Reduces `m` in place to reduced row echelon form and drops zero rows.
/// Returns the pivot columns.
pub fn rref(f: &FieldCtx, m: &mut Vec<Vec<Fe>>) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = f.inv(m[row][col]).unwrap();
        for x in m[row].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let c = m[i][col];
                for j in 0..ncols {
                    let sub = f.mul(c, m[row][j]);
                    m[i][j] = f.sub(m[i][j], sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    pivots
}

pub fn rank(f: &FieldCtx, m: &mut Vec<Vec<Fe>>) -> usize {
    rref(f, m).len()
}

/// Basis of the right kernel `{v : M v = 0}`, one vector per free column,
/// ordered by free column.
pub fn kernel(f: &FieldCtx, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(m[r][free]);
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let f = FieldCtx::new(7, 1).unwrap();
        let m: Vec<Vec<Fe>> = vec![
            [1, 2, 3, 4, 5].map(|x| f.from_int(x)).to_vec(),
            [2, 4, 6, 1, 0].map(|x| f.from_int(x)).to_vec(),
        ];
        let k = kernel(&f, &m, 5);
        assert_eq!(k.len(), 3);
        for v in &k {
            for r in &m {
                let s = r
                    .iter()
                    .zip(v)
                    .fold(Fe::ZERO, |a, (&x, &y)| f.add(a, f.mul(x, y)));
                assert!(s.is_zero());
            }
        }
        let mut all = m.clone();
        all.extend(k);
        assert_eq!(rank(&f, &mut all), 5);
    }
}
