//! Exact rational linear algebra for small matrices.

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Basis of the right nullspace of `rows` (each row of equal length).
///
/// Gauss-Jordan elimination over the rationals; one basis vector per free
/// column, with a 1 in that column.
pub fn nullspace(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = BigRational::one() / &a[r][c];
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[row][free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn kernels() {
        let k = nullspace(&q(&[&[1, 2], &[2, 4]]));
        assert_eq!(k, q(&[&[-2, 1]]));
        assert!(nullspace(&q(&[&[1, 0], &[0, 1]])).is_empty());
        assert_eq!(nullspace(&q(&[&[0, 0], &[0, 0]])).len(), 2);
        let m = q(&[&[1, 1, 1], &[0, 1, 2]]);
        let k = nullspace(&m);
        assert_eq!(k.len(), 1);
        for row in &m {
            let dot: BigRational = row.iter().zip(&k[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}
