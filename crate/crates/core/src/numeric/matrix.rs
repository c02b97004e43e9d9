//! Exact dense linear algebra over Z and Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Solves `m * x = b` over Q; `None` when `m` is singular.
pub fn solve_rational(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|v| BigRational::from_integer(v.clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col][col..].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..=n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Lower-triangular Hermite normal form of the lattice spanned by `gens`
/// (row vectors of length `dim`), given a positive `modulus` D with
/// `D * Z^dim` contained in the lattice. Returns `dim` rows; row `i` is
/// supported on columns `0..=i`, has a positive diagonal entry and entries
/// left of the diagonal reduced into `[0, h[j][j])`.
pub fn hnf_mod(gens: &[Vec<BigInt>], dim: usize, modulus: &BigInt) -> IntMatrix {
    assert!(modulus.is_positive(), "HNF modulus must be positive");
    let d = modulus;
    let mut work: Vec<Vec<BigInt>> = gens
        .iter()
        .map(|g| g.iter().map(|v| v.mod_floor(d)).collect())
        .filter(|g: &Vec<BigInt>| g.iter().any(|v| !v.is_zero()))
        .collect();
    let mut basis: Vec<Vec<BigInt>> = vec![Vec::new(); dim];
    for col in (0..dim).rev() {
        let mut pivot = vec![BigInt::zero(); dim];
        pivot[col] = d.clone();
        for w in work.iter_mut() {
            if w[col].is_zero() {
                continue;
            }
            let e = pivot[col].extended_gcd(&w[col]);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let pa = &pivot[col] / &g;
            let wa = &w[col] / &g;
            let new_pivot: Vec<BigInt> = (0..dim)
                .map(|c| (&s * &pivot[c] + &t * &w[c]).mod_floor(d))
                .collect();
            let new_w: Vec<BigInt> = (0..dim)
                .map(|c| (&wa * &pivot[c] - &pa * &w[c]).mod_floor(d))
                .collect();
            pivot = new_pivot;
            // The column entry of the combined pivot is g, which divides D;
            // reduction mod D would send g = D to zero, so restore it.
            pivot[col] = g;
            *w = new_w;
        }
        work.retain(|w| w.iter().any(|v| !v.is_zero()));
        basis[col] = pivot;
    }
    debug_assert!(work.is_empty());
    for i in 0..dim {
        if basis[i][i].is_negative() {
            for v in basis[i].iter_mut() {
                *v = -&*v;
            }
        }
        for j in (0..i).rev() {
            let q = basis[i][j].div_floor(&basis[j][j]);
            if q.is_zero() {
                continue;
            }
            let row_j = basis[j].clone();
            for (c, v) in row_j.iter().enumerate().take(j + 1) {
                basis[i][c] -= &q * v;
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(determinant(&m(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])),
            BigInt::from(-3)
        );
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn solve_small() {
        let x = solve_rational(&m(&[&[2, 1], &[1, 3]]), &[BigInt::from(1), BigInt::from(0)]).unwrap();
        assert_eq!(x[0], BigRational::new(3.into(), 5.into()));
        assert_eq!(x[1], BigRational::new((-1).into(), 5.into()));
    }

    #[test]
    fn hnf_index_and_shape() {
        // Lattice spanned by (2, 0), (1, 3) has index 6.
        let h = hnf_mod(&m(&[&[2, 0], &[1, 3]]), 2, &BigInt::from(6));
        assert_eq!(h, m(&[&[2, 0], &[1, 3]]));
        let h = hnf_mod(&m(&[&[4, 6], &[2, 0], &[0, 6]]), 2, &BigInt::from(12));
        // Index of <(4,6),(2,0),(0,6)> is 12: rows (2,0) and (4 mod 2 = 0, 6).
        assert_eq!(h, m(&[&[2, 0], &[0, 6]]));
    }

    #[test]
    fn hnf_full_lattice() {
        let h = hnf_mod(&m(&[&[1, 0], &[0, 1]]), 2, &BigInt::from(1));
        assert_eq!(h, m(&[&[1, 0], &[0, 1]]));
    }
}
