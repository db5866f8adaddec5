//! Exact integer linear algebra used by every geometric predicate.
//!
//! Determinants run fraction-free (Bareiss) on `i128` with checked
//! arithmetic and fall back to `BigInt` when an intermediate overflows, so
//! results are exact for any input size.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i][j].checked_mul(a[k][k])?;
                let rhs = a[i][k].checked_mul(a[k][j])?;
                a[i][j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

/// Determinant of a square matrix of big integers.
pub fn det_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of a square integer matrix.
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let small: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match bareiss_i128(small) {
        Some(d) => BigInt::from(d),
        None => det_big(
            m.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        ),
    }
}

/// Sign (-1, 0, 1) of the determinant.
pub fn det_sign(m: &[Vec<i64>]) -> i32 {
    let small: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match bareiss_i128(small) {
        Some(d) => d.signum() as i32,
        None => sign_of(&det(m)),
    }
}

pub fn sign_of(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Rank of an integer matrix (rows need not be square).
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            if a[i][c].is_zero() {
                continue;
            }
            let g = a[i][c].gcd(&a[r][c]);
            let fi = &a[r][c] / &g;
            let fr = &a[i][c] / &g;
            for j in c..ncols {
                let v = &a[i][j] * &fi - &a[r][j] * &fr;
                a[i][j] = v;
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

/// Affine dimension of a point set (-1 for the empty set is reported as `None`).
pub fn affine_dim(points: &[&[i64]]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let rows: Vec<Vec<i64>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect())
        .collect();
    Some(rank(&rows))
}

pub fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

pub fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

/// Integer primitive normal of the hyperplane through `n` points in R^n
/// (generalized cross product of the edge vectors), or `None` when the
/// points do not span a hyperplane.
pub fn hyperplane_normal(points: &[&[i64]]) -> Option<Vec<i64>> {
    let n = points.first()?.len();
    if points.len() != n {
        return None;
    }
    let base = points[0];
    let edges: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base.iter()).map(|(a, b)| a - b).collect())
        .collect();
    let mut normal = Vec::with_capacity(n);
    for col in 0..n {
        let minor: Vec<Vec<i64>> = edges
            .iter()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let d = det(&minor);
        let d = if col % 2 == 0 { d } else { -d };
        normal.push(d);
    }
    let mut g = BigInt::zero();
    for c in &normal {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return None;
    }
    normal
        .into_iter()
        .map(|c| (c / &g).to_i64())
        .collect::<Option<Vec<i64>>>()
}

pub fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        assert_eq!(det(&[vec![2, 1], vec![1, 2]]), BigInt::from(3));
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(det(&[]), BigInt::from(1));
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]), BigInt::from(0));
    }

    #[test]
    fn det_overflow_falls_back() {
        // 6x6 diagonal with entries 10^7 overflows i128 in the product chain
        let m: Vec<Vec<i64>> = (0..6)
            .map(|i| (0..6).map(|j| if i == j { 10_000_000 } else { 1 }).collect())
            .collect();
        let d = det(&m);
        let big: Vec<Vec<BigInt>> = m
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(d, det_big(big));
        assert!(d > BigInt::from(10).pow(41));
    }

    #[test]
    fn rank_and_normal() {
        assert_eq!(rank(&[vec![1, 2, 3], vec![2, 4, 6]]), 1);
        assert_eq!(rank(&[vec![1, 0, 0], vec![0, 1, 0]]), 2);
        let n = hyperplane_normal(&[&[2, 0], &[0, 2]]).unwrap();
        assert_eq!(n.iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(factorial(4), 24);
    }
}
