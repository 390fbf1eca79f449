//! Exact linear algebra over the integers, the rationals and the field with two elements.
//!
//! Matrices are dense row-major `Vec<Vec<_>>`. The Smith normal form is computed
//! together with its unimodular transforms so that callers can solve linear
//! congruences and read off integer kernels.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

/// Exact rational number used throughout the crate.
pub type Q = Rational64;

/// Dense integer matrix.
pub type IMat = Vec<Vec<i64>>;

/// Dense rational matrix.
pub type QMat = Vec<Vec<Q>>;

/// Builds a rational from an integer.
pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// Builds the rational `n / d`.
pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

/// The `n × n` integer identity matrix.
pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// Transpose of an integer matrix with `cols` columns.
pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return Vec::new();
    }
    let (r, c) = (a.len(), a[0].len());
    (0..c).map(|j| (0..r).map(|i| a[i][j]).collect()).collect()
}

/// Integer matrix product.
pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Integer matrix times integer vector.
pub fn mat_vec(a: &IMat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Integer matrix times rational vector.
pub fn mat_vec_q(a: &IMat, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Q::zero(), |acc, (x, y)| acc + *y * *x)
        })
        .collect()
}

/// Rational matrix times rational vector.
pub fn qmat_vec(a: &QMat, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + *x * *y))
        .collect()
}

/// Converts an integer matrix to a rational one.
pub fn to_q(a: &IMat) -> QMat {
    a.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

/// Inverse of a square rational matrix, or `None` when it is singular.
pub fn q_inverse(a: &QMat) -> Option<QMat> {
    let n = a.len();
    let mut m: QMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col];
        for x in m[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Reduced row echelon form of a rational matrix; returns the pivot columns.
pub fn q_rref(a: &mut QMat) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c];
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rational matrix.
pub fn q_rank(a: &QMat) -> usize {
    let mut m = a.clone();
    q_rref(&mut m).len()
}

/// Solves `a x = b` over the rationals, returning one solution if any exists.
pub fn q_solve(a: &QMat, b: &[Q]) -> Option<Vec<Q>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: QMat = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = q_rref(&mut m);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    Some(x)
}

/// Smith normal form `u · a · v = d` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Left transform (rows × rows).
    pub u: IMat,
    /// Right transform (cols × cols).
    pub v: IMat,
    /// Diagonal entries, nonnegative, each dividing the next nonzero one.
    pub diag: Vec<i64>,
}

fn swap_cols(m: &mut IMat, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

/// Computes the Smith normal form of an integer matrix with `cols` columns.
pub fn smith(a: &IMat, cols: usize) -> Smith {
    let rows = a.len();
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let best = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d[i][j] != 0)
            .min_by_key(|&(i, j)| d[i][j].abs());
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if d[i][t] != 0 {
                    let f = Integer::div_floor(&d[i][t], &d[t][t]);
                    for c in 0..cols {
                        d[i][c] -= f * d[t][c];
                    }
                    for c in 0..rows {
                        u[i][c] -= f * u[t][c];
                    }
                    if d[i][t] != 0 {
                        done = false;
                    }
                }
            }
            for j in t + 1..cols {
                if d[t][j] != 0 {
                    let f = Integer::div_floor(&d[t][j], &d[t][t]);
                    for r in 0..rows {
                        d[r][j] -= f * d[r][t];
                    }
                    for r in 0..cols {
                        v[r][j] -= f * v[r][t];
                    }
                    if d[t][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| d[i][j] % d[t][t] != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for c in 0..cols {
                            d[t][c] += d[i][c];
                        }
                        for c in 0..rows {
                            u[t][c] += u[i][c];
                        }
                        continue;
                    }
                }
            }
            let best = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| d[i][j] != 0 && (i == t || j == t))
                .min_by_key(|&(i, j)| d[i][j].abs());
            if let Some((pi, pj)) = best {
                d.swap(t, pi);
                u.swap(t, pi);
                swap_cols(&mut d, t, pj);
                swap_cols(&mut v, t, pj);
            }
        }
        if d[t][t] < 0 {
            for c in 0..cols {
                d[t][c] = -d[t][c];
            }
            for c in 0..rows {
                u[t][c] = -u[t][c];
            }
        }
        t += 1;
    }
    let diag = (0..rows.min(cols)).map(|i| d[i][i]).collect();
    Smith { u, v, diag }
}

/// A basis (as columns listed row-wise) of the integer kernel `{x ∈ Zⁿ : a x = 0}`.
pub fn int_kernel(a: &IMat, cols: usize) -> Vec<Vec<i64>> {
    let s = smith(a, cols);
    (0..cols)
        .filter(|&j| j >= s.diag.len() || s.diag[j] == 0)
        .map(|j| s.v.iter().map(|row| row[j]).collect())
        .collect()
}

/// Least common multiple of the denominators of a rational vector.
pub fn denom_lcm(v: &[Q]) -> i64 {
    v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()))
}

/// Reduces a rational modulo 2 into `[0, 2)`.
pub fn mod2(x: Q) -> Q {
    let two = q(2);
    let r = x - (x / two).floor() * two;
    if r.is_negative() {
        r + two
    } else {
        r
    }
}

/// Incrementally maintained echelon basis of a subspace of `F₂ⁿ`.
#[derive(Clone, Debug, Default)]
pub struct F2Echelon {
    rows: Vec<(usize, Vec<u8>)>,
}

impl F2Echelon {
    /// Empty subspace.
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `v` against the basis, returning the canonical coset representative.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p] == 1 {
                for (x, y) in w.iter_mut().zip(row) {
                    *x ^= y;
                }
            }
        }
        w
    }

    /// Adds `v` to the span; returns `true` when the dimension grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|&x| x == 1) else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            if row[p] == 1 {
                for (x, y) in row.iter_mut().zip(&w) {
                    *x ^= y;
                }
            }
        }
        self.rows.push((p, w));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }

    /// Dimension of the span.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Pivot positions of the basis.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_smith(a: &IMat, cols: usize) {
        let s = smith(a, cols);
        let d = mat_mul(&mat_mul(&s.u, a), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(x, s.diag[i]);
                } else {
                    assert_eq!(x, 0);
                }
            }
        }
        let nz: Vec<i64> = s.diag.iter().copied().filter(|&x| x != 0).collect();
        for w in nz.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn smith_small_cases() {
        check_smith(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        check_smith(&vec![vec![0, 0], vec![0, 3]], 2);
        check_smith(&vec![vec![1, 1, 0, 0], vec![0, 2, 2, 0]], 4);
        check_smith(&vec![vec![2, 0], vec![0, 3]], 2);
    }

    #[test]
    fn kernel_is_annihilated() {
        let a = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let k = int_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(mat_vec(&a, &v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = to_q(&vec![vec![2, -1], vec![-1, 2]]);
        let inv = q_inverse(&a).unwrap();
        assert_eq!(inv[0][0], qf(2, 3));
        assert_eq!(inv[0][1], qf(1, 3));
    }

    #[test]
    fn mod2_range() {
        assert_eq!(mod2(qf(-1, 2)), qf(3, 2));
        assert_eq!(mod2(q(4)), q(0));
        assert_eq!(mod2(qf(5, 2)), qf(1, 2));
    }

    #[test]
    fn f2_echelon_reduces_to_canonical_rep() {
        let mut e = F2Echelon::new();
        assert!(e.insert(&[1, 1, 0]));
        assert!(!e.insert(&[1, 1, 0]));
        assert_eq!(e.reduce(&[1, 0, 0]), e.reduce(&[0, 1, 0]));
        assert_eq!(e.dim(), 1);
    }

    proptest::proptest! {
        #[test]
        fn smith_random(entries in proptest::collection::vec(-6i64..7, 12)) {
            let a: IMat = entries.chunks(4).map(|c| c.to_vec()).collect();
            check_smith(&a, 4);
        }
    }
}
