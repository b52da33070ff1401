use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{IntMatrix, IntVector};

/// `U · M · V = S` with `U`, `V` unimodular and `S` diagonal, `s_1 | s_2 | …`, all `s_i ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

fn min_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
    }
    best.map(|(p, _)| p)
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_nonzero(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / a.get(t, t));
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j) / a.get(t, t));
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                // Bring the smallest remainder in row t or column t to the pivot.
                let mut best = (t, t, a.get(t, t).abs());
                for i in t + 1..rows {
                    let x = a.get(i, t).abs();
                    if !x.is_zero() && x < best.2 {
                        best = (i, t, x);
                    }
                }
                for j in t + 1..cols {
                    let x = a.get(t, j).abs();
                    if !x.is_zero() && x < best.2 {
                        best = (t, j, x);
                    }
                }
                a.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
                continue;
            }
            let pivot = a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    let out = SnfResult { u, s: a, v };
    #[cfg(debug_assertions)]
    check_snf(m, &out);
    out
}

#[cfg(debug_assertions)]
fn check_snf(m: &IntMatrix, r: &SnfResult) {
    assert_eq!(&(&r.u * m) * &r.v, r.s, "SNF postcondition U·M·V = S");
    let d = r.diagonal();
    for i in 0..r.s.rows() {
        for j in 0..r.s.cols() {
            assert!(i == j || r.s.get(i, j).is_zero(), "SNF not diagonal");
        }
    }
    for w in d.windows(2) {
        assert!(
            (w[0].is_zero() && w[1].is_zero()) || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])),
            "SNF divisibility chain"
        );
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows dropped.
/// Pivots are positive and entries above each pivot are reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &[IntVector]) -> Vec<IntVector> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut a = IntMatrix::from_big_rows(rows).expect("equal lengths");
    let (m, n) = (a.rows(), a.cols());
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..m).filter(|&i| !a.get(i, col).is_zero()).collect();
            let Some(&p) = nz.iter().min_by_key(|&&i| a.get(i, col).abs()) else {
                break;
            };
            a.swap_rows(r, p);
            if nz.len() == 1 {
                break;
            }
            for i in r + 1..m {
                if !a.get(i, col).is_zero() {
                    let q = -(a.get(i, col) / a.get(r, col));
                    a.add_row_multiple(i, r, &q);
                }
            }
        }
        if a.get(r, col).is_zero() {
            continue;
        }
        if a.get(r, col).is_negative() {
            a.negate_row(r);
        }
        let pivot = a.get(r, col).clone();
        for i in 0..r {
            let q = -(a.get(i, col).div_floor(&pivot));
            a.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (0..r).map(|i| a.row(i)).collect()
}

/// Saturated integer kernel `{x : M x = 0}`, as Hermite-normalized basis vectors.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let basis: Vec<IntVector> = (rank..m.cols()).map(|j| snf.v.column(j)).collect();
    hermite_rows(&basis)
}

/// Integer solutions of `A x = b` for a fixed matrix `A`.
pub struct LinearSolver {
    snf: SnfResult,
    rank: usize,
}

impl LinearSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        let rank = snf.rank();
        LinearSolver { snf, rank }
    }

    pub fn solve(&self, b: &[BigInt]) -> Option<IntVector> {
        let c = self.snf.u.mul_vec(b);
        let n = self.snf.v.rows();
        let mut y = alloc::vec![BigInt::zero(); n];
        for (i, ci) in c.iter().enumerate() {
            if i < self.rank {
                let (q, rem) = ci.div_rem(self.snf.s.get(i, i));
                if !rem.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ci.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::matrix::int_vector;
    use alloc::vec;

    fn diag(m: &IntMatrix) -> Vec<i64> {
        use num_traits::ToPrimitive;
        smith_normal_form(m)
            .diagonal()
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(diag(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])), vec![1, 6]);
        assert_eq!(diag(&IntMatrix::zeros(2, 3)), vec![0, 0]);
        assert_eq!(diag(&IntMatrix::identity(3)), vec![1, 1, 1]);
        assert_eq!(
            diag(&IntMatrix::from_rows(&[
                vec![2, 4, 4],
                vec![-6, 6, 12],
                vec![10, -4, -16]
            ])),
            vec![2, 6, 12]
        );
    }

    #[test]
    fn rectangular() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(diag(&m), vec![1, 3]);
        assert_eq!(diag(&m.transpose()), vec![1, 3]);
    }

    #[test]
    fn hermite() {
        let h = hermite_rows(&[int_vector(&[-1, -1]), int_vector(&[2, 2])]);
        assert_eq!(h, vec![int_vector(&[1, 1])]);
        let h = hermite_rows(&[int_vector(&[2, 1]), int_vector(&[0, 3]), int_vector(&[4, 5])]);
        assert_eq!(h, vec![int_vector(&[2, 1]), int_vector(&[0, 3])]);
    }

    #[test]
    fn kernel_and_solve() {
        let m = IntMatrix::from_rows(&[vec![1, -1, 0], vec![0, 1, -1]]);
        assert_eq!(integer_kernel(&m), vec![int_vector(&[1, 1, 1])]);
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3], vec![0, 0]]);
        let s = LinearSolver::new(&a);
        assert_eq!(s.solve(&int_vector(&[4, 9, 0])), Some(int_vector(&[2, 3])));
        assert_eq!(s.solve(&int_vector(&[1, 0, 0])), None);
        assert_eq!(s.solve(&int_vector(&[0, 0, 1])), None);
    }
}
