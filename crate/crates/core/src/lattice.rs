//! Integer lattices spanned by matrix rows, via Smith normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ... | d_r`, all positive.
#[derive(Debug, Clone)]
pub struct SmithForm {
    rows: usize,
    cols: usize,
    diag: Vec<BigInt>,
    u: Matrix,
    v: Matrix,
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn row_axpy(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

fn col_axpy(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let d = q * &row[src];
            row[dst] -= d;
        }
    }
}

fn col_swap(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

impl SmithForm {
    /// Smith form of the `rows x cols` matrix `a`.
    pub fn new(a: &[Vec<BigInt>], cols: usize) -> Self {
        let rows = a.len();
        let mut m: Matrix = a.to_vec();
        for r in &m {
            assert_eq!(r.len(), cols, "ragged matrix");
        }
        let mut u = identity(rows);
        let mut v = identity(cols);
        let mut diag = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            m.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut m, t, pj);
            col_swap(&mut v, t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if m[i][t].is_zero() {
                        continue;
                    }
                    let q = m[i][t].div_floor(&m[t][t]);
                    row_axpy(&mut m, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                    if !m[i][t].is_zero() {
                        dirty = true;
                        if m[i][t].abs() < m[t][t].abs() {
                            m.swap(t, i);
                            u.swap(t, i);
                        }
                    }
                }
                for j in t + 1..cols {
                    if m[t][j].is_zero() {
                        continue;
                    }
                    let q = m[t][j].div_floor(&m[t][t]);
                    col_axpy(&mut m, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                    if !m[t][j].is_zero() {
                        dirty = true;
                        if m[t][j].abs() < m[t][t].abs() {
                            col_swap(&mut m, t, j);
                            col_swap(&mut v, t, j);
                        }
                    }
                }
                if dirty {
                    continue;
                }
                // Pivot must divide the whole trailing block.
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&m[t][t])));
                match bad {
                    Some(i) => {
                        row_axpy(&mut m, t, i, &-BigInt::one());
                        row_axpy(&mut u, t, i, &-BigInt::one());
                    }
                    None => break,
                }
            }
            if m[t][t].is_negative() {
                for x in m[t].iter_mut() {
                    *x = -&*x;
                }
                for x in u[t].iter_mut() {
                    *x = -&*x;
                }
            }
            diag.push(m[t][t].clone());
            t += 1;
        }
        SmithForm { rows, cols, diag, u, v }
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Nonzero invariant factors `d_1 | ... | d_r`.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.diag
    }

    /// Coordinates of `b` in the cokernel `Z^cols / rowspace`: the first
    /// `r` entries are reduced mod `d_i` (torsion part), the rest are free.
    pub fn residue(&self, b: &[BigInt]) -> Vec<BigInt> {
        let bv = self.transform(b);
        bv.into_iter()
            .enumerate()
            .map(|(i, x)| if i < self.diag.len() { x.mod_floor(&self.diag[i]) } else { x })
            .collect()
    }

    /// `b * V`.
    fn transform(&self, b: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(b.len(), self.cols);
        (0..self.cols)
            .map(|j| {
                b.iter()
                    .zip(&self.v)
                    .filter(|(x, _)| !x.is_zero())
                    .map(|(x, row)| x * &row[j])
                    .sum()
            })
            .collect()
    }

    /// Some `x` with `x * A = b`, or the nonzero cokernel residue of `b`.
    pub fn solve(&self, b: &[BigInt]) -> std::result::Result<Vec<BigInt>, Vec<BigInt>> {
        let bv = self.transform(b);
        let mut y = vec![BigInt::zero(); self.rows];
        let mut ok = true;
        for (i, x) in bv.iter().enumerate() {
            if i < self.diag.len() {
                let (q, r) = x.div_mod_floor(&self.diag[i]);
                if !r.is_zero() {
                    ok = false;
                }
                y[i] = q;
            } else if !x.is_zero() {
                ok = false;
            }
        }
        if !ok {
            return Err(self.residue(b));
        }
        let mut x = vec![BigInt::zero(); self.rows];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (xj, uij) in x.iter_mut().zip(&self.u[i]) {
                if !uij.is_zero() {
                    *xj += yi * uij;
                }
            }
        }
        Ok(x)
    }

    /// A basis of `{x : x * A = 0}`.
    pub fn left_kernel(&self) -> Matrix {
        self.u[self.diag.len()..].to_vec()
    }

    pub fn contains(&self, b: &[BigInt]) -> bool {
        self.solve(b).is_ok()
    }

    /// Order of the torsion part of the cokernel; `None` if it has a free part.
    pub fn cokernel_order(&self) -> Option<BigInt> {
        if self.rank() < self.cols {
            return None;
        }
        Some(self.diag.iter().product())
    }
}

pub fn smith(a: &[Vec<BigInt>], cols: usize) -> SmithForm {
    SmithForm::new(a, cols)
}

/// Row vector times matrix.
pub fn vec_mat(x: &[BigInt], a: &[Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cols];
    for (xi, row) in x.iter().zip(a) {
        if xi.is_zero() {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            if !r.is_zero() {
                *o += xi * r;
            }
        }
    }
    out
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

/// Inverse of a unimodular integer matrix.
pub fn inverse_unimodular(a: &[Vec<BigInt>]) -> Option<Matrix> {
    let n = a.len();
    let s = SmithForm::new(a, n);
    if s.rank() < n || s.diag.iter().any(|d| !d.is_one()) {
        return None;
    }
    // U A V = I, so A^-1 = V U.
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|t| &s.v[i][t] * &s.u[t][j]).sum()).collect())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn b(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn invariant_factors() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a, 3);
        assert_eq!(s.invariant_factors(), b(&[2, 6, 12]).as_slice());
        let z = m(&[&[0, 0], &[0, 0]]);
        assert_eq!(smith(&z, 2).rank(), 0);
    }

    #[test]
    fn membership() {
        let a = m(&[&[2, 0], &[1, 1]]);
        let s = smith(&a, 2);
        let x = s.solve(&b(&[3, 1])).unwrap();
        assert_eq!(vec_mat(&x, &a, 2), b(&[3, 1]));
        assert!(s.solve(&b(&[1, 0])).is_err());
        assert_eq!(s.cokernel_order(), Some(BigInt::from(2)));
        let thin = m(&[&[1, 1]]);
        assert!(smith(&thin, 2).solve(&b(&[1, 0])).is_err());
        assert_eq!(smith(&thin, 2).cokernel_order(), None);
        let dep = m(&[&[1, 2], &[2, 4], &[0, 1]]);
        let ker = smith(&dep, 2).left_kernel();
        assert_eq!(ker.len(), 1);
        assert!(vec_mat(&ker[0], &dep, 2).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&m(&[&[1, 2], &[3, 4]])), BigInt::from(-2));
        assert_eq!(determinant(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[2, 0, 0], &[1, 3, 0], &[4, 5, 6]])), BigInt::from(36));
        let a = m(&[&[1, 2], &[0, 1]]);
        assert_eq!(inverse_unimodular(&a).unwrap(), m(&[&[1, -2], &[0, 1]]));
        assert!(inverse_unimodular(&m(&[&[2, 0], &[0, 1]])).is_none());
    }
}
