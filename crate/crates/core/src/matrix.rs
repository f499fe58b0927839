//! Dense matrices over an exact [`Field`].

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Result of reduced row-echelon elimination.
pub struct Rref<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[Vec<F>]) -> Self {
        Self::from_rows(cols.to_vec()).transpose()
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<G: Field, E>(&self, f: impl Fn(&F) -> Result<G, E>) -> Result<Matrix<G>, E> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn entries(&self) -> impl Iterator<Item = &F> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_zero() && (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)].neg())
            })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(F::neg)
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.mul(c))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let b = &other[(k, j)];
                if !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self[(i, k)].is_zero() {
                        acc = acc.add(&self[(i, k)].mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn best_pivot(&self, col: usize, from: usize) -> Option<usize> {
        (from..self.rows)
            .filter(|&i| !self[(i, col)].is_zero())
            .min_by_key(|&i| self[(i, col)].complexity())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> F {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        let mut a = self.clone();
        let mut sign_flip = false;
        let mut prev = F::one();
        for k in 0..n {
            let Some(p) = a.best_pivot(k, k) else {
                return F::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign_flip = !sign_flip;
            }
            let pivot = a[(k, k)].clone();
            for i in k + 1..n {
                let aik = a[(i, k)].clone();
                for j in k + 1..n {
                    let v = pivot.mul(&a[(i, j)]).sub(&aik.mul(&a[(k, j)]));
                    a[(i, j)] = v.div(&prev);
                }
                a[(i, k)] = F::zero();
            }
            prev = pivot;
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign_flip {
            d.neg()
        } else {
            d
        }
    }

    /// Inverse by fraction-free Gauss-Jordan elimination on `[A | I]`.
    /// After elimination every diagonal entry equals `±det(A)` and the right
    /// block holds the matching multiple of the adjugate.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.hcat(&Self::identity(n));
        let mut prev = F::one();
        for k in 0..n {
            let p = a.best_pivot(k, k)?;
            a.swap_rows(p, k);
            let pivot = a[(k, k)].clone();
            for i in 0..n {
                if i == k {
                    continue;
                }
                let aik = a[(i, k)].clone();
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let v = pivot.mul(&a[(i, j)]).sub(&aik.mul(&a[(k, j)]));
                    a[(i, j)] = v.div(&prev);
                }
                a[(i, k)] = F::zero();
            }
            prev = pivot;
        }
        Some(Self::from_fn(n, n, |i, j| a[(i, n + j)].div(&a[(i, i)])))
    }

    /// Reduced row-echelon form with pivot columns.
    pub fn rref(&self) -> Rref<F> {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = a.best_pivot(c, r) else {
                continue;
            };
            a.swap_rows(p, r);
            let inv = a[(r, c)].inv().expect("nonzero pivot");
            for j in c..self.cols {
                a[(r, j)] = a[(r, j)].mul(&inv);
            }
            for i in 0..self.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in c..self.cols {
                    let v = a[(i, j)].sub(&f.mul(&a[(r, j)]));
                    a[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: a, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right nullspace `{x : A x = 0}` as column vectors,
    /// one per free column, with a one in that free position.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![F::zero(); self.cols];
                v[f] = F::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = matrix[(r, f)].neg();
                }
                v
            })
            .collect()
    }

    /// Solve `A x = b` for one solution, if any.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hcat(&Matrix::from_columns(&[b.to_vec()]));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(r, self.cols)].clone();
        }
        Some(x)
    }
}

impl<F: Field> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = qm(&[&[2, -1, 3], &[0, 4, 5], &[1, 1, -2]]);
        // 2(-8-5) + 1(0-5) + 3(0-4) = -26 - 5 - 12
        assert_eq!(a.det(), q(-43));
        let z = qm(&[&[0, 1], &[0, 2]]);
        assert_eq!(z.det(), q(0));
        let p = qm(&[&[0, 1], &[1, 0]]);
        assert_eq!(p.det(), q(-1));
    }

    #[test]
    fn inverse_round_trip() {
        let a = qm(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert!(qm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn inverse_over_rational_functions() {
        let s = |x: &str| x.parse::<Scalar>().unwrap();
        let a = Matrix::from_rows(vec![vec![s("1"), s("x1")], vec![s("x2"), s("1")]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(a.det(), s("-x1*x2+1"));
    }

    #[test]
    fn nullspace_and_rank() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(), 1);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(|x| x == &q(0)));
        }
        assert_eq!(a.solve(&[q(1), q(2)]).map(|x| a.mul_vec(&x)), Some(vec![q(1), q(2)]));
        assert!(a.solve(&[q(1), q(3)]).is_none());
    }
}
