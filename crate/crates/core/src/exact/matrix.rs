use super::ring::{Field, Ring};

/// Size up to which [`Matrix::det`] uses cofactor expansion.
pub const COFACTOR_LIMIT: usize = 6;

/// Dense row-major matrix over an exact ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Clone> Matrix<R> {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let data = (0..rows * cols).map(|idx| f(idx / cols, idx % cols)).collect();
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged matrix rows");
        Self {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        }
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

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Submatrix obtained by deleting the given rows and columns.
    pub fn remove(&self, rows: &[usize], cols: &[usize]) -> Self {
        let keep_r: Vec<usize> = (0..self.rows).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|j| !cols.contains(j)).collect();
        self.select(&keep_r, &keep_c)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<S: Clone>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<S: Clone, E>(&self, f: impl Fn(&R) -> Result<S, E>) -> Result<Matrix<S>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_, E>>()?,
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| R::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> R {
        (0..self.rows.min(self.cols)).fold(R::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Exact determinant: cofactor expansion for small sizes, fraction-free
    /// elimination otherwise. Panics on a non-square matrix.
    pub fn det(&self) -> R {
        if self.rows <= COFACTOR_LIMIT {
            self.det_cofactor()
        } else {
            self.det_bareiss()
        }
    }

    /// Laplace expansion along the first row.
    pub fn det_cofactor(&self) -> R {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let cols: Vec<usize> = (0..self.cols).collect();
        self.cofactor_rec(0, &cols)
    }

    fn cofactor_rec(&self, row: usize, cols: &[usize]) -> R {
        match cols.len() {
            0 => return R::one(),
            1 => return self.get(row, cols[0]).clone(),
            _ => {}
        }
        let mut acc = R::zero();
        for (pos, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.clone() * self.cofactor_rec(row + 1, &rest);
            acc = if pos % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    /// Bareiss fraction-free elimination; every division is exact.
    pub fn det_bareiss(&self) -> R {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return R::one();
        }
        let mut a: Vec<Vec<R>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        negate = !negate;
                    }
                    None => return R::zero(),
                }
            }
            let (head, tail) = a.split_at_mut(k + 1);
            let pivot_row = &head[k];
            let pivot = &pivot_row[k];
            for row in tail.iter_mut() {
                let lead = row[k].clone();
                for j in k + 1..n {
                    let v = if lead.is_zero() {
                        if row[j].is_zero() {
                            continue;
                        }
                        row[j].clone() * pivot.clone()
                    } else {
                        row[j].clone() * pivot.clone() - lead.clone() * pivot_row[j].clone()
                    };
                    row[j] = v.div_exact(&prev).expect("Bareiss step must divide exactly");
                }
            }
            prev = pivot.clone();
        }
        let d = a[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }
}

impl<F: Field> Matrix<F> {
    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<F>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<F>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&i| !a[i][k].is_zero())?;
            a.swap(k, p);
            inv.swap(k, p);
            let s = a[k][k].inv()?;
            for j in 0..n {
                a[k][j] = a[k][j].clone() * s.clone();
                inv[k][j] = inv[k][j].clone() * s.clone();
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let f = a[i][k].clone();
                for j in 0..n {
                    if !a[k][j].is_zero() {
                        a[i][j] = a[i][j].clone() - f.clone() * a[k][j].clone();
                    }
                    if !inv[k][j].is_zero() {
                        inv[i][j] = inv[i][j].clone() - f.clone() * inv[k][j].clone();
                    }
                }
            }
        }
        Some(Matrix::from_rows(inv))
    }

    /// Coefficients `c_0..c_n` of `det(zI − A) = Σ c_k z^k` (monic), via
    /// similarity reduction to upper Hessenberg form.
    pub fn char_poly(&self) -> Vec<F> {
        assert!(self.is_square(), "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut h: Vec<Vec<F>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
                continue;
            };
            if piv != m {
                h.swap(piv, m);
                for row in h.iter_mut() {
                    row.swap(piv, m);
                }
            }
            let pinv = h[m][m - 1].inv().expect("nonzero pivot");
            for i in m + 1..n {
                if h[i][m - 1].is_zero() {
                    continue;
                }
                let u = h[i][m - 1].clone() * pinv.clone();
                let pivot_row = h[m].clone();
                for (x, y) in h[i].iter_mut().zip(&pivot_row) {
                    *x = x.clone() - u.clone() * y.clone();
                }
                for row in h.iter_mut() {
                    let v = row[m].clone() + u.clone() * row[i].clone();
                    row[m] = v;
                }
            }
        }
        // p[k] is the characteristic polynomial of the leading k×k block.
        let mut p: Vec<Vec<F>> = vec![vec![F::one()]];
        for k in 1..=n {
            let kk = k - 1;
            // (z − h_kk) p_{k−1}
            let prev = &p[k - 1];
            let mut next = vec![F::zero(); k + 1];
            for (d, c) in prev.iter().enumerate() {
                next[d + 1] = next[d + 1].clone() + c.clone();
                next[d] = next[d].clone() - h[kk][kk].clone() * c.clone();
            }
            let mut sub = F::one();
            for i in (0..kk).rev() {
                sub = sub * h[i + 1][i].clone();
                if sub.is_zero() {
                    break;
                }
                let coef = h[i][kk].clone() * sub.clone();
                for (d, c) in p[i].iter().enumerate() {
                    next[d] = next[d].clone() - coef.clone() * c.clone();
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }
}
