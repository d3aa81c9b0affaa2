use num_complex::Complex64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn scale(&mut self, s: Complex64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// `self += other * s`
    pub fn add_scaled(&mut self, other: &CMatrix, s: Complex64) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    /// Solve `self * x = rhs` by LU with partial pivoting. `None` when a pivot
    /// vanishes.
    pub fn solve(&self, rhs: &[Complex64]) -> Option<Vec<Complex64>> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        assert_eq!(n, rhs.len());
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, a[i * n + k].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))?;
            if pivot == 0.0 || !pivot.is_finite() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                b.swap(k, p);
            }
            let inv = a[k * n + k].inv();
            for i in k + 1..n {
                let f = a[i * n + k] * inv;
                if f.norm() == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    let akj = a[k * n + j];
                    a[i * n + j] -= f * akj;
                }
                let bk = b[k];
                b[i] -= f * bk;
            }
        }
        for k in (0..n).rev() {
            let s: Complex64 = (k + 1..n).map(|j| a[k * n + j] * b[j]).sum();
            b[k] = (b[k] - s) / a[k * n + k];
        }
        b.iter().all(|v| v.is_finite()).then_some(b)
    }
}

pub fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
