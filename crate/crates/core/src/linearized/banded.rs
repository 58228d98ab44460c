//! Banded LU factorization with partial pivoting.

use crate::error::{Error, Result};

/// A square band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Storage reserves `kl` extra super-diagonals for the fill-in produced by
/// row interchanges, following the LAPACK `gbtrf` layout (row-major here).
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; n * Self::width_for(kl, ku)],
        }
    }

    fn width_for(kl: usize, ku: usize) -> usize {
        2 * kl + ku + 1
    }

    fn width(&self) -> usize {
        Self::width_for(self.kl, self.ku)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> Option<usize> {
        let (kl, ku) = (self.kl, self.ku);
        if j + kl < i || j > i + ku + kl {
            None
        } else {
            Some(i * self.width() + (j + kl - i))
        }
    }

    /// Entry `(i, j)`; zero outside the stored band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.offset(i, j).map_or(0.0, |o| self.data[o])
    }

    /// Adds `v` to entry `(i, j)`.
    ///
    /// # Panics
    ///
    /// If `(i, j)` lies outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band (kl={}, ku={})",
            self.kl,
            self.ku
        );
        let o = self.offset(i, j).expect("inside band");
        self.data[o] += v;
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n.saturating_sub(1));
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Factorizes in place. A pivot below `threshold` in magnitude is
    /// reported as [`Error::SingularSystem`].
    pub fn factorize(mut self, threshold: f64) -> Result<BandLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut piv = k;
            let mut best = self.get(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.get(i, k).abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if !(best >= threshold) || !best.is_finite() {
                return Err(Error::SingularSystem {
                    row: k,
                    pivot: best,
                    threshold,
                });
            }
            pivots[k] = piv;
            let last_col = (k + kl + ku).min(n - 1);
            if piv != k {
                for j in k..=last_col {
                    let a = self.offset(k, j).expect("pivot row window");
                    let b = self.offset(piv, j).expect("pivot row window");
                    self.data.swap(a, b);
                }
            }
            let diag = self.get(k, k);
            for i in k + 1..=last_row {
                let oi = self.offset(i, k).expect("sub-diagonal");
                let l = self.data[oi] / diag;
                self.data[oi] = l;
                if l == 0.0 {
                    continue;
                }
                for j in k + 1..=last_col {
                    let akj = self.data[self.offset(k, j).expect("row k window")];
                    let oij = self.offset(i, j).expect("row i window");
                    self.data[oij] -= l * akj;
                }
            }
        }
        Ok(BandLu {
            lu: self,
            pivots,
        })
    }
}

/// The factors `P A = L U` of a band matrix.
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    pivots: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let a = &self.lu;
        let n = a.n;
        let (kl, ku) = (a.kl, a.ku);
        let mut x = rhs.to_vec();
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                x.swap(k, p);
            }
            let xk = x[k];
            for i in k + 1..=(k + kl).min(n.saturating_sub(1)) {
                x[i] -= a.get(i, k) * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=(k + kl + ku).min(n - 1) {
                s -= a.get(k, j) * x[j];
            }
            x[k] = s / a.get(k, k);
        }
        x
    }
}
