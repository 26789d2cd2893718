//! Exact Gaussian elimination over the rationals with right-hand sides in
//! any coefficient ring that is a rational vector space.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_arith::Rational;
use crate::series_core::CoeffRing;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("inconsistent system")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Solution set `particular + span(kernel)` of `A x = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution<R> {
    /// Solution with every free variable set to zero.
    pub particular: Vec<R>,
    pub pivots: Vec<usize>,
    pub kernel: Vec<Vec<Rational>>,
}

impl<R> Solution<R> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn free_columns(&self, ncols: usize) -> Vec<usize> {
        (0..ncols).filter(|c| !self.pivots.contains(c)).collect()
    }
}

/// Solves `A x = b` exactly; `ncols` is given explicitly so that systems
/// with no equations are handled.
pub fn solve<R: CoeffRing>(a: &[Vec<Rational>], b: &[R], ncols: usize) -> Result<Solution<R>, LinalgError> {
    if a.len() != b.len() {
        return Err(LinalgError::Dimension(format!("{} rows, {} right-hand sides", a.len(), b.len())));
    }
    if let Some(row) = a.iter().find(|r| r.len() != ncols) {
        return Err(LinalgError::Dimension(format!("row of length {} in a {ncols}-column system", row.len())));
    }
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut rhs: Vec<R> = b.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        rhs.swap(r, p);
        let inv = m[r][c].recip();
        if !inv.is_one() {
            for x in m[r].iter_mut() {
                *x = &*x * &inv;
            }
            rhs[r] = rhs[r].scale(&inv);
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..ncols {
                if !m[r][j].is_zero() {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
            let t = rhs[r].scale(&f);
            rhs[i] -= &t;
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    if rhs[r..].iter().any(|x| !x.is_zero()) {
        return Err(LinalgError::Inconsistent);
    }
    let mut particular = vec![R::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rhs[i].clone();
    }
    let mut kernel = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -m[i][f].clone();
        }
        kernel.push(v);
    }
    Ok(Solution { particular, pivots, kernel })
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<Rational>], ncols: usize) -> usize {
    let zeros = vec![Rational::zero(); a.len()];
    solve(a, &zeros, ncols).map(|s| s.rank()).unwrap_or(0)
}

/// Reduced echelon basis of the span of `rows`; each entry carries its
/// pivot column. Pivots are taken left to right.
pub fn echelon_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<(usize, Vec<Rational>)> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut out: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    for row in m.into_iter().take(r) {
        let c = row.iter().position(|x| !x.is_zero()).expect("nonzero echelon row");
        out.push((c, row));
    }
    out
}
