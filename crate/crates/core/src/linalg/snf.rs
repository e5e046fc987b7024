//! Smith normal form with transformation matrices.
//!
//! Classical elimination: move the smallest nonzero entry of the active
//! block to the pivot, clear its row and column by Euclidean steps, and fold
//! in any row whose entries the pivot fails to divide. `P` and `Q` are
//! unimodular and not canonical; only `D` is an invariant of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{det, IntMatrix, LinalgError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
    d: IntMatrix,
    rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    /// Assembles a result and re-verifies every invariant against `source`.
    pub fn new(source: &IntMatrix, p: IntMatrix, q: IntMatrix, d: IntMatrix) -> Result<Self, LinalgError> {
        let pq = p.checked_mul(source)?.checked_mul(&q)?;
        if pq != d {
            return Err(LinalgError::SnfCheck("P*A*Q != D"));
        }
        if !det(&p)?.abs().is_one() || !det(&q)?.abs().is_one() {
            return Err(LinalgError::SnfCheck("transform is not unimodular"));
        }
        if !d.is_diagonal() {
            return Err(LinalgError::SnfCheck("D is not diagonal"));
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d[(i, i)].clone()).collect();
        if diag.iter().any(Signed::is_negative) {
            return Err(LinalgError::SnfCheck("negative diagonal entry"));
        }
        let rank = diag.iter().take_while(|x| !x.is_zero()).count();
        if diag[rank..].iter().any(|x| !x.is_zero()) {
            return Err(LinalgError::SnfCheck("zero diagonal entry before a nonzero one"));
        }
        if diag[..rank].windows(2).any(|w| !w[1].is_multiple_of(&w[0])) {
            return Err(LinalgError::SnfCheck("diagonal fails the divisibility chain"));
        }
        let p_inv = super::rational_inverse(&p)?
            .to_integer()
            .ok_or(LinalgError::SnfCheck("P has no integral inverse"))?;
        let invariant_factors = diag[..rank].iter().filter(|x| !x.is_one()).cloned().collect();
        Ok(Self {
            p,
            p_inv,
            q,
            d,
            rank,
            invariant_factors,
        })
    }

    pub fn p(&self) -> &IntMatrix {
        &self.p
    }

    /// `P⁻¹`, integral because `P` is unimodular.
    pub fn p_inverse(&self) -> &IntMatrix {
        &self.p_inv
    }

    pub fn q(&self) -> &IntMatrix {
        &self.q
    }

    pub fn d(&self) -> &IntMatrix {
        &self.d
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Diagonal entries greater than one, in divisibility order.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

struct Work {
    d: IntMatrix,
    p: IntMatrix,
    p_inv: IntMatrix,
    q: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.p.swap_rows(a, b);
        self.p_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.q.swap_cols(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(dst, src, k);
        self.p.add_row_multiple(dst, src, k);
        self.p_inv.add_col_multiple(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(dst, src, k);
        self.q.add_col_multiple(dst, src, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.p.negate_row(i);
        self.p_inv.negate_col(i);
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form `P·A·Q = D` of an arbitrary integer matrix.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        p: IntMatrix::identity(rows),
        p_inv: IntMatrix::identity(rows),
        q: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = w.min_entry(t) else {
                break;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            let pivot = w.d[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                let x = w.d[(i, t)].clone();
                if !x.is_zero() {
                    let k = x.div_floor(&pivot);
                    w.add_row(i, t, &-k);
                    dirty |= !w.d[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                let x = w.d[(t, j)].clone();
                if !x.is_zero() {
                    let k = x.div_floor(&pivot);
                    w.add_col(j, t, &-k);
                    dirty |= !w.d[(t, j)].is_zero();
                }
            }
            if dirty {
                continue;
            }
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !w.d[(i, j)].is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.d[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    SnfResult::new(a, w.p, w.q, w.d).expect("SNF elimination produced an inconsistent result")
}
