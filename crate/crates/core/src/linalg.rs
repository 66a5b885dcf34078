//! Square matrices over the Laurent ring. Only unit determinants are
//! inverted, so every solution stays inside the ring.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ring::{sign, Chart, Field, Laurent};

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<C> {
    n: usize,
    entries: Vec<Laurent<C>>,
}

impl<C: Field> Matrix<C> {
    pub fn from_fn(chart: &Chart, n: usize, mut f: impl FnMut(usize, usize) -> Laurent<C>) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = f(i, j);
                debug_assert!(e.chart() == chart);
                entries.push(e);
            }
        }
        Matrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Laurent<C> {
        &self.entries[i * self.n + j]
    }

    /// Laplace expansion along rows, memoised on the set of used columns.
    pub fn determinant(&self, chart: &Chart) -> Laurent<C> {
        let mut memo = HashMap::new();
        self.minor(0, 0, chart, &mut memo)
    }

    fn minor(&self, row: usize, used: u64, chart: &Chart, memo: &mut HashMap<u64, Laurent<C>>) -> Laurent<C> {
        if row == self.n {
            return Laurent::one(chart);
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut total = Laurent::zero(chart);
        let mut free = 0;
        for col in 0..self.n {
            if used & (1 << col) != 0 {
                continue;
            }
            let e = self.get(row, col);
            if !e.is_zero() {
                let sub = self.minor(row + 1, used | (1 << col), chart, memo);
                total = total + (e * &sub).scale(&sign(free));
            }
            free += 1;
        }
        memo.insert(used, total.clone());
        total
    }

    /// Inverse via the adjugate; the determinant must be a monomial.
    pub fn inverse(&self, chart: &Chart) -> Result<Self> {
        assert!(self.n < 64, "matrix too large");
        let det = self.determinant(chart);
        if det.is_zero() {
            return Err(Error::NotInvertibleOverRing("matrix is singular".into()));
        }
        if !det.is_unit() {
            return Err(Error::NotInvertibleOverRing(format!(
                "determinant has {} terms, not a monomial",
                det.len()
            )));
        }
        let det_inv = det.inverse()?;
        let n = self.n;
        Ok(Matrix::from_fn(chart, n, |i, j| {
            // (A^-1)_ij = (-1)^(i+j) M_ji / det
            let cof = self.without(j, i).determinant(chart);
            (cof * &det_inv).scale(&sign(i + j))
        }))
    }

    fn without(&self, row: usize, col: usize) -> Self {
        let n = self.n - 1;
        let mut entries = Vec::with_capacity(n * n);
        for i in (0..self.n).filter(|&i| i != row) {
            for j in (0..self.n).filter(|&j| j != col) {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { n, entries }
    }

    pub fn mul_vec(&self, v: &[Laurent<C>], chart: &Chart) -> Vec<Laurent<C>> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Laurent::zero(chart), |acc, j| acc + self.get(i, j) * &v[j])
            })
            .collect()
    }

    /// Solves `A x = b` exactly.
    pub fn solve(&self, b: &[Laurent<C>], chart: &Chart) -> Result<Vec<Laurent<C>>> {
        Ok(self.inverse(chart)?.mul_vec(b, chart))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn inverse_of_monomial_determinant() {
        let c = Chart::new(["q", "p"]).unwrap();
        let q = Laurent::<Q>::variable(&c, "q").unwrap();
        let p = Laurent::<Q>::variable(&c, "p").unwrap();
        let m = Matrix::from_fn(&c, 2, |i, j| match (i, j) {
            (0, 0) => q.clone(),
            (0, 1) => p.clone(),
            (1, 1) => Laurent::from_int(&c, 3),
            _ => Laurent::zero(&c),
        });
        assert_eq!(m.determinant(&c), q.scale(&Q::from_integer(3.into())));
        let inv = m.inverse(&c).unwrap();
        let e0 = inv.mul_vec(&m.mul_vec(&[Laurent::one(&c), Laurent::zero(&c)], &c), &c);
        assert!(e0[0].is_one() && e0[1].is_zero());
        let x = m.solve(&[p.clone(), Laurent::from_int(&c, 3)], &c).unwrap();
        assert_eq!(m.mul_vec(&x, &c), vec![p.clone(), Laurent::from_int(&c, 3)]);
    }

    #[test]
    fn non_unit_determinant_is_rejected() {
        let c = Chart::new(["q"]).unwrap();
        let m = Matrix::from_fn(&c, 1, |_, _| Laurent::<Q>::variable(&c, "q").unwrap() + Laurent::one(&c));
        assert!(matches!(m.inverse(&c), Err(Error::NotInvertibleOverRing(_))));
    }

    #[test]
    fn determinant_of_permutation() {
        let c = Chart::new(["x"]).unwrap();
        let m = Matrix::<Q>::from_fn(&c, 3, |i, j| {
            if (i + 1) % 3 == j {
                Laurent::one(&c)
            } else {
                Laurent::zero(&c)
            }
        });
        assert!(m.determinant(&c).is_one());
    }
}
