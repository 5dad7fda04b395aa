use std::ops::{Add, Mul, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense square matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    data: Vec<BigRational>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix { n, data: vec![BigRational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, BigRational::one())
    }

    pub fn scalar(n: usize, c: BigRational) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.n + j] = v;
    }

    pub fn trace(&self) -> BigRational {
        (0..self.n).fold(BigRational::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QMatrix { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `Some(c)` when the matrix is `c * I`.
    pub fn as_scalar(&self) -> Option<BigRational> {
        if self.n == 0 {
            return Some(BigRational::zero());
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { &c } else { &BigRational::zero() };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Kronecker product `self (x) o`.
    pub fn kron(&self, o: &QMatrix) -> QMatrix {
        let n = self.n * o.n;
        let mut out = QMatrix::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.n {
                    for l in 0..o.n {
                        out.set(i * o.n + k, j * o.n + l, a * o.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &QMatrix) -> QMatrix {
        &(self * o) - &(o * self)
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        QMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        QMatrix { n: self.n, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        let n = self.n;
        let mut out = QMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

/// `N x N` matrix whose entries are operators, all of the same size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorMatrix {
    pub n: usize,
    pub entries: Vec<QMatrix>,
}

impl OperatorMatrix {
    pub fn get(&self, i: usize, j: usize) -> &QMatrix {
        &self.entries[i * self.n + j]
    }

    pub fn op_size(&self) -> usize {
        self.entries[0].size()
    }

    pub fn identity(n: usize, m: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { QMatrix::identity(m) } else { QMatrix::zeros(m) })
            .collect();
        OperatorMatrix { n, entries }
    }

    /// `(XY)_ij = sum_l X_il Y_lj`, keeping operator order.
    pub fn mul(&self, o: &OperatorMatrix) -> OperatorMatrix {
        let n = self.n;
        let m = self.op_size();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = QMatrix::zeros(m);
                for l in 0..n {
                    acc = &acc + &(self.get(i, l) * o.get(l, j));
                }
                entries.push(acc);
            }
        }
        OperatorMatrix { n, entries }
    }

    pub fn pow(&self, k: u32) -> OperatorMatrix {
        (0..k).fold(OperatorMatrix::identity(self.n, self.op_size()), |acc, _| acc.mul(self))
    }

    /// `sum_i X_ii`, an operator.
    pub fn trace(&self) -> QMatrix {
        let mut acc = QMatrix::zeros(self.op_size());
        for i in 0..self.n {
            acc = &acc + self.get(i, i);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn kron_and_scalar() {
        let a = QMatrix::scalar(2, rat(3, 1));
        let b = QMatrix::identity(3);
        let k = a.kron(&b);
        assert_eq!(k.size(), 6);
        assert_eq!(k.as_scalar(), Some(rat(3, 1)));
        assert_eq!(k.trace(), rat(18, 1));
        let mut e = QMatrix::zeros(2);
        e.set(0, 1, rat(1, 1));
        assert_eq!(e.as_scalar(), None);
        assert!((&e * &e).as_scalar().unwrap().is_zero());
    }
}
