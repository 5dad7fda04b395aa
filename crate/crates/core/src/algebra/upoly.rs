use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<BigInt>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn x() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide every coefficient by `c`; panics if the division is not exact.
    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        UPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    let (q, r) = a.div_rem(c);
                    assert!(r.is_zero(), "inexact scalar division");
                    q
                })
                .collect(),
        }
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    /// Pseudo-remainder of `self` by `d`.
    pub fn pseudo_rem(&self, d: &UPoly) -> UPoly {
        let dd = d.degree().expect("pseudo division by zero");
        let lc = d.lead();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let t = UPoly::monomial(r.lead(), dr - dd);
            r = &r.scale(&lc) - &(&t * d);
        }
        r
    }

    /// Primitive gcd (positive leading coefficient) up to the integer content.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part()
    }

    /// Exact division in Z[x]; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.lead();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let (c, rem) = r.lead().div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            q[dr - dd] = c.clone();
            r = &r - &UPoly::monomial(c, dr - dd).mul_ref(d);
        }
        Some(UPoly::new(q))
    }

    fn mul_ref(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UPoly::new(v)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Coefficients of `x^deg * p(1/x)`, i.e. the coefficient list read from the top.
    pub fn reversed(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("N"))
    }
}

impl PartialOrd for UPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl Zero for UPoly {
    fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for UPoly {
    fn one() -> Self {
        UPoly::constant(BigInt::one())
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        self.mul_ref(o)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(self, o: UPoly) -> UPoly {
        &self + &o
    }
}

impl Sub for UPoly {
    type Output = UPoly;
    fn sub(self, o: UPoly) -> UPoly {
        &self - &o
    }
}

impl Mul for UPoly {
    type Output = UPoly;
    fn mul(self, o: UPoly) -> UPoly {
        self.mul_ref(&o)
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> UPoly {
        UPoly::from_i64s(cs)
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = &p(&[-1, 1]) * &p(&[2, 1]);
        let b = &p(&[-1, 1]) * &p(&[-3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let c = &a.scale(&BigInt::from(6)) * &p(&[0, 1]);
        assert_eq!(c.gcd(&b.scale(&BigInt::from(4))), p(&[-1, 1]));
    }

    #[test]
    fn exact_division() {
        let a = &p(&[-1, 0, 1]) * &p(&[-4, 0, 1]);
        assert_eq!(a.div_exact(&p(&[-2, 1])).unwrap(), &p(&[-1, 0, 1]) * &p(&[2, 1]));
        assert!(a.div_exact(&p(&[-3, 1])).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-2, 0, 1]).to_string(), "N^2 - 2");
        assert_eq!(p(&[0, -3]).to_string(), "-3*N");
        assert_eq!(UPoly::zero().to_string(), "0");
    }
}
