use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::upoly::UPoly;

/// A reduced ratio of integer polynomials in the formal symbol `N`.
///
/// Canonical form: numerator and denominator coprime, the integer contents
/// share no common factor, and the denominator has a positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UPoly,
    den: UPoly,
}

impl RatFunc {
    pub fn new(num: UPoly, den: UPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let mut c = num.content().gcd(&den.content());
        if den.lead().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: UPoly) -> Self {
        RatFunc { num: p, den: UPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(UPoly::from_i64s(&[c]))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::new(UPoly::constant(q.numer().clone()), UPoly::constant(q.denom().clone()))
    }

    /// The symbol `N` itself.
    pub fn n() -> Self {
        Self::from_poly(UPoly::x())
    }

    /// `N^k` for any integer `k`.
    pub fn n_pow(k: i64) -> Self {
        let m = UPoly::monomial(BigInt::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            RatFunc { num: UPoly::one(), den: m }
        }
    }

    pub fn numer(&self) -> &UPoly {
        &self.num
    }

    pub fn denom(&self) -> &UPoly {
        &self.den
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.num.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Exact evaluation; `None` at a pole.
    pub fn eval(&self, n: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(n);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(n) / d)
    }

    /// Degree of the rational function at infinity, `deg num - deg den`; `None` for zero.
    pub fn order_at_infinity(&self) -> Option<i64> {
        let dn = self.num.degree()? as i64;
        Some(dn - self.den.degree().unwrap() as i64)
    }

    /// Limit as `N -> infinity`; `None` if it diverges.
    pub fn limit_at_infinity(&self) -> Option<BigRational> {
        match self.order_at_infinity() {
            None => Some(BigRational::zero()),
            Some(o) if o < 0 => Some(BigRational::zero()),
            Some(0) => Some(BigRational::new(self.num.lead(), self.den.lead())),
            Some(_) => None,
        }
    }

    /// Laurent expansion at `N = infinity`.
    ///
    /// Returns `(top, c)` with `self = sum_k c[k] * N^(top - k)` for the first `terms` coefficients.
    pub fn laurent_at_infinity(&self, terms: usize) -> (i64, Vec<BigRational>) {
        let Some(top) = self.order_at_infinity() else {
            return (0, vec![BigRational::zero(); terms]);
        };
        let a = self.num.reversed();
        let b = self.den.reversed();
        let b0 = BigRational::from_integer(b[0].clone());
        let mut out: Vec<BigRational> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut acc = BigRational::from_integer(a.get(k).cloned().unwrap_or_default());
            for j in 1..=k.min(b.len() - 1) {
                acc -= BigRational::from_integer(b[j].clone()) * &out[k - j];
            }
            out.push(acc / &b0);
        }
        (top, out)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &UPoly| {
            let s = p.to_string();
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: UPoly::zero(), den: UPoly::one() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc { num: UPoly::one(), den: UPoly::one() }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                (&self).$m(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
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
    fn reduces_to_canonical_form() {
        let f = RatFunc::new(p(&[-2, 2]), p(&[4, 0, -4]));
        assert_eq!(f, RatFunc::new(p(&[-1]), p(&[2, 2])));
        assert_eq!(f.denom().lead(), BigInt::from(2));
    }

    #[test]
    fn geometric_series_at_infinity() {
        // 1/(N^2-1) = N^-2 + N^-4 + ...
        let f = RatFunc::new(p(&[1]), p(&[-1, 0, 1]));
        let (top, c) = f.laurent_at_infinity(5);
        assert_eq!(top, -2);
        let ints: Vec<i64> = c.iter().map(|x| x.to_integer().try_into().unwrap()).collect();
        assert_eq!(ints, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn arithmetic_roundtrip() {
        let a = RatFunc::new(p(&[1, 1]), p(&[0, 1]));
        let b = RatFunc::new(p(&[3]), p(&[-1, 1]));
        let s = &(&a + &b) - &b;
        assert_eq!(s, a);
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(a.eval(&BigRational::from_integer(2.into())).unwrap(), BigRational::new(3.into(), 2.into()));
    }
}
