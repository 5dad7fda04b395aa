//! Exact polynomial arithmetic shared by the computational modules.

pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod upoly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use matrix::{OperatorMatrix, QMatrix};
pub use poly::{Coeff, Monomial, Poly};
pub use ratfunc::RatFunc;
pub use upoly::UPoly;

/// The two formal parameters `hbar` and `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Hbar,
    N,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Param::Hbar => "hbar",
            Param::N => "N",
        })
    }
}

/// Integer polynomial in `hbar` and `N`.
pub type ParamPoly = Poly<Param, BigInt>;

pub fn param_hbar() -> ParamPoly {
    ParamPoly::var(Param::Hbar)
}

pub fn param_n() -> ParamPoly {
    ParamPoly::var(Param::N)
}

pub fn param_int(c: i64) -> ParamPoly {
    ParamPoly::constant(BigInt::from(c))
}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => {
            if let Some((ip, fp)) = s.split_once('.') {
                let neg = ip.starts_with('-');
                let digits = format!("{}{}", ip.trim_start_matches('-'), fp);
                let n: BigInt = digits.parse().ok()?;
                let d = num_traits::pow(BigInt::from(10), fp.len());
                let r = BigRational::new(n, d);
                return Some(if neg { -r } else { r });
            }
            Some(BigRational::from_integer(s.parse().ok()?))
        }
    }
}

/// Serialize an exact rational as `"p/q"` (or `"p"` when integral).
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
