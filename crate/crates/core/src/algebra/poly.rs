use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Coefficient ring for [`Poly`].
pub trait Coeff: Clone + PartialEq + Debug + Zero + One + Neg<Output = Self> {}
impl<T: Clone + PartialEq + Debug + Zero + One + Neg<Output = T>> Coeff for T {}

/// A commuting monomial: sorted `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V>(Vec<(V, u32)>);

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: V) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn var_pow(v: V, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (V, u32)>) -> Self {
        pairs
            .into_iter()
            .fold(Self::one(), |m, (v, e)| m.mul(&Self::var_pow(v, e)))
    }

    pub fn factors(&self) -> &[(V, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_where(&self, f: impl Fn(&V) -> bool) -> u32 {
        self.0.iter().filter(|(v, _)| f(v)).map(|(_, e)| e).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + o.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Monomial(out)
    }

    /// Split off every variable matching `f`; returns `(matching, rest)`.
    pub fn split(&self, f: impl Fn(&V) -> bool) -> (Self, Self) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(v, _)| f(v));
        (Monomial(a), Monomial(b))
    }
}

impl<V: Display> Display for Monomial<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse commutative polynomial with monomials over `V` and coefficients in `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<V: Ord, C> {
    terms: BTreeMap<Monomial<V>, C>,
}

impl<V: Ord + Clone, C: Coeff> Poly<V, C> {
    pub fn constant(c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: V) -> Self {
        Self::term(Monomial::var(v), C::one())
    }

    pub fn term(m: Monomial<V>, c: C) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial<V>, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial<V>) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    pub fn mul_monomial(&self, mono: &Monomial<V>, c: &C) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.add_term(m.mul(mono), a.clone() * c.clone());
        }
        out
    }

    pub fn add_assign_ref(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self.clone())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<V, D> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Maximum of `weight(monomial)` over the support; `None` for the zero polynomial.
    pub fn max_weight(&self, weight: impl Fn(&Monomial<V>, &C) -> u32) -> Option<u32> {
        self.terms.iter().map(|(m, c)| weight(m, c)).max()
    }

    /// Evaluate the monomials through `eval`, summing `coeff * value` in the target ring.
    pub fn evaluate<T>(&self, mut eval: impl FnMut(&Monomial<V>, &C) -> T) -> T
    where
        T: Zero + Add<Output = T>,
    {
        self.terms
            .iter()
            .fold(T::zero(), |acc, (m, c)| acc + eval(m, c))
    }
}

impl<V: Ord + Clone, C: Coeff> Zero for Poly<V, C> {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<V: Ord + Clone, C: Coeff> One for Poly<V, C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<V: Ord + Clone, C: Coeff> Add for Poly<V, C> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (m, c) in o.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<V: Ord + Clone, C: Coeff> Sub for Poly<V, C> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<V: Ord + Clone, C: Coeff> Neg for Poly<V, C> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<V: Ord + Clone, C: Coeff> Mul for Poly<V, C> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<V: Ord + Clone, C: Coeff> Mul for &Poly<V, C> {
    type Output = Poly<V, C>;
    fn mul(self, o: &Poly<V, C>) -> Poly<V, C> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<V: Ord + Clone + Display, C: Coeff + Display> Display for Poly<V, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            if m.is_one() {
                write!(f, "{cs}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else if cs == "-1" {
                write!(f, "-{m}")?;
            } else {
                write!(f, "{cs}*{m}")?;
            }
        }
        Ok(())
    }
}
