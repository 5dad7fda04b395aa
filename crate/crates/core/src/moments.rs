//! Classical/quantum decomposition of mixed moments, the genus expansion of the
//! classical part, and the free-probability limit.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Monomial, Param, Poly, RatFunc, UPoly};
use crate::biasimir::{reduce, BiasimirError, CasimirPolynomial, Reduction};
use crate::monotone_walks::{count_monotone_genus, enumerate_monotone_geodesics, WalkError, DEFAULT_ENUMERATION_CAP};
use crate::permutations::{genus, ExponentFunction, PermError, Permutation};
use crate::weingarten::{wg_class, WgError, DEFAULT_D_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentsError {
    #[error("p has length {0} but q has length {1}")]
    LengthMismatch(usize, usize),
    #[error("empty word")]
    EmptyWord,
    #[error("need moments up to order {need}, got {have}")]
    InsufficientMoments { need: usize, have: usize },
    #[error("N = {n} is below d = {d}")]
    SmallN { n: String, d: usize },
    #[error("coefficient of {0} diverges as N grows")]
    Divergent(String),
    #[error(transparent)]
    Wg(#[from] WgError),
    #[error(transparent)]
    Biasimir(#[from] BiasimirError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Abstract moment symbols `a_k = E tr A^k`, `b_k = E tr B^k`, and `hbar`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MomentVar {
    A(u32),
    B(u32),
    Hbar,
}

impl fmt::Display for MomentVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MomentVar::A(k) => write!(f, "a{k}"),
            MomentVar::B(k) => write!(f, "b{k}"),
            MomentVar::Hbar => f.write_str("hbar"),
        }
    }
}

/// Polynomial in moment symbols and `hbar` with coefficients in `Q(N)`.
pub type MomentPolynomial = Poly<MomentVar, RatFunc>;
/// The `N -> infinity` limit of a [`MomentPolynomial`].
pub type LimitPolynomial = Poly<MomentVar, BigRational>;
type NPoly = Poly<MomentVar, UPoly>;

/// The word `A^p(1) B^q(1) ... A^p(d) B^q(d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordSpec {
    pub p: ExponentFunction,
    pub q: ExponentFunction,
}

impl WordSpec {
    pub fn new(p: Vec<u32>, q: Vec<u32>) -> Result<Self, MomentsError> {
        if p.len() != q.len() {
            return Err(MomentsError::LengthMismatch(p.len(), q.len()));
        }
        if p.is_empty() {
            return Err(MomentsError::EmptyWord);
        }
        Ok(WordSpec { p: ExponentFunction::new(p), q: ExponentFunction::new(q) })
    }

    pub fn d(&self) -> usize {
        self.p.d()
    }

    /// Letters of the word, `true` for `A`.
    pub fn letters(&self) -> Vec<bool> {
        let mut out = Vec::new();
        for k in 0..self.d() {
            out.extend(std::iter::repeat_n(true, self.p.values()[k] as usize));
            out.extend(std::iter::repeat_n(false, self.q.values()[k] as usize));
        }
        out
    }
}

/// Finite prefix `s_1, ..., s_m` of a moment sequence; `s_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSequence(pub Vec<BigRational>);

impl MomentSequence {
    pub fn from_ints(v: &[i64]) -> Self {
        MomentSequence(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    pub fn get(&self, k: u32) -> Result<BigRational, MomentsError> {
        if k == 0 {
            return Ok(BigRational::one());
        }
        self.0
            .get(k as usize - 1)
            .cloned()
            .ok_or(MomentsError::InsufficientMoments { need: k as usize, have: self.0.len() })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `tau_N = classical + hbar * quantum`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub classical: MomentPolynomial,
    pub quantum: MomentPolynomial,
}

// C_k -> N x_k on a Casimir polynomial; hbar becomes a moment symbol
fn substitute(p: &CasimirPolynomial, var: fn(u32) -> MomentVar) -> NPoly {
    let mut out = NPoly::zero();
    for (m, c) in p.terms() {
        let cas_deg = m.degree() as usize;
        let mono = Monomial::from_pairs(m.factors().iter().map(|(c, e)| (var(c.0), *e)));
        for (pm, a) in c.terms() {
            let h = pm.exponent(&Param::Hbar);
            let n = pm.exponent(&Param::N) as usize;
            let mm = mono.mul(&Monomial::var_pow(MomentVar::Hbar, h));
            out.add_term(mm, UPoly::monomial(a.clone(), n + cas_deg));
        }
    }
    out
}

struct Side {
    p: NPoly,
    q: NPoly,
}

fn side(red: &Reduction, var: fn(u32) -> MomentVar) -> Side {
    Side { p: substitute(&red.classical, var), q: substitute(&red.quantum, var) }
}

fn decompose(
    p: &ExponentFunction,
    q: &ExponentFunction,
    gamma: &Permutation,
    prefactor: i64,
    cap: usize,
) -> Result<Decomposition, MomentsError> {
    let d = gamma.d();
    if d > cap {
        return Err(WgError::DCap { d, cap }.into());
    }
    let perms: Vec<Permutation> = Permutation::all(d).collect();
    let mut a_sides = HashMap::new();
    let mut b_sides = HashMap::new();
    for pi in &perms {
        a_sides.insert(pi.clone(), side(&reduce(pi, p)?, MomentVar::A));
        b_sides.insert(pi.clone(), side(&reduce(pi, q)?, MomentVar::B));
    }
    let hbar = NPoly::var(MomentVar::Hbar);
    let mut cl: BTreeMap<Vec<usize>, NPoly> = BTreeMap::new();
    let mut qu: BTreeMap<Vec<usize>, NPoly> = BTreeMap::new();
    for p1 in &perms {
        let sa = &a_sides[p1];
        let p1inv = p1.inverse();
        for p2 in &perms {
            let class = Permutation::compose(&p1inv, p2)?.cycle_type();
            let sigma = Permutation::compose(&p2.inverse(), gamma)?;
            let sb = &b_sides[&sigma];
            cl.entry(class.clone()).or_insert_with(NPoly::zero).add_assign_ref(&(&sa.p * &sb.p));
            let mixed = &sa.p * &sb.q + &sa.q * &sb.p + &(&hbar * &sa.q) * &sb.q;
            qu.entry(class).or_insert_with(NPoly::zero).add_assign_ref(&mixed);
        }
    }
    let finish = |acc: BTreeMap<Vec<usize>, NPoly>| -> Result<MomentPolynomial, MomentsError> {
        let mut out = MomentPolynomial::zero();
        for (class, poly) in acc {
            let w = &wg_class(&class, cap)? * &RatFunc::n_pow(-prefactor);
            for (m, c) in poly.terms() {
                out.add_term(m.clone(), &RatFunc::from_poly(c.clone()) * &w);
            }
        }
        Ok(out)
    };
    Ok(Decomposition { classical: finish(cl)?, quantum: finish(qu)? })
}

/// Decompose `tau_N = E tr(A^p(1) B^q(1) ... )` into classical and quantum parts.
pub fn tau_decomposition(w: &WordSpec) -> Result<Decomposition, MomentsError> {
    tau_decomposition_capped(w, DEFAULT_D_CAP)
}

pub fn tau_decomposition_capped(w: &WordSpec, cap: usize) -> Result<Decomposition, MomentsError> {
    decompose(&w.p, &w.q, &Permutation::full_cycle(w.d()), 1, cap)
}

/// `gamma_1 gamma_2'`: forward cycles on `[1..d1]` and `[d1+1..d1+d2]`.
pub fn two_cycle_base(d1: usize, d2: usize) -> Permutation {
    let mut v: Vec<usize> = (0..d1).map(|i| (i + 1) % d1).collect();
    v.extend((0..d2).map(|i| d1 + (i + 1) % d2));
    Permutation::from_zero_based(v)
}

/// Decompose `tau_12 = E[tr(w1) tr(w2)]`.
pub fn two_point_decomposition(w1: &WordSpec, w2: &WordSpec) -> Result<Decomposition, MomentsError> {
    two_point_decomposition_capped(w1, w2, DEFAULT_D_CAP)
}

pub fn two_point_decomposition_capped(w1: &WordSpec, w2: &WordSpec, cap: usize) -> Result<Decomposition, MomentsError> {
    let cat = |a: &ExponentFunction, b: &ExponentFunction| {
        ExponentFunction::new(a.values().iter().chain(b.values()).copied().collect())
    };
    decompose(&cat(&w1.p, &w2.p), &cat(&w1.q, &w2.q), &two_cycle_base(w1.d(), w2.d()), 2, cap)
}

impl Decomposition {
    /// `classical + hbar * quantum` as one polynomial.
    pub fn total(&self) -> MomentPolynomial {
        let h = Monomial::var(MomentVar::Hbar);
        self.classical.clone() + self.quantum.mul_monomial(&h, &RatFunc::one())
    }
}

/// Coefficientwise limit as `N -> infinity`.
pub fn limit_at_infinity(p: &MomentPolynomial) -> Result<LimitPolynomial, MomentsError> {
    let mut out = LimitPolynomial::zero();
    for (m, c) in p.terms() {
        let l = c.limit_at_infinity().ok_or_else(|| MomentsError::Divergent(m.to_string()))?;
        out.add_term(m.clone(), l);
    }
    Ok(out)
}

/// Numeric values for every symbol in a moment polynomial.
#[derive(Clone, Debug)]
pub struct Assignment {
    pub n: BigRational,
    pub hbar: BigRational,
    pub a: MomentSequence,
    pub b: MomentSequence,
}

fn monomial_value(m: &Monomial<MomentVar>, hbar: &BigRational, a: &MomentSequence, b: &MomentSequence) -> Result<BigRational, MomentsError> {
    let mut v = BigRational::one();
    for (x, e) in m.factors() {
        let base = match x {
            MomentVar::A(k) => a.get(*k)?,
            MomentVar::B(k) => b.get(*k)?,
            MomentVar::Hbar => hbar.clone(),
        };
        v *= num_traits::pow(base, *e as usize);
    }
    Ok(v)
}

pub fn evaluate(p: &MomentPolynomial, at: &Assignment) -> Result<BigRational, MomentsError> {
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let cv = c.eval(&at.n).ok_or_else(|| MomentsError::SmallN { n: at.n.to_string(), d: 0 })?;
        acc += cv * monomial_value(m, &at.hbar, &at.a, &at.b)?;
    }
    Ok(acc)
}

pub fn evaluate_limit(p: &LimitPolynomial, hbar: &BigRational, a: &MomentSequence, b: &MomentSequence) -> Result<BigRational, MomentsError> {
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        acc += c * monomial_value(m, hbar, a, b)?;
    }
    Ok(acc)
}

fn cycle_monomial(pi: &Permutation, r: &ExponentFunction, var: fn(u32) -> MomentVar) -> Monomial<MomentVar> {
    Monomial::from_pairs(pi.cycles0().iter().map(|c| {
        let k: u32 = c.iter().map(|&i| r.values()[i]).sum();
        (var(k), (k > 0) as u32)
    }))
}

fn signed(k: usize, c: BigInt) -> BigRational {
    let v = BigRational::from_integer(c);
    if k.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// `e_0, ..., e_kmax` as polynomials in the moment symbols, with
/// `classical = sum_k e_k N^(-2k)` exactly.
pub fn classical_expansion_symbolic(w: &WordSpec, k_max: usize) -> Result<Vec<LimitPolynomial>, MomentsError> {
    let d = w.d();
    let gamma = Permutation::full_cycle(d);
    let mut e = vec![LimitPolynomial::zero(); k_max + 1];
    let perms: Vec<Permutation> = Permutation::all(d).collect();
    for p1 in &perms {
        let ma = cycle_monomial(p1, &w.p, MomentVar::A);
        for p2 in &perms {
            let s = Permutation::compose(&p1.inverse(), p2)?;
            let t = Permutation::compose(&p2.inverse(), &gamma)?;
            let h = genus(&[p1.clone(), s.clone(), t.clone()])?;
            if h > k_max {
                continue;
            }
            let mono = ma.mul(&cycle_monomial(&t, &w.q, MomentVar::B));
            for g in 0..=(k_max - h) {
                let c = count_monotone_genus(p1, p2, g)?;
                e[g + h].add_term(mono.clone(), signed(s.word_norm(), c.into()));
            }
        }
    }
    Ok(e)
}

/// Numeric `e_0, ..., e_kmax` at the given moments.
pub fn classical_expansion(
    w: &WordSpec,
    k_max: usize,
    a: &MomentSequence,
    b: &MomentSequence,
) -> Result<Vec<BigRational>, MomentsError> {
    let one = BigRational::one();
    classical_expansion_symbolic(w, k_max)?
        .iter()
        .map(|p| evaluate_limit(p, &one, a, b))
        .collect()
}

/// Genus-zero formula from explicitly enumerated monotone geodesics.
pub fn free_moment_symbolic(w: &WordSpec) -> Result<LimitPolynomial, MomentsError> {
    let d = w.d();
    let gamma = Permutation::full_cycle(d);
    let perms: Vec<Permutation> = Permutation::all(d).collect();
    let mut acc = LimitPolynomial::zero();
    for p1 in &perms {
        for p2 in &perms {
            let s = Permutation::compose(&p1.inverse(), p2)?;
            let t = Permutation::compose(&p2.inverse(), &gamma)?;
            if p1.word_norm() + s.word_norm() + t.word_norm() != gamma.word_norm() {
                continue;
            }
            let geo = enumerate_monotone_geodesics(p1, p2, DEFAULT_ENUMERATION_CAP)?.len();
            let mono = cycle_monomial(p1, &w.p, MomentVar::A).mul(&cycle_monomial(&t, &w.q, MomentVar::B));
            acc.add_term(mono, signed(s.word_norm(), geo.into()));
        }
    }
    Ok(acc)
}

pub fn free_moment(w: &WordSpec, a: &MomentSequence, b: &MomentSequence) -> Result<BigRational, MomentsError> {
    evaluate_limit(&free_moment_symbolic(w)?, &BigRational::one(), a, b)
}

/// Free cumulants `k_1..k_m` from moments `m_1..m_m`.
pub fn free_cumulants(m: &MomentSequence) -> Vec<BigRational> {
    let n = m.len();
    let mom = |k: usize| if k == 0 { BigRational::one() } else { m.0[k - 1].clone() };
    // conv[s][j] = sum over compositions of j into s nonnegative parts of products of moments
    let mut conv = vec![vec![BigRational::zero(); n + 1]; n + 1];
    conv[0][0] = BigRational::one();
    for s in 1..=n {
        for j in 0..=n {
            let mut acc = BigRational::zero();
            for i in 0..=j {
                acc += &conv[s - 1][j - i] * mom(i);
            }
            conv[s][j] = acc;
        }
    }
    let mut kappa = vec![BigRational::zero(); n + 1];
    for k in 1..=n {
        // m_k = sum_{s=1}^k kappa_s conv[s][k-s]
        let mut rest = mom(k);
        for s in 1..k {
            rest -= &kappa[s] * &conv[s][k - s];
        }
        kappa[k] = rest;
    }
    kappa.remove(0);
    kappa
}

/// Mixed moment of free `A`, `B` from cumulants over colour-pure noncrossing partitions.
pub fn free_moment_oracle(w: &WordSpec, a: &MomentSequence, b: &MomentSequence) -> Result<BigRational, MomentsError> {
    let need_a = w.p.total() as usize;
    let need_b = w.q.total() as usize;
    if a.len() < need_a {
        return Err(MomentsError::InsufficientMoments { need: need_a, have: a.len() });
    }
    if b.len() < need_b {
        return Err(MomentsError::InsufficientMoments { need: need_b, have: b.len() });
    }
    Ok(free_moment_from_cumulants(w, &free_cumulants(a), &free_cumulants(b)))
}

/// Same sum, from precomputed cumulants; they must cover the exponent totals of `w`.
pub fn free_moment_from_cumulants(w: &WordSpec, ka: &[BigRational], kb: &[BigRational]) -> BigRational {
    let letters = w.letters();
    let mut oracle = NcOracle { letters: &letters, ka, kb, f: HashMap::new(), g: HashMap::new() };
    oracle.f(0, letters.len())
}

struct NcOracle<'a> {
    letters: &'a [bool],
    ka: &'a [BigRational],
    kb: &'a [BigRational],
    f: HashMap<(usize, usize), BigRational>,
    g: HashMap<(usize, usize, usize), BigRational>,
}

impl NcOracle<'_> {
    // sum over colour-pure noncrossing partitions of positions [i, j)
    fn f(&mut self, i: usize, j: usize) -> BigRational {
        if i >= j {
            return BigRational::one();
        }
        if let Some(v) = self.f.get(&(i, j)) {
            return v.clone();
        }
        let v = self.g(i, j, 1);
        self.f.insert((i, j), v.clone());
        v
    }

    // the block of position i has its current last element at `a` and `s` elements so far
    fn g(&mut self, a: usize, j: usize, s: usize) -> BigRational {
        if let Some(v) = self.g.get(&(a, j, s)) {
            return v.clone();
        }
        let colour = self.letters[a];
        let kappa = if colour { &self.ka[s - 1] } else { &self.kb[s - 1] };
        let mut acc = kappa * self.f(a + 1, j);
        for b in a + 1..j {
            if self.letters[b] == colour {
                let inner = self.f(a + 1, b);
                if !inner.is_zero() {
                    acc += inner * self.g(b, j, s + 1);
                }
            }
        }
        self.g.insert((a, j, s), acc.clone());
        acc
    }
}

/// Quantum part evaluated at each `N` in the list.
pub fn quantum_boundedness_probe(
    w: &WordSpec,
    a: &MomentSequence,
    b: &MomentSequence,
    hbar: &BigRational,
    n_list: &[BigRational],
) -> Result<Vec<BigRational>, MomentsError> {
    let dec = tau_decomposition(w)?;
    n_list
        .iter()
        .map(|n| {
            if *n < BigRational::from_integer(BigInt::from(w.d())) {
                return Err(MomentsError::SmallN { n: n.to_string(), d: w.d() });
            }
            evaluate(&dec.quantum, &Assignment { n: n.clone(), hbar: hbar.clone(), a: a.clone(), b: b.clone() })
        })
        .collect()
}

/// Relative change between two probe values, scaled by `max(|x|, |y|, 1)`.
pub fn relative_variation(x: &BigRational, y: &BigRational) -> BigRational {
    let scale = x.abs().max(y.abs()).max(BigRational::one());
    (x - y).abs() / scale
}
