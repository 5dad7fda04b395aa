//! Biasimirs as polynomials in the higher Casimirs, with a PBW normal-ordering
//! oracle in the enveloping algebra of `gl_n`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{param_hbar, param_n, Monomial, Param, ParamPoly, Poly, UPoly};
use crate::permutations::{
    canonical_reduction_path, contract_zeros, flatten, random_reduction_path, ExponentFunction, PermError, Permutation,
};

pub const DEFAULT_PBW_CAP: usize = 4;
pub const DEFAULT_WORD_CAP: usize = 500_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiasimirError {
    #[error("PBW dimension n = {n} exceeds the cap of {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("expansion needs {words} words, above the cap of {cap}")]
    WordCap { words: u128, cap: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// The higher Casimir `C_k = Tr Z^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Casimir(pub u32);

impl fmt::Display for Casimir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

/// Polynomial in commuting Casimirs with coefficients in `Z[hbar, N]`.
pub type CasimirPolynomial = Poly<Casimir, ParamPoly>;

/// `C_k`, with the convention `C_0 = N`.
pub fn casimir(k: u32) -> CasimirPolynomial {
    if k == 0 {
        CasimirPolynomial::constant(param_n())
    } else {
        CasimirPolynomial::var(Casimir(k))
    }
}

/// Degree under the grading where `N` and every `C_k` have degree one.
pub fn casimir_degree(p: &CasimirPolynomial) -> Option<u32> {
    p.max_weight(|m, c| {
        let n_deg = c.terms().map(|(cm, _)| cm.exponent(&Param::N)).max().unwrap_or(0);
        m.degree() + n_deg
    })
}

fn multiply_by_hbar_power(p: &CasimirPolynomial, shift: i32) -> CasimirPolynomial {
    p.map_coeffs(|c| {
        let mut out = ParamPoly::zero();
        for (m, a) in c.terms() {
            let e = m.exponent(&Param::Hbar) as i32 + shift;
            assert!(e >= 0, "negative hbar power");
            let nm = Monomial::from_pairs([(Param::Hbar, e as u32), (Param::N, m.exponent(&Param::N))]);
            out.add_term(nm, a.clone());
        }
        out
    })
}

/// Split `p = classical + hbar * quantum` with `classical` free of `hbar`.
pub fn split_hbar(p: &CasimirPolynomial) -> (CasimirPolynomial, CasimirPolynomial) {
    let mut classical = CasimirPolynomial::zero();
    let mut rest = CasimirPolynomial::zero();
    for (m, c) in p.terms() {
        for (cm, a) in c.terms() {
            let target = if cm.exponent(&Param::Hbar) == 0 { &mut classical } else { &mut rest };
            target.add_term(m.clone(), ParamPoly::term(cm.clone(), a.clone()));
        }
    }
    (classical, multiply_by_hbar_power(&rest, -1))
}

/// `prod_j C_{sum of r over cycle j}`.
pub fn classical_component(pi: &Permutation, r: &ExponentFunction) -> Result<CasimirPolynomial, BiasimirError> {
    if r.d() != pi.d() {
        return Err(PermError::ExponentLength(r.d(), pi.d()).into());
    }
    Ok(pi
        .cycles0()
        .iter()
        .map(|c| casimir(c.iter().map(|&i| r.values()[i]).sum()))
        .fold(CasimirPolynomial::one(), |acc, x| acc * x))
}

/// A Biasimir on an explicit ground set of labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiasimirTerm {
    pub coeff: ParamPoly,
    /// Sorted labels.
    pub ground: Vec<usize>,
    /// `images[k]` is the image of `ground[k]`, itself a label.
    pub images: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl BiasimirTerm {
    pub fn from_permutation(coeff: ParamPoly, pi: &Permutation) -> Self {
        BiasimirTerm {
            coeff,
            ground: (1..=pi.d()).collect(),
            images: pi.one_line(),
            exponents: vec![1; pi.d()],
        }
    }

    /// Order-preserving relabelling onto `[m]`.
    pub fn normalized(&self) -> Permutation {
        let pos = |x: usize| self.ground.binary_search(&x).expect("image in ground set");
        Permutation::from_zero_based(self.images.iter().map(|&x| pos(x)).collect())
    }

    fn image_of(&self, x: usize) -> usize {
        self.images[self.ground.binary_search(&x).unwrap()]
    }

    fn restricted(&self, coeff: ParamPoly, drop: usize, f: impl Fn(usize) -> usize) -> BiasimirTerm {
        let ground: Vec<usize> = self.ground.iter().copied().filter(|&x| x != drop).collect();
        let images = ground.iter().map(|&x| f(x)).collect();
        let exponents = vec![1; ground.len()];
        BiasimirTerm { coeff, ground, images, exponents }
    }
}

/// A formal sum of labelled Biasimirs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiasimirTermSum {
    pub terms: Vec<BiasimirTerm>,
}

/// `C_pi - C_{t pi t}` for the nice Coxeter transposition `t` swapping the
/// ground-set neighbours at positions `k` and `k+1` (all exponents one).
pub fn nice_conjugation_correction(term: &BiasimirTerm, k: usize) -> BiasimirTermSum {
    let j = term.ground[k];
    let j1 = term.ground[k + 1];
    let pj = term.image_of(j);
    let pj1 = term.image_of(j1);
    assert!(pj != j1, "conjugation by ({j} {j1}) is not nice");
    let mut out = BiasimirTermSum::default();
    if pj == j || pj1 == j1 {
        return out;
    }
    let h = &term.coeff * &param_hbar();
    // pi' on S \ {j+1}
    out.terms.push(term.restricted(h.clone(), j1, |x| {
        if x == j {
            pj1
        } else if term.image_of(x) == j1 {
            pj
        } else {
            term.image_of(x)
        }
    }));
    if pj1 != j {
        // pi'' on S \ {j}
        out.terms.push(term.restricted(-h, j, |x| {
            if x == j1 {
                pj
            } else if term.image_of(x) == j {
                pj1
            } else {
                term.image_of(x)
            }
        }));
    } else {
        // pi''' on S \ {j}
        out.terms.push(term.restricted(-(h * param_n()), j, |x| if x == j1 { pj } else { term.image_of(x) }));
    }
    out
}

fn canonical_value(pi: &Permutation) -> CasimirPolynomial {
    debug_assert!(pi.is_canonical());
    classical_component(pi, &ExponentFunction::ones(pi.d())).unwrap()
}

fn memo() -> &'static Mutex<HashMap<Vec<usize>, CasimirPolynomial>> {
    static M: OnceLock<Mutex<HashMap<Vec<usize>, CasimirPolynomial>>> = OnceLock::new();
    M.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `C_pi` with all exponents one, as a Casimir polynomial (memoized).
pub fn biasimir_flat(pi: &Permutation) -> CasimirPolynomial {
    if pi.is_canonical() {
        return canonical_value(pi);
    }
    if let Some(v) = memo().lock().unwrap().get(pi.images()) {
        return v.clone();
    }
    let path = canonical_reduction_path(pi);
    let v = sum_along_path(pi, &path, &mut |q| biasimir_flat(q));
    memo().lock().unwrap().insert(pi.images().to_vec(), v.clone());
    v
}

/// Same as [`biasimir_flat`] but along randomized reduction paths at every level, unmemoized.
pub fn biasimir_flat_random<R: rand::Rng>(pi: &Permutation, rng: &mut R) -> CasimirPolynomial {
    if pi.is_canonical() {
        return canonical_value(pi);
    }
    let path = random_reduction_path(pi, rng);
    let mut sub = |q: &Permutation| biasimir_flat_random(q, rng);
    sum_along_path(pi, &path, &mut sub)
}

fn sum_along_path(
    pi: &Permutation,
    path: &[usize],
    sub: &mut dyn FnMut(&Permutation) -> CasimirPolynomial,
) -> CasimirPolynomial {
    let mut cur = pi.clone();
    let mut total = CasimirPolynomial::zero();
    for &j in path {
        let t = BiasimirTerm::from_permutation(ParamPoly::one(), &cur);
        for c in nice_conjugation_correction(&t, j - 1).terms {
            let v = sub(&c.normalized());
            total.add_assign_ref(&v.map_coeffs(|x| x.clone() * c.coeff.clone()));
        }
        cur = cur.conjugate_adjacent(j - 1);
    }
    total.add_assign_ref(&canonical_value(&cur));
    total
}

/// `C_pi^(r) = classical + hbar * quantum`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub classical: CasimirPolynomial,
    pub quantum: CasimirPolynomial,
}

impl Reduction {
    pub fn full(&self) -> CasimirPolynomial {
        self.classical.clone() + multiply_by_hbar_power(&self.quantum, 1)
    }
}

/// The full Biasimir `C_pi^(r)` as a Casimir polynomial.
pub fn biasimir(pi: &Permutation, r: &ExponentFunction) -> Result<CasimirPolynomial, BiasimirError> {
    let c = contract_zeros(pi, r)?;
    let flat = flatten(&c.perm, &c.exponents)?;
    let v = if flat.d() == 0 { CasimirPolynomial::one() } else { biasimir_flat(&flat) };
    Ok(v.map_coeffs(|x| x.clone() * param_n().pow(c.zero_cycles as u32)))
}

pub fn reduce(pi: &Permutation, r: &ExponentFunction) -> Result<Reduction, BiasimirError> {
    let (classical, quantum) = split_hbar(&biasimir(pi, r)?);
    Ok(Reduction { classical, quantum })
}

// ---------------------------------------------------------------------------
// PBW oracle

/// Generator `Z_ij` (0-based), ordered lexicographically.
pub type Gen = (u8, u8);

/// Element of `U(gl_n)` in the normal-ordered basis, coefficients in `Z[hbar]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PBWElement {
    pub terms: BTreeMap<Vec<Gen>, UPoly>,
}

impl PBWElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn word(w: Vec<Gen>) -> Self {
        let mut e = Self::zero();
        e.add_term(w, UPoly::one());
        e
    }

    pub fn add_term(&mut self, w: Vec<Gen>, c: UPoly) {
        if c.is_zero() {
            return;
        }
        let s = self.terms.remove(&w).map_or(c.clone(), |old| &old + &c);
        if !s.is_zero() {
            self.terms.insert(w, s);
        }
    }

    pub fn add_scaled(&mut self, o: &PBWElement, c: &UPoly) {
        for (w, a) in &o.terms {
            self.add_term(w.clone(), a * c);
        }
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(|w| w.windows(2).all(|p| p[0] <= p[1]))
    }
}

impl fmt::Display for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|(i, j)| format!("Z{}{}", i + 1, j + 1)).collect::<Vec<_>>().join("*")
                };
                format!("({})*{}", c.display_in("hbar"), word)
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Which out-of-order adjacent pair to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    FirstDescent,
    LastDescent,
}

/// Normal ordering with a per-strategy memo over words.
pub struct NormalOrderer {
    strategy: Strategy,
    memo: HashMap<Vec<Gen>, PBWElement>,
}

impl NormalOrderer {
    pub fn new(strategy: Strategy) -> Self {
        NormalOrderer { strategy, memo: HashMap::new() }
    }

    pub fn order_word(&mut self, w: &[Gen]) -> PBWElement {
        let descent = match self.strategy {
            Strategy::FirstDescent => (0..w.len().saturating_sub(1)).find(|&k| w[k] > w[k + 1]),
            Strategy::LastDescent => (0..w.len().saturating_sub(1)).rev().find(|&k| w[k] > w[k + 1]),
        };
        let Some(k) = descent else {
            return PBWElement::word(w.to_vec());
        };
        if let Some(v) = self.memo.get(w) {
            return v.clone();
        }
        // Z_a Z_b = Z_b Z_a + hbar (delta_jk Z_il - delta_li Z_kj)
        let ((i, j), (kk, l)) = (w[k], w[k + 1]);
        let mut swapped = w.to_vec();
        swapped.swap(k, k + 1);
        let mut out = self.order_word(&swapped);
        let hbar = UPoly::x();
        let mut bracket = |g: Gen, sign: i64, out: &mut PBWElement| {
            let mut v = w[..k].to_vec();
            v.push(g);
            v.extend_from_slice(&w[k + 2..]);
            let e = self.order_word(&v);
            out.add_scaled(&e, &hbar.scale(&BigInt::from(sign)));
        };
        if j == kk {
            bracket((i, l), 1, &mut out);
        }
        if l == i {
            bracket((kk, j), -1, &mut out);
        }
        self.memo.insert(w.to_vec(), out.clone());
        out
    }

    pub fn order(&mut self, e: &PBWElement) -> PBWElement {
        let mut out = PBWElement::zero();
        for (w, c) in &e.terms {
            let v = self.order_word(w);
            out.add_scaled(&v, c);
        }
        out
    }

    pub fn multiply(&mut self, a: &PBWElement, b: &PBWElement) -> PBWElement {
        let mut out = PBWElement::zero();
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                let v = self.order_word(&w);
                out.add_scaled(&v, &(ca * cb));
            }
        }
        out
    }
}

/// Normal-order a formal word in the generators of `U(gl_n)`.
pub fn pbw_normal_order(word: &[Gen], n: usize, cap: usize) -> Result<PBWElement, BiasimirError> {
    if n > cap {
        return Err(BiasimirError::DimensionCap { n, cap });
    }
    Ok(NormalOrderer::new(Strategy::FirstDescent).order_word(word))
}

// every word of (Z^m)_{ab}, as index paths a = c_0, ..., c_m = b
fn power_words(m: u32, a: u8, b: u8, n: u8) -> Vec<Vec<Gen>> {
    if m == 0 {
        return if a == b { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut path = vec![a];
    fn rec(m: u32, b: u8, n: u8, path: &mut Vec<u8>, out: &mut Vec<Vec<Gen>>) {
        if path.len() as u32 == m {
            let mut w: Vec<Gen> = path.windows(2).map(|p| (p[0], p[1])).collect();
            w.push((*path.last().unwrap(), b));
            out.push(w);
            return;
        }
        for c in 0..n {
            path.push(c);
            rec(m, b, n, path, out);
            path.pop();
        }
    }
    rec(m, b, n, &mut path, &mut out);
    out
}

/// Expand `C_pi^(r)` in `U(gl_n)` directly from its index-sum definition.
pub fn biasimir_pbw(
    pi: &Permutation,
    r: &ExponentFunction,
    n: usize,
    ord: &mut NormalOrderer,
) -> Result<PBWElement, BiasimirError> {
    if r.d() != pi.d() {
        return Err(PermError::ExponentLength(r.d(), pi.d()).into());
    }
    let d = pi.d();
    let words = (n as u128).pow(r.total() + d as u32);
    if words > DEFAULT_WORD_CAP as u128 * 64 {
        return Err(BiasimirError::WordCap { words, cap: DEFAULT_WORD_CAP });
    }
    let mut raw: BTreeMap<Vec<Gen>, i64> = BTreeMap::new();
    let mut idx = vec![0u8; d];
    loop {
        let mut partial: Vec<Vec<Gen>> = vec![Vec::new()];
        for k in 0..d {
            let ws = power_words(r.values()[k], idx[k], idx[pi.images()[k]], n as u8);
            let mut next = Vec::with_capacity(partial.len() * ws.len());
            for p in &partial {
                for w in &ws {
                    let mut v = p.clone();
                    v.extend_from_slice(w);
                    next.push(v);
                }
            }
            partial = next;
            if partial.is_empty() {
                break;
            }
        }
        for w in partial {
            *raw.entry(w).or_insert(0) += 1;
        }
        // next index tuple
        let mut k = 0;
        while k < d {
            idx[k] += 1;
            if (idx[k] as usize) < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
    }
    let mut out = PBWElement::zero();
    for (w, c) in raw {
        let v = ord.order_word(&w);
        out.add_scaled(&v, &UPoly::constant(BigInt::from(c)));
    }
    Ok(out)
}

/// `C_k = Tr Z^k` in `U(gl_n)`; `C_0 = n`.
pub fn casimir_pbw(k: u32, n: usize, ord: &mut NormalOrderer) -> PBWElement {
    let mut out = PBWElement::zero();
    for a in 0..n as u8 {
        for w in power_words(k, a, a, n as u8) {
            let v = ord.order_word(&w);
            out.add_scaled(&v, &UPoly::one());
        }
    }
    out
}

/// Image of a Casimir polynomial in `U(gl_n)` with `N = n`.
pub fn casimir_polynomial_pbw(p: &CasimirPolynomial, n: usize, ord: &mut NormalOrderer) -> PBWElement {
    let mut cache: HashMap<u32, PBWElement> = HashMap::new();
    let mut out = PBWElement::zero();
    for (m, c) in p.terms() {
        let mut coeff = UPoly::zero();
        for (cm, a) in c.terms() {
            let nn = BigInt::from(n).pow(cm.exponent(&Param::N));
            coeff = &coeff + &UPoly::monomial(a * nn, cm.exponent(&Param::Hbar) as usize);
        }
        let mut e = PBWElement::one();
        for (cas, pow) in m.factors() {
            let ck = cache.entry(cas.0).or_insert_with(|| casimir_pbw(cas.0, n, ord)).clone();
            for _ in 0..*pow {
                e = ord.multiply(&e, &ck);
            }
        }
        out.add_scaled(&e, &coeff);
    }
    out
}

/// Compare the direct PBW expansion of `C_pi^(r)` with `reduce(pi, r)` at `N = n`.
pub fn oracle_check(pi: &Permutation, r: &ExponentFunction, n: usize) -> Result<bool, BiasimirError> {
    oracle_check_capped(pi, r, n, DEFAULT_PBW_CAP)
}

pub fn oracle_check_capped(pi: &Permutation, r: &ExponentFunction, n: usize, cap: usize) -> Result<bool, BiasimirError> {
    if n > cap || n == 0 {
        return Err(BiasimirError::DimensionCap { n, cap });
    }
    let mut ord = NormalOrderer::new(Strategy::FirstDescent);
    let lhs = biasimir_pbw(pi, r, n, &mut ord)?;
    let red = reduce(pi, r)?;
    let rhs = casimir_polynomial_pbw(&red.full(), n, &mut ord);
    Ok(lhs == rhs)
}

/// `hbar` as a Casimir-polynomial coefficient; convenience for fixtures.
pub fn coeff_hbar_n(hbar: u32, n: u32, c: i64) -> ParamPoly {
    ParamPoly::term(Monomial::from_pairs([(Param::Hbar, hbar), (Param::N, n)]), BigInt::from(c))
}
