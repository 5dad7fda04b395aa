//! The finite-N Littlewood-Richardson process and explicit `gl_N` irreps.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{rational_to_f64, OperatorMatrix, QMatrix};

pub const DEFAULT_N_CAP: usize = 5;
pub const DEFAULT_SIZE_CAP: usize = 12;
pub const DEFAULT_IRREP_DEGREE_CAP: usize = 6;
pub const DEFAULT_IRREP_N_CAP: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LrError {
    #[error("signature {0:?} is not weakly decreasing")]
    NotDecreasing(Vec<i64>),
    #[error("empty signature")]
    Empty,
    #[error("signatures have different lengths {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("N = {n} exceeds the cap of {cap}")]
    NCap { n: usize, cap: usize },
    #[error("|lambda| + |mu| = {size} exceeds the cap of {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("tensor degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("particle configuration is not strictly decreasing")]
    NotStrict,
    #[error("hbar must be positive")]
    BadHbar,
    #[error("measure is empty")]
    EmptyMeasure,
    #[error("word exponents have lengths {0} and {1}")]
    WordMismatch(usize, usize),
}

/// Highest weight of a `gl_N` irrep: a weakly decreasing integer vector.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Signature {
    lambda: Vec<i64>,
}

impl TryFrom<Vec<i64>> for Signature {
    type Error = LrError;
    fn try_from(v: Vec<i64>) -> Result<Self, LrError> {
        Signature::new(v)
    }
}

impl From<Signature> for Vec<i64> {
    fn from(s: Signature) -> Vec<i64> {
        s.lambda
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.lambda.iter().join(","))
    }
}

impl Signature {
    pub fn new(lambda: Vec<i64>) -> Result<Self, LrError> {
        if lambda.is_empty() {
            return Err(LrError::Empty);
        }
        if lambda.windows(2).any(|w| w[0] < w[1]) {
            return Err(LrError::NotDecreasing(lambda));
        }
        Ok(Signature { lambda })
    }

    /// The trivial signature `(0, ..., 0)`.
    pub fn trivial(n: usize) -> Self {
        Signature { lambda: vec![0; n] }
    }

    /// Parse `"2,1,0"` or `"(2,1,0)"`.
    pub fn parse(s: &str) -> Result<Self, String> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let v: Result<Vec<i64>, _> = t.split(',').map(|x| x.trim().parse::<i64>()).collect();
        let v = v.map_err(|e| format!("bad signature {s:?}: {e}"))?;
        Signature::new(v).map_err(|e| e.to_string())
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn parts(&self) -> &[i64] {
        &self.lambda
    }

    pub fn last(&self) -> i64 {
        *self.lambda.last().unwrap()
    }

    /// `lambda - lambda_N (1, ..., 1)`, a partition.
    pub fn untwisted(&self) -> Vec<usize> {
        let m = self.last();
        self.lambda.iter().map(|&x| (x - m) as usize).collect()
    }

    pub fn size(&self) -> i64 {
        self.lambda.iter().sum()
    }

    /// Shift every part by `m` (tensoring with `det^m`).
    pub fn twist(&self, m: i64) -> Signature {
        Signature { lambda: self.lambda.iter().map(|x| x + m).collect() }
    }
}

/// Weyl dimension formula.
pub fn weyl_dim(s: &Signature) -> BigUint {
    let l = s.parts();
    let n = l.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(l[i] - l[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    (num / den).to_biguint().expect("positive dimension")
}

fn check_pair(l: &Signature, m: &Signature, n_cap: usize, size_cap: usize) -> Result<(), LrError> {
    if l.n() != m.n() {
        return Err(LrError::SizeMismatch(l.n(), m.n()));
    }
    if l.n() > n_cap {
        return Err(LrError::NCap { n: l.n(), cap: n_cap });
    }
    let size = l.untwisted().iter().sum::<usize>() + m.untwisted().iter().sum::<usize>();
    if size > size_cap {
        return Err(LrError::SizeCap { size, cap: size_cap });
    }
    Ok(())
}

/// Multiplicities of `V_nu` in `V_lambda (x) V_mu`.
pub fn lr_coefficients(l: &Signature, m: &Signature) -> Result<BTreeMap<Signature, u64>, LrError> {
    lr_coefficients_capped(l, m, DEFAULT_N_CAP, DEFAULT_SIZE_CAP)
}

pub fn lr_coefficients_capped(
    l: &Signature,
    m: &Signature,
    n_cap: usize,
    size_cap: usize,
) -> Result<BTreeMap<Signature, u64>, LrError> {
    check_pair(l, m, n_cap, size_cap)?;
    let lam = l.untwisted();
    let mu = m.untwisted();
    let shift = l.last() + m.last();
    let total: usize = lam.iter().sum::<usize>() + mu.iter().sum::<usize>();
    let mut out = BTreeMap::new();
    for nu in outer_shapes(&lam, mu[0], total) {
        let c = count_lr_tableaux(&lam, &mu, &nu);
        if c > 0 {
            let sig = Signature { lambda: nu.iter().map(|&x| x as i64 + shift).collect() };
            out.insert(sig, c);
        }
    }
    Ok(out)
}

// partitions nu with lam <= nu, nu_i <= lam_i + width, |nu| = total, same length
fn outer_shapes(lam: &[usize], width: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(lam: &[usize], width: usize, left: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == lam.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = (lam[i] + width).min(if i == 0 { usize::MAX } else { cur[i - 1] });
        for v in lam[i]..=hi {
            if v - lam[i] > left {
                break;
            }
            cur.push(v);
            rec(lam, width, left - (v - lam[i]), i + 1, cur, out);
            cur.pop();
        }
    }
    let size: usize = lam.iter().sum();
    let mut out = Vec::new();
    if total >= size {
        rec(lam, width, total - size, 0, &mut Vec::new(), &mut out);
    }
    out
}

// semistandard fillings of nu/lam with content mu whose reverse reading word is a lattice word
fn count_lr_tableaux(lam: &[usize], mu: &[usize], nu: &[usize]) -> u64 {
    let cells: Vec<(usize, usize)> = (0..nu.len())
        .flat_map(|r| (lam[r]..nu[r]).rev().map(move |c| (r, c)))
        .collect();
    let mut fill: HashMap<(usize, usize), usize> = HashMap::new();
    let mut counts = vec![0usize; mu.len()];
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        lam: &[usize],
        mu: &[usize],
        fill: &mut HashMap<(usize, usize), usize>,
        counts: &mut Vec<usize>,
    ) -> u64 {
        if k == cells.len() {
            return 1;
        }
        let (r, c) = cells[k];
        let mut total = 0;
        for v in 0..mu.len() {
            if counts[v] >= mu[v] || (v > 0 && counts[v] >= counts[v - 1]) {
                continue;
            }
            if let Some(&right) = fill.get(&(r, c + 1)) {
                if right < v {
                    continue;
                }
            }
            if r > 0 && c >= lam[r - 1] {
                if let Some(&above) = fill.get(&(r - 1, c)) {
                    if above >= v {
                        continue;
                    }
                }
            }
            fill.insert((r, c), v);
            counts[v] += 1;
            total += rec(k + 1, cells, lam, mu, fill, counts);
            counts[v] -= 1;
            fill.remove(&(r, c));
        }
        total
    }
    rec(0, &cells, lam, mu, &mut fill, &mut counts)
}

/// Pieri rule for a one-row `mu`: `nu / lambda` must be a horizontal strip.
pub fn pieri(l: &Signature, m: usize) -> BTreeMap<Signature, u64> {
    let lam = l.untwisted();
    let total = lam.iter().sum::<usize>() + m;
    let mut out = BTreeMap::new();
    for nu in outer_shapes(&lam, m, total) {
        let strip = (1..nu.len()).all(|i| nu[i] <= lam[i - 1]);
        if strip {
            out.insert(Signature { lambda: nu.iter().map(|&x| x as i64 + l.last()).collect() }, 1);
        }
    }
    out
}

/// Exact probability measure on signatures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicMeasure {
    pub weights: BTreeMap<Signature, BigRational>,
}

impl IsotypicMeasure {
    pub fn point(s: Signature) -> Self {
        IsotypicMeasure { weights: BTreeMap::from([(s, BigRational::one())]) }
    }

    pub fn total(&self) -> BigRational {
        self.weights.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn get(&self, s: &Signature) -> BigRational {
        self.weights.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `sum_nu P(nu) f(nu)`.
    pub fn expectation(&self, mut f: impl FnMut(&Signature) -> BigRational) -> BigRational {
        self.weights.iter().fold(BigRational::zero(), |acc, (s, p)| acc + p * f(s))
    }
}

/// `P(nu) = mult(nu) dim(nu) / (dim(lambda) dim(mu))`.
pub fn isotypic_measure(l: &Signature, m: &Signature) -> Result<IsotypicMeasure, LrError> {
    isotypic_measure_capped(l, m, DEFAULT_N_CAP, DEFAULT_SIZE_CAP)
}

pub fn isotypic_measure_capped(l: &Signature, m: &Signature, n_cap: usize, size_cap: usize) -> Result<IsotypicMeasure, LrError> {
    let lr = lr_coefficients_capped(l, m, n_cap, size_cap)?;
    let den = BigInt::from(weyl_dim(l) * weyl_dim(m));
    let weights = lr
        .into_iter()
        .map(|(s, c)| {
            let p = BigRational::new(BigInt::from(c) * BigInt::from(weyl_dim(&s)), den.clone());
            (s, p)
        })
        .collect();
    Ok(IsotypicMeasure { weights })
}

/// Strictly decreasing particle positions on the lattice `hbar Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParticleConfig {
    pub c: Vec<BigRational>,
    pub hbar: BigRational,
}

impl ParticleConfig {
    pub fn new(c: Vec<BigRational>, hbar: BigRational) -> Result<Self, LrError> {
        if !hbar.is_positive() {
            return Err(LrError::BadHbar);
        }
        if c.windows(2).any(|w| w[0] <= w[1]) {
            return Err(LrError::NotStrict);
        }
        Ok(ParticleConfig { c, hbar })
    }
}

/// `c_i = hbar (lambda_i + N - i)`.
pub fn signature_to_config(s: &Signature, hbar: &BigRational) -> ParticleConfig {
    let n = s.n() as i64;
    let c = s
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &l)| hbar * BigRational::from_integer(BigInt::from(l + n - 1 - i as i64)))
        .collect();
    ParticleConfig { c, hbar: hbar.clone() }
}

/// `sum_i c_i^k prod_{j != i} (1 - hbar / (c_i - c_j))`, divided by `N` when normalized.
pub fn bpp_power_sum(cfg: &ParticleConfig, k: u32, normalized: bool) -> BigRational {
    let n = cfg.c.len();
    let mut acc = BigRational::zero();
    for i in 0..n {
        let mut t = num_traits::pow(cfg.c[i].clone(), k as usize);
        for j in 0..n {
            if j != i && !t.is_zero() {
                t *= BigRational::one() - &cfg.hbar / (&cfg.c[i] - &cfg.c[j]);
            }
        }
        acc += t;
    }
    if normalized {
        acc / BigRational::from_integer(BigInt::from(n))
    } else {
        acc
    }
}

/// `rho(e_ij)` for an irrep, `i, j` 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrepMatrices {
    pub n: usize,
    pub dim: usize,
    pub e: Vec<QMatrix>,
}

impl IrrepMatrices {
    pub fn e(&self, i: usize, j: usize) -> &QMatrix {
        &self.e[i * self.n + j]
    }

    /// Every relation `[e_ij, e_kl] = d_jk e_il - d_li e_kj`.
    pub fn commutation_relations_hold(&self) -> bool {
        let n = self.n;
        let zero = QMatrix::zeros(self.dim);
        (0..n).cartesian_product(0..n).all(|(i, j)| {
            (0..n).cartesian_product(0..n).all(|(k, l)| {
                let lhs = self.e(i, j).commutator(self.e(k, l));
                let a = if j == k { self.e(i, l) } else { &zero };
                let b = if l == i { self.e(k, j) } else { &zero };
                lhs == a - b
            })
        })
    }

    /// The operator matrix `Z_ij = hbar rho(e_ij)`.
    pub fn z_matrix(&self, hbar: &BigRational) -> OperatorMatrix {
        OperatorMatrix { n: self.n, entries: self.e.iter().map(|m| m.scale(hbar)).collect() }
    }
}

type Word = Vec<u8>;

fn word_index(w: &[u8], n: usize) -> usize {
    w.iter().fold(0, |acc, &x| acc * n + x as usize)
}

fn index_word(mut k: usize, n: usize, len: usize) -> Word {
    let mut w = vec![0u8; len];
    for p in (0..len).rev() {
        w[p] = (k % n) as u8;
        k /= n;
    }
    w
}

// position permutations of a group generated by blocks, each with its sign
fn block_group(blocks: &[Vec<usize>], len: usize) -> Vec<(Vec<usize>, bool)> {
    let per_block: Vec<Vec<(Vec<usize>, bool)>> = blocks
        .iter()
        .map(|b| {
            b.iter()
                .copied()
                .permutations(b.len())
                .map(|img| {
                    let odd = (0..img.len())
                        .flat_map(|i| (i + 1..img.len()).map(move |j| (i, j)))
                        .filter(|&(i, j)| img[i] > img[j])
                        .count()
                        % 2
                        == 1;
                    (img, odd)
                })
                .collect()
        })
        .collect();
    let mut out = vec![((0..len).collect::<Vec<usize>>(), false)];
    for (b, choices) in blocks.iter().zip(per_block) {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for (base, s) in &out {
            for (img, odd) in &choices {
                let mut p = base.clone();
                for (src, dst) in b.iter().zip(img) {
                    p[*src] = *dst;
                }
                next.push((p, s ^ odd));
            }
        }
        out = next;
    }
    out
}

fn act(p: &[usize], w: &[u8]) -> Word {
    let mut out = vec![0u8; w.len()];
    for (k, &x) in w.iter().enumerate() {
        out[p[k]] = x;
    }
    out
}

struct Rref {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Rref {
    fn insert(&mut self, mut x: Vec<BigRational>) -> bool {
        for (p, row) in &self.rows {
            if !x[*p].is_zero() {
                let f = x[*p].clone();
                for (a, b) in x.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
            }
        }
        let Some(q) = x.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let inv = x[q].recip();
        for v in x.iter_mut() {
            *v *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[q].is_zero() {
                let f = row[q].clone();
                for (a, b) in row.iter_mut().zip(&x) {
                    if !b.is_zero() {
                        *a -= &f * b;
                    }
                }
            }
        }
        self.rows.push((q, x));
        true
    }
}

fn irrep_cache() -> &'static Mutex<HashMap<Signature, Arc<IrrepMatrices>>> {
    static C: OnceLock<Mutex<HashMap<Signature, Arc<IrrepMatrices>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Explicit matrices of the irrep with highest weight `s`, cached.
pub fn irrep_matrices(s: &Signature) -> Result<Arc<IrrepMatrices>, LrError> {
    irrep_matrices_capped(s, DEFAULT_IRREP_N_CAP, DEFAULT_IRREP_DEGREE_CAP)
}

pub fn irrep_matrices_capped(s: &Signature, n_cap: usize, degree_cap: usize) -> Result<Arc<IrrepMatrices>, LrError> {
    if s.n() > n_cap {
        return Err(LrError::NCap { n: s.n(), cap: n_cap });
    }
    let alpha = s.untwisted();
    let degree: usize = alpha.iter().sum();
    if degree > degree_cap {
        return Err(LrError::DegreeCap { degree, cap: degree_cap });
    }
    if let Some(m) = irrep_cache().lock().unwrap().get(s) {
        return Ok(m.clone());
    }
    let m = Arc::new(build_irrep(s.n(), &alpha, s.last()));
    irrep_cache().lock().unwrap().insert(s.clone(), m.clone());
    Ok(m)
}

fn build_irrep(n: usize, alpha: &[usize], twist: i64) -> IrrepMatrices {
    let len: usize = alpha.iter().sum();
    let target = weyl_dim(&Signature { lambda: alpha.iter().map(|&x| x as i64).collect() })
        .to_usize()
        .unwrap();
    let space = n.pow(len as u32);
    // tableau filled row by row
    let mut rows = Vec::new();
    let mut next = 0;
    for &a in alpha {
        rows.push((next..next + a).collect::<Vec<usize>>());
        next += a;
    }
    let cols: Vec<Vec<usize>> = (0..alpha.first().copied().unwrap_or(0))
        .map(|c| rows.iter().filter(|r| r.len() > c).map(|r| r[c]).collect())
        .collect();
    let row_group = block_group(&rows, len);
    let col_group = block_group(&cols, len);

    let mut rref = Rref { rows: Vec::new() };
    for k in 0..space {
        if rref.rows.len() == target {
            break;
        }
        let w = index_word(k, n, len);
        let mut after_cols: HashMap<Word, i64> = HashMap::new();
        for (q, odd) in &col_group {
            *after_cols.entry(act(q, &w)).or_insert(0) += if *odd { -1 } else { 1 };
        }
        let mut v = vec![BigRational::zero(); space];
        let mut any = false;
        for (u, c) in after_cols.iter().filter(|(_, c)| **c != 0) {
            for (p, _) in &row_group {
                v[word_index(&act(p, u), n)] += BigRational::from_integer(BigInt::from(*c));
                any = true;
            }
        }
        if any {
            rref.insert(v);
        }
    }
    let dim = rref.rows.len();
    let mut e = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut m = QMatrix::zeros(dim);
            for (b, (_, row)) in rref.rows.iter().enumerate() {
                let mut img = vec![BigRational::zero(); space];
                for (k, val) in row.iter().enumerate() {
                    if val.is_zero() {
                        continue;
                    }
                    let w = index_word(k, n, len);
                    for pos in 0..len {
                        if w[pos] as usize == j {
                            let mut w2 = w.clone();
                            w2[pos] = i as u8;
                            img[word_index(&w2, n)] += val;
                        }
                    }
                }
                for (a, (p, _)) in rref.rows.iter().enumerate() {
                    m.set(a, b, img[*p].clone());
                }
            }
            if i == j && twist != 0 {
                m = &m + &QMatrix::scalar(dim, BigRational::from_integer(BigInt::from(twist)));
            }
            e.push(m);
        }
    }
    IrrepMatrices { n, dim, e }
}

/// Outcome of comparing `Tr Z^k` with the deformed power sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerelomovPopovReport {
    pub scalar: Option<String>,
    pub expected: String,
    pub holds: bool,
}

pub fn perelomov_popov_report(s: &Signature, k: u32, hbar: &BigRational) -> Result<PerelomovPopovReport, LrError> {
    let rho = irrep_matrices(s)?;
    let tr = rho.z_matrix(hbar).pow(k).trace();
    let expected = bpp_power_sum(&signature_to_config(s, hbar), k, false);
    let scalar = tr.as_scalar();
    Ok(PerelomovPopovReport {
        holds: scalar.as_ref() == Some(&expected),
        scalar: scalar.map(|x| crate::algebra::fmt_rational(&x)),
        expected: crate::algebra::fmt_rational(&expected),
    })
}

/// `Tr Z^k` acts on the irrep as the scalar `p_k(c)`.
pub fn perelomov_popov_check(s: &Signature, k: u32, hbar: &BigRational) -> Result<bool, LrError> {
    Ok(perelomov_popov_report(s, k, hbar)?.holds)
}

/// BPP matrices `A = Z (x) I` and `B = I (x) Z'` on `V (x) W`.
pub fn bpp_pair(l: &Signature, m: &Signature, hbar: &BigRational) -> Result<(OperatorMatrix, OperatorMatrix), LrError> {
    if l.n() != m.n() {
        return Err(LrError::SizeMismatch(l.n(), m.n()));
    }
    let rho = irrep_matrices(l)?;
    let sigma = irrep_matrices(m)?;
    let iv = QMatrix::identity(rho.dim);
    let iw = QMatrix::identity(sigma.dim);
    let a = rho.e.iter().map(|x| x.scale(hbar).kron(&iw)).collect();
    let b = sigma.e.iter().map(|x| iv.kron(&x.scale(hbar))).collect();
    Ok((OperatorMatrix { n: l.n(), entries: a }, OperatorMatrix { n: l.n(), entries: b }))
}

fn normalized_state(op: &QMatrix) -> BigRational {
    op.trace() / BigRational::from_integer(BigInt::from(op.size()))
}

fn small_tr(x: &OperatorMatrix) -> QMatrix {
    x.trace().scale(&BigRational::new(BigInt::one(), BigInt::from(x.n)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BianeReport {
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

/// Compare `<p_k1 ... p_kr>` under the isotypic measure with `E[tr C^k1 ... tr C^kr]`.
pub fn biane_identity_report(l: &Signature, m: &Signature, ks: &[u32], hbar: &BigRational) -> Result<BianeReport, LrError> {
    let measure = isotypic_measure(l, m)?;
    let lhs = measure.expectation(|nu| {
        let cfg = signature_to_config(nu, hbar);
        ks.iter().map(|&k| bpp_power_sum(&cfg, k, true)).fold(BigRational::one(), |a, b| a * b)
    });
    let (a, b) = bpp_pair(l, m, hbar)?;
    let c = OperatorMatrix { n: a.n, entries: a.entries.iter().zip(&b.entries).map(|(x, y)| x + y).collect() };
    let dim = c.op_size();
    let prod = ks.iter().fold(QMatrix::identity(dim), |acc, &k| &acc * &small_tr(&c.pow(k)));
    let rhs = normalized_state(&prod);
    Ok(BianeReport {
        holds: lhs == rhs,
        lhs: crate::algebra::fmt_rational(&lhs),
        rhs: crate::algebra::fmt_rational(&rhs),
    })
}

pub fn biane_identity_check(l: &Signature, m: &Signature, ks: &[u32], hbar: &BigRational) -> Result<bool, LrError> {
    Ok(biane_identity_report(l, m, ks, hbar)?.holds)
}

/// `E tr(A^p1 B^q1 ... A^pd B^qd)` computed directly in `V (x) W`.
pub fn mixed_moment_irrep(l: &Signature, m: &Signature, p: &[u32], q: &[u32], hbar: &BigRational) -> Result<BigRational, LrError> {
    if p.len() != q.len() {
        return Err(LrError::WordMismatch(p.len(), q.len()));
    }
    let (a, b) = bpp_pair(l, m, hbar)?;
    let mut acc = OperatorMatrix::identity(a.n, a.op_size());
    for (&x, &y) in p.iter().zip(q) {
        acc = acc.mul(&a.pow(x)).mul(&b.pow(y));
    }
    Ok(normalized_state(&small_tr(&acc)))
}

/// Inverse-CDF draws in signature order.
pub fn sample(measure: &IsotypicMeasure, seed: u64, count: usize) -> Result<Vec<Signature>, LrError> {
    if measure.weights.is_empty() {
        return Err(LrError::EmptyMeasure);
    }
    let mut cdf = Vec::with_capacity(measure.weights.len());
    let mut acc = BigRational::zero();
    for (s, p) in &measure.weights {
        acc += p;
        cdf.push((rational_to_f64(&acc), s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let u: f64 = rng.gen();
            let k = cdf.iter().position(|(c, _)| u < *c).unwrap_or(cdf.len() - 1);
            cdf[k].1.clone()
        })
        .collect())
}

/// One member of a family indexed by `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LlnInput {
    pub lambda: Signature,
    pub mu: Signature,
    pub hbar: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LlnRow {
    pub n: usize,
    pub mean: BigRational,
    pub variance: BigRational,
}

/// Exact mean and variance of the normalized power sum under each measure.
pub fn lln_experiment(family: &[LlnInput], k: u32) -> Result<Vec<LlnRow>, LrError> {
    family
        .iter()
        .map(|x| {
            let measure = isotypic_measure(&x.lambda, &x.mu)?;
            let val = |nu: &Signature| bpp_power_sum(&signature_to_config(nu, &x.hbar), k, true);
            let mean = measure.expectation(val);
            let second = measure.expectation(|nu| {
                let v = val(nu);
                &v * &v
            });
            Ok(LlnRow { n: x.lambda.n(), variance: second - &mean * &mean, mean })
        })
        .collect()
}
