//! Symmetric-group arithmetic in one-line notation (1-based at the API boundary).

use std::fmt;
use std::hash::{Hash, Hasher};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation of [1..{0}]: {1:?}")]
    NotBijection(usize, Vec<usize>),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("cannot parse permutation {0:?}")]
    Parse(String),
    #[error("zero exponent at position {0}")]
    ZeroExponent(usize),
    #[error("exponent function has length {0}, expected {1}")]
    ExponentLength(usize, usize),
    #[error("genus is not an integer (sum of norms {0}, product norm {1})")]
    NonIntegerGenus(usize, usize),
    #[error("empty permutation tuple")]
    EmptyTuple,
}

/// Permutation of `[d]` with cached cycle statistics. Immutable once built.
#[derive(Clone)]
pub struct Permutation {
    images: Vec<usize>,
    cycles: Vec<Vec<usize>>,
    aex: usize,
}

impl PartialEq for Permutation {
    fn eq(&self, o: &Self) -> bool {
        self.images == o.images
    }
}
impl Eq for Permutation {}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.images.hash(h)
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Permutation {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.images.len().cmp(&o.images.len()).then_with(|| self.images.cmp(&o.images))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.one_line().iter().join(","))
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.one_line().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::new(v).map_err(serde::de::Error::custom)
    }
}

impl Permutation {
    /// Build from 1-based one-line notation.
    pub fn new(one_line: Vec<usize>) -> Result<Self, PermError> {
        let d = one_line.len();
        let mut seen = vec![false; d];
        for &x in &one_line {
            if x == 0 || x > d || seen[x - 1] {
                return Err(PermError::NotBijection(d, one_line));
            }
            seen[x - 1] = true;
        }
        Ok(Self::from_zero_based(one_line.into_iter().map(|x| x - 1).collect()))
    }

    /// Build from 0-based images; the caller guarantees bijectivity.
    pub fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &x)| i == x)
        });
        let d = images.len();
        let mut seen = vec![false; d];
        let mut cycles = Vec::new();
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = images[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = images[x];
            }
            cycles.push(c);
        }
        let aex = images.iter().enumerate().filter(|&(i, &x)| x <= i).count();
        Permutation { images, cycles, aex }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_zero_based((0..d).collect())
    }

    /// The full forward cycle `(1 2 ... d)`.
    pub fn full_cycle(d: usize) -> Self {
        Self::from_zero_based((0..d).map(|i| (i + 1) % d.max(1)).collect())
    }

    /// The transposition `(a b)` in `S_d`, 1-based.
    pub fn transposition(d: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..d).collect();
        v.swap(a - 1, b - 1);
        Self::from_zero_based(v)
    }

    /// Build from 1-based cycles on `[d]`.
    pub fn from_cycles(d: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut v: Vec<usize> = (1..=d).collect();
        let mut seen = vec![false; d];
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                if x == 0 || x > d || seen[x - 1] {
                    return Err(PermError::Parse(format!("{cycles:?}")));
                }
                seen[x - 1] = true;
                v[x - 1] = c[(k + 1) % c.len()];
            }
        }
        Self::new(v)
    }

    /// Parse `[2,3,1]`, `2,3,1`, cycle notation `(1 2 3)(4 5)` or `id`.
    ///
    /// Cycle notation needs a size: `d` if given, else the largest point mentioned.
    pub fn parse(s: &str, d: Option<usize>) -> Result<Self, PermError> {
        let t = s.trim();
        let err = || PermError::Parse(s.to_string());
        if t == "id" {
            return d.map(Self::identity).ok_or_else(err);
        }
        if t.starts_with('(') || t.is_empty() && d.is_some() {
            let mut cycles = Vec::new();
            for chunk in t.split(')') {
                let chunk = chunk.trim();
                if chunk.is_empty() {
                    continue;
                }
                let body = chunk.strip_prefix('(').ok_or_else(err)?;
                let c: Vec<usize> = body
                    .split(|ch: char| ch == ',' || ch.is_whitespace())
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse().map_err(|_| err()))
                    .collect::<Result<_, _>>()?;
                cycles.push(c);
            }
            let max = cycles.iter().flatten().copied().max().unwrap_or(0);
            let d = d.unwrap_or(max);
            if max > d {
                return Err(err());
            }
            return Self::from_cycles(d, &cycles);
        }
        let body = t.trim_start_matches('[').trim_end_matches(']');
        let v: Vec<usize> = body
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|x| !x.is_empty())
            .map(|x| x.parse().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        if let Some(d) = d {
            if v.len() != d {
                return Err(PermError::SizeMismatch(v.len(), d));
            }
        }
        Self::new(v)
    }

    /// All of `S_d` in lexicographic order of one-line notation.
    pub fn all(d: usize) -> impl Iterator<Item = Permutation> {
        (0..d).permutations(d).map(Permutation::from_zero_based)
    }

    pub fn d(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// 0-based images.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Permutation {
        let mut v = vec![0; self.d()];
        for (i, &x) in self.images.iter().enumerate() {
            v[x] = i;
        }
        Self::from_zero_based(v)
    }

    /// `compose(a, b)(i) = a(b(i))`.
    pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation, PermError> {
        if a.d() != b.d() {
            return Err(PermError::SizeMismatch(a.d(), b.d()));
        }
        Ok(Self::from_zero_based(b.images.iter().map(|&x| a.images[x]).collect()))
    }

    /// 0-based cycles, each starting at its minimum, ordered by minimum.
    pub fn cycles0(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    /// 1-based cycles, each starting at its minimum, ordered by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .map(|c| c.iter().map(|x| x + 1).collect())
            .collect()
    }

    pub fn cyc(&self) -> usize {
        self.cycles.len()
    }

    pub fn word_norm(&self) -> usize {
        self.d() - self.cyc()
    }

    pub fn aex(&self) -> usize {
        self.aex
    }

    pub fn defect(&self) -> usize {
        let (a, c) = (self.aex, self.cyc());
        assert!(a >= c, "negative defect for {self:?}");
        a - c
    }

    /// Cycle type as a weakly decreasing partition of `d`.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles.iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn cycle_string(&self) -> String {
        let nontrivial: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if nontrivial.is_empty() {
            return "id".into();
        }
        nontrivial
            .iter()
            .map(|c| format!("({})", c.iter().join(" ")))
            .collect()
    }

    /// Canonical permutations are products of forward cycles on consecutive blocks.
    pub fn is_canonical(&self) -> bool {
        let mut start = 0;
        for (i, &x) in self.images.iter().enumerate() {
            if x == i + 1 {
                continue;
            }
            if x != start {
                return false;
            }
            start = i + 1;
        }
        true
    }

    /// Conjugation `t pi t` by the Coxeter transposition `t = (j j+1)`, `j` 0-based.
    pub fn conjugate_adjacent(&self, j: usize) -> Permutation {
        let t = |x: usize| {
            if x == j {
                j + 1
            } else if x == j + 1 {
                j
            } else {
                x
            }
        };
        let mut v = vec![0; self.d()];
        for (i, &x) in self.images.iter().enumerate() {
            v[t(i)] = t(x);
        }
        Self::from_zero_based(v)
    }

    /// Conjugation by `(j j+1)` (0-based `j`) is nice iff `pi(j) != j+1`.
    pub fn is_nice(&self, j: usize) -> bool {
        self.images[j] != j + 1
    }
}

/// The exponent function `r: [d] -> N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExponentFunction {
    values: Vec<u32>,
}

impl ExponentFunction {
    pub fn new(values: Vec<u32>) -> Self {
        ExponentFunction { values }
    }

    pub fn ones(d: usize) -> Self {
        Self::new(vec![1; d])
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn d(&self) -> usize {
        self.values.len()
    }

    pub fn total(&self) -> u32 {
        self.values.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn has_zero(&self) -> bool {
        self.values.contains(&0)
    }
}

/// `(sum |pi_i| - |pi_1 ... pi_k|) / 2`; errors if the parity fails.
pub fn genus(perms: &[Permutation]) -> Result<usize, PermError> {
    let first = perms.first().ok_or(PermError::EmptyTuple)?;
    let mut prod = Permutation::identity(first.d());
    let mut total = 0;
    for p in perms {
        prod = Permutation::compose(&prod, p)?;
        total += p.word_norm();
    }
    let pn = prod.word_norm();
    if total < pn || !(total - pn).is_multiple_of(2) {
        return Err(PermError::NonIntegerGenus(total, pn));
    }
    Ok((total - pn) / 2)
}

/// Replace each point `i` by `r(i)` consecutive copies; the last copy of `i`
/// maps to the first copy of `pi(i)`, other copies map to their right neighbour.
pub fn flatten(pi: &Permutation, r: &ExponentFunction) -> Result<Permutation, PermError> {
    if r.d() != pi.d() {
        return Err(PermError::ExponentLength(r.d(), pi.d()));
    }
    if let Some(pos) = r.values().iter().position(|&x| x == 0) {
        return Err(PermError::ZeroExponent(pos + 1));
    }
    let mut offset = Vec::with_capacity(pi.d());
    let mut acc = 0usize;
    for &x in r.values() {
        offset.push(acc);
        acc += x as usize;
    }
    let mut v = vec![0; acc];
    for i in 0..pi.d() {
        let n = r.values()[i] as usize;
        for c in 0..n {
            let label = offset[i] + c;
            v[label] = if c + 1 < n { label + 1 } else { offset[pi.images()[i]] };
        }
    }
    Ok(Permutation::from_zero_based(v))
}

/// Result of eliminating zero exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contracted {
    pub perm: Permutation,
    pub exponents: ExponentFunction,
    /// Number of cycles made only of zero-exponent points; each contributes a factor `N`.
    pub zero_cycles: usize,
}

/// Contract `pi` across the points where `r = 0`, relabelling the rest order-preservingly.
pub fn contract_zeros(pi: &Permutation, r: &ExponentFunction) -> Result<Contracted, PermError> {
    if r.d() != pi.d() {
        return Err(PermError::ExponentLength(r.d(), pi.d()));
    }
    let keep: Vec<usize> = (0..pi.d()).filter(|&i| r.values()[i] > 0).collect();
    let mut index = vec![usize::MAX; pi.d()];
    for (k, &i) in keep.iter().enumerate() {
        index[i] = k;
    }
    let images = keep
        .iter()
        .map(|&i| {
            let mut x = pi.images()[i];
            while index[x] == usize::MAX {
                x = pi.images()[x];
            }
            index[x]
        })
        .collect();
    let zero_cycles = pi
        .cycles0()
        .iter()
        .filter(|c| c.iter().all(|&x| r.values()[x] == 0))
        .count();
    Ok(Contracted {
        perm: Permutation::from_zero_based(images),
        exponents: ExponentFunction::new(keep.iter().map(|&i| r.values()[i]).collect()),
        zero_cycles,
    })
}

/// Coxeter moves `(j j+1)` (1-based `j`) taking `pi` to a canonical permutation,
/// each conjugation nice: first sort the cycles into consecutive blocks, then
/// straighten every block by increasing its spoil statistic.
pub fn canonical_reduction_path(pi: &Permutation) -> Vec<usize> {
    reduction_path_with(pi, None::<&mut rand::rngs::ThreadRng>)
}

/// Like [`canonical_reduction_path`] but with a random block order and random
/// choice among the available sorting swaps.
pub fn random_reduction_path<R: Rng>(pi: &Permutation, rng: &mut R) -> Vec<usize> {
    reduction_path_with(pi, Some(rng))
}

fn reduction_path_with<R: Rng>(pi: &Permutation, mut rng: Option<&mut R>) -> Vec<usize> {
    let d = pi.d();
    let mut cur = pi.clone();
    let mut path = Vec::new();
    let ncyc = pi.cyc();
    let mut rank: Vec<usize> = (0..ncyc).collect();
    if let Some(r) = rng.as_deref_mut() {
        rank.shuffle(r);
    }
    let mut label = vec![0; d];
    for (id, c) in pi.cycles0().iter().enumerate() {
        for &x in c {
            label[x] = rank[id];
        }
    }
    let step = |cur: &mut Permutation, j: usize, path: &mut Vec<usize>| {
        assert!(cur.is_nice(j), "non-nice move ({} {}) on {cur:?}", j + 1, j + 2);
        *cur = cur.conjugate_adjacent(j);
        path.push(j + 1);
    };
    loop {
        let inversions: Vec<usize> = (0..d.saturating_sub(1))
            .filter(|&j| label[j] > label[j + 1])
            .collect();
        let Some(&j) = (match rng.as_deref_mut() {
            Some(r) => inversions.choose(r),
            None => inversions.first(),
        }) else {
            break;
        };
        step(&mut cur, j, &mut path);
        label.swap(j, j + 1);
    }
    let mut blocks = Vec::new();
    let mut s = 0;
    for j in 1..=d {
        if j == d || label[j] != label[s] {
            blocks.push((s, j));
            s = j;
        }
    }
    if let Some(r) = rng {
        blocks.shuffle(r);
    }
    for (a, b) in blocks {
        while let Some(m) = (a..b - 1).find(|&i| cur.images()[i] != i + 1) {
            let v = cur.images()[m];
            if v == a {
                break;
            }
            for j in (m + 1..v).rev() {
                step(&mut cur, j, &mut path);
            }
        }
    }
    debug_assert!(cur.is_canonical(), "reduction ended at {cur:?}");
    path
}

/// Apply a path of Coxeter moves (1-based `j`) by successive conjugation.
pub fn apply_path(pi: &Permutation, path: &[usize]) -> Permutation {
    path.iter().fold(pi.clone(), |p, &j| p.conjugate_adjacent(j - 1))
}
