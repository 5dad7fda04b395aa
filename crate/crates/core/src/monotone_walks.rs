//! Monotone walks on the transposition Cayley graph of `S_d`.
//!
//! A step multiplies on the right by `(s t)` with `s < t`; its label is `t`.
//! A walk is monotone when its labels weakly increase.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::permutations::{PermError, Permutation};

pub type WalkCount = BigUint;

pub const DEFAULT_STEP_CAP: usize = 20;
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("{steps} steps exceeds the cap of {cap}")]
    StepCap { steps: usize, cap: usize },
    #[error("more than {0} walks")]
    EnumerationCap(usize),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A transposition `(s t)`, 1-based with `s < t`.
pub type Transposition = (usize, usize);

type Key = (Vec<u8>, u8, u16);

/// Memoized walk counter; safe to share between threads.
pub struct WalkCounter {
    cap: usize,
    memo: Mutex<HashMap<Key, BigUint>>,
}

impl WalkCounter {
    pub fn new(cap: usize) -> Self {
        WalkCounter { cap, memo: Mutex::new(HashMap::new()) }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Number of `steps`-step monotone walks from `pi1` to `pi2`.
    pub fn count(&self, pi1: &Permutation, pi2: &Permutation, steps: usize) -> Result<WalkCount, WalkError> {
        if steps > self.cap {
            return Err(WalkError::StepCap { steps, cap: self.cap });
        }
        let sigma = Permutation::compose(&pi1.inverse(), pi2)?;
        let s: Vec<u8> = sigma.images().iter().map(|&x| x as u8).collect();
        Ok(self.rec(&s, 1, steps))
    }

    /// `W_g(pi1, pi2)`: walks of length `|pi1^-1 pi2| + 2g`.
    pub fn count_genus(&self, pi1: &Permutation, pi2: &Permutation, g: usize) -> Result<WalkCount, WalkError> {
        let sigma = Permutation::compose(&pi1.inverse(), pi2)?;
        self.count(pi1, pi2, sigma.word_norm() + 2 * g)
    }

    // walks tau_1 ... tau_k = sigma with every label >= t (0-based labels)
    fn rec(&self, sigma: &[u8], t: usize, k: usize) -> BigUint {
        let d = sigma.len();
        let norm = word_norm_u8(sigma);
        if norm > k || (k - norm) % 2 == 1 {
            return BigUint::zero();
        }
        if k == 0 {
            return BigUint::one();
        }
        let key = (sigma.to_vec(), t as u8, k as u16);
        if let Some(v) = self.memo.lock().unwrap().get(&key) {
            return v.clone();
        }
        let mut total = BigUint::zero();
        let mut next = sigma.to_vec();
        for tp in t..d {
            for s in 0..tp {
                swap_values(&mut next, s as u8, tp as u8);
                total += self.rec(&next, tp, k - 1);
                swap_values(&mut next, s as u8, tp as u8);
            }
        }
        self.memo.lock().unwrap().insert(key, total.clone());
        total
    }
}

fn swap_values(v: &mut [u8], a: u8, b: u8) {
    for x in v.iter_mut() {
        if *x == a {
            *x = b;
        } else if *x == b {
            *x = a;
        }
    }
}

fn word_norm_u8(s: &[u8]) -> usize {
    let mut seen = vec![false; s.len()];
    let mut cyc = 0;
    for i in 0..s.len() {
        if !seen[i] {
            cyc += 1;
            let mut x = i;
            while !seen[x] {
                seen[x] = true;
                x = s[x] as usize;
            }
        }
    }
    s.len() - cyc
}

fn shared() -> &'static WalkCounter {
    static C: OnceLock<WalkCounter> = OnceLock::new();
    C.get_or_init(|| WalkCounter::new(DEFAULT_STEP_CAP))
}

/// Count with the process-wide memo and the default step cap.
pub fn count_monotone_walks(pi1: &Permutation, pi2: &Permutation, steps: usize) -> Result<WalkCount, WalkError> {
    shared().count(pi1, pi2, steps)
}

pub fn count_monotone_genus(pi1: &Permutation, pi2: &Permutation, g: usize) -> Result<WalkCount, WalkError> {
    shared().count_genus(pi1, pi2, g)
}

/// All monotone walks of the given length by plain depth-first search.
pub fn enumerate_monotone_walks(
    pi1: &Permutation,
    pi2: &Permutation,
    steps: usize,
    cap: usize,
) -> Result<Vec<Vec<Transposition>>, WalkError> {
    if pi1.d() != pi2.d() {
        return Err(PermError::SizeMismatch(pi1.d(), pi2.d()).into());
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    dfs(pi1.images().to_vec(), pi2.images(), 1, steps, false, cap, &mut cur, &mut out)?;
    Ok(out)
}

/// All minimal-length monotone walks from `pi1` to `pi2`.
pub fn enumerate_monotone_geodesics(
    pi1: &Permutation,
    pi2: &Permutation,
    cap: usize,
) -> Result<Vec<Vec<Transposition>>, WalkError> {
    let sigma = Permutation::compose(&pi1.inverse(), pi2)?;
    let mut out = Vec::new();
    let mut cur = Vec::new();
    dfs(pi1.images().to_vec(), pi2.images(), 1, sigma.word_norm(), true, cap, &mut cur, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    at: Vec<usize>,
    target: &[usize],
    t: usize,
    left: usize,
    geodesic: bool,
    cap: usize,
    cur: &mut Vec<Transposition>,
    out: &mut Vec<Vec<Transposition>>,
) -> Result<(), WalkError> {
    if left == 0 {
        if at == target {
            if out.len() >= cap {
                return Err(WalkError::EnumerationCap(cap));
            }
            out.push(cur.clone());
        }
        return Ok(());
    }
    let d = at.len();
    for tp in t..d {
        for s in 0..tp {
            // right multiplication by (s tp) swaps the entries at positions s, tp
            let mut next = at.clone();
            next.swap(s, tp);
            if geodesic {
                let rest = Permutation::compose(
                    &Permutation::from_zero_based(next.clone()).inverse(),
                    &Permutation::from_zero_based(target.to_vec()),
                )?;
                if rest.word_norm() + 1 != left {
                    continue;
                }
            }
            cur.push((s + 1, tp + 1));
            dfs(next, target, tp, left - 1, geodesic, cap, cur, out)?;
            cur.pop();
        }
    }
    Ok(())
}
