//! The unitary Weingarten function as an exact rational function of `N`,
//! and its expansion in monotone walk counts.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{RatFunc, UPoly};
use crate::monotone_walks::{WalkCounter, WalkError, DEFAULT_STEP_CAP};
use crate::permutations::{PermError, Permutation};

pub const DEFAULT_D_CAP: usize = 7;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WgError {
    #[error("d = {d} exceeds the cap of {cap}")]
    DCap { d: usize, cap: usize },
    #[error("{0:?} is not a partition of {1}")]
    BadClass(Vec<usize>, usize),
    #[error("numeric N = {n} is below d = {d}; the Weingarten function is not defined there")]
    SmallN { n: String, d: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// Partitions of `d` in reverse lexicographic order, starting with `(d)`.
pub fn partitions(d: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=left.min(max)).rev() {
            cur.push(k);
            rec(left - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// A permutation of the given cycle type whose cycles are consecutive blocks.
pub fn class_representative(cycle_type: &[usize]) -> Permutation {
    let d: usize = cycle_type.iter().sum();
    let mut v = vec![0; d];
    let mut s = 0;
    for &k in cycle_type {
        for i in 0..k {
            v[s + i] = s + (i + 1) % k;
        }
        s += k;
    }
    Permutation::from_zero_based(v)
}

/// Weingarten values for every conjugacy class of `S_d`.
#[derive(Debug)]
pub struct WeingartenTable {
    d: usize,
    classes: Vec<Vec<usize>>,
    values: Vec<RatFunc>,
}

impl WeingartenTable {
    /// Solve `sum_x N^cyc(x) Wg(x^-1 g) = delta(g)` in the class algebra of `S_d`.
    pub fn build(d: usize) -> Self {
        let classes = partitions(d);
        let index: HashMap<Vec<usize>, usize> =
            classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let p = classes.len();
        let perms: Vec<Permutation> = Permutation::all(d).collect();
        let mut m = vec![vec![vec![BigInt::zero(); d + 1]; p]; p];
        for (row, mu) in classes.iter().enumerate() {
            let g = class_representative(mu);
            for x in &perms {
                let y = Permutation::compose(&x.inverse(), &g).unwrap();
                m[row][index[&y.cycle_type()]][x.cyc()] += 1;
            }
        }
        let mat: Vec<Vec<RatFunc>> = m
            .into_iter()
            .map(|r| r.into_iter().map(|c| RatFunc::from_poly(UPoly::new(c))).collect())
            .collect();
        let mut rhs = vec![RatFunc::zero(); p];
        rhs[index[&vec![1; d]]] = RatFunc::one();
        let values = solve(mat, rhs);
        WeingartenTable { d, classes, values }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn value(&self, cycle_type: &[usize]) -> Option<&RatFunc> {
        self.classes.iter().position(|c| c == cycle_type).map(|i| &self.values[i])
    }
}

// Gaussian elimination over Q(N); the matrix is invertible as a matrix over Q(N).
fn solve(mut a: Vec<Vec<RatFunc>>, mut b: Vec<RatFunc>) -> Vec<RatFunc> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular Gram system");
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].inv();
        for x in &mut a[col][col..] {
            *x = &*x * &inv;
        }
        b[col] = &b[col] * &inv;
        let pivot = a[col][col..].to_vec();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for (x, p) in a[r][col..].iter_mut().zip(&pivot) {
                *x = &*x - &(&f * p);
            }
            let t = &f * &b[col];
            b[r] = &b[r] - &t;
        }
    }
    b
}

fn cache() -> &'static Mutex<HashMap<usize, Arc<WeingartenTable>>> {
    static C: OnceLock<Mutex<HashMap<usize, Arc<WeingartenTable>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The per-`d` class table, built once and then shared read-only.
pub fn table(d: usize, cap: usize) -> Result<Arc<WeingartenTable>, WgError> {
    if d > cap {
        return Err(WgError::DCap { d, cap });
    }
    let mut guard = cache().lock().unwrap();
    if let Some(t) = guard.get(&d) {
        return Ok(t.clone());
    }
    let t = Arc::new(WeingartenTable::build(d));
    guard.insert(d, t.clone());
    Ok(t)
}

/// `Wg_N` on a conjugacy class given by its cycle type.
pub fn wg_class(cycle_type: &[usize], cap: usize) -> Result<RatFunc, WgError> {
    let mut ct = cycle_type.to_vec();
    ct.sort_unstable_by(|a, b| b.cmp(a));
    let d: usize = ct.iter().sum();
    if ct.contains(&0) || d == 0 {
        return Err(WgError::BadClass(cycle_type.to_vec(), d));
    }
    Ok(table(d, cap)?.value(&ct).expect("partition present").clone())
}

/// `Wg_N(pi1, pi2)` with the default cap.
pub fn wg_exact(pi1: &Permutation, pi2: &Permutation) -> Result<RatFunc, WgError> {
    wg_exact_capped(pi1, pi2, DEFAULT_D_CAP)
}

pub fn wg_exact_capped(pi1: &Permutation, pi2: &Permutation, cap: usize) -> Result<RatFunc, WgError> {
    let s = Permutation::compose(&pi1.inverse(), pi2)?;
    wg_class(&s.cycle_type(), cap)
}

/// Evaluate at an integer or rational `N >= d`.
pub fn wg_eval(pi1: &Permutation, pi2: &Permutation, n: &BigRational) -> Result<BigRational, WgError> {
    let d = pi1.d();
    if *n < BigRational::from_integer(BigInt::from(d)) {
        return Err(WgError::SmallN { n: n.to_string(), d });
    }
    Ok(wg_exact(pi1, pi2)?.eval(n).expect("no poles at N >= d"))
}

/// Coefficients of `N^-(d + |s| + 2g)`, `g = 0..=order`, namely `(-1)^|s| W_g`.
pub fn wg_series(pi1: &Permutation, pi2: &Permutation, order: usize) -> Result<Vec<BigInt>, WgError> {
    wg_series_with(&WalkCounter::new(DEFAULT_STEP_CAP), pi1, pi2, order)
}

pub fn wg_series_with(
    counter: &WalkCounter,
    pi1: &Permutation,
    pi2: &Permutation,
    order: usize,
) -> Result<Vec<BigInt>, WgError> {
    let s = Permutation::compose(&pi1.inverse(), pi2)?;
    let sign = if s.word_norm() % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    (0..=order)
        .map(|g| Ok(&sign * BigInt::from(counter.count_genus(pi1, pi2, g)?)))
        .collect()
}

/// Coefficient of `N^-m` in the expansion of `f` at infinity, for each `m` in `powers`.
pub fn laurent_coefficients(f: &RatFunc, powers: impl IntoIterator<Item = i64>) -> Vec<BigRational> {
    let powers: Vec<i64> = powers.into_iter().collect();
    let (top, c) = match powers.iter().max() {
        Some(&m) => f.laurent_at_infinity((m + 64).max(0) as usize),
        None => return Vec::new(),
    };
    powers
        .iter()
        .map(|&m| {
            let k = top + m;
            if k < 0 {
                BigRational::zero()
            } else {
                c.get(k as usize).cloned().unwrap_or_else(BigRational::zero)
            }
        })
        .collect()
}

/// Check `sum_s G(p, s) Wg(s, r) = delta(p, r)` entry by entry over all of `S_d`.
pub fn orthogonality_holds(d: usize) -> Result<bool, WgError> {
    let perms: Vec<Permutation> = Permutation::all(d).collect();
    let wg: Vec<Vec<RatFunc>> = perms
        .iter()
        .map(|a| perms.iter().map(|b| wg_exact(a, b)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    for (i, a) in perms.iter().enumerate() {
        for (k, _) in perms.iter().enumerate() {
            let mut acc = RatFunc::zero();
            for (j, b) in perms.iter().enumerate() {
                let c = Permutation::compose(&a.inverse(), b)?.cyc() as i64;
                acc = &acc + &(&RatFunc::n_pow(c) * &wg[j][k]);
            }
            let want = if i == k { RatFunc::one() } else { RatFunc::zero() };
            if acc != want {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> UPoly {
        UPoly::from_i64s(cs)
    }

    fn d3_denominator() -> UPoly {
        // (N^2-1)(N^2-4)
        &p(&[-1, 0, 1]) * &p(&[-4, 0, 1])
    }

    #[test]
    fn three_point_fixtures() {
        let den = d3_denominator();
        assert_eq!(
            wg_class(&[1, 1, 1], 7).unwrap(),
            RatFunc::new(p(&[-2, 0, 1]), &den * &p(&[0, 1]))
        );
        assert_eq!(wg_class(&[2, 1], 7).unwrap(), RatFunc::new(p(&[-1]), den.clone()));
        assert_eq!(wg_class(&[3], 7).unwrap(), RatFunc::new(p(&[2]), &den * &p(&[0, 1])));
    }

    #[test]
    fn small_degrees() {
        assert_eq!(wg_class(&[1], 7).unwrap(), RatFunc::new(p(&[1]), p(&[0, 1])));
        assert_eq!(wg_class(&[1, 1], 7).unwrap(), RatFunc::new(p(&[1]), p(&[-1, 0, 1])));
        assert_eq!(wg_class(&[2], 7).unwrap(), RatFunc::new(p(&[-1]), p(&[0, -1, 0, 1])));
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(wg_class(&[3], 2), Err(WgError::DCap { .. })));
        let id = Permutation::identity(3);
        assert!(wg_eval(&id, &id, &BigRational::from_integer(2.into())).is_err());
    }

    #[test]
    fn orthogonality_small_d() {
        for d in 1..=3 {
            assert!(orthogonality_holds(d).unwrap());
        }
    }

    #[test]
    fn conjugacy_invariance() {
        let d = 4;
        for a in Permutation::all(d).step_by(7) {
            for b in Permutation::all(d) {
                let s = Permutation::compose(&a.inverse(), &b).unwrap();
                let c = class_representative(&s.cycle_type());
                assert_eq!(wg_exact(&a, &b).unwrap(), wg_exact(&Permutation::identity(d), &c).unwrap());
            }
        }
    }

    #[test]
    fn series_small_cases() {
        let id1 = Permutation::identity(1);
        assert_eq!(wg_series(&id1, &id1, 3).unwrap(), vec![1.into(), 0.into(), 0.into(), 0.into()]);
        let id2 = Permutation::identity(2);
        assert_eq!(wg_series(&id2, &id2, 3).unwrap(), vec![BigInt::one(); 4]);
    }

    #[test]
    fn series_matches_exact_d3() {
        for mu in partitions(3) {
            let s = class_representative(&mu);
            let id = Permutation::identity(3);
            let ser = wg_series(&id, &s, 3).unwrap();
            let base = (3 + s.word_norm()) as i64;
            let exact = laurent_coefficients(&wg_exact(&id, &s).unwrap(), (0..=3).map(|g| base + 2 * g));
            let ser: Vec<BigRational> = ser.into_iter().map(BigRational::from_integer).collect();
            assert_eq!(ser, exact, "class {mu:?}");
        }
    }
}
