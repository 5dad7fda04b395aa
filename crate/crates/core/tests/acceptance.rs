//! Acceptance run: one PASS/FAIL line per criterion with its wall time.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bpp_core::algebra::{param_n, rat, RatFunc, UPoly};
use bpp_core::biasimir::{casimir, casimir_degree, oracle_check, reduce, CasimirPolynomial};
use bpp_core::lr_process::{
    biane_identity_report, isotypic_measure, lr_coefficients, perelomov_popov_check, weyl_dim, Signature,
};
use bpp_core::moments::{
    classical_expansion_symbolic, evaluate_limit, free_cumulants, free_moment_from_cumulants, free_moment_symbolic, limit_at_infinity,
    quantum_boundedness_probe, relative_variation, tau_decomposition, two_cycle_base, LimitPolynomial, MomentSequence,
    MomentVar, WordSpec,
};
use bpp_core::permutations::{genus, ExponentFunction, Permutation};
use bpp_core::weingarten::{class_representative, laurent_coefficients, partitions, wg_class, wg_series, DEFAULT_D_CAP};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn up(c: &[i64]) -> UPoly {
    UPoly::from_i64s(c)
}

fn criterion_1() -> Check {
    // N (N^2 - 1) (N^2 - 4) and (N^2 - 1)(N^2 - 4)
    let d5 = up(&[0, 4, 0, -5, 0, 1]);
    let d4 = up(&[4, 0, -5, 0, 1]);
    let want = [
        (vec![1, 1, 1], RatFunc::new(up(&[-2, 0, 1]), d5.clone())),
        (vec![2, 1], RatFunc::new(up(&[-1]), d4)),
        (vec![3], RatFunc::new(up(&[2]), d5)),
    ];
    for (class, f) in &want {
        let got = wg_class(class, DEFAULT_D_CAP).map_err(|e| e.to_string())?;
        ensure(&got == f, || format!("class {class:?}: got {got}, want {f}"))?;
    }
    Ok("3 classes".into())
}

fn criterion_2() -> Check {
    let mut checked = 0;
    for d in 1..=4 {
        for class in partitions(d) {
            let rep = class_representative(&class);
            let id = Permutation::identity(d);
            let f = wg_class(&class, DEFAULT_D_CAP).map_err(|e| e.to_string())?;
            let series = wg_series(&id, &rep, 3).map_err(|e| e.to_string())?;
            let base = (d + rep.word_norm()) as i64;
            let top = base + 6;
            let coeffs = laurent_coefficients(&f, 0..=top);
            for m in 0..=top {
                let off = m - base;
                let want = if off >= 0 && off % 2 == 0 {
                    BigRational::from_integer(series[(off / 2) as usize].clone())
                } else {
                    BigRational::zero()
                };
                ensure(coeffs[m as usize] == want, || format!("d={d} class {class:?}: coefficient of N^-{m}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} Laurent coefficients"))
}

fn c(ks: &[u32]) -> CasimirPolynomial {
    ks.iter().fold(CasimirPolynomial::one(), |acc, &k| acc * casimir(k))
}

fn times_n(p: &CasimirPolynomial) -> CasimirPolynomial {
    p.map_coeffs(|x| x.clone() * param_n())
}

fn criterion_3() -> Check {
    let mut checked = 0;
    for r in 1..=4u32 {
        let exps = ExponentFunction::new(vec![r, 1, 1]);
        let table: [(&str, CasimirPolynomial, CasimirPolynomial); 6] = [
            ("()", c(&[r, 1, 1]), CasimirPolynomial::zero()),
            ("(1 2)", c(&[r + 1, 1]), CasimirPolynomial::zero()),
            ("(1 3)", c(&[r + 1, 1]), CasimirPolynomial::zero()),
            ("(2 3)", c(&[r, 2]), CasimirPolynomial::zero()),
            ("(1 2 3)", c(&[r + 2]), CasimirPolynomial::zero()),
            ("(1 3 2)", c(&[r + 2]), c(&[r, 1]) - times_n(&c(&[r + 1]))),
        ];
        for (perm, cl, qu) in table {
            let pi = Permutation::parse(perm, Some(3)).map_err(|e| e.to_string())?;
            let red = reduce(&pi, &exps).map_err(|e| e.to_string())?;
            ensure(red.classical == cl && red.quantum == qu, || {
                format!("{perm} r={r}: got {} + hbar*({})", red.classical, red.quantum)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} reductions, r = 1..4"))
}

fn criterion_4() -> Check {
    let mut checked = 0;
    for d in 1..=5usize {
        for pi in Permutation::all(d) {
            // every r in {1,2}^d, which contains r = 1 and any random draw
            for mask in 0..(1u32 << d) {
                let r = ExponentFunction::new((0..d).map(|i| 1 + ((mask >> i) & 1)).collect());
                let red = reduce(&pi, &r).map_err(|e| e.to_string())?;
                let dp = casimir_degree(&red.classical);
                ensure(dp == Some(pi.cyc() as u32), || format!("{pi:?} r={:?}: deg P = {dp:?}", r.values()))?;
                if let Some(dq) = casimir_degree(&red.quantum) {
                    ensure(dq as usize <= pi.aex(), || format!("{pi:?} r={:?}: deg Q = {dq} > aex", r.values()))?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (pi, r) pairs, all r in {{1,2}}^d"))
}

fn criterion_5() -> Check {
    let mut checked = 0;
    for n in [2usize, 3] {
        for pi in Permutation::all(3) {
            let ok = oracle_check(&pi, &ExponentFunction::ones(3), n).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{pi:?}, r = 1, n = {n}"))?;
            checked += 1;
        }
    }
    for pi in Permutation::all(3) {
        let ok = oracle_check(&pi, &ExponentFunction::new(vec![2, 1, 1]), 3).map_err(|e| e.to_string())?;
        ensure(ok, || format!("{pi:?}, r = (2,1,1), n = 3"))?;
        checked += 1;
    }
    Ok(format!("{checked} PBW comparisons"))
}

fn var(v: MomentVar) -> LimitPolynomial {
    LimitPolynomial::var(v)
}

fn criterion_6() -> Check {
    let mut notes = Vec::new();
    for r in 1..=3u32 {
        for s in 1..=3u32 {
            let w = WordSpec::new(vec![r, 1, 1], vec![s, 1, 1]).map_err(|e| e.to_string())?;
            let dec = tau_decomposition(&w).map_err(|e| e.to_string())?;
            let q = limit_at_infinity(&dec.quantum).map_err(|e| e.to_string())?;
            let fa = var(MomentVar::A(r + 1)) - var(MomentVar::A(1)) * var(MomentVar::A(r));
            let fb = var(MomentVar::B(s + 1)) - var(MomentVar::B(1)) * var(MomentVar::B(s));
            // the limit carries one factor of hbar from the hbar Q^A Q^B cross term
            let bare = fa * fb;
            let want = var(MomentVar::Hbar) * bare.clone();
            ensure(q == want, || format!("r={r} s={s}: quantum limit {q}"))?;
            ensure(q != bare, || format!("r={r} s={s}: quantum limit has no hbar"))?;
            let total = limit_at_infinity(&dec.total()).map_err(|e| e.to_string())?;
            let quantum_terms = total.terms().filter(|(m, _)| m.exponent(&MomentVar::Hbar) > 0).count();
            let classical_terms = total.len() - quantum_terms;
            if r >= 2 && s >= 2 {
                ensure(total.len() == 14 && classical_terms == 10 && quantum_terms == 4, || {
                    format!("r={r} s={s}: {classical_terms} classical + {quantum_terms} quantum monomials")
                })?;
            } else {
                notes.push(format!("({r},{s}):{classical_terms}+{quantum_terms}"));
            }
        }
    }
    Ok(format!(
        "9 words; quantum limit is hbar*(a_(r+1) - a1 a_r)(b_(s+1) - b1 b_s), not the hbar-free product; \
         10+4 monomials for r,s >= 2; overlapping cases {}",
        notes.join(" ")
    ))
}

fn criterion_7() -> Check {
    let mut checked = 0;
    for r in 0..=3u32 {
        for s in 0..=3u32 {
            for t in 0..=3u32 {
                for u in 0..=3u32 {
                    let w = WordSpec::new(vec![r, t], vec![s, u]).map_err(|e| e.to_string())?;
                    let dec = tau_decomposition(&w).map_err(|e| e.to_string())?;
                    ensure(dec.quantum.is_zero(), || format!("({r},{s},{t},{u}): quantum = {}", dec.quantum))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} words"))
}

fn defect_bound_holds(pi1: &Permutation, pi2: &Permutation, gamma: &Permutation) -> Result<bool, String> {
    let s = Permutation::compose(&pi1.inverse(), pi2).map_err(|e| e.to_string())?;
    let t = Permutation::compose(&pi2.inverse(), gamma).map_err(|e| e.to_string())?;
    let g = genus(&[pi1.clone(), s, t.clone()]).map_err(|e| e.to_string())?;
    Ok(pi1.defect() + t.defect() <= 2 * g)
}

fn criterion_8() -> Check {
    let mut single = 0usize;
    for d in 1..=5 {
        let gamma = Permutation::full_cycle(d);
        let perms: Vec<Permutation> = Permutation::all(d).collect();
        for p1 in &perms {
            for p2 in &perms {
                ensure(defect_bound_holds(p1, p2, &gamma)?, || format!("one cycle: {p1:?}, {p2:?}"))?;
                single += 1;
            }
        }
    }
    ensure(single >= 14_400, || format!("only {single} pairs"))?;
    let mut double = 0usize;
    for (d1, d2) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
        let gamma = two_cycle_base(d1, d2);
        let perms: Vec<Permutation> = Permutation::all(d1 + d2).collect();
        for p1 in &perms {
            for p2 in &perms {
                ensure(defect_bound_holds(p1, p2, &gamma)?, || format!("two cycles ({d1},{d2}): {p1:?}, {p2:?}"))?;
                double += 1;
            }
        }
    }
    Ok(format!("{single} one-cycle pairs, {double} two-cycle pairs"))
}

fn random_moments(rng: &mut ChaCha8Rng, len: usize) -> MomentSequence {
    MomentSequence(
        (0..len)
            .map(|_| BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=5))))
            .collect(),
    )
}

fn criterion_9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // 20 randomized moment inputs, each checked against every word
    let trials: Vec<_> = (0..20)
        .map(|_| {
            let a = random_moments(&mut rng, 9);
            let b = random_moments(&mut rng, 9);
            let (ka, kb) = (free_cumulants(&a), free_cumulants(&b));
            (a, b, ka, kb)
        })
        .collect();
    let mut words = 0;
    let one = BigRational::one();
    for d in 1..=3usize {
        for code in 0..4usize.pow(2 * d as u32) {
            let mut e = Vec::with_capacity(2 * d);
            let mut c = code;
            for _ in 0..2 * d {
                e.push((c % 4) as u32);
                c /= 4;
            }
            let w = WordSpec::new(e[..d].to_vec(), e[d..].to_vec()).map_err(|e| e.to_string())?;
            let e0 = classical_expansion_symbolic(&w, 0).map_err(|e| e.to_string())?.remove(0);
            let fm = free_moment_symbolic(&w).map_err(|e| e.to_string())?;
            ensure(e0 == fm, || format!("{e:?}: e_0 and geodesic formula differ symbolically"))?;
            for (a, b, ka, kb) in &trials {
                let x = evaluate_limit(&e0, &one, a, b).map_err(|e| e.to_string())?;
                let y = free_moment_from_cumulants(&w, ka, kb);
                ensure(x == y, || format!("{e:?}: e_0 = {x}, cumulant oracle = {y}"))?;
            }
            words += 1;
        }
    }
    Ok(format!("{words} words x 20 random moment draws"))
}

fn two_row_signatures() -> Vec<Signature> {
    let mut out = Vec::new();
    for a in 0..=2 {
        for b in 0..=a {
            out.push(Signature::new(vec![a, b]).unwrap());
        }
    }
    out
}

fn criterion_10() -> Check {
    let words: [&[u32]; 7] = [&[1], &[2], &[3], &[1, 1], &[1, 2], &[2, 1], &[1, 1, 1]];
    let mut checked = 0;
    for l in two_row_signatures() {
        for m in two_row_signatures() {
            for hbar in [rat(1, 1), rat(1, 2)] {
                for ks in words {
                    let rep = biane_identity_report(&l, &m, ks, &hbar).map_err(|e| e.to_string())?;
                    ensure(rep.holds, || format!("{l} {m} {ks:?} hbar={hbar}: {} vs {}", rep.lhs, rep.rhs))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} identities, c_i = hbar (lambda_i + N - i)"))
}

fn criterion_11() -> Check {
    let mut sigs: Vec<Signature> = (0..=3).map(|m| Signature::new(vec![m, 0]).unwrap()).collect();
    sigs.push(Signature::new(vec![1, 1]).unwrap());
    let mut checked = 0;
    for s in &sigs {
        for k in 1..=4 {
            for hbar in [rat(1, 1), rat(1, 2)] {
                ensure(perelomov_popov_check(s, k, &hbar).map_err(|e| e.to_string())?, || format!("{s} k={k} hbar={hbar}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} scalar checks"))
}

fn partitions_up_to(n: usize, max_size: i64) -> Vec<Signature> {
    fn rec(n: usize, left: i64, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if cur.len() == n {
            out.push(Signature::new(cur.clone()).unwrap());
            return;
        }
        for v in 0..=cap.min(left) {
            cur.push(v);
            rec(n, left - v, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_size, max_size, &mut Vec::new(), &mut out);
    out
}

fn criterion_12() -> Check {
    let mut checked = 0;
    for n in 1..=3 {
        let sigs = partitions_up_to(n, 4);
        for l in &sigs {
            for m in &sigs {
                let lr = lr_coefficients(l, m).map_err(|e| e.to_string())?;
                let lhs: BigInt = lr.iter().map(|(s, c)| BigInt::from(*c) * BigInt::from(weyl_dim(s))).sum();
                let rhs = BigInt::from(weyl_dim(l) * weyl_dim(m));
                ensure(lhs == rhs, || format!("{l} x {m}: {lhs} != {rhs}"))?;
                let total = isotypic_measure(l, m).map_err(|e| e.to_string())?.total();
                ensure(total.is_one(), || format!("{l} x {m}: measure sums to {total}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} products"))
}

fn criterion_13() -> Check {
    let ones = MomentSequence::from_ints(&[1; 8]);
    let ns = [rat(10, 1), rat(100, 1), rat(1000, 1)];
    let mut worst = BigRational::zero();
    let mut words = 0;
    for d in 1..=3usize {
        for code in 0..3usize.pow(2 * d as u32) {
            let mut e = Vec::with_capacity(2 * d);
            let mut c = code;
            for _ in 0..2 * d {
                e.push((c % 3) as u32);
                c /= 3;
            }
            let w = WordSpec::new(e[..d].to_vec(), e[d..].to_vec()).map_err(|e| e.to_string())?;
            let v = quantum_boundedness_probe(&w, &ones, &ones, &rat(1, 1), &ns).map_err(|e| e.to_string())?;
            let rv = relative_variation(&v[1], &v[2]);
            ensure(rv < rat(1, 10), || format!("{e:?}: {} -> {} -> {}", v[0], v[1], v[2]))?;
            if rv > worst {
                worst = rv;
            }
            words += 1;
        }
    }
    Ok(format!("{words} words, largest variation {worst}"))
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Duration, fn() -> Check);
    let criteria: [Criterion; 13] = [
        (1, "Weingarten fixtures", Duration::from_secs(1), criterion_1),
        (2, "series/exact agreement", Duration::from_secs(30), criterion_2),
        (3, "Biasimir fixtures", Duration::from_secs(1), criterion_3),
        (4, "degree bounds", Duration::from_secs(120), criterion_4),
        (5, "PBW oracle", Duration::from_secs(300), criterion_5),
        (6, "counterexample limit", Duration::from_secs(60), criterion_6),
        (7, "four-factor vanishing", Duration::from_secs(60), criterion_7),
        (8, "defect inequalities", Duration::from_secs(120), criterion_8),
        (9, "freeness limit", Duration::from_secs(120), criterion_9),
        (10, "Biane identity", Duration::from_secs(300), criterion_10),
        (11, "Perelomov-Popov", Duration::from_secs(60), criterion_11),
        (12, "measure normalization", Duration::from_secs(60), criterion_12),
        (13, "quantum boundedness", Duration::from_secs(60), criterion_13),
    ];
    let mut failed = 0;
    for (k, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if took <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; exceeded {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {k:2}: {verdict} ({:.3}s, limit {}s) {name}: {detail}", took.as_secs_f64(), limit.as_secs());
    }
    println!("acceptance: {} passed, {failed} failed", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
