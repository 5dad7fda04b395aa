use bpp_core::algebra::rat;
use bpp_core::permutations::Permutation;
use bpp_core::weingarten::{
    class_representative, laurent_coefficients, orthogonality_holds, partitions, wg_class, wg_eval, wg_exact,
    wg_series, WgError,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

// Wg is the inverse of the Gram matrix G(a, b) = N^cyc(a^-1 b); invert it directly
fn inverse_gram(d: usize, n: i64) -> Vec<Vec<BigRational>> {
    let perms: Vec<Permutation> = Permutation::all(d).collect();
    let m = perms.len();
    let nn = BigRational::from_integer(BigInt::from(n));
    let mut a: Vec<Vec<BigRational>> = perms
        .iter()
        .map(|p| {
            let mut row: Vec<BigRational> = perms
                .iter()
                .map(|q| {
                    let c = Permutation::compose(&p.inverse(), q).unwrap().cyc();
                    num_traits::pow(nn.clone(), c)
                })
                .collect();
            row.extend((0..m).map(|_| BigRational::zero()));
            row
        })
        .collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[m + i] = BigRational::one();
    }
    for col in 0..m {
        let piv = (col..m).find(|&r| !a[r][col].is_zero()).expect("Gram matrix invertible for N >= d");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[m..].to_vec()).collect()
}

#[test]
fn matches_inverse_gram_matrix() {
    for (d, n) in [(2, 2), (2, 5), (3, 3), (3, 4), (4, 4), (4, 7)] {
        let perms: Vec<Permutation> = Permutation::all(d).collect();
        let inv = inverse_gram(d, n);
        let nn = BigRational::from_integer(BigInt::from(n));
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                assert_eq!(wg_eval(p, q, &nn).unwrap(), inv[i][j], "d={d} N={n} {p:?} {q:?}");
            }
        }
    }
}

#[test]
fn d_two_values() {
    let n = rat(3, 1);
    let id = Permutation::identity(2);
    let t = Permutation::full_cycle(2);
    // 1/(N^2-1) and -1/(N(N^2-1))
    assert_eq!(wg_eval(&id, &id, &n).unwrap(), rat(1, 8));
    assert_eq!(wg_eval(&id, &t, &n).unwrap(), rat(-1, 24));
}

#[test]
fn orthogonality_up_to_four() {
    for d in 1..=4 {
        assert!(orthogonality_holds(d).unwrap(), "d = {d}");
    }
}

#[test]
fn leading_coefficient_is_signed_catalan_product() {
    // first term of the expansion is (-1)^|s| prod Cat(l_i - 1) N^-(d+|s|)
    let catalan = [1i64, 1, 2, 5, 14];
    for d in 1..=5 {
        for class in partitions(d) {
            let rep = class_representative(&class);
            let sign = if rep.word_norm().is_multiple_of(2) { 1 } else { -1 };
            let want: i64 = sign * class.iter().map(|&l| catalan[l - 1]).product::<i64>();
            let series = wg_series(&Permutation::identity(d), &rep, 0).unwrap();
            assert_eq!(series[0], BigInt::from(want), "{class:?}");
            let f = wg_class(&class, 7).unwrap();
            let lead = laurent_coefficients(&f, [(d + rep.word_norm()) as i64]);
            assert_eq!(lead[0], BigRational::from_integer(BigInt::from(want)));
        }
    }
}

#[test]
fn class_function_of_the_quotient() {
    let a = Permutation::parse("(1 2)", Some(3)).unwrap();
    let b = Permutation::parse("(2 3)", Some(3)).unwrap();
    let s = Permutation::compose(&a.inverse(), &b).unwrap();
    assert_eq!(wg_exact(&a, &b).unwrap(), wg_class(&s.cycle_type(), 7).unwrap());
}

#[test]
fn errors() {
    let id = Permutation::identity(3);
    assert!(matches!(wg_eval(&id, &id, &rat(2, 1)), Err(WgError::SmallN { .. })));
    assert!(wg_class(&[8], 7).is_err());
}
