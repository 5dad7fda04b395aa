use bpp_core::permutations::{
    apply_path, canonical_reduction_path, contract_zeros, flatten, genus, random_reduction_path, ExponentFunction,
    Permutation,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn perm(d: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=d).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=7).prop_flat_map(|d| (perm(d), perm(d), perm(d)))
}

proptest! {
    #[test]
    fn composition_is_associative((a, b, c) in triple()) {
        let ab_c = Permutation::compose(&Permutation::compose(&a, &b).unwrap(), &c).unwrap();
        let a_bc = Permutation::compose(&a, &Permutation::compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn inverse_and_norm((a, b, _) in triple()) {
        let id = Permutation::identity(a.d());
        prop_assert_eq!(Permutation::compose(&a, &a.inverse()).unwrap(), id);
        prop_assert_eq!(a.word_norm(), a.d() - a.cyc());
        prop_assert_eq!(a.inverse().cycle_type(), a.cycle_type());
        // the Cayley distance is a metric
        let ab = Permutation::compose(&a.inverse(), &b).unwrap();
        prop_assert!(ab.word_norm() <= a.word_norm() + b.word_norm());
    }

    #[test]
    fn cycle_string_round_trips((a, _, _) in triple()) {
        let back = Permutation::parse(&a.cycle_string(), Some(a.d())).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn genus_of_factorization_is_defined((a, b, _) in triple()) {
        // a * (a^-1 b) * (b^-1 gamma) = gamma always closes up to a surface
        let gamma = Permutation::full_cycle(a.d());
        let s = Permutation::compose(&a.inverse(), &b).unwrap();
        let t = Permutation::compose(&b.inverse(), &gamma).unwrap();
        prop_assert!(genus(&[a, s, t]).is_ok());
    }

    #[test]
    fn reduction_paths_reach_canonical(a in (1usize..=6).prop_flat_map(perm), seed in any::<u64>()) {
        prop_assert!(apply_path(&a, &canonical_reduction_path(&a)).is_canonical());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(apply_path(&a, &random_reduction_path(&a, &mut rng)).is_canonical());
    }
}

#[test]
fn one_based_composition_convention() {
    let a = Permutation::new(vec![2, 3, 1]).unwrap();
    let b = Permutation::new(vec![2, 1, 3]).unwrap();
    // (a b)(1) = a(b(1)) = a(2) = 3
    assert_eq!(Permutation::compose(&a, &b).unwrap().one_line(), vec![3, 2, 1]);
    assert_eq!(a.cycles(), vec![vec![1, 2, 3]]);
}

#[test]
fn statistics_on_small_cases() {
    let p = Permutation::parse("(1 3)(2 4 5)", Some(6)).unwrap();
    assert_eq!(p.cyc(), 3);
    assert_eq!(p.word_norm(), 3);
    assert_eq!(p.cycle_type(), vec![3, 2, 1]);
    assert_eq!(Permutation::all(4).count(), 24);
    assert!(Permutation::new(vec![1, 1]).is_err());
    assert!(Permutation::compose(&Permutation::identity(2), &Permutation::identity(3)).is_err());
}

#[test]
fn genus_zero_for_planar_factorizations() {
    let gamma = Permutation::full_cycle(4);
    let id = Permutation::identity(4);
    assert_eq!(genus(&[id.clone(), id, gamma.clone()]).unwrap(), 0);
    // (1 3)(2 4) against the 4-cycle is the crossing pairing
    let cross = Permutation::parse("(1 3)(2 4)", Some(4)).unwrap();
    let rest = Permutation::compose(&cross.inverse(), &gamma).unwrap();
    assert_eq!(genus(&[cross, rest]).unwrap(), 1);
}

#[test]
fn flatten_and_contract() {
    let pi = Permutation::parse("(1 2)", Some(3)).unwrap();
    let flat = flatten(&pi, &ExponentFunction::new(vec![2, 1, 1])).unwrap();
    assert_eq!(flat.d(), 4);
    assert_eq!(flatten(&pi, &ExponentFunction::ones(3)).unwrap(), pi);
    let c = contract_zeros(&Permutation::identity(3), &ExponentFunction::new(vec![0, 1, 0])).unwrap();
    assert_eq!(c.zero_cycles, 2);
    assert_eq!(c.perm.d(), 1);
}
