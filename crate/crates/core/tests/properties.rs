use std::sync::OnceLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

use powerfree_core::genfun::{
    build_transfer_system, exact_generating_function, known_degree_bound,
};
use powerfree_core::words::{extends_powerfree, find_power, powerfree_words};
use powerfree_core::{
    count_joint, count_powerfree, is_powerfree, Alphabet, EnumerationConfig, FreenessSpec,
    Morphism, Word,
};

const B2: Alphabet = Alphabet::BINARY;
const CF: FreenessSpec = FreenessSpec::CUBEFREE;
const N: usize = 32;

fn counts() -> &'static [BigUint] {
    static COUNTS: OnceLock<Vec<BigUint>> = OnceLock::new();
    COUNTS.get_or_init(|| {
        count_powerfree(CF, B2, N, &EnumerationConfig::default())
            .unwrap()
            .counts()
            .to_vec()
    })
}

fn naive_powerfree(w: &[u8], k: usize) -> bool {
    (1..=w.len() / k)
        .all(|p| (0..=w.len() - k * p).all(|i| (i..i + (k - 1) * p).any(|j| w[j] != w[j + p])))
}

/// A cubefree word steered by `bits`: each letter is the preferred one if
/// that stays cubefree, else the other one, stopping when neither is.
fn steered(bits: &[bool]) -> Vec<u8> {
    let mut w = Vec::new();
    for &b in bits {
        let a = b as u8;
        if extends_powerfree(&w, a, CF) {
            w.push(a);
        } else if extends_powerfree(&w, 1 - a, CF) {
            w.push(1 - a);
        } else {
            break;
        }
    }
    w
}

fn set9(i: usize) -> Morphism {
    const SETS: [[&str; 4]; 5] = [
        ["001001101", "001010011", "001101011", "011001011"],
        ["001101001", "100101001", "101011001", "101100101"],
        ["010010110", "011001001", "100110110", "101101001"],
        ["010010110", "011011001", "100100110", "101101001"],
        ["010011010", "011001010", "011010110", "011011001"],
    ];
    Morphism::binary(&SETS[i]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn checker_agrees_with_definition(w in prop::collection::vec(0u8..3, 0..24), k in 2usize..5) {
        let spec = FreenessSpec::new(k as u32).unwrap();
        prop_assert_eq!(is_powerfree(&w, spec), naive_powerfree(&w, k));
        prop_assert_eq!(find_power(&w, spec).is_none(), naive_powerfree(&w, k));
    }

    #[test]
    fn factors_of_cubefree_words_are_cubefree(bits in prop::collection::vec(any::<bool>(), 0..60)) {
        let w = steered(&bits);
        prop_assert!(is_powerfree(&w, CF));
        for i in 0..w.len() {
            for j in i..=w.len() {
                prop_assert!(is_powerfree(&w[i..j], CF));
            }
        }
    }

    #[test]
    fn counts_are_submultiplicative(m in 1usize..=N, n in 1usize..=N) {
        let c = counts();
        if m + n <= N {
            prop_assert!(c[m + n] <= &c[m] * &c[n]);
        }
        if m * n <= N {
            prop_assert!(c[m * n] <= c[n].pow(m as u32));
        }
    }

    #[test]
    fn counts_lie_in_the_brandenburg_sandwich(n in 2usize..=N) {
        let x = counts()[n].to_string().parse::<f64>().unwrap();
        prop_assert!(2.0 * 2f64.powf(n as f64 / 9.0) <= x);
        prop_assert!(x <= 2.0 * 1251f64.powf(n as f64 / 17.0));
    }

    #[test]
    fn length_nine_morphisms_lift_cubefree_words(
        set in 0usize..5,
        bits in prop::collection::vec(any::<bool>(), 1..7),
        lift in prop::collection::vec(any::<bool>(), 7),
    ) {
        let w = steered(&bits);
        let lifted: Vec<u8> = w.iter().zip(&lift).map(|(&a, &b)| 2 * a + b as u8).collect();
        let image = set9(set).apply_letters(&lifted);
        prop_assert_eq!(image.len(), 9 * w.len());
        prop_assert!(is_powerfree(&image, CF));
    }

    #[test]
    fn frequencies_are_eigenvectors(
        (len, a, b) in (2usize..12).prop_flat_map(|l| {
            (Just(l), prop::collection::vec(0u8..2, l), prop::collection::vec(0u8..2, l))
        }),
    ) {
        // Both letters in both images keeps the matrix positive.
        let images: Vec<Word> = [a, b]
            .into_iter()
            .map(|mut w| {
                w[0] = 0;
                w[len - 1] = 1;
                Word::new(w)
            })
            .collect();
        let m = Morphism::new(B2, B2, images).unwrap();
        let f = m.pf_frequencies().unwrap();
        prop_assert!(m.substitution_matrix().is_eigenvector(&f, len as u64));
        let total: BigRational = f.iter().sum();
        prop_assert_eq!(total, BigRational::from_integer(1.into()));
    }

    #[test]
    fn joint_counts_are_symmetric_and_sum_to_counts(n in 0usize..=20) {
        let joint = count_joint(CF, B2, n, &EnumerationConfig::default()).unwrap();
        prop_assert!(joint.is_symmetric());
        prop_assert_eq!(&joint.total(), &counts()[n]);
    }

    #[test]
    fn worker_count_does_not_change_counts(workers in 1usize..5, n in 0usize..=24) {
        let t = count_powerfree(CF, B2, n, &EnumerationConfig::with_workers(workers)).unwrap();
        prop_assert_eq!(t.counts(), &counts()[..=n]);
    }

    #[test]
    fn capped_counts_match_words_and_series(p in 0usize..=3, n in 0usize..=14) {
        let spec = FreenessSpec::with_period_cap(3, p).unwrap();
        let words = powerfree_words(B2, spec, n).len();
        let table = count_powerfree(spec, B2, n, &EnumerationConfig::default()).unwrap();
        prop_assert_eq!(table.get(n).unwrap(), &BigUint::from(words));
        let ts = build_transfer_system(3, p, B2).unwrap();
        let rf = exact_generating_function(&ts, known_degree_bound(3, p, B2).unwrap()).unwrap();
        prop_assert!(rf.matches_counts(table.counts()));
        if p >= n / 3 {
            prop_assert_eq!(table.get(n).unwrap(), &counts()[n]);
        }
    }
}

#[test]
fn ternary_squarefree_counts_match_brute_force() {
    let sf = FreenessSpec::new(2).unwrap();
    let t3 = Alphabet::new(3).unwrap();
    let table = count_powerfree(sf, t3, 12, &EnumerationConfig::default()).unwrap();
    for n in 0..=12 {
        let brute = powerfree_words(t3, sf, n).len();
        assert_eq!(table.get(n).unwrap(), &BigUint::from(brute), "n = {n}");
    }
}
