//! Invariants checked against independent oracles: brute-force enumeration
//! over F_2 and closed-form counts.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;

use nframes::chain::{factorize, ChainComplex, Degree, HomologyView};
use nframes::dsub::DCat;
use nframes::exec::Exec;
use nframes::fincat::{localize_bounded, validate_category, FinCategory, MorphismClass};
use nframes::gen::{random_complex, random_map, reedy_cofibrant_within, rng, ComplexShape};
use nframes::io::{parse_json, to_json, ComplexFile, DiagramFile};
use nframes::linalg::Matrix;
use nframes::reedy::reedy_colimit;
use nframes::sset::nerve;
use nframes::suites::mutate_composition;

fn shape() -> impl Strategy<Value = ComplexShape> {
    (-2i32..2, 0i32..3, 0usize..4).prop_map(|(lo, span, max_dim)| ComplexShape { lo, hi: lo + span, max_dim })
}

/// All images `M v` for `v` in `F_2^cols`.
fn image_f2(m: &Matrix) -> BTreeSet<Vec<u32>> {
    (0..1u32 << m.cols())
        .map(|bits| {
            (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c) * ((bits >> c) & 1)).sum::<u32>() % 2).collect()
        })
        .collect()
}

fn kernel_size_f2(m: &Matrix) -> usize {
    (0..1u32 << m.cols())
        .filter(|bits| {
            (0..m.rows()).all(|r| (0..m.cols()).map(|c| m.get(r, c) * ((bits >> c) & 1)).sum::<u32>() % 2 == 0)
        })
        .count()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn homology_matches_enumeration_over_f2(seed in any::<u64>(), s in shape()) {
        let x = random_complex(&mut rng(seed), 2, s);
        let h = HomologyView::new(&x);
        for n in s.lo - 1..=s.hi + 1 {
            let cycles = kernel_size_f2(&x.d(n));
            let boundaries = image_f2(&x.d(n + 1)).len();
            prop_assert_eq!(cycles % boundaries, 0);
            let expected = (cycles / boundaries).trailing_zeros() as usize;
            prop_assert_eq!(h.dim(n), expected, "degree {}", n);
        }
    }

    #[test]
    fn complex_files_round_trip(seed in any::<u64>(), s in shape(), p in prop::sample::select(vec![2u32, 3, 5, 251])) {
        let x = random_complex(&mut rng(seed), p, s);
        let text = to_json(&ComplexFile::from_complex(&x));
        let back = parse_json::<ComplexFile>(&text).unwrap().to_complex().unwrap();
        prop_assert_eq!(to_json(&ComplexFile::from_complex(&back)), text);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn factorization_composes_exactly(seed in any::<u64>(), s in shape(), p in prop::sample::select(vec![2u32, 3, 7])) {
        let f = random_map(&mut rng(seed), p, s);
        let fac = factorize(&f);
        prop_assert!(fac.cofibration.is_cofibration());
        prop_assert!(fac.weq.is_quasi_isomorphism());
        prop_assert_eq!(fac.weq.after(&fac.cofibration), f);
    }

    #[test]
    fn colimit_over_a_chain_is_the_last_value(seed in any::<u64>(), n in 0usize..3) {
        let c = Arc::new(FinCategory::chain(n));
        let x = reedy_cofibrant_within(&mut rng(seed), &c, 2, 10);
        let colim = reedy_colimit(&x).unwrap();
        prop_assert_eq!(colim.object.dims(), x.objects[n].dims());
        prop_assert!(colim.cocone[n].is_isomorphism());
    }

    #[test]
    fn diagram_files_round_trip(seed in any::<u64>(), n in 0usize..3) {
        let c = Arc::new(FinCategory::chain(n));
        let x = reedy_cofibrant_within(&mut rng(seed), &c, 3, 10);
        let text = to_json(&DiagramFile::from_diagram(&x));
        let back = parse_json::<DiagramFile>(&text).unwrap().to_diagram(None).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn corrupted_tables_are_rejected(seed in any::<u64>(), n in 2usize..5) {
        let c = FinCategory::chain(n);
        let (bad, _) = mutate_composition(&c, &mut rng(seed)).unwrap();
        prop_assert!(!validate_category(&bad).passed());
    }
}

#[test]
fn nerve_of_a_chain_counts_multisets() {
    for n in 0..4 {
        for cap in 0..4 {
            let k = nerve(&FinCategory::chain(n), cap).sset;
            for dim in 0..=cap {
                assert_eq!(k.count(dim), binomial(n + dim + 1, dim + 1), "N[{n}] in dimension {dim}");
            }
        }
    }
}

#[test]
fn subdivision_objects_are_simplices_of_the_nerve() {
    for n in 0..3 {
        for cap in 1..4 {
            let d = DCat::standard(n, cap, Exec::Sequential).unwrap();
            let expected: usize = (0..=cap).map(|k| binomial(n + k + 1, k + 1)).sum();
            assert_eq!(d.num_objects(), expected);
            assert!(validate_category(d.category()).passed());
        }
    }
}

#[test]
fn localizing_at_identities_changes_nothing() {
    for n in 0..4 {
        let c = FinCategory::chain(n);
        let loc = localize_bounded(&c, &MorphismClass::identities(&c), 3);
        assert!(loc.is_stabilized(), "[{n}]: {:?}", loc.status);
        for a in 0..=n {
            for b in 0..=n {
                assert_eq!(loc.hom_count(a, b), usize::from(a <= b));
            }
        }
    }
}

#[test]
fn inverting_a_composite_chain_is_inconclusive_not_guessed() {
    let c = FinCategory::chain(2);
    for budget in 3..7 {
        let loc = localize_bounded(&c, &MorphismClass::all(&c), budget);
        assert!(!loc.is_stabilized());
        assert!(loc.category.is_none());
    }
    let c = FinCategory::chain(1);
    let loc = localize_bounded(&c, &MorphismClass::all(&c), 5);
    assert!(loc.is_stabilized());
    assert_eq!(loc.hom_count(1, 0), 1);
}

#[test]
fn parallel_and_sequential_subdivisions_agree() {
    let a = DCat::standard(2, 3, Exec::Parallel).unwrap();
    let b = DCat::standard(2, 3, Exec::Sequential).unwrap();
    assert_eq!(a.category(), b.category());
    assert_eq!(a.weq(), b.weq());
}

#[test]
fn euler_characteristic_is_preserved() {
    let mut r = rng(11);
    for _ in 0..50 {
        let x = random_complex(&mut r, 3, ComplexShape { lo: -1, hi: 2, max_dim: 3 });
        let chi = |dims: &std::collections::BTreeMap<Degree, usize>| -> i64 {
            dims.iter().map(|(&n, &d)| if n % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
        };
        assert_eq!(chi(x.dims()), chi(HomologyView::new(&x).dims()));
        let _: &ChainComplex = &x;
    }
}
