use proptest::prelude::*;

use linext::chains::{
    build_graph, check_stationary, partition_function, promotion_probabilities, ChainKind,
};
use linext::extensions::{self, count_extensions, is_extension, ExtensionIndex};
use linext::linform::{format_rational, parse_rational, Rational, RationalAssignment};
use linext::monoid::{rtrivial_spectrum, PromotionMonoid, SuppDes, DEFAULT_CAP};
use linext::poset::{LabelSet, Poset};
use linext::spectral::{
    chain_count_by_extensions, check_forest_spectrum, predict_spectrum_forest, DerangementTable,
    UpperSetLattice,
};

/// Naturally labeled poset on `1..=n` from a relation mask over pairs `a < b`.
fn poset_strategy(max_n: usize) -> impl Strategy<Value = Poset> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (1..=n)
            .flat_map(|a| ((a + 1)..=n).map(move |b| (a, b)))
            .collect();
        proptest::collection::vec(proptest::bool::weighted(0.3), pairs.len()).prop_map(
            move |mask| {
                let rel: Vec<(usize, usize)> = pairs
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &m)| m)
                    .map(|(&p, _)| p)
                    .collect();
                Poset::new(n, &rel).unwrap()
            },
        )
    })
}

/// Rooted forest: each element below `n` picks a parent with a larger label,
/// or none.
fn forest_strategy(max_n: usize) -> impl Strategy<Value = Poset> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<u32>(), n).prop_map(move |picks| {
            let rel: Vec<(usize, usize)> = (1..n)
                .filter_map(|i| {
                    let choices = n - i + 1;
                    let k = picks[i - 1] as usize % choices;
                    (k > 0).then_some((i, i + k))
                })
                .collect();
            Poset::new(n, &rel).unwrap()
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n);
            out.push(q);
        }
    }
    out
}

fn brute_extensions(p: &Poset) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = permutations(p.len())
        .into_iter()
        .filter(|w| (0..w.len()).all(|i| ((i + 1)..w.len()).all(|j| !p.lt(w[j], w[i]))))
        .collect();
    all.sort();
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_brute_force(p in poset_strategy(6)) {
        let brute = brute_extensions(&p);
        let idx = ExtensionIndex::new(&p).unwrap();
        prop_assert_eq!(idx.words().to_vec(), brute.clone());
        prop_assert_eq!(count_extensions(&p), brute.len());
        for w in &brute {
            prop_assert!(is_extension(&p, w));
        }
    }

    #[test]
    fn operators_stay_in_extensions(p in poset_strategy(6)) {
        let n = p.len();
        let idx = ExtensionIndex::new(&p).unwrap();
        for w in idx.words() {
            for i in 1..n {
                let t = extensions::tau(&p, w, i).unwrap();
                prop_assert!(is_extension(&p, &t));
                prop_assert_eq!(&extensions::tau(&p, &t, i).unwrap(), w);
            }
            for j in 1..=n {
                let a = extensions::promotion(&p, w, j).unwrap();
                let b = extensions::promotion_by_sliding(&p, w, j).unwrap();
                prop_assert_eq!(&a, &b);
                prop_assert!(is_extension(&p, &a));
            }
            prop_assert_eq!(&extensions::promotion(&p, w, n).unwrap(), w);
        }
    }

    #[test]
    fn generators_and_stationary_forms(p in poset_strategy(5), seed in 0u64..1000) {
        let v = RationalAssignment::random(p.len(), seed);
        for kind in ChainKind::ALL {
            let g = build_graph(&p, kind).unwrap();
            let m = g.generator_matrix();
            for c in 0..m.dim() {
                prop_assert!(m.column_sum(c).is_zero());
            }
            if kind.is_uniform() {
                for r in 0..m.dim() {
                    prop_assert!(m.row_sum(r).is_zero());
                }
            }
            prop_assert!(g.is_strongly_connected());
            prop_assert!(check_stationary(&p, kind, &v).unwrap().passed());
        }
    }

    #[test]
    fn lattice_counts(p in poset_strategy(6)) {
        let l = UpperSetLattice::new(&p);
        let n = p.len();
        for &s in l.elements() {
            let rest = p.restrict(s.complement(n));
            prop_assert_eq!(l.chain_count(s).unwrap(), count_extensions(&rest) as u128);
            prop_assert_eq!(chain_count_by_extensions(&p, s), count_extensions(&rest));
        }
        prop_assert_eq!(l.chain_count(LabelSet::EMPTY).unwrap(), count_extensions(&p) as u128);
    }

    #[test]
    fn forest_theorems(p in forest_strategy(6), seed in 0u64..1000) {
        let v = RationalAssignment::random(p.len(), seed);
        let table = DerangementTable::new(&p);
        prop_assert!(table.all_nonnegative());
        prop_assert_eq!(table.total(), count_extensions(&p) as i128);
        prop_assert!(check_forest_spectrum(&p, &v).unwrap());
        let total = promotion_probabilities(&p, &v).unwrap().iter().fold(Rational::from_integer(0.into()), |a, b| a + b);
        prop_assert_eq!(total, Rational::from_integer(1.into()));
        prop_assert!(partition_function(&p, &v).unwrap() > Rational::from_integer(0.into()));
    }

    #[test]
    fn forest_monoids_are_r_trivial(p in forest_strategy(5)) {
        let m = PromotionMonoid::generate(&p, DEFAULT_CAP).unwrap();
        prop_assert!(m.is_r_trivial().trivial);
        let sd = SuppDes::new(&m).unwrap();
        prop_assert_eq!(
            rtrivial_spectrum(&m, &sd).unwrap().normalized(),
            predict_spectrum_forest(&p).unwrap().normalized()
        );
        prop_assert_eq!(m.chambers().len(), count_extensions(&p));
    }

    #[test]
    fn relabeling_preserves_extension_count(p in poset_strategy(6), shift in 0usize..6) {
        let n = p.len();
        let name = |a: usize| format!("e{}", (a + shift) % n);
        let elements: Vec<String> = (1..=n).map(name).collect();
        let relations: Vec<(String, String)> = p.covers().iter().map(|&(a, b)| (name(a), name(b))).collect();
        let (q, labels) = Poset::relabel_natural(&elements, &relations).unwrap();
        prop_assert!(q.is_naturally_labeled());
        prop_assert_eq!(count_extensions(&q), count_extensions(&p));
        prop_assert_eq!(labels.len(), n);
    }

    #[test]
    fn poset_json_round_trip(p in poset_strategy(8)) {
        let text = serde_json::to_string(&p.to_spec()).unwrap();
        prop_assert_eq!(Poset::from_json(&text).unwrap(), p);
    }

    #[test]
    fn rationals_render_in_lowest_terms(a in -500i64..500, b in 1i64..500) {
        let r = Rational::new(a.into(), b.into());
        let s = format_rational(&r);
        prop_assert_eq!(parse_rational(&s).unwrap(), r.clone());
        if !r.is_integer() {
            let (num, den) = s.split_once('/').unwrap();
            let g = num_integer::gcd(num.parse::<i64>().unwrap(), den.parse::<i64>().unwrap());
            prop_assert_eq!(g.abs(), 1);
        }
    }
}
