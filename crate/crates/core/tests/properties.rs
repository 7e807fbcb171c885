//! Property tests spanning the public API.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sparse_mds::genmatrix::{
    assemble_matrix, build_row_polys, coefficient_matrix, select_points_sequential, EvaluationPoints, MatrixDoc,
    SequentialOptions,
};
use sparse_mds::patterns::{check_mds, check_mds_naive, complete_to_maximal};
use sparse_mds::symcore::generate::random_vstar_systems;
use sparse_mds::symcore::lemmas::lemma_divide;
use sparse_mds::symcore::{
    check_vk, gen_family, gen_p, independent, FormalPoly, IndependenceMode, MultiplicityVector, RandomizedOptions,
    SystemDoc, VectorSystem,
};
use sparse_mds::verify::{self, MinorOrder, MinorScan};
use sparse_mds::{Execution, FieldSpec, Matrix, ZeroPattern};

const FIELDS: [&str; 7] = ["2", "3", "4", "5", "8", "13", "2^5"];

fn field(i: usize) -> FieldSpec {
    FIELDS[i % FIELDS.len()].parse().unwrap()
}

fn arb_pattern(max_n: usize, max_k: usize) -> impl Strategy<Value = ZeroPattern> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        let k = k.min(n);
        prop::collection::vec(prop::collection::btree_set(1..=n, 0..k), k)
            .prop_map(move |rows| ZeroPattern::new(n, k, rows.into_iter().map(|r| r.into_iter().collect()).collect()).unwrap())
    })
}

fn arb_maximal_pattern(max_n: usize, max_k: usize) -> impl Strategy<Value = ZeroPattern> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| {
        let k = k.min(n);
        prop::collection::vec(prop::collection::btree_set(1..=n, k - 1), k)
            .prop_map(move |rows| ZeroPattern::new(n, k, rows.into_iter().map(|r| r.into_iter().collect()).collect()).unwrap())
    })
}

fn random_matrix(seed: u64, f: &FieldSpec, k: usize, n: usize) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Matrix::from_fn(k, n, |_, _| rng.random_range(0..f.order()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_laws(fi in 0usize..7, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(fi);
        let q = f.order();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn rank_of_transpose(fi in 0usize..7, seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let f = field(fi);
        let m = random_matrix(seed, &f, r, c);
        prop_assert_eq!(f.rank(&m), f.rank(&m.transpose()));
    }

    #[test]
    fn naive_and_optimized_checks_agree(p in arb_pattern(6, 4)) {
        prop_assert_eq!(check_mds(&p), check_mds_naive(&p));
    }

    #[test]
    fn completion_is_maximal_and_contains_input(p in arb_pattern(6, 4)) {
        prop_assume!(check_mds(&p).is_satisfied());
        let c = complete_to_maximal(&p).unwrap();
        let full = &c.pattern;
        prop_assert!(full.is_maximal());
        prop_assert!(check_mds(full).is_satisfied());
        prop_assert_eq!(full.k(), p.k());
        for i in 0..p.k() {
            prop_assert!(p.set(i).iter().all(|j| full.set(i).contains(j)));
        }
        prop_assert_eq!(c.n_increased_from.is_some(), full.n() > p.n());
    }

    #[test]
    fn nonzero_det_c_iff_mds(p in arb_pattern(5, 3), fi in 0usize..7, seed in any::<u64>()) {
        prop_assume!(check_mds(&p).is_satisfied());
        let full = complete_to_maximal(&p).unwrap().pattern;
        let f = field(fi);
        prop_assume!(f.order() as usize >= full.n());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<u32> = rand::seq::index::sample(&mut rng, f.order() as usize, full.n())
            .into_iter().map(|v| v as u32).collect();
        let pts = EvaluationPoints::new(&f, pts).unwrap();
        let polys = build_row_polys(&full, &pts).unwrap();
        let det = f.det(&coefficient_matrix(&polys).unwrap()).unwrap();
        let a = assemble_matrix(&polys, &pts).unwrap();
        prop_assert_eq!(det != 0, verify::verify_mds(&f, &a.matrix).unwrap().is_ok());
    }

    #[test]
    fn sequential_selection_is_deterministic(p in arb_pattern(5, 3), seed in any::<u64>()) {
        prop_assume!(check_mds(&p).is_satisfied());
        let full = complete_to_maximal(&p).unwrap().pattern;
        let f = FieldSpec::smallest_at_least((full.n() + full.k() - 1) as u64).unwrap();
        let seq = SequentialOptions { seed, exec: Execution::Sequential, ..Default::default() };
        let par = SequentialOptions { exec: Execution::Parallel, ..seq };
        let a = select_points_sequential(&full, &f, &seq).unwrap();
        let b = select_points_sequential(&full, &f, &seq).unwrap();
        let c = select_points_sequential(&full, &f, &par).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &c);
    }

    #[test]
    fn column_restriction_preserves_mds(seed in any::<u64>(), k in 1usize..4, extra in 0usize..5, keep in any::<u64>()) {
        let f: FieldSpec = "13".parse().unwrap();
        let n = k + extra;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<u32> = rand::seq::index::sample(&mut rng, 13, n).into_iter().map(|v| v as u32).collect();
        let m = sparse_mds::genmatrix::vandermonde(&f, k, &pts);
        let mut cols: Vec<usize> = (0..n).filter(|j| keep >> j & 1 == 1).collect();
        for j in 0..n {
            if cols.len() >= k { break; }
            if !cols.contains(&j) { cols.push(j); }
        }
        cols.sort_unstable();
        prop_assert!(verify::verify_mds(&f, &m.select_columns(&cols)).unwrap().is_ok());
    }

    #[test]
    fn scan_orders_agree(fi in 0usize..7, seed in any::<u64>(), k in 1usize..4, extra in 0usize..4) {
        let f = field(fi);
        let m = random_matrix(seed, &f, k, k + extra);
        let lex = verify::verify_mds_with(&f, &m, &MinorScan { order: MinorOrder::Lexicographic, exec: Execution::Parallel }).unwrap();
        let rd = verify::verify_mds_with(&f, &m, &MinorScan { order: MinorOrder::RevolvingDoor, exec: Execution::Sequential }).unwrap();
        prop_assert_eq!(lex, rd);
    }

    #[test]
    fn matrix_doc_round_trip(fi in 0usize..7, seed in any::<u64>(), k in 1usize..4, n in 1usize..6) {
        let f = field(fi);
        let doc = MatrixDoc::plain(&f, &random_matrix(seed, &f, k, n));
        let back: MatrixDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.decode().unwrap().0, f);
    }

    #[test]
    fn vk_matches_mds_on_maximal_indicator_systems(p in arb_maximal_pattern(6, 4)) {
        prop_assert!(p.is_maximal());
        let sys = VectorSystem::from_pattern(&p);
        prop_assert_eq!(check_vk(&sys).is_satisfied(), check_mds(&p).is_satisfied());
    }

    #[test]
    fn single_vector_family_is_independent(n in 1usize..4, k in 1usize..6, e in prop::collection::vec(0u32..3, 4)) {
        let v = MultiplicityVector::new(e[..n].to_vec());
        prop_assume!(v.weight() < k);
        let fam = gen_p(k, &v).unwrap();
        let r = independent(&fam, IndependenceMode::Exact, &RandomizedOptions::default()).unwrap();
        prop_assert!(r.verdict.is_independent());
    }

    #[test]
    fn divide_is_a_multiset_identity(seed in any::<u64>()) {
        let systems = random_vstar_systems(4, 4, 5, 4, seed);
        for sys in systems {
            let Some(j) = (1..=sys.n()).find(|&j| sys.vectors().iter().all(|v| v.get(j) >= 1)) else { continue };
            if sys.k() < 2 { continue; }
            let reduced = lemma_divide(&sys, j).unwrap();
            let factor = FormalPoly::linear_factor(sys.n(), j);
            let mut lhs: Vec<FormalPoly> = gen_family(&sys).unwrap().polys().cloned().collect();
            let mut rhs: Vec<FormalPoly> = gen_family(&reduced).unwrap().polys().map(|p| p.mul(&factor)).collect();
            lhs.sort();
            rhs.sort();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn randomized_oracle_accepts_vstar_systems(seed in any::<u64>()) {
        let opts = RandomizedOptions { seed, ..Default::default() };
        for sys in random_vstar_systems(3, 6, 6, 5, seed) {
            let fam = gen_family(&sys).unwrap();
            prop_assert!(independent(&fam, IndependenceMode::Randomized, &opts).unwrap().verdict.is_independent());
        }
    }

    #[test]
    fn system_doc_round_trip(seed in any::<u64>()) {
        for sys in random_vstar_systems(3, 5, 5, 4, seed) {
            let json = serde_json::to_string(&sys).unwrap();
            let back: VectorSystem = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&back, &sys);
            let doc: SystemDoc = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(doc.vectors.len(), sys.m());
        }
    }
}
