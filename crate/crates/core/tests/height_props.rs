mod common;

use dimerstat::exact::{rat, SymbolicValue};
use dimerstat::geometry::Model;
use dimerstat::height::{
    edge_count_distribution, height_field_ids, height_variance, torus_column_distribution,
    torus_column_distribution_oracle,
};
use dimerstat::oracle::enumerate_matchings;

#[test]
fn every_matching_has_a_consistent_height_function() {
    let mut rng = common::rng(*common::SEED + 3);
    for _ in 0..10 {
        let g = common::random_region(Model::Lozenge, 24, &mut rng);
        for m in enumerate_matchings(&g).unwrap().matchings() {
            let h = height_field_ids(&g, m).unwrap();
            assert!(!h.is_empty());
        }
    }
}

#[test]
fn torus_column_matches_enumeration() {
    for len in 1..=4 {
        let a = torus_column_distribution(4, 4, len).unwrap();
        let b = torus_column_distribution_oracle(4, 4, len, 36).unwrap();
        assert_eq!(a, b, "len {len}");
    }
}

#[test]
fn distribution_is_a_probability_vector() {
    let n = 30;
    let beta = edge_count_distribution(n).unwrap();
    let total = beta
        .iter()
        .fold(SymbolicValue::zero(Model::Lozenge), |a, b| a.try_add(b).unwrap());
    assert_eq!(total, SymbolicValue::one(Model::Lozenge));
    for b in &beta {
        let x = b.eval_re(1e-12);
        assert!((-1e-12..=1.0 + 1e-12).contains(&x), "{x}");
    }
    assert!(edge_count_distribution(101).is_err());
}

#[test]
fn cycles_grow_and_variance_tracks_the_logarithm() {
    let mut prev = SymbolicValue::zero(Model::Lozenge);
    for n in 1..=150 {
        let c = height_variance(n).unwrap().expected_cycles();
        assert!(c.try_sub(&prev).unwrap().signum().unwrap() >= 0, "n = {n}");
        prev = c;
    }
    assert_eq!(
        height_variance(1).unwrap().expected_cycles(),
        SymbolicValue::rational(Model::Lozenge, rat(4, 9))
    );
    let gaps: Vec<f64> = [10u64, 30, 100, 300, 1000, 3000, 10000]
        .iter()
        .map(|&n| {
            let v = height_variance(n).unwrap();
            v.variance_h_numeric() - v.log_reference()
        })
        .collect();
    println!("σ²(h_n) − (9/π²) ln n: {gaps:?}");
    let spread = gaps.iter().cloned().fold(f64::MIN, f64::max) - gaps.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 0.5);
}
