mod common;

use dimerstat::cylinder::{region_probability, region_probability_inverse, torus_probability, Method};
use dimerstat::event::CylinderEvent;
use dimerstat::geometry::{build_region, build_torus, Face, Model};
use dimerstat::kasteleyn::{count_region, count_torus, CountMethod};
use dimerstat::oracle::{self, enumerate_matchings};
use dimerstat::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[test]
fn region_counts_and_probabilities_match_enumeration() {
    let mut rng = common::rng(*common::SEED);
    for model in [Model::Lozenge, Model::Domino] {
        for _ in 0..12 {
            let g = common::random_region(model, 24, &mut rng);
            let set = enumerate_matchings(&g).unwrap();
            assert_eq!(count_region(&g).unwrap(), BigInt::from(set.len()), "{:?}", g.faces());
            for (ids, ev) in common::small_events(&g) {
                let expect = BigRational::new(set.count_containing(&ids).into(), set.len().into());
                let got = region_probability(&g, &ev).unwrap();
                assert_eq!(got.method, Method::RegionCofactor);
                assert_eq!(got.as_rational().unwrap(), expect, "{:?} {:?}", g.faces(), ev);
            }
        }
    }
}

#[test]
fn inverse_path_is_real_and_nonnegative() {
    let mut rng = common::rng(*common::SEED + 1);
    for model in [Model::Lozenge, Model::Domino] {
        for _ in 0..6 {
            let g = common::random_region(model, 20, &mut rng);
            for (_, ev) in common::small_events(&g) {
                let z = region_probability_inverse(&g, &ev).unwrap();
                assert!(z.im.is_zero() && !z.re.is_negative(), "{z}");
            }
        }
    }
}

#[test]
fn torus_counts_and_probabilities_match_enumeration() {
    for (model, m, n) in [
        (Model::Lozenge, 2, 2),
        (Model::Lozenge, 2, 4),
        (Model::Lozenge, 4, 2),
        (Model::Lozenge, 4, 4),
        (Model::Domino, 2, 2),
        (Model::Domino, 2, 4),
    ] {
        let g = build_torus(model, m, n).unwrap();
        let set = enumerate_matchings(&g).unwrap();
        let c = count_torus(model, m, n).unwrap();
        assert_eq!(c.method, CountMethod::FourDeterminants);
        assert_eq!(c.count, BigInt::from(set.len()), "{model} {m}x{n}");
        for (ids, ev) in common::small_events(&g) {
            let expect = BigRational::new(set.count_containing(&ids).into(), set.len().into());
            let got = torus_probability(model, m, n, &ev).unwrap();
            assert_eq!(got.method, Method::TorusWeighted);
            assert_eq!(got.as_rational().unwrap(), expect, "{model} {m}x{n} {ev:?}");
        }
    }
}

#[test]
fn unsupported_tori_use_enumeration() {
    let c = count_torus(Model::Lozenge, 3, 2).unwrap();
    assert_eq!(c.method, CountMethod::Oracle);
    assert_eq!(
        c.count,
        oracle::count_matchings(&build_torus(Model::Lozenge, 3, 2).unwrap(), 36).unwrap()
    );
}

#[test]
fn oracle_basics() {
    let hex = build_region(Model::Lozenge, &[Face::Hex(0, 0)]).unwrap();
    assert_eq!(enumerate_matchings(&hex).unwrap().len(), 2);
    let odd = build_region(Model::Lozenge, &[Face::Hex(0, 0), Face::Hex(1, 0), Face::Hex(0, 1)]).unwrap();
    assert!(enumerate_matchings(&odd).unwrap().is_empty());
    assert_eq!(
        oracle::oracle_probability(&odd, &CylinderEvent::empty(Model::Lozenge)),
        Err(Error::NoMatchings)
    );
    let big = build_torus(Model::Domino, 4, 4).unwrap();
    assert!(matches!(
        enumerate_matchings(&big),
        Err(Error::OracleCap { vertices: 64, cap: 36 })
    ));
}
