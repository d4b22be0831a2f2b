use num_traits::Zero;
use proptest::prelude::*;

use paratangent::analysis::{estimate_jet, factored_bound, flatness_values, similarity_invariant};
use paratangent::format::{parse_points_csv, parse_sequence, to_json, write_points_csv, SequenceDocument};
use paratangent::ifs::{catalog, compose, iterate_word, williams_points, NodalEntry, NodalSequence};
use paratangent::multiindex::{dimension, homogeneity_degree};
use paratangent::nodesets::{hdeg, select_unisolvent, Hdeg, Selection};
use paratangent::scalar::{powi, Rational, Scalar};
use paratangent::vandermonde::{build, normalized_determinant};
use paratangent::{IfsSystem, NodeSet, Word};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=8).prop_map(|(n, d)| q(n, d))
}

fn point_set(n: usize, count: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec(rational(), n), count).prop_filter("distinct points", |pts| {
        (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| pts[i] != pts[j]))
    })
}

fn det(points: &[Vec<Rational>], d: u32) -> Rational {
    build(&NodeSet::new(points.to_vec()).unwrap(), d).unwrap().determinant()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn determinant_is_translation_invariant(points in point_set(2, 6), shift in prop::collection::vec(rational(), 2)) {
        let nodes = NodeSet::new(points.clone()).unwrap();
        prop_assert_eq!(build(&nodes.translated(&shift), 2).unwrap().determinant(), det(&points, 2));
    }

    #[test]
    fn uniform_scaling_exponent(points in point_set(2, 3), lambda in rational()) {
        prop_assume!(!lambda.is_zero());
        let nodes = NodeSet::new(points.clone()).unwrap();
        let scaled = build(&nodes.scaled(&lambda), 1).unwrap().determinant();
        let exponent = 2 * homogeneity_degree(2, 1);
        prop_assert_eq!(scaled, powi(&lambda, exponent) * det(&points, 1));
    }

    #[test]
    fn normalized_determinant_divides_out_radius(points in point_set(1, 4), r in 1i64..50) {
        let radius = points.iter().map(|p| p[0].clone() - points[0][0].clone()).map(|v| if v < Rational::zero() { -v } else { v })
            .fold(q(0, 1), |a, b| if b > a { b } else { a }) + q(r, 1);
        let nodes = NodeSet::new(points.clone()).unwrap().with_radius(radius.clone()).unwrap();
        let exponent = homogeneity_degree(1, 3);
        prop_assert_eq!(normalized_determinant(&nodes, 3).unwrap() * powi(&radius, exponent), det(&points, 3));
    }

    #[test]
    fn selection_is_unisolvent(points in point_set(2, 12)) {
        match select_unisolvent(&points, 2, 2).unwrap() {
            Selection::Unisolvent(nodes) => {
                prop_assert_eq!(nodes.len(), dimension(2, 2) as usize);
                prop_assert!(!build(&nodes, 2).unwrap().determinant().is_zero());
                prop_assert_eq!(hdeg(nodes.points(), 2).unwrap().value, Hdeg::ExceedsBound);
            }
            Selection::Degenerate { rank, required } => {
                prop_assert!(rank < required);
                prop_assert!(matches!(hdeg(&points, 2).unwrap().value, Hdeg::Finite(e) if e <= 2));
            }
        }
    }

    #[test]
    fn jet_reproduces_values(points in point_set(2, 3), values in prop::collection::vec(rational(), 3)) {
        let nodes = NodeSet::new(points.clone()).unwrap();
        prop_assume!(!det(&points, 1).is_zero());
        let jet = estimate_jet(&nodes, &values, 1).unwrap();
        for (p, v) in points.iter().zip(&values) {
            let y: Vec<Rational> = p.iter().zip(&jet.center).map(|(a, b)| a.clone() - b.clone()).collect();
            let value = jet.coefficients[0].clone() + jet.coefficients[1].clone() * y[0].clone() + jet.coefficients[2].clone() * y[1].clone();
            prop_assert_eq!(&value, v);
        }
    }

    #[test]
    fn similarity_invariant_under_catalog_maps(points in point_set(2, 3), label in 1usize..=3) {
        prop_assume!(!det(&points, 1).is_zero());
        let sys: IfsSystem<Rational> = catalog("sierpinski").unwrap();
        let nodes = NodeSet::new(points).unwrap();
        let image = nodes.mapped(sys.map(label).unwrap()).unwrap();
        prop_assert_eq!(similarity_invariant(&image, 1).unwrap(), similarity_invariant(&nodes, 1).unwrap());
        prop_assert_eq!(similarity_invariant(&nodes.scaled(&q(3, 7)), 1).unwrap(), similarity_invariant(&nodes, 1).unwrap());
    }

    #[test]
    fn compose_matches_sequential_application(word in prop::collection::vec(1usize..=3, 1..6), x in prop::collection::vec(rational(), 2)) {
        let sys: IfsSystem<Rational> = catalog("sierpinski").unwrap();
        let composed = compose(&sys, &Word::new(word.clone())).unwrap().apply(&x).unwrap();
        let mut y = x.clone();
        for &label in word.iter().rev() {
            y = sys.map(label).unwrap().apply(&y).unwrap();
        }
        prop_assert_eq!(composed, y);
    }

    #[test]
    fn s_bounded_by_t(coeffs in prop::collection::vec(rational(), 4), p in 0.1f64..3.0, qq in 0.1f64..4.0) {
        let seq = NodalSequence::new(
            (1..=5)
                .map(|k| {
                    let h = q(1, 1 << k);
                    let pts = (1..=4).map(|i| vec![q(i, 1) * h.clone()]).collect();
                    NodalEntry { k, nodes: NodeSet::new(pts).unwrap().with_radius(q(3, 1) * h).unwrap() }
                })
                .collect(),
        )
        .unwrap();
        let values: Vec<Vec<Rational>> = seq
            .entries()
            .iter()
            .map(|e| {
                e.nodes
                    .points()
                    .iter()
                    .map(|x| (0..4).fold(q(0, 1), |acc, j| acc + coeffs[j].clone() * powi(&x[0], j as u64)))
                    .collect()
            })
            .collect();
        let outer: Vec<Rational> = seq.entries().iter().map(|e| q(4, 3) * e.radius().clone()).collect();
        let s = flatness_values(&seq, &values, p).unwrap();
        let t = factored_bound(&seq, &values, p, qq, &outer).unwrap();
        for (s, t) in s.iter().zip(&t) {
            prop_assert!(*s <= t * (1.0 + 1e-12));
        }
    }

    #[test]
    fn csv_round_trip(points in point_set(3, 5), values in prop::collection::vec(rational(), 5)) {
        let text = write_points_csv(&points, Some(&values));
        let table = parse_points_csv::<Rational>(&text).unwrap();
        prop_assert_eq!(table.points, points);
        prop_assert_eq!(table.values, Some(values));
    }

    #[test]
    fn float_csv_round_trip(raw in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 2), 1..6)) {
        let table = parse_points_csv::<f64>(&write_points_csv(&raw, None)).unwrap();
        prop_assert_eq!(table.points, raw);
    }
}

#[test]
fn sequence_documents_round_trip_in_both_modes() {
    let sys: IfsSystem<Rational> = catalog("menger").unwrap();
    let points = williams_points(&sys, 1).unwrap();
    let Selection::Unisolvent(base) = select_unisolvent(&points, 3, 1).unwrap() else {
        panic!("menger fixed points are degenerate");
    };
    let seq = iterate_word(&sys, &Word::new(vec![20, 1]), &base, 3).unwrap();
    let json = to_json(&SequenceDocument::from_sequence(&seq, 1, None));
    assert_eq!(parse_sequence::<Rational>(&json).unwrap().sequence, seq);

    let fsys: IfsSystem<f64> = catalog("koch").unwrap();
    let fbase = NodeSet::new(fsys.vertices().unwrap()[..3].to_vec()).unwrap();
    let fseq = iterate_word(&fsys, &Word::new(vec![2]), &fbase, 4).unwrap();
    let json = to_json(&SequenceDocument::from_sequence(&fseq, 1, None));
    assert_eq!(parse_sequence::<f64>(&json).unwrap().sequence, fseq);
}
