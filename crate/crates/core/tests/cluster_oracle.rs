use std::ops::Range;

use narca_core::cluster::{cluster, Dendrogram};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Recomputes every adjacent complete link from scratch at each step.
fn brute_force(points: &[Vec<f64>]) -> Vec<(Range<usize>, Range<usize>, f64)> {
    let mut clusters: Vec<Range<usize>> = (0..points.len()).map(|i| i..i + 1).collect();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut best = (0, f64::INFINITY);
        for k in 0..clusters.len() - 1 {
            let mut link = 0.0f64;
            for i in clusters[k].clone() {
                for j in clusters[k + 1].clone() {
                    link = link.max(dist(&points[i], &points[j]));
                }
            }
            if link < best.1 {
                best = (k, link);
            }
        }
        let (k, h) = best;
        let (l, r) = (clusters[k].clone(), clusters[k + 1].clone());
        out.push((l.clone(), r.clone(), h));
        clusters[k] = l.start..r.end;
        clusters.remove(k + 1);
    }
    out
}

fn check_structure(d: &Dendrogram) {
    assert_eq!(d.merges.len() + 1, d.n_leaves);
    let mut prev = 0.0;
    for m in &d.merges {
        assert_eq!(m.left_span.end, m.right_span.start, "merge of non-adjacent clusters");
        assert!(m.height >= prev);
        prev = m.height;
    }
}

#[test]
fn matches_brute_force_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let n = rng.random_range(2..=12);
        let dim = rng.random_range(1..=4);
        let points: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect())
            .collect();
        let d = cluster(&points).unwrap();
        let reference = brute_force(&points);
        check_structure(&d);
        assert_eq!(d.merges.len(), reference.len());
        for (m, (l, r, h)) in d.merges.iter().zip(&reference) {
            assert_eq!(&m.left_span, l);
            assert_eq!(&m.right_span, r);
            assert!((m.height - h).abs() < 1e-12);
        }
    }
}

#[test]
fn reversed_sequence_mirrors_dendrogram() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let n = rng.random_range(2..=12);
        let points: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).collect();
        let mut rev = points.clone();
        rev.reverse();
        let a = cluster(&points).unwrap();
        let b = cluster(&rev).unwrap();
        let mirror = |r: &Range<usize>| (n - r.end)..(n - r.start);
        let mut a_sets: Vec<(Range<usize>, Range<usize>)> = a
            .merges
            .iter()
            .map(|m| (m.left_span.start.min(m.right_span.start)..m.right_span.end, m.left_span.clone()))
            .collect();
        let mut b_sets: Vec<(Range<usize>, Range<usize>)> = b
            .merges
            .iter()
            .map(|m| {
                let whole = mirror(&(m.left_span.start..m.right_span.end));
                (whole, mirror(&m.right_span))
            })
            .collect();
        a_sets.sort_by_key(|(w, l)| (w.start, w.end, l.end));
        b_sets.sort_by_key(|(w, l)| (w.start, w.end, l.end));
        assert_eq!(a_sets, b_sets);
    }
}

proptest! {
    #[test]
    fn contiguity_and_monotone_heights(points in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 2..30)) {
        let d = cluster(&points).unwrap();
        check_structure(&d);
        for k in 1..=points.len() {
            let segs = d.cut(k).unwrap();
            prop_assert_eq!(segs.len(), k);
            prop_assert_eq!(segs[0].start, 0);
            prop_assert_eq!(segs[k - 1].end, points.len());
            for w in segs.windows(2) {
                prop_assert_eq!(w[0].end, w[1].start);
            }
        }
    }
}
