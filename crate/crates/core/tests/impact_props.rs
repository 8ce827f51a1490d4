use narca_core::impact::{impact_distance, normal_cdf, significance, Dims, PairwiseStats};
use narca_core::pipeline::Analysis;
use narca_core::text::{build_vocabulary, threshold_matrix, Document, TokenizerConfig};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn reported_arithmetic() {
    let mean = 12.64907;
    let stdev = mean - 8.508712;
    let s = significance(3.670904, mean, stdev).unwrap();
    assert!((s.z + 2.168451).abs() < 1e-5);
    assert!((mean - 2.0 * stdev - 4.368352).abs() < 5e-6);
    assert!((s.one_sided_tail_percent - 1.5063).abs() < 1e-3);
    assert!((s.two_sided_tail_percent - 2.0 * s.one_sided_tail_percent).abs() < 1e-12);
}

#[test]
fn tails_are_symmetric() {
    for z in [-3.0, -1.0, 0.5, 2.2] {
        assert!((normal_cdf(z) + normal_cdf(-z) - 1.0).abs() < 1e-15);
        let a = significance(10.0 + z, 10.0, 1.0).unwrap();
        let b = significance(10.0 - z, 10.0, 1.0).unwrap();
        assert!((a.one_sided_tail_percent - b.one_sided_tail_percent).abs() < 1e-12);
    }
}

fn rotate(points: &[Vec<f64>], angle: f64) -> Vec<Vec<f64>> {
    let (s, c) = angle.sin_cos();
    points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q[0] = c * p[0] - s * p[1];
            q[1] = s * p[0] + c * p[1];
            q
        })
        .collect()
}

proptest! {
    #[test]
    fn plane_distance_never_exceeds_full(a in prop::collection::vec(-5.0f64..5.0, 1..8), shift in -3.0f64..3.0) {
        let b: Vec<f64> = a.iter().enumerate().map(|(i, x)| x + shift * (i as f64 + 1.0).sin()).collect();
        prop_assert!(impact_distance(&a, &b, Dims::Plane) <= impact_distance(&a, &b, Dims::Full) + 1e-15);
    }

    #[test]
    fn pairwise_stats_are_rotation_invariant(
        pts in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 3..20),
        angle in 0.0f64..6.3,
    ) {
        let a = PairwiseStats::from_points(&pts).unwrap();
        let b = PairwiseStats::from_points(&rotate(&pts, angle)).unwrap();
        prop_assert!((a.mean - b.mean).abs() < 1e-9);
        prop_assert!((a.stdev - b.stdev).abs() < 1e-9);
        prop_assert_eq!(a.n_pairs(), pts.len() * (pts.len() - 1) / 2);
        let med = a.quantile(0.5);
        let pg = a.percent_greater(med);
        prop_assert!(pg <= 50.0 + 1e-9);
    }
}

/// Three campaigns, each with its own vocabulary, opened by an initiating document.
fn campaign_corpus(seed: u64, on_topic_opener: bool) -> Vec<Document> {
    let themes = [
        ["solar", "panel", "energy", "roof", "sunny"],
        ["bus", "cycle", "train", "commute", "ticket"],
        ["vegan", "lunch", "recipe", "market", "bread"],
    ];
    let common = ["campus", "week", "students", "great", "today"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::new();
    let mut seq = 0;
    for (c, theme) in themes.iter().enumerate() {
        let opener: Vec<&str> = if on_topic_opener {
            theme.iter().copied().take(3).collect()
        } else {
            themes[(c + 1) % 3].iter().copied().take(3).collect()
        };
        docs.push(Document::new(seq, opener.join(" ")).with_campaign(c as u32 + 1).initiating());
        seq += 1;
        for _ in 0..20 {
            let words: Vec<&str> = (0..6)
                .map(|_| {
                    if rng.random_bool(0.7) {
                        theme[rng.random_range(0..5)]
                    } else {
                        common[rng.random_range(0..5)]
                    }
                })
                .collect();
            docs.push(Document::new(seq, words.join(" ")).with_campaign(c as u32 + 1));
            seq += 1;
        }
    }
    docs
}

fn analyse(docs: &[Document]) -> Analysis {
    let cfg = TokenizerConfig::default();
    let vocab = build_vocabulary(docs, &cfg);
    Analysis::fit(threshold_matrix(docs, &vocab, &cfg, 5, 5).unwrap()).unwrap()
}

#[test]
fn centroid_is_weighted_member_mean() {
    let a = analyse(&campaign_corpus(1, true));
    let report = a.impact().unwrap();
    assert_eq!(report.campaigns.len(), 3);
    for ci in &report.campaigns {
        let members = a.campaign_members(ci.campaign);
        assert_eq!(members.len(), ci.n_members);
        let mass: f64 = members.iter().map(|&i| a.model.row_masses[i]).sum();
        for s in 0..a.model.dim() {
            let mean: f64 = members
                .iter()
                .map(|&i| a.model.row_masses[i] * a.model.row_coords(i)[s])
                .sum::<f64>()
                / mass;
            assert!((ci.centroid[s] - mean).abs() < 1e-9);
        }
        assert!(ci.distance_plane <= ci.distance_full + 1e-12);
    }
}

#[test]
fn on_topic_openers_beat_off_topic_openers() {
    let on = analyse(&campaign_corpus(2, true)).impact().unwrap();
    let off = analyse(&campaign_corpus(2, false)).impact().unwrap();
    for (a, b) in on.campaigns.iter().zip(&off.campaigns) {
        assert_eq!(a.campaign, b.campaign);
        assert!(a.distance_full < b.distance_full, "campaign {}", a.campaign);
        assert!(a.significance.z < 0.0);
    }
}
