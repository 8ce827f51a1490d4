//! Permutation-gated constrained agglomeration.
//!
//! Before two adjacent clusters are merged, all pairwise distances within
//! their union are split at the median: distances strictly above it are
//! coded 1 ("high"), the rest 0. The statistic `h` counts the high distances
//! joining one group to the other. Group labels are then reshuffled (group
//! sizes kept), and `p` is the fraction of labellings whose inter-group high
//! count reaches `h`. The merge is carried out when `p > alpha`; otherwise the
//! boundary between the two clusters is frozen for good.
//!
//! The labellings always include the observed one, so `p >= 1 / n` and an
//! `alpha` of zero never blocks anything.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ca::{self, CaError, CaModel};
use crate::cluster::{self, argmin_leftmost, Chain, ClusterError, DistanceMatrix};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SegmentError {
    #[error("groups of {a} and {b} points are too small to test")]
    DegenerateGroups { a: usize, b: usize },
    #[error("alpha must lie in [0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("at least one permutation is required")]
    NoPermutations,
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Ca(#[from] CaError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermTestConfig {
    pub alpha: f64,
    pub n_permutations: usize,
    pub rng_seed: u64,
}

impl Default for PermTestConfig {
    fn default() -> Self {
        Self {
            alpha: 0.15,
            n_permutations: 5000,
            rng_seed: 0,
        }
    }
}

impl PermTestConfig {
    fn validate(&self) -> Result<(), SegmentError> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(SegmentError::InvalidAlpha(self.alpha));
        }
        if self.n_permutations == 0 {
            return Err(SegmentError::NoPermutations);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Fuse,
    Block,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermTestOutcome {
    pub h: usize,
    pub p: f64,
    pub decision: Decision,
}

/// Median split of the pairwise distances inside `a ∪ b`.
///
/// Indices `0..n_a` are group A and `n_a..n` group B.
struct HighCoding {
    n: usize,
    words: usize,
    /// Row-major adjacency bitsets of high-coded pairs.
    bits: Vec<u64>,
    degree: Vec<u32>,
}

impl HighCoding {
    fn new(n: usize, dist: impl Fn(usize, usize) -> f64) -> Self {
        let mut all = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                all.push(dist(i, j));
            }
        }
        let median = median(&mut all);
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        let mut degree = vec![0u32; n];
        for i in 0..n {
            for j in (i + 1)..n {
                if dist(i, j) > median {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                    bits[j * words + i / 64] |= 1 << (i % 64);
                    degree[i] += 1;
                    degree[j] += 1;
                }
            }
        }
        Self { n, words, bits, degree }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// High-coded pairs with exactly one end in `members`.
    fn crossing(&self, members: &[usize], mask: &[u64]) -> usize {
        let mut deg = 0usize;
        let mut inside = 0usize;
        for &x in members {
            deg += self.degree[x] as usize;
            inside += self
                .row(x)
                .iter()
                .zip(mask)
                .map(|(r, m)| (r & m).count_ones() as usize)
                .sum::<usize>();
        }
        // `inside` counts each internal pair twice
        deg - inside
    }
}

fn median(values: &mut [f64]) -> f64 {
    let n = values.len();
    let mid = n / 2;
    let (lower, m, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let m = *m;
    if n % 2 == 1 {
        m
    } else {
        let below = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (below + m) / 2.0
    }
}

/// Tests whether groups `a` and `b` may be merged.
///
/// Uses stream 0 of the configured seed; see [`perm_test_stream`].
pub fn perm_test<P: AsRef<[f64]>>(
    a: &[P],
    b: &[P],
    config: &PermTestConfig,
) -> Result<PermTestOutcome, SegmentError> {
    let points: Vec<&[f64]> = a.iter().chain(b).map(|p| p.as_ref()).collect();
    cluster::validate(&points)?;
    let dist = DistanceMatrix::euclidean(&points)?;
    perm_test_stream(&dist, 0..a.len(), a.len()..points.len(), config, 0)
}

/// Permutation test on two adjacent index ranges of a distance matrix,
/// drawing from ChaCha stream `stream` of the configured seed.
pub fn perm_test_stream(
    dist: &DistanceMatrix,
    a: Range<usize>,
    b: Range<usize>,
    config: &PermTestConfig,
    stream: u64,
) -> Result<PermTestOutcome, SegmentError> {
    config.validate()?;
    let (na, nb) = (a.len(), b.len());
    if na == 0 || nb == 0 || na + nb < 3 {
        return Err(SegmentError::DegenerateGroups { a: na, b: nb });
    }
    let members: Vec<usize> = a.chain(b).collect();
    let n = members.len();
    let coding = HighCoding::new(n, |i, j| dist.get(members[i], members[j]));

    // the smaller group is the one that gets drawn
    let k = na.min(nb);
    let observed: Vec<usize> = if na <= nb { (0..na).collect() } else { (na..n).collect() };
    let mut mask = vec![0u64; coding.words];
    set_mask(&mut mask, &observed);
    let h = coding.crossing(&observed, &mask);

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    rng.set_stream(stream);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut reached = 1usize; // the observed labelling
    for _ in 1..config.n_permutations {
        for i in 0..k {
            let j = rng.random_range(i..n);
            labels.swap(i, j);
        }
        let drawn = &labels[..k];
        mask.iter_mut().for_each(|w| *w = 0);
        set_mask(&mut mask, drawn);
        if coding.crossing(drawn, &mask) >= h {
            reached += 1;
        }
    }
    debug_assert_eq!(coding.n, n);
    let p = reached as f64 / config.n_permutations as f64;
    Ok(PermTestOutcome {
        h,
        p,
        decision: if p > config.alpha { Decision::Fuse } else { Decision::Block },
    })
}

fn set_mask(mask: &mut [u64], members: &[usize]) {
    for &x in members {
        mask[x / 64] |= 1 << (x % 64);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MergeTest {
    /// Union too small to test; merged without a test.
    AutoFused,
    Tested { h: usize, p: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentMerge {
    pub left_span: Range<usize>,
    pub right_span: Range<usize>,
    pub height: f64,
    pub test: MergeTest,
}

/// A boundary whose merge was refused.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockedBoundary {
    /// Position of the first point right of the boundary.
    pub position: usize,
    pub left_span: Range<usize>,
    pub right_span: Range<usize>,
    pub height: f64,
    pub h: usize,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    /// Contiguous position ranges partitioning `0..n`, in order.
    pub segments: Vec<Range<usize>>,
    pub merges: Vec<SegmentMerge>,
    pub blocked: Vec<BlockedBoundary>,
}

impl SegmentationResult {
    /// Indices (into `segments`) of segments holding a single point.
    pub fn singleton_segments(&self) -> Vec<usize> {
        (0..self.segments.len())
            .filter(|&k| self.segments[k].len() == 1)
            .collect()
    }

    /// Segment index of every position.
    pub fn labels(&self) -> Vec<usize> {
        let n = self.segments.last().map_or(0, |s| s.end);
        let mut out = vec![0; n];
        for (k, s) in self.segments.iter().enumerate() {
            out[s.clone()].iter_mut().for_each(|l| *l = k);
        }
        out
    }
}

/// Segments points given in sequence order.
pub fn segment<P: AsRef<[f64]>>(
    points: &[P],
    config: &PermTestConfig,
) -> Result<SegmentationResult, SegmentError> {
    if points.len() < 2 {
        return Err(ClusterError::TooFewPoints {
            needed: 2,
            found: points.len(),
        }
        .into());
    }
    let dist = DistanceMatrix::euclidean(points)?;
    segment_distances(&dist, config)
}

/// Segments over a precomputed distance matrix.
///
/// The closest unblocked adjacent pair is tested at each step (leftmost on
/// ties); the `t`-th test draws from ChaCha stream `t`. Runs until every
/// remaining adjacent pair is blocked.
pub fn segment_distances(
    dist: &DistanceMatrix,
    config: &PermTestConfig,
) -> Result<SegmentationResult, SegmentError> {
    config.validate()?;
    let mut chain = Chain::new(dist);
    // blocked[k]: the boundary after cluster k is frozen
    let mut blocked_after: Vec<bool> = vec![false; chain.links.len()];
    let mut merges = Vec::new();
    let mut blocked = Vec::new();
    let mut stream = 0u64;
    loop {
        let candidate = argmin_leftmost(
            chain
                .links
                .iter()
                .zip(&blocked_after)
                .map(|(&l, &b)| if b { f64::INFINITY } else { l }),
        );
        let Some(k) = candidate.filter(|&k| !blocked_after[k]) else {
            break;
        };
        let (left, right) = (chain.spans[k].clone(), chain.spans[k + 1].clone());
        let test = match perm_test_stream(dist, left.clone(), right.clone(), config, stream) {
            Ok(outcome) => {
                stream += 1;
                if outcome.decision == Decision::Block {
                    blocked_after[k] = true;
                    blocked.push(BlockedBoundary {
                        position: right.start,
                        left_span: left,
                        right_span: right,
                        height: chain.links[k],
                        h: outcome.h,
                        p: outcome.p,
                    });
                    continue;
                }
                MergeTest::Tested {
                    h: outcome.h,
                    p: outcome.p,
                }
            }
            Err(SegmentError::DegenerateGroups { .. }) => MergeTest::AutoFused,
            Err(e) => return Err(e),
        };
        let m = chain.merge(k, dist);
        blocked_after.remove(k);
        merges.push(SegmentMerge {
            left_span: m.left_span,
            right_span: m.right_span,
            height: m.height,
            test,
        });
    }
    Ok(SegmentationResult {
        segments: chain.spans,
        merges,
        blocked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingletonPolicy {
    /// Single-document segments are projected as supplementary rows.
    #[default]
    Supplementary,
    /// Single-document segments stay active in the segment-level analysis.
    Active,
}

/// Segments placed in factor spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentMap {
    /// Per segment: mass-weighted centre of gravity of its members in the
    /// original document-level factor space.
    pub centroids: Vec<Vec<f64>>,
    /// Whether each segment is a principal row of `model`.
    pub active: Vec<bool>,
    /// Segment-level analysis over the active segments' aggregated term
    /// profiles; `None` when no segment is active.
    pub model: Option<CaModel>,
    /// Term columns (indices into the counts matrix) used by `model`.
    pub columns: Vec<usize>,
    /// Per segment: coordinates in `model` (principal for active segments,
    /// supplementary projection otherwise). `None` when the segment cannot be
    /// placed, i.e. it has no mass on the columns of `model`.
    pub coords: Vec<Option<Vec<f64>>>,
}

/// Aggregates each segment's term counts and maps the segments.
///
/// `counts` holds the principal documents (rows, in sequence order) by
/// principal terms, the same table `model` was fitted on.
pub fn segment_map(
    result: &SegmentationResult,
    model: &CaModel,
    counts: &Matrix,
    policy: SingletonPolicy,
) -> Result<SegmentMap, SegmentError> {
    let p = counts.ncols();
    let aggregated: Vec<Vec<f64>> = result
        .segments
        .iter()
        .map(|s| {
            let mut agg = vec![0.0; p];
            for i in s.clone() {
                for (a, c) in agg.iter_mut().zip(counts.row(i)) {
                    *a += c;
                }
            }
            agg
        })
        .collect();
    let centroids = aggregated
        .iter()
        .map(|agg| model.project_row(agg))
        .collect::<Result<Vec<_>, _>>()?;

    let active: Vec<bool> = result
        .segments
        .iter()
        .map(|s| policy == SingletonPolicy::Active || s.len() > 1)
        .collect();
    let active_rows: Vec<usize> = (0..active.len()).filter(|&k| active[k]).collect();
    if active_rows.is_empty() {
        return Ok(SegmentMap {
            centroids,
            active,
            model: None,
            columns: Vec::new(),
            coords: vec![None; result.segments.len()],
        });
    }
    let columns: Vec<usize> = (0..p)
        .filter(|&j| active_rows.iter().any(|&k| aggregated[k][j] > 0.0))
        .collect();
    let restrict = |agg: &[f64]| columns.iter().map(|&j| agg[j]).collect::<Vec<f64>>();
    let block: Vec<Vec<f64>> = active_rows.iter().map(|&k| restrict(&aggregated[k])).collect();
    let table = ca::normalize(&Matrix::from_rows(&block))?;
    let seg_model = ca::decompose(&table, None)?;
    let mut coords = vec![None; result.segments.len()];
    for (r, &k) in active_rows.iter().enumerate() {
        coords[k] = Some(seg_model.row_coords(r).to_vec());
    }
    for k in (0..active.len()).filter(|&k| !active[k]) {
        coords[k] = seg_model.project_row(&restrict(&aggregated[k])).ok();
    }
    Ok(SegmentMap {
        centroids,
        active,
        model: Some(seg_model),
        columns,
        coords,
    })
}
