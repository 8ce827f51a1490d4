//! Sequence-constrained complete-link agglomerative clustering.
//!
//! Only clusters that are neighbours in the document sequence may merge, so
//! every cluster is a contiguous run of documents. The dissimilarity of two
//! clusters is the largest distance between their members.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use thiserror::Error;

use crate::linalg::euclidean;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClusterError {
    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("cannot cut {n} leaves into {k} segments")]
    InvalidK { k: usize, n: usize },
    #[error("dendrogram is incomplete ({merges} merges for {n} leaves)")]
    Incomplete { merges: usize, n: usize },
}

/// Symmetric pairwise distance matrix stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    /// Euclidean distances between all points, checking shape and finiteness.
    pub fn euclidean<P: AsRef<[f64]>>(points: &[P]) -> Result<Self, ClusterError> {
        validate(points)?;
        let n = points.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = euclidean(points[i].as_ref(), points[j].as_ref());
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Ok(Self { n, d })
    }

    /// Applies `f` to every off-diagonal distance.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let n = self.n;
        let mut d = self.d.clone();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    d[i * n + j] = f(self.d[i * n + j]);
                }
            }
        }
        Self { n, d }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Complete-link dissimilarity between two index ranges.
    pub fn complete_link(&self, a: &Range<usize>, b: &Range<usize>) -> f64 {
        let mut m = 0.0f64;
        for i in a.clone() {
            let row = &self.d[i * self.n..(i + 1) * self.n];
            for &v in &row[b.clone()] {
                m = m.max(v);
            }
        }
        m
    }
}

pub(crate) fn validate<P: AsRef<[f64]>>(points: &[P]) -> Result<(), ClusterError> {
    let expected = points.first().map_or(0, |p| p.as_ref().len());
    for (index, p) in points.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != expected {
            return Err(ClusterError::DimensionMismatch {
                index,
                expected,
                found: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(ClusterError::NonFinite(index));
        }
    }
    Ok(())
}

/// One agglomeration step.
///
/// Cluster ids follow the usual convention: leaves are `0..n`, the cluster
/// created by merge `k` is `n + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    /// Leaf positions covered by the left and right clusters.
    pub left_span: Range<usize>,
    pub right_span: Range<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    pub n_leaves: usize,
    pub merges: Vec<Merge>,
}

/// Active cluster in an adjacency-constrained agglomeration.
#[derive(Debug, Clone)]
pub(crate) struct Chain {
    pub spans: Vec<Range<usize>>,
    pub ids: Vec<usize>,
    /// `links[k]` is the complete link between clusters `k` and `k + 1`.
    pub links: Vec<f64>,
    next_id: usize,
}

impl Chain {
    pub fn new(dist: &DistanceMatrix) -> Self {
        let n = dist.len();
        Self {
            spans: (0..n).map(|i| i..i + 1).collect(),
            ids: (0..n).collect(),
            links: (1..n).map(|i| dist.get(i - 1, i)).collect(),
            next_id: n,
        }
    }

    /// Merges clusters `k` and `k + 1`, updating neighbouring links.
    pub fn merge(&mut self, k: usize, dist: &DistanceMatrix) -> Merge {
        let height = self.links[k];
        let left_span = self.spans[k].clone();
        let right_span = self.spans[k + 1].clone();
        debug_assert_eq!(left_span.end, right_span.start, "clusters must be adjacent");
        let m = Merge {
            left: self.ids[k],
            right: self.ids[k + 1],
            height,
            left_span: left_span.clone(),
            right_span: right_span.clone(),
        };
        let merged = left_span.start..right_span.end;
        self.spans[k] = merged.clone();
        self.spans.remove(k + 1);
        self.ids[k] = self.next_id;
        self.ids.remove(k + 1);
        self.next_id += 1;
        self.links.remove(k);
        // complete link to a neighbour is the max of its links to both parts
        if k > 0 {
            let other = dist.complete_link(&self.spans[k - 1], &right_span);
            self.links[k - 1] = self.links[k - 1].max(other);
        }
        if k < self.links.len() {
            let other = dist.complete_link(&left_span, &self.spans[k + 1]);
            self.links[k] = self.links[k].max(other);
        }
        m
    }
}

/// Runs the constrained agglomeration to a single cluster.
///
/// Ties between equally close adjacent pairs go to the leftmost pair.
pub fn cluster<P: AsRef<[f64]>>(points: &[P]) -> Result<Dendrogram, ClusterError> {
    if points.len() < 2 {
        return Err(ClusterError::TooFewPoints {
            needed: 2,
            found: points.len(),
        });
    }
    let dist = DistanceMatrix::euclidean(points)?;
    Ok(cluster_distances(&dist))
}

/// Same as [`cluster`] over a precomputed distance matrix.
pub fn cluster_distances(dist: &DistanceMatrix) -> Dendrogram {
    let mut chain = Chain::new(dist);
    let mut merges = Vec::with_capacity(dist.len().saturating_sub(1));
    while chain.spans.len() > 1 {
        let k = argmin_leftmost(chain.links.iter().copied()).expect("at least one link");
        merges.push(chain.merge(k, dist));
    }
    Dendrogram {
        n_leaves: dist.len(),
        merges,
    }
}

pub(crate) fn argmin_leftmost(values: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (k, v) in values.enumerate() {
        match best {
            Some((_, b)) if v >= b => {}
            _ => best = Some((k, v)),
        }
    }
    best.map(|(k, _)| k)
}

impl Dendrogram {
    /// Splits the sequence into `k` contiguous segments by undoing the
    /// `k - 1` last (highest) merges.
    pub fn cut(&self, k: usize) -> Result<Vec<Range<usize>>, ClusterError> {
        let n = self.n_leaves;
        if k == 0 || k > n {
            return Err(ClusterError::InvalidK { k, n });
        }
        if self.merges.len() + 1 != n {
            return Err(ClusterError::Incomplete {
                merges: self.merges.len(),
                n,
            });
        }
        // a boundary between leaves p-1 and p survives iff the merge that
        // removed it is among the k-1 highest
        let mut cut_after = vec![false; n];
        for m in &self.merges[n - k..] {
            cut_after[m.left_span.end - 1] = true;
        }
        let mut segments = Vec::with_capacity(k);
        let mut start = 0;
        for (p, &cut) in cut_after.iter().enumerate() {
            if cut || p == n - 1 {
                segments.push(start..p + 1);
                start = p + 1;
            }
        }
        Ok(segments)
    }

    pub fn heights(&self) -> impl Iterator<Item = f64> + '_ {
        self.merges.iter().map(|m| m.height)
    }
}
