//! Impact of initiating documents.
//!
//! Impact is the Euclidean distance, in factor space, between an initiating
//! document and the centre of gravity of the campaign it started. It is
//! judged against the distribution of all pairwise distances between
//! ordinary (non-initiating) documents.

use alloc::vec::Vec;

use thiserror::Error;

use crate::ca::{CaError, CaModel};
use crate::linalg::euclidean;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImpactError {
    #[error("campaign {0} has no principal member")]
    EmptyCampaign(u32),
    #[error("pairwise distances have zero spread")]
    DegenerateSpread,
    #[error("need at least two points for pairwise statistics")]
    TooFewPoints,
    #[error(transparent)]
    Ca(#[from] CaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dims {
    /// Factors 1 and 2 (fewer if the space is smaller).
    Plane,
    /// All factors.
    #[default]
    Full,
}

impl Dims {
    pub fn take(self, coords: &[f64]) -> &[f64] {
        match self {
            Dims::Plane => &coords[..coords.len().min(2)],
            Dims::Full => coords,
        }
    }
}

/// Mass-weighted centre of gravity of the given principal rows.
pub fn campaign_centroid(model: &CaModel, campaign: u32, members: &[usize]) -> Result<Vec<f64>, ImpactError> {
    if members.is_empty() {
        return Err(ImpactError::EmptyCampaign(campaign));
    }
    Ok(model.category_barycentre(members)?)
}

pub fn impact_distance(initiating: &[f64], centroid: &[f64], dims: Dims) -> f64 {
    euclidean(dims.take(initiating), dims.take(centroid))
}

/// Mean and population standard deviation of all pairwise distances, plus
/// the sorted distances for empirical quantiles.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseStats {
    pub n_points: usize,
    pub mean: f64,
    pub stdev: f64,
    sorted: Vec<f64>,
}

impl PairwiseStats {
    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self, ImpactError> {
        let n = points.len();
        if n < 2 {
            return Err(ImpactError::TooFewPoints);
        }
        let mut d = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                d.push(euclidean(points[i].as_ref(), points[j].as_ref()));
            }
        }
        let count = d.len() as f64;
        let mean = d.iter().sum::<f64>() / count;
        let var = d.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / count;
        d.sort_unstable_by(f64::total_cmp);
        Ok(Self {
            n_points: n,
            mean,
            stdev: libm::sqrt(var),
            sorted: d,
        })
    }

    pub fn n_pairs(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted_distances(&self) -> &[f64] {
        &self.sorted
    }

    /// Percentage of pairwise distances strictly greater than `d`.
    pub fn percent_greater(&self, d: f64) -> f64 {
        let below_or_eq = self.sorted.partition_point(|&x| x <= d);
        100.0 * (self.sorted.len() - below_or_eq) as f64 / self.sorted.len() as f64
    }

    /// Empirical quantile (nearest rank) of the pairwise distances, `q` in [0, 1].
    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.sorted.len();
        let rank = libm::ceil(q.clamp(0.0, 1.0) * n as f64) as usize;
        self.sorted[rank.clamp(1, n) - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Significance {
    pub z: f64,
    /// Gaussian mass below `-|z|`, in percent.
    pub one_sided_tail_percent: f64,
    /// Gaussian mass beyond `|z|` on both sides, in percent.
    pub two_sided_tail_percent: f64,
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / core::f64::consts::SQRT_2)
}

/// z-score of a distance against pairwise statistics, with Gaussian tails.
pub fn significance(distance: f64, mean: f64, stdev: f64) -> Result<Significance, ImpactError> {
    if stdev.is_nan() || stdev <= 0.0 {
        return Err(ImpactError::DegenerateSpread);
    }
    let z = (distance - mean) / stdev;
    let one = normal_cdf(-libm::fabs(z));
    Ok(Significance {
        z,
        one_sided_tail_percent: 100.0 * one,
        two_sided_tail_percent: 200.0 * one,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignImpact {
    pub campaign: u32,
    /// Row index (in the term-document matrix) of the initiating document.
    pub initiating_row: usize,
    pub initiating_seq_no: u32,
    pub n_members: usize,
    pub initiating_coords: Vec<f64>,
    pub centroid: Vec<f64>,
    pub distance_plane: f64,
    pub distance_full: f64,
    pub significance: Significance,
    /// Percentage of pairwise document distances exceeding `distance_full`.
    pub percent_pairs_greater: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpactReport {
    pub campaigns: Vec<CampaignImpact>,
    /// Campaigns that could not be assessed, with the reason.
    pub skipped: Vec<(u32, SkipReason)>,
    pub pairwise: PairwiseStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkipReason {
    /// The campaign has no initiating document in the analysed rows.
    NoInitiating,
    /// The campaign has no principal member document.
    NoMembers,
}

impl ImpactReport {
    /// Campaigns sorted by full-space distance, closest (most impact) first.
    pub fn ranking(&self) -> Vec<u32> {
        let mut order: Vec<&CampaignImpact> = self.campaigns.iter().collect();
        order.sort_by(|a, b| a.distance_full.total_cmp(&b.distance_full).then(a.campaign.cmp(&b.campaign)));
        order.iter().map(|c| c.campaign).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significance_at_mean() {
        let s = significance(5.0, 5.0, 2.0).unwrap();
        assert_eq!(s.z, 0.0);
        assert!((s.two_sided_tail_percent - 100.0).abs() < 1e-12);
        assert!((s.one_sided_tail_percent - 50.0).abs() < 1e-12);
        assert_eq!(significance(1.0, 1.0, 0.0), Err(ImpactError::DegenerateSpread));
    }

    #[test]
    fn normal_cdf_values() {
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((normal_cdf(-1.959963984540054) - 0.025).abs() < 1e-12);
    }

    #[test]
    fn pairwise_stats_small() {
        let s = PairwiseStats::from_points(&[[0.0], [1.0], [3.0]]).unwrap();
        // distances 1, 3, 2
        assert!((s.mean - 2.0).abs() < 1e-15);
        assert!((s.stdev - libm::sqrt(2.0 / 3.0)).abs() < 1e-15);
        assert_eq!(s.percent_greater(1.5), 200.0 / 3.0);
        assert_eq!(s.quantile(0.5), 2.0);
        assert_eq!(s.quantile(0.0), 1.0);
        assert_eq!(s.quantile(1.0), 3.0);
        assert_eq!(PairwiseStats::from_points(&[[0.0]]), Err(ImpactError::TooFewPoints));
    }

    #[test]
    fn plane_is_prefix() {
        let a = [1.0, 2.0, 3.0];
        let b = [0.0, 0.0, 0.0];
        assert!(impact_distance(&a, &b, Dims::Plane) <= impact_distance(&a, &b, Dims::Full));
        assert_eq!(Dims::Plane.take(&[1.0]), &[1.0]);
    }
}
