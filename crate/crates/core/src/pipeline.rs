//! A fitted analysis of a thresholded term-document matrix.
//!
//! The factor space is fitted on principal documents crossed by the terms
//! they use. Initiating documents and campaign indicators are placed in it
//! afterwards as supplementary elements and never influence the fit.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::ca::{self, CaError, CaModel, ProbabilityTable};
use crate::cluster::{self, Dendrogram, DistanceMatrix};
use crate::impact::{
    self, CampaignImpact, Dims, ImpactError, ImpactReport, PairwiseStats, SkipReason,
};
use crate::linalg::Matrix;
use crate::segment::{self, PermTestConfig, SegmentMap, SegmentationResult, SingletonPolicy};
use crate::text::{ColumnRole, RowRole, TermDocMatrix};
use crate::Error;

#[derive(Debug, Clone)]
pub struct Analysis {
    pub matrix: TermDocMatrix,
    /// Matrix rows analysed as principal, in sequence order.
    pub principal_rows: Vec<usize>,
    /// Term columns with positive mass over the principal rows.
    pub principal_cols: Vec<usize>,
    /// Principal block of counts.
    pub counts: Matrix,
    pub table: ProbabilityTable,
    pub model: CaModel,
}

impl Analysis {
    /// Fits the factor space. Term columns used only by supplementary rows
    /// are left out of the principal block.
    pub fn fit(matrix: TermDocMatrix) -> Result<Self, Error> {
        let principal_rows = matrix.rows_with_role(RowRole::Principal);
        let term_cols = matrix.term_columns();
        let mut used = BTreeSet::new();
        for &i in &principal_rows {
            for &(j, _) in &matrix.entries[i] {
                used.insert(j);
            }
        }
        let principal_cols: Vec<usize> = term_cols.into_iter().filter(|j| used.contains(j)).collect();
        let counts = matrix.dense(&principal_rows, &principal_cols);
        let table = ca::normalize(&counts)?;
        let model = ca::decompose(&table, None)?;
        Ok(Self {
            matrix,
            principal_rows,
            principal_cols,
            counts,
            table,
            model,
        })
    }

    /// Factor coordinates of the principal rows, restricted to `dims`.
    pub fn principal_points(&self, dims: Dims) -> Vec<&[f64]> {
        (0..self.principal_rows.len())
            .map(|r| dims.take(self.model.row_coords(r)))
            .collect()
    }

    /// Sequence numbers of the principal rows.
    pub fn principal_seq_nos(&self) -> Vec<u32> {
        self.principal_rows.iter().map(|&i| self.matrix.rows[i].seq_no).collect()
    }

    /// Projects any matrix row onto the principal columns as a supplementary row.
    pub fn project_matrix_row(&self, row: usize) -> Result<Vec<f64>, CaError> {
        self.model.project_row(&self.matrix.row_counts(row, &self.principal_cols))
    }

    /// Principal-row indices (positions in `principal_rows`) of a campaign.
    pub fn campaign_members(&self, campaign: u32) -> Vec<usize> {
        (0..self.principal_rows.len())
            .filter(|&r| self.matrix.rows[self.principal_rows[r]].campaign == Some(campaign))
            .collect()
    }

    pub fn campaigns(&self) -> Vec<u32> {
        self.matrix
            .columns
            .iter()
            .filter_map(|c| match c.role {
                ColumnRole::CampaignIndicator(k) => Some(k),
                ColumnRole::Term => None,
            })
            .collect()
    }

    pub fn distances(&self, dims: Dims) -> DistanceMatrix {
        DistanceMatrix::euclidean(&self.principal_points(dims)).expect("factor coordinates are finite")
    }

    /// Constrained complete-link dendrogram of the principal rows.
    pub fn cluster(&self, dims: Dims) -> Result<Dendrogram, Error> {
        Ok(cluster::cluster(&self.principal_points(dims))?)
    }

    pub fn segment(&self, config: &PermTestConfig, dims: Dims) -> Result<SegmentationResult, Error> {
        Ok(segment::segment(&self.principal_points(dims), config)?)
    }

    pub fn segment_map(&self, result: &SegmentationResult, policy: SingletonPolicy) -> Result<SegmentMap, Error> {
        Ok(segment::segment_map(result, &self.model, &self.counts, policy)?)
    }

    /// Impact of every campaign's initiating document.
    pub fn impact(&self) -> Result<ImpactReport, Error> {
        let pairwise = PairwiseStats::from_points(&self.principal_points(Dims::Full))?;
        let mut campaigns = Vec::new();
        let mut skipped = Vec::new();
        for c in self.campaigns() {
            let initiating = (0..self.matrix.n_rows()).find(|&i| {
                let r = &self.matrix.rows[i];
                r.role == RowRole::Supplementary && r.campaign == Some(c)
            });
            let Some(init_row) = initiating else {
                skipped.push((c, SkipReason::NoInitiating));
                continue;
            };
            let members = self.campaign_members(c);
            if members.is_empty() {
                skipped.push((c, SkipReason::NoMembers));
                continue;
            }
            let coords = match self.project_matrix_row(init_row) {
                Ok(x) => x,
                Err(CaError::EmptyProfile) => {
                    skipped.push((c, SkipReason::NoInitiating));
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let centroid = impact::campaign_centroid(&self.model, c, &members)?;
            let distance_full = impact::impact_distance(&coords, &centroid, Dims::Full);
            let significance = impact::significance(distance_full, pairwise.mean, pairwise.stdev)?;
            campaigns.push(CampaignImpact {
                campaign: c,
                initiating_row: init_row,
                initiating_seq_no: self.matrix.rows[init_row].seq_no,
                n_members: members.len(),
                distance_plane: impact::impact_distance(&coords, &centroid, Dims::Plane),
                distance_full,
                significance,
                percent_pairs_greater: pairwise.percent_greater(distance_full),
                initiating_coords: coords,
                centroid,
            });
        }
        Ok(ImpactReport {
            campaigns,
            skipped,
            pairwise,
        })
    }

    /// Separate analysis of one campaign's documents, initiating one included.
    pub fn drilldown(&self, campaign: u32, top_docs: usize, top_terms: usize) -> Result<Drilldown, Error> {
        drilldown(&self.matrix, campaign, top_docs, top_terms)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranked {
    /// Matrix row (for documents) or matrix column (for terms).
    pub index: usize,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Drilldown {
    pub campaign: u32,
    /// Matrix rows analysed, in sequence order.
    pub rows: Vec<usize>,
    /// Matrix term columns occurring at least once in those rows.
    pub columns: Vec<usize>,
    pub model: CaModel,
    /// Documents by absolute contribution to the plane of factors 1 and 2.
    pub top_docs: Vec<Ranked>,
    /// Terms by distance from the origin in the plane of factors 1 and 2.
    pub top_terms: Vec<Ranked>,
}

pub fn drilldown(matrix: &TermDocMatrix, campaign: u32, top_docs: usize, top_terms: usize) -> Result<Drilldown, Error> {
    let rows: Vec<usize> = (0..matrix.n_rows())
        .filter(|&i| matrix.rows[i].campaign == Some(campaign))
        .collect();
    if rows.is_empty() {
        return Err(ImpactError::EmptyCampaign(campaign).into());
    }
    let mut used = BTreeSet::new();
    for &i in &rows {
        for &(j, _) in &matrix.entries[i] {
            if matrix.columns[j].role == ColumnRole::Term {
                used.insert(j);
            }
        }
    }
    let columns: Vec<usize> = used.into_iter().collect();
    let table = ca::normalize(&matrix.dense(&rows, &columns))?;
    let model = ca::decompose(&table, None)?;

    let plane = model.dim().min(2);
    let ctr = model.row_contributions();
    let mut docs: Vec<Ranked> = rows
        .iter()
        .enumerate()
        .map(|(r, &i)| Ranked {
            index: i,
            score: ctr.row(r)[..plane].iter().sum(),
        })
        .collect();
    let mut terms: Vec<Ranked> = columns
        .iter()
        .enumerate()
        .map(|(c, &j)| Ranked {
            index: j,
            score: libm::sqrt(model.col_coords(c)[..plane].iter().map(|x| x * x).sum()),
        })
        .collect();
    let by_score = |a: &Ranked, b: &Ranked| b.score.total_cmp(&a.score).then(a.index.cmp(&b.index));
    docs.sort_by(by_score);
    terms.sort_by(by_score);
    docs.truncate(top_docs);
    terms.truncate(top_terms);
    Ok(Drilldown {
        campaign,
        rows,
        columns,
        model,
        top_docs: docs,
        top_terms: terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{build_vocabulary, threshold_matrix, Document, TokenizerConfig};
    use alloc::vec;

    fn matrix() -> TermDocMatrix {
        let docs = vec![
            Document::new(1, "rain water water").with_campaign(1).initiating(),
            Document::new(2, "rain water tap").with_campaign(1),
            Document::new(3, "water tap drink").with_campaign(1),
            Document::new(4, "rain cloud").with_campaign(1),
            Document::new(5, "bus train bike").with_campaign(2).initiating(),
            Document::new(6, "bus train").with_campaign(2),
            Document::new(7, "bike lane train").with_campaign(2),
            Document::new(8, "bus lane cloud").with_campaign(2),
        ];
        let tk = TokenizerConfig::default();
        let v = build_vocabulary(&docs, &tk);
        threshold_matrix(&docs, &v, &tk, 1, 1).unwrap()
    }

    #[test]
    fn fit_and_impact() {
        let a = Analysis::fit(matrix()).unwrap();
        assert_eq!(a.principal_rows.len(), 6);
        // "drink" occurs in a principal row; every principal column has mass
        assert!(a.counts.column_sums().iter().all(|&s| s > 0.0));
        let r = a.impact().unwrap();
        assert_eq!(r.campaigns.len(), 2);
        for c in &r.campaigns {
            assert!(c.distance_plane <= c.distance_full + 1e-12);
        }
        assert_eq!(r.pairwise.n_pairs(), 15);
    }

    #[test]
    fn drilldown_dominant_term() {
        let m = matrix();
        let d = drilldown(&m, 1, 10, 15).unwrap();
        assert_eq!(d.rows.len(), 4);
        assert!(d.top_docs.len() <= 4);
        assert!(matches!(drilldown(&m, 9, 10, 15), Err(Error::Impact(ImpactError::EmptyCampaign(9)))));
    }
}
