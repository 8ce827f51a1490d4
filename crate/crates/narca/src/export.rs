//! Stage reports (JSON) and their plot-friendly CSV companions.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use narca_core::ca::CaModel;
use narca_core::cluster::Dendrogram;
use narca_core::impact::{Dims, ImpactReport, SkipReason};
use narca_core::pipeline::{Analysis, Drilldown};
use narca_core::segment::{MergeTest, PermTestConfig, SegmentMap, SegmentationResult};
use narca_core::text::{ColumnRole, RowRole, TermDocMatrix, Vocabulary};
use serde::Serialize;

use crate::error::CliError;
use crate::matrix_io::write_json;

fn fnum(x: f64) -> String {
    format!("{x}")
}

struct Table {
    path: PathBuf,
    writer: csv::Writer<std::fs::File>,
}

impl Table {
    fn create(path: PathBuf, header: &[String]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_path(&path).map_err(|e| CliError::data(&path, e))?;
        writer.write_record(header).map_err(|e| CliError::data(&path, e))?;
        Ok(Self { path, writer })
    }

    fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(|e| CliError::data(&self.path, e))
    }

    fn finish(mut self) -> Result<PathBuf, CliError> {
        self.writer.flush().map_err(|e| CliError::io(&self.path, e))?;
        Ok(self.path)
    }
}

fn header(fixed: &[&str], prefix: &str, k: usize) -> Vec<String> {
    fixed
        .iter()
        .map(|s| s.to_string())
        .chain((1..=k).map(|s| format!("{prefix}{s}")))
        .collect()
}

fn role_name(role: RowRole) -> &'static str {
    match role {
        RowRole::Principal => "principal",
        RowRole::Supplementary => "supplementary",
    }
}

// ---- ingest ----

#[derive(Serialize)]
pub struct IngestReport {
    pub n_documents: usize,
    pub merged_initiating: Vec<Vec<u32>>,
    pub n_terms_total: usize,
    pub n_terms_retained: usize,
    pub min_global_freq: u32,
    pub min_doc_count: u32,
    pub n_principal_rows: usize,
    pub n_supplementary_rows: usize,
    pub n_campaigns: usize,
    pub dropped_docs: Vec<u32>,
}

pub fn write_vocabulary(dir: &Path, vocab: &Vocabulary, m: &TermDocMatrix) -> Result<PathBuf, CliError> {
    let retained: std::collections::BTreeSet<&str> = m
        .columns
        .iter()
        .filter(|c| c.role == ColumnRole::Term)
        .map(|c| c.label.as_str())
        .collect();
    let mut t = Table::create(
        dir.join("vocabulary.csv"),
        &header(&["term", "global_freq", "doc_count", "retained"], "", 0),
    )?;
    for k in 0..vocab.len() {
        let term = &vocab.terms[k];
        t.row([
            term.clone(),
            vocab.global_freq[k].to_string(),
            vocab.doc_count[k].to_string(),
            u8::from(retained.contains(term.as_str())).to_string(),
        ])?;
    }
    t.finish()
}

// ---- correspondence analysis ----

#[derive(Serialize)]
pub struct FactorReport {
    pub factor: usize,
    pub eigenvalue: f64,
    pub percent_inertia: f64,
    /// Two-decimal rendering for display.
    pub percent_display: String,
    pub cumulative_percent: f64,
}

#[derive(Serialize)]
pub struct RowReport {
    pub seq_no: u32,
    pub role: &'static str,
    pub campaign: Option<u32>,
    pub mass: f64,
    pub coords: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contributions: Option<Vec<f64>>,
    pub cos2: Vec<f64>,
}

#[derive(Serialize)]
pub struct ColumnReport {
    pub label: String,
    pub role: &'static str,
    pub mass: f64,
    pub coords: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contributions: Option<Vec<f64>>,
    pub cos2: Vec<f64>,
}

#[derive(Serialize)]
pub struct CaReport {
    pub n_principal_rows: usize,
    pub n_principal_columns: usize,
    pub total_inertia: f64,
    pub factors: Vec<FactorReport>,
    pub rows: Vec<RowReport>,
    pub columns: Vec<ColumnReport>,
}

pub fn factors(model: &CaModel) -> Vec<FactorReport> {
    let mut cumulative = 0.0;
    model
        .eigenvalues
        .iter()
        .zip(model.percent_inertia())
        .enumerate()
        .map(|(s, (&eigenvalue, percent))| {
            cumulative += percent;
            FactorReport {
                factor: s + 1,
                eigenvalue,
                percent_inertia: percent,
                percent_display: format!("{percent:.2}"),
                cumulative_percent: cumulative,
            }
        })
        .collect()
}

fn cos2(coords: &[f64]) -> Vec<f64> {
    let norm: f64 = coords.iter().map(|x| x * x).sum();
    coords
        .iter()
        .map(|x| if norm > 0.0 { x * x / norm } else { 0.0 })
        .collect()
}

pub fn ca_report(a: &Analysis) -> Result<CaReport, CliError> {
    let m = &a.matrix;
    let model = &a.model;
    let ctr = model.row_contributions();
    let cor = model.row_correlations();
    let mut principal = BTreeMap::new();
    for (r, &i) in a.principal_rows.iter().enumerate() {
        principal.insert(i, r);
    }
    let mut rows = Vec::with_capacity(m.n_rows());
    for i in 0..m.n_rows() {
        let meta = &m.rows[i];
        let report = match principal.get(&i) {
            Some(&r) => RowReport {
                seq_no: meta.seq_no,
                role: role_name(meta.role),
                campaign: meta.campaign,
                mass: model.row_masses[r],
                coords: model.row_coords(r).to_vec(),
                contributions: Some(ctr.row(r).to_vec()),
                cos2: cor.row(r).to_vec(),
            },
            None => {
                let coords = match a.project_matrix_row(i) {
                    Ok(c) => c,
                    // no principal term left to place the row with
                    Err(narca_core::ca::CaError::EmptyProfile) => continue,
                    Err(e) => return Err(narca_core::Error::from(e).into()),
                };
                RowReport {
                    seq_no: meta.seq_no,
                    role: role_name(meta.role),
                    campaign: meta.campaign,
                    mass: 0.0,
                    cos2: cos2(&coords),
                    coords,
                    contributions: None,
                }
            }
        };
        rows.push(report);
    }

    let cctr = model.col_contributions();
    let ccor = model.col_correlations();
    let mut columns: Vec<ColumnReport> = a
        .principal_cols
        .iter()
        .enumerate()
        .map(|(c, &j)| ColumnReport {
            label: m.columns[j].label.clone(),
            role: "term",
            mass: model.col_masses[c],
            coords: model.col_coords(c).to_vec(),
            contributions: Some(cctr.row(c).to_vec()),
            cos2: ccor.row(c).to_vec(),
        })
        .collect();
    for campaign in a.campaigns() {
        let j = m.indicator_column(campaign).expect("campaign has an indicator column");
        let values: Vec<f64> = a.principal_rows.iter().map(|&i| m.get(i, j) as f64).collect();
        if values.iter().all(|&v| v == 0.0) {
            continue;
        }
        let coords = model.project_column(&values).map_err(narca_core::Error::from)?;
        columns.push(ColumnReport {
            label: m.columns[j].label.clone(),
            role: "campaign_indicator",
            mass: 0.0,
            cos2: cos2(&coords),
            coords,
            contributions: None,
        });
    }
    Ok(CaReport {
        n_principal_rows: model.n_rows(),
        n_principal_columns: model.n_cols(),
        total_inertia: model.total_inertia,
        factors: factors(model),
        rows,
        columns,
    })
}

pub fn write_ca(dir: &Path, report: &CaReport, dim: usize) -> Result<Vec<PathBuf>, CliError> {
    let json = dir.join("ca.json");
    write_json(&json, report)?;

    let mut inertia = Table::create(
        dir.join("ca_inertia.csv"),
        &header(&["factor", "eigenvalue", "percent_inertia", "percent_display", "cumulative_percent"], "", 0),
    )?;
    for f in &report.factors {
        inertia.row([
            f.factor.to_string(),
            fnum(f.eigenvalue),
            fnum(f.percent_inertia),
            f.percent_display.clone(),
            fnum(f.cumulative_percent),
        ])?;
    }

    let mut h = header(&["seq_no", "role", "campaign", "mass"], "F", dim);
    h.extend((1..=dim).map(|s| format!("ctr{s}")));
    h.extend((1..=dim).map(|s| format!("cos2_{s}")));
    let mut rows = Table::create(dir.join("ca_rows.csv"), &h)?;
    for r in &report.rows {
        let mut rec = vec![
            r.seq_no.to_string(),
            r.role.to_string(),
            r.campaign.map(|c| c.to_string()).unwrap_or_default(),
            fnum(r.mass),
        ];
        rec.extend(r.coords.iter().copied().map(fnum));
        match &r.contributions {
            Some(c) => rec.extend(c.iter().copied().map(fnum)),
            None => rec.extend(std::iter::repeat_n(String::new(), dim)),
        }
        rec.extend(r.cos2.iter().copied().map(fnum));
        rows.row(rec)?;
    }

    let mut h = header(&["label", "role", "mass"], "G", dim);
    h.extend((1..=dim).map(|s| format!("ctr{s}")));
    h.extend((1..=dim).map(|s| format!("cos2_{s}")));
    let mut cols = Table::create(dir.join("ca_columns.csv"), &h)?;
    for c in &report.columns {
        let mut rec = vec![c.label.clone(), c.role.to_string(), fnum(c.mass)];
        rec.extend(c.coords.iter().copied().map(fnum));
        match &c.contributions {
            Some(x) => rec.extend(x.iter().copied().map(fnum)),
            None => rec.extend(std::iter::repeat_n(String::new(), dim)),
        }
        rec.extend(c.cos2.iter().copied().map(fnum));
        cols.row(rec)?;
    }
    Ok(vec![json, inertia.finish()?, rows.finish()?, cols.finish()?])
}

// ---- dendrogram ----

#[derive(Serialize)]
pub struct MergeReport {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
    pub left_span: [usize; 2],
    pub right_span: [usize; 2],
}

#[derive(Serialize)]
pub struct DendrogramReport {
    pub n_leaves: usize,
    pub dims: &'static str,
    /// Sequence number of each leaf, in order.
    pub leaves: Vec<u32>,
    pub merges: Vec<MergeReport>,
}

pub fn dims_name(dims: Dims) -> &'static str {
    match dims {
        Dims::Plane => "plane",
        Dims::Full => "full",
    }
}

pub fn dendrogram_report(d: &Dendrogram, leaves: Vec<u32>, dims: Dims) -> DendrogramReport {
    DendrogramReport {
        n_leaves: d.n_leaves,
        dims: dims_name(dims),
        leaves,
        merges: d
            .merges
            .iter()
            .map(|m| MergeReport {
                left: m.left,
                right: m.right,
                height: m.height,
                size: m.right_span.end - m.left_span.start,
                left_span: [m.left_span.start, m.left_span.end],
                right_span: [m.right_span.start, m.right_span.end],
            })
            .collect(),
    }
}

/// Newick string with leaves named by sequence number and branch lengths
/// equal to height differences.
pub fn newick(d: &Dendrogram, leaves: &[u32]) -> String {
    let n = d.n_leaves;
    let height = |id: usize| if id < n { 0.0 } else { d.merges[id - n].height };
    // iterative post-order build of each cluster's subtree string
    let mut text: Vec<Option<String>> = vec![None; n + d.merges.len()];
    for (i, slot) in text.iter_mut().take(n).enumerate() {
        *slot = Some(leaves[i].to_string());
    }
    for (k, m) in d.merges.iter().enumerate() {
        let l = text[m.left].take().expect("left subtree built");
        let r = text[m.right].take().expect("right subtree built");
        text[n + k] = Some(format!(
            "({l}:{},{r}:{})",
            fnum(m.height - height(m.left)),
            fnum(m.height - height(m.right))
        ));
    }
    let root = if d.merges.is_empty() { 0 } else { n + d.merges.len() - 1 };
    format!("{};", text[root].take().unwrap_or_default())
}

pub fn write_dendrogram(dir: &Path, d: &Dendrogram, leaves: Vec<u32>, dims: Dims) -> Result<Vec<PathBuf>, CliError> {
    let json = dir.join("dendrogram.json");
    let nwk = dir.join("dendrogram.nwk");
    std::fs::write(&nwk, newick(d, &leaves) + "\n").map_err(|e| CliError::io(&nwk, e))?;
    write_json(&json, &dendrogram_report(d, leaves, dims))?;
    let mut t = Table::create(dir.join("dendrogram.csv"), &header(&["left", "right", "height", "size"], "", 0))?;
    for m in &d.merges {
        t.row([
            m.left.to_string(),
            m.right.to_string(),
            fnum(m.height),
            (m.right_span.end - m.left_span.start).to_string(),
        ])?;
    }
    Ok(vec![json, nwk, t.finish()?])
}

// ---- segmentation ----

#[derive(Serialize)]
pub struct SegmentReport {
    pub index: usize,
    pub start: usize,
    pub end: usize,
    pub first_seq_no: u32,
    pub last_seq_no: u32,
    pub size: usize,
    pub active: bool,
    /// Mass-weighted centre of the member documents in the document factor space.
    pub centroid: Vec<f64>,
    /// Coordinates in the segment factor space.
    pub coords: Option<Vec<f64>>,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestReport {
    AutoFused,
    Tested { h: usize, p: f64 },
}

#[derive(Serialize)]
pub struct SegMergeReport {
    pub left_span: [usize; 2],
    pub right_span: [usize; 2],
    pub height: f64,
    pub test: TestReport,
}

#[derive(Serialize)]
pub struct BlockedReport {
    pub position: usize,
    pub left_span: [usize; 2],
    pub right_span: [usize; 2],
    pub height: f64,
    pub h: usize,
    pub p: f64,
}

#[derive(Serialize)]
pub struct SegmentationReport {
    pub alpha: f64,
    pub n_permutations: usize,
    pub seed: u64,
    pub dims: &'static str,
    pub n_segments: usize,
    pub segments: Vec<SegmentReport>,
    pub merges: Vec<SegMergeReport>,
    pub blocked: Vec<BlockedReport>,
    pub segment_factors: Vec<FactorReport>,
}

pub fn segmentation_report(
    r: &SegmentationResult,
    map: &SegmentMap,
    seq_nos: &[u32],
    config: &PermTestConfig,
    dims: Dims,
) -> SegmentationReport {
    SegmentationReport {
        alpha: config.alpha,
        n_permutations: config.n_permutations,
        seed: config.rng_seed,
        dims: dims_name(dims),
        n_segments: r.segments.len(),
        segments: r
            .segments
            .iter()
            .enumerate()
            .map(|(k, s)| SegmentReport {
                index: k,
                start: s.start,
                end: s.end,
                first_seq_no: seq_nos[s.start],
                last_seq_no: seq_nos[s.end - 1],
                size: s.len(),
                active: map.active[k],
                centroid: map.centroids[k].clone(),
                coords: map.coords[k].clone(),
            })
            .collect(),
        merges: r
            .merges
            .iter()
            .map(|m| SegMergeReport {
                left_span: [m.left_span.start, m.left_span.end],
                right_span: [m.right_span.start, m.right_span.end],
                height: m.height,
                test: match m.test {
                    MergeTest::AutoFused => TestReport::AutoFused,
                    MergeTest::Tested { h, p } => TestReport::Tested { h, p },
                },
            })
            .collect(),
        blocked: r
            .blocked
            .iter()
            .map(|b| BlockedReport {
                position: b.position,
                left_span: [b.left_span.start, b.left_span.end],
                right_span: [b.right_span.start, b.right_span.end],
                height: b.height,
                h: b.h,
                p: b.p,
            })
            .collect(),
        segment_factors: map.model.as_ref().map(factors).unwrap_or_default(),
    }
}

pub fn write_segmentation(dir: &Path, report: &SegmentationReport, labels: &[usize], seq_nos: &[u32]) -> Result<Vec<PathBuf>, CliError> {
    let json = dir.join("segmentation.json");
    write_json(&json, report)?;
    let mut seg = Table::create(dir.join("segments.csv"), &header(&["seq_no", "segment"], "", 0))?;
    for (s, l) in seq_nos.iter().zip(labels) {
        seg.row([s.to_string(), l.to_string()])?;
    }
    let dim = report
        .segments
        .iter()
        .filter_map(|s| s.coords.as_ref().map(Vec::len))
        .max()
        .unwrap_or(0);
    let mut map = Table::create(
        dir.join("segment_map.csv"),
        &header(&["segment", "first_seq_no", "last_seq_no", "size", "active"], "F", dim),
    )?;
    for s in &report.segments {
        let mut rec = vec![
            s.index.to_string(),
            s.first_seq_no.to_string(),
            s.last_seq_no.to_string(),
            s.size.to_string(),
            u8::from(s.active).to_string(),
        ];
        let coords = s.coords.clone().unwrap_or_default();
        rec.extend((0..dim).map(|k| coords.get(k).copied().map(fnum).unwrap_or_default()));
        map.row(rec)?;
    }
    Ok(vec![json, seg.finish()?, map.finish()?])
}

// ---- impact ----

#[derive(Serialize)]
pub struct PairwiseReport {
    pub n_points: usize,
    pub n_pairs: usize,
    pub mean: f64,
    pub stdev: f64,
    pub mean_minus_stdev: f64,
    pub mean_minus_2_stdev: f64,
    /// Empirical deciles 0.1 through 0.9.
    pub deciles: Vec<f64>,
}

#[derive(Serialize)]
pub struct CampaignReport {
    pub campaign: u32,
    pub initiating_seq_no: u32,
    pub n_members: usize,
    pub distance_plane: f64,
    pub distance_full: f64,
    pub z: f64,
    pub one_sided_tail_percent: f64,
    pub two_sided_tail_percent: f64,
    pub percent_pairs_greater: f64,
    pub initiating_coords_plane: Vec<f64>,
    pub centroid_plane: Vec<f64>,
}

#[derive(Serialize)]
pub struct SkipReport {
    pub campaign: u32,
    pub reason: &'static str,
}

#[derive(Serialize)]
pub struct ImpactJson {
    pub pairwise: PairwiseReport,
    pub campaigns: Vec<CampaignReport>,
    /// Campaigns by full-space distance, most impact first.
    pub ranking: Vec<u32>,
    pub skipped: Vec<SkipReport>,
}

pub fn impact_report(r: &ImpactReport) -> ImpactJson {
    let p = &r.pairwise;
    ImpactJson {
        pairwise: PairwiseReport {
            n_points: p.n_points,
            n_pairs: p.n_pairs(),
            mean: p.mean,
            stdev: p.stdev,
            mean_minus_stdev: p.mean - p.stdev,
            mean_minus_2_stdev: p.mean - 2.0 * p.stdev,
            deciles: (1..=9).map(|k| p.quantile(k as f64 / 10.0)).collect(),
        },
        campaigns: r
            .campaigns
            .iter()
            .map(|c| CampaignReport {
                campaign: c.campaign,
                initiating_seq_no: c.initiating_seq_no,
                n_members: c.n_members,
                distance_plane: c.distance_plane,
                distance_full: c.distance_full,
                z: c.significance.z,
                one_sided_tail_percent: c.significance.one_sided_tail_percent,
                two_sided_tail_percent: c.significance.two_sided_tail_percent,
                percent_pairs_greater: c.percent_pairs_greater,
                initiating_coords_plane: Dims::Plane.take(&c.initiating_coords).to_vec(),
                centroid_plane: Dims::Plane.take(&c.centroid).to_vec(),
            })
            .collect(),
        ranking: r.ranking(),
        skipped: r
            .skipped
            .iter()
            .map(|&(campaign, reason)| SkipReport {
                campaign,
                reason: match reason {
                    SkipReason::NoInitiating => "no_initiating_document",
                    SkipReason::NoMembers => "no_member_documents",
                },
            })
            .collect(),
    }
}

pub fn write_impact(dir: &Path, report: &ImpactJson) -> Result<Vec<PathBuf>, CliError> {
    let json = dir.join("impact.json");
    write_json(&json, report)?;
    let mut t = Table::create(
        dir.join("impact.csv"),
        &header(
            &[
                "campaign",
                "initiating_seq_no",
                "n_members",
                "distance_plane",
                "distance_full",
                "z",
                "one_sided_tail_percent",
                "two_sided_tail_percent",
                "percent_pairs_greater",
            ],
            "",
            0,
        ),
    )?;
    let mut curve = Table::create(dir.join("impact_curve.csv"), &header(&["campaign", "curve", "distance"], "", 0))?;
    for c in &report.campaigns {
        t.row([
            c.campaign.to_string(),
            c.initiating_seq_no.to_string(),
            c.n_members.to_string(),
            fnum(c.distance_plane),
            fnum(c.distance_full),
            fnum(c.z),
            fnum(c.one_sided_tail_percent),
            fnum(c.two_sided_tail_percent),
            fnum(c.percent_pairs_greater),
        ])?;
    }
    for (name, pick) in [("plane", 0), ("full", 1)] {
        for c in &report.campaigns {
            let d = if pick == 0 { c.distance_plane } else { c.distance_full };
            curve.row([c.campaign.to_string(), name.to_string(), fnum(d)])?;
        }
    }
    Ok(vec![json, t.finish()?, curve.finish()?])
}

// ---- drilldown ----

#[derive(Serialize)]
pub struct RankedDoc {
    pub seq_no: u32,
    pub initiating: bool,
    pub score: f64,
    pub coords_plane: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

#[derive(Serialize)]
pub struct RankedTerm {
    pub term: String,
    pub score: f64,
    pub coords_plane: Vec<f64>,
}

#[derive(Serialize)]
pub struct DrilldownReport {
    pub campaign: u32,
    pub n_documents: usize,
    pub n_terms: usize,
    pub factors: Vec<FactorReport>,
    pub initiating: Vec<RankedDoc>,
    pub top_documents: Vec<RankedDoc>,
    pub top_terms: Vec<RankedTerm>,
}

/// Flattened planar view of one drilldown for plotting.
struct PlanePoint {
    kind: &'static str,
    label: String,
    coords: Vec<f64>,
    labelled: bool,
}

pub fn drilldown_report(d: &Drilldown, m: &TermDocMatrix, texts: &BTreeMap<u32, String>) -> DrilldownReport {
    let plane = |c: &[f64]| Dims::Plane.take(c).to_vec();
    let local_row = |i: usize| d.rows.iter().position(|&x| x == i).expect("ranked row belongs to drilldown");
    let doc = |i: usize, score: f64| RankedDoc {
        seq_no: m.rows[i].seq_no,
        initiating: m.rows[i].role == RowRole::Supplementary,
        score,
        coords_plane: plane(d.model.row_coords(local_row(i))),
        text: texts.get(&m.rows[i].seq_no).cloned(),
    };
    let ctr = d.model.row_contributions();
    let k = d.model.dim().min(2);
    DrilldownReport {
        campaign: d.campaign,
        n_documents: d.rows.len(),
        n_terms: d.columns.len(),
        factors: factors(&d.model),
        initiating: d
            .rows
            .iter()
            .enumerate()
            .filter(|(_, &i)| m.rows[i].role == RowRole::Supplementary)
            .map(|(r, &i)| doc(i, ctr.row(r)[..k].iter().sum()))
            .collect(),
        top_documents: d.top_docs.iter().map(|r| doc(r.index, r.score)).collect(),
        top_terms: d
            .top_terms
            .iter()
            .map(|r| {
                let c = d.columns.iter().position(|&j| j == r.index).expect("ranked column belongs to drilldown");
                RankedTerm {
                    term: m.columns[r.index].label.clone(),
                    score: r.score,
                    coords_plane: plane(d.model.col_coords(c)),
                }
            })
            .collect(),
    }
}

fn plane_points(d: &Drilldown, m: &TermDocMatrix) -> Vec<PlanePoint> {
    let top_rows: std::collections::BTreeSet<usize> = d.top_docs.iter().map(|r| r.index).collect();
    let top_cols: std::collections::BTreeSet<usize> = d.top_terms.iter().map(|r| r.index).collect();
    let rows = d.rows.iter().enumerate().map(|(r, &i)| PlanePoint {
        kind: if m.rows[i].role == RowRole::Supplementary { "initiating" } else { "document" },
        label: m.rows[i].seq_no.to_string(),
        coords: d.model.row_coords(r).to_vec(),
        labelled: top_rows.contains(&i) || m.rows[i].role == RowRole::Supplementary,
    });
    let cols = d.columns.iter().enumerate().map(|(c, &j)| PlanePoint {
        kind: "term",
        label: m.columns[j].label.clone(),
        coords: d.model.col_coords(c).to_vec(),
        labelled: top_cols.contains(&j),
    });
    rows.chain(cols).collect()
}

pub fn write_drilldowns(dir: &Path, ds: &[Drilldown], m: &TermDocMatrix, texts: &BTreeMap<u32, String>) -> Result<Vec<PathBuf>, CliError> {
    let json = dir.join("drilldown.json");
    let reports: Vec<DrilldownReport> = ds.iter().map(|d| drilldown_report(d, m, texts)).collect();
    write_json(&json, &reports)?;
    let mut t = Table::create(
        dir.join("drilldown_plane.csv"),
        &header(&["campaign", "kind", "label", "labelled", "F1", "F2"], "", 0),
    )?;
    for d in ds {
        for p in plane_points(d, m) {
            let c = Dims::Plane.take(&p.coords);
            t.row([
                d.campaign.to_string(),
                p.kind.to_string(),
                p.label,
                u8::from(p.labelled).to_string(),
                c.first().copied().map(fnum).unwrap_or_default(),
                c.get(1).copied().map(fnum).unwrap_or_default(),
            ])?;
        }
    }
    Ok(vec![json, t.finish()?])
}
