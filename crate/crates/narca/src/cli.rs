//! Command-line stages.
//!
//! Every stage reads either a corpus (CSV or JSON Lines) or a previously
//! exported matrix (`*.coo.csv` plus its roles sidecar), refits what it
//! needs, and writes its reports plus a manifest into `--out`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use narca_core::impact::Dims;
use narca_core::pipeline::Analysis;
use narca_core::segment::{PermTestConfig, SingletonPolicy};
use narca_core::text::{build_vocabulary, threshold_matrix, RowRole, TermDocMatrix, TokenizerConfig};

use crate::corpus::{read_corpus, read_stopwords};
use crate::error::CliError;
use crate::export::{self, IngestReport};
use crate::manifest::{write_manifest, RunConfig};
use crate::matrix_io::{is_matrix_path, read_matrix, write_json, write_matrix};

#[derive(Debug, Parser)]
#[command(name = "narca", version, about = "Latent semantic mapping, segmentation and impact of document streams")]
pub struct Cli {
    #[command(subcommand)]
    pub stage: Stage,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Stage {
    /// Corpus to thresholded term-document matrix and vocabulary report.
    Ingest,
    /// Correspondence analysis: factors, coordinates, contributions.
    Ca,
    /// Sequence-constrained complete-link dendrogram.
    Cluster,
    /// Permutation-gated segmentation and segment factor map.
    Segment,
    /// Distance of each initiating document to its campaign centre.
    Impact,
    /// Separate analysis of one campaign (`--campaign`).
    Drilldown,
    /// Every stage in sequence.
    All,
}

impl Stage {
    fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Ca => "ca",
            Stage::Cluster => "cluster",
            Stage::Segment => "segment",
            Stage::Impact => "impact",
            Stage::Drilldown => "drilldown",
            Stage::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DimsArg {
    Plane,
    Full,
}

impl From<DimsArg> for Dims {
    fn from(d: DimsArg) -> Self {
        match d {
            DimsArg::Plane => Dims::Plane,
            DimsArg::Full => Dims::Full,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Corpus (.csv, .jsonl) or exported matrix (.coo.csv).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Replacement stopword list.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    /// Minimum total occurrences of a retained term.
    #[arg(long, global = true, default_value_t = 5)]
    pub min_freq: u32,
    /// Minimum number of documents using a retained term.
    #[arg(long, global = true, default_value_t = 5)]
    pub min_docs: u32,
    /// Significance level of the merge test.
    #[arg(long, global = true, default_value_t = 0.15)]
    pub alpha: f64,
    #[arg(long, global = true, default_value_t = 5000)]
    pub permutations: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value = "narca-out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub campaign: Option<u32>,
    #[arg(long, global = true, default_value_t = 10)]
    pub top_tweets: usize,
    #[arg(long, global = true, default_value_t = 15)]
    pub top_terms: usize,
    /// Factor space used for clustering and segmentation.
    #[arg(long, global = true, value_enum, default_value_t = DimsArg::Full)]
    pub dims: DimsArg,
}

struct Loaded {
    matrix: TermDocMatrix,
    texts: BTreeMap<u32, String>,
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Config {
            message: format!("input file not found: {}", path.display()),
            path: Some(path.to_path_buf()),
        })
    }
}

fn validate(cli: &Cli) -> Result<PathBuf, CliError> {
    let o = &cli.opts;
    let input = o.input.clone().ok_or_else(|| CliError::config("--input is required"))?;
    require_file(&input)?;
    if let Some(s) = &o.stopwords {
        require_file(s)?;
    }
    if o.min_freq == 0 || o.min_docs == 0 {
        return Err(CliError::config("--min-freq and --min-docs must be at least 1"));
    }
    if !(0.0..1.0).contains(&o.alpha) {
        return Err(CliError::config(format!("--alpha must lie in [0, 1), got {}", o.alpha)));
    }
    if o.permutations == 0 {
        return Err(CliError::config("--permutations must be at least 1"));
    }
    if cli.stage == Stage::Drilldown && o.campaign.is_none() {
        return Err(CliError::config("drilldown needs --campaign"));
    }
    Ok(input)
}

fn run_config(o: &Options, input: &Path) -> RunConfig {
    RunConfig {
        input: input.display().to_string(),
        stopwords: o.stopwords.as_ref().map(|p| p.display().to_string()),
        min_freq: o.min_freq,
        min_docs: o.min_docs,
        alpha: o.alpha,
        permutations: o.permutations,
        seed: o.seed,
        dims: export::dims_name(o.dims.into()),
        campaign: o.campaign,
        top_tweets: o.top_tweets,
        top_terms: o.top_terms,
    }
}

/// Builds the matrix, writing the ingest artifacts when `write` is set.
fn load(o: &Options, input: &Path, write: bool, files: &mut Vec<PathBuf>) -> Result<Loaded, CliError> {
    if is_matrix_path(input) {
        let matrix = read_matrix(input)?;
        return Ok(Loaded {
            matrix,
            texts: BTreeMap::new(),
        });
    }
    let mut corpus = read_corpus(input)?;
    let merged = corpus.merge_adjacent_initiating().map_err(|e| CliError::data(input, e))?;
    let tokenizer = match &o.stopwords {
        Some(p) => TokenizerConfig::with_stopwords(read_stopwords(p)?),
        None => TokenizerConfig::default(),
    };
    let vocab = build_vocabulary(corpus.docs(), &tokenizer);
    let matrix = threshold_matrix(corpus.docs(), &vocab, &tokenizer, o.min_freq, o.min_docs)
        .map_err(|e| CliError::data(input, e))?;
    if write {
        files.extend(write_matrix(&o.out, "matrix", &matrix)?);
        files.push(export::write_vocabulary(&o.out, &vocab, &matrix)?);
        let report = IngestReport {
            n_documents: corpus.len(),
            merged_initiating: merged,
            n_terms_total: vocab.len(),
            n_terms_retained: matrix.term_columns().len(),
            min_global_freq: o.min_freq,
            min_doc_count: o.min_docs,
            n_principal_rows: matrix.rows_with_role(RowRole::Principal).len(),
            n_supplementary_rows: matrix.rows_with_role(RowRole::Supplementary).len(),
            n_campaigns: matrix.n_cols() - matrix.term_columns().len(),
            dropped_docs: matrix.dropped_docs.clone(),
        };
        let path = o.out.join("ingest.json");
        write_json(&path, &report)?;
        files.push(path);
    }
    let texts = corpus.docs().iter().map(|d| (d.seq_no, d.raw_text.clone())).collect();
    Ok(Loaded { matrix, texts })
}

/// Runs one stage (or all of them) and returns the files written, manifest last.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let input = validate(cli)?;
    let o = &cli.opts;
    std::fs::create_dir_all(&o.out).map_err(|e| CliError::io(&o.out, e))?;
    let stage = cli.stage;
    let wants = |s: Stage| stage == s || stage == Stage::All;
    let dims: Dims = o.dims.into();
    let mut files = Vec::new();

    let loaded = load(o, &input, wants(Stage::Ingest), &mut files)?;
    if stage != Stage::Ingest {
        let analysis = Analysis::fit(loaded.matrix)?;
        let seq_nos = analysis.principal_seq_nos();
        if wants(Stage::Ca) {
            let report = export::ca_report(&analysis)?;
            files.extend(export::write_ca(&o.out, &report, analysis.model.dim())?);
        }
        if wants(Stage::Cluster) {
            let d = analysis.cluster(dims)?;
            files.extend(export::write_dendrogram(&o.out, &d, seq_nos.clone(), dims)?);
        }
        if wants(Stage::Segment) {
            let config = PermTestConfig {
                alpha: o.alpha,
                n_permutations: o.permutations,
                rng_seed: o.seed,
            };
            let result = analysis.segment(&config, dims)?;
            let map = analysis.segment_map(&result, SingletonPolicy::default())?;
            let report = export::segmentation_report(&result, &map, &seq_nos, &config, dims);
            files.extend(export::write_segmentation(&o.out, &report, &result.labels(), &seq_nos)?);
        }
        if wants(Stage::Impact) {
            let report = export::impact_report(&analysis.impact()?);
            files.extend(export::write_impact(&o.out, &report)?);
        }
        if wants(Stage::Drilldown) {
            let campaigns = match o.campaign {
                Some(c) => vec![c],
                None => analysis.campaigns(),
            };
            let ds = campaigns
                .iter()
                .map(|&c| analysis.drilldown(c, o.top_tweets, o.top_terms))
                .collect::<Result<Vec<_>, _>>()?;
            files.extend(export::write_drilldowns(&o.out, &ds, &analysis.matrix, &loaded.texts)?);
        }
    }
    let manifest = write_manifest(&o.out, stage.name(), run_config(o, &input), &files)?;
    files.push(manifest);
    Ok(files)
}
