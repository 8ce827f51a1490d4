//! From raw document text to a thresholded, role-annotated term-document matrix.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("sequence numbers must be strictly increasing ({previous} then {next})")]
    UnorderedSequence { previous: u32, next: u32 },
    #[error("initiating document {seq_no} has no campaign")]
    InitiatingWithoutCampaign { seq_no: u32 },
    #[error("no document with sequence number {0}")]
    UnknownSeqNo(u32),
    #[error("nothing to merge")]
    EmptyMerge,
    #[error("documents {0} and {1} are not chronologically adjacent")]
    NonAdjacent(u32, u32),
    #[error("documents {0} and {1} belong to different campaigns")]
    MixedCampaign(u32, u32),
    #[error("campaign {campaign} has more than one initiating document ({first}, {second})")]
    MultipleInitiating { campaign: u32, first: u32, second: u32 },
    #[error("thresholds must be at least 1")]
    InvalidThreshold,
    #[error("no principal document survives term thresholding")]
    AllDocumentsEmpty,
}

/// One document of the chronological stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    /// 1-based chronological index.
    pub seq_no: u32,
    pub raw_text: String,
    pub is_initiating: bool,
    pub campaign: Option<u32>,
}

impl Document {
    pub fn new(seq_no: u32, raw_text: impl Into<String>) -> Self {
        Self {
            seq_no,
            raw_text: raw_text.into(),
            is_initiating: false,
            campaign: None,
        }
    }

    pub fn with_campaign(mut self, campaign: u32) -> Self {
        self.campaign = Some(campaign);
        self
    }

    pub fn initiating(mut self) -> Self {
        self.is_initiating = true;
        self
    }
}

/// A validated, chronologically ordered list of documents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    docs: Vec<Document>,
}

impl Corpus {
    pub fn new(docs: Vec<Document>) -> Result<Self, TextError> {
        for w in docs.windows(2) {
            if w[1].seq_no <= w[0].seq_no {
                return Err(TextError::UnorderedSequence {
                    previous: w[0].seq_no,
                    next: w[1].seq_no,
                });
            }
        }
        if let Some(d) = docs.iter().find(|d| d.is_initiating && d.campaign.is_none()) {
            return Err(TextError::InitiatingWithoutCampaign { seq_no: d.seq_no });
        }
        Ok(Self { docs })
    }

    pub fn docs(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn get(&self, seq_no: u32) -> Option<&Document> {
        self.docs
            .binary_search_by_key(&seq_no, |d| d.seq_no)
            .ok()
            .map(|i| &self.docs[i])
    }

    /// Replaces the given documents by their merge (see [`merge_initiating`]).
    pub fn merge(&mut self, seq_nos: &[u32]) -> Result<(), TextError> {
        let merged = merge_initiating(&self.docs, seq_nos)?;
        let first = merged.seq_no;
        self.docs
            .retain(|d| d.seq_no == first || !seq_nos.contains(&d.seq_no));
        let pos = self
            .docs
            .iter()
            .position(|d| d.seq_no == first)
            .expect("first merged document is retained");
        self.docs[pos] = merged;
        Ok(())
    }

    /// Merges every run of consecutive initiating documents of one campaign
    /// into a single initiating document, then checks that each campaign has
    /// at most one initiating document left.
    pub fn merge_adjacent_initiating(&mut self) -> Result<Vec<Vec<u32>>, TextError> {
        let mut runs: Vec<Vec<u32>> = Vec::new();
        let mut current: Vec<u32> = Vec::new();
        let mut current_campaign = None;
        for d in &self.docs {
            if d.is_initiating && !current.is_empty() && d.campaign == current_campaign {
                current.push(d.seq_no);
                continue;
            }
            if current.len() > 1 {
                runs.push(core::mem::take(&mut current));
            }
            current.clear();
            if d.is_initiating {
                current.push(d.seq_no);
                current_campaign = d.campaign;
            }
        }
        if current.len() > 1 {
            runs.push(current);
        }
        for run in &runs {
            self.merge(run)?;
        }
        let mut seen: BTreeMap<u32, u32> = BTreeMap::new();
        for d in self.docs.iter().filter(|d| d.is_initiating) {
            let c = d.campaign.expect("validated");
            if let Some(&first) = seen.get(&c) {
                return Err(TextError::MultipleInitiating {
                    campaign: c,
                    first,
                    second: d.seq_no,
                });
            }
            seen.insert(c, d.seq_no);
        }
        Ok(runs)
    }
}

/// Stopwords of the default list. Partial-word rumps such as "ve", "don" and
/// "ll" are part of it.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "the", "to", "and", "of", "in", "it", "is", "for", "that", "on", "at", "be", "this", "what",
    "an", "if", "ve", "don", "ly", "th", "tr", "ll",
];

/// Rumps left over when apostrophes split words ("we'll", "it's", "isn't").
pub const DEFAULT_PARTIAL_WORDS: &[&str] = &["ll", "s", "t"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizerConfig {
    pub stopwords: BTreeSet<String>,
    pub partial_words: BTreeSet<String>,
    /// Tokens with fewer characters are dropped.
    pub min_token_len: usize,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            stopwords: DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            partial_words: DEFAULT_PARTIAL_WORDS.iter().map(|s| s.to_string()).collect(),
            min_token_len: 2,
        }
    }
}

impl TokenizerConfig {
    /// Default configuration with the stopword list replaced.
    pub fn with_stopwords<I, S>(stopwords: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            stopwords: stopwords.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    fn keeps(&self, token: &str) -> bool {
        token.chars().count() >= self.min_token_len
            && !self.stopwords.contains(token)
            && !self.partial_words.contains(token)
    }
}

/// Splits raw text into lowercase alphabetic tokens.
///
/// `&amp;` becomes the word "and" before anything else happens. Every maximal
/// run of non-alphabetic characters is a delimiter, so "isn't" yields "isn"
/// and "t". Short tokens, stopwords and partial-word rumps are dropped.
pub fn tokenize(raw_text: &str, config: &TokenizerConfig) -> Vec<String> {
    let text = raw_text.replace("&amp;", " and ").to_lowercase();
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty() && config.keeps(t))
        .map(String::from)
        .collect()
}

/// All distinct terms of a corpus, sorted, with occurrence and document counts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    pub terms: Vec<String>,
    pub global_freq: Vec<u32>,
    pub doc_count: Vec<u32>,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn position(&self, term: &str) -> Option<usize> {
        self.terms.binary_search_by(|t| t.as_str().cmp(term)).ok()
    }
}

pub fn build_vocabulary(docs: &[Document], tokenizer: &TokenizerConfig) -> Vocabulary {
    let mut counts: BTreeMap<String, (u32, u32)> = BTreeMap::new();
    for d in docs {
        let mut seen = BTreeSet::new();
        for t in tokenize(&d.raw_text, tokenizer) {
            let e = counts.entry(t.clone()).or_insert((0, 0));
            e.0 += 1;
            if seen.insert(t) {
                e.1 += 1;
            }
        }
    }
    let mut v = Vocabulary::default();
    for (t, (f, c)) in counts {
        v.terms.push(t);
        v.global_freq.push(f);
        v.doc_count.push(c);
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowRole {
    Principal,
    Supplementary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnRole {
    /// A retained term; principal in the analysis.
    Term,
    /// Supplementary 0/1 indicator of membership in a campaign.
    CampaignIndicator(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowMeta {
    pub seq_no: u32,
    pub role: RowRole,
    pub campaign: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMeta {
    pub label: String,
    pub role: ColumnRole,
}

/// Sparse documents x (terms + campaign indicators) count matrix.
///
/// Rows are the documents that kept at least one retained term, in corpus
/// order. Initiating documents are supplementary rows. Term columns come
/// first, followed by one indicator column per campaign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermDocMatrix {
    pub rows: Vec<RowMeta>,
    pub columns: Vec<ColumnMeta>,
    /// Per row: `(column, count)` pairs with nonzero count, sorted by column.
    pub entries: Vec<Vec<(usize, u32)>>,
    /// Sequence numbers of documents emptied by thresholding.
    pub dropped_docs: Vec<u32>,
}

impl TermDocMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn rows_with_role(&self, role: RowRole) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&i| self.rows[i].role == role)
            .collect()
    }

    pub fn term_columns(&self) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&j| self.columns[j].role == ColumnRole::Term)
            .collect()
    }

    pub fn indicator_column(&self, campaign: u32) -> Option<usize> {
        self.columns
            .iter()
            .position(|c| c.role == ColumnRole::CampaignIndicator(campaign))
    }

    pub fn row_of(&self, seq_no: u32) -> Option<usize> {
        self.rows.iter().position(|r| r.seq_no == seq_no)
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        let e = &self.entries[row];
        e.binary_search_by_key(&col, |&(c, _)| c)
            .map(|k| e[k].1)
            .unwrap_or(0)
    }

    /// Dense block over the given rows and columns.
    pub fn dense(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut lookup = vec![usize::MAX; self.columns.len()];
        for (k, &j) in cols.iter().enumerate() {
            lookup[j] = k;
        }
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (r, &i) in rows.iter().enumerate() {
            for &(j, c) in &self.entries[i] {
                let k = lookup[j];
                if k != usize::MAX {
                    m[(r, k)] = c as f64;
                }
            }
        }
        m
    }

    /// Counts of one row restricted to `cols`.
    pub fn row_counts(&self, row: usize, cols: &[usize]) -> Vec<f64> {
        cols.iter().map(|&j| self.get(row, j) as f64).collect()
    }

    /// Coordinate list `(row, col, value)` of all nonzero entries.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .flat_map(|(i, e)| e.iter().map(move |&(j, c)| (i, j, c)))
    }
}

/// Keeps the terms reaching both thresholds and assembles the matrix.
///
/// Thresholding is a single pass: documents left without any retained term
/// are moved to `dropped_docs`, and term counts are not recomputed afterwards.
pub fn threshold_matrix(
    docs: &[Document],
    vocab: &Vocabulary,
    tokenizer: &TokenizerConfig,
    min_global_freq: u32,
    min_doc_count: u32,
) -> Result<TermDocMatrix, TextError> {
    if min_global_freq == 0 || min_doc_count == 0 {
        return Err(TextError::InvalidThreshold);
    }
    let retained: Vec<usize> = (0..vocab.len())
        .filter(|&k| vocab.global_freq[k] >= min_global_freq && vocab.doc_count[k] >= min_doc_count)
        .collect();
    let mut column_of = BTreeMap::new();
    let mut columns = Vec::with_capacity(retained.len());
    for (col, &k) in retained.iter().enumerate() {
        column_of.insert(vocab.terms[k].as_str(), col);
        columns.push(ColumnMeta {
            label: vocab.terms[k].clone(),
            role: ColumnRole::Term,
        });
    }
    let n_terms = columns.len();
    let campaigns: BTreeSet<u32> = docs.iter().filter_map(|d| d.campaign).collect();
    let mut indicator_of = BTreeMap::new();
    for (k, &c) in campaigns.iter().enumerate() {
        indicator_of.insert(c, n_terms + k);
        columns.push(ColumnMeta {
            label: format!("campaign:{c}"),
            role: ColumnRole::CampaignIndicator(c),
        });
    }

    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut dropped_docs = Vec::new();
    for d in docs {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for t in tokenize(&d.raw_text, tokenizer) {
            if let Some(&col) = column_of.get(t.as_str()) {
                *counts.entry(col).or_insert(0) += 1;
            }
        }
        if counts.is_empty() {
            dropped_docs.push(d.seq_no);
            continue;
        }
        if let Some(c) = d.campaign {
            counts.insert(indicator_of[&c], 1);
        }
        rows.push(RowMeta {
            seq_no: d.seq_no,
            role: if d.is_initiating {
                RowRole::Supplementary
            } else {
                RowRole::Principal
            },
            campaign: d.campaign,
        });
        entries.push(counts.into_iter().collect());
    }
    if !rows.iter().any(|r| r.role == RowRole::Principal) {
        return Err(TextError::AllDocumentsEmpty);
    }
    Ok(TermDocMatrix {
        rows,
        columns,
        entries,
        dropped_docs,
    })
}

/// Joins chronologically adjacent documents of one campaign into a single
/// initiating document carrying the first sequence number.
pub fn merge_initiating(docs: &[Document], seq_nos: &[u32]) -> Result<Document, TextError> {
    let mut positions = Vec::with_capacity(seq_nos.len());
    for &s in seq_nos {
        let p = docs
            .iter()
            .position(|d| d.seq_no == s)
            .ok_or(TextError::UnknownSeqNo(s))?;
        positions.push(p);
    }
    positions.sort_unstable();
    positions.dedup();
    let Some(&first) = positions.first() else {
        return Err(TextError::EmptyMerge);
    };
    if positions.len() == 1 {
        return Ok(docs[first].clone());
    }
    let campaign = docs[first].campaign;
    for &p in &positions[1..] {
        if docs[p].campaign != campaign {
            return Err(TextError::MixedCampaign(docs[first].seq_no, docs[p].seq_no));
        }
    }
    for w in positions.windows(2) {
        if w[1] != w[0] + 1 {
            return Err(TextError::NonAdjacent(docs[w[0]].seq_no, docs[w[1]].seq_no));
        }
    }
    let text = positions
        .iter()
        .map(|&p| docs[p].raw_text.as_str())
        .collect::<Vec<_>>()
        .join(" ");
    Ok(Document {
        seq_no: docs[first].seq_no,
        raw_text: text,
        is_initiating: true,
        campaign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s, &TokenizerConfig::default())
    }

    #[test]
    fn empty_input() {
        assert!(toks("").is_empty());
    }

    #[test]
    fn amp_entity() {
        let bare = TokenizerConfig::with_stopwords::<[&str; 0], &str>([]);
        assert_eq!(tokenize("A &amp; B!!", &bare), vec!["and"]);
        assert!(toks("A &amp; B!!").is_empty());
        assert_eq!(tokenize("salt&amp;pepper", &bare), vec!["salt", "and", "pepper"]);
    }

    #[test]
    fn delimiters_and_rumps() {
        assert_eq!(toks("I've isn't we'll"), vec!["isn", "we"]);
        assert_eq!(toks("Hello,WORLD...http://t.co/x"), vec!["hello", "world", "http", "co"]);
        assert_eq!(toks("über-Café 42"), vec!["über", "café"]);
    }

    #[test]
    fn vocabulary_counts() {
        let docs = [
            Document::new(1, "ab bb"),
            Document::new(2, "bb cc"),
            Document::new(3, "bb"),
        ];
        let v = build_vocabulary(&docs, &TokenizerConfig::default());
        assert_eq!(v.terms, vec!["ab", "bb", "cc"]);
        assert_eq!(v.global_freq, vec![1, 3, 1]);
        assert_eq!(v.doc_count, vec![1, 3, 1]);

        let v = build_vocabulary(&[Document::new(1, "")], &TokenizerConfig::default());
        assert!(v.is_empty());

        let v = build_vocabulary(&[Document::new(1, "xx xx")], &TokenizerConfig::default());
        assert_eq!((v.global_freq[0], v.doc_count[0]), (2, 1));
    }

    fn corpus() -> Vec<Document> {
        vec![
            Document::new(1, "apple xx").with_campaign(1).initiating(),
            Document::new(2, "apple pear xx").with_campaign(1),
            Document::new(3, "pear plum").with_campaign(1),
            Document::new(4, "apple plum xx").with_campaign(2),
            Document::new(5, "zebra").with_campaign(2),
        ]
    }

    #[test]
    fn identity_thresholds_keep_everything() {
        let docs = corpus();
        let tk = TokenizerConfig::default();
        let v = build_vocabulary(&docs, &tk);
        let m = threshold_matrix(&docs, &v, &tk, 1, 1).unwrap();
        assert_eq!(m.term_columns().len(), v.len());
        assert!(m.dropped_docs.is_empty());
        assert_eq!(m.n_rows(), 5);
        assert_eq!(m.rows[0].role, RowRole::Supplementary);
        assert_eq!(m.n_cols(), v.len() + 2);
        // exactly one indicator per labelled row
        for i in 0..m.n_rows() {
            let ones: u32 = (v.len()..m.n_cols()).map(|j| m.get(i, j)).sum();
            assert_eq!(ones, 1);
        }
    }

    #[test]
    fn rare_term_dropped_and_doc_emptied() {
        let docs = corpus();
        let tk = TokenizerConfig::default();
        let v = build_vocabulary(&docs, &tk);
        // "xx" occurs in 3 docs with frequency 3; (2,3) keeps apple, xx only
        let m = threshold_matrix(&docs, &v, &tk, 2, 3).unwrap();
        let labels: Vec<_> = m.term_columns().iter().map(|&j| m.columns[j].label.clone()).collect();
        assert_eq!(labels, vec!["apple", "xx"]);
        assert_eq!(m.dropped_docs, vec![3, 5]);
        let principal = m.rows_with_role(RowRole::Principal);
        assert_eq!(principal.len(), 2);

        let err = threshold_matrix(&docs, &v, &tk, 10, 1).unwrap_err();
        assert_eq!(err, TextError::AllDocumentsEmpty);
        assert_eq!(threshold_matrix(&docs, &v, &tk, 0, 1).unwrap_err(), TextError::InvalidThreshold);
    }

    #[test]
    fn two_doc_term_below_doc_threshold() {
        let docs: Vec<_> = (1..=5)
            .map(|i| Document::new(i, if i <= 2 { "xray common" } else { "common" }))
            .collect();
        let tk = TokenizerConfig::default();
        let v = build_vocabulary(&docs, &tk);
        let m = threshold_matrix(&docs, &v, &tk, 2, 3).unwrap();
        assert!(m.columns.iter().all(|c| c.label != "xray"));
    }

    #[test]
    fn merging() {
        let docs = vec![
            Document::new(302, "a").with_campaign(4),
            Document::new(303, "first").with_campaign(4).initiating(),
            Document::new(304, "second").with_campaign(4).initiating(),
            Document::new(305, "x").with_campaign(4),
            Document::new(410, "food").with_campaign(5).initiating(),
        ];
        let m = merge_initiating(&docs, &[303, 304]).unwrap();
        assert_eq!(m.raw_text, "first second");
        assert_eq!((m.seq_no, m.campaign, m.is_initiating), (303, Some(4), true));
        assert_eq!(merge_initiating(&docs, &[305]).unwrap(), docs[3]);
        assert_eq!(merge_initiating(&docs, &[303, 410]), Err(TextError::MixedCampaign(303, 410)));
        assert_eq!(merge_initiating(&docs, &[302, 305]), Err(TextError::NonAdjacent(302, 305)));
        assert_eq!(merge_initiating(&docs, &[999]), Err(TextError::UnknownSeqNo(999)));

        let mut c = Corpus::new(docs).unwrap();
        let runs = c.merge_adjacent_initiating().unwrap();
        assert_eq!(runs, vec![vec![303, 304]]);
        assert_eq!(c.len(), 4);
        assert_eq!(c.get(303).unwrap().raw_text, "first second");
        assert!(c.get(304).is_none());
    }

    #[test]
    fn corpus_validation() {
        let bad = vec![Document::new(2, "a"), Document::new(2, "b")];
        assert!(matches!(Corpus::new(bad), Err(TextError::UnorderedSequence { .. })));
        let bad = vec![Document::new(1, "a").initiating()];
        assert_eq!(Corpus::new(bad), Err(TextError::InitiatingWithoutCampaign { seq_no: 1 }));
        let mut two = Corpus::new(vec![
            Document::new(1, "a").with_campaign(1).initiating(),
            Document::new(2, "b").with_campaign(1),
            Document::new(3, "c").with_campaign(1).initiating(),
        ])
        .unwrap();
        assert!(matches!(
            two.merge_adjacent_initiating(),
            Err(TextError::MultipleInitiating { campaign: 1, .. })
        ));
    }
}
