//! Corpus and stopword files.
//!
//! A corpus is a CSV file with a header, or a JSON Lines file, with the
//! fields `seq_no`, `text`, `is_initiating` and `campaign`. `is_initiating`
//! accepts `0`/`1` or `true`/`false`; `campaign` may be empty or null.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use narca_core::text::{Corpus, Document};
use serde::{Deserialize, Deserializer};

use crate::error::CliError;

#[derive(Debug, Deserialize)]
struct Record {
    seq_no: u32,
    text: String,
    #[serde(default, deserialize_with = "flag")]
    is_initiating: bool,
    #[serde(default, deserialize_with = "campaign")]
    campaign: Option<u32>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Flag {
    Bool(bool),
    Int(u8),
    Str(String),
}

fn flag<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
    use serde::de::Error;
    match Flag::deserialize(d)? {
        Flag::Bool(b) => Ok(b),
        Flag::Int(0) => Ok(false),
        Flag::Int(1) => Ok(true),
        Flag::Str(s) => match s.trim().to_ascii_lowercase().as_str() {
            "" | "0" | "false" | "no" => Ok(false),
            "1" | "true" | "yes" => Ok(true),
            other => Err(D::Error::custom(format!("invalid is_initiating value {other:?}"))),
        },
        Flag::Int(n) => Err(D::Error::custom(format!("invalid is_initiating value {n}"))),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Campaign {
    Int(u32),
    Str(String),
}

fn campaign<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u32>, D::Error> {
    use serde::de::Error;
    match Option::<Campaign>::deserialize(d)? {
        None => Ok(None),
        Some(Campaign::Int(c)) => Ok(Some(c)),
        Some(Campaign::Str(s)) if s.trim().is_empty() => Ok(None),
        Some(Campaign::Str(s)) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| D::Error::custom(format!("invalid campaign {s:?}"))),
    }
}

impl From<Record> for Document {
    fn from(r: Record) -> Self {
        Document {
            seq_no: r.seq_no,
            raw_text: r.text,
            is_initiating: r.is_initiating,
            campaign: r.campaign,
        }
    }
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

pub fn is_jsonl(path: &Path) -> bool {
    matches!(
        path.extension().and_then(|e| e.to_str()),
        Some("jsonl" | "ndjson")
    )
}

pub fn read_documents(path: &Path) -> Result<Vec<Document>, CliError> {
    let file = open(path)?;
    let mut docs = Vec::new();
    if is_jsonl(path) {
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| CliError::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let r: Record = serde_json::from_str(&line)
                .map_err(|e| CliError::data(path, format!("line {}: {e}", n + 1)))?;
            docs.push(r.into());
        }
    } else {
        let mut reader = csv::Reader::from_reader(file);
        for r in reader.deserialize::<Record>() {
            docs.push(r.map_err(|e| CliError::data(path, e))?.into());
        }
    }
    Ok(docs)
}

/// Reads a corpus and validates its ordering and campaign labels.
pub fn read_corpus(path: &Path) -> Result<Corpus, CliError> {
    Corpus::new(read_documents(path)?).map_err(|e| CliError::data(path, e))
}

/// Whitespace-separated stopwords; `#` starts a comment.
pub fn read_stopwords(path: &Path) -> Result<Vec<String>, CliError> {
    let file = open(path)?;
    let mut words = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        let content = line.split('#').next().unwrap_or("");
        words.extend(content.split_whitespace().map(str::to_lowercase));
    }
    Ok(words)
}
