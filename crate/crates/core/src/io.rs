//! On-disk formats: edge-list graph files, Peeters label sidecars, and
//! JSON code files.
//!
//! Graph file:
//!
//! ```text
//! n m
//! u v        (m lines, 0-based, u < v, sorted, newline-terminated)
//! ```
//!
//! Code file (bit vectors as 0/1 strings, coordinate 0 first):
//!
//! ```json
//! {"model": "taskbased", "n": 2,
//!  "senders": {"0": ["1"], "1": ["1"]},
//!  "decoders": [{"broadcast": "01", "side": "0"}, {"broadcast": "10", "side": "0"}],
//!  "assignment": [1, 0]}
//! ```
//!
//! `"index"` files carry `"encoder"` instead of `"senders"` and no
//! `"assignment"`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::code::{Decoder, EmbeddedCode, IndexCode, SenderEncoder, TaskBasedCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::graph::Graph;
use crate::peeters::PeetersGraph;

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

pub fn read_graph(text: &str) -> Result<Graph> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(Error::Parse("graph file must end with a newline".into()));
    }
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let (n, m) = parse_pair(header, 1)?;
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let (u, v) = parse_pair(line, idx + 1)?;
        if u >= v {
            return Err(Error::Parse(format!(
                "line {}: need u < v, got {u} {v}",
                idx + 1
            )));
        }
        if v >= n {
            return Err(Error::Parse(format!(
                "line {}: endpoint {v} out of range for n = {n}",
                idx + 1
            )));
        }
        if let Some(&prev) = edges.last() {
            if (u, v) == prev {
                return Err(Error::Parse(format!(
                    "line {}: duplicate edge {u} {v}",
                    idx + 1
                )));
            }
            if (u, v) < prev {
                return Err(Error::Parse(format!(
                    "line {}: edges are not sorted",
                    idx + 1
                )));
            }
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::from_edges(n, edges)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split(' ');
    let mut next = || -> Result<usize> {
        it.next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::Parse(format!("line {lineno}: expected two integers")))?
            .parse()
            .map_err(|e| Error::Parse(format!("line {lineno}: {e}")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(Error::Parse(format!("line {lineno}: trailing fields")));
    }
    Ok(pair)
}

/// Peeters labels kept next to a graph file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsFile {
    pub k: usize,
    pub complement: bool,
    /// `(u, v)` bit strings per vertex.
    pub labels: Vec<(String, String)>,
}

impl LabelsFile {
    pub fn new(pg: &PeetersGraph, complement: bool) -> Self {
        LabelsFile {
            k: pg.k(),
            complement,
            labels: pg.label_strings(),
        }
    }

    pub fn parsed(&self) -> Result<Vec<(BitVector, BitVector)>> {
        self.labels
            .iter()
            .map(|(u, v)| Ok((u.parse()?, v.parse()?)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeModel {
    Index,
    Embedded,
    #[serde(rename = "taskbased")]
    TaskBased,
}

impl std::fmt::Display for CodeModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CodeModel::Index => "index",
            CodeModel::Embedded => "embedded",
            CodeModel::TaskBased => "taskbased",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecoderRecord {
    broadcast: String,
    side: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeRecord {
    model: CodeModel,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    encoder: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    senders: Option<BTreeMap<usize, Vec<String>>>,
    decoders: Vec<DecoderRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    assignment: Option<Vec<usize>>,
}

/// Any of the three code models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeFile {
    Index(IndexCode),
    Embedded(EmbeddedCode),
    TaskBased(TaskBasedCode),
}

impl CodeFile {
    pub fn model(&self) -> CodeModel {
        match self {
            CodeFile::Index(_) => CodeModel::Index,
            CodeFile::Embedded(_) => CodeModel::Embedded,
            CodeFile::TaskBased(_) => CodeModel::TaskBased,
        }
    }
}

fn decoder_records(ds: &[Decoder]) -> Vec<DecoderRecord> {
    ds.iter()
        .map(|d| DecoderRecord {
            broadcast: d.broadcast.to_string(),
            side: d.side.to_string(),
        })
        .collect()
}

fn sender_records(code: &EmbeddedCode) -> BTreeMap<usize, Vec<String>> {
    code.senders()
        .iter()
        .map(|s| (s.sender, s.encoder.to_row_strings()))
        .collect()
}

pub fn write_code(code: &CodeFile) -> String {
    let record = match code {
        CodeFile::Index(c) => CodeRecord {
            model: CodeModel::Index,
            n: c.n(),
            encoder: Some(c.encoder().to_row_strings()),
            senders: None,
            decoders: decoder_records(c.decoders()),
            assignment: None,
        },
        CodeFile::Embedded(c) => CodeRecord {
            model: CodeModel::Embedded,
            n: c.n(),
            encoder: None,
            senders: Some(sender_records(c)),
            decoders: decoder_records(c.decoders()),
            assignment: None,
        },
        CodeFile::TaskBased(c) => CodeRecord {
            model: CodeModel::TaskBased,
            n: c.n(),
            encoder: None,
            senders: Some(sender_records(c.embedded())),
            decoders: decoder_records(c.embedded().decoders()),
            assignment: Some(c.assignment().to_vec()),
        },
    };
    let mut s = serde_json::to_string_pretty(&record).expect("code records serialize");
    s.push('\n');
    s
}

fn parse_rows(rows: &[String], cols: usize) -> Result<BitMatrix> {
    BitMatrix::parse_rows(cols, rows)
}

pub fn read_code(text: &str) -> Result<CodeFile> {
    let record: CodeRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let decoders = record
        .decoders
        .iter()
        .map(|d| {
            Ok(Decoder {
                broadcast: d.broadcast.parse()?,
                side: d.side.parse()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let field = |name: &str| Error::Parse(format!("{} code needs \"{name}\"", record.model));
    let stray =
        |name: &str| Error::Parse(format!("{} code must not carry \"{name}\"", record.model));
    let senders = || -> Result<Vec<SenderEncoder>> {
        let map = record.senders.as_ref().ok_or_else(|| field("senders"))?;
        map.iter()
            .map(|(&sender, rows)| {
                let width = rows
                    .first()
                    .ok_or_else(|| Error::Parse(format!("sender {sender} has an empty encoder")))?
                    .len();
                Ok(SenderEncoder {
                    sender,
                    encoder: parse_rows(rows, width)?,
                })
            })
            .collect()
    };
    match record.model {
        CodeModel::Index => {
            if record.senders.is_some() {
                return Err(stray("senders"));
            }
            if record.assignment.is_some() {
                return Err(stray("assignment"));
            }
            let encoder = parse_rows(
                record.encoder.as_ref().ok_or_else(|| field("encoder"))?,
                record.n,
            )?;
            Ok(CodeFile::Index(IndexCode::new(encoder, decoders)?))
        }
        CodeModel::Embedded => {
            if record.encoder.is_some() {
                return Err(stray("encoder"));
            }
            if record.assignment.is_some() {
                return Err(stray("assignment"));
            }
            Ok(CodeFile::Embedded(EmbeddedCode::new(
                record.n,
                senders()?,
                decoders,
            )?))
        }
        CodeModel::TaskBased => {
            if record.encoder.is_some() {
                return Err(stray("encoder"));
            }
            let assignment = record
                .assignment
                .clone()
                .ok_or_else(|| field("assignment"))?;
            let embedded = EmbeddedCode::new(record.n, senders()?, decoders)?;
            Ok(CodeFile::TaskBased(TaskBasedCode::new(
                embedded, assignment,
            )?))
        }
    }
}
