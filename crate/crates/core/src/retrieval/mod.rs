//! Dataset ingestion, ranked queries and benchmark metrics.

mod index;
mod manifest;
mod occlusion;

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pipeline::{self, PipelineConfig};
use crate::seqalign::{format_score, FastScorer, Score, SymbolString};

pub use self::index::{
    build_index, load_shapes, BuildReport, ContourMeta, Failure, IndexParams, IndexRecord,
    RetrievalIndex, ShapeEntry,
};
pub use self::manifest::{DatasetManifest, ManifestEntry};
pub use self::occlusion::{occlude, occlusion_sweep, OcclusionOffset, OcclusionTable};

/// Default number of results per query.
pub const DEFAULT_TOP_K: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedEntry {
    pub shape_id: String,
    pub class_label: String,
    pub raw: Score,
    pub normalized: Score,
}

/// Query results, best first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RankedResult {
    pub entries: Vec<RankedEntry>,
}

impl RankedResult {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `rank<TAB>id<TAB>raw<TAB>normalized`, ranks from 1.
    pub fn to_tsv(&self, exact: bool) -> String {
        let mut out = String::new();
        for (rank, e) in self.entries.iter().enumerate() {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                rank + 1,
                e.shape_id,
                format_score(e.raw, exact),
                format_score(e.normalized, exact)
            );
        }
        out
    }
}

/// Record positions ordered by descending score, ties by ascending id
/// (records are id-sorted, so a stable sort keeps that order).
fn rank_positions(scores: &[Score], skip: Option<usize>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).filter(|&i| Some(i) != skip).collect();
    order.sort_by(|&a, &b| scores[b].cmp(&scores[a]));
    order
}

/// Aligns `q` against every record and returns the best `top_k`.
pub fn query(idx: &RetrievalIndex, q: &SymbolString, top_k: usize) -> Result<RankedResult> {
    if idx.is_empty() {
        return Err(Error::invalid("index is empty"));
    }
    if top_k == 0 {
        return Err(Error::invalid("top_k must be at least 1"));
    }
    let scorer = FastScorer::new(&idx.params().align)?;
    let scored: Vec<(Score, Score)> = idx
        .records()
        .par_iter()
        .map(|r| scorer.score_pair(q, &r.string))
        .collect();
    let raw: Vec<Score> = scored.iter().map(|s| s.0).collect();
    let entries = rank_positions(&raw, None)
        .into_iter()
        .take(top_k)
        .map(|i| {
            let r = &idx.records()[i];
            RankedEntry {
                shape_id: r.shape_id.clone(),
                class_label: r.class_label.clone(),
                raw: scored[i].0,
                normalized: scored[i].1,
            }
        })
        .collect();
    Ok(RankedResult { entries })
}

/// Runs the index's own pipeline settings on an image, then queries.
pub fn query_image(
    idx: &RetrievalIndex,
    path: &Path,
    base: &PipelineConfig,
    top_k: usize,
) -> Result<RankedResult> {
    let cfg = idx.params().apply(base);
    let enc = pipeline::encode_path(path, &cfg)?;
    query(idx, &enc.string, top_k)
}

/// All-pairs raw scores of an index, computed once and shared by the
/// metrics.
#[derive(Debug, Clone)]
pub struct ScoreTable {
    labels: Vec<String>,
    scores: Vec<Vec<Score>>,
}

impl ScoreTable {
    pub fn new(idx: &RetrievalIndex) -> Result<Self> {
        let scorer = FastScorer::new(&idx.params().align)?;
        let recs = idx.records();
        let scores = recs
            .par_iter()
            .map(|q| {
                recs.iter()
                    .map(|r| scorer.score(&q.string, &r.string))
                    .collect()
            })
            .collect();
        Ok(ScoreTable {
            labels: recs.iter().map(|r| r.class_label.clone()).collect(),
            scores,
        })
    }

    /// Scores of externally produced query strings (one per record, in
    /// record order) against the index.
    pub(crate) fn from_queries(idx: &RetrievalIndex, queries: &[SymbolString]) -> Result<Self> {
        let scorer = FastScorer::new(&idx.params().align)?;
        let scores = queries
            .par_iter()
            .map(|q| {
                idx.records()
                    .iter()
                    .map(|r| scorer.score(q, &r.string))
                    .collect()
            })
            .collect();
        Ok(ScoreTable {
            labels: idx
                .records()
                .iter()
                .map(|r| r.class_label.clone())
                .collect(),
            scores,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn score(&self, query: usize, record: usize) -> Score {
        self.scores[query][record]
    }

    fn class_size(&self, label: &str) -> usize {
        self.labels.iter().filter(|l| *l == label).count()
    }

    fn queries(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.class_size(&self.labels[i]) > 1)
    }

    /// Mean over queries of the same-class fraction among each query's
    /// `top_k` results (the query itself excluded), as a percentage.
    /// Queries whose class has no other member are left out.
    pub fn retrieval_score(&self, top_k: usize) -> Result<f64> {
        if top_k == 0 {
            return Err(Error::invalid("top_k must be at least 1"));
        }
        let fractions: Vec<f64> = self
            .queries()
            .map(|q| {
                let hits = rank_positions(&self.scores[q], Some(q));
                let top = &hits[..top_k.min(hits.len())];
                let same = top
                    .iter()
                    .filter(|&&r| self.labels[r] == self.labels[q])
                    .count();
                same as f64 / top.len() as f64
            })
            .collect();
        if fractions.is_empty() {
            return Err(Error::invalid("no class has two or more members"));
        }
        Ok(100.0 * fractions.iter().sum::<f64>() / fractions.len() as f64)
    }

    /// Leave-one-out nearest-neighbor accuracy as a percentage. Shapes whose
    /// class has no other member are left out.
    pub fn recognition_score(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::invalid("need at least 2 shapes"));
        }
        let outcomes: Vec<bool> = self
            .queries()
            .map(|q| {
                let best = rank_positions(&self.scores[q], Some(q))[0];
                self.labels[best] == self.labels[q]
            })
            .collect();
        if outcomes.is_empty() {
            return Err(Error::invalid("no class has two or more members"));
        }
        let correct = outcomes.iter().filter(|&&c| c).count();
        Ok(100.0 * correct as f64 / outcomes.len() as f64)
    }
}

pub fn retrieval_score(idx: &RetrievalIndex, top_k: usize) -> Result<f64> {
    ScoreTable::new(idx)?.retrieval_score(top_k)
}

pub fn recognition_score(idx: &RetrievalIndex) -> Result<f64> {
    if idx.len() < 2 {
        return Err(Error::invalid("need at least 2 shapes"));
    }
    ScoreTable::new(idx)?.recognition_score()
}

/// Formats a percentage for reports.
pub fn format_percent(p: f64) -> String {
    format!("{p:.3}")
}
