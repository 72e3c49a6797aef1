use std::fmt::Write as _;
use std::path::Path;

use log::warn;
use rayon::prelude::*;

use super::manifest::DatasetManifest;
use crate::error::{Error, Result};
use crate::geometry::{Contour, Polarity};
use crate::pipeline::{self, PipelineConfig};
use crate::seqalign::{AlignParams, Score, SubstitutionMatrix, SymbolString};
use crate::symbolic::QuantizationConfig;

const MAGIC: &str = "shapeseq-index";
const VERSION: &str = "v1";

/// Settings every string in an index was produced and is scored with.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexParams {
    pub n_points: usize,
    pub k_angle_bins: usize,
    pub anchor_tolerance: f64,
    pub threshold: u8,
    pub polarity: Polarity,
    pub align: AlignParams,
}

impl IndexParams {
    pub fn from_config(cfg: &PipelineConfig) -> Self {
        IndexParams {
            n_points: cfg.n_points,
            k_angle_bins: cfg.quantization.k_angle_bins,
            anchor_tolerance: cfg.quantization.anchor_tolerance,
            threshold: cfg.threshold,
            polarity: cfg.polarity,
            align: cfg.align.clone(),
        }
    }

    /// `base` with this snapshot's settings applied.
    pub fn apply(&self, base: &PipelineConfig) -> PipelineConfig {
        PipelineConfig {
            n_points: self.n_points,
            threshold: self.threshold,
            polarity: self.polarity,
            quantization: QuantizationConfig {
                k_angle_bins: self.k_angle_bins,
                anchor_tolerance: self.anchor_tolerance,
                ..base.quantization
            },
            align: self.align.clone(),
            ..base.clone()
        }
    }

    fn header(&self) -> String {
        let matrix: Vec<String> = self
            .align
            .matrix
            .table()
            .iter()
            .flatten()
            .map(Score::to_string)
            .collect();
        format!(
            "{MAGIC}\t{VERSION}\tn_points={}\tk={}\tanchor_tolerance={}\tthreshold={}\tpolarity={}\tgap={}\tmatrix={}",
            self.n_points,
            self.k_angle_bins,
            self.anchor_tolerance,
            self.threshold,
            self.polarity,
            self.align.gap,
            matrix.join(",")
        )
    }

    fn parse_header(line: &str) -> Result<Self> {
        let bad = |m: &str| Error::parse(1, m.to_string());
        let mut fields = line.split('\t');
        if fields.next() != Some(MAGIC) {
            return Err(bad("not an index file"));
        }
        if fields.next() != Some(VERSION) {
            return Err(bad("unsupported index version"));
        }
        let mut kv = std::collections::HashMap::new();
        for f in fields {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| bad("malformed header field"))?;
            kv.insert(k, v);
        }
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| bad(&format!("header lacks `{k}`")))
        };
        let num =
            |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(&format!("bad `{k}`"))) };
        let cells: Vec<Score> = get("matrix")?
            .split(',')
            .map(|c| c.parse().map_err(|_| bad("bad matrix entry")))
            .collect::<Result<_>>()?;
        if cells.len() != 81 {
            return Err(bad("matrix needs 81 entries"));
        }
        let mut table = [[Score::from_integer(0); 9]; 9];
        for (i, c) in cells.into_iter().enumerate() {
            table[i / 9][i % 9] = c;
        }
        let gap: Score = get("gap")?.parse().map_err(|_| bad("bad gap"))?;
        Ok(IndexParams {
            n_points: num("n_points")?,
            k_angle_bins: num("k")?,
            anchor_tolerance: get("anchor_tolerance")?
                .parse()
                .map_err(|_| bad("bad `anchor_tolerance`"))?,
            threshold: u8::try_from(num("threshold")?).map_err(|_| bad("bad threshold"))?,
            polarity: get("polarity")?.parse()?,
            align: AlignParams::new(gap, SubstitutionMatrix::new(table)?)?,
        })
    }
}

/// Facts about the contour a string came from. Not persisted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourMeta {
    pub points: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexRecord {
    pub shape_id: String,
    pub class_label: String,
    pub string: SymbolString,
    pub meta: Option<ContourMeta>,
}

/// Immutable set of encoded shapes, sorted by shape id.
#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalIndex {
    params: IndexParams,
    records: Vec<IndexRecord>,
}

/// A shape that made it through contour extraction.
#[derive(Debug, Clone)]
pub struct ShapeEntry {
    pub shape_id: String,
    pub class_label: String,
    pub contour: Contour,
}

/// A manifest entry the pipeline rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub shape_id: String,
    pub reason: String,
}

/// Index plus the entries that could not be encoded.
#[derive(Debug, Clone)]
pub struct BuildReport {
    pub index: RetrievalIndex,
    pub failures: Vec<Failure>,
}

/// Runs image loading and contour extraction for every manifest entry.
/// Failures are logged and returned alongside the successes, both in
/// manifest order.
pub fn load_shapes(
    manifest: &DatasetManifest,
    cfg: &PipelineConfig,
) -> (Vec<ShapeEntry>, Vec<Failure>) {
    let results: Vec<_> = manifest
        .entries()
        .par_iter()
        .map(|e| (e, pipeline::load_contour(&e.image_path, cfg)))
        .collect();
    let mut shapes = Vec::new();
    let mut failures = Vec::new();
    for (e, res) in results {
        match res {
            Ok(contour) => shapes.push(ShapeEntry {
                shape_id: e.shape_id.clone(),
                class_label: e.class_label.clone(),
                contour,
            }),
            Err(err) => {
                warn!("skipping {}: {err}", e.shape_id);
                failures.push(Failure {
                    shape_id: e.shape_id.clone(),
                    reason: err.to_string(),
                });
            }
        }
    }
    (shapes, failures)
}

/// Encodes every manifest entry into an index. A shape that fails is
/// reported, not fatal; the build fails only when nothing succeeds.
pub fn build_index(manifest: &DatasetManifest, cfg: &PipelineConfig) -> Result<BuildReport> {
    if manifest.is_empty() {
        return Err(Error::invalid("manifest is empty"));
    }
    let (shapes, mut failures) = load_shapes(manifest, cfg);
    let (index, more) = RetrievalIndex::from_shapes(&shapes, cfg)?;
    failures.extend(more);
    if index.is_empty() {
        return Err(Error::invalid(format!(
            "all {} manifest entries failed",
            manifest.len()
        )));
    }
    Ok(BuildReport { index, failures })
}

impl RetrievalIndex {
    /// Builds from already supplied records; they are sorted by id and must
    /// have unique ids.
    pub fn from_records(params: IndexParams, mut records: Vec<IndexRecord>) -> Result<Self> {
        records.sort_by(|a, b| a.shape_id.cmp(&b.shape_id));
        if let Some(w) = records.windows(2).find(|w| w[0].shape_id == w[1].shape_id) {
            return Err(Error::invalid(format!(
                "duplicate shape id `{}`",
                w[0].shape_id
            )));
        }
        Ok(RetrievalIndex { params, records })
    }

    /// Encodes contours under `cfg`. Encoding failures are returned, not
    /// fatal.
    pub fn from_shapes(
        shapes: &[ShapeEntry],
        cfg: &PipelineConfig,
    ) -> Result<(Self, Vec<Failure>)> {
        let encoded: Vec<_> = shapes
            .par_iter()
            .map(|s| (s, pipeline::encode_contour(&s.contour, cfg)))
            .collect();
        let mut records = Vec::new();
        let mut failures = Vec::new();
        for (s, res) in encoded {
            match res {
                Ok(enc) => records.push(IndexRecord {
                    shape_id: s.shape_id.clone(),
                    class_label: s.class_label.clone(),
                    string: enc.string,
                    meta: Some(ContourMeta {
                        points: s.contour.len(),
                        degenerate: enc.degenerate,
                    }),
                }),
                Err(err) => {
                    warn!("skipping {}: {err}", s.shape_id);
                    failures.push(Failure {
                        shape_id: s.shape_id.clone(),
                        reason: err.to_string(),
                    });
                }
            }
        }
        Ok((
            RetrievalIndex::from_records(IndexParams::from_config(cfg), records)?,
            failures,
        ))
    }

    pub fn params(&self) -> &IndexParams {
        &self.params
    }

    pub fn records(&self) -> &[IndexRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, shape_id: &str) -> Option<&IndexRecord> {
        self.records
            .binary_search_by(|r| r.shape_id.as_str().cmp(shape_id))
            .ok()
            .map(|i| &self.records[i])
    }

    /// Header line with the parameter snapshot, then one
    /// `id<TAB>class<TAB>string` line per record.
    pub fn to_text(&self) -> String {
        let mut out = self.params.header();
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(out, "{}\t{}\t{}", r.shape_id, r.class_label, r.string);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty index file"))?;
        let params = IndexParams::parse_header(header)?;
        let mut records = Vec::new();
        for (idx, line) in lines.filter(|(_, l)| !l.is_empty()) {
            let fields: Vec<&str> = line.split('\t').collect();
            let [id, class, string] = fields[..] else {
                return Err(Error::parse(idx + 1, "expected `id<TAB>class<TAB>string`"));
            };
            let string: SymbolString = string
                .parse()
                .map_err(|e: Error| Error::parse(idx + 1, e.to_string()))?;
            if string
                .symbols()
                .iter()
                .any(|s| s.is_angle() && s.index() >= params.k_angle_bins)
            {
                return Err(Error::parse(
                    idx + 1,
                    "angle symbol outside the index's bin count",
                ));
            }
            records.push(IndexRecord {
                shape_id: id.to_string(),
                class_label: class.to_string(),
                string,
                meta: None,
            });
        }
        RetrievalIndex::from_records(params, records)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        RetrievalIndex::from_text(&text)
    }
}
