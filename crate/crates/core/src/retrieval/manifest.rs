use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub shape_id: String,
    pub class_label: String,
    pub image_path: PathBuf,
}

/// List of labeled shape images.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetManifest {
    entries: Vec<ManifestEntry>,
}

fn check_field(value: &str, what: &str) -> Result<()> {
    if value.is_empty() || value.contains(['\t', '\n', '\r']) {
        return Err(Error::invalid(format!(
            "{what} `{value}` is empty or contains tabs/newlines"
        )));
    }
    Ok(())
}

impl DatasetManifest {
    /// Requires unique, tab-free shape ids and labels.
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &entries {
            check_field(&e.shape_id, "shape id")?;
            check_field(&e.class_label, "class label")?;
            if !seen.insert(e.shape_id.as_str()) {
                return Err(Error::invalid(format!(
                    "duplicate shape id `{}`",
                    e.shape_id
                )));
            }
        }
        Ok(DatasetManifest { entries })
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses `shape_id<TAB>class<TAB>path` lines. Relative paths are
    /// resolved against `base_dir`. Blank lines and `#` comments are skipped.
    pub fn from_tsv(text: &str, base_dir: &Path) -> Result<Self> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [id, class, path] = fields[..] else {
                return Err(Error::parse(
                    idx + 1,
                    "expected `shape_id<TAB>class<TAB>path`",
                ));
            };
            let path = Path::new(path);
            entries.push(ManifestEntry {
                shape_id: id.to_string(),
                class_label: class.to_string(),
                image_path: if path.is_absolute() {
                    path.to_path_buf()
                } else {
                    base_dir.join(path)
                },
            });
        }
        DatasetManifest::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        DatasetManifest::from_tsv(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn to_tsv(&self) -> String {
        self.entries
            .iter()
            .map(|e| {
                format!(
                    "{}\t{}\t{}\n",
                    e.shape_id,
                    e.class_label,
                    e.image_path.display()
                )
            })
            .collect()
    }
}
