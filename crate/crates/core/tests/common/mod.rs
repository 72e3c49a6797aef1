#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use shapeseq::retrieval::DatasetManifest;
use shapeseq::synth;

/// Writes a synthetic set plus its `manifest.tsv` into `dir`.
pub fn benchmark_set(dir: &Path, per_class: usize, seed: u64) -> (DatasetManifest, PathBuf) {
    let manifest = synth::write_benchmark_set(dir, per_class, seed).unwrap();
    let path = dir.join("manifest.tsv");
    std::fs::write(&path, manifest.to_tsv()).unwrap();
    (manifest, path)
}

pub fn shapeseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shapeseq"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}
