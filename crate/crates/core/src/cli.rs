//! Command-line front end. The binary is a thin wrapper over [`run`].

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::pipeline;
use crate::retrieval::{
    self, build_index, format_percent, load_shapes, occlusion_sweep, DatasetManifest,
    OcclusionOffset, RetrievalIndex, ScoreTable,
};
use crate::seqalign::{align_score, format_score, SymbolString};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "shapeseq",
    version,
    about = "Shape retrieval by contour symbol strings"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// key=value configuration file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Contour resampling size
    #[arg(long = "n-points", global = true)]
    n_points: Option<usize>,
    /// Number of angle bins (2..=6)
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Gap penalty, integer or p/q
    #[arg(long, global = true, allow_hyphen_values = true)]
    gap: Option<String>,
    /// Substitution matrix file
    #[arg(long, global = true)]
    matrix: Option<PathBuf>,
    #[arg(long = "top-k", global = true)]
    top_k: Option<usize>,
    /// Print scores as exact fractions
    #[arg(long, global = true)]
    exact: bool,
    /// Register shapes pairwise (shape context + Procrustes) before encoding
    #[arg(long = "full-pipeline", global = true)]
    full_pipeline: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print `<shape-id>\t<string>` for each image
    Encode { images: Vec<PathBuf> },
    /// Align two images, or two literal strings with --strings
    Match {
        images: Vec<PathBuf>,
        #[arg(long, num_args = 2, value_names = ["S1", "S2"])]
        strings: Option<Vec<String>>,
    },
    /// Encode a manifest into an index file
    Index {
        manifest: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Rank index records against an image or a literal string
    Query {
        index: PathBuf,
        image: Option<PathBuf>,
        #[arg(long)]
        string: Option<String>,
    },
    /// Retrieval and recognition scores for an index or manifest
    Benchmark { input: PathBuf },
    /// Recognition accuracy under contour occlusion
    Occlusion {
        manifest: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5")]
        fractions: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "4,5,6")]
        ks: Vec<usize>,
        /// Fixed start index of the removed arc
        #[arg(long)]
        offset: Option<usize>,
    },
}

struct Ctx<'a> {
    cfg: Config,
    opts: &'a GlobalOpts,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let cfg = match build_config(&cli.global) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut ctx = Ctx {
        cfg,
        opts: &cli.global,
        out,
        err,
    };
    match dispatch(&mut ctx, &cli.command) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_DATA
        }
    }
}

fn build_config(opts: &GlobalOpts) -> Result<Config> {
    let mut cfg = match &opts.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let here = Path::new(".");
    if let Some(n) = opts.n_points {
        cfg.set("n_points", &n.to_string(), here)?;
    }
    if let Some(k) = opts.k {
        cfg.set("k", &k.to_string(), here)?;
    }
    if let Some(path) = &opts.matrix {
        cfg.set("matrix", &path.to_string_lossy(), here)?;
    }
    if let Some(gap) = &opts.gap {
        cfg.set("gap", gap, here)?;
    }
    if let Some(top_k) = opts.top_k {
        cfg.set("top_k", &top_k.to_string(), here)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn dispatch(ctx: &mut Ctx<'_>, command: &Command) -> Result<i32> {
    match command {
        Command::Encode { images } => cmd_encode(ctx, images),
        Command::Match { images, strings } => cmd_match(ctx, images, strings.as_deref()),
        Command::Index { manifest, output } => cmd_index(ctx, manifest, output),
        Command::Query {
            index,
            image,
            string,
        } => cmd_query(ctx, index, image.as_deref(), string.as_deref()),
        Command::Benchmark { input } => cmd_benchmark(ctx, input),
        Command::Occlusion {
            manifest,
            fractions,
            ks,
            offset,
        } => cmd_occlusion(ctx, manifest, fractions, ks, *offset),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn shape_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn cmd_encode(ctx: &mut Ctx<'_>, images: &[PathBuf]) -> Result<i32> {
    if images.is_empty() {
        let _ = writeln!(ctx.err, "error: encode needs at least one image");
        return Ok(EXIT_USAGE);
    }
    let mut code = EXIT_OK;
    for path in images {
        match pipeline::encode_path(path, &ctx.cfg.pipeline) {
            Ok(enc) => writeln!(ctx.out, "{}\t{}", shape_id(path), enc.string).map_err(io)?,
            Err(e) => {
                let _ = writeln!(ctx.err, "error: {}: {e}", path.display());
                code = EXIT_DATA;
            }
        }
    }
    Ok(code)
}

fn cmd_match(ctx: &mut Ctx<'_>, images: &[PathBuf], strings: Option<&[String]>) -> Result<i32> {
    let exact = ctx.opts.exact;
    let p = &ctx.cfg.pipeline;
    let (result, registration) = match (strings, images) {
        (Some([a, b]), []) => {
            let (a, b): (SymbolString, SymbolString) = (a.parse()?, b.parse()?);
            (align_score(&a, &b, &p.align), None)
        }
        (None, [a, b]) => {
            let ca = pipeline::load_contour(a, p)?;
            let cb = pipeline::load_contour(b, p)?;
            let m = pipeline::match_contours(&ca, &cb, p, ctx.opts.full_pipeline)?;
            (m.result, m.registration)
        }
        _ => {
            let _ = writeln!(ctx.err, "error: match needs two images or --strings S1 S2");
            return Ok(EXIT_USAGE);
        }
    };
    let out = &mut *ctx.out;
    writeln!(out, "score\t{}", format_score(result.score, exact)).map_err(io)?;
    writeln!(
        out,
        "normalized\t{}",
        format_score(result.normalized, exact)
    )
    .map_err(io)?;
    writeln!(out, "aligned_1\t{}", result.aligned_s1).map_err(io)?;
    writeln!(out, "aligned_2\t{}", result.aligned_s2).map_err(io)?;
    if let Some(reg) = registration {
        writeln!(out, "transform\t{}", reg.alignment.transform).map_err(io)?;
        writeln!(out, "residual\t{}", reg.alignment.rms_residual).map_err(io)?;
        writeln!(
            out,
            "correspondence_cost\t{}",
            reg.correspondence.total_cost
        )
        .map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn report_failures(err: &mut dyn Write, failures: &[retrieval::Failure]) {
    for f in failures {
        let _ = writeln!(err, "warning: skipped {}: {}", f.shape_id, f.reason);
    }
}

fn cmd_index(ctx: &mut Ctx<'_>, manifest: &Path, output: &Path) -> Result<i32> {
    let manifest = DatasetManifest::load(manifest)?;
    let report = build_index(&manifest, &ctx.cfg.pipeline)?;
    report_failures(ctx.err, &report.failures);
    report.index.save(output)?;
    writeln!(
        ctx.out,
        "indexed\t{}\nfailed\t{}",
        report.index.len(),
        report.failures.len()
    )
    .map_err(io)?;
    Ok(EXIT_OK)
}

/// Refuses explicit flags that disagree with the settings an index was
/// built with.
fn check_against_index(opts: &GlobalOpts, cfg: &Config, idx: &RetrievalIndex) -> Result<()> {
    let params = idx.params();
    let mismatch = |what: &str| {
        Err(Error::Incompatible(format!(
            "{what} differs from the index"
        )))
    };
    if opts.n_points.is_some() && cfg.pipeline.n_points != params.n_points {
        return mismatch("--n-points");
    }
    if opts.k.is_some() && cfg.pipeline.quantization.k_angle_bins != params.k_angle_bins {
        return mismatch("--k");
    }
    if opts.gap.is_some() && cfg.pipeline.align.gap != params.align.gap {
        return mismatch("--gap");
    }
    if opts.matrix.is_some() && cfg.pipeline.align.matrix != params.align.matrix {
        return mismatch("--matrix");
    }
    Ok(())
}

fn cmd_query(
    ctx: &mut Ctx<'_>,
    index: &Path,
    image: Option<&Path>,
    string: Option<&str>,
) -> Result<i32> {
    let idx = RetrievalIndex::load(index)?;
    check_against_index(ctx.opts, &ctx.cfg, &idx)?;
    let top_k = ctx.cfg.top_k;
    let ranked = match (image, string) {
        (Some(path), None) => retrieval::query_image(&idx, path, &ctx.cfg.pipeline, top_k)?,
        (None, Some(s)) => retrieval::query(&idx, &s.parse()?, top_k)?,
        _ => {
            let _ = writeln!(ctx.err, "error: query needs an image or --string");
            return Ok(EXIT_USAGE);
        }
    };
    write!(ctx.out, "{}", ranked.to_tsv(ctx.opts.exact)).map_err(io)?;
    Ok(EXIT_OK)
}

fn is_index_file(path: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(text.starts_with("shapeseq-index\t"))
}

fn cmd_benchmark(ctx: &mut Ctx<'_>, input: &Path) -> Result<i32> {
    let (idx, failures) = if is_index_file(input)? {
        let idx = RetrievalIndex::load(input)?;
        check_against_index(ctx.opts, &ctx.cfg, &idx)?;
        (idx, Vec::new())
    } else {
        let report = build_index(&DatasetManifest::load(input)?, &ctx.cfg.pipeline)?;
        report_failures(ctx.err, &report.failures);
        (report.index, report.failures)
    };
    let table = ScoreTable::new(&idx)?;
    let mut ks = vec![20, 40, ctx.cfg.top_k];
    ks.sort_unstable();
    ks.dedup();
    let out = &mut *ctx.out;
    writeln!(out, "shapes\t{}", idx.len()).map_err(io)?;
    writeln!(out, "failures\t{}", failures.len()).map_err(io)?;
    for k in ks {
        let score = table.retrieval_score(k)?;
        writeln!(out, "retrieval_top{k}\t{}", format_percent(score)).map_err(io)?;
    }
    writeln!(
        out,
        "recognition\t{}",
        format_percent(table.recognition_score()?)
    )
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_occlusion(
    ctx: &mut Ctx<'_>,
    manifest: &Path,
    fractions: &[f64],
    ks: &[usize],
    offset: Option<usize>,
) -> Result<i32> {
    let manifest = DatasetManifest::load(manifest)?;
    let (shapes, failures) = load_shapes(&manifest, &ctx.cfg.pipeline);
    report_failures(ctx.err, &failures);
    let offset = offset.map_or(OcclusionOffset::OppositeStart, OcclusionOffset::Index);
    let table = occlusion_sweep(&shapes, &ctx.cfg.pipeline, fractions, ks, offset)?;
    write!(ctx.out, "{}", table.to_tsv()).map_err(io)?;
    Ok(EXIT_OK)
}
