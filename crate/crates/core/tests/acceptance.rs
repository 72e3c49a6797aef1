//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! cargo test -p shapeseq --test acceptance

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shapeseq::pipeline::PipelineConfig;
use shapeseq::procrustes;
use shapeseq::retrieval::{build_index, load_shapes, occlusion_sweep, OcclusionOffset, ScoreTable};
use shapeseq::seqalign::{
    align_score, AlignParams, Score, SubstitutionMatrix, Symbol, SymbolString,
};
use shapeseq::shape_context::{
    self, correspond, match_cost, BinConfig, Correspondence, CostMatrix, Histogram,
};
use shapeseq::symbolic::{encode, QuantizationConfig};
use shapeseq::{synth, Contour, Point};

const VECTOR_BUDGET: Duration = Duration::from_millis(1);
const ORACLE_PAIRS: usize = 1000;
const ORACLE_MAX_LEN: usize = 6;
const ORACLE_BUDGET: Duration = Duration::from_secs(30);
const INVARIANCE_POLYGONS: usize = 40;
const MATCH_COST_PAIRS: usize = 1000;
const PROCRUSTES_TOL: f64 = 1e-9;
const PROCRUSTES_TRIALS: usize = 50;
const CORRESPOND_INSTANCES_PER_SHAPE: usize = 6;
const CORRESPOND_MAX: usize = 6;
const CORRESPOND_TOL: f64 = 1e-9;
const BENCH_PER_CLASS: usize = 5;
const BENCH_SEED: u64 = 7;
const BENCH_TOP_K: usize = 4;
const BENCH_MIN_RETRIEVAL: f64 = 80.0;
const BENCH_BUDGET: Duration = Duration::from_secs(60);
const OCCLUSION_KS: [usize; 3] = [4, 5, 6];
const OCCLUSION_BUDGET: Duration = Duration::from_secs(120);

type Outcome = Result<String, String>;

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("test vector scores 7", test_vector),
        ("alignment matches brute force", alignment_oracle),
        ("substitution table audit", matrix_audit),
        ("pose and scale invariance", invariance),
        ("match cost properties", match_cost_properties),
        ("procrustes exactness", procrustes_exactness),
        (
            "correspondence matches exhaustive search",
            correspondence_oracle,
        ),
        ("mini-benchmark", mini_benchmark),
        ("occlusion degrades recognition", occlusion),
        ("deterministic command output", determinism),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({secs:.2}s)", n + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail} ({secs:.2}s)", n + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn test_vector() -> Outcome {
    let a: SymbolString = "BLMALSCMM".parse().map_err(|e| format!("{e}"))?;
    let b: SymbolString = "AMLALM".parse().map_err(|e| format!("{e}"))?;
    let p = AlignParams::default();
    let mut best = Duration::MAX;
    let mut score = Score::from_integer(0);
    for _ in 0..5 {
        let t = Instant::now();
        score = align_score(&a, &b, &p).score;
        best = best.min(t.elapsed());
    }
    ensure(score == Score::from_integer(7), || format!("score {score}"))?;
    ensure(best < VECTOR_BUDGET, || format!("took {best:?}"))?;
    Ok(format!("score {score} in {best:?}"))
}

fn literal_table() -> [[Score; 9]; 9] {
    const ROWS: [&str; 9] = [
        "2 1 1/2 1/3 1/4 1/5 -2 -2 -2",
        "1 2 1 1/2 1/3 1/4 -2 -2 -2",
        "1/2 1 2 1 1/2 1/3 -2 -2 -2",
        "1/3 1/2 1 2 1 1/2 -2 -2 -2",
        "1/4 1/3 1/2 1 2 1 -2 -2 -2",
        "1/5 1/4 1/3 1/2 1 2 -2 -2 -2",
        "-2 -2 -2 -2 1/2 -2 2 1 1/2",
        "-2 -2 -2 -2 -2 -2 1 2 1",
        "-2 -2 -2 -2 -2 -2 1/2 1 2",
    ];
    let mut t = [[Score::from_integer(0); 9]; 9];
    for (i, row) in ROWS.iter().enumerate() {
        for (j, cell) in row.split_whitespace().enumerate() {
            t[i][j] = cell.parse().unwrap();
        }
    }
    // the printed S-E entry is the only asymmetric cell; the E-S side wins
    t[6][4] = Score::from_integer(-2);
    t
}

/// Best score over every monotone alignment in which a prefix of one of
/// the strings overhangs the start for free, enumerated path by path.
fn brute_force(a: &[Symbol], b: &[Symbol], t: &[[Score; 9]; 9], gap: Score) -> Score {
    fn paths(
        a: &[Symbol],
        b: &[Symbol],
        t: &[[Score; 9]; 9],
        gap: Score,
        acc: Score,
        best: &mut Score,
    ) {
        match (a.split_first(), b.split_first()) {
            (None, None) => *best = (*best).max(acc),
            (Some((_, ra)), None) => paths(ra, b, t, gap, acc + gap, best),
            (None, Some((_, rb))) => paths(a, rb, t, gap, acc + gap, best),
            (Some((x, ra)), Some((y, rb))) => {
                paths(ra, rb, t, gap, acc + t[x.index()][y.index()], best);
                paths(ra, b, t, gap, acc + gap, best);
                paths(a, rb, t, gap, acc + gap, best);
            }
        }
    }
    let starts = (0..=a.len())
        .map(|p| (p, 0))
        .chain((1..=b.len()).map(|q| (0, q)));
    let mut best = Score::from_integer(i64::MIN / 4);
    for (p, q) in starts {
        paths(&a[p..], &b[q..], t, gap, Score::from_integer(0), &mut best);
    }
    best
}

fn random_string(rng: &mut ChaCha8Rng, max: usize) -> SymbolString {
    let len = rng.gen_range(0..=max);
    SymbolString::new((0..len).map(|_| Symbol::ALL[rng.gen_range(0..9)]).collect())
}

fn alignment_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = AlignParams::default();
    let t = literal_table();
    let start = Instant::now();
    for n in 0..ORACLE_PAIRS {
        let (a, b) = (
            random_string(&mut rng, ORACLE_MAX_LEN),
            random_string(&mut rng, ORACLE_MAX_LEN),
        );
        let dp = align_score(&a, &b, &p).score;
        let oracle = brute_force(a.symbols(), b.symbols(), &t, p.gap);
        ensure(dp == oracle, || {
            format!("pair {n} {a}/{b}: dp {dp}, brute force {oracle}")
        })?;
    }
    let took = start.elapsed();
    ensure(took < ORACLE_BUDGET, || format!("took {took:?}"))?;
    Ok(format!("{ORACLE_PAIRS} pairs exact"))
}

fn matrix_audit() -> Outcome {
    let m = SubstitutionMatrix::standard();
    let t = literal_table();
    for a in Symbol::ALL {
        for b in Symbol::ALL {
            let got = m.get(a, b);
            ensure(got == t[a.index()][b.index()], || format!("{a}-{b}: {got}"))?;
            ensure(got == m.get(b, a), || format!("{a}-{b} asymmetric"))?;
        }
        ensure(m.get(a, a) == Score::from_integer(2), || {
            format!("{a}-{a} diagonal")
        })?;
    }
    Ok("81 entries, symmetric, diagonal 2".into())
}

fn random_polygon(rng: &mut ChaCha8Rng) -> Vec<Point> {
    let n = rng.gen_range(5..12);
    let mut angles: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    angles.sort_by(f64::total_cmp);
    angles
        .into_iter()
        .map(|a| {
            let r = rng.gen_range(0.5..2.0);
            Point::new(r * a.cos(), r * a.sin())
        })
        .collect()
}

fn invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let q = QuantizationConfig::default();
    let bins = BinConfig::default();
    let mut checked = 0;
    while checked < INVARIANCE_POLYGONS {
        let Ok(c) = synth::sample_polygon(&random_polygon(&mut rng), 100) else {
            continue;
        };
        let base = encode(&c, &q).map_err(|e| e.to_string())?;
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let scale = rng.gen_range(0.2..5.0);
        let shift = Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
        let moved = c
            .map_points(|p| p.rotated(theta) * scale + shift)
            .map_err(|e| e.to_string())?;
        let other = encode(&moved, &q).map_err(|e| e.to_string())?;
        ensure(other == base, || {
            format!("polygon {checked}: string changed under pose")
        })?;

        let scaled = c.map_points(|p| p * scale).map_err(|e| e.to_string())?;
        let h0 = shape_context::descriptor(c.points(), &bins).map_err(|e| e.to_string())?;
        let h1 = shape_context::descriptor(scaled.points(), &bins).map_err(|e| e.to_string())?;
        ensure(h0.histograms() == h1.histograms(), || {
            format!("polygon {checked}: histograms changed under scale")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} polygons"))
}

fn random_histogram(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.4) {
                0
            } else {
                rng.gen_range(1..8)
            }
        })
        .collect()
}

fn match_cost_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut zeros = 0;
    for n in 0..MATCH_COST_PAIRS {
        let bins = rng.gen_range(1..=60);
        let g = random_histogram(&mut rng, bins);
        let h = if n % 4 == 0 {
            let f = rng.gen_range(1..4);
            g.iter().map(|c| c * f).collect()
        } else {
            random_histogram(&mut rng, bins)
        };
        let (g, h) = (Histogram::new(g), Histogram::new(h));
        let (gh, hg) = match (match_cost(&g, &h), match_cost(&h, &g)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(_), Err(_)) => continue,
            _ => return Err(format!("pair {n}: error on one side only")),
        };
        ensure(gh == hg, || format!("pair {n}: {gh} vs {hg}"))?;
        ensure((0.0..=1.0).contains(&gh), || {
            format!("pair {n}: {gh} out of range")
        })?;
        let equal = g.normalized() == h.normalized();
        ensure((gh == 0.0) == equal, || {
            format!("pair {n}: cost {gh}, equal {equal}")
        })?;
        zeros += usize::from(equal);
    }
    Ok(format!("{MATCH_COST_PAIRS} pairs, {zeros} equal"))
}

fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

fn procrustes_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_res, mut worst_rot) = (0.0f64, 0.0f64);
    for n in 0..PROCRUSTES_TRIALS {
        let a = Contour::new(random_polygon(&mut rng)).map_err(|e| e.to_string())?;
        let id = Correspondence::identity(a.len());
        let theta = rng.gen_range(-3.0..3.0);
        let shift = Point::new(rng.gen_range(-20.0..20.0), rng.gen_range(-20.0..20.0));
        let b = a
            .map_points(|p| p.rotated(theta) + shift)
            .map_err(|e| e.to_string())?;
        let fit = procrustes::align(&a, &b, &id).map_err(|e| e.to_string())?;
        worst_res = worst_res.max(fit.rms_residual);
        worst_rot = worst_rot.max(angle_diff(fit.transform.rotation, -theta));
        ensure(fit.rms_residual < PROCRUSTES_TOL, || {
            format!("trial {n}: residual {}", fit.rms_residual)
        })?;
        ensure(worst_rot < PROCRUSTES_TOL, || {
            format!("trial {n}: rotation off by {worst_rot}")
        })?;

        let doubled = a.map_points(|p| p * 2.0).map_err(|e| e.to_string())?;
        let fit = procrustes::align(&a, &doubled, &id).map_err(|e| e.to_string())?;
        ensure(fit.rms_residual > 0.0, || {
            format!("trial {n}: scaling absorbed")
        })?;
    }
    Ok(format!(
        "max residual {worst_res:.1e}, max rotation error {worst_rot:.1e}"
    ))
}

fn combinations(n: usize, t: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == t)
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect()
}

fn exhaustive(m: &CostMatrix, skip: f64) -> f64 {
    let (n, k) = (m.rows(), m.cols());
    let mut best = f64::INFINITY;
    for offset in 0..k {
        for t in 0..=n.min(k) {
            for rows in combinations(n, t) {
                for cols in combinations(k, t) {
                    let matched: f64 = rows
                        .iter()
                        .zip(&cols)
                        .map(|(&i, &j)| m.get(i, (j + offset) % k))
                        .sum();
                    best = best.min(matched + skip * (n + k - 2 * t) as f64);
                }
            }
        }
    }
    best
}

fn correspondence_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let skip = shape_context::DEFAULT_SKIP_PENALTY;
    let mut count = 0;
    for rows in 1..=CORRESPOND_MAX {
        for cols in 1..=CORRESPOND_MAX {
            for _ in 0..CORRESPOND_INSTANCES_PER_SHAPE {
                let coarse = rng.gen_bool(0.3);
                let entries = (0..rows * cols)
                    .map(|_| {
                        let v: f64 = rng.gen_range(0.0..1.0);
                        if coarse {
                            (v * 4.0).floor() / 10.0
                        } else {
                            v
                        }
                    })
                    .collect();
                let m = CostMatrix::new(rows, cols, entries).map_err(|e| e.to_string())?;
                let got = correspond(&m, skip).map_err(|e| e.to_string())?;
                let want = exhaustive(&m, skip);
                ensure((got.total_cost - want).abs() < CORRESPOND_TOL, || {
                    format!("{rows}x{cols}: dp {}, exhaustive {want}", got.total_cost)
                })?;
                let matched: f64 = got.pairs.iter().map(|&(i, j)| m.get(i, j)).sum();
                let skipped = rows + cols - 2 * got.pairs.len();
                let recomputed = matched + skip * skipped as f64;
                ensure((recomputed - got.total_cost).abs() < CORRESPOND_TOL, || {
                    format!(
                        "{rows}x{cols}: pairs cost {recomputed}, reported {}",
                        got.total_cost
                    )
                })?;
                let shifted: Vec<usize> = got
                    .pairs
                    .iter()
                    .map(|&(_, j)| (j + cols - got.offset) % cols)
                    .collect();
                ensure(shifted.windows(2).all(|w| w[0] < w[1]), || {
                    format!("{rows}x{cols}: pairs not monotone")
                })?;
                count += 1;
            }
        }
    }
    Ok(format!(
        "{count} matrices up to {CORRESPOND_MAX}x{CORRESPOND_MAX}"
    ))
}

fn mini_benchmark() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let manifest = synth::write_benchmark_set(dir.path(), BENCH_PER_CLASS, BENCH_SEED)
        .map_err(|e| e.to_string())?;
    let report = build_index(&manifest, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    ensure(report.failures.is_empty(), || {
        format!("{} shapes failed", report.failures.len())
    })?;
    let table = ScoreTable::new(&report.index).map_err(|e| e.to_string())?;
    let retrieval = table
        .retrieval_score(BENCH_TOP_K)
        .map_err(|e| e.to_string())?;
    let recognition = table.recognition_score().map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let summary = format!("recognition {recognition:.3}%, retrieval@{BENCH_TOP_K} {retrieval:.3}%");
    ensure(recognition == 100.0, || summary.clone())?;
    ensure(retrieval >= BENCH_MIN_RETRIEVAL, || summary.clone())?;
    ensure(took < BENCH_BUDGET, || format!("{summary}, took {took:?}"))?;
    Ok(summary)
}

fn occlusion() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let manifest = synth::write_benchmark_set(dir.path(), BENCH_PER_CLASS, BENCH_SEED)
        .map_err(|e| e.to_string())?;
    let cfg = PipelineConfig::default();
    let (shapes, failures) = load_shapes(&manifest, &cfg);
    ensure(failures.is_empty(), || {
        format!("{} shapes failed", failures.len())
    })?;
    let table = occlusion_sweep(
        &shapes,
        &cfg,
        &[0.0, 0.5],
        &OCCLUSION_KS,
        OcclusionOffset::default(),
    )
    .map_err(|e| e.to_string())?;
    let took = start.elapsed();
    let mut parts = Vec::new();
    for (ki, k) in OCCLUSION_KS.iter().enumerate() {
        let (intact, half) = (table.get(0, ki), table.get(1, ki));
        parts.push(format!("k={k} {intact:.1}%->{half:.1}%"));
        ensure(intact >= half, || parts.join(", "))?;
    }
    ensure(took < OCCLUSION_BUDGET, || format!("took {took:?}"))?;
    Ok(parts.join(", "))
}

fn run_twice(args: &[&str]) -> Result<Vec<u8>, String> {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_shapeseq"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&a.stderr))
    })?;
    ensure(
        a.stdout == b.stdout && a.status.code() == b.status.code(),
        || format!("{args:?} differs between runs"),
    )?;
    Ok(a.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let manifest = synth::write_benchmark_set(dir.path(), 3, 12).map_err(|e| e.to_string())?;
    let mpath = dir.path().join("manifest.tsv");
    std::fs::write(&mpath, manifest.to_tsv()).map_err(|e| e.to_string())?;
    let m = mpath.to_str().unwrap();
    let img = manifest.entries()[0]
        .image_path
        .to_str()
        .unwrap()
        .to_string();
    let img2 = manifest.entries()[5]
        .image_path
        .to_str()
        .unwrap()
        .to_string();
    let (i1, i2) = (dir.path().join("1.idx"), dir.path().join("2.idx"));
    let (i1, i2) = (i1.to_str().unwrap(), i2.to_str().unwrap());

    let commands: Vec<Vec<&str>> = vec![
        vec!["encode", &img, &img2],
        vec!["match", &img, &img2],
        vec!["--full-pipeline", "match", &img, &img2],
        vec!["match", "--strings", "BLMALSCMM", "AMLALM"],
        vec!["index", m, "-o", i1],
        vec!["query", i1, &img],
        vec!["query", i1, "--string", "BLMALSCMM"],
        vec!["benchmark", i1],
        vec!["benchmark", m],
        vec!["occlusion", m, "--fractions", "0,0.25,0.5"],
    ];
    for args in &commands {
        run_twice(args)?;
    }
    run_twice(&["index", m, "-o", i2])?;
    let (a, b) = (
        std::fs::read(i1).map_err(|e| e.to_string())?,
        std::fs::read(i2).map_err(|e| e.to_string())?,
    );
    ensure(a == b, || "index files differ".into())?;
    Ok(format!(
        "{} commands, index files identical",
        commands.len() + 1
    ))
}
