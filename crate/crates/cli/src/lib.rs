//! Configuration and subcommand pipelines for the `fqcodes` binary.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0  | success |
//! | 2  | command-line usage error |
//! | 3  | invalid configuration |
//! | 4  | I/O failure |
//! | 5  | code construction failed |
//! | 10 | verification failed: commutation or logical algebra |
//! | 11 | verification failed: structure (padding, locality, census, accounting, sectors, projection) |
//! | 12 | decoder consistency abort during sampling |

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use fqcodes::decoder::{
    crossing_estimate, fit_alpha, run_montecarlo, write_csv, ConcatenatedDecoder, DecoderStats, NoiseKind,
    NoiseModel,
};
use fqcodes::lattice::Boundary;
use fqcodes::pauli::{read_check_matrix, write_check_matrix};
use fqcodes::verifier::{check_code, check_projection, estimate_distance, DistanceBudget, VerificationReport};
use fqcodes::{assemble, BlockId, CodeBundle, ConcatenatedCode, FqError, LayoutSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_BUILD: i32 = 5;
pub const EXIT_VERIFY_ALGEBRA: i32 = 10;
pub const EXIT_VERIFY_STRUCTURE: i32 = 11;
pub const EXIT_DECODER_ABORT: i32 = 12;

/// Checks whose failure maps to [`EXIT_VERIFY_ALGEBRA`].
const ALGEBRA_CHECKS: &[&str] = &["stabilizers-commute", "logicals-commute", "logical-algebra"];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Build(#[from] FqError),
    #[error("verification failed: {}", .failed.join(", "))]
    Verify { failed: Vec<String>, algebra: bool },
    #[error("{aborts} decoder aborts at p={p}: {first}")]
    DecoderAbort { p: f64, aborts: u64, first: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Io { .. } => EXIT_IO,
            Self::Build(_) => EXIT_BUILD,
            Self::Verify { algebra: true, .. } => EXIT_VERIFY_ALGEBRA,
            Self::Verify { algebra: false, .. } => EXIT_VERIFY_STRUCTURE,
            Self::DecoderAbort { .. } => EXIT_DECODER_ABORT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dim: usize,
    pub d_fq: usize,
    /// One or more block distances; sampling sweeps over all of them.
    pub d_ff: Vec<usize>,
    /// `[n_bx, n_by, n_bz]`.
    pub blocks: [usize; 3],
    pub omit: Vec<BlockId>,
    pub boundary: Boundary,
    pub noise: NoiseKind,
    pub p: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub out: PathBuf,
    pub with_sector: bool,
}

impl RunConfig {
    pub fn layout(&self, d_ff: usize) -> LayoutSpec {
        let [x, y, z] = self.blocks;
        let mut spec = if self.dim == 3 {
            LayoutSpec::new_3d(d_ff, x, y, z)
        } else {
            LayoutSpec::new_2d(d_ff, x, y)
        };
        spec.d_fq = self.d_fq;
        spec.omit = self.omit.clone();
        spec
    }
}

const KEYS: &[&str] = &[
    "dim", "d_fq", "d_ff", "blocks", "omit", "boundary", "noise", "p", "trials", "seed", "out", "with_sector",
];

fn canonical_key(k: &str) -> String {
    match k.trim() {
        "d_Ff" | "d_FF" => "d_ff".into(),
        "dimension" => "dim".into(),
        other => other.to_string(),
    }
}

fn parse_list<T: std::str::FromStr>(v: &str) -> std::result::Result<Vec<T>, String>
where
    T::Err: fmt::Display,
{
    v.split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

/// Parse a config in `key = value` lines (`#` comments) or a JSON object.
/// Every problem is reported, not just the first.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut errors = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    if text.trim_start().starts_with('{') {
        match serde_json::from_str::<serde_json::Map<String, serde_json::Value>>(text) {
            Ok(map) => {
                for (k, v) in map {
                    let s = match v {
                        serde_json::Value::String(s) => s,
                        serde_json::Value::Array(items) => items
                            .iter()
                            .map(|i| match i {
                                serde_json::Value::String(s) => s.clone(),
                                other => other.to_string(),
                            })
                            .collect::<Vec<_>>()
                            .join(if k == "omit" { ";" } else { "," }),
                        other => other.to_string(),
                    };
                    pairs.push((k, s));
                }
            }
            Err(e) => return Err(CliError::Config(vec![format!("malformed JSON: {e}")])),
        }
    } else {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match line.split_once('=') {
                Some((k, v)) => pairs.push((k.trim().to_string(), v.trim().to_string())),
                None => errors.push(format!("line {}: expected key = value", i + 1)),
            }
        }
    }

    let mut dim = 2usize;
    let mut d_fq: Option<usize> = None;
    let mut d_ff: Vec<usize> = Vec::new();
    let mut blocks: Option<Vec<usize>> = None;
    let mut omit = Vec::new();
    let mut boundary = Boundary::Periodic;
    let mut noise = NoiseKind::IidXz;
    let mut p = vec![0.001, 0.005, 0.02];
    let mut trials = 10_000u64;
    let mut seed = 0u64;
    let mut out = PathBuf::from("out");
    let mut with_sector = false;

    let mut seen = std::collections::BTreeSet::new();
    for (k, v) in pairs {
        let key = canonical_key(&k);
        if !KEYS.contains(&key.as_str()) {
            errors.push(format!("unknown key {k:?}"));
            continue;
        }
        if !seen.insert(key.clone()) {
            errors.push(format!("duplicate key {k:?}"));
            continue;
        }
        let mut bad = |msg: String| errors.push(format!("{key}: {msg}"));
        match key.as_str() {
            "dim" => match v.parse() {
                Ok(d @ (2 | 3)) => dim = d,
                Ok(d) => bad(format!("must be 2 or 3 (got {d})")),
                Err(e) => bad(e.to_string()),
            },
            "d_fq" => match v.parse() {
                Ok(q) => d_fq = Some(q),
                Err(e) => bad(e.to_string()),
            },
            "d_ff" => match parse_list::<usize>(&v) {
                Ok(ds) if ds.is_empty() => bad("empty list".into()),
                Ok(ds) => d_ff = ds,
                Err(e) => bad(e),
            },
            "blocks" => match parse_list::<usize>(&v.replace('x', ",")) {
                Ok(b) => blocks = Some(b),
                Err(e) => bad(e),
            },
            "omit" => {
                for item in v.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                    let item = item.trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']');
                    match parse_list::<usize>(item).as_deref() {
                        Ok([x, y]) => omit.push(BlockId { x: *x, y: *y, z: 0 }),
                        Ok([x, y, z]) => omit.push(BlockId { x: *x, y: *y, z: *z }),
                        _ => bad(format!("cannot read block {item:?}")),
                    }
                }
            }
            "boundary" => match v.trim().to_ascii_lowercase().as_str() {
                "periodic" => boundary = Boundary::Periodic,
                "open" => bad("only periodic layouts are supported".into()),
                other => bad(format!("unknown boundary {other:?}")),
            },
            "noise" => match v.parse() {
                Ok(n) => noise = n,
                Err(e) => bad(e.to_string()),
            },
            "p" => match parse_list::<f64>(&v) {
                Ok(ps) if ps.is_empty() => bad("empty list".into()),
                Ok(ps) => {
                    if let Some(x) = ps.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                        bad(format!("{x} is outside [0, 1]"));
                    } else {
                        p = ps;
                    }
                }
                Err(e) => bad(e),
            },
            "trials" => match v.parse() {
                Ok(0) => bad("must be at least 1".into()),
                Ok(t) => trials = t,
                Err(e) => bad(e.to_string()),
            },
            "seed" => match v.parse() {
                Ok(s) => seed = s,
                Err(e) => bad(e.to_string()),
            },
            "out" => out = PathBuf::from(v.trim_matches('"')),
            "with_sector" => match v.parse() {
                Ok(b) => with_sector = b,
                Err(e) => bad(e.to_string()),
            },
            _ => unreachable!(),
        }
    }

    if d_ff.is_empty() {
        errors.push("d_ff: required".into());
    }
    for &d in &d_ff {
        if d < 3 || d % 2 == 0 {
            errors.push(format!("d_Ff must be odd ≥ 3 (got {d})"));
        }
    }
    let d_fq = d_fq.unwrap_or(dim);
    if dim == 3 && d_fq != 3 {
        errors.push(format!("3D codes require d_fq = 3 (got {d_fq})"));
    }
    if dim == 2 && d_fq != 2 {
        errors.push(format!("2D codes require d_fq = 2 (got {d_fq})"));
    }
    let blocks = match blocks {
        None if dim == 3 => [1, 2, 2],
        None => [1, 2, 1],
        Some(b) if b.len() == dim => [b[0], b[1], if dim == 3 { b[2] } else { 1 }],
        Some(b) => {
            errors.push(format!("blocks: expected {dim} counts, got {}", b.len()));
            [1, 2, 1]
        }
    };
    if blocks.contains(&0) {
        errors.push("blocks: counts must be positive".into());
    }
    if blocks[1] % 2 == 1 {
        errors.push("blocks: the second count must be even".into());
    }
    for b in &omit {
        if b.x >= blocks[0] || b.y >= blocks[1] || b.z >= blocks[2] {
            errors.push(format!("omit: block ({},{},{}) is outside the grid", b.x, b.y, b.z));
        }
    }

    if errors.is_empty() {
        Ok(RunConfig {
            dim,
            d_fq,
            d_ff,
            blocks,
            omit,
            boundary,
            noise,
            p,
            trials,
            seed,
            out,
            with_sector,
        })
    } else {
        Err(CliError::Config(errors))
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    parse_config(&read(path)?)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn tag(cfg: &RunConfig, d_ff: usize) -> String {
    format!("d{}_{}", cfg.dim, d_ff)
}

pub fn build(cfg: &RunConfig) -> Result<Vec<ConcatenatedCode>, CliError> {
    cfg.d_ff
        .iter()
        .map(|&d| {
            let code = assemble(&cfg.layout(d))?;
            write(&cfg.out.join(format!("code_{}.json", tag(cfg, d))), &CodeBundle::from_code(&code).to_json())?;
            println!(
                "built d_fq={} d_Ff={} N_F={} n={} padding={}",
                code.params.d_fq,
                code.params.d_ff,
                code.n_f(),
                code.n_qubits(),
                code.padding.len()
            );
            Ok(code)
        })
        .collect()
}

pub fn verify(cfg: &RunConfig) -> Result<VerificationReport, CliError> {
    let mut all = VerificationReport::default();
    for &d in &cfg.d_ff {
        let code = assemble(&cfg.layout(d))?;
        let mut report = check_code(&code);
        if cfg.dim == 3 {
            let flat = cfg.layout(d);
            let c2 = assemble(&LayoutSpec::new_2d(d, flat.n_bx, flat.n_by))?;
            report.extend(check_projection(&code, &c2)?);
        }
        let t = tag(cfg, d);
        write(&cfg.out.join(format!("report_{t}.json")), &report.to_json())?;
        write(&cfg.out.join(format!("report_{t}.txt")), &report.to_string())?;
        print!("{report}");
        all.extend(report);
    }
    let failed: Vec<String> = all.failures().map(|c| c.name.clone()).collect();
    if failed.is_empty() {
        Ok(all)
    } else {
        let algebra = failed.iter().any(|f| ALGEBRA_CHECKS.contains(&f.as_str()));
        Err(CliError::Verify { failed, algebra })
    }
}

pub fn distance(cfg: &RunConfig) -> Result<String, CliError> {
    let mut table = String::from("d_fq,d_Ff,N_F,n_qubits,lower,upper,exact\n");
    for &d in &cfg.d_ff {
        let code = assemble(&cfg.layout(d))?;
        let budget = DistanceBudget {
            seed: cfg.seed,
            ..DistanceBudget::default()
        };
        let est = estimate_distance(&code, &budget)?;
        let row = format!(
            "{},{},{},{},{},{},{}\n",
            code.params.d_fq,
            d,
            code.n_f(),
            code.n_qubits(),
            est.lower,
            est.upper,
            est.exact
        );
        print!("{row}");
        table.push_str(&row);
    }
    write(&cfg.out.join("distance.csv"), &table)?;
    Ok(table)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitSummary {
    pub p: f64,
    pub alpha: Option<fqcodes::decoder::AlphaFit>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleSummary {
    pub fits: Vec<FitSummary>,
    /// Crossing of the two smallest distances, when bracketed by the sweep.
    pub crossing: Option<f64>,
}

pub fn sample(cfg: &RunConfig) -> Result<Vec<DecoderStats>, CliError> {
    let mut stats = Vec::new();
    for &d in &cfg.d_ff {
        let code = assemble(&cfg.layout(d))?;
        for &p in &cfg.p {
            let q = ConcatenatedDecoder::majorana_rate(&code, p);
            let dec = ConcatenatedDecoder::new(&code, q)?;
            let model = NoiseModel::new(cfg.noise, p)?;
            let trials = cfg.trials;
            let progress = |done: u64| {
                if trials >= 10 && done % (trials / 10).max(1) < fqcodes::decoder::CHUNK {
                    eprintln!("  d_Ff={d} p={p}: {done}/{trials}");
                }
            };
            let s = run_montecarlo(&dec, &model, trials, cfg.seed, &progress);
            if s.aborts > 0 {
                return Err(CliError::DecoderAbort {
                    p,
                    aborts: s.aborts,
                    first: s.first_abort.clone().unwrap_or_default(),
                });
            }
            println!("{}", s.csv_row(cfg.with_sector));
            stats.push(s);
        }
    }
    write(&cfg.out.join("samples.csv"), &write_csv(&stats, cfg.with_sector))?;
    let fits = cfg
        .p
        .iter()
        .map(|&p| {
            let at: Vec<DecoderStats> = stats.iter().filter(|s| s.p == p).cloned().collect();
            FitSummary { p, alpha: fit_alpha(&at) }
        })
        .collect();
    let mut ds = cfg.d_ff.clone();
    ds.sort_unstable();
    ds.dedup();
    let crossing = (ds.len() >= 2).then(|| {
        let by = |d: usize| stats.iter().filter(|s| s.d_ff == d).cloned().collect::<Vec<_>>();
        crossing_estimate(&by(ds[0]), &by(ds[1]))
    });
    let summary = SampleSummary {
        fits,
        crossing: crossing.flatten(),
    };
    write(
        &cfg.out.join("fit.json"),
        &serde_json::to_string_pretty(&summary).expect("summary serializes"),
    )?;
    Ok(stats)
}

/// Write stabilizer and logical check matrices and confirm they read back.
pub fn export(cfg: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let mut paths = Vec::new();
    for &d in &cfg.d_ff {
        let code = assemble(&cfg.layout(d))?;
        let t = tag(cfg, d);
        let stabs = code.stabilizers();
        let logicals: Vec<_> = code.logicals.iter().map(|l| l.op.clone()).collect();
        for (name, ops) in [("stabilizers", &stabs), ("logicals", &logicals)] {
            let path = cfg.out.join(format!("{name}_{t}.txt"));
            let text = write_check_matrix(code.n_qubits(), ops);
            write(&path, &text)?;
            let (n, back) = read_check_matrix(&read(&path)?)?;
            if n != code.n_qubits() || &back != ops {
                return Err(CliError::Build(FqError::InvariantViolation(format!(
                    "{} does not round-trip",
                    path.display()
                ))));
            }
            paths.push(path);
        }
        let labels: String = code.logicals.iter().map(|l| l.label() + "\n").collect();
        let path = cfg.out.join(format!("logical_labels_{t}.txt"));
        write(&path, &labels)?;
        paths.push(path);
    }
    for p in &paths {
        println!("wrote {}", p.display());
    }
    Ok(paths)
}
