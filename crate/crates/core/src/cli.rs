//! Command-line front end. `run` does all the work and returns the exit
//! status with the rendered output, so the binary only prints.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::binary::{decompose_binary_detailed, fradeco_rank, mr_rank, RankReport};
use crate::decomposition::{verify_decomposition, Decomposition};
use crate::equations::KnownEquation;
use crate::error::{FradecoError, Result};
use crate::funtf::sample_frame;
use crate::io::{read_decomposition, read_frame, read_symtensor, write_decomposition, write_frame, write_symtensor};
use crate::linalg::RankPolicy;
use crate::power::{eigen_discriminant_binary, robust_eigenvectors, PowerOptions, DEFAULT_MAXIT, DEFAULT_TOL};
use crate::rng::derive_seed;
use crate::tensor::{synthesize, SymTensor};
use crate::variety::{expected_dim, hilbert_value, tangent_dim, HilbertOptions, DEFAULT_COLUMN_BUDGET};
use crate::waring::{waring_frame_search, DEFAULT_RESTARTS};

#[derive(Debug, Parser)]
#[command(name = "fradeco", version, about = "Frame decompositions of symmetric tensors")]
pub struct Cli {
    /// Print the report as one JSON object.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "FRADECO_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample random funtfs.
    Sample {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory for `frame-<k>.txt` files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build `sum_j w_j v_j^d` from a frame file.
    Synth {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, required = true)]
        weights: Vec<f64>,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose a binary form, or a ternary quartic of rank 5.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        /// Frame size; for binary forms defaults to the smallest deficient `M_r`.
        #[arg(long)]
        rank: Option<usize>,
        /// Relative singular-value threshold.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restarts of the ternary quartic search.
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Robust eigenvectors by the tensor power method.
    Eigen {
        #[arg(long = "in")]
        input: PathBuf,
        /// Default: 100 n.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAXIT)]
        maxit: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Dimension of the degree-e part of the ideal of `T_{r,n,d}`.
    Hilbert {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        e: usize,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_COLUMN_BUDGET)]
        budget: usize,
    },
    /// Numerical dimension of `T_{r,n,d}`.
    Dim {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        samples: usize,
    },
    /// Evaluate a known equation at a tensor.
    CheckEq {
        #[arg(long)]
        name: String,
        #[arg(long = "in")]
        input: PathBuf,
        /// Threshold on the normalized value.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Check a decomposition file against a tensor file.
    Verify {
        #[arg(long)]
        tensor: PathBuf,
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

/// Ordered report fields; rendered as `key: value` lines or one JSON object.
#[derive(Debug, Default)]
pub struct Report {
    fields: Vec<(String, Value)>,
}

impl Report {
    fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    fn num(&mut self, key: &str, x: f64) -> &mut Self {
        self.put(key, num(x))
    }

    pub fn to_json(&self) -> String {
        let map: Map<String, Value> = self.fields.iter().cloned().collect();
        Value::Object(map).to_string()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.fields {
            render(&mut s, k, v, 0);
        }
        s
    }
}

/// Non-finite values become strings, since JSON has no infinity.
fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{x}")))
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

fn render(s: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::String(text) if text.contains('\n') => {
            let _ = writeln!(s, "{pad}{key}:");
            s.push_str(text);
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            let _ = writeln!(s, "{pad}{key}:");
            for item in items {
                let line: Vec<String> = match item {
                    Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect(),
                    other => vec![scalar(other)],
                };
                let _ = writeln!(s, "{pad}  {}", line.join(" "));
            }
        }
        Value::Array(items) if items.iter().any(Value::is_array) => {
            let _ = writeln!(s, "{pad}{key}:");
            for item in items {
                let _ = writeln!(s, "{pad}  {}", scalar(item).replace(',', " "));
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(s, "{pad}{key}: {}", parts.join(" "));
        }
        Value::Object(m) => {
            let _ = writeln!(s, "{pad}{key}:");
            for (k, v) in m {
                render(s, k, v, indent + 2);
            }
        }
        other => {
            let _ = writeln!(s, "{pad}{key}: {}", scalar(other));
        }
    }
}

/// What the binary prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: &Cli) -> Outcome {
    let (code, result) = match dispatch(&cli.command) {
        Ok((code, report)) => (code, Ok(report)),
        Err(e) => (e.exit_code(), Err(e)),
    };
    match result {
        Ok(report) => Outcome {
            code,
            stdout: if cli.json {
                report.to_json() + "\n"
            } else {
                report.to_text()
            },
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code,
            stdout: if cli.json {
                json!({"error": e.to_string(), "exit_code": code}).to_string() + "\n"
            } else {
                String::new()
            },
            stderr: format!("error: {e}\n"),
        },
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| FradecoError::Io(format!("{}: {e}", path.display())))
}

fn rank_report_value(rep: &RankReport) -> Value {
    json!({
        "r": rep.r,
        "numerical_rank": rep.numerical_rank,
        "deficient": rep.deficient,
        "gap_ratio": num(rep.gap_ratio),
    })
}

fn put_decomposition(rep: &mut Report, dec: &Decomposition) {
    rep.put("frame", write_frame(dec.frame.matrix()))
        .put("weights", nums(&dec.weights))
        .num("residual", dec.fit_residual)
        .num("frame_residual", dec.frame.residual());
}

fn dispatch(cmd: &Command) -> Result<(u8, Report)> {
    let mut rep = Report::default();
    match cmd {
        Command::Sample { r, n, count, seed, out } => {
            if let Some(dir) = out {
                std::fs::create_dir_all(dir).map_err(|e| FradecoError::Io(format!("{}: {e}", dir.display())))?;
            }
            rep.put("r", *r).put("n", *n).put("count", *count).put("seed", *seed);
            let mut worst = 0.0f64;
            for k in 0..*count {
                let frame = sample_frame(*r, *n, derive_seed(*seed, k as u64))?;
                worst = worst.max(frame.residual());
                let text = write_frame(frame.matrix());
                match out {
                    Some(dir) => {
                        let path = dir.join(format!("frame-{k}.txt"));
                        write_file(&path, &text)?;
                        rep.put(&format!("file_{k}"), path.display().to_string());
                    }
                    None => {
                        rep.put(&format!("frame_{k}"), text);
                    }
                }
            }
            rep.num("max_residual", worst).put("result", *count);
        }
        Command::Synth { frame, weights, d, out } => {
            let v = read_frame(frame)?;
            let t = synthesize(&v, weights, *d)?;
            let text = write_symtensor(&t);
            rep.put("n", t.n()).put("d", t.d()).put("r", v.ncols());
            match out {
                Some(path) => {
                    write_file(path, &text)?;
                    rep.put("file", path.display().to_string());
                }
                None => {
                    rep.put("tensor", text);
                }
            }
            rep.put("result", v.ncols());
        }
        Command::Decompose {
            input,
            rank,
            tol,
            out,
            restarts,
            seed,
        } => {
            let t = read_symtensor(input)?;
            let policy = RankPolicy::with_rel_tol(*tol);
            let (r, dec) = decompose(&t, *rank, &policy, *restarts, *seed, &mut rep)?;
            put_decomposition(&mut rep, &dec);
            if let Some(path) = out {
                write_file(path, &write_decomposition(&dec))?;
                rep.put("file", path.display().to_string());
            }
            rep.put("result", r);
        }
        Command::Eigen {
            input,
            trials,
            seed,
            maxit,
            tol,
        } => {
            let t = read_symtensor(input)?;
            let opts = PowerOptions {
                trials: trials.unwrap_or(100 * t.n()),
                maxit: *maxit,
                tol: *tol,
            };
            let clusters = robust_eigenvectors(&t, &opts, *seed)?;
            let robust = clusters.iter().filter(|c| c.attracting).count();
            let rows: Vec<Value> = clusters
                .iter()
                .map(|c| {
                    json!({
                        "x": nums(&c.x),
                        "basin_count": c.basin_count,
                        "attracting": c.attracting,
                        "spectral_radius": num(c.spectral_radius),
                        "value": num(c.eigenvalue_proxy),
                    })
                })
                .collect();
            rep.put("n", t.n())
                .put("d", t.d())
                .put("trials", opts.trials)
                .put("seed", *seed)
                .put("clusters", rows);
            if t.n() == 2 {
                let disc = eigen_discriminant_binary(&t)?;
                let roots: Vec<Value> = disc
                    .real_roots
                    .iter()
                    .map(|r| json!({"point": nums(&r.point), "multiplicity": r.multiplicity}))
                    .collect();
                rep.put("discriminant", nums(&disc.coeffs)).put("real_eigenvectors", roots);
            }
            rep.put("result", robust);
        }
        Command::Hilbert {
            r,
            n,
            d,
            e,
            samples,
            seed,
            budget,
        } => {
            let opts = HilbertOptions {
                samples: *samples,
                column_budget: *budget,
            };
            let h = hilbert_value(*r, *n, *d, *e, *seed, &opts, &RankPolicy::default())?;
            rep.put("r", h.r)
                .put("n", h.n)
                .put("d", h.d)
                .put("e", h.e)
                .put("ambient_dim", h.ambient_dim)
                .put("samples", h.samples)
                .num("gap_ratio", h.gap_ratio)
                .put("singular_values", nums(&h.singular_values))
                .put("kernel_dim", h.kernel_dim)
                .put("result", h.kernel_dim);
        }
        Command::Dim { r, n, d, seed, samples } => {
            let expected = expected_dim(*r, *n, *d)?;
            let tan = tangent_dim(*r, *n, *d, *seed, *samples, &RankPolicy::default())?;
            rep.put("r", *r)
                .put("n", *n)
                .put("d", *d)
                .put("expected", expected)
                .put("samples", tan.samples)
                .num("gap_ratio", tan.gap_ratio)
                .put("dim", tan.dim)
                .put("result", tan.dim);
        }
        Command::CheckEq { name, input, tol } => {
            let eq = KnownEquation::from_name(name)?;
            let t = read_symtensor(input)?;
            let value = eq.evaluate(&t)?;
            let normalized = eq.evaluate_normalized(&t)?;
            let vanishes = normalized.abs() <= *tol;
            rep.put("name", eq.name())
                .put("degree", eq.degree())
                .num("value", value)
                .num("normalized", normalized)
                .put("vanishes", vanishes)
                .put("result", vanishes as u8);
            return Ok((if vanishes { 0 } else { 1 }, rep));
        }
        Command::Verify { tensor, decomp, tol } => {
            let t = read_symtensor(tensor)?;
            let dec = read_decomposition(decomp)?;
            let v = verify_decomposition(&t, &dec, *tol)?;
            rep.num("coord_residual", v.coord_residual)
                .num("frame_residual", v.frame_residual)
                .num("tol", v.tol)
                .put("pass", v.pass)
                .put("result", v.pass as u8);
            return Ok((if v.pass { 0 } else { 1 }, rep));
        }
    }
    Ok((0, rep))
}

fn decompose(
    t: &SymTensor,
    rank: Option<usize>,
    policy: &RankPolicy,
    restarts: usize,
    seed: u64,
    rep: &mut Report,
) -> Result<(usize, Decomposition)> {
    rep.put("n", t.n()).put("d", t.d());
    match (t.n(), t.d()) {
        (2, _) => {
            let coords = t.binary_coords()?;
            let r = match rank {
                Some(r) => {
                    let report = mr_rank(&coords, r, policy)?;
                    rep.put("ranks", vec![rank_report_value(&report)]);
                    r
                }
                None => {
                    let fr = fradeco_rank(&coords, policy)?;
                    rep.put("ranks", fr.reports.iter().map(rank_report_value).collect::<Vec<_>>());
                    let max_r = fr.reports.last().map_or(2, |x| x.r);
                    fr.first_deficient.ok_or(FradecoError::NoDeficientTemplate { max_r })?
                }
            };
            let b = decompose_binary_detailed(t, r, policy)?;
            rep.put("r", r)
                .put("kernel", nums(&b.kernel))
                .put("frame_form", nums(&b.frame_form))
                .num("condition", b.condition);
            Ok((r, b.decomposition))
        }
        (3, 4) => {
            if let Some(r) = rank.filter(|&r| r != 5) {
                return Err(FradecoError::InvalidArgument(format!(
                    "ternary quartics are decomposed at rank 5 only, got --rank {r}"
                )));
            }
            let found = waring_frame_search(t, restarts, seed, policy)?;
            rep.put("r", 5)
                .put("conic", nums(&found.conic))
                .put("restart", found.restart)
                .num("combined_residual", found.combined_residual);
            Ok((5, found.decomposition))
        }
        (n, d) => Err(FradecoError::InvalidArgument(format!(
            "decompose handles binary forms and ternary quartics, got n = {n}, d = {d}"
        ))),
    }
}
