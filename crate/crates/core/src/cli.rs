//! Command-line front end: one JSON report per invocation.
//!
//! Exit codes: 0 computed, 1 validation failure, 2 resource budget exceeded,
//! 3 usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::amalgam::{
    build_stage, build_stage_with_cap, disjoint, enumerate_extensions, find_gamma_point,
    free_amalgam, schanuel_sweep, AmalgamError, Cap, CatalogOptions, Filter, StagePresentation,
    WitnessOptions,
};
use crate::format::{to_canonical_json, BoundsSpec, FormatError, PresentationFile};
use crate::gamma::{
    classify, delta, gammadim, hull, is_strong, is_strongly_rotund, GammaError, GammaPresentation,
    SweepOptions,
};
use crate::linalg::IntMatrix;
use crate::poly::Budget;

#[derive(Parser, Debug)]
#[command(
    name = "gammaforge",
    version,
    about = "Predimension, rotundity and amalgamation for finitely presented Gamma-fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Flags {
    /// Matrix height for rotundity sweeps and kernel validation.
    #[arg(long, global = true)]
    pub height: Option<u64>,
    /// Subspace height for hulls and Gamma-dimension.
    #[arg(long, global = true)]
    pub subspace_height: Option<u64>,
    /// Search bound for multiplicative relations.
    #[arg(long, global = true)]
    pub g2_bound: Option<u64>,
    /// Groebner basis size limit (GAMMAFORGE_BUDGET takes precedence).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Stage or catalog complexity.
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Output file, written atomically.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Skip the freeness precheck of rotundity sweeps.
    #[arg(long, global = true)]
    pub skip_freeness: bool,
    #[arg(long, global = true, value_enum)]
    pub filter: Option<FilterArg>,
    /// Subspace rows as JSON, e.g. "[[1,0]]".
    #[arg(long, global = true)]
    pub subspace: Option<String>,
    /// Catalog cap "n,deg,height" (overrides --k for enumerate and build-stage).
    #[arg(long, global = true)]
    pub cap: Option<String>,
    /// Stage columns the witness must be independent over, e.g. "0,2".
    #[arg(long, global = true)]
    pub columns: Option<String>,
    /// Add wall-clock timings to the report.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FilterArg {
    All,
    Algebraic,
    Transcendental,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Predimension of the extension or of a subspace.
    Delta { file: PathBuf },
    /// Dimension of the locus or of its image under a subspace matrix.
    Dim { file: PathBuf },
    /// Freeness certificates.
    Free { file: PathBuf },
    /// Rotundity sweep (strongness over the base).
    Rotund { file: PathBuf },
    /// Strong rotundity sweep.
    StronglyRotund { file: PathBuf },
    /// Gamma-algebraic or Gamma-transcendental, and strong or not.
    Classify { file: PathBuf },
    /// Strong closure of a subspace.
    Hull { file: PathBuf },
    /// Gamma-dimension of a subspace.
    Gammadim { file: PathBuf },
    /// Free amalgam of two extensions of the same base.
    Amalgamate { left: PathBuf, right: PathBuf },
    /// Catalog of extensions within a complexity cap.
    Enumerate { file: PathBuf },
    /// Staged amalgam of every catalog entry at complexity k.
    BuildStage { file: PathBuf },
    /// Gamma-point of a target variety inside a stage.
    Witness { stage: PathBuf, target: PathBuf },
    /// Predimension sweep over a stage or presentation.
    Schanuel { file: PathBuf },
    /// Parse a presentation file and check its kernel clauses.
    Validate { file: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Delta { .. } => "delta",
            Command::Dim { .. } => "dim",
            Command::Free { .. } => "free",
            Command::Rotund { .. } => "rotund",
            Command::StronglyRotund { .. } => "strongly-rotund",
            Command::Classify { .. } => "classify",
            Command::Hull { .. } => "hull",
            Command::Gammadim { .. } => "gammadim",
            Command::Amalgamate { .. } => "amalgamate",
            Command::Enumerate { .. } => "enumerate",
            Command::BuildStage { .. } => "build-stage",
            Command::Witness { .. } => "witness",
            Command::Schanuel { .. } => "schanuel",
            Command::Validate { .. } => "validate",
        }
    }
}

/// Result of one invocation.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String, Value),
    Resource(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Gamma(g) => g.into(),
            other => Failure::Validation(other.to_string(), Value::Null),
        }
    }
}

impl From<GammaError> for Failure {
    fn from(e: GammaError) -> Self {
        if e.is_resource_limit() {
            return Failure::Resource(e.to_string());
        }
        let detail = match &e {
            GammaError::KernelViolation { clause, r, x, y } => {
                json!({"clause": clause, "r": r, "x": x, "y": y})
            }
            GammaError::NotFree(rep) => serde_json::to_value(rep).expect("serializable"),
            _ => Value::Null,
        };
        Failure::Validation(e.to_string(), detail)
    }
}

impl From<AmalgamError> for Failure {
    fn from(e: AmalgamError) -> Self {
        match e {
            AmalgamError::Gamma(g) => g.into(),
            AmalgamError::Format(f) => f.into(),
            other => Failure::Validation(other.to_string(), Value::Null),
        }
    }
}

struct Ctx {
    flags: Flags,
}

impl Ctx {
    fn read(&self, path: &Path) -> Result<String, Failure> {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
    }

    fn file(&self, path: &Path) -> Result<PresentationFile, Failure> {
        Ok(PresentationFile::from_json(&self.read(path)?)?)
    }

    fn budget(&self, file: Option<&BoundsSpec>) -> Budget {
        if std::env::var("GAMMAFORGE_BUDGET")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .is_some()
        {
            return Budget::default();
        }
        match self.flags.budget.or(file.and_then(|b| b.budget)) {
            Some(n) => Budget::with_max_basis(n),
            None => Budget::default(),
        }
    }

    /// Bounds from the file, overridden by flags.
    fn bounds(&self, file: &BoundsSpec) -> Result<BoundsSpec, Failure> {
        let b = BoundsSpec {
            matrix_height: self.flags.height.unwrap_or(file.matrix_height),
            subspace_height: self.flags.subspace_height.unwrap_or(file.subspace_height),
            g2_bound: self.flags.g2_bound.unwrap_or(file.g2_bound),
            budget: Some(self.budget(Some(file)).max_basis),
        };
        b.check().map_err(|e| Failure::Usage(e.to_string()))?;
        Ok(b)
    }

    fn presentation(
        &self,
        path: &Path,
    ) -> Result<(GammaPresentation, BoundsSpec, Budget), Failure> {
        let mut f = self.file(path)?;
        f.bounds = self.bounds(&f.bounds)?;
        let budget = self.budget(Some(&f.bounds));
        let p = f.presentation(&budget)?;
        Ok((p, f.bounds, budget))
    }

    fn sweep(&self, bounds: &BoundsSpec, budget: &Budget) -> SweepOptions {
        SweepOptions {
            height: bounds.matrix_height,
            skip_freeness: self.flags.skip_freeness,
            g2_bound: bounds.g2_bound,
            budget: *budget,
        }
    }

    fn subspace(&self, n: usize) -> Result<Option<IntMatrix>, Failure> {
        let Some(s) = &self.flags.subspace else {
            return Ok(None);
        };
        let rows: Vec<Vec<i64>> = serde_json::from_str(s)
            .map_err(|e| Failure::Usage(format!("--subspace must be JSON rows: {e}")))?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Failure::Usage(format!(
                "--subspace rows must have length {n}"
            )));
        }
        Ok(Some(IntMatrix::from_rows(n, &rows)))
    }

    fn cap(&self) -> Result<Cap, Failure> {
        match &self.flags.cap {
            None => Ok(Cap::uniform(self.flags.k.unwrap_or(1))),
            Some(s) => {
                let parts: Vec<u64> = s
                    .split(',')
                    .map(|p| p.trim().parse::<u64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| Failure::Usage("--cap must be n,deg,height".into()))?;
                let [n, d, h] = parts[..] else {
                    return Err(Failure::Usage("--cap must be n,deg,height".into()));
                };
                Ok(Cap {
                    n_max: n as usize,
                    deg_max: d as u32,
                    height_max: h,
                })
            }
        }
    }

    fn columns(&self) -> Result<Vec<usize>, Failure> {
        match &self.flags.columns {
            None => Ok(Vec::new()),
            Some(s) if s.trim().is_empty() => Ok(Vec::new()),
            Some(s) => s
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::Usage("--columns must be comma-separated indices".into())),
        }
    }

    /// Writes `content` to `--out` (or returns it for standard output).
    fn emit(&self, content: &str) -> Result<Option<String>, Failure> {
        match &self.flags.out {
            None => Ok(Some(content.to_string())),
            Some(path) => {
                write_atomic(path, content)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                Ok(None)
            }
        }
    }
}

fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp-{}", std::process::id()));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)
}

fn bounds_json(b: &BoundsSpec) -> Value {
    serde_json::to_value(b).expect("serializable")
}

fn run_command(ctx: &Ctx, cmd: &Command) -> Result<Value, Failure> {
    match cmd {
        Command::Validate { file } => {
            let (p, bounds, budget) = ctx.presentation(file)?;
            Ok(json!({
                "valid": true,
                "n": p.n(),
                "ideal": p.ideal_strings(&budget)?,
                "bounds": bounds_json(&bounds),
            }))
        }
        Command::Delta { file } => {
            let (p, bounds, budget) = ctx.presentation(file)?;
            let sub = ctx.subspace(p.n())?;
            let v = delta(&p, sub.as_ref(), &budget)?;
            Ok(json!({
                "delta": v,
                "n": p.n(),
                "subspace": sub.map(|m| m.to_i64_rows()),
                "bounds": bounds_json(&bounds),
            }))
        }
        Command::Dim { file } => {
            let (p, bounds, budget) = ctx.presentation(file)?;
            let dim = match ctx.subspace(p.n())? {
                None => p.locus().dim(&budget).map_err(GammaError::from)?,
                Some(m) => {
                    let w = crate::linalg::Subspace::span(&m);
                    crate::gamma::Predim::new(&p, &budget).image_dim(&w)?
                }
            };
            Ok(json!({"dim": dim, "n": p.n(), "bounds": bounds_json(&bounds)}))
        }
        Command::Free { file } => {
            let (p, bounds, budget) = ctx.presentation(file)?;
            let rep = p.freeness(bounds.g2_bound, &budget)?;
            Ok(json!({"free": rep.is_free(), "report": rep, "bounds": bounds_json(&bounds)}))
        }
        Command::Rotund { file } | Command::StronglyRotund { file } => {
            let (p, bounds, budget) = ctx.presentation(file)?;
            let opts = ctx.sweep(&bounds, &budget);
            let rep = if matches!(cmd, Command::Rotund { .. }) {
                is_strong(&p, &opts)?
            } else {
                is_strongly_rotund(&p, &opts)?
            };
            Ok(json!({"report": rep, "bounds": bounds_json(&bounds)}))
        }
        Command::Classify { file } => {
            let (p, bounds, budget) = ctx.presentation(file)?;
            let rep = classify(&p, &ctx.sweep(&bounds, &budget))?;
            Ok(json!({
                "classification": rep.classification.name(),
                "report": rep,
                "bounds": bounds_json(&bounds),
            }))
        }
        Command::Hull { file } | Command::Gammadim { file } => {
            let (p, bounds, budget) = ctx.presentation(file)?;
            let seed = ctx
                .subspace(p.n())?
                .ok_or_else(|| Failure::Usage("--subspace is required".into()))?;
            if matches!(cmd, Command::Hull { .. }) {
                let h = hull(&p, &seed, bounds.subspace_height, &budget)?;
                Ok(json!({"hull": h, "bounds": bounds_json(&bounds)}))
            } else {
                let g = gammadim(&p, &seed, bounds.subspace_height, &budget)?;
                Ok(
                    json!({"gammadim": g, "certified_up_to": bounds.subspace_height, "bounds": bounds_json(&bounds)}),
                )
            }
        }
        Command::Amalgamate { left, right } => {
            let (l, bounds, budget) = ctx.presentation(left)?;
            let (r, _, _) = ctx.presentation(right)?;
            let a = free_amalgam(l.base(), &l, &r)?;
            let (dl, dr, da) = (
                delta(&l, None, &budget)?,
                delta(&r, None, &budget)?,
                delta(&a, None, &budget)?,
            );
            let file = PresentationFile::of(&a, bounds.clone(), &budget)?;
            let written = ctx.emit(&to_canonical_json(&file))?;
            Ok(json!({
                "n": a.n(),
                "delta": {"left": dl, "right": dr, "amalgam": da},
                "disjoint": disjoint(l.n(), r.n()),
                "presentation": written.map(|_| serde_json::to_value(&file).expect("serializable")),
                "bounds": bounds_json(&bounds),
            }))
        }
        Command::Enumerate { file } => {
            let f = ctx.file(file)?;
            let bounds = ctx.bounds(&f.bounds)?;
            let budget = ctx.budget(Some(&bounds));
            let base = f.base()?;
            let filter = match ctx.flags.filter.unwrap_or(FilterArg::All) {
                FilterArg::All => Filter::All,
                FilterArg::Algebraic => Filter::GammaAlgebraic,
                FilterArg::Transcendental => Filter::PurelyTranscendental,
            };
            let opts = CatalogOptions {
                g2_bound: bounds.g2_bound,
                budget,
                ..CatalogOptions::default()
            };
            let cat = enumerate_extensions(&base, ctx.cap()?, filter, &opts)?;
            let entries: Vec<Value> = cat
                .entries
                .iter()
                .map(|e| json!({"n": e.n(), "ideal": e.ideal, "delta": e.delta, "verdict": e.verdict}))
                .collect();
            Ok(json!({
                "cap": cat.cap,
                "filter": cat.filter,
                "entries": entries,
                "truncated": cat.truncated,
                "candidates_examined": cat.candidates_examined,
            }))
        }
        Command::BuildStage { file } => {
            let f = ctx.file(file)?;
            let bounds = ctx.bounds(&f.bounds)?;
            let budget = ctx.budget(Some(&bounds));
            let base = f.base()?;
            let opts = CatalogOptions {
                g2_bound: bounds.g2_bound,
                budget,
                ..CatalogOptions::default()
            };
            let k = ctx.flags.k.unwrap_or(1);
            let stage = match ctx.flags.cap {
                Some(_) => build_stage_with_cap(&base, k, ctx.cap()?, &opts)?,
                None => build_stage(&base, k, &opts)?,
            };
            let sf = stage.to_file(&budget)?;
            let written = ctx.emit(&to_canonical_json(&sf))?;
            Ok(json!({
                "stage": sf.stage,
                "cap": sf.cap,
                "n": sf.n,
                "log": sf.log,
                "delta": stage.delta(&budget)?,
                "truncated": sf.truncated,
                "content_hash": sf.content_hash,
                "file": written.map(|_| serde_json::to_value(&sf).expect("serializable")),
            }))
        }
        Command::Witness { stage, target } => {
            let budget = ctx.budget(None);
            let s = StagePresentation::from_json(&ctx.read(stage)?, &budget)?;
            let tf = ctx.file(target)?;
            let bounds = ctx.bounds(&tf.bounds)?;
            let ext = tf
                .extension
                .as_ref()
                .ok_or_else(|| Failure::Usage("target file has no extension".into()))?;
            let v = ext.locus(s.current.base().constants(), &budget)?;
            let opts = WitnessOptions {
                height: bounds.subspace_height,
                g2_bound: bounds.g2_bound,
                budget,
            };
            let res = find_gamma_point(&s, &v, &ctx.columns()?, &opts)?;
            Ok(json!({"result": res, "bounds": bounds_json(&bounds)}))
        }
        Command::Schanuel { file } => {
            let text = ctx.read(file)?;
            let is_stage = serde_json::from_str::<Value>(&text)
                .ok()
                .and_then(|v| {
                    v.get("format")
                        .and_then(|f| f.as_str())
                        .map(|f| f.starts_with("gammaforge-stage"))
                })
                .unwrap_or(false);
            let height = ctx.flags.height.unwrap_or(2);
            let (p, budget) = if is_stage {
                let budget = ctx.budget(None);
                (
                    StagePresentation::from_json(&text, &budget)?.current,
                    budget,
                )
            } else {
                let (p, _, budget) = ctx.presentation(file)?;
                (p, budget)
            };
            let rep = schanuel_sweep(&p, height, &budget)?;
            Ok(json!({"report": rep, "n": p.n()}))
        }
    }
}

/// Parses arguments and runs one command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let ctx = Ctx {
        flags: cli.flags.clone(),
    };
    let name = cli.command.name();
    let start = Instant::now();
    let result = run_command(&ctx, &cli.command);
    let elapsed = start.elapsed();
    let (code, mut report, stderr) = match result {
        Ok(v) => (
            0,
            json!({"command": name, "status": "ok", "result": v}),
            String::new(),
        ),
        Err(f) => {
            let (code, kind, msg, detail) = match f {
                Failure::Usage(m) => (3, "usage", m, Value::Null),
                Failure::Validation(m, d) => (1, "validation", m, d),
                Failure::Resource(m) => (2, "resource", m, Value::Null),
            };
            let stderr = format!("gammaforge {name}: {msg}\n");
            (
                code,
                json!({"command": name, "status": kind, "error": {"message": msg, "detail": detail}}),
                stderr,
            )
        }
    };
    if ctx.flags.timings {
        report["timings"] = json!({"total_ms": elapsed.as_secs_f64() * 1e3});
    }
    Outcome {
        code,
        stdout: to_canonical_json(&report),
        stderr,
    }
}

/// Entry point for the binary; returns the exit code.
pub fn main_with_args() -> i32 {
    let out = run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}
