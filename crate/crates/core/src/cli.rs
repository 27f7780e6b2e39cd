//! Command-line front end. The binary only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 a checked identity failed, 2 invalid input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{AlgebraPresentation, Surface};
use crate::ce::{self, CEComplex, Fault};
use crate::error::{Error, ErrorClass, Result};
use crate::ledger::{self, Adjustment, Check, Route, TorsionVerdict, Verdict};
use crate::linear::{oracle, DimensionTable};
use crate::output::{self, Conventions, WeightRecord};
use crate::scalar::Field;
use crate::selfcheck::{run_selfcheck, SelfcheckConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// Default upper weight.
pub const DEFAULT_MAX_WEIGHT: u32 = 7;

#[derive(Debug, Parser)]
#[command(name = "confspace", version, about = "Homology of unordered configuration spaces of surfaces via Chevalley-Eilenberg complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Betti numbers of B_k(M), or CE homology over F_p with --prime/--field.
    Betti(BettiArgs),
    /// Compare mod-p and rational dimensions for k ≤ p.
    Compare(CompareArgs),
    /// Run the structural checks.
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceKind {
    Torus,
    Closed,
    Punctured,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Pretty,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[arg(long, value_enum)]
    pub surface: Option<SurfaceKind>,
    #[arg(long)]
    pub genus: Option<u32>,
    /// Same as --surface closed.
    #[arg(long, conflicts_with_all = ["surface", "punctured"])]
    pub closed: bool,
    /// Same as --surface punctured.
    #[arg(long, conflicts_with = "surface")]
    pub punctured: bool,
    /// JSON presentation for --surface custom.
    #[arg(long)]
    pub algebra: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    /// A single weight.
    #[arg(long, conflicts_with = "max_weight")]
    pub weight: Option<u32>,
    /// All weights 1..=K.
    #[arg(long)]
    pub max_weight: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct BettiArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Coefficients: Q, F_p or p.
    #[arg(long, conflicts_with = "prime")]
    pub field: Option<String>,
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Recompute with dense elimination and require agreement.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long)]
    pub prime: Option<u64>,
    /// Accepted as an alternative to --prime.
    #[arg(long, conflicts_with = "prime")]
    pub field: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Route k = p = 3 through the operadic weight-3 ledger.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub operadic_char3: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SelfcheckArgs {
    /// Restrict to one surface (default: torus and punctured g = 1, 2).
    #[command(flatten)]
    pub surface: SurfaceArgs,
    #[arg(long, default_value_t = DEFAULT_MAX_WEIGHT)]
    pub max_weight: u32,
    #[arg(long, value_delimiter = ',', default_values_t = vec![3u64, 5, 7])]
    pub primes: Vec<u64>,
    /// Dense oracle comparison (up to weight 4).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub oracle: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

impl SurfaceArgs {
    fn given(&self) -> bool {
        self.surface.is_some() || self.closed || self.punctured || self.algebra.is_some()
    }

    pub fn resolve(&self) -> Result<Surface> {
        let kind = match (self.surface, self.closed, self.punctured) {
            (Some(k), _, _) => k,
            (None, true, _) => SurfaceKind::Closed,
            (None, _, true) => SurfaceKind::Punctured,
            (None, false, false) if self.algebra.is_some() => SurfaceKind::Custom,
            _ => SurfaceKind::Torus,
        };
        if kind != SurfaceKind::Custom && self.algebra.is_some() {
            return Err(Error::InvalidInput("--algebra needs --surface custom".into()));
        }
        match kind {
            SurfaceKind::Torus => match self.genus {
                None | Some(1) => Ok(Surface::torus()),
                Some(g) => Err(Error::InvalidInput(format!("the torus has genus 1, not {g}"))),
            },
            SurfaceKind::Closed => Ok(Surface::closed(self.genus.unwrap_or(1))),
            SurfaceKind::Punctured => Ok(Surface::punctured(self.genus.unwrap_or(1))),
            SurfaceKind::Custom => {
                let path = self
                    .algebra
                    .as_ref()
                    .ok_or_else(|| Error::InvalidInput("--surface custom needs --algebra <path>".into()))?;
                let text = std::fs::read_to_string(path)?;
                let presentation = AlgebraPresentation::from_json(&text)?;
                let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "algebra".into());
                let surface = Surface::Custom { name, presentation };
                // validate eagerly so schema errors surface before any work
                surface.cohomology(Field::rationals())?;
                Ok(surface)
            }
        }
    }
}

impl WeightArgs {
    fn range(&self, default_max: u32) -> Result<Vec<u32>> {
        match (self.weight, self.max_weight) {
            (Some(0), _) | (_, Some(0)) => Err(Error::InvalidInput("weights start at 1".into())),
            (Some(k), _) => Ok(vec![k]),
            (None, Some(m)) => Ok((1..=m).collect()),
            (None, None) => Ok((1..=default_max).collect()),
        }
    }
}

pub fn parse_field(text: &str) -> Result<Field> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
        return Ok(Field::rationals());
    }
    let digits = t.strip_prefix("F_").or_else(|| t.strip_prefix("f_")).or_else(|| t.strip_prefix("F")).unwrap_or(t);
    let p: u64 = digits.parse().map_err(|_| Error::InvalidInput(format!("unrecognised field {text:?}")))?;
    Field::prime(p)
}

fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Mismatch => EXIT_MISMATCH,
        ErrorClass::InvalidInput => EXIT_INVALID,
    }
}

/// Parse `args`, run the command, write results to `out` and diagnostics to
/// `err`, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Betti(a) => cmd_betti(a, out),
        Command::Compare(a) => cmd_compare(a, out),
        Command::Selfcheck(a) => cmd_selfcheck(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn cmd_betti(args: &BettiArgs, out: &mut dyn Write) -> Result<i32> {
    let surface = args.surface.resolve()?;
    let field = match (&args.field, args.prime) {
        (Some(f), _) => parse_field(f)?,
        (None, Some(p)) => Field::prime(p)?,
        (None, None) => Field::rationals(),
    };
    let weights = args.weights.range(DEFAULT_MAX_WEIGHT)?;
    let max = *weights.iter().max().expect("nonempty range");
    let started = Instant::now();
    let g = ce::surface_algebra(&surface, max, field)?;
    let mut table = DimensionTable::new();
    let mut code = EXIT_OK;
    let mut warnings: Vec<String> = surface.scope_warning().into_iter().collect();
    for &k in &weights {
        let cx = CEComplex::build(&g, k)?;
        let h = cx.homology()?;
        if args.oracle {
            let dense = oracle::dense_homology(cx.chain());
            if dense != h {
                warnings.push(format!("dense oracle disagrees at weight {k}"));
                code = EXIT_MISMATCH;
            }
        }
        table.merge(&h);
    }
    log::debug!("betti {surface} over {field}: {:?}", started.elapsed());
    let records = output::records(&surface.to_string(), &field.to_string(), &table, &warnings);
    let records = fill_missing(records, &surface, field, &weights, &warnings);
    let text = match args.format {
        Format::Pretty => output::to_pretty(&records),
        Format::Json => output::to_json(&records)?,
        Format::Csv => output::to_csv(&records),
    };
    emit(out, &text)?;
    Ok(code)
}

/// Weights with zero homology still get a record.
fn fill_missing(mut records: Vec<WeightRecord>, surface: &Surface, field: Field, weights: &[u32], warnings: &[String]) -> Vec<WeightRecord> {
    for &k in weights {
        if !records.iter().any(|r| r.weight == k) {
            let mut r = WeightRecord::from_table(&surface.to_string(), &field.to_string(), &DimensionTable::new(), k);
            r.warnings = warnings.to_vec();
            records.push(r);
        }
    }
    records.sort_by_key(|r| r.weight);
    records
}

#[derive(Debug, Serialize)]
struct CompareRecord {
    surface: String,
    field: String,
    weight: u32,
    route: Route,
    dims_by_total_degree: Vec<usize>,
    min_degree: i64,
    betti: Vec<usize>,
    betti_min_degree: i64,
    verdict: Verdict,
    summary: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    adjustments: Vec<Adjustment>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    checks: Vec<Check>,
    conventions: Conventions,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

impl CompareRecord {
    fn new(v: &TorsionVerdict, field: &str, warnings: &[String]) -> Self {
        let (min_degree, dims) = v.mod_p.dense_totals(v.k);
        let (betti_min_degree, betti) = v.betti.dense_totals(v.k);
        let mut warnings = warnings.to_vec();
        if let Verdict::TotalOnly { degrees } = &v.verdict {
            warnings.push(format!("totals agree but degrees {degrees:?} differ"));
        }
        Self {
            surface: v.surface.clone(),
            field: field.to_string(),
            weight: v.k,
            route: v.route,
            dims_by_total_degree: dims,
            min_degree,
            betti,
            betti_min_degree,
            verdict: v.verdict.clone(),
            summary: v.summary(),
            adjustments: v.report.as_ref().map(|r| r.adjustments.clone()).unwrap_or_default(),
            checks: v.report.as_ref().map(|r| r.checks.clone()).unwrap_or_default(),
            conventions: Conventions::default(),
            warnings,
        }
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn cmd_compare(args: &CompareArgs, out: &mut dyn Write) -> Result<i32> {
    let surface = args.surface.resolve()?;
    let p = match (args.prime, &args.field) {
        (Some(p), _) => p,
        (None, Some(f)) => match parse_field(f)?.characteristic() {
            0 => return Err(Error::InvalidInput("compare needs a prime field".into())),
            p => p,
        },
        (None, None) => return Err(Error::InvalidInput("compare needs --prime".into())),
    };
    let field = Field::prime(p)?;
    let weights = args.weights.range(p.min(u32::MAX as u64) as u32)?;
    if let Some(&k) = weights.iter().find(|&&k| k as u64 > p) {
        return Err(Error::WeightAboveP { k, p });
    }
    let warnings: Vec<String> = surface.scope_warning().into_iter().collect();
    let mut verdicts = Vec::new();
    for &k in &weights {
        verdicts.push(ledger::torsion_verdict_with(&surface, p, k, args.operadic_char3)?);
    }
    let ok = verdicts.iter().all(TorsionVerdict::no_torsion);
    let fname = field.to_string();
    let text = match args.format {
        Format::Json => {
            let recs: Vec<CompareRecord> = verdicts.iter().map(|v| CompareRecord::new(v, &fname, &warnings)).collect();
            serde_json::to_string_pretty(&recs)?
        }
        Format::Csv => {
            let mut recs = Vec::new();
            for v in &verdicts {
                recs.push(WeightRecord::from_table(&v.surface, &fname, &v.mod_p, v.k));
                recs.push(WeightRecord::from_table(&v.surface, "Q", &v.betti, v.k));
            }
            output::to_csv(&recs)
        }
        Format::Pretty => {
            let mut s = format!("{surface}, p = {p}\n");
            for v in &verdicts {
                let route = match v.route {
                    Route::Direct => "direct",
                    Route::WeightP => "weight-p ledger",
                    Route::OperadicChar3 => "char-3 ledger",
                };
                s += &format!(
                    "  k={} [{route}] {fname}: {} | Q: {} | {}\n",
                    v.k,
                    join(&v.mod_p.dense_totals(v.k).1),
                    join(&v.betti.dense_totals(v.k).1),
                    v.summary()
                );
                if let Some(r) = &v.report {
                    for c in &r.checks {
                        s += &format!("      {} {}: {}\n", if c.passed { "ok  " } else { "FAIL" }, c.name, c.detail);
                    }
                }
            }
            for w in &warnings {
                s += &format!("warning: {w}\n");
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

pub fn cmd_selfcheck(args: &SelfcheckArgs, out: &mut dyn Write) -> Result<i32> {
    if args.max_weight == 0 {
        return Err(Error::InvalidInput("weights start at 1".into()));
    }
    let mut config = SelfcheckConfig {
        max_weight: args.max_weight,
        primes: args.primes.clone(),
        oracle_max_weight: if args.oracle { 4 } else { 0 },
        fault: args.inject_fault.then_some(Fault::MixedTermSign),
        ..Default::default()
    };
    if args.surface.given() {
        config.surfaces = vec![args.surface.resolve()?];
    }
    let report = run_selfcheck(&config)?;
    let text = match args.format {
        Format::Json => {
            let rows: Vec<_> = report
                .outcomes
                .iter()
                .map(|o| {
                    serde_json::json!({
                        "surface": o.surface, "field": o.field, "weight": o.weight,
                        "check": o.check, "passed": o.passed, "detail": o.detail,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&serde_json::json!({
                "passed": report.passed(),
                "checks": rows,
                "elapsed_ms": report.elapsed.as_millis() as u64,
            }))?
        }
        Format::Csv => {
            let mut s = String::from("surface,field,weight,check,passed\n");
            for o in &report.outcomes {
                s += &format!("{},{},{},{},{}\n", o.surface, o.field, o.weight, o.check, o.passed);
            }
            s
        }
        Format::Pretty => {
            let mut s = String::new();
            for o in report.failures() {
                s += &format!("{o}\n");
            }
            s += &format!(
                "{} checks, {} failed, {:.2?}\n",
                report.outcomes.len(),
                report.failures().count(),
                report.elapsed
            );
            s
        }
    };
    emit(out, &text)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_MISMATCH })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("confspace").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn field_parsing() {
        assert_eq!(parse_field("Q").unwrap(), Field::rationals());
        assert_eq!(parse_field("F_5").unwrap(), Field::prime(5).unwrap());
        assert_eq!(parse_field("7").unwrap(), Field::prime(7).unwrap());
        assert!(parse_field("F_4").is_err());
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn betti_csv() {
        let (code, out, _) = call(&["betti", "--surface", "torus", "--max-weight", "2", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "surface,field,weight,degree,dim\ntorus,Q,1,0,1\ntorus,Q,1,1,2\ntorus,Q,1,2,1\ntorus,Q,2,0,1\ntorus,Q,2,1,2\ntorus,Q,2,2,1\n"
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["compare", "--surface", "torus", "--prime", "5", "--weight", "6"]).0, 2);
        assert_eq!(call(&["compare", "--surface", "torus", "--prime", "4"]).0, 2);
        assert_eq!(call(&["betti", "--surface", "custom"]).0, 2);
        assert_eq!(call(&["betti", "--bogus"]).0, 2);
        assert_eq!(call(&["selfcheck", "--max-weight", "4", "--primes", "5", "--surface", "torus", "--inject-fault"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
