//! Command-line surface for the one-level-density laboratory: closed-form
//! constants, single-`K` term reports, convergence sweeps over geometric `K`
//! grids, ratios-prediction evaluation, and the verification suite.
//!
//! Artifacts (CSV or JSON) are byte-deterministic for a given configuration;
//! the only non-reproducible content is an optional timestamp header line,
//! suppressed by `--no-timestamp`. Exit codes: 0 success, 1 verification
//! failure (or internal error), 2 usage error, 3 capacity refusal.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hecke_density::density_terms::{
    required_norm_budget, term_report, theorem_prediction, TermOptions, TermReport,
};
use hecke_density::gaussian_arith::PrimeClass;
use hecke_density::ratios_model::{ratios_prediction_r, ShiftPoint};
use hecke_density::special_constants::{
    constants_report, lprime_over_l_series_oracle, ConstantsReport,
};
use hecke_density::test_functions::TestFunction;
use hecke_density::verification::{all_check_names, run_checks, Fault, VerifyConfig};
use hecke_density::{Error, Result};

#[derive(Parser)]
#[command(
    name = "hecke-density",
    version,
    about = "One-level density of low-lying zeros for the quartic Hecke family over Z[i]"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Family size for single-K subcommands
    #[arg(long = "K", global = true)]
    k: Option<u64>,

    /// Smallest K of a sweep grid
    #[arg(long = "K-min", global = true)]
    k_min: Option<u64>,

    /// Largest K of a sweep grid
    #[arg(long = "K-max", global = true)]
    k_max: Option<u64>,

    /// Number of geometric grid points (0 = empty grid)
    #[arg(long = "K-steps", global = true)]
    k_steps: Option<u32>,

    /// Test-function family
    #[arg(long, global = true, default_value = "fejer")]
    family: String,

    /// Fourier-support radius of the test function
    #[arg(long, global = true, default_value_t = 0.5)]
    nu: f64,

    /// Prime cutoff for Euler products and arithmetic constants
    #[arg(long, global = true, default_value_t = 1_000_000)]
    prime_cutoff: u64,

    /// Chebyshev-psi integral cutoff for the expansion coefficients
    #[arg(long, global = true, default_value_t = 1_000_000)]
    psi_cutoff: u64,

    /// Hard ceiling on ideal-norm enumeration (runs needing more are refused)
    #[arg(long, global = true, default_value_t = 1u64 << 32)]
    norm_budget: u64,

    /// Worker threads (0 = library default); results are identical either way
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Write the artifact here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Artifact format (default: csv for sweep/ratios, json for the rest)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Omit the timestamp header line, making output fully reproducible
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the expansion constants and print a readable table
    Constants,
    /// Full term report (both sides of the decomposition) at a single K
    Terms,
    /// Convergence sweep over a geometric K grid, one row per K
    Sweep,
    /// Ratios-conjecture prediction at a real shift point
    Ratios {
        /// Numerator shift α
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Denominator shift γ
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
    },
    /// Run the verification checks and print one verdict line each
    Verify {
        /// Run a single named check instead of the full suite
        #[arg(long)]
        only: Option<String>,
        /// Test fixture: corrupt an internal table to prove checks trip
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Capacity { .. } => ExitCode::from(3),
                Error::Domain(_) | Error::Unsupported(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Error::Consistency(format!("thread pool: {e}")))?;
    }
    match &cli.cmd {
        Cmd::Constants => cmd_constants(cli),
        Cmd::Terms => cmd_terms(cli),
        Cmd::Sweep => cmd_sweep(cli),
        Cmd::Ratios { alpha, gamma } => cmd_ratios(cli, *alpha, *gamma),
        Cmd::Verify { only, inject_fault } => cmd_verify(cli, only.as_deref(), inject_fault.as_deref()),
    }
}

impl Cli {
    fn options(&self) -> TermOptions {
        TermOptions {
            norm_budget: self.norm_budget,
            prime_cutoff: self.prime_cutoff,
            psi_cutoff: self.psi_cutoff,
            ..TermOptions::default()
        }
    }

    fn test_function(&self) -> Result<TestFunction> {
        TestFunction::from_family(&self.family, self.nu)
    }

    fn single_k(&self) -> Result<u64> {
        self.k
            .ok_or_else(|| Error::Domain("this subcommand needs --K".into()))
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn timestamp(&self) -> Option<String> {
        if self.no_timestamp {
            None
        } else {
            Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true))
        }
    }

    /// Capacity guard: refuse up front, naming the budget the run would need.
    fn check_capacity(&self, k: u64, t: &TestFunction) -> Result<()> {
        let required = required_norm_budget(k, t)?;
        if required > self.norm_budget {
            return Err(Error::Capacity {
                required,
                budget: self.norm_budget,
            });
        }
        Ok(())
    }

    /// Writes a finished artifact to `--out` or standard output.
    fn emit(&self, body: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, body).map_err(|e| {
                Error::Io(std::io::Error::new(
                    e.kind(),
                    format!("{}: {e}", path.display()),
                ))
            }),
            None => {
                std::io::stdout()
                    .write_all(body.as_bytes())
                    .map_err(Error::Io)?;
                Ok(())
            }
        }
    }
}

/// JSON envelope placing the optional timestamp on its own header line.
#[derive(Serialize)]
struct Stamped<T: Serialize> {
    #[serde(skip_serializing_if = "Option::is_none")]
    generated_at: Option<String>,
    #[serde(flatten)]
    body: T,
}

fn to_json<T: Serialize>(timestamp: Option<String>, body: T) -> Result<String> {
    let doc = Stamped {
        generated_at: timestamp,
        body,
    };
    let mut s = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::Consistency(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// CSV writer wrapper: optional `# generated_at …` comment line, explicit
/// header row (present even with zero data rows), rows serialized without
/// automatic headers so the column list is stated once, in one place.
struct CsvArtifact {
    buf: Vec<u8>,
}

impl CsvArtifact {
    fn new(timestamp: Option<&str>, columns: &[&str]) -> Result<Self> {
        let mut buf = Vec::new();
        if let Some(ts) = timestamp {
            writeln!(buf, "# generated_at {ts}").map_err(Error::Io)?;
        }
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(columns)
            .map_err(|e| Error::Consistency(format!("csv: {e}")))?;
        buf = w
            .into_inner()
            .map_err(|e| Error::Consistency(format!("csv: {e}")))?;
        Ok(Self { buf })
    }

    fn push<T: Serialize>(&mut self, row: &T) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(std::mem::take(&mut self.buf));
        w.serialize(row)
            .map_err(|e| Error::Consistency(format!("csv: {e}")))?;
        self.buf = w
            .into_inner()
            .map_err(|e| Error::Consistency(format!("csv: {e}")))?;
        Ok(())
    }

    fn push_comment(&mut self, line: &str) -> Result<()> {
        writeln!(self.buf, "# {line}").map_err(Error::Io)?;
        Ok(())
    }

    fn finish(self) -> Result<String> {
        String::from_utf8(self.buf).map_err(|e| Error::Consistency(format!("csv: {e}")))
    }
}

fn cmd_constants(cli: &Cli) -> Result<ExitCode> {
    let report = constants_report(cli.prime_cutoff, cli.psi_cutoff)?;
    print_constants_table(&report);

    if cli.out.is_some() {
        let body = match cli.format_or(Format::Json) {
            Format::Json => to_json(cli.timestamp(), &*report)?,
            Format::Csv => constants_csv(cli, &report)?,
        };
        cli.emit(&body)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn print_constants_table(r: &ConstantsReport) {
    println!("constant            value                    note");
    println!("gamma0              {:<24} Euler–Maclaurin, N = 10^4", r.gamma0);
    println!("eta(i)              {:<24} q-product", r.eta_i);
    println!("log|eta(i)|         {:<24}", r.log_abs_eta_i);
    println!(
        "L'/L(1,chi1)        {:<24} gamma0 - 2log2 - 4log|eta(i)|",
        r.lprime_over_l_1
    );
    println!(
        "P3                  {:<24} prime sum to {} (tail <= {:e})",
        r.p3, r.prime_cutoff, r.p3_tail_bound
    );
    println!(
        "c1                  {:<24} psi-integral to {}",
        r.c1, r.psi_cutoff
    );
    for (i, cj) in r.cj.iter().enumerate() {
        println!("c{}                  {:<24}", i + 2, cj);
    }
    println!("d                   {:<24} 3log2 - 1 - logpi + 4log|eta(i)| - 2P3", r.d);
    println!("c                   {:<24} d - c1 - gamma0", r.c);
    println!();
    println!("consistency checks");
    let series = lprime_over_l_series_oracle();
    println!(
        "  L'/L(1) closed form vs accelerated series: |diff| = {:e}",
        (r.lprime_over_l_1 - series).abs()
    );
    println!(
        "  eta(i) q-product vs Gamma(1/4)/(2 pi^(3/4)): agreement enforced at 1e-10"
    );
    println!(
        "  c1 -> -gamma0 limit: |c1 + gamma0| = {:e} (shrinks with --psi-cutoff)",
        (r.c1 + r.gamma0).abs()
    );
}

fn constants_csv(cli: &Cli, r: &ConstantsReport) -> Result<String> {
    let mut csv = CsvArtifact::new(cli.timestamp().as_deref(), &["constant", "value"])?;
    let mut put = |name: &str, value: String| -> Result<()> { csv.push(&(name, value)) };
    put("gamma0", format!("{}", r.gamma0))?;
    put("eta_i", format!("{}", r.eta_i))?;
    put("log_abs_eta_i", format!("{}", r.log_abs_eta_i))?;
    put("lprime_over_l_1", format!("{}", r.lprime_over_l_1))?;
    put("p3", format!("{}", r.p3))?;
    put("p3_tail_bound", format!("{}", r.p3_tail_bound))?;
    put("c1", format!("{}", r.c1))?;
    for (i, cj) in r.cj.iter().enumerate() {
        put(&format!("c{}", i + 2), format!("{cj}"))?;
    }
    put("d", format!("{}", r.d))?;
    put("c", format!("{}", r.c))?;
    put("prime_cutoff", format!("{}", r.prime_cutoff))?;
    put("psi_cutoff", format!("{}", r.psi_cutoff))?;
    csv.finish()
}

fn cmd_terms(cli: &Cli) -> Result<ExitCode> {
    let k = cli.single_k()?;
    let t = cli.test_function()?;
    cli.check_capacity(k, &t)?;
    let report = term_report(k, &t, &cli.options())?;
    let body = match cli.format_or(Format::Json) {
        Format::Json => to_json(cli.timestamp(), &report)?,
        Format::Csv => {
            let mut csv = CsvArtifact::new(cli.timestamp().as_deref(), TERM_COLUMNS)?;
            csv.push(&report)?;
            csv.finish()?
        }
    };
    cli.emit(&body)?;
    Ok(ExitCode::SUCCESS)
}

/// Column list mirroring [`TermReport`]'s serialized field names.
const TERM_COLUMNS: &[&str] = &[
    "K",
    "M",
    "test_function",
    "W_f_exact",
    "W_f_asymptotic",
    "S_zeta_sum",
    "S_zeta_asymptotic",
    "S_L_sum",
    "S_L_asymptotic",
    "S_Aprime_sum",
    "S_Aprime_asymptotic",
    "S_Gamma_asymptotic",
    "S_inert",
    "S_ram_exact",
    "S_ram_limit",
    "S_split",
    "D1_unconditional",
    "D1_conjectured",
    "identity_defect",
];

/// One sweep row: every term, the residuals, and the residuals under their
/// theorem scalings.
#[derive(Serialize)]
struct SweepRow<'a> {
    #[serde(rename = "K")]
    k: u64,
    #[serde(rename = "M")]
    m: f64,
    nu: f64,
    family: &'a str,
    #[serde(rename = "Wf_exact")]
    wf_exact: f64,
    #[serde(rename = "Wf_asym")]
    wf_asym: f64,
    #[serde(rename = "Szeta_sum")]
    szeta_sum: f64,
    #[serde(rename = "Szeta_asym")]
    szeta_asym: f64,
    #[serde(rename = "SL_sum")]
    sl_sum: f64,
    #[serde(rename = "SL_asym")]
    sl_asym: f64,
    #[serde(rename = "SAprime_sum")]
    saprime_sum: f64,
    #[serde(rename = "SAprime_asym")]
    saprime_asym: f64,
    #[serde(rename = "SGamma_asym")]
    sgamma_asym: f64,
    #[serde(rename = "Sinert")]
    sinert: f64,
    #[serde(rename = "Sram_exact")]
    sram_exact: f64,
    #[serde(rename = "Sram_limit")]
    sram_limit: f64,
    #[serde(rename = "Ssplit")]
    ssplit: f64,
    #[serde(rename = "D1_uncond")]
    d1_uncond: f64,
    #[serde(rename = "D1_conj")]
    d1_conj: f64,
    theorem_pred: f64,
    defect: f64,
    #[serde(rename = "defect_times_K")]
    defect_times_k: f64,
    #[serde(rename = "residual_times_M2")]
    residual_times_m2: f64,
    split_scaled: f64,
}

const SWEEP_COLUMNS: &[&str] = &[
    "K",
    "M",
    "nu",
    "family",
    "Wf_exact",
    "Wf_asym",
    "Szeta_sum",
    "Szeta_asym",
    "SL_sum",
    "SL_asym",
    "SAprime_sum",
    "SAprime_asym",
    "SGamma_asym",
    "Sinert",
    "Sram_exact",
    "Sram_limit",
    "Ssplit",
    "D1_uncond",
    "D1_conj",
    "theorem_pred",
    "defect",
    "defect_times_K",
    "residual_times_M2",
    "split_scaled",
];

fn sweep_row<'a>(cli: &'a Cli, k: u64, t: &TestFunction, r: &TermReport) -> Result<SweepRow<'a>> {
    let m = r.log_family_size;
    let theorem = theorem_prediction(k, t, &cli.options())?;
    Ok(SweepRow {
        k,
        m,
        nu: cli.nu,
        family: &cli.family,
        wf_exact: r.w_f_exact,
        wf_asym: r.w_f_asymptotic,
        szeta_sum: r.s_zeta_sum,
        szeta_asym: r.s_zeta_asymptotic,
        sl_sum: r.s_l_sum,
        sl_asym: r.s_l_asymptotic,
        saprime_sum: r.s_aprime_sum,
        saprime_asym: r.s_aprime_asymptotic,
        sgamma_asym: r.s_gamma_asymptotic,
        sinert: r.s_inert,
        sram_exact: r.s_ram_exact,
        sram_limit: r.s_ram_limit,
        ssplit: r.s_split,
        d1_uncond: r.d1_unconditional,
        d1_conj: r.d1_conjectured,
        theorem_pred: theorem,
        defect: r.identity_defect,
        defect_times_k: r.identity_defect * k as f64,
        residual_times_m2: (r.d1_unconditional - theorem) * m * m,
        split_scaled: r.s_split.abs() * (k as f64).powf(1.0 - cli.nu) / m,
    })
}

fn geometric_grid(k_min: u64, k_max: u64, steps: u32) -> Result<Vec<u64>> {
    if steps == 0 {
        return Ok(Vec::new());
    }
    if k_min < 2 || k_max < k_min {
        return Err(Error::Domain(format!(
            "grid needs 2 ≤ K-min ≤ K-max, got {k_min}..{k_max}"
        )));
    }
    if steps == 1 {
        return Ok(vec![k_min]);
    }
    let ratio = (k_max as f64 / k_min as f64).powf(1.0 / (steps as f64 - 1.0));
    let mut grid = Vec::with_capacity(steps as usize);
    for i in 0..steps {
        let v = if i == 0 {
            k_min
        } else if i == steps - 1 {
            k_max
        } else {
            (k_min as f64 * ratio.powi(i as i32)).round() as u64
        };
        if grid.last() != Some(&v) {
            grid.push(v);
        }
    }
    Ok(grid)
}

fn cmd_sweep(cli: &Cli) -> Result<ExitCode> {
    let (k_min, k_max, steps) = match (cli.k_min, cli.k_max, cli.k_steps) {
        (Some(a), Some(b), Some(s)) => (a, b, s),
        _ => {
            return Err(Error::Domain(
                "sweep needs --K-min, --K-max and --K-steps".into(),
            ))
        }
    };
    let grid = geometric_grid(k_min, k_max, steps)?;
    let t = cli.test_function()?;

    match cli.format_or(Format::Csv) {
        Format::Csv => {
            let mut csv = CsvArtifact::new(cli.timestamp().as_deref(), SWEEP_COLUMNS)?;
            for &k in &grid {
                if let Err(e) = cli.check_capacity(k, &t) {
                    // Flush what exists, mark the truncation, then refuse.
                    csv.push_comment(&format!("truncated: {e}"))?;
                    cli.emit(&csv.finish()?)?;
                    return Err(e);
                }
                let report = term_report(k, &t, &cli.options())?;
                csv.push(&sweep_row(cli, k, &t, &report)?)?;
            }
            cli.emit(&csv.finish()?)?;
        }
        Format::Json => {
            // The JSON artifact is all-or-nothing; run the capacity guard
            // over the whole grid before computing anything.
            for &k in &grid {
                cli.check_capacity(k, &t)?;
            }
            let mut rows = Vec::with_capacity(grid.len());
            for &k in &grid {
                let report = term_report(k, &t, &cli.options())?;
                rows.push(sweep_row(cli, k, &t, &report)?);
            }
            #[derive(Serialize)]
            struct Rows<'a> {
                rows: Vec<SweepRow<'a>>,
            }
            cli.emit(&to_json(cli.timestamp(), Rows { rows })?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct RatiosRow {
    alpha: f64,
    gamma: f64,
    #[serde(rename = "K")]
    k: u64,
    #[serde(rename = "P")]
    prime_cutoff: u64,
    #[serde(rename = "G")]
    g: f64,
    #[serde(rename = "R")]
    r: f64,
    tail: f64,
}

fn cmd_ratios(cli: &Cli, alpha: f64, gamma: f64) -> Result<ExitCode> {
    let k = cli.single_k()?;
    let s = ShiftPoint::from_real(alpha, gamma)?;
    let pred = ratios_prediction_r(&s, k, cli.prime_cutoff)?;
    let row = RatiosRow {
        alpha,
        gamma,
        k,
        prime_cutoff: cli.prime_cutoff,
        g: pred.g.re,
        r: pred.r.re,
        tail: pred.tail_estimate,
    };
    let body = match cli.format_or(Format::Csv) {
        Format::Csv => {
            let mut csv = CsvArtifact::new(
                cli.timestamp().as_deref(),
                &["alpha", "gamma", "K", "P", "G", "R", "tail"],
            )?;
            csv.push(&row)?;
            csv.finish()?
        }
        Format::Json => to_json(cli.timestamp(), row)?,
    };
    cli.emit(&body)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_fault(name: &str) -> Result<Fault> {
    match name {
        // A deliberately wrong inert-table entry; the delta-tables check
        // must name itself as the failure.
        "delta-table" => Ok(Fault::DeltaTableEntry {
            class: PrimeClass::Inert,
            h: 0,
            n: 2,
            value: -0.5,
        }),
        other => Err(Error::Domain(format!(
            "unknown fault '{other}' (expected 'delta-table')"
        ))),
    }
}

#[derive(Serialize)]
struct VerifyLine<'a> {
    name: &'a str,
    gating: bool,
    passed: bool,
    detail: &'a str,
}

fn cmd_verify(cli: &Cli, only: Option<&str>, inject_fault: Option<&str>) -> Result<ExitCode> {
    let cfg = VerifyConfig {
        options: cli.options(),
        fault: inject_fault.map(parse_fault).transpose()?,
    };
    let results = run_checks(only, &cfg)?;

    let mut failed = 0usize;
    for r in &results {
        let verdict = if !r.gating {
            "REPORT"
        } else if r.passed {
            "PASS"
        } else {
            failed += 1;
            "FAIL"
        };
        println!("[{verdict}] {} — {}", r.name, r.detail);
    }
    println!(
        "{} of {} gating checks passed ({} known checks total)",
        results.iter().filter(|r| r.gating && r.passed).count(),
        results.iter().filter(|r| r.gating).count(),
        all_check_names().len(),
    );

    if let Some(path) = &cli.out {
        let lines: Vec<VerifyLine> = results
            .iter()
            .map(|r| VerifyLine {
                name: r.name,
                gating: r.gating,
                passed: r.passed,
                detail: &r.detail,
            })
            .collect();
        let body = match cli.format_or(Format::Json) {
            Format::Json => {
                #[derive(Serialize)]
                struct Checks<'a> {
                    checks: Vec<VerifyLine<'a>>,
                }
                to_json(cli.timestamp(), Checks { checks: lines })?
            }
            Format::Csv => {
                let mut csv = CsvArtifact::new(
                    cli.timestamp().as_deref(),
                    &["name", "gating", "passed", "detail"],
                )?;
                for line in &lines {
                    csv.push(line)?;
                }
                csv.finish()?
            }
        };
        fs::write(path, body).map_err(Error::Io)?;
    }

    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
