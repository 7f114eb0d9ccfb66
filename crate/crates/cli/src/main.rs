mod cache;
mod compute;
mod error;
mod ranges;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lewislab_core::eichler::{dim_upsilon_formula, eichler_prediction};
use lewislab_core::lewis::{build_system, build_upsilon_system};
use lewislab_core::reference::{compare_with_printed, printed_value, Comparison};
use lewislab_core::{dim_eichler, Family, GroupSpec, Lambda, RankStrategy, SystemKind, TOOL_VERSION};
use rayon::prelude::*;
use serde::Serialize;

use cache::Cache;
use compute::{combined_method, compute, effective_group, Context};
use error::CliError;
use report::{render_check_line, render_csv, render_grid, render_json, Format, Record};

#[derive(Parser)]
#[command(name = "lewislab", version, about = "Polynomial transfer-operator eigenspaces for congruence subgroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nullspace dimension for one group and degree.
    Dim(DimArgs),
    /// Grid of total dimensions over levels and degrees.
    Table(TableArgs),
    /// Compare computed totals with the Eichler cohomology prediction.
    Check(TableArgs),
    /// Eichler cohomology dimensions from the closed formulas.
    Eichler(EichlerArgs),
    /// Υ_k dimensions: closed formula beside the assembled system.
    Upsilon(UpsilonArgs),
    /// Write an assembled system matrix as text (`rows cols`, then rows).
    DumpSystem(DumpArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LambdaArg {
    Plus,
    Minus,
    Both,
}

impl LambdaArg {
    fn values(self) -> Vec<Lambda> {
        match self {
            LambdaArg::Plus => vec![Lambda::Plus],
            LambdaArg::Minus => vec![Lambda::Minus],
            LambdaArg::Both => Lambda::BOTH.to_vec(),
        }
    }
}

#[derive(Args)]
struct ComputeOpts {
    /// extended, reduced, full, master, gamma2_pair, gamma02_tilde or upsilon
    #[arg(long, default_value = "extended")]
    system: SystemKind,
    /// exact, modular or auto
    #[arg(long, default_value = "auto")]
    rank: RankStrategy,
    /// Result cache directory (overrides LEWISLAB_CACHE).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Include elapsed times (JSON/CSV fields, stderr for other formats).
    #[arg(long)]
    timings: bool,
}

impl ComputeOpts {
    fn context(&self) -> Result<Context, CliError> {
        let dir = self
            .cache
            .clone()
            .or_else(|| std::env::var_os("LEWISLAB_CACHE").map(PathBuf::from));
        let cache = dir.map(|d| Cache::open(&d)).transpose()?;
        Ok(Context {
            strategy: self.rank,
            cache,
        })
    }
}

#[derive(Args)]
struct DimArgs {
    /// gamma:N or gamma0:N
    #[arg(long)]
    group: GroupSpec,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value = "both")]
    lambda: LambdaArg,
    #[command(flatten)]
    opts: ComputeOpts,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    family: Family,
    /// Levels, e.g. `3..6` or `3,5,7`.
    #[arg(long = "N")]
    levels: String,
    /// Even degrees, e.g. `2..12`.
    #[arg(long)]
    n: String,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    opts: ComputeOpts,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct EichlerArgs {
    #[arg(long)]
    family: Family,
    #[arg(long = "N")]
    levels: String,
    /// Even weights, e.g. `2..24`.
    #[arg(long)]
    k: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct UpsilonArgs {
    #[arg(long)]
    k: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long)]
    group: GroupSpec,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value = "plus")]
    lambda: LambdaArg,
    #[arg(long, default_value = "extended")]
    system: SystemKind,
    /// Output file (default: standard output).
    #[arg(long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dim(a) => cmd_dim(a),
        Command::Table(a) => cmd_table(a, false),
        Command::Check(a) => cmd_table(a, true),
        Command::Eichler(a) => cmd_eichler(a),
        Command::Upsilon(a) => cmd_upsilon(a),
        Command::DumpSystem(a) => cmd_dump(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn base_record(group: GroupSpec, n: u32, system: SystemKind) -> Record {
    Record {
        family: group.family,
        level: group.level,
        n,
        dim_plus: None,
        dim_minus: None,
        dim_total: None,
        predicted: None,
        matches: None,
        system,
        rank_method: None,
        elapsed_ms: None,
        tool_version: TOOL_VERSION.to_string(),
        printed: None,
        note: None,
        error: None,
    }
}

/// The value whose dimension the conjecture predicts: both eigenvalues of a
/// system that splits by λ.
fn predicts(system: SystemKind, lambdas: &[Lambda]) -> bool {
    matches!(system, SystemKind::Extended | SystemKind::Reduced) && lambdas.len() == 2
}

fn cmd_dim(a: DimArgs) -> Result<ExitCode, CliError> {
    let ctx = a.opts.context()?;
    let kind = a.opts.system;
    let group = effective_group(kind, a.group)?;
    let lambdas: Vec<Option<Lambda>> = if kind.uses_lambda() {
        a.lambda.values().into_iter().map(Some).collect()
    } else {
        vec![None]
    };
    let parts = lambdas
        .iter()
        .map(|&l| compute(&ctx, group, a.n, l, kind))
        .collect::<Result<Vec<_>, _>>()?;
    let total: u64 = parts.iter().map(|c| c.dim).sum();
    let mut rec = base_record(group, a.n, kind);
    for (l, c) in lambdas.iter().zip(&parts) {
        match l {
            Some(Lambda::Plus) => rec.dim_plus = Some(c.dim),
            Some(Lambda::Minus) => rec.dim_minus = Some(c.dim),
            None => {}
        }
    }
    rec.dim_total = Some(total);
    rec.rank_method = Some(combined_method(&parts));
    let lam: Vec<Lambda> = lambdas.iter().flatten().copied().collect();
    if predicts(kind, &lam) {
        let predicted = dim_eichler(group, a.n)?;
        rec.predicted = Some(predicted);
        rec.matches = Some(predicted == total);
    }
    let elapsed: u64 = parts.iter().map(|c| c.elapsed_ms).sum();
    if a.opts.timings {
        rec.elapsed_ms = Some(elapsed);
    }
    match a.format {
        Format::Text | Format::Markdown => {
            emit(&format!("{total}\n"))?;
            if a.opts.timings {
                eprintln!("elapsed_ms {elapsed}");
            }
        }
        Format::Json => emit(&format!("{}\n", serde_json::to_string(&rec).expect("record serializes")))?,
        Format::Csv => emit(&render_csv(&[rec]))?,
    }
    Ok(ExitCode::SUCCESS)
}

fn table_cell(ctx: &Context, group: GroupSpec, n: u32, kind: SystemKind, check: bool, timings: bool) -> Record {
    let mut rec = base_record(group, n, kind);
    let mut run = || -> Result<(), CliError> {
        let plus = compute(ctx, group, n, Some(Lambda::Plus), kind)?;
        let minus = compute(ctx, group, n, Some(Lambda::Minus), kind)?;
        let total = plus.dim + minus.dim;
        let predicted = dim_eichler(group, n)?;
        rec.dim_plus = Some(plus.dim);
        rec.dim_minus = Some(minus.dim);
        rec.dim_total = Some(total);
        rec.predicted = Some(predicted);
        rec.matches = Some(total == predicted);
        rec.rank_method = Some(combined_method(&[plus, minus]));
        if timings {
            rec.elapsed_ms = Some(plus.elapsed_ms + minus.elapsed_ms);
        }
        if check {
            rec.printed = printed_value(group, n);
            match compare_with_printed(group, n, total) {
                Comparison::AnnotatedDiscrepancy(a) => {
                    rec.note = Some(a.note.clone());
                }
                Comparison::Disagrees { printed } => {
                    rec.matches = Some(false);
                    rec.note = Some(format!("differs from printed table value {printed}"));
                }
                Comparison::Agrees | Comparison::NotPrinted => {}
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        rec.error = Some(e.to_string());
    }
    rec
}

fn cmd_table(a: TableArgs, check: bool) -> Result<ExitCode, CliError> {
    let levels = ranges::parse_levels(&a.levels)?;
    let degrees = ranges::parse_even_list(&a.n, "n")?;
    let kind = a.opts.system;
    if !matches!(kind, SystemKind::Extended | SystemKind::Reduced) {
        return Err(CliError::Usage(format!(
            "tables sum both eigenvalues and need the extended or reduced system, not {kind}"
        )));
    }
    let ctx = a.opts.context()?;
    let cells: Vec<(GroupSpec, u32)> = levels
        .iter()
        .flat_map(|&level| degrees.iter().map(move |&n| (level, n)))
        .map(|(level, n)| GroupSpec::new(a.family, level).map(|g| (g, n)))
        .collect::<Result<_, _>>()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = a.jobs {
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(jobs);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let timings = a.opts.timings;
    let records: Vec<Record> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(g, n)| table_cell(&ctx, g, n, kind, check, timings))
            .collect()
    });

    let failed = records.iter().any(|r| r.error.is_some());
    let mismatch = records.iter().any(|r| r.matches == Some(false));
    let format = a.format.unwrap_or(if check { Format::Text } else { Format::Markdown });
    let text = match format {
        Format::Json => render_json(&records),
        Format::Csv => render_csv(&records),
        Format::Markdown if !check => render_grid(&records, &levels, &degrees),
        Format::Text if !check => render_grid(&records, &levels, &degrees),
        Format::Markdown | Format::Text => records.iter().map(|r| render_check_line(r) + "\n").collect(),
    };
    emit(&text)?;
    if timings && matches!(format, Format::Markdown | Format::Text) {
        for r in &records {
            if let Some(ms) = r.elapsed_ms {
                eprintln!("elapsed_ms {} N={} n={} {ms}", r.family, r.level, r.n);
            }
        }
    }
    for r in &records {
        if let Some(e) = &r.error {
            eprintln!("error: {} N={} n={}: {e}", r.family, r.level, r.n);
        }
    }
    Ok(if failed || (check && mismatch) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

#[derive(Serialize)]
struct EichlerRow {
    family: Family,
    #[serde(rename = "N")]
    level: u32,
    k: u32,
    dim_cusp_k_plus_2: u64,
    v_inf: u64,
    dim_eichler: u64,
}

fn cmd_eichler(a: EichlerArgs) -> Result<ExitCode, CliError> {
    let levels = ranges::parse_levels(&a.levels)?;
    let weights = ranges::parse_even_list(&a.k, "k")?;
    let mut rows = Vec::new();
    for &level in &levels {
        let group = GroupSpec::new(a.family, level)?;
        for &k in &weights {
            let p = eichler_prediction(group, k)?;
            rows.push(EichlerRow {
                family: a.family,
                level,
                k,
                dim_cusp_k_plus_2: p.dim_cusp_k_plus_2,
                v_inf: p.v_inf,
                dim_eichler: p.dim_eichler,
            });
        }
    }
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut s = String::from("family,N,k,dim_cusp_k_plus_2,v_inf,dim_eichler\n");
            for r in &rows {
                s += &format!("{},{},{},{},{},{}\n", r.family, r.level, r.k, r.dim_cusp_k_plus_2, r.v_inf, r.dim_eichler);
            }
            s
        }
        Format::Markdown => {
            let mut s = String::from("| family | N | k | dim C_{k+2} | v∞ | dim E_k |\n|---|---|---|---|---|---|\n");
            for r in &rows {
                s += &format!("| {} | {} | {} | {} | {} | {} |\n", r.family, r.level, r.k, r.dim_cusp_k_plus_2, r.v_inf, r.dim_eichler);
            }
            s
        }
        Format::Text => rows
            .iter()
            .map(|r| format!("{}:{} k={} {}\n", r.family, r.level, r.k, r.dim_eichler))
            .collect(),
    };
    emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct UpsilonRow {
    k: u32,
    formula: u64,
    computed: u64,
    #[serde(rename = "match")]
    matches: bool,
}

fn cmd_upsilon(a: UpsilonArgs) -> Result<ExitCode, CliError> {
    let weights = ranges::parse_even_list(&a.k, "k")?;
    let mut rows = Vec::new();
    for &k in &weights {
        let formula = dim_upsilon_formula(k)?;
        let computed = build_upsilon_system(k)?.dim(RankStrategy::Exact) as u64;
        rows.push(UpsilonRow {
            k,
            formula,
            computed,
            matches: formula == computed,
        });
    }
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut s = String::from("k,formula,computed,match\n");
            for r in &rows {
                s += &format!("{},{},{},{}\n", r.k, r.formula, r.computed, r.matches);
            }
            s
        }
        Format::Markdown => {
            let mut s = String::from("| k | formula | computed |\n|---|---|---|\n");
            for r in &rows {
                s += &format!("| {} | {} | {} |\n", r.k, r.formula, r.computed);
            }
            s
        }
        Format::Text => rows.iter().map(|r| format!("k={} {}\n", r.k, r.formula)).collect(),
    };
    emit(&text)?;
    Ok(if rows.iter().all(|r| r.matches) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_dump(a: DumpArgs) -> Result<ExitCode, CliError> {
    let lambda = match a.lambda {
        LambdaArg::Plus => Lambda::Plus,
        LambdaArg::Minus => Lambda::Minus,
        LambdaArg::Both => return Err(CliError::Usage("dump-system needs a single --lambda".into())),
    };
    let group = effective_group(a.system, a.group)?;
    let system = build_system(a.system, group, a.n, Some(lambda))?;
    match a.output {
        Some(path) => {
            let file = std::fs::File::create(path)?;
            system.matrix.write_text(io::BufWriter::new(file))?;
        }
        None => system.matrix.write_text(io::stdout().lock())?,
    }
    Ok(ExitCode::SUCCESS)
}
