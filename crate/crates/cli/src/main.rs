//! Command-line driver for the minimum-weight triangulation workbench.
//!
//! Exit codes: 0 solved with an integral result, 2 fractional optimum,
//! 3 input error, 4 internal invariant violation. Verbosity comes from the
//! `MWT_LOG` environment variable (error/warn/info/debug/trace).

mod report;
mod svg;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mwt_core::geom::Instance;
use mwt_core::heuristics::{
    run_closure, skeleton_faces, EdgeStatusLedger, HeuristicConfig, Rule,
};
use mwt_core::lp::{
    build_lp, classify_solution, io as lp_io, solve_to_extreme_point, SolutionClass, INT_TOL,
};
use mwt_core::oracle;
use mwt_core::rounding::{build_convex_partition, transpose_solution, PartitionStrategy};
use mwt_core::Error;

use report::{
    triangulation_report, FaceReport, LedgerSummary, LpReport, OracleReport, RunReport,
};

#[derive(Parser)]
#[command(name = "mwt", about = "minimum-weight triangulation workbench", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: heuristics, per-face DP when they solve the instance,
    /// otherwise the ledger-reduced LP.
    Solve(SolveArgs),
    /// Rounding lab: transpose the LP optimum into a convex partition and
    /// round each face, reporting every cost-bound component.
    Round(RoundArgs),
    /// Heuristic closure only: the edge-status ledger and skeleton faces.
    Heuristics(HeuristicsArgs),
    /// Build and solve the LP relaxation standalone.
    Lp(LpArgs),
    /// Exhaustive ground truth (guarded by instance size).
    Oracle(OracleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Instance file: one `x y` per line, decimals or p/q rationals.
    input: PathBuf,
    /// Feasibility tolerance for the LP solver.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Seed for sample-point checks and other randomized diagnostics.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG rendering here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Cross-check against the brute-force oracle (instances up to 13 points).
    #[arg(long)]
    oracle: bool,
    /// Size guard for the oracle cross-check.
    #[arg(long, default_value_t = oracle::DEFAULT_GUARD)]
    max_n: usize,
    /// Export the (ledger-reduced) LP in text interchange format.
    #[arg(long)]
    export_lp: Option<PathBuf>,
    /// Comma-separated heuristic rules to enable
    /// (beta-skeleton,yxy,diamond,maximality,independence,lmt).
    #[arg(long)]
    rules: Option<String>,
}

#[derive(Args)]
struct RoundArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Convex partition strategy.
    #[arg(long, default_value = "hm")]
    partition: String,
}

#[derive(Args)]
struct HeuristicsArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    rules: Option<String>,
    /// Write the full per-edge ledger JSON here.
    #[arg(long)]
    ledger: Option<PathBuf>,
}

#[derive(Args)]
struct LpArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Solve the pure LP without the heuristic reduction.
    #[arg(long)]
    no_ledger: bool,
    #[arg(long)]
    export_lp: Option<PathBuf>,
    /// Evaluate a third-party solution file (`var value` lines) against the LP.
    #[arg(long)]
    check_solution: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Size guard for the exponential enumeration.
    #[arg(long, default_value_t = oracle::DEFAULT_GUARD)]
    max_n: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("MWT_LOG")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Round(args) => cmd_round(args),
        Command::Heuristics(args) => cmd_heuristics(args),
        Command::Lp(args) => cmd_lp(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } | Error::InvalidInput(_) | Error::SizeGuard { .. } => {
                    ExitCode::from(3)
                }
                _ => ExitCode::from(4),
            }
        }
    }
}

fn load_instance(path: &PathBuf) -> Result<Instance, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
    })?;
    Instance::parse(&text)
}

fn parse_rules(spec: &Option<String>) -> Result<HeuristicConfig, Error> {
    let mut config = HeuristicConfig::default();
    if let Some(list) = spec {
        let mut rules = BTreeSet::new();
        for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let rule = Rule::from_name(name).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown rule `{name}`; valid: {}",
                    Rule::ALL.map(|r| r.name()).join(",")
                ))
            })?;
            rules.insert(rule);
        }
        config.rules = rules;
    }
    Ok(config)
}

fn emit(common: &CommonArgs, report: &RunReport) -> Result<(), Error> {
    let json = report.to_json();
    match &common.json {
        Some(path) => std::fs::write(path, json.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn write_svg(common: &CommonArgs, content: &str) -> Result<(), Error> {
    if let Some(path) = &common.svg {
        std::fs::write(path, content.as_bytes())
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn ledger_and_faces(
    inst: &Instance,
    config: &HeuristicConfig,
) -> Result<(EdgeStatusLedger, Vec<mwt_core::geom::Face>, bool), Error> {
    let t0 = std::time::Instant::now();
    let ledger = run_closure(inst, config)?;
    log::info!("heuristic closure: {:?}", t0.elapsed());
    let (faces, solvable) = skeleton_faces(inst, &ledger)?;
    Ok((ledger, faces, solvable))
}

fn cmd_solve(args: SolveArgs) -> Result<ExitCode, Error> {
    let inst = load_instance(&args.common.input)?;
    let config = parse_rules(&args.rules)?;
    let mut report = RunReport::new(
        "solve",
        &args.common.input.display().to_string(),
        args.common.seed,
        &inst,
    );
    let (ledger, faces, solvable) = ledger_and_faces(&inst, &config)?;
    report.ledger = Some(LedgerSummary::from_ledger(&ledger));
    report.solvable = Some(solvable);

    let mut exit = ExitCode::SUCCESS;
    let mut final_tris: Option<Vec<u32>> = None;
    let mut fractional: Option<mwt_core::lp::FractionalTriangulation> = None;

    if let Some(path) = &args.export_lp {
        let lp = build_lp(&inst, Some(&ledger))?;
        std::fs::write(path, lp_io::write_lp_format(&lp, &inst))
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }

    if solvable {
        let t0 = std::time::Instant::now();
        let mut tris = Vec::new();
        let mut face_reports = Vec::new();
        for f in &faces {
            let dp = mwt_core::dp::mwt_polygon(&inst, &f.boundary)?;
            tris.extend(dp.triangles);
            face_reports.push(FaceReport {
                boundary: f.boundary.clone(),
                empty: f.is_empty,
                convex: f.is_convex,
                method: "dp".into(),
            });
        }
        log::info!("per-face dynamic programs: {:?}", t0.elapsed());
        tris.sort_unstable();
        report.faces = Some(face_reports);
        report.integer_cost = Some(tris.iter().map(|&t| inst.tri(t).cost).sum());
        final_tris = Some(tris);
    } else {
        let t0 = std::time::Instant::now();
        let lp = build_lp(&inst, Some(&ledger))?;
        let x = solve_to_extreme_point(&lp, args.common.tolerance)?;
        log::info!("ledger-reduced LP: {:?}", t0.elapsed());
        let eliminated = 1.0 - lp.cols.len() as f64 / lp.total_triangles as f64;
        let class = classify_solution(&inst, &lp, &x, INT_TOL)?;
        let (class_name, frac_count) = match &class {
            SolutionClass::Integral { triangles, cost } => {
                report.integer_cost = Some(*cost);
                final_tris = Some(triangles.clone());
                ("integral", 0)
            }
            SolutionClass::Fractional { witnesses } => {
                exit = ExitCode::from(2);
                ("fractional", witnesses.len())
            }
        };
        report.lp = Some(LpReport {
            columns: lp.cols.len(),
            rows: lp.rows.len(),
            objective: x.objective,
            classification: class_name.into(),
            fractional_triangles: frac_count,
            eliminated_triangle_fraction: eliminated,
        });
        if let Some(cost) = report.integer_cost {
            let gap = cost / x.objective;
            if gap < 1.0 - 1e-7 {
                return Err(Error::Internal(format!(
                    "integer cost below LP objective: gap {gap}"
                )));
            }
            report.gap = Some(gap);
        }
        fractional = Some(x);
    }

    if args.oracle {
        let (mwt_cost, optima) = oracle::brute_force_mwt(&inst, args.max_n)?;
        let matches = report
            .integer_cost
            .map(|c| (c - mwt_cost).abs() <= 1e-6);
        report.oracle = Some(OracleReport {
            triangulations: None,
            mwt_cost,
            optima: optima.len(),
            matches_pipeline: matches,
        });
        if matches == Some(false) {
            return Err(Error::Internal(format!(
                "pipeline cost {} disagrees with oracle {}",
                report.integer_cost.unwrap(),
                mwt_cost
            )));
        }
        if let Some(x) = &fractional {
            if x.objective > mwt_cost + 1e-6 {
                return Err(Error::Internal(format!(
                    "LP objective {} above oracle MWT {}",
                    x.objective, mwt_cost
                )));
            }
            report.gap = Some(mwt_cost / x.objective);
            report.integer_cost = Some(mwt_cost);
        }
    }

    if let Some(tris) = &final_tris {
        report.triangulation = Some(triangulation_report(&inst, tris));
    }
    write_svg(
        &args.common,
        &svg::render_solution(&inst, Some(&ledger), fractional.as_ref(), final_tris.as_deref()),
    )?;
    emit(&args.common, &report)?;
    Ok(exit)
}

fn cmd_round(args: RoundArgs) -> Result<ExitCode, Error> {
    let strategy = PartitionStrategy::from_name(&args.partition).ok_or_else(|| {
        Error::InvalidInput(format!(
            "unknown partition strategy `{}` (expected hm or fan)",
            args.partition
        ))
    })?;
    let inst = load_instance(&args.common.input)?;
    let mut report = RunReport::new(
        "round",
        &args.common.input.display().to_string(),
        args.common.seed,
        &inst,
    );
    let (ledger, _, _) = ledger_and_faces(&inst, &HeuristicConfig::default())?;
    report.ledger = Some(LedgerSummary::from_ledger(&ledger));
    let lp = build_lp(&inst, Some(&ledger))?;
    let x = solve_to_extreme_point(&lp, args.common.tolerance)?;
    let partition = build_convex_partition(&inst, strategy)?;
    let outcome = transpose_solution(&inst, &x, &partition)?;
    let rounded = outcome.rounded_triangulation();
    report.lp = Some(LpReport {
        columns: lp.cols.len(),
        rows: lp.rows.len(),
        objective: x.objective,
        classification: "rounding-input".into(),
        fractional_triangles: 0,
        eliminated_triangle_fraction: 1.0 - lp.cols.len() as f64 / lp.total_triangles as f64,
    });
    report.integer_cost = Some(outcome.ledger.rounded_cost);
    report.gap = Some(outcome.ledger.rounded_cost / x.objective);
    report.rounding = Some(outcome.ledger.clone());
    report.triangulation = Some(triangulation_report(&inst, &rounded));
    write_svg(&args.common, &svg::render_rounding(&inst, &partition, &outcome))?;
    emit(&args.common, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_heuristics(args: HeuristicsArgs) -> Result<ExitCode, Error> {
    let inst = load_instance(&args.common.input)?;
    let config = parse_rules(&args.rules)?;
    let mut report = RunReport::new(
        "heuristics",
        &args.common.input.display().to_string(),
        args.common.seed,
        &inst,
    );
    let (ledger, faces, solvable) = ledger_and_faces(&inst, &config)?;
    report.ledger = Some(LedgerSummary::from_ledger(&ledger));
    report.solvable = Some(solvable);
    report.faces = Some(
        faces
            .iter()
            .map(|f| FaceReport {
                boundary: f.boundary.clone(),
                empty: f.is_empty,
                convex: f.is_convex,
                method: if f.is_empty && f.is_simple() { "dp" } else { "lp" }.into(),
            })
            .collect(),
    );
    if let Some(path) = &args.ledger {
        let export = serde_json::to_string_pretty(&ledger.export(&inst)).expect("serializes");
        std::fs::write(path, export)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    write_svg(&args.common, &svg::render_solution(&inst, Some(&ledger), None, None))?;
    emit(&args.common, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_lp(args: LpArgs) -> Result<ExitCode, Error> {
    let inst = load_instance(&args.common.input)?;
    let mut report = RunReport::new(
        "lp",
        &args.common.input.display().to_string(),
        args.common.seed,
        &inst,
    );
    let ledger = if args.no_ledger {
        None
    } else {
        let (ledger, _, _) = ledger_and_faces(&inst, &HeuristicConfig::default())?;
        report.ledger = Some(LedgerSummary::from_ledger(&ledger));
        Some(ledger)
    };
    let lp = build_lp(&inst, ledger.as_ref())?;
    if let Some(path) = &args.export_lp {
        std::fs::write(path, lp_io::write_lp_format(&lp, &inst))
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    let x = solve_to_extreme_point(&lp, args.common.tolerance)?;
    if let Some(path) = &args.check_solution {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidInput(format!("cannot read {}: {e}", path.display()))
        })?;
        let sol = lp_io::parse_solution(&text)?;
        let (obj, resid) = lp_io::check_imported_solution(&lp, &sol);
        println!(
            "imported solution: objective {obj:.9} (ours {:.9}), max residual {resid:.3e}",
            x.objective
        );
    }
    let class = classify_solution(&inst, &lp, &x, INT_TOL)?;
    let mut exit = ExitCode::SUCCESS;
    let (class_name, frac_count) = match &class {
        SolutionClass::Integral { triangles, cost } => {
            report.integer_cost = Some(*cost);
            report.gap = Some(cost / x.objective);
            report.triangulation = Some(triangulation_report(&inst, triangles));
            ("integral", 0)
        }
        SolutionClass::Fractional { witnesses } => {
            exit = ExitCode::from(2);
            ("fractional", witnesses.len())
        }
    };
    report.lp = Some(LpReport {
        columns: lp.cols.len(),
        rows: lp.rows.len(),
        objective: x.objective,
        classification: class_name.into(),
        fractional_triangles: frac_count,
        eliminated_triangle_fraction: 1.0 - lp.cols.len() as f64 / lp.total_triangles as f64,
    });
    write_svg(
        &args.common,
        &svg::render_solution(&inst, None, Some(&x), None),
    )?;
    emit(&args.common, &report)?;
    Ok(exit)
}

fn cmd_oracle(args: OracleArgs) -> Result<ExitCode, Error> {
    let inst = load_instance(&args.common.input)?;
    let mut report = RunReport::new(
        "oracle",
        &args.common.input.display().to_string(),
        args.common.seed,
        &inst,
    );
    let set = oracle::enumerate_triangulations(&inst, args.max_n)?;
    report.oracle = Some(OracleReport {
        triangulations: Some(set.all.len()),
        mwt_cost: set.min_cost,
        optima: set.optima.len(),
        matches_pipeline: None,
    });
    emit(&args.common, &report)?;
    Ok(ExitCode::SUCCESS)
}
