//! Command-line front end.
//!
//! Every subcommand writes one JSON report (to `--out` or stdout); graphs and
//! pictures go to the paths given by their own flags. Input errors exit with
//! status 2.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::control::{
    check_varieties, format_grid_state, format_trajectory, greedy_controller, parse_grid_state,
    ControllerParams, CostParams, HexGrid, NUM_CELLS,
};
use crate::dynamics::{
    dependency_graph, linear_cycle_structure, monomial_fixed_point_test, phase_space,
    FiniteDynamicalSystem, DEFAULT_BOUND,
};
use crate::error::Error;
use crate::ff::{Elem, Field};
use crate::inference::{
    deegan_packel, discretize, infer_ls, min_sets, parse_real_csv, term_order_consensus,
    TimeSeries,
};
use crate::io::{parse_field, parse_matrix, parse_system};
use crate::ncf::{
    anf_transform, enumerate_ncfs, is_canalyzing, is_ncf_by_definition, BooleanFunctionTable,
};
use crate::poly::{parse_polynomial, TermOrder};

/// Environment variable overriding the default enumeration bound.
pub const BOUND_ENV: &str = "FDSLAB_BOUND";

#[derive(Debug, Parser)]
#[command(name = "fdslab", version, about = "Analysis, inference and control of polynomial dynamical systems over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Field order (prime or 4); overrides a `field:` line in input files.
    #[arg(long, global = true, value_parser = parse_field_arg)]
    pub field: Option<Field>,
    /// Term order, e.g. `degrevlex`, `lex:3,1,2`.
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Maximum number of states to enumerate (default 1000000 or $FDSLAB_BOUND).
    #[arg(long, global = true)]
    pub bound: Option<u64>,
    /// Seed for randomised steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

fn parse_field_arg(s: &str) -> Result<Field, String> {
    parse_field(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the phase space of a system file.
    PhaseSpace {
        system: PathBuf,
        /// Write the state transition graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cycle structure of the linear system given by a matrix file.
    AnalyzeLinear { matrix: PathBuf },
    /// Dependency graph, strong components and loop numbers.
    Deps {
        system: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Canalyzing/nested canalyzing detection or enumeration.
    Ncf(NcfArgs),
    /// Infer a model, minimal wiring diagrams and a term-order consensus.
    Infer {
        data: PathBuf,
        /// Treat entries as real measurements and discretize them.
        #[arg(long)]
        discretize: bool,
        /// Random term orders for the consensus report.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Simulate the greedy controller on the 331-cell virus model.
    ControlSim(ControlArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("ncf_input").required(true).args(["table", "polynomial", "enumerate"])))]
pub struct NcfArgs {
    /// Truth table as a 0/1 string, entry 0 first (x1 is the lowest bit).
    #[arg(long)]
    pub table: Option<String>,
    /// Boolean polynomial in x1..xn; needs --vars.
    #[arg(long, requires = "vars")]
    pub polynomial: Option<String>,
    /// Enumerate all nested canalyzing functions in this many variables.
    #[arg(long)]
    pub enumerate: Option<usize>,
    #[arg(long)]
    pub vars: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ControlArgs {
    /// Initial grid state: 331 GF(4) literals in ring-major order.
    pub initial: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub cost_per_cell: f64,
    #[arg(long, default_value_t = 0.0)]
    pub overhead: f64,
    #[arg(long, default_value_t = 100)]
    pub horizon: usize,
    #[arg(long, default_value_t = 0)]
    pub barrier_ring: usize,
    /// Maximum cells inoculated per step.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Count cell 271 as part of the outer ring.
    #[arg(long)]
    pub include_271: bool,
    /// Write the trajectory, one state per line.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Write an SVG picture of the final state.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Write a PPM picture of the final state.
    #[arg(long)]
    pub ppm: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: Error },
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn in_file<T>(path: &Path, r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

impl GlobalArgs {
    fn bound(&self) -> CliResult<u64> {
        if let Some(b) = self.bound {
            return Ok(b);
        }
        match std::env::var(BOUND_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                Error::Invalid(format!("{BOUND_ENV}={v:?} is not a nonnegative integer")).into()
            }),
            Err(_) => Ok(DEFAULT_BOUND),
        }
    }

    fn term_order(&self) -> CliResult<TermOrder> {
        Ok(match &self.order {
            Some(s) => TermOrder::parse(s)?,
            None => TermOrder::degrevlex(),
        })
    }
}

fn state_json(field: Field, s: &[Elem]) -> Value {
    Value::from(s.iter().map(|&x| field.format(x)).collect::<Vec<_>>())
}

fn var(i: usize) -> String {
    format!("x{}", i + 1)
}

fn phase_space_report(fds: &FiniteDynamicalSystem, bound: u64) -> CliResult<(Value, String)> {
    let ps = phase_space(fds, bound)?;
    let k = fds.field();
    let components: Vec<Value> = ps
        .components()
        .iter()
        .map(|c| {
            json!({
                "cycle": c.cycle.iter().map(|s| state_json(k, s)).collect::<Vec<_>>(),
                "cycle_length": c.cycle_length,
                "component_size": c.component_size,
                "max_transient_height": c.max_transient_height,
            })
        })
        .collect();
    let report = json!({
        "field": k.to_string(),
        "nvars": fds.nvars(),
        "system": fds.coordinates().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "total_states": ps.total_states(),
        "num_components": ps.num_components(),
        "cycle_lengths": ps.cycle_lengths(),
        "max_transient_height": ps.max_transient_height(),
        "components": components,
    });
    Ok((report, ps.to_dot()))
}

fn deps_report(fds: &FiniteDynamicalSystem) -> (Value, String) {
    let g = dependency_graph(fds);
    let verdict = monomial_fixed_point_test(fds);
    let report = json!({
        "field": fds.field().to_string(),
        "nvars": fds.nvars(),
        "edges": g.edges().iter().map(|&(u, v)| vec![var(u), var(v)]).collect::<Vec<_>>(),
        "strongly_connected": g.is_strongly_connected(),
        "components": g.components().iter().map(|c| json!({
            "vertices": c.vertices.iter().map(|&v| var(v)).collect::<Vec<_>>(),
            "loop_number": c.loop_number,
        })).collect::<Vec<_>>(),
        "monomial": verdict.is_monomial,
        "all_periodic_points_fixed": verdict.all_periodic_are_fixed,
    });
    (report, g.to_dot())
}

fn ncf_report(args: &NcfArgs) -> CliResult<Value> {
    if let Some(n) = args.enumerate {
        let e = enumerate_ncfs(n)?;
        return Ok(json!({
            "mode": "enumerate",
            "n": n,
            "count": e.count(),
            "functions": e.functions.iter().map(|c| json!({
                "anf": c.to_string(),
                "coefficients": c.bit_string(),
            })).collect::<Vec<_>>(),
        }));
    }
    let table = match (&args.table, &args.polynomial) {
        (Some(t), _) => BooleanFunctionTable::parse(t)?,
        (None, Some(p)) => {
            let n = args.vars.expect("clap enforces --vars");
            let poly = parse_polynomial(p, Field::prime(2).expect("2 is prime"), n)?;
            BooleanFunctionTable::from_polynomial(&poly)?
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let essential = table.depends_on_all();
    let certificate = if essential {
        is_ncf_by_definition(&table)?
    } else {
        None
    };
    Ok(json!({
        "mode": "detect",
        "n": table.nvars(),
        "table": table.to_string(),
        "anf": anf_transform(&table).to_string(),
        "coefficients": anf_transform(&table).bit_string(),
        "depends_on_all": essential,
        "canalyzing": is_canalyzing(&table).iter().map(|c| json!({
            "variable": var(c.variable),
            "input": c.input,
            "output": c.output,
        })).collect::<Vec<_>>(),
        "nested_canalyzing": certificate.is_some(),
        "certificate": certificate.map(|c| json!({
            "order": c.sigma.iter().map(|&v| var(v)).collect::<Vec<_>>(),
            "canalyzing_inputs": c.a,
            "canalyzed_outputs": c.b,
        })),
    }))
}

fn infer_report(ts: &TimeSeries, order: &TermOrder, samples: usize, seed: u64) -> CliResult<Value> {
    let model = infer_ls(ts, order)?;
    let mut wiring = Vec::new();
    for i in 0..ts.nvars() {
        let r = min_sets(ts, i)?;
        let monomial = |s: &Vec<usize>| s.iter().map(|&v| var(v)).collect::<Vec<_>>().join("*");
        let dp = match deegan_packel(&r) {
            Ok(ranking) => Value::from(
                ranking
                    .iter()
                    .map(|p| json!({"variable": var(p.variable), "index": p.index}))
                    .collect::<Vec<_>>(),
            ),
            Err(Error::EmptyRanking) => Value::Null,
            Err(e) => return Err(e.into()),
        };
        wiring.push(json!({
            "coordinate": format!("f{}", i + 1),
            "generators": r.generators.iter().map(monomial).collect::<Vec<_>>(),
            "primes": r.primes.iter().map(|p| p.iter().map(|&v| var(v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "scores": r.scores,
            "deegan_packel": dp,
        }));
    }
    let consensus = term_order_consensus(ts, samples, seed)?;
    Ok(json!({
        "field": ts.field().to_string(),
        "nvars": ts.nvars(),
        "segments": ts.segments().len(),
        "transitions": ts.transitions().count(),
        "distinct_inputs": model.num_points,
        "input_convention": "each segment p_0..p_r contributes the transitions p_j -> p_(j+1) for j < r",
        "order": order.to_string(),
        "model": model.system.coordinates().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "fits_data": model.fits(ts),
        "min_sets": wiring,
        "consensus": {
            "samples": consensus.samples,
            "seed": consensus.seed,
            "frequencies": consensus.frequencies,
        },
    }))
}

fn control_report(args: &ControlArgs) -> CliResult<Value> {
    let text = read(&args.initial)?;
    let initial = in_file(&args.initial, parse_grid_state(&text, NUM_CELLS))?;
    let grid = HexGrid::new(10);
    let params = ControllerParams {
        cost: CostParams {
            c: args.cost_per_cell,
            d: args.overhead,
        },
        horizon: args.horizon,
        barrier_ring: args.barrier_ring,
        budget: args.budget,
        include_271: args.include_271,
    };
    let initial_check = check_varieties(&grid, &initial, args.include_271)?;
    let out = greedy_controller(&grid, &initial, &params)?;
    let last = out.trajectory.last().expect("trajectory holds the initial state");
    let final_check = check_varieties(&grid, last, args.include_271)?;
    if let Some(p) = &args.trajectory {
        write(p, format_trajectory(&out.trajectory).as_bytes())?;
    }
    if let Some(p) = &args.svg {
        write(p, grid.to_svg(last).as_bytes())?;
    }
    if let Some(p) = &args.ppm {
        write(p, &grid.to_ppm(last, 400))?;
    }
    Ok(json!({
        "cells": grid.num_cells(),
        "parameters": params,
        "initial_check": initial_check,
        "final_check": final_check,
        "schedule": out.schedule.iter().map(|u| u.iter().map(|&c| c + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "inoculated_cells": out.schedule.iter().map(Vec::len).sum::<usize>(),
        "interventions": out.schedule.iter().filter(|u| !u.is_empty()).count(),
        "steps": out.schedule.len(),
        "termination": out.termination,
        "goal_reached": out.goal_reached,
        "total_cost": out.total_cost,
        "final_state": format_grid_state(&grid, last),
    }))
}

/// Execute a parsed command; returns the JSON report.
pub fn execute(cli: &Cli) -> CliResult<Value> {
    let g = &cli.global;
    match &cli.command {
        Command::PhaseSpace { system, dot } => {
            let fds = in_file(system, parse_system(&read(system)?, g.field))?;
            let (report, graph) = phase_space_report(&fds, g.bound()?)?;
            if let Some(p) = dot {
                write(p, graph.as_bytes())?;
            }
            Ok(report)
        }
        Command::AnalyzeLinear { matrix } => {
            let a = in_file(matrix, parse_matrix(&read(matrix)?, g.field))?;
            let r = linear_cycle_structure(&a, g.bound()?)?;
            Ok(json!({
                "field": a.field().to_string(),
                "n": a.rows(),
                "invariant_factors": r.invariant_factors.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "characteristic_polynomial": r.characteristic_polynomial().to_string(),
                "order": r.order,
                "max_transient_height": r.max_transient_height,
                "num_components": r.num_components(),
                "cycles": r.cycles,
            }))
        }
        Command::Deps { system, dot } => {
            let fds = in_file(system, parse_system(&read(system)?, g.field))?;
            let (report, graph) = deps_report(&fds);
            if let Some(p) = dot {
                write(p, graph.as_bytes())?;
            }
            Ok(report)
        }
        Command::Ncf(args) => ncf_report(args),
        Command::Infer {
            data,
            discretize: real,
            samples,
        } => {
            let text = read(data)?;
            let ts = if *real {
                let field = g.field.ok_or_else(|| {
                    Error::Invalid("--discretize needs --field to choose the number of levels".into())
                })?;
                in_file(data, parse_real_csv(&text).and_then(|segs| discretize(&segs, field)))?
            } else {
                let field = g
                    .field
                    .ok_or_else(|| Error::Invalid("infer needs --field".into()))?;
                in_file(data, TimeSeries::from_csv(&text, field))?
            };
            infer_report(&ts, &g.term_order()?, *samples, g.seed)
        }
        Command::ControlSim(args) => control_report(args),
    }
}

/// Parse `args`, run, and return the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = execute(&cli).and_then(|report| {
        let mut text = serde_json::to_string_pretty(&report).expect("JSON values serialize");
        text.push('\n');
        match &cli.global.out {
            Some(p) => write(p, text.as_bytes()),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
