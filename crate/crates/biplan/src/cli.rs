//! Command-line interface. Exit codes: 0 success, 2 well-formed negative
//! answer (infeasible, validation failure, oracle mismatch), 1 error; errors
//! print a structured JSON object to stderr.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::freespace::{compute_free_space, Config, FreeSpace, Workspace};
use crate::hardness::{
    build_hardness_workspace, plan_from_partition, scale_instance, PartitionInstance,
};
use crate::io::{CliError, GadgetLayoutDto, PlanFile, WorkspaceFile};
use crate::oracle::{
    dense_coupled_cost, random_workspace, refined_plan_cost, RandomWorkspaceParams,
    DEFAULT_NODE_BUDGET,
};
use crate::plan::{to_timed, validate_decoupled, validate_timed, ValidationReport};
use crate::planner::plan_min_sum_with_plan;
use crate::scalar::Scalar;
use crate::svg::render_svg;

#[derive(Parser)]
#[command(
    name = "biplan",
    about = "Exact min-sum motion planning for two unit-square robots",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute an optimal plan for a workspace instance.
    Plan {
        workspace: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Use the admissible sum-of-single-robot-distances heuristic.
        #[arg(long)]
        heuristic: bool,
    },
    /// Validate a plan file against a workspace.
    Validate {
        workspace: PathBuf,
        plan: PathBuf,
        /// Also validate the time-parameterized form.
        #[arg(long)]
        timed: bool,
    },
    /// Compare the planner against a brute-force oracle on random instances.
    OracleCheck {
        /// Seed range `a..b` (inclusive start, exclusive end).
        #[arg(long)]
        seeds: String,
        /// `dense` (coupled half-integer lattice) or `refined` (extra grid
        /// levels plus midpoints).
        #[arg(long, default_value = "dense")]
        mode: String,
        #[arg(long, default_value_t = 16)]
        max_vertices: usize,
        /// Worker threads for independent seeds; results merge by seed order.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Emit a min-makespan hardness instance for a Partition input.
    GenGadget {
        /// Comma-separated positive integers.
        #[arg(long)]
        values: String,
        #[arg(long)]
        out: PathBuf,
        /// 1-based indices assigned to robot A; the rest go to B. Also emits
        /// the witness timed plan next to the instance.
        #[arg(long)]
        partition: Option<String>,
    },
    /// Emit a random workspace instance.
    GenRandom {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 16)]
        max_vertices: usize,
        #[arg(long, default_value_t = 1)]
        holes: usize,
    },
    /// Render a workspace (and optionally a plan) to SVG.
    Render {
        workspace: PathBuf,
        plan: Option<PathBuf>,
        #[arg(long)]
        svg: PathBuf,
    },
}

pub fn node_budget_from_env() -> u64 {
    std::env::var("BIPLAN_NODE_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

/// Parses argv and runs one subcommand, returning the process exit code.
pub fn cli_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                eprintln!("{}", CliError::new("usage", e).to_json());
                return 1;
            }
            // --help / --version go to stdout with exit 0.
            print!("{e}");
            return 0;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json());
            1
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<(WorkspaceFile, Workspace, Config, Config), CliError> {
    let text = read_file(path)?;
    let file = WorkspaceFile::parse(&text).map_err(|e| CliError::new("parse", e))?;
    let (w, s, t) = file
        .to_instance()
        .map_err(|e| CliError::new("workspace", e))?;
    Ok((file, w, s, t))
}

fn free_space_of(w: &Workspace) -> Result<FreeSpace, CliError> {
    compute_free_space(w).map_err(|e| CliError::new("freespace", e))
}

#[derive(Serialize)]
struct PlanOutput {
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<Scalar>,
}

#[derive(Serialize)]
struct OracleSummary {
    mode: String,
    seeds: String,
    checked: usize,
    agreements: usize,
    mismatches: Vec<OracleMismatch>,
}

#[derive(Serialize)]
struct OracleMismatch {
    seed: u64,
    planner: Option<Scalar>,
    oracle: Option<Scalar>,
    instance: WorkspaceFile,
}

fn run(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Plan {
            workspace,
            out,
            svg,
            heuristic,
        } => {
            let (file, w, s, t) = load_instance(&workspace)?;
            let f = free_space_of(&w)?;
            let (result, plan) = plan_min_sum_with_plan(&f, &s, &t, heuristic)
                .map_err(|e| CliError::new("plan", e))?;
            let _ = file;
            match plan {
                Some(plan) => {
                    let timed = to_timed(&plan).map_err(|e| CliError::new("plan", e))?;
                    println!(
                        "{}",
                        serde_json::to_string(&PlanOutput {
                            status: "optimal",
                            cost: Some(result.cost.clone()),
                        })
                        .expect("serializes")
                    );
                    if let Some(out) = out {
                        let pf = PlanFile::from_plan(&result.cost, &plan, Some(&timed));
                        write_file(&out, &pf.to_json())?;
                    }
                    if let Some(svg_path) = svg {
                        let doc = render_svg(&w, &f, Some(&plan), &[s, t], &[]);
                        write_file(&svg_path, &doc)?;
                    }
                    Ok(0)
                }
                None => {
                    println!(
                        "{}",
                        serde_json::to_string(&PlanOutput {
                            status: "infeasible",
                            cost: None,
                        })
                        .expect("serializes")
                    );
                    Ok(2)
                }
            }
        }
        Command::Validate {
            workspace,
            plan,
            timed,
        } => {
            let (_, w, _, _) = load_instance(&workspace)?;
            let f = free_space_of(&w)?;
            let text = read_file(&plan)?;
            let pf = PlanFile::parse(&text).map_err(|e| CliError::new("parse", e))?;
            let decoupled = pf.to_decoupled().map_err(|e| CliError::new("plan", e))?;
            let mut report = if decoupled.moves.is_empty() && pf.traj_a.is_some() {
                // Timed-only plan file (e.g. a hardness witness).
                ValidationReport::default()
            } else {
                validate_decoupled(&f, &decoupled)
            };
            if timed {
                let tp = match pf.to_timed().map_err(|e| CliError::new("plan", e))? {
                    Some(tp) => tp,
                    None => to_timed(&decoupled).map_err(|e| CliError::new("plan", e))?,
                };
                let timed_report = validate_timed(&f, &tp);
                report.violations.extend(timed_report.violations);
            }
            println!(
                "{}",
                serde_json::to_string(&report).expect("report serializes")
            );
            Ok(if report.ok() { 0 } else { 2 })
        }
        Command::OracleCheck {
            seeds,
            mode,
            max_vertices,
            jobs,
        } => {
            let (lo, hi) = parse_seed_range(&seeds)?;
            let budget = node_budget_from_env();
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| CliError::new("jobs", e))?;
            let seed_list: Vec<u64> = (lo..hi).collect();
            let results: Vec<Result<(u64, Option<OracleMismatch>), CliError>> =
                pool.install(|| {
                    seed_list
                        .par_iter()
                        .map(|&seed| check_one_seed(seed, &mode, max_vertices, budget))
                        .collect()
                });
            let mut mismatches = Vec::new();
            let mut checked = 0;
            for r in results {
                let (_, mm) = r?;
                checked += 1;
                if let Some(mm) = mm {
                    mismatches.push(mm);
                }
            }
            let agreements = checked - mismatches.len();
            let failed = !mismatches.is_empty();
            let summary = OracleSummary {
                mode,
                seeds,
                checked,
                agreements,
                mismatches,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&summary).expect("summary serializes")
            );
            Ok(if failed { 2 } else { 0 })
        }
        Command::GenGadget {
            values,
            out,
            partition,
        } => {
            let values: Vec<u64> = values
                .split(',')
                .map(|v| v.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::new("values", e))?;
            let instance =
                PartitionInstance::new(values).map_err(|e| CliError::new("values", e))?;
            let scaled = scale_instance(&instance);
            let built =
                build_hardness_workspace(&scaled).map_err(|e| CliError::new("gadget", e))?;
            let mut file =
                WorkspaceFile::from_instance(&built.workspace, &built.start, &built.goal);
            file.t_max = Some(built.t_max.clone());
            file.layouts = Some(
                built
                    .layouts
                    .iter()
                    .map(GadgetLayoutDto::from_layout)
                    .collect(),
            );
            write_file(&out, &file.to_json())?;
            if let Some(part) = partition {
                let part_a: Vec<usize> = if part.trim().is_empty() {
                    vec![]
                } else {
                    part.split(',')
                        .map(|v| v.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| CliError::new("partition", e))?
                };
                let part_b: Vec<usize> = (1..=built.layouts.len())
                    .filter(|i| !part_a.contains(i))
                    .collect();
                let witness = plan_from_partition(&built.layouts, &part_a, &part_b)
                    .map_err(|e| CliError::new("partition", e))?;
                // Min-sum cost of the witness: total length of both paths.
                let len = |traj: &crate::plan::Trajectory| -> Scalar {
                    let mut total = Scalar::zero();
                    for w in traj.windows(2) {
                        total += crate::geometry::l1_dist(&w[0].1, &w[1].1);
                    }
                    total
                };
                let cost = len(&witness.traj_a) + len(&witness.traj_b);
                let start = Config::new(
                    witness.traj_a[0].1.clone(),
                    witness.traj_b[0].1.clone(),
                );
                let shell = crate::plan::DecoupledPlan {
                    start,
                    moves: vec![],
                };
                let pf = PlanFile::from_plan(&cost, &shell, Some(&witness));
                let witness_path = out.with_extension("plan.json");
                write_file(&witness_path, &pf.to_json())?;
            }
            Ok(0)
        }
        Command::GenRandom {
            seed,
            out,
            max_vertices,
            holes,
        } => {
            let params = RandomWorkspaceParams {
                seed,
                bbox: crate::geometry::Rect::of_ints(0, 12, 0, 12),
                max_vertices,
                holes: (0, holes),
            };
            let (w, s, t) = random_workspace(&params).map_err(|e| CliError::new("gen", e))?;
            let file = WorkspaceFile::from_instance(&w, &s, &t);
            write_file(&out, &file.to_json())?;
            Ok(0)
        }
        Command::Render {
            workspace,
            plan,
            svg,
        } => {
            let (file, w, s, t) = load_instance(&workspace)?;
            let f = free_space_of(&w)?;
            let decoupled = match plan {
                Some(p) => {
                    let text = read_file(&p)?;
                    let pf = PlanFile::parse(&text).map_err(|e| CliError::new("parse", e))?;
                    Some(pf.to_decoupled().map_err(|e| CliError::new("plan", e))?)
                }
                None => None,
            };
            let gates: Vec<crate::geometry::AxisSegment> = file
                .layouts
                .as_deref()
                .unwrap_or_default()
                .iter()
                .map(|l| crate::geometry::AxisSegment {
                    a: crate::geometry::Point::new(l.gate.0 .0.clone(), l.gate.0 .1.clone()),
                    b: crate::geometry::Point::new(l.gate.1 .0.clone(), l.gate.1 .1.clone()),
                })
                .collect();
            let doc = render_svg(&w, &f, decoupled.as_ref(), &[s, t], &gates);
            write_file(&svg, &doc)?;
            Ok(0)
        }
    }
}

fn parse_seed_range(s: &str) -> Result<(u64, u64), CliError> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        return Err(CliError::new("seeds", "expected a range like 0..200"));
    }
    let lo: u64 = parts[0]
        .trim()
        .parse()
        .map_err(|e| CliError::new("seeds", e))?;
    let hi: u64 = parts[1]
        .trim()
        .parse()
        .map_err(|e| CliError::new("seeds", e))?;
    if hi < lo {
        return Err(CliError::new("seeds", "range end before start"));
    }
    Ok((lo, hi))
}

fn check_one_seed(
    seed: u64,
    mode: &str,
    max_vertices: usize,
    budget: u64,
) -> Result<(u64, Option<OracleMismatch>), CliError> {
    let mut params = RandomWorkspaceParams::new(seed);
    params.max_vertices = max_vertices;
    let (w, s, t) = random_workspace(&params).map_err(|e| CliError::new("gen", e))?;
    let f = free_space_of(&w)?;
    let (result, _) =
        plan_min_sum_with_plan(&f, &s, &t, false).map_err(|e| CliError::new("plan", e))?;
    let planner_cost = result.is_optimal().then(|| result.cost.clone());
    let oracle_cost = match mode {
        "dense" => dense_coupled_cost(&f, &s, &t, &Scalar::half(), budget)
            .map_err(|e| CliError::new("oracle", e))?,
        "refined" => {
            let c0 = refined_plan_cost(&f, &s, &t, 0).map_err(|e| CliError::new("oracle", e))?;
            let c1 = refined_plan_cost(&f, &s, &t, 1).map_err(|e| CliError::new("oracle", e))?;
            if c0 != c1 {
                // Report the disagreement between refinement levels.
                return Ok((
                    seed,
                    Some(OracleMismatch {
                        seed,
                        planner: planner_cost,
                        oracle: c1,
                        instance: WorkspaceFile::from_instance(&w, &s, &t),
                    }),
                ));
            }
            c0
        }
        other => {
            return Err(CliError::new(
                "mode",
                format!("unknown oracle mode {other:?}"),
            ))
        }
    };
    let mismatch = if planner_cost != oracle_cost {
        Some(OracleMismatch {
            seed,
            planner: planner_cost,
            oracle: oracle_cost,
            instance: WorkspaceFile::from_instance(&w, &s, &t),
        })
    } else {
        None
    };
    Ok((seed, mismatch))
}

