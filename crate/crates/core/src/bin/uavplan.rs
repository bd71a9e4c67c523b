//! Command-line planner: wind statistics, flying ranges, fleet placement,
//! inspection routing, and the energy/endurance report.
//!
//! All file outputs are canonical JSON or static SVG and byte-identical
//! across runs on identical inputs. Errors leave a machine-readable JSON
//! object on stderr; exit codes: 0 ok, 2 validation failure, 3 infeasible,
//! 4 I/O.

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use uavplan_core::endurance::{
    flying_distance, hover_constants, max_flight_time, power, REFERENCE_CRUISE_POWER_W,
    REFERENCE_ENDURANCE_MIN,
};
use uavplan_core::io::config::{ConfigError, PlannerConfig};
use uavplan_core::io::plan::{
    canonical_json, emit_document, parse_document, Document, EmitError, LegRecord, PlanDocument,
    PlanSettings, PlanTurbine, PlanUav, RangeDiscRecord, RangeDocument, RouteRecord,
    RoutesDocument, TraceDocument, TraceStep, TraceUav, PLAN_SCHEMA, RANGE_SCHEMA, ROUTES_SCHEMA,
    STATS_SCHEMA, TRACE_SCHEMA,
};
use uavplan_core::io::project::{centroid_latitude, mercator_project};
use uavplan_core::io::records::{parse_layout_csv, parse_wind_csv, ParseError, ParsedWind};
use uavplan_core::io::svg::{placement_steps_svg, route_svg};
use uavplan_core::placement::{plan_placement, PlacementError, PlacementProblem, Turbine};
use uavplan_core::range::{build_range, choose_epsilon_v, wind_stats, StatsError, WindStats};
use uavplan_core::routing::{
    brute_force_path, build_cost_matrix, held_karp_path, split_by_endurance, RouteNode,
    RoutingError,
};
use uavplan_core::wind::{wind_from_met, Point2D};

#[derive(Parser)]
#[command(name = "uavplan", version, about = "Wind-aware UAV inspection planner for offshore wind farms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report wind statistics: gust/mean ratio histogram and cumulative fractions.
    Stats(StatsArgs),
    /// Compute the wind-limited flying range of a UAV stationed at a turbine.
    Range(RangeArgs),
    /// Place the minimum UAV fleet and emit the plan.
    Place(PlaceArgs),
    /// Compute the minimum-time inspection routes for one placed UAV.
    Route(RouteArgs),
    /// Rotor power breakdown and battery-limited endurance.
    Energy(EnergyArgs),
}

#[derive(Args)]
struct StatsArgs {
    /// Hourly wind CSV: `timestamp,mean_speed_ms,mean_dir_deg` plus optional gust columns.
    #[arg(long)]
    wind: PathBuf,
    /// Histogram bins.
    #[arg(long, default_value_t = 16)]
    bins: usize,
    /// Emit the report as canonical JSON on stdout instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RangeArgs {
    #[arg(long)]
    wind: PathBuf,
    /// Turbine layout CSV (code,lon_deg,lat_deg).
    #[arg(long)]
    layout: PathBuf,
    /// Planner TOML config.
    #[arg(long)]
    config: PathBuf,
    /// Turbine code the UAV is stationed at.
    #[arg(long = "uav-at")]
    uav_at: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlaceArgs {
    #[arg(long)]
    wind: PathBuf,
    #[arg(long)]
    layout: PathBuf,
    #[arg(long)]
    config: PathBuf,
    /// Plan JSON output path.
    #[arg(long)]
    out: PathBuf,
    /// Optional reduction-trace JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Optional step-figure SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct RouteArgs {
    /// Plan JSON produced by `place`.
    #[arg(long)]
    plan: PathBuf,
    /// Candidate index of the UAV, as listed in the plan.
    #[arg(long)]
    uav: usize,
    /// Wind speed in m/s.
    #[arg(long = "wind-speed")]
    wind_speed: f64,
    /// Meteorological wind direction in degrees (0 = from north).
    #[arg(long = "wind-dir-met")]
    wind_dir_met: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Cross-check the tour against the exhaustive solver (≤ 8 turbines).
    #[arg(long)]
    oracle: bool,
}

#[derive(Args)]
struct EnergyArgs {
    #[arg(long)]
    config: PathBuf,
    /// Airspeed for the power evaluation; default is the UAV's maximum speed.
    #[arg(long)]
    airspeed: Option<f64>,
}

/// A command failure with its exit code and machine-readable kind.
struct CliError {
    kind: &'static str,
    message: String,
    code: u8,
}

impl CliError {
    fn new(kind: &'static str, code: u8, message: impl Into<String>) -> Self {
        Self { kind, message: message.into(), code }
    }
}

const EXIT_VALIDATION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_IO: u8 = 4;

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new("io", EXIT_IO, e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        let (kind, code) = match &e {
            ParseError::DuplicateCode(_) => ("duplicate-code", EXIT_VALIDATION),
            ParseError::LatitudeOutOfRange { .. } => ("latitude-out-of-range", EXIT_VALIDATION),
            _ => ("parse", EXIT_IO),
        };
        CliError::new(kind, code, e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        let code = match &e {
            ConfigError::Io(_) | ConfigError::Toml(_) => EXIT_IO,
            _ => EXIT_VALIDATION,
        };
        CliError::new("config", code, e.to_string())
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        CliError::new("wind-stats", EXIT_VALIDATION, e.to_string())
    }
}

impl From<PlacementError> for CliError {
    fn from(e: PlacementError) -> Self {
        let (kind, code) = match &e {
            PlacementError::Validation(_) => ("plan-validation", EXIT_VALIDATION),
            _ => ("placement-infeasible", EXIT_INFEASIBLE),
        };
        CliError::new(kind, code, e.to_string())
    }
}

impl From<RoutingError> for CliError {
    fn from(e: RoutingError) -> Self {
        CliError::new("routing-infeasible", EXIT_INFEASIBLE, e.to_string())
    }
}

impl From<EmitError> for CliError {
    fn from(e: EmitError) -> Self {
        let code = match &e {
            EmitError::Io(_) => EXIT_IO,
            _ => EXIT_VALIDATION,
        };
        CliError::new("emit", code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Stats(args) => run_stats(args),
        Command::Range(args) => run_range(args),
        Command::Place(args) => run_place(args),
        Command::Route(args) => run_route(args),
        Command::Energy(args) => run_energy(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let payload = serde_json::json!({
                "error": { "kind": e.kind, "message": e.message }
            });
            eprintln!("{payload}");
            ExitCode::from(e.code)
        }
    }
}

fn load_wind(path: &Path) -> Result<ParsedWind, CliError> {
    let parsed = parse_wind_csv(File::open(path)?)?;
    for w in &parsed.warnings {
        eprintln!("warning: {}:{}: {}", path.display(), w.line, w.message);
    }
    Ok(parsed)
}

fn load_config(path: &Path) -> Result<PlannerConfig, CliError> {
    let config = PlannerConfig::load(path)?;
    for inconsistency in config.validate()? {
        eprintln!(
            "warning: airframe `{}` = {} disagrees with its defining formula ({:.6}, rel err {:.2e})",
            inconsistency.field, inconsistency.stated, inconsistency.derived, inconsistency.rel_err
        );
    }
    Ok(config)
}

fn load_projected_layout(
    layout_path: &Path,
    config: &PlannerConfig,
) -> Result<(Vec<Turbine>, f64), CliError> {
    let records = parse_layout_csv(File::open(layout_path)?)?;
    let ref_lat = config.projection.ref_lat_deg.unwrap_or_else(|| centroid_latitude(&records));
    let turbines = mercator_project(&records, ref_lat)?;
    Ok((turbines, ref_lat))
}

#[derive(Serialize)]
struct StatsDocument {
    schema: String,
    samples: usize,
    gust_samples: usize,
    ratio_histogram: Vec<StatsBin>,
    ratio_fraction_below: Vec<(f64, f64)>,
    mean_fraction_below: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct StatsBin {
    lo: f64,
    hi: f64,
    count: usize,
}

impl Document for StatsDocument {}

fn stats_document(stats: &WindStats, bins: usize) -> StatsDocument {
    let ratio_thresholds = [1.25, 1.5, 1.75, 2.0, 2.5, 3.0];
    let mean_thresholds = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 15.0];
    StatsDocument {
        schema: STATS_SCHEMA.into(),
        samples: stats.sample_count(),
        gust_samples: stats.gust_count(),
        ratio_histogram: stats
            .ratio_histogram(bins)
            .into_iter()
            .map(|b| StatsBin { lo: b.lo, hi: b.hi, count: b.count })
            .collect(),
        ratio_fraction_below: ratio_thresholds
            .iter()
            .map(|&x| (x, stats.fraction_ratio_below(x).unwrap_or(f64::NAN)))
            .filter(|(_, f)| f.is_finite())
            .collect(),
        mean_fraction_below: mean_thresholds
            .iter()
            .map(|&v| (v, stats.fraction_mean_below(v)))
            .collect(),
    }
}

fn run_stats(args: StatsArgs) -> Result<(), CliError> {
    let parsed = load_wind(&args.wind)?;
    let samples = parsed.to_samples();
    let stats = wind_stats(&samples)?;
    let doc = stats_document(&stats, args.bins.max(1));

    if args.json {
        print!("{}", canonical_json(&doc).map_err(CliError::from)?);
        return Ok(());
    }

    println!("wind samples: {} ({} with gust data)", doc.samples, doc.gust_samples);
    if doc.ratio_histogram.is_empty() {
        println!("no gust data: ratio histogram unavailable");
    } else {
        println!("gust/mean ratio histogram:");
        let max_count = doc.ratio_histogram.iter().map(|b| b.count).max().unwrap_or(1).max(1);
        for bin in &doc.ratio_histogram {
            let bar = "#".repeat((bin.count * 48).div_ceil(max_count).min(48));
            println!("  [{:5.2}, {:5.2})  {:6}  {bar}", bin.lo, bin.hi, bin.count);
        }
        for (x, f) in &doc.ratio_fraction_below {
            println!("ratio < {x:.2}: {:6.2} %", f * 100.0);
        }
    }
    for (v, f) in &doc.mean_fraction_below {
        println!("mean speed < {v:4.1} m/s: {:6.2} %", f * 100.0);
    }
    Ok(())
}

fn run_range(args: RangeArgs) -> Result<(), CliError> {
    let config = load_config(&args.config)?;
    let parsed = load_wind(&args.wind)?;
    let samples = parsed.to_samples();
    let (turbines, _) = load_projected_layout(&args.layout, &config)?;

    let anchor = turbines
        .iter()
        .find(|t| t.code == args.uav_at)
        .ok_or_else(|| {
            CliError::new("unknown-turbine", EXIT_VALIDATION, format!("no turbine coded {}", args.uav_at))
        })?;

    let stats = wind_stats(&samples)?;
    let spec = config.uav_spec();
    let epsilon_v = choose_epsilon_v(&stats, spec.u_wind, config.range.gust_factor, config.epsilon_mode());
    let range = build_range(anchor.position, &samples, config.range.mu, epsilon_v, spec.t_max, spec.u_max);

    let doc = RangeDocument {
        schema: RANGE_SCHEMA.into(),
        at_code: anchor.code.clone(),
        anchor_x_m: range.anchor.x,
        anchor_y_m: range.anchor.y,
        rho_m: flying_distance(spec.u_max, spec.t_max),
        mu: config.range.mu,
        epsilon_v_ms: epsilon_v,
        discs: range
            .discs
            .iter()
            .map(|d| RangeDiscRecord {
                segment: d.segment,
                wind_x_ms: d.wind.wx,
                wind_y_ms: d.wind.wy,
                center_x_m: d.disc.center.x,
                center_y_m: d.disc.center.y,
                radius_m: d.disc.radius,
            })
            .collect(),
    };
    emit_document(&doc, &args.out)?;
    println!(
        "range for {}: rho {:.1} m, epsilon_v {:.1} m/s, {} discs -> {}",
        doc.at_code,
        doc.rho_m,
        epsilon_v,
        doc.discs.len(),
        args.out.display()
    );
    Ok(())
}

fn run_place(args: PlaceArgs) -> Result<(), CliError> {
    let config = load_config(&args.config)?;
    let parsed = load_wind(&args.wind)?;
    let samples = parsed.to_samples();
    let records = parse_layout_csv(File::open(&args.layout)?)?;
    let ref_lat = config.projection.ref_lat_deg.unwrap_or_else(|| centroid_latitude(&records));
    let turbines = mercator_project(&records, ref_lat)?;

    let stats = wind_stats(&samples)?;
    let spec = config.uav_spec();
    let epsilon_v = choose_epsilon_v(&stats, spec.u_wind, config.range.gust_factor, config.epsilon_mode());
    let ranges = turbines
        .iter()
        .map(|t| build_range(t.position, &samples, config.range.mu, epsilon_v, spec.t_max, spec.u_max))
        .collect();
    let problem = PlacementProblem { turbines, ranges, p: spec.p, d: spec.d };
    let (state, trace) = plan_placement(&problem)?;

    let turbine_docs: Vec<PlanTurbine> = problem
        .turbines
        .iter()
        .zip(records.iter())
        .map(|(t, r)| PlanTurbine {
            code: t.code.clone(),
            lon_deg: r.lon_deg,
            lat_deg: r.lat_deg,
            x_m: t.position.x,
            y_m: t.position.y,
        })
        .collect();
    let active: Vec<usize> = (0..state.candidate_count()).filter(|&i| state.active[i]).collect();
    let uav_docs: Vec<PlanUav> = active
        .iter()
        .map(|&i| PlanUav {
            index: i,
            at_code: problem.turbines[i].code.clone(),
            x_m: state.positions[i].x,
            y_m: state.positions[i].y,
            turbine_codes: state
                .assigned_turbines(i)
                .into_iter()
                .map(|k| problem.turbines[k].code.clone())
                .collect(),
            link_indices: active.iter().copied().filter(|&j| j != i && state.links[i][j]).collect(),
        })
        .collect();

    let doc = PlanDocument {
        schema: PLAN_SCHEMA.into(),
        settings: PlanSettings {
            u_max_ms: spec.u_max,
            u_wind_ms: spec.u_wind,
            p: spec.p,
            d_m: spec.d,
            t_max_s: spec.t_max,
            mu: config.range.mu,
            epsilon_v_ms: epsilon_v,
        },
        ref_lat_deg: ref_lat,
        turbines: turbine_docs,
        uavs: uav_docs,
        steps: state.step,
        active_count: state.active_count(),
    };
    emit_document(&doc, &args.out)?;

    if let Some(trace_path) = &args.trace {
        let trace_doc = TraceDocument {
            schema: TRACE_SCHEMA.into(),
            steps: trace
                .iter()
                .map(|snap| TraceStep {
                    step: snap.step,
                    active: (0..snap.active.len())
                        .filter(|&i| snap.active[i])
                        .map(|i| TraceUav {
                            index: i,
                            turbine_codes: snap.assign[i]
                                .iter()
                                .enumerate()
                                .filter_map(|(k, &b)| b.then(|| problem.turbines[k].code.clone()))
                                .collect(),
                            link_indices: (0..snap.active.len())
                                .filter(|&j| j != i && snap.active[j] && snap.links[i][j])
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        };
        emit_document(&trace_doc, trace_path)?;
    }
    if let Some(svg_path) = &args.svg {
        std::fs::write(svg_path, placement_steps_svg(&trace, &problem.turbines))?;
    }

    println!(
        "placed {} UAVs over {} turbines in {} steps -> {}",
        doc.active_count,
        doc.turbines.len(),
        doc.steps,
        args.out.display()
    );
    Ok(())
}

fn run_route(args: RouteArgs) -> Result<(), CliError> {
    let plan: PlanDocument = parse_document(&args.plan)?;
    let uav = plan
        .uavs
        .iter()
        .find(|u| u.index == args.uav)
        .ok_or_else(|| {
            CliError::new("unknown-uav", EXIT_VALIDATION, format!("plan has no active UAV {}", args.uav))
        })?;

    let position_of = |code: &str| -> Result<Point2D, CliError> {
        plan.turbines
            .iter()
            .find(|t| t.code == code)
            .map(|t| Point2D::new(t.x_m, t.y_m))
            .ok_or_else(|| {
                CliError::new("unknown-turbine", EXIT_VALIDATION, format!("plan has no turbine {code}"))
            })
    };

    let start = RouteNode { code: uav.at_code.clone(), position: position_of(&uav.at_code)? };
    let mut interiors: Vec<RouteNode> = Vec::new();
    for code in &uav.turbine_codes {
        if *code != uav.at_code {
            interiors.push(RouteNode { code: code.clone(), position: position_of(code)? });
        }
    }

    let wind = wind_from_met(args.wind_speed, args.wind_dir_met.to_radians())
        .map_err(|e| CliError::new("wind", EXIT_VALIDATION, e.to_string()))?;

    let doc = if interiors.is_empty() {
        // The UAV inspects only the turbine it is stationed on: one trivial
        // route, no flying.
        RoutesDocument {
            schema: ROUTES_SCHEMA.into(),
            uav_index: uav.index,
            at_code: uav.at_code.clone(),
            wind_speed_ms: args.wind_speed,
            wind_dir_met_deg: args.wind_dir_met,
            m: 1,
            total_s: 0.0,
            total_min: 0.0,
            routes: vec![RouteRecord {
                codes: vec![uav.at_code.clone(), uav.at_code.clone()],
                duration_s: 0.0,
                duration_min: 0.0,
                legs: Vec::new(),
            }],
        }
    } else {
        let costs = build_cost_matrix(
            &start,
            &interiors,
            wind,
            plan.settings.u_max_ms,
            plan.settings.u_wind_ms,
        )?;
        let tour = held_karp_path(&costs)?;
        if args.oracle {
            if costs.interior_count() <= 8 {
                let reference = brute_force_path(&costs)?;
                if reference.total != tour.total {
                    return Err(CliError::new(
                        "oracle-mismatch",
                        EXIT_VALIDATION,
                        format!("solver total {} != exhaustive total {}", tour.total, reference.total),
                    ));
                }
                println!("oracle: match ({} orders checked)", (1..=costs.interior_count()).product::<usize>());
            } else {
                println!("oracle: skipped ({} turbines exceed the exhaustive limit)", costs.interior_count());
            }
        }
        let route_plan = split_by_endurance(&tour.path, &costs, plan.settings.t_max_s)?;

        let routes: Vec<RouteRecord> = route_plan
            .routes
            .iter()
            .map(|route| RouteRecord {
                codes: route.nodes.iter().map(|&n| costs.nodes[n].code.clone()).collect(),
                duration_s: route.duration,
                duration_min: route.duration / 60.0,
                legs: route
                    .nodes
                    .windows(2)
                    .map(|w| {
                        let leg = costs.kinematics[w[0]][w[1]]
                            .expect("off-diagonal legs resolved in the cost matrix");
                        LegRecord {
                            from: costs.nodes[w[0]].code.clone(),
                            to: costs.nodes[w[1]].code.clone(),
                            distance_m: leg.time * leg.groundspeed,
                            time_s: leg.time,
                            groundspeed_ms: leg.groundspeed,
                            airspeed_ms: leg.airspeed,
                            theta_sw_rad: leg.theta_sw,
                            theta_sv_rad: leg.theta_sv,
                            tail_wind: leg.theta_sw <= std::f64::consts::PI / 2.0,
                            airspeed_over_limit: leg.airspeed_over_limit,
                        }
                    })
                    .collect(),
            })
            .collect();

        if let Some(svg_path) = &args.svg {
            std::fs::write(svg_path, route_svg(&route_plan, &costs))?;
        }

        RoutesDocument {
            schema: ROUTES_SCHEMA.into(),
            uav_index: uav.index,
            at_code: uav.at_code.clone(),
            wind_speed_ms: args.wind_speed,
            wind_dir_met_deg: args.wind_dir_met,
            m: route_plan.route_count(),
            total_s: route_plan.total_duration,
            total_min: route_plan.total_duration / 60.0,
            routes,
        }
    };

    emit_document(&doc, &args.out)?;
    println!("UAV {} at {}: M = {} route(s), total {:.4} min -> {}",
        doc.uav_index, doc.at_code, doc.m, doc.total_min, args.out.display());
    for (i, r) in doc.routes.iter().enumerate() {
        println!("  route {}: {}  ({:.4} min)", i + 1, r.codes.join(" > "), r.duration_min);
    }
    Ok(())
}

fn run_energy(args: EnergyArgs) -> Result<(), CliError> {
    let config = load_config(&args.config)?;
    let airspeed = args.airspeed.unwrap_or(config.uav.u_max_ms);
    if airspeed < 0.0 {
        return Err(CliError::new("airspeed", EXIT_VALIDATION, "airspeed must be non-negative"));
    }
    let params = &config.airframe;
    let (p0, pi) = hover_constants(params);
    let breakdown = power(airspeed, params);
    let endurance_s = max_flight_time(params, airspeed);
    let reference_endurance_s = params.battery_energy_wh * 3600.0 / REFERENCE_CRUISE_POWER_W;

    println!("airspeed: {airspeed:.2} m/s");
    println!("hover constants: P0 {p0:.4} W, Pi {pi:.4} W");
    println!("blade profile: {:.4} W", breakdown.blade_profile_w);
    println!("induced:       {:.4} W", breakdown.induced_w);
    println!("parasite:      {:.4} W", breakdown.parasite_w);
    println!("total:         {:.4} W", breakdown.total_w);
    println!(
        "published reference: {REFERENCE_CRUISE_POWER_W:.2} W (model/reference ratio {:.4}; see docs/energy-model.md)",
        breakdown.total_w / REFERENCE_CRUISE_POWER_W
    );
    println!(
        "endurance at model power:     {:.2} min ({:.1} s from {:.1} Wh)",
        endurance_s / 60.0,
        endurance_s,
        params.battery_energy_wh
    );
    println!(
        "endurance at reference power: {:.2} min (published figure {REFERENCE_ENDURANCE_MIN:.2} min)",
        reference_endurance_s / 60.0
    );
    let t_max = config.t_max_s();
    println!(
        "planning t_max: {:.1} s -> one-way flying distance rho = {:.1} m at u_max {:.1} m/s",
        t_max,
        flying_distance(config.uav.u_max_ms, t_max),
        config.uav.u_max_ms
    );
    Ok(())
}
