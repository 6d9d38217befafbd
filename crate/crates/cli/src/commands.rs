use std::collections::BTreeMap;

use rayon::prelude::*;
use ricci_gap::curvature::{curvature_profile, kappa_alpha_edge, negative_fraction_of, CurvatureProfile, EdgeCurvature};
use ricci_gap::generators::generate;
use ricci_gap::profile::{ball_census, profile_distance, verify_stationarity};
use ricci_gap::rational::{parse, ratio};
use ricci_gap::spectral::{eigen_basis, spectrum};
use ricci_gap::transport::good_optimal_coupling;
use ricci_gap::trichotomy::{sweep, GraphStats, RhoConvention};
use ricci_gap::walks::{
    coupled_meeting_experiment, entropy_radius_gap, entropy_radius_gap_of, entropy_series, entropy_series_of,
    spectral_radius_estimate, spectral_radius_estimate_of, walk_distribution, LumpedChain, Probabilities,
    WalkMode,
};
use ricci_gap::{FamilySpec, Rational};
use serde_json::json;

use crate::error::{usage, CliResult};
use crate::output::{csv_text, rational, Arithmetic, RunContext, Sinks};
use crate::{
    ClauseParams, Command, CurvatureArgs, Mode, ProfileArgs, ReportArgs, SpectrumArgs, SweepArgs, TrichotomyArgs,
    WalkArgs,
};

pub fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(format!("cannot start {n} worker threads: {e}")))?;
    }
    Ok(())
}

pub fn run(command: Command, sinks: &Sinks, ctx: &mut RunContext) -> CliResult<()> {
    match command {
        Command::Generate(family) => {
            let spec = family.spec()?.ok_or_else(|| usage("generate needs --family NAME"))?;
            ctx.set_seed(family.seed);
            sinks.primary(&(generate(&spec)?.to_json() + "\n"))
        }
        Command::Curvature(args) => curvature(args, sinks, ctx),
        Command::Spectrum(args) => spectrum_cmd(args, sinks, ctx),
        Command::Walk(args) => walk(args, sinks, ctx),
        Command::Profile(args) => profile(args, sinks, ctx),
        Command::Trichotomy(args) => trichotomy(args, sinks, ctx),
        Command::Sweep(args) => sweep_cmd(args, sinks, ctx),
        Command::Report(args) => report(args, sinks, ctx),
    }
}

fn parse_rational(text: &str, what: &str) -> CliResult<Rational> {
    parse(text).map_err(|e| usage(format!("{what}: {e}")))
}

fn curvature(args: CurvatureArgs, sinks: &Sinks, ctx: &mut RunContext) -> CliResult<()> {
    let g = args.graph.load(ctx)?;
    let eps: Vec<Rational> = args.eps.iter().map(|e| parse_rational(e, "--eps")).collect::<CliResult<_>>()?;
    let profile = match &args.alpha {
        None => curvature_profile(&g, &eps)?,
        Some(text) => {
            let alpha = parse_rational(text, "--alpha")?;
            if g.edge_count() == 0 {
                return Err(usage("curvature of an edgeless graph is undefined"));
            }
            let edges: Vec<(usize, usize)> = g.edges().collect();
            let per_edge: Vec<EdgeCurvature> = edges
                .par_iter()
                .map(|&(x, y)| Ok(EdgeCurvature { edge: (x, y), kappa: kappa_alpha_edge(&g, x, y, &alpha)? }))
                .collect::<ricci_gap::Result<_>>()?;
            let min_kappa = per_edge.iter().map(|e| e.kappa.clone()).min().unwrap();
            let negative_fraction_at = eps.iter().map(|e| (e.clone(), negative_fraction_of(&per_edge, e))).collect();
            CurvatureProfile { per_edge, min_kappa, negative_fraction_at }
        }
    };
    let rows = profile.per_edge.iter().map(|e| {
        vec![
            e.edge.0.to_string(),
            e.edge.1.to_string(),
            e.kappa.numer().to_string(),
            e.kappa.denom().to_string(),
        ]
    });
    sinks.primary(&csv_text(&["u", "v", "kappa_num", "kappa_den"], rows)?)?;
    let histogram: BTreeMap<String, usize> =
        profile.histogram().iter().map(|(k, c)| (rational(k), *c)).collect();
    let fractions: BTreeMap<String, String> =
        profile.negative_fraction_at.iter().map(|(e, f)| (rational(e), rational(f))).collect();
    sinks.summary(&json!({
        "edges": profile.per_edge.len(),
        "alpha": args.alpha.as_deref().map_or("1/2".to_string(), |a| rational(&parse(a).unwrap())),
        "min": rational(&profile.min_kappa),
        "histogram": histogram,
        "negative_fraction": fractions,
    }))
}

fn spectrum_cmd(args: SpectrumArgs, sinks: &Sinks, ctx: &mut RunContext) -> CliResult<()> {
    ctx.set_arithmetic(Arithmetic::Float);
    let g = args.graph.load(ctx)?;
    if let Some(o) = args.local_measure {
        g.check_vertex(o)?;
        let m = eigen_basis(&g)?.local_measure(o);
        let rows = m.atoms.iter().map(|(l, w)| vec![l.to_string(), w.to_string()]);
        return sinks.primary(&csv_text(&["lambda", "weight"], rows)?);
    }
    if let Some(rho) = args.count_above {
        let s = spectrum(&g)?;
        let count = if args.at_least_rho { s.count_at_least(rho) } else { s.count_above(rho) };
        return sinks.primary(&format!("{count}\n"));
    }
    if let Some(v) = args.delocalization {
        let fraction = eigen_basis(&g)?.delocalization_fraction(v[0], v[1]);
        return sinks.primary(&format!("{fraction}\n"));
    }
    let s = spectrum(&g)?;
    let rows = s.eigenvalues.iter().enumerate().map(|(i, l)| vec![i.to_string(), l.to_string()]);
    sinks.primary(&csv_text(&["index", "lambda"], rows)?)
}

/// The radial chain of a regular tree truncation, when the walk starts at its root.
fn tree_chain(args: &WalkArgs) -> CliResult<Option<LumpedChain>> {
    let Some(FamilySpec::RegularTreeTruncation { d, depth }) = args.graph.family.spec()? else {
        return Ok(None);
    };
    if args.origin != 0 || args.graph.input.is_some() {
        return Ok(None);
    }
    Ok(Some(LumpedChain::regular_tree(d, depth)?))
}

fn walk(args: WalkArgs, sinks: &Sinks, ctx: &mut RunContext) -> CliResult<()> {
    ctx.set_arithmetic(Arithmetic::Float);
    if let Some(pair) = &args.meet {
        let seed = args.graph.family.seed.ok_or_else(|| usage("--meet requires --seed"))?;
        let g = args.graph.load(ctx)?;
        ctx.set_seed(Some(seed));
        let e = coupled_meeting_experiment(&g, pair[0], pair[1], args.horizon, args.trials, seed)?;
        let rows = e.tail.iter().map(|(t, p)| vec![t.to_string(), p.to_string()]);
        sinks.primary(&csv_text(&["t", "survival"], rows)?)?;
        let checkpoints: BTreeMap<usize, f64> = std::iter::successors(Some(1usize), |t| Some(t * 2))
            .take_while(|&t| t <= args.horizon)
            .map(|t| (t, e.wilson_upper_at_least(t)))
            .collect();
        return sinks.summary(&json!({
            "pair": [e.pair.0, e.pair.1],
            "trials": e.trials,
            "horizon": e.horizon,
            "seed": e.seed,
            "met": e.met,
            "mean_meeting_time": e.mean_meeting_time,
            "median_meeting_time": e.median_meeting_time,
            "drift": e.drift,
            "wilson_upper_at_least": checkpoints,
        }));
    }
    if let Some(t) = args.t {
        let mode = match args.mode {
            Mode::Auto => WalkMode::Auto,
            Mode::Exact => WalkMode::Exact,
            Mode::Float => WalkMode::Float,
        };
        let g = args.graph.load(ctx)?;
        let w = walk_distribution(&g, args.origin, t, mode)?;
        let rows: Vec<Vec<String>> = match &w.probabilities {
            Probabilities::Exact(m) => {
                ctx.set_arithmetic(Arithmetic::Rational);
                m.iter().map(|(v, p)| vec![v.to_string(), rational(p)]).collect()
            }
            Probabilities::Float(m) => m.iter().map(|(v, p)| vec![v.to_string(), p.to_string()]).collect(),
        };
        return sinks.primary(&csv_text(&["vertex", "probability"], rows)?);
    }
    let chain = tree_chain(&args)?;
    if let Some(t_max) = args.entropy {
        let s = match &chain {
            Some(c) => entropy_series_of(c, t_max),
            None => entropy_series(&args.graph.load(ctx)?, args.origin, t_max)?,
        };
        let rows = s.values.iter().map(|&(t, h)| {
            let rate = if t == 0 { String::new() } else { (h / t as f64).to_string() };
            vec![t.to_string(), h.to_string(), rate]
        });
        return sinks.primary(&csv_text(&["t", "entropy", "rate"], rows)?);
    }
    if let Some(t_max) = args.radius {
        let s = match &chain {
            Some(c) => spectral_radius_estimate_of(c, t_max),
            None => spectral_radius_estimate(&args.graph.load(ctx)?, args.origin, t_max)?,
        };
        let rows = s.values.iter().map(|(t, r)| vec![t.to_string(), r.to_string()]);
        return sinks.primary(&csv_text(&["t", "radius"], rows)?);
    }
    if let Some(t) = args.gap {
        let gap = match &chain {
            Some(c) => entropy_radius_gap_of(c, t)?,
            None => entropy_radius_gap(&args.graph.load(ctx)?, args.origin, t)?,
        };
        return sinks.primary(&format!("{gap}\n"));
    }
    unreachable!("clap requires one walk operation")
}

fn profile(args: ProfileArgs, sinks: &Sinks, ctx: &mut RunContext) -> CliResult<()> {
    let g = args.graph.load(ctx)?;
    if args.stationarity {
        return sinks.primary(&format!("{}\n", rational(&verify_stationarity(&g)?)));
    }
    if let Some(path) = &args.compare {
        let h = crate::source::read_graph(path, ctx)?;
        let d = profile_distance(&g, &h, args.ball_depth)?;
        let rows = d.per_depth_tv.iter().map(|(t, tv)| vec![t.to_string(), rational(tv)]);
        sinks.primary(&csv_text(&["depth", "tv"], rows)?)?;
        return sinks.summary(&json!({ "aggregate": d.aggregate, "weights": "2^-depth" }));
    }
    let census = ball_census(&g, args.ball_depth)?;
    let classes: BTreeMap<String, String> =
        census.frequencies().iter().map(|(code, f)| (code.clone(), rational(f))).collect();
    let doc = json!({
        "depth": census.depth,
        "vertex_count": census.vertex_count,
        "classes": classes,
    });
    sinks.primary(&(serde_json::to_string_pretty(&doc)? + "\n"))
}

fn convention(params: &ClauseParams) -> RhoConvention {
    if params.at_least_rho {
        RhoConvention::AtLeast
    } else {
        RhoConvention::Strict
    }
}

fn trichotomy(args: TrichotomyArgs, sinks: &Sinks, ctx: &mut RunContext) -> CliResult<()> {
    ctx.set_arithmetic(Arithmetic::Float);
    let g = args.graph.load(ctx)?;
    let eps = parse_rational(&args.eps, "--eps")?;
    let report =
        ricci_gap::trichotomy::evaluate(&g, args.params.delta, args.params.rho, &eps, convention(&args.params))?;
    sinks.primary(&(serde_json::to_string_pretty(&report)? + "\n"))
}

fn sweep_cmd(args: SweepArgs, sinks: &Sinks, ctx: &mut RunContext) -> CliResult<()> {
    ctx.set_arithmetic(Arithmetic::Float);
    let specs = crate::source::read_specs(&args.specs, ctx)?;
    let grid: Vec<Rational> =
        args.eps_grid.iter().map(|e| parse_rational(e, "--eps-grid")).collect::<CliResult<_>>()?;
    let rows = sweep(&specs, args.params.delta, args.params.rho, &grid, convention(&args.params))?;
    let csv_rows = rows.iter().map(|r| vec![r.family.clone(), r.params.clone(), r.eps.clone(), r.fired_label()]);
    sinks.primary(&csv_text(&["family", "params", "eps", "fired_clause"], csv_rows)?)
}

const REPORT_HEADER: [&str; 13] = [
    "family",
    "params",
    "vertices",
    "edges",
    "kappa_min",
    "negative_fraction",
    "lambda2",
    "count_above_rho",
    "gamma_bound",
    "stationarity_residual",
    "sparsity",
    "fired_clause",
    "any_clause",
];

fn report_row(spec: &FamilySpec, delta: usize, rho: f64, eps: &Rational) -> ricci_gap::Result<Vec<String>> {
    let g = generate(spec)?;
    let stats = GraphStats::compute(&g)?;
    let report = stats.report(delta, rho, eps, RhoConvention::Strict)?;
    let kappa_min = stats.curvatures.iter().map(|e| e.kappa.clone()).min().expect("edges exist");
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let within_bound = edges
        .par_iter()
        .map(|&(x, y)| {
            let plan = good_optimal_coupling(&g, x, y)?;
            Ok(plan.gamma_mass >= ratio(1, 2 * g.degree(x).min(g.degree(y)) as i64))
        })
        .collect::<ricci_gap::Result<Vec<bool>>>()?;
    let gamma_ok = within_bound.iter().all(|&b| b);
    Ok(vec![
        spec.name().to_string(),
        spec.params(),
        g.vertex_count().to_string(),
        g.edge_count().to_string(),
        rational(&kappa_min),
        rational(&negative_fraction_of(&stats.curvatures, eps)),
        stats.spectrum.lambda2().map_or(String::new(), |l| l.to_string()),
        report.expansion_clause.count.to_string(),
        if gamma_ok { "ok" } else { "violated" }.to_string(),
        rational(&verify_stationarity(&g)?),
        (stats.degree_log_sum / g.vertex_count() as f64).to_string(),
        report.fired().iter().map(|c| c.name()).collect::<Vec<_>>().join("+"),
        report.any_clause.to_string(),
    ])
}

fn report(args: ReportArgs, sinks: &Sinks, ctx: &mut RunContext) -> CliResult<()> {
    ctx.set_arithmetic(Arithmetic::Float);
    let specs = crate::source::read_specs(&args.specs, ctx)?;
    let eps = parse_rational(&args.eps, "--eps")?;
    let rows: Vec<Vec<String>> = specs
        .par_iter()
        .map(|s| report_row(s, args.delta, args.rho, &eps))
        .collect::<ricci_gap::Result<_>>()?;
    sinks.primary(&csv_text(&REPORT_HEADER, rows)?)
}
