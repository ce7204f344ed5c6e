//! Command implementations. Each runner validates its configuration (exit
//! code 2 on failure), drives the library (exit code 3 on estimator errors),
//! and renders a schema-versioned JSON record.

use crate::csv_io::{load_csv, write_dataset_csv};
use crate::graph::{build_graph, parse_groups, render_dot, DependenceGraph};
use crate::json::{to_json_string, SCHEMA_VERSION};
use crate::CliError;
use clap::Args;
use multidep::{
    bootstrap_variance, gen_model, mc_estimate, mfoci, normality_diagnostic, selection_study,
    t_bar_n_values, t_n, t_sigma_n, Dataset, EquicorrSpec, EstimatorChoice, Matrix, ModelId,
    PermSelector, RngConfig, SelectionConfig, TiePolicy,
};
use serde::Serialize;
use std::path::PathBuf;

/// What a command hands back to `main` for emission.
pub struct CommandResult {
    /// Content for stdout (empty when everything went to a file).
    pub stdout: String,
    /// Optional file payload.
    pub file: Option<(PathBuf, String)>,
}

impl CommandResult {
    fn stdout_or_file(content: String, output: Option<PathBuf>) -> CommandResult {
        match output {
            Some(path) => CommandResult {
                stdout: String::new(),
                file: Some((path, content)),
            },
            None => CommandResult {
                stdout: content,
                file: None,
            },
        }
    }
}

#[derive(Debug, Args, Clone)]
pub struct EstimatorFlags {
    /// Statistic: t | tbar-full | tbar-cyclic | tbar | tsigma | xi
    #[arg(long)]
    pub estimator: Option<String>,
    /// Permutation override for tbar: full | cyclic | "2,1;1,2" (1-based)
    #[arg(long)]
    pub perms: Option<String>,
    /// Rank-transform all conditioning columns before the neighbor search
    #[arg(long)]
    pub rank_predictors: bool,
    /// Tie policy: seeded-random | smallest-index
    #[arg(long, default_value = "seeded-random")]
    pub tie_policy: String,
    /// Master seed for every random stream
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl EstimatorFlags {
    fn tie_policy(&self) -> Result<TiePolicy, CliError> {
        self.tie_policy
            .parse()
            .map_err(|e: multidep::Error| CliError::config(e.to_string()))
    }

    fn rng(&self) -> RngConfig {
        RngConfig::new(self.seed)
    }
}

/// Parsed `--estimator`/`--perms` pair. `xi` stays separate because it is
/// only defined for a single response column.
enum ParsedEstimator {
    Xi,
    Choice(EstimatorChoice),
}

fn parse_perm_selector(spec: &str) -> Result<PermSelector, CliError> {
    match spec {
        "full" => Ok(PermSelector::Full),
        "cyclic" => Ok(PermSelector::Cyclic),
        list => {
            let perms: Vec<Vec<usize>> = list
                .split(';')
                .filter(|p| !p.trim().is_empty())
                .map(|perm| {
                    perm.split(',')
                        .map(|idx| {
                            let one_based: usize = idx.trim().parse().map_err(|_| {
                                CliError::config(format!("`{idx}` is not an index"))
                            })?;
                            if one_based == 0 {
                                return Err(CliError::config(
                                    "permutation indices are 1-based".to_string(),
                                ));
                            }
                            Ok(one_based - 1)
                        })
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            if perms.is_empty() {
                return Err(CliError::config("empty permutation list"));
            }
            Ok(PermSelector::Explicit(perms))
        }
    }
}

fn parse_estimator(flags: &EstimatorFlags, default: &str) -> Result<ParsedEstimator, CliError> {
    let raw = flags.estimator.as_deref().unwrap_or(default);
    let selector_override = flags.perms.as_deref().map(parse_perm_selector).transpose()?;
    let parsed = match raw {
        "t" => ParsedEstimator::Choice(EstimatorChoice::T),
        "tsigma" => ParsedEstimator::Choice(EstimatorChoice::TSigma),
        "xi" => ParsedEstimator::Xi,
        "tbar-full" => ParsedEstimator::Choice(EstimatorChoice::TBar(
            selector_override.clone().unwrap_or(PermSelector::Full),
        )),
        "tbar-cyclic" => ParsedEstimator::Choice(EstimatorChoice::TBar(
            selector_override.clone().unwrap_or(PermSelector::Cyclic),
        )),
        "tbar" => {
            let selector = selector_override.clone().ok_or_else(|| {
                CliError::config("--estimator tbar needs --perms (full, cyclic or a list)")
            })?;
            ParsedEstimator::Choice(EstimatorChoice::TBar(selector))
        }
        other => {
            return Err(CliError::config(format!(
                "unknown estimator `{other}` (expected t, tbar-full, tbar-cyclic, tbar, tsigma or xi)"
            )))
        }
    };
    if selector_override.is_some() && !raw.starts_with("tbar") {
        return Err(CliError::config(format!(
            "--perms only applies to the tbar estimators, not `{raw}`"
        )));
    }
    Ok(parsed)
}

fn comma_names(spec: &str) -> Vec<String> {
    spec.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

/// Splits a dataset into response and predictor blocks by name.
fn split_roles(
    dataset: &Dataset,
    response: &str,
    predictors: Option<&str>,
) -> Result<(Vec<String>, Vec<String>, Matrix, Matrix), CliError> {
    let response_names = comma_names(response);
    if response_names.is_empty() {
        return Err(CliError::config("--response names are empty"));
    }
    let predictor_names: Vec<String> = match predictors {
        Some(spec) => comma_names(spec),
        None => dataset
            .names()
            .iter()
            .filter(|n| !response_names.contains(n))
            .cloned()
            .collect(),
    };
    if predictor_names.is_empty() {
        return Err(CliError::config("no predictor columns left"));
    }
    for name in &response_names {
        if predictor_names.contains(name) {
            return Err(CliError::config(format!(
                "column `{name}` is both response and predictor"
            )));
        }
    }
    let responses = dataset
        .select(&response_names)
        .map_err(|e| CliError::config(e.to_string()))?;
    let predictor_block = dataset
        .select(&predictor_names)
        .map_err(|e| CliError::config(e.to_string()))?;
    Ok((response_names, predictor_names, responses, predictor_block))
}

// ---------------------------------------------------------------------------
// estimate

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// CSV file with a header row and numeric body
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated response column names, in order
    #[arg(long)]
    pub response: String,
    /// Comma-separated predictor column names (default: all other columns)
    #[arg(long)]
    pub predictors: Option<String>,
    #[command(flatten)]
    pub flags: EstimatorFlags,
    /// Write the JSON record here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct EstimateRecord {
    schema_version: u32,
    command: &'static str,
    estimator: String,
    tie_policy: String,
    rank_predictors: bool,
    seed: u64,
    n: usize,
    p: usize,
    q: usize,
    value: f64,
    lambda_terms: Vec<f64>,
    alpha_terms: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutation_values: Option<Vec<f64>>,
}

pub fn run_estimate(args: &EstimateArgs) -> Result<CommandResult, CliError> {
    let dataset = load_csv(&args.input)?;
    let (_, _, responses, predictors) =
        split_roles(&dataset, &args.response, args.predictors.as_deref())?;
    let policy = args.flags.tie_policy()?;
    let rng = args.flags.rng();
    let stream = rng.root();
    let parsed = parse_estimator(&args.flags, "t")?;
    let q = responses.d();

    let (label, value, lambda_terms, alpha_terms, permutation_values) = match parsed {
        ParsedEstimator::Xi => {
            if q != 1 {
                return Err(CliError::config(format!(
                    "--estimator xi needs exactly one response column, got {q}"
                )));
            }
            // t_n reduces to xi_n for a single response; going through it
            // keeps the two estimator flags bit-identical for q = 1
            let est = t_n(&responses, &predictors, policy, stream, args.flags.rank_predictors)
                .map_err(CliError::compute)?;
            ("xi".to_string(), est.value, est.lambda_terms, vec![], None)
        }
        ParsedEstimator::Choice(EstimatorChoice::T) => {
            let est = t_n(&responses, &predictors, policy, stream, args.flags.rank_predictors)
                .map_err(CliError::compute)?;
            (
                "t".to_string(),
                est.value,
                est.lambda_terms,
                est.alpha_terms,
                None,
            )
        }
        ParsedEstimator::Choice(EstimatorChoice::TSigma) => {
            let est = t_sigma_n(&responses, &predictors, policy, stream)
                .map_err(CliError::compute)?;
            ("tsigma".to_string(), est.value, est.xi_terms, vec![], None)
        }
        ParsedEstimator::Choice(choice @ EstimatorChoice::TBar(_)) => {
            let EstimatorChoice::TBar(selector) = &choice else {
                unreachable!()
            };
            let perms = multidep::PermutationSet::new(selector, q)
                .map_err(|e| CliError::config(e.to_string()))?;
            let values = t_bar_n_values(
                &responses,
                &predictors,
                &perms,
                policy,
                stream,
                args.flags.rank_predictors,
            )
            .map_err(CliError::compute)?;
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            (choice.label().to_string(), mean, vec![], vec![], Some(values))
        }
    };

    let record = EstimateRecord {
        schema_version: SCHEMA_VERSION,
        command: "estimate",
        estimator: label,
        tie_policy: policy.as_str().to_string(),
        rank_predictors: args.flags.rank_predictors,
        seed: args.flags.seed,
        n: responses.n(),
        p: predictors.d(),
        q,
        value,
        lambda_terms,
        alpha_terms,
        permutation_values,
    };
    let mut json = to_json_string(&record);
    json.push('\n');
    Ok(CommandResult::stdout_or_file(json, args.output.clone()))
}

// ---------------------------------------------------------------------------
// mfoci

#[derive(Debug, Args)]
pub struct MfociArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub response: String,
    #[arg(long)]
    pub predictors: Option<String>,
    /// Cap on the number of selected predictors
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[command(flatten)]
    pub flags: EstimatorFlags,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct TraceStepRecord {
    position: usize,
    /// 1-based predictor column index.
    index: usize,
    variable: String,
    value: f64,
}

#[derive(Serialize)]
struct MfociRecord {
    schema_version: u32,
    command: &'static str,
    estimator: String,
    tie_policy: String,
    rank_predictors: bool,
    seed: u64,
    n: usize,
    p: usize,
    q: usize,
    steps: Vec<TraceStepRecord>,
    terminal_state: String,
    selected: Vec<String>,
    selected_indices: Vec<usize>,
}

pub fn run_mfoci(args: &MfociArgs) -> Result<CommandResult, CliError> {
    let dataset = load_csv(&args.input)?;
    let (_, predictor_names, responses, predictors) =
        split_roles(&dataset, &args.response, args.predictors.as_deref())?;
    let policy = args.flags.tie_policy()?;
    let q = responses.d();
    let default_label = EstimatorChoice::default_for(q).label().to_string();
    let estimator = match parse_estimator(&args.flags, &default_label)? {
        ParsedEstimator::Xi => {
            return Err(CliError::config(
                "selection uses t or tbar, not xi".to_string(),
            ))
        }
        ParsedEstimator::Choice(choice) => choice,
    };
    let cfg = SelectionConfig {
        estimator: estimator.clone(),
        tie_policy: policy,
        rng: args.flags.rng(),
        rank_predictors: args.flags.rank_predictors,
        max_steps: args.max_steps,
    };
    let trace = match mfoci(&responses, &predictors, &cfg) {
        Ok(trace) => trace,
        Err(e @ multidep::Error::Config(_)) => return Err(CliError::config(e.to_string())),
        Err(e) => return Err(CliError::compute(e)),
    };
    trace
        .validate(predictors.d())
        .map_err(CliError::compute)?;

    let steps: Vec<TraceStepRecord> = trace
        .steps
        .iter()
        .enumerate()
        .map(|(k, step)| TraceStepRecord {
            position: k + 1,
            index: step.index + 1,
            variable: predictor_names[step.index].clone(),
            value: step.value,
        })
        .collect();
    let record = MfociRecord {
        schema_version: SCHEMA_VERSION,
        command: "mfoci",
        estimator: estimator.label().to_string(),
        tie_policy: policy.as_str().to_string(),
        rank_predictors: args.flags.rank_predictors,
        seed: args.flags.seed,
        n: responses.n(),
        p: predictors.d(),
        q,
        steps,
        terminal_state: trace.terminal.as_str().to_string(),
        selected: trace
            .selected()
            .iter()
            .map(|&j| predictor_names[j].clone())
            .collect(),
        selected_indices: trace.selected().iter().map(|&j| j + 1).collect(),
    };
    let mut json = to_json_string(&record);
    json.push('\n');
    Ok(CommandResult::stdout_or_file(json, args.output.clone()))
}

// ---------------------------------------------------------------------------
// simulate

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Model id: LM1..LM5, GAM1..GAM3, NLM1, NLM2, FOURCUBE or GAUSS
    #[arg(long)]
    pub model: String,
    /// Equicorrelated GAUSS parameters
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long = "rhoX")]
    pub rho_x: Option<f64>,
    #[arg(long = "rhoY")]
    pub rho_y: Option<f64>,
    #[arg(long = "rhoXY")]
    pub rho_xy: Option<f64>,
    /// Observations per dataset
    #[arg(long)]
    pub n: usize,
    /// Replications (default: 1 for data, 100 for summary/selection)
    #[arg(long)]
    pub reps: Option<usize>,
    /// data: CSV dataset(s) | summary: estimator distribution | selection: selection rates
    #[arg(long, default_value = "summary")]
    pub emit: String,
    #[command(flatten)]
    pub flags: EstimatorFlags,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct QuantileRecord {
    level: u8,
    value: f64,
}

#[derive(Serialize)]
struct SummaryRecord {
    schema_version: u32,
    command: &'static str,
    emit: &'static str,
    model: String,
    estimator: String,
    tie_policy: String,
    rank_predictors: bool,
    seed: u64,
    n: usize,
    reps: usize,
    mean: f64,
    sd: f64,
    quantiles: Vec<QuantileRecord>,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct KPropRecord {
    k: usize,
    proportion: f64,
}

#[derive(Serialize)]
struct SelectionStudyRecord {
    schema_version: u32,
    command: &'static str,
    emit: &'static str,
    model: String,
    estimator: String,
    tie_policy: String,
    rank_predictors: bool,
    seed: u64,
    n: usize,
    reps: usize,
    prop_superset: f64,
    prop_exact: f64,
    prop_prefix_exact: f64,
    avg_selected: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    prop_k_correct: Option<Vec<KPropRecord>>,
}

fn resolve_model(args: &SimulateArgs) -> Result<ModelId, CliError> {
    if args.model.eq_ignore_ascii_case("gauss") {
        let (Some(p), Some(q), Some(rho_x), Some(rho_y), Some(rho_xy)) =
            (args.p, args.q, args.rho_x, args.rho_y, args.rho_xy)
        else {
            return Err(CliError::config(
                "GAUSS needs --p, --q, --rhoX, --rhoY and --rhoXY",
            ));
        };
        let spec = EquicorrSpec::new(p, q, rho_x, rho_y, rho_xy)
            .map_err(|e| CliError::config(e.to_string()))?;
        let gaussian = spec
            .to_gaussian()
            .map_err(|e| CliError::config(e.to_string()))?;
        Ok(ModelId::Gauss(gaussian))
    } else {
        ModelId::parse(&args.model).map_err(|e| CliError::config(e.to_string()))
    }
}

pub fn run_simulate(args: &SimulateArgs) -> Result<CommandResult, CliError> {
    let model = resolve_model(args)?;
    let policy = args.flags.tie_policy()?;
    let rng = args.flags.rng();
    match args.emit.as_str() {
        "data" => {
            let reps = args.reps.unwrap_or(1);
            if reps != 1 && args.output.is_none() {
                return Err(CliError::config(
                    "--emit data with --reps > 1 needs --output for the file series",
                ));
            }
            if reps == 1 {
                let data = gen_model(&model, args.n, rng.root()).map_err(CliError::compute)?;
                let mut buf = Vec::new();
                write_dataset_csv(&data.dataset, &mut buf)
                    .map_err(|e| CliError::compute_msg(e.to_string()))?;
                let csv = String::from_utf8(buf).expect("CSV is UTF-8");
                Ok(CommandResult::stdout_or_file(csv, args.output.clone()))
            } else {
                let base = args.output.clone().expect("checked above");
                let stem = base
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("dataset")
                    .to_string();
                let dir = base.parent().map(PathBuf::from).unwrap_or_default();
                for rep in 0..reps {
                    let stream = rng.root().fork(rep as u64);
                    let data = gen_model(&model, args.n, stream).map_err(CliError::compute)?;
                    let mut buf = Vec::new();
                    write_dataset_csv(&data.dataset, &mut buf)
                        .map_err(|e| CliError::compute_msg(e.to_string()))?;
                    let path = dir.join(format!("{stem}-r{rep}.csv"));
                    std::fs::write(&path, buf)
                        .map_err(|e| CliError::compute_msg(e.to_string()))?;
                }
                Ok(CommandResult {
                    stdout: String::new(),
                    file: None,
                })
            }
        }
        "summary" => {
            let reps = args.reps.unwrap_or(100);
            let estimator = match parse_estimator(&args.flags, "t")? {
                ParsedEstimator::Xi => {
                    return Err(CliError::config("summary studies use t, tbar or tsigma"))
                }
                ParsedEstimator::Choice(choice) => choice,
            };
            let summary = mc_estimate(
                &model,
                args.n,
                reps,
                &estimator,
                policy,
                rng,
                args.flags.rank_predictors,
            )
            .map_err(CliError::compute)?;
            let record = SummaryRecord {
                schema_version: SCHEMA_VERSION,
                command: "simulate",
                emit: "summary",
                model: model.label(),
                estimator: estimator.label().to_string(),
                tie_policy: policy.as_str().to_string(),
                rank_predictors: args.flags.rank_predictors,
                seed: args.flags.seed,
                n: args.n,
                reps,
                mean: summary.mean,
                sd: summary.sd,
                quantiles: summary
                    .quantiles
                    .iter()
                    .map(|&(level, value)| QuantileRecord { level, value })
                    .collect(),
                values: summary.values,
            };
            let mut json = to_json_string(&record);
            json.push('\n');
            Ok(CommandResult::stdout_or_file(json, args.output.clone()))
        }
        "selection" => {
            let reps = args.reps.unwrap_or(100);
            let (_, q) = model.dims();
            let default_label = EstimatorChoice::default_for(q).label().to_string();
            let estimator = match parse_estimator(&args.flags, &default_label)? {
                ParsedEstimator::Xi => {
                    return Err(CliError::config("selection uses t or tbar, not xi"))
                }
                ParsedEstimator::Choice(choice) => choice,
            };
            let cfg = SelectionConfig {
                estimator: estimator.clone(),
                tie_policy: policy,
                rng,
                rank_predictors: args.flags.rank_predictors,
                max_steps: None,
            };
            let report =
                selection_study(&model, args.n, reps, &cfg).map_err(CliError::compute)?;
            let record = SelectionStudyRecord {
                schema_version: SCHEMA_VERSION,
                command: "simulate",
                emit: "selection",
                model: model.label(),
                estimator: estimator.label().to_string(),
                tie_policy: policy.as_str().to_string(),
                rank_predictors: args.flags.rank_predictors,
                seed: args.flags.seed,
                n: args.n,
                reps,
                prop_superset: report.prop_superset,
                prop_exact: report.prop_exact,
                prop_prefix_exact: report.prop_prefix_exact,
                avg_selected: report.avg_selected,
                prop_k_correct: report.prop_k_correct.map(|props| {
                    props
                        .into_iter()
                        .map(|(k, proportion)| KPropRecord { k, proportion })
                        .collect()
                }),
            };
            let mut json = to_json_string(&record);
            json.push('\n');
            Ok(CommandResult::stdout_or_file(json, args.output.clone()))
        }
        other => Err(CliError::config(format!(
            "unknown --emit `{other}` (expected data, summary or selection)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// graph

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Column groups: "US=JPM,BAC;EU=HSBC,BNP"
    #[arg(long)]
    pub groups: String,
    /// Omit edges with weight below this
    #[arg(long, default_value_t = 0.0)]
    pub min_weight: f64,
    #[command(flatten)]
    pub flags: EstimatorFlags,
    /// Write the DOT text here (the JSON record always goes to stdout)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct GraphRecord {
    schema_version: u32,
    command: &'static str,
    estimator: &'static str,
    tie_policy: String,
    rank_predictors: bool,
    seed: u64,
    n: usize,
    min_weight: f64,
    graph: DependenceGraph,
    dot: String,
}

pub fn run_graph(args: &GraphArgs) -> Result<CommandResult, CliError> {
    if args.flags.estimator.is_some() || args.flags.perms.is_some() {
        return Err(CliError::config(
            "graph edges are always t_n(target | source); --estimator/--perms do not apply",
        ));
    }
    let dataset = load_csv(&args.input)?;
    let groups = parse_groups(&args.groups)?;
    let policy = args.flags.tie_policy()?;
    let graph = build_graph(
        &dataset,
        &groups,
        policy,
        args.flags.rng(),
        args.flags.rank_predictors,
    )?;
    let dot = render_dot(&graph, args.min_weight);
    let record = GraphRecord {
        schema_version: SCHEMA_VERSION,
        command: "graph",
        estimator: "t",
        tie_policy: policy.as_str().to_string(),
        rank_predictors: args.flags.rank_predictors,
        seed: args.flags.seed,
        n: dataset.n(),
        min_weight: args.min_weight,
        graph,
        dot: dot.clone(),
    };
    let mut json = to_json_string(&record);
    json.push('\n');
    Ok(CommandResult {
        stdout: json,
        file: args.output.clone().map(|path| (path, dot)),
    })
}

// ---------------------------------------------------------------------------
// diag

#[derive(Debug, Args)]
pub struct DiagArgs {
    /// bootstrap | normality
    #[arg(long)]
    pub diag: String,
    /// CSV input (bootstrap)
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub response: Option<String>,
    #[arg(long)]
    pub predictors: Option<String>,
    /// Subsample size (bootstrap)
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of subsamples (bootstrap)
    #[arg(long = "B")]
    pub b: Option<usize>,
    /// Model for the normality diagnostic
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long = "rhoX")]
    pub rho_x: Option<f64>,
    #[arg(long = "rhoY")]
    pub rho_y: Option<f64>,
    #[arg(long = "rhoXY")]
    pub rho_xy: Option<f64>,
    /// Observations per replication (normality)
    #[arg(long)]
    pub n: Option<usize>,
    /// Replications (normality)
    #[arg(long)]
    pub reps: Option<usize>,
    #[command(flatten)]
    pub flags: EstimatorFlags,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct BootstrapRecord {
    schema_version: u32,
    command: &'static str,
    diag: &'static str,
    estimator: String,
    tie_policy: String,
    rank_predictors: bool,
    seed: u64,
    n: usize,
    m: usize,
    #[serde(rename = "B")]
    b: usize,
    variance: f64,
    draws: Vec<f64>,
}

#[derive(Serialize)]
struct NormalityRecord {
    schema_version: u32,
    command: &'static str,
    diag: &'static str,
    model: String,
    estimator: String,
    tie_policy: String,
    rank_predictors: bool,
    seed: u64,
    n: usize,
    reps: usize,
    ks_distance: f64,
    mean: f64,
    sd: f64,
    perfect_dependence_warning: bool,
    draws: Vec<f64>,
}

pub fn run_diag(args: &DiagArgs) -> Result<CommandResult, CliError> {
    let policy = args.flags.tie_policy()?;
    let rng = args.flags.rng();
    let estimator = match parse_estimator(&args.flags, "t")? {
        ParsedEstimator::Xi => return Err(CliError::config("diagnostics use t, tbar or tsigma")),
        ParsedEstimator::Choice(choice) => choice,
    };
    match args.diag.as_str() {
        "bootstrap" => {
            let input = args
                .input
                .as_ref()
                .ok_or_else(|| CliError::config("--diag bootstrap needs --input"))?;
            let response = args
                .response
                .as_deref()
                .ok_or_else(|| CliError::config("--diag bootstrap needs --response"))?;
            let m = args
                .m
                .ok_or_else(|| CliError::config("--diag bootstrap needs --m"))?;
            let b = args
                .b
                .ok_or_else(|| CliError::config("--diag bootstrap needs --B"))?;
            let dataset = load_csv(input)?;
            let (_, _, responses, predictors) =
                split_roles(&dataset, response, args.predictors.as_deref())?;
            let out = bootstrap_variance(
                &responses,
                &predictors,
                m,
                b,
                &estimator,
                policy,
                rng,
                args.flags.rank_predictors,
            )
            .map_err(|e| match e {
                e @ multidep::Error::Config(_) => CliError::config(e.to_string()),
                e => CliError::compute(e),
            })?;
            let record = BootstrapRecord {
                schema_version: SCHEMA_VERSION,
                command: "diag",
                diag: "bootstrap",
                estimator: estimator.label().to_string(),
                tie_policy: policy.as_str().to_string(),
                rank_predictors: args.flags.rank_predictors,
                seed: args.flags.seed,
                n: responses.n(),
                m: out.m,
                b: out.b,
                variance: out.variance,
                draws: out.draws,
            };
            let mut json = to_json_string(&record);
            json.push('\n');
            Ok(CommandResult::stdout_or_file(json, args.output.clone()))
        }
        "normality" => {
            let model_name = args
                .model
                .as_deref()
                .ok_or_else(|| CliError::config("--diag normality needs --model"))?;
            let n = args
                .n
                .ok_or_else(|| CliError::config("--diag normality needs --n"))?;
            let reps = args
                .reps
                .ok_or_else(|| CliError::config("--diag normality needs --reps"))?;
            let model = resolve_model(&SimulateArgs {
                model: model_name.to_string(),
                p: args.p,
                q: args.q,
                rho_x: args.rho_x,
                rho_y: args.rho_y,
                rho_xy: args.rho_xy,
                n,
                reps: Some(reps),
                emit: "summary".into(),
                flags: args.flags.clone(),
                output: None,
            })?;
            let diag = normality_diagnostic(
                &model,
                n,
                reps,
                &estimator,
                policy,
                rng,
                args.flags.rank_predictors,
            )
            .map_err(|e| match e {
                e @ multidep::Error::Config(_) => CliError::config(e.to_string()),
                e => CliError::compute(e),
            })?;
            let record = NormalityRecord {
                schema_version: SCHEMA_VERSION,
                command: "diag",
                diag: "normality",
                model: model.label(),
                estimator: estimator.label().to_string(),
                tie_policy: policy.as_str().to_string(),
                rank_predictors: args.flags.rank_predictors,
                seed: args.flags.seed,
                n,
                reps,
                ks_distance: diag.ks_distance,
                mean: diag.mean,
                sd: diag.sd,
                perfect_dependence_warning: diag.perfect_dependence_warning,
                draws: diag.standardized,
            };
            let mut json = to_json_string(&record);
            json.push('\n');
            Ok(CommandResult::stdout_or_file(json, args.output.clone()))
        }
        other => Err(CliError::config(format!(
            "unknown --diag `{other}` (expected bootstrap or normality)"
        ))),
    }
}
