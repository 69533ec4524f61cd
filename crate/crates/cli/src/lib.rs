//! Command-line front end for `tbcode`.
//!
//! Exit codes: 0 on success or acceptance, 1 when a code or an assertion
//! fails, 2 on malformed input or an exceeded cap.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tbcode::code::{
    build_index_code, verify_embedded_code, verify_index_code, verify_task_based_code, IndexCode,
    Verdict,
};
use tbcode::graph::{greedy_dominating_set_from, Graph, VertexSet};
use tbcode::io::{self, CodeFile, CodeModel, LabelsFile};
use tbcode::minrank::{
    min_linear_code_length, minrank_exact_with, minrank_via_homomorphism, MinrankCertificateRecord,
    RepresentingMatrix, MAX_ENCODER_SEARCH_VERTICES, MAX_HOMOMORPHISM_VERTICES,
};
use tbcode::taskbased::{self, DominatingConstruction, Limits, TbCertificateRecord};
use tbcode::{peeters, spectral, Error};

#[derive(Parser, Debug)]
#[command(
    name = "tbcode",
    version,
    about = "Index codes, minrank and task-based embedded codes over GF(2)"
)]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TBCODE_THREADS")]
    pub threads: Option<usize>,

    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    /// Cap on free entries in the minrank pattern search.
    #[arg(long, global = true, default_value_t = tbcode::minrank::MAX_FREE_ENTRIES)]
    pub max_free_entries: usize,

    /// Cap on neighbourhood partitions enumerated by exact searches.
    #[arg(long, global = true, default_value_t = taskbased::MAX_PARTITIONS)]
    pub max_partitions: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the Peeters graph G_k (or its complement) and a labels sidecar.
    Gen {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        complement: bool,
        /// Graph file; the labels go to `<out>.labels.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact minrank over GF(2).
    Minrank {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = MinrankMethod::Pattern)]
        method: MinrankMethod,
    },
    /// Exact tb(G), or a verified code from the dominating-set construction.
    Tb {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = TbMode::Exact)]
        mode: TbMode,
        /// Labels sidecar; its inner-product matrix becomes the witness.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Comma-separated dominating set (default: greedy).
        #[arg(long, value_delimiter = ',')]
        dominating: Option<Vec<usize>>,
        /// Where to write the constructed code.
        #[arg(long)]
        code_out: Option<PathBuf>,
    },
    /// Check a code file against a graph.
    Verify {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
    },
    /// Centralized versus task-based code lengths on complements of G_k.
    ExperimentGap {
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 5)]
        k_max: usize,
    },
    /// (n, d, λ) of a regular connected graph.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        /// Fail unless λ matches the Peeters value for this k.
        #[arg(long)]
        expect_peeters: Option<usize>,
        #[arg(long, default_value_t = spectral::DEFAULT_TOLERANCE)]
        tol: f64,
    },
    /// Random subsets of G_k searched for K_r, against the spectral threshold.
    ExperimentKr {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinrankMethod {
    Pattern,
    Encoder,
    Hom,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TbMode {
    Exact,
    Upper,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelArg {
    Index,
    Embedded,
    Taskbased,
}

impl From<ModelArg> for CodeModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Index => CodeModel::Index,
            ModelArg::Embedded => CodeModel::Embedded,
            ModelArg::Taskbased => CodeModel::TaskBased,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub witnesses: Value,
    pub seed: u64,
    pub runtime_ms: u128,
}

/// A finished command: its report and exit status.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: u8,
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub exit_code: u8,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError {
            exit_code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit_code = match e {
            Error::Structural(_) | Error::NoConvergence(_) => 1,
            _ => 2,
        };
        CliError {
            exit_code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    Ok(io::read_graph(&read_text(path)?)?)
}

/// Sidecar path for a graph file.
pub fn labels_path(graph: &Path) -> PathBuf {
    let mut s = graph.as_os_str().to_owned();
    s.push(".labels.json");
    PathBuf::from(s)
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "accepted": v.accepted(),
        "failures": v.failures.iter().map(|(i, f)| json!({"receiver": i, "failure": f})).collect::<Vec<_>>(),
    })
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let start = Instant::now();
    let limits = Limits {
        max_partitions: cli.max_partitions,
        max_free_entries: cli.max_free_entries,
    };
    let (command, inputs, results, witnesses, exit_code) = match &cli.command {
        Command::Gen { k, complement, out } => {
            let (results, witnesses) = cmd_gen(*k, *complement, out)?;
            (
                "gen",
                json!({"k": k, "complement": complement, "out": out}),
                results,
                witnesses,
                0,
            )
        }
        Command::Minrank { graph, method } => {
            let g = load_graph(graph)?;
            let (results, witnesses, ok) = cmd_minrank(&g, *method, &limits)?;
            let inputs = json!({"graph": graph, "method": format!("{method:?}").to_lowercase()});
            (
                "minrank",
                inputs,
                results,
                witnesses,
                if ok { 0 } else { 1 },
            )
        }
        Command::Tb {
            graph,
            mode,
            labels,
            dominating,
            code_out,
        } => {
            let g = load_graph(graph)?;
            let (results, witnesses) = match mode {
                TbMode::Exact => cmd_tb_exact(&g, &limits)?,
                TbMode::Upper => cmd_tb_upper(
                    &g,
                    labels.as_deref(),
                    dominating.as_deref(),
                    code_out.as_deref(),
                )?,
            };
            let inputs = json!({"graph": graph, "mode": format!("{mode:?}").to_lowercase(), "labels": labels});
            ("tb", inputs, results, witnesses, 0)
        }
        Command::Verify { code, graph, model } => {
            let g = load_graph(graph)?;
            // Anything wrong inside the file itself is malformed input.
            let file =
                io::read_code(&read_text(code)?).map_err(|e| CliError::input(e.to_string()))?;
            let (results, ok) = cmd_verify(&file, &g, (*model).into())?;
            let inputs = json!({"code": code, "graph": graph, "model": CodeModel::from(*model)});
            (
                "verify",
                inputs,
                results,
                Value::Null,
                if ok { 0 } else { 1 },
            )
        }
        Command::ExperimentGap { k_min, k_max } => {
            let rows = experiment_gap(*k_min, *k_max)?;
            let ok = rows.iter().all(GapRow::holds);
            let results = json!({"rows": rows});
            (
                "experiment-gap",
                json!({"k_min": k_min, "k_max": k_max}),
                results,
                Value::Null,
                if ok { 0 } else { 1 },
            )
        }
        Command::Spectrum {
            graph,
            expect_peeters,
            tol,
        } => {
            let g = load_graph(graph)?;
            let (results, ok) = cmd_spectrum(&g, *expect_peeters, *tol)?;
            let inputs = json!({"graph": graph, "expect_peeters": expect_peeters, "tol": tol});
            (
                "spectrum",
                inputs,
                results,
                Value::Null,
                if ok { 0 } else { 1 },
            )
        }
        Command::ExperimentKr {
            k,
            r,
            sizes,
            trials,
        } => {
            let results = cmd_experiment_kr(*k, *r, sizes, *trials, cli.seed)?;
            let inputs = json!({"k": k, "r": r, "sizes": sizes, "trials": trials});
            ("experiment-kr", inputs, results, Value::Null, 0)
        }
    };
    let report = Report {
        command: command.to_string(),
        inputs,
        results,
        witnesses,
        seed: cli.seed,
        runtime_ms: start.elapsed().as_millis(),
    };
    if let Some(path) = &cli.report {
        write_text(
            path,
            &(serde_json::to_string_pretty(&report).expect("reports serialize") + "\n"),
        )?;
    }
    Ok(Outcome { report, exit_code })
}

fn cmd_gen(k: usize, complement: bool, out: &Path) -> CliResult<(Value, Value)> {
    let pg = peeters::generate(k)?;
    let g = if complement {
        pg.graph().complement()
    } else {
        pg.graph().clone()
    };
    write_text(out, &io::write_graph(&g))?;
    let labels = labels_path(out);
    let sidecar =
        serde_json::to_string_pretty(&LabelsFile::new(&pg, complement)).expect("labels serialize");
    write_text(&labels, &(sidecar + "\n"))?;
    Ok((
        json!({"n": g.n(), "m": g.edge_count(), "graph_file": out, "labels_file": labels}),
        Value::Null,
    ))
}

fn cmd_minrank(
    g: &Graph,
    method: MinrankMethod,
    limits: &Limits,
) -> CliResult<(Value, Value, bool)> {
    let mut results = serde_json::Map::new();
    let mut witnesses = serde_json::Map::new();
    let mut values = Vec::new();
    if matches!(method, MinrankMethod::Pattern | MinrankMethod::All) {
        let cert = minrank_exact_with(g, limits.max_free_entries)?;
        values.push(cert.value);
        results.insert("pattern".into(), json!(cert.value));
        witnesses.insert(
            "pattern".into(),
            json!(MinrankCertificateRecord::from(&cert)),
        );
    }
    // Under `all`, oracles whose cap the graph exceeds are skipped, not fatal.
    let all = method == MinrankMethod::All;
    let mut skipped = Vec::new();
    if all && g.n() > MAX_ENCODER_SEARCH_VERTICES {
        skipped.push("encoder");
    } else if matches!(method, MinrankMethod::Encoder | MinrankMethod::All) {
        let search = min_linear_code_length(g)?;
        values.push(search.length);
        results.insert("encoder".into(), json!(search.length));
        witnesses.insert("encoder".into(), json!(search.encoder.to_row_strings()));
    }
    if all && g.n() > MAX_HOMOMORPHISM_VERTICES {
        skipped.push("hom");
    } else if matches!(method, MinrankMethod::Hom | MinrankMethod::All) {
        let k = minrank_via_homomorphism(g)?;
        values.push(k);
        results.insert("hom".into(), json!(k));
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    results.insert("value".into(), json!(values[0]));
    results.insert("agree".into(), json!(agree));
    if all {
        results.insert("skipped".into(), json!(skipped));
    }
    Ok((Value::Object(results), Value::Object(witnesses), agree))
}

fn cmd_tb_exact(g: &Graph, limits: &Limits) -> CliResult<(Value, Value)> {
    let cert = taskbased::tb_exact_with(g, limits)?;
    Ok((
        json!({"value": cert.value}),
        json!(TbCertificateRecord::from(&cert)),
    ))
}

fn load_witness(g: &Graph, labels: Option<&Path>) -> CliResult<Option<RepresentingMatrix>> {
    let Some(path) = labels else { return Ok(None) };
    let file: LabelsFile = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(Some(peeters::witness_from_labels(&file.parsed()?, g)?))
}

fn cmd_tb_upper(
    g: &Graph,
    labels: Option<&Path>,
    dominating: Option<&[usize]>,
    code_out: Option<&Path>,
) -> CliResult<(Value, Value)> {
    let witness = load_witness(g, labels)?;
    let d = dominating.map(|d| VertexSet::new(d.iter().copied()));
    let out = taskbased::tb_upper_dominating(g, d.as_ref(), witness.as_ref())?;
    let verdict = verify_task_based_code(&out.code, g)?;
    if !verdict.accepted() {
        return Err(CliError {
            exit_code: 1,
            message: format!(
                "constructed code failed verification: {:?}",
                verdict.failures
            ),
        });
    }
    let mut results = json!({
        "length": out.code.length(),
        "bound": out.bound,
        "rank_bound": out.rank_bound,
        "dominating_set": out.dominating_set.as_slice(),
        "verified": true,
    });
    if let Some(w) = &witness {
        let central = build_index_code(w, g)?;
        results["centralized_length"] = json!(central.length());
        results["centralized_verified"] = json!(verify_index_code(&central, g)?.accepted());
    }
    if let Some(path) = code_out {
        write_text(
            path,
            &io::write_code(&CodeFile::TaskBased(out.code.clone())),
        )?;
        results["code_file"] = json!(path);
    }
    Ok((results, json!({"assignment": out.partition.assignment()})))
}

fn cmd_verify(file: &CodeFile, g: &Graph, model: CodeModel) -> CliResult<(Value, bool)> {
    if file.model() != model {
        return Err(CliError::input(format!(
            "code file holds a {} code but --model {model} was given",
            file.model()
        )));
    }
    let verdict = match file {
        CodeFile::Index(c) => verify_index_code(c, g),
        CodeFile::Embedded(c) => verify_embedded_code(c, g),
        CodeFile::TaskBased(c) => verify_task_based_code(c, g),
    };
    match verdict {
        Ok(v) => Ok((verdict_json(&v), v.accepted())),
        Err(Error::Structural(msg)) => Ok((json!({"accepted": false, "structural": msg}), false)),
        Err(e) => Err(e.into()),
    }
}

/// One row of the gap experiment.
#[derive(Clone, Debug, Serialize)]
pub struct GapRow {
    pub k: usize,
    pub n: usize,
    pub centralized_length: usize,
    pub centralized_verified: bool,
    pub dominating_set_size: usize,
    pub task_based_length: usize,
    pub task_based_verified: bool,
    /// `|D|·(k + 1)`.
    pub bound: usize,
    pub ratio: f64,
}

impl GapRow {
    pub fn holds(&self) -> bool {
        self.centralized_verified
            && self.task_based_verified
            && self.centralized_length == self.k
            && self.task_based_length <= self.bound
            && self.task_based_length <= self.k * (self.k + 1)
    }
}

/// The complement of `G_k` with its two verified-by-construction codes: the
/// length-`k` index code from the inner-product matrix and the task-based code
/// built around the maximal independent set containing the `(e_i, e_i)`.
pub struct GapInstance {
    pub k: usize,
    pub graph: Graph,
    pub centralized: IndexCode,
    pub task_based: DominatingConstruction,
}

pub fn gap_instance(k: usize) -> CliResult<GapInstance> {
    if k < 2 {
        return Err(CliError::input(
            "k = 1 gives a single isolated vertex, which has no embedded code",
        ));
    }
    if k > peeters::MAX_EXPERIMENT_K {
        return Err(Error::cap(
            "gap experiment k",
            peeters::MAX_EXPERIMENT_K as u64,
            k as u64,
        )
        .into());
    }
    let pg = peeters::generate(k)?;
    let graph = pg.graph().complement();
    let m = pg.representing_matrix();
    let centralized = build_index_code(&m, &graph)?;
    let d = greedy_dominating_set_from(&graph, &pg.canonical_independent_set())?;
    let task_based = taskbased::tb_upper_dominating(&graph, Some(&d), Some(&m))?;
    Ok(GapInstance {
        k,
        graph,
        centralized,
        task_based,
    })
}

/// Verifies both codes of [`gap_instance`] for each `k` in the range.
pub fn experiment_gap(k_min: usize, k_max: usize) -> CliResult<Vec<GapRow>> {
    if k_min > k_max {
        return Err(CliError::input(format!(
            "empty range: k_min {k_min} > k_max {k_max}"
        )));
    }
    (k_min..=k_max)
        .map(|k| {
            let inst = gap_instance(k)?;
            let g = &inst.graph;
            let central_len = inst.centralized.length();
            let tb_len = inst.task_based.code.length();
            Ok(GapRow {
                k,
                n: g.n(),
                centralized_length: central_len,
                centralized_verified: verify_index_code(&inst.centralized, g)?.accepted(),
                dominating_set_size: inst.task_based.dominating_set.len(),
                task_based_length: tb_len,
                task_based_verified: verify_task_based_code(&inst.task_based.code, g)?.accepted(),
                bound: inst.task_based.bound,
                ratio: tb_len as f64 / central_len as f64,
            })
        })
        .collect()
}

fn cmd_spectrum(g: &Graph, expect_peeters: Option<usize>, tol: f64) -> CliResult<(Value, bool)> {
    let report = spectral::ndl_certify(g, tol)?;
    let mut results = json!(report);
    let mut ok = true;
    if let Some(k) = expect_peeters {
        let expected = peeters::second_eigenvalue(k);
        // The eigensolver's own tolerance is absolute; allow for scale.
        let slack = tol.max(1e-6 * expected);
        ok = (report.lambda_second_abs - expected).abs() <= slack;
        results["expected_lambda"] = json!(expected);
        results["matches"] = json!(ok);
    }
    Ok((results, ok))
}

fn cmd_experiment_kr(
    k: usize,
    r: usize,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> CliResult<Value> {
    if k > peeters::MAX_EXPERIMENT_K {
        return Err(Error::cap(
            "K_r experiment k",
            peeters::MAX_EXPERIMENT_K as u64,
            k as u64,
        )
        .into());
    }
    let pg = peeters::generate(k)?;
    let threshold = peeters::kr_threshold(
        peeters::vertex_count(k),
        peeters::degree(k),
        peeters::second_eigenvalue(k),
        r,
    );
    let (reports, smallest) = peeters::threshold_scan(&pg, r, sizes, trials, seed)?;
    let guaranteed_ok = reports
        .iter()
        .filter(|t| t.subset_size as f64 > threshold)
        .all(|t| t.all_succeeded());
    Ok(json!({
        "threshold": threshold,
        "scan": reports,
        "smallest_full_success_size": smallest,
        "above_threshold_all_succeeded": guaranteed_ok,
    }))
}
