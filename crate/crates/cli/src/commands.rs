use std::path::{Path, PathBuf};

use serde::Serialize;

use egvqc::encoder::{required_qubits, EncodingConfig};
use egvqc::experiment::{
    self, bench_scaling, load_dataset, prepare_dataset, run_seeds, GraphInspection,
    PreparedDataset, RunSummary,
};
use egvqc::seed::head_seed;
use egvqc::sim::{init_plus_state, AnsatzParams, Entangler};
use egvqc::vqc::{TrainConfig, TrainReport};
use egvqc::Error;

use crate::config::{EntanglerArg, RunArgs, RunConfig};
use crate::output::Outputs;
use crate::CliError;

fn runtime(e: Error) -> CliError {
    CliError::runtime(e.to_string())
}

fn input(e: Error) -> CliError {
    CliError::usage(e.to_string())
}

/// Loading, subsetting and filtering failures are input errors (exit 2).
fn prepare(cfg: &RunConfig) -> Result<PreparedDataset, CliError> {
    prepare_dataset(&cfg.dataset, &cfg.train).map_err(input)
}

fn stem(report: &TrainReport) -> String {
    format!(
        "{}_{}",
        report.dataset.name,
        report.config.pipeline.as_str()
    )
}

fn add_reports(out: &mut Outputs, dir: &Path, reports: &[TrainReport]) {
    for r in reports {
        let base = format!("{}_seed{}", stem(r), r.seed);
        out.add(dir.join(format!("{base}.json")), r.to_json_pretty() + "\n");
        out.add(dir.join(format!("{base}_loss.csv")), r.loss_csv());
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn describe(data: &PreparedDataset) {
    let set = &data.set;
    println!(
        "{}: {} graphs, {} classes, {} qubits (excluded: {} oversize, {} edgeless)",
        set.name,
        set.len(),
        set.class_count,
        data.n_qubits,
        data.excluded_oversize,
        data.excluded_degenerate
    );
}

pub fn train(cfg: &RunConfig) -> Result<(), CliError> {
    let data = prepare(cfg)?;
    describe(&data);
    let reports = run_seeds(&data, &cfg.train, &cfg.seeds, cfg.jobs).map_err(runtime)?;
    let summary = RunSummary::from_reports(&reports).map_err(runtime)?;

    let mut out = Outputs::default();
    add_reports(&mut out, &cfg.out, &reports);
    out.add(
        cfg.out.join(format!("{}_summary.json", stem(&reports[0]))),
        pretty(&summary),
    );
    let written = out.commit()?;

    for r in &reports {
        println!(
            "seed {:>4}: test accuracy {:.4}, final train loss {:.4}, {:.2}s",
            r.seed,
            r.final_test_accuracy,
            r.train_loss.last().copied().unwrap_or(f64::NAN),
            r.wall_time_seconds
        );
    }
    println!(
        "{} {}: {:.1} ± {:.1} % over {} seeds",
        summary.pipeline.as_str(),
        summary.dataset,
        100.0 * summary.mean_acc,
        100.0 * summary.std_acc,
        summary.n_seeds
    );
    print_written(&written);
    Ok(())
}

pub fn compare(cfg: &RunConfig) -> Result<(), CliError> {
    let data = prepare(cfg)?;
    describe(&data);
    let (table, reports) =
        experiment::compare(&data, &cfg.train, &cfg.seeds, cfg.jobs).map_err(runtime)?;

    let mut out = Outputs::default();
    add_reports(&mut out, &cfg.out, &reports);
    let name = &data.set.name;
    out.add(
        cfg.out.join(format!("{name}_comparison.md")),
        table.to_markdown(),
    );
    out.add(
        cfg.out.join(format!("{name}_comparison.json")),
        pretty(&table),
    );
    let written = out.commit()?;

    print!("{}", table.to_markdown());
    print_written(&written);
    Ok(())
}

pub fn bench(sizes: &[usize], samples: usize, dir: &Path) -> Result<(), CliError> {
    if sizes.is_empty() {
        return Err(CliError::usage("--sizes is empty"));
    }
    if let Some(s) = sizes.iter().find(|&&s| s < 4) {
        return Err(CliError::usage(format!("benchmark size {s} < 4")));
    }
    if samples == 0 {
        return Err(CliError::usage("--samples must be ≥ 1"));
    }
    let report = bench_scaling(sizes, samples).map_err(runtime)?;

    let mut out = Outputs::default();
    out.add(dir.join("bench_scaling.csv"), report.to_csv());
    out.add(dir.join("bench_scaling.json"), pretty(&report));
    let written = out.commit()?;

    println!(
        "{:>6} {:>8} {:>14} {:>14}",
        "size", "terms", "t_encode (s)", "t_pca (s)"
    );
    for r in &report.rows {
        println!(
            "{:>6} {:>8} {:>14.3e} {:>14.3e}",
            r.size, r.raw_terms, r.t_encode, r.t_pca
        );
    }
    match (report.encode_slope, report.pca_slope) {
        (Some(e), Some(p)) => println!("log-log slope: encode {e:.2}, pca {p:.2}"),
        _ => println!("single size: no slope fitted"),
    }
    print_written(&written);
    Ok(())
}

fn print_inspection(r: &GraphInspection) {
    println!(
        "{} graph {}: label {}, {} vertices, {} edges, {} qubits",
        r.dataset, r.graph_index, r.label, r.n_vertices, r.n_edges, r.n_qubits
    );
    println!(
        "terms: {} raw, {} merged, {} collisions, {} vanished",
        r.raw_terms,
        r.terms.len(),
        r.collisions,
        r.vanished
    );
    println!("{:>width$}  coefficient", "mask", width = r.n_qubits.max(4));
    for t in &r.terms {
        println!(
            "{:>width$}  {:+.6}",
            t.mask,
            t.coeff,
            width = r.n_qubits.max(4)
        );
    }
    let b = &r.bound;
    println!(
        "spectrum: [{:.6}, {:.6}], delta_J + delta_h = {:.6}, within [-1, 1]: {}",
        b.lambda_min, b.lambda_max, b.delta_j_plus_delta_h, b.within_unit
    );
    if let Some(f) = &r.pca_features {
        let shown: Vec<String> = f.iter().map(|v| format!("{v:.6}")).collect();
        println!("pca features: [{}]", shown.join(", "));
    }
}

pub fn inspect_graph(cfg: &RunConfig, index: usize, pca: bool, json: bool) -> Result<(), CliError> {
    let opts = &cfg.dataset;
    let set = load_dataset(&opts.data_dir, &opts.name, opts.edge_weights).map_err(input)?;
    let graph = set.graphs.get(index).ok_or_else(|| {
        CliError::usage(format!("graph index {index} out of range 0..{}", set.len()))
    })?;
    let n_qubits = cfg
        .train
        .n_qubits
        .unwrap_or_else(|| required_qubits(set.max_vertices()).min(opts.max_qubits));
    if required_qubits(graph.n_vertices()) > n_qubits {
        return Err(CliError::usage(format!(
            "graph {index} has {} vertices and needs more than {n_qubits} qubits",
            graph.n_vertices()
        )));
    }
    let enc = EncodingConfig {
        n_qubits,
        norm_mode: cfg.train.norm_mode,
        include_vertex_terms: cfg.train.include_vertex_terms,
    };
    let report = experiment::inspect_graph(&set, index, &enc, pca.then_some(cfg.train.pca_matrix))
        .map_err(runtime)?;
    if json {
        print!("{}", pretty(&report));
    } else {
        print_inspection(&report);
    }
    Ok(())
}

#[derive(Serialize)]
struct StateDump {
    n_qubits: usize,
    layers: usize,
    seed: u64,
    angles: Vec<f64>,
    /// `[re, im]` per basis state, qubit 0 least significant.
    amplitudes: Vec<[f64; 2]>,
    probabilities: Vec<f64>,
}

/// Plus state followed by a seeded ansatz; two qubits unless `--qubits` says otherwise.
pub fn inspect_state(args: &RunArgs, json: bool) -> Result<(), CliError> {
    let n_qubits = args.qubits.unwrap_or(2);
    let layers = args.layers.unwrap_or(TrainConfig::default().layers);
    let seed = args.seed_base.unwrap_or(0);
    let entangler = match args.entangler {
        Some(EntanglerArg::Chain) => Entangler::Chain,
        _ => Entangler::Ring,
    };
    if n_qubits == 0 {
        return Err(CliError::usage("--qubits must be ≥ 1"));
    }
    let params = AnsatzParams::random(layers, n_qubits, head_seed(seed, 0));
    let mut state = init_plus_state(n_qubits).map_err(input)?;
    state.apply_ansatz(&params, entangler).map_err(runtime)?;

    let dump = StateDump {
        n_qubits,
        layers,
        seed,
        angles: params.angles().to_vec(),
        amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        probabilities: state.probabilities(),
    };
    if json {
        print!("{}", pretty(&dump));
    } else {
        println!("{n_qubits} qubits, {layers} layers, seed {seed}");
        for (i, (a, p)) in dump.amplitudes.iter().zip(&dump.probabilities).enumerate() {
            println!(
                "|{:0width$b}>  {:+.6} {:+.6}i  p = {:.6}",
                i,
                a[0],
                a[1],
                p,
                width = n_qubits
            );
        }
    }
    Ok(())
}
