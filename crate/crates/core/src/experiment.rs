//! Experiment orchestration shared by the command-line front end and the
//! acceptance tests: dataset preparation, multi-seed runs, comparison tables,
//! scaling benchmarks and per-graph inspection.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoder::{encode_graph, required_qubits, verify_bound, BoundReport, EncodingConfig};
use crate::error::{Error, Result};
use crate::graph::{
    complete_graph, density_dataset, load_tu_dataset, stratified_subset, DensityClass,
    EdgeWeightMode, LabeledGraphSet,
};
use crate::pca::{spectral_features, FeatureScaler, MatrixKind};
use crate::vqc::{train, Pipeline, TrainConfig, TrainReport};

/// Name of the built-in synthetic task accepted wherever a dataset name is.
pub const SYNTHETIC_DENSITY: &str = "synthetic-density";

/// Twenty graphs: G(7, 0.6) against G(10, 0.9), labeled by edge count above the median.
pub fn density_task(seed: u64) -> Result<LabeledGraphSet> {
    density_dataset(
        20,
        DensityClass {
            n_vertices: 7,
            edge_prob: 0.6,
        },
        DensityClass {
            n_vertices: 10,
            edge_prob: 0.9,
        },
        seed,
    )
}

/// Loads a TU dataset, or the built-in synthetic task when `name` is [`SYNTHETIC_DENSITY`].
pub fn load_dataset(
    data_dir: &Path,
    name: &str,
    edge_weights: EdgeWeightMode,
) -> Result<LabeledGraphSet> {
    if name == SYNTHETIC_DENSITY {
        return density_task(0);
    }
    load_tu_dataset(&dataset_directory(data_dir, name), name, edge_weights)
}

/// Where the TU files of `name` live: `{data_dir}/{name}/` if that holds
/// `{name}_A.txt`, otherwise `data_dir` itself.
pub fn dataset_directory(data_dir: &Path, name: &str) -> PathBuf {
    let nested = data_dir.join(name);
    if nested.join(format!("{name}_A.txt")).is_file() {
        nested
    } else {
        data_dir.to_path_buf()
    }
}

pub fn dataset_exists(data_dir: &Path, name: &str) -> bool {
    dataset_directory(data_dir, name)
        .join(format!("{name}_A.txt"))
        .is_file()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetOptions {
    pub name: String,
    pub data_dir: PathBuf,
    pub edge_weights: EdgeWeightMode,
    /// Keep a seeded class-proportional subset of this many graphs.
    pub max_graphs: Option<usize>,
    /// Upper bound on the register when the qubit count is chosen automatically.
    pub max_qubits: usize,
}

#[derive(Debug, Clone)]
pub struct PreparedDataset {
    pub set: LabeledGraphSet,
    pub n_qubits: usize,
    pub excluded_oversize: usize,
    pub excluded_degenerate: usize,
}

/// Fixed seed for dataset subsampling so every pipeline and seed sees the same subset.
const SUBSET_SEED: u64 = 0x5eed;

/// Loads, subsamples and filters a dataset for a given configuration.
///
/// Graphs that need more than the resolved qubit count, and edgeless graphs
/// (whose encoding is the zero operator), are dropped and counted.
pub fn prepare_dataset(opts: &DatasetOptions, cfg: &TrainConfig) -> Result<PreparedDataset> {
    let full = load_dataset(&opts.data_dir, &opts.name, opts.edge_weights)?;
    let set = match opts.max_graphs {
        Some(n) => stratified_subset(&full, n, SUBSET_SEED)?,
        None => full,
    };
    filter_dataset(&set, cfg.n_qubits, opts.max_qubits)
}

pub fn filter_dataset(
    set: &LabeledGraphSet,
    n_qubits: Option<usize>,
    max_qubits: usize,
) -> Result<PreparedDataset> {
    let n_qubits = n_qubits.unwrap_or_else(|| required_qubits(set.max_vertices()).min(max_qubits));
    let mut keep = Vec::with_capacity(set.len());
    let (mut oversize, mut degenerate) = (0, 0);
    for (i, g) in set.graphs.iter().enumerate() {
        if required_qubits(g.n_vertices()) > n_qubits {
            oversize += 1;
        } else if g.n_edges() == 0 {
            degenerate += 1;
        } else {
            keep.push(i);
        }
    }
    if keep.is_empty() {
        return Err(Error::domain(format!(
            "no graph of {} fits in {n_qubits} qubits",
            set.name
        )));
    }
    Ok(PreparedDataset {
        set: set.select(&keep)?,
        n_qubits,
        excluded_oversize: oversize,
        excluded_degenerate: degenerate,
    })
}

/// Runs `cfg` once per seed on up to `jobs` threads; reports come back in seed order.
pub fn run_seeds(
    data: &PreparedDataset,
    cfg: &TrainConfig,
    seeds: &[u64],
    jobs: usize,
) -> Result<Vec<TrainReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::domain(format!("cannot start worker pool: {e}")))?;
    let cfg = TrainConfig {
        n_qubits: Some(data.n_qubits),
        ..cfg.clone()
    };
    pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| {
                let mut report = train(
                    &data.set,
                    &TrainConfig {
                        seed,
                        ..cfg.clone()
                    },
                )?;
                report.dataset.excluded_oversize = data.excluded_oversize;
                report.dataset.excluded_degenerate = data.excluded_degenerate;
                Ok(report)
            })
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub dataset: String,
    pub pipeline: Pipeline,
    pub n_seeds: usize,
    pub seeds: Vec<u64>,
    pub accuracies: Vec<f64>,
    pub mean_acc: f64,
    /// Population standard deviation over seeds.
    pub std_acc: f64,
}

impl RunSummary {
    pub fn from_reports(reports: &[TrainReport]) -> Result<Self> {
        let first = reports
            .first()
            .ok_or_else(|| Error::domain("no runs to summarize"))?;
        let accuracies: Vec<f64> = reports.iter().map(|r| r.final_test_accuracy).collect();
        let (mean_acc, std_acc) = mean_std(&accuracies);
        Ok(Self {
            dataset: first.dataset.name.clone(),
            pipeline: first.config.pipeline,
            n_seeds: reports.len(),
            seeds: reports.iter().map(|r| r.seed).collect(),
            accuracies,
            mean_acc,
            std_acc,
        })
    }
}

pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub dataset: String,
    pub mean_accuracy_pct: f64,
    pub std_accuracy_pct: f64,
    pub n_seeds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub seeds: Vec<u64>,
    pub n_qubits: usize,
}

impl Comparison {
    pub fn from_summaries(summaries: &[RunSummary], n_qubits: usize) -> Self {
        Self {
            rows: summaries
                .iter()
                .map(|s| ComparisonRow {
                    model: s.pipeline.as_str().to_uppercase(),
                    dataset: s.dataset.clone(),
                    mean_accuracy_pct: 100.0 * s.mean_acc,
                    std_accuracy_pct: 100.0 * s.std_acc,
                    n_seeds: s.n_seeds,
                })
                .collect(),
            seeds: summaries
                .first()
                .map(|s| s.seeds.clone())
                .unwrap_or_default(),
            n_qubits,
        }
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| Model | Dataset | Accuracy (%) |\n|---|---|---|\n");
        for r in &self.rows {
            out.push_str(&format!(
                "| {} | {} | {:.1} ± {:.1} |\n",
                r.model, r.dataset, r.mean_accuracy_pct, r.std_accuracy_pct
            ));
        }
        out
    }
}

/// Trains both pipelines with the same seeds on the same prepared data, so
/// every seed uses one split for both.
pub fn compare(
    data: &PreparedDataset,
    cfg: &TrainConfig,
    seeds: &[u64],
    jobs: usize,
) -> Result<(Comparison, Vec<TrainReport>)> {
    let mut reports = Vec::new();
    let mut summaries = Vec::new();
    for pipeline in [Pipeline::PcaVqc, Pipeline::EgVqc] {
        let runs = run_seeds(
            data,
            &TrainConfig {
                pipeline,
                ..cfg.clone()
            },
            seeds,
            jobs,
        )?;
        summaries.push(RunSummary::from_reports(&runs)?);
        reports.extend(runs);
    }
    Ok((
        Comparison::from_summaries(&summaries, data.n_qubits),
        reports,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub size: usize,
    pub n_qubits: usize,
    pub raw_terms: usize,
    pub t_encode: f64,
    pub t_pca: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// Least-squares slope of `ln t` against `ln size`; absent for a single size.
    pub encode_slope: Option<f64>,
    pub pca_slope: Option<f64>,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("size,t_encode,t_pca\n");
        for r in &self.rows {
            out.push_str(&format!("{},{:e},{:e}\n", r.size, r.t_encode, r.t_pca));
        }
        out
    }
}

/// Median over `samples` of the per-call time, each sample batching enough
/// calls to last at least `min_sample`.
fn median_time<F: FnMut() -> Result<()>>(
    mut f: F,
    samples: usize,
    min_sample: Duration,
) -> Result<f64> {
    let start = Instant::now();
    f()?;
    let once = start.elapsed().max(Duration::from_nanos(1));
    let calls = (min_sample.as_secs_f64() / once.as_secs_f64())
        .ceil()
        .max(1.0) as usize;
    let mut times = Vec::with_capacity(samples);
    for _ in 0..samples.max(1) {
        let start = Instant::now();
        for _ in 0..calls {
            f()?;
        }
        times.push(start.elapsed().as_secs_f64() / calls as f64);
    }
    times.sort_by(f64::total_cmp);
    Ok(times[times.len() / 2])
}

pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let (mx, my) = (
        lx.iter().sum::<f64>() / lx.len() as f64,
        ly.iter().sum::<f64>() / ly.len() as f64,
    );
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Times graph encoding (default normalization) against the full spectral
/// decomposition on complete graphs.
pub fn bench_scaling(sizes: &[usize], samples: usize) -> Result<BenchReport> {
    if let Some(&s) = sizes.iter().find(|&&s| s < 4) {
        return Err(Error::domain(format!("benchmark size {s} < 4")));
    }
    let min_sample = Duration::from_millis(20);
    let mut rows = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let g = complete_graph(size)?;
        let n_qubits = required_qubits(size);
        let enc = EncodingConfig::new(n_qubits);
        let raw_terms = encode_graph(&g, &enc)?.stats().map_or(0, |s| s.raw_terms);
        let t_encode = median_time(|| encode_graph(&g, &enc).map(drop), samples, min_sample)?;
        let t_pca = median_time(
            || spectral_features(&g, n_qubits, MatrixKind::Adjacency).map(drop),
            samples,
            min_sample,
        )?;
        rows.push(BenchRow {
            size,
            n_qubits,
            raw_terms,
            t_encode,
            t_pca,
        });
    }
    let xs: Vec<f64> = rows.iter().map(|r| r.size as f64).collect();
    let encode_slope = log_log_slope(&xs, &rows.iter().map(|r| r.t_encode).collect::<Vec<_>>());
    let pca_slope = log_log_slope(&xs, &rows.iter().map(|r| r.t_pca).collect::<Vec<_>>());
    Ok(BenchReport {
        rows,
        encode_slope,
        pca_slope,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRow {
    pub mask: String,
    pub label: String,
    pub coeff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphInspection {
    pub dataset: String,
    pub graph_index: usize,
    pub label: usize,
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_qubits: usize,
    pub raw_terms: usize,
    pub collisions: usize,
    pub vanished: usize,
    pub terms: Vec<TermRow>,
    pub bound: BoundReport,
    pub pca_features: Option<Vec<f64>>,
}

/// Encodes graph `index` of `set` and reports its term table and spectrum.
/// With `pca`, also reports its spectral features scaled by the dataset-wide
/// maximum singular value.
pub fn inspect_graph(
    set: &LabeledGraphSet,
    index: usize,
    enc: &EncodingConfig,
    pca: Option<MatrixKind>,
) -> Result<GraphInspection> {
    let g = set.graphs.get(index).ok_or_else(|| {
        Error::domain(format!("graph index {index} out of range 0..{}", set.len()))
    })?;
    let h = encode_graph(g, enc)?;
    let stats = *h.stats().expect("encoded Hamiltonians carry stats");
    let pca_features = match pca {
        None => None,
        Some(kind) => {
            let raw = set
                .graphs
                .iter()
                .map(|g| spectral_features(g, enc.n_qubits, kind))
                .collect::<Result<Vec<_>>>()?;
            let scaler = FeatureScaler::fit(raw.iter().map(Vec::as_slice));
            Some(scaler.apply(&raw[index]).values)
        }
    };
    Ok(GraphInspection {
        dataset: set.name.clone(),
        graph_index: index,
        label: set.labels[index],
        n_vertices: g.n_vertices(),
        n_edges: g.n_edges(),
        n_qubits: enc.n_qubits,
        raw_terms: stats.raw_terms,
        collisions: stats.collisions,
        vanished: stats.vanished,
        terms: h
            .terms()
            .iter()
            .map(|t| TermRow {
                mask: t.string.bits(),
                label: t.string.label(),
                coeff: t.coefficient,
            })
            .collect(),
        bound: verify_bound(&h)?,
        pca_features,
    })
}
