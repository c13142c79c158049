use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use egvqc::encoder::NormMode;
use egvqc::experiment::DatasetOptions;
use egvqc::graph::EdgeWeightMode;
use egvqc::pca::MatrixKind;
use egvqc::sim::Entangler;
use egvqc::vqc::{Multiclass, Pipeline, TrainConfig};

use crate::CliError;

pub const DEFAULT_MAX_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineArg {
    EgVqc,
    PcaVqc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormArg {
    Paper,
    Strict,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntanglerArg {
    Ring,
    Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeWeightArg {
    Uniform,
    Labels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MulticlassArg {
    Auto,
    NativeBinary,
    OneVsRest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixArg {
    Adjacency,
    Laplacian,
}

/// Run options shared by `train`, `compare` and `inspect`. Every field is
/// optional so that a `--config` file can fill the gaps; flags win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub struct RunArgs {
    /// TU dataset name (e.g. MUTAG) or `synthetic-density`
    #[arg(long)]
    pub dataset: Option<String>,
    /// Directory holding `<NAME>/<NAME>_A.txt` or `<NAME>_A.txt` [default: data]
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub pipeline: Option<PipelineArg>,
    /// Register size; automatic when omitted
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Cap on the automatic register size [default: 10]
    #[arg(long)]
    pub max_qubits: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Number of seeds, counted up from --seed-base
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub seed_base: Option<u64>,
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Train on a class-proportional subset of this many graphs
    #[arg(long)]
    pub max_graphs: Option<usize>,
    #[arg(long, value_enum)]
    pub multiclass: Option<MulticlassArg>,
    #[arg(long, value_enum)]
    pub norm_mode: Option<NormArg>,
    #[arg(long, value_enum)]
    pub entangler: Option<EntanglerArg>,
    #[arg(long, value_enum)]
    pub edge_weights: Option<EdgeWeightArg>,
    #[arg(long, value_enum)]
    pub pca_matrix: Option<MatrixArg>,
    /// Drop the single-qubit vertex terms from the encoding
    #[arg(long = "no-vertex-terms", action = clap::ArgAction::SetTrue)]
    #[serde(skip)]
    pub no_vertex_terms: bool,
    #[arg(skip)]
    pub vertex_terms: Option<bool>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory [default: results]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the options above, snake_case keys
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset: DatasetOptions,
    pub train: TrainConfig,
    pub seeds: Vec<u64>,
    pub jobs: usize,
    pub out: PathBuf,
}

fn read_config_file(path: &Path) -> Result<RunArgs, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
}

macro_rules! merge {
    ($flags:ident, $file:ident, $($field:ident),*) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field.take(); } )*
    };
}

impl RunArgs {
    /// Fills unset flags from the `--config` file, if any.
    pub fn merged(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let mut file = read_config_file(&path)?;
        merge!(
            self,
            file,
            dataset,
            data_dir,
            pipeline,
            qubits,
            max_qubits,
            layers,
            lr,
            epochs,
            seeds,
            seed_base,
            test_fraction,
            max_graphs,
            multiclass,
            norm_mode,
            entangler,
            edge_weights,
            pca_matrix,
            jobs,
            out
        );
        if self.no_vertex_terms {
            self.vertex_terms = Some(false);
        } else if self.vertex_terms.is_none() {
            self.vertex_terms = file.vertex_terms;
        }
        Ok(self)
    }

    pub fn dataset_name(&self) -> Result<String, CliError> {
        self.dataset
            .clone()
            .ok_or_else(|| CliError::usage("--dataset is required"))
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let defaults = TrainConfig::default();
        let train = TrainConfig {
            layers: self.layers.unwrap_or(defaults.layers),
            learning_rate: self.lr.unwrap_or(defaults.learning_rate),
            epochs: self.epochs.unwrap_or(defaults.epochs),
            seed: self.seed_base.unwrap_or(0),
            test_fraction: self.test_fraction.unwrap_or(defaults.test_fraction),
            norm_mode: match self.norm_mode {
                Some(NormArg::Paper) => NormMode::Paper,
                Some(NormArg::Strict) => NormMode::Strict,
                Some(NormArg::Exact) | None => NormMode::Exact,
            },
            pipeline: match self.pipeline {
                Some(PipelineArg::PcaVqc) => Pipeline::PcaVqc,
                Some(PipelineArg::EgVqc) | None => Pipeline::EgVqc,
            },
            n_qubits: self.qubits,
            batch: defaults.batch,
            multiclass: match self.multiclass {
                Some(MulticlassArg::NativeBinary) => Multiclass::NativeBinary,
                Some(MulticlassArg::OneVsRest) => Multiclass::OneVsRest,
                Some(MulticlassArg::Auto) | None => Multiclass::Auto,
            },
            entangler: match self.entangler {
                Some(EntanglerArg::Chain) => Entangler::Chain,
                Some(EntanglerArg::Ring) | None => Entangler::Ring,
            },
            include_vertex_terms: self.vertex_terms.unwrap_or(!self.no_vertex_terms),
            pca_matrix: match self.pca_matrix {
                Some(MatrixArg::Laplacian) => MatrixKind::Laplacian,
                Some(MatrixArg::Adjacency) | None => MatrixKind::Adjacency,
            },
        };
        train
            .validate()
            .map_err(|e| CliError::usage(e.to_string()))?;

        let n_seeds = self.seeds.unwrap_or(1);
        if n_seeds == 0 {
            return Err(CliError::usage("--seeds must be ≥ 1"));
        }
        let base = train.seed;
        let seeds = (0..n_seeds as u64)
            .map(|k| base.checked_add(k))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| CliError::usage("seed range overflows u64"))?;

        let max_qubits = self.max_qubits.unwrap_or(DEFAULT_MAX_QUBITS);
        if max_qubits == 0 || max_qubits > egvqc::DEFAULT_QUBIT_CAP {
            return Err(CliError::usage(format!(
                "--max-qubits must be in 1..={}",
                egvqc::DEFAULT_QUBIT_CAP
            )));
        }
        if let Some(q) = self.qubits {
            if q > egvqc::DEFAULT_QUBIT_CAP {
                return Err(CliError::usage(format!(
                    "--qubits {q} exceeds the simulator cap of {}",
                    egvqc::DEFAULT_QUBIT_CAP
                )));
            }
        }
        if self.max_graphs == Some(0) {
            return Err(CliError::usage("--max-graphs must be ≥ 1"));
        }
        let jobs = match self.jobs {
            Some(0) => return Err(CliError::usage("--jobs must be ≥ 1")),
            Some(j) => j,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };

        Ok(RunConfig {
            dataset: DatasetOptions {
                name: self.dataset_name()?,
                data_dir: self
                    .data_dir
                    .clone()
                    .unwrap_or_else(|| PathBuf::from("data")),
                edge_weights: match self.edge_weights {
                    Some(EdgeWeightArg::Labels) => EdgeWeightMode::FromEdgeLabels,
                    Some(EdgeWeightArg::Uniform) | None => EdgeWeightMode::Uniform,
                },
                max_graphs: self.max_graphs,
                max_qubits,
            },
            train,
            seeds,
            jobs,
            out: self.out.clone().unwrap_or_else(|| PathBuf::from("results")),
        })
    }
}
