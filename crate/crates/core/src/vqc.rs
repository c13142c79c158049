//! Variational classifiers: forward passes, loss, parameter-shift gradients,
//! Adam and the full-batch training loop.
//!
//! Both pipelines share one ansatz (RY layers plus CNOT entanglers) and map a
//! raw expectation `e ∈ [−1, 1]` to a probability `p = (1 + e) / 2`.
//!
//! * Graph-Hamiltonian pipeline: start from the plus state, apply the ansatz
//!   and measure the encoded graph Hamiltonian. The circuit state does not
//!   depend on the graph, so the loss gradient is the parameter-shift gradient
//!   of a single aggregated diagonal observable.
//! * Spectral baseline: angle-encode the scaled singular values, apply the
//!   ansatz and measure Z on qubit 0.

use std::f64::consts::FRAC_PI_2;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoder::{encode_graph, required_qubits, verify_bound, EncodingConfig, NormMode};
use crate::error::{Error, Result};
use crate::graph::{stratified_split_indices, LabeledGraphSet};
use crate::pauli::GraphHamiltonian;
use crate::pca::{spectral_features, FeatureScaler, MatrixKind};
use crate::seed::{head_seed, split_seed};
use crate::sim::{angle_encode, init_plus_state, AnsatzParams, Entangler, StateVector};

/// Probabilities are clamped to `[ε, 1 − ε]` before taking logs.
pub const LOG_CLAMP: f64 = 1e-7;

/// Slack on `p ∈ [0, 1]` before a forward pass counts as a contract violation.
const PROBABILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    #[default]
    EgVqc,
    PcaVqc,
}

impl Pipeline {
    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::EgVqc => "eg-vqc",
            Pipeline::PcaVqc => "pca-vqc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchMode {
    #[default]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiclass {
    /// Binary datasets train one head; more classes switch to one-vs-rest.
    #[default]
    Auto,
    NativeBinary,
    OneVsRest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub layers: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    pub test_fraction: f64,
    pub norm_mode: NormMode,
    pub pipeline: Pipeline,
    /// `None` picks the smallest register that fits the largest graph.
    pub n_qubits: Option<usize>,
    pub batch: BatchMode,
    pub multiclass: Multiclass,
    pub entangler: Entangler,
    pub include_vertex_terms: bool,
    pub pca_matrix: MatrixKind,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            layers: 3,
            learning_rate: 0.01,
            epochs: 100,
            seed: 0,
            test_fraction: 0.1,
            norm_mode: NormMode::Exact,
            pipeline: Pipeline::EgVqc,
            n_qubits: None,
            batch: BatchMode::Full,
            multiclass: Multiclass::Auto,
            entangler: Entangler::Ring,
            include_vertex_terms: true,
            pca_matrix: MatrixKind::Adjacency,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::domain(format!(
                "learning rate {} must be > 0",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::domain("epochs must be ≥ 1"));
        }
        if self.layers == 0 {
            return Err(Error::domain("layers must be ≥ 1"));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::domain(format!(
                "test fraction {} outside (0, 1)",
                self.test_fraction
            )));
        }
        if self.n_qubits == Some(0) {
            return Err(Error::domain("qubit count must be ≥ 1"));
        }
        Ok(())
    }

    pub fn resolve_qubits(&self, ds: &LabeledGraphSet) -> usize {
        self.n_qubits
            .unwrap_or_else(|| required_qubits(ds.max_vertices()))
    }

    fn encoding(&self, n_qubits: usize) -> EncodingConfig {
        EncodingConfig {
            n_qubits,
            norm_mode: self.norm_mode,
            include_vertex_terms: self.include_vertex_terms,
        }
    }
}

fn to_probability(expectation: f64) -> Result<f64> {
    let p = (1.0 + expectation) / 2.0;
    if !(-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p) {
        return Err(Error::Contract(format!(
            "expectation {expectation} outside [-1, 1]; the observable is not normalized"
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}

fn eg_state(params: &AnsatzParams, entangler: Entangler) -> Result<StateVector> {
    let mut state = init_plus_state(params.n_qubits())?;
    state.apply_ansatz(params, entangler)?;
    Ok(state)
}

fn pca_state(features: &[f64], params: &AnsatzParams, entangler: Entangler) -> Result<StateVector> {
    let mut state = angle_encode(features, params.n_qubits())?;
    state.apply_ansatz(params, entangler)?;
    Ok(state)
}

/// Diagonal of `Z` on qubit 0.
fn z0_diagonal(n_qubits: usize) -> Vec<f64> {
    (0..1usize << n_qubits)
        .map(|x| if x & 1 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// `p = (1 + ⟨ψ(θ)|H|ψ(θ)⟩) / 2` with `|ψ(θ)⟩ = U(θ)|+…+⟩`.
pub fn forward_eg(
    h: &GraphHamiltonian,
    params: &AnsatzParams,
    entangler: Entangler,
) -> Result<f64> {
    let bound = verify_bound(h)?;
    if !bound.within_unit {
        return Err(Error::Contract(format!(
            "Hamiltonian spectrum [{}, {}] exceeds [-1, 1]",
            bound.lambda_min, bound.lambda_max
        )));
    }
    if h.n_qubits() != params.n_qubits() {
        return Err(Error::domain(format!(
            "{}-qubit Hamiltonian with a {}-qubit ansatz",
            h.n_qubits(),
            params.n_qubits()
        )));
    }
    let e = eg_state(params, entangler)?.expectation_diagonal(h.build_diagonal()?)?;
    to_probability(e)
}

/// `p = (1 + ⟨Z₀⟩) / 2` after angle encoding and the ansatz.
pub fn forward_pca(features: &[f64], params: &AnsatzParams, entangler: Entangler) -> Result<f64> {
    let state = pca_state(features, params, entangler)?;
    to_probability(state.expectation_diagonal(&z0_diagonal(params.n_qubits()))?)
}

fn clamp_probability(p: f64) -> f64 {
    p.clamp(LOG_CLAMP, 1.0 - LOG_CLAMP)
}

/// Mean binary cross-entropy.
pub fn bce_loss(predictions: &[f64], labels: &[f64]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::domain("cross-entropy of an empty batch"));
    }
    if predictions.len() != labels.len() {
        return Err(Error::domain(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    let total: f64 = predictions
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = clamp_probability(p);
            -(y * p.ln() + (1.0 - y) * (1.0 - p).ln())
        })
        .sum();
    Ok(total / predictions.len() as f64)
}

/// `∂L/∂p_i` of [`bce_loss`], using the same clamp.
fn bce_gradient(predictions: &[f64], labels: &[f64]) -> Vec<f64> {
    let m = predictions.len() as f64;
    predictions
        .iter()
        .zip(labels)
        .map(|(&p, &y)| {
            let p = clamp_probability(p);
            -(y / p - (1.0 - y) / (1.0 - p)) / m
        })
        .collect()
}

/// `∂e/∂θ_k = (e(θ + π/2·ê_k) − e(θ − π/2·ê_k)) / 2` for every angle, in the
/// parameter layout of [`AnsatzParams`]. `eval` must return the raw
/// expectation, not a probability.
pub fn parameter_shift_gradient<F>(mut eval: F, params: &AnsatzParams) -> Result<Vec<f64>>
where
    F: FnMut(&AnsatzParams) -> Result<f64>,
{
    (0..params.len())
        .map(|k| {
            let plus = eval(&params.shifted(k, FRAC_PI_2))?;
            let minus = eval(&params.shifted(k, -FRAC_PI_2))?;
            Ok((plus - minus) / 2.0)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
}

impl AdamState {
    pub const BETA1: f64 = 0.9;
    pub const BETA2: f64 = 0.999;
    pub const EPSILON: f64 = 1e-8;

    pub fn new(n_params: usize) -> Self {
        Self {
            first_moment: vec![0.0; n_params],
            second_moment: vec![0.0; n_params],
            step_count: 0,
        }
    }
}

/// One bias-corrected Adam step; `step_count` doubles as the epoch number in errors.
pub fn adam_update(
    params: &mut [f64],
    grads: &[f64],
    state: &mut AdamState,
    lr: f64,
) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.first_moment.len() {
        return Err(Error::domain(format!(
            "Adam shapes differ: {} params, {} grads, {} moments",
            params.len(),
            grads.len(),
            state.first_moment.len()
        )));
    }
    if let Some(k) = grads.iter().position(|g| !g.is_finite()) {
        return Err(Error::Training {
            epoch: state.step_count as usize + 1,
            message: format!("gradient component {k} is {}", grads[k]),
        });
    }
    state.step_count += 1;
    let t = state.step_count as i32;
    let bias1 = 1.0 - AdamState::BETA1.powi(t);
    let bias2 = 1.0 - AdamState::BETA2.powi(t);
    for (((p, &g), m), v) in params
        .iter_mut()
        .zip(grads)
        .zip(&mut state.first_moment)
        .zip(&mut state.second_moment)
    {
        *m = AdamState::BETA1 * *m + (1.0 - AdamState::BETA1) * g;
        *v = AdamState::BETA2 * *v + (1.0 - AdamState::BETA2) * g * g;
        let m_hat = *m / bias1;
        let v_hat = *v / bias2;
        *p -= lr * m_hat / (v_hat.sqrt() + AdamState::EPSILON);
    }
    Ok(())
}

/// Class 1 when `p ≥ 0.5`.
pub fn predict(p: f64) -> usize {
    usize::from(p >= 0.5)
}

/// Fraction of `predict(p) == label`.
pub fn evaluate(probabilities: &[f64], labels: &[usize]) -> Result<f64> {
    if probabilities.is_empty() {
        return Err(Error::domain("accuracy of an empty set"));
    }
    if probabilities.len() != labels.len() {
        return Err(Error::domain("prediction and label counts differ"));
    }
    let correct = probabilities
        .iter()
        .zip(labels)
        .filter(|(&p, &y)| predict(p) == y)
        .count();
    Ok(correct as f64 / probabilities.len() as f64)
}

/// Index of the largest probability; ties go to the lowest index.
pub fn argmax_lowest(probabilities: &[f64]) -> usize {
    probabilities
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(best, bp), (k, &p)| {
            if p > bp {
                (k, p)
            } else {
                (best, bp)
            }
        })
        .0
}

/// A batch of inputs that maps ansatz parameters to raw expectations.
pub trait CircuitModel: Sync {
    fn n_qubits(&self) -> usize;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn expectations(&self, params: &AnsatzParams) -> Result<Vec<f64>>;
    /// Gradient of `Σ_i weights[i] · e_i(θ)`.
    fn weighted_gradient(&self, params: &AnsatzParams, weights: &[f64]) -> Result<Vec<f64>>;

    fn probabilities(&self, params: &AnsatzParams) -> Result<Vec<f64>> {
        self.expectations(params)?
            .into_iter()
            .map(to_probability)
            .collect()
    }
}

/// Encoded graphs sharing one plus-state circuit.
pub struct HamiltonianModel<'a> {
    diagonals: Vec<&'a [f64]>,
    n_qubits: usize,
    entangler: Entangler,
}

impl<'a> HamiltonianModel<'a> {
    /// Every Hamiltonian must have a spectrum inside `[-1, 1]`.
    pub fn new(hamiltonians: &[&'a GraphHamiltonian], entangler: Entangler) -> Result<Self> {
        let n_qubits = hamiltonians.first().map_or(1, |h| h.n_qubits());
        let mut diagonals = Vec::with_capacity(hamiltonians.len());
        for (i, h) in hamiltonians.iter().enumerate() {
            if h.n_qubits() != n_qubits {
                return Err(Error::domain("Hamiltonians on different registers"));
            }
            let bound = verify_bound(h)?;
            if !bound.within_unit {
                return Err(Error::Contract(format!(
                    "graph {i}: spectrum [{}, {}] exceeds [-1, 1]; use the strict or exact normalization",
                    bound.lambda_min, bound.lambda_max
                )));
            }
            diagonals.push(h.build_diagonal()?);
        }
        Ok(Self {
            diagonals,
            n_qubits,
            entangler,
        })
    }
}

impl CircuitModel for HamiltonianModel<'_> {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn len(&self) -> usize {
        self.diagonals.len()
    }

    fn expectations(&self, params: &AnsatzParams) -> Result<Vec<f64>> {
        let probs = eg_state(params, self.entangler)?.probabilities();
        Ok(self
            .diagonals
            .iter()
            .map(|d| probs.iter().zip(d.iter()).map(|(p, x)| p * x).sum())
            .collect())
    }

    fn weighted_gradient(&self, params: &AnsatzParams, weights: &[f64]) -> Result<Vec<f64>> {
        // Expectation is linear in the observable, so one aggregated diagonal suffices.
        let mut aggregate = vec![0.0; 1usize << self.n_qubits];
        for (d, &w) in self.diagonals.iter().zip(weights) {
            for (a, x) in aggregate.iter_mut().zip(d.iter()) {
                *a += w * x;
            }
        }
        parameter_shift_gradient(
            |theta| eg_state(theta, self.entangler)?.expectation_diagonal(&aggregate),
            params,
        )
    }
}

/// Angle-encoded feature vectors measured with `Z₀`.
pub struct FeatureModel {
    features: Vec<Vec<f64>>,
    n_qubits: usize,
    entangler: Entangler,
    z0: Vec<f64>,
}

impl FeatureModel {
    pub fn new(features: Vec<Vec<f64>>, n_qubits: usize, entangler: Entangler) -> Result<Self> {
        if let Some(f) = features.iter().find(|f| f.len() != n_qubits) {
            return Err(Error::domain(format!(
                "{} features for {n_qubits} qubits",
                f.len()
            )));
        }
        Ok(Self {
            features,
            n_qubits,
            entangler,
            z0: z0_diagonal(n_qubits),
        })
    }
}

impl CircuitModel for FeatureModel {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn len(&self) -> usize {
        self.features.len()
    }

    fn expectations(&self, params: &AnsatzParams) -> Result<Vec<f64>> {
        self.features
            .par_iter()
            .map(|f| pca_state(f, params, self.entangler)?.expectation_diagonal(&self.z0))
            .collect()
    }

    fn weighted_gradient(&self, params: &AnsatzParams, weights: &[f64]) -> Result<Vec<f64>> {
        let per_sample: Vec<Vec<f64>> = self
            .features
            .par_iter()
            .zip(weights)
            .map(|(f, &w)| {
                let g = parameter_shift_gradient(
                    |theta| pca_state(f, theta, self.entangler)?.expectation_diagonal(&self.z0),
                    params,
                )?;
                Ok(g.into_iter().map(|x| w * x).collect())
            })
            .collect::<Result<_>>()?;
        // Sequential reduction in sample order keeps results independent of thread count.
        let mut total = vec![0.0; params.len()];
        for g in &per_sample {
            for (t, x) in total.iter_mut().zip(g) {
                *t += x;
            }
        }
        Ok(total)
    }
}

/// One binary classifier being trained on a fixed model.
pub struct BinaryHead<'m> {
    model: &'m dyn CircuitModel,
    labels: Vec<f64>,
    params: AnsatzParams,
    adam: AdamState,
    learning_rate: f64,
}

impl<'m> BinaryHead<'m> {
    pub fn new(
        model: &'m dyn CircuitModel,
        labels: &[usize],
        params: AnsatzParams,
        learning_rate: f64,
    ) -> Result<Self> {
        if labels.len() != model.len() {
            return Err(Error::domain(
                "label count does not match the training inputs",
            ));
        }
        if labels.iter().any(|&y| y > 1) {
            return Err(Error::domain("binary head needs labels in {0, 1}"));
        }
        let adam = AdamState::new(params.len());
        Ok(Self {
            model,
            labels: labels.iter().map(|&y| y as f64).collect(),
            params,
            adam,
            learning_rate,
        })
    }

    pub fn params(&self) -> &AnsatzParams {
        &self.params
    }

    /// One full-batch update. Returns the training loss at the pre-update parameters.
    pub fn step(&mut self) -> Result<f64> {
        let probs = self.model.probabilities(&self.params)?;
        let loss = bce_loss(&probs, &self.labels)?;
        // dL/de_i = dL/dp_i · dp_i/de_i with dp/de = 1/2.
        let weights: Vec<f64> = bce_gradient(&probs, &self.labels)
            .into_iter()
            .map(|g| 0.5 * g)
            .collect();
        let grads = self.model.weighted_gradient(&self.params, &weights)?;
        adam_update(
            self.params.angles_mut(),
            &grads,
            &mut self.adam,
            self.learning_rate,
        )?;
        Ok(loss)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    pub n_graphs: usize,
    pub class_count: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub n_qubits: usize,
    /// Graphs dropped before training because they need more qubits than allowed.
    pub excluded_oversize: usize,
    /// Graphs dropped before training because their encoding is the zero operator.
    pub excluded_degenerate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeadSummary {
    pub class: usize,
    pub final_train_loss: f64,
    pub final_val_loss: f64,
    pub final_val_accuracy: f64,
}

/// Per-epoch learning curves and final metrics of one training run.
///
/// `train_loss[e]` is measured at the parameters entering epoch `e`;
/// `val_loss[e]` and `val_accuracy[e]` at the parameters after its update.
/// The held-out split doubles as validation and test set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub config: TrainConfig,
    pub seed: u64,
    pub dataset: DatasetSummary,
    pub train_loss: Vec<f64>,
    pub val_loss: Vec<f64>,
    pub val_accuracy: Vec<f64>,
    pub final_test_accuracy: f64,
    pub heads: Vec<HeadSummary>,
    pub parameters: Vec<AnsatzParams>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub wall_time_seconds: f64,
}

#[derive(Serialize)]
struct ReportFile<'a> {
    deterministic: &'a TrainReport,
    timing: Timing,
}

#[derive(Serialize)]
struct Timing {
    wall_time_seconds: f64,
}

impl TrainReport {
    /// `{"deterministic": {...}, "timing": {...}}`; only the timing block varies between reruns.
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&ReportFile {
            deterministic: self,
            timing: Timing {
                wall_time_seconds: self.wall_time_seconds,
            },
        })
        .expect("report serialization is infallible")
    }

    pub fn deterministic_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// `epoch,train_loss,val_loss,val_acc`, epochs counted from 1.
    pub fn loss_csv(&self) -> String {
        let mut out = String::from("epoch,train_loss,val_loss,val_acc\n");
        for e in 0..self.train_loss.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                e + 1,
                self.train_loss[e],
                self.val_loss[e],
                self.val_accuracy[e]
            ));
        }
        out
    }
}

/// Inputs prepared once per run, indexed like the dataset.
enum PreparedInputs {
    Hamiltonians(Vec<GraphHamiltonian>),
    Features(Vec<Vec<f64>>),
}

fn prepare_inputs(
    ds: &LabeledGraphSet,
    cfg: &TrainConfig,
    n_qubits: usize,
    train_idx: &[usize],
) -> Result<PreparedInputs> {
    match cfg.pipeline {
        Pipeline::EgVqc => {
            let enc = cfg.encoding(n_qubits);
            let hs = ds
                .graphs
                .par_iter()
                .map(|g| encode_graph(g, &enc))
                .collect::<Result<Vec<_>>>()?;
            Ok(PreparedInputs::Hamiltonians(hs))
        }
        Pipeline::PcaVqc => {
            let raw = ds
                .graphs
                .par_iter()
                .map(|g| spectral_features(g, n_qubits, cfg.pca_matrix))
                .collect::<Result<Vec<_>>>()?;
            let scaler = FeatureScaler::fit(train_idx.iter().map(|&i| raw[i].as_slice()));
            Ok(PreparedInputs::Features(
                raw.iter().map(|r| scaler.apply(r).values).collect(),
            ))
        }
    }
}

fn build_model<'a>(
    inputs: &'a PreparedInputs,
    idx: &[usize],
    n_qubits: usize,
    entangler: Entangler,
) -> Result<Box<dyn CircuitModel + 'a>> {
    Ok(match inputs {
        PreparedInputs::Hamiltonians(hs) => {
            let subset: Vec<&GraphHamiltonian> = idx.iter().map(|&i| &hs[i]).collect();
            Box::new(HamiltonianModel::new(&subset, entangler)?)
        }
        PreparedInputs::Features(fs) => Box::new(FeatureModel::new(
            idx.iter().map(|&i| fs[i].clone()).collect(),
            n_qubits,
            entangler,
        )?),
    })
}

fn resolve_multiclass(ds: &LabeledGraphSet, cfg: &TrainConfig) -> Result<bool> {
    match (cfg.multiclass, ds.class_count) {
        (Multiclass::NativeBinary, 2) | (Multiclass::Auto, 2) => Ok(false),
        (Multiclass::NativeBinary, k) => Err(Error::domain(format!(
            "native binary training needs 2 classes, dataset has {k}"
        ))),
        (Multiclass::OneVsRest, 2) => Err(Error::domain(
            "one-vs-rest needs at least 3 classes; use native binary training",
        )),
        (Multiclass::OneVsRest, _) | (Multiclass::Auto, _) => Ok(true),
    }
}

/// Trains on `ds` with a seeded stratified split. Binary datasets train one
/// head; datasets with more classes go through [`one_vs_rest_train`] unless
/// the config forces native binary training.
pub fn train(ds: &LabeledGraphSet, cfg: &TrainConfig) -> Result<TrainReport> {
    cfg.validate()?;
    if resolve_multiclass(ds, cfg)? {
        return one_vs_rest_train(ds, cfg);
    }
    train_heads(ds, cfg, false)
}

/// One binary head per class (class `k` against the rest). Predictions take
/// the argmax over head probabilities, ties to the lowest class id.
pub fn one_vs_rest_train(ds: &LabeledGraphSet, cfg: &TrainConfig) -> Result<TrainReport> {
    cfg.validate()?;
    if ds.class_count < 3 {
        return Err(Error::domain(format!(
            "one-vs-rest needs at least 3 classes, dataset has {}",
            ds.class_count
        )));
    }
    train_heads(ds, cfg, true)
}

fn train_heads(ds: &LabeledGraphSet, cfg: &TrainConfig, one_vs_rest: bool) -> Result<TrainReport> {
    let started = Instant::now();
    let n_qubits = cfg.resolve_qubits(ds);
    let (train_idx, test_idx) =
        stratified_split_indices(ds, cfg.test_fraction, split_seed(cfg.seed))?;
    let inputs = prepare_inputs(ds, cfg, n_qubits, &train_idx)?;
    let train_model = build_model(&inputs, &train_idx, n_qubits, cfg.entangler)?;
    let test_model = build_model(&inputs, &test_idx, n_qubits, cfg.entangler)?;
    let train_labels: Vec<usize> = train_idx.iter().map(|&i| ds.labels[i]).collect();
    let test_labels: Vec<usize> = test_idx.iter().map(|&i| ds.labels[i]).collect();

    let head_classes: Vec<usize> = if one_vs_rest {
        (0..ds.class_count).collect()
    } else {
        vec![1]
    };
    let binary = |labels: &[usize], class: usize| -> Vec<usize> {
        labels.iter().map(|&y| usize::from(y == class)).collect()
    };
    let mut heads = head_classes
        .iter()
        .enumerate()
        .map(|(h, &class)| {
            BinaryHead::new(
                train_model.as_ref(),
                &binary(&train_labels, class),
                AnsatzParams::random(cfg.layers, n_qubits, head_seed(cfg.seed, h)),
                cfg.learning_rate,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let head_test_labels: Vec<Vec<f64>> = head_classes
        .iter()
        .map(|&c| {
            binary(&test_labels, c)
                .into_iter()
                .map(|y| y as f64)
                .collect()
        })
        .collect();

    let mut train_loss = Vec::with_capacity(cfg.epochs);
    let mut val_loss = Vec::with_capacity(cfg.epochs);
    let mut val_accuracy = Vec::with_capacity(cfg.epochs);
    let mut last_head_metrics = Vec::new();
    for epoch in 1..=cfg.epochs {
        let mut losses = Vec::with_capacity(heads.len());
        for head in &mut heads {
            let loss = head.step()?;
            if !loss.is_finite() {
                return Err(Error::Training {
                    epoch,
                    message: format!("training loss is {loss}"),
                });
            }
            losses.push(loss);
        }
        let head_probs = heads
            .iter()
            .map(|h| test_model.probabilities(h.params()))
            .collect::<Result<Vec<_>>>()?;
        let head_val_loss = head_probs
            .iter()
            .zip(&head_test_labels)
            .map(|(p, y)| bce_loss(p, y))
            .collect::<Result<Vec<_>>>()?;
        let accuracy = if one_vs_rest {
            let correct = (0..test_labels.len())
                .filter(|&i| {
                    let scores: Vec<f64> = head_probs.iter().map(|p| p[i]).collect();
                    head_classes[argmax_lowest(&scores)] == test_labels[i]
                })
                .count();
            correct as f64 / test_labels.len() as f64
        } else {
            evaluate(&head_probs[0], &binary(&test_labels, 1))?
        };
        train_loss.push(mean(&losses));
        val_loss.push(mean(&head_val_loss));
        val_accuracy.push(accuracy);

        if epoch == cfg.epochs {
            last_head_metrics = head_classes
                .iter()
                .enumerate()
                .map(|(h, &class)| {
                    Ok(HeadSummary {
                        class,
                        final_train_loss: losses[h],
                        final_val_loss: head_val_loss[h],
                        final_val_accuracy: evaluate(&head_probs[h], &binary(&test_labels, class))?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        }
    }

    let mut notes = Vec::new();
    if one_vs_rest {
        notes.push(format!(
            "multi-class handled by one-vs-rest over {} binary heads (interpretation; the binary loss has no native multi-class form)",
            ds.class_count
        ));
    }
    notes.push("held-out split serves as both validation and test set".into());

    Ok(TrainReport {
        config: cfg.clone(),
        seed: cfg.seed,
        dataset: DatasetSummary {
            name: ds.name.clone(),
            n_graphs: ds.len(),
            class_count: ds.class_count,
            n_train: train_idx.len(),
            n_test: test_idx.len(),
            n_qubits,
            excluded_oversize: 0,
            excluded_degenerate: 0,
        },
        final_test_accuracy: *val_accuracy.last().expect("epochs ≥ 1"),
        train_loss,
        val_loss,
        val_accuracy,
        heads: last_head_metrics,
        parameters: heads.into_iter().map(|h| h.params).collect(),
        notes,
        wall_time_seconds: started.elapsed().as_secs_f64(),
    })
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
