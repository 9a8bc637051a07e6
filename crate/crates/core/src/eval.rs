//! MCAR masking, scoring and a small experiment runner.
//!
//! All randomness comes from ChaCha8 streams seeded with `u64` values
//! (`rand_chacha::ChaCha8Rng::seed_from_u64`). The master seed of an
//! experiment feeds one stream from which every trial seed is drawn in
//! order (rates outer, trials inner), so every method sees the same masks.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::classify::{classify_mapped, fit_classification_model};
use crate::dataset::{load_dataset, AttributeSpec, Cell, Dataset, Record, Schema};
use crate::error::{Error, Result};
use crate::impute::{impute_dataset, ImputeConfig, NearestMode};
use crate::kmeans::InitPolicy;
use crate::mapping::squared_euclidean;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskedCell {
    pub record_id: String,
    pub attribute: usize,
    pub truth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskPlan {
    pub seed: u64,
    pub rate: f64,
    pub cells: Vec<MaskedCell>,
}

fn require_complete(dataset: &Dataset) -> Result<()> {
    match dataset.records.iter().find(|r| !r.is_complete()) {
        Some(r) => Err(Error::Config(format!(
            "masking needs complete data; `{}` already has missing cells",
            r.id
        ))),
        None => Ok(()),
    }
}

/// Masks `round(rate * m * n)` uniformly chosen cells, never the last
/// observed cell of a record.
pub fn inject_mcar(dataset: &Dataset, rate: f64, seed: u64) -> Result<(Dataset, MaskPlan)> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::Config(format!("masking rate {rate} is outside (0, 1)")));
    }
    require_complete(dataset)?;
    let m = dataset.len();
    let n = dataset.arity();
    let target = (rate * (m * n) as f64).round() as usize;
    if target > m * (n - 1) {
        return Err(Error::Config(format!(
            "rate {rate} would need {target} masked cells but at most {} leave every record observed",
            m * (n - 1)
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..n).map(move |k| (i, k))).collect();
    order.shuffle(&mut rng);

    let mut per_record = vec![0usize; m];
    let mut chosen = Vec::with_capacity(target);
    for (i, k) in order {
        if chosen.len() == target {
            break;
        }
        if per_record[i] + 1 < n {
            per_record[i] += 1;
            chosen.push((i, k));
        }
    }
    chosen.sort_unstable();
    Ok(apply_mask(dataset, &chosen, seed, rate))
}

/// Masks exactly the listed `(record id, attribute index)` cells.
pub fn mask_cells(dataset: &Dataset, cells: &[(String, usize)]) -> Result<(Dataset, MaskPlan)> {
    require_complete(dataset)?;
    let mut chosen = Vec::with_capacity(cells.len());
    for (id, k) in cells {
        let i = dataset
            .records
            .iter()
            .position(|r| &r.id == id)
            .ok_or_else(|| Error::Config(format!("unknown record `{id}` in mask plan")))?;
        if *k >= dataset.arity() {
            return Err(Error::Config(format!("attribute index {k} out of range")));
        }
        chosen.push((i, *k));
    }
    chosen.sort_unstable();
    chosen.dedup();
    let mut per_record = BTreeMap::new();
    for &(i, _) in &chosen {
        *per_record.entry(i).or_insert(0usize) += 1;
    }
    if let Some((&i, _)) = per_record.iter().find(|(_, &c)| c == dataset.arity()) {
        return Err(Error::Config(format!(
            "mask plan hides every cell of `{}`",
            dataset.records[i].id
        )));
    }
    let rate = chosen.len() as f64 / (dataset.len() * dataset.arity()) as f64;
    Ok(apply_mask(dataset, &chosen, 0, rate))
}

fn apply_mask(dataset: &Dataset, chosen: &[(usize, usize)], seed: u64, rate: f64) -> (Dataset, MaskPlan) {
    let mut masked = dataset.clone();
    let cells = chosen
        .iter()
        .map(|&(i, k)| {
            let record = &mut masked.records[i];
            let truth = record.cells[k].value().expect("dataset is complete");
            record.cells[k] = Cell::Missing;
            MaskedCell {
                record_id: record.id.clone(),
                attribute: k,
                truth,
            }
        })
        .collect();
    (masked, MaskPlan { seed, rate, cells })
}

/// Puts the true values back.
pub fn unmask(masked: &Dataset, plan: &MaskPlan) -> Result<Dataset> {
    let mut out = masked.clone();
    for cell in &plan.cells {
        let record = out
            .records
            .iter_mut()
            .find(|r| r.id == cell.record_id)
            .ok_or_else(|| Error::Scoring(format!("record `{}` not in dataset", cell.record_id)))?;
        record.cells[cell.attribute] = Cell::Present(cell.truth);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputationScore {
    pub numeric_cells: usize,
    pub categorical_cells: usize,
    pub numeric_rmse: Option<f64>,
    pub categorical_accuracy: Option<f64>,
}

pub fn score_imputation(plan: &MaskPlan, completed: &Dataset) -> Result<ImputationScore> {
    let mut sq = 0.0;
    let mut numeric = 0usize;
    let mut hits = 0usize;
    let mut categorical = 0usize;
    for cell in &plan.cells {
        let record = completed
            .record(&cell.record_id)
            .ok_or_else(|| Error::Scoring(format!("record `{}` missing from output", cell.record_id)))?;
        let value = record.cells[cell.attribute].value().ok_or_else(|| {
            Error::Scoring(format!(
                "cell {} of `{}` was not filled",
                cell.attribute, cell.record_id
            ))
        })?;
        if completed.schema.attributes[cell.attribute].is_categorical() {
            categorical += 1;
            hits += (value == cell.truth) as usize;
        } else {
            numeric += 1;
            sq += (value - cell.truth).powi(2);
        }
    }
    Ok(ImputationScore {
        numeric_cells: numeric,
        categorical_cells: categorical,
        numeric_rmse: (numeric > 0).then(|| (sq / numeric as f64).sqrt()),
        categorical_accuracy: (categorical > 0).then(|| hits as f64 / categorical as f64),
    })
}

/// Imputation methods the harness can compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClusterMap(NearestMode),
    /// Per-class mean for numeric cells, per-class mode for categorical.
    ClassMeanMode,
    /// Copy from the complete record nearest over the observed coordinates.
    RawKnnDonor,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::ClusterMap(NearestMode::PaperSigned),
        Method::ClusterMap(NearestMode::Absolute),
        Method::ClassMeanMode,
        Method::RawKnnDonor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::ClusterMap(NearestMode::PaperSigned) => "cluster-map-paper-signed",
            Method::ClusterMap(NearestMode::Absolute) => "cluster-map-absolute",
            Method::ClassMeanMode => "class-mean-mode",
            Method::RawKnnDonor => "raw-knn-donor",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}`")))
    }
}

/// Fills every missing cell of `dataset` with `method`.
pub fn impute_with(method: Method, dataset: &Dataset, k: Option<usize>, init: &InitPolicy) -> Result<Dataset> {
    match method {
        Method::ClusterMap(mode) => {
            let config = ImputeConfig {
                k,
                init: init.clone(),
                mode,
                ..Default::default()
            };
            Ok(impute_dataset(dataset, &config)?.completed)
        }
        Method::ClassMeanMode => class_mean_mode(dataset),
        Method::RawKnnDonor => raw_knn_donor(dataset),
    }
}

fn class_mean_mode(dataset: &Dataset) -> Result<Dataset> {
    let n = dataset.arity();
    let fill_value = |values: &[f64], categorical: bool| -> Option<f64> {
        if values.is_empty() {
            return None;
        }
        if categorical {
            let mut counts: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
            for &v in values {
                counts.entry(v.to_bits()).or_insert((v, 0)).1 += 1;
            }
            counts
                .values()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.total_cmp(&a.0)))
                .map(|&(v, _)| v)
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    };
    let observed = |label: Option<&str>, k: usize| -> Vec<f64> {
        dataset
            .records
            .iter()
            .filter(|r| label.is_none() || r.label.as_deref() == label)
            .filter_map(|r| r.cells[k].value())
            .collect()
    };

    let mut out = dataset.clone();
    for record in &mut out.records {
        for k in record.missing_indices() {
            let categorical = dataset.schema.attributes[k].is_categorical();
            let value = fill_value(&observed(record.label.as_deref(), k), categorical)
                .or_else(|| fill_value(&observed(None, k), categorical))
                .ok_or_else(|| Error::InsufficientData(format!("attribute {k} is never observed")))?;
            record.cells[k] = Cell::Present(value);
        }
        debug_assert_eq!(record.cells.len(), n);
    }
    Ok(out)
}

fn raw_knn_donor(dataset: &Dataset) -> Result<Dataset> {
    let donors: Vec<&Record> = dataset.records.iter().filter(|r| r.is_complete()).collect();
    if donors.is_empty() {
        return Err(Error::NoDonors("no complete record to copy from".into()));
    }
    let mut out = dataset.clone();
    for record in out.records.iter_mut().filter(|r| !r.is_complete()) {
        let observed: Vec<usize> = (0..record.cells.len())
            .filter(|&k| !record.cells[k].is_missing())
            .collect();
        let q: Vec<f64> = observed.iter().map(|&k| record.cells[k].value().unwrap()).collect();
        let mut best = (0usize, f64::INFINITY);
        for (i, d) in donors.iter().enumerate() {
            let p: Vec<f64> = observed.iter().map(|&k| d.cells[k].value().unwrap()).collect();
            let dist = squared_euclidean(&p, &q);
            if dist < best.1 {
                best = (i, dist);
            }
        }
        let donor = donors[best.0];
        for k in record.missing_indices() {
            record.cells[k] = donor.cells[k];
        }
    }
    Ok(out)
}

/// Gaussian blobs with one cluster per class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub clusters: usize,
    pub per_cluster: usize,
    pub numeric_attributes: usize,
    /// Adds one categorical attribute whose symbol agrees with the cluster
    /// for 80% of records.
    pub categorical_attribute: bool,
    pub spread: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            clusters: 3,
            per_cluster: 20,
            numeric_attributes: 3,
            categorical_attribute: true,
            spread: 1.0,
            seed: 7,
        }
    }
}

pub fn synthetic_dataset(spec: &SyntheticSpec) -> Result<Dataset> {
    if spec.clusters == 0 || spec.per_cluster == 0 || spec.numeric_attributes == 0 {
        return Err(Error::Config(
            "synthetic dataset needs clusters, records and attributes".into(),
        ));
    }
    let noise = Normal::new(0.0, spec.spread).map_err(|e| Error::Config(format!("bad spread: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let centers: Vec<Vec<f64>> = (0..spec.clusters)
        .map(|_| {
            (0..spec.numeric_attributes)
                .map(|_| rng.random_range(0.0..10.0))
                .collect()
        })
        .collect();

    let mut attributes: Vec<AttributeSpec> = (0..spec.numeric_attributes)
        .map(|j| AttributeSpec::numeric(format!("x{}", j + 1)))
        .collect();
    if spec.categorical_attribute {
        let symbols = (0..spec.clusters).map(|c| format!("g{}", c + 1)).collect();
        attributes.push(AttributeSpec::categorical("grade", Some(symbols)));
    }
    let schema = Schema::new(attributes).with_id_column("id").with_label_column("class");

    let mut records = Vec::new();
    for (c, center) in centers.iter().enumerate() {
        for i in 0..spec.per_cluster {
            let mut cells: Vec<Cell> = center
                .iter()
                .map(|mu| Cell::Present(mu + noise.sample(&mut rng)))
                .collect();
            if spec.categorical_attribute {
                let ordinal = if rng.random_bool(0.8) {
                    c + 1
                } else {
                    rng.random_range(1..=spec.clusters)
                };
                cells.push(Cell::Present(ordinal as f64));
            }
            records.push(Record::new(
                format!("S{}-{}", c + 1, i + 1),
                cells,
                Some(format!("C{}", c + 1)),
            ));
        }
    }
    Dataset::new(schema, records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DatasetSource {
    Synthetic(SyntheticSpec),
    /// Paths are resolved against the experiment file's directory.
    File {
        data: String,
        schema: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannedCell {
    pub record: String,
    pub attribute: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    pub methods: Vec<String>,
    #[serde(default)]
    pub rates: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// Fraction of records held out (complete) for downstream classification.
    #[serde(default)]
    pub holdout_fraction: f64,
    #[serde(default)]
    pub k: Option<usize>,
    /// Fixed clustering initialisation; otherwise farthest-first seeded per trial.
    #[serde(default)]
    pub init: Option<InitPolicy>,
    /// Mask exactly these cells instead of sampling. Replaces `rates`.
    #[serde(default)]
    pub explicit_plan: Option<Vec<PlannedCell>>,
}

impl ExperimentConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn parsed_methods(&self) -> Result<Vec<Method>> {
        self.methods.iter().map(|m| m.parse()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub method: String,
    pub rate: f64,
    pub trial: usize,
    pub seed: u64,
    pub masked_cells: usize,
    pub numeric_rmse: Option<f64>,
    pub categorical_accuracy: Option<f64>,
    pub classification_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub rate: f64,
    pub trials: usize,
    pub mean_numeric_rmse: Option<f64>,
    pub mean_categorical_accuracy: Option<f64>,
    pub mean_classification_accuracy: Option<f64>,
}

/// Every number in a report is generated by this harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub master_seed: u64,
    pub trials: Vec<TrialResult>,
    pub summary: Vec<MethodSummary>,
}

impl EvaluationReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn summary_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut out = String::from(
            "method,rate,trials,mean_numeric_rmse,mean_categorical_accuracy,mean_classification_accuracy\n",
        );
        for s in &self.summary {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                s.method,
                s.rate,
                s.trials,
                opt(s.mean_numeric_rmse),
                opt(s.mean_categorical_accuracy),
                opt(s.mean_classification_accuracy)
            ));
        }
        out
    }

    pub fn results_for(&self, method: Method) -> impl Iterator<Item = &TrialResult> {
        self.trials.iter().filter(move |t| t.method == method.name())
    }
}

pub fn load_experiment_dataset(source: &DatasetSource, base_dir: &Path) -> Result<Dataset> {
    match source {
        DatasetSource::Synthetic(spec) => synthetic_dataset(spec),
        DatasetSource::File { data, schema } => {
            let schema = Schema::load(base_dir.join(schema))?;
            load_dataset(base_dir.join(data), &schema)
        }
    }
}

pub fn run_experiment(config: &ExperimentConfig, base_dir: &Path) -> Result<EvaluationReport> {
    let methods = config.parsed_methods()?;
    let dataset = load_experiment_dataset(&config.dataset, base_dir)?;
    run_experiment_on(&dataset, config, &methods)
}

/// Runs every (rate, trial, method) combination on `dataset`.
pub fn run_experiment_on(dataset: &Dataset, config: &ExperimentConfig, methods: &[Method]) -> Result<EvaluationReport> {
    if !(0.0..1.0).contains(&config.holdout_fraction) {
        return Err(Error::Config("holdout_fraction must be in [0, 1)".into()));
    }
    require_complete(dataset)?;
    let rates: Vec<f64> = match &config.explicit_plan {
        Some(plan) => {
            vec![plan.len() as f64 / (dataset.len() * dataset.arity()) as f64]
        }
        None => config.rates.clone(),
    };

    let mut master = ChaCha8Rng::seed_from_u64(config.master_seed);
    let mut trials = Vec::new();
    for &rate in &rates {
        for trial in 0..config.trials {
            let seed = master.next_u64();
            let mut trial_rng = ChaCha8Rng::seed_from_u64(seed);
            let (work, holdout) = holdout_split(dataset, config.holdout_fraction, &mut trial_rng)?;
            let (masked, plan) = match &config.explicit_plan {
                Some(cells) => {
                    let cells: Vec<(String, usize)> = cells.iter().map(|c| (c.record.clone(), c.attribute)).collect();
                    mask_cells(&work, &cells)?
                }
                None => inject_mcar(&work, rate, trial_rng.next_u64())?,
            };
            let init = config.init.clone().unwrap_or(InitPolicy::FarthestFirst { seed });
            for &method in methods {
                let completed = impute_with(method, &masked, config.k, &init)?;
                let score = score_imputation(&plan, &completed)?;
                let classification_accuracy = downstream_accuracy(&completed, &holdout, seed)?;
                trials.push(TrialResult {
                    method: method.name().to_string(),
                    rate,
                    trial,
                    seed,
                    masked_cells: plan.cells.len(),
                    numeric_rmse: score.numeric_rmse,
                    categorical_accuracy: score.categorical_accuracy,
                    classification_accuracy,
                });
            }
        }
    }

    let summary = rates
        .iter()
        .flat_map(|&rate| methods.iter().map(move |&m| (m, rate)))
        .map(|(m, rate)| {
            let rows: Vec<&TrialResult> = trials
                .iter()
                .filter(|t| t.method == m.name() && t.rate == rate)
                .collect();
            let mean = |f: fn(&TrialResult) -> Option<f64>| {
                let vals: Vec<f64> = rows.iter().filter_map(|t| f(t)).collect();
                (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
            };
            MethodSummary {
                method: m.name().to_string(),
                rate,
                trials: rows.len(),
                mean_numeric_rmse: mean(|t| t.numeric_rmse),
                mean_categorical_accuracy: mean(|t| t.categorical_accuracy),
                mean_classification_accuracy: mean(|t| t.classification_accuracy),
            }
        })
        .collect();

    Ok(EvaluationReport {
        master_seed: config.master_seed,
        trials,
        summary,
    })
}

fn holdout_split(dataset: &Dataset, fraction: f64, rng: &mut ChaCha8Rng) -> Result<(Dataset, Vec<Record>)> {
    let count = (fraction * dataset.len() as f64).round() as usize;
    if count == 0 {
        return Ok((dataset.clone(), Vec::new()));
    }
    let mut idx: Vec<usize> = (0..dataset.len()).collect();
    idx.shuffle(rng);
    let mut held: Vec<usize> = idx[..count].to_vec();
    held.sort_unstable();
    let mut holdout = Vec::with_capacity(count);
    let mut work = Vec::with_capacity(dataset.len() - count);
    for (i, r) in dataset.records.iter().enumerate() {
        if held.binary_search(&i).is_ok() {
            holdout.push(r.clone());
        } else {
            work.push(r.clone());
        }
    }
    Ok((Dataset::new(dataset.schema.clone(), work)?, holdout))
}

/// Accuracy of the mapped classifier (absolute mode) trained on the
/// completed data, on the held-out records.
fn downstream_accuracy(training: &Dataset, holdout: &[Record], seed: u64) -> Result<Option<f64>> {
    if holdout.is_empty() || !training.is_labeled() || training.class_count() == 0 {
        return Ok(None);
    }
    let model = fit_classification_model(training, None, &InitPolicy::FarthestFirst { seed })?;
    let mut correct = 0usize;
    for record in holdout {
        let query = Record::new(record.id.clone(), record.cells.clone(), None);
        let out = classify_mapped(&query, training, &model, NearestMode::Absolute)?;
        correct += (out.single_label() == record.label.as_deref()) as usize;
    }
    Ok(Some(correct as f64 / holdout.len() as f64))
}
