//! Labelling new records: through the scalar mapping, and by plain
//! full-dimensional 1-NN for comparison.

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Record};
use crate::error::{Error, Result};
use crate::impute::{argmin_by_mode, NearestMode};
use crate::kmeans::{cluster, ClusterModel, InitPolicy};
use crate::mapping::{euclidean, map_complete, map_query};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub query_id: String,
    /// Labels of the nearest records, in the dataset's class order.
    pub labels: Vec<String>,
    pub nearest: Vec<String>,
    /// Per training record: the mapping difference (mapped mode) or the
    /// Euclidean distance (raw kNN).
    pub distances: Vec<(String, f64)>,
    /// More than one nearest record.
    pub tie: bool,
}

impl ClassificationResult {
    /// The label when exactly one was predicted.
    pub fn single_label(&self) -> Option<&str> {
        match self.labels.as_slice() {
            [one] => Some(one),
            _ => None,
        }
    }
}

fn check_training(training: &Dataset) -> Result<()> {
    if training.is_empty() {
        return Err(Error::NoDonors("the training set is empty".into()));
    }
    if let Some(r) = training.records.iter().find(|r| r.label.is_none()) {
        return Err(Error::Unlabeled(format!("training record `{}` has no label", r.id)));
    }
    if let Some(r) = training.records.iter().find(|r| !r.is_complete()) {
        return Err(Error::Contract(format!(
            "training record `{}` has missing cells; impute first",
            r.id
        )));
    }
    Ok(())
}

fn check_query(query: &Record, training: &Dataset) -> Result<()> {
    if query.cells.len() != training.arity() {
        return Err(Error::Domain(format!(
            "query `{}` has arity {}, training data has {}",
            query.id,
            query.cells.len(),
            training.arity()
        )));
    }
    if !query.is_complete() {
        return Err(Error::Contract(format!("query `{}` has missing cells", query.id)));
    }
    Ok(())
}

fn result(
    query: &Record,
    training: &Dataset,
    nearest: Vec<usize>,
    distances: Vec<(String, f64)>,
) -> ClassificationResult {
    let mut labels: Vec<String> = nearest
        .iter()
        .filter_map(|&i| training.records[i].label.clone())
        .collect();
    labels.sort_by_key(|l| training.classes.iter().position(|c| c == l));
    labels.dedup();
    ClassificationResult {
        query_id: query.id.clone(),
        labels,
        tie: nearest.len() > 1,
        nearest: nearest.iter().map(|&i| training.records[i].id.clone()).collect(),
        distances,
    }
}

/// Clusters every training record into as many clusters as there are
/// classes (or `k`), the model used by [`classify_mapped`].
pub fn fit_classification_model(training: &Dataset, k: Option<usize>, init: &InitPolicy) -> Result<ClusterModel> {
    check_training(training)?;
    cluster(&training.records, k.unwrap_or(training.class_count()), init)
}

/// Label of the training record whose mapping is nearest to the query's.
pub fn classify_mapped(
    query: &Record,
    training: &Dataset,
    model: &ClusterModel,
    mode: NearestMode,
) -> Result<ClassificationResult> {
    check_training(training)?;
    check_query(query, training)?;
    let query_map = map_query(query, model)?;
    let diffs = training
        .records
        .iter()
        .map(|r| Ok((r.id.clone(), map_complete(r, model)? - query_map)))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = diffs.iter().map(|d| d.1).collect();
    Ok(result(query, training, argmin_by_mode(&values, mode), diffs))
}

/// Plain 1-NN on the full attribute vectors. All equidistant records are
/// kept, so the answer can carry several labels.
pub fn classify_raw_knn(query: &Record, training: &Dataset) -> Result<ClassificationResult> {
    check_training(training)?;
    check_query(query, training)?;
    let q = query.values().expect("checked complete");
    let distances: Vec<(String, f64)> = training
        .records
        .iter()
        .map(|r| (r.id.clone(), euclidean(&r.values().expect("checked complete"), &q)))
        .collect();
    let values: Vec<f64> = distances.iter().map(|d| d.1).collect();
    let nearest = argmin_by_mode(&values, NearestMode::PaperSigned);
    Ok(result(query, training, nearest, distances))
}
