//! Donor selection on the scalar mapping and filling of missing cells.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{decode, split_groups, AttributeSpec, Cell, Dataset, MinMaxScaler, Record};
use crate::error::{Error, Result};
use crate::kmeans::{cluster, ClusterModel, InitPolicy};
use crate::mapping::{MappingTable, Type2Scaling};

/// Rule for picking the nearest donor from the signed differences
/// `d = Map(donor) - Map'(query)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NearestMode {
    /// Smallest signed difference. Because the query's mapping is a constant
    /// shift, this picks the same donor for every query.
    PaperSigned,
    /// Smallest absolute difference: nearest neighbour on the scalar.
    #[default]
    Absolute,
}

impl NearestMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NearestMode::PaperSigned => "paper-signed",
            NearestMode::Absolute => "absolute",
        }
    }
}

impl fmt::Display for NearestMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NearestMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-signed" => Ok(NearestMode::PaperSigned),
            "absolute" => Ok(NearestMode::Absolute),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Signed differences between every donor mapping and every query mapping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceTable {
    pub donor_ids: Vec<String>,
    pub query_ids: Vec<String>,
    /// `values[q][i]` is the difference for query `q` and donor `i`.
    pub values: Vec<Vec<f64>>,
}

impl DifferenceTable {
    pub fn column(&self, query_id: &str) -> Option<&[f64]> {
        let q = self.query_ids.iter().position(|id| id == query_id)?;
        Some(&self.values[q])
    }

    pub fn entry(&self, donor_id: &str, query_id: &str) -> Option<f64> {
        let i = self.donor_ids.iter().position(|id| id == donor_id)?;
        self.column(query_id).map(|col| col[i])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("query,donor,difference\n");
        for (q, col) in self.query_ids.iter().zip(&self.values) {
            for (i, v) in self.donor_ids.iter().zip(col) {
                out.push_str(&format!("{q},{i},{v}\n"));
            }
        }
        out
    }
}

pub fn difference_table(maps: &MappingTable) -> Result<DifferenceTable> {
    if maps.complete_map.is_empty() {
        return Err(Error::NoDonors("the mapping table has no complete records".into()));
    }
    let values = maps
        .query_map
        .iter()
        .map(|&(_, q)| maps.complete_map.iter().map(|&(_, m)| m - q).collect())
        .collect();
    Ok(DifferenceTable {
        donor_ids: maps.complete_map.iter().map(|(id, _)| id.clone()).collect(),
        query_ids: maps.query_map.iter().map(|(id, _)| id.clone()).collect(),
        values,
    })
}

/// Indices of the minimal entries of `values` under `mode`. Exact ties are
/// all returned, in input order.
pub fn argmin_by_mode(values: &[f64], mode: NearestMode) -> Vec<usize> {
    let key = |v: f64| match mode {
        NearestMode::PaperSigned => v,
        NearestMode::Absolute => v.abs(),
    };
    let best = values.iter().map(|&v| key(v)).fold(f64::INFINITY, f64::min);
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| key(v) == best)
        .map(|(i, _)| i)
        .collect()
}

/// Donor ids nearest to `query_id`.
pub fn nearest_record(table: &DifferenceTable, query_id: &str, mode: NearestMode) -> Result<Vec<String>> {
    let column = table
        .column(query_id)
        .ok_or_else(|| Error::Domain(format!("query `{query_id}` is not in the difference table")))?;
    Ok(argmin_by_mode(column, mode)
        .into_iter()
        .map(|i| table.donor_ids[i].clone())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiePolicy {
    SingleDonor,
    /// Most frequent value among complete records of the donors' class.
    ModalSameClass,
    /// Mean among complete records of the donors' class.
    MeanSameClass,
}

impl TiePolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            TiePolicy::SingleDonor => "single-donor",
            TiePolicy::ModalSameClass => "modal-same-class",
            TiePolicy::MeanSameClass => "mean-same-class",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilledValue {
    pub value: f64,
    pub policy: TiePolicy,
}

/// Value for one missing cell given the nearest donors.
///
/// `donor_maps[i]` is the mapping value of `donors[i]`; it only matters
/// when tied donors disagree on the class and the class counts also tie.
pub fn impute_cell(
    query: &Record,
    attr: usize,
    spec: &AttributeSpec,
    donors: &[&Record],
    donor_maps: &[f64],
    g1: &[Record],
) -> Result<FilledValue> {
    if !query.cells.get(attr).is_some_and(|c| c.is_missing()) {
        return Err(Error::Contract(format!("cell {attr} of `{}` is not missing", query.id)));
    }
    let value_of = |r: &Record| {
        r.cells[attr]
            .value()
            .ok_or_else(|| Error::Contract(format!("donor `{}` is incomplete", r.id)))
    };
    match donors {
        [] => Err(Error::NoDonors(format!("no donor for `{}`", query.id))),
        [single] => Ok(FilledValue {
            value: value_of(single)?,
            policy: TiePolicy::SingleDonor,
        }),
        many => {
            let pool: Vec<&Record> = match donor_class(many, donor_maps) {
                Some(class) => g1
                    .iter()
                    .filter(|r| r.label.as_deref() == Some(class.as_str()))
                    .collect(),
                None => many.to_vec(),
            };
            let values = pool.iter().map(|r| value_of(r)).collect::<Result<Vec<_>>>()?;
            if spec.is_categorical() {
                Ok(FilledValue {
                    value: mode_of(&values),
                    policy: TiePolicy::ModalSameClass,
                })
            } else {
                Ok(FilledValue {
                    value: values.iter().sum::<f64>() / values.len() as f64,
                    policy: TiePolicy::MeanSameClass,
                })
            }
        }
    }
}

/// Majority class among tied donors; a count tie goes to the class of the
/// donor with the lowest mapping value. `None` if no donor is labeled.
fn donor_class(donors: &[&Record], donor_maps: &[f64]) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for d in donors {
        if let Some(l) = &d.label {
            *counts.entry(l).or_default() += 1;
        }
    }
    let top = *counts.values().max()?;
    let leaders: Vec<&str> = counts.iter().filter(|(_, &c)| c == top).map(|(l, _)| *l).collect();
    if leaders.len() == 1 {
        return Some(leaders[0].to_string());
    }
    donors
        .iter()
        .zip(donor_maps)
        .filter(|(d, _)| d.label.as_deref().is_some_and(|l| leaders.contains(&l)))
        .min_by(|a, b| a.1.total_cmp(b.1))
        .and_then(|(d, _)| d.label.clone())
}

/// Most frequent value; the smallest wins a frequency tie.
fn mode_of(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut best = (sorted[0], 0usize);
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&v| v == sorted[i]).count();
        if j > best.1 {
            best = (sorted[i], j);
        }
        i += j;
    }
    best.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ImputeConfig {
    /// Number of clusters; defaults to the number of decision classes.
    pub k: Option<usize>,
    pub init: InitPolicy,
    pub mode: NearestMode,
    pub type2_scaling: Type2Scaling,
    /// Cluster and map on min-max scaled values. Filled values still come
    /// from the unscaled donors.
    pub min_max_scale: bool,
}

impl Default for ImputeConfig {
    fn default() -> Self {
        Self {
            k: None,
            init: InitPolicy::default(),
            mode: NearestMode::Absolute,
            type2_scaling: Type2Scaling::None,
            min_max_scale: false,
        }
    }
}

/// Provenance of one filled cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputedCell {
    pub query_id: String,
    pub attribute: String,
    pub attribute_index: usize,
    pub donors: Vec<String>,
    pub value: f64,
    pub decoded: String,
    pub mode: NearestMode,
    pub policy: TiePolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputationResult {
    pub completed: Dataset,
    pub cells: Vec<ImputedCell>,
    /// `None` when there was nothing to impute.
    pub model: Option<ClusterModel>,
    pub mapping: Option<MappingTable>,
    pub differences: Option<DifferenceTable>,
}

impl ImputationResult {
    pub fn provenance_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "query_id",
            "attribute",
            "donors",
            "value",
            "decoded",
            "mode",
            "tie_policy",
        ])?;
        for c in &self.cells {
            w.write_record([
                c.query_id.as_str(),
                c.attribute.as_str(),
                c.donors.join(" ").as_str(),
                c.value.to_string().as_str(),
                c.decoded.as_str(),
                c.mode.as_str(),
                c.policy.as_str(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
    }
}

/// Runs split, clustering, mapping, donor search and filling.
///
/// Every incomplete record is matched against the original complete group;
/// filled records never become donors. All missing cells of a record come
/// from the same donor decision.
pub fn impute_dataset(dataset: &Dataset, config: &ImputeConfig) -> Result<ImputationResult> {
    let split = split_groups(dataset);
    if split.g2.is_empty() {
        return Ok(ImputationResult {
            completed: dataset.clone(),
            cells: Vec::new(),
            model: None,
            mapping: None,
            differences: None,
        });
    }
    if let Some(empty) = split.g2.iter().find(|r| r.observed_count() == 0) {
        return Err(Error::EmptyRecord(empty.id.clone()));
    }
    if split.g1.is_empty() {
        return Err(Error::NoDonors("every record has a missing cell".into()));
    }
    let k = match config.k {
        Some(k) => k,
        None if dataset.class_count() > 0 => dataset.class_count(),
        None => {
            return Err(Error::Config(
                "k was not given and the dataset has no class labels".into(),
            ))
        }
    };

    let (geo_g1, geo_g2) = if config.min_max_scale {
        let scaler = MinMaxScaler::fit(dataset);
        (
            split.g1.iter().map(|r| scaler.transform_record(r)).collect(),
            split.g2.iter().map(|r| scaler.transform_record(r)).collect(),
        )
    } else {
        (split.g1.clone(), split.g2.clone())
    };

    let model = cluster(&geo_g1, k, &config.init)?;
    let mapping = MappingTable::build(&geo_g1, &geo_g2, &model, config.type2_scaling, "imputation")?;
    let differences = difference_table(&mapping)?;

    let mut filled: BTreeMap<String, Record> = BTreeMap::new();
    let mut cells = Vec::new();
    for query in &split.g2 {
        let column = differences.column(&query.id).expect("every query has a column");
        let nearest = argmin_by_mode(column, config.mode);
        let donors: Vec<&Record> = nearest.iter().map(|&i| &split.g1[i]).collect();
        let donor_maps: Vec<f64> = nearest.iter().map(|&i| mapping.complete_map[i].1).collect();
        let donor_ids: Vec<String> = donors.iter().map(|d| d.id.clone()).collect();

        let mut completed = query.clone();
        for attr in query.missing_indices() {
            let spec = &dataset.schema.attributes[attr];
            let fill = impute_cell(query, attr, spec, &donors, &donor_maps, &split.g1)?;
            completed.cells[attr] = Cell::Present(fill.value);
            cells.push(ImputedCell {
                query_id: query.id.clone(),
                attribute: spec.name.clone(),
                attribute_index: attr,
                donors: donor_ids.clone(),
                value: fill.value,
                decoded: decode(fill.value, spec)?.to_string(),
                mode: config.mode,
                policy: fill.policy,
            });
        }
        filled.insert(query.id.clone(), completed);
    }

    let records = dataset
        .records
        .iter()
        .map(|r| filled.remove(&r.id).unwrap_or_else(|| r.clone()))
        .collect();
    Ok(ImputationResult {
        completed: Dataset::new(dataset.schema.clone(), records)?,
        cells,
        model: Some(model),
        mapping: Some(mapping),
        differences: Some(differences),
    })
}
