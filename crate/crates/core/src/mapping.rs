//! Cluster-center distances and the scalar mapping of records.
//!
//! A complete record is reduced to the sum of its Euclidean distances to
//! every centroid. A record with missing cells is reduced the same way,
//! except that each distance only runs over the observed coordinates
//! (missing terms are dropped, not rescaled). The two kinds of distance
//! are called Type-1 and Type-2 below.

use serde::{Deserialize, Serialize};

use crate::dataset::{Cell, Record};
use crate::error::{Error, Result};
use crate::kmeans::ClusterModel;

pub fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

/// Optional correction applied to Type-2 distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Type2Scaling {
    /// Missing coordinates are dropped and nothing else changes.
    #[default]
    None,
    /// Multiply by `sqrt(n / observed)` so partially observed records are
    /// not systematically closer to every centroid.
    ObservedRatio,
}

fn check_arity(record: &Record, centroid: &[f64]) -> Result<()> {
    if record.cells.len() != centroid.len() {
        return Err(Error::Domain(format!(
            "record `{}` has arity {}, centroid has {}",
            record.id,
            record.cells.len(),
            centroid.len()
        )));
    }
    Ok(())
}

/// Euclidean distance from a complete record to a centroid.
pub fn type1_distance(record: &Record, centroid: &[f64]) -> Result<f64> {
    check_arity(record, centroid)?;
    let values = record
        .values()
        .ok_or_else(|| Error::Contract(format!("Type-1 distance on incomplete record `{}`", record.id)))?;
    Ok(euclidean(&values, centroid))
}

/// Euclidean distance over the observed coordinates only.
pub fn type2_distance(record: &Record, centroid: &[f64]) -> Result<f64> {
    type2_distance_scaled(record, centroid, Type2Scaling::None)
}

pub fn type2_distance_scaled(record: &Record, centroid: &[f64], scaling: Type2Scaling) -> Result<f64> {
    check_arity(record, centroid)?;
    let mut sum = 0.0;
    let mut observed = 0usize;
    for (cell, mu) in record.cells.iter().zip(centroid) {
        if let Cell::Present(v) = cell {
            sum += (v - mu) * (v - mu);
            observed += 1;
        }
    }
    if observed == 0 {
        return Err(Error::EmptyRecord(record.id.clone()));
    }
    let d = sum.sqrt();
    Ok(match scaling {
        Type2Scaling::None => d,
        Type2Scaling::ObservedRatio => d * (centroid.len() as f64 / observed as f64).sqrt(),
    })
}

/// Per-centroid Type-1 distances of a complete record.
pub fn type1_distances(record: &Record, model: &ClusterModel) -> Result<Vec<f64>> {
    model.centroids.iter().map(|mu| type1_distance(record, mu)).collect()
}

pub fn type2_distances(record: &Record, model: &ClusterModel, scaling: Type2Scaling) -> Result<Vec<f64>> {
    model
        .centroids
        .iter()
        .map(|mu| type2_distance_scaled(record, mu, scaling))
        .collect()
}

/// Scalar mapping of a complete record: sum of Type-1 distances.
pub fn map_complete(record: &Record, model: &ClusterModel) -> Result<f64> {
    Ok(type1_distances(record, model)?.iter().sum())
}

/// Scalar mapping of a query record: sum of Type-2 distances. For a
/// complete record this equals [`map_complete`].
pub fn map_query(record: &Record, model: &ClusterModel) -> Result<f64> {
    map_query_scaled(record, model, Type2Scaling::None)
}

pub fn map_query_scaled(record: &Record, model: &ClusterModel, scaling: Type2Scaling) -> Result<f64> {
    Ok(type2_distances(record, model, scaling)?.iter().sum())
}

/// Mapping values of the donor pool and of the queries under one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingTable {
    pub complete_map: Vec<(String, f64)>,
    pub query_map: Vec<(String, f64)>,
    pub model_ref: String,
}

impl MappingTable {
    pub fn build(
        complete: &[Record],
        queries: &[Record],
        model: &ClusterModel,
        scaling: Type2Scaling,
        model_ref: impl Into<String>,
    ) -> Result<Self> {
        let complete_map = complete
            .iter()
            .map(|r| Ok((r.id.clone(), map_complete(r, model)?)))
            .collect::<Result<Vec<_>>>()?;
        let query_map = queries
            .iter()
            .map(|r| Ok((r.id.clone(), map_query_scaled(r, model, scaling)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            complete_map,
            query_map,
            model_ref: model_ref.into(),
        })
    }

    pub fn complete_value(&self, id: &str) -> Option<f64> {
        lookup(&self.complete_map, id)
    }

    pub fn query_value(&self, id: &str) -> Option<f64> {
        lookup(&self.query_map, id)
    }

    /// Rows of `group,record,map`, with values printed at full precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,record,map\n");
        for (group, rows) in [("complete", &self.complete_map), ("query", &self.query_map)] {
            for (id, v) in rows {
                out.push_str(&format!("{group},{id},{v}\n"));
            }
        }
        out
    }
}

fn lookup(rows: &[(String, f64)], id: &str) -> Option<f64> {
    rows.iter().find(|(rid, _)| rid == id).map(|&(_, v)| v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kmeans::{cluster, InitPolicy};

    const TOL: f64 = 1e-5;

    fn rec(id: &str, cells: &[Option<f64>]) -> Record {
        Record::new(
            id,
            cells.iter().map(|c| c.map_or(Cell::Missing, Cell::Present)).collect(),
            None,
        )
    }

    fn reference_model() -> ClusterModel {
        let g1: Vec<Record> = [
            ("R1", [1.0, 5.0, 1.0, 10.0]),
            ("R2", [3.0, 7.0, 1.0, 5.0]),
            ("R4", [2.0, 5.0, 1.0, 10.0]),
            ("R6", [2.0, 9.0, 1.0, 10.0]),
            ("R7", [1.0, 5.0, 2.0, 3.0]),
            ("R8", [3.0, 6.0, 2.0, 7.0]),
            ("R9", [2.0, 6.0, 2.0, 10.0]),
        ]
        .iter()
        .map(|(id, v)| Record::complete(*id, v, None))
        .collect();
        let clusters = vec![
            vec!["R1".into(), "R4".into(), "R6".into(), "R9".into()],
            vec!["R2".into(), "R7".into(), "R8".into()],
        ];
        cluster(&g1, 2, &InitPolicy::FixedPartition { clusters }).unwrap()
    }

    #[test]
    fn type1_reference_values() {
        let r1 = Record::complete("R1", &[1.0, 5.0, 1.0, 10.0], None);
        let d = type1_distance(&r1, &[1.75, 6.25, 1.25, 10.0]).unwrap();
        assert!((d - 1.47902).abs() < TOL);
        let d = type1_distance(&r1, &[7.0 / 3.0, 6.0, 5.0 / 3.0, 5.0]).unwrap();
        assert!((d - 5.312459).abs() < TOL);
        assert_eq!(type1_distance(&r1, &[1.0, 5.0, 1.0, 10.0]).unwrap(), 0.0);
    }

    #[test]
    fn type1_errors() {
        let r = Record::complete("x", &[1.0, 2.0], None);
        assert!(matches!(type1_distance(&r, &[1.0]), Err(Error::Domain(_))));
        let m = rec("m", &[Some(1.0), None]);
        assert!(matches!(type1_distance(&m, &[1.0, 1.0]), Err(Error::Contract(_))));
    }

    #[test]
    fn type2_reference_values() {
        let model = reference_model();
        let r3 = rec("R3", &[Some(1.0), Some(7.0), None, Some(7.0)]);
        let d = type2_distance(&r3, &model.centroids[1]).unwrap();
        assert!((d - 2.603417).abs() < TOL);
        let r5 = rec("R5", &[Some(3.0), Some(3.0), Some(2.0), None]);
        let d = type2_distances(&r5, &model, Type2Scaling::None).unwrap();
        assert!((d[0] - 3.561952).abs() < TOL);
        assert!((d[1] - 3.091206).abs() < TOL);
    }

    #[test]
    fn type2_of_all_missing_record_fails() {
        let r = rec("gone", &[None, None]);
        assert!(matches!(type2_distance(&r, &[0.0, 0.0]), Err(Error::EmptyRecord(_))));
    }

    #[test]
    fn type2_scaling_mode() {
        let r = rec("h", &[Some(3.0), None, None, Some(4.0)]);
        let plain = type2_distance(&r, &[0.0; 4]).unwrap();
        let scaled = type2_distance_scaled(&r, &[0.0; 4], Type2Scaling::ObservedRatio).unwrap();
        assert_eq!(plain, 5.0);
        assert!((scaled - 5.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn map_values() {
        let model = reference_model();
        let r1 = Record::complete("R1", &[1.0, 5.0, 1.0, 10.0], None);
        let r8 = Record::complete("R8", &[3.0, 6.0, 2.0, 7.0], None);
        assert!((map_complete(&r1, &model).unwrap() - 6.791479).abs() < TOL);
        assert!((map_complete(&r8, &model).unwrap() - 5.479147).abs() < TOL);
        let r3 = rec("R3", &[Some(1.0), Some(7.0), None, Some(7.0)]);
        assert!((map_query(&r3, &model).unwrap() - 5.785398).abs() < TOL);
        let r5 = rec("R5", &[Some(3.0), Some(3.0), Some(2.0), None]);
        assert!((map_query(&r5, &model).unwrap() - 6.653158).abs() < TOL);
    }

    #[test]
    fn map_is_zero_for_the_sole_centroid() {
        let r = Record::complete("a", &[2.0, 3.0], None);
        let model = cluster(std::slice::from_ref(&r), 1, &InitPolicy::default()).unwrap();
        assert_eq!(map_complete(&r, &model).unwrap(), 0.0);
    }

    #[test]
    fn table_serialises_all_rows() {
        let model = reference_model();
        let r1 = Record::complete("R1", &[1.0, 5.0, 1.0, 10.0], None);
        let r3 = rec("R3", &[Some(1.0), Some(7.0), None, Some(7.0)]);
        let table = MappingTable::build(&[r1], &[r3], &model, Type2Scaling::None, "m").unwrap();
        let csv = table.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.contains("query,R3,5.78539"));
    }
}
