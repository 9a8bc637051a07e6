//! Lloyd's k-means over the complete records.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Record;
use crate::error::{Error, Result};
use crate::mapping::squared_euclidean;

pub const MAX_ITERATIONS: usize = 100;

/// How the first centroids are chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum InitPolicy {
    /// `k` distinct records drawn uniformly.
    SeededRandom { seed: u64 },
    /// A random first record, then repeatedly the record farthest from the
    /// centroids chosen so far.
    FarthestFirst { seed: u64 },
    /// Use the given id sets as the clusters. No iteration happens.
    FixedPartition { clusters: Vec<Vec<String>> },
}

impl Default for InitPolicy {
    fn default() -> Self {
        InitPolicy::FarthestFirst { seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterModel {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    /// Record id to cluster index, in input order.
    pub assignment: Vec<(String, usize)>,
    pub iterations: usize,
    pub converged: bool,
    /// Within-cluster sum of squares after every update step.
    pub sse_trace: Vec<f64>,
}

impl ClusterModel {
    pub fn cluster_of(&self, id: &str) -> Option<usize> {
        self.assignment.iter().find(|(rid, _)| rid == id).map(|&(_, c)| c)
    }

    /// Member ids per cluster, in input order.
    pub fn members(&self) -> Vec<Vec<String>> {
        let mut out = vec![Vec::new(); self.k];
        for (id, c) in &self.assignment {
            out[*c].push(id.clone());
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.centroids.first().map_or(0, Vec::len)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Component-wise mean of a non-empty set of complete records.
pub fn centroid(members: &[&Record]) -> Result<Vec<f64>> {
    let first = members
        .first()
        .ok_or_else(|| Error::Domain("centroid of an empty member set".into()))?;
    let n = first.cells.len();
    let mut sum = vec![0.0; n];
    for record in members {
        let values = complete_values(record)?;
        if values.len() != n {
            return Err(Error::Domain(format!(
                "record `{}` has arity {}, expected {n}",
                record.id,
                values.len()
            )));
        }
        for (s, v) in sum.iter_mut().zip(values) {
            *s += v;
        }
    }
    let count = members.len() as f64;
    Ok(sum.into_iter().map(|s| s / count).collect())
}

fn complete_values(record: &Record) -> Result<Vec<f64>> {
    record
        .values()
        .ok_or_else(|| Error::Contract(format!("record `{}` has missing cells", record.id)))
}

/// Clusters complete records into `k` groups.
pub fn cluster(g1: &[Record], k: usize, init: &InitPolicy) -> Result<ClusterModel> {
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if g1.is_empty() {
        return Err(Error::InsufficientData("no complete records to cluster".into()));
    }
    if g1.len() < k {
        return Err(Error::InsufficientData(format!(
            "{} complete records cannot form {k} clusters",
            g1.len()
        )));
    }
    let points = g1.iter().map(complete_values).collect::<Result<Vec<_>>>()?;
    let n = points[0].len();
    if let Some(bad) = points.iter().position(|p| p.len() != n) {
        return Err(Error::Domain(format!("record `{}` has a different arity", g1[bad].id)));
    }

    match init {
        InitPolicy::FixedPartition { clusters } => fixed_partition(g1, &points, k, clusters),
        InitPolicy::SeededRandom { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let seeds = sample(&mut rng, points.len(), k).into_vec();
            let centroids = seeds.iter().map(|&i| points[i].clone()).collect();
            Ok(lloyd(g1, &points, centroids))
        }
        InitPolicy::FarthestFirst { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let centroids = farthest_first(&points, k, &mut rng);
            Ok(lloyd(g1, &points, centroids))
        }
    }
}

fn farthest_first(points: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut chosen = vec![rng.random_range(0..points.len())];
    let mut nearest: Vec<f64> = points
        .iter()
        .map(|p| squared_euclidean(p, &points[chosen[0]]))
        .collect();
    while chosen.len() < k {
        let mut best = None;
        for (i, &d) in nearest.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((i, d));
            }
        }
        let (next, _) = best.expect("k <= number of points");
        chosen.push(next);
        for (i, p) in points.iter().enumerate() {
            nearest[i] = nearest[i].min(squared_euclidean(p, &points[next]));
        }
    }
    chosen.into_iter().map(|i| points[i].clone()).collect()
}

fn fixed_partition(g1: &[Record], points: &[Vec<f64>], k: usize, clusters: &[Vec<String>]) -> Result<ClusterModel> {
    if clusters.len() != k {
        return Err(Error::Config(format!(
            "fixed partition has {} clusters, k = {k}",
            clusters.len()
        )));
    }
    let mut by_id = BTreeMap::new();
    for (c, members) in clusters.iter().enumerate() {
        if members.is_empty() {
            return Err(Error::Config(format!("fixed partition cluster {c} is empty")));
        }
        for id in members {
            if by_id.insert(id.as_str(), c).is_some() {
                return Err(Error::Config(format!("`{id}` appears in two clusters")));
            }
        }
    }
    let known: BTreeSet<&str> = g1.iter().map(|r| r.id.as_str()).collect();
    if let Some(extra) = by_id.keys().find(|id| !known.contains(*id)) {
        return Err(Error::Config(format!("`{extra}` is not a complete record")));
    }
    let assign = g1
        .iter()
        .map(|r| {
            by_id
                .get(r.id.as_str())
                .copied()
                .ok_or_else(|| Error::Config(format!("`{}` is not covered by the fixed partition", r.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let centroids = update(points, &assign, k);
    let sse = total_sse(points, &assign, &centroids);
    Ok(ClusterModel {
        k,
        centroids,
        assignment: ids_with(g1, &assign),
        iterations: 0,
        converged: true,
        sse_trace: vec![sse],
    })
}

fn ids_with(g1: &[Record], assign: &[usize]) -> Vec<(String, usize)> {
    g1.iter().map(|r| r.id.clone()).zip(assign.iter().copied()).collect()
}

/// Index of the nearest centroid; lowest index wins ties.
pub fn nearest_centroid(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, mu) in centroids.iter().enumerate() {
        let d = squared_euclidean(point, mu);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

fn update(points: &[Vec<f64>], assign: &[usize], k: usize) -> Vec<Vec<f64>> {
    let n = points[0].len();
    let mut sums = vec![vec![0.0; n]; k];
    let mut counts = vec![0usize; k];
    for (p, &c) in points.iter().zip(assign) {
        counts[c] += 1;
        for (s, v) in sums[c].iter_mut().zip(p) {
            *s += v;
        }
    }
    sums.into_iter()
        .zip(counts)
        .map(|(s, count)| s.into_iter().map(|v| v / count as f64).collect())
        .collect()
}

pub fn total_sse(points: &[Vec<f64>], assign: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points
        .iter()
        .zip(assign)
        .map(|(p, &c)| squared_euclidean(p, &centroids[c]))
        .sum()
}

fn lloyd(g1: &[Record], points: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> ClusterModel {
    let k = centroids.len();
    let mut assign: Option<Vec<usize>> = None;
    let mut sse_trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < MAX_ITERATIONS {
        let mut next: Vec<usize> = points.iter().map(|p| nearest_centroid(p, &centroids)).collect();
        reseed_empty(points, &mut next, &mut centroids);
        if assign.as_ref() == Some(&next) {
            converged = true;
            break;
        }
        iterations += 1;
        centroids = update(points, &next, k);
        sse_trace.push(total_sse(points, &next, &centroids));
        assign = Some(next);
    }
    if !converged {
        // the cap was hit; report whether the final assignment is stable anyway
        let next: Vec<usize> = points.iter().map(|p| nearest_centroid(p, &centroids)).collect();
        converged = assign.as_ref() == Some(&next);
    }

    ClusterModel {
        k,
        centroids,
        assignment: ids_with(g1, &assign.expect("at least one iteration runs")),
        iterations,
        converged,
        sse_trace,
    }
}

/// Moves, for each empty cluster, the point farthest from its own centroid
/// into that cluster and places the centroid on it. Only points from
/// clusters with more than one member are eligible.
fn reseed_empty(points: &[Vec<f64>], assign: &mut [usize], centroids: &mut [Vec<f64>]) {
    let k = centroids.len();
    loop {
        let mut counts = vec![0usize; k];
        for &c in assign.iter() {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return;
        };
        let mut far = None;
        for (i, p) in points.iter().enumerate() {
            if counts[assign[i]] < 2 {
                continue;
            }
            let d = squared_euclidean(p, &centroids[assign[i]]);
            if far.is_none_or(|(_, fd)| d > fd) {
                far = Some((i, d));
            }
        }
        let (i, _) = far.expect("k <= number of points leaves a donor cluster");
        assign[i] = empty;
        centroids[empty] = points[i].clone();
    }
}
