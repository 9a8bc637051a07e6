use std::collections::BTreeSet;

use clustimpute::dataset::{decode, encode, RawDataset, RawField, RawRecord};
use clustimpute::eval::{inject_mcar, unmask};
use clustimpute::impute::{argmin_by_mode, difference_table, nearest_record};
use clustimpute::kmeans::{nearest_centroid, total_sse};
use clustimpute::mapping::{euclidean, map_query, type1_distance, type2_distance};
use clustimpute::{
    cluster, impute_dataset, map_complete, split_groups, AttributeSpec, Cell, ClusterModel, Dataset, Decoded,
    ImputeConfig, InitPolicy, MappingTable, NearestMode, Record, Schema,
};
use proptest::prelude::*;

/// Distance through repeated `hypot`, a different route from summing squares.
fn hypot_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |acc, (x, y)| acc.hypot(x - y))
}

fn vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, n)
}

fn points(max: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(vector(n), 2..=max)
}

fn records(points: &[Vec<f64>]) -> Vec<Record> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| Record::complete(format!("R{}", i + 1), p, None))
        .collect()
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn euclidean_matches_hypot_oracle(a in vector(5), b in vector(5)) {
        prop_assert!(close(euclidean(&a, &b), hypot_distance(&a, &b), 1e-12));
        let r = Record::complete("r", &a, None);
        prop_assert!(close(type1_distance(&r, &b).unwrap(), hypot_distance(&a, &b), 1e-12));
    }

    #[test]
    fn type2_never_exceeds_any_completion(
        values in vector(4),
        centroid in vector(4),
        missing in prop::collection::btree_set(0usize..4, 1..4),
        fills in vector(4),
    ) {
        let cells: Vec<Cell> = values
            .iter()
            .enumerate()
            .map(|(k, &v)| if missing.contains(&k) { Cell::Missing } else { Cell::Present(v) })
            .collect();
        let partial = Record::new("p", cells, None);
        let completion: Vec<f64> = (0..4).map(|k| if missing.contains(&k) { fills[k] } else { values[k] }).collect();
        let full = Record::complete("f", &completion, None);
        let d2 = type2_distance(&partial, &centroid).unwrap();
        prop_assert!(d2 >= 0.0);
        prop_assert!(d2 <= type1_distance(&full, &centroid).unwrap() + 1e-12);
    }

    #[test]
    fn mapping_ignores_centroid_order(pts in points(8, 3), seed in any::<u64>()) {
        let recs = records(&pts);
        let model = cluster(&recs, 2, &InitPolicy::SeededRandom { seed }).unwrap();
        let mut reversed = model.clone();
        reversed.centroids.reverse();
        for r in &recs {
            let a = map_complete(r, &model).unwrap();
            let b = map_complete(r, &reversed).unwrap();
            prop_assert!(close(a, b, 1e-12));
            prop_assert!(a.is_finite() && a >= 0.0);
            // a complete query maps exactly like a complete record
            prop_assert_eq!(map_query(r, &model).unwrap(), a);
        }
    }

    #[test]
    fn lloyd_converges_to_nearest_centroids(pts in points(12, 2), k in 1usize..4, seed in any::<u64>()) {
        prop_assume!(k <= pts.len());
        let recs = records(&pts);
        for init in [InitPolicy::SeededRandom { seed }, InitPolicy::FarthestFirst { seed }] {
            let model = cluster(&recs, k, &init).unwrap();
            check_model(&model, &pts)?;
        }
    }

    #[test]
    fn fixed_partition_centroids_are_member_means(pts in points(10, 3), split in 1usize..9) {
        prop_assume!(split < pts.len());
        let recs = records(&pts);
        let ids: Vec<String> = recs.iter().map(|r| r.id.clone()).collect();
        let clusters = vec![ids[..split].to_vec(), ids[split..].to_vec()];
        let model = cluster(&recs, 2, &InitPolicy::FixedPartition { clusters }).unwrap();
        prop_assert_eq!(model.iterations, 0);
        check_means(&model, &pts)?;
    }

    #[test]
    fn signed_mode_is_query_independent(
        complete in prop::collection::vec(0.0f64..50.0, 1..15),
        queries in prop::collection::vec(0.0f64..50.0, 1..6),
    ) {
        let table = mapping_table(&complete, &queries);
        let diffs = difference_table(&table).unwrap();
        let first = nearest_record(&diffs, "Q1", NearestMode::PaperSigned).unwrap();
        for j in 1..queries.len() {
            let other = nearest_record(&diffs, &format!("Q{}", j + 1), NearestMode::PaperSigned).unwrap();
            prop_assert_eq!(&other, &first);
        }
        let min = complete.iter().cloned().fold(f64::INFINITY, f64::min);
        let argmin: Vec<String> = complete
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == min)
            .map(|(i, _)| format!("D{}", i + 1))
            .collect();
        prop_assert_eq!(first, argmin);
    }

    #[test]
    fn absolute_mode_is_scalar_nearest_neighbour(
        complete in prop::collection::vec(0.0f64..50.0, 1..15),
        query in 0.0f64..50.0,
    ) {
        let table = mapping_table(&complete, &[query]);
        let diffs = difference_table(&table).unwrap();
        let got = nearest_record(&diffs, "Q1", NearestMode::Absolute).unwrap();
        // brute force: smallest |Map - Map'| computed without the table
        let gaps: Vec<f64> = complete.iter().map(|m| (m - query).abs()).collect();
        let best = gaps.iter().cloned().fold(f64::INFINITY, f64::min);
        let expected: Vec<String> = gaps
            .iter()
            .enumerate()
            .filter(|(_, &g)| g == best)
            .map(|(i, _)| format!("D{}", i + 1))
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn encode_decode_round_trip(symbols in prop::collection::vec("[a-e]{1,3}", 1..20)) {
        let schema = Schema::new(vec![AttributeSpec::categorical("s", None)]);
        let raw = RawDataset {
            schema,
            records: symbols
                .iter()
                .enumerate()
                .map(|(i, s)| RawRecord { id: format!("R{i}"), fields: vec![RawField::Symbol(s.clone())], label: None })
                .collect(),
        };
        let ds = encode(raw).unwrap();
        let spec = &ds.schema.attributes[0];
        let encoding = spec.encoding.as_ref().unwrap();
        let distinct: BTreeSet<&String> = symbols.iter().collect();
        prop_assert_eq!(encoding.len(), distinct.len());
        for (r, s) in ds.records.iter().zip(&symbols) {
            let v = r.cells[0].value().unwrap();
            prop_assert!(v >= 1.0 && v <= encoding.len() as f64);
            prop_assert_eq!(decode(v, spec).unwrap(), Decoded::Symbol(s.clone()));
        }
    }

    #[test]
    fn split_is_a_partition(grid in prop::collection::vec(prop::collection::vec(prop::option::of(0.0f64..5.0), 3), 0..15)) {
        let ds = grid_dataset(&grid);
        let split = split_groups(&ds);
        prop_assert_eq!(split.g1.len() + split.g2.len(), ds.len());
        prop_assert!(split.g1.iter().all(Record::is_complete));
        prop_assert!(split.g2.iter().all(|r| !r.is_complete()));
        let a: BTreeSet<&str> = split.g1.iter().map(|r| r.id.as_str()).collect();
        let b: BTreeSet<&str> = split.g2.iter().map(|r| r.id.as_str()).collect();
        prop_assert!(a.is_disjoint(&b));
    }

    #[test]
    fn imputing_complete_data_is_identity(pts in points(10, 3)) {
        let grid: Vec<Vec<Option<f64>>> = pts.iter().map(|p| p.iter().map(|&v| Some(v)).collect()).collect();
        let ds = grid_dataset(&grid);
        let out = impute_dataset(&ds, &ImputeConfig { k: Some(1), ..Default::default() }).unwrap();
        prop_assert_eq!(out.completed, ds);
        prop_assert!(out.cells.is_empty());
    }

    #[test]
    fn mask_then_unmask_is_identity(pts in points(12, 3), rate in 0.05f64..0.6, seed in any::<u64>()) {
        let grid: Vec<Vec<Option<f64>>> = pts.iter().map(|p| p.iter().map(|&v| Some(v)).collect()).collect();
        let ds = grid_dataset(&grid);
        let (masked, plan) = inject_mcar(&ds, rate, seed).unwrap();
        let target = (rate * (ds.len() * 3) as f64).round() as i64;
        prop_assert!((plan.cells.len() as i64 - target).abs() <= 1);
        prop_assert!(masked.records.iter().all(|r| r.observed_count() > 0));
        prop_assert_eq!(unmask(&masked, &plan).unwrap(), ds);
    }

    #[test]
    fn imputed_categories_are_valid_ordinals(seed in any::<u64>(), holes in prop::collection::vec((0usize..20, 0usize..3), 1..5)) {
        let ds = mixed_dataset(seed);
        let mut masked = ds.clone();
        for &(i, k) in &holes {
            masked.records[i].cells[k] = Cell::Missing;
        }
        let config = ImputeConfig { init: InitPolicy::FarthestFirst { seed }, ..Default::default() };
        let out = impute_dataset(&masked, &config).unwrap();
        prop_assert!(out.completed.is_complete());
        let spec = &ds.schema.attributes[2];
        for r in &out.completed.records {
            prop_assert!(decode(r.cells[2].value().unwrap(), spec).is_ok());
        }
        // same inputs, same result
        prop_assert_eq!(impute_dataset(&masked, &config).unwrap(), out);
    }
}

fn check_model(model: &ClusterModel, pts: &[Vec<f64>]) -> Result<(), TestCaseError> {
    prop_assert!(model.converged);
    let assign: Vec<usize> = model.assignment.iter().map(|a| a.1).collect();
    // every record sits with its nearest centroid, checked against all centroids
    for (p, &c) in pts.iter().zip(&assign) {
        let own = euclidean(p, &model.centroids[c]);
        for mu in &model.centroids {
            prop_assert!(own <= euclidean(p, mu) + 1e-9);
        }
        prop_assert_eq!(nearest_centroid(p, &model.centroids), c);
    }
    for w in model.sse_trace.windows(2) {
        prop_assert!(w[1] <= w[0] + 1e-9, "sse rose: {:?}", model.sse_trace);
    }
    let final_sse = total_sse(pts, &assign, &model.centroids);
    prop_assert!(close(final_sse, *model.sse_trace.last().unwrap(), 1e-9) || final_sse < 1e-12);
    check_means(model, pts)
}

fn check_means(model: &ClusterModel, pts: &[Vec<f64>]) -> Result<(), TestCaseError> {
    for (c, mu) in model.centroids.iter().enumerate() {
        let members: Vec<&Vec<f64>> = model
            .assignment
            .iter()
            .zip(pts)
            .filter(|((_, a), _)| *a == c)
            .map(|(_, p)| p)
            .collect();
        prop_assert!(!members.is_empty());
        for k in 0..mu.len() {
            let mean = members.iter().map(|p| p[k]).sum::<f64>() / members.len() as f64;
            prop_assert!((mean - mu[k]).abs() <= 1e-9);
        }
    }
    Ok(())
}

fn mapping_table(complete: &[f64], queries: &[f64]) -> MappingTable {
    MappingTable {
        complete_map: complete
            .iter()
            .enumerate()
            .map(|(i, &m)| (format!("D{}", i + 1), m))
            .collect(),
        query_map: queries
            .iter()
            .enumerate()
            .map(|(j, &m)| (format!("Q{}", j + 1), m))
            .collect(),
        model_ref: "random".into(),
    }
}

fn grid_dataset(grid: &[Vec<Option<f64>>]) -> Dataset {
    let schema = Schema::new(vec![
        AttributeSpec::numeric("a"),
        AttributeSpec::numeric("b"),
        AttributeSpec::numeric("c"),
    ]);
    let records = grid
        .iter()
        .enumerate()
        .map(|(i, row)| {
            Record::new(
                format!("R{}", i + 1),
                row.iter().map(|c| c.map_or(Cell::Missing, Cell::Present)).collect(),
                None,
            )
        })
        .collect();
    Dataset::new(schema, records).unwrap()
}

/// Twenty labeled records, two numeric attributes and one categorical.
fn mixed_dataset(seed: u64) -> Dataset {
    let schema = Schema::new(vec![
        AttributeSpec::numeric("x"),
        AttributeSpec::numeric("y"),
        AttributeSpec::categorical("g", Some(vec!["lo".into(), "mid".into(), "hi".into()])),
    ])
    .with_label_column("class");
    let records = (0..20u64)
        .map(|i| {
            let h = (i.wrapping_mul(2654435761).wrapping_add(seed)) % 97;
            let class = i % 2;
            let x = class as f64 * 10.0 + (h % 7) as f64 * 0.3;
            let y = class as f64 * -5.0 + (h % 5) as f64 * 0.2;
            let g = (h % 3 + 1) as f64;
            Record::complete(
                format!("R{}", i + 1),
                &[x, y, g],
                Some(if class == 0 { "A" } else { "B" }),
            )
        })
        .collect();
    Dataset::new(schema, records).unwrap()
}

/// Twenty records with three masked cells. Every pipeline stage is
/// recomputed here from first principles and compared with the provenance.
#[test]
fn twenty_record_pipeline_recomputed_by_hand() {
    let full = mixed_dataset(5);
    let holes = [(2usize, 0usize), (7, 2), (15, 1)];
    let mut masked = full.clone();
    for &(i, k) in &holes {
        masked.records[i].cells[k] = Cell::Missing;
    }
    for mode in [NearestMode::Absolute, NearestMode::PaperSigned] {
        let config = ImputeConfig {
            init: InitPolicy::FarthestFirst { seed: 3 },
            mode,
            ..Default::default()
        };
        let out = impute_dataset(&masked, &config).unwrap();
        assert!(out.completed.is_complete());
        assert_eq!(out.cells.len(), 3);
        let model = out.model.as_ref().unwrap();

        let g1: Vec<&Record> = masked.records.iter().filter(|r| r.is_complete()).collect();
        // centroids from the reported assignment
        for (c, mu) in model.centroids.iter().enumerate() {
            let members: Vec<&&Record> = g1.iter().filter(|r| model.cluster_of(&r.id) == Some(c)).collect();
            for (k, m) in mu.iter().enumerate() {
                let mean = members.iter().map(|r| r.cells[k].value().unwrap()).sum::<f64>() / members.len() as f64;
                assert!((mean - m).abs() < 1e-9);
            }
        }
        let map_of = |r: &Record| -> f64 {
            model
                .centroids
                .iter()
                .map(|mu| {
                    let pairs: Vec<(f64, f64)> = r
                        .cells
                        .iter()
                        .zip(mu)
                        .filter_map(|(c, m)| c.value().map(|v| (v, *m)))
                        .collect();
                    let (a, b): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
                    hypot_distance(&a, &b)
                })
                .sum()
        };
        for cell in &out.cells {
            let query = masked.record(&cell.query_id).unwrap();
            let q = map_of(query);
            let gaps: Vec<f64> = g1.iter().map(|r| map_of(r) - q).collect();
            let picked = argmin_by_mode(&gaps, mode);
            let ids: Vec<String> = picked.iter().map(|&i| g1[i].id.clone()).collect();
            assert_eq!(cell.donors, ids);
            if ids.len() == 1 {
                assert_eq!(cell.value, g1[picked[0]].cells[cell.attribute_index].value().unwrap());
            }
        }
    }
}
