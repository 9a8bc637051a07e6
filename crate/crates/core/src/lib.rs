//! Missing-value imputation and classification through cluster-center
//! mapping.
//!
//! The complete records are clustered with k-means (one cluster per decision
//! class). Every record is then reduced to one number, the sum of its
//! Euclidean distances to all centroids. Records with missing cells use
//! only their observed coordinates. An incomplete record borrows its missing
//! values from the complete record whose number is nearest, and a new
//! record takes the label of that record.
//!
//! ```
//! use clustimpute::{read_dataset, impute_dataset, ImputeConfig, Schema, AttributeSpec, Cell};
//!
//! let schema = Schema::new(vec![AttributeSpec::numeric("x"), AttributeSpec::numeric("y")])
//!     .with_label_column("class");
//! let data = "x,y,class\n1,1,a\n1.2,0.9,a\n8,8,b\n8.1,7.9,b\n7.9,?,b\n";
//! let ds = read_dataset(data, &schema)?;
//! let out = impute_dataset(&ds, &ImputeConfig::default())?;
//! // the gap is filled from a record of the same group
//! assert_eq!(out.cells[0].donors, ["R4"]);
//! assert_eq!(out.completed.records[4].cells[1], Cell::Present(7.9));
//! # Ok::<(), clustimpute::Error>(())
//! ```
//!
//! The `book/` directory next to this crate explains each stage at more
//! length; its code listings are compiled as doc-tests of this crate.

pub mod casestudy;
pub mod classify;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod impute;
pub mod kmeans;
pub mod mapping;

pub use classify::{classify_mapped, classify_raw_knn, fit_classification_model, ClassificationResult};
pub use dataset::{
    decode, encode, load_dataset, parse_dataset, read_dataset, split_groups, AttributeKind, AttributeSpec, Cell,
    Dataset, Decoded, GroupSplit, Record, Schema,
};
pub use error::{Error, Result};
pub use impute::{
    difference_table, impute_cell, impute_dataset, nearest_record, DifferenceTable, ImputationResult, ImputeConfig,
    NearestMode,
};
pub use kmeans::{centroid, cluster, ClusterModel, InitPolicy};
pub use mapping::{map_complete, map_query, type1_distance, type2_distance, MappingTable, Type2Scaling};

// Each chapter of the guide is compiled as a doc-test module.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/data.md")]
    mod data {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/mapping.md")]
    mod mapping {}
    #[doc = include_str!("../../../book/src/imputation.md")]
    mod imputation {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/worked-example.md")]
    mod worked_example {}
}
