//! Schema, delimited-text ingestion and categorical encoding.
//!
//! Records move through two shapes. [`parse_dataset`] produces a
//! [`RawDataset`] where categorical fields are still symbols; [`encode`]
//! turns that into a [`Dataset`] whose cells are all numeric (or missing).
//! Categorical symbols map to contiguous ordinals starting at 1. When a
//! schema does not pin an encoding, the distinct symbols are numbered in
//! sorted lexicographic order.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Markers recognised as a missing cell when a schema does not list its own.
pub const DEFAULT_MISSING_MARKERS: [&str; 3] = ["?", "NaN", ""];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Numeric,
    Categorical,
}

/// One column of the schema.
///
/// For categorical attributes `encoding[i]` is the symbol with ordinal
/// `i + 1`. `None` means the encoding is built from the data on
/// [`encode`]; `Some` freezes it and unknown symbols are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttributeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<Vec<String>>,
}

impl AttributeSpec {
    pub fn numeric(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Numeric,
            encoding: None,
        }
    }

    pub fn categorical(name: impl Into<String>, encoding: Option<Vec<String>>) -> Self {
        Self {
            name: name.into(),
            kind: AttributeKind::Categorical,
            encoding,
        }
    }

    pub fn is_categorical(&self) -> bool {
        self.kind == AttributeKind::Categorical
    }

    /// Ordinal of `symbol`, if the encoding knows it.
    pub fn ordinal(&self, symbol: &str) -> Option<u32> {
        self.encoding
            .as_ref()?
            .iter()
            .position(|s| s == symbol)
            .map(|i| i as u32 + 1)
    }

    pub fn symbol(&self, ordinal: u32) -> Option<&str> {
        let encoding = self.encoding.as_ref()?;
        if ordinal == 0 {
            return None;
        }
        encoding.get(ordinal as usize - 1).map(String::as_str)
    }

    fn validate(&self) -> Result<()> {
        match (&self.kind, &self.encoding) {
            (AttributeKind::Numeric, Some(_)) => Err(Error::Schema(format!(
                "numeric attribute `{}` cannot carry an encoding",
                self.name
            ))),
            (AttributeKind::Categorical, Some(enc)) => {
                let distinct: BTreeSet<&String> = enc.iter().collect();
                if distinct.len() != enc.len() {
                    return Err(Error::Schema(format!("encoding of `{}` repeats a symbol", self.name)));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn default_markers() -> Vec<String> {
    DEFAULT_MISSING_MARKERS.iter().map(|s| s.to_string()).collect()
}

/// Column layout of a delimited file plus the attribute definitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schema {
    /// Column holding record ids. Without one, ids are `R1`, `R2`, ... by row.
    #[serde(default)]
    pub id_column: Option<String>,
    /// Column holding the decision class. It may be absent from a given file.
    #[serde(default)]
    pub label_column: Option<String>,
    #[serde(default = "default_markers")]
    pub missing_markers: Vec<String>,
    pub attributes: Vec<AttributeSpec>,
}

impl Schema {
    pub fn new(attributes: Vec<AttributeSpec>) -> Self {
        Self {
            id_column: None,
            label_column: None,
            missing_markers: default_markers(),
            attributes,
        }
    }

    pub fn with_id_column(mut self, name: impl Into<String>) -> Self {
        self.id_column = Some(name.into());
        self
    }

    pub fn with_label_column(mut self, name: impl Into<String>) -> Self {
        self.label_column = Some(name.into());
        self
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let schema: Schema = serde_json::from_str(text)?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn arity(&self) -> usize {
        self.attributes.len()
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        if self.attributes.is_empty() {
            return Err(Error::Schema("schema declares no attributes".into()));
        }
        let mut seen = BTreeSet::new();
        let names = self
            .attributes
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.id_column.as_deref())
            .chain(self.label_column.as_deref());
        for name in names {
            if !seen.insert(name) {
                return Err(Error::Schema(format!("column `{name}` declared twice")));
            }
        }
        self.attributes.iter().try_for_each(AttributeSpec::validate)
    }

    fn is_missing(&self, field: &str) -> bool {
        self.missing_markers.iter().any(|m| m == field)
    }

    fn missing_marker(&self) -> &str {
        self.missing_markers.first().map(String::as_str).unwrap_or("?")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Present(f64),
    Missing,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Present(v) => Some(v),
            Cell::Missing => None,
        }
    }

    pub fn is_missing(self) -> bool {
        matches!(self, Cell::Missing)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub cells: Vec<Cell>,
    pub label: Option<String>,
}

impl Record {
    pub fn new(id: impl Into<String>, cells: Vec<Cell>, label: Option<String>) -> Self {
        Self {
            id: id.into(),
            cells,
            label,
        }
    }

    /// A complete record built from plain values.
    pub fn complete(id: impl Into<String>, values: &[f64], label: Option<&str>) -> Self {
        Self::new(
            id,
            values.iter().map(|&v| Cell::Present(v)).collect(),
            label.map(str::to_string),
        )
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|c| !c.is_missing())
    }

    /// Cell values when the record is complete.
    pub fn values(&self) -> Option<Vec<f64>> {
        self.cells.iter().map(|c| c.value()).collect()
    }

    pub fn missing_indices(&self) -> Vec<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.is_missing().then_some(i))
            .collect()
    }

    pub fn observed_count(&self) -> usize {
        self.cells.len() - self.missing_indices().len()
    }
}

/// A cell as read from text, before categorical encoding.
#[derive(Debug, Clone, PartialEq)]
pub enum RawField {
    Missing,
    Number(f64),
    Symbol(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub id: String,
    pub fields: Vec<RawField>,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub schema: Schema,
    pub records: Vec<RawRecord>,
}

/// An encoded dataset: every present cell is a real number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub schema: Schema,
    pub records: Vec<Record>,
    /// Distinct decision classes, sorted.
    pub classes: Vec<String>,
}

impl Dataset {
    /// Builds a dataset, checking arity against the schema. Categorical
    /// attributes must already carry their encoding.
    pub fn new(schema: Schema, records: Vec<Record>) -> Result<Self> {
        schema.validate()?;
        let n = schema.arity();
        for (row, record) in records.iter().enumerate() {
            if record.cells.len() != n {
                return Err(Error::Parse {
                    row: row + 1,
                    message: format!(
                        "record `{}` has {} cells, schema has {n}",
                        record.id,
                        record.cells.len()
                    ),
                });
            }
        }
        let classes: BTreeSet<String> = records.iter().filter_map(|r| r.label.clone()).collect();
        Ok(Self {
            schema,
            records,
            classes: classes.into_iter().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.schema.arity()
    }

    /// Number of decision classes.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn record(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn is_complete(&self) -> bool {
        self.records.iter().all(Record::is_complete)
    }

    pub fn is_labeled(&self) -> bool {
        self.records.iter().all(|r| r.label.is_some())
    }

    /// Writes the dataset back out as delimited text, decoding categorical
    /// ordinals to their symbols.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let mut header = Vec::new();
        if let Some(id) = &self.schema.id_column {
            header.push(id.clone());
        }
        header.extend(self.schema.attributes.iter().map(|a| a.name.clone()));
        let with_label = self.schema.label_column.is_some() && self.records.iter().any(|r| r.label.is_some());
        if with_label {
            header.push(self.schema.label_column.clone().unwrap_or_default());
        }
        writer.write_record(&header)?;

        for record in &self.records {
            let mut row = Vec::with_capacity(header.len());
            if self.schema.id_column.is_some() {
                row.push(record.id.clone());
            }
            for (cell, spec) in record.cells.iter().zip(&self.schema.attributes) {
                row.push(match cell {
                    Cell::Present(v) => decode(*v, spec)?.to_string(),
                    Cell::Missing => self.schema.missing_marker().to_string(),
                });
            }
            if with_label {
                row.push(record.label.clone().unwrap_or_default());
            }
            writer.write_record(&row)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
    }
}

/// Reads comma-delimited rows with a header line.
///
/// Header names are matched to the schema by name, so column order in the
/// file is free. The label column may be absent (unlabeled data). Row
/// numbers in errors count data rows from 1.
pub fn parse_dataset(text: &str, schema: &Schema) -> Result<RawDataset> {
    schema.validate()?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let position = |name: &str| header.iter().position(|h| h == name);

    let id_pos = match &schema.id_column {
        Some(name) => Some(position(name).ok_or_else(|| Error::Schema(format!("id column `{name}` not in header")))?),
        None => None,
    };
    let label_pos = schema.label_column.as_deref().and_then(position);
    let attr_pos = schema
        .attributes
        .iter()
        .map(|a| position(&a.name).ok_or_else(|| Error::Schema(format!("attribute `{}` not in header", a.name))))
        .collect::<Result<Vec<_>>>()?;
    let expected_width = attr_pos.len() + id_pos.is_some() as usize + label_pos.is_some() as usize;
    if header.len() != expected_width {
        let unknown: Vec<&String> = header
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != id_pos && Some(*i) != label_pos && !attr_pos.contains(i))
            .map(|(_, h)| h)
            .collect();
        return Err(Error::Schema(format!("unknown header columns {unknown:?}")));
    }

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row?;
        if row.len() != header.len() {
            return Err(Error::Parse {
                row: row_no,
                message: format!("expected {} fields, found {}", header.len(), row.len()),
            });
        }
        let id = match id_pos {
            Some(p) => row[p].to_string(),
            None => format!("R{row_no}"),
        };
        let fields = schema
            .attributes
            .iter()
            .zip(&attr_pos)
            .map(|(spec, &p)| parse_field(&row[p], spec, schema, row_no))
            .collect::<Result<Vec<_>>>()?;
        let label = label_pos
            .map(|p| &row[p])
            .filter(|l| !schema.is_missing(l))
            .map(str::to_string);
        records.push(RawRecord { id, fields, label });
    }
    Ok(RawDataset {
        schema: schema.clone(),
        records,
    })
}

fn parse_field(text: &str, spec: &AttributeSpec, schema: &Schema, row: usize) -> Result<RawField> {
    if schema.is_missing(text) {
        return Ok(RawField::Missing);
    }
    match spec.kind {
        AttributeKind::Categorical => Ok(RawField::Symbol(text.to_string())),
        AttributeKind::Numeric => match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(RawField::Number(v)),
            _ => Err(Error::Parse {
                row,
                message: format!("attribute `{}`: `{text}` is not a number", spec.name),
            }),
        },
    }
}

/// Replaces categorical symbols by their ordinals.
///
/// Categorical attributes without an encoding get one built from the
/// distinct symbols in sorted order.
pub fn encode(raw: RawDataset) -> Result<Dataset> {
    let mut schema = raw.schema;
    for (k, spec) in schema.attributes.iter_mut().enumerate() {
        if spec.is_categorical() && spec.encoding.is_none() {
            let symbols: BTreeSet<&str> = raw
                .records
                .iter()
                .filter_map(|r| match &r.fields[k] {
                    RawField::Symbol(s) => Some(s.as_str()),
                    _ => None,
                })
                .collect();
            spec.encoding = Some(symbols.into_iter().map(str::to_string).collect());
        }
    }

    let records = raw
        .records
        .into_iter()
        .map(|r| {
            let cells = r
                .fields
                .iter()
                .zip(&schema.attributes)
                .map(|(field, spec)| encode_field(field, spec, &r.id))
                .collect::<Result<Vec<_>>>()?;
            Ok(Record::new(r.id, cells, r.label))
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(schema, records)
}

fn encode_field(field: &RawField, spec: &AttributeSpec, id: &str) -> Result<Cell> {
    match field {
        RawField::Missing => Ok(Cell::Missing),
        RawField::Number(v) => Ok(Cell::Present(*v)),
        RawField::Symbol(s) => spec.ordinal(s).map(|o| Cell::Present(o as f64)).ok_or_else(|| {
            Error::Schema(format!(
                "record `{id}`: symbol `{s}` not in the encoding of `{}`",
                spec.name
            ))
        }),
    }
}

/// Parse and encode in one step.
pub fn read_dataset(text: &str, schema: &Schema) -> Result<Dataset> {
    encode(parse_dataset(text, schema)?)
}

pub fn load_dataset(path: impl AsRef<Path>, schema: &Schema) -> Result<Dataset> {
    read_dataset(&std::fs::read_to_string(path)?, schema)
}

/// A decoded cell value.
#[derive(Debug, Clone, PartialEq)]
pub enum Decoded {
    Symbol(String),
    Number(f64),
}

impl fmt::Display for Decoded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decoded::Symbol(s) => f.write_str(s),
            Decoded::Number(v) => write!(f, "{v}"),
        }
    }
}

/// Inverse of the encoding for one attribute.
pub fn decode(value: f64, spec: &AttributeSpec) -> Result<Decoded> {
    match spec.kind {
        AttributeKind::Numeric => Ok(Decoded::Number(value)),
        AttributeKind::Categorical => {
            let err = || Error::Decode {
                attribute: spec.name.clone(),
                value,
            };
            if value.fract() != 0.0 || value < 1.0 || value > u32::MAX as f64 {
                return Err(err());
            }
            spec.symbol(value as u32)
                .map(|s| Decoded::Symbol(s.to_string()))
                .ok_or_else(err)
        }
    }
}

/// Complete records (donor pool) and records with at least one missing cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSplit {
    pub g1: Vec<Record>,
    pub g2: Vec<Record>,
}

pub fn split_groups(dataset: &Dataset) -> GroupSplit {
    let (g1, g2) = dataset.records.iter().cloned().partition(Record::is_complete);
    GroupSplit { g1, g2 }
}

/// Per-attribute min-max scaling fitted on present cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub ranges: Vec<(f64, f64)>,
}

impl MinMaxScaler {
    pub fn fit(dataset: &Dataset) -> Self {
        let ranges = (0..dataset.arity())
            .map(|k| {
                dataset
                    .records
                    .iter()
                    .filter_map(|r| r.cells[k].value())
                    .fold(None, |acc: Option<(f64, f64)>, v| match acc {
                        None => Some((v, v)),
                        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
                    })
                    .unwrap_or((0.0, 0.0))
            })
            .collect();
        Self { ranges }
    }

    /// Constant columns scale to 0.
    pub fn scale(&self, attr: usize, value: f64) -> f64 {
        let (lo, hi) = self.ranges[attr];
        if hi > lo {
            (value - lo) / (hi - lo)
        } else {
            0.0
        }
    }

    pub fn transform_record(&self, record: &Record) -> Record {
        let cells = record
            .cells
            .iter()
            .enumerate()
            .map(|(k, c)| match c {
                Cell::Present(v) => Cell::Present(self.scale(k, *v)),
                Cell::Missing => Cell::Missing,
            })
            .collect();
        Record::new(record.id.clone(), cells, record.label.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SYMBOLIC_SCHEMA: &str = include_str!("../fixtures/schema_symbolic.json");
    const NORMALIZED_SCHEMA: &str = include_str!("../fixtures/schema_normalized.json");

    fn symbolic() -> Schema {
        Schema::from_json_str(SYMBOLIC_SCHEMA).unwrap()
    }

    #[test]
    fn nan_marker_becomes_missing() {
        let schema = Schema::from_json_str(NORMALIZED_SCHEMA).unwrap();
        let text = "Record,A1,A2,A3,A4,Decision Class\nR3,1,7,NaN,7,CLASS-1\n";
        let ds = read_dataset(text, &schema).unwrap();
        let r3 = &ds.records[0];
        assert_eq!(r3.id, "R3");
        assert_eq!(
            r3.cells,
            vec![
                Cell::Present(1.0),
                Cell::Present(7.0),
                Cell::Missing,
                Cell::Present(7.0)
            ]
        );
        assert_eq!(r3.label.as_deref(), Some("CLASS-1"));
    }

    #[test]
    fn question_mark_becomes_missing() {
        let schema = Schema::from_json_str(NORMALIZED_SCHEMA).unwrap();
        let text = "Record,A1,A2,A3,A4,Decision Class\nR5,3,3,2,?,CLASS-2\n";
        let ds = read_dataset(text, &schema).unwrap();
        assert_eq!(ds.records[0].missing_indices(), vec![3]);
    }

    #[test]
    fn full_row_is_complete() {
        let schema = Schema::from_json_str(NORMALIZED_SCHEMA).unwrap();
        let text = "Record,A1,A2,A3,A4,Decision Class\nR1,1,5,1,10,CLASS-1\n";
        let ds = read_dataset(text, &schema).unwrap();
        assert!(ds.records[0].is_complete());
    }

    #[test]
    fn arity_mismatch_names_the_row() {
        let schema = Schema::from_json_str(NORMALIZED_SCHEMA).unwrap();
        let text = "Record,A1,A2,A3,A4,Decision Class\nR1,1,5,1,10,CLASS-1\nR2,3,7,1,CLASS-1\n";
        match parse_dataset(text, &schema) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unparseable_number_is_a_parse_error() {
        let schema = Schema::from_json_str(NORMALIZED_SCHEMA).unwrap();
        let text = "Record,A1,A2,A3,A4,Decision Class\nR1,1,five,1,10,CLASS-1\n";
        assert!(matches!(parse_dataset(text, &schema), Err(Error::Parse { row: 1, .. })));
    }

    #[test]
    fn frozen_encoding_rejects_unknown_symbol() {
        let text = "Record,A1,A2,A3,A4,Decision Class\nR1,c19,5,d31,10,CLASS-1\n";
        assert!(matches!(read_dataset(text, &symbolic()), Err(Error::Schema(_))));
    }

    #[test]
    fn encode_matches_reference_ordinals() {
        let text = include_str!("../fixtures/table_01_symbolic.csv");
        let ds = read_dataset(text, &symbolic()).unwrap();
        // R2.A1 = c13 -> 3, R3.A3 = d32 -> 2, R1.A4 numeric pass-through
        assert_eq!(ds.record("R2").unwrap().cells[0], Cell::Present(3.0));
        assert_eq!(ds.record("R3").unwrap().cells[2], Cell::Present(2.0));
        assert_eq!(ds.record("R1").unwrap().cells[3], Cell::Present(10.0));

        let normalized = read_dataset(
            include_str!("../fixtures/table_02_normalized.csv"),
            &Schema::from_json_str(NORMALIZED_SCHEMA).unwrap(),
        )
        .unwrap();
        for (a, b) in ds.records.iter().zip(&normalized.records) {
            assert_eq!(a.cells, b.cells);
        }
    }

    #[test]
    fn auto_encoding_is_lexicographic() {
        let schema = Schema::new(vec![AttributeSpec::categorical("colour", None)]);
        let ds = read_dataset("colour\nred\nblue\ngreen\nblue\n", &schema).unwrap();
        assert_eq!(
            ds.schema.attributes[0].encoding.as_deref().unwrap(),
            ["blue", "green", "red"]
        );
        assert_eq!(ds.records[0].cells[0], Cell::Present(3.0));
        assert_eq!(ds.records[0].id, "R1");
    }

    #[test]
    fn decode_examples() {
        let s = symbolic();
        assert_eq!(decode(2.0, &s.attributes[2]).unwrap(), Decoded::Symbol("d32".into()));
        assert_eq!(decode(3.0, &s.attributes[0]).unwrap(), Decoded::Symbol("c13".into()));
        assert_eq!(decode(7.0, &s.attributes[3]).unwrap(), Decoded::Number(7.0));
        assert!(matches!(decode(2.5, &s.attributes[0]), Err(Error::Decode { .. })));
        assert!(matches!(decode(4.0, &s.attributes[0]), Err(Error::Decode { .. })));
        assert!(matches!(decode(0.0, &s.attributes[0]), Err(Error::Decode { .. })));
    }

    #[test]
    fn split_reference_table() {
        let schema = Schema::from_json_str(NORMALIZED_SCHEMA).unwrap();
        let ds = read_dataset(include_str!("../fixtures/table_03_missing.csv"), &schema).unwrap();
        let split = split_groups(&ds);
        let ids = |v: &[Record]| v.iter().map(|r| r.id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&split.g1), ["R1", "R2", "R4", "R6", "R7", "R8", "R9"]);
        assert_eq!(ids(&split.g2), ["R3", "R5"]);
    }

    #[test]
    fn split_degenerate_groups() {
        let schema = Schema::new(vec![AttributeSpec::numeric("x"), AttributeSpec::numeric("y")]);
        let complete = read_dataset("x,y\n1,2\n3,4\n", &schema).unwrap();
        assert!(split_groups(&complete).g2.is_empty());
        let holes = read_dataset("x,y\n?,2\n3,?\n", &schema).unwrap();
        assert!(split_groups(&holes).g1.is_empty());
    }

    #[test]
    fn unlabeled_file_with_label_column_declared() {
        let schema = Schema::from_json_str(NORMALIZED_SCHEMA).unwrap();
        let ds = read_dataset("Record,A1,A2,A3,A4\nQ,1,2,3,4\n", &schema).unwrap();
        assert_eq!(ds.records[0].label, None);
        assert_eq!(ds.class_count(), 0);
    }

    #[test]
    fn csv_round_trip_of_reference_table() {
        let text = include_str!("../fixtures/table_01_symbolic.csv");
        let ds = read_dataset(text, &symbolic()).unwrap();
        assert_eq!(ds.to_csv().unwrap(), text);
    }

    #[test]
    fn duplicate_encoding_symbol_rejected() {
        let schema = Schema::new(vec![AttributeSpec::categorical(
            "a",
            Some(vec!["x".into(), "x".into()]),
        )]);
        assert!(matches!(schema.validate(), Err(Error::Schema(_))));
    }

    #[test]
    fn scaler_maps_into_unit_interval() {
        let schema = Schema::new(vec![AttributeSpec::numeric("x"), AttributeSpec::numeric("c")]);
        let ds = read_dataset("x,c\n2,5\n6,5\n?,5\n", &schema).unwrap();
        let scaler = MinMaxScaler::fit(&ds);
        assert_eq!(scaler.scale(0, 4.0), 0.5);
        assert_eq!(scaler.scale(1, 5.0), 0.0);
        let t = scaler.transform_record(&ds.records[2]);
        assert_eq!(t.cells[0], Cell::Missing);
    }
}
