//! ADDT data model: long-format observations grouped by temperature level and
//! measurement time.
//!
//! Columns carry meaning by position only: temperature (°C), time (h),
//! response. Header names are required to exist but are not interpreted.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arrhenius::KELVIN_OFFSET;
use crate::error::{AddtError, Result};

/// One destructive measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub temp_c: f64,
    pub time_h: f64,
    pub response: f64,
}

impl Observation {
    pub fn new(temp_c: f64, time_h: f64, response: f64) -> Self {
        Self {
            temp_c,
            time_h,
            response,
        }
    }
}

/// Replicates measured at one (temperature, time) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub temp_c: f64,
    pub time_h: f64,
    /// Indices into [`DegradationDataset::observations`].
    pub rows: Vec<usize>,
}

impl Cell {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Validated, immutable ADDT dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradationDataset {
    observations: Vec<Observation>,
    levels: Vec<f64>,
    cells: Vec<Cell>,
}

fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

impl DegradationDataset {
    /// Builds a dataset, checking every row and the two-level requirement.
    pub fn new(observations: Vec<Observation>) -> Result<Self> {
        for (i, o) in observations.iter().enumerate() {
            check_observation(o, i as u64 + 1)?;
        }
        let stressed = distinct_sorted(
            observations
                .iter()
                .filter(|o| o.time_h > 0.0)
                .map(|o| o.temp_c),
        );
        if stressed.len() < 2 {
            return Err(AddtError::TooFewLevels(stressed.len()));
        }
        let levels = distinct_sorted(observations.iter().map(|o| o.temp_c));
        let cells = group_cells(&observations);
        Ok(Self {
            observations,
            levels,
            cells,
        })
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Sorted distinct temperatures over all rows.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Sorted distinct temperatures that have at least one measurement after time 0.
    pub fn stressed_levels(&self) -> Vec<f64> {
        distinct_sorted(
            self.observations
                .iter()
                .filter(|o| o.time_h > 0.0)
                .map(|o| o.temp_c),
        )
    }

    /// Cells ordered by temperature, then time.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn time_points(&self) -> Vec<f64> {
        distinct_sorted(self.observations.iter().map(|o| o.time_h))
    }

    pub fn max_time(&self) -> f64 {
        self.observations
            .iter()
            .map(|o| o.time_h)
            .fold(0.0, f64::max)
    }

    pub fn responses(&self) -> Vec<f64> {
        self.observations.iter().map(|o| o.response).collect()
    }

    pub fn time_zero_responses(&self) -> Vec<f64> {
        self.observations
            .iter()
            .filter(|o| o.time_h == 0.0)
            .map(|o| o.response)
            .collect()
    }

    /// Moves every time-0 row to the lowest temperature among rows measured
    /// after time 0. The boolean is `false` when there were no time-0 rows
    /// (the dataset is then returned unchanged).
    pub fn remap_time_zero(&self) -> (Self, bool) {
        let has_zero = self.observations.iter().any(|o| o.time_h == 0.0);
        if !has_zero {
            return (self.clone(), false);
        }
        // new() guarantees at least two stressed levels
        let lowest = self.stressed_levels()[0];
        let observations = self
            .observations
            .iter()
            .map(|o| {
                if o.time_h == 0.0 {
                    Observation {
                        temp_c: lowest,
                        ..*o
                    }
                } else {
                    *o
                }
            })
            .collect();
        let ds = Self::new(observations).expect("remapping preserves validity");
        (ds, true)
    }

    /// Initial degradation level: the override when given, otherwise the mean
    /// of all time-0 responses.
    pub fn initial_value(&self, override_value: Option<f64>) -> Result<InitialValue> {
        if let Some(v) = override_value {
            return InitialValue::new(v);
        }
        let zero = self.time_zero_responses();
        if zero.is_empty() {
            return Err(AddtError::NoInitialValue);
        }
        InitialValue::new(zero.iter().sum::<f64>() / zero.len() as f64)
    }

    /// Rows satisfying every clause of `subset`.
    pub fn filter(&self, subset: &Subset) -> Result<Self> {
        let kept = self
            .observations
            .iter()
            .copied()
            .filter(|o| subset.matches(o))
            .collect();
        Self::new(kept)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() < 3 || headers.iter().take(3).any(|h| h.is_empty()) {
            return Err(AddtError::MissingColumn(format!(
                "header has {} named column(s)",
                headers.iter().filter(|h| !h.is_empty()).count()
            )));
        }
        let mut observations = Vec::new();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            if record.iter().all(|f| f.is_empty()) {
                continue;
            }
            if record.len() < 3 {
                return Err(AddtError::MissingColumn(format!(
                    "line {line} has {} field(s)",
                    record.len()
                )));
            }
            let field = |idx: usize, column: &'static str| -> Result<f64> {
                let raw = &record[idx];
                raw.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| AddtError::NonNumeric {
                        line,
                        column,
                        value: raw.to_string(),
                    })
            };
            let obs = Observation {
                temp_c: field(0, "temperature")?,
                time_h: field(1, "time")?,
                response: field(2, "response")?,
            };
            check_observation(&obs, line)?;
            observations.push(obs);
        }
        Self::new(observations)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| AddtError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        Self::from_reader(text.as_bytes())
    }

    /// Serializes with the conventional header. Values use the shortest
    /// representation that parses back to the same `f64`.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("TempC,TimeH,Response\n");
        for o in &self.observations {
            let _ = writeln!(out, "{},{},{}", o.temp_c, o.time_h, o.response);
        }
        out
    }
}

fn check_observation(o: &Observation, line: u64) -> Result<()> {
    if !(o.temp_c > -KELVIN_OFFSET) {
        return Err(AddtError::NonPhysicalTemperature(o.temp_c));
    }
    if !(o.time_h >= 0.0) {
        return Err(AddtError::NegativeTime {
            line,
            value: o.time_h,
        });
    }
    if !(o.response > 0.0) {
        return Err(AddtError::NonPositiveResponse {
            line,
            value: o.response,
        });
    }
    Ok(())
}

fn distinct_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(|a, b| cmp_f64(*a, *b));
    v.dedup();
    v
}

fn group_cells(observations: &[Observation]) -> Vec<Cell> {
    let mut order: Vec<usize> = (0..observations.len()).collect();
    order.sort_by(|&a, &b| {
        let (oa, ob) = (&observations[a], &observations[b]);
        cmp_f64(oa.temp_c, ob.temp_c)
            .then(cmp_f64(oa.time_h, ob.time_h))
            .then(a.cmp(&b))
    });
    let mut cells: Vec<Cell> = Vec::new();
    for idx in order {
        let o = &observations[idx];
        match cells.last_mut() {
            Some(c) if c.temp_c == o.temp_c && c.time_h == o.time_h => c.rows.push(idx),
            _ => cells.push(Cell {
                temp_c: o.temp_c,
                time_h: o.time_h,
                rows: vec![idx],
            }),
        }
    }
    cells
}

/// Initial (time-0) degradation level, strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialValue(f64);

impl InitialValue {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(AddtError::InvalidArgument(format!(
                "initial value must be positive, got {value}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Absolute failure threshold for a percentage of the initial level.
    pub fn threshold(self, percent: f64) -> f64 {
        self.0 * percent / 100.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Temp,
    Time,
    Response,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

#[derive(Debug, Clone, PartialEq)]
struct Clause {
    field: Field,
    op: Op,
    value: f64,
}

/// Row filter: comma-separated conjunction of comparisons such as
/// `TempC>=200,TimeH<=3360`. Fields: `TempC`/`temp`, `TimeH`/`time`,
/// `Response`/`response`; operators `< <= > >= == !=`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Subset {
    clauses: Vec<Clause>,
}

impl Subset {
    pub fn parse(expr: &str) -> Result<Self> {
        let mut clauses = Vec::new();
        for raw in expr.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            // two-character operators first
            let ops = [
                ("<=", Op::Le),
                (">=", Op::Ge),
                ("==", Op::Eq),
                ("!=", Op::Ne),
                ("<", Op::Lt),
                (">", Op::Gt),
            ];
            let (pos, sym, op) = ops
                .iter()
                .filter_map(|(s, op)| raw.find(s).map(|p| (p, *s, *op)))
                .min_by_key(|(p, s, _)| (*p, std::cmp::Reverse(s.len())))
                .ok_or_else(|| {
                    AddtError::InvalidArgument(format!("subset clause {raw:?} has no comparison"))
                })?;
            let name = raw[..pos].trim();
            let rhs = raw[pos + sym.len()..].trim();
            let field = match name.to_ascii_lowercase().as_str() {
                "tempc" | "temp" | "temperature" => Field::Temp,
                "timeh" | "time" => Field::Time,
                "response" => Field::Response,
                _ => {
                    return Err(AddtError::InvalidArgument(format!(
                        "subset field {name:?} is not one of TempC, TimeH, Response"
                    )))
                }
            };
            let value = rhs.parse::<f64>().map_err(|_| {
                AddtError::InvalidArgument(format!("subset value {rhs:?} is not a number"))
            })?;
            clauses.push(Clause { field, op, value });
        }
        Ok(Self { clauses })
    }

    pub fn matches(&self, o: &Observation) -> bool {
        self.clauses.iter().all(|c| {
            let lhs = match c.field {
                Field::Temp => o.temp_c,
                Field::Time => o.time_h,
                Field::Response => o.response,
            };
            match c.op {
                Op::Lt => lhs < c.value,
                Op::Le => lhs <= c.value,
                Op::Gt => lhs > c.value,
                Op::Ge => lhs >= c.value,
                Op::Eq => lhs == c.value,
                Op::Ne => lhs != c.value,
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn adhesive_layout() {
        let ds = fixtures::adhesive_bond_b();
        assert_eq!(ds.len(), 82);
        assert_eq!(ds.levels(), &[50.0, 60.0, 70.0]);
        assert_eq!(
            ds.time_points(),
            vec![0.0, 336.0, 672.0, 1008.0, 2016.0, 2688.0]
        );
    }

    #[test]
    fn seal_layout_before_remap() {
        let ds = fixtures::seal_strength();
        assert_eq!(ds.len(), 210);
        assert_eq!(ds.levels(), &[100.0, 200.0, 250.0, 300.0, 350.0]);
    }

    #[test]
    fn single_row_rejected() {
        let err =
            DegradationDataset::from_csv_str("TempC,TimeH,Response\n50,0,70.1\n").unwrap_err();
        assert!(matches!(err, AddtError::TooFewLevels(0)), "{err}");
    }

    #[test]
    fn descriptive_parse_errors() {
        let missing = DegradationDataset::from_csv_str("TempC,TimeH\n50,0\n").unwrap_err();
        assert!(matches!(missing, AddtError::MissingColumn(_)));

        let bad = DegradationDataset::from_csv_str("a,b,c\n50,0,70\n60,10,x\n").unwrap_err();
        assert!(
            matches!(
                bad,
                AddtError::NonNumeric {
                    line: 3,
                    column: "response",
                    ..
                }
            ),
            "{bad}"
        );

        let neg = DegradationDataset::from_csv_str("a,b,c\n50,0,70\n60,10,-1\n").unwrap_err();
        assert!(matches!(
            neg,
            AddtError::NonPositiveResponse { line: 3, .. }
        ));

        let cold = DegradationDataset::from_csv_str("a,b,c\n-274,0,70\n").unwrap_err();
        assert!(matches!(cold, AddtError::NonPhysicalTemperature(_)));
    }

    #[test]
    fn seal_remap_moves_time_zero_rows() {
        let (ds, remapped) = fixtures::seal_strength().remap_time_zero();
        assert!(remapped);
        assert_eq!(ds.levels(), &[200.0, 250.0, 300.0, 350.0]);
        let first = ds.observations()[0];
        assert_eq!(
            (first.temp_c, first.time_h, first.response),
            (200.0, 0.0, 28.74)
        );
        assert_eq!(ds.len(), 210);
    }

    #[test]
    fn adhesive_remap_is_identity() {
        let ds = fixtures::adhesive_bond_b();
        let (re, remapped) = ds.remap_time_zero();
        assert!(remapped);
        assert_eq!(re, ds);
    }

    #[test]
    fn remap_without_time_zero_flags() {
        let ds = DegradationDataset::new(vec![
            Observation::new(50.0, 10.0, 5.0),
            Observation::new(60.0, 10.0, 4.0),
        ])
        .unwrap();
        let (re, remapped) = ds.remap_time_zero();
        assert!(!remapped);
        assert_eq!(re, ds);
    }

    #[test]
    fn initial_value_rules() {
        let ds = fixtures::adhesive_bond_b();
        let v = ds.initial_value(None).unwrap().value();
        // mean(70.1, 76.7, 84.5, 88.0, 88.9, 90.4, 91.9, 98.1)
        assert!((v - 86.075).abs() < 1e-12);
        assert_eq!(ds.initial_value(Some(100.0)).unwrap().value(), 100.0);

        let no_zero = DegradationDataset::new(vec![
            Observation::new(50.0, 10.0, 5.0),
            Observation::new(60.0, 10.0, 4.0),
        ])
        .unwrap();
        assert!(matches!(
            no_zero.initial_value(None),
            Err(AddtError::NoInitialValue)
        ));
        assert!(no_zero.initial_value(Some(0.0)).is_err());
    }

    #[test]
    fn cells_are_grouped() {
        let ds = fixtures::adhesive_bond_b();
        let sizes: Vec<usize> = ds.cells().iter().map(Cell::len).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 82);
        assert_eq!(ds.cells()[0].time_h, 0.0);
        assert_eq!(ds.cells()[0].len(), 8);
        assert_eq!(ds.cells().len(), 1 + 4 + 4 + 4);
    }

    #[test]
    fn subset_grammar() {
        let s = Subset::parse("TempC>=250, time<=3360").unwrap();
        assert!(s.matches(&Observation::new(250.0, 3360.0, 1.0)));
        assert!(!s.matches(&Observation::new(200.0, 840.0, 1.0)));
        assert!(!s.matches(&Observation::new(300.0, 4200.0, 1.0)));
        assert!(Subset::parse("Pressure<3").is_err());
        assert!(Subset::parse("TempC 3").is_err());
        let ds = fixtures::seal_strength()
            .filter(&Subset::parse("TempC!=100").unwrap())
            .unwrap();
        assert_eq!(ds.len(), 200);
    }
}
