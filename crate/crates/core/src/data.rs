//! Labeled tabular data: loading, min-max scaling, stratified splitting and
//! column projection through feature masks.

use std::fmt;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Binary class label. Benign tumours are the positive class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub const BOTH: [Label; 2] = [Label::Positive, Label::Negative];

    /// 1 for positive, 0 for negative.
    pub fn as_unit(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => 0.0,
        }
    }

    /// +1 for positive, -1 for negative.
    pub fn as_sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Dense row-major matrix of `f64`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Build from row vectors; every row must have the same width.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// An empty matrix with a fixed column count.
    pub fn empty(cols: usize) -> Self {
        Matrix {
            rows: 0,
            cols,
            data: Vec::new(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.rows).map(move |i| self.get(i, j))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }

    fn select_cols(&self, cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            let row = self.row(i);
            data.extend(cols.iter().map(|&j| row[j]));
        }
        Matrix {
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }
}

/// Feature matrix plus labels and column names.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    features: Matrix,
    labels: Vec<Label>,
    feature_names: Vec<String>,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Vec<Label>, feature_names: Vec<String>) -> Result<Self> {
        if features.n_rows() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: features.n_rows(),
                actual: labels.len(),
            });
        }
        if features.n_cols() != feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: features.n_cols(),
                actual: feature_names.len(),
            });
        }
        Ok(Dataset {
            features,
            labels,
            feature_names,
        })
    }

    /// Dataset with generated column names `f0, f1, ...`.
    pub fn with_default_names(features: Matrix, labels: Vec<Label>) -> Result<Self> {
        let names = (0..features.n_cols()).map(|j| format!("f{j}")).collect();
        Dataset::new(features, labels, names)
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.features.n_cols()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn class_count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Rows at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(indices),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }
}

/// Column selector over a dataset. `true` keeps the column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureMask {
    bits: Vec<bool>,
}

impl FeatureMask {
    pub fn new(bits: Vec<bool>) -> Self {
        FeatureMask { bits }
    }

    pub fn all(len: usize) -> Self {
        FeatureMask {
            bits: vec![true; len],
        }
    }

    pub fn none(len: usize) -> Self {
        FeatureMask {
            bits: vec![false; len],
        }
    }

    pub fn from_indices(len: usize, selected: &[usize]) -> Self {
        let mut bits = vec![false; len];
        for &j in selected {
            bits[j] = true;
        }
        FeatureMask { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count_selected(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn selects_none(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn selected_indices(&self) -> Vec<usize> {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(j, &b)| b.then_some(j))
            .collect()
    }
}

/// Per-column minimum and maximum learned from training rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

/// Column names of the 30 WDBC measurements, in file order.
pub const WDBC_FEATURE_NAMES: [&str; 30] = [
    "radius_mean",
    "texture_mean",
    "perimeter_mean",
    "area_mean",
    "smoothness_mean",
    "compactness_mean",
    "concavity_mean",
    "concave_points_mean",
    "symmetry_mean",
    "fractal_dimension_mean",
    "radius_se",
    "texture_se",
    "perimeter_se",
    "area_se",
    "smoothness_se",
    "compactness_se",
    "concavity_se",
    "concave_points_se",
    "symmetry_se",
    "fractal_dimension_se",
    "radius_worst",
    "texture_worst",
    "perimeter_worst",
    "area_worst",
    "smoothness_worst",
    "compactness_worst",
    "concavity_worst",
    "concave_points_worst",
    "symmetry_worst",
    "fractal_dimension_worst",
];

fn parse_value(field: &str, line: usize, column: usize) -> Result<f64> {
    let field = field.trim();
    if field.is_empty() {
        return Err(Error::parse(line, format!("column {column} is blank")));
    }
    let v: f64 = field.parse().map_err(|_| {
        Error::parse(
            line,
            format!("column {column}: cannot parse {field:?} as a number"),
        )
    })?;
    if !v.is_finite() {
        return Err(Error::parse(
            line,
            format!("column {column}: non-finite value {field:?}"),
        ));
    }
    Ok(v)
}

/// Parse the UCI `wdbc.data` format: `id,diagnosis,30 measurements` per line,
/// no header. `B` maps to [`Label::Positive`], `M` to [`Label::Negative`].
pub fn parse_wdbc(text: &str) -> Result<Dataset> {
    const WIDTH: usize = 2 + WDBC_FEATURE_NAMES.len();
    let mut data = Vec::new();
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != WIDTH {
            return Err(Error::parse(
                line_no,
                format!("expected {WIDTH} fields, found {}", fields.len()),
            ));
        }
        let label = match fields[1].trim() {
            "B" => Label::Positive,
            "M" => Label::Negative,
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("diagnosis must be M or B, found {other:?}"),
                ))
            }
        };
        for (j, field) in fields[2..].iter().enumerate() {
            data.push(parse_value(field, line_no, j + 2)?);
        }
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::NoRecords);
    }
    let features = Matrix::new(labels.len(), WDBC_FEATURE_NAMES.len(), data)?;
    let names = WDBC_FEATURE_NAMES.iter().map(|s| s.to_string()).collect();
    Dataset::new(features, labels, names)
}

/// Parse a headed CSV with a `label` column holding `1` (positive) or `0`
/// (negative); every other column is a numeric feature.
pub fn parse_labeled_csv(text: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::parse(1, e.to_string()))?
        .clone();
    let label_col = headers
        .iter()
        .position(|h| h == "label")
        .ok_or_else(|| Error::parse(1, "header has no `label` column"))?;
    let names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != label_col)
        .map(|(_, h)| h.to_string())
        .collect();

    let mut data = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, e.to_string())
        })?;
        let line_no = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != headers.len() {
            return Err(Error::parse(
                line_no,
                format!("expected {} fields, found {}", headers.len(), record.len()),
            ));
        }
        for (j, field) in record.iter().enumerate() {
            if j == label_col {
                labels.push(match field {
                    "1" => Label::Positive,
                    "0" => Label::Negative,
                    other => {
                        return Err(Error::parse(
                            line_no,
                            format!("label must be 0 or 1, found {other:?}"),
                        ))
                    }
                });
            } else {
                data.push(parse_value(field, line_no, j)?);
            }
        }
    }
    if labels.is_empty() {
        return Err(Error::NoRecords);
    }
    let features = Matrix::new(labels.len(), names.len(), data)?;
    Dataset::new(features, labels, names)
}

/// Read a dataset from disk. Files whose first line contains a `label`
/// header field are read as generic labeled CSV, everything else as WDBC.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let is_headed = text
        .lines()
        .next()
        .is_some_and(|first| first.split(',').any(|f| f.trim() == "label"));
    let parsed = if is_headed {
        parse_labeled_csv(&text)
    } else {
        parse_wdbc(&text)
    };
    parsed.map_err(|e| Error::InFile {
        path: path.to_path_buf(),
        source: Box::new(e),
    })
}

pub fn fit_scaler(train: &Dataset) -> Result<ScalerParams> {
    if train.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let d = train.n_features();
    let mut mins = vec![f64::INFINITY; d];
    let mut maxs = vec![f64::NEG_INFINITY; d];
    for row in train.features().rows() {
        for (j, &x) in row.iter().enumerate() {
            mins[j] = mins[j].min(x);
            maxs[j] = maxs[j].max(x);
        }
    }
    Ok(ScalerParams { mins, maxs })
}

/// Min-max scale every column into `[0, 1]`. Constant columns map to 0 and
/// values outside the fitted range are clipped.
pub fn transform(ds: &Dataset, scaler: &ScalerParams) -> Result<Dataset> {
    let d = ds.n_features();
    if scaler.mins.len() != d || scaler.maxs.len() != d {
        return Err(Error::DimensionMismatch {
            expected: scaler.mins.len(),
            actual: d,
        });
    }
    let mut features = ds.features().clone();
    for i in 0..features.n_rows() {
        for (j, x) in features.row_mut(i).iter_mut().enumerate() {
            let range = scaler.maxs[j] - scaler.mins[j];
            *x = if range > 0.0 {
                ((*x - scaler.mins[j]) / range).clamp(0.0, 1.0)
            } else {
                0.0
            };
        }
    }
    Ok(Dataset {
        features,
        labels: ds.labels.clone(),
        feature_names: ds.feature_names.clone(),
    })
}

/// Per-class sample quotas for a stratified draw of `total` rows, by the
/// largest-remainder method. Ties go to the earlier class in [`Label::BOTH`].
fn stratified_quotas(counts: [usize; 2], total: usize) -> [usize; 2] {
    let n: usize = counts.iter().sum();
    let exact = counts.map(|c| c as f64 * total as f64 / n as f64);
    let mut quotas = exact.map(|q| q.floor() as usize);
    let mut left = total - quotas.iter().sum::<usize>();
    let mut order = [0usize, 1];
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &c in order.iter().cycle().take(4) {
        if left == 0 {
            break;
        }
        if quotas[c] < counts[c] {
            quotas[c] += 1;
            left -= 1;
        }
    }
    quotas
}

fn class_indices(labels: &[Label]) -> [Vec<usize>; 2] {
    Label::BOTH.map(|label| {
        labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == label).then_some(i))
            .collect()
    })
}

/// Row indices of a seeded, class-stratified train/test partition, each
/// sorted ascending.
pub fn stratified_split_indices(
    labels: &[Label],
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::config(format!(
            "train fraction must lie strictly between 0 and 1, got {train_fraction}"
        )));
    }
    let mut by_class = class_indices(labels);
    for (label, idx) in Label::BOTH.iter().zip(&by_class) {
        if idx.is_empty() {
            return Err(Error::ClassTooSmall {
                label: label.name(),
                count: 0,
                required: 1,
            });
        }
    }
    let n = labels.len();
    let n_train = ((n as f64 * train_fraction).round() as usize).clamp(1, n - 1);
    let quotas = stratified_quotas([by_class[0].len(), by_class[1].len()], n_train);

    let mut rng = rng::seeded(seed);
    let mut train_idx = Vec::with_capacity(n_train);
    let mut test_idx = Vec::with_capacity(n - n_train);
    for (idx, &quota) in by_class.iter_mut().zip(&quotas) {
        idx.shuffle(&mut rng);
        train_idx.extend_from_slice(&idx[..quota]);
        test_idx.extend_from_slice(&idx[quota..]);
    }
    train_idx.sort_unstable();
    test_idx.sort_unstable();
    Ok((train_idx, test_idx))
}

/// Seeded, class-stratified train/test partition. Both parts keep the
/// original row order.
pub fn stratified_split(
    ds: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    let (train_idx, test_idx) = stratified_split_indices(ds.labels(), train_fraction, seed)?;
    Ok((ds.subset(&train_idx), ds.subset(&test_idx)))
}

/// Keep only the columns selected by `mask`, in their original order.
pub fn apply_mask(ds: &Dataset, mask: &FeatureMask) -> Result<Dataset> {
    if mask.len() != ds.n_features() {
        return Err(Error::DimensionMismatch {
            expected: ds.n_features(),
            actual: mask.len(),
        });
    }
    if mask.selects_none() {
        return Err(Error::EmptyMask);
    }
    let cols = mask.selected_indices();
    Ok(Dataset {
        features: ds.features.select_cols(&cols),
        labels: ds.labels.clone(),
        feature_names: cols.iter().map(|&j| ds.feature_names[j].clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wdbc_line(id: usize, diagnosis: &str, value: f64) -> String {
        let values: Vec<String> = (0..30).map(|j| format!("{}", value + j as f64)).collect();
        format!("{id},{diagnosis},{}", values.join(","))
    }

    fn toy(rows: &[&[f64]], labels: &[bool]) -> Dataset {
        Dataset::with_default_names(
            Matrix::from_rows(rows).unwrap(),
            labels.iter().map(|&b| Label::from_bool(b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn parses_single_benign_record() {
        let ds = parse_wdbc(&wdbc_line(1, "B", 0.5)).unwrap();
        assert_eq!(ds.n_samples(), 1);
        assert_eq!(ds.n_features(), 30);
        assert_eq!(ds.labels(), &[Label::Positive]);
        assert_eq!(ds.features().get(0, 0), 0.5);
        assert_eq!(ds.features().get(0, 29), 29.5);
        assert_eq!(ds.feature_names()[7], "concave_points_mean");
    }

    #[test]
    fn empty_input_has_no_records() {
        assert!(matches!(parse_wdbc(""), Err(Error::NoRecords)));
        assert!(matches!(parse_wdbc("\n\n  \n"), Err(Error::NoRecords)));
        assert_eq!(parse_wdbc("").unwrap_err().to_string(), "no records");
    }

    #[test]
    fn malformed_lines_report_their_line_number() {
        let good = wdbc_line(1, "M", 1.0);
        let short = "2,B,1.0,2.0";
        let err = parse_wdbc(&format!("{good}\n{short}")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let bad_diag = wdbc_line(3, "X", 1.0);
        let err = parse_wdbc(&format!("{good}\n\n{bad_diag}")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let bad_num = wdbc_line(4, "B", 1.0).replacen(",1,", ",abc,", 1);
        let bad_num = bad_num.replacen("B,1", "B,abc", 1);
        let err = parse_wdbc(&bad_num).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");

        let blank = wdbc_line(5, "B", 1.0).replacen("B,1", "B,", 1);
        assert!(matches!(
            parse_wdbc(&blank),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn labeled_csv_reads_label_column() {
        let ds = parse_labeled_csv("a,label,b\n1.0,1,2.0\n3.0,0,4.0\n").unwrap();
        assert_eq!(ds.feature_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(ds.labels(), &[Label::Positive, Label::Negative]);
        assert_eq!(ds.features().row(1), &[3.0, 4.0]);
        assert!(matches!(
            parse_labeled_csv("a,label\n1.0,2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_labeled_csv("a,b\n1,2\n").is_err());
        assert!(matches!(
            parse_labeled_csv("a,label\n"),
            Err(Error::NoRecords)
        ));
    }

    #[test]
    fn scaler_fits_column_extremes() {
        let ds = toy(
            &[&[0.0, 7.0], &[5.0, 7.0], &[10.0, 7.0]],
            &[true, false, true],
        );
        let s = fit_scaler(&ds).unwrap();
        assert_eq!(s.mins, vec![0.0, 7.0]);
        assert_eq!(s.maxs, vec![10.0, 7.0]);

        let two = toy(&[&[1.0, 2.0], &[3.0, 4.0]], &[true, false]);
        let s = fit_scaler(&two).unwrap();
        assert_eq!(s.mins, vec![1.0, 2.0]);
        assert_eq!(s.maxs, vec![3.0, 4.0]);
    }

    #[test]
    fn transform_maps_range_and_clips() {
        let ds = toy(
            &[&[0.0, 7.0], &[5.0, 7.0], &[10.0, 7.0]],
            &[true, false, true],
        );
        let s = fit_scaler(&ds).unwrap();
        let t = transform(&ds, &s).unwrap();
        assert_eq!(
            t.features().column(0).collect::<Vec<_>>(),
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!(
            t.features().column(1).collect::<Vec<_>>(),
            vec![0.0, 0.0, 0.0]
        );

        let outside = toy(&[&[-5.0, 9.0], &[20.0, 1.0]], &[true, false]);
        let t = transform(&outside, &s).unwrap();
        assert_eq!(t.features().row(0), &[0.0, 0.0]);
        assert_eq!(t.features().row(1), &[1.0, 0.0]);

        let narrow = ScalerParams {
            mins: vec![0.0],
            maxs: vec![1.0],
        };
        assert!(matches!(
            transform(&ds, &narrow),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            fit_scaler(&ds.subset(&[])),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn symmetric_split_is_even_and_mixed() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let labels: Vec<bool> = (0..10).map(|i| i < 5).collect();
        let ds = Dataset::with_default_names(
            Matrix::from_rows(&rows).unwrap(),
            labels.iter().map(|&b| Label::from_bool(b)).collect(),
        )
        .unwrap();
        for seed in 0..20 {
            let (train, test) = stratified_split(&ds, 0.5, seed).unwrap();
            assert_eq!(train.n_samples(), 5);
            assert_eq!(test.n_samples(), 5);
            assert!(train.class_count(Label::Positive) > 0);
            assert!(train.class_count(Label::Negative) > 0);
        }
    }

    #[test]
    fn split_rejects_missing_class_and_bad_fraction() {
        let ds = toy(&[&[0.0], &[1.0]], &[true, true]);
        assert!(matches!(
            stratified_split(&ds, 0.5, 1),
            Err(Error::ClassTooSmall { count: 0, .. })
        ));
        let ds = toy(&[&[0.0], &[1.0]], &[true, false]);
        assert!(stratified_split(&ds, 0.0, 1).is_err());
        assert!(stratified_split(&ds, 1.0, 1).is_err());
    }

    #[test]
    fn mask_projection() {
        let ds = toy(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]], &[true, false]);
        assert_eq!(apply_mask(&ds, &FeatureMask::all(3)).unwrap(), ds);

        let first = apply_mask(&ds, &FeatureMask::from_indices(3, &[0])).unwrap();
        assert_eq!(first.n_features(), 1);
        assert_eq!(
            first.features().column(0).collect::<Vec<_>>(),
            vec![1.0, 4.0]
        );
        assert_eq!(first.labels(), ds.labels());
        assert_eq!(first.feature_names(), &["f0".to_string()]);

        assert!(matches!(
            apply_mask(&ds, &FeatureMask::none(3)),
            Err(Error::EmptyMask)
        ));
        assert!(matches!(
            apply_mask(&ds, &FeatureMask::all(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn quotas_use_largest_remainder() {
        assert_eq!(stratified_quotas([357, 212], 341), [214, 127]);
        assert_eq!(stratified_quotas([5, 5], 5), [3, 2]);
        assert_eq!(stratified_quotas([1, 1], 1), [1, 0]);
    }

    fn arb_dataset() -> impl Strategy<Value = Dataset> {
        (2usize..40, 1usize..5).prop_flat_map(|(n, d)| {
            (
                proptest::collection::vec(-100.0f64..100.0, n * d),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(data, mut labels)| {
                    labels[0] = true;
                    labels[1] = false;
                    Dataset::with_default_names(
                        Matrix::new(n, d, data).unwrap(),
                        labels.into_iter().map(Label::from_bool).collect(),
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn fitted_transform_spans_unit_interval(ds in arb_dataset()) {
            let s = fit_scaler(&ds).unwrap();
            let t = transform(&ds, &s).unwrap();
            for j in 0..t.n_features() {
                let col: Vec<f64> = t.features().column(j).collect();
                prop_assert!(col.iter().all(|&x| (0.0..=1.0).contains(&x)));
                if s.maxs[j] > s.mins[j] {
                    prop_assert_eq!(col.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
                    prop_assert_eq!(col.iter().cloned().fold(f64::NEG_INFINITY, f64::max), 1.0);
                }
            }
        }

        #[test]
        fn split_is_a_stratified_partition(ds in arb_dataset(), frac in 0.05f64..0.95, seed in any::<u64>()) {
            let (train, test) = stratified_split(&ds, frac, seed).unwrap();
            prop_assert_eq!(train.n_samples() + test.n_samples(), ds.n_samples());
            prop_assert!(train.n_samples() >= 1 && test.n_samples() >= 1);
            let mut rows: Vec<Vec<u64>> = train.features().rows().chain(test.features().rows())
                .map(|r| r.iter().map(|x| x.to_bits()).collect()).collect();
            let mut orig: Vec<Vec<u64>> = ds.features().rows()
                .map(|r| r.iter().map(|x| x.to_bits()).collect()).collect();
            rows.sort();
            orig.sort();
            prop_assert_eq!(rows, orig);
            for label in Label::BOTH {
                let expected = ds.class_count(label) as f64 * train.n_samples() as f64 / ds.n_samples() as f64;
                prop_assert!((train.class_count(label) as f64 - expected).abs() <= 1.0);
            }
            let again = stratified_split(&ds, frac, seed).unwrap();
            prop_assert_eq!(again.0, train);
        }

        #[test]
        fn mask_keeps_selected_columns_in_order(ds in arb_dataset(), bits in proptest::collection::vec(any::<bool>(), 5)) {
            let bits: Vec<bool> = bits.into_iter().take(ds.n_features()).collect();
            let mask = FeatureMask::new(bits);
            prop_assume!(!mask.selects_none());
            let projected = apply_mask(&ds, &mask).unwrap();
            let cols = mask.selected_indices();
            prop_assert_eq!(projected.n_features(), cols.len());
            for (k, &j) in cols.iter().enumerate() {
                prop_assert!(projected.features().column(k).eq(ds.features().column(j)));
            }
        }
    }
}
