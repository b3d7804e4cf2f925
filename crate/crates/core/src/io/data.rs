use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use ndarray::{Array1, Array2};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reads a headered, comma-separated numeric file.
///
/// `feature_columns` selects and orders the features; by default every
/// column except the target is used, in file order. Row order is preserved.
pub fn load_csv<T: Scalar>(
    path: impl AsRef<Path>,
    target_column: &str,
    feature_columns: Option<&[String]>,
) -> Result<Dataset<T>> {
    let path = path.as_ref();
    let ingest = |message: String| Error::Ingest { path: path.to_path_buf(), message };

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| ingest(e.to_string()))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| ingest(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut seen = HashSet::new();
    for name in &header {
        if !seen.insert(name.as_str()) {
            return Err(ingest(format!("duplicate header name `{name}`")));
        }
    }
    let position = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ingest(format!("no column named `{name}`")))
    };

    let target_pos = position(target_column)?;
    let feature_pos: Vec<usize> = match feature_columns {
        Some(names) => names.iter().map(|n| position(n)).collect::<Result<_>>()?,
        None => (0..header.len()).filter(|&i| i != target_pos).collect(),
    };
    if feature_pos.contains(&target_pos) {
        return Err(ingest(format!("target `{target_column}` also selected as a feature")));
    }
    if feature_pos.is_empty() {
        return Err(ingest("no feature columns selected".into()));
    }

    let mut features = Vec::new();
    let mut target = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| ingest(e.to_string()))?;
        let line = record.position().map_or(row + 2, |p| p.line() as usize);
        let cell = |pos: usize| -> Result<T> {
            let name = &header[pos];
            let raw = record
                .get(pos)
                .ok_or_else(|| ingest(format!("line {line}, column `{name}`: missing cell")))?
                .trim();
            if raw.is_empty() {
                return Err(ingest(format!("line {line}, column `{name}`: empty cell")));
            }
            let value: T = raw
                .parse()
                .map_err(|_| ingest(format!("line {line}, column `{name}`: cannot parse {raw:?} as a number")))?;
            if !value.is_finite() {
                return Err(ingest(format!("line {line}, column `{name}`: non-finite value {raw:?}")));
            }
            Ok(value)
        };
        for &pos in &feature_pos {
            features.push(cell(pos)?);
        }
        target.push(cell(target_pos)?);
    }

    let n = target.len();
    if n < 2 {
        return Err(ingest(format!("need at least 2 data rows, found {n}")));
    }
    let features = Array2::from_shape_vec((n, feature_pos.len()), features).expect("row-major shape");
    let names = feature_pos.iter().map(|&p| header[p].clone()).collect();
    Dataset::new(features, Array1::from(target), names)?.with_source_columns(feature_pos)
}

/// Writes features then the target column, with shortest round-trip decimals.
pub fn write_dataset_csv<T: Scalar, W: Write>(data: &Dataset<T>, target_name: &str, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = data.feature_names().iter().map(String::as_str).collect();
    header.push(target_name);
    w.write_record(&header).map_err(|e| Error::Serialize(e.to_string()))?;
    for j in 0..data.n_rows() {
        let mut fields: Vec<String> = data.row(j).iter().map(|v| v.to_string()).collect();
        fields.push(data.target()[j].to_string());
        w.write_record(&fields).map_err(|e| Error::Serialize(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_all_non_target_columns() {
        let f = file("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
        let d: Dataset<f64> = load_csv(f.path(), "y", None).unwrap();
        assert_eq!(d.n_rows(), 3);
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.feature_names(), ["a", "b"]);
        assert_eq!(d.target().to_vec(), vec![3.0, 6.0, 9.0]);
        assert_eq!(d.row(1).to_vec(), vec![4.0, 5.0]);
    }

    #[test]
    fn projection_keeps_source_positions() {
        let f = file("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
        let d: Dataset<f64> = load_csv(f.path(), "y", Some(&["b".to_string()])).unwrap();
        assert_eq!(d.n_features(), 1);
        assert_eq!(d.column(0).unwrap().to_vec(), vec![2.0, 5.0, 8.0]);
        assert_eq!(d.source_column(0), 1);
    }

    #[test]
    fn nan_cell_is_named() {
        let f = file("a,y\n1,2\nNaN,3\n");
        let err = load_csv::<f64>(f.path(), "y", None).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("`a`") && err.contains("NaN"), "{err}");
    }

    #[test]
    fn ingestion_errors() {
        let cases = [
            ("a,y\n1,2\n3,4\n", "z", "no column named `z`"),
            ("a,y\n1,2\n", "y", "at least 2 data rows"),
            ("a,a,y\n1,2,3\n4,5,6\n", "y", "duplicate header"),
            ("a,y\n1,2\n,4\n", "y", "empty cell"),
            ("a,y\n1,2\nfoo,4\n", "y", "cannot parse"),
            ("a,y\n1,2\n3\n", "y", ""),
        ];
        for (contents, target, needle) in cases {
            let f = file(contents);
            let err = load_csv::<f64>(f.path(), target, None).unwrap_err().to_string();
            assert!(err.contains(needle), "{err} should mention {needle}");
        }
        assert!(load_csv::<f64>("/nonexistent/file.csv", "y", None).is_err());
    }

    proptest! {
        #[test]
        fn write_then_load_preserves_values(
            rows in prop::collection::vec((any::<f64>(), any::<f64>()), 2..20)
        ) {
            let clean = |v: f64| if v.is_finite() { v } else { 0.0 };
            let features: Vec<Vec<f64>> = rows.iter().map(|r| vec![clean(r.0)]).collect();
            let target: Vec<f64> = rows.iter().map(|r| clean(r.1)).collect();
            let data = Dataset::from_rows(&features, &target).unwrap();
            let mut buf = Vec::new();
            write_dataset_csv(&data, "y", &mut buf).unwrap();
            let f = file(std::str::from_utf8(&buf).unwrap());
            let back: Dataset<f64> = load_csv(f.path(), "y", None).unwrap();
            prop_assert_eq!(back.features(), data.features());
            prop_assert_eq!(back.target(), data.target());
        }
    }
}
