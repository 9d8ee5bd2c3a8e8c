//! CSV input and output.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! dataset survives a write/load cycle bit-exactly and repeated runs with
//! the same seed produce byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use shadowboost::{ColMatrix, Dataset};

use crate::error::{AppError, AppResult};

/// Loads a CSV with a header row into a dataset, pulling out the named
/// response column. Every cell must parse to a finite number; offending
/// cells are reported with their row and column.
pub fn load_csv(path: &Path, response: &str) -> AppResult<Dataset<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| AppError::Data(format!("{}: {}", path.display(), e)))?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| AppError::Data(format!("{}: {}", path.display(), e)))?
        .iter()
        .map(str::to_string)
        .collect();
    let response_idx = headers
        .iter()
        .position(|h| h == response)
        .ok_or_else(|| {
            AppError::Data(format!(
                "{}: response column '{}' not found (header: {})",
                path.display(),
                response,
                headers.join(", ")
            ))
        })?;
    let covariate_names: Vec<String> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != response_idx)
        .map(|(_, h)| h.clone())
        .collect();
    if covariate_names.is_empty() {
        return Err(AppError::Data(format!(
            "{}: no covariate columns besides the response",
            path.display()
        )));
    }

    let p = covariate_names.len();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); p];
    let mut y = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| AppError::Data(format!("{}: {}", path.display(), e)))?;
        if record.len() != headers.len() {
            return Err(AppError::Data(format!(
                "{}: row {} has {} fields, header has {}",
                path.display(),
                row_idx + 1,
                record.len(),
                headers.len()
            )));
        }
        let mut col_cursor = 0;
        for (field_idx, cell) in record.iter().enumerate() {
            let name = &headers[field_idx];
            let value = parse_cell(cell, row_idx + 1, name, path)?;
            if field_idx == response_idx {
                y.push(value);
            } else {
                columns[col_cursor].push(value);
                col_cursor += 1;
            }
        }
    }
    if y.len() < 2 {
        return Err(AppError::Data(format!(
            "{}: need at least 2 data rows, got {}",
            path.display(),
            y.len()
        )));
    }

    let matrix = ColMatrix::from_columns(columns).map_err(AppError::from)?;
    let shadow_mask = vec![false; p];
    Dataset::new(matrix, y, covariate_names, shadow_mask).map_err(AppError::from)
}

fn parse_cell(cell: &str, row: usize, column: &str, path: &Path) -> AppResult<f64> {
    if cell.is_empty() {
        return Err(AppError::Data(format!(
            "{}: row {}, column '{}': empty cell",
            path.display(),
            row,
            column
        )));
    }
    let value: f64 = cell.parse().map_err(|_| {
        AppError::Data(format!(
            "{}: row {}, column '{}': cannot parse '{}' as a number",
            path.display(),
            row,
            column,
            cell
        ))
    })?;
    if !value.is_finite() {
        return Err(AppError::Data(format!(
            "{}: row {}, column '{}': non-finite value '{}'",
            path.display(),
            row,
            column,
            cell
        )));
    }
    Ok(value)
}

/// Writes a dataset back to CSV: covariate columns in order, then the
/// response under `response_name`.
pub fn write_dataset_csv(path: &Path, data: &Dataset<f64>, response_name: &str) -> AppResult<()> {
    let mut out = String::new();
    for name in data.column_names() {
        out.push_str(name);
        out.push(',');
    }
    out.push_str(response_name);
    out.push('\n');
    for i in 0..data.n_rows() {
        for j in 0..data.n_cols() {
            out.push_str(&format!("{},", data.matrix().get(i, j)));
        }
        out.push_str(&format!("{}\n", data.response()[i]));
    }
    write_atomic(path, out.as_bytes())
}

/// Selection table: `variable,selected[,frequency]`, one row per variable.
pub fn write_selection_csv(
    path: &Path,
    names: &[String],
    selected: &[usize],
    frequencies: Option<&[f64]>,
) -> AppResult<()> {
    let selected_mask = {
        let mut mask = vec![false; names.len()];
        for &j in selected {
            if j < mask.len() {
                mask[j] = true;
            }
        }
        mask
    };
    let mut out = String::new();
    match frequencies {
        Some(freqs) => {
            out.push_str("variable,selected,frequency\n");
            for ((name, &sel), &f) in names.iter().zip(&selected_mask).zip(freqs) {
                out.push_str(&format!("{},{},{}\n", name, u8::from(sel), f));
            }
        }
        None => {
            out.push_str("variable,selected\n");
            for (name, &sel) in names.iter().zip(&selected_mask) {
                out.push_str(&format!("{},{}\n", name, u8::from(sel)));
            }
        }
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> AppResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut file = fs::File::create(path)?;
    file.write_all(bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn loads_header_csv_and_extracts_response() {
        let f = write_temp("a,b,y\n1,2,3\n4,5,6\n");
        let d = load_csv(f.path(), "y").unwrap();
        assert_eq!(d.n_rows(), 2);
        assert_eq!(d.n_cols(), 2);
        assert_eq!(d.column_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(d.response(), &[3.0, 6.0]);
        assert_eq!(d.matrix().col(0), &[1.0, 4.0]);
    }

    #[test]
    fn response_can_be_any_column() {
        let f = write_temp("a,y,b\n1,2,3\n4,5,6\n");
        let d = load_csv(f.path(), "y").unwrap();
        assert_eq!(d.response(), &[2.0, 5.0]);
        assert_eq!(d.matrix().col(1), &[3.0, 6.0]);
    }

    #[test]
    fn blank_cell_names_row_and_column() {
        let f = write_temp("a,y\n1,2\n,4\n");
        let err = load_csv(f.path(), "y").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2"), "{}", msg);
        assert!(msg.contains("column 'a'"), "{}", msg);
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let f = write_temp("a,y\n1,2\n3,oops\n");
        let err = load_csv(f.path(), "y").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("row 2") && msg.contains("'y'") && msg.contains("oops"), "{}", msg);
    }

    #[test]
    fn missing_response_and_short_files_error() {
        let f = write_temp("a,b\n1,2\n3,4\n");
        assert!(load_csv(f.path(), "y").is_err());

        let f = write_temp("a,y\n1,2\n");
        assert!(load_csv(f.path(), "y").is_err(), "single data row rejected");

        let f = write_temp("a,y\n1,nan\n2,3\n");
        assert!(load_csv(f.path(), "y").is_err(), "non-finite rejected");
    }

    #[test]
    fn dataset_round_trips_through_csv() {
        let cols = vec![
            vec![0.1, -2.5e-7, 3.0],
            vec![1.0 / 3.0, 2.0f64.sqrt(), -0.0],
        ];
        let d = Dataset::from_parts(ColMatrix::from_columns(cols).unwrap(), vec![1.5, 0.25, -9.0])
            .unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_dataset_csv(f.path(), &d, "y").unwrap();
        let back = load_csv(f.path(), "y").unwrap();
        assert_eq!(back.column_names(), d.column_names());
        assert_eq!(back.response(), d.response());
        for j in 0..d.n_cols() {
            assert_eq!(back.matrix().col(j), d.matrix().col(j));
        }
    }

    #[test]
    fn selection_csv_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sel.csv");
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        write_selection_csv(&path, &names, &[2, 0], None).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, "variable,selected\na,1\nb,0\nc,1\n");

        write_selection_csv(&path, &names, &[1], Some(&[0.0, 0.75, 0.5])).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "variable,selected,frequency\na,0,0\nb,1,0.75\nc,0,0.5\n"
        );
    }
}
