//! Design matrix and dataset containers.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Column-major numeric matrix. Columns are the unit of work everywhere in
/// this crate (base-learner fits, shadow permutation, centering), so each
/// column is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ColMatrix<F> {
    data: Vec<F>,
    n_rows: usize,
    n_cols: usize,
}

impl<F: Scalar> ColMatrix<F> {
    /// Builds a matrix from column-major storage (`data.len() == n_rows * n_cols`).
    pub fn from_col_major(data: Vec<F>, n_rows: usize, n_cols: usize) -> Result<Self> {
        if data.len() != n_rows * n_cols {
            return Err(Error::ShapeMismatch(format!(
                "column-major buffer has {} entries, expected {} x {}",
                data.len(),
                n_rows,
                n_cols
            )));
        }
        Ok(Self {
            data,
            n_rows,
            n_cols,
        })
    }

    pub fn from_columns(columns: Vec<Vec<F>>) -> Result<Self> {
        let n_cols = columns.len();
        let n_rows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (j, col) in columns.into_iter().enumerate() {
            if col.len() != n_rows {
                return Err(Error::ShapeMismatch(format!(
                    "column {} has {} rows, expected {}",
                    j,
                    col.len(),
                    n_rows
                )));
            }
            data.extend(col);
        }
        Ok(Self {
            data,
            n_rows,
            n_cols,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn col(&self, j: usize) -> &[F] {
        &self.data[j * self.n_rows..(j + 1) * self.n_rows]
    }

    pub fn get(&self, row: usize, col: usize) -> F {
        self.data[col * self.n_rows + row]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Copies the given rows (with repetition allowed) into a new matrix.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.n_cols);
        for j in 0..self.n_cols {
            let col = self.col(j);
            data.extend(rows.iter().map(|&r| col[r]));
        }
        Self {
            data,
            n_rows: rows.len(),
            n_cols: self.n_cols,
        }
    }

    /// Matrix-vector product `self * beta`.
    pub fn mat_vec(&self, beta: &[F]) -> Result<Vec<F>> {
        if beta.len() != self.n_cols {
            return Err(Error::ShapeMismatch(format!(
                "coefficient vector has length {}, matrix has {} columns",
                beta.len(),
                self.n_cols
            )));
        }
        let mut out = vec![F::zero(); self.n_rows];
        for (j, &b) in beta.iter().enumerate() {
            if b == F::zero() {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.col(j)) {
                *o += b * x;
            }
        }
        Ok(out)
    }
}

/// A design matrix with response and per-column metadata.
///
/// `shadow_mask[j]` is true for columns that are permuted copies of an
/// original column; a raw dataset has an all-false mask.
#[derive(Debug, Clone)]
pub struct Dataset<F> {
    x: ColMatrix<F>,
    y: Vec<F>,
    column_names: Vec<String>,
    shadow_mask: Vec<bool>,
}

impl<F: Scalar> Dataset<F> {
    /// Validates shapes and finiteness (`n >= 2`, `p >= 1`, all entries finite).
    pub fn new(
        x: ColMatrix<F>,
        y: Vec<F>,
        column_names: Vec<String>,
        shadow_mask: Vec<bool>,
    ) -> Result<Self> {
        let (n, p) = (x.n_rows(), x.n_cols());
        if n < 2 {
            return Err(Error::ShapeMismatch(format!(
                "need at least 2 rows, got {}",
                n
            )));
        }
        if p < 1 {
            return Err(Error::ShapeMismatch("need at least 1 column".into()));
        }
        if y.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "response has length {}, design matrix has {} rows",
                y.len(),
                n
            )));
        }
        if column_names.len() != p {
            return Err(Error::ShapeMismatch(format!(
                "{} column names for {} columns",
                column_names.len(),
                p
            )));
        }
        if shadow_mask.len() != p {
            return Err(Error::ShapeMismatch(format!(
                "shadow mask has length {}, expected {}",
                shadow_mask.len(),
                p
            )));
        }
        if !x.is_finite() {
            return Err(Error::NonFinite("design matrix".into()));
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("response vector".into()));
        }
        Ok(Self {
            x,
            y,
            column_names,
            shadow_mask,
        })
    }

    /// Convenience constructor for a raw dataset: names `x1..xp`, no shadows.
    pub fn from_parts(x: ColMatrix<F>, y: Vec<F>) -> Result<Self> {
        let p = x.n_cols();
        let names = (1..=p).map(|j| format!("x{}", j)).collect();
        Self::new(x, y, names, vec![false; p])
    }

    pub fn n_rows(&self) -> usize {
        self.x.n_rows()
    }

    pub fn n_cols(&self) -> usize {
        self.x.n_cols()
    }

    pub fn matrix(&self) -> &ColMatrix<F> {
        &self.x
    }

    pub fn response(&self) -> &[F] {
        &self.y
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn shadow_mask(&self) -> &[bool] {
        &self.shadow_mask
    }

    pub fn has_shadows(&self) -> bool {
        self.shadow_mask.iter().any(|&m| m)
    }

    /// Row subset (repetition allowed), keeping all columns and metadata.
    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let x = self.x.select_rows(rows);
        let y = rows.iter().map(|&r| self.y[r]).collect();
        Self::new(x, y, self.column_names.clone(), self.shadow_mask.clone())
    }
}
