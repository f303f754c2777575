//! Small dense-matrix helpers for interior residuals and tensor products.

use nalgebra::DMatrix;

pub fn commutator(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x * y - y * x
}

/// `x y - weight * y x`.
pub fn quommutator(x: &DMatrix<f64>, y: &DMatrix<f64>, weight: f64) -> DMatrix<f64> {
    x * y - (y * x) * weight
}

pub fn kron(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x.kronecker(y)
}

pub fn diag(values: impl ExactSizeIterator<Item = f64>) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(values.len(), values))
}

/// Largest `|m[i, j]|` with `i, j` both in `rows`.
pub fn interior_amax(m: &DMatrix<f64>, rows: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for &i in rows {
        for &j in rows {
            best = best.max(m[(i, j)].abs());
        }
    }
    best
}

/// Scaled interior residual of `lhs = rhs`.
///
/// `max |lhs - rhs|` over the interior block, divided by `max(1, largest
/// interior entry among terms)`. `terms` should list every summand that enters
/// either side so the scale reflects the cancellation actually performed.
/// Returns `None` when the interior is empty.
pub fn interior_residual(
    lhs: &DMatrix<f64>,
    rhs: &DMatrix<f64>,
    terms: &[&DMatrix<f64>],
    rows: &[usize],
) -> Option<f64> {
    if rows.is_empty() {
        return None;
    }
    let diff = interior_amax(&(lhs - rhs), rows);
    let scale = terms
        .iter()
        .map(|t| interior_amax(t, rows))
        .fold(1.0f64, f64::max)
        .max(interior_amax(lhs, rows))
        .max(interior_amax(rhs, rows));
    Some(diff / scale)
}

/// Largest off-diagonal magnitude.
pub fn offdiag_amax(m: &DMatrix<f64>) -> f64 {
    let mut best = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                best = best.max(m[(i, j)].abs());
            }
        }
    }
    best
}
