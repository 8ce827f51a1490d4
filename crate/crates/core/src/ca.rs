//! Correspondence analysis.
//!
//! A nonnegative table is turned into a probability table `f_ij` with row
//! masses `f_i` and column masses `f_j`. Rows are profiles `f_ij / f_i` under
//! the chi-squared metric
//!
//! ```text
//! d^2(i, k) = sum_j (1 / f_j) (f_ij / f_i - f_kj / f_k)^2
//! ```
//!
//! and columns symmetrically. The inertia of both clouds is decomposed by a
//! singular value decomposition of the standardized residuals
//! `(f_ij - f_i f_j) / sqrt(f_i f_j)`, which yields eigenvalues `lambda_s`,
//! row factors `F_s(i)` and column factors `G_s(j)`. In factor space the
//! chi-squared distance becomes the plain Euclidean distance.
//!
//! The two sets of factors are tied by the transition formulas
//!
//! ```text
//! F_s(i) = lambda_s^{-1/2} sum_j (f_ij / f_i) G_s(j)
//! G_s(j) = lambda_s^{-1/2} sum_i (f_ij / f_j) F_s(i)
//! ```
//!
//! which are also how zero-mass supplementary rows and columns are placed in
//! an existing factor space.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::{self, ConvergenceError, Matrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaError {
    #[error("{axis} {index} has zero mass")]
    ZeroMargin { axis: Axis, index: usize },
    #[error("table contains a negative or non-finite value at ({0}, {1})")]
    InvalidEntry(usize, usize),
    #[error("table is empty")]
    EmptyTable,
    #[error("supplementary profile is empty")]
    EmptyProfile,
    #[error("supplementary element has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Convergence(#[from] ConvergenceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
}

impl core::fmt::Display for Axis {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Axis::Row => "row",
            Axis::Column => "column",
        })
    }
}

/// Counts divided by their grand total, with both margins.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    pub f: Matrix,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    pub grand_total: f64,
}

/// Divides a nonnegative table by its grand total.
pub fn normalize(counts: &Matrix) -> Result<ProbabilityTable, CaError> {
    if counts.nrows() == 0 || counts.ncols() == 0 {
        return Err(CaError::EmptyTable);
    }
    for i in 0..counts.nrows() {
        for (j, &v) in counts.row(i).iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CaError::InvalidEntry(i, j));
            }
        }
    }
    let total = counts.sum();
    let rs = counts.row_sums();
    if let Some(i) = rs.iter().position(|&r| r <= 0.0) {
        return Err(CaError::ZeroMargin { axis: Axis::Row, index: i });
    }
    let cs = counts.column_sums();
    if let Some(j) = cs.iter().position(|&c| c <= 0.0) {
        return Err(CaError::ZeroMargin {
            axis: Axis::Column,
            index: j,
        });
    }
    let f = Matrix::from_row_major(
        counts.nrows(),
        counts.ncols(),
        counts.as_slice().iter().map(|v| v / total).collect(),
    );
    Ok(ProbabilityTable {
        row_masses: rs.iter().map(|r| r / total).collect(),
        col_masses: cs.iter().map(|c| c / total).collect(),
        f,
        grand_total: total,
    })
}

impl ProbabilityTable {
    pub fn n_rows(&self) -> usize {
        self.f.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.f.ncols()
    }

    /// Row profile `f_ij / f_i`.
    pub fn row_profile(&self, i: usize) -> Vec<f64> {
        let m = self.row_masses[i];
        self.f.row(i).iter().map(|v| v / m).collect()
    }

    /// Chi-squared distance between rows `i` and `k` (not squared).
    pub fn chi2_distance(&self, i: usize, k: usize) -> f64 {
        let (mi, mk) = (self.row_masses[i], self.row_masses[k]);
        let d2: f64 = self
            .f
            .row(i)
            .iter()
            .zip(self.f.row(k))
            .zip(&self.col_masses)
            .map(|((a, b), fj)| {
                let diff = a / mi - b / mk;
                diff * diff / fj
            })
            .sum();
        libm::sqrt(d2)
    }

    /// Chi-squared distance between columns `j` and `l` (not squared).
    pub fn column_chi2_distance(&self, j: usize, l: usize) -> f64 {
        let (mj, ml) = (self.col_masses[j], self.col_masses[l]);
        let d2: f64 = (0..self.n_rows())
            .map(|i| {
                let diff = self.f[(i, j)] / mj - self.f[(i, l)] / ml;
                diff * diff / self.row_masses[i]
            })
            .sum();
        libm::sqrt(d2)
    }

    /// Total inertia `sum_ij (f_ij - f_i f_j)^2 / (f_i f_j)`.
    pub fn total_inertia(&self) -> f64 {
        let mut acc = 0.0;
        for (i, &fi) in self.row_masses.iter().enumerate() {
            for (&fij, &fj) in self.f.row(i).iter().zip(&self.col_masses) {
                let e = fi * fj;
                acc += (fij - e) * (fij - e) / e;
            }
        }
        acc
    }

    /// Inertia of the row cloud about its centroid, the mean profile `f_j`.
    pub fn row_cloud_inertia(&self) -> f64 {
        (0..self.n_rows())
            .map(|i| {
                let fi = self.row_masses[i];
                let d2: f64 = self
                    .f
                    .row(i)
                    .iter()
                    .zip(&self.col_masses)
                    .map(|(fij, fj)| {
                        let d = fij / fi - fj;
                        d * d / fj
                    })
                    .sum();
                fi * d2
            })
            .sum()
    }

    /// Inertia of the column cloud about its centroid, the mean profile `f_i`.
    pub fn column_cloud_inertia(&self) -> f64 {
        (0..self.n_cols())
            .map(|j| {
                let fj = self.col_masses[j];
                let d2: f64 = (0..self.n_rows())
                    .map(|i| {
                        let fi = self.row_masses[i];
                        let d = self.f[(i, j)] / fj - fi;
                        d * d / fi
                    })
                    .sum();
                fj * d2
            })
            .sum()
    }

    /// Standardized residuals `(f_ij - f_i f_j) / sqrt(f_i f_j)`.
    pub fn standardized_residuals(&self) -> Matrix {
        let mut s = Matrix::zeros(self.n_rows(), self.n_cols());
        for i in 0..self.n_rows() {
            let fi = self.row_masses[i];
            for j in 0..self.n_cols() {
                let e = fi * self.col_masses[j];
                s[(i, j)] = (self.f[(i, j)] - e) / libm::sqrt(e);
            }
        }
        s
    }
}

/// Relative eigenvalue cutoff: factors with `lambda < REL_TOL * total_inertia`
/// are dropped.
pub const DEFAULT_REL_TOL: f64 = 1e-12;
/// Eigenvalues at or below this are treated as zero even for near-independent
/// tables whose total inertia is itself rounding noise.
pub const ABS_EIGEN_FLOOR: f64 = 1e-24;

/// A fitted correspondence analysis.
///
/// Row `i` of `row_factors` holds `F_1(i) .. F_S(i)`; likewise for columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CaModel {
    pub eigenvalues: Vec<f64>,
    pub row_factors: Matrix,
    pub col_factors: Matrix,
    pub row_masses: Vec<f64>,
    pub col_masses: Vec<f64>,
    pub total_inertia: f64,
}

/// Fits the factor space. `rel_tol` defaults to [`DEFAULT_REL_TOL`].
///
/// Each factor is oriented so that its largest-magnitude row coordinate is
/// positive (first such row on ties).
pub fn decompose(table: &ProbabilityTable, rel_tol: Option<f64>) -> Result<CaModel, CaError> {
    let total_inertia = table.total_inertia();
    let cutoff = (rel_tol.unwrap_or(DEFAULT_REL_TOL) * total_inertia).max(ABS_EIGEN_FLOOR);
    let s = table.standardized_residuals();
    let svd = linalg::svd(&s)?;

    let kept: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &sv)| sv * sv > cutoff)
        .map(|(k, _)| k)
        .collect();
    let dim = kept.len();
    let (n, p) = (table.n_rows(), table.n_cols());
    let mut rf = Matrix::zeros(n, dim);
    let mut cf = Matrix::zeros(p, dim);
    let mut eigenvalues = Vec::with_capacity(dim);
    for (s_idx, &k) in kept.iter().enumerate() {
        let sigma = svd.singular_values[k];
        eigenvalues.push(sigma * sigma);
        for i in 0..n {
            rf[(i, s_idx)] = sigma * svd.u[(i, k)] / libm::sqrt(table.row_masses[i]);
        }
        for j in 0..p {
            cf[(j, s_idx)] = sigma * svd.v[(j, k)] / libm::sqrt(table.col_masses[j]);
        }
        let mut lead = 0;
        for i in 1..n {
            if libm::fabs(rf[(i, s_idx)]) > libm::fabs(rf[(lead, s_idx)]) {
                lead = i;
            }
        }
        if rf[(lead, s_idx)] < 0.0 {
            for i in 0..n {
                rf[(i, s_idx)] = -rf[(i, s_idx)];
            }
            for j in 0..p {
                cf[(j, s_idx)] = -cf[(j, s_idx)];
            }
        }
    }
    Ok(CaModel {
        eigenvalues,
        row_factors: rf,
        col_factors: cf,
        row_masses: table.row_masses.clone(),
        col_masses: table.col_masses.clone(),
        total_inertia,
    })
}

/// Fixed-mass element placed in a fitted factor space.
#[derive(Debug, Clone, PartialEq)]
pub struct SupplementaryProjection {
    pub id: usize,
    pub profile: Vec<f64>,
    pub coords: Vec<f64>,
}

impl CaModel {
    /// Effective dimensionality `S`.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n_rows(&self) -> usize {
        self.row_masses.len()
    }

    pub fn n_cols(&self) -> usize {
        self.col_masses.len()
    }

    pub fn row_coords(&self, i: usize) -> &[f64] {
        self.row_factors.row(i)
    }

    pub fn col_coords(&self, j: usize) -> &[f64] {
        self.col_factors.row(j)
    }

    /// Share of total inertia per factor, in percent.
    pub fn percent_inertia(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|l| if self.total_inertia > 0.0 { 100.0 * l / self.total_inertia } else { 0.0 })
            .collect()
    }

    /// Absolute contributions `f_i F_s(i)^2`; column `s` sums to `lambda_s`.
    pub fn row_contributions(&self) -> Matrix {
        contributions(&self.row_factors, &self.row_masses)
    }

    /// Absolute contributions `f_j G_s(j)^2`.
    pub fn col_contributions(&self) -> Matrix {
        contributions(&self.col_factors, &self.col_masses)
    }

    /// Squared cosines `F_s(i)^2 / sum_s F_s(i)^2`. Rows at the origin are all zero.
    pub fn row_correlations(&self) -> Matrix {
        correlations(&self.row_factors)
    }

    pub fn col_correlations(&self) -> Matrix {
        correlations(&self.col_factors)
    }

    /// Normalized row factors `phi_s(i) = lambda_s^{-1/2} F_s(i)`.
    pub fn normalized_row_factors(&self) -> Matrix {
        normalized(&self.row_factors, &self.eigenvalues)
    }

    /// Normalized column factors `psi_s(j) = lambda_s^{-1/2} G_s(j)`.
    pub fn normalized_col_factors(&self) -> Matrix {
        normalized(&self.col_factors, &self.eigenvalues)
    }

    /// Places a supplementary row given its values over the principal columns.
    ///
    /// Values may be raw counts or a profile; they are scaled to sum to one.
    pub fn project_row(&self, values: &[f64]) -> Result<Vec<f64>, CaError> {
        let profile = to_profile(values, self.n_cols())?;
        Ok(transition(&profile, &self.col_factors, &self.eigenvalues))
    }

    /// Places a supplementary column given its values over the principal rows.
    pub fn project_column(&self, values: &[f64]) -> Result<Vec<f64>, CaError> {
        let profile = to_profile(values, self.n_rows())?;
        Ok(transition(&profile, &self.row_factors, &self.eigenvalues))
    }

    pub fn supplementary_row(&self, id: usize, values: &[f64]) -> Result<SupplementaryProjection, CaError> {
        let profile = to_profile(values, self.n_cols())?;
        let coords = transition(&profile, &self.col_factors, &self.eigenvalues);
        Ok(SupplementaryProjection { id, profile, coords })
    }

    /// Centre of gravity of a category of principal rows, in row space.
    ///
    /// The category indicator is projected as a supplementary column with
    /// each member weighted by its row mass, and the column coordinates are
    /// rescaled by `sqrt(lambda_s)`. This equals the mass-weighted mean of the
    /// members' row coordinates.
    pub fn category_barycentre(&self, members: &[usize]) -> Result<Vec<f64>, CaError> {
        let mut values = vec![0.0; self.n_rows()];
        for &i in members {
            values[i] = self.row_masses[i];
        }
        let g = self.project_column(&values)?;
        Ok(g.iter()
            .zip(&self.eigenvalues)
            .map(|(g, l)| g * libm::sqrt(*l))
            .collect())
    }
}

fn to_profile(values: &[f64], expected: usize) -> Result<Vec<f64>, CaError> {
    if values.len() != expected {
        return Err(CaError::LengthMismatch {
            expected,
            found: values.len(),
        });
    }
    let total: f64 = values.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(CaError::EmptyProfile);
    }
    Ok(values.iter().map(|v| v / total).collect())
}

fn transition(profile: &[f64], factors: &Matrix, eigenvalues: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; eigenvalues.len()];
    for (w, row) in profile.iter().zip(factors.rows()) {
        if *w == 0.0 {
            continue;
        }
        for (o, g) in out.iter_mut().zip(row) {
            *o += w * g;
        }
    }
    for (o, l) in out.iter_mut().zip(eigenvalues) {
        *o /= libm::sqrt(*l);
    }
    out
}

fn contributions(factors: &Matrix, masses: &[f64]) -> Matrix {
    let mut c = Matrix::zeros(factors.nrows(), factors.ncols());
    for (i, &m) in masses.iter().enumerate() {
        for (o, x) in c.row_mut(i).iter_mut().zip(factors.row(i)) {
            *o = m * x * x;
        }
    }
    c
}

fn correlations(factors: &Matrix) -> Matrix {
    let mut c = Matrix::zeros(factors.nrows(), factors.ncols());
    for i in 0..factors.nrows() {
        let norm: f64 = factors.row(i).iter().map(|x| x * x).sum();
        if norm > 0.0 {
            for (o, x) in c.row_mut(i).iter_mut().zip(factors.row(i)) {
                *o = x * x / norm;
            }
        }
    }
    c
}

fn normalized(factors: &Matrix, eigenvalues: &[f64]) -> Matrix {
    let mut out = factors.clone();
    for i in 0..out.nrows() {
        for (x, l) in out.row_mut(i).iter_mut().zip(eigenvalues) {
            *x /= libm::sqrt(*l);
        }
    }
    out
}
