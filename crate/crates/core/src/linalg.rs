//! Deterministic dense kernels for symmetric matrices.
//!
//! Everything here is plain sequential f64 arithmetic with a fixed
//! evaluation order, so identical inputs produce identical output bits.
//! The eigensolver is a cyclic Jacobi sweep: adequate and fully
//! deterministic for the matrix orders this toolkit works at (a few
//! thousand at most).

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};

/// Relative tolerance for accepting a matrix as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Tolerance on `‖QᵀQ − I‖_max` for freshly computed bases.
pub const ORTHONORMAL_TOL: f64 = 1e-8;
/// Relative singular-value threshold for null-space detection
/// (eigenvalues of `BᵀB` below `tol · max` count as zero).
pub const NULLSPACE_TOL: f64 = 1e-10;

const JACOBI_SWEEP_CAP: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;
const SIGN_TOL: f64 = 1e-12;

/// A real symmetric matrix. Construction verifies symmetry up to
/// [`SYMMETRY_TOL`] relative to the largest entry and then symmetrizes
/// exactly, so downstream kernels can rely on `a[i][j] == a[j][i]`.
#[derive(Debug, Clone)]
pub struct SymmetricMatrix {
    data: Array2<f64>,
}

impl SymmetricMatrix {
    pub fn new(a: Array2<f64>) -> Result<Self> {
        let (r, c) = a.dim();
        if r != c {
            return Err(Error::data(format!("matrix is {r}x{c}, not square")));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::data("matrix has non-finite entries"));
        }
        let scale = a.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let mut skew = 0.0_f64;
        for i in 0..r {
            for j in (i + 1)..r {
                skew = skew.max((a[[i, j]] - a[[j, i]]).abs());
            }
        }
        if skew > SYMMETRY_TOL * scale.max(1.0) {
            return Err(Error::data(format!(
                "matrix is not symmetric: max asymmetry {skew:.3e} exceeds tolerance"
            )));
        }
        let mut data = a;
        for i in 0..r {
            for j in (i + 1)..r {
                let v = 0.5 * (data[[i, j]] + data[[j, i]]);
                data[[i, j]] = v;
                data[[j, i]] = v;
            }
        }
        Ok(SymmetricMatrix { data })
    }

    pub fn order(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        self.data.diag().sum()
    }
}

/// A `D×d` matrix with orthonormal columns.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    q: Array2<f64>,
}

impl OrthonormalBasis {
    /// Validates `‖QᵀQ − I‖_max ≤` [`ORTHONORMAL_TOL`].
    pub fn new(q: Array2<f64>) -> Result<Self> {
        Self::with_tolerance(q, ORTHONORMAL_TOL)
    }

    /// Validates with a caller-chosen tolerance. Used when loading bases
    /// that were quantized to 32-bit floats on disk.
    pub fn with_tolerance(q: Array2<f64>, tol: f64) -> Result<Self> {
        let (rows, cols) = q.dim();
        if cols > rows {
            return Err(Error::data(format!(
                "basis has more columns ({cols}) than rows ({rows})"
            )));
        }
        let gram = q.t().dot(&q);
        let mut worst = 0.0_f64;
        for i in 0..cols {
            for j in 0..cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((gram[[i, j]] - target).abs());
            }
        }
        if worst > tol {
            return Err(Error::numeric(format!(
                "columns are not orthonormal: ‖QᵀQ − I‖_max = {worst:.3e} > {tol:.1e}"
            )));
        }
        Ok(OrthonormalBasis { q })
    }

    /// Ambient (row) dimension `D`.
    pub fn ambient_dim(&self) -> usize {
        self.q.nrows()
    }

    /// Number of basis columns `d`.
    pub fn rank(&self) -> usize {
        self.q.ncols()
    }

    pub fn columns(&self) -> &Array2<f64> {
        &self.q
    }

    /// Orthogonal projection `Q Qᵀ v` onto the spanned subspace.
    pub fn project(&self, v: ArrayView1<f64>) -> Result<Array1<f64>> {
        if v.len() != self.ambient_dim() {
            return Err(Error::data(format!(
                "vector length {} does not match basis dimension {}",
                v.len(),
                self.ambient_dim()
            )));
        }
        let coords = self.q.t().dot(&v);
        Ok(self.q.dot(&coords))
    }

    /// Row-wise projection `X Q Qᵀ` for an `n×D` matrix of row vectors.
    pub fn project_rows(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.ambient_dim() {
            return Err(Error::data(format!(
                "matrix has {} columns, basis dimension is {}",
                x.ncols(),
                self.ambient_dim()
            )));
        }
        let coords = x.dot(&self.q);
        Ok(coords.dot(&self.q.t()))
    }

    /// Takes the first `d` columns as a new basis.
    pub fn truncate(&self, d: usize) -> Result<OrthonormalBasis> {
        if d > self.rank() {
            return Err(Error::config(format!(
                "cannot take {d} columns from a rank-{} basis",
                self.rank()
            )));
        }
        OrthonormalBasis::new(self.q.slice(s![.., ..d]).to_owned())
    }
}

/// Sample covariance `(1/n) XᵀX` of the row vectors of `x`, with the
/// column mean removed first when `center` is set. Centering requires
/// `n ≥ 2`.
pub fn covariance(x: ArrayView2<f64>, center: bool) -> Result<SymmetricMatrix> {
    let n = x.nrows();
    if n == 0 {
        return Err(Error::data("covariance of an empty matrix"));
    }
    if center && n < 2 {
        return Err(Error::data("centered covariance requires at least 2 rows"));
    }
    let c = if center {
        let mean = x.mean_axis(Axis(0)).expect("n > 0");
        let xc = &x - &mean;
        xc.t().dot(&xc) / n as f64
    } else {
        x.t().dot(&x) / n as f64
    };
    // Matmul accumulation order can leave ~1e-16 asymmetry; fold it out.
    let sym = (&c + &c.t()) * 0.5;
    SymmetricMatrix::new(sym)
}

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi
/// rotations.
///
/// Returns eigenvalues sorted descending and the matching eigenvectors
/// as basis columns. Ties keep the sweep output order, and each
/// eigenvector is oriented so its first component larger than `1e-12`
/// in magnitude is positive, which makes the result reproducible bit
/// for bit.
///
/// Converges when the off-diagonal Frobenius mass drops below
/// `1e-12 · ‖A‖_F`, with a cap of 100 sweeps.
pub fn eigh(a: &SymmetricMatrix) -> Result<(Vec<f64>, OrthonormalBasis)> {
    let n = a.order();
    let mut m = a.as_array().clone();
    let mut v = Array2::<f64>::eye(n);
    let fro = frobenius(m.view());
    let threshold = JACOBI_REL_TOL * fro;

    let mut converged = fro == 0.0 || off_diag_frobenius(&m) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= JACOBI_SWEEP_CAP {
            return Err(Error::numeric(format!(
                "jacobi eigensolver did not converge in {JACOBI_SWEEP_CAP} sweeps \
                 (off-diagonal mass {:.3e})",
                off_diag_frobenius(&m)
            )));
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = m[[p, q]];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[[q, q]] - m[[p, p]]) / (2.0 * apq);
                // tan of the rotation angle; hypot keeps huge theta finite.
                let t = {
                    let denom = theta.abs() + 1.0_f64.hypot(theta);
                    if theta >= 0.0 {
                        1.0 / denom
                    } else {
                        -1.0 / denom
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                rotate(&mut m, p, q, c, s);
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = c * vip - s * viq;
                    v[[i, q]] = s * vip + c * viq;
                }
            }
        }
        sweeps += 1;
        converged = off_diag_frobenius(&m) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[[j, j]]
            .partial_cmp(&m[[i, i]])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| m[[i, i]]).collect();
    let mut vectors = Array2::<f64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        let mut sign = 1.0;
        for i in 0..n {
            let x = v[[i, src]];
            if x.abs() > SIGN_TOL {
                sign = if x > 0.0 { 1.0 } else { -1.0 };
                break;
            }
        }
        for i in 0..n {
            vectors[[i, dst]] = sign * v[[i, src]];
        }
    }
    Ok((values, OrthonormalBasis::new(vectors)?))
}

/// Applies the two-sided Jacobi rotation in the `(p, q)` plane.
fn rotate(m: &mut Array2<f64>, p: usize, q: usize, c: f64, s: f64) {
    let n = m.nrows();
    for j in 0..n {
        let mpj = m[[p, j]];
        let mqj = m[[q, j]];
        m[[p, j]] = c * mpj - s * mqj;
        m[[q, j]] = s * mpj + c * mqj;
    }
    for i in 0..n {
        let mip = m[[i, p]];
        let miq = m[[i, q]];
        m[[i, p]] = c * mip - s * miq;
        m[[i, q]] = s * mip + c * miq;
    }
    // The rotation annihilates this pair up to roundoff.
    m[[p, q]] = 0.0;
    m[[q, p]] = 0.0;
}

fn frobenius(m: ArrayView2<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn off_diag_frobenius(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[[i, j]] * m[[i, j]];
            }
        }
    }
    acc.sqrt()
}

/// Orthonormal basis of the (numerical) null space of `b`.
///
/// Computed as the eigenvectors of `BᵀB` whose eigenvalues fall below
/// `tol · λ_max`; a zero `b` therefore yields the full identity basis.
/// Column order follows the eigendecomposition (descending eigenvalue),
/// so output is deterministic.
pub fn nullspace_basis(b: ArrayView2<f64>, tol: f64) -> Result<OrthonormalBasis> {
    let d = b.ncols();
    if d == 0 {
        return Err(Error::data("null space of a matrix with zero columns"));
    }
    let gram = SymmetricMatrix::new(b.t().dot(&b))?;
    let (values, vectors) = eigh(&gram)?;
    let max = values.first().copied().unwrap_or(0.0).max(0.0);
    let cut = tol * max;
    let null_cols: Vec<usize> = (0..d).filter(|&i| values[i] <= cut).collect();
    let mut q = Array2::<f64>::zeros((d, null_cols.len()));
    for (dst, &src) in null_cols.iter().enumerate() {
        q.column_mut(dst).assign(&vectors.columns().column(src));
    }
    OrthonormalBasis::new(q)
}

/// Convenience wrapper for `Q Qᵀ v`.
pub fn project(q: &OrthonormalBasis, v: ArrayView1<f64>) -> Result<Array1<f64>> {
    q.project(v)
}

/// Principal angles (radians, ascending) between the subspaces spanned
/// by two bases with the same ambient dimension.
pub fn principal_angles(a: &OrthonormalBasis, b: &OrthonormalBasis) -> Result<Vec<f64>> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::data("bases live in different ambient dimensions"));
    }
    let k = a.rank().min(b.rank());
    if k == 0 {
        return Ok(Vec::new());
    }
    let m = a.columns().t().dot(b.columns());
    // Singular values of M are the cosines; recover them from M Mᵀ.
    let gram = SymmetricMatrix::new((m.dot(&m.t()) + m.dot(&m.t()).t()) * 0.5)?;
    let (values, _) = eigh(&gram)?;
    Ok(values
        .iter()
        .take(k)
        .map(|&ev| ev.max(0.0).sqrt().min(1.0).acos())
        .collect())
}

/// Largest principal angle between two subspaces.
pub fn max_principal_angle(a: &OrthonormalBasis, b: &OrthonormalBasis) -> Result<f64> {
    Ok(principal_angles(a, b)?
        .into_iter()
        .fold(0.0_f64, f64::max))
}
