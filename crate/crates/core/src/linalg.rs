//! Dense complex linear algebra on tensor-product spaces.
//!
//! Operators live on chains of qubit legs; the composite basis index uses
//! leg 1 as the most-significant bit. All values are immutable after
//! construction and safe to share across threads.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hard cap on dense operator dimension (2^14, i.e. 13 chain sites plus one
/// auxiliary leg). Larger requests are rejected, never truncated.
pub const DIM_CAP: usize = 1 << 14;

/// Default relative pivot threshold for singularity detection.
pub const SINGULARITY_RTOL: f64 = 1e-12;

/// Relative tolerance for Hermiticity detection in the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Square complex matrix acting on a tensor-product space.
///
/// Entries are stored densely; construction validates squareness and
/// finiteness (no NaN/Inf anywhere).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    mat: DMatrix<C64>,
}

impl DenseOperator {
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::InvalidArgument("operator dimension must be >= 1".into()));
        }
        for r in 0..mat.nrows() {
            for c in 0..mat.ncols() {
                let z = mat[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self { mat })
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f))
    }

    /// Build from a row-major slice of length dim^2.
    pub fn from_row_slice(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    /// Real row-major convenience constructor.
    pub fn from_real_row_slice(dim: usize, entries: &[f64]) -> Result<Self> {
        let v: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_slice(dim, &v)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            mat: &self.mat * factor,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            mat: &self.mat - &other.mat,
        })
    }

    /// Standard matrix product. Errors on dimension mismatch.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            mat: &self.mat * &other.mat,
        })
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Hermiticity within a normalized entrywise tolerance.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        let scale = 1.0 + self.max_norm();
        for r in 0..n {
            for c in r..n {
                if (self.mat[(r, c)] - self.mat[(c, r)].conj()).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// A pivot whose magnitude falls below `rel_threshold * max_norm` raises
    /// a singular-matrix error.
    pub fn inverse_with_threshold(&self, rel_threshold: f64) -> Result<Self> {
        let n = self.dim();
        let threshold = rel_threshold * self.max_norm();
        let mut a = self.mat.clone();
        let mut inv = DMatrix::<C64>::identity(n, n);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = a[(col, col)].norm();
            for r in col + 1..n {
                let m = a[(r, col)].norm();
                if m > pivot_mag {
                    pivot_mag = m;
                    pivot_row = r;
                }
            }
            if pivot_mag <= threshold {
                return Err(Error::SingularMatrix {
                    pivot: pivot_mag,
                    threshold,
                    col,
                });
            }
            if pivot_row != col {
                a.swap_rows(pivot_row, col);
                inv.swap_rows(pivot_row, col);
            }
            let pivot = a[(col, col)];
            for c in 0..n {
                a[(col, c)] /= pivot;
                inv[(col, c)] /= pivot;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[(r, col)];
                if factor.norm() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    let sub = factor * a[(col, c)];
                    a[(r, c)] -= sub;
                    let sub = factor * inv[(col, c)];
                    inv[(r, c)] -= sub;
                }
            }
        }
        Self::new(inv)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_threshold(SINGULARITY_RTOL)
    }

    /// Trace out the leading tensor factor of dimension `first_dim`.
    pub fn partial_trace_first(&self, first_dim: usize) -> Result<Self> {
        let dim = self.dim();
        if first_dim == 0 || !dim.is_multiple_of(first_dim) {
            return Err(Error::InvalidArgument(format!(
                "dimension {dim} not divisible by leading factor {first_dim}"
            )));
        }
        let rest = dim / first_dim;
        let mut out = DMatrix::<C64>::zeros(rest, rest);
        for k in 0..first_dim {
            for r in 0..rest {
                for c in 0..rest {
                    out[(r, c)] += self.mat[(k * rest + r, k * rest + c)];
                }
            }
        }
        Ok(Self { mat: out })
    }

    /// All eigenvalues, sorted by real part then imaginary part.
    ///
    /// Hermitian inputs (within `HERMITIAN_TOL`) go through the symmetric
    /// solver and come back exactly real.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        let n = self.dim();
        let max_iter = 200 * n.max(10);
        let mut eigs: Vec<C64> = if self.is_hermitian(HERMITIAN_TOL) {
            let sym = nalgebra::SymmetricEigen::try_new(self.mat.clone(), 1e-13, max_iter)
                .ok_or(Error::EigenConvergence { dim: n, max_iter })?;
            sym.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect()
        } else {
            let schur = self
                .mat
                .clone()
                .try_schur(1e-13, max_iter)
                .ok_or(Error::EigenConvergence { dim: n, max_iter })?;
            let vals = schur
                .eigenvalues()
                .ok_or(Error::EigenConvergence { dim: n, max_iter })?;
            vals.iter().copied().collect()
        };
        eigs.sort_by(|a, b| {
            a.re.total_cmp(&b.re).then_with(|| a.im.total_cmp(&b.im))
        });
        Ok(eigs)
    }
}

/// Kronecker product: `(A (x) B)[(i*dB+k),(j*dB+l)] = A[i,j] * B[k,l]`.
pub fn kron(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    let dim = a.dim().saturating_mul(b.dim());
    if dim > DIM_CAP {
        return Err(Error::DimCap { dim, cap: DIM_CAP });
    }
    Ok(DenseOperator {
        mat: a.mat.kronecker(&b.mat),
    })
}

/// Normalized deviation: `max|a-b| / (1 + max(max|a|, max|b|))`.
///
/// Zero exactly when the operands are equal.
pub fn residual(a: &DenseOperator, b: &DenseOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut diff: f64 = 0.0;
    for r in 0..a.dim() {
        for c in 0..a.dim() {
            diff = diff.max((a.mat[(r, c)] - b.mat[(r, c)]).norm());
        }
    }
    Ok(diff / (1.0 + a.max_norm().max(b.max_norm())))
}

fn leg_bit(index: usize, leg: usize, n_legs: usize) -> usize {
    (index >> (n_legs - leg)) & 1
}

fn with_leg_bit(index: usize, leg: usize, n_legs: usize, value: usize) -> usize {
    let shift = n_legs - leg;
    (index & !(1 << shift)) | (value << shift)
}

/// Embed a two-site operator so its first tensor factor acts on `leg_a` and
/// its second on `leg_b`, with identity on every other leg.
pub fn embed_pair(
    op4: &DenseOperator,
    leg_a: usize,
    leg_b: usize,
    n_legs: usize,
) -> Result<DenseOperator> {
    if op4.dim() != 4 {
        return Err(Error::InvalidArgument(format!(
            "embed_pair needs a 4x4 operator, got dim {}",
            op4.dim()
        )));
    }
    if leg_a == 0 || leg_b == 0 || leg_a > n_legs || leg_b > n_legs {
        return Err(Error::InvalidArgument(format!(
            "legs ({leg_a}, {leg_b}) out of range 1..={n_legs}"
        )));
    }
    if leg_a == leg_b {
        return Err(Error::InvalidArgument(format!(
            "legs must be distinct, got ({leg_a}, {leg_b})"
        )));
    }
    let dim = 1usize << n_legs;
    if dim > DIM_CAP {
        return Err(Error::DimCap { dim, cap: DIM_CAP });
    }
    let mut out = DMatrix::<C64>::zeros(dim, dim);
    for r in 0..dim {
        let a = leg_bit(r, leg_a, n_legs);
        let b = leg_bit(r, leg_b, n_legs);
        for ap in 0..2 {
            for bp in 0..2 {
                let c = with_leg_bit(with_leg_bit(r, leg_a, n_legs, ap), leg_b, n_legs, bp);
                let v = op4.mat[(2 * a + b, 2 * ap + bp)];
                if v.norm() != 0.0 {
                    out[(r, c)] = v;
                }
            }
        }
    }
    Ok(DenseOperator { mat: out })
}

/// Insert an identity leg at `position` (1-based) into an operator on
/// `n_legs` qubit legs, yielding an operator on `n_legs + 1` legs.
pub fn insert_identity_leg(
    op: &DenseOperator,
    position: usize,
    n_legs: usize,
) -> Result<DenseOperator> {
    if op.dim() != 1 << n_legs {
        return Err(Error::DimMismatch {
            left: op.dim(),
            right: 1 << n_legs,
        });
    }
    if position == 0 || position > n_legs + 1 {
        return Err(Error::InvalidArgument(format!(
            "insert position {position} out of range 1..={}",
            n_legs + 1
        )));
    }
    let n_out = n_legs + 1;
    let dim_out = 1usize << n_out;
    if dim_out > DIM_CAP {
        return Err(Error::DimCap {
            dim: dim_out,
            cap: DIM_CAP,
        });
    }
    // Split index x (n_legs bits) at the insertion point and splice in b.
    let low_bits = n_out - position; // bits to the right of the inserted leg
    let insert = |x: usize, b: usize| -> usize {
        let high = x >> low_bits;
        let low = x & ((1 << low_bits) - 1);
        (high << (low_bits + 1)) | (b << low_bits) | low
    };
    let dim_in = op.dim();
    let mut out = DMatrix::<C64>::zeros(dim_out, dim_out);
    for b in 0..2 {
        for r in 0..dim_in {
            let rr = insert(r, b);
            for c in 0..dim_in {
                let v = op.mat[(r, c)];
                if v.norm() != 0.0 {
                    out[(rr, insert(c, b))] = v;
                }
            }
        }
    }
    Ok(DenseOperator { mat: out })
}

/// Closed chain of qubit sites with periodic boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainGeometry {
    n_sites: usize,
}

impl ChainGeometry {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::ChainTooShort {
                relation: "chain construction".into(),
                min: 2,
                got: n_sites,
            });
        }
        if 1usize << n_sites > DIM_CAP {
            return Err(Error::DimCap {
                dim: 1 << n_sites,
                cap: DIM_CAP,
            });
        }
        Ok(Self { n_sites })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn hilbert_dim(&self) -> usize {
        1 << self.n_sites
    }
}
