//! Polynomials in the spectral parameter with complex scalar or operator
//! coefficients: exact evaluation, exact differentiation, interpolation from
//! pointwise samples, and basis re-centering.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{residual, DenseOperator};

/// Polynomial with complex coefficients, index k = coefficient of u^k.
/// Trailing exact-zero coefficients are trimmed; the zero polynomial has an
/// empty coefficient list.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPolynomial {
    coeffs: Vec<C64>,
}

impl SpectralPolynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|z| z.norm() == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(value: C64) -> Self {
        Self::new(vec![value])
    }

    /// a(u) = slope * u.
    pub fn linear(slope: C64) -> Self {
        Self::new(vec![C64::new(0.0, 0.0), slope])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation.
    pub fn eval(&self, u: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &ck in self.coeffs.iter().rev() {
            acc = acc * u + ck;
        }
        acc
    }

    /// Exact formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &ck)| ck * C64::new(k as f64, 0.0))
            .collect();
        Self::new(coeffs)
    }

    /// Coefficients of the same polynomial in powers of (u - u0).
    pub fn recenter(&self, u0: C64) -> Self {
        Self::new(taylor_shift(&self.coeffs, u0, |z, f| z * f, |a, b| a + b))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&z| z * factor).collect())
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn taylor_shift<T: Clone>(
    coeffs: &[T],
    u0: C64,
    mul: impl Fn(&T, C64) -> T,
    add: impl Fn(T, T) -> T,
) -> Vec<T> {
    // b_k = sum_{p >= k} C(p, k) a_p u0^{p-k}
    let n = coeffs.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc: Option<T> = None;
        for (p, coeff) in coeffs.iter().enumerate().skip(k) {
            let factor = C64::new(binomial(p, k), 0.0) * u0.powu((p - k) as u32);
            let term = mul(coeff, factor);
            acc = Some(match acc {
                None => term,
                Some(a) => add(a, term),
            });
        }
        out.push(acc.expect("k < n"));
    }
    out
}

/// Polynomial whose coefficients are operators of a common dimension.
#[derive(Debug, Clone)]
pub struct OperatorPolynomial {
    coeffs: Vec<DenseOperator>,
}

impl OperatorPolynomial {
    /// Coefficient list, index k = coefficient of u^k. Trailing exactly-zero
    /// operators are trimmed, keeping at least one coefficient.
    pub fn new(coeffs: Vec<DenseOperator>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "operator polynomial needs at least one coefficient".into(),
            ));
        }
        let dim = coeffs[0].dim();
        for op in &coeffs[1..] {
            if op.dim() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: op.dim(),
                });
            }
        }
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|m| m.max_norm() == 0.0) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[DenseOperator] {
        &self.coeffs
    }

    pub fn eval(&self, u: C64) -> DenseOperator {
        let mut acc = DenseOperator::zeros(self.dim());
        for ck in self.coeffs.iter().rev() {
            acc = acc.scale(u).add(ck).expect("common dim");
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self {
                coeffs: vec![DenseOperator::zeros(self.dim())],
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, ck)| ck.scale(C64::new(k as f64, 0.0)))
            .collect();
        Self::new(coeffs).expect("non-empty")
    }

    pub fn recenter(&self, u0: C64) -> Self {
        let coeffs = taylor_shift(
            &self.coeffs,
            u0,
            |m, f| m.scale(f),
            |a, b| a.add(&b).expect("common dim"),
        );
        Self::new(coeffs).expect("non-empty")
    }
}

/// Tolerance for declaring samples consistent with the interpolant.
pub const INTERPOLATION_TOL: f64 = 1e-9;

/// Entrywise Lagrange interpolation (via Newton divided differences) of
/// operator samples at pairwise-distinct nodes.
///
/// Exactly `degree + 1` samples build the interpolant; every remaining
/// sample must agree with it within `INTERPOLATION_TOL` or the whole set is
/// rejected as inconsistent.
pub fn interpolate(
    samples: &[(C64, DenseOperator)],
    degree: usize,
) -> Result<OperatorPolynomial> {
    if samples.len() < degree + 1 {
        return Err(Error::InvalidArgument(format!(
            "degree {} needs {} samples, got {}",
            degree,
            degree + 1,
            samples.len()
        )));
    }
    for (idx, (u, _)) in samples.iter().enumerate() {
        if samples[..idx].iter().any(|(prev, _)| prev == u) {
            return Err(Error::DuplicateNode { index: idx });
        }
    }
    let dim = samples[0].1.dim();
    for (_, op) in samples {
        if op.dim() != dim {
            return Err(Error::DimMismatch {
                left: dim,
                right: op.dim(),
            });
        }
    }

    let nodes: Vec<C64> = samples[..degree + 1].iter().map(|(u, _)| *u).collect();
    let mut work: Vec<DenseOperator> =
        samples[..degree + 1].iter().map(|(_, m)| m.clone()).collect();
    let mut newton: Vec<DenseOperator> = vec![work[0].clone()];
    for k in 1..=degree {
        let mut next = Vec::with_capacity(work.len() - 1);
        for i in 0..work.len() - 1 {
            let denom = nodes[i + k] - nodes[i];
            let diff = work[i + 1].sub(&work[i]).expect("common dim");
            next.push(diff.scale(C64::new(1.0, 0.0) / denom));
        }
        work = next;
        newton.push(work[0].clone());
    }

    // expand the Newton basis product (u - u_0)...(u - u_{k-1}) to monomials
    let mut coeffs: Vec<DenseOperator> = vec![DenseOperator::zeros(dim); degree + 1];
    let mut basis: Vec<C64> = vec![C64::new(0.0, 0.0); degree + 1];
    basis[0] = C64::new(1.0, 0.0);
    for (k, dd) in newton.iter().enumerate() {
        for p in 0..=k {
            if basis[p].norm() != 0.0 {
                coeffs[p] = coeffs[p].add(&dd.scale(basis[p])).expect("common dim");
            }
        }
        if k < degree {
            let mut next = vec![C64::new(0.0, 0.0); degree + 1];
            for p in 0..=k {
                next[p + 1] += basis[p];
                next[p] -= basis[p] * nodes[k];
            }
            basis = next;
        }
    }

    let poly = OperatorPolynomial::new(coeffs)?;
    let mut worst: f64 = 0.0;
    for (u, op) in samples {
        worst = worst.max(residual(&poly.eval(*u), op)?);
    }
    if worst > INTERPOLATION_TOL {
        return Err(Error::InconsistentSamples {
            degree,
            residual: worst,
        });
    }
    Ok(poly)
}

/// `count` Chebyshev nodes on the segment [u0 - 1, u0 + 1].
pub fn chebyshev_nodes(u0: C64, count: usize) -> Vec<C64> {
    (0..count)
        .map(|j| {
            let theta = (2 * j + 1) as f64 * std::f64::consts::PI / (2 * count) as f64;
            u0 + C64::new(theta.cos(), 0.0)
        })
        .collect()
}
