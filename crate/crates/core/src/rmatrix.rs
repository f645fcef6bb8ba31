//! R-matrix ansaetze and their certification: Yang-Baxter residuals in the
//! braided and standard conventions, the RTT exchange relation, the ABCD
//! commutation relations of the rational model, and the auxiliary-trace
//! proportionality check.

use num_complex::Complex64 as C64;

use crate::chain;
use crate::error::{Error, Result};
use crate::linalg::{embed_pair, insert_identity_leg, residual, DenseOperator};
use crate::reps::{build_b, build_sigma, permutation_op, RepresentationParams};
use crate::spectral::{OperatorPolynomial, SpectralPolynomial};

/// Tolerance for the internal sigma-algebra consistency check in the
/// second ansatz.
const A2_CONSISTENCY_TOL: f64 = 1e-12;

/// Default tolerance for declaring the auxiliary trace proportional to the
/// identity.
pub const AUX_TRACE_TOL: f64 = 1e-10;

/// One of the three braid-generator ansaetze or the rational R-matrix.
///
/// * `A1`: R(u) = s + a(u) sigma
/// * `A2`: R(u) = I + a(u) s sigma
/// * `A3`: R(u) = I + a(u) s + b(u) B
/// * `Rational`: R(u) = u I + c s
#[derive(Debug, Clone)]
pub enum RMatrixSpec {
    A1 {
        params: RepresentationParams,
        a_fn: SpectralPolynomial,
    },
    A2 {
        params: RepresentationParams,
        a_fn: SpectralPolynomial,
    },
    A3 {
        params: RepresentationParams,
        a_fn: SpectralPolynomial,
        b_fn: SpectralPolynomial,
    },
    Rational {
        c: C64,
    },
}

impl RMatrixSpec {
    pub fn name(&self) -> &'static str {
        match self {
            RMatrixSpec::A1 { .. } => "a1",
            RMatrixSpec::A2 { .. } => "a2",
            RMatrixSpec::A3 { .. } => "a3",
            RMatrixSpec::Rational { .. } => "rational",
        }
    }

    /// The deformed-model spec: A3 with a(u) = alpha u, b(u) = -2 alpha u.
    pub fn deformed_model(params: RepresentationParams) -> Self {
        let alpha = params.alpha;
        RMatrixSpec::A3 {
            params,
            a_fn: SpectralPolynomial::linear(alpha),
            b_fn: SpectralPolynomial::linear(C64::new(-2.0, 0.0) * alpha),
        }
    }

    /// Express R(u) as an operator-valued polynomial in u.
    pub fn operator_polynomial(&self) -> Result<OperatorPolynomial> {
        let id = DenseOperator::identity(4);
        let s = permutation_op();
        match self {
            RMatrixSpec::Rational { c } => {
                OperatorPolynomial::new(vec![s.scale(*c), id])
            }
            RMatrixSpec::A1 { params, a_fn } => {
                let sigma = build_sigma(params)?;
                assemble(&s, &[(a_fn, &sigma)])
            }
            RMatrixSpec::A2 { params, a_fn } => {
                let sigma = build_sigma(params)?;
                let s_sigma = s.matmul(&sigma)?;
                // s sigma = I + alpha B whenever s B = B; guard the algebra
                let b = build_b(&params.b_choice)?;
                let expect = id.add(&b.scale(params.alpha))?;
                let dev = residual(&s_sigma, &expect)?;
                if dev > A2_CONSISTENCY_TOL {
                    return Err(Error::Inconsistent(format!(
                        "s sigma deviates from I + alpha B by {dev:.3e}; \
                         the chosen B is not swap-invariant"
                    )));
                }
                assemble(&id, &[(a_fn, &s_sigma)])
            }
            RMatrixSpec::A3 { params, a_fn, b_fn } => {
                let b = build_b(&params.b_choice)?;
                assemble(&id, &[(a_fn, &s), (b_fn, &b)])
            }
        }
    }
}

/// base + sum_k poly_k(u) * op_k, as a polynomial in u.
fn assemble(
    base: &DenseOperator,
    terms: &[(&SpectralPolynomial, &DenseOperator)],
) -> Result<OperatorPolynomial> {
    let max_len = terms
        .iter()
        .map(|(p, _)| p.coeffs().len())
        .max()
        .unwrap_or(0)
        .max(1);
    let mut coeffs = vec![DenseOperator::zeros(4); max_len];
    coeffs[0] = base.clone();
    for (poly, op) in terms {
        for (k, &ck) in poly.coeffs().iter().enumerate() {
            coeffs[k] = coeffs[k].add(&op.scale(ck))?;
        }
    }
    OperatorPolynomial::new(coeffs)
}

/// Evaluate the 4x4 R-matrix at spectral parameter u.
pub fn build_r(spec: &RMatrixSpec, u: C64) -> Result<DenseOperator> {
    Ok(spec.operator_polynomial()?.eval(u))
}

/// Convention for a Yang-Baxter check: which legs each factor acts on and
/// which spectral arguments appear.
///
/// * `Braided`: R_12(u-v) R_23(u) R_12(v) = R_23(v) R_12(u) R_23(u-v)
/// * `StandardSum`: R_12(u) R_13(u+v) R_23(v) = R_23(v) R_13(u+v) R_12(u)
/// * `StandardDifference`: R_12(u-v) R_13(u) R_23(v) = R_23(v) R_13(u) R_12(u-v)
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YbeConvention {
    Braided,
    StandardSum,
    StandardDifference,
}

impl YbeConvention {
    pub fn label(self) -> &'static str {
        match self {
            YbeConvention::Braided => "braided (u-v, u, v) on legs (12),(23),(12)",
            YbeConvention::StandardSum => "standard (u, u+v, v) on legs (12),(13),(23)",
            YbeConvention::StandardDifference => {
                "standard difference (u-v, u, v) on legs (12),(13),(23)"
            }
        }
    }

    /// Short machine-readable tag used in reports.
    pub fn tag(self) -> &'static str {
        match self {
            YbeConvention::Braided => "braided",
            YbeConvention::StandardSum => "standard-sum",
            YbeConvention::StandardDifference => "standard-difference",
        }
    }
}

impl std::fmt::Display for YbeConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Residual of the Yang-Baxter identity on three legs under the given
/// convention.
pub fn ybe_residual(spec: &RMatrixSpec, conv: YbeConvention, u: C64, v: C64) -> Result<f64> {
    let r = |arg: C64| -> Result<DenseOperator> { build_r(spec, arg) };
    let (lhs, rhs) = match conv {
        YbeConvention::Braided => {
            let r12 = |arg: C64| -> Result<DenseOperator> { embed_pair(&r(arg)?, 1, 2, 3) };
            let r23 = |arg: C64| -> Result<DenseOperator> { embed_pair(&r(arg)?, 2, 3, 3) };
            let lhs = r12(u - v)?.matmul(&r23(u)?)?.matmul(&r12(v)?)?;
            let rhs = r23(v)?.matmul(&r12(u)?)?.matmul(&r23(u - v)?)?;
            (lhs, rhs)
        }
        YbeConvention::StandardSum | YbeConvention::StandardDifference => {
            let (arg12, arg13) = if conv == YbeConvention::StandardSum {
                (u, u + v)
            } else {
                (u - v, u)
            };
            let r12 = embed_pair(&r(arg12)?, 1, 2, 3)?;
            let r13 = embed_pair(&r(arg13)?, 1, 3, 3)?;
            let r23 = embed_pair(&r(v)?, 2, 3, 3)?;
            let lhs = r12.matmul(&r13)?.matmul(&r23)?;
            let rhs = r23.matmul(&r13)?.matmul(&r12)?;
            (lhs, rhs)
        }
    };
    residual(&lhs, &rhs)
}

/// Braided Yang-Baxter residual for the first ansatz with the three
/// coefficient values treated as independent scalars:
/// (s + a1 sigma)_12 (s + a2 sigma)_23 (s + a3 sigma)_12 vs the mirrored
/// product. Only meaningful for `A1` specs.
pub fn ybe_residual_free_coeffs(
    spec: &RMatrixSpec,
    a1: C64,
    a2: C64,
    a3: C64,
) -> Result<f64> {
    let params = match spec {
        RMatrixSpec::A1 { params, .. } => params,
        other => {
            return Err(Error::InvalidArgument(format!(
                "free-coefficient check applies to the a1 ansatz, got {}",
                other.name()
            )))
        }
    };
    let s = permutation_op();
    let sigma = build_sigma(params)?;
    let factor = |a: C64| -> Result<DenseOperator> { s.add(&sigma.scale(a)) };
    let on12 = |a: C64| -> Result<DenseOperator> { embed_pair(&factor(a)?, 1, 2, 3) };
    let on23 = |a: C64| -> Result<DenseOperator> { embed_pair(&factor(a)?, 2, 3, 3) };
    let lhs = on12(a1)?.matmul(&on23(a2)?)?.matmul(&on12(a3)?)?;
    let rhs = on23(a3)?.matmul(&on12(a2)?)?.matmul(&on23(a1)?)?;
    residual(&lhs, &rhs)
}

/// Residual of R_12(u-v) T_1(u) T_2(v) = T_2(v) T_1(u) R_12(u-v) on
/// V1 (x) V2 (x) H.
///
/// `t_builder` must produce the monodromy-like operator on the (N+1)-leg
/// space with the auxiliary leg first; `n_sites` fixes N.
pub fn rtt_residual<F>(
    spec: &RMatrixSpec,
    t_builder: F,
    n_sites: usize,
    u: C64,
    v: C64,
) -> Result<f64>
where
    F: Fn(C64) -> Result<DenseOperator>,
{
    let n_total = n_sites + 2;
    let expect_dim = 1usize << (n_sites + 1);
    let t_u = t_builder(u)?;
    let t_v = t_builder(v)?;
    if t_u.dim() != expect_dim || t_v.dim() != expect_dim {
        return Err(Error::DimMismatch {
            left: t_u.dim(),
            right: expect_dim,
        });
    }
    // T_1 keeps its auxiliary leg at position 1 and gets an identity leg at
    // position 2; T_2 is the reverse.
    let t1 = insert_identity_leg(&t_u, 2, n_sites + 1)?;
    let t2 = insert_identity_leg(&t_v, 1, n_sites + 1)?;
    let r12 = embed_pair(&build_r(spec, u - v)?, 1, 2, n_total)?;
    let lhs = r12.matmul(&t1)?.matmul(&t2)?;
    let rhs = t2.matmul(&t1)?.matmul(&r12)?;
    residual(&lhs, &rhs)
}

/// Auxiliary indices of a monodromy block, each 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbcdIndices {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl AbcdIndices {
    pub fn new(i: usize, j: usize, k: usize, l: usize) -> Result<Self> {
        for idx in [i, j, k, l] {
            if !(1..=2).contains(&idx) {
                return Err(Error::InvalidArgument(format!(
                    "auxiliary index {idx} out of range 1..=2"
                )));
            }
        }
        Ok(Self { i, j, k, l })
    }

    pub fn all() -> Vec<Self> {
        let mut out = Vec::with_capacity(16);
        for i in 1..=2 {
            for j in 1..=2 {
                for k in 1..=2 {
                    for l in 1..=2 {
                        out.push(Self { i, j, k, l });
                    }
                }
            }
        }
        out
    }
}

/// Residual of the exchange algebra of monodromy blocks for the rational
/// R-matrix:
/// [T^{ij}(u), T^{kl}(v)] = c/(u-v) (T^{kj}(v) T^{il}(u) - T^{kj}(u) T^{il}(v)).
pub fn abcd_residual(
    spec: &RMatrixSpec,
    n_sites: usize,
    u: C64,
    v: C64,
    idx: AbcdIndices,
) -> Result<f64> {
    let c = match spec {
        RMatrixSpec::Rational { c } => *c,
        other => {
            return Err(Error::InvalidArgument(format!(
                "the block exchange algebra is stated for the rational ansatz, got {}",
                other.name()
            )))
        }
    };
    if u == v {
        return Err(Error::InvalidArgument(
            "u = v hits the pole of the structure function c/(u-v)".into(),
        ));
    }
    let t_u = chain::monodromy(spec, u, n_sites)?;
    let t_v = chain::monodromy(spec, v, n_sites)?;
    let blk = |t: &DenseOperator, a: usize, b: usize| chain::monodromy_block(t, a, b);
    let lhs = blk(&t_u, idx.i, idx.j)?
        .matmul(&blk(&t_v, idx.k, idx.l)?)?
        .sub(&blk(&t_v, idx.k, idx.l)?.matmul(&blk(&t_u, idx.i, idx.j)?)?)?;
    let rhs = blk(&t_v, idx.k, idx.j)?
        .matmul(&blk(&t_u, idx.i, idx.l)?)?
        .sub(&blk(&t_u, idx.k, idx.j)?.matmul(&blk(&t_v, idx.i, idx.l)?)?)?
        .scale(c / (u - v));
    residual(&lhs, &rhs)
}

/// Outcome of tracing R(u) over the leg playing the auxiliary role.
#[derive(Debug, Clone)]
pub enum AuxTrace {
    /// The trace equals lambda * I within `AUX_TRACE_TOL`.
    Proportional { lambda: C64, deviation: f64 },
    /// The trace is a genuine single-site operator.
    NotProportional {
        trace: DenseOperator,
        deviation: f64,
    },
}

impl AuxTrace {
    pub fn is_proportional(&self) -> bool {
        matches!(self, AuxTrace::Proportional { .. })
    }
}

/// Partial trace of R(u) over the second tensor factor (the auxiliary leg of
/// the reversed embedding R_{k+1,0}), tested for proportionality to the
/// identity.
pub fn aux_trace_check(spec: &RMatrixSpec, u: C64) -> Result<AuxTrace> {
    let r = build_r(spec, u)?;
    let mut grid = [C64::new(0.0, 0.0); 4];
    for a in 0..2 {
        for ap in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for b in 0..2 {
                acc += r.get(2 * a + b, 2 * ap + b);
            }
            grid[a * 2 + ap] = acc;
        }
    }
    let trace = DenseOperator::from_row_slice(2, &grid)?;
    let lambda = trace.trace() * C64::new(0.5, 0.0);
    let deviation = residual(&trace, &DenseOperator::identity(2).scale(lambda))?;
    if deviation <= AUX_TRACE_TOL {
        Ok(AuxTrace::Proportional { lambda, deviation })
    } else {
        Ok(AuxTrace::NotProportional { trace, deviation })
    }
}
