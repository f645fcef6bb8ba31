//! Concrete matrix representations on qubit chains: Pauli matrices, the
//! two-site permutation generator, single-site projectors, idempotent
//! B-operators, and the braid generator sigma = s + alpha B with its inverse
//! and closed-form powers.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{embed_pair, kron, residual, ChainGeometry, DenseOperator};

/// Tolerance on the projector constraint l^2 + m^2 + n^2 = 1/4.
pub const PROJECTOR_TOL: f64 = 1e-12;

/// Tolerance for the three B-operator axioms.
pub const B_AXIOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn label(self) -> &'static str {
        match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        }
    }
}

/// The standard 2x2 Pauli matrix.
pub fn pauli(kind: Pauli) -> DenseOperator {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let entries = match kind {
        Pauli::I => [one, z, z, one],
        Pauli::X => [z, one, one, z],
        Pauli::Y => [z, -i, i, z],
        Pauli::Z => [one, z, z, -one],
    };
    DenseOperator::from_row_slice(2, &entries).expect("static 2x2")
}

/// Two-site permutation generator (I + XX + YY + ZZ)/2, i.e. the basis swap
/// |ab> -> |ba>.
pub fn permutation_op() -> DenseOperator {
    let mut acc = kron(&pauli(Pauli::I), &pauli(Pauli::I)).expect("4x4");
    for p in [Pauli::X, Pauli::Y, Pauli::Z] {
        acc = acc.add(&kron(&pauli(p), &pauli(p)).expect("4x4")).expect("4x4");
    }
    acc.scale(C64::new(0.5, 0.0))
}

/// Parameters of a rank-1 projector P = I/2 + lX + mY + nZ on C^2.
///
/// The components may be complex; the constraint l^2 + m^2 + n^2 = 1/4 is
/// what makes P idempotent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorParams {
    l: C64,
    m: C64,
    n: C64,
}

impl ProjectorParams {
    pub fn new(l: C64, m: C64, n: C64) -> Result<Self> {
        let sum = l * l + m * m + n * n;
        let dev = (sum - C64::new(0.25, 0.0)).norm();
        if dev > PROJECTOR_TOL {
            return Err(Error::ProjectorConstraint { residual: dev });
        }
        Ok(Self { l, m, n })
    }

    pub fn components(&self) -> (C64, C64, C64) {
        (self.l, self.m, self.n)
    }

    /// Fill in n from l and m via the principal square root of
    /// 1/4 - l^2 - m^2.
    pub fn from_lm(l: C64, m: C64) -> Self {
        let n = (C64::new(0.25, 0.0) - l * l - m * m).sqrt();
        Self { l, m, n }
    }
}

/// Evaluate the projector matrix for validated parameters.
pub fn build_projector(params: &ProjectorParams) -> DenseOperator {
    let half = pauli(Pauli::I).scale(C64::new(0.5, 0.0));
    half.add(&pauli(Pauli::X).scale(params.l))
        .and_then(|m| m.add(&pauli(Pauli::Y).scale(params.m)))
        .and_then(|m| m.add(&pauli(Pauli::Z).scale(params.n)))
        .expect("2x2")
}

/// Choice of the idempotent two-site B-operator entering sigma = s + alpha B.
#[derive(Debug, Clone)]
pub enum BChoice {
    /// B = P (x) P with the same single-site projector on both legs.
    ProductProjector(ProjectorParams),
    /// B = (I + Z(x)Z)/2 = diag(1, 0, 0, 1).
    ZzHalf,
    /// Arbitrary 4x4 candidate; rejected by `build_b` unless it passes all
    /// three axioms.
    Custom(DenseOperator),
    /// Arbitrary 4x4 taken as-is, skipping validation. Only for measuring
    /// how relation checks and residuals respond to invalid operators.
    Raw(DenseOperator),
}

impl BChoice {
    pub fn label(&self) -> String {
        match self {
            BChoice::ProductProjector(p) => {
                let (l, m, n) = p.components();
                format!("product-projector(l={l}, m={m}, n={n})")
            }
            BChoice::ZzHalf => "zz-half".into(),
            BChoice::Custom(_) => "custom".into(),
            BChoice::Raw(_) => "raw".into(),
        }
    }
}

/// Residuals of the three B-operator axioms, each at `B_AXIOM_TOL`:
/// idempotence B^2 = B, commutation of neighboring embeddings, and
/// swap-invariance s B = B.
#[derive(Debug, Clone)]
pub struct BAxiomReport {
    pub idempotence: f64,
    pub neighbor_commutation: f64,
    pub swap_invariance: f64,
    pub tolerance: f64,
}

impl BAxiomReport {
    pub fn pass(&self) -> bool {
        self.idempotence <= self.tolerance
            && self.neighbor_commutation <= self.tolerance
            && self.swap_invariance <= self.tolerance
    }

    pub fn failed_axioms(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.idempotence > self.tolerance {
            out.push("idempotence (B^2 = B)");
        }
        if self.neighbor_commutation > self.tolerance {
            out.push("neighbor commutation (B_12 B_23 = B_23 B_12)");
        }
        if self.swap_invariance > self.tolerance {
            out.push("swap invariance (s B = B)");
        }
        out
    }
}

/// Check the three axioms on `n_probe` legs (at least 3, so the neighboring
/// embeddings overlap on one shared leg). Failures are reported, not thrown.
pub fn validate_b(b: &DenseOperator, n_probe: usize) -> Result<BAxiomReport> {
    if b.dim() != 4 {
        return Err(Error::InvalidArgument(format!(
            "B must be 4x4, got dim {}",
            b.dim()
        )));
    }
    if n_probe < 3 {
        return Err(Error::InvalidArgument(
            "neighbor-commutation axiom needs at least 3 probe legs".into(),
        ));
    }
    let idempotence = residual(&b.matmul(b)?, b)?;

    let mut neighbor: f64 = 0.0;
    for i in 1..=n_probe - 2 {
        let left = embed_pair(b, i, i + 1, n_probe)?;
        let right = embed_pair(b, i + 1, i + 2, n_probe)?;
        neighbor = neighbor.max(residual(&left.matmul(&right)?, &right.matmul(&left)?)?);
    }

    let s = permutation_op();
    let swap_invariance = residual(&s.matmul(b)?, b)?;

    Ok(BAxiomReport {
        idempotence,
        neighbor_commutation: neighbor,
        swap_invariance,
        tolerance: B_AXIOM_TOL,
    })
}

/// Realize the chosen B as a 4x4 matrix. `Custom` candidates must pass
/// `validate_b`; `Raw` is returned untouched.
pub fn build_b(choice: &BChoice) -> Result<DenseOperator> {
    match choice {
        BChoice::ProductProjector(p) => {
            let proj = build_projector(p);
            kron(&proj, &proj)
        }
        BChoice::ZzHalf => {
            let zz = kron(&pauli(Pauli::Z), &pauli(Pauli::Z))?;
            Ok(DenseOperator::identity(4)
                .add(&zz)?
                .scale(C64::new(0.5, 0.0)))
        }
        BChoice::Custom(op) => {
            let report = validate_b(op, 3)?;
            if !report.pass() {
                return Err(Error::BValidation(format!(
                    "custom B fails: {}",
                    report.failed_axioms().join(", ")
                )));
            }
            Ok(op.clone())
        }
        BChoice::Raw(op) => {
            if op.dim() != 4 {
                return Err(Error::InvalidArgument(format!(
                    "B must be 4x4, got dim {}",
                    op.dim()
                )));
            }
            Ok(op.clone())
        }
    }
}

/// Parameters of the braid generator sigma = s + alpha B.
#[derive(Debug, Clone)]
pub struct RepresentationParams {
    pub alpha: C64,
    pub b_choice: BChoice,
}

impl RepresentationParams {
    pub fn new(alpha: C64, b_choice: BChoice) -> Self {
        Self { alpha, b_choice }
    }
}

/// sigma = s + alpha B; invertible iff alpha != -1.
pub fn build_sigma(params: &RepresentationParams) -> Result<DenseOperator> {
    let b = build_b(&params.b_choice)?;
    permutation_op().add(&b.scale(params.alpha))
}

/// sigma^{-1} = s - (alpha / (1 + alpha)) B; requires alpha != -1.
pub fn sigma_inverse(params: &RepresentationParams) -> Result<DenseOperator> {
    let denom = params.alpha + C64::new(1.0, 0.0);
    if denom.norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "sigma^{-1} = s - alpha/(1+alpha) B requires alpha != -1".into(),
        ));
    }
    let b = build_b(&params.b_choice)?;
    permutation_op().sub(&b.scale(params.alpha / denom))
}

/// Closed-form power: sigma^p = s + [(alpha+1)^p - 1] B for odd p and
/// I + [(alpha+1)^p - 1] B for even p.
pub fn sigma_power(params: &RepresentationParams, exponent: u32) -> Result<DenseOperator> {
    let b = build_b(&params.b_choice)?;
    let factor = (params.alpha + C64::new(1.0, 0.0)).powu(exponent) - C64::new(1.0, 0.0);
    let base = if exponent.is_multiple_of(2) {
        DenseOperator::identity(4)
    } else {
        permutation_op()
    };
    base.add(&b.scale(factor))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Permutation generator s_i.
    Permutation,
    /// Braid generator sigma_i.
    Braid,
}

/// Recipe producing the generators s_i, sigma_i, 1 <= i <= N-1, on an N-site
/// chain. Each acts non-trivially only on legs (i, i+1).
#[derive(Debug, Clone)]
pub struct GeneratorFamily {
    s: DenseOperator,
    sigma: DenseOperator,
    geometry: ChainGeometry,
}

impl GeneratorFamily {
    /// Build from representation parameters; the B-choice is realized (and
    /// validated for Custom variants) once up front.
    pub fn from_params(params: &RepresentationParams, geometry: ChainGeometry) -> Result<Self> {
        Ok(Self {
            s: permutation_op(),
            sigma: build_sigma(params)?,
            geometry,
        })
    }

    /// Build from explicit two-site generators without any validation, for
    /// measuring arbitrary candidate representations.
    pub fn from_two_site(
        s: DenseOperator,
        sigma: DenseOperator,
        geometry: ChainGeometry,
    ) -> Result<Self> {
        if s.dim() != 4 || sigma.dim() != 4 {
            return Err(Error::InvalidArgument(
                "two-site generators must be 4x4".into(),
            ));
        }
        Ok(Self { s, sigma, geometry })
    }

    pub fn n_sites(&self) -> usize {
        self.geometry.n_sites()
    }

    pub fn geometry(&self) -> ChainGeometry {
        self.geometry
    }

    /// Embed the chosen generator at legs (i, i+1) on the full chain.
    pub fn generator(&self, kind: GeneratorKind, i: usize) -> Result<DenseOperator> {
        let n = self.geometry.n_sites();
        if i == 0 || i >= n {
            return Err(Error::InvalidArgument(format!(
                "generator index {i} out of range 1..={}",
                n - 1
            )));
        }
        let g = match kind {
            GeneratorKind::Permutation => &self.s,
            GeneratorKind::Braid => &self.sigma,
        };
        embed_pair(g, i, i + 1, n)
    }
}

/// Coefficients of a two-site operator in the Pauli product basis, indexed
/// [first leg][second leg] over (I, X, Y, Z).
pub fn pauli_decompose_two_site(op: &DenseOperator) -> Result<[[C64; 4]; 4]> {
    if op.dim() != 4 {
        return Err(Error::InvalidArgument(format!(
            "expected a 4x4 operator, got dim {}",
            op.dim()
        )));
    }
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    for (a, pa) in Pauli::ALL.iter().enumerate() {
        for (b, pb) in Pauli::ALL.iter().enumerate() {
            let basis = kron(&pauli(*pa), &pauli(*pb))?;
            // Pauli products are involutions: tr(basis * op) / 4
            out[a][b] = basis.matmul(op)?.trace() * C64::new(0.25, 0.0);
        }
    }
    Ok(out)
}
