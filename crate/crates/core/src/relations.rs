//! Machine verification of the motion-group presentation relations for a
//! generator family, and classification of which group the representation
//! realizes (virtual, loop, opposite loop, or symmetric loop braid group).

use crate::error::{Error, Result};
use crate::linalg::{residual, DenseOperator};
use crate::reps::{GeneratorFamily, GeneratorKind};

/// Default pass tolerance for relation residuals.
pub const RELATION_TOL: f64 = 1e-11;

/// Identifiers of the presentation relations. B1/B2 are the braid relations,
/// S1-S3 the permutation relations, M1-M4 the mixed relations (M3P is M3
/// read backwards; M4 is extra structure on top of the presentation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationId {
    B1,
    B2,
    S1,
    S2,
    S3,
    M1,
    M2,
    M3,
    M3P,
    M4,
}

impl RelationId {
    pub const ALL: [RelationId; 10] = [
        RelationId::B1,
        RelationId::B2,
        RelationId::S1,
        RelationId::S2,
        RelationId::S3,
        RelationId::M1,
        RelationId::M2,
        RelationId::M3,
        RelationId::M3P,
        RelationId::M4,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RelationId::B1 => "B1",
            RelationId::B2 => "B2",
            RelationId::S1 => "S1",
            RelationId::S2 => "S2",
            RelationId::S3 => "S3",
            RelationId::M1 => "M1",
            RelationId::M2 => "M2",
            RelationId::M3 => "M3",
            RelationId::M3P => "M3'",
            RelationId::M4 => "M4",
        }
    }

    /// Smallest chain length on which the relation is non-vacuous.
    pub fn min_sites(self) -> usize {
        match self {
            RelationId::S3 => 2,
            RelationId::B2 | RelationId::S2 | RelationId::M1 => 4,
            _ => 3,
        }
    }

    /// Far-commutation relations quantify over index pairs (i, j).
    pub fn is_far_commutation(self) -> bool {
        matches!(self, RelationId::B2 | RelationId::S2 | RelationId::M1)
    }

    pub fn is_mixed(self) -> bool {
        matches!(
            self,
            RelationId::M1 | RelationId::M2 | RelationId::M3 | RelationId::M3P | RelationId::M4
        )
    }
}

impl std::fmt::Display for RelationId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

use GeneratorKind::{Braid as Q, Permutation as P};

/// One generator letter: (kind, site index).
type Letter = (GeneratorKind, usize);

/// Word in the generators, applied left to right in operator-product order.
fn word(fam: &GeneratorFamily, letters: &[Letter]) -> Result<DenseOperator> {
    let mut acc = DenseOperator::identity(1 << fam.n_sites());
    for &(kind, i) in letters {
        acc = acc.matmul(&fam.generator(kind, i)?)?;
    }
    Ok(acc)
}

/// Residual of one relation instance at base index `i` (and `j` for
/// far-commutation relations).
pub fn relation_residual_at(
    fam: &GeneratorFamily,
    rel: RelationId,
    i: usize,
    j: Option<usize>,
) -> Result<f64> {
    let (lhs, rhs): (Vec<Letter>, Vec<Letter>) = match rel {
        RelationId::B1 => (
            vec![(Q, i), (Q, i + 1), (Q, i)],
            vec![(Q, i + 1), (Q, i), (Q, i + 1)],
        ),
        RelationId::S1 => (
            vec![(P, i), (P, i + 1), (P, i)],
            vec![(P, i + 1), (P, i), (P, i + 1)],
        ),
        RelationId::S3 => (vec![(P, i), (P, i)], vec![]),
        RelationId::B2 => {
            let j = j.ok_or_else(|| missing_j(rel))?;
            (vec![(Q, i), (Q, j)], vec![(Q, j), (Q, i)])
        }
        RelationId::S2 => {
            let j = j.ok_or_else(|| missing_j(rel))?;
            (vec![(P, i), (P, j)], vec![(P, j), (P, i)])
        }
        RelationId::M1 => {
            let j = j.ok_or_else(|| missing_j(rel))?;
            (vec![(Q, i), (P, j)], vec![(P, j), (Q, i)])
        }
        RelationId::M2 => (
            vec![(P, i), (P, i + 1), (Q, i)],
            vec![(Q, i + 1), (P, i), (P, i + 1)],
        ),
        RelationId::M3 => (
            vec![(Q, i), (Q, i + 1), (P, i)],
            vec![(P, i + 1), (Q, i), (Q, i + 1)],
        ),
        RelationId::M3P => (
            vec![(Q, i + 1), (Q, i), (P, i + 1)],
            vec![(P, i), (Q, i + 1), (Q, i)],
        ),
        RelationId::M4 => (
            vec![(Q, i), (P, i + 1), (Q, i)],
            vec![(Q, i + 1), (P, i), (Q, i + 1)],
        ),
    };
    residual(&word(fam, &lhs)?, &word(fam, &rhs)?)
}

fn missing_j(rel: RelationId) -> Error {
    Error::InvalidArgument(format!("{rel} needs a second index j with |i-j| > 1"))
}

/// Result of one relation check: worst residual over all admissible index
/// choices on the family's chain.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub relation: RelationId,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn check_relation(fam: &GeneratorFamily, rel: RelationId) -> Result<RelationCheck> {
    check_relation_with_tol(fam, rel, RELATION_TOL)
}

/// Worst-case residual over every admissible index instance of the relation.
pub fn check_relation_with_tol(
    fam: &GeneratorFamily,
    rel: RelationId,
    tolerance: f64,
) -> Result<RelationCheck> {
    let n = fam.n_sites();
    let min = rel.min_sites();
    if n < min {
        return Err(Error::ChainTooShort {
            relation: rel.label().into(),
            min,
            got: n,
        });
    }
    let mut worst: f64 = 0.0;
    if rel.is_far_commutation() {
        for i in 1..=n - 1 {
            for j in i + 2..=n - 1 {
                worst = worst.max(relation_residual_at(fam, rel, i, Some(j))?);
            }
        }
    } else if rel == RelationId::S3 {
        for i in 1..=n - 1 {
            worst = worst.max(relation_residual_at(fam, rel, i, None)?);
        }
    } else {
        for i in 1..=n - 2 {
            worst = worst.max(relation_residual_at(fam, rel, i, None)?);
        }
    }
    Ok(RelationCheck {
        relation: rel,
        residual: worst,
        tolerance,
        pass: worst <= tolerance,
    })
}

/// Group realized by a representation, judged from which relations hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupClass {
    /// All relations including both M3 and M3' hold.
    SymmetricLoopBraid,
    /// M3 holds, M3' fails.
    LoopBraid,
    /// M3' holds, M3 fails.
    OppositeLoopBraid,
    /// All relations except M3 and M3' hold.
    VirtualBraid,
    /// Some permutation relation fails; the s_i do not even realize the
    /// symmetric group, so no motion-group taxonomy applies.
    NotMotionGroup,
    /// Permutation relations hold but a braid or mixed prerequisite
    /// (B1, B2, M1, M2) fails.
    None,
}

impl GroupClass {
    pub fn label(self) -> &'static str {
        match self {
            GroupClass::SymmetricLoopBraid => "SLB",
            GroupClass::LoopBraid => "LB",
            GroupClass::OppositeLoopBraid => "OLB",
            GroupClass::VirtualBraid => "VB",
            GroupClass::NotMotionGroup => "not-motion-group",
            GroupClass::None => "none",
        }
    }
}

impl std::fmt::Display for GroupClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Full per-relation table plus taxonomy. M4 is evaluated and reported but
/// does not enter the classification.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub checks: Vec<RelationCheck>,
    pub classification: GroupClass,
    pub m4_satisfied: bool,
    pub tolerance: f64,
}

impl RelationReport {
    pub fn check(&self, rel: RelationId) -> &RelationCheck {
        self.checks
            .iter()
            .find(|c| c.relation == rel)
            .expect("all relations present")
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

pub fn classify(fam: &GeneratorFamily) -> Result<RelationReport> {
    classify_with_tol(fam, RELATION_TOL)
}

pub fn classify_with_tol(fam: &GeneratorFamily, tolerance: f64) -> Result<RelationReport> {
    if fam.n_sites() < 4 {
        return Err(Error::ChainTooShort {
            relation: "classification".into(),
            min: 4,
            got: fam.n_sites(),
        });
    }
    let checks: Vec<RelationCheck> = RelationId::ALL
        .iter()
        .map(|&rel| check_relation_with_tol(fam, rel, tolerance))
        .collect::<Result<_>>()?;
    let passed = |rel: RelationId| checks.iter().find(|c| c.relation == rel).unwrap().pass;

    let s_ok = passed(RelationId::S1) && passed(RelationId::S2) && passed(RelationId::S3);
    let base_ok = passed(RelationId::B1)
        && passed(RelationId::B2)
        && passed(RelationId::M1)
        && passed(RelationId::M2);
    let classification = if !s_ok {
        GroupClass::NotMotionGroup
    } else if !base_ok {
        GroupClass::None
    } else {
        match (passed(RelationId::M3), passed(RelationId::M3P)) {
            (true, true) => GroupClass::SymmetricLoopBraid,
            (true, false) => GroupClass::LoopBraid,
            (false, true) => GroupClass::OppositeLoopBraid,
            (false, false) => GroupClass::VirtualBraid,
        }
    };
    let m4_satisfied = passed(RelationId::M4);
    Ok(RelationReport {
        checks,
        classification,
        m4_satisfied,
        tolerance,
    })
}
