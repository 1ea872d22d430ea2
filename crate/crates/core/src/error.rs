use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Standing assumptions of the analysis. A violated one is a genericity failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// beta1(0) = 0 and beta2(0) = 0.
    Chenciner,
    /// L0 = L2(0) != 0.
    L0Nonzero,
    /// c1 d2 - c2 d1 = 0, the degeneracy (dc1).
    Degeneracy,
    /// c1 l2 - c2 l1 != 0, regularity of the new parameter change (newt).
    Regularity,
    /// m2 != 0.
    M2Nonzero,
    /// c1 != 0.
    C1Nonzero,
    /// d1 != 0.
    D1Nonzero,
    /// c1 d1 != 0, needed to place the boundary curves.
    C1D1Nonzero,
    /// d1 l2 - d2 l1 != 0, denominator of the closed form for m2.
    M2Denominator,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::Chenciner => "Chenciner condition beta1(0) = beta2(0) = 0",
            Condition::L0Nonzero => "L0 != 0",
            Condition::Degeneracy => "(dc1) c1*d2 - c2*d1 = 0",
            Condition::Regularity => "(newt) c1*l2 - c2*l1 != 0",
            Condition::M2Nonzero => "m2 != 0",
            Condition::C1Nonzero => "c1 != 0",
            Condition::D1Nonzero => "d1 != 0",
            Condition::C1D1Nonzero => "c1*d1 != 0",
            Condition::M2Denominator => "d1*l2 - d2*l1 != 0",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series order {0} is outside the supported range 0..=8")]
    UnsupportedOrder(u32),

    #[error("substituted series must have zero constant term")]
    ShiftedComposition,

    #[error("series with zero constant term has no reciprocal")]
    NotUnit,

    #[error("cannot parse series `{input}`: {reason}")]
    SeriesParse { input: String, reason: String },

    #[error("modulus r must be positive, got {0}")]
    InvalidModulus(f64),

    #[error("rotation angle theta0 = {0} must lie strictly between 0 and pi")]
    InvalidAngle(f64),

    #[error("L2(alpha) = {0:e} is within tolerance of zero; the circle equation degenerates")]
    DegenerateQuadratic(f64),

    #[error("inversion order {k} must lie in 1..={order}")]
    InversionOrder { k: u32, order: u32 },

    #[error("L0 is within tolerance of zero")]
    ZeroL0,

    #[error("genericity failure: {0} does not hold")]
    Genericity(Condition),
}

impl Error {
    /// The violated standing assumption, when this is a genericity failure.
    pub fn condition(&self) -> Option<Condition> {
        match self {
            Error::Genericity(c) => Some(*c),
            Error::ZeroL0 => Some(Condition::L0Nonzero),
            _ => None,
        }
    }
}
