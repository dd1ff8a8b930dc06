use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("matrix is not Hermitian (max |m - m^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("iterative decomposition did not converge: {0}")]
    ConvergenceFailure(&'static str),
    #[error("columns are not orthonormal (Gram residual {residual:e})")]
    NotOrthonormal { residual: f64 },
    #[error("basis is numerically singular (sigma_min / sigma_max = {ratio:e})")]
    SingularBasis { ratio: f64 },
    #[error("state has norm {norm:e}, which is indistinguishable from zero")]
    ZeroState { norm: f64 },
    #[error("operators do not commute (max |[r, t]| = {deviation:e})")]
    NotCommuting { deviation: f64 },
    #[error("algebra does not contain the identity")]
    NonUnital,
    #[error("pair of algebras is not a tensor product partition: {0}")]
    NotATpp(String),
    #[error("no generic observable pair found after {attempts} draws")]
    GenericElementFailure { attempts: usize },
    #[error("operator is not diagonalizable: {0}")]
    NotDiagonalizable(String),
    #[error("eigenvalue multiplicities do not form a k x l grid: {0}")]
    MultiplicityViolation(String),
    #[error("joint eigenspace is not one-dimensional: {0}")]
    JointDegeneracy(String),
    #[error("observable pairs are not complementary")]
    NotComplementary,
    #[error("dimension {n} is prime; no nontrivial factorization exists")]
    NonCompositeDim { n: usize },
    #[error("shape {k}x{l} is too small; both factors need dimension >= 2")]
    ShapeTooSmall { k: usize, l: usize },
    #[error("deformation coefficient at ({j}, {i}) is zero")]
    ZeroAlpha { j: usize, i: usize },
    #[error("expansion leaves the {degree}x{degree} grid at monomial {var1}^{a} {var2}^{b}")]
    GridOverflow {
        var1: String,
        var2: String,
        a: usize,
        b: usize,
        degree: usize,
    },
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// Stable variant name, used by the CLI and the JSON reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NonFinite { .. } => "NonFinite",
            Error::InvalidTolerance(_) => "InvalidTolerance",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::NotOrthonormal { .. } => "NotOrthonormal",
            Error::SingularBasis { .. } => "SingularBasis",
            Error::ZeroState { .. } => "ZeroState",
            Error::NotCommuting { .. } => "NotCommuting",
            Error::NonUnital => "NonUnital",
            Error::NotATpp(_) => "NotATpp",
            Error::GenericElementFailure { .. } => "GenericElementFailure",
            Error::NotDiagonalizable(_) => "NotDiagonalizable",
            Error::MultiplicityViolation(_) => "MultiplicityViolation",
            Error::JointDegeneracy(_) => "JointDegeneracy",
            Error::NotComplementary => "NotComplementary",
            Error::NonCompositeDim { .. } => "NonCompositeDim",
            Error::ShapeTooSmall { .. } => "ShapeTooSmall",
            Error::ZeroAlpha { .. } => "ZeroAlpha",
            Error::GridOverflow { .. } => "GridOverflow",
            Error::Input(_) => "Input",
        }
    }

    /// True for errors meaning "the input was well-formed but failed a structural check".
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::NotATpp(_)
                | Error::GenericElementFailure { .. }
                | Error::NotDiagonalizable(_)
                | Error::MultiplicityViolation(_)
                | Error::JointDegeneracy(_)
                | Error::NotComplementary
        )
    }
}
