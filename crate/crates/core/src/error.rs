use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("polynomial syntax: {0}")]
    Polynomial(String),
    #[error("scalar syntax: {0}")]
    Scalar(String),
    #[error("json: {0}")]
    Json(String),
    #[error("schema: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExteriorError {
    #[error("chart mismatch: dimension {left} vs {right}")]
    ChartMismatch { left: usize, right: usize },
    #[error("index {index} out of range for chart of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("arity mismatch: {forms} forms against a degree-{degree} multivector")]
    ArityMismatch { forms: usize, degree: usize },
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("point has {got} coordinates, chart needs {want}")]
    PointDimension { got: usize, want: usize },
    #[error("expected a homogeneous element")]
    Inhomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("form is not in I_Z: id + Z#beta# is singular")]
    NotInIZ,
    #[error("restriction of the form to the complement is degenerate")]
    DegenerateRestriction,
    #[error("subspaces are not complementary")]
    NotComplement,
    #[error("form has a nonzero block on the kernel (not horizontal)")]
    NonHorizontal,
    #[error("subspaces are not transverse")]
    NotTransverse,
    #[error("singular matrix")]
    Singular,
    #[error("entry degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KoszulError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error("expected a form of degree {want}, got degree {got}")]
    WrongDegree { want: usize, got: usize },
    #[error("bracket arity {0} is not one of 1, 2, 3")]
    Arity(usize),
    #[error("det(id + Z#beta#) vanishes identically")]
    GenericallySingular,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresymplecticError {
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error("cannot certify constant rank: {0}")]
    CannotCertify(String),
    #[error("form is not closed")]
    NotClosed,
    #[error("frame does not span a subbundle of rank {want} (rank {got} at the reference point)")]
    NotASubbundle { want: usize, got: usize },
    #[error("complement frame is invalid: {0}")]
    BadComplement(String),
    #[error("kernel frame has a denominator that may vanish on the chart")]
    SingularFrame,
    #[error("input is not horizontal")]
    NotHorizontal,
    #[error("form is not in I_Z")]
    NotInIZ,
}
