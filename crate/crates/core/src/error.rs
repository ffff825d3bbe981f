use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("series coefficient of order {wanted} requested but only known through order {known}")]
    Truncation { wanted: i64, known: i64 },
    #[error("log of a series whose constant term is not 1")]
    LogConstantTerm,
    #[error("exp of a series with a nonzero constant or polar term")]
    ExpConstantTerm,
    #[error("square root of a series with odd leading order or irrational leading coefficient")]
    OddSquareRoot,
    #[error("composition needs an inner series of positive valuation")]
    BadComposition,
    #[error("antiderivative would contain a logarithm")]
    LogarithmicTerm,
    #[error("roots of {0} lie outside the working field")]
    OutsideField(String),
    #[error("expression not representable: {0}")]
    NotRepresentable(String),
    #[error("transcendental constant {0} would enter an exact result")]
    Transcendental(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("at offset {offset}: {message}")]
    Semantic { offset: usize, message: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::Semantic { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("curve file line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("x is constant")]
    ConstantX,
    #[error("y is identically zero")]
    ZeroY,
    #[error("zero of dx at z = {point} has multiplicity {multiplicity}")]
    NonSimpleZero { point: String, multiplicity: usize },
    #[error("dy vanishes at the branch point z = {0}")]
    DyVanishes(String),
    #[error("y is not analytic at the branch point z = {0}")]
    YSingular(String),
    #[error("zero of dx outside the working field: irreducible factor {0}")]
    OutsideField(String),
    #[error("dx vanishes at z = ∞, which is not supported")]
    BranchAtInfinity,
    #[error("branch points need two different quadratic extensions")]
    MixedExtensions,
    #[error("deck transform order must be at least 1")]
    BadOrder,
    #[error("z = {0} is not a validated branch point")]
    NotBranchPoint(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecursionError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("(g, n) = ({g}, {n}) is outside the range 2g − 2 + n ≥ −1, n ≥ 1")]
    BadIndex { g: usize, n: usize },
    #[error("(g, n) = ({g}, {n}) is unstable here")]
    Unstable { g: usize, n: usize },
    #[error("symmetry violated at key {0}")]
    Symmetry(String),
    #[error("string equation needs m ∈ {{0, 1}}, got {0}")]
    BadStringIndex(u32),
    #[error("depth must be at least 1")]
    BadDepth,
    #[error("x must have a simple pole at z = ∞ for the x-expansion")]
    NoSimplePoleAtInfinity,
    #[error("residue term (k = 0) present in a stable invariant")]
    ResidueTerm,
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WkbError {
    #[error(transparent)]
    Recursion(#[from] RecursionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("operator does not quantise this curve: ħ⁰ residual {0}")]
    SemiclassicalMismatch(String),
    #[error("∂P/∂y vanishes identically on the curve")]
    DegenerateDerivative,
    #[error("flavour mismatch: {0}")]
    Flavour(String),
    #[error("no polynomial correction at ħ^{order} within the degree bounds")]
    Inconsistent { order: usize },
    #[error("operator file line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("size guard: {0}")]
    Guard(String),
    #[error("argument out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
