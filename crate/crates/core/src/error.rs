use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {0} is a pole of the Gamma function")]
    GammaPole(f64),
    #[error("Gamma({0}) overflows f64")]
    GammaOverflow(f64),
    #[error("hypergeometric parameter b = {0} is a non-positive integer")]
    KummerPole(f64),
    #[error("hypergeometric series did not converge for a = {a}, b = {b}, z = {z}")]
    KummerNonConvergence { a: f64, b: f64, z: f64 },
    #[error("entropy argument {0} is below 1/2 (unphysical covariance determinant)")]
    EntropyDomain(f64),
    #[error("invalid potential: {0}")]
    InvalidSpec(String),
    #[error("could not parse potential '{input}': {reason}")]
    Parse { input: String, reason: String },
    #[error("operation not supported for {0}")]
    Unsupported(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid growth exhausted at |x| = {limit} before the tail fell below {target_tail}")]
    GridExhausted { limit: f64, target_tail: f64 },
    #[error("wavefunction tail too large ({ratio:e} of peak); grid is too small")]
    TailCondition { ratio: f64 },
    #[error("wavefunction has zero or non-finite norm")]
    ZeroNorm,
    #[error("wavefunction is not normalized")]
    NotNormalized,
    #[error("wavefunctions have disjoint supports")]
    IncompatibleDomain,
    #[error("covariance determinant {0} violates the uncertainty bound")]
    UnphysicalCovariance(f64),
    #[error("covariance matrix is singular (det = {0})")]
    SingularCovariance(f64),
    #[error("eigensolver failed: {0}")]
    Convergence(String),
    #[error("Fock basis truncated: weight {0:e} on the top basis states")]
    FockTruncation(f64),
    #[error("perturbative guard violated: |{name}| = {value} exceeds {limit}")]
    PerturbativeGuard { name: &'static str, value: f64, limit: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
