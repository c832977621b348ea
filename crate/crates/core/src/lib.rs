//! Exact computations on knot graphs: Brieskorn-manifold homology via
//! Orlik's algorithm, invariants of formal connected sums of atlas knots,
//! certified lower/upper bounds on Gordian-type distances, finite metric
//! graphs with hyperbolicity diagnostics, and machine-checkable
//! geodesic-triangle certificates.

pub mod abelian;
pub mod bounds;
pub mod brieskorn;
pub mod knots;
pub mod metricgraph;
pub mod witness;

/// Exact rational used for distance bounds and metric quantities.
pub type Rational = num::rational::Ratio<i64>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid Brieskorn weights ({0}, {1}, {2}): each weight must exceed 1")]
    InvalidWeights(u64, u64, u64),
    #[error("c(I) undefined for I = {{1,2,3}}: gcd of the empty weight set")]
    FullSubsetCValue,
    #[error("c({0}) is non-integral: {1}/{2}")]
    NonIntegralC(String, u64, u64),
    #[error("torus knot parameters ({0}, {1}) must be coprime and at least 2 in absolute value")]
    InvalidTorusKnot(i64, i64),
    #[error("unknown named knot {0:?}")]
    UnknownNamedKnot(String),
    #[error("cover degree must be at least 2, got {0}")]
    InvalidCoverDegree(i64),
    #[error("{generator} does not support a degree-{degree} cyclic branched cover")]
    UnsupportedCover { generator: String, degree: i64 },
    #[error("H(n)-moves require n >= 2, got {0}")]
    InvalidMoveIndex(i64),
    #[error("step {index} of the path ({from} -> {to}) matches no move-catalog entry")]
    UncertifiedStep {
        index: usize,
        from: String,
        to: String,
    },
    #[error("lower bound {lower} exceeds upper bound {upper}")]
    ContradictoryBounds { lower: String, upper: String },
    #[error("quasi-isometry constants require n >= 3, got {0}")]
    QiConstantsRange(i64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("graph parse error at line {line}: {message}")]
    GraphParse { line: usize, message: String },
    #[error("triangle sides do not close up")]
    OpenTriangle,
    #[error("vertex path step {0} is not an edge")]
    NotAPath(usize),
    #[error("triangle side {0} is not geodesic (length {1}, distance {2})")]
    NonGeodesicSide(usize, i64, i64),
    #[error("witness parameter out of range: {0}")]
    WitnessParameter(String),
    #[error("witness verification failed: {0}")]
    WitnessVerification(String),
    #[error("invariant {0} is not exactly computable on {1}")]
    InvariantNotExact(String, String),
    #[error("atlas file parse error at line {line}: {message}")]
    AtlasParse { line: usize, message: String },
    #[error("atlas extensions already loaded")]
    AtlasAlreadyLoaded,
}

pub type Result<T> = std::result::Result<T, Error>;
