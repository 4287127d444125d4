use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("value is not a root of the polynomial")]
    NotARoot,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coordinate {coord} is not homogeneous")]
    Inhomogeneous { coord: usize },
    #[error("coordinate {coord} has degree {found}, expected {expected}")]
    DegreeMismatch {
        coord: usize,
        expected: u32,
        found: u32,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("problem too large: {0}")]
    DimensionTooLarge(String),
    #[error("every sampled prime was unlucky (Macaulay minor vanished)")]
    UnluckyPrimeExhaustion,
    #[error("sampling region is empty: rejection rate exceeded 99.9%")]
    EmptyRegion,
    #[error("orbit left the affine chart X0 != 0 at step {step}")]
    OrbitLeftChart { step: i64 },
    #[error("backward orbit heights do not grow")]
    BoundedOrbit,
    #[error("orbit is periodic")]
    PeriodicOrbit,
    #[error("binary quadratic form is identically zero")]
    DegenerateForm,
    #[error("fiber of the projection is not finite")]
    DegenerateFiber,
    #[error("linear form vanishes identically on the fiber")]
    LinearFormVanishes,
    #[error("height overflow: a coordinate exceeded {max_bits} bits")]
    HeightOverflow { max_bits: u64 },
    #[error("no acceptable surface found after {attempts} attempts")]
    SearchExhausted { attempts: usize },
    #[error("point is not on the surface")]
    NotOnSurface,
    #[error("map is indeterminate at the point")]
    Indeterminate,
    #[error("not an affine automorphism: {0}")]
    NotAutomorphism(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
