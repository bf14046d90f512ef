use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {size} exceeds cap {cap}")]
    FieldCap { size: u64, cap: u64 },
    #[error("enumeration of {0} points exceeds the enumeration cap")]
    EnumerationCap(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {0} does not belong to this field")]
    ForeignElement(u32),
    #[error("{q} is not a power of the characteristic {p}")]
    NotCharPower { q: u64, p: u32 },
    #[error("zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("polynomial of degree {deg} has no root in F_{p}^{n}")]
    NoRoot { deg: usize, p: u32, n: u32 },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("point is not on the surface")]
    OffSurface,
    #[error("surface is singular at {0}")]
    Singular(String),
    #[error("line is contained in the surface")]
    LineOnSurface,
    #[error(
        "splitting field exceeds search bound: found {found} of {expected} lines with q^k <= {cap}"
    )]
    SplittingOutOfRange {
        found: usize,
        expected: usize,
        cap: u64,
    },
    #[error("broken line configuration: {0}")]
    Configuration(String),
    #[error("no admissible line through the chosen point")]
    NoAdmissibleLine,
    #[error("curve is reducible or has a triple point")]
    DegenerateCurve,
    #[error("malformed surface file: {0}")]
    Malformed(String),
}

impl Error {
    /// True for failures caused by the extension-degree search bound.
    pub fn is_out_of_range(&self) -> bool {
        matches!(
            self,
            Error::SplittingOutOfRange { .. } | Error::FieldCap { .. } | Error::EnumerationCap(_)
        )
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, Error::Singular(_))
    }
}
