use thiserror::Error;

/// Errors raised by the library. Every variant carries the offending value
/// so that callers can report it without re-deriving anything.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("kappa = 0 is not a valid spin-orbit quantum number")]
    ZeroKappa,

    #[error("no real NU branch: {which} = {value} is negative")]
    NoRealNuBranch { which: &'static str, value: f64 },

    #[error("NU negativity condition violated: tau' = {tau_prime} >= 0")]
    NuNegativity { tau_prime: f64 },

    #[error("NU wavefunction parameter out of range: {which} = {value}")]
    NuParameterRange { which: &'static str, value: f64 },

    #[error("outside bound-state window: epsilon^2 = {eps_sq} <= 0 at E = {energy}")]
    OutsideBoundWindow { energy: f64, eps_sq: f64 },

    #[error("outside residual domain at E = {energy}: radicand = {radicand}")]
    OutsideDomain { energy: f64, radicand: f64 },

    #[error("Pekeris coefficients overflow f64 at alpha*r_e = {alpha_re}")]
    PekerisOverflow { alpha_re: f64 },

    #[error("singular contact-condition system at alpha*r_e = {alpha_re}")]
    SingularSystem { alpha_re: f64 },

    #[error("hypergeometric series does not converge for these parameters: {0}")]
    NonConvergentSeries(&'static str),

    #[error("series hit the {cap}-term cap without converging")]
    SeriesCap { cap: usize },

    #[error("quadrature order {0} outside 2..=512")]
    QuadratureOrder(usize),

    #[error("adaptive quadrature failed to converge (estimate {estimate}, error {error})")]
    QuadratureNotConverged { estimate: f64, error: f64 },

    #[error("normalization bracket is non-positive ({value}); sum truncated after {terms} terms")]
    NonPositiveNormalization { value: f64, terms: usize },

    #[error("vanishing spinor coupling denominator ({what})")]
    VanishingDenominator { what: &'static str },

    #[error("requested {requested} eigenvalues but the grid only supports {capacity}")]
    GridCapacity { requested: usize, capacity: usize },

    #[error("residual branch {branch} requires {requirement}")]
    BranchRequirement {
        branch: &'static str,
        requirement: &'static str,
    },

    #[error("operation needs a real-valued spec, but this one is PT-complexified")]
    ComplexSpec,

    #[error("empty search window [{e_min}, {e_max}]")]
    EmptyWindow { e_min: f64, e_max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}
