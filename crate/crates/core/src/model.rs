//! Domain types, quantum-number algebra and the Rosen-Morse potential.
//!
//! Units are whatever the caller picks: energies, lengths and `hbarc` only
//! need to be mutually consistent. Nothing here assumes MeV/fm or atomic
//! units.

use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Error, Result};

/// Rosen-Morse well: `V(r) = -v1 sech^2(alpha r) + v2 tanh(alpha r)`.
///
/// `r_e` is the reference radius around which the centrifugal term is
/// expanded. It is a free input; it is not tied to the potential minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub v1: f64,
    pub v2: f64,
    pub alpha: f64,
    pub r_e: f64,
}

impl PotentialParams {
    pub fn new(v1: f64, v2: f64, alpha: f64, r_e: f64) -> Result<Self> {
        Ok(Self {
            v1: require_finite("v1", v1)?,
            v2: require_finite("v2", v2)?,
            alpha: require_positive("alpha", alpha)?,
            r_e: require_positive("r_e", r_e)?,
        })
    }

    /// Both depths negated. This is the Eckart-type map and also the
    /// potential half of the spin/pseudospin parameter map.
    pub fn negated(&self) -> Self {
        Self {
            v1: -self.v1,
            v2: -self.v2,
            ..*self
        }
    }

    /// `alpha * r_e`, the only combination the centrifugal coefficients see.
    pub fn alpha_re(&self) -> f64 {
        self.alpha * self.r_e
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// `V - S = C_s` constant; the upper component obeys the second-order equation.
    Spin,
    /// `V + S = C_ps` constant; the lower component obeys the second-order equation.
    Pseudospin,
}

impl Symmetry {
    pub fn flipped(self) -> Self {
        match self {
            Symmetry::Spin => Symmetry::Pseudospin,
            Symmetry::Pseudospin => Symmetry::Spin,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Symmetry::Spin => "spin",
            Symmetry::Pseudospin => "pseudospin",
        }
    }
}

impl std::str::FromStr for Symmetry {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spin" => Ok(Symmetry::Spin),
            "pseudospin" | "pseudo" => Ok(Symmetry::Pseudospin),
            other => Err(format!("unknown branch `{other}` (expected spin|pseudospin)")),
        }
    }
}

/// Rest energy, `hbar c`, and which symmetry limit applies together with its
/// constant (`C_s` for spin, `C_ps` for pseudospin).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalContext {
    pub mc2: f64,
    pub hbarc: f64,
    pub symmetry: Symmetry,
    pub sym_const: f64,
}

impl PhysicalContext {
    pub fn new(mc2: f64, hbarc: f64, symmetry: Symmetry, sym_const: f64) -> Result<Self> {
        Ok(Self {
            mc2: require_positive("mc2", mc2)?,
            hbarc: require_positive("hbarc", hbarc)?,
            symmetry,
            sym_const: require_finite("sym_const", sym_const)?,
        })
    }

    pub fn spin(mc2: f64, hbarc: f64, c_s: f64) -> Result<Self> {
        Self::new(mc2, hbarc, Symmetry::Spin, c_s)
    }

    pub fn pseudospin(mc2: f64, hbarc: f64, c_ps: f64) -> Result<Self> {
        Self::new(mc2, hbarc, Symmetry::Pseudospin, c_ps)
    }

    pub fn hbarc2(&self) -> f64 {
        self.hbarc * self.hbarc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinOrbit {
    pub l: u32,
    pub omega: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PseudoOrbit {
    pub l_tilde: u32,
    pub omega_tilde: u64,
}

/// `omega = kappa(kappa+1)` and the non-negative root `l` of
/// `l(l+1) = kappa(kappa+1)`.
pub fn spin_orbit_numbers(kappa: i32) -> Result<SpinOrbit> {
    if kappa == 0 {
        return Err(Error::ZeroKappa);
    }
    let k = kappa as i64;
    let l = if kappa > 0 { k } else { -k - 1 };
    Ok(SpinOrbit {
        l: l as u32,
        omega: (k * (k + 1)) as u64,
    })
}

/// `omega~ = kappa(kappa-1)` and the non-negative root of
/// `l~(l~+1) = kappa(kappa-1)`.
pub fn pseudospin_numbers(kappa: i32) -> Result<PseudoOrbit> {
    if kappa == 0 {
        return Err(Error::ZeroKappa);
    }
    let k = kappa as i64;
    let lt = if kappa > 0 { k - 1 } else { -k };
    Ok(PseudoOrbit {
        l_tilde: lt as u32,
        omega_tilde: (k * (k - 1)) as u64,
    })
}

/// Radial quantum number `n` and spin-orbit number `kappa != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawQuantumNumbers")]
pub struct QuantumNumbers {
    n: u32,
    kappa: i32,
}

#[derive(Deserialize)]
struct RawQuantumNumbers {
    n: u32,
    kappa: i32,
}

impl TryFrom<RawQuantumNumbers> for QuantumNumbers {
    type Error = Error;

    fn try_from(raw: RawQuantumNumbers) -> Result<Self> {
        QuantumNumbers::new(raw.n, raw.kappa)
    }
}

impl QuantumNumbers {
    pub fn new(n: u32, kappa: i32) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::ZeroKappa);
        }
        Ok(Self { n, kappa })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn kappa(&self) -> i32 {
        self.kappa
    }

    pub fn l(&self) -> u32 {
        spin_orbit_numbers(self.kappa).map(|s| s.l).unwrap_or(0)
    }

    pub fn l_tilde(&self) -> u32 {
        pseudospin_numbers(self.kappa).map(|p| p.l_tilde).unwrap_or(0)
    }

    pub fn omega(&self) -> f64 {
        let k = self.kappa as f64;
        k * (k + 1.0)
    }

    pub fn omega_tilde(&self) -> f64 {
        let k = self.kappa as f64;
        k * (k - 1.0)
    }

    /// Centrifugal strength of the branch's second-order equation.
    pub fn centrifugal_strength(&self, symmetry: Symmetry) -> f64 {
        match symmetry {
            Symmetry::Spin => self.omega(),
            Symmetry::Pseudospin => self.omega_tilde(),
        }
    }

    /// Total angular momentum `j = |kappa| - 1/2`.
    pub fn j(&self) -> f64 {
        self.kappa.unsigned_abs() as f64 - 0.5
    }

    /// Same `n`, `kappa -> -kappa`. Maps `omega` onto `omega~` and back.
    pub fn mirrored(&self) -> Self {
        Self {
            n: self.n,
            kappa: -self.kappa,
        }
    }
}

/// `-v1 sech^2(alpha r) + v2 tanh(alpha r)`.
pub fn rosen_morse(r: f64, p: &PotentialParams) -> f64 {
    let ar = p.alpha * r;
    let sech = 1.0 / ar.cosh();
    -p.v1 * sech * sech + p.v2 * ar.tanh()
}

/// The same potential written with `x = exp(-2 alpha r)`:
/// `-4 v1 x/(1+x)^2 + v2 (1-x)/(1+x)`.
pub fn rosen_morse_exp(r: f64, p: &PotentialParams) -> f64 {
    let x = (-2.0 * p.alpha * r).exp();
    let d = 1.0 + x;
    -4.0 * p.v1 * x / (d * d) + p.v2 * (1.0 - x) / d
}

/// A quantized analytic solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub energy: f64,
    /// `epsilon` (spin) or `epsilon~` (pseudospin).
    pub epsilon: f64,
    /// `delta` (spin) or `delta_1` (pseudospin).
    pub delta: f64,
    pub qn: QuantumNumbers,
    pub branch: Symmetry,
    /// Normalization of the hypergeometric form of the large component.
    pub norm: f64,
}
