//! Parametric Nikiforov-Uvarov solver for
//!
//! ```text
//! [s(c3 - c4 s)]^2 psi'' + s(c3 - c4 s)(c1 - c2 s) psi' + (-xi1 s^2 + xi2 s - xi3) psi = 0
//! ```
//!
//! together with the Rosen-Morse adapter. The engine knows nothing about
//! the potential; [`rosen_morse_instance`] is the only place where Dirac
//! quantities enter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{PhysicalContext, PotentialParams, QuantumNumbers, Symmetry};
use crate::pekeris::PekerisCoeffs;
use crate::specfun::{jacobi_unchecked, laguerre_l};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuProblem {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

impl NuProblem {
    /// Hypergeometric-type instance with `c1..c4 = 1`.
    pub fn unit(xi1: f64, xi2: f64, xi3: f64) -> Self {
        Self {
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            c4: 1.0,
            xi1,
            xi2,
            xi3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuDerived {
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub c11: f64,
    pub c12: f64,
    pub c13: f64,
    pub c14: f64,
    pub c15: f64,
    pub c16: f64,
}

/// All derived constants. With `c4 = 0` the constants `c12` and `c14` are
/// infinite; `c15` and `c16` stay finite and feed [`laguerre_limit`].
pub fn derive(p: &NuProblem) -> Result<NuDerived> {
    if !(p.c3.is_finite() && p.c3 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "c3",
            value: p.c3,
            reason: "must be finite and > 0",
        });
    }
    let c5 = 0.5 * (p.c3 - p.c1);
    let c6 = 0.5 * (p.c2 - 2.0 * p.c4);
    let c7 = c6 * c6 + p.xi1;
    let c8 = 2.0 * c5 * c6 - p.xi2;
    let c9 = c5 * c5 + p.xi3;
    let c10 = p.c4 * (p.c3 * c8 + p.c4 * c9) + p.c3 * p.c3 * c7;
    if c9 < 0.0 {
        return Err(Error::NoRealNuBranch {
            which: "c9",
            value: c9,
        });
    }
    if c10 < 0.0 {
        return Err(Error::NoRealNuBranch {
            which: "c10",
            value: c10,
        });
    }
    let (s9, s10) = (c9.sqrt(), c10.sqrt());
    let c11 = 2.0 / p.c3 * s9;
    let c12 = 2.0 / (p.c3 * p.c4) * s10;
    let c13 = (c5 + s9) / p.c3;
    let c14 = (s10 - p.c4 * c5 - p.c3 * c6) / (p.c3 * p.c4);
    let c15 = 2.0 / p.c3 * s10;
    let c16 = (s10 - p.c4 * c5 - p.c3 * c6) / p.c3;
    Ok(NuDerived {
        c5,
        c6,
        c7,
        c8,
        c9,
        c10,
        c11,
        c12,
        c13,
        c14,
        c15,
        c16,
    })
}

/// `a + b s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Linear {
    pub a: f64,
    pub b: f64,
}

impl Linear {
    pub fn eval(&self, s: f64) -> f64 {
        self.a + self.b * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KeyPolynomials {
    pub pi: Linear,
    pub k: f64,
    pub tau: Linear,
}

pub fn key_polynomials(p: &NuProblem, d: &NuDerived) -> Result<KeyPolynomials> {
    let (s9, s10) = (d.c9.sqrt(), d.c10.sqrt());
    let pi = Linear {
        a: d.c5 + s9,
        b: -(p.c4 * s9 + s10 - p.c3 * d.c6) / p.c3,
    };
    let k = -(p.c3 * d.c8 + 2.0 * p.c4 * d.c9 + 2.0 * (d.c9 * d.c10).sqrt()) / (p.c3 * p.c3);
    let tau = Linear {
        a: p.c3 + 2.0 * s9,
        b: -2.0 / p.c3 * (p.c3 * p.c4 + p.c4 * s9 + s10),
    };
    if tau.b >= 0.0 {
        return Err(Error::NuNegativity { tau_prime: tau.b });
    }
    Ok(KeyPolynomials { pi, k, tau })
}

/// Left side of the NU quantization condition; zero at an eigenvalue.
pub fn energy_relation(p: &NuProblem, d: &NuDerived, n: u32) -> f64 {
    let n = n as f64;
    let (s9, s10) = (d.c9.sqrt(), d.c10.sqrt());
    p.c2 * n - (2.0 * n + 1.0) * d.c6
        + (2.0 * n + 1.0) * (s10 + p.c4 * s9) / p.c3
        + n * (n - 1.0) * p.c4
        + (p.c3 * d.c8 + 2.0 * p.c4 * d.c9 + 2.0 * (d.c9 * d.c10).sqrt()) / (p.c3 * p.c3)
}

/// Unnormalized `s^c13 (c3 - c4 s)^c14 P_n^(c11, c12)(c3 - 2 c4 s)`.
pub fn wavefunction_factory(
    p: &NuProblem,
    d: &NuDerived,
    n: u32,
) -> Result<impl Fn(f64) -> f64 + Send + Sync> {
    for (which, value, bound) in [
        ("c11", d.c11, -1.0),
        ("c12", d.c12, -1.0),
        ("c13", d.c13, 0.0),
        ("c14", d.c14, 0.0),
    ] {
        if !(value > bound) || !value.is_finite() {
            return Err(Error::NuParameterRange { which, value });
        }
    }
    let (c3, c4) = (p.c3, p.c4);
    let (a, b, e13, e14) = (d.c11, d.c12, d.c13, d.c14);
    Ok(move |s: f64| {
        s.powf(e13) * (c3 - c4 * s).powf(e14) * jacobi_unchecked(n, a, b, c3 - 2.0 * c4 * s)
    })
}

/// `exp(-c16 r) L_n^c11(c15 r)`, the `c4 -> 0` degeneration.
pub fn laguerre_limit(p: &NuProblem, d: &NuDerived, n: u32, r: f64) -> Result<f64> {
    if p.c4 != 0.0 {
        return Err(Error::InvalidParameter {
            name: "c4",
            value: p.c4,
            reason: "Laguerre limit needs c4 = 0",
        });
    }
    Ok((-d.c16 * r).exp() * laguerre_l(n, d.c11, d.c15 * r))
}

/// The spin-branch problem that a given spin or pseudospin setup maps onto.
///
/// Pseudospin quantities are carried over by `V -> -V`, `E -> -E`,
/// `C_ps -> -C_s` and `omega~ -> omega`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinFrame {
    pub v1: f64,
    pub v2: f64,
    pub alpha: f64,
    pub r_e: f64,
    pub mc2: f64,
    pub hbarc: f64,
    pub c: f64,
    pub omega: f64,
    pub energy: f64,
}

impl SpinFrame {
    pub fn new(
        params: &PotentialParams,
        ctx: &PhysicalContext,
        qn: &QuantumNumbers,
        energy: f64,
    ) -> Self {
        let base = Self {
            v1: params.v1,
            v2: params.v2,
            alpha: params.alpha,
            r_e: params.r_e,
            mc2: ctx.mc2,
            hbarc: ctx.hbarc,
            c: ctx.sym_const,
            omega: qn.centrifugal_strength(ctx.symmetry),
            energy,
        };
        match ctx.symmetry {
            Symmetry::Spin => base,
            Symmetry::Pseudospin => Self {
                v1: -base.v1,
                v2: -base.v2,
                c: -base.c,
                energy: -energy,
                ..base
            },
        }
    }

    /// `(Mc^2 + E - C) / (hbar c)^2`.
    pub fn a(&self) -> f64 {
        (self.mc2 + self.energy - self.c) / (self.hbarc * self.hbarc)
    }

    pub fn eps_sq(&self, d: &PekerisCoeffs) -> f64 {
        let a = self.a();
        (self.omega * d.d0 / (self.r_e * self.r_e) + a * (self.mc2 - self.energy + self.v2))
            / (4.0 * self.alpha * self.alpha)
    }

    pub fn beta1(&self, d: &PekerisCoeffs) -> f64 {
        let a = self.a();
        (self.omega * (d.d0 - d.d1 + d.d2) / (self.r_e * self.r_e)
            + a * (self.mc2 - self.energy - self.v2))
            / (4.0 * self.alpha * self.alpha)
    }

    pub fn beta2(&self, d: &PekerisCoeffs) -> f64 {
        let a = self.a();
        (self.omega * (2.0 * d.d0 - d.d1) / (self.r_e * self.r_e)
            + 2.0 * a * (self.mc2 - self.energy - 2.0 * self.v1))
            / (4.0 * self.alpha * self.alpha)
    }

    /// Radicand of `delta = (-1 + sqrt(radicand)) / 2`.
    pub fn delta_radicand(&self, d: &PekerisCoeffs) -> f64 {
        let a2 = self.alpha * self.alpha;
        1.0 + self.omega * d.d2 / (a2 * self.r_e * self.r_e) + 4.0 * self.v1 * self.a() / a2
    }
}

/// Table-1 instance for the Rosen-Morse problem at trial energy `energy`,
/// in the variable `z = -exp(-2 alpha r)`.
pub fn rosen_morse_instance(
    params: &PotentialParams,
    ctx: &PhysicalContext,
    qn: &QuantumNumbers,
    energy: f64,
    coeffs: &PekerisCoeffs,
) -> Result<NuProblem> {
    let f = SpinFrame::new(params, ctx, qn, energy);
    let eps_sq = f.eps_sq(coeffs);
    if !(eps_sq > 0.0) {
        return Err(Error::OutsideBoundWindow { energy, eps_sq });
    }
    Ok(NuProblem::unit(f.beta1(coeffs), f.beta2(coeffs), eps_sq))
}
