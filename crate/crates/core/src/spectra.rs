//! Energy equations, bound-state windows and the root search.
//!
//! Every residual is written out in its own printed shape (general spin,
//! exact spin, pseudospin, s-wave, Eckart). Classification of roots goes
//! through [`SpinFrame`], onto which every branch maps.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundState, PhysicalContext, PotentialParams, QuantumNumbers, Symmetry};
use crate::nu::{self, SpinFrame};
use crate::pekeris::PekerisCoeffs;
use crate::wavefun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualBranch {
    SpinGeneral,
    SpinExact,
    Pseudospin,
    SWaveSpin,
    SWavePseudo,
    EckartSpin,
    EckartPseudo,
}

impl ResidualBranch {
    pub fn name(self) -> &'static str {
        match self {
            Self::SpinGeneral => "spin_general",
            Self::SpinExact => "spin_exact",
            Self::Pseudospin => "pseudospin",
            Self::SWaveSpin => "s_wave_spin",
            Self::SWavePseudo => "s_wave_pseudo",
            Self::EckartSpin => "eckart_spin",
            Self::EckartPseudo => "eckart_pseudo",
        }
    }

    pub fn symmetry(self) -> Symmetry {
        match self {
            Self::SpinGeneral | Self::SpinExact | Self::SWaveSpin | Self::EckartSpin => {
                Symmetry::Spin
            }
            Self::Pseudospin | Self::SWavePseudo | Self::EckartPseudo => Symmetry::Pseudospin,
        }
    }

    fn mirrored(self) -> Self {
        match self {
            Self::SpinGeneral | Self::SpinExact => Self::Pseudospin,
            Self::Pseudospin => Self::SpinGeneral,
            Self::SWaveSpin => Self::SWavePseudo,
            Self::SWavePseudo => Self::SWaveSpin,
            Self::EckartSpin => Self::EckartPseudo,
            Self::EckartPseudo => Self::EckartSpin,
        }
    }

    fn is_eckart(self) -> bool {
        matches!(self, Self::EckartSpin | Self::EckartPseudo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyResidualSpec {
    pub branch: ResidualBranch,
    pub params: PotentialParams,
    pub context: PhysicalContext,
    pub qn: QuantumNumbers,
    pub coeffs: PekerisCoeffs,
    /// Set when the spec came from a spin/pseudospin map; the roles of the
    /// upper and lower components are exchanged.
    pub spinors_swapped: bool,
    /// `V2 -> i V2`. Real residuals refuse such specs.
    pub pt: bool,
}

impl EnergyResidualSpec {
    pub fn new(
        branch: ResidualBranch,
        params: PotentialParams,
        context: PhysicalContext,
        qn: QuantumNumbers,
        coeffs: PekerisCoeffs,
    ) -> Result<Self> {
        let spec = Self {
            branch,
            params,
            context,
            qn,
            coeffs,
            spinors_swapped: false,
            pt: false,
        };
        spec.check()?;
        Ok(spec)
    }

    /// General spin or pseudospin spec, following the context's symmetry.
    pub fn general(
        params: PotentialParams,
        context: PhysicalContext,
        qn: QuantumNumbers,
        coeffs: PekerisCoeffs,
    ) -> Self {
        let branch = match context.symmetry {
            Symmetry::Spin => ResidualBranch::SpinGeneral,
            Symmetry::Pseudospin => ResidualBranch::Pseudospin,
        };
        Self {
            branch,
            params,
            context,
            qn,
            coeffs,
            spinors_swapped: false,
            pt: false,
        }
    }

    fn check(&self) -> Result<()> {
        let b = self.branch;
        if self.context.symmetry != b.symmetry() {
            return Err(Error::BranchRequirement {
                branch: b.name(),
                requirement: "a context of the matching symmetry",
            });
        }
        let k = self.qn.kappa();
        match b {
            ResidualBranch::SWaveSpin | ResidualBranch::EckartSpin if k != -1 => {
                return Err(Error::BranchRequirement {
                    branch: b.name(),
                    requirement: "kappa = -1",
                })
            }
            ResidualBranch::SWavePseudo | ResidualBranch::EckartPseudo if k != 1 => {
                return Err(Error::BranchRequirement {
                    branch: b.name(),
                    requirement: "kappa = 1",
                })
            }
            _ => {}
        }
        if matches!(b, ResidualBranch::SpinExact) || b.is_eckart() {
            if self.context.sym_const != 0.0 {
                return Err(Error::BranchRequirement {
                    branch: b.name(),
                    requirement: "a vanishing symmetry constant",
                });
            }
        }
        Ok(())
    }

    /// Potential parameters of the underlying Rosen-Morse problem.
    fn effective_params(&self) -> PotentialParams {
        if self.branch.is_eckart() {
            self.params.negated()
        } else {
            self.params
        }
    }

    /// Spin-branch problem equivalent to this spec at energy `e`.
    pub fn frame(&self, e: f64) -> SpinFrame {
        SpinFrame::new(&self.effective_params(), &self.context, &self.qn, e)
    }

    /// `+1` for spin-type branches, `-1` when energies are reflected.
    fn energy_sign(&self) -> f64 {
        match self.branch.symmetry() {
            Symmetry::Spin => 1.0,
            Symmetry::Pseudospin => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseMap {
    SpinToPseudospin,
    Eckart,
    PtSymmetric,
}

pub fn apply_case_map(spec: &EnergyResidualSpec, case: CaseMap) -> EnergyResidualSpec {
    let mut out = *spec;
    match case {
        CaseMap::SpinToPseudospin => {
            out.params = spec.params.negated();
            out.context = PhysicalContext {
                symmetry: spec.context.symmetry.flipped(),
                sym_const: -spec.context.sym_const,
                ..spec.context
            };
            out.qn = spec.qn.mirrored();
            out.branch = spec.branch.mirrored();
            out.spinors_swapped = !spec.spinors_swapped;
        }
        CaseMap::Eckart => out.params = spec.params.negated(),
        CaseMap::PtSymmetric => out.pt = true,
    }
    out
}

fn half_delta(radicand: f64, energy: f64) -> Result<f64> {
    if radicand < 0.0 {
        Err(Error::OutsideDomain { energy, radicand })
    } else {
        Ok(0.5 * (radicand.sqrt() - 1.0))
    }
}

fn require_symmetry(spec: &EnergyResidualSpec, sym: Symmetry, who: &'static str) -> Result<()> {
    if spec.pt {
        return Err(Error::ComplexSpec);
    }
    if spec.context.symmetry != sym {
        return Err(Error::BranchRequirement {
            branch: who,
            requirement: "a context of the matching symmetry",
        });
    }
    Ok(())
}

struct Consts {
    mc2: f64,
    h2: f64,
    a2: f64,
    re2: f64,
    n: f64,
}

impl Consts {
    fn of(spec: &EnergyResidualSpec) -> Self {
        Self {
            mc2: spec.context.mc2,
            h2: spec.context.hbarc * spec.context.hbarc,
            a2: spec.params.alpha * spec.params.alpha,
            re2: spec.params.r_e * spec.params.r_e,
            n: spec.qn.n() as f64,
        }
    }
}

/// General spin-symmetry energy equation, left side minus right side.
pub fn spin_residual(e: f64, spec: &EnergyResidualSpec) -> Result<f64> {
    require_symmetry(spec, Symmetry::Spin, "spin_general")?;
    spin_general(e, spec, spec.context.sym_const)
}

fn spin_general(e: f64, spec: &EnergyResidualSpec, c_s: f64) -> Result<f64> {
    let k = Consts::of(spec);
    let (p, d) = (&spec.params, &spec.coeffs);
    let w = spec.qn.omega();
    let a = (k.mc2 + e - c_s) / k.h2;
    let delta = half_delta(1.0 + w * d.d2 / (k.a2 * k.re2) + 4.0 * p.v1 * a / k.a2, e)?;
    let nn = k.n + delta + 1.0;
    let q = -p.v2 * a / (2.0 * k.a2) + w * (d.d2 - d.d1) / (4.0 * k.a2 * k.re2);
    let br = q / nn - nn;
    Ok((k.mc2 + e - c_s) * (k.mc2 - e + p.v2) + w * d.d0 * k.h2 / k.re2 - k.a2 * k.h2 * br * br)
}

/// Exact spin symmetry: the general equation with `C_s = 0` throughout.
pub fn spin_exact_residual(e: f64, spec: &EnergyResidualSpec) -> Result<f64> {
    require_symmetry(spec, Symmetry::Spin, "spin_exact")?;
    spin_general(e, spec, 0.0)
}

/// General pseudospin-symmetry energy equation.
pub fn pseudospin_residual(e: f64, spec: &EnergyResidualSpec) -> Result<f64> {
    require_symmetry(spec, Symmetry::Pseudospin, "pseudospin")?;
    let k = Consts::of(spec);
    let (p, d) = (&spec.params, &spec.coeffs);
    let c_ps = spec.context.sym_const;
    let w = spec.qn.omega_tilde();
    let b = (k.mc2 - e + c_ps) / k.h2;
    let delta = half_delta(1.0 + w * d.d2 / (k.a2 * k.re2) - 4.0 * p.v1 * b / k.a2, e)?;
    let nn = k.n + delta + 1.0;
    let q = p.v2 * b / (2.0 * k.a2) + w * (d.d2 - d.d1) / (4.0 * k.a2 * k.re2);
    let br = q / nn - nn;
    Ok((k.mc2 - e + c_ps) * (k.mc2 + e - p.v2) + w * d.d0 * k.h2 / k.re2 - k.a2 * k.h2 * br * br)
}

fn s_wave_spin(e: f64, spec: &EnergyResidualSpec) -> Result<f64> {
    let k = Consts::of(spec);
    let p = &spec.params;
    let a = (k.mc2 + e - spec.context.sym_const) / k.h2;
    let delta = half_delta(1.0 + 4.0 * p.v1 * a / k.a2, e)?;
    let nn = k.n + delta + 1.0;
    let br = p.v2 * a / (2.0 * k.a2 * nn) + nn;
    Ok(a * k.h2 * (k.mc2 - e + p.v2) - k.a2 * k.h2 * br * br)
}

fn s_wave_pseudo(e: f64, spec: &EnergyResidualSpec) -> Result<f64> {
    let k = Consts::of(spec);
    let p = &spec.params;
    let b = (k.mc2 - e + spec.context.sym_const) / k.h2;
    let delta = half_delta(1.0 - 4.0 * p.v1 * b / k.a2, e)?;
    let nn = k.n + delta + 1.0;
    let br = -p.v2 * b / (2.0 * k.a2 * nn) + nn;
    Ok(b * k.h2 * (k.mc2 + e - p.v2) - k.a2 * k.h2 * br * br)
}

fn eckart_spin(e: f64, spec: &EnergyResidualSpec) -> Result<f64> {
    let k = Consts::of(spec);
    let p = &spec.params;
    let a = (k.mc2 + e) / k.h2;
    let delta = half_delta(1.0 - 4.0 * p.v1 * a / k.a2, e)?;
    let nn = k.n + delta + 1.0;
    let br = -p.v2 * a / (2.0 * k.a2 * nn) + nn;
    Ok((k.mc2 + e) * (k.mc2 - e - p.v2) - k.a2 * k.h2 * br * br)
}

fn eckart_pseudo(e: f64, spec: &EnergyResidualSpec) -> Result<f64> {
    let k = Consts::of(spec);
    let p = &spec.params;
    let b = (k.mc2 - e) / k.h2;
    let delta = half_delta(1.0 + 4.0 * p.v1 * b / k.a2, e)?;
    let nn = k.n + delta + 1.0;
    let br = p.v2 * b / (2.0 * k.a2 * nn) + nn;
    Ok((k.mc2 - e) * (k.mc2 + e + p.v2) - k.a2 * k.h2 * br * br)
}

/// Residual of the spec's own branch.
pub fn residual(e: f64, spec: &EnergyResidualSpec) -> Result<f64> {
    if spec.pt {
        return Err(Error::ComplexSpec);
    }
    spec.check()?;
    match spec.branch {
        ResidualBranch::SpinGeneral => spin_residual(e, spec),
        ResidualBranch::SpinExact => spin_exact_residual(e, spec),
        ResidualBranch::Pseudospin => pseudospin_residual(e, spec),
        ResidualBranch::SWaveSpin => s_wave_spin(e, spec),
        ResidualBranch::SWavePseudo => s_wave_pseudo(e, spec),
        ResidualBranch::EckartSpin => eckart_spin(e, spec),
        ResidualBranch::EckartPseudo => eckart_pseudo(e, spec),
    }
}

/// Exact-symmetry spin equation with `V2 -> i V2` at complex energy.
/// Square roots take the principal branch.
pub fn pt_spin_residual(e: Complex64, spec: &EnergyResidualSpec) -> Complex64 {
    let k = Consts::of(spec);
    let (p, d) = (&spec.params, &spec.coeffs);
    let w = spec.qn.omega();
    let iv2 = Complex64::new(0.0, p.v2);
    let a = (k.mc2 + e) / k.h2;
    let rad = 1.0 + w * d.d2 / (k.a2 * k.re2) + 4.0 * p.v1 * a / k.a2;
    let delta = 0.5 * (rad.sqrt() - 1.0);
    let nn = k.n + delta + 1.0;
    let q = -iv2 * a / (2.0 * k.a2) + w * (d.d2 - d.d1) / (4.0 * k.a2 * k.re2);
    let br = q / nn - nn;
    (k.mc2 + e) * (k.mc2 - e + iv2) + w * d.d0 * k.h2 / k.re2 - k.a2 * k.h2 * br * br
}

/// `mu_h = mu / hbar^2`, so that `2 mu_h (V - E)` is an inverse length squared.
fn nonrel_core<T>(n: u32, omega: f64, v1: f64, v2: T, alpha: f64, r_e: f64, mu_h: f64, d: &PekerisCoeffs) -> Result<T>
where
    T: Copy
        + std::ops::Add<f64, Output = T>
        + std::ops::Mul<f64, Output = T>
        + std::ops::Add<T, Output = T>
        + std::ops::Mul<T, Output = T>,
{
    let a2 = alpha * alpha;
    let re2 = r_e * r_e;
    let rad = 1.0 + 8.0 * mu_h * v1 / a2 + omega * d.d2 / (a2 * re2);
    if rad < 0.0 {
        return Err(Error::OutsideDomain {
            energy: f64::NAN,
            radicand: rad,
        });
    }
    let delta = 0.5 * (rad.sqrt() - 1.0);
    let nf = n as f64;
    let nn = nf + delta + 1.0;
    let num = (v2 + 2.0 * v1) * (mu_h / a2)
        + (omega * d.d1 / (4.0 * a2 * re2) + (nf + 1.0).powi(2) + (2.0 * nf + 1.0) * delta);
    let ratio = num * (1.0 / nn);
    Ok(v2 + omega * d.d0 / (2.0 * mu_h * re2) + ratio * ratio * (-a2 / (2.0 * mu_h)))
}

/// Nonrelativistic Rosen-Morse energy for `(n, l)`.
pub fn nonrelativistic_energy(
    n: u32,
    l: u32,
    params: &PotentialParams,
    mu_h: f64,
    coeffs: &PekerisCoeffs,
) -> Result<f64> {
    crate::error::require_positive("mu_h", mu_h)?;
    let omega = (l as f64) * (l as f64 + 1.0);
    nonrel_core(n, omega, params.v1, params.v2, params.alpha, params.r_e, mu_h, coeffs)
}

/// Same formula in complex arithmetic; a PT-marked spec enters with `i V2`.
pub fn nonrelativistic_energy_spec(spec: &EnergyResidualSpec, mu_h: f64) -> Result<Complex64> {
    crate::error::require_positive("mu_h", mu_h)?;
    let p = &spec.params;
    let v2 = if spec.pt {
        Complex64::new(0.0, p.v2)
    } else {
        Complex64::new(p.v2, 0.0)
    };
    let l = spec.qn.l();
    let omega = (l as f64) * (l as f64 + 1.0);
    nonrel_core(spec.qn.n(), omega, p.v1, v2, p.alpha, p.r_e, mu_h, &spec.coeffs)
}

/// PT-symmetric nonrelativistic energy, written out on its own.
pub fn pt_energy_nonrel(
    n: u32,
    l: u32,
    params: &PotentialParams,
    mu_h: f64,
    coeffs: &PekerisCoeffs,
) -> Result<Complex64> {
    crate::error::require_positive("mu_h", mu_h)?;
    if !(params.v1 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "v1",
            value: params.v1,
            reason: "must be > 0 for the PT-symmetric branch",
        });
    }
    let (a2, re2) = (params.alpha * params.alpha, params.r_e * params.r_e);
    let w = (l as f64) * (l as f64 + 1.0);
    let nf = n as f64;
    let delta0 = 0.5 * ((1.0 + 8.0 * mu_h * params.v1 / a2 + w * coeffs.d2 / (a2 * re2)).sqrt() - 1.0);
    let iv2 = Complex64::new(0.0, params.v2);
    let bracket = (mu_h / a2 * (2.0 * params.v1 + iv2)
        + w * coeffs.d1 / (4.0 * a2 * re2)
        + (nf + 1.0) * (nf + 1.0)
        + (2.0 * nf + 1.0) * delta0)
        / (nf + delta0 + 1.0);
    Ok(iv2 + w * coeffs.d0 / (2.0 * mu_h * re2) - a2 / (2.0 * mu_h) * bracket * bracket)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchWindow {
    pub e_min: f64,
    pub e_max: f64,
    pub grid_points: usize,
}

pub const DEFAULT_GRID_POINTS: usize = 2000;

impl SearchWindow {
    pub fn new(e_min: f64, e_max: f64, grid_points: usize) -> Result<Self> {
        if !(e_min < e_max) || !e_min.is_finite() || !e_max.is_finite() {
            return Err(Error::EmptyWindow { e_min, e_max });
        }
        if grid_points < 100 {
            return Err(Error::InvalidParameter {
                name: "grid_points",
                value: grid_points as f64,
                reason: "must be >= 100",
            });
        }
        Ok(Self {
            e_min,
            e_max,
            grid_points,
        })
    }

    /// Energies where `epsilon^2 > 0` can hold, shrunk by `1e-9 Mc^2` at both ends.
    pub fn default_for(spec: &EnergyResidualSpec) -> Result<Self> {
        let f = spec.frame(0.0);
        let tiny = 1e-9 * f.mc2;
        let lo = (-f.mc2).max(f.c - f.mc2) + tiny;
        let hi = f.mc2 + f.v2 - tiny;
        let (e_min, e_max) = match spec.branch.symmetry() {
            Symmetry::Spin => (lo, hi),
            Symmetry::Pseudospin => (-hi, -lo),
        };
        Self::new(e_min, e_max, DEFAULT_GRID_POINTS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootStatus {
    Accepted,
    /// The squared equation is satisfied but the quantization condition
    /// requires a negative `epsilon`.
    Spurious,
    NonPositiveDelta,
    OutsideWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootInfo {
    pub energy: f64,
    /// `sqrt(epsilon^2)` from the energy dependence of the equation.
    pub epsilon: f64,
    /// `epsilon` as fixed by the quantization condition, `(Q/N - N)/2`.
    pub epsilon_quantized: f64,
    pub delta: f64,
    /// NU energy relation at this root.
    pub nu_residual: f64,
    pub status: RootStatus,
}

/// `(epsilon^2, delta, (Q/N - N)/2)` of the equivalent spin problem.
pub fn frame_quantities(spec: &EnergyResidualSpec, e: f64) -> Result<(f64, f64, f64)> {
    let f = spec.frame(e);
    let d = &spec.coeffs;
    let eps_sq = f.eps_sq(d);
    let delta = half_delta(f.delta_radicand(d), e)?;
    let nn = spec.qn.n() as f64 + delta + 1.0;
    let q = f.beta1(d) - eps_sq;
    Ok((eps_sq, delta, 0.5 * (q / nn - nn)))
}

fn classify(spec: &EnergyResidualSpec, e: f64) -> Result<RootInfo> {
    let (eps_sq, delta, eps_q) = frame_quantities(spec, e)?;
    let eps = eps_sq.max(0.0).sqrt();
    let nu_residual = match nu::rosen_morse_instance(
        &spec.effective_params(),
        &spec.context,
        &spec.qn,
        e,
        &spec.coeffs,
    )
    .and_then(|p| nu::derive(&p).map(|d| nu::energy_relation(&p, &d, spec.qn.n())))
    {
        Ok(v) => v,
        Err(_) => f64::NAN,
    };
    let f = spec.frame(e);
    let sign_ok = match spec.branch.symmetry() {
        // spin with C_s = 0 keeps E > -Mc^2; pseudospin with C_ps = 0 keeps E != Mc^2
        Symmetry::Spin => spec.context.sym_const != 0.0 || e > -f.mc2,
        Symmetry::Pseudospin => spec.context.sym_const != 0.0 || e != f.mc2,
    };
    let status = if !(eps_sq > 0.0) || !sign_ok {
        RootStatus::OutsideWindow
    } else if !(delta > 0.0) {
        RootStatus::NonPositiveDelta
    } else if !(eps_q > 0.0) {
        RootStatus::Spurious
    } else {
        RootStatus::Accepted
    };
    Ok(RootInfo {
        energy: e,
        epsilon: eps,
        epsilon_quantized: eps_q,
        delta,
        nu_residual,
        status,
    })
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match f(mid) {
            Ok(fm) if fm == 0.0 => return mid,
            Ok(fm) if (fm < 0.0) == (flo < 0.0) => {
                lo = mid;
                flo = fm;
            }
            Ok(_) => hi = mid,
            Err(_) => break,
        }
    }
    if flo.abs() <= f(hi).map(f64::abs).unwrap_or(f64::INFINITY) {
        lo
    } else {
        hi
    }
}

/// Last point on the evaluable side of a domain boundary between `ok` and `bad`.
fn domain_edge<F: Fn(f64) -> Result<f64>>(f: &F, mut ok: f64, mut bad: f64) -> (f64, f64) {
    let mut fok = f(ok).unwrap_or(f64::NAN);
    for _ in 0..200 {
        let mid = 0.5 * (ok + bad);
        if mid == ok || mid == bad {
            break;
        }
        match f(mid) {
            Ok(v) => {
                ok = mid;
                fok = v;
            }
            Err(_) => bad = mid,
        }
    }
    (ok, fok)
}

/// Every sign change of the branch residual in the window, bisected to
/// full precision and classified.
pub fn find_roots(spec: &EnergyResidualSpec, window: &SearchWindow) -> Result<Vec<RootInfo>> {
    if spec.pt {
        return Err(Error::ComplexSpec);
    }
    spec.check()?;
    let f = |e: f64| residual(e, spec);
    let m = window.grid_points;
    let grid: Vec<f64> = (0..m)
        .map(|i| window.e_min + (window.e_max - window.e_min) * i as f64 / (m - 1) as f64)
        .collect();
    let vals: Vec<Result<f64>> = grid.iter().map(|&e| f(e)).collect();
    let mut roots = Vec::new();
    let push = |e: f64, roots: &mut Vec<f64>| {
        if roots.last() != Some(&e) {
            roots.push(e);
        }
    };
    for i in 0..m - 1 {
        let (a, b) = (grid[i], grid[i + 1]);
        match (&vals[i], &vals[i + 1]) {
            (Ok(fa), _) if *fa == 0.0 => push(a, &mut roots),
            (Ok(fa), Ok(fb)) => {
                if (*fa < 0.0) != (*fb < 0.0) && *fb != 0.0 {
                    push(bisect(&f, a, b, *fa), &mut roots);
                }
            }
            (Ok(fa), Err(_)) => {
                let (edge, fe) = domain_edge(&f, a, b);
                if fe.is_finite() && (fe < 0.0) != (*fa < 0.0) {
                    push(bisect(&f, a, edge, *fa), &mut roots);
                }
            }
            (Err(_), Ok(fb)) => {
                let (edge, fe) = domain_edge(&f, b, a);
                if fe.is_finite() && (fe < 0.0) != (*fb < 0.0) {
                    push(bisect(&f, edge, b, fe), &mut roots);
                }
            }
            (Err(_), Err(_)) => {}
        }
    }
    if let Some(Ok(fl)) = vals.last() {
        if *fl == 0.0 {
            push(grid[m - 1], &mut roots);
        }
    }
    roots.into_iter().map(|e| classify(spec, e)).collect()
}

/// Accepted roots as bound states, sorted by energy.
pub fn solve_bound_states(spec: &EnergyResidualSpec, window: &SearchWindow) -> Result<Vec<BoundState>> {
    let mut out = Vec::new();
    for r in find_roots(spec, window)? {
        if r.status != RootStatus::Accepted {
            continue;
        }
        let norm = wavefun::normalization_quadrature_raw(spec.qn.n(), r.epsilon, r.delta, spec.params.alpha)?;
        out.push(BoundState {
            energy: r.energy,
            epsilon: r.epsilon,
            delta: r.delta,
            qn: spec.qn,
            branch: spec.context.symmetry,
            norm,
        });
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(out)
}

/// Energy in the spin frame that corresponds to `e` for this spec.
pub fn frame_energy(spec: &EnergyResidualSpec, e: f64) -> f64 {
    spec.energy_sign() * e
}
