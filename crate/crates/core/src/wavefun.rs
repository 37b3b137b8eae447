//! Spinor components, normalization and ODE checks.
//!
//! With `x = exp(-2 alpha r)` the canonical radial factor is
//!
//! ```text
//! x^eps (1+x)^(delta+1) 2F1(-n, n + 2(eps+delta+1); 2 eps + 1; -x)
//! ```
//!
//! which is the spin-branch upper component `F` and, with the pseudospin
//! `eps~` and `delta_1`, the pseudospin lower component `G`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{rosen_morse, BoundState, PhysicalContext, PotentialParams, Symmetry};
use crate::nu::SpinFrame;
use crate::pekeris::{centrifugal_approx, PekerisCoeffs};
use crate::specfun::{gauss_legendre, hyp2f1, hyp3f2_unit, jacobi_unchecked, ln_gamma, pochhammer, QuadratureRule};
use crate::spectra::nonrelativistic_energy;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Canonical {
    n: u32,
    eps: f64,
    delta: f64,
    alpha: f64,
}

impl Canonical {
    fn b(&self) -> f64 {
        self.n as f64 + 2.0 * self.eps + 2.0 * self.delta + 2.0
    }

    fn c(&self) -> f64 {
        2.0 * self.eps + 1.0
    }

    fn value(&self, r: f64) -> f64 {
        let x = (-2.0 * self.alpha * r).exp();
        let h = hyp2f1(-(self.n as f64), self.b(), self.c(), -x).unwrap_or(f64::NAN);
        (-2.0 * self.alpha * self.eps * r).exp() * (1.0 + x).powf(self.delta + 1.0) * h
    }

    fn jacobi_form(&self, r: f64) -> f64 {
        let x = (-2.0 * self.alpha * r).exp();
        let (a, b) = (2.0 * self.eps, 2.0 * self.delta + 1.0);
        let scale = (1..=self.n).map(|k| k as f64).product::<f64>() / pochhammer(a + 1.0, self.n);
        (-2.0 * self.alpha * self.eps * r).exp()
            * (1.0 + x).powf(self.delta + 1.0)
            * jacobi_unchecked(self.n, a, b, 1.0 + 2.0 * x)
            * scale
    }

    fn derivative(&self, r: f64) -> f64 {
        let x = (-2.0 * self.alpha * r).exp();
        let (nf, b, c) = (self.n as f64, self.b(), self.c());
        let front = (-2.0 * self.alpha * self.eps * r).exp() * (1.0 + x).powf(self.delta + 1.0);
        let h = hyp2f1(-nf, b, c, -x).unwrap_or(f64::NAN);
        let lead = -2.0 * self.alpha * (self.eps + (self.delta + 1.0) * x / (1.0 + x));
        let tail = if self.n == 0 {
            0.0
        } else {
            -2.0 * self.alpha * nf * b / c * x * hyp2f1(1.0 - nf, b + 1.0, c + 1.0, -x).unwrap_or(f64::NAN)
        };
        front * (lead * h + tail)
    }

    /// Cut-off beyond which `value^2 < 1e-16 value(0)^2`.
    fn r_cut(&self) -> f64 {
        (1e16f64).ln() / (4.0 * self.alpha * self.eps)
    }
}

/// A normalized analytic solution together with everything needed to evaluate it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinorSolution {
    pub state: BoundState,
    pub params: PotentialParams,
    pub context: PhysicalContext,
    pub coeffs: PekerisCoeffs,
}

impl SpinorSolution {
    pub fn new(
        state: BoundState,
        params: PotentialParams,
        context: PhysicalContext,
        coeffs: PekerisCoeffs,
    ) -> Result<Self> {
        if !(state.epsilon > 0.0) {
            return Err(Error::NuParameterRange {
                which: "epsilon",
                value: state.epsilon,
            });
        }
        if !(state.delta > 0.0) {
            return Err(Error::NuParameterRange {
                which: "delta",
                value: state.delta,
            });
        }
        if state.branch != context.symmetry {
            return Err(Error::BranchRequirement {
                branch: state.branch.as_str(),
                requirement: "a context of the same symmetry",
            });
        }
        Ok(Self {
            state,
            params,
            context,
            coeffs,
        })
    }

    /// Copy with `delta` scaled and the norm recomputed. Used to probe that
    /// the checks reject non-solutions.
    pub fn with_delta_scale(&self, scale: f64) -> Result<Self> {
        let mut state = self.state;
        state.delta *= scale;
        state.norm = normalization_quadrature_raw(state.qn.n(), state.epsilon, state.delta, self.params.alpha)?;
        Ok(Self { state, ..*self })
    }

    fn canonical(&self) -> Canonical {
        Canonical {
            n: self.state.qn.n(),
            eps: self.state.epsilon,
            delta: self.state.delta,
            alpha: self.params.alpha,
        }
    }

    /// The component solved in closed form: `F` (spin) or `G` (pseudospin).
    pub fn primary(&self, r: f64) -> f64 {
        self.state.norm * self.canonical().value(r)
    }

    pub fn primary_derivative(&self, r: f64) -> f64 {
        self.state.norm * self.canonical().derivative(r)
    }

    /// Primary component through the Jacobi polynomial instead of `2F1`.
    pub fn primary_jacobi_form(&self, r: f64) -> f64 {
        self.state.norm * self.canonical().jacobi_form(r)
    }

    /// `(F, G)` at `r`, with the partner from the first-order coupling.
    pub fn components(&self, r: f64) -> Result<(f64, f64)> {
        match self.state.branch {
            Symmetry::Spin => Ok((upper_spinor_f(r, self), lower_spinor_g_from_f(r, self)?)),
            Symmetry::Pseudospin => {
                let (g, f) = pseudospin_pair(r, self)?;
                Ok((f, g))
            }
        }
    }
}

/// Upper component of a spin-branch solution.
pub fn upper_spinor_f(r: f64, s: &SpinorSolution) -> f64 {
    s.primary(r)
}

/// `hbar c (F' + kappa F / r) / (Mc^2 + E - C_s)` with the closed-form `F'`.
pub fn lower_spinor_g_from_f(r: f64, s: &SpinorSolution) -> Result<f64> {
    let ctx = &s.context;
    let den = ctx.mc2 + s.state.energy - ctx.sym_const;
    if den.abs() <= 1e-14 * ctx.mc2 {
        return Err(Error::VanishingDenominator {
            what: "Mc^2 + E - C_s",
        });
    }
    let kappa = s.state.qn.kappa() as f64;
    Ok(ctx.hbarc * (s.primary_derivative(r) + kappa * s.primary(r) / r) / den)
}

/// `(G, F)` for a pseudospin solution; `F = hbar c (G' - kappa G / r) / (Mc^2 - E + C_ps)`.
pub fn pseudospin_pair(r: f64, s: &SpinorSolution) -> Result<(f64, f64)> {
    let ctx = &s.context;
    let den = ctx.mc2 - s.state.energy + ctx.sym_const;
    if den.abs() <= 1e-14 * ctx.mc2 {
        return Err(Error::VanishingDenominator {
            what: "Mc^2 - E + C_ps",
        });
    }
    let kappa = s.state.qn.kappa() as f64;
    let g = s.primary_jacobi_form(r);
    Ok((g, ctx.hbarc * (s.primary_derivative(r) - kappa * s.primary(r) / r) / den))
}

/// The closed-form normalization constant, term by term as printed, with
/// `Gamma(n+m)/Gamma(n)` read as the Pochhammer symbol `(n)_m`.
pub fn normalization_closed_form(s: &SpinorSolution) -> Result<f64> {
    closed_form_raw(s.state.qn.n(), s.state.epsilon, s.state.delta, s.params.alpha)
}

pub fn closed_form_raw(n: u32, eps: f64, delta: f64, alpha: f64) -> Result<f64> {
    let nf = n as f64;
    let b = nf + 2.0 * (1.0 + eps + delta);
    let lead = ln_gamma(2.0 * delta + 3.0)? + ln_gamma(2.0 * eps + 1.0)?;
    let mut sum = 0.0;
    let mut terms = 0;
    const CAP: usize = 100_000;
    for m in 0..CAP {
        let mf = m as f64;
        let pn = pochhammer(nf, m as u32);
        terms = m + 1;
        if pn == 0.0 {
            break;
        }
        let ln_pn = if m == 0 { 0.0 } else { ln_gamma(nf + mf)? - ln_gamma(nf)? };
        let ln_mag = ln_gamma(b + mf)? - ln_gamma(b)? + ln_pn
            - ln_gamma(mf + 1.0)?
            - ln_gamma(mf + 2.0 * eps + 1.0)?
            - ln_gamma(mf + 2.0 * eps + 2.0 * delta + 3.0)?;
        let f = hyp3f2_unit(2.0 * eps + mf, -nf, b, mf + 2.0 * eps + 2.0 * delta + 3.0, 1.0 + 2.0 * eps)?;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * (ln_mag + lead).exp() * f;
        sum += term;
        if m > 0 && term.abs() <= 1e-14 * sum.abs() && term.abs() > 0.0 {
            break;
        }
        if !sum.is_finite() {
            break;
        }
    }
    if terms == CAP {
        return Err(Error::SeriesCap { cap: CAP });
    }
    let bracket = sum / (2.0 * alpha);
    if !(bracket > 0.0) || !bracket.is_finite() {
        return Err(Error::NonPositiveNormalization { value: bracket, terms });
    }
    Ok(bracket.powf(-0.5))
}

/// Normalization from the exact expansion of `int_0^1 x^(2eps-1)(1+x)^(2delta+2) H(-x)^2 dx`.
pub fn normalization_series(s: &SpinorSolution) -> Result<f64> {
    series_raw(s.state.qn.n(), s.state.epsilon, s.state.delta, s.params.alpha)
}

pub fn series_raw(n: u32, eps: f64, delta: f64, alpha: f64) -> Result<f64> {
    let nf = n as f64;
    let b = nf + 2.0 * eps + 2.0 * delta + 2.0;
    let c = 2.0 * eps + 1.0;
    let p = 2.0 * delta + 2.0;
    // coefficients of H(-x) in powers of x, all non-negative
    let mut h = vec![1.0];
    for j in 0..n as usize {
        let jf = j as f64;
        let next = h[j] * (jf - nf) * (b + jf) / ((c + jf) * (jf + 1.0)) * -1.0;
        h.push(next);
    }
    let integral = |s_pow: f64| -> Result<f64> {
        Ok(2f64.powf(p) / s_pow * hyp2f1(-p, 1.0, s_pow + 1.0, 0.5)?)
    };
    let mut total = 0.0;
    for (j, hj) in h.iter().enumerate() {
        for (k, hk) in h.iter().enumerate() {
            total += hj * hk * integral(2.0 * eps + (j + k) as f64)?;
        }
    }
    let bracket = total / (2.0 * alpha);
    if !(bracket > 0.0) || !bracket.is_finite() {
        return Err(Error::NonPositiveNormalization {
            value: bracket,
            terms: h.len() * h.len(),
        });
    }
    Ok(bracket.powf(-0.5))
}

/// Panel-doubling Gauss-Legendre integration of `f` over `[a, b]`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let rule: QuadratureRule = gauss_legendre(32)?;
    let panel_sum = |panels: usize| -> f64 {
        let w = (b - a) / panels as f64;
        (0..panels)
            .map(|i| rule.integrate(&f, a + i as f64 * w, a + (i + 1) as f64 * w))
            .sum()
    };
    let mut panels = 4;
    let mut prev = panel_sum(panels);
    while panels < 1 << 14 {
        panels *= 2;
        let cur = panel_sum(panels);
        if (cur - prev).abs() <= rel_tol * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::QuadratureNotConverged {
        estimate: prev,
        error: f64::NAN,
    })
}

/// Normalization from `int_0^R_cut F^2 dr = 1`.
pub fn normalization_quadrature(s: &SpinorSolution) -> Result<f64> {
    normalization_quadrature_raw(s.state.qn.n(), s.state.epsilon, s.state.delta, s.params.alpha)
}

pub fn normalization_quadrature_raw(n: u32, eps: f64, delta: f64, alpha: f64) -> Result<f64> {
    normalization_with_cut(n, eps, delta, alpha, 1.0)
}

/// As [`normalization_quadrature_raw`] with the cut-off stretched by `stretch`.
pub fn normalization_with_cut(n: u32, eps: f64, delta: f64, alpha: f64, stretch: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::NuParameterRange {
            which: "epsilon",
            value: eps,
        });
    }
    let c = Canonical { n, eps, delta, alpha };
    let r_cut = c.r_cut() * stretch;
    let v = integrate_adaptive(|r| c.value(r).powi(2), 0.0, r_cut, 1e-14)?;
    if !(v > 0.0) {
        return Err(Error::NonPositiveNormalization { value: v, terms: 0 });
    }
    Ok(v.powf(-0.5))
}

/// Cut-off radius used by the quadrature normalization.
pub fn r_cut(s: &SpinorSolution) -> f64 {
    s.canonical().r_cut()
}

/// Scaled residual of the second-order equation for the primary component.
///
/// Spin: `-F'' + (omega C(r) + A Sigma(r)) F - calE F`; pseudospin the
/// analogue with `omega~`, `-B Delta(r)`. Divided by `max |F|` on the grid.
/// Second derivatives by fourth-order central differences with step `h`.
pub fn ode_residual(s: &SpinorSolution, r_grid: &[f64], h: f64) -> Vec<f64> {
    let f = |r: f64| s.primary(r);
    let ctx = &s.context;
    let h2 = ctx.hbarc * ctx.hbarc;
    let e = s.state.energy;
    let (omega, coupling, target) = match s.state.branch {
        Symmetry::Spin => (
            s.state.qn.omega(),
            (ctx.mc2 + e - ctx.sym_const) / h2,
            (e * e - ctx.mc2 * ctx.mc2 + ctx.sym_const * (ctx.mc2 - e)) / h2,
        ),
        Symmetry::Pseudospin => (
            s.state.qn.omega_tilde(),
            -(ctx.mc2 - e + ctx.sym_const) / h2,
            (e * e - ctx.mc2 * ctx.mc2 - ctx.sym_const * (ctx.mc2 + e)) / h2,
        ),
    };
    let vals: Vec<f64> = r_grid.iter().map(|&r| f(r)).collect();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return vec![0.0; r_grid.len()];
    }
    r_grid
        .iter()
        .zip(&vals)
        .map(|(&r, &fr)| {
            let d2 = (-f(r + 2.0 * h) + 16.0 * f(r + h) - 30.0 * fr + 16.0 * f(r - h) - f(r - 2.0 * h))
                / (12.0 * h * h);
            let u = omega * centrifugal_approx(r, s.params.alpha, s.params.r_e, &s.coeffs)
                + coupling * rosen_morse(r, &s.params);
            (-d2 + u * fr - target * fr) / scale
        })
        .collect()
}

/// Interior sign changes of `values`, ignoring entries below `1e-12 max|v|`.
pub fn count_nodes(values: &[f64]) -> usize {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut last = 0.0;
    let mut count = 0;
    for &v in values {
        if v.abs() <= 1e-12 * scale {
            continue;
        }
        if last != 0.0 && (v < 0.0) != (last < 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// Nonrelativistic `(n, l)` solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonrelState {
    pub n: u32,
    pub l: u32,
    pub energy: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub norm: f64,
}

impl NonrelState {
    pub fn new(n: u32, l: u32, params: &PotentialParams, mu_h: f64, coeffs: &PekerisCoeffs) -> Result<Self> {
        let energy = nonrelativistic_energy(n, l, params, mu_h, coeffs)?;
        let omega = (l as f64) * (l as f64 + 1.0);
        let (a2, re2) = (params.alpha * params.alpha, params.r_e * params.r_e);
        let eps_arg = omega * coeffs.d0 / re2 + 2.0 * mu_h * (params.v2 - energy);
        let epsilon = if eps_arg > 0.0 {
            eps_arg.sqrt() / (2.0 * params.alpha)
        } else {
            f64::NAN
        };
        if !(epsilon > 0.0) {
            return Err(Error::NuParameterRange {
                which: "epsilon",
                value: epsilon,
            });
        }
        let delta = 0.5 * ((1.0 + 8.0 * mu_h * params.v1 / a2 + omega * coeffs.d2 / (a2 * re2)).sqrt() - 1.0);
        let norm = normalization_quadrature_raw(n, epsilon, delta, params.alpha)?;
        Ok(Self {
            n,
            l,
            energy,
            epsilon,
            delta,
            alpha: params.alpha,
            norm,
        })
    }

    pub fn value(&self, r: f64) -> f64 {
        self.norm
            * Canonical {
                n: self.n,
                eps: self.epsilon,
                delta: self.delta,
                alpha: self.alpha,
            }
            .value(r)
    }
}

pub fn nonrel_wavefunction(
    r: f64,
    n: u32,
    l: u32,
    params: &PotentialParams,
    mu_h: f64,
    coeffs: &PekerisCoeffs,
) -> Result<f64> {
    Ok(NonrelState::new(n, l, params, mu_h, coeffs)?.value(r))
}

/// `(epsilon, delta)` of the canonical form at energy `e` without any
/// bound-state filtering.
pub fn frame_parameters(frame: &SpinFrame, coeffs: &PekerisCoeffs) -> (f64, f64) {
    let eps_sq = frame.eps_sq(coeffs);
    let rad = frame.delta_radicand(coeffs);
    (eps_sq.max(0.0).sqrt(), 0.5 * (rad.max(0.0).sqrt() - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::QuantumNumbers;
    use crate::pekeris::matched_coeffs;
    use crate::spectra::{solve_bound_states, EnergyResidualSpec, SearchWindow};

    fn solution(v1: f64, v2: f64, alpha: f64, n: u32, kappa: i32, sym: Symmetry) -> SpinorSolution {
        let p = PotentialParams::new(v1, v2, alpha, 1.0 / alpha).unwrap();
        let ctx = PhysicalContext::new(5.0, 1.0, sym, 0.0).unwrap();
        let c = matched_coeffs(p.alpha, p.r_e).unwrap();
        let spec = EnergyResidualSpec::general(p, ctx, QuantumNumbers::new(n, kappa).unwrap(), c);
        let w = SearchWindow::default_for(&spec).unwrap();
        let st = solve_bound_states(&spec, &w).unwrap();
        SpinorSolution::new(st[0], p, ctx, c).unwrap()
    }

    fn grid(alpha: f64, m: usize, r_max: f64) -> Vec<f64> {
        (1..=m).map(|i| r_max * i as f64 / m as f64).map(|r| r.max(1e-4 / alpha)).collect()
    }

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    #[test]
    fn ground_state_shape() {
        let s = solution(1.0, -4.0, 0.5, 0, -1, Symmetry::Spin);
        let (eps, delta, nrm) = (s.state.epsilon, s.state.delta, s.state.norm);
        for r in [0.1f64, 1.0, 4.0] {
            let x = (-r).exp();
            let want = nrm * x.powf(eps) * (1.0 + x).powf(delta + 1.0);
            assert!((upper_spinor_f(r, &s) - want).abs() < 1e-14 * want.abs());
        }
        let far = upper_spinor_f(60.0, &s) / upper_spinor_f(50.0, &s);
        assert!((far.ln() / 10.0 + 2.0 * 0.5 * eps).abs() < 1e-9);
    }

    #[test]
    fn jacobi_and_hypergeometric_forms_agree() {
        for n in 0..3 {
            let s = solution(1.0, -4.9, 0.25, n, -1, Symmetry::Spin);
            for r in [0.01, 0.5, 2.0, 7.0, 20.0] {
                let a = s.primary(r);
                let b = s.primary_jacobi_form(r);
                assert!((a - b).abs() < 1e-11 * a.abs().max(1e-300), "n={n} r={r}: {a} {b}");
            }
        }
    }

    fn fd4(f: impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
        (f(r - 2.0 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2.0 * h)) / (12.0 * h)
    }

    #[test]
    fn lower_component_matches_differentiated_upper() {
        for n in 0..3 {
            let s = solution(1.0, -4.9, 0.25, n, -1, Symmetry::Spin);
            let den = s.context.mc2 + s.state.energy - s.context.sym_const;
            let h = 1e-3 / s.params.alpha;
            for r in [0.3, 1.0, 3.0, 8.0] {
                let fd = fd4(|t| s.primary(t), r, h);
                assert!((s.primary_derivative(r) - fd).abs() < 1e-8 * fd.abs().max(1e-3));
                let g = lower_spinor_g_from_f(r, &s).unwrap();
                let want = (fd + s.state.qn.kappa() as f64 * s.primary(r) / r) / den;
                assert!((g - want).abs() < 1e-6 * want.abs(), "n={n} r={r}: {g} {want}");
            }
            // kappa F / r dominates close to the origin
            let r = 1e-7;
            let g = lower_spinor_g_from_f(r, &s).unwrap();
            let lead = s.state.qn.kappa() as f64 * s.primary(r) / r / den;
            assert!((g / lead - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn pseudospin_pair_is_mapped_spin_pair() {
        // pseudospin with (V1, V2) = (-1, 4), kappa = 1 maps onto the spin
        // problem (1, -4), kappa = -1 with E -> -E
        let spin = solution(1.0, -4.0, 0.5, 1, -1, Symmetry::Spin);
        let ps = solution(-1.0, 4.0, 0.5, 1, 1, Symmetry::Pseudospin);
        assert!((ps.state.energy + spin.state.energy).abs() < 1e-12);
        for r in [0.2, 1.0, 5.0] {
            let (g, f) = pseudospin_pair(r, &ps).unwrap();
            let fs = upper_spinor_f(r, &spin);
            let gs = lower_spinor_g_from_f(r, &spin).unwrap();
            assert!((g - fs).abs() < 1e-12 * fs.abs());
            assert!((f - gs).abs() < 1e-10 * gs.abs().max(1e-12));
            let den = ps.context.mc2 - ps.state.energy;
            let fd = (fd4(|t| ps.primary(t), r, 1e-3) - ps.state.qn.kappa() as f64 * g / r) / den;
            assert!((f - fd).abs() < 1e-6 * fd.abs());
        }
    }

    #[test]
    fn vanishing_denominators() {
        let mut s = solution(1.0, -4.0, 0.5, 0, -1, Symmetry::Spin);
        s.state.energy = -s.context.mc2;
        assert!(matches!(lower_spinor_g_from_f(1.0, &s), Err(Error::VanishingDenominator { .. })));
        let mut p = solution(-1.0, 4.0, 0.5, 0, 1, Symmetry::Pseudospin);
        p.state.energy = p.context.mc2;
        assert!(matches!(pseudospin_pair(1.0, &p), Err(Error::VanishingDenominator { .. })));
    }

    #[test]
    fn quadrature_normalization() {
        for n in 0..4 {
            let s = solution(1.0, -4.9, 0.25, n.min(2), -1, Symmetry::Spin);
            let rc = r_cut(&s);
            let total = integrate_adaptive(|r| s.primary(r).powi(2), 0.0, rc, 1e-14).unwrap();
            assert!((total - 1.0).abs() < 1e-10, "{total}");
            let st = s.state;
            let stretched = normalization_with_cut(st.qn.n(), st.epsilon, st.delta, s.params.alpha, 1.5).unwrap();
            assert!((stretched / st.norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rule_refinement_on_density() {
        let s = solution(1.0, -4.9, 0.25, 1, -1, Symmetry::Spin);
        let rc = r_cut(&s);
        let g64 = gauss_legendre(64).unwrap();
        let g128 = gauss_legendre(128).unwrap();
        let panels = 16;
        let w = rc / panels as f64;
        let sum = |rule: &QuadratureRule| -> f64 {
            (0..panels)
                .map(|i| rule.integrate(|r| s.primary(r).powi(2), i as f64 * w, (i + 1) as f64 * w))
                .sum()
        };
        assert!((sum(&g64) - sum(&g128)).abs() < 1e-10);
    }

    #[test]
    fn series_normalization_matches_quadrature() {
        for (v1, v2, alpha, kappa) in [(1.0, -4.9, 0.25, -1), (1.0, -4.0, 0.5, -1), (0.5, -3.0, 0.5, -1)] {
            for n in 0..3 {
                let p = PotentialParams::new(v1, v2, alpha, 1.0 / alpha).unwrap();
                let ctx = PhysicalContext::spin(5.0, 1.0, 0.0).unwrap();
                let c = matched_coeffs(p.alpha, p.r_e).unwrap();
                let spec = EnergyResidualSpec::general(p, ctx, QuantumNumbers::new(n, kappa).unwrap(), c);
                let st = solve_bound_states(&spec, &SearchWindow::default_for(&spec).unwrap()).unwrap();
                for state in st {
                    let s = SpinorSolution::new(state, p, ctx, c).unwrap();
                    let a = normalization_series(&s).unwrap();
                    assert!((a / s.state.norm - 1.0).abs() < 1e-10, "{a} {}", s.state.norm);
                }
            }
        }
    }

    #[test]
    fn closed_form_structure() {
        // n = 0: only m = 0 survives, leaving Gamma(2 delta + 3) / (2 alpha Gamma(2 eps + 2 delta + 3))
        let (eps, delta, alpha) = (1.3, 0.7, 0.4);
        let got = closed_form_raw(0, eps, delta, alpha).unwrap();
        let lg = |x: f64| ln_gamma(x).unwrap();
        let want = ((lg(2.0 * delta + 3.0) - lg(2.0 * eps + 2.0 * delta + 3.0)).exp() / (2.0 * alpha)).powf(-0.5);
        assert!((got / want - 1.0).abs() < 1e-12);
        // 1/(2 alpha) prefactor: doubling alpha scales N by sqrt(2)
        for n in 0..4 {
            let a = closed_form_raw(n, eps, delta, alpha);
            let b = closed_form_raw(n, eps, delta, 2.0 * alpha);
            if let (Ok(a), Ok(b)) = (a, b) {
                assert!((b / a - 2f64.sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ode_residual_detects_non_solutions() {
        for n in 0..3 {
            let s = solution(1.0, -4.9, 0.25, n, -1, Symmetry::Spin);
            let g = grid(0.25, 400, r_cut(&s));
            let h = 1e-3 / 0.25;
            assert!(max_abs(&ode_residual(&s, &g, h)) < 1e-6);
            let bad = s.with_delta_scale(1.01).unwrap();
            assert!(max_abs(&ode_residual(&bad, &g, h)) > 1e-3);
        }
        let mut z = solution(1.0, -4.9, 0.25, 0, -1, Symmetry::Spin);
        z.state.norm = 0.0;
        assert!(ode_residual(&z, &[0.5, 1.0], 1e-3).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn pseudospin_ode_residual() {
        let s = solution(-1.0, 4.0, 0.5, 1, 1, Symmetry::Pseudospin);
        let g = grid(0.5, 300, r_cut(&s));
        assert!(max_abs(&ode_residual(&s, &g, 2e-3)) < 1e-6);
    }

    #[test]
    fn node_counting() {
        assert_eq!(count_nodes(&[1.0, 0.5, -0.2, -1.0, 0.3]), 2);
        assert_eq!(count_nodes(&[1.0, 1e-20, -1e-20, 2.0]), 0);
        assert_eq!(count_nodes(&[]), 0);
    }

    #[test]
    fn nonrel_state() {
        let p = PotentialParams::new(2.0, -1.0, 0.5, 2.0).unwrap();
        let c = matched_coeffs(p.alpha, p.r_e).unwrap();
        let st = NonrelState::new(0, 1, &p, 5.0, &c).unwrap();
        let total = integrate_adaptive(|r| st.value(r).powi(2), 0.0, (1e16f64).ln() / (2.0 * st.epsilon), 1e-14).unwrap();
        assert!((total - 1.0).abs() < 1e-10);
        let v = nonrel_wavefunction(1.5, 0, 1, &p, 5.0, &c).unwrap();
        assert_eq!(v, st.value(1.5));
        let ratio = st.value(80.0) / st.value(70.0);
        assert!((ratio.ln() / 10.0 + 2.0 * 0.5 * st.epsilon).abs() < 1e-9);
    }
}
