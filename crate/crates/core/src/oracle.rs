//! Finite-difference eigensolver for the radial second-order equations.
//!
//! `-u'' + u_eff(r) u = lambda u` with Dirichlet ends is discretized on a
//! uniform grid into a symmetric tridiagonal matrix whose eigenvalues are
//! isolated by Sturm-sequence bisection. Because `u_eff` depends on the
//! energy, the relativistic energies come from an outer bisection on
//! `lambda_n(E) - calE(E)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{rosen_morse, PhysicalContext, PotentialParams, QuantumNumbers, Symmetry};
use crate::pekeris::{centrifugal_approx, PekerisCoeffs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Centrifugal {
    Exact,
    Pekeris,
}

impl std::str::FromStr for Centrifugal {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Self::Exact),
            "pekeris" => Ok(Self::Pekeris),
            other => Err(format!("unknown centrifugal mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    /// Interior points.
    pub points: usize,
}

impl GridSpec {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "r_min",
                value: r_min,
                reason: "need 0 < r_min < r_max",
            });
        }
        if points < 200 {
            return Err(Error::InvalidParameter {
                name: "points",
                value: points as f64,
                reason: "need at least 200 grid points",
            });
        }
        Ok(Self {
            r_min,
            r_max,
            points,
        })
    }

    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.points + 1) as f64
    }

    /// Same interval with the step halved.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points + 1,
            ..*self
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (1..=self.points).map(move |i| self.r_min + i as f64 * h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub energy: f64,
    pub eigen_index: u32,
    pub grid: GridSpec,
    pub converged: bool,
    pub richardson_error: f64,
}

/// `u_eff(r)` and the spectral target at one trial energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveProblem {
    pub params: PotentialParams,
    pub coeffs: PekerisCoeffs,
    pub centrifugal: Centrifugal,
    pub omega: f64,
    /// Multiplies the Rosen-Morse potential.
    pub coupling: f64,
    pub target: f64,
}

impl EffectiveProblem {
    pub fn u_eff(&self, r: f64) -> f64 {
        let cent = match self.centrifugal {
            Centrifugal::Exact => 1.0 / (r * r),
            Centrifugal::Pekeris => centrifugal_approx(r, self.params.alpha, self.params.r_e, &self.coeffs),
        };
        self.omega * cent + self.coupling * rosen_morse(r, &self.params)
    }

    /// `u_eff` far from the origin.
    pub fn asymptote(&self) -> f64 {
        self.coupling * self.params.v2
    }
}

pub fn effective_problem(
    e: f64,
    params: &PotentialParams,
    ctx: &PhysicalContext,
    qn: &QuantumNumbers,
    centrifugal: Centrifugal,
    coeffs: &PekerisCoeffs,
) -> EffectiveProblem {
    let h2 = ctx.hbarc * ctx.hbarc;
    let (mc2, c) = (ctx.mc2, ctx.sym_const);
    let (coupling, target) = match ctx.symmetry {
        Symmetry::Spin => ((mc2 + e - c) / h2, (e * e - mc2 * mc2 + c * (mc2 - e)) / h2),
        Symmetry::Pseudospin => (-(mc2 - e + c) / h2, (e * e - mc2 * mc2 - c * (mc2 + e)) / h2),
    };
    EffectiveProblem {
        params: *params,
        coeffs: *coeffs,
        centrifugal,
        omega: qn.centrifugal_strength(ctx.symmetry),
        coupling,
        target,
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    off2: f64,
    lo: f64,
    hi: f64,
}

impl Tridiagonal {
    fn assemble<F: Fn(f64) -> f64>(u_eff: F, grid: &GridSpec) -> Self {
        let h = grid.step();
        let inv_h2 = 1.0 / (h * h);
        let diag: Vec<f64> = grid.nodes().map(|r| 2.0 * inv_h2 + u_eff(r)).collect();
        let (mn, mx) = diag
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| (a.min(d), b.max(d)));
        Self {
            diag,
            off2: inv_h2 * inv_h2,
            lo: mn - 2.0 * inv_h2,
            hi: mx + 2.0 * inv_h2,
        }
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - self.off2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = (self.lo, self.hi);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Lowest `count` Dirichlet eigenvalues of `-u'' + u_eff u` on the grid.
pub fn eigenvalues_fd<F: Fn(f64) -> f64>(u_eff: F, grid: &GridSpec, count: usize) -> Result<Vec<f64>> {
    if count > grid.points {
        return Err(Error::GridCapacity {
            requested: count,
            capacity: grid.points,
        });
    }
    let t = Tridiagonal::assemble(u_eff, grid);
    Ok((0..count).map(|k| t.eigenvalue(k)).collect())
}

/// The `k`-th eigenvalue alone.
pub fn eigenvalue_fd<F: Fn(f64) -> f64>(u_eff: F, grid: &GridSpec, k: usize) -> Result<f64> {
    if k >= grid.points {
        return Err(Error::GridCapacity {
            requested: k + 1,
            capacity: grid.points,
        });
    }
    Ok(Tridiagonal::assemble(u_eff, grid).eigenvalue(k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Interior points of the coarse grid; the fine grid has `2 points + 1`.
    pub points: usize,
    /// Requested accuracy of the extrapolated energy.
    pub tol: f64,
    /// Fixed grid; `None` picks one from the decay rate.
    pub grid: Option<GridSpec>,
    /// Energy window; `None` uses the bound-state window of the branch.
    pub window: Option<(f64, f64)>,
    /// Coarse samples of `phi(E)` used to bracket the root.
    pub scan_points: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            points: 4000,
            tol: 1e-6,
            grid: None,
            window: None,
            scan_points: 64,
        }
    }
}

fn default_window(params: &PotentialParams, ctx: &PhysicalContext) -> (f64, f64) {
    let tiny = 1e-9 * ctx.mc2;
    match ctx.symmetry {
        Symmetry::Spin => (
            (-ctx.mc2).max(ctx.sym_const - ctx.mc2) + tiny,
            ctx.mc2 + params.v2 - tiny,
        ),
        Symmetry::Pseudospin => (
            params.v2 - ctx.mc2 + tiny,
            ctx.mc2.min(ctx.mc2 + ctx.sym_const) - tiny,
        ),
    }
}

/// Grid adapted to the decay rate at energy `e`.
pub fn adapted_grid(prob: &EffectiveProblem, points: usize) -> Result<GridSpec> {
    let alpha = prob.params.alpha;
    let kappa = (prob.asymptote() - prob.target).max(0.0).sqrt();
    let eps_est = (kappa / (2.0 * alpha)).max(0.05);
    GridSpec::new(1e-4 / alpha, 30.0 / alpha + 10.0 / (alpha * eps_est), points)
}

struct Solve<'a> {
    n: usize,
    params: &'a PotentialParams,
    ctx: &'a PhysicalContext,
    qn: &'a QuantumNumbers,
    centrifugal: Centrifugal,
    coeffs: &'a PekerisCoeffs,
}

impl Solve<'_> {
    fn problem(&self, e: f64) -> EffectiveProblem {
        effective_problem(e, self.params, self.ctx, self.qn, self.centrifugal, self.coeffs)
    }

    /// True when `lambda_n(E) > calE(E)`, read off the Sturm count at the target.
    fn above(&self, e: f64, grid: &GridSpec) -> bool {
        let p = self.problem(e);
        Tridiagonal::assemble(|r| p.u_eff(r), grid).count_below(p.target) <= self.n
    }

    fn root(&self, grid: &GridSpec, window: (f64, f64), scan: usize, e_tol: f64) -> Option<f64> {
        let (a, b) = window;
        let mut prev = (a, self.above(a, grid));
        for i in 1..scan {
            let e = a + (b - a) * i as f64 / (scan - 1) as f64;
            let cur = (e, self.above(e, grid));
            if prev.1 != cur.1 {
                let (mut lo, mut hi) = (prev.0, cur.0);
                while hi - lo > e_tol {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.above(mid, grid) == prev.1 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Some(0.5 * (lo + hi));
            }
            prev = cur;
        }
        None
    }
}

/// Energy at which the `n`-th eigenvalue of the effective operator meets
/// the target, Richardson-extrapolated over a grid and its halving.
/// `Ok(None)` when `phi` has no sign change in the window.
#[allow(clippy::too_many_arguments)]
pub fn self_consistent_energy(
    n: u32,
    params: &PotentialParams,
    ctx: &PhysicalContext,
    qn: &QuantumNumbers,
    centrifugal: Centrifugal,
    coeffs: &PekerisCoeffs,
    cfg: &OracleConfig,
) -> Result<Option<OracleResult>> {
    crate::error::require_positive("tol", cfg.tol)?;
    let solve = Solve {
        n: n as usize,
        params,
        ctx,
        qn,
        centrifugal,
        coeffs,
    };
    let window = cfg.window.unwrap_or_else(|| default_window(params, ctx));
    if !(window.0 < window.1) {
        return Err(Error::EmptyWindow {
            e_min: window.0,
            e_max: window.1,
        });
    }
    let e_tol = (cfg.tol * 1e-3).min(1e-12 * ctx.mc2);
    let scan = cfg.scan_points.max(8);
    let grid = match cfg.grid {
        Some(g) => g,
        None => {
            let first = adapted_grid(&solve.problem(0.5 * (window.0 + window.1)), cfg.points)?;
            let Some(e0) = solve.root(&first, window, scan, 1e-6 * ctx.mc2) else {
                return Ok(None);
            };
            adapted_grid(&solve.problem(e0), cfg.points)?
        }
    };
    if solve.n >= grid.points {
        return Err(Error::GridCapacity {
            requested: solve.n + 1,
            capacity: grid.points,
        });
    }
    let fine = grid.refined();
    let (e1, e2) = rayon::join(
        || solve.root(&grid, window, scan, e_tol),
        || solve.root(&fine, window, scan, e_tol),
    );
    let (Some(e1), Some(e2)) = (e1, e2) else {
        return Ok(None);
    };
    let err = (e2 - e1).abs() / 3.0;
    Ok(Some(OracleResult {
        energy: e2 + (e2 - e1) / 3.0,
        eigen_index: n,
        grid,
        converged: err < cfg.tol,
        richardson_error: err,
    }))
}

/// Nonrelativistic level `n` of `-u'' + [omega C(r) + 2 mu_h V(r)] u = 2 mu_h E u`.
pub fn nonrel_energy_fd(
    n: u32,
    l: u32,
    params: &PotentialParams,
    mu_h: f64,
    centrifugal: Centrifugal,
    coeffs: &PekerisCoeffs,
    points: usize,
) -> Result<Option<OracleResult>> {
    crate::error::require_positive("mu_h", mu_h)?;
    let prob = EffectiveProblem {
        params: *params,
        coeffs: *coeffs,
        centrifugal,
        omega: (l as f64) * (l as f64 + 1.0),
        coupling: 2.0 * mu_h,
        target: 0.0,
    };
    let level = |grid: &GridSpec| eigenvalue_fd(|r| prob.u_eff(r), grid, n as usize);
    let probe = GridSpec::new(1e-4 / params.alpha, 60.0 / params.alpha, points)?;
    let lam0 = level(&probe)?;
    if lam0 >= prob.asymptote() {
        return Ok(None);
    }
    let grid = adapted_grid(&EffectiveProblem { target: lam0, ..prob }, points)?;
    let fine = grid.refined();
    let (l1, l2) = rayon::join(|| level(&grid), || level(&fine));
    let (e1, e2) = (l1? / (2.0 * mu_h), l2? / (2.0 * mu_h));
    let err = (e2 - e1).abs() / 3.0;
    Ok(Some(OracleResult {
        energy: e2 + (e2 - e1) / 3.0,
        eigen_index: n,
        grid,
        converged: true,
        richardson_error: err,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pekeris::matched_coeffs;
    use std::f64::consts::PI;

    #[test]
    fn particle_in_a_box() {
        let l = 3.0;
        let g = GridSpec::new(1e-12, l, 4000).unwrap();
        let ev = eigenvalues_fd(|_| 0.0, &g, 4).unwrap();
        for (k, v) in ev.iter().enumerate() {
            let want = ((k + 1) as f64 * PI / l).powi(2);
            assert!((v / want - 1.0).abs() < 1e-4, "{v} {want}");
        }
    }

    #[test]
    fn half_line_oscillator() {
        let g = GridSpec::new(1e-12, 20.0, 4000).unwrap();
        let ev = eigenvalues_fd(|r| r * r, &g, 3).unwrap();
        for (v, want) in ev.iter().zip([3.0, 7.0, 11.0]) {
            assert!((v / want - 1.0).abs() < 1e-4, "{v}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let exact = 3.0;
        let err = |pts: usize| {
            let g = GridSpec::new(1e-12, 20.0, pts).unwrap();
            (eigenvalue_fd(|r| r * r, &g, 0).unwrap() - exact).abs()
        };
        let (e1, e2) = (err(1000), err(2001));
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.2, "{order}");
    }

    #[test]
    fn capacity_and_grid_checks() {
        let g = GridSpec::new(0.1, 1.0, 200).unwrap();
        assert!(matches!(eigenvalues_fd(|_| 0.0, &g, 201), Err(Error::GridCapacity { .. })));
        assert!(GridSpec::new(0.0, 1.0, 300).is_err());
        assert!(GridSpec::new(0.1, 1.0, 100).is_err());
    }

    #[test]
    fn effective_problem_examples() {
        let p = PotentialParams::new(3.0, 1.0, 0.5, 2.0).unwrap();
        let ctx = PhysicalContext::spin(5.0, 1.0, 0.0).unwrap();
        let c = matched_coeffs(p.alpha, p.r_e).unwrap();
        let qn = QuantumNumbers::new(0, -1).unwrap();
        let a = effective_problem(1.0, &p, &ctx, &qn, Centrifugal::Exact, &c);
        let b = effective_problem(1.0, &p, &ctx, &qn, Centrifugal::Pekeris, &c);
        for r in [0.01, 0.3, 2.0, 9.0] {
            assert_eq!(a.u_eff(r).to_bits(), b.u_eff(r).to_bits());
        }
        assert_eq!(effective_problem(5.0, &p, &ctx, &qn, Centrifugal::Exact, &c).target, 0.0);
        assert!((a.u_eff(200.0) - 6.0 * 1.0).abs() < 1e-12);
    }

    #[test]
    fn sample_well_oracle_energies() {
        // shooting from r = 2e-4 with an adaptive ODE integrator
        let p = PotentialParams::new(3.0, 1.0, 0.5, 2.0).unwrap();
        let ctx = PhysicalContext::spin(5.0, 1.0, 0.0).unwrap();
        let c = matched_coeffs(p.alpha, p.r_e).unwrap();
        let qn = QuantumNumbers::new(0, -1).unwrap();
        let cfg = OracleConfig {
            tol: 1e-4,
            ..OracleConfig::default()
        };
        let res = self_consistent_energy(0, &p, &ctx, &qn, Centrifugal::Exact, &c, &cfg)
            .unwrap()
            .unwrap();
        assert!((res.energy - 3.1788004901).abs() < 1e-8, "{res:?}");
        assert!(res.converged);
    }

    #[test]
    fn nonrel_mode_free_of_well_has_no_state() {
        let p = PotentialParams::new(0.0, 0.0, 0.5, 2.0).unwrap();
        let c = matched_coeffs(p.alpha, p.r_e).unwrap();
        assert!(nonrel_energy_fd(0, 0, &p, 1.0, Centrifugal::Exact, &c, 400).unwrap().is_none());
    }
}
