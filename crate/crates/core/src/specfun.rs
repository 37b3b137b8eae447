//! Special functions used by the wavefunctions and normalization integrals.
//!
//! Everything here is real-argument and self-contained: log-gamma (Lanczos),
//! Pochhammer symbols, Jacobi and Laguerre polynomials by three-term
//! recurrence, Gauss `2F1` by partial sums, terminating `3F2` at unit
//! argument, and Gauss-Legendre rules.

use crate::error::{Error, Result};

/// Relative size below which a series term is considered negligible.
pub const SERIES_TOL: f64 = 1e-16;

/// Hard cap on series length. Hitting it is an error.
pub const SERIES_CAP: usize = 1_000_000;

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// `ln Gamma(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "ln_gamma needs x > 0",
        });
    }
    Ok(ln_gamma_pos(x))
}

pub(crate) fn ln_gamma_pos(x: f64) -> f64 {
    // Exact on the small integers, which the tests and factorials hit often.
    if x == x.floor() && x <= 30.0 {
        let mut acc = 0.0f64;
        let mut k = 2.0;
        while k < x {
            acc += f64::ln(k);
            k += 1.0;
        }
        return acc;
    }
    if x < 0.5 {
        // Shift up; the Lanczos sum is most accurate for x >= 1/2.
        return ln_gamma_pos(x + 1.0) - x.ln();
    }
    if x > 1e7 {
        // Stirling with two correction terms is exact to f64 precision here.
        let inv = 1.0 / x;
        return (x - 0.5) * x.ln() - x + LN_SQRT_2PI + inv / 12.0 - inv.powi(3) / 360.0;
    }
    let xm = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = xm + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (xm + i as f64);
    }
    LN_SQRT_2PI + (xm + 0.5) * t.ln() - t + a.ln()
}

/// Rising factorial `x (x+1) ... (x+m-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, k| acc * (x + k as f64))
}

/// Jacobi polynomial `P_n^{(a,b)}(x)` by the standard three-term recurrence.
///
/// The recurrence is a polynomial identity, so any real `x` is accepted;
/// only the parameter range `a, b > -1` is enforced.
pub fn jacobi_p(n: u32, a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a > -1.0) {
        return Err(Error::InvalidParameter {
            name: "a",
            value: a,
            reason: "Jacobi parameter must exceed -1",
        });
    }
    if !(b > -1.0) {
        return Err(Error::InvalidParameter {
            name: "b",
            value: b,
            reason: "Jacobi parameter must exceed -1",
        });
    }
    Ok(jacobi_unchecked(n, a, b, x))
}

pub(crate) fn jacobi_unchecked(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let p0 = 1.0;
    if n == 0 {
        return p0;
    }
    let ab = a + b;
    let p1 = 0.5 * (a - b) + 0.5 * (ab + 2.0) * x;
    if n == 1 {
        return p1;
    }
    let (mut pm2, mut pm1) = (p0, p1);
    for k in 2..=n {
        let k = k as f64;
        let s = 2.0 * k + ab;
        let c0 = 2.0 * k * (k + ab) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s;
        let p = (c1 * pm1 - c2 * pm2) / c0;
        pm2 = pm1;
        pm1 = p;
    }
    pm1
}

/// Generalized Laguerre polynomial `L_n^{(a)}(x)`.
pub fn laguerre_l(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut lm2 = 1.0;
    let mut lm1 = 1.0 + a - x;
    for k in 2..=n {
        let k = k as f64;
        let l = ((2.0 * k - 1.0 + a - x) * lm1 - (k - 1.0 + a) * lm2) / k;
        lm2 = lm1;
        lm1 = l;
    }
    lm1
}

fn nonpositive_integer(x: f64) -> Option<u64> {
    if x <= 0.0 && x == x.floor() && x > -(u32::MAX as f64) {
        Some((-x) as u64)
    } else {
        None
    }
}

/// Gauss hypergeometric `2F1(a, b; c; z)` by direct summation.
///
/// Valid for `|z| < 1`, or for any `z` when `a` or `b` is a non-positive
/// integer (polynomial case). No analytic continuation is attempted.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let stop = match (nonpositive_integer(a), nonpositive_integer(b)) {
        (Some(m), Some(k)) => Some(m.min(k)),
        (Some(m), None) | (None, Some(m)) => Some(m),
        (None, None) => None,
    };
    if let Some(cm) = nonpositive_integer(c) {
        // the denominator hits zero at term cm+1 unless the series stops first
        if stop.map_or(true, |s| s > cm) {
            return Err(Error::NonConvergentSeries("c is a non-positive integer"));
        }
    }
    if stop.is_none() && !(z.abs() < 1.0) {
        return Err(Error::NonConvergentSeries("|z| >= 1 with a non-terminating series"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if let Some(n) = stop {
        return Ok(terminating_series(a, b, c, z, n));
    }
    gauss_series(a, b, c, z)
}

/// Polynomial case summed in double-double: the alternating terms for
/// `z > 0` cancel far below double precision.
fn terminating_series(a: f64, b: f64, c: f64, z: f64, n: u64) -> f64 {
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    let z = Dd::from(z);
    for k in 0..n {
        let kf = k as f64;
        let num = Dd::two_sum(a, kf).mul(Dd::two_sum(b, kf)).mul(z);
        let den = Dd::two_sum(c, kf).mul(Dd::from(kf + 1.0));
        term = term.mul(num).div(den);
        sum = sum.add(term);
    }
    sum.hi + sum.lo
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Self {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        Self::renorm(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Self::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Self::from(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Self::from(-q2)));
        let q3 = r.hi / o.hi;
        Self::renorm(q1, q2).add(Self::from(q3))
    }
}

fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0usize;
    loop {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        k += 1;
        if term.abs() <= SERIES_TOL * sum.abs() {
            return Ok(sum);
        }
        if k >= SERIES_CAP {
            return Err(Error::SeriesCap { cap: SERIES_CAP });
        }
    }
}

/// Terminating `3F2(a1, a2, a3; b1, b2; 1)`.
///
/// At least one numerator parameter must be a non-positive integer.
pub fn hyp3f2_unit(a1: f64, a2: f64, a3: f64, b1: f64, b2: f64) -> Result<f64> {
    let stop = [a1, a2, a3]
        .iter()
        .filter_map(|&a| nonpositive_integer(a))
        .min()
        .ok_or(Error::NonConvergentSeries(
            "3F2 at unit argument needs a non-positive integer numerator parameter",
        ))?;
    for b in [b1, b2] {
        if let Some(bm) = nonpositive_integer(b) {
            if bm < stop {
                return Err(Error::NonConvergentSeries("denominator parameter hits zero"));
            }
        }
    }
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for p in 0..stop {
        let p = p as f64;
        let num = Dd::two_sum(a1, p).mul(Dd::two_sum(a2, p)).mul(Dd::two_sum(a3, p));
        let den = Dd::two_sum(b1, p).mul(Dd::two_sum(b2, p)).mul(Dd::from(p + 1.0));
        term = term.mul(num).div(den);
        sum = sum.add(term);
    }
    Ok(sum.hi + sum.lo)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `int_a^b f`, mapped affinely onto the reference interval.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

/// Legendre `P_n(x)` and its derivative.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// `npts`-point Gauss-Legendre rule, `2 <= npts <= 512`, by Newton iteration
/// on the Legendre polynomial from Tricomi-style initial guesses.
pub fn gauss_legendre(npts: usize) -> Result<QuadratureRule> {
    if !(2..=512).contains(&npts) {
        return Err(Error::QuadratureOrder(npts));
    }
    let n = npts;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // descending cosines -> fill from both ends, ascending order
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}
