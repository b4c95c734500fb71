//! Quadrature on uniform grids, semi-infinite radial integrals, and direct
//! momentum-to-position synthesis.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Uniformly spaced nodes `start + i·step`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid1D {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !start.is_finite() {
            return Err(Error::InvalidGrid("start must be finite"));
        }
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidGrid("step must be positive"));
        }
        if count < 2 {
            return Err(Error::InvalidGrid("count must be at least 2"));
        }
        Ok(Self { start, step, count })
    }

    /// `count` nodes spanning `[lo, hi]` inclusive.
    pub fn spanning(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid("count must be at least 2"));
        }
        if !(hi > lo) {
            return Err(Error::InvalidGrid("upper end must exceed lower end"));
        }
        Self::new(lo, (hi - lo) / (count - 1) as f64, count)
    }

    /// Symmetric grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, count: usize) -> Result<Self> {
        Self::spanning(-half_width, half_width, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.coord(self.count - 1)
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn coords(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.coord(i))
    }

    /// True when node `i` mirrors node `count − 1 − i` about the origin.
    pub fn is_symmetric(&self) -> bool {
        let mid = self.start + 0.5 * (self.count - 1) as f64 * self.step;
        mid.abs() <= 1e-9 * self.step.max(self.start.abs())
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.count {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                samples: len,
                grid: self.count,
            })
        }
    }
}

/// Composite Simpson weights (including the step) for a uniform grid.
///
/// An odd number of intervals is handled by averaging the two rules that put a
/// Simpson 3/8 panel at either end, so the weights stay mirror symmetric and
/// the rule remains exact for cubics.
pub fn simpson_weights(grid: &Grid1D) -> Vec<f64> {
    let n = grid.count;
    let h = grid.step;
    let mut w = vec![0.0; n];
    if n == 2 {
        w[0] = 0.5 * h;
        w[1] = 0.5 * h;
        return w;
    }
    let intervals = n - 1;
    if intervals.is_multiple_of(2) {
        add_simpson(&mut w, 0, intervals, h, 1.0);
    } else {
        // 3/8 panel at the end
        add_simpson(&mut w, 0, intervals - 3, h, 0.5);
        add_three_eighths(&mut w, intervals - 3, h, 0.5);
        // 3/8 panel at the start
        add_three_eighths(&mut w, 0, h, 0.5);
        add_simpson(&mut w, 3, intervals, h, 0.5);
    }
    w
}

fn add_simpson(w: &mut [f64], from: usize, to: usize, h: f64, scale: f64) {
    let mut i = from;
    while i + 2 <= to {
        w[i] += scale * h / 3.0;
        w[i + 1] += scale * 4.0 * h / 3.0;
        w[i + 2] += scale * h / 3.0;
        i += 2;
    }
}

fn add_three_eighths(w: &mut [f64], from: usize, h: f64, scale: f64) {
    let c = scale * 3.0 * h / 8.0;
    w[from] += c;
    w[from + 1] += 3.0 * c;
    w[from + 2] += 3.0 * c;
    w[from + 3] += c;
}

/// Composite Simpson integral of nodal samples over the grid span.
pub fn integrate_grid<T>(samples: &[T], grid: &Grid1D) -> Result<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    grid.check_len(samples.len())?;
    Ok(samples
        .iter()
        .zip(simpson_weights(grid))
        .fold(T::default(), |acc, (&s, w)| acc + s * w))
}

/// Refinement cap for [`integrate_radial`].
pub const MAX_REFINEMENTS: usize = 24;

/// A quadrature value with the size of its last refinement correction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
}

/// `∫₀^∞ f(r) dr` for integrands behaving like `r^power_floor` at the origin
/// and decaying like `e^(−2·decay·r)`.
///
/// The integral is taken in `u = 2·decay·r` and split at `u = 1`. On `[0, 1]` a
/// power substitution removes the endpoint singularity and a tanh-sinh rule is
/// applied; `[1, ∞)` uses an exp-sinh rule. Each piece halves its step until
/// two successive estimates agree to `rel_tol`.
pub fn integrate_radial<F>(f: F, power_floor: f64, decay: f64, rel_tol: f64) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    integrate_radial_capped(f, power_floor, decay, rel_tol, MAX_REFINEMENTS)
}

/// [`integrate_radial`] with an explicit refinement cap.
pub fn integrate_radial_capped<F>(
    f: F,
    power_floor: f64,
    decay: f64,
    rel_tol: f64,
    max_refinements: usize,
) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    if !(power_floor > -1.0) {
        return Err(Error::domain("power_floor", power_floor, "(-1, inf)"));
    }
    if !(decay.is_finite() && decay > 0.0) {
        return Err(Error::domain("decay", decay, "(0, inf)"));
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(Error::domain("rel_tol", rel_tol, "(0, inf)"));
    }
    let scale = 1.0 / (2.0 * decay);
    let r_of = |u: f64| u * scale;

    let near = if power_floor < 0.0 {
        let alpha = 1.0 / (1.0 + power_floor);
        // u = w^alpha: f(r) du = alpha·[f(r)·u^(−p)] dw, bounded at w = 0.
        let g = |w: f64| {
            let u = w.powf(alpha).max(1e-280);
            alpha * f(r_of(u)) * u.powf(-power_floor)
        };
        double_exponential(&g, &TANH_SINH_UNIT, rel_tol, max_refinements)?
    } else {
        let g = |u: f64| f(r_of(u));
        double_exponential(&g, &TANH_SINH_UNIT, rel_tol, max_refinements)?
    };
    let g = |u: f64| f(r_of(u));
    let far = double_exponential(&g, &EXP_SINH_FROM_ONE, rel_tol, max_refinements)?;

    Ok(Integral {
        value: scale * (near.value + far.value),
        abs_error: scale * (near.abs_error + far.abs_error),
    })
}

/// A double-exponential change of variables `x(t)` with weight `x'(t)`.
struct DeMap {
    t_lo: f64,
    t_hi: f64,
    node: fn(f64) -> (f64, f64),
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// `x = (1 + tanh(π/2·sinh t))/2` on `(0, 1)`.
const TANH_SINH_UNIT: DeMap = DeMap {
    t_lo: -4.0,
    t_hi: 4.0,
    node: |t| {
        let s = HALF_PI * t.sinh();
        let e = (-2.0 * s.abs()).exp();
        // distance to the nearer endpoint, without cancellation
        let near = e / (1.0 + e);
        let x = if s < 0.0 { near } else { 1.0 - near };
        let sech = 2.0 * (-s.abs()).exp() / (1.0 + e);
        (x, 0.5 * HALF_PI * t.cosh() * sech * sech)
    },
};

/// `x = 1 + exp(π/2·sinh t)` on `(1, ∞)`, truncated once `x` passes 800
/// where `e^(−x)` underflows.
const EXP_SINH_FROM_ONE: DeMap = DeMap {
    t_lo: -4.5,
    t_hi: 2.156,
    node: |t| {
        let e = (HALF_PI * t.sinh()).exp();
        (1.0 + e, HALF_PI * t.cosh() * e)
    },
};

fn double_exponential<G>(g: &G, map: &DeMap, rel_tol: f64, max_refinements: usize) -> Result<Integral>
where
    G: Fn(f64) -> f64,
{
    let eval = |t: f64| -> Result<f64> {
        let (x, w) = (map.node)(t);
        if w == 0.0 {
            return Ok(0.0);
        }
        let v = g(x) * w;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonConvergence {
                refinements: 0,
                last_change: f64::NAN,
            })
        }
    };

    let mut h = 0.5;
    let mut sum = 0.0;
    let k_lo = (map.t_lo / h).ceil() as i64;
    let k_hi = (map.t_hi / h).floor() as i64;
    for k in k_lo..=k_hi {
        sum += eval(k as f64 * h)?;
    }
    let mut estimate = h * sum;
    let mut last_change = f64::INFINITY;

    for level in 1..=max_refinements {
        h *= 0.5;
        let k_lo = (map.t_lo / h).ceil() as i64;
        let k_hi = (map.t_hi / h).floor() as i64;
        let mut odd = 0.0;
        for k in k_lo..=k_hi {
            if k % 2 != 0 {
                odd += eval(k as f64 * h)?;
            }
        }
        sum += odd;
        let next = h * sum;
        last_change = (next - estimate).abs();
        estimate = next;
        if level >= 3 && last_change <= rel_tol * estimate.abs() + f64::MIN_POSITIVE {
            return Ok(Integral {
                value: estimate,
                abs_error: last_change,
            });
        }
    }
    Err(Error::NonConvergence {
        refinements: max_refinements,
        last_change,
    })
}

/// Ratio of edge to peak amplitude above which a spectrum counts as truncated.
pub const TRUNCATION_THRESHOLD: f64 = 1e-5;

/// Complex amplitudes sampled on a uniform wavenumber grid whose edges carry
/// negligible weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    kgrid: Grid1D,
    values: Vec<Complex64>,
}

impl SpectralCoefficients {
    pub fn new(kgrid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        Self::with_threshold(kgrid, values, TRUNCATION_THRESHOLD)
    }

    pub fn with_threshold(kgrid: Grid1D, values: Vec<Complex64>, threshold: f64) -> Result<Self> {
        kgrid.check_len(values.len())?;
        let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let tail = values[0].norm().max(values[values.len() - 1].norm());
        if tail > threshold * peak || !(peak > 0.0) {
            return Err(Error::TailLeakage {
                tail: if peak > 0.0 { tail / peak } else { tail },
                threshold,
            });
        }
        Ok(Self { kgrid, values })
    }

    pub fn kgrid(&self) -> &Grid1D {
        &self.kgrid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Pointwise product with per-node coefficients `c(k)`.
    pub fn scaled_by<F: Fn(f64) -> f64>(&self, c: F) -> Self {
        let values = self
            .kgrid
            .coords()
            .zip(&self.values)
            .map(|(k, v)| v * c(k))
            .collect();
        Self {
            kgrid: self.kgrid,
            values,
        }
    }

    /// `∫|values|² dk`.
    pub fn norm_sqr(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        integrate_grid(&sq, &self.kgrid).expect("length checked at construction")
    }
}

/// The free mass-shell map `k ↦ (k, √(k²+1))`.
pub fn mass_shell(k: f64) -> (f64, f64) {
    (k, (k * k + 1.0).sqrt())
}

/// `Σ_k w_k a(k) exp(i(k_eff z − ω_eff t))` at every node of `zgrid`, where `w_k`
/// are Simpson weights over the wavenumber grid.
pub fn synthesize<P>(coeffs: &SpectralCoefficients, phase: P, zgrid: &Grid1D, t: f64) -> Vec<Complex64>
where
    P: Fn(f64) -> (f64, f64),
{
    let terms: Vec<(f64, Complex64)> = coeffs
        .kgrid
        .coords()
        .zip(simpson_weights(&coeffs.kgrid))
        .zip(&coeffs.values)
        .filter(|(_, v)| v.norm_sqr() > 0.0)
        .map(|((k, w), v)| {
            let (k_eff, omega) = phase(k);
            (k_eff, v * w * Complex64::from_polar(1.0, -omega * t))
        })
        .collect();
    zgrid
        .coords()
        .map(|z| {
            terms
                .iter()
                .map(|&(k, a)| a * Complex64::from_polar(1.0, k * z))
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use statrs::function::erf::erf;
    use statrs::function::gamma::gamma;

    fn sample(grid: &Grid1D, f: impl Fn(f64) -> f64) -> Vec<f64> {
        grid.coords().map(f).collect()
    }

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(0.0, 0.0, 10).is_err());
        assert!(Grid1D::new(0.0, 0.1, 1).is_err());
        assert!(Grid1D::new(f64::NAN, 0.1, 3).is_err());
        let g = Grid1D::spanning(0.0, 1.0, 101).unwrap();
        assert_relative_eq!(g.end(), 1.0, epsilon = 1e-15);
        assert!(Grid1D::symmetric(3.0, 8).unwrap().is_symmetric());
        assert!(!Grid1D::spanning(-1.0, 2.0, 8).unwrap().is_symmetric());
    }

    #[test]
    fn constant_and_quadratic_exact() {
        let g = Grid1D::spanning(0.0, 1.0, 101).unwrap();
        assert_relative_eq!(integrate_grid(&sample(&g, |_| 1.0), &g).unwrap(), 1.0, epsilon = 1e-14);
        let v = integrate_grid(&sample(&g, |x| x * x), &g).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_exact_for_every_parity() {
        for n in 3..12 {
            let g = Grid1D::spanning(-0.3, 1.7, n).unwrap();
            let v = integrate_grid(&sample(&g, |x| 2.0 * x * x * x - x + 0.5), &g).unwrap();
            let exact = |x: f64| 0.5 * x.powi(4) - 0.5 * x * x + 0.5 * x;
            assert!((v - (exact(1.7) - exact(-0.3))).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn weights_are_mirror_symmetric() {
        for n in [4, 7, 10, 1024] {
            let w = simpson_weights(&Grid1D::spanning(0.0, 1.0, n).unwrap());
            for i in 0..n {
                assert!((w[i] - w[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gaussian_against_erf() {
        let g = Grid1D::spanning(-8.0, 8.0, 801).unwrap();
        let v = integrate_grid(&sample(&g, |x| (-x * x).exp()), &g).unwrap();
        let oracle = std::f64::consts::PI.sqrt() * erf(8.0);
        assert!((v - oracle).abs() < 1e-10);
    }

    #[test]
    fn length_mismatch() {
        let g = Grid1D::spanning(0.0, 1.0, 5).unwrap();
        assert_eq!(
            integrate_grid(&[1.0; 4], &g),
            Err(Error::LengthMismatch { samples: 4, grid: 5 })
        );
    }

    #[test]
    fn complex_samples() {
        let g = Grid1D::spanning(0.0, 1.0, 11).unwrap();
        let s: Vec<Complex64> = g.coords().map(|x| Complex64::new(x, 2.0)).collect();
        let v = integrate_grid(&s, &g).unwrap();
        assert_relative_eq!(v.re, 0.5, epsilon = 1e-14);
        assert_relative_eq!(v.im, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn radial_exponential() {
        let v = integrate_radial(|r| (-2.0 * r).exp(), 0.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v.value, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn radial_gamma_oracles() {
        for (s, lambda) in [(0.1, 1.0), (0.5, 1.0), (1.0, 0.7), (1.8, 1.0), (2.0, 2.5), (3.7, 0.3)] {
            let v = integrate_radial(
                |r: f64| r.powf(s - 1.0) * (-2.0 * lambda * r).exp(),
                s - 1.0,
                lambda,
                1e-12,
            )
            .unwrap();
            let oracle = gamma(s) / (2.0 * lambda).powf(s);
            assert!(
                ((v.value - oracle) / oracle).abs() < 1e-11,
                "s = {s}: {} vs {oracle}",
                v.value
            );
        }
    }

    #[test]
    fn radial_inverse_sqrt_singularity() {
        let v = integrate_radial(|r: f64| r.powf(-0.5) * (-2.0 * r).exp(), -0.5, 1.0, 1e-12).unwrap();
        assert_relative_eq!(v.value, (std::f64::consts::PI / 2.0).sqrt(), max_relative = 1e-11);
    }

    #[test]
    fn radial_near_log_singular() {
        // Γ(0.002)/2^0.002: the exponent sits just above −1
        let p = -0.998;
        let v = integrate_radial(|r: f64| r.powf(p) * (-2.0 * r).exp(), p, 1.0, 1e-12).unwrap();
        let oracle = gamma(0.002) / 2f64.powf(0.002);
        assert_relative_eq!(v.value, oracle, max_relative = 1e-10);
    }

    #[test]
    fn radial_errors() {
        assert!(matches!(
            integrate_radial(|r| r, -1.0, 1.0, 1e-10),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            integrate_radial(|_| f64::NAN, 0.0, 1.0, 1e-10),
            Err(Error::NonConvergence { .. })
        ));
        // one refinement cannot meet a tight tolerance on an oscillating integrand
        assert!(matches!(
            integrate_radial_capped(|r: f64| (40.0 * r).cos() * (-2.0 * r).exp(), 0.0, 1.0, 1e-12, 1),
            Err(Error::NonConvergence { refinements: 1, .. })
        ));
    }

    fn gaussian_coeffs(sigma: f64, k0: f64, n: usize) -> SpectralCoefficients {
        let half = 8.0 * sigma.sqrt();
        let kg = Grid1D::spanning(k0 - half, k0 + half, n).unwrap();
        let v = kg
            .coords()
            .map(|k| Complex64::from((-(k - k0) * (k - k0) / (2.0 * sigma)).exp()))
            .collect();
        SpectralCoefficients::new(kg, v).unwrap()
    }

    #[test]
    fn tail_leakage_detected() {
        let kg = Grid1D::spanning(-1.0, 1.0, 21).unwrap();
        let v = kg.coords().map(|k| Complex64::from((-k * k).exp())).collect();
        assert!(matches!(
            SpectralCoefficients::new(kg, v),
            Err(Error::TailLeakage { .. })
        ));
    }

    #[test]
    fn single_mode_is_plane_wave() {
        let kg = Grid1D::spanning(0.0, 2.0, 3).unwrap();
        let v = vec![Complex64::from(0.0), Complex64::from(3.0), Complex64::from(0.0)];
        let c = SpectralCoefficients::with_threshold(kg, v, 0.0).unwrap();
        let zg = Grid1D::spanning(-5.0, 5.0, 41).unwrap();
        let t = 0.7;
        let out = synthesize(&c, mass_shell, &zg, t);
        let w1 = 4.0 / 3.0;
        let omega = 2f64.sqrt();
        for (z, psi) in zg.coords().zip(out) {
            let expect = Complex64::from_polar(3.0 * w1, z - omega * t);
            assert!((psi - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn gaussian_envelope_matches_fourier_transform() {
        let sigma = 0.04;
        let c = gaussian_coeffs(sigma, 0.0, 201);
        let zg = Grid1D::spanning(-30.0, 30.0, 121).unwrap();
        let out = synthesize(&c, mass_shell, &zg, 0.0);
        for (z, psi) in zg.coords().zip(out) {
            let oracle = (2.0 * std::f64::consts::PI * sigma).sqrt() * (-sigma * z * z / 2.0).exp();
            assert!((psi.norm() - oracle).abs() < 1e-10, "z = {z}");
        }
    }

    #[test]
    fn parseval() {
        let sigma = 0.01;
        let c = gaussian_coeffs(sigma, 0.3, 201);
        let zg = Grid1D::spanning(-120.0, 120.0, 2001).unwrap();
        let out = synthesize(&c, mass_shell, &zg, 0.0);
        let dens: Vec<f64> = out.iter().map(|v| v.norm_sqr()).collect();
        let lhs = integrate_grid(&dens, &zg).unwrap();
        let rhs = 2.0 * std::f64::consts::PI * c.norm_sqr();
        assert!(((lhs - rhs) / rhs).abs() < 1e-6);
    }

    #[test]
    fn synthesis_is_linear() {
        let a = gaussian_coeffs(0.02, 0.0, 101);
        let b = a.scaled_by(|k| 1.0 + k);
        let sum = SpectralCoefficients::new(
            *a.kgrid(),
            a.values().iter().zip(b.values()).map(|(x, y)| x + y).collect(),
        )
        .unwrap();
        let zg = Grid1D::spanning(-20.0, 20.0, 81).unwrap();
        let (sa, sb, ss) = (
            synthesize(&a, mass_shell, &zg, 1.3),
            synthesize(&b, mass_shell, &zg, 1.3),
            synthesize(&sum, mass_shell, &zg, 1.3),
        );
        for i in 0..zg.count() {
            assert!((sa[i] + sb[i] - ss[i]).norm() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn integrate_grid_linear(a in -5.0f64..5.0, b in -5.0f64..5.0, n in 2usize..40) {
            let g = Grid1D::spanning(-1.0, 2.0, n).unwrap();
            let f = sample(&g, |x| x.sin());
            let h = sample(&g, |x| (0.5 * x).exp());
            let mix: Vec<f64> = f.iter().zip(&h).map(|(x, y)| a * x + b * y).collect();
            let lhs = integrate_grid(&mix, &g).unwrap();
            let rhs = a * integrate_grid(&f, &g).unwrap() + b * integrate_grid(&h, &g).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn integrate_grid_monotone(vals in proptest::collection::vec(0.0f64..10.0, 2..50), bump in 0.0f64..1.0) {
            let g = Grid1D::spanning(0.0, 1.0, vals.len()).unwrap();
            let base = integrate_grid(&vals, &g).unwrap();
            prop_assert!(base >= 0.0);
            let raised: Vec<f64> = vals.iter().map(|v| v + bump).collect();
            prop_assert!(integrate_grid(&raised, &g).unwrap() >= base);
        }
    }
}
