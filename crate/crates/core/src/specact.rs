//! Spectral action on discrete flat tori `(ℤ/Nℤ)^d` of signature `(t, s)`.
//!
//! The Laplacian is `Δ_N = Σ_time D² − Σ_space D²` with `D² = (C − 2)/a²`
//! on each circle, `C` the adjacency matrix (`C_ij = 1` iff `i ≡ j ± 1 mod N`).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest eigenvalue grid the direct path will enumerate.
pub const GRID_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusSpec {
    pub d: usize,
    pub t: usize,
    pub s: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub a: f64,
}

impl TorusSpec {
    pub fn new(t: usize, s: usize, n: usize, a: f64) -> Result<Self> {
        let d = t + s;
        if d == 0 {
            return Err(Error::InvalidInput("torus dimension must be at least 1".into()));
        }
        if n < 2 {
            return Err(Error::InvalidInput(format!("need at least 2 points per circle (got {n})")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidInput(format!("lattice spacing must be positive (got {a})")));
        }
        Ok(Self { d, t, s, n, a })
    }

    /// Spec with `N = round(L / a)` points.
    pub fn with_length(t: usize, s: usize, length: f64, a: f64) -> Result<Self> {
        let n = (length / a).round();
        if !(n >= 2.0) {
            return Err(Error::InvalidInput(format!("L/a = {} leaves fewer than 2 points", length / a)));
        }
        Self::new(t, s, n as usize, a)
    }

    pub fn length(&self) -> f64 {
        self.n as f64 * self.a
    }

    pub fn grid_points(&self) -> u128 {
        (self.n as u128).saturating_pow(self.d as u32)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CutoffFn {
    /// `f(u) = exp(−u²)`.
    Gaussian,
    /// `f(u) = exp(−u)`.
    Exp,
    /// Linear interpolation of samples, zero outside their range.
    Sampled { u: Vec<f64>, f: Vec<f64> },
}

impl CutoffFn {
    pub fn eval(&self, u: f64) -> f64 {
        match self {
            CutoffFn::Gaussian => (-u * u).exp(),
            CutoffFn::Exp => (-u).exp(),
            CutoffFn::Sampled { u: xs, f: ys } => {
                if xs.is_empty() || u < xs[0] || u > xs[xs.len() - 1] {
                    return 0.0;
                }
                let k = xs.partition_point(|&x| x <= u).min(xs.len() - 1).max(1);
                let (x0, x1) = (xs[k - 1], xs[k]);
                if x1 == x0 {
                    return ys[k];
                }
                ys[k - 1] + (ys[k] - ys[k - 1]) * (u - x0) / (x1 - x0)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let CutoffFn::Sampled { u, f } = self {
            if u.len() != f.len() || u.len() < 2 {
                return Err(Error::InvalidInput("sampled cutoff needs matching u/f lists of length >= 2".into()));
            }
            if u.windows(2).any(|w| !(w[1] >= w[0])) || f.iter().chain(u).any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("sampled cutoff abscissae must be finite and sorted".into()));
            }
        }
        Ok(())
    }

    /// `h` with `f(u) = ∫ h(k) e^{iku} dk`, when known in closed form.
    fn fourier(&self) -> Option<fn(f64) -> f64> {
        match self {
            CutoffFn::Gaussian => Some(|k: f64| (-k * k / 4.0).exp() / (2.0 * std::f64::consts::PI.sqrt())),
            _ => None,
        }
    }
}

/// `cos(2πk/N)` with `c_{k+N/2} = −c_k` exact for even `N`.
fn circle_cosines(n: usize) -> Vec<f64> {
    let base = |k: usize| {
        let m = k.min(n - k);
        (2.0 * std::f64::consts::PI * m as f64 / n as f64).cos()
    };
    if n % 2 == 0 {
        let half = n / 2;
        let mut c: Vec<f64> = (0..half).map(base).collect();
        let tail: Vec<f64> = c.iter().map(|v| -v).collect();
        c.extend(tail);
        c
    } else {
        (0..n).map(base).collect()
    }
}

/// Eigenvalues of `D² = (C − 2)/a²`, ascending.
pub fn circle_spectrum(n: usize, a: f64) -> Vec<f64> {
    let inv = 1.0 / (a * a);
    let mut ev: Vec<f64> = if n == 2 {
        // Both neighbour conditions name the same entry, so C = σ_x.
        vec![-3.0 * inv, -inv]
    } else {
        circle_cosines(n).iter().map(|c| (2.0 * c - 2.0) * inv).collect()
    };
    ev.sort_by(f64::total_cmp);
    ev
}

/// `log Σ_k exp(θ λ_k)` without overflow.
fn log_sum_exp(eigs: &[f64], theta: Complex64) -> Complex64 {
    let m = eigs.iter().map(|&l| theta.re * l).fold(f64::NEG_INFINITY, f64::max);
    let sum: Complex64 = eigs.iter().map(|&l| (theta * l - m).exp()).sum();
    sum.ln() + m
}

/// `log Tr e^{θΔ_N}` (principal branch per factor, summed).
pub fn log_heat_trace(spec: &TorusSpec, theta: Complex64) -> Complex64 {
    let eigs = circle_spectrum(spec.n, spec.a);
    log_sum_exp(&eigs, theta) * spec.t as f64 + log_sum_exp(&eigs, -theta) * spec.s as f64
}

pub fn heat_trace(spec: &TorusSpec, theta: Complex64) -> Complex64 {
    if theta == Complex64::new(0.0, 0.0) {
        return Complex64::new((spec.n as f64).powi(spec.d as i32), 0.0);
    }
    log_heat_trace(spec, theta).exp()
}

/// Relative defect of `Tr e^{θΔ_N} = e^{−4tθ/a²} Tr e^{θΔ_NE}`.
pub fn shift_identity_residual(spec: &TorusSpec, theta: Complex64) -> f64 {
    let euclid = TorusSpec { t: 0, s: spec.d, ..*spec };
    let lhs = log_heat_trace(spec, theta);
    let rhs = log_heat_trace(&euclid, theta) - theta * (4.0 * spec.t as f64 / (spec.a * spec.a));
    ((rhs - lhs).exp() - 1.0).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalPath {
    Auto,
    Grid,
    Fourier,
}

/// Arguments `u = −λ/Λ²` for one time circle and `+λ/Λ²` for one space circle.
fn action_arguments(spec: &TorusSpec, lambda: f64) -> (Vec<f64>, Vec<f64>) {
    let eigs = circle_spectrum(spec.n, spec.a);
    let l2 = lambda * lambda;
    (eigs.iter().map(|e| -e / l2).collect(), eigs.iter().map(|e| e / l2).collect())
}

fn grid_sum(factors: &[&[f64]], f: &CutoffFn) -> f64 {
    fn rec(factors: &[&[f64]], acc: f64, f: &CutoffFn) -> f64 {
        match factors.split_first() {
            None => f.eval(acc),
            Some((head, rest)) => head.iter().map(|&u| rec(rest, acc + u, f)).sum(),
        }
    }
    let (head, rest) = factors.split_first().expect("at least one circle");
    head.par_iter().map(|&u| rec(rest, u, f)).sum()
}

/// `Tr f(−Δ_N/Λ²)` by summing over the full eigenvalue grid.
pub fn spectral_action_grid(spec: &TorusSpec, f: &CutoffFn, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    f.validate()?;
    let points = spec.grid_points();
    if points > GRID_LIMIT {
        return Err(Error::GridTooLarge { points, limit: GRID_LIMIT });
    }
    let (time, space) = action_arguments(spec, lambda);
    let mut factors: Vec<&[f64]> = vec![&time; spec.t];
    factors.extend(std::iter::repeat_n(space.as_slice(), spec.s));
    Ok(grid_sum(&factors, f))
}

/// `∫ h(k) Tr e^{−ikΔ_N/Λ²} dk` by the trapezoid rule on a band-limited grid.
pub fn spectral_action_fourier(spec: &TorusSpec, f: &CutoffFn, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let h = f.fourier().ok_or_else(|| Error::InvalidInput("cutoff has no closed-form Fourier transform".into()))?;
    let omega_max = 4.0 * spec.d as f64 / (spec.a * spec.a * lambda * lambda);
    // Aliases sit at least 2(ω_max + 8) away, where the Gaussian is below e^{-256}.
    let step = std::f64::consts::PI / (omega_max + 8.0);
    const K_MAX: f64 = 14.0;
    let count = (K_MAX / step).ceil() as i64;
    let l2 = lambda * lambda;
    let total: f64 = (-count..=count)
        .into_par_iter()
        .map(|j| {
            let k = j as f64 * step;
            (heat_trace(spec, Complex64::new(0.0, -k / l2)) * h(k)).re
        })
        .sum();
    Ok(total * step)
}

pub fn spectral_action(spec: &TorusSpec, f: &CutoffFn, lambda: f64, path: EvalPath) -> Result<f64> {
    match path {
        EvalPath::Grid => spectral_action_grid(spec, f, lambda),
        EvalPath::Fourier => spectral_action_fourier(spec, f, lambda),
        EvalPath::Auto => {
            if spec.grid_points() <= GRID_LIMIT {
                spectral_action_grid(spec, f, lambda)
            } else if f.fourier().is_some() {
                spectral_action_fourier(spec, f, lambda)
            } else {
                Err(Error::GridTooLarge { points: spec.grid_points(), limit: GRID_LIMIT })
            }
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("cutoff scale must be positive (got {lambda})")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatKernelCheck {
    pub ratio: f64,
    /// `a ≪ √|θ| ≪ L` by a factor of ten on each side.
    pub regime_ok: bool,
}

/// `Tr e^{θΔ_NE} / (L/√(4π|θ|))^d` for a Euclidean torus and `θ < 0`.
pub fn heat_kernel_limit_check(spec: &TorusSpec, theta: f64) -> Result<HeatKernelCheck> {
    if spec.t != 0 {
        return Err(Error::InvalidInput("heat-kernel limit needs a Euclidean torus (t = 0)".into()));
    }
    if !(theta < 0.0) {
        return Err(Error::InvalidInput("heat-kernel limit needs theta < 0".into()));
    }
    let root = theta.abs().sqrt();
    let log_trace = log_heat_trace(spec, Complex64::new(theta, 0.0)).re;
    let log_limit = spec.d as f64 * (spec.length() / (4.0 * std::f64::consts::PI * theta.abs()).sqrt()).ln();
    let regime_ok = spec.a * 10.0 <= root && root * 10.0 <= spec.length();
    Ok(HeatKernelCheck { ratio: (log_trace - log_limit).exp(), regime_ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub a: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    #[serde(rename = "S")]
    pub action: f64,
    #[serde(rename = "logS")]
    pub log_action: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergenceFit {
    pub slope: f64,
    pub intercept: f64,
    pub points: Vec<ScanPoint>,
}

/// Evaluates the action along `a_values` at fixed `L = base.N · base.a` and
/// fits `log S` against `log(1/a)` over the three smallest spacings.
pub fn divergence_exponent(
    base: &TorusSpec,
    a_values: &[f64],
    f: &CutoffFn,
    lambda: f64,
    path: EvalPath,
) -> Result<DivergenceFit> {
    if a_values.len() < 3 {
        return Err(Error::InvalidInput(format!("need at least 3 lattice spacings (got {})", a_values.len())));
    }
    let length = base.length();
    let points = a_values
        .iter()
        .map(|&a| {
            let spec = TorusSpec::with_length(base.t, base.s, length, a)?;
            let action = spectral_action(&spec, f, lambda, path)?;
            Ok(ScanPoint { a, n: spec.n, lambda, action, log_action: action.ln() })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut by_a: Vec<&ScanPoint> = points.iter().collect();
    by_a.sort_by(|x, y| x.a.total_cmp(&y.a));
    let fit: Vec<(f64, f64)> = by_a[..3].iter().map(|p| ((1.0 / p.a).ln(), p.log_action)).collect();
    let (slope, intercept) = least_squares(&fit);
    Ok(DivergenceFit { slope, intercept, points })
}

fn least_squares(xy: &[(f64, f64)]) -> (f64, f64) {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, eye, kron, CMat};
    use crate::testkit::rng;
    use proptest::prelude::*;
    use rand::Rng;

    fn dense_d2(n: usize, a: f64) -> CMat {
        let mut c = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if (i + 1) % n == j || (j + 1) % n == i {
                    c[(i, j)] = linalg::ONE;
                }
            }
        }
        (c - eye(n).scale(2.0)).scale(1.0 / (a * a))
    }

    fn dense_laplacian(spec: &TorusSpec) -> CMat {
        let n = spec.n;
        let d2 = dense_d2(n, spec.a);
        let size = n.pow(spec.d as u32);
        let mut out = CMat::zeros(size, size);
        for axis in 0..spec.d {
            let mut term = eye(1);
            for k in 0..spec.d {
                let factor = if k == axis { d2.clone() } else { eye(n) };
                term = kron(&term, &factor);
            }
            let sign = if axis < spec.t { 1.0 } else { -1.0 };
            out += term.scale(sign);
        }
        out
    }

    fn sorted_dense_eigs(m: &CMat) -> Vec<f64> {
        let (mut ev, _) = linalg::hermitian_eigen(m);
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn circle_spectrum_examples() {
        assert_eq!(circle_spectrum(2, 1.0), vec![-3.0, -1.0]);
        let four = circle_spectrum(4, 1.0);
        for (x, y) in four.iter().zip([-4.0, -2.0, -2.0, 0.0]) {
            assert!((x - y).abs() < 1e-14);
        }
        for n in [2usize, 3, 5, 8, 13] {
            let dense = sorted_dense_eigs(&dense_d2(n, 0.5));
            let fast = circle_spectrum(n, 0.5);
            for (x, y) in dense.iter().zip(&fast) {
                assert!((x - y).abs() < 1e-12, "N={n}");
            }
            let trace: f64 = fast.iter().sum();
            assert!((trace + 2.0 * n as f64 / 0.25).abs() < 1e-10);
        }
        assert!(circle_spectrum(7, 1.0).last().unwrap().abs() < 1e-15);
    }

    #[test]
    fn heat_trace_basics() {
        let spec = TorusSpec::new(1, 2, 6, 0.5).unwrap();
        assert_eq!(heat_trace(&spec, Complex64::new(0.0, 0.0)).re, 216.0);
        let e = TorusSpec::new(0, 2, 8, 0.3).unwrap();
        let mut prev = f64::INFINITY;
        for th in [-0.01, -0.05, -0.1, -0.5] {
            let v = heat_trace(&e, Complex64::new(th, 0.0));
            assert!(v.im.abs() < 1e-9 * v.re && v.re > 0.0 && v.re < prev);
            prev = v.re;
        }
        let bal = TorusSpec::new(2, 2, 6, 0.7).unwrap();
        for k in [0.1, 1.0, 7.0] {
            assert!(heat_trace(&bal, Complex64::new(0.0, k)).norm() <= 6f64.powi(4) * (1.0 + 1e-12));
            let p = heat_trace(&bal, Complex64::new(k / 10.0, 0.0)) * heat_trace(&bal, Complex64::new(-k / 10.0, 0.0));
            assert!(p.im.abs() <= 1e-9 * p.re.abs() && p.re >= 0.0);
        }
    }

    #[test]
    fn shift_identity_examples() {
        let e = TorusSpec::new(0, 3, 8, 0.4).unwrap();
        assert_eq!(shift_identity_residual(&e, Complex64::new(-0.3, 0.2)), 0.0);
        let s = TorusSpec::new(1, 1, 8, 1.0).unwrap();
        assert!(shift_identity_residual(&s, Complex64::new(-0.1, 0.0)) <= 1e-12);
        let s = TorusSpec::new(1, 3, 16, 1.0).unwrap();
        assert!(shift_identity_residual(&s, Complex64::new(0.0, 0.05)) <= 1e-10);
        // N = 2 uses the literal adjacency, which still pairs λ with −λ − 4/a².
        let s = TorusSpec::new(2, 1, 2, 0.5).unwrap();
        assert!(shift_identity_residual(&s, Complex64::new(0.2, -0.4)) <= 1e-12);
    }

    #[test]
    fn odd_circles_break_the_shift_identity() {
        let s = TorusSpec::new(1, 1, 3, 1.0).unwrap();
        let r = shift_identity_residual(&s, Complex64::new(-0.5, 0.0));
        assert!(r > 1e-3, "{r}");
    }

    #[test]
    fn grid_matches_dense_functional_calculus() {
        let cases = [
            (TorusSpec::new(1, 1, 8, 0.3).unwrap(), 3.0),
            (TorusSpec::new(0, 2, 6, 0.5).unwrap(), 2.0),
            (TorusSpec::new(1, 2, 5, 0.2).unwrap(), 7.0),
            (TorusSpec::new(2, 2, 4, 1.0).unwrap(), 1.5),
        ];
        for (spec, lambda) in cases {
            let ev = sorted_dense_eigs(&dense_laplacian(&spec));
            let oracle: f64 = ev.iter().map(|&x| CutoffFn::Gaussian.eval(-x / (lambda * lambda))).sum();
            let grid = spectral_action_grid(&spec, &CutoffFn::Gaussian, lambda).unwrap();
            assert!((grid - oracle).abs() <= 1e-9 * oracle.abs(), "{spec:?}");
        }
    }

    #[test]
    fn fourier_path_agrees_with_grid() {
        let spec = TorusSpec::with_length(1, 1, 1.0, 1.0 / 16.0).unwrap();
        let g = spectral_action_grid(&spec, &CutoffFn::Gaussian, 10.0).unwrap();
        let f = spectral_action_fourier(&spec, &CutoffFn::Gaussian, 10.0).unwrap();
        assert!((g - f).abs() <= 1e-6 * g, "{g} {f}");
        let spec = TorusSpec::with_length(1, 3, 1.0, 1.0 / 8.0).unwrap();
        let g = spectral_action_grid(&spec, &CutoffFn::Gaussian, 20.0).unwrap();
        let f = spectral_action_fourier(&spec, &CutoffFn::Gaussian, 20.0).unwrap();
        assert!((g - f).abs() <= 1e-6 * g, "{g} {f}");
    }

    #[test]
    fn large_cutoff_counts_points() {
        let spec = TorusSpec::new(0, 2, 10, 1.0).unwrap();
        let s = spectral_action(&spec, &CutoffFn::Gaussian, 1e4, EvalPath::Auto).unwrap();
        assert!((s - 100.0).abs() < 1e-6);
    }

    #[test]
    fn exp_cutoff_is_a_heat_trace() {
        let spec = TorusSpec::new(0, 2, 6, 0.5).unwrap();
        let lambda = 3.0;
        let s = spectral_action_grid(&spec, &CutoffFn::Exp, lambda).unwrap();
        let h = heat_trace(&spec, Complex64::new(1.0 / (lambda * lambda), 0.0));
        assert!((s - h.re).abs() <= 1e-10 * s);
    }

    #[test]
    fn sampled_cutoff_interpolates() {
        let f = CutoffFn::Sampled { u: vec![-1.0, 0.0, 1.0], f: vec![0.0, 1.0, 0.0] };
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(2.0), 0.0);
        let big = TorusSpec::new(0, 4, 100, 1.0).unwrap();
        assert!(matches!(spectral_action(&big, &f, 1.0, EvalPath::Auto), Err(Error::GridTooLarge { .. })));
    }

    #[test]
    fn heat_kernel_limit() {
        for d in [1usize, 2] {
            let spec = TorusSpec::new(0, d, 512, 1.0 / 512.0).unwrap();
            let c = heat_kernel_limit_check(&spec, -1e-3).unwrap();
            assert!(c.regime_ok && (c.ratio - 1.0).abs() < 0.01, "d={d} {c:?}");
        }
        let spec = TorusSpec::new(0, 1, 512, 1.0 / 512.0).unwrap();
        let broken = heat_kernel_limit_check(&spec, -10.0).unwrap();
        assert!(!broken.regime_ok && (broken.ratio - 1.0).abs() > 0.1);
    }

    #[test]
    fn riemannian_action_converges() {
        let base = TorusSpec::with_length(0, 2, 1.0, 1.0 / 16.0).unwrap();
        let fit = divergence_exponent(&base, &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0], &CutoffFn::Gaussian, 20.0, EvalPath::Auto)
            .unwrap();
        assert!(fit.slope.abs() < 0.05, "{}", fit.slope);
        assert!(divergence_exponent(&base, &[0.1, 0.2], &CutoffFn::Gaussian, 1.0, EvalPath::Auto).is_err());
    }

    #[test]
    fn lorentzian_action_grows() {
        let base = TorusSpec::with_length(1, 1, 1.0, 1.0 / 16.0).unwrap();
        let fit = divergence_exponent(&base, &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0], &CutoffFn::Gaussian, 20.0, EvalPath::Auto)
            .unwrap();
        assert!(fit.slope > 0.3, "{}", fit.slope);
    }

    #[test]
    fn shift_identity_random_sweep() {
        let mut r = rng(77);
        for _ in 0..50 {
            let t = r.random_range(0..3);
            let s = r.random_range(0..3) + usize::from(t == 0);
            let n = 2 * r.random_range(1..=16);
            let a = r.random_range(0.1..1.0);
            let theta = Complex64::from_polar(r.random_range(0.0..1.0), r.random_range(0.0..std::f64::consts::TAU));
            let spec = TorusSpec::new(t, s, n, a).unwrap();
            assert!(shift_identity_residual(&spec, theta) <= 1e-10, "{spec:?} {theta}");
        }
    }

    proptest! {
        #[test]
        fn spectrum_is_bounded(n in 2usize..64, a in 0.05f64..2.0) {
            let ev = circle_spectrum(n, a);
            prop_assert!(ev.iter().all(|&x| x <= 1e-12 && x >= -4.0 / (a * a) - 1e-9));
            prop_assert_eq!(ev.len(), n);
        }

        #[test]
        fn heat_trace_is_multiplicative_in_dimension(t in 0usize..3, s in 1usize..3, half in 1usize..10, re in -0.5f64..0.5, im in -1.0f64..1.0) {
            let th = Complex64::new(re, im);
            let full = TorusSpec::new(t, s, 2 * half, 0.7).unwrap();
            let time = TorusSpec::new(1, 0, 2 * half, 0.7).unwrap();
            let space = TorusSpec::new(0, 1, 2 * half, 0.7).unwrap();
            let prod = heat_trace(&time, th).powu(t as u32) * heat_trace(&space, th).powu(s as u32);
            let direct = heat_trace(&full, th);
            prop_assert!((prod - direct).norm() <= 1e-9 * direct.norm().max(1e-300));
        }
    }
}
