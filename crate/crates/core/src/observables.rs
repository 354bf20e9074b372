//! Moments, quadrature variances and photon statistics.
//!
//! Quadratures are `x = (â + â†)/√2` and `p = (â - â†)/(i√2)`, so the vacuum
//! has `Var(x) = Var(p) = 1/2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockState, NORM_TOL};
use crate::special::{hyper2f2_11mm, SERIES_TERM_CAP, SERIES_TOL};
use crate::states::{negative_m_norm, FamilyKind, Route, StateFamily};
use crate::truncation::{log_weight, TruncationPolicy};

/// Below this mean photon number the Mandel parameter is reported as undefined.
pub const Q_DENOMINATOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableReport {
    pub mean_a: Complex64,
    pub mean_a2: Complex64,
    pub mean_n: f64,
    pub mean_n2: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// `None` when `<n̂>` is too small to divide by.
    pub mandel_q: Option<f64>,
}

impl ObservableReport {
    /// Assemble the variances and `q` from the four raw moments.
    pub fn from_moments(mean_a: Complex64, mean_a2: Complex64, mean_n: f64, mean_n2: f64) -> Self {
        let var_x = 0.5 + mean_n + mean_a2.re - 2.0 * mean_a.re * mean_a.re;
        let var_p = 0.5 + mean_n - mean_a2.re - 2.0 * mean_a.im * mean_a.im;
        Self { mean_a, mean_a2, mean_n, mean_n2, var_x, var_p, mandel_q: q_from(mean_n, mean_n2) }
    }

    pub fn vacuum() -> Self {
        Self::from_moments(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0, 0.0)
    }

    /// Largest absolute difference over all fields; an undefined `q` on one side only counts as infinite.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let q = match (self.mandel_q, other.mandel_q) {
            (Some(a), Some(b)) => (a - b).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        };
        [
            (self.mean_a - other.mean_a).norm(),
            (self.mean_a2 - other.mean_a2).norm(),
            (self.mean_n - other.mean_n).abs(),
            (self.mean_n2 - other.mean_n2).abs(),
            (self.var_x - other.var_x).abs(),
            (self.var_p - other.var_p).abs(),
            q,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn q_from(mean_n: f64, mean_n2: f64) -> Option<f64> {
    (mean_n >= Q_DENOMINATOR_TOL).then(|| (mean_n2 - mean_n * mean_n - mean_n) / mean_n)
}

fn require_normalized(s: &FockState) -> Result<()> {
    let deviation = (s.norm_sqr() - 1.0).abs();
    if deviation > NORM_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    Ok(())
}

/// All moments of a normalized state vector.
pub fn moments(s: &FockState) -> Result<ObservableReport> {
    require_normalized(s)?;
    let c = s.amplitudes();
    let zero = Complex64::new(0.0, 0.0);
    let mut mean_a = zero;
    let mut mean_a2 = zero;
    let (mut mean_n, mut mean_n2) = (0.0, 0.0);
    for (n, cn) in c.iter().enumerate() {
        let nf = n as f64;
        if let Some(next) = c.get(n + 1) {
            mean_a += cn.conj() * next * (nf + 1.0).sqrt();
        }
        if let Some(next2) = c.get(n + 2) {
            mean_a2 += cn.conj() * next2 * ((nf + 1.0) * (nf + 2.0)).sqrt();
        }
        let p = cn.norm_sqr();
        mean_n += nf * p;
        mean_n2 += nf * nf * p;
    }
    Ok(ObservableReport::from_moments(mean_a, mean_a2, mean_n, mean_n2))
}

/// Moments of `|α,-m>` from the closed-form series, with no state vector.
///
/// With `w_n = (m!)^2 |α|^{2n} n!/((n+m)!)^2` and `F = sum w_n = 2F2(1,1;m+1,m+1;|α|^2)`:
/// `<â> = α sum w_n (n+1)/(n+m+1) / F`,
/// `<â²> = α² sum w_n (n+1)(n+2)/((n+m+1)(n+m+2)) / F`,
/// `<n̂^k> = sum n^k w_n / F`.
pub fn analytic_moments_negative_m(alpha: Complex64, m: u32) -> Result<ObservableReport> {
    if m == 0 {
        return Err(Error::InvalidParameter("the negative family needs m >= 1".into()));
    }
    let x = alpha.norm_sqr();
    if x == 0.0 {
        return Ok(ObservableReport::vacuum());
    }
    let norm = hyper2f2_11mm(m, x)?.value;
    let mf = f64::from(m);
    let (mut s_a, mut s_a2, mut s_n, mut s_n2) = (0.0, 0.0, 0.0, 0.0);
    let mut w = 1.0_f64;
    for n in 0..SERIES_TERM_CAP {
        let nf = n as f64;
        s_a += w * (nf + 1.0) / (nf + mf + 1.0);
        s_a2 += w * (nf + 1.0) * (nf + 2.0) / ((nf + mf + 1.0) * (nf + mf + 2.0));
        s_n += w * nf;
        s_n2 += w * nf * nf;
        let next = w * x * (nf + 1.0) / ((nf + mf + 1.0) * (nf + mf + 1.0));
        // n^2 w_n is the slowest term to die out
        if next < w && nf >= mf && w * nf * nf <= SERIES_TOL * s_n2 {
            return Ok(ObservableReport::from_moments(
                alpha * (s_a / norm),
                alpha * alpha * (s_a2 / norm),
                s_n / norm,
                s_n2 / norm,
            ));
        }
        w = next;
    }
    Err(Error::NotConverged { terms: SERIES_TERM_CAP })
}

/// `p(n) = |c_n|^2`.
pub fn photon_distribution(s: &FockState) -> Vec<f64> {
    s.probabilities()
}

/// Closed form `N^2 |α|^{2n} n! / ((n+m)!)^2` of `|<n|α,-m>|^2`.
pub fn negative_m_probability(alpha: Complex64, m: u32, n: usize) -> Result<f64> {
    let norm = negative_m_norm(alpha, m)?;
    Ok((2.0 * norm.ln() + log_weight(alpha.norm(), -i64::from(m), n)).exp())
}

/// Mandel `q = (<n̂²> - <n̂>² - <n̂>)/<n̂>`, or `None` near the vacuum.
pub fn mandel_q(s: &FockState) -> Result<Option<f64>> {
    Ok(moments(s)?.mandel_q)
}

/// A line of amplitudes `r e^{iφ}` for `r` from `min` to `max` in steps of `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
    pub phase: f64,
}

impl AlphaGrid {
    pub fn new(min: f64, max: f64, step: f64, phase: f64) -> Result<Self> {
        let grid = Self { min, max, step, phase };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.step.is_nan() || self.step <= 0.0 || self.step.is_infinite() {
            return Err(Error::InvalidParameter(format!("alpha step must be > 0, got {}", self.step)));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return Err(Error::InvalidParameter(format!("need alpha_min <= alpha_max, got {} > {}", self.min, self.max)));
        }
        if !self.phase.is_finite() {
            return Err(Error::InvalidParameter("alpha phase must be finite".into()));
        }
        Ok(())
    }

    /// Radii `min + i step`, computed by index so no rounding accumulates.
    pub fn radii(&self) -> Vec<f64> {
        let count = ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.min + i as f64 * self.step).collect()
    }

    pub fn alpha(&self, radius: f64) -> Complex64 {
        if self.phase == 0.0 {
            Complex64::new(radius, 0.0)
        } else {
            Complex64::from_polar(radius, self.phase)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceRow {
    pub m: u32,
    pub alpha: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub dim_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MandelRow {
    pub m: u32,
    pub abs_alpha: f64,
    pub mandel_q: Option<f64>,
    pub dim_used: usize,
}

fn effective_m_values(kind: FamilyKind, m_values: &[u32]) -> Result<Vec<u32>> {
    if kind == FamilyKind::Coherent {
        return Ok(vec![0]);
    }
    if m_values.is_empty() {
        return Err(Error::InvalidParameter("at least one m value is required".into()));
    }
    Ok(m_values.to_vec())
}

/// Build every grid point in parallel, keeping `(m, radius)` order; the first
/// failing point in that order is reported.
fn sweep<T: Send>(
    kind: FamilyKind,
    m_values: &[u32],
    grid: &AlphaGrid,
    policy: &TruncationPolicy,
    row: impl Fn(u32, f64, ObservableReport, usize) -> T + Sync,
) -> Result<Vec<T>> {
    grid.validate()?;
    policy.validate()?;
    let points: Vec<(u32, f64)> =
        effective_m_values(kind, m_values)?.into_iter().flat_map(|m| grid.radii().into_iter().map(move |r| (m, r))).collect();
    let results: Vec<Result<T>> = points
        .par_iter()
        .map(|&(m, r)| {
            let alpha = grid.alpha(r);
            let point = || -> Result<T> {
                let (state, dim) = StateFamily::new(kind, alpha, m)?.build_auto(Route::Series, policy)?;
                Ok(row(m, r, moments(&state)?, dim))
            };
            point().map_err(|e| Error::GridPoint { m, alpha: alpha.to_string(), source: Box::new(e) })
        })
        .collect();
    results.into_iter().collect()
}

/// `Var(x)` and `Var(p)` over `m_values × grid`; the coherent family ignores `m_values`.
pub fn variance_sweep(
    kind: FamilyKind,
    m_values: &[u32],
    grid: &AlphaGrid,
    policy: &TruncationPolicy,
) -> Result<Vec<VarianceRow>> {
    sweep(kind, m_values, grid, policy, |m, alpha, rep, dim_used| VarianceRow {
        m,
        alpha,
        var_x: rep.var_x,
        var_p: rep.var_p,
        dim_used,
    })
}

/// Mandel `q` over `m_values × grid`, keyed by `|α|`.
pub fn mandel_sweep(kind: FamilyKind, m_values: &[u32], grid: &AlphaGrid, policy: &TruncationPolicy) -> Result<Vec<MandelRow>> {
    sweep(kind, m_values, grid, policy, |m, r, rep, dim_used| MandelRow { m, abs_alpha: r.abs(), mandel_q: rep.mandel_q, dim_used })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{coherent, negative_m_series, photon_added_series};
    use proptest::prelude::*;

    fn strict() -> TruncationPolicy {
        TruncationPolicy::new(1e-20, 512).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn negative(a: Complex64, m: u32) -> FockState {
        StateFamily::negative(a, m).build_auto(Route::Series, &strict()).unwrap().0
    }

    fn added(a: Complex64, m: u32) -> FockState {
        StateFamily::photon_added(a, m).build_auto(Route::Series, &strict()).unwrap().0
    }

    #[test]
    fn vacuum_moments() {
        let r = moments(&FockState::basis(0, 6).unwrap()).unwrap();
        assert_eq!(r.mean_a, c(0.0, 0.0));
        assert_eq!((r.var_x, r.var_p), (0.5, 0.5));
        assert_eq!(r.mandel_q, None);
    }

    #[test]
    fn coherent_is_poissonian_and_unsqueezed() {
        for a in [c(1.7, 0.0), c(2.0, 0.0), c(-0.4, 1.1)] {
            let s = StateFamily::coherent(a).build_auto(Route::Series, &strict()).unwrap().0;
            let r = moments(&s).unwrap();
            assert!((r.mean_n - a.norm_sqr()).abs() < 1e-10);
            assert!(r.mandel_q.unwrap().abs() < 1e-9);
            assert!((r.var_x - 0.5).abs() < 1e-10 && (r.var_p - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn number_state_statistics() {
        for m in 1..8usize {
            let r = moments(&FockState::basis(m, 12).unwrap()).unwrap();
            assert!((r.var_p - (m as f64 + 0.5)).abs() < 1e-12);
            assert!((r.mandel_q.unwrap() + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_unnormalized() {
        let s = FockState::from_real(&[1.0, 1.0]).unwrap();
        assert!(matches!(moments(&s), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn analytic_matches_vector_moments() {
        assert_eq!(analytic_moments_negative_m(c(0.0, 0.0), 3).unwrap(), ObservableReport::vacuum());
        let d = analytic_moments_negative_m(c(1.0, 0.0), 1).unwrap().max_abs_diff(&moments(&negative(c(1.0, 0.0), 1)).unwrap());
        assert!(d < 1e-10, "{d}");
        let d = analytic_moments_negative_m(c(3.0, 0.0), 5).unwrap().max_abs_diff(&moments(&negative(c(3.0, 0.0), 5)).unwrap());
        assert!(d < 1e-9, "{d}");
        let a = c(0.8, -1.9);
        let d = analytic_moments_negative_m(a, 4).unwrap().max_abs_diff(&moments(&negative(a, 4)).unwrap());
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn negative_distribution_closed_form() {
        // m = 1, α = 1: p(n) ∝ 1/(n! (n+1)^2)
        let s = negative_m_series(c(1.0, 0.0), 1, 30, &strict()).unwrap();
        let raw: Vec<f64> = (0..30)
            .map(|n| {
                let fact: f64 = (1..=n).map(|k| k as f64).product();
                1.0 / (fact * ((n + 1) as f64).powi(2))
            })
            .collect();
        let total: f64 = raw.iter().sum();
        for (n, p) in photon_distribution(&s).iter().enumerate() {
            assert!((p - raw[n] / total).abs() < 1e-14);
            assert!((p - negative_m_probability(c(1.0, 0.0), 1, n).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_distribution_is_poisson() {
        let s = coherent(c(1.5, 0.0), 40, &strict()).unwrap();
        let mut poisson = (-2.25f64).exp();
        for (n, p) in photon_distribution(&s).iter().enumerate() {
            if n > 0 {
                poisson *= 2.25 / n as f64;
            }
            assert!((p - poisson).abs() < 1e-14);
        }
    }

    #[test]
    fn photon_added_is_sub_poissonian() {
        let s = photon_added_series(c(1.0, 0.0), 1, 40, &strict()).unwrap();
        assert!(mandel_q(&s).unwrap().unwrap() < 0.0);
    }

    #[test]
    fn grid_radii() {
        let g = AlphaGrid::new(0.0, 4.0, 0.05, 0.0).unwrap();
        let r = g.radii();
        assert_eq!(r.len(), 81);
        assert_eq!(r[80], 4.0);
        assert_eq!(AlphaGrid::new(1.0, 1.0, 0.5, 0.0).unwrap().radii(), vec![1.0]);
        assert!(AlphaGrid::new(1.0, 0.0, 0.5, 0.0).is_err());
        assert!(AlphaGrid::new(0.0, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn sweeps_keep_grid_order() {
        let g = AlphaGrid::new(0.0, 1.0, 0.25, 0.0).unwrap();
        let rows = variance_sweep(FamilyKind::NegativeM, &[5, 1], &g, &strict()).unwrap();
        let keys: Vec<(u32, f64)> = rows.iter().map(|r| (r.m, r.alpha)).collect();
        let expected: Vec<(u32, f64)> = [5, 1].iter().flat_map(|&m| g.radii().into_iter().map(move |r| (m, r))).collect();
        assert_eq!(keys, expected);
        let coherent_rows = mandel_sweep(FamilyKind::Coherent, &[3, 4], &g, &strict()).unwrap();
        assert!(coherent_rows.iter().all(|r| r.m == 0));
        assert_eq!(coherent_rows.len(), 5);
    }

    #[test]
    fn sweep_names_failing_point() {
        let g = AlphaGrid::new(0.0, 30.0, 10.0, 0.0).unwrap();
        let tight = TruncationPolicy::new(1e-12, 64).unwrap();
        match variance_sweep(FamilyKind::NegativeM, &[1], &g, &tight) {
            Err(Error::GridPoint { m: 1, alpha, .. }) => assert!(alpha.starts_with("10")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_family_is_squeezed_and_super_poissonian_at_moderate_alpha() {
        for m in [1u32, 5, 10] {
            for i in 1..=40 {
                let r = moments(&negative(c(0.1 * f64::from(i), 0.0), m)).unwrap();
                assert!(r.var_p < 0.5, "m={m} alpha={}", 0.1 * f64::from(i));
                assert!(r.mandel_q.unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn imaginary_alpha_swaps_quadratures() {
        for m in [1u32, 5] {
            for r in [0.3, 1.2, 2.5] {
                let real = moments(&negative(c(r, 0.0), m)).unwrap();
                let imag = moments(&negative(c(0.0, r), m)).unwrap();
                assert!((real.var_p - imag.var_x).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn photon_added_sub_poissonian_on_grid() {
        for m in [1u32, 2, 5] {
            for i in 1..=8 {
                let q = moments(&added(c(0.5 * f64::from(i), 0.0), m)).unwrap().mandel_q.unwrap();
                assert!(q < 0.0, "m={m} i={i}: {q}");
            }
        }
    }

    proptest! {
        #[test]
        fn quadrature_identities(re in -2.5f64..2.5, im in -2.5f64..2.5, m in 0u32..6, negative_family in any::<bool>()) {
            let a = c(re, im);
            let s = if negative_family { negative(a, m) } else { added(a, m) };
            let r = moments(&s).unwrap();
            let sum = 1.0 + 2.0 * r.mean_n - 2.0 * r.mean_a.norm_sqr();
            prop_assert!((r.var_x + r.var_p - sum).abs() < 1e-10 * sum.max(1.0));
            prop_assert!(r.var_x * r.var_p >= 0.25 - 1e-10);
            prop_assert!(r.mean_n2 >= r.mean_n * r.mean_n - 1e-10 * r.mean_n2.max(1.0));
        }
    }
}
