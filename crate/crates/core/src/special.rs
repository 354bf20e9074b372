//! Special functions used by the state normalizations.
//!
//! Only what the coefficient formulas need: `ln n!`, the Laguerre polynomial
//! `L_m(x)` as a finite sum, and the series `2F2(1, 1; m+1, m+1; x)` for real
//! nonnegative `x`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Relative size of the last accepted term at which a series is considered summed.
pub const SERIES_TOL: f64 = 1e-16;

/// Hard cap on the number of series terms.
pub const SERIES_TERM_CAP: usize = 10_000;

const LOG_FACTORIAL_TABLE_LEN: usize = 4096;

fn log_factorial_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(LOG_FACTORIAL_TABLE_LEN);
        let mut acc = 0.0_f64;
        table.push(0.0);
        for k in 1..LOG_FACTORIAL_TABLE_LEN {
            acc += (k as f64).ln();
            table.push(acc);
        }
        table
    })
}

/// `ln(n!)`, from a cached cumulative table; past the table the sum is continued.
pub fn log_factorial(n: usize) -> f64 {
    let table = log_factorial_table();
    if n < table.len() {
        return table[n];
    }
    let last = table.len() - 1;
    let mut acc = table[last];
    for k in (last + 1)..=n {
        acc += (k as f64).ln();
    }
    acc
}

/// Laguerre polynomial `L_m(x) = sum_{n=0}^{m} (-x)^n m! / ((n!)^2 (m-n)!)`.
///
/// Summed with the term ratio `t_{n+1}/t_n = -x (m-n) / (n+1)^2`. For `x < 0`
/// every term is positive.
pub fn laguerre(m: u32, x: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..m {
        let n = f64::from(n);
        term *= -x * (f64::from(m) - n) / ((n + 1.0) * (n + 1.0));
        sum += term;
    }
    sum
}

/// Outcome of summing a positive-term series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub converged: bool,
}

/// `2F2(1, 1; m+1, m+1; x) = (m!)^2 sum_n x^n n! / ((n+m)!)^2` for `x >= 0`.
///
/// Terms follow `t_{n+1} = t_n x (n+1) / (n+m+1)^2` starting from `t_0 = 1`.
/// Summation stops once the terms are decreasing and the last one is below
/// `SERIES_TOL` relative to the partial sum.
pub fn hyper2f2_11mm(m: u32, x: f64) -> Result<SeriesResult> {
    hyper2f2_11mm_capped(m, x, SERIES_TERM_CAP)
}

pub fn hyper2f2_11mm_capped(m: u32, x: f64, cap: usize) -> Result<SeriesResult> {
    if m == 0 {
        return Err(Error::InvalidParameter("2F2(1,1;m+1,m+1;x) needs m >= 1".into()));
    }
    if x.is_nan() || x < 0.0 || x.is_infinite() {
        return Err(Error::InvalidParameter(format!("2F2 argument must be finite and >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(SeriesResult { value: 1.0, terms_used: 1, converged: true });
    }
    let m = f64::from(m);
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..cap {
        let nf = n as f64;
        let next = term * x * (nf + 1.0) / ((nf + m + 1.0) * (nf + m + 1.0));
        sum += next;
        if !sum.is_finite() {
            break;
        }
        // The term ratio x (n+1)/(n+m+1)^2 can exceed one again after an
        // initial decrease (it peaks at n = m - 1), so only stop past that point.
        if next < term && nf + 1.0 >= m && next <= SERIES_TOL * sum {
            return Ok(SeriesResult { value: sum, terms_used: n + 2, converged: true });
        }
        term = next;
    }
    Err(Error::NotConverged { terms: cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact rational evaluation of the finite Laguerre sum for integer x.
    fn laguerre_rational(m: u64, x: i64) -> (i128, i128) {
        let fact = |k: u64| (1..=k).fold(1i128, |a, b| a * b as i128);
        let gcd = |mut a: i128, mut b: i128| {
            a = a.abs();
            b = b.abs();
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a
        };
        let (mut num, mut den) = (0i128, 1i128);
        for n in 0..=m {
            let tn = (-x as i128).pow(n as u32) * fact(m);
            let td = fact(n) * fact(n) * fact(m - n);
            num = num * td + tn * den;
            den *= td;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
        (num, den)
    }

    #[test]
    fn log_factorial_small_values() {
        assert_eq!(log_factorial(0), 0.0);
        assert_eq!(log_factorial(1), 0.0);
        assert!((log_factorial(10) - 3_628_800f64.ln()).abs() < 1e-12 * 3_628_800f64.ln());
    }

    #[test]
    fn log_factorial_matches_stirling_series() {
        for &n in &[200usize, 1000, 4095, 4096, 5000, 20_000] {
            let x = n as f64;
            let stirling = x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + 1.0 / (12.0 * x)
                - 1.0 / (360.0 * x.powi(3))
                + 1.0 / (1260.0 * x.powi(5));
            let got = log_factorial(n);
            assert!(((got - stirling) / stirling).abs() < 1e-12, "n={n}: {got} vs {stirling}");
        }
    }

    #[test]
    fn laguerre_low_orders() {
        for &x in &[-3.0, 0.0, 0.7, 12.0] {
            assert_eq!(laguerre(0, x), 1.0);
        }
        assert_eq!(laguerre(1, -1.0), 2.0);
        let (num, den) = laguerre_rational(3, -4);
        assert_eq!((num, den), (143, 3));
        assert!((laguerre(3, -4.0) - num as f64 / den as f64).abs() < 1e-13);
    }

    #[test]
    fn laguerre_matches_rational_oracle() {
        for m in 0..=12u32 {
            for x in [-6i64, -1, 0, 2, 5] {
                let (num, den) = laguerre_rational(u64::from(m), x);
                let exact = num as f64 / den as f64;
                let got = laguerre(m, x as f64);
                assert!((got - exact).abs() <= 1e-11 * exact.abs().max(1.0), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn laguerre_at_origin_is_one() {
        for m in 0..100 {
            assert_eq!(laguerre(m, 0.0), 1.0);
        }
    }

    #[test]
    fn laguerre_three_term_recurrence() {
        for &x in &[-50.0, -13.5, -1.0, -0.01] {
            for m in 1..50u32 {
                let mf = f64::from(m);
                let lhs = (mf + 1.0) * laguerre(m + 1, x);
                let rhs = (2.0 * mf + 1.0 - x) * laguerre(m, x) - mf * laguerre(m - 1, x);
                assert!(((lhs - rhs) / lhs).abs() < 1e-10, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn hyper2f2_at_origin() {
        let r = hyper2f2_11mm(1, 0.0).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.converged);
    }

    #[test]
    fn hyper2f2_matches_direct_summation() {
        // 200 terms of n! (2!)^2 / ((n+2)!)^2 = 4 / ((n+1)(n+2) (n+2)!)
        let mut oracle = 0.0;
        for n in 0..200u32 {
            let big: f64 = (1..=n + 2).map(f64::from).product();
            oracle += 4.0 / (f64::from(n + 1) * f64::from(n + 2) * big);
        }
        let got = hyper2f2_11mm(2, 1.0).unwrap();
        assert!(((got.value - oracle) / oracle).abs() < 1e-15);
        // high-precision reference
        assert!((got.value - 1.126_872_686_163_819).abs() < 1e-14);
    }

    #[test]
    fn hyper2f2_gives_normalization_norm() {
        // (1/m!) sqrt(2F2) equals the norm of the unnormalized coefficient vector
        // alpha^n sqrt(n!)/(n+m)! built independently by term ratio at D=256.
        let (m, alpha) = (3u32, 1.5f64);
        let mut c = 1.0 / 6.0;
        let mut norm2 = c * c;
        for n in 0..255 {
            c *= alpha * f64::from(n + 1).sqrt() / f64::from(n + m + 1);
            norm2 += c * c;
        }
        let f = hyper2f2_11mm(m, alpha * alpha).unwrap().value;
        let lhs = f.sqrt() / 6.0;
        assert!(((lhs - norm2.sqrt()) / lhs).abs() < 1e-12);
        assert!((lhs - 0.180_411_475_370_996_97).abs() < 1e-14);
    }

    #[test]
    fn hyper2f2_bimodal_terms_are_not_cut_early() {
        let r = hyper2f2_11mm(10, 16.0).unwrap();
        assert!((r.value - 1.174_253_033_479_451_3).abs() < 1e-14);
        // m=10, x=100: terms shrink at first, then grow past one before decaying
        let r = hyper2f2_11mm(10, 100.0).unwrap();
        assert!((r.value / 109_539_800_227_891_377.489_9 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyper2f2_monotone_and_at_least_one() {
        for m in 1..8 {
            let mut prev = 0.0;
            for k in 0..60 {
                let v = hyper2f2_11mm(m, 0.5 * f64::from(k)).unwrap().value;
                assert!(v >= 1.0);
                assert!(v >= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn hyper2f2_reports_non_convergence() {
        assert!(matches!(hyper2f2_11mm_capped(1, 1e6, 50), Err(Error::NotConverged { terms: 50 })));
        assert!(hyper2f2_11mm(0, 1.0).is_err());
        assert!(hyper2f2_11mm(1, -1.0).is_err());
    }
}
