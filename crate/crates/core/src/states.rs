//! Constructors for the coherent, photon-added and negative-order families.
//!
//! Each family has more than one construction route and the routes are kept
//! independent of each other, so that agreement between them means something:
//!
//! | family                | routes                                                        |
//! |-----------------------|---------------------------------------------------------------|
//! | coherent `|α>`        | series                                                        |
//! | photon-added `|α,m>`  | number-state series, `â†^m |α>`, `e^{α â†} |m>`                 |
//! | negative `|α,-m>`     | number-state series, `â†^{-m} â^{-m} |α>`, `e^{α Ĝ†} |0>`       |
//!
//! The normalization is always recomputed from the truncated coefficient
//! vector. The closed forms ([`photon_added_norm`], [`negative_m_norm`]) are
//! only used to cross-check it.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{DiagonalOperator, FockState, RaisingOperator};
use crate::special::{hyper2f2_11mm, laguerre, log_factorial, SERIES_TOL};
use crate::truncation::{choose_dim, log_weight, tail_mass, TruncationPolicy};

/// Taylor terms allowed when exponentiating a raising operator.
pub const EXP_TERM_CAP: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    #[serde(rename = "coherent")]
    Coherent,
    #[serde(rename = "added", alias = "photon_added")]
    PhotonAdded,
    #[serde(rename = "negative", alias = "negative_m")]
    NegativeM,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Coherent => "coherent",
            FamilyKind::PhotonAdded => "added",
            FamilyKind::NegativeM => "negative",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(FamilyKind::Coherent),
            "added" | "photon_added" => Ok(FamilyKind::PhotonAdded),
            "negative" | "negative_m" => Ok(FamilyKind::NegativeM),
            other => Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// Closed-form number-state expansion.
    Series,
    /// `â†^m` applied to `|α>`.
    Creation,
    /// `â†^{-m} â^{-m}` applied to `|α>`.
    InverseLadder,
    /// Taylor series of a deformed exponential acting on the seed number state.
    Exponential,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Route::Series => "series",
            Route::Creation => "creation",
            Route::InverseLadder => "inverse_ladder",
            Route::Exponential => "exponential",
        })
    }
}

/// A point of one of the three families: `|α>`, `|α,m>` or `|α,-m>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateFamily {
    kind: FamilyKind,
    alpha: Complex64,
    m: u32,
}

impl StateFamily {
    pub fn new(kind: FamilyKind, alpha: Complex64, m: u32) -> Result<Self> {
        if kind == FamilyKind::Coherent && m != 0 {
            return Err(Error::InvalidParameter("the coherent family has m = 0".into()));
        }
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { kind, alpha, m })
    }

    pub fn coherent(alpha: Complex64) -> Self {
        Self { kind: FamilyKind::Coherent, alpha, m: 0 }
    }

    pub fn photon_added(alpha: Complex64, m: u32) -> Self {
        Self { kind: FamilyKind::PhotonAdded, alpha, m }
    }

    pub fn negative(alpha: Complex64, m: u32) -> Self {
        Self { kind: FamilyKind::NegativeM, alpha, m }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The order as used by the deformation `1 - m/(1+n̂)`: negative for `|α,-m>`.
    pub fn signed_order(&self) -> i64 {
        match self.kind {
            FamilyKind::Coherent => 0,
            FamilyKind::PhotonAdded => i64::from(self.m),
            FamilyKind::NegativeM => -i64::from(self.m),
        }
    }

    pub fn routes(&self) -> &'static [Route] {
        match self.kind {
            FamilyKind::Coherent => &[Route::Series],
            FamilyKind::PhotonAdded => &[Route::Series, Route::Creation, Route::Exponential],
            FamilyKind::NegativeM => &[Route::Series, Route::InverseLadder, Route::Exponential],
        }
    }

    pub fn choose_dim(&self, policy: &TruncationPolicy) -> Result<usize> {
        choose_dim(self.alpha, self.signed_order(), policy)
    }

    pub fn build(&self, route: Route, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
        let (alpha, m) = (self.alpha, self.m);
        match (self.kind, route) {
            (FamilyKind::Coherent, Route::Series) => coherent(alpha, dim, policy),
            (FamilyKind::PhotonAdded, Route::Series) => photon_added_series(alpha, m, dim, policy),
            (FamilyKind::PhotonAdded, Route::Creation) => photon_added_operator(alpha, m, dim, policy),
            (FamilyKind::PhotonAdded, Route::Exponential) => photon_added_exponential(alpha, m, dim, policy),
            (FamilyKind::NegativeM, Route::Series) => negative_m_series(alpha, m, dim, policy),
            (FamilyKind::NegativeM, Route::InverseLadder) => negative_m_inverse_ops(alpha, m, dim, policy),
            (FamilyKind::NegativeM, Route::Exponential) => negative_m_exponential(alpha, m, dim, policy),
            (kind, route) => Err(Error::InvalidParameter(format!("route {route} does not build the {kind} family"))),
        }
    }

    /// Build with the dimension picked by [`choose_dim`]; returns the state and that dimension.
    pub fn build_auto(&self, route: Route, policy: &TruncationPolicy) -> Result<(FockState, usize)> {
        let dim = self.choose_dim(policy)?;
        Ok((self.build(route, dim, policy)?, dim))
    }
}

fn check_tail(alpha: Complex64, order: i64, dim: usize, policy: &TruncationPolicy) -> Result<()> {
    policy.validate()?;
    if dim == 0 {
        return Err(Error::EmptyState);
    }
    let tail = tail_mass(alpha, order, dim);
    if tail > policy.tail_tol {
        return Err(Error::InsufficientDimension { dim, tail, tol: policy.tail_tol });
    }
    Ok(())
}

/// Number-state expansion of the family with signed order `order`, normalized numerically.
fn series_state(alpha: Complex64, order: i64, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
    check_tail(alpha, order, dim, policy)?;
    let abs = alpha.norm();
    let phase = alpha.arg();
    let shift = if order > 0 { order as usize } else { 0 };
    let logs: Vec<f64> = (0..dim).map(|k| log_weight(abs, order, k)).collect();
    let peak = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let amps = logs
        .iter()
        .enumerate()
        .map(|(k, &l)| {
            if l == f64::NEG_INFINITY {
                Complex64::new(0.0, 0.0)
            } else {
                // alpha^power with power = k - m above the photon-added gap
                let power = (k - shift) as f64;
                Complex64::from_polar((0.5 * (l - peak)).exp(), power * phase)
            }
        })
        .collect();
    FockState::new(amps)?.normalize()
}

/// `|α>` with `c_n ∝ α^n / sqrt(n!)`.
pub fn coherent(alpha: Complex64, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
    series_state(alpha, 0, dim, policy)
}

/// `|α,m>` from its number-state expansion; levels below `m` are exactly zero.
pub fn photon_added_series(alpha: Complex64, m: u32, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
    series_state(alpha, i64::from(m), dim, policy)
}

/// `|α,m> ∝ â†^m |α>`.
pub fn photon_added_operator(alpha: Complex64, m: u32, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
    if dim <= m as usize {
        return Err(Error::InsufficientDimension { dim, tail: 1.0, tol: policy.tail_tol });
    }
    let mut state = coherent(alpha, dim, policy)?;
    let mut loss = 0.0;
    for _ in 0..m {
        let raised = state.create();
        loss += raised.relative_loss();
        state = raised.state;
    }
    if loss > policy.tail_tol {
        return Err(Error::TruncationLoss { loss, tol: policy.tail_tol });
    }
    state.normalize()
}

/// `|α,m> ∝ e^{α â†} |m>`.
pub fn photon_added_exponential(alpha: Complex64, m: u32, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
    if dim <= m as usize {
        return Err(Error::InsufficientDimension { dim, tail: 1.0, tol: policy.tail_tol });
    }
    deformed_exponential(&RaisingOperator::creation(dim)?, m as usize, alpha, policy)
}

/// `|α,-m>` with `c_n ∝ α^n sqrt(n!) / (n+m)!`.
pub fn negative_m_series(alpha: Complex64, m: u32, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
    series_state(alpha, -i64::from(m), dim, policy)
}

/// `|α,-m> ∝ â†^{-m} â^{-m} |α>`.
///
/// The coherent state is prepared in a working space that holds its own tail
/// plus the `m`-level upward shift, then the result is cut back to `dim`.
pub fn negative_m_inverse_ops(alpha: Complex64, m: u32, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
    check_tail(alpha, -i64::from(m), dim, policy)?;
    let work = dim.max(choose_dim(alpha, 0, policy)?) + m as usize;
    let mut state = coherent(alpha, work, policy)?;
    let mut loss = 0.0;
    for _ in 0..m {
        let raised = state.annihilate_inverse();
        loss += raised.relative_loss();
        state = raised.state;
    }
    for _ in 0..m {
        state = state.create_inverse();
    }
    if loss > policy.tail_tol {
        return Err(Error::TruncationLoss { loss, tol: policy.tail_tol });
    }
    let cut = state.truncate(dim)?;
    let tail = cut.relative_loss();
    if tail > policy.tail_tol {
        return Err(Error::InsufficientDimension { dim, tail, tol: policy.tail_tol });
    }
    cut.state.normalize()
}

/// `Ĝ† = â† (1+n̂)/(1+m+n̂)`, the diagonal factor taken at the occupation before raising.
pub fn negative_m_g_dagger(m: u32, dim: usize) -> Result<RaisingOperator> {
    let m = f64::from(m);
    let diag = DiagonalOperator::from_fn(dim, |n| {
        let n = n as f64;
        (1.0 + n) / (1.0 + m + n)
    })?;
    RaisingOperator::creation_after(&diag)
}

/// `|α,-m> ∝ e^{α Ĝ†} |0>`.
pub fn negative_m_exponential(alpha: Complex64, m: u32, dim: usize, policy: &TruncationPolicy) -> Result<FockState> {
    check_tail(alpha, -i64::from(m), dim, policy)?;
    deformed_exponential(&negative_m_g_dagger(m, dim)?, 0, alpha, policy)
}

/// `e^{α Ĝ†} |seed>` by Taylor series, normalized.
///
/// Terms are generated as `t_k = (α/k) Ĝ† t_{k-1}` until a term is negligible
/// against the partial sum. Amplitude pushed past the top level counts as
/// truncation loss.
pub fn deformed_exponential(
    gdag: &RaisingOperator,
    seed: usize,
    alpha: Complex64,
    policy: &TruncationPolicy,
) -> Result<FockState> {
    policy.validate()?;
    let dim = gdag.dim();
    let mut term = FockState::basis(seed, dim)?;
    let mut sum = term.clone();
    let mut loss = 0.0;
    let mut converged = false;
    for k in 1..=EXP_TERM_CAP {
        let raised = gdag.apply(&term.scale(alpha / k as f64))?;
        loss += raised.loss;
        term = raised.state;
        if term.is_zero() {
            converged = true;
            break;
        }
        sum = sum.add(&term)?;
        if term.norm() <= SERIES_TOL * sum.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged { terms: EXP_TERM_CAP });
    }
    let relative = loss / (sum.norm_sqr() + loss);
    if relative > policy.tail_tol {
        return Err(Error::TruncationLoss { loss: relative, tol: policy.tail_tol });
    }
    sum.normalize()
}

/// Closed-form normalization `exp(-|α|^2/2) / sqrt(L_m(-|α|^2) m!)` of the
/// expansion `sum_n α^n sqrt((m+n)!)/n! |n+m>`.
pub fn photon_added_norm(alpha: Complex64, m: u32) -> f64 {
    let x = alpha.norm_sqr();
    (-0.5 * x).exp() / (laguerre(m, -x) * log_factorial(m as usize).exp()).sqrt()
}

/// Closed-form normalization `N = m! / sqrt(2F2(1,1;m+1,m+1;|α|^2))` of the
/// expansion `sum_n α^n sqrt(n!)/(n+m)! |n>`.
pub fn negative_m_norm(alpha: Complex64, m: u32) -> Result<f64> {
    if m == 0 {
        return Ok((-0.5 * alpha.norm_sqr()).exp());
    }
    let series = hyper2f2_11mm(m, alpha.norm_sqr())?;
    Ok(log_factorial(m as usize).exp() / series.value.sqrt())
}

/// Unnormalized coefficient `α^n sqrt(n!) / (n+m)!` of `|α,-m>`.
pub fn negative_m_raw_coefficient(alpha: Complex64, m: u32, n: usize) -> Complex64 {
    let log_mag = 0.5 * log_factorial(n) - log_factorial(n + m as usize);
    if n == 0 {
        return Complex64::new(log_mag.exp(), 0.0);
    }
    if alpha.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar((n as f64 * alpha.norm().ln() + log_mag).exp(), n as f64 * alpha.arg())
}
