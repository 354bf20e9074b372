//! Truncated Fock-space vectors and the handful of operators acting on them.
//!
//! A [`FockState`] holds amplitudes `c_0 .. c_{D-1}` over the number states
//! `|0>, ..., |D-1>`. Every operator here is a single linear pass: the ladder
//! operators, their inverses, functions of the number operator
//! ([`DiagonalOperator`]) and generalized raising operators
//! ([`RaisingOperator`]). Operators that push amplitude above `|D-1>` drop it
//! and report the dropped squared magnitude in a [`Truncated`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default tolerance for calling a state normalized.
pub const NORM_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    amps: Vec<Complex64>,
}

/// Result of an operator that can push amplitude past the truncation edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub state: FockState,
    /// Squared magnitude of the amplitude that would have landed on `|D>` or above.
    pub loss: f64,
}

impl Truncated {
    /// Dropped mass as a fraction of the total (kept plus dropped).
    pub fn relative_loss(&self) -> f64 {
        let total = self.state.norm_sqr() + self.loss;
        if total > 0.0 {
            self.loss / total
        } else {
            0.0
        }
    }
}

impl FockState {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self { amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![ZERO; dim])
    }

    /// The number state `|n>` in a space of dimension `dim`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::OutOfRange { n, dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[n] = ONE;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or(ZERO)
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|c| *c == ZERO)
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { amps: self.amps.iter().map(|c| c * factor).collect() }
    }

    /// `|n>` probabilities `|c_n|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    /// `â`: `c'_n = sqrt(n+1) c_{n+1}`, top level left empty.
    pub fn annihilate(&self) -> Self {
        let dim = self.dim();
        let mut out = vec![ZERO; dim];
        for (n, slot) in out.iter_mut().take(dim - 1).enumerate() {
            *slot = self.amps[n + 1] * ((n + 1) as f64).sqrt();
        }
        Self { amps: out }
    }

    /// `â†`: `c'_{n+1} = sqrt(n+1) c_n`.
    pub fn create(&self) -> Truncated {
        self.raise_by_one(|n| ((n + 1) as f64).sqrt())
    }

    /// `â^{-1}|n> = |n+1> / sqrt(n+1)`.
    pub fn annihilate_inverse(&self) -> Truncated {
        self.raise_by_one(|n| 1.0 / ((n + 1) as f64).sqrt())
    }

    /// `â†^{-1}|n> = |n-1> / sqrt(n)` for `n >= 1`, and `â†^{-1}|0> = 0`.
    pub fn create_inverse(&self) -> Self {
        let dim = self.dim();
        let mut out = vec![ZERO; dim];
        for n in 1..dim {
            out[n - 1] = self.amps[n] / (n as f64).sqrt();
        }
        Self { amps: out }
    }

    fn raise_by_one(&self, coeff: impl Fn(usize) -> f64) -> Truncated {
        let dim = self.dim();
        let mut out = vec![ZERO; dim];
        for n in 0..dim - 1 {
            out[n + 1] = self.amps[n] * coeff(n);
        }
        let loss = (self.amps[dim - 1] * coeff(dim - 1)).norm_sqr();
        Truncated { state: Self { amps: out }, loss }
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_dim(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `‖self - other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect() })
    }

    /// Keep the first `dim` levels; the dropped mass is reported as loss.
    pub fn truncate(&self, dim: usize) -> Result<Truncated> {
        if dim == 0 {
            return Err(Error::EmptyState);
        }
        let keep = dim.min(self.dim());
        let mut amps = self.amps[..keep].to_vec();
        amps.resize(dim, ZERO);
        let loss = self.amps[keep..].iter().map(|c| c.norm_sqr()).sum();
        Ok(Truncated { state: Self { amps }, loss })
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }
}

/// `|<a|b>|^2 / (<a|a><b|b>)`.
pub fn fidelity(a: &FockState, b: &FockState) -> Result<f64> {
    let overlap = a.inner(b)?.norm_sqr();
    let denom = a.norm_sqr() * b.norm_sqr();
    if denom == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(overlap / denom)
}

/// A function of the number operator, stored as one weight per level.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator {
    weights: Vec<Complex64>,
}

impl DiagonalOperator {
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyState);
        }
        Ok(Self { weights })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize) -> f64) -> Result<Self> {
        Self::new((0..dim).map(|n| Complex64::new(f(n), 0.0)).collect())
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |_| 1.0)
    }

    /// `n̂ = â†â`.
    pub fn number(dim: usize) -> Result<Self> {
        Self::from_fn(dim, |n| n as f64)
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, n: usize) -> Complex64 {
        self.weights[n]
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: state.dim() });
        }
        Ok(FockState { amps: state.amps.iter().zip(&self.weights).map(|(c, w)| c * w).collect() })
    }
}

/// `|n> -> coeff(n) |n + step>`: â† composed with any function of n̂,
/// or more generally `â†^p` times a diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RaisingOperator {
    step: usize,
    coeffs: Vec<Complex64>,
}

impl RaisingOperator {
    pub fn new(step: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyState);
        }
        if step == 0 {
            return Err(Error::InvalidParameter("raising operator step must be >= 1".into()));
        }
        Ok(Self { step, coeffs })
    }

    /// Plain `â†` on a space of dimension `dim`.
    pub fn creation(dim: usize) -> Result<Self> {
        Self::new(1, (0..dim).map(|n| Complex64::new(((n + 1) as f64).sqrt(), 0.0)).collect())
    }

    /// `â† g(n̂)`: the diagonal is evaluated at the occupation before raising.
    pub fn creation_after(diag: &DiagonalOperator) -> Result<Self> {
        Self::new(
            1,
            diag.weights.iter().enumerate().map(|(n, w)| w * ((n + 1) as f64).sqrt()).collect(),
        )
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs[n]
    }

    pub fn apply(&self, state: &FockState) -> Result<Truncated> {
        let dim = self.dim();
        if dim != state.dim() {
            return Err(Error::DimensionMismatch { left: dim, right: state.dim() });
        }
        let mut out = vec![ZERO; dim];
        let mut loss = 0.0;
        for (n, c) in state.amps.iter().enumerate() {
            let v = c * self.coeffs[n];
            if n + self.step < dim {
                out[n + self.step] = v;
            } else {
                loss += v.norm_sqr();
            }
        }
        Ok(Truncated { state: FockState { amps: out }, loss })
    }
}
