//! The deformed annihilator `Â = f(n̂, m) â` with `f(n̂, m) = 1 - m/(1+n̂)`.
//!
//! A positive `m` gives the operator whose eigenstates are the photon-added
//! states `|α,m>`; a negative `m` gives `(1 + |m|/(1+n̂)) â`, whose eigenstates
//! are `|α,-|m|>`. Besides applying `Â` and `Â†`, this module finds the number
//! states `Â` annihilates, builds the sectors generated from them by `Â†`,
//! and synthesizes the raising operator `Ĝ†` with `[Â, Ĝ†] = 1` on a sector.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DiagonalOperator, FockState, RaisingOperator, Truncated};
use crate::states::coherent;
use crate::truncation::{choose_dim, TruncationPolicy};

/// `f(n, m) = 1 - m/(1+n)`.
pub fn deformation(m: i64, n: usize) -> f64 {
    1.0 - m as f64 / (1.0 + n as f64)
}

/// `f(n̂, m)` as a diagonal operator on `dim` levels.
pub fn f_weight(m: i64, dim: usize) -> Result<DiagonalOperator> {
    DiagonalOperator::from_fn(dim, |n| deformation(m, n))
}

/// `‖g(n̂) â ψ - α ψ‖` for an arbitrary diagonal `g`.
pub fn eigen_residual_with(weights: &DiagonalOperator, state: &FockState, alpha: Complex64) -> Result<f64> {
    let lowered = weights.apply(&state.annihilate())?;
    lowered.distance(&state.scale(alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeformedAnnihilator {
    m: i64,
}

/// Number states reachable from `seed` by repeated `Â†`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sector {
    pub seed: usize,
    pub members: Vec<usize>,
    /// `Â†` annihilated the top member before the truncation edge was reached.
    pub finite: bool,
}

impl DeformedAnnihilator {
    pub fn new(m: i64) -> Self {
        Self { m }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn weights(&self, dim: usize) -> Result<DiagonalOperator> {
        f_weight(self.m, dim)
    }

    /// `Â ψ = f(n̂) (â ψ)`: the diagonal acts after lowering.
    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        self.weights(state.dim())?.apply(&state.annihilate())
    }

    /// `Â† ψ = â† (f(n̂) ψ)`.
    pub fn apply_adjoint(&self, state: &FockState) -> Result<Truncated> {
        Ok(self.weights(state.dim())?.apply(state)?.create())
    }

    /// `‖Â ψ - α ψ‖`.
    pub fn eigen_residual(&self, state: &FockState, alpha: Complex64) -> Result<f64> {
        eigen_residual_with(&self.weights(state.dim())?, state, alpha)
    }

    /// Every `n < dim` with `Â |n> = 0`.
    pub fn annihilated_states(&self, dim: usize) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for n in 0..dim {
            if self.apply(&FockState::basis(n, dim)?)?.is_zero() {
                out.push(n);
            }
        }
        Ok(out)
    }

    /// Apply `Â†` to the top member until it is annihilated or the truncation edge is hit.
    pub fn sector(&self, seed: usize, dim: usize) -> Result<Sector> {
        let mut members = vec![seed];
        let mut top = FockState::basis(seed, dim)?;
        loop {
            let current = *members.last().unwrap();
            if current + 1 >= dim {
                return Ok(Sector { seed, members, finite: false });
            }
            let raised = self.apply_adjoint(&top)?.state;
            if raised.is_zero() {
                return Ok(Sector { seed, members, finite: true });
            }
            members.push(current + 1);
            top = FockState::basis(current + 1, dim)?;
        }
    }

    /// `Ĝ†_j = (1/p) Â_p† (Â_p Â_p†)^{-1} (n̂ + p - j)` for `Â_p = f(n̂) â^p`.
    ///
    /// `Â_p Â_p†` is diagonal with eigenvalue `f(n)^2 (n+1)...(n+p)`, so its
    /// inverse is taken entrywise. A zero eigenvalue on the sector
    /// `{j, j+p, ...}` is an error; elsewhere the coefficient is set to zero.
    pub fn g_dagger(&self, p: usize, j: usize, dim: usize) -> Result<RaisingOperator> {
        if p == 0 {
            return Err(Error::InvalidParameter("p must be >= 1".into()));
        }
        let coeffs = (0..dim)
            .map(|n| {
                let f = deformation(self.m, n);
                let rising: f64 = (1..=p).map(|i| (n + i) as f64).product();
                let eig = f * f * rising;
                if eig == 0.0 {
                    let in_sector = n >= j && (n - j).is_multiple_of(p) && n + p < dim;
                    return if in_sector { Err(Error::ZeroEigenvalue { n }) } else { Ok(Complex64::new(0.0, 0.0)) };
                }
                let shift = (n + p) as f64 - j as f64;
                Ok(Complex64::new(shift / (p as f64 * eig) * f * rising.sqrt(), 0.0))
            })
            .collect::<Result<Vec<_>>>()?;
        RaisingOperator::new(p, coeffs)
    }

    /// `‖(Â Ĝ† - Ĝ† Â - 1)|n>‖` for a single basis state.
    pub fn commutator_residual_at(&self, gdag: &RaisingOperator, n: usize) -> Result<f64> {
        let ket = FockState::basis(n, gdag.dim())?;
        let forward = self.apply(&gdag.apply(&ket)?.state)?;
        let backward = gdag.apply(&self.apply(&ket)?)?.state;
        forward.sub(&backward)?.distance(&ket)
    }

    /// Largest commutator residual over an infinite sector, with `Ĝ†` built at
    /// `p = 1, j = seed`. The top two levels of the space are skipped because
    /// `â†` loses amplitude there.
    pub fn commutator_residual(&self, sector: &Sector, dim: usize) -> Result<f64> {
        if sector.finite {
            return Err(Error::InvalidParameter(format!(
                "sector seeded at {} is finite; the commutator is only defined on infinite sectors",
                sector.seed
            )));
        }
        let gdag = self.g_dagger(1, sector.seed, dim)?;
        let mut worst: f64 = 0.0;
        for &n in sector.members.iter().filter(|&&n| n + 2 < dim) {
            worst = worst.max(self.commutator_residual_at(&gdag, n)?);
        }
        Ok(worst)
    }
}

/// Largest `‖(1+n̂)^{-1} â â† |n> - |n>‖` below the truncation edge.
pub fn derivation_identity_residual(dim: usize) -> Result<f64> {
    let inverse = DiagonalOperator::from_fn(dim, |n| 1.0 / (1.0 + n as f64))?;
    let mut worst: f64 = 0.0;
    for n in 0..dim.saturating_sub(1) {
        let ket = FockState::basis(n, dim)?;
        let out = inverse.apply(&ket.create().state.annihilate())?;
        worst = worst.max(out.distance(&ket)?);
    }
    Ok(worst)
}

/// Relative mismatch between `(â â†^m - m â†^{m-1}) |α>` and `â†^m â |α>`.
pub fn rearrangement_residual(alpha: Complex64, m: u32, policy: &TruncationPolicy) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("the rearrangement needs m >= 1".into()));
    }
    let dim = choose_dim(alpha, 0, policy)? + m as usize + 1;
    let psi = coherent(alpha, dim, policy)?;
    let raise = |s: &FockState, times: u32| (0..times).fold(s.clone(), |acc, _| acc.create().state);
    let lowered = raise(&psi, m).annihilate();
    let lhs = lowered.sub(&raise(&psi, m - 1).scale(Complex64::new(f64::from(m), 0.0)))?;
    let rhs = raise(&psi.annihilate(), m);
    // the top level of `â â†^m` would need amplitude from above the edge
    let lhs = lhs.truncate(dim - 1)?.state;
    let rhs = rhs.truncate(dim - 1)?.state;
    // both sides vanish at α = 0, so measure against the uncancelled term
    let scale = lowered.norm().max(f64::MIN_POSITIVE);
    Ok(lhs.distance(&rhs)? / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn f_weight_examples() {
        let id = f_weight(0, 5).unwrap();
        assert!(id.weights().iter().all(|w| *w == Complex64::new(1.0, 0.0)));
        let one = f_weight(1, 5).unwrap();
        assert_eq!(one.weight(0).re, 0.0);
        assert_eq!(one.weight(1).re, 0.5);
        let neg = f_weight(-2, 5).unwrap();
        assert_eq!(neg.weight(0).re, 3.0);
        assert_eq!(neg.weight(1).re, 2.0);
    }

    #[test]
    fn apply_examples() {
        for m in [-3i64, 0, 1, 4] {
            assert!(DeformedAnnihilator::new(m).apply(&FockState::basis(0, 8).unwrap()).unwrap().is_zero());
        }
        for m in 1..6i64 {
            let ket = FockState::basis(m as usize, 10).unwrap();
            assert!(DeformedAnnihilator::new(m).apply(&ket).unwrap().is_zero());
        }
        let out = DeformedAnnihilator::new(2).apply(&FockState::basis(1, 4).unwrap()).unwrap();
        assert_eq!(out, FockState::basis(0, 4).unwrap().scale(Complex64::new(-1.0, 0.0)));
    }

    #[test]
    fn adjoint_examples() {
        for m in 1..6i64 {
            let ket = FockState::basis(m as usize - 1, 10).unwrap();
            assert!(DeformedAnnihilator::new(m).apply_adjoint(&ket).unwrap().state.is_zero());
        }
        let out = DeformedAnnihilator::new(0).apply_adjoint(&FockState::basis(0, 3).unwrap()).unwrap();
        assert_eq!(out.state, FockState::basis(1, 3).unwrap());
    }

    #[test]
    fn annihilated_state_sets() {
        assert_eq!(DeformedAnnihilator::new(3).annihilated_states(16).unwrap(), vec![0, 3]);
        assert_eq!(DeformedAnnihilator::new(0).annihilated_states(16).unwrap(), vec![0]);
        assert_eq!(DeformedAnnihilator::new(-2).annihilated_states(16).unwrap(), vec![0]);
        for m in 1..=10 {
            assert_eq!(DeformedAnnihilator::new(m).annihilated_states(64).unwrap(), vec![0, m as usize]);
        }
    }

    #[test]
    fn sectors() {
        let s0 = DeformedAnnihilator::new(4).sector(0, 20).unwrap();
        assert_eq!(s0.members, vec![0, 1, 2, 3]);
        assert!(s0.finite);
        let s4 = DeformedAnnihilator::new(4).sector(4, 20).unwrap();
        assert_eq!(s4.members, (4..20).collect::<Vec<_>>());
        assert!(!s4.finite);
        let plain = DeformedAnnihilator::new(0).sector(0, 12).unwrap();
        assert!(!plain.finite);
        assert_eq!(plain.members.len(), 12);
    }

    #[test]
    fn g_dagger_reduces_to_creation_on_upper_sector() {
        let dim = 30;
        for m in 1..=6i64 {
            let g = DeformedAnnihilator::new(m).g_dagger(1, m as usize, dim).unwrap();
            for n in m as usize..dim {
                let expected = ((n + 1) as f64).sqrt();
                assert!((g.coeff(n).re - expected).abs() < 1e-12 * expected, "m={m} n={n}");
            }
        }
        let g = DeformedAnnihilator::new(0).g_dagger(1, 0, dim).unwrap();
        assert_eq!(g, RaisingOperator::creation(dim).unwrap());
    }

    #[test]
    fn g_dagger_for_negative_order() {
        let (big_m, dim) = (3u32, 25);
        let g = DeformedAnnihilator::new(-i64::from(big_m)).g_dagger(1, 0, dim).unwrap();
        let expected = crate::states::negative_m_g_dagger(big_m, dim).unwrap();
        for n in 0..dim {
            assert!((g.coeff(n) - expected.coeff(n)).norm() < 1e-13 * expected.coeff(n).norm());
        }
    }

    #[test]
    fn g_dagger_rejects_zero_eigenvalue_in_sector() {
        match DeformedAnnihilator::new(3).g_dagger(1, 0, 20) {
            Err(Error::ZeroEigenvalue { n: 2 }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn g_dagger_second_order_smoke() {
        // Â = â^2 (m = 0, p = 2) on the even sector of j = 0
        let a = DeformedAnnihilator::new(0);
        let g = a.g_dagger(2, 0, 24).unwrap();
        assert_eq!(g.step(), 2);
        for n in (0..20).step_by(2) {
            let ket = FockState::basis(n, 24).unwrap();
            let lower2 = |s: &FockState| s.annihilate().annihilate();
            let forward = lower2(&g.apply(&ket).unwrap().state);
            let backward = g.apply(&lower2(&ket)).unwrap().state;
            assert!(forward.sub(&backward).unwrap().distance(&ket).unwrap() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn commutator_on_sectors() {
        for m in 1..=10i64 {
            let a = DeformedAnnihilator::new(m);
            let sector = a.sector(m as usize, 64).unwrap();
            assert!(a.commutator_residual(&sector, 64).unwrap() < 1e-12);
        }
        let plain = DeformedAnnihilator::new(0);
        let s0 = plain.sector(0, 40).unwrap();
        assert!(plain.commutator_residual(&s0, 40).unwrap() < 1e-12);

        // outside the sector the identity need not hold: at |0> of S_0 with
        // m = 3 and Ĝ† = â†, the commutator gives 1 - m instead of 1
        let a = DeformedAnnihilator::new(3);
        let g = RaisingOperator::creation(20).unwrap();
        assert!((a.commutator_residual_at(&g, 0).unwrap() - 3.0).abs() < 1e-12);
        assert!(a.commutator_residual(&a.sector(0, 20).unwrap(), 20).is_err());
    }

    #[test]
    fn derivation_identity_holds() {
        assert!(derivation_identity_residual(200).unwrap() < 1e-13);
    }

    #[test]
    fn rearrangement_identity_holds() {
        let policy = TruncationPolicy::new(1e-20, 512).unwrap();
        for &a in &[0.0, 0.3, 1.0, 2.5] {
            for m in [1u32, 2, 5] {
                let alpha = Complex64::new(a, 0.4 * a);
                assert!(rearrangement_residual(alpha, m, &policy).unwrap() < 1e-10);
            }
        }
    }

    fn state_strategy(dim: usize) -> impl Strategy<Value = FockState> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
            .prop_map(|v| FockState::new(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn adjoint_consistency(m in -8i64..8, x in state_strategy(14), y in state_strategy(14)) {
            let a = DeformedAnnihilator::new(m);
            let lhs = a.apply(&x).unwrap().inner(&y).unwrap();
            let rhs = x.inner(&a.apply_adjoint(&y).unwrap().state).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
    }
}
