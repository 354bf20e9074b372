//! The invariant suite run by `nlcs verify`.
//!
//! Every check records its measured residual next to the tolerance it was
//! held to, so a failing run shows by how much it missed.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::{fidelity, DiagonalOperator, FockState};
use crate::observables::{analytic_moments_negative_m, moments};
use crate::operators::{deformation, derivation_identity_residual, eigen_residual_with, rearrangement_residual, DeformedAnnihilator};
use crate::states::{negative_m_norm, negative_m_raw_coefficient, photon_added_norm, FamilyKind, StateFamily};
use crate::truncation::TruncationPolicy;

/// Tail tolerance used for verification. The eigenvalue residual picks up
/// `|α| |c_{D-1}|` at the truncation edge, so the tail has to be far below
/// the residual tolerance squared.
pub const STRICT_TAIL_TOL: f64 = 1e-24;

pub const EIGEN_TOL: f64 = 1e-8;
pub const FIDELITY_TOL: f64 = 1e-10;
pub const COMMUTATOR_TOL: f64 = 1e-12;
pub const MOMENT_TOL: f64 = 1e-9;
pub const NORM_RATIO_TOL: f64 = 1e-10;
pub const HEISENBERG_TOL: f64 = 1e-10;
/// Amplitude used for the small-α limit checks.
pub const LIMIT_ALPHA: f64 = 1e-6;

const SECTOR_DIM: usize = 64;

pub fn strict_policy() -> TruncationPolicy {
    TruncationPolicy { tail_tol: STRICT_TAIL_TOL, max_dim: 512 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyGrid {
    pub alphas: Vec<f64>,
    pub m_values: Vec<u32>,
    /// Phase applied to every grid amplitude.
    pub phase: f64,
    pub policy: TruncationPolicy,
    /// Added to every `f(n, m)` weight before the eigenvalue check; nonzero
    /// values must make that check fail.
    pub weight_perturbation: f64,
}

impl Default for VerifyGrid {
    fn default() -> Self {
        Self {
            alphas: vec![0.5, 1.0, 2.0, 4.0],
            m_values: vec![1, 2, 5, 10],
            phase: 0.0,
            policy: strict_policy(),
            weight_perturbation: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn below(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(Check { name: name.into(), pass: residual < tolerance, residual, tolerance });
    }

    /// Records a construction failure as a failed check instead of aborting the suite.
    fn measure(&mut self, name: impl Into<String>, tolerance: f64, f: impl FnOnce() -> Result<f64>) {
        let name = name.into();
        match f() {
            Ok(r) => self.below(name, r, tolerance),
            Err(e) => {
                self.checks.push(Check { name: format!("{name} [{e}]"), pass: false, residual: f64::INFINITY, tolerance })
            }
        }
    }

    fn flag(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push(Check { name: name.into(), pass, residual: if pass { 0.0 } else { 1.0 }, tolerance: 0.5 });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// One line per check followed by a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status}  {}  residual={:.3e}  tol={:.1e}", c.name, c.residual, c.tolerance);
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

fn perturbed_weights(m: i64, dim: usize, delta: f64) -> Result<DiagonalOperator> {
    DiagonalOperator::from_fn(dim, |n| deformation(m, n) + delta)
}

fn one_minus_fidelity(a: &FockState, b: &FockState) -> Result<f64> {
    let dim = a.dim().max(b.dim());
    Ok(1.0 - fidelity(&a.truncate(dim)?.state, &b.truncate(dim)?.state)?)
}

pub fn run(grid: &VerifyGrid) -> Result<VerifyReport> {
    grid.policy.validate()?;
    let policy = &grid.policy;
    let mut report = VerifyReport::default();

    report.measure("derivation identity (1+n)^-1 a a^dag = 1", COMMUTATOR_TOL, || derivation_identity_residual(SECTOR_DIM));

    for &m in &grid.m_values {
        let signed = i64::from(m);
        let annihilator = DeformedAnnihilator::new(signed);
        let expected = if m == 0 { vec![0] } else { vec![0, m as usize] };
        let found = annihilator.annihilated_states(SECTOR_DIM)?;
        report.flag(format!("annihilated states m={m} are {expected:?} (found {found:?})"), found == expected);

        if m > 0 {
            let s0 = annihilator.sector(0, SECTOR_DIM)?;
            report.flag(format!("sector S_0 m={m} finite with {m} members"), s0.finite && s0.members.len() == m as usize);
        }
        let upper = annihilator.sector(m as usize, SECTOR_DIM)?;
        report.flag(format!("sector S_{m} reaches the truncation edge"), !upper.finite);
        report.measure(format!("commutator on S_{m} m={m}"), COMMUTATOR_TOL, || annihilator.commutator_residual(&upper, SECTOR_DIM));
        if m > 0 {
            let minus = DeformedAnnihilator::new(-signed);
            let sector = minus.sector(0, SECTOR_DIM)?;
            report.measure(format!("commutator on S_0 m=-{m}"), COMMUTATOR_TOL, || minus.commutator_residual(&sector, SECTOR_DIM));
        }

        for &r in &grid.alphas {
            let alpha = Complex64::from_polar(r, grid.phase);
            let tag = format!("alpha={alpha} m={m}");
            for (family, order) in [(StateFamily::photon_added(alpha, m), signed), (StateFamily::negative(alpha, m), -signed)] {
                let kind = family.kind();
                let dim = match family.choose_dim(policy) {
                    Ok(d) => d,
                    Err(e) => {
                        report.measure(format!("dimension {kind} {tag}"), 0.0, || Err(e));
                        continue;
                    }
                };
                let mut built = Vec::new();
                for &route in family.routes() {
                    let name = format!("{kind} {route} {tag}");
                    match family.build(route, dim, policy) {
                        Ok(s) => {
                            report.measure(format!("eigenvalue {name}"), EIGEN_TOL, || {
                                eigen_residual_with(&perturbed_weights(order, dim, grid.weight_perturbation)?, &s, alpha)
                            });
                            report.measure(format!("heisenberg {name}"), HEISENBERG_TOL, || {
                                let rep = moments(&s)?;
                                Ok((0.25 - rep.var_x * rep.var_p).max(0.0))
                            });
                            built.push((route, s));
                        }
                        Err(e) => report.measure(format!("build {name}"), 0.0, || Err(e)),
                    }
                }
                for pair in built.windows(2) {
                    let ((ra, a), (rb, b)) = (&pair[0], &pair[1]);
                    report.measure(format!("fidelity {kind} {ra}/{rb} {tag}"), FIDELITY_TOL, || one_minus_fidelity(a, b));
                }
                if let Some((_, series)) = built.first() {
                    report.measure(format!("closed-form norm {kind} {tag}"), NORM_RATIO_TOL, || {
                        let analytic = match kind {
                            FamilyKind::NegativeM => {
                                let raw: f64 = (0..dim).map(|n| negative_m_raw_coefficient(alpha, m, n).norm_sqr()).sum();
                                negative_m_norm(alpha, m)? * raw.sqrt()
                            }
                            _ => {
                                // |c_m| = N |α|^0 sqrt(m!)/0!
                                let c_m = series.amplitude(m as usize).norm();
                                let log_fact: f64 = (1..=m).map(|k| f64::from(k).ln()).sum();
                                photon_added_norm(alpha, m) * (0.5 * log_fact).exp() / c_m
                            }
                        };
                        Ok((analytic - 1.0).abs())
                    });
                    if kind == FamilyKind::NegativeM && m > 0 {
                        report.measure(format!("analytic moments {tag}"), MOMENT_TOL, || {
                            Ok(analytic_moments_negative_m(alpha, m)?.max_abs_diff(&moments(series)?))
                        });
                    }
                }
            }
            if m > 0 {
                report.measure(format!("commutation rearrangement {tag}"), FIDELITY_TOL, || rearrangement_residual(alpha, m, policy));
            }
        }

        let mut limit_alphas: Vec<f64> = grid.alphas.iter().copied().filter(|r| r.abs() <= LIMIT_ALPHA).collect();
        if !limit_alphas.contains(&LIMIT_ALPHA) {
            limit_alphas.push(LIMIT_ALPHA);
        }
        for r in limit_alphas {
            let alpha = Complex64::from_polar(r, grid.phase);
            report.measure(format!("limit |alpha,{m}> -> |{m}> alpha={alpha}"), FIDELITY_TOL, || {
                let (s, dim) = StateFamily::photon_added(alpha, m).build_auto(crate::states::Route::Series, policy)?;
                Ok(1.0 - fidelity(&s, &FockState::basis(m as usize, dim)?)?)
            });
            report.measure(format!("limit |alpha,-{m}> -> |0> alpha={alpha}"), FIDELITY_TOL, || {
                let (s, dim) = StateFamily::negative(alpha, m).build_auto(crate::states::Route::Series, policy)?;
                Ok(1.0 - fidelity(&s, &FockState::basis(0, dim)?)?)
            });
        }
    }

    for &r in &grid.alphas {
        let alpha = Complex64::from_polar(r, grid.phase);
        for family in [StateFamily::photon_added(alpha, 0), StateFamily::negative(alpha, 0)] {
            report.measure(format!("{} m=0 equals coherent alpha={alpha}", family.kind()), 1e-12, || {
                let dim = StateFamily::coherent(alpha).choose_dim(policy)?;
                let coherent = crate::states::coherent(alpha, dim, policy)?;
                let mut worst: f64 = 0.0;
                for &route in family.routes() {
                    worst = worst.max(one_minus_fidelity(&family.build(route, dim, policy)?, &coherent)?);
                }
                Ok(worst)
            });
        }
    }
    Ok(report)
}
