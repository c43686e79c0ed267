//! Exact single-mode spectral data of the anisotropic XY chain in a
//! transverse field.
//!
//! The chain is diagonalized by Jordan-Wigner, Fourier and Bogoliubov
//! transformations into free fermions with quasiparticle energies
//! `Λ_k = sqrt(ε_k² + Δ_k²)`, where `ε_k = cos k − λ` and `Δ_k = γ sin k`.
//! This module provides the dispersion, the Bogoliubov angle `θ_k` with its
//! parameter derivatives, the energy gap with its region classification, and
//! mode enumeration for finite odd chain length.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Tolerance used when classifying couplings that sit on a region boundary
/// or on a critical line.
pub const GAP_TOL: f64 = 1e-12;

/// A point `(γ, λ)` in coupling space.
///
/// `λ` is the transverse field, `γ ∈ [−1, 1]` the anisotropy. `γ = ±1` is
/// the Ising chain, `γ = 0` the XX chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingPoint {
    gamma: f64,
    lambda: f64,
}

impl CouplingPoint {
    pub fn new(gamma: f64, lambda: f64) -> Result<Self> {
        if !gamma.is_finite() || !(-1.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidArgument(format!(
                "anisotropy gamma must lie in [-1, 1], got {gamma}"
            )));
        }
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "transverse field lambda must be finite, got {lambda}"
            )));
        }
        Ok(Self { gamma, lambda })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

/// A point `(β, γ, λ)` on the thermal-state manifold.
///
/// `β` is the inverse temperature. `β = +∞` is the zero-temperature sentinel,
/// accepted only where the nonclassical part of the metric is evaluated; the
/// classical part is undefined there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    beta: f64,
    coupling: CouplingPoint,
}

impl ThermalPoint {
    pub fn new(beta: f64, coupling: CouplingPoint) -> Result<Self> {
        if beta.is_nan() || beta <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "inverse temperature beta must be positive, got {beta}"
            )));
        }
        Ok(Self { beta, coupling })
    }

    /// The `β = +∞` point at the given coupling.
    pub fn zero_temperature(coupling: CouplingPoint) -> Self {
        Self {
            beta: f64::INFINITY,
            coupling,
        }
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn temperature(&self) -> f64 {
        1.0 / self.beta
    }

    pub fn coupling(&self) -> &CouplingPoint {
        &self.coupling
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta.is_infinite()
    }
}

/// Gap regions of the XY phase diagram.
///
/// Region A: `|λ| > |1 − γ²|`, gap `|1 − |λ||`.
/// Region B: `|λ| < |1 − γ²|`, gap `|γ| sqrt(1 − λ²/(1 − γ²))`.
/// Critical: `λ = ±1`, or `γ = 0` with `|λ| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    A,
    B,
    Critical,
}

/// Energy gap and its region classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapInfo {
    pub value: f64,
    pub region: Region,
}

/// Per-momentum spectral data.
///
/// The Bogoliubov angle is fixed by `cos θ_k = ε_k/Λ_k` together with
/// `sin θ_k = Δ_k/Λ_k`, i.e. `θ_k = atan2(Δ_k, ε_k)`: `θ ∈ [0, π]` for
/// `Δ_k ≥ 0` and the continuous negative branch for `Δ_k < 0`. At a gapless
/// mode (`Λ_k = 0`) the angle and its derivatives are undefined and the
/// derivative fields are `None`; the metric integrands have finite limits
/// there and handle the case themselves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub k: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub lambda_k: f64,
    pub theta: f64,
    /// `∂θ/∂λ = Δ_k/Λ_k²`
    pub dtheta_dlambda: Option<f64>,
    /// `∂θ/∂γ = ε_k sin k/Λ_k²` (the γ-regular form of `ε_k Δ_k/(γ Λ_k²)`)
    pub dtheta_dgamma: Option<f64>,
}

/// Raw dispersion terms shared by the metric integrands.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ModeTerms {
    pub epsilon: f64,
    pub delta: f64,
    pub lambda_k: f64,
    pub sin_k: f64,
}

#[inline]
pub(crate) fn mode_terms(k: f64, c: &CouplingPoint) -> ModeTerms {
    let (sin_k, cos_k) = k.sin_cos();
    let epsilon = cos_k - c.lambda();
    let delta = c.gamma() * sin_k;
    let lambda_k = epsilon.hypot(delta);
    ModeTerms {
        epsilon,
        delta,
        lambda_k,
        sin_k,
    }
}

/// Momenta `2πj/N` for `j ∈ {−(N−1)/2, …, (N−1)/2}` of a chain with an odd
/// number of sites.
pub fn modes(n: usize) -> Result<Vec<f64>> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidModeCount(n));
    }
    let half = (n as i64 - 1) / 2;
    Ok((-half..=half)
        .map(|j| 2.0 * PI * j as f64 / n as f64)
        .collect())
}

/// Dispersion, Bogoliubov angle and angle derivatives at momentum `k`.
pub fn mode_data(k: f64, c: &CouplingPoint) -> ModeData {
    let t = mode_terms(k, c);
    let theta = f64::atan2(t.delta, t.epsilon);
    let (dtheta_dlambda, dtheta_dgamma) = if t.lambda_k > 0.0 {
        let l2 = t.lambda_k * t.lambda_k;
        (Some(t.delta / l2), Some(t.epsilon * t.sin_k / l2))
    } else {
        (None, None)
    };
    ModeData {
        k,
        epsilon: t.epsilon,
        delta: t.delta,
        lambda_k: t.lambda_k,
        theta,
        dtheta_dlambda,
        dtheta_dgamma,
    }
}

/// Energy gap of the chain at coupling `c`.
///
/// On the boundary `|λ| = 1 − γ²` both region formulas agree (the gap is
/// `γ²` there) and region A is reported.
pub fn gap(c: &CouplingPoint) -> GapInfo {
    let abs_lambda = c.lambda().abs();
    let b_extent = 1.0 - c.gamma() * c.gamma();
    let (value, region) = if abs_lambda + GAP_TOL >= b_extent {
        ((1.0 - abs_lambda).abs(), Region::A)
    } else {
        let arg = 1.0 - c.lambda() * c.lambda() / b_extent;
        (c.gamma().abs() * arg.max(0.0).sqrt(), Region::B)
    };
    if value <= GAP_TOL {
        GapInfo {
            value,
            region: Region::Critical,
        }
    } else {
        GapInfo { value, region }
    }
}

/// Quasiparticle energies `Λ_k`, aligned with [`modes`]`(n)`.
pub fn quasiparticle_energies(n: usize, c: &CouplingPoint) -> Result<Vec<f64>> {
    Ok(modes(n)?
        .into_iter()
        .map(|k| mode_terms(k, c).lambda_k)
        .collect())
}

/// Interior momenta `0 < k < π` where `Λ_k` can attain a local minimum,
/// i.e. `k* = arccos(λ/(1−γ²))` when that is defined. The end points `0`
/// and `π` are always candidates and are handled by the integrator.
pub(crate) fn interior_dispersion_minimum(c: &CouplingPoint) -> Option<f64> {
    let b_extent = 1.0 - c.gamma() * c.gamma();
    if b_extent <= 0.0 {
        return None;
    }
    let x = c.lambda() / b_extent;
    if x.abs() <= 1.0 {
        let k = x.acos();
        if k > 0.0 && k < PI {
            return Some(k);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn modes_enumeration() {
        let m = modes(3).unwrap();
        assert_eq!(m.len(), 3);
        assert_relative_eq!(m[0], -2.0 * PI / 3.0);
        assert_eq!(m[1], 0.0);
        assert_relative_eq!(m[2], 2.0 * PI / 3.0);

        let m5 = modes(5).unwrap();
        assert_eq!(m5.len(), 5);
        assert!(m5.iter().sum::<f64>().abs() < 1e-15);

        assert!(modes(4).is_err());
        assert!(modes(0).is_err());
        assert!(modes(1).is_err());
    }

    #[test]
    fn strong_field_dominates_dispersion() {
        // Λ_k → |λ| + O(1) for large fields.
        let c = CouplingPoint::new(0.8, 50.0).unwrap();
        for l in quasiparticle_energies(9, &c).unwrap() {
            assert!((l - 50.0).abs() < 1.1, "Λ = {l}");
        }
    }

    #[test]
    fn mode_data_ising_midband() {
        // k = π/2, γ = 1, λ = 0: ε = 0, Δ = 1, Λ = 1, θ = π/2.
        let c = CouplingPoint::new(1.0, 0.0).unwrap();
        let d = mode_data(PI / 2.0, &c);
        assert!(d.epsilon.abs() < 1e-15);
        assert_relative_eq!(d.delta, 1.0);
        assert_relative_eq!(d.lambda_k, 1.0);
        assert_relative_eq!(d.theta, PI / 2.0);
        assert_relative_eq!(d.dtheta_dlambda.unwrap(), 1.0);
    }

    #[test]
    fn mode_data_zero_momentum() {
        let c = CouplingPoint::new(0.7, 0.3).unwrap();
        let d = mode_data(0.0, &c);
        assert_relative_eq!(d.epsilon, 0.7);
        assert_eq!(d.delta, 0.0);
        assert_relative_eq!(d.lambda_k, 0.7);
        assert_eq!(d.theta, 0.0);
    }

    #[test]
    fn mode_invariants() {
        let c = CouplingPoint::new(0.6, 0.8).unwrap();
        for i in 0..50 {
            let k = -PI + 2.0 * PI * i as f64 / 49.0;
            let d = mode_data(k, &c);
            assert_relative_eq!(
                d.lambda_k,
                (d.epsilon * d.epsilon + d.delta * d.delta).sqrt(),
                max_relative = 1e-15
            );
            if d.lambda_k > 0.0 {
                assert_relative_eq!(d.theta.cos() * d.lambda_k, d.epsilon, epsilon = 1e-14);
                assert_relative_eq!(d.theta.sin() * d.lambda_k, d.delta, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn theta_derivatives_match_finite_differences() {
        let h = 1e-6;
        for &(gamma, lambda, k) in &[
            (0.8f64, 0.3f64, 0.7f64),
            (0.5, 1.4, 2.1),
            (-0.6, 0.2, 1.0),
            (0.9, -0.7, 2.8),
        ] {
            let c = CouplingPoint::new(gamma, lambda).unwrap();
            let d = mode_data(k, &c);

            let tp = mode_data(k, &CouplingPoint::new(gamma, lambda + h).unwrap()).theta;
            let tm = mode_data(k, &CouplingPoint::new(gamma, lambda - h).unwrap()).theta;
            let fd_lambda = (tp - tm) / (2.0 * h);
            assert_relative_eq!(d.dtheta_dlambda.unwrap(), fd_lambda, max_relative = 1e-6);

            let tp = mode_data(k, &CouplingPoint::new(gamma + h, lambda).unwrap()).theta;
            let tm = mode_data(k, &CouplingPoint::new(gamma - h, lambda).unwrap()).theta;
            let fd_gamma = (tp - tm) / (2.0 * h);
            assert_relative_eq!(d.dtheta_dgamma.unwrap(), fd_gamma, max_relative = 1e-6);
        }
    }

    #[test]
    fn gapless_mode_flags_derivatives_undefined() {
        // λ = 1, γ = 1: Λ_0 = 0.
        let c = CouplingPoint::new(1.0, 1.0).unwrap();
        let d = mode_data(0.0, &c);
        assert_eq!(d.lambda_k, 0.0);
        assert!(d.dtheta_dlambda.is_none());
        assert!(d.dtheta_dgamma.is_none());
    }

    #[test]
    fn gap_regions() {
        // λ = 1.5, γ = 1 → region A, Δ = 0.5.
        let g = gap(&CouplingPoint::new(1.0, 1.5).unwrap());
        assert_eq!(g.region, Region::A);
        assert_relative_eq!(g.value, 0.5);

        // λ = 1, γ = 0.5 → critical line.
        let g = gap(&CouplingPoint::new(0.5, 1.0).unwrap());
        assert_eq!(g.region, Region::Critical);
        assert!(g.value.abs() <= GAP_TOL);

        // λ = 0.5, γ = 0.6 → region B.
        let g = gap(&CouplingPoint::new(0.6, 0.5).unwrap());
        assert_eq!(g.region, Region::B);
        assert_relative_eq!(
            g.value,
            0.6 * (1.0 - 0.25 / 0.64f64).sqrt(),
            max_relative = 1e-12
        );

        // XX line inside the band is critical.
        let g = gap(&CouplingPoint::new(0.0, 0.5).unwrap());
        assert_eq!(g.region, Region::Critical);

        // XX line outside the band is gapped (region A).
        let g = gap(&CouplingPoint::new(0.0, 1.5).unwrap());
        assert_eq!(g.region, Region::A);
        assert_relative_eq!(g.value, 0.5);
    }

    #[test]
    fn gap_equals_dispersion_minimum() {
        for &(gamma, lambda) in &[
            (0.8f64, 0.3f64),
            (0.5, 0.2),
            (1.0, 1.5),
            (0.3, -0.6),
            (-0.7, 0.95),
        ] {
            let c = CouplingPoint::new(gamma, lambda).unwrap();
            let g = gap(&c);
            let min = (0..=400_000)
                .map(|i| mode_terms(PI * i as f64 / 400_000.0, &c).lambda_k)
                .fold(f64::INFINITY, f64::min);
            assert_relative_eq!(g.value, min, epsilon = 1e-7);
        }
    }

    #[test]
    fn quasiparticle_energy_tables() {
        // γ = 1, λ = 0: Λ_k ≡ 1.
        let c = CouplingPoint::new(1.0, 0.0).unwrap();
        for l in quasiparticle_energies(3, &c).unwrap() {
            assert_relative_eq!(l, 1.0, max_relative = 1e-15);
        }

        // γ = 0, λ = 1: {1.5, 0, 1.5}.
        let c = CouplingPoint::new(0.0, 1.0).unwrap();
        let ls = quasiparticle_energies(3, &c).unwrap();
        assert_relative_eq!(ls[0], 1.5);
        assert!(ls[1].abs() < 1e-15);
        assert_relative_eq!(ls[2], 1.5);
    }

    #[test]
    fn dispersion_symmetries() {
        let c = CouplingPoint::new(0.6, 0.8).unwrap();
        let c_neg_gamma = CouplingPoint::new(-0.6, 0.8).unwrap();
        let c_neg_lambda = CouplingPoint::new(0.6, -0.8).unwrap();
        for i in 0..101 {
            let k = -PI + 2.0 * PI * i as f64 / 100.0;
            let t = mode_terms(k, &c);
            // Even in k.
            assert_relative_eq!(
                mode_terms(-k, &c).lambda_k,
                t.lambda_k,
                max_relative = 1e-15
            );
            // Even in γ.
            assert_relative_eq!(
                mode_terms(k, &c_neg_gamma).lambda_k,
                t.lambda_k,
                max_relative = 1e-15
            );
            // λ → −λ with k → π − k: ε flips sign, Δ and Λ invariant.
            let t2 = mode_terms(PI - k, &c_neg_lambda);
            assert_relative_eq!(t2.epsilon, -t.epsilon, epsilon = 1e-14);
            assert_relative_eq!(t2.delta, t.delta, epsilon = 1e-14);
            assert_relative_eq!(t2.lambda_k, t.lambda_k, epsilon = 1e-14);
        }
    }

    #[test]
    fn gap_continuous_across_region_boundary() {
        for i in 1..50 {
            let gamma = 0.05 + 0.9 * i as f64 / 50.0;
            let lambda = 1.0 - gamma * gamma;
            let a = (1.0 - lambda.abs()).abs();
            let b = gamma.abs() * (1.0 - lambda * lambda / (1.0 - gamma * gamma)).sqrt();
            assert!((a - b).abs() < 1e-12, "gamma={gamma}: {a} vs {b}");
        }
    }

    #[test]
    fn invalid_points_rejected() {
        assert!(CouplingPoint::new(1.2, 0.0).is_err());
        assert!(CouplingPoint::new(f64::NAN, 0.0).is_err());
        assert!(CouplingPoint::new(0.5, f64::INFINITY).is_err());
        let c = CouplingPoint::new(0.5, 0.5).unwrap();
        assert!(ThermalPoint::new(0.0, c).is_err());
        assert!(ThermalPoint::new(-1.0, c).is_err());
        assert!(ThermalPoint::new(f64::NAN, c).is_err());
        assert!(ThermalPoint::new(f64::INFINITY, c).is_ok());
    }
}
