//! Brute-force validation path: exact mode-pair Gibbs states, the Chernoff
//! quantity `Q` by direct minimization over `s`, the spectral line element
//! evaluated straight from its eigenbasis sum, and finite-difference
//! cross-checks of the analytic tensor.
//!
//! The oracle works at the fermionic mode level. A chain of odd length `N`
//! factorizes into `(N−1)/2` momentum pairs `(k, −k)` (dimension 4 each, in
//! the occupation basis of `d_k`, `d_{−k}`) plus the unpaired `k = 0` mode
//! (dimension 2); thermal states are products over these factors and the
//! line element is additive over them.

use crate::error::{Error, Result};
use crate::linalg;
use crate::metric::{self, EvaluationScheme, Normalization};
use crate::xy::{self, CouplingPoint, ThermalPoint};
use num_complex::Complex64;

const EIG_CLAMP: f64 = 1e-12;
const GOLDEN_TOL: f64 = 1e-10;

/// A finite-dimensional Hermitian positive-semidefinite unit-trace matrix,
/// stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positive semi-definiteness
    /// (eigenvalues above `-1e-12`; they are clamped to zero when used).
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(entries.len(), dim * dim));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let mut asym = 0.0_f64;
        for j in 0..dim {
            for i in 0..=j {
                let d = entries[i + dim * j] - entries[j + dim * i].conj();
                asym = asym.max(d.norm());
            }
        }
        if asym > 1e-12 {
            return Err(Error::NotHermitian(asym));
        }
        let trace: f64 = (0..dim).map(|i| entries[i + dim * i].re).sum();
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidTrace(trace));
        }
        let m = Self { dim, entries };
        let (vals, _) = m.eigen_raw()?;
        if let Some(min) = vals.iter().copied().reduce(f64::min) {
            if min < -EIG_CLAMP {
                return Err(Error::NotPsd(min));
            }
        }
        Ok(m)
    }

    /// Diagonal state from a probability vector.
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        let dim = probs.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &p) in probs.iter().enumerate() {
            entries[i + dim * i] = Complex64::new(p, 0.0);
        }
        Self::new(dim, entries)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i + dim * i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i + self.dim * j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    fn eigen_raw(&self) -> Result<(Vec<f64>, Vec<Complex64>)> {
        linalg::herm_eigen(&self.entries, self.dim)
    }

    /// Eigenvalues (descending, clamped to zero below `1e-12`) and
    /// eigenvectors (columns).
    pub fn eigen(&self) -> Result<(Vec<f64>, Vec<Complex64>)> {
        let (mut vals, vecs) = self.eigen_raw()?;
        for v in vals.iter_mut() {
            if *v < EIG_CLAMP {
                *v = 0.0;
            }
        }
        Ok((vals, vecs))
    }
}

/// Thermal state of a single momentum pair `(k, −k)`, or of the unpaired
/// `k = 0` mode.
#[derive(Debug, Clone)]
pub struct ModePairState {
    pub k: f64,
    pub rho: DensityMatrix,
}

/// Exact Gibbs state of one momentum factor.
///
/// For `k > 0` this is the 4×4 state of the pair `(k, −k)` in the occupation
/// basis `{|00⟩, |11⟩, |01⟩, |10⟩}` of `d_k, d_{−k}`; its eigenvalues are the
/// Gibbs weights of the quasiparticle energies `{0, 2Λ_k, Λ_k, Λ_k}` and the
/// `{|00⟩, |11⟩}` block is rotated by the Bogoliubov angle `θ_k`. For
/// `k = 0` it is the 2×2 Gibbs state of the single mode with energy
/// `ε_0 = 1 − λ`.
pub fn mode_pair_thermal_state(k: f64, p: &ThermalPoint) -> Result<ModePairState> {
    if p.is_zero_temperature() {
        return Err(Error::InvalidArgument(
            "mode-pair thermal state needs a finite inverse temperature".into(),
        ));
    }
    if k < 0.0 {
        return Err(Error::InvalidArgument(
            "pair states are labelled by the non-negative momentum of the pair".into(),
        ));
    }
    let beta = p.beta();
    let c = p.coupling();
    let d = xy::mode_data(k, c);
    if k == 0.0 {
        // Fermi factor written to stay stable for either sign of ε_0.
        let p1 = 1.0 / (1.0 + (beta * d.epsilon).exp());
        let entries = vec![
            Complex64::new(1.0 - p1, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(p1, 0.0),
        ];
        return Ok(ModePairState {
            k,
            rho: DensityMatrix::new(2, entries)?,
        });
    }
    let x = beta * d.lambda_k;
    let e = (-x).exp();
    let z = (1.0 + e) * (1.0 + e);
    let w0 = 1.0 / z;
    let w2 = e * e / z;
    let wl = e / z;
    let (sin_half, cos_half) = (0.5 * d.theta).sin_cos();
    let mut m = vec![Complex64::new(0.0, 0.0); 16];
    // {|00⟩, |11⟩} block: ground state cos(θ/2)|00⟩ + i sin(θ/2)|11⟩ with
    // weight w0, its orthogonal partner with weight w2.
    m[0] = Complex64::new(w0 * cos_half * cos_half + w2 * sin_half * sin_half, 0.0);
    m[5] = Complex64::new(w0 * sin_half * sin_half + w2 * cos_half * cos_half, 0.0);
    m[4] = Complex64::new(0.0, -(w0 - w2) * cos_half * sin_half); // (0,1)
    m[1] = Complex64::new(0.0, (w0 - w2) * cos_half * sin_half); // (1,0)
    m[10] = Complex64::new(wl, 0.0);
    m[15] = Complex64::new(wl, 0.0);
    Ok(ModePairState {
        k,
        rho: DensityMatrix::new(4, m)?,
    })
}

/// All momentum factors of an odd chain: the `k = 0` mode plus the
/// `(N−1)/2` pairs with `k > 0`.
pub fn thermal_factors(p: &ThermalPoint, n: usize) -> Result<Vec<ModePairState>> {
    xy::modes(n)?
        .into_iter()
        .filter(|&k| k >= 0.0)
        .map(|k| mode_pair_thermal_state(k, p))
        .collect()
}

struct SpectralPair {
    p: Vec<f64>,
    q: Vec<f64>,
    /// overlap[i + dim*j] = |⟨u_i|v_j⟩|²
    overlap: Vec<f64>,
}

impl SpectralPair {
    fn build(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
        }
        let dim = rho.dim();
        let (p, u) = rho.eigen()?;
        let (q, v) = sigma.eigen()?;
        let mut overlap = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut dot = Complex64::new(0.0, 0.0);
                for r in 0..dim {
                    dot += u[r + dim * i].conj() * v[r + dim * j];
                }
                overlap[i + dim * j] = dot.norm_sqr();
            }
        }
        Ok(Self { p, q, overlap })
    }

    /// `Tr(ρ^s σ^{1−s})` with `0^t := 0` on null subspaces.
    #[allow(clippy::needless_range_loop)]
    fn trace_power(&self, s: f64) -> f64 {
        let dim = self.p.len();
        let ps: Vec<f64> = self.p.iter().map(|&x| pow_frac(x, s)).collect();
        let qs: Vec<f64> = self.q.iter().map(|&x| pow_frac(x, 1.0 - s)).collect();
        let mut acc = 0.0;
        for i in 0..dim {
            if ps[i] == 0.0 {
                continue;
            }
            for j in 0..dim {
                acc += ps[i] * qs[j] * self.overlap[i + dim * j];
            }
        }
        acc
    }
}

#[inline]
fn pow_frac(x: f64, t: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (t * x.ln()).exp()
    }
}

fn golden_minimize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimizes a convex objective over `s ∈ [0, 1]`, comparing the interior
/// golden-section minimum against both endpoints (the minimum can sit on
/// the boundary, e.g. for classical states with unequal supports).
fn minimize_over_s(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let (xi, fi) = golden_minimize(&f, 0.0, 1.0, GOLDEN_TOL);
    let f0 = f(0.0);
    let f1 = f(1.0);
    let mut best = (fi, xi);
    if f0 < best.0 {
        best = (f0, 0.0);
    }
    if f1 < best.0 {
        best = (f1, 1.0);
    }
    (best.1, best.0)
}

/// The Chernoff quantity `Q(ρ, σ) = min_{0≤s≤1} Tr(ρ^s σ^{1−s})` and its
/// minimizer `s*`. The bound itself is `ξ_QCB = −log Q`.
pub fn chernoff_q(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(f64, f64)> {
    let pair = SpectralPair::build(rho, sigma)?;
    let (s_star, q) = minimize_over_s(|s| pair.trace_power(s));
    Ok((q.clamp(0.0, 1.0), s_star))
}

/// `Q` for product states `⊗_k ρ_k` vs `⊗_k σ_k`: the trace objective
/// factorizes, so a single shared `s` minimizes the product of per-factor
/// traces.
pub fn chernoff_q_product(factors: &[(DensityMatrix, DensityMatrix)]) -> Result<(f64, f64)> {
    let pairs: Vec<SpectralPair> = factors
        .iter()
        .map(|(r, s)| SpectralPair::build(r, s))
        .collect::<Result<_>>()?;
    let objective = |s: f64| pairs.iter().map(|p| p.trace_power(s)).product::<f64>();
    let (s_star, q) = minimize_over_s(objective);
    Ok((q.clamp(0.0, 1.0), s_star))
}

/// The spectral line element
/// `ds² = ½ Σ_{ij} |⟨i|dρ|j⟩|² / (√p_i + √p_j)²`
/// over the eigenbasis of `ρ`; terms with `p_i = p_j = 0` are skipped.
pub fn spectral_line_element(rho: &DensityMatrix, drho: &[Complex64]) -> Result<f64> {
    let dim = rho.dim();
    if drho.len() != dim * dim {
        return Err(Error::DimensionMismatch(drho.len(), dim * dim));
    }
    let scale: f64 = drho
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let mut asym = 0.0_f64;
    let mut trace = Complex64::new(0.0, 0.0);
    for j in 0..dim {
        trace += drho[j + dim * j];
        for i in 0..=j {
            asym = asym.max((drho[i + dim * j] - drho[j + dim * i].conj()).norm());
        }
    }
    if asym > 1e-9 * scale {
        return Err(Error::NotHermitian(asym));
    }
    if trace.norm() > 1e-9 * scale {
        return Err(Error::InvalidArgument(format!(
            "perturbation must be traceless, got trace {trace}"
        )));
    }
    let (p, u) = rho.eigen()?;
    let mut ds2 = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if p[i] == 0.0 && p[j] == 0.0 {
                continue;
            }
            // M_ij = (U† dρ U)_ij
            let mut m = Complex64::new(0.0, 0.0);
            for r in 0..dim {
                let mut col = Complex64::new(0.0, 0.0);
                for c in 0..dim {
                    col += drho[r + dim * c] * u[c + dim * j];
                }
                m += u[r + dim * i].conj() * col;
            }
            let denom = (p[i].sqrt() + p[j].sqrt()).powi(2);
            ds2 += 0.5 * m.norm_sqr() / denom;
        }
    }
    if ds2 < -1e-14 {
        return Err(Error::InternalConsistency(format!(
            "negative line element {ds2}"
        )));
    }
    Ok(ds2.max(0.0))
}

/// Result of one finite-difference comparison.
#[derive(Debug, Clone, Copy)]
pub struct FdCheck {
    /// Chernoff-calibrated quadratic form `u·(g^c + ½ g^nc)·u` of the
    /// analytic finite-N tensor (total normalization).
    pub analytic: f64,
    /// Richardson-extrapolated finite-difference line element per unit
    /// squared step.
    pub oracle: f64,
    pub rel_err: f64,
    /// Step direction actually used, after per-coordinate scaling and
    /// normalization.
    pub direction: [f64; 3],
    /// Set when the two Richardson levels disagree by more than 10%,
    /// indicating the step is too large for the local gap scale.
    pub step_warning: bool,
}

fn displaced(p: &ThermalPoint, u: [f64; 3], h: f64) -> Result<ThermalPoint> {
    let c = p.coupling();
    ThermalPoint::new(
        p.beta() + h * u[0],
        CouplingPoint::new(c.gamma() + h * u[1], c.lambda() + h * u[2])?,
    )
}

fn oracle_quadratic_estimate(p: &ThermalPoint, u: [f64; 3], h: f64, n: usize) -> Result<f64> {
    let plus = displaced(p, u, h)?;
    let minus = displaced(p, u, -h)?;
    let base = thermal_factors(p, n)?;
    let fplus = thermal_factors(&plus, n)?;
    let fminus = thermal_factors(&minus, n)?;
    let mut ds2 = 0.0;
    for ((b, fp), fm) in base.iter().zip(&fplus).zip(&fminus) {
        let dim = b.rho.dim();
        let drho: Vec<Complex64> = (0..dim * dim)
            .map(|i| 0.5 * (fp.rho.entries()[i] - fm.rho.entries()[i]))
            .collect();
        ds2 += spectral_line_element(&b.rho, &drho)?;
    }
    Ok(ds2 / (h * h))
}

/// Compares the analytic quadratic form against the finite-difference line
/// element of the exact mode states, Richardson-extrapolated over steps
/// `{h, h/2}`.
///
/// The direction is rescaled per coordinate before use (β by `1/Λ_max`, the
/// natural inverse energy scale) and normalized; the same rescaled direction
/// enters both sides of the comparison and is reported in the result.
pub fn fd_metric_check(
    p: &ThermalPoint,
    direction: [f64; 3],
    step: f64,
    n: usize,
) -> Result<FdCheck> {
    if direction.iter().all(|&x| x == 0.0) {
        return Err(Error::InvalidArgument("direction must be nonzero".into()));
    }
    if step.is_nan() || step <= 0.0 || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("bad step {step}")));
    }
    let lambda_max = xy::quasiparticle_energies(n, p.coupling())?
        .into_iter()
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut u = [direction[0] / lambda_max, direction[1], direction[2]];
    let norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    for x in u.iter_mut() {
        *x /= norm;
    }

    let e_h = oracle_quadratic_estimate(p, u, step, n)?;
    let e_h2 = oracle_quadratic_estimate(p, u, 0.5 * step, n)?;
    let oracle = (4.0 * e_h2 - e_h) / 3.0;
    let step_warning = (e_h2 - e_h).abs() > 0.1 * e_h2.abs().max(f64::MIN_POSITIVE);

    let scheme = EvaluationScheme::finite(n)?.with_normalization(Normalization::Total);
    let tensor = metric::full_metric(p, &scheme)?;
    let analytic = tensor.chernoff_quadratic_form(u);
    let rel_err = if analytic != 0.0 {
        ((oracle - analytic) / analytic).abs()
    } else {
        oracle.abs()
    };
    Ok(FdCheck {
        analytic,
        oracle,
        rel_err,
        direction: u,
        step_warning,
    })
}
