//! Switching dissipation on and off.
//!
//! An undamped eigenstate is carried into the damped algebra by the
//! prescription `h(ā) ρ_0 ↦ h(b̄) ρ^γ_0`, evolves there with complex energies,
//! and is carried back by the inverse prescription. Everything after the
//! initial expansion happens in coefficient space.
//!
//! Moyal-basis amplitudes refer to `ρ_l = ā^l ρ_0 / √l!`. These are mutually
//! orthogonal but have norm `2^{−l}`; probabilities are reported from the
//! amplitudes in this basis. `orthonormal_probabilities` gives the same state
//! in the orthonormal basis `2^l ρ_l` for comparison.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::eigen::{hermite_state, l2_inner, vacuum, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::gauss::ExpPoly;
use crate::phase_poly::{factorial, PhasePoly, PhysParams};
use crate::star::ProductKind;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this modulus `e^{2iωτ} − 1` is treated as exactly zero.
pub const REVIVAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    MoyalEigen,
    GammaEigen,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub basis: Basis,
    pub params: PhysParams,
    /// `(level, amplitude)` with distinct levels, in decreasing level order.
    pub coeffs: Vec<(u32, Complex64)>,
}

impl StateVector {
    pub fn new(basis: Basis, params: PhysParams, mut coeffs: Vec<(u32, Complex64)>) -> Self {
        coeffs.sort_by_key(|a| std::cmp::Reverse(a.0));
        coeffs.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 += later.1;
                true
            } else {
                false
            }
        });
        Self { basis, params, coeffs }
    }

    pub fn pure(basis: Basis, params: PhysParams, level: u32) -> Self {
        Self::new(basis, params, vec![(level, ONE)])
    }

    pub fn amplitude(&self, level: u32) -> Complex64 {
        self.coeffs.iter().find(|c| c.0 == level).map_or(ZERO, |c| c.1)
    }

    pub fn levels(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.0).collect()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.1.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(level, |amplitude|² / Σ|amplitude|²)`.
    pub fn probabilities(&self) -> Vec<(u32, f64)> {
        let total: f64 = self.coeffs.iter().map(|c| c.1.norm_sqr()).sum();
        self.coeffs.iter().map(|&(l, a)| (l, a.norm_sqr() / total)).collect()
    }

    fn map_amplitudes(&self, f: impl Fn(u32, Complex64) -> Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|&(l, a)| (l, f(l, a))).collect();
        Self { coeffs, ..self.clone() }
    }

    fn expect(&self, basis: Basis) -> Result<()> {
        if self.basis != basis {
            return Err(Error::WrongBasis);
        }
        Ok(())
    }
}

/// `|⟨a|b⟩| / (‖a‖‖b‖)` over amplitudes; 1 for parallel vectors.
pub fn overlap(a: &StateVector, b: &StateVector) -> f64 {
    let inner: Complex64 = a.coeffs.iter().map(|&(l, x)| x.conj() * b.amplitude(l)).sum();
    inner.norm() / (a.norm() * b.norm())
}

/// A dimensionless time `ωτ`, kept as an exact multiple of π when given so.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaTau {
    Value(f64),
    /// `num/den · π`
    PiFraction { num: i64, den: u64 },
}

impl OmegaTau {
    pub fn value(&self) -> f64 {
        match *self {
            OmegaTau::Value(v) => v,
            OmegaTau::PiFraction { num, den } => num as f64 * std::f64::consts::PI / den as f64,
        }
    }

    /// Whether `e^{2iωτ} = 1`.
    pub fn is_revival(&self) -> bool {
        match *self {
            OmegaTau::Value(v) => (Complex64::new(0.0, 2.0 * v).exp() - ONE).norm() < REVIVAL_TOLERANCE,
            OmegaTau::PiFraction { num, den } => num.rem_euclid(den as i64) == 0,
        }
    }

    /// `e^{2iωτ} − 1`, exactly zero at revival points.
    pub fn double_phase_minus_one(&self) -> Complex64 {
        if self.is_revival() {
            return ZERO;
        }
        Complex64::new(0.0, 2.0 * self.value()).exp() - ONE
    }
}

impl fmt::Display for OmegaTau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for OmegaTau {
    type Err = String;

    /// Accepts a decimal number or a multiple of π such as `pi`, `-pi/2`,
    /// `3pi/4`, `3*pi/4`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.trim().to_ascii_lowercase().replace(' ', "");
        let Some(idx) = t.find("pi") else {
            return t
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(OmegaTau::Value)
                .ok_or_else(|| format!("not a number or multiple of pi: {s}"));
        };
        let bad = || format!("not a number or multiple of pi: {s}");
        let head = t[..idx].trim_end_matches('*');
        let tail = &t[idx + 2..];
        let num: i64 = match head {
            "" | "+" => 1,
            "-" => -1,
            h => h.parse().map_err(|_| bad())?,
        };
        let den: u64 = match tail {
            "" => 1,
            d => d.strip_prefix('/').and_then(|d| d.parse().ok()).filter(|&d| d > 0).ok_or_else(bad)?,
        };
        Ok(OmegaTau::PiFraction { num, den })
    }
}

/// `α^(n)_k = Γ^k / (2^n k!) · √(n! / (n−2k)!)`.
pub fn alpha_coefficients(n: u32, params: &PhysParams) -> StateVector {
    let g = params.mixing();
    let coeffs = (0..=n / 2)
        .map(|k| {
            let c = g.powu(k) / (2f64.powi(n as i32) * factorial(k)) * (factorial(n) / factorial(n - 2 * k)).sqrt();
            (n - 2 * k, c)
        })
        .collect();
    StateVector::new(Basis::GammaEigen, *params, coeffs)
}

/// `β^(n)_k(τ) = Γ^k/(2^{2k} k!) √(n!/(n−2k)!) · e^{−iω(n+1/2+iγ/2ω)τ} (e^{2iωτ} − 1)^k`.
pub fn beta_coefficients(n: u32, tau: OmegaTau, params: &PhysParams) -> StateVector {
    let g = params.mixing();
    let wt = tau.value();
    let carrier = Complex64::new(params.gamma_over_omega() / 2.0 * wt, -(f64::from(n) + 0.5) * wt).exp();
    let d = tau.double_phase_minus_one();
    let coeffs = (0..=n / 2)
        .map(|k| {
            let c = g.powu(k) / (4f64.powi(k as i32) * factorial(k)) * (factorial(n) / factorial(n - 2 * k)).sqrt();
            (n - 2 * k, c * carrier * d.powu(k))
        })
        .collect();
    StateVector::new(Basis::MoyalEigen, *params, coeffs)
}

/// Both expansions of the injected state `b̄^n ρ^γ_0 / √n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct Injection {
    /// From the closed-form coefficients.
    pub formula: StateVector,
    /// From L² projection of the prescribed symbol onto the damped eigenstates.
    pub projection: StateVector,
}

fn check_level(n: u32) -> Result<()> {
    if n > MAX_LEVEL {
        return Err(Error::InvalidParams(format!("level {n} exceeds the maximum {MAX_LEVEL}")));
    }
    Ok(())
}

/// Inject `ρ_n` into the damped algebra.
pub fn inject(n: u32, params: &PhysParams) -> Result<Injection> {
    check_level(n)?;
    let formula = alpha_coefficients(n, params);
    let bbar = PhasePoly::damped_creation(params);
    let prescribed = vacuum(&ProductKind::gamma(*params)).mul_poly(&bbar.powu(n).scale(1.0 / factorial(n).sqrt()));
    let mut coeffs = Vec::new();
    for k in 0..=n / 2 {
        let level = n - 2 * k;
        coeffs.push((level, l2_inner(&hermite_state(params, level), &prescribed, params)?));
    }
    let projection = StateVector::new(Basis::GammaEigen, *params, coeffs);
    Ok(Injection { formula, projection })
}

/// Carry a Moyal-basis superposition into the damped basis.
pub fn inject_state(sv: &StateVector, params: &PhysParams) -> Result<StateVector> {
    sv.expect(Basis::MoyalEigen)?;
    let mut coeffs = Vec::new();
    for &(l, a) in &sv.coeffs {
        check_level(l)?;
        for (m, c) in alpha_coefficients(l, params).coeffs {
            coeffs.push((m, a * c));
        }
    }
    Ok(StateVector::new(Basis::GammaEigen, *params, coeffs))
}

/// Multiply each damped amplitude by `exp(E^γ_m t / iħ) = e^{−iω(m+1/2)t} e^{γt/2}`.
pub fn evolve_damped(sv: &StateVector, t: f64) -> Result<StateVector> {
    sv.expect(Basis::GammaEigen)?;
    let (w, g) = (sv.params.omega, sv.params.gamma);
    Ok(sv.map_amplitudes(|m, a| a * Complex64::new(g * t / 2.0, -w * (f64::from(m) + 0.5) * t).exp()))
}

/// Carry a damped-basis state back to the Moyal basis `ρ_l = ā^l ρ_0/√l!`,
/// re-expanding each Hermite state:
/// `ρ^γ_m ↦ Σ_j (−1)^j √m! 2^{m−2j} Γ^j / (√(m−2j)! j!) · ρ_{m−2j}`.
pub fn eject(sv: &StateVector) -> Result<StateVector> {
    sv.expect(Basis::GammaEigen)?;
    let g = sv.params.mixing();
    let mut coeffs = Vec::new();
    for &(m, a) in &sv.coeffs {
        for j in 0..=m / 2 {
            let l = m - 2 * j;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let c = g.powu(j) * sign * factorial(m).sqrt() * 2f64.powi(l as i32) / (factorial(l).sqrt() * factorial(j));
            coeffs.push((l, a * c));
        }
    }
    Ok(StateVector::new(Basis::MoyalEigen, sv.params, coeffs))
}

/// The ejection computed symbolically: build `Σ c_m ρ^γ_m`, substitute
/// `p ↦ (1 − 2iγ/ω) p` in its polynomial part, swap the damped vacuum for the
/// Moyal one, and project onto `ρ_l` with `c_l = ⟨ρ_l|ψ⟩ / ⟨ρ_l|ρ_l⟩`.
pub fn eject_projection(sv: &StateVector) -> Result<StateVector> {
    sv.expect(Basis::GammaEigen)?;
    let params = &sv.params;
    let mut poly = PhasePoly::zero();
    for &(m, a) in &sv.coeffs {
        poly += &hermite_state(params, m).poly.scale(a);
    }
    let moyal = ProductKind::moyal(*params);
    let psi = vacuum(&moyal).mul_poly(&poly.scale_p(params.damped_width()));
    let abar = PhasePoly::creation(params);
    let top = sv.coeffs.iter().map(|c| c.0).max().unwrap_or(0);
    let mut coeffs = Vec::new();
    for l in 0..=top {
        let rho: ExpPoly = vacuum(&moyal).mul_poly(&abar.powu(l).scale(1.0 / factorial(l).sqrt()));
        let c = l2_inner(&rho, &psi, params)? / l2_inner(&rho, &rho, params)?;
        if c.norm() > 0.0 {
            coeffs.push((l, c));
        }
    }
    Ok(StateVector::new(Basis::MoyalEigen, *params, coeffs))
}

/// `(sv / N, N)` with `N = (Σ|amplitude|²)^{1/2}`.
pub fn normalize_state(sv: &StateVector) -> Result<(StateVector, f64)> {
    let n = sv.norm();
    if n.is_nan() || n <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((sv.map_amplitudes(|_, a| a / n), n))
}

/// Free Moyal evolution from `tau` to `t`: level `m` gains the phase `−ω(m+1/2)(t−τ)`.
pub fn post_evolution(sv: &StateVector, t: f64, tau: f64) -> Result<StateVector> {
    sv.expect(Basis::MoyalEigen)?;
    let w = sv.params.omega;
    Ok(sv.map_amplitudes(|m, a| a * Complex64::new(0.0, -w * (f64::from(m) + 0.5) * (t - tau)).exp()))
}

/// `Σ_k prob_k ħω(level_k + 1/2)` for a Moyal-basis state.
pub fn expected_energy(sv: &StateVector) -> Result<f64> {
    sv.expect(Basis::MoyalEigen)?;
    let hw = sv.params.energy_unit();
    Ok(sv.probabilities().iter().map(|&(l, p)| p * hw * (f64::from(l) + 0.5)).sum())
}

/// Probabilities of the same state in the orthonormal basis `2^l ρ_l`.
pub fn orthonormal_probabilities(sv: &StateVector) -> Result<Vec<(u32, f64)>> {
    sv.expect(Basis::MoyalEigen)?;
    let rescaled = sv.map_amplitudes(|l, a| a / 2f64.powi(l as i32));
    Ok(rescaled.probabilities())
}

/// Outcome of one inject → evolve → eject → normalize run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub n: u32,
    pub tau: OmegaTau,
    /// Normalized Moyal-basis state after ejection.
    pub state: StateVector,
    /// `N_n(τ)`.
    pub norm: f64,
    /// `(k, level, probability)` with `level = n − 2k`.
    pub probabilities: Vec<(u32, u32, f64)>,
    /// Expected energy in units of `ħω`.
    pub energy: f64,
}

fn pipeline(n: u32, sv: &StateVector, tau: OmegaTau, params: &PhysParams) -> Result<Transition> {
    let damped = inject_state(sv, params)?;
    let evolved = evolve_damped(&damped, tau.value() / params.omega)?;
    let (state, norm) = normalize_state(&eject(&evolved)?)?;
    let probabilities = state.probabilities().into_iter().map(|(l, p)| ((n - l) / 2, l, p)).collect();
    let energy = expected_energy(&state)? / params.energy_unit();
    Ok(Transition { n, tau, state, norm, probabilities, energy })
}

/// Start in `ρ_n`, switch on damping `params.gamma` for a time `τ`, switch it off.
pub fn transition_probabilities(n: u32, tau: OmegaTau, params: &PhysParams) -> Result<Transition> {
    check_level(n)?;
    pipeline(n, &StateVector::pure(Basis::MoyalEigen, *params, n), tau, params)
}

/// Piecewise-constant damping: `(gamma, duration)` segments in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSchedule {
    segments: Vec<(f64, f64)>,
}

impl GammaSchedule {
    pub fn new(segments: Vec<(f64, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSchedule("no segments".into()));
        }
        for (i, &(g, d)) in segments.iter().enumerate() {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::InvalidSchedule(format!("segment {i}: damping rate {g} is not ≥ 0")));
            }
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidSchedule(format!("segment {i}: duration {d} is not > 0")));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[(f64, f64)] {
        &self.segments
    }
}

/// State after one schedule segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentResult {
    pub gamma: f64,
    pub duration: f64,
    pub state: StateVector,
}

/// Run `ρ_n` through every segment in turn. A damped segment re-applies the
/// prescription pair at its start and end; an undamped one is a pure phase
/// rotation. Returns the normalized Moyal-basis state after each segment.
pub fn schedule_evolve(n: u32, schedule: &GammaSchedule, params: &PhysParams) -> Result<Vec<SegmentResult>> {
    check_level(n)?;
    let mut state = StateVector::pure(Basis::MoyalEigen, *params, n);
    let mut out = Vec::with_capacity(schedule.segments.len());
    for &(gamma, duration) in &schedule.segments {
        let seg = params.with_gamma(gamma);
        state = StateVector { params: seg, ..state };
        state = if gamma == 0.0 {
            post_evolution(&state, duration, 0.0)?
        } else {
            pipeline(n, &state, OmegaTau::Value(duration * params.omega), &seg)?.state
        };
        out.push(SegmentResult { gamma, duration, state: state.clone() });
    }
    Ok(out)
}
