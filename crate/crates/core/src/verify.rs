//! Named numerical checks grouped into suites, each reporting the worst
//! observed error against a fixed bound.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dissipation::{
    beta_coefficients, eject, eject_projection, evolve_damped, inject, overlap, transition_probabilities, OmegaTau,
};
use crate::eigen::{energy_level, hermite_state, l2_inner, ladder_state, laguerre_projector, normalize, vacuum};
use crate::error::Result;
use crate::fock::{oracle_product_in, FockBasis, PAD};
use crate::gauss::{gauss_integrate_product, heat_apply_poly, ExpPoly};
use crate::phase_poly::{factorial, PhasePoly, PhysParams};
use crate::star::{
    equivalence_t, star, star_bracket, star_exp_closed, star_exp_series, star_left, star_poly, Direction, ProductKind,
    Symbol,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const SEED: u64 = 0x5eed_d1ff;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Algebra,
    Spectra,
    Oracle,
    Dissipation,
    All,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "spectra" => Ok(Suite::Spectra),
            "oracle" => Ok(Suite::Oracle),
            "dissipation" => Ok(Suite::Dissipation),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// Observed error must stay below the value.
    Below(f64),
    /// Observed deviation must exceed the value.
    Above(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub bound: Bound,
    pub passed: bool,
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str, observed: Result<f64>, bound: Bound) -> Self {
        match observed {
            Ok(v) => {
                let passed = match bound {
                    Bound::Below(t) => v < t,
                    Bound::Above(t) => v > t,
                };
                Self { name: name.into(), observed: v, bound, passed, note: None }
            }
            Err(e) => Self { name: name.into(), observed: f64::NAN, bound, passed: false, note: Some(e.to_string()) },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let bound = match self.bound {
            Bound::Below(t) => format!("max_err<{t:e}"),
            Bound::Above(t) => format!("deviation>{t:e}"),
        };
        write!(f, "{status} {}: {bound} observed={:.3e}", self.name, self.observed)?;
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

/// Run one suite (or all of them) at the given parameters.
pub fn run_suite(suite: Suite, params: &PhysParams) -> Vec<Check> {
    match suite {
        Suite::Algebra => algebra(params),
        Suite::Spectra => spectra(params),
        Suite::Oracle => oracle(params),
        Suite::Dissipation => dissipation(params),
        Suite::All => [algebra(params), spectra(params), oracle(params), dissipation(params)].concat(),
    }
}

/// Random polynomial in the scaled variables, degree ≤ `max_deg`, mapped to
/// physical units.
pub fn random_poly(rng: &mut impl Rng, max_deg: u32, params: &PhysParams) -> PhasePoly {
    let terms = rng.gen_range(1..=6);
    let mut out = PhasePoly::zero();
    for _ in 0..terms {
        let deg = rng.gen_range(0..=max_deg);
        let i = rng.gen_range(0..=deg);
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        out += &PhasePoly::monomial(c, i, deg - i);
    }
    out.from_scaled(params)
}

fn products(params: &PhysParams) -> [ProductKind; 2] {
    [ProductKind::moyal(*params), ProductKind::gamma(*params)]
}

/// Phase-space sample points in units of the oscillator length and momentum.
pub fn grid(params: &PhysParams, side: usize, extent: f64) -> Vec<(f64, f64)> {
    let step = if side > 1 { 2.0 * extent / (side - 1) as f64 } else { 0.0 };
    let mut out = Vec::with_capacity(side * side);
    for i in 0..side {
        for j in 0..side {
            let (x, y) = (-extent + i as f64 * step, -extent + j as f64 * step);
            out.push((x * params.q_unit(), y * params.p_unit()));
        }
    }
    out
}

fn worst<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut w = 0.0f64;
    for x in it {
        w = w.max(x?);
    }
    Ok(w)
}

fn poly_rel(a: &PhasePoly, b: &PhasePoly) -> f64 {
    a.max_diff(b) / b.max_abs_coeff().max(1e-300)
}

/// `max_k |[x, y]_⋆ − want|` over both products.
fn commutators(params: &PhysParams) -> Result<f64> {
    let a = PhasePoly::annihilation(params);
    let abar = PhasePoly::creation(params);
    let h = PhasePoly::hamiltonian(params);
    let i = Complex64::i();
    let cases = [
        (&a, &abar, PhasePoly::constant((i * params.hbar).inv())),
        (&a, &h, a.scale(-i * params.omega)),
        (&abar, &h, abar.scale(i * params.omega)),
    ];
    worst(products(params).iter().flat_map(|kind| {
        cases.iter().map(move |(x, y, want)| {
            let b = star_bracket(kind, &Symbol::Poly((*x).clone()), &Symbol::Poly((*y).clone()))?;
            Ok(b.max_diff(&Symbol::Poly(want.clone())))
        })
    }))
}

pub fn associativity(params: &PhysParams, trials: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut w = 0.0f64;
    for _ in 0..trials {
        let f = random_poly(&mut rng, 4, params);
        let g = random_poly(&mut rng, 4, params);
        let h = random_poly(&mut rng, 4, params);
        for kind in products(params) {
            let lhs = star_poly(&kind, &star_poly(&kind, &f, &g)?, &h)?;
            let rhs = star_poly(&kind, &f, &star_poly(&kind, &g, &h)?)?;
            w = w.max(poly_rel(&lhs, &rhs));
        }
    }
    Ok(w)
}

pub fn intertwining(params: &PhysParams, trials: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let c = Complex64::new(0.0, -params.hbar * params.m * params.gamma / 2.0);
    let mut w = 0.0f64;
    for _ in 0..trials {
        let f = random_poly(&mut rng, 4, params);
        let g = random_poly(&mut rng, 4, params);
        let lhs = heat_apply_poly(c, &star_poly(&ProductKind::moyal(*params), &f, &g)?);
        let rhs = star_poly(&ProductKind::gamma(*params), &heat_apply_poly(c, &f), &heat_apply_poly(c, &g))?;
        w = w.max(poly_rel(&lhs, &rhs));
    }
    Ok(w)
}

/// `|conj(f ⋆_γ g) − conj(g) ⋆_γ conj(f)|` for `f = p`, `g = p²`, in units of `ħ m ω`-scaled coefficients.
pub fn hermiticity_deviation(params: &PhysParams) -> Result<f64> {
    let kind = ProductKind::gamma(*params);
    let f = PhasePoly::p().scale(1.0 / params.p_unit());
    let g = PhasePoly::monomial(ONE, 0, 2).scale(1.0 / (params.p_unit() * params.p_unit()));
    let lhs = star_poly(&kind, &f, &g)?.conj();
    let rhs = star_poly(&kind, &g.conj(), &f.conj())?;
    Ok(lhs.max_diff(&rhs))
}

/// ħ → 0: the star bracket approaches the Poisson bracket linearly in ħ².
fn classical_limit(params: &PhysParams) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut w = 0.0f64;
    for _ in 0..10 {
        let f = random_poly(&mut rng, 4, params);
        let g = random_poly(&mut rng, 4, params);
        let poisson = crate::phase_poly::bracket_power_p(1, &f, &g);
        let small = PhysParams { hbar: params.hbar * 1e-4, ..*params };
        let b = star_bracket(&ProductKind::moyal(small), &Symbol::Poly(f), &Symbol::Poly(g))?;
        w = w.max(b.max_diff(&Symbol::Poly(poisson.clone())) / poisson.max_abs_coeff().max(1.0));
    }
    Ok(w)
}

pub fn series_vs_closed(params: &PhysParams, omega_t: f64, terms: u32) -> Result<f64> {
    let t = Complex64::from(omega_t / params.omega);
    worst(products(params).iter().flat_map(|kind| {
        let series = star_exp_series(kind, t, terms);
        let closed = star_exp_closed(kind, t);
        grid(params, 5, 1.0).into_iter().map(move |(q, p)| {
            let (s, c) = (series.as_ref().map_err(Clone::clone)?, closed.as_ref().map_err(Clone::clone)?);
            Ok((s.eval_real(q, p) - c.eval_real(q, p)).norm())
        })
    }))
}

/// Finite-difference residual of `iħ ∂U/∂t = H ⋆ U` on a 5×5 grid.
pub fn schrodinger_residual(params: &PhysParams, omega_t: f64, delta: f64) -> Result<f64> {
    let h = PhasePoly::hamiltonian(params);
    let mut w = 0.0f64;
    for kind in products(params) {
        let t = omega_t / params.omega;
        let dt = delta / params.omega;
        let u = star_exp_closed(&kind, Complex64::from(t))?;
        let up = star_exp_closed(&kind, Complex64::from(t + dt))?;
        let um = star_exp_closed(&kind, Complex64::from(t - dt))?;
        let hu = star_left(&kind, &h, &u)?;
        for (q, p) in grid(params, 5, 1.0) {
            let lhs = Complex64::i() * params.hbar * (up.eval_real(q, p) - um.eval_real(q, p)) / (2.0 * dt);
            w = w.max((lhs - hu.eval_real(q, p)).norm() / params.energy_unit());
        }
    }
    Ok(w)
}

fn eigen_residual(kind: &ProductKind, state: &ExpPoly, n: u32) -> Result<f64> {
    let h = PhasePoly::hamiltonian(&kind.params);
    let lhs = star_left(kind, &h, state)?;
    Ok(lhs.rel_diff(&state.scale(energy_level(kind, n).in_units(&kind.params))))
}

pub fn schrodinger_eigen(params: &PhysParams, n_max: u32) -> Result<f64> {
    let moyal = params.with_gamma(0.0);
    worst((0..=n_max).flat_map(|n| {
        [
            eigen_residual(&ProductKind::moyal(*params), &hermite_state(&moyal, n), n),
            eigen_residual(&ProductKind::gamma(*params), &hermite_state(params, n), n),
        ]
    }))
}

pub fn heisenberg_eigen(params: &PhysParams, n_max: u32) -> Result<f64> {
    worst(
        products(params)
            .into_iter()
            .flat_map(|kind| (0..=n_max).map(move |n| eigen_residual(&kind, &laguerre_projector(&kind, n)?, n))),
    )
}

pub fn gram_defect(params: &PhysParams, n_max: u32) -> Result<f64> {
    let states: Vec<_> = (0..=n_max).map(|n| hermite_state(params, n)).collect();
    let mut w = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let want = if i == j { ONE } else { Complex64::from(0.0) };
            w = w.max((l2_inner(a, b, params)? - want).norm());
        }
    }
    Ok(w)
}

/// `1 − |⟨u|v⟩|` for the normalized ladder and Hermite states.
fn ladder_vs_hermite(params: &PhysParams, n_max: u32) -> Result<f64> {
    let kind = ProductKind::gamma(*params);
    worst((0..=n_max).map(|n| {
        let (u, _) = normalize(&ladder_state(&kind, n)?, params)?;
        let (v, _) = normalize(&hermite_state(params, n), params)?;
        Ok(1.0 - l2_inner(&u, &v, params)?.norm())
    }))
}

fn vacuum_annihilated(params: &PhysParams) -> Result<f64> {
    let a = PhasePoly::annihilation(params);
    worst(products(params).iter().map(|kind| {
        let v = vacuum(kind);
        Ok(star_left(kind, &a, &v)?.weighted_poly().max_abs_coeff() / v.prefactor.norm())
    }))
}

fn vacuum_norm(params: &PhysParams) -> Result<f64> {
    let v = vacuum(&ProductKind::gamma(*params));
    Ok((l2_inner(&v, &v, params)? - ONE).norm())
}

fn vacuum_equivalence(params: &PhysParams) -> Result<f64> {
    let pi0 = Symbol::Exp(vacuum(&ProductKind::moyal(*params)));
    let t = equivalence_t(&pi0, params, Direction::Forward)?;
    Ok(t.max_diff(&Symbol::Exp(vacuum(&ProductKind::gamma(*params)))))
}

/// `|⟨H ⋆_γ φ|ψ⟩ − ⟨φ|H ⋆_γ ψ⟩| / ħω` with `φ = ρ^γ_i`, `ψ = ρ^γ_j`.
pub fn adjointness_witness(params: &PhysParams, i: u32, j: u32) -> Result<f64> {
    let kind = ProductKind::gamma(*params);
    let h = PhasePoly::hamiltonian(params);
    let (phi, psi) = (hermite_state(params, i), hermite_state(params, j));
    let lhs = l2_inner(&star_left(&kind, &h, &phi)?, &psi, params)?;
    let rhs = l2_inner(&phi, &star_left(&kind, &h, &psi)?, params)?;
    Ok((lhs - rhs).norm() / params.energy_unit())
}

pub fn fourier_coefficients(params: &PhysParams, n_max: u32, omega_t: f64) -> Result<f64> {
    let kind = ProductKind::moyal(*params);
    let u = star_exp_closed(&kind, Complex64::from(omega_t / params.omega))?;
    worst((0..=n_max).map(|n| {
        let c = gauss_integrate_product(&laguerre_projector(&kind, n)?, &u, params)?;
        Ok((c - Complex64::new(0.0, -(f64::from(n) + 0.5) * omega_t).exp()).norm())
    }))
}

/// `π_m ⋆ π_n = δ_{mn} π_n` through the matrix oracle.
pub fn projector_idempotency(params: &PhysParams, n_max: u32) -> Result<f64> {
    let basis = FockBasis::new(params, n_max as usize + PAD)?;
    let level = n_max as usize;
    let mut w = 0.0f64;
    for kind in products(params) {
        let pis = (0..=n_max)
            .map(|n| laguerre_projector(&kind, n).map(Symbol::Exp))
            .collect::<Result<Vec<_>>>()?;
        for (m, pm) in pis.iter().enumerate() {
            let single = basis.matrix(&kind, pm)?.truncate(level);
            for (n, pn) in pis.iter().enumerate() {
                let prod = oracle_product_in(&basis, &kind, pm, pn, level)?;
                let err = if m == n { prod.max_diff(&single) } else { prod.max_abs() };
                w = w.max(err);
            }
        }
    }
    Ok(w)
}

fn homomorphism(params: &PhysParams, trials: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let level = 8;
    let basis = FockBasis::new(params, level + PAD)?;
    let mut w = 0.0f64;
    for _ in 0..trials {
        let f = random_poly(&mut rng, 3, params);
        let n = rng.gen_range(0..=4);
        for kind in products(params) {
            let state = Symbol::Exp(laguerre_projector(&kind, n)?);
            let direct = basis.matrix(&kind, &star(&kind, &Symbol::Poly(f.clone()), &state)?)?;
            let oracle = oracle_product_in(&basis, &kind, &Symbol::Poly(f.clone()), &state, level)?;
            let upto = level - (f.degree() as usize).div_ceil(2);
            w = w.max(direct.max_diff_upto(&oracle, upto));
        }
    }
    Ok(w)
}

fn star_exp_diagonal(params: &PhysParams) -> Result<f64> {
    let level = 14;
    let basis = FockBasis::new(params, level)?;
    let kind = ProductKind::moyal(*params);
    let mut w = 0.0f64;
    for wt in [0.3, 1.0] {
        let u = Symbol::Exp(star_exp_closed(&kind, Complex64::from(wt / params.omega))?);
        let m = basis.matrix(&kind, &u)?;
        for n in 0..=level - 2 {
            for k in 0..=level - 2 {
                let want = if n == k { Complex64::new(0.0, -(n as f64 + 0.5) * wt).exp() } else { Complex64::from(0.0) };
                w = w.max((m.get(n, k) - want).norm());
            }
        }
    }
    Ok(w)
}

/// τ grid avoiding revival points.
pub fn tau_grid(count: usize) -> Vec<f64> {
    (0..count).map(|i| 0.05 + 6.2 * i as f64 / count as f64 + 0.013).collect()
}

fn dissipation(params: &PhysParams) -> Vec<Check> {
    let g = if params.gamma == 0.0 { vec![0.0] } else { vec![params.gamma] };
    let configs: Vec<_> = g.iter().map(|&g| params.with_gamma(g)).collect();
    let taus = tau_grid(50);
    let mut checks = Vec::new();
    let sweep = |f: &dyn Fn(u32, f64, &PhysParams) -> Result<f64>| -> Result<f64> {
        let mut w = 0.0f64;
        for p in &configs {
            for n in 0..=10 {
                for &wt in &taus {
                    w = w.max(f(n, wt, p)?);
                }
            }
        }
        Ok(w)
    };
    checks.push(Check::new(
        "probability_normalization",
        sweep(&|n, wt, p| {
            let t = transition_probabilities(n, OmegaTau::Value(wt), p)?;
            Ok((t.probabilities.iter().map(|x| x.2).sum::<f64>() - 1.0).abs())
        }),
        Bound::Below(1e-12),
    ));
    checks.push(Check::new(
        "parity_selection",
        sweep(&|n, wt, p| {
            let t = transition_probabilities(n, OmegaTau::Value(wt), p)?;
            Ok(t.probabilities.iter().filter(|x| x.1 != n - 2 * x.0).count() as f64)
        }),
        Bound::Below(0.5),
    ));
    checks.push(Check::new(
        "revival",
        worst(configs.iter().flat_map(|p| {
            (0..3).flat_map(move |m| {
                (0..=10).map(move |n| {
                    let tau = OmegaTau::PiFraction { num: 1 + 2 * m, den: 1 };
                    let t = transition_probabilities(n, tau, p)?;
                    Ok((t.probabilities[0].2 - 1.0).abs())
                })
            })
        })),
        Bound::Below(1e-12),
    ));
    checks.push(Check::new(
        "energy_bound",
        sweep(&|n, wt, p| {
            let t = transition_probabilities(n, OmegaTau::Value(wt), p)?;
            Ok((t.energy - (f64::from(n) + 0.5)).max(0.0))
        }),
        Bound::Below(1e-12),
    ));
    checks.push(Check::new(
        "pipeline_vs_beta_formula",
        sweep(&|n, wt, p| {
            let tau = OmegaTau::Value(wt);
            let t = transition_probabilities(n, tau, p)?;
            let (beta, _) = crate::dissipation::normalize_state(&beta_coefficients(n, tau, p))?;
            Ok(t.state.coeffs.iter().map(|&(l, a)| (a.norm_sqr() - beta.amplitude(l).norm_sqr()).abs()).fold(0.0, f64::max))
        }),
        Bound::Below(1e-10),
    ));
    checks.push(Check::new(
        "formula_projection_parallelism",
        worst(configs.iter().flat_map(|p| {
            (0..=6).map(move |n| {
                let inj = inject(n, p)?;
                let alpha = 1.0 - overlap(&inj.formula, &inj.projection);
                let damped = evolve_damped(&inj.projection, 0.9 / p.omega)?;
                let beta = 1.0 - overlap(&eject(&damped)?, &eject_projection(&damped)?);
                Ok(alpha.max(beta))
            })
        })),
        Bound::Below(1e-8),
    ));
    checks.push(Check::new(
        "small_gamma_limit",
        worst((0..=10).flat_map(|n| {
            taus.iter().map(move |&wt| {
                let t = transition_probabilities(n, OmegaTau::Value(wt), &params.with_gamma(1e-3 * params.omega))?;
                Ok(1.0 - t.probabilities[0].2)
            })
        })),
        Bound::Below(1e-4),
    ));
    checks
}

fn algebra(params: &PhysParams) -> Vec<Check> {
    let hermiticity = if params.gamma > 0.0 {
        Check::new("hermiticity_breaking", hermiticity_deviation(params), Bound::Above(1e-3))
    } else {
        Check::new("hermiticity_restored", hermiticity_deviation(params), Bound::Below(1e-12))
    };
    vec![
        Check::new("commutators", commutators(params), Bound::Below(1e-12)),
        Check::new("associativity", associativity(params, 50), Bound::Below(1e-10)),
        Check::new("intertwining", intertwining(params, 50), Bound::Below(1e-10)),
        hermiticity,
        Check::new("classical_limit", classical_limit(params), Bound::Below(1e-6)),
        Check::new("star_exp_series_vs_closed", series_vs_closed(params, 0.1, 40), Bound::Below(1e-8)),
        Check::new("schrodinger_ode", schrodinger_residual(params, 0.7, 1e-5), Bound::Below(1e-6)),
    ]
}

fn spectra(params: &PhysParams) -> Vec<Check> {
    let mut checks = vec![
        Check::new("schrodinger_eigen_equations", schrodinger_eigen(params, 10), Bound::Below(1e-10)),
        Check::new("heisenberg_eigen_equations", heisenberg_eigen(params, 10), Bound::Below(1e-10)),
        Check::new("gram_identity", gram_defect(params, 8), Bound::Below(1e-9)),
        Check::new("ladder_vs_hermite", ladder_vs_hermite(params, 8), Bound::Below(1e-9)),
        Check::new("vacuum_annihilated", vacuum_annihilated(params), Bound::Below(1e-10)),
        Check::new("vacuum_norm", vacuum_norm(params), Bound::Below(1e-10)),
        Check::new("vacuum_equivalence", vacuum_equivalence(params), Bound::Below(1e-10)),
        Check::new("moyal_fourier_coefficients", fourier_coefficients(params, 12, 0.7), Bound::Below(1e-7)),
    ];
    if params.gamma > 0.0 {
        checks.push(Check::new("adjointness_witness_0_2", adjointness_witness(params, 0, 2), Bound::Above(1e-3)));
        checks.push(Check::new("adjointness_witness_0_0", adjointness_witness(params, 0, 0), Bound::Above(1e-3)));
    } else {
        checks.push(Check::new("adjointness_restored_0_2", adjointness_witness(params, 0, 2), Bound::Below(1e-10)));
    }
    checks
}

fn oracle(params: &PhysParams) -> Vec<Check> {
    vec![
        Check::new("projector_idempotency", projector_idempotency(params, 6), Bound::Below(1e-8)),
        Check::new("homomorphism", homomorphism(params, 20), Bound::Below(1e-8)),
        Check::new("star_exp_diagonal", star_exp_diagonal(params), Bound::Below(1e-7)),
    ]
}

/// `Σ_n ρ̃^γ_n s^n / n!` against `exp(2s b̄ − Γ s²) ρ^γ_0` at sample points.
pub fn generating_function_defect(params: &PhysParams, s: f64, terms: u32) -> Result<f64> {
    let kind = ProductKind::gamma(*params);
    let bbar = PhasePoly::damped_creation(params);
    let abar = PhasePoly::creation(params);
    let mut states = vec![vacuum(&kind)];
    for _ in 0..terms {
        let next = star_left(&kind, &abar, states.last().unwrap())?;
        states.push(next);
    }
    let v = vacuum(&kind);
    worst(grid(params, 3, 1.0).into_iter().map(|(q, p)| {
        let series: Complex64 =
            states.iter().enumerate().map(|(n, r)| r.eval_real(q, p) * s.powi(n as i32) / factorial(n as u32)).sum();
        let closed = (bbar.eval_real(q, p) * (2.0 * s) - params.mixing() * s * s).exp() * v.eval_real(q, p);
        Ok((series - closed).norm())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_format() {
        let c = Check::new("associativity", Ok(3e-15), Bound::Below(1e-10));
        assert!(c.passed);
        assert!(c.to_string().contains("associativity: max_err<1e-10"));
        let d = Check::new("witness", Ok(1e-5), Bound::Above(1e-3));
        assert!(!d.passed);
        assert!(d.to_string().starts_with("FAIL witness: deviation>1e-3"));
        let e = Check::new("x", Err(crate::Error::NonIntegrable), Bound::Below(1.0));
        assert!(!e.passed && e.observed.is_nan());
    }

    #[test]
    fn random_polys_are_reproducible() {
        let p = PhysParams::unit(0.0);
        let a = random_poly(&mut ChaCha8Rng::seed_from_u64(7), 4, &p);
        let b = random_poly(&mut ChaCha8Rng::seed_from_u64(7), 4, &p);
        assert_eq!(a, b);
        assert!(a.degree() <= 4);
    }

    #[test]
    fn algebra_suite_passes_with_and_without_damping() {
        for g in [0.0, 0.5] {
            for check in run_suite(Suite::Algebra, &PhysParams::unit(g)) {
                assert!(check.passed, "{check}");
            }
        }
    }

    #[test]
    fn generating_function_matches() {
        assert!(generating_function_defect(&PhysParams::unit(0.3), 0.3, 20).unwrap() < 1e-8);
    }

    #[test]
    fn nonunit_parameters() {
        let params = PhysParams::new(2.0, 0.5, 0.3, 0.2).unwrap();
        for check in run_suite(Suite::Algebra, &params) {
            assert!(check.passed, "{check}");
        }
        assert!(gram_defect(&params, 6).unwrap() < 1e-9);
        assert!(schrodinger_eigen(&params, 6).unwrap() < 1e-10);
    }
}
