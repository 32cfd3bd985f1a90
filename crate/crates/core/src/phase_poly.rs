//! Complex polynomials in the phase-space variables `(q, p)` and the
//! bidifferential bracket powers built from them.
//!
//! Coefficients are `Complex64`. After every arithmetic operation the map is
//! pruned: entries whose modulus falls below `PRUNE_RELATIVE` times the largest
//! modulus are dropped, so round-off litter never inflates the degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const PRUNE_RELATIVE: f64 = 1e-14;

/// Largest total degree a polynomial may reach before operations report
/// `DegreeOverflow` (forty star powers of a quadratic).
pub const MAX_DEGREE: u32 = 80;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Physical constants of the oscillator. `gamma` is the damping rate; every
/// other field is strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
    pub gamma: f64,
}

impl PhysParams {
    pub fn new(m: f64, omega: f64, hbar: f64, gamma: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(m) {
            return Err(Error::InvalidParams(format!("mass must be positive, got {m}")));
        }
        if !ok(omega) {
            return Err(Error::InvalidParams(format!("omega must be positive, got {omega}")));
        }
        if !ok(hbar) {
            return Err(Error::InvalidParams(format!("hbar must be positive, got {hbar}")));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParams(format!("gamma must be non-negative, got {gamma}")));
        }
        Ok(Self { m, omega, hbar, gamma })
    }

    /// `m = omega = hbar = 1` with the given damping ratio `gamma / omega`.
    pub fn unit(gamma_over_omega: f64) -> Self {
        Self { m: 1.0, omega: 1.0, hbar: 1.0, gamma: gamma_over_omega }
    }

    pub fn with_gamma(self, gamma: f64) -> Self {
        Self { gamma, ..self }
    }

    pub fn gamma_over_omega(&self) -> f64 {
        self.gamma / self.omega
    }

    /// The dimensionless counterpart used by the scaling maps.
    pub fn scaled(&self) -> Self {
        Self::unit(self.gamma_over_omega())
    }

    /// Length unit `sqrt(hbar / (m omega))`.
    pub fn q_unit(&self) -> f64 {
        (self.hbar / (self.m * self.omega)).sqrt()
    }

    /// Momentum unit `sqrt(m hbar omega)`.
    pub fn p_unit(&self) -> f64 {
        (self.m * self.hbar * self.omega).sqrt()
    }

    pub fn energy_unit(&self) -> f64 {
        self.hbar * self.omega
    }

    /// `1 - 2 i gamma / omega`, the momentum rescaling of the damped vacuum.
    pub fn damped_width(&self) -> Complex64 {
        Complex64::new(1.0, -2.0 * self.gamma_over_omega())
    }

    /// `Γ = (i gamma/omega) / (1 - 2 i gamma/omega)`.
    pub fn mixing(&self) -> Complex64 {
        Complex64::new(0.0, self.gamma_over_omega()) / self.damped_width()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Q,
    P,
}

/// Sparse polynomial `Σ c_ij q^i p^j`.
#[derive(Clone, Default, PartialEq)]
pub struct PhasePoly {
    terms: BTreeMap<(u32, u32), Complex64>,
}

impl fmt::Debug for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)·q^{i}p^{j}", c.re, c.im)?;
        }
        Ok(())
    }
}

impl PhasePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    pub fn monomial(c: impl Into<Complex64>, q_deg: u32, p_deg: u32) -> Self {
        let mut terms = BTreeMap::new();
        let c = c.into();
        if c != ZERO {
            terms.insert((q_deg, p_deg), c);
        }
        Self { terms }
    }

    pub fn q() -> Self {
        Self::monomial(ONE, 1, 0)
    }

    pub fn p() -> Self {
        Self::monomial(ONE, 0, 1)
    }

    /// `a q + b p + c`.
    pub fn linear(a: Complex64, b: Complex64, c: Complex64) -> Self {
        Self::from_terms([((1, 0), a), ((0, 1), b), ((0, 0), c)])
    }

    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Complex64)>,
    {
        let mut terms = BTreeMap::new();
        for (k, c) in iter {
            *terms.entry(k).or_insert(ZERO) += c;
        }
        let mut out = Self { terms };
        out.prune();
        out
    }

    /// `H = p²/2m + m ω² q²/2`.
    pub fn hamiltonian(params: &PhysParams) -> Self {
        Self::from_terms([
            ((0, 2), Complex64::from(0.5 / params.m)),
            ((2, 0), Complex64::from(0.5 * params.m * params.omega * params.omega)),
        ])
    }

    /// Annihilation function `a = p/√(2mħω) − i √(mω/2ħ) q`.
    pub fn annihilation(params: &PhysParams) -> Self {
        let (cq, cp) = ladder_coeffs(params);
        Self::linear(-cq, cp, ZERO)
    }

    /// Creation function `ā = p/√(2mħω) + i √(mω/2ħ) q`.
    pub fn creation(params: &PhysParams) -> Self {
        let (cq, cp) = ladder_coeffs(params);
        Self::linear(cq, cp, ZERO)
    }

    /// `b̄(q, p) = ā(q, p / (1 − 2iγ/ω))`.
    pub fn damped_creation(params: &PhysParams) -> Self {
        Self::creation(params).scale_p(params.damped_width().inv())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, q_deg: u32, p_deg: u32) -> Complex64 {
        self.terms.get(&(q_deg, p_deg)).copied().unwrap_or(ZERO)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: Var) -> u32 {
        self.terms
            .keys()
            .map(|&(i, j)| match var {
                Var::Q => i,
                Var::P => j,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn check_degree(self) -> Result<Self> {
        let degree = self.degree();
        if degree > MAX_DEGREE {
            Err(Error::DegreeOverflow { degree, max: MAX_DEGREE })
        } else {
            Ok(self)
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, c) in &self.terms {
            let d = *c - other.terms.get(k).copied().unwrap_or(ZERO);
            worst = worst.max(d.norm());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    fn prune(&mut self) {
        let cutoff = PRUNE_RELATIVE * self.max_abs_coeff();
        self.terms.retain(|_, c| c.norm() > cutoff && *c != ZERO);
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        if c == ZERO {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(&k, &v)| (k, v * c)).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&k, v)| (k, v.conj())).collect() }
    }

    /// Substitute `p → factor · p`.
    pub fn scale_p(&self, factor: Complex64) -> Self {
        let mut out: Self = Self {
            terms: self.terms.iter().map(|(&(i, j), &c)| ((i, j), c * factor.powu(j))).collect(),
        };
        out.prune();
        out
    }

    /// Substitute `q → qs · q`, `p → ps · p`.
    pub fn scale_vars(&self, qs: f64, ps: f64) -> Self {
        let mut out = Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), &c)| ((i, j), c * qs.powi(i as i32) * ps.powi(j as i32)))
                .collect(),
        };
        out.prune();
        out
    }

    /// Rewrite a polynomial in physical `(q, p)` as a polynomial in the
    /// dimensionless `(Q, P)` with `q = Q·√(ħ/mω)`, `p = P·√(mħω)`.
    pub fn to_scaled(&self, params: &PhysParams) -> Self {
        self.scale_vars(params.q_unit(), params.p_unit())
    }

    pub fn from_scaled(&self, params: &PhysParams) -> Self {
        self.scale_vars(1.0 / params.q_unit(), 1.0 / params.p_unit())
    }

    pub fn derive(&self, var: Var, order: u32) -> Self {
        if order == 0 {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (&(i, j), &c) in &self.terms {
            let (deg, other) = match var {
                Var::Q => (i, j),
                Var::P => (j, i),
            };
            if deg < order {
                continue;
            }
            let falling: f64 = (0..order).map(|r| (deg - r) as f64).product();
            let key = match var {
                Var::Q => (deg - order, other),
                Var::P => (other, deg - order),
            };
            terms.insert(key, c * falling);
        }
        Self { terms }
    }

    /// Horner evaluation: outer in `q`, inner in `p`.
    pub fn eval(&self, q: Complex64, p: Complex64) -> Complex64 {
        let dq = self.degree_in(Var::Q) as usize;
        let dp = self.degree_in(Var::P) as usize;
        let mut dense = vec![vec![ZERO; dp + 1]; dq + 1];
        for (&(i, j), &c) in &self.terms {
            dense[i as usize][j as usize] = c;
        }
        dense
            .iter()
            .rev()
            .fold(ZERO, |acc, row| acc * q + row.iter().rev().fold(ZERO, |s, &c| s * p + c))
    }

    pub fn eval_real(&self, q: f64, p: f64) -> Complex64 {
        self.eval(Complex64::from(q), Complex64::from(p))
    }

    /// Multiply by `q^di p^dj`.
    pub fn shift_degrees(&self, di: u32, dj: u32) -> Self {
        if di == 0 && dj == 0 {
            return self.clone();
        }
        Self { terms: self.terms.iter().map(|(&(i, j), &c)| ((i + di, j + dj), c)).collect() }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        (self * other).check_degree()
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

fn ladder_coeffs(params: &PhysParams) -> (Complex64, Complex64) {
    let cq = Complex64::new(0.0, (params.m * params.omega / (2.0 * params.hbar)).sqrt());
    let cp = Complex64::from(1.0 / (2.0 * params.m * params.hbar * params.omega).sqrt());
    (cq, cp)
}

impl Add<&PhasePoly> for &PhasePoly {
    type Output = PhasePoly;
    fn add(self, rhs: &PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PhasePoly {
    type Output = PhasePoly;
    fn add(mut self, rhs: PhasePoly) -> PhasePoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&PhasePoly> for PhasePoly {
    fn add_assign(&mut self, rhs: &PhasePoly) {
        for (&k, &c) in &rhs.terms {
            *self.terms.entry(k).or_insert(ZERO) += c;
        }
        self.prune();
    }
}

impl Sub<&PhasePoly> for &PhasePoly {
    type Output = PhasePoly;
    fn sub(self, rhs: &PhasePoly) -> PhasePoly {
        let mut out = self.clone();
        for (&k, &c) in &rhs.terms {
            *out.terms.entry(k).or_insert(ZERO) -= c;
        }
        out.prune();
        out
    }
}

impl Sub for PhasePoly {
    type Output = PhasePoly;
    fn sub(self, rhs: PhasePoly) -> PhasePoly {
        &self - &rhs
    }
}

impl Neg for &PhasePoly {
    type Output = PhasePoly;
    fn neg(self) -> PhasePoly {
        self.scale(-ONE)
    }
}

impl Mul<&PhasePoly> for &PhasePoly {
    type Output = PhasePoly;
    fn mul(self, rhs: &PhasePoly) -> PhasePoly {
        let mut terms: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for (&(i1, j1), &c1) in &self.terms {
            for (&(i2, j2), &c2) in &rhs.terms {
                *terms.entry((i1 + i2, j1 + j2)).or_insert(ZERO) += c1 * c2;
            }
        }
        let mut out = PhasePoly { terms };
        out.prune();
        out
    }
}

impl Mul for PhasePoly {
    type Output = PhasePoly;
    fn mul(self, rhs: PhasePoly) -> PhasePoly {
        &self * &rhs
    }
}

impl Mul<Complex64> for &PhasePoly {
    type Output = PhasePoly;
    fn mul(self, rhs: Complex64) -> PhasePoly {
        self.scale(rhs)
    }
}

impl Mul<f64> for &PhasePoly {
    type Output = PhasePoly;
    fn mul(self, rhs: f64) -> PhasePoly {
        self.scale(rhs)
    }
}

/// Cached mixed partial derivatives of a function `P · exp(−Q)` expressed in
/// its own Gaussian frame: entry `(a, b)` holds the polynomial `R` with
/// `∂_q^a ∂_p^b (P e^{−Q}) = R e^{−Q}`. A pure polynomial uses `Q = 0`.
pub(crate) struct DerivTable {
    grad_q: PhasePoly,
    grad_p: PhasePoly,
    limit: Option<(u32, u32)>,
    cache: HashMap<(u32, u32), PhasePoly>,
}

impl DerivTable {
    pub(crate) fn polynomial(poly: &PhasePoly) -> Self {
        let limit = Some((poly.degree_in(Var::Q), poly.degree_in(Var::P)));
        Self::build(poly.clone(), PhasePoly::zero(), PhasePoly::zero(), limit)
    }

    /// `grad_q`, `grad_p` are the partials of the exponent `Q`.
    pub(crate) fn framed(poly: &PhasePoly, grad_q: PhasePoly, grad_p: PhasePoly) -> Self {
        Self::build(poly.clone(), grad_q, grad_p, None)
    }

    fn build(poly: PhasePoly, grad_q: PhasePoly, grad_p: PhasePoly, limit: Option<(u32, u32)>) -> Self {
        let mut cache = HashMap::new();
        cache.insert((0, 0), poly);
        Self { grad_q, grad_p, limit, cache }
    }

    /// Whether every derivative of orders `(a, b)` is identically zero.
    pub(crate) fn vanishes(&self, a: u32, b: u32) -> bool {
        matches!(self.limit, Some((lq, lp)) if a > lq || b > lp)
    }

    /// Largest useful derivative orders, `None` when unbounded.
    pub(crate) fn limit(&self) -> Option<(u32, u32)> {
        self.limit
    }

    pub(crate) fn get(&mut self, a: u32, b: u32) -> PhasePoly {
        if self.vanishes(a, b) {
            return PhasePoly::zero();
        }
        if let Some(r) = self.cache.get(&(a, b)) {
            return r.clone();
        }
        let r = if b > 0 {
            let prev = self.get(a, b - 1);
            &prev.derive(Var::P, 1) - &(&prev * &self.grad_p)
        } else {
            let prev = self.get(a - 1, 0);
            &prev.derive(Var::Q, 1) - &(&prev * &self.grad_q)
        };
        self.cache.insert((a, b), r.clone());
        r
    }
}

/// Sum `Σ w(i,j,l) · ∂_q^i ∂_p^{j+l} f · ∂_q^j ∂_p^{i+l} g` over the index
/// triples produced by `indices`, skipping terms that vanish identically.
///
/// This is the diagonal restriction of
/// `(∂_{q1}∂_{p2})^i (−∂_{p1}∂_{q2})^j (∂_{p1}∂_{p2})^l f⊗g` once the weights
/// carry the signs and scalars.
pub(crate) fn bidifferential<I>(f: &mut DerivTable, g: &mut DerivTable, indices: I) -> PhasePoly
where
    I: IntoIterator<Item = ((u32, u32, u32), Complex64)>,
{
    let mut acc: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
    for ((i, j, l), w) in indices {
        if w == ZERO || f.vanishes(i, j + l) || g.vanishes(j, i + l) {
            continue;
        }
        let df = f.get(i, j + l);
        if df.is_zero() {
            continue;
        }
        let dg = g.get(j, i + l);
        for (&(i1, j1), &c1) in &df.terms {
            for (&(i2, j2), &c2) in &dg.terms {
                *acc.entry((i1 + i2, j1 + j2)).or_insert(ZERO) += w * c1 * c2;
            }
        }
    }
    let mut out = PhasePoly { terms: acc };
    out.prune();
    out
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Weights of the k-th power of `∂_{q1}∂_{p2} − ∂_{p1}∂_{q2} − 2γm ∂_{p1}∂_{p2}`.
pub(crate) fn bracket_power_weights(k: u32, gamma_m: f64) -> Vec<((u32, u32, u32), Complex64)> {
    let mut out = Vec::new();
    let kf = factorial(k);
    let l_max = if gamma_m == 0.0 { 0 } else { k };
    for l in 0..=l_max {
        for j in 0..=(k - l) {
            let i = k - l - j;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let w = kf / (factorial(i) * factorial(j) * factorial(l))
                * sign
                * (-2.0 * gamma_m).powi(l as i32);
            out.push(((i, j, l), Complex64::from(w)));
        }
    }
    out
}

/// `P_k(f, g)`: the k-th power of the Poisson bivector, restricted to the
/// diagonal. `P_1` is the canonical bracket `∂_q f ∂_p g − ∂_p f ∂_q g`.
pub fn bracket_power_p(k: u32, f: &PhasePoly, g: &PhasePoly) -> PhasePoly {
    let mut tf = DerivTable::polynomial(f);
    let mut tg = DerivTable::polynomial(g);
    bidifferential(&mut tf, &mut tg, bracket_power_weights(k, 0.0))
}

/// `M_k(f, g)`: k-th power of the damped bracket
/// `M = P − 2γm ∂_p ⊗ ∂_p`. Coincides with `P_k` when `γ = 0`.
pub fn bracket_power_m(k: u32, f: &PhasePoly, g: &PhasePoly, params: &PhysParams) -> PhasePoly {
    let mut tf = DerivTable::polynomial(f);
    let mut tg = DerivTable::polynomial(g);
    bidifferential(&mut tf, &mut tg, bracket_power_weights(k, params.gamma * params.m))
}

/// `θ(f) = ½ ∂²f/∂p²`.
pub fn theta(f: &PhasePoly) -> PhasePoly {
    f.derive(Var::P, 2).scale(0.5)
}
