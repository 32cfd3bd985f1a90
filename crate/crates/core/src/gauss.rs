//! Functions of the form `prefactor · P(q, p) · exp(−Q(q, p))` with `P` a
//! polynomial and `Q` a complex quadratic form.
//!
//! Exponents are stored with the leading minus sign pulled out, so a larger
//! real part means faster decay. The class is closed under differentiation,
//! pointwise products, multiplication by polynomials and the heat-type
//! operator `exp(c ∂²/∂p²)`; integrals against the Liouville measure
//! `dq dp / 2πħ` are evaluated in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase_poly::{PhasePoly, PhysParams, Var};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Width factors closer to zero than this are treated as singular.
pub const SINGULAR_WIDTH: f64 = 1e-12;

/// Quadratic exponent `Q = A q² + B p² + C qp + Dq q + Dp p + E`; the
/// function it describes is `exp(−Q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadExp {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub dq: Complex64,
    pub dp: Complex64,
    pub e: Complex64,
}

impl Default for QuadExp {
    fn default() -> Self {
        Self::zero()
    }
}

impl QuadExp {
    pub fn zero() -> Self {
        Self { a: ZERO, b: ZERO, c: ZERO, dq: ZERO, dp: ZERO, e: ZERO }
    }

    /// `A q² + B p²`.
    pub fn diagonal(a: Complex64, b: Complex64) -> Self {
        Self { a, b, ..Self::zero() }
    }

    /// `s · H(q, p)`.
    pub fn hamiltonian(s: Complex64, params: &PhysParams) -> Self {
        Self::diagonal(
            s * 0.5 * params.m * params.omega * params.omega,
            s * 0.5 / params.m,
        )
    }

    pub fn eval(&self, q: Complex64, p: Complex64) -> Complex64 {
        self.a * q * q + self.b * p * p + self.c * q * p + self.dq * q + self.dp * p + self.e
    }

    pub fn conj(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: self.b.conj(),
            c: self.c.conj(),
            dq: self.dq.conj(),
            dp: self.dp.conj(),
            e: self.e.conj(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
            dq: self.dq + o.dq,
            dp: self.dp + o.dp,
            e: self.e + o.e,
        }
    }

    fn coeffs(&self) -> [Complex64; 6] {
        [self.a, self.b, self.c, self.dq, self.dp, self.e]
    }

    /// Largest coefficient-wise modulus of the difference.
    pub fn max_diff(&self, o: &Self) -> f64 {
        self.coeffs()
            .iter()
            .zip(o.coeffs().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// True when the real part of the quadratic form is positive definite.
    pub fn is_integrable(&self) -> bool {
        let (a, b, c) = (self.a.re, self.b.re, self.c.re);
        a > 0.0 && b > 0.0 && 4.0 * a * b > c * c
    }

    /// `∂Q/∂q = 2A q + C p + Dq`.
    pub fn grad_q(&self) -> PhasePoly {
        PhasePoly::linear(self.a * 2.0, self.c, self.dq)
    }

    /// `∂Q/∂p = C q + 2B p + Dp`.
    pub fn grad_p(&self) -> PhasePoly {
        PhasePoly::linear(self.c, self.b * 2.0, self.dp)
    }

    fn same_as(&self, o: &Self) -> bool {
        let scale = self.coeffs().iter().chain(o.coeffs().iter()).map(|c| c.norm()).fold(1.0, f64::max);
        self.max_diff(o) <= 1e-12 * scale
    }
}

/// `prefactor · poly(q, p) · exp(−exponent(q, p))`.
///
/// The constant term of the exponent is always folded into the prefactor.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPoly {
    pub prefactor: Complex64,
    pub poly: PhasePoly,
    pub exponent: QuadExp,
}

impl ExpPoly {
    pub fn new(prefactor: Complex64, poly: PhasePoly, exponent: QuadExp) -> Self {
        let prefactor = prefactor * (-exponent.e).exp();
        Self { prefactor, poly, exponent: QuadExp { e: ZERO, ..exponent } }
    }

    pub fn gaussian(prefactor: Complex64, exponent: QuadExp) -> Self {
        Self::new(prefactor, PhasePoly::one(), exponent)
    }

    /// A polynomial viewed as a member of the class with a trivial exponent.
    pub fn from_poly(poly: PhasePoly) -> Self {
        Self::new(ONE, poly, QuadExp::zero())
    }

    pub fn eval(&self, q: Complex64, p: Complex64) -> Complex64 {
        self.prefactor * self.poly.eval(q, p) * (-self.exponent.eval(q, p)).exp()
    }

    pub fn eval_real(&self, q: f64, p: f64) -> Complex64 {
        self.eval(Complex64::from(q), Complex64::from(p))
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor == ZERO || self.poly.is_zero()
    }

    /// `prefactor · poly`, the polynomial that multiplies `exp(−exponent)`.
    pub fn weighted_poly(&self) -> PhasePoly {
        self.poly.scale(self.prefactor)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        Self { prefactor: self.prefactor * c.into(), ..self.clone() }
    }

    pub fn conj(&self) -> Self {
        Self { prefactor: self.prefactor.conj(), poly: self.poly.conj(), exponent: self.exponent.conj() }
    }

    pub fn mul_poly(&self, f: &PhasePoly) -> Self {
        Self { poly: &self.poly * f, ..self.clone() }
    }

    /// Pointwise product.
    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.prefactor * o.prefactor, &self.poly * &o.poly, self.exponent.add(&o.exponent))
    }

    pub fn same_frame(&self, o: &Self) -> bool {
        self.exponent.same_as(&o.exponent)
    }

    /// Sum of two members sharing one exponent.
    pub fn try_add(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        if !self.same_frame(o) {
            return Err(Error::ExponentMismatch);
        }
        let ratio = o.prefactor / self.prefactor;
        Ok(Self { poly: &self.poly + &o.poly.scale(ratio), ..self.clone() })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.scale(-ONE))
    }

    /// Largest coefficient-wise modulus of `self − other`, comparing
    /// `prefactor · poly` and the exponent coefficients.
    pub fn max_diff(&self, o: &Self) -> f64 {
        let frame = self.exponent.max_diff(&o.exponent);
        frame.max(self.weighted_poly().max_diff(&o.weighted_poly()))
    }

    /// `max_diff` divided by the largest coefficient of either operand.
    pub fn rel_diff(&self, o: &Self) -> f64 {
        let scale = self.weighted_poly().max_abs_coeff().max(o.weighted_poly().max_abs_coeff());
        if scale == 0.0 {
            return self.exponent.max_diff(&o.exponent);
        }
        self.max_diff(o) / scale
    }

    pub fn derive(&self, var: Var, order: u32) -> Self {
        let grad = match var {
            Var::Q => self.exponent.grad_q(),
            Var::P => self.exponent.grad_p(),
        };
        let mut poly = self.poly.clone();
        for _ in 0..order {
            poly = &poly.derive(var, 1) - &(&poly * &grad);
        }
        Self { poly, ..self.clone() }
    }
}

/// `∫ x^k e^{−w x²} dx` for `k = 0..=max`, principal branch of `√w`.
fn moments(w: Complex64, max: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; max + 1];
    out[0] = Complex64::from(PI.sqrt()) / w.sqrt();
    let mut k = 2;
    while k <= max {
        out[k] = out[k - 2] * ((k - 1) as f64) / (w * 2.0);
        k += 2;
    }
    out
}

/// Rewrite `P(q, p)` after the substitution `p → p + α q + β`.
fn shift_p(poly: &PhasePoly, alpha: Complex64, beta: Complex64) -> PhasePoly {
    if alpha == ZERO && beta == ZERO {
        return poly.clone();
    }
    let base = PhasePoly::linear(alpha, ONE, beta);
    let dp = poly.degree_in(Var::P) as usize;
    let mut powers = Vec::with_capacity(dp + 1);
    powers.push(PhasePoly::one());
    for j in 1..=dp {
        let next = &powers[j - 1] * &base;
        powers.push(next);
    }
    let mut acc = PhasePoly::zero();
    for ((i, j), c) in poly.terms() {
        acc += &powers[j as usize].scale(c).shift_degrees(i, 0);
    }
    acc
}

/// Rewrite a univariate polynomial in `q` (stored with `p` degree 0) after
/// `q → q + β`.
fn shift_q(poly: &PhasePoly, beta: Complex64) -> PhasePoly {
    if beta == ZERO {
        return poly.clone();
    }
    let base = PhasePoly::linear(ONE, ZERO, beta);
    let mut acc = PhasePoly::zero();
    let mut power = PhasePoly::one();
    let dq = poly.degree_in(Var::Q);
    for i in 0..=dq {
        let c = poly.coeff(i, 0);
        if c != ZERO {
            acc += &power.scale(c);
        }
        power = &power * &base;
    }
    acc
}

/// `∫ f dμ` with `dμ = dq dp / 2πħ`, evaluated in closed form.
///
/// The `p` integral is done first after completing the square, then the
/// remaining Gaussian in `q`. Each step uses the principal branch of the
/// square root, which is the analytic continuation from real widths when the
/// real part of the form is positive definite.
pub fn gauss_integrate(f: &ExpPoly, params: &PhysParams) -> Result<Complex64> {
    let x = &f.exponent;
    if !x.is_integrable() {
        return Err(Error::NonIntegrable);
    }
    if f.is_zero() {
        return Ok(ZERO);
    }
    let (a, b, c) = (x.a, x.b, x.c);
    // p = y − (C q + Dp) / 2B
    let alpha = -c / (b * 2.0);
    let beta = -x.dp / (b * 2.0);
    let shifted = shift_p(&f.poly, alpha, beta);
    let a1 = a - c * c / (b * 4.0);
    let dq1 = x.dq - c * x.dp / (b * 2.0);
    let e1 = x.e - x.dp * x.dp / (b * 4.0);

    let mp = moments(b, shifted.degree_in(Var::P) as usize);
    let mut in_q = PhasePoly::zero();
    for ((i, j), coef) in shifted.terms() {
        let m = mp[j as usize];
        if m != ZERO {
            in_q += &PhasePoly::monomial(coef * m, i, 0);
        }
    }
    // q = z − Dq' / 2A'
    let shift = -dq1 / (a1 * 2.0);
    let e2 = e1 - dq1 * dq1 / (a1 * 4.0);
    let in_z = shift_q(&in_q, shift);
    let mq = moments(a1, in_z.degree_in(Var::Q) as usize);
    let total: Complex64 = in_z.terms().map(|((i, _), coef)| coef * mq[i as usize]).sum();
    Ok(f.prefactor * (-e2).exp() * total / (2.0 * PI * params.hbar))
}

/// `∫ f·g dμ`. When the combined exponent has no cross or linear terms the
/// double sum over monomial pairs is taken directly against a moment table,
/// which avoids forming the product polynomial.
pub fn gauss_integrate_product(f: &ExpPoly, g: &ExpPoly, params: &PhysParams) -> Result<Complex64> {
    let x = f.exponent.add(&g.exponent);
    if !x.is_integrable() {
        return Err(Error::NonIntegrable);
    }
    if x.c != ZERO || x.dq != ZERO || x.dp != ZERO {
        return gauss_integrate(&f.mul(g), params);
    }
    let mq = moments(x.a, (f.poly.degree_in(Var::Q) + g.poly.degree_in(Var::Q)) as usize);
    let mp = moments(x.b, (f.poly.degree_in(Var::P) + g.poly.degree_in(Var::P)) as usize);
    let mut total = ZERO;
    for ((i1, j1), c1) in f.poly.terms() {
        for ((i2, j2), c2) in g.poly.terms() {
            let (i, j) = ((i1 + i2) as usize, (j1 + j2) as usize);
            if i % 2 == 0 && j % 2 == 0 {
                total += c1 * c2 * mq[i] * mp[j];
            }
        }
    }
    Ok(f.prefactor * g.prefactor * (-x.e).exp() * total / (2.0 * PI * params.hbar))
}

/// `exp(c ∂²/∂p²)` on a polynomial: the terminating series `Σ c^k ∂_p^{2k} / k!`.
pub fn heat_apply_poly(c: Complex64, f: &PhasePoly) -> PhasePoly {
    let mut acc = f.clone();
    let mut term = f.clone();
    let mut k = 1u32;
    loop {
        term = term.derive(Var::P, 2).scale(c / f64::from(k));
        if term.is_zero() {
            break;
        }
        acc += &term;
        k += 1;
    }
    acc
}

/// `exp(c ∂²/∂p²)` on a member of the class.
///
/// The Gaussian part transforms in closed form with the width factor
/// `w = 1 + 4cB`: `exp(−Bp² − βp) ↦ w^{−1/2} exp(−(Bp² + βp − cβ²)/w)` where
/// `β = C q + Dp`. Polynomial prefactors are carried through the intertwining
/// `e^{c∂²} p = (p + 2c∂) e^{c∂²}`: each power `p^k` becomes `X^k` applied to
/// the transformed Gaussian, which produces the Hermite functions of that
/// width one degree at a time.
pub fn heat_apply(c: Complex64, f: &ExpPoly) -> Result<ExpPoly> {
    let x = &f.exponent;
    let w = ONE + c * x.b * 4.0;
    if w.norm() < SINGULAR_WIDTH {
        return Err(Error::SingularWidth { re: w.re, im: w.im });
    }
    let winv = w.inv();
    let out_exp = QuadExp {
        a: x.a - c * x.c * x.c * winv,
        b: x.b * winv,
        c: x.c * winv,
        dq: x.dq - c * x.c * x.dp * winv * 2.0,
        dp: x.dp * winv,
        e: x.e - c * x.dp * x.dp * winv,
    };
    let grad_p = out_exp.grad_p();
    let dp = f.poly.degree_in(Var::P) as usize;
    // ladder[k] = X^k 1 in the transformed frame
    let mut ladder = Vec::with_capacity(dp + 1);
    ladder.push(PhasePoly::one());
    for k in 0..dp {
        let r = &ladder[k];
        let next = &(r * &PhasePoly::p()) + &(&r.derive(Var::P, 1) - &(r * &grad_p)).scale(c * 2.0);
        ladder.push(next);
    }
    let mut poly = PhasePoly::zero();
    for ((i, j), coef) in f.poly.terms() {
        poly += &ladder[j as usize].scale(coef).shift_degrees(i, 0);
    }
    Ok(ExpPoly::new(f.prefactor / w.sqrt(), poly, out_exp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_poly::PhysParams;
    use proptest::prelude::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn vacuum(params: &PhysParams) -> ExpPoly {
        ExpPoly::gaussian(cx(2.0, 0.0), QuadExp::hamiltonian(cx(2.0 / params.energy_unit(), 0.0), params))
    }

    #[test]
    fn derivative_examples() {
        let g = ExpPoly::gaussian(ONE, QuadExp::diagonal(ONE, ZERO));
        let d = g.derive(Var::Q, 1);
        assert!(d.weighted_poly().max_diff(&PhasePoly::monomial(-2.0, 1, 0)) < 1e-15);

        let params = PhysParams::new(1.3, 0.8, 0.6, 0.0).unwrap();
        let pi0 = vacuum(&params);
        let d = pi0.derive(Var::P, 1);
        let want = pi0.mul_poly(&PhasePoly::monomial(-2.0 / (params.m * params.hbar * params.omega), 0, 1));
        assert!(d.max_diff(&want) < 1e-14);

        let constant = ExpPoly::new(cx(0.7, 0.1), PhasePoly::one(), QuadExp { e: cx(0.3, 0.0), ..QuadExp::zero() });
        assert!(constant.derive(Var::Q, 1).is_zero());
    }

    #[test]
    fn vacuum_square_integrates_to_one() {
        for params in [PhysParams::unit(0.0), PhysParams::new(2.0, 0.5, 0.3, 0.0).unwrap()] {
            let pi0 = vacuum(&params);
            let v = gauss_integrate(&pi0.conj().mul(&pi0), &params).unwrap();
            assert!((v - ONE).norm() < 1e-14, "{v}");
            let odd = pi0.mul_poly(&PhasePoly::q());
            assert!(gauss_integrate(&odd, &params).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn non_integrable_is_rejected() {
        let params = PhysParams::unit(0.0);
        let f = ExpPoly::gaussian(ONE, QuadExp::diagonal(cx(0.0, 1.0), ONE));
        assert_eq!(gauss_integrate(&f, &params), Err(Error::NonIntegrable));
        let f = ExpPoly::gaussian(ONE, QuadExp { a: ONE, b: ONE, c: cx(2.5, 0.0), ..QuadExp::zero() });
        assert_eq!(gauss_integrate(&f, &params), Err(Error::NonIntegrable));
    }

    #[test]
    fn shifted_and_tilted_gaussian() {
        // exp(−(q² + 2p² + qp + q − p)) has ∫ dq dp = π/√det · e^{¼ bᵀ S⁻¹ b}
        let params = PhysParams::unit(0.0);
        let x = QuadExp { a: ONE, b: cx(2.0, 0.0), c: ONE, dq: ONE, dp: -ONE, e: ZERO };
        let f = ExpPoly::gaussian(ONE, x);
        let det: f64 = 2.0 - 0.25;
        // S⁻¹ = [[2, −½], [−½, 1]] / det, b = (1, −1)
        let quad = (2.0 + 1.0 + 1.0) / det;
        let want = PI / det.sqrt() * (quad / 4.0).exp() / (2.0 * PI);
        let got = gauss_integrate(&f, &params).unwrap();
        assert!((got - want).norm() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn heat_on_polynomials() {
        let c = cx(0.3, -0.2);
        let r = heat_apply_poly(c, &PhasePoly::monomial(ONE, 0, 2));
        assert!(r.max_diff(&PhasePoly::from_terms([((0, 2), ONE), ((0, 0), c * 2.0)])) < 1e-15);
        let q3 = PhasePoly::monomial(ONE, 3, 0);
        assert_eq!(heat_apply_poly(c, &q3), q3);
        // the framed route agrees with the series on a trivial exponent
        let f = PhasePoly::from_terms([((1, 3), cx(0.5, 1.0)), ((0, 4), cx(-1.0, 0.0)), ((2, 1), ONE)]);
        let framed = heat_apply(c, &ExpPoly::from_poly(f.clone())).unwrap();
        assert!(framed.weighted_poly().max_diff(&heat_apply_poly(c, &f)) < 1e-13);
    }

    #[test]
    fn heat_singular_width() {
        let f = ExpPoly::gaussian(ONE, QuadExp::diagonal(ONE, ONE));
        assert!(matches!(heat_apply(cx(-0.25, 0.0), &f), Err(Error::SingularWidth { .. })));
    }

    #[test]
    fn equivalence_heat_maps_vacuum_to_damped_vacuum() {
        let params = PhysParams::new(1.1, 0.9, 0.7, 0.35).unwrap();
        let c = cx(0.0, -params.hbar * params.m * params.gamma / 2.0);
        let got = heat_apply(c, &vacuum(&params)).unwrap();
        let w = params.damped_width();
        let want = ExpPoly::gaussian(
            cx(2.0, 0.0) / w.sqrt(),
            QuadExp::diagonal(
                cx(params.m * params.omega / params.hbar, 0.0),
                ONE / (w * params.m * params.hbar * params.omega),
            ),
        );
        assert!(got.max_diff(&want) < 1e-14);
    }

    /// Spectral oracle for `exp(c ∂²_p)`: trapezoid Fourier transform in `p`,
    /// multiply by `e^{−c k²}`, transform back at one point.
    fn heat_by_fourier(c: Complex64, f: &ExpPoly, q: f64, p0: f64) -> Complex64 {
        let (n, l) = (481, 12.0);
        let h = 2.0 * l / (n - 1) as f64;
        let grid: Vec<f64> = (0..n).map(|i| -l + i as f64 * h).collect();
        let vals: Vec<Complex64> = grid.iter().map(|&p| f.eval_real(q, p)).collect();
        let (nk, kmax) = (481, 14.0);
        let dk = 2.0 * kmax / (nk - 1) as f64;
        let mut acc = ZERO;
        for ik in 0..nk {
            let k = -kmax + ik as f64 * dk;
            let fk: Complex64 =
                grid.iter().zip(&vals).map(|(&p, &v)| v * Complex64::from_polar(1.0, -k * p)).sum::<Complex64>() * h;
            acc += fk * (-c * k * k).exp() * Complex64::from_polar(1.0, k * p0);
        }
        acc * dk / (2.0 * PI)
    }

    /// `Σ_{k≤30} c^k ∂_p^{2k} f / k!` through the exact derivative route.
    fn heat_by_taylor(c: Complex64, f: &ExpPoly, q: f64, p: f64) -> Complex64 {
        let mut term = f.clone();
        let mut acc = term.eval_real(q, p);
        for k in 1..=30 {
            term = term.derive(Var::P, 2).scale(c / k as f64);
            acc += term.eval_real(q, p);
        }
        acc
    }

    #[test]
    fn heat_matches_independent_oracles() {
        let params = PhysParams::unit(0.2);
        let c = cx(0.0, -params.gamma / 2.0);
        let f = vacuum(&params).mul_poly(&PhasePoly::from_terms([((0, 1), ONE), ((1, 0), cx(0.0, 0.5))]));
        let g = heat_apply(c, &f).unwrap();
        for &(q, p) in &[(0.0, 0.0), (0.4, -0.3), (-0.2, 0.7)] {
            let got = g.eval_real(q, p);
            let spectral = heat_by_fourier(c, &f, q, p);
            assert!((got - spectral).norm() < 1e-9, "({q},{p}) {got} vs {spectral}");
            let taylor = heat_by_taylor(c, &f, q, p);
            assert!((got - taylor).norm() < 1e-9, "({q},{p}) {got} vs {taylor}");
        }
    }

    fn arb_member() -> impl Strategy<Value = ExpPoly> {
        (
            prop::collection::vec((0u32..3, 0u32..3, -1.0..1.0f64, -1.0..1.0f64), 1..5),
            0.3..1.5f64,
            0.05..0.4f64,
            -0.2..0.2f64,
            -0.2..0.2f64,
        )
            .prop_map(|(terms, a, b, cr, dp)| {
                let poly = PhasePoly::from_terms(terms.into_iter().map(|(i, j, re, im)| ((i, j), cx(re, im))));
                let exp = QuadExp { a: cx(a, 0.1), b: cx(b, -0.05), c: cx(cr, 0.0), dq: ZERO, dp: cx(dp, 0.1), e: ZERO };
                ExpPoly::new(ONE, poly, exp)
            })
    }

    fn arb_c() -> impl Strategy<Value = Complex64> {
        (0.0..0.5f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn heat_inverse_pair(f in arb_member(), c in arb_c()) {
            let g = heat_apply(-c, &heat_apply(c, &f).unwrap()).unwrap();
            prop_assert!(g.rel_diff(&f) < 1e-9);
        }

        #[test]
        fn heat_semigroup(f in arb_member(), c1 in arb_c(), c2 in arb_c()) {
            let lhs = heat_apply(c1, &heat_apply(c2, &f).unwrap()).unwrap();
            let rhs = heat_apply(c1 + c2, &f).unwrap();
            prop_assert!(lhs.rel_diff(&rhs) < 1e-9);
        }

        #[test]
        fn integral_is_conjugation_consistent(f in arb_member(), s in -1.0..1.0f64) {
            let params = PhysParams::unit(0.0);
            let i1 = gauss_integrate(&f.conj(), &params).unwrap();
            let i2 = gauss_integrate(&f, &params).unwrap();
            prop_assert!((i1 - i2.conj()).norm() < 1e-12 * (1.0 + i2.norm()));
            let lin = gauss_integrate(&f.scale(cx(s, 2.0)), &params).unwrap();
            prop_assert!((lin - i2 * cx(s, 2.0)).norm() < 1e-12 * (1.0 + lin.norm()));
        }

        #[test]
        fn product_fast_path_agrees(f in arb_member(), g in arb_member()) {
            let params = PhysParams::unit(0.0);
            let f = ExpPoly { exponent: QuadExp { c: ZERO, dq: ZERO, dp: ZERO, ..f.exponent }, ..f };
            let g = ExpPoly { exponent: QuadExp { c: ZERO, dq: ZERO, dp: ZERO, ..g.exponent }, ..g };
            let fast = gauss_integrate_product(&f, &g, &params).unwrap();
            let slow = gauss_integrate(&f.mul(&g), &params).unwrap();
            prop_assert!((fast - slow).norm() < 1e-12 * (1.0 + slow.norm()));
        }
    }
}
