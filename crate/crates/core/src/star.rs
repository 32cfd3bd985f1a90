//! Moyal and damped star products, star-brackets, star powers and
//! star-exponentials, and the equivalence operator between the two products.
//!
//! Both products are `f ⋆ g = Σ_k (iħ/2)^k / k! · B_k(f, g)` with `B_k` the
//! k-th power of the bracket (`P` for Moyal, `M = P − 2γm ∂_p⊗∂_p` for the
//! damped product). The bracket power factorizes into three commuting pieces,
//! so the series is summed directly over index triples `(i, j, l)`. With one
//! polynomial factor the sum is finite.

use std::ops::Sub;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss::{heat_apply, heat_apply_poly, ExpPoly, QuadExp};
use crate::phase_poly::{bidifferential, factorial, DerivTable, PhasePoly, PhysParams, MAX_DEGREE};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Denominators of the closed-form star-exponentials below this modulus are
/// reported as singular.
pub const SINGULAR_TIME: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Moyal,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductKind {
    pub kind: Kind,
    pub params: PhysParams,
}

impl ProductKind {
    pub fn moyal(params: PhysParams) -> Self {
        Self { kind: Kind::Moyal, params }
    }

    pub fn gamma(params: PhysParams) -> Self {
        Self { kind: Kind::Gamma, params }
    }

    /// The damping rate seen by this product; zero for Moyal.
    pub fn gamma_rate(&self) -> f64 {
        match self.kind {
            Kind::Moyal => 0.0,
            Kind::Gamma => self.params.gamma,
        }
    }

    fn gamma_m(&self) -> f64 {
        self.gamma_rate() * self.params.m
    }
}

/// An operand of the star product: either a polynomial or a member of the
/// polynomial-times-Gaussian class.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Poly(PhasePoly),
    Exp(ExpPoly),
}

impl From<PhasePoly> for Symbol {
    fn from(p: PhasePoly) -> Self {
        Symbol::Poly(p)
    }
}

impl From<ExpPoly> for Symbol {
    fn from(e: ExpPoly) -> Self {
        Symbol::Exp(e)
    }
}

impl Symbol {
    pub fn eval(&self, q: Complex64, p: Complex64) -> Complex64 {
        match self {
            Symbol::Poly(f) => f.eval(q, p),
            Symbol::Exp(f) => f.eval(q, p),
        }
    }

    pub fn eval_real(&self, q: f64, p: f64) -> Complex64 {
        self.eval(Complex64::from(q), Complex64::from(p))
    }

    pub fn as_poly(&self) -> Option<&PhasePoly> {
        match self {
            Symbol::Poly(f) => Some(f),
            Symbol::Exp(_) => None,
        }
    }

    pub fn as_exp(&self) -> Option<&ExpPoly> {
        match self {
            Symbol::Exp(f) => Some(f),
            Symbol::Poly(_) => None,
        }
    }

    /// The symbol as a member of the Gaussian class (a polynomial gets the
    /// trivial exponent).
    pub fn to_exp(&self) -> ExpPoly {
        match self {
            Symbol::Poly(f) => ExpPoly::from_poly(f.clone()),
            Symbol::Exp(f) => f.clone(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Symbol::Poly(f) => Symbol::Poly(f.conj()),
            Symbol::Exp(f) => Symbol::Exp(f.conj()),
        }
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        match self {
            Symbol::Poly(f) => Symbol::Poly(f.scale(c)),
            Symbol::Exp(f) => Symbol::Exp(f.scale(c)),
        }
    }

    /// Largest coefficient-wise difference; polynomials compare against
    /// Gaussian-class members through the trivial exponent.
    pub fn max_diff(&self, other: &Symbol) -> f64 {
        match (self, other) {
            (Symbol::Poly(a), Symbol::Poly(b)) => a.max_diff(b),
            _ => self.to_exp().max_diff(&other.to_exp()),
        }
    }

    pub fn try_sub(&self, other: &Symbol) -> Result<Symbol> {
        match (self, other) {
            (Symbol::Poly(a), Symbol::Poly(b)) => Ok(Symbol::Poly(a - b)),
            _ => Ok(Symbol::Exp(self.to_exp().try_sub(&other.to_exp())?)),
        }
    }

    fn table(&self) -> (DerivTable, Option<(Complex64, QuadExp)>) {
        match self {
            Symbol::Poly(f) => (DerivTable::polynomial(f), None),
            Symbol::Exp(f) => (
                DerivTable::framed(&f.poly, f.exponent.grad_q(), f.exponent.grad_p()),
                Some((f.prefactor, f.exponent)),
            ),
        }
    }
}

impl Sub for &Symbol {
    type Output = Result<Symbol>;
    fn sub(self, rhs: &Symbol) -> Result<Symbol> {
        self.try_sub(rhs)
    }
}

/// Weights `(iħ/2)^{i+j+l} (−1)^j (−2γm)^l / (i! j! l!)` of the full series.
fn star_weights(
    hbar: f64,
    gamma_m: f64,
    (i_max, j_max, l_max): (u32, u32, u32),
) -> Vec<((u32, u32, u32), Complex64)> {
    let half = I * (hbar / 2.0);
    let l_max = if gamma_m == 0.0 { 0 } else { l_max };
    let mut out = Vec::new();
    for i in 0..=i_max {
        for j in 0..=j_max {
            for l in 0..=l_max {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let w = half.powu(i + j + l) * sign * (-2.0 * gamma_m).powi(l as i32)
                    / (factorial(i) * factorial(j) * factorial(l));
                out.push(((i, j, l), w));
            }
        }
    }
    out
}

fn combine_frames(
    poly: PhasePoly,
    a: Option<(Complex64, QuadExp)>,
    b: Option<(Complex64, QuadExp)>,
) -> Result<Symbol> {
    let poly = poly.check_degree()?;
    Ok(match (a, b) {
        (None, None) => Symbol::Poly(poly),
        (Some((c, x)), None) | (None, Some((c, x))) => Symbol::Exp(ExpPoly::new(c, poly, x)),
        (Some((c1, x1)), Some((c2, x2))) => Symbol::Exp(ExpPoly::new(c1 * c2, poly, x1.add(&x2))),
    })
}

/// `f ⋆ g` for the chosen product. At least one factor must be polynomial so
/// that the series terminates.
pub fn star(prod: &ProductKind, f: &Symbol, g: &Symbol) -> Result<Symbol> {
    let (mut tf, ff) = f.table();
    let (mut tg, fg) = g.table();
    let (lf, lg) = (tf.limit(), tg.limit());
    if lf.is_none() && lg.is_none() {
        return Err(Error::UnsupportedOperands);
    }
    // f needs ∂_q^i ∂_p^{j+l}, g needs ∂_q^j ∂_p^{i+l}
    let bound = |a: Option<u32>, b: Option<u32>| match (a, b) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!(),
    };
    let i_max = bound(lf.map(|l| l.0), lg.map(|l| l.1));
    let j_max = bound(lf.map(|l| l.1), lg.map(|l| l.0));
    let l_max = bound(lf.map(|l| l.1), lg.map(|l| l.1));
    let weights = star_weights(prod.params.hbar, prod.gamma_m(), (i_max, j_max, l_max));
    let poly = bidifferential(&mut tf, &mut tg, weights);
    combine_frames(poly, ff, fg)
}

/// Polynomial-only star product.
pub fn star_poly(prod: &ProductKind, f: &PhasePoly, g: &PhasePoly) -> Result<PhasePoly> {
    match star(prod, &Symbol::Poly(f.clone()), &Symbol::Poly(g.clone()))? {
        Symbol::Poly(r) => Ok(r),
        Symbol::Exp(_) => unreachable!("polynomial star product stays polynomial"),
    }
}

/// `f ⋆ g` with a polynomial on the left.
pub fn star_left(prod: &ProductKind, f: &PhasePoly, g: &ExpPoly) -> Result<ExpPoly> {
    match star(prod, &Symbol::Poly(f.clone()), &Symbol::Exp(g.clone()))? {
        Symbol::Exp(r) => Ok(r),
        Symbol::Poly(_) => unreachable!(),
    }
}

/// `f ⋆ g` with a polynomial on the right.
pub fn star_right(prod: &ProductKind, f: &ExpPoly, g: &PhasePoly) -> Result<ExpPoly> {
    match star(prod, &Symbol::Exp(f.clone()), &Symbol::Poly(g.clone()))? {
        Symbol::Exp(r) => Ok(r),
        Symbol::Poly(_) => unreachable!(),
    }
}

/// `[f, g]_⋆ = (f ⋆ g − g ⋆ f) / iħ`.
pub fn star_bracket(prod: &ProductKind, f: &Symbol, g: &Symbol) -> Result<Symbol> {
    let fg = star(prod, f, g)?;
    let gf = star(prod, g, f)?;
    Ok(fg.try_sub(&gf)?.scale((I * prod.params.hbar).inv()))
}

fn check_power_degree(h: &PhasePoly, n: u32) -> Result<()> {
    let degree = h.degree() * n;
    if degree > MAX_DEGREE {
        return Err(Error::DegreeOverflow { degree, max: MAX_DEGREE });
    }
    Ok(())
}

/// `H^{⋆n}` as a left fold `((H ⋆ H) ⋆ H) ⋆ …`; `H^{⋆0} = 1`.
pub fn star_power(prod: &ProductKind, h: &PhasePoly, n: u32) -> Result<PhasePoly> {
    check_power_degree(h, n)?;
    let mut acc = PhasePoly::one();
    for _ in 0..n {
        acc = star_poly(prod, &acc, h)?;
    }
    Ok(acc)
}

/// Partial sum `Σ_{n≤N} (t/iħ)^n H^{⋆n} / n!` of the star-exponential of the
/// oscillator Hamiltonian.
pub fn star_exp_series(prod: &ProductKind, t: Complex64, terms: u32) -> Result<PhasePoly> {
    let h = PhasePoly::hamiltonian(&prod.params);
    check_power_degree(&h, terms)?;
    let step = t / (I * prod.params.hbar);
    let mut term = PhasePoly::one();
    let mut acc = PhasePoly::one();
    for n in 1..=terms {
        term = star_poly(prod, &term, &h)?.scale(step / f64::from(n));
        acc += &term;
    }
    Ok(acc)
}

/// Closed form of `Exp_⋆(tH/iħ)`:
///
/// `e^{γt/2} / (cos(ωt/2) √w) · exp(−(i/ħω) tan(ωt/2) (mω²q² + p²/(m w)))`
/// with `w = 1 + (2γ/ω) tan(ωt/2)`. For Moyal (or `γ = 0`) `w = 1` and this is
/// `cos(ωt/2)^{−1} exp((2H/iħω) tan(ωt/2))`. The square root takes its
/// principal branch.
pub fn star_exp_closed(prod: &ProductKind, t: Complex64) -> Result<ExpPoly> {
    let params = &prod.params;
    let gamma = prod.gamma_rate();
    let half = t * (params.omega / 2.0);
    let cos = half.cos();
    if cos.norm() < SINGULAR_TIME {
        return Err(Error::SingularTime { re: t.re, im: t.im });
    }
    let tan = half.sin() / cos;
    let w = ONE + tan * (2.0 * gamma / params.omega);
    if w.norm() < SINGULAR_TIME {
        return Err(Error::SingularTime { re: t.re, im: t.im });
    }
    let prefactor = (t * (gamma / 2.0)).exp() / (cos * w.sqrt());
    let s = I * tan / (params.hbar * params.omega);
    let exponent = QuadExp::diagonal(s * params.m * params.omega * params.omega, s / (w * params.m));
    Ok(ExpPoly::gaussian(prefactor, exponent))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// `T = exp(−(iħmγ/2) ∂²/∂p²)` (forward) or its inverse. Intertwines the
/// products: `T(f ⋆_Moyal g) = T(f) ⋆_γ T(g)`.
pub fn equivalence_t(f: &Symbol, params: &PhysParams, direction: Direction) -> Result<Symbol> {
    let mut c = Complex64::new(0.0, -params.hbar * params.m * params.gamma / 2.0);
    if direction == Direction::Inverse {
        c = -c;
    }
    Ok(match f {
        Symbol::Poly(p) => Symbol::Poly(heat_apply_poly(c, p)),
        Symbol::Exp(e) => Symbol::Exp(heat_apply(c, e)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_poly::bracket_power_m;
    use proptest::prelude::*;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(f: PhasePoly) -> Symbol {
        Symbol::Poly(f)
    }

    #[test]
    fn moyal_q_star_p() {
        let params = PhysParams::new(1.0, 1.0, 0.7, 0.0).unwrap();
        let r = star_poly(&ProductKind::moyal(params), &PhasePoly::q(), &PhasePoly::p()).unwrap();
        let want = PhasePoly::from_terms([((1, 1), ONE), ((0, 0), I * 0.35)]);
        assert!(r.max_diff(&want) < 1e-15);
    }

    #[test]
    fn damped_p_star_p() {
        let params = PhysParams::new(1.4, 1.0, 0.6, 0.3).unwrap();
        let r = star_poly(&ProductKind::gamma(params), &PhasePoly::p(), &PhasePoly::p()).unwrap();
        let want = PhasePoly::from_terms([((0, 2), ONE), ((0, 0), -I * 0.6 * 0.3 * 1.4)]);
        assert!(r.max_diff(&want) < 1e-15);
    }

    #[test]
    fn damped_number_function() {
        let params = PhysParams::new(0.8, 1.3, 0.9, 0.4).unwrap();
        let prod = ProductKind::gamma(params);
        let r = star_poly(&prod, &PhasePoly::creation(&params), &PhasePoly::annihilation(&params)).unwrap();
        let hw = params.energy_unit();
        let shift = cx(-0.5, -params.gamma_over_omega() / 2.0);
        let want = &PhasePoly::hamiltonian(&params).scale(1.0 / hw) + &PhasePoly::constant(shift);
        assert!(r.max_diff(&want) < 1e-14);
    }

    #[test]
    fn unit_law() {
        let params = PhysParams::unit(0.5);
        let prod = ProductKind::gamma(params);
        let f = PhasePoly::from_terms([((2, 1), cx(0.3, 1.0)), ((0, 3), cx(-1.0, 0.2))]);
        assert_eq!(star_poly(&prod, &PhasePoly::one(), &f).unwrap(), f);
        assert_eq!(star_poly(&prod, &f, &PhasePoly::one()).unwrap(), f);
    }

    #[test]
    fn two_gaussians_are_rejected() {
        let params = PhysParams::unit(0.0);
        let g = Symbol::Exp(ExpPoly::gaussian(ONE, QuadExp::diagonal(ONE, ONE)));
        assert_eq!(star(&ProductKind::moyal(params), &g, &g), Err(Error::UnsupportedOperands));
    }

    #[test]
    fn star_power_examples() {
        let params = PhysParams::new(1.2, 0.8, 0.5, 0.0).unwrap();
        let h = PhasePoly::hamiltonian(&params);
        let moyal = ProductKind::moyal(params);
        assert_eq!(star_power(&moyal, &h, 0).unwrap(), PhasePoly::one());
        // H⋆H = H² − (ħω/2)² for the oscillator
        let h2 = star_power(&moyal, &h, 2).unwrap();
        let hw = params.energy_unit();
        let want = &(&h * &h) - &PhasePoly::constant(hw * hw / 4.0);
        assert!(h2.max_diff(&want) < 1e-14);
        // right fold agrees
        let right = star_poly(&moyal, &h, &star_poly(&moyal, &h, &h).unwrap()).unwrap();
        assert!(star_power(&moyal, &h, 3).unwrap().max_diff(&right) < 1e-14);
        let damped0 = ProductKind::gamma(params);
        assert_eq!(star_power(&damped0, &h, 3).unwrap(), star_power(&moyal, &h, 3).unwrap());
        assert!(matches!(star_power(&moyal, &h, 41), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn series_and_closed_form_at_origin() {
        let params = PhysParams::unit(0.0);
        let prod = ProductKind::moyal(params);
        assert_eq!(star_exp_series(&prod, ZERO, 10).unwrap(), PhasePoly::one());
        let s = star_exp_series(&prod, cx(0.1, 0.0), 40).unwrap();
        assert!((s.eval_real(0.0, 0.0) - cx(1.0 / 0.05f64.cos(), 0.0)).norm() < 1e-10);
        let c = star_exp_closed(&prod, cx(0.1, 0.0)).unwrap();
        assert!((c.eval_real(0.0, 0.0) - cx(1.0 / 0.05f64.cos(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn damped_closed_form_at_origin() {
        let params = PhysParams::new(1.0, 2.0, 1.0, 0.6).unwrap();
        let t = 0.37;
        let u = star_exp_closed(&ProductKind::gamma(params), cx(t, 0.0)).unwrap();
        let tan = (params.omega * t / 2.0).tan();
        let want = (params.gamma * t / 2.0).exp()
            / ((params.omega * t / 2.0).cos() * (1.0 + 2.0 * params.gamma / params.omega * tan).sqrt());
        assert!((u.eval_real(0.0, 0.0) - cx(want, 0.0)).norm() < 1e-14);
        let zero = star_exp_closed(&ProductKind::gamma(params.with_gamma(0.0)), cx(t, 0.0)).unwrap();
        let moyal = star_exp_closed(&ProductKind::moyal(params), cx(t, 0.0)).unwrap();
        assert_eq!(zero, moyal);
    }

    #[test]
    fn closed_form_singular_times() {
        let params = PhysParams::unit(0.5);
        let pi = std::f64::consts::PI;
        assert!(matches!(
            star_exp_closed(&ProductKind::moyal(params), cx(pi, 0.0)),
            Err(Error::SingularTime { .. })
        ));
        // 1 + (2γ/ω) tan(ωt/2) = 0 at tan = −1
        assert!(matches!(
            star_exp_closed(&ProductKind::gamma(params), cx(-pi / 2.0, 0.0)),
            Err(Error::SingularTime { .. })
        ));
    }

    #[test]
    fn equivalence_examples() {
        let params = PhysParams::new(1.5, 1.0, 0.8, 0.4).unwrap();
        let t = equivalence_t(&poly(PhasePoly::monomial(ONE, 0, 2)), &params, Direction::Forward).unwrap();
        let want = PhasePoly::from_terms([((0, 2), ONE), ((0, 0), -I * 0.8 * 1.5 * 0.4)]);
        assert!(t.max_diff(&poly(want)) < 1e-15);
        let q5 = poly(PhasePoly::monomial(ONE, 5, 0));
        assert_eq!(equivalence_t(&q5, &params, Direction::Forward).unwrap(), q5);
    }

    #[test]
    fn damped_exponential_is_transformed_moyal_exponential() {
        let params = PhysParams::new(0.9, 1.2, 0.8, 0.25).unwrap();
        let t = cx(0.7, -0.05);
        let moyal = star_exp_closed(&ProductKind::moyal(params), t).unwrap();
        let via_t = equivalence_t(&Symbol::Exp(moyal), &params, Direction::Forward)
            .unwrap()
            .scale((t * (params.gamma / 2.0)).exp());
        let damped = star_exp_closed(&ProductKind::gamma(params), t).unwrap();
        assert!(via_t.max_diff(&Symbol::Exp(damped)) < 1e-13);
    }

    #[test]
    fn hermiticity_breaks_only_with_damping() {
        let witness = |gamma: f64| {
            let prod = ProductKind::gamma(PhysParams::unit(gamma));
            let (f, g) = (PhasePoly::p(), PhasePoly::monomial(ONE, 0, 2));
            let lhs = star_poly(&prod, &f, &g).unwrap().conj();
            let rhs = star_poly(&prod, &g.conj(), &f.conj()).unwrap();
            lhs.max_diff(&rhs)
        };
        assert!(witness(0.5) > 1e-3);
        assert!(witness(0.0) < 1e-15);
    }

    #[test]
    fn bracket_reduces_to_poisson_classically() {
        let f = PhasePoly::from_terms([((2, 1), cx(1.0, 0.5)), ((0, 3), ONE)]);
        let g = PhasePoly::from_terms([((1, 2), cx(-0.5, 0.0)), ((3, 0), cx(0.0, 1.0))]);
        let poisson = crate::phase_poly::bracket_power_p(1, &f, &g);
        for hbar in [1e-3, 1e-5] {
            let params = PhysParams::new(1.0, 1.0, hbar, 0.0).unwrap();
            let b = star_bracket(&ProductKind::moyal(params), &poly(f.clone()), &poly(g.clone())).unwrap();
            assert!(b.max_diff(&poly(poisson.clone())) < 10.0 * hbar * hbar);
        }
        // first-order cochain: C1(f,g) − C1(g,f) = 2P(f,g), with damping too
        let params = PhysParams::unit(0.7);
        let c1 = &bracket_power_m(1, &f, &g, &params) - &bracket_power_m(1, &g, &f, &params);
        assert!(c1.max_diff(&poisson.scale(2.0)) < 1e-14);
    }

    fn arb_poly(max_deg: u32) -> impl Strategy<Value = PhasePoly> {
        prop::collection::vec((0..=max_deg, 0..=max_deg, -1.0..1.0f64, -1.0..1.0f64), 1..6).prop_map(move |v| {
            PhasePoly::from_terms(
                v.into_iter()
                    .filter(|(i, j, _, _)| i + j <= max_deg)
                    .map(|(i, j, re, im)| ((i, j), Complex64::new(re, im))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associativity(f in arb_poly(4), g in arb_poly(4), h in arb_poly(4), gamma in 0.0..1.0f64) {
            for prod in [ProductKind::moyal(PhysParams::unit(gamma)), ProductKind::gamma(PhysParams::unit(gamma))] {
                let lhs = star_poly(&prod, &star_poly(&prod, &f, &g).unwrap(), &h).unwrap();
                let rhs = star_poly(&prod, &f, &star_poly(&prod, &g, &h).unwrap()).unwrap();
                prop_assert!(lhs.max_diff(&rhs) < 1e-10);
            }
        }

        #[test]
        fn intertwining(f in arb_poly(4), g in arb_poly(4), gamma in 0.0..1.0f64) {
            let params = PhysParams::unit(gamma);
            let tf = |s: &PhasePoly| heat_apply_poly(Complex64::new(0.0, -gamma / 2.0), s);
            let lhs = tf(&star_poly(&ProductKind::moyal(params), &f, &g).unwrap());
            let rhs = star_poly(&ProductKind::gamma(params), &tf(&f), &tf(&g)).unwrap();
            prop_assert!(lhs.max_diff(&rhs) < 1e-10);
        }

        #[test]
        fn associativity_with_gaussian_factor(f in arb_poly(3), gamma in 0.0..1.0f64) {
            let params = PhysParams::unit(gamma);
            let prod = ProductKind::gamma(params);
            let g = ExpPoly::gaussian(ONE, QuadExp::diagonal(cx(0.5, 0.1), cx(0.4, -0.2)));
            let h = PhasePoly::creation(&params);
            let lhs = star_left(&prod, &star_poly(&prod, &f, &h).unwrap(), &g).unwrap();
            let rhs = star_left(&prod, &f, &star_left(&prod, &h, &g).unwrap()).unwrap();
            prop_assert!(lhs.rel_diff(&rhs) < 1e-10);
            let lhs = star_right(&prod, &star_left(&prod, &f, &g).unwrap(), &h).unwrap();
            let rhs = star_left(&prod, &f, &star_right(&prod, &g, &h).unwrap()).unwrap();
            prop_assert!(lhs.rel_diff(&rhs) < 1e-10);
        }
    }
}
