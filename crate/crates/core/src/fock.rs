//! Truncated Fock-space matrices of phase-space symbols.
//!
//! A Moyal symbol `F` has matrix elements `⟨n|F|m⟩ = ∫ F · D_{mn} dμ`, where
//! `D_{mn}` is the normalized symbol of `|m⟩⟨n|`. Star products then become
//! matrix products, which gives a brute-force check of identities the
//! terminating series cannot reach (two Gaussian factors). Damped symbols are
//! pulled back to Moyal ones with the inverse equivalence operator first.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gauss::{gauss_integrate_product, ExpPoly};
use crate::phase_poly::{PhasePoly, PhysParams};
use crate::star::{equivalence_t, star_left, star_right, Direction, Kind, ProductKind, Symbol};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default truncation level.
pub const DEFAULT_LEVEL: usize = 16;

/// Extra levels carried beyond the requested truncation so that products are
/// exact on every returned level.
pub const PAD: usize = 8;

/// Largest admissible weight on the outermost padded levels.
pub const TAIL_TOLERANCE: f64 = 1e-9;

/// Square matrix on levels `0..=level`.
#[derive(Clone, PartialEq)]
pub struct CoeffMatrix {
    level: usize,
    entries: Vec<Complex64>,
}

impl fmt::Debug for CoeffMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CoeffMatrix(level {})", self.level)?;
        for n in 0..=self.level {
            let row: Vec<String> = (0..=self.level)
                .map(|m| {
                    let z = self.get(n, m);
                    format!("{:+.3e}{:+.3e}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl CoeffMatrix {
    pub fn zeros(level: usize) -> Self {
        Self { level, entries: vec![ZERO; (level + 1) * (level + 1)] }
    }

    pub fn identity(level: usize) -> Self {
        Self::diagonal(&vec![ONE; level + 1])
    }

    pub fn diagonal(values: &[Complex64]) -> Self {
        assert!(!values.is_empty());
        let mut out = Self::zeros(values.len() - 1);
        for (n, &v) in values.iter().enumerate() {
            out.set(n, n, v);
        }
        out
    }

    /// Highest level; the matrix is `(level+1) × (level+1)`.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.level + 1
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.entries[n * self.dim() + m]
    }

    pub fn set(&mut self, n: usize, m: usize, v: Complex64) {
        let d = self.dim();
        self.entries[n * d + m] = v;
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self { level: self.level, entries: self.entries.iter().map(|&z| z * c).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.level);
        for n in 0..self.dim() {
            for m in 0..self.dim() {
                out.set(n, m, self.get(m, n).conj());
            }
        }
        out
    }

    /// Leading block on levels `0..=level`.
    pub fn truncate(&self, level: usize) -> Self {
        assert!(level <= self.level);
        let mut out = Self::zeros(level);
        for n in 0..=level {
            for m in 0..=level {
                out.set(n, m, self.get(n, m));
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference over levels `0..=upto` of both matrices.
    pub fn max_diff_upto(&self, other: &Self, upto: usize) -> f64 {
        let mut worst = 0.0f64;
        for n in 0..=upto {
            for m in 0..=upto {
                worst = worst.max((self.get(n, m) - other.get(n, m)).norm());
            }
        }
        worst
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.level, other.level);
        self.max_diff_upto(other, self.level)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_diff(&self.adjoint())
    }
}

impl Add for &CoeffMatrix {
    type Output = CoeffMatrix;
    fn add(self, rhs: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(self.level, rhs.level);
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect();
        CoeffMatrix { level: self.level, entries }
    }
}

impl Sub for &CoeffMatrix {
    type Output = CoeffMatrix;
    fn sub(self, rhs: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(self.level, rhs.level);
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect();
        CoeffMatrix { level: self.level, entries }
    }
}

impl Mul for &CoeffMatrix {
    type Output = CoeffMatrix;
    fn mul(self, rhs: &CoeffMatrix) -> CoeffMatrix {
        assert_eq!(self.level, rhs.level);
        let d = self.dim();
        let mut out = CoeffMatrix::zeros(self.level);
        for n in 0..d {
            for k in 0..d {
                let a = self.get(n, k);
                if a == ZERO {
                    continue;
                }
                for m in 0..d {
                    out.entries[n * d + m] += a * rhs.get(k, m);
                }
            }
        }
        out
    }
}

/// `ā^{⋆n} ⋆ vacuum ⋆ a^{⋆m}`, the unnormalized symbol of `|n⟩⟨m|`.
pub fn dyad_symbol(kind: &ProductKind, n: u32, m: u32) -> Result<ExpPoly> {
    let params = &kind.params;
    let mut d = crate::eigen::ladder_state(kind, n)?;
    let a = PhasePoly::annihilation(params);
    for _ in 0..m {
        d = star_right(kind, &d, &a)?;
    }
    Ok(d)
}

/// Cache of normalized Moyal dyads `D_{nm}` on levels `0..=level`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    params: PhysParams,
    level: usize,
    dyads: Vec<Vec<ExpPoly>>,
}

impl FockBasis {
    pub fn new(params: &PhysParams, level: usize) -> Result<Self> {
        let kind = ProductKind::moyal(*params);
        let (abar, a) = (PhasePoly::creation(params), PhasePoly::annihilation(params));
        let mut dyads = Vec::with_capacity(level + 1);
        let mut left = crate::eigen::vacuum(&kind);
        for n in 0..=level {
            if n > 0 {
                left = star_left(&kind, &abar, &left)?.scale(1.0 / (n as f64).sqrt());
            }
            let mut row = Vec::with_capacity(level + 1);
            let mut d = left.clone();
            for m in 0..=level {
                if m > 0 {
                    d = star_right(&kind, &d, &a)?.scale(1.0 / (m as f64).sqrt());
                }
                row.push(d.clone());
            }
            dyads.push(row);
        }
        Ok(Self { params: *params, level, dyads })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    /// Normalized symbol of `|n⟩⟨m|`.
    pub fn dyad(&self, n: usize, m: usize) -> &ExpPoly {
        &self.dyads[n][m]
    }

    /// Moyal symbol of a damped-product symbol.
    pub fn pull_back(&self, kind: &ProductKind, f: &Symbol) -> Result<Symbol> {
        match kind.kind {
            Kind::Moyal => Ok(f.clone()),
            Kind::Gamma => equivalence_t(f, &kind.params, Direction::Inverse),
        }
    }

    /// `⟨n|F|m⟩ = ∫ F · D_{mn} dμ` on every cached level.
    pub fn matrix(&self, kind: &ProductKind, f: &Symbol) -> Result<CoeffMatrix> {
        let f = self.pull_back(kind, f)?.to_exp();
        let mut out = CoeffMatrix::zeros(self.level);
        for n in 0..=self.level {
            for m in 0..=self.level {
                out.set(n, m, gauss_integrate_product(&f, &self.dyads[m][n], &self.params)?);
            }
        }
        Ok(out)
    }
}

/// Matrix of `F` on levels `0..=level`.
pub fn symbol_to_matrix(kind: &ProductKind, f: &Symbol, level: usize) -> Result<CoeffMatrix> {
    FockBasis::new(&kind.params, level)?.matrix(kind, f)
}

fn tail_weight(m: &CoeffMatrix, level: usize, transpose: bool) -> f64 {
    let top = m.level();
    let mut worst = 0.0f64;
    for edge in top.saturating_sub(1)..=top {
        for n in 0..=level {
            let z = if transpose { m.get(edge, n) } else { m.get(n, edge) };
            worst = worst.max(z.norm());
        }
    }
    worst
}

/// Matrix product of two symbols on a padded basis, restricted to levels
/// `0..=level`. Fails with `TruncationTail` when either factor couples the
/// kept levels to the outermost padded ones.
pub fn oracle_product(kind: &ProductKind, f: &Symbol, g: &Symbol, level: usize) -> Result<CoeffMatrix> {
    let basis = FockBasis::new(&kind.params, level + PAD)?;
    oracle_product_in(&basis, kind, f, g, level)
}

/// As `oracle_product`, reusing a cached basis.
pub fn oracle_product_in(
    basis: &FockBasis,
    kind: &ProductKind,
    f: &Symbol,
    g: &Symbol,
    level: usize,
) -> Result<CoeffMatrix> {
    assert!(level < basis.level());
    let mf = basis.matrix(kind, f)?;
    let mg = basis.matrix(kind, g)?;
    let scale = mf.max_abs().max(mg.max_abs()).max(1.0);
    let leak = tail_weight(&mf, level, false).max(tail_weight(&mg, level, true)) / scale;
    if leak > TAIL_TOLERANCE {
        return Err(Error::TruncationTail { level, leak });
    }
    Ok((&mf * &mg).truncate(level))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::{energy_level, laguerre_projector, vacuum};
    use crate::star::{star, star_exp_closed};
    use proptest::prelude::*;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dyad_examples() {
        let params = PhysParams::new(1.1, 0.9, 0.7, 0.4).unwrap();
        let moyal = ProductKind::moyal(params);
        assert_eq!(dyad_symbol(&moyal, 0, 0).unwrap(), vacuum(&moyal));
        let basis = FockBasis::new(&params, 5).unwrap();
        for n in 0..=5 {
            let pi = laguerre_projector(&moyal, n as u32).unwrap();
            assert!(basis.dyad(n, n).rel_diff(&pi) < 1e-12);
        }
        let damped = ProductKind::gamma(params);
        let want = star_left(&damped, &PhasePoly::creation(&params), &vacuum(&damped)).unwrap();
        assert_eq!(dyad_symbol(&damped, 1, 0).unwrap(), want);
    }

    #[test]
    fn cached_dyads_are_normalized_raw_dyads() {
        let params = PhysParams::unit(0.0);
        let moyal = ProductKind::moyal(params);
        let basis = FockBasis::new(&params, 4).unwrap();
        for (n, m) in [(0, 3), (2, 1), (4, 4)] {
            let raw = dyad_symbol(&moyal, n, m).unwrap();
            let (unit, _) = crate::eigen::normalize(&raw, &params).unwrap();
            assert!(unit.rel_diff(basis.dyad(n as usize, m as usize)) < 1e-12);
        }
    }

    #[test]
    fn matrix_examples() {
        let params = PhysParams::new(1.0, 1.7, 0.6, 0.0).unwrap();
        let moyal = ProductKind::moyal(params);
        let h = symbol_to_matrix(&moyal, &Symbol::Poly(PhasePoly::hamiltonian(&params)), 8).unwrap();
        let want: Vec<_> = (0..=8).map(|n| energy_level(&moyal, n).in_units(&params)).collect();
        assert!(h.max_diff(&CoeffMatrix::diagonal(&want)) < 1e-10);
        let pi2 = symbol_to_matrix(&moyal, &Symbol::Exp(laguerre_projector(&moyal, 2).unwrap()), 8).unwrap();
        let mut unit = CoeffMatrix::zeros(8);
        unit.set(2, 2, ONE);
        assert!(pi2.max_diff(&unit) < 1e-9);
        let one = symbol_to_matrix(&moyal, &Symbol::Poly(PhasePoly::one()), 10).unwrap();
        assert!(one.max_diff(&CoeffMatrix::identity(10)) < 1e-10);
    }

    #[test]
    fn real_symbols_give_hermitian_matrices() {
        let params = PhysParams::unit(0.0);
        let moyal = ProductKind::moyal(params);
        let f = PhasePoly::from_terms([((3, 1), cx(0.7, 0.0)), ((0, 2), cx(-1.2, 0.0)), ((1, 0), cx(0.3, 0.0))]);
        let m = symbol_to_matrix(&moyal, &Symbol::Poly(f), 10).unwrap();
        assert!(m.hermiticity_defect() < 1e-9);
    }

    #[test]
    fn projector_products() {
        let params = PhysParams::unit(0.0);
        let moyal = ProductKind::moyal(params);
        let pi = |n| Symbol::Exp(laguerre_projector(&moyal, n).unwrap());
        let basis = FockBasis::new(&params, 10 + PAD).unwrap();
        let p11 = oracle_product_in(&basis, &moyal, &pi(1), &pi(1), 10).unwrap();
        let m1 = basis.matrix(&moyal, &pi(1)).unwrap().truncate(10);
        assert!(p11.max_diff(&m1) < 1e-8);
        let p12 = oracle_product_in(&basis, &moyal, &pi(1), &pi(2), 10).unwrap();
        assert!(p12.max_abs() < 1e-8);
    }

    #[test]
    fn commutator_matrix() {
        let params = PhysParams::new(1.0, 1.0, 0.5, 0.0).unwrap();
        let moyal = ProductKind::moyal(params);
        let a = Symbol::Poly(PhasePoly::annihilation(&params));
        let abar = Symbol::Poly(PhasePoly::creation(&params));
        let basis = FockBasis::new(&params, 12 + PAD).unwrap();
        let ab = oracle_product_in(&basis, &moyal, &a, &abar, 12).unwrap();
        let ba = oracle_product_in(&basis, &moyal, &abar, &a, 12).unwrap();
        let bracket = (&ab - &ba).scale((Complex64::i() * params.hbar).inv());
        let want = CoeffMatrix::identity(12).scale((Complex64::i() * params.hbar).inv());
        assert!(bracket.max_diff(&want) < 1e-9);
    }

    #[test]
    fn damped_projectors_through_pull_back() {
        let params = PhysParams::unit(0.5);
        let damped = ProductKind::gamma(params);
        let basis = FockBasis::new(&params, 6 + PAD).unwrap();
        let pis: Vec<_> = (0..=6).map(|n| Symbol::Exp(laguerre_projector(&damped, n).unwrap())).collect();
        for (m, pm) in pis.iter().enumerate() {
            let single = basis.matrix(&damped, pm).unwrap().truncate(6);
            for (n, pn) in pis.iter().enumerate() {
                let prod = oracle_product_in(&basis, &damped, pm, pn, 6).unwrap();
                let want = if m == n { single.clone() } else { CoeffMatrix::zeros(6) };
                assert!(prod.max_diff(&want) < 1e-8, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn star_exponential_is_diagonal() {
        let params = PhysParams::new(1.3, 0.8, 1.0, 0.0).unwrap();
        let moyal = ProductKind::moyal(params);
        let level = 14;
        let basis = FockBasis::new(&params, level).unwrap();
        for wt in [0.3, 1.0] {
            let u = Symbol::Exp(star_exp_closed(&moyal, cx(wt / params.omega, 0.0)).unwrap());
            let m = basis.matrix(&moyal, &u).unwrap();
            let want: Vec<_> = (0..=level).map(|n| cx(0.0, -(n as f64 + 0.5) * wt).exp()).collect();
            assert!(m.max_diff_upto(&CoeffMatrix::diagonal(&want), level - 2) < 1e-7);
        }
    }

    #[test]
    fn wide_symbols_are_rejected() {
        let params = PhysParams::unit(0.0);
        let moyal = ProductKind::moyal(params);
        let q20 = Symbol::Poly(PhasePoly::monomial(ONE, 20, 0));
        assert!(matches!(
            oracle_product(&moyal, &q20, &q20, 4),
            Err(Error::TruncationTail { .. })
        ));
    }

    fn arb_poly() -> impl Strategy<Value = PhasePoly> {
        prop::collection::vec((0..=2u32, 0..=2u32, -1.0..1.0f64, -1.0..1.0f64), 1..5).prop_map(|v| {
            PhasePoly::from_terms(v.into_iter().map(|(i, j, re, im)| ((i, j), Complex64::new(re, im))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn homomorphism(f in arb_poly(), n in 0..5u32, gamma in prop::sample::select(vec![0.0, 0.5])) {
            let params = PhysParams::unit(gamma);
            let level = 8;
            let basis = FockBasis::new(&params, level + PAD).unwrap();
            for kind in [ProductKind::moyal(params), ProductKind::gamma(params)] {
                let state = Symbol::Exp(laguerre_projector(&kind, n).unwrap());
                let direct = star(&kind, &Symbol::Poly(f.clone()), &state).unwrap();
                let direct = basis.matrix(&kind, &direct).unwrap();
                let oracle = oracle_product_in(&basis, &kind, &Symbol::Poly(f.clone()), &state, level).unwrap();
                let upto = level - (f.degree() as usize).div_ceil(2);
                prop_assert!(direct.max_diff_upto(&oracle, upto) < 1e-8);
            }
        }
    }
}
