//! Riccati differential polynomials in the r-basis.
//!
//! With `r_0 = 1` and `r_{i+1} = y_0·r_i + D r_i` (where `D y_j = y_{j+1}`),
//! the linear ODE `Σ f_i y^{(i)} = 0` has Riccati form `R = Σ f_i r_i` for
//! `z = y'/y`. Operators are stored as the coefficient vector `g` and never
//! expanded except by the monomial oracle used in tests.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numfield::{ExtensionTower, FieldElement};
use crate::puiseux::{Exponent, PuiseuxPoly, TruncatedSeries};

/// Default bound on the index of expanded `r_i` and on operator order for
/// monomial expansion.
pub const DEFAULT_ORACLE_CAP: usize = 8;

/// `f_n y^{(n)} + … + f_1 y' + f_0 y = 0` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearODE {
    coeffs: Vec<PuiseuxPoly>,
}

impl LinearODE {
    /// `coeffs[i]` multiplies `y^{(i)}`. Trailing zero coefficients are
    /// dropped; the remaining order must be at least 1 and every exponent a
    /// nonnegative integer.
    pub fn new(mut coeffs: Vec<PuiseuxPoly>) -> Result<Self> {
        while coeffs.last().is_some_and(PuiseuxPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::Domain("linear ODE must have order at least 1".into()));
        }
        for f in &coeffs {
            if f.terms().any(|(e, _)| !e.is_integer() || e.is_negative()) {
                return Err(Error::Domain(format!("coefficient {f} is not a polynomial in x")));
            }
            f.tower()?;
        }
        Ok(LinearODE { coeffs })
    }

    /// Integer polynomial coefficients, each ascending in x.
    pub fn from_int_coeffs(coeffs: &[&[i64]]) -> Result<Self> {
        Self::new(coeffs.iter().map(|c| PuiseuxPoly::from_ints(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[PuiseuxPoly] {
        &self.coeffs
    }

    pub fn tower(&self) -> Result<ExtensionTower> {
        self.coeffs
            .iter()
            .try_fold(ExtensionTower::rational(), |t, f| t.join(&f.tower()?))
    }
}

impl fmt::Display for LinearODE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*y^({i})")?;
        }
        write!(f, " = 0")
    }
}

/// `R = Σ g_i r_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiccatiOperator {
    g: Vec<PuiseuxPoly>,
    tower: ExtensionTower,
}

impl RiccatiOperator {
    /// Operator with the given r-basis coefficients; its order is
    /// `g.len() − 1` even if the top coefficient vanishes (see
    /// [`RiccatiOperator::is_degenerate`]).
    pub fn new(g: Vec<PuiseuxPoly>) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::Domain("operator needs at least one coefficient".into()));
        }
        let tower = g
            .iter()
            .try_fold(ExtensionTower::rational(), |t, p| t.join(&p.tower()?))?;
        Ok(RiccatiOperator { g, tower })
    }

    /// The Riccati operator of `S`: its r-basis coefficients are the ODE
    /// coefficients.
    pub fn from_linear_ode(s: &LinearODE) -> Self {
        RiccatiOperator {
            g: s.coeffs.clone(),
            tower: s.tower().expect("validated at construction"),
        }
    }

    pub fn order(&self) -> usize {
        self.g.len() - 1
    }

    pub fn coeffs(&self) -> &[PuiseuxPoly] {
        &self.g
    }

    pub fn coeff(&self, i: usize) -> &PuiseuxPoly {
        &self.g[i]
    }

    pub fn tower(&self) -> &ExtensionTower {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.g.iter().all(PuiseuxPoly::is_zero)
    }

    /// The top coefficient vanishes.
    pub fn is_degenerate(&self) -> bool {
        self.g.last().is_some_and(PuiseuxPoly::is_zero)
    }

    /// Largest index with a nonzero coefficient.
    pub fn effective_order(&self) -> Option<usize> {
        self.g.iter().rposition(|p| !p.is_zero())
    }

    /// `R^{(k)} = Σ_{i ≤ n−k} (i+k)_k g_{i+k} r_i`, the k-th partial
    /// derivative in `y_0`. For `k > n` this is the zero operator of order 0.
    pub fn derivative_k(&self, k: usize) -> Self {
        let n = self.order();
        if k > n {
            return RiccatiOperator {
                g: vec![PuiseuxPoly::zero()],
                tower: self.tower.clone(),
            };
        }
        let g = (0..=n - k)
            .map(|i| self.g[i + k].scale(&FieldElement::from_int(falling_factorial(i + k, k))))
            .collect();
        RiccatiOperator {
            g,
            tower: self.tower.clone(),
        }
    }

    /// `Σ g_i r_i(ψ)`, valid above the returned floor.
    pub fn evaluate(&self, psi: &TruncatedSeries) -> Result<TruncatedSeries> {
        let rs = eval_r_sequence(psi, self.order())?;
        let mut body = PuiseuxPoly::zero();
        let mut floor: Option<Exponent> = None;
        for (g, r) in self.g.iter().zip(&rs) {
            if g.is_zero() {
                continue;
            }
            body = body.checked_add(&g.checked_mul(r.body())?)?;
            if let Some(fr) = r.floor() {
                let f = g.deg_inf().expect("nonzero") + fr;
                floor = Some(floor.map_or(f, |old| old.max(f)));
            }
        }
        Ok(match floor {
            None => TruncatedSeries::exact(body),
            Some(f) => TruncatedSeries::truncated(body, f),
        })
    }

    /// The operator `R₁` with `R₁(y) = R(y + c·x^μ)`:
    /// `g₁_k = Σ_{i ≥ k} C(i,k) g_i r_{i−k}(c·x^μ)`, i.e. `R^{(k)}(c·x^μ)/k!`.
    pub fn shift_substitute(&self, c: &FieldElement, mu: Exponent) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Domain("shift coefficient must be nonzero".into()));
        }
        let n = self.order();
        let psi = TruncatedSeries::exact(PuiseuxPoly::monomial(c.clone(), mu));
        let rs = eval_r_sequence(&psi, n)?;
        let mut g1 = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = PuiseuxPoly::zero();
            for i in k..=n {
                if self.g[i].is_zero() {
                    continue;
                }
                let term = self.g[i]
                    .checked_mul(rs[i - k].body())?
                    .scale(&FieldElement::from_int(binomial(i, k)));
                acc = acc.checked_add(&term)?;
            }
            g1.push(acc);
        }
        let mut r = RiccatiOperator::new(g1)?;
        r.tower = r.tower.join(&self.tower)?;
        Ok(r)
    }

    /// Fully expanded `Σ g_i r_i`; refuses orders above `cap`.
    pub fn expand_monomials(&self, cap: usize) -> Result<MonomialDiffPoly> {
        let n = self.order();
        if n > cap {
            return Err(Error::OracleCap { cap, requested: n });
        }
        let mut out = MonomialDiffPoly::zero();
        let mut r = MonomialDiffPoly::one();
        for i in 0..=n {
            if i > 0 {
                r = &(&MonomialDiffPoly::y(0) * &r) + &r.total_derivative();
            }
            out = &out + &r.mul_series(&self.g[i]);
        }
        Ok(out)
    }
}

impl fmt::Display for RiccatiOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.g.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

/// `(i)_k = i(i−1)⋯(i−k+1)`.
pub fn falling_factorial(i: usize, k: usize) -> i64 {
    (0..k).map(|j| i as i64 - j as i64).product()
}

pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

/// `[r_0(ψ), …, r_upto(ψ)]` via `r_{i+1}(ψ) = ψ·r_i(ψ) + r_i(ψ)'`.
///
/// For a truncated ψ each entry carries its own floor: if `ψ = b + ε` with
/// every exponent of ε below `f`, and `r_i = B_i + E_i` with every exponent of
/// `E_i` below `F_i`, then the error of `r_{i+1}` lies below
/// `max(deg b + F_i, f + deg B_i, f + F_i, F_i − 1)`.
pub fn eval_r_sequence(psi: &TruncatedSeries, upto: usize) -> Result<Vec<TruncatedSeries>> {
    let b = psi.body();
    let f = psi.floor();
    let mut out = Vec::with_capacity(upto + 1);
    let mut body = PuiseuxPoly::one();
    let mut floor: Option<Exponent> = None;
    out.push(TruncatedSeries::exact(body.clone()));
    for _ in 0..upto {
        let next_body = b.checked_mul(&body)?.checked_add(&body.differentiate())?;
        let next_floor = match (f, floor) {
            (None, None) => None,
            _ => {
                let mut candidates = Vec::new();
                if let Some(fi) = floor {
                    if let Some(db) = b.deg_inf() {
                        candidates.push(db + fi);
                    }
                    candidates.push(fi - 1);
                }
                if let Some(fp) = f {
                    if let Some(dbi) = body.deg_inf() {
                        candidates.push(fp + dbi);
                    }
                    if let Some(fi) = floor {
                        candidates.push(fp + fi);
                    }
                }
                // With ψ = O(x^f) and an exact zero body the error is still
                // bounded by the largest candidate; an empty list cannot occur
                // because r_0 = 1 is nonzero.
                candidates.into_iter().max()
            }
        };
        body = match next_floor {
            Some(fl) => next_body.truncate_below(&fl),
            None => next_body,
        };
        floor = next_floor;
        out.push(match floor {
            None => TruncatedSeries::exact(body.clone()),
            Some(fl) => TruncatedSeries::truncated(body.clone(), fl),
        });
    }
    Ok(out)
}

/// Exponent vector over `y_0, y_1, …` (no trailing zeros) and x-exponent.
pub type MonomialKey = (Vec<u32>, Exponent);

/// A differential polynomial in `y_0, y_1, …` with Puiseux coefficients,
/// fully expanded. Only used as a test oracle.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonomialDiffPoly {
    terms: BTreeMap<MonomialKey, FieldElement>,
}

fn trim_alpha(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

impl MonomialDiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.add_term((Vec::new(), Exponent::zero()), FieldElement::one());
        p
    }

    /// The variable `y_j`.
    pub fn y(j: usize) -> Self {
        let mut alpha = vec![0; j + 1];
        alpha[j] = 1;
        let mut p = Self::zero();
        p.add_term((alpha, Exponent::zero()), FieldElement::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Exponent, FieldElement)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (a, e, c) in terms {
            p.add_term((trim_alpha(a), e), c);
        }
        p
    }

    fn add_term(&mut self, key: MonomialKey, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&key) {
            None => c,
            Some(old) => &old + &c,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &FieldElement)> {
        self.terms.iter()
    }

    /// Coefficient of the pure monomial `x^e · y^alpha`.
    pub fn coefficient(&self, alpha: &[u32], e: Exponent) -> FieldElement {
        self.terms
            .get(&(trim_alpha(alpha.to_vec()), e))
            .cloned()
            .unwrap_or_else(FieldElement::zero)
    }

    /// Total degree in the y variables (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(a, _)| a.iter().sum()).max().unwrap_or(0)
    }

    /// The terms of total y-degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        MonomialDiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|((a, _), _)| a.iter().sum::<u32>() == d)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn mul_series(&self, s: &PuiseuxPoly) -> Self {
        let mut out = Self::zero();
        for ((a, e), c) in &self.terms {
            for (es, cs) in s.terms() {
                out.add_term((a.clone(), e + es), c * cs);
            }
        }
        out
    }

    /// Total derivative: `d/dx` on coefficients plus `y_j ↦ y_{j+1}`.
    pub fn total_derivative(&self) -> Self {
        let mut out = Self::zero();
        for ((a, e), c) in &self.terms {
            if !e.is_zero() {
                out.add_term(
                    (a.clone(), e - 1),
                    c * &FieldElement::from_frac(*e.numer(), *e.denom()),
                );
            }
            for (j, &aj) in a.iter().enumerate() {
                if aj == 0 {
                    continue;
                }
                let mut b = a.clone();
                b[j] -= 1;
                if b.len() <= j + 1 {
                    b.push(0);
                }
                b[j + 1] += 1;
                out.add_term((trim_alpha(b), *e), c * &FieldElement::from_int(aj as i64));
            }
        }
        out
    }

    /// `∂/∂y_0`.
    pub fn partial_y0(&self) -> Self {
        let mut out = Self::zero();
        for ((a, e), c) in &self.terms {
            if let Some(&a0) = a.first() {
                if a0 == 0 {
                    continue;
                }
                let mut b = a.clone();
                b[0] -= 1;
                out.add_term((trim_alpha(b), *e), c * &FieldElement::from_int(a0 as i64));
            }
        }
        out
    }

    /// Substitutes `y_j = ψ^{(j)}`.
    pub fn substitute(&self, psi: &PuiseuxPoly) -> Result<PuiseuxPoly> {
        let max_j = self.terms.keys().map(|(a, _)| a.len()).max().unwrap_or(0);
        let mut derivs = vec![psi.clone()];
        for j in 1..max_j {
            let d = derivs[j - 1].differentiate();
            derivs.push(d);
        }
        let mut out = PuiseuxPoly::zero();
        for ((a, e), c) in &self.terms {
            let mut term = PuiseuxPoly::monomial(c.clone(), *e);
            for (j, &aj) in a.iter().enumerate() {
                term = term.checked_mul(&derivs[j].pow(aj))?;
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// Newton polygon points: `b·x^j·y_0^{α_0}⋯y_k^{α_k}` ↦ `(j − Σ t·α_t, Σ α_t)`.
    pub fn points(&self) -> Vec<(Exponent, usize)> {
        let mut pts: Vec<_> = self
            .terms
            .keys()
            .map(|(a, e)| {
                let weight: i64 = a.iter().enumerate().map(|(t, &at)| t as i64 * at as i64).sum();
                (e - weight, a.iter().sum::<u32>() as usize)
            })
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

impl std::ops::Add<&MonomialDiffPoly> for &MonomialDiffPoly {
    type Output = MonomialDiffPoly;
    fn add(self, rhs: &MonomialDiffPoly) -> MonomialDiffPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Mul<&MonomialDiffPoly> for &MonomialDiffPoly {
    type Output = MonomialDiffPoly;
    fn mul(self, rhs: &MonomialDiffPoly) -> MonomialDiffPoly {
        let mut out = MonomialDiffPoly::zero();
        for ((a, ea), ca) in &self.terms {
            for ((b, eb), cb) in &rhs.terms {
                let n = a.len().max(b.len());
                let alpha = (0..n)
                    .map(|j| a.get(j).unwrap_or(&0) + b.get(j).unwrap_or(&0))
                    .collect();
                out.add_term((alpha, ea + eb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MonomialDiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, ((a, e), c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*x^({})", crate::puiseux::format_exponent(e))?;
            for (j, &aj) in a.iter().enumerate() {
                match aj {
                    0 => {}
                    1 => write!(f, "*y{j}")?,
                    _ => write!(f, "*y{j}^{aj}")?,
                }
            }
        }
        Ok(())
    }
}

/// The expanded `r_i`, for `i ≤ cap`.
pub fn r_basis(i: usize, cap: usize) -> Result<MonomialDiffPoly> {
    if i > cap {
        return Err(Error::OracleCap { cap, requested: i });
    }
    let mut r = MonomialDiffPoly::one();
    for _ in 0..i {
        r = &(&MonomialDiffPoly::y(0) * &r) + &r.total_derivative();
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::puiseux::q;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> PuiseuxPoly {
        PuiseuxPoly::from_ints(v)
    }

    fn airy() -> RiccatiOperator {
        RiccatiOperator::from_linear_ode(&LinearODE::from_int_coeffs(&[&[0, -1], &[], &[1]]).unwrap())
    }

    fn mono(n: i64, d: i64, en: i64, ed: i64) -> PuiseuxPoly {
        PuiseuxPoly::monomial(FieldElement::from_frac(n, d), q(en, ed))
    }

    fn m(alpha: &[u32], c: i64) -> (Vec<u32>, Exponent, FieldElement) {
        (alpha.to_vec(), Exponent::zero(), FieldElement::from_int(c))
    }

    #[test]
    fn r_basis_small_cases() {
        assert_eq!(r_basis(0, 8).unwrap(), MonomialDiffPoly::one());
        assert_eq!(r_basis(1, 8).unwrap(), MonomialDiffPoly::y(0));
        assert_eq!(
            r_basis(2, 8).unwrap(),
            MonomialDiffPoly::from_terms([m(&[2], 1), m(&[0, 1], 1)])
        );
        assert_eq!(
            r_basis(3, 8).unwrap(),
            MonomialDiffPoly::from_terms([m(&[3], 1), m(&[1, 1], 3), m(&[0, 0, 1], 1)])
        );
        assert!(matches!(r_basis(9, 8), Err(Error::OracleCap { .. })));
    }

    #[test]
    fn r_basis_top_degree_is_y0_power() {
        for i in 0..=8u32 {
            let r = r_basis(i as usize, 8).unwrap();
            assert_eq!(r.total_degree(), i);
            let top = r.homogeneous_part(i);
            let mut alpha = Vec::new();
            if i > 0 {
                alpha.push(i);
            }
            assert_eq!(
                top,
                MonomialDiffPoly::from_terms([(alpha, Exponent::zero(), FieldElement::one())])
            );
        }
    }

    #[test]
    fn partial_of_r_basis() {
        for i in 1..=6 {
            let lhs = r_basis(i, 8).unwrap().partial_y0();
            let rhs = r_basis(i - 1, 8)
                .unwrap()
                .mul_series(&PuiseuxPoly::constant(FieldElement::from_int(i as i64)));
            assert_eq!(lhs, rhs, "i = {i}");
        }
    }

    #[test]
    fn from_linear_ode_reads_coefficients() {
        let r = airy();
        assert_eq!(r.coeffs(), &[ints(&[0, -1]), PuiseuxPoly::zero(), ints(&[1])]);
        let first = RiccatiOperator::from_linear_ode(&LinearODE::from_int_coeffs(&[&[-1], &[1]]).unwrap());
        let expected = MonomialDiffPoly::from_terms([m(&[1], 1), m(&[], -1)]);
        assert_eq!(first.expand_monomials(8).unwrap(), expected);
        let cosh =
            RiccatiOperator::from_linear_ode(&LinearODE::from_int_coeffs(&[&[-1], &[], &[1]]).unwrap());
        let expected = MonomialDiffPoly::from_terms([m(&[2], 1), m(&[0, 1], 1), m(&[], -1)]);
        assert_eq!(cosh.expand_monomials(8).unwrap(), expected);
    }

    #[test]
    fn airy_expansion() {
        let expected = MonomialDiffPoly::from_terms([
            m(&[2], 1),
            m(&[0, 1], 1),
            (Vec::new(), q(1, 1), FieldElement::from_int(-1)),
        ]);
        assert_eq!(airy().expand_monomials(8).unwrap(), expected);
        let zero = RiccatiOperator::new(vec![PuiseuxPoly::zero()]).unwrap();
        assert!(zero.expand_monomials(8).unwrap().is_zero());
    }

    #[test]
    fn derivative_examples() {
        let d = airy().derivative_k(1);
        assert_eq!(d.coeffs(), &[PuiseuxPoly::zero(), ints(&[2])]);
        assert_eq!(airy().derivative_k(0), airy());
        assert_eq!(falling_factorial(3, 2), 6);
        let beyond = airy().derivative_k(3);
        assert!(beyond.is_zero() && beyond.order() == 0);
    }

    #[test]
    fn r_sequence_examples() {
        let sqrt = TruncatedSeries::exact(mono(1, 1, 1, 2));
        let rs = eval_r_sequence(&sqrt, 2).unwrap();
        assert_eq!(rs[0].body(), &PuiseuxPoly::one());
        assert_eq!(rs[1].body(), &mono(1, 1, 1, 2));
        assert_eq!(rs[2].body(), &(&mono(1, 1, 1, 1) + &mono(1, 2, -1, 2)));
        let zero = eval_r_sequence(&TruncatedSeries::exact(PuiseuxPoly::zero()), 3).unwrap();
        assert!(zero[1..].iter().all(|r| r.body().is_zero()));
        let one = eval_r_sequence(&TruncatedSeries::exact(PuiseuxPoly::one()), 3).unwrap();
        assert!(one.iter().all(|r| r.body() == &PuiseuxPoly::one()));
    }

    #[test]
    fn evaluate_examples() {
        let sqrt = TruncatedSeries::exact(mono(1, 1, 1, 2));
        assert_eq!(airy().evaluate(&sqrt).unwrap().body(), &mono(1, 2, -1, 2));
        let first = RiccatiOperator::from_linear_ode(&LinearODE::from_int_coeffs(&[&[-1], &[1]]).unwrap());
        let at_one = first
            .evaluate(&TruncatedSeries::exact(PuiseuxPoly::one()))
            .unwrap();
        assert!(at_one.is_exact() && at_one.body().is_zero());
        // c·x^{1/2} with c = 3: (c² − 1)x + (c/2)x^{−1/2}
        let c3 = TruncatedSeries::exact(mono(3, 1, 1, 2));
        let v = airy().evaluate(&c3).unwrap();
        assert_eq!(v.body(), &(&mono(8, 1, 1, 1) + &mono(3, 2, -1, 2)));
        assert_eq!(v.body().lc_inf().unwrap(), FieldElement::from_int(8));
    }

    #[test]
    fn shift_examples() {
        let one = FieldElement::one();
        let r1 = airy().shift_substitute(&one, q(1, 2)).unwrap();
        assert_eq!(r1.coeffs(), &[mono(1, 2, -1, 2), mono(2, 1, 1, 2), ints(&[1])]);
        let first = RiccatiOperator::from_linear_ode(&LinearODE::from_int_coeffs(&[&[-1], &[1]]).unwrap());
        let s = first.shift_substitute(&one, q(0, 1)).unwrap();
        assert_eq!(s.coeffs(), &[PuiseuxPoly::zero(), ints(&[1])]);
        let cosh =
            RiccatiOperator::from_linear_ode(&LinearODE::from_int_coeffs(&[&[-1], &[], &[1]]).unwrap());
        let s = cosh.shift_substitute(&one, q(0, 1)).unwrap();
        assert_eq!(s.coeffs(), &[PuiseuxPoly::zero(), ints(&[2]), ints(&[1])]);
        assert!(cosh.shift_substitute(&FieldElement::zero(), q(0, 1)).is_err());
    }

    #[test]
    fn truncated_evaluation_floor() {
        // ψ = x^{1/2} + o(x^{-1}); the Airy residual is known from x^{-1/2} up.
        let psi = TruncatedSeries::truncated(mono(1, 1, 1, 2), q(-1, 1));
        let v = airy().evaluate(&psi).unwrap();
        assert_eq!(v.floor(), Some(q(-1, 2)));
        assert!(v.body().is_zero() || v.body().deg_inf().unwrap() >= q(-1, 2));
    }

    /// For an integer monic operator with exact solution ψ, r_{n+1}(ψ) is an
    /// integer combination of r_0(ψ), …, r_{n−1}(ψ).
    #[test]
    fn span_reduction() {
        // y'' − 2y' + y: ψ = 1 + 1/x is the log-derivative of x·e^x.
        let r = RiccatiOperator::from_linear_ode(&LinearODE::from_int_coeffs(&[&[1], &[-2], &[1]]).unwrap());
        let psi = TruncatedSeries::exact(&PuiseuxPoly::one() + &mono(1, 1, -1, 1));
        assert!(r.evaluate(&psi).unwrap().body().is_zero());
        let rs = eval_r_sequence(&psi, 3).unwrap();
        // r_2 = 2r_1 − r_0, so r_3 = ψ r_2 + r_2' = 2r_2 − r_1 = 3r_1 − 2r_0.
        let combo =
            &rs[1].body().scale(&FieldElement::from_int(3)) - &rs[0].body().scale(&FieldElement::from_int(2));
        assert_eq!(rs[3].body(), &combo);
        // Solve r_3 = a·r_0 + b·r_1 from the x^0 and x^{-1} coefficients.
        let (r3, r1) = (rs[3].body(), rs[1].body());
        let b = &r3.coefficient(&q(-1, 1)) / &r1.coefficient(&q(-1, 1));
        let a = &r3.coefficient(&q(0, 1)) - &(&b * &r1.coefficient(&q(0, 1)));
        assert_eq!((a, b), (FieldElement::from_int(-2), FieldElement::from_int(3)));
    }

    fn arb_operator(max_n: usize) -> impl Strategy<Value = RiccatiOperator> {
        (1..=max_n)
            .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-3i64..=3, 0..4), n + 1))
            .prop_map(|gs| {
                RiccatiOperator::new(gs.iter().map(|g| PuiseuxPoly::from_ints(g)).collect()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn derivative_matches_expansion(r in arb_operator(4), k in 0usize..5) {
            prop_assume!(k <= r.order());
            let mut lhs = r.expand_monomials(8).unwrap();
            for _ in 0..k {
                lhs = lhs.partial_y0();
            }
            prop_assert_eq!(lhs, r.derivative_k(k).expand_monomials(8).unwrap());
        }

        #[test]
        fn taylor_identity(r in arb_operator(3), c in 1i64..4, sign in prop::bool::ANY,
                           mn in -4i64..4, md in 1i64..3, pn in -4i64..4, pd in 1i64..3, pc in -3i64..3) {
            let c = FieldElement::from_int(if sign { c } else { -c });
            let mu = q(mn, md);
            let psi = PuiseuxPoly::monomial(FieldElement::from_int(pc), q(pn, pd));
            let r1 = r.shift_substitute(&c, mu).unwrap();
            let lhs = r1.evaluate(&TruncatedSeries::exact(psi.clone())).unwrap();
            let shifted = &psi + &PuiseuxPoly::monomial(c, mu);
            let rhs = r.evaluate(&TruncatedSeries::exact(shifted)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn oracle_evaluation_agrees(r in arb_operator(3), pc in -3i64..3, pn in -4i64..4, pd in 1i64..3) {
            let psi = PuiseuxPoly::monomial(FieldElement::from_int(pc), q(pn, pd));
            let lhs = r.evaluate(&TruncatedSeries::exact(psi.clone())).unwrap();
            let rhs = r.expand_monomials(8).unwrap().substitute(&psi).unwrap();
            prop_assert_eq!(lhs.body(), &rhs);
        }
    }
}
