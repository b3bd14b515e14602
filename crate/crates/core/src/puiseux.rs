//! Finite Puiseux polynomials `Σ c·x^q` (q ∈ ℚ) and truncated Puiseux series
//! at x = +∞.
//!
//! At infinity the governing data of a series are its largest exponent and
//! the coefficient there, so [`PuiseuxPoly::deg_inf`] and
//! [`PuiseuxPoly::lc_inf`] play the role of the valuation and leading
//! coefficient throughout the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numfield::{ExtensionTower, FieldElement};
use crate::upoly::Poly;

/// Exact rational exponent (also used for polygon abscissas).
pub type Exponent = Ratio<i64>;

/// Shorthand for the exponent `n/d`.
pub fn q(n: i64, d: i64) -> Exponent {
    Ratio::new(n, d)
}

/// Formats an exponent as `n` or `n/d`.
pub fn format_exponent(e: &Exponent) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// A finite sum of monomials `c·x^q` with nonzero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PuiseuxPoly {
    terms: BTreeMap<Exponent, FieldElement>,
}

impl PuiseuxPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::one())
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::monomial(c, Exponent::zero())
    }

    pub fn monomial(c: FieldElement, exp: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        PuiseuxPoly { terms }
    }

    /// `x^exp`.
    pub fn x_pow(exp: Exponent) -> Self {
        Self::monomial(FieldElement::one(), exp)
    }

    /// Sums the given terms, merging equal exponents.
    pub fn from_terms<I: IntoIterator<Item = (FieldElement, Exponent)>>(terms: I) -> Self {
        let mut out = PuiseuxPoly::zero();
        for (c, e) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// Polynomial with integer coefficients, ascending in x.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (FieldElement::from_int(c), Exponent::from_integer(i as i64))),
        )
    }

    /// Reads an ordinary polynomial in x.
    pub fn from_poly(p: &Poly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), Exponent::from_integer(i as i64))),
        )
    }

    /// The ordinary polynomial in `var` with the same terms, if every exponent
    /// is a nonnegative integer.
    pub fn to_poly(&self, var: &str) -> Option<Poly> {
        let deg = match self.deg_inf() {
            None => return Some(Poly::zero(var)),
            Some(d) => d,
        };
        if self.terms.keys().any(|e| !e.is_integer() || e.is_negative()) {
            return None;
        }
        let mut coeffs = vec![FieldElement::zero(); deg.to_integer() as usize + 1];
        for (e, c) in &self.terms {
            coeffs[e.to_integer() as usize] = c.clone();
        }
        Some(Poly::new(coeffs, var))
    }

    fn add_term(&mut self, exp: Exponent, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            None => {
                self.terms.insert(exp, c);
            }
            Some(old) => {
                let sum = &old + &c;
                if !sum.is_zero() {
                    self.terms.insert(exp, sum);
                }
            }
        }
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

    /// Largest exponent with a nonzero coefficient; `None` stands for −∞.
    pub fn deg_inf(&self) -> Option<Exponent> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `x^{deg_inf}`.
    pub fn lc_inf(&self) -> Result<FieldElement> {
        self.terms
            .values()
            .next_back()
            .cloned()
            .ok_or_else(|| Error::Domain("leading coefficient of the zero series".into()))
    }

    pub fn coefficient(&self, exp: &Exponent) -> FieldElement {
        self.terms.get(exp).cloned().unwrap_or_else(FieldElement::zero)
    }

    /// Terms by decreasing exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &FieldElement)> {
        self.terms.iter().rev()
    }

    /// Lcm of the exponent denominators (1 for the zero polynomial).
    pub fn ramification(&self) -> i64 {
        self.terms.keys().fold(1, |acc, e| acc.lcm(e.denom()))
    }

    /// Smallest tower containing every coefficient.
    pub fn tower(&self) -> Result<ExtensionTower> {
        self.terms
            .values()
            .try_fold(ExtensionTower::rational(), |t, c| t.join(c.tower()))
    }

    pub fn differentiate(&self) -> Self {
        PuiseuxPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| !e.is_zero())
                .map(|(e, c)| (e - 1, c * &FieldElement::from_frac(*e.numer(), *e.denom())))
                .collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PuiseuxPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    /// Multiplies by `x^shift`.
    pub fn shift_exponents(&self, shift: Exponent) -> Self {
        PuiseuxPoly {
            terms: self.terms.iter().map(|(e, a)| (e + shift, a.clone())).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let merged = match out.terms.remove(e) {
                None => c.clone(),
                Some(old) => old.checked_add(c)?,
            };
            if !merged.is_zero() {
                out.terms.insert(*e, merged);
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = PuiseuxPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let prod = ca.checked_mul(cb)?;
                let e = ea + eb;
                let merged = match out.terms.remove(&e) {
                    None => prod,
                    Some(old) => old.checked_add(&prod)?,
                };
                if !merged.is_zero() {
                    out.terms.insert(e, merged);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = PuiseuxPoly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Drops every term with exponent below `floor`.
    pub fn truncate_below(&self, floor: &Exponent) -> Self {
        PuiseuxPoly {
            terms: self.terms.range(*floor..).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coefficients<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&FieldElement) -> Result<FieldElement>,
    {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.insert(*e, v);
            }
        }
        Ok(PuiseuxPoly { terms })
    }
}

impl Add<&PuiseuxPoly> for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn add(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        self.checked_add(rhs)
            .unwrap_or_else(|e| panic!("series arithmetic failed: {e}"))
    }
}

impl Sub<&PuiseuxPoly> for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn sub(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        self.checked_sub(rhs)
            .unwrap_or_else(|e| panic!("series arithmetic failed: {e}"))
    }
}

impl Mul<&PuiseuxPoly> for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn mul(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        self.checked_mul(rhs)
            .unwrap_or_else(|e| panic!("series arithmetic failed: {e}"))
    }
}

impl Neg for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn neg(self) -> PuiseuxPoly {
        PuiseuxPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

/// `c1*x^(q1) + c2*x^(q2) + …` by decreasing exponent; compound coefficients
/// are parenthesized.
impl fmt::Display for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let cs = c.to_string();
            if cs.contains(' ') {
                write!(f, "({cs})*x^({})", format_exponent(e))?;
            } else {
                write!(f, "{cs}*x^({})", format_exponent(e))?;
            }
        }
        Ok(())
    }
}

/// A Puiseux series known through its terms at or above `floor`.
///
/// `floor == None` means the series is exact: it equals its body. Otherwise
/// every discarded term has exponent strictly below the floor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    body: PuiseuxPoly,
    floor: Option<Exponent>,
}

impl TruncatedSeries {
    pub fn exact(body: PuiseuxPoly) -> Self {
        TruncatedSeries { body, floor: None }
    }

    /// Keeps the terms at or above `floor`.
    pub fn truncated(body: PuiseuxPoly, floor: Exponent) -> Self {
        TruncatedSeries {
            body: body.truncate_below(&floor),
            floor: Some(floor),
        }
    }

    pub fn body(&self) -> &PuiseuxPoly {
        &self.body
    }

    pub fn floor(&self) -> Option<Exponent> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    /// Adds an exactly known polynomial; the floor is unchanged.
    pub fn add_exact(&self, p: &PuiseuxPoly) -> Result<Self> {
        let body = self.body.checked_add(p)?;
        Ok(match self.floor {
            None => TruncatedSeries::exact(body),
            Some(f) => TruncatedSeries::truncated(body, f),
        })
    }
}

impl From<PuiseuxPoly> for TruncatedSeries {
    fn from(body: PuiseuxPoly) -> Self {
        TruncatedSeries::exact(body)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.floor {
            None => write!(f, "{}", self.body),
            Some(fl) if self.body.is_zero() => write!(f, "o(x^({}))", format_exponent(&fl)),
            Some(fl) => write!(f, "{} + o(x^({}))", self.body, format_exponent(&fl)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(n: i64, d: i64) -> FieldElement {
        FieldElement::from_frac(n, d)
    }

    fn mono(n: i64, d: i64, en: i64, ed: i64) -> PuiseuxPoly {
        PuiseuxPoly::monomial(fe(n, d), q(en, ed))
    }

    #[test]
    fn degree_at_infinity() {
        let p = &mono(1, 1, 3, 2) - &mono(1, 1, 1, 1);
        assert_eq!(p.deg_inf(), Some(q(3, 2)));
        assert_eq!(PuiseuxPoly::zero().deg_inf(), None);
        let r = &mono(-1, 4, -1, 1) + &mono(7, 1, -3, 1);
        assert_eq!(r.deg_inf(), Some(q(-1, 1)));
    }

    #[test]
    fn leading_coefficient() {
        assert_eq!(PuiseuxPoly::from_ints(&[0, -1, 3]).lc_inf().unwrap(), fe(3, 1));
        assert_eq!(PuiseuxPoly::from_ints(&[0, -1]).lc_inf().unwrap(), fe(-1, 1));
        assert_eq!(PuiseuxPoly::from_ints(&[5]).lc_inf().unwrap(), fe(5, 1));
        assert!(PuiseuxPoly::zero().lc_inf().is_err());
    }

    #[test]
    fn differentiation() {
        assert_eq!(mono(1, 1, 1, 2).differentiate(), mono(1, 2, -1, 2));
        assert!(PuiseuxPoly::from_ints(&[7]).differentiate().is_zero());
        let p = &mono(1, 1, 2, 1) + &mono(1, 1, -1, 1);
        let dp = &mono(2, 1, 1, 1) + &mono(-1, 1, -2, 1);
        assert_eq!(p.differentiate(), dp);
    }

    #[test]
    fn ring_arithmetic() {
        let s = mono(1, 1, 1, 2);
        assert_eq!(&s * &s, mono(1, 1, 1, 1));
        let a = PuiseuxPoly::from_ints(&[1, 1]);
        assert_eq!(&a + &PuiseuxPoly::from_ints(&[0, -1]), PuiseuxPoly::one());
        let b = &s + &PuiseuxPoly::one();
        let expected =
            PuiseuxPoly::from_terms([(fe(1, 1), q(1, 1)), (fe(2, 1), q(1, 2)), (fe(1, 1), q(0, 1))]);
        assert_eq!(b.pow(2), expected);
    }

    #[test]
    fn canonical_text() {
        let p = &mono(1, 1, 1, 2) + &mono(-1, 4, -1, 1);
        assert_eq!(p.to_string(), "1*x^(1/2) + -1/4*x^(-1)");
        let t = TruncatedSeries::truncated(p, q(-2, 1));
        assert_eq!(t.to_string(), "1*x^(1/2) + -1/4*x^(-1) + o(x^(-2))");
    }

    #[test]
    fn truncation_drops_low_terms() {
        let p = &mono(1, 1, 1, 1) + &mono(3, 1, -3, 1);
        let t = TruncatedSeries::truncated(p, q(-2, 1));
        assert_eq!(t.body(), &mono(1, 1, 1, 1));
        assert!(!t.is_exact());
    }

    fn arb_poly() -> impl Strategy<Value = PuiseuxPoly> {
        prop::collection::vec((-5i64..=5, -6i64..=6, 1i64..=3), 0..5).prop_map(|ts| {
            PuiseuxPoly::from_terms(
                ts.into_iter()
                    .map(|(c, n, d)| (FieldElement::from_int(c), q(n, d))),
            )
        })
    }

    proptest! {
        #[test]
        fn leibniz_rule(p in arb_poly(), r in arb_poly()) {
            let lhs = (&p * &r).differentiate();
            let rhs = &(&p.differentiate() * &r) + &(&p * &r.differentiate());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn degree_and_lc_multiplicative(p in arb_poly(), r in arb_poly()) {
            prop_assume!(!p.is_zero() && !r.is_zero());
            let pr = &p * &r;
            prop_assert_eq!(pr.deg_inf(), Some(p.deg_inf().unwrap() + r.deg_inf().unwrap()));
            prop_assert_eq!(pr.lc_inf().unwrap(), &p.lc_inf().unwrap() * &r.lc_inf().unwrap());
        }

        #[test]
        fn ramification_divides_input_lcm(p in arb_poly(), r in arb_poly()) {
            let l = p.ramification().lcm(&r.ramification());
            prop_assert_eq!(l % (&p * &r).ramification(), 0);
            prop_assert_eq!(l % (&p + &r).ramification(), 0);
            prop_assert_eq!(p.ramification() % p.differentiate().ramification(), 0);
        }
    }
}
