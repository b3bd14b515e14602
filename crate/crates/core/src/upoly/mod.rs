//! Dense univariate polynomials over [`FieldElement`] coefficients.
//!
//! Arithmetic, Euclidean gcd, Yun squarefree decomposition, and complete
//! factorization: over ℚ by modular factorization with Hensel lifting and
//! factor recombination, over an extension tower by norms down to ℚ
//! (shift until the norm is squarefree, factor the norm, pull factors back by
//! gcd). Root extraction adjoins a fresh generator for every irreducible
//! factor of degree ≥ 2.

mod modp;
mod roots;
mod trager;
mod zassenhaus;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numfield::{ExtensionTower, FieldElement, Rational};

pub use roots::{RootClass, RootEntry, RootSet, DEFAULT_DEPTH_CAP};

/// A polynomial in one named variable, coefficients ascending.
///
/// The zero polynomial has no coefficients; otherwise the last coefficient is
/// nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
    var: String,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>, var: &str) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            coeffs,
            var: var.to_string(),
        }
    }

    pub fn zero(var: &str) -> Self {
        Poly::new(Vec::new(), var)
    }

    pub fn constant(c: FieldElement, var: &str) -> Self {
        Poly::new(vec![c], var)
    }

    /// The polynomial `var`.
    pub fn var(var: &str) -> Self {
        Poly::new(vec![FieldElement::zero(), FieldElement::one()], var)
    }

    pub fn from_ints(coeffs: &[i64], var: &str) -> Self {
        Poly::new(coeffs.iter().map(|&c| FieldElement::from_int(c)).collect(), var)
    }

    pub fn from_rationals(coeffs: &[Rational], var: &str) -> Self {
        Poly::new(
            coeffs.iter().cloned().map(FieldElement::from_rational).collect(),
            var,
        )
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn variable(&self) -> &str {
        &self.var
    }

    pub fn with_variable(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficient of `var^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(FieldElement::zero)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lc(&self) -> FieldElement {
        self.coeffs.last().cloned().unwrap_or_else(FieldElement::zero)
    }

    /// Smallest tower holding every coefficient.
    pub fn tower(&self) -> Result<ExtensionTower> {
        let mut tower = ExtensionTower::rational();
        for c in &self.coeffs {
            tower = tower.join(c.tower())?;
        }
        Ok(tower)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        let inv = self.lc().inverse().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect(), &self.var)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &FieldElement::from_int(i as i64))
            .collect();
        Poly::new(coeffs, &self.var)
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &FieldElement) -> FieldElement {
        let mut acc = FieldElement::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// The polynomial `p(var + shift)`.
    pub fn shift(&self, shift: &FieldElement) -> Self {
        let mut acc = Poly::zero(&self.var);
        let lin = Poly::new(vec![shift.clone(), FieldElement::one()], &self.var);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Poly::constant(c.clone(), &self.var);
        }
        acc
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Poly::constant(FieldElement::one(), &self.var);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; fails when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lead_inv = divisor.lc().inverse()?;
        let mut rem = self.coeffs.clone();
        let dl = divisor.coeffs.len();
        if rem.len() < dl {
            return Ok((Poly::zero(&self.var), self.clone()));
        }
        let mut quot = vec![FieldElement::zero(); rem.len() - dl + 1];
        while rem.len() >= dl {
            let shift = rem.len() - dl;
            let factor = rem.last().unwrap().checked_mul(&lead_inv)?;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = rem[shift + j].checked_sub(&factor.checked_mul(d)?)?;
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((Poly::new(quot, &self.var), Poly::new(rem, &self.var)))
    }

    /// Exact quotient; fails if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Domain("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic greatest common divisor; `gcd(a, 0) = monic(a)`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Resultant over the coefficient field, by the Euclidean remainder
    /// sequence.
    pub fn resultant(&self, other: &Poly) -> FieldElement {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return FieldElement::zero();
        };
        if db == 0 {
            return other.lc().pow(da as u32);
        }
        if da == 0 {
            return self.lc().pow(db as u32);
        }
        let (_, r) = self.div_rem(other).expect("nonzero divisor");
        let Some(dr) = r.degree() else {
            return FieldElement::zero();
        };
        let mut res = &other.lc().pow((da - dr) as u32) * &other.resultant(&r);
        if (da * db) % 2 == 1 {
            res = -res;
        }
        res
    }

    /// Yun's squarefree decomposition of `monic(self)`: pairwise coprime,
    /// squarefree, monic factors with their exponents, ascending exponent.
    /// Constants decompose to the empty list.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::Domain(
                "squarefree decomposition of the zero polynomial".into(),
            ));
        }
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return Ok(out);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0)?;
        let mut c = df.exact_div(&a0)?;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a)?;
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&a)?;
            d = &c - &b.derivative();
            i += 1;
        }
        Ok(out)
    }

    /// Complete factorization of `monic(self)` into monic irreducibles over
    /// the coefficients' tower, in canonical order.
    pub fn factor(&self) -> Result<Vec<(Poly, usize)>> {
        let tower = self.tower()?;
        self.factor_over(&tower)
    }

    /// Factorization over `tower`, which must contain every coefficient.
    pub fn factor_over(&self, tower: &ExtensionTower) -> Result<Vec<(Poly, usize)>> {
        let mut out = Vec::new();
        for (part, exp) in self.squarefree_decomposition()? {
            for f in factor_squarefree(&part, tower)? {
                out.push((f, exp));
            }
        }
        sort_factors(&mut out);
        Ok(out)
    }

    /// Product of `(factor, exponent)` pairs.
    pub fn product(factors: &[(Poly, usize)], var: &str) -> Poly {
        factors
            .iter()
            .fold(Poly::constant(FieldElement::one(), var), |acc, (f, e)| {
                &acc * &f.pow(*e as u32)
            })
    }

    /// Coefficients as rationals if every coefficient lies in ℚ.
    pub fn to_rationals(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    /// Primitive integer polynomial with positive leading coefficient that is
    /// a rational multiple of this rational polynomial.
    pub(crate) fn to_primitive_integer(&self) -> Option<Vec<BigInt>> {
        let qs = self.to_rationals()?;
        let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut ints: Vec<BigInt> = qs.iter().map(|q| (q * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !content.is_zero() {
            for c in &mut ints {
                *c /= &content;
            }
        }
        if ints.last().is_some_and(|c| c < &BigInt::zero()) {
            for c in &mut ints {
                *c = -&*c;
            }
        }
        Some(ints)
    }

    pub(crate) fn from_integers(coeffs: &[BigInt], var: &str) -> Poly {
        Poly::new(
            coeffs
                .iter()
                .map(|c| FieldElement::from_rational(Rational::from_integer(c.clone())))
                .collect(),
            var,
        )
    }
}

/// Irreducible monic factors of a squarefree polynomial over `tower`.
fn factor_squarefree(f: &Poly, tower: &ExtensionTower) -> Result<Vec<Poly>> {
    let f = f.monic();
    match f.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(1) => return Ok(vec![f]),
        _ => {}
    }
    if tower.depth() == 0 {
        let ints = f.to_primitive_integer().ok_or(Error::TowerMismatch)?;
        Ok(zassenhaus::factor_squarefree_integer(&ints)
            .iter()
            .map(|g| Poly::from_integers(g, &f.var).monic())
            .collect())
    } else {
        trager::factor_squarefree_over_tower(&f, tower)
    }
}

/// Canonical factor order: degree, then coefficients from the constant term up.
pub(crate) fn sort_factors(factors: &mut [(Poly, usize)]) {
    factors.sort_by(|(a, ea), (b, eb)| canonical_cmp(a, b).then(ea.cmp(eb)));
}

pub(crate) fn canonical_cmp(a: &Poly, b: &Poly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.cmp(&b.coeffs))
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        Poly::new(coeffs, &self.var)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        Poly::new(coeffs, &self.var)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.var);
        }
        let mut out = vec![FieldElement::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out, &self.var)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect(), &self.var)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let text = c.to_string();
            let compound = text.contains(' ');
            let power = match i {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{}", self.var, i),
            };
            if i == 0 {
                write!(f, "{}", if compound { format!("({text})") } else { text })?;
            } else if c.is_one() {
                write!(f, "{power}")?;
            } else if compound {
                write!(f, "({text})*{power}")?;
            } else {
                write!(f, "{text}*{power}")?;
            }
        }
        Ok(())
    }
}
