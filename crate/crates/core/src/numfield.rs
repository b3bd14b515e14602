//! Exact arithmetic over ℚ and over towers of simple algebraic extensions.
//!
//! A tower `ℚ ⊂ ℚ(θ₁) ⊂ … ⊂ ℚ(θ₁,…,θ_k)` is described by one monic minimal
//! polynomial per level, each with coefficients in the field below it.
//! Elements are stored as nested polynomials: a level-`k` element is a
//! polynomial in `θ_k` of degree `< deg θ_k` whose coefficients are elements
//! of strictly lower level. The representation is canonical: an element is
//! always stored at the lowest level that can hold it, so structural equality
//! is field equality.
//!
//! Towers are immutable and shared through `Arc`. Adjoining a level builds a
//! new tower whose prefix is the old one; elements of the old tower embed into
//! the new one without any change of representation.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::upoly::Poly;

pub type Rational = BigRational;

/// Nested coordinates of a field element.
///
/// `Alg(level, coeffs)` always has at least two coefficients, a nonzero last
/// coefficient, and coefficients of level strictly below `level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Repr {
    Rat(Rational),
    Alg(usize, Vec<Repr>),
}

#[derive(Debug, PartialEq, Eq)]
struct Level {
    name: String,
    /// Monic, ascending, length `degree + 1`.
    minpoly: Vec<Repr>,
}

impl Level {
    fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

/// A chain of simple algebraic extensions of ℚ. The empty tower is ℚ itself.
#[derive(Clone, Debug)]
pub struct ExtensionTower {
    levels: Arc<Vec<Arc<Level>>>,
}

impl PartialEq for ExtensionTower {
    fn eq(&self, other: &Self) -> bool {
        self.depth() == other.depth() && self.is_prefix_of(other)
    }
}

impl Eq for ExtensionTower {}

impl Default for ExtensionTower {
    fn default() -> Self {
        Self::rational()
    }
}

impl ExtensionTower {
    /// The trivial tower, i.e. the field ℚ.
    pub fn rational() -> Self {
        ExtensionTower {
            levels: Arc::new(Vec::new()),
        }
    }

    /// Number of adjoined generators.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Degree of the top level of the tower over ℚ.
    pub fn degree_over_q(&self) -> usize {
        self.levels.iter().map(|l| l.degree()).product()
    }

    /// Degree `[K_level : K_{level-1}]`, levels counted from 1.
    pub fn level_degree(&self, level: usize) -> usize {
        self.levels[level - 1].degree()
    }

    pub fn generator_name(&self, level: usize) -> &str {
        &self.levels[level - 1].name
    }

    /// The generator `θ_level` as an element of this tower.
    pub fn generator(&self, level: usize) -> FieldElement {
        assert!(
            (1..=self.depth()).contains(&level),
            "generator level {level} outside tower of depth {}",
            self.depth()
        );
        FieldElement {
            tower: self.clone(),
            repr: Repr::Alg(level, vec![Repr::Rat(Rational::zero()), rat_one()]),
        }
    }

    /// Minimal polynomial of `θ_level` over the field below it, in variable `var`.
    pub fn minpoly(&self, level: usize, var: &str) -> Poly {
        let below = self.truncate(level - 1);
        let coeffs = self.levels[level - 1]
            .minpoly
            .iter()
            .map(|r| FieldElement {
                tower: below.clone(),
                repr: r.clone(),
            })
            .collect();
        Poly::new(coeffs, var)
    }

    /// The sub-tower made of the first `depth` levels.
    pub fn truncate(&self, depth: usize) -> ExtensionTower {
        if depth >= self.depth() {
            return self.clone();
        }
        ExtensionTower {
            levels: Arc::new(self.levels[..depth].to_vec()),
        }
    }

    /// Adjoin a root of `minpoly`, which must be monic of degree ≥ 2 over this
    /// tower's top field. Irreducibility is the caller's responsibility.
    pub fn adjoin(&self, minpoly: &Poly) -> Result<ExtensionTower> {
        let degree = minpoly
            .degree()
            .ok_or_else(|| Error::InvalidExtension("zero polynomial".into()))?;
        if degree < 2 {
            return Err(Error::InvalidExtension(format!(
                "minimal polynomial must have degree >= 2, got {degree}"
            )));
        }
        if !minpoly.lc().is_one() {
            return Err(Error::InvalidExtension("minimal polynomial must be monic".into()));
        }
        for c in minpoly.coeffs() {
            if !c.tower().is_prefix_of(self) {
                return Err(Error::TowerMismatch);
            }
        }
        let mut levels = (*self.levels).clone();
        levels.push(Arc::new(Level {
            name: format!("theta{}", self.depth() + 1),
            minpoly: minpoly.coeffs().iter().map(|c| c.repr.clone()).collect(),
        }));
        Ok(ExtensionTower {
            levels: Arc::new(levels),
        })
    }

    /// Whether every level of `self` is a level of `other`, in order.
    pub fn is_prefix_of(&self, other: &ExtensionTower) -> bool {
        if Arc::ptr_eq(&self.levels, &other.levels) {
            return true;
        }
        self.depth() <= other.depth()
            && self
                .levels
                .iter()
                .zip(other.levels.iter())
                .all(|(a, b)| Arc::ptr_eq(a, b) || a == b)
    }

    /// The smaller tower containing both, when one is a prefix of the other.
    pub fn join(&self, other: &ExtensionTower) -> Result<ExtensionTower> {
        if self.is_prefix_of(other) {
            Ok(other.clone())
        } else if other.is_prefix_of(self) {
            Ok(self.clone())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    fn levels(&self) -> &[Arc<Level>] {
        &self.levels
    }
}

impl fmt::Display for ExtensionTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth() == 0 {
            return write!(f, "QQ");
        }
        write!(f, "QQ")?;
        for level in 1..=self.depth() {
            let name = self.generator_name(level).to_string();
            write!(f, "[{}: {} = 0]", name, self.minpoly(level, &name))?;
        }
        Ok(())
    }
}

/// An exact element of an [`ExtensionTower`].
#[derive(Clone, Debug)]
pub struct FieldElement {
    tower: ExtensionTower,
    repr: Repr,
}

impl FieldElement {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        FieldElement {
            tower: ExtensionTower::rational(),
            repr: Repr::Rat(q),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Builds the element `Σ coeffs[j]·θ_level^j`, reducing modulo the minimal
    /// polynomial of `θ_level`.
    pub fn from_coordinates(tower: &ExtensionTower, level: usize, coeffs: &[FieldElement]) -> Result<Self> {
        let theta = tower.generator(level);
        let mut acc = FieldElement::zero().embed(tower)?;
        let mut power = FieldElement::one().embed(tower)?;
        for c in coeffs {
            acc = acc.checked_add(&power.checked_mul(c)?)?;
            power = power.checked_mul(&theta)?;
        }
        Ok(acc)
    }

    pub fn tower(&self) -> &ExtensionTower {
        &self.tower
    }

    /// View this element inside a larger tower that extends its own.
    pub fn embed(&self, tower: &ExtensionTower) -> Result<Self> {
        if self.tower.is_prefix_of(tower) {
            Ok(FieldElement {
                tower: tower.clone(),
                repr: self.repr.clone(),
            })
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn is_zero(&self) -> bool {
        repr_is_zero(&self.repr)
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.repr, Repr::Rat(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.repr {
            Repr::Rat(q) => Some(q),
            Repr::Alg(..) => None,
        }
    }

    /// Highest generator index this element actually involves (0 for ℚ).
    pub fn level(&self) -> usize {
        repr_level(&self.repr)
    }

    /// Coordinates in `θ_level` (ascending), each of lower level.
    pub fn coordinates(&self, level: usize) -> Vec<FieldElement> {
        let below = self.tower.truncate(level.saturating_sub(1));
        coeffs_at(&self.repr, level)
            .into_iter()
            .map(|repr| FieldElement {
                tower: below.clone(),
                repr,
            })
            .collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let tower = self.tower.join(&other.tower)?;
        Ok(FieldElement {
            repr: add(&self.repr, &other.repr),
            tower,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        let tower = self.tower.join(&other.tower)?;
        Ok(FieldElement {
            repr: add(&self.repr, &neg(&other.repr)),
            tower,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let tower = self.tower.join(&other.tower)?;
        let repr = mul(tower.levels(), &self.repr, &other.repr);
        Ok(FieldElement { tower, repr })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = inv(self.tower.levels(), &self.repr).ok_or_else(|| {
            Error::Consistency("element not invertible: minimal polynomial is reducible".into())
        })?;
        Ok(FieldElement {
            tower: self.tower.clone(),
            repr,
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = FieldElement::one().embed(&self.tower).expect("rationals embed");
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replace the top generator `θ_k` of the tower by `image`, which must be
    /// another root of its minimal polynomial in the same tower. This is the
    /// field automorphism fixing the levels below `k`.
    pub fn substitute_top_generator(&self, image: &FieldElement) -> Result<Self> {
        let top = self.tower.depth().max(image.tower.depth());
        let tower = self.tower.join(&image.tower)?;
        if top == 0 || self.level() < top {
            return self.embed(&tower);
        }
        let mut acc = FieldElement::zero().embed(&tower)?;
        let mut power = FieldElement::one().embed(&tower)?;
        for c in self.coordinates(top) {
            acc = acc.checked_add(&power.checked_mul(&c)?)?;
            power = power.checked_mul(image)?;
        }
        Ok(acc)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr
            && (matches!(self.repr, Repr::Rat(_))
                || self.tower.is_prefix_of(&other.tower)
                || other.tower.is_prefix_of(&self.tower))
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical (structural) order; not an ordering of the field.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.repr.cmp(&other.repr)
    }
}

impl From<Rational> for FieldElement {
    fn from(q: Rational) -> Self {
        FieldElement::from_rational(q)
    }
}

impl From<i64> for FieldElement {
    fn from(n: i64) -> Self {
        FieldElement::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("field arithmetic failed: {e}"))
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            tower: self.tower.clone(),
            repr: neg(&self.repr),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_repr(f, &self.tower, &self.repr)
    }
}

/// Rationals are written `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn write_repr(f: &mut fmt::Formatter<'_>, tower: &ExtensionTower, repr: &Repr) -> fmt::Result {
    match repr {
        Repr::Rat(q) => write!(f, "{}", format_rational(q)),
        Repr::Alg(level, coeffs) => {
            let name = if *level <= tower.depth() {
                tower.generator_name(*level).to_string()
            } else {
                format!("theta{level}")
            };
            let mut first = true;
            for (j, c) in coeffs.iter().enumerate().rev() {
                if repr_is_zero(c) {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                let power = match j {
                    0 => String::new(),
                    1 => name.clone(),
                    _ => format!("{name}^{j}"),
                };
                if j == 0 {
                    write_repr(f, tower, c)?;
                    continue;
                }
                match c {
                    Repr::Rat(q) if q.is_one() => write!(f, "{power}")?,
                    Repr::Rat(q) if (-q).is_one() => write!(f, "-{power}")?,
                    Repr::Rat(_) => {
                        write_repr(f, tower, c)?;
                        write!(f, "*{power}")?;
                    }
                    Repr::Alg(..) => {
                        write!(f, "(")?;
                        write_repr(f, tower, c)?;
                        write!(f, ")*{power}")?;
                    }
                }
            }
            Ok(())
        }
    }
}

// ---- representation-level arithmetic ----

fn rat_one() -> Repr {
    Repr::Rat(Rational::one())
}

fn repr_zero() -> Repr {
    Repr::Rat(Rational::zero())
}

fn repr_is_zero(r: &Repr) -> bool {
    matches!(r, Repr::Rat(q) if q.is_zero())
}

fn repr_level(r: &Repr) -> usize {
    match r {
        Repr::Rat(_) => 0,
        Repr::Alg(level, _) => *level,
    }
}

fn coeffs_at(r: &Repr, level: usize) -> Vec<Repr> {
    match r {
        Repr::Alg(l, coeffs) if *l == level => coeffs.clone(),
        _ if repr_is_zero(r) => Vec::new(),
        _ => vec![r.clone()],
    }
}

fn trim(v: &mut Vec<Repr>) {
    while v.last().is_some_and(repr_is_zero) {
        v.pop();
    }
}

fn normalize(level: usize, mut coeffs: Vec<Repr>) -> Repr {
    trim(&mut coeffs);
    match coeffs.len() {
        0 => repr_zero(),
        1 => coeffs.pop().unwrap(),
        _ => Repr::Alg(level, coeffs),
    }
}

fn add(a: &Repr, b: &Repr) -> Repr {
    if let (Repr::Rat(x), Repr::Rat(y)) = (a, b) {
        return Repr::Rat(x + y);
    }
    let level = repr_level(a).max(repr_level(b));
    let va = coeffs_at(a, level);
    let vb = coeffs_at(b, level);
    let n = va.len().max(vb.len());
    let zero = repr_zero();
    let out = (0..n)
        .map(|i| add(va.get(i).unwrap_or(&zero), vb.get(i).unwrap_or(&zero)))
        .collect();
    normalize(level, out)
}

fn neg(a: &Repr) -> Repr {
    match a {
        Repr::Rat(q) => Repr::Rat(-q),
        Repr::Alg(level, coeffs) => Repr::Alg(*level, coeffs.iter().map(neg).collect()),
    }
}

fn sub(a: &Repr, b: &Repr) -> Repr {
    add(a, &neg(b))
}

fn mul(levels: &[Arc<Level>], a: &Repr, b: &Repr) -> Repr {
    if let (Repr::Rat(x), Repr::Rat(y)) = (a, b) {
        return Repr::Rat(x * y);
    }
    if repr_is_zero(a) || repr_is_zero(b) {
        return repr_zero();
    }
    let (la, lb) = (repr_level(a), repr_level(b));
    let level = la.max(lb);
    if la < level {
        let coeffs = coeffs_at(b, level).iter().map(|c| mul(levels, a, c)).collect();
        return normalize(level, coeffs);
    }
    if lb < level {
        let coeffs = coeffs_at(a, level).iter().map(|c| mul(levels, c, b)).collect();
        return normalize(level, coeffs);
    }
    let product = poly_mul(levels, &coeffs_at(a, level), &coeffs_at(b, level));
    normalize(level, reduce(levels, level, product))
}

/// Reduce a polynomial in `θ_level` modulo its minimal polynomial.
fn reduce(levels: &[Arc<Level>], level: usize, mut v: Vec<Repr>) -> Vec<Repr> {
    let minpoly = &levels[level - 1].minpoly;
    let d = minpoly.len() - 1;
    trim(&mut v);
    while v.len() > d {
        let top = v.pop().unwrap();
        let k = v.len() - d;
        for (j, m) in minpoly.iter().take(d).enumerate() {
            v[k + j] = sub(&v[k + j], &mul(levels, &top, m));
        }
        trim(&mut v);
    }
    v
}

fn poly_mul(levels: &[Arc<Level>], a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![repr_zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if repr_is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = add(&out[i + j], &mul(levels, x, y));
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Repr], b: &[Repr]) -> Vec<Repr> {
    let n = a.len().max(b.len());
    let zero = repr_zero();
    let mut out: Vec<Repr> = (0..n)
        .map(|i| sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(&mut out);
    out
}

/// Division with remainder of polynomials whose coefficients lie below the
/// level being inverted. `b` must be nonzero.
fn poly_divrem(levels: &[Arc<Level>], a: &[Repr], b: &[Repr]) -> Option<(Vec<Repr>, Vec<Repr>)> {
    let lead_inv = inv(levels, b.last()?)?;
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return Some((Vec::new(), rem));
    }
    let mut quot = vec![repr_zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = mul(levels, rem.last().unwrap(), &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] = sub(&rem[shift + j], &mul(levels, &factor, bj));
        }
        quot[shift] = factor;
        // the leading coefficient cancels exactly
        rem.pop();
        trim(&mut rem);
    }
    trim(&mut quot);
    Some((quot, rem))
}

fn inv(levels: &[Arc<Level>], a: &Repr) -> Option<Repr> {
    match a {
        Repr::Rat(q) => {
            if q.is_zero() {
                None
            } else {
                Some(Repr::Rat(q.recip()))
            }
        }
        Repr::Alg(level, coeffs) => {
            // extended Euclid against the minimal polynomial over K_{level-1}
            let mut r0 = levels[*level - 1].minpoly.clone();
            let mut r1 = coeffs.clone();
            let mut s0: Vec<Repr> = Vec::new();
            let mut s1: Vec<Repr> = vec![rat_one()];
            while r1.len() > 1 {
                let (q, r) = poly_divrem(levels, &r0, &r1)?;
                let s = poly_sub(&s0, &poly_mul(levels, &q, &s1));
                r0 = std::mem::replace(&mut r1, r);
                s0 = std::mem::replace(&mut s1, s);
            }
            let c = r1.first()?;
            let c_inv = inv(levels, c)?;
            let out = s1.iter().map(|s| mul(levels, s, &c_inv)).collect();
            Some(normalize(*level, reduce(levels, *level, out)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> (ExtensionTower, FieldElement) {
        let t = ExtensionTower::rational()
            .adjoin(&Poly::from_ints(&[-2, 0, 1], "C"))
            .unwrap();
        let theta = t.generator(1);
        (t, theta)
    }

    #[test]
    fn rational_sum() {
        let a = FieldElement::from_frac(1, 2) + FieldElement::from_frac(1, 3);
        assert_eq!(a, FieldElement::from_frac(5, 6));
    }

    #[test]
    fn theta_squared_reduces() {
        let (_, theta) = sqrt2();
        assert_eq!(&theta * &theta, FieldElement::from_int(2));
    }

    #[test]
    fn conjugate_product() {
        let (_, theta) = sqrt2();
        let one = FieldElement::one();
        let p = (&one + &theta) * (&theta - &one);
        assert_eq!(p, one);
    }

    #[test]
    fn inverses() {
        assert_eq!(
            FieldElement::from_frac(2, 3).inverse().unwrap(),
            FieldElement::from_frac(3, 2)
        );
        let (_, theta) = sqrt2();
        let a = &FieldElement::one() + &theta;
        assert_eq!(a.inverse().unwrap(), &theta - &FieldElement::one());
        assert!(matches!(
            FieldElement::zero().inverse(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn adjoin_validation() {
        let q = ExtensionTower::rational();
        assert_eq!(
            q.adjoin(&Poly::from_ints(&[-2, 0, 1], "C"))
                .unwrap()
                .degree_over_q(),
            2
        );
        assert!(matches!(
            q.adjoin(&Poly::from_ints(&[-5, 1], "C")),
            Err(Error::InvalidExtension(_))
        ));
        assert!(matches!(
            q.adjoin(&Poly::from_ints(&[-2, 0, 3], "C")),
            Err(Error::InvalidExtension(_))
        ));
        let (t, _) = sqrt2();
        let t2 = t.adjoin(&Poly::from_ints(&[-3, 0, 1], "C")).unwrap();
        assert_eq!(t2.degree_over_q(), 4);
        assert!(t.is_prefix_of(&t2));
        assert!(!t2.is_prefix_of(&t));
    }

    #[test]
    fn mismatched_towers_are_rejected() {
        let (_, a) = sqrt2();
        let t3 = ExtensionTower::rational()
            .adjoin(&Poly::from_ints(&[-3, 0, 1], "C"))
            .unwrap();
        let b = t3.generator(1);
        assert!(matches!(a.checked_add(&b), Err(Error::TowerMismatch)));
        // independently built but identical presentations are compatible
        let (_, a2) = sqrt2();
        assert_eq!(a.checked_add(&a2).unwrap(), FieldElement::from_int(2) * &a);
    }

    #[test]
    fn two_level_tower_arithmetic() {
        let (t, s2) = sqrt2();
        let t2 = t.adjoin(&Poly::from_ints(&[-3, 0, 1], "C")).unwrap();
        let s3 = t2.generator(2);
        let s6 = &s2 * &s3;
        assert_eq!(&s6 * &s6, FieldElement::from_int(6));
        let x = &s2 + &s3;
        let inv = x.inverse().unwrap();
        assert!((&x * &inv).is_one());
        // (√2+√3)^{-1} = √3 − √2
        assert_eq!(inv, &s3 - &s2);
    }

    #[test]
    fn display_is_nested() {
        let (t, s2) = sqrt2();
        let t2 = t.adjoin(&Poly::from_ints(&[-3, 0, 1], "C")).unwrap();
        let s3 = t2.generator(2);
        let e = &(&s2 + &FieldElement::from_frac(1, 2)) * &s3 + FieldElement::from_int(3);
        assert_eq!(e.to_string(), "(theta1 + 1/2)*theta2 + 3");
        assert_eq!((-&s2).to_string(), "-theta1");
    }
}
