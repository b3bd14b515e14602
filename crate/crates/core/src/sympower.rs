//! Symmetric powers of linear ODEs.
//!
//! `z = y^m` is written over the monomials `y^α = Π (y^{(j)})^{α_j}` with
//! `|α| = m` and `j < n`. Differentiating and reducing `y^{(n)}` through the
//! equation gives `z, z', z'', …` as vectors over `K(x)`; the first linear
//! dependence among them is the symmetric power.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numfield::FieldElement;
use crate::puiseux::PuiseuxPoly;
use crate::riccati::{LinearODE, RiccatiOperator};
use crate::upoly::Poly;

const X: &str = "x";

/// A reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: Poly::zero(X),
            den: Poly::from_ints(&[1], X),
        }
    }

    fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::from_ints(&[1], X),
        }
    }

    fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = (num.exact_div(&g)?, den.exact_div(&g)?);
        let inv = den.lc().inverse()?;
        Ok(RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    fn neg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }
}

/// All `α ∈ ℕ^n` with `|α| = m`, in lexicographic order.
fn monomial_basis(n: usize, m: usize) -> Vec<Vec<u32>> {
    fn go(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            go(n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, m as u32, &mut Vec::with_capacity(n), &mut out);
    out
}

struct Derivation {
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    f: Vec<Poly>,
}

impl Derivation {
    fn new(s: &LinearODE, m: usize) -> Result<Self> {
        let f = s
            .coeffs()
            .iter()
            .map(|c| {
                c.to_poly(X)
                    .ok_or_else(|| Error::Domain(format!("coefficient {c} is not a polynomial")))
            })
            .collect::<Result<Vec<_>>>()?;
        let basis = monomial_basis(s.order(), m);
        let index = basis.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        Ok(Derivation { basis, index, f })
    }

    fn add_at(&self, v: &mut [Poly], alpha: &[u32], p: &Poly) {
        let i = self.index[alpha];
        v[i] = &v[i] + p;
    }

    /// `f_n·D(v) − k·f_n'·v`, which maps `f_n^k·z^{(k)}` to
    /// `f_n^{k+1}·z^{(k+1)}`.
    fn step(&self, v: &[Poly], k: usize) -> Vec<Poly> {
        let n = self.f.len() - 1;
        let fnn = &self.f[n];
        let kfp = fnn.derivative().scale(&FieldElement::from_int(k as i64));
        let mut out = vec![Poly::zero(X); v.len()];
        for (alpha, p) in self.basis.iter().zip(v) {
            if p.is_zero() {
                continue;
            }
            self.add_at(&mut out, alpha, &(&(fnn * &p.derivative()) - &(&kfp * p)));
            for j in 0..n {
                if alpha[j] == 0 {
                    continue;
                }
                let a = FieldElement::from_int(alpha[j] as i64);
                let mut beta = alpha.clone();
                beta[j] -= 1;
                if j + 1 < n {
                    beta[j + 1] += 1;
                    self.add_at(&mut out, &beta, &(fnn * p).scale(&a));
                } else {
                    for (i, fi) in self.f[..n].iter().enumerate() {
                        if fi.is_zero() {
                            continue;
                        }
                        let mut gamma = beta.clone();
                        gamma[i] += 1;
                        self.add_at(&mut out, &gamma, &(fi * p).scale(&-&a));
                    }
                }
            }
        }
        out
    }
}

/// Solves `Σ_{k<N} x_k v_k = −v_N`, returning `None` when inconsistent.
fn solve_dependence(vs: &[Vec<Poly>]) -> Result<Option<Vec<RatFunc>>> {
    let ncols = vs.len() - 1;
    let nrows = vs[0].len();
    let mut a: Vec<Vec<RatFunc>> = (0..nrows)
        .map(|r| {
            vs.iter()
                .enumerate()
                .map(|(c, v)| {
                    let e = RatFunc::from_poly(v[r].clone());
                    if c == ncols {
                        e.neg()
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].clone();
        for c in col..=ncols {
            a[row][c] = a[row][c].div(&inv)?;
        }
        for r in 0..nrows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..=ncols {
                let t = factor.mul(&a[row][c])?;
                a[r][c] = a[r][c].add(&t.neg())?;
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if a[row..].iter().any(|r| !r[ncols].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![RatFunc::zero(); ncols];
    for (r, c) in pivots {
        x[c] = a[r][ncols].clone();
    }
    Ok(Some(x))
}

/// Scales polynomial coefficients to a canonical representative: common
/// polynomial factors removed, top coefficient monic, and rational
/// coefficients cleared to coprime integers.
fn normalize(mut coeffs: Vec<Poly>) -> Result<Vec<Poly>> {
    let g = coeffs.iter().fold(Poly::zero(X), |g, c| g.gcd(c));
    for c in &mut coeffs {
        *c = c.exact_div(&g)?;
    }
    let top = coeffs.last().expect("order at least 1").lc().inverse()?;
    for c in &mut coeffs {
        *c = c.scale(&top);
    }
    let rationals: Option<Vec<_>> = coeffs.iter().map(Poly::to_rationals).collect();
    if let Some(rs) = rationals {
        use num_integer::Integer;
        let den = rs
            .iter()
            .flatten()
            .fold(num_bigint::BigInt::from(1), |l, q| l.lcm(q.denom()));
        let scale = FieldElement::from_rational(den.into());
        for c in &mut coeffs {
            *c = c.scale(&scale);
        }
    }
    Ok(coeffs)
}

/// The minimal-order linear ODE satisfied by `y^m` for every solution `y`
/// of `s`, with polynomial coefficients.
pub fn symmetric_power(s: &LinearODE, m: usize) -> Result<LinearODE> {
    if m == 0 {
        return Err(Error::Domain("symmetric power needs m >= 1".into()));
    }
    let d = Derivation::new(s, m)?;
    let n = s.order();
    let mut start = vec![0u32; n];
    start[0] = m as u32;
    let mut v0 = vec![Poly::zero(X); d.basis.len()];
    d.add_at(&mut v0, &start, &Poly::from_ints(&[1], X));
    let mut vs = vec![v0];
    for k in 0..d.basis.len() {
        let next = d.step(&vs[k], k);
        vs.push(next);
        let Some(x) = solve_dependence(&vs)? else {
            continue;
        };
        // Σ x_j f_n^j z^{(j)} + f_n^N z^{(N)} = 0.
        let fnn = &d.f[n];
        let mut rf: Vec<RatFunc> = x;
        rf.push(RatFunc::from_poly(Poly::from_ints(&[1], X)));
        let mut power = Poly::from_ints(&[1], X);
        for r in rf.iter_mut() {
            *r = r.mul(&RatFunc::from_poly(power.clone()))?;
            power = &power * fnn;
        }
        let lcm = rf.iter().fold(Poly::from_ints(&[1], X), |l, r| {
            let g = l.gcd(&r.den);
            (&l * &r.den).exact_div(&g).expect("gcd divides")
        });
        let polys = rf
            .iter()
            .map(|r| (&r.num * &lcm).exact_div(&r.den))
            .collect::<Result<Vec<_>>>()?;
        let polys = normalize(polys)?;
        return LinearODE::new(polys.iter().map(PuiseuxPoly::from_poly).collect());
    }
    unreachable!("a family of basis-size + 1 vectors is dependent")
}

/// The Riccati operator annihilating `Σ α_i ψ_i` for logarithmic
/// derivatives `ψ_i` of solutions of `s`.
pub fn riccati_of_combination(s: &LinearODE, alpha: &[usize]) -> Result<RiccatiOperator> {
    if alpha.len() != s.order() {
        return Err(Error::Domain(format!(
            "expected {} exponents, got {}",
            s.order(),
            alpha.len()
        )));
    }
    let m: usize = alpha.iter().sum();
    match m {
        0 => Err(Error::Domain("exponents must sum to at least 1".into())),
        1 => Ok(RiccatiOperator::from_linear_ode(s)),
        _ => Ok(RiccatiOperator::from_linear_ode(&symmetric_power(s, m)?)),
    }
}
