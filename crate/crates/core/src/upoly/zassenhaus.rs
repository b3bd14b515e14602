//! Factorization of squarefree primitive integer polynomials: factor modulo a
//! good prime, Hensel-lift the modular factors past a Mignotte bound, then
//! recombine subsets by trial division.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{Fp, FpPoly};

/// Number of admissible primes tried before committing to the one with the
/// fewest modular factors.
const PRIME_TRIALS: usize = 5;

/// Irreducible primitive factors (positive leading coefficient) of a
/// squarefree primitive polynomial with positive leading coefficient.
pub(crate) fn factor_squarefree_integer(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut f = trim(f.to_vec());
    let mut out = Vec::new();
    if f.len() > 1 && f[0].is_zero() {
        out.push(vec![BigInt::zero(), BigInt::one()]);
        f.remove(0);
    }
    if f.len() <= 1 {
        return out;
    }
    if f.len() == 2 {
        out.push(f);
        return out;
    }
    out.extend(zassenhaus(&f));
    out
}

fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let lc = f.last().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let mut best: Option<(Fp, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if tried == PRIME_TRIALS {
            break;
        }
        let fp = Fp::new(p);
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let reduced = reduce_mod_p(f, p);
        if !fp.is_squarefree(&reduced) {
            continue;
        }
        tried += 1;
        let factors = fp.factor_squarefree(&fp.monic(&reduced), &mut rng);
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((fp, factors));
        }
        if best.as_ref().unwrap().1.len() == 1 {
            break;
        }
    }
    let (fp, modular) = best.expect("some prime is admissible for a squarefree polynomial");
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }

    let bound = coefficient_bound(f);
    let p = BigInt::from(fp.p);
    let mut k = 1u32;
    let mut pk = p.clone();
    while pk <= &bound * 2 {
        pk *= &p;
        k += 1;
    }
    let lifted = multifactor_lift(f, &modular, fp, k, &pk);
    recombine(f, lifted, &pk)
}

/// `|lc(f)| · 2^deg(f) · ‖f‖₂` rounded up: bounds every coefficient of
/// `lc(f)·g/lc(g)` for a factor `g` of `f`.
fn coefficient_bound(f: &[BigInt]) -> BigInt {
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + 1;
    let deg = f.len() - 1;
    f.last().unwrap().abs() * (BigInt::one() << deg) * norm
}

fn multifactor_lift(f: &[BigInt], modular: &[FpPoly], fp: Fp, k: u32, pk: &BigInt) -> Vec<Vec<BigInt>> {
    let lc_mod_p = (f.last().unwrap().mod_floor(&BigInt::from(fp.p)))
        .to_u64_digits()
        .1
        .first()
        .copied()
        .unwrap_or(0);
    let mut target = mod_poly(f, pk);
    let mut lifted = Vec::new();
    for i in 0..modular.len() - 1 {
        let g = &modular[i];
        let h = modular[i + 1..]
            .iter()
            .fold(vec![lc_mod_p], |acc, u| fp.mul_poly(&acc, u));
        let (big_g, big_h) = hensel_lift(&target, g, &h, fp, k, pk);
        lifted.push(big_g);
        target = big_h;
    }
    // the last factor is lc·u_r; make it monic modulo p^k
    let lc_inv = mod_inverse(target.last().unwrap(), pk);
    lifted.push(mod_poly(&scale(&target, &lc_inv), pk));
    lifted
}

/// Lift `f ≡ g·h (mod p)` with `g` monic to `f ≡ G·H (mod p^k)`.
fn hensel_lift(
    f: &[BigInt],
    g: &FpPoly,
    h: &FpPoly,
    fp: Fp,
    k: u32,
    pk: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = BigInt::from(fp.p);
    let (s, t) = fp.bezout(g, h);
    let mut big_g = to_big(g);
    let mut big_h = to_big(h);
    let mut pj = p.clone();
    for _ in 1..k {
        let diff = sub(f, &mul(&big_g, &big_h));
        let next = &pj * &p;
        let e: FpPoly = fp.trim(
            diff.iter()
                .map(|c| {
                    let q = c.mod_floor(&next) / &pj;
                    q.to_u64_digits().1.first().copied().unwrap_or(0)
                })
                .collect(),
        );
        let te = fp.mul_poly(&t, &e);
        let (q, dg) = fp.div_rem(&te, g);
        let dh = fp.add_poly(&fp.mul_poly(&s, &e), &fp.mul_poly(&q, h));
        big_g = add(&big_g, &scale(&to_big(&dg), &pj));
        big_h = add(&big_h, &scale(&to_big(&dh), &pj));
        pj = next;
    }
    (mod_poly(&big_g, pk), mod_poly(&big_h, pk))
}

fn recombine(f: &[BigInt], lifted: Vec<Vec<BigInt>>, pk: &BigInt) -> Vec<Vec<BigInt>> {
    let mut remaining = lifted;
    let mut f = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = None;
        for subset in combinations(remaining.len(), size) {
            let lc = f.last().unwrap().clone();
            let mut g = vec![lc];
            for &i in &subset {
                g = mod_poly(&mul(&g, &remaining[i]), pk);
            }
            let g = primitive(&symmetric(&g, pk));
            if let Some(q) = exact_div(&f, &g) {
                found = Some((subset, g, q));
                break;
            }
        }
        match found {
            Some((subset, g, q)) => {
                out.push(g);
                f = primitive(&q);
                for &i in subset.iter().rev() {
                    remaining.remove(i);
                }
            }
            None => size += 1,
        }
    }
    if f.len() > 1 {
        out.push(f);
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..)
        .step_by(2)
        .filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

// ---- integer polynomial helpers ----

fn trim(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn reduce_mod_p(f: &[BigInt], p: u64) -> FpPoly {
    let m = BigInt::from(p);
    let v: FpPoly = f
        .iter()
        .map(|c| c.mod_floor(&m).to_u64_digits().1.first().copied().unwrap_or(0))
        .collect();
    let mut v = v;
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn to_big(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn scale(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    trim(a.iter().map(|x| x * c).collect())
}

fn mod_poly(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    trim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    trim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let content = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return a.to_vec();
    }
    let sign = if a.last().is_some_and(|c| c.sign() == Sign::Minus) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    a.iter().map(|c| c / &content * &sign).collect()
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let egcd = a.mod_floor(m).extended_gcd(m);
    debug_assert!(egcd.gcd.is_one());
    egcd.x.mod_floor(m)
}

/// `a / b` over ℤ when `b` divides `a` exactly.
fn exact_div(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem = trim(a.to_vec());
    if b.is_empty() || rem.len() < b.len() {
        return None;
    }
    let lb = b.last().unwrap();
    let mut quot = vec![BigInt::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let (q, r) = rem.last().unwrap().div_rem(lb);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &q * bj;
        }
        quot[shift] = q;
        rem = trim(rem);
    }
    if rem.is_empty() {
        Some(trim(quot))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn combination_enumeration() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn splits_product_of_quadratics() {
        // (x² + 1)(x² + x + 5)(3x − 2)
        let f = mul(&mul(&ints(&[1, 0, 1]), &ints(&[5, 1, 1])), &ints(&[-2, 3]));
        let mut factors = factor_squarefree_integer(&f);
        factors.sort();
        let mut expected = vec![ints(&[1, 0, 1]), ints(&[5, 1, 1]), ints(&[-2, 3])];
        expected.sort();
        assert_eq!(factors, expected);
    }

    #[test]
    fn irreducible_stays_whole() {
        let f = ints(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree_integer(&f), vec![f]);
    }

    #[test]
    fn large_coefficients() {
        // (x − 1000003)(x + 999983)(x² + 7)
        let f = mul(
            &mul(&ints(&[-1000003, 1]), &ints(&[999983, 1])),
            &ints(&[7, 0, 1]),
        );
        assert_eq!(factor_squarefree_integer(&f).len(), 3);
    }
}
