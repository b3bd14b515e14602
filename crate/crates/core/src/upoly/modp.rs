//! Polynomials over the prime field 𝔽_p (p < 2³¹), dense ascending `Vec<u64>`.
//!
//! Only what the integer factorizer needs: arithmetic, gcd, powering modulo a
//! polynomial, and Cantor–Zassenhaus (distinct-degree then equal-degree).

use num_bigint::BigUint;
use rand::Rng;

pub(crate) type FpPoly = Vec<u64>;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p > 2 && p < (1 << 31));
        Fp { p }
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    pub fn trim(&self, mut a: FpPoly) -> FpPoly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn add_poly(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| self.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(v)
    }

    pub fn sub_poly(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| self.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
            .collect();
        self.trim(v)
    }

    pub fn mul_poly(&self, a: &[u64], b: &[u64]) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        self.trim(out)
    }

    pub fn scale(&self, a: &[u64], c: u64) -> FpPoly {
        self.trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn monic(&self, a: &[u64]) -> FpPoly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv(lc)),
        }
    }

    pub fn div_rem(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
        assert!(!b.is_empty(), "division by zero polynomial mod p");
        let mut rem = self.trim(a.to_vec());
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead_inv = self.inv(*b.last().unwrap());
        let mut quot = vec![0u64; rem.len() - b.len() + 1];
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let factor = self.mul(*rem.last().unwrap(), lead_inv);
            for (j, &bj) in b.iter().enumerate() {
                rem[shift + j] = self.sub(rem[shift + j], self.mul(factor, bj));
            }
            quot[shift] = factor;
            rem.pop();
            rem = self.trim(rem);
        }
        (self.trim(quot), rem)
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> FpPoly {
        self.div_rem(a, b).1
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let mut a = self.trim(a.to_vec());
        let mut b = self.trim(b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Bezout coefficients `(s, t)` with `s·a + t·b = 1`, for coprime inputs.
    pub fn bezout(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
        let (mut r0, mut r1) = (self.trim(a.to_vec()), self.trim(b.to_vec()));
        let (mut s0, mut s1): (FpPoly, FpPoly) = (vec![1], Vec::new());
        let (mut t0, mut t1): (FpPoly, FpPoly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s = self.sub_poly(&s0, &self.mul_poly(&q, &s1));
            let t = self.sub_poly(&t0, &self.mul_poly(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        assert_eq!(r0.len(), 1, "bezout on non-coprime polynomials");
        let c = self.inv(r0[0]);
        (self.scale(&s0, c), self.scale(&t0, c))
    }

    pub fn derivative(&self, a: &[u64]) -> FpPoly {
        let v = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, i as u64 % self.p))
            .collect();
        self.trim(v)
    }

    pub fn pow_mod(&self, base: &[u64], exp: &BigUint, modulus: &[u64]) -> FpPoly {
        let mut acc: FpPoly = vec![1];
        let mut b = self.rem(base, modulus);
        for i in 0..exp.bits() {
            if exp.bit(i) {
                acc = self.rem(&self.mul_poly(&acc, &b), modulus);
            }
            b = self.rem(&self.mul_poly(&b, &b), modulus);
        }
        self.rem(&acc, modulus)
    }

    pub fn is_squarefree(&self, a: &[u64]) -> bool {
        self.gcd(a, &self.derivative(a)).len() == 1
    }

    /// Monic irreducible factors of a monic squarefree polynomial.
    pub fn factor_squarefree<R: Rng>(&self, f: &[u64], rng: &mut R) -> Vec<FpPoly> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            self.equal_degree(&g, d, rng, &mut out);
        }
        out.sort();
        out
    }

    fn distinct_degree(&self, f: &[u64]) -> Vec<(FpPoly, usize)> {
        let x: FpPoly = vec![0, 1];
        let p = BigUint::from(self.p);
        let mut rest = self.monic(f);
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut d = 1;
        while rest.len() > 1 && 2 * d <= rest.len() - 1 {
            h = self.pow_mod(&h, &p, &rest);
            let g = self.gcd(&rest, &self.sub_poly(&h, &x));
            if g.len() > 1 {
                rest = self.div_rem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((g, d));
            }
            d += 1;
        }
        if rest.len() > 1 {
            let deg = rest.len() - 1;
            out.push((rest, deg));
        }
        out
    }

    fn equal_degree<R: Rng>(&self, f: &[u64], d: usize, rng: &mut R, out: &mut Vec<FpPoly>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let exp = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: FpPoly = self.trim((0..n).map(|_| rng.random_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub_poly(&self.pow_mod(&a, &exp, f), &[1]);
            let g = self.gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.div_rem(f, &g).0;
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&self.monic(&h), d, rng, out);
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_multiply_back() {
        let fp = Fp::new(101);
        // (x+1)(x+2)(x²+x+3) mod 101, x²+x+3 has discriminant −11
        let f = fp.mul_poly(&fp.mul_poly(&[1, 1], &[2, 1]), &[3, 1, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let factors = fp.factor_squarefree(&f, &mut rng);
        let prod = factors.iter().fold(vec![1u64], |acc, g| fp.mul_poly(&acc, g));
        assert_eq!(prod, f);
        assert!(factors.len() >= 3);
    }

    #[test]
    fn bezout_identity() {
        let fp = Fp::new(13);
        let (s, t) = fp.bezout(&[1, 1], &[2, 0, 1]);
        let lhs = fp.add_poly(&fp.mul_poly(&s, &[1, 1]), &fp.mul_poly(&t, &[2, 0, 1]));
        assert_eq!(lhs, vec![1]);
    }
}
