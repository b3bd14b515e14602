//! Equation shorthand: `y'' - x*y = 0`, `(x^2+1)*y''' + 2y' = y`.
//!
//! Derivatives are written with primes or as `y^(k)`. Coefficients are
//! polynomials in `x` with rational constants; juxtaposition multiplies.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use puiseux_riccati::{FieldElement, LinearODE, Poly, PuiseuxPoly, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    X,
    Y(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Equals,
}

fn tokenize(src: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        i += 1;
        let tok = match c {
            c if c.is_whitespace() => continue,
            '0'..='9' => {
                let start = i - 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                Token::Num(digits.parse().expect("ascii digits"))
            }
            'x' => Token::X,
            'y' => {
                let mut order = 0;
                while i < chars.len() && chars[i] == '\'' {
                    order += 1;
                    i += 1;
                }
                if order == 0 && chars[i..].starts_with(&['^', '(']) {
                    let close = chars[i..].iter().position(|&c| c == ')').ok_or("unclosed y^(")?;
                    let inner: String = chars[i + 2..i + close].iter().collect();
                    order = inner
                        .trim()
                        .parse()
                        .map_err(|_| format!("bad derivative order {inner:?}"))?;
                    i += close + 1;
                }
                Token::Y(order)
            }
            '+' => Token::Plus,
            '-' | '−' => Token::Minus,
            '*' | '·' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '=' => Token::Equals,
            other => return Err(format!("unexpected character {other:?}")),
        };
        out.push(tok);
    }
    Ok(out)
}

/// `scalar + Σ derivs[k]·y^{(k)}` with polynomial coefficients.
#[derive(Clone, Debug)]
struct Form {
    scalar: Poly,
    derivs: BTreeMap<usize, Poly>,
}

impl Form {
    fn scalar(p: Poly) -> Self {
        Form {
            scalar: p,
            derivs: BTreeMap::new(),
        }
    }

    fn is_scalar(&self) -> bool {
        self.derivs.values().all(Poly::is_zero)
    }

    fn add(mut self, other: Form, sign: i64) -> Form {
        let s = FieldElement::from_int(sign);
        self.scalar = &self.scalar + &other.scalar.scale(&s);
        for (k, p) in other.derivs {
            let e = self.derivs.entry(k).or_insert_with(|| Poly::zero("x"));
            *e = &*e + &p.scale(&s);
        }
        self
    }

    fn mul(self, other: Form) -> Result<Form, String> {
        let (s, f) = match (self.is_scalar(), other.is_scalar()) {
            (true, _) => (self.scalar, other),
            (_, true) => (other.scalar, self),
            _ => return Err("product of two y terms: the equation must be linear".into()),
        };
        Ok(Form {
            scalar: &s * &f.scalar,
            derivs: f.derivs.into_iter().map(|(k, p)| (k, &s * &p)).collect(),
        })
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Form, String> {
        let mut acc = self.term()?;
        loop {
            let sign = match self.peek() {
                Some(Token::Plus) => 1,
                Some(Token::Minus) => -1,
                _ => return Ok(acc),
            };
            self.pos += 1;
            acc = acc.add(self.term()?, sign);
        }
    }

    fn term(&mut self) -> Result<Form, String> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(self.unary()?)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let c = (d.is_scalar() && d.scalar.is_constant() && !d.scalar.is_zero())
                        .then(|| d.scalar.coeff(0))
                        .ok_or("can only divide by a nonzero constant")?;
                    acc = acc.mul(Form::scalar(Poly::constant(c.inverse().expect("nonzero"), "x")))?;
                }
                Some(Token::Num(_) | Token::X | Token::Y(_) | Token::LParen) => {
                    acc = acc.mul(self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Form, String> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(Form::scalar(Poly::zero("x")).add(self.unary()?, -1))
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Form, String> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let Some(Token::Num(e)) = self.next() else {
            return Err("exponent must be a nonnegative integer".into());
        };
        let e = e.to_u32().ok_or("exponent too large")?;
        if !base.is_scalar() {
            return Err("powers of y terms make the equation nonlinear".into());
        }
        Ok(Form::scalar(base.scalar.pow(e)))
    }

    fn atom(&mut self) -> Result<Form, String> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Form::scalar(Poly::constant(
                FieldElement::from_rational(Rational::from_integer(n)),
                "x",
            ))),
            Some(Token::X) => Ok(Form::scalar(Poly::var("x"))),
            Some(Token::Y(k)) => Ok(Form {
                scalar: Poly::zero("x"),
                derivs: BTreeMap::from([(k, Poly::from_ints(&[1], "x"))]),
            }),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err("missing ')'".into()),
                }
            }
            Some(t) => Err(format!("unexpected {t:?}")),
            None => Err("unexpected end of input".into()),
        }
    }
}

/// Parses `lhs = rhs` (or just `lhs`, meaning `lhs = 0`) into a linear ODE.
pub fn parse_equation(src: &str) -> Result<LinearODE, String> {
    let mut p = Parser {
        tokens: tokenize(src)?,
        pos: 0,
    };
    let lhs = p.expr()?;
    let form = match p.next() {
        None => lhs,
        Some(Token::Equals) => {
            let rhs = p.expr()?;
            if let Some(t) = p.next() {
                return Err(format!("unexpected {t:?} after right-hand side"));
            }
            lhs.add(rhs, -1)
        }
        Some(t) => return Err(format!("unexpected {t:?}")),
    };
    if !form.scalar.is_zero() {
        return Err("equation is not homogeneous in y".into());
    }
    let n = form
        .derivs
        .iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, _)| *k)
        .max()
        .ok_or("no y term")?;
    if n.is_zero() {
        return Err("equation has no derivative of y".into());
    }
    let coeffs = (0..=n)
        .map(|k| {
            form.derivs
                .get(&k)
                .map_or_else(PuiseuxPoly::zero, PuiseuxPoly::from_poly)
        })
        .collect();
    LinearODE::new(coeffs).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ode(c: &[&[i64]]) -> LinearODE {
        LinearODE::from_int_coeffs(c).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            parse_equation("y'' - x*y = 0").unwrap(),
            ode(&[&[0, -1], &[], &[1]])
        );
        assert_eq!(parse_equation("y''=y").unwrap(), ode(&[&[-1], &[], &[1]]));
        assert_eq!(parse_equation("y' - y").unwrap(), ode(&[&[-1], &[1]]));
        assert_eq!(
            parse_equation("(x^2+1)*y^(3) + 2y' = 3x y").unwrap(),
            ode(&[&[0, -3], &[2], &[], &[1, 0, 1]])
        );
        assert_eq!(
            parse_equation("2y'' - y/2 = 0").unwrap().coeffs()[0].to_string(),
            "-1/2*x^(0)"
        );
        assert_eq!(parse_equation("−y'' + y = 0").unwrap(), ode(&[&[1], &[], &[-1]]));
    }

    #[test]
    fn rejects_nonlinear_and_malformed() {
        for src in [
            "y*y' = 0",
            "y^2 + y' = 0",
            "y' = 1",
            "y = 0",
            "y' + (x = 0",
            "y' / x = 0",
            "y' ? y",
            "",
        ] {
            assert!(parse_equation(src).is_err(), "{src}");
        }
    }
}
