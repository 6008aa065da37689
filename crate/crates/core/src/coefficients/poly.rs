//! Monomials, the local monomial order, and polynomial text syntax.
//!
//! Text syntax: `1/2*x^2`, `x1*x2 - 3*y`, `a*c - b^2`, `x^2/2`. Terms are
//! products of rational constants and `name^power` factors; a `/n` suffix
//! divides the term by an integer.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_text, Scalar};

/// Exponent vector tagged with its weighted degree.
///
/// Ordering: ascending weight, then descending lexicographic exponents. The
/// first monomial of a term map is therefore its leading term for the local
/// (tangent cone) order used for normal forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    weight: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>, weights: &[u32]) -> Self {
        debug_assert_eq!(exps.len(), weights.len());
        let weight = exps.iter().zip(weights).map(|(e, w)| e * w).sum();
        Monomial { weight, exps }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            weight: 0,
            exps: vec![0; nvars],
        }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.weight == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            weight: self.weight + other.weight,
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight
            .cmp(&other.weight)
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors with weighted degree at most `bound`, in ascending order.
pub fn monomials_up_to(weights: &[u32], bound: u32) -> Vec<Monomial> {
    fn rec(weights: &[u32], idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == weights.len() {
            out.push(cur.clone());
            return;
        }
        let mut e = 0;
        while e * weights[idx] <= left {
            cur.push(e);
            rec(weights, idx + 1, left - e * weights[idx], cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut raw = Vec::new();
    rec(weights, 0, bound, &mut Vec::new(), &mut raw);
    let mut out: Vec<Monomial> = raw.into_iter().map(|e| Monomial::new(e, weights)).collect();
    out.sort();
    out
}

/// An untruncated polynomial as a list of (exponents, coefficient) terms.
pub type RawPolynomial<F> = Vec<(Vec<u32>, F)>;

/// Renders terms (already in display order) in the text syntax.
pub fn format_terms<'a, F: Scalar + 'a>(
    terms: impl IntoIterator<Item = (&'a [u32], &'a F)>,
    names: &[String],
) -> String {
    let mut out = String::new();
    for (exps, c) in terms {
        let mono: Vec<String> = exps
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| {
                if *e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        let mono = mono.join("*");
        let text = c.to_text();
        let (negative, magnitude) = match text.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, text.clone()),
        };
        let magnitude =
            if magnitude.contains(['+', '-']) || (magnitude.contains('i') && !mono.is_empty()) {
                format!("({magnitude})")
            } else {
                magnitude
            };
        let body = if mono.is_empty() {
            magnitude
        } else if magnitude == "1" {
            mono
        } else {
            format!("{magnitude}*{mono}")
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1
            }
            '-' => {
                out.push(Token::Minus);
                i += 1
            }
            '*' => {
                out.push(Token::Star);
                i += 1
            }
            '/' => {
                out.push(Token::Slash);
                i += 1
            }
            '^' => {
                out.push(Token::Caret);
                i += 1
            }
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i - start > 40 {
                    return Err(Error::Parse("numeral too long".into()));
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token::Num(
                    text.parse().map_err(|_| Error::Parse(text.clone()))?,
                ));
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character `{other}` in `{s}`"
                )))
            }
        }
    }
    Ok(out)
}

const MAX_EXPONENT: u32 = 64;

/// Parses a polynomial in the named variables with rational coefficients.
pub fn parse_polynomial(s: &str, names: &[String]) -> Result<RawPolynomial<BigRational>> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let n = names.len();
    let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
    let mut pos = 0;
    let err = |msg: &str| Error::Parse(format!("{msg} in `{s}`"));
    loop {
        let mut sign = BigRational::one();
        while let Some(t @ (Token::Plus | Token::Minus)) = tokens.get(pos) {
            if *t == Token::Minus {
                sign = -sign;
            }
            pos += 1;
        }
        let mut coeff = sign;
        let mut exps = vec![0u32; n];
        let mut expect_factor = true;
        loop {
            match tokens.get(pos) {
                Some(Token::Num(v)) if expect_factor => {
                    coeff *= BigRational::from_integer(v.clone());
                    pos += 1;
                }
                Some(Token::Ident(name)) if expect_factor => {
                    let idx = names
                        .iter()
                        .position(|x| x == name)
                        .ok_or_else(|| Error::UnknownIdentifier(name.clone()))?;
                    pos += 1;
                    let mut power = 1u32;
                    if tokens.get(pos) == Some(&Token::Caret) {
                        match tokens.get(pos + 1) {
                            Some(Token::Num(p)) => {
                                power = u32::try_from(p.clone())
                                    .ok()
                                    .filter(|&p| p <= MAX_EXPONENT)
                                    .ok_or_else(|| err("exponent out of range"))?;
                                pos += 2;
                            }
                            _ => return Err(err("expected exponent after `^`")),
                        }
                    }
                    exps[idx] += power;
                }
                _ if expect_factor => return Err(err("expected a factor")),
                Some(Token::Star) => {
                    pos += 1;
                    expect_factor = true;
                    continue;
                }
                Some(Token::Slash) => match tokens.get(pos + 1) {
                    Some(Token::Num(d)) if !d.is_zero() => {
                        coeff /= BigRational::from_integer(d.clone());
                        pos += 2;
                        expect_factor = false;
                        continue;
                    }
                    _ => return Err(err("expected nonzero integer after `/`")),
                },
                _ => break,
            }
            expect_factor = false;
        }
        if exps.iter().any(|&e| e > MAX_EXPONENT) {
            return Err(err("exponent out of range"));
        }
        let slot = acc.entry(exps).or_insert_with(BigRational::zero);
        *slot = slot.clone() + coeff;
        match tokens.get(pos) {
            None => break,
            Some(Token::Plus | Token::Minus) => continue,
            Some(_) => return Err(err("unexpected token")),
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

/// Text of a raw rational polynomial in ascending local order.
pub fn format_raw(poly: &RawPolynomial<BigRational>, names: &[String], weights: &[u32]) -> String {
    let mut terms: Vec<(Monomial, &BigRational)> = poly
        .iter()
        .map(|(e, c)| (Monomial::new(e.clone(), weights), c))
        .collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    format_terms(terms.iter().map(|(m, c)| (m.exps(), *c)), names)
}

pub fn rational_string(q: &BigRational) -> String {
    rational_text(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn order_is_local() {
        let w = [1, 1];
        let x = Monomial::new(vec![1, 0], &w);
        let y = Monomial::new(vec![0, 1], &w);
        let xy = Monomial::new(vec![1, 1], &w);
        let one = Monomial::one(2);
        assert!(one < x && x < y && y < xy);
    }

    #[test]
    fn monomial_count_matches_binomial() {
        // C(N + n, n) monomials of degree <= N in n variables
        assert_eq!(monomials_up_to(&[1, 1, 1], 4).len(), 35);
        assert_eq!(monomials_up_to(&[1, 2], 4).len(), 9);
    }

    #[test]
    fn parse_examples() {
        let n = names(&["x", "y"]);
        let p = parse_polynomial("x^2/2", &n).unwrap();
        assert_eq!(p, vec![(vec![2, 0], BigRational::new(1.into(), 2.into()))]);
        let p = parse_polynomial("1 - x*y + 3/4*y - y*x", &n).unwrap();
        assert_eq!(format_raw(&p, &n, &[1, 1]), "1 + 3/4*y - 2*x*y");
        assert!(parse_polynomial("x +", &n).is_err());
        assert!(parse_polynomial("z", &n).is_err());
        assert!(parse_polynomial("x/0", &n).is_err());
        assert!(parse_polynomial("x^999", &n).is_err());
        assert_eq!(parse_polynomial("x - x", &n).unwrap(), vec![]);
    }
}
