//! Truncated Novikov series `sum c_e q^e` with rational exponents, and the
//! specializations of a cone completion at a point of the Novikov ring.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cone::ConeMonoid;
use super::ring::SeriesElement;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{rational_text, Scalar};

type Q = BigRational;
pub type Gaussian = Complex<BigRational>;

/// Element of the Novikov field truncated at `q^cutoff`.
#[derive(Clone, PartialEq, Eq)]
pub struct NovikovElement<F: Scalar> {
    terms: BTreeMap<Q, F>,
    cutoff: Q,
    nonnegative: bool,
}

impl<F: Scalar> fmt::Debug for NovikovElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (mod q^{})",
            self.to_text(),
            rational_text(&self.cutoff)
        )
    }
}

impl<F: Scalar> NovikovElement<F> {
    pub fn new(
        terms: impl IntoIterator<Item = (Q, F)>,
        cutoff: Q,
        nonnegative: bool,
    ) -> Result<Self> {
        let mut out = Self::zero(cutoff, nonnegative);
        for (e, c) in terms {
            if nonnegative && e.is_negative() {
                return Err(Error::InvalidStructure(format!(
                    "negative exponent {} in an element of the nonnegative ring",
                    rational_text(&e)
                )));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn zero(cutoff: Q, nonnegative: bool) -> Self {
        NovikovElement {
            terms: BTreeMap::new(),
            cutoff,
            nonnegative,
        }
    }

    pub fn monomial(c: F, exponent: Q, cutoff: Q) -> Self {
        let nonnegative = !exponent.is_negative();
        let mut out = Self::zero(cutoff, nonnegative);
        out.add_term(exponent, c);
        out
    }

    fn add_term(&mut self, e: Q, c: F) {
        if e >= self.cutoff || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(F::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Q, F> {
        &self.terms
    }

    pub fn cutoff(&self) -> &Q {
        &self.cutoff
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent present; `None` stands for `+inf`.
    pub fn valuation(&self) -> Option<Q> {
        self.terms.keys().next().cloned()
    }

    pub fn coefficient(&self, e: &Q) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut out = Self::zero(cutoff, self.nonnegative && other.nonnegative);
        for (e, c) in self.terms.iter().chain(&other.terms) {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        NovikovElement {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
            cutoff: self.cutoff.clone(),
            nonnegative: self.nonnegative,
        }
    }

    /// Product. The cutoff of a product is the smaller of `cutoff(x) + val(y)`
    /// and `cutoff(y) + val(x)`, the range where both factors are known.
    pub fn mul(&self, other: &Self) -> Self {
        let cutoff = match (self.valuation(), other.valuation()) {
            (Some(a), Some(b)) => (self.cutoff.clone() + b).min(other.cutoff.clone() + a),
            _ => self.cutoff.clone().min(other.cutoff.clone()),
        };
        let mut out = Self::zero(cutoff, self.nonnegative && other.nonnegative);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.clone() + eb.clone(), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Truncates at a lower cutoff.
    pub fn truncate(&self, cutoff: &Q) -> Self {
        let cutoff = cutoff.clone().min(self.cutoff.clone());
        NovikovElement {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e < cutoff)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            cutoff,
            nonnegative: self.nonnegative,
        }
    }

    /// Text form such as `q^2 + 2*q^(5/2) - i*q^3`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            let power = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "q".to_string()
            } else if e.is_integer() && e.is_positive() {
                format!("q^{}", e.numer())
            } else {
                format!("q^({})", rational_text(e))
            };
            let text = c.to_text();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
                _ => (false, text),
            };
            let magnitude = if magnitude.contains(['+', '-']) {
                format!("({magnitude})")
            } else {
                magnitude
            };
            let body = match (power.is_empty(), magnitude.as_str()) {
                (true, _) => magnitude.clone(),
                (false, "1") => power,
                _ => format!("{magnitude}*{power}"),
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
            "0".into()
        } else {
            out
        }
    }
}

/// A point of the Novikov ring: area and B-field functionals on the ambient
/// lattice of a cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPoint {
    pub omega: Vec<Q>,
    pub b_field: Vec<Q>,
}

impl LambdaPoint {
    pub fn new(omega: Vec<Q>, b_field: Vec<Q>) -> Result<Self> {
        if omega.len() != b_field.len() {
            return Err(Error::LengthMismatch(
                "omega and B must have the same rank".into(),
            ));
        }
        Ok(LambdaPoint { omega, b_field })
    }

    /// Finds ambient functionals taking prescribed values on the generators.
    /// Fails if the values are not additive along relations among generators.
    pub fn from_generator_values(c: &ConeMonoid, omega: &[Q], b_field: &[Q]) -> Result<Self> {
        let k = c.generators().len();
        if omega.len() != k || b_field.len() != k {
            return Err(Error::LengthMismatch(format!(
                "expected {k} generator values"
            )));
        }
        let g = Matrix::from_rows(
            c.generators()
                .iter()
                .map(|g| g.iter().map(|&x| Q::from_i64(x)).collect())
                .collect(),
        );
        let solve = |values: &[Q], what: &str| {
            g.solve(values).ok_or_else(|| {
                Error::InvalidStructure(format!("{what} values are not additive on the monoid"))
            })
        };
        Ok(LambdaPoint {
            omega: solve(omega, "omega")?,
            b_field: solve(b_field, "B-field")?,
        })
    }

    pub fn omega_of(&self, u: &[i64]) -> Q {
        pair(&self.omega, u)
    }

    pub fn b_of(&self, u: &[i64]) -> Q {
        pair(&self.b_field, u)
    }
}

fn pair(f: &[Q], u: &[i64]) -> Q {
    f.iter().zip(u).fold(Q::zero(), |acc, (a, &b)| {
        acc + a.clone() * Q::from_integer(BigInt::from(b))
    })
}

/// `e^{2 pi i b}` for `b` a multiple of `1/4`.
fn phase(b: &Q) -> Option<Gaussian> {
    let four = b.clone() * Q::from_i64(4);
    if !four.is_integer() {
        return None;
    }
    let r: i64 = (four.to_integer() % BigInt::from(4)).try_into().ok()?;
    let (re, im) = match r.rem_euclid(4) {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    };
    Some(Complex::new(Q::from_i64(re), Q::from_i64(im)))
}

/// Checks positivity and phases on the generators; returns the smallest area.
fn validate_point(c: &ConeMonoid, p: &LambdaPoint) -> Result<Q> {
    if p.omega.len() != c.rank() {
        return Err(Error::LengthMismatch(format!(
            "point has rank {}, cone has rank {}",
            p.omega.len(),
            c.rank()
        )));
    }
    let mut min: Option<Q> = None;
    for (g, name) in c.generators().iter().zip(c.names()) {
        let w = p.omega_of(g);
        if !w.is_positive() {
            return Err(Error::NonPositiveArea(name.clone()));
        }
        let b = p.b_of(g);
        if phase(&b).is_none() {
            return Err(Error::IrrationalPhase {
                generator: name.clone(),
                value: rational_text(&b),
            });
        }
        min = Some(match min {
            Some(m) if m <= w => m,
            _ => w,
        });
    }
    Ok(min.expect("cone has generators"))
}

/// `r^u -> e^{2 pi i B(u)} q^{omega(u)}`.
///
/// The effective cutoff is clamped to `(N + 1) * min omega(g)`: every monomial
/// discarded by the ring truncation lands at or above it, which makes the map
/// a ring homomorphism on truncated elements.
pub fn lambda_point_specialize<F: Scalar>(
    elem: &SeriesElement<F>,
    cone: &ConeMonoid,
    p: &LambdaPoint,
    cutoff: &Q,
) -> Result<NovikovElement<Gaussian>> {
    let min = validate_point(cone, p)?;
    if elem.ring().nvars() != cone.generators().len() {
        return Err(Error::RingMismatch);
    }
    let bound = min * Q::from_i64(i64::from(elem.ring().truncation()) + 1);
    let effective = cutoff.clone().min(bound);
    let mut out = NovikovElement::zero(effective, true);
    for (m, c) in elem.terms() {
        let u = cone.element_of(m.exps());
        let ph = phase(&p.b_of(&u)).expect("phases checked on generators");
        out.add_term(p.omega_of(&u), c.to_gaussian() * ph);
    }
    Ok(out)
}

/// Reduction modulo the maximal ideal: the constant term.
pub fn large_volume_specialize<F: Scalar>(elem: &SeriesElement<F>) -> F {
    elem.constant_term()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::cone::cone_completion;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn valuations() {
        let x = NovikovElement::<Q>::new([(q(3, 1), q(1, 1)), (q(5, 1), q(-2, 1))], q(10, 1), true)
            .unwrap();
        assert_eq!(x.valuation(), Some(q(3, 1)));
        assert_eq!(NovikovElement::<Q>::zero(q(1, 1), true).valuation(), None);
        let a = NovikovElement::<Q>::new([(q(1, 1), q(1, 1)), (q(2, 1), q(1, 1))], q(10, 1), true)
            .unwrap();
        let b = NovikovElement::monomial(q(1, 1), q(1, 2), q(10, 1));
        assert_eq!(a.mul(&b).valuation(), Some(q(3, 2)));
    }

    #[test]
    fn phases() {
        assert_eq!(phase(&q(1, 2)).unwrap().to_text(), "-1");
        assert_eq!(phase(&q(-1, 4)).unwrap().to_text(), "-i");
        assert_eq!(phase(&q(7, 4)).unwrap().to_text(), "-i");
        assert!(phase(&q(1, 3)).is_none());
    }

    #[test]
    fn specialization_examples() {
        let c = ConeMonoid::with_names(
            2,
            vec![vec![1, 0], vec![0, 1]],
            Some(vec!["u".into(), "v".into()]),
            None,
        )
        .unwrap();
        let r = cone_completion::<Q>(&c, 8).unwrap();
        let p = LambdaPoint::from_generator_values(&c, &[q(1, 1), q(3, 2)], &[q(0, 1), q(0, 1)])
            .unwrap();
        let x = SeriesElement::parse(&r, "u + v").unwrap().pow(2);
        let s = lambda_point_specialize(&x, &c, &p, &q(10, 1)).unwrap();
        assert_eq!(s.to_text(), "q^2 + 2*q^(5/2) + q^3");
        let p = LambdaPoint::from_generator_values(&c, &[q(1, 1), q(1, 1)], &[q(1, 2), q(0, 1)])
            .unwrap();
        let s = lambda_point_specialize(&SeriesElement::parse(&r, "u").unwrap(), &c, &p, &q(10, 1))
            .unwrap();
        assert_eq!(s.to_text(), "-q");
        let bad = LambdaPoint::from_generator_values(&c, &[q(0, 1), q(1, 1)], &[q(0, 1), q(0, 1)])
            .unwrap();
        assert_eq!(
            lambda_point_specialize(&x, &c, &bad, &q(10, 1)).unwrap_err(),
            Error::NonPositiveArea("u".into())
        );
        let bad = LambdaPoint::from_generator_values(&c, &[q(1, 1), q(1, 1)], &[q(1, 3), q(0, 1)])
            .unwrap();
        assert!(matches!(
            lambda_point_specialize(&x, &c, &bad, &q(10, 1)),
            Err(Error::IrrationalPhase { .. })
        ));
    }

    #[test]
    fn large_volume_is_constant_term() {
        let c = ConeMonoid::new(1, vec![vec![1]]).unwrap();
        let r = cone_completion::<Q>(&c, 5).unwrap();
        assert_eq!(
            large_volume_specialize(&SeriesElement::parse(&r, "5 + 2*r").unwrap()),
            q(5, 1)
        );
        assert_eq!(
            large_volume_specialize(&SeriesElement::parse(&r, "1 + r").unwrap().pow(3)),
            q(1, 1)
        );
    }

    #[test]
    fn inconsistent_generator_values_rejected() {
        let c = ConeMonoid::new(2, vec![vec![1, 0], vec![1, 1], vec![1, 2]]).unwrap();
        let ok =
            LambdaPoint::from_generator_values(&c, &[q(1, 1), q(2, 1), q(3, 1)], &vec![q(0, 1); 3]);
        assert!(ok.is_ok());
        let bad =
            LambdaPoint::from_generator_values(&c, &[q(1, 1), q(1, 1), q(3, 1)], &vec![q(0, 1); 3]);
        assert!(bad.is_err());
    }
}
