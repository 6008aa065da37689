//! Maurer-Cartan residuals, gauge flows and the order-by-order gauge solver.

use std::sync::Arc;

use super::{cohomology, scatter, Cohomology, LInfinityAlgebra};
use crate::coefficients::ring::{LocalRing, SeriesElement};
use crate::error::{Error, Result};
use crate::graded::Element;
use crate::linalg::Matrix;
use crate::scalar::{factorial, Scalar};

/// Checks that `alpha` is homogeneous of degree one with coefficients in `m`.
pub fn validate_mc<F: Scalar>(g: &LInfinityAlgebra<F>, alpha: &Element<F>) -> Result<()> {
    validate_in_max_ideal(g, alpha, 1)
}

fn validate_in_max_ideal<F: Scalar>(
    g: &LInfinityAlgebra<F>,
    x: &Element<F>,
    degree: i32,
) -> Result<()> {
    if !x.is_homogeneous_of(g.basis(), degree) {
        return Err(Error::InvalidStructure(format!(
            "expected an element of degree {degree}, got {}",
            x.to_text(g.basis())
        )));
    }
    if !x.constant_part().is_empty() {
        return Err(Error::ConstantTermPresent(x.to_text(g.basis())));
    }
    Ok(())
}

/// `sum_s 1/s! l^s(alpha, .., alpha)`, exact modulo the truncation.
pub fn mc_residual<F: Scalar>(g: &LInfinityAlgebra<F>, alpha: &Element<F>) -> Result<Element<F>> {
    validate_mc(g, alpha)?;
    let n = alpha.ring().truncation() as usize;
    let mut total = Element::zero(alpha.ring());
    for (&s, op) in g.brackets() {
        if s > n {
            break;
        }
        let args = vec![alpha; s];
        let term = op.evaluate(&args, g.basis())?;
        total = total.add(&term.scale_field(&factorial::<F>(s).inv().unwrap()));
    }
    Ok(total)
}

/// `gamma(t) = sum_k t^k gamma_k` with `gamma_k` of degree zero over `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugePath<F: Scalar> {
    pub components: Vec<Element<F>>,
}

impl<F: Scalar> GaugePath<F> {
    pub fn constant(gamma: Element<F>) -> Self {
        GaugePath {
            components: vec![gamma],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Element::is_zero)
    }

    pub fn at(&self, ring: &Arc<LocalRing<F>>, t: &F) -> Element<F> {
        let mut acc = Element::zero(ring);
        let mut power = F::one();
        for c in &self.components {
            acc = acc.add(&c.scale_field(&power));
            power = power * t.clone();
        }
        acc
    }
}

/// `v(gamma, alpha) = sum_i 1/i! l^{i+1}(gamma, alpha, .., alpha)`.
fn vector_field<F: Scalar>(
    g: &LInfinityAlgebra<F>,
    gamma: &Element<F>,
    alpha: &Element<F>,
) -> Result<Element<F>> {
    let n = alpha.ring().truncation() as usize;
    let mut total = Element::zero(alpha.ring());
    if gamma.is_zero() {
        return Ok(total);
    }
    for (&s, op) in g.brackets() {
        if s > n {
            break;
        }
        let i = s - 1;
        let mut args = vec![gamma];
        args.extend(std::iter::repeat_n(alpha, i));
        let term = op.evaluate(&args, g.basis())?;
        total = total.add(&term.scale_field(&factorial::<F>(i).inv().unwrap()));
    }
    Ok(total)
}

/// Time-one flow of `d alpha / dt = v(gamma(t), alpha)`.
///
/// Picard iteration on polynomials in `t`. Every term of weight `w` in an
/// iterate has `t`-degree at most `(deg gamma + 1) w`, so the vector field of
/// an iterate is a polynomial of known degree; it is sampled at integer times
/// and interpolated exactly.
pub fn gauge_flow<F: Scalar>(
    g: &LInfinityAlgebra<F>,
    path: &GaugePath<F>,
    alpha: &Element<F>,
) -> Result<Element<F>> {
    validate_mc(g, alpha)?;
    let ring = alpha.ring().clone();
    for c in &path.components {
        validate_in_max_ideal(g, &c.over(&ring), 0)?;
    }
    if path.is_zero() {
        return Ok(alpha.clone());
    }
    let n = ring.truncation() as usize;
    let t_max = path.components.len() * n;
    let points: Vec<F> = (0..t_max).map(|c| F::from_i64(c as i64)).collect();
    let vandermonde = Matrix::from_rows(
        points
            .iter()
            .map(|p| {
                let mut row = Vec::with_capacity(t_max);
                let mut x = F::one();
                for _ in 0..t_max {
                    row.push(x.clone());
                    x = x * p.clone();
                }
                row
            })
            .collect(),
    );
    let inverse = vandermonde.inverse().expect("distinct sample points");
    let gammas: Vec<Element<F>> = points.iter().map(|p| path.at(&ring, p)).collect();

    let mut coeffs: Vec<Element<F>> = vec![alpha.clone()];
    for _ in 0..=n {
        let samples = points
            .iter()
            .zip(&gammas)
            .map(|(p, gam)| {
                let a = evaluate_poly(&ring, &coeffs, p);
                vector_field(g, gam, &a)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut next = vec![alpha.clone()];
        for b in 0..t_max {
            let mut vb = Element::zero(&ring);
            for (c, s) in samples.iter().enumerate() {
                let w = &inverse[(b, c)];
                if !w.is_zero() {
                    vb = vb.add(&s.scale_field(w));
                }
            }
            next.push(vb.scale_field(&F::from_i64(b as i64 + 1).inv().unwrap()));
        }
        while next.len() > 1 && next.last().is_some_and(Element::is_zero) {
            next.pop();
        }
        if next == coeffs {
            break;
        }
        coeffs = next;
    }
    Ok(evaluate_poly(&ring, &coeffs, &F::one()))
}

fn evaluate_poly<F: Scalar>(ring: &Arc<LocalRing<F>>, coeffs: &[Element<F>], t: &F) -> Element<F> {
    let mut acc = Element::zero(ring);
    let mut power = F::one();
    for c in coeffs {
        acc = acc.add(&c.scale_field(&power));
        power = power * t.clone();
    }
    acc
}

/// The lowest-order class obstructing a gauge solve.
#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction<F: Scalar> {
    /// Weight at which the solve failed.
    pub order: u32,
    /// Monomial of that weight whose coefficient could not be matched.
    pub monomial: String,
    /// Coordinates of the class in the harmonic basis of `H^1`.
    pub class: Vec<F>,
    /// True if the discrepancy was not even a cocycle (non-MC input).
    pub not_closed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum GaugeOutcome<F: Scalar> {
    Equivalent(Vec<GaugePath<F>>),
    NotEquivalent(Obstruction<F>),
}

/// Splits the weight-`k` part of `d` (degree one) into `l1(delta) + harmonic
/// + rest`, monomial by monomial. Returns `delta` (degree zero), the harmonic
/// coordinates per monomial, and the first monomial with a nonzero
/// non-closed part.
pub(crate) struct OrderSplit<F: Scalar> {
    pub exact_primitive: Element<F>,
    pub harmonic: Vec<(crate::coefficients::Monomial, Vec<F>)>,
    pub not_closed: Option<crate::coefficients::Monomial>,
}

pub(crate) fn split_order<F: Scalar>(
    g: &LInfinityAlgebra<F>,
    h: &Cohomology<F>,
    d: &Element<F>,
    k: u32,
) -> OrderSplit<F> {
    let ring = d.ring().clone();
    let dk = d.weight_part(k);
    let mut out = OrderSplit {
        exact_primitive: Element::zero(&ring),
        harmonic: Vec::new(),
        not_closed: None,
    };
    if dk.is_zero() {
        return out;
    }
    let Some(deg1) = h.degrees.get(&1) else {
        return out;
    };
    let deg0 = h.degrees.get(&0);
    let total = g.basis().len();
    let mut monomials: Vec<_> = dk
        .terms()
        .values()
        .flat_map(|c| c.terms().keys().cloned())
        .collect();
    monomials.sort();
    monomials.dedup();
    for m in monomials {
        let full = dk.coefficient_vector(&m, total);
        let v: Vec<F> = deg1.indices.iter().map(|&i| full[i].clone()).collect();
        let (_, harm, rest) = deg1.decompose(&v);
        if rest.iter().any(|x| !x.is_zero()) && out.not_closed.is_none() {
            out.not_closed = Some(m.clone());
        }
        if harm.iter().any(|x| !x.is_zero()) {
            out.harmonic.push((m.clone(), harm));
        }
        if let Some(d0) = deg0 {
            let delta = d0.homotopy.apply(&v);
            if delta.iter().any(|x| !x.is_zero()) {
                let coeff =
                    SeriesElement::from_terms(&ring, [(m.clone(), F::one())].into_iter().collect());
                let e = scatter(&LocalRing::ground(), &d0.indices, &delta);
                out.exact_primitive = out.exact_primitive.add(&e.scale(&coeff));
            }
        }
    }
    out
}

/// Searches a constant gauge `gamma` with `flow(gamma, alpha) = beta`, one
/// weight at a time. On failure returns the class of the discrepancy at the
/// lowest failing order.
pub fn gauge_equivalent<F: Scalar>(
    g: &LInfinityAlgebra<F>,
    alpha: &Element<F>,
    beta: &Element<F>,
) -> Result<GaugeOutcome<F>> {
    validate_mc(g, alpha)?;
    validate_mc(g, beta)?;
    alpha.try_add(beta)?;
    if alpha == beta {
        return Ok(GaugeOutcome::Equivalent(Vec::new()));
    }
    let h = cohomology(g)?;
    let ring = alpha.ring().clone();
    let mut gamma = Element::zero(&ring);
    for k in 1..=ring.truncation() {
        let current = gauge_flow(g, &GaugePath::constant(gamma.clone()), alpha)?;
        let d = beta.sub(&current);
        if d.is_zero() {
            break;
        }
        let split = split_order(g, &h, &d, k);
        if let Some(m) = split.not_closed.clone() {
            let full = d.weight_part(k).coefficient_vector(&m, g.basis().len());
            let deg1 = &h.degrees[&1];
            let v: Vec<F> = deg1.indices.iter().map(|&i| full[i].clone()).collect();
            return Ok(GaugeOutcome::NotEquivalent(Obstruction {
                order: k,
                monomial: monomial_text(&ring, &m),
                class: deg1.decompose(&v).1,
                not_closed: true,
            }));
        }
        if let Some((m, class)) = split.harmonic.first() {
            return Ok(GaugeOutcome::NotEquivalent(Obstruction {
                order: k,
                monomial: monomial_text(&ring, m),
                class: class.clone(),
                not_closed: false,
            }));
        }
        gamma = gamma.add(&split.exact_primitive);
    }
    let path = GaugePath::constant(gamma);
    let end = gauge_flow(g, &path, alpha)?;
    if &end != beta {
        return Err(Error::InvalidStructure(
            "gauge solve did not converge to the target".into(),
        ));
    }
    Ok(GaugeOutcome::Equivalent(vec![path]))
}

pub(crate) fn monomial_text<F: Scalar>(
    ring: &Arc<LocalRing<F>>,
    m: &crate::coefficients::Monomial,
) -> String {
    SeriesElement::from_terms(ring, [(m.clone(), F::one())].into_iter().collect()).to_text()
}
