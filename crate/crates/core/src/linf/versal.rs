//! Versal presentations, Kodaira-Spencer maps and classifying maps.

use std::sync::Arc;

use super::gauge::{monomial_text, split_order};
use super::{
    cohomology, gauge_flow, mc_residual, pushforward_mc, GaugePath, LInfinityAlgebra, MinimalModel,
};
use crate::coefficients::ring::{LocalRing, RingMap, SeriesElement, Variable};
use crate::coefficients::Monomial;
use crate::error::{Error, Result};
use crate::graded::Element;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `R_v = k[[x]] / (P_1, .., P_b)` with the tautological element
/// `alpha_v = sum x_i e_i`.
#[derive(Clone, Debug)]
pub struct VersalPresentation<F: Scalar> {
    pub algebra: LInfinityAlgebra<F>,
    pub variables: Vec<String>,
    /// Basis indices of the degree-one and degree-two vectors.
    pub h1: Vec<usize>,
    pub h2: Vec<usize>,
    /// Nonzero obstruction polynomials in `k[[x]]`, ordered by leading monomial.
    pub obstructions: Vec<SeriesElement<F>>,
    /// Index into `h2` of each obstruction polynomial.
    pub obstruction_targets: Vec<usize>,
    pub ring: Arc<LocalRing<F>>,
    pub tautological: Element<F>,
}

pub fn versal_presentation<F: Scalar>(
    h: &LInfinityAlgebra<F>,
    truncation: u32,
) -> Result<VersalPresentation<F>> {
    if !h.is_minimal() {
        return Err(Error::NotMinimal);
    }
    let h1 = h.basis().in_degree(1);
    let h2 = h.basis().in_degree(2);
    let variables: Vec<String> = if h1.len() == 1 {
        vec!["x".to_string()]
    } else {
        (1..=h1.len()).map(|i| format!("x{i}")).collect()
    };
    let vars: Vec<Variable> = variables
        .iter()
        .map(|n| Variable {
            name: n.clone(),
            weight: 1,
        })
        .collect();
    let free = LocalRing::new(vars.clone(), Vec::new(), truncation)?;
    let alpha = tautological(&free, &h1);
    let residual = mc_residual(h, &alpha)?;
    let mut found: Vec<(usize, SeriesElement<F>)> = h2
        .iter()
        .enumerate()
        .map(|(j, &b)| (j, residual.coeff(b)))
        .filter(|(_, p)| !p.is_zero())
        .collect();
    found.sort_by(|a, b| leading(&a.1).cmp(&leading(&b.1)).then(a.0.cmp(&b.0)));
    let raw = found
        .iter()
        .map(|(_, p)| {
            p.terms()
                .iter()
                .map(|(m, c)| (m.exps().to_vec(), c.clone()))
                .collect()
        })
        .collect();
    let ring = LocalRing::new(vars, raw, truncation)?;
    let alpha_v = tautological(&ring, &h1);
    let check = mc_residual(h, &alpha_v)?;
    if !check.is_zero() {
        return Err(Error::InvalidStructure(format!(
            "tautological element is not Maurer-Cartan over the versal ring: {}",
            check.to_text(h.basis())
        )));
    }
    Ok(VersalPresentation {
        algebra: h.clone(),
        variables,
        h1,
        h2,
        obstruction_targets: found.iter().map(|(j, _)| *j).collect(),
        obstructions: found.into_iter().map(|(_, p)| p).collect(),
        ring,
        tautological: alpha_v,
    })
}

fn leading<F: Scalar>(p: &SeriesElement<F>) -> Option<Monomial> {
    p.terms().keys().next().cloned()
}

fn tautological<F: Scalar>(ring: &Arc<LocalRing<F>>, h1: &[usize]) -> Element<F> {
    Element::from_terms(
        ring,
        h1.iter()
            .enumerate()
            .map(|(i, &b)| (b, SeriesElement::variable(ring, i))),
    )
}

/// Matrix of the Kodaira-Spencer map: one column per cotangent variable of
/// the coefficient ring, rows in the harmonic basis of `H^1`.
#[derive(Clone, Debug, PartialEq)]
pub struct KsMap<F: Scalar> {
    pub columns: Vec<String>,
    pub matrix: Matrix<F>,
}

impl<F: Scalar> KsMap<F> {
    pub fn rank(&self) -> usize {
        if self.matrix.rows() == 0 || self.matrix.cols() == 0 {
            0
        } else {
            self.matrix.rank()
        }
    }
}

pub fn kodaira_spencer<F: Scalar>(g: &LInfinityAlgebra<F>, alpha: &Element<F>) -> Result<KsMap<F>> {
    super::validate_mc(g, alpha)?;
    let coh = cohomology(g)?;
    let ring = alpha.ring();
    let deg1 = coh.degrees.get(&1);
    let rows = coh.dim(1);
    let d = g.differential_matrix(1);
    let mut columns = Vec::new();
    let mut cols = Vec::new();
    for &v in ring.cotangent_variables() {
        let mut exps = vec![0; ring.nvars()];
        exps[v] = 1;
        let m = ring.monomial_of(exps);
        let full = alpha.coefficient_vector(&m, g.basis().len());
        columns.push(ring.names()[v].clone());
        let Some(data) = deg1 else {
            cols.push(Vec::new());
            continue;
        };
        let x: Vec<F> = data.indices.iter().map(|&i| full[i].clone()).collect();
        if d.rows() > 0 && d.apply(&x).iter().any(|c| !c.is_zero()) {
            return Err(Error::OrderOnePartNotClosed(ring.names()[v].clone()));
        }
        cols.push(data.decompose(&x).1);
    }
    Ok(KsMap {
        columns,
        matrix: Matrix::from_columns(rows, &cols),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Versal,
    Complete,
    /// The rank criterion gives no conclusion.
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Versal => "versal",
            VerdictKind::Complete => "complete",
            VerdictKind::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<F: Scalar> {
    pub kind: VerdictKind,
    pub rank: usize,
    pub h1_dim: usize,
    pub ks: KsMap<F>,
}

pub fn versality_verdict<F: Scalar>(
    g: &LInfinityAlgebra<F>,
    beta: &Element<F>,
) -> Result<Verdict<F>> {
    if beta.ring().has_relations() {
        return Err(Error::RingHasRelations);
    }
    let ks = kodaira_spencer(g, beta)?;
    let rank = ks.rank();
    let h1_dim = ks.matrix.rows();
    let kind = if rank == h1_dim && rank == ks.matrix.cols() {
        VerdictKind::Versal
    } else if rank == h1_dim {
        VerdictKind::Complete
    } else {
        VerdictKind::Inconclusive
    };
    Ok(Verdict {
        kind,
        rank,
        h1_dim,
        ks,
    })
}

/// A classifying map `psi: R_v -> R` with the gauge certificate.
#[derive(Clone, Debug)]
pub struct Classification<F: Scalar> {
    pub map: RingMap<F>,
    /// Paths carrying `f_*(psi alpha_v)` to `beta`; empty when they agree.
    pub paths: Vec<GaugePath<F>>,
}

/// Solves for `psi` and a constant gauge `gamma` with
/// `flow(gamma, f_*(psi alpha_v)) = beta`, one weight at a time. The
/// harmonic part of each discrepancy feeds `psi`, the exact part feeds `gamma`.
pub fn classify_mc<F: Scalar>(
    g: &LInfinityAlgebra<F>,
    model: &MinimalModel<F>,
    vp: &VersalPresentation<F>,
    beta: &Element<F>,
) -> Result<Classification<F>> {
    if model.algebra.basis() != vp.algebra.basis() {
        return Err(Error::InvalidStructure(
            "versal presentation does not match the minimal model".into(),
        ));
    }
    let residual = mc_residual(g, beta)?;
    if !residual.is_zero() {
        return Err(Error::ObstructionMismatch(format!(
            "input is not Maurer-Cartan: {}",
            residual.to_text(g.basis())
        )));
    }
    let ring = beta.ring().clone();
    let coh = &model.cohomology;
    let hbasis = model.algebra.basis();
    let mut coords = vec![SeriesElement::zero(&ring); vp.h1.len()];
    let mut gamma = Element::zero(&ring);
    let image = |coords: &[SeriesElement<F>]| -> Result<Element<F>> {
        let a = Element::from_terms(
            &ring,
            vp.h1.iter().zip(coords).map(|(&b, c)| (b, c.clone())),
        );
        pushforward_mc(&model.morphism, hbasis, &a)
    };
    for k in 1..=ring.truncation() {
        let current = gauge_flow(g, &GaugePath::constant(gamma.clone()), &image(&coords)?)?;
        let d = beta.sub(&current);
        if d.is_zero() {
            break;
        }
        let split = split_order(g, coh, &d, k);
        if let Some(m) = split.not_closed {
            return Err(Error::ObstructionMismatch(format!(
                "discrepancy at order {k}, monomial {} is not closed",
                monomial_text(&ring, &m)
            )));
        }
        for (m, class) in &split.harmonic {
            for (c, x) in coords.iter_mut().zip(class) {
                if !x.is_zero() {
                    *c = c.add(&SeriesElement::from_terms(
                        &ring,
                        [(m.clone(), x.clone())].into_iter().collect(),
                    ));
                }
            }
        }
        gamma = gamma.add(&split.exact_primitive);
    }
    let path = GaugePath::constant(gamma);
    let end = gauge_flow(g, &path, &image(&coords)?)?;
    if &end != beta {
        let diff = beta.sub(&end);
        return Err(Error::ObstructionMismatch(format!(
            "classification residual {}",
            diff.to_text(g.basis())
        )));
    }
    let map = RingMap::new(&vp.ring, &ring, coords)?;
    let paths = if path.is_zero() {
        Vec::new()
    } else {
        vec![path]
    };
    Ok(Classification { map, paths })
}
