//! L-infinity algebras in the shifted convention: every bracket `l^s` is
//! graded symmetric in the reduced degrees `|v| + 1`, and the relations
//! carry only the Koszul sign.

mod gauge;
mod transfer;
mod versal;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use gauge::{
    gauge_equivalent, gauge_flow, mc_residual, validate_mc, GaugeOutcome, GaugePath, Obstruction,
};
pub use transfer::{
    check_morphism, minimal_model, pushforward_mc, LInfinityMorphism, MinimalModel,
};
pub use versal::{
    classify_mc, kodaira_spencer, versal_presentation, versality_verdict, Classification, KsMap,
    Verdict, VerdictKind, VersalPresentation,
};

use crate::coefficients::ring::LocalRing;
use crate::error::{Error, Result};
use crate::graded::{
    check_symmetry, koszul_sign_unchecked, unshuffles, Element, GradedBasis, MultilinearOperation,
    Symmetry, MAX_ARITY,
};
use crate::linalg::{Matrix, Splitting};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct LInfinityAlgebra<F: Scalar> {
    basis: GradedBasis,
    brackets: BTreeMap<usize, MultilinearOperation<F>>,
}

/// One failed check: where, and what was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub location: String,
    pub detail: String,
}

/// Outcome of a relation check up to an arity bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub arity_bound: usize,
    /// Arities at which the relation could not be evaluated exactly.
    pub unchecked: Vec<usize>,
    pub findings: Vec<Finding>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }
}

impl<F: Scalar> LInfinityAlgebra<F> {
    /// Brackets are keyed by arity; they must be graded symmetric, of degree
    /// `2 - s`, with ground-field entries.
    pub fn new(
        basis: GradedBasis,
        brackets: BTreeMap<usize, MultilinearOperation<F>>,
    ) -> Result<Self> {
        for (&s, op) in &brackets {
            if s == 0 || s > MAX_ARITY || op.arity != s {
                return Err(Error::InvalidStructure(format!(
                    "bracket of arity {s} (cap {MAX_ARITY})"
                )));
            }
            if op.degree != 2 - s as i32 {
                return Err(Error::InvalidStructure(format!(
                    "l{s} must have degree {}",
                    2 - s as i32
                )));
            }
            if op.symmetry != Symmetry::GradedSymmetricReduced {
                return Err(Error::InvalidStructure(format!(
                    "l{s} must be graded symmetric"
                )));
            }
            if let Some(v) = op.degree_violations(&basis, &basis).first() {
                return Err(Error::InvalidStructure(format!(
                    "l{s} at {:?}: {}",
                    v.tuple, v.detail
                )));
            }
            if op.entries().values().any(|e| e.ring().nvars() != 0) {
                return Err(Error::InvalidStructure(format!(
                    "l{s} must have ground-field coefficients"
                )));
            }
        }
        let brackets = brackets
            .into_iter()
            .filter(|(_, op)| !op.is_zero())
            .collect();
        Ok(LInfinityAlgebra { basis, brackets })
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn bracket(&self, s: usize) -> Option<&MultilinearOperation<F>> {
        self.brackets.get(&s)
    }

    pub fn brackets(&self) -> &BTreeMap<usize, MultilinearOperation<F>> {
        &self.brackets
    }

    /// Largest arity with a nonzero bracket (0 if abelian).
    pub fn max_arity(&self) -> usize {
        self.brackets.keys().copied().max().unwrap_or(0)
    }

    pub fn is_minimal(&self) -> bool {
        !self.brackets.contains_key(&1)
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// `l^s(args)`; zero when no bracket of that arity is stored.
    pub fn apply(&self, s: usize, args: &[&Element<F>]) -> Result<Element<F>> {
        match self.brackets.get(&s) {
            Some(op) => op.evaluate(args, &self.basis),
            None => {
                let ring = args
                    .iter()
                    .map(|a| a.ring().clone())
                    .find(|r| r.nvars() > 0)
                    .unwrap_or_else(LocalRing::ground);
                Ok(Element::zero(&ring))
            }
        }
    }

    /// Matrix of `l^1` from degree `k` to degree `k + 1`, in the ascending
    /// basis order of each degree.
    pub fn differential_matrix(&self, k: i32) -> Matrix<F> {
        let src = self.basis.in_degree(k);
        let dst = self.basis.in_degree(k + 1);
        let mut m = Matrix::zeros(dst.len(), src.len());
        if let Some(op) = self.brackets.get(&1) {
            let ground = LocalRing::ground();
            for (j, &i) in src.iter().enumerate() {
                let v = op.read(&[i], &self.basis, &ground);
                for (r, &d) in dst.iter().enumerate() {
                    m[(r, j)] = v.coeff(d).constant_term();
                }
            }
        }
        m
    }
}

/// Nondecreasing index tuples of length `s` over `0..n`.
pub(crate) fn multisets(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, s, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn tuple_names(basis: &GradedBasis, t: &[usize]) -> String {
    let names: Vec<&str> = t.iter().map(|&i| basis.name(i)).collect();
    format!("({})", names.join(", "))
}

/// Left side of the arity-`s` relation on basis vectors `t`:
/// `sum_j sum_sigma eps(sigma) l^{s-j+1}(l^j(v_sigma..), v_sigma..)`.
fn relation_residual<F: Scalar>(g: &LInfinityAlgebra<F>, t: &[usize]) -> Result<Element<F>> {
    let ground = LocalRing::ground();
    let s = t.len();
    let reduced: Vec<i32> = t.iter().map(|&i| g.basis.reduced_degree(i)).collect();
    let mut total = Element::zero(&ground);
    for j in 1..=s {
        let (Some(inner), Some(outer)) = (g.bracket(j), g.bracket(s - j + 1)) else {
            continue;
        };
        for sigma in unshuffles(j, s) {
            let sign = koszul_sign_unchecked(&sigma, &reduced);
            let first: Vec<usize> = sigma[..j].iter().map(|&k| t[k]).collect();
            let x = inner.read(&first, &g.basis, &ground);
            if x.is_zero() {
                continue;
            }
            let rest: Vec<Element<F>> = sigma[j..]
                .iter()
                .map(|&k| Element::basis(&ground, t[k]))
                .collect();
            let mut args: Vec<&Element<F>> = vec![&x];
            args.extend(rest.iter());
            let y = outer.evaluate(&args, &g.basis)?;
            total = if sign < 0 {
                total.sub(&y)
            } else {
                total.add(&y)
            };
        }
    }
    Ok(total)
}

/// Checks the L-infinity relations on every multiset of basis vectors of size
/// at most `arity_bound`, plus the symmetry of every stored bracket.
pub fn check_linf_relations<F: Scalar>(
    g: &LInfinityAlgebra<F>,
    arity_bound: usize,
) -> Result<RelationReport> {
    let mut findings = Vec::new();
    for (s, op) in &g.brackets {
        for v in check_symmetry(op, &g.basis) {
            findings.push(Finding {
                location: format!("l{s}{}", tuple_names(&g.basis, &v.tuple)),
                detail: v.detail,
            });
        }
    }
    let unchecked = if arity_bound > MAX_ARITY {
        (MAX_ARITY + 1..=arity_bound).collect()
    } else {
        Vec::new()
    };
    for s in 1..=arity_bound.min(MAX_ARITY) {
        for t in multisets(g.basis.len(), s) {
            let r = relation_residual(g, &t)?;
            if !r.is_zero() {
                findings.push(Finding {
                    location: format!("arity {s} at {}", tuple_names(&g.basis, &t)),
                    detail: r.to_text(&g.basis),
                });
            }
        }
    }
    Ok(RelationReport {
        arity_bound,
        unchecked,
        findings,
    })
}

/// Per-degree splitting data for the differential.
#[derive(Clone, Debug)]
pub struct DegreeData<F: Scalar> {
    /// Basis indices of this degree.
    pub indices: Vec<usize>,
    pub splitting: Splitting<F>,
    /// Coordinates with respect to `boundaries | harmonic | complement`.
    pub change: Matrix<F>,
    /// Homotopy from degree `k + 1` to this degree.
    pub homotopy: Matrix<F>,
}

/// Cohomology of `(g, l^1)` with an explicit contraction onto harmonic
/// representatives.
#[derive(Clone, Debug)]
pub struct Cohomology<F: Scalar> {
    pub degrees: BTreeMap<i32, DegreeData<F>>,
}

impl<F: Scalar> DegreeData<F> {
    pub fn dim(&self) -> usize {
        self.splitting.harmonic.len()
    }

    /// Splits a dense vector of this degree into boundary, harmonic and
    /// complement coordinates.
    pub fn decompose(&self, v: &[F]) -> (Vec<F>, Vec<F>, Vec<F>) {
        let c = self.change.apply(v);
        let nb = self.splitting.boundaries.len();
        let nh = self.splitting.harmonic.len();
        (
            c[..nb].to_vec(),
            c[nb..nb + nh].to_vec(),
            c[nb + nh..].to_vec(),
        )
    }

    pub fn harmonic_vector(&self, coords: &[F]) -> Vec<F> {
        combine(&self.splitting.harmonic, coords, self.indices.len())
    }
}

pub(crate) fn combine<F: Scalar>(vectors: &[Vec<F>], coords: &[F], dim: usize) -> Vec<F> {
    let mut out = vec![F::zero(); dim];
    for (v, c) in vectors.iter().zip(coords) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    out
}

impl<F: Scalar> Cohomology<F> {
    pub fn dim(&self, k: i32) -> usize {
        self.degrees.get(&k).map_or(0, DegreeData::dim)
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        self.degrees.iter().map(|(k, d)| (*k, d.dim())).collect()
    }

    /// Harmonic representatives of degree `k` as ground-field elements.
    pub fn representatives(&self, k: i32) -> Vec<Element<F>> {
        let ground = LocalRing::ground();
        let Some(d) = self.degrees.get(&k) else {
            return Vec::new();
        };
        d.splitting
            .harmonic
            .iter()
            .map(|v| scatter(&ground, &d.indices, v))
            .collect()
    }
}

/// Dense coordinates of an element on the given basis indices (constant terms).
pub(crate) fn gather<F: Scalar>(e: &Element<F>, indices: &[usize]) -> Vec<F> {
    indices
        .iter()
        .map(|&i| e.coeff(i).constant_term())
        .collect()
}

pub(crate) fn scatter<F: Scalar>(
    ring: &Arc<LocalRing<F>>,
    indices: &[usize],
    v: &[F],
) -> Element<F> {
    Element::from_terms(
        ring,
        indices.iter().zip(v).map(|(&i, c)| {
            (
                i,
                crate::coefficients::SeriesElement::constant(ring, c.clone()),
            )
        }),
    )
}

/// Cohomology with harmonic representatives and a homotopy `h` satisfying
/// `l1 h + h l1 = 1 - i p`.
pub fn cohomology<F: Scalar>(g: &LInfinityAlgebra<F>) -> Result<Cohomology<F>> {
    let mut degrees = BTreeMap::new();
    let Some((lo, hi)) = g.basis.degree_range() else {
        return Ok(Cohomology { degrees });
    };
    for k in lo..=hi {
        let prod = g.differential_matrix(k + 1).mul(&g.differential_matrix(k));
        if !prod.is_zero() {
            return Err(Error::DifferentialNotSquareZero(format!(
                "from degree {k} to degree {}",
                k + 2
            )));
        }
    }
    let mut splittings = BTreeMap::new();
    for k in lo..=hi {
        let indices = g.basis.in_degree(k);
        let incoming = g.differential_matrix(k - 1);
        let outgoing = g.differential_matrix(k);
        let sp = Splitting::new(indices.len(), &incoming, &outgoing);
        splittings.insert(k, (indices, sp));
    }
    for k in lo..=hi {
        let (indices, sp) = &splittings[&k];
        let dim = indices.len();
        let change = if dim == 0 {
            Matrix::zeros(0, 0)
        } else {
            sp.basis_matrix().inverse().expect("splitting is a basis")
        };
        // homotopy: degree k+1 -> k, inverting l1 from the complement onto boundaries
        let (up_indices, up_sp) = splittings
            .get(&(k + 1))
            .map(|(i, s)| (i.clone(), s.clone()))
            .unwrap_or_else(|| {
                (
                    Vec::new(),
                    Splitting {
                        boundaries: vec![],
                        harmonic: vec![],
                        complement: vec![],
                    },
                )
            });
        let up_dim = up_indices.len();
        let mut homotopy = Matrix::zeros(dim, up_dim);
        if up_dim > 0 && !sp.complement.is_empty() {
            let d = g.differential_matrix(k);
            let dc: Vec<Vec<F>> = sp.complement.iter().map(|c| d.apply(c)).collect();
            let dc = Matrix::from_columns(up_dim, &dc);
            let up_change = up_sp
                .basis_matrix()
                .inverse()
                .expect("splitting is a basis");
            let nb = up_sp.boundaries.len();
            for col in 0..up_dim {
                let e = crate::linalg::unit_vector::<F>(up_dim, col);
                let coords = up_change.apply(&e);
                let b = combine(&up_sp.boundaries, &coords[..nb], up_dim);
                let y = dc.solve(&b).expect("complement maps onto boundaries");
                let v = combine(&sp.complement, &y, dim);
                for (r, x) in v.into_iter().enumerate() {
                    homotopy[(r, col)] = x;
                }
            }
        }
        degrees.insert(
            k,
            DegreeData {
                indices: indices.clone(),
                splitting: sp.clone(),
                change,
                homotopy,
            },
        );
    }
    Ok(Cohomology { degrees })
}
