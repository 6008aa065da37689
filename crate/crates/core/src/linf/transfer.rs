//! L-infinity morphisms and minimal models by homotopy transfer.

use std::collections::BTreeMap;

use super::{
    cohomology, multisets, tuple_names, Cohomology, Finding, LInfinityAlgebra, RelationReport,
};
use crate::coefficients::ring::LocalRing;
use crate::error::{Error, Result};
use crate::graded::{
    canonical_tuple, koszul_sign_unchecked, unshuffles, Element, GradedBasis, MultilinearOperation,
    Symmetry, MAX_ARITY,
};
use crate::scalar::{factorial, Scalar};

/// Components `f^s` (degree `1 - s`, graded symmetric in the source's
/// reduced degrees).
#[derive(Clone, Debug, PartialEq)]
pub struct LInfinityMorphism<F: Scalar> {
    pub components: BTreeMap<usize, MultilinearOperation<F>>,
}

impl<F: Scalar> LInfinityMorphism<F> {
    pub fn identity(g: &LInfinityAlgebra<F>) -> Self {
        let ground = LocalRing::ground();
        let mut f1 = MultilinearOperation::new(1, 0, Symmetry::GradedSymmetricReduced);
        for i in 0..g.basis().len() {
            f1.insert_raw(vec![i], Element::basis(&ground, i));
        }
        LInfinityMorphism {
            components: [(1, f1)].into_iter().collect(),
        }
    }

    fn apply(
        &self,
        s: usize,
        args: &[&Element<F>],
        source: &GradedBasis,
    ) -> Result<Option<Element<F>>> {
        match self.components.get(&s) {
            Some(op) => op.evaluate(args, source).map(Some),
            None => Ok(None),
        }
    }
}

/// Set partitions of `0..n`, blocks ordered by their smallest element.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// `sum_{partitions} eps l^k(f^{B_1}(..), .., f^{B_k}(..))` on source basis
/// vectors `t`. With `min_blocks = 2` the single-block term is left out.
fn morphism_lhs<F: Scalar>(
    f: &LInfinityMorphism<F>,
    source: &GradedBasis,
    target: &LInfinityAlgebra<F>,
    t: &[usize],
    min_blocks: usize,
) -> Result<Element<F>> {
    let ground = LocalRing::ground();
    let reduced: Vec<i32> = t.iter().map(|&i| source.reduced_degree(i)).collect();
    let mut total = Element::zero(&ground);
    for partition in set_partitions(t.len()) {
        let k = partition.len();
        if k < min_blocks || target.bracket(k).is_none() {
            continue;
        }
        let perm: Vec<usize> = partition.iter().flatten().copied().collect();
        let sign = koszul_sign_unchecked(&perm, &reduced);
        let mut values = Vec::with_capacity(k);
        for block in &partition {
            let args: Vec<Element<F>> = block
                .iter()
                .map(|&p| Element::basis(&ground, t[p]))
                .collect();
            let refs: Vec<&Element<F>> = args.iter().collect();
            match f.apply(block.len(), &refs, source)? {
                Some(v) if !v.is_zero() => values.push(v),
                _ => break,
            }
        }
        if values.len() < k {
            continue;
        }
        let refs: Vec<&Element<F>> = values.iter().collect();
        let y = target.apply(k, &refs)?;
        total = if sign < 0 {
            total.sub(&y)
        } else {
            total.add(&y)
        };
    }
    Ok(total)
}

/// `sum_j sum_sigma eps f^{n-j+1}(l^j(v_sigma..), v_sigma..)` for `j` in `js`.
fn morphism_rhs<F: Scalar>(
    f: &LInfinityMorphism<F>,
    source: &LInfinityAlgebra<F>,
    t: &[usize],
    js: impl Iterator<Item = usize>,
) -> Result<Element<F>> {
    let ground = LocalRing::ground();
    let n = t.len();
    let reduced: Vec<i32> = t
        .iter()
        .map(|&i| source.basis().reduced_degree(i))
        .collect();
    let mut total = Element::zero(&ground);
    for j in js {
        let Some(inner) = source.bracket(j) else {
            continue;
        };
        let Some(outer) = f.components.get(&(n - j + 1)) else {
            continue;
        };
        for sigma in unshuffles(j, n) {
            let first: Vec<usize> = sigma[..j].iter().map(|&k| t[k]).collect();
            let x = inner.read(&first, source.basis(), &ground);
            if x.is_zero() {
                continue;
            }
            let rest: Vec<Element<F>> = sigma[j..]
                .iter()
                .map(|&k| Element::basis(&ground, t[k]))
                .collect();
            let mut args = vec![&x];
            args.extend(rest.iter());
            let y = outer.evaluate(&args, source.basis())?;
            total = if koszul_sign_unchecked(&sigma, &reduced) < 0 {
                total.sub(&y)
            } else {
                total.add(&y)
            };
        }
    }
    Ok(total)
}

/// Checks the morphism relations up to `arity_bound` on all multisets of
/// source basis vectors.
pub fn check_morphism<F: Scalar>(
    f: &LInfinityMorphism<F>,
    source: &LInfinityAlgebra<F>,
    target: &LInfinityAlgebra<F>,
    arity_bound: usize,
) -> Result<RelationReport> {
    let mut findings = Vec::new();
    for n in 1..=arity_bound.min(MAX_ARITY) {
        for t in multisets(source.basis().len(), n) {
            if canonical_tuple(&t, source.basis()).is_none() {
                continue;
            }
            let lhs = morphism_lhs(f, source.basis(), target, &t, 1)?;
            let rhs = morphism_rhs(f, source, &t, 1..=n)?;
            let r = lhs.sub(&rhs);
            if !r.is_zero() {
                findings.push(Finding {
                    location: format!("arity {n} at {}", tuple_names(source.basis(), &t)),
                    detail: r.to_text(target.basis()),
                });
            }
        }
    }
    let unchecked = if arity_bound > MAX_ARITY {
        (MAX_ARITY + 1..=arity_bound).collect()
    } else {
        Vec::new()
    };
    Ok(RelationReport {
        arity_bound,
        unchecked,
        findings,
    })
}

/// A minimal algebra on the cohomology with a quasi-isomorphism into `g`.
#[derive(Clone, Debug)]
pub struct MinimalModel<F: Scalar> {
    pub algebra: LInfinityAlgebra<F>,
    /// Morphism from `algebra` to the original algebra.
    pub morphism: LInfinityMorphism<F>,
    pub cohomology: Cohomology<F>,
    pub arity: usize,
}

/// Homotopy transfer along the contraction of [`cohomology`]: with
/// `Q_n` the arity-`n` morphism defect built from lower components,
/// `l'^n = p(Q_n)` and `f^n = -h(Q_n)`.
pub fn minimal_model<F: Scalar>(g: &LInfinityAlgebra<F>, arity: usize) -> Result<MinimalModel<F>> {
    let coh = cohomology(g)?;
    if g.is_minimal() {
        return Ok(MinimalModel {
            algebra: g.clone(),
            morphism: LInfinityMorphism::identity(g),
            cohomology: coh,
            arity,
        });
    }
    if arity > MAX_ARITY {
        return Err(Error::Limit(format!("arity {arity} > {MAX_ARITY}")));
    }
    let ground = LocalRing::ground();
    // harmonic basis, degree by degree
    let mut names = Vec::new();
    let mut reps: Vec<Element<F>> = Vec::new();
    for (k, d) in &coh.degrees {
        for v in &d.splitting.harmonic {
            let e = super::scatter(&ground, &d.indices, v);
            let name = match e.terms().iter().next() {
                Some((i, c)) if e.terms().len() == 1 && c.constant_term().is_one() => {
                    g.basis().name(*i).to_string()
                }
                _ => format!("[{}]", e.to_text(g.basis())),
            };
            names.push((name, *k));
            reps.push(e);
        }
    }
    let hbasis = GradedBasis::new(names)?;
    let mut f1 = MultilinearOperation::new(1, 0, Symmetry::GradedSymmetricReduced);
    for (i, r) in reps.iter().enumerate() {
        f1.insert_raw(vec![i], r.clone());
    }
    let mut morphism = LInfinityMorphism {
        components: [(1, f1)].into_iter().collect(),
    };
    let mut minimal = LInfinityAlgebra::new(hbasis.clone(), BTreeMap::new())?;
    // offsets of each degree inside the harmonic basis
    let mut offsets = BTreeMap::new();
    let mut acc = 0;
    for (k, d) in &coh.degrees {
        offsets.insert(*k, acc);
        acc += d.dim();
    }
    for n in 2..=arity {
        let mut ln = MultilinearOperation::new(n, 2 - n as i32, Symmetry::GradedSymmetricReduced);
        let mut fnn = MultilinearOperation::new(n, 1 - n as i32, Symmetry::GradedSymmetricReduced);
        for t in multisets(hbasis.len(), n) {
            if canonical_tuple(&t, &hbasis).is_none() {
                continue;
            }
            let lhs = morphism_lhs(&morphism, &hbasis, g, &t, 2)?;
            let rhs = morphism_rhs(&morphism, &minimal, &t, 2..n)?;
            let q = lhs.sub(&rhs);
            if q.is_zero() {
                continue;
            }
            let deg: i32 = t.iter().map(|&i| hbasis.degree(i)).sum::<i32>() + 2 - n as i32;
            let Some(data) = coh.degrees.get(&deg) else {
                return Err(Error::InvalidStructure(format!(
                    "transfer defect outside the graded range at {t:?}"
                )));
            };
            let v = super::gather(&q, &data.indices);
            let (_, harm, _) = data.decompose(&v);
            let off = offsets[&deg];
            let lvalue = Element::from_terms(
                &ground,
                harm.iter().enumerate().map(|(j, c)| {
                    (
                        off + j,
                        crate::coefficients::SeriesElement::constant(&ground, c.clone()),
                    )
                }),
            );
            ln.insert_raw(t.clone(), lvalue);
            if let Some(below) = coh.degrees.get(&(deg - 1)) {
                let hv = below.homotopy.apply(&v);
                let fvalue = super::scatter(&ground, &below.indices, &hv).neg();
                fnn.insert_raw(t.clone(), fvalue);
            }
        }
        let mut brackets = minimal.brackets().clone();
        brackets.insert(n, ln);
        minimal = LInfinityAlgebra::new(hbasis.clone(), brackets)?;
        morphism.components.insert(n, fnn);
    }
    Ok(MinimalModel {
        algebra: minimal,
        morphism,
        cohomology: coh,
        arity,
    })
}

/// `f_*(a) = sum_n 1/n! f^n(a, .., a)`.
pub fn pushforward_mc<F: Scalar>(
    f: &LInfinityMorphism<F>,
    source: &GradedBasis,
    a: &Element<F>,
) -> Result<Element<F>> {
    let n_max = a.ring().truncation() as usize;
    let mut total = Element::zero(a.ring());
    for (&n, op) in &f.components {
        if n > n_max {
            break;
        }
        let args = vec![a; n];
        let y = op.evaluate(&args, source)?;
        total = total.add(&y.scale_field(&factorial::<F>(n).inv().unwrap()));
    }
    Ok(total)
}
