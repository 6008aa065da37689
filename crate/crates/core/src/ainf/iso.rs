//! Composition, inverses of isomorphisms and transport of structure.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CurvedCategory, CurvedFunctor};
use crate::coefficients::ring::{LocalRing, SeriesElement};
use crate::error::{Error, Result};
use crate::graded::{Element, MultilinearOperation, Symmetry, MAX_ARITY};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

fn check_arity(arity: usize) -> Result<()> {
    if arity == 0 || arity > MAX_ARITY {
        return Err(Error::Limit(format!(
            "arity must be between 1 and {MAX_ARITY}"
        )));
    }
    Ok(())
}

/// `g . f`, components up to `arity`.
pub fn compose<F: Scalar>(
    f: &CurvedFunctor<F>,
    g: &CurvedFunctor<F>,
    arity: usize,
) -> Result<CurvedFunctor<F>> {
    check_arity(arity)?;
    if !f.target().same_shape(g.source()) {
        return Err(Error::InvalidStructure(
            "functors are not composable".into(),
        ));
    }
    let a = f.source();
    let ring = a.ring().clone();
    let kmax = g.max_arity().max(1);
    let mut components = BTreeMap::new();
    let mut zeroth = BTreeMap::new();
    for s in 0..=arity {
        let mut op = MultilinearOperation::new(s, 1 - s as i32, Symmetry::None);
        for chain in a.chains(s) {
            let word: Vec<Element<F>> = chain
                .arrows
                .iter()
                .map(|&i| Element::basis(&ring, i))
                .collect();
            let mut total = Element::zero(&ring);
            for (w, o) in f.hat(&word, &chain.objects, kmax)? {
                let args: Vec<&Element<F>> = w.iter().collect();
                total = total.add(&g.apply(w.len(), &args, o[0])?);
            }
            if total.is_zero() {
                continue;
            }
            if s == 0 {
                zeroth.insert(chain.objects[0], total);
            } else {
                op.insert_raw(chain.arrows.clone(), total);
            }
        }
        if s > 0 {
            components.insert(s, op);
        }
    }
    let object_map = f.object_map().iter().map(|&o| g.object_map()[o]).collect();
    let full = f.max_arity() * g.max_arity();
    let cap = match (f.arity_cap(), g.arity_cap()) {
        (None, None) if full <= arity => None,
        (x, y) => Some(arity.min(x.unwrap_or(arity)).min(y.unwrap_or(arity))),
    };
    Ok(CurvedFunctor::new(
        a.clone(),
        g.target().clone(),
        object_map,
        components,
        zeroth,
    )?
    .with_cap(cap))
}

type RingMatrix<F> = Vec<Vec<SeriesElement<F>>>;

fn ring_mul<F: Scalar>(
    x: &RingMatrix<F>,
    y: &RingMatrix<F>,
    ring: &Arc<LocalRing<F>>,
) -> RingMatrix<F> {
    let n = x.len();
    let m = y.first().map_or(0, Vec::len);
    let mut out = vec![vec![SeriesElement::zero(ring); m]; n];
    for i in 0..n {
        for (k, row) in y.iter().enumerate() {
            if x[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = out[i][j].add(&x[i][k].mul(&row[j]));
            }
        }
    }
    out
}

/// Inverse of a square matrix over the ring: invert modulo `m`, then a
/// Neumann series for the nilpotent part.
fn invert_over_ring<F: Scalar>(
    m: &RingMatrix<F>,
    ring: &Arc<LocalRing<F>>,
    what: &str,
) -> Result<RingMatrix<F>> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m0 = Matrix::from_rows(
        m.iter()
            .map(|r| r.iter().map(SeriesElement::constant_term).collect())
            .collect(),
    );
    let inv0 = m0
        .inverse()
        .ok_or_else(|| Error::ComponentNotInvertible(what.to_string()))?;
    let lift = |x: &Matrix<F>| -> RingMatrix<F> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| SeriesElement::constant(ring, x[(i, j)].clone()))
                    .collect()
            })
            .collect()
    };
    let inv0 = lift(&inv0);
    let nil: RingMatrix<F> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| {
                    c.sub(&SeriesElement::constant(ring, c.constant_term()))
                        .neg()
                })
                .collect()
        })
        .collect();
    let step = ring_mul(&inv0, &nil, ring);
    let mut term = inv0.clone();
    let mut acc = inv0;
    for _ in 0..ring.truncation() {
        term = ring_mul(&step, &term, ring);
        if term.iter().flatten().all(SeriesElement::is_zero) {
            break;
        }
        for (ra, rt) in acc.iter_mut().zip(&term) {
            for (a, t) in ra.iter_mut().zip(rt) {
                *a = a.add(t);
            }
        }
    }
    Ok(acc)
}

/// The inverse `G` of an uncurved isomorphism, with `G . F = id` up to
/// `arity`.
pub fn invert_iso<F: Scalar>(f: &CurvedFunctor<F>, arity: usize) -> Result<CurvedFunctor<F>> {
    check_arity(arity)?;
    if !f.zeroth().is_empty() {
        return Err(Error::InvalidStructure(
            "only functors without F0 are inverted".into(),
        ));
    }
    let a = f.source();
    let b = f.target();
    let ring = a.ring().clone();
    let mut inverse_objects = vec![usize::MAX; b.objects().len()];
    for (o, &t) in f.object_map().iter().enumerate() {
        if inverse_objects[t] != usize::MAX {
            return Err(Error::ComponentNotInvertible(
                "object map is not injective".into(),
            ));
        }
        inverse_objects[t] = o;
    }
    if inverse_objects.contains(&usize::MAX) {
        return Err(Error::ComponentNotInvertible(
            "object map is not surjective".into(),
        ));
    }
    let mut g1 = MultilinearOperation::new(1, 0, Symmetry::None);
    for p in 0..a.objects().len() {
        for q in 0..a.objects().len() {
            let src = a.hom(p, q);
            let dst = b.hom(f.object_map()[p], f.object_map()[q]);
            let what = format!("F1 on hom({}, {})", a.objects()[p], a.objects()[q]);
            if src.len() != dst.len() {
                return Err(Error::ComponentNotInvertible(what));
            }
            let mut m = vec![vec![SeriesElement::zero(&ring); src.len()]; dst.len()];
            for (c, &i) in src.iter().enumerate() {
                let v = f.apply(1, &[&Element::basis(&ring, i)], p)?;
                for (r, &j) in dst.iter().enumerate() {
                    m[r][c] = v.coeff(j).embed_constant(&ring);
                }
            }
            let inv = invert_over_ring(&m, &ring, &what)?;
            for (r, &j) in dst.iter().enumerate() {
                let value = Element::from_terms(
                    &ring,
                    src.iter().enumerate().map(|(c, &i)| (i, inv[c][r].clone())),
                );
                g1.insert_raw(vec![j], value);
            }
        }
    }
    let strict = f.is_strict();
    let mut g = CurvedFunctor::new(
        b.clone(),
        a.clone(),
        inverse_objects.clone(),
        [(1, g1)].into_iter().collect(),
        BTreeMap::new(),
    )?;
    if strict {
        return Ok(g);
    }
    for s in 2..=arity {
        let mut op = MultilinearOperation::new(s, 1 - s as i32, Symmetry::None);
        for chain in b.chains(s) {
            let word: Vec<Element<F>> = chain
                .arrows
                .iter()
                .zip(&chain.objects)
                .map(|(&j, &o)| g.apply(1, &[&Element::basis(&ring, j)], o))
                .collect::<Result<_>>()?;
            let objs: Vec<usize> = chain.objects.iter().map(|&o| inverse_objects[o]).collect();
            let mut total = Element::zero(&ring);
            for (w, o) in f.hat(&word, &objs, s - 1)? {
                let args: Vec<&Element<F>> = w.iter().collect();
                total = total.add(&g.apply(w.len(), &args, inverse_objects[o[0]])?);
            }
            if !total.is_zero() {
                op.insert_raw(chain.arrows.clone(), total.neg());
            }
        }
        let mut components = g.components().clone();
        components.insert(s, op);
        g = CurvedFunctor::new(
            b.clone(),
            a.clone(),
            inverse_objects.clone(),
            components,
            BTreeMap::new(),
        )?;
    }
    Ok(g.with_cap(Some(arity)))
}

/// Moves the structure of `a` along an isomorphism `f` whose source has the
/// shape of `a`: the new structure on the target basis is
/// `F b_A F^{-1}`, so that `f` becomes an isomorphism onto it. Returns the
/// new category and `f` over the ring of `a`.
pub fn transport_structure<F: Scalar>(
    a: &CurvedCategory<F>,
    f: &CurvedFunctor<F>,
    arity: usize,
) -> Result<(CurvedCategory<F>, CurvedFunctor<F>)> {
    check_arity(arity)?;
    if !f.source().same_shape(a) {
        return Err(Error::InvalidStructure(
            "isomorphism does not start at this category".into(),
        ));
    }
    let ring = a.ring().clone();
    let shell = f.target().clone();
    let g = invert_iso(f, arity)?;
    let mut mu = BTreeMap::new();
    let mut curvature = BTreeMap::new();
    for s in 0..=arity {
        let mut op = MultilinearOperation::new(s, 2 - s as i32, Symmetry::None);
        for chain in shell.chains(s) {
            let word: Vec<Element<F>> = chain
                .arrows
                .iter()
                .map(|&i| Element::basis(&ring, i))
                .collect();
            let mut total = Element::zero(&ring);
            for (w, o) in g.hat(&word, &chain.objects, s.max(1))? {
                for (w2, o2) in a.bar(&w, &o)? {
                    let args: Vec<&Element<F>> = w2.iter().collect();
                    total = total.add(&f.apply(w2.len(), &args, o2[0])?);
                }
            }
            if total.is_zero() {
                continue;
            }
            if s == 0 {
                curvature.insert(chain.objects[0], total);
            } else {
                op.insert_raw(chain.arrows.clone(), total);
            }
        }
        if s > 0 {
            mu.insert(s, op);
        }
    }
    let cap = if f.is_strict() && a.arity_cap().is_none() && a.max_arity() <= arity {
        None
    } else {
        Some(arity)
    };
    let moved = CurvedCategory::new(
        ring.clone(),
        shell.objects().to_vec(),
        shell.basis().clone(),
        shell.ends().to_vec(),
        mu,
        curvature,
    )?
    .with_cap(cap);
    let along = CurvedFunctor::new(
        a.clone(),
        moved.clone(),
        f.object_map().to_vec(),
        f.components().clone(),
        BTreeMap::new(),
    )?
    .with_cap(f.arity_cap());
    Ok((moved, along))
}
