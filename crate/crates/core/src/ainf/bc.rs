//! Bounding cochains and the categories of objects equipped with them.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{compositions, CurvedCategory, CurvedFunctor};
use crate::coefficients::ring::{LocalRing, SeriesElement};
use crate::error::{Error, Result};
use crate::graded::{Element, GradedBasis, MultilinearOperation, Symmetry};
use crate::linalg::{column_space, Matrix, Splitting};
use crate::linf::Finding;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundingCochain<F: Scalar> {
    pub object: usize,
    pub value: Element<F>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BcOutcome<F: Scalar> {
    Solved(BoundingCochain<F>),
    Obstructed {
        order: u32,
        monomial: String,
        /// Coordinates in the harmonic basis of `H^2` of the reduced
        /// endomorphism complex.
        class: Vec<F>,
        /// The discrepancy was not even closed.
        not_closed: bool,
    },
}

fn validate_cochain<F: Scalar>(
    a: &CurvedCategory<F>,
    obj: usize,
    alpha: &Element<F>,
) -> Result<Element<F>> {
    if obj >= a.objects().len() {
        return Err(Error::InvalidCochain(format!("object {obj} out of range")));
    }
    let alpha = super::check_ring(a.ring(), alpha)?;
    if !a.in_hom(&alpha, obj, obj) || !alpha.is_homogeneous_of(a.basis(), 1) {
        return Err(Error::InvalidCochain(format!(
            "cochain for {} must lie in hom^1 of that object",
            a.objects()[obj]
        )));
    }
    if !alpha.constant_part().is_empty() {
        return Err(Error::ConstantTermPresent(alpha.to_text(a.basis())));
    }
    Ok(alpha)
}

/// `sum_s mu^s(alpha, .., alpha)`.
pub fn ainf_mc_residual<F: Scalar>(
    a: &CurvedCategory<F>,
    obj: usize,
    alpha: &Element<F>,
) -> Result<Element<F>> {
    let alpha = validate_cochain(a, obj, alpha)?;
    let n = a.ring().truncation() as usize;
    let mut total = a.apply(0, &[], obj)?;
    if alpha.is_zero() {
        return Ok(total);
    }
    for s in 1..=n.min(a.max_arity()) {
        let args = vec![&alpha; s];
        total = total.add(&a.apply(s, &args, obj)?);
    }
    Ok(total)
}

fn monomial_text<F: Scalar>(ring: &Arc<LocalRing<F>>, m: &crate::coefficients::Monomial) -> String {
    SeriesElement::from_terms(ring, [(m.clone(), F::one())].into_iter().collect()).to_text()
}

/// Matrix of the reduced `mu^1` on `hom(obj, obj)` from degree `k` to `k + 1`.
fn reduced_differential<F: Scalar>(
    a0: &CurvedCategory<F>,
    obj: usize,
    k: i32,
) -> (Vec<usize>, Vec<usize>, Matrix<F>) {
    let hom = a0.hom(obj, obj);
    let src: Vec<usize> = hom
        .iter()
        .copied()
        .filter(|&i| a0.basis().degree(i) == k)
        .collect();
    let dst: Vec<usize> = hom
        .iter()
        .copied()
        .filter(|&i| a0.basis().degree(i) == k + 1)
        .collect();
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (j, &i) in src.iter().enumerate() {
        let v = a0
            .apply(1, &[&Element::basis(a0.ring(), i)], obj)
            .expect("ground evaluation");
        for (r, &d) in dst.iter().enumerate() {
            m[(r, j)] = v.coeff(d).constant_term();
        }
    }
    (src, dst, m)
}

/// Order-by-order solve of `sum_s mu^s(alpha^s) = 0` for `obj`, up to
/// weight `order`.
pub fn solve_bounding_cochain<F: Scalar>(
    a: &CurvedCategory<F>,
    obj: usize,
    order: u32,
) -> Result<BcOutcome<F>> {
    solve_bounding_cochain_shifted(a, obj, order, None)
}

/// Same solve; if `shift` (a degree-zero vector on `hom^0(obj, obj)`) is
/// given, `mu^1(shift) * m` is added to every correction of monomial `m`.
/// The first obstruction does not depend on this choice.
pub fn solve_bounding_cochain_shifted<F: Scalar>(
    a: &CurvedCategory<F>,
    obj: usize,
    order: u32,
    shift: Option<&[F]>,
) -> Result<BcOutcome<F>> {
    if obj >= a.objects().len() {
        return Err(Error::InvalidCochain(format!("object {obj} out of range")));
    }
    let ring = a.ring().clone();
    if order > ring.truncation() {
        return Err(Error::Limit(format!(
            "order {order} exceeds the ring truncation {}",
            ring.truncation()
        )));
    }
    let a0 = a.reduce_mod_max_ideal();
    let (i0, _, d0) = reduced_differential(&a0, obj, 0);
    let (i1, i2, d1) = reduced_differential(&a0, obj, 1);
    let (_, _, d2) = reduced_differential(&a0, obj, 2);
    let split = Splitting::new(i2.len(), &d1, &d2);
    let change = if i2.is_empty() {
        Matrix::zeros(0, 0)
    } else {
        split.basis_matrix().inverse().expect("basis")
    };
    let (nb, nh) = (split.boundaries.len(), split.harmonic.len());
    let shift_image: Option<Vec<F>> = match shift {
        Some(w) if w.len() == i0.len() => Some(d0.apply(w)),
        Some(_) => {
            return Err(Error::LengthMismatch(
                "shift must live on hom^0 of the object".into(),
            ))
        }
        None => None,
    };

    let mut alpha = Element::zero(&ring);
    for k in 1..=order {
        let residual = ainf_mc_residual(a, obj, &alpha)?.weight_part(k);
        if residual.is_zero() {
            continue;
        }
        let mut monomials: Vec<_> = residual
            .terms()
            .values()
            .flat_map(|c| c.terms().keys().cloned())
            .collect();
        monomials.sort();
        monomials.dedup();
        let mut delta = Element::zero(&ring);
        for m in monomials {
            let full = residual.coefficient_vector(&m, a.basis().len());
            let v: Vec<F> = i2.iter().map(|&i| full[i].clone()).collect();
            let c = change.apply(&v);
            let harmonic = c[nb..nb + nh].to_vec();
            let not_closed = c[nb + nh..].iter().any(|x| !x.is_zero());
            if not_closed || harmonic.iter().any(|x| !x.is_zero()) {
                return Ok(BcOutcome::Obstructed {
                    order: k,
                    monomial: monomial_text(&ring, &m),
                    class: harmonic,
                    not_closed,
                });
            }
            let y = d1.solve(&v).expect("boundary has a primitive");
            let mono =
                SeriesElement::from_terms(&ring, [(m.clone(), F::one())].into_iter().collect());
            let mut correction: Vec<(usize, SeriesElement<F>)> = i1
                .iter()
                .zip(&y)
                .map(|(&i, c)| (i, mono.scale(&-c.clone())))
                .collect();
            if let Some(s) = &shift_image {
                correction.extend(i1.iter().zip(s).map(|(&i, c)| (i, mono.scale(c))));
            }
            delta = delta.add(&Element::from_terms(&ring, correction));
        }
        alpha = alpha.add(&delta);
    }
    let check = ainf_mc_residual(a, obj, &alpha)?.truncated(order);
    if !check.is_zero() {
        return Err(Error::InvalidStructure(format!(
            "bounding cochain solve left {}",
            check.to_text(a.basis())
        )));
    }
    Ok(BcOutcome::Solved(BoundingCochain {
        object: obj,
        value: alpha,
    }))
}

/// Objects, basis and index maps of a category of selected objects.
struct Layout {
    objects: Vec<String>,
    basis: GradedBasis,
    ends: Vec<(usize, usize)>,
    /// New index -> old index.
    back: Vec<usize>,
    forward: BTreeMap<(usize, usize, usize), usize>,
}

fn layout<F: Scalar>(a: &CurvedCategory<F>, objs: &[usize]) -> Result<Layout> {
    let mut seen = objs.to_vec();
    seen.sort_unstable();
    seen.dedup();
    let distinct = seen.len() == objs.len();
    let objects = objs
        .iter()
        .enumerate()
        .map(|(p, &o)| {
            if distinct {
                a.objects()[o].clone()
            } else {
                format!("{}#{p}", a.objects()[o])
            }
        })
        .collect();
    let mut names = Vec::new();
    let mut ends = Vec::new();
    let mut back = Vec::new();
    let mut forward = BTreeMap::new();
    for (p, &op) in objs.iter().enumerate() {
        for (q, &oq) in objs.iter().enumerate() {
            for i in a.hom(op, oq) {
                let name = if distinct {
                    a.basis().name(i).to_string()
                } else {
                    format!("{}[{p},{q}]", a.basis().name(i))
                };
                forward.insert((p, q, i), names.len());
                names.push((name, a.basis().degree(i)));
                ends.push((p, q));
                back.push(i);
            }
        }
    }
    Ok(Layout {
        objects,
        basis: GradedBasis::new(names)?,
        ends,
        back,
        forward,
    })
}

fn relabel<F: Scalar>(
    lay: &Layout,
    e: &Element<F>,
    p: usize,
    q: usize,
    ring: &Arc<LocalRing<F>>,
) -> Element<F> {
    Element::from_terms(
        ring,
        e.terms()
            .iter()
            .map(|(&i, c)| (lay.forward[&(p, q, i)], c.clone())),
    )
}

/// `sum op^{s + t}(alpha_0^{k_0}, a_1, alpha_1^{k_1}, .., a_s, alpha_s^{k_s})`
/// over all insertions with `t = sum k_i`.
fn with_insertions<F: Scalar>(
    apply: impl Fn(usize, &[&Element<F>], usize) -> Result<Element<F>>,
    max_arity: usize,
    truncation: usize,
    arrows: &[Element<F>],
    cochains: &[&Element<F>],
    obj: usize,
    ring: &Arc<LocalRing<F>>,
) -> Result<Element<F>> {
    let s = arrows.len();
    let mut total = Element::zero(ring);
    for t in 0..=truncation.min(max_arity.saturating_sub(s)) {
        for ks in compositions(t, s + 1, true) {
            if ks.iter().zip(cochains).any(|(&k, c)| k > 0 && c.is_zero()) {
                continue;
            }
            let mut args: Vec<&Element<F>> = Vec::with_capacity(s + t);
            for (pos, &k) in ks.iter().enumerate() {
                args.extend(std::iter::repeat_n(cochains[pos], k));
                if pos < s {
                    args.push(&arrows[pos]);
                }
            }
            total = total.add(&apply(s + t, &args, obj)?);
        }
    }
    Ok(total)
}

fn no_cap_with_cochains<F: Scalar>(cap: Option<usize>, sels: &[BoundingCochain<F>]) -> Result<()> {
    if cap.is_some() && sels.iter().any(|c| !c.value.is_zero()) {
        return Err(Error::Limit("inserting cochains needs every operation; this structure is only known up to an arity cap".into()));
    }
    Ok(())
}

/// The uncurved category whose objects are the given `(object, cochain)`
/// pairs.
pub fn bc_category<F: Scalar>(
    a: &CurvedCategory<F>,
    sels: &[BoundingCochain<F>],
) -> Result<CurvedCategory<F>> {
    let mut values = Vec::with_capacity(sels.len());
    for c in sels {
        let v = validate_cochain(a, c.object, &c.value)?;
        let r = ainf_mc_residual(a, c.object, &v)?;
        if !r.is_zero() {
            return Err(Error::InvalidCochain(format!(
                "cochain for {} has residual {}",
                a.objects()[c.object],
                r.to_text(a.basis())
            )));
        }
        values.push(v);
    }
    no_cap_with_cochains(a.arity_cap(), sels)?;
    let objs: Vec<usize> = sels.iter().map(|c| c.object).collect();
    let lay = layout(a, &objs)?;
    let ring = a.ring().clone();
    let shell = CurvedCategory::new(
        ring.clone(),
        lay.objects.clone(),
        lay.basis.clone(),
        lay.ends.clone(),
        BTreeMap::new(),
        BTreeMap::new(),
    )?;
    let n = ring.truncation() as usize;
    let mut mu = BTreeMap::new();
    for s in 1..=a.max_arity() {
        let mut op = MultilinearOperation::new(s, 2 - s as i32, Symmetry::None);
        for chain in shell.chains(s) {
            let arrows: Vec<Element<F>> = chain
                .arrows
                .iter()
                .map(|&i| Element::basis(&ring, lay.back[i]))
                .collect();
            let cochains: Vec<&Element<F>> = chain.objects.iter().map(|&p| &values[p]).collect();
            let v = with_insertions(
                |j, x, o| a.apply(j, x, o),
                a.max_arity(),
                n,
                &arrows,
                &cochains,
                objs[chain.objects[0]],
                &ring,
            )?;
            if !v.is_zero() {
                let (p, q) = (chain.objects[0], *chain.objects.last().unwrap());
                op.insert_raw(chain.arrows.clone(), relabel(&lay, &v, p, q, &ring));
            }
        }
        mu.insert(s, op);
    }
    Ok(
        CurvedCategory::new(ring, lay.objects, lay.basis, lay.ends, mu, BTreeMap::new())?
            .with_cap(a.arity_cap()),
    )
}

/// The functor induced on bounding-cochain categories, together with the
/// pushed-forward cochains `sum_k F^k(alpha, .., alpha)` on the target side.
pub fn bc_functor<F: Scalar>(
    f: &CurvedFunctor<F>,
    sels: &[BoundingCochain<F>],
) -> Result<(CurvedFunctor<F>, Vec<BoundingCochain<F>>)> {
    let a = f.source();
    let b = f.target();
    let source = bc_category(a, sels)?;
    no_cap_with_cochains(f.arity_cap(), sels)?;
    let ring = a.ring().clone();
    let n = ring.truncation() as usize;
    let mut pushed = Vec::with_capacity(sels.len());
    for c in sels {
        let alpha = c.value.over(&ring);
        let mut beta = f.apply(0, &[], c.object)?;
        for k in 1..=n.min(f.max_arity()) {
            if alpha.is_zero() {
                break;
            }
            let args = vec![&alpha; k];
            beta = beta.add(&f.apply(k, &args, c.object)?);
        }
        let target_obj = f.object_map()[c.object];
        let r = ainf_mc_residual(b, target_obj, &beta)?;
        if !r.is_zero() {
            return Err(Error::PushforwardNotBounding(r.to_text(b.basis())));
        }
        pushed.push(BoundingCochain {
            object: target_obj,
            value: beta,
        });
    }
    let target = bc_category(b, &pushed)?;
    let src_objs: Vec<usize> = sels.iter().map(|c| c.object).collect();
    let tgt_objs: Vec<usize> = pushed.iter().map(|c| c.object).collect();
    let src_lay = layout(a, &src_objs)?;
    let tgt_lay = layout(b, &tgt_objs)?;
    let values: Vec<Element<F>> = sels.iter().map(|c| c.value.over(&ring)).collect();
    let mut components = BTreeMap::new();
    for s in 1..=f.max_arity() {
        let mut op = MultilinearOperation::new(s, 1 - s as i32, Symmetry::None);
        for chain in source.chains(s) {
            let arrows: Vec<Element<F>> = chain
                .arrows
                .iter()
                .map(|&i| Element::basis(&ring, src_lay.back[i]))
                .collect();
            let cochains: Vec<&Element<F>> = chain.objects.iter().map(|&p| &values[p]).collect();
            let v = with_insertions(
                |j, x, o| f.apply(j, x, o),
                f.max_arity(),
                n,
                &arrows,
                &cochains,
                src_objs[chain.objects[0]],
                &ring,
            )?;
            if !v.is_zero() {
                let (p, q) = (chain.objects[0], *chain.objects.last().unwrap());
                op.insert_raw(chain.arrows.clone(), relabel(&tgt_lay, &v, p, q, &ring));
            }
        }
        components.insert(s, op);
    }
    let identity = (0..sels.len()).collect();
    let g = CurvedFunctor::new(source, target, identity, components, BTreeMap::new())?
        .with_cap(f.arity_cap());
    Ok((g, pushed))
}

/// Cohomology-level comparison of a functor modulo the maximal ideal: for
/// every pair of source objects and every degree, the map induced by `F^1`
/// on the cohomology of the hom complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub truncation: u32,
    pub pairs_checked: usize,
    pub failures: Vec<Finding>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn hom_differential<F: Scalar>(c: &CurvedCategory<F>, p: usize, q: usize, k: i32) -> Matrix<F> {
    let hom = c.hom(p, q);
    let src: Vec<usize> = hom
        .iter()
        .copied()
        .filter(|&i| c.basis().degree(i) == k)
        .collect();
    let dst: Vec<usize> = hom
        .iter()
        .copied()
        .filter(|&i| c.basis().degree(i) == k + 1)
        .collect();
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (j, &i) in src.iter().enumerate() {
        let v = c
            .apply(1, &[&Element::basis(c.ring(), i)], p)
            .expect("ground evaluation");
        for (r, &d) in dst.iter().enumerate() {
            m[(r, j)] = v.coeff(d).constant_term();
        }
    }
    m
}

fn degree_indices<F: Scalar>(c: &CurvedCategory<F>, p: usize, q: usize, k: i32) -> Vec<usize> {
    c.hom(p, q)
        .into_iter()
        .filter(|&i| c.basis().degree(i) == k)
        .collect()
}

/// Checks that the reduction of `f` is cohomologically fully faithful. For a
/// functor of bounding-cochain categories this is the associated-graded
/// comparison at the working truncation.
pub fn quasi_embedding_report<F: Scalar>(f: &CurvedFunctor<F>) -> Result<EmbeddingReport> {
    let f0 = f.reduce_mod_max_ideal();
    let a = f0.source();
    let b = f0.target();
    let mut failures = Vec::new();
    let mut pairs = 0;
    let rank = |m: &Matrix<F>| {
        if m.rows() == 0 || m.cols() == 0 {
            0
        } else {
            m.rank()
        }
    };
    for p in 0..a.objects().len() {
        for q in 0..a.objects().len() {
            pairs += 1;
            let (fp, fq) = (f0.object_map()[p], f0.object_map()[q]);
            let mut degrees: Vec<i32> = a
                .hom(p, q)
                .iter()
                .map(|&i| a.basis().degree(i))
                .chain(b.hom(fp, fq).iter().map(|&i| b.basis().degree(i)))
                .collect();
            degrees.sort_unstable();
            degrees.dedup();
            for k in degrees {
                let src = degree_indices(a, p, q, k);
                let dst = degree_indices(b, fp, fq, k);
                let z = hom_differential(a, p, q, k).kernel();
                let bd = hom_differential(a, p, q, k - 1);
                let h = z.len() - rank(&bd);
                let z2 = hom_differential(b, fp, fq, k).kernel();
                let b2 = column_space(&hom_differential(b, fp, fq, k - 1));
                let h2 = z2.len() - b2.len();
                let mut images: Vec<Vec<F>> = Vec::new();
                for v in &z {
                    let e = Element::from_terms(
                        a.ring(),
                        src.iter()
                            .zip(v)
                            .map(|(&i, c)| (i, SeriesElement::constant(a.ring(), c.clone()))),
                    );
                    let y = f0.apply(1, &[&e], p)?;
                    images.push(dst.iter().map(|&j| y.coeff(j).constant_term()).collect());
                }
                let mut cols = images;
                cols.extend(b2.iter().cloned());
                let spanned = if dst.is_empty() {
                    0
                } else {
                    rank(&Matrix::from_columns(dst.len(), &cols))
                };
                let r = spanned - b2.len();
                if r != h || r != h2 {
                    failures.push(Finding {
                        location: format!("hom({}, {}) degree {k}", a.objects()[p], a.objects()[q]),
                        detail: format!("induced rank {r}, source H dim {h}, target H dim {h2}"),
                    });
                }
            }
        }
    }
    Ok(EmbeddingReport {
        truncation: f.source().ring().truncation(),
        pairs_checked: pairs,
        failures,
    })
}
