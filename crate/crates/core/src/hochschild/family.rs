//! Deformations over a local ring, their Maurer-Cartan elements and the
//! order-by-order versal extension.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{composite, from_vector, to_vector, HhDegree, HochschildCochain};
use crate::ainf::{
    check_ainf, check_functor, compose, functor_residual, invert_iso, quasi_embedding_report,
    transport_structure, CurvedCategory, CurvedFunctor, EmbeddingReport, MAX_CHAINS,
};
use crate::coefficients::ring::{LocalRing, RingMap, SeriesElement};
use crate::error::{Error, Result};
use crate::graded::{MultilinearOperation, Symmetry, MAX_ARITY};
use crate::linalg::Matrix;
use crate::linf::RelationReport;
use crate::scalar::Scalar;

/// A curved structure over a local ring reducing to a given uncurved
/// ground-field category.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformationFamily<F: Scalar> {
    pub total: CurvedCategory<F>,
    pub reduction: CurvedCategory<F>,
}

impl<F: Scalar> DeformationFamily<F> {
    pub fn new(total: CurvedCategory<F>, reduction: CurvedCategory<F>) -> Result<Self> {
        if reduction.ring().nvars() != 0 || reduction.is_curved() || reduction.arity_cap().is_some()
        {
            return Err(Error::ReductionMismatch(
                "the reduction must be an uncurved ground-field category".into(),
            ));
        }
        if !total.same_shape(&reduction) {
            return Err(Error::ReductionMismatch(
                "objects or morphism bases differ".into(),
            ));
        }
        if total.reduce_mod_max_ideal().mu() != reduction.mu() {
            return Err(Error::ReductionMismatch(
                "structure maps differ modulo the maximal ideal".into(),
            ));
        }
        let bound = total
            .arity_cap()
            .unwrap_or((2 * total.max_arity()).saturating_sub(1))
            .clamp(1, MAX_ARITY);
        let report = check_ainf(&total, bound)?;
        if let Some(f) = report.findings.first() {
            return Err(Error::NotMaurerCartan(format!(
                "{}: {}",
                f.location, f.detail
            )));
        }
        Ok(DeformationFamily { total, reduction })
    }

    /// The constant family.
    pub fn trivial(reduction: &CurvedCategory<F>, ring: &Arc<LocalRing<F>>) -> Result<Self> {
        DeformationFamily::new(reduction.extend_scalars(ring)?, reduction.clone())
    }

    pub fn base(&self) -> &Arc<LocalRing<F>> {
        self.total.ring()
    }
}

/// `mu_total - mu_0` as a cochain with coefficients in the maximal ideal.
pub fn deformation_to_mc<F: Scalar>(d: &DeformationFamily<F>) -> Result<HochschildCochain<F>> {
    let ring = d.base().clone();
    let total = HochschildCochain::structure(&d.total);
    let base = HochschildCochain::structure(&d.reduction).map(|e| e.over(&ring).neg());
    total.add(&base)
}

/// The family with structure `mu_0 + alpha`. The Maurer-Cartan equation is
/// checked exactly on every length where `alpha` is known.
pub fn mc_to_deformation<F: Scalar>(
    a0: &CurvedCategory<F>,
    ring: &Arc<LocalRing<F>>,
    alpha: &HochschildCochain<F>,
) -> Result<DeformationFamily<F>> {
    super::check_base(a0)?;
    if alpha.degree != 2 {
        return Err(Error::InvalidStructure(format!(
            "Maurer-Cartan cochains have degree 2, not {}",
            alpha.degree
        )));
    }
    let values = alpha.zeroth.values().chain(
        alpha
            .components
            .values()
            .flat_map(|op| op.entries().values()),
    );
    for v in values {
        if !v.constant_part().is_empty() {
            return Err(Error::ConstantTermPresent(v.to_text(a0.basis())));
        }
        if v.ring().nvars() > 0 && !crate::coefficients::ring::same_ring(v.ring(), ring) {
            return Err(Error::RingMismatch);
        }
    }
    let total = HochschildCochain::structure(a0)
        .map(|e| e.over(ring))
        .add(&alpha.map(|e| e.over(ring)))?;
    if let Some(s) = total.components.keys().find(|&&s| s > MAX_ARITY) {
        return Err(Error::Limit(format!(
            "component of length {s} exceeds {MAX_ARITY}"
        )));
    }
    let cap = match total.cap {
        Some(c) => c,
        None => (2 * total.length()).max(1),
    };
    let square = composite(a0, &total, &total, cap)?;
    if let Some((location, value)) = first_entry(a0, &square) {
        return Err(Error::NotMaurerCartan(format!("{location}: {value}")));
    }
    let family = CurvedCategory::new(
        ring.clone(),
        a0.objects().to_vec(),
        a0.basis().clone(),
        a0.ends().to_vec(),
        total.components.clone(),
        total.zeroth.clone(),
    )?
    .with_cap(alpha.cap);
    Ok(DeformationFamily {
        total: family,
        reduction: a0.clone(),
    })
}

fn first_entry<F: Scalar>(
    a0: &CurvedCategory<F>,
    phi: &HochschildCochain<F>,
) -> Option<(String, String)> {
    if let Some((o, v)) = phi.zeroth.iter().find(|(_, v)| !v.is_zero()) {
        return Some((
            format!("length 0 at {}", a0.objects()[*o]),
            v.to_text(a0.basis()),
        ));
    }
    phi.components.iter().find_map(|(s, op)| {
        op.entries()
            .iter()
            .find(|(_, v)| !v.is_zero())
            .map(|(t, v)| {
                (
                    format!("length {s} at {}", a0.tuple_text(t)),
                    v.to_text(a0.basis()),
                )
            })
    })
}

/// Kodaira-Spencer map of a family at a length cap: one column per cotangent
/// variable, rows in the harmonic basis of `HH^2`.
#[derive(Clone, Debug)]
pub struct FamilyKs<F: Scalar> {
    pub length_cap: usize,
    pub columns: Vec<String>,
    pub matrix: Matrix<F>,
    pub rank: usize,
    pub hh2_dim: usize,
    pub surjective: bool,
    pub injective: bool,
    /// The order-one cocycles, in the coordinates of `hh2.slots`.
    pub cocycles: Vec<Vec<F>>,
    pub hh2: HhDegree<F>,
}

pub fn family_ks_map<F: Scalar>(d: &DeformationFamily<F>, cap: usize) -> Result<FamilyKs<F>> {
    let alpha = deformation_to_mc(d)?;
    let ring = d.base();
    let hh2 = HhDegree::new(&d.reduction, 2, cap, false)?;
    let mut columns = Vec::new();
    let mut cols = Vec::new();
    let mut cocycles = Vec::new();
    for &v in ring.cotangent_variables() {
        let mut exps = vec![0; ring.nvars()];
        exps[v] = 1;
        let m = ring.monomial_of(exps);
        let x = to_vector(&alpha.coefficient(&m), &hh2.slots);
        let (_, harmonic, complement) = hh2.decompose(&x);
        if complement.iter().any(|c| !c.is_zero()) {
            return Err(Error::OrderOnePartNotClosed(ring.names()[v].clone()));
        }
        columns.push(ring.names()[v].clone());
        cols.push(harmonic);
        cocycles.push(x);
    }
    let matrix = Matrix::from_columns(hh2.dim(), &cols);
    let rank = if matrix.rows() == 0 || matrix.cols() == 0 {
        0
    } else {
        matrix.rank()
    };
    Ok(FamilyKs {
        length_cap: cap,
        surjective: rank == hh2.dim(),
        injective: rank == columns.len(),
        hh2_dim: hh2.dim(),
        columns,
        matrix,
        rank,
        cocycles,
        hh2,
    })
}

/// The functor equation of `f` as a degree-two cochain on its source, up to
/// length `cap`.
fn residual_cochain<F: Scalar>(f: &CurvedFunctor<F>, cap: usize) -> Result<HochschildCochain<F>> {
    let a = f.source();
    let mut out = HochschildCochain::zero(2);
    for n in 0..=cap {
        if a.chain_count(n) > MAX_CHAINS {
            return Err(Error::Limit(format!(
                "too many composable tuples of length {n}"
            )));
        }
        let mut op = MultilinearOperation::new(n, 2 - n as i32, Symmetry::None);
        for chain in a.chains(n) {
            let r = functor_residual(f, &chain)?;
            if r.is_zero() {
                continue;
            }
            if n == 0 {
                out.zeroth.insert(chain.objects[0], r);
            } else {
                op.insert_raw(chain.arrows.clone(), r);
            }
        }
        if n > 0 && !op.is_zero() {
            out.components.insert(n, op);
        }
    }
    out.cap = Some(cap);
    Ok(out)
}

/// `id + eta` from `source` to `target`, which share a basis.
fn perturbed_identity<F: Scalar>(
    source: &CurvedCategory<F>,
    target: &CurvedCategory<F>,
    eta: &HochschildCochain<F>,
    cap: usize,
) -> Result<CurvedFunctor<F>> {
    let ring = source.ring();
    let id = HochschildCochain {
        degree: 1,
        zeroth: BTreeMap::new(),
        components: CurvedFunctor::identity(source).components().clone(),
        cap: None,
    };
    let h = id.map(|e| e.over(ring)).add(eta)?;
    let f = CurvedFunctor::new(
        source.clone(),
        target.clone(),
        (0..source.objects().len()).collect(),
        h.components,
        h.zeroth,
    )?;
    Ok(if eta.is_zero() {
        f
    } else {
        f.with_cap(Some(cap))
    })
}

#[derive(Clone, Debug)]
pub struct ExtensionReport<F: Scalar> {
    pub length_cap: usize,
    pub order: u32,
    pub ks: FamilyKs<F>,
    pub functor_check: RelationReport,
    pub embedding: EmbeddingReport,
}

#[derive(Clone, Debug)]
pub struct VersalExtension<F: Scalar> {
    /// `Psi*: R -> S`.
    pub map: RingMap<F>,
    /// The pulled-back family `Psi* B` over `S`.
    pub pullback: CurvedCategory<F>,
    /// A functor `Psi* B -> A` reducing to the inverse of the given
    /// isomorphism.
    pub functor: CurvedFunctor<F>,
    pub report: ExtensionReport<F>,
}

/// Given a family `B` over a power series ring `R`, a deformation `A` over
/// `S` and an isomorphism `iso: A_0 -> B_0`, finds `Psi*: R -> S` and a
/// functor `Psi* B -> A` order by order. The harmonic part of each
/// discrepancy is absorbed into `Psi*` through the Kodaira-Spencer map, the
/// exact part into the functor.
pub fn versal_extension<F: Scalar>(
    b: &DeformationFamily<F>,
    a: &CurvedCategory<F>,
    iso: &CurvedFunctor<F>,
    cap: usize,
    order: u32,
) -> Result<VersalExtension<F>> {
    let r = b.base().clone();
    let s = a.ring().clone();
    if r.has_relations() {
        return Err(Error::RingHasRelations);
    }
    if order > s.truncation() {
        return Err(Error::Limit(format!(
            "order {order} exceeds the truncation {} of the target ring",
            s.truncation()
        )));
    }
    if cap == 0 || cap > MAX_ARITY {
        return Err(Error::Limit(format!(
            "length cap must be between 1 and {MAX_ARITY}"
        )));
    }
    if iso.source().ring().nvars() != 0 || !iso.zeroth().is_empty() {
        return Err(Error::InvalidStructure(
            "the isomorphism must be an uncurved ground-field functor".into(),
        ));
    }
    if !iso.target().same_shape(&b.reduction) || iso.target().mu() != b.reduction.mu() {
        return Err(Error::ReductionMismatch(
            "isomorphism does not end at the reduction of B".into(),
        ));
    }
    let a0 = a.reduce_mod_max_ideal();
    if !a0.same_shape(iso.source()) || a0.mu() != iso.source().mu() {
        return Err(Error::ReductionMismatch(
            "isomorphism does not start at the reduction of A".into(),
        ));
    }
    let ks = family_ks_map(b, cap)?;
    if !ks.surjective {
        return Err(Error::KsNotSurjective(format!(
            "rank {} but HH^2 has dimension {} at length cap {cap}",
            ks.rank, ks.hh2_dim
        )));
    }
    let (moved, along) = transport_structure(a, iso, cap)?;
    let hh2 = &ks.hh2;
    let mut coords = vec![SeriesElement::zero(&s); r.nvars()];
    let mut eta = HochschildCochain::zero(1);
    for k in 1..=order {
        let psi = RingMap::new(&r, &s, coords.clone())?;
        let pb = b.total.pullback(&psi)?;
        let h = perturbed_identity(&pb, &moved, &eta, cap)?;
        let residual = residual_cochain(&h, cap)?.weight_part(k);
        for m in residual.monomials() {
            let mono = SeriesElement::from_terms(&s, [(m.clone(), F::one())].into_iter().collect());
            let v = to_vector(&residual.coefficient(&m), &hh2.slots);
            let (_, harmonic, complement) = hh2.decompose(&v);
            if complement.iter().any(|c| !c.is_zero()) {
                return Err(Error::ObstructionEscapes {
                    order: k,
                    detail: format!(
                        "discrepancy at {} is not closed at length cap {cap}; the caps may be too low",
                        mono.to_text()
                    ),
                });
            }
            let target: Vec<F> = harmonic.iter().map(|x| -x.clone()).collect();
            let c = ks
                .matrix
                .solve(&target)
                .ok_or_else(|| Error::ObstructionEscapes {
                    order: k,
                    detail: format!("class at {} is outside the image", mono.to_text()),
                })?;
            let mut w = v;
            for (ci, cocycle) in c.iter().zip(&ks.cocycles) {
                if ci.is_zero() {
                    continue;
                }
                for (x, y) in w.iter_mut().zip(cocycle) {
                    *x = x.clone() + ci.clone() * y.clone();
                }
            }
            for (coord, ci) in coords.iter_mut().zip(&c) {
                *coord = coord.add(&mono.scale(ci));
            }
            let y = hh2
                .incoming
                .solve(&w)
                .ok_or_else(|| Error::ObstructionEscapes {
                    order: k,
                    detail: format!("exact part at {} has no primitive", mono.to_text()),
                })?;
            let step = from_vector(1, &hh2.previous, &y, &s, cap).scale(&mono);
            eta = eta.add(&step)?;
        }
    }
    let map = RingMap::new(&r, &s, coords)?;
    let pullback = b.total.pullback(&map)?;
    let h = perturbed_identity(&pullback, &moved, &eta, cap)?;
    let back = invert_iso(&along, cap)?;
    let functor = compose(&h, &back, cap)?;
    let functor_check = check_functor(&functor, cap)?;
    let embedding = quasi_embedding_report(&functor)?;
    Ok(VersalExtension {
        map,
        pullback,
        functor,
        report: ExtensionReport {
            length_cap: cap,
            order,
            ks,
            functor_check,
            embedding,
        },
    })
}

/// Moves a family along `id + gamma` for a degree-one cochain `gamma` over
/// the maximal ideal without length-zero part. Returns the new family and
/// the functor from the old total space to the new one, which is the
/// identity modulo the maximal ideal.
pub fn gauge_deformation<F: Scalar>(
    d: &DeformationFamily<F>,
    gamma: &HochschildCochain<F>,
    cap: usize,
) -> Result<(DeformationFamily<F>, CurvedFunctor<F>)> {
    if gamma.degree != 1 {
        return Err(Error::InvalidStructure(
            "gauge cochains have degree 1".into(),
        ));
    }
    if !gamma.zeroth.is_empty() {
        return Err(Error::InvalidStructure(
            "gauge cochains with a length-zero part are not supported".into(),
        ));
    }
    let values = gamma
        .components
        .values()
        .flat_map(|op| op.entries().values());
    for v in values {
        if !v.constant_part().is_empty() {
            return Err(Error::ConstantTermPresent(v.to_text(d.total.basis())));
        }
    }
    let h = perturbed_identity(&d.total, &d.total, gamma, cap)?;
    let (moved, along) = transport_structure(&d.total, &h, cap)?;
    let family = DeformationFamily::new(moved, d.reduction.clone())?;
    Ok((family, along))
}
