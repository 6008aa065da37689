//! From payloads to domain objects over the rationals.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::format::*;
use crate::ainf::{CurvedCategory, CurvedFunctor};
use crate::coefficients::{
    parse_polynomial, ConeMonoid, LambdaPoint, LocalRing, SeriesElement, Variable,
};
use crate::error::{Error, Result};
use crate::graded::{Element, GradedBasis, MultilinearOperation, Symmetry};
use crate::hochschild::HochschildCochain;
use crate::linf::{GaugePath, LInfinityAlgebra};
use crate::scalar::parse_rational;
use crate::Rational;

type Q = Rational;

/// Input size limits of the command line, on top of the library limits.
pub const MAX_BASIS: usize = 48;
pub const MAX_ENTRIES: usize = 4096;

fn too_many(what: &str, n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::Limit(format!("{n} {what} > {max}")));
    }
    Ok(())
}

pub fn ring(spec: &RingSpec) -> Result<Arc<LocalRing<Q>>> {
    let variables: Vec<Variable> = spec
        .variables
        .iter()
        .map(|v| Variable {
            name: v.name.clone(),
            weight: v.weight,
        })
        .collect();
    let names: Vec<String> = variables.iter().map(|v| v.name.clone()).collect();
    too_many("relations", spec.relations.len(), 64)?;
    let relations = spec
        .relations
        .iter()
        .map(|r| parse_polynomial(r, &names))
        .collect::<Result<Vec<_>>>()?;
    LocalRing::new(variables, relations, spec.truncation)
}

fn ring_or_ground(spec: &Option<RingSpec>) -> Result<Arc<LocalRing<Q>>> {
    match spec {
        Some(r) => ring(r),
        None => Ok(LocalRing::ground()),
    }
}

pub fn rational(text: &str) -> Result<Q> {
    parse_rational(text.trim())
        .ok_or_else(|| Error::Parse(format!("`{text}` is not a rational number")))
}

fn element(basis: &GradedBasis, ring: &Arc<LocalRing<Q>>, coeffs: &Coeffs) -> Result<Element<Q>> {
    let mut terms = Vec::new();
    for (name, text) in coeffs {
        terms.push((basis.index_of(name)?, SeriesElement::parse(ring, text)?));
    }
    Ok(Element::from_terms(ring, terms))
}

fn graded_basis(vectors: &[VectorSpec]) -> Result<GradedBasis> {
    too_many("basis vectors", vectors.len(), MAX_BASIS)?;
    GradedBasis::new(vectors.iter().map(|v| (v.name.clone(), v.degree)).collect())
}

/// Groups entries by arity into operations of degree `degree(s)`.
fn operations(
    entries: &[EntrySpec],
    input: &GradedBasis,
    output: &GradedBasis,
    ring: &Arc<LocalRing<Q>>,
    symmetry: Symmetry,
    degree: impl Fn(usize) -> i32,
) -> Result<BTreeMap<usize, MultilinearOperation<Q>>> {
    too_many("entries", entries.len(), MAX_ENTRIES)?;
    let mut grouped: BTreeMap<usize, Vec<(Vec<usize>, Element<Q>)>> = BTreeMap::new();
    for e in entries {
        if e.inputs.is_empty() {
            return Err(Error::InvalidStructure(
                "an entry needs at least one input".into(),
            ));
        }
        let t = e
            .inputs
            .iter()
            .map(|n| input.index_of(n))
            .collect::<Result<Vec<_>>>()?;
        grouped
            .entry(t.len())
            .or_default()
            .push((t, element(output, ring, &e.output)?));
    }
    let mut ops = BTreeMap::new();
    for (s, list) in grouped {
        if s > crate::graded::MAX_ARITY {
            return Err(Error::Limit(format!(
                "arity {s} > {}",
                crate::graded::MAX_ARITY
            )));
        }
        ops.insert(
            s,
            MultilinearOperation::from_raw_entries(s, degree(s), symmetry, list, input)?,
        );
    }
    Ok(ops)
}

pub fn linf(spec: &LinfSpec) -> Result<LInfinityAlgebra<Q>> {
    let basis = graded_basis(&spec.basis)?;
    let ground = LocalRing::ground();
    let ops = operations(
        &spec.brackets,
        &basis,
        &basis,
        &ground,
        Symmetry::GradedSymmetricReduced,
        |s| 2 - s as i32,
    )?;
    LInfinityAlgebra::new(basis, ops)
}

fn object_index(objects: &[String], name: &str) -> Result<usize> {
    objects
        .iter()
        .position(|o| o == name)
        .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
}

fn per_object(
    objects: &[String],
    basis: &GradedBasis,
    ring: &Arc<LocalRing<Q>>,
    map: &BTreeMap<String, Coeffs>,
) -> Result<BTreeMap<usize, Element<Q>>> {
    map.iter()
        .map(|(o, c)| Ok((object_index(objects, o)?, element(basis, ring, c)?)))
        .collect()
}

/// The category over `ring`; `spec.ring` is ignored.
pub fn category_over(spec: &AinfSpec, ring: &Arc<LocalRing<Q>>) -> Result<CurvedCategory<Q>> {
    too_many("objects", spec.objects.len(), 16)?;
    let basis = graded_basis(
        &spec
            .morphisms
            .iter()
            .map(|m| VectorSpec {
                name: m.name.clone(),
                degree: m.degree,
            })
            .collect::<Vec<_>>(),
    )?;
    let ends = spec
        .morphisms
        .iter()
        .map(|m| {
            Ok((
                object_index(&spec.objects, &m.from)?,
                object_index(&spec.objects, &m.to)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, o) in spec.objects.iter().enumerate() {
        if o.is_empty() || spec.objects[..i].contains(o) {
            return Err(Error::InvalidStructure(format!(
                "duplicate or empty object name `{o}`"
            )));
        }
    }
    let mu = operations(
        &spec.operations,
        &basis,
        &basis,
        ring,
        Symmetry::None,
        |s| 2 - s as i32,
    )?;
    let curvature = per_object(&spec.objects, &basis, ring, &spec.curvature)?;
    CurvedCategory::new(
        ring.clone(),
        spec.objects.clone(),
        basis,
        ends,
        mu,
        curvature,
    )
}

pub fn category(spec: &AinfSpec) -> Result<CurvedCategory<Q>> {
    category_over(spec, &ring_or_ground(&spec.ring)?)
}

pub fn functor(spec: &FunctorSpec) -> Result<CurvedFunctor<Q>> {
    if spec.source.ring != spec.target.ring {
        return Err(Error::RingMismatch);
    }
    let ring = ring_or_ground(&spec.source.ring)?;
    let source = category_over(&spec.source, &ring)?;
    let target = category_over(&spec.target, &ring)?;
    let mut object_map = Vec::new();
    for o in source.objects() {
        let t = spec
            .object_map
            .get(o)
            .ok_or_else(|| Error::InvalidStructure(format!("object `{o}` is not mapped")))?;
        object_map.push(object_index(target.objects(), t)?);
    }
    for o in spec.object_map.keys() {
        object_index(source.objects(), o)?;
    }
    let components = operations(
        &spec.components,
        source.basis(),
        target.basis(),
        &ring,
        Symmetry::None,
        |s| 1 - s as i32,
    )?;
    let zeroth = per_object(source.objects(), target.basis(), &ring, &spec.zeroth)?;
    CurvedFunctor::new(source, target, object_map, components, zeroth)
}

pub struct McData {
    pub algebra: LInfinityAlgebra<Q>,
    pub ring: Arc<LocalRing<Q>>,
    pub value: Element<Q>,
    pub gamma: Option<GaugePath<Q>>,
    pub target: Option<Element<Q>>,
}

pub fn mc(spec: &McSpec) -> Result<McData> {
    let algebra = linf(&spec.algebra)?;
    let ring = ring(&spec.ring)?;
    let value = element(algebra.basis(), &ring, &spec.value)?;
    too_many("gauge path coefficients", spec.gamma.len(), 8)?;
    let gamma = if spec.gamma.is_empty() {
        None
    } else {
        let components = spec
            .gamma
            .iter()
            .map(|c| element(algebra.basis(), &ring, c))
            .collect::<Result<Vec<_>>>()?;
        Some(GaugePath { components })
    };
    let target = spec
        .target
        .as_ref()
        .map(|t| element(algebra.basis(), &ring, t))
        .transpose()?;
    Ok(McData {
        algebra,
        ring,
        value,
        gamma,
        target,
    })
}

pub struct CochainData {
    pub category: CurvedCategory<Q>,
    pub ring: Arc<LocalRing<Q>>,
    pub cochain: HochschildCochain<Q>,
}

pub fn cochain(spec: &CochainSpec) -> Result<CochainData> {
    if spec.category.ring.is_some() {
        return Err(Error::InvalidStructure(
            "the category of a cochain lives over the ground field".into(),
        ));
    }
    let category = category(&spec.category)?;
    let ring = ring(&spec.ring)?;
    let d = spec.degree;
    if !(-16..=16).contains(&d) {
        return Err(Error::Limit(format!("cochain degree {d}")));
    }
    let components = operations(
        &spec.components,
        category.basis(),
        category.basis(),
        &ring,
        Symmetry::None,
        |s| d - s as i32,
    )?;
    let zeroth = per_object(category.objects(), category.basis(), &ring, &spec.zeroth)?;
    Ok(CochainData {
        category,
        ring,
        cochain: HochschildCochain {
            degree: d,
            zeroth,
            components,
            cap: None,
        },
    })
}

pub fn cone(spec: &ConeSpec) -> Result<ConeMonoid> {
    ConeMonoid::with_names(
        spec.rank,
        spec.generators.clone(),
        spec.names.clone(),
        spec.inequalities.clone(),
    )
}

/// Values by generator name, zero where absent.
fn generator_values(c: &ConeMonoid, values: &BTreeMap<String, String>) -> Result<Vec<Q>> {
    for n in values.keys() {
        object_index(c.names(), n)?;
    }
    c.names()
        .iter()
        .map(|n| {
            values
                .get(n)
                .map_or(Ok(Q::from_integer(0.into())), |v| rational(v))
        })
        .collect()
}

pub fn point(c: &ConeMonoid, spec: &PointSpec) -> Result<LambdaPoint> {
    let omega = generator_values(c, &spec.omega)?;
    let b = generator_values(c, &spec.b_field)?;
    LambdaPoint::from_generator_values(c, &omega, &b)
}

/// `"u:3,v:1/2"` into a map.
pub fn assignments(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `name:value`, got `{part}`")))?;
        if out
            .insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(Error::Parse(format!("`{}` assigned twice", k.trim())));
        }
    }
    Ok(out)
}
