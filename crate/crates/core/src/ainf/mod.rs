//! Curved A-infinity categories over a truncated local ring.
//!
//! All morphisms of a category live in one graded basis; each basis vector
//! carries its source and target object. Structure maps are stored on
//! composable basis tuples only. The relation sign is
//! `(-1)^(|a_1| + .. + |a_i| + i)`, functors carry that sign on the left
//! side and none on the right.

mod bc;
mod iso;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use bc::{
    ainf_mc_residual, bc_category, bc_functor, quasi_embedding_report, solve_bounding_cochain,
    solve_bounding_cochain_shifted, BcOutcome, BoundingCochain, EmbeddingReport,
};
pub use iso::{compose, invert_iso, transport_structure};

use crate::coefficients::ring::{same_ring, LocalRing, RingMap};
use crate::error::{Error, Result};
use crate::graded::{Element, GradedBasis, MultilinearOperation, Symmetry, MAX_ARITY};
use crate::linf::{Finding, RelationReport};
use crate::scalar::Scalar;

/// Composable tuples are enumerated explicitly; arities with more than this
/// many tuples are reported as unchecked.
pub const MAX_CHAINS: u128 = 200_000;

#[derive(Clone, Debug, PartialEq)]
pub struct CurvedCategory<F: Scalar> {
    ring: Arc<LocalRing<F>>,
    objects: Vec<String>,
    basis: GradedBasis,
    ends: Vec<(usize, usize)>,
    mu: BTreeMap<usize, MultilinearOperation<F>>,
    curvature: BTreeMap<usize, Element<F>>,
    /// Operations above this arity are unknown rather than zero.
    arity_cap: Option<usize>,
}

/// A composable word: `objects[k]` is the source of `arrows[k]` and
/// `objects[k + 1]` its target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

fn check_ring<F: Scalar>(ring: &Arc<LocalRing<F>>, e: &Element<F>) -> Result<Element<F>> {
    if e.ring().nvars() == 0 || same_ring(e.ring(), ring) {
        Ok(e.over(ring))
    } else {
        Err(Error::RingMismatch)
    }
}

/// Ground values move into `ring`; values over a larger ring stay there.
fn lift<F: Scalar>(e: Element<F>, ring: &Arc<LocalRing<F>>) -> Element<F> {
    if e.ring().nvars() == 0 {
        e.over(ring)
    } else {
        e
    }
}

impl<F: Scalar> CurvedCategory<F> {
    pub fn new(
        ring: Arc<LocalRing<F>>,
        objects: Vec<String>,
        basis: GradedBasis,
        ends: Vec<(usize, usize)>,
        mu: BTreeMap<usize, MultilinearOperation<F>>,
        curvature: BTreeMap<usize, Element<F>>,
    ) -> Result<Self> {
        if ends.len() != basis.len() {
            return Err(Error::LengthMismatch(format!(
                "{} basis vectors, {} end pairs",
                basis.len(),
                ends.len()
            )));
        }
        if ends
            .iter()
            .any(|&(a, b)| a >= objects.len() || b >= objects.len())
        {
            return Err(Error::InvalidStructure("morphism end out of range".into()));
        }
        let mut cat = CurvedCategory {
            ring: ring.clone(),
            objects,
            basis,
            ends,
            mu: BTreeMap::new(),
            curvature: BTreeMap::new(),
            arity_cap: None,
        };
        for (s, op) in mu {
            if s == 0 || s > MAX_ARITY || op.arity != s {
                return Err(Error::InvalidStructure(format!(
                    "mu{s}: bad arity (cap {MAX_ARITY})"
                )));
            }
            if op.degree != 2 - s as i32 || op.symmetry != Symmetry::None {
                return Err(Error::InvalidStructure(format!(
                    "mu{s} must have degree {} and no symmetry",
                    2 - s as i32
                )));
            }
            let mut clean = MultilinearOperation::new(s, op.degree, Symmetry::None);
            for (t, v) in op.entries() {
                let v = check_ring(&ring, v)?;
                cat.check_value(&format!("mu{s}"), t, &v, op.degree)?;
                clean.insert_raw(t.clone(), v);
            }
            if !clean.is_zero() {
                cat.mu.insert(s, clean);
            }
        }
        for (obj, v) in curvature {
            if obj >= cat.objects.len() {
                return Err(Error::InvalidStructure(
                    "curvature object out of range".into(),
                ));
            }
            let v = check_ring(&ring, &v)?;
            if v.is_zero() {
                continue;
            }
            if !cat.in_hom(&v, obj, obj) || !v.is_homogeneous_of(&cat.basis, 2) {
                return Err(Error::InvalidStructure(format!(
                    "curvature of {} must lie in hom^2({0}, {0})",
                    cat.objects[obj]
                )));
            }
            if !v.constant_part().is_empty() {
                return Err(Error::ConstantTermPresent(format!(
                    "curvature of {}",
                    cat.objects[obj]
                )));
            }
            cat.curvature.insert(obj, v);
        }
        Ok(cat)
    }

    /// Checks that `value` is a legal entry at composable tuple `t`.
    fn check_value(&self, what: &str, t: &[usize], value: &Element<F>, degree: i32) -> Result<()> {
        let chain = self.chain_of(t).ok_or_else(|| {
            Error::InvalidStructure(format!(
                "{what}: tuple {} is not composable",
                self.tuple_text(t)
            ))
        })?;
        let (a, b) = (chain.objects[0], *chain.objects.last().unwrap());
        if !self.in_hom(value, a, b) {
            return Err(Error::InvalidStructure(format!(
                "{what}{}: value must lie in hom({}, {})",
                self.tuple_text(t),
                self.objects[a],
                self.objects[b]
            )));
        }
        let d: i32 = t.iter().map(|&i| self.basis.degree(i)).sum::<i32>() + degree;
        if !value.is_homogeneous_of(&self.basis, d) {
            return Err(Error::InvalidStructure(format!(
                "{what}{}: degree law violated",
                self.tuple_text(t)
            )));
        }
        Ok(())
    }

    pub(crate) fn with_cap(mut self, cap: Option<usize>) -> Self {
        self.arity_cap = cap;
        self
    }

    pub fn ring(&self) -> &Arc<LocalRing<F>> {
        &self.ring
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn ends(&self) -> &[(usize, usize)] {
        &self.ends
    }

    pub fn mu(&self) -> &BTreeMap<usize, MultilinearOperation<F>> {
        &self.mu
    }

    pub fn curvature(&self) -> &BTreeMap<usize, Element<F>> {
        &self.curvature
    }

    pub fn arity_cap(&self) -> Option<usize> {
        self.arity_cap
    }

    pub fn is_curved(&self) -> bool {
        !self.curvature.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.mu.keys().copied().max().unwrap_or(0)
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }

    /// Basis indices of `hom(a, b)`.
    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.ends[i] == (a, b))
            .collect()
    }

    pub fn in_hom(&self, e: &Element<F>, a: usize, b: usize) -> bool {
        e.terms().keys().all(|&i| self.ends[i] == (a, b))
    }

    pub(crate) fn tuple_text(&self, t: &[usize]) -> String {
        crate::linf::tuple_names(&self.basis, t)
    }

    pub fn chain_of(&self, t: &[usize]) -> Option<Chain> {
        let first = self.ends[*t.first()?].0;
        let mut objects = vec![first];
        for &i in t {
            let (a, b) = self.ends[i];
            if a != *objects.last().unwrap() {
                return None;
            }
            objects.push(b);
        }
        Some(Chain {
            objects,
            arrows: t.to_vec(),
        })
    }

    /// All composable chains of length `s` (one empty chain per object for `s = 0`).
    pub fn chains(&self, s: usize) -> Vec<Chain> {
        let mut out = Vec::new();
        for start in 0..self.objects.len() {
            let mut cur = Chain {
                objects: vec![start],
                arrows: Vec::new(),
            };
            self.extend_chains(s, &mut cur, &mut out);
        }
        out
    }

    fn extend_chains(&self, s: usize, cur: &mut Chain, out: &mut Vec<Chain>) {
        if cur.arrows.len() == s {
            out.push(cur.clone());
            return;
        }
        let at = *cur.objects.last().unwrap();
        for i in 0..self.basis.len() {
            if self.ends[i].0 == at {
                cur.arrows.push(i);
                cur.objects.push(self.ends[i].1);
                self.extend_chains(s, cur, out);
                cur.arrows.pop();
                cur.objects.pop();
            }
        }
    }

    pub fn chain_count(&self, s: usize) -> u128 {
        let n = self.objects.len();
        let mut counts = vec![1u128; n];
        for _ in 0..s {
            let mut next = vec![0u128; n];
            for &(a, b) in &self.ends {
                next[a] = next[a].saturating_add(counts[b]);
            }
            counts = next;
        }
        counts.iter().fold(0u128, |acc, c| acc.saturating_add(*c))
    }

    /// `mu^j(args)`; for `j = 0` the curvature of `obj`.
    pub fn apply(&self, j: usize, args: &[&Element<F>], obj: usize) -> Result<Element<F>> {
        if j == 0 {
            return Ok(self
                .curvature
                .get(&obj)
                .cloned()
                .unwrap_or_else(|| Element::zero(&self.ring)));
        }
        match self.mu.get(&j) {
            Some(op) => Ok(lift(op.evaluate(args, &self.basis)?, &self.ring)),
            None => Ok(Element::zero(&self.ring)),
        }
    }

    fn reduced_degree(&self, e: &Element<F>) -> i32 {
        e.degree(&self.basis).map_or(0, |d| d + 1)
    }

    /// One application of the bar differential: every way of replacing a
    /// consecutive block `x_{i+1}..x_{i+j}` (possibly empty) by its `mu^j`,
    /// signed by the reduced degrees to its left.
    pub(crate) fn bar(
        &self,
        word: &[Element<F>],
        objs: &[usize],
    ) -> Result<Vec<(Vec<Element<F>>, Vec<usize>)>> {
        let m = word.len();
        let mut out = Vec::new();
        let mut left = 0;
        for i in 0..=m {
            for j in 0..=(m - i) {
                if j == 0 && !self.curvature.contains_key(&objs[i]) {
                    continue;
                }
                if j > 0 && !self.mu.contains_key(&j) {
                    continue;
                }
                let args: Vec<&Element<F>> = word[i..i + j].iter().collect();
                let mut inner = self.apply(j, &args, objs[i])?;
                if inner.is_zero() {
                    continue;
                }
                if left % 2 != 0 {
                    inner = inner.neg();
                }
                let mut w: Vec<Element<F>> = word[..i].to_vec();
                w.push(inner);
                w.extend_from_slice(&word[i + j..]);
                let mut o: Vec<usize> = objs[..=i].to_vec();
                o.extend_from_slice(&objs[i + j..]);
                out.push((w, o));
            }
            if i < m {
                left += self.reduced_degree(&word[i]);
            }
        }
        Ok(out)
    }

    /// Reduction modulo the maximal ideal: an uncurved category over the
    /// ground field.
    pub fn reduce_mod_max_ideal(&self) -> CurvedCategory<F> {
        let ground = LocalRing::ground();
        let mu = self
            .mu
            .iter()
            .map(|(s, op)| (*s, op.map_entries(|e| reduce(e, &ground))))
            .filter(|(_, op)| !op.is_zero())
            .collect();
        CurvedCategory {
            ring: ground,
            objects: self.objects.clone(),
            basis: self.basis.clone(),
            ends: self.ends.clone(),
            mu,
            curvature: BTreeMap::new(),
            arity_cap: self.arity_cap,
        }
    }

    /// The same structure with coefficients read in `ring` (for ground-field
    /// categories).
    pub fn extend_scalars(&self, ring: &Arc<LocalRing<F>>) -> Result<CurvedCategory<F>> {
        CurvedCategory::new(
            ring.clone(),
            self.objects.clone(),
            self.basis.clone(),
            self.ends.clone(),
            self.mu.clone(),
            self.curvature.clone(),
        )
        .map(|c| c.with_cap(self.arity_cap))
    }

    /// Coefficients pushed along `map`; the result lives over its target.
    pub fn pullback(&self, map: &RingMap<F>) -> Result<CurvedCategory<F>> {
        let ring = map.target().clone();
        let push = |e: &Element<F>| -> Result<Element<F>> {
            let terms = e
                .terms()
                .iter()
                .map(|(&i, c)| Ok((i, map.apply(c)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Element::from_terms(&ring, terms))
        };
        let mut mu = BTreeMap::new();
        for (s, op) in &self.mu {
            let mut out = MultilinearOperation::new(*s, op.degree, Symmetry::None);
            for (t, v) in op.entries() {
                out.insert_raw(t.clone(), push(v)?);
            }
            mu.insert(*s, out);
        }
        let curvature = self
            .curvature
            .iter()
            .map(|(o, v)| Ok((*o, push(v)?)))
            .collect::<Result<_>>()?;
        CurvedCategory::new(
            ring.clone(),
            self.objects.clone(),
            self.basis.clone(),
            self.ends.clone(),
            mu,
            curvature,
        )
        .map(|c| c.with_cap(self.arity_cap))
    }

    /// Same objects, basis and ends.
    pub fn same_shape(&self, other: &CurvedCategory<F>) -> bool {
        self.objects == other.objects && self.basis == other.basis && self.ends == other.ends
    }
}

pub(crate) fn reduce<F: Scalar>(e: &Element<F>, ground: &Arc<LocalRing<F>>) -> Element<F> {
    Element::from_terms(
        ground,
        e.constant_part()
            .into_iter()
            .map(|(i, c)| (i, crate::coefficients::SeriesElement::constant(ground, c))),
    )
}

/// Which arities up to `bound` can be checked exactly. A relation of arity
/// `s` needs operations up to arity `s + extra`.
fn checkable(cap: Option<usize>, s: usize, extra: usize) -> bool {
    s <= MAX_ARITY && cap.is_none_or(|c| s + extra <= c)
}

/// Checks the A-infinity relations on every composable basis tuple of length
/// at most `bound`, including the curvature terms.
pub fn check_ainf<F: Scalar>(a: &CurvedCategory<F>, bound: usize) -> Result<RelationReport> {
    let mut findings = Vec::new();
    let mut unchecked = Vec::new();
    let extra = usize::from(a.is_curved());
    let start = if a.is_curved() { 0 } else { 1 };
    for s in start..=bound {
        if !checkable(a.arity_cap, s, extra) || a.chain_count(s) > MAX_CHAINS {
            unchecked.push(s);
            continue;
        }
        for chain in a.chains(s) {
            let word: Vec<Element<F>> = chain
                .arrows
                .iter()
                .map(|&i| Element::basis(&a.ring, i))
                .collect();
            let mut total = Element::zero(&a.ring);
            for (w, o) in a.bar(&word, &chain.objects)? {
                let args: Vec<&Element<F>> = w.iter().collect();
                total = total.add(&a.apply(w.len(), &args, o[0])?);
            }
            if !total.is_zero() {
                findings.push(Finding {
                    location: chain_location(a, &chain),
                    detail: total.to_text(&a.basis),
                });
            }
        }
    }
    Ok(RelationReport {
        arity_bound: bound,
        unchecked,
        findings,
    })
}

pub(crate) fn chain_location<F: Scalar>(a: &CurvedCategory<F>, chain: &Chain) -> String {
    if chain.arrows.is_empty() {
        format!("arity 0 at {}", a.objects[chain.objects[0]])
    } else {
        format!(
            "arity {} at {}",
            chain.arrows.len(),
            a.tuple_text(&chain.arrows)
        )
    }
}

/// A curved functor: object map, components `F^s` for `s >= 1` (degree
/// `1 - s`) and `F^0` per source object (degree one, over `m`).
#[derive(Clone, Debug, PartialEq)]
pub struct CurvedFunctor<F: Scalar> {
    source: CurvedCategory<F>,
    target: CurvedCategory<F>,
    object_map: Vec<usize>,
    components: BTreeMap<usize, MultilinearOperation<F>>,
    zeroth: BTreeMap<usize, Element<F>>,
    arity_cap: Option<usize>,
}

impl<F: Scalar> CurvedFunctor<F> {
    pub fn new(
        source: CurvedCategory<F>,
        target: CurvedCategory<F>,
        object_map: Vec<usize>,
        components: BTreeMap<usize, MultilinearOperation<F>>,
        zeroth: BTreeMap<usize, Element<F>>,
    ) -> Result<Self> {
        if !same_ring(source.ring(), target.ring()) {
            return Err(Error::RingMismatch);
        }
        if object_map.len() != source.objects.len()
            || object_map.iter().any(|&o| o >= target.objects.len())
        {
            return Err(Error::InvalidStructure(
                "object map does not match the categories".into(),
            ));
        }
        let ring = source.ring.clone();
        let mut f = CurvedFunctor {
            source,
            target,
            object_map,
            components: BTreeMap::new(),
            zeroth: BTreeMap::new(),
            arity_cap: None,
        };
        for (s, op) in components {
            if s == 0 || s > MAX_ARITY || op.arity != s {
                return Err(Error::InvalidStructure(format!(
                    "F{s}: bad arity (cap {MAX_ARITY})"
                )));
            }
            if op.degree != 1 - s as i32 || op.symmetry != Symmetry::None {
                return Err(Error::InvalidStructure(format!(
                    "F{s} must have degree {} and no symmetry",
                    1 - s as i32
                )));
            }
            let mut clean = MultilinearOperation::new(s, op.degree, Symmetry::None);
            for (t, v) in op.entries() {
                let v = check_ring(&ring, v)?;
                let chain = f.source.chain_of(t).ok_or_else(|| {
                    Error::InvalidStructure(format!(
                        "F{s}: tuple {} is not composable",
                        f.source.tuple_text(t)
                    ))
                })?;
                let (a, b) = (
                    f.object_map[chain.objects[0]],
                    f.object_map[*chain.objects.last().unwrap()],
                );
                if !f.target.in_hom(&v, a, b) {
                    return Err(Error::InvalidStructure(format!(
                        "F{s}{}: value must lie in hom({}, {})",
                        f.source.tuple_text(t),
                        f.target.objects[a],
                        f.target.objects[b]
                    )));
                }
                let d: i32 = t.iter().map(|&i| f.source.basis.degree(i)).sum::<i32>() + op.degree;
                if !v.is_homogeneous_of(&f.target.basis, d) {
                    return Err(Error::InvalidStructure(format!(
                        "F{s}{}: degree law violated",
                        f.source.tuple_text(t)
                    )));
                }
                clean.insert_raw(t.clone(), v);
            }
            if !clean.is_zero() {
                f.components.insert(s, clean);
            }
        }
        for (obj, v) in zeroth {
            if obj >= f.object_map.len() {
                return Err(Error::InvalidStructure("F0 object out of range".into()));
            }
            let v = check_ring(&ring, &v)?;
            if v.is_zero() {
                continue;
            }
            let t = f.object_map[obj];
            if !f.target.in_hom(&v, t, t) || !v.is_homogeneous_of(&f.target.basis, 1) {
                return Err(Error::InvalidStructure(format!(
                    "F0 at {} must lie in hom^1 of its image",
                    f.source.objects[obj]
                )));
            }
            if !v.constant_part().is_empty() {
                return Err(Error::ConstantTermPresent(format!(
                    "F0 at {}",
                    f.source.objects[obj]
                )));
            }
            f.zeroth.insert(obj, v);
        }
        Ok(f)
    }

    pub fn identity(a: &CurvedCategory<F>) -> Self {
        let mut f1 = MultilinearOperation::new(1, 0, Symmetry::None);
        for i in 0..a.basis.len() {
            f1.insert_raw(vec![i], Element::basis(&a.ring, i));
        }
        CurvedFunctor {
            source: a.clone(),
            target: a.clone(),
            object_map: (0..a.objects.len()).collect(),
            components: [(1, f1)].into_iter().collect(),
            zeroth: BTreeMap::new(),
            arity_cap: None,
        }
    }

    pub(crate) fn with_cap(mut self, cap: Option<usize>) -> Self {
        self.arity_cap = cap;
        self
    }

    pub fn source(&self) -> &CurvedCategory<F> {
        &self.source
    }

    pub fn target(&self) -> &CurvedCategory<F> {
        &self.target
    }

    pub fn object_map(&self) -> &[usize] {
        &self.object_map
    }

    pub fn components(&self) -> &BTreeMap<usize, MultilinearOperation<F>> {
        &self.components
    }

    pub fn zeroth(&self) -> &BTreeMap<usize, Element<F>> {
        &self.zeroth
    }

    pub fn arity_cap(&self) -> Option<usize> {
        self.arity_cap
    }

    pub fn is_strict(&self) -> bool {
        self.zeroth.is_empty() && self.components.keys().all(|&s| s == 1)
    }

    pub fn max_arity(&self) -> usize {
        self.components.keys().copied().max().unwrap_or(0)
    }

    /// `F^j(args)`; for `j = 0` the value at `obj`.
    pub fn apply(&self, j: usize, args: &[&Element<F>], obj: usize) -> Result<Element<F>> {
        let ring = &self.source.ring;
        if j == 0 {
            return Ok(self
                .zeroth
                .get(&obj)
                .cloned()
                .unwrap_or_else(|| Element::zero(ring)));
        }
        match self.components.get(&j) {
            Some(op) => Ok(lift(op.evaluate(args, &self.source.basis)?, ring)),
            None => Ok(Element::zero(ring)),
        }
    }

    /// Every way of cutting `word` into consecutive blocks (empty blocks
    /// only where `F^0` is nonzero) and applying `F` to each block, with at
    /// most `max_blocks` blocks. Returns words in the target.
    pub(crate) fn hat(
        &self,
        word: &[Element<F>],
        objs: &[usize],
        max_blocks: usize,
    ) -> Result<Vec<(Vec<Element<F>>, Vec<usize>)>> {
        let s = word.len();
        let curved = !self.zeroth.is_empty();
        let n = self.source.ring.truncation() as usize;
        let mut out = Vec::new();
        let kmin = usize::from(s > 0);
        for k in kmin..=max_blocks {
            if !curved && k > s {
                break;
            }
            for comp in compositions(s, k, curved) {
                if comp.iter().filter(|&&c| c == 0).count() > n {
                    continue;
                }
                let mut pos = 0;
                let mut w = Vec::with_capacity(k);
                let mut o = vec![self.object_map[objs[0]]];
                let mut dead = false;
                for &len in &comp {
                    let args: Vec<&Element<F>> = word[pos..pos + len].iter().collect();
                    let v = self.apply(len, &args, objs[pos])?;
                    if v.is_zero() {
                        dead = true;
                        break;
                    }
                    w.push(v);
                    pos += len;
                    o.push(self.object_map[objs[pos]]);
                }
                if !dead {
                    out.push((w, o));
                }
            }
        }
        Ok(out)
    }

    /// Reduction modulo the maximal ideal.
    pub fn reduce_mod_max_ideal(&self) -> CurvedFunctor<F> {
        let ground = LocalRing::ground();
        let components = self
            .components
            .iter()
            .map(|(s, op)| (*s, op.map_entries(|e| reduce(e, &ground))))
            .filter(|(_, op)| !op.is_zero())
            .collect();
        CurvedFunctor {
            source: self.source.reduce_mod_max_ideal(),
            target: self.target.reduce_mod_max_ideal(),
            object_map: self.object_map.clone(),
            components,
            zeroth: BTreeMap::new(),
            arity_cap: self.arity_cap,
        }
    }
}

/// Ordered `k`-part compositions of `s`; parts may be zero if `zeros`.
pub(crate) fn compositions(s: usize, k: usize, zeros: bool) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in min..=left {
            cur.push(p);
            rec(left - p, parts - 1, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(s, k, usize::from(!zeros), &mut Vec::new(), &mut out);
    out
}

/// `sum F(b_A(w)) - sum mu_B(F^(w))` on one source chain.
pub(crate) fn functor_residual<F: Scalar>(
    f: &CurvedFunctor<F>,
    chain: &Chain,
) -> Result<Element<F>> {
    let (a, b) = (&f.source, &f.target);
    let word: Vec<Element<F>> = chain
        .arrows
        .iter()
        .map(|&i| Element::basis(&a.ring, i))
        .collect();
    let mut total = Element::zero(&a.ring);
    for (w, o) in a.bar(&word, &chain.objects)? {
        let args: Vec<&Element<F>> = w.iter().collect();
        total = total.add(&f.apply(w.len(), &args, o[0])?);
    }
    for (w, o) in f.hat(&word, &chain.objects, b.max_arity().max(1))? {
        let args: Vec<&Element<F>> = w.iter().collect();
        total = total.sub(&b.apply(w.len(), &args, o[0])?);
    }
    Ok(total)
}

/// Checks the functor equation on every composable source tuple of length
/// at most `bound`.
pub fn check_functor<F: Scalar>(f: &CurvedFunctor<F>, bound: usize) -> Result<RelationReport> {
    let a = &f.source;
    let b = &f.target;
    let mut findings = Vec::new();
    let mut unchecked = Vec::new();
    let extra = usize::from(a.is_curved());
    let start = if a.is_curved() || !f.zeroth.is_empty() || b.is_curved() {
        0
    } else {
        1
    };
    for s in start..=bound {
        if !checkable(f.arity_cap, s, extra)
            || !checkable(b.arity_cap, s, 0)
            || a.chain_count(s) > MAX_CHAINS
        {
            unchecked.push(s);
            continue;
        }
        for chain in a.chains(s) {
            let total = functor_residual(f, &chain)?;
            if !total.is_zero() {
                findings.push(Finding {
                    location: chain_location(a, &chain),
                    detail: total.to_text(&b.basis),
                });
            }
        }
    }
    Ok(RelationReport {
        arity_bound: bound,
        unchecked,
        findings,
    })
}
