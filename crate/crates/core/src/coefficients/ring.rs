//! Truncated complete local rings `k[[x_1..x_n]] / (I + F_{N+1})` where
//! `F_{N+1}` is spanned by monomials of weighted degree above `N`.
//!
//! The quotient is finite dimensional, so the ideal is computed once as a
//! row-echelon basis of the span of `m * g` (monomial multiples of the
//! relations). Pivots are the leading terms for the local order of
//! [`Monomial`], which is what makes the weight of a normal form agree with
//! the filtration: the normal form of an element of `m^k` has no terms of
//! weight below `k`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Bound::{Excluded, Unbounded};
use std::sync::Arc;

use num_rational::BigRational;

use super::poly::{format_terms, monomials_up_to, Monomial, RawPolynomial};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const MAX_VARIABLES: usize = 12;
pub const MAX_TRUNCATION: u32 = 40;
pub const MAX_MONOMIALS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub weight: u32,
}

pub struct LocalRing<F: Scalar> {
    variables: Vec<Variable>,
    weights: Vec<u32>,
    names: Vec<String>,
    relations: Vec<RawPolynomial<F>>,
    truncation: u32,
    /// Echelon rows keyed by leading monomial; the leading coefficient is one
    /// and is omitted from the stored tail.
    pivots: BTreeMap<Monomial, Vec<(Monomial, F)>>,
    cotangent: Cotangent<F>,
}

/// `m / (m^2 + I)`: reduced linear parts of the relations and the surviving
/// variables.
#[derive(Clone, Debug)]
struct Cotangent<F: Scalar> {
    rows: Vec<(usize, Vec<F>)>,
    free: Vec<usize>,
}

impl<F: Scalar> fmt::Debug for LocalRing<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalRing")
            .field("variables", &self.variables)
            .field("relations", &self.relation_texts())
            .field("truncation", &self.truncation)
            .finish()
    }
}

impl<F: Scalar> PartialEq for LocalRing<F> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.variables == other.variables
                && self.truncation == other.truncation
                && self.pivots == other.pivots)
    }
}

impl<F: Scalar> Eq for LocalRing<F> {}

impl<F: Scalar> LocalRing<F> {
    /// Builds the ring and its normal-form data.
    pub fn new(
        variables: Vec<Variable>,
        relations: Vec<RawPolynomial<F>>,
        truncation: u32,
    ) -> Result<Arc<Self>> {
        if truncation < 1 {
            return Err(Error::BadTruncation(truncation));
        }
        if truncation > MAX_TRUNCATION {
            return Err(Error::Limit(format!(
                "truncation order {truncation} > {MAX_TRUNCATION}"
            )));
        }
        if variables.len() > MAX_VARIABLES {
            return Err(Error::Limit(format!(
                "{} variables > {MAX_VARIABLES}",
                variables.len()
            )));
        }
        for (i, v) in variables.iter().enumerate() {
            if v.weight == 0 || v.weight > truncation {
                return Err(Error::BadWeight(format!(
                    "{} has weight {}",
                    v.name, v.weight
                )));
            }
            if v.name.is_empty() || variables[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::BadWeight(format!(
                    "duplicate or empty variable name `{}`",
                    v.name
                )));
            }
        }
        let weights: Vec<u32> = variables.iter().map(|v| v.weight).collect();
        let names: Vec<String> = variables.iter().map(|v| v.name.clone()).collect();
        let mut relations_clean = Vec::new();
        for rel in relations {
            if rel.iter().any(|(e, _)| e.len() != variables.len()) {
                return Err(Error::LengthMismatch("relation exponent vector".into()));
            }
            let rel: RawPolynomial<F> = rel.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            if rel.iter().any(|(e, _)| e.iter().all(|&x| x == 0)) {
                let text = format_terms(rel.iter().map(|(e, c)| (e.as_slice(), c)), &names);
                return Err(Error::RelationHasUnit(text));
            }
            relations_clean.push(rel);
        }
        let all = monomials_up_to(&weights, truncation);
        if all.len() > MAX_MONOMIALS {
            return Err(Error::Limit(format!(
                "{} monomials > {MAX_MONOMIALS}",
                all.len()
            )));
        }
        let mut ring = LocalRing {
            variables,
            weights,
            names,
            relations: relations_clean,
            truncation,
            pivots: BTreeMap::new(),
            cotangent: Cotangent {
                rows: Vec::new(),
                free: Vec::new(),
            },
        };
        ring.build_ideal(&all);
        ring.build_cotangent();
        Ok(Arc::new(ring))
    }

    /// The ground field viewed as a local ring with no variables.
    pub fn ground() -> Arc<Self> {
        Self::new(Vec::new(), Vec::new(), 1).expect("ground ring")
    }

    /// Power series ring in variables of weight one.
    pub fn power_series(names: &[&str], truncation: u32) -> Result<Arc<Self>> {
        let vars = names
            .iter()
            .map(|n| Variable {
                name: n.to_string(),
                weight: 1,
            })
            .collect();
        Self::new(vars, Vec::new(), truncation)
    }

    fn build_ideal(&mut self, all: &[Monomial]) {
        let n = self.truncation;
        let relations = self.relations.clone();
        for rel in &relations {
            let terms: Vec<(Monomial, F)> = rel
                .iter()
                .map(|(e, c)| (Monomial::new(e.clone(), &self.weights), c.clone()))
                .collect();
            let low = terms.iter().map(|(m, _)| m.weight()).min().unwrap_or(0);
            for m in all {
                if m.weight() + low > n {
                    continue;
                }
                let mut row = BTreeMap::new();
                for (t, c) in &terms {
                    let p = m.mul(t);
                    if p.weight() <= n {
                        row.insert(p, c.clone());
                    }
                }
                self.insert_row(row);
            }
        }
    }

    fn insert_row(&mut self, row: BTreeMap<Monomial, F>) {
        let row = self.reduce_terms(row);
        let Some((lead, lc)) = row.iter().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return;
        };
        let inv = lc.inv().expect("nonzero leading coefficient");
        let tail = row
            .into_iter()
            .skip(1)
            .map(|(m, c)| (m, c * inv.clone()))
            .collect();
        self.pivots.insert(lead, tail);
    }

    fn build_cotangent(&mut self) {
        let nv = self.variables.len();
        let linear: Vec<Vec<F>> = self
            .relations
            .iter()
            .map(|rel| {
                let mut v = vec![F::zero(); nv];
                for (e, c) in rel {
                    if e.iter().sum::<u32>() == 1 {
                        let i = e.iter().position(|&x| x == 1).unwrap();
                        v[i] = c.clone();
                    }
                }
                v
            })
            .collect();
        if linear.is_empty() || nv == 0 {
            self.cotangent = Cotangent {
                rows: Vec::new(),
                free: (0..nv).collect(),
            };
            return;
        }
        let ech = Matrix::from_rows(linear).echelon();
        let rows = ech
            .pivots
            .iter()
            .enumerate()
            .map(|(r, &p)| (p, ech.reduced.row(r).to_vec()))
            .collect();
        let free = (0..nv).filter(|c| !ech.pivots.contains(c)).collect();
        self.cotangent = Cotangent { rows, free };
    }

    /// Reduces a term map to normal form (drops terms above the truncation).
    fn reduce_terms(&self, mut terms: BTreeMap<Monomial, F>) -> BTreeMap<Monomial, F> {
        terms.retain(|m, c| m.weight() <= self.truncation && !c.is_zero());
        if self.pivots.is_empty() {
            return terms;
        }
        let mut cursor: Option<Monomial> = None;
        loop {
            let next = match &cursor {
                None => terms.keys().next().cloned(),
                Some(c) => terms
                    .range((Excluded(c.clone()), Unbounded))
                    .next()
                    .map(|(k, _)| k.clone()),
            };
            let Some(m) = next else { break };
            match self.pivots.get(&m) {
                Some(tail) => {
                    let c = terms.remove(&m).unwrap();
                    for (t, v) in tail {
                        add_term(&mut terms, t.clone(), -(c.clone() * v.clone()));
                    }
                }
                None => cursor = Some(m),
            }
        }
        terms
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn relations(&self) -> &[RawPolynomial<F>] {
        &self.relations
    }

    pub fn has_relations(&self) -> bool {
        !self.relations.is_empty()
    }

    pub fn relation_texts(&self) -> Vec<String> {
        self.relations
            .iter()
            .map(|rel| {
                let mut terms: Vec<(Monomial, &F)> = rel
                    .iter()
                    .map(|(e, c)| (Monomial::new(e.clone(), &self.weights), c))
                    .collect();
                terms.sort_by(|a, b| a.0.cmp(&b.0));
                format_terms(terms.iter().map(|(m, c)| (m.exps(), *c)), &self.names)
            })
            .collect()
    }

    /// Monomials not reducible by the ideal: a vector-space basis of the ring.
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        monomials_up_to(&self.weights, self.truncation)
            .into_iter()
            .filter(|m| !self.pivots.contains_key(m))
            .collect()
    }

    pub fn monomial_of(&self, exps: Vec<u32>) -> Monomial {
        Monomial::new(exps, &self.weights)
    }

    /// Variables indexing a basis of `m / (m^2 + I)`.
    pub fn cotangent_variables(&self) -> &[usize] {
        &self.cotangent.free
    }
}

fn add_term<F: Scalar>(terms: &mut BTreeMap<Monomial, F>, m: Monomial, c: F) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get().clone() + c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// Element of a [`LocalRing`] in normal form.
#[derive(Clone)]
pub struct SeriesElement<F: Scalar> {
    ring: Arc<LocalRing<F>>,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> PartialEq for SeriesElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
    }
}

impl<F: Scalar> fmt::Debug for SeriesElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<F: Scalar> fmt::Display for SeriesElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn same_ring<F: Scalar>(a: &Arc<LocalRing<F>>, b: &Arc<LocalRing<F>>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<F: Scalar> SeriesElement<F> {
    pub fn zero(ring: &Arc<LocalRing<F>>) -> Self {
        SeriesElement {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<LocalRing<F>>, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.nvars()), c);
        }
        SeriesElement {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn one(ring: &Arc<LocalRing<F>>) -> Self {
        Self::constant(ring, F::one())
    }

    pub fn variable(ring: &Arc<LocalRing<F>>, index: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[index] = 1;
        Self::monomial(ring, e, F::one())
    }

    pub fn variable_named(ring: &Arc<LocalRing<F>>, name: &str) -> Result<Self> {
        let i = ring
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))?;
        Ok(Self::variable(ring, i))
    }

    pub fn monomial(ring: &Arc<LocalRing<F>>, exps: Vec<u32>, c: F) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(ring.monomial_of(exps), c);
        Self::from_terms(ring, terms)
    }

    pub fn from_raw(ring: &Arc<LocalRing<F>>, poly: &RawPolynomial<F>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, c) in poly {
            if e.len() != ring.nvars() {
                return Err(Error::LengthMismatch("exponent vector".into()));
            }
            add_term(&mut terms, ring.monomial_of(e.clone()), c.clone());
        }
        Ok(Self::from_terms(ring, terms))
    }

    /// Normalizes an arbitrary term map.
    pub fn from_terms(ring: &Arc<LocalRing<F>>, terms: BTreeMap<Monomial, F>) -> Self {
        SeriesElement {
            ring: ring.clone(),
            terms: ring.reduce_terms(terms),
        }
    }

    /// Transports terms into `ring` through a map on exponent vectors;
    /// terms mapped to `None` are dropped.
    pub fn reembed(
        &self,
        ring: &Arc<LocalRing<F>>,
        f: impl Fn(&[u32]) -> Option<Vec<u32>>,
    ) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some(e) = f(m.exps()) {
                add_term(&mut terms, ring.monomial_of(e), c.clone());
            }
        }
        Self::from_terms(ring, terms)
    }

    /// Parses the text syntax of [`super::poly`] over this ring.
    pub fn parse(ring: &Arc<LocalRing<F>>, text: &str) -> Result<Self> {
        let raw = super::poly::parse_polynomial(text, ring.names())?;
        let raw: RawPolynomial<F> = raw
            .into_iter()
            .map(|(e, c)| (e, F::from_rational(&c)))
            .collect();
        Self::from_raw(ring, &raw)
    }

    pub fn ring(&self) -> &Arc<LocalRing<F>> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> F {
        self.terms
            .iter()
            .next()
            .filter(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(F::zero)
    }

    pub fn in_max_ideal(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Lowest weight of a term; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::weight)
    }

    /// Terms of weight exactly `k`.
    pub fn weight_part(&self, k: u32) -> Self {
        SeriesElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops all terms of weight above `k`.
    pub fn truncated(&self, k: u32) -> Self {
        SeriesElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() <= k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        SeriesElement {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SeriesElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        SeriesElement {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(self.mul(other))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(same_ring(&self.ring, &other.ring), "ring mismatch");
        let n = self.ring.truncation;
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.weight() + mb.weight() > n {
                    // terms are sorted by weight
                    break;
                }
                add_term(&mut terms, ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Self::from_terms(&self.ring, terms)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Two-sided inverse modulo the truncation.
    pub fn invert(&self) -> Result<Self> {
        let c = self.constant_term();
        let c_inv = c.inv().ok_or(Error::NotAUnit)?;
        // self = c (1 - u) with u in m; inverse = c^-1 sum u^k
        let u = Self::one(&self.ring).sub(&self.scale(&c_inv));
        let mut acc = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        for _ in 0..self.ring.truncation {
            power = power.mul(&u);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&c_inv))
    }

    /// Embeds a constant-only element of another ring (typically the ground
    /// ring) into `ring`.
    pub fn embed_constant(&self, ring: &Arc<LocalRing<F>>) -> Self {
        if same_ring(&self.ring, ring) {
            return self.clone();
        }
        debug_assert!(
            self.terms.keys().all(Monomial::is_one),
            "embedding a nonconstant element"
        );
        Self::constant(ring, self.constant_term())
    }

    /// Class in `m / (m^2 + I)`, in coordinates of [`LocalRing::cotangent_variables`].
    pub fn cotangent_coordinates(&self) -> Vec<F> {
        let nv = self.ring.nvars();
        let mut v = vec![F::zero(); nv];
        for (m, c) in &self.terms {
            if m.degree() == 1 {
                let i = m.exps().iter().position(|&x| x == 1).unwrap();
                v[i] = c.clone();
            }
        }
        for (p, row) in &self.ring.cotangent.rows {
            let f = v[*p].clone();
            if !f.is_zero() {
                for (j, r) in row.iter().enumerate() {
                    v[j] = v[j].clone() - f.clone() * r.clone();
                }
            }
        }
        self.ring
            .cotangent
            .free
            .iter()
            .map(|&i| v[i].clone())
            .collect()
    }

    pub fn to_text(&self) -> String {
        format_terms(
            self.terms.iter().map(|(m, c)| (m.exps(), c)),
            &self.ring.names,
        )
    }
}

/// A local homomorphism given by images of the source variables.
#[derive(Clone, Debug)]
pub struct RingMap<F: Scalar> {
    source: Arc<LocalRing<F>>,
    target: Arc<LocalRing<F>>,
    images: Vec<SeriesElement<F>>,
}

impl<F: Scalar> RingMap<F> {
    pub fn new(
        source: &Arc<LocalRing<F>>,
        target: &Arc<LocalRing<F>>,
        images: Vec<SeriesElement<F>>,
    ) -> Result<Self> {
        if images.len() != source.nvars() {
            return Err(Error::LengthMismatch(format!(
                "ring map needs {} images, got {}",
                source.nvars(),
                images.len()
            )));
        }
        for (img, var) in images.iter().zip(source.variables()) {
            if !same_ring(img.ring(), target) {
                return Err(Error::RingMismatch);
            }
            if !img.in_max_ideal() {
                return Err(Error::RingMapIllDefined(format!(
                    "image of {} is not in the maximal ideal",
                    var.name
                )));
            }
        }
        let map = RingMap {
            source: source.clone(),
            target: target.clone(),
            images,
        };
        // Truncation compatibility: every monomial of weight above the source
        // truncation must land above the target truncation.
        let ratio_ok =
            map.images
                .iter()
                .zip(source.weights())
                .all(|(img, &w)| match img.valuation() {
                    None => true,
                    Some(v) => {
                        // v / w * (N_s + 1) > N_t
                        u64::from(v) * u64::from(source.truncation() + 1)
                            > u64::from(w) * u64::from(target.truncation())
                    }
                });
        if !ratio_ok {
            return Err(Error::RingMapIllDefined(
                "source truncation does not map into the target truncation".into(),
            ));
        }
        for (rel, text) in source.relations().iter().zip(source.relation_texts()) {
            if !map.apply_raw(rel).is_zero() {
                return Err(Error::RingMapIllDefined(format!(
                    "relation {text} does not map to zero"
                )));
            }
        }
        Ok(map)
    }

    pub fn identity(ring: &Arc<LocalRing<F>>) -> Self {
        let images = (0..ring.nvars())
            .map(|i| SeriesElement::variable(ring, i))
            .collect();
        RingMap {
            source: ring.clone(),
            target: ring.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Arc<LocalRing<F>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LocalRing<F>> {
        &self.target
    }

    pub fn images(&self) -> &[SeriesElement<F>] {
        &self.images
    }

    fn apply_exps(
        &self,
        exps: &[u32],
        c: &F,
        cache: &mut BTreeMap<(usize, u32), SeriesElement<F>>,
    ) -> SeriesElement<F> {
        let mut acc = SeriesElement::constant(&self.target, c.clone());
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 || acc.is_zero() {
                continue;
            }
            let p = cache
                .entry((i, e))
                .or_insert_with(|| self.images[i].pow(e))
                .clone();
            acc = acc.mul(&p);
        }
        acc
    }

    fn apply_raw(&self, poly: &RawPolynomial<F>) -> SeriesElement<F> {
        let mut cache = BTreeMap::new();
        poly.iter()
            .fold(SeriesElement::zero(&self.target), |acc, (e, c)| {
                acc.add(&self.apply_exps(e, c, &mut cache))
            })
    }

    pub fn apply(&self, x: &SeriesElement<F>) -> Result<SeriesElement<F>> {
        if !same_ring(x.ring(), &self.source) {
            // constants of the ground ring embed into any target
            if x.terms().keys().all(Monomial::is_one) {
                return Ok(SeriesElement::constant(&self.target, x.constant_term()));
            }
            return Err(Error::RingMismatch);
        }
        let mut cache = BTreeMap::new();
        Ok(x.terms()
            .iter()
            .fold(SeriesElement::zero(&self.target), |acc, (m, c)| {
                acc.add(&self.apply_exps(m.exps(), c, &mut cache))
            }))
    }

    pub fn compose(&self, after: &RingMap<F>) -> Result<RingMap<F>> {
        // after ∘ self
        let images = self
            .images
            .iter()
            .map(|i| after.apply(i))
            .collect::<Result<Vec<_>>>()?;
        RingMap::new(&self.source, &after.target, images)
    }

    pub fn describe(&self) -> Vec<(String, String)> {
        self.source
            .names()
            .iter()
            .zip(&self.images)
            .map(|(n, i)| (n.clone(), i.to_text()))
            .collect()
    }
}

/// Convenience: a ring over the rationals from text relations.
pub fn make_local_ring(
    variables: &[(&str, u32)],
    relations: &[&str],
    truncation: u32,
) -> Result<Arc<LocalRing<BigRational>>> {
    let vars: Vec<Variable> = variables
        .iter()
        .map(|(n, w)| Variable {
            name: n.to_string(),
            weight: *w,
        })
        .collect();
    let names: Vec<String> = vars.iter().map(|v| v.name.clone()).collect();
    let rels = relations
        .iter()
        .map(|r| super::poly::parse_polynomial(r, &names))
        .collect::<Result<Vec<_>>>()?;
    LocalRing::new(vars, rels, truncation)
}
