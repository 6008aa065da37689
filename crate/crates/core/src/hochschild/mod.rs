//! Hochschild cochains of an uncurved ground-field category.
//!
//! A cochain of degree `d` has a length-zero part (one element of degree `d`
//! in each `hom(L, L)`) and components `phi^s` of degree `d - s` on
//! composable tuples. The complex is an infinite product over lengths; every
//! computation here works modulo cochains vanishing below a length cap, which
//! is a quotient complex because `mu^0 = 0` on the base.
//!
//! The bracket is the commutator of the composite
//! `(phi o psi)(a_1..a_n) = sum (-1)^(|psi|'(|a_1|' + .. + |a_i|')) phi(a_1..a_i, psi(..), ..)`
//! with primes denoting reduced degrees, so `[mu, mu] = 0` are the A-infinity
//! relations and `d = [mu, -]`.

mod family;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use family::{
    deformation_to_mc, family_ks_map, gauge_deformation, mc_to_deformation, versal_extension,
    DeformationFamily, ExtensionReport, FamilyKs, VersalExtension,
};

use crate::ainf::{CurvedCategory, MAX_CHAINS};
use crate::coefficients::ring::{LocalRing, SeriesElement};
use crate::coefficients::Monomial;
use crate::error::{Error, Result};
use crate::graded::{Element, MultilinearOperation, Symmetry};
use crate::linalg::{Matrix, Splitting};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct HochschildCochain<F: Scalar> {
    pub degree: i32,
    pub zeroth: BTreeMap<usize, Element<F>>,
    pub components: BTreeMap<usize, MultilinearOperation<F>>,
    /// Components above this length are unknown; `None` means every nonzero
    /// component is listed.
    pub cap: Option<usize>,
}

fn reduced(d: i32) -> i32 {
    d - 1
}

fn odd(n: i32) -> bool {
    n.rem_euclid(2) == 1
}

impl<F: Scalar> HochschildCochain<F> {
    pub fn zero(degree: i32) -> Self {
        HochschildCochain {
            degree,
            zeroth: BTreeMap::new(),
            components: BTreeMap::new(),
            cap: None,
        }
    }

    /// The structure maps of an uncurved category, as a degree-two cochain.
    pub fn structure(a: &CurvedCategory<F>) -> Self {
        HochschildCochain {
            degree: 2,
            zeroth: a.curvature().clone(),
            components: a.mu().clone(),
            cap: a.arity_cap(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zeroth.values().all(Element::is_zero)
            && self.components.values().all(MultilinearOperation::is_zero)
    }

    /// Longest nonzero component.
    pub fn length(&self) -> usize {
        self.components
            .iter()
            .filter(|(_, op)| !op.is_zero())
            .map(|(s, _)| *s)
            .max()
            .unwrap_or(0)
    }

    pub fn apply(
        &self,
        s: usize,
        args: &[&Element<F>],
        obj: usize,
        basis: &crate::graded::GradedBasis,
    ) -> Result<Option<Element<F>>> {
        if s == 0 {
            return Ok(self.zeroth.get(&obj).cloned());
        }
        match self.components.get(&s) {
            Some(op) => Ok(Some(op.evaluate(args, basis)?)),
            None => Ok(None),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::InvalidStructure(format!(
                "cannot add cochains of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (o, v) in &other.zeroth {
            let sum = out.zeroth.get(o).map_or_else(|| v.clone(), |x| x.add(v));
            out.zeroth.insert(*o, sum);
        }
        for (s, op) in &other.components {
            let entry = out
                .components
                .entry(*s)
                .or_insert_with(|| MultilinearOperation::new(*s, op.degree, Symmetry::None));
            for (t, v) in op.entries() {
                let sum = entry
                    .entries()
                    .get(t)
                    .map_or_else(|| v.clone(), |x| x.add(v));
                entry.insert_raw(t.clone(), sum);
            }
        }
        out.cap = min_cap(self.cap, other.cap);
        Ok(out.cleaned())
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, c: &SeriesElement<F>) -> Self {
        self.map(|e| e.scale(c))
    }

    pub fn map(&self, f: impl Fn(&Element<F>) -> Element<F>) -> Self {
        HochschildCochain {
            degree: self.degree,
            zeroth: self.zeroth.iter().map(|(o, v)| (*o, f(v))).collect(),
            components: self
                .components
                .iter()
                .map(|(s, op)| (*s, op.map_entries(&f)))
                .collect(),
            cap: self.cap,
        }
        .cleaned()
    }

    fn cleaned(mut self) -> Self {
        self.zeroth.retain(|_, v| !v.is_zero());
        self.components.retain(|_, op| !op.is_zero());
        self
    }

    /// Drops components above `cap` and records it.
    pub fn truncate(&self, cap: usize) -> Self {
        let mut out = self.clone();
        out.components.retain(|s, _| *s <= cap);
        out.cap = Some(out.cap.map_or(cap, |c| c.min(cap)));
        out
    }

    /// Coefficient of the monomial `m`, as a ground-field cochain.
    pub fn coefficient(&self, m: &Monomial) -> Self {
        let ground = LocalRing::ground();
        self.map(|e| {
            Element::from_terms(
                &ground,
                e.terms().iter().filter_map(|(&i, c)| {
                    c.terms()
                        .get(m)
                        .map(|x| (i, SeriesElement::constant(&ground, x.clone())))
                }),
            )
        })
    }

    pub fn weight_part(&self, k: u32) -> Self {
        self.map(|e| e.weight_part(k))
    }

    /// Monomials appearing in any coefficient.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut out: Vec<Monomial> = self
            .zeroth
            .values()
            .chain(
                self.components
                    .values()
                    .flat_map(|op| op.entries().values()),
            )
            .flat_map(|e| e.terms().values().flat_map(|c| c.terms().keys().cloned()))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

fn min_cap(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn check_base<F: Scalar>(a0: &CurvedCategory<F>) -> Result<()> {
    if a0.is_curved() {
        return Err(Error::InvalidStructure(
            "the Hochschild complex is taken on an uncurved category".into(),
        ));
    }
    Ok(())
}

/// `phi o psi` up to length `cap`.
pub fn composite<F: Scalar>(
    a0: &CurvedCategory<F>,
    phi: &HochschildCochain<F>,
    psi: &HochschildCochain<F>,
    cap: usize,
) -> Result<HochschildCochain<F>> {
    let degree = phi.degree + psi.degree - 1;
    let shift = reduced(psi.degree);
    let known = min_cap(
        phi.cap
            .map(|c| c.saturating_sub(usize::from(!psi.zeroth.is_empty()))),
        psi.cap,
    );
    let exact = known.is_none() && phi.length() + psi.length() <= cap + 1;
    let top = known.map_or(cap, |k| k.min(cap));
    let basis = a0.basis();
    let ring = phi
        .zeroth
        .values()
        .chain(psi.zeroth.values())
        .chain(
            phi.components
                .values()
                .chain(psi.components.values())
                .flat_map(|op| op.entries().values()),
        )
        .map(|e| e.ring().clone())
        .find(|r| r.nvars() > 0)
        .unwrap_or_else(LocalRing::ground);
    let mut out = HochschildCochain::zero(degree);
    for n in 0..=top {
        if a0.chain_count(n) > MAX_CHAINS {
            return Err(Error::Limit(format!(
                "too many composable tuples of length {n}"
            )));
        }
        let mut op = MultilinearOperation::new(n, degree - n as i32, Symmetry::None);
        for chain in a0.chains(n) {
            let word: Vec<Element<F>> = chain
                .arrows
                .iter()
                .map(|&i| Element::basis(&ring, i))
                .collect();
            let mut total = Element::zero(&ring);
            let mut left = 0;
            for i in 0..=n {
                for j in 0..=(n - i) {
                    let args: Vec<&Element<F>> = word[i..i + j].iter().collect();
                    let Some(inner) = psi.apply(j, &args, chain.objects[i], basis)? else {
                        continue;
                    };
                    if inner.is_zero() {
                        continue;
                    }
                    let mut outer: Vec<&Element<F>> = word[..i].iter().collect();
                    outer.push(&inner);
                    outer.extend(word[i + j..].iter());
                    let Some(mut v) = phi.apply(outer.len(), &outer, chain.objects[0], basis)?
                    else {
                        continue;
                    };
                    if odd(shift * left) {
                        v = v.neg();
                    }
                    total = total.add(&v);
                }
                if i < n {
                    left += basis.degree(chain.arrows[i]) + 1;
                }
            }
            if total.is_zero() {
                continue;
            }
            if n == 0 {
                out.zeroth.insert(chain.objects[0], total);
            } else {
                op.insert_raw(chain.arrows.clone(), total);
            }
        }
        if n > 0 && !op.is_zero() {
            out.components.insert(n, op);
        }
    }
    out.cap = if exact { None } else { Some(top) };
    Ok(out)
}

/// `[phi, psi] = phi o psi - (-1)^(|phi|'|psi|') psi o phi`.
pub fn gerstenhaber_bracket<F: Scalar>(
    a0: &CurvedCategory<F>,
    phi: &HochschildCochain<F>,
    psi: &HochschildCochain<F>,
    cap: usize,
) -> Result<HochschildCochain<F>> {
    let first = composite(a0, phi, psi, cap)?;
    let mut second = composite(a0, psi, phi, cap)?;
    if !odd(reduced(phi.degree) * reduced(psi.degree)) {
        second = second.neg();
    }
    first.add(&second)
}

/// `d(phi) = [mu, phi]`, exact on the quotient at length `cap`.
pub fn hochschild_differential<F: Scalar>(
    a0: &CurvedCategory<F>,
    phi: &HochschildCochain<F>,
    cap: usize,
) -> Result<HochschildCochain<F>> {
    check_base(a0)?;
    if a0.arity_cap().is_some() {
        return Err(Error::Limit(
            "the base category is only known up to an arity cap".into(),
        ));
    }
    gerstenhaber_bracket(a0, &HochschildCochain::structure(a0), phi, cap)
}

/// One coordinate of a cochain at a length cap: a composable tuple (or an
/// object, for length zero) and an output basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
    pub output: usize,
}

/// Coordinates of degree-`d` cochains up to length `cap`; without length
/// zero if `truncated`.
pub fn slots<F: Scalar>(
    a0: &CurvedCategory<F>,
    degree: i32,
    cap: usize,
    truncated: bool,
) -> Result<Vec<Slot>> {
    let basis = a0.basis();
    let mut out = Vec::new();
    for n in usize::from(truncated)..=cap {
        if a0.chain_count(n) > MAX_CHAINS {
            return Err(Error::Limit(format!(
                "too many composable tuples of length {n}"
            )));
        }
        for chain in a0.chains(n) {
            let target: i32 =
                chain.arrows.iter().map(|&i| basis.degree(i)).sum::<i32>() + degree - n as i32;
            let (p, q) = (chain.objects[0], *chain.objects.last().unwrap());
            for output in a0.hom(p, q) {
                if basis.degree(output) == target {
                    out.push(Slot {
                        objects: chain.objects.clone(),
                        arrows: chain.arrows.clone(),
                        output,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn read<F: Scalar>(phi: &HochschildCochain<F>, slot: &Slot) -> SeriesElement<F> {
    let ground = LocalRing::ground();
    let value = if slot.arrows.is_empty() {
        phi.zeroth.get(&slot.objects[0]).cloned()
    } else {
        phi.components
            .get(&slot.arrows.len())
            .and_then(|op| op.entries().get(&slot.arrows).cloned())
    };
    value.map_or_else(|| SeriesElement::zero(&ground), |e| e.coeff(slot.output))
}

/// Constant-term coordinates.
pub fn to_vector<F: Scalar>(phi: &HochschildCochain<F>, slots: &[Slot]) -> Vec<F> {
    slots.iter().map(|s| read(phi, s).constant_term()).collect()
}

pub fn from_vector<F: Scalar>(
    degree: i32,
    slots: &[Slot],
    v: &[F],
    ring: &Arc<LocalRing<F>>,
    cap: usize,
) -> HochschildCochain<F> {
    let mut out = HochschildCochain::zero(degree);
    for (slot, c) in slots.iter().zip(v) {
        if c.is_zero() {
            continue;
        }
        let term = Element::from_terms(
            ring,
            [(slot.output, SeriesElement::constant(ring, c.clone()))],
        );
        let n = slot.arrows.len();
        if n == 0 {
            let sum = out
                .zeroth
                .get(&slot.objects[0])
                .map_or_else(|| term.clone(), |x| x.add(&term));
            out.zeroth.insert(slot.objects[0], sum);
        } else {
            let op = out
                .components
                .entry(n)
                .or_insert_with(|| MultilinearOperation::new(n, degree - n as i32, Symmetry::None));
            let sum = op
                .entries()
                .get(&slot.arrows)
                .map_or_else(|| term.clone(), |x| x.add(&term));
            op.insert_raw(slot.arrows.clone(), sum);
        }
    }
    out.cap = Some(cap);
    out
}

/// Matrix of `d` from degree `d` to `d + 1` at length `cap`.
pub fn differential_matrix<F: Scalar>(
    a0: &CurvedCategory<F>,
    degree: i32,
    cap: usize,
    truncated: bool,
) -> Result<(Vec<Slot>, Vec<Slot>, Matrix<F>)> {
    let src = slots(a0, degree, cap, truncated)?;
    let dst = slots(a0, degree + 1, cap, truncated)?;
    let ground = LocalRing::ground();
    let mut cols = Vec::with_capacity(src.len());
    for i in 0..src.len() {
        let mut e = vec![F::zero(); src.len()];
        e[i] = F::one();
        let phi = from_vector(degree, &src, &e, &ground, cap);
        cols.push(to_vector(&hochschild_differential(a0, &phi, cap)?, &dst));
    }
    let m = Matrix::from_columns(dst.len(), &cols);
    Ok((src, dst, m))
}

/// One degree of the complex at a length cap, split as boundaries, harmonic
/// representatives and a complement of the cocycles.
#[derive(Clone, Debug)]
pub struct HhDegree<F: Scalar> {
    pub degree: i32,
    pub length_cap: usize,
    pub truncated: bool,
    pub slots: Vec<Slot>,
    /// Coordinates one degree down.
    pub previous: Vec<Slot>,
    /// Matrix of `d` into this degree.
    pub incoming: Matrix<F>,
    pub splitting: Splitting<F>,
    change: Matrix<F>,
}

impl<F: Scalar> HhDegree<F> {
    pub fn new(a0: &CurvedCategory<F>, degree: i32, cap: usize, truncated: bool) -> Result<Self> {
        check_base(a0)?;
        let (previous, slots, incoming) = differential_matrix(a0, degree - 1, cap, truncated)?;
        let (_, _, outgoing) = differential_matrix(a0, degree, cap, truncated)?;
        let splitting = Splitting::new(slots.len(), &incoming, &outgoing);
        let change = if slots.is_empty() {
            Matrix::zeros(0, 0)
        } else {
            splitting
                .basis_matrix()
                .inverse()
                .expect("splitting is a basis")
        };
        Ok(HhDegree {
            degree,
            length_cap: cap,
            truncated,
            slots,
            previous,
            incoming,
            splitting,
            change,
        })
    }

    pub fn dim(&self) -> usize {
        self.splitting.harmonic.len()
    }

    /// Coordinates of `v` as `(boundary, harmonic, complement)`.
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

    pub fn representatives(&self) -> Vec<HochschildCochain<F>> {
        let ground = LocalRing::ground();
        self.splitting
            .harmonic
            .iter()
            .map(|v| from_vector(self.degree, &self.slots, v, &ground, self.length_cap))
            .collect()
    }
}

/// `HH^degree` at length cap `cap`.
pub fn hh_cohomology<F: Scalar>(
    a0: &CurvedCategory<F>,
    degree: i32,
    cap: usize,
    truncated: bool,
) -> Result<HhDegree<F>> {
    HhDegree::new(a0, degree, cap, truncated)
}

#[cfg(test)]
mod tests;
