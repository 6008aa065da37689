//! Graded bases, sparse elements over a local ring, multilinear operations
//! and the Koszul sign rule.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::coefficients::ring::{same_ring, LocalRing, SeriesElement};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Hard cap on the arity of stored operations.
pub const MAX_ARITY: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<i32>,
    index: HashMap<String, usize>,
}

impl GradedBasis {
    pub fn new(vectors: Vec<(String, i32)>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, (n, _)) in vectors.iter().enumerate() {
            if n.is_empty() || index.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidStructure(format!(
                    "duplicate or empty basis identifier `{n}`"
                )));
            }
        }
        let (names, degrees) = vectors.into_iter().unzip();
        Ok(GradedBasis {
            names,
            degrees,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn reduced_degree(&self, i: usize) -> i32 {
        self.degrees[i] + 1
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownIdentifier(name.to_string()))
    }

    /// Indices of the basis vectors in degree `d`, ascending.
    pub fn in_degree(&self, d: i32) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn degree_range(&self) -> Option<(i32, i32)> {
        Some((*self.degrees.iter().min()?, *self.degrees.iter().max()?))
    }
}

/// Multiplies a coefficient by another that may live over the ground ring.
pub fn coeff_mul<F: Scalar>(
    a: &SeriesElement<F>,
    b: &SeriesElement<F>,
) -> Result<SeriesElement<F>> {
    if same_ring(a.ring(), b.ring()) {
        Ok(a.mul(b))
    } else if a.ring().nvars() == 0 {
        Ok(b.scale(&a.constant_term()))
    } else if b.ring().nvars() == 0 {
        Ok(a.scale(&b.constant_term()))
    } else {
        Err(Error::RingMismatch)
    }
}

fn joint_ring<F: Scalar>(
    a: &Arc<LocalRing<F>>,
    b: &Arc<LocalRing<F>>,
) -> Result<Arc<LocalRing<F>>> {
    if same_ring(a, b) || b.nvars() == 0 {
        Ok(a.clone())
    } else if a.nvars() == 0 {
        Ok(b.clone())
    } else {
        Err(Error::RingMismatch)
    }
}

/// Sparse vector `sum c_i v_i` with coefficients in a local ring.
#[derive(Clone, PartialEq)]
pub struct Element<F: Scalar> {
    ring: Arc<LocalRing<F>>,
    terms: BTreeMap<usize, SeriesElement<F>>,
}

impl<F: Scalar> fmt::Debug for Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, c)| format!("({c})*#{i}"))
            .collect();
        write!(f, "[{}]", parts.join(" + "))
    }
}

impl<F: Scalar> Element<F> {
    pub fn zero(ring: &Arc<LocalRing<F>>) -> Self {
        Element {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(ring: &Arc<LocalRing<F>>, i: usize) -> Self {
        Self::term(i, SeriesElement::one(ring))
    }

    pub fn term(i: usize, c: SeriesElement<F>) -> Self {
        let mut e = Element::zero(c.ring());
        if !c.is_zero() {
            e.terms.insert(i, c);
        }
        e
    }

    pub fn from_terms(
        ring: &Arc<LocalRing<F>>,
        terms: impl IntoIterator<Item = (usize, SeriesElement<F>)>,
    ) -> Self {
        let mut e = Element::zero(ring);
        for (i, c) in terms {
            e.add_term(i, c.embed_constant(ring));
        }
        e
    }

    /// Field-coefficient vector over the given ring.
    pub fn from_vector(ring: &Arc<LocalRing<F>>, v: &[F]) -> Self {
        Self::from_terms(
            ring,
            v.iter()
                .enumerate()
                .map(|(i, c)| (i, SeriesElement::constant(ring, c.clone()))),
        )
    }

    pub fn ring(&self) -> &Arc<LocalRing<F>> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<usize, SeriesElement<F>> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> SeriesElement<F> {
        self.terms
            .get(&i)
            .cloned()
            .unwrap_or_else(|| SeriesElement::zero(&self.ring))
    }

    pub fn add_term(&mut self, i: usize, c: SeriesElement<F>) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&i) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&i);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(i, c);
            }
        }
    }

    /// Moves the element to `ring`; only constants may change ring.
    pub fn over(&self, ring: &Arc<LocalRing<F>>) -> Self {
        if same_ring(&self.ring, ring) {
            return self.clone();
        }
        Element {
            ring: ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (*i, c.embed_constant(ring)))
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let ring = joint_ring(&self.ring, &other.ring)?;
        let mut out = self.over(&ring);
        for (i, c) in &other.terms {
            out.add_term(*i, c.embed_constant(&ring));
        }
        Ok(out)
    }

    /// Sum; panics on incompatible rings.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("ring mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Element {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(i, c)| (*i, c.neg())).collect(),
        }
    }

    pub fn scale_field(&self, c: &F) -> Self {
        if c.is_zero() {
            return Element::zero(&self.ring);
        }
        Element {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(i, v)| (*i, v.scale(c))).collect(),
        }
    }

    pub fn try_scale(&self, c: &SeriesElement<F>) -> Result<Self> {
        let ring = joint_ring(&self.ring, c.ring())?;
        let mut out = Element::zero(&ring);
        for (i, v) in &self.terms {
            out.add_term(*i, coeff_mul(c, v)?);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &SeriesElement<F>) -> Self {
        self.try_scale(c).expect("ring mismatch")
    }

    /// Degree if the element is nonzero and homogeneous.
    pub fn degree(&self, basis: &GradedBasis) -> Option<i32> {
        let mut it = self.terms.keys().map(|&i| basis.degree(i));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, basis: &GradedBasis, d: i32) -> bool {
        self.terms.keys().all(|&i| basis.degree(i) == d)
    }

    /// Lowest weight among coefficients; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms
            .values()
            .filter_map(SeriesElement::valuation)
            .min()
    }

    pub fn constant_part(&self) -> Vec<(usize, F)> {
        self.terms
            .iter()
            .map(|(i, c)| (*i, c.constant_term()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// Coefficientwise weight-`k` part.
    pub fn weight_part(&self, k: u32) -> Self {
        let mut out = Element::zero(&self.ring);
        for (i, c) in &self.terms {
            out.add_term(*i, c.weight_part(k));
        }
        out
    }

    pub fn truncated(&self, k: u32) -> Self {
        let mut out = Element::zero(&self.ring);
        for (i, c) in &self.terms {
            out.add_term(*i, c.truncated(k));
        }
        out
    }

    pub fn map_coeffs(
        &self,
        ring: &Arc<LocalRing<F>>,
        mut f: impl FnMut(&SeriesElement<F>) -> SeriesElement<F>,
    ) -> Self {
        let mut out = Element::zero(ring);
        for (i, c) in &self.terms {
            out.add_term(*i, f(c));
        }
        out
    }

    /// Coefficient of monomial `m` in each coordinate, as a dense field vector.
    pub fn coefficient_vector(&self, m: &crate::coefficients::Monomial, dim: usize) -> Vec<F> {
        let mut v = vec![F::zero(); dim];
        for (i, c) in &self.terms {
            if let Some(x) = c.terms().get(m) {
                v[*i] = x.clone();
            }
        }
        v
    }

    /// Constant coefficients as a dense vector.
    pub fn constant_vector(&self, dim: usize) -> Vec<F> {
        let mut v = vec![F::zero(); dim];
        for (i, c) in self.constant_part() {
            v[i] = c;
        }
        v
    }

    pub fn to_text(&self, basis: &GradedBasis) -> String {
        self.to_text_with(|i| basis.name(i).to_string())
    }

    pub fn to_text_with(&self, name: impl Fn(usize) -> String) -> String {
        let mut out = String::new();
        for (i, c) in &self.terms {
            let text = c.to_text();
            let simple = !text.chars().skip(1).any(|ch| matches!(ch, ' ' | '+' | '-'));
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ => (false, text.clone()),
            };
            let body = if body == "1" {
                name(*i)
            } else if simple {
                format!("{body}*{}", name(*i))
            } else {
                format!("({body})*{}", name(*i))
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

/// Sign of rearranging `(v_0, .., v_{n-1})` into `(v_{perm[0]}, .., v_{perm[n-1]})`
/// when symbols of degrees `a`, `b` anticommute iff `a * b` is odd.
///
/// Computed by bubble-sorting `perm` back to the identity, one adjacent
/// transposition at a time.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<i32> {
    if perm.len() != degrees.len() {
        return Err(Error::LengthMismatch(format!(
            "permutation of length {} with {} degrees",
            perm.len(),
            degrees.len()
        )));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidStructure(format!(
                "{perm:?} is not a permutation"
            )));
        }
    }
    Ok(koszul_sign_unchecked(perm, degrees))
}

pub(crate) fn koszul_sign_unchecked(perm: &[usize], degrees: &[i32]) -> i32 {
    let mut seq = perm.to_vec();
    let mut sign = 1;
    let n = seq.len();
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n - 1 - pass {
            if seq[k] > seq[k + 1] {
                if (degrees[seq[k]] * degrees[seq[k + 1]]).rem_euclid(2) == 1 {
                    sign = -sign;
                }
                seq.swap(k, k + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    sign
}

/// Permutations `sigma` of `0..s` with `sigma[0] < .. < sigma[j-1]` and
/// `sigma[j] < .. < sigma[s-1]`, in lexicographic order.
pub fn unshuffles(j: usize, s: usize) -> Vec<Vec<usize>> {
    assert!(j <= s, "unshuffles({j}, {s})");
    fn rec(start: usize, j: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            let mut p = cur.clone();
            p.extend((0..s).filter(|i| !cur.contains(i)));
            out.push(p);
            return;
        }
        for i in start..s {
            cur.push(i);
            rec(i + 1, j, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, j, s, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    None,
    /// Graded symmetric for reduced degrees `|v| + 1`.
    GradedSymmetricReduced,
}

/// Sparse multilinear map on basis tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct MultilinearOperation<F: Scalar> {
    pub arity: usize,
    pub degree: i32,
    pub symmetry: Symmetry,
    entries: BTreeMap<Vec<usize>, Element<F>>,
}

/// Sorts a tuple; returns the sorted tuple and the Koszul sign of the
/// rearrangement, or `None` if a repeated entry of odd reduced degree forces
/// the value to vanish.
pub fn canonical_tuple(tuple: &[usize], basis: &GradedBasis) -> Option<(Vec<usize>, i32)> {
    let mut perm: Vec<usize> = (0..tuple.len()).collect();
    perm.sort_by_key(|&k| tuple[k]);
    let sorted: Vec<usize> = perm.iter().map(|&k| tuple[k]).collect();
    if sorted
        .windows(2)
        .any(|w| w[0] == w[1] && basis.reduced_degree(w[0]).rem_euclid(2) == 1)
    {
        return None;
    }
    let degs: Vec<i32> = tuple.iter().map(|&i| basis.reduced_degree(i)).collect();
    Some((sorted, koszul_sign_unchecked(&perm, &degs)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryViolation {
    pub tuple: Vec<usize>,
    pub detail: String,
}

impl<F: Scalar> MultilinearOperation<F> {
    pub fn new(arity: usize, degree: i32, symmetry: Symmetry) -> Self {
        MultilinearOperation {
            arity,
            degree,
            symmetry,
            entries: BTreeMap::new(),
        }
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Element<F>> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Element::is_zero)
    }

    /// Stores `value` at `tuple`, adding to whatever is there. For symmetric
    /// operations the value is moved to the canonical tuple with its sign.
    pub fn add_entry(
        &mut self,
        tuple: Vec<usize>,
        value: Element<F>,
        basis: &GradedBasis,
    ) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: tuple.len(),
            });
        }
        if value.is_zero() {
            return Ok(());
        }
        let (key, value) = match self.symmetry {
            Symmetry::None => (tuple, value),
            Symmetry::GradedSymmetricReduced => match canonical_tuple(&tuple, basis) {
                None => return Ok(()),
                Some((key, sign)) => (key, if sign < 0 { value.neg() } else { value }),
            },
        };
        let merged = match self.entries.remove(&key) {
            Some(old) => old.try_add(&value)?,
            None => value,
        };
        if !merged.is_zero() {
            self.entries.insert(key, merged);
        }
        Ok(())
    }

    /// Builds from an entry table as written by a user. For symmetric
    /// operations, non-canonical keys are moved to their canonical slot when
    /// that slot is empty; otherwise they are kept so that
    /// [`check_symmetry`] can compare them.
    pub fn from_raw_entries(
        arity: usize,
        degree: i32,
        symmetry: Symmetry,
        entries: Vec<(Vec<usize>, Element<F>)>,
        basis: &GradedBasis,
    ) -> Result<Self> {
        let mut op = Self::new(arity, degree, symmetry);
        for (t, v) in &entries {
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    got: t.len(),
                });
            }
            if t.iter().any(|&i| i >= basis.len()) {
                return Err(Error::InvalidStructure(format!("tuple {t:?} out of range")));
            }
            if op.entries.contains_key(t) {
                return Err(Error::InvalidStructure(format!(
                    "duplicate entry for {t:?}"
                )));
            }
            if !v.is_zero() {
                op.entries.insert(t.clone(), v.clone());
            }
        }
        if symmetry == Symmetry::GradedSymmetricReduced {
            let keys: Vec<Vec<usize>> = op.entries.keys().cloned().collect();
            for k in keys {
                match canonical_tuple(&k, basis) {
                    Some((c, sign)) if c != k && !op.entries.contains_key(&c) => {
                        let v = op.entries.remove(&k).unwrap();
                        op.entries.insert(c, if sign < 0 { v.neg() } else { v });
                    }
                    _ => {}
                }
            }
        }
        Ok(op)
    }

    /// Value on a basis tuple.
    pub fn read(
        &self,
        tuple: &[usize],
        basis: &GradedBasis,
        ring: &Arc<LocalRing<F>>,
    ) -> Element<F> {
        match self.symmetry {
            Symmetry::None => self
                .entries
                .get(tuple)
                .cloned()
                .unwrap_or_else(|| Element::zero(ring)),
            Symmetry::GradedSymmetricReduced => match canonical_tuple(tuple, basis) {
                None => Element::zero(ring),
                Some((key, sign)) => match self.entries.get(&key) {
                    None => Element::zero(ring),
                    Some(v) if sign < 0 => v.neg(),
                    Some(v) => v.clone(),
                },
            },
        }
    }

    /// Multilinear extension. `basis` is the input basis.
    pub fn evaluate(&self, args: &[&Element<F>], basis: &GradedBasis) -> Result<Element<F>> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: args.len(),
            });
        }
        let mut ring = self
            .entries
            .values()
            .next()
            .map(|e| e.ring().clone())
            .unwrap_or_else(LocalRing::ground);
        for a in args {
            ring = joint_ring(&ring, a.ring())?;
        }
        let mut out = Element::zero(&ring);
        if self.entries.is_empty() || args.iter().any(|a| a.is_zero()) {
            return Ok(out);
        }
        let n = ring.truncation();
        let mut tuple = Vec::with_capacity(self.arity);
        let one = SeriesElement::one(&ring);
        self.evaluate_rec(args, basis, &ring, n, 0, &mut tuple, one, &mut out)?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn evaluate_rec(
        &self,
        args: &[&Element<F>],
        basis: &GradedBasis,
        ring: &Arc<LocalRing<F>>,
        n: u32,
        pos: usize,
        tuple: &mut Vec<usize>,
        coeff: SeriesElement<F>,
        out: &mut Element<F>,
    ) -> Result<()> {
        if pos == args.len() {
            let v = self.read(tuple, basis, ring);
            for (i, c) in v.terms() {
                out.add_term(*i, coeff_mul(&coeff, c)?);
            }
            return Ok(());
        }
        for (i, c) in args[pos].terms() {
            let next = coeff_mul(&coeff, c)?;
            if next.is_zero() {
                continue;
            }
            tuple.push(*i);
            self.evaluate_rec(args, basis, ring, n, pos + 1, tuple, next, out)?;
            tuple.pop();
        }
        Ok(())
    }

    /// Entries violating the degree law `deg out = sum deg in + degree`.
    pub fn degree_violations(
        &self,
        input: &GradedBasis,
        output: &GradedBasis,
    ) -> Vec<SymmetryViolation> {
        self.entries
            .iter()
            .filter(|(t, v)| {
                let d: i32 = t.iter().map(|&i| input.degree(i)).sum::<i32>() + self.degree;
                !v.is_homogeneous_of(output, d)
            })
            .map(|(t, _)| SymmetryViolation {
                tuple: t.clone(),
                detail: "degree law violated".into(),
            })
            .collect()
    }

    pub fn map_entries(&self, mut f: impl FnMut(&Element<F>) -> Element<F>) -> Self {
        let mut op = Self::new(self.arity, self.degree, self.symmetry);
        for (k, v) in &self.entries {
            let w = f(v);
            if !w.is_zero() {
                op.entries.insert(k.clone(), w);
            }
        }
        op
    }

    pub fn insert_raw(&mut self, tuple: Vec<usize>, value: Element<F>) {
        if value.is_zero() {
            self.entries.remove(&tuple);
        } else {
            self.entries.insert(tuple, value);
        }
    }
}

/// Compares every stored entry with the signed canonical read.
pub fn check_symmetry<F: Scalar>(
    op: &MultilinearOperation<F>,
    basis: &GradedBasis,
) -> Vec<SymmetryViolation> {
    let mut out = Vec::new();
    if op.symmetry != Symmetry::GradedSymmetricReduced || op.arity < 2 {
        return out;
    }
    for (t, v) in op.entries() {
        match canonical_tuple(t, basis) {
            None => out.push(SymmetryViolation {
                tuple: t.clone(),
                detail: "repeated input of odd reduced degree must give zero".into(),
            }),
            Some((c, sign)) if &c != t => {
                let expected = op
                    .entries()
                    .get(&c)
                    .cloned()
                    .unwrap_or_else(|| Element::zero(v.ring()));
                let expected = if sign < 0 { expected.neg() } else { expected };
                if &expected != v {
                    out.push(SymmetryViolation {
                        tuple: t.clone(),
                        detail: format!(
                            "{} but the Koszul sign requires {}",
                            v.to_text(basis),
                            expected.to_text(basis)
                        ),
                    });
                }
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn basis(v: &[(&str, i32)]) -> GradedBasis {
        GradedBasis::new(v.iter().map(|(n, d)| (n.to_string(), *d)).collect()).unwrap()
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        assert_eq!(koszul_sign(&[0, 1, 2], &[3, 5, 7]).unwrap(), 1);
        assert_eq!(koszul_sign(&[1, 2, 0], &[1, 0, 1]).unwrap(), -1);
        assert!(matches!(
            koszul_sign(&[0, 1], &[1]),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(1, 2), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(unshuffles(2, 2), vec![vec![0, 1]]);
        assert_eq!(unshuffles(2, 4).len(), 6);
        assert_eq!(unshuffles(0, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn symmetric_evaluation() {
        let b = basis(&[("e1", 1), ("e2", 1), ("f", 2)]);
        let g = LocalRing::<Q>::ground();
        let f = Element::basis(&g, 2);
        let op = MultilinearOperation::from_raw_entries(
            2,
            0,
            Symmetry::GradedSymmetricReduced,
            vec![(vec![0, 1], f.clone())],
            &b,
        )
        .unwrap();
        let s = Element::basis(&g, 0).add(&Element::basis(&g, 1));
        let v = op.evaluate(&[&s, &s], &b).unwrap();
        assert_eq!(v, f.scale_field(&Q::from_i64(2)));
        let zero = Element::zero(&g);
        assert!(op.evaluate(&[&s, &zero], &b).unwrap().is_zero());
        assert!(matches!(
            op.evaluate(&[&s], &b),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn broken_symmetry_is_reported() {
        // e1, e2 of degree 0 have odd reduced degree: the bracket is antisymmetric
        let b = basis(&[("e1", 0), ("e2", 0), ("f", 0)]);
        let g = LocalRing::<Q>::ground();
        let f = Element::basis(&g, 2);
        let op = MultilinearOperation::from_raw_entries(
            2,
            0,
            Symmetry::GradedSymmetricReduced,
            vec![(vec![0, 1], f.clone()), (vec![1, 0], f.clone())],
            &b,
        )
        .unwrap();
        assert_eq!(check_symmetry(&op, &b).len(), 1);
        let ok = MultilinearOperation::from_raw_entries(
            2,
            0,
            Symmetry::GradedSymmetricReduced,
            vec![(vec![0, 1], f.clone()), (vec![1, 0], f.neg())],
            &b,
        )
        .unwrap();
        assert!(check_symmetry(&ok, &b).is_empty());
    }
}
