//! Finitely generated cone monoids and their completions at the ideal of
//! nonzero elements.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::{monomials_up_to, Monomial, RawPolynomial};
use super::ring::{LocalRing, SeriesElement, Variable};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const MAX_AMBIENT_RANK: usize = 4;
pub const MAX_GENERATORS: usize = 8;
const SEARCH_BUDGET: usize = 2_000_000;

type Q = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeMonoid {
    rank: usize,
    generators: Vec<Vec<i64>>,
    names: Vec<String>,
    inequalities: Option<Vec<Vec<i64>>>,
}

impl ConeMonoid {
    pub fn new(rank: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        Self::with_names(rank, generators, None, None)
    }

    /// Full constructor. Names default to `r` (one generator) or `r1, r2, ...`.
    pub fn with_names(
        rank: usize,
        generators: Vec<Vec<i64>>,
        names: Option<Vec<String>>,
        inequalities: Option<Vec<Vec<i64>>>,
    ) -> Result<Self> {
        if rank == 0 || rank > MAX_AMBIENT_RANK {
            return Err(Error::Limit(format!(
                "ambient rank {rank} outside 1..={MAX_AMBIENT_RANK}"
            )));
        }
        if generators.is_empty() || generators.len() > MAX_GENERATORS {
            return Err(Error::Limit(format!(
                "{} generators outside 1..={MAX_GENERATORS}",
                generators.len()
            )));
        }
        for g in &generators {
            if g.len() != rank {
                return Err(Error::LengthMismatch(format!(
                    "generator {g:?} in rank {rank}"
                )));
            }
            if g.iter().all(|&x| x == 0) {
                return Err(Error::InvalidStructure("zero generator".into()));
            }
            if g.iter().any(|x| x.abs() > 1_000_000) {
                return Err(Error::Limit(
                    "generator entries must be at most 10^6 in size".into(),
                ));
            }
        }
        let names = match names {
            Some(n) => {
                if n.len() != generators.len() {
                    return Err(Error::LengthMismatch("generator names".into()));
                }
                n
            }
            None if generators.len() == 1 => vec!["r".to_string()],
            None => (1..=generators.len()).map(|i| format!("r{i}")).collect(),
        };
        if let Some(ineqs) = &inequalities {
            for e in ineqs {
                if e.len() != rank {
                    return Err(Error::LengthMismatch(format!(
                        "functional {e:?} in rank {rank}"
                    )));
                }
                for g in &generators {
                    let pairing: i128 = e
                        .iter()
                        .zip(g)
                        .map(|(a, b)| i128::from(*a) * i128::from(*b))
                        .sum();
                    if pairing < 0 {
                        return Err(Error::InvalidStructure(format!(
                            "generator {g:?} violates the inequality {e:?}"
                        )));
                    }
                }
            }
        }
        Ok(ConeMonoid {
            rank,
            generators,
            names,
            inequalities,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn inequalities(&self) -> Option<&[Vec<i64>]> {
        self.inequalities.as_deref()
    }

    /// `sum e_i g_i`.
    pub fn element_of(&self, exps: &[u32]) -> Vec<i64> {
        let mut u = vec![0i64; self.rank];
        for (e, g) in exps.iter().zip(&self.generators) {
            for (ui, gi) in u.iter_mut().zip(g) {
                *ui += i64::from(*e) * gi;
            }
        }
        u
    }

    fn generator_matrix(&self) -> Matrix<Q> {
        let cols: Vec<Vec<Q>> = self
            .generators
            .iter()
            .map(|g| g.iter().map(|&x| Q::from_i64(x)).collect())
            .collect();
        Matrix::from_columns(self.rank, &cols)
    }
}

fn subsets(n: usize, max: usize) -> Vec<Vec<usize>> {
    (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>())
        .filter(|s| s.len() <= max)
        .collect()
}

/// Nonnegative basic solutions of `A x = b`: for each set of independent
/// columns, the unique solution supported there (if it is nonnegative).
fn basic_solutions(a: &Matrix<Q>, b: &[Q]) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for s in subsets(a.cols(), a.rows()) {
        let cols: Vec<Vec<Q>> = s.iter().map(|&j| a.column(j)).collect();
        let sub = Matrix::from_columns(a.rows(), &cols);
        if sub.rank() < s.len() {
            continue;
        }
        if let Some(x) = sub.solve(b) {
            if x.iter().all(|v| !v.is_negative()) {
                let mut full = vec![Q::zero(); a.cols()];
                for (k, &j) in s.iter().enumerate() {
                    full[j] = x[k].clone();
                }
                out.push(full);
            }
        }
    }
    out
}

/// True iff the rational cone spanned by the generators contains no line.
///
/// A line exists iff some nonnegative, nonzero combination of generators
/// vanishes; normalizing the weights to sum to one makes this an LP
/// feasibility question, decided on its basic solutions.
pub fn is_strongly_convex(c: &ConeMonoid) -> bool {
    let g = c.generator_matrix();
    let mut rows: Vec<Vec<Q>> = (0..g.rows()).map(|i| g.row(i).to_vec()).collect();
    rows.push(vec![Q::from_i64(1); g.cols()]);
    let a = Matrix::from_rows(rows);
    let mut b = vec![Q::zero(); c.rank];
    b.push(Q::from_i64(1));
    basic_solutions(&a, &b).is_empty()
}

/// Largest real total degree of a representation of `u`.
fn max_fiber_degree(g: &Matrix<Q>, u: &[i64]) -> Option<Q> {
    let b: Vec<Q> = u.iter().map(|&x| Q::from_i64(x)).collect();
    basic_solutions(g, &b)
        .into_iter()
        .map(|x| x.into_iter().fold(Q::zero(), |a, v| a + v))
        .max()
}

/// Searches for a representation of `u` with total degree in `(low, high]`.
fn has_representation_above(
    c: &ConeMonoid,
    u: &[i64],
    low: u32,
    high: u32,
    budget: &mut usize,
) -> Result<bool> {
    fn rec(
        c: &ConeMonoid,
        idx: usize,
        rest: &mut Vec<i64>,
        degree: u32,
        low: u32,
        high: u32,
        budget: &mut usize,
    ) -> Result<bool> {
        if *budget == 0 {
            return Err(Error::Limit("cone fiber search budget exhausted".into()));
        }
        *budget -= 1;
        if idx == c.generators.len() {
            return Ok(degree > low && rest.iter().all(|&x| x == 0));
        }
        let g = &c.generators[idx];
        let mut e = 0;
        loop {
            if rec(c, idx + 1, rest, degree + e, low, high, budget)? {
                return Ok(true);
            }
            if degree + e >= high {
                break;
            }
            e += 1;
            for (r, gi) in rest.iter_mut().zip(g) {
                *r -= gi;
            }
        }
        for (r, gi) in rest.iter_mut().zip(g) {
            *r += i64::from(e) * gi;
        }
        Ok(false)
    }
    let mut rest = u.to_vec();
    rec(c, 0, &mut rest, 0, low, high, budget)
}

/// Completion of the monoid ring at the ideal of nonzero monoid elements,
/// truncated at `truncation` (generators have weight one).
///
/// Relations: for every fiber of the monomial map whose representations all
/// have degree at most `truncation`, binomials connecting them; when a fiber
/// also contains a representation of higher degree, its low-degree monomials
/// vanish in the truncation and are added as monomial relations. Generators
/// already implied by earlier ones are skipped.
pub fn cone_completion<F: Scalar>(c: &ConeMonoid, truncation: u32) -> Result<Arc<LocalRing<F>>> {
    if !is_strongly_convex(c) {
        return Err(Error::NotStronglyConvex);
    }
    let k = c.generators.len();
    let weights = vec![1u32; k];
    let variables: Vec<Variable> = c
        .names
        .iter()
        .map(|n| Variable {
            name: n.clone(),
            weight: 1,
        })
        .collect();
    let mut fibers: BTreeMap<Vec<i64>, Vec<Monomial>> = BTreeMap::new();
    for m in monomials_up_to(&weights, truncation) {
        fibers.entry(c.element_of(m.exps())).or_default().push(m);
    }
    let mut groups: Vec<Vec<Monomial>> = fibers.into_values().collect();
    groups.iter_mut().for_each(|g| g.sort());
    groups.sort_by(|a, b| a[0].cmp(&b[0]));

    let g = c.generator_matrix();
    let mut budget = SEARCH_BUDGET;
    let mut relations: Vec<RawPolynomial<F>> = Vec::new();
    let mut ring = LocalRing::new(variables.clone(), Vec::new(), truncation)?;
    let mut add = |rel: RawPolynomial<F>, ring: &mut Arc<LocalRing<F>>| -> Result<()> {
        if SeriesElement::from_raw(ring, &rel)?.is_zero() {
            return Ok(());
        }
        relations.push(rel);
        *ring = LocalRing::new(variables.clone(), relations.clone(), truncation)?;
        Ok(())
    };
    for group in groups {
        let u = c.element_of(group[0].exps());
        let bound = max_fiber_degree(&g, &u).expect("fiber is nonempty");
        let high = (bound.floor().to_integer()).try_into().unwrap_or(u32::MAX);
        let vanishes =
            high > truncation && has_representation_above(c, &u, truncation, high, &mut budget)?;
        if vanishes {
            for m in &group {
                add(vec![(m.exps().to_vec(), F::one())], &mut ring)?;
            }
        } else {
            for m in &group[1..] {
                add(
                    vec![
                        (group[0].exps().to_vec(), F::one()),
                        (m.exps().to_vec(), -F::one()),
                    ],
                    &mut ring,
                )?;
            }
        }
    }
    Ok(ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cone(gens: &[&[i64]]) -> ConeMonoid {
        ConeMonoid::new(gens[0].len(), gens.iter().map(|g| g.to_vec()).collect()).unwrap()
    }

    #[test]
    fn convexity_examples() {
        assert!(is_strongly_convex(&cone(&[&[1, 0], &[0, 1]])));
        assert!(!is_strongly_convex(&cone(&[&[1, 0], &[-1, 0]])));
        assert!(is_strongly_convex(&cone(&[&[1, 0], &[1, 1], &[1, 2]])));
        // a line hidden in three generators: (1,1) + (-1,0) + (0,-1) = 0
        assert!(!is_strongly_convex(&cone(&[&[1, 1], &[-1, 0], &[0, -1]])));
    }

    #[test]
    fn veronese_completion() {
        let c = ConeMonoid::with_names(
            2,
            vec![vec![1, 0], vec![1, 1], vec![1, 2]],
            Some(vec!["a".into(), "b".into(), "c".into()]),
            None,
        )
        .unwrap();
        let r = cone_completion::<Q>(&c, 6).unwrap();
        assert_eq!(r.relation_texts(), vec!["a*c - b^2"]);
    }

    #[test]
    fn free_monoids_have_no_relations() {
        let r = cone_completion::<Q>(&cone(&[&[1]]), 8).unwrap();
        assert!(!r.has_relations());
        assert_eq!(r.names(), &["r".to_string()]);
        let r = cone_completion::<Q>(&cone(&[&[1, 0], &[0, 1]]), 5).unwrap();
        assert!(!r.has_relations());
    }

    #[test]
    fn high_degree_representations_truncate() {
        // 2 = 1 + 1 = (2): with generators 1 and 2, r2 = r1^2
        let r = cone_completion::<Q>(&cone(&[&[1], &[2]]), 2).unwrap();
        let x = SeriesElement::parse(&r, "r2").unwrap();
        assert_eq!(x, SeriesElement::parse(&r, "r1^2").unwrap());
        // 4 = 2 + 2 = 1 + 1 + 1 + 1: r2^2 vanishes at truncation 2
        assert!(SeriesElement::parse(&r, "r2^2").unwrap().is_zero());
    }

    #[test]
    fn rejects_lines_and_bad_inequalities() {
        assert_eq!(
            cone_completion::<Q>(&cone(&[&[1], &[-1]]), 3).unwrap_err(),
            Error::NotStronglyConvex
        );
        let bad = ConeMonoid::with_names(2, vec![vec![1, -1]], None, Some(vec![vec![0, 1]]));
        assert!(matches!(bad, Err(Error::InvalidStructure(_))));
    }
}
