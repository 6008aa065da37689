#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::{One, Signed, Zero};
use versality::ainf::{CurvedCategory, CurvedFunctor};
use versality::cli::build;
use versality::cli::format::{self, DescriptionFile, LinfSpec, Payload};
use versality::linf::LInfinityAlgebra;
use versality::Rational;

pub type Q = Rational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> DescriptionFile {
    let bytes = std::fs::read(fixture_path(name)).unwrap();
    format::parse(&bytes).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_path(""))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

pub fn linf_spec(name: &str) -> LinfSpec {
    match fixture(name).payload {
        Payload::Linf(s) => s,
        other => panic!("{name} is a {} file", other.kind()),
    }
}

pub fn linf(name: &str) -> LInfinityAlgebra<Q> {
    build::linf(&linf_spec(name)).unwrap()
}

pub fn category(name: &str) -> CurvedCategory<Q> {
    match fixture(name).payload {
        Payload::Ainf(s) => build::category(&s).unwrap(),
        other => panic!("{name} is a {} file", other.kind()),
    }
}

pub fn functor(name: &str) -> CurvedFunctor<Q> {
    match fixture(name).payload {
        Payload::Functor(s) => build::functor(&s).unwrap(),
        other => panic!("{name} is a {} file", other.kind()),
    }
}

pub fn mc(name: &str) -> build::McData {
    match fixture(name).payload {
        Payload::Mc(s) => build::mc(&s).unwrap(),
        other => panic!("{name} is a {} file", other.kind()),
    }
}

/// Runs the command line in process with the fixture directory set.
pub fn cli(args: &[&str]) -> versality::cli::Outcome {
    let dir = fixture_path("");
    let mut full = vec![
        "versality".to_string(),
        "--fixture-dir".into(),
        dir.to_string_lossy().into_owned(),
    ];
    full.extend(args.iter().map(|s| s.to_string()));
    versality::cli::run(full)
}

/// Rank by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone() / pivot.clone();
                for j in c..cols {
                    let x = rows[r][j].clone() * f.clone();
                    rows[i][j] = rows[i][j].clone() - x;
                }
            }
        }
        r += 1;
    }
    r
}

/// Fourier-Motzkin: is `{l >= 0, sum l = 1, sum l_i g_i = 0}` feasible?
/// Rows are `a . l <= b`.
pub fn fm_contains_line(generators: &[Vec<i64>]) -> bool {
    let k = generators.len();
    let n = generators[0].len();
    let mut rows: Vec<(Vec<Q>, Q)> = Vec::new();
    for i in 0..k {
        let mut a = vec![Q::zero(); k];
        a[i] = -Q::one();
        rows.push((a, Q::zero()));
    }
    let ones = vec![Q::one(); k];
    rows.push((ones.clone(), Q::one()));
    rows.push((ones.iter().map(|x| -x.clone()).collect(), -Q::one()));
    for c in 0..n {
        let a: Vec<Q> = generators.iter().map(|g| q(g[c])).collect();
        rows.push((a.iter().map(|x| -x.clone()).collect(), Q::zero()));
        rows.push((a, Q::zero()));
    }
    for v in 0..k {
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), Vec::new());
        for (a, b) in rows {
            if a[v].is_positive() {
                pos.push((a, b));
            } else if a[v].is_negative() {
                neg.push((a, b));
            } else {
                keep.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                let (sp, sn) = (-an[v].clone(), ap[v].clone());
                let a: Vec<Q> = ap
                    .iter()
                    .zip(an)
                    .map(|(x, y)| x.clone() * sp.clone() + y.clone() * sn.clone())
                    .collect();
                let b = bp.clone() * sp.clone() + bn.clone() * sn.clone();
                let row = normalize(a, b);
                if !keep.contains(&row) {
                    keep.push(row);
                }
            }
        }
        rows = keep;
    }
    rows.iter().all(|(_, b)| !b.is_negative())
}

fn normalize(a: Vec<Q>, b: Q) -> (Vec<Q>, Q) {
    let scale = a
        .iter()
        .chain(std::iter::once(&b))
        .find(|x| !x.is_zero())
        .map(|x| x.abs());
    match scale {
        Some(s) => (a.into_iter().map(|x| x / s.clone()).collect(), b / s),
        None => (a, b),
    }
}

/// Obstruction polynomials of a minimal algebra, expanded by hand: with
/// `alpha = sum x_i e_i` over the degree-one vectors, every bracket on
/// degree-one inputs contributes `c * x^m / m!` (inputs of reduced degree
/// zero, so no signs). Keyed by output name, then exponent vector.
pub fn brute_force_obstructions(
    spec: &LinfSpec,
    truncation: u32,
) -> BTreeMap<String, BTreeMap<Vec<u32>, Q>> {
    let ones: Vec<&str> = spec
        .basis
        .iter()
        .filter(|v| v.degree == 1)
        .map(|v| v.name.as_str())
        .collect();
    let mut out: BTreeMap<String, BTreeMap<Vec<u32>, Q>> = BTreeMap::new();
    for entry in &spec.brackets {
        if entry.inputs.len() < 2 || !entry.inputs.iter().all(|i| ones.contains(&i.as_str())) {
            continue;
        }
        let mut exps = vec![0u32; ones.len()];
        for i in &entry.inputs {
            exps[ones.iter().position(|o| o == i).unwrap()] += 1;
        }
        if exps.iter().sum::<u32>() > truncation {
            continue;
        }
        let mut denom = Q::one();
        for &e in &exps {
            for j in 1..=e {
                denom *= q(j as i64);
            }
        }
        for (target, text) in &entry.output {
            let c = versality::scalar::parse_rational(text).unwrap() / denom.clone();
            let poly = out.entry(target.clone()).or_default();
            let sum = poly.remove(&exps).unwrap_or_else(Q::zero) + c;
            if !sum.is_zero() {
                poly.insert(exps.clone(), sum);
            }
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}
