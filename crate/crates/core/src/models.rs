//! The homogeneous B3 models on spaces of null flags in ℝ^{3,4}, built from
//! the metric, and the m(x6) example family.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::chart::{Chart, ChartRef, OneForm, Substitution, SymbolDecl, VectorField};
use crate::distribution::{Distribution, Splitting};
use crate::error::{Error, Result};
use crate::linalg::{kernel_frame, same_span, Echelon, PivotOrder};
use crate::poly::{q, q_frac, Var, Q};
use crate::prolong::{prolong_dual, prolong_fiber_line, prolong_projective, ProlongationResult};
use crate::scalar::Scalar;

/// Gram matrix of ℝ^{3,4}: (e_i|e_j) = 1/2 for i + j = 8, i ≠ j,
/// (e_4|e_4) = −1/2, else 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricTable {
    entries: [[Q; 7]; 7],
}

impl MetricTable {
    pub fn standard() -> MetricTable {
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i + j == 6 && i != j {
                    q_frac(1, 2)
                } else if i == 3 && j == 3 {
                    q_frac(-1, 2)
                } else {
                    q(0)
                }
            })
        });
        MetricTable { entries }
    }

    /// (e_{i+1} | e_{j+1}).
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.entries[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..7).all(|i| (0..7).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn inner(&self, a: &[Scalar], b: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..7 {
            for j in 0..7 {
                let g = &self.entries[i][j];
                if *g != q(0) && !a[i].is_zero() && !b[j].is_zero() {
                    acc = acc.add(&a[i].mul(&b[j]).scale(g));
                }
            }
        }
        acc
    }

    /// (positive, negative) counts of a diagonalization by congruence.
    pub fn signature(&self) -> (usize, usize) {
        let mut m: Vec<Vec<Q>> = self.entries.iter().map(|r| r.to_vec()).collect();
        let n = m.len();
        let (mut pos, mut neg) = (0, 0);
        let mut k = 0;
        while k < n {
            if m[k][k] == q(0) {
                if let Some(j) = (k + 1..n).find(|&j| m[j][j] != q(0)) {
                    m.swap(k, j);
                    for row in m.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| m[k][j] != q(0)) {
                    // e_k ← e_k + e_j makes the diagonal entry 2 m[k][j].
                    for c in 0..n {
                        let v = m[j][c].clone();
                        m[k][c] += v;
                    }
                    for r in 0..n {
                        let v = m[r][j].clone();
                        m[r][k] += v;
                    }
                } else {
                    k += 1;
                    continue;
                }
            }
            let p = m[k][k].clone();
            if p > q(0) {
                pos += 1;
            } else {
                neg += 1;
            }
            for r in k + 1..n {
                let f = m[r][k].clone() / p.clone();
                if f == q(0) {
                    continue;
                }
                for c in k..n {
                    let v = m[k][c].clone() * f.clone();
                    m[r][c] -= v;
                }
            }
            for c in k + 1..n {
                m[k][c] = q(0);
            }
            for r in k + 1..n {
                m[r][k] = q(0);
            }
            k += 1;
        }
        (pos, neg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModelName {
    F123,
    F23,
    F13,
    F3,
    #[serde(rename = "example")]
    Example,
}

impl ModelName {
    pub const ALL: [ModelName; 5] = [
        ModelName::F123,
        ModelName::F23,
        ModelName::F13,
        ModelName::F3,
        ModelName::Example,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelName::F123 => "F123",
            ModelName::F23 => "F23",
            ModelName::F13 => "F13",
            ModelName::F3 => "F3",
            ModelName::Example => "example",
        }
    }

    pub fn parse(s: &str) -> Result<ModelName> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An infinitesimal condition on a curve of flags, in terms of the frame
/// vectors (0-based).
#[derive(Clone, Copy, Debug)]
enum Infinitesimal {
    /// v' ∈ ⟨v_0, …, v_{k−1}⟩.
    InSpan { v: usize, k: usize },
    /// (a' | b) = 0.
    Orthogonal { a: usize, b: usize },
}

/// The value printed for a bracket.
#[derive(Clone, Debug, PartialEq)]
pub enum PrintedValue {
    Zero,
    /// A new frame vector with the given components.
    Defines(usize, Vec<(&'static str, &'static str)>),
    /// sign · (frame vector k).
    Multiple(i64, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BracketRelation {
    pub left: usize,
    pub right: usize,
    pub value: PrintedValue,
}

struct Blueprint {
    name: ModelName,
    prefix: &'static str,
    symbol: &'static str,
    /// Columns (1-based e-indices) carrying coordinates, per frame vector;
    /// vector i has a 1 in column i + 1.
    columns: [&'static [usize]; 3],
    conditions: &'static [Infinitesimal],
    constraints: [&'static str; 6],
    frame: Vec<Vec<(&'static str, &'static str)>>,
    parts: Vec<(&'static str, Vec<usize>)>,
    growth: &'static [usize],
    weights: &'static [usize],
    brackets: Vec<BracketRelation>,
}

/// Nullity products in solve order: (i, j, dependent coordinate row).
const SOLVE_ORDER: [(usize, usize, usize); 6] = [(2, 2, 5), (1, 2, 6), (1, 1, 6), (0, 2, 7), (0, 1, 7), (0, 0, 7)];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintEquation {
    pub label: String,
    pub computed: String,
    pub printed: String,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct ModelSpec {
    pub name: ModelName,
    /// Frame symbol: θ, ζ, ℓ or ξ.
    pub symbol: &'static str,
    pub chart: ChartRef,
    pub free: Vec<String>,
    /// Dependent coordinates as functions of the free ones.
    pub dependent: Vec<(String, Scalar)>,
    /// The flag vectors in ℝ^7 after substitution.
    pub vectors: Vec<Vec<Scalar>>,
    /// Each nullity product compared against its printed form.
    pub constraints: Vec<ConstraintEquation>,
    pub pfaff: Vec<OneForm>,
    pub derived_frame: Vec<VectorField>,
    /// The printed frame.
    pub frame: Vec<VectorField>,
    pub distribution: Distribution,
    pub splitting: Splitting,
    pub growth: Vec<usize>,
    pub weights: Vec<usize>,
    pub brackets: Vec<BracketRelation>,
}

impl ModelSpec {
    /// True when the derived frame is exactly the printed frame up to order.
    pub fn frame_matches(&self) -> bool {
        self.derived_frame.len() == self.frame.len() && self.frame.iter().all(|v| self.derived_frame.contains(v))
    }
}

fn z(v: &[(&'static str, &'static str)]) -> Vec<(&'static str, &'static str)> {
    v.to_vec()
}

fn rel(left: usize, right: usize, value: PrintedValue) -> BracketRelation {
    BracketRelation { left, right, value }
}

fn def(k: usize, v: &[(&'static str, &'static str)]) -> PrintedValue {
    PrintedValue::Defines(k, z(v))
}

use PrintedValue::{Multiple, Zero};

fn blueprint(name: ModelName) -> Blueprint {
    match name {
        ModelName::F123 => Blueprint {
            name,
            prefix: "w",
            symbol: "θ",
            columns: [&[2, 3, 4, 5, 6, 7], &[3, 4, 5, 6, 7], &[4, 5, 6, 7]],
            conditions: &[Infinitesimal::InSpan { v: 0, k: 2 }, Infinitesimal::InSpan { v: 1, k: 3 }],
            constraints: [
                "w71 + w21*w61 + w31*w51 - 1/2*w41^2",
                "1/2*w72 + 1/2*w21*w62 + 1/2*w31*w52 - 1/2*w41*w42 + 1/2*w51*w32 + 1/2*w61",
                "1/2*w73 + 1/2*w21*w63 + 1/2*w31*w53 - 1/2*w41*w43 + 1/2*w51",
                "w62 + w32*w52 - 1/2*w42^2",
                "1/2*w63 + 1/2*w32*w53 - 1/2*w42*w43 + 1/2*w52",
                "w53 - 1/2*w43^2",
            ],
            frame: vec![
                z(&[("w21", "1"), ("w31", "w32"), ("w41", "w42"), ("w51", "w52"), ("w61", "-w32*w52 + 1/2*w42^2")]),
                z(&[("w32", "1"), ("w42", "w43"), ("w52", "1/2*w43^2")]),
                z(&[("w43", "1")]),
            ],
            parts: vec![("F1", vec![0]), ("F2", vec![1]), ("F3", vec![2])],
            growth: &[3, 5, 7, 8, 9],
            weights: &[1, 1, 1, 2, 2, 3, 3, 4, 5],
            brackets: vec![
                rel(1, 2, def(4, &[("w31", "-1"), ("w41", "-w43"), ("w51", "-1/2*w43^2"), ("w61", "w52 - w42*w43 + 1/2*w32*w43^2")])),
                rel(1, 3, Zero),
                rel(2, 3, def(5, &[("w42", "-1"), ("w52", "-w43")])),
                rel(1, 4, Zero),
                rel(1, 5, def(6, &[("w41", "1"), ("w51", "w43"), ("w61", "w42 - w32*w43")])),
                rel(2, 4, Zero),
                rel(2, 5, Zero),
                rel(3, 4, Multiple(-1, 6)),
                rel(3, 5, def(7, &[("w52", "-1")])),
                rel(1, 6, Zero),
                rel(1, 7, def(8, &[("w51", "1"), ("w61", "-w32")])),
                rel(2, 6, Zero),
                rel(2, 7, Zero),
                rel(3, 6, Multiple(1, 8)),
                rel(3, 7, Zero),
                rel(1, 8, Zero),
                rel(2, 8, def(9, &[("w61", "-1")])),
                rel(3, 8, Zero),
            ],
        },
        ModelName::F23 => Blueprint {
            name,
            prefix: "z",
            symbol: "ζ",
            columns: [&[3, 4, 5, 6, 7], &[3, 4, 5, 6, 7], &[4, 5, 6, 7]],
            conditions: &[Infinitesimal::InSpan { v: 0, k: 3 }, Infinitesimal::InSpan { v: 1, k: 3 }],
            constraints: [
                "z71 + z31*z51 - 1/2*z41^2",
                "1/2*z72 + 1/2*z31*z52 - 1/2*z41*z42 + 1/2*z32*z51 + 1/2*z61",
                "1/2*z73 + 1/2*z31*z53 - 1/2*z41*z43 + 1/2*z51",
                "z62 + z32*z52 - 1/2*z42^2",
                "1/2*z63 + 1/2*z32*z53 - 1/2*z42*z43 + 1/2*z52",
                "z53 - 1/2*z43^2",
            ],
            frame: vec![
                z(&[("z43", "1")]),
                z(&[("z31", "1"), ("z41", "z43"), ("z51", "1/2*z43^2"), ("z61", "-(1/2*z32*z43^2 - z42*z43 + z52)")]),
                z(&[("z32", "1"), ("z42", "z43"), ("z52", "1/2*z43^2")]),
            ],
            parts: vec![("E1", vec![0]), ("E2", vec![1, 2])],
            growth: &[3, 5, 7, 8],
            weights: &[1, 1, 1, 2, 2, 3, 3, 4],
            brackets: vec![
                rel(1, 2, def(4, &[("z41", "1"), ("z51", "z43"), ("z61", "-(z32*z43 - z42)")])),
                rel(1, 3, def(5, &[("z42", "1"), ("z52", "z43")])),
                rel(2, 3, Zero),
                rel(1, 4, def(6, &[("z51", "1"), ("z61", "-z32")])),
                rel(1, 5, def(7, &[("z52", "1")])),
                rel(2, 4, Zero),
                rel(2, 5, Zero),
                rel(3, 4, Zero),
                rel(3, 5, Zero),
                rel(1, 6, Zero),
                rel(1, 7, Zero),
                rel(2, 6, Zero),
                rel(2, 7, def(8, &[("z61", "-1")])),
                rel(3, 6, Multiple(1, 8)),
                rel(3, 7, Zero),
            ],
        },
        ModelName::F13 => Blueprint {
            name,
            prefix: "s",
            symbol: "ℓ",
            columns: [&[2, 3, 4, 5, 6, 7], &[4, 5, 6, 7], &[4, 5, 6, 7]],
            conditions: &[Infinitesimal::InSpan { v: 0, k: 3 }, Infinitesimal::Orthogonal { a: 1, b: 2 }],
            constraints: [
                "s71 + s21*s61 + s31*s51 - 1/2*s41^2",
                "1/2*s72 + 1/2*s21*s62 + 1/2*s31*s52 - 1/2*s41*s42 + 1/2*s61",
                "1/2*s73 + 1/2*s21*s63 + 1/2*s31*s53 - 1/2*s41*s43 + 1/2*s51",
                "s62 - 1/2*s42^2",
                "1/2*s63 - 1/2*s42*s43 + 1/2*s52",
                "s53 - 1/2*s43^2",
            ],
            frame: vec![
                z(&[("s42", "1"), ("s52", "s43")]),
                z(&[("s43", "1")]),
                z(&[("s21", "1"), ("s41", "s42"), ("s51", "s52"), ("s61", "1/2*s42^2")]),
                z(&[("s31", "1"), ("s41", "s43"), ("s51", "1/2*s43^2"), ("s61", "-(s52 - s42*s43)")]),
            ],
            parts: vec![("L1", vec![0, 1]), ("L2", vec![2, 3])],
            growth: &[4, 6, 8],
            weights: &[1, 1, 1, 1, 2, 2, 3, 3],
            brackets: vec![
                rel(1, 2, def(5, &[("s52", "-1")])),
                rel(1, 3, def(6, &[("s41", "1"), ("s51", "s43"), ("s61", "s42")])),
                rel(1, 4, Zero),
                rel(2, 3, Zero),
                rel(2, 4, Multiple(1, 6)),
                rel(3, 4, Zero),
                rel(1, 5, Zero),
                rel(1, 6, def(7, &[("s61", "1")])),
                rel(2, 5, Zero),
                rel(2, 6, def(8, &[("s51", "1")])),
                rel(3, 5, Multiple(1, 8)),
                rel(3, 6, Zero),
                rel(4, 5, Multiple(-1, 7)),
                rel(4, 6, Zero),
            ],
        },
        ModelName::F3 => Blueprint {
            name,
            prefix: "x",
            symbol: "ξ",
            columns: [&[4, 5, 6, 7], &[4, 5, 6, 7], &[4, 5, 6, 7]],
            conditions: &[
                Infinitesimal::Orthogonal { a: 0, b: 1 },
                Infinitesimal::Orthogonal { a: 0, b: 2 },
                Infinitesimal::Orthogonal { a: 1, b: 2 },
            ],
            constraints: [
                "x71 - 1/2*x41^2",
                "1/2*x72 - 1/2*x41*x42 + 1/2*x61",
                "1/2*x73 - 1/2*x41*x43 + 1/2*x51",
                "x62 - 1/2*x42^2",
                "1/2*x63 - 1/2*x42*x43 + 1/2*x52",
                "x53 - 1/2*x43^2",
            ],
            frame: vec![
                z(&[("x41", "1"), ("x51", "x43"), ("x61", "x42")]),
                z(&[("x42", "1"), ("x52", "x43")]),
                z(&[("x43", "1")]),
            ],
            parts: vec![("D", vec![0, 1, 2])],
            growth: &[3, 6],
            weights: &[1, 1, 1, 2, 2, 2],
            brackets: {
                let mut b = vec![
                    rel(1, 2, def(4, &[("x61", "-1")])),
                    rel(1, 3, def(5, &[("x51", "-1")])),
                    rel(2, 3, def(6, &[("x52", "-1")])),
                ];
                for i in 1..=3 {
                    for j in 4..=6 {
                        b.push(rel(i, j, Zero));
                    }
                }
                b
            },
        },
        ModelName::Example => unreachable!("the example family has no flag blueprint"),
    }
}

fn coord_name(prefix: &str, row: usize, vector: usize) -> String {
    format!("{prefix}{row}{}", vector + 1)
}

/// Builds a model from the metric: nullity constraints, chart solve,
/// Pfaff system and kernel frame, then attaches the printed data.
pub fn build_model(name: ModelName) -> Result<ModelSpec> {
    if name == ModelName::Example {
        return example_model(ExampleM::Formal);
    }
    let bp = blueprint(name);
    let metric = MetricTable::standard();
    let dependent_rows = |vector: usize, row: usize| SOLVE_ORDER.iter().any(|&(i, j, r)| j == vector && r == row && i <= j);

    let mut free = Vec::new();
    for (v, cols) in bp.columns.iter().enumerate() {
        for &r in *cols {
            if !dependent_rows(v, r) {
                free.push(coord_name(bp.prefix, r, v));
            }
        }
    }
    let chart = Chart::from_names(free.clone(), vec![])?;

    // Raw flag vectors with every coordinate symbolic.
    let raw: Vec<Vec<Scalar>> = (0..3)
        .map(|v| {
            (1..=7)
                .map(|r| {
                    if r == v + 1 {
                        Scalar::one()
                    } else if bp.columns[v].contains(&r) {
                        Scalar::coord(&coord_name(bp.prefix, r, v))
                    } else {
                        Scalar::zero()
                    }
                })
                .collect()
        })
        .collect();

    let label = |i: usize, j: usize| {
        let letter = match name {
            ModelName::F123 => "f",
            ModelName::F23 => "g",
            ModelName::F13 => "h",
            _ => "k",
        };
        format!("({letter}{} | {letter}{})", i + 1, j + 1)
    };
    let printed_index = |i: usize, j: usize| match (i, j) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    };

    let mut constraints = Vec::new();
    for &(i, j, _) in SOLVE_ORDER.iter().rev() {
        let computed = metric.inner(&raw[i], &raw[j]);
        let printed = Scalar::parse(bp.constraints[printed_index(i, j)])?;
        constraints.push(ConstraintEquation {
            label: label(i, j),
            computed: computed.to_string(),
            printed: printed.to_string(),
            matches: computed == printed,
        });
    }

    // Triangular solve: each product is linear in exactly one new dependent.
    let mut solved: BTreeMap<String, Scalar> = BTreeMap::new();
    let subst = |s: &Scalar, solved: &BTreeMap<String, Scalar>| -> Result<Scalar> {
        s.substitute(&|v: &Var| v.coord_name().and_then(|n| solved.get(n).cloned()))
    };
    let mut dependent = Vec::new();
    for &(i, j, r) in SOLVE_ORDER.iter() {
        let target = coord_name(bp.prefix, r, j);
        let eq = subst(&metric.inner(&raw[i], &raw[j]), &solved)?;
        let unsolved: Vec<String> = eq
            .coordinate_dependencies()
            .into_iter()
            .filter(|c| !chart.contains(c))
            .collect();
        if unsolved != [target.clone()] {
            return Err(Error::ConstraintResidue(format!(
                "{} involves {unsolved:?}, expected only {target}",
                label(i, j)
            )));
        }
        let var = Var::coord(&target);
        if eq.numerator().degree_in(&var) != 1 || !eq.denominator().is_constant() {
            return Err(Error::ConstraintResidue(format!("{} is not linear in {target}", label(i, j))));
        }
        let a = eq.derivative(&target);
        let b = eq.substitute(&|v: &Var| (v.coord_name() == Some(target.as_str())).then(Scalar::zero))?;
        let value = b.neg().div(&a)?;
        solved.insert(target.clone(), value.clone());
        dependent.push((target, value));
    }
    // Re-substitute so every solution is in free coordinates only.
    for k in 0..dependent.len() {
        let v = subst(&dependent[k].1, &solved)?;
        dependent[k].1 = v.clone();
        solved.insert(dependent[k].0.clone(), v);
    }
    let vectors: Vec<Vec<Scalar>> = raw
        .iter()
        .map(|vec| vec.iter().map(|s| subst(s, &solved)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    for i in 0..3 {
        for j in i..3 {
            let r = metric.inner(&vectors[i], &vectors[j]);
            if !r.is_zero() {
                return Err(Error::ConstraintResidue(format!("{} = {r}", label(i, j))));
            }
        }
    }

    // Differentials of the flag vectors, as one-forms on the free chart.
    let dvec: Vec<Vec<OneForm>> = vectors
        .iter()
        .map(|vec| vec.iter().map(|s| OneForm::exact(&chart, s)).collect())
        .collect();
    let mut forms = Vec::new();
    for cond in bp.conditions {
        match *cond {
            Infinitesimal::InSpan { v, k } => {
                // Coefficients along v_0..v_{k−1}, by forward substitution on
                // the unit pivots.
                let mut coeff: Vec<OneForm> = Vec::with_capacity(k);
                for m in 0..k {
                    let mut c = dvec[v][m].clone();
                    for (l, cl) in coeff.iter().enumerate() {
                        c = c.add(&cl.scale(&vectors[l][m].neg()))?;
                    }
                    coeff.push(c);
                }
                for r in 0..7 {
                    let mut res = dvec[v][r].clone();
                    for (l, cl) in coeff.iter().enumerate() {
                        res = res.add(&cl.scale(&vectors[l][r].neg()))?;
                    }
                    forms.push(res);
                }
            }
            Infinitesimal::Orthogonal { a, b } => {
                let mut res = OneForm::zero(&chart);
                for i in 0..7 {
                    for j in 0..7 {
                        let g = metric.get(i, j);
                        if *g != q(0) && !vectors[b][j].is_zero() {
                            res = res.add(&dvec[a][i].scale(&vectors[b][j].scale(g)))?;
                        }
                    }
                }
                forms.push(res);
            }
        }
    }
    let mut ech = Echelon::new(chart.dim(), PivotOrder::Last);
    let mut pfaff = Vec::new();
    for f in forms {
        if !f.is_zero() && ech.push(f.coeffs()) {
            pfaff.push(f);
        }
    }
    let derived_frame = kernel_frame(&pfaff)?;

    let frame: Vec<VectorField> = bp
        .frame
        .iter()
        .map(|pairs| VectorField::parse(&chart, pairs))
        .collect::<Result<_>>()?;
    let distribution = Distribution::new(&chart, frame.clone())?;
    let splitting = Splitting::new(
        distribution.clone(),
        bp.parts.iter().map(|(n, idx)| (n.to_string(), idx.clone())).collect(),
    )?;
    Ok(ModelSpec {
        name: bp.name,
        symbol: bp.symbol,
        chart,
        free,
        dependent,
        vectors,
        constraints,
        pfaff,
        derived_frame,
        frame,
        distribution,
        splitting,
        growth: bp.growth.to_vec(),
        weights: bp.weights.to_vec(),
        brackets: bp.brackets,
    })
}

/// How m(x6) enters the example family.
#[derive(Clone, Debug, PartialEq)]
pub enum ExampleM {
    /// A formal function symbol with jets.
    Formal,
    /// A polynomial (or rational function) in x6.
    Polynomial(Scalar),
}

/// ξ1 = ∂x1 + x3∂x4 + (x2 + m(x6))∂x6, ξ2 = ∂x2 + x3∂x5, ξ3 = ∂x3 on ℝ⁶.
pub fn build_example_family(m: &ExampleM) -> Result<Distribution> {
    let coords = ["x1", "x2", "x3", "x4", "x5", "x6"];
    let (chart, mv) = match m {
        ExampleM::Formal => {
            let chart = Chart::new(&coords, vec![SymbolDecl::new("m", "x6")])?;
            (chart, Scalar::jet("m", "x6", 0))
        }
        ExampleM::Polynomial(p) => {
            let chart = Chart::new(&coords, vec![])?;
            chart.check_scalar(p, false)?;
            if p.coordinate_dependencies().iter().any(|c| c != "x6") {
                return Err(Error::InvalidChart(format!("m = {p} must depend on x6 only")));
            }
            if p.derivative("x6").is_zero() {
                return Err(Error::ConstantM);
            }
            (chart, p.clone())
        }
    };
    let c = Scalar::coord;
    let xi1 = VectorField::from_pairs(&chart, &[("x1", Scalar::one()), ("x4", c("x3")), ("x6", c("x2").add(&mv))])?;
    let xi2 = VectorField::from_pairs(&chart, &[("x2", Scalar::one()), ("x5", c("x3"))])?;
    let xi3 = VectorField::coordinate(&chart, "x3")?;
    let d = Distribution::new(&chart, vec![xi1, xi2, xi3])?;
    let g = d.growth();
    if g != [3, 6] {
        return Err(Error::GrowthMismatch {
            expected: vec![3, 6],
            found: g,
        });
    }
    Ok(d)
}

fn example_model(m: ExampleM) -> Result<ModelSpec> {
    let distribution = build_example_family(&m)?;
    let chart = distribution.chart().clone();
    let frame = distribution.frame().to_vec();
    let splitting = Splitting::new(distribution.clone(), vec![("D".into(), vec![0, 1, 2])])?;
    Ok(ModelSpec {
        name: ModelName::Example,
        symbol: "ξ",
        free: chart.coords().to_vec(),
        chart,
        dependent: Vec::new(),
        vectors: Vec::new(),
        constraints: Vec::new(),
        pfaff: Vec::new(),
        derived_frame: frame.clone(),
        frame,
        distribution,
        splitting,
        growth: vec![3, 6],
        weights: vec![1, 1, 1, 2, 2, 2],
        brackets: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketCheck {
    pub relation: String,
    pub passed: bool,
    pub computed: String,
}

fn signed(sign: i64, sym: &str, k: usize) -> String {
    match sign {
        1 => format!("{sym}{k}"),
        -1 => format!("−{sym}{k}"),
        s => format!("{s}·{sym}{k}"),
    }
}

/// Checks every printed bracket relation; printed definitions `=: v_k`
/// enter the frame as printed, so later relations use the printed vectors.
pub fn check_bracket_table(m: &ModelSpec) -> Result<Vec<BracketCheck>> {
    let sym = m.symbol;
    let mut vecs: BTreeMap<usize, VectorField> = m.frame.iter().cloned().enumerate().map(|(i, v)| (i + 1, v)).collect();
    let mut out = Vec::new();
    for r in &m.brackets {
        let (a, b) = match (vecs.get(&r.left), vecs.get(&r.right)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Invariant(format!(
                    "bracket [{sym}{}, {sym}{}] uses an undefined vector",
                    r.left, r.right
                )))
            }
        };
        let computed = a.bracket(b)?;
        let head = format!("[{sym}{}, {sym}{}]", r.left, r.right);
        let (relation, expected) = match &r.value {
            PrintedValue::Zero => (format!("{head} = 0"), VectorField::zero(&m.chart)),
            PrintedValue::Defines(k, pairs) => {
                let v = VectorField::parse(&m.chart, pairs)?;
                vecs.insert(*k, v.clone());
                (format!("{head} = {v} =: {sym}{k}"), v)
            }
            PrintedValue::Multiple(sign, k) => {
                let v = vecs
                    .get(k)
                    .ok_or_else(|| Error::Invariant(format!("{sym}{k} used before it is defined")))?;
                (format!("{head} = {}", signed(*sign, sym, *k)), v.scale(&Scalar::int(*sign)))
            }
        };
        out.push(BracketCheck {
            relation,
            passed: computed == expected,
            computed: computed.to_string(),
        });
    }
    Ok(out)
}

/// The frame v_1.. of a model including the printed bracket definitions.
pub fn full_frame(m: &ModelSpec) -> Result<Vec<VectorField>> {
    let mut vecs: BTreeMap<usize, VectorField> = m.frame.iter().cloned().enumerate().map(|(i, v)| (i + 1, v)).collect();
    for r in &m.brackets {
        if let PrintedValue::Defines(k, pairs) = &r.value {
            vecs.insert(*k, VectorField::parse(&m.chart, pairs)?);
        }
    }
    Ok(vecs.into_values().collect())
}

/// [δ_i, δ_j] = Σ c_k δ_k in the graded algebra.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradedBracket {
    pub left: usize,
    pub right: usize,
    /// (k, c_k), 1-based, nonzero coefficients only.
    pub value: Vec<(usize, String)>,
}

/// Structure constants of the graded algebra of a weighted frame: the class
/// of [v_i, v_j] in F^(w_i+w_j) / F^(w_i+w_j−1), expressed in the classes
/// of the frame vectors of weight w_i + w_j. Pairs whose weight exceeds
/// the top weight bracket to zero.
pub fn gradation_algebra(frame: &[VectorField], weights: &[usize]) -> Result<Vec<GradedBracket>> {
    assert_eq!(frame.len(), weights.len(), "one weight per frame vector");
    let chart = frame[0].chart().clone();
    let top = weights.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for i in 0..frame.len() {
        for j in i + 1..frame.len() {
            let w = weights[i] + weights[j];
            let mut value = Vec::new();
            if w <= top {
                let lower: Vec<usize> = (0..frame.len()).filter(|&k| weights[k] < w).collect();
                let level: Vec<usize> = (0..frame.len()).filter(|&k| weights[k] == w).collect();
                let order: Vec<usize> = lower.iter().chain(&level).copied().collect();
                let rows: Vec<Vec<Scalar>> = order.iter().map(|&k| frame[k].coeffs().to_vec()).collect();
                let e = Echelon::from_rows(&rows, chart.dim(), PivotOrder::First);
                let br = frame[i].bracket(&frame[j])?;
                let (res, comb) = e.reduce(br.coeffs());
                if res.iter().any(|x| !x.is_zero()) {
                    return Err(Error::Invariant(format!(
                        "[v{}, v{}] leaves the weight-{w} part of the flag",
                        i + 1,
                        j + 1
                    )));
                }
                for (pos, &k) in order.iter().enumerate().skip(lower.len()) {
                    if !comb[pos].is_zero() {
                        value.push((k + 1, comb[pos].to_string()));
                    }
                }
            }
            out.push(GradedBracket {
                left: i + 1,
                right: j + 1,
                value,
            });
        }
    }
    Ok(out)
}

/// The printed 18 relations of the graded algebra of the complete flag
/// model, as (i, j, Some((sign, k))) for [δ_i, δ_j] = sign·δ_k or None for 0.
pub const F123_GRADATION: [(usize, usize, Option<(i64, usize)>); 18] = [
    (1, 2, Some((1, 4))),
    (1, 3, None),
    (2, 3, Some((1, 5))),
    (1, 4, None),
    (1, 5, Some((1, 6))),
    (2, 4, None),
    (2, 5, None),
    (3, 4, Some((-1, 6))),
    (3, 5, Some((1, 7))),
    (1, 6, None),
    (1, 7, Some((1, 8))),
    (2, 6, None),
    (2, 7, None),
    (3, 6, Some((1, 8))),
    (3, 7, None),
    (1, 8, None),
    (2, 8, Some((1, 9))),
    (3, 8, None),
];

/// Compares the computed graded algebra of the complete flag model with the
/// printed table.
pub fn check_f123_gradation(m: &ModelSpec) -> Result<Vec<BracketCheck>> {
    let table = gradation_algebra(&full_frame(m)?, &m.weights)?;
    let mut out = Vec::new();
    for (i, j, value) in F123_GRADATION {
        let got = table
            .iter()
            .find(|g| g.left == i && g.right == j)
            .ok_or_else(|| Error::Invariant(format!("missing pair ({i}, {j})")))?;
        let expected: Vec<(usize, String)> = value
            .map(|(s, k)| vec![(k, s.to_string())])
            .unwrap_or_default();
        let relation = match value {
            Some((s, k)) => format!("[δ{i}, δ{j}] = {}", signed(s, "δ", k)),
            None => format!("[δ{i}, δ{j}] = 0"),
        };
        out.push(BracketCheck {
            relation,
            passed: got.value == expected,
            computed: format!("{:?}", got.value),
        });
    }
    Ok(out)
}

/// Nonzero pattern of the B3(2,3) graded algebra: [δ_i, δ_j] is a nonzero
/// multiple of δ_k exactly for these triples.
pub const B3_23_GRADATION_SHAPE: [(usize, usize, usize); 6] = [(1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 7), (2, 7, 8), (3, 6, 8)];

/// Compares the nonzero pattern of the graded algebra of the F23 model with
/// the B3(2,3) table, on brackets with a degree-one generator. Signs are
/// not compared.
pub fn check_f23_gradation_shape(m: &ModelSpec) -> Result<Vec<BracketCheck>> {
    let table = gradation_algebra(&full_frame(m)?, &m.weights)?;
    Ok(table
        .iter()
        .filter(|g| m.weights[g.left - 1] == 1)
        .map(|g| {
            let expected = B3_23_GRADATION_SHAPE
                .iter()
                .find(|&&(i, j, _)| i == g.left && j == g.right)
                .map(|&(_, _, k)| k);
            let shape: Vec<usize> = g.value.iter().map(|(k, _)| *k).collect();
            let relation = match expected {
                Some(k) => format!("[δ{}, δ{}] ∝ δ{k}", g.left, g.right),
                None => format!("[δ{}, δ{}] = 0", g.left, g.right),
            };
            BracketCheck {
                relation,
                passed: shape == expected.into_iter().collect::<Vec<_>>(),
                computed: format!("{:?}", g.value),
            }
        })
        .collect())
}

/// The correspondences between prolongations of the null-Grassmannian
/// model and the other flag models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Correspondence {
    /// P(D) of F3 ≅ F23.
    ProjectiveF23,
    /// P(0 ⊕ E2) of P(D) ≅ F123.
    FiberLineF123,
    /// P(D*) of F3 ≅ F13.
    DualF13,
}

impl Correspondence {
    pub const ALL: [Correspondence; 3] = [
        Correspondence::ProjectiveF23,
        Correspondence::FiberLineF123,
        Correspondence::DualF13,
    ];

    pub fn target(self) -> ModelName {
        match self {
            Correspondence::ProjectiveF23 => ModelName::F23,
            Correspondence::FiberLineF123 => ModelName::F123,
            Correspondence::DualF13 => ModelName::F13,
        }
    }
}

/// The null-Grassmannian model with its frame ordered ξ3, ξ2, ξ1, so that
/// the affine pieces used by the prolongations (first frame vector
/// nonvanishing) match the flag charts of the other models.
pub fn f3_reordered() -> Result<Distribution> {
    let m = build_model(ModelName::F3)?;
    let f = &m.frame;
    Distribution::new(&m.chart, vec![f[2].clone(), f[1].clone(), f[0].clone()])
}

/// Prolongs the reordered null-Grassmannian model as the correspondence
/// requires.
pub fn prolong_for(c: Correspondence) -> Result<ProlongationResult> {
    let d = f3_reordered()?;
    match c {
        Correspondence::ProjectiveF23 => prolong_projective(&d),
        Correspondence::FiberLineF123 => prolong_fiber_line(&prolong_projective(&d)?),
        Correspondence::DualF13 => prolong_dual(&d),
    }
}

/// The fixed change of coordinates from the prolonged chart to the model
/// chart. A point of P(D) with direction ξ3 + z2 ξ2 + z3 ξ1 is the flag
/// V2 ⊂ V3 with V2 the kernel of k_i ↦ u_i, and similarly for the line
/// bundle and hyperplane charts.
pub fn identification(c: Correspondence, source: &ChartRef, target: &ChartRef) -> Result<Substitution> {
    // forward: source coordinate in target coordinates;
    // inverse: target coordinate in source coordinates.
    let (forward, inverse): (Vec<(&str, &str)>, Vec<(&str, &str)>) = match c {
        Correspondence::ProjectiveF23 => (
            vec![
                ("z3", "-z31"),
                ("z2", "-z32"),
                ("x43", "z43"),
                ("x41", "z41 - z31*z43"),
                ("x51", "z51 - 1/2*z31*z43^2"),
                ("x42", "z42 - z32*z43"),
                ("x52", "z52 - 1/2*z32*z43^2"),
                ("x61", "z61 - z31*(z42*z43 - 1/2*z32*z43^2 - z52)"),
            ],
            vec![
                ("z31", "-z3"),
                ("z32", "-z2"),
                ("z43", "x43"),
                ("z41", "x41 - z3*x43"),
                ("z51", "x51 - 1/2*z3*x43^2"),
                ("z42", "x42 - z2*x43"),
                ("z52", "x52 - 1/2*z2*x43^2"),
                ("z61", "x61 - z3*(x42*x43 - x52)"),
            ],
        ),
        Correspondence::FiberLineF123 => (
            vec![
                ("w", "-w21"),
                ("z2", "-w32"),
                ("z3", "w21*w32 - w31"),
                ("x43", "w43"),
                ("x42", "w42 - w32*w43"),
                ("x52", "w52 - 1/2*w32*w43^2"),
                ("x41", "w41 - w21*w42 + (w21*w32 - w31)*w43"),
                ("x51", "w51 - w21*w52 + 1/2*(w21*w32 - w31)*w43^2"),
                (
                    "x61",
                    "w61 - w21*(1/2*w42^2 - w32*w52) + (w21*w32 - w31)*(w42*w43 - 1/2*w32*w43^2 - w52)",
                ),
            ],
            vec![
                ("w21", "-w"),
                ("w32", "-z2"),
                ("w31", "w*z2 - z3"),
                ("w43", "x43"),
                ("w42", "x42 - z2*x43"),
                ("w52", "x52 - 1/2*z2*x43^2"),
                ("w41", "x41 - z3*x43 - w*(x42 - z2*x43)"),
                ("w51", "x51 - 1/2*z3*x43^2 - w*(x52 - 1/2*z2*x43^2)"),
                (
                    "w61",
                    "x61 - z3*(x42*x43 - x52) - w*(1/2*(x42 - z2*x43)^2 + z2*(x52 - 1/2*z2*x43^2))",
                ),
            ],
        ),
        Correspondence::DualF13 => (
            vec![
                ("y2", "-s21"),
                ("y1", "-s31"),
                ("x42", "s42"),
                ("x52", "s52"),
                ("x43", "s43"),
                ("x41", "s41 - s21*s42 - s31*s43"),
                ("x51", "s51 - s21*s52 - 1/2*s31*s43^2"),
                ("x61", "s61 - 1/2*s21*s42^2 - s31*(s42*s43 - s52)"),
            ],
            vec![
                ("s21", "-y2"),
                ("s31", "-y1"),
                ("s42", "x42"),
                ("s52", "x52"),
                ("s43", "x43"),
                ("s41", "x41 - y2*x42 - y1*x43"),
                ("s51", "x51 - y2*x52 - 1/2*y1*x43^2"),
                ("s61", "x61 - 1/2*y2*x42^2 - y1*(x42*x43 - x52)"),
            ],
        ),
    };
    Substitution::new(source, target, &forward, &inverse)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub correspondence: Correspondence,
    pub distribution_matches: bool,
    /// Per splitting part: (part name, spans agree).
    pub parts: Vec<(String, bool)>,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.distribution_matches && self.parts.iter().all(|(_, ok)| *ok)
    }
}

/// Pushes the prolongation forward along the identification and compares
/// the distribution and each splitting part with the target model.
pub fn check_coherence(c: Correspondence) -> Result<CoherenceReport> {
    let pr = prolong_for(c)?;
    let model = build_model(c.target())?;
    let sub = identification(c, pr.chart(), &model.chart)?;
    let pushed: Vec<VectorField> = pr
        .distribution
        .frame()
        .iter()
        .map(|v| sub.pushforward(v))
        .collect::<Result<_>>()?;
    let distribution_matches = same_span(&pushed, model.distribution.frame())?;
    let mut parts = Vec::new();
    for (k, (name, _)) in pr.splitting.parts.iter().enumerate() {
        let mine: Vec<VectorField> = pr
            .splitting
            .part_fields(k)
            .iter()
            .map(|v| sub.pushforward(v))
            .collect::<Result<_>>()?;
        let theirs = model.splitting.part_fields(k);
        parts.push((name.clone(), same_span(&mine, &theirs)?));
    }
    Ok(CoherenceReport {
        correspondence: c,
        distribution_matches,
        parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_has_signature_3_4() {
        let g = MetricTable::standard();
        assert!(g.is_symmetric());
        assert_eq!(g.signature(), (3, 4));
        assert_eq!(*g.get(0, 6), q_frac(1, 2));
        assert_eq!(*g.get(3, 3), q_frac(-1, 2));
        assert_eq!(*g.get(0, 0), q(0));
    }

    #[test]
    fn models_rederive_constraints_and_frames() {
        for name in [ModelName::F123, ModelName::F23, ModelName::F13, ModelName::F3] {
            let m = build_model(name).unwrap();
            for c in &m.constraints {
                assert!(c.matches, "{name} {}: {} vs {}", c.label, c.computed, c.printed);
            }
            assert!(m.frame_matches(), "{name}: derived {:?}", m.derived_frame.iter().map(|v| v.to_string()).collect::<Vec<_>>());
            assert_eq!(m.distribution.growth(), m.growth, "{name}");
        }
    }

    #[test]
    fn f3_brackets() {
        let m = build_model(ModelName::F3).unwrap();
        let checks = check_bracket_table(&m).unwrap();
        assert_eq!(checks.len(), 12);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn printed_bracket_tables() {
        for name in [ModelName::F123, ModelName::F13] {
            let m = build_model(name).unwrap();
            let checks = check_bracket_table(&m).unwrap();
            assert!(checks.iter().all(|c| c.passed), "{name}: {checks:?}");
        }
        let m = build_model(ModelName::F23).unwrap();
        let failed: Vec<_> = check_bracket_table(&m)
            .unwrap()
            .into_iter()
            .filter(|c| !c.passed)
            .collect();
        // The printed sign of [ζ2, ζ7] is wrong: the bracket is +∂z61.
        assert_eq!(failed.len(), 1, "{failed:?}");
        assert!(failed[0].relation.starts_with("[ζ2, ζ7]"));
        assert_eq!(failed[0].computed, VectorField::parse(&m.chart, &[("z61", "1")]).unwrap().to_string());
    }

    #[test]
    fn f123_gradation_matches() {
        let m = build_model(ModelName::F123).unwrap();
        let checks = check_f123_gradation(&m).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn commuting_frame_has_trivial_gradation() {
        let chart = Chart::new(&["a", "b", "c"], vec![]).unwrap();
        let g = vec![
            VectorField::coordinate(&chart, "a").unwrap(),
            VectorField::coordinate(&chart, "b").unwrap(),
        ];
        let table = gradation_algebra(&g, &[1, 1]).unwrap();
        assert!(table.iter().all(|b| b.value.is_empty()));
    }

    #[test]
    fn f23_gradation_shape() {
        let m = build_model(ModelName::F23).unwrap();
        let checks = check_f23_gradation_shape(&m).unwrap();
        assert_eq!(checks.len(), 18);
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn pfaff_systems_cut_out_the_first_level_only() {
        for name in [ModelName::F123, ModelName::F23, ModelName::F13, ModelName::F3] {
            let m = build_model(name).unwrap();
            for w in &m.pfaff {
                for v in &m.frame {
                    assert!(w.pair(v).unwrap().is_zero(), "{name}");
                }
            }
            let second = m.distribution.flag_level(2);
            let hits = m
                .pfaff
                .iter()
                .flat_map(|w| second.frame().iter().map(move |v| w.pair(v).unwrap()))
                .any(|s| !s.is_zero());
            assert!(hits, "{name}");
        }
    }

    #[test]
    fn polynomial_m_flows_into_projective_coefficients() {
        let d = build_example_family(&ExampleM::Polynomial(Scalar::parse("x6^2").unwrap())).unwrap();
        let p = prolong_projective(&d).unwrap();
        assert_eq!(p.coefficient("b").unwrap(), &Scalar::parse("-2*x6*z3").unwrap());
        assert!(p.coefficient("a").unwrap().is_zero());
    }

    #[test]
    fn example_family_modes() {
        let d = build_example_family(&ExampleM::Formal).unwrap();
        assert_eq!(d.growth(), vec![3, 6]);
        let p = Scalar::parse("x6^2").unwrap();
        assert!(build_example_family(&ExampleM::Polynomial(p)).is_ok());
        let k = Scalar::parse("3").unwrap();
        assert!(matches!(build_example_family(&ExampleM::Polynomial(k)), Err(Error::ConstantM)));
        assert!(matches!(ModelName::parse("bogus"), Err(Error::UnknownModel(_))));
    }

    #[test]
    fn correspondences_are_coherent() {
        for c in Correspondence::ALL {
            let r = check_coherence(c).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }
}
