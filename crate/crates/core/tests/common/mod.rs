//! Seeded randomized checks shared by the property and acceptance suites.
//! Each returns true when the property holds for the sampled data.

#![allow(dead_code)]

use b3tower::distribution::{Distribution, Splitting};
use std::collections::BTreeMap;

use b3tower::hamiltonian::{ideal_membership, poisson_bracket, CotangentChart, FiberPolynomial};
use b3tower::linalg::{generic_rank, rank, reduce_mod_frame};
use b3tower::poly::VarKind;
use b3tower::models::{build_example_family, build_model, ExampleM, ModelName};
use b3tower::sampling::{
    apply_frame_change, random_field, random_frame_change, random_point, random_polynomial, PolyShape, SampleRng,
};
use b3tower::structure::{check_b3_123, check_b3_13, check_b3_23, B3_13Mode};
use b3tower::{Chart, ChartRef, Scalar, Substitution, VectorField};
use rand::Rng;

const SMALL: PolyShape = PolyShape {
    max_terms: 3,
    max_degree: 2,
    max_coeff: 3,
};

const TINY: PolyShape = PolyShape {
    max_terms: 2,
    max_degree: 1,
    max_coeff: 2,
};

pub fn plane3() -> ChartRef {
    Chart::new(&["a", "b", "c"], vec![]).unwrap()
}

pub fn jacobi_vector_fields(rng: &mut SampleRng) -> bool {
    let chart = plane3();
    let [x, y, z] = [(); 3].map(|_| random_field(rng, &chart, SMALL, 0.2));
    let cyc = x
        .bracket(&y.bracket(&z).unwrap())
        .unwrap()
        .add(&y.bracket(&z.bracket(&x).unwrap()).unwrap())
        .unwrap()
        .add(&z.bracket(&x.bracket(&y).unwrap()).unwrap())
        .unwrap();
    cyc.is_zero()
}

/// A fiber polynomial of degree ≤ 2 with random polynomial coefficients.
fn random_fiber_polynomial(rng: &mut SampleRng, cot: &std::sync::Arc<CotangentChart>) -> FiberPolynomial {
    let base = cot.base().coords().to_vec();
    let n = cot.fibers().len();
    let mut f = FiberPolynomial::zero(cot);
    for _ in 0..rng.gen_range(1..=3) {
        let mut exps = vec![0u32; n];
        for _ in 0..rng.gen_range(0..=2) {
            exps[rng.gen_range(0..n)] += 1;
        }
        let c = random_polynomial(rng, &base, TINY);
        f = f.add(&FiberPolynomial::monomial(cot, exps, c)).unwrap();
    }
    f
}

pub fn jacobi_poisson(rng: &mut SampleRng) -> bool {
    let cot = CotangentChart::new(&plane3()).unwrap();
    let [f, g, h] = [(); 3].map(|_| random_fiber_polynomial(rng, &cot));
    let pb = |a: &FiberPolynomial, b: &FiberPolynomial| poisson_bracket(a, b).unwrap();
    let cyc = pb(&f, &pb(&g, &h))
        .add(&pb(&g, &pb(&h, &f)))
        .unwrap()
        .add(&pb(&h, &pb(&f, &g)))
        .unwrap();
    cyc.is_zero()
}

pub fn hamiltonian_is_lie_morphism(rng: &mut SampleRng) -> bool {
    let chart = plane3();
    let cot = CotangentChart::new(&chart).unwrap();
    let x = random_field(rng, &chart, SMALL, 0.2);
    let y = random_field(rng, &chart, SMALL, 0.2);
    let h = |v: &VectorField| FiberPolynomial::hamiltonian_of(&cot, v).unwrap();
    poisson_bracket(&h(&x), &h(&y)).unwrap() == h(&x.bracket(&y).unwrap())
}

pub fn four_fold_identity(rng: &mut SampleRng) -> bool {
    let chart = plane3();
    let [a, b, c] = [(); 3].map(|_| random_field(rng, &chart, TINY, 0.3));
    b3tower::structure::four_fold_bracket_residue(&a, &b, &c).unwrap().is_zero()
}

/// A (3,6)-distribution: the null-Grassmannian model or the example family
/// with a random nonconstant polynomial m.
fn random_36(rng: &mut SampleRng) -> Distribution {
    if rng.gen_bool(0.5) {
        return build_model(ModelName::F3).unwrap().distribution;
    }
    let x6 = ["x6".to_string()];
    loop {
        let p = random_polynomial(rng, &x6, PolyShape {
            max_terms: 2,
            max_degree: 3,
            max_coeff: 3,
        });
        if !p.derivative("x6").is_zero() {
            return build_example_family(&ExampleM::Polynomial(p)).unwrap();
        }
    }
}

pub fn growth_invariant_under_frame_change(rng: &mut SampleRng) -> bool {
    let d = random_36(rng);
    let m = random_frame_change(rng, d.chart(), 3, TINY);
    let frame = apply_frame_change(&m, d.frame()).unwrap();
    let changed = Distribution::new(d.chart(), frame).unwrap();
    changed.growth() == d.growth() && changed.same_span(&d)
}

/// Replacing θ3 by θ3 + f·θ1 keeps the B3(1,2,3) certificate.
pub fn theta3_replacement_invariant(rng: &mut SampleRng) -> bool {
    let m = build_model(ModelName::F123).unwrap();
    let f: Scalar = random_polynomial(rng, m.chart.coords(), TINY);
    let f = if f.is_zero() { Scalar::one() } else { f };
    let frame = m.frame.clone();
    let t3 = frame[2].add(&frame[0].scale(&f)).unwrap();
    let d = Distribution::new(&m.chart, vec![frame[0].clone(), frame[1].clone(), t3]).unwrap();
    let s = Splitting::new(d, m.splitting.parts.clone()).unwrap();
    check_b3_123(&s).unwrap().overall
}

fn random_fraction(rng: &mut SampleRng, coords: &[String]) -> Scalar {
    let num = random_polynomial(rng, coords, SMALL);
    let den = random_polynomial(rng, coords, TINY);
    if den.is_zero() {
        num
    } else {
        num.div(&den).unwrap()
    }
}

fn abc() -> Vec<String> {
    ["a", "b", "c"].map(String::from).to_vec()
}

pub fn scalar_ring_laws(rng: &mut SampleRng) -> bool {
    let c = abc();
    let [f, g, h] = [(); 3].map(|_| random_fraction(rng, &c));
    f.add(&g).add(&h) == f.add(&g.add(&h)) && f.mul(&g.add(&h)) == f.mul(&g).add(&f.mul(&h))
}

pub fn leibniz_and_mixed_partials(rng: &mut SampleRng) -> bool {
    let c = abc();
    let f = random_fraction(rng, &c);
    let g = random_fraction(rng, &c);
    c.iter().all(|x| f.mul(&g).derivative(x) == f.derivative(x).mul(&g).add(&f.mul(&g.derivative(x))))
        && c.iter()
            .all(|x| c.iter().all(|y| f.derivative(x).derivative(y) == f.derivative(y).derivative(x)))
}

/// Evaluation is a ring morphism wherever nothing has a pole.
pub fn evaluation_commutes_with_arithmetic(rng: &mut SampleRng) -> bool {
    let c = abc();
    let f = random_fraction(rng, &c);
    let g = random_fraction(rng, &c);
    let p = random_point(rng, &plane3(), 5);
    let none = BTreeMap::new();
    let ev = |s: &Scalar| s.evaluate(&p, &none).ok();
    let (Some(fv), Some(gv)) = (ev(&f), ev(&g)) else {
        return true;
    };
    let quotient_ok = match (f.div(&g), Scalar::from_q(gv.clone()).is_zero()) {
        (Ok(q), false) => ev(&q).is_none_or(|qv| qv == &fv / &gv),
        _ => true,
    };
    ev(&f.add(&g)) == Some(&fv + &gv) && ev(&f.mul(&g)) == Some(&fv * &gv) && quotient_ok
}

pub fn reduce_mod_frame_is_idempotent(rng: &mut SampleRng) -> bool {
    let chart = plane3();
    let frame: Vec<VectorField> = (0..2).map(|_| random_field(rng, &chart, TINY, 0.3)).collect();
    let v = random_field(rng, &chart, SMALL, 0.2);
    let (res, _) = reduce_mod_frame(&v, &frame).unwrap();
    let (again, comb) = reduce_mod_frame(&res, &frame).unwrap();
    again == res && comb.iter().all(Scalar::is_zero)
}

/// Rank of the coefficient matrix evaluated at a random point, or None at
/// a pole.
pub fn pointwise_rank(rng: &mut SampleRng, fields: &[VectorField]) -> Option<usize> {
    let chart = fields[0].chart();
    let p = random_point(rng, chart, 1000);
    let none = BTreeMap::new();
    let rows: Option<Vec<Vec<Scalar>>> = fields
        .iter()
        .map(|v| {
            v.coeffs()
                .iter()
                .map(|c| c.evaluate(&p, &none).ok().map(Scalar::from_q))
                .collect()
        })
        .collect();
    Some(rank(&rows?, chart.dim()))
}

pub fn random_frame(rng: &mut SampleRng, k: usize) -> Vec<VectorField> {
    let chart = Chart::new(&["a", "b", "c", "d"], vec![]).unwrap();
    (0..k).map(|_| random_field(rng, &chart, TINY, 0.4)).collect()
}

pub fn pointwise_rank_bounded_by_generic(rng: &mut SampleRng) -> bool {
    let frame = random_frame(rng, 3);
    let g = generic_rank(&frame).unwrap();
    pointwise_rank(rng, &frame).is_none_or(|r| r <= g)
}

/// A random triangular change of coordinates (a, b, c) → (u, v, w) and its
/// explicit inverse.
fn random_triangular_substitution(rng: &mut SampleRng) -> Substitution {
    let source = plane3();
    let target = Chart::new(&["u", "v", "w"], vec![]).unwrap();
    let p = random_polynomial(rng, &["a".to_string()], SMALL);
    let q = random_polynomial(rng, &["a".to_string(), "b".to_string()], SMALL);
    let rename = |s: &Scalar, map: &[(&str, Scalar)]| {
        s.substitute(&|var| match var.kind() {
            VarKind::Coord(n) => map.iter().find(|(k, _)| k == n).map(|(_, v)| v.clone()),
            _ => None,
        })
        .unwrap()
    };
    let u = Scalar::coord("u");
    let b_of = Scalar::coord("v").sub(&rename(&p, &[("a", u.clone())]));
    let c_of = Scalar::coord("w").sub(&rename(&q, &[("a", u.clone()), ("b", b_of.clone())]));
    let forward = [("a", u.to_string()), ("b", b_of.to_string()), ("c", c_of.to_string())];
    let inverse = [
        ("u", "a".to_string()),
        ("v", Scalar::coord("b").add(&p).to_string()),
        ("w", Scalar::coord("c").add(&q).to_string()),
    ];
    let pairs = |xs: &[(&'static str, String); 3]| -> Vec<(&'static str, String)> { xs.to_vec() };
    let f = pairs(&forward);
    let i = pairs(&inverse);
    let f: Vec<(&str, &str)> = f.iter().map(|(k, v)| (*k, v.as_str())).collect();
    let i: Vec<(&str, &str)> = i.iter().map(|(k, v)| (*k, v.as_str())).collect();
    Substitution::new(&source, &target, &f, &i).unwrap()
}

pub fn substitution_is_functorial(rng: &mut SampleRng) -> bool {
    let s = random_triangular_substitution(rng);
    let v = random_field(rng, &s.source, SMALL, 0.2);
    s.inverted().pushforward(&s.pushforward(&v).unwrap()).unwrap() == v
}

pub fn membership_certificate_reconstructs(rng: &mut SampleRng) -> bool {
    let cot = CotangentChart::new(&plane3()).unwrap();
    let base = cot.base().coords().to_vec();
    let gens: Vec<FiberPolynomial> = (0..2)
        .map(|i| {
            let mut coeffs: Vec<Scalar> = (0..3).map(|_| random_polynomial(rng, &base, TINY)).collect();
            coeffs[i] = Scalar::int(1);
            FiberPolynomial::linear(&cot, &coeffs)
        })
        .collect();
    let mut q = random_fiber_polynomial(rng, &cot);
    if rng.gen_bool(0.5) {
        q = gens
            .iter()
            .map(|g| random_fiber_polynomial(rng, &cot).mul(g).unwrap())
            .fold(FiberPolynomial::zero(&cot), |acc, t| acc.add(&t).unwrap());
        let m = ideal_membership(&q, &gens).unwrap();
        if !m.member {
            return false;
        }
    }
    let m = ideal_membership(&q, &gens).unwrap();
    match m.certificate {
        Some(cert) => {
            let rebuilt = cert
                .iter()
                .zip(&gens)
                .map(|(c, g)| c.mul(g).unwrap())
                .fold(FiberPolynomial::zero(&cot), |acc, t| acc.add(&t).unwrap());
            m.member && rebuilt == q
        }
        None => !m.member && !m.remainder.is_zero(),
    }
}

/// Rescaling each part of a model splitting keeps the certificate outcome.
/// B3(2,3) and B3(1,2,3) take nonzero functions; the B3(1,3) conditions
/// refer to particular generators, so there only constants are used.
pub fn certificates_are_splitting_equivariant(rng: &mut SampleRng) -> bool {
    let name = [ModelName::F23, ModelName::F123, ModelName::F13][rng.gen_range(0..3)];
    let m = build_model(name).unwrap();
    let check = |s: &Splitting| match name {
        ModelName::F23 => check_b3_23(s).unwrap().overall,
        ModelName::F123 => check_b3_123(s).unwrap().overall,
        _ => check_b3_13(s, B3_13Mode::Generalized).unwrap().overall,
    };
    let before = check(&m.splitting);
    let mut frame = m.frame.clone();
    for (_, idx) in &m.splitting.parts {
        let mut c = if name == ModelName::F13 {
            random_polynomial(rng, &[], TINY)
        } else {
            random_polynomial(rng, m.chart.coords(), TINY)
        };
        if c.is_zero() {
            c = Scalar::int(-2);
        }
        for &i in idx {
            frame[i] = frame[i].scale(&c);
        }
    }
    let d = Distribution::new(&m.chart, frame).unwrap();
    let s = Splitting::new(d, m.splitting.parts.clone()).unwrap();
    before && check(&s)
}
