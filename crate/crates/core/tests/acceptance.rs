//! End-to-end acceptance suite. Runs without the libtest harness so that
//! each criterion prints its PASS/FAIL line on every run. The process fails
//! when a criterion has a failure other than the known printed-table
//! erratum.

use b3tower::distribution::{Distribution, Splitting};
use b3tower::hamiltonian::{evaluate_claim, SvcClaim};
use b3tower::linalg::same_span;
use b3tower::models::{
    build_example_family, build_model, check_bracket_table, check_f123_gradation, check_f23_gradation_shape,
    ExampleM, ModelName,
};
use b3tower::poly::{Var, VarKind};
use b3tower::prolong::{
    prolong_dual, prolong_fiber_line, prolong_projective, prolong_svc_cone, reduce_prolongation, routes_coincide,
    ProlongationResult,
};
use b3tower::sampling;
use b3tower::structure::{check_b3_123, check_b3_13, check_b3_23, B3_13Mode};
use b3tower::{Scalar, VectorField};

mod common;

struct Tally {
    criterion: usize,
    checks: Vec<(String, bool)>,
}

impl Tally {
    fn new(criterion: usize) -> Tally {
        Tally {
            criterion,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, label: impl Into<String>, ok: bool) {
        self.checks.push((label.into(), ok));
    }

    fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(l, _)| l.as_str()).collect()
    }

    /// Checks that may fail without failing the run.
    fn tolerated(&self, label: &str) -> bool {
        // The printed [ζ2, ζ7] = −∂/∂z61 is a sign error in the source: the
        // bracket of the printed fields is +∂/∂z61. It is reported as a
        // failure; every other check must hold.
        self.criterion == 1 && label.starts_with("F23 [ζ2, ζ7] = -d/dz61 =: ζ8")
    }

    /// Prints the criterion line and returns whether every check passed.
    fn report(&self) -> bool {
        let failed = self.failures();
        let n = self.checks.len();
        if failed.is_empty() {
            println!("criterion {}: PASS ({n}/{n} checks)", self.criterion);
        } else {
            println!(
                "criterion {}: FAIL ({}/{n} checks passed; failing: {})",
                self.criterion,
                n - failed.len(),
                failed.join("; ")
            );
        }
        failed.is_empty()
    }
}

fn example() -> Distribution {
    build_example_family(&ExampleM::Formal).unwrap()
}

fn f3() -> Distribution {
    build_model(ModelName::F3).unwrap().distribution
}

fn sc(s: &str) -> Scalar {
    Scalar::parse(s).unwrap()
}

/// Imposes m′ = 0: m(x6) becomes a constant symbol, so brackets produce
/// no derivatives of m.
fn freeze_m(v: &VectorField) -> VectorField {
    let constant_m = Scalar::var(Var::jet("m", &[], &[]));
    v.map_coeffs(&|c| {
        c.substitute(&|var| match var.kind() {
            VarKind::Jet { symbol, .. } if symbol == "m" => Some(if var.total_order() == 0 {
                constant_m.clone()
            } else {
                Scalar::zero()
            }),
            _ => None,
        })
    })
    .unwrap()
}

fn criterion_1_model_reproduction() -> Tally {
    let mut t = Tally::new(1);
    for name in [ModelName::F123, ModelName::F23, ModelName::F13, ModelName::F3] {
        let m = build_model(name).unwrap();
        for c in &m.constraints {
            t.check(format!("{name} constraint {}", c.label), c.matches);
        }
        t.check(format!("{name} frame from Pfaff system"), m.frame_matches());
        for b in check_bracket_table(&m).unwrap() {
            t.check(format!("{name} {} (computed {})", b.relation, b.computed), b.passed);
        }
    }
    let f123 = build_model(ModelName::F123).unwrap();
    for b in check_f123_gradation(&f123).unwrap() {
        t.check(format!("F123 gradation {}", b.relation), b.passed);
    }
    let f23 = build_model(ModelName::F23).unwrap();
    for b in check_f23_gradation_shape(&f23).unwrap() {
        t.check(format!("F23 gradation shape {}", b.relation), b.passed);
    }
    t
}

fn criterion_2_growth_tower() -> Tally {
    let mut t = Tally::new(2);
    for (label, d) in [("F3 model", f3()), ("example", example())] {
        t.check(format!("{label}: (3,6)"), d.growth() == [3, 6]);
        let ze = prolong_projective(&d).unwrap();
        t.check(format!("{label}: projective (3,5,7,8)"), ze.distribution.growth() == [3, 5, 7, 8]);
        let wf = prolong_fiber_line(&ze).unwrap();
        t.check(format!("{label}: fiber-line (3,5,7,8,9)"), wf.distribution.growth() == [3, 5, 7, 8, 9]);
        let sl = prolong_dual(&d).unwrap();
        t.check(format!("{label}: dual (4,6,8)"), sl.distribution.growth() == [4, 6, 8]);
        let cone = prolong_svc_cone(&sl).unwrap();
        t.check(format!("{label}: svc-cone (3,5,7,8,9)"), cone.distribution.growth() == [3, 5, 7, 8, 9]);
    }
    t
}

fn criterion_3_solved_coefficients() -> Tally {
    let mut t = Tally::new(3);
    let d = example();
    let ze = prolong_projective(&d).unwrap();
    let wf = prolong_fiber_line(&ze).unwrap();
    let sl = prolong_dual(&d).unwrap();
    let cone = prolong_svc_cone(&sl).unwrap();
    let cases: [(&str, &ProlongationResult, &str, &str); 10] = [
        ("projective", &ze, "a", "0"),
        ("projective", &ze, "b", "-z3*m'(x6)"),
        ("fiber-line", &wf, "c", "-w*m'(x6)"),
        ("dual", &sl, "alpha", "-y1*m'(x6)"),
        ("dual", &sl, "beta", "-2/3*y2*m'(x6)"),
        ("dual", &sl, "gamma", "-1/3*y2*m'(x6)"),
        ("dual", &sl, "delta", "0"),
        ("svc-cone", &cone, "A", "0"),
        ("svc-cone", &cone, "B", "-z3*m'(x6)"),
        ("svc-cone", &cone, "C", "-w*m'(x6)"),
    ];
    for (kind, r, name, expected) in cases {
        let got = r.coefficient(name).cloned();
        t.check(format!("{kind} {name} = {expected} (got {got:?})"), got == Some(sc(expected)));
    }
    let a = cone.coefficient("A").unwrap();
    t.check("svc-cone A_w = 0", a.derivative("w").is_zero());
    t.check(
        "svc-cone criterion verdicts",
        cone.criterion.as_ref().is_some_and(|c| c.a_w_vanishes && c.membership && c.certificate),
    );
    t
}

fn criterion_4_structure_certificates() -> Tally {
    let mut t = Tally::new(4);
    let f23 = build_model(ModelName::F23).unwrap();
    t.check("B3(2,3) on F23 model", check_b3_23(&f23.splitting).unwrap().overall);
    let f123 = build_model(ModelName::F123).unwrap();
    t.check("B3(1,2,3) on F123 model", check_b3_123(&f123.splitting).unwrap().overall);
    let f13 = build_model(ModelName::F13).unwrap();
    t.check(
        "generalized B3(1,3) on F13 model",
        check_b3_13(&f13.splitting, B3_13Mode::Generalized).unwrap().overall,
    );
    t.check(
        "strict B3(1,3) on F13 model",
        check_b3_13(&f13.splitting, B3_13Mode::Strict).unwrap().overall,
    );
    for (label, d) in [("F3 model", f3()), ("example", example())] {
        let ze = prolong_projective(&d).unwrap();
        t.check(format!("B3(2,3) on projective of {label}"), check_b3_23(&ze.splitting).unwrap().overall);
        let wf = prolong_fiber_line(&ze).unwrap();
        t.check(format!("B3(1,2,3) on fiber-line of {label}"), check_b3_123(&wf.splitting).unwrap().overall);
        let cone = prolong_svc_cone(&prolong_dual(&d).unwrap()).unwrap();
        t.check(format!("B3(1,2,3) on svc-cone of {label}"), check_b3_123(&cone.splitting).unwrap().overall);
    }
    let sl = prolong_dual(&example()).unwrap();
    t.check(
        "generalized B3(1,3) on dual of example",
        check_b3_13(&sl.splitting, B3_13Mode::Generalized).unwrap().overall,
    );
    let strict = check_b3_13(&sl.splitting, B3_13Mode::Strict).unwrap();
    let witness = strict
        .conditions
        .iter()
        .find(|c| !c.passed)
        .map(|c| (c.id.clone(), c.witness.clone()));
    t.check(
        format!("strict B3(1,3) fails on dual of example with involutivity witness ({witness:?})"),
        !strict.overall
            && witness
                .as_ref()
                .is_some_and(|(id, w)| id.contains("involutive") && w.as_ref().is_some_and(|w| w.contains("m'"))),
    );
    let frame: Vec<VectorField> = sl.distribution.frame().iter().map(freeze_m).collect();
    let flat = Distribution::new(sl.chart(), frame).unwrap();
    let flat = Splitting::new(flat, sl.splitting.parts.clone()).unwrap();
    t.check(
        "strict B3(1,3) on dual of example with m′ = 0",
        check_b3_13(&flat, B3_13Mode::Strict).unwrap().overall,
    );
    t
}

fn criterion_5_svc_tangency() -> Tally {
    let mut t = Tally::new(5);
    let poly = build_example_family(&ExampleM::Polynomial(sc("x6^3 + x6"))).unwrap();
    for (label, d) in [("F3 model", f3()), ("example", example()), ("example m = x6^3 + x6", poly)] {
        let s = Splitting::new(d, vec![("D".into(), vec![0, 1, 2])]).unwrap();
        let r = evaluate_claim(SvcClaim::DFull, &s).unwrap();
        for c in &r.checks {
            t.check(format!("{label}: {}", c.id), c.passed);
        }
    }
    let d = example();
    let ze = prolong_projective(&d).unwrap();
    let wf = prolong_fiber_line(&ze).unwrap();
    let sl = prolong_dual(&d).unwrap();
    for (claim, s) in [
        (SvcClaim::ESplit, &ze.splitting),
        (SvcClaim::FStrata, &wf.splitting),
        (SvcClaim::LQuadric, &sl.splitting),
    ] {
        let r = evaluate_claim(claim, s).unwrap();
        for c in &r.checks {
            t.check(format!("{}: {}", claim.name(), c.id), c.passed);
        }
    }
    let strata = ["Θ", "Θ′", "Θ″", "Θ‴", "Θ⁗"];
    let f = evaluate_claim(SvcClaim::FStrata, &wf.splitting).unwrap();
    for s in strata {
        t.check(
            format!("stratum field {s} is checked"),
            f.checks.iter().any(|c| c.id.starts_with(&format!("{s}("))),
        );
    }
    t
}

fn criterion_6_round_trips() -> Tally {
    let mut t = Tally::new(6);
    for (label, d) in [("F3 model", f3()), ("example", example())] {
        let ze = prolong_projective(&d).unwrap();
        let back = reduce_prolongation(&ze).unwrap();
        t.check(
            format!("{label}: projective then reduce by E2"),
            back.chart() == d.chart() && back.canonical_frame() == d.canonical_frame(),
        );
        let wf = prolong_fiber_line(&ze).unwrap();
        let back = reduce_prolongation(&wf).unwrap();
        t.check(
            format!("{label}: fiber-line then reduce by F1"),
            back.chart() == ze.chart() && same_span(back.frame(), ze.distribution.frame()).unwrap(),
        );
        let sl = prolong_dual(&d).unwrap();
        let back = reduce_prolongation(&sl).unwrap();
        t.check(
            format!("{label}: dual then reduce by L2"),
            back.chart() == d.chart() && back.canonical_frame() == d.canonical_frame(),
        );
        let cone = prolong_svc_cone(&sl).unwrap();
        t.check(format!("{label}: cone route coincides"), routes_coincide(&cone, &wf).unwrap());
    }
    t
}

fn criterion_7_property_suites() -> Tally {
    let mut t = Tally::new(7);
    let seeds = 0..100u64;
    let mut fails = [0usize; 6];
    for seed in seeds.clone() {
        let mut rng = sampling::rng(seed);
        if !common::jacobi_vector_fields(&mut rng) {
            fails[0] += 1;
        }
        if !common::jacobi_poisson(&mut rng) {
            fails[1] += 1;
        }
        if !common::hamiltonian_is_lie_morphism(&mut rng) {
            fails[2] += 1;
        }
        if !common::four_fold_identity(&mut rng) {
            fails[3] += 1;
        }
        if !common::growth_invariant_under_frame_change(&mut rng) {
            fails[4] += 1;
        }
        if !common::theta3_replacement_invariant(&mut rng) {
            fails[5] += 1;
        }
    }
    let names = [
        "Jacobi for vector fields",
        "Jacobi for the Poisson bracket",
        "{H_ξ, H_η} = H_[ξ,η]",
        "four-fold bracket identity",
        "growth under frame change",
        "θ3-replacement invariance",
    ];
    for (n, f) in names.iter().zip(fails) {
        t.check(format!("{n}: {f} failures over 100 seeds"), f == 0);
    }
    t
}

fn main() {
    let criteria: [fn() -> Tally; 7] = [
        criterion_1_model_reproduction,
        criterion_2_growth_tower,
        criterion_3_solved_coefficients,
        criterion_4_structure_certificates,
        criterion_5_svc_tangency,
        criterion_6_round_trips,
        criterion_7_property_suites,
    ];
    let mut unexpected = Vec::new();
    for run in criteria {
        let t = run();
        t.report();
        for f in t.failures() {
            if !t.tolerated(f) {
                unexpected.push(format!("criterion {}: {f}", t.criterion));
            }
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures:\n  {}", unexpected.join("\n  "));
        std::process::exit(1);
    }
}
