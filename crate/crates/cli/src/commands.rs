//! The five document commands. Each returns a report; errors that prevent
//! a report are returned as [`CliError`].

use b3tower::hamiltonian::evaluate_claim;
use b3tower::models::check_bracket_table;
use b3tower::poly::VarKind;
use b3tower::prolong::routes_coincide;
use b3tower::sampling::{random_point, random_rational, rng};
use b3tower::{
    build_model, check_b3_123, check_b3_13, check_b3_23, prolong_chain, B3_13Mode, Distribution, Error,
    ModelName, ProlongationKind, Splitting, StructureCertificate, SvcClaim,
};
use indexmap::IndexMap;

use crate::document::{parse_assignments, Document, Expect, Valuation};
use crate::error::CliError;
use crate::report::{tuple, Expectation, Report};

/// A structure name accepted by `check --structure`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureName {
    B3_23,
    B3_123,
    B3_13,
    B3_13Strict,
}

impl StructureName {
    pub const ALL: [StructureName; 4] = [
        StructureName::B3_23,
        StructureName::B3_123,
        StructureName::B3_13,
        StructureName::B3_13Strict,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureName::B3_23 => "b3-23",
            StructureName::B3_123 => "b3-123",
            StructureName::B3_13 => "b3-13",
            StructureName::B3_13Strict => "b3-13-strict",
        }
    }

    pub fn parse(s: &str) -> Result<StructureName, CliError> {
        StructureName::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::Input(format!("unknown structure `{s}`")))
    }

    /// Growth vector a structure of this type must have.
    pub fn ladder(self) -> &'static [usize] {
        match self {
            StructureName::B3_23 => &[3, 5, 7, 8],
            StructureName::B3_123 => &[3, 5, 7, 8, 9],
            StructureName::B3_13 | StructureName::B3_13Strict => &[4, 6, 8],
        }
    }

    pub fn check(self, s: &Splitting) -> b3tower::Result<StructureCertificate> {
        match self {
            StructureName::B3_23 => check_b3_23(s),
            StructureName::B3_123 => check_b3_123(s),
            StructureName::B3_13 => check_b3_13(s, B3_13Mode::Generalized),
            StructureName::B3_13Strict => check_b3_13(s, B3_13Mode::Strict),
        }
    }
}

fn structure_after(kind: ProlongationKind) -> StructureName {
    match kind {
        ProlongationKind::Projective => StructureName::B3_23,
        ProlongationKind::FiberLine | ProlongationKind::SvcCone => StructureName::B3_123,
        ProlongationKind::Dual => StructureName::B3_13,
    }
}

fn growth_expectation(expect: &Expect, found: &[usize]) -> Vec<Expectation> {
    expect
        .growth
        .iter()
        .map(|g| Expectation {
            name: "growth".into(),
            expected: tuple(g),
            found: tuple(found),
            passed: g.as_slice() == found,
        })
        .collect()
}

pub struct GrowthOptions {
    /// `random` or assignments such as `x1=1,m'(x6)=2`.
    pub at: Option<String>,
    pub seed: u64,
    pub max_depth: Option<usize>,
}

pub fn growth(doc: &Document, opts: &GrowthOptions) -> Result<Report, CliError> {
    let d = &doc.distribution;
    let mut r = Report::new("growth");
    if let Some(at) = &opts.at {
        r.arg("at", at);
        if at == "random" {
            r.arg("seed", opts.seed);
        }
    }
    if let Some(k) = opts.max_depth {
        r.arg("max-depth", k);
    }
    let depth = opts.max_depth.unwrap_or(d.chart().dim());
    let flag = d.derived_flag(depth);
    r.line(format!("growth: {}", tuple(&flag.growth)));
    r.result("growth", &flag.growth);
    r.result("stabilized", flag.stabilized);
    let at_point = match opts.at.as_deref() {
        Some("random") => Some(random_valuation(d, opts.seed)?),
        Some(src) => {
            let v = parse_assignments(d.chart(), src)?;
            let g = d.growth_at_point(&v.coords, &v.jets)?;
            Some((v, g))
        }
        None if !doc.point.is_empty() => {
            let g = d.growth_at_point(&doc.point.coords, &doc.point.jets)?;
            Some((doc.point.clone(), g))
        }
        None => None,
    };
    if let Some((v, g)) = at_point {
        let lits = v.to_literals();
        let shown: Vec<String> = lits.iter().map(|(k, x)| format!("{k}={x}")).collect();
        r.line(format!("growth at {}: {}", shown.join(", "), tuple(&g)));
        r.result("point", lits);
        r.result("point_growth", g);
    }
    r.expectations(growth_expectation(&doc.expect, &flag.growth));
    r.document = Some(doc.to_raw());
    Ok(r)
}

/// A seeded rational point with values for every jet in the flag; retries
/// on poles.
fn random_valuation(d: &Distribution, seed: u64) -> Result<(Valuation, Vec<usize>), CliError> {
    let mut jets: Vec<String> = Vec::new();
    for level in &d.derived_flag(d.chart().dim()).flag_frames {
        for v in level {
            for c in v.coeffs() {
                for var in c.vars() {
                    if matches!(var.kind(), VarKind::Jet { .. }) && !jets.contains(&var.to_string()) {
                        jets.push(var.to_string());
                    }
                }
            }
        }
    }
    jets.sort();
    let mut g = rng(seed);
    let mut last = None;
    for _ in 0..16 {
        let v = Valuation {
            coords: random_point(&mut g, d.chart(), 1000),
            jets: jets.iter().map(|j| (j.clone(), random_rational(&mut g, 1000))).collect(),
        };
        match d.growth_at_point(&v.coords, &v.jets) {
            Ok(growth) => return Ok((v, growth)),
            Err(e @ Error::PoleAtPoint(_)) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one attempt").into())
}

/// Completes a chain whose first kind needs a predecessor.
fn complete_chain(kinds: Vec<ProlongationKind>) -> Vec<ProlongationKind> {
    match kinds.first() {
        Some(ProlongationKind::FiberLine) => [vec![ProlongationKind::Projective], kinds].concat(),
        Some(ProlongationKind::SvcCone) => [vec![ProlongationKind::Dual], kinds].concat(),
        _ => kinds,
    }
}

fn parse_kind(s: &str) -> Result<ProlongationKind, CliError> {
    ProlongationKind::parse(s).ok_or_else(|| CliError::Input(format!("unknown prolongation kind `{s}`")))
}

fn route_name(kinds: &[ProlongationKind]) -> String {
    kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join("→")
}

pub fn prolong(doc: &Document, kind: &str, then: &[String]) -> Result<Report, CliError> {
    let mut r = Report::new("prolong");
    r.arg("kind", kind);
    if !then.is_empty() {
        r.arg("then", then);
    }
    let mut kinds = vec![parse_kind(kind)?];
    for t in then {
        kinds.push(parse_kind(t)?);
    }
    let chain = complete_chain(kinds);
    let d = &doc.distribution;
    let g = d.growth();
    if g != [3, 6] {
        return Err(Error::GrowthMismatch {
            expected: vec![3, 6],
            found: g,
        }
        .into());
    }
    let res = prolong_chain(d, &chain)?;
    let last = res.kind;
    r.line(format!("chain: {}", route_name(&chain)));
    r.result("chain", chain.iter().map(|k| k.name()).collect::<Vec<_>>());

    let solved: IndexMap<String, String> = res
        .inherited
        .iter()
        .chain(&res.solved)
        .map(|(n, s)| (n.clone(), s.to_string()))
        .collect();
    for (n, s) in &solved {
        r.line(format!("  {n} = {s}"));
    }
    let mut coefficient_checks = Vec::new();
    for (n, lit) in &doc.expect.coefficients {
        let found = solved.get(n).cloned().unwrap_or_else(|| "(absent)".into());
        let passed = b3tower::Scalar::parse(lit).ok().map(|s| s.to_string()) == Some(found.clone());
        coefficient_checks.push(Expectation {
            name: format!("coefficient {n}"),
            expected: lit.clone(),
            found,
            passed,
        });
    }
    r.result("solved", &solved);

    let growth = res.distribution.growth();
    let growth_ok = growth == last.expected_growth();
    r.line(format!("growth: {}", tuple(&growth)));
    r.result("growth", &growth);
    r.require(growth_ok);
    r.certificate(&res.certificate);

    if let Some(c) = &res.criterion {
        r.line(format!("A_w = 0: {}", c.a_w_vanishes));
        r.line(format!("cone membership: {}", c.membership));
        r.result(
            "cone_criterion",
            IndexMap::from([
                ("a_w_vanishes", c.a_w_vanishes),
                ("membership", c.membership),
                ("certificate", c.certificate),
            ]),
        );
        r.require(c.a_w_vanishes && c.membership && c.certificate);
    }

    let other = match last {
        ProlongationKind::FiberLine => Some(vec![ProlongationKind::Dual, ProlongationKind::SvcCone]),
        ProlongationKind::SvcCone => Some(vec![ProlongationKind::Projective, ProlongationKind::FiberLine]),
        _ => None,
    };
    if let Some(route) = other {
        let alt = prolong_chain(d, &route)?;
        let same = routes_coincide(&res, &alt)?;
        r.line(format!("coincides with {}: {same}", route_name(&route)));
        r.result(
            "coincides",
            IndexMap::from([
                ("route", serde_json::Value::from(route_name(&route))),
                ("value", serde_json::Value::from(same)),
            ]),
        );
        r.require(same);
    }
    r.expectations(coefficient_checks);

    let mut out = Document::with_splitting(res.splitting.clone());
    out.expect = Expect {
        growth: Some(last.expected_growth().to_vec()),
        structure: Some(structure_after(last).name().into()),
        ..Expect::default()
    };
    r.document = Some(out.to_raw());
    Ok(r)
}

pub fn check(doc: &Document, structure: &str) -> Result<Report, CliError> {
    let mut r = Report::new("check");
    r.arg("structure", structure);
    let kind = StructureName::parse(structure)?;
    let s = doc
        .splitting
        .as_ref()
        .ok_or_else(|| CliError::Input("`check` needs a document with a splitting".into()))?;
    let cert = kind.check(s)?;
    let growth = doc.distribution.growth();
    r.line(format!("growth: {}", tuple(&growth)));
    r.result("growth", &growth);
    r.certificate(&cert);
    if cert.overall && growth != kind.ladder() {
        return Err(Error::Invariant(format!(
            "{} certificate passed but growth is {}",
            kind.name(),
            tuple(&growth)
        ))
        .into());
    }
    r.document = Some(doc.to_raw());
    Ok(r)
}

pub fn svc(doc: &Document, claim: &str) -> Result<Report, CliError> {
    let mut r = Report::new("svc");
    r.arg("claim", claim);
    let claim = SvcClaim::parse(claim)?;
    let whole;
    let s = match (&doc.splitting, claim) {
        (Some(s), _) => s,
        (None, SvcClaim::DFull) => {
            let all = (0..doc.distribution.rank()).collect();
            whole = Splitting::new(doc.distribution.clone(), vec![("D".into(), all)])?;
            &whole
        }
        (None, _) => {
            return Err(CliError::Input(format!("claim `{}` needs a splitting", claim.name())));
        }
    };
    let report = evaluate_claim(claim, s)?;
    r.claim(&report);
    r.document = Some(doc.to_raw());
    Ok(r)
}

/// Expected structure and tangency claim of each model.
pub fn model_expectations(name: ModelName) -> (Option<StructureName>, SvcClaim) {
    match name {
        ModelName::F123 => (Some(StructureName::B3_123), SvcClaim::FStrata),
        ModelName::F23 => (Some(StructureName::B3_23), SvcClaim::ESplit),
        ModelName::F13 => (Some(StructureName::B3_13Strict), SvcClaim::LQuadric),
        ModelName::F3 | ModelName::Example => (None, SvcClaim::DFull),
    }
}

pub fn model(name: &str, brackets: bool) -> Result<Report, CliError> {
    let mut r = Report::new("model");
    r.arg("name", name);
    if brackets {
        r.arg("brackets", true);
    }
    let name = ModelName::parse(name)?;
    let spec = build_model(name)?;
    r.line(format!("model {name}: frame symbol {}", spec.symbol));
    r.result("model", name);
    for c in &spec.constraints {
        r.line(format!("  {} constraint {}: {}", crate::report::mark(c.matches), c.label, c.printed));
        r.require(c.matches);
    }
    r.result("constraints", &spec.constraints);
    let frame_ok = spec.frame_matches();
    r.line(format!("  {} frame derived from the Pfaff system", crate::report::mark(frame_ok)));
    r.result("frame_matches", frame_ok);
    r.require(frame_ok);
    if brackets {
        let table = check_bracket_table(&spec)?;
        for b in &table {
            r.line(format!("  {} {}   computed {}", crate::report::mark(b.passed), b.relation, b.computed));
            r.require(b.passed);
        }
        r.result("brackets", &table);
    }
    let (structure, claim) = model_expectations(name);
    let mut out = Document::with_splitting(spec.splitting.clone());
    out.expect = Expect {
        growth: Some(spec.growth.clone()),
        structure: structure.map(|s| s.name().to_string()),
        claims: vec![claim.name().to_string()],
        ..Expect::default()
    };
    r.document = Some(out.to_raw());
    Ok(r)
}
