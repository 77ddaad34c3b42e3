//! Fiber-polynomial calculus on the cotangent bundle: Hamiltonians of vector
//! fields, Poisson brackets, membership in ideals of fiber-linear
//! constraints, and the tangency certificates for singular velocity cones.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::chart::{fmt_term, Chart, ChartRef, VectorField};
use crate::distribution::Splitting;
use crate::error::{Error, Result};
use crate::linalg::{Echelon, PivotOrder};
use crate::scalar::Scalar;
use crate::structure::{b3_13_representatives, certified_b3_123_frame};

/// T*X over a chart of X: one fiber coordinate `p_<x>` per base coordinate.
#[derive(Debug, PartialEq, Eq)]
pub struct CotangentChart {
    base: ChartRef,
    fibers: Vec<String>,
    total: ChartRef,
}

pub type CotangentRef = Arc<CotangentChart>;

impl CotangentChart {
    pub fn new(base: &ChartRef) -> Result<CotangentRef> {
        let mut fibers = Vec::with_capacity(base.dim());
        for c in base.coords() {
            let mut name = format!("p_{c}");
            while base.contains(&name) || fibers.contains(&name) {
                name.insert_str(0, "p_");
            }
            fibers.push(name);
        }
        let mut all = base.coords().to_vec();
        all.extend(fibers.iter().cloned());
        let total = Chart::from_names(all, base.symbols().to_vec())?;
        Ok(Arc::new(CotangentChart {
            base: base.clone(),
            fibers,
            total,
        }))
    }

    pub fn base(&self) -> &ChartRef {
        &self.base
    }

    pub fn fibers(&self) -> &[String] {
        &self.fibers
    }

    /// Base coordinates followed by fiber coordinates.
    pub fn total(&self) -> &ChartRef {
        &self.total
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// An arbitrary function on T*X.
    pub fn free_function(&self, name: &str) -> Scalar {
        self.total.free_function(name)
    }
}

/// A polynomial in the fiber coordinates with Scalar coefficients, keyed by
/// exponent vectors.
#[derive(Clone, Debug)]
pub struct FiberPolynomial {
    chart: CotangentRef,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl PartialEq for FiberPolynomial {
    fn eq(&self, o: &Self) -> bool {
        self.chart == o.chart && self.terms == o.terms
    }
}

impl FiberPolynomial {
    pub fn zero(chart: &CotangentRef) -> FiberPolynomial {
        FiberPolynomial {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: &CotangentRef, c: Scalar) -> FiberPolynomial {
        let mut f = FiberPolynomial::zero(chart);
        f.add_term(vec![0; chart.dim()], c);
        f
    }

    /// The fiber coordinate p_i.
    pub fn fiber(chart: &CotangentRef, i: usize) -> FiberPolynomial {
        FiberPolynomial::monomial(chart, unit(chart.dim(), i), Scalar::one())
    }

    pub fn monomial(chart: &CotangentRef, exps: Vec<u32>, c: Scalar) -> FiberPolynomial {
        assert_eq!(exps.len(), chart.dim(), "exponent length mismatch");
        let mut f = FiberPolynomial::zero(chart);
        f.add_term(exps, c);
        f
    }

    /// H_v(x, p) = ⟨p, v(x)⟩.
    pub fn hamiltonian_of(chart: &CotangentRef, v: &VectorField) -> Result<FiberPolynomial> {
        if v.chart().coords() != chart.base.coords() {
            return Err(Error::ChartMismatch);
        }
        let mut f = FiberPolynomial::zero(chart);
        for (i, c) in v.coeffs().iter().enumerate() {
            f.add_term(unit(chart.dim(), i), c.clone());
        }
        Ok(f)
    }

    /// Σ c_i p_i.
    pub fn linear(chart: &CotangentRef, coeffs: &[Scalar]) -> FiberPolynomial {
        let mut f = FiberPolynomial::zero(chart);
        for (i, c) in coeffs.iter().enumerate() {
            f.add_term(unit(chart.dim(), i), c.clone());
        }
        f
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(old) => {
                let sum = old.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&exps);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn chart(&self) -> &CotangentRef {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total fiber degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Coefficients c_i when the polynomial is Σ c_i p_i.
    pub fn linear_coeffs(&self) -> Option<Vec<Scalar>> {
        let mut out = vec![Scalar::zero(); self.chart.dim()];
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() != 1 {
                return None;
            }
            let i = e.iter().position(|&k| k == 1).expect("degree one");
            out[i] = c.clone();
        }
        Some(out)
    }

    fn check(&self, o: &FiberPolynomial) -> Result<()> {
        if Arc::ptr_eq(&self.chart, &o.chart) || self.chart == o.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, o: &FiberPolynomial) -> Result<FiberPolynomial> {
        self.check(o)?;
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &FiberPolynomial) -> Result<FiberPolynomial> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FiberPolynomial {
        self.scale(&Scalar::int(-1))
    }

    pub fn scale(&self, s: &Scalar) -> FiberPolynomial {
        let mut out = FiberPolynomial::zero(&self.chart);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(s));
        }
        out
    }

    pub fn mul(&self, o: &FiberPolynomial) -> Result<FiberPolynomial> {
        self.check(o)?;
        let mut out = FiberPolynomial::zero(&self.chart);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        Ok(out)
    }

    /// ∂/∂p_i, including coefficients that depend on p through free functions.
    pub fn d_fiber(&self, i: usize) -> FiberPolynomial {
        let name = &self.chart.fibers[i];
        let mut out = FiberPolynomial::zero(&self.chart);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c.scale(&crate::poly::q(e[i] as i64)));
            }
            out.add_term(e.clone(), c.derivative(name));
        }
        out
    }

    /// ∂/∂x_i of the coefficients.
    pub fn d_base(&self, i: usize) -> FiberPolynomial {
        let name = &self.chart.base.coords()[i];
        let mut out = FiberPolynomial::zero(&self.chart);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.derivative(name));
        }
        out
    }

    pub fn map_coeffs(&self, f: &dyn Fn(&Scalar) -> Result<Scalar>) -> Result<FiberPolynomial> {
        let mut out = FiberPolynomial::zero(&self.chart);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    /// The same function as a Scalar on the total chart.
    pub fn to_scalar(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&Scalar::coord(&self.chart.fibers[i]));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// The Hamiltonian vector field on the total chart: ẋ = ∂H/∂p,
    /// ṗ = −∂H/∂x.
    pub fn hamiltonian_vector_field(&self) -> VectorField {
        let n = self.chart.dim();
        let mut coeffs = Vec::with_capacity(2 * n);
        for i in 0..n {
            coeffs.push(self.d_fiber(i).to_scalar());
        }
        for i in 0..n {
            coeffs.push(self.d_base(i).to_scalar().neg());
        }
        VectorField::from_coeffs(&self.chart.total, coeffs)
    }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

impl fmt::Display for FiberPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let first = k == 0;
            let basis: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    let p = &self.chart.fibers[i];
                    if x == 1 {
                        p.clone()
                    } else {
                        format!("{p}^{x}")
                    }
                })
                .collect();
            if basis.is_empty() {
                let text = c.to_string();
                match (first, text.strip_prefix('-')) {
                    (true, _) => write!(f, "{text}")?,
                    (false, Some(rest)) if c.is_polynomial() && c.numerator().num_terms() == 1 => {
                        write!(f, " - {rest}")?
                    }
                    (false, _) => write!(f, " + ({text})")?,
                }
            } else {
                fmt_term(f, first, c, &basis.join("*"))?;
            }
        }
        Ok(())
    }
}

/// {f, g} = Σ_i (∂f/∂p_i ∂g/∂x_i − ∂f/∂x_i ∂g/∂p_i), so that
/// {H_ξ, H_η} = H_[ξ,η] and d/dt f = {H, f} along the flow of H.
pub fn poisson_bracket(f: &FiberPolynomial, g: &FiberPolynomial) -> Result<FiberPolynomial> {
    f.check(g)?;
    let mut out = FiberPolynomial::zero(&f.chart);
    for i in 0..f.chart.dim() {
        out = out.add(&f.d_fiber(i).mul(&g.d_base(i))?)?;
        out = out.sub(&f.d_base(i).mul(&g.d_fiber(i))?)?;
    }
    Ok(out)
}

/// Σ coefficient · H⃗_{v}.
#[derive(Clone, Debug)]
pub struct CharacteristicField {
    chart: CotangentRef,
    terms: Vec<(FiberPolynomial, FiberPolynomial)>,
}

impl CharacteristicField {
    pub fn new(chart: &CotangentRef) -> CharacteristicField {
        CharacteristicField {
            chart: chart.clone(),
            terms: Vec::new(),
        }
    }

    /// Adds `coefficient · H⃗_{hamiltonian}`.
    pub fn term(mut self, coefficient: FiberPolynomial, hamiltonian: FiberPolynomial) -> Result<CharacteristicField> {
        coefficient.check(&hamiltonian)?;
        if coefficient.chart() != &self.chart {
            return Err(Error::ChartMismatch);
        }
        self.terms.push((coefficient, hamiltonian));
        Ok(self)
    }

    pub fn chart(&self) -> &CotangentRef {
        &self.chart
    }

    pub fn apply(&self, f: &FiberPolynomial) -> Result<FiberPolynomial> {
        let mut out = FiberPolynomial::zero(&self.chart);
        for (c, h) in &self.terms {
            out = out.add(&c.mul(&poisson_bracket(h, f)?)?)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct Membership {
    pub member: bool,
    /// What is left after eliminating the pivot fiber coordinates.
    pub remainder: FiberPolynomial,
    /// Multipliers G_l with q = Σ G_l g_l, present when `member`.
    pub certificate: Option<Vec<FiberPolynomial>>,
}

/// Decides q ∈ (g_1, …, g_k) for fiber-linear g_l by solving the generators
/// for a pivot set of fiber coordinates and substituting.
pub fn ideal_membership(q: &FiberPolynomial, generators: &[FiberPolynomial]) -> Result<Membership> {
    let chart = q.chart().clone();
    let n = chart.dim();
    let mut rows = Vec::with_capacity(generators.len());
    for (k, g) in generators.iter().enumerate() {
        q.check(g)?;
        let r = g
            .linear_coeffs()
            .ok_or_else(|| Error::Nonlinear(format!("generator {} is not fiber-linear", k + 1)))?;
        rows.push(r);
    }
    let ech = Echelon::from_rows(&rows, n, PivotOrder::First);
    if ech.rank() < generators.len() {
        return Err(Error::DependentGenerators);
    }
    let pivots = ech.pivots().to_vec();
    let reduced: Vec<FiberPolynomial> = ech.rows().iter().map(|r| FiberPolynomial::linear(&chart, r)).collect();
    let mut multipliers = vec![FiberPolynomial::zero(&chart); pivots.len()];
    let mut rem = q.clone();
    loop {
        let hit = rem.terms.iter().find_map(|(e, c)| {
            pivots
                .iter()
                .position(|&p| e[p] > 0)
                .map(|k| (k, e.clone(), c.clone()))
        });
        let Some((k, mut e, c)) = hit else { break };
        e[pivots[k]] -= 1;
        let t = FiberPolynomial::monomial(&chart, e, c);
        rem = rem.sub(&t.mul(&reduced[k])?)?;
        multipliers[k] = multipliers[k].add(&t)?;
    }
    if !rem.is_zero() {
        return Ok(Membership {
            member: false,
            remainder: rem,
            certificate: None,
        });
    }
    let transform = ech.transform();
    let mut cert = vec![FiberPolynomial::zero(&chart); generators.len()];
    for (k, h) in multipliers.iter().enumerate() {
        for (l, t) in transform[k].iter().enumerate() {
            if !t.is_zero() {
                cert[l] = cert[l].add(&h.scale(t))?;
            }
        }
    }
    let mut rebuilt = FiberPolynomial::zero(&chart);
    for (g, m) in generators.iter().zip(&cert) {
        rebuilt = rebuilt.add(&g.mul(m)?)?;
    }
    if rebuilt != *q {
        return Err(Error::Invariant("ideal membership certificate does not reconstruct q".into()));
    }
    Ok(Membership {
        member: true,
        remainder: rem,
        certificate: Some(cert),
    })
}

/// The named singular-velocity-cone claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SvcClaim {
    /// Ξ is tangent to D⊥, so every direction of D is singular.
    DFull,
    /// Θ = H⃗_ζ1 is tangent to E^(3)⊥ and fiber fields to E^(2)⊥.
    ESplit,
    /// The five stratum fields of a (3,5,7,8,9) structure.
    FStrata,
    /// The fields 𝒱, 𝒱̃ of a (4,6,8) structure and its quadric cone.
    LQuadric,
}

impl SvcClaim {
    pub const ALL: [SvcClaim; 4] = [SvcClaim::DFull, SvcClaim::ESplit, SvcClaim::FStrata, SvcClaim::LQuadric];

    pub fn name(self) -> &'static str {
        match self {
            SvcClaim::DFull => "svc-d-full",
            SvcClaim::ESplit => "svc-e-split",
            SvcClaim::FStrata => "svc-f-strata",
            SvcClaim::LQuadric => "svc-l-quadric",
        }
    }

    pub fn parse(s: &str) -> Result<SvcClaim> {
        SvcClaim::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownClaim(s.to_string()))
    }

    /// Part ranks the input splitting must have.
    pub fn shape(self) -> &'static [usize] {
        match self {
            SvcClaim::DFull => &[3],
            SvcClaim::ESplit => &[1, 2],
            SvcClaim::FStrata => &[1, 1, 1],
            SvcClaim::LQuadric => &[2, 2],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangencyCheck {
    pub id: String,
    pub passed: bool,
    pub residue: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub checks: Vec<TangencyCheck>,
    pub passed: bool,
}

impl ClaimReport {
    pub fn first_failure(&self) -> Option<&TangencyCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

struct Checks(Vec<TangencyCheck>);

impl Checks {
    fn flag(&mut self, id: String, passed: bool, residue: impl FnOnce() -> String) {
        self.0.push(TangencyCheck {
            id,
            passed,
            residue: (!passed).then(residue),
        });
    }

    fn member(&mut self, id: String, q: &FiberPolynomial, gens: &[FiberPolynomial]) -> Result<()> {
        let m = ideal_membership(q, gens)?;
        self.flag(id, m.member, || m.remainder.to_string());
        Ok(())
    }

    fn zero(&mut self, id: String, q: &FiberPolynomial) {
        self.flag(id, q.is_zero(), || q.to_string());
    }
}

/// Runs every check of a claim and reports all outcomes.
pub fn evaluate_claim(claim: SvcClaim, s: &Splitting) -> Result<ClaimReport> {
    let found: Vec<usize> = s.parts.iter().map(|(_, idx)| idx.len()).collect();
    if found != claim.shape() {
        return Err(Error::RankMismatch(format!(
            "claim {} needs part ranks {:?}, found {found:?}",
            claim.name(),
            claim.shape()
        )));
    }
    let cot = CotangentChart::new(s.distribution.chart())?;
    let checks = match claim {
        SvcClaim::DFull => d_full(&cot, s)?,
        SvcClaim::ESplit => e_split(&cot, s)?,
        SvcClaim::FStrata => f_strata(&cot, s)?,
        SvcClaim::LQuadric => l_quadric(&cot, s)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(ClaimReport {
        claim: claim.name().to_string(),
        checks,
        passed,
    })
}

/// Like [`evaluate_claim`], failing with the first unsatisfied check.
pub fn verify_tangency_claim(claim: SvcClaim, s: &Splitting) -> Result<ClaimReport> {
    let report = evaluate_claim(claim, s)?;
    if let Some(bad) = report.first_failure() {
        return Err(Error::ClaimFailed {
            claim: report.claim.clone(),
            condition: bad.id.clone(),
            residue: bad.residue.clone().unwrap_or_default(),
        });
    }
    Ok(report)
}

fn hams(cot: &CotangentRef, fields: &[VectorField]) -> Result<Vec<FiberPolynomial>> {
    fields.iter().map(|v| FiberPolynomial::hamiltonian_of(cot, v)).collect()
}

fn konst(cot: &CotangentRef, s: Scalar) -> FiberPolynomial {
    FiberPolynomial::constant(cot, s)
}

fn one(cot: &CotangentRef) -> FiberPolynomial {
    konst(cot, Scalar::one())
}

/// Σ λ_i H_i with formal control parameters named `{prefix}1`, ….
fn controlled(cot: &CotangentRef, prefix: &str, h: &[FiberPolynomial]) -> Result<FiberPolynomial> {
    let mut out = FiberPolynomial::zero(cot);
    for (i, hi) in h.iter().enumerate() {
        out = out.add(&hi.scale(&Scalar::coord(&format!("{prefix}{}", i + 1))))?;
    }
    Ok(out)
}

fn ideal_label(sym: &str, idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|i| format!("H_{sym}{i}")).collect();
    format!("⟨{}⟩", parts.join(", "))
}

fn pick(h: &[FiberPolynomial], idx: &[usize]) -> Vec<FiberPolynomial> {
    idx.iter().map(|&i| h[i - 1].clone()).collect()
}

/// Applies `field` to H_i for each i in `targets` and checks membership in
/// the ideal generated by H_j, j in `ideal`.
fn tangency(
    out: &mut Checks,
    name: &str,
    field: &CharacteristicField,
    sym: &str,
    h: &[FiberPolynomial],
    targets: &[usize],
    ideal: &[usize],
) -> Result<()> {
    let gens = pick(h, ideal);
    let label = ideal_label(sym, ideal);
    for &i in targets {
        let q = field.apply(&h[i - 1])?;
        out.member(format!("{name}(H_{sym}{i}) ∈ {label}"), &q, &gens)?;
    }
    Ok(())
}

/// Checks d/dt H_i = {H, H_i} ≡ Σ coeff·H_j modulo the ideal of `level`.
fn derivative_identity(
    out: &mut Checks,
    sym: &str,
    ham: &FiberPolynomial,
    h: &[FiberPolynomial],
    i: usize,
    rhs: &[(&str, i64, usize)],
    level: usize,
) -> Result<()> {
    let cot = ham.chart().clone();
    let mut expected = FiberPolynomial::zero(&cot);
    let mut text = String::new();
    for (k, &(param, sign, j)) in rhs.iter().enumerate() {
        let c = Scalar::coord(param).scale(&crate::poly::q(sign));
        expected = expected.add(&h[j - 1].scale(&c))?;
        let op = match (k, sign < 0) {
            (0, true) => "−",
            (0, false) => "",
            (_, true) => " − ",
            (_, false) => " + ",
        };
        text.push_str(&format!("{op}{param} H_{sym}{j}"));
    }
    let q = poisson_bracket(ham, &h[i - 1])?.sub(&expected)?;
    let ideal: Vec<usize> = (1..=level).collect();
    out.member(
        format!("d/dt H_{sym}{i} = {text} mod {}", ideal_label(sym, &ideal)),
        &q,
        &pick(h, &ideal),
    )
}

/// Ξ = H_ξ6 H⃗_ξ1 − H_ξ5 H⃗_ξ2 + H_ξ4 H⃗_ξ3 on D⊥, plus the kernel of the
/// control matrix.
fn d_full(cot: &CotangentRef, s: &Splitting) -> Result<Vec<TangencyCheck>> {
    let d = &s.distribution;
    let g = d.growth();
    if g != [3, 6] {
        return Err(Error::GrowthMismatch {
            expected: vec![3, 6],
            found: g,
        });
    }
    let f = s.part_fields(0);
    let xi = vec![
        f[0].clone(),
        f[1].clone(),
        f[2].clone(),
        f[0].bracket(&f[1])?,
        f[0].bracket(&f[2])?,
        f[1].bracket(&f[2])?,
    ];
    let h = hams(cot, &xi)?;
    let field = CharacteristicField::new(cot)
        .term(h[5].clone(), h[0].clone())?
        .term(h[4].neg(), h[1].clone())?
        .term(h[3].clone(), h[2].clone())?;
    let mut out = Checks(Vec::new());
    tangency(&mut out, "Ξ", &field, "ξ", &h, &[1, 2, 3], &[1, 2, 3])?;
    for i in 1..=3 {
        out.zero(format!("Ξ(H_ξ{i}) = 0"), &field.apply(&h[i - 1])?);
    }
    // d/dt H_ξi = Σ u_j H_[ξj, ξi], written in the dual-frame coordinates φ4..φ6.
    let ham = controlled(cot, "u", &h[..3])?;
    let phi: Vec<Scalar> = (4..=6).map(|k| Scalar::coord(&format!("phi{k}"))).collect();
    let mut derived = Vec::new();
    for i in 0..3 {
        let q = poisson_bracket(&ham, &h[i])?;
        let m = ideal_membership(&q, &h)?;
        let cert = m
            .certificate
            .ok_or_else(|| Error::Invariant("ξ1..ξ6 must span T*X".into()))?;
        let mut e = Scalar::zero();
        for k in 0..3 {
            let c = cert[3 + k]
                .terms()
                .next()
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Scalar::zero);
            e = e.add(&c.mul(&phi[k]));
        }
        derived.push((1..=3).map(|j| e.derivative(&format!("u{j}"))).collect::<Vec<_>>());
    }
    for c in control_matrix_checks(&derived)? {
        out.0.push(c);
    }
    Ok(out.0)
}

/// The printed control matrix in φ4, φ5, φ6.
pub fn printed_control_matrix() -> Vec<Vec<Scalar>> {
    let p = |k: i64| Scalar::coord(&format!("phi{k}"));
    let z = Scalar::zero;
    vec![
        vec![z(), p(4), p(5)],
        vec![p(4), z(), p(6).neg()],
        vec![p(5), p(6), z()],
    ]
}

/// Rank 2 with kernel (φ6, −φ5, φ4), for the printed matrix and for the
/// matrix `derived` from the bracket relations; the two have equal row spaces.
pub fn control_matrix_checks(derived: &[Vec<Scalar>]) -> Result<Vec<TangencyCheck>> {
    let p = |k: i64| Scalar::coord(&format!("phi{k}"));
    let kernel = vec![p(6), p(5).neg(), p(4)];
    let printed = printed_control_matrix();
    let mut out = Checks(Vec::new());
    for (name, m) in [("printed", &printed), ("derived", &derived.to_vec())] {
        let e = Echelon::from_rows(m, 3, PivotOrder::First);
        out.flag(format!("{name} control matrix has rank 2"), e.rank() == 2, || {
            format!("rank {}", e.rank())
        });
        let prod: Vec<Scalar> = m
            .iter()
            .map(|row| row.iter().zip(&kernel).fold(Scalar::zero(), |a, (x, y)| a.add(&x.mul(y))))
            .collect();
        out.flag(
            format!("{name} control matrix annihilates (φ6, −φ5, φ4)"),
            prod.iter().all(Scalar::is_zero),
            || format!("{prod:?}"),
        );
    }
    let ep = Echelon::from_rows(&printed, 3, PivotOrder::First);
    let ed = Echelon::from_rows(derived, 3, PivotOrder::First);
    let same = ep.rows() == ed.rows();
    out.flag("printed and derived control matrices have the same row space".into(), same, || {
        "row spaces differ".into()
    });
    Ok(out.0)
}

/// Θ = H⃗_ζ1 on E^(3)⊥ and 𝒜H⃗_ζ2 + ℬH⃗_ζ3 on E^(2)⊥.
fn e_split(cot: &CotangentRef, s: &Splitting) -> Result<Vec<TangencyCheck>> {
    let d = &s.distribution;
    let z1 = &s.part_fields(0)[0];
    let e2 = s.part_fields(1);
    let hz1 = FiberPolynomial::hamiltonian_of(cot, z1)?;
    let hz2 = FiberPolynomial::hamiltonian_of(cot, &e2[0])?;
    let hz3 = FiberPolynomial::hamiltonian_of(cot, &e2[1])?;
    let mut out = Checks(Vec::new());

    let level3 = d.flag_level(3);
    let g3 = hams(cot, level3.frame())?;
    let theta = CharacteristicField::new(cot).term(one(cot), hz1.clone())?;
    for (k, g) in g3.iter().enumerate() {
        let q = theta.apply(g)?;
        out.member(format!("Θ(g{}) ∈ ideal of E^(3)⊥", k + 1), &q, &g3)?;
    }
    out.member("H_ζ1 ∈ ideal of E^(3)⊥".into(), &hz1, &g3)?;

    let level2 = d.flag_level(2);
    let g2 = hams(cot, level2.frame())?;
    let a = konst(cot, cot.free_function("A"));
    let b = konst(cot, cot.free_function("B"));
    let fiber = CharacteristicField::new(cot).term(a, hz2)?.term(b, hz3)?;
    for (k, g) in g2.iter().enumerate() {
        let q = fiber.apply(g)?;
        out.member(format!("(A H⃗_ζ2 + B H⃗_ζ3)(g{}) ∈ ideal of E^(2)⊥", k + 1), &q, &g2)?;
    }
    Ok(out.0)
}

/// The stratum fields Θ, Θ′, Θ″, Θ‴, Θ⁗ and the derivative identities of a
/// B3(1,2,3) structure, on its certified bracket representatives.
fn f_strata(cot: &CotangentRef, s: &Splitting) -> Result<Vec<TangencyCheck>> {
    let theta = certified_b3_123_frame(s)?.ok_or_else(|| Error::ClaimFailed {
        claim: SvcClaim::FStrata.name().into(),
        condition: "B3(1,2,3) certificate".into(),
        residue: "structure check failed".into(),
    })?;
    let h = hams(cot, &theta)?;
    let a = konst(cot, cot.free_function("A"));
    let b = konst(cot, cot.free_function("B"));
    let mut out = Checks(Vec::new());

    let ham = controlled(cot, "lambda", &h[..3])?;
    let identities: [(usize, &[(&str, i64, usize)], usize); 8] = [
        (1, &[("lambda2", -1, 4)], 3),
        (2, &[("lambda1", 1, 4), ("lambda3", -1, 5)], 3),
        (3, &[("lambda2", 1, 5)], 3),
        (4, &[("lambda3", -1, 6)], 5),
        (5, &[("lambda1", 1, 6), ("lambda3", 1, 7)], 5),
        (6, &[("lambda3", 1, 8)], 7),
        (7, &[("lambda1", 1, 8)], 7),
        (8, &[("lambda2", 1, 9)], 8),
    ];
    for (i, rhs, level) in identities {
        derivative_identity(&mut out, "θ", &ham, &h, i, rhs, level)?;
    }

    let f0 = CharacteristicField::new(cot)
        .term(h[4].clone(), h[0].clone())?
        .term(h[3].clone(), h[2].clone())?;
    let f1 = CharacteristicField::new(cot).term(one(cot), h[1].clone())?;
    let f2 = CharacteristicField::new(cot)
        .term(a.clone(), h[0].clone())?
        .term(b.clone(), h[1].clone())?;
    let f4 = CharacteristicField::new(cot).term(a, h[0].clone())?.term(b, h[2].clone())?;
    let r = |n: usize| (1..=n).collect::<Vec<_>>();
    tangency(&mut out, "Θ", &f0, "θ", &h, &r(3), &r(3))?;
    tangency(&mut out, "Θ′", &f1, "θ", &h, &r(5), &r(5))?;
    tangency(&mut out, "Θ″", &f2, "θ", &h, &r(6), &r(6))?;
    tangency(&mut out, "Θ‴", &f1, "θ", &h, &r(7), &r(7))?;
    tangency(&mut out, "Θ⁗", &f4, "θ", &h, &r(8), &r(8))?;
    Ok(out.0)
}

/// 𝒱 = A H⃗_ℓ3 + B H⃗_ℓ4, 𝒱̃, the derivative identities and the quadric
/// λ1λ3 + λ2λ4 = 0 of a (4,6,8) structure L1 ⊕ L2.
fn l_quadric(cot: &CotangentRef, s: &Splitting) -> Result<Vec<TangencyCheck>> {
    let mut base = s.part_fields(0);
    base.extend(s.part_fields(1));
    let ell = b3_13_representatives(&base)?;
    let h = hams(cot, &ell)?;
    let mut out = Checks(Vec::new());

    let ham = controlled(cot, "lambda", &h[..4])?;
    let identities: [(usize, &[(&str, i64, usize)], usize); 6] = [
        (1, &[("lambda2", -1, 5), ("lambda3", -1, 6)], 4),
        (2, &[("lambda1", 1, 5), ("lambda4", -1, 6)], 4),
        (3, &[("lambda1", 1, 6)], 4),
        (4, &[("lambda2", 1, 6)], 4),
        (5, &[("lambda3", 1, 8), ("lambda4", -1, 7)], 6),
        (6, &[("lambda1", 1, 7), ("lambda2", 1, 8)], 6),
    ];
    for (i, rhs, level) in identities {
        derivative_identity(&mut out, "ℓ", &ham, &h, i, rhs, level)?;
    }

    // The (H_ℓ7, H_ℓ8)-coefficients of d/dt H_ℓ5, d/dt H_ℓ6 form a 2×2 system
    // whose determinant must be −(λ1λ3 + λ2λ4).
    let mut matrix = Vec::new();
    for i in [5, 6] {
        let q = poisson_bracket(&ham, &h[i - 1])?;
        let cert = ideal_membership(&q, &h)?
            .certificate
            .ok_or_else(|| Error::Invariant("ℓ1..ℓ8 must span T*S".into()))?;
        let coeff = |j: usize| -> Scalar {
            cert[j - 1].terms().next().map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero)
        };
        matrix.push([coeff(7), coeff(8)]);
    }
    let det = matrix[0][0].mul(&matrix[1][1]).sub(&matrix[0][1].mul(&matrix[1][0]));
    let l = |k: i64| Scalar::coord(&format!("lambda{k}"));
    let quadric = l(1).mul(&l(3)).add(&l(2).mul(&l(4)));
    let residue = det.add(&quadric);
    out.flag(
        "det of the (H_ℓ7, H_ℓ8) system = −(λ1λ3 + λ2λ4)".into(),
        residue.is_zero(),
        || residue.to_string(),
    );

    let a = konst(cot, cot.free_function("A"));
    let b = konst(cot, cot.free_function("B"));
    let v = CharacteristicField::new(cot)
        .term(a.clone(), h[2].clone())?
        .term(b.clone(), h[3].clone())?;
    tangency(&mut out, "𝒱", &v, "ℓ", &h, &[1, 2, 3, 4, 6], &[1, 2, 3, 4, 6])?;

    let at = konst(cot, cot.free_function("At"));
    let bt = konst(cot, cot.free_function("Bt"));
    let vt = CharacteristicField::new(cot)
        .term(at.mul(&h[7])?.neg(), h[0].clone())?
        .term(at.mul(&h[6])?, h[1].clone())?
        .term(bt.mul(&h[6])?, h[2].clone())?
        .term(bt.mul(&h[7])?, h[3].clone())?;
    let r6: Vec<usize> = (1..=6).collect();
    tangency(&mut out, "𝒱̃", &vt, "ℓ", &h, &r6, &r6)?;
    Ok(out.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::SymbolDecl;
    use crate::distribution::Distribution;

    fn example() -> Distribution {
        let chart = Chart::new(
            &["x1", "x2", "x3", "x4", "x5", "x6"],
            vec![SymbolDecl::new("m", "x6")],
        )
        .unwrap();
        let f = |pairs: &[(&str, &str)]| VectorField::parse(&chart, pairs).unwrap();
        Distribution::new(
            &chart,
            vec![
                f(&[("x1", "1"), ("x4", "x3"), ("x6", "x2 + m(x6)")]),
                f(&[("x2", "1"), ("x5", "x3")]),
                f(&[("x3", "1")]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn canonical_pair() {
        let chart = Chart::new(&["x1", "x2"], vec![]).unwrap();
        let cot = CotangentChart::new(&chart).unwrap();
        let p1 = FiberPolynomial::fiber(&cot, 0);
        let x1 = FiberPolynomial::constant(&cot, Scalar::coord("x1"));
        let b = poisson_bracket(&p1, &x1).unwrap();
        assert_eq!(b, FiberPolynomial::constant(&cot, Scalar::one()));
        assert_eq!(p1.to_string(), "p_x1");
    }

    #[test]
    fn hamiltonian_bracket_matches_lie_bracket() {
        let d = example();
        let cot = CotangentChart::new(d.chart()).unwrap();
        let (a, b) = (&d.frame()[0], &d.frame()[2]);
        let ha = FiberPolynomial::hamiltonian_of(&cot, a).unwrap();
        let hb = FiberPolynomial::hamiltonian_of(&cot, b).unwrap();
        let lhs = poisson_bracket(&ha, &hb).unwrap();
        let rhs = FiberPolynomial::hamiltonian_of(&cot, &a.bracket(b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert!(poisson_bracket(&ha, &ha).unwrap().is_zero());
    }

    #[test]
    fn hamiltonian_vector_field_applies_as_bracket() {
        let d = example();
        let cot = CotangentChart::new(d.chart()).unwrap();
        let h = FiberPolynomial::hamiltonian_of(&cot, &d.frame()[0]).unwrap();
        let g = FiberPolynomial::hamiltonian_of(&cot, &d.frame()[1])
            .unwrap()
            .mul(&FiberPolynomial::fiber(&cot, 5))
            .unwrap();
        let via_field = h.hamiltonian_vector_field().apply(&g.to_scalar());
        assert_eq!(via_field, poisson_bracket(&h, &g).unwrap().to_scalar());
    }

    #[test]
    fn membership_basics() {
        let chart = Chart::new(&["x1", "x2", "x3"], vec![]).unwrap();
        let cot = CotangentChart::new(&chart).unwrap();
        let p = |i| FiberPolynomial::fiber(&cot, i);
        let g1 = p(0).add(&p(2).scale(&Scalar::coord("x2"))).unwrap();
        let g2 = p(1);
        let q = g1.mul(&g2).unwrap();
        let m = ideal_membership(&q, std::slice::from_ref(&g1)).unwrap();
        assert!(m.member);
        assert_eq!(m.certificate.unwrap()[0], g2);
        assert!(!ideal_membership(&p(0), &[p(1)]).unwrap().member);
        assert!(matches!(
            ideal_membership(&q, &[g1.clone(), g1.scale(&Scalar::int(2))]),
            Err(Error::DependentGenerators)
        ));
    }

    #[test]
    fn xi_is_tangent_on_example() {
        let d = example();
        let s = Splitting::new(d, vec![("D".into(), vec![0, 1, 2])]).unwrap();
        let report = verify_tangency_claim(SvcClaim::DFull, &s).unwrap();
        assert!(report.passed);
        assert!(report.checks.iter().any(|c| c.id.contains("derived control matrix has rank 2")));
    }

    #[test]
    fn wrong_shape_is_rejected() {
        let d = example();
        let s = Splitting::new(d, vec![("D".into(), vec![0, 1, 2])]).unwrap();
        assert!(matches!(
            evaluate_claim(SvcClaim::ESplit, &s),
            Err(Error::RankMismatch(_))
        ));
        assert!(matches!(SvcClaim::parse("svc-x"), Err(Error::UnknownClaim(_))));
    }

    #[test]
    fn claims_on_example_tower() {
        use crate::prolong::{prolong_dual, prolong_fiber_line, prolong_projective};
        let d = example();
        let ze = prolong_projective(&d).unwrap();
        let r = evaluate_claim(SvcClaim::ESplit, &ze.splitting).unwrap();
        assert!(r.passed, "{:?}", r.first_failure());
        let wf = prolong_fiber_line(&ze).unwrap();
        let r = evaluate_claim(SvcClaim::FStrata, &wf.splitting).unwrap();
        assert!(r.passed, "{:?}", r.first_failure());
        let sl = prolong_dual(&d).unwrap();
        let r = evaluate_claim(SvcClaim::LQuadric, &sl.splitting).unwrap();
        assert!(r.passed, "{:?}", r.first_failure());
    }
}
