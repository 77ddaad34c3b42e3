//! The four prolongations of a (3,6)-distribution.
//!
//! Each construction follows a fixed affine fiber chart and produces the
//! intermediate fields of the bracket calculation as specific
//! representatives, so solved coefficients are comparable to closed forms.

use std::collections::BTreeMap;

use crate::chart::{Chart, ChartRef, Substitution, VectorField};
use crate::distribution::{Distribution, Splitting};
use crate::error::{Error, Result};
use crate::linalg::{
    solve_bracket_conditions, solve_linear_coefficients, substitute_unknowns_field, unknown,
};
use crate::scalar::Scalar;
use crate::structure::{check_b3_123, check_b3_13, check_b3_23, B3_13Mode, StructureCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProlongationKind {
    Projective,
    FiberLine,
    Dual,
    SvcCone,
}

impl ProlongationKind {
    pub fn name(self) -> &'static str {
        match self {
            ProlongationKind::Projective => "projective",
            ProlongationKind::FiberLine => "fiber-line",
            ProlongationKind::Dual => "dual",
            ProlongationKind::SvcCone => "svc-cone",
        }
    }

    pub fn parse(s: &str) -> Option<ProlongationKind> {
        match s {
            "projective" => Some(ProlongationKind::Projective),
            "fiber-line" => Some(ProlongationKind::FiberLine),
            "dual" => Some(ProlongationKind::Dual),
            "svc-cone" => Some(ProlongationKind::SvcCone),
            _ => None,
        }
    }

    pub fn expected_growth(self) -> &'static [usize] {
        match self {
            ProlongationKind::Projective => &[3, 5, 7, 8],
            ProlongationKind::FiberLine | ProlongationKind::SvcCone => &[3, 5, 7, 8, 9],
            ProlongationKind::Dual => &[4, 6, 8],
        }
    }
}

/// Verdicts attached to the cone prolongation.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeCriterion {
    /// A does not depend on w.
    pub a_w_vanishes: bool,
    /// [ξ1 + z2ξ2 + z3ξ3, ξ5 + z2ξ6] + Aξ6 lies in the fourth flag level.
    pub membership: bool,
    /// The B3(1,2,3) certificate of the result.
    pub certificate: bool,
}

#[derive(Clone, Debug)]
pub struct ProlongationResult {
    pub kind: ProlongationKind,
    pub distribution: Distribution,
    pub splitting: Splitting,
    /// Solved coefficient functions in construction order.
    pub solved: Vec<(String, Scalar)>,
    pub chart_extension: Vec<String>,
    /// The (3,6)-distribution at the bottom of the tower.
    pub base: Distribution,
    /// ξ1..ξ6 of the base, lifted to the prolonged chart.
    pub base_fields: Vec<VectorField>,
    /// The complete adapted frame of the construction (ζ1..ζ8, θ1..θ9,
    /// ℓ1..ℓ8 or τ1..τ9).
    pub adapted: Vec<VectorField>,
    /// Coefficients of the previous stage, lifted to this chart.
    pub inherited: Vec<(String, Scalar)>,
    pub certificate: StructureCertificate,
    pub criterion: Option<ConeCriterion>,
}

impl ProlongationResult {
    pub fn coefficient(&self, name: &str) -> Option<&Scalar> {
        self.solved
            .iter()
            .chain(self.inherited.iter())
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
    }

    pub fn chart(&self) -> &ChartRef {
        self.distribution.chart()
    }
}

/// ξ1..ξ6 with ξ4 = [ξ1, ξ2], ξ5 = [ξ1, ξ3], ξ6 = [ξ2, ξ3].
pub fn base_frame(d: &Distribution) -> Result<Vec<VectorField>> {
    let f = d.frame();
    let mut out = f.to_vec();
    out.push(f[0].bracket(&f[1])?);
    out.push(f[0].bracket(&f[2])?);
    out.push(f[1].bracket(&f[2])?);
    Ok(out)
}

fn require_36(d: &Distribution) -> Result<()> {
    let g = d.growth();
    if d.rank() != 3 || g != [3, 6] {
        return Err(Error::GrowthMismatch {
            expected: vec![3, 6],
            found: g,
        });
    }
    Ok(())
}

fn require_growth(d: &Distribution, expected: &[usize]) -> Result<()> {
    let g = d.growth();
    if g != expected {
        return Err(Error::GrowthMismatch {
            expected: expected.to_vec(),
            found: g,
        });
    }
    Ok(())
}

fn lift_all(fields: &[VectorField], chart: &ChartRef) -> Result<Vec<VectorField>> {
    fields.iter().map(|v| v.lift(chart)).collect()
}

fn lin(chart: &ChartRef, terms: &[(Scalar, &VectorField)]) -> Result<VectorField> {
    VectorField::combination(chart, terms)
}

fn s(n: i64) -> Scalar {
    Scalar::int(n)
}

fn c(name: &str) -> Scalar {
    Scalar::coord(name)
}

fn solve_unknowns(
    template: &VectorField,
    names: &[&str],
    partners: &[VectorField],
    modulo: &[VectorField],
) -> Result<BTreeMap<String, Scalar>> {
    solve_linear_coefficients(template, names, partners, modulo)?.into_result()
}

/// Projectivized prolongation on the affine piece u1 ≠ 0, fiber
/// coordinates `z2, z3`.
pub fn prolong_projective(d: &Distribution) -> Result<ProlongationResult> {
    prolong_projective_named(d, "z2", "z3")
}

pub fn prolong_projective_named(d: &Distribution, z2n: &str, z3n: &str) -> Result<ProlongationResult> {
    require_36(d)?;
    let chart = d.chart().extend(&[z2n, z3n])?;
    let xi = lift_all(&base_frame(d)?, &chart)?;
    let (z2, z3) = (c(z2n), c(z3n));
    let dz2 = VectorField::coordinate(&chart, z2n)?;
    let dz3 = VectorField::coordinate(&chart, z3n)?;
    let horiz = lin(&chart, &[(s(1), &xi[0]), (z2.clone(), &xi[1]), (z3.clone(), &xi[2])])?;
    let (ua, ub) = (unknown(&chart, "a"), unknown(&chart, "b"));
    let template = lin(&chart, &[(s(1), &horiz), (ua, &dz2), (ub, &dz3)])?;
    let z4 = xi[1].neg();
    let z5 = xi[2].neg();
    let z6 = lin(&chart, &[(s(-1), &xi[3]), (z3.clone(), &xi[5])])?;
    let z7 = lin(&chart, &[(s(-1), &xi[4]), (z2.neg(), &xi[5])])?;
    let z8 = xi[5].neg();
    let e3 = [
        horiz.clone(),
        dz2.clone(),
        dz3.clone(),
        xi[1].clone(),
        xi[2].clone(),
        z6.clone(),
        z7.clone(),
    ];
    let sol = solve_unknowns(&template, &["a", "b"], &[z6.clone(), z7.clone()], &e3)?;
    let z1 = substitute_unknowns_field(&template, &sol)?;
    let dist = Distribution::new(&chart, vec![z1.clone(), dz2.clone(), dz3.clone()])?;
    require_growth(&dist, ProlongationKind::Projective.expected_growth())?;
    let splitting = Splitting::new(
        dist.clone(),
        vec![("E1".into(), vec![0]), ("E2".into(), vec![1, 2])],
    )?;
    let certificate = check_b3_23(&splitting)?;
    Ok(ProlongationResult {
        kind: ProlongationKind::Projective,
        distribution: dist,
        splitting,
        solved: vec![("a".into(), sol["a"].clone()), ("b".into(), sol["b"].clone())],
        chart_extension: vec![z2n.into(), z3n.into()],
        base: d.clone(),
        base_fields: xi,
        adapted: vec![z1, dz2, dz3, z4, z5, z6, z7, z8],
        inherited: Vec::new(),
        certificate,
        criterion: None,
    })
}

/// Prolongation of (Z, E) along the fiber lines of E2, fiber coordinate `w`.
pub fn prolong_fiber_line(ze: &ProlongationResult) -> Result<ProlongationResult> {
    if ze.kind != ProlongationKind::Projective {
        return Err(Error::InvalidSplitting(
            "fiber-line prolongation needs a projective prolongation".into(),
        ));
    }
    let wn = "w";
    let z2n = ze.chart_extension[0].as_str();
    let z3n = ze.chart_extension[1].as_str();
    let chart = ze.chart().extend(&[wn])?;
    let xi = lift_all(&ze.base_fields, &chart)?;
    let (z2, z3, w) = (c(z2n), c(z3n), c(wn));
    let a = ze.coefficient("a").expect("projective result carries a").clone();
    let b = ze.coefficient("b").expect("projective result carries b").clone();
    let dz2 = VectorField::coordinate(&chart, z2n)?;
    let dz3 = VectorField::coordinate(&chart, z3n)?;
    let dw = VectorField::coordinate(&chart, wn)?;
    let horiz = lin(&chart, &[(s(1), &xi[0]), (z2.clone(), &xi[1]), (z3.clone(), &xi[2])])?;
    let zeta1 = lin(&chart, &[(s(1), &horiz), (a.clone(), &dz2), (b.clone(), &dz3)])?;
    let t1 = dw.clone();
    let t2 = lin(&chart, &[(s(1), &dz2), (w.clone(), &dz3)])?;
    let uc = unknown(&chart, "c");
    let template = lin(&chart, &[(s(1), &zeta1), (uc.clone(), &dw)])?;
    let t2a = t2.apply(&a);
    let t2b = t2.apply(&b);
    let t7_of = |cc: &Scalar| -> Result<VectorField> {
        lin(
            &chart,
            &[
                (s(1), &xi[3]),
                (z3.neg(), &xi[5]),
                (w.clone(), &xi[4]),
                (w.mul(&z2), &xi[5]),
                (t2a.neg(), &xi[1]),
                (t2b.neg().add(cc), &xi[2]),
            ],
        )
    };
    let t7_template = t7_of(&uc)?;
    let t7_core = t7_of(&Scalar::zero())?;
    let f3 = [
        dw.clone(),
        dz2.clone(),
        dz3.clone(),
        xi[0].clone(),
        xi[1].clone(),
        xi[2].clone(),
        t7_core,
    ];
    let sol = solve_unknowns(&template, &["c"], std::slice::from_ref(&t7_template), &f3)?;
    let cv = sol["c"].clone();
    let t3 = substitute_unknowns_field(&template, &sol)?;
    let t7 = substitute_unknowns_field(&t7_template, &sol)?;
    let t4 = dz3.clone();
    let t5 = lin(
        &chart,
        &[
            (s(1), &xi[1]),
            (w.clone(), &xi[2]),
            (t2a.clone(), &dz2),
            (t2b.sub(&cv), &dz3),
        ],
    )?;
    let t6 = xi[2].clone();
    let t8 = lin(&chart, &[(s(1), &xi[4]), (z2.clone(), &xi[5])])?;
    let t9 = xi[5].clone();
    let dist = Distribution::new(&chart, vec![t1.clone(), t2.clone(), t3.clone()])?;
    require_growth(&dist, ProlongationKind::FiberLine.expected_growth())?;
    let splitting = Splitting::new(
        dist.clone(),
        vec![
            ("F1".into(), vec![0]),
            ("F2".into(), vec![1]),
            ("F3".into(), vec![2]),
        ],
    )?;
    let certificate = check_b3_123(&splitting)?;
    Ok(ProlongationResult {
        kind: ProlongationKind::FiberLine,
        distribution: dist,
        splitting,
        solved: vec![("c".into(), cv)],
        chart_extension: vec![wn.into()],
        base: ze.base.clone(),
        base_fields: xi,
        adapted: vec![t1, t2, t3, t4, t5, t6, t7, t8, t9],
        inherited: vec![("a".into(), a), ("b".into(), b)],
        certificate,
        criterion: None,
    })
}

/// Prolongation on P(D*) over the piece where ker ρ projects onto ⟨ξ1, ξ2⟩,
/// fiber coordinates `y1, y2`.
pub fn prolong_dual(d: &Distribution) -> Result<ProlongationResult> {
    require_36(d)?;
    let (y1n, y2n) = ("y1", "y2");
    let chart = d.chart().extend(&[y1n, y2n])?;
    let xi = lift_all(&base_frame(d)?, &chart)?;
    let (y1, y2) = (c(y1n), c(y2n));
    let dy1 = VectorField::coordinate(&chart, y1n)?;
    let dy2 = VectorField::coordinate(&chart, y2n)?;
    let names = ["alpha", "beta", "gamma", "delta"];
    let [ua, ub, ug, ud] = names.map(|n| unknown(&chart, n));
    let h1 = lin(&chart, &[(s(1), &xi[0]), (y1.clone(), &xi[2])])?;
    let h2 = lin(&chart, &[(s(1), &xi[1]), (y2.clone(), &xi[2])])?;
    let l1 = lin(&chart, &[(s(1), &h1), (ua, &dy1), (ub.clone(), &dy2)])?;
    let l2 = lin(&chart, &[(s(1), &h2), (ug.clone(), &dy1), (ud, &dy2)])?;
    let l5_core = lin(&chart, &[(s(1), &xi[3]), (y2.clone(), &xi[4]), (y1.neg(), &xi[5])])?;
    let l5 = lin(&chart, &[(s(1), &l5_core), (ub.sub(&ug), &xi[2])])?;
    let modulus = [
        xi[0].clone(),
        xi[1].clone(),
        xi[2].clone(),
        dy1.clone(),
        dy2.clone(),
        l5_core,
    ];
    // ℓ5 carries β − γ, so both brackets are imposed as one system.
    let joint = solve_bracket_conditions(
        &[(l1.clone(), l5.clone()), (l2.clone(), l5.clone())],
        &names,
        &modulus,
    )?
    .into_result()?;
    let l1 = substitute_unknowns_field(&l1, &joint)?;
    let l2 = substitute_unknowns_field(&l2, &joint)?;
    let l5 = substitute_unknowns_field(&l5, &joint)?;
    let l6 = xi[2].neg();
    let l7 = xi[4].neg();
    let l8 = xi[5].neg();
    let dist = Distribution::new(&chart, vec![l1.clone(), l2.clone(), dy1.clone(), dy2.clone()])?;
    require_growth(&dist, ProlongationKind::Dual.expected_growth())?;
    let splitting = Splitting::new(
        dist.clone(),
        vec![("L1".into(), vec![0, 1]), ("L2".into(), vec![2, 3])],
    )?;
    let certificate = check_b3_13(&splitting, B3_13Mode::Generalized)?;
    Ok(ProlongationResult {
        kind: ProlongationKind::Dual,
        distribution: dist,
        splitting,
        solved: names
            .iter()
            .map(|n| (n.to_string(), joint[*n].clone()))
            .collect(),
        chart_extension: vec![y1n.into(), y2n.into()],
        base: d.clone(),
        base_fields: xi,
        adapted: vec![l1, l2, dy1, dy2, l5, l6, l7, l8],
        inherited: Vec::new(),
        certificate,
        criterion: None,
    })
}

/// The singular-velocity-cone prolongation followed by the generalized
/// Legendre change of coordinates y1 = z3 − w z2, y2 = w, u = z2.
pub fn prolong_svc_cone(sl: &ProlongationResult) -> Result<ProlongationResult> {
    if sl.kind != ProlongationKind::Dual {
        return Err(Error::InvalidSplitting(
            "cone prolongation needs a dual prolongation".into(),
        ));
    }
    let (y1n, y2n, un) = ("y1", "y2", "u");
    let (z2n, z3n, wn) = ("z2", "z3", "w");
    let src = sl.chart().extend(&[un])?;
    let base_chart = sl.base.chart();
    let mut tcoords: Vec<String> = base_chart.coords().to_vec();
    tcoords.extend([z2n.to_string(), z3n.to_string(), wn.to_string()]);
    let tgt = Chart::from_names(tcoords, base_chart.symbols().to_vec())?;
    let legendre = Substitution::new(
        &src,
        &tgt,
        &[(y1n, "z3 - w*z2"), (y2n, "w"), (un, "z2")],
        &[(z2n, "u"), (z3n, "y1 + y2*u"), (wn, "y2")],
    )?;
    let coef = |n: &str| -> Result<Scalar> {
        legendre.pull(sl.coefficient(n).expect("dual result carries its coefficients"))
    };
    let (alpha, beta, gamma, delta) = (coef("alpha")?, coef("beta")?, coef("gamma")?, coef("delta")?);
    let (z2, z3, w) = (c(z2n), c(z3n), c(wn));
    let xi = lift_all(&sl.base_fields.iter().map(|v| v.restrict(base_chart)).collect::<Result<Vec<_>>>()?, &tgt)?;
    let dz2 = VectorField::coordinate(&tgt, z2n)?;
    let dz3 = VectorField::coordinate(&tgt, z3n)?;
    let dw = VectorField::coordinate(&tgt, wn)?;
    let t2 = lin(&tgt, &[(s(1), &dz2), (w.clone(), &dz3)])?;
    let core = alpha
        .add(&z2.mul(&beta.add(&gamma)))
        .add(&z2.mul(&z2).mul(&delta));
    let eps = core.derivative(wn).neg();
    let a = eps.clone();
    let b = core.add(&w.mul(&eps));
    let eta = t2.apply(&b).sub(&w.mul(&t2.apply(&a))).sub(&beta).sub(&z2.mul(&delta));
    let cc = eta.add(&beta).add(&z2.mul(&delta));
    let horiz = lin(&tgt, &[(s(1), &xi[0]), (z2.clone(), &xi[1]), (z3.clone(), &xi[2])])?;
    let t3 = lin(&tgt, &[(s(1), &horiz), (a.clone(), &dz2), (b.clone(), &dz3), (cc.clone(), &dw)])?;

    // The same field assembled on the source chart and pushed forward.
    let l = &sl.adapted;
    let lsrc: Vec<VectorField> = l[..4].iter().map(|v| v.lift(&src)).collect::<Result<_>>()?;
    let u = c(un);
    let tau1_src = lin(&src, &[(s(1), &lsrc[3]), (u.neg(), &lsrc[2])])?;
    let du = VectorField::coordinate(&src, un)?;
    let tau3_src = lin(
        &src,
        &[
            (s(1), &lsrc[0]),
            (u.clone(), &lsrc[1]),
            (legendre.push(&eta)?, &tau1_src),
            (legendre.push(&eps)?, &du),
        ],
    )?;
    if legendre.pushforward(&tau3_src)? != t3
        || legendre.pushforward(&tau1_src)? != dw
        || legendre.pushforward(&du)? != t2
    {
        return Err(Error::Invariant(
            "Legendre pushforward disagrees with the closed-form frame".into(),
        ));
    }

    let t1 = dw.clone();
    let t4 = dz3.clone();
    let t2a = t2.apply(&a);
    let t2b = t2.apply(&b);
    let t5 = lin(
        &tgt,
        &[
            (s(1), &xi[1]),
            (w.clone(), &xi[2]),
            (t2a.clone(), &dz2),
            (t2b.sub(&cc), &dz3),
            (t3.apply(&cc), &dw),
        ],
    )?;
    let t6 = xi[2].clone();
    let t7 = lin(
        &tgt,
        &[
            (s(1), &xi[3]),
            (z3.neg(), &xi[5]),
            (w.clone(), &xi[4]),
            (w.mul(&z2), &xi[5]),
            (t2a.neg(), &xi[1]),
            (t2b.neg().add(&cc), &xi[2]),
        ],
    )?;
    let t8 = lin(&tgt, &[(s(1), &xi[4]), (z2.clone(), &xi[5])])?;
    let t9 = xi[5].clone();
    let dist = Distribution::new(&tgt, vec![t1.clone(), t2.clone(), t3.clone()])?;
    require_growth(&dist, ProlongationKind::SvcCone.expected_growth())?;
    let splitting = Splitting::new(
        dist.clone(),
        vec![
            ("F1".into(), vec![0]),
            ("F2".into(), vec![1]),
            ("F3".into(), vec![2]),
        ],
    )?;
    let certificate = check_b3_123(&splitting)?;
    let probe = horiz.bracket(&t8)?.add(&xi[5].scale(&a))?;
    let membership = dist.flag_level(4).contains(&probe)?;
    let criterion = ConeCriterion {
        a_w_vanishes: a.derivative(wn).is_zero(),
        membership,
        certificate: certificate.overall,
    };
    Ok(ProlongationResult {
        kind: ProlongationKind::SvcCone,
        distribution: dist,
        splitting,
        solved: vec![
            ("epsilon".into(), eps),
            ("eta".into(), eta),
            ("A".into(), a),
            ("B".into(), b),
            ("C".into(), cc),
        ],
        chart_extension: vec![z2n.into(), z3n.into(), wn.into()],
        base: sl.base.clone(),
        base_fields: xi,
        adapted: vec![t1, t2, t3, t4, t5, t6, t7, t8, t9],
        inherited: vec![
            ("alpha".into(), alpha),
            ("beta".into(), beta),
            ("gamma".into(), gamma),
            ("delta".into(), delta),
        ],
        certificate,
        criterion: Some(criterion),
    })
}

/// True when the cone route and the projective/fiber-line route give the
/// same framed distribution (equal frames, hence equal splittings).
pub fn routes_coincide(cone: &ProlongationResult, fiber: &ProlongationResult) -> Result<bool> {
    if cone.chart() != fiber.chart() {
        return Ok(false);
    }
    Ok(cone.distribution.frame() == fiber.distribution.frame())
}

/// Undoes one prolongation step by reduction along its fiber coordinates:
/// (Z, E^(2)) by E2, (W, F + [F1, F2]) by F1, (S, L + [L1, L2]) by L2. The
/// result lives on the chart of the previous stage.
pub fn reduce_prolongation(r: &ProlongationResult) -> Result<Distribution> {
    let s = &r.splitting;
    let (extended, fiber) = match r.kind {
        ProlongationKind::Projective => (r.distribution.flag_level(2), s.part_fields(1)),
        ProlongationKind::FiberLine | ProlongationKind::SvcCone => {
            let mut fields = r.distribution.frame().to_vec();
            fields.push(s.part_fields(0)[0].bracket(&s.part_fields(1)[0])?);
            (Distribution::spanned_by(r.chart(), &fields)?, s.part_fields(0))
        }
        ProlongationKind::Dual => {
            let mut fields = r.distribution.frame().to_vec();
            for a in s.part_fields(0) {
                for b in s.part_fields(1) {
                    fields.push(a.bracket(&b)?);
                }
            }
            (Distribution::spanned_by(r.chart(), &fields)?, s.part_fields(1))
        }
    };
    extended.reduce_by_integrable(&fiber)
}

/// Runs a chain of prolongations starting from a (3,6)-distribution.
pub fn prolong_chain(d: &Distribution, kinds: &[ProlongationKind]) -> Result<ProlongationResult> {
    let Some((first, rest)) = kinds.split_first() else {
        return Err(Error::InvalidSplitting("empty prolongation chain".into()));
    };
    let mut cur = match first {
        ProlongationKind::Projective => prolong_projective(d)?,
        ProlongationKind::Dual => prolong_dual(d)?,
        k => {
            return Err(Error::InvalidSplitting(format!(
                "`{}` must follow another prolongation",
                k.name()
            )))
        }
    };
    for k in rest {
        cur = match (cur.kind, k) {
            (ProlongationKind::Projective, ProlongationKind::FiberLine) => prolong_fiber_line(&cur)?,
            (ProlongationKind::Dual, ProlongationKind::SvcCone) => prolong_svc_cone(&cur)?,
            (prev, k) => {
                return Err(Error::InvalidSplitting(format!(
                    "`{}` cannot follow `{}`",
                    k.name(),
                    prev.name()
                )))
            }
        };
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::SymbolDecl;

    fn example() -> Distribution {
        let c = Chart::new(
            &["x1", "x2", "x3", "x4", "x5", "x6"],
            vec![SymbolDecl::new("m", "x6")],
        )
        .unwrap();
        let f = |p: &[(&str, &str)]| VectorField::parse(&c, p).unwrap();
        Distribution::new(
            &c,
            vec![
                f(&[("x1", "1"), ("x4", "x3"), ("x6", "x2 + m(x6)")]),
                f(&[("x2", "1"), ("x5", "x3")]),
                f(&[("x3", "1")]),
            ],
        )
        .unwrap()
    }

    fn sc(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn projective_then_fiber_line() {
        let d = example();
        let ze = prolong_projective(&d).unwrap();
        assert_eq!(ze.coefficient("a").unwrap(), &Scalar::zero());
        assert_eq!(ze.coefficient("b").unwrap(), &sc("-z3*m'(x6)"));
        assert_eq!(ze.distribution.growth(), vec![3, 5, 7, 8]);
        assert!(ze.certificate.overall, "{:?}", ze.certificate.first_failure());
        let wf = prolong_fiber_line(&ze).unwrap();
        assert_eq!(wf.coefficient("c").unwrap(), &sc("-w*m'(x6)"));
        assert_eq!(wf.distribution.growth(), vec![3, 5, 7, 8, 9]);
        assert!(wf.certificate.overall, "{:?}", wf.certificate.first_failure());
        // The printed θ7 is off by c·θ6, so the raw-bracket table holds only
        // after moving F3 inside F1 ⊕ F3.
        assert_eq!(wf.certificate.replacement.as_deref(), Some("1/3*w*m'(x6)"));
    }

    #[test]
    fn dual_then_cone_matches_fiber_line_route() {
        let d = example();
        let sl = prolong_dual(&d).unwrap();
        assert_eq!(sl.coefficient("alpha").unwrap(), &sc("-y1*m'(x6)"));
        assert_eq!(sl.coefficient("beta").unwrap(), &sc("-2/3*y2*m'(x6)"));
        assert_eq!(sl.coefficient("gamma").unwrap(), &sc("-1/3*y2*m'(x6)"));
        assert_eq!(sl.coefficient("delta").unwrap(), &Scalar::zero());
        assert_eq!(sl.distribution.growth(), vec![4, 6, 8]);
        assert!(sl.certificate.overall, "{:?}", sl.certificate.first_failure());
        let cone = prolong_svc_cone(&sl).unwrap();
        assert_eq!(cone.coefficient("A").unwrap(), &Scalar::zero());
        assert_eq!(cone.coefficient("B").unwrap(), &sc("-z3*m'(x6)"));
        assert_eq!(cone.coefficient("C").unwrap(), &sc("-w*m'(x6)"));
        let crit = cone.criterion.clone().unwrap();
        assert!(crit.a_w_vanishes && crit.membership && crit.certificate);
        let fiber = prolong_chain(&d, &[ProlongationKind::Projective, ProlongationKind::FiberLine]).unwrap();
        assert!(routes_coincide(&cone, &fiber).unwrap());
    }

    #[test]
    fn wrong_growth_is_rejected() {
        let c = Chart::new(&["x1", "x2", "x3", "x4", "x5", "x6"], vec![]).unwrap();
        let frame = ["x1", "x2", "x3"]
            .iter()
            .map(|n| VectorField::coordinate(&c, n).unwrap())
            .collect();
        let d = Distribution::new(&c, frame).unwrap();
        assert!(matches!(
            prolong_projective(&d),
            Err(Error::GrowthMismatch { .. })
        ));
    }
}
