//! Linear algebra over the Scalar fraction field.
//!
//! Everything here works with reduced row echelon forms. Given a column
//! order the RREF of a row space is unique, so residues modulo a frame are
//! canonical representatives of their classes.

use std::collections::BTreeMap;

use crate::chart::{ChartRef, OneForm, VectorField};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Var, VarKind};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    /// Pivot on the first nonzero column.
    First,
    /// Pivot on the last nonzero column.
    Last,
}

/// Incrementally maintained reduced row echelon form.
///
/// `transform[i]` expresses `rows[i]` as a combination of the rows pushed so
/// far (indexed by push order, including rejected ones).
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    order: PivotOrder,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    transform: Vec<Vec<Scalar>>,
    pushed: usize,
}

impl Echelon {
    pub fn new(ncols: usize, order: PivotOrder) -> Echelon {
        Echelon {
            ncols,
            order,
            rows: Vec::new(),
            pivots: Vec::new(),
            transform: Vec::new(),
            pushed: 0,
        }
    }

    pub fn from_rows(rows: &[Vec<Scalar>], ncols: usize, order: PivotOrder) -> Echelon {
        let mut e = Echelon::new(ncols, order);
        for r in rows {
            e.push(r);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Row i of the echelon form as a combination of the pushed rows.
    pub fn transform(&self) -> &[Vec<Scalar>] {
        &self.transform
    }

    /// Residue of `v` and the combination (over pushed rows) subtracted.
    pub fn reduce(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        assert_eq!(v.len(), self.ncols, "row length mismatch");
        let mut residue = v.to_vec();
        let mut comb = vec![Scalar::zero(); self.pushed];
        for (i, &p) in self.pivots.iter().enumerate() {
            let f = v[p].clone();
            if f.is_zero() {
                continue;
            }
            for (k, r) in self.rows[i].iter().enumerate() {
                if !r.is_zero() {
                    residue[k] = residue[k].sub(&f.mul(r));
                }
            }
            for (k, t) in self.transform[i].iter().enumerate() {
                if !t.is_zero() {
                    comb[k] = comb[k].add(&f.mul(t));
                }
            }
        }
        (residue, comb)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).0.iter().all(Scalar::is_zero)
    }

    fn pivot_of(&self, r: &[Scalar]) -> Option<usize> {
        match self.order {
            PivotOrder::First => r.iter().position(|x| !x.is_zero()),
            PivotOrder::Last => r.iter().rposition(|x| !x.is_zero()),
        }
    }

    /// Adds a row; returns true when it enlarged the span.
    pub fn push(&mut self, v: &[Scalar]) -> bool {
        let (mut r, comb) = self.reduce(v);
        let idx = self.pushed;
        self.pushed += 1;
        for t in &mut self.transform {
            t.push(Scalar::zero());
        }
        let Some(p) = self.pivot_of(&r) else {
            return false;
        };
        let mut t: Vec<Scalar> = comb.iter().map(Scalar::neg).collect();
        t.push(Scalar::one());
        let inv = r[p].inv().expect("pivot is nonzero");
        if !inv.is_one() {
            r = r.iter().map(|x| x.mul(&inv)).collect();
            t = t.iter().map(|x| x.mul(&inv)).collect();
        }
        debug_assert_eq!(t.len(), idx + 1);
        for i in 0..self.rows.len() {
            let f = self.rows[i][p].clone();
            if f.is_zero() {
                continue;
            }
            for k in 0..self.ncols {
                if !r[k].is_zero() {
                    self.rows[i][k] = self.rows[i][k].sub(&f.mul(&r[k]));
                }
            }
            for k in 0..t.len() {
                if !t[k].is_zero() {
                    self.transform[i][k] = self.transform[i][k].sub(&f.mul(&t[k]));
                }
            }
        }
        // Keep rows sorted by pivot position in the chosen order.
        let pos = self
            .pivots
            .iter()
            .position(|&q| match self.order {
                PivotOrder::First => q > p,
                PivotOrder::Last => q < p,
            })
            .unwrap_or(self.pivots.len());
        self.rows.insert(pos, r);
        self.pivots.insert(pos, p);
        self.transform.insert(pos, t);
        true
    }

    /// Basis of the solution space of `rows · x = 0`.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        (0..self.ncols)
            .filter(|c| !self.pivots.contains(c))
            .map(|f| {
                let mut x = vec![Scalar::zero(); self.ncols];
                x[f] = Scalar::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    x[p] = row[f].neg();
                }
                x
            })
            .collect()
    }
}

pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    Echelon::from_rows(rows, ncols, PivotOrder::First).rank()
}

fn check_chart(chart: &ChartRef, fields: &[VectorField]) -> Result<()> {
    for f in fields {
        if f.chart() != chart {
            return Err(Error::ChartMismatch);
        }
    }
    Ok(())
}

pub fn frame_echelon(chart: &ChartRef, fields: &[VectorField]) -> Result<Echelon> {
    check_chart(chart, fields)?;
    let rows: Vec<Vec<Scalar>> = fields.iter().map(|f| f.coeffs().to_vec()).collect();
    Ok(Echelon::from_rows(&rows, chart.dim(), PivotOrder::First))
}

/// Rank of a list of vector fields over the fraction field.
pub fn generic_rank(fields: &[VectorField]) -> Result<usize> {
    let Some(first) = fields.first() else {
        return Ok(0);
    };
    Ok(frame_echelon(first.chart(), fields)?.rank())
}

/// Residue of `v` modulo the span of `frame`, with the combination used.
pub fn reduce_mod_frame(v: &VectorField, frame: &[VectorField]) -> Result<(VectorField, Vec<Scalar>)> {
    let e = frame_echelon(v.chart(), frame)?;
    let (res, comb) = e.reduce(v.coeffs());
    Ok((VectorField::from_coeffs(v.chart(), res), comb))
}

/// Echelon representative of a span: the rows of its RREF as fields.
pub fn canonical_frame(chart: &ChartRef, fields: &[VectorField]) -> Result<Vec<VectorField>> {
    let e = frame_echelon(chart, fields)?;
    Ok(e.rows()
        .iter()
        .map(|r| VectorField::from_coeffs(chart, r.clone()))
        .collect())
}

/// True when the two lists span the same module over the fraction field.
pub fn same_span(a: &[VectorField], b: &[VectorField]) -> Result<bool> {
    match (a.first(), b.first()) {
        (None, None) => Ok(true),
        (Some(x), _) | (_, Some(x)) => {
            let chart = x.chart().clone();
            Ok(canonical_frame(&chart, a)? == canonical_frame(&chart, b)?)
        }
    }
}

/// Common kernel of independent one-forms.
///
/// Elimination pivots on the last coordinate of each form, so the returned
/// fields are indexed by the earliest free coordinates and have coefficient
/// 1 there.
pub fn kernel_frame(forms: &[OneForm]) -> Result<Vec<VectorField>> {
    let Some(first) = forms.first() else {
        return Err(Error::DependentForms { rank: 0, len: 0 });
    };
    let chart = first.chart().clone();
    for f in forms {
        if f.chart() != &chart {
            return Err(Error::ChartMismatch);
        }
    }
    let rows: Vec<Vec<Scalar>> = forms.iter().map(|f| f.coeffs().to_vec()).collect();
    let e = Echelon::from_rows(&rows, chart.dim(), PivotOrder::Last);
    if e.rank() < forms.len() {
        return Err(Error::DependentForms {
            rank: e.rank(),
            len: forms.len(),
        });
    }
    Ok(e.nullspace()
        .into_iter()
        .map(|x| VectorField::from_coeffs(&chart, x))
        .collect())
}

/// Solves `a · x = b` for a unique `x`.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar], nvars: usize) -> Result<Vec<Scalar>> {
    let rows: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let e = Echelon::from_rows(&rows, nvars + 1, PivotOrder::First);
    if e.pivots().contains(&nvars) {
        return Err(Error::Inconsistent);
    }
    if e.rank() < nvars {
        return Err(Error::Underdetermined(nvars - e.rank()));
    }
    let mut x = vec![Scalar::zero(); nvars];
    for (row, &p) in e.rows().iter().zip(e.pivots()) {
        x[p] = row[nvars].clone();
    }
    Ok(x)
}

/// Outcome of [`solve_linear_coefficients`].
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolveReport {
    pub solution: Option<BTreeMap<String, Scalar>>,
    pub residual_rank_defect: usize,
    pub derivative_obstruction: Option<(String, String)>,
    pub inconsistent: bool,
}

impl LinearSolveReport {
    pub fn into_result(self) -> Result<BTreeMap<String, Scalar>> {
        if let Some((unknown, witness)) = self.derivative_obstruction {
            return Err(Error::DerivativeObstruction { unknown, witness });
        }
        if self.inconsistent {
            return Err(Error::Inconsistent);
        }
        if self.residual_rank_defect > 0 {
            return Err(Error::Underdetermined(self.residual_rank_defect));
        }
        self.solution.ok_or(Error::Inconsistent)
    }
}

/// An unknown coefficient: a formal function of every chart coordinate.
pub fn unknown(chart: &ChartRef, name: &str) -> Scalar {
    chart.free_function(name)
}

fn unknown_of(v: &Var, names: &[String]) -> Option<(usize, u32)> {
    match v.kind() {
        VarKind::Jet { symbol, orders, .. } => names
            .iter()
            .position(|n| n == symbol)
            .map(|i| (i, orders.iter().sum())),
        VarKind::Coord(_) => None,
    }
}

/// Replaces unknown symbols (and their jets) by solved values.
pub fn substitute_unknowns(s: &Scalar, solution: &BTreeMap<String, Scalar>) -> Result<Scalar> {
    s.substitute(&|v: &Var| match v.kind() {
        VarKind::Jet { symbol, args, orders } => {
            let mut val = solution.get(symbol)?.clone();
            for (a, &o) in args.iter().zip(orders) {
                for _ in 0..o {
                    val = val.derivative(a);
                }
            }
            Some(val)
        }
        VarKind::Coord(_) => None,
    })
}

pub fn substitute_unknowns_field(
    v: &VectorField,
    solution: &BTreeMap<String, Scalar>,
) -> Result<VectorField> {
    v.map_coeffs(&|c| substitute_unknowns(c, solution))
}

/// Splits `s` as `Σ coeff_i · u_i + constant` in the named unknowns.
fn linear_parts(s: &Scalar, names: &[String]) -> Result<(Vec<Scalar>, Scalar)> {
    if s.denominator().vars().iter().any(|v| unknown_of(v, names).is_some()) {
        return Err(Error::Nonlinear(s.to_string()));
    }
    let den = s.denominator().clone();
    let mut coeffs = vec![Poly::zero(); names.len()];
    let mut constant = Poly::zero();
    for (m, c) in s.numerator().terms() {
        let mut which = None;
        let mut rest = Monomial::one();
        for (v, e) in m.factors() {
            match unknown_of(v, names) {
                Some((i, 0)) => {
                    if which.is_some() || *e != 1 {
                        return Err(Error::Nonlinear(s.to_string()));
                    }
                    which = Some(i);
                }
                Some(_) => unreachable!("derivatives are screened earlier"),
                None => rest = rest.mul(&Monomial::var(v.clone(), *e)),
            }
        }
        let t = Poly::term(c.clone(), rest);
        match which {
            Some(i) => coeffs[i] = coeffs[i].add(&t),
            None => constant = constant.add(&t),
        }
    }
    let q = |p: Poly| Scalar::fraction(p, den.clone()).expect("nonzero denominator");
    Ok((coeffs.into_iter().map(q).collect(), q(constant)))
}

/// Solves for unknown coefficients of `template` so that the bracket with
/// every partner vanishes modulo `modulo`.
///
/// The unknowns appear in `template` as formal functions created by
/// [`unknown`]. Any surviving derivative of an unknown is reported as an
/// obstruction.
pub fn solve_linear_coefficients(
    template: &VectorField,
    unknowns: &[&str],
    partners: &[VectorField],
    modulo: &[VectorField],
) -> Result<LinearSolveReport> {
    let pairs: Vec<(VectorField, VectorField)> = partners
        .iter()
        .map(|p| (template.clone(), p.clone()))
        .collect();
    solve_bracket_conditions(&pairs, unknowns, modulo)
}

/// Like [`solve_linear_coefficients`], with unknowns allowed on both sides
/// of each bracket `[pair.0, pair.1] ≡ 0`.
pub fn solve_bracket_conditions(
    pairs: &[(VectorField, VectorField)],
    unknowns: &[&str],
    modulo: &[VectorField],
) -> Result<LinearSolveReport> {
    let Some((first, _)) = pairs.first() else {
        return Ok(LinearSolveReport {
            solution: None,
            residual_rank_defect: unknowns.len(),
            derivative_obstruction: None,
            inconsistent: false,
        });
    };
    let chart = first.chart().clone();
    let module = frame_echelon(&chart, modulo)?;
    let mut residues = Vec::new();
    for (l, r) in pairs {
        residues.extend(module.reduce(l.bracket(r)?.coeffs()).0);
    }
    let report = solve_vanishing(&residues, unknowns)?;
    if let Some(solution) = &report.solution {
        verify_solution(pairs, &module, solution)?;
    }
    Ok(report)
}

/// Solves `expressions = 0` for unknowns that appear linearly and
/// undifferentiated.
pub fn solve_vanishing(expressions: &[Scalar], unknowns: &[&str]) -> Result<LinearSolveReport> {
    let names: Vec<String> = unknowns.iter().map(|s| s.to_string()).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for c in expressions {
        if c.is_zero() {
            continue;
        }
        for v in c.vars() {
            if let Some((i, order)) = unknown_of(&v, &names) {
                if order > 0 {
                    return Ok(LinearSolveReport {
                        solution: None,
                        residual_rank_defect: 0,
                        derivative_obstruction: Some((names[i].clone(), c.to_string())),
                        inconsistent: false,
                    });
                }
            }
        }
        let (coeffs, constant) = linear_parts(c, &names)?;
        a.push(coeffs);
        b.push(constant.neg());
    }
    Ok(match solve(&a, &b, names.len()) {
        Ok(x) => LinearSolveReport {
            solution: Some(names.iter().cloned().zip(x).collect()),
            residual_rank_defect: 0,
            derivative_obstruction: None,
            inconsistent: false,
        },
        Err(Error::Underdetermined(d)) => LinearSolveReport {
            solution: None,
            residual_rank_defect: d,
            derivative_obstruction: None,
            inconsistent: false,
        },
        Err(Error::Inconsistent) => LinearSolveReport {
            solution: None,
            residual_rank_defect: 0,
            derivative_obstruction: None,
            inconsistent: true,
        },
        Err(e) => return Err(e),
    })
}

fn verify_solution(
    pairs: &[(VectorField, VectorField)],
    module: &Echelon,
    solution: &BTreeMap<String, Scalar>,
) -> Result<()> {
    for (l, r) in pairs {
        let l = substitute_unknowns_field(l, solution)?;
        let r = substitute_unknowns_field(r, solution)?;
        let br = l.bracket(&r)?;
        if !module.contains(br.coeffs()) {
            return Err(Error::Invariant(format!(
                "solved coefficients leave residue for [{l}, {r}]"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn proportional_fields_have_rank_one() {
        let c = Chart::new(&["x1", "x2"], vec![]).unwrap();
        let a = VectorField::parse(&c, &[("x1", "1")]).unwrap();
        let b = VectorField::parse(&c, &[("x1", "x1")]).unwrap();
        assert_eq!(generic_rank(&[a, b]).unwrap(), 1);
    }

    #[test]
    fn reduction_of_member_and_transverse_field() {
        let c = Chart::new(&["x1", "x2", "x3"], vec![]).unwrap();
        let e1 = VectorField::parse(&c, &[("x1", "1"), ("x3", "x2")]).unwrap();
        let e2 = VectorField::parse(&c, &[("x2", "1")]).unwrap();
        let (r, comb) = reduce_mod_frame(&e1, &[e1.clone(), e2.clone()]).unwrap();
        assert!(r.is_zero());
        assert_eq!(comb, vec![Scalar::one(), Scalar::zero()]);
        let d2 = VectorField::coordinate(&c, "x2").unwrap();
        let d1 = VectorField::coordinate(&c, "x1").unwrap();
        let (r, _) = reduce_mod_frame(&d2, &[d1]).unwrap();
        assert_eq!(r, d2);
    }

    #[test]
    fn reduction_is_idempotent() {
        let c = Chart::new(&["x1", "x2", "x3"], vec![]).unwrap();
        let f = VectorField::parse(&c, &[("x1", "x2"), ("x2", "1/x3")]).unwrap();
        let v = VectorField::parse(&c, &[("x1", "x3"), ("x2", "x1"), ("x3", "2")]).unwrap();
        let (r, _) = reduce_mod_frame(&v, std::slice::from_ref(&f)).unwrap();
        let (r2, comb) = reduce_mod_frame(&r, &[f]).unwrap();
        assert_eq!(r, r2);
        assert!(comb.iter().all(Scalar::is_zero));
    }

    #[test]
    fn kernel_of_single_differential() {
        let c = Chart::new(&["x1", "x2"], vec![]).unwrap();
        let k = kernel_frame(&[OneForm::differential(&c, "x1").unwrap()]).unwrap();
        assert_eq!(k, vec![VectorField::coordinate(&c, "x2").unwrap()]);
    }

    #[test]
    fn kernel_annihilates_forms_and_rejects_dependence() {
        let c = Chart::new(&["a1", "a2", "a3", "a4"], vec![]).unwrap();
        let w1 = OneForm::from_pairs(&c, &[("a3", s("1")), ("a1", s("-a2"))]).unwrap();
        let w2 = OneForm::from_pairs(&c, &[("a4", s("1")), ("a2", s("-a1^2"))]).unwrap();
        let k = kernel_frame(&[w1.clone(), w2.clone()]).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(w1.pair(v).unwrap().is_zero());
            assert!(w2.pair(v).unwrap().is_zero());
        }
        assert_eq!(k[0].to_string(), "d/da1 + a2*d/da3");
        let err = kernel_frame(&[w1.clone(), w1.scale(&s("a3"))]).unwrap_err();
        assert_eq!(err, Error::DependentForms { rank: 1, len: 2 });
    }

    #[test]
    fn unique_and_degenerate_solves() {
        let x = solve(&[vec![s("1"), s("1")], vec![s("1"), s("-1")]], &[s("2*t"), s("0")], 2).unwrap();
        assert_eq!(x, vec![s("t"), s("t")]);
        assert_eq!(
            solve(&[vec![s("1"), s("1")]], &[s("1")], 2),
            Err(Error::Underdetermined(1))
        );
        assert_eq!(
            solve(&[vec![s("1")], vec![s("2")]], &[s("1"), s("1")], 1),
            Err(Error::Inconsistent)
        );
    }

    #[test]
    fn solving_for_a_coefficient() {
        let c = Chart::new(&["x", "y", "w"], vec![]).unwrap();
        let a = unknown(&c, "a");
        let t = VectorField::from_pairs(&c, &[("x", s("1")), ("w", a)]).unwrap();
        let p = VectorField::parse(&c, &[("y", "1"), ("x", "w + x^2")]).unwrap();
        let dw = VectorField::coordinate(&c, "w").unwrap();
        // [t, p] = (a + 2x)∂x − p(a)∂w; the derivative term dies modulo ∂w.
        let rep = solve_linear_coefficients(&t, &["a"], std::slice::from_ref(&p), std::slice::from_ref(&dw)).unwrap();
        assert_eq!(rep.into_result().unwrap()["a"], s("-2*x"));
        // Without the modulus the derivative of a survives.
        let rep = solve_linear_coefficients(&t, &["a"], &[p], &[]).unwrap();
        assert_eq!(rep.derivative_obstruction.as_ref().unwrap().0, "a");
        // A partner that imposes nothing leaves a free.
        let rep = solve_linear_coefficients(&t, &["a"], std::slice::from_ref(&dw), std::slice::from_ref(&dw)).unwrap();
        assert_eq!(rep.residual_rank_defect, 1);
    }
}
