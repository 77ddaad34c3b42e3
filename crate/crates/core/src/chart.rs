//! Charts, vector fields and one-forms with Scalar coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Var, VarKind};
use crate::scalar::Scalar;

/// A one-argument function symbol such as `m` with argument `x6`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolDecl {
    pub name: String,
    pub arg: String,
}

impl SymbolDecl {
    pub fn new(name: &str, arg: &str) -> SymbolDecl {
        SymbolDecl {
            name: name.to_string(),
            arg: arg.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chart {
    coords: Vec<String>,
    symbols: Vec<SymbolDecl>,
}

pub type ChartRef = Arc<Chart>;

impl Chart {
    pub fn new(coords: &[&str], symbols: Vec<SymbolDecl>) -> Result<ChartRef> {
        Chart::from_names(coords.iter().map(|s| s.to_string()).collect(), symbols)
    }

    pub fn from_names(coords: Vec<String>, symbols: Vec<SymbolDecl>) -> Result<ChartRef> {
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{c}`")));
            }
            if !c.chars().next().is_some_and(|ch| ch.is_alphabetic() || ch == '_')
                || !c.chars().all(|ch| ch.is_alphanumeric() || ch == '_')
            {
                return Err(Error::InvalidChart(format!("invalid coordinate name `{c}`")));
            }
        }
        for s in &symbols {
            if !coords.contains(&s.arg) {
                return Err(Error::InvalidChart(format!(
                    "symbol `{}` has argument `{}` outside the chart",
                    s.name, s.arg
                )));
            }
            if coords.contains(&s.name) {
                return Err(Error::InvalidChart(format!(
                    "symbol `{}` clashes with a coordinate",
                    s.name
                )));
            }
        }
        Ok(Arc::new(Chart { coords, symbols }))
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn symbols(&self) -> &[SymbolDecl] {
        &self.symbols
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn index(&self, name: &str) -> Result<usize> {
        self.coords
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.coords.iter().any(|c| c == name)
    }

    /// New chart with `extra` coordinates appended.
    pub fn extend(&self, extra: &[&str]) -> Result<ChartRef> {
        let mut coords = self.coords.clone();
        for e in extra {
            if coords.iter().any(|c| c == e) {
                return Err(Error::InvalidChart(format!(
                    "extension coordinate `{e}` is not fresh"
                )));
            }
            coords.push(e.to_string());
        }
        Chart::from_names(coords, self.symbols.clone())
    }

    /// New chart with the listed coordinates removed.
    pub fn without(&self, drop: &[String]) -> Result<ChartRef> {
        let coords = self
            .coords
            .iter()
            .filter(|c| !drop.contains(c))
            .cloned()
            .collect();
        Chart::from_names(coords, self.symbols.clone())
    }

    /// Checks that a Scalar only involves chart coordinates and declared
    /// symbols. Jets of undeclared symbols are accepted when `allow_free`
    /// holds (formal unknowns).
    pub fn check_scalar(&self, s: &Scalar, allow_free: bool) -> Result<()> {
        for v in s.vars() {
            match v.kind() {
                VarKind::Coord(n) => {
                    if !self.contains(n) {
                        return Err(Error::UnknownCoordinate(n.clone()));
                    }
                }
                VarKind::Jet { symbol, args, .. } => {
                    for a in args {
                        if !self.contains(a) {
                            return Err(Error::UnknownCoordinate(a.clone()));
                        }
                    }
                    let declared = self
                        .symbols
                        .iter()
                        .any(|d| &d.name == symbol && args.len() == 1 && args[0] == d.arg);
                    if !declared && !allow_free {
                        return Err(Error::UnknownSymbol(symbol.clone()));
                    }
                }
            }
        }
        Ok(())
    }

    /// A formal function of every chart coordinate, used for unknown
    /// coefficients and arbitrary multipliers.
    pub fn free_function(&self, name: &str) -> Scalar {
        let zeros = vec![0; self.coords.len()];
        Scalar::var(Var::jet(name, &self.coords, &zeros))
    }
}

fn same_chart(a: &ChartRef, b: &ChartRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A vector field Σ v^i ∂/∂x_i with dense coefficients in chart order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    chart: ChartRef,
    coeffs: Vec<Scalar>,
}

impl VectorField {
    pub fn zero(chart: &ChartRef) -> VectorField {
        VectorField {
            chart: chart.clone(),
            coeffs: vec![Scalar::zero(); chart.dim()],
        }
    }

    pub fn from_coeffs(chart: &ChartRef, coeffs: Vec<Scalar>) -> VectorField {
        assert_eq!(coeffs.len(), chart.dim(), "coefficient count mismatch");
        VectorField {
            chart: chart.clone(),
            coeffs,
        }
    }

    /// The coordinate field ∂/∂name.
    pub fn coordinate(chart: &ChartRef, name: &str) -> Result<VectorField> {
        let i = chart.index(name)?;
        let mut v = VectorField::zero(chart);
        v.coeffs[i] = Scalar::one();
        Ok(v)
    }

    pub fn from_pairs(chart: &ChartRef, pairs: &[(&str, Scalar)]) -> Result<VectorField> {
        let mut v = VectorField::zero(chart);
        for (n, s) in pairs {
            let i = chart.index(n)?;
            v.coeffs[i] = v.coeffs[i].add(s);
        }
        Ok(v)
    }

    /// Parses `[(coord, literal)]` pairs.
    pub fn parse(chart: &ChartRef, pairs: &[(&str, &str)]) -> Result<VectorField> {
        let mut v = VectorField::zero(chart);
        for (n, lit) in pairs {
            let i = chart.index(n)?;
            let s = Scalar::parse(lit)?;
            chart.check_scalar(&s, false)?;
            v.coeffs[i] = v.coeffs[i].add(&s);
        }
        Ok(v)
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, name: &str) -> Result<&Scalar> {
        Ok(&self.coeffs[self.chart.index(name)?])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Sparse view: nonzero (coordinate, coefficient) pairs in chart order.
    pub fn nonzero(&self) -> Vec<(&str, &Scalar)> {
        self.chart
            .coords()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n.as_str(), c))
            .collect()
    }

    fn check(&self, o: &VectorField) -> Result<()> {
        if same_chart(&self.chart, &o.chart) {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, o: &VectorField) -> Result<VectorField> {
        self.check(o)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, o: &VectorField) -> Result<VectorField> {
        self.check(o)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, f: &Scalar) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// Linear combination Σ c_i v_i of fields on a common chart.
    pub fn combination(chart: &ChartRef, terms: &[(Scalar, &VectorField)]) -> Result<VectorField> {
        let mut acc = VectorField::zero(chart);
        for (c, v) in terms {
            acc = acc.add(&v.scale(c))?;
        }
        Ok(acc)
    }

    /// Directional derivative v(f) = Σ v^i ∂f/∂x_i.
    pub fn apply(&self, f: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (n, c) in self.chart.coords().iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let d = f.derivative(n);
            if !d.is_zero() {
                acc = acc.add(&c.mul(&d));
            }
        }
        acc
    }

    /// Lie bracket [v, w]^k = v(w^k) − w(v^k).
    pub fn bracket(&self, w: &VectorField) -> Result<VectorField> {
        self.check(w)?;
        let coeffs = (0..self.coeffs.len())
            .map(|k| self.apply(&w.coeffs[k]).sub(&w.apply(&self.coeffs[k])))
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs,
        })
    }

    /// Re-expresses the field on a chart containing all of its coordinates;
    /// the extra coordinates get zero coefficients.
    pub fn lift(&self, chart: &ChartRef) -> Result<VectorField> {
        let mut v = VectorField::zero(chart);
        for (n, c) in self.chart.coords().iter().zip(&self.coeffs) {
            let i = chart.index(n)?;
            v.coeffs[i] = c.clone();
        }
        Ok(v)
    }

    /// Drops coordinates absent from `chart`; the dropped coefficients must
    /// be zero.
    pub fn restrict(&self, chart: &ChartRef) -> Result<VectorField> {
        let mut v = VectorField::zero(chart);
        for (n, c) in self.chart.coords().iter().zip(&self.coeffs) {
            match chart.index(n) {
                Ok(i) => v.coeffs[i] = c.clone(),
                Err(_) if c.is_zero() => {}
                Err(e) => return Err(e),
            }
        }
        Ok(v)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: &dyn Fn(&Scalar) -> Result<Scalar>) -> Result<VectorField> {
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }

    /// Coefficients as a coordinate → literal map (nonzero entries only).
    pub fn to_literal_map(&self) -> BTreeMap<String, String> {
        self.nonzero()
            .into_iter()
            .map(|(n, c)| (n.to_string(), c.to_string()))
            .collect()
    }

    /// Literal pairs in chart order (nonzero entries only).
    pub fn to_literal_pairs(&self) -> Vec<(String, String)> {
        self.nonzero()
            .into_iter()
            .map(|(n, c)| (n.to_string(), c.to_string()))
            .collect()
    }
}

pub(crate) fn fmt_term(f: &mut fmt::Formatter<'_>, first: bool, c: &Scalar, basis: &str) -> fmt::Result {
    let text = c.to_string();
    let simple = c.is_polynomial() && c.numerator().num_terms() == 1;
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) if simple => (true, rest.to_string()),
        _ => (false, text.clone()),
    };
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if body == "1" {
        write!(f, "{basis}")
    } else if simple {
        write!(f, "{body}*{basis}")
    } else {
        write!(f, "({body})*{basis}")
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz = self.nonzero();
        if nz.is_empty() {
            return write!(f, "0");
        }
        for (k, (n, c)) in nz.iter().enumerate() {
            fmt_term(f, k == 0, c, &format!("d/d{n}"))?;
        }
        Ok(())
    }
}

/// A one-form Σ a_i dx_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OneForm {
    chart: ChartRef,
    coeffs: Vec<Scalar>,
}

impl OneForm {
    pub fn zero(chart: &ChartRef) -> OneForm {
        OneForm {
            chart: chart.clone(),
            coeffs: vec![Scalar::zero(); chart.dim()],
        }
    }

    pub fn from_coeffs(chart: &ChartRef, coeffs: Vec<Scalar>) -> OneForm {
        assert_eq!(coeffs.len(), chart.dim(), "coefficient count mismatch");
        OneForm {
            chart: chart.clone(),
            coeffs,
        }
    }

    pub fn differential(chart: &ChartRef, name: &str) -> Result<OneForm> {
        let i = chart.index(name)?;
        let mut w = OneForm::zero(chart);
        w.coeffs[i] = Scalar::one();
        Ok(w)
    }

    /// The exterior derivative df of a function.
    pub fn exact(chart: &ChartRef, f: &Scalar) -> OneForm {
        OneForm {
            chart: chart.clone(),
            coeffs: chart.coords().iter().map(|n| f.derivative(n)).collect(),
        }
    }

    pub fn from_pairs(chart: &ChartRef, pairs: &[(&str, Scalar)]) -> Result<OneForm> {
        let mut w = OneForm::zero(chart);
        for (n, s) in pairs {
            let i = chart.index(n)?;
            w.coeffs[i] = w.coeffs[i].add(s);
        }
        Ok(w)
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &OneForm) -> Result<OneForm> {
        if !same_chart(&self.chart, &o.chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(OneForm {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn scale(&self, f: &Scalar) -> OneForm {
        OneForm {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// Pairing ⟨ω, v⟩.
    pub fn pair(&self, v: &VectorField) -> Result<Scalar> {
        if !same_chart(&self.chart, v.chart()) {
            return Err(Error::ChartMismatch);
        }
        let mut acc = Scalar::zero();
        for (a, b) in self.coeffs.iter().zip(v.coeffs()) {
            if !a.is_zero() && !b.is_zero() {
                acc = acc.add(&a.mul(b));
            }
        }
        Ok(acc)
    }

    pub fn nonzero(&self) -> Vec<(&str, &Scalar)> {
        self.chart
            .coords()
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (n.as_str(), c))
            .collect()
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz = self.nonzero();
        if nz.is_empty() {
            return write!(f, "0");
        }
        for (k, (n, c)) in nz.iter().enumerate() {
            fmt_term(f, k == 0, c, &format!("d{n}"))?;
        }
        Ok(())
    }
}

/// An explicit rational change of coordinates between two charts.
///
/// Coordinates present in both charts and absent from the maps are carried
/// over unchanged.
#[derive(Clone, Debug)]
pub struct Substitution {
    pub source: ChartRef,
    pub target: ChartRef,
    /// Source coordinate → expression in target coordinates.
    pub forward: BTreeMap<String, Scalar>,
    /// Target coordinate → expression in source coordinates.
    pub inverse: BTreeMap<String, Scalar>,
}

impl Substitution {
    pub fn new(
        source: &ChartRef,
        target: &ChartRef,
        forward: &[(&str, &str)],
        inverse: &[(&str, &str)],
    ) -> Result<Substitution> {
        let parse = |pairs: &[(&str, &str)], from: &ChartRef, to: &ChartRef| {
            pairs
                .iter()
                .map(|(k, v)| {
                    from.index(k)?;
                    let s = Scalar::parse(v)?;
                    to.check_scalar(&s, false)?;
                    Ok((k.to_string(), s))
                })
                .collect::<Result<BTreeMap<_, _>>>()
        };
        let sub = Substitution {
            source: source.clone(),
            target: target.clone(),
            forward: parse(forward, source, target)?,
            inverse: parse(inverse, target, source)?,
        };
        sub.verify()?;
        Ok(sub)
    }

    fn forward_of(&self, c: &str) -> Result<Scalar> {
        match self.forward.get(c) {
            Some(s) => Ok(s.clone()),
            None if self.target.contains(c) => Ok(Scalar::coord(c)),
            None => Err(Error::NotInverse(format!("no image for `{c}`"))),
        }
    }

    fn inverse_of(&self, c: &str) -> Result<Scalar> {
        match self.inverse.get(c) {
            Some(s) => Ok(s.clone()),
            None if self.source.contains(c) => Ok(Scalar::coord(c)),
            None => Err(Error::NotInverse(format!("no preimage for `{c}`"))),
        }
    }

    /// Rewrites a Scalar in source coordinates into target coordinates.
    pub fn pull(&self, f: &Scalar) -> Result<Scalar> {
        rewrite(f, &|c| self.forward_of(c), &self.source)
    }

    /// Rewrites a Scalar in target coordinates into source coordinates.
    pub fn push(&self, f: &Scalar) -> Result<Scalar> {
        rewrite(f, &|c| self.inverse_of(c), &self.target)
    }

    fn verify(&self) -> Result<()> {
        for c in self.source.coords() {
            let back = self.push(&self.forward_of(c)?)?;
            if back != Scalar::coord(c) {
                return Err(Error::NotInverse(format!("{c} ↦ {back}")));
            }
        }
        for c in self.target.coords() {
            let back = self.pull(&self.inverse_of(c)?)?;
            if back != Scalar::coord(c) {
                return Err(Error::NotInverse(format!("{c} ↦ {back}")));
            }
        }
        Ok(())
    }

    /// Pushforward of a vector field: the component along a target
    /// coordinate y is v(y ∘ φ) rewritten in target coordinates.
    pub fn pushforward(&self, v: &VectorField) -> Result<VectorField> {
        if !same_chart(v.chart(), &self.source) {
            return Err(Error::ChartMismatch);
        }
        let coeffs = self
            .target
            .coords()
            .iter()
            .map(|y| {
                let comp = v.apply(&self.inverse_of(y)?);
                self.pull(&comp)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VectorField::from_coeffs(&self.target, coeffs))
    }

    /// The inverse change of coordinates.
    pub fn inverted(&self) -> Substitution {
        Substitution {
            source: self.target.clone(),
            target: self.source.clone(),
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }
}

fn rewrite(f: &Scalar, image: &dyn Fn(&str) -> Result<Scalar>, from: &ChartRef) -> Result<Scalar> {
    for v in f.vars() {
        match v.kind() {
            VarKind::Coord(n) => {
                image(n)?;
            }
            VarKind::Jet { args, .. } => {
                for a in args {
                    if from.contains(a) && image(a)? != Scalar::coord(a) {
                        return Err(Error::NotInverse(format!(
                            "jet `{v}` depends on a transformed coordinate `{a}`"
                        )));
                    }
                }
            }
        }
    }
    f.substitute(&|v: &Var| match v.kind() {
        VarKind::Coord(n) => image(n).ok(),
        VarKind::Jet { .. } => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn coordinate_fields_commute() {
        let c = Chart::new(&["x1", "x2"], vec![]).unwrap();
        let a = VectorField::coordinate(&c, "x1").unwrap();
        let b = VectorField::coordinate(&c, "x2").unwrap();
        assert!(a.bracket(&b).unwrap().is_zero());
    }

    #[test]
    fn bracket_leibniz_rule() {
        let c = Chart::new(&["x", "y"], vec![]).unwrap();
        let v = VectorField::parse(&c, &[("x", "y^2"), ("y", "x")]).unwrap();
        let w = VectorField::parse(&c, &[("x", "1/y"), ("y", "x*y")]).unwrap();
        let f = s("x^2 + y");
        let lhs = v.bracket(&w.scale(&f)).unwrap();
        let rhs = v
            .bracket(&w)
            .unwrap()
            .scale(&f)
            .add(&w.scale(&v.apply(&f)))
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn chart_validation() {
        assert!(Chart::new(&["x", "x"], vec![]).is_err());
        assert!(Chart::new(&["x"], vec![SymbolDecl::new("m", "y")]).is_err());
        let c = Chart::new(&["x6"], vec![SymbolDecl::new("m", "x6")]).unwrap();
        assert!(c.check_scalar(&s("m'(x6)"), false).is_ok());
        assert_eq!(
            c.check_scalar(&s("n(x6)"), false),
            Err(Error::UnknownSymbol("n".into()))
        );
        assert!(c.check_scalar(&s("x7"), false).is_err());
    }

    #[test]
    fn mismatched_charts_are_rejected() {
        let c = Chart::new(&["x"], vec![]).unwrap();
        let d = Chart::new(&["y"], vec![]).unwrap();
        let a = VectorField::coordinate(&c, "x").unwrap();
        let b = VectorField::coordinate(&d, "y").unwrap();
        assert_eq!(a.bracket(&b), Err(Error::ChartMismatch));
    }

    fn legendre() -> Substitution {
        let old = Chart::new(&["y1", "y2", "u"], vec![]).unwrap();
        let new = Chart::new(&["z2", "z3", "w"], vec![]).unwrap();
        Substitution::new(
            &old,
            &new,
            &[("y1", "z3 - w*z2"), ("y2", "w"), ("u", "z2")],
            &[("z2", "u"), ("z3", "y1 + y2*u"), ("w", "y2")],
        )
        .unwrap()
    }

    #[test]
    fn legendre_pushforward_of_fiber_fields() {
        let l = legendre();
        let du = VectorField::coordinate(&l.source, "u").unwrap();
        let pushed = l.pushforward(&du).unwrap();
        assert_eq!(pushed.to_string(), "d/dz2 + w*d/dz3");
        // ∂/∂y2 − u ∂/∂y1 becomes ∂/∂w.
        let t1 = VectorField::parse(&l.source, &[("y2", "1"), ("y1", "-u")]).unwrap();
        assert_eq!(
            l.pushforward(&t1).unwrap(),
            VectorField::coordinate(&l.target, "w").unwrap()
        );
    }

    #[test]
    fn pushforward_roundtrip_and_chain_rule() {
        let l = legendre();
        let v = VectorField::parse(&l.source, &[("y1", "u^2"), ("y2", "y1 - 3"), ("u", "1/y2")])
            .unwrap();
        let there = l.pushforward(&v).unwrap();
        assert_eq!(l.inverted().pushforward(&there).unwrap(), v);
        let f = s("z2*z3 + w^2");
        let lhs = l.pull(&v.apply(&l.push(&f).unwrap())).unwrap();
        assert_eq!(there.apply(&f), lhs);
    }

    #[test]
    fn non_inverse_maps_are_rejected() {
        let old = Chart::new(&["y"], vec![]).unwrap();
        let new = Chart::new(&["z"], vec![]).unwrap();
        let r = Substitution::new(&old, &new, &[("y", "2*z")], &[("z", "y")]);
        assert!(matches!(r, Err(Error::NotInverse(_))));
    }

    #[test]
    fn display_forms() {
        let c = Chart::new(&["x1", "x2", "x3"], vec![]).unwrap();
        let v = VectorField::parse(&c, &[("x1", "-1"), ("x2", "x3 + 1"), ("x3", "-2*x1")]).unwrap();
        assert_eq!(v.to_string(), "-d/dx1 + (x3 + 1)*d/dx2 - 2*x1*d/dx3");
        let w = OneForm::from_pairs(&c, &[("x2", s("1")), ("x1", s("-x3"))]).unwrap();
        assert_eq!(w.to_string(), "-x3*dx1 + dx2");
    }
}
