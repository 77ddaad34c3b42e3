//! Exact rational functions over ℚ in chart coordinates and formal jets.
//!
//! A [`Scalar`] is kept in canonical form: numerator and denominator are
//! coprime and the denominator has leading coefficient 1, so structural
//! equality is equality of rational functions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{fmt_q, gcd, q, Monomial, Poly, Var, VarKind, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar::from_q(Q::one())
    }

    pub fn from_q(c: Q) -> Scalar {
        Scalar {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::from_q(q(n))
    }

    pub fn coord(name: &str) -> Scalar {
        Scalar::from_poly(Poly::var(Var::coord(name)))
    }

    /// The jet `symbol^(order)(arg)`.
    pub fn jet(symbol: &str, arg: &str, order: u32) -> Scalar {
        Scalar::from_poly(Poly::var(Var::jet(symbol, &[arg.to_string()], &[order])))
    }

    pub fn var(v: Var) -> Scalar {
        Scalar::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Scalar {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    /// Builds `num/den` in canonical form.
    pub fn fraction(num: Poly, den: Poly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Scalar {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.as_constant() {
            if c.is_one() {
                return Scalar { num, den };
            }
            return Scalar {
                num: num.scale(&(Q::one() / c)),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        let lc = den.leading_coefficient();
        let inv = Q::one() / lc;
        Scalar {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return Scalar::from_poly(self.num.add(&o.num));
            }
            return Scalar::normalize(self.num.add(&o.num), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let (d1, d2) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (
                self.den.div_exact(&g).unwrap(),
                o.den.div_exact(&g).unwrap(),
            )
        };
        let num = self.num.mul(&d2).add(&o.num.mul(&d1));
        let den = d1.mul(&o.den);
        Scalar::normalize(num, den)
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from_poly(self.num.mul(&o.num));
        }
        // Cross-cancel before multiplying to keep the gcd inputs small.
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = o.den.div_exact(&g1).unwrap();
        let n2 = o.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        let num = n1.mul(&n2);
        let den = d1.mul(&d2);
        let lc = den.leading_coefficient();
        let inv = Q::one() / lc;
        Scalar {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn scale(&self, c: &Q) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let e = e as u32;
        Ok(Scalar {
            num: self.num.pow(e),
            den: self.den.pow(e),
        })
    }

    /// ∂/∂c by the quotient rule; jets follow ∂_c m^(k)(c) = m^(k+1)(c).
    pub fn derivative(&self, c: &str) -> Scalar {
        let dn = self.num.derivative(c);
        if self.den.is_one() {
            return Scalar::from_poly(dn);
        }
        let dd = self.den.derivative(c);
        if dd.is_zero() {
            return Scalar::normalize(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Scalar::normalize(num, self.den.mul(&self.den))
    }

    /// Variables occurring in numerator or denominator.
    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    /// Coordinates the Scalar depends on, including jet arguments.
    pub fn coordinate_dependencies(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for v in self.vars() {
            match v.kind() {
                VarKind::Coord(n) => out.push(n.clone()),
                VarKind::Jet { args, .. } => out.extend(args.iter().cloned()),
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn depends_on_symbol(&self, symbol: &str) -> bool {
        self.vars().iter().any(|v| match v.kind() {
            VarKind::Jet { symbol: s, .. } => s == symbol,
            _ => false,
        })
    }

    /// Exact value at a rational point; `jet_values` is keyed by the jet's
    /// literal form (e.g. `m'(x6)`).
    pub fn evaluate(
        &self,
        point: &BTreeMap<String, Q>,
        jet_values: &BTreeMap<String, Q>,
    ) -> Result<Q> {
        let val = |v: &Var| -> Option<Q> {
            match v.kind() {
                VarKind::Coord(n) => point.get(n).cloned(),
                VarKind::Jet { .. } => jet_values.get(&v.to_string()).cloned(),
            }
        };
        let n = self
            .num
            .evaluate(&val)
            .map_err(|v| Error::IncompleteValuation(v.to_string()))?;
        let d = self
            .den
            .evaluate(&val)
            .map_err(|v| Error::IncompleteValuation(v.to_string()))?;
        if d.is_zero() {
            return Err(Error::PoleAtPoint(self.to_string()));
        }
        Ok(n / d)
    }

    /// Replaces variables by Scalars. The replacement is applied to every
    /// occurrence in numerator and denominator.
    pub fn substitute(&self, map: &dyn Fn(&Var) -> Option<Scalar>) -> Result<Scalar> {
        let n = substitute_poly(&self.num, map);
        if self.den.is_one() {
            return Ok(n);
        }
        let d = substitute_poly(&self.den, map);
        n.div(&d)
    }

    /// Size measure used to pick pivots during elimination.
    pub fn complexity(&self) -> usize {
        self.num.complexity() + if self.den.is_one() { 0 } else { self.den.complexity() }
    }

    pub fn parse(s: &str) -> Result<Scalar> {
        crate::literal::parse_scalar(s)
    }
}

fn substitute_poly(p: &Poly, map: &dyn Fn(&Var) -> Option<Scalar>) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in p.terms() {
        let mut t = Scalar::from_q(c.clone());
        let mut kept = Monomial::one();
        for (v, e) in m.factors() {
            match map(v) {
                Some(s) => t = t.mul(&s.pow(*e as i64).expect("nonnegative power")),
                None => kept = kept.mul(&Monomial::var(v.clone(), *e)),
            }
        }
        acc = acc.add(&t.mul(&Scalar::from_poly(Poly::term(Q::one(), kept))));
    }
    acc
}

fn needs_parens_as_numerator(p: &Poly) -> bool {
    p.num_terms() > 1
}

fn needs_parens_as_denominator(p: &Poly) -> bool {
    if p.num_terms() > 1 {
        return true;
    }
    match p.leading() {
        Some((m, c)) => !(c.is_one() && m.factors().len() == 1),
        None => false,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if needs_parens_as_numerator(&self.num) {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens_as_denominator(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::add(self, o)
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::sub(self, o)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// Renders a rational constant using the literal grammar.
pub fn format_q(c: &Q) -> String {
    fmt_q(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        assert!(s("x1/x2").mul(&s("x2/x1")).is_one());
    }

    #[test]
    fn additive_identity_with_jet() {
        assert_eq!(s("z3*m'(x6)").add(&Scalar::zero()), s("z3*m'(x6)"));
    }

    #[test]
    fn gcd_cancellation_in_quotient() {
        assert_eq!(s("(x1^2 - x2^2)/(x1 - x2)"), s("x1 + x2"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(s("x1").div(&Scalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn jet_derivatives() {
        assert_eq!(s("z3*m(x6)").derivative("x6"), s("z3*m'(x6)"));
        assert_eq!(s("z3*m'(x6)").derivative("z3"), s("m'(x6)"));
        assert!(s("m''(x6)").derivative("x5").is_zero());
    }

    #[test]
    fn quotient_rule() {
        assert_eq!(s("x1^2/x2").derivative("x1"), s("2*x1/x2"));
        assert_eq!(s("x1/x2").derivative("x2"), s("-x1/x2^2"));
    }

    #[test]
    fn evaluation() {
        let pt: BTreeMap<String, Q> = [("x1".into(), q(1)), ("x2".into(), q(2))].into();
        assert_eq!(s("x1 + x2").evaluate(&pt, &BTreeMap::new()).unwrap(), q(3));
        let pole: BTreeMap<String, Q> = [("x1".into(), q(0))].into();
        assert!(matches!(
            s("1/x1").evaluate(&pole, &BTreeMap::new()),
            Err(Error::PoleAtPoint(_))
        ));
        let pt: BTreeMap<String, Q> = [("z3".into(), q(2)), ("x6".into(), q(5))].into();
        let jets: BTreeMap<String, Q> = [("m'(x6)".into(), q(7))].into();
        assert_eq!(s("z3*m'(x6)").evaluate(&pt, &jets).unwrap(), q(14));
        assert!(matches!(
            s("x9").evaluate(&pt, &jets),
            Err(Error::IncompleteValuation(_))
        ));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let a = s("x1/(2*x2 + 4)");
        assert_eq!(a.to_string(), "1/2*x1/(x2 + 2)");
        assert_eq!(s(&a.to_string()), a);
    }

    #[test]
    fn emission_roundtrips() {
        for t in [
            "-2/3*y2*m'(x6)",
            "(x1 + 1)/(x1*x2)",
            "-x1/x2^2",
            "m''(x6)^2 - 3",
            "a[z2,x6](x6,z2)",
        ] {
            let v = s(t);
            assert_eq!(s(&v.to_string()), v, "{t}");
        }
    }
}
