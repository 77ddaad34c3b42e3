//! Sparse multivariate polynomials over ℚ.
//!
//! Variables are either chart coordinates or formal jets `m^(k)(x6)` of
//! declared function symbols. Monomials are ordered graded-lexicographically
//! over a fixed global variable order, so the leading term of a polynomial is
//! well defined and independent of construction history.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A polynomial variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Coord(String),
    /// Formal derivative of `symbol(args…)`; `orders[i]` counts derivatives
    /// taken with respect to `args[i]`.
    Jet {
        symbol: String,
        args: Vec<String>,
        orders: Vec<u32>,
    },
}

#[derive(Clone, Debug)]
pub struct Var(Arc<VarKind>);

impl Var {
    pub fn coord(name: &str) -> Var {
        Var(Arc::new(VarKind::Coord(name.to_string())))
    }

    pub fn jet(symbol: &str, args: &[String], orders: &[u32]) -> Var {
        assert_eq!(args.len(), orders.len(), "jet order arity mismatch");
        Var(Arc::new(VarKind::Jet {
            symbol: symbol.to_string(),
            args: args.to_vec(),
            orders: orders.to_vec(),
        }))
    }

    pub fn kind(&self) -> &VarKind {
        &self.0
    }

    pub fn coord_name(&self) -> Option<&str> {
        match &*self.0 {
            VarKind::Coord(n) => Some(n),
            VarKind::Jet { .. } => None,
        }
    }

    /// ∂/∂c of this variable.
    pub fn derivative(&self, c: &str) -> VarDerivative {
        match &*self.0 {
            VarKind::Coord(n) if n == c => VarDerivative::One,
            VarKind::Coord(_) => VarDerivative::Zero,
            VarKind::Jet {
                symbol,
                args,
                orders,
            } => match args.iter().position(|a| a == c) {
                Some(i) => {
                    let mut o = orders.clone();
                    o[i] += 1;
                    VarDerivative::Var(Var::jet(symbol, args, &o))
                }
                None => VarDerivative::Zero,
            },
        }
    }

    pub fn total_order(&self) -> u32 {
        match &*self.0 {
            VarKind::Coord(_) => 0,
            VarKind::Jet { orders, .. } => orders.iter().sum(),
        }
    }
}

pub enum VarDerivative {
    Zero,
    One,
    Var(Var),
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Var {}

impl std::hash::Hash for Var {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state);
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        match (&*self.0, &*other.0) {
            (VarKind::Coord(a), VarKind::Coord(b)) => natural_cmp(a, b),
            (VarKind::Coord(_), VarKind::Jet { .. }) => Ordering::Less,
            (VarKind::Jet { .. }, VarKind::Coord(_)) => Ordering::Greater,
            (
                VarKind::Jet {
                    symbol: s1,
                    args: a1,
                    orders: o1,
                },
                VarKind::Jet {
                    symbol: s2,
                    args: a2,
                    orders: o2,
                },
            ) => natural_cmp(s1, s2)
                .then_with(|| o1.iter().sum::<u32>().cmp(&o2.iter().sum::<u32>()))
                .then_with(|| o2.cmp(o1))
                .then_with(|| {
                    for (x, y) in a1.iter().zip(a2.iter()) {
                        let c = natural_cmp(x, y);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    a1.len().cmp(&a2.len())
                }),
        }
    }
}

/// Compares identifiers so that embedded digit runs compare numerically:
/// `x2 < x10`, `z31 < z32`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let ca = chunks(a);
    let cb = chunks(b);
    for (x, y) in ca.iter().zip(cb.iter()) {
        let o = match (x, y) {
            (Chunk::Num(p), Chunk::Num(q)) => {
                let p = p.trim_start_matches('0');
                let q = q.trim_start_matches('0');
                p.len().cmp(&q.len()).then_with(|| p.cmp(q))
            }
            (Chunk::Text(p), Chunk::Text(q)) => p.cmp(q),
            (Chunk::Num(_), Chunk::Text(_)) => Ordering::Less,
            (Chunk::Text(_), Chunk::Num(_)) => Ordering::Greater,
        };
        if o != Ordering::Equal {
            return o;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

enum Chunk<'a> {
    Num(&'a str),
    Text(&'a str),
}

fn chunks(s: &str) -> Vec<Chunk<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    while start < bytes.len() {
        let digit = bytes[start].is_ascii_digit();
        let mut end = start + 1;
        while end < bytes.len() && bytes[end].is_ascii_digit() == digit {
            end += 1;
        }
        let piece = &s[start..end];
        out.push(if digit {
            Chunk::Num(piece)
        } else {
            Chunk::Text(piece)
        });
        start = end;
    }
    out
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            VarKind::Coord(n) => write!(f, "{n}"),
            VarKind::Jet {
                symbol,
                args,
                orders,
            } => {
                if args.len() == 1 {
                    write!(f, "{symbol}")?;
                    for _ in 0..orders[0] {
                        write!(f, "'")?;
                    }
                } else {
                    write!(f, "{symbol}")?;
                    if orders.iter().any(|&o| o > 0) {
                        let mut ds = Vec::new();
                        for (a, &o) in args.iter().zip(orders) {
                            for _ in 0..o {
                                ds.push(a.as_str());
                            }
                        }
                        write!(f, "[{}]", ds.join(","))?;
                    }
                }
                write!(f, "({})", args.join(","))
            }
        }
    }
}

/// A power product, sorted by variable with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                if f > *e {
                    return None;
                }
                if f < *e {
                    out.push((v.clone(), e - f));
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *v {
                return None;
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Removes the variable `v`, returning its exponent and the rest.
    pub fn split_off(&self, v: &Var) -> (u32, Monomial) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|(w, f)| {
                if w == v {
                    e = *f;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (e, Monomial(rest))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the monomial with the
    /// larger exponent on the smallest differing variable is larger.
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((v, e)), Some((w, f))) => match v.cmp(w) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(f);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with rational coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Poly {
        Poly::term(Q::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Q, m: Monomial) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Sorted, deduplicated list of variables occurring in the polynomial.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), d * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, c: &Q, mono: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.mul(mono), d * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Partial derivative with respect to a chart coordinate, applying the
    /// jet rule ∂_c m^(k)(c) = m^(k+1)(c).
    pub fn derivative(&self, c: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, coef) in &self.terms {
            for (idx, (v, e)) in m.0.iter().enumerate() {
                let dv = match v.derivative(c) {
                    VarDerivative::Zero => continue,
                    VarDerivative::One => Monomial::one(),
                    VarDerivative::Var(w) => Monomial::var(w, 1),
                };
                let mut rest = m.0.clone();
                if *e == 1 {
                    rest.remove(idx);
                } else {
                    rest[idx].1 -= 1;
                }
                let mono = Monomial(rest).mul(&dv);
                out.add_term(mono, coef * Q::from_integer(BigInt::from(*e)));
            }
        }
        out
    }

    /// Coefficients as a univariate polynomial in `v`; index = degree.
    pub fn coefficients_in(&self, v: &Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coefficients(v: &Var, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let mono = Monomial::var(v.clone(), e as u32);
            for (m, d) in &c.terms {
                out.add_term(m.mul(&mono), d.clone());
            }
        }
        out
    }

    /// Substitutes polynomials for variables; unlisted variables are kept.
    pub fn substitute(&self, map: &dyn Fn(&Var) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            let mut kept = Monomial::one();
            for (v, e) in &m.0 {
                match map(v) {
                    Some(p) => acc = acc.mul(&p.pow(*e)),
                    None => kept = kept.mul(&Monomial::var(v.clone(), *e)),
                }
            }
            out = out.add(&acc.mul_term(&Q::one(), &kept));
        }
        out
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(Q::one() / c)));
        }
        let (lm, lc) = {
            let (m, c) = d.leading().unwrap();
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = rem.sub(&d.mul_term(&qc, &qm));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = Q::one() / c;
                self.scale(&inv)
            }
        }
    }

    pub fn leading_coefficient(&self) -> Q {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn evaluate(&self, val: &dyn Fn(&Var) -> Option<Q>) -> Result<Q, Var> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = val(v).ok_or_else(|| v.clone())?;
                t *= num_traits::pow::pow(x, *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Number of terms plus total size of coefficients; used to prefer
    /// simple pivots during elimination.
    pub fn complexity(&self) -> usize {
        self.terms
            .iter()
            .map(|(m, c)| {
                1 + m.0.len() + (c.numer().bits() + c.denom().bits()) as usize / 32
            })
            .sum()
    }
}

/// Pseudo-remainder of `a` by `b` with respect to `v`.
fn pseudo_remainder(a: &Poly, b: &Poly, v: &Var) -> Poly {
    let n = b.degree_in(v);
    let bc = b.coefficients_in(v);
    let lb = bc[n as usize].clone();
    let mut r = a.clone();
    loop {
        if r.is_zero() {
            return r;
        }
        let d = r.degree_in(v);
        if d < n {
            return r;
        }
        let lr = r.coefficients_in(v)[d as usize].clone();
        let shift = Monomial::var(v.clone(), d - n);
        r = r
            .mul(&lb)
            .sub(&b.mul(&lr).mul_term(&Q::one(), &shift));
    }
}

/// Content of `p` viewed as a polynomial in `v`, as a monic polynomial in
/// the remaining variables.
fn content_in(p: &Poly, v: &Var) -> Poly {
    let mut g = Poly::zero();
    for c in p.coefficients_in(v).into_iter().rev() {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one();
        }
    }
    g
}

fn primitive_part_in(p: &Poly, v: &Var) -> Poly {
    let c = content_in(p, v);
    if c.is_one() {
        p.clone()
    } else {
        p.div_exact(&c).expect("content divides polynomial")
    }
}

/// Greatest common divisor, normalized to leading coefficient 1 (zero if
/// both inputs are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.monic();
    }
    let va = a.vars();
    let vb = b.vars();
    // A variable missing from one side can only contribute through content.
    if let Some(v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd(&content_in(a, v), b);
    }
    if let Some(v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd(a, &content_in(b, v));
    }
    // Main variable: the one of least degree keeps the remainder sequence short.
    let v = va
        .iter()
        .min_by_key(|v| a.degree_in(v).max(b.degree_in(v)))
        .unwrap()
        .clone();
    let ca = content_in(a, &v);
    let cb = content_in(b, &v);
    let c = gcd(&ca, &cb);
    let mut p = if ca.is_one() { a.clone() } else { a.div_exact(&ca).unwrap() };
    let mut r = if cb.is_one() { b.clone() } else { b.div_exact(&cb).unwrap() };
    if p.degree_in(&v) < r.degree_in(&v) {
        std::mem::swap(&mut p, &mut r);
    }
    loop {
        let rem = pseudo_remainder(&p, &r, &v);
        if rem.is_zero() {
            break;
        }
        if rem.degree_in(&v) == 0 {
            r = Poly::one();
            break;
        }
        p = r;
        r = primitive_part_in(&rem, &v);
    }
    let g = if r.is_one() {
        Poly::one()
    } else {
        primitive_part_in(&r, &v)
    };
    g.mul(&c).monic()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_q(&abs))?;
            }
        }
        Ok(())
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}
