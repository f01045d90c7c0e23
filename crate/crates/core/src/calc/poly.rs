//! Sparse multivariate polynomials over the rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lang::{ArithOp, Expr};

/// Product of variable powers, variables in name order with positive
/// exponents. The empty monomial is the constant 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.0.iter().find(|(v, _)| v == var).map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<&str, u32> = BTreeMap::new();
        for (v, e) in self.0.iter().chain(&other.0) {
            *map.entry(v).or_default() += e;
        }
        Monomial(map.into_iter().map(|(v, e)| (v.to_string(), e)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(v)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Higher total degree first; ties go to the larger exponent of the
/// alphabetically first variable where the two differ.
fn graded_lex(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    b.degree().cmp(&a.degree()).then_with(|| {
        let vars: BTreeSet<&str> = a.0.iter().chain(&b.0).map(|(v, _)| v.as_str()).collect();
        vars.into_iter()
            .map(|v| b.degree_in(v).cmp(&a.degree_in(v)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    })
}

/// A polynomial in expanded normal form: no zero coefficients, monomials
/// in graded lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(c: impl Into<BigInt>) -> Self {
        Poly::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(name: &str) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(name), BigRational::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// Terms in normal-form order.
    pub fn terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|a, b| graded_lex(a.0, b.0));
        out
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.degree_in(var)).max().unwrap_or(0)
    }

    pub fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::int(1), |acc, _| &acc * self)
    }

    pub fn eval(&self, env: &BTreeMap<String, BigRational>) -> Option<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = env.get(v)?;
                for _ in 0..*e {
                    t *= x;
                }
            }
            total += t;
        }
        Some(total)
    }

    /// An expression whose normal form is this polynomial.
    pub fn to_expr(&self) -> Expr {
        let mut out: Option<Expr> = None;
        for (m, c) in self.terms() {
            let negative = c.is_negative();
            let c = c.abs();
            let mut term: Option<Expr> = (!c.numer().is_one() || m.0.is_empty()).then(|| Expr::Int(c.numer().clone()));
            for (v, e) in &m.0 {
                for _ in 0..*e {
                    term = Some(match term {
                        None => Expr::var(v.clone()),
                        Some(t) => Expr::arith(ArithOp::Mul, t, Expr::var(v.clone())),
                    });
                }
            }
            let mut term = term.unwrap();
            if !c.denom().is_one() {
                term = Expr::arith(ArithOp::Quot, term, Expr::Int(c.denom().clone()));
            }
            out = Some(match (out, negative) {
                (None, false) => term,
                (None, true) => Expr::neg(term),
                (Some(acc), false) => Expr::arith(ArithOp::Add, acc, term),
                (Some(acc), true) => Expr::arith(ArithOp::Sub, acc, term),
            });
        }
        out.unwrap_or_else(|| Expr::int(0))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &-rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().into_iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let c = c.abs();
            if m.0.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Quotient of two polynomials; `den` is never the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

/// Expression construct outside the field operations.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("`{0}` is not a rational-function expression")]
pub struct NonPolynomial(pub String);

impl RatFn {
    fn poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::int(1) }
    }

    /// Convert an integer expression built from `+ - * /`, literals and
    /// variables. Denominators that are not constants are kept unexpanded
    /// in `den`; division by the zero polynomial is rejected.
    pub fn from_expr(e: &Expr) -> Result<RatFn, NonPolynomial> {
        Ok(match e {
            Expr::Int(v) => RatFn::poly(Poly::int(v.clone())),
            Expr::Var(v) => RatFn::poly(Poly::var(v)),
            Expr::Neg(a) => {
                let a = RatFn::from_expr(a)?;
                RatFn { num: -&a.num, den: a.den }
            }
            Expr::Arith(op @ (ArithOp::Add | ArithOp::Sub | ArithOp::Mul | ArithOp::Quot), l, r) => {
                let (a, b) = (RatFn::from_expr(l)?, RatFn::from_expr(r)?);
                match op {
                    ArithOp::Add => RatFn::combine(&a, &b, false),
                    ArithOp::Sub => RatFn::combine(&a, &b, true),
                    ArithOp::Mul => RatFn { num: &a.num * &b.num, den: &a.den * &b.den }.reduced(),
                    _ => {
                        if b.num.is_zero() {
                            return Err(NonPolynomial(e.to_string()));
                        }
                        RatFn { num: &a.num * &b.den, den: &a.den * &b.num }.reduced()
                    }
                }
            }
            _ => return Err(NonPolynomial(e.to_string())),
        })
    }

    fn combine(a: &RatFn, b: &RatFn, subtract: bool) -> RatFn {
        let plus_minus = |x: &Poly, y: &Poly| if subtract { x - y } else { x + y };
        let out = if a.den == b.den {
            RatFn { num: plus_minus(&a.num, &b.num), den: a.den.clone() }
        } else {
            RatFn { num: plus_minus(&(&a.num * &b.den), &(&b.num * &a.den)), den: &a.den * &b.den }
        };
        out.reduced()
    }

    /// Fold a constant denominator into the numerator.
    fn reduced(self) -> RatFn {
        match self.den.as_constant() {
            Some(c) if !c.is_one() => RatFn { num: &self.num * &Poly::constant(c.recip()), den: Poly::int(1) },
            _ => self,
        }
    }

    /// Numerator of `self - other` after clearing denominators; zero iff the
    /// two agree wherever both denominators are nonzero.
    pub fn difference(&self, other: &RatFn) -> Poly {
        &(&self.num * &other.den) - &(&other.num * &self.den)
    }
}
