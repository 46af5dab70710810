//! Exact coefficients: polynomials in β and C, Laurent in p, over ℚ.
//!
//! A [`Scalar`] is stored as a sparse map from [`Monomial`] to a nonzero
//! [`BigRational`]. The map is kept canonical after every operation, so two
//! scalars are equal iff their maps are equal and zero is the empty map.
//!
//! The textual form uses the symbols `b` (β), `C` and `p`:
//!
//! ```text
//! 1 - b        2*b*C        -1/2*b^2*p^-1 + C
//! ```

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Exact rational coefficients.
pub type Rational = BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// β^beta · C^c · p^p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub beta: u32,
    pub c: u32,
    pub p: i32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { beta: 0, c: 0, p: 0 };

    pub fn new(beta: u32, c: u32, p: i32) -> Self {
        Monomial { beta, c, p }
    }

    pub fn degree(&self) -> i64 {
        self.beta as i64 + self.c as i64 + self.p as i64
    }

    pub fn is_one(&self) -> bool {
        *self == Self::ONE
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            beta: self.beta + other.beta,
            c: self.c + other.c,
            p: self.p + other.p,
        }
    }

    fn checked_div(self, other: Monomial) -> Option<Monomial> {
        Some(Monomial {
            beta: self.beta.checked_sub(other.beta)?,
            c: self.c.checked_sub(other.c)?,
            p: self.p - other.p,
        })
    }
}

// Graded order: total degree first, then β before C before p. Compatible
// with multiplication, which exact division relies on.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.beta.cmp(&self.beta))
            .then_with(|| other.c.cmp(&self.c))
            .then_with(|| other.p.cmp(&self.p))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of ℚ[β, C, p, p⁻¹].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, BigRational>,
}

/// Values substituted for some of the symbols; `None` keeps a symbol free.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Specialization {
    pub beta: Option<BigRational>,
    pub c: Option<BigRational>,
    pub p: Option<BigRational>,
}

impl Specialization {
    pub fn is_symbolic(&self) -> bool {
        self.beta.is_none() && self.c.is_none() && self.p.is_none()
    }

    /// Names of the symbols left free, in the order `b`, `C`, `p`.
    pub fn symbolic_names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.beta.is_none() {
            out.push("b");
        }
        if self.c.is_none() {
            out.push("C");
        }
        if self.p.is_none() {
            out.push("p");
        }
        out
    }
}

fn rat_pow(base: &BigRational, exp: i64) -> BigRational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::term(Monomial::ONE, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(v: BigRational) -> Self {
        Scalar::term(Monomial::ONE, v)
    }

    pub fn term(m: Monomial, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        Scalar { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Scalar::term(m, BigRational::one())
    }

    pub fn beta() -> Self {
        Scalar::monomial(Monomial::new(1, 0, 0))
    }

    pub fn c() -> Self {
        Scalar::monomial(Monomial::new(0, 1, 0))
    }

    pub fn p() -> Self {
        Scalar::monomial(Monomial::new(0, 0, 1))
    }

    pub fn p_pow(e: i32) -> Self {
        Scalar::monomial(Monomial::new(0, 0, e))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::ONE)
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    /// Coefficient of a single monomial (zero if absent).
    pub fn coeff(&self, m: Monomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Highest monomial in the graded order, with its coefficient.
    pub fn leading(&self) -> Option<(Monomial, &BigRational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn max_degree(&self) -> i64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Part of `self` homogeneous of degree `beta_deg` in β and `c_deg` in C.
    pub fn graded_part(&self, beta_deg: u32, c_deg: u32) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.beta == beta_deg && m.c == c_deg)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Scalar {
        if k.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `a * b` in place without materializing the product.
    pub fn add_product(&mut self, a: &Scalar, b: &Scalar) {
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(*mb), ca * cb);
            }
        }
    }

    /// Evaluates at rational values of β, C and p.
    pub fn eval(&self, beta: &BigRational, c: &BigRational, p: &BigRational) -> Result<BigRational> {
        if p.is_zero() {
            return Err(Error::ZeroP);
        }
        let mut acc = BigRational::zero();
        for (m, k) in &self.terms {
            acc += k
                * rat_pow(beta, m.beta as i64)
                * rat_pow(c, m.c as i64)
                * rat_pow(p, m.p as i64);
        }
        Ok(acc)
    }

    /// Substitutes the bound symbols of `spec`, leaving the others free.
    pub fn specialize(&self, spec: &Specialization) -> Result<Scalar> {
        if spec.is_symbolic() {
            return Ok(self.clone());
        }
        if spec.p.as_ref().is_some_and(Zero::is_zero) {
            return Err(Error::ZeroP);
        }
        let mut out = Scalar::zero();
        for (m, k) in &self.terms {
            let mut coeff = k.clone();
            let mut mono = *m;
            if let Some(b) = &spec.beta {
                coeff *= rat_pow(b, m.beta as i64);
                mono.beta = 0;
            }
            if let Some(c) = &spec.c {
                coeff *= rat_pow(c, m.c as i64);
                mono.c = 0;
            }
            if let Some(p) = &spec.p {
                coeff *= rat_pow(p, m.p as i64);
                mono.p = 0;
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }

    fn exponent_box(&self) -> (Monomial, Monomial) {
        let mut lo = Monomial::new(u32::MAX, u32::MAX, i32::MAX);
        let mut hi = Monomial::new(0, 0, i32::MIN);
        for m in self.terms.keys() {
            lo.beta = lo.beta.min(m.beta);
            lo.c = lo.c.min(m.c);
            lo.p = lo.p.min(m.p);
            hi.beta = hi.beta.max(m.beta);
            hi.c = hi.c.max(m.c);
            hi.p = hi.p.max(m.p);
        }
        (lo, hi)
    }

    /// Quotient `self / d` when it exists in ℚ[β, C, p, p⁻¹], else `None`.
    pub fn exact_div(&self, d: &Scalar) -> Option<Scalar> {
        let (lead_m, lead_c) = d.leading()?;
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let (lo_a, hi_a) = self.exponent_box();
        let (lo_d, hi_d) = d.exponent_box();
        let in_box = |q: &Monomial| {
            q.beta as i64 + lo_d.beta as i64 >= lo_a.beta as i64
                && q.beta + lo_d.beta <= hi_a.beta
                && q.c as i64 + lo_d.c as i64 >= lo_a.c as i64
                && q.c + lo_d.c <= hi_a.c
                && q.p >= lo_a.p - hi_d.p
                && q.p <= hi_a.p - lo_d.p
        };
        let lead_c = lead_c.clone();
        let mut rem = self.clone();
        let mut quot = Scalar::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.checked_div(lead_m)?;
            if !in_box(&qm) {
                return None;
            }
            let qc = c / &lead_c;
            for (dm, dc) in &d.terms {
                rem.add_term(qm.mul(*dm), -(&qc * dc));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_rational(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        let mut out = Scalar::zero();
        out.add_product(self, rhs);
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

fn fmt_power(f: &mut fmt::Formatter<'_>, sym: &str, e: i64, first: &mut bool) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        f.write_str("*")?;
    }
    *first = false;
    if e == 1 {
        f.write_str(sym)
    } else {
        write!(f, "{sym}^{e}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (idx, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut first = true;
            if m.is_one() || !abs.is_one() {
                write!(f, "{abs}")?;
                first = false;
            }
            fmt_power(f, "b", m.beta as i64, &mut first)?;
            fmt_power(f, "C", m.c as i64, &mut first)?;
            fmt_power(f, "p", m.p as i64, &mut first)?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("validated digits"))
    }

    fn factor(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let num = self.digits()?;
                let mut den = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    den = self.digits()?;
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                }
                Ok(Scalar::from_rational(BigRational::new(num, den)))
            }
            Some(sym @ (b'b' | b'C' | b'p')) => {
                self.pos += 1;
                let mut e: i64 = 1;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let neg = if self.peek() == Some(b'-') {
                        self.pos += 1;
                        true
                    } else {
                        false
                    };
                    self.skip_ws();
                    let d = self.digits()?;
                    let d: i64 = match i64::try_from(d) {
                        Ok(v) if v <= i32::MAX as i64 => v,
                        _ => return self.err("exponent too large"),
                    };
                    e = if neg { -d } else { d };
                }
                let m = match sym {
                    b'b' | b'C' if e < 0 => return self.err("only p may carry a negative exponent"),
                    b'b' => Monomial::new(e as u32, 0, 0),
                    b'C' => Monomial::new(0, e as u32, 0),
                    _ => Monomial::new(0, 0, e as i32),
                };
                Ok(Scalar::monomial(m))
            }
            Some(_) => self.err("expected a number or one of b, C, p"),
            None => self.err("unexpected end of input"),
        }
    }

    fn product(&mut self) -> Result<Scalar> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn sum(&mut self) -> Result<Scalar> {
        let mut neg = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            neg = true;
        }
        let first = self.product()?;
        let mut acc = if neg { -first } else { first };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= &self.product()?;
                }
                None => return Ok(acc),
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        Parser {
            src: s.as_bytes(),
            pos: 0,
        }
        .sum()
    }
}

/// Parses a plain rational such as `3`, `-1/2`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let v: Scalar = s.parse()?;
    if v.terms.keys().any(|m| !m.is_one()) {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("expected a rational number, got '{s}'"),
        });
    }
    Ok(v.coeff(Monomial::ONE))
}
