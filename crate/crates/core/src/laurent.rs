//! Truncated function spaces V, V⊗V, V⊗V⊗V and the functional operators
//! acting on them.
//!
//! V is spanned by x^{-1}, 1, x, ..., x^{n-1}, so the basis vector e_K
//! corresponds to x^{K-1}. Multi-variable elements are Laurent polynomials
//! whose exponents all lie in [-1, n-1].
//!
//! Two-slot operators act on a chosen pair of variable slots. Any other slot
//! is a spectator: its exponent is carried along untouched, as if it were
//! part of the coefficient ring.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_ARITY: usize = 3;

pub type Exps = [i32; MAX_ARITY];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceConfig {
    n: usize,
}

impl SpaceConfig {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("n must be at least 1".into()));
        }
        Ok(SpaceConfig { n })
    }

    /// Highest polynomial degree in the numerator.
    pub fn n(&self) -> usize {
        self.n
    }

    /// dim V = n + 1.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn max_exp(&self) -> i32 {
        self.n as i32 - 1
    }

    fn in_range(&self, e: i32) -> bool {
        (-1..=self.max_exp()).contains(&e)
    }
}

/// An ordered pair of distinct variable slots (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slots {
    pub a: usize,
    pub b: usize,
}

impl Slots {
    pub const XY: Slots = Slots { a: 0, b: 1 };

    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b || a >= MAX_ARITY || b >= MAX_ARITY {
            return Err(Error::Invalid(format!("bad slot pair ({a}, {b})")));
        }
        Ok(Slots { a, b })
    }

    fn check(&self, arity: usize) -> Result<()> {
        if self.a >= arity || self.b >= arity {
            return Err(Error::Shape(format!(
                "slots ({}, {}) on a function of arity {arity}",
                self.a, self.b
            )));
        }
        Ok(())
    }
}

/// Element of V^{⊗arity}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentFn {
    cfg: SpaceConfig,
    arity: usize,
    terms: BTreeMap<Exps, Scalar>,
}

fn accumulate(terms: &mut BTreeMap<Exps, Scalar>, e: Exps, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = terms.entry(e).or_default();
    *slot += c;
    if slot.is_zero() {
        terms.remove(&e);
    }
}

impl LaurentFn {
    pub fn zero(cfg: SpaceConfig, arity: usize) -> Result<Self> {
        if !(1..=MAX_ARITY).contains(&arity) {
            return Err(Error::Invalid(format!("arity {arity} not in 1..=3")));
        }
        Ok(LaurentFn {
            cfg,
            arity,
            terms: BTreeMap::new(),
        })
    }

    /// `coeff · Π x_k^{exps[k]}`.
    pub fn monomial(cfg: SpaceConfig, exps: &[i32], coeff: Scalar) -> Result<Self> {
        let mut f = LaurentFn::zero(cfg, exps.len())?;
        let mut e = [0; MAX_ARITY];
        e[..exps.len()].copy_from_slice(exps);
        f.add_term(e, coeff)?;
        Ok(f)
    }

    pub fn from_terms(
        cfg: SpaceConfig,
        arity: usize,
        terms: impl IntoIterator<Item = (Exps, Scalar)>,
    ) -> Result<Self> {
        let mut f = LaurentFn::zero(cfg, arity)?;
        for (e, c) in terms {
            f.add_term(e, c)?;
        }
        Ok(f)
    }

    fn with_terms(&self, terms: BTreeMap<Exps, Scalar>) -> Result<Self> {
        for e in terms.keys() {
            self.check_exps(e)?;
        }
        Ok(LaurentFn {
            cfg: self.cfg,
            arity: self.arity,
            terms,
        })
    }

    fn check_exps(&self, e: &Exps) -> Result<()> {
        let ok = e[..self.arity].iter().all(|&x| self.cfg.in_range(x))
            && e[self.arity..].iter().all(|&x| x == 0);
        if ok {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                exps: e[..self.arity].to_vec(),
                max: self.cfg.max_exp(),
            })
        }
    }

    pub fn add_term(&mut self, e: Exps, c: Scalar) -> Result<()> {
        self.check_exps(&e)?;
        accumulate(&mut self.terms, e, c);
        Ok(())
    }

    pub fn cfg(&self) -> SpaceConfig {
        self.cfg
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &Scalar)> {
        self.terms.iter().map(move |(e, c)| (&e[..self.arity], c))
    }

    pub fn coeff(&self, exps: &[i32]) -> Scalar {
        let mut e = [0; MAX_ARITY];
        e[..exps.len()].copy_from_slice(exps);
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    fn same_space(&self, other: &LaurentFn) -> Result<()> {
        if self.cfg != other.cfg || self.arity != other.arity {
            return Err(Error::Shape(format!(
                "arity {} (n={}) vs arity {} (n={})",
                self.arity, self.cfg.n, other.arity, other.cfg.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentFn) -> Result<LaurentFn> {
        self.same_space(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            accumulate(&mut out.terms, *e, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentFn) -> Result<LaurentFn> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> LaurentFn {
        let mut out = LaurentFn {
            cfg: self.cfg,
            arity: self.arity,
            terms: BTreeMap::new(),
        };
        for (e, c) in &self.terms {
            accumulate(&mut out.terms, *e, c * k);
        }
        out
    }

    /// Substitutes parameter values in every coefficient.
    pub fn specialize(&self, spec: &crate::scalar::Specialization) -> Result<LaurentFn> {
        let mut out = LaurentFn::zero(self.cfg, self.arity)?;
        for (e, c) in &self.terms {
            accumulate(&mut out.terms, *e, c.specialize(spec)?);
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{}", format_monomial(&e[..self.arity]))?;
        }
        Ok(())
    }
}

/// `x^1*y^0*z^-1` style rendering of an exponent vector.
pub fn format_monomial(exps: &[i32]) -> String {
    const VARS: [&str; MAX_ARITY] = ["x", "y", "z"];
    exps.iter()
        .zip(VARS)
        .map(|(e, v)| format!("{v}^{e}"))
        .collect::<Vec<_>>()
        .join("*")
}

/// Drops every term with a negative exponent in any slot.
pub fn reg(f: &LaurentFn) -> LaurentFn {
    LaurentFn {
        cfg: f.cfg,
        arity: f.arity,
        terms: f
            .terms
            .iter()
            .filter(|(e, _)| e[..f.arity].iter().all(|&x| x >= 0))
            .map(|(e, c)| (*e, c.clone()))
            .collect(),
    }
}

/// Drops terms singular in slot `a` or `b`; spectator slots may stay singular.
pub fn reg_slots(f: &LaurentFn, slots: Slots) -> Result<LaurentFn> {
    slots.check(f.arity)?;
    Ok(LaurentFn {
        cfg: f.cfg,
        arity: f.arity,
        terms: f
            .terms
            .iter()
            .filter(|(e, _)| e[slots.a] >= 0 && e[slots.b] >= 0)
            .map(|(e, c)| (*e, c.clone()))
            .collect(),
    })
}

/// Exchanges the variables in slots `a` and `b`.
pub fn permute(f: &LaurentFn, slots: Slots) -> Result<LaurentFn> {
    slots.check(f.arity)?;
    let terms = f
        .terms
        .iter()
        .map(|(e, c)| {
            let mut e = *e;
            e.swap(slots.a, slots.b);
            (e, c.clone())
        })
        .collect();
    f.with_terms(terms)
}

/// Pushes `(x_a^j x_b^i - x_a^i x_b^j) / (x_a - x_b)` for the exponents
/// found at `e`, shifting the result by `shift` in slots (a, b).
fn push_divided_difference(
    out: &mut BTreeMap<Exps, Scalar>,
    e: &Exps,
    c: &Scalar,
    slots: Slots,
    shift: (i32, i32),
) {
    let (i, j) = (e[slots.a], e[slots.b]);
    let (lo, hi, sign) = match i.cmp(&j) {
        std::cmp::Ordering::Equal => return,
        std::cmp::Ordering::Greater => (j, i, -1),
        std::cmp::Ordering::Less => (i, j, 1),
    };
    let coeff = c * &Scalar::from_int(sign);
    for t in 0..(hi - lo) {
        let mut q = *e;
        q[slots.a] = lo + t + shift.0;
        q[slots.b] = hi - 1 - t + shift.1;
        accumulate(out, q, coeff.clone());
    }
}

fn require_regular(f: &LaurentFn, slots: Slots) -> Result<()> {
    if let Some((e, _)) = f.terms.iter().find(|(e, _)| e[slots.a] < 0 || e[slots.b] < 0) {
        return Err(Error::Invalid(format!(
            "divided difference needs a regular input, found {}",
            format_monomial(&e[..f.arity])
        )));
    }
    Ok(())
}

/// `(f∘swap - f) / (x_a - x_b)`, computed per monomial from the geometric-sum
/// identity so the division is exact term by term.
pub fn divided_difference(f: &LaurentFn, slots: Slots) -> Result<LaurentFn> {
    slots.check(f.arity)?;
    require_regular(f, slots)?;
    let mut out = BTreeMap::new();
    for (e, c) in &f.terms {
        push_divided_difference(&mut out, e, c, slots, (0, 0));
    }
    f.with_terms(out)
}

/// ρF = x_a · (f∘swap - f)/(x_a - x_b) with f = reg F.
pub fn op_rho(f: &LaurentFn, slots: Slots) -> Result<LaurentFn> {
    let f = reg_slots(f, slots)?;
    let mut out = BTreeMap::new();
    for (e, c) in &f.terms {
        push_divided_difference(&mut out, e, c, slots, (1, 0));
    }
    f.with_terms(out)
}

/// 𝔰F = (f(x_a, 0) - f(0, x_a)) / x_b with f = reg F.
pub fn op_s(f: &LaurentFn, slots: Slots) -> Result<LaurentFn> {
    let f = reg_slots(f, slots)?;
    let mut out = BTreeMap::new();
    for (e, c) in &f.terms {
        let (i, j) = (e[slots.a], e[slots.b]);
        if j == 0 {
            let mut q = *e;
            q[slots.b] = -1;
            accumulate(&mut out, q, c.clone());
        }
        if i == 0 {
            let mut q = *e;
            q[slots.a] = j;
            q[slots.b] = -1;
            accumulate(&mut out, q, -c);
        }
    }
    f.with_terms(out)
}

/// r = β ρ + C 𝔰.
pub fn op_r(f: &LaurentFn, slots: Slots) -> Result<LaurentFn> {
    let rho = op_rho(f, slots)?.scale(&Scalar::beta());
    let s = op_s(f, slots)?.scale(&Scalar::c());
    rho.add(&s)
}

/// R̂F = F∘swap + β x_b (f∘swap - f)/(x_a - x_b) + C (f(x_b, 0) - f(0, x_b))/x_a,
/// with f = reg F.
pub fn op_rhat(f: &LaurentFn, slots: Slots) -> Result<LaurentFn> {
    op_rhat_with_sign(f, slots, 1)
}

/// [`op_rhat`] with the sign of the C term set to `c_sign`. Only useful for
/// mutation testing of the cross-construction check.
pub fn op_rhat_with_sign(f: &LaurentFn, slots: Slots, c_sign: i64) -> Result<LaurentFn> {
    let swapped = permute(f, slots)?;
    let reg = reg_slots(f, slots)?;
    let beta = Scalar::beta();
    let c_coeff = &Scalar::c() * &Scalar::from_int(c_sign);
    let mut out = BTreeMap::new();
    for (e, c) in &swapped.terms {
        accumulate(&mut out, *e, c.clone());
    }
    for (e, c) in &reg.terms {
        push_divided_difference(&mut out, e, &(c * &beta), slots, (0, 1));
        let (i, j) = (e[slots.a], e[slots.b]);
        if j == 0 {
            let mut q = *e;
            q[slots.a] = -1;
            q[slots.b] = i;
            accumulate(&mut out, q, c * &c_coeff);
        }
        if i == 0 {
            let mut q = *e;
            q[slots.a] = -1;
            accumulate(&mut out, q, -(c * &c_coeff));
        }
    }
    f.with_terms(out)
}

/// Functional operators with a closed form on the truncated spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionalOp {
    Identity,
    Permute,
    Rho,
    S,
    R,
    Rhat,
}

impl FunctionalOp {
    pub fn apply(self, f: &LaurentFn, slots: Slots) -> Result<LaurentFn> {
        match self {
            FunctionalOp::Identity => {
                slots.check(f.arity)?;
                Ok(f.clone())
            }
            FunctionalOp::Permute => permute(f, slots),
            FunctionalOp::Rho => op_rho(f, slots),
            FunctionalOp::S => op_s(f, slots),
            FunctionalOp::R => op_r(f, slots),
            FunctionalOp::Rhat => op_rhat(f, slots),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionalOp::Identity => "id",
            FunctionalOp::Permute => "P",
            FunctionalOp::Rho => "rho",
            FunctionalOp::S => "s",
            FunctionalOp::R => "r",
            FunctionalOp::Rhat => "Rhat",
        }
    }
}

/// Every exponent vector of the given arity with entries in `lo..=hi`, in
/// lexicographic order.
pub fn exponent_grid(arity: usize, lo: i32, hi: i32) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    out
}
