//! Operator identities in ρ, 𝔰 and r acting on three variables, checked both
//! on polynomials (functional side) and on V^{⊗3} (matrix side).
//!
//! Identities are written in a small text syntax, e.g.
//! `[s12,rho13] + s12*rho23 = 0`. A product `a*b` applies `b` first.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laurent::{exponent_grid, format_monomial, FunctionalOp, LaurentFn, Slots, SpaceConfig};
use crate::scalar::{Scalar, Specialization};
use crate::tensor::{Operator, Pair};

use super::report::{discrepancy_witness, scalar_witness, ReportBuilder, VerificationReport, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Rho,
    S,
    R,
}

impl Kind {
    fn functional(self) -> FunctionalOp {
        match self {
            Kind::Rho => FunctionalOp::Rho,
            Kind::S => FunctionalOp::S,
            Kind::R => FunctionalOp::R,
        }
    }
}

fn pair_slots(p: Pair) -> Slots {
    let (a, b) = p.legs();
    Slots { a, b }
}

/// `coeff · factors[0] ∘ factors[1] ∘ ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub coeff: i64,
    pub factors: Vec<(Kind, Pair)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub lhs: Vec<Word>,
    pub rhs: Vec<Word>,
}

struct Lexer<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: format!("{msg} in identity '{}'", self.s),
        })
    }

    fn peek(&mut self) -> Option<char> {
        let rest = &self.s[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        trimmed.chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn factor(&mut self) -> Result<(Kind, Pair)> {
        self.peek();
        let rest = &self.s[self.pos..];
        let (kind, len) = if rest.starts_with("rho") {
            (Kind::Rho, 3)
        } else if rest.starts_with('s') {
            (Kind::S, 1)
        } else if rest.starts_with('r') {
            (Kind::R, 1)
        } else {
            return self.err("expected rho, s or r");
        };
        let pair = match rest.get(len..len + 2) {
            Some("12") => Pair::P12,
            Some("13") => Pair::P13,
            Some("23") => Pair::P23,
            _ => {
                self.pos += len;
                return self.err("expected 12, 13 or 23");
            }
        };
        self.pos += len + 2;
        Ok((kind, pair))
    }

    fn word(&mut self) -> Result<Vec<(Kind, Pair)>> {
        let mut out = vec![self.factor()?];
        while self.eat('*') {
            out.push(self.factor()?);
        }
        Ok(out)
    }

    fn term(&mut self, sign: i64, out: &mut Vec<Word>) -> Result<()> {
        if self.eat('[') {
            let a = self.word()?;
            if !self.eat(',') {
                return self.err("expected ','");
            }
            let b = self.word()?;
            if !self.eat(']') {
                return self.err("expected ']'");
            }
            out.push(Word {
                coeff: sign,
                factors: a.iter().chain(&b).copied().collect(),
            });
            out.push(Word {
                coeff: -sign,
                factors: b.iter().chain(&a).copied().collect(),
            });
        } else {
            out.push(Word {
                coeff: sign,
                factors: self.word()?,
            });
        }
        Ok(())
    }

    fn side(&mut self) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        if self.eat('0') {
            return Ok(out);
        }
        let mut sign = if self.eat('-') { -1 } else { 1 };
        loop {
            self.term(sign, &mut out)?;
            sign = if self.eat('+') {
                1
            } else if self.eat('-') {
                -1
            } else {
                return Ok(out);
            };
        }
    }
}

impl Identity {
    pub fn parse(src: &str) -> Result<Identity> {
        let mut lx = Lexer { s: src, pos: 0 };
        let lhs = lx.side()?;
        if !lx.eat('=') {
            return lx.err("expected '='");
        }
        let rhs = lx.side()?;
        if lx.peek().is_some() {
            return lx.err("trailing input");
        }
        Ok(Identity {
            name: src.to_string(),
            lhs,
            rhs,
        })
    }
}

fn parse_all(list: &[&str]) -> Vec<Identity> {
    list.iter()
        .map(|s| Identity::parse(s).expect("built-in identity parses"))
        .collect()
}

pub const CYBE: &str = "[r12,r13] + [r12,r23] + [r13,r23] = 0";
pub const CYBE_RHO: &str = "[rho12,rho13] + [rho12,rho23] + [rho13,rho23] = 0";
pub const QUADRATIC: &str = "r12*r13*r23 = r23*r13*r12";
pub const QUADRATIC_RHO: &str = "rho12*rho13*rho23 = rho23*rho13*rho12";

/// The β·C part of the classical equation, split into vanishing pieces.
pub const CYBE_BETA_C: [&str; 5] = [
    "rho13*s23 = 0",
    "rho23*s13 = 0",
    "rho23*s12 = 0",
    "[s12,rho13] + s12*rho23 = 0",
    "[rho12,s13] + s13*rho23 - s23*rho13 + [rho12,s23] = 0",
];

/// The C² part of the classical equation.
pub const CYBE_C2: [&str; 4] = [
    "s23*s12 = 0",
    "s23*s13 = 0",
    "s13*s23 = 0",
    "[s12,s13] + s12*s23 = 0",
];

pub const QUADRATIC_BETA2_C: [&str; 5] = [
    "s12*rho13*rho23 = 0",
    "rho12*rho13*s23 = 0",
    "rho23*s13*rho12 = 0",
    "rho23*rho13*s12 = 0",
    "rho12*s13*rho23 = s23*rho13*rho12",
];

pub const QUADRATIC_BETA_C2: [&str; 6] = [
    "s12*s13*rho23 = 0",
    "s12*rho13*s23 = 0",
    "rho12*s13*s23 = 0",
    "rho23*s13*s12 = 0",
    "s23*rho13*s12 = 0",
    "s23*s13*rho12 = 0",
];

pub const QUADRATIC_C3: [&str; 2] = ["s12*s13*s23 = 0", "s23*s13*s12 = 0"];

/// Identities behind the classical equation: the ρ part and the two lists
/// that make up the mixed and C² parts.
pub fn component_identities() -> Vec<Identity> {
    let mut v = vec![CYBE_RHO];
    v.extend(CYBE_BETA_C);
    v.extend(CYBE_C2);
    parse_all(&v)
}

/// The quadratic equation itself followed by its four graded parts.
pub fn quadratic_identities() -> Vec<Identity> {
    let mut v = vec![QUADRATIC, QUADRATIC_RHO];
    v.extend(QUADRATIC_BETA2_C);
    v.extend(QUADRATIC_BETA_C2);
    v.extend(QUADRATIC_C3);
    parse_all(&v)
}

fn apply_word(word: &Word, f: &LaurentFn) -> Result<LaurentFn> {
    let mut acc = f.clone();
    for (kind, pair) in word.factors.iter().rev() {
        acc = kind.functional().apply(&acc, pair_slots(*pair))?;
    }
    Ok(acc.scale(&Scalar::from_int(word.coeff)))
}

fn apply_side(side: &[Word], f: &LaurentFn) -> Result<LaurentFn> {
    side.iter().try_fold(LaurentFn::zero(f.cfg(), f.arity())?, |acc, w| {
        acc.add(&apply_word(w, f)?)
    })
}

/// Checks `identity` on every monomial x^a y^b z^c with 0 ≤ a, b, c ≤ max_degree.
pub fn check_functional(
    identity: &Identity,
    max_degree: usize,
    spec: &Specialization,
) -> Result<(u64, Vec<Witness>)> {
    let cfg = SpaceConfig::new(max_degree + 1)?;
    let domain = exponent_grid(3, 0, max_degree as i32);
    let label = format!("{} [functional]", identity.name);
    let per_monomial: Vec<Vec<Witness>> = domain
        .par_iter()
        .map(|exps| {
            let f = LaurentFn::monomial(cfg, exps, Scalar::one())?;
            let lhs = apply_side(&identity.lhs, &f)?.specialize(spec)?;
            let rhs = apply_side(&identity.rhs, &f)?.specialize(spec)?;
            let diff = lhs.sub(&rhs)?;
            Ok(diff
                .terms()
                .map(|(e, _)| {
                    scalar_witness(
                        &label,
                        format!("in={} out={}", format_monomial(exps), format_monomial(e)),
                        &lhs.coeff(e),
                        &rhs.coeff(e),
                    )
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok((domain.len() as u64, per_monomial.into_iter().flatten().collect()))
}

/// ρ, 𝔰 and r as matrices on V, embedded on each pair of three legs.
#[derive(Clone, Debug)]
pub struct MatrixOps {
    n: usize,
    embedded: std::collections::BTreeMap<(Kind, Pair), Operator>,
}

impl MatrixOps {
    pub fn new(n: usize) -> Result<Self> {
        let cfg = SpaceConfig::new(n)?;
        let mut two_leg = Vec::new();
        for kind in [Kind::Rho, Kind::S, Kind::R] {
            let op = Operator::from_functional(cfg, 2, |f| kind.functional().apply(f, Slots::XY))?;
            two_leg.push((kind, op));
        }
        Self::from_two_leg(n, two_leg)
    }

    /// Builds from explicit two-leg matrices (used to inject corruptions).
    pub fn from_two_leg(n: usize, ops: Vec<(Kind, Operator)>) -> Result<Self> {
        let mut embedded = std::collections::BTreeMap::new();
        for (kind, op) in ops {
            for pair in Pair::ALL {
                embedded.insert((kind, pair), op.embed(pair)?);
            }
        }
        Ok(MatrixOps { n, embedded })
    }

    pub fn two_leg(n: usize, kind: Kind) -> Result<Operator> {
        let cfg = SpaceConfig::new(n)?;
        Operator::from_functional(cfg, 2, |f| kind.functional().apply(f, Slots::XY))
    }

    fn side(&self, side: &[Word]) -> Result<Operator> {
        let mut acc = Operator::zero(self.n, 3)?;
        for w in side {
            let ops: Vec<&Operator> = w
                .factors
                .iter()
                .map(|k| {
                    self.embedded
                        .get(k)
                        .ok_or_else(|| Error::Invalid(format!("no matrix for {k:?}")))
                })
                .collect::<Result<_>>()?;
            acc = acc.add(&Operator::chain(&ops)?.scale(&Scalar::from_int(w.coeff)))?;
        }
        Ok(acc)
    }

    /// Checks `identity` as an operator equation on all of V^{⊗3}.
    pub fn check(&self, identity: &Identity, spec: &Specialization) -> Result<(u64, Vec<Witness>)> {
        let lhs = self.side(&identity.lhs)?.specialize(spec)?;
        let rhs = self.side(&identity.rhs)?.specialize(spec)?;
        let label = format!("{} [matrix]", identity.name);
        let diffs = lhs.diff_entries(&rhs)?;
        let size = lhs.size() as u64;
        Ok((size * size, diffs.iter().map(|d| discrepancy_witness(&label, d)).collect()))
    }
}

fn run_both(
    suite: &str,
    identities: &[Identity],
    n: usize,
    matrices: &MatrixOps,
    spec: &Specialization,
) -> Result<VerificationReport> {
    let mut b = ReportBuilder::new(suite, n, spec).symbolic(&symbolic_bc(spec));
    for id in identities {
        let (checked, w) = check_functional(id, n, spec)?;
        b.item(&format!("{} [functional]", id.name), checked, w);
        let (checked, w) = matrices.check(id, spec)?;
        b.item(&format!("{} [matrix]", id.name), checked, w);
    }
    Ok(b.finish())
}

fn symbolic_bc(spec: &Specialization) -> Vec<&'static str> {
    spec.symbolic_names().into_iter().filter(|s| *s != "p").collect()
}

/// Classical Yang-Baxter equation for r = βρ + C𝔰: on polynomials of
/// per-variable degree ≤ n and as a matrix identity on V^{⊗3}.
pub fn check_cybe_suite(n: usize, spec: &Specialization) -> Result<VerificationReport> {
    let matrices = MatrixOps::new(n)?;
    check_cybe_suite_with(n, &matrices, spec)
}

pub fn check_cybe_suite_with(n: usize, matrices: &MatrixOps, spec: &Specialization) -> Result<VerificationReport> {
    run_both("cybe", &parse_all(&[CYBE]), n, matrices, spec)
}

/// The ρ/𝔰 identities whose sum is the classical equation, one item each.
pub fn check_component_identities(n: usize, spec: &Specialization) -> Result<VerificationReport> {
    let matrices = MatrixOps::new(n)?;
    check_component_identities_with(n, &matrices, spec)
}

pub fn check_component_identities_with(
    n: usize,
    matrices: &MatrixOps,
    spec: &Specialization,
) -> Result<VerificationReport> {
    run_both("components", &component_identities(), n, matrices, spec)
}

/// r₁₂r₁₃r₂₃ = r₂₃r₁₃r₁₂ together with each of its graded parts.
pub fn check_quadratic_ybe_components(n: usize, spec: &Specialization) -> Result<VerificationReport> {
    let matrices = MatrixOps::new(n)?;
    check_quadratic_ybe_components_with(n, &matrices, spec)
}

pub fn check_quadratic_ybe_components_with(
    n: usize,
    matrices: &MatrixOps,
    spec: &Specialization,
) -> Result<VerificationReport> {
    run_both("ybfr", &quadratic_identities(), n, matrices, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commutators_and_products() {
        let id = Identity::parse("[s12,rho13] + s12*rho23 = 0").unwrap();
        assert_eq!(id.lhs.len(), 3);
        assert_eq!(id.lhs[0].factors, vec![(Kind::S, Pair::P12), (Kind::Rho, Pair::P13)]);
        assert_eq!(id.lhs[1].coeff, -1);
        assert_eq!(id.lhs[1].factors, vec![(Kind::Rho, Pair::P13), (Kind::S, Pair::P12)]);
        assert!(id.rhs.is_empty());
        let id = Identity::parse("rho12*s13*rho23 = s23*rho13*rho12").unwrap();
        assert_eq!(id.rhs.len(), 1);
        assert!(Identity::parse("rho14 = 0").is_err());
        assert!(Identity::parse("rho12 rho13 = 0").is_err());
        assert!(Identity::parse("[s12 s13] = 0").is_err());
    }

    #[test]
    fn s23_s12_kills_xyz() {
        let cfg = SpaceConfig::new(2).unwrap();
        let f = LaurentFn::monomial(cfg, &[1, 1, 1], Scalar::one()).unwrap();
        let w = &Identity::parse("s23*s12 = 0").unwrap().lhs[0];
        assert!(apply_word(w, &f).unwrap().is_zero());
        let w = &Identity::parse("s12*s13*s23 = 0").unwrap().lhs[0];
        assert!(apply_word(w, &f).unwrap().is_zero());
    }

    #[test]
    fn listed_identities_hold_small() {
        let spec = Specialization::default();
        for id in component_identities().iter().chain(&quadratic_identities()) {
            let (_, w) = check_functional(id, 3, &spec).unwrap();
            assert!(w.is_empty(), "{}: {:?}", id.name, w.first());
        }
    }

    #[test]
    fn a_false_identity_is_caught() {
        let id = Identity::parse("s12*rho13 = 0").unwrap();
        let (_, w) = check_functional(&id, 2, &Specialization::default()).unwrap();
        assert!(!w.is_empty());
    }
}
