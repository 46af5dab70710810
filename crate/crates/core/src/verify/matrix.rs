//! Braid, Yang-Baxter and classical Yang-Baxter checks on two-leg matrices.

use crate::error::{Error, Result};
use crate::scalar::Specialization;
use crate::tensor::{Operator, Pair};

use super::report::{discrepancy_witness, ReportBuilder, VerificationReport};

fn two_legs(op: &Operator) -> Result<()> {
    if op.legs() != 2 {
        return Err(Error::Shape(format!("expected a 2-leg operator, got {}", op.legs())));
    }
    Ok(())
}

fn embedded(op: &Operator, spec: &Specialization) -> Result<[Operator; 3]> {
    two_legs(op)?;
    let op = op.specialize(spec)?;
    Ok([op.embed(Pair::P12)?, op.embed(Pair::P13)?, op.embed(Pair::P23)?])
}

fn compare(
    b: &mut ReportBuilder,
    name: &str,
    lhs: &Operator,
    rhs: &Operator,
) -> Result<()> {
    let diffs = lhs.diff_entries(rhs)?;
    let checked = (lhs.size() * lhs.size()) as u64;
    b.item(name, checked, diffs.iter().map(|d| discrepancy_witness(name, d)).collect());
    Ok(())
}

/// R̂₁₂R̂₂₃R̂₁₂ = R̂₂₃R̂₁₂R̂₂₃.
pub fn check_braid(r: &Operator, spec: &Specialization) -> Result<VerificationReport> {
    let [r12, _, r23] = embedded(r, spec)?;
    let mut b = ReportBuilder::new("braid", r.n(), spec);
    let lhs = Operator::chain(&[&r12, &r23, &r12])?;
    let rhs = Operator::chain(&[&r23, &r12, &r23])?;
    compare(&mut b, "R12 R23 R12 = R23 R12 R23", &lhs, &rhs)?;
    Ok(b.finish())
}

/// R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂.
pub fn check_ybe_r(r: &Operator, spec: &Specialization) -> Result<VerificationReport> {
    let [r12, r13, r23] = embedded(r, spec)?;
    let mut b = ReportBuilder::new("ybe", r.n(), spec);
    let lhs = Operator::chain(&[&r12, &r13, &r23])?;
    let rhs = Operator::chain(&[&r23, &r13, &r12])?;
    compare(&mut b, "R12 R13 R23 = R23 R13 R12", &lhs, &rhs)?;
    Ok(b.finish())
}

/// P·σ_p for the p-family satisfies R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂, and σ_p at p = 1
/// is σ. `sigma_family` is the small-block matrix with p left symbolic.
pub fn check_cg_family(
    sigma_family: &Operator,
    sigma: &Operator,
    spec: &Specialization,
) -> Result<VerificationReport> {
    two_legs(sigma_family)?;
    let n = sigma_family.n();
    let r = Operator::flip(n)?.compose(sigma_family)?;
    let [r12, r13, r23] = embedded(&r, spec)?;
    let mut b = ReportBuilder::new("ybe", n, spec);
    let lhs = Operator::chain(&[&r12, &r13, &r23])?;
    let rhs = Operator::chain(&[&r23, &r13, &r12])?;
    compare(&mut b, "R12 R13 R23 = R23 R13 R12, R = P sigma_p", &lhs, &rhs)?;
    let at_one = Specialization {
        p: Some(num_traits::One::one()),
        ..spec.clone()
    };
    let reduced = sigma_family.specialize(&at_one)?;
    compare(&mut b, "sigma_p at p = 1 equals sigma", &reduced, &sigma.specialize(&at_one)?)?;
    Ok(b.finish())
}

/// [r₁₂,r₁₃] + [r₁₂,r₂₃] + [r₁₃,r₂₃] = 0 on the whole of V^{⊗3}.
pub fn check_cybe(r: &Operator, spec: &Specialization) -> Result<VerificationReport> {
    let [r12, r13, r23] = embedded(r, spec)?;
    let mut b = ReportBuilder::new("cybe", r.n(), spec);
    let lhs = r12
        .commutator(&r13)?
        .add(&r12.commutator(&r23)?)?
        .add(&r13.commutator(&r23)?)?;
    let zero = Operator::zero(r.n(), 3)?;
    compare(&mut b, "[r12,r13] + [r12,r23] + [r13,r23] = 0 [matrix]", &lhs, &zero)?;
    Ok(b.finish())
}

/// (σ - 1)(σ + 1 - β) on the small block, reported without judging it.
/// Not part of any acceptance gate.
pub fn hecke_residual(sigma: &Operator, spec: &Specialization) -> Result<Operator> {
    two_legs(sigma)?;
    let s = sigma.specialize(spec)?;
    let n = s.n();
    let mut id_small = Operator::zero(n, 2)?;
    for i in 1..=n {
        for j in 1..=n {
            id_small.set(&[i, j], &[i, j], crate::scalar::Scalar::one())?;
        }
    }
    let one_minus_beta = (crate::scalar::Scalar::one() - crate::scalar::Scalar::beta()).specialize(spec)?;
    let left = s.sub(&id_small)?;
    let right = s.add(&id_small.scale(&one_minus_beta))?;
    left.compose(&right)
}
