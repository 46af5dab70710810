//! Closed-form Cremmer-Gervais matrices and structure constants.
//!
//! Index conventions: capital indices run over 0..=n, small ones over 1..=n.
//! Two-leg operators are stored with out = (I, J) and in = (K, L), so that
//! `R̂(e_K ⊗ e_L) = Σ e_I ⊗ e_J R̂^{IJ}_{KL}`. The small-index matrices
//! (σ and its p-family) use the same storage with row/column 0 left empty.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Specialization};
use crate::tensor::Operator;

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Invalid("n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Cremmer-Gervais braid matrix, optionally carrying the p weights of the
/// non-unitary family.
fn cg_matrix(n: usize, with_p: bool) -> Result<Operator> {
    check_n(n)?;
    let mut op = Operator::zero(n, 2)?;
    let beta = Scalar::beta();
    let p_pow = |e: i64| {
        if with_p {
            Scalar::p_pow(e as i32)
        } else {
            Scalar::one()
        }
    };
    for k in 1..=n {
        for l in 1..=n {
            // δ^i_l δ^j_k
            let mut col: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            *col.entry((l, k)).or_default() += p_pow(k as i64 - l as i64);
            // (Σ_{k≤s<l} - Σ_{l≤s<k}) δ^i_s δ^j_{k+l-s}
            let sign = Scalar::from_int(if k < l { 1 } else { -1 });
            for s in k.min(l)..k.max(l) {
                let term = &(&beta * &sign) * &p_pow(k as i64 - s as i64);
                *col.entry((s, k + l - s)).or_default() += term;
            }
            for ((i, j), v) in col {
                op.set(&[i, j], &[k, l], v)?;
            }
        }
    }
    Ok(op)
}

/// The braid matrix σ^{ij}_{kl} with β in place of 1 - q^{-2}.
pub fn sigma_cg(n: usize) -> Result<Operator> {
    cg_matrix(n, false)
}

/// The non-unitary Cremmer-Gervais family with p symbolic. Setting p = 1
/// recovers [`sigma_cg`].
pub fn sigma_cg_family(n: usize) -> Result<Operator> {
    cg_matrix(n, true)
}

/// C^k_{ij}, stored as (k; i, j) with all indices in 1..=n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureTensor {
    n: usize,
    entries: BTreeMap<(usize, usize, usize), Scalar>,
}

#[derive(Serialize)]
struct JsonConstant {
    upper: usize,
    lower: [usize; 2],
    coeff: String,
}

#[derive(Serialize)]
struct JsonConstants {
    n: usize,
    entries: Vec<JsonConstant>,
}

impl StructureTensor {
    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(StructureTensor {
            n,
            entries: BTreeMap::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, k: usize, i: usize, j: usize) -> Result<()> {
        let r = 1..=self.n;
        if r.contains(&k) && r.contains(&i) && r.contains(&j) {
            Ok(())
        } else {
            Err(Error::Invalid(format!(
                "structure constant index ({k}; {i}, {j}) outside 1..={}",
                self.n
            )))
        }
    }

    /// C^k_{ij}.
    pub fn get(&self, k: usize, i: usize, j: usize) -> Scalar {
        self.entries.get(&(k, i, j)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, k: usize, i: usize, j: usize, v: Scalar) -> Result<()> {
        self.check(k, i, j)?;
        if v.is_zero() {
            self.entries.remove(&(k, i, j));
        } else {
            self.entries.insert((k, i, j), v);
        }
        Ok(())
    }

    /// Nonzero entries as ((k, i, j), C^k_{ij}).
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), &Scalar)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn specialize(&self, spec: &Specialization) -> Result<Self> {
        let mut out = StructureTensor::zero(self.n)?;
        for (k, v) in &self.entries {
            out.set(k.0, k.1, k.2, v.specialize(spec)?)?;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = JsonConstants {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|((k, i, j), v)| JsonConstant {
                    upper: *k,
                    lower: [*i, *j],
                    coeff: v.to_string(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["upper", "lower", "coeff"])?;
        for ((k, i, j), v) in &self.entries {
            w.write_record([k.to_string(), format!("{i} {j}"), v.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|((k, i, j), v)| format!("C^{k}_({i},{j}) = {v}\n"))
            .collect()
    }
}

/// C^j_{kl} = C (δ^1_l δ^j_k - δ^1_k δ^j_l).
pub fn structure_constants(n: usize) -> Result<StructureTensor> {
    let mut t = StructureTensor::zero(n)?;
    let c = Scalar::c();
    for j in 1..=n {
        for k in 1..=n {
            for l in 1..=n {
                let mut v = Scalar::zero();
                if l == 1 && j == k {
                    v += &c;
                }
                if k == 1 && j == l {
                    v -= &c;
                }
                t.set(j, k, l, v)?;
            }
        }
    }
    Ok(t)
}

/// Assembles the extended braid matrix from a small block σ and constants:
/// R̂^{ij}_{kl} = σ^{ij}_{kl}, R̂^{0j}_{kl} = C^j_{kl}, R̂^{0A}_{A0} = R̂^{A0}_{0A} = 1.
pub fn assemble_extended(sigma: &Operator, ct: &StructureTensor) -> Result<Operator> {
    let n = sigma.n();
    if sigma.legs() != 2 || ct.n() != n {
        return Err(Error::Shape(format!(
            "sigma (n={n}, legs={}) and constants (n={})",
            sigma.legs(),
            ct.n()
        )));
    }
    let mut op = Operator::zero(n, 2)?;
    for (out, inp, v) in sigma.entries() {
        if out.contains(&0) || inp.contains(&0) {
            return Err(Error::Invalid("sigma has an entry with index 0".into()));
        }
        op.set(&out, &inp, v.clone())?;
    }
    for ((j, k, l), v) in ct.entries() {
        op.set(&[0, j], &[k, l], v.clone())?;
    }
    for a in 0..=n {
        op.set(&[0, a], &[a, 0], Scalar::one())?;
        op.set(&[a, 0], &[0, a], Scalar::one())?;
    }
    Ok(op)
}

/// The (n+1)²-dimensional extended R̂ built from σ_CG and the CG constants.
pub fn extended_rhat(n: usize) -> Result<Operator> {
    assemble_extended(&sigma_cg(n)?, &structure_constants(n)?)
}

/// Splits an extended matrix back into (σ, C) blocks. Entries outside the
/// allowed block pattern are reported as an error.
pub fn split_extended(rhat: &Operator) -> Result<(Operator, StructureTensor)> {
    let n = rhat.n();
    let mut sigma = Operator::zero(n, 2)?;
    let mut ct = StructureTensor::zero(n)?;
    for (out, inp, v) in rhat.entries() {
        match (out[0], out[1], inp[0], inp[1]) {
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => sigma.set(&out, &inp, v.clone())?,
            (0, j, k, l) if j > 0 && k > 0 && l > 0 => ct.set(j, k, l, v.clone())?,
            (0, a, b, 0) | (a, 0, 0, b) if a == b => {}
            _ => {
                return Err(Error::Invalid(format!(
                    "entry ({},{};{},{}) outside the extended block pattern",
                    out[0], out[1], inp[0], inp[1]
                )))
            }
        }
    }
    Ok((sigma, ct))
}
