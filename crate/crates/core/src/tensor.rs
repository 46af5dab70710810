//! Sparse linear operators on V⊗V and V⊗V⊗V.
//!
//! Entries are keyed by flattened (out, in) multi-indices. Each index runs
//! over 0..=n, so flattening in base n+1 preserves lexicographic order of the
//! multi-indices.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{exponent_grid, LaurentFn, SpaceConfig, MAX_ARITY};
use crate::scalar::{Scalar, Specialization};

/// Which two of three legs a two-leg operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    P12,
    P13,
    P23,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P13, Pair::P23];

    /// 0-based legs (first, second).
    pub fn legs(self) -> (usize, usize) {
        match self {
            Pair::P12 => (0, 1),
            Pair::P13 => (0, 2),
            Pair::P23 => (1, 2),
        }
    }

    fn spectator(self) -> usize {
        3 - self.legs().0 - self.legs().1
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::P12 => "12",
            Pair::P13 => "13",
            Pair::P23 => "23",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operator {
    n: usize,
    legs: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

/// A differing entry between two operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub out: Vec<usize>,
    pub inp: Vec<usize>,
    pub left: Scalar,
    pub right: Scalar,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({};{}): {} vs {}",
            join(&self.out),
            join(&self.inp),
            self.left,
            self.right
        )
    }
}

fn join(idx: &[usize]) -> String {
    idx.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Outcome of [`Operator::op_equal`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equality {
    pub equal: bool,
    pub first: Option<Discrepancy>,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    out: Vec<usize>,
    #[serde(rename = "in")]
    inp: Vec<usize>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct JsonOperator {
    n: usize,
    legs: usize,
    entries: Vec<JsonEntry>,
}

impl Operator {
    pub fn zero(n: usize, legs: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("n must be at least 1".into()));
        }
        if !(1..=MAX_ARITY).contains(&legs) {
            return Err(Error::Invalid(format!("{legs} legs not supported")));
        }
        Ok(Operator {
            n,
            legs,
            entries: BTreeMap::new(),
        })
    }

    pub fn identity(n: usize, legs: usize) -> Result<Self> {
        let mut op = Operator::zero(n, legs)?;
        for i in 0..op.size() {
            op.entries.insert((i, i), Scalar::one());
        }
        Ok(op)
    }

    /// The flip P(e_a ⊗ e_b) = e_b ⊗ e_a.
    pub fn flip(n: usize) -> Result<Self> {
        let mut op = Operator::zero(n, 2)?;
        for a in 0..=n {
            for b in 0..=n {
                op.set(&[b, a], &[a, b], Scalar::one())?;
            }
        }
        Ok(op)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    /// Dimension of the space acted on, (n+1)^legs.
    pub fn size(&self) -> usize {
        (self.n + 1).pow(self.legs as u32)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn flatten(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.legs {
            return Err(Error::Shape(format!(
                "index of length {} for a {}-leg operator",
                idx.len(),
                self.legs
            )));
        }
        let d = self.n + 1;
        idx.iter().try_fold(0, |acc, &i| {
            if i > self.n {
                Err(Error::Invalid(format!("index {i} exceeds n = {}", self.n)))
            } else {
                Ok(acc * d + i)
            }
        })
    }

    fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let d = self.n + 1;
        let mut out = vec![0; self.legs];
        for slot in out.iter_mut().rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    pub fn get(&self, out: &[usize], inp: &[usize]) -> Result<Scalar> {
        let key = (self.flatten(out)?, self.flatten(inp)?);
        Ok(self.entries.get(&key).cloned().unwrap_or_default())
    }

    /// Overwrites one entry; a zero value removes it.
    pub fn set(&mut self, out: &[usize], inp: &[usize], v: Scalar) -> Result<()> {
        let key = (self.flatten(out)?, self.flatten(inp)?);
        if v.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
        Ok(())
    }

    /// Nonzero entries as (out, in, coeff), in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, &Scalar)> + '_ {
        self.entries
            .iter()
            .map(move |((o, i), c)| (self.unflatten(*o), self.unflatten(*i), c))
    }

    fn same_shape(&self, other: &Operator) -> Result<()> {
        if self.n != other.n || self.legs != other.legs {
            return Err(Error::Shape(format!(
                "n={} legs={} vs n={} legs={}",
                self.n, self.legs, other.n, other.legs
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, v) in &other.entries {
            let slot = out.entries.entry(*k).or_default();
            *slot += v;
            if slot.is_zero() {
                out.entries.remove(k);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, k: &Scalar) -> Operator {
        Operator {
            n: self.n,
            legs: self.legs,
            entries: self
                .entries
                .iter()
                .map(|(key, v)| (*key, v * k))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Matrix product `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.same_shape(other)?;
        let mut rows: BTreeMap<usize, Vec<(usize, &Scalar)>> = BTreeMap::new();
        for ((o, i), v) in &other.entries {
            rows.entry(*o).or_default().push((*i, v));
        }
        let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
        for ((o, mid), a) in &self.entries {
            if let Some(row) = rows.get(mid) {
                for (i, b) in row {
                    acc.entry((*o, *i)).or_default().add_product(a, b);
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(Operator {
            n: self.n,
            legs: self.legs,
            entries: acc,
        })
    }

    /// Composes a chain left to right: `ops[0] ∘ ops[1] ∘ ...`.
    pub fn chain(ops: &[&Operator]) -> Result<Operator> {
        let (first, rest) = ops
            .split_first()
            .ok_or_else(|| Error::Invalid("empty operator chain".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, op| acc.compose(op))
    }

    /// `[self, other] = self∘other - other∘self`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn transpose(&self) -> Operator {
        Operator {
            n: self.n,
            legs: self.legs,
            entries: self
                .entries
                .iter()
                .map(|((o, i), v)| ((*i, *o), v.clone()))
                .collect(),
        }
    }

    /// Lifts a two-leg operator to three legs acting on `pair`.
    pub fn embed(&self, pair: Pair) -> Result<Operator> {
        if self.legs != 2 {
            return Err(Error::Shape(format!("embed needs 2 legs, got {}", self.legs)));
        }
        let (a, b) = pair.legs();
        let spec = pair.spectator();
        let mut out = Operator::zero(self.n, 3)?;
        for (o, i, v) in self.entries() {
            for s in 0..=self.n {
                let mut oo = [0; 3];
                let mut ii = [0; 3];
                oo[a] = o[0];
                oo[b] = o[1];
                oo[spec] = s;
                ii[a] = i[0];
                ii[b] = i[1];
                ii[spec] = s;
                out.set(&oo, &ii, v.clone())?;
            }
        }
        Ok(out)
    }

    pub fn specialize(&self, spec: &Specialization) -> Result<Operator> {
        let mut entries = BTreeMap::new();
        for (k, v) in &self.entries {
            let s = v.specialize(spec)?;
            if !s.is_zero() {
                entries.insert(*k, s);
            }
        }
        Ok(Operator {
            n: self.n,
            legs: self.legs,
            entries,
        })
    }

    /// All entries where `self` and `other` differ, in lexicographic order.
    pub fn diff_entries(&self, other: &Operator) -> Result<Vec<Discrepancy>> {
        self.same_shape(other)?;
        let mut keys: Vec<_> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        Ok(keys
            .into_iter()
            .filter_map(|k| {
                let l = self.entries.get(&k).cloned().unwrap_or_default();
                let r = other.entries.get(&k).cloned().unwrap_or_default();
                (l != r).then(|| Discrepancy {
                    out: self.unflatten(k.0),
                    inp: self.unflatten(k.1),
                    left: l,
                    right: r,
                })
            })
            .collect())
    }

    /// Exact entrywise equality with the first differing entry, if any.
    pub fn op_equal(&self, other: &Operator) -> Result<Equality> {
        let first = self.diff_entries(other)?.into_iter().next();
        Ok(Equality {
            equal: first.is_none(),
            first,
        })
    }

    /// Matrix of a functional operator on V^{⊗legs}: entry (I..; K..) is the
    /// coefficient of x^{I-1}... in `op(x^{K-1}...)`.
    pub fn from_functional<F>(cfg: SpaceConfig, legs: usize, op: F) -> Result<Operator>
    where
        F: Fn(&LaurentFn) -> Result<LaurentFn> + Sync,
    {
        let mut out = Operator::zero(cfg.n(), legs)?;
        let basis = exponent_grid(legs, -1, cfg.max_exp());
        let images: Vec<_> = basis
            .par_iter()
            .map(|exps| LaurentFn::monomial(cfg, exps, Scalar::one()).and_then(|m| op(&m)))
            .collect::<Result<_>>()?;
        for (exps, image) in basis.iter().zip(images) {
            if image.cfg() != cfg || image.arity() != legs {
                return Err(Error::Shape("functional operator changed the space".into()));
            }
            let inp: Vec<usize> = exps.iter().map(|&e| (e + 1) as usize).collect();
            for (e, c) in image.terms() {
                let o: Vec<usize> = e.iter().map(|&e| (e + 1) as usize).collect();
                out.set(&o, &inp, c.clone())?;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = JsonOperator {
            n: self.n,
            legs: self.legs,
            entries: self
                .entries()
                .map(|(out, inp, c)| JsonEntry {
                    out,
                    inp,
                    coeff: c.to_string(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(src: &str) -> Result<Operator> {
        let doc: JsonOperator = serde_json::from_str(src)?;
        let mut op = Operator::zero(doc.n, doc.legs)?;
        for e in doc.entries {
            op.set(&e.out, &e.inp, e.coeff.parse()?)?;
        }
        Ok(op)
    }

    /// CSV with columns `out,in,coeff`; multi-indices are space separated.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["out", "in", "coeff"])?;
        for (out, inp, c) in self.entries() {
            w.write_record([
                out.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
                inp.iter().map(usize::to_string).collect::<Vec<_>>().join(" "),
                c.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// One `(out;in) = coeff` line per nonzero entry.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (out, inp, c) in self.entries() {
            s.push_str(&format!("({};{}) = {}\n", join(&out), join(&inp), c));
        }
        s
    }
}
