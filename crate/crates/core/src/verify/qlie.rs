//! The four component relations between σ and C^k_{ij} that make up the
//! braid equation of the extended matrix, evaluated as explicit index sums.

use std::collections::{BTreeMap, HashMap};

use crate::cg::StructureTensor;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Specialization};
use crate::tensor::Operator;

use super::report::{scalar_witness, ReportBuilder, VerificationReport};

/// A sparse tensor whose axes carry single-letter labels.
#[derive(Clone, Debug)]
struct Labeled {
    labels: Vec<char>,
    entries: BTreeMap<Vec<usize>, Scalar>,
}

impl Labeled {
    /// σ^{ab}_{cd} with labels given as "abcd" (upper, upper, lower, lower).
    fn sigma(sigma: &Operator, labels: &str) -> Labeled {
        Labeled {
            labels: labels.chars().collect(),
            entries: sigma
                .entries()
                .map(|(o, i, v)| (vec![o[0], o[1], i[0], i[1]], v.clone()))
                .collect(),
        }
    }

    /// C^a_{bc} with labels "abc".
    fn constants(ct: &StructureTensor, labels: &str) -> Labeled {
        Labeled {
            labels: labels.chars().collect(),
            entries: ct
                .entries()
                .map(|((k, i, j), v)| (vec![k, i, j], v.clone()))
                .collect(),
        }
    }

    /// Sums over every label the two tensors share.
    fn contract(&self, other: &Labeled) -> Labeled {
        let shared: Vec<char> = self
            .labels
            .iter()
            .filter(|c| other.labels.contains(c))
            .copied()
            .collect();
        let pos = |t: &Labeled, c: char| t.labels.iter().position(|&x| x == c).expect("label");
        let a_shared: Vec<usize> = shared.iter().map(|&c| pos(self, c)).collect();
        let b_shared: Vec<usize> = shared.iter().map(|&c| pos(other, c)).collect();
        let a_free: Vec<usize> = (0..self.labels.len()).filter(|i| !a_shared.contains(i)).collect();
        let b_free: Vec<usize> = (0..other.labels.len()).filter(|i| !b_shared.contains(i)).collect();

        let mut by_key: HashMap<Vec<usize>, Vec<(&Vec<usize>, &Scalar)>> = HashMap::new();
        for (idx, v) in &other.entries {
            let key = b_shared.iter().map(|&p| idx[p]).collect();
            by_key.entry(key).or_default().push((idx, v));
        }
        let mut entries: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
        for (idx, v) in &self.entries {
            let key: Vec<usize> = a_shared.iter().map(|&p| idx[p]).collect();
            if let Some(matches) = by_key.get(&key) {
                for (bidx, bv) in matches {
                    let out: Vec<usize> = a_free
                        .iter()
                        .map(|&p| idx[p])
                        .chain(b_free.iter().map(|&p| bidx[p]))
                        .collect();
                    entries.entry(out).or_default().add_product(v, bv);
                }
            }
        }
        entries.retain(|_, v| !v.is_zero());
        Labeled {
            labels: a_free
                .iter()
                .map(|&p| self.labels[p])
                .chain(b_free.iter().map(|&p| other.labels[p]))
                .collect(),
            entries,
        }
    }

    fn reorder(&self, order: &[char]) -> Labeled {
        let perm: Vec<usize> = order
            .iter()
            .map(|c| self.labels.iter().position(|x| x == c).expect("free label"))
            .collect();
        Labeled {
            labels: order.to_vec(),
            entries: self
                .entries
                .iter()
                .map(|(idx, v)| (perm.iter().map(|&p| idx[p]).collect(), v.clone()))
                .collect(),
        }
    }
}

#[derive(Clone, Copy)]
enum Factor {
    Sigma(&'static str),
    C(&'static str),
}

struct Relation {
    name: &'static str,
    free: &'static str,
    lhs: &'static [(i64, &'static [Factor])],
    rhs: &'static [(i64, &'static [Factor])],
}

use Factor::{Sigma as S, C};

const RELATIONS: [Relation; 4] = [
    Relation {
        name: "braided Jacobi: C^s_ni C^m_sj - s^kl_ij C^s_nk C^m_sl = C^k_ij C^m_nk",
        free: "nijm",
        lhs: &[(1, &[C("sni"), C("msj")]), (-1, &[S("klij"), C("snk"), C("msl")])],
        rhs: &[(1, &[C("kij"), C("mnk")])],
    },
    Relation {
        name: "braid: s^kl_ij s^as_nk s^bm_sl = s^ks_ni s^lm_sj s^ab_kl",
        free: "ijnabm",
        lhs: &[(1, &[S("klij"), S("asnk"), S("bmsl")])],
        rhs: &[(1, &[S("ksni"), S("lmsj"), S("abkl")])],
    },
    Relation {
        name: "mixed: s^kl_ij C^s_nk s^am_sl + C^l_ij s^am_nl = s^ks_ni s^lm_sj C^a_kl + s^as_ni C^m_sj",
        free: "ijnam",
        lhs: &[(1, &[S("klij"), C("snk"), S("amsl")]), (1, &[C("lij"), S("amnl")])],
        rhs: &[(1, &[S("ksni"), S("lmsj"), C("akl")]), (1, &[S("asni"), C("msj")])],
    },
    Relation {
        name: "exchange: C^s_ni s^am_sj = s^kl_ij s^as_nk C^m_sl",
        free: "nijam",
        lhs: &[(1, &[C("sni"), S("amsj")])],
        rhs: &[(1, &[S("klij"), S("asnk"), C("msl")])],
    },
];

fn evaluate(
    side: &[(i64, &[Factor])],
    free: &[char],
    sigma: &Operator,
    ct: &StructureTensor,
) -> BTreeMap<Vec<usize>, Scalar> {
    let mut out: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    for (coeff, factors) in side {
        let tensors: Vec<Labeled> = factors
            .iter()
            .map(|f| match f {
                Factor::Sigma(l) => Labeled::sigma(sigma, l),
                Factor::C(l) => Labeled::constants(ct, l),
            })
            .collect();
        let product = tensors[1..]
            .iter()
            .fold(tensors[0].clone(), |acc, t| acc.contract(t))
            .reorder(free);
        let k = Scalar::from_int(*coeff);
        for (idx, v) in product.entries {
            let slot = out.entry(idx).or_default();
            slot.add_product(&v, &k);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Checks the braided Jacobi identity, the braid relation for σ and the two
/// mixed σ/C relations over all small indices.
pub fn check_qlie_axioms(
    sigma: &Operator,
    ct: &StructureTensor,
    spec: &Specialization,
) -> Result<VerificationReport> {
    if sigma.legs() != 2 || sigma.n() != ct.n() {
        return Err(Error::Shape(format!(
            "sigma (n={}, legs={}) vs constants (n={})",
            sigma.n(),
            sigma.legs(),
            ct.n()
        )));
    }
    if sigma.entries().any(|(o, i, _)| o.contains(&0) || i.contains(&0)) {
        return Err(Error::Invalid("sigma must only use small indices 1..=n".into()));
    }
    let n = sigma.n();
    let sigma = sigma.specialize(spec)?;
    let ct = ct.specialize(spec)?;
    let mut b = ReportBuilder::new("qlie", n, spec);
    let names: Vec<String> = spec.symbolic_names().into_iter().filter(|s| *s != "p").map(String::from).collect();
    b = b.symbolic(&names.iter().map(String::as_str).collect::<Vec<_>>());
    for rel in &RELATIONS {
        let free: Vec<char> = rel.free.chars().collect();
        let lhs = evaluate(rel.lhs, &free, &sigma, &ct);
        let rhs = evaluate(rel.rhs, &free, &sigma, &ct);
        let mut keys: Vec<&Vec<usize>> = lhs.keys().chain(rhs.keys()).collect();
        keys.sort();
        keys.dedup();
        let zero = Scalar::zero();
        let failures = keys
            .into_iter()
            .filter_map(|k| {
                let l = lhs.get(k).unwrap_or(&zero);
                let r = rhs.get(k).unwrap_or(&zero);
                (l != r).then(|| {
                    let at = free
                        .iter()
                        .zip(k)
                        .map(|(c, v)| format!("{c}={v}"))
                        .collect::<Vec<_>>()
                        .join(",");
                    scalar_witness(rel.name, at, l, r)
                })
            })
            .collect();
        b.item(rel.name, (n as u64).pow(free.len() as u32), failures);
    }
    Ok(b.finish())
}
