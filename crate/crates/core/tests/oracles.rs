//! Independent oracles. Each test recomputes a quantity from its defining
//! formula with plain rational arithmetic at random points and compares it
//! with the exact symbolic engine evaluated at the same point.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qlie_core::cg::{extended_rhat, sigma_cg, sigma_cg_family, structure_constants};
use qlie_core::laurent::{op_rho, op_s, LaurentFn, Slots, SpaceConfig};
use qlie_core::rtt::{rtt_relation, Generator};
use qlie_core::{Operator, Pair, Scalar, Specialization};

type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn rand_q(rng: &mut ChaCha8Rng) -> Q {
    let num: i64 = rng.gen_range(-40..=40);
    let den: i64 = rng.gen_range(1..=13);
    let v = Q::new(num.into(), den.into());
    if v.is_zero() {
        q(7)
    } else {
        v
    }
}

fn pow(x: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// x^e with the convention 0^0 = 1 and 0^e = 0 for e > 0.
fn pow0(x: &Q, e: i32) -> Q {
    if x.is_zero() {
        if e == 0 {
            q(1)
        } else {
            assert!(e > 0);
            q(0)
        }
    } else {
        pow(x, e)
    }
}

fn eval_scalar(s: &Scalar, beta: &Q, c: &Q, p: &Q) -> Q {
    s.eval(beta, c, p).unwrap()
}

fn eval_fn(f: &LaurentFn, vars: &[Q], beta: &Q, c: &Q) -> Q {
    let mut acc = q(0);
    for (exps, coeff) in f.terms() {
        let mut t = eval_scalar(coeff, beta, c, &q(1));
        for (x, e) in vars.iter().zip(exps) {
            t *= pow(x, *e);
        }
        acc += t;
    }
    acc
}

fn distinct_points(rng: &mut ChaCha8Rng, k: usize) -> Vec<Q> {
    loop {
        let v: Vec<Q> = (0..k).map(|_| rand_q(rng)).collect();
        let mut sorted = v.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() == k {
            return v;
        }
    }
}

/// R̂F(x,y) = F(y,x) + β y (f(y,x) - f(x,y))/(x - y) + C (f(y,0) - f(0,y))/x,
/// with f the regular part of F, evaluated on the monomial x^{K-1} y^{L-1}.
fn rhat_formula(k: usize, l: usize, x: &Q, y: &Q, beta: &Q, c: &Q) -> Q {
    let (a, b) = (k as i32 - 1, l as i32 - 1);
    let big_f = |u: &Q, v: &Q| pow(u, a) * pow(v, b);
    let regular = a >= 0 && b >= 0;
    let f = |u: &Q, v: &Q| if regular { pow0(u, a) * pow0(v, b) } else { q(0) };
    let zero = q(0);
    big_f(y, x) + beta * y * (f(y, x) - f(x, y)) / (x - y) + c * (f(y, &zero) - f(&zero, y)) / x
}

#[test]
fn extended_matrix_reproduces_the_functional_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=4 {
        let r = extended_rhat(n).unwrap();
        for _ in 0..4 {
            let (beta, c) = (rand_q(&mut rng), rand_q(&mut rng));
            let pt = distinct_points(&mut rng, 2);
            let (x, y) = (&pt[0], &pt[1]);
            for k in 0..=n {
                for l in 0..=n {
                    let mut from_matrix = q(0);
                    for i in 0..=n {
                        for j in 0..=n {
                            let v = r.get(&[i, j], &[k, l]).unwrap();
                            if !v.is_zero() {
                                from_matrix +=
                                    eval_scalar(&v, &beta, &c, &q(1)) * pow(x, i as i32 - 1) * pow(y, j as i32 - 1);
                            }
                        }
                    }
                    assert_eq!(from_matrix, rhat_formula(k, l, x, y, &beta, &c), "n={n} K={k} L={l}");
                }
            }
        }
    }
}

#[test]
fn rho_and_s_match_their_definitions_on_three_variables() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 3;
    let cfg = SpaceConfig::new(n).unwrap();
    let zero = q(0);
    for (a, b) in [(0, 1), (0, 2), (1, 2), (1, 0), (2, 0)] {
        let slots = Slots::new(a, b).unwrap();
        for _ in 0..40 {
            let exps: Vec<i32> = (0..3).map(|_| rng.gen_range(-1..n as i32)).collect();
            let f = LaurentFn::monomial(cfg, &exps, Scalar::one()).unwrap();
            let vars = distinct_points(&mut rng, 3);
            let regular = exps[a] >= 0 && exps[b] >= 0;
            // f as a function of (value in slot a, value in slot b), spectator fixed
            let spectator: Q = (0..3)
                .filter(|&s| s != a && s != b)
                .map(|s| pow(&vars[s], exps[s]))
                .product();
            let fab = |u: &Q, v: &Q| {
                if regular {
                    pow0(u, exps[a]) * pow0(v, exps[b]) * &spectator
                } else {
                    q(0)
                }
            };
            let (xa, xb) = (&vars[a], &vars[b]);
            let rho = xa * (fab(xb, xa) - fab(xa, xb)) / (xa - xb);
            let s = (fab(xa, &zero) - fab(&zero, xa)) / xb;
            let one = q(1);
            assert_eq!(eval_fn(&op_rho(&f, slots).unwrap(), &vars, &one, &one), rho, "rho {exps:?} ({a},{b})");
            assert_eq!(eval_fn(&op_s(&f, slots).unwrap(), &vars, &one, &one), s, "s {exps:?} ({a},{b})");
        }
    }
}

type Dense = Vec<Vec<Q>>;

fn dense(op: &Operator, beta: &Q, c: &Q, p: &Q) -> Dense {
    let d = op.size();
    let mut m = vec![vec![q(0); d]; d];
    let base = op.n() + 1;
    let flat = |idx: &[usize]| idx.iter().fold(0, |acc, &i| acc * base + i);
    for (o, i, v) in op.entries() {
        m[flat(&o)][flat(&i)] = eval_scalar(v, beta, c, p);
    }
    m
}

fn identity(d: usize) -> Dense {
    (0..d).map(|i| (0..d).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect()
}

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (m, n) = (a.len(), b.len());
    let mut out = vec![vec![q(0); m * n]; m * n];
    for i in 0..m {
        for j in 0..m {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    out[i * n + k][j * n + l] = &a[i][j] * &b[k][l];
                }
            }
        }
    }
    out
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    let d = a.len();
    let mut out = vec![vec![q(0); d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..d {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// P₂₃ on V^{⊗3}, built by permuting basis vectors directly.
fn swap23(d: usize) -> Dense {
    let size = d * d * d;
    let mut m = vec![vec![q(0); size]; size];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                m[(a * d + c) * d + b][(a * d + b) * d + c] = q(1);
            }
        }
    }
    m
}

#[test]
fn dense_braid_relation_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for n in 1..=3 {
        for _ in 0..2 {
            let (beta, c) = (rand_q(&mut rng), rand_q(&mut rng));
            let r = dense(&extended_rhat(n).unwrap(), &beta, &c, &q(1));
            let id = identity(n + 1);
            let r12 = kron(&r, &id);
            let r23 = kron(&id, &r);
            assert_eq!(mul(&mul(&r12, &r23), &r12), mul(&mul(&r23, &r12), &r23), "n={n}");
        }
    }
}

#[test]
fn sparse_embedding_agrees_with_kronecker_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let n = 2;
    let (beta, c, p) = (rand_q(&mut rng), rand_q(&mut rng), rand_q(&mut rng));
    let op = extended_rhat(n).unwrap();
    let r = dense(&op, &beta, &c, &p);
    let id = identity(n + 1);
    let p23 = swap23(n + 1);
    let r13 = mul(&mul(&p23, &kron(&r, &id)), &p23);
    assert_eq!(dense(&op.embed(Pair::P12).unwrap(), &beta, &c, &p), kron(&r, &id));
    assert_eq!(dense(&op.embed(Pair::P23).unwrap(), &beta, &c, &p), kron(&id, &r));
    assert_eq!(dense(&op.embed(Pair::P13).unwrap(), &beta, &c, &p), r13);
}

#[test]
fn dense_ybe_for_the_p_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for n in 1..=3 {
        let (beta, p) = (rand_q(&mut rng), rand_q(&mut rng));
        let sigma = dense(&sigma_cg_family(n).unwrap(), &beta, &q(0), &p);
        let flip = dense(&Operator::flip(n).unwrap(), &beta, &q(0), &p);
        let r = mul(&flip, &sigma);
        let id = identity(n + 1);
        let p23 = swap23(n + 1);
        let r12 = kron(&r, &id);
        let r23 = kron(&id, &r);
        let r13 = mul(&mul(&p23, &r12), &p23);
        assert_eq!(mul(&mul(&r12, &r13), &r23), mul(&mul(&r23, &r13), &r12), "n={n}");
    }
}

#[test]
fn sigma_table_n2() {
    let s = sigma_cg(2).unwrap();
    let got: Vec<String> = s.entries().map(|(o, i, v)| format!("{o:?}{i:?}={v}")).collect();
    assert_eq!(
        got,
        vec![
            "[1, 1][1, 1]=1",
            "[1, 2][1, 2]=b",
            "[1, 2][2, 1]=1 - b",
            "[2, 1][1, 2]=1",
            "[2, 2][2, 2]=1",
        ]
    );
}

#[test]
fn sigma_table_n3_from_the_defining_sums() {
    // σ(e_k ⊗ e_l) = e_l ⊗ e_k + sign(l - k) β Σ_{min ≤ s < max} e_s ⊗ e_{k+l-s}
    let s = sigma_cg(3).unwrap();
    let b = Scalar::beta();
    let one = Scalar::one();
    let mut want: BTreeMap<(usize, usize, usize, usize), Scalar> = BTreeMap::new();
    let mut add = |i, j, k, l, v: Scalar| {
        let e = want.entry((i, j, k, l)).or_default();
        *e += v;
    };
    // k = l: identity
    for k in 1..=3 {
        add(k, k, k, k, one.clone());
    }
    // (1,2): e2⊗e1 + β e1⊗e2
    add(2, 1, 1, 2, one.clone());
    add(1, 2, 1, 2, b.clone());
    // (2,1): e1⊗e2 - β e1⊗e2
    add(1, 2, 2, 1, one.clone() - b.clone());
    // (1,3): e3⊗e1 + β (e1⊗e3 + e2⊗e2)
    add(3, 1, 1, 3, one.clone());
    add(1, 3, 1, 3, b.clone());
    add(2, 2, 1, 3, b.clone());
    // (3,1): e1⊗e3 - β (e1⊗e3 + e2⊗e2)
    add(1, 3, 3, 1, one.clone() - b.clone());
    add(2, 2, 3, 1, -b.clone());
    // (2,3): e3⊗e2 + β e2⊗e3
    add(3, 2, 2, 3, one.clone());
    add(2, 3, 2, 3, b.clone());
    // (3,2): e2⊗e3 - β e2⊗e3
    add(2, 3, 3, 2, one.clone() - b.clone());
    let got: BTreeMap<_, _> = s
        .entries()
        .map(|(o, i, v)| ((o[0], o[1], i[0], i[1]), v.clone()))
        .collect();
    assert_eq!(got, want);
}

#[test]
fn constants_table() {
    for n in 1..=6 {
        let ct = structure_constants(n).unwrap();
        let mut want = BTreeMap::new();
        for j in 2..=n {
            want.insert((j, j, 1), Scalar::c());
            want.insert((j, 1, j), -Scalar::c());
        }
        let got: BTreeMap<_, _> = ct.entries().map(|(k, v)| (k, v.clone())).collect();
        assert_eq!(got, want, "n={n}");
    }
}

// RTT and bicovariant relations regenerated from scratch with numeric
// matrices, compared by rank over ℚ.

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum G {
    X(usize),
    F(usize, usize),
}

type Poly = BTreeMap<Vec<G>, Q>;

fn t(row: usize, col: usize) -> Option<Option<G>> {
    match (row, col) {
        (0, 0) => Some(None),
        (0, j) => Some(Some(G::X(j))),
        (_, 0) => None,
        (i, j) => Some(Some(G::F(i, j))),
    }
}

fn push(p: &mut Poly, word: &[Option<G>], c: Q) {
    if c.is_zero() {
        return;
    }
    let w: Vec<G> = word.iter().flatten().copied().collect();
    *p.entry(w).or_insert_with(|| q(0)) += c;
}

fn clean(mut p: Poly) -> Poly {
    p.retain(|_, v| !v.is_zero());
    p
}

fn rtt_oracle(r: &Dense, n: usize) -> Vec<Poly> {
    let d = n + 1;
    let at = |i: usize, j: usize, k: usize, l: usize| &r[i * d + j][k * d + l];
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for a in 0..d {
                for b in 0..d {
                    let mut p = Poly::new();
                    for k in 0..d {
                        for l in 0..d {
                            if let (Some(x), Some(y)) = (t(k, a), t(l, b)) {
                                push(&mut p, &[x, y], at(i, j, k, l).clone());
                            }
                            if let (Some(x), Some(y)) = (t(i, k), t(j, l)) {
                                push(&mut p, &[x, y], -at(k, l, a, b).clone());
                            }
                        }
                    }
                    out.push(clean(p));
                }
            }
        }
    }
    out
}

fn bcc_oracle(r: &Dense, n: usize) -> Vec<Poly> {
    let d = n + 1;
    let s = |i: usize, j: usize, k: usize, l: usize| r[i * d + j][k * d + l].clone();
    // C^k_{ij} sits at R̂^{0k}_{ij}
    let c = |k: usize, i: usize, j: usize| r[k][i * d + j].clone();
    let x = |i| Some(G::X(i));
    let f = |i, j| Some(G::F(i, j));
    let small: Vec<usize> = (1..=n).collect();
    let mut out = Vec::new();
    for &i in &small {
        for &j in &small {
            let mut p = Poly::new();
            push(&mut p, &[x(i), x(j)], q(1));
            for &k in &small {
                for &l in &small {
                    push(&mut p, &[x(k), x(l)], -s(k, l, i, j));
                }
                push(&mut p, &[x(k)], -c(k, i, j));
            }
            out.push(clean(p));
            for &a in &small {
                for &b in &small {
                    let mut p = Poly::new();
                    for &k in &small {
                        for &l in &small {
                            push(&mut p, &[f(a, k), f(b, l)], s(k, l, i, j));
                            push(&mut p, &[f(k, i), f(l, j)], -s(a, b, k, l));
                        }
                    }
                    out.push(clean(p));
                }
                let mut p = Poly::new();
                for &k in &small {
                    for &l in &small {
                        push(&mut p, &[x(k), f(a, l)], s(k, l, i, j));
                        push(&mut p, &[f(k, i), f(l, j)], -c(a, k, l));
                    }
                    push(&mut p, &[f(a, k)], c(k, i, j));
                }
                push(&mut p, &[f(a, i), x(j)], q(-1));
                out.push(clean(p));
                let mut p = Poly::new();
                push(&mut p, &[x(i), f(a, j)], q(1));
                for &k in &small {
                    for &l in &small {
                        push(&mut p, &[f(a, k), x(l)], -s(k, l, i, j));
                    }
                }
                out.push(clean(p));
            }
        }
    }
    out
}

fn rank(polys: &[Poly]) -> usize {
    let mut cols: BTreeMap<Vec<G>, usize> = BTreeMap::new();
    for p in polys {
        for w in p.keys() {
            let next = cols.len();
            cols.entry(w.clone()).or_insert(next);
        }
    }
    let mut rows: Vec<Vec<Q>> = polys
        .iter()
        .map(|p| {
            let mut row = vec![q(0); cols.len()];
            for (w, v) in p {
                row[cols[w]] = v.clone();
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = &row[col] / &pivot[col];
                for c in col..pivot.len() {
                    let delta = &factor * &pivot[c];
                    row[c] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn rtt_generator_matches_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for n in 1..=2 {
        let (beta, c) = (rand_q(&mut rng), rand_q(&mut rng));
        let op = extended_rhat(n).unwrap();
        let r = dense(&op, &beta, &c, &q(1));
        let oracle = rtt_oracle(&r, n);
        let spec = Specialization {
            beta: Some(beta.clone()),
            c: Some(c.clone()),
            p: Some(q(1)),
        };
        let d = n + 1;
        let mut idx = 0;
        for i in 0..d {
            for j in 0..d {
                for a in 0..d {
                    for b in 0..d {
                        let lib = rtt_relation(&op, i, j, a, b).unwrap().specialize(&spec).unwrap();
                        let lib: Poly = lib
                            .terms()
                            .map(|(w, v)| {
                                let w = w
                                    .iter()
                                    .map(|g| match g {
                                        Generator::Chi(i) => G::X(*i),
                                        Generator::F(i, j) => G::F(*i, *j),
                                        Generator::Unit => unreachable!(),
                                    })
                                    .collect();
                                (w, eval_scalar(v, &beta, &c, &q(1)))
                            })
                            .collect();
                        assert_eq!(lib, oracle[idx], "({i},{j},{a},{b})");
                        idx += 1;
                    }
                }
            }
        }
    }
}

#[test]
fn rtt_and_bcc_spans_agree_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 1..=3 {
        let (beta, c) = (rand_q(&mut rng), rand_q(&mut rng));
        let r = dense(&extended_rhat(n).unwrap(), &beta, &c, &q(1));
        let a = rtt_oracle(&r, n);
        let b = bcc_oracle(&r, n);
        let both: Vec<Poly> = a.iter().chain(&b).cloned().collect();
        let (ra, rb, rab) = (rank(&a), rank(&b), rank(&both));
        assert_eq!((ra, rb), (rab, rab), "n={n}");
    }
}

#[test]
fn corrupting_a_constant_separates_the_spans() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let n = 2;
    let (beta, c) = (rand_q(&mut rng), rand_q(&mut rng));
    let clean_r = dense(&extended_rhat(n).unwrap(), &beta, &c, &q(1));
    let mut bad = clean_r.clone();
    // C^2_{21} = C becomes 2C
    bad[2][2 * (n + 1) + 1] = &c * q(2);
    let a = rtt_oracle(&clean_r, n);
    let b = bcc_oracle(&bad, n);
    let both: Vec<Poly> = a.iter().chain(&b).cloned().collect();
    assert!(rank(&both) > rank(&a));
}
