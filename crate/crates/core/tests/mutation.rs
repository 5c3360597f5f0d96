mod common;

use common::*;
use serde_json::Value;
use triplekit::fkts::Fkts;
use triplekit::report::{Check, Status};
use triplekit::scalars::Scalar;

const FIXTURES: [&str; 6] = ["zero-1", "zero-2", "zero-3", "fkts-b", "osp", "jts"];

fn gate(u: &Fkts<Q>) -> Vec<Check> {
    let mut r = u.check_fk();
    r.extend(u.check_st_identities());
    r.extend(u.check_prop_ss());
    r.extend(u.check_k_identities());
    r.checks
}

fn mutants(u: &Fkts<Q>) -> Vec<((usize, usize, usize, usize), Fkts<Q>)> {
    let n = u.dim();
    let mut out = Vec::new();
    for t in 0..n.pow(4) {
        let (i, j, k, l) = (t / (n * n * n), (t / (n * n)) % n, (t / n) % n, t % n);
        let mut m = u.clone();
        let c = m.triple.get(i, j, k, l).clone() + &q(1);
        m.triple.set(i, j, k, l, c);
        out.push(((i, j, k, l), m));
    }
    out
}

// Coefficient of e_l in e_i e_j e_k, read straight off the tensor.
fn raw(u: &Fkts<Q>) -> impl Fn(usize, usize, usize, usize) -> Q + '_ {
    move |i, j, k, l| u.triple.get(i, j, k, l).clone()
}

type Mat = Vec<Vec<Q>>;

fn l_mat(u: &Fkts<Q>, x: &[Q], y: &[Q]) -> Mat {
    let n = u.dim();
    let t = raw(u);
    (0..n)
        .map(|row| {
            (0..n)
                .map(|col| {
                    let mut s = q(0);
                    for i in 0..n {
                        for j in 0..n {
                            s = s + &(x[i].clone() * y[j].clone() * t(i, j, col, row));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn k_mat(u: &Fkts<Q>, x: &[Q], y: &[Q]) -> Mat {
    let n = u.dim();
    let t = raw(u);
    let d = u.delta.scalar::<Q>();
    (0..n)
        .map(|row| {
            (0..n)
                .map(|col| {
                    let mut s = q(0);
                    for i in 0..n {
                        for j in 0..n {
                            let w = x[i].clone() * y[j].clone();
                            s = s + &(w.clone() * t(i, col, j, row)) - &(d.clone() * w * t(j, col, i, row));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn mm(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|r| (0..n).map(|c| (0..n).fold(q(0), |s, k| s + &(a[r][k].clone() * b[k][c].clone()))).collect()).collect()
}

fn lin(a: &Mat, b: &Mat, cb: Q) -> Mat {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.clone() + &(cb.clone() * y.clone())).collect()).collect()
}

fn mv(a: &Mat, x: &[Q]) -> Vec<Q> {
    a.iter().map(|r| r.iter().zip(x).fold(q(0), |s, (p, v)| s + &(p.clone() * v.clone()))).collect()
}

fn flat(m: &Mat) -> Vec<Value> {
    m.iter().flatten().map(Scalar::to_json).collect()
}

// Both sides of the first or second defining identity at a basis tuple.
fn oracle(u: &Fkts<Q>, which: &str, t: &[usize]) -> (Vec<Value>, Vec<Value>) {
    let n = u.dim();
    let b = |i: usize| e::<Q>(n, i);
    let (a, c, x, y) = (b(t[0]), b(t[1]), b(t[2]), b(t[3]));
    let eps = u.epsilon.scalar::<Q>();
    match which {
        "fk1" => {
            let luv = l_mat(u, &a, &c);
            let lxy = l_mat(u, &x, &y);
            let lhs = lin(&mm(&luv, &lxy), &mm(&lxy, &luv), q(-1));
            let rhs = lin(&l_mat(u, &mv(&luv, &x), &y), &l_mat(u, &x, &mv(&l_mat(u, &c, &a), &y)), eps);
            (flat(&lhs), flat(&rhs))
        }
        "fk2" => {
            let kuv = k_mat(u, &a, &c);
            let lhs = k_mat(u, &mv(&kuv, &x), &y);
            let rhs = lin(&mm(&l_mat(u, &y, &x), &kuv), &mm(&kuv, &l_mat(u, &x, &y)), -eps);
            (flat(&lhs), flat(&rhs))
        }
        _ => unreachable!(),
    }
}

#[test]
fn every_fixture_passes_the_gate() {
    for name in FIXTURES {
        let u = fkts::<Q>(name);
        assert!(gate(&u).iter().all(Check::ok), "{name}");
    }
}

#[test]
fn rejected_mutants_carry_real_counterexamples() {
    for name in ["zero-1", "zero-2", "zero-3", "fkts-b"] {
        let u = fkts::<Q>(name);
        let all = mutants(&u);
        let mut rejected = 0;
        for (pos, m) in &all {
            let checks = gate(m);
            let Some(bad) = checks.iter().find(|c| c.status == Status::Fail) else { continue };
            rejected += 1;
            let cx = bad.counterexample.as_ref().unwrap_or_else(|| panic!("{name} {pos:?}: {} has no tuple", bad.name));
            assert_ne!(cx.lhs, cx.rhs, "{name} {pos:?}");
            if bad.name == "fk1" || bad.name == "fk2" {
                assert_eq!(oracle(m, &bad.name, &cx.tuple), (cx.lhs.clone(), cx.rhs.clone()), "{name} {pos:?}");
            }
        }
        let want = all.len().min(5);
        assert!(rejected >= want, "{name}: {rejected} of {} mutants rejected", all.len());
    }
}

#[test]
fn defining_identities_reject_the_plane_mutants() {
    // Every single-entry +1 perturbation of the symplectic plane breaks FK1 or FK2.
    let u = fkts::<Q>("fkts-b");
    for (pos, m) in mutants(&u) {
        let r = m.check_fk();
        assert!(!r.passed(), "{pos:?}");
    }
}

#[test]
fn line_systems_with_negative_epsilon_are_scale_invariant() {
    // With one structure constant, +1 doubles it; every identity is homogeneous,
    // so the doubled system is valid again.
    for name in ["osp", "jts"] {
        let u = fkts::<Q>(name);
        let all = mutants(&u);
        assert_eq!(all.len(), 1);
        let m = &all[0].1;
        assert_eq!(m.triple.get(0, 0, 0, 0), &q(2));
        assert!(gate(m).iter().all(Check::ok), "{name}");
    }
    // With positive epsilon FK1 forces the constant to vanish.
    let m = &mutants(&fkts::<Q>("zero-1"))[0].1;
    let fk1 = m.check_fk1();
    assert_eq!(fk1.status, Status::Fail);
    assert_eq!(oracle(m, "fk1", &fk1.counterexample.as_ref().unwrap().tuple).1, vec![serde_json::json!("2")]);
}

#[test]
fn mutants_of_the_j_ternary_fixture_are_caught() {
    let s = jt::<Q>("sp2");
    let n = s.nt();
    let mut rejected = 0;
    for t in 0..n.pow(4) {
        let (i, j, k, l) = (t / (n * n * n), (t / (n * n)) % n, (t / n) % n, t % n);
        let mut m = s.clone();
        let c = m.triple.get(i, j, k, l).clone() + &q(1);
        m.triple.set(i, j, k, l, c);
        let r = m.check_jt_axioms();
        if let Some(bad) = r.failures().next() {
            rejected += 1;
            if let Some(cx) = &bad.counterexample {
                assert_ne!(cx.lhs, cx.rhs);
            }
        };
    }
    assert_eq!(rejected, n.pow(4));
}
