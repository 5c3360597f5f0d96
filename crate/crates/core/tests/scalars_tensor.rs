mod common;

use common::*;
use triplekit::linalg::{span_basis, Matrix};
use triplekit::liebuild::LieAlgebra;
use triplekit::scalars::{q as frac, Cyc, Scalar, ScalarError};
use triplekit::tensor::{is_derivation, jacobi_defect, BasedSpace, BilinearTensor, Sl2Frame};

fn w() -> Cyc {
    Cyc::w()
}

fn cyc_of(a: i64, b: i64) -> Cyc {
    Cyc::new(q(a), q(b))
}

#[test]
fn omega_arithmetic() {
    assert_eq!(w() * w(), cyc_of(-1, -1));
    assert_eq!(w() * (w() * w()), Cyc::one());
    assert_eq!(cyc_of(1, 1) * cyc_of(1, 1), w());
    assert_eq!(Cyc::one() + &w() + &(w() * w()), Cyc::zero());
}

#[test]
fn inverses() {
    assert_eq!(w().inv().unwrap(), cyc_of(-1, -1));
    assert_eq!(Cyc::from_i64(2).inv().unwrap(), Cyc::from(frac(1, 2)));
    assert_eq!(cyc_of(1, 1).inv().unwrap(), cyc_of(0, -1));
    assert_eq!(Cyc::zero().inv(), Err(ScalarError::DivisionByZero));
    assert_eq!(Q::zero().inv(), Err(ScalarError::DivisionByZero));
}

#[test]
fn rationals_stay_reduced() {
    let r = frac(6, -4);
    assert_eq!(r.to_string(), "-3/2");
    assert_eq!(r.denom().to_string(), "2");
    assert_eq!("10/4".parse::<Q>().unwrap(), frac(5, 2));
    assert!("1/0".parse::<Q>().is_err());
}

#[test]
fn scalar_text_forms() {
    assert_eq!(frac(-3, 2).to_json(), serde_json::json!("-3/2"));
    let z = Cyc::new(frac(1, 2), q(-1));
    let back = Cyc::from_json(&z.to_json()).unwrap();
    assert_eq!(back, z);
    assert_eq!(Q::from_json(&serde_json::json!("7")).unwrap(), q(7));
}

fn sl2() -> LieAlgebra<Q> {
    LieAlgebra::sl2()
}

#[test]
fn sl2_bracket_values() {
    let g = sl2();
    let (h, e_, f) = (e::<Q>(3, 0), e::<Q>(3, 1), e::<Q>(3, 2));
    assert_eq!(g.bracket.apply(&e_, &f).unwrap(), h);
    assert_eq!(g.bracket.apply(&h, &e_).unwrap(), vec![q(0), q(2), q(0)]);
    assert_eq!(g.bracket.apply(&vec![q(0); 3], &f).unwrap(), vec![q(0); 3]);
    assert!(g.bracket.apply(&[q(1)], &f).is_err());
}

#[test]
fn spans() {
    let (b, _) = span_basis(2, &[vec![q(1), q(0)], vec![q(2), q(0)]]);
    assert_eq!(b, vec![vec![q(1), q(0)]]);
    let (b, _) = span_basis(2, &[vec![q(1), q(1)], vec![q(1), q(-1)]]);
    assert_eq!(b.len(), 2);
    let (again, _) = span_basis(2, &b);
    assert_eq!(again, b);
}

#[test]
fn k_operators_of_the_symplectic_plane_span_the_identity() {
    let u = fkts::<Q>("fkts-b");
    let ks: Vec<Vec<Q>> = u.k_basis_ops().iter().map(|m| m.flat().to_vec()).collect();
    let (b, handle) = span_basis(4, &ks);
    assert_eq!(b.len(), 1);
    assert!(handle.contains(Matrix::<Q>::identity(2).flat()));
}

fn tensor3(entries: &[(usize, usize, usize, i64)]) -> BilinearTensor<Q> {
    let mut t = BilinearTensor::zeros(3, 3, 3);
    for &(i, j, k, c) in entries {
        t.set(i, j, k, q(c));
    }
    t
}

fn antisym(pairs: &[(usize, usize, usize, i64)]) -> BilinearTensor<Q> {
    let mut all = Vec::new();
    for &(i, j, k, c) in pairs {
        all.push((i, j, k, c));
        all.push((j, i, k, -c));
    }
    tensor3(&all)
}

#[test]
fn jacobi_on_small_brackets() {
    let space = BasedSpace::numbered("e", 3);
    let g = sl2();
    assert!(jacobi_defect(&g.space, &g.bracket, false).unwrap().is_empty());
    // so(2,1): a valid Lie algebra despite the sign change.
    let so21 = antisym(&[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, -1)]);
    assert!(jacobi_defect(&space, &so21, false).unwrap().is_empty());
    // [e3,e1] = e3 breaks Jacobi at (e1,e2,e3).
    let broken = antisym(&[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 2, 1)]);
    let bad = jacobi_defect(&space, &broken, false).unwrap();
    assert!(bad.contains(&(0, 1, 2)));
    let mut sorted = bad.clone();
    sorted.sort();
    assert_eq!(sorted, bad);
}

#[test]
fn jacobi_flags_broken_anticommutativity() {
    let space = BasedSpace::numbered("e", 3);
    let t = tensor3(&[(0, 1, 2, 1)]);
    assert!(!jacobi_defect(&space, &t, false).unwrap().is_empty());
}

#[test]
fn frame_tables() {
    let fr = Sl2Frame::<Q>::standard();
    let tr = fr.trace_table();
    assert_eq!(tr[1][2], q(1));
    assert_eq!(tr[0][0], q(2));
    let (u, v) = (e::<Q>(2, 0), e::<Q>(2, 1));
    assert_eq!(fr.gamma(&u, &v), fr.h.neg());
    assert_eq!(fr.gamma(&u, &u), fr.e.scale(&q(2)));
    assert_eq!(fr.gamma(&v, &v), fr.f.scale(&q(-2)));
}

#[test]
fn derivations() {
    let g = sl2();
    assert!(is_derivation(&Matrix::zeros(3, 3), &g.bracket).unwrap());
    assert!(is_derivation(&g.ad(&e::<Q>(3, 0)), &g.bracket).unwrap());
    assert!(!is_derivation(&Matrix::identity(3), &g.bracket).unwrap());
}

// [[f,g],h] = 2(tr(gh)f - tr(fh)g) on sl(V), checked on a grid of elements.
#[test]
fn double_bracket_trace_identity() {
    let fr = Sl2Frame::<Q>::standard();
    let coords = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 2, -1], [-3, 1, 4]];
    for a in &coords {
        for b in &coords {
            for c in &coords {
                let to = |x: &[i64; 3]| fr.element(&x.map(q));
                let (f, g, h) = (to(a), to(b), to(c));
                let lhs = f.commutator(&g).commutator(&h);
                let mut rhs = f.scale(&(q(2) * g.mul(&h).trace()));
                rhs.axpy(&(q(-2) * f.mul(&h).trace()), &g);
                assert_eq!(lhs, rhs);
            }
        }
    }
}

// (u|v) f = -(f(u)|.) v + (f(v)|.) u as operators on V.
#[test]
fn form_operator_identity() {
    let fr = Sl2Frame::<Q>::standard();
    for a in 0..2 {
        for b in 0..2 {
            for f in fr.basis() {
                let (u, v) = (e::<Q>(2, a), e::<Q>(2, b));
                let lhs = f.scale(&fr.pairing(&u, &v));
                let rhs = Matrix::from_fn(2, 2, |r, c| {
                    let z = e::<Q>(2, c);
                    -(fr.pairing(&f.apply(&u), &z) * v[r].clone()) + &(fr.pairing(&f.apply(&v), &z) * u[r].clone())
                });
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn based_space_rejects_duplicate_labels() {
    assert!(BasedSpace::new(vec!["a".into(), "a".into()]).is_err());
}
