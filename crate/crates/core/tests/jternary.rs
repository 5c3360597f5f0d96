mod common;

use common::*;
use triplekit::jternary::{triple_from_graded, JTernary, JordanAlgebra};
use triplekit::linalg::{Matrix, Vector};
use triplekit::report::Status;
use triplekit::scalars::Sign;
use triplekit::tensor::{is_derivation, BasedSpace, BilinearTensor, TrilinearTensor};

fn s(x: usize, y: usize) -> i64 {
    [[0, 1], [-1, 0]][x][y]
}

// J = F1, T = F^2, <x|y> = s(x,y)1, <x,y,z> = p s(x,y)z + r s(x,z)y.
fn sp2_like(p: i64, r: i64, angle_sign: i64) -> JTernary<Q> {
    let j = JordanAlgebra::<Q>::scalars();
    let action = BilinearTensor::from_fn(1, 2, 2, |_, x| e(2, x));
    let angle = BilinearTensor::from_fn(2, 2, 1, |x, y| vec![q(angle_sign * s(x, y))]);
    let triple = TrilinearTensor::endo(2, |x, y, z| {
        let mut v = vec![q(0), q(0)];
        v[z] = v[z].clone() + &q(p * s(x, y));
        v[y] = v[y].clone() + &q(r * s(x, z));
        v
    });
    JTernary::new(j, BasedSpace::numbered("x", 2), action, angle, triple, Sign::Plus).unwrap()
}

fn trivial() -> JTernary<Q> {
    let j = JordanAlgebra::<Q>::scalars();
    JTernary::new(
        j,
        BasedSpace::new(vec![]).unwrap(),
        BilinearTensor::zeros(1, 0, 0),
        BilinearTensor::zeros(0, 0, 1),
        TrilinearTensor::zeros([0; 3], 0),
        Sign::Plus,
    )
    .unwrap()
}

fn join(s: &JTernary<Q>, a: &[Q], x: &[Q]) -> Vector<Q> {
    assert_eq!((a.len(), x.len()), (s.nj(), s.nt()));
    a.iter().chain(x).cloned().collect()
}

#[test]
fn fixture_matches_the_symplectic_formula() {
    let fx = jt::<Q>("sp2");
    let oracle = sp2_like(1, -1, 1);
    assert_eq!(fx.triple, oracle.triple);
    assert_eq!(fx.angle, oracle.angle);
    assert_eq!(fx.action, oracle.action);
}

#[test]
fn axioms_on_the_symplectic_plane() {
    let r = jt::<Q>("sp2").check_jt_axioms();
    assert!(r.passed(), "{r:?}");
    for k in 1..=6 {
        assert_eq!(r.check(&format!("jt{k}")).unwrap().status, Status::Pass);
    }
}

#[test]
fn symmetric_triple_breaks_jt3() {
    let r = sp2_like(1, 1, 1).check_jt_axioms();
    assert_eq!(r.check("jt3").unwrap().status, Status::Fail);
}

#[test]
fn empty_module_is_vacuously_fine() {
    let t = trivial();
    assert!(t.check_jt_axioms().passed());
    assert!(t.check_theorem_jt().passed());
    let u = t.to_fkts().unwrap();
    assert_eq!(u.dim(), 0);
    assert!(u.check_fk().passed());
}

#[test]
fn printed_last_term_of_jt6_would_reject_the_fixture() {
    // Same identity with the final inner triple taken at (x,y,w) instead of (x,y,v).
    let sp = jt::<Q>("sp2");
    let t = |a: &[Q], b: &[Q], c: &[Q]| sp.tri(a, b, c);
    let mut failed = false;
    for idx in 0..32 {
        let pick = |k: usize| e::<Q>(2, (idx >> k) & 1);
        let (x, y, z, w, v) = (pick(0), pick(1), pick(2), pick(3), pick(4));
        let lhs = t(&x, &y, &t(&z, &w, &v));
        let terms = [t(&t(&x, &y, &z), &w, &v), t(&z, &t(&y, &x, &w), &v), t(&z, &w, &t(&x, &y, &w))];
        let rhs: Vec<Q> = (0..2).map(|i| terms.iter().fold(q(0), |acc, p| acc + &p[i])).collect();
        failed |= lhs != rhs;
    }
    assert!(failed);
}

#[test]
fn d_operators() {
    let sp = jt::<Q>("sp2");
    let one = vec![q(1)];
    let (x1, x2) = (e::<Q>(2, 0), e::<Q>(2, 1));
    let (big, small) = sp.d_ops(&one, &one, &x1, &x2);
    assert!(big.is_zero());
    assert_eq!(small.apply(&join(&sp, &[q(0)], &x1)), join(&sp, &[q(0)], &[q(-1), q(0)]));
    assert_eq!(small.apply(&join(&sp, &one, &[q(0), q(0)])), vec![q(0); 3]);
    assert!(is_derivation(&small, &sp.diamond()).unwrap());
}

#[test]
fn derivation_suite() {
    let r = jt::<Q>("sp2").check_theorem_jt();
    assert!(r.passed(), "{r:?}");
    let bad = sp2_like(1, -1, -1).check_theorem_jt();
    assert!(!bad.passed());
    assert_eq!(bad.check("small_d_exchange").unwrap().status, Status::Fail);
}

#[test]
fn super_variant() {
    let s = jt::<Q>("osp-jt");
    assert_eq!(s.sign, Sign::Minus);
    assert!(s.check_jt_axioms().passed());
    let r = s.check_theorem_jt();
    assert!(r.passed(), "{r:?}");
    assert!(r.check("small_d_skew").is_some());
}

#[test]
fn to_fkts_recovers_the_plane() {
    let u = jt::<Q>("sp2").to_fkts().unwrap();
    let b = fkts::<Q>("fkts-b");
    assert_eq!(u.triple, b.triple);
    assert_eq!((u.epsilon, u.delta), (Sign::Plus, Sign::Plus));
    assert!(u.check_fk().passed() && u.is_special());
    let o = jt::<Q>("osp-jt").to_fkts().unwrap();
    assert_eq!(o.triple, fkts::<Q>("osp").triple);
    assert_eq!((o.epsilon, o.delta), (Sign::Minus, Sign::Minus));
}

#[test]
fn from_special_fkts() {
    let s = JTernary::from_special_fkts(&fkts::<Q>("fkts-b")).unwrap();
    assert_eq!(s.nj(), 1);
    assert_eq!(s.ang(&e(2, 0), &e(2, 1)), vec![q(1)]);
    assert!(s.compare_via_action(&jt("sp2")).is_ok());
    let o = JTernary::from_special_fkts(&fkts::<Q>("osp")).unwrap();
    assert_eq!((o.nj(), o.sign), (1, Sign::Minus));
    assert_eq!(o.ang(&[q(1)], &[q(1)]), vec![q(2)]);
    assert!(o.compare_via_action(&jt("osp-jt")).is_ok());
    let z = JTernary::from_special_fkts(&fkts::<Q>("zero-2")).unwrap();
    assert_eq!(z.nj(), 1);
    assert!(z.angle.is_zero() && z.triple.is_zero());
    assert!(JTernary::from_special_fkts(&fkts::<Q>("jts")).is_err());
}

#[test]
fn roundtrips() {
    let sp = jt::<Q>("sp2");
    let back = JTernary::from_special_fkts(&sp.to_fkts().unwrap()).unwrap();
    assert!(sp.compare_via_action(&back).is_ok());
    for name in ["fkts-b", "osp", "zero-2"] {
        let u = fkts::<Q>(name);
        let again = JTernary::from_special_fkts(&u).unwrap().to_fkts().unwrap();
        assert_eq!(again.triple, u.triple, "{name}");
    }
}

#[test]
fn triple_from_operators() {
    for name in ["sp2", "osp-jt"] {
        let s = jt::<Q>(name);
        let nj = s.nj();
        let nt = s.nt();
        let d_t = |i: usize, j: usize| s.small_d(&e(nt, i), &e(nt, j)).block(nj, nj, nt, nt);
        assert_eq!(triple_from_graded(nt, d_t, &s.angle, &s.action).unwrap(), s.triple, "{name}");
    }
    let zero = triple_from_graded(2, |_, _| Matrix::<Q>::zeros(2, 2), &BilinearTensor::zeros(2, 2, 1), &BilinearTensor::zeros(1, 2, 2)).unwrap();
    assert!(zero.is_zero());
}

#[test]
fn d_symmetric_and_module_identity() {
    let s = jt::<Q>("sp2");
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                let (xv, yv, zv) = (e::<Q>(2, x), e::<Q>(2, y), e::<Q>(2, z));
                let d = s.small_d(&xv, &yv).apply(&join(&s, &[q(0)], &zv));
                let mut sum = s.tri(&xv, &yv, &zv);
                for (a, b) in sum.iter_mut().zip(s.tri(&yv, &xv, &zv)) {
                    *a = -(a.clone() + &b);
                }
                assert_eq!(d[1..].to_vec(), sum);
            }
        }
    }
}

#[test]
fn jordan_algebra_checks() {
    let j = JordanAlgebra::<Q>::scalars();
    assert!(j.check().passed());
    // A non-commutative product is caught.
    let mut p = BilinearTensor::<Q>::zeros(2, 2, 2);
    p.set(0, 0, 0, q(1));
    p.set(0, 1, 1, q(1));
    p.set(1, 0, 1, q(1));
    p.set(1, 1, 0, q(1));
    p.set(0, 1, 0, q(1));
    let bad = JordanAlgebra::new(BasedSpace::numbered("a", 2), p, e(2, 0)).unwrap();
    assert_eq!(bad.check().check("commutative").unwrap().status, Status::Fail);
}
