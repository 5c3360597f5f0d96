mod common;

use common::*;
use triplekit::dicyclic::{k_span, DicyclicError, DicyclicTernary};
use triplekit::jternary::{JTernary, JordanAlgebra};
use triplekit::liebuild::{Dic3Action, LieAlgebra};
use triplekit::linalg::{Matrix, Vector};
use triplekit::report::Status;
use triplekit::scalars::{q as frac, Cyc, Scalar, Sign};
use triplekit::tensor::{BasedSpace, BilinearTensor, TrilinearTensor};

fn v(xs: &[i64]) -> Vector<Q> {
    xs.iter().map(|&x| q(x)).collect()
}

#[test]
fn fixture_passes_and_equals_the_construction() {
    let a = dic::<Q>("dic-sp2");
    assert!(a.check_d_axioms().passed());
    let built = DicyclicTernary::from_jternary(&jt::<Q>("sp2")).unwrap();
    assert!(built.compare(&a).is_ok());
    assert!(built.check_d_axioms().passed());
}

#[test]
fn zero_algebra_passes() {
    assert!(DicyclicTernary::<Q>::zero(3).check_d_axioms().passed());
}

#[test]
fn identity_involution_breaks_the_axioms_not_the_structure() {
    let mut a = dic::<Q>("dic-sp2");
    a.bar = Matrix::identity(3);
    assert!(a.check_structure().passed());
    let r = a.check_d_axioms();
    assert!(!r.passed());
    assert_eq!(r.check("d1").unwrap().status, Status::Fail);
}

#[test]
fn products_from_the_symplectic_plane() {
    let a = dic::<Q>("dic-sp2");
    let (one, x1, x2) = (v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1]));
    assert_eq!(a.mul(&one, &x1), v(&[0, -1, 0]));
    assert_eq!(a.tri(&one, &one, &one), v(&[-2, 0, 0]));
    assert_eq!(a.mul(&x1, &x2), v(&[-2, 0, 0]));
    assert_eq!(a.tri(&x1, &x2, &x1), v(&[0, 2, 0]));
    assert!(a.mul(&one, &one).iter().all(Scalar::is_zero));
}

#[test]
fn unit_conditions() {
    let a = dic::<Q>("dic-sp2");
    assert!(a.check_unit(&v(&[1, 0, 0])).unwrap());
    assert!(!a.check_unit(&v(&[2, 0, 0])).unwrap());
    assert!(matches!(a.check_unit(&v(&[0, 1, 0])), Err(DicyclicError::NotInA0)));
    let r = a.unit_report(&v(&[1, 0, 0])).unwrap();
    assert!(r.passed());
    assert!(r.check("extended.ea").is_some());
    let z = DicyclicTernary::<Q>::zero(2);
    assert!(!z.check_unit(&v(&[0, 0])).unwrap());
}

#[test]
fn find_unit_scans_in_order() {
    let a = dic::<Q>("dic-sp2");
    let (a0, _) = a.graded_bases();
    assert_eq!(a.find_unit(&a0), Some(v(&[1, 0, 0])));
    let z = DicyclicTernary::<Q>::zero(2);
    assert_eq!(z.find_unit(&[v(&[1, 0]), v(&[0, 1])]), None);
}

#[test]
fn unit_lemmas() {
    let a = dic::<Q>("dic-sp2");
    let r = a.check_unit_lemmas(&v(&[1, 0, 0])).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn back_to_j_ternary() {
    let a = dic::<Q>("dic-sp2");
    let s = a.to_jternary(&v(&[1, 0, 0])).unwrap();
    let sp = jt::<Q>("sp2");
    assert_eq!(s.j.product, sp.j.product);
    assert_eq!(s.action, sp.action);
    assert_eq!(s.angle, sp.angle);
    assert_eq!(s.triple, sp.triple);
    assert!(s.check_jt_axioms().passed());
}

#[test]
fn trivial_system_roundtrip() {
    let t = JTernary::new(
        JordanAlgebra::<Q>::scalars(),
        BasedSpace::new(vec![]).unwrap(),
        BilinearTensor::zeros(1, 0, 0),
        BilinearTensor::zeros(0, 0, 1),
        TrilinearTensor::zeros([0; 3], 0),
        Sign::Plus,
    )
    .unwrap();
    let a = DicyclicTernary::from_jternary(&t).unwrap();
    let back = a.to_jternary(&[q(1)]).unwrap();
    assert_eq!(back.j.product, t.j.product);
    assert_eq!(back.nt(), 0);
}

#[test]
fn from_fkts_11_on_the_plane() {
    let u = fkts::<Q>("fkts-b");
    let a = DicyclicTernary::from_fkts_11(&u).unwrap();
    assert_eq!(a.dim(), 3);
    assert!(a.check_d_axioms().passed());
    // Coordinates: [M, x1, x2] with M the single K-basis matrix.
    let (mats, _) = k_span(&u);
    assert_eq!(mats.len(), 1);
    let id = Matrix::<Q>::identity(2);
    // Express id in the basis: id = c M.
    let c = if mats[0] == id { q(1) } else { assert_eq!(mats[0], id.neg()); q(-1) };
    let id_coord = vec![c.clone(), q(0), q(0)];
    let (x1, x2) = (v(&[0, 1, 0]), v(&[0, 0, 1]));
    // x1*x2 = -K(x1,x2) = id.
    assert_eq!(a.mul(&x1, &x2), id_coord);
    // {x1,x2,id} = K(x1,x2) = -id.
    let neg_id: Vector<Q> = id_coord.iter().map(|t| -t.clone()).collect();
    assert_eq!(a.tri(&x1, &x2, &id_coord), neg_id);
    // {id,id,x1} = x1.
    assert_eq!(a.tri(&id_coord, &id_coord, &x1), x1);
    // The unit conditions are even in e, so K(x1,x2) = -id passes as well
    // and is returned first when listed first.
    let k12: Vector<Q> = neg_id.clone();
    assert!(a.check_unit(&k12).unwrap() && a.check_unit(&id_coord).unwrap());
    assert_eq!(a.find_unit(&[k12.clone(), id_coord.clone()]), Some(k12.clone()));
    assert_eq!(a.tri(&id_coord, &id_coord, &id_coord), a.tri(&k12, &k12, &k12).iter().map(|t| -t.clone()).collect::<Vector<Q>>());
    // The recovered system is a rescaling λ·xyz of the plane (λ = ∓½ for
    // e = ±id); g = diag(λ, 1) has det g = λ and carries it onto the original.
    for (unit, lambda) in [(&id_coord, frac(-1, 2)), (&k12, frac(1, 2))] {
        let s = a.to_jternary(unit).unwrap();
        assert_eq!((s.nj(), s.nt()), (1, 2));
        let w = s.to_fkts().unwrap();
        assert_eq!(w.triple, u.triple.map(|c| lambda.clone() * c));
        let g = Matrix::from_rows(&[vec![lambda.clone(), q(0)], vec![q(0), q(1)]]);
        for (i, j, k) in (0..8).map(|t| (t >> 2, (t >> 1) & 1, t & 1)) {
            let lhs = g.apply(w.triple.basis(i, j, k));
            let rhs = u.triple.eval(&g.column(i), &g.column(j), &g.column(k));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn from_fkts_11_preconditions() {
    let z = DicyclicTernary::from_fkts_11(&fkts::<Q>("zero-2")).unwrap();
    assert_eq!(z.dim(), 2);
    assert!(z.star.is_zero() && z.triple.is_zero());
    assert!(DicyclicTernary::from_fkts_11(&fkts::<Q>("osp")).is_err());
}

#[test]
fn involution_on_constructed_algebras() {
    let a = DicyclicTernary::from_jternary(&jt::<Q>("sp2")).unwrap();
    let (a0, a1) = a.graded_bases();
    assert_eq!((a0.len(), a1.len()), (1, 2));
    let b = DicyclicTernary::from_fkts_11(&fkts::<Q>("fkts-b")).unwrap();
    let (b0, b1) = b.graded_bases();
    assert_eq!((b0.len(), b1.len()), (1, 2));
    assert!(b0.iter().all(|x| b.in_a0(x)) && b1.iter().all(|x| b.in_a1(x)));
}

fn sl2_with_dic3() -> (LieAlgebra<Cyc>, Dic3Action<Cyc>) {
    let g = LieAlgebra::<Cyc>::sl2();
    let c = |n: i64| Cyc::from_i64(n);
    let z = Cyc::zero();
    // θ: H -> -H, E -> -F, F -> -E; φ: H -> H, E -> w²E, F -> wF.
    let theta = Matrix::from_rows(&[vec![c(-1), z.clone(), z.clone()], vec![z.clone(), z.clone(), c(-1)], vec![z.clone(), c(-1), z.clone()]]);
    let w = Cyc::w();
    let phi = Matrix::from_rows(&[vec![c(1), z.clone(), z.clone()], vec![z.clone(), w.clone() * w.clone(), z.clone()], vec![z.clone(), z.clone(), w]]);
    (g, Dic3Action { theta, phi })
}

#[test]
fn extraction_from_sl2() {
    let (g, act) = sl2_with_dic3();
    act.verify(&g).unwrap();
    let a = DicyclicTernary::from_lie_with_dic3(&g, &act, None, None).unwrap();
    assert_eq!(a.dim(), 1);
    assert!(a.star.is_zero());
    // The eigenspace is spanned by F; {F,F,F} = -2F whatever the scaling.
    assert_eq!(a.tri(&[Cyc::one()], &[Cyc::one()], &[Cyc::one()]).len(), 1);
    let f = a.tri(&[Cyc::one()], &[Cyc::one()], &[Cyc::one()]);
    let explicit = DicyclicTernary::from_lie_with_dic3(&g, &act, Some(vec![e(3, 2)]), None).unwrap();
    assert_eq!(explicit.tri(&[Cyc::one()], &[Cyc::one()], &[Cyc::one()]), vec![Cyc::from_i64(-2)]);
    assert_eq!(a.bar, Matrix::scalar(1, Cyc::one()));
    assert!(!f[0].is_zero());
}

#[test]
fn extraction_rejects_bad_data() {
    let (g, act) = sl2_with_dic3();
    let not_auto = Dic3Action { theta: Matrix::scalar(3, Cyc::from_i64(2)), phi: act.phi.clone() };
    assert!(matches!(DicyclicTernary::from_lie_with_dic3(&g, &not_auto, None, None), Err(DicyclicError::Dic3(_))));
    let wrong_basis = Some(vec![e(3, 1)]);
    assert!(DicyclicTernary::from_lie_with_dic3(&g, &act, wrong_basis, None).is_err());
    let gq = LieAlgebra::<Q>::sl2();
    let actq = Dic3Action { theta: Matrix::identity(3), phi: Matrix::identity(3) };
    assert!(matches!(DicyclicTernary::from_lie_with_dic3(&gq, &actq, None, None), Err(DicyclicError::WrongScalarField(_))));
}
