//! Jordan algebras with a special module, J-ternary algebras and their
//! `(-1)` variant.

use serde_json::Value;
use thiserror::Error;

use crate::fkts::{Fkts, FktsError};
use crate::linalg::{axpy, unit_vec, vec_add, vec_scale, vec_sub, zero_vec, Matrix, SpanBasis, Vector};
use crate::report::{sweep, sweep_matrices, Check, Report};
use crate::scalars::{q, Scalar, Sign};
use crate::tensor::{derivation_defect, BasedSpace, BilinearTensor, TensorError, TrilinearTensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JternaryError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Fkts(#[from] FktsError),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

fn half<S: Scalar>() -> S {
    S::from_rational(q(1, 2))
}

/// A unital commutative algebra, expected to satisfy the Jordan identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanAlgebra<S> {
    pub space: BasedSpace,
    pub product: BilinearTensor<S>,
    pub unit: Vector<S>,
}

impl<S: Scalar> JordanAlgebra<S> {
    pub fn new(space: BasedSpace, product: BilinearTensor<S>, unit: Vector<S>) -> Result<Self, JternaryError> {
        let n = space.dim();
        if product.shape() != (n, n, n) {
            return Err(TensorError::DimensionMismatch { expected: n, found: product.shape().0 }.into());
        }
        if unit.len() != n {
            return Err(TensorError::DimensionMismatch { expected: n, found: unit.len() }.into());
        }
        Ok(JordanAlgebra { space, product, unit })
    }

    /// The one-dimensional algebra `F·1`.
    pub fn scalars() -> Self {
        let space = BasedSpace::new(vec!["1".into()]).expect("single label");
        let product = BilinearTensor::from_fn(1, 1, 1, |_, _| vec![S::one()]);
        JordanAlgebra { space, product, unit: vec![S::one()] }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn mul(&self, a: &[S], b: &[S]) -> Vector<S> {
        self.product.eval(a, b)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> JordanAlgebra<T> {
        JordanAlgebra { space: self.space.clone(), product: self.product.map(&f), unit: self.unit.iter().map(f).collect() }
    }

    pub fn check(&self) -> Report {
        let n = self.dim();
        let e = |i| unit_vec::<S>(n, i);
        let mut r = Report::new("jordan");
        r.push(Check::from_sweep(
            "commutative",
            sweep(&[n, n], |t| (self.product.basis(t[0], t[1]).to_vec(), self.product.basis(t[1], t[0]).to_vec())),
        ));
        r.push(Check::from_sweep("unit", sweep(&[n], |t| (self.mul(&self.unit, &e(t[0])), e(t[0])))));
        // fully linearized Jordan identity
        r.push(Check::from_sweep(
            "jordan_identity",
            sweep(&[n; 4], |t| {
                let (a, b, c, d) = (e(t[0]), e(t[1]), e(t[2]), e(t[3]));
                let m = |x: &[S], y: &[S]| self.mul(x, y);
                let (ab, bc, ca) = (m(&a, &b), m(&b, &c), m(&c, &a));
                let lhs = vec_add(&vec_add(&m(&m(&ab, &d), &c), &m(&m(&bc, &d), &a)), &m(&m(&ca, &d), &b));
                let rhs = vec_add(&vec_add(&m(&ab, &m(&d, &c)), &m(&bc, &m(&d, &a))), &m(&ca, &m(&d, &b)));
                (lhs, rhs)
            }),
        ));
        r
    }
}

/// A pair `(J, T)` with action `a•x`, form `⟨x|y⟩` and triple `⟨x,y,z⟩`.
/// `sign = Minus` selects the `(-1)` axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JTernary<S> {
    pub j: JordanAlgebra<S>,
    pub t: BasedSpace,
    pub action: BilinearTensor<S>,
    pub angle: BilinearTensor<S>,
    pub triple: TrilinearTensor<S>,
    pub sign: Sign,
}

impl<S: Scalar> JTernary<S> {
    pub fn new(
        j: JordanAlgebra<S>,
        t: BasedSpace,
        action: BilinearTensor<S>,
        angle: BilinearTensor<S>,
        triple: TrilinearTensor<S>,
        sign: Sign,
    ) -> Result<Self, JternaryError> {
        let (nj, nt) = (j.dim(), t.dim());
        let mismatch = |e, f| JternaryError::Tensor(TensorError::DimensionMismatch { expected: e, found: f });
        if action.shape() != (nj, nt, nt) {
            return Err(mismatch(nt, action.shape().2));
        }
        if angle.shape() != (nt, nt, nj) {
            return Err(mismatch(nj, angle.shape().2));
        }
        if triple.dims() != [nt; 3] || triple.out_dim() != nt {
            return Err(mismatch(nt, triple.out_dim()));
        }
        Ok(JTernary { j, t, action, angle, triple, sign })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> JTernary<T> {
        JTernary {
            j: self.j.map(&f),
            t: self.t.clone(),
            action: self.action.map(&f),
            angle: self.angle.map(&f),
            triple: self.triple.map(&f),
            sign: self.sign,
        }
    }

    pub fn nj(&self) -> usize {
        self.j.dim()
    }

    pub fn nt(&self) -> usize {
        self.t.dim()
    }

    fn ej(&self, i: usize) -> Vector<S> {
        unit_vec(self.nj(), i)
    }

    fn et(&self, i: usize) -> Vector<S> {
        unit_vec(self.nt(), i)
    }

    pub fn act(&self, a: &[S], x: &[S]) -> Vector<S> {
        self.action.eval(a, x)
    }

    pub fn ang(&self, x: &[S], y: &[S]) -> Vector<S> {
        self.angle.eval(x, y)
    }

    pub fn tri(&self, x: &[S], y: &[S], z: &[S]) -> Vector<S> {
        self.triple.eval(x, y, z)
    }

    /// Module and form invariants: unital special module and the symmetry
    /// type of the form.
    pub fn check_structure(&self) -> Report {
        let (nj, nt) = (self.nj(), self.nt());
        let mut r = self.j.check();
        r.subject = "jternary.structure".into();
        r.push(Check::from_sweep("unit_action", sweep(&[nt], |t| (self.act(&self.j.unit, &self.et(t[0])), self.et(t[0])))));
        r.push(Check::from_sweep(
            "special_module",
            sweep(&[nj, nj, nt], |t| {
                let (a, b, x) = (self.ej(t[0]), self.ej(t[1]), self.et(t[2]));
                let lhs = self.act(&self.j.mul(&a, &b), &x);
                let sum = vec_add(&self.act(&a, &self.act(&b, &x)), &self.act(&b, &self.act(&a, &x)));
                (lhs, vec_scale(&half(), &sum))
            }),
        ));
        let s: S = -self.sign.scalar::<S>();
        let name = if self.sign == Sign::Plus { "angle_skew" } else { "angle_symmetric" };
        r.push(Check::from_sweep(
            name,
            sweep(&[nt, nt], |t| {
                (self.angle.basis(t[0], t[1]).to_vec(), vec_scale(&s, self.angle.basis(t[1], t[0])))
            }),
        ));
        r
    }

    /// The six defining axioms (or their `(-1)` forms), preceded by the
    /// structural invariants.
    pub fn check_jt_axioms(&self) -> Report {
        let (nj, nt) = (self.nj(), self.nt());
        let plus = self.sign == Sign::Plus;
        let sg: S = self.sign.scalar();
        let mut r = self.check_structure();
        r.subject = "jternary".into();
        r.push(Check::from_sweep(
            "jt1",
            sweep(&[nj, nt, nt], |t| {
                let (a, x, y) = (self.ej(t[0]), self.et(t[1]), self.et(t[2]));
                let lhs = self.j.mul(&a, &self.ang(&x, &y));
                let rhs = vec_add(&self.ang(&self.act(&a, &x), &y), &self.ang(&x, &self.act(&a, &y)));
                (lhs, vec_scale(&half(), &rhs))
            }),
        ));
        r.push(Check::from_sweep(
            "jt2",
            sweep(&[nj, nt, nt, nt], |t| {
                let (a, x, y, z) = (self.ej(t[0]), self.et(t[1]), self.et(t[2]), self.et(t[3]));
                let lhs = self.act(&a, self.triple.basis(t[1], t[2], t[3]));
                let mut rhs = self.tri(&self.act(&a, &x), &y, &z);
                axpy(&mut rhs, &-S::one(), &self.tri(&x, &self.act(&a, &y), &z));
                axpy(&mut rhs, &S::one(), &self.tri(&x, &y, &self.act(&a, &z)));
                (lhs, rhs)
            }),
        ));
        r.push(Check::from_sweep(
            "jt3",
            sweep(&[nt; 3], |t| {
                let (x, y, z) = (self.et(t[0]), self.et(t[1]), self.et(t[2]));
                let xyz = self.tri(&x, &y, &z);
                let zyx = self.tri(&z, &y, &x);
                let xz_y = self.act(&self.ang(&x, &z), &y);
                if plus {
                    (xyz, vec_sub(&zyx, &xz_y))
                } else {
                    (vec_add(&xyz, &zyx), xz_y)
                }
            }),
        ));
        r.push(Check::from_sweep(
            "jt4",
            sweep(&[nt; 3], |t| {
                let (x, y, z) = (self.et(t[0]), self.et(t[1]), self.et(t[2]));
                let xyz = self.tri(&x, &y, &z);
                let yxz = self.tri(&y, &x, &z);
                let xy_z = self.act(&self.ang(&x, &y), &z);
                if plus {
                    (xyz, vec_add(&yxz, &xy_z))
                } else {
                    (vec_add(&xyz, &yxz), xy_z)
                }
            }),
        ));
        r.push(Check::from_sweep(
            "jt5",
            sweep(&[nt; 4], |t| {
                let (x, y, z, w) = (self.et(t[0]), self.et(t[1]), self.et(t[2]), self.et(t[3]));
                let lhs = vec_add(&self.ang(&self.tri(&x, &y, &z), &w), &self.ang(&z, &self.tri(&x, &y, &w)));
                let rhs = self.ang(&x, &self.act(&self.ang(&z, &w), &y));
                (lhs, rhs)
            }),
        ));
        r.push(Check::from_sweep(
            "jt6",
            sweep(&[nt; 5], |t| {
                let (x, y, z, w, v) = (self.et(t[0]), self.et(t[1]), self.et(t[2]), self.et(t[3]), self.et(t[4]));
                let lhs = self.tri(&x, &y, &self.tri(&z, &w, &v));
                let mut rhs = self.tri(&self.tri(&x, &y, &z), &w, &v);
                axpy(&mut rhs, &sg, &self.tri(&z, &self.tri(&y, &x, &w), &v));
                axpy(&mut rhs, &S::one(), &self.tri(&z, &w, &self.tri(&x, &y, &v)));
                (lhs, rhs)
            }),
        ));
        r
    }

    /// Dimension of `J ⊕ T`; `J` coordinates come first.
    pub fn sum_dim(&self) -> usize {
        self.nj() + self.nt()
    }

    fn join(&self, a: &[S], x: &[S]) -> Vector<S> {
        let mut v = a.to_vec();
        v.extend_from_slice(x);
        v
    }

    fn split<'v>(&self, v: &'v [S]) -> (&'v [S], &'v [S]) {
        v.split_at(self.nj())
    }

    /// `D_{a,b}` on `J ⊕ T`.
    pub fn big_d(&self, a: &[S], b: &[S]) -> Matrix<S> {
        let (nj, n) = (self.nj(), self.sum_dim());
        let cols: Vec<_> = (0..n)
            .map(|k| {
                if k < nj {
                    let c = self.ej(k);
                    let v = vec_sub(&self.j.mul(a, &self.j.mul(b, &c)), &self.j.mul(b, &self.j.mul(a, &c)));
                    self.join(&v, &zero_vec(self.nt()))
                } else {
                    let x = self.et(k - nj);
                    let v = vec_sub(&self.act(a, &self.act(b, &x)), &self.act(b, &self.act(a, &x)));
                    self.join(&zero_vec(nj), &vec_scale(&S::from_rational(q(1, 4)), &v))
                }
            })
            .collect();
        Matrix::from_columns(n, &cols)
    }

    /// `d_{x,y}` on `J ⊕ T`.
    pub fn small_d(&self, x: &[S], y: &[S]) -> Matrix<S> {
        let (nj, n) = (self.nj(), self.sum_dim());
        let two = S::from_i64(2);
        let cols: Vec<_> = (0..n)
            .map(|k| {
                if k < nj {
                    let a = self.ej(k);
                    let v = vec_sub(&self.ang(&self.act(&a, x), y), &self.ang(x, &self.act(&a, y)));
                    self.join(&v, &zero_vec(self.nt()))
                } else {
                    let z = self.et(k - nj);
                    let mut v = self.act(&self.ang(x, y), &z);
                    axpy(&mut v, &-two.clone(), &self.tri(x, y, &z));
                    self.join(&zero_vec(nj), &v)
                }
            })
            .collect();
        Matrix::from_columns(n, &cols)
    }

    pub fn d_ops(&self, a: &[S], b: &[S], x: &[S], y: &[S]) -> (Matrix<S>, Matrix<S>) {
        (self.big_d(a, b), self.small_d(x, y))
    }

    /// `(a+x)⋄(b+y) = (a·b + ⟨x|y⟩) + (a•y + b•x)` on `J ⊕ T`.
    pub fn diamond(&self) -> BilinearTensor<S> {
        let n = self.sum_dim();
        BilinearTensor::from_fn(n, n, n, |i, k| {
            let (vi, vk) = (unit_vec::<S>(n, i), unit_vec::<S>(n, k));
            let ((a, x), (b, y)) = (self.split(&vi), self.split(&vk));
            let jpart = vec_add(&self.j.mul(a, b), &self.ang(x, y));
            let tpart = vec_add(&self.act(a, y), &self.act(b, x));
            self.join(&jpart, &tpart)
        })
    }

    /// The derivation and compatibility suite for the operators `D`, `d`.
    /// Runs in full even when the axioms fail; the axiom outcome is reported
    /// as the first line.
    pub fn check_theorem_jt(&self) -> Report {
        let (nj, nt) = (self.nj(), self.nt());
        let mut r = Report::new("jternary.derivations");
        r.push(Check::from_bool("jt_axioms", self.check_jt_axioms().passed()));
        let dia = self.diamond();
        fn first_defect<S: Scalar>(
            dia: &BilinearTensor<S>,
            ops: impl Iterator<Item = (Vec<usize>, Matrix<S>)>,
        ) -> Option<crate::report::Counterexample> {
            ops.into_iter().find_map(|(idx, m)| {
                derivation_defect(&m, dia).expect("square operator").map(|mut c| {
                    c.tuple.splice(0..0, idx);
                    c
                })
            })
        }
        let big = (0..nj * nj).map(|p| (vec![p / nj, p % nj], self.big_d(&self.ej(p / nj), &self.ej(p % nj))));
        r.push(Check::from_sweep("big_d_derivation", first_defect(&dia, big)));
        let small = (0..nt * nt).map(|p| (vec![p / nt, p % nt], self.small_d(&self.et(p / nt), &self.et(p % nt))));
        r.push(Check::from_sweep("small_d_derivation", first_defect(&dia, small)));
        r.push(Check::from_sweep(
            "big_d_cyclic",
            sweep_matrices(&[nj; 3], |t| {
                let (a, b, c) = (self.ej(t[0]), self.ej(t[1]), self.ej(t[2]));
                let m = |x: &[S], y: &[S]| self.j.mul(x, y);
                let lhs = self.big_d(&m(&a, &b), &c).add(&self.big_d(&m(&b, &c), &a)).add(&self.big_d(&m(&c, &a), &b));
                (lhs, Matrix::zeros(nj + nt, nj + nt))
            }),
        ));
        r.push(Check::from_sweep(
            "big_d_angle",
            sweep_matrices(&[nj, nt, nt], |t| {
                let (a, x, y) = (self.ej(t[0]), self.et(t[1]), self.et(t[2]));
                let lhs = self.big_d(&a, &self.ang(&x, &y)).scale(&S::from_i64(4));
                let rhs = self.small_d(&x, &self.act(&a, &y)).sub(&self.small_d(&self.act(&a, &x), &y));
                (lhs, rhs)
            }),
        ));
        r.push(Check::from_sweep(
            "angle_action",
            sweep(&[nj, nt, nt], |t| {
                let (a, x, y) = (self.ej(t[0]), self.et(t[1]), self.et(t[2]));
                let lhs = vec_scale(&S::from_i64(2), &self.j.mul(&a, &self.ang(&x, &y)));
                (lhs, vec_add(&self.ang(&self.act(&a, &x), &y), &self.ang(&x, &self.act(&a, &y))))
            }),
        ));
        let plus = self.sign == Sign::Plus;
        let two = S::from_i64(2);
        r.push(Check::from_sweep(
            "small_d_exchange",
            sweep(&[nt; 3], |t| {
                let (x, y, z) = (self.et(t[0]), self.et(t[1]), self.et(t[2]));
                let dz = |p: &[S], q: &[S], w: &[S]| self.split(&self.small_d(p, q).apply(&self.join(&zero_vec(nj), w))).1.to_vec();
                let f = |p: &[S], q: &[S], w: &[S]| self.act(&self.ang(p, q), w);
                if plus {
                    let lhs = vec_sub(&dz(&x, &y, &z), &dz(&z, &y, &x));
                    let mut rhs = vec_sub(&f(&x, &y, &z), &f(&z, &y, &x));
                    axpy(&mut rhs, &two, &f(&x, &z, &y));
                    (lhs, rhs)
                } else {
                    let lhs = vec_sub(&dz(&x, &y, &z), &dz(&y, &z, &x));
                    let mut rhs = vec_add(&f(&x, &y, &z), &f(&y, &z, &x));
                    axpy(&mut rhs, &-two.clone(), &f(&z, &x, &y));
                    (lhs, rhs)
                }
            }),
        ));
        let s: S = self.sign.scalar();
        r.push(Check::from_sweep(
            if plus { "small_d_symmetric" } else { "small_d_skew" },
            sweep_matrices(&[nt, nt], |t| {
                let (x, y) = (self.et(t[0]), self.et(t[1]));
                (self.small_d(&x, &y), self.small_d(&y, &x).scale(&s))
            }),
        ));
        r.push(Check::from_sweep(
            "big_d_on_module",
            sweep(&[nj, nj, nt], |t| {
                let (a, b, x) = (self.ej(t[0]), self.ej(t[1]), self.et(t[2]));
                let lhs = self.split(&self.big_d(&a, &b).apply(&self.join(&zero_vec(nj), &x))).1.to_vec();
                let rhs = vec_sub(&self.act(&a, &self.act(&b, &x)), &self.act(&b, &self.act(&a, &x)));
                (vec_scale(&S::from_i64(4), &lhs), rhs)
            }),
        ));
        r
    }

    /// `T` with `xyz = ⟨x,y,z⟩` as an `(s,s)` system, `s` the sign.
    pub fn to_fkts(&self) -> Result<Fkts<S>, JternaryError> {
        if !self.check_jt_axioms().passed() {
            return Err(JternaryError::Precondition("J-ternary axioms fail".into()));
        }
        Ok(Fkts::new(self.t.clone(), self.sign, self.sign, self.triple.clone())?)
    }

    /// `J = F·id + span K(U,U)` inside `End(U)` with `f·g = ½(fg+gf)`,
    /// `⟨x|y⟩ = -εK(x,y)`, `⟨x,y,z⟩ = xyz` and sign `ε`.
    pub fn from_special_fkts(u: &Fkts<S>) -> Result<Self, JternaryError> {
        if u.epsilon != u.delta {
            return Err(JternaryError::Precondition("signs differ".into()));
        }
        if !u.is_special() {
            return Err(JternaryError::Precondition("system is not special".into()));
        }
        let n = u.dim();
        let mut span = SpanBasis::new(n * n);
        span.insert(Matrix::<S>::identity(n).flat());
        let ks = u.k_basis_ops();
        for k in &ks {
            span.insert(k.flat());
        }
        let elems: Vec<Matrix<S>> = span.elems().iter().map(|v| Matrix::from_flat(n, n, v.clone())).collect();
        let nj = elems.len();
        let coords = |m: &Matrix<S>| {
            span.coords(m.flat()).ok_or_else(|| JternaryError::Precondition("span of K is not closed".into()))
        };
        let mut product = BilinearTensor::zeros(nj, nj, nj);
        for i in 0..nj {
            for k in 0..nj {
                let c = coords(&elems[i].anticommutator(&elems[k]).scale(&half()))?;
                for (l, v) in c.into_iter().enumerate() {
                    product.set(i, k, l, v);
                }
            }
        }
        let labels = std::iter::once("id".to_string()).chain((1..nj).map(|i| format!("K[{i}]"))).collect();
        let j = JordanAlgebra::new(BasedSpace::new(labels)?, product, unit_vec(nj, 0))?;
        let action = BilinearTensor::from_fn(nj, n, n, |i, k| elems[i].column(k));
        let s: S = -u.epsilon.scalar::<S>();
        let mut angle = BilinearTensor::zeros(n, n, nj);
        for x in 0..n {
            for y in 0..n {
                let c = coords(&ks[x * n + y].scale(&s))?;
                for (l, v) in c.into_iter().enumerate() {
                    angle.set(x, y, l, v);
                }
            }
        }
        JTernary::new(j, u.space.clone(), action, angle, u.triple.clone(), u.epsilon)
    }

    /// Checks that `other` has the same `T` data as `self` once `J` is
    /// identified with `other.j` through the action on `T`. Returns the
    /// first discrepancy.
    pub fn compare_via_action(&self, other: &JTernary<S>) -> Result<(), String> {
        let (nj, nt) = (self.nj(), self.nt());
        if nt != other.nt() {
            return Err(format!("T dimensions differ: {nt} vs {}", other.nt()));
        }
        if self.triple != other.triple {
            return Err("triple products differ".into());
        }
        let lam = |s: &JTernary<S>, a: &[S]| s.action.left_mult(a).flat().to_vec();
        let target = SpanBasis::from_vectors(nt * nt, (0..other.nj()).map(|i| lam(other, &other.ej(i))).collect::<Vec<_>>().iter());
        if target.dim() != other.nj() {
            return Err("action of the second J is not faithful".into());
        }
        let mut phi = Vec::with_capacity(nj);
        for i in 0..nj {
            match target.coords(&lam(self, &self.ej(i))) {
                Some(c) => phi.push(c),
                None => return Err(format!("J basis element {i} has no image")),
            }
        }
        let map = |a: &[S]| {
            let mut out = zero_vec(other.nj());
            for (i, c) in a.iter().enumerate() {
                axpy(&mut out, c, &phi[i]);
            }
            out
        };
        if Matrix::from_columns(other.nj(), &phi).rank() != other.nj() || nj != other.nj() {
            return Err("J dimensions differ".into());
        }
        if map(&self.j.unit) != other.j.unit {
            return Err("units differ".into());
        }
        for a in 0..nj {
            for b in 0..nj {
                if map(self.j.product.basis(a, b)) != other.j.mul(&phi[a], &phi[b]) {
                    return Err(format!("Jordan products differ at ({a},{b})"));
                }
            }
        }
        for x in 0..nt {
            for y in 0..nt {
                if map(self.angle.basis(x, y)) != other.angle.basis(x, y) {
                    return Err(format!("forms differ at ({x},{y})"));
                }
            }
        }
        Ok(())
    }

    /// Report data summarizing the system.
    pub fn summary(&self) -> Value {
        serde_json::json!({ "dim_j": self.nj(), "dim_t": self.nt(), "sign": self.sign.value() })
    }
}

/// `⟨x,y,z⟩ = ½(-d_{x,y}(z) + ⟨x|y⟩•z)`, where `d_t(i, j)` is the matrix of
/// `d_{e_i,e_j}` restricted to `T`.
pub fn triple_from_graded<S: Scalar>(
    nt: usize,
    d_t: impl Fn(usize, usize) -> Matrix<S>,
    angle: &BilinearTensor<S>,
    action: &BilinearTensor<S>,
) -> Result<TrilinearTensor<S>, TensorError> {
    let (_, _, nj) = angle.shape();
    if angle.shape() != (nt, nt, nj) {
        return Err(TensorError::DimensionMismatch { expected: nt, found: angle.shape().0 });
    }
    if action.shape() != (nj, nt, nt) {
        return Err(TensorError::DimensionMismatch { expected: nt, found: action.shape().1 });
    }
    let mut ops = Vec::with_capacity(nt * nt);
    for i in 0..nt {
        for j in 0..nt {
            let m = d_t(i, j);
            if m.rows() != nt || m.cols() != nt {
                return Err(TensorError::DimensionMismatch { expected: nt, found: m.rows() });
            }
            ops.push(m);
        }
    }
    Ok(TrilinearTensor::endo(nt, |i, j, k| {
        let mut v = action.eval(angle.basis(i, j), &unit_vec(nt, k));
        axpy(&mut v, &-S::one(), &ops[i * nt + j].column(k));
        vec_scale(&half(), &v)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    type Q = Rational;

    fn sp2() -> JTernary<Q> {
        let s = |x: usize, y: usize| -> i64 {
            match (x, y) {
                (0, 1) => 1,
                (1, 0) => -1,
                _ => 0,
            }
        };
        let j = JordanAlgebra::scalars();
        let action = BilinearTensor::from_fn(1, 2, 2, |_, k| unit_vec(2, k));
        let angle = BilinearTensor::from_fn(2, 2, 1, |x, y| vec![Q::from_i64(s(x, y))]);
        let triple = TrilinearTensor::endo(2, |x, y, z| {
            let mut v = vec_scale(&Q::from_i64(s(x, y)), &unit_vec(2, z));
            axpy(&mut v, &Q::from_i64(-s(x, z)), &unit_vec(2, y));
            v
        });
        JTernary::new(j, BasedSpace::numbered("x", 2), action, angle, triple, Sign::Plus).unwrap()
    }

    #[test]
    fn sp2_axioms_and_operators() {
        let s = sp2();
        assert!(s.check_jt_axioms().passed());
        assert!(s.check_theorem_jt().passed());
        let (x1, x2) = (unit_vec::<Q>(2, 0), unit_vec::<Q>(2, 1));
        let d = s.small_d(&x1, &x2);
        assert_eq!(d.apply(&[Q::from_i64(0), Q::from_i64(1), Q::from_i64(0)]), vec![Q::from_i64(0), Q::from_i64(-1), Q::from_i64(0)]);
        assert!(s.big_d(&[Q::from_i64(1)], &[Q::from_i64(1)]).is_zero());
    }

    #[test]
    fn graded_triple_inverts_small_d() {
        let s = sp2();
        let t = triple_from_graded(
            2,
            |i, j| s.small_d(&s.et(i), &s.et(j)).block(1, 1, 2, 2),
            &s.angle,
            &s.action,
        )
        .unwrap();
        assert_eq!(t, s.triple);
    }
}
