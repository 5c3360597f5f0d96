//! `(ε,δ)` Freudenthal–Kantor triple systems.
//!
//! A value of [`Fkts`] is only a candidate: [`Fkts::check_fk`] decides
//! whether it is a genuine system.

use serde_json::Value;
use thiserror::Error;

use crate::linalg::{solve, unit_vec, Matrix, SpanBasis, Vector};
use crate::report::{sweep, sweep_matrices, vector_json, Check, Report};
use crate::scalars::{Scalar, Sign};
use crate::tensor::{triple_derivation_defect, BasedSpace, BilinearTensor, TensorError, TrilinearTensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FktsError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fkts<S> {
    pub space: BasedSpace,
    pub epsilon: Sign,
    pub delta: Sign,
    pub triple: TrilinearTensor<S>,
}

impl<S: Scalar> Fkts<S> {
    pub fn new(space: BasedSpace, epsilon: Sign, delta: Sign, triple: TrilinearTensor<S>) -> Result<Self, FktsError> {
        if !triple.is_endomorphic() || triple.out_dim() != space.dim() {
            return Err(TensorError::DimensionMismatch { expected: space.dim(), found: triple.out_dim() }.into());
        }
        Ok(Fkts { space, epsilon, delta, triple })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The same system over another scalar field.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Fkts<T> {
        Fkts { space: self.space.clone(), epsilon: self.epsilon, delta: self.delta, triple: self.triple.map(f) }
    }

    fn eps(&self) -> S {
        self.epsilon.scalar()
    }

    fn del(&self) -> S {
        self.delta.scalar()
    }

    fn unit(&self, i: usize) -> Vector<S> {
        unit_vec(self.dim(), i)
    }

    /// `L(x,y): z -> xyz`
    pub fn l_op(&self, x: &[S], y: &[S]) -> Matrix<S> {
        self.triple.op_xy(x, y)
    }

    /// `K(x,y): z -> xzy - δ yzx`
    pub fn k_op(&self, x: &[S], y: &[S]) -> Matrix<S> {
        let n = self.dim();
        let d = self.del();
        let cols: Vec<_> = (0..n)
            .map(|k| {
                let z = self.unit(k);
                let mut c = self.triple.eval(x, &z, y);
                crate::linalg::axpy(&mut c, &-d.clone(), &self.triple.eval(y, &z, x));
                c
            })
            .collect();
        Matrix::from_columns(n, &cols)
    }

    /// `S(x,y) = L(x,y) + εL(y,x)`, `T(x,y) = L(y,x) - εL(x,y)`
    pub fn st_ops(&self, x: &[S], y: &[S]) -> (Matrix<S>, Matrix<S>) {
        let (lxy, lyx) = (self.l_op(x, y), self.l_op(y, x));
        let mut s = lxy.clone();
        s.axpy(&self.eps(), &lyx);
        let mut t = lyx;
        t.axpy(&-self.eps(), &lxy);
        (s, t)
    }

    pub fn s_op(&self, x: &[S], y: &[S]) -> Matrix<S> {
        self.st_ops(x, y).0
    }

    pub fn t_op(&self, x: &[S], y: &[S]) -> Matrix<S> {
        self.st_ops(x, y).1
    }

    /// Runs an operator identity over all basis 4-tuples `(u,v,x,y)`.
    fn sweep4(&self, name: &str, f: impl Fn(&[S], &[S], &[S], &[S]) -> (Matrix<S>, Matrix<S>) + Sync) -> Check {
        let n = self.dim();
        Check::from_sweep(
            name,
            sweep_matrices(&[n; 4], |t| f(&self.unit(t[0]), &self.unit(t[1]), &self.unit(t[2]), &self.unit(t[3]))),
        )
    }

    /// The two defining identities, each with its first failing basis tuple.
    pub fn check_fk(&self) -> Report {
        let mut r = Report::new("fkts");
        r.push(self.check_fk1());
        r.push(self.check_fk2());
        r
    }

    /// `[L(u,v),L(x,y)] = L(L(u,v)x,y) + εL(x,L(v,u)y)`
    pub fn check_fk1(&self) -> Check {
        let e = self.eps();
        self.sweep4("fk1", |u, v, x, y| {
            let luv = self.l_op(u, v);
            let lhs = luv.commutator(&self.l_op(x, y));
            let mut rhs = self.l_op(&luv.apply(x), y);
            rhs.axpy(&e, &self.l_op(x, &self.l_op(v, u).apply(y)));
            (lhs, rhs)
        })
    }

    /// `K(K(u,v)x,y) = L(y,x)K(u,v) - εK(u,v)L(x,y)`
    pub fn check_fk2(&self) -> Check {
        let e = self.eps();
        self.sweep4("fk2", |u, v, x, y| {
            let kuv = self.k_op(u, v);
            let lhs = self.k_op(&kuv.apply(x), y);
            let mut rhs = self.l_op(y, x).mul(&kuv);
            rhs.axpy(&-e.clone(), &kuv.mul(&self.l_op(x, y)));
            (lhs, rhs)
        })
    }

    /// The five bracket identities between `S`, `T` and `L` implied by FK1.
    pub fn check_st_identities(&self) -> Report {
        let e = self.eps();
        let mut r = Report::new("fkts.st");
        r.push(self.sweep4("st.sl", |u, v, x, y| {
            let s = self.s_op(u, v);
            let lhs = s.commutator(&self.l_op(x, y));
            let rhs = self.l_op(&s.apply(x), y).add(&self.l_op(x, &s.apply(y)));
            (lhs, rhs)
        }));
        r.push(self.sweep4("st.tl", |u, v, x, y| {
            let t = self.t_op(u, v);
            let lhs = t.commutator(&self.l_op(x, y));
            let rhs = self.l_op(&t.apply(x), y).sub(&self.l_op(x, &t.apply(y)));
            (lhs, rhs)
        }));
        r.push(self.sweep4("st.st", |u, v, x, y| {
            let s = self.s_op(u, v);
            let lhs = s.commutator(&self.t_op(x, y));
            let rhs = self.t_op(&s.apply(x), y).add(&self.t_op(x, &s.apply(y)));
            (lhs, rhs)
        }));
        r.push(self.sweep4("st.ts", |u, v, x, y| {
            let t = self.t_op(u, v);
            let lhs = t.commutator(&self.s_op(x, y));
            let rhs = self.t_op(x, &t.apply(y)).sub(&self.t_op(&t.apply(x), y)).scale(&e);
            (lhs, rhs)
        }));
        r.push(self.sweep4("st.tt", |u, v, x, y| {
            let t = self.t_op(u, v);
            let lhs = t.commutator(&self.t_op(x, y));
            let rhs = self.s_op(x, &t.apply(y)).sub(&self.s_op(&t.apply(x), y)).scale(&e);
            (lhs, rhs)
        }));
        r
    }

    /// `S(x,y)` is a derivation of the triple product for every basis pair.
    pub fn check_s_derivation(&self) -> Check {
        let n = self.dim();
        let found = (0..n * n).find_map(|p| {
            let s = self.s_op(&self.unit(p / n), &self.unit(p % n));
            triple_derivation_defect(&s, &self.triple).map(|mut c| {
                c.tuple.splice(0..0, [p / n, p % n]);
                c
            })
        });
        Check::from_sweep("s_derivation", found)
    }

    /// `K(x,y) = εδL(y,x) - εL(x,y)` on all basis pairs.
    pub fn special_check(&self) -> Check {
        let n = self.dim();
        let (e, ed) = (self.eps(), self.eps() * &self.del());
        Check::from_sweep(
            "special",
            sweep_matrices(&[n, n], |t| {
                let (x, y) = (self.unit(t[0]), self.unit(t[1]));
                let mut rhs = self.l_op(&y, &x).scale(&ed);
                rhs.axpy(&-e.clone(), &self.l_op(&x, &y));
                (self.k_op(&x, &y), rhs)
            }),
        )
    }

    pub fn is_special(&self) -> bool {
        self.special_check().ok()
    }

    /// `K(e_i, e_j)` for all basis pairs, row-major in `(i, j)`.
    pub fn k_basis_ops(&self) -> Vec<Matrix<S>> {
        let n = self.dim();
        (0..n * n).map(|p| self.k_op(&self.unit(p / n), &self.unit(p % n))).collect()
    }

    /// Solves `id = Σ c_ij K(e_i, e_j)`. The witness is the solver's
    /// particular solution (free coefficients set to zero), indexed `i*n + j`.
    pub fn is_unitary(&self) -> (bool, Option<Vector<S>>) {
        let n = self.dim();
        if n == 0 {
            return (true, Some(Vec::new()));
        }
        let cols: Vec<Vector<S>> = self.k_basis_ops().iter().map(|m| m.flat().to_vec()).collect();
        let id = Matrix::<S>::identity(n);
        match solve(&cols, id.flat()) {
            Some(c) => (true, Some(c)),
            None => (false, None),
        }
    }

    /// Whether every `K(x,y)` is `b(x,y)·id`, returning the form `b`.
    pub fn is_balanced(&self) -> (bool, Option<BilinearTensor<S>>) {
        let n = self.dim();
        let mut b = BilinearTensor::zeros(n, n, 1);
        for i in 0..n {
            for j in 0..n {
                let k = self.k_op(&self.unit(i), &self.unit(j));
                let c = k.get(0, 0).clone();
                if k != Matrix::scalar(n, c.clone()) {
                    return (false, None);
                }
                b.set(i, j, 0, c);
            }
        }
        (true, Some(b))
    }

    fn precondition_special(&self, subject: &str) -> Result<Report, Report> {
        let mut r = Report::new(subject);
        if !self.is_special() {
            r.push(Check::error("precondition", "system is not special"));
            return Err(r);
        }
        Ok(r)
    }

    /// Identities of special systems: the `K` anticommutator rule when
    /// `ε = δ`; skew symmetry, `K` as derivations and the `K`/`T` rule when
    /// `ε = -δ`.
    pub fn check_prop_ss(&self) -> Report {
        let mut r = match self.precondition_special("fkts.special_identities") {
            Ok(r) => r,
            Err(r) => return r,
        };
        let n = self.dim();
        if self.epsilon == self.delta {
            r.push(self.sweep4("kk_anticommutator", |u, v, x, y| {
                let kuv = self.k_op(u, v);
                let lhs = kuv.anticommutator(&self.k_op(x, y));
                let rhs = self.k_op(&kuv.apply(x), y).add(&self.k_op(x, &kuv.apply(y)));
                (lhs, rhs)
            }));
        } else {
            let e = self.eps();
            r.push(Check::from_sweep(
                "skew_symmetry",
                sweep(&[n, n, n], |t| {
                    let mut lhs = self.triple.basis(t[0], t[1], t[2]).to_vec();
                    crate::linalg::axpy(&mut lhs, &e, self.triple.basis(t[0], t[2], t[1]));
                    (lhs, vec![S::zero(); n])
                }),
            ));
            let found = (0..n * n).find_map(|p| {
                let k = self.k_op(&self.unit(p / n), &self.unit(p % n));
                triple_derivation_defect(&k, &self.triple).map(|mut c| {
                    c.tuple.splice(0..0, [p / n, p % n]);
                    c
                })
            });
            r.push(Check::from_sweep("k_derivation", found));
            r.push(self.sweep4("kt_anticommutator", |u, v, x, y| {
                let kuv = self.k_op(u, v);
                let lhs = kuv.anticommutator(&self.t_op(x, y));
                let rhs = self.k_op(&kuv.apply(x), y).sub(&self.k_op(x, &kuv.apply(y)));
                (lhs, rhs)
            }));
        }
        r
    }

    /// Two consequences of FK2 tying products of `K` to `L`.
    pub fn check_k_identities(&self) -> Report {
        let (e, d) = (self.eps(), self.del());
        let mut r = Report::new("fkts.k_identities");
        r.push(self.sweep4("kk_l_left", |a, b, c, dd| {
            let kab = self.k_op(a, b);
            let mut lhs = kab.mul(&self.k_op(c, dd)).scale(&e);
            lhs.axpy(&S::one(), &self.l_op(&kab.apply(c), dd));
            lhs.axpy(&-d.clone(), &self.l_op(&kab.apply(dd), c));
            (lhs, Matrix::zeros(self.dim(), self.dim()))
        }));
        r.push(self.sweep4("kk_l_right", |a, b, c, dd| {
            let kab = self.k_op(a, b);
            let mut lhs = self.k_op(c, dd).mul(&kab);
            lhs.axpy(&d, &self.l_op(c, &kab.apply(dd)));
            lhs.axpy(&-S::one(), &self.l_op(dd, &kab.apply(c)));
            (lhs, Matrix::zeros(self.dim(), self.dim()))
        }));
        r
    }

    /// A unitary system has `ε = δ` and is special.
    pub fn check_unital_special(&self) -> Report {
        let mut r = Report::new("fkts.unital_special");
        match self.is_unitary() {
            (true, witness) => {
                r.push(Check::from_bool("equal_signs", self.epsilon == self.delta));
                r.push(self.special_check());
                if let Some(w) = witness {
                    r.insert("unit_witness", vector_json(&w));
                }
            }
            (false, _) => r.push(Check::vacuous("unital_special", "system is not unitary")),
        }
        r
    }

    /// `K(x,y) = -δK(y,x)` on all basis pairs.
    pub fn check_k_skew(&self) -> Check {
        let n = self.dim();
        let d = self.del();
        Check::from_sweep(
            "k_skew",
            sweep_matrices(&[n, n], |t| {
                let (x, y) = (self.unit(t[0]), self.unit(t[1]));
                (self.k_op(&x, &y), self.k_op(&y, &x).scale(&-d.clone()))
            }),
        )
    }

    /// For special `(ε,ε)` systems `Λ(x,y,z) = xyz + εxzy` is symmetric
    /// (`ε = 1`) or alternating (`ε = -1`).
    pub fn check_lambda_symmetry(&self) -> Check {
        if !(self.epsilon == self.delta && self.is_special()) {
            return Check::vacuous("lambda_symmetry", "needs a special system with equal signs");
        }
        let n = self.dim();
        let e = self.eps();
        let lambda = |i: usize, j: usize, k: usize| {
            let mut v = self.triple.basis(i, j, k).to_vec();
            crate::linalg::axpy(&mut v, &e, self.triple.basis(i, k, j));
            v
        };
        Check::from_sweep(
            "lambda_symmetry",
            sweep(&[n, n, n], |t| {
                let base = lambda(t[0], t[1], t[2]);
                let mut lhs = base.clone();
                lhs.extend(base);
                let mut rhs: Vec<S> = lambda(t[1], t[0], t[2]).iter().map(|c| e.clone() * c).collect();
                rhs.extend(lambda(t[0], t[2], t[1]).iter().map(|c| e.clone() * c));
                (lhs, rhs)
            }),
        )
    }

    /// For `(ε,ε)` systems, `F·id + span K(U,U)` is closed under `½(fg+gf)`.
    pub fn check_jordan_closure(&self) -> Check {
        if self.epsilon != self.delta {
            return Check::vacuous("jordan_closure", "needs equal signs");
        }
        let n = self.dim();
        let id = Matrix::<S>::identity(n);
        let mut span = SpanBasis::new(n * n);
        span.insert(id.flat());
        for k in self.k_basis_ops() {
            span.insert(k.flat());
        }
        let elems: Vec<Matrix<S>> = span.elems().iter().map(|v| Matrix::from_flat(n, n, v.clone())).collect();
        let m = elems.len();
        for i in 0..m {
            for j in i..m {
                let p = elems[i].anticommutator(&elems[j]);
                if !span.contains(p.flat()) {
                    return Check::fail("jordan_closure", format!("product of span elements {i} and {j} leaves the span"));
                }
            }
        }
        Check::pass("jordan_closure")
    }

    /// Everything `verify` runs on a triple system file.
    pub fn full_report(&self) -> Report {
        let mut r = self.check_fk();
        r.subject = "fkts".into();
        r.extend(self.check_st_identities());
        r.extend(self.check_k_identities());
        r.push(self.check_k_skew());
        let mut special = self.special_check();
        let is_special = special.ok();
        if is_special {
            r.push(special);
            r.extend(self.check_prop_ss());
        } else {
            // Not special is a property, not a defect.
            special.status = crate::report::Status::Vacuous;
            special.note = Some("not special; special identities skipped".into());
            r.push(special);
        }
        r.extend(self.check_unital_special());
        let (balanced, _) = self.is_balanced();
        r.insert("special", is_special);
        r.insert("balanced", balanced);
        r.insert("unitary", self.is_unitary().0);
        r.insert("epsilon", self.epsilon.value());
        r.insert("delta", self.delta.value());
        r.insert("dim", Value::from(self.dim()));
        r
    }
}
