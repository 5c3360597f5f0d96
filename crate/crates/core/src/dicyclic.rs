//! Dicyclic ternary algebras: a space with an involution `x̄`, an
//! anticommutative product `x*y` and a triple product `{x,y,z}`.

use thiserror::Error;

use crate::fkts::Fkts;
use crate::jternary::{JTernary, JordanAlgebra};
use crate::liebuild::{Dic3Action, Dic3Error, LieAlgebra};
use crate::linalg::{axpy, is_zero_vec, unit_vec, vec_add, vec_neg, vec_scale, vec_sub, zero_vec, Matrix, SpanBasis, Vector};
use crate::report::{sweep, Check, Report};
use crate::scalars::{q, Scalar, Sign};
use crate::tensor::{
    automorphism_defect, triple_automorphism_defect, BasedSpace, BilinearTensor, TensorError, TrilinearTensor,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DicyclicError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("element is not fixed by the involution")]
    NotInA0,
    #[error("scalar field {0} has no primitive cube root of unity")]
    WrongScalarField(&'static str),
    #[error(transparent)]
    Dic3(#[from] Dic3Error),
    #[error("result leaves the expected subspace: {0}")]
    Closure(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DicyclicTernary<S: Scalar> {
    pub space: BasedSpace,
    pub bar: Matrix<S>,
    pub star: BilinearTensor<S>,
    pub triple: TrilinearTensor<S>,
}

/// Concatenated labels, prefixed when the two lists collide.
fn joined_labels(a: &BasedSpace, b: &BasedSpace, pa: &str, pb: &str) -> BasedSpace {
    let plain: Vec<String> = a.labels().iter().chain(b.labels()).cloned().collect();
    BasedSpace::new(plain).unwrap_or_else(|_| {
        let pref = a.labels().iter().map(|l| format!("{pa}{l}")).chain(b.labels().iter().map(|l| format!("{pb}{l}")));
        BasedSpace::new(pref.collect()).expect("prefixed labels are unique")
    })
}

/// Label for a subspace basis vector: the ambient label when it is a
/// coordinate vector, otherwise `prefix[i]`.
fn sub_labels<S: Scalar>(space: &BasedSpace, basis: &[Vector<S>], prefix: &str) -> Vec<String> {
    basis
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let nz: Vec<usize> = (0..v.len()).filter(|&k| !v[k].is_zero()).collect();
            match nz.as_slice() {
                [k] if v[*k].is_one() => space.labels()[*k].clone(),
                _ => format!("{prefix}[{}]", i + 1),
            }
        })
        .collect()
}

impl<S: Scalar> DicyclicTernary<S> {
    pub fn new(space: BasedSpace, bar: Matrix<S>, star: BilinearTensor<S>, triple: TrilinearTensor<S>) -> Result<Self, DicyclicError> {
        let n = space.dim();
        let bad = |f| DicyclicError::Tensor(TensorError::DimensionMismatch { expected: n, found: f });
        if bar.rows() != n || bar.cols() != n {
            return Err(bad(bar.rows()));
        }
        if star.shape() != (n, n, n) {
            return Err(bad(star.shape().0));
        }
        if !triple.is_endomorphic() || triple.out_dim() != n {
            return Err(bad(triple.out_dim()));
        }
        Ok(DicyclicTernary { space, bar, star, triple })
    }

    /// All products zero and `x̄ = x` on an `n`-dimensional space.
    pub fn zero(n: usize) -> Self {
        DicyclicTernary {
            space: BasedSpace::numbered("a", n),
            bar: Matrix::identity(n),
            star: BilinearTensor::zeros(n, n, n),
            triple: TrilinearTensor::zeros([n; 3], n),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DicyclicTernary<T> {
        DicyclicTernary {
            space: self.space.clone(),
            bar: self.bar.map(&f),
            star: self.star.map(&f),
            triple: self.triple.map(&f),
        }
    }

    /// First differing structure tensor, ignoring labels.
    pub fn compare(&self, other: &Self) -> Result<(), String> {
        if self.dim() != other.dim() {
            return Err(format!("dimensions differ: {} vs {}", self.dim(), other.dim()));
        }
        if self.bar != other.bar {
            return Err("involutions differ".into());
        }
        if let Some((i, k, l, _)) = self.star.entries().into_iter().chain(other.star.entries()).find(|(i, k, l, _)| self.star.get(*i, *k, *l) != other.star.get(*i, *k, *l)) {
            return Err(format!("binary products differ at ({i},{k}) in coordinate {l}"));
        }
        if let Some((i, k, l, m, _)) = self
            .triple
            .entries()
            .into_iter()
            .chain(other.triple.entries())
            .find(|(i, k, l, m, _)| self.triple.get(*i, *k, *l, *m) != other.triple.get(*i, *k, *l, *m))
        {
            return Err(format!("triple products differ at ({i},{k},{l}) in coordinate {m}"));
        }
        Ok(())
    }

    fn e(&self, i: usize) -> Vector<S> {
        unit_vec(self.dim(), i)
    }

    pub fn b(&self, x: &[S]) -> Vector<S> {
        self.bar.apply(x)
    }

    pub fn mul(&self, x: &[S], y: &[S]) -> Vector<S> {
        self.star.eval(x, y)
    }

    pub fn tri(&self, x: &[S], y: &[S], z: &[S]) -> Vector<S> {
        self.triple.eval(x, y, z)
    }

    /// Bases of the `+1` and `-1` eigenspaces of the involution.
    pub fn graded_bases(&self) -> (Vec<Vector<S>>, Vec<Vector<S>>) {
        let n = self.dim();
        let id = Matrix::identity(n);
        (self.bar.sub(&id).kernel(), self.bar.add(&id).kernel())
    }

    pub fn in_a0(&self, x: &[S]) -> bool {
        self.b(x) == x
    }

    pub fn in_a1(&self, x: &[S]) -> bool {
        self.b(x) == vec_neg(x)
    }

    /// Involution, automorphism and anticommutativity invariants.
    pub fn check_structure(&self) -> Report {
        let n = self.dim();
        let mut r = Report::new("dicyclic.structure");
        r.push(Check::from_bool("bar_involution", self.bar.mul(&self.bar).is_identity()));
        r.push(Check::from_sweep("bar_star_automorphism", automorphism_defect(&self.bar, &self.star).expect("square")));
        r.push(Check::from_sweep("bar_triple_automorphism", triple_automorphism_defect(&self.bar, &self.triple)));
        r.push(Check::from_sweep(
            "star_anticommutative",
            sweep(&[n, n], |t| (self.star.basis(t[0], t[1]).to_vec(), vec_neg(self.star.basis(t[1], t[0])))),
        ));
        r
    }

    /// Structure invariants followed by the five axioms.
    pub fn check_d_axioms(&self) -> Report {
        let n = self.dim();
        let mut r = self.check_structure();
        r.subject = "dicyclic".into();
        let z = || zero_vec::<S>(n);
        r.push(Check::from_sweep(
            "d1",
            sweep(&[n; 3], |t| {
                let (x, y, w) = (self.e(t[0]), self.e(t[1]), self.e(t[2]));
                let lhs = vec_sub(&self.tri(&x, &w, &y), &self.tri(&y, &w, &x));
                (lhs, self.mul(&self.mul(&self.b(&x), &self.b(&y)), &self.b(&w)))
            }),
        ));
        r.push(Check::from_sweep(
            "d2",
            sweep(&[n; 4], |t| {
                let (u, v, x, y) = (self.e(t[0]), self.e(t[1]), self.e(t[2]), self.e(t[3]));
                let mut lhs = self.tri(&u, &self.b(&v), &self.mul(&x, &y));
                axpy(&mut lhs, &S::one(), &self.mul(&self.tri(&v, &u, &x), &y));
                axpy(&mut lhs, &S::one(), &self.mul(&x, &self.tri(&v, &u, &y)));
                (lhs, z())
            }),
        ));
        r.push(Check::from_sweep(
            "d3",
            sweep(&[n; 4], |t| {
                let (x, y, w, v) = (self.e(t[0]), self.e(t[1]), self.e(t[2]), self.e(t[3]));
                let mut lhs = self.tri(&x, &self.mul(&y, &w), &v);
                axpy(&mut lhs, &S::one(), &self.tri(&y, &self.mul(&w, &x), &v));
                axpy(&mut lhs, &S::one(), &self.tri(&w, &self.mul(&x, &y), &v));
                (lhs, z())
            }),
        ));
        r.push(Check::from_sweep(
            "d4",
            sweep(&[n; 4], |t| {
                let (x, y, w, v) = (self.e(t[0]), self.e(t[1]), self.e(t[2]), self.e(t[3]));
                let (bx, by, bw) = (self.b(&x), self.b(&y), self.b(&w));
                let mut lhs = self.tri(&self.mul(&bx, &by), &w, &v);
                axpy(&mut lhs, &S::one(), &self.tri(&self.mul(&by, &bw), &x, &v));
                axpy(&mut lhs, &S::one(), &self.tri(&self.mul(&bw, &bx), &y, &v));
                (lhs, z())
            }),
        ));
        r.push(Check::from_sweep(
            "d5",
            sweep(&[n; 5], |t| {
                let (u, v, x, y, w) = (self.e(t[0]), self.e(t[1]), self.e(t[2]), self.e(t[3]), self.e(t[4]));
                let lhs = self.tri(&u, &v, self.triple.basis(t[2], t[3], t[4]));
                let mut rhs = self.tri(&self.tri(&u, &v, &x), &y, &w);
                axpy(&mut rhs, &-S::one(), &self.tri(&x, &self.tri(&v, &self.b(&u), &y), &w));
                axpy(&mut rhs, &S::one(), &self.tri(&x, &y, &self.tri(&u, &v, &w)));
                (lhs, rhs)
            }),
        ));
        r
    }

    fn require_a0(&self, e: &[S]) -> Result<(), DicyclicError> {
        if e.len() != self.dim() {
            return Err(TensorError::DimensionMismatch { expected: self.dim(), found: e.len() }.into());
        }
        if !self.in_a0(e) {
            return Err(DicyclicError::NotInA0);
        }
        Ok(())
    }

    /// `{e,e,a} = -2a` on `A₀`, `{e,e,x} = x` and `{x,e,e} = 0` on `A₁`,
    /// followed by the `extended.*` lines `e*a = 0`, `e*x = -x` and
    /// `{a,e,e} = -2a`.
    pub fn unit_report(&self, e: &[S]) -> Result<Report, DicyclicError> {
        self.require_a0(e)?;
        let (a0, a1) = self.graded_bases();
        let n = self.dim();
        let m2 = S::from_i64(-2);
        let mut r = Report::new("dicyclic.unit");
        let scan = |name: &str, basis: &[Vector<S>], f: &dyn Fn(&[S]) -> (Vector<S>, Vector<S>)| {
            let found = basis.iter().enumerate().find_map(|(i, v)| {
                let (l, rr) = f(v);
                (l != rr).then(|| crate::report::Counterexample::new(&[i], &l, &rr))
            });
            Check::from_sweep(name, found)
        };
        r.push(scan("eea", &a0, &|a| (self.tri(e, e, a), vec_scale(&m2, a))));
        r.push(scan("eex", &a1, &|x| (self.tri(e, e, x), x.to_vec())));
        r.push(scan("xee", &a1, &|x| (self.tri(x, e, e), zero_vec(n))));
        r.push(scan("extended.ea", &a0, &|a| (self.mul(e, a), zero_vec(n))));
        r.push(scan("extended.ex", &a1, &|x| (self.mul(e, x), vec_neg(x))));
        r.push(scan("extended.aee", &a0, &|a| (self.tri(a, e, e), vec_scale(&m2, a))));
        Ok(r)
    }

    /// The three unit conditions; the extended lines are not consulted.
    pub fn check_unit(&self, e: &[S]) -> Result<bool, DicyclicError> {
        let r = self.unit_report(e)?;
        Ok(r.checks.iter().filter(|c| !c.name.starts_with("extended.")).all(Check::ok))
    }

    /// First candidate passing [`check_unit`](Self::check_unit), in order.
    /// Candidates outside `A₀` are skipped.
    pub fn find_unit(&self, candidates: &[Vector<S>]) -> Option<Vector<S>> {
        candidates.iter().find(|c| self.check_unit(c).unwrap_or(false)).cloned()
    }

    /// Consequences of a unit `e`: `A₀*A₀ = 0`, `{A₀,A₁,A} = 0 = {A₁,A₀,A}`,
    /// `(x*e)*e = x` on `A₁` and `{e,{e,a,e},e} = 4a` on `A₀`.
    pub fn check_unit_lemmas(&self, e: &[S]) -> Result<Report, DicyclicError> {
        if !self.check_unit(e)? {
            return Err(DicyclicError::Precondition("element is not a unit".into()));
        }
        let (a0, a1) = self.graded_bases();
        let n = self.dim();
        let z = zero_vec::<S>(n);
        let mut r = Report::new("dicyclic.unit_lemmas");
        let pairs = |xs: &[Vector<S>], ys: &[Vector<S>], f: &dyn Fn(&[S], &[S]) -> (Vector<S>, Vector<S>)| {
            let mut found = None;
            'outer: for (i, x) in xs.iter().enumerate() {
                for (j, y) in ys.iter().enumerate() {
                    let (l, rr) = f(x, y);
                    if l != rr {
                        found = Some(crate::report::Counterexample::new(&[i, j], &l, &rr));
                        break 'outer;
                    }
                }
            }
            found
        };
        r.push(Check::from_sweep("a0_star_a0", pairs(&a0, &a0, &|a, b| (self.mul(a, b), z.clone()))));
        let all: Vec<Vector<S>> = (0..n).map(|i| self.e(i)).collect();
        let mixed = |first: &[Vector<S>], second: &[Vector<S>]| {
            let mut found = None;
            'outer: for (i, p) in first.iter().enumerate() {
                for (j, s) in second.iter().enumerate() {
                    for (k, w) in all.iter().enumerate() {
                        let l = self.tri(p, s, w);
                        if !is_zero_vec(&l) {
                            found = Some(crate::report::Counterexample::new(&[i, j, k], &l, &z));
                            break 'outer;
                        }
                    }
                }
            }
            found
        };
        r.push(Check::from_sweep("a0_a1_triple", mixed(&a0, &a1)));
        r.push(Check::from_sweep("a1_a0_triple", mixed(&a1, &a0)));
        r.push(Check::from_sweep(
            "xee_star",
            pairs(&a1, &[e.to_vec()], &|x, e| (self.mul(&self.mul(x, e), e), x.to_vec())),
        ));
        r.push(Check::from_sweep(
            "eeae",
            pairs(&a0, &[e.to_vec()], &|a, e| (self.tri(e, &self.tri(e, a, e), e), vec_scale(&S::from_i64(4), a))),
        ));
        Ok(r)
    }

    /// `A = J ⊕ T` with `ā = a`, `x̄ = -x` and the products
    /// `a*x = -a•x`, `x*y = -2⟨x|y⟩`, `{a,b,c} = -2((ab)c + a(bc) - (ac)b)`,
    /// `{a,b,x} = b•(a•x)`, `{x,y,a} = -2⟨a•x|y⟩`, `{x,y,z} = 2⟨x,y,z⟩`,
    /// all others zero.
    pub fn from_jternary(s: &JTernary<S>) -> Result<Self, DicyclicError> {
        if s.sign != Sign::Plus {
            return Err(DicyclicError::Precondition("needs the ordinary sign".into()));
        }
        if !s.check_jt_axioms().passed() {
            return Err(DicyclicError::Precondition("J-ternary axioms fail".into()));
        }
        let (nj, nt) = (s.nj(), s.nt());
        let n = nj + nt;
        let space = joined_labels(&s.j.space, &s.t, "J:", "T:");
        let bar = Matrix::from_fn(n, n, |i, k| {
            if i != k {
                S::zero()
            } else if i < nj {
                S::one()
            } else {
                -S::one()
            }
        });
        let ja = |i: usize| unit_vec::<S>(nj, i);
        let tx = |i: usize| unit_vec::<S>(nt, i);
        let join = |a: Vector<S>, x: Vector<S>| {
            let mut v = a;
            v.extend(x);
            v
        };
        let (two, m2) = (S::from_i64(2), S::from_i64(-2));
        let star = BilinearTensor::from_fn(n, n, n, |i, k| match (i < nj, k < nj) {
            (true, true) => zero_vec(n),
            (true, false) => join(zero_vec(nj), vec_neg(&s.act(&ja(i), &tx(k - nj)))),
            (false, true) => join(zero_vec(nj), s.act(&ja(k), &tx(i - nj))),
            (false, false) => join(vec_scale(&m2, s.angle.basis(i - nj, k - nj)), zero_vec(nt)),
        });
        let jm = |a: &[S], b: &[S]| s.j.mul(a, b);
        let triple = TrilinearTensor::endo(n, |i, k, l| match (i < nj, k < nj, l < nj) {
            (true, true, true) => {
                let (a, b, c) = (ja(i), ja(k), ja(l));
                let v = vec_sub(&vec_add(&jm(&jm(&a, &b), &c), &jm(&a, &jm(&b, &c))), &jm(&jm(&a, &c), &b));
                join(vec_scale(&m2, &v), zero_vec(nt))
            }
            (true, true, false) => join(zero_vec(nj), s.act(&ja(k), &s.act(&ja(i), &tx(l - nj)))),
            (false, false, true) => {
                let ax = s.act(&ja(l), &tx(i - nj));
                join(vec_scale(&m2, &s.ang(&ax, &tx(k - nj))), zero_vec(nt))
            }
            (false, false, false) => join(zero_vec(nj), vec_scale(&two, s.triple.basis(i - nj, k - nj, l - nj))),
            _ => zero_vec(n),
        });
        Ok(DicyclicTernary { space, bar, star, triple })
    }

    /// `J = A₀` with `a·b = -½{a,e,b}`, `T = A₁` with `a•x = {a,e,x}`,
    /// `⟨x|y⟩ = -½(e*x)*(e*y)` and `⟨x,y,z⟩ = -½{x,e*y,z}`. `A₀`, `A₁` get
    /// the kernel bases of `x̄ ∓ x`.
    pub fn to_jternary(&self, e: &[S]) -> Result<JTernary<S>, DicyclicError> {
        if !self.check_unit(e)? {
            return Err(DicyclicError::Precondition("element is not a unit".into()));
        }
        if !self.check_d_axioms().passed() {
            return Err(DicyclicError::Precondition("dicyclic axioms fail".into()));
        }
        let (a0, a1) = self.graded_bases();
        let (nj, nt) = (a0.len(), a1.len());
        let n = self.dim();
        let s0 = SpanBasis::from_vectors(n, &a0);
        let s1 = SpanBasis::from_vectors(n, &a1);
        let c0 = |v: &[S]| s0.coords(v).ok_or_else(|| DicyclicError::Closure("value outside the +1 eigenspace".into()));
        let c1 = |v: &[S]| s1.coords(v).ok_or_else(|| DicyclicError::Closure("value outside the -1 eigenspace".into()));
        let mh = S::from_rational(q(-1, 2));
        let fill2 = |l: usize, r: usize, o: usize, f: &dyn Fn(usize, usize) -> Result<Vector<S>, DicyclicError>| {
            let mut t = BilinearTensor::zeros(l, r, o);
            for i in 0..l {
                for k in 0..r {
                    for (m, v) in f(i, k)?.into_iter().enumerate() {
                        t.set(i, k, m, v);
                    }
                }
            }
            Ok::<_, DicyclicError>(t)
        };
        let product = fill2(nj, nj, nj, &|i, k| c0(&vec_scale(&mh, &self.tri(&a0[i], e, &a0[k]))))?;
        let action = fill2(nj, nt, nt, &|i, k| c1(&self.tri(&a0[i], e, &a1[k])))?;
        let angle = fill2(nt, nt, nj, &|i, k| {
            c0(&vec_scale(&mh, &self.mul(&self.mul(e, &a1[i]), &self.mul(e, &a1[k]))))
        })?;
        let mut triple = TrilinearTensor::zeros([nt; 3], nt);
        for i in 0..nt {
            for k in 0..nt {
                let ey = self.mul(e, &a1[k]);
                for l in 0..nt {
                    for (m, v) in c1(&vec_scale(&mh, &self.tri(&a1[i], &ey, &a1[l])))?.into_iter().enumerate() {
                        triple.set(i, k, l, m, v);
                    }
                }
            }
        }
        let unit = c0(e)?;
        let jspace = BasedSpace::new(sub_labels(&self.space, &a0, "a"))?;
        let tspace = BasedSpace::new(sub_labels(&self.space, &a1, "x"))?;
        let j = JordanAlgebra::new(jspace, product, unit).map_err(|err| DicyclicError::Precondition(err.to_string()))?;
        JTernary::new(j, tspace, action, angle, triple, Sign::Plus).map_err(|err| DicyclicError::Precondition(err.to_string()))
    }

    /// `A = K(U,U) ⊕ U` for a `(1,1)` system, with `K(U,U)` given the
    /// greedy basis of the `K(e_i,e_j)` in index order.
    pub fn from_fkts_11(u: &Fkts<S>) -> Result<Self, DicyclicError> {
        if u.epsilon != Sign::Plus || u.delta != Sign::Plus {
            return Err(DicyclicError::Precondition("needs signs (1,1)".into()));
        }
        if !u.check_fk().passed() {
            return Err(DicyclicError::Precondition("system fails its defining identities".into()));
        }
        let nu = u.dim();
        let (ms, span) = k_span(u);
        let m = ms.len();
        let n = m + nu;
        let coords = |mat: &Matrix<S>| {
            span.coords(mat.flat()).ok_or_else(|| DicyclicError::Closure("operator outside span K(U,U)".into()))
        };
        let ux = |i: usize| unit_vec::<S>(nu, i);
        let join = |a: Vector<S>, x: Vector<S>| {
            let mut v = a;
            v.extend(x);
            v
        };
        let labels: Vec<String> = (1..=m).map(|i| format!("K[{i}]")).collect();
        let space = joined_labels(&BasedSpace::new(labels)?, &u.space, "", "U:");
        let bar = Matrix::from_fn(n, n, |i, k| if i != k { S::zero() } else if i < m { S::one() } else { -S::one() });
        let mut star = BilinearTensor::zeros(n, n, n);
        let mut triple = TrilinearTensor::zeros([n; 3], n);
        for i in 0..n {
            for k in 0..n {
                let v = match (i < m, k < m) {
                    (true, true) => zero_vec(n),
                    (true, false) => join(zero_vec(m), ms[i].column(k - m)),
                    (false, true) => join(zero_vec(m), vec_neg(&ms[k].column(i - m))),
                    (false, false) => join(coords(&u.k_op(&ux(i - m), &ux(k - m)).neg())?, zero_vec(nu)),
                };
                for (l, c) in v.into_iter().enumerate() {
                    star.set(i, k, l, c);
                }
                for l in 0..n {
                    let v = match (i < m, k < m, l < m) {
                        (true, true, true) => {
                            let p = ms[i].mul(&ms[k]).mul(&ms[l]).add(&ms[l].mul(&ms[k]).mul(&ms[i]));
                            join(coords(&p.neg())?, zero_vec(nu))
                        }
                        (true, true, false) => join(zero_vec(m), ms[k].mul(&ms[i]).column(l - m)),
                        (false, false, true) => {
                            let mx = ms[l].column(i - m);
                            join(coords(&u.k_op(&mx, &ux(k - m)))?, zero_vec(nu))
                        }
                        (false, false, false) => join(zero_vec(m), u.triple.basis(i - m, k - m, l - m).to_vec()),
                        _ => zero_vec(n),
                    };
                    for (p, c) in v.into_iter().enumerate() {
                        triple.set(i, k, l, p, c);
                    }
                }
            }
        }
        Ok(DicyclicTernary { space, bar, star, triple })
    }

    /// Reads the algebra off the `ω`-eigenspace of `φ` with `x̄ = θ²x`,
    /// `x*y = θ⁻¹[x,y]` and `{x,y,z} = [[x,θy],z]`. `basis` fixes the basis
    /// of the eigenspace (kernel basis when `None`); `labels` names it.
    pub fn from_lie_with_dic3(
        g: &LieAlgebra<S>,
        action: &Dic3Action<S>,
        basis: Option<Vec<Vector<S>>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, DicyclicError> {
        let w = S::omega().ok_or(DicyclicError::WrongScalarField(S::FIELD))?;
        let n = g.dim();
        action.verify(g)?;
        let (theta, phi) = (&action.theta, &action.phi);
        let kernel = phi.sub(&Matrix::scalar(n, w)).kernel();
        let basis = match basis {
            None => kernel,
            Some(b) => {
                let ks = SpanBasis::from_vectors(n, &kernel);
                let bs = SpanBasis::from_vectors(n, &b);
                if b.len() != kernel.len() || bs.dim() != b.len() || !b.iter().all(|v| ks.contains(v)) {
                    return Err(DicyclicError::Precondition("supplied vectors are not a basis of the eigenspace".into()));
                }
                b
            }
        };
        let m = basis.len();
        let span = SpanBasis::from_vectors(n, &basis);
        let coords = |v: &[S], what: &str| span.coords(v).ok_or_else(|| DicyclicError::Closure(what.to_string()));
        let theta_inv = theta.pow(3);
        let bar_cols = basis.iter().map(|v| coords(&theta.apply(&theta.apply(v)), "bar")).collect::<Result<Vec<_>, _>>()?;
        let bar = Matrix::from_columns(m, &bar_cols);
        let br = |x: &[S], y: &[S]| g.bracket.eval(x, y);
        let mut star = BilinearTensor::zeros(m, m, m);
        let mut triple = TrilinearTensor::zeros([m; 3], m);
        for i in 0..m {
            for k in 0..m {
                for (l, c) in coords(&theta_inv.apply(&br(&basis[i], &basis[k])), "binary product")?.into_iter().enumerate() {
                    star.set(i, k, l, c);
                }
                let inner = br(&basis[i], &theta.apply(&basis[k]));
                for l in 0..m {
                    for (p, c) in coords(&br(&inner, &basis[l]), "triple product")?.into_iter().enumerate() {
                        triple.set(i, k, l, p, c);
                    }
                }
            }
        }
        let labels = labels.unwrap_or_else(|| sub_labels(&g.space, &basis, "w"));
        let space = BasedSpace::new(labels)?;
        DicyclicTernary::new(space, bar, star, triple)
    }
}

/// Greedy basis of `span K(U,U)` as matrices, with its span solver.
pub fn k_span<S: Scalar>(u: &Fkts<S>) -> (Vec<Matrix<S>>, SpanBasis<S>) {
    let n = u.dim();
    let mut span = SpanBasis::new(n * n);
    for k in u.k_basis_ops() {
        span.insert(k.flat());
    }
    let ms = span.elems().iter().map(|v| Matrix::from_flat(n, n, v.clone())).collect();
    (ms, span)
}
