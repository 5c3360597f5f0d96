//! Lie (super)algebras built from triple systems: `𝔤(J,T)`, `𝔤(A)` and the
//! five-graded `𝔤(U)`, together with the dicyclic group actions on them, the
//! `sl₂` isotypic decomposition and the embedding `𝔤(U) → 𝔤(J,U)`.

use serde_json::json;
use thiserror::Error;

use crate::dicyclic::DicyclicTernary;
use crate::fkts::Fkts;
use crate::jternary::JTernary;
use crate::linalg::{axpy, is_zero_vec, unit_vec, vec_neg, zero_vec, Matrix, SpanBasis, Vector};
use crate::report::{sweep, Check, Counterexample, Report};
use crate::scalars::{Scalar, Sign};
use crate::tensor::{automorphism_defect, jacobi_defect, BasedSpace, BilinearTensor, Parity, Sl2Frame, TensorError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal closure failure: {0}")]
    Closure(String),
    #[error("scalar field {0} has no primitive cube root of unity")]
    WrongScalarField(&'static str),
    #[error("invalid sl2 frame: {0}")]
    Frame(String),
    #[error("ad H eigenspaces for -2..2 span only {found} of {dim} dimensions; basis vector {witness} lies outside")]
    NotExhausted { dim: usize, found: usize, witness: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Dic3Error {
    #[error("{map} is not an automorphism (first failing pair {tuple:?})")]
    NotAutomorphism { map: &'static str, tuple: Vec<usize> },
    #[error("relation {0} fails")]
    Relation(&'static str),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Which summand a basis vector of a constructed algebra belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GradeTag {
    Grade(i8),
    SlJ,
    VT,
    Der,
}

impl std::fmt::Display for GradeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GradeTag::Grade(i) => write!(f, "({i})"),
            GradeTag::SlJ => f.write_str("slJ"),
            GradeTag::VT => f.write_str("VT"),
            GradeTag::Der => f.write_str("der"),
        }
    }
}

impl std::str::FromStr for GradeTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "slJ" => Ok(GradeTag::SlJ),
            "VT" => Ok(GradeTag::VT),
            "der" => Ok(GradeTag::Der),
            _ => s
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.parse::<i8>().ok())
                .filter(|i| (-2..=2).contains(i))
                .map(GradeTag::Grade)
                .ok_or_else(|| format!("unknown grade tag {s:?}")),
        }
    }
}

/// A Lie (super)algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra<S: Scalar> {
    pub space: BasedSpace,
    pub bracket: BilinearTensor<S>,
    pub grades: Option<Vec<GradeTag>>,
    /// Coordinates of `H`, `E`, `F`.
    pub frame: Option<[Vector<S>; 3]>,
}

/// Automorphisms `θ`, `φ` meant to satisfy `θ⁴ = 1 = φ³`, `φθφ = θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dic3Action<S: Scalar> {
    pub theta: Matrix<S>,
    pub phi: Matrix<S>,
}

/// Result of [`bc1_decompose`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bc1Decomposition {
    pub adjoint: usize,
    pub natural: usize,
    pub trivial: usize,
    /// `dim V_λ` for `λ = -2..=2`.
    pub eigen_dims: [usize; 5],
    pub verified: bool,
}

/// Result of [`embed_gu_in_gjt`].
#[derive(Clone, Debug)]
pub struct Embedding<S: Scalar> {
    pub source: LieAlgebra<S>,
    pub target: LieAlgebra<S>,
    pub map: Matrix<S>,
    pub injective: bool,
    pub homomorphism: Option<Counterexample>,
}

impl<S: Scalar> Embedding<S> {
    pub fn verified(&self) -> bool {
        self.injective && self.homomorphism.is_none()
    }

    pub fn bijective(&self) -> bool {
        self.injective && self.source.dim() == self.target.dim()
    }
}

/// A greedy basis of a space of operators, remembering the generator each
/// basis element came from.
struct OpSpan<S: Scalar> {
    rows: usize,
    span: SpanBasis<S>,
    origins: Vec<(usize, usize)>,
}

impl<S: Scalar> OpSpan<S> {
    fn new(rows: usize, ops: impl IntoIterator<Item = ((usize, usize), Matrix<S>)>) -> Self {
        let mut span = SpanBasis::new(rows * rows);
        let mut origins = Vec::new();
        for (o, m) in ops {
            if span.insert(m.flat()) {
                origins.push(o);
            }
        }
        OpSpan { rows, span, origins }
    }

    fn dim(&self) -> usize {
        self.span.dim()
    }

    fn mat(&self, k: usize) -> Matrix<S> {
        Matrix::from_flat(self.rows, self.rows, self.span.elems()[k].clone())
    }

    fn coords(&self, m: &Matrix<S>, what: &str) -> Result<Vector<S>, LieError> {
        self.span.coords(m.flat()).ok_or_else(|| LieError::Closure(format!("{what} leaves its span")))
    }
}

fn add_into<S: Scalar>(out: &mut [S], offset: usize, c: &S, v: &[S]) {
    axpy(&mut out[offset..offset + v.len()], c, v);
}

impl<S: Scalar> LieAlgebra<S> {
    pub fn new(space: BasedSpace, bracket: BilinearTensor<S>) -> Result<Self, LieError> {
        let n = space.dim();
        if bracket.shape() != (n, n, n) {
            return Err(TensorError::DimensionMismatch { expected: n, found: bracket.shape().0 }.into());
        }
        Ok(LieAlgebra { space, bracket, grades: None, frame: None })
    }

    /// `sl₂` in the basis `H, E, F` with its own frame.
    pub fn sl2() -> Self {
        let fr = Sl2Frame::<S>::standard();
        let space = BasedSpace::new(vec!["H".into(), "E".into(), "F".into()]).expect("distinct labels");
        LieAlgebra {
            space,
            bracket: fr.bracket(),
            grades: None,
            frame: Some([unit_vec(3, 0), unit_vec(3, 1), unit_vec(3, 2)]),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_super(&self) -> bool {
        self.space.is_super()
    }

    /// `(even, odd)` dimensions; `(dim, 0)` without parity.
    pub fn super_dim(&self) -> (usize, usize) {
        self.space.super_dim()
    }

    pub fn br(&self, x: &[S], y: &[S]) -> Vector<S> {
        self.bracket.eval(x, y)
    }

    pub fn ad(&self, x: &[S]) -> Matrix<S> {
        self.bracket.left_mult(x)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LieAlgebra<T> {
        LieAlgebra {
            space: self.space.clone(),
            bracket: self.bracket.map(&f),
            grades: self.grades.clone(),
            frame: self.frame.as_ref().map(|fr| fr.clone().map(|v| v.iter().map(&f).collect())),
        }
    }

    pub fn with_frame(mut self, frame: [Vector<S>; 3]) -> Result<Self, LieError> {
        check_frame(&self, &frame)?;
        self.frame = Some(frame);
        Ok(self)
    }

    /// Super-aware Jacobi defect.
    pub fn jacobi_defect(&self) -> Result<Vec<(usize, usize, usize)>, TensorError> {
        jacobi_defect(&self.space, &self.bracket, self.is_super())
    }

    /// Dimensions of the grade pieces `-2..=2`, when graded that way.
    pub fn grade_dims(&self) -> Option<[usize; 5]> {
        let tags = self.grades.as_ref()?;
        let mut d = [0; 5];
        for t in tags {
            match t {
                GradeTag::Grade(i) => d[(i + 2) as usize] += 1,
                _ => return None,
            }
        }
        Some(d)
    }

    fn indices_with(&self, tag: GradeTag) -> Vec<usize> {
        self.grades.as_ref().map_or_else(Vec::new, |g| (0..g.len()).filter(|&i| g[i] == tag).collect())
    }

    /// Jacobi, frame and (if graded) grade compatibility.
    pub fn report(&self) -> Report {
        let mut r = Report::new("lie");
        let (even, odd) = self.super_dim();
        r.insert("dim", self.dim());
        if self.is_super() {
            r.insert("super_dim", json!([even, odd]));
        }
        match self.jacobi_defect() {
            Ok(bad) if bad.is_empty() => r.push(Check::pass("jacobi")),
            Ok(bad) => {
                let (i, j, k) = bad[0];
                r.push(Check::fail("jacobi", format!("first failing triple ({i},{j},{k}); {} in total", bad.len())));
            }
            Err(e) => r.push(Check::error("jacobi", e.to_string())),
        }
        if let Some(fr) = &self.frame {
            r.push(match check_frame(self, fr) {
                Ok(()) => Check::pass("frame"),
                Err(e) => Check::fail("frame", e.to_string()),
            });
        }
        if let Some(d) = self.grade_dims() {
            r.insert("grade_dims", json!(d));
            r.push(Check::from_sweep("grade_compatibility", self.grade_defect()));
        }
        r
    }

    /// First basis pair with `[𝔤₍ᵢ₎, 𝔤₍ⱼ₎] ⊄ 𝔤₍ᵢ₊ⱼ₎`.
    pub fn grade_defect(&self) -> Option<Counterexample> {
        let tags = self.grades.as_ref()?;
        let grade = |i: usize| match tags[i] {
            GradeTag::Grade(g) => g,
            _ => i8::MAX,
        };
        let n = self.dim();
        sweep(&[n, n], |t| {
            let target = grade(t[0]).saturating_add(grade(t[1]));
            let v = self.bracket.basis(t[0], t[1]).to_vec();
            let kept: Vector<S> = v.iter().enumerate().map(|(k, c)| if grade(k) == target { c.clone() } else { S::zero() }).collect();
            (v, kept)
        })
    }
}

/// `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H`, with `H` nonzero.
pub fn check_frame<S: Scalar>(g: &LieAlgebra<S>, frame: &[Vector<S>; 3]) -> Result<(), LieError> {
    let n = g.dim();
    if frame.iter().any(|v| v.len() != n) {
        return Err(LieError::Frame("coordinate count does not match the algebra".into()));
    }
    let [h, e, f] = frame;
    if is_zero_vec(h) {
        return Err(LieError::Frame("H is zero".into()));
    }
    let two = S::from_i64(2);
    if g.br(h, e) != crate::linalg::vec_scale(&two, e) {
        return Err(LieError::Frame("[H,E] != 2E".into()));
    }
    if g.br(h, f) != crate::linalg::vec_scale(&-two, f) {
        return Err(LieError::Frame("[H,F] != -2F".into()));
    }
    if g.br(e, f) != *h {
        return Err(LieError::Frame("[E,F] != H".into()));
    }
    Ok(())
}

/// The pieces shared by [`build_g_jt`] and [`embed_gu_in_gjt`].
struct GjtParts<S: Scalar> {
    nj: usize,
    nt: usize,
    der: OpSpan<S>,
}

impl<S: Scalar> GjtParts<S> {
    fn new(s: &JTernary<S>) -> Self {
        let (nj, nt) = (s.nj(), s.nt());
        let ej = |i| unit_vec::<S>(nj, i);
        let et = |i| unit_vec::<S>(nt, i);
        let bigs = (0..nj).flat_map(|a| (0..nj).map(move |b| (a, b))).map(|(a, b)| ((a, b), s.big_d(&ej(a), &ej(b))));
        let smalls = (0..nt).flat_map(|x| (0..nt).map(move |y| (x, y))).map(|(x, y)| ((nj + x, nj + y), s.small_d(&et(x), &et(y))));
        let ops: Vec<_> = bigs.chain(smalls).collect();
        GjtParts { nj, nt, der: OpSpan::new(nj + nt, ops) }
    }

    fn sl(&self, f: usize, i: usize) -> usize {
        f * self.nj + i
    }

    fn vt(&self, w: usize, i: usize) -> usize {
        3 * self.nj + w * self.nt + i
    }

    fn d0(&self) -> usize {
        3 * self.nj + 2 * self.nt
    }

    fn dim(&self) -> usize {
        self.d0() + self.der.dim()
    }
}

/// `𝔤(J,T) = sl(V)⊗J ⊕ V⊗T ⊕ 𝔡`, with `𝔡` spanned by the operators `D_{a,b}`,
/// `d_{x,y}` on `J ⊕ T`. For sign `-1` the summand `V⊗T` is odd.
pub fn build_g_jt<S: Scalar>(s: &JTernary<S>) -> Result<LieAlgebra<S>, LieError> {
    if !s.check_jt_axioms().passed() {
        return Err(LieError::Precondition("J-ternary axioms fail".into()));
    }
    if !s.check_theorem_jt().passed() {
        return Err(LieError::Precondition("operator identities fail".into()));
    }
    let p = GjtParts::new(s);
    let (nj, nt, n) = (p.nj, p.nt, p.dim());
    let fr = Sl2Frame::<S>::standard();
    let fb = fr.basis();
    let tr = fr.trace_table();
    let ej = |i| unit_vec::<S>(nj, i);
    let et = |i| unit_vec::<S>(nt, i);
    let vw = |w| unit_vec::<S>(2, w);
    let two = S::from_i64(2);
    let ders: Vec<Matrix<S>> = (0..p.der.dim()).map(|k| p.der.mat(k)).collect();
    let d_j = |k: usize, i: usize| ders[k].column(i)[..nj].to_vec();
    let d_t = |k: usize, i: usize| ders[k].column(nj + i)[nj..].to_vec();

    #[derive(Clone, Copy)]
    enum B {
        Sl(usize, usize),
        Vt(usize, usize),
        D(usize),
    }
    let decode = |idx: usize| {
        if idx < 3 * nj {
            B::Sl(idx / nj, idx % nj)
        } else if idx < p.d0() {
            let r = idx - 3 * nj;
            B::Vt(r / nt, r % nt)
        } else {
            B::D(idx - p.d0())
        }
    };
    let mut bracket = BilinearTensor::zeros(n, n, n);
    for x in 0..n {
        for y in 0..n {
            let mut out = zero_vec::<S>(n);
            match (decode(x), decode(y)) {
                (B::Sl(f, i), B::Sl(g, k)) => {
                    let c = fr.coords(&fb[f].commutator(fb[g]));
                    let ab = s.j.mul(&ej(i), &ej(k));
                    for (h, ch) in c.iter().enumerate() {
                        add_into(&mut out, p.sl(h, 0), ch, &ab);
                    }
                    let dc = p.der.coords(&s.big_d(&ej(i), &ej(k)), "D")?;
                    add_into(&mut out, p.d0(), &(two.clone() * tr[f][g].clone()), &dc);
                }
                (B::Sl(f, i), B::Vt(w, k)) | (B::Vt(w, k), B::Sl(f, i)) => {
                    let fw = fb[f].apply(&vw(w));
                    let ax = s.act(&ej(i), &et(k));
                    let sgn = if matches!(decode(x), B::Sl(..)) { S::one() } else { -S::one() };
                    for (w2, c) in fw.iter().enumerate() {
                        add_into(&mut out, p.vt(w2, 0), &(sgn.clone() * c.clone()), &ax);
                    }
                }
                (B::Vt(w1, i), B::Vt(w2, k)) => {
                    let c = fr.coords(&fr.gamma(&vw(w1), &vw(w2)));
                    let ang = s.ang(&et(i), &et(k));
                    for (h, ch) in c.iter().enumerate() {
                        add_into(&mut out, p.sl(h, 0), ch, &ang);
                    }
                    let dc = p.der.coords(&s.small_d(&et(i), &et(k)), "d")?;
                    add_into(&mut out, p.d0(), &fr.pairing(&vw(w1), &vw(w2)), &dc);
                }
                (B::D(kd), B::Sl(f, i)) | (B::Sl(f, i), B::D(kd)) => {
                    let sgn = if matches!(decode(x), B::D(_)) { S::one() } else { -S::one() };
                    add_into(&mut out, p.sl(f, 0), &sgn, &d_j(kd, i));
                }
                (B::D(kd), B::Vt(w, i)) | (B::Vt(w, i), B::D(kd)) => {
                    let sgn = if matches!(decode(x), B::D(_)) { S::one() } else { -S::one() };
                    add_into(&mut out, p.vt(w, 0), &sgn, &d_t(kd, i));
                }
                (B::D(a), B::D(b)) => {
                    let c = p.der.coords(&ders[a].commutator(&ders[b]), "[𝔡,𝔡]")?;
                    add_into(&mut out, p.d0(), &S::one(), &c);
                }
            }
            for (l, c) in out.into_iter().enumerate() {
                bracket.set(x, y, l, c);
            }
        }
    }
    let mut labels = Vec::with_capacity(n);
    for f in ["H", "E", "F"] {
        labels.extend(s.j.space.labels().iter().map(|a| format!("{f}⊗{a}")));
    }
    for w in ["u", "v"] {
        labels.extend(s.t.labels().iter().map(|x| format!("{w}⊗{x}")));
    }
    labels.extend((1..=p.der.dim()).map(|k| format!("d[{k}]")));
    let mut space = BasedSpace::new(labels)?;
    let mut grades = vec![GradeTag::SlJ; 3 * nj];
    grades.extend(vec![GradeTag::VT; 2 * nt]);
    grades.extend(vec![GradeTag::Der; p.der.dim()]);
    if s.sign == Sign::Minus {
        space = space.with_parity(grades.iter().map(|g| if *g == GradeTag::VT { Parity::Odd } else { Parity::Even }).collect())?;
    }
    let one = &s.j.unit;
    let frame: [Vector<S>; 3] = std::array::from_fn(|f| {
        let mut v = zero_vec(n);
        add_into(&mut v, p.sl(f, 0), &S::one(), one);
        v
    });
    Ok(LieAlgebra { space, bracket, grades: Some(grades), frame: Some(frame) })
}

fn count_tag<S: Scalar>(g: &LieAlgebra<S>, tag: GradeTag) -> usize {
    g.indices_with(tag).len()
}

/// `θ`, `φ` on `𝔤(J,T)`: conjugation by `[[0,1],[-1,0]]` and `diag(ω,ω²)` on
/// the `sl(V)` factor, the matrices themselves on `V`, identity on `𝔡`.
pub fn attach_dic3_to_gjt<S: Scalar>(g: &LieAlgebra<S>) -> Result<Dic3Action<S>, LieError> {
    let w = S::omega().ok_or(LieError::WrongScalarField(S::FIELD))?;
    let (nsl, nvt, nd) = (count_tag(g, GradeTag::SlJ), count_tag(g, GradeTag::VT), count_tag(g, GradeTag::Der));
    if nsl + nvt + nd != g.dim() || nsl % 3 != 0 || nvt % 2 != 0 || g.grades.is_none() {
        return Err(LieError::Precondition("algebra does not carry the sl⊗J / V⊗T / der layout".into()));
    }
    let (nj, nt) = (nsl / 3, nvt / 2);
    let i = |x: i64| S::from_i64(x);
    let theta_v = Matrix::from_rows(&[vec![i(0), i(1)], vec![i(-1), i(0)]]);
    let phi_v = Matrix::from_rows(&[vec![w.clone(), i(0)], vec![i(0), w.clone() * w.clone()]]);
    let fr = Sl2Frame::<S>::standard();
    let fb = fr.basis();
    let lift = |p: &Matrix<S>| {
        let inv = inverse2(p);
        let mut m = Matrix::zeros(g.dim(), g.dim());
        for f in 0..3 {
            let c = fr.coords(&p.mul(fb[f]).mul(&inv));
            for a in 0..nj {
                for (h, ch) in c.iter().enumerate() {
                    m.set(h * nj + a, f * nj + a, ch.clone());
                }
            }
        }
        for wi in 0..2 {
            let col = p.column(wi);
            for x in 0..nt {
                for (w2, c) in col.iter().enumerate() {
                    m.set(nsl + w2 * nt + x, nsl + wi * nt + x, c.clone());
                }
            }
        }
        for k in nsl + nvt..g.dim() {
            m.set(k, k, S::one());
        }
        m
    };
    Ok(Dic3Action { theta: lift(&theta_v), phi: lift(&phi_v) })
}

fn inverse2<S: Scalar>(p: &Matrix<S>) -> Matrix<S> {
    let det = p.get(0, 0).clone() * p.get(1, 1).clone() - p.get(0, 1).clone() * p.get(1, 0).clone();
    let d = det.inv().expect("invertible 2x2 matrix");
    Matrix::from_rows(&[
        vec![p.get(1, 1).clone() * d.clone(), -(p.get(0, 1).clone() * d.clone())],
        vec![-(p.get(1, 0).clone() * d.clone()), p.get(0, 0).clone() * d],
    ])
}

/// The pieces of `𝔤(U)`: operator spans of each even grade on `𝒯 = U ⊕ U`.
struct GuParts<S: Scalar> {
    nu: usize,
    lower: OpSpan<S>,
    diag: OpSpan<S>,
    upper: OpSpan<S>,
    /// All even basis matrices in order lower, diagonal, upper.
    even: SpanBasis<S>,
}

impl<S: Scalar> GuParts<S> {
    fn new(u: &Fkts<S>) -> Self {
        let nu = u.dim();
        let m = 2 * nu;
        let e = |i| unit_vec::<S>(nu, i);
        let pairs: Vec<(usize, usize)> = (0..nu).flat_map(|a| (0..nu).map(move |b| (a, b))).collect();
        let eps = u.epsilon.scalar::<S>();
        let corner = |k: Matrix<S>, upper: bool| {
            let mut x = Matrix::zeros(m, m);
            if upper {
                x.set_block(0, nu, &k);
            } else {
                x.set_block(nu, 0, &k);
            }
            x
        };
        let lower = OpSpan::new(m, pairs.iter().map(|&(a, b)| ((a, b), corner(u.k_op(&e(a), &e(b)), false))));
        let diag = OpSpan::new(
            m,
            pairs.iter().map(|&(a, b)| {
                let mut x = Matrix::zeros(m, m);
                x.set_block(0, 0, &u.l_op(&e(a), &e(b)));
                x.set_block(nu, nu, &u.l_op(&e(b), &e(a)).scale(&eps));
                ((a, b), x)
            }),
        );
        let upper = OpSpan::new(m, pairs.iter().map(|&(a, b)| ((a, b), corner(u.k_op(&e(a), &e(b)), true))));
        let even = SpanBasis::from_vectors(
            m * m,
            lower.span.elems().iter().chain(diag.span.elems()).chain(upper.span.elems()).collect::<Vec<_>>(),
        );
        GuParts { nu, lower, diag, upper, even }
    }

    fn dims(&self) -> [usize; 5] {
        [self.lower.dim(), self.nu, self.diag.dim(), self.nu, self.upper.dim()]
    }

    fn offsets(&self) -> [usize; 6] {
        let d = self.dims();
        let mut o = [0; 6];
        for i in 0..5 {
            o[i + 1] = o[i] + d[i];
        }
        o
    }

    fn dim(&self) -> usize {
        self.offsets()[5]
    }

    /// Even basis index `k` (in lower, diag, upper order) to algebra index.
    fn even_index(&self, k: usize) -> usize {
        let o = self.offsets();
        let (l, d) = (self.lower.dim(), self.diag.dim());
        if k < l {
            o[0] + k
        } else if k < l + d {
            o[2] + k - l
        } else {
            o[4] + k - l - d
        }
    }

    fn even_mat(&self, k: usize) -> Matrix<S> {
        let m = 2 * self.nu;
        Matrix::from_flat(m, m, self.even.elems()[k].clone())
    }

    /// `(a;b)` to algebra coordinates.
    fn odd_vec(&self, t: &[S]) -> Vector<S> {
        let o = self.offsets();
        let mut v = zero_vec(self.dim());
        add_into(&mut v, o[3], &S::one(), &t[..self.nu]);
        add_into(&mut v, o[1], &S::one(), &t[self.nu..]);
        v
    }

    fn even_vec(&self, x: &Matrix<S>) -> Result<Vector<S>, LieError> {
        let c = self.even.coords(x.flat()).ok_or_else(|| LieError::Closure("operator outside the even part".into()))?;
        let mut v = zero_vec(self.dim());
        for (k, ck) in c.iter().enumerate() {
            v[self.even_index(k)] = ck.clone();
        }
        Ok(v)
    }

    /// Decodes an algebra basis index into an even matrix or an odd vector.
    fn element(&self, idx: usize) -> Result<Matrix<S>, Vector<S>> {
        let o = self.offsets();
        let nu = self.nu;
        if idx < o[1] {
            Ok(self.even_mat(idx - o[0]))
        } else if idx < o[2] {
            Err(unit_vec(2 * nu, nu + idx - o[1]))
        } else if idx < o[3] {
            Ok(self.even_mat(self.lower.dim() + idx - o[2]))
        } else if idx < o[4] {
            Err(unit_vec(2 * nu, idx - o[3]))
        } else {
            Ok(self.even_mat(self.lower.dim() + self.diag.dim() + idx - o[4]))
        }
    }
}

/// `[(a₁;b₁),(a₂;b₂)]` as an operator on `𝒯`.
fn odd_bracket<S: Scalar>(u: &Fkts<S>, t1: &[S], t2: &[S]) -> Matrix<S> {
    let nu = u.dim();
    let (a1, b1) = t1.split_at(nu);
    let (a2, b2) = t2.split_at(nu);
    let (eps, del) = (u.epsilon.scalar::<S>(), u.delta.scalar::<S>());
    let mut tl = u.l_op(a1, b2);
    tl.axpy(&-del.clone(), &u.l_op(a2, b1));
    let tr = u.k_op(a1, a2).scale(&del);
    let bl = u.k_op(b1, b2).scale(&-eps.clone());
    let mut br = u.l_op(b2, a1).scale(&eps);
    br.axpy(&-(eps * del), &u.l_op(b1, a2));
    let mut x = Matrix::zeros(2 * nu, 2 * nu);
    x.set_block(0, 0, &tl);
    x.set_block(0, nu, &tr);
    x.set_block(nu, 0, &bl);
    x.set_block(nu, nu, &br);
    x
}

/// The five-graded `𝔤(U) = ℒ ⊕ 𝒯`, ordered by grade `-2..=2`. Grade `1` is
/// `(U;0)`, grade `-1` is `(0;U)`. For `δ = -1` the summand `𝒯` is odd.
pub fn build_g_u<S: Scalar>(u: &Fkts<S>) -> Result<LieAlgebra<S>, LieError> {
    if !u.check_fk().passed() {
        return Err(LieError::Precondition("system fails its defining identities".into()));
    }
    let p = GuParts::new(u);
    let n = p.dim();
    let elems: Vec<Result<Matrix<S>, Vector<S>>> = (0..n).map(|i| p.element(i)).collect();
    let mut bracket = BilinearTensor::zeros(n, n, n);
    for x in 0..n {
        for y in 0..n {
            let out = match (&elems[x], &elems[y]) {
                (Ok(a), Ok(b)) => p.even_vec(&a.commutator(b))?,
                (Ok(a), Err(t)) => p.odd_vec(&a.apply(t)),
                (Err(t), Ok(a)) => p.odd_vec(&vec_neg(&a.apply(t))),
                (Err(t1), Err(t2)) => p.even_vec(&odd_bracket(u, t1, t2))?,
            };
            for (l, c) in out.into_iter().enumerate() {
                bracket.set(x, y, l, c);
            }
        }
    }
    let mut labels = Vec::with_capacity(n);
    labels.extend((1..=p.lower.dim()).map(|k| format!("K-[{k}]")));
    labels.extend(u.space.labels().iter().map(|x| format!("(0;{x})")));
    labels.extend((1..=p.diag.dim()).map(|k| format!("L[{k}]")));
    labels.extend(u.space.labels().iter().map(|x| format!("({x};0)")));
    labels.extend((1..=p.upper.dim()).map(|k| format!("K+[{k}]")));
    let mut grades = Vec::with_capacity(n);
    for (g, d) in p.dims().iter().enumerate() {
        grades.extend(std::iter::repeat(GradeTag::Grade(g as i8 - 2)).take(*d));
    }
    let mut space = BasedSpace::new(labels)?;
    if u.delta == Sign::Minus {
        space = space.with_parity(
            grades.iter().map(|g| if matches!(g, GradeTag::Grade(1) | GradeTag::Grade(-1)) { Parity::Odd } else { Parity::Even }).collect(),
        )?;
    }
    Ok(LieAlgebra { space, bracket, grades: Some(grades), frame: None })
}

/// `φ` scales grade `i` by `ωⁱ`; `θ` is `(a;b) ↦ (-εb; δa)` on `𝒯` and
/// conjugation by that map on `ℒ`. Fails unless `g` is `build_g_u(u)`.
pub fn attach_dic3_to_gu<S: Scalar>(g: &LieAlgebra<S>, u: &Fkts<S>) -> Result<Dic3Action<S>, LieError> {
    let w = S::omega().ok_or(LieError::WrongScalarField(S::FIELD))?;
    let rebuilt = build_g_u(u)?;
    if rebuilt.bracket != g.bracket {
        return Err(LieError::Precondition("algebra was not built from this system".into()));
    }
    let p = GuParts::new(u);
    let (n, nu) = (p.dim(), p.nu);
    let (eps, del) = (u.epsilon.scalar::<S>(), u.delta.scalar::<S>());
    let mut big = Matrix::zeros(2 * nu, 2 * nu);
    let mut big_inv = Matrix::zeros(2 * nu, 2 * nu);
    for i in 0..nu {
        big.set(i, nu + i, -eps.clone());
        big.set(nu + i, i, del.clone());
        big_inv.set(i, nu + i, del.clone());
        big_inv.set(nu + i, i, -eps.clone());
    }
    let mut theta_cols = Vec::with_capacity(n);
    for idx in 0..n {
        theta_cols.push(match p.element(idx) {
            Ok(x) => p.even_vec(&big.mul(&x).mul(&big_inv))?,
            Err(t) => p.odd_vec(&big.apply(&t)),
        });
    }
    let w2 = w.clone() * w.clone();
    let tags = g.grades.clone().unwrap_or_default();
    let phi = Matrix::from_fn(n, n, |i, k| {
        if i != k {
            return S::zero();
        }
        match tags.get(i) {
            Some(GradeTag::Grade(-2)) | Some(GradeTag::Grade(1)) => w.clone(),
            Some(GradeTag::Grade(-1)) | Some(GradeTag::Grade(2)) => w2.clone(),
            _ => S::one(),
        }
    });
    Ok(Dic3Action { theta: Matrix::from_columns(n, &theta_cols), phi })
}

/// `𝔤(A) = τ(A,A) ⊕ ι₁(A) ⊕ ι₂(A)` with its dicyclic action. `τ(u,v)` is
/// realized on `ι₁(A) ⊕ ι₂(A)` as `x ↦ {u,v,x}` and `x ↦ -{v,ū,x}`.
pub fn build_g_a<S: Scalar>(a: &DicyclicTernary<S>) -> Result<(LieAlgebra<S>, Dic3Action<S>), LieError> {
    if !a.check_d_axioms().passed() {
        return Err(LieError::Precondition("dicyclic axioms fail".into()));
    }
    let m = a.dim();
    let e = |i| unit_vec::<S>(m, i);
    let tau = |x: &[S], y: &[S]| {
        let mut t = Matrix::zeros(2 * m, 2 * m);
        t.set_block(0, 0, &a.triple.op_xy(x, y));
        t.set_block(m, m, &a.triple.op_xy(y, &a.b(x)).neg());
        t
    };
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).map(move |k| (i, k))).collect();
    let taus = OpSpan::new(2 * m, pairs.iter().map(|&(i, k)| ((i, k), tau(&e(i), &e(k)))));
    let nt = taus.dim();
    let n = nt + 2 * m;
    let tmats: Vec<Matrix<S>> = (0..nt).map(|k| taus.mat(k)).collect();
    let tau_vec = |t: &Matrix<S>| -> Result<Vector<S>, LieError> {
        let mut v = zero_vec(n);
        add_into(&mut v, 0, &S::one(), &taus.coords(t, "τ")?);
        Ok(v)
    };
    let iota = |which: usize, x: &[S]| {
        let mut v = zero_vec(n);
        add_into(&mut v, nt + which * m, &S::one(), x);
        v
    };
    let part = |idx: usize| -> (usize, usize) {
        if idx < nt {
            (0, idx)
        } else {
            (1 + (idx - nt) / m, (idx - nt) % m)
        }
    };
    let mut bracket = BilinearTensor::zeros(n, n, n);
    for x in 0..n {
        for y in 0..n {
            let out = match (part(x), part(y)) {
                ((0, i), (0, k)) => tau_vec(&tmats[i].commutator(&tmats[k]))?,
                ((0, i), (w, k)) => {
                    let col = tmats[i].column((w - 1) * m + k);
                    let mut v = zero_vec(n);
                    add_into(&mut v, nt, &S::one(), &col);
                    v
                }
                ((w, k), (0, i)) => {
                    let col = tmats[i].column((w - 1) * m + k);
                    let mut v = zero_vec(n);
                    add_into(&mut v, nt, &-S::one(), &col);
                    v
                }
                ((1, i), (1, k)) => iota(1, &a.mul(&e(i), &e(k))),
                ((2, i), (2, k)) => iota(0, &a.b(&a.mul(&e(i), &e(k)))),
                ((1, i), (2, k)) => tau_vec(&tau(&e(i), &e(k)))?,
                ((2, k), (1, i)) => vec_neg(&tau_vec(&tau(&e(i), &e(k)))?),
                _ => unreachable!("three summands"),
            };
            for (l, c) in out.into_iter().enumerate() {
                bracket.set(x, y, l, c);
            }
        }
    }
    let mut labels: Vec<String> = (1..=nt).map(|k| format!("tau[{k}]")).collect();
    labels.extend(a.space.labels().iter().map(|x| format!("i1({x})")));
    labels.extend(a.space.labels().iter().map(|x| format!("i2({x})")));
    let g = LieAlgebra { space: BasedSpace::new(labels)?, bracket, grades: None, frame: None };

    let theta_cols = (0..n)
        .map(|idx| match part(idx) {
            (0, k) => {
                let (i, j) = taus.origins[k];
                tau_vec(&tau(&a.b(&e(j)), &e(i)).neg())
            }
            (1, i) => Ok(iota(1, &e(i))),
            (_, i) => Ok(iota(0, &a.b(&e(i)))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let theta = Matrix::from_columns(n, &theta_cols);
    let phi = match S::omega() {
        Some(w) => {
            let w2 = w.clone() * w.clone();
            Matrix::from_fn(n, n, |i, k| match (i == k, part(i).0) {
                (false, _) => S::zero(),
                (true, 0) => S::one(),
                (true, 1) => w.clone(),
                (true, _) => w2.clone(),
            })
        }
        // Over ℚ only θ is meaningful; φ is left as the identity.
        None => Matrix::identity(n),
    };
    Ok((g, Dic3Action { theta, phi }))
}

/// The `sl₂` frame of `𝔤(A)` from a unit `e`: `H = τ(e,e)`, `E = -ι₂(e)`,
/// `F = ι₁(e)`.
pub fn frame_from_unit<S: Scalar>(g: &LieAlgebra<S>, a: &DicyclicTernary<S>, e: &[S]) -> Result<[Vector<S>; 3], LieError> {
    let m = a.dim();
    let nt = g.dim() - 2 * m;
    let iota = |which: usize, x: &[S]| {
        let mut v = zero_vec(g.dim());
        add_into(&mut v, nt + which * m, &S::one(), x);
        v
    };
    let f = iota(0, e);
    let en = vec_neg(&iota(1, e));
    let h = g.br(&f, &iota(1, e));
    let frame = [h, en, f];
    check_frame(g, &frame)?;
    Ok(frame)
}

impl<S: Scalar> Dic3Action<S> {
    /// Automorphism and group-relation checks; `theta2` is reported but not
    /// required.
    pub fn report(&self, g: &LieAlgebra<S>) -> Report {
        let mut r = Report::new("dic3");
        let n = g.dim();
        for (name, m) in [("theta_automorphism", &self.theta), ("phi_automorphism", &self.phi)] {
            r.push(match automorphism_defect(m, &g.bracket) {
                Ok(found) => Check::from_sweep(name, found),
                Err(e) => Check::error(name, e.to_string()),
            });
        }
        let ok = |m: Matrix<S>| m.rows() == n && m.is_identity();
        r.push(Check::from_bool("theta4", ok(self.theta.pow(4))));
        r.push(Check::from_bool("phi3", ok(self.phi.pow(3))));
        r.push(Check::from_bool("phi_theta_phi", self.phi.mul(&self.theta).mul(&self.phi) == self.theta));
        r.insert("theta2_identity", self.is_s3());
        r
    }

    pub fn verify(&self, g: &LieAlgebra<S>) -> Result<(), Dic3Error> {
        for (map, m) in [("theta", &self.theta), ("phi", &self.phi)] {
            if let Some(c) = automorphism_defect(m, &g.bracket)? {
                return Err(Dic3Error::NotAutomorphism { map, tuple: c.tuple });
            }
        }
        if !self.theta.pow(4).is_identity() {
            return Err(Dic3Error::Relation("theta^4 = 1"));
        }
        if !self.phi.pow(3).is_identity() {
            return Err(Dic3Error::Relation("phi^3 = 1"));
        }
        if self.phi.mul(&self.theta).mul(&self.phi) != self.theta {
            return Err(Dic3Error::Relation("phi theta phi = theta"));
        }
        Ok(())
    }

    /// `θ² = 1`, the case where the action factors through `S₃`.
    pub fn is_s3(&self) -> bool {
        self.theta.pow(2).is_identity()
    }

    /// Dimensions of the `φ`-eigenspaces for `1, ω, ω²`.
    pub fn eigen_dims(&self) -> Result<[usize; 3], LieError> {
        let w = S::omega().ok_or(LieError::WrongScalarField(S::FIELD))?;
        let n = self.phi.rows();
        let w2 = w.clone() * w.clone();
        Ok([S::one(), w, w2].map(|l| self.phi.sub(&Matrix::scalar(n, l)).kernel().len()))
    }
}

/// Basis of `𝔤_ω` in `𝔤(J,T)` matched to `J ⊕ T`: `F⊗aᵢ` then `u⊗xᵢ`.
pub fn gjt_omega_basis<S: Scalar>(g: &LieAlgebra<S>) -> Result<Vec<Vector<S>>, LieError> {
    let (nsl, nvt) = (count_tag(g, GradeTag::SlJ), count_tag(g, GradeTag::VT));
    if nsl % 3 != 0 || nvt % 2 != 0 {
        return Err(LieError::Precondition("algebra does not carry the sl⊗J / V⊗T layout".into()));
    }
    let (nj, nt) = (nsl / 3, nvt / 2);
    let n = g.dim();
    Ok((0..nj).map(|a| unit_vec(n, 2 * nj + a)).chain((0..nt).map(|x| unit_vec(n, nsl + x))).collect())
}

/// Basis of `𝔤_ω` in `𝔤(U)` matched to `K(U,U) ⊕ U`: grade `-2` then grade `1`.
pub fn gu_omega_basis<S: Scalar>(g: &LieAlgebra<S>) -> Result<Vec<Vector<S>>, LieError> {
    if g.grade_dims().is_none() {
        return Err(LieError::Precondition("algebra is not five-graded".into()));
    }
    let n = g.dim();
    let lower = g.indices_with(GradeTag::Grade(-2));
    let one = g.indices_with(GradeTag::Grade(1));
    Ok(lower.into_iter().chain(one).map(|i| unit_vec(n, i)).collect())
}

/// Basis of `𝔤_ω` in `𝔤(A)` matched to `A`: the `ι₁` copy.
pub fn ga_omega_basis<S: Scalar>(g: &LieAlgebra<S>, a: &DicyclicTernary<S>) -> Vec<Vector<S>> {
    let (n, m) = (g.dim(), a.dim());
    (0..m).map(|i| unit_vec(n, n - 2 * m + i)).collect()
}

/// `ad H` eigenspaces for `-2..=2` and the `sl₂` isotypic multiplicities.
pub fn bc1_decompose<S: Scalar>(g: &LieAlgebra<S>) -> Result<Bc1Decomposition, LieError> {
    let frame = g.frame.as_ref().ok_or_else(|| LieError::Frame("no frame".into()))?;
    check_frame(g, frame)?;
    let n = g.dim();
    let [adh, ade, adf] = [&frame[0], &frame[1], &frame[2]].map(|v| g.ad(v));
    let spaces: Vec<Vec<Vector<S>>> =
        (-2..=2).map(|l| adh.sub(&Matrix::scalar(n, S::from_i64(l))).kernel()).collect();
    let all: Vec<Vector<S>> = spaces.iter().flatten().cloned().collect();
    let span = SpanBasis::from_vectors(n, &all);
    if span.dim() != n {
        let witness = (0..n).find(|&i| !span.contains(&unit_vec(n, i))).unwrap_or(0);
        return Err(LieError::NotExhausted { dim: n, found: span.dim(), witness });
    }
    let dims: [usize; 5] = std::array::from_fn(|i| spaces[i].len());
    let mut stacked = Vec::with_capacity(3 * n);
    for m in [&adh, &ade, &adf] {
        for r in 0..n {
            stacked.push(m.row(r));
        }
    }
    let trivial = Matrix::from_rows(&stacked).kernel().len();
    let (adjoint, natural) = (dims[4], dims[3]);
    let image_rank = |m: &Matrix<S>, vs: &[Vector<S>]| {
        let imgs: Vec<Vector<S>> = vs.iter().map(|v| m.apply(v)).collect();
        crate::linalg::rank(&imgs)
    };
    let verified = dims[2] == adjoint + trivial
        && dims[0] == adjoint
        && dims[1] == natural
        && image_rank(&ade, &spaces[0]) == adjoint
        && image_rank(&ade, &spaces[2]) == adjoint
        && image_rank(&adf, &spaces[4]) == adjoint
        && image_rank(&adf, &spaces[2]) == adjoint
        && image_rank(&ade, &spaces[1]) == natural
        && image_rank(&adf, &spaces[3]) == natural;
    Ok(Bc1Decomposition { adjoint, natural, trivial, eigen_dims: dims, verified })
}

/// The map `𝔤(U) → 𝔤(J,U)` for a special system with `ε = δ`, where
/// `J = F·1 + K(U,U)`: `(a;b) ↦ u⊗a - ½v⊗b` on `𝒯`. The scales have product
/// `-½`; the triple product `[[x,y],z]` of `V⊗U` is `-2` times that of `𝒯`.
/// Even part: `diag ↦ -½(εH⊗K(a,b) + d_{a,b})`, `upper K(a,b) ↦ -2E⊗K(a,b)`,
/// `lower K(a,b) ↦ -½F⊗K(a,b)`, read off from `[(a;0),(0;b)] = diag(L(a,b), εL(b,a))`,
/// `[(a;0),(b;0)] = δ·upper K(a,b)` and `[(0;a),(0;b)] = -ε·lower K(a,b)`.
pub fn embed_gu_in_gjt<S: Scalar>(u: &Fkts<S>) -> Result<Embedding<S>, LieError> {
    embed_gu_in_gjt_scaled(u, S::one(), S::from_rational(crate::scalars::q(-1, 2)))
}

/// [`embed_gu_in_gjt`] with `(a;b) ↦ α u⊗a + β v⊗b`; the even part is
/// determined by the brackets of `𝒯`.
pub fn embed_gu_in_gjt_scaled<S: Scalar>(u: &Fkts<S>, alpha: S, beta: S) -> Result<Embedding<S>, LieError> {
    if u.epsilon != u.delta || !u.is_special() {
        return Err(LieError::Precondition("needs a special system with equal signs".into()));
    }
    let s = JTernary::from_special_fkts(u).map_err(|e| LieError::Precondition(e.to_string()))?;
    let source = build_g_u(u)?;
    let target = build_g_jt(&s)?;
    let gu = GuParts::new(u);
    let gj = GjtParts::new(&s);
    let nu = u.dim();
    let (eps, del) = (u.epsilon.scalar::<S>(), u.delta.scalar::<S>());
    let (ns, nt) = (source.dim(), target.dim());
    let t_image = |w: usize, i: usize| {
        let mut v = zero_vec::<S>(nt);
        v[gj.vt(w, i)] = if w == 0 { alpha.clone() } else { beta.clone() };
        v
    };
    let o = gu.offsets();
    let mut cols = Vec::with_capacity(ns);
    for idx in 0..ns {
        let col = if idx < o[1] {
            let (a, b) = gu.lower.origins[idx];
            crate::linalg::vec_scale(&-eps.clone(), &target.br(&t_image(1, a), &t_image(1, b)))
        } else if idx < o[2] {
            t_image(1, idx - o[1])
        } else if idx < o[3] {
            let (a, b) = gu.diag.origins[idx - o[2]];
            target.br(&t_image(0, a), &t_image(1, b))
        } else if idx < o[4] {
            t_image(0, idx - o[3])
        } else {
            let (a, b) = gu.upper.origins[idx - o[4]];
            crate::linalg::vec_scale(&del, &target.br(&t_image(0, a), &t_image(0, b)))
        };
        cols.push(col);
    }
    debug_assert_eq!(gu.nu, nu);
    let map = Matrix::from_columns(nt, &cols);
    let injective = map.rank() == ns;
    let homomorphism = sweep(&[ns, ns], |t| {
        let lhs = map.apply(source.bracket.basis(t[0], t[1]));
        let rhs = target.br(&cols[t[0]], &cols[t[1]]);
        (lhs, rhs)
    });
    Ok(Embedding { source, target, map, injective, homomorphism })
}

/// Multiplicities and checks from [`bc1_decompose`] as a report.
pub fn bc1_report<S: Scalar>(g: &LieAlgebra<S>) -> Report {
    let mut r = Report::new("bc1");
    match bc1_decompose(g) {
        Ok(d) => {
            r.insert("multiplicities", json!([d.adjoint, d.natural, d.trivial]));
            r.insert("eigen_dims", json!(d.eigen_dims));
            r.push(Check::from_bool("bc1_verified", d.verified));
        }
        Err(e) => r.push(Check::error("bc1", e.to_string())),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Cyc, Rational};

    #[test]
    fn sl2_is_lie_with_single_adjoint_copy() {
        let g = LieAlgebra::<Rational>::sl2();
        assert!(g.jacobi_defect().unwrap().is_empty());
        let d = bc1_decompose(&g).unwrap();
        assert_eq!((d.adjoint, d.natural, d.trivial, d.verified), (1, 0, 0, true));
    }

    #[test]
    fn grade_tags_roundtrip_through_strings() {
        for t in [GradeTag::Grade(-2), GradeTag::Grade(1), GradeTag::SlJ, GradeTag::VT, GradeTag::Der] {
            assert_eq!(t.to_string().parse::<GradeTag>().unwrap(), t);
        }
        assert!("(3)".parse::<GradeTag>().is_err());
    }

    #[test]
    fn abelian_frame_is_rejected() {
        let g = LieAlgebra::<Cyc>::new(BasedSpace::numbered("z", 4), BilinearTensor::zeros(4, 4, 4)).unwrap();
        let z = vec![Cyc::zero(); 4];
        assert!(matches!(g.with_frame([z.clone(), z.clone(), z]), Err(LieError::Frame(_))));
    }
}
