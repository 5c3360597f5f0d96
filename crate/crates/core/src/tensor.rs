//! Based vector spaces, dense structure-constant tensors and the generic
//! Lie / super-Lie verification kernel.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{axpy, is_zero_vec, unit_vec, zero_vec, Matrix, Vector};
use crate::report::{sweep, Counterexample};
use crate::scalars::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("super check requested on a space without parity")]
    MissingParity,
    #[error("bracket of basis elements {0} and {1} does not respect parity")]
    ParityViolation(usize, usize),
    #[error("product is not endomorphic")]
    NotEndomorphic,
}

fn expect_dim(expected: usize, found: usize) -> Result<(), TensorError> {
    if expected == found {
        Ok(())
    } else {
        Err(TensorError::DimensionMismatch { expected, found })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `(-1)^{|x||y|}`
    pub fn koszul<S: Scalar>(self, other: Parity) -> S {
        if self.is_odd() && other.is_odd() {
            -S::one()
        } else {
            S::one()
        }
    }
}

/// A vector space with a distinguished, labelled basis and optional
/// `Z/2`-grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedSpace {
    labels: Vec<String>,
    parity: Option<Vec<Parity>>,
}

impl BasedSpace {
    pub fn new(labels: Vec<String>) -> Result<Self, TensorError> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(TensorError::DuplicateLabel(l.clone()));
            }
        }
        Ok(BasedSpace { labels, parity: None })
    }

    /// Basis `prefix1 .. prefixN`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        BasedSpace { labels: (1..=n).map(|i| format!("{prefix}{i}")).collect(), parity: None }
    }

    pub fn with_parity(mut self, parity: Vec<Parity>) -> Result<Self, TensorError> {
        expect_dim(self.labels.len(), parity.len())?;
        self.parity = Some(parity);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_super(&self) -> bool {
        self.parity.is_some()
    }

    pub fn parities(&self) -> Option<&[Parity]> {
        self.parity.as_deref()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity.as_ref().map_or(Parity::Even, |p| p[i])
    }

    /// `(even, odd)` dimensions.
    pub fn super_dim(&self) -> (usize, usize) {
        let odd = (0..self.dim()).filter(|&i| self.parity(i).is_odd()).count();
        (self.dim() - odd, odd)
    }
}

/// Structure constants of a bilinear map: `e_i o e_j = sum_k c[i][j][k] f_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearTensor<S> {
    left: usize,
    right: usize,
    out: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> BilinearTensor<S> {
    pub fn zeros(left: usize, right: usize, out: usize) -> Self {
        BilinearTensor { left, right, out, coeffs: vec![S::zero(); left * right * out] }
    }

    /// Fills the tensor from the product of each pair of basis vectors.
    pub fn from_fn(left: usize, right: usize, out: usize, mut f: impl FnMut(usize, usize) -> Vector<S>) -> Self {
        let mut t = Self::zeros(left, right, out);
        for i in 0..left {
            for j in 0..right {
                let v = f(i, j);
                assert_eq!(v.len(), out, "bilinear fill: wrong output length");
                t.coeffs[(i * right + j) * out..(i * right + j + 1) * out].clone_from_slice(&v);
            }
        }
        t
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.left, self.right, self.out)
    }

    pub fn is_endomorphic(&self) -> bool {
        self.left == self.right && self.right == self.out
    }

    /// `e_i o e_j` as a coordinate slice.
    pub fn basis(&self, i: usize, j: usize) -> &[S] {
        let o = (i * self.right + j) * self.out;
        &self.coeffs[o..o + self.out]
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &S {
        &self.coeffs[(i * self.right + j) * self.out + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: S) {
        self.coeffs[(i * self.right + j) * self.out + k] = v;
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    pub fn apply(&self, x: &[S], y: &[S]) -> Result<Vector<S>, TensorError> {
        expect_dim(self.left, x.len())?;
        expect_dim(self.right, y.len())?;
        let mut out = zero_vec(self.out);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(xi.clone() * yj), self.basis(i, j));
            }
        }
        Ok(out)
    }

    /// Like [`apply`](Self::apply) for arguments whose sizes are known to match.
    pub fn eval(&self, x: &[S], y: &[S]) -> Vector<S> {
        self.apply(x, y).expect("bilinear argument dimensions")
    }

    /// `y -> x o y`
    pub fn left_mult(&self, x: &[S]) -> Matrix<S> {
        let cols: Vec<_> = (0..self.right).map(|j| self.eval(x, &unit_vec(self.right, j))).collect();
        Matrix::from_columns(self.out, &cols)
    }

    /// `x -> x o y`
    pub fn right_mult(&self, y: &[S]) -> Matrix<S> {
        let cols: Vec<_> = (0..self.left).map(|i| self.eval(&unit_vec(self.left, i), y)).collect();
        Matrix::from_columns(self.out, &cols)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BilinearTensor<T> {
        BilinearTensor { left: self.left, right: self.right, out: self.out, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Nonzero entries as `(i, j, k, c)`, in index order.
    pub fn entries(&self) -> Vec<(usize, usize, usize, S)> {
        let mut v = Vec::new();
        for i in 0..self.left {
            for j in 0..self.right {
                for (k, c) in self.basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        v.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        v
    }
}

/// Structure constants of a trilinear map `(e_i, e_j, e_k) -> sum_l c[i][j][k][l] f_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrilinearTensor<S> {
    dims: [usize; 3],
    out: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> TrilinearTensor<S> {
    pub fn zeros(dims: [usize; 3], out: usize) -> Self {
        TrilinearTensor { dims, out, coeffs: vec![S::zero(); dims[0] * dims[1] * dims[2] * out] }
    }

    pub fn from_fn(dims: [usize; 3], out: usize, mut f: impl FnMut(usize, usize, usize) -> Vector<S>) -> Self {
        let mut t = Self::zeros(dims, out);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    let v = f(i, j, k);
                    assert_eq!(v.len(), out, "trilinear fill: wrong output length");
                    let o = t.offset(i, j, k);
                    t.coeffs[o..o + out].clone_from_slice(&v);
                }
            }
        }
        t
    }

    /// Endomorphic tensor on an `n`-dimensional space.
    pub fn endo(n: usize, f: impl FnMut(usize, usize, usize) -> Vector<S>) -> Self {
        Self::from_fn([n, n, n], n, f)
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        ((i * self.dims[1] + j) * self.dims[2] + k) * self.out
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn out_dim(&self) -> usize {
        self.out
    }

    pub fn is_endomorphic(&self) -> bool {
        self.dims.iter().all(|&d| d == self.out)
    }

    pub fn basis(&self, i: usize, j: usize, k: usize) -> &[S] {
        let o = self.offset(i, j, k);
        &self.coeffs[o..o + self.out]
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        &self.coeffs[self.offset(i, j, k) + l]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: S) {
        let o = self.offset(i, j, k) + l;
        self.coeffs[o] = v;
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    pub fn apply(&self, x: &[S], y: &[S], z: &[S]) -> Result<Vector<S>, TensorError> {
        expect_dim(self.dims[0], x.len())?;
        expect_dim(self.dims[1], y.len())?;
        expect_dim(self.dims[2], z.len())?;
        let mut out = zero_vec(self.out);
        for (i, xi) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let xy = xi.clone() * yj;
                for (k, zk) in z.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    axpy(&mut out, &(xy.clone() * zk), self.basis(i, j, k));
                }
            }
        }
        Ok(out)
    }

    pub fn eval(&self, x: &[S], y: &[S], z: &[S]) -> Vector<S> {
        self.apply(x, y, z).expect("trilinear argument dimensions")
    }

    /// `z -> (x, y, z)`
    pub fn op_xy(&self, x: &[S], y: &[S]) -> Matrix<S> {
        let n = self.dims[2];
        let cols: Vec<_> = (0..n).map(|k| self.eval(x, y, &unit_vec(n, k))).collect();
        Matrix::from_columns(self.out, &cols)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TrilinearTensor<T> {
        TrilinearTensor { dims: self.dims, out: self.out, coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize, usize, S)> {
        let mut v = Vec::new();
        for i in 0..self.dims[0] {
            for j in 0..self.dims[1] {
                for k in 0..self.dims[2] {
                    for (l, c) in self.basis(i, j, k).iter().enumerate() {
                        if !c.is_zero() {
                            v.push((i, j, k, l, c.clone()));
                        }
                    }
                }
            }
        }
        v
    }
}

/// Coordinates of `x` in the given basis of `n`-space, as a helper for sweeps.
pub fn basis_vectors<S: Scalar>(n: usize) -> Vec<Vector<S>> {
    (0..n).map(|i| unit_vec(n, i)).collect()
}

/// Basis triples `(i, j, k)` at which (super-)anticommutativity or the
/// (super-)Jacobi identity fails, in lexicographic order. A failure of
/// anticommutativity at `(i, j)` flags every triple `(i, j, k)`.
///
/// Sign convention for homogeneous `x, y, z`:
/// `[x,y] = -(-1)^{|x||y|}[y,x]` and
/// `[x,[y,z]] = [[x,y],z] + (-1)^{|x||y|}[y,[x,z]]`.
pub fn jacobi_defect<S: Scalar>(
    space: &BasedSpace,
    bracket: &BilinearTensor<S>,
    superalgebra: bool,
) -> Result<Vec<(usize, usize, usize)>, TensorError> {
    let n = space.dim();
    if !bracket.is_endomorphic() {
        return Err(TensorError::NotEndomorphic);
    }
    expect_dim(n, bracket.shape().0)?;
    if superalgebra && !space.is_super() {
        return Err(TensorError::MissingParity);
    }
    let par = |i: usize| if superalgebra { space.parity(i) } else { Parity::Even };
    if superalgebra {
        for i in 0..n {
            for j in 0..n {
                let expect = par(i).add(par(j));
                if bracket.basis(i, j).iter().enumerate().any(|(k, c)| !c.is_zero() && par(k) != expect) {
                    return Err(TensorError::ParityViolation(i, j));
                }
            }
        }
    }
    let ad: Vec<Matrix<S>> = (0..n).map(|i| bracket.left_mult(&unit_vec(n, i))).collect();
    let anti_ok = |i: usize, j: usize| {
        let sign: S = par(i).koszul(par(j));
        let mut sum = bracket.basis(i, j).to_vec();
        axpy(&mut sum, &sign, bracket.basis(j, i));
        is_zero_vec(&sum)
    };
    let mut bad = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let anti = anti_ok(i, j);
            for k in 0..n {
                if !anti {
                    bad.push((i, j, k));
                    continue;
                }
                let lhs = ad[i].apply(bracket.basis(j, k));
                let xy = bracket.basis(i, j);
                let mut rhs = zero_vec(n);
                for (l, c) in xy.iter().enumerate() {
                    if !c.is_zero() {
                        axpy(&mut rhs, c, bracket.basis(l, k));
                    }
                }
                let sign: S = par(i).koszul(par(j));
                axpy(&mut rhs, &sign, &ad[j].apply(bracket.basis(i, k)));
                if lhs != rhs {
                    bad.push((i, j, k));
                }
            }
        }
    }
    Ok(bad)
}

/// True iff `m(x o y) = m(x) o y + x o m(y)` on every basis pair.
pub fn is_derivation<S: Scalar>(m: &Matrix<S>, product: &BilinearTensor<S>) -> Result<bool, TensorError> {
    Ok(derivation_defect(m, product)?.is_none())
}

/// First basis pair where `m` fails to be a derivation of `product`.
pub fn derivation_defect<S: Scalar>(
    m: &Matrix<S>,
    product: &BilinearTensor<S>,
) -> Result<Option<Counterexample>, TensorError> {
    if !product.is_endomorphic() {
        return Err(TensorError::NotEndomorphic);
    }
    let n = product.shape().0;
    expect_dim(n, m.rows())?;
    expect_dim(n, m.cols())?;
    Ok(sweep(&[n, n], |t| {
        let (x, y) = (unit_vec(n, t[0]), unit_vec(n, t[1]));
        let lhs = m.apply(product.basis(t[0], t[1]));
        let mut rhs = product.eval(&m.apply(&x), &y);
        axpy(&mut rhs, &S::one(), &product.eval(&x, &m.apply(&y)));
        (lhs, rhs)
    }))
}

/// First basis pair where `m` fails to preserve `product`.
pub fn automorphism_defect<S: Scalar>(
    m: &Matrix<S>,
    product: &BilinearTensor<S>,
) -> Result<Option<Counterexample>, TensorError> {
    if !product.is_endomorphic() {
        return Err(TensorError::NotEndomorphic);
    }
    let n = product.shape().0;
    expect_dim(n, m.rows())?;
    expect_dim(n, m.cols())?;
    let cols: Vec<Vector<S>> = (0..n).map(|i| m.column(i)).collect();
    Ok(sweep(&[n, n], |t| (m.apply(product.basis(t[0], t[1])), product.eval(&cols[t[0]], &cols[t[1]]))))
}

/// First basis triple where `m` fails to preserve a triple product.
pub fn triple_automorphism_defect<S: Scalar>(m: &Matrix<S>, triple: &TrilinearTensor<S>) -> Option<Counterexample> {
    let n = triple.out_dim();
    let cols: Vec<Vector<S>> = (0..n).map(|i| m.column(i)).collect();
    sweep(&[n, n, n], |t| (m.apply(triple.basis(t[0], t[1], t[2])), triple.eval(&cols[t[0]], &cols[t[1]], &cols[t[2]])))
}

/// First basis triple where `m` fails to be a derivation of a triple product.
pub fn triple_derivation_defect<S: Scalar>(m: &Matrix<S>, triple: &TrilinearTensor<S>) -> Option<Counterexample> {
    let n = triple.out_dim();
    sweep(&[n, n, n], |t| {
        let (x, y, z) = (unit_vec(n, t[0]), unit_vec(n, t[1]), unit_vec(n, t[2]));
        let lhs = m.apply(triple.basis(t[0], t[1], t[2]));
        let mut rhs = triple.eval(&m.apply(&x), &y, &z);
        axpy(&mut rhs, &S::one(), &triple.eval(&x, &m.apply(&y), &z));
        axpy(&mut rhs, &S::one(), &triple.eval(&x, &y, &m.apply(&z)));
        (lhs, rhs)
    })
}

/// The fixed `sl(V)` frame on a two-dimensional symplectic space `V` with
/// basis `{u, v}` and `(u|v) = 1`.
#[derive(Clone, Debug)]
pub struct Sl2Frame<S: Scalar> {
    pub h: Matrix<S>,
    pub e: Matrix<S>,
    pub f: Matrix<S>,
    /// The symplectic form as a `V x V -> F` tensor.
    pub form: BilinearTensor<S>,
}

impl<S: Scalar> Sl2Frame<S> {
    pub fn standard() -> Self {
        let i = |x: i64| S::from_i64(x);
        let h = Matrix::from_rows(&[vec![i(1), i(0)], vec![i(0), i(-1)]]);
        let e = Matrix::from_rows(&[vec![i(0), i(1)], vec![i(0), i(0)]]);
        let f = Matrix::from_rows(&[vec![i(0), i(0)], vec![i(1), i(0)]]);
        let mut form = BilinearTensor::zeros(2, 2, 1);
        form.set(0, 1, 0, i(1));
        form.set(1, 0, 0, i(-1));
        Sl2Frame { h, e, f, form }
    }

    /// `[H, E, F]`
    pub fn basis(&self) -> [&Matrix<S>; 3] {
        [&self.h, &self.e, &self.f]
    }

    pub fn pairing(&self, a: &[S], b: &[S]) -> S {
        self.form.eval(a, b)[0].clone()
    }

    /// `trace(f g)` for `f, g` in `{H, E, F}`.
    pub fn trace_table(&self) -> [[S; 3]; 3] {
        let b = self.basis();
        std::array::from_fn(|i| std::array::from_fn(|j| b[i].mul(b[j]).trace()))
    }

    /// `gamma_{w1,w2} = (w1|.) w2 + (w2|.) w1`
    pub fn gamma(&self, w1: &[S], w2: &[S]) -> Matrix<S> {
        let cols: Vec<_> = (0..2)
            .map(|c| {
                let x = unit_vec(2, c);
                let mut out = zero_vec(2);
                axpy(&mut out, &self.pairing(w1, &x), w2);
                axpy(&mut out, &self.pairing(w2, &x), w1);
                out
            })
            .collect();
        Matrix::from_columns(2, &cols)
    }

    /// Coordinates of a traceless 2x2 matrix in `{H, E, F}`.
    pub fn coords(&self, m: &Matrix<S>) -> [S; 3] {
        debug_assert!(m.trace().is_zero(), "not in sl(V)");
        [m.get(0, 0).clone(), m.get(0, 1).clone(), m.get(1, 0).clone()]
    }

    pub fn element(&self, c: &[S]) -> Matrix<S> {
        let mut m = self.h.scale(&c[0]);
        m.axpy(&c[1], &self.e);
        m.axpy(&c[2], &self.f);
        m
    }

    /// Bracket tensor of `sl(V)` in the basis `{H, E, F}`.
    pub fn bracket(&self) -> BilinearTensor<S> {
        let b = self.basis();
        BilinearTensor::from_fn(3, 3, 3, |i, j| self.coords(&b[i].commutator(b[j])).to_vec())
    }
}
