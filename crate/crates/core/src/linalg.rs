//! Dense exact matrices, fraction-free elimination and span bookkeeping.

use std::fmt;

use crate::scalars::Scalar;

/// Coordinate vector.
pub type Vector<S> = Vec<S>;

pub fn zero_vec<S: Scalar>(n: usize) -> Vector<S> {
    vec![S::zero(); n]
}

pub fn unit_vec<S: Scalar>(n: usize, i: usize) -> Vector<S> {
    let mut v = zero_vec(n);
    v[i] = S::one();
    v
}

pub fn is_zero_vec<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `acc += c * v`
pub fn axpy<S: Scalar>(acc: &mut [S], c: &S, v: &[S]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c.clone() * x);
        }
    }
}

pub fn vec_add<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

pub fn vec_sub<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

pub fn vec_scale<S: Scalar>(c: &S, v: &[S]) -> Vector<S> {
    v.iter().map(|x| c.clone() * x).collect()
}

pub fn vec_neg<S: Scalar>(v: &[S]) -> Vector<S> {
    v.iter().map(|x| -x.clone()).collect()
}

/// Dense row-major matrix. A `LinearMap` from a `cols`-dimensional space to a
/// `rows`-dimensional one; column `j` is the image of basis vector `j`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn scalar(n: usize, c: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(rows: usize, cols: &[Vector<S>]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn from_rows(rows: &[Vector<S>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j].clone())
    }

    /// Reads a flattened (row-major) matrix back.
    pub fn from_flat(rows: usize, cols: usize, data: Vector<S>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &S) {
        self.data[i * self.cols + j] += v;
    }

    pub fn flat(&self) -> &[S] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vector<S> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn apply(&self, v: &[S]) -> Vector<S> {
        assert_eq!(v.len(), self.cols, "matrix/vector dimension mismatch");
        let mut out = zero_vec(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let m = self.get(i, j);
                if !m.is_zero() {
                    *o += &(m.clone() * x);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a.clone() * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &other.data) }
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: vec_scale(c, &self.data) }
    }

    pub fn neg(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: vec_neg(&self.data) }
    }

    /// `self += c * other`
    pub fn axpy(&mut self, c: &S, other: &Self) {
        axpy(&mut self.data, c, &other.data);
    }

    /// `[A, B] = AB - BA`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `AB + BA`
    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        rank(&(0..self.rows).map(|i| self.row(i)).collect::<Vec<_>>())
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vector<S>> {
        let rows: Vec<_> = (0..self.rows).map(|i| self.row(i)).collect();
        let (rref, pivots) = rref(rows, self.cols);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = zero_vec(self.cols);
            v[free] = S::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rref[r][free].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Places `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Fraction-free (Bareiss) forward elimination. Returns the echelon rows and
/// the pivot column of each nonzero row. Entries stay minors of the input, so
/// coefficient growth is polynomial.
pub fn bareiss_echelon<S: Scalar>(mut rows: Vec<Vector<S>>, ncols: usize) -> (Vec<Vector<S>>, Vec<usize>) {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let piv = rows[r][c].clone();
        let inv_prev = prev.inv().expect("Bareiss pivots are nonzero");
        for i in r + 1..nrows {
            let lead = rows[i][c].clone();
            for j in 0..ncols {
                let v = (piv.clone() * &rows[i][j] - lead.clone() * &rows[r][j]) * &inv_prev;
                rows[i][j] = v;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<S: Scalar>(rows: &[Vector<S>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    bareiss_echelon(rows.to_vec(), ncols).1.len()
}

/// Reduced row echelon form: pivots normalised to one and cleared above.
pub fn rref<S: Scalar>(rows: Vec<Vector<S>>, ncols: usize) -> (Vec<Vector<S>>, Vec<usize>) {
    let (mut ech, pivots) = bareiss_echelon(rows, ncols);
    for r in (0..ech.len()).rev() {
        let p = pivots[r];
        let inv = ech[r][p].inv().expect("pivot is nonzero");
        for x in ech[r].iter_mut() {
            *x *= &inv;
        }
        for s in 0..r {
            let f = ech[s][p].clone();
            if !f.is_zero() {
                let row = ech[r].clone();
                axpy(&mut ech[s], &-f, &row);
            }
        }
    }
    (ech, pivots)
}

/// Solves `A c = b` where `A` has the given columns. Free variables are set to
/// zero; `None` when `b` is outside the column span.
pub fn solve<S: Scalar>(columns: &[Vector<S>], b: &[S]) -> Option<Vector<S>> {
    let n = columns.len();
    let m = b.len();
    let rows: Vec<Vector<S>> = (0..m)
        .map(|i| {
            let mut row: Vector<S> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let (rref, pivots) = rref(rows, n + 1);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = zero_vec(n);
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = rref[r][n].clone();
    }
    Some(x)
}

/// Incrementally maintained basis of a subspace.
///
/// Elements are kept exactly as inserted (so a basis can consist of actual
/// operators such as `K(e_i, e_j)`), while a reduced echelon copy with
/// recorded combinations answers membership and coordinate queries.
#[derive(Clone, Debug)]
pub struct SpanBasis<S> {
    ambient: usize,
    elems: Vec<Vector<S>>,
    reduced: Vec<Vector<S>>,
    pivots: Vec<usize>,
    combos: Vec<Vector<S>>,
}

impl<S: Scalar> SpanBasis<S> {
    pub fn new(ambient: usize) -> Self {
        SpanBasis { ambient, elems: Vec::new(), reduced: Vec::new(), pivots: Vec::new(), combos: Vec::new() }
    }

    /// Greedy basis of the span, scanning `vectors` in order.
    pub fn from_vectors<'a>(ambient: usize, vectors: impl IntoIterator<Item = &'a Vector<S>>) -> Self {
        let mut b = Self::new(ambient);
        for v in vectors {
            b.insert(v);
        }
        b
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[Vector<S>] {
        &self.elems
    }

    fn reduce(&self, v: &[S]) -> (Vector<S>, Vector<S>) {
        let mut res = v.to_vec();
        let mut combo = zero_vec(self.elems.len());
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = res[p].clone();
            if c.is_zero() {
                continue;
            }
            axpy(&mut res, &-c.clone(), &self.reduced[r]);
            axpy(&mut combo, &c, &self.combos[r]);
        }
        (res, combo)
    }

    /// Adds `v` if it is independent of the current elements.
    pub fn insert(&mut self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.ambient, "span ambient dimension mismatch");
        let (res, combo) = self.reduce(v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let k = self.elems.len();
        // res = v - sum combo_i * elem_i, so res/piv = (e_k - combo)/piv.
        let inv = res[p].inv().expect("nonzero pivot");
        let row = vec_scale(&inv, &res);
        let mut rcombo: Vector<S> = combo.iter().map(|c| -(c.clone() * &inv)).collect();
        rcombo.push(inv);
        for c in self.combos.iter_mut() {
            c.push(S::zero());
        }
        for r in 0..self.reduced.len() {
            let f = self.reduced[r][p].clone();
            if !f.is_zero() {
                axpy(&mut self.reduced[r], &-f.clone(), &row);
                axpy(&mut self.combos[r], &-f, &rcombo);
            }
        }
        self.elems.push(v.to_vec());
        self.reduced.push(row);
        self.pivots.push(p);
        self.combos.push(rcombo);
        debug_assert_eq!(self.elems.len(), k + 1);
        true
    }

    pub fn contains(&self, v: &[S]) -> bool {
        is_zero_vec(&self.reduce(v).0)
    }

    /// Coordinates of `v` relative to [`elems`](Self::elems); `None` when `v`
    /// is not in the span.
    pub fn coords(&self, v: &[S]) -> Option<Vector<S>> {
        let (res, combo) = self.reduce(v);
        is_zero_vec(&res).then_some(combo)
    }

    pub fn combine(&self, coords: &[S]) -> Vector<S> {
        let mut out = zero_vec(self.ambient);
        for (c, e) in coords.iter().zip(&self.elems) {
            axpy(&mut out, c, e);
        }
        out
    }

    /// The reduced echelon basis, ordered by pivot column.
    pub fn reduced_basis(&self) -> Vec<Vector<S>> {
        let mut idx: Vec<usize> = (0..self.pivots.len()).collect();
        idx.sort_by_key(|&i| self.pivots[i]);
        idx.into_iter().map(|i| self.reduced[i].clone()).collect()
    }
}

/// Reduced-echelon basis of the span of `vectors` together with a solver
/// expressing members of the span in that basis.
pub fn span_basis<S: Scalar>(ambient: usize, vectors: &[Vector<S>]) -> (Vec<Vector<S>>, SpanBasis<S>) {
    let basis = SpanBasis::from_vectors(ambient, vectors).reduced_basis();
    let solver = SpanBasis::from_vectors(ambient, &basis);
    (basis, solver)
}
