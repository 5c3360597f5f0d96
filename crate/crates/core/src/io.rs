//! Algebra definition files: JSON with sparse coefficient lists.
//!
//! ```json
//! { "kind": "fkts", "scalars": "Q", "dims": {"U": 2}, "epsilon": 1, "delta": 1,
//!   "tensors": { "triple": [[0, 1, 0, 0, "1"]] } }
//! ```
//!
//! Indices are 0-based; omitted entries are zero. Keys per kind:
//!
//! | kind       | dims          | tensors                               | other                        |
//! |------------|---------------|---------------------------------------|------------------------------|
//! | `fkts`     | `U`           | `triple`                              | `epsilon`, `delta`           |
//! | `jternary` | `J`, `T`      | `jordan`, `action`, `angle`, `triple` | `sign`, `unit`               |
//! | `dicyclic` | `A`           | `bar`, `star`, `triple`               |                              |
//! | `lie`      | `g`           | `bracket`                             | `parity`, `grades`, `frame`  |
//!
//! `labels` optionally maps each dims key to a list of basis names; `unit`
//! and each `frame` vector are sparse lists `[[i, "c"], ...]`.

use std::fmt;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::dicyclic::DicyclicTernary;
use crate::fkts::Fkts;
use crate::jternary::{JTernary, JordanAlgebra};
use crate::liebuild::{GradeTag, LieAlgebra};
use crate::linalg::{zero_vec, Matrix, Vector};
use crate::scalars::{Cyc, Rational, Scalar, Sign};
use crate::tensor::{BasedSpace, BilinearTensor, Parity, TrilinearTensor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
}

fn ferr(field: impl Into<String>, msg: impl fmt::Display) -> FormatError {
    FormatError::Field { field: field.into(), msg: msg.to_string() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Fkts,
    Jternary,
    Dicyclic,
    Lie,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Fkts => "fkts",
            Kind::Jternary => "jternary",
            Kind::Dicyclic => "dicyclic",
            Kind::Lie => "lie",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        match s {
            "fkts" => Some(Kind::Fkts),
            "jternary" => Some(Kind::Jternary),
            "dicyclic" => Some(Kind::Dicyclic),
            "lie" => Some(Kind::Lie),
            _ => None,
        }
    }
}

/// A parsed algebra over a fixed scalar field.
#[derive(Clone, Debug, PartialEq)]
pub enum Algebra<S: Scalar> {
    Fkts(Fkts<S>),
    Jternary(JTernary<S>),
    Dicyclic(DicyclicTernary<S>),
    Lie(LieAlgebra<S>),
}

impl<S: Scalar> Algebra<S> {
    pub fn kind(&self) -> Kind {
        match self {
            Algebra::Fkts(_) => Kind::Fkts,
            Algebra::Jternary(_) => Kind::Jternary,
            Algebra::Dicyclic(_) => Kind::Dicyclic,
            Algebra::Lie(_) => Kind::Lie,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Algebra<T> {
        match self {
            Algebra::Fkts(u) => Algebra::Fkts(u.map(f)),
            Algebra::Jternary(s) => Algebra::Jternary(s.map(f)),
            Algebra::Dicyclic(a) => Algebra::Dicyclic(a.map(f)),
            Algebra::Lie(g) => Algebra::Lie(g.map(f)),
        }
    }
}

/// A parsed file in whichever field it declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAlgebra {
    Q(Algebra<Rational>),
    W(Algebra<Cyc>),
}

impl AnyAlgebra {
    pub fn kind(&self) -> Kind {
        match self {
            AnyAlgebra::Q(a) => a.kind(),
            AnyAlgebra::W(a) => a.kind(),
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            AnyAlgebra::Q(a) => to_value(a),
            AnyAlgebra::W(a) => to_value(a),
        }
    }

    /// Over `Q(w)`, lifting rational input.
    pub fn to_cyc(&self) -> Algebra<Cyc> {
        match self {
            AnyAlgebra::Q(a) => a.map(|r| Cyc::from(r.clone())),
            AnyAlgebra::W(a) => a.clone(),
        }
    }
}

/// Reads a file's text. `kind` overrides the `kind` key when given.
pub fn parse(text: &str, kind: Option<Kind>) -> Result<AnyAlgebra, FormatError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| FormatError::Syntax { line: e.line(), column: e.column(), msg: e.to_string() })?;
    let obj = v.as_object().ok_or_else(|| ferr("<root>", "expected an object"))?;
    let kind = match kind {
        Some(k) => k,
        None => {
            let s = obj.get("kind").and_then(Value::as_str).ok_or_else(|| ferr("kind", "missing or not a string"))?;
            Kind::parse(s).ok_or_else(|| ferr("kind", format!("unknown kind {s:?}")))?
        }
    };
    match obj.get("scalars").map(|s| s.as_str()) {
        None | Some(Some("Q")) => Ok(AnyAlgebra::Q(parse_as(obj, kind)?)),
        Some(Some("Q(w)")) => Ok(AnyAlgebra::W(parse_as(obj, kind)?)),
        _ => Err(ferr("scalars", "expected \"Q\" or \"Q(w)\"")),
    }
}

/// Reads a file into a known field.
pub fn parse_in<S: Scalar>(text: &str) -> Result<Algebra<S>, FormatError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| FormatError::Syntax { line: e.line(), column: e.column(), msg: e.to_string() })?;
    let obj = v.as_object().ok_or_else(|| ferr("<root>", "expected an object"))?;
    let s = obj.get("kind").and_then(Value::as_str).ok_or_else(|| ferr("kind", "missing or not a string"))?;
    let kind = Kind::parse(s).ok_or_else(|| ferr("kind", format!("unknown kind {s:?}")))?;
    parse_as(obj, kind)
}

struct Reader<'a> {
    obj: &'a Map<String, Value>,
}

impl<'a> Reader<'a> {
    fn dim(&self, key: &str) -> Result<usize, FormatError> {
        let field = format!("dims.{key}");
        self.obj
            .get("dims")
            .and_then(|d| d.get(key))
            .ok_or_else(|| ferr(&field, "missing"))?
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| ferr(&field, "expected a non-negative integer"))
    }

    fn space(&self, key: &str, n: usize, prefix: &str) -> Result<BasedSpace, FormatError> {
        let field = format!("labels.{key}");
        match self.obj.get("labels").and_then(|l| l.get(key)) {
            None => Ok(BasedSpace::numbered(prefix, n)),
            Some(Value::Array(items)) => {
                let labels = items
                    .iter()
                    .map(|v| v.as_str().map(str::to_string).ok_or_else(|| ferr(&field, "labels must be strings")))
                    .collect::<Result<Vec<_>, _>>()?;
                if labels.len() != n {
                    return Err(ferr(&field, format!("expected {n} labels, found {}", labels.len())));
                }
                BasedSpace::new(labels).map_err(|e| ferr(&field, e))
            }
            Some(_) => Err(ferr(&field, "expected a list")),
        }
    }

    fn sign(&self, key: &str) -> Result<Sign, FormatError> {
        self.obj
            .get(key)
            .and_then(Value::as_i64)
            .and_then(Sign::from_i64)
            .ok_or_else(|| ferr(key, "expected 1 or -1"))
    }

    /// Sparse entries with `arity` indices bounded by `bounds`.
    fn entries<S: Scalar>(&self, name: &str, bounds: &[usize]) -> Result<Vec<(Vec<usize>, S)>, FormatError> {
        let field = format!("tensors.{name}");
        let list = match self.obj.get("tensors").and_then(|t| t.get(name)) {
            None => return Ok(Vec::new()),
            Some(Value::Array(l)) => l,
            Some(_) => return Err(ferr(&field, "expected a list of entries")),
        };
        sparse_entries(list, bounds, &field)
    }
}

fn sparse_entries<S: Scalar>(list: &[Value], bounds: &[usize], field: &str) -> Result<Vec<(Vec<usize>, S)>, FormatError> {
    let arity = bounds.len();
    let mut out = Vec::with_capacity(list.len());
    for (n, item) in list.iter().enumerate() {
        let f = format!("{field}[{n}]");
        let row = item.as_array().ok_or_else(|| ferr(&f, "expected a list"))?;
        if row.len() != arity + 1 {
            return Err(ferr(&f, format!("expected {arity} indices and a scalar, found {} items", row.len())));
        }
        let mut idx = Vec::with_capacity(arity);
        for (p, (v, &bound)) in row.iter().zip(bounds).enumerate() {
            let i = v.as_u64().ok_or_else(|| ferr(&f, format!("index {p} is not a non-negative integer")))? as usize;
            if i >= bound {
                return Err(ferr(&f, format!("index {p} = {i} out of range (bound {bound})")));
            }
            idx.push(i);
        }
        let c = S::from_json(&row[arity]).map_err(|e| ferr(&f, e))?;
        out.push((idx, c));
    }
    Ok(out)
}

fn bilinear<S: Scalar>(r: &Reader, name: &str, shape: (usize, usize, usize)) -> Result<BilinearTensor<S>, FormatError> {
    let mut t = BilinearTensor::zeros(shape.0, shape.1, shape.2);
    for (i, c) in r.entries::<S>(name, &[shape.0, shape.1, shape.2])? {
        t.set(i[0], i[1], i[2], c);
    }
    Ok(t)
}

fn trilinear<S: Scalar>(r: &Reader, name: &str, n: usize) -> Result<TrilinearTensor<S>, FormatError> {
    let mut t = TrilinearTensor::zeros([n; 3], n);
    for (i, c) in r.entries::<S>(name, &[n; 4])? {
        t.set(i[0], i[1], i[2], i[3], c);
    }
    Ok(t)
}

fn sparse_vector<S: Scalar>(v: &Value, n: usize, field: &str) -> Result<Vector<S>, FormatError> {
    let list = v.as_array().ok_or_else(|| ferr(field, "expected a list of [index, scalar] pairs"))?;
    let mut out = zero_vec(n);
    for (idx, c) in sparse_entries::<S>(list, &[n], field)? {
        out[idx[0]] = c;
    }
    Ok(out)
}

fn parse_as<S: Scalar>(obj: &Map<String, Value>, kind: Kind) -> Result<Algebra<S>, FormatError> {
    let r = Reader { obj };
    match kind {
        Kind::Fkts => {
            let n = r.dim("U")?;
            let space = r.space("U", n, "x")?;
            let triple = trilinear(&r, "triple", n)?;
            let u = Fkts::new(space, r.sign("epsilon")?, r.sign("delta")?, triple).map_err(|e| ferr("tensors.triple", e))?;
            Ok(Algebra::Fkts(u))
        }
        Kind::Jternary => {
            let (nj, nt) = (r.dim("J")?, r.dim("T")?);
            let jspace = r.space("J", nj, "a")?;
            let tspace = r.space("T", nt, "x")?;
            let product = bilinear(&r, "jordan", (nj, nj, nj))?;
            let unit = match obj.get("unit") {
                Some(v) => sparse_vector(v, nj, "unit")?,
                None => return Err(ferr("unit", "missing")),
            };
            let j = JordanAlgebra::new(jspace, product, unit).map_err(|e| ferr("tensors.jordan", e))?;
            let action = bilinear(&r, "action", (nj, nt, nt))?;
            let angle = bilinear(&r, "angle", (nt, nt, nj))?;
            let triple = trilinear(&r, "triple", nt)?;
            let s = JTernary::new(j, tspace, action, angle, triple, r.sign("sign")?).map_err(|e| ferr("tensors", e))?;
            Ok(Algebra::Jternary(s))
        }
        Kind::Dicyclic => {
            let n = r.dim("A")?;
            let space = r.space("A", n, "a")?;
            let mut bar = Matrix::zeros(n, n);
            for (i, c) in r.entries::<S>("bar", &[n, n])? {
                bar.set(i[0], i[1], c);
            }
            let star = bilinear(&r, "star", (n, n, n))?;
            let triple = trilinear(&r, "triple", n)?;
            DicyclicTernary::new(space, bar, star, triple).map(Algebra::Dicyclic).map_err(|e| ferr("tensors", e))
        }
        Kind::Lie => {
            let n = r.dim("g")?;
            let mut space = r.space("g", n, "g")?;
            if let Some(p) = obj.get("parity") {
                let list = p.as_array().ok_or_else(|| ferr("parity", "expected a list"))?;
                let par = list
                    .iter()
                    .map(|v| match v.as_str() {
                        Some("even") => Ok(Parity::Even),
                        Some("odd") => Ok(Parity::Odd),
                        _ => Err(ferr("parity", "entries must be \"even\" or \"odd\"")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                space = space.with_parity(par).map_err(|e| ferr("parity", e))?;
            }
            let bracket = bilinear(&r, "bracket", (n, n, n))?;
            let mut g = LieAlgebra::new(space, bracket).map_err(|e| ferr("tensors.bracket", e))?;
            if let Some(gr) = obj.get("grades") {
                let list = gr.as_array().ok_or_else(|| ferr("grades", "expected a list"))?;
                if list.len() != n {
                    return Err(ferr("grades", format!("expected {n} tags")));
                }
                let tags = list
                    .iter()
                    .map(|v| v.as_str().ok_or_else(|| ferr("grades", "tags must be strings"))?.parse::<GradeTag>().map_err(|e| ferr("grades", e)))
                    .collect::<Result<Vec<_>, _>>()?;
                g.grades = Some(tags);
            }
            if let Some(fr) = obj.get("frame") {
                g.frame = Some(parse_frame(fr, n)?);
            }
            Ok(Algebra::Lie(g))
        }
    }
}

/// `[[[i,"c"],...], [...], [...]]` for `H`, `E`, `F`.
pub fn parse_frame<S: Scalar>(v: &Value, n: usize) -> Result<[Vector<S>; 3], FormatError> {
    let list = v.as_array().filter(|l| l.len() == 3).ok_or_else(|| ferr("frame", "expected three sparse vectors"))?;
    let h = sparse_vector(&list[0], n, "frame.H")?;
    let e = sparse_vector(&list[1], n, "frame.E")?;
    let f = sparse_vector(&list[2], n, "frame.F")?;
    Ok([h, e, f])
}

/// Parses `c1,c2,...` into a dense vector of length `n`.
pub fn parse_dense<S: Scalar>(text: &str, n: usize, field: &str) -> Result<Vector<S>, FormatError> {
    let v = text
        .split(',')
        .map(|c| S::from_json(&Value::String(c.trim().to_string())).map_err(|e| ferr(field, e)))
        .collect::<Result<Vec<S>, _>>()?;
    if v.len() != n {
        return Err(ferr(field, format!("expected {n} coordinates, found {}", v.len())));
    }
    Ok(v)
}

fn labels_value(space: &BasedSpace) -> Value {
    json!(space.labels())
}

fn bilinear_value<S: Scalar>(t: &BilinearTensor<S>) -> Value {
    Value::Array(t.entries().into_iter().map(|(i, j, k, c)| json!([i, j, k, c.to_json()])).collect())
}

fn trilinear_value<S: Scalar>(t: &TrilinearTensor<S>) -> Value {
    Value::Array(t.entries().into_iter().map(|(i, j, k, l, c)| json!([i, j, k, l, c.to_json()])).collect())
}

fn sparse_vector_value<S: Scalar>(v: &[S]) -> Value {
    Value::Array(v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| json!([i, c.to_json()])).collect())
}

/// The file representation; [`parse`] inverts it.
pub fn to_value<S: Scalar>(a: &Algebra<S>) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(a.kind().name()));
    m.insert("scalars".into(), json!(S::FIELD));
    match a {
        Algebra::Fkts(u) => {
            m.insert("dims".into(), json!({ "U": u.dim() }));
            m.insert("labels".into(), json!({ "U": labels_value(&u.space) }));
            m.insert("epsilon".into(), json!(u.epsilon.value()));
            m.insert("delta".into(), json!(u.delta.value()));
            m.insert("tensors".into(), json!({ "triple": trilinear_value(&u.triple) }));
        }
        Algebra::Jternary(s) => {
            m.insert("dims".into(), json!({ "J": s.nj(), "T": s.nt() }));
            m.insert("labels".into(), json!({ "J": labels_value(&s.j.space), "T": labels_value(&s.t) }));
            m.insert("sign".into(), json!(s.sign.value()));
            m.insert("unit".into(), sparse_vector_value(&s.j.unit));
            m.insert(
                "tensors".into(),
                json!({
                    "jordan": bilinear_value(&s.j.product),
                    "action": bilinear_value(&s.action),
                    "angle": bilinear_value(&s.angle),
                    "triple": trilinear_value(&s.triple),
                }),
            );
        }
        Algebra::Dicyclic(d) => {
            let n = d.dim();
            m.insert("dims".into(), json!({ "A": n }));
            m.insert("labels".into(), json!({ "A": labels_value(&d.space) }));
            let mut bar = Vec::new();
            for i in 0..n {
                for k in 0..n {
                    let c = d.bar.get(i, k);
                    if !c.is_zero() {
                        bar.push(json!([i, k, c.to_json()]));
                    }
                }
            }
            m.insert(
                "tensors".into(),
                json!({ "bar": bar, "star": bilinear_value(&d.star), "triple": trilinear_value(&d.triple) }),
            );
        }
        Algebra::Lie(g) => {
            m.insert("dims".into(), json!({ "g": g.dim() }));
            m.insert("labels".into(), json!({ "g": labels_value(&g.space) }));
            if let Some(p) = g.space.parities() {
                m.insert("parity".into(), json!(p.iter().map(|p| if p.is_odd() { "odd" } else { "even" }).collect::<Vec<_>>()));
            }
            if let Some(tags) = &g.grades {
                m.insert("grades".into(), json!(tags.iter().map(ToString::to_string).collect::<Vec<_>>()));
            }
            if let Some(fr) = &g.frame {
                m.insert("frame".into(), Value::Array(fr.iter().map(|v| sparse_vector_value(v)).collect()));
            }
            m.insert("tensors".into(), json!({ "bracket": bilinear_value(&g.bracket) }));
        }
    }
    Value::Object(m)
}

/// File text with one tensor entry per line, so fixtures diff cleanly.
pub fn to_text<S: Scalar>(a: &Algebra<S>) -> String {
    let mut out = String::new();
    write_compact(&to_value(a), 0, &mut out);
    out.push('\n');
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    }
}

// Pretty layout, except that arrays of plain values stay on one line.
fn write_compact(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_compact(x, depth + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(xs) if !xs.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_compact(x, depth + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Array(xs) => {
            let items: Vec<String> = xs.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}
