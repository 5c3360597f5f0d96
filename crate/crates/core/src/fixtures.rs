//! The bundled example algebras, stored as algebra files.

use crate::io::{parse_in, Algebra};
use crate::scalars::Scalar;

/// `(name, description, file text)`.
pub const FIXTURES: &[(&str, &str, &str)] = &[
    ("zero-1", "all-zero triple product on a 1-dimensional space, signs (1,1)", include_str!("../fixtures/zero-1.json")),
    ("zero-2", "all-zero triple product on a 2-dimensional space, signs (1,1)", include_str!("../fixtures/zero-2.json")),
    ("zero-3", "all-zero triple product on a 3-dimensional space, signs (1,1)", include_str!("../fixtures/zero-3.json")),
    ("fkts-b", "xyz = s(x,y)z - s(x,z)y on a symplectic plane, signs (1,1)", include_str!("../fixtures/fkts-b.json")),
    ("osp", "xyz = 1 on a line, signs (-1,-1)", include_str!("../fixtures/osp.json")),
    ("jts", "xyz = 1 on a line, signs (-1,1)", include_str!("../fixtures/jts.json")),
    ("sp2", "J = F1, T = F^2 with the symplectic form", include_str!("../fixtures/sp2.json")),
    ("osp-jt", "J = F id, T = F with <1|1> = 2, sign -1", include_str!("../fixtures/osp-jt.json")),
    ("dic-sp2", "dicyclic algebra F1 + F^2 obtained from sp2", include_str!("../fixtures/dic-sp2.json")),
    ("sl2", "sl2 in the basis H, E, F with its frame", include_str!("../fixtures/sl2.json")),
];

pub fn text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _, _)| *n == name).map(|(_, _, t)| *t)
}

/// Parses a bundled fixture; panics only if the bundled text is broken.
pub fn load<S: Scalar>(name: &str) -> Option<Algebra<S>> {
    text(name).map(|t| parse_in(t).unwrap_or_else(|e| panic!("bundled fixture {name} is malformed: {e}")))
}
