#![allow(dead_code)]

use triplekit::dicyclic::DicyclicTernary;
use triplekit::fixtures;
use triplekit::fkts::Fkts;
use triplekit::io::Algebra;
use triplekit::jternary::JTernary;
use triplekit::liebuild::LieAlgebra;
use triplekit::scalars::{Cyc, Rational, Scalar};

pub type Q = Rational;

pub fn q(n: i64) -> Q {
    Q::from_i64(n)
}

pub fn fkts<S: Scalar>(name: &str) -> Fkts<S> {
    match fixtures::load::<S>(name) {
        Some(Algebra::Fkts(u)) => u,
        other => panic!("{name} is not a triple system fixture: {other:?}"),
    }
}

pub fn jt<S: Scalar>(name: &str) -> JTernary<S> {
    match fixtures::load::<S>(name) {
        Some(Algebra::Jternary(s)) => s,
        other => panic!("{name} is not a J-ternary fixture: {other:?}"),
    }
}

pub fn dic<S: Scalar>(name: &str) -> DicyclicTernary<S> {
    match fixtures::load::<S>(name) {
        Some(Algebra::Dicyclic(a)) => a,
        other => panic!("{name} is not a dicyclic fixture: {other:?}"),
    }
}

pub fn lie<S: Scalar>(name: &str) -> LieAlgebra<S> {
    match fixtures::load::<S>(name) {
        Some(Algebra::Lie(g)) => g,
        other => panic!("{name} is not a Lie fixture: {other:?}"),
    }
}

pub fn cyc(r: &Q) -> Cyc {
    Cyc::from(r.clone())
}

pub fn e<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    (0..n).map(|k| if k == i { S::one() } else { S::zero() }).collect()
}
