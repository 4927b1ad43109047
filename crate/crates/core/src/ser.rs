//! Serde helpers rendering exact rationals as strings.

use num_rational::BigRational;
use serde::ser::{SerializeMap, SerializeSeq, Serializer};

use crate::poly::rat_string;

pub fn rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rat_string(x))
}

pub fn rationals<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&rat_string(x))?;
    }
    seq.end()
}

pub fn rational_pairs<S: Serializer>(xs: &[(u32, BigRational)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for (k, x) in xs {
        seq.serialize_element(&(k, rat_string(x)))?;
    }
    seq.end()
}

pub fn ordered_map<S: Serializer>(xs: &[(String, i64)], s: S) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(xs.len()))?;
    for (k, v) in xs {
        map.serialize_entry(k, v)?;
    }
    map.end()
}

pub fn display<T: std::fmt::Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}
