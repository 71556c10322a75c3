//! Serialization of complex scalars as [re, im] pairs, the wire format
//! used by every JSON report.

use num_complex::Complex64;
use serde::ser::{SerializeSeq, SerializeTuple};
use serde::Serializer;

pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&c.re)?;
    t.serialize_element(&c.im)?;
    t.end()
}

pub fn serialize_opt<S: Serializer>(c: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    match c {
        Some(v) => serialize(v, s),
        None => s.serialize_none(),
    }
}

pub fn serialize_vec<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}
