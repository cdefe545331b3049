//! Serde helper that writes exact rationals as `"p/q"` strings.

use serde::Serializer;

use crate::Rational;

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}
