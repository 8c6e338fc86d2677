//! Number formatting for the text artifacts.
//!
//! Every float is written in scientific notation with 17 significant digits,
//! which round-trips an `f64` exactly. JSON output goes through serde_json
//! but injects the same text as a raw number.

use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde_json::value::RawValue;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float serialized with [`float`]'s text; non-finite values become `null`.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(float(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// A slice of floats serialized as a JSON array of [`Num`].
#[derive(Debug, Clone, Copy)]
pub struct Nums<'a>(pub &'a [f64]);

impl Serialize for Nums<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for &x in self.0 {
            seq.serialize_element(&Num(x))?;
        }
        seq.end()
    }
}
