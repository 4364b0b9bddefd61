//! Serialize floats with 17 significant digits so reports are byte-stable
//! and re-parse to the identical `f64`.

use serde::Serializer;
use serde_json::value::RawValue;

/// Render `x` in scientific notation with 17 significant digits.
pub fn format(x: f64) -> String {
    if x == 0.0 {
        // -0.0 and 0.0 both print as a plain zero.
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

pub fn serialize<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return serializer.serialize_none();
    }
    let raw = RawValue::from_string(format(*x)).map_err(serde::ser::Error::custom)?;
    serde::Serialize::serialize(&raw, serializer)
}

pub mod option {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => super::serialize(v, serializer),
            None => serializer.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_is_plain() {
        assert_eq!(format(0.0), "0.0000000000000000e0");
        assert_eq!(format(-0.0), "0.0000000000000000e0");
        assert_eq!(format(0.5), "5.0000000000000000e-1");
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            let s = format(x);
            let back: f64 = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }
    }
}
