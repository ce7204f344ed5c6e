//! JSON serialization with fixed 17-significant-digit floats, so every
//! serialized double round-trips losslessly and output is byte-stable.

use serde::Serialize;
use std::io;

pub const SCHEMA_VERSION: u32 = 1;

struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

/// Serializes to a compact JSON line with 17-significant-digit floats.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut buf, Sig17Formatter);
    value
        .serialize(&mut serializer)
        .expect("in-memory serialization cannot fail");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        #[derive(Serialize)]
        struct Rec {
            v: f64,
        }
        for v in [-0.2, 1.0 / 3.0, 0.2716320460931326, 1e-17, -1.0] {
            let json = to_json_string(&Rec { v });
            let parsed: serde_json::Value = json.parse().unwrap();
            let back = parsed["v"].as_f64().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{json}");
        }
    }

    #[test]
    fn seventeen_significant_digits() {
        #[derive(Serialize)]
        struct Rec {
            v: f64,
        }
        let json = to_json_string(&Rec { v: -0.2 });
        assert_eq!(json, r#"{"v":-2.0000000000000001e-1}"#);
    }
}
