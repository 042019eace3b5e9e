//! Arbitrary-precision values with lossless hexadecimal-float text form.

use std::cmp::Ordering;
use std::fmt;

use rug::{Float, Integer};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary floating value that remembers the precision it was computed at.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct HpNum(Float);

impl HpNum {
    pub fn new(value: Float) -> Self {
        HpNum(value)
    }

    pub fn from_f64(value: f64, prec: u32) -> Self {
        HpNum(Float::with_val(prec, value))
    }

    /// `num / den` rounded to `prec` bits.
    pub fn ratio(num: i64, den: i64, prec: u32) -> Self {
        let mut f = Float::with_val(prec, num);
        f /= den;
        HpNum(f)
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Same value at a different precision (rounds when narrowing).
    pub fn with_prec(&self, prec: u32) -> Self {
        HpNum(Float::with_val(prec, &self.0))
    }

    /// C99-style hexadecimal float, e.g. `0x1.8p-1` for 3/4.
    pub fn to_hex(&self) -> String {
        format_hex(&self.0)
    }

    /// Parses a hexadecimal float at `prec` bits. Inputs that do not fit
    /// in `prec` bits are rejected instead of rounded.
    pub fn from_hex(text: &str, prec: u32) -> Result<Self> {
        parse_hex(text, prec).map(HpNum)
    }

    /// Base-2 logarithm of the magnitude, for diagnostics.
    pub fn log2_abs(&self) -> f64 {
        if self.0.is_zero() {
            f64::NEG_INFINITY
        } else {
            Float::with_val(64, self.0.abs_ref()).log2().to_f64()
        }
    }
}

impl From<Float> for HpNum {
    fn from(value: Float) -> Self {
        HpNum(value)
    }
}

impl PartialEq<Float> for HpNum {
    fn eq(&self, other: &Float) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<Float> for HpNum {
    fn partial_cmp(&self, other: &Float) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

impl fmt::Display for HpNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for HpNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("HpNum", 2)?;
        st.serialize_field("hex", &self.to_hex())?;
        st.serialize_field("prec", &self.prec())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for HpNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            hex: String,
            prec: u32,
        }
        let raw = Raw::deserialize(deserializer)?;
        HpNum::from_hex(&raw.hex, raw.prec).map_err(de::Error::custom)
    }
}

fn format_hex(x: &Float) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    let sign = if x.is_sign_negative() { "-" } else { "" };
    if x.is_zero() {
        return format!("{sign}0x0p+0");
    }
    let (mut mant, mut exp) = x.to_integer_exp().expect("finite");
    mant.abs_mut();
    let tz = mant.find_one(0).expect("nonzero mantissa");
    mant >>= tz;
    exp += tz as i32;
    let bits = mant.significant_bits();
    let frac_bits = bits - 1;
    let lead_exp = exp as i64 + frac_bits as i64;
    if frac_bits == 0 {
        return format!("{sign}0x1p{lead_exp:+}");
    }
    let pad = (4 - frac_bits % 4) % 4;
    let mut frac = mant - (Integer::from(1) << frac_bits);
    frac <<= pad;
    let digits = ((frac_bits + pad) / 4) as usize;
    let body = frac.to_string_radix(16);
    format!("{sign}0x1.{body:0>digits$}p{lead_exp:+}")
}

fn parse_hex(text: &str, prec: u32) -> Result<Float> {
    let bad = || Error::Parse(format!("not a hexadecimal float: {text:?}"));
    let t = text.trim();
    let (negative, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .ok_or_else(bad)?;
    let (mantissa, exp_text) = match t.find(['p', 'P']) {
        Some(i) => (&t[..i], Some(&t[i + 1..])),
        None => (t, None),
    };
    let mut exp: i64 = match exp_text {
        Some(e) => e.parse().map_err(|_| bad())?,
        None => 0,
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits: String = [int_part, frac_part].concat();
    if !digits.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(bad());
    }
    exp -= 4 * frac_part.len() as i64;
    let mut mant = Integer::from_str_radix(&digits, 16).map_err(|_| bad())?;
    if mant == 0 {
        let z = Float::with_val(prec, 0);
        return Ok(if negative { -z } else { z });
    }
    let tz = mant.find_one(0).expect("nonzero");
    mant >>= tz;
    exp += tz as i64;
    if mant.significant_bits() > prec {
        return Err(Error::Parse(format!(
            "{text:?} needs {} bits, more than the declared {prec}",
            mant.significant_bits()
        )));
    }
    let exp = i32::try_from(exp).map_err(|_| bad())?;
    let mut f = Float::with_val(prec, &mant);
    f <<= exp;
    if negative {
        f = -f;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn formats_simple_values() {
        assert_eq!(HpNum::ratio(3, 4, 64).to_hex(), "0x1.8p-1");
        assert_eq!(HpNum::ratio(1, 2, 64).to_hex(), "0x1p-1");
        assert_eq!(HpNum::from_f64(1.0, 64).to_hex(), "0x1p+0");
        assert_eq!(HpNum::from_f64(0.0, 64).to_hex(), "0x0p+0");
        assert_eq!(HpNum::from_f64(-2.5, 64).to_hex(), "-0x1.4p+1");
    }

    #[test]
    fn parses_variants() {
        let x = HpNum::from_hex("0x1.8p-1", 53).unwrap();
        assert_eq!(x.to_f64(), 0.75);
        assert_eq!(HpNum::from_hex("0X3p-2", 8).unwrap().to_f64(), 0.75);
        assert_eq!(HpNum::from_hex("0x.cp0", 8).unwrap().to_f64(), 0.75);
        assert_eq!(HpNum::from_hex("-0x1p+3", 8).unwrap().to_f64(), -8.0);
        assert!(HpNum::from_hex("1.5", 8).is_err());
        assert!(HpNum::from_hex("0x1.zp0", 8).is_err());
        // 0x1.001 needs 13 bits.
        assert!(HpNum::from_hex("0x1.001p0", 12).is_err());
        assert!(HpNum::from_hex("0x1.001p0", 13).is_ok());
    }

    #[test]
    fn serde_carries_precision() {
        let x = HpNum::ratio(2, 3, 200);
        let json = serde_json::to_string(&x).unwrap();
        assert!(json.contains("\"prec\":200"));
        let back: HpNum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
        assert_eq!(back.prec(), 200);
    }

    proptest! {
        #[test]
        fn hex_round_trip(num in 1i64..i64::MAX, den in 1i64..1_000_000, prec in 8u32..700) {
            let x = HpNum::ratio(num, den, prec);
            let back = HpNum::from_hex(&x.to_hex(), prec).unwrap();
            prop_assert_eq!(back.as_float(), x.as_float());
        }
    }
}
