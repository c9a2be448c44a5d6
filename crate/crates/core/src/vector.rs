//! Componentwise helpers on plain `f64` vectors.

use crate::error::{Error, Result};

/// A vector norm exponent: any real `p >= 1` or the max-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormP {
    P(f64),
    Inf,
}

impl NormP {
    pub fn validate(self) -> Result<Self> {
        match self {
            NormP::Inf => Ok(self),
            NormP::P(p) if p.is_finite() && p >= 1.0 => Ok(self),
            NormP::P(p) => Err(Error::InvalidExponent(format!("p = {p} (need p >= 1 or inf)"))),
        }
    }

    /// Parses `"inf"`, a number, or the order-dependent tokens `"m"` and `"m*"`
    /// (the conjugate `m/(m-1)`).
    pub fn parse(s: &str, order: usize) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let p = match t.as_str() {
            "inf" | "infinity" | "max" => return Ok(NormP::Inf),
            "m" => order as f64,
            "m*" | "m/(m-1)" => order as f64 / (order as f64 - 1.0),
            other => other.parse::<f64>().map_err(|_| Error::InvalidExponent(format!("cannot parse {s:?}")))?,
        };
        NormP::P(p).validate()
    }

    pub fn label(self) -> String {
        match self {
            NormP::Inf => "inf".to_string(),
            NormP::P(p) => format!("{p}"),
        }
    }
}

impl serde::Serialize for NormP {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NormP::Inf => s.serialize_str("inf"),
            NormP::P(p) => s.serialize_f64(*p),
        }
    }
}

impl<'de> serde::Deserialize<'de> for NormP {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => NormP::P(p).validate().map_err(serde::de::Error::custom),
            Raw::Str(s) if s.eq_ignore_ascii_case("inf") => Ok(NormP::Inf),
            Raw::Str(s) => Err(serde::de::Error::custom(format!("invalid norm exponent {s:?}"))),
        }
    }
}

pub fn norm(x: &[f64], p: NormP) -> f64 {
    match p {
        NormP::Inf => norm_inf(x),
        NormP::P(1.0) => x.iter().map(|v| v.abs()).sum(),
        NormP::P(2.0) => norm2(x),
        NormP::P(p) => x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

pub fn norm_inf(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `(x_+)_i = max(x_i, 0)`.
pub fn pos_part(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&v| v.max(0.0)).collect()
}

/// Real `k`-th root, sign preserving for odd `k`.
pub fn odd_root(v: f64, k: usize) -> f64 {
    match k {
        1 => v,
        3 => v.cbrt(),
        _ => v.signum() * v.abs().powf(1.0 / k as f64),
    }
}

/// Componentwise power `x^{[p]}`.
///
/// Negative bases are accepted for integer exponents and for reciprocals of
/// odd integers; any other fractional power of a negative entry is a domain
/// error.
pub fn power_component(x: &[f64], p: f64) -> Result<Vec<f64>> {
    if !p.is_finite() {
        return Err(Error::Domain(format!("exponent {p} is not finite")));
    }
    let odd_reciprocal = {
        let k = (1.0 / p).round();
        k >= 1.0 && (1.0 / p - k).abs() < 1e-12 && (k as i64) % 2 == 1
    };
    x.iter()
        .map(|&v| {
            if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
                Ok(v.powi(p as i32))
            } else if v >= 0.0 {
                Ok(v.powf(p))
            } else if odd_reciprocal {
                Ok(odd_root(v, (1.0 / p).round() as usize))
            } else {
                Err(Error::Domain(format!("{v}^{p} is not real")))
            }
        })
        .collect()
}

pub fn distance_inf(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
}

/// Lexicographic comparison for deterministic tie-breaks.
pub fn lex_cmp(x: &[f64], y: &[f64]) -> std::cmp::Ordering {
    for (a, b) in x.iter().zip(y) {
        match a.total_cmp(b) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    x.len().cmp(&y.len())
}

pub fn ensure_finite(x: &[f64], what: &str) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} has non-finite entries")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pos_part_clips_negatives() {
        assert_eq!(pos_part(&[-1.0, 2.0]), vec![0.0, 2.0]);
    }

    #[test]
    fn power_component_cases() {
        assert_eq!(power_component(&[4.0, 9.0], 0.5).unwrap(), vec![2.0, 3.0]);
        assert_eq!(power_component(&[2.0, 3.0], 2.0).unwrap(), vec![4.0, 9.0]);
        let r = power_component(&[-8.0, 27.0], 1.0 / 3.0).unwrap();
        assert!((r[0] + 2.0).abs() < 1e-14 && (r[1] - 3.0).abs() < 1e-14);
        assert!(matches!(power_component(&[-4.0], 0.5), Err(Error::Domain(_))));
        assert_eq!(power_component(&[-2.0], 3.0).unwrap(), vec![-8.0]);
    }

    #[test]
    fn norm_exponents() {
        let x = [3.0, -4.0];
        assert_eq!(norm(&x, NormP::Inf), 4.0);
        assert_eq!(norm(&x, NormP::P(2.0)), 5.0);
        assert_eq!(norm(&x, NormP::P(1.0)), 7.0);
        assert!((norm(&x, NormP::P(3.0)) - 91f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(NormP::P(0.5).validate().is_err());
        assert_eq!(NormP::parse("m*", 4).unwrap(), NormP::P(4.0 / 3.0));
        assert_eq!(NormP::parse("inf", 4).unwrap(), NormP::Inf);
    }
}
