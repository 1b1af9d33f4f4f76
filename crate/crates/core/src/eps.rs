//! Exact slack parameters.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid eps `{0}`: expected a rational in (0, 1] such as 1/4 or 0.125")]
pub struct EpsError(pub String);

/// A slack parameter `eps` in `(0, 1]`, kept as an exact fraction so that
/// thresholds like `|S| >= eps * n` are compared without rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Eps(Ratio<u64>);

impl Eps {
    pub fn new(numer: u64, denom: u64) -> Result<Self, EpsError> {
        if denom == 0 || numer == 0 || numer > denom {
            return Err(EpsError(format!("{numer}/{denom}")));
        }
        Ok(Eps(Ratio::new(numer, denom)))
    }

    /// `2^-i`.
    pub fn power_of_half(i: u32) -> Self {
        Eps(Ratio::new(1, 1u64 << i))
    }

    pub fn one() -> Self {
        Eps(Ratio::new(1, 1))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn as_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `count >= eps * n`, exactly.
    pub fn count_reaches(&self, count: usize, n: usize) -> bool {
        (count as u128) * (self.denom() as u128) >= (self.numer() as u128) * (n as u128)
    }

    /// `(10 / eps) * ln n`, the density-net size bound.
    pub fn net_size_bound(&self, n: usize) -> f64 {
        10.0 / self.as_f64() * (n as f64).ln()
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Eps {
    type Err = EpsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EpsError(s.to_string());
        let s = s.trim();
        if let Some((a, b)) = s.split_once('/') {
            let a = a.trim().parse::<u64>().map_err(|_| bad())?;
            let b = b.trim().parse::<u64>().map_err(|_| bad())?;
            return Eps::new(a, b).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let int = if int.is_empty() { 0 } else { int.parse::<u64>().map_err(|_| bad())? };
            let denom = 10u64.pow(frac.len() as u32);
            let numer = int
                .checked_mul(denom)
                .and_then(|x| x.checked_add(frac.parse::<u64>().ok()?))
                .ok_or_else(bad)?;
            return Eps::new(numer, denom).map_err(|_| bad());
        }
        let v = s.parse::<u64>().map_err(|_| bad())?;
        Eps::new(v, 1).map_err(|_| bad())
    }
}

impl Serialize for Eps {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Eps {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!("1/4".parse::<Eps>().unwrap(), Eps::new(1, 4).unwrap());
        assert_eq!("0.125".parse::<Eps>().unwrap(), Eps::new(1, 8).unwrap());
        assert_eq!("2/8".parse::<Eps>().unwrap().to_string(), "1/4");
        assert_eq!("1".parse::<Eps>().unwrap(), Eps::one());
        assert!("0".parse::<Eps>().is_err());
        assert!("3/2".parse::<Eps>().is_err());
        assert!("1/0".parse::<Eps>().is_err());
        assert!("abc".parse::<Eps>().is_err());
    }

    #[test]
    fn exact_threshold() {
        let e = Eps::new(1, 3).unwrap();
        assert!(e.count_reaches(1, 3));
        assert!(!e.count_reaches(1, 4));
        assert!(Eps::one().count_reaches(3, 3));
        assert!(!Eps::one().count_reaches(2, 3));
    }
}
