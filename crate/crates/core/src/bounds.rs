//! Complexity-bound constants and the scale functions they multiply.
//!
//! The constants live in `bounds.toml` next to this crate's manifest and are
//! only changed by hand after a deliberate re-measurement; the regression
//! tests read them from there.

use serde::{Deserialize, Serialize};

use crate::eps::Eps;

const FROZEN: &str = include_str!("../bounds.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub tz: TzBounds,
    pub slack: SlackBounds,
    pub cdg: CdgBounds,
    pub gd: GdBounds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TzBounds {
    /// rounds <= c * k n^{1/k} S ln n
    pub rounds: f64,
    /// data messages <= c * k n^{1/k} S |E| ln n
    pub data_msgs: f64,
    /// label words <= c * k n^{1/k} ln n
    pub label_words: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackBounds {
    /// rounds <= c * S (1/eps) ln n
    pub rounds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdgBounds {
    /// sketch words <= c * k ((1/eps) ln n)^{1/k} ln n
    pub sketch_words: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GdBounds {
    /// rounds <= c * S ln^4 n
    pub rounds: f64,
    /// data messages <= c * S |E| ln^4 n
    pub data_msgs: f64,
    /// sketch words <= c * ln^4 n
    pub sketch_words: f64,
    /// average stretch over all pairs
    pub avg_stretch: f64,
}

impl Bounds {
    pub fn frozen() -> Self {
        toml::from_str(FROZEN).expect("bounds.toml is well formed")
    }
}

fn ln(n: usize) -> f64 {
    (n.max(2) as f64).ln()
}

fn root(n: usize, k: usize) -> f64 {
    (n as f64).powf(1.0 / k as f64)
}

/// `k n^{1/k} S ln n`
pub fn tz_rounds_scale(n: usize, k: usize, spd: usize) -> f64 {
    k as f64 * root(n, k) * spd.max(1) as f64 * ln(n)
}

/// `k n^{1/k} S |E| ln n`
pub fn tz_msgs_scale(n: usize, k: usize, spd: usize, m: usize) -> f64 {
    tz_rounds_scale(n, k, spd) * m as f64
}

/// `k n^{1/k} ln n`
pub fn tz_label_scale(n: usize, k: usize) -> f64 {
    k as f64 * root(n, k) * ln(n)
}

/// `S (1/eps) ln n`
pub fn slack_rounds_scale(n: usize, eps: Eps, spd: usize) -> f64 {
    spd.max(1) as f64 / eps.as_f64() * ln(n)
}

/// `k ((1/eps) ln n)^{1/k} ln n`
pub fn cdg_size_scale(n: usize, eps: Eps, k: usize) -> f64 {
    k as f64 * (ln(n) / eps.as_f64()).powf(1.0 / k as f64) * ln(n)
}

/// `ln^4 n`
pub fn gd_size_scale(n: usize) -> f64 {
    ln(n).powi(4)
}

/// `S ln^4 n`
pub fn gd_rounds_scale(n: usize, spd: usize) -> f64 {
    spd.max(1) as f64 * gd_size_scale(n)
}

/// `S |E| ln^4 n`
pub fn gd_msgs_scale(n: usize, spd: usize, m: usize) -> f64 {
    gd_rounds_scale(n, spd) * m as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_constants_load() {
        let b = Bounds::frozen();
        assert!(b.tz.rounds > 0.0 && b.gd.avg_stretch >= 1.0);
    }

    #[test]
    fn scales() {
        assert!((tz_label_scale(256, 2) - 2.0 * 16.0 * 256f64.ln()).abs() < 1e-9);
        assert!((gd_rounds_scale(3, 2) - 2.0 * 3f64.ln().powi(4)).abs() < 1e-9);
    }
}
