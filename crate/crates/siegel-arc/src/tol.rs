//! Numerical tolerances, overridable through the `SIEGEL_ARC_TOL` environment variable.
//!
//! The variable holds comma-separated `key=value` pairs, e.g. `pd=1e-11,reg=1e-8`.
//! Unknown keys and malformed values are ignored. The environment is read once.

use std::sync::OnceLock;

pub const TAU_PD: f64 = 1e-10;
pub const TAU_REG: f64 = 1e-9;
pub const TAU_TRANSVERSE: f64 = 1e-10;
pub const TAU_ORTHO: f64 = 1e-8;
pub const TAU_SHILOV: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Positive-definiteness threshold.
    pub pd: f64,
    /// Spectral gap / Weyl regularity threshold.
    pub reg: f64,
    /// Relative determinant threshold for transversality.
    pub transverse: f64,
    /// `‖R − 2Id‖` threshold for tube orthogonality.
    pub ortho: f64,
    /// Margin of eigenvalue moduli away from the unit circle.
    pub shilov: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pd: TAU_PD,
            reg: TAU_REG,
            transverse: TAU_TRANSVERSE,
            ortho: TAU_ORTHO,
            shilov: TAU_SHILOV,
        }
    }
}

impl Tolerances {
    /// Parses an override string on top of the defaults.
    pub fn parse(spec: &str) -> Tolerances {
        let mut t = Tolerances::default();
        for item in spec.split(',') {
            let Some((k, v)) = item.split_once('=') else { continue };
            let Ok(v) = v.trim().parse::<f64>() else { continue };
            if !(v.is_finite() && v > 0.0) {
                continue;
            }
            match k.trim() {
                "pd" => t.pd = v,
                "reg" => t.reg = v,
                "transverse" => t.transverse = v,
                "ortho" => t.ortho = v,
                "shilov" => t.shilov = v,
                _ => {}
            }
        }
        t
    }
}

static TOL: OnceLock<Tolerances> = OnceLock::new();

/// Process-wide tolerances (defaults unless `SIEGEL_ARC_TOL` is set).
pub fn tol() -> &'static Tolerances {
    TOL.get_or_init(|| match std::env::var("SIEGEL_ARC_TOL") {
        Ok(s) => Tolerances::parse(&s),
        Err(_) => Tolerances::default(),
    })
}
