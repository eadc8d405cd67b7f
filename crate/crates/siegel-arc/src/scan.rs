//! Grid scans of the malefic map with surjectivity-gap and injectivity-collision
//! detectors, plus the closed forms used to cross-check the general computation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hexagon::malefic_map;
use crate::par::Exec;
use crate::symmat::WeylVector;

/// Default gap radius around the probed diagonal window.
pub const EPS_GAP: f64 = 0.05;
/// Default collision radius.
pub const EPS_COL: f64 = 1e-3;
/// Default probed diagonal window `{(y, y) : y ∈ [0.5, 8]}`.
pub const GAP_WINDOW: (f64, f64) = (0.5, 8.0);
/// Minimal Chebyshev separation (in grid steps) of colliding cells.
pub const MIN_SEPARATION: usize = 5;

/// Square grid `{c_min + k·step}²` up to `c_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridSpec {
    pub c_min: f64,
    pub c_max: f64,
    pub step: f64,
    /// Keep only `c₁ ≥ c₂` (the closed Weyl chamber).
    pub restrict_to_weyl: bool,
}

impl GridSpec {
    pub fn new(c_min: f64, c_max: f64, step: f64, restrict_to_weyl: bool) -> Result<GridSpec> {
        let g = GridSpec {
            c_min,
            c_max,
            step,
            restrict_to_weyl,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c_min > 0.0 && self.step > 0.0 && self.c_max > self.c_min && self.c_max.is_finite()) {
            return Err(GeomError::InvalidInput(format!(
                "grid needs cMin > 0, step > 0, cMax > cMin (got {}, {}, {})",
                self.c_min, self.c_max, self.step
            )));
        }
        Ok(())
    }

    /// Number of values per axis.
    pub fn axis_len(&self) -> usize {
        ((self.c_max - self.c_min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn value(&self, k: usize) -> f64 {
        self.c_min + k as f64 * self.step
    }

    /// Grid cells `(i, j)` in row-major order (`c₁ = value(i)`, `c₂ = value(j)`).
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let n = self.axis_len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.restrict_to_weyl || i >= j)
            .collect()
    }
}

/// Parameters `(b, d, α₁, α₂)` of a malefic map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaleficParams {
    pub b: WeylVector,
    pub d: WeylVector,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl MaleficParams {
    pub fn eval(&self, c: &WeylVector) -> WeylVector {
        malefic_map(&self.b, &self.d, self.alpha1, self.alpha2, c)
    }
}

/// One evaluated grid cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub i: usize,
    pub j: usize,
    pub c1: f64,
    pub c2: f64,
    pub f1: f64,
    pub f2: f64,
}

/// Evaluates `F` on every cell, in row-major order.
pub fn scan(params: &MaleficParams, grid: &GridSpec, exec: Exec) -> Vec<ScanRow> {
    let cells = grid.cells();
    exec.map(&cells, |&(i, j)| {
        let (c1, c2) = (grid.value(i), grid.value(j));
        let f = params.eval(&WeylVector::new(c1, c2));
        ScanRow {
            i,
            j,
            c1,
            c2,
            f1: f.x1,
            f2: f.x2,
        }
    })
}

/// Distance of `(f1, f2)` to the diagonal segment `{(y, y) : y ∈ [lo, hi]}`.
pub fn distance_to_window(f1: f64, f2: f64, window: (f64, f64)) -> f64 {
    let y = ((f1 + f2) / 2.0).clamp(window.0, window.1);
    (f1 - y).hypot(f2 - y)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GapReport {
    pub found: bool,
    /// Smallest distance of an image point to the window.
    pub min_distance: f64,
    pub eps: f64,
    pub window: (f64, f64),
}

/// Non-surjectivity witness: no finite image point within `eps` of the window.
pub fn detect_gap(rows: &[ScanRow], eps: f64, window: (f64, f64)) -> GapReport {
    let min_distance = rows
        .iter()
        .filter(|r| r.f1.is_finite() && r.f2.is_finite())
        .map(|r| distance_to_window(r.f1, r.f2, window))
        .fold(f64::INFINITY, f64::min);
    GapReport {
        found: min_distance > eps,
        min_distance,
        eps,
        window,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CollisionReport {
    pub found: bool,
    /// Row indices of the first witness pair.
    pub witness: Option<(usize, usize)>,
    pub distance: Option<f64>,
    pub eps: f64,
    pub min_separation: usize,
}

/// Non-injectivity witness: two cells at Chebyshev grid distance
/// `≥ min_separation` whose images lie within `eps` of each other. Images are
/// bucketed on an `eps`-grid and only neighbouring buckets are compared.
pub fn detect_collision(rows: &[ScanRow], eps: f64, min_separation: usize) -> CollisionReport {
    let key = |r: &ScanRow| ((r.f1 / eps).floor() as i64, (r.f2 / eps).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (k, r) in rows.iter().enumerate() {
        if r.f1.is_finite() && r.f2.is_finite() {
            buckets.entry(key(r)).or_default().push(k);
        }
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for (k, r) in rows.iter().enumerate() {
        if !(r.f1.is_finite() && r.f2.is_finite()) {
            continue;
        }
        let (bx, by) = key(r);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = buckets.get(&(bx + dx, by + dy)) else { continue };
                for &m in list {
                    if m <= k {
                        continue;
                    }
                    let s = &rows[m];
                    let sep = r.i.abs_diff(s.i).max(r.j.abs_diff(s.j));
                    let dist = (r.f1 - s.f1).hypot(r.f2 - s.f2);
                    if sep >= min_separation && dist < eps && best.is_none_or(|b| (k, m) < (b.0, b.1)) {
                        best = Some((k, m, dist));
                    }
                }
            }
        }
    }
    CollisionReport {
        found: best.is_some(),
        witness: best.map(|b| (b.0, b.1)),
        distance: best.map(|b| b.2),
        eps,
        min_separation,
    }
}

/// Summary of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanSummary {
    pub surjectivity_gap_found: bool,
    pub injectivity_collision_found: bool,
    pub gap: GapReport,
    pub collision: CollisionReport,
    pub cells: usize,
}

pub fn summarize(rows: &[ScanRow], eps_gap: f64, window: (f64, f64), eps_col: f64, min_separation: usize) -> ScanSummary {
    let gap = detect_gap(rows, eps_gap, window);
    let collision = detect_collision(rows, eps_col, min_separation);
    ScanSummary {
        surjectivity_gap_found: gap.found,
        injectivity_collision_found: collision.found,
        gap,
        collision,
        cells: rows.len(),
    }
}

/// One component of the polydisk closed forms:
/// `log[(e^{c+2δ} − 1)(1 − e^{2β+c}) / (e^c (1 − e^{2β})(e^{2δ} − 1))]`.
pub fn closed_form_component(c: f64, beta: f64, delta: f64) -> f64 {
    let num = (c + 2.0 * delta).exp_m1() * -(2.0 * beta + c).exp_m1();
    let den = c.exp() * -(2.0 * beta).exp_m1() * (2.0 * delta).exp_m1();
    (num / den).ln()
}

/// Closed form of `F` at `α = (0, 0)`: components `(c₁; b₂, d₂)`, `(c₂; b₁, d₁)`,
/// sorted descending.
pub fn closed_form_zero(b: &WeylVector, d: &WeylVector, c: &WeylVector) -> WeylVector {
    WeylVector::sorted(closed_form_component(c.x1, b.x2, d.x2), closed_form_component(c.x2, b.x1, d.x1))
}

/// Closed form of `F` at `α = (π, π)`: components `(c₁; b₁, d₁)`, `(c₂; b₂, d₂)`.
pub fn closed_form_pi(b: &WeylVector, d: &WeylVector, c: &WeylVector) -> WeylVector {
    WeylVector::sorted(closed_form_component(c.x1, b.x1, d.x1), closed_form_component(c.x2, b.x2, d.x2))
}

/// `H²` cross-ratio `y = T(F(c))` for scalar lengths `b, c, d`.
pub fn h2_cross_ratio(b: f64, c: f64, d: f64) -> f64 {
    closed_form_component(c, b, d).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = GridSpec::new(0.1, 10.0, 0.1, false).unwrap();
        assert_eq!(g.axis_len(), 100);
        assert_eq!(g.cells().len(), 10_000);
        assert_eq!(GridSpec::new(0.1, 10.0, 0.1, true).unwrap().cells().len(), 5050);
        assert!(GridSpec::new(0.0, 1.0, 0.1, true).is_err());
        assert!(GridSpec::new(1.0, 0.5, 0.1, true).is_err());
    }

    #[test]
    fn closed_forms_match_general_map() {
        let b = WeylVector::new(1.3, 0.4);
        let d = WeylVector::new(0.9, 0.2);
        let c = WeylVector::new(2.0, 0.7);
        let p0 = MaleficParams { b, d, alpha1: 0.0, alpha2: 0.0 };
        let pp = MaleficParams {
            b,
            d,
            alpha1: std::f64::consts::PI,
            alpha2: std::f64::consts::PI,
        };
        assert!(p0.eval(&c).dist(&closed_form_zero(&b, &d, &c)) < 1e-9);
        assert!(pp.eval(&c).dist(&closed_form_pi(&b, &d, &c)) < 1e-9);
    }

    #[test]
    fn detectors_on_synthetic_rows() {
        let row = |i, j, f1, f2| ScanRow { i, j, c1: 0.0, c2: 0.0, f1, f2 };
        let rows = vec![row(0, 0, 3.0, 1.0), row(0, 9, 3.0004, 1.0), row(0, 1, 3.0, 1.0)];
        let c = detect_collision(&rows, 1e-3, 5);
        assert_eq!(c.witness, Some((0, 1)));
        assert!(detect_gap(&rows, 0.05, (0.5, 8.0)).found);
        let near = vec![row(0, 0, 2.0, 1.99)];
        assert!(!detect_gap(&near, 0.05, (0.5, 8.0)).found);
    }
}
