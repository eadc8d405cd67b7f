//! Seeded random parameter points per genericity stratum.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hexagon::{ArcCoordinates, GenericityType};
use crate::maxrep::{side_families, SParameters};
use crate::reflection::{KElement, ReflectionFamily};
use crate::symmat::WeylVector;

/// Minimal gap `x₁ − x₂` of sampled regular length vectors, keeping them
/// clear of the diagonal stratum.
pub const MIN_REGULAR_GAP: f64 = 1e-3;

/// Deterministic generator for a seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Length range `(lo, hi)` of sampled components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthRange {
    pub lo: f64,
    pub hi: f64,
}

impl LengthRange {
    /// Range of the coordinate roundtrip suites.
    pub const COORDS: LengthRange = LengthRange { lo: 0.05, hi: 5.0 };
    /// Range of the representation suites.
    pub const REPS: LengthRange = LengthRange { lo: 0.05, hi: 1.0 };
}

fn length<R: Rng>(r: &mut R, range: LengthRange) -> f64 {
    r.gen_range(range.lo..range.hi)
}

/// A regular (`x₁ > x₂`) or diagonal (`x₁ = x₂`) length vector.
pub fn sample_weyl<R: Rng>(r: &mut R, range: LengthRange, diagonal: bool) -> WeylVector {
    if diagonal {
        return WeylVector::diagonal(length(r, range));
    }
    loop {
        let v = WeylVector::sorted(length(r, range), length(r, range));
        if v.h() > MIN_REGULAR_GAP {
            return v;
        }
    }
}

/// Uniform point of the given stratum; angles uniform in `[0, 2π)`.
pub fn sample_coords<R: Rng>(r: &mut R, stratum: GenericityType, range: LengthRange) -> ArcCoordinates {
    let (bd, cd, dd) = stratum.flags();
    let b = sample_weyl(r, range, bd);
    let c = sample_weyl(r, range, cd);
    let d = sample_weyl(r, range, dd);
    let a1 = r.gen_range(0.0..2.0 * PI);
    let a2 = r.gen_range(0.0..2.0 * PI);
    ArcCoordinates::new(b, c, d, a1, a2).expect("sampled lengths are valid")
}

/// `R_st`, `R_ex`, or (on non-generic sides) a uniform `θ` or the identity branch.
pub fn sample_k<R: Rng>(r: &mut R, family: ReflectionFamily) -> KElement {
    match family {
        ReflectionFamily::TwoElement => {
            if r.gen_bool(0.5) {
                KElement::st()
            } else {
                KElement::ex()
            }
        }
        ReflectionFamily::FullK => {
            if r.gen_bool(0.2) {
                KElement::st()
            } else {
                KElement::theta(r.gen_range(0.0..PI))
            }
        }
    }
}

/// A valid point of 𝒮 in the given stratum.
pub fn sample_sparams<R: Rng>(r: &mut R, stratum: GenericityType, range: LengthRange) -> SParameters {
    let coords = sample_coords(r, stratum, range);
    let fam = side_families(&coords);
    let ks = fam.map(|f| sample_k(r, f));
    SParameters::new(coords, ks[0], ks[1], ks[2]).expect("families respected")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_stratum() {
        for t in GenericityType::ALL {
            let a = sample_coords(&mut rng(7), t, LengthRange::COORDS);
            let b = sample_coords(&mut rng(7), t, LengthRange::COORDS);
            assert_eq!(a, b);
            assert_eq!(a.genericity(), t);
        }
    }
}
