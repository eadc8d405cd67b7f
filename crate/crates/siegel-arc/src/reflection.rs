//! Antisymplectic reflections, their fixed Lagrangians, reflection sets attached
//! to a maximal quadruple or to a side of a hexagon, the parameter set 𝒦 and the
//! attachment angle `β`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hexagon::{malefic_map, standard_frame, OrderedHexagon, SixTupleShape};
use crate::lagrangian::{
    blocks, map_quadruple_to_standard_with, projective_distance, split_blocks, symplectic_residual, transverse,
    Lagrangian, SpKind, SpMap,
};
use crate::symmat::{flip, rot, Mat2, Mat4, Mat42, PosDef2};
use crate::tube::H2Point;
use num_complex::Complex64;

/// Tolerance for identifying a conjugated reflection with `diag(−K, K)`.
const IDENTIFY_TOL: f64 = 1e-7;

/// An element of 𝒦 = {K ∈ PO(2) : K² = Id}: the identity branch (`R_st`) or
/// `K = r·rot(θ) = [[−cos θ, sin θ], [sin θ, cos θ]]`, `θ ∈ [0, π)` (`θ = 0` is `R_ex`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum KElement {
    Id,
    Theta(f64),
}

impl KElement {
    pub fn st() -> KElement {
        KElement::Id
    }

    pub fn ex() -> KElement {
        KElement::Theta(0.0)
    }

    /// `θ` reduced into `[0, π)`.
    pub fn theta(t: f64) -> KElement {
        let mut t = t.rem_euclid(PI);
        if PI - t < 1e-12 {
            t = 0.0;
        }
        KElement::Theta(t)
    }

    pub fn matrix(&self) -> Mat2 {
        match self {
            KElement::Id => Mat2::identity(),
            KElement::Theta(t) => flip() * rot(*t),
        }
    }

    /// `diag(−K, K)`.
    pub fn reflection(&self) -> Reflection {
        let k = self.matrix();
        Reflection {
            map: SpMap::from_parts(blocks(&-k, &Mat2::zeros(), &Mat2::zeros(), &k), SpKind::Antisymplectic),
        }
    }

    /// `R_st` or `R_ex`.
    pub fn is_two_element(&self) -> bool {
        match self {
            KElement::Id => true,
            KElement::Theta(t) => t.abs() < 1e-12 || (PI - t).abs() < 1e-12,
        }
    }

    /// Attachment angle `β(K)`: `π` for `K = Id`, `π + 2θ` otherwise.
    pub fn beta(&self) -> f64 {
        match self {
            KElement::Id => PI,
            KElement::Theta(t) => PI + 2.0 * t,
        }
    }

    pub fn approx_eq(&self, o: &KElement, tol: f64) -> bool {
        match (self, o) {
            (KElement::Id, KElement::Id) => true,
            (KElement::Theta(a), KElement::Theta(b)) => {
                let d = (a - b).rem_euclid(PI);
                d.min(PI - d) <= tol
            }
            _ => false,
        }
    }

    /// Image under conjugation by the flip `diag(r, r)`: `θ ↦ π − θ`.
    pub fn flipped(&self) -> KElement {
        match self {
            KElement::Id => KElement::Id,
            KElement::Theta(t) => KElement::theta(PI - t),
        }
    }

    /// Image under conjugation by `diag(T, T)`, `T = rot(τ)`: `θ ↦ θ − 2τ`.
    pub fn rotated(&self, tau: f64) -> KElement {
        match self {
            KElement::Id => KElement::Id,
            KElement::Theta(t) => KElement::theta(t - 2.0 * tau),
        }
    }

    /// Parses `st`, `ex`, `k:THETA`.
    pub fn parse(s: &str) -> Result<KElement> {
        match s.trim() {
            "st" => Ok(KElement::Id),
            "ex" => Ok(KElement::ex()),
            t => match t.strip_prefix("k:").map(str::parse::<f64>) {
                Some(Ok(v)) if v.is_finite() => Ok(KElement::theta(v)),
                _ => Err(GeomError::InvalidInput(format!("reflection must be st, ex or k:THETA, got {t:?}"))),
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            KElement::Id => "st".into(),
            KElement::Theta(t) if *t == 0.0 => "ex".into(),
            KElement::Theta(t) => format!("k:{t}"),
        }
    }
}

/// An antisymplectic projective involution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpMap", into = "SpMap")]
pub struct Reflection {
    map: SpMap,
}

impl TryFrom<SpMap> for Reflection {
    type Error = GeomError;
    fn try_from(m: SpMap) -> Result<Reflection> {
        Reflection::new(m.m)
    }
}

impl From<Reflection> for SpMap {
    fn from(r: Reflection) -> SpMap {
        r.map
    }
}

/// `‖m² − c·Id‖ / ‖m²‖` with the best scalar `c`; `c` is returned too.
fn involution_residual(m: &Mat4) -> (f64, f64) {
    let sq = m * m;
    let c = sq.trace() / 4.0;
    let r = (sq - Mat4::identity() * c).norm() / sq.norm().max(1e-300);
    (r, c)
}

impl Reflection {
    /// Validates antisymplecticity and the projective involution property.
    pub fn new(m: Mat4) -> Result<Reflection> {
        let ra = symplectic_residual(&m, SpKind::Antisymplectic);
        if ra >= 1e-10 {
            return Err(GeomError::NotAntisymplectic);
        }
        let (ri, c) = involution_residual(&m);
        if ri >= 1e-10 || c <= 0.0 {
            return Err(GeomError::NotInvolution(ri));
        }
        Ok(Reflection {
            map: SpMap::from_parts(m, SpKind::Antisymplectic),
        })
    }

    pub fn map(&self) -> &SpMap {
        &self.map
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.map.m
    }

    /// `g ∘ self ∘ g⁻¹`.
    pub fn conjugate_by(&self, g: &SpMap) -> Reflection {
        Reflection {
            map: g.conjugate(&self.map),
        }
    }

    pub fn act_lagrangian(&self, l: &Lagrangian) -> Lagrangian {
        self.map.act_lagrangian(l)
    }

    /// Involution residual `‖m² − c·Id‖/‖m²‖`.
    pub fn involution_residual(&self) -> f64 {
        involution_residual(&self.map.m).0
    }

    pub fn antisymplectic_residual(&self) -> f64 {
        symplectic_residual(&self.map.m, SpKind::Antisymplectic)
    }

    /// The `±1` eigenspaces `(E₁, E₋₁)` of the normalized involution.
    pub fn fixed_lagrangians(&self) -> Result<(Lagrangian, Lagrangian)> {
        let (_, c) = involution_residual(&self.map.m);
        let m = self.map.m / c.sqrt();
        let space = |s: f64| -> Result<Lagrangian> {
            // column space of the projector-like I ± m: top eigenvectors of P Pᵀ
            let p = Mat4::identity() + m * s;
            let eig = (p * p.transpose()).symmetric_eigen();
            let mut order: Vec<usize> = (0..4).collect();
            order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
            let mut b = Mat42::zeros();
            b.set_column(0, &eig.eigenvectors.column(order[0]));
            b.set_column(1, &eig.eigenvectors.column(order[1]));
            Lagrangian::from_basis(b)
        };
        let (e1, em1) = (space(1.0)?, space(-1.0)?);
        if !transverse(&e1, &em1) {
            return Err(GeomError::NotInvolution(f64::NAN));
        }
        Ok((e1, em1))
    }
}

/// `m` is an antisymplectic projective involution.
pub fn is_reflection(m: &Mat4) -> bool {
    Reflection::new(*m).is_ok()
}

/// `R_st` or `R_ex` only (generic case), or all of 𝒦 (non-generic case).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReflectionFamily {
    TwoElement,
    FullK,
}

/// The reflection set `{g⁻¹ diag(−K, K) g}` of a maximal quadruple, `g` sending it
/// to `(0, Id, Y′, l_∞)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReflectionSetDescriptor {
    pub conjugator: SpMap,
    pub family: ReflectionFamily,
}

impl ReflectionSetDescriptor {
    /// Materializes `g⁻¹ diag(−K, K) g`.
    pub fn enumerate(&self, k: &KElement) -> Result<Reflection> {
        if self.family == ReflectionFamily::TwoElement && !k.is_two_element() {
            return Err(GeomError::ReflectionNotInSet);
        }
        Ok(k.reflection().conjugate_by(&self.conjugator.inverse()))
    }

    /// The parameter `K` of a member reflection.
    pub fn identify(&self, r: &Reflection) -> Result<KElement> {
        let m = self.conjugator.m * r.map.m * self.conjugator.inverse().m;
        let (a, b, c, d) = split_blocks(&m);
        let scale = d.norm().max(a.norm());
        if scale == 0.0 {
            return Err(GeomError::ReflectionNotInSet);
        }
        let k = (d - a) * (0.5 / scale) * 2f64.sqrt();
        let off = (b.norm() + c.norm() + (a + d).norm()) / scale;
        let k2 = (k * k - Mat2::identity()).norm();
        if off > IDENTIFY_TOL || k2 > IDENTIFY_TOL || (k[(0, 1)] - k[(1, 0)]).abs() > IDENTIFY_TOL {
            return Err(GeomError::ReflectionNotInSet);
        }
        let kel = if (k - Mat2::identity()).norm() < IDENTIFY_TOL || (k + Mat2::identity()).norm() < IDENTIFY_TOL {
            KElement::Id
        } else {
            KElement::theta(k[(0, 1)].atan2(k[(1, 1)]))
        };
        if self.family == ReflectionFamily::TwoElement && !kel.is_two_element() {
            return Err(GeomError::ReflectionNotInSet);
        }
        Ok(kel)
    }

    pub fn contains(&self, r: &Reflection) -> bool {
        self.identify(r).is_ok()
    }

    fn with_frame(&self, g: &SpMap) -> ReflectionSetDescriptor {
        ReflectionSetDescriptor {
            conjugator: self.conjugator.compose(g),
            family: self.family,
        }
    }
}

/// Reflection set of a maximal quadruple `(P, X, Y, Q)`: reflections fixing `P`,
/// `Q` and swapping the endpoints of the perpendiculars from `X` and `Y`.
pub fn reflection_set(p: &Lagrangian, x: &Lagrangian, y: &Lagrangian, q: &Lagrangian) -> Result<ReflectionSetDescriptor> {
    let s = map_quadruple_to_standard_with(p, x, y, q, false)?;
    Ok(ReflectionSetDescriptor {
        conjugator: s.map,
        family: if s.scalar {
            ReflectionFamily::FullK
        } else {
            ReflectionFamily::TwoElement
        },
    })
}

fn reflection_set_forced(
    quad: [Lagrangian; 4],
    family: ReflectionFamily,
) -> Result<ReflectionSetDescriptor> {
    let s = map_quadruple_to_standard_with(&quad[0], &quad[1], &quad[2], &quad[3], family == ReflectionFamily::FullK)?;
    Ok(ReflectionSetDescriptor {
        conjugator: s.map,
        family,
    })
}

/// 12-tuple positions `(P, X, Y, Q)` of the side quadruple of tube `𝒴_side`.
pub fn side_quadruple_positions(side: usize) -> Result<[usize; 4]> {
    match side {
        2 => Ok([2, 3, 4, 5]),
        4 => Ok([6, 7, 8, 9]),
        6 => Ok([10, 11, 0, 1]),
        _ => Err(GeomError::InvalidInput(format!("side must be 2, 4 or 6, got {side}"))),
    }
}

/// Descriptor of the side reflection set, canonical for the isometry class: it
/// is computed on the standard-form hexagon and pulled back by the canonical
/// frame map, so `K` parameters are comparable across presentations.
pub fn reflection_set_for_side(h: &OrderedHexagon, side: usize) -> Result<ReflectionSetDescriptor> {
    let pos = side_quadruple_positions(side)?;
    let f = standard_frame(h)?;
    let p = f.coords;
    let h0 = OrderedHexagon::from_coords(&p);
    let generic = match side {
        2 => !p.b().in_diagonal(),
        6 => !p.d().in_diagonal(),
        _ => {
            let (a1, a2) = p.construction_angles();
            !malefic_map(&p.b(), &p.d(), a1, a2, &p.c()).in_diagonal()
        }
    };
    let family = if generic {
        ReflectionFamily::TwoElement
    } else {
        ReflectionFamily::FullK
    };
    let t = h0.twelve();
    let desc = reflection_set_forced(pos.map(|i| t[i]), family)?;
    Ok(desc.with_frame(&f.map))
}

/// `R(H)` as an ordered hexagon: `R` applied to the reversed six-tuple.
pub fn reflected_hexagon(h: &OrderedHexagon, r: &Reflection) -> Result<OrderedHexagon> {
    let [p, a, b, c, d, q] = h.six_tuple();
    let six = [q, d, c, b, a, p].map(|l| r.act_lagrangian(&l));
    OrderedHexagon::from_six_tuple(&six, SixTupleShape::Used)
}

/// Reflects `h` along `side` by a member `r` of that side's reflection set.
pub fn reflect_hexagon(h: &OrderedHexagon, r: &Reflection, side: usize) -> Result<OrderedHexagon> {
    let desc = reflection_set_for_side(h, side)?;
    desc.identify(r)?;
    reflected_hexagon(h, r)
}

/// Attachment angle `β(K)` between the polygonal chains of `h` and its
/// reflection along `side`.
pub fn attachment_angle(h: &OrderedHexagon, r: &Reflection, side: usize) -> Result<f64> {
    let desc = reflection_set_for_side(h, side)?;
    Ok(desc.identify(r)?.beta())
}

/// Equivariant `H²` shadow of a point `iY` of the standard tube: `[√(Y/√det Y)]·i`.
/// Unlike the level/shadow splitting it intertwines congruence by `SL(2)` with
/// the Möbius action, so angles at every vertex are the true ones.
pub fn h2_shadow(y: &PosDef2) -> H2Point {
    let det = y.inner().det();
    let b = PosDef2::new_unchecked(y.inner().scale(1.0 / det.sqrt())).sqrt().to_mat();
    let i = Complex64::i();
    let w = (i * b[(0, 0)] + b[(0, 1)]) / (i * b[(1, 0)] + b[(1, 1)]);
    H2Point { x: w.re, y: w.im }
}

fn shadows(six: &[Lagrangian; 6]) -> Result<[H2Point; 4]> {
    let mut out = [H2Point { x: 0.0, y: 1.0 }; 4];
    for (o, l) in out.iter_mut().zip(&six[1..5]) {
        let y = l.chart().ok_or(GeomError::ChartSingularity)?;
        *o = h2_shadow(&PosDef2::new_relative(y)?);
    }
    Ok(out)
}

/// Direction at `v` towards `w` as an argument in the disc centred at `v`.
fn direction(v: &H2Point, w: &H2Point) -> f64 {
    let z = Complex64::new(w.x, w.y);
    let c = Complex64::new(v.x, v.y);
    ((z - c) / (z - c.conj())).arg()
}

/// Turning angles at the interior vertices of a four-point chain, oriented so
/// that the chain of a hexagon in its own canonical frame reads `(α₁, α₂)`.
fn turning_angles(p: &[H2Point; 4]) -> [f64; 2] {
    [1, 2].map(|i| (direction(&p[i], &p[i - 1]) - direction(&p[i], &p[i + 1])).rem_euclid(2.0 * PI))
}

/// Turning angles of the chain of `R(h)` read in the canonical frame of `h`
/// (both tubes `𝒴₁` coincide there when `r` reflects along side 2).
pub fn reflected_chain_angles(h: &OrderedHexagon, r: &Reflection) -> Result<[f64; 2]> {
    let f = standard_frame(h)?;
    let rh = reflected_hexagon(&h.act(&f.map), &r.conjugate_by(&f.map))?;
    Ok(turning_angles(&shadows(&rh.six_tuple())?))
}

/// Attachment angle along side 2 measured in `H²`: the oriented angle at the
/// shared chain vertex `π(iA)` from the first non-degenerate segment of the chain
/// of `h` to the reversed last non-degenerate segment of the chain of `R(h)`,
/// both read in the canonical frame of `h`.
pub fn geometric_attachment_angle(h: &OrderedHexagon, r: &Reflection) -> Result<f64> {
    let f = standard_frame(h)?;
    let h0 = h.act(&f.map);
    let r0 = r.conjugate_by(&f.map);
    let rh = reflected_hexagon(&h0, &r0)?;
    let own = shadows(&h0.six_tuple())?;
    let other = shadows(&rh.six_tuple())?;
    let v = own[0];
    let first = |pts: &[H2Point]| -> Result<f64> {
        pts.iter()
            .find(|p| p.distance(&v) > 1e-7)
            .map(|p| direction(&v, p))
            .ok_or(GeomError::InvalidInput("degenerate polygonal chain".into()))
    };
    let (o, t) = (first(&own[1..])?, first(&[other[2], other[1], other[0]])?);
    Ok((t - o).rem_euclid(2.0 * PI))
}

/// Reflections `R` and `R′` give the same reflected hexagon.
pub fn same_reflected_hexagon(h: &OrderedHexagon, r1: &Reflection, r2: &Reflection, tol: f64) -> Result<bool> {
    Ok(reflected_hexagon(h, r1)?.approx_eq(&reflected_hexagon(h, r2)?, tol))
}

/// `‖r − s‖` projectively (relative Frobenius).
pub fn reflection_distance(r: &Reflection, s: &Reflection) -> f64 {
    projective_distance(&r.map.m, &s.map.m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexagon::ArcCoordinates;
    use crate::symmat::{Sym2, WeylVector};
    use std::f64::consts::FRAC_PI_4;

    fn ch(a: f64, b: f64, c: f64) -> Lagrangian {
        Lagrangian::from_chart(&Sym2::new(a, b, c))
    }

    fn coords(b: (f64, f64), c: (f64, f64), d: (f64, f64), a1: f64, a2: f64) -> ArcCoordinates {
        let w = |x: (f64, f64)| WeylVector::new(x.0, x.1);
        ArcCoordinates::new(w(b), w(c), w(d), a1, a2).unwrap()
    }

    #[test]
    fn standard_fixed_sets() {
        let (e1, em1) = KElement::st().reflection().fixed_lagrangians().unwrap();
        assert!(e1.approx_eq(&Lagrangian::zero(), 1e-12));
        assert!(em1.approx_eq(&Lagrangian::infinity(), 1e-12));
        let rex = KElement::ex().reflection();
        // R_ex fixes the diagonal points i·diag(y₁, y₂)
        let y = crate::symmat::PosDef2::new(Sym2::diag(2.0, 5.0)).unwrap();
        let z = crate::lagrangian::SiegelPoint::i_times(y);
        assert!(rex.map().act_siegel(&z).unwrap().approx_eq(&z, 1e-14));
        assert!(matches!(Reflection::new(SpMap::j().m), Err(GeomError::NotAntisymplectic)));
    }

    #[test]
    fn quadruple_families() {
        let zero = Lagrangian::zero();
        let inf = Lagrangian::infinity();
        let id = ch(1.0, 0.0, 1.0);
        let d = reflection_set(&zero, &id, &ch(2.0, 0.0, 3.0), &inf).unwrap();
        assert_eq!(d.family, ReflectionFamily::TwoElement);
        assert!(d.enumerate(&KElement::theta(0.3)).is_err());
        let d = reflection_set(&zero, &id, &ch(2.0, 0.0, 2.0), &inf).unwrap();
        assert_eq!(d.family, ReflectionFamily::FullK);
        for k in [KElement::st(), KElement::ex(), KElement::theta(0.3), KElement::theta(2.0)] {
            let r = d.enumerate(&k).unwrap();
            assert!(r.act_lagrangian(&zero).approx_eq(&zero, 1e-12));
            assert!(r.act_lagrangian(&inf).approx_eq(&inf, 1e-12));
            assert!(r.act_lagrangian(&id).approx_eq(&ch(-1.0, 0.0, -1.0), 1e-12));
            assert!(d.identify(&r).unwrap().approx_eq(&k, 1e-9));
        }
    }

    #[test]
    fn side_families() {
        let h = crate::hexagon::OrderedHexagon::from_coords(&coords((2.0, 1.0), (1.0, 0.5), (3.0, 2.0), 0.4, 1.3));
        for side in [2, 4, 6] {
            assert_eq!(reflection_set_for_side(&h, side).unwrap().family, ReflectionFamily::TwoElement);
        }
        let h = crate::hexagon::OrderedHexagon::from_coords(&coords((1.0, 1.0), (1.0, 0.5), (3.0, 2.0), 0.0, 1.3));
        assert_eq!(reflection_set_for_side(&h, 2).unwrap().family, ReflectionFamily::FullK);
    }

    #[test]
    fn reflected_lengths_reverse() {
        let p = coords((2.0, 1.0), (1.0, 0.5), (3.0, 2.5), 0.4, 1.3);
        let h = crate::hexagon::OrderedHexagon::from_coords(&p);
        for side in [2, 4, 6] {
            let d = reflection_set_for_side(&h, side).unwrap();
            for k in [KElement::st(), KElement::ex()] {
                let r = d.enumerate(&k).unwrap();
                let rh = reflect_hexagon(&h, &r, side).unwrap();
                let q = rh.coords().unwrap();
                assert!(q.approx_eq(&p.reversed(), 1e-8), "side {side} {k:?}: {q:?} vs {:?}", p.reversed());
                assert!(rh.is_maximal());
            }
        }
    }

    #[test]
    fn geometric_attachment_matches_beta() {
        for (b, a1, a2) in [((2.0, 1.0), 0.4, 1.3), ((1.0, 1.0), 0.0, 1.3), ((1.5, 1.5), 0.0, 0.7)] {
            let p = coords(b, (1.0, 0.5), (3.0, 2.5), a1, a2);
            let h = crate::hexagon::OrderedHexagon::from_coords(&p);
            let d = reflection_set_for_side(&h, 2).unwrap();
            let mut ks = vec![KElement::st(), KElement::ex()];
            if d.family == ReflectionFamily::FullK {
                ks.extend((0..16).map(|j| KElement::theta(j as f64 * PI / 16.0)));
            }
            for k in ks {
                let r = d.enumerate(&k).unwrap();
                let geo = geometric_attachment_angle(&h, &r).unwrap();
                let sym = attachment_angle(&h, &r, 2).unwrap();
                assert!(crate::hexagon::angle_distance(geo, sym) < 1e-9, "{k:?}: {geo} vs {sym}");
            }
        }
    }

    #[test]
    fn reflected_chain_orientation() {
        let (a1, a2) = (0.4, 1.3);
        let p = coords((2.0, 1.0), (1.0, 0.5), (3.0, 2.5), a1, a2);
        let h = crate::hexagon::OrderedHexagon::from_coords(&p);
        let d = reflection_set_for_side(&h, 2).unwrap();
        let st = reflected_chain_angles(&h, &d.enumerate(&KElement::st()).unwrap()).unwrap();
        let ex = reflected_chain_angles(&h, &d.enumerate(&KElement::ex()).unwrap()).unwrap();
        assert!((st[0] - (2.0 * PI - a2)).abs() < 1e-9 && (st[1] - (2.0 * PI - a1)).abs() < 1e-9, "{st:?}");
        assert!((ex[0] - a2).abs() < 1e-9 && (ex[1] - a1).abs() < 1e-9, "{ex:?}");
    }

    #[test]
    fn degenerate_coincidences() {
        let h = crate::hexagon::OrderedHexagon::from_coords(&coords((2.0, 1.0), (1.0, 0.5), (3.0, 2.0), 0.0, 0.0));
        for side in [2, 4, 6] {
            let d = reflection_set_for_side(&h, side).unwrap();
            let (st, ex) = (d.enumerate(&KElement::st()).unwrap(), d.enumerate(&KElement::ex()).unwrap());
            assert!(same_reflected_hexagon(&h, &st, &ex, 1e-8).unwrap(), "side {side}");
        }
        // generic non-polydisk hexagons separate the two branches
        let h = crate::hexagon::OrderedHexagon::from_coords(&coords((2.0, 1.0), (1.0, 0.5), (3.0, 2.0), 0.4, 1.3));
        let d = reflection_set_for_side(&h, 2).unwrap();
        let (st, ex) = (d.enumerate(&KElement::st()).unwrap(), d.enumerate(&KElement::ex()).unwrap());
        assert!(!same_reflected_hexagon(&h, &st, &ex, 1e-6).unwrap());

        let h = crate::hexagon::OrderedHexagon::from_coords(&coords((1.0, 1.0), (0.7, 0.7), (2.0, 2.0), 0.0, 0.0));
        for side in [2, 4, 6] {
            let d = reflection_set_for_side(&h, side).unwrap();
            assert_eq!(d.family, ReflectionFamily::FullK);
            let base = reflected_hexagon(&h, &d.enumerate(&KElement::st()).unwrap()).unwrap();
            for j in 0..16 {
                let r = d.enumerate(&KElement::theta(j as f64 * PI / 16.0)).unwrap();
                assert!(reflected_hexagon(&h, &r).unwrap().approx_eq(&base, 1e-8), "side {side} θ index {j}");
            }
        }
    }

    #[test]
    fn maximality_transport() {
        let p = coords((2.0, 1.0), (1.0, 0.5), (3.0, 2.5), 0.4, 1.3);
        let h = crate::hexagon::OrderedHexagon::from_coords(&p);
        let t = h.twelve();
        let d = reflection_set_for_side(&h, 2).unwrap();
        for k in [KElement::st(), KElement::ex()] {
            let r = d.enumerate(&k).unwrap();
            // (Q, R(Y), R(l₄), …, R(X), P) for the side quadruple (P, X, Y, Q) = t[2..6]
            let mut tuple = vec![t[5]];
            tuple.extend([t[4], t[3]].iter().map(|l| r.act_lagrangian(l)));
            tuple.push(t[2]);
            assert!(crate::lagrangian::is_maximal_tuple(&tuple).unwrap());
            // fixed pair and swapped perpendicular endpoints
            assert!(r.act_lagrangian(&t[2]).approx_eq(&t[2], 1e-9));
            assert!(r.act_lagrangian(&t[5]).approx_eq(&t[5], 1e-9));
            assert!(r.act_lagrangian(&t[3]).approx_eq(&t[0], 1e-9));
            assert!(r.act_lagrangian(&t[4]).approx_eq(&t[7], 1e-9));
            let (e1, em1) = r.fixed_lagrangians().unwrap();
            assert!(r.act_lagrangian(&e1).approx_eq(&e1, 1e-9) && r.act_lagrangian(&em1).approx_eq(&em1, 1e-9));
        }
    }

    #[test]
    fn beta_values() {
        assert_eq!(KElement::st().beta(), PI);
        assert_eq!(KElement::ex().beta(), PI);
        assert!((KElement::theta(FRAC_PI_4).beta() - 1.5 * PI).abs() < 1e-15);
    }
}
