//! R-tubes, the vectorial (Weyl-chamber) distance, orthogonality, intersections,
//! projections, common perpendiculars, the `R × H²` splitting of the standard
//! tube and the elementary bijections `T` and `f`.

use std::f64::consts::SQRT_2;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::lagrangian::{
    cross_ratio, is_maximal_tuple, map_pair_to_standard, transverse, Lagrangian, SiegelPoint, SpMap,
};
use crate::symmat::{geometric_mean, Mat2, PosDef2, Sym2, WeylVector};
use crate::tol::tol;

type CMat2 = Matrix2<Complex64>;

/// The R-tube `𝒴_{a,b}` spanned by two transverse Lagrangians; endpoints are kept
/// in a canonical order so that unordered equality is a field comparison.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RTube {
    a: Lagrangian,
    b: Lagrangian,
}

impl RTube {
    pub fn new(a: Lagrangian, b: Lagrangian) -> Result<RTube> {
        if !transverse(&a, &b) {
            return Err(GeomError::NotTransverse);
        }
        let (ka, kb) = (a.sort_key(), b.sort_key());
        let swap = ka.iter().zip(kb.iter()).find(|(x, y)| x != y).is_some_and(|(x, y)| x > y);
        Ok(if swap { RTube { a: b, b: a } } else { RTube { a, b } })
    }

    /// `𝒴_{0,∞}`.
    pub fn standard() -> RTube {
        RTube::new(Lagrangian::zero(), Lagrangian::infinity()).expect("0 and l_∞ are transverse")
    }

    pub fn endpoints(&self) -> (Lagrangian, Lagrangian) {
        (self.a, self.b)
    }

    pub fn has_endpoint(&self, l: &Lagrangian, tol: f64) -> bool {
        self.a.approx_eq(l, tol) || self.b.approx_eq(l, tol)
    }

    pub fn approx_eq(&self, o: &RTube, tol: f64) -> bool {
        (self.a.approx_eq(&o.a, tol) && self.b.approx_eq(&o.b, tol))
            || (self.a.approx_eq(&o.b, tol) && self.b.approx_eq(&o.a, tol))
    }

    pub fn act(&self, g: &SpMap) -> RTube {
        RTube::new(g.act_lagrangian(&self.a), g.act_lagrangian(&self.b)).expect("maps preserve transversality")
    }
}

/// The `(r, h)` decomposition of a vectorial length along `R × H²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RHVector {
    pub r: f64,
    pub h: f64,
}

/// Upper-half-plane point `x + iy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2Point {
    pub x: f64,
    pub y: f64,
}

impl H2Point {
    pub fn new(x: f64, y: f64) -> Result<H2Point> {
        if y > 0.0 && x.is_finite() && y.is_finite() {
            Ok(H2Point { x, y })
        } else {
            Err(GeomError::InvalidInput(format!("H2 point needs y > 0, got {y}")))
        }
    }

    pub fn i() -> H2Point {
        H2Point { x: 0.0, y: 1.0 }
    }

    /// Hyperbolic distance (curvature −1).
    pub fn distance(&self, o: &H2Point) -> f64 {
        let num = (self.x - o.x).powi(2) + (self.y - o.y).powi(2);
        acosh_1p(num / (2.0 * self.y * o.y))
    }

    /// Cayley image in the Poincaré disc, `(w − i)/(w + i)`.
    pub fn to_disc(&self) -> (f64, f64) {
        let w = Complex64::new(self.x, self.y);
        let i = Complex64::i();
        let z = (w - i) / (w + i);
        (z.re, z.im)
    }
}

/// `acosh(1 + t)` evaluated stably for small `t`.
fn acosh_1p(t: f64) -> f64 {
    let t = t.max(0.0);
    (t + (t * (t + 2.0)).sqrt()).ln_1p()
}

fn mobius(m: &Mat2, z: Complex64) -> Complex64 {
    (z * m[(0, 0)] + m[(0, 1)]) / (z * m[(1, 0)] + m[(1, 1)])
}

/// Symplectic map sending `z` to `iId` (translation then congruence).
fn map_to_base_point(z: &SiegelPoint) -> SpMap {
    let t = SpMap::translation(&z.x.neg());
    let s = z.y.powf(-0.5).to_mat();
    SpMap::block_diag(&s).expect("PD square root is invertible").compose(&t)
}

fn ceig2(m: &CMat2) -> (Complex64, Complex64) {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let half = tr * 0.5;
    let rad = (half * half - det).sqrt();
    let big = if (half + rad).norm() >= (half - rad).norm() { half + rad } else { half - rad };
    let small = if big.norm() > 0.0 { det / big } else { half - rad };
    (big, small)
}

/// Vectorial distance `d^𝔞(z₁, z₂)`: the eigenvalues `r` of the complex
/// cross-ratio `R(z₁, z̄₂, z₂, z̄₁)` give `λ = (1 + √r)/(1 − √r)` and the distance
/// is `(log λ₁, log λ₂)` ordered descending.
pub fn weyl_distance(z1: &SiegelPoint, z2: &SiegelPoint) -> WeylVector {
    if z1.is_on_standard_tube(0.0) && z2.is_on_standard_tube(0.0) {
        return weyl_distance_on_standard_tube(&z1.y, &z2.y);
    }
    let g = map_to_base_point(z1);
    let w = match g.act_siegel(z2) {
        Ok(w) => w,
        Err(_) => return WeylVector::new(f64::INFINITY, f64::INFINITY),
    };
    let i = Complex64::i();
    let x = CMat2::identity() * i;
    let xb = CMat2::identity() * -i;
    let z = w.to_complex();
    let zb = z.map(|v| v.conj());
    let inv = |m: CMat2| m.try_inverse().unwrap_or_else(|| CMat2::from_element(Complex64::new(f64::NAN, 0.0)));
    let r = inv(x - zb) * (xb - zb) * inv(xb - z) * (x - z);
    let (r1, r2) = ceig2(&r);
    let lam = |r: Complex64| {
        let s = r.re.max(0.0).sqrt().min(1.0);
        ((1.0 + s) / (1.0 - s)).ln()
    };
    WeylVector::sorted(lam(r1), lam(r2))
}

/// Fast path on `𝒴_{0,∞}`: `d^𝔞(iA, iB) = |log eig(A⁻¹B)|`, sorted.
pub fn weyl_distance_on_standard_tube(a: &PosDef2, b: &PosDef2) -> WeylVector {
    let s = a.powf(-0.5).to_mat();
    let m = Sym2::from_mat(&(s * b.to_mat() * s));
    let (l1, l2) = m.eigenvalues();
    WeylVector::sorted(l1.ln().abs(), l2.ln().abs())
}

/// Cyclic orders `(a, c, b, d)` of the endpoints of two tubes, tried in turn.
fn interleavings(t1: &RTube, t2: &RTube) -> [[Lagrangian; 4]; 2] {
    let (a, b) = t1.endpoints();
    let (c, d) = t2.endpoints();
    [[a, c, b, d], [a, d, b, c]]
}

fn interleaved_order(t1: &RTube, t2: &RTube) -> Result<[Lagrangian; 4]> {
    for q in interleavings(t1, t2) {
        if q.iter().enumerate().all(|(i, x)| q[i + 1..].iter().all(|y| transverse(x, y)))
            && is_maximal_tuple(&q)?
        {
            return Ok(q);
        }
    }
    Err(GeomError::NotInterleaved)
}

/// Cross-ratio distance `‖R(a, c, b, d) − 2·Id‖` for an interleaved order.
pub fn orthogonality_defect(t1: &RTube, t2: &RTube) -> Result<f64> {
    let [a, c, b, d] = interleaved_order(t1, t2)?;
    let r = cross_ratio(&a, &c, &b, &d)?;
    Ok((r - Mat2::identity() * 2.0).norm())
}

/// Orthogonality criterion `R(a, c, b, d) = 2·Id`.
pub fn tubes_orthogonal(t1: &RTube, t2: &RTube) -> Result<bool> {
    Ok(orthogonality_defect(t1, t2)? < tol().ortho)
}

/// Unique common point of two tubes with interleaving endpoints.
pub fn intersect_tubes(t1: &RTube, t2: &RTube) -> Result<SiegelPoint> {
    let (a, b) = t1.endpoints();
    let g = map_pair_to_standard(&a, &b)?;
    let (c, d) = t2.endpoints();
    let (Some(u), Some(v)) = (g.act_lagrangian(&c).chart(), g.act_lagrangian(&d).chart()) else {
        return Err(GeomError::EmptyIntersection);
    };
    // interleaving with (0, l_∞) means one endpoint chart is positive and one negative definite
    let (q, p) = if u.is_pd_relative(tol().pd) { (u, v.neg()) } else { (v, u.neg()) };
    let (Ok(q), Ok(p)) = (PosDef2::new_relative(q), PosDef2::new_relative(p)) else {
        return Err(GeomError::EmptyIntersection);
    };
    let z = SiegelPoint::i_times(geometric_mean(&q, &p));
    g.inverse().act_siegel(&z)
}

/// Orthogonal projection of a Lagrangian `x ∈ ((a, b))` onto `𝒴_{a,b}`.
pub fn project_lagrangian(t: &RTube, x: &Lagrangian) -> Result<SiegelPoint> {
    let (a, b) = t.endpoints();
    for (p, q) in [(a, b), (b, a)] {
        let g = map_pair_to_standard(&p, &q)?;
        if let Some(c) = g.act_lagrangian(x).chart() {
            if let Ok(y) = PosDef2::new_relative(c) {
                if c.is_pd_relative(tol().pd) {
                    return g.inverse().act_siegel(&SiegelPoint::i_times(y));
                }
            }
        }
    }
    Err(GeomError::OutsideInterval)
}

/// Orthogonal projection of a Siegel point onto `𝒴_{a,b}`; on `𝒴_{0,∞}` it is
/// `X + iY ↦ i·(Y # (Y + X Y⁻¹ X))`.
pub fn project_point(t: &RTube, z: &SiegelPoint) -> Result<SiegelPoint> {
    let (a, b) = t.endpoints();
    let g = map_pair_to_standard(&a, &b)?;
    let w = g.act_siegel(z)?;
    let x = w.x.to_mat();
    let yi = w.y.inverse().to_mat();
    let other = PosDef2::new_relative(w.y.inner().add(&Sym2::from_mat(&(x * yi * x))))?;
    let p = SiegelPoint::i_times(geometric_mean(&w.y, &other));
    g.inverse().act_siegel(&p)
}

/// Common perpendicular of `𝒴_{P₁,P₄}` and `𝒴_{P₂,P₃}` for a maximal quadruple,
/// returned as the ordered pair `(Z₁, Z₂) = g⁻¹(−√P, √P)` where `g` sends the
/// quadruple to `(0, Id, P, l_∞)`.
pub fn common_perpendicular_points(
    p1: &Lagrangian,
    p2: &Lagrangian,
    p3: &Lagrangian,
    p4: &Lagrangian,
) -> Result<(Lagrangian, Lagrangian)> {
    if !is_maximal_tuple(&[*p1, *p2, *p3, *p4]).map_err(|_| GeomError::NotMaximal)? {
        return Err(GeomError::NotMaximal);
    }
    let g0 = map_pair_to_standard(p1, p4).map_err(|_| GeomError::NotMaximal)?;
    let x2 = g0.act_lagrangian(p2).chart().ok_or(GeomError::NotMaximal)?;
    let x3 = g0.act_lagrangian(p3).chart().ok_or(GeomError::NotMaximal)?;
    let x2 = PosDef2::new_relative(x2).map_err(|_| GeomError::NotMaximal)?;
    let s = x2.powf(-0.5);
    let p = PosDef2::new_relative(x3.congruence(&s.to_mat())).map_err(|_| GeomError::NotMaximal)?;
    let root = p.sqrt();
    let g = SpMap::block_diag(&s.to_mat())?.compose(&g0);
    let gi = g.inverse();
    Ok((
        gi.act_lagrangian(&Lagrangian::from_chart(&root.inner().neg())),
        gi.act_lagrangian(&Lagrangian::from_chart(root.inner())),
    ))
}

/// The unique tube orthogonal to both inputs (endpoints must interleave as a
/// maximal quadruple in some cyclic order of the form `(P₁, P₂, P₃, P₄)` with
/// `t₁ = 𝒴_{P₁,P₄}`, `t₂ = 𝒴_{P₂,P₃}`).
pub fn common_perpendicular(t1: &RTube, t2: &RTube) -> Result<RTube> {
    let (a, b) = t1.endpoints();
    let (c, d) = t2.endpoints();
    for [p1, p2, p3, p4] in [[a, c, d, b], [a, d, c, b], [b, c, d, a], [b, d, c, a]] {
        if let Ok((z1, z2)) = common_perpendicular_points(&p1, &p2, &p3, &p4) {
            return RTube::new(z1, z2);
        }
    }
    Err(GeomError::NotMaximal)
}

/// For `(0, P₁, P₂, l_∞)` maximal: the tubes `𝒴_{P₁P₂⁻¹P₁, P₂} ⟂ 𝒴_{−P₁,P₁}` and
/// `𝒴_{P₁, P₂P₁⁻¹P₂} ⟂ 𝒴_{−P₂,P₂}`.
pub fn perp_through_endpoint(p1: &Sym2, p2: &Sym2) -> Result<(RTube, RTube)> {
    let l = |x: &Sym2| Lagrangian::from_chart(x);
    if !is_maximal_tuple(&[Lagrangian::zero(), l(p1), l(p2), Lagrangian::infinity()])? {
        return Err(GeomError::NotMaximal);
    }
    let (m1, m2) = (p1.to_mat(), p2.to_mat());
    let i1 = m1.try_inverse().ok_or(GeomError::NotMaximal)?;
    let i2 = m2.try_inverse().ok_or(GeomError::NotMaximal)?;
    let a = Sym2::from_mat(&(m1 * i2 * m1));
    let b = Sym2::from_mat(&(m2 * i1 * m2));
    Ok((RTube::new(l(&a), l(p2))?, RTube::new(l(p1), l(&b))?))
}

/// `R × H²` splitting of the standard tube:
/// `Y ↦ (log det Y / √2, [Y/√det Y]·i)`.
pub fn split_rh(y: &PosDef2) -> (f64, H2Point) {
    let det = y.inner().det();
    let level = det.ln() / SQRT_2;
    let b = y.inner().scale(1.0 / det.sqrt()).to_mat();
    let w = mobius(&b, Complex64::i());
    (level, H2Point { x: w.re, y: w.im })
}

/// Inverse of [`split_rh`]: the unimodular symmetric `B` with `B·i = w` is the
/// square root of `g gᵀ` for `g = [[√y, x/√y], [0, 1/√y]]`.
pub fn unsplit_rh(level: f64, p: &H2Point) -> PosDef2 {
    let (x, y) = (p.x, p.y);
    let w = PosDef2::new_unchecked(Sym2::new(y + x * x / y, x / y, 1.0 / y));
    let b = w.sqrt();
    let scale = (level * SQRT_2).exp().sqrt();
    PosDef2::new_unchecked(b.inner().scale(scale))
}

/// `r = (d₁ + d₂)/√2`, `h = d₁ − d₂`.
pub fn rh_vector(d: &WeylVector) -> RHVector {
    RHVector {
        r: (d.x1 + d.x2) / SQRT_2,
        h: d.x1 - d.x2,
    }
}

/// Positive-definiteness criterion `r > h/√2`.
pub fn pd_criterion(v: &RHVector) -> bool {
    v.r - v.h / SQRT_2 > tol().pd * v.r.abs().max(1.0)
}

/// `log((e^t + 1)/(e^t − 1))`, evaluated stably as `log1p(e^{−t}) − log1p(−e^{−t})`.
pub fn f_scalar(t: f64) -> f64 {
    let e = (-t).exp();
    e.ln_1p() - (-e).ln_1p()
}

/// The involution `f(d₁, d₂) = (f(d₂), f(d₁))` relating the two genericity
/// conditions of a side.
pub fn bijection_f(d: &WeylVector) -> WeylVector {
    WeylVector::new(f_scalar(d.x2), f_scalar(d.x1))
}

/// `T(x) = (x + 1)²/(4x)` componentwise on eigenvalues (not logs).
pub fn t_scalar(x: f64) -> f64 {
    (x + 1.0).powi(2) / (4.0 * x)
}

/// `T` on eigen-log vectors: `x ↦ log T(e^x)`, ordered descending.
pub fn bijection_t(x: &WeylVector) -> WeylVector {
    let t = |v: f64| {
        // log((e^v + 1)^2 / (4 e^v)) = 2 log cosh(v/2)
        2.0 * (0.5 * v).cosh().ln()
    };
    WeylVector::sorted(t(x.x1), t(x.x2))
}
