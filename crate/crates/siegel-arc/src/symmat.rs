//! Exact-shape small dense linear algebra: 2×2 symmetric and positive-definite
//! matrices with a closed-form spectral decomposition, rotations and angle
//! classes, Weyl-chamber vectors, and the 4×4 / 4×2 carriers used elsewhere.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{Matrix2, Matrix4, Matrix4x2};
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::tol::tol;

pub type Mat2 = Matrix2<f64>;
pub type Mat4 = Matrix4<f64>;
pub type Mat42 = Matrix4x2<f64>;

/// `r = diag(-1, 1)`, the flip of the projective rotation group.
pub fn flip() -> Mat2 {
    Mat2::new(-1.0, 0.0, 0.0, 1.0)
}

/// `N = [[0,1],[-1,0]]`.
pub fn quarter_turn() -> Mat2 {
    Mat2::new(0.0, 1.0, -1.0, 0.0)
}

/// Cosine and sine, exact at integer multiples of π/2.
pub fn cos_sin(t: f64) -> (f64, f64) {
    let k = (t / FRAC_PI_2).round();
    if (t - k * FRAC_PI_2).abs() < 1e-14 {
        match (k as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        (t.cos(), t.sin())
    }
}

/// `[[cos t, -sin t],[sin t, cos t]]`.
pub fn rot(t: f64) -> Mat2 {
    let (c, s) = cos_sin(t);
    Mat2::new(c, -s, s, c)
}

/// Symmetric 2×2 matrix `[[m11, m12],[m12, m22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sym2 {
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl Sym2 {
    pub const fn new(m11: f64, m12: f64, m22: f64) -> Sym2 {
        Sym2 { m11, m12, m22 }
    }

    pub const fn diag(a: f64, b: f64) -> Sym2 {
        Sym2::new(a, 0.0, b)
    }

    pub const fn scalar(a: f64) -> Sym2 {
        Sym2::new(a, 0.0, a)
    }

    pub const fn identity() -> Sym2 {
        Sym2::scalar(1.0)
    }

    pub const fn zero() -> Sym2 {
        Sym2::scalar(0.0)
    }

    /// Symmetric part of a general matrix.
    pub fn from_mat(m: &Mat2) -> Sym2 {
        Sym2::new(m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)])
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2::new(self.m11, self.m12, self.m12, self.m22)
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    pub fn det(&self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m12
    }

    pub fn norm(&self) -> f64 {
        (self.m11 * self.m11 + 2.0 * self.m12 * self.m12 + self.m22 * self.m22).sqrt()
    }

    pub fn add(&self, o: &Sym2) -> Sym2 {
        Sym2::new(self.m11 + o.m11, self.m12 + o.m12, self.m22 + o.m22)
    }

    pub fn sub(&self, o: &Sym2) -> Sym2 {
        Sym2::new(self.m11 - o.m11, self.m12 - o.m12, self.m22 - o.m22)
    }

    pub fn neg(&self) -> Sym2 {
        Sym2::new(-self.m11, -self.m12, -self.m22)
    }

    pub fn scale(&self, s: f64) -> Sym2 {
        Sym2::new(s * self.m11, s * self.m12, s * self.m22)
    }

    pub fn inverse(&self) -> Option<Sym2> {
        let det = self.det();
        let scale = self.norm() * self.norm();
        if det == 0.0 || !det.is_finite() || det.abs() <= 1e-300 * scale.max(1e-300) {
            return None;
        }
        Some(Sym2::new(self.m22 / det, -self.m12 / det, self.m11 / det))
    }

    /// `M · self · Mᵀ`.
    pub fn congruence(&self, m: &Mat2) -> Sym2 {
        Sym2::from_mat(&(m * self.to_mat() * m.transpose()))
    }

    /// Eigenvalues, descending. Exact for diagonal input.
    pub fn eigenvalues(&self) -> (f64, f64) {
        if self.m12 == 0.0 {
            return if self.m11 >= self.m22 {
                (self.m11, self.m22)
            } else {
                (self.m22, self.m11)
            };
        }
        let mean = 0.5 * (self.m11 + self.m22);
        let half = 0.5 * (self.m11 - self.m22);
        let rad = half.hypot(self.m12);
        let l1 = mean + rad;
        let l2 = mean - rad;
        // recover the small-magnitude root from the determinant
        if mean > 0.0 && l1 != 0.0 {
            (l1, self.det() / l1)
        } else if mean < 0.0 && l2 != 0.0 {
            (self.det() / l2, l2)
        } else {
            (l1, l2)
        }
    }

    /// True when both eigenvalues agree within the regularity tolerance.
    pub fn is_scalar(&self, rel: f64) -> bool {
        let (a, b) = self.eigenvalues();
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
    }

    pub fn is_diagonal(&self, rel: f64) -> bool {
        self.m12.abs() <= rel * self.m11.abs().max(self.m22.abs()).max(1.0)
    }

    pub fn approx_eq(&self, o: &Sym2, rel: f64) -> bool {
        self.sub(o).norm() <= rel * self.norm().max(o.norm()).max(1.0)
    }

    /// Positive-definiteness relative to the largest eigenvalue.
    pub fn is_pd_relative(&self, rel: f64) -> bool {
        let (l1, l2) = self.eigenvalues();
        l1 > 0.0 && l2 > rel * l1
    }
}

/// Symmetric positive-definite 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Sym2", into = "Sym2")]
pub struct PosDef2(Sym2);

impl TryFrom<Sym2> for PosDef2 {
    type Error = GeomError;
    fn try_from(s: Sym2) -> Result<PosDef2> {
        PosDef2::new(s)
    }
}

impl From<PosDef2> for Sym2 {
    fn from(p: PosDef2) -> Sym2 {
        p.0
    }
}

impl PosDef2 {
    /// Validates both eigenvalues exceed `τ_pd`.
    pub fn new(s: Sym2) -> Result<PosDef2> {
        let (_, l2) = s.eigenvalues();
        if l2 > tol().pd && s.trace() > 0.0 && s.det() > 0.0 {
            Ok(PosDef2(s))
        } else {
            Err(GeomError::NotPositiveDefinite(l2))
        }
    }

    /// Positive definiteness judged relative to the largest eigenvalue, for
    /// quantities whose natural scale is far from one.
    pub fn new_relative(s: Sym2) -> Result<PosDef2> {
        let (l1, l2) = s.eigenvalues();
        if l1 > 0.0 && l2 > tol().pd * l1 && s.det() > 0.0 {
            Ok(PosDef2(s))
        } else {
            Err(GeomError::NotPositiveDefinite(l2))
        }
    }

    pub(crate) fn new_unchecked(s: Sym2) -> PosDef2 {
        PosDef2(s)
    }

    pub fn identity() -> PosDef2 {
        PosDef2(Sym2::identity())
    }

    pub fn inner(&self) -> &Sym2 {
        &self.0
    }

    pub fn to_mat(&self) -> Mat2 {
        self.0.to_mat()
    }

    pub fn inverse(&self) -> PosDef2 {
        let d = self.0.det();
        PosDef2(Sym2::new(self.0.m22 / d, -self.0.m12 / d, self.0.m11 / d))
    }

    /// `Q Qᵀ`-style power through the spectral decomposition.
    pub fn powf(&self, p: f64) -> PosDef2 {
        let s = &self.0;
        if s.m12 == 0.0 {
            return PosDef2(Sym2::diag(s.m11.powf(p), s.m22.powf(p)));
        }
        let (l1, l2) = s.eigenvalues();
        if (l1 - l2).abs() <= 4.0 * f64::EPSILON * l1 {
            return PosDef2(Sym2::scalar((0.5 * (l1 + l2)).powf(p)));
        }
        let (a, b) = (l1.powf(p), l2.powf(p));
        // spectral projector formula: f(S) = a P1 + b P2, P1 = (S - l2)/(l1 - l2)
        let p1 = s.sub(&Sym2::scalar(l2)).scale(1.0 / (l1 - l2));
        let p2 = Sym2::identity().sub(&p1);
        PosDef2(p1.scale(a).add(&p2.scale(b)))
    }

    pub fn sqrt(&self) -> PosDef2 {
        sqrt_pd(self)
    }

    pub fn log_eigenvalues(&self) -> (f64, f64) {
        let (a, b) = self.0.eigenvalues();
        (a.ln(), b.ln())
    }
}

/// Principal square root of a positive-definite matrix (closed form:
/// `√M = (M + √det·I) / √(tr M + 2√det)`).
pub fn sqrt_pd(m: &PosDef2) -> PosDef2 {
    let s = &m.0;
    if s.m12 == 0.0 {
        return PosDef2(Sym2::diag(s.m11.sqrt(), s.m22.sqrt()));
    }
    let (l1, l2) = s.eigenvalues();
    let sd = (l1 * l2).sqrt();
    let t = (l1.sqrt() + l2.sqrt()).powi(2);
    let k = 1.0 / t.sqrt();
    PosDef2(Sym2::new((s.m11 + sd) * k, s.m12 * k, (s.m22 + sd) * k))
}

/// Geometric mean `P # Q = P^{1/2} (P^{-1/2} Q P^{-1/2})^{1/2} P^{1/2}`, the unique
/// positive-definite solution `Y` of `Y P⁻¹ Y = Q`.
pub fn geometric_mean(p: &PosDef2, q: &PosDef2) -> PosDef2 {
    let ph = sqrt_pd(p).to_mat();
    let phi = p.powf(-0.5).to_mat();
    let inner = PosDef2::new_unchecked(Sym2::from_mat(&(phi * q.to_mat() * phi)));
    let mid = sqrt_pd(&inner).to_mat();
    PosDef2::new_unchecked(Sym2::from_mat(&(ph * mid * ph)))
}

/// Projective rotation `S ∈ PSO(2)`, `theta ∈ [0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation2 {
    pub theta: f64,
}

impl Rotation2 {
    pub fn new(theta: f64) -> Rotation2 {
        let mut t = theta.rem_euclid(PI);
        if PI - t < 1e-15 {
            t = 0.0;
        }
        Rotation2 { theta: t }
    }

    pub fn identity() -> Rotation2 {
        Rotation2 { theta: 0.0 }
    }

    pub fn matrix(&self) -> Mat2 {
        rot(self.theta)
    }

    pub fn compose(&self, o: &Rotation2) -> Rotation2 {
        Rotation2::new(self.theta + o.theta)
    }

    pub fn inverse(&self) -> Rotation2 {
        Rotation2::new(-self.theta)
    }

    /// Angle of a (projective) special-orthogonal matrix.
    pub fn from_matrix(m: &Mat2) -> Rotation2 {
        Rotation2::new(m[(1, 0)].atan2(m[(0, 0)]))
    }
}

/// Spectral decomposition `S m Sᵀ = diag(λ₁, λ₂)`, `λ₁ > λ₂`, with `S ∈ PSO(2)`
/// and its flipped companion `Q = r·S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eig2 {
    pub lambda1: f64,
    pub lambda2: f64,
    pub s: Rotation2,
    pub q: Mat2,
}

/// Closed-form (half-angle) eigen-decomposition of a symmetric 2×2 matrix.
pub fn eig_sym2(m: &Sym2) -> Result<Eig2> {
    let (l1, l2) = m.eigenvalues();
    if (l1 - l2).abs() <= tol().reg * l1.abs().max(l2.abs()).max(1.0) {
        return Err(GeomError::DegenerateSpectrum(l1, l2));
    }
    let s = principal_rotation(m);
    Ok(Eig2 {
        lambda1: l1,
        lambda2: l2,
        s,
        q: flip() * s.matrix(),
    })
}

/// Half-angle rotation `S` with `S m Sᵀ` diagonal descending; no gap check, so
/// callers that classify degeneracy themselves can still read an angle.
pub fn principal_rotation(m: &Sym2) -> Rotation2 {
    let theta = if m.m12 == 0.0 {
        if m.m11 >= m.m22 {
            0.0
        } else {
            FRAC_PI_2
        }
    } else {
        // eigenvector of λ₁ is (cos φ, sin φ); it is the first row (cos θ, -sin θ) of S
        -0.5 * (2.0 * m.m12).atan2(m.m11 - m.m22)
    };
    Rotation2::new(theta)
}

/// `α ↦ S(α/2)`.
pub fn rotation_of_angle_class(alpha: f64) -> Rotation2 {
    Rotation2::new(0.5 * alpha)
}

/// Inverse of [`rotation_of_angle_class`]; `reflected_branch` selects the
/// representative `2π − α` of the class.
pub fn angle_class_of(s: &Rotation2, reflected_branch: bool) -> f64 {
    let a = (2.0 * s.theta).rem_euclid(2.0 * PI);
    if reflected_branch {
        (2.0 * PI - a).rem_euclid(2.0 * PI)
    } else {
        a
    }
}

/// Real eigenvalues of a general 2×2 matrix, descending; `None` if complex
/// beyond rounding.
pub fn eig_general2(m: &Mat2) -> Option<(f64, f64)> {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let half = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let disc = half * half + m[(0, 1)] * m[(1, 0)];
    let scale = (0.5 * tr).powi(2).max(det.abs()).max(f64::MIN_POSITIVE);
    if disc < -1e-10 * scale {
        return None;
    }
    let rad = disc.max(0.0).sqrt();
    let mean = 0.5 * tr;
    let big = if mean >= 0.0 { mean + rad } else { mean - rad };
    let small = if big != 0.0 { det / big } else { mean - rad };
    Some(if big >= small { (big, small) } else { (small, big) })
}

/// Point of the closed Weyl chamber (log-scale lengths).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylVector {
    pub x1: f64,
    pub x2: f64,
}

impl WeylVector {
    pub const fn new(x1: f64, x2: f64) -> WeylVector {
        WeylVector { x1, x2 }
    }

    /// Orders the two components descending.
    pub fn sorted(a: f64, b: f64) -> WeylVector {
        if a >= b {
            WeylVector::new(a, b)
        } else {
            WeylVector::new(b, a)
        }
    }

    pub const fn diagonal(t: f64) -> WeylVector {
        WeylVector::new(t, t)
    }

    /// `x₁ − x₂ > τ_reg` and `x₂ > τ_reg`.
    pub fn is_regular(&self) -> bool {
        self.x1 - self.x2 > tol().reg && self.x2 > tol().reg
    }

    /// Membership of the diagonal stratum 𝔡: `|x₁ − x₂| < τ_reg · max(1, |x₁|)`.
    pub fn in_diagonal(&self) -> bool {
        (self.x1 - self.x2).abs() < tol().reg * self.x1.abs().max(1.0)
    }

    /// Hyperbolic length `h = x₁ − x₂`.
    pub fn h(&self) -> f64 {
        self.x1 - self.x2
    }

    pub fn dist(&self, o: &WeylVector) -> f64 {
        (self.x1 - o.x1).hypot(self.x2 - o.x2)
    }
}
