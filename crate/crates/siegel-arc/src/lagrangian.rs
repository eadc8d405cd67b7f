//! Lagrangian subspaces of `(R^4, ω)`, symplectic and antisymplectic maps acting
//! on them and on Siegel points, transversality, cross-ratios and maximality.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GeomError, Result};
use crate::symmat::{flip, principal_rotation, Mat2, Mat4, Mat42, PosDef2, Sym2, WeylVector};
use crate::tol::tol;

type CMat2 = Matrix2<Complex64>;

/// Conditioning bound under which a 2×2 block counts as invertible.
const COND_MAX: f64 = 1e12;

/// The standard symplectic form `J = [[0, I], [-I, 0]]`.
pub fn j_matrix() -> Mat4 {
    let mut j = Mat4::zeros();
    j[(0, 2)] = 1.0;
    j[(1, 3)] = 1.0;
    j[(2, 0)] = -1.0;
    j[(3, 1)] = -1.0;
    j
}

fn top(b: &Mat42) -> Mat2 {
    b.fixed_view::<2, 2>(0, 0).into_owned()
}

fn bottom(b: &Mat42) -> Mat2 {
    b.fixed_view::<2, 2>(2, 0).into_owned()
}

fn stack(t: &Mat2, b: &Mat2) -> Mat42 {
    let mut m = Mat42::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(t);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(b);
    m
}

fn cond2(m: &Mat2) -> f64 {
    let a = m.transpose() * m;
    let (l1, l2) = Sym2::from_mat(&a).eigenvalues();
    if l2 <= 0.0 || !l2.is_finite() {
        f64::INFINITY
    } else {
        (l1 / l2).sqrt()
    }
}

/// Modified Gram–Schmidt with positive diagonal; deterministic and equivariant
/// under right multiplication by scalars.
pub(crate) fn gram_schmidt(b: &Mat42) -> Mat42 {
    let mut q = *b;
    let n0 = q.column(0).norm();
    let c0 = q.column(0) / n0;
    q.set_column(0, &c0);
    let proj = q.column(1).dot(&c0);
    let c1 = q.column(1) - c0 * proj;
    let n1 = c1.norm();
    q.set_column(1, &(c1 / n1));
    q
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Form {
    Chart,
    CoChart,
    General,
}

/// A point of the Lagrangian Grassmannian `ℒ(R^4)`, stored as a canonical 4×2
/// basis: `[X; I]` when transverse to `l_∞`, else `[I; W]`, else orthonormal.
#[derive(Debug, Clone, Copy)]
pub struct Lagrangian {
    basis: Mat42,
    form: Form,
}

impl PartialEq for Lagrangian {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, 1e-9)
    }
}

impl Lagrangian {
    /// `[X; I]`.
    pub fn from_chart(x: &Sym2) -> Lagrangian {
        Lagrangian {
            basis: stack(&x.to_mat(), &Mat2::identity()),
            form: Form::Chart,
        }
    }

    /// `l_∞ = ⟨e₁, e₂⟩`.
    pub fn infinity() -> Lagrangian {
        Lagrangian {
            basis: stack(&Mat2::identity(), &Mat2::zeros()),
            form: Form::CoChart,
        }
    }

    /// `0 = ⟨e₃, e₄⟩`.
    pub fn zero() -> Lagrangian {
        Lagrangian::from_chart(&Sym2::zero())
    }

    /// Validates rank and isotropy, then canonicalizes.
    pub fn from_basis(b: Mat42) -> Result<Lagrangian> {
        if b.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidLagrangian("non-finite entry".into()));
        }
        let s = b.svd(false, false).singular_values;
        if s[1] <= 1e-12 * s[0] {
            return Err(GeomError::InvalidLagrangian("rank deficient".into()));
        }
        let q = gram_schmidt(&b);
        let iso = (q.transpose() * j_matrix() * q)[(0, 1)].abs();
        if iso > 1e-10 {
            return Err(GeomError::InvalidLagrangian(format!("not isotropic ({iso:e})")));
        }
        Ok(Lagrangian::canonical(&b))
    }

    /// Canonicalizes a basis already known to span a Lagrangian.
    pub(crate) fn canonical(b: &Mat42) -> Lagrangian {
        let (t, m) = (top(b), bottom(b));
        if cond2(&m) < COND_MAX {
            if let Some(mi) = m.try_inverse() {
                let x = Sym2::from_mat(&(t * mi));
                return Lagrangian::from_chart(&x);
            }
        }
        if cond2(&t) < COND_MAX {
            if let Some(ti) = t.try_inverse() {
                let w = Sym2::from_mat(&(m * ti));
                return Lagrangian {
                    basis: stack(&Mat2::identity(), &w.to_mat()),
                    form: Form::CoChart,
                };
            }
        }
        Lagrangian {
            basis: gram_schmidt(b),
            form: Form::General,
        }
    }

    pub fn basis(&self) -> &Mat42 {
        &self.basis
    }

    pub fn orthonormal(&self) -> Mat42 {
        gram_schmidt(&self.basis)
    }

    /// Chart value `X` with `self = span[X; I]`, when transverse to `l_∞`.
    pub fn chart(&self) -> Option<Sym2> {
        match self.form {
            Form::Chart => Some(Sym2::from_mat(&top(&self.basis))),
            _ => {
                let (t, m) = (top(&self.basis), bottom(&self.basis));
                if cond2(&m) < COND_MAX {
                    m.try_inverse().map(|mi| Sym2::from_mat(&(t * mi)))
                } else {
                    None
                }
            }
        }
    }

    pub fn chart_point(&self) -> ChartPoint {
        match self.chart() {
            Some(v) => ChartPoint {
                value: v,
                at_infinity: false,
            },
            None => ChartPoint {
                value: Sym2::zero(),
                at_infinity: true,
            },
        }
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> Mat4 {
        let q = self.orthonormal();
        q * q.transpose()
    }

    pub fn approx_eq(&self, o: &Lagrangian, tol: f64) -> bool {
        self.distance(o) <= tol
    }

    /// Frobenius distance between the orthogonal projectors.
    pub fn distance(&self, o: &Lagrangian) -> f64 {
        (self.projector() - o.projector()).norm()
    }

    pub fn is_infinity(&self) -> bool {
        self.approx_eq(&Lagrangian::infinity(), 1e-12)
    }

    /// Canonical ordering key (lexicographic on the canonical basis entries).
    pub fn sort_key(&self) -> [f64; 8] {
        let mut k = [0.0; 8];
        for (i, v) in self.basis.iter().enumerate() {
            k[i] = *v;
        }
        k
    }
}

impl Serialize for Lagrangian {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<[f64; 2]> = (0..4)
            .map(|i| [self.basis[(i, 0)], self.basis[(i, 1)]])
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lagrangian {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <Vec<[f64; 2]>>::deserialize(d)?;
        if rows.len() != 4 {
            return Err(serde::de::Error::custom("Lagrangian basis must have 4 rows"));
        }
        let mut b = Mat42::zeros();
        for (i, r) in rows.iter().enumerate() {
            b[(i, 0)] = r[0];
            b[(i, 1)] = r[1];
        }
        Lagrangian::from_basis(b).map_err(serde::de::Error::custom)
    }
}

/// Affine-chart view of a Lagrangian: either a symmetric matrix or "at infinity"
/// (not transverse to `l_∞`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub value: Sym2,
    #[serde(rename = "atInfinity")]
    pub at_infinity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpKind {
    Symplectic,
    Antisymplectic,
}

impl SpKind {
    fn sign(self) -> f64 {
        match self {
            SpKind::Symplectic => 1.0,
            SpKind::Antisymplectic => -1.0,
        }
    }

    fn compose(self, o: SpKind) -> SpKind {
        if self == o {
            SpKind::Symplectic
        } else {
            SpKind::Antisymplectic
        }
    }
}

/// Projective (anti)symplectic map: `mᵀJm = ±J`, `m ~ -m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpMap {
    pub m: Mat4,
    pub kind: SpKind,
}

/// Relative residual `‖mᵀJm ∓ J‖ / ‖m‖²`.
pub fn symplectic_residual(m: &Mat4, kind: SpKind) -> f64 {
    let j = j_matrix();
    let r = m.transpose() * j * m - j * kind.sign();
    let n = m.norm();
    r.norm() / (n * n / 2.0).max(1.0)
}

impl SpMap {
    /// Classifies `m` as symplectic or antisymplectic (relative residual < 1e-10).
    pub fn new(m: Mat4) -> Result<SpMap> {
        let rs = symplectic_residual(&m, SpKind::Symplectic);
        let ra = symplectic_residual(&m, SpKind::Antisymplectic);
        let (kind, r) = if rs <= ra {
            (SpKind::Symplectic, rs)
        } else {
            (SpKind::Antisymplectic, ra)
        };
        if r < 1e-10 {
            Ok(SpMap { m, kind })
        } else {
            Err(GeomError::NotSymplectic(r))
        }
    }

    pub(crate) fn from_parts(m: Mat4, kind: SpKind) -> SpMap {
        SpMap { m, kind }
    }

    pub fn identity() -> SpMap {
        SpMap::from_parts(Mat4::identity(), SpKind::Symplectic)
    }

    pub fn j() -> SpMap {
        SpMap::from_parts(j_matrix(), SpKind::Symplectic)
    }

    /// `[[A, 0], [0, A⁻ᵀ]]`.
    pub fn block_diag(a: &Mat2) -> Result<SpMap> {
        let ai = a.try_inverse().ok_or(GeomError::ChartSingularity)?;
        Ok(SpMap::from_parts(blocks(a, &Mat2::zeros(), &Mat2::zeros(), &ai.transpose()), SpKind::Symplectic))
    }

    /// `[[I, B], [0, I]]` (translation by a symmetric `B`).
    pub fn translation(b: &Sym2) -> SpMap {
        SpMap::from_parts(
            blocks(&Mat2::identity(), &b.to_mat(), &Mat2::zeros(), &Mat2::identity()),
            SpKind::Symplectic,
        )
    }

    /// `diag(T, T)` for orthogonal `T`.
    pub fn orthogonal(t: &Mat2) -> SpMap {
        SpMap::from_parts(blocks(t, &Mat2::zeros(), &Mat2::zeros(), t), SpKind::Symplectic)
    }

    pub fn kind(&self) -> SpKind {
        self.kind
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn residual(&self) -> f64 {
        symplectic_residual(&self.m, self.kind)
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &SpMap) -> SpMap {
        SpMap::from_parts(self.m * o.m, self.kind.compose(o.kind))
    }

    /// Exact inverse from the (anti)symplectic identity.
    pub fn inverse(&self) -> SpMap {
        let j = j_matrix();
        let inv = -(j * self.m.transpose() * j) * self.kind.sign();
        SpMap::from_parts(inv, self.kind)
    }

    /// `self ∘ o ∘ self⁻¹`.
    pub fn conjugate(&self, o: &SpMap) -> SpMap {
        self.compose(o).compose(&self.inverse())
    }

    pub fn approx_eq_projective(&self, o: &SpMap, rel: f64) -> bool {
        projective_distance(&self.m, &o.m) <= rel
    }

    pub fn act_lagrangian(&self, l: &Lagrangian) -> Lagrangian {
        Lagrangian::canonical(&(self.m * l.basis()))
    }

    /// Fractional linear action `(AZ+B)(CZ+D)⁻¹`; antisymplectic images are folded
    /// back to the upper half space by complex conjugation.
    pub fn act_siegel(&self, z: &SiegelPoint) -> Result<SiegelPoint> {
        let (a, b, c, d) = split_blocks(&self.m);
        let zc = z.to_complex();
        let cm = |m: &Mat2| m.map(|v| Complex64::new(v, 0.0));
        let num = cm(&a) * zc + cm(&b);
        let den = cm(&c) * zc + cm(&d);
        let det = den[(0, 0)] * den[(1, 1)] - den[(0, 1)] * den[(1, 0)];
        let scale = den.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        if det.norm() <= 1e-14 * scale * scale {
            return Err(GeomError::ChartSingularity);
        }
        let w = num * den.try_inverse().ok_or(GeomError::ChartSingularity)?;
        let x = Sym2::from_mat(&w.map(|v| v.re));
        let mut y = Sym2::from_mat(&w.map(|v| v.im));
        if self.kind == SpKind::Antisymplectic {
            y = y.neg();
        }
        let y = PosDef2::new_relative(y)?;
        Ok(SiegelPoint { x, y })
    }
}

/// `min(‖a − b‖, ‖a + b‖) / max(‖a‖, ‖b‖)`.
pub fn projective_distance(a: &Mat4, b: &Mat4) -> f64 {
    let d = (a - b).norm().min((a + b).norm());
    d / a.norm().max(b.norm()).max(1e-300)
}

pub(crate) fn blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

pub(crate) fn split_blocks(m: &Mat4) -> (Mat2, Mat2, Mat2, Mat2) {
    (
        m.fixed_view::<2, 2>(0, 0).into_owned(),
        m.fixed_view::<2, 2>(0, 2).into_owned(),
        m.fixed_view::<2, 2>(2, 0).into_owned(),
        m.fixed_view::<2, 2>(2, 2).into_owned(),
    )
}

#[derive(Serialize, Deserialize)]
struct SpMapDoc {
    matrix: [[f64; 4]; 4],
    kind: SpKind,
}

pub(crate) fn mat4_rows(m: &Mat4) -> [[f64; 4]; 4] {
    let mut r = [[0.0; 4]; 4];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    r
}

pub(crate) fn mat4_from_rows(r: &[[f64; 4]; 4]) -> Mat4 {
    Mat4::from_fn(|i, j| r[i][j])
}

impl Serialize for SpMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpMapDoc {
            matrix: mat4_rows(&self.m),
            kind: self.kind,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SpMapDoc::deserialize(d)?;
        let m = mat4_from_rows(&doc.matrix);
        let r = symplectic_residual(&m, doc.kind);
        if r > 1e-8 {
            return Err(serde::de::Error::custom(format!(
                "matrix is not {:?} (residual {r:e})",
                doc.kind
            )));
        }
        Ok(SpMap::from_parts(m, doc.kind))
    }
}

/// Point `X + iY` of the Siegel upper half space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiegelPoint {
    #[serde(rename = "X")]
    pub x: Sym2,
    #[serde(rename = "Y")]
    pub y: PosDef2,
}

impl SiegelPoint {
    pub fn new(x: Sym2, y: PosDef2) -> SiegelPoint {
        SiegelPoint { x, y }
    }

    /// `iY`, a point of the standard tube.
    pub fn i_times(y: PosDef2) -> SiegelPoint {
        SiegelPoint { x: Sym2::zero(), y }
    }

    pub fn to_complex(&self) -> CMat2 {
        let x = self.x.to_mat();
        let y = self.y.to_mat();
        CMat2::from_fn(|i, j| Complex64::new(x[(i, j)], y[(i, j)]))
    }

    pub fn is_on_standard_tube(&self, rel: f64) -> bool {
        self.x.norm() <= rel * self.y.inner().norm()
    }

    pub fn approx_eq(&self, o: &SiegelPoint, rel: f64) -> bool {
        let d = (self.to_complex() - o.to_complex()).norm();
        d <= rel * self.to_complex().norm().max(o.to_complex().norm()).max(1.0)
    }
}

/// Smallest sine of the principal angles between `l₁` and `l₂`: the least
/// singular value of `Q₁ᵀ J Q₂` for orthonormal bases (`J l` is the orthogonal
/// complement of a Lagrangian `l`).  Scale-free per direction, so pairs whose
/// charts have widely spread eigenvalues are not penalized twice.
pub fn transversality(l1: &Lagrangian, l2: &Lagrangian) -> f64 {
    let (q1, q2) = (l1.orthonormal(), l2.orthonormal());
    let m: Mat2 = q1.transpose() * j_matrix() * q2;
    m.singular_values().min()
}

/// Relative transversality test: every principal sine exceeds the tolerance.
pub fn transverse(l1: &Lagrangian, l2: &Lagrangian) -> bool {
    transversality(l1, l2) > tol().transverse
}

fn concat(a: &Mat42, b: &Mat42) -> Mat4 {
    let mut m = Mat4::zeros();
    m.fixed_view_mut::<4, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<4, 2>(0, 2).copy_from(b);
    m
}

/// Cross-ratio `R(l₁,l₂,l₃,l₄)`: chart formula
/// `(X₁−X₂)⁻¹(X₄−X₂)(X₄−X₃)⁻¹(X₁−X₃)` when all four are finite, otherwise the
/// composition of the projections `p^{∥l₂}_{l₁} ∘ p^{∥l₃}_{l₄}` restricted to `l₁`.
pub fn cross_ratio(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian, l4: &Lagrangian) -> Result<Mat2> {
    if !transverse(l1, l2) || !transverse(l3, l4) {
        return Err(GeomError::NotTransverse);
    }
    if let (Some(x1), Some(x2), Some(x3), Some(x4)) = (l1.chart(), l2.chart(), l3.chart(), l4.chart()) {
        let a = x1.sub(&x2).to_mat().try_inverse();
        let b = x4.sub(&x3).to_mat().try_inverse();
        if let (Some(a), Some(b)) = (a, b) {
            return Ok(a * x4.sub(&x2).to_mat() * b * x1.sub(&x3).to_mat());
        }
    }
    cross_ratio_projections(l1, l2, l3, l4)
}

/// Basis-form cross-ratio (the projection-composition definition), expressed in
/// the stored basis of `l₁`.
pub fn cross_ratio_projections(l1: &Lagrangian, l2: &Lagrangian, l3: &Lagrangian, l4: &Lagrangian) -> Result<Mat2> {
    let (b1, b2, b3, b4) = (l1.basis(), l2.basis(), l3.basis(), l4.basis());
    let m12 = concat(b1, b2).try_inverse().ok_or(GeomError::NotTransverse)?;
    let m43 = concat(b4, b3).try_inverse().ok_or(GeomError::NotTransverse)?;
    let p1 = m12.fixed_view::<2, 4>(0, 0).into_owned();
    let p4 = m43.fixed_view::<2, 4>(0, 0).into_owned();
    Ok(p1 * b4 * p4 * b1)
}

/// Symplectic map sending `(p, q)` to `(0, l_∞)`.
pub fn map_pair_to_standard(p: &Lagrangian, q: &Lagrangian) -> Result<SpMap> {
    if !transverse(p, q) {
        return Err(GeomError::NotTransverse);
    }
    let bp = p.orthonormal();
    let bq = q.orthonormal();
    let w = bp.transpose() * j_matrix() * bq;
    let wi = w.try_inverse().ok_or(GeomError::NotTransverse)?;
    let bq2 = -(bq * wi);
    let n = concat(&bq2, &bp);
    let j = j_matrix();
    Ok(SpMap::from_parts(-(j * n.transpose() * j), SpKind::Symplectic))
}

/// Result of [`map_quadruple_to_standard`].
#[derive(Debug, Clone, Copy)]
pub struct QuadStandardization {
    /// Sends the quadruple to `(0, Id, Λ, l_∞)`, non-flipped branch.
    pub map: SpMap,
    /// The companion differing by `diag(r, r)`.
    pub companion: SpMap,
    /// `Λ = diag(λ₁, λ₂)`, `λ₁ ≥ λ₂ > 1`.
    pub lambda: (f64, f64),
    /// `log Λ ∈ 𝔡` within tolerance (rotation left at the identity).
    pub scalar: bool,
}

/// Symplectic map sending a maximal quadruple to `(0, Id, Λ, l_∞)` with `Λ`
/// diagonal descending.
pub fn map_quadruple_to_standard(
    p1: &Lagrangian,
    p2: &Lagrangian,
    p3: &Lagrangian,
    p4: &Lagrangian,
) -> Result<QuadStandardization> {
    map_quadruple_to_standard_with(p1, p2, p3, p4, false)
}

/// As [`map_quadruple_to_standard`]; `force_scalar` skips the diagonalizing
/// rotation (used when the caller has already classified `Λ` as scalar).
pub fn map_quadruple_to_standard_with(
    p1: &Lagrangian,
    p2: &Lagrangian,
    p3: &Lagrangian,
    p4: &Lagrangian,
    force_scalar: bool,
) -> Result<QuadStandardization> {
    let g0 = map_pair_to_standard(p1, p4).map_err(|_| GeomError::NotMaximal)?;
    let x2 = g0.act_lagrangian(p2).chart().ok_or(GeomError::NotMaximal)?;
    let x2 = PosDef2::new_relative(x2).map_err(|_| GeomError::NotMaximal)?;
    let s = x2.sqrt();
    let g1 = SpMap::block_diag(&s.inverse().to_mat())?.compose(&g0);
    let y = g1.act_lagrangian(p3).chart().ok_or(GeomError::NotMaximal)?;
    if !y.sub(&Sym2::identity()).is_pd_relative(tol().pd) {
        return Err(GeomError::NotMaximal);
    }
    let (l1, l2) = y.eigenvalues();
    let scalar = force_scalar || WeylVector::new(l1.ln(), l2.ln()).in_diagonal();
    let rotation = if scalar {
        Mat2::identity()
    } else {
        principal_rotation(&y).matrix()
    };
    let lambda = (l1, l2);
    let map = SpMap::orthogonal(&rotation).compose(&g1);
    let companion = SpMap::orthogonal(&(flip() * rotation)).compose(&g1);
    Ok(QuadStandardization {
        map,
        companion,
        lambda,
        scalar,
    })
}

/// Relative positive-definiteness margin `λ_min/λ_max` of the chart of `b` after
/// sending `(a, c)` to `(0, l_∞)`; negative or `None` when not maximal.
pub fn triple_margin(a: &Lagrangian, b: &Lagrangian, c: &Lagrangian) -> Result<Option<f64>> {
    let g = map_pair_to_standard(a, c)?;
    let Some(x) = g.act_lagrangian(b).chart() else {
        return Ok(None);
    };
    let (l1, l2) = x.eigenvalues();
    if l1 <= 0.0 {
        return Ok(Some(-1.0));
    }
    Ok(Some(l2 / l1))
}

/// `(a, b, c)` maximal: after `(a, c) ↦ (0, l_∞)` the chart of `b` is positive definite.
pub fn is_maximal_triple(a: &Lagrangian, b: &Lagrangian, c: &Lagrangian) -> Result<bool> {
    Ok(matches!(triple_margin(a, b, c)?, Some(m) if m > tol().pd))
}

/// Every ordered triple `i < j < k` is maximal.
pub fn is_maximal_tuple(ls: &[Lagrangian]) -> Result<bool> {
    Ok(first_non_maximal_triple(ls)?.is_none())
}

/// First offending triple of indices, if any.
pub fn first_non_maximal_triple(ls: &[Lagrangian]) -> Result<Option<(usize, usize, usize)>> {
    if ls.len() < 3 {
        return Err(GeomError::InvalidInput("tuple length must be at least 3".into()));
    }
    let n = ls.len();
    for i in 0..n {
        for k in (i + 2)..n {
            if !transverse(&ls[i], &ls[k]) {
                return Ok(Some((i, i + 1, k)));
            }
            let g = map_pair_to_standard(&ls[i], &ls[k])?;
            for (j, l) in ls.iter().enumerate().take(k).skip(i + 1) {
                let ok = match g.act_lagrangian(l).chart() {
                    Some(x) => x.is_pd_relative(tol().pd),
                    None => false,
                };
                if !ok {
                    return Ok(Some((i, j, k)));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: f64, b: f64, c: f64) -> Lagrangian {
        Lagrangian::from_chart(&Sym2::new(a, b, c))
    }

    #[test]
    fn transversality_examples() {
        let zero = Lagrangian::zero();
        assert!(transverse(&zero, &Lagrangian::infinity()));
        assert!(!transverse(&zero, &zero));
        // det[[X1, X2], [I, I]] = det(X1 - X2)
        assert!(transverse(&ch(1.0, 0.0, 1.0), &ch(2.0, 0.0, 3.0)));
        assert!(!transverse(&ch(1.0, 0.0, 1.0), &ch(1.0, 0.0, 2.0)));
    }

    #[test]
    fn j_fixes_i() {
        let z = SiegelPoint::i_times(PosDef2::identity());
        let w = SpMap::j().act_siegel(&z).unwrap();
        assert!(w.approx_eq(&z, 1e-15));
    }

    #[test]
    fn block_diag_acts_by_congruence() {
        let a = Mat2::new(2.0, 0.0, 0.0, 1.0);
        let g = SpMap::block_diag(&a).unwrap();
        let x = Sym2::new(1.0, 0.5, 3.0);
        let img = g.act_lagrangian(&Lagrangian::from_chart(&x)).chart().unwrap();
        assert!(img.approx_eq(&x.congruence(&a), 1e-15));
    }

    #[test]
    fn standard_reflection_folds() {
        let rst = SpMap::new(blocks(&-Mat2::identity(), &Mat2::zeros(), &Mat2::zeros(), &Mat2::identity())).unwrap();
        assert_eq!(rst.kind, SpKind::Antisymplectic);
        let y = PosDef2::new(Sym2::new(2.0, 0.3, 1.0)).unwrap();
        let w = rst.act_siegel(&SiegelPoint::i_times(y)).unwrap();
        assert!(w.approx_eq(&SiegelPoint::i_times(y), 1e-15));
    }

    #[test]
    fn cross_ratio_at_infinity() {
        let z = Lagrangian::from_chart(&Sym2::identity());
        let x = Lagrangian::from_chart(&Sym2::diag(2.0, 3.0));
        let r = cross_ratio(&Lagrangian::zero(), &z, &x, &Lagrangian::infinity()).unwrap();
        assert!((r - Mat2::new(2.0, 0.0, 0.0, 3.0)).norm() < 1e-14);
        let r = cross_ratio(&Lagrangian::zero(), &z, &z, &Lagrangian::infinity()).unwrap();
        assert!((r - Mat2::identity()).norm() < 1e-14);
    }

    #[test]
    fn cross_ratio_rejects_non_transverse() {
        let z = Lagrangian::zero();
        assert_eq!(
            cross_ratio(&z, &z, &Lagrangian::infinity(), &ch(1.0, 0.0, 1.0)),
            Err(GeomError::NotTransverse)
        );
    }

    #[test]
    fn maximality_examples() {
        let inf = Lagrangian::infinity();
        let zero = Lagrangian::zero();
        let id = ch(1.0, 0.0, 1.0);
        assert!(is_maximal_triple(&inf, &zero, &id).unwrap());
        assert!(!is_maximal_triple(&inf, &id, &zero).unwrap());
        assert!(is_maximal_tuple(&[zero, id, ch(2.0, 0.0, 3.0), inf]).unwrap());
    }

    #[test]
    fn pair_map_of_standard_pair_is_identity() {
        let g = map_pair_to_standard(&Lagrangian::zero(), &Lagrangian::infinity()).unwrap();
        assert!((g.m - Mat4::identity()).norm() < 1e-15);
    }

    #[test]
    fn quadruple_standard_examples() {
        let zero = Lagrangian::zero();
        let inf = Lagrangian::infinity();
        let id = ch(1.0, 0.0, 1.0);
        let q = map_quadruple_to_standard(&zero, &id, &ch(3.0, 0.0, 2.0), &inf).unwrap();
        assert!((q.map.m - Mat4::identity()).norm() < 1e-14);
        assert_eq!(q.lambda, (3.0, 2.0));
        // ascending input is rotated by a quarter turn to make Λ descending
        let q = map_quadruple_to_standard(&zero, &id, &ch(2.0, 0.0, 3.0), &inf).unwrap();
        assert_eq!(q.lambda, (3.0, 2.0));
        let img = q.map.act_lagrangian(&ch(2.0, 0.0, 3.0)).chart().unwrap();
        assert!(img.approx_eq(&Sym2::diag(3.0, 2.0), 1e-14));
        // scalar Λ: identity, companion is the r-conjugation
        let q = map_quadruple_to_standard(&zero, &id, &ch(2.0, 0.0, 2.0), &inf).unwrap();
        assert!(q.scalar);
        assert!((q.map.m - Mat4::identity()).norm() < 1e-14);
        let rr = SpMap::orthogonal(&flip());
        assert!(q.companion.approx_eq_projective(&rr, 1e-14));
    }

    #[test]
    fn quadruple_non_maximal_rejected() {
        let zero = Lagrangian::zero();
        let inf = Lagrangian::infinity();
        let r = map_quadruple_to_standard(&zero, &ch(2.0, 0.0, 2.0), &ch(1.0, 0.0, 1.0), &inf);
        assert!(matches!(r, Err(GeomError::NotMaximal)));
    }

    #[test]
    fn from_basis_rejects_non_isotropic() {
        let mut b = Mat42::zeros();
        b[(0, 0)] = 1.0;
        b[(2, 1)] = 1.0;
        assert!(Lagrangian::from_basis(b).is_err());
    }
}
