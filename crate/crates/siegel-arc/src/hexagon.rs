//! Ordered right-angled hexagons: construction from six boundary Lagrangians,
//! arc coordinates in both directions for every genericity type, polygonal
//! chains, polydisk detection, stabilizers and the malefic map.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::lagrangian::{
    first_non_maximal_triple, is_maximal_tuple, map_pair_to_standard, map_quadruple_to_standard_with, Lagrangian,
    SpMap,
};
use crate::symmat::{flip, principal_rotation, quarter_turn, rot, Mat2, PosDef2, Sym2, WeylVector};
use crate::tube::{common_perpendicular_points, orthogonality_defect, split_rh, H2Point, RTube};

/// Angles within this distance of `0` or `π` are snapped onto them.
pub const ANGLE_EPS: f64 = 1e-9;

/// Positions `(i, j)` in the 12-tuple of the endpoints of tube `𝒴_{k+1}`.
pub const TUBE_ENDPOINTS: [(usize, usize); 6] = [(0, 3), (2, 5), (4, 7), (6, 9), (8, 11), (10, 1)];

/// 12-tuple positions of the three six-tuple shapes that determine a hexagon.
const USED_POSITIONS: [usize; 6] = [3, 5, 7, 8, 10, 0];
const P_POSITIONS: [usize; 6] = [0, 3, 4, 7, 8, 11];
const Q_POSITIONS: [usize; 6] = [2, 5, 6, 9, 10, 1];

/// Which six of the twelve boundary Lagrangians are supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SixTupleShape {
    /// `(P, A, B, C, D, Q)`: the two endpoints of `𝒴₁` and four interior points.
    Used,
    /// `(P₁, …, P₆)`: endpoints of the odd tubes.
    PTuple,
    /// `(Q₁, …, Q₆)`: endpoints of the even tubes.
    QTuple,
}

/// Genericity type: which of the quadruples `(P,A,B,Q)`, `(P,B,C,Q)`, `(P,C,D,Q)`
/// are non-generic, read off from `b`, `c`, `d` lying in the diagonal `𝔡`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenericityType {
    #[serde(rename = "GEN")]
    Gen,
    #[serde(rename = "T1_1")]
    T1_1,
    #[serde(rename = "T1_2")]
    T1_2,
    #[serde(rename = "T1_3")]
    T1_3,
    #[serde(rename = "T2_1")]
    T2_1,
    #[serde(rename = "T2_2")]
    T2_2,
    #[serde(rename = "T2_3")]
    T2_3,
    #[serde(rename = "T3")]
    T3,
}

impl GenericityType {
    pub const ALL: [GenericityType; 8] = [
        GenericityType::Gen,
        GenericityType::T1_1,
        GenericityType::T1_2,
        GenericityType::T1_3,
        GenericityType::T2_1,
        GenericityType::T2_2,
        GenericityType::T2_3,
        GenericityType::T3,
    ];

    /// From the diagonal flags of `(b, c, d)`.
    pub fn from_flags(b: bool, c: bool, d: bool) -> GenericityType {
        use GenericityType::*;
        match (b, c, d) {
            (false, false, false) => Gen,
            (true, false, false) => T1_1,
            (false, true, false) => T1_2,
            (false, false, true) => T1_3,
            (true, true, false) => T2_1,
            (true, false, true) => T2_2,
            (false, true, true) => T2_3,
            (true, true, true) => T3,
        }
    }

    /// Diagonal flags `(b, c, d)`.
    pub fn flags(self) -> (bool, bool, bool) {
        use GenericityType::*;
        match self {
            Gen => (false, false, false),
            T1_1 => (true, false, false),
            T1_2 => (false, true, false),
            T1_3 => (false, false, true),
            T2_1 => (true, true, false),
            T2_2 => (true, false, true),
            T2_3 => (false, true, true),
            T3 => (true, true, true),
        }
    }

    pub fn as_str(self) -> &'static str {
        use GenericityType::*;
        match self {
            Gen => "GEN",
            T1_1 => "T1_1",
            T1_2 => "T1_2",
            T1_3 => "T1_3",
            T2_1 => "T2_1",
            T2_2 => "T2_2",
            T2_3 => "T2_3",
            T3 => "T3",
        }
    }
}

fn wrap(a: f64) -> f64 {
    let a = a.rem_euclid(TAU);
    if !(ANGLE_EPS..=TAU - ANGLE_EPS).contains(&a) {
        0.0
    } else if (a - PI).abs() < ANGLE_EPS {
        PI
    } else {
        a
    }
}

/// Representative of `{a, 2π − a}` in `[0, π]`.
fn fold(a: f64) -> f64 {
    let a = wrap(a);
    if a > PI {
        wrap(TAU - a)
    } else {
        a
    }
}

/// Circular distance on `R/2πZ`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Arc coordinates `(b, c, d, [α₁, α₂])` in canonical form. Collapsed angles are
/// `None`; for type 1.2 the class `[α]` of `α₁ + α₂ − π` is stored as
/// `(α/2, α/2 + π)` with `α ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcCoordinatesDoc", into = "ArcCoordinatesDoc")]
pub struct ArcCoordinates {
    b: WeylVector,
    c: WeylVector,
    d: WeylVector,
    alpha1: Option<f64>,
    alpha2: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ArcCoordinatesDoc {
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
    alpha1: Option<f64>,
    alpha2: Option<f64>,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    kind: Option<GenericityType>,
}

impl TryFrom<ArcCoordinatesDoc> for ArcCoordinates {
    type Error = GeomError;
    fn try_from(d: ArcCoordinatesDoc) -> Result<ArcCoordinates> {
        let a = ArcCoordinates::new(
            WeylVector::new(d.b[0], d.b[1]),
            WeylVector::new(d.c[0], d.c[1]),
            WeylVector::new(d.d[0], d.d[1]),
            d.alpha1.unwrap_or(0.0),
            d.alpha2.unwrap_or(0.0),
        )?;
        match d.kind {
            Some(k) if k != a.genericity() => Err(GeomError::InvalidInput(format!(
                "declared type {} but lengths give {}",
                k.as_str(),
                a.genericity().as_str()
            ))),
            _ => Ok(a),
        }
    }
}

impl From<ArcCoordinates> for ArcCoordinatesDoc {
    fn from(a: ArcCoordinates) -> ArcCoordinatesDoc {
        ArcCoordinatesDoc {
            b: [a.b.x1, a.b.x2],
            c: [a.c.x1, a.c.x2],
            d: [a.d.x1, a.d.x2],
            alpha1: a.alpha1,
            alpha2: a.alpha2,
            kind: Some(a.genericity()),
        }
    }
}

fn check_length(name: &str, v: &WeylVector) -> Result<()> {
    if !(v.x1.is_finite() && v.x2.is_finite()) || v.x2 <= 0.0 || v.x1 < v.x2 {
        return Err(GeomError::InvalidInput(format!(
            "{name} must satisfy {name}1 >= {name}2 > 0, got ({}, {})",
            v.x1, v.x2
        )));
    }
    Ok(())
}

impl ArcCoordinates {
    /// Validates the lengths (closed chamber, strictly positive) and canonicalizes
    /// the angles for the genericity type the lengths determine.
    pub fn new(b: WeylVector, c: WeylVector, d: WeylVector, alpha1: f64, alpha2: f64) -> Result<ArcCoordinates> {
        check_length("b", &b)?;
        check_length("c", &c)?;
        check_length("d", &d)?;
        if !(alpha1.is_finite() && alpha2.is_finite()) {
            return Err(GeomError::InvalidInput("angles must be finite".into()));
        }
        let kind = GenericityType::from_flags(b.in_diagonal(), c.in_diagonal(), d.in_diagonal());
        let (alpha1, alpha2) = canonical_angles(kind, alpha1, alpha2);
        Ok(ArcCoordinates {
            b,
            c,
            d,
            alpha1,
            alpha2,
        })
    }

    pub fn b(&self) -> WeylVector {
        self.b
    }

    pub fn c(&self) -> WeylVector {
        self.c
    }

    pub fn d(&self) -> WeylVector {
        self.d
    }

    pub fn alpha1(&self) -> Option<f64> {
        self.alpha1
    }

    pub fn alpha2(&self) -> Option<f64> {
        self.alpha2
    }

    /// Angles fed to the construction (collapsed ones as `0`).
    pub fn construction_angles(&self) -> (f64, f64) {
        (self.alpha1.unwrap_or(0.0), self.alpha2.unwrap_or(0.0))
    }

    pub fn genericity(&self) -> GenericityType {
        GenericityType::from_flags(self.b.in_diagonal(), self.c.in_diagonal(), self.d.in_diagonal())
    }

    /// Angles shown on the polygonal chain: both for generic hexagons, the
    /// surviving one for types 1.1/1.3, the single class `α` for type 1.2.
    pub fn present_angles(&self) -> Vec<f64> {
        match self.genericity() {
            GenericityType::T1_2 => vec![wrap(self.alpha1.unwrap_or(0.0) * 2.0)],
            _ => self.alpha1.into_iter().chain(self.alpha2).collect(),
        }
    }

    /// Lengths within `tol` (absolute), angles within `tol` on the circle,
    /// collapse pattern identical.
    pub fn approx_eq(&self, o: &ArcCoordinates, tol: f64) -> bool {
        let lengths = [(self.b, o.b), (self.c, o.c), (self.d, o.d)]
            .iter()
            .all(|(x, y)| (x.x1 - y.x1).abs() <= tol && (x.x2 - y.x2).abs() <= tol);
        let ang = |x: Option<f64>, y: Option<f64>| match (x, y) {
            (None, None) => true,
            (Some(a), Some(b)) => angle_distance(a, b) <= tol,
            _ => false,
        };
        lengths && ang(self.alpha1, o.alpha1) && ang(self.alpha2, o.alpha2)
    }

    /// Largest componentwise discrepancy (lengths and angles), `∞` if the collapse
    /// patterns differ.
    pub fn max_difference(&self, o: &ArcCoordinates) -> f64 {
        let mut m: f64 = 0.0;
        for (x, y) in [(self.b, o.b), (self.c, o.c), (self.d, o.d)] {
            m = m.max((x.x1 - y.x1).abs()).max((x.x2 - y.x2).abs());
        }
        for (x, y) in [(self.alpha1, o.alpha1), (self.alpha2, o.alpha2)] {
            match (x, y) {
                (None, None) => {}
                (Some(a), Some(b)) => m = m.max(angle_distance(a, b)),
                _ => return f64::INFINITY,
            }
        }
        m
    }

    /// Coordinates after reversing the hexagon along the reflected side:
    /// `(d, c, b, α₂, α₁)`, canonicalized.
    pub fn reversed(&self) -> ArcCoordinates {
        let (a1, a2) = self.construction_angles();
        ArcCoordinates::new(self.d, self.c, self.b, a2, a1).expect("valid lengths stay valid")
    }
}

fn canonical_angles(kind: GenericityType, a1: f64, a2: f64) -> (Option<f64>, Option<f64>) {
    use GenericityType::*;
    let (a1, a2) = (wrap(a1), wrap(a2));
    match kind {
        Gen => {
            if a1 > PI {
                (Some(wrap(TAU - a1)), Some(wrap(TAU - a2)))
            } else if a1 == 0.0 || a1 == PI {
                (Some(a1), Some(fold(a2)))
            } else {
                (Some(a1), Some(a2))
            }
        }
        T1_1 => (None, Some(fold(a2))),
        T1_3 => (Some(fold(a1)), None),
        T1_2 => {
            let a = fold(a1 + a2 - PI);
            (Some(0.5 * a), Some(wrap(0.5 * a + PI)))
        }
        T2_1 | T2_2 | T2_3 | T3 => (None, None),
    }
}

/// The standard-form matrices `(A, C, D)` of the hexagon `(0, A, Id, C, D, l_∞)`
/// with the given lengths and raw angles:
/// `A = S₁ᵀ diag(e^{−b₂}, e^{−b₁}) S₁`, `C = diag(e^{c₁}, e^{c₂})`,
/// `D = M S₂ diag(e^{d₁}, e^{d₂}) S₂ᵀ Mᵀ` with `M = C^{1/2} N`, `Sᵢ = rot(αᵢ/2)`.
/// `c` is not required to be ordered (extended malefic domain).
pub fn standard_matrices(b: &WeylVector, c: &WeylVector, d: &WeylVector, alpha1: f64, alpha2: f64) -> (Sym2, Sym2, Sym2) {
    let s1 = rot(0.5 * alpha1);
    let a = Sym2::diag((-b.x2).exp(), (-b.x1).exp()).congruence(&s1.transpose());
    let cm = Sym2::diag(c.x1.exp(), c.x2.exp());
    let m = Mat2::new((0.5 * c.x1).exp(), 0.0, 0.0, (0.5 * c.x2).exp()) * quarter_turn();
    let s2 = rot(0.5 * alpha2);
    let dm = Sym2::diag(d.x1.exp(), d.x2.exp()).congruence(&(m * s2));
    (a, cm, dm)
}

fn lag(x: &Sym2) -> Lagrangian {
    Lagrangian::from_chart(x)
}

fn sym_product(x: &Sym2, y_inv: &Sym2, z: &Sym2) -> Sym2 {
    Sym2::from_mat(&(x.to_mat() * y_inv.to_mat() * z.to_mat()))
}

/// An ordered right-angled hexagon, stored as its maximal 12-tuple
/// `(P₁, Q₆, Q₁, P₂, P₃, Q₂, Q₃, P₄, P₅, Q₄, Q₅, P₆)`; tube `𝒴ₖ` has endpoints at
/// [`TUBE_ENDPOINTS`]`[k−1]` and `𝒴₁ = 𝒴_{P₁,P₂}` is the distinguished tube.
#[derive(Debug, Clone, Copy)]
pub struct OrderedHexagon {
    twelve: [Lagrangian; 12],
}

impl OrderedHexagon {
    /// Builds the hexagon determined by a maximal six-tuple of the given shape.
    pub fn from_six_tuple(six: &[Lagrangian; 6], shape: SixTupleShape) -> Result<OrderedHexagon> {
        if !is_maximal_tuple(six).map_err(|_| GeomError::NotMaximal)? {
            return Err(GeomError::NotMaximal);
        }
        match shape {
            SixTupleShape::Used => {
                let g = map_pair_to_standard(&six[0], &six[5]).map_err(|_| GeomError::NotMaximal)?;
                let mut charts = [Sym2::zero(); 4];
                for (k, l) in six[1..5].iter().enumerate() {
                    charts[k] = g.act_lagrangian(l).chart().ok_or(GeomError::NotMaximal)?;
                }
                let h = OrderedHexagon::from_standard_charts(&charts[0], &charts[1], &charts[2], &charts[3])?;
                Ok(h.act(&g.inverse()))
            }
            SixTupleShape::PTuple => {
                let mut t = [Lagrangian::zero(); 12];
                for (k, &i) in P_POSITIONS.iter().enumerate() {
                    t[i] = six[k];
                }
                let p = |k: usize| six[k - 1];
                let (q1, q2) = common_perpendicular_points(&p(2), &p(3), &p(4), &p(1))?;
                let (q3, q4) = common_perpendicular_points(&p(4), &p(5), &p(6), &p(3))?;
                let (q5, q6) = common_perpendicular_points(&p(6), &p(1), &p(2), &p(5))?;
                for (k, q) in [q1, q2, q3, q4, q5, q6].into_iter().enumerate() {
                    t[Q_POSITIONS[k]] = q;
                }
                OrderedHexagon::checked(t)
            }
            SixTupleShape::QTuple => {
                let mut t = [Lagrangian::zero(); 12];
                for (k, &i) in Q_POSITIONS.iter().enumerate() {
                    t[i] = six[k];
                }
                let q = |k: usize| six[k - 1];
                let (p1, p2) = common_perpendicular_points(&q(6), &q(1), &q(2), &q(5))?;
                let (p3, p4) = common_perpendicular_points(&q(2), &q(3), &q(4), &q(1))?;
                let (p5, p6) = common_perpendicular_points(&q(4), &q(5), &q(6), &q(3))?;
                for (k, p) in [p1, p2, p3, p4, p5, p6].into_iter().enumerate() {
                    t[P_POSITIONS[k]] = p;
                }
                OrderedHexagon::checked(t)
            }
        }
    }

    fn checked(t: [Lagrangian; 12]) -> Result<OrderedHexagon> {
        if first_non_maximal_triple(&t).map_err(|_| GeomError::NotMaximal)?.is_some() {
            return Err(GeomError::NotMaximal);
        }
        Ok(OrderedHexagon { twelve: t })
    }

    /// `(0, A, B, C, D, l_∞)` given by charts; the 12-tuple is
    /// `(∞, −D, −A, 0, AB⁻¹A, A, Z₁, B, C, Z₂, D, DC⁻¹D)` with `(Z₁, Z₂)` the
    /// common perpendicular of `𝒴_{AB⁻¹A,B}` and `𝒴_{C,DC⁻¹D}`.
    pub fn from_standard_charts(a: &Sym2, b: &Sym2, c: &Sym2, d: &Sym2) -> Result<OrderedHexagon> {
        let six = [Lagrangian::zero(), lag(a), lag(b), lag(c), lag(d), Lagrangian::infinity()];
        if !is_maximal_tuple(&six).map_err(|_| GeomError::NotMaximal)? {
            return Err(GeomError::NotMaximal);
        }
        let bi = b.inverse().ok_or(GeomError::NotMaximal)?;
        let ci = c.inverse().ok_or(GeomError::NotMaximal)?;
        let aba = sym_product(a, &bi, a);
        let dcd = sym_product(d, &ci, d);
        let (z1, z2) = common_perpendicular_points(&lag(b), &lag(c), &lag(&dcd), &lag(&aba))?;
        Ok(OrderedHexagon {
            twelve: [
                Lagrangian::infinity(),
                lag(&d.neg()),
                lag(&a.neg()),
                Lagrangian::zero(),
                lag(&aba),
                lag(a),
                z1,
                lag(b),
                lag(c),
                z2,
                lag(d),
                lag(&dcd),
            ],
        })
    }

    /// The standard-form hexagon `(0, A, Id, C, D, l_∞)` with the given coordinates.
    pub fn from_coords(p: &ArcCoordinates) -> OrderedHexagon {
        let (a1, a2) = p.construction_angles();
        let (a, c, d) = standard_matrices(&p.b, &p.c, &p.d, a1, a2);
        OrderedHexagon::from_standard_charts(&a, &Sym2::identity(), &c, &d)
            .expect("every point of the coordinate space gives a maximal six-tuple")
    }

    pub fn twelve(&self) -> &[Lagrangian; 12] {
        &self.twelve
    }

    fn pick(&self, pos: &[usize; 6]) -> [Lagrangian; 6] {
        pos.map(|i| self.twelve[i])
    }

    /// `(P, A, B, C, D, Q) = (P₂, Q₂, P₄, P₅, Q₅, P₁)`.
    pub fn six_tuple(&self) -> [Lagrangian; 6] {
        self.pick(&USED_POSITIONS)
    }

    pub fn six_tuple_of_shape(&self, shape: SixTupleShape) -> [Lagrangian; 6] {
        match shape {
            SixTupleShape::Used => self.pick(&USED_POSITIONS),
            SixTupleShape::PTuple => self.pick(&P_POSITIONS),
            SixTupleShape::QTuple => self.pick(&Q_POSITIONS),
        }
    }

    /// Tube `𝒴ₖ`, `k ∈ 1..=6`.
    pub fn tube(&self, k: usize) -> RTube {
        let (i, j) = TUBE_ENDPOINTS[k - 1];
        RTube::new(self.twelve[i], self.twelve[j]).expect("hexagon endpoints are transverse")
    }

    pub fn tubes(&self) -> [RTube; 6] {
        [1, 2, 3, 4, 5, 6].map(|k| self.tube(k))
    }

    pub fn act(&self, g: &SpMap) -> OrderedHexagon {
        OrderedHexagon {
            twelve: self.twelve.map(|l| g.act_lagrangian(&l)),
        }
    }

    /// All twelve Lagrangians agree within `tol` (projector distance).
    pub fn approx_eq(&self, o: &OrderedHexagon, tol: f64) -> bool {
        self.max_distance(o) <= tol
    }

    pub fn max_distance(&self, o: &OrderedHexagon) -> f64 {
        self.twelve
            .iter()
            .zip(o.twelve.iter())
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    /// Orthogonality defects `‖R − 2Id‖` of the six adjacent tube pairs.
    pub fn orthogonality_defects(&self) -> Result<[f64; 6]> {
        let t = self.tubes();
        let mut out = [0.0; 6];
        for k in 0..6 {
            out[k] = orthogonality_defect(&t[k], &t[(k + 1) % 6])?;
        }
        Ok(out)
    }

    pub fn is_maximal(&self) -> bool {
        matches!(first_non_maximal_triple(&self.twelve), Ok(None))
    }

    pub fn classify(&self) -> Result<GenericityType> {
        Ok(standard_frame(self)?.coords.genericity())
    }

    pub fn coords(&self) -> Result<ArcCoordinates> {
        Ok(standard_frame(self)?.coords)
    }
}

/// Canonical standard form of a hexagon: the symplectic map `map` sends it to
/// [`OrderedHexagon::from_coords`]`(coords)`, i.e. `(0, A, Id, C, D, l_∞)`.
#[derive(Debug, Clone, Copy)]
pub struct StandardFrame {
    pub map: SpMap,
    pub coords: ArcCoordinates,
    pub a: Sym2,
    pub c: Sym2,
    pub d: Sym2,
}

/// `(θ₁, θ₂)` of the diagonalizing rotations in a frame `(0, A, Id, Λ, D, ∞)`.
fn frame_angles(a: &Sym2, lambda: &Sym2, d: &Sym2) -> (f64, f64) {
    let li = PosDef2::new_unchecked(*lambda).powf(-0.5).to_mat();
    let n = quarter_turn();
    let inner = d.congruence(&(n.transpose() * li));
    let t1 = principal_rotation(a).theta;
    let t2 = -principal_rotation(&inner).theta;
    (t1, t2)
}

/// Sends `h` to its canonical standard form and reads off the arc coordinates.
pub fn standard_frame(h: &OrderedHexagon) -> Result<StandardFrame> {
    use GenericityType::*;
    let [p, a, b, c, d, q] = h.six_tuple();
    let qs = map_quadruple_to_standard_with(&p, &b, &c, &q, false)?;
    let g0 = qs.map;
    let chart = |g: &SpMap, l: &Lagrangian| g.act_lagrangian(l).chart().ok_or(GeomError::NotMaximal);
    let a0 = chart(&g0, &a)?;
    let d0 = chart(&g0, &d)?;
    let (l1, l2) = qs.lambda;
    let lambda = if qs.scalar {
        let m = (l1 * l2).sqrt();
        Sym2::scalar(m)
    } else {
        Sym2::diag(l1, l2)
    };
    let cw = if qs.scalar {
        WeylVector::diagonal(0.5 * (l1.ln() + l2.ln()))
    } else {
        WeylVector::new(l1.ln(), l2.ln())
    };
    let (e1, e2) = a0.eigenvalues();
    let bw = WeylVector::new(-e2.ln(), -e1.ln());
    let li = PosDef2::new_relative(lambda)?.powf(-0.5).to_mat();
    let n = quarter_turn();
    let (f1, f2) = d0.congruence(&(n.transpose() * li)).eigenvalues();
    let dw = WeylVector::new(f1.ln(), f2.ln());
    let kind = GenericityType::from_flags(bw.in_diagonal(), cw.in_diagonal(), dw.in_diagonal());

    let (t1, t2) = frame_angles(&a0, &lambda, &d0);
    let (a1, a2) = (wrap(2.0 * t1), wrap(2.0 * t2));
    let move_ = match kind {
        Gen => {
            if a1 > PI || ((a1 == 0.0 || a1 == PI) && a2 > PI) {
                flip()
            } else {
                Mat2::identity()
            }
        }
        T1_1 => {
            if a2 > PI {
                flip()
            } else {
                Mat2::identity()
            }
        }
        T1_3 => {
            if a1 > PI {
                flip()
            } else {
                Mat2::identity()
            }
        }
        T2_2 | T3 => Mat2::identity(),
        T1_2 => {
            let s = wrap(a1 + a2 - PI);
            let (f, th1) = if s > PI { (flip(), -t1) } else { (Mat2::identity(), t1) };
            let alpha = fold(s);
            rot(th1 - 0.25 * alpha) * f
        }
        T2_1 => rot(-t2),
        T2_3 => rot(t1),
    };
    let map = SpMap::orthogonal(&move_).compose(&g0);
    let a_c = chart(&map, &a)?;
    let d_c = chart(&map, &d)?;
    let (u1, u2) = frame_angles(&a_c, &lambda, &d_c);
    let coords = ArcCoordinates::new(bw, cw, dw, 2.0 * u1, 2.0 * u2)?;
    Ok(StandardFrame {
        map,
        coords,
        a: a_c,
        c: lambda,
        d: d_c,
    })
}

/// Arc coordinates of an ordered hexagon.
pub fn coords_from_hexagon(h: &OrderedHexagon) -> Result<ArcCoordinates> {
    h.coords()
}

/// A vertex of the polygonal chain: the `R × H²` image of a tube point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainVertex {
    pub level: f64,
    pub point: H2Point,
}

/// The `H²`-shadow of a hexagon: projections of `iA, iId, iC, iD` to the
/// hyperbolic factor of `𝒴_{0,∞}` in the canonical standard frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PolygonalChain {
    /// Distinct vertices (zero-length segments collapse their endpoint).
    pub vertices: Vec<ChainVertex>,
    /// `h(b), h(c), h(d)`.
    pub segment_lengths: [f64; 3],
    /// Angles at the interior vertices that survive for the genericity type.
    pub angles: Vec<f64>,
}

pub fn polygonal_chain(h: &OrderedHexagon) -> Result<PolygonalChain> {
    let f = standard_frame(h)?;
    Ok(chain_of_frame(&f))
}

fn chain_of_frame(f: &StandardFrame) -> PolygonalChain {
    let pts = [f.a, Sym2::identity(), f.c, f.d].map(|y| {
        let (level, point) = split_rh(&PosDef2::new_unchecked(y));
        ChainVertex { level, point }
    });
    let lens = [f.coords.b, f.coords.c, f.coords.d];
    let mut vertices = vec![pts[0]];
    for k in 0..3 {
        if !lens[k].in_diagonal() {
            vertices.push(pts[k + 1]);
        }
    }
    PolygonalChain {
        vertices,
        segment_lengths: lens.map(|v| v.h()),
        angles: f.coords.present_angles(),
    }
}

/// Symmetry class of a hexagon's stabilizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilizerClass {
    PO2,
    Z2,
    Trivial,
}

fn commute(x: &Sym2, y: &Sym2) -> bool {
    let (a, b) = (x.to_mat(), y.to_mat());
    (a * b - b * a).norm() <= 1e-9 * a.norm() * b.norm()
}

/// The hexagon lies in a maximal polydisk: in the standard frame `A`, `C`, `D`
/// are simultaneously diagonalizable (all diagonal once `C` is diagonal).
pub fn in_polydisk(h: &OrderedHexagon) -> Result<bool> {
    let f = standard_frame(h)?;
    Ok(commute(&f.a, &f.c) && commute(&f.a, &f.d) && commute(&f.c, &f.d))
}

pub fn stabilizer_class(h: &OrderedHexagon) -> Result<StabilizerClass> {
    let f = standard_frame(h)?;
    Ok(if f.coords.genericity() == GenericityType::T3 {
        StabilizerClass::PO2
    } else if commute(&f.a, &f.c) && commute(&f.a, &f.d) && commute(&f.c, &f.d) {
        StabilizerClass::Z2
    } else {
        StabilizerClass::Trivial
    })
}

/// Chart cross-ratio `(X₁−X₂)⁻¹(X₄−X₂)(X₄−X₃)⁻¹(X₁−X₃)` of four charts.
fn chart_cross_ratio(x1: &Sym2, x2: &Sym2, x3: &Sym2, x4: &Sym2) -> Option<Mat2> {
    let a = x1.sub(x2).to_mat().try_inverse()?;
    let b = x4.sub(x3).to_mat().try_inverse()?;
    Some(a * x4.sub(x2).to_mat() * b * x1.sub(x3).to_mat())
}

/// The malefic map `F_{b,d,α₁,α₂}(c)`: eigen-logs of `R(A², Id, C, DC⁻¹D)` for
/// the hexagon built from `(b, c, d, α₁, α₂)`, sorted descending. `c` may lie in
/// the extended domain (unordered, one component zero).
pub fn malefic_map(b: &WeylVector, d: &WeylVector, alpha1: f64, alpha2: f64, c: &WeylVector) -> WeylVector {
    let (a, cm, dm) = standard_matrices(b, c, d, alpha1, alpha2);
    let a2 = Sym2::from_mat(&(a.to_mat() * a.to_mat()));
    let ci = cm.inverse().expect("C is positive definite");
    let dcd = sym_product(&dm, &ci, &dm);
    let Some(r) = chart_cross_ratio(&a2, &Sym2::identity(), &cm, &dcd) else {
        return WeylVector::new(f64::NAN, f64::NAN);
    };
    let (l1, l2) = crate::symmat::eig_general2(&r).unwrap_or((f64::NAN, f64::NAN));
    WeylVector::sorted(l1.ln(), l2.ln())
}

/// JSON hexagon document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HexagonDoc {
    pub six_tuple: [Lagrangian; 6],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<SixTupleShape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<ArcCoordinates>,
}

impl HexagonDoc {
    pub fn from_hexagon(h: &OrderedHexagon) -> Result<HexagonDoc> {
        Ok(HexagonDoc {
            six_tuple: h.six_tuple(),
            shape: None,
            coords: Some(h.coords()?),
        })
    }

    pub fn to_hexagon(&self) -> Result<OrderedHexagon> {
        OrderedHexagon::from_six_tuple(&self.six_tuple, self.shape.unwrap_or(SixTupleShape::Used))
    }
}
