//! Maximal representations of `W3 = ⟨s₁, s₂, s₃ | sᵢ² = 1⟩` built from a hexagon
//! and three side reflections, their restriction to the pair-of-pants group
//! `⟨α = s₁s₂, β = s₂s₃⟩`, Shilov hyperbolicity, finite boundary orbits and the
//! connected-component sign map `δ`.

use std::f64::consts::PI;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::hexagon::{malefic_map, stabilizer_class, ArcCoordinates, HexagonDoc, OrderedHexagon, SixTupleShape, StabilizerClass};
use crate::lagrangian::{
    is_maximal_tuple, map_pair_to_standard, split_blocks, transverse, Lagrangian, SpKind, SpMap,
};
use crate::reflection::{reflection_set_for_side, reflected_hexagon, KElement, Reflection, ReflectionFamily};
use crate::symmat::{Mat2, Mat4, Mat42, Sym2};
use crate::tol::tol;

/// Tolerance for the geometric conditions of a maximal `W3` representation.
pub const REP_TOL: f64 = 1e-8;

/// Hexagon side carrying the fixed tube of `ρ(sᵢ)`, `i = 1, 2, 3`.
pub const GENERATOR_SIDES: [usize; 3] = [6, 2, 4];

/// 12-tuple positions `(fixed, fixed, swapped pair, swapped pair)` per generator.
const GENERATOR_POSITIONS: [[usize; 6]; 3] = [[10, 1, 11, 8, 0, 3], [2, 5, 3, 0, 4, 7], [6, 9, 7, 4, 8, 11]];

/// A point of the parameter space 𝒮: arc coordinates and one 𝒦 element per
/// generator (`r1` on side 6, `r2` on side 2, `r3` on side 4).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SParameters {
    pub coords: ArcCoordinates,
    pub r1: KElement,
    pub r2: KElement,
    pub r3: KElement,
}

/// Reflection-set family of the sides `6, 2, 4` read from `d`, `b` and `F(c)`.
pub fn side_families(p: &ArcCoordinates) -> [ReflectionFamily; 3] {
    let fam = |diag: bool| {
        if diag {
            ReflectionFamily::FullK
        } else {
            ReflectionFamily::TwoElement
        }
    };
    let (a1, a2) = p.construction_angles();
    [
        fam(p.d().in_diagonal()),
        fam(p.b().in_diagonal()),
        fam(malefic_map(&p.b(), &p.d(), a1, a2, &p.c()).in_diagonal()),
    ]
}

fn k_key(k: &KElement) -> f64 {
    match k {
        KElement::Id => -1.0,
        KElement::Theta(t) => *t,
    }
}

impl SParameters {
    /// Validates the constraint: generic sides only admit `R_st` and `R_ex`.
    pub fn new(coords: ArcCoordinates, r1: KElement, r2: KElement, r3: KElement) -> Result<SParameters> {
        let p = SParameters { coords, r1, r2, r3 };
        p.check()?;
        Ok(p)
    }

    pub fn ks(&self) -> [KElement; 3] {
        [self.r1, self.r2, self.r3]
    }

    fn check(&self) -> Result<()> {
        let names = ["r1 (side 6, d)", "r2 (side 2, b)", "r3 (side 4, F(c))"];
        for ((fam, k), name) in side_families(&self.coords).iter().zip(self.ks()).zip(names) {
            if *fam == ReflectionFamily::TwoElement && !k.is_two_element() {
                return Err(GeomError::ConstraintViolation(format!(
                    "{name} is regular, so only st or ex are allowed, got {}",
                    k.label()
                )));
            }
        }
        Ok(())
    }

    /// Canonical representative under the stabilizer of the base hexagon:
    /// a `PO(2)` stabilizer rotates every `θ` by the same amount (the first
    /// `θ` is moved to 0); a `Z2` stabilizer sends `θ ↦ π − θ` (the smaller
    /// tuple is kept).
    pub fn canonical(&self) -> SParameters {
        let h = OrderedHexagon::from_coords(&self.coords);
        let ks = self.ks();
        let out = match stabilizer_class(&h) {
            Ok(StabilizerClass::PO2) => match ks.iter().find_map(|k| match k {
                KElement::Theta(t) => Some(*t),
                KElement::Id => None,
            }) {
                Some(t0) => ks.map(|k| k.rotated(t0 / 2.0)),
                None => ks,
            },
            Ok(StabilizerClass::Z2) => {
                let f = ks.map(|k| k.flipped());
                let key = |v: &[KElement; 3]| v.map(|k| k_key(&k));
                if key(&f).partial_cmp(&key(&ks)) == Some(std::cmp::Ordering::Less) {
                    f
                } else {
                    ks
                }
            }
            _ => ks,
        };
        let snap = |k: KElement| match k {
            KElement::Theta(t) if t.abs() < 1e-9 || (PI - t).abs() < 1e-9 => KElement::ex(),
            k => k,
        };
        SParameters {
            coords: self.coords,
            r1: snap(out[0]),
            r2: snap(out[1]),
            r3: snap(out[2]),
        }
    }

    pub fn max_difference(&self, o: &SParameters) -> f64 {
        let mut m = self.coords.max_difference(&o.coords);
        for (a, b) in self.ks().iter().zip(o.ks()) {
            m = m.max(match (a, b) {
                (KElement::Id, KElement::Id) => 0.0,
                (KElement::Theta(x), KElement::Theta(y)) => {
                    let d = (x - y).rem_euclid(PI);
                    d.min(PI - d)
                }
                _ => f64::INFINITY,
            });
        }
        m
    }

    /// Equality of canonical forms.
    pub fn approx_eq(&self, o: &SParameters, tol: f64) -> bool {
        self.canonical().max_difference(&o.canonical()) <= tol
    }
}

/// `(ρ(s₁), ρ(s₂), ρ(s₃))` together with the hexagon it was built from.
#[derive(Debug, Clone)]
pub struct W3MaxRep {
    pub rho: [Reflection; 3],
    pub base: OrderedHexagon,
}

/// Images `g = ρ(s₁s₂)`, `h = ρ(s₂s₃)` of the free generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopRep {
    pub g: SpMap,
    pub h: SpMap,
}

/// `(sgn ρ(α), sgn ρ(β))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignPair {
    pub s1: i8,
    pub s2: i8,
}

/// Builds the representation: `ρ(sᵢ)` is the member with parameter `rᵢ` of
/// the reflection set of its side.
pub fn build_w3_rep(p: &SParameters) -> Result<W3MaxRep> {
    p.check()?;
    let base = OrderedHexagon::from_coords(&p.coords);
    let mut rho = Vec::with_capacity(3);
    for (side, k) in GENERATOR_SIDES.iter().zip(p.ks()) {
        rho.push(reflection_set_for_side(&base, *side)?.enumerate(&k)?);
    }
    Ok(W3MaxRep {
        rho: [rho[0], rho[1], rho[2]],
        base,
    })
}

impl W3MaxRep {
    /// `k ∘ w ∘ k⁻¹`.
    pub fn conjugate(&self, k: &SpMap) -> W3MaxRep {
        W3MaxRep {
            rho: self.rho.map(|r| r.conjugate_by(k)),
            base: self.base.act(k),
        }
    }

    /// `ρ(sᵢ)ρ(sⱼ)`.
    pub fn product(&self, i: usize, j: usize) -> SpMap {
        self.rho[i].map().compose(self.rho[j].map())
    }
}

/// Shilov analysis of a symplectic map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShilovReport {
    /// `min | |μ| − 1 |` over the eigenvalues of the unimodular normalization.
    pub margin: f64,
    pub hyperbolic: bool,
    /// Expanding Lagrangian `l⁺` (when off the unit circle).
    pub expanding: Option<Lagrangian>,
    /// Contracting Lagrangian `l⁻`.
    pub contracting: Option<Lagrangian>,
    /// `Y > 0` with `(l⁻, Y, gY, l⁺)` maximal in the frame `l⁻ = 0`, `l⁺ = l_∞`.
    pub witness: Option<Sym2>,
}

fn unimodular(m: &Mat4) -> Mat4 {
    m / m.determinant().abs().powf(0.25)
}

/// Real 2-dimensional kernel of `g² − s g + p` (two smallest singular vectors).
fn invariant_plane(g: &Mat4, s: f64, p: f64) -> Result<Lagrangian> {
    let q = g * g - g * s + Mat4::identity() * p;
    let svd = q.svd(false, true);
    let vt = svd.v_t.ok_or(GeomError::NoFixedPair)?;
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let top = svd.singular_values[order[3]].max(1e-300);
    if svd.singular_values[order[1]] > 1e-6 * top || svd.singular_values[order[2]] < 1e-9 * top {
        return Err(GeomError::NoFixedPair);
    }
    let mut b = Mat42::zeros();
    for (c, &o) in order.iter().take(2).enumerate() {
        b.set_column(c, &vt.row(o).transpose());
    }
    if let Ok(l) = Lagrangian::from_basis(b) {
        return Ok(l);
    }
    // exactly repeated zero singular values can leave the SVD kernel basis
    // unorthogonalized; the symmetric eigenproblem of QᵀQ is robust there
    let eig = (q.transpose() * q).symmetric_eigen();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    for (c, &o) in order.iter().take(2).enumerate() {
        b.set_column(c, &eig.eigenvectors.column(o));
    }
    Lagrangian::from_basis(b).map_err(|_| GeomError::NoFixedPair)
}

/// `(a, b, c, d)` blocks of `g` in the frame sending `l1 ↦ 0`, `l2 ↦ l_∞`.
fn blocks_in_pair_frame(g: &SpMap, l1: &Lagrangian, l2: &Lagrangian) -> Result<(Mat2, Mat2, Mat2, Mat2)> {
    if !transverse(l1, l2) {
        return Err(GeomError::NoFixedPair);
    }
    let s = map_pair_to_standard(l1, l2)?;
    let m = unimodular(&s.conjugate(g).m);
    let (a, b, c, d) = split_blocks(&m);
    if b.norm() + c.norm() > 1e-7 * (a.norm() + d.norm()) {
        return Err(GeomError::NoFixedPair);
    }
    Ok((a, b, c, d))
}

/// Witness of the criterion "`(l1, l, g l, l2)` maximal for some `l`": in the
/// frame `l1 = 0`, `l2 = l_∞`, where `g = diag(A, A⁻ᵀ)`, the solution of
/// `A Y Aᵀ − Y = Id` is positive definite exactly when `A` is expanding.
pub fn shilov_witness_for_pair(g: &SpMap, l1: &Lagrangian, l2: &Lagrangian) -> Result<Option<Sym2>> {
    // In the frame, l2 = l_∞ = ⟨e₁,e₂⟩ is acted on by the upper block and the
    // chart Z ↦ A Z Aᵀ (up to the projective scale, which cancels in A⊗A).
    let (a, _, _, d) = blocks_in_pair_frame(g, l1, l2)?;
    // normalize the projective scale so that the lower block is exactly A⁻ᵀ
    let a = a / ((a * d.transpose()).trace() / 2.0).abs().sqrt();
    // (A ⊗ A − I) vec(Y) = vec(I)
    let mut k = nalgebra::Matrix4::<f64>::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for p in 0..2 {
                for q in 0..2 {
                    k[(2 * i + j, 2 * p + q)] = a[(i, p)] * a[(j, q)];
                }
            }
        }
    }
    k -= Mat4::identity();
    let rhs = nalgebra::Vector4::new(1.0, 0.0, 0.0, 1.0);
    let Some(v) = k.lu().solve(&rhs) else { return Ok(None) };
    let y = Sym2::new(v[0], 0.5 * (v[1] + v[2]), v[3]);
    let ay = Sym2::from_mat(&(a * y.to_mat() * a.transpose())).sub(&y);
    Ok((y.is_pd_relative(tol().pd) && ay.is_pd_relative(tol().pd)).then_some(y))
}

/// Eigenvalue analysis of a symplectic map.
pub fn shilov_report(g: &SpMap) -> Result<ShilovReport> {
    if g.kind() != SpKind::Symplectic {
        return Err(GeomError::InvalidInput("Shilov hyperbolicity needs a symplectic map".into()));
    }
    let m = unimodular(&g.m);
    let ev: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    let margin = ev.iter().map(|z| (z.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min);
    let mut report = ShilovReport {
        margin,
        hyperbolic: false,
        expanding: None,
        contracting: None,
        witness: None,
    };
    if margin <= tol().shilov {
        return Ok(report);
    }
    let (out, inn): (Vec<_>, Vec<_>) = ev.iter().partition(|z| z.norm() > 1.0);
    if out.len() != 2 {
        return Ok(report);
    }
    let poly = |v: &[&Complex<f64>]| ((v[0] + v[1]).re, (v[0] * v[1]).re);
    let (s_out, p_out) = poly(&out);
    let (s_in, p_in) = poly(&inn);
    let plus = invariant_plane(&m, s_out, p_out)?;
    let minus = invariant_plane(&m, s_in, p_in)?;
    if !transverse(&plus, &minus) {
        return Err(GeomError::NoFixedPair);
    }
    let witness = shilov_witness_for_pair(g, &minus, &plus)?;
    report.hyperbolic = witness.is_some();
    report.expanding = Some(plus);
    report.contracting = Some(minus);
    report.witness = witness;
    Ok(report)
}

/// Conjugate to `diag(A, A⁻ᵀ)` with every eigenvalue of `A` of modulus `> 1`.
pub fn is_shilov_hyperbolic(g: &SpMap) -> Result<bool> {
    Ok(shilov_report(g)?.hyperbolic)
}

/// Sign of `det A` where `g = diag(A, A⁻ᵀ)` in the frame `l1 = 0`, `l2 = l_∞`.
pub fn sign_for_pair(g: &SpMap, l1: &Lagrangian, l2: &Lagrangian) -> Result<i8> {
    let (a, ..) = blocks_in_pair_frame(g, l1, l2)?;
    Ok(if a.determinant() > 0.0 { 1 } else { -1 })
}

fn sign_of(g: &SpMap) -> Result<i8> {
    let r = shilov_report(g)?;
    match (r.contracting, r.expanding) {
        (Some(m), Some(p)) => sign_for_pair(g, &m, &p),
        _ => Err(GeomError::NoFixedPair),
    }
}

/// `δ = (sgn g, sgn h)`: orientation signs on the hyperbolic factor of the axes.
pub fn delta_sign(p: &PopRep) -> Result<SignPair> {
    Ok(SignPair {
        s1: sign_of(&p.g)?,
        s2: sign_of(&p.h)?,
    })
}

/// `g = ρ(s₁)ρ(s₂)`, `h = ρ(s₂)ρ(s₃)`.
pub fn restrict_to_f2(w: &W3MaxRep) -> PopRep {
    PopRep {
        g: w.product(0, 1),
        h: w.product(1, 2),
    }
}

/// Fixed probe frame of six Lagrangians in general position.
pub fn probe_frame() -> [Lagrangian; 6] {
    [
        Lagrangian::zero(),
        Lagrangian::infinity(),
        Lagrangian::from_chart(&Sym2::new(1.0, 0.0, 1.0)),
        Lagrangian::from_chart(&Sym2::new(2.0, 0.5, 3.0)),
        Lagrangian::from_chart(&Sym2::new(-1.0, 0.3, 0.7)),
        Lagrangian::from_chart(&Sym2::new(0.2, -1.1, -0.4)),
    ]
}

/// `p` and `q` agree on the probe frame after conjugating `p` by `k`.
pub fn pop_reps_agree(p: &PopRep, q: &PopRep, k: &SpMap, tol: f64) -> bool {
    let (pg, ph) = (k.conjugate(&p.g), k.conjugate(&p.h));
    probe_frame().iter().all(|l| {
        pg.act_lagrangian(l).approx_eq(&q.g.act_lagrangian(l), tol) && ph.act_lagrangian(l).approx_eq(&q.h.act_lagrangian(l), tol)
    })
}

/// Per-generator checks of a maximal `W3` representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub involution_residuals: [f64; 3],
    pub antisymplectic_residuals: [f64; 3],
    /// Largest displacement of the two fixed Lagrangians of each generator.
    pub fixed_pair_errors: [f64; 3],
    /// Largest mismatch of the two swapped perpendicular endpoint pairs.
    pub swap_errors: [f64; 3],
    /// Shilov analyses of `ρ(s₁s₂)`, `ρ(s₂s₃)`, `ρ(s₃s₁)`.
    pub shilov_margins: [f64; 3],
    pub shilov_hyperbolic: [bool; 3],
    pub failures: Vec<String>,
    pub passed: bool,
}

pub fn validate_max_rep(w: &W3MaxRep) -> ValidationReport {
    let t = w.base.twelve();
    let mut rep = ValidationReport {
        involution_residuals: [0.0; 3],
        antisymplectic_residuals: [0.0; 3],
        fixed_pair_errors: [0.0; 3],
        swap_errors: [0.0; 3],
        shilov_margins: [0.0; 3],
        shilov_hyperbolic: [false; 3],
        failures: Vec::new(),
        passed: false,
    };
    for (i, r) in w.rho.iter().enumerate() {
        let [f1, f2, a1, b1, a2, b2] = GENERATOR_POSITIONS[i];
        rep.involution_residuals[i] = r.involution_residual();
        rep.antisymplectic_residuals[i] = r.antisymplectic_residual();
        rep.fixed_pair_errors[i] = [f1, f2].iter().map(|&k| r.act_lagrangian(&t[k]).distance(&t[k])).fold(0.0, f64::max);
        rep.swap_errors[i] = [(a1, b1), (b1, a1), (a2, b2), (b2, a2)]
            .iter()
            .map(|&(x, y)| r.act_lagrangian(&t[x]).distance(&t[y]))
            .fold(0.0, f64::max);
        let n = i + 1;
        if rep.involution_residuals[i] > 1e-9 {
            rep.failures.push(format!("rho{n} is not an involution"));
        }
        if rep.antisymplectic_residuals[i] >= 1e-10 {
            rep.failures.push(format!("rho{n} is not antisymplectic"));
        }
        if rep.fixed_pair_errors[i] > REP_TOL {
            rep.failures.push(format!("rho{n} does not fix its side endpoints"));
        }
        if rep.swap_errors[i] > REP_TOL {
            rep.failures.push(format!("rho{n} does not swap the perpendicular endpoints"));
        }
    }
    for (k, (i, j)) in [(0, 1), (1, 2), (2, 0)].into_iter().enumerate() {
        match shilov_report(&w.product(i, j)) {
            Ok(s) => {
                rep.shilov_margins[k] = s.margin;
                rep.shilov_hyperbolic[k] = s.hyperbolic;
                if !s.hyperbolic {
                    rep.failures.push(format!("rho{}rho{} is not Shilov hyperbolic", i + 1, j + 1));
                }
            }
            Err(e) => rep.failures.push(format!("rho{}rho{}: {e}", i + 1, j + 1)),
        }
    }
    rep.passed = rep.failures.is_empty();
    rep
}

/// Boundary point labels: a reduced word applied to one of `X₁ … Z₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub word: Vec<u8>,
    pub base: String,
}

impl OrbitLabel {
    fn render(&self) -> String {
        let w: String = self.word.iter().map(|i| format!("s{i}")).collect();
        if w.is_empty() {
            self.base.clone()
        } else {
            format!("{w}.{}", self.base)
        }
    }
}

/// Cyclically ordered orbit tuple `𝒪ₙ` with its maximality verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitTuple {
    pub labels: Vec<String>,
    pub lagrangians: Vec<Lagrangian>,
    pub maximal: bool,
}

/// Letters swapped by `sᵢ` (`X₁ ↔ X₂`, …).
fn swapped_letters(i: u8) -> [char; 2] {
    match i {
        1 => ['X', 'Z'],
        2 => ['X', 'Y'],
        _ => ['Y', 'Z'],
    }
}

/// Reduces `w·name` by absorbing trailing generators that swap `name`.
fn reduce(word: &[u8], name: &str) -> (Vec<u8>, String) {
    let mut w = word.to_vec();
    let letter = name.chars().next().unwrap_or('X');
    let mut idx = name.chars().nth(1).unwrap_or('1');
    while let Some(&last) = w.last() {
        if !swapped_letters(last).contains(&letter) {
            break;
        }
        w.pop();
        idx = if idx == '1' { '2' } else { '1' };
    }
    (w, format!("{letter}{idx}"))
}

/// Builds `𝒪ₙ`: for each new reduced word `w·sᵢ`, the two points `w sᵢ L₁`,
/// `w sᵢ L₂` (`L` the letter fixed-pair-opposite to `sᵢ`) are inserted between
/// the images of the endpoints of the side of `sᵢ`; the parity of `|w|`
/// decides the orientation of the insertion.
pub fn orbit_tuples(w: &W3MaxRep, n: usize) -> Result<OrbitTuple> {
    let t = w.base.twelve();
    let base = |name: &str| -> Lagrangian {
        match name {
            "X1" => t[0],
            "X2" => t[3],
            "Y1" => t[4],
            "Y2" => t[7],
            "Z1" => t[8],
            _ => t[11],
        }
    };
    let mut list: Vec<(Vec<u8>, String)> = ["X1", "X2", "Y1", "Y2", "Z1", "Z2"].iter().map(|s| (vec![], s.to_string())).collect();
    let mut words: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for wd in &words {
            for i in 1..=3u8 {
                if wd.last() == Some(&i) {
                    continue;
                }
                let mut s = wd.clone();
                s.push(i);
                next.push(s);
            }
        }
        for s in &next {
            let (wd, i) = (&s[..s.len() - 1], s[s.len() - 1]);
            let (a, b, letter) = match i {
                1 => ("Z2", "X1", 'Y'),
                2 => ("X2", "Y1", 'Z'),
                _ => ("Y2", "Z1", 'X'),
            };
            let (la, lb) = (reduce(wd, a), reduce(wd, b));
            let n1 = (s.clone(), format!("{letter}1"));
            let n2 = (s.clone(), format!("{letter}2"));
            let find = |l: &(Vec<u8>, String)| {
                list.iter()
                    .position(|x| x == l)
                    .ok_or(GeomError::InvalidRepresentation("orbit insertion anchor missing".into()))
            };
            let (pos, seq) = if wd.len() % 2 == 0 {
                let ia = find(&la)?;
                if list[(ia + 1) % list.len()] != lb {
                    return Err(GeomError::InvalidRepresentation("orbit insertion anchors not adjacent".into()));
                }
                (ia, [n2, n1])
            } else {
                let ib = find(&lb)?;
                if list[(ib + 1) % list.len()] != la {
                    return Err(GeomError::InvalidRepresentation("orbit insertion anchors not adjacent".into()));
                }
                (ib, [n1, n2])
            };
            list.splice(pos + 1..pos + 1, seq);
        }
        words = next;
    }
    let lagrangians: Vec<Lagrangian> = list
        .iter()
        .map(|(wd, name)| {
            wd.iter()
                .rev()
                .fold(base(name), |l, &i| w.rho[(i - 1) as usize].act_lagrangian(&l))
        })
        .collect();
    let maximal = is_maximal_tuple(&lagrangians)?;
    Ok(OrbitTuple {
        labels: list
            .into_iter()
            .map(|(word, base)| OrbitLabel { word, base }.render())
            .collect(),
        lagrangians,
        maximal,
    })
}

/// Fixed pair `(l⁻, l⁺)` of a Shilov hyperbolic product.
fn axis(g: &SpMap) -> Result<(Lagrangian, Lagrangian)> {
    let r = shilov_report(g)?;
    match (r.hyperbolic, r.contracting, r.expanding) {
        (true, Some(m), Some(p)) => Ok((m, p)),
        _ => Err(GeomError::InvalidRepresentation("a product of generators is not Shilov hyperbolic".into())),
    }
}

/// Recovers the base hexagon of a representation given by its three
/// reflections: the axes of `ρ(s₁s₂)`, `ρ(s₂s₃)`, `ρ(s₃s₁)` are the sides
/// `𝒴_{X₁,X₂}`, `𝒴_{Y₁,Y₂}`, `𝒴_{Z₁,Z₂}`, ordered so that the six endpoints
/// form a maximal cyclic tuple.
pub fn hexagon_from_reflections(rho: &[Reflection; 3]) -> Result<OrderedHexagon> {
    let prod = |i: usize, j: usize| rho[i].map().compose(rho[j].map());
    let pairs = [axis(&prod(0, 1))?, axis(&prod(1, 2))?, axis(&prod(2, 0))?];
    let mut found = None;
    for mask in 0..8u8 {
        let pick = |k: usize| {
            let (a, b) = pairs[k];
            if mask >> k & 1 == 0 {
                [a, b]
            } else {
                [b, a]
            }
        };
        let six = [pick(0), pick(1), pick(2)].concat();
        if is_maximal_tuple(&six)? {
            if found.is_some() {
                return Err(GeomError::InvalidRepresentation("ambiguous orientation of the axes".into()));
            }
            found = Some([six[0], six[1], six[2], six[3], six[4], six[5]]);
        }
    }
    let six = found.ok_or(GeomError::InvalidRepresentation("axes do not form a maximal 6-tuple".into()))?;
    OrderedHexagon::from_six_tuple(&six, SixTupleShape::PTuple)
}

/// Parameters of a representation, first tube `𝒴_{X₁,X₂}`, in canonical form.
pub fn coords_from_rep(w: &W3MaxRep) -> Result<SParameters> {
    let h = hexagon_from_reflections(&w.rho)?;
    let coords = h.coords()?;
    let mut ks = [KElement::Id; 3];
    for (i, side) in GENERATOR_SIDES.iter().enumerate() {
        ks[i] = reflection_set_for_side(&h, *side)?
            .identify(&w.rho[i])
            .map_err(|_| GeomError::InvalidRepresentation(format!("rho{} is not in the reflection set of side {side}", i + 1)))?;
    }
    Ok(SParameters::new(coords, ks[0], ks[1], ks[2])?.canonical())
}

/// Outcome of comparing two points of 𝒮₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum S0Verdict {
    /// Same coordinates in 𝒟 and equal products `K₁K₂`, `K₂K₃` in `PO(2)`.
    Equivalent,
    Distinct,
    /// Not related, yet the restricted representations agree up to a
    /// stabilizer element: an identification beyond the two known cases.
    FlaggedCoincidence,
}

fn same_po2(a: &Mat2, b: &Mat2) -> bool {
    (a - b).norm() < 1e-9 || (a + b).norm() < 1e-9
}

pub fn s0_verdict(p1: &SParameters, p2: &SParameters) -> Result<S0Verdict> {
    if p1.coords.max_difference(&p2.coords) > 1e-9 {
        return Ok(S0Verdict::Distinct);
    }
    let h = OrderedHexagon::from_coords(&p1.coords);
    let class = stabilizer_class(&h)?;
    if class == StabilizerClass::Trivial {
        return Ok(S0Verdict::Distinct);
    }
    let (k1, k2) = (p1.ks().map(|k| k.matrix()), p2.ks().map(|k| k.matrix()));
    if same_po2(&(k1[0] * k1[1]), &(k2[0] * k2[1])) && same_po2(&(k1[1] * k1[2]), &(k2[1] * k2[2])) {
        return Ok(S0Verdict::Equivalent);
    }
    let (q1, q2) = (restrict_to_f2(&build_w3_rep(p1)?), restrict_to_f2(&build_w3_rep(p2)?));
    let frame = crate::hexagon::standard_frame(&h)?.map;
    let mut candidates = vec![SpMap::identity()];
    let flip = SpMap::orthogonal(&crate::symmat::flip());
    candidates.push(frame.inverse().compose(&flip).compose(&frame));
    if class == StabilizerClass::PO2 {
        for j in 0..32 {
            let r = SpMap::orthogonal(&crate::symmat::rot(j as f64 * PI / 32.0));
            candidates.push(frame.inverse().compose(&r).compose(&frame));
            candidates.push(frame.inverse().compose(&r).compose(&flip).compose(&frame));
        }
    }
    if candidates.iter().any(|k| pop_reps_agree(&q1, &q2, k, 1e-7)) {
        return Ok(S0Verdict::FlaggedCoincidence);
    }
    Ok(S0Verdict::Distinct)
}

/// Both points lie in 𝒮₀ (coordinates in the polydisk stratum) and are related
/// by equal products `R₁R₂`, `R₂R₃`.
pub fn equivalent_in_s0(p1: &SParameters, p2: &SParameters) -> Result<bool> {
    Ok(s0_verdict(p1, p2)? == S0Verdict::Equivalent)
}

/// `R̄ᵢ(H)` for the three generators.
pub fn reflected_hexagons(w: &W3MaxRep) -> Result<[OrderedHexagon; 3]> {
    Ok([
        reflected_hexagon(&w.base, &w.rho[0])?,
        reflected_hexagon(&w.base, &w.rho[1])?,
        reflected_hexagon(&w.base, &w.rho[2])?,
    ])
}

/// JSON document of a representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepDocument {
    pub parameters: SParameters,
    pub reflections: [Reflection; 3],
    pub generators: PopRep,
    #[serde(rename = "baseHexagon")]
    pub base_hexagon: HexagonDoc,
    pub validation: ValidationReport,
}

impl RepDocument {
    pub fn new(p: &SParameters, w: &W3MaxRep) -> Result<RepDocument> {
        Ok(RepDocument {
            parameters: *p,
            reflections: w.rho,
            generators: restrict_to_f2(w),
            base_hexagon: HexagonDoc::from_hexagon(&w.base)?,
            validation: validate_max_rep(w),
        })
    }

    pub fn to_rep(&self) -> Result<W3MaxRep> {
        Ok(W3MaxRep {
            rho: self.reflections,
            base: self.base_hexagon.to_hexagon()?,
        })
    }
}
