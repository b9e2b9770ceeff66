//! The finite Standard-Model triple and its bosonic Lagrangian.
//!
//! Basis: sectors `R, L, R̄, L̄` (outer), then the eight slots
//! `ν, e, u_r, u_g, u_b, d_r, d_g, d_b`, then generations. Index
//! `sector·8N + slot·N + generation`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{self, Convention, Signature};
use crate::error::{Error, Result};
use crate::ist::{FiniteAlgebra, IndefiniteTriple};
use crate::kspace::{AntilinearOperator, KreinForm};
use crate::linalg::{self, block_diag, block_grid, cx, diag_real, eye, kron, sub_block, zeros, CMat, I, ONE};
use crate::ncforms;
use crate::testkit;

pub const SLOTS: usize = 8;
const NU: usize = 0;
const E: usize = 1;
const U: [usize; 3] = [2, 3, 4];
const D: [usize; 3] = [5, 6, 7];

/// Yukawa matrices, `N × N` each.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct YukawaSet {
    #[serde(rename = "Ynu", with = "crate::serde_cx::mat")]
    pub ynu: CMat,
    #[serde(rename = "Ye", with = "crate::serde_cx::mat")]
    pub ye: CMat,
    #[serde(rename = "Yu", with = "crate::serde_cx::mat")]
    pub yu: CMat,
    #[serde(rename = "Yd", with = "crate::serde_cx::mat")]
    pub yd: CMat,
    #[serde(rename = "YR", with = "crate::serde_cx::mat")]
    pub yr: CMat,
}

impl YukawaSet {
    pub fn new(ynu: CMat, ye: CMat, yu: CMat, yd: CMat, yr: CMat) -> Result<Self> {
        let n = ynu.nrows();
        if n == 0 {
            return Err(Error::InvalidInput("at least one generation is required".into()));
        }
        for (name, m) in [("Ynu", &ynu), ("Ye", &ye), ("Yu", &yu), ("Yd", &yd), ("YR", &yr)] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!("{name} is {:?}, expected {n}x{n}", m.shape())));
            }
        }
        Ok(Self { ynu, ye, yu, yd, yr })
    }

    /// Every Yukawa matrix equal to `value · 1`.
    pub fn uniform(n: usize, value: f64) -> Self {
        let m = eye(n).scale(value);
        Self { ynu: m.clone(), ye: m.clone(), yu: m.clone(), yd: m.clone(), yr: m }
    }

    /// Random complex Yukawas; `Y_R` is symmetric when `sign = 1`, antisymmetric when `-1`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, yr_sign: i8) -> Self {
        let mut m = || testkit::random_cmat(rng, n, n);
        let (ynu, ye, yu, yd) = (m(), m(), m(), m());
        let raw = testkit::random_cmat(rng, n, n);
        let yr = (&raw + raw.transpose().scale(yr_sign as f64)).scale(0.5);
        Self { ynu, ye, yu, yd, yr }
    }

    pub fn n(&self) -> usize {
        self.ynu.nrows()
    }

    /// `(m_ν, m_e, m_u, m_d)` with `m = Y Y†`.
    pub fn masses(&self) -> [CMat; 4] {
        [&self.ynu, &self.ye, &self.yu, &self.yd].map(|y| y * y.adjoint())
    }

    fn slot_matrix(&self, slot: usize) -> &CMat {
        match slot {
            NU => &self.ynu,
            E => &self.ye,
            s if U.contains(&s) => &self.yu,
            _ => &self.yd,
        }
    }
}

/// The six scalars of a generation-blind, `J`-commuting `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub mu: f64,
    pub nu: f64,
}

impl ZParams {
    pub fn uniform(v: f64) -> Self {
        Self { alpha: v, beta: v, gamma: v, delta: v, mu: v, nu: v }
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.alpha, self.beta, self.gamma, self.delta, self.mu, self.nu]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangianCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl LagrangianCoeffs {
    pub fn as_array(&self) -> [f64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    /// Largest relative difference over the five coefficients.
    pub fn rel_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1e-300))
            .map(|r| if r.is_nan() { 0.0 } else { r })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub g_y: f64,
    pub g_w: f64,
    pub g_c: f64,
    pub v0: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YukawaTraces {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub inequality_ok: bool,
}

/// Quaternion `α + βj` as the matrix `[[α, β], [-β̄, ᾱ]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    #[serde(with = "crate::serde_cx::complex")]
    pub alpha: num_complex::Complex64,
    #[serde(with = "crate::serde_cx::complex")]
    pub beta: num_complex::Complex64,
}

impl Quaternion {
    pub fn new(alpha: num_complex::Complex64, beta: num_complex::Complex64) -> Self {
        Self { alpha, beta }
    }

    pub fn real(a: f64) -> Self {
        Self::new(cx(a, 0.0), cx(0.0, 0.0))
    }

    pub fn matrix(&self) -> CMat {
        linalg::from_rows_c(&[&[self.alpha, self.beta], &[-self.beta.conj(), self.alpha.conj()]])
    }

    /// Reads a 2×2 quaternionic matrix, rejecting anything else.
    pub fn from_matrix(m: &CMat) -> Result<Self> {
        if m.shape() != (2, 2) {
            return Err(Error::DimensionMismatch("a quaternion is a 2x2 matrix".into()));
        }
        let q = Self::new(m[(0, 0)], m[(0, 1)]);
        if linalg::max_abs(&(q.matrix() - m)) > 1e-12 * linalg::max_abs(m).max(1.0) {
            return Err(Error::InvalidInput("matrix is not of quaternion form".into()));
        }
        Ok(q)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.alpha.conj(), -self.beta)
    }

    pub fn sub_real(&self, r: f64) -> Self {
        Self::new(self.alpha - r, self.beta)
    }
}

/// Slot-block matrix `T̃ = (T ⊕ T ⊗ 1₃) ⊗ 1_N` for a 2×2 `T`.
fn doublet_tilde(t: &CMat, n: usize) -> CMat {
    kron(&block_diag(&[t.clone(), kron(t, &eye(3))]), &eye(n))
}

/// `λ` on the lepton slots and `1₂ ⊗ m` on the quark slots.
fn antiparticle_rep(lambda: num_complex::Complex64, m: &CMat, n: usize) -> CMat {
    let lep = eye(2).map(|z| z * lambda);
    kron(&block_diag(&[lep, kron(&eye(2), m)]), &eye(n))
}

/// `π(λ, q, m)` on the full space, `q` given as any 2×2 matrix.
pub fn represent(lambda: num_complex::Complex64, q: &CMat, m: &CMat, n: usize) -> CMat {
    let ql = linalg::diag(&[lambda, lambda.conj()]);
    let bar = antiparticle_rep(lambda, m, n);
    block_diag(&[doublet_tilde(&ql, n), doublet_tilde(q, n), bar.clone(), bar])
}

fn elementary(k: usize, l: usize) -> CMat {
    let mut e = zeros(3, 3);
    e[(k, l)] = ONE;
    e
}

/// The 24-element real basis of `C ⊕ H ⊕ M₃(C)` with its involution images.
pub fn algebra_basis(n: usize) -> FiniteAlgebra {
    let z2 = zeros(2, 2);
    let z3 = zeros(3, 3);
    let c0 = cx(0.0, 0.0);
    let mut basis = Vec::with_capacity(24);
    let mut inv = Vec::with_capacity(24);
    let mut labels = Vec::with_capacity(24);
    for (lam, name) in [(ONE, "1"), (I, "i")] {
        basis.push(represent(lam, &z2, &z3, n));
        inv.push(represent(lam.conj(), &z2, &z3, n));
        labels.push(format!("lambda={name}"));
    }
    for (a, b, name) in [(ONE, c0, "1"), (I, c0, "i"), (c0, ONE, "j"), (c0, I, "k")] {
        let q = Quaternion::new(a, b);
        basis.push(represent(c0, &q.matrix(), &z3, n));
        inv.push(represent(c0, &q.conj().matrix(), &z3, n));
        labels.push(format!("q={name}"));
    }
    for k in 0..3 {
        for l in 0..3 {
            for (phase, name) in [(ONE, "E"), (I, "iE")] {
                let m = elementary(k, l).map(|z| z * phase);
                basis.push(represent(c0, &z2, &m, n));
                inv.push(represent(c0, &z2, &m.adjoint(), n));
                labels.push(format!("m={name}{k}{l}"));
            }
        }
    }
    FiniteAlgebra { real_basis: basis, involution_images: inv, labels }
}

fn sign_f(s: i8) -> f64 {
    s as f64
}

/// The assembled model.
#[derive(Debug, Clone, Serialize)]
pub struct SMModel {
    pub yukawas: YukawaSet,
    pub s: i8,
    pub eps_f: i8,
    pub triple: IndefiniteTriple,
}

fn check_sign(name: &str, v: i8) -> Result<()> {
    if v == 1 || v == -1 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be +1 or -1 (got {v})")))
    }
}

/// `Y` on the right-to-left block: the slot's Yukawa matrix on each slot.
fn y_block(y: &YukawaSet) -> CMat {
    let n = y.n();
    let blocks: Vec<CMat> = (0..SLOTS).map(|s| y.slot_matrix(s).clone()).collect();
    let out = block_diag(&blocks);
    debug_assert_eq!(out.nrows(), SLOTS * n);
    out
}

/// `M = E_νν ⊗ Y_R`.
fn m_block(y: &YukawaSet) -> CMat {
    let mut e = zeros(SLOTS, SLOTS);
    e[(NU, NU)] = ONE;
    kron(&e, &y.yr)
}

fn sector_diag(signs: [f64; 4], n: usize) -> CMat {
    let entries: Vec<f64> = signs.iter().flat_map(|&v| std::iter::repeat_n(v, SLOTS * n)).collect();
    diag_real(&entries)
}

/// `D_F` for the given `Y`, `M` and the off-diagonal `Z` (zero in the model).
pub fn dirac_operator(y: &CMat, m: &CMat, z: &CMat, eps_f: i8) -> CMat {
    let e = sign_f(eps_f);
    block_grid(
        &[
            vec![None, Some(-y.adjoint()), Some(m.conjugate().scale(e)), None],
            vec![Some(y.clone()), None, None, Some(z.conjugate().scale(e))],
            vec![Some(m.clone()), None, None, Some(-y.transpose())],
            vec![None, Some(z.clone()), Some(y.conjugate()), None],
        ],
        y.nrows(),
    )
}

pub fn build_sm(y: YukawaSet, s: i8, eps_f: i8) -> Result<SMModel> {
    check_sign("s", s)?;
    check_sign("eps_F", eps_f)?;
    let n = y.n();
    let target = y.yr.scale(sign_f(s) * sign_f(eps_f));
    let defect = linalg::max_abs(&(y.yr.transpose() - &target));
    if defect > 1e-12 * linalg::max_abs(&y.yr).max(1.0) {
        return Err(Error::MajoranaSymmetry { defect });
    }
    let dim = 4 * SLOTS * n;
    let sf = sign_f(s);
    let eta = sector_diag([1.0, -1.0, sf, -sf], n);
    let chi = sector_diag([1.0, -1.0, -1.0, 1.0], n);
    let b = SLOTS * n;
    let id = eye(b);
    let e = sign_f(eps_f);
    let jmat = block_grid(
        &[
            vec![None, None, Some(id.scale(e)), None],
            vec![None, None, None, Some(id.scale(e))],
            vec![Some(id.clone()), None, None, None],
            vec![None, Some(id), None, None],
        ],
        b,
    );
    let dirac = dirac_operator(&y_block(&y), &m_block(&y), &zeros(b, b), eps_f);
    debug_assert_eq!(dirac.nrows(), dim);
    let triple =
        IndefiniteTriple::new(KreinForm::new(eta.clone())?, chi, AntilinearOperator::new(jmat), dirac, algebra_basis(n))?
            .with_eta(eta);
    Ok(SMModel { yukawas: y, s, eps_f, triple })
}

impl SMModel {
    pub fn n(&self) -> usize {
        self.yukawas.n()
    }

    pub fn block(&self) -> usize {
        SLOTS * self.n()
    }

    pub fn y(&self) -> CMat {
        y_block(&self.yukawas)
    }

    pub fn m(&self) -> CMat {
        m_block(&self.yukawas)
    }

    /// Sector block `(i, j)` of an operator on the full space.
    pub fn sector(&self, x: &CMat, i: usize, j: usize) -> CMat {
        sub_block(x, i, j, self.block())
    }

    pub fn represent(&self, lambda: num_complex::Complex64, q: &CMat, m: &CMat) -> CMat {
        represent(lambda, q, m, self.n())
    }

    /// `q̃` on the left-handed block.
    pub fn q_tilde(&self, q: &Quaternion) -> CMat {
        doublet_tilde(&q.matrix(), self.n())
    }

    /// The one-form `H` with blocks `(R,L) = -Y†q̃†`, `(L,R) = q̃Y`.
    pub fn higgs_one_form(&self, qh: &Quaternion) -> CMat {
        let qt = self.q_tilde(qh);
        let y = self.y();
        block_grid(
            &[
                vec![None, Some(-(y.adjoint() * qt.adjoint())), None, None],
                vec![Some(&qt * &y), None, None, None],
                vec![None, None, None, None],
                vec![None, None, None, None],
            ],
            self.block(),
        )
    }

    /// Algebra pairs `(a_i, b_i)` with `H = Σ π(a_i)[D, π(b_i)]`.
    fn higgs_pairs(&self, qh: &Quaternion) -> [(CMat, CMat); 2] {
        let z2 = zeros(2, 2);
        let z3 = zeros(3, 3);
        let c0 = cx(0.0, 0.0);
        let minus_q = Quaternion::new(-qh.alpha, -qh.beta);
        [
            (self.represent(ONE, &z2, &z3), self.represent(c0, &qh.conj().matrix(), &z3)),
            (self.represent(c0, &eye(2), &z3), self.represent(c0, &minus_q.matrix(), &z3)),
        ]
    }

    /// `H` rebuilt from its universal decomposition, for cross-checks.
    pub fn higgs_from_pairs(&self, qh: &Quaternion) -> CMat {
        let d = &self.triple.dirac;
        self.higgs_pairs(qh).iter().map(|(a, b)| a * linalg::comm(d, b)).fold(zeros(d.nrows(), d.ncols()), |x, y| x + y)
    }

    /// `d_U H + H²`, the Higgs part of the curvature.
    pub fn higgs_curvature(&self, qh: &Quaternion) -> CMat {
        let d = &self.triple.dirac;
        let dh = self
            .higgs_pairs(qh)
            .iter()
            .map(|(a, b)| linalg::comm(d, a) * linalg::comm(d, b))
            .fold(zeros(d.nrows(), d.ncols()), |x, y| x + y);
        let h = self.higgs_one_form(qh);
        dh + &h * &h
    }

    /// The generic projection of the Higgs curvature through [`ncforms`].
    pub fn higgs_projection_generic(&self, qh: &Quaternion) -> Result<CMat> {
        let q = ncforms::q_space(&self.triple);
        self.higgs_projection_with(&q, qh)
    }

    pub fn higgs_projection_with(&self, q: &ncforms::FormSpace, qh: &Quaternion) -> Result<CMat> {
        ncforms::project_onto_complement(q, &self.higgs_curvature(qh), &self.triple.varpi())
    }

    /// The four diagonal blocks `B_R, B_L, B_R̄, B_L̄` of the projected curvature.
    pub fn projection_blocks(&self) -> [CMat; 4] {
        let n = self.n();
        let nf = n as f64;
        let y = self.y();
        let c1 = yukawa_traces(&self.yukawas).c1;
        let b = self.block();
        let id = eye(b);
        let [mnu, me, mu, md] = self.yukawas.masses();
        let al = (&mnu + &me).scale(0.5);
        let aq = (&mu + &md).scale(0.5);
        let mut lblocks = vec![al.clone(), al];
        lblocks.extend(std::iter::repeat_n(aq, 6));
        let l_avg = block_diag(&lblocks);
        let br = y.adjoint() * &y - id.scale(c1 / (12.0 * nf));
        let bl = l_avg - id.scale(c1 / (8.0 * nf));
        let mut lep = zeros(SLOTS, SLOTS);
        lep[(NU, NU)] = ONE;
        lep[(E, E)] = ONE;
        let bbar = kron(&lep, &eye(n)).scale(-c1 / (12.0 * nf));
        [br, bl, bbar.clone(), bbar]
    }

    /// `−(|q_H|² + 2 Re α_H) diag(B_R, B_L, B_R̄, B_L̄)`.
    pub fn higgs_projection_closed(&self, qh: &Quaternion) -> CMat {
        let pref = -(qh.norm_sqr() + 2.0 * qh.alpha.re);
        block_diag(&self.projection_blocks()).scale(pref)
    }

    /// Operators `iq̃ ⊗ (m_ν − m_e) ⊕ iq̃ ⊗ 1₃ ⊗ (m_u − m_d)` on `L`, one per
    /// quaternion unit.
    pub fn junk_pattern(&self) -> Vec<CMat> {
        let [mnu, me, mu, md] = self.yukawas.masses();
        let b = self.block();
        let z = cx(0.0, 0.0);
        [(ONE, z), (I, z), (z, ONE), (z, I)]
            .iter()
            .map(|&(x, y)| {
                let iq = Quaternion::new(x, y).matrix().map(|w| w * I);
                let core = block_diag(&[kron(&iq, &(&mnu - &me)), kron(&kron(&iq, &eye(3)), &(&mu - &md))]);
                block_grid(&[vec![None; 4], vec![None, Some(core), None, None], vec![None; 4], vec![None; 4]], b)
            })
            .collect()
    }

    /// The generation-blind scalar `z` on the full space.
    pub fn z_matrix(&self, z: &ZParams) -> CMat {
        let mut r = vec![0.0; SLOTS];
        r[NU] = z.alpha;
        r[E] = z.gamma;
        for s in U {
            r[s] = z.beta;
        }
        for s in D {
            r[s] = z.delta;
        }
        let mut l = vec![z.mu, z.mu];
        l.extend([z.nu; 6]);
        let n = self.n();
        let expand = |v: &[f64]| -> Vec<f64> { v.iter().flat_map(|&x| std::iter::repeat_n(x, n)).collect() };
        let (re, le) = (expand(&r), expand(&l));
        let all: Vec<f64> = re.iter().chain(&le).chain(&re).chain(&le).copied().collect();
        diag_real(&all)
    }

    /// Hermitian gauge potential `iπ(B)` for hypercharge `A^Y`, weak `A^W`
    /// and colour `A^C` values, with `B^C′ = −i(A^C − A^Y/3)`.
    pub fn gauge_field(&self, ay: f64, aw: &CMat, ac: &CMat) -> Result<CMat> {
        let (bl, bq, bm) = gauge_generators(ay, aw, ac)?;
        Ok(self.represent(bl, &bq, &bm).map(|z| z * I))
    }

    /// `π(B)` for the same inputs, whose trace is the unimodularity defect.
    pub fn gauge_algebra_element(&self, ay: f64, aw: &CMat, ac: &CMat) -> Result<CMat> {
        let (bl, bq, bm) = gauge_generators(ay, aw, ac)?;
        Ok(self.represent(bl, &bq, &bm))
    }
}

fn gauge_generators(ay: f64, aw: &CMat, ac: &CMat) -> Result<(num_complex::Complex64, CMat, CMat)> {
    if aw.shape() != (2, 2) || ac.shape() != (3, 3) {
        return Err(Error::DimensionMismatch("A^W must be 2x2 and A^C 3x3".into()));
    }
    for (name, m) in [("A^W", aw), ("A^C", ac)] {
        let scale = linalg::max_abs(m).max(1.0);
        if linalg::max_abs(&(m - m.adjoint())) > 1e-12 * scale {
            return Err(Error::InvalidInput(format!("{name} must be Hermitian")));
        }
        if m.trace().norm() > 1e-12 * scale {
            return Err(Error::InvalidInput(format!("{name} must be traceless")));
        }
    }
    if !ay.is_finite() {
        return Err(Error::InvalidInput("A^Y must be finite".into()));
    }
    let bw = aw.map(|z| -z * I);
    Quaternion::from_matrix(&bw)?;
    let bc = (ac - eye(3).scale(ay / 3.0)).map(|z| -z * I);
    Ok((cx(0.0, -ay), bw, bc))
}

/// `(C₁, C₂, C₃)` and whether `C₁² ≤ 4N(C₂ + 2C₃)`.
pub fn yukawa_traces(y: &YukawaSet) -> YukawaTraces {
    let [mnu, me, mu, md] = y.masses();
    let tr = |m: &CMat| m.trace().re;
    let c1 = tr(&mnu) + tr(&me) + 3.0 * tr(&mu) + 3.0 * tr(&md);
    let c2 = tr(&(&mnu * &mnu)) + tr(&(&me * &me)) + 3.0 * tr(&(&mu * &mu)) + 3.0 * tr(&(&md * &md));
    let c3 = tr(&(&mnu * &me)) + 3.0 * tr(&(&mu * &md));
    let rhs = 4.0 * y.n() as f64 * (c2 + 2.0 * c3);
    let inequality_ok = c1 * c1 <= rhs + 1e-9 * rhs.abs().max(c1 * c1).max(1.0);
    YukawaTraces { c1, c2, c3, inequality_ok }
}

/// `tr((m − c)²)` for Hermitian `m`.
fn tr_shift_sq(m: &CMat, c: f64) -> f64 {
    let s = m - eye(m.nrows()).scale(c);
    (&s * &s).trace().re
}

/// Closed-form coefficients.
pub fn lagrangian_coeffs(z: &ZParams, y: &YukawaSet) -> LagrangianCoeffs {
    let nf = y.n() as f64;
    let [mnu, me, mu, md] = y.masses();
    let tr = |m: &CMat| m.trace().re;
    let ZParams { alpha, beta, gamma, delta, mu: zmu, nu: znu } = *z;
    let a = 4.0 * nf / 3.0 * (3.0 * alpha + 5.0 * beta + 3.0 * gamma + 5.0 * delta + 3.0 * zmu + znu);
    let b = 2.0 * nf * (zmu + 3.0 * znu);
    let c = 2.0 * nf * (beta + delta + 2.0 * znu);
    let d = 4.0
        * (alpha * tr(&mnu)
            + 3.0 * beta * tr(&mu)
            + gamma * tr(&me)
            + 3.0 * delta * tr(&md)
            + zmu * (tr(&mnu) + tr(&me))
            + 3.0 * znu * (tr(&mu) + tr(&md)));
    let c1 = yukawa_traces(y).c1;
    let cr = c1 / (12.0 * nf);
    let cl = c1 / (8.0 * nf);
    let al = (&mnu + &me).scale(0.5);
    let aq = (&mu + &md).scale(0.5);
    let lepton_bar = cr * cr * nf;
    let e = 4.0 * alpha * (tr_shift_sq(&mnu, cr) + lepton_bar)
        + 12.0 * beta * tr_shift_sq(&mu, cr)
        + 4.0 * gamma * (tr_shift_sq(&me, cr) + lepton_bar)
        + 12.0 * delta * tr_shift_sq(&md, cr)
        + 8.0 * zmu * (tr_shift_sq(&al, cl) + lepton_bar)
        + 24.0 * znu * tr_shift_sq(&aq, cl);
    LagrangianCoeffs { a, b, c, d, e }
}

/// The quartic coefficient exactly as the source summary prints it.
///
/// It differs from [`lagrangian_coeffs`] unless `μ = ν` and the `e`/`u`
/// weights coincide; kept for comparison.
pub fn printed_e(z: &ZParams, y: &YukawaSet) -> f64 {
    let nf = y.n() as f64;
    let [mnu, me, mu, md] = y.masses();
    let t = yukawa_traces(y);
    let cr = t.c1 / (12.0 * nf);
    let extra = t.c1 * t.c1 / (144.0 * nf);
    4.0 * (tr_shift_sq(&mnu, cr) + extra) * z.alpha
        + 4.0 * (tr_shift_sq(&me, cr) + extra) * z.beta
        + 12.0 * tr_shift_sq(&mu, cr) * z.gamma
        + 12.0 * tr_shift_sq(&md, cr) * z.delta
        + (t.c2 + 2.0 * t.c3 - 2.0 * t.c1 * t.c1 / (9.0 * nf)) * (z.mu + z.nu)
}

/// Trace oracle: every coefficient read off `tr(z · term)` on the assembled
/// `32N`-dimensional operators, with the quartic term taken from the
/// generic projection pipeline.
pub fn lagrangian_coeffs_oracle(z: &ZParams, y: &YukawaSet) -> Result<LagrangianCoeffs> {
    let model = build_sm(y.clone(), -1, oracle_eps(y))?;
    let q = ncforms::q_space(&model.triple);
    lagrangian_coeffs_oracle_with(&model, &q, z)
}

/// Picks the `ε_F` compatible with `Y_R` (for `s = −1`).
fn oracle_eps(y: &YukawaSet) -> i8 {
    let sym = linalg::max_abs(&(y.yr.transpose() - &y.yr));
    if sym <= 1e-12 * linalg::max_abs(&y.yr).max(1.0) {
        -1
    } else {
        1
    }
}

pub fn lagrangian_coeffs_oracle_with(model: &SMModel, q: &ncforms::FormSpace, z: &ZParams) -> Result<LagrangianCoeffs> {
    let zm = model.z_matrix(z);
    let tz = |x: &CMat| (&zm * x).trace().re;
    let z2 = zeros(2, 2);
    let z3 = zeros(3, 3);
    let sigma3 = diag_real(&[1.0, -1.0]);
    let lambda3 = diag_real(&[1.0, -1.0, 0.0]);
    let gauge = [(1.0, &z2, &z3, 1.0), (0.0, &sigma3, &z3, 2.0), (0.0, &z2, &lambda3, 2.0)];
    let abc: Vec<f64> = gauge
        .par_iter()
        .map(|&(ay, aw, ac, norm)| {
            let g = model.gauge_field(ay, aw, ac).expect("unit fields are valid");
            2.0 * tz(&(&g * &g)) / norm
        })
        .collect();
    let x = model.higgs_one_form(&Quaternion::real(1.0));
    let d = -4.0 * tz(&(&x * &x));
    let mh = model.higgs_projection_with(q, &Quaternion::real(-1.0))?;
    let e = 4.0 * tz(&(&mh * &mh));
    Ok(LagrangianCoeffs { a: abc[0], b: abc[1], c: abc[2], d, e })
}

pub fn couplings(c: &LagrangianCoeffs) -> Result<Couplings> {
    for (name, v) in [("a", c.a), ("b", c.b), ("c", c.c), ("d", c.d)] {
        if !(v > 0.0) {
            return Err(Error::NonPositiveCoefficient { name, value: v });
        }
    }
    Ok(Couplings {
        g_y: 1.0 / (4.0 * c.a).sqrt(),
        g_w: 1.0 / (8.0 * c.b).sqrt(),
        g_c: 1.0 / (8.0 * c.c).sqrt(),
        v0: c.e / (c.d * c.d),
        v: c.d.sqrt(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GaugeCouplings {
    #[serde(with = "crate::serde_cx::mat")]
    pub right: CMat,
    #[serde(with = "crate::serde_cx::mat")]
    pub left: CMat,
    /// `tr π(B)`, zero under unimodularity.
    pub unimodularity_trace: f64,
}

/// `A^R − conj(A^R̄)` and `A^L − conj(A^L̄)` for the assembled potential.
pub fn gauge_coupling_matrices(model: &SMModel, ay: f64, aw: &CMat, ac: &CMat) -> Result<GaugeCouplings> {
    let a = model.gauge_field(ay, aw, ac)?;
    let pb = model.gauge_algebra_element(ay, aw, ac)?;
    let right = model.sector(&a, 0, 0) - model.sector(&a, 2, 2).conjugate();
    let left = model.sector(&a, 1, 1) - model.sector(&a, 3, 3).conjugate();
    Ok(GaugeCouplings { right, left, unimodularity_trace: pb.trace().norm() })
}

/// `T_Y^R ⊗ 1_N` and `T_Y^L ⊗ 1_N`.
pub fn hypercharge_generators(n: usize) -> (CMat, CMat) {
    let r = block_diag(&[diag_real(&[0.0, -2.0]), kron(&diag_real(&[4.0 / 3.0, -2.0 / 3.0]), &eye(3))]);
    let l = block_diag(&[eye(2).scale(-1.0), eye(6).scale(1.0 / 3.0)]);
    (kron(&r, &eye(n)), kron(&l, &eye(n)))
}

/// `−η_F (D_F + H + J_F H J_F⁻¹)` with `q_H = q_Φ − 1`.
pub fn higgs_coupling_matrix(model: &SMModel, q_phi: &Quaternion) -> CMat {
    let h = model.higgs_one_form(&q_phi.sub_real(1.0));
    let t = &model.triple;
    let eta = t.eta.as_ref().expect("the model carries η_F");
    -(eta * (&t.dirac + &h + t.j_conj(&h)))
}

/// Majorana pairing surrogate on the West `Cl(3,1)` module tensored with the
/// right-handed sector: `uᵀBv + s·vᵀBu` with `B = (J_M†H_M) ⊗ (s M)`. It
/// vanishes for all `u, v` exactly when `ε_F = +1`.
pub fn majorana_pairing(model: &SMModel, u: &CMat, v: &CMat) -> Result<f64> {
    let b = majorana_form(model)?;
    if u.shape() != (b.nrows(), 1) || v.shape() != (b.nrows(), 1) {
        return Err(Error::DimensionMismatch(format!("test vectors must have length {}", b.nrows())));
    }
    let s = sign_f(model.s);
    let val = (u.transpose() * &b * v)[(0, 0)] + (v.transpose() * &b * u)[(0, 0)].scale(s);
    Ok(val.norm())
}

pub fn majorana_form(model: &SMModel) -> Result<CMat> {
    let m = clifford::build(Signature::new(3, 1)?)?;
    let hm = m.product_for(Convention::West).gram().clone();
    let jm = m.j_for(Convention::West).mat.clone();
    let manifold = jm.adjoint() * hm;
    Ok(kron(&manifold, &model.m().scale(sign_f(model.s))))
}

/// JSON input for the model: Yukawas, signs and `z`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmInput {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "minus_one")]
    pub s: i8,
    #[serde(rename = "epsF", default = "minus_one")]
    pub eps_f: i8,
    pub yukawas: YukawaSet,
    pub z: ZParams,
}

fn minus_one() -> i8 {
    -1
}

impl SmInput {
    pub fn validate(&self) -> Result<()> {
        if self.yukawas.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "N = {} but the Yukawa matrices are {}x{}",
                self.n,
                self.yukawas.n(),
                self.yukawas.n()
            )));
        }
        YukawaSet::new(
            self.yukawas.ynu.clone(),
            self.yukawas.ye.clone(),
            self.yukawas.yu.clone(),
            self.yukawas.yd.clone(),
            self.yukawas.yr.clone(),
        )?;
        check_sign("s", self.s)?;
        check_sign("eps_F", self.eps_f)
    }
}
