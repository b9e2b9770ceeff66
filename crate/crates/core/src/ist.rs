//! Finite indefinite spectral triples and their axiom checkers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clifford::{self, CliffordModule, Convention};
use crate::dims::{self, Mod8Dim};
use crate::error::{Error, Result};
use crate::kspace::{self, AntilinearOperator, KreinForm};
use crate::linalg::{self, eye, max_abs, spmul, CMat, I, ONE};
use crate::ncforms;

/// Images under the representation of a real basis of a real *-algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiniteAlgebra {
    #[serde(with = "crate::serde_cx::mat_vec")]
    pub real_basis: Vec<CMat>,
    #[serde(with = "crate::serde_cx::mat_vec")]
    pub involution_images: Vec<CMat>,
    pub labels: Vec<String>,
}

impl FiniteAlgebra {
    pub fn new(real_basis: Vec<CMat>, involution_images: Vec<CMat>, labels: Vec<String>) -> Result<Self> {
        if real_basis.is_empty() {
            return Err(Error::InvalidInput("algebra basis is empty".into()));
        }
        if real_basis.len() != involution_images.len() || real_basis.len() != labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} basis elements, {} involution images, {} labels",
                real_basis.len(),
                involution_images.len(),
                labels.len()
            )));
        }
        let shape = real_basis[0].shape();
        if shape.0 != shape.1 || real_basis.iter().chain(&involution_images).any(|m| m.shape() != shape) {
            return Err(Error::DimensionMismatch("algebra matrices must share one square shape".into()));
        }
        Ok(Self { real_basis, involution_images, labels })
    }

    /// The complex numbers acting by scalars on `C^n`.
    pub fn scalars(n: usize) -> Self {
        Self {
            real_basis: vec![eye(n), eye(n).map(|z| z * I)],
            involution_images: vec![eye(n), eye(n).map(|z| -z * I)],
            labels: vec!["1".into(), "i".into()],
        }
    }

    pub fn len(&self) -> usize {
        self.real_basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.real_basis.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.real_basis[0].nrows()
    }

    pub fn element(&self, coeffs: &[f64]) -> Result<CMat> {
        combine(&self.real_basis, coeffs)
    }

    pub fn star_element(&self, coeffs: &[f64]) -> Result<CMat> {
        combine(&self.involution_images, coeffs)
    }

    /// Worst relative distance of a basis product from the real span of the basis.
    pub fn closure_defect(&self) -> f64 {
        let span = linalg::real_span(&self.real_basis);
        let products: Vec<CMat> = self
            .real_basis
            .iter()
            .flat_map(|a| self.real_basis.iter().map(move |b| spmul(a, b)))
            .collect();
        products
            .par_iter()
            .map(|x| linalg::frob(&linalg::real_residual(x, &span.basis)) / linalg::frob(x).max(1.0))
            .reduce(|| 0.0, f64::max)
    }
}

fn combine(mats: &[CMat], coeffs: &[f64]) -> Result<CMat> {
    if coeffs.len() != mats.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} basis elements",
            coeffs.len(),
            mats.len()
        )));
    }
    let mut out = linalg::zeros(mats[0].nrows(), mats[0].ncols());
    for (c, m) in coeffs.iter().zip(mats) {
        if *c != 0.0 {
            out += m.scale(*c);
        }
    }
    Ok(out)
}

/// `(A, K, D, χ, J)` with the parity `σ` of the Krein product.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "TripleJson", try_from = "TripleJson")]
pub struct IndefiniteTriple {
    pub gram: KreinForm,
    pub chi: CMat,
    pub j: AntilinearOperator,
    pub dirac: CMat,
    pub algebra: FiniteAlgebra,
    pub sigma: u8,
    /// A privileged fundamental symmetry, when one is known.
    pub eta: Option<CMat>,
}

/// Flat wire format of a triple.
#[derive(Serialize, Deserialize)]
struct TripleJson {
    #[serde(with = "crate::serde_cx::mat")]
    gram: CMat,
    #[serde(with = "crate::serde_cx::mat")]
    chi: CMat,
    #[serde(rename = "J", with = "crate::serde_cx::mat")]
    j: CMat,
    #[serde(with = "crate::serde_cx::mat")]
    dirac: CMat,
    #[serde(with = "crate::serde_cx::mat_vec")]
    algebra_basis: Vec<CMat>,
    #[serde(with = "crate::serde_cx::mat_vec")]
    involution: Vec<CMat>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<crate::serde_cx::JsonMat>,
}

impl From<IndefiniteTriple> for TripleJson {
    fn from(t: IndefiniteTriple) -> Self {
        Self {
            gram: t.gram.gram().clone(),
            chi: t.chi,
            j: t.j.mat,
            dirac: t.dirac,
            algebra_basis: t.algebra.real_basis,
            involution: t.algebra.involution_images,
            labels: t.algebra.labels,
            eta: t.eta.map(crate::serde_cx::JsonMat),
        }
    }
}

impl TryFrom<TripleJson> for IndefiniteTriple {
    type Error = Error;

    fn try_from(w: TripleJson) -> Result<Self> {
        let labels = if w.labels.is_empty() {
            (0..w.algebra_basis.len()).map(|k| format!("e{k}")).collect()
        } else {
            w.labels
        };
        let algebra = FiniteAlgebra::new(w.algebra_basis, w.involution, labels)?;
        let mut t = Self::new(KreinForm::new(w.gram)?, w.chi, AntilinearOperator::new(w.j), w.dirac, algebra)?;
        t.eta = w.eta.map(|m| m.0);
        Ok(t)
    }
}

/// Largest entry of `a - b` relative to the size of `b` (at least 1).
fn defect(a: &CMat, b: &CMat) -> f64 {
    max_abs(&(a - b)) / max_abs(b).max(1.0)
}

fn signed_defect(a: &CMat, b: &CMat) -> f64 {
    defect(a, b).min(defect(a, &-b))
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomEntry {
    pub name: &'static str,
    pub violation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
    pub tolerance: f64,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.violation <= self.tolerance)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.entries.iter().filter(|e| e.violation > self.tolerance).map(|e| e.name).collect()
    }

    pub fn max_violation(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.violation))
    }
}

pub const AXIOM_TOL: f64 = 1e-10;

impl IndefiniteTriple {
    pub fn new(
        gram: KreinForm,
        chi: CMat,
        j: AntilinearOperator,
        dirac: CMat,
        algebra: FiniteAlgebra,
    ) -> Result<Self> {
        let n = gram.dim();
        for (name, m) in [("chi", &chi), ("J", &j.mat), ("Dirac", &dirac)] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!("{name} does not match the gram dimension {n}")));
            }
        }
        if algebra.dim() != n {
            return Err(Error::DimensionMismatch("algebra acts on a space of the wrong size".into()));
        }
        let chi_adj = kspace::krein_adjoint(&chi, &gram)?;
        let sigma = if defect(&chi_adj, &chi) <= defect(&chi_adj, &-&chi) { 0 } else { 1 };
        Ok(Self { gram, chi, j, dirac, algebra, sigma, eta: None })
    }

    pub fn with_eta(mut self, eta: CMat) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    /// `ϖ = χη` for the privileged η, or the identity when none is known.
    pub fn varpi(&self) -> CMat {
        match &self.eta {
            Some(eta) => &self.chi * eta,
            None => eye(self.dim()),
        }
    }

    pub fn adjoint(&self, x: &CMat) -> CMat {
        kspace::krein_adjoint(x, &self.gram).expect("dimension checked at construction")
    }

    /// `J X J⁻¹`.
    pub fn j_conj(&self, x: &CMat) -> CMat {
        self.j.conjugate_op(x).expect("J is invertible")
    }

    /// Clifford-module triple for a convention's product and charge conjugation,
    /// with the algebra `C` and the first generator-based Dirac operator that
    /// satisfies the axioms (zero when none does).
    pub fn from_clifford(m: &CliffordModule, conv: Convention) -> Result<Self> {
        let gram = m.product_for(conv).clone();
        let j = m.j_for(conv).clone();
        let algebra = FiniteAlgebra::scalars(m.dim);
        let eta = match conv {
            Convention::West | Convention::South => m.eta_plus.clone(),
            Convention::East | Convention::North => m.eta_minus.clone(),
        };
        let base = Self::new(gram, m.chi.clone(), j, linalg::zeros(m.dim, m.dim), algebra)?.with_eta(eta);
        for g in &m.gammas {
            for cand in [g.clone(), g.map(|z| z * I), &m.chi * g, (&m.chi * g).map(|z| z * I)] {
                let mut t = base.clone();
                t.dirac = cand;
                if check_axioms(&t).pass() {
                    return Ok(t);
                }
            }
        }
        Ok(base)
    }
}

/// Evaluates every axiom of a finite indefinite spectral triple.
pub fn check_axioms(t: &IndefiniteTriple) -> AxiomReport {
    let n = t.dim();
    let id = eye(n);
    let chi_adj = t.adjoint(&t.chi);
    let parity = if t.sigma == 0 { t.chi.clone() } else { -&t.chi };
    let j_adj = kspace::antilinear_adjoint(&t.j, &t.gram).expect("dimension checked");
    let jd = &t.j.mat * t.dirac.conjugate();
    let dj = &t.dirac * &t.j.mat;
    let algebra_even = t
        .algebra
        .real_basis
        .iter()
        .map(|a| max_abs(&linalg::comm(&t.chi, a)) / max_abs(a).max(1.0))
        .fold(0.0, f64::max);
    let involution = t
        .algebra
        .real_basis
        .iter()
        .zip(&t.algebra.involution_images)
        .map(|(a, s)| defect(&t.adjoint(a), s))
        .fold(0.0, f64::max);
    let entries = vec![
        AxiomEntry { name: "chi^2 = 1", violation: defect(&(&t.chi * &t.chi), &id) },
        AxiomEntry { name: "chi^x = (-1)^sigma chi", violation: defect(&chi_adj, &parity) },
        AxiomEntry { name: "J^2 = +-1", violation: signed_defect(&t.j.square(), &id) },
        AxiomEntry { name: "J^x = +-J", violation: signed_defect(&j_adj.mat, &t.j.mat) },
        AxiomEntry {
            name: "J chi = +-chi J",
            violation: signed_defect(&(&t.j.mat * t.chi.conjugate()), &(&t.chi * &t.j.mat)),
        },
        AxiomEntry { name: "D self-adjoint", violation: defect(&t.adjoint(&t.dirac), &t.dirac) },
        AxiomEntry {
            name: "D not odd",
            violation: max_abs(&linalg::anticomm(&t.chi, &t.dirac)) / max_abs(&t.dirac).max(1.0),
        },
        AxiomEntry { name: "J grading: [J,D] = 0", violation: defect(&jd, &dj) },
        AxiomEntry { name: "algebra even", violation: algebra_even },
        AxiomEntry { name: "involutive representation", violation: involution },
    ];
    AxiomReport { entries, tolerance: AXIOM_TOL }
}

/// The sign quadruple and KO/metric dimensions of a compliant triple.
pub fn triple_signs(t: &IndefiniteTriple) -> Result<clifford::SignReport> {
    let rep = check_axioms(t);
    if !rep.pass() {
        return Err(Error::AxiomFailure(rep.failures().join(", ")));
    }
    clifford::signs_of(&t.gram, &t.chi, &t.j)
}

pub fn triple_dims(t: &IndefiniteTriple) -> Result<(Mod8Dim, Mod8Dim)> {
    Ok(dims::dims_from_signs(triple_signs(t)?.signs))
}

/// `X° = J X^× J⁻¹`.
pub fn opposite(t: &IndefiniteTriple, x: &CMat) -> CMat {
    t.j_conj(&t.adjoint(x))
}

/// Product for two operators where both factors are usually sparse.
fn sparse_comm(a: &CMat, b: &CMat) -> CMat {
    spmul(a, b) - spmul(b, a)
}

/// `max ‖[π(a), π(b)°]‖` over basis pairs.
pub fn order_zero(t: &IndefiniteTriple) -> f64 {
    let basis = &t.algebra.real_basis;
    let opp: Vec<CMat> = basis.par_iter().map(|b| opposite(t, b)).collect();
    basis
        .par_iter()
        .flat_map_iter(|a| opp.iter().map(move |b| max_abs(&sparse_comm(a, b))))
        .reduce(|| 0.0, f64::max)
}

/// `max ‖[[D, π(a)], π(b)°]‖` over basis pairs.
pub fn first_order(t: &IndefiniteTriple) -> f64 {
    let basis = &t.algebra.real_basis;
    let opp: Vec<CMat> = basis.par_iter().map(|b| opposite(t, b)).collect();
    let da: Vec<CMat> = basis.par_iter().map(|a| sparse_comm(&t.dirac, a)).collect();
    da.par_iter()
        .flat_map_iter(|c| opp.iter().map(move |b| max_abs(&sparse_comm(c, b))))
        .reduce(|| 0.0, f64::max)
}

/// `U = π(u) J π(u) J⁻¹` for a Krein-unitary algebra element.
pub fn gauge_unitary(t: &IndefiniteTriple, u: &[f64]) -> Result<CMat> {
    let pu = t.algebra.element(u)?;
    unitary_from(t, &pu)
}

/// Same as [`gauge_unitary`] for an algebra element already represented.
pub fn unitary_from(t: &IndefiniteTriple, pu: &CMat) -> Result<CMat> {
    let d = defect(&(t.adjoint(pu) * pu), &eye(t.dim()));
    if d > 1e-10 {
        return Err(Error::NotUnitary { defect: d });
    }
    Ok(pu * t.j_conj(pu))
}

/// `D + ω + J ω J⁻¹` after checking that `ω` is a self-adjoint one-form.
pub fn fluctuate(t: &IndefiniteTriple, omega: &CMat) -> Result<CMat> {
    let forms = ncforms::one_forms(t);
    fluctuate_in(t, omega, &forms)
}

/// [`fluctuate`] against a precomputed one-form space.
pub fn fluctuate_in(t: &IndefiniteTriple, omega: &CMat, forms: &ncforms::FormSpace) -> Result<CMat> {
    if omega.shape() != t.dirac.shape() {
        return Err(Error::DimensionMismatch("one-form shape differs from the Dirac operator".into()));
    }
    let sa = defect(&t.adjoint(omega), omega);
    let membership = forms.membership_residual(omega);
    let residual = sa.max(membership);
    if residual > 1e-8 {
        return Err(Error::NotOneForm { residual });
    }
    Ok(&t.dirac + omega + t.j_conj(omega))
}

/// The transformed one-form `u ω u^× + π(u)[D, π(u^×)]`.
pub fn gauge_transform_one_form(t: &IndefiniteTriple, pu: &CMat, omega: &CMat) -> CMat {
    let ux = t.adjoint(pu);
    pu * omega * &ux + pu * linalg::comm(&t.dirac, &ux)
}

/// Scalar identity in the algebra, when `1` is the first basis element.
pub fn unit_coeffs(t: &IndefiniteTriple) -> Vec<f64> {
    let mut c = vec![0.0; t.algebra.len()];
    if let Some(k) = t.algebra.real_basis.iter().position(|m| linalg::approx_eq(m, &eye(t.dim()))) {
        c[k] = 1.0;
    }
    c
}

#[doc(hidden)]
pub fn identity_like(n: usize) -> CMat {
    eye(n).map(|z| z * ONE)
}
