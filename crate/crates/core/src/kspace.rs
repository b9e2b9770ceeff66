//! Finite-dimensional Krein spaces: indefinite adjoints, antilinear operators,
//! fundamental symmetries and projections for real bilinear products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, approx_eq, frob, hermitian_eigen, CMat, CVec, COND_LIMIT};

/// A nondegenerate Hermitian form `(ψ, φ) = ψ† H φ`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KreinForm {
    #[serde(with = "crate::serde_cx::mat")]
    gram: CMat,
    #[serde(skip)]
    inverse: Option<CMat>,
    cond: f64,
}

impl KreinForm {
    pub fn new(gram: CMat) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "gram must be square, got {}x{}",
                gram.nrows(),
                gram.ncols()
            )));
        }
        if !linalg::is_hermitian(&gram) {
            return Err(Error::InvalidInput(format!(
                "gram is not Hermitian (defect {:.3e})",
                frob(&(&gram - gram.adjoint()))
            )));
        }
        let cond = linalg::condition_number(&gram);
        let (inverse, cond) =
            linalg::inverse_checked(&gram, COND_LIMIT).ok_or(Error::SingularGram { cond })?;
        Ok(Self { gram, inverse: Some(inverse), cond })
    }

    /// The Euclidean (Hilbert) form on `C^n`.
    pub fn euclidean(n: usize) -> Self {
        Self { gram: linalg::eye(n), inverse: Some(linalg::eye(n)), cond: 1.0 }
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn condition_number(&self) -> f64 {
        self.cond
    }

    pub fn inverse(&self) -> CMat {
        match &self.inverse {
            Some(inv) => inv.clone(),
            None => self.gram.clone().try_inverse().expect("gram was checked invertible"),
        }
    }

    pub fn pair(&self, psi: &CVec, phi: &CVec) -> num_complex::Complex64 {
        (psi.adjoint() * &self.gram * phi)[(0, 0)]
    }

    fn check_dim(&self, t: &CMat, what: &str) -> Result<()> {
        if t.nrows() != self.dim() || t.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{what} is {}x{}, form has dimension {}",
                t.nrows(),
                t.ncols(),
                self.dim()
            )));
        }
        Ok(())
    }
}

/// Krein adjoint `T^× = H⁻¹ T† H`.
pub fn krein_adjoint(t: &CMat, k: &KreinForm) -> Result<CMat> {
    k.check_dim(t, "operator")?;
    Ok(k.inverse() * t.adjoint() * k.gram())
}

/// An antilinear map `ψ ↦ M conj(ψ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntilinearOperator {
    #[serde(with = "crate::serde_cx::mat")]
    pub mat: CMat,
}

impl AntilinearOperator {
    pub fn new(mat: CMat) -> Self {
        Self { mat }
    }

    /// Plain complex conjugation on `C^n`.
    pub fn conjugation(n: usize) -> Self {
        Self { mat: linalg::eye(n) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn apply(&self, psi: &CVec) -> CVec {
        &self.mat * psi.conjugate()
    }

    /// `(M₁∘CC)(M₂∘CC) = M₁ conj(M₂)`, a linear operator.
    pub fn compose(&self, other: &AntilinearOperator) -> CMat {
        &self.mat * other.mat.conjugate()
    }

    pub fn square(&self) -> CMat {
        self.compose(self)
    }

    /// `L ∘ (M∘CC)`, still antilinear.
    pub fn left_mul(&self, l: &CMat) -> AntilinearOperator {
        AntilinearOperator { mat: l * &self.mat }
    }

    /// `(M∘CC) ∘ L = (M conj(L))∘CC`.
    pub fn right_mul(&self, l: &CMat) -> AntilinearOperator {
        AntilinearOperator { mat: &self.mat * l.conjugate() }
    }

    pub fn scale(&self, c: num_complex::Complex64) -> AntilinearOperator {
        AntilinearOperator { mat: self.mat.map(|z| z * c) }
    }

    pub fn inverse(&self) -> Result<AntilinearOperator> {
        let inv = self
            .mat
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("antilinear operator is singular".into()))?;
        Ok(AntilinearOperator { mat: inv.conjugate() })
    }

    /// The linear operator `K A K⁻¹ = M conj(A) M⁻¹`.
    pub fn conjugate_op(&self, a: &CMat) -> Result<CMat> {
        let inv = self
            .mat
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("antilinear operator is singular".into()))?;
        Ok(&self.mat * a.conjugate() * inv)
    }

    pub fn approx_eq(&self, other: &AntilinearOperator) -> bool {
        approx_eq(&self.mat, &other.mat)
    }
}

/// The unique antilinear `K^×` with `(ψ, Kφ) = conj((K^× ψ, φ))`:
/// its matrix is `H⁻¹ Mᵀ conj(H)`.
pub fn antilinear_adjoint(kop: &AntilinearOperator, k: &KreinForm) -> Result<AntilinearOperator> {
    k.check_dim(&kop.mat, "antilinear operator")?;
    Ok(AntilinearOperator { mat: k.inverse() * kop.mat.transpose() * k.gram().conjugate() })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FundamentalSymmetryReport {
    pub ok: bool,
    pub involution_defect: f64,
    pub self_adjoint_defect: f64,
    /// Smallest eigenvalue of the Hermitian part of `Hη`.
    pub min_eigenvalue: f64,
    pub reason: Option<String>,
}

/// Checks `η² = 1`, `η^× = η` and positivity of `(·, η·)`.
pub fn is_fundamental_symmetry(eta: &CMat, k: &KreinForm) -> FundamentalSymmetryReport {
    let fail = |reason: String| FundamentalSymmetryReport {
        ok: false,
        involution_defect: f64::NAN,
        self_adjoint_defect: f64::NAN,
        min_eigenvalue: f64::NAN,
        reason: Some(reason),
    };
    if let Err(e) = k.check_dim(eta, "eta") {
        return fail(e.to_string());
    }
    let n = k.dim();
    let involution_defect = linalg::rel_dist(&(eta * eta), &linalg::eye(n));
    let adj = k.inverse() * eta.adjoint() * k.gram();
    let self_adjoint_defect = linalg::rel_dist(&adj, eta);
    let he = k.gram() * eta;
    let herm = (&he + he.adjoint()).scale(0.5);
    let (vals, _) = hermitian_eigen(&herm);
    let min_eigenvalue = vals.first().copied().unwrap_or(f64::NAN);
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let mut reason = None;
    if involution_defect > linalg::REL_TOL {
        reason = Some(format!("eta^2 != 1 (defect {involution_defect:.3e})"));
    } else if self_adjoint_defect > linalg::REL_TOL {
        reason = Some(format!("eta is not Krein self-adjoint (defect {self_adjoint_defect:.3e})"));
    } else if min_eigenvalue <= linalg::REL_TOL * scale {
        reason = Some(format!("(., eta .) is not positive definite (min eigenvalue {min_eigenvalue:.3e})"));
    }
    FundamentalSymmetryReport {
        ok: reason.is_none(),
        involution_defect,
        self_adjoint_defect,
        min_eigenvalue,
        reason,
    }
}

/// Hermitian square root and inverse square root of a positive definite matrix.
fn sqrt_pos(p: &CMat) -> (CMat, CMat) {
    let (vals, vecs) = hermitian_eigen(p);
    let s = linalg::diag_real(&vals.iter().map(|v| v.sqrt()).collect::<Vec<_>>());
    let si = linalg::diag_real(&vals.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>());
    (&vecs * s * vecs.adjoint(), &vecs * si * vecs.adjoint())
}

/// The Krein-unitary `U = (ην)^{1/2}` with `ν = U^× η U`, positive for `(·, η·)`.
pub fn relate_fundamental_symmetries(eta: &CMat, nu: &CMat, k: &KreinForm) -> Result<CMat> {
    for (name, m) in [("eta", eta), ("nu", nu)] {
        let rep = is_fundamental_symmetry(m, k);
        if !rep.ok {
            return Err(Error::NotFundamentalSymmetry(format!(
                "{name}: {}",
                rep.reason.unwrap_or_default()
            )));
        }
    }
    // ην is self-adjoint and positive for the Hilbert product <x,y> = x† (Hη) y.
    // Conjugate by (Hη)^{1/2} to a Hermitian positive matrix, take its root, conjugate back.
    let he = k.gram() * eta;
    let p = (&he + he.adjoint()).scale(0.5);
    let (s, s_inv) = sqrt_pos(&p);
    let a = eta * nu;
    let b = &s * &a * &s_inv;
    let b = (&b + b.adjoint()).scale(0.5);
    let (rb, _) = sqrt_pos(&b);
    Ok(&s_inv * rb * &s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectionMode {
    /// `B(S,T) = Re tr(ϖ S† ϖ T)`, real coefficients.
    Real,
    /// `B(S,T) = tr(ϖ S† ϖ T)`, complex coefficients.
    Hermitian,
}

/// `tr(ϖ S† ϖ T)`.
pub fn weighted_trace(s: &CMat, t: &CMat, weight: &CMat) -> num_complex::Complex64 {
    frobenius_inner(&weighted_image(s, weight), t)
}

/// `ϖSϖ`, so that `tr(ϖS†ϖT) = <ϖSϖ, T>_F` for Hermitian `ϖ`.
pub fn weighted_image(s: &CMat, weight: &CMat) -> CMat {
    linalg::spmul(&linalg::spmul(weight, s), weight)
}

/// `<A, B>_F = tr(A†B)`.
pub fn frobenius_inner(a: &CMat, b: &CMat) -> num_complex::Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub projection: CMat,
    pub residual: CMat,
    pub gram_condition: f64,
}

/// Orthogonal projection of `x` onto the span of `span` for the weighted trace product.
pub fn real_bilinear_project(
    x: &CMat,
    span: &[CMat],
    weight: &CMat,
    mode: ProjectionMode,
) -> Result<Projection> {
    if span.is_empty() {
        return Err(Error::InvalidInput("projection span is empty".into()));
    }
    for s in span {
        if s.shape() != x.shape() {
            return Err(Error::DimensionMismatch("span element shape differs from X".into()));
        }
    }
    let k = span.len();
    let images: Vec<CMat> = span.iter().map(|s| weighted_image(s, weight)).collect();
    let (coeffs, cond): (Vec<num_complex::Complex64>, f64) = match mode {
        ProjectionMode::Real => {
            let g = nalgebra::DMatrix::<f64>::from_fn(k, k, |i, j| {
                frobenius_inner(&images[i], &span[j]).re
            });
            let b = nalgebra::DVector::<f64>::from_fn(k, |i, _| frobenius_inner(&images[i], x).re);
            let cond = real_condition(&g);
            if !cond.is_finite() || cond > COND_LIMIT {
                return Err(Error::DegenerateProjection { cond });
            }
            let c = g.lu().solve(&b).ok_or(Error::DegenerateProjection { cond })?;
            (c.iter().map(|&v| linalg::cx(v, 0.0)).collect(), cond)
        }
        ProjectionMode::Hermitian => {
            let g = CMat::from_fn(k, k, |i, j| frobenius_inner(&images[i], &span[j]));
            let b = CVec::from_fn(k, |i, _| frobenius_inner(&images[i], x));
            let cond = linalg::condition_number(&g);
            if !cond.is_finite() || cond > COND_LIMIT {
                return Err(Error::DegenerateProjection { cond });
            }
            let c = g.lu().solve(&b).ok_or(Error::DegenerateProjection { cond })?;
            (c.iter().copied().collect(), cond)
        }
    };
    let mut projection = linalg::zeros(x.nrows(), x.ncols());
    for (c, s) in coeffs.iter().zip(span) {
        projection += s.map(|z| z * c);
    }
    let residual = x - &projection;
    Ok(Projection { projection, residual, gram_condition: cond })
}

pub(crate) fn real_condition(g: &nalgebra::DMatrix<f64>) -> f64 {
    let sv = g.singular_values();
    let hi = sv.iter().copied().fold(0.0, f64::max);
    let lo = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if lo > 0.0 {
        hi / lo
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cx, diag_real, eye, from_rows_real, I};
    use crate::testkit::{random_cmat, random_hermitian, rng};
    use proptest::prelude::*;

    fn minkowski() -> KreinForm {
        KreinForm::new(diag_real(&[1.0, -1.0])).unwrap()
    }

    #[test]
    fn adjoint_examples() {
        let k = minkowski();
        let t = from_rows_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let expected = from_rows_real(&[&[0.0, 0.0], &[-1.0, 0.0]]);
        assert!(approx_eq(&krein_adjoint(&t, &k).unwrap(), &expected));
        assert!(approx_eq(&krein_adjoint(&eye(2), &k).unwrap(), &eye(2)));
        let mut r = rng(1);
        let a = random_cmat(&mut r, 3, 3);
        assert!(approx_eq(&krein_adjoint(&a, &KreinForm::euclidean(3)).unwrap(), &a.adjoint()));
        assert!(krein_adjoint(&eye(3), &k).is_err());
    }

    #[test]
    fn singular_gram_rejected() {
        let err = KreinForm::new(diag_real(&[1.0, 0.0])).unwrap_err();
        assert!(matches!(err, Error::SingularGram { .. }));
    }

    #[test]
    fn antilinear_adjoint_defining_identity() {
        let mut r = rng(7);
        for gram in [eye(3), random_hermitian(&mut r, 3)] {
            let k = KreinForm::new(gram).unwrap();
            let kop = AntilinearOperator::new(random_cmat(&mut r, 3, 3));
            let adj = antilinear_adjoint(&kop, &k).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    // Basis vectors with a complex phase to exercise antilinearity.
                    let mut psi = CVec::zeros(3);
                    psi[i] = cx(0.3, 0.8);
                    let mut phi = CVec::zeros(3);
                    phi[j] = cx(-1.1, 0.4);
                    let lhs = k.pair(&psi, &kop.apply(&phi));
                    let rhs = k.pair(&adj.apply(&psi), &phi).conj();
                    assert!((lhs - rhs).norm() < 1e-10);
                }
            }
        }
        let cc = AntilinearOperator::conjugation(2);
        assert!(antilinear_adjoint(&cc, &KreinForm::euclidean(2)).unwrap().approx_eq(&cc));
        let m = random_cmat(&mut r, 2, 2);
        let adj = antilinear_adjoint(&AntilinearOperator::new(m.clone()), &KreinForm::euclidean(2)).unwrap();
        assert!(approx_eq(&adj.mat, &m.transpose()));
    }

    #[test]
    fn fundamental_symmetry_examples() {
        assert!(is_fundamental_symmetry(&eye(2), &KreinForm::euclidean(2)).ok);
        let k = minkowski();
        assert!(is_fundamental_symmetry(&diag_real(&[1.0, -1.0]), &k).ok);
        let bad = is_fundamental_symmetry(&eye(2), &k);
        assert!(!bad.ok);
        assert!(bad.reason.unwrap().contains("positive"));
    }

    fn boosted(rap: f64) -> (KreinForm, CMat, CMat) {
        // Gram diag(-1,1); η = diag(-1,1); ν = B η B⁻¹ with a Lorentz boost B.
        let k = KreinForm::new(diag_real(&[-1.0, 1.0])).unwrap();
        let eta = diag_real(&[-1.0, 1.0]);
        let (c, s) = (rap.cosh(), rap.sinh());
        let b = from_rows_real(&[&[c, s], &[s, c]]);
        let binv = from_rows_real(&[&[c, -s], &[-s, c]]);
        let nu = &b * &eta * &binv;
        (k, eta, nu)
    }

    #[test]
    fn relate_boosted_symmetries() {
        let (k, eta, nu) = boosted(0.7);
        assert!(is_fundamental_symmetry(&nu, &k).ok);
        let u = relate_fundamental_symmetries(&eta, &nu, &k).unwrap();
        let ux = krein_adjoint(&u, &k).unwrap();
        assert!(approx_eq(&(&ux * &eta * &u), &nu));
        assert!(approx_eq(&(&ux * &u), &eye(2)));
        assert!((u.determinant() - cx(1.0, 0.0)).norm() < 1e-10);
        // A pure boost: real symmetric with equal diagonal entries.
        assert!(u.iter().all(|z| z.im.abs() < 1e-12));
        assert!((u[(0, 1)] - u[(1, 0)]).norm() < 1e-12);
        assert!(approx_eq(&relate_fundamental_symmetries(&eta, &eta, &k).unwrap(), &eye(2)));
    }

    #[test]
    fn relate_swapped_basis_symmetries() {
        // C^{1,1} in the light-cone basis: gram [[0,1],[1,0]].
        let k = KreinForm::new(from_rows_real(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        let eta = from_rows_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let nu = from_rows_real(&[&[0.0, 2.0], &[0.5, 0.0]]);
        assert!(is_fundamental_symmetry(&nu, &k).ok);
        let u = relate_fundamental_symmetries(&eta, &nu, &k).unwrap();
        let ux = krein_adjoint(&u, &k).unwrap();
        assert!(approx_eq(&(&ux * &eta * &u), &nu));
        let p = k.gram() * &eta * &u;
        let (vals, _) = hermitian_eigen(&((&p + p.adjoint()).scale(0.5)));
        assert!(vals.iter().all(|&v| v > 0.0));
        assert!(relate_fundamental_symmetries(&eye(2), &nu, &k).is_err());
    }

    #[test]
    fn projection_trivial_cases() {
        let w = eye(2);
        let s = vec![diag_real(&[1.0, 0.0])];
        let p = real_bilinear_project(&diag_real(&[3.0, 0.0]), &s, &w, ProjectionMode::Real).unwrap();
        assert!(frob(&p.residual) < 1e-12);
        let p = real_bilinear_project(&diag_real(&[0.0, 2.0]), &s, &w, ProjectionMode::Real).unwrap();
        assert!(frob(&p.projection) < 1e-12);
        // Real mode keeps only real multiples: iS is orthogonal to S.
        let x = s[0].map(|z| z * I);
        let p = real_bilinear_project(&x, &s, &w, ProjectionMode::Real).unwrap();
        assert!(frob(&p.projection) < 1e-12);
        let p = real_bilinear_project(&x, &s, &w, ProjectionMode::Hermitian).unwrap();
        assert!(frob(&p.residual) < 1e-12);
        let dup = vec![s[0].clone(), s[0].clone()];
        let err = real_bilinear_project(&x, &dup, &w, ProjectionMode::Real).unwrap_err();
        assert!(err.to_string().contains("degenerate projection product"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn adjoint_is_involutive_antihomomorphism(seed in any::<u64>()) {
            let mut r = rng(seed);
            let k = KreinForm::new(random_hermitian(&mut r, 4)).unwrap();
            let s = random_cmat(&mut r, 4, 4);
            let t = random_cmat(&mut r, 4, 4);
            let st = krein_adjoint(&(&s * &t), &k).unwrap();
            let ts = krein_adjoint(&t, &k).unwrap() * krein_adjoint(&s, &k).unwrap();
            prop_assert!(linalg::rel_dist(&st, &ts) < 1e-8);
            let back = krein_adjoint(&krein_adjoint(&s, &k).unwrap(), &k).unwrap();
            prop_assert!(linalg::rel_dist(&back, &s) < 1e-8);
        }

        #[test]
        fn hilbert_adjoint_through_eta(seed in any::<u64>()) {
            // gram diag(1,1,-1,-1) conjugated by a random unitary, η = the same signature.
            let mut r = rng(seed);
            let q = random_cmat(&mut r, 4, 4).qr().q();
            let sig = diag_real(&[1.0, 1.0, -1.0, -1.0]);
            let h = &q * &sig * q.adjoint();
            let k = KreinForm::new(h.clone()).unwrap();
            let eta = h.clone();
            prop_assert!(is_fundamental_symmetry(&eta, &k).ok);
            let t = random_cmat(&mut r, 4, 4);
            // Hilbert adjoint for <x,y> = x† H η y.
            let g = &h * &eta;
            let dagger_eta = g.clone().try_inverse().unwrap() * t.adjoint() * &g;
            let via = &eta * krein_adjoint(&t, &k).unwrap() * &eta;
            prop_assert!(linalg::rel_dist(&dagger_eta, &via) < 1e-9);
        }

        #[test]
        fn projection_idempotent_and_orthogonal(seed in any::<u64>()) {
            let mut r = rng(seed);
            let span: Vec<CMat> = (0..3).map(|_| random_cmat(&mut r, 3, 3)).collect();
            let w = eye(3);
            let x = random_cmat(&mut r, 3, 3);
            let p = real_bilinear_project(&x, &span, &w, ProjectionMode::Real).unwrap();
            for s in &span {
                prop_assert!(weighted_trace(s, &p.residual, &w).re.abs() < 1e-9 * frob(&x).powi(2).max(1.0));
            }
            let pp = real_bilinear_project(&p.projection, &span, &w, ProjectionMode::Real).unwrap();
            prop_assert!(linalg::rel_dist(&pp.projection, &p.projection) < 1e-8);
        }
    }
}
