//! Graded tensor products in the non-graded matrix representation.
//!
//! A graded operator `T₁ ⊗̂ T₂` is stored as `T₁ χ₁^{|T₂|} ⊗ T₂`, so the
//! second factor's generators become `χ₁ ⊗ γ`.

use serde::Serialize;

use crate::clifford::{self, CliffordModule, Signature};
use crate::error::{Error, Result};
use crate::ist::{self, FiniteAlgebra, IndefiniteTriple};
use crate::kspace::{self, AntilinearOperator, KreinForm};
use crate::linalg::{self, eye, i_pow, kron, CMat};

/// `β = (i^{σ₂} χ₂)^{σ₁}`, twisting the second factor's product.
#[derive(Debug, Clone, Serialize)]
pub struct BetaTwist {
    #[serde(with = "crate::serde_cx::mat")]
    pub matrix: CMat,
}

impl BetaTwist {
    pub fn new(sigma1: u8, sigma2: u8, chi2: &CMat) -> Self {
        let matrix = if sigma1 % 2 == 0 { eye(chi2.nrows()) } else { chi2.map(|z| z * i_pow(sigma2 as i64)) };
        Self { matrix }
    }

    pub fn inverse(&self) -> CMat {
        self.matrix.clone().try_inverse().expect("β squares to ±1")
    }
}

/// `0` when `J` commutes with `χ`, `1` when it anticommutes.
fn j_parity(j: &AntilinearOperator, chi: &CMat) -> u8 {
    let (sign, _) = clifford::sign_between(&(&j.mat * chi.conjugate()), &(chi * &j.mat));
    if sign == 1 {
        0
    } else {
        1
    }
}

/// Module of `Cl(q₁+q₂, p₁+p₂)` built from two factors.
pub fn tensor_modules(m1: &CliffordModule, m2: &CliffordModule) -> Result<CliffordModule> {
    let sig = Signature::new(m1.sig.q + m2.sig.q, m1.sig.p + m2.sig.p)?;
    let id2 = eye(m2.dim);
    let left: Vec<CMat> = m1.gammas.iter().map(|g| kron(g, &id2)).collect();
    let right: Vec<CMat> = m2.gammas.iter().map(|g| kron(&m1.chi, g)).collect();
    let (q1, q2) = (m1.sig.q, m2.sig.q);
    let mut gammas = Vec::with_capacity(sig.d());
    gammas.extend(left[..q1].iter().cloned());
    gammas.extend(right[..q2].iter().cloned());
    gammas.extend(left[q1..].iter().cloned());
    gammas.extend(right[q2..].iter().cloned());

    let chi = kron(&m1.chi, &m2.chi);
    let second = if q1 % 2 == 0 { m2.gram_robinson.gram() } else { m2.gram_antirobinson.gram() };
    let gram = kron(m1.gram_robinson.gram(), second);

    let half = (m1.sig.p as i64 - m1.sig.q as i64).div_euclid(2);
    let (jp2, jm2) = if half.rem_euclid(2) == 0 { (&m2.jplus, &m2.jminus) } else { (&m2.jminus, &m2.jplus) };
    let jplus = AntilinearOperator::new(kron(&m1.jplus.mat, &jp2.mat));
    let jminus = AntilinearOperator::new(kron(&m1.jminus.mat, &jm2.mat));
    clifford::assemble(sig, gammas, chi, gram, jplus, Some(jminus))
}

/// Product triple `T₁ ⊗ T₂`.
pub fn tensor_ist(t1: &IndefiniteTriple, t2: &IndefiniteTriple) -> Result<IndefiniteTriple> {
    for (name, t) in [("first", t1), ("second", t2)] {
        let rep = ist::check_axioms(t);
        if !rep.pass() {
            return Err(Error::AxiomFailure(format!("{name} factor: {}", rep.failures().join(", "))));
        }
    }
    let (n1, n2) = (t1.dim(), t2.dim());
    let beta = BetaTwist::new(t1.sigma, t2.sigma, &t2.chi);
    let gram = KreinForm::new(kron(t1.gram.gram(), &(t2.gram.gram() * &beta.matrix)))?;
    let chi = kron(&t1.chi, &t2.chi);
    let dirac = kron(&t1.dirac, &eye(n2)) + kron(&t1.chi, &t2.dirac);
    let j2 = if j_parity(&t1.j, &t1.chi) == 0 { t2.j.mat.clone() } else { &t2.j.mat * t2.chi.conjugate() };
    let j = AntilinearOperator::new(kron(&t1.j.mat, &j2));

    let a1 = &t1.algebra;
    let a2 = &t2.algebra;
    let mut basis = Vec::with_capacity(a1.len() * a2.len());
    let mut inv = Vec::with_capacity(basis.capacity());
    let mut labels = Vec::with_capacity(basis.capacity());
    for k in 0..a1.len() {
        for l in 0..a2.len() {
            basis.push(kron(&a1.real_basis[k], &a2.real_basis[l]));
            inv.push(kron(&a1.involution_images[k], &a2.involution_images[l]));
            labels.push(format!("{}*{}", a1.labels[k], a2.labels[l]));
        }
    }
    let algebra = FiniteAlgebra::new(basis, inv, labels)?;
    let mut t = IndefiniteTriple::new(gram, chi, j, dirac, algebra)?;
    debug_assert_eq!(t.dim(), n1 * n2);
    if let (Some(e1), Some(e2)) = (&t1.eta, &t2.eta) {
        t.eta = Some(tensor_eta(e1, e2, t1, t2)?);
    }
    Ok(t)
}

/// The product fundamental symmetry `η₁ ⊗ β⁻¹η₂`.
pub fn tensor_eta(eta1: &CMat, eta2: &CMat, t1: &IndefiniteTriple, t2: &IndefiniteTriple) -> Result<CMat> {
    for (eta, t, name) in [(eta1, t1, "first"), (eta2, t2, "second")] {
        let rep = kspace::is_fundamental_symmetry(eta, &t.gram);
        if !rep.ok {
            return Err(Error::NotFundamentalSymmetry(format!("{name} factor: {}", rep.reason.unwrap_or_default())));
        }
        let (_, hom) = clifford::sign_between(&(&t.chi * eta), &(eta * &t.chi));
        let (_, jrel) = clifford::sign_between(&(&t.j.mat * eta.conjugate()), &(eta * &t.j.mat));
        if hom > 1e-10 || jrel > 1e-10 {
            return Err(Error::NotFundamentalSymmetry(format!("{name} factor is not privileged")));
        }
    }
    let beta = BetaTwist::new(t1.sigma, t2.sigma, &t2.chi);
    let eta = kron(eta1, &(beta.inverse() * eta2));
    let gram = KreinForm::new(kron(t1.gram.gram(), &(t2.gram.gram() * &beta.matrix)))?;
    let rep = kspace::is_fundamental_symmetry(&eta, &gram);
    if !rep.ok {
        return Err(Error::NotFundamentalSymmetry(rep.reason.unwrap_or_default()));
    }
    Ok(eta)
}

/// `ε = ½ ε₁ε₂(1 + ε₁″ + ε₂″ − ε₁″ε₂″)`.
pub fn product_eps(eps1: i8, eps1pp: i8, eps2: i8, eps2pp: i8) -> i8 {
    let v = eps1 as i32 * eps2 as i32 * (1 + eps1pp as i32 + eps2pp as i32 - (eps1pp as i32 * eps2pp as i32));
    (v / 2) as i8
}

/// Non-graded image of the graded product of homogeneous operators.
pub fn graded_product(t1: &CMat, parity2: u8, chi1: &CMat, t2: &CMat) -> CMat {
    let left = if parity2 % 2 == 0 { t1.clone() } else { t1 * chi1 };
    kron(&left, t2)
}

#[doc(hidden)]
pub fn identity_triple(n: usize) -> IndefiniteTriple {
    IndefiniteTriple::new(
        KreinForm::euclidean(n),
        eye(n),
        AntilinearOperator::conjugation(n),
        linalg::zeros(n, n),
        FiniteAlgebra::scalars(n),
    )
    .expect("trivial triple is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{build, expected_dims, extract_signs, verify_relations, Convention};
    use crate::dims::{self, sign_a};
    use crate::ist::{check_axioms, triple_dims};
    use crate::testkit::{random_cmat, rng};

    fn sig(q: usize, p: usize) -> Signature {
        Signature::new(q, p).unwrap()
    }

    #[test]
    fn cl11_times_cl02_matches_direct_cl13() {
        let t = tensor_modules(&build(sig(1, 1)).unwrap(), &build(sig(0, 2)).unwrap()).unwrap();
        assert_eq!(t.sig, sig(1, 3));
        assert!(verify_relations(&t) < 1e-12);
        let direct = build(sig(1, 3)).unwrap();
        for conv in Convention::ALL {
            assert_eq!(extract_signs(&t, conv).unwrap().signs, extract_signs(&direct, conv).unwrap().signs);
        }
    }

    #[test]
    fn even_first_factor_uses_plain_gram() {
        let m = build(sig(0, 2)).unwrap();
        let t = tensor_modules(&m, &m).unwrap();
        assert!(linalg::approx_eq(t.gram_robinson.gram(), &kron(m.gram_robinson.gram(), m.gram_robinson.gram())));
    }

    #[test]
    fn all_module_pairs_are_additive() {
        let sigs = Signature::all_up_to(6);
        for s1 in &sigs {
            for s2 in &sigs {
                if s1.d() + s2.d() > 8 {
                    continue;
                }
                let m1 = build(*s1).unwrap();
                let m2 = build(*s2).unwrap();
                let t = tensor_modules(&m1, &m2).unwrap();
                assert!(verify_relations(&t) < 1e-12, "{s1} x {s2}");
                // Generators are Robinson self-adjoint.
                for g in &t.gammas {
                    let adj = kspace::krein_adjoint(g, &t.gram_robinson).unwrap();
                    assert!(linalg::approx_eq(&adj, g), "{s1} x {s2}");
                }
                for conv in Convention::ALL {
                    let got = dims::dims_from_signs(extract_signs(&t, conv).unwrap().signs);
                    assert_eq!(got, expected_dims(t.sig, conv), "{s1} x {s2} {conv:?}");
                }
            }
        }
    }

    fn clifford_triple(q: usize, p: usize, conv: Convention) -> IndefiniteTriple {
        IndefiniteTriple::from_clifford(&build(sig(q, p)).unwrap(), conv).unwrap()
    }

    #[test]
    fn triple_dims_add() {
        let combos = [
            ((3, 1), Convention::West),
            ((1, 3), Convention::East),
            ((2, 2), Convention::South),
            ((0, 2), Convention::North),
            ((1, 1), Convention::West),
            ((0, 4), Convention::East),
        ];
        for &((q1, p1), c1) in &combos {
            for &((q2, p2), c2) in &combos {
                let t1 = clifford_triple(q1, p1, c1);
                let t2 = clifford_triple(q2, p2, c2);
                let t = tensor_ist(&t1, &t2).unwrap();
                let rep = check_axioms(&t);
                assert!(rep.pass(), "{:?}", rep.failures());
                let (n1, m1) = triple_dims(&t1).unwrap();
                let (n2, m2) = triple_dims(&t2).unwrap();
                assert_eq!(triple_dims(&t).unwrap(), (n1 + n2, m1 + m2));
                let s1 = clifford::signs_of(&t1.gram, &t1.chi, &t1.j).unwrap().signs;
                let s2 = clifford::signs_of(&t2.gram, &t2.chi, &t2.j).unwrap().signs;
                let eps = product_eps(s1.eps, s1.eps2, s2.eps, s2.eps2);
                assert_eq!(eps, sign_a((n1 + n2).value() as i64).unwrap());
                if let Some(eta) = &t.eta {
                    assert!(kspace::is_fundamental_symmetry(eta, &t.gram).ok);
                }
            }
        }
    }

    #[test]
    fn trivial_factor_keeps_dims() {
        let t = clifford_triple(3, 1, Convention::West);
        let p = tensor_ist(&t, &identity_triple(1)).unwrap();
        assert_eq!(triple_dims(&p).unwrap(), triple_dims(&t).unwrap());
    }

    #[test]
    fn beta_phase_for_two_odd_products() {
        let t1 = clifford_triple(1, 1, Convention::West);
        let t2 = clifford_triple(3, 1, Convention::West);
        assert_eq!((t1.sigma, t2.sigma), (1, 1));
        let eta = tensor_eta(t1.eta.as_ref().unwrap(), t2.eta.as_ref().unwrap(), &t1, &t2).unwrap();
        let n = eta.nrows();
        assert!(linalg::approx_eq(&(&eta * &eta), &eye(n)));
        let beta = BetaTwist::new(1, 1, &t2.chi);
        assert!(beta.matrix.iter().any(|z| z.im.abs() > 0.5));
    }

    #[test]
    fn even_first_product_has_plain_eta() {
        let t1 = clifford_triple(2, 2, Convention::South);
        let t2 = clifford_triple(3, 1, Convention::West);
        assert_eq!(t1.sigma, 0);
        let (e1, e2) = (t1.eta.clone().unwrap(), t2.eta.clone().unwrap());
        assert!(linalg::approx_eq(&tensor_eta(&e1, &e2, &t1, &t2).unwrap(), &kron(&e1, &e2)));
    }

    #[test]
    fn product_adjoint_is_graded() {
        let mut r = rng(21);
        for (c1, c2) in [((1, 1), (3, 1)), ((2, 2), (1, 3)), ((1, 3), (0, 2))] {
            let t1 = clifford_triple(c1.0, c1.1, Convention::West);
            let t2 = clifford_triple(c2.0, c2.1, Convention::West);
            let t = tensor_ist(&t1, &t2).unwrap();
            for p1 in 0..2u8 {
                for p2 in 0..2u8 {
                    let homog = |chi: &CMat, x: CMat, p: u8| {
                        let s = if p == 0 { 1.0 } else { -1.0 };
                        (&x + (chi * &x * chi).scale(s)).scale(0.5)
                    };
                    let x1 = homog(&t1.chi, random_cmat(&mut r, t1.dim(), t1.dim()), p1);
                    let x2 = homog(&t2.chi, random_cmat(&mut r, t2.dim(), t2.dim()), p2);
                    let prod = graded_product(&x1, p2, &t1.chi, &x2);
                    let lhs = t.adjoint(&prod);
                    let sign = if p1 * p2 % 2 == 0 { 1.0 } else { -1.0 };
                    let rhs = graded_product(&t1.adjoint(&x1), p2, &t1.chi, &t2.adjoint(&x2)).scale(sign);
                    assert!(linalg::rel_dist(&lhs, &rhs) < 1e-10, "{c1:?} {c2:?} {p1} {p2}");
                }
            }
        }
    }

    #[test]
    fn oversized_product_rejected() {
        let m = build(sig(4, 4)).unwrap();
        assert!(tensor_modules(&m, &build(sig(2, 4)).unwrap()).is_err());
    }
}
