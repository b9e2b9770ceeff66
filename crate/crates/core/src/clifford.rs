//! Explicit spinor modules of the even Clifford algebras `Cl(q,p)` built on
//! fermionic Fock spaces, with chirality, Robinson and anti-Robinson products,
//! charge conjugations and fundamental symmetries.

use serde::Serialize;

use crate::dims::{self, SignQuadruple};
use crate::error::{Error, Result};
use crate::kspace::{self, AntilinearOperator, KreinForm};
use crate::linalg::{self, cx, eye, i_pow, max_abs, zeros, CMat, I, ONE, ZERO};

pub use crate::dims::Cardinal as Convention;

/// Largest total dimension accepted by [`build`].
pub const MAX_DIM: usize = 12;

/// `q` negative and `p` positive directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub q: usize,
    pub p: usize,
}

impl Signature {
    pub fn new(q: usize, p: usize) -> Result<Self> {
        let d = q + p;
        if d % 2 != 0 {
            return Err(Error::UnsupportedSignature { q, p, reason: "odd total dimension" });
        }
        if d < 2 {
            return Err(Error::UnsupportedSignature { q, p, reason: "dimension must be at least 2" });
        }
        if d > MAX_DIM {
            return Err(Error::UnsupportedSignature { q, p, reason: "dimension above 12" });
        }
        Ok(Self { q, p })
    }

    pub fn d(&self) -> usize {
        self.q + self.p
    }

    pub fn is_even_even(&self) -> bool {
        self.q % 2 == 0
    }

    /// Diagonal of the metric: `-1` on the first `q` directions, `+1` after.
    pub fn metric(&self) -> Vec<f64> {
        (0..self.d()).map(|a| if a < self.q { -1.0 } else { 1.0 }).collect()
    }

    /// Every supported signature with `2 <= q+p <= max_d`.
    pub fn all_up_to(max_d: usize) -> Vec<Signature> {
        let mut out = Vec::new();
        for d in (2..=max_d.min(MAX_DIM)).step_by(2) {
            for q in 0..=d {
                out.push(Signature { q, p: d - q });
            }
        }
        out
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cl({},{})", self.q, self.p)
    }
}

/// A concrete spinor representation with every canonical operator.
#[derive(Debug, Clone, Serialize)]
pub struct CliffordModule {
    pub sig: Signature,
    pub dim: usize,
    #[serde(with = "crate::serde_cx::mat_vec")]
    pub gammas: Vec<CMat>,
    #[serde(with = "crate::serde_cx::mat")]
    pub chi: CMat,
    #[serde(with = "crate::serde_cx::mat")]
    pub chi_minus: CMat,
    #[serde(with = "crate::serde_cx::mat")]
    pub chi_plus: CMat,
    #[serde(with = "crate::serde_cx::mat")]
    pub eta_plus: CMat,
    #[serde(with = "crate::serde_cx::mat")]
    pub eta_minus: CMat,
    pub gram_robinson: KreinForm,
    pub gram_antirobinson: KreinForm,
    pub jplus: AntilinearOperator,
    pub jminus: AntilinearOperator,
}

/// The raw pieces shared by both constructions (also used for `d = 0`).
struct Raw {
    gammas: Vec<CMat>,
    chi: CMat,
    gram: CMat,
    jplus: CMat,
}

fn popcount(s: usize) -> u32 {
    s.count_ones()
}

/// Fock construction for `q, p` both even, `q + p >= 0`.
fn fock_raw(q: usize, p: usize) -> Raw {
    let n = (q + p) / 2;
    let dim = 1usize << n;
    // Pair i spans a negative plane for i < q/2.
    let eps: Vec<f64> = (0..n).map(|i| if i < q / 2 { -1.0 } else { 1.0 }).collect();
    let weight = |s: usize| -> f64 { (0..n).filter(|&i| s & (1 << i) != 0).map(|i| eps[i]).product() };

    let gram = linalg::diag_real(&(0..dim).map(weight).collect::<Vec<_>>());
    let chi = linalg::diag_real(&(0..dim).map(|s| if popcount(s) % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>());

    let mut gammas = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut cr = zeros(dim, dim);
        for s in 0..dim {
            if s & (1 << i) == 0 {
                let below = popcount(s & ((1 << i) - 1));
                let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
                cr[(s | (1 << i), s)] = cx(sign, 0.0);
            }
        }
        // The Krein adjoint of a creation operator for the Hodge product.
        let ann = cr.adjoint().scale(eps[i]);
        gammas.push(&cr + &ann);
        gammas.push((&ann - &cr).map(|z| z * I));
    }

    let mask = dim - 1;
    let mut jplus = zeros(dim, dim);
    for s in 0..dim {
        let comp = !s & mask;
        let l = popcount(s) as usize;
        // Sign of the permutation listing s ascending, then its complement ascending.
        let mut inversions = 0usize;
        for i in 0..n {
            if s & (1 << i) != 0 {
                inversions += (0..i).filter(|&j| comp & (1 << j) != 0).count();
            }
        }
        let exponent = inversions + l * l.saturating_sub(1) / 2 + q / 2;
        let sign = if exponent % 2 == 0 { 1.0 } else { -1.0 };
        jplus[(comp, s)] = cx(sign * weight(comp), 0.0);
    }

    Raw { gammas, chi, gram, jplus }
}

/// Two copies of the Fock space of `V₂(q-1, p-1)` for `q, p` both odd.
fn odd_odd_raw(q: usize, p: usize) -> Raw {
    let inner = fock_raw(q - 1, p - 1);
    let d2 = inner.chi.nrows();
    let id = eye(d2);
    let block = |a: Option<&CMat>, b: Option<&CMat>, c: Option<&CMat>, d: Option<&CMat>| {
        linalg::block_grid(&[vec![a.cloned(), b.cloned()], vec![c.cloned(), d.cloned()]], d2)
    };
    let f_minus = block(None, Some(&(-&id)), Some(&id), None);
    let f_plus = block(None, Some(&id), Some(&id), None);
    let lift = |g: &CMat| linalg::block_diag(&[g.clone(), -g]);
    let q2 = q - 1;
    let mut gammas = vec![f_minus];
    gammas.extend(inner.gammas[..q2].iter().map(lift));
    gammas.push(f_plus);
    gammas.extend(inner.gammas[q2..].iter().map(lift));

    let chi = linalg::block_diag(&[inner.chi.clone(), -&inner.chi]);
    let graded = &inner.gram * &inner.chi;
    let gram = block(None, Some(&graded), Some(&graded), None);
    let jplus = linalg::block_diag(&[inner.jplus.clone(), inner.jplus.clone()]);
    Raw { gammas, chi, gram, jplus }
}

/// Ordered product of the listed gammas (identity for an empty list).
pub fn gamma_product(gammas: &[CMat], indices: impl IntoIterator<Item = usize>, dim: usize) -> CMat {
    indices.into_iter().fold(eye(dim), |acc, a| acc * &gammas[a])
}

fn choose_sign(candidate: &CMat, k: &KreinForm, what: &str) -> Result<CMat> {
    for sign in [1.0, -1.0] {
        let eta = candidate.scale(sign);
        if kspace::is_fundamental_symmetry(&eta, k).ok {
            return Ok(eta);
        }
    }
    Err(Error::NotFundamentalSymmetry(format!("no sign of the partial chirality works for {what}")))
}

/// Builds the spinor module of `Cl(q,p)`.
pub fn build(sig: Signature) -> Result<CliffordModule> {
    let sig = Signature::new(sig.q, sig.p)?;
    let (q, p) = (sig.q, sig.p);
    let raw = if sig.is_even_even() { fock_raw(q, p) } else { odd_odd_raw(q, p) };

    assemble(sig, raw.gammas, raw.chi, raw.gram, AntilinearOperator::new(raw.jplus), None)
}

/// Derives the partial chiralities, anti-Robinson product and fundamental
/// symmetries from generators, chirality, Robinson gram and `J₊`. `J₋`
/// defaults to `χJ₊`.
pub(crate) fn assemble(
    sig: Signature,
    gammas: Vec<CMat>,
    chi: CMat,
    gram: CMat,
    jplus: AntilinearOperator,
    jminus: Option<AntilinearOperator>,
) -> Result<CliffordModule> {
    let (q, p) = (sig.q, sig.p);
    let dim = chi.nrows();

    let chi_minus = gamma_product(&gammas, 0..q, dim).map(|z| z * i_pow((q * (q + 1) / 2) as i64));
    let chi_plus = gamma_product(&gammas, q..q + p, dim).map(|z| z * i_pow((p * p.saturating_sub(1) / 2) as i64));

    let anti = (&gram * &chi).map(|z| z * i_pow(q as i64));
    let gram_robinson = KreinForm::new(gram)?;
    let gram_antirobinson = KreinForm::new(anti)?;

    let (plus_src, minus_src) = if q % 2 == 0 { (&chi_minus, &chi_plus) } else { (&chi_plus, &chi_minus) };
    let eta_plus = choose_sign(plus_src, &gram_robinson, "the Robinson product")?;
    let eta_minus = choose_sign(minus_src, &gram_antirobinson, "the anti-Robinson product")?;

    let jminus = jminus.unwrap_or_else(|| jplus.left_mul(&chi));

    Ok(CliffordModule {
        sig,
        dim,
        gammas,
        chi,
        chi_minus,
        chi_plus,
        eta_plus,
        eta_minus,
        gram_robinson,
        gram_antirobinson,
        jplus,
        jminus,
    })
}

impl CliffordModule {
    /// `γ(v) = Σ v_a γ^a` in the module's pseudo-orthonormal basis.
    pub fn gamma_of(&self, v: &[f64]) -> Result<CMat> {
        if v.len() != self.sig.d() {
            return Err(Error::DimensionMismatch(format!(
                "vector has {} components, signature has {}",
                v.len(),
                self.sig.d()
            )));
        }
        let mut out = zeros(self.dim, self.dim);
        for (c, g) in v.iter().zip(&self.gammas) {
            out += g.scale(*c);
        }
        Ok(out)
    }

    pub fn product_for(&self, conv: Convention) -> &KreinForm {
        match conv {
            Convention::West | Convention::South => &self.gram_robinson,
            Convention::East | Convention::North => &self.gram_antirobinson,
        }
    }

    pub fn j_for(&self, conv: Convention) -> &AntilinearOperator {
        match conv {
            Convention::East | Convention::South => &self.jplus,
            Convention::West | Convention::North => &self.jminus,
        }
    }
}

/// Largest entry of `{γ^a, γ^b} - 2 g^{ab}` over all pairs.
pub fn verify_relations(m: &CliffordModule) -> f64 {
    let g = m.sig.metric();
    let id = eye(m.dim);
    let mut worst = 0.0f64;
    for a in 0..m.gammas.len() {
        for b in a..m.gammas.len() {
            let mut ac = linalg::anticomm(&m.gammas[a], &m.gammas[b]);
            if a == b {
                ac -= id.scale(2.0 * g[a]);
            }
            worst = worst.max(max_abs(&ac));
        }
    }
    worst
}

/// Decides whether `a = b` or `a = -b`; returns the sign and the entrywise defect.
pub fn sign_between(a: &CMat, b: &CMat) -> (i8, f64) {
    let plus = max_abs(&(a - b));
    let minus = max_abs(&(a + b));
    if plus <= minus {
        (1, plus)
    } else {
        (-1, minus)
    }
}

/// Signs extracted from operators, with the worst defect among the four tests.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SignReport {
    pub signs: SignQuadruple,
    pub sigma: u8,
    pub violation: f64,
}

/// Reads `(ε, ε″, κ, κ″)` of a Krein form, chirality and antilinear `J`.
pub fn signs_of(k: &KreinForm, chi: &CMat, j: &AntilinearOperator) -> Result<SignReport> {
    let n = k.dim();
    let (eps, v1) = sign_between(&j.square(), &eye(n));
    let adj = kspace::antilinear_adjoint(j, k)?;
    let (kap, v2) = sign_between(&adj.mat, &j.mat);
    // Jχ = ε″χJ as antilinear maps: M conj(χ) = ε″ χ M.
    let (eps2, v3) = sign_between(&(&j.mat * chi.conjugate()), &(chi * &j.mat));
    let chi_adj = kspace::krein_adjoint(chi, k)?;
    let (chi_sign, v4) = sign_between(&chi_adj, chi);
    let sigma = if chi_sign == 1 { 0 } else { 1 };
    let kap2 = if sigma == 0 { eps2 } else { -eps2 };
    Ok(SignReport {
        signs: SignQuadruple { eps, eps2, kap, kap2 },
        sigma,
        violation: v1.max(v2).max(v3).max(v4),
    })
}

pub fn extract_signs(m: &CliffordModule, conv: Convention) -> Result<SignReport> {
    signs_of(m.product_for(conv), &m.chi, m.j_for(conv))
}

/// The `(n, m)` pair each convention should produce for signature `(q, p)`.
pub fn expected_dims(sig: Signature, conv: Convention) -> (dims::Mod8Dim, dims::Mod8Dim) {
    let (q, p) = (sig.q as i64, sig.p as i64);
    let (n, m) = match conv {
        Convention::East => (q - p, p + q),
        Convention::West => (p - q, p + q),
        Convention::South => (q - p, -(p + q)),
        Convention::North => (p - q, -(p + q)),
    };
    (dims::Mod8Dim::new(n).expect("even"), dims::Mod8Dim::new(m).expect("even"))
}

/// QR-compress a tall system before the SVD; singular values are unchanged.
fn compress<T: nalgebra::ComplexField>(a: nalgebra::DMatrix<T>) -> nalgebra::DMatrix<T> {
    if a.nrows() > a.ncols() {
        a.qr().r()
    } else {
        a
    }
}

/// Real basis of the Hermitian matrices `F` with `γ^a† F = F γ^a` for all `a`.
pub fn robinson_solution_space(m: &CliffordModule) -> Vec<CMat> {
    let n = m.dim;
    let mut basis = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in i..n {
            let mut e = zeros(n, n);
            if i == j {
                e[(i, i)] = ONE;
                basis.push(e);
            } else {
                e[(i, j)] = ONE;
                e[(j, i)] = ONE;
                basis.push(e.clone());
                let mut f = zeros(n, n);
                f[(i, j)] = I;
                f[(j, i)] = -I;
                basis.push(f);
            }
        }
    }
    let rows = 2 * n * n * m.gammas.len();
    let mut a = linalg::RMat::zeros(rows, basis.len());
    for (k, b) in basis.iter().enumerate() {
        let mut r = 0;
        for g in &m.gammas {
            let eq = g.adjoint() * b - b * g;
            for z in eq.iter() {
                a[(r, k)] = z.re;
                a[(r + 1, k)] = z.im;
                r += 2;
            }
        }
    }
    linalg::real_null_space(&compress(a))
        .into_iter()
        .map(|x| {
            let mut f = zeros(n, n);
            for (c, b) in x.iter().zip(&basis) {
                f += b.scale(*c);
            }
            f
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CcSolution {
    /// Complex basis of `{C : C conj(γ^a) = γ^a C}`.
    pub basis: Vec<CMat>,
    /// First basis element rescaled so that `C conj(C) = ±1`.
    pub representative: CMat,
    pub square_sign: i8,
}

/// Matrices `C` for which `C∘CC` commutes with every generator.
pub fn cc_solution_space(m: &CliffordModule) -> Result<CcSolution> {
    let n = m.dim;
    let rows = n * n * m.gammas.len();
    let mut a = CMat::zeros(rows, n * n);
    for col in 0..n * n {
        let mut e = zeros(n, n);
        e[col] = ONE;
        let mut r = 0;
        for g in &m.gammas {
            let eq = &e * g.conjugate() - g * &e;
            for z in eq.iter() {
                a[(r, col)] = *z;
                r += 1;
            }
        }
    }
    let basis: Vec<CMat> = linalg::null_space(&compress(a))
        .into_iter()
        .map(|v| CMat::from_column_slice(n, n, v.as_slice()))
        .collect();
    let first = basis
        .first()
        .ok_or_else(|| Error::AxiomFailure("no charge conjugation solves the commutant system".into()))?;
    let sq = first * first.conjugate();
    let lambda = sq.trace() / cx(n as f64, 0.0);
    if lambda.norm() < linalg::ABS_TOL {
        return Err(Error::AxiomFailure("charge conjugation squares to zero".into()));
    }
    // λ is real for a solution: C conj(C) commutes with all generators.
    let representative = first.scale(1.0 / lambda.norm().sqrt());
    let square_sign = if lambda.re >= 0.0 { 1 } else { -1 };
    Ok(CcSolution { basis, representative, square_sign })
}

/// `(ω^× ω, ω^+ ω)` for `ω = γ(v₁)⋯γ(v_k)`, as scalars.
pub fn pin_norms(m: &CliffordModule, vectors: &[Vec<f64>]) -> Result<(f64, f64)> {
    let g = m.sig.metric();
    let mut omega = eye(m.dim);
    for v in vectors {
        let norm: f64 = v.iter().zip(&g).map(|(c, s)| s * c * c).sum();
        if (norm.abs() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("vector has g(v,v) = {norm}, expected +1 or -1")));
        }
        omega = omega * m.gamma_of(v)?;
    }
    let scalar = |k: &KreinForm| -> Result<f64> {
        let prod = kspace::krein_adjoint(&omega, k)? * &omega;
        let s = prod.trace() / cx(m.dim as f64, 0.0);
        Ok(s.re)
    };
    Ok((scalar(&m.gram_robinson)?, scalar(&m.gram_antirobinson)?))
}

/// `Cl(1,3)` matrices as displayed for the double-Fock construction.
pub mod fixture_1_3 {
    use super::*;
    use crate::linalg::from_rows_c;

    const O: num_complex::Complex64 = ZERO;
    const P: num_complex::Complex64 = ONE;
    const M: num_complex::Complex64 = num_complex::Complex64::new(-1.0, 0.0);
    const PI: num_complex::Complex64 = I;
    const MI: num_complex::Complex64 = num_complex::Complex64::new(0.0, -1.0);

    pub fn gammas() -> Vec<CMat> {
        vec![
            from_rows_c(&[&[O, O, M, O], &[O, O, O, M], &[P, O, O, O], &[O, P, O, O]]),
            from_rows_c(&[&[O, O, P, O], &[O, O, O, P], &[P, O, O, O], &[O, P, O, O]]),
            from_rows_c(&[&[O, P, O, O], &[P, O, O, O], &[O, O, O, M], &[O, O, M, O]]),
            from_rows_c(&[&[O, PI, O, O], &[MI, O, O, O], &[O, O, O, MI], &[O, O, PI, O]]),
        ]
    }

    pub fn chi() -> CMat {
        linalg::diag_real(&[1.0, -1.0, -1.0, 1.0])
    }

    pub fn jplus() -> CMat {
        from_rows_c(&[&[O, P, O, O], &[P, O, O, O], &[O, O, O, P], &[O, O, P, O]])
    }

    pub fn gram_robinson() -> CMat {
        from_rows_c(&[&[O, O, P, O], &[O, O, O, M], &[P, O, O, O], &[O, M, O, O]])
    }

    /// The displayed anti-Robinson matrix, equal to `γ⁰`.
    pub fn gram_antirobinson() -> CMat {
        gammas()[0].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dims::{dims_from_signs, sign_a};
    use crate::linalg::{approx_eq, from_rows_c, from_rows_real};

    fn m(q: usize, p: usize) -> CliffordModule {
        build(Signature::new(q, p).unwrap()).unwrap()
    }

    #[test]
    fn signature_validation() {
        assert!(Signature::new(2, 1).is_err());
        assert!(Signature::new(0, 0).is_err());
        assert!(Signature::new(7, 7).is_err());
        assert!(Signature::new(3, 3).is_ok());
    }

    #[test]
    fn cl02_matches_two_dimensional_example() {
        let c = m(0, 2);
        assert!(approx_eq(&c.gammas[0], &from_rows_real(&[&[0.0, 1.0], &[1.0, 0.0]])));
        assert!(approx_eq(&c.gammas[1], &from_rows_c(&[&[ZERO, I], &[-I, ZERO]])));
        assert!(approx_eq(&c.chi, &linalg::diag_real(&[1.0, -1.0])));
        assert!(approx_eq(&c.jplus.mat, &c.gammas[0]));
        assert!(approx_eq(c.gram_robinson.gram(), &eye(2)));
    }

    #[test]
    fn cl13_matches_displayed_matrices() {
        let c = m(1, 3);
        for (g, f) in c.gammas.iter().zip(fixture_1_3::gammas()) {
            assert_eq!(g, &f);
        }
        assert_eq!(c.chi, fixture_1_3::chi());
        assert_eq!(c.jplus.mat, fixture_1_3::jplus());
        assert_eq!(c.gram_robinson.gram(), &fixture_1_3::gram_robinson());
        // The stored anti-Robinson gram carries the factor i^q of the general rule.
        let expected = fixture_1_3::gram_antirobinson().map(|z| z * I);
        assert_eq!(c.gram_antirobinson.gram(), &expected);
    }

    #[test]
    fn relations_hold_exactly_for_small_cases() {
        assert_eq!(verify_relations(&m(1, 3)), 0.0);
        assert_eq!(verify_relations(&m(0, 2)), 0.0);
        assert!(verify_relations(&m(3, 3)) <= 1e-12);
    }

    #[test]
    fn all_signatures_satisfy_module_invariants() {
        for sig in Signature::all_up_to(8) {
            let c = build(sig).unwrap();
            assert!(verify_relations(&c) <= 1e-12, "{sig}");
            let id = eye(c.dim);
            assert!(approx_eq(&(&c.chi * &c.chi), &id), "{sig}");
            assert!(c.chi.trace().norm() < 1e-12, "{sig}");
            let top = gamma_product(&c.gammas, 0..sig.d(), c.dim);
            let norm = top.map(|z| z * i_pow((sig.p as i64 - sig.q as i64) / 2));
            let (_, defect) = sign_between(&norm, &c.chi);
            assert!(defect < 1e-12, "{sig}: chirality is not the normalized top element");
            for (name, x) in [("chi-", &c.chi_minus), ("chi+", &c.chi_plus)] {
                assert!(approx_eq(&(x * x), &id), "{sig} {name}");
            }
            for g in &c.gammas {
                assert!(approx_eq(&(&c.chi * g), &-(g * &c.chi)), "{sig}");
                let rx = kspace::krein_adjoint(g, &c.gram_robinson).unwrap();
                assert!(max_abs(&(rx - g)) <= 1e-12, "{sig}: gamma not Robinson self-adjoint");
                let ax = kspace::krein_adjoint(g, &c.gram_antirobinson).unwrap();
                assert!(max_abs(&(ax + g)) <= 1e-12, "{sig}: gamma not anti-Robinson anti-self-adjoint");
                assert!(approx_eq(&(&c.jplus.mat * g.conjugate()), &(g * &c.jplus.mat)), "{sig}: J+");
                assert!(approx_eq(&(&c.jminus.mat * g.conjugate()), &-(g * &c.jminus.mat)), "{sig}: J-");
            }
            assert!(kspace::is_fundamental_symmetry(&c.eta_plus, &c.gram_robinson).ok, "{sig}");
            assert!(kspace::is_fundamental_symmetry(&c.eta_minus, &c.gram_antirobinson).ok, "{sig}");
        }
    }

    #[test]
    fn traces_of_gamma_monomials_vanish() {
        let c = m(2, 2);
        for mask in 1usize..(1 << 4) {
            let idx: Vec<usize> = (0..4).filter(|a| mask & (1 << a) != 0).collect();
            let t = gamma_product(&c.gammas, idx, c.dim).trace();
            assert!(t.norm() < 1e-12);
        }
        assert_eq!(eye(c.dim).trace(), cx(4.0, 0.0));
    }

    #[test]
    fn sign_examples() {
        let s = extract_signs(&m(1, 3), Convention::West).unwrap().signs;
        assert_eq!((s.eps, s.kap, s.eps2), (-1, -1, -1));
        let s = extract_signs(&m(0, 2), Convention::East).unwrap().signs;
        assert_eq!((s.eps, s.kap), (1, -1));
        for conv in Convention::ALL {
            assert_eq!(extract_signs(&m(2, 2), conv).unwrap().signs.eps2, 1);
        }
    }

    #[test]
    fn conventions_give_expected_dims() {
        for sig in Signature::all_up_to(8) {
            let c = build(sig).unwrap();
            for conv in Convention::ALL {
                let rep = extract_signs(&c, conv).unwrap();
                assert!(rep.violation <= 1e-12, "{sig} {conv:?}");
                assert_eq!(dims_from_signs(rep.signs), expected_dims(sig, conv), "{sig} {conv:?}");
            }
        }
    }

    #[test]
    fn jplus_adjoint_in_cl13_robinson() {
        let c = m(1, 3);
        let adj = kspace::antilinear_adjoint(&c.jplus, &c.gram_robinson).unwrap();
        let (kap, _) = sign_between(&adj.mat, &c.jplus.mat);
        assert_eq!(kap, sign_a(-4).unwrap());
    }

    #[test]
    fn solution_spaces_are_lines() {
        let c = m(1, 3);
        let rs = robinson_solution_space(&c);
        assert_eq!(rs.len(), 1);
        let f = &rs[0];
        let ratio = f[(0, 2)] / c.gram_robinson.gram()[(0, 2)];
        assert!(approx_eq(&c.gram_robinson.gram().map(|z| z * ratio), f));
        let cc = cc_solution_space(&c).unwrap();
        assert_eq!(cc.basis.len(), 1);
        assert_eq!(cc.square_sign, 1);
        let r02 = robinson_solution_space(&m(0, 2));
        assert_eq!(r02.len(), 1);
        let (vals, _) = linalg::hermitian_eigen(&r02[0]);
        assert!(vals[0] * vals[1] > 0.0, "Robinson product of Cl(0,2) is definite");
        assert_eq!(robinson_solution_space(&m(2, 2)).len(), 1);
        assert_eq!(cc_solution_space(&m(0, 2)).unwrap().square_sign, 1);
        assert_eq!(cc_solution_space(&m(3, 1)).unwrap().square_sign, -1);
    }

    #[test]
    fn definiteness_for_p_zero() {
        let c = m(2, 0);
        let (anti, _) = linalg::hermitian_eigen(c.gram_antirobinson.gram());
        assert!(anti.iter().all(|&v| v > 0.0) || anti.iter().all(|&v| v < 0.0));
        // The Robinson product is definite on each chirality sector, with opposite signs.
        let g = c.gram_robinson.gram();
        let signs: Vec<(f64, f64)> = (0..c.dim).map(|i| (g[(i, i)].re, c.chi[(i, i)].re)).collect();
        let even: Vec<f64> = signs.iter().filter(|s| s.1 > 0.0).map(|s| s.0).collect();
        let odd: Vec<f64> = signs.iter().filter(|s| s.1 < 0.0).map(|s| s.0).collect();
        assert!(even.iter().all(|&v| v > 0.0) && odd.iter().all(|&v| v < 0.0));
        // q = 0: the Robinson product is definite.
        let (rob, _) = linalg::hermitian_eigen(m(0, 4).gram_robinson.gram());
        assert!(rob.iter().all(|&v| v > 0.0));
    }

    #[test]
    fn pin_norm_examples() {
        let c = m(1, 3);
        assert_eq!(pin_norms(&c, &[]).unwrap(), (1.0, 1.0));
        let t = vec![1.0, 0.0, 0.0, 0.0];
        let (x, a) = pin_norms(&c, &[t]).unwrap();
        assert!((x + 1.0).abs() < 1e-12 && (a - 1.0).abs() < 1e-12);
        let e1 = vec![0.0, 1.0, 0.0, 0.0];
        let e2 = vec![0.0, 0.0, 0.6, 0.8];
        let (x, a) = pin_norms(&c, &[e1, e2]).unwrap();
        assert!((x - 1.0).abs() < 1e-12 && (a - 1.0).abs() < 1e-12);
        assert!(pin_norms(&c, &[vec![1.0, 1.0, 0.0, 0.0]]).is_err());
    }
}
