//! One-forms, junk two-forms and the quotient space `Q` of a finite triple.
//!
//! Universal forms are represented through their coefficients on basis
//! pairs `(a_i, b_j)`: `Φ₁` sends a coefficient vector to
//! `Σ c_ij π(a_i)[D, π(b_j)]` and `Φ₂` to `Σ c_ij [D, π(a_i)][D, π(b_j)]`.
//! Junk is `Φ₂(ker Φ₁)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::ist::IndefiniteTriple;
use crate::kspace::{self, ProjectionMode};
use crate::linalg::{self, spmul, CMat, RMat, RANK_TOL};

#[derive(Debug, Clone, Serialize)]
pub struct FormSpace {
    /// Frobenius-orthonormal real basis of the span.
    #[serde(with = "crate::serde_cx::mat_vec")]
    pub span: Vec<CMat>,
    pub real_dim: usize,
    pub singular_values: Vec<f64>,
    /// Smallest retained singular value over the largest discarded residual.
    pub gap: f64,
    /// Condition number of the Gram matrix under `Re tr(ϖS†ϖT)`, when computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram_condition: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definite: Option<bool>,
}

impl FormSpace {
    fn from_span(span: linalg::RealSpan) -> Self {
        Self {
            real_dim: span.rank,
            span: span.basis,
            singular_values: span.singular_values,
            gap: span.gap,
            gram_condition: None,
            definite: None,
        }
    }

    pub fn zero() -> Self {
        Self::from_span(linalg::real_span(&[]))
    }

    /// Relative size of the part of `x` outside the span.
    pub fn membership_residual(&self, x: &CMat) -> f64 {
        let n = linalg::frob(x);
        if n == 0.0 {
            return 0.0;
        }
        linalg::frob(&linalg::real_residual(x, &self.span)) / n
    }

    pub fn contains(&self, x: &CMat) -> bool {
        self.membership_residual(x) <= 1e-8
    }
}

fn pair_commutators(t: &IndefiniteTriple) -> Vec<CMat> {
    t.algebra
        .real_basis
        .par_iter()
        .map(|b| spmul(&t.dirac, b) - spmul(b, &t.dirac))
        .collect()
}

fn phi1(t: &IndefiniteTriple, db: &[CMat]) -> Vec<CMat> {
    let basis = &t.algebra.real_basis;
    basis.par_iter().flat_map_iter(|a| db.iter().map(move |c| spmul(a, c))).collect()
}

fn phi2(db: &[CMat]) -> Vec<CMat> {
    db.par_iter().flat_map_iter(|a| db.iter().map(move |c| spmul(a, c))).collect()
}

pub fn one_forms(t: &IndefiniteTriple) -> FormSpace {
    let db = pair_commutators(t);
    FormSpace::from_span(linalg::real_span(&phi1(t, &db)))
}

/// Orthonormal basis (as rows) of the row space of the realified `Φ₁`.
fn phi1_row_space(images: &[CMat]) -> RMat {
    let support = linalg::joint_support(images);
    let m = images.len();
    if support.is_empty() {
        return RMat::zeros(0, m);
    }
    let a = linalg::realify_columns(images, &support);
    let span = linalg::real_span(images);
    if span.rank == 0 {
        return RMat::zeros(0, m);
    }
    let q = linalg::realify_columns(&span.basis, &support);
    let coords = q.transpose() * a;
    let svd = coords.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> =
        (0..svd.singular_values.len()).filter(|&k| svd.singular_values[k] > RANK_TOL * smax).collect();
    RMat::from_fn(keep.len(), m, |r, c| v_t[(keep[r], c)])
}

pub fn junk_two_forms(t: &IndefiniteTriple) -> FormSpace {
    let db = pair_commutators(t);
    let images1 = phi1(t, &db);
    let images2 = phi2(&db);
    let scale = images2.iter().map(linalg::frob).fold(0.0, f64::max);
    if scale == 0.0 {
        return FormSpace::zero();
    }
    let rows = phi1_row_space(&images1);
    // Φ₂ restricted to ker Φ₁: Φ₂ e_k − Σ_r (Φ₂ v_r) v_r[k].
    let shape = images2[0].shape();
    let pushed: Vec<CMat> = (0..rows.nrows())
        .into_par_iter()
        .map(|r| {
            let mut acc = linalg::zeros(shape.0, shape.1);
            for (k, img) in images2.iter().enumerate() {
                let c = rows[(r, k)];
                if c != 0.0 {
                    acc += img.scale(c);
                }
            }
            acc
        })
        .collect();
    let generators: Vec<CMat> = (0..images2.len())
        .into_par_iter()
        .map(|k| {
            let mut g = images2[k].clone();
            for (r, p) in pushed.iter().enumerate() {
                let c = rows[(r, k)];
                if c != 0.0 {
                    g -= p.scale(c);
                }
            }
            g
        })
        .collect();
    FormSpace::from_span(linalg::real_span_scaled(&generators, Some(scale)))
}

/// `π(A) + junk` with the weighted Gram matrix and its definiteness.
pub fn q_space(t: &IndefiniteTriple) -> FormSpace {
    q_space_with(t, &junk_two_forms(t))
}

pub fn q_space_with(t: &IndefiniteTriple, junk: &FormSpace) -> FormSpace {
    let mut gens = t.algebra.real_basis.clone();
    gens.extend(junk.span.iter().cloned());
    let mut q = FormSpace::from_span(linalg::real_span(&gens));
    let w = t.varpi();
    let k = q.real_dim;
    let images: Vec<CMat> = q.span.iter().map(|s| kspace::weighted_image(s, &w)).collect();
    let g = RMat::from_fn(k, k, |i, j| kspace::frobenius_inner(&images[i], &q.span[j]).re);
    if k > 0 {
        let g = (&g + g.transpose()).scale(0.5);
        let eig = g.clone().symmetric_eigen();
        let lo = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let amax = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let amin = eig.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        q.gram_condition = Some(if amin > 0.0 { amax / amin } else { f64::INFINITY });
        q.definite = Some(lo > RANK_TOL * amax || hi < -RANK_TOL * amax);
    }
    q
}

/// Representative `PX` of `X` orthogonal to `Q` under `Re tr(ϖS†ϖT)`.
pub fn project_two_form(t: &IndefiniteTriple, x: &CMat, varpi: &CMat) -> Result<CMat> {
    project_onto_complement(&q_space(t), x, varpi)
}

pub fn project_onto_complement(q: &FormSpace, x: &CMat, varpi: &CMat) -> Result<CMat> {
    if q.span.is_empty() {
        return Ok(x.clone());
    }
    Ok(kspace::real_bilinear_project(x, &q.span, varpi, ProjectionMode::Real)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ist::FiniteAlgebra;
    use crate::kspace::{AntilinearOperator, KreinForm};
    use crate::linalg::{diag_real, eye, from_rows_real};

    /// `C ⊕ C` on `C²` with an off-diagonal Dirac operator.
    fn two_point(d: f64) -> IndefiniteTriple {
        let e1 = diag_real(&[1.0, 0.0]);
        let e2 = diag_real(&[0.0, 1.0]);
        let i = |m: &CMat| m.map(|z| z * linalg::I);
        let basis = vec![e1.clone(), i(&e1), e2.clone(), i(&e2)];
        let inv = vec![e1.clone(), -i(&e1), e2.clone(), -i(&e2)];
        let alg = FiniteAlgebra::new(basis, inv, vec!["e1".into(), "ie1".into(), "e2".into(), "ie2".into()]).unwrap();
        IndefiniteTriple::new(
            KreinForm::euclidean(2),
            diag_real(&[1.0, -1.0]),
            AntilinearOperator::conjugation(2),
            from_rows_real(&[&[0.0, d], &[d, 0.0]]),
            alg,
        )
        .unwrap()
    }

    #[test]
    fn zero_dirac_gives_zero_forms() {
        let t = two_point(0.0);
        assert_eq!(one_forms(&t).real_dim, 0);
        assert_eq!(junk_two_forms(&t).real_dim, 0);
        assert_eq!(q_space(&t).real_dim, 4);
    }

    /// Independent junk oracle: dense null space of the realified `Φ₁`
    /// pushed through `Φ₂`, then ranked.
    fn oracle_ranks(t: &IndefiniteTriple) -> (usize, usize) {
        let basis = &t.algebra.real_basis;
        let db: Vec<CMat> = basis.iter().map(|b| linalg::comm(&t.dirac, b)).collect();
        let g1: Vec<CMat> = basis.iter().flat_map(|a| db.iter().map(move |c| a * c)).collect();
        let g2: Vec<CMat> = db.iter().flat_map(|a| db.iter().map(move |c| a * c)).collect();
        let n = t.dim();
        let all: Vec<usize> = (0..n * n).collect();
        let r1 = linalg::realify_columns(&g1, &all);
        let r2 = linalg::realify_columns(&g2, &all);
        let ker = linalg::real_null_space(&r1);
        let pushed: Vec<f64> = ker.iter().flat_map(|v| (&r2 * v).iter().copied().collect::<Vec<_>>()).collect();
        let junk = RMat::from_column_slice(2 * n * n, ker.len(), &pushed);
        let scale = r2.column_iter().map(|c| c.norm()).fold(0.0, f64::max);
        let junk_rank = if junk.is_empty() {
            0
        } else {
            junk.singular_values().iter().filter(|&&s| s > RANK_TOL * scale).count()
        };
        (linalg::real_rank(&r1), junk_rank)
    }

    #[test]
    fn two_point_forms_match_rank_oracle() {
        let t = two_point(1.0);
        let f = one_forms(&t);
        let j = junk_two_forms(&t);
        assert_eq!((f.real_dim, j.real_dim), oracle_ranks(&t));
        // Off-diagonal entries are independent complex numbers.
        assert_eq!(f.real_dim, 4);
        assert!(f.contains(&from_rows_real(&[&[0.0, 2.0], &[-3.0, 0.0]])));
        assert!(!f.contains(&eye(2)));
        for s in &j.span {
            assert!(s[(0, 1)].norm() < 1e-12 && s[(1, 0)].norm() < 1e-12);
        }
    }

    #[test]
    fn real_two_point_has_two_real_one_forms() {
        let mut t = two_point(1.0);
        let e1 = diag_real(&[1.0, 0.0]);
        let e2 = diag_real(&[0.0, 1.0]);
        t.algebra = FiniteAlgebra::new(vec![e1.clone(), e2.clone()], vec![e1, e2], vec!["e1".into(), "e2".into()])
            .unwrap();
        let f = one_forms(&t);
        assert_eq!(f.real_dim, 2);
        assert_eq!((f.real_dim, junk_two_forms(&t).real_dim), oracle_ranks(&t));
    }

    #[test]
    fn projection_kills_q_and_is_idempotent() {
        let t = two_point(1.0);
        let w = t.varpi();
        let x = from_rows_real(&[&[1.0, 0.5], &[0.5, -2.0]]);
        let q = q_space(&t);
        let px = project_onto_complement(&q, &x, &w).unwrap();
        let ppx = project_onto_complement(&q, &px, &w).unwrap();
        assert!(linalg::approx_eq(&ppx, &px));
        let inside = project_onto_complement(&q, &t.algebra.real_basis[1], &w).unwrap();
        assert!(linalg::max_abs(&inside) < 1e-12);
        assert!(linalg::approx_eq(&px, &from_rows_real(&[&[0.0, 0.5], &[0.5, 0.0]])));
    }
}
