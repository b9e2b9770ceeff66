//! Self-checks that reproduce the published tables and the numerical claims
//! end to end. Each check returns a [`CriterionReport`]; none of them panic.

use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::clifford::{self, build, fixture_1_3, Convention, Signature};
use crate::dims::{self, sign_a, spacetime_pairs, Mod8Dim, SpaceTimePair};
use crate::error::Result;
use crate::ist::{check_axioms, first_order, order_zero, triple_dims, IndefiniteTriple};
use crate::kspace::{self, AntilinearOperator, KreinForm};
use crate::linalg::{self, eye, max_abs, rel_dist, CMat};
use crate::ncforms;
use crate::sm::{self, build_sm, Quaternion, YukawaSet, ZParams};
use crate::specact::{self, CutoffFn, EvalPath, TorusSpec};
use crate::tensor;
use crate::testkit::{random_cmat, random_symmetric, rng, TestRng};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    /// Wall-clock budget in seconds; exceeding it fails the check.
    pub budget: Option<f64>,
}

/// Seed for sampled checks and the largest Clifford dimension visited.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub max_dim: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: crate::testkit::DEFAULT_SEED, max_dim: 8 }
    }
}

type Outcome = Result<(bool, String)>;

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Option<f64>,
    run: fn(&VerifyOptions) -> Outcome,
}

const CRITERIA: [Criterion; 13] = [
    Criterion { id: 1, title: "sign table", budget: Some(10.0), run: sign_table },
    Criterion { id: 2, title: "Cl(1,3) fixture", budget: Some(1.0), run: cl13_fixture },
    Criterion { id: 3, title: "Robinson uniqueness", budget: Some(30.0), run: robinson_uniqueness },
    Criterion { id: 4, title: "tensor additivity", budget: Some(60.0), run: tensor_additivity },
    Criterion { id: 5, title: "space-time tables", budget: None, run: spacetime_tables },
    Criterion { id: 6, title: "SM structural dims", budget: Some(60.0), run: sm_structure },
    Criterion { id: 7, title: "Higgs projection", budget: None, run: higgs_projection },
    Criterion { id: 8, title: "Lagrangian coefficients", budget: None, run: lagrangian },
    Criterion { id: 9, title: "seesaw/Majorana selection", budget: None, run: majorana_selection },
    Criterion { id: 10, title: "heat-trace shift identity", budget: None, run: shift_identity },
    Criterion { id: 11, title: "heat-kernel limit", budget: Some(5.0), run: heat_kernel },
    Criterion { id: 12, title: "divergence exponent", budget: Some(120.0), run: divergence },
    Criterion { id: 13, title: "hypercharge spectrum", budget: None, run: hypercharges },
];

pub const CRITERION_COUNT: u8 = CRITERIA.len() as u8;

pub fn criterion_title(id: u8) -> Option<&'static str> {
    CRITERIA.iter().find(|c| c.id == id).map(|c| c.title)
}

/// Runs one check; `None` for an unknown id.
pub fn run_criterion(id: u8, opts: &VerifyOptions) -> Option<CriterionReport> {
    let c = CRITERIA.iter().find(|c| c.id == id)?;
    let start = Instant::now();
    let outcome = (c.run)(opts);
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(pair) => pair,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(b) = c.budget {
        if seconds > b {
            passed = false;
            detail.push_str(&format!("; took {seconds:.1}s, budget {b}s"));
        }
    }
    Some(CriterionReport { id, title: c.title, passed, detail, seconds, budget: c.budget })
}

pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionReport> {
    CRITERIA.iter().filter_map(|c| run_criterion(c.id, opts)).collect()
}

fn sig(q: usize, p: usize) -> Signature {
    Signature { q, p }
}

fn md(v: i64) -> Mod8Dim {
    Mod8Dim::new(v).expect("even")
}

fn a(n: i64) -> i8 {
    sign_a(n).expect("even")
}

/// Sign `s` with `x = s·y` as antilinear maps, and the defect.
fn antilinear_sign(j: &AntilinearOperator, k: &KreinForm) -> Result<((i8, f64), (i8, f64))> {
    let sq = clifford::sign_between(&j.square(), &eye(j.dim()));
    let adj = kspace::antilinear_adjoint(j, k)?;
    Ok((sq, clifford::sign_between(&adj.mat, &j.mat)))
}

fn sign_table(opts: &VerifyOptions) -> Outcome {
    let mut worst = 0.0f64;
    let mut mismatches = Vec::new();
    let sigs = Signature::all_up_to(opts.max_dim);
    for s in &sigs {
        let m = build(*s)?;
        let (q, p) = (s.q as i64, s.p as i64);
        // (J, product, J², J^adjoint) straight from the summary table.
        let rows: [(&str, &AntilinearOperator, &KreinForm, i8, i8); 4] = [
            ("J+ Robinson", &m.jplus, &m.gram_robinson, a(q - p), a(-(p + q))),
            ("J+ anti-Robinson", &m.jplus, &m.gram_antirobinson, a(q - p), a(p + q)),
            ("J- Robinson", &m.jminus, &m.gram_robinson, a(p - q), a(p + q)),
            ("J- anti-Robinson", &m.jminus, &m.gram_antirobinson, a(p - q), a(-(p + q))),
        ];
        for (name, j, k, sq, adj) in rows {
            let ((s1, v1), (s2, v2)) = antilinear_sign(j, k)?;
            worst = worst.max(v1).max(v2);
            if s1 != sq || s2 != adj {
                mismatches.push(format!("{s} {name}"));
            }
        }
    }
    let ok = mismatches.is_empty() && worst <= 1e-12;
    Ok((ok, format!("{} signatures x 4 rows, max violation {worst:.1e}, mismatches {mismatches:?}", sigs.len())))
}

fn cl13_fixture(_: &VerifyOptions) -> Outcome {
    let m = build(sig(1, 3))?;
    let mut failed = Vec::new();
    if m.gammas != fixture_1_3::gammas() {
        failed.push("gammas");
    }
    if m.chi != fixture_1_3::chi() {
        failed.push("chi");
    }
    if m.jplus.mat != fixture_1_3::jplus() {
        failed.push("J+");
    }
    if m.gram_robinson.gram() != &fixture_1_3::gram_robinson() {
        failed.push("Robinson gram");
    }
    let displayed = fixture_1_3::gram_antirobinson();
    if m.gram_antirobinson.gram() != &displayed {
        failed.push("anti-Robinson gram");
    }
    let displayed_hermitian = max_abs(&(&displayed - displayed.adjoint())) == 0.0;
    let g02 = &m.gammas[0] * &m.gammas[2];
    let label_matches = g02 == fixture_1_3::jplus();
    let detail = format!(
        "mismatched: {failed:?}; displayed anti-Robinson gram Hermitian: {displayed_hermitian}; \
         stored anti-Robinson gram equals i x displayed: {}; gamma0 gamma2 equals displayed J+: {label_matches}",
        m.gram_antirobinson.gram() == &displayed.map(|z| z * linalg::I)
    );
    Ok((failed.is_empty(), detail))
}

fn robinson_uniqueness(opts: &VerifyOptions) -> Outcome {
    let mut bad = Vec::new();
    let sigs = Signature::all_up_to(opts.max_dim);
    for s in &sigs {
        let m = build(*s)?;
        let r = clifford::robinson_solution_space(&m).len();
        let c = clifford::cc_solution_space(&m)?.basis.len();
        if r != 1 || c != 1 {
            bad.push(format!("{s}: robinson {r}, cc {c}"));
        }
    }
    Ok((bad.is_empty(), format!("{} signatures, failures {bad:?}", sigs.len())))
}

fn tensor_additivity(opts: &VerifyOptions) -> Outcome {
    let sigs = Signature::all_up_to(opts.max_dim.saturating_sub(2));
    let modules: Vec<_> = sigs.iter().map(|s| build(*s)).collect::<Result<_>>()?;
    let mut pairs = 0usize;
    let mut triples = 0usize;
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for m1 in &modules {
        for m2 in &modules {
            if m1.sig.d() + m2.sig.d() > opts.max_dim {
                continue;
            }
            pairs += 1;
            let t = tensor::tensor_modules(m1, m2)?;
            worst = worst.max(clifford::verify_relations(&t));
            for conv in Convention::ALL {
                let (n1, d1) = clifford::expected_dims(m1.sig, conv);
                let (n2, d2) = clifford::expected_dims(m2.sig, conv);
                let rep = clifford::extract_signs(&t, conv)?;
                worst = worst.max(rep.violation);
                if dims::dims_from_signs(rep.signs) != (n1 + n2, d1 + d2) {
                    bad.push(format!("{} x {} module {conv:?}", m1.sig, m2.sig));
                }
            }
            for c1 in Convention::ALL {
                for c2 in Convention::ALL {
                    let t1 = IndefiniteTriple::from_clifford(m1, c1)?;
                    let t2 = IndefiniteTriple::from_clifford(m2, c2)?;
                    let t = tensor::tensor_ist(&t1, &t2)?;
                    triples += 1;
                    let rep = check_axioms(&t);
                    worst = worst.max(rep.max_violation());
                    let (n1, d1) = triple_dims(&t1)?;
                    let (n2, d2) = triple_dims(&t2)?;
                    if !rep.pass() || triple_dims(&t)? != (n1 + n2, d1 + d2) {
                        bad.push(format!("{} {c1:?} x {} {c2:?}", m1.sig, m2.sig));
                    }
                }
            }
        }
    }
    let ok = bad.is_empty() && worst <= 1e-10;
    Ok((ok, format!("{pairs} module pairs, {triples} triple pairs, max violation {worst:.1e}, failures {bad:?}")))
}

/// Cells of the `(t, s)` table, rows `m = 0, 2, 4, 6`, columns `n = 0, 2, 4, 6`.
const SPACETIME_TABLE: [[[(u8, u8); 2]; 4]; 4] = [
    [[(0, 0), (4, 4)], [(1, 7), (5, 3)], [(2, 6), (6, 2)], [(3, 5), (7, 1)]],
    [[(1, 1), (5, 5)], [(2, 0), (6, 4)], [(3, 7), (7, 3)], [(4, 6), (0, 2)]],
    [[(2, 2), (6, 6)], [(3, 1), (7, 5)], [(4, 0), (0, 4)], [(5, 7), (1, 3)]],
    [[(3, 3), (7, 7)], [(4, 2), (0, 6)], [(5, 1), (1, 5)], [(6, 0), (2, 4)]],
];

fn spacetime_tables(opts: &VerifyOptions) -> Outcome {
    let mut bad = Vec::new();
    for (mi, row) in SPACETIME_TABLE.iter().enumerate() {
        for (ni, cell) in row.iter().enumerate() {
            let got = spacetime_pairs(md(2 * ni as i64), md(2 * mi as i64));
            let want = cell.map(|(t, s)| SpaceTimePair { t, s });
            if got != want {
                bad.push(format!("m={} n={}", 2 * mi, 2 * ni));
            }
        }
    }
    let mut r = rng(opts.seed);
    let sigs = Signature::all_up_to(opts.max_dim.max(2));
    let mut sampled = Vec::new();
    for _ in 0..10 {
        let s = sigs[r.random_range(0..sigs.len())];
        sampled.push(format!("({},{})", s.q, s.p));
        let (q, p) = (s.q as i64, s.p as i64);
        let module = build(s)?;
        let rows = dims::cardinal_table(s.q as u32, s.p as u32)?;
        for row in rows {
            // (m, n, t, s) as printed in the cardinal summary.
            let (m, n, t, sp) = match row.convention {
                Convention::East => (p + q, q - p, q, p),
                Convention::West => (p + q, p - q, p, q),
                Convention::South => (-p - q, q - p, -p, -q),
                Convention::North => (-p - q, p - q, -q, -p),
            };
            let measured = dims::dims_from_signs(clifford::extract_signs(&module, row.convention)?.signs);
            let printed = (md(n), md(m));
            if (row.n, row.m) != printed || measured != printed || row.ts != SpaceTimePair::new(t, sp)? {
                bad.push(format!("{s} {:?}", row.convention));
            }
            if !spacetime_pairs(row.n, row.m).contains(&row.ts) {
                bad.push(format!("{s} {:?} (t,s) outside its table cell", row.convention));
            }
        }
    }
    Ok((bad.is_empty(), format!("16 cells; sampled {}; failures {bad:?}", sampled.join(" "))))
}

fn random_z(r: &mut TestRng) -> ZParams {
    let mut v = || r.random_range(0.1..2.0);
    ZParams { alpha: v(), beta: v(), gamma: v(), delta: v(), mu: v(), nu: v() }
}

fn random_quaternion(r: &mut TestRng) -> Quaternion {
    let v = random_cmat(r, 2, 1);
    Quaternion::new(v[(0, 0)], v[(1, 0)])
}

fn sm_structure(opts: &VerifyOptions) -> Outcome {
    let mut r = rng(opts.seed);
    let mut lines = Vec::new();
    let mut ok = true;
    for n in [1usize, 3] {
        let m = build_sm(YukawaSet::random(&mut r, n, 1), -1, -1)?;
        let forms = ncforms::one_forms(&m.triple);
        let junk = ncforms::junk_two_forms(&m.triple);
        let q = ncforms::q_space_with(&m.triple, &junk);
        let (oz, fo) = (order_zero(&m.triple), first_order(&m.triple));
        let axioms = check_axioms(&m.triple).pass();
        let good = forms.real_dim == 8
            && junk.real_dim == 4
            && q.real_dim == 28
            && q.definite == Some(true)
            && oz <= 1e-12
            && fo <= 1e-12
            && axioms;
        ok &= good;
        lines.push(format!(
            "N={n}: one-forms {}, junk {}, Q {}, definite {:?}, order0 {oz:.1e}, first-order {fo:.1e}",
            forms.real_dim, junk.real_dim, q.real_dim, q.definite
        ));
    }
    Ok((ok, lines.join("; ")))
}

fn higgs_projection(opts: &VerifyOptions) -> Outcome {
    let mut r = rng(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let m = build_sm(YukawaSet::random(&mut r, 1, 1), -1, -1)?;
        let qh = random_quaternion(&mut r);
        let generic = m.higgs_projection_generic(&qh)?;
        let closed = m.higgs_projection_closed(&qh);
        worst = worst.max(rel_dist(&closed, &generic));
    }
    Ok((worst <= 1e-9, format!("100 draws, max relative error {worst:.2e}")))
}

fn lagrangian(opts: &VerifyOptions) -> Outcome {
    let mut r = rng(opts.seed);
    let mut worst = 0.0f64;
    let mut nonpositive = 0usize;
    for n in [1usize, 3] {
        for _ in 0..50 {
            let y = YukawaSet::random(&mut r, n, 1);
            let z = random_z(&mut r);
            let closed = sm::lagrangian_coeffs(&z, &y);
            let oracle = sm::lagrangian_coeffs_oracle(&z, &y)?;
            worst = worst.max(closed.rel_diff(&oracle));
            if closed.as_array().iter().any(|&v| v <= 0.0) {
                nonpositive += 1;
            }
        }
    }
    let mut violations = 0usize;
    for k in 0..1000 {
        let n = if k % 2 == 0 { 1 } else { 3 };
        if !sm::yukawa_traces(&YukawaSet::random(&mut r, n, 1)).inequality_ok {
            violations += 1;
        }
    }
    let ok = worst <= 1e-9 && nonpositive == 0 && violations == 0;
    Ok((
        ok,
        format!(
            "100 draws, max relative error {worst:.2e}, non-positive draws {nonpositive}, \
             Cauchy-Schwarz violations {violations}/1000"
        ),
    ))
}

fn majorana_selection(opts: &VerifyOptions) -> Outcome {
    let mut r = rng(opts.seed);
    // s = -1, eps = +1: Y_R must be antisymmetric.
    let mut sym = YukawaSet::random(&mut r, 3, 1);
    sym.yr = random_symmetric(&mut r, 3, 1);
    let rejects_symmetric = build_sm(sym, -1, 1).is_err();
    let anti = build_sm(YukawaSet::random(&mut r, 3, -1), -1, 1)?;
    let yr = &anti.yukawas.yr;
    let antisym = max_abs(&(yr + yr.transpose())) <= 1e-12;
    let sv = linalg::singular_values(yr);
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&v| v > 1e-10 * smax).count();
    let rank_ok = rank <= 2 && rank % 2 == 0;

    let pairing_max = |model: &sm::SMModel, r: &mut TestRng| -> Result<f64> {
        let dim = sm::majorana_form(model)?.nrows();
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let (u, v) = (random_cmat(r, dim, 1), random_cmat(r, dim, 1));
            worst = worst.max(sm::majorana_pairing(model, &u, &v)?);
        }
        Ok(worst)
    };
    let real = pairing_max(&anti, &mut r)?;
    let physical = build_sm(YukawaSet::random(&mut r, 3, 1), -1, -1)?;
    let nonzero = pairing_max(&physical, &mut r)?;
    let ok = rejects_symmetric && antisym && rank_ok && real <= 1e-12 && nonzero > 1e-6;
    Ok((
        ok,
        format!(
            "symmetric Y_R rejected: {rejects_symmetric}; antisymmetric: {antisym}; rank {rank}; \
             pairing with eps=+1 max {real:.1e}; with eps=-1 max {nonzero:.2e}"
        ),
    ))
}

fn shift_identity(opts: &VerifyOptions) -> Outcome {
    let mut r = rng(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let t = r.random_range(0..=3);
        let s = r.random_range(0..=3) + usize::from(t == 0);
        // Odd circles lack the k -> k + N/2 pairing the identity rests on.
        let n = 2 * r.random_range(1..=16);
        let a = r.random_range(0.1..=1.0);
        let theta = Complex64::from_polar(r.random_range(0.0..=1.0), r.random_range(0.0..std::f64::consts::TAU));
        let spec = TorusSpec::new(t, s, n, a)?;
        worst = worst.max(specact::shift_identity_residual(&spec, theta));
    }
    Ok((worst <= 1e-10, format!("50 draws over even N <= 32, max residual {worst:.1e}")))
}

fn heat_kernel(_: &VerifyOptions) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [1usize, 2] {
        let spec = TorusSpec::new(0, d, 512, 1.0 / 512.0)?;
        let c = specact::heat_kernel_limit_check(&spec, -1e-3)?;
        ok &= (c.ratio - 1.0).abs() <= 0.01;
        parts.push(format!("d={d} ratio {:.6}", c.ratio));
    }
    Ok((ok, parts.join(", ")))
}

fn divergence(_: &VerifyOptions) -> Outcome {
    let f = CutoffFn::Gaussian;
    let two = specact::divergence_exponent(
        &TorusSpec::with_length(1, 1, 1.0, 1.0 / 32.0)?,
        &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0],
        &f,
        20.0,
        EvalPath::Grid,
    )?;
    let four = specact::divergence_exponent(
        &TorusSpec::with_length(1, 3, 1.0, 1.0 / 8.0)?,
        &[1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0],
        &f,
        20.0,
        EvalPath::Fourier,
    )?;
    let ok = (two.slope - 1.0).abs() <= 0.15 && (four.slope - 3.0).abs() <= 0.3;
    Ok((ok, format!("d=2 slope {:.3} (want 1.0 +- 0.15), d=4 slope {:.3} (want 3.0 +- 0.3)", two.slope, four.slope)))
}

fn hypercharges(opts: &VerifyOptions) -> Outcome {
    let n = 3;
    let mut r = rng(opts.seed);
    let m = build_sm(YukawaSet::random(&mut r, n, 1), -1, -1)?;
    let g = sm::gauge_coupling_matrices(&m, 1.0, &CMat::zeros(2, 2), &CMat::zeros(3, 3))?;
    let count = |x: &CMat, v: f64| -> Option<usize> {
        // Diagonal and exact, so read the spectrum off the diagonal.
        let off = x - linalg::diag(&x.diagonal().iter().copied().collect::<Vec<_>>());
        (max_abs(&off) <= 1e-12).then(|| x.diagonal().iter().filter(|&&z| (z - Complex64::new(v, 0.0)).norm() <= 1e-12).count())
    };
    let right = [0.0, -2.0, 4.0 / 3.0, -2.0 / 3.0].map(|v| count(&g.right, v));
    let left = [-1.0, 1.0 / 3.0].map(|v| count(&g.left, v));
    let want_r = [n, n, 3 * n, 3 * n].map(Some);
    let want_l = [2 * n, 6 * n].map(Some);
    let ok = right == want_r && left == want_l && g.right.nrows() == 8 * n && g.left.nrows() == 8 * n;
    Ok((ok, format!("N={n}: right multiplicities {right:?}, left multiplicities {left:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_report_their_outcome() {
        let opts = VerifyOptions { seed: 1, max_dim: 6 };
        for id in [1u8, 5, 10, 11, 13] {
            let rep = run_criterion(id, &opts).unwrap();
            assert!(rep.passed, "{}: {}", rep.title, rep.detail);
        }
        assert!(run_criterion(99, &opts).is_none());
    }

    #[test]
    fn displayed_antirobinson_gram_is_inconsistent() {
        let rep = run_criterion(2, &VerifyOptions::default()).unwrap();
        assert!(!rep.passed);
        assert!(rep.detail.contains("[\"anti-Robinson gram\"]"), "{}", rep.detail);
    }
}
