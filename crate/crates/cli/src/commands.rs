//! One function per subcommand, each producing a [`Report`].

use std::path::Path as FsPath;

use clap::ValueEnum;
use ncg_core::clifford::{self, Convention, Signature};
use ncg_core::dims::{self, sign_a, Mod8Dim};
use ncg_core::ist::{self, IndefiniteTriple};
use ncg_core::sm::{self, Quaternion, SmInput};
use ncg_core::specact::{self, CutoffFn, EvalPath, TorusSpec};
use ncg_core::verify::{self, VerifyOptions};
use ncg_core::{tensor, Complex64, Error};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::output::{real, Report, Table};
use crate::{Cutoff, Path, SignTable, SmArgs, SpectralArgs};

/// Failure before any check could run.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateProjection { .. }
            | Error::NotFundamentalSymmetry(_)
            | Error::NotUnitary { .. }
            | Error::NotOneForm { .. }
            | Error::NonPositiveCoefficient { .. }
            | Error::AxiomFailure(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

type CmdResult = Result<Report, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    East,
    West,
    South,
    North,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::East => Convention::East,
            ConventionArg::West => Convention::West,
            ConventionArg::South => Convention::South,
            ConventionArg::North => Convention::North,
        }
    }
}

/// Parses `Q,P`.
pub fn parse_signature(s: &str) -> Result<(usize, usize), String> {
    let (q, p) = s.split_once(',').ok_or_else(|| format!("expected Q,P (got {s:?})"))?;
    let n = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((n(q)?, n(p)?))
}

fn sign(s: i8) -> String {
    if s > 0 { "+1" } else { "-1" }.to_string()
}

pub fn signs(table: SignTable, q: u32, p: u32) -> CmdResult {
    let d = |v: i64| Mod8Dim::new(v).expect("even");
    let (t, json) = match table {
        SignTable::A => {
            let mut t = Table::new("values of a(n)", &["n", "a(n)", "a(-n)", "(-1)^(n/2)"]);
            let mut rows = Vec::new();
            for n in [0i64, 2, 4, 6] {
                let (a, am, par) = (sign_a(n)?, sign_a(-n)?, dims::parity_sign(n / 2));
                t.push(vec![n.to_string(), sign(a), sign(am), sign(par)]);
                rows.push(json!({"n": n, "a": a, "a_neg": am, "parity": par}));
            }
            (t, Value::Array(rows))
        }
        SignTable::KoMetric => {
            let mut t = Table::new("signs for each (n, m)", &["n", "m", "eps", "eps2", "kap", "kap2"]);
            let mut rows = Vec::new();
            for n in Mod8Dim::all() {
                for m in Mod8Dim::all() {
                    let s = dims::signs_from_dims(n, m);
                    t.push(vec![n.to_string(), m.to_string(), sign(s.eps), sign(s.eps2), sign(s.kap), sign(s.kap2)]);
                    rows.push(json!({"n": n.value(), "m": m.value(), "signs": s}));
                }
            }
            (t, Value::Array(rows))
        }
        SignTable::Spacetime => {
            let mut t = Table::new("smallest (t, s) for each (m, n)", &["m", "n", "t1", "s1", "t2", "s2"]);
            let mut rows = Vec::new();
            for m in [0i64, 2, 4, 6] {
                for n in [0i64, 2, 4, 6] {
                    let [a, b] = dims::spacetime_pairs(d(n), d(m));
                    t.push(vec![m, n, a.t.into(), a.s.into(), b.t.into(), b.s.into()].iter().map(i64::to_string).collect());
                    rows.push(json!({"m": m, "n": n, "pairs": [[a.t, a.s], [b.t, b.s]]}));
                }
            }
            (t, Value::Array(rows))
        }
        SignTable::Cardinal => {
            let rows = dims::cardinal_table(q, p)?;
            let mut t = Table::new(format!("conventions for (q,p)=({q},{p})"), &["convention", "m", "n", "t", "s", "unphysical"]);
            for r in &rows {
                t.push(vec![
                    r.convention.name().to_string(),
                    r.m.to_string(),
                    r.n.to_string(),
                    r.ts.t.to_string(),
                    r.ts.s.to_string(),
                    r.unphysical.to_string(),
                ]);
            }
            (t, serde_json::to_value(rows).expect("serializable"))
        }
    };
    Ok(Report { json, tables: vec![t], notes: Vec::new(), ok: true })
}

pub fn clifford(q: usize, p: usize, dump: bool) -> CmdResult {
    let sig = Signature::new(q, p)?;
    let m = clifford::build(sig)?;
    let relations = clifford::verify_relations(&m);
    let robinson = clifford::robinson_solution_space(&m).len();
    let cc = clifford::cc_solution_space(&m)?;
    let mut ok = relations <= 1e-12 && robinson == 1 && cc.basis.len() == 1;

    let mut signs = Table::new(
        "signs per convention",
        &["convention", "eps", "eps2", "kap", "kap2", "n", "m", "expected_n", "expected_m", "violation"],
    );
    let mut sign_rows = Vec::new();
    for conv in Convention::ALL {
        let rep = clifford::extract_signs(&m, conv)?;
        let (n, dm) = dims::dims_from_signs(rep.signs);
        let (en, em) = clifford::expected_dims(sig, conv);
        ok &= (n, dm) == (en, em) && rep.violation <= 1e-12;
        let s = rep.signs;
        signs.push(vec![
            conv.name().to_string(),
            sign(s.eps),
            sign(s.eps2),
            sign(s.kap),
            sign(s.kap2),
            n.to_string(),
            dm.to_string(),
            en.to_string(),
            em.to_string(),
            real(rep.violation),
        ]);
        sign_rows.push(json!({
            "convention": conv.name(), "signs": s, "n": n.value(), "m": dm.value(),
            "expected": [en.value(), em.value()], "violation": rep.violation,
        }));
    }
    let summary = Table::pairs(
        format!("module {sig}"),
        vec![
            ("dimension", m.dim.to_string()),
            ("relation violation", real(relations)),
            ("Robinson solution dimension", robinson.to_string()),
            ("charge conjugation solution dimension", cc.basis.len().to_string()),
            ("J+ squared", sign(cc.square_sign)),
        ],
    );
    let mut json = json!({
        "signature": sig, "dim": m.dim, "relation_violation": relations,
        "robinson_solution_dim": robinson, "cc_solution_dim": cc.basis.len(),
        "jplus_square": cc.square_sign, "signs": sign_rows,
    });
    let mut tables = vec![summary, signs];
    if dump {
        for (a, g) in m.gammas.iter().enumerate() {
            tables.push(Table::matrix(format!("gamma^{a}"), g));
        }
        for (name, x) in [
            ("chi", &m.chi),
            ("chi_minus", &m.chi_minus),
            ("chi_plus", &m.chi_plus),
            ("eta_plus", &m.eta_plus),
            ("eta_minus", &m.eta_minus),
            ("gram_robinson", m.gram_robinson.gram()),
            ("gram_antirobinson", m.gram_antirobinson.gram()),
            ("Jplus", &m.jplus.mat),
            ("Jminus", &m.jminus.mat),
        ] {
            tables.push(Table::matrix(name, x));
        }
        json["module"] = serde_json::to_value(&m).expect("serializable");
    }
    Ok(Report { json, tables, notes: Vec::new(), ok })
}

pub fn tensor(left: (usize, usize), right: (usize, usize), lc: ConventionArg, rc: ConventionArg) -> CmdResult {
    let s1 = Signature::new(left.0, left.1)?;
    let s2 = Signature::new(right.0, right.1)?;
    let (m1, m2) = (clifford::build(s1)?, clifford::build(s2)?);
    let prod = tensor::tensor_modules(&m1, &m2)?;
    let relations = clifford::verify_relations(&prod);
    let mut ok = relations <= 1e-12;

    let mut modules = Table::new(
        format!("module {s1} x {s2}"),
        &["convention", "n", "m", "expected_n", "expected_m"],
    );
    let mut module_rows = Vec::new();
    for conv in Convention::ALL {
        let (n1, d1) = clifford::expected_dims(s1, conv);
        let (n2, d2) = clifford::expected_dims(s2, conv);
        let (n, d) = dims::dims_from_signs(clifford::extract_signs(&prod, conv)?.signs);
        ok &= (n, d) == (n1 + n2, d1 + d2);
        modules.push(vec![conv.name().into(), n.to_string(), d.to_string(), (n1 + n2).to_string(), (d1 + d2).to_string()]);
        module_rows.push(json!({"convention": conv.name(), "dims": [n.value(), d.value()], "expected": [(n1 + n2).value(), (d1 + d2).value()]}));
    }

    let (c1, c2): (Convention, Convention) = (lc.into(), rc.into());
    let t1 = IndefiniteTriple::from_clifford(&m1, c1)?;
    let t2 = IndefiniteTriple::from_clifford(&m2, c2)?;
    let t = tensor::tensor_ist(&t1, &t2)?;
    let axioms = ist::check_axioms(&t);
    let (dims1, dims2, dims) = (ist::triple_dims(&t1)?, ist::triple_dims(&t2)?, ist::triple_dims(&t)?);
    let additive = dims == (dims1.0 + dims2.0, dims1.1 + dims2.1);
    ok &= axioms.pass() && additive;
    let fmt = |d: (Mod8Dim, Mod8Dim)| format!("({},{})", d.0, d.1);
    let triple = Table::pairs(
        format!("triple {s1} {} x {s2} {}", c1.name(), c2.name()),
        vec![
            ("dimension", t.dim().to_string()),
            ("relation violation", real(relations)),
            ("axioms pass", axioms.pass().to_string()),
            ("max axiom violation", real(axioms.max_violation())),
            ("left (n,m)", fmt(dims1)),
            ("right (n,m)", fmt(dims2)),
            ("product (n,m)", fmt(dims)),
            ("additive", additive.to_string()),
        ],
    );
    let json = json!({
        "left": s1, "right": s2, "relation_violation": relations, "module_dims": module_rows,
        "triple": {
            "conventions": [c1.name(), c2.name()], "dim": t.dim(), "axioms": axioms,
            "left_dims": [dims1.0.value(), dims1.1.value()], "right_dims": [dims2.0.value(), dims2.1.value()],
            "dims": [dims.0.value(), dims.1.value()], "additive": additive,
        },
    });
    Ok(Report { json, tables: vec![modules, triple], notes: Vec::new(), ok })
}

/// Reads JSON, reporting the failing field path and position.
fn load<T: DeserializeOwned>(path: &FsPath) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        CliError::invalid(format!("{}: field `{field}`: {inner}", path.display()))
    })
}

pub fn ist_check(path: &FsPath) -> CmdResult {
    let t: IndefiniteTriple = load(path)?;
    let rep = ist::check_axioms(&t);
    let mut axioms = Table::new("axioms", &["axiom", "violation", "status"]);
    for e in &rep.entries {
        let pass = e.violation <= rep.tolerance;
        axioms.push(vec![e.name.to_string(), real(e.violation), if pass { "pass" } else { "FAIL" }.into()]);
    }
    let dims = ist::triple_dims(&t).ok();
    let (oz, fo) = (ist::order_zero(&t), ist::first_order(&t));
    let summary = Table::pairs(
        "triple",
        vec![
            ("dimension", t.dim().to_string()),
            ("sigma", t.sigma.to_string()),
            ("(n,m)", dims.map_or("n/a".into(), |(n, m)| format!("({n},{m})"))),
            ("order zero violation", real(oz)),
            ("first order violation", real(fo)),
            ("algebra closure defect", real(t.algebra.closure_defect())),
        ],
    );
    let json = json!({
        "dim": t.dim(), "sigma": t.sigma, "axioms": rep, "pass": rep.pass(),
        "dims": dims.map(|(n, m)| [n.value(), m.value()]), "order_zero": oz, "first_order": fo,
    });
    Ok(Report { json, tables: vec![summary, axioms], notes: Vec::new(), ok: rep.pass() })
}

pub fn sm(args: &SmArgs) -> CmdResult {
    let input: SmInput = load(&args.model)?;
    input.validate()?;
    let model = sm::build_sm(input.yukawas.clone(), input.s, input.eps_f)?;
    let traces = sm::yukawa_traces(&input.yukawas);
    let coeffs = sm::lagrangian_coeffs(&input.z, &input.yukawas);
    let coeff_table = || {
        let mut t = Table::new("Lagrangian coefficients", &["coefficient", "value"]);
        for (k, v) in ["a", "b", "c", "d", "e"].iter().zip(coeffs.as_array()) {
            t.push(vec![k.to_string(), real(v)]);
        }
        t
    };

    if args.coeffs {
        let mut tables = vec![coeff_table()];
        let mut json = json!({"coeffs": coeffs, "traces": traces});
        let mut ok = true;
        if args.oracle {
            let oracle = sm::lagrangian_coeffs_oracle(&input.z, &input.yukawas)?;
            let diff = coeffs.rel_diff(&oracle);
            ok = diff <= 1e-9;
            let mut t = Table::new("trace oracle", &["coefficient", "value"]);
            for (k, v) in ["a", "b", "c", "d", "e"].iter().zip(oracle.as_array()) {
                t.push(vec![k.to_string(), real(v)]);
            }
            t.push(vec!["relative difference".into(), real(diff)]);
            tables.push(t);
            json["oracle"] = json!(oracle);
            json["relative_difference"] = json!(diff);
        }
        return Ok(Report { json, tables, notes: Vec::new(), ok });
    }
    if args.couplings {
        let c = sm::couplings(&coeffs)?;
        let t = Table::pairs(
            "couplings",
            vec![("g_Y", real(c.g_y)), ("g_W", real(c.g_w)), ("g_C", real(c.g_c)), ("v0", real(c.v0)), ("v", real(c.v))],
        );
        let json = json!({"coeffs": coeffs, "couplings": c});
        return Ok(Report { json, tables: vec![coeff_table(), t], notes: Vec::new(), ok: true });
    }
    if args.higgs_projection {
        if args.qh.len() != 4 {
            return Err(CliError::invalid(format!("--qh needs 4 comma-separated numbers (got {})", args.qh.len())));
        }
        let qh = Quaternion::new(Complex64::new(args.qh[0], args.qh[1]), Complex64::new(args.qh[2], args.qh[3]));
        let closed = model.higgs_projection_closed(&qh);
        let generic = model.higgs_projection_generic(&qh)?;
        let err = ncg_core::linalg::rel_dist(&closed, &generic);
        let prefactor = -(qh.norm_sqr() + 2.0 * qh.alpha.re);
        let t = Table::pairs(
            "Higgs projection",
            vec![
                ("prefactor -(|q|^2 + 2 Re alpha)", real(prefactor)),
                ("closed-form norm", real(ncg_core::linalg::frob(&closed))),
                ("relative error vs generic", real(err)),
            ],
        );
        let json = json!({"prefactor": prefactor, "relative_error": err});
        return Ok(Report { json, tables: vec![t], notes: Vec::new(), ok: err <= 1e-9 });
    }

    let axioms = ist::check_axioms(&model.triple);
    let dims = ist::triple_dims(&model.triple)?;
    let (oz, fo) = (ist::order_zero(&model.triple), ist::first_order(&model.triple));
    let t = Table::pairs(
        format!("Standard Model triple, N={}", model.n()),
        vec![
            ("dimension", model.triple.dim().to_string()),
            ("axioms pass", axioms.pass().to_string()),
            ("(n,m)", format!("({},{})", dims.0, dims.1)),
            ("order zero violation", real(oz)),
            ("first order violation", real(fo)),
            ("C1", real(traces.c1)),
            ("C2", real(traces.c2)),
            ("C3", real(traces.c3)),
            ("C1^2 <= 4N(C2 + 2 C3)", traces.inequality_ok.to_string()),
        ],
    );
    let json = json!({
        "N": model.n(), "dim": model.triple.dim(), "axioms": axioms, "dims": [dims.0.value(), dims.1.value()],
        "order_zero": oz, "first_order": fo, "traces": traces,
    });
    Ok(Report { json, tables: vec![t], notes: Vec::new(), ok: axioms.pass() })
}

fn parse_scan(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::invalid(format!("--scan-a expects lo:hi:count with 0 < lo, hi (got {s:?})"));
    let [lo, hi, n] = parts[..] else { return Err(bad()) };
    let (lo, hi): (f64, f64) = (lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?);
    let n: usize = n.parse().map_err(|_| bad())?;
    if !(lo > 0.0 && hi > 0.0 && n >= 1) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi / lo).ln() / (n - 1) as f64;
    Ok((0..n).map(|k| lo * (step * k as f64).exp()).collect())
}

pub fn spectral_action(args: &SpectralArgs) -> CmdResult {
    if args.d != args.t + args.s {
        return Err(CliError::invalid(format!("d = {} but t + s = {}", args.d, args.t + args.s)));
    }
    let f = match args.cutoff {
        Cutoff::Gaussian => CutoffFn::Gaussian,
        Cutoff::Exp => CutoffFn::Exp,
    };
    let path = match args.path {
        Path::Auto => EvalPath::Auto,
        Path::Grid => EvalPath::Grid,
        Path::Fourier => EvalPath::Fourier,
    };
    let (points, slope) = match &args.scan_a {
        Some(scan) => {
            let a_values = parse_scan(scan)?;
            if a_values.len() >= 3 {
                let base = TorusSpec::with_length(args.t, args.s, args.length, a_values[0])?;
                let fit = specact::divergence_exponent(&base, &a_values, &f, args.lambda, path)?;
                (fit.points, Some(fit.slope))
            } else {
                let pts = a_values
                    .iter()
                    .map(|&a| {
                        let spec = TorusSpec::with_length(args.t, args.s, args.length, a)?;
                        point(&spec, &f, args.lambda, path)
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                (pts, None)
            }
        }
        None => {
            let n = args.n.ok_or_else(|| CliError::invalid("--N is required without --scan-a"))?;
            let spec = TorusSpec::new(args.t, args.s, n, args.length / n as f64)?;
            (vec![point(&spec, &f, args.lambda, path)?], None)
        }
    };
    let mut t = Table::new("spectral action", &["a", "N", "Lambda", "S", "logS"]);
    for p in &points {
        t.push(vec![real(p.a), p.n.to_string(), real(p.lambda), real(p.action), real(p.log_action)]);
    }
    let mut notes = Vec::new();
    if let Some(s) = slope {
        notes.push(format!("slope of log S against log(1/a) over the three smallest a: {}", real(s)));
    }
    let json = json!({"t": args.t, "s": args.s, "L": args.length, "points": points, "slope": slope});
    Ok(Report { json, tables: vec![t], notes, ok: true })
}

fn point(spec: &TorusSpec, f: &CutoffFn, lambda: f64, path: EvalPath) -> Result<specact::ScanPoint, Error> {
    let action = specact::spectral_action(spec, f, lambda, path)?;
    Ok(specact::ScanPoint { a: spec.a, n: spec.n, lambda, action, log_action: action.ln() })
}

pub fn verify_all(seed: u64, max_dim: usize, only: &[u8]) -> CmdResult {
    if !(2..=clifford::MAX_DIM).contains(&max_dim) || max_dim % 2 != 0 {
        return Err(CliError::invalid(format!("--max-dim must be even and in 2..={} (got {max_dim})", clifford::MAX_DIM)));
    }
    let ids: Vec<u8> = if only.is_empty() { (1..=verify::CRITERION_COUNT).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|&&id| verify::criterion_title(id).is_none()) {
        return Err(CliError::invalid(format!("unknown criterion {bad} (valid: 1..={})", verify::CRITERION_COUNT)));
    }
    let opts = VerifyOptions { seed, max_dim };
    let reports: Vec<_> = ids.iter().filter_map(|&id| verify::run_criterion(id, &opts)).collect();
    let mut t = Table::new(format!("acceptance criteria (seed {seed}, max dim {max_dim})"), &["id", "criterion", "status", "seconds", "detail"]);
    for r in &reports {
        t.push(vec![
            r.id.to_string(),
            r.title.to_string(),
            if r.passed { "PASS" } else { "FAIL" }.into(),
            format!("{:.2}", r.seconds),
            r.detail.clone(),
        ]);
    }
    let ok = reports.iter().all(|r| r.passed);
    let json = json!({"seed": seed, "max_dim": max_dim, "criteria": reports, "all_passed": ok});
    Ok(Report { json, tables: vec![t], notes: Vec::new(), ok })
}
