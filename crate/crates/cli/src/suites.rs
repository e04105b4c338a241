//! One function per subcommand, each producing a [`Report`].

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use loopvir::geom::build::default_series_order;
use loopvir::geom::cache;
use loopvir::geom::checks::{
    commutator_sweep, degree_constraints, duality_check, gram_consistency, highest_weight,
    order_independence, rank_check, recursion_vs_residue, singular_vector_identity, Outcome,
};
use loopvir::geom::solver::solve_lowering_two;
use loopvir::geom::{Family, OperatorTable};
use loopvir::loewner::{forward_map, sample_sle_driving, tip, trace, DrivingFunction};
use loopvir::poly::{CoeffPoly, Generator};
use loopvir::rational::{format_rational, int, rat, to_f64, Rational};
use loopvir::spectral::{
    bubble_difference, bubble_fd_oracle, bubble_mass, mobius_annulus, poisson_annulus,
    poisson_disc, reflection_r, smallest_real_pole, u_of_q,
};
use loopvir::verma::{
    central_charge, gram_inverse, kac_lambda, kac_roots, singular_vectors, Verma,
};

use crate::config::{ConfigError, RunConfig};
use crate::report::Report;

type Checks = Vec<(String, bool, String)>;

fn outcome(o: Outcome) -> (bool, String) {
    (o.passed, o.witness)
}

fn outcomes(list: Vec<Outcome>) -> Checks {
    list.into_iter()
        .map(|o| (o.name, o.passed, o.witness))
        .collect()
}

fn params(cfg: &RunConfig, keys: &[&str]) -> Value {
    let all = serde_json::to_value(cfg).expect("config serializes");
    let mut out = serde_json::Map::new();
    for k in keys {
        out.insert(k.to_string(), all[*k].clone());
    }
    Value::Object(out)
}

/// An operator table, preloaded from the cache directory when one is configured.
pub struct Tables {
    pub table: OperatorTable,
    dir: Option<std::path::PathBuf>,
}

impl Tables {
    pub fn open(cfg: &RunConfig) -> Self {
        let mut table = OperatorTable::new().with_extra_order(cfg.extra_order);
        if let Some(dir) = &cfg.cache_dir {
            match cache::load(dir, &mut table) {
                Ok(r) => {
                    for (p, why) in &r.corrupt {
                        eprintln!(
                            "warning: corrupt cache entry {}: {why}; rebuilding",
                            p.display()
                        );
                    }
                    for p in &r.stale {
                        eprintln!(
                            "warning: ignoring cache entry {} from another format version",
                            p.display()
                        );
                    }
                }
                Err(e) => eprintln!("warning: cache unreadable ({e}); building from scratch"),
            }
        }
        Tables {
            table,
            dir: cfg.cache_dir.clone(),
        }
    }

    /// Writes the table back; corrupt entries are replaced by rebuilt ones.
    pub fn persist(&self) {
        if let Some(dir) = &self.dir {
            if let Err(e) = cache::save(dir, &self.table) {
                eprintln!("warning: cannot write cache: {e}");
            }
        }
    }
}

pub fn verify_commutators(cfg: &RunConfig, t: &mut OperatorTable) -> Report {
    let mut r = Report::new(
        "verify-commutators",
        params(cfg, &["max_mode", "max_degree"]),
        cfg.timing,
    );
    r.run_many("commutators", || {
        commutator_sweep(t, cfg.max_mode as i32, cfg.max_degree).map(outcomes)
    });
    r
}

pub fn gram(cfg: &RunConfig, t: &mut OperatorTable) -> Result<Report, ConfigError> {
    let kappa = cfg.kappa_exact()?;
    let lambda = cfg.lambda_exact()?;
    let mut r = Report::new(
        "gram",
        params(cfg, &["level", "kappa", "lambda"]),
        cfg.timing,
    );
    let mut v = Verma::symbolic().with_max_level(cfg.level.max(loopvir::verma::DEFAULT_MAX_LEVEL));
    let g = v.gram(cfg.level);
    r.push("symmetric", g.is_symmetric(), format!("{0}x{0}", g.dim()));
    r.run(format!("geometric gram level {}", cfg.level), || {
        gram_consistency(t, &mut v, cfg.level).map(outcome)
    });
    if let Some(w) = lambda {
        let c = central_charge(&kappa);
        let name = format!(
            "inverse at lambda = {}, c = {}",
            format_rational(&w),
            format_rational(&c)
        );
        match gram_inverse(&g, &w, &c) {
            Some(inv) => {
                let prod = loopvir::linalg::mat_mul(&g.specialize(&w, &c), &inv);
                let ok = prod == loopvir::linalg::identity(g.dim());
                r.push(name, ok, "B B^-1 = I");
            }
            None => {
                // singular exactly on the Kac table
                let label = kac_label(cfg.level, &kappa, &w);
                let witness = match label {
                    Some((a, b)) => format!("singular, Kac weight lambda_({a},{b})"),
                    None => "singular off the Kac table".into(),
                };
                r.push(name, label.is_some(), witness);
            }
        }
    }
    r.data = g.to_json();
    Ok(r)
}

fn kac_label(level: u32, kappa: &Rational, w: &Rational) -> Option<(u32, u32)> {
    (1..=level.max(1))
        .flat_map(|a| (1..=level.max(1)).map(move |b| (a, b)))
        .filter(|(a, b)| a * b <= level.max(1))
        .find(|(a, b)| &kac_lambda(*a, *b, kappa) == w)
}

pub fn kac(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let kappa = cfg.kappa_exact()?;
    let mut r = Report::new("kac", params(cfg, &["level", "kappa"]), cfg.timing);
    let mut v = Verma::symbolic().with_max_level(cfg.level.max(loopvir::verma::DEFAULT_MAX_LEVEL));
    match kac_roots(&mut v, cfg.level, &kappa) {
        Ok(k) => {
            r.push(
                "determinant factors over Kac weights",
                k.residual_degree == 0,
                format!("residual {}", k.residual),
            );
            if cfg.level == 2 {
                let l = CoeffPoly::lambda();
                let root = |x: Rational| l.sub(&CoeffPoly::constant(x));
                let want = l
                    .scale(&int(32))
                    .mul(&root(kac_lambda(1, 2, &kappa)))
                    .mul(&root(kac_lambda(2, 1, &kappa)));
                r.push(
                    "32 lambda (lambda - lambda_12)(lambda - lambda_21)",
                    k.determinant == want,
                    format!("{}", k.determinant),
                );
            }
            let roots: Vec<Value> = k
                .roots
                .iter()
                .map(|x| {
                    json!({
                        "value": format_rational(&x.value),
                        "multiplicity": x.multiplicity,
                        "labels": x.labels,
                    })
                })
                .collect();
            r.data = json!({
                "central_charge": format_rational(&central_charge(&kappa)),
                "determinant": k.determinant.to_string(),
                "roots": roots,
            });
        }
        Err(e) => r.push("determinant", false, e.to_string()),
    }
    Ok(r)
}

fn kappa_samples() -> Vec<Rational> {
    (1..=9).flat_map(|n| [rat(n, 1), rat(n, 7)]).collect()
}

pub fn singular(cfg: &RunConfig, t: &mut OperatorTable) -> Result<Report, ConfigError> {
    let kappa = cfg.kappa_exact()?;
    let lambda = cfg
        .lambda_exact()?
        .unwrap_or_else(|| kac_lambda(1, 2, &kappa));
    let mut r = Report::new(
        "singular",
        params(cfg, &["level", "kappa", "lambda"]),
        cfg.timing,
    );
    let samples = kappa_samples();
    r.run(
        "geometric null vector, lambda = (6 - kappa)/(2 kappa)",
        || singular_vector_identity(t, "lambda_12", |k| kac_lambda(1, 2, k), &samples).map(outcome),
    );
    r.run("geometric null vector, lambda = (3 kappa - 8)/16", || {
        singular_vector_identity(t, "lambda_21", |k| kac_lambda(2, 1, k), &samples).map(outcome)
    });
    let c = central_charge(&kappa);
    let mut v = Verma::symbolic().with_max_level(cfg.level.max(loopvir::verma::DEFAULT_MAX_LEVEL));
    let ker = singular_vectors(&mut v, cfg.level, &lambda, &c);
    let mut vs = Verma::specialized(lambda.clone(), c.clone());
    let mut listed = Vec::new();
    for (i, x) in ker.iter().enumerate() {
        let x = x.substitute(&loopvir::verma::parameter_assignment(&lambda, &c));
        let killed = [1, 2].iter().all(|&n| vs.apply(n, &x).is_zero());
        r.push(
            format!("kernel vector {i} annihilated by L_1, L_2"),
            killed,
            "",
        );
        let coords: Vec<Value> = x
            .terms()
            .map(|(k, c)| json!({"partition": k.to_string(), "coefficient": c.to_string()}))
            .collect();
        listed.push(Value::Array(coords));
    }
    r.data = json!({
        "level": cfg.level,
        "lambda": format_rational(&lambda),
        "central_charge": format_rational(&c),
        "kernel_dimension": ker.len(),
        "kernel": listed,
    });
    Ok(r)
}

pub fn operators(cfg: &RunConfig, t: &mut OperatorTable) -> Report {
    let keys = ["max_mode", "max_index", "max_level", "extra_order"];
    let mut r = Report::new("operators", params(cfg, &keys), cfg.timing);
    let (k, idx) = (cfg.max_mode as i32, cfg.max_index);
    r.run("highest-weight", || highest_weight(t, 6).map(outcome));
    r.run("degree constraints", || {
        degree_constraints(t, k, idx).map(outcome)
    });
    for l in [2, 3] {
        r.run(format!("recursion vs residue l = {l}"), || {
            recursion_vs_residue(l, idx).map(outcome)
        });
    }
    for n in [-2, -3, -4, 1, 2] {
        r.run(format!("series-order independence mode {n}"), || {
            order_independence(n, idx.min(6), 4).map(outcome)
        });
    }
    r.run("constraint solver for L_-2", || {
        let m = idx.min(4);
        let s = solve_lowering_two(m)?;
        let b = loopvir::geom::build::residue_mode(-2, m, default_series_order(-2, m))?;
        let same = s.op.first_difference(&b);
        Ok::<_, loopvir::geom::GeomError>((
            same.is_none() && s.is_unique(),
            same.unwrap_or_else(|| format!("{} unknowns, rank {}, index {m}", s.unknowns, s.rank)),
        ))
    });
    r.run("duality pairing", || {
        duality_check(t, cfg.max_level).map(outcome)
    });
    let mut listed = Vec::new();
    for n in -k..=k {
        if let Ok(e) = t.ensure(n, idx) {
            listed.push(json!({
                "mode": n,
                "construction": e.construction.name(),
                "series_order": e.series_order,
                "max_index": e.op.max_index(),
                "alpha": e.op.alpha.to_string(),
                "beta": e.op.beta.to_string(),
                "d_a1": e.op.coeff_a(1).to_string(),
                "d_abar1": e.op.coeff_abar(1).to_string(),
            }));
        }
    }
    r.data = Value::Array(listed);
    r
}

pub fn reflection(cfg: &RunConfig) -> Result<Report, ConfigError> {
    let kappa = cfg.kappa_exact()?;
    let lambda = cfg.lambda_exact()?.unwrap_or_else(|| int(0));
    let mut r = Report::new("reflection", params(cfg, &["kappa", "lambda"]), cfg.timing);
    let (k, l) = (to_f64(&kappa), to_f64(&lambda));
    match reflection_r(Complex64::new(l, 0.0), k) {
        Ok(v) => {
            r.push(
                "evaluated",
                v.re.is_finite() && v.im.is_finite(),
                format!("R = {}", v.re),
            );
            r.data = json!({"re": v.re, "im": v.im, "smallest_pole": smallest_real_pole(k)});
        }
        Err(e) => r.push("evaluated", false, e.to_string()),
    }
    Ok(r)
}

fn relative(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn bubble_limit(cfg: &RunConfig, csv: Option<&Path>) -> Report {
    let keys = ["q", "x0", "r", "tolerance"];
    let mut r = Report::new("bubble-limit", params(cfg, &keys), cfg.timing);
    let tol = cfg.tolerance;
    r.run("annulus limit vs U(q)", || {
        let hd = poisson_disc(Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, 1e-3))?;
        let ha = poisson_annulus(cfg.q, 0.0, 1e-3)?;
        let u = u_of_q(cfg.q)?;
        let e = relative(PI * (hd - ha), u);
        Ok::<_, loopvir::spectral::SpectralError>((e < tol, format!("relative error {e:.2e}")))
    });
    r.run("bubble mass vs finite difference", || {
        let m = mobius_annulus(cfg.x0, cfg.r)?;
        let mut worst: f64 = 0.0;
        for i in 0..16 {
            let th = -PI + 2.0 * PI * i as f64 / 16.0;
            worst = worst.max(relative(
                bubble_fd_oracle(&m, th, 1e-3)?,
                bubble_mass(&m, th)?,
            ));
        }
        Ok::<_, loopvir::spectral::SpectralError>((
            worst < tol,
            format!(
                "alpha {:.6}, q {:.6}, worst relative error {worst:.2e}",
                m.alpha, m.q
            ),
        ))
    });
    r.run("U(q) -> 0 with U |log q| -> 1/2", || {
        let u = u_of_q(1e-30)?;
        let s = u * (1e-30f64).ln().abs();
        Ok::<_, loopvir::spectral::SpectralError>((
            u < 0.01 && s > 0.45 && s < 0.55,
            format!("U(1e-30) = {u:.6e}, U |log q| = {s:.12}"),
        ))
    });
    if let Some(path) = csv {
        r.run("csv written", || {
            let m = mobius_annulus(cfg.x0, cfg.r)?;
            let b = bubble_mass(&m, 0.0)?;
            let mut s = String::from("theta_p,annulus_error,bubble_error\n");
            for i in 0..=40 {
                let tp = 10f64.powf(-1.0 - 3.0 * i as f64 / 40.0);
                let hd = poisson_disc(Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, tp))?;
                let ha = poisson_annulus(cfg.q, 0.0, tp)?;
                let ea = relative(PI * (hd - ha), u_of_q(cfg.q)?);
                let eb = relative(bubble_difference(&m, 0.0, tp)?, b);
                s.push_str(&format!("{tp:e},{ea:e},{eb:e}\n"));
            }
            std::fs::write(path, s)?;
            Ok::<_, Box<dyn std::error::Error>>((true, path.display().to_string()))
        });
    }
    r
}

pub fn loewner_demo(
    cfg: &RunConfig,
    trace_csv: Option<&Path>,
    driver_csv: Option<&Path>,
) -> Result<Report, ConfigError> {
    let kappa = to_f64(&cfg.kappa_exact()?);
    let keys = ["kappa", "t_end", "dt", "runs", "seed"];
    let mut r = Report::new("loewner-demo", params(cfg, &keys), cfg.timing);
    let zero = DrivingFunction::constant_zero(1.0, cfg.dt);
    r.run("zero driver, z = 3i, t = 1", || {
        let z = Complex64::new(0.0, 3.0);
        let g = forward_map(&zero, z, 1.0)?;
        let e = (g - (z * z + 4.0).sqrt()).norm();
        Ok::<_, loopvir::loewner::LoewnerError>((e < 1e-6, format!("error {e:.2e}")))
    });
    let t = tip(&zero, zero.steps());
    let want = 2.0 * zero.end_time().sqrt();
    let e = (t - Complex64::new(0.0, want)).norm();
    r.push(
        "zero driver tip at 2i sqrt(T)",
        e < 1e-3,
        format!("tip {t}, error {e:.2e}"),
    );
    r.run("driver variance", || {
        let dt = 1e-2;
        let ends: Vec<f64> = (0..cfg.runs)
            .map(|s| {
                sample_sle_driving(kappa, cfg.t_end, dt, cfg.seed.wrapping_add(s))
                    .map(|d| d.samples()[d.steps()])
            })
            .collect::<Result<_, _>>()?;
        let n = ends.len() as f64;
        let mean = ends.iter().sum::<f64>() / n;
        let var = ends.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let t_grid = (cfg.t_end / dt).round() * dt;
        let se = kappa * t_grid * (2.0 / (n - 1.0)).sqrt();
        Ok::<_, loopvir::loewner::LoewnerError>((
            (var - kappa * t_grid).abs() < 3.0 * se,
            format!(
                "variance {var:.5}, expected {:.5}, se {se:.5}",
                kappa * t_grid
            ),
        ))
    });
    match sample_sle_driving(kappa, cfg.t_end, cfg.dt.max(1e-3), cfg.seed) {
        Ok(w) => {
            let tr = trace(&w);
            let ok =
                tr.points[0] == Complex64::new(0.0, 0.0) && tr.points.iter().all(|p| p.im >= 0.0);
            let end = tr.points[tr.points.len() - 1];
            r.push(
                "sampled trace in closed upper half-plane",
                ok,
                format!("{} points", tr.points.len()),
            );
            r.data = json!({"tip": {"re": end.re, "im": end.im}, "steps": w.steps(), "dt": w.dt()});
            for (path, body) in [(trace_csv, tr.to_csv()), (driver_csv, w.to_csv())] {
                if let Some(p) = path {
                    let res = std::fs::write(p, body);
                    r.push(
                        format!("csv {}", p.display()),
                        res.is_ok(),
                        res.err().map(|e| e.to_string()).unwrap_or_default(),
                    );
                }
            }
        }
        Err(e) => r.push("sampled trace", false, e.to_string()),
    }
    Ok(r)
}

/// Every acceptance criterion with the configured caps.
pub fn report_all(cfg: &RunConfig, t: &mut OperatorTable) -> Report {
    let keys = [
        "max_mode",
        "max_degree",
        "max_level",
        "max_index",
        "tolerance",
        "runs",
        "seed",
    ];
    let mut r = Report::new("report-all", params(cfg, &keys), cfg.timing);
    let (k, idx) = (cfg.max_mode as i32, cfg.max_index);
    r.run("1 commutation relations", || {
        let all = commutator_sweep(t, k, cfg.max_degree)?;
        let bad = all.iter().find(|o| !o.passed);
        Ok::<_, loopvir::geom::GeomError>(match bad {
            Some(o) => (false, format!("{}: {}", o.name, o.witness)),
            None => (true, format!("{} pairs", all.len())),
        })
    });
    r.run("2 highest-weight relations", || {
        highest_weight(t, 6).map(outcome)
    });
    r.run("3 level-2 gram and determinant", || {
        let mut v = Verma::symbolic();
        let g = v.gram(2);
        let l = CoeffPoly::lambda();
        let want = [
            [
                l.mul(&l).scale(&int(8)).add(&l.scale(&int(4))),
                l.scale(&int(6)),
            ],
            [
                l.scale(&int(6)),
                l.scale(&int(4)).add(&CoeffPoly::cc().scale(&rat(1, 2))),
            ],
        ];
        let mut ok = (0..2).all(|i| (0..2).all(|j| g.entries[i][j] == want[i][j]));
        let det = v.kac_det(2)?;
        for kappa in [int(2), rat(8, 3), int(3), int(4)] {
            let mut asg = std::collections::BTreeMap::new();
            asg.insert(Generator::CC, central_charge(&kappa));
            let root = |x: Rational| l.sub(&CoeffPoly::constant(x));
            let f = l
                .scale(&int(32))
                .mul(&root(kac_lambda(1, 2, &kappa)))
                .mul(&root(kac_lambda(2, 1, &kappa)));
            ok &= det.substitute(&asg) == f;
        }
        Ok::<_, loopvir::verma::VermaError>((ok, "kappa in {2, 8/3, 3, 4}".into()))
    });
    let samples = kappa_samples();
    r.run("4 level-2 singular vector", || {
        let a = singular_vector_identity(t, "lambda_12", |x| kac_lambda(1, 2, x), &samples)?;
        let b = singular_vector_identity(t, "lambda_21", |x| kac_lambda(2, 1, x), &samples)?;
        Ok::<_, loopvir::geom::GeomError>((
            a.passed && b.passed,
            format!("{}; {}", a.witness, b.witness),
        ))
    });
    r.run("5 gram cross-oracle", || {
        let mut v = Verma::symbolic();
        for n in 0..=cfg.max_level {
            let o = gram_consistency(t, &mut v, n)?;
            if !o.passed {
                return Ok((false, o.witness));
            }
        }
        Ok::<_, loopvir::geom::GeomError>((true, format!("levels 0..={}", cfg.max_level)))
    });
    r.run("6 duality pairing", || {
        duality_check(t, cfg.max_level).map(outcome)
    });
    r.run("7 module structure", || {
        let kappa = int(3);
        let c = central_charge(&kappa);
        for w in [rat(1, 3), rat(2, 7), rat(-5, 11)] {
            for n in 0..=4 {
                let o = rank_check(t, &w, &c, n, true)?;
                if !o.passed {
                    return Ok((false, format!("{}: {}", o.name, o.witness)));
                }
            }
        }
        for (a, b) in [(1, 2), (2, 1), (1, 3)] {
            let o = rank_check(t, &kac_lambda(a, b, &kappa), &c, a * b, false)?;
            if !o.passed {
                return Ok((false, format!("{}: {}", o.name, o.witness)));
            }
        }
        Ok::<_, loopvir::geom::GeomError>((true, "kappa = 3".into()))
    });
    r.run("8 degree constraints", || {
        degree_constraints(t, k, idx).map(outcome)
    });
    r.run("9 recursion vs residue", || {
        let a = recursion_vs_residue(2, idx)?;
        let b = recursion_vs_residue(3, idx)?;
        Ok::<_, loopvir::geom::GeomError>((
            a.passed && b.passed,
            format!("{}; {}", a.witness, b.witness),
        ))
    });
    r.run("10 reflection coefficient", || {
        let mut worst: f64 = 0.0;
        let mut ok = true;
        for kappa in [2.0, 8.0 / 3.0, 3.0, 4.0] {
            let v = reflection_r(Complex64::new(0.0, 0.0), kappa)?;
            ok &= (v - 1.0).norm() < 1e-12;
            let d = (smallest_real_pole(kappa) - 0.5 * (1.0 - kappa / 8.0)).abs();
            worst = worst.max(d);
            ok &= d < 1e-9;
        }
        Ok::<_, loopvir::spectral::SpectralError>((ok, format!("pole error {worst:.1e}")))
    });
    let spectral = {
        let mut c = cfg.clone();
        c.q = 0.3;
        c.x0 = 0.3;
        c.r = 0.2;
        bubble_limit(&c, None)
    };
    let ok = spectral.passed();
    let w: Vec<String> = spectral.checks.iter().map(|c| c.witness.clone()).collect();
    r.push("11 annulus and bubble", ok, w.join("; "));
    let loewner = {
        let mut c = cfg.clone();
        c.dt = 1e-4;
        c.t_end = 1.0;
        c.kappa = "8/3".into();
        loewner_demo(&c, None, None).expect("fixed kappa parses")
    };
    let w: Vec<String> = loewner
        .checks
        .iter()
        .take(3)
        .map(|c| c.witness.clone())
        .collect();
    let ok = loewner
        .checks
        .iter()
        .take(3)
        .all(|c| c.status == crate::report::Status::Pass);
    r.push("12 loewner", ok, w.join("; "));
    r
}

/// Builds modes `-K..=K` to `max_index`, compares with what the cache held
/// and writes the table back.
pub fn cache_warm(cfg: &RunConfig, dir: &Path) -> Report {
    let keys = ["max_mode", "max_index", "extra_order", "cache_dir"];
    let mut r = Report::new("cache warm", params(cfg, &keys), cfg.timing);
    let mut old = OperatorTable::new();
    let load = cache::load(dir, &mut old);
    if let Ok(l) = &load {
        for (p, why) in &l.corrupt {
            eprintln!(
                "warning: corrupt cache entry {}: {why}; rebuilding",
                p.display()
            );
        }
    }
    let old: Vec<(i32, loopvir::geom::build::TableEntry)> =
        old.entries().map(|(m, e)| (*m, e.clone())).collect();
    let mut fresh = OperatorTable::new().with_extra_order(cfg.extra_order);
    let k = cfg.max_mode as i32;
    for n in -k..=k {
        r.run(format!("build mode {n}"), || {
            let e = fresh.ensure(n, cfg.max_index)?;
            Ok::<_, loopvir::geom::GeomError>((
                true,
                format!("{}, index {}", e.construction.name(), e.op.max_index()),
            ))
        });
    }
    for (n, e) in &old {
        if let Ok(f) = fresh.get(Family::Holomorphic, *n, 1).cloned() {
            let shared = e.op.max_index().min(f.max_index());
            let diff =
                e.op.truncated(shared)
                    .first_difference(&f.truncated(shared));
            r.push(
                format!("mode {n} matches cached coefficients"),
                diff.is_none(),
                diff.unwrap_or_else(|| format!("indices 1..={shared}")),
            );
        }
    }
    match cache::save(dir, &fresh) {
        Ok(n) => r.push("saved", true, format!("{n} entries in {}", dir.display())),
        Err(e) => r.push("saved", false, e.to_string()),
    }
    r
}

pub fn cache_clear(cfg: &RunConfig, dir: &Path) -> Report {
    let mut r = Report::new("cache clear", params(cfg, &["cache_dir"]), cfg.timing);
    match cache::clear(dir) {
        Ok(n) => r.push("cleared", true, format!("{n} entries removed")),
        Err(e) => r.push("cleared", false, e.to_string()),
    }
    r
}

pub fn cache_stat(cfg: &RunConfig, dir: &Path) -> Report {
    let mut r = Report::new("cache stat", params(cfg, &["cache_dir"]), cfg.timing);
    let mut listed = Vec::new();
    match cache::cache_files(dir) {
        Ok(files) => {
            for p in files {
                let name = p
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let entry = std::fs::read(&p)
                    .map_err(|e| e.to_string())
                    .and_then(|d| cache::decode_entry(&d).map_err(|e| e.to_string()));
                match entry {
                    Ok(e) => listed.push(json!({
                        "file": name,
                        "mode": e.op.mode,
                        "max_index": e.op.max_index(),
                        "construction": e.construction.name(),
                        "series_order": e.series_order,
                    })),
                    Err(why) => listed.push(json!({"file": name, "error": why})),
                }
            }
            let bad = listed.iter().filter(|v| v.get("error").is_some()).count();
            r.push(
                "readable entries",
                bad == 0,
                format!("{} files, {bad} unreadable", listed.len()),
            );
        }
        Err(e) => r.push("readable entries", false, e.to_string()),
    }
    r.data = Value::Array(listed);
    r
}
