//! One line per acceptance criterion, then a single assertion over all of them.

use std::time::{Duration, Instant};

use microwidth::bounds::{pq6_inv_t, pq6_params};
use microwidth::experiment::{run_verify, weight_sandwich, ExperimentConfig};
use microwidth::partition::{count_model, count_n};
use microwidth::prelude::*;
use num_traits::One;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn e(s: &str) -> Exponent {
    s.parse().unwrap()
}

fn r(s: &str) -> Q {
    parse_rational(s).unwrap()
}

fn diagonal_config(model: &str, delta: &str, sp: &str) -> ExperimentConfig {
    format!(
        "p1 = 2\np2 = 2\nq1 = 2\nq2 = 2\ndelta = {delta}\ns_prime = {sp}\n{model}\nn = 2\n\
         j_max = 12\ni_max = 14\nk_min = 16\nk_max = 4096\npoints = 40\ntolerance = 0.07\n"
    )
    .parse()
    .unwrap()
}

fn slope_of(report: &microwidth::experiment::Report, key: &str) -> f64 {
    report.get(key).unwrap().parse().unwrap()
}

fn diagonal_run(cfg: &ExperimentConfig, kappa: &str, lo: f64, hi: f64) -> (bool, String) {
    let params = cfg.params().unwrap();
    let predicted = rate_approximation(&params);
    let rep = run_verify(cfg).unwrap();
    let (slope, r2) = (slope_of(&rep, "slope"), slope_of(&rep, "r2"));
    let ok = predicted.kappa == Some(r(kappa)) && (lo..=hi).contains(&slope);
    (ok, format!("kappa {} slope {slope:.4} r2 {r2:.4}", predicted.kappa.map_or("-".into(), |k| k.to_string())))
}

fn criterion_1() -> Outcome {
    let cfg = diagonal_config("model = facecube\nm = 1", "6/5", "1");
    let rep = run_verify(&cfg).unwrap();
    let (ok, detail) = diagonal_run(&cfg, "1/2", -0.57, -0.43);
    let r2 = slope_of(&rep, "r2");
    outcome(ok && r2 >= 0.98, detail)
}

fn criterion_2() -> Outcome {
    let a = diagonal_config("model = facecube\nm = 1", "1/2", "4");
    let pa = a.params().unwrap();
    let (ok_a, da) = diagonal_run(&a, "1/2", -0.57, -0.43);
    let b = diagonal_config("model = point", "1/2", "1");
    let pb = b.params().unwrap();
    let (ok_b, db) = diagonal_run(&b, "1/2", -0.57, -0.43);
    let branches = pa.delta / pa.d < pa.s_prime / pa.nq() && pb.d == Q::from_integer(0);
    outcome(
        ok_a && ok_b && branches,
        format!("facecube delta/d branch: {da}; point s'/n branch: {db}"),
    )
}

fn criterion_3() -> Outcome {
    let models = [
        ("point", DSetModel::point(vec![0.0, 0.0])),
        ("facecube", DSetModel::face_cube(1, 2).unwrap()),
        ("cantor", DSetModel::cantor_product(q(1, 3), 0, 1).unwrap()),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, u) in models {
        let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
        for j in 0..=10 {
            for i in 0..=10 {
                let n = count_n(&u, j, i).unwrap();
                if n > 0 {
                    let ratio = n as f64 / count_model(u.n, u.d, j, i);
                    c1 = c1.min(ratio);
                    c2 = c2.max(ratio);
                }
            }
        }
        pass &= c2 / c1 <= 64.0;
        parts.push(format!("{name} [{c1:.3}, {c2:.3}] spread {:.2}", c2 / c1));
    }
    outcome(pass, parts.join("; "))
}

const GRID_P: [&str; 6] = ["5/4", "3/2", "2", "3", "4", "6"];
const GRID_RATIO: [&str; 5] = ["1/4", "1/2", "1", "2", "4"];

fn grid() -> Vec<EmbeddingParams> {
    let mut out = Vec::new();
    for p1 in GRID_P {
        for p2 in GRID_P {
            for dd in GRID_RATIO {
                for sn in GRID_RATIO {
                    let (delta, sp) = (r(dd), r(sn) * qi(2));
                    out.push(EmbeddingParams::from_exponents(e(p1), e(p2), e(p1), e(p2), delta, sp, qi(1), 2).unwrap());
                }
            }
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let grid = grid();
    let (mut compared, mut mismatched) = (0, 0);
    for p in &grid {
        let dual = EmbeddingParams::from_exponents(p.p2().conjugate(), p.p1().conjugate(), p.target.q, p.source.q, p.delta, p.s_prime, p.d, p.n)
            .unwrap();
        let (c, d) = (rate_gelfand(p), rate_kolmogorov(&dual));
        if c.kind == RateKind::Exact && d.kind == RateKind::Exact {
            compared += 1;
            if c.kappa != d.kappa {
                mismatched += 1;
            }
        }
    }
    outcome(
        grid.len() >= 200 && compared > 0 && mismatched == 0,
        format!("{} tuples, {compared} exact pairs, {mismatched} mismatches", grid.len()),
    )
}

fn criterion_5() -> Outcome {
    let (mut triples, mut bad_order, mut two_sided, mut bad_two) = (0, 0, 0, 0);
    for p in grid() {
        let res = [rate_approximation(&p), rate_gelfand(&p), rate_kolmogorov(&p)];
        if res.iter().all(|x| x.kind == RateKind::Exact) {
            triples += 1;
            if !(res[0].kappa <= res[1].kappa && res[0].kappa <= res[2].kappa) {
                bad_order += 1;
            }
        }
        for x in res.iter().filter(|x| x.kind == RateKind::TwoSided) {
            two_sided += 1;
            if x.kappa_ub > x.kappa_lb {
                bad_two += 1;
            }
        }
    }
    outcome(
        bad_order == 0 && bad_two == 0 && triples > 0,
        format!("{triples} exact triples, {bad_order} order violations; {two_sided} two-sided, {bad_two} inverted"),
    )
}

fn criterion_6() -> Outcome {
    let cfg: ExperimentConfig = "p1 = 3\np2 = 1\nq1 = 1\nq2 = 1\ndelta = 3\ns_prime = 5\nmodel = facecube\nm = 1\nn = 2\n\
                                 j_max = 8\ni_max = 8\nk_min = 16\nk_max = 4096\npoints = 30\nscheme = greedy\ntolerance = 0.15\n"
        .parse()
        .unwrap();
    let p = cfg.params().unwrap();
    let res = rate_approximation(&p);
    let tilde_ok = p.p_tilde.is_some_and(|t| t < Exponent::Finite(Q::one()));
    let rep = run_verify(&cfg).unwrap();
    let (su, sl) = (slope_of(&rep, "slope_upper"), slope_of(&rep, "slope_lower"));
    let ordered = rep.get("lower_below_upper") == Some("true");
    let target = -11.0 / 6.0;
    let pass = res.kappa == Some(q(11, 6))
        && tilde_ok
        && ordered
        && (su - target).abs() <= 0.15
        && (sl - target).abs() <= 0.15;
    outcome(pass, format!("kappa 11/6, upper slope {su:.4}, lower slope {sl:.4}, lower <= upper: {ordered}"))
}

fn criterion_7() -> Outcome {
    let o = CatalogOptions::default();
    let cases = [
        (DSetModel::face_cube(1, 2).unwrap(), ("2", "2", "6/5", "1"), 7u32),
        (DSetModel::face_cube(1, 2).unwrap(), ("3", "1", "3", "5"), 6),
        (DSetModel::point(vec![0.0, 0.0]), ("4/3", "4", "1/10", "1/5"), 6),
        (DSetModel::cantor_product(q(1, 3), 0, 1).unwrap(), ("1", "inf", "1", "2"), 6),
    ];
    let mut checked = 0;
    let mut pass = true;
    for (u, (p1, p2, dl, sp), jm) in cases {
        let d = u.d_exact.unwrap_or(q(631, 1000));
        let p = EmbeddingParams::from_exponents(e(p1), e(p2), e(p1), e(p2), r(dl), r(sp), d, u.n).unwrap();
        let part = partition(&u, jm, jm).unwrap();
        for scheme in [Scheme::Pq5, Scheme::Pq6, Scheme::Greedy] {
            for kind in WidthKind::ALL {
                if scheme == Scheme::Pq6 && pq6_inv_t(&p, kind).is_none_or(|t| pq6_params(&p, t).is_err()) {
                    continue;
                }
                let plan = allocate(part.total_dimension() + 1, &part, &p, scheme, kind, &o).unwrap();
                pass &= upper_bound(&plan, &part, &p, &o).unwrap() == 0.0;
                checked += 1;
            }
        }
    }
    outcome(pass, format!("{checked} plans at K = dimension + 1"))
}

fn criterion_8() -> Outcome {
    let u = DSetModel::face_cube(1, 2).unwrap();
    let part = partition(&u, 12, 14).unwrap();
    let sp = 1.0;
    let (c1, c2) = weight_sandwich(&part, sp).unwrap();
    outcome(c2 / c1 <= 4f64.powf(sp), format!("[{c1:.4}, {c2:.4}], ratio {:.4} <= 4", c2 / c1))
}

fn criterion_9() -> Outcome {
    let mut worst_fit = 0.0f64;
    for (num, den) in [(-3, 2), (-1, 2), (-11, 6), (0, 1), (2, 3), (-7, 3)] {
        let kappa = num as f64 / den as f64;
        let pts = geometric_grid_points(kappa);
        let (s, _) = fit_slope(&BoundCurve::new(pts, CurveRole::Exact, "synthetic"), 1, u64::MAX).unwrap();
        worst_fit = worst_fit.max((s - kappa).abs());
    }

    let mut involution_ok = 0;
    for a in 1..=10i128 {
        for b in 1..=5i128 {
            let p = Exponent::Finite(q(a + b, b));
            if conjugate(&conjugate(&p)) == p {
                involution_ok += 1;
            }
        }
    }

    let mut runner = TestRunner::deterministic();
    let entry = (0u32..=4, -6i64..=6, -6i64..=6, -5.0f64..5.0);
    let strat = (
        prop::collection::vec(entry.clone(), 0..10),
        prop::collection::vec(entry, 0..10),
        prop::sample::select(vec!["1/2", "1", "3/2", "2", "4", "inf"]),
        prop::sample::select(vec!["1/2", "1", "3/2", "2", "4", "inf"]),
    );
    let mut violations = 0;
    for _ in 0..1000 {
        let (x, y, p, qq) = strat.new_tree(&mut runner).unwrap().current();
        let spec = SpaceSpec::new(qi(1), e(p), e(qq), qi(1), DSetModel::face_cube(1, 2).unwrap());
        let build = |v: &[(u32, i64, i64, f64)]| {
            let mut el = SeqElement::new(4, 4);
            for (j, a, b, val) in v {
                el.insert(*j, vec![*a, *b], *val).unwrap();
            }
            el
        };
        let (x, y) = (build(&x), build(&y));
        let rho = spec.rho();
        let lhs = norm(&x.add(&y), &spec).powf(rho);
        let rhs = norm(&x, &spec).powf(rho) + norm(&y, &spec).powf(rho);
        if lhs > rhs * (1.0 + 1e-12) + 1e-12 {
            violations += 1;
        }
    }
    outcome(
        worst_fit < 1e-9 && involution_ok == 50 && violations == 0,
        format!("fit error {worst_fit:.2e}, involution {involution_ok}/50, quasi-triangle violations {violations}/1000"),
    )
}

fn geometric_grid_points(kappa: f64) -> Vec<(u64, f64)> {
    microwidth::bounds::geometric_grid(16, 4096, 25)
        .into_iter()
        .map(|k| (k, 3.0 * (k as f64).powf(kappa)))
        .collect()
}

#[test]
fn acceptance() {
    let criteria: [(u32, fn() -> Outcome, Duration); 9] = [
        (1, criterion_1, Duration::from_secs(60)),
        (2, criterion_2, Duration::from_secs(120)),
        (3, criterion_3, Duration::from_secs(120)),
        (4, criterion_4, Duration::from_secs(60)),
        (5, criterion_5, Duration::from_secs(60)),
        (6, criterion_6, Duration::from_secs(300)),
        (7, criterion_7, Duration::from_secs(120)),
        (8, criterion_8, Duration::from_secs(60)),
        (9, criterion_9, Duration::from_secs(60)),
    ];
    let mut failed = Vec::new();
    for (id, run, limit) in criteria {
        let t = Instant::now();
        let out = run();
        let took = t.elapsed();
        let pass = out.pass && took <= limit;
        println!(
            "criterion {id}: {} ({}; {:.1}s of {}s)",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64(),
            limit.as_secs()
        );
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
