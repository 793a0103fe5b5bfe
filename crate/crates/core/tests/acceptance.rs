//! Acceptance suite: one PASS/FAIL line per criterion, details indented below.
//!
//! Run with `cargo test --release -p wavegen-core --test acceptance`.
//! Exits non-zero when any criterion fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wavegen_core::boussinesq::RightBoundary;
use wavegen_core::soliton::soliton_speed;
use wavegen_core::swe::{SweParams, SweRun};
use wavegen_core::validation::{run_study, scenario, soliton_round_trip, ConvergenceTable, ScenarioKind};
use wavegen_core::*;

/// Published rows: `(n, e_zeta, order_zeta, e_q, order_q)`, `dx = numerator / n`.
type Row = (usize, f64, Option<f64>, f64, Option<f64>);

const TABLE_1: [Row; 7] = [
    (90, 2.26e-1, None, 2.15e-1, None),
    (120, 1.87e-1, Some(0.67), 1.66e-1, Some(0.89)),
    (150, 1.57e-1, Some(0.71), 1.35e-1, Some(0.91)),
    (180, 1.36e-1, Some(0.74), 1.13e-1, Some(0.92)),
    (200, 1.24e-1, Some(0.75), 1.02e-1, Some(0.93)),
    (300, 8.45e-2, Some(0.82), 6.67e-2, Some(0.97)),
    (360, 6.97e-2, Some(0.85), 5.45e-2, Some(0.99)),
];
const TABLE_2: [Row; 7] = [
    (90, 1.51e-1, None, 2.40e-1, None),
    (120, 1.20e-1, Some(0.78), 1.88e-1, Some(0.85)),
    (150, 9.96e-2, Some(0.82), 1.55e-1, Some(0.85)),
    (180, 8.44e-2, Some(0.84), 1.31e-1, Some(0.87)),
    (200, 7.66e-2, Some(0.85), 1.19e-1, Some(0.88)),
    (300, 5.17e-2, Some(0.89), 7.97e-2, Some(0.91)),
    (360, 4.28e-2, Some(0.91), 6.56e-2, Some(0.93)),
];
const TABLE_3: [Row; 7] = [
    (90, 9.30e-2, None, 2.57e-1, None),
    (120, 7.27e-2, Some(0.86), 1.98e-1, Some(0.90)),
    (150, 5.85e-2, Some(0.91), 1.60e-1, Some(0.92)),
    (180, 4.92e-2, Some(0.92), 1.34e-1, Some(0.94)),
    (200, 4.43e-2, Some(0.93), 1.20e-1, Some(0.95)),
    (300, 2.93e-2, Some(0.96), 7.86e-2, Some(0.98)),
    (360, 2.41e-2, Some(0.97), 6.43e-2, Some(1.00)),
];
const TABLE_4: [Row; 5] = [
    (100, 4.86e-2, None, 5.40e-2, None),
    (200, 2.74e-2, Some(0.82), 3.04e-2, Some(0.83)),
    (400, 1.51e-2, Some(0.84), 1.67e-2, Some(0.85)),
    (800, 8.02e-3, Some(0.87), 8.88e-3, Some(0.87)),
    (1200, 5.47e-3, Some(0.88), 6.09e-3, Some(0.88)),
];
const TABLE_5: [Row; 5] = [
    (100, 4.20e-2, None, 4.36e-2, None),
    (200, 2.53e-2, Some(0.73), 2.61e-2, Some(0.74)),
    (400, 1.44e-2, Some(0.77), 1.49e-2, Some(0.78)),
    (800, 7.81e-3, Some(0.81), 8.10e-3, Some(0.81)),
    (1200, 5.38e-3, Some(0.83), 5.58e-3, Some(0.83)),
];
const TABLE_6: [Row; 9] = [
    (100, 1.84e-1, None, 1.78e-1, None),
    (120, 1.54e-1, Some(0.97), 1.45e-1, Some(1.14)),
    (150, 1.37e-1, Some(0.73), 1.21e-1, Some(0.94)),
    (180, 1.22e-1, Some(0.69), 1.10e-1, Some(0.83)),
    (200, 1.14e-1, Some(0.69), 1.03e-1, Some(0.80)),
    (300, 8.50e-2, Some(0.70), 7.70e-2, Some(0.76)),
    (360, 7.31e-2, Some(0.72), 6.65e-2, Some(0.77)),
    (400, 6.67e-2, Some(0.73), 6.09e-2, Some(0.77)),
    (600, 4.56e-2, Some(0.78), 4.19e-2, Some(0.81)),
];
const TABLE_7: [Row; 9] = [
    (100, 2.06e-1, None, 1.84e-1, None),
    (120, 1.76e-1, Some(0.87), 1.56e-1, Some(0.93)),
    (150, 1.45e-1, Some(0.87), 1.27e-1, Some(0.92)),
    (180, 1.24e-1, Some(0.86), 1.08e-1, Some(0.92)),
    (200, 1.131e-1, Some(0.86), 9.79e-2, Some(0.91)),
    (300, 8.16e-2, Some(0.84), 7.08e-2, Some(0.87)),
    (360, 7.20e-2, Some(0.82), 6.24e-2, Some(0.84)),
    (400, 6.65e-2, Some(0.81), 5.77e-2, Some(0.84)),
    (600, 4.68e-2, Some(0.83), 4.06e-2, Some(0.84)),
];
const TABLE_8: [Row; 9] = [
    (100, 2.03e-1, None, 2.00e-1, None),
    (120, 1.62e-1, Some(1.22), 1.60e-1, Some(1.23)),
    (150, 1.25e-1, Some(1.19), 1.23e-1, Some(1.20)),
    (180, 1.00e-1, Some(1.20), 9.87e-2, Some(1.20)),
    (200, 8.92e-2, Some(1.18), 8.78e-2, Some(1.19)),
    (300, 5.64e-2, Some(1.16), 5.54e-2, Some(1.17)),
    (360, 4.61e-2, Some(1.16), 4.52e-2, Some(1.16)),
    (400, 4.11e-2, Some(1.15), 4.04e-2, Some(1.15)),
    (600, 2.94e-2, Some(1.08), 2.64e-2, Some(1.13)),
];

struct Tolerance {
    error_rel: f64,
    order_abs: f64,
}

const GAUSSIAN_TOL: Tolerance = Tolerance { error_rel: 0.10, order_abs: 0.10 };
const SOLITON_TOL: Tolerance = Tolerance { error_rel: 0.15, order_abs: 0.10 };
const SINE_TOL: Tolerance = Tolerance { error_rel: 0.20, order_abs: 0.15 };
const ROUND_TRIP_ORDER: (f64, f64) = (1.0, 0.15);

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

fn fmt_opt(o: Option<f64>) -> String {
    o.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into())
}

fn compare_table(label: &str, ours: &ConvergenceTable, published: &[Row], tol: &Tolerance) -> Outcome {
    let mut pass = ours.rows.len() == published.len();
    let mut details = vec![format!(
        "{label}: n | e_zeta ours/published | order | e_q ours/published | order"
    )];
    for (row, want) in ours.rows.iter().zip(published) {
        let (n, ez, oz, eq, oq) = *want;
        let err_ok = |got: f64, w: f64| (got - w).abs() <= tol.error_rel * w;
        let ord_ok = |got: Option<f64>, w: Option<f64>| match (got, w) {
            (_, None) => true,
            (Some(g), Some(w)) => (g - w).abs() <= tol.order_abs,
            (None, Some(_)) => false,
        };
        let ok = [
            err_ok(row.e_zeta, ez),
            ord_ok(row.order_zeta, oz),
            err_ok(row.e_q, eq),
            ord_ok(row.order_q, oq),
        ];
        pass &= ok.iter().all(|b| *b);
        let mark = |b: bool| if b { "" } else { "*" };
        details.push(format!(
            "  {n:>5} | {:.3e}{}/{:.2e} | {}{}/{} | {:.3e}{}/{:.2e} | {}{}/{}",
            row.e_zeta,
            mark(ok[0]),
            ez,
            fmt_opt(row.order_zeta),
            mark(ok[1]),
            fmt_opt(oz),
            row.e_q,
            mark(ok[2]),
            eq,
            fmt_opt(row.order_q),
            mark(ok[3]),
            fmt_opt(oq)
        ));
    }
    Outcome { pass, details }
}

fn study(kind: ScenarioKind, eps: f64, label: &str, published: &[Row], tol: &Tolerance) -> Outcome {
    let params = DimensionlessParams::new(eps, eps).expect("valid parameters");
    let s = scenario(kind, params);
    match run_study(&s, true) {
        Ok((result, _)) => {
            let mut out = compare_table(label, &result.table, published, tol);
            for level in result.levels.iter().filter(|l| l.diverged) {
                out.details.push(format!("  n = {} diverged", level.n));
            }
            if let Some(base) = result.levels.iter().find(|l| !l.diverged) {
                if result.levels.iter().any(|l| l.diverged) {
                    out.details
                        .push(format!("  orders above are taken against n = {}, the coarsest stable level", base.n));
                }
            }
            out
        }
        Err(e) => Outcome {
            pass: false,
            details: vec![format!("{label}: study failed: {e}")],
        },
    }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    Outcome {
        pass: parts.iter().all(|o| o.pass),
        details: parts.into_iter().flat_map(|o| o.details).collect(),
    }
}

fn round_trip() -> Outcome {
    let mut pass = true;
    let mut details = Vec::new();
    for (eps, courant) in [(0.3, 0.8), (0.1, 0.9)] {
        let p = DimensionlessParams::new(eps, eps).unwrap();
        let ns = [200usize, 400, 800];
        let devs: Vec<f64> = ns
            .iter()
            .map(|n| soliton_round_trip(p, 1.0, 10.0, *n, courant).unwrap_or(f64::NAN))
            .collect();
        let orders: Vec<f64> = devs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        let ok = orders
            .iter()
            .all(|o| (o - ROUND_TRIP_ORDER.0).abs() <= ROUND_TRIP_ORDER.1);
        pass &= ok;
        details.push(format!(
            "eps = mu = {eps}: n = {ns:?}, deviation = [{}], orders = [{}]",
            devs.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join(", "),
            orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>().join(", ")
        ));
    }
    Outcome { pass, details }
}

fn check(details: &mut Vec<String>, name: &str, ok: bool, what: String) -> bool {
    details.push(format!("({name}) {} {what}", if ok { "ok  " } else { "FAIL" }));
    ok
}

fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|i, j| a[*i][k].abs().total_cmp(&a[*j][k].abs())).unwrap();
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Largest deviation of `D1 R1 g` and `R0 D1 g` from the exact `v'` for
/// manufactured `v` with `v'(0) = v''(0) = 0` and `g = v - (mu/3) v''`.
fn commutation_error(n: usize) -> f64 {
    let mu = 0.3;
    let e = |x: f64| (-x.powi(3)).exp();
    let v1 = |x: f64| -3.0 * x * x * e(x);
    let v2 = |x: f64| (9.0 * x.powi(4) - 6.0 * x) * e(x);
    let g = |x: f64| e(x) - mu / 3.0 * v2(x);
    let dx = 12.0 / n as f64;
    let x = |i: usize| i as f64 * dx;
    let gv: Vec<f64> = (1..=n).map(|i| g(x(i))).collect();
    let r1g = NeumannInverse::new(n, mu, dx).unwrap().apply(&gv).unwrap();
    let dg: Vec<f64> = (1..=n).map(|i| (g(x(i + 1)) - g(x(i - 1))) / (2.0 * dx)).collect();
    let r0dg = DirichletInverse::new(n, mu, dx).unwrap().apply(&dg).unwrap();
    (1..n).fold(0.0f64, |m, i| {
        let left = if i == 1 { r1g[0] } else { r1g[i - 2] };
        let d1r1 = (r1g[i] - left) / (2.0 * dx);
        m.max((d1r1 - v1(x(i))).abs()).max((r0dg[i - 1] - v1(x(i))).abs())
    })
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut d = Vec::new();
    let mut pass = true;

    // (a) forward stencil after R1
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(2..400);
        let mu = rng.gen_range(0.001..0.5);
        let dx = rng.gen_range(0.002..0.5);
        let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r1 = NeumannInverse::new(n, mu, dx).unwrap();
        let back = r1.forward(&r1.apply(&rhs).unwrap()).unwrap();
        worst = back.iter().zip(&rhs).fold(worst, |m, (a, b)| m.max((a - b).abs()));
    }
    pass &= check(&mut d, "a", worst <= 1e-12, format!("forward(R1 f) - f: {worst:.2e} <= 1e-12"));

    // (b) constants
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.gen_range(2..400);
        let c = rng.gen_range(-3.0..3.0);
        let r1 = NeumannInverse::new(n, rng.gen_range(0.001..0.5), rng.gen_range(0.002..0.5)).unwrap();
        worst = r1.apply(&vec![c; n]).unwrap().iter().fold(worst, |m, v| m.max((v - c).abs()));
    }
    pass &= check(&mut d, "b", worst <= 1e-12, format!("R1 c - c: {worst:.2e} <= 1e-12"));

    // (c) dense oracle
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        for _ in 0..10 {
            let (mu, dx) = (rng.gen_range(0.001..0.5), rng.gen_range(0.01..0.5));
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r1 = NeumannInverse::new(n, mu, dx).unwrap();
            let r0 = DirichletInverse::new(n, mu, dx).unwrap();
            for (got, a) in [
                (r1.apply(&rhs).unwrap(), r1.matrix().to_dense()),
                (r0.apply(&rhs).unwrap(), r0.matrix().to_dense()),
            ] {
                let want = dense_solve(a, rhs.clone());
                worst = got.iter().zip(&want).fold(worst, |m, (a, b)| m.max((a - b).abs()));
            }
        }
    }
    pass &= check(&mut d, "c", worst <= 1e-12, format!("dense elimination, n <= 8: {worst:.2e} <= 1e-12"));

    // (d) commutation
    let errs: Vec<f64> = [100, 200, 400, 800].iter().map(|n| commutation_error(*n)).collect();
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let ok = orders.iter().all(|p| (p - 2.0).abs() <= 0.2);
    pass &= check(
        &mut d,
        "d",
        ok,
        format!(
            "D1 R1 g and R0 D1 g vs exact, orders [{}] in 2.0 +/- 0.2",
            orders.iter().map(|o| format!("{o:.3}")).collect::<Vec<_>>().join(", ")
        ),
    );

    // (e) mass balance
    let grid = Grid1D::new(0.0, 10.0, 100).unwrap();
    let mut worst: f64 = 0.0;
    let sp = SweParams::new(9.81, 1.0, 0.25).unwrap();
    let mut swe = SweRun::new(grid, sp, WaveState::at_rest(100), BoundaryForcing::sine(0.05, 2.0)).unwrap();
    for _ in 0..500 {
        let before: f64 = swe.state.zeta.iter().sum::<f64>() * grid.dx();
        let dt = swe.dt();
        let rep = swe.step(dt).unwrap();
        let after: f64 = swe.state.zeta.iter().sum::<f64>() * grid.dx();
        worst = worst.max((after - before + dt * (rep.right_flux.0 - rep.left_flux.0)).abs());
    }
    let bp = DimensionlessParams::new(0.1, 0.1).unwrap();
    let closure = Closure::Generating {
        forcing: BoundaryForcing::sine(0.5, 5.0),
        right: RightBoundary::Extrapolate,
    };
    let mut bq = BoussinesqRun::new(bp, grid, WaveState::at_rest(100), closure, 0.9).unwrap();
    for _ in 0..500 {
        let before: f64 = bq.state.zeta.iter().sum::<f64>() * grid.dx();
        let dt = bq.dt();
        let rep = bq.step(dt).unwrap();
        let after: f64 = bq.state.zeta.iter().sum::<f64>() * grid.dx();
        worst = worst.max((after - before + dt * (rep.right_flux.0 - rep.left_flux.0)).abs());
    }
    pass &= check(&mut d, "e", worst <= 1e-12, format!("mass balance residual, both solvers: {worst:.2e} <= 1e-12"));

    // (f) lake at rest
    let mut worst: f64 = 0.0;
    let mut swe = SweRun::new(grid, sp, WaveState::at_rest(100), BoundaryForcing::zero()).unwrap();
    for _ in 0..10_000 {
        swe.step(swe.dt()).unwrap();
    }
    worst = swe.state.zeta.iter().chain(&swe.state.q).fold(worst, |m, v| m.max(v.abs()));
    let closure = Closure::Generating {
        forcing: BoundaryForcing::zero(),
        right: RightBoundary::Extrapolate,
    };
    let mut bq = BoussinesqRun::new(bp, grid, WaveState::at_rest(100), closure, 0.9).unwrap();
    for _ in 0..10_000 {
        bq.step(bq.dt()).unwrap();
    }
    worst = bq.state.zeta.iter().chain(&bq.state.q).fold(worst, |m, v| m.max(v.abs()));
    pass &= check(&mut d, "f", worst <= 1e-12, format!("lake at rest after 1e4 steps: {worst:.2e} <= 1e-12"));

    // (g) speed identity
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let zm: f64 = 2.0 * (1.0 - rng.gen::<f64>());
        let eps: f64 = 0.5 * (1.0 - rng.gen::<f64>());
        let c = soliton_speed(zm, eps).unwrap();
        let y = eps * zm;
        let denom = if y < 0.1 {
            let (mut sum, mut pow, mut k) = (0.0, y * y, 2.0);
            while pow / k > 1e-20 * sum {
                sum += if k as i32 % 2 == 0 { pow / k } else { -pow / k };
                pow *= y;
                k += 1.0;
            }
            zm / y * sum
        } else {
            zm - y.ln_1p() / eps
        };
        let rhs = eps * (eps * zm.powi(3) / 6.0 + zm * zm / 2.0);
        worst = worst.max((c * c * denom - rhs).abs() / rhs);
    }
    pass &= check(&mut d, "g", worst <= 1e-14, format!("speed identity, 100 draws: {worst:.2e} <= 1e-14"));

    // (h) half-life
    let mut worst: f64 = 0.0;
    for eps in [0.01, 0.1, 0.3, 0.5] {
        let p = DimensionlessParams::new(eps, eps).unwrap();
        let src = SourceProfile::new(&grid, p.delta());
        let h = p.delta() * std::f64::consts::LN_2;
        for s in [0.0, 0.1, 0.7, 2.0] {
            worst = worst.max((src.decay_at(s + h) / src.decay_at(s) - 0.5).abs());
        }
    }
    pass &= check(&mut d, "h", worst <= 1e-13, format!("decay over delta ln 2: {worst:.2e} <= 1e-13"));

    Outcome { pass, details: d }
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        (
            "Table 1 (gaussian, eps = mu = 0.3)",
            Box::new(|| study(ScenarioKind::Gaussian, 0.3, "gaussian 0.3", &TABLE_1, &GAUSSIAN_TOL)),
        ),
        (
            "Tables 2-3 (gaussian, eps = mu = 0.1, 0.01)",
            Box::new(|| {
                merge(vec![
                    study(ScenarioKind::Gaussian, 0.1, "gaussian 0.1", &TABLE_2, &GAUSSIAN_TOL),
                    study(ScenarioKind::Gaussian, 0.01, "gaussian 0.01", &TABLE_3, &GAUSSIAN_TOL),
                ])
            }),
        ),
        (
            "Tables 4-5 (soliton, eps = mu = 0.3, 0.1)",
            Box::new(|| {
                merge(vec![
                    study(ScenarioKind::Soliton, 0.3, "soliton 0.3", &TABLE_4, &SOLITON_TOL),
                    study(ScenarioKind::Soliton, 0.1, "soliton 0.1", &TABLE_5, &SOLITON_TOL),
                ])
            }),
        ),
        (
            "Tables 6-8 (sinusoidal, eps = mu = 0.3, 0.1, 0.01)",
            Box::new(|| {
                merge(vec![
                    study(ScenarioKind::Sinusoidal, 0.3, "sinusoidal 0.3", &TABLE_6, &SINE_TOL),
                    study(ScenarioKind::Sinusoidal, 0.1, "sinusoidal 0.1", &TABLE_7, &SINE_TOL),
                    study(ScenarioKind::Sinusoidal, 0.01, "sinusoidal 0.01", &TABLE_8, &SINE_TOL),
                ])
            }),
        ),
        ("Soliton round trip (periodic, one period)", Box::new(round_trip)),
        ("Property suite (a)-(h)", Box::new(property_suite)),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        let start = std::time::Instant::now();
        let out = run();
        if !out.pass {
            failed += 1;
        }
        println!(
            "{} {name} [{:.1} s]",
            if out.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for line in out.details {
            println!("    {line}");
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
