//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Random draws use fixed seeds.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sure_search::operator::{
    build_a_even, build_a_odd, build_block, build_g, build_i_s, build_i_tau, polar_r_gamma,
    residual_amplitude, spectral,
};
use sure_search::sweep::nearest_index;
use sure_search::{
    beta_from_counts, continuous_iteration_oracle, f_member, make_plan, minimal_calls, run_full,
    run_subspace, solve_theta_op, sweep, theta_grid, Geometry, MemberKind, PhaseConfig,
};

const TWO_PI: f64 = 2.0 * PI;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn setup(phi: f64, theta: f64, beta: f64) -> (PhaseConfig, Geometry) {
    (
        PhaseConfig::new(phi, theta).unwrap(),
        Geometry::from_beta(beta).unwrap(),
    )
}

fn worked_example_counts() -> Outcome {
    let got = [
        minimal_calls(MemberKind::EvenA2n, 1.0),
        minimal_calls(MemberKind::OddA2n1, 1.0),
        minimal_calls(MemberKind::GroverGn, 1.0),
    ];
    let ok = matches!(got, [Ok(4), Ok(1), Ok(1)]);
    outcome(ok, format!("m_e, m_o, m = {got:?}"))
}

fn optimal_phases() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (member, offset) in [
        (MemberKind::EvenA2n, 1.304),
        (MemberKind::OddA2n1, 1.87),
        (MemberKind::GroverGn, 1.87),
    ] {
        match solve_theta_op(member, 1.0) {
            Ok(plan) => {
                let err = (plan.theta - (PI - offset)).abs();
                let mirror_err = (plan.theta_mirror - (TWO_PI - plan.theta)).abs();
                ok &= err < 5e-3 && mirror_err < 1e-15;
                detail.push(format!("{member}: pi - {:.6}", PI - plan.theta));
            }
            Err(e) => {
                ok = false;
                detail.push(format!("{member}: {e}"));
            }
        }
    }
    outcome(ok, detail.join(", "))
}

fn sure_success() -> Outcome {
    let mut worst: f64 = 1.0;
    let mut failures = Vec::new();
    for i in 1..=50 {
        let beta = 0.02 + (1.5 - 0.02) * i as f64 / 51.0;
        for member in MemberKind::ALL {
            match make_plan(member, beta).and_then(|p| run_subspace(&p)) {
                Ok(r) => worst = worst.min(r.success_probability),
                Err(e) => failures.push(format!("{member} at {beta}: {e}")),
            }
        }
    }
    let instances: [(usize, usize); 10] = [
        (64, 1),
        (64, 7),
        (64, 40),
        (256, 3),
        (256, 64),
        (256, 181),
        (1024, 1),
        (1024, 17),
        (1024, 300),
        (1024, 900),
    ];
    let mut worst_gap: f64 = 0.0;
    for (k, &(n, m)) in instances.iter().enumerate() {
        let member = MemberKind::ALL[k % 3];
        let marked: Vec<usize> = (0..m).map(|i| (i * 37 + k) % n).collect();
        let beta = beta_from_counts(n as u64, m as u64);
        let run = make_plan(member, beta).and_then(|plan| {
            let full = run_full(&plan, n, &marked)?;
            let sub = run_subspace(&plan)?;
            Ok((full, sub))
        });
        match run {
            Ok((full, sub)) => {
                worst_gap =
                    worst_gap.max((full.success_probability - sub.success_probability).abs())
            }
            Err(e) => failures.push(format!("{member} N={n} M={m}: {e}")),
        }
    }
    let ok = failures.is_empty() && worst >= 1.0 - 1e-9 && worst_gap < 1e-10;
    let mut detail = format!("min p = {worst:.15}, max |p_full - p_sub| = {worst_gap:.1e}");
    if !failures.is_empty() {
        detail += &format!("; errors: {}", failures.join("; "));
    }
    outcome(ok, detail)
}

fn transcription() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut drawn = 0;
    let mut errors = Vec::new();
    while drawn < 200 {
        let beta = rng.gen_range(0.02..1.5);
        let theta = rng.gen_range(0.2..TWO_PI - 0.2);
        let member = MemberKind::ALL[drawn % 3];
        drawn += 1;
        match (
            f_member(member, beta, theta),
            continuous_iteration_oracle(member, beta, theta),
        ) {
            (Ok(f), Ok(t)) => worst = worst.max((f - t).abs()),
            (a, b) => errors.push(format!("{member} ({beta}, {theta}): {a:?} / {b:?}")),
        }
    }
    let ok = errors.is_empty() && worst < 1e-8;
    let mut detail = format!("200 draws, max |f - oracle| = {worst:.1e}");
    if !errors.is_empty() {
        detail += &format!("; errors: {}", errors.join("; "));
    }
    outcome(ok, detail)
}

fn identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let draw = |rng: &mut StdRng| {
        let phi = rng.gen_range(-TWO_PI + 1e-9..TWO_PI - 1e-9);
        let theta = rng.gen_range(-TWO_PI + 1e-9..TWO_PI - 1e-9);
        let beta = rng.gen_range(1e-3..FRAC_PI_2);
        (phi, theta, beta)
    };
    let (mut eq5, mut unitarity, mut eigen): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..10_000 {
        let (phi, theta, beta) = draw(&mut rng);
        let (p, g) = setup(phi, theta, beta);
        let block = build_block(&p, &g);
        let (r, _) = polar_r_gamma(theta, beta);
        let (sh, s2b) = ((theta / 2.0).sin(), (2.0 * beta).sin());
        let a = sh * sh * phi.sin() * s2b * s2b;
        let b = 2.0 * r * sh * (phi / 2.0).sin() * s2b;
        eq5 = eq5.max((1.0 - block.a11.re.powi(2) - (a * a + b * b)).abs());
        for u in [
            build_i_tau(&p, &g),
            build_i_s(&p, &g),
            build_g(&p, &g),
            block,
            build_a_even(7, &p, &g),
            build_a_odd(7, &p, &g),
        ] {
            unitarity = unitarity.max(u.unitarity_deviation());
        }
        unitarity = unitarity.max((block.det() - 1.0).norm());
        if let Ok(sd) = spectral(&p, &g) {
            if sd.w >= 1e-6 {
                for (lambda, v) in [(sd.eig_plus, sd.vec_plus), (sd.eig_minus, sd.vec_minus)] {
                    let bv = block.apply(&v);
                    let res = ((bv.c_tau - lambda * v.c_tau).norm_sqr()
                        + (bv.c_perp - lambda * v.c_perp).norm_sqr())
                    .sqrt();
                    eigen = eigen.max(res);
                }
            }
        }
    }
    let mut power: f64 = 0.0;
    for _ in 0..100 {
        let (phi, theta, beta) = draw(&mut rng);
        let (p, g) = setup(phi, theta, beta);
        let block = build_block(&p, &g);
        for n in 0..=64 {
            power = power.max(build_a_even(n, &p, &g).frobenius_distance(&block.powi(n)));
        }
    }
    let ok = eq5 < 1e-12 && unitarity < 1e-12 && power < 1e-10 && eigen < 1e-10;
    outcome(
        ok,
        format!(
            "sin^2 w {eq5:.1e}, unitarity {unitarity:.1e}, closed form vs power {power:.1e}, eigen {eigen:.1e}"
        ),
    )
}

fn collinearity_defect(u: Complex64, u0: Complex64) -> f64 {
    (u * u0.conj()).im.abs() / (u.norm() * u0.norm())
}

fn matching_conditions() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let (mut even_im, mut odd_col): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let theta = rng.gen_range(-TWO_PI + 1e-9..TWO_PI - 1e-9);
        let beta = rng.gen_range(1e-3..FRAC_PI_2);
        let (p, g) = setup(-theta, theta, beta);
        for n in 0..=50 {
            let u = residual_amplitude(&build_a_even(n, &p, &g), &g);
            even_im = even_im.max(u.im.abs());
        }
        let (p, g) = setup(theta, theta, beta);
        let u0 = residual_amplitude(&build_a_odd(0, &p, &g), &g);
        if u0.norm() > 1e-8 {
            for n in 1..=50 {
                let u = residual_amplitude(&build_a_odd(n, &p, &g), &g);
                if u.norm() > 0.0 {
                    odd_col = odd_col.max(collinearity_defect(u, u0));
                }
            }
        }
    }
    let mut broken = 0;
    for _ in 0..100 {
        let theta = rng.gen_range(0.2..TWO_PI - 0.2);
        let beta = rng.gen_range(0.02..1.5);
        let (p, g) = setup(theta / 2.0, theta, beta);
        let u0 = residual_amplitude(&build_a_odd(0, &p, &g), &g);
        if (1..=10).any(|n| {
            collinearity_defect(residual_amplitude(&build_a_odd(n, &p, &g), &g), u0) >= 1e-4
        }) {
            broken += 1;
        }
    }
    let ok = even_im < 1e-10 && odd_col < 1e-10 && broken >= 95;
    outcome(
        ok,
        format!("even Im {even_im:.1e}, odd collinearity {odd_col:.1e}, mismatched control broken in {broken}/100"),
    )
}

fn curve_minima() -> Outcome {
    let grid = theta_grid(0.2, TWO_PI - 0.2, 2001).unwrap();
    let at_pi = nearest_index(&grid, PI).unwrap();
    let mut ok = true;
    let mut detail = Vec::new();
    for beta in [1e-3, 1e-1, 1.0] {
        let rows = sweep(beta, &grid).unwrap();
        for member in MemberKind::ALL {
            let argmin = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.value(member).is_finite())
                .min_by(|a, b| a.1.value(member).total_cmp(&b.1.value(member)))
                .map(|(i, _)| i);
            ok &= argmin == Some(at_pi);
        }
        if beta == 1e-3 {
            let r = rows[at_pi];
            let gap = (r.c_even - r.c_odd).abs() / r.c_grover;
            ok &= gap < 0.02;
            detail.push(format!("beta=1e-3 gap {gap:.1e}"));
        }
    }
    detail.insert(
        0,
        format!("minima at grid index {at_pi} (theta = {:.6})", grid[at_pi]),
    );
    outcome(ok, detail.join(", "))
}

fn determinism() -> Outcome {
    let render = || {
        let grid = theta_grid(0.2, TWO_PI - 0.2, 2001).unwrap();
        let rows = sweep(1.0, &grid).unwrap();
        let plans: Vec<_> = MemberKind::ALL
            .iter()
            .map(|&m| make_plan(m, 0.37).map(|p| (p.theta, p.oracle_calls)))
            .collect();
        format!("{rows:?}{plans:?}")
    };
    let ok = render() == render();
    outcome(ok, "sweep and plans identical across two runs")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        (
            "1 worked-example call counts",
            worked_example_counts,
            Duration::from_millis(1),
        ),
        (
            "2 optimal phases at beta = 1",
            optimal_phases,
            Duration::from_millis(10),
        ),
        ("3 sure success", sure_success, Duration::from_secs(5)),
        (
            "4 closed forms vs operator oracle",
            transcription,
            Duration::from_secs(5),
        ),
        ("5 identity suite", identities, Duration::from_secs(10)),
        (
            "6 matching-condition invariants",
            matching_conditions,
            Duration::from_secs(5),
        ),
        (
            "7 call curves minimal at pi",
            curve_minima,
            Duration::from_secs(2),
        ),
        ("8 determinism", determinism, Duration::from_secs(60)),
    ];
    let start = Instant::now();
    let mut all = true;
    for (name, run, budget) in criteria {
        let t = Instant::now();
        let out = run();
        let elapsed = t.elapsed();
        let passed = out.passed && elapsed < budget;
        all &= passed;
        println!(
            "{} criterion {name}: {} [{:.3?} / budget {:?}]",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed,
            budget
        );
    }
    println!("acceptance total {:.3?}", start.elapsed());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
