//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always show.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lotto_precommit::experiments::{ggl_region_cell, gl_region_cell, run_fig5, McConfig};
use lotto_precommit::ggl::{
    count_equilibria, find_zeros, ggl_marginals, solution_function, Battlefield, GGLInstance,
};
use lotto_precommit::ggl_precommit::{
    beats_second_best, indifference_points, indifference_ratio_bound, lemma3_dominated, response_a,
    ua_match, ua_withdraw, ub_ggl, GGLPreCommit, Response,
};
use lotto_precommit::lotto::{
    equilibrium_marginal, nominal_payoffs, GLInstance, MarginalCDF, Player,
};
use lotto_precommit::oracle::{
    best_precommit_grid_gl, default_scan_grid, nominal_ub, payoff_by_quadrature,
    zeros_by_sign_scan, GridSpec, DEFAULT_PANELS,
};
use lotto_precommit::precommit::{min_beneficial_value, payoff_b, reduce_to_single, PreCommitment};

type Check = fn() -> Outcome;

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

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn threshold_shape() -> Outcome {
    let t = min_beneficial_value(2.0, 3.0, 1.0).unwrap().unwrap();
    let exact = t == 5.0 / 9.0;
    let th = |g: f64| min_beneficial_value(1.0, g, 1.0).unwrap().unwrap();
    let rising: Vec<f64> = (1..=1000)
        .map(|k| th(1.0 + 0.5 * k as f64 / 1001.0))
        .collect();
    let falling: Vec<f64> = (1..=1000)
        .map(|k| th(1.5 + 8.5 * k as f64 / 1000.0))
        .collect();
    let inc = rising.windows(2).all(|w| w[1] > w[0]) && rising.last().unwrap() < &t;
    let dec = falling.windows(2).all(|w| w[1] < w[0]) && falling[0] < t;
    outcome(
        exact && inc && dec,
        format!("threshold(3/2) = {t:.17} (5/9 exact: {exact}); increasing on (1,3/2): {inc}; decreasing on (3/2,10]: {dec}"),
    )
}

fn random_game(r: &mut ChaCha8Rng, n: usize, xa: f64, xb: f64) -> GLInstance {
    let vals: Vec<f64> = (0..n).map(|_| r.random::<f64>() + 1e-3).collect();
    GLInstance::new(xa, xb, vals).unwrap()
}

fn random_precommit(r: &mut ChaCha8Rng, game: &GLInstance, k: usize) -> PreCommitment {
    let n = game.battlefields();
    let mut ids: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = r.random_range(i..n);
        ids.swap(i, j);
    }
    let weights: Vec<f64> = (0..k).map(|_| r.random::<f64>()).collect();
    let total: f64 = weights.iter().sum::<f64>().max(1e-12);
    let spend = game.budget_b() * r.random::<f64>();
    PreCommitment::new(
        game,
        ids[..k]
            .iter()
            .zip(&weights)
            .map(|(&b, w)| (b, spend * w / total)),
    )
    .unwrap()
}

fn weaker_never_benefits() -> Outcome {
    let mut r = rng(2);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let xa = 0.1 + 4.9 * r.random::<f64>();
        let xb = xa * (0.01 + 0.99 * r.random::<f64>()) * (1.0 - 1e-9);
        let n = r.random_range(1..=6);
        let game = random_game(&mut r, n, xa, xb);
        let k = r.random_range(1..=n);
        let pc = random_precommit(&mut r, &game, k);
        let gain = payoff_b(&pc, &game).unwrap() - nominal_payoffs(&game).unwrap().payoff_b;
        worst = worst.max(gain);
        if gain > 1e-9 {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!(
            "10^4 instances, {violations} with u_B > nominal + 1e-9 (largest gain {worst:.3e})"
        ),
    )
}

fn in_expected_region(gamma: f64) -> bool {
    (gamma > 1.0 && gamma < 4.0 / 3.0) || gamma > 5.0 / 3.0
}

fn gl_region() -> Outcome {
    let n = 200;
    let axis: Vec<f64> = (0..n)
        .map(|k| 0.025 + 4.975 * k as f64 / (n - 1) as f64)
        .collect();
    let mut verdict = vec![vec![false; n]; n];
    let mut expected = vec![vec![false; n]; n];
    let mut oracle_agree = 0;
    let grid_for = |xb: f64| GridSpec::new(0.0, xb, xb / 2000.0, 3).unwrap();
    for (i, &xa) in axis.iter().enumerate() {
        for (j, &xb) in axis.iter().enumerate() {
            let row = gl_region_cell(xa, xb, 0.55, 1.0).unwrap();
            verdict[i][j] = row.incentive;
            expected[i][j] = in_expected_region(xb / xa);
            let game = GLInstance::new(xa, xb, vec![0.55, 0.45]).unwrap();
            let (_, u) = best_precommit_grid_gl(&game, 0, &grid_for(xb)).unwrap();
            let oracle = u > nominal_ub(&game) + 1e-9;
            if oracle == row.incentive {
                oracle_agree += 1;
            }
        }
    }
    let mut off_boundary = 0;
    let mut mismatched = 0;
    for i in 0..n {
        for j in 0..n {
            if verdict[i][j] == expected[i][j] {
                continue;
            }
            mismatched += 1;
            let near = (i.saturating_sub(1)..=(i + 1).min(n - 1)).any(|a| {
                (j.saturating_sub(1)..=(j + 1).min(n - 1)).any(|b| expected[a][b] != expected[i][j])
            });
            if !near {
                off_boundary += 1;
            }
        }
    }
    let share = oracle_agree as f64 / (n * n) as f64;
    outcome(
        off_boundary == 0 && share >= 0.99,
        format!(
            "200x200 cells: {mismatched} differ from the gamma set, {off_boundary} away from its boundary; oracle agreement {:.3}%",
            100.0 * share
        ),
    )
}

fn oracle_payoffs() -> Outcome {
    let mut r = rng(4);
    let mut worst_gl: f64 = 0.0;
    for _ in 0..100 {
        let xa = 0.1 + 4.9 * r.random::<f64>();
        let xb = 0.1 + 4.9 * r.random::<f64>();
        let n = r.random_range(1..=6);
        let game = random_game(&mut r, n, xa, xb);
        let fa: Vec<MarginalCDF> = (0..n)
            .map(|b| equilibrium_marginal(&game, Player::A, b).unwrap())
            .collect();
        let fb: Vec<MarginalCDF> = (0..n)
            .map(|b| equilibrium_marginal(&game, Player::B, b).unwrap())
            .collect();
        let v = game.valuations();
        let quad = payoff_by_quadrature(&fa, &fb, v, v, DEFAULT_PANELS).unwrap();
        let closed = nominal_payoffs(&game).unwrap();
        worst_gl = worst_gl
            .max((quad.payoff_a - closed.payoff_a).abs())
            .max((quad.payoff_b - closed.payoff_b).abs());
    }
    let mut worst_ggl: f64 = 0.0;
    let mut checked = 0;
    while checked < 50 {
        let alpha = 0.01 + 0.49 * r.random::<f64>();
        let xa = 0.05 + 2.95 * r.random::<f64>();
        let game = GGLInstance::new(xa, 1.0, alpha).unwrap();
        let set = find_zeros(&game, 1e-10).unwrap();
        for (k, &z) in set.zeros.iter().enumerate() {
            if checked == 50 {
                break;
            }
            let m = ggl_marginals(z, &game).unwrap();
            let va = [
                game.value_a(Battlefield::First),
                game.value_a(Battlefield::Second),
            ];
            let vb = [
                game.value_b(Battlefield::First),
                game.value_b(Battlefield::Second),
            ];
            let quad =
                payoff_by_quadrature(&m.marginals_a, &m.marginals_b, &va, &vb, DEFAULT_PANELS)
                    .unwrap();
            worst_ggl = worst_ggl
                .max((quad.payoff_a - set.payoffs[k].0).abs())
                .max((quad.payoff_b - set.payoffs[k].1).abs());
            checked += 1;
        }
    }
    outcome(
        worst_gl <= 1e-6 && worst_ggl <= 1e-5,
        format!("100 GL instances max gap {worst_gl:.2e} (tol 1e-6); 50 GGL equilibria max gap {worst_ggl:.2e} (tol 1e-5)"),
    )
}

fn zero_count() -> Outcome {
    let n = 200;
    let mut classifier = vec![vec![0usize; n]; n];
    let mut scan = vec![vec![0usize; n]; n];
    let mut worst_residual: f64 = 0.0;
    let mut errors = 0;
    for i in 0..n {
        let alpha = 0.5 * (i + 1) as f64 / n as f64;
        for j in 0..n {
            let ratio = 3.0 * (j + 1) as f64 / n as f64;
            let game = GGLInstance::new(ratio, 1.0, alpha).unwrap();
            classifier[i][j] = count_equilibria(&game);
            scan[i][j] = zeros_by_sign_scan(&game, &default_scan_grid(&game))
                .unwrap()
                .len();
            match find_zeros(&game, 1e-10) {
                Ok(set) => {
                    for z in set.zeros {
                        worst_residual =
                            worst_residual.max(solution_function(z, &game).unwrap().abs());
                    }
                }
                Err(_) => errors += 1,
            }
        }
    }
    let mut agree = 0;
    let mut off_boundary = 0;
    for i in 0..n {
        for j in 0..n {
            if classifier[i][j] == scan[i][j] {
                agree += 1;
                continue;
            }
            let near = (i.saturating_sub(1)..=(i + 1).min(n - 1)).any(|a| {
                (j.saturating_sub(1)..=(j + 1).min(n - 1))
                    .any(|b| classifier[a][b] != classifier[i][j])
            });
            if !near {
                off_boundary += 1;
            }
        }
    }
    let share = agree as f64 / (n * n) as f64;
    outcome(
        share >= 0.995 && off_boundary == 0 && errors == 0 && worst_residual <= 1e-10,
        format!(
            "agreement {:.3}% (min 99.5%), {off_boundary} disagreements off the boundary; max |S| at zeros {worst_residual:.1e}, {errors} solver errors",
            100.0 * share
        ),
    )
}

fn indifference() -> Outcome {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    while count < 1000 {
        let alpha = 0.01 + 0.49 * r.random::<f64>();
        let xa = 0.2 + 2.8 * r.random::<f64>();
        let gamma = r.random::<f64>();
        if gamma < indifference_ratio_bound(alpha) {
            continue;
        }
        let game = GGLInstance::new(xa, gamma * xa, alpha).unwrap();
        let pts = indifference_points(&game);
        if pts.len() != 2 {
            continue;
        }
        for p in pts {
            let pc = GGLPreCommit::new(&game, Battlefield::First, p).unwrap();
            worst = worst.max((ua_match(&pc, &game).unwrap() - ua_withdraw(&pc, &game)).abs());
        }
        count += 1;
    }
    let game = GGLInstance::new(1.0, 1.0, 0.25).unwrap();
    let pts = indifference_points(&game);
    let pm = GGLPreCommit::new(&game, Battlefield::First, pts[0]).unwrap();
    let worked = pts.len() == 2
        && (pts[0] - 2.0 / 3.0).abs() <= 1e-12
        && (pts[1] - 1.0).abs() <= 1e-12
        && (ub_ggl(&pm, &game) - 19.0 / 24.0).abs() <= 1e-12;
    outcome(
        worst <= 1e-9 && worked,
        format!(
            "1000 instances, max |uA_match - uA_withdraw| {worst:.1e} (tol 1e-9); worked instance p- = {:.12}, p+ = {:.12}, u_B(p-) = {:.12}",
            pts[0],
            pts[1],
            ub_ggl(&pm, &game)
        ),
    )
}

fn second_best() -> Outcome {
    let mut r = rng(7);
    let mut sampled = 0;
    let mut failures = 0;
    let mut min_margin = f64::INFINITY;
    while sampled < 1000 {
        let alpha = 0.005 + 0.3 * r.random::<f64>();
        let xa = 0.1 + 2.9 * r.random::<f64>();
        let game = GGLInstance::new(xa, 1.0, alpha).unwrap();
        if count_equilibria(&game) != 3 {
            continue;
        }
        let gamma = 1.0 / xa;
        if !(gamma > 1.0 || gamma >= indifference_ratio_bound(alpha)) {
            continue;
        }
        sampled += 1;
        let report = beats_second_best(&game).unwrap();
        let second = report.benchmark;
        let ok = match report.witness {
            Some(w) => {
                let u = ub_ggl(&w, &game);
                min_margin = min_margin.min(u - second);
                u == report.guaranteed_ub && u > second + 1e-9
            }
            None => false,
        };
        if !ok || second >= 1.0 - alpha {
            failures += 1;
        }
    }
    let mut best_pct: f64 = 0.0;
    let mut at = 0.0;
    for k in 1..=400 {
        let xa = 3.0 * k as f64 / 400.0;
        let row = ggl_region_cell(0.08, xa, 1.0).unwrap();
        if let Some(pct) = row.improvement_over_second_pct() {
            if pct > best_pct {
                best_pct = pct;
                at = xa;
            }
        }
    }
    let trace_ok = (15.0..=25.0).contains(&best_pct);
    outcome(
        failures == 0 && trace_ok,
        format!(
            "1000 three-equilibrium instances, {failures} failures (min witness margin {min_margin:.3e}); trace alpha=0.08, X_B=1: max improvement over second-best {best_pct:.2}% at X_A={at}"
        ),
    )
}

fn battlefield_two() -> Outcome {
    let mut r = rng(8);
    let mut failures = 0;
    for _ in 0..10_000 {
        let alpha = 0.001 + 0.499 * r.random::<f64>();
        let xa = 0.1 + 2.9 * r.random::<f64>();
        let xb = xa * (0.01 + 0.99 * r.random::<f64>());
        let game = GGLInstance::new(xa, xb, alpha).unwrap();
        let dominated = lemma3_dominated(&game).unwrap();
        let all_match = (0..1000).all(|k| {
            let p = xb * k as f64 / 999.0;
            let pc = GGLPreCommit::new(&game, Battlefield::Second, p).unwrap();
            response_a(&pc, &game) == Response::Match
        });
        if !(dominated && all_match) {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("10^4 instances with X_B <= X_A: {failures} where battlefield 2 is not dominated or A withdraws"),
    )
}

fn monte_carlo() -> Outcome {
    let config = McConfig {
        seed: 2024,
        ..McConfig::default()
    };
    let rows = run_fig5(&config).unwrap();
    let ordering = rows.iter().all(|r| r.mean_ub_single >= r.mean_ub_double);
    let zero_below = rows
        .iter()
        .filter(|r| r.v_bar < 5.0 / 9.0)
        .all(|r| r.pct_beneficial == 0.0);
    let positive_above = rows
        .iter()
        .filter(|r| r.v_bar >= 0.6 - 1e-12)
        .all(|r| r.pct_beneficial > 0.0);
    let per_sample = rows
        .iter()
        .flat_map(|r| &r.samples)
        .all(|s| s.single_ub >= s.double_ub - 1e-9);
    let pct: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.2}:{:.1}", r.v_bar, r.pct_beneficial))
        .collect();
    outcome(
        ordering && zero_below && positive_above && per_sample,
        format!(
            "21 rows x 500 samples: single >= double {ordering}; zero benefit below 5/9 {zero_below}; positive from 0.6 {positive_above}; per-sample merge dominance {per_sample}; pct [{}]",
            pct.join(" ")
        ),
    )
}

fn symmetric_bridge() -> Outcome {
    let mut r = rng(10);
    let mut worst: f64 = 0.0;
    let mut unique = true;
    for _ in 0..100 {
        let xa = 0.05 + 4.95 * r.random::<f64>();
        let xb = 0.05 + 4.95 * r.random::<f64>();
        let set = find_zeros(&GGLInstance::new(xa, xb, 0.5).unwrap(), 1e-12).unwrap();
        unique &= set.count() == 1;
        let gl = nominal_payoffs(&GLInstance::new(xa, xb, vec![0.5, 0.5]).unwrap()).unwrap();
        worst = worst
            .max((set.payoffs[0].0 - gl.payoff_a).abs())
            .max((set.payoffs[0].1 - gl.payoff_b).abs());
    }
    outcome(
        unique && worst <= 1e-10,
        format!(
            "100 budget pairs: unique equilibrium {unique}, max payoff gap {worst:.1e} (tol 1e-10)"
        ),
    )
}

fn reduction() -> Outcome {
    let mut r = rng(11);
    let mut failures = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..1000 {
        let xa = 0.1 + 2.9 * r.random::<f64>();
        let xb = 0.1 + 2.9 * r.random::<f64>();
        let n = r.random_range(2..=5);
        let game = random_game(&mut r, n, xa, xb);
        let pc = random_precommit(&mut r, &game, 2);
        let before = payoff_b(&pc, &game).unwrap();
        let red = reduce_to_single(&pc, &game).unwrap();
        let single = PreCommitment::single(&red.game, red.battlefield, red.amount).unwrap();
        let after = payoff_b(&single, &red.game).unwrap();
        worst = worst.min(after - before);
        if after < before - 1e-9 {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("1000 two-battlefield pre-commitments: {failures} reductions lower u_B (smallest change {worst:.3e})"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 11] = [
        ("C1 incentive threshold", threshold_shape),
        ("C2 weaker player never benefits", weaker_never_benefits),
        ("C3 incentive region at vbar=0.55", gl_region),
        ("C4 quadrature payoff equivalence", oracle_payoffs),
        ("C5 equilibrium count vs sign scan", zero_count),
        ("C6 match/withdraw indifference", indifference),
        ("C7 beating the second-best equilibrium", second_best),
        ("C8 battlefield-2 futility", battlefield_two),
        ("C9 Monte Carlo merge vs split", monte_carlo),
        ("C10 symmetric-valuation bridge", symmetric_bridge),
        ("C11 merged pre-commitment dominance", reduction),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        if !result.pass {
            failed += 1;
        }
        println!(
            "[{tag}] {name} ({:.1}s): {}",
            start.elapsed().as_secs_f64(),
            result.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
