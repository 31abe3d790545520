//! Monte Carlo studies and parameter sweeps, emitted as CSV tables.
//!
//! Every cell and sample is computed independently on the current rayon pool;
//! results are collected in input order, so output does not depend on the
//! number of workers.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{LottoError, Result};
use crate::ggl::{find_zeros, GGLInstance};
use crate::ggl_precommit::{benefit_report, optimal_precommit_ggl, VerdictBasis};
use crate::lotto::{nominal_payoffs, GLInstance};
use crate::precommit::{classify_incentive, enumerate_response, optimal_single_precommit};

/// One swept parameter: `steps` evenly spaced values from `lower` to `upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: impl Into<String>, lower: f64, upper: f64, steps: usize) -> Result<Self> {
        let axis = Axis {
            name: name.into(),
            lower,
            upper,
            steps,
        };
        axis.validate()?;
        Ok(axis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(LottoError::InvalidGrid(format!(
                "axis {} needs at least 2 steps",
                self.name
            )));
        }
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower <= self.upper) {
            return Err(LottoError::InvalidGrid(format!(
                "axis {} has bounds [{}, {}]",
                self.name, self.lower, self.upper
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let span = self.upper - self.lower;
        (0..self.steps)
            .map(|k| self.lower + span * k as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// Swept axes plus fixed parameters. A parameter may be given either way.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepConfig {
    pub axes: Vec<Axis>,
    pub fixed: BTreeMap<String, f64>,
    pub seed: u64,
}

impl SweepConfig {
    pub fn with_axis(mut self, axis: Axis) -> Self {
        self.axes.push(axis);
        self
    }

    pub fn with_fixed(mut self, name: &str, value: f64) -> Self {
        self.fixed.insert(name.to_string(), value);
        self
    }

    /// Values taken by `name`: the axis values, or the fixed value alone.
    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        if let Some(axis) = self.axes.iter().find(|a| a.name == name) {
            axis.validate()?;
            return Ok(axis.values());
        }
        self.fixed
            .get(name)
            .map(|v| vec![*v])
            .ok_or_else(|| LottoError::Precondition(format!("sweep parameter {name} is not set")))
    }

    fn fixed_or(&self, name: &str, default: f64) -> f64 {
        self.fixed.get(name).copied().unwrap_or(default)
    }
}

/// Formats a number with 9 significant digits, trailing zeros removed.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..15).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.8e}");
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        format!("{}e{e}", trim_zeros(mantissa.to_string()))
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt_number(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

/// Flat-simplex valuations: `n − 1` sorted uniforms cut `[0, φ]` into `n`
/// spacings.
pub fn sample_valuations_uniform(n: usize, phi: f64, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_simplex(n, phi, &mut rng)
}

fn sample_simplex(n: usize, phi: f64, rng: &mut impl Rng) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(LottoError::InvalidValuation(format!(
            "need at least 2 battlefields, got {n}"
        )));
    }
    if !(phi.is_finite() && phi > 0.0) {
        return Err(LottoError::Domain {
            name: "phi",
            value: phi,
        });
    }
    let mut cuts: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(n);
    let mut prev = 0.0;
    for c in cuts {
        out.push(phi * (c - prev));
        prev = c;
    }
    let head: f64 = out.iter().sum();
    out.push(phi - head);
    Ok(out)
}

/// Settings of the Monte Carlo comparison between merged single
/// pre-commitments and two-battlefield pre-commitments.
#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub n: usize,
    pub phi: f64,
    pub budget_a: f64,
    pub budget_b: f64,
    pub v_bars: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    /// Coarse step of the two-battlefield grid, as a fraction of `X_B`.
    pub grid_step: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n: 3,
            phi: 1.0,
            budget_a: 1.0,
            budget_b: 1.5,
            v_bars: (0..=20).map(|k| k as f64 / 20.0).collect(),
            samples: 500,
            seed: 0,
            grid_step: 5e-3,
        }
    }
}

/// Per-sample outcome of the Monte Carlo comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSample {
    pub nominal_ub: f64,
    pub single_ub: f64,
    pub double_ub: f64,
    pub admissible: bool,
}

impl McSample {
    pub fn beneficial(&self) -> bool {
        self.single_ub.max(self.double_ub) > self.nominal_ub + 1e-9
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MCResultRow {
    pub v_bar: f64,
    pub n_samples: usize,
    pub mean_ub_single: f64,
    pub mean_ub_double: f64,
    pub pct_beneficial: f64,
    pub samples: Vec<McSample>,
}

/// Best two-battlefield pre-commitment on battlefields 0 and 1, by a 2-D
/// grid over `p₁ + p₂ ≤ X_B` followed by local refinement.
pub fn best_double_precommit(game: &GLInstance, grid_step: f64) -> Result<(f64, f64, f64)> {
    if game.battlefields() < 2 {
        return Err(LottoError::InvalidValuation(
            "two-battlefield pre-commitment needs at least 2 battlefields".into(),
        ));
    }
    if !(grid_step > 0.0 && grid_step < 1.0) {
        return Err(LottoError::InvalidGrid(format!("grid step {grid_step}")));
    }
    let (xa, xb, phi) = (game.budget_a(), game.budget_b(), game.phi());
    let (v1, v2) = (game.valuations()[0], game.valuations()[1]);
    let eval = |p1: f64, p2: f64| phi - enumerate_response(&[(v1, p1), (v2, p2)], phi, xa, xb).1;
    let h = grid_step * xb;
    let n = (1.0 / grid_step).round() as usize;
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..=n {
        let p1 = (i as f64 * h).min(xb);
        for j in 0..=(n - i) {
            let p2 = (j as f64 * h).min(xb - p1);
            let u = eval(p1, p2);
            if u > best.2 {
                best = (p1, p2, u);
            }
        }
    }
    let mut radius = h;
    for _ in 0..3 {
        let (c1, c2) = (best.0, best.1);
        let sub = radius / 10.0;
        for i in -10i32..=10 {
            let p1 = c1 + i as f64 * sub;
            if !(0.0..=xb).contains(&p1) {
                continue;
            }
            for j in -10i32..=10 {
                let p2 = c2 + j as f64 * sub;
                if p2 < 0.0 || p1 + p2 > xb {
                    continue;
                }
                let u = eval(p1, p2);
                if u > best.2 {
                    best = (p1, p2, u);
                }
            }
        }
        radius = sub;
    }
    Ok(best)
}

/// Evaluates one sample of the Monte Carlo comparison.
pub fn mc_sample(valuations: &[f64], config: &McConfig, v_bar: f64) -> Result<McSample> {
    let game = GLInstance::new(config.budget_a, config.budget_b, valuations.to_vec())?;
    let nominal = nominal_payoffs(&game)?.payoff_b;
    let target = valuations[0] + valuations[1];
    if target > v_bar {
        return Ok(McSample {
            nominal_ub: nominal,
            single_ub: nominal,
            double_ub: nominal,
            admissible: false,
        });
    }
    let (_, _, double) = best_double_precommit(&game, config.grid_step)?;
    let mut merged = vec![target];
    merged.extend_from_slice(&valuations[2..]);
    let merged = GLInstance::new(config.budget_a, config.budget_b, merged)?;
    let single = if target > 0.0 {
        let eps = if config.budget_b > config.budget_a {
            (1e-7 * config.budget_a).min(0.5 * (config.budget_b - config.budget_a))
        } else {
            1e-7 * config.budget_a
        };
        optimal_single_precommit(&merged, 0, eps)?.u_b
    } else {
        nominal
    };
    Ok(McSample {
        nominal_ub: nominal,
        single_ub: single.max(nominal),
        double_ub: double.max(nominal),
        admissible: true,
    })
}

/// Runs the Monte Carlo comparison. Sample `s` of every row uses the
/// valuation drawn with seed `seed ⊕ s`, so rows share their samples.
pub fn run_fig5(config: &McConfig) -> Result<Vec<MCResultRow>> {
    if config.n < 3 {
        return Err(LottoError::InvalidValuation(format!(
            "need at least 3 battlefields, got {}",
            config.n
        )));
    }
    if config.samples == 0 {
        return Err(LottoError::Precondition(
            "sample count must be positive".into(),
        ));
    }
    for &v in &config.v_bars {
        if !(0.0..=config.phi).contains(&v) {
            return Err(LottoError::InvalidValuation(format!(
                "limit value {v} outside [0, {}]",
                config.phi
            )));
        }
    }
    let valuations: Vec<Vec<f64>> = (0..config.samples)
        .map(|s| sample_valuations_uniform(config.n, config.phi, config.seed ^ s as u64))
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = (0..config.v_bars.len())
        .flat_map(|r| (0..config.samples).map(move |s| (r, s)))
        .collect();
    let results: Vec<McSample> = jobs
        .par_iter()
        .map(|&(r, s)| mc_sample(&valuations[s], config, config.v_bars[r]))
        .collect::<Result<_>>()?;
    Ok(results
        .chunks(config.samples)
        .zip(&config.v_bars)
        .map(|(chunk, &v_bar)| {
            let count = chunk.len() as f64;
            MCResultRow {
                v_bar,
                n_samples: chunk.len(),
                mean_ub_single: chunk.iter().map(|s| s.single_ub).sum::<f64>() / count,
                mean_ub_double: chunk.iter().map(|s| s.double_ub).sum::<f64>() / count,
                pct_beneficial: 100.0 * chunk.iter().filter(|s| s.beneficial()).count() as f64
                    / count,
                samples: chunk.to_vec(),
            }
        })
        .collect())
}

pub fn write_mc_csv(rows: &[MCResultRow], out: &mut (impl Write + ?Sized)) -> io::Result<()> {
    writeln!(
        out,
        "vbar,n_samples,mean_uB_single,mean_uB_double,pct_beneficial"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_number(r.v_bar),
            r.n_samples,
            format_number(r.mean_ub_single),
            format_number(r.mean_ub_double),
            format_number(r.pct_beneficial)
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GLRegionRow {
    pub xa: f64,
    pub xb: f64,
    pub v_bar: f64,
    pub phi: f64,
    pub incentive: bool,
    pub threshold: Option<f64>,
    pub sup_ub: f64,
    pub nominal_ub: f64,
    pub improvement_pct: f64,
}

/// One cell of the incentive-region sweep: B may pre-commit to a battlefield
/// worth `v̄` in the game `[v̄, φ − v̄]`.
pub fn gl_region_cell(xa: f64, xb: f64, v_bar: f64, phi: f64) -> Result<GLRegionRow> {
    let report = classify_incentive(xa, xb, phi, v_bar)?;
    let game = GLInstance::new(xa, xb, vec![v_bar, phi - v_bar])?;
    let nominal = nominal_payoffs(&game)?.payoff_b;
    let sup = if v_bar > 0.0 {
        let eps = if xb > xa {
            (1e-7 * xa).min(0.5 * (xb - xa))
        } else {
            1e-7 * xa
        };
        optimal_single_precommit(&game, 0, eps)?.u_b.max(nominal)
    } else {
        nominal
    };
    Ok(GLRegionRow {
        xa,
        xb,
        v_bar,
        phi,
        incentive: report.has_incentive,
        threshold: report.threshold,
        sup_ub: sup,
        nominal_ub: nominal,
        improvement_pct: 100.0 * (sup - nominal).max(0.0) / nominal,
    })
}

/// Sweeps `xa × xb` (axes or fixed) at fixed `vbar` and `phi` (default 1).
pub fn region_sweep_gl(config: &SweepConfig) -> Result<Vec<GLRegionRow>> {
    let phi = config.fixed_or("phi", 1.0);
    let v_bar = config
        .fixed
        .get("vbar")
        .copied()
        .ok_or_else(|| LottoError::Precondition("sweep parameter vbar is not set".into()))?;
    let xas = config.values("xa")?;
    let xbs = config.values("xb")?;
    let cells: Vec<(f64, f64)> = xas
        .iter()
        .flat_map(|&a| xbs.iter().map(move |&b| (a, b)))
        .collect();
    cells
        .par_iter()
        .map(|&(a, b)| gl_region_cell(a, b, v_bar, phi))
        .collect()
}

pub fn write_gl_region_csv(
    rows: &[GLRegionRow],
    out: &mut (impl Write + ?Sized),
) -> io::Result<()> {
    writeln!(
        out,
        "xa,xb,vbar,phi,incentive,threshold,sup_uB,nominal_uB,improvement_pct"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_number(r.xa),
            format_number(r.xb),
            format_number(r.v_bar),
            format_number(r.phi),
            r.incentive,
            opt_number(r.threshold),
            format_number(r.sup_ub),
            format_number(r.nominal_ub),
            format_number(r.improvement_pct)
        )?;
    }
    Ok(())
}

/// Region label of a cell in the asymmetric-game sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GGLVerdict {
    /// Three equilibria; a pre-commitment beats the middle payoff.
    BeatsSecond,
    /// Three equilibria; no pre-commitment beats the middle payoff.
    MultiNoGain,
    /// Unique equilibrium beaten, with an analytic witness.
    BeatsUnique,
    /// Unique equilibrium beaten, found by search only.
    BeatsUniqueEmpirical,
    /// Unique equilibrium not beaten.
    NoGain,
}

impl GGLVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            GGLVerdict::BeatsSecond => "beats_second",
            GGLVerdict::MultiNoGain => "multi_no_gain",
            GGLVerdict::BeatsUnique => "beats_unique",
            GGLVerdict::BeatsUniqueEmpirical => "beats_unique_empirical",
            GGLVerdict::NoGain => "no_gain",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GGLRegionRow {
    pub alpha: f64,
    pub xa: f64,
    pub xb: f64,
    pub n_equilibria: usize,
    pub pib_best: f64,
    pub pib_second: Option<f64>,
    pub pib_worst: f64,
    pub verdict: GGLVerdict,
    /// Best pre-commitment found: battlefield index (1 or 2), amount, u_B.
    pub best_battlefield: usize,
    pub best_p: f64,
    pub best_ub: f64,
}

impl GGLRegionRow {
    /// Percent by which the best pre-commitment exceeds the middle
    /// equilibrium payoff, when there are three.
    pub fn improvement_over_second_pct(&self) -> Option<f64> {
        self.pib_second
            .map(|s| 100.0 * (self.best_ub - s).max(0.0) / s)
    }

    /// Percent by which the best pre-commitment exceeds B's best
    /// equilibrium payoff.
    pub fn improvement_over_best_pct(&self) -> f64 {
        100.0 * (self.best_ub - self.pib_best).max(0.0) / self.pib_best
    }
}

pub fn ggl_region_cell(alpha: f64, xa: f64, xb: f64) -> Result<GGLRegionRow> {
    let game = GGLInstance::new(xa, xb, alpha)?;
    let (set, report) = benefit_report(&game)?;
    let verdict = match (set.count(), report.beats_unique, report.basis) {
        (3, _, _) if report.beats_second_best => GGLVerdict::BeatsSecond,
        (3, _, _) => GGLVerdict::MultiNoGain,
        (_, Some(true), VerdictBasis::Analytic) => GGLVerdict::BeatsUnique,
        (_, Some(true), VerdictBasis::Empirical) => GGLVerdict::BeatsUniqueEmpirical,
        _ => GGLVerdict::NoGain,
    };
    let (pc, u) = optimal_precommit_ggl(&game, 1e-7 * xa)?;
    Ok(GGLRegionRow {
        alpha,
        xa,
        xb,
        n_equilibria: set.count(),
        pib_best: set.best_payoff_b(),
        pib_second: set.second_payoff_b(),
        pib_worst: set.worst_payoff_b(),
        verdict,
        best_battlefield: pc.battlefield().index(),
        best_p: pc.amount(),
        best_ub: u,
    })
}

/// Sweeps `alpha × xa × xb` (each an axis or fixed).
pub fn region_sweep_ggl(config: &SweepConfig) -> Result<Vec<GGLRegionRow>> {
    let alphas = config.values("alpha")?;
    let xas = config.values("xa")?;
    let xbs = config.values("xb")?;
    let mut cells = Vec::with_capacity(alphas.len() * xas.len() * xbs.len());
    for &al in &alphas {
        for &a in &xas {
            for &b in &xbs {
                cells.push((al, a, b));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(al, a, b)| ggl_region_cell(al, a, b))
        .collect()
}

pub fn write_ggl_region_csv(
    rows: &[GGLRegionRow],
    out: &mut (impl Write + ?Sized),
) -> io::Result<()> {
    writeln!(
        out,
        "alpha,xa,xb,n_equilibria,piB_best,piB_second,piB_worst,verdict,witness_b,witness_p,witness_uB"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            format_number(r.alpha),
            format_number(r.xa),
            format_number(r.xb),
            r.n_equilibria,
            format_number(r.pib_best),
            opt_number(r.pib_second),
            format_number(r.pib_worst),
            r.verdict.as_str(),
            r.best_battlefield,
            format_number(r.best_p),
            format_number(r.best_ub)
        )?;
    }
    Ok(())
}

/// Equilibria of one asymmetric game as `ggl-solve` rows: zeros in
/// ascending order, ranked 1 (best for B) upward.
pub fn write_ggl_solve_csv(
    game: &GGLInstance,
    tol: f64,
    out: &mut (impl Write + ?Sized),
) -> Result<()> {
    let set = find_zeros(game, tol)?;
    let io = |e: io::Error| LottoError::Precondition(format!("write failed: {e}"));
    writeln!(out, "alpha,xa,xb,n_equilibria,sigma,piA,piB,rank").map_err(io)?;
    let ranked = set.ranked_payoffs_b();
    for (z, (pa, pb)) in set.zeros.iter().zip(&set.payoffs) {
        let rank = ranked.iter().position(|x| x == pb).unwrap_or(0) + 1;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            format_number(game.alpha()),
            format_number(game.budget_a()),
            format_number(game.budget_b()),
            set.count(),
            format_number(*z),
            format_number(*pa),
            format_number(*pb),
            rank
        )
        .map_err(io)?;
    }
    Ok(())
}
