//! Independent numerical checks for the closed forms.
//!
//! Everything here is computed from first principles (win probabilities of
//! independent allocations, exhaustive search, sign changes) without calling
//! the closed-form solvers. Only [`verify_suite`] touches both sides, to
//! compare them.

use crate::error::{LottoError, Result};
use crate::ggl::{Battlefield, GGLInstance};
use crate::lotto::{GLInstance, MarginalCDF, PayoffPair};
use crate::precommit::{MatchResponse, PreCommitment};

/// Default panel count for [`payoff_by_quadrature`].
pub const DEFAULT_PANELS: usize = 10_000;
/// Largest pre-commitment handled by [`best_response_brute`].
pub const BRUTE_CAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    /// Points `lower + k·step`.
    Linear,
    /// Points `lower·(1 + step)^k`; needs `lower > 0`.
    Log,
}

/// A one-dimensional search grid with optional local refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub step: f64,
    pub refinement_depth: u32,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(lower: f64, upper: f64, step: f64, refinement_depth: u32) -> Result<Self> {
        let grid = GridSpec {
            lower,
            upper,
            step,
            refinement_depth,
            spacing: Spacing::Linear,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Geometric grid with relative step `ratio`.
    pub fn log(lower: f64, upper: f64, ratio: f64, refinement_depth: u32) -> Result<Self> {
        let grid = GridSpec {
            lower,
            upper,
            step: ratio,
            refinement_depth,
            spacing: Spacing::Log,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower <= self.upper) {
            return Err(LottoError::InvalidGrid(format!(
                "bounds [{}, {}]",
                self.lower, self.upper
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(LottoError::InvalidGrid(format!("step {}", self.step)));
        }
        if self.spacing == Spacing::Log && self.lower <= 0.0 {
            return Err(LottoError::InvalidGrid("log grid needs lower > 0".into()));
        }
        if self.refinement_depth > 12 {
            return Err(LottoError::InvalidGrid(format!(
                "refinement depth {}",
                self.refinement_depth
            )));
        }
        Ok(())
    }

    /// Finest step after all refinement levels.
    pub fn refined_step(&self) -> f64 {
        self.step * 10f64.powi(-(self.refinement_depth as i32))
    }

    /// Grid points, always including both ends.
    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        match self.spacing {
            Spacing::Linear => {
                let n = ((self.upper - self.lower) / self.step).floor() as usize;
                out.extend((0..=n).map(|k| self.lower + k as f64 * self.step));
            }
            Spacing::Log => {
                let factor = 1.0 + self.step;
                let mut x = self.lower;
                while x < self.upper {
                    out.push(x);
                    x *= factor;
                }
            }
        }
        if out.last() != Some(&self.upper) {
            out.push(self.upper);
        }
        out
    }
}

/// One closed-form vs oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, closed_form: f64, oracle: f64, tolerance: f64) -> Self {
        let gap = (closed_form - oracle).abs();
        OracleReport {
            quantity: quantity.into(),
            closed_form,
            oracle,
            gap,
            tolerance,
            pass: gap <= tolerance,
        }
    }
}

/// A's share of a one-battlefield contest from remaining budgets, straight
/// from the definition: proportional win rate with ties at zero to A.
fn share_a(a: f64, b: f64) -> f64 {
    let (a, b) = (a.max(0.0), b.max(0.0));
    if b == 0.0 {
        return 1.0;
    }
    if a == 0.0 {
        return 0.0;
    }
    if a <= b {
        a / (2.0 * b)
    } else {
        1.0 - b / (2.0 * a)
    }
}

/// `P(x_A ≥ x_B)` for independent allocations, ties at zero to A, by the
/// composite midpoint rule over the union of both supports.
pub fn win_probability_a(fa: &MarginalCDF, fb: &MarginalCDF, panels: usize) -> f64 {
    let upper = fa.support_upper.max(fb.support_upper);
    let mut ramp = 0.0;
    if upper > 0.0 && fa.ramp_slope > 0.0 {
        let h = upper / panels as f64;
        for k in 0..panels {
            let x = (k as f64 + 0.5) * h;
            if x < fa.support_upper {
                ramp += fb.cdf(x);
            }
        }
        ramp *= fa.ramp_slope * h;
    }
    fa.atom_at_zero * fb.atom_at_zero + ramp
}

/// Expected payoffs from per-battlefield marginals and valuations.
pub fn payoff_by_quadrature(
    marginals_a: &[MarginalCDF],
    marginals_b: &[MarginalCDF],
    values_a: &[f64],
    values_b: &[f64],
    panels: usize,
) -> Result<PayoffPair> {
    let n = marginals_a.len();
    if marginals_b.len() != n || values_a.len() != n || values_b.len() != n {
        return Err(LottoError::Precondition(
            "marginals and valuations must have equal lengths".into(),
        ));
    }
    if panels == 0 {
        return Err(LottoError::Precondition(
            "panel count must be positive".into(),
        ));
    }
    let (mut pa, mut pb) = (0.0, 0.0);
    for b in 0..n {
        marginals_a[b].validate()?;
        marginals_b[b].validate()?;
        let win = win_probability_a(&marginals_a[b], &marginals_b[b], panels);
        pa += values_a[b] * win;
        pb += values_b[b] * (1.0 - win);
    }
    Ok(PayoffPair {
        payoff_a: pa,
        payoff_b: pb,
    })
}

/// B's nominal payoff in a symmetric-valuation game.
pub fn nominal_ub(game: &GLInstance) -> f64 {
    game.phi() * (1.0 - share_a(game.budget_a(), game.budget_b()))
}

/// B's payoff from pre-committing `p` to one battlefield worth `v`.
fn single_ub(v: f64, phi: f64, xa: f64, xb: f64, p: f64) -> f64 {
    let rest = phi - v;
    let withdraw = rest * share_a(xa, xb - p);
    let best_a = if p <= xa {
        withdraw.max(v + rest * share_a(xa - p, xb - p))
    } else {
        withdraw
    };
    phi - best_a
}

/// Grid maximization with nested refinement around the incumbent.
fn grid_argmax(grid: &GridSpec, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut best = (grid.lower, f64::NEG_INFINITY);
    let points = grid.points();
    let mut idx = 0;
    for (i, &p) in points.iter().enumerate() {
        let u = f(p);
        if u > best.1 {
            best = (p, u);
            idx = i;
        }
    }
    let mut lo = points[idx.saturating_sub(1)];
    let mut hi = points[(idx + 1).min(points.len() - 1)];
    for _ in 0..grid.refinement_depth {
        let h = (hi - lo) / 20.0;
        if h <= 0.0 {
            break;
        }
        let mut center = best.0;
        for k in 0..=20 {
            let p = lo + k as f64 * h;
            let u = f(p);
            if u > best.1 {
                best = (p, u);
                center = p;
            }
        }
        lo = (center - h).max(grid.lower);
        hi = (center + h).min(grid.upper);
    }
    best
}

/// Dense search for B's best single pre-commitment on one battlefield of a
/// symmetric-valuation game. Returns `(p, u_B)`.
pub fn best_precommit_grid_gl(
    game: &GLInstance,
    battlefield: usize,
    grid: &GridSpec,
) -> Result<(f64, f64)> {
    let v = game.value(battlefield)?;
    grid.validate()?;
    let (phi, xa, xb) = (game.phi(), game.budget_a(), game.budget_b());
    let capped = GridSpec {
        upper: grid.upper.min(xb),
        lower: grid.lower.max(0.0),
        ..*grid
    };
    Ok(grid_argmax(&capped, |p| single_ub(v, phi, xa, xb, p)))
}

/// B's payoff in the asymmetric game from pre-committing `p` on `b`,
/// assembled from the definitions. Ties between Match and Withdraw go to
/// Withdraw.
fn ggl_ub(game: &GGLInstance, b: Battlefield, p: f64) -> f64 {
    let (xa, xb, al) = (game.budget_a(), game.budget_b(), game.alpha());
    let (va, vb) = match b {
        Battlefield::First => (al, 1.0 - al),
        Battlefield::Second => (1.0 - al, al),
    };
    let w_a = (1.0 - va) * share_a(xa, xb - p);
    let w_b = vb + (1.0 - vb) * (1.0 - share_a(xa, xb - p));
    if p > xa {
        return w_b;
    }
    let m_a = va + (1.0 - va) * share_a(xa - p, xb - p);
    if w_a >= m_a - 1e-12 {
        w_b
    } else {
        (1.0 - vb) * (1.0 - share_a(xa - p, xb - p))
    }
}

/// Dense search for B's best pre-commitment on battlefield `b` of the
/// asymmetric game. Returns `(p, u_B)`.
pub fn best_precommit_grid_ggl(
    game: &GGLInstance,
    b: Battlefield,
    grid: &GridSpec,
) -> Result<(f64, f64)> {
    grid.validate()?;
    let capped = GridSpec {
        upper: grid.upper.min(game.budget_b()),
        lower: grid.lower.max(0.0),
        ..*grid
    };
    Ok(grid_argmax(&capped, |p| ggl_ub(game, b, p)))
}

/// The solution function, written out from its piecewise definition.
fn solution(game: &GGLInstance, s: f64) -> f64 {
    let al = game.alpha();
    let om = 1.0 - al;
    let r = game.budget_a() / game.budget_b();
    let c = om * om / al + al * al / om;
    if s < al / om {
        s * s * (s * c - r)
    } else if s < om / al {
        al * al / om * (s * s * s - r) + al * s * (1.0 - r * s)
    } else {
        s - r * c
    }
}

/// Brackets `[lo, hi]` containing a sign change of `S`.
///
/// Near each local minimum of `|S|` without a sign change the neighbouring
/// cells are rescanned on a finer grid, so tangent zero pairs are caught.
pub fn zeros_by_sign_scan(game: &GGLInstance, grid: &GridSpec) -> Result<Vec<(f64, f64)>> {
    grid.validate()?;
    if grid.lower <= 0.0 {
        return Err(LottoError::InvalidGrid("sign scan needs lower > 0".into()));
    }
    let xs = grid.points();
    let fs: Vec<f64> = xs.iter().map(|&x| solution(game, x)).collect();
    let mut brackets = Vec::new();
    let sub = 10usize.pow(grid.refinement_depth.min(6));
    for i in 0..xs.len() - 1 {
        if fs[i] == 0.0 {
            brackets.push((xs[i], xs[i]));
        } else if fs[i + 1] != 0.0 && (fs[i] < 0.0) != (fs[i + 1] < 0.0) {
            brackets.push((xs[i], xs[i + 1]));
        }
    }
    if fs[xs.len() - 1] == 0.0 {
        let x = xs[xs.len() - 1];
        brackets.push((x, x));
    }
    if sub > 1 {
        for i in 1..xs.len() - 1 {
            let local_min = fs[i].abs() <= fs[i - 1].abs() && fs[i].abs() <= fs[i + 1].abs();
            let same = (fs[i - 1] < 0.0) == (fs[i] < 0.0) && (fs[i] < 0.0) == (fs[i + 1] < 0.0);
            if !(local_min && same && fs[i] != 0.0) {
                continue;
            }
            let (lo, hi) = (xs[i - 1], xs[i + 1]);
            let h = (hi - lo) / sub as f64;
            let mut prev = (lo, fs[i - 1]);
            for k in 1..=sub {
                let x = if k == sub { hi } else { lo + k as f64 * h };
                let f = solution(game, x);
                if (f < 0.0) != (prev.1 < 0.0) || f == 0.0 {
                    brackets.push((prev.0, x));
                }
                prev = (x, f);
            }
        }
    }
    brackets.sort_by(|a, b| a.0.total_cmp(&b.0));
    brackets.dedup_by(|b, a| b.0 <= a.1);
    Ok(brackets)
}

/// Default sign-scan grid: geometric from `1e-9` to the search bound.
pub fn default_scan_grid(game: &GGLInstance) -> GridSpec {
    let r = game.budget_a() / game.budget_b();
    let al = game.alpha();
    let c = (1.0 - al).powi(2) / al + al * al / (1.0 - al);
    let upper = 10.0 * r.max(1.0) * c;
    GridSpec {
        lower: 1e-9,
        upper,
        step: 2e-3,
        refinement_depth: 3,
        spacing: Spacing::Log,
    }
}

/// A's best response to `pc` by recursive subset enumeration.
pub fn best_response_brute(pc: &PreCommitment, game: &GLInstance) -> Result<(MatchResponse, f64)> {
    if pc.len() > BRUTE_CAP {
        return Err(LottoError::EnumerationCap {
            size: pc.len(),
            cap: BRUTE_CAP,
        });
    }
    let items: Vec<(usize, f64, f64)> = pc
        .entries()
        .map(|(b, p)| (b, game.valuations()[b], p))
        .collect();
    let v_p: f64 = items.iter().map(|t| t.1).sum();
    let p_p: f64 = items.iter().map(|t| t.2).sum();
    let ctx = Brute {
        items: &items,
        rest: game.phi() - v_p,
        xa: game.budget_a(),
        left_b: game.budget_b() - p_p,
    };
    let mut chosen = Vec::new();
    let mut best: Option<(Vec<usize>, f64, f64)> = None;
    ctx.walk(0, 0.0, 0.0, &mut chosen, &mut best);
    let (matched, u, spent) = best.expect("empty subset is always feasible");
    Ok((MatchResponse { matched, spent }, u))
}

struct Brute<'a> {
    items: &'a [(usize, f64, f64)],
    rest: f64,
    xa: f64,
    left_b: f64,
}

impl Brute<'_> {
    fn walk(
        &self,
        i: usize,
        value: f64,
        spent: f64,
        chosen: &mut Vec<usize>,
        best: &mut Option<(Vec<usize>, f64, f64)>,
    ) {
        if spent > self.xa {
            return;
        }
        if i == self.items.len() {
            let u = value + self.rest * share_a(self.xa - spent, self.left_b);
            if best.as_ref().is_none_or(|b| u > b.1) {
                *best = Some((chosen.clone(), u, spent));
            }
            return;
        }
        let (b, v, p) = self.items[i];
        self.walk(i + 1, value, spent, chosen, best);
        chosen.push(b);
        self.walk(i + 1, value + v, spent + p, chosen, best);
        chosen.pop();
    }
}

/// Runs the default closed-form vs oracle comparisons.
pub fn verify_suite() -> Result<Vec<OracleReport>> {
    use crate::ggl::{count_equilibria, find_zeros, ggl_marginals};
    use crate::ggl_precommit::optimal_precommit_ggl;
    use crate::lotto::{equilibrium_marginal, nominal_payoffs, Player};
    use crate::precommit::{best_response_a, min_beneficial_value, optimal_single_precommit};

    let mut out = Vec::new();

    for (xa, xb, vals) in [
        (1.0, 1.0, vec![0.5, 0.5]),
        (2.0, 1.0, vec![0.5, 0.5]),
        (1.0, 1.5, vec![0.2, 0.3, 0.5]),
        (0.7, 2.2, vec![1.0, 2.0, 0.5]),
    ] {
        let game = GLInstance::new(xa, xb, vals.clone())?;
        let fa: Vec<MarginalCDF> = (0..vals.len())
            .map(|b| equilibrium_marginal(&game, Player::A, b))
            .collect::<Result<_>>()?;
        let fb: Vec<MarginalCDF> = (0..vals.len())
            .map(|b| equilibrium_marginal(&game, Player::B, b))
            .collect::<Result<_>>()?;
        let quad = payoff_by_quadrature(&fa, &fb, &vals, &vals, DEFAULT_PANELS)?;
        let closed = nominal_payoffs(&game)?;
        out.push(OracleReport::new(
            format!("gl_piA(xa={xa};xb={xb};n={})", vals.len()),
            closed.payoff_a,
            quad.payoff_a,
            1e-6,
        ));
    }

    for (alpha, xa, xb) in [
        (0.25, 2.0, 1.0),
        (0.25, 0.3, 1.0),
        (0.1, 1.25, 1.0),
        (0.35, 1.0, 1.4),
    ] {
        let game = GGLInstance::new(xa, xb, alpha)?;
        let set = find_zeros(&game, 1e-10)?;
        for (k, &z) in set.zeros.iter().enumerate() {
            let m = ggl_marginals(z, &game)?;
            let va = [
                game.value_a(Battlefield::First),
                game.value_a(Battlefield::Second),
            ];
            let vb = [
                game.value_b(Battlefield::First),
                game.value_b(Battlefield::Second),
            ];
            let quad =
                payoff_by_quadrature(&m.marginals_a, &m.marginals_b, &va, &vb, DEFAULT_PANELS)?;
            out.push(OracleReport::new(
                format!("ggl_piB(alpha={alpha};xa={xa};xb={xb};zero={k})"),
                set.payoffs[k].1,
                quad.payoff_b,
                1e-5,
            ));
        }
        let scan = zeros_by_sign_scan(&game, &default_scan_grid(&game))?;
        out.push(OracleReport::new(
            format!("ggl_zero_count(alpha={alpha};xa={xa};xb={xb})"),
            count_equilibria(&game) as f64,
            scan.len() as f64,
            0.0,
        ));
        let (_, u) = optimal_precommit_ggl(&game, 1e-6 * xa)?;
        let grid = GridSpec::new(0.0, xb, xb / 20_000.0, 4)?;
        let oracle = Battlefield::BOTH
            .into_iter()
            .map(|b| best_precommit_grid_ggl(&game, b, &grid).map(|r| r.1))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(OracleReport::new(
            format!("ggl_best_precommit(alpha={alpha};xa={xa};xb={xb})"),
            u,
            oracle,
            1e-6,
        ));
    }

    // threshold located by bisection on the oracle's benefit verdict
    let grid = GridSpec::new(0.0, 3.0, 3e-4, 4)?;
    let beneficial = |v: f64| -> Result<bool> {
        let game = GLInstance::new(2.0, 3.0, vec![v, 1.0 - v])?;
        let (_, u) = best_precommit_grid_gl(&game, 0, &grid)?;
        Ok(u > nominal_ub(&game) + 1e-9)
    };
    let (mut lo, mut hi) = (0.3, 0.9);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if beneficial(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let threshold = min_beneficial_value(2.0, 3.0, 1.0)?.unwrap_or(f64::NAN);
    out.push(OracleReport::new(
        "gl_threshold(gamma=1.5)",
        threshold,
        hi,
        1e-4,
    ));

    for (xa, xb, vals, b) in [
        (1.0, 1.5, vec![0.7, 0.3], 0),
        (1.0, 2.0, vec![0.4, 0.6], 0),
        (2.0, 3.0, vec![0.6, 0.4], 0),
        (1.0, 3.0, vec![0.3, 0.7], 0),
    ] {
        let game = GLInstance::new(xa, xb, vals)?;
        let opt = optimal_single_precommit(&game, b, 1e-7 * xa)?;
        let grid = GridSpec::new(0.0, xb, xb / 20_000.0, 4)?;
        let (_, u) = best_precommit_grid_gl(&game, b, &grid)?;
        out.push(OracleReport::new(
            format!("gl_best_precommit(xa={xa};xb={xb})"),
            opt.u_b,
            u,
            1e-6,
        ));
    }

    let game = GLInstance::new(1.0, 2.0, vec![0.3, 0.2, 0.25, 0.25])?;
    for entries in [
        vec![(0, 0.3), (1, 0.4)],
        vec![(0, 0.6), (1, 0.5), (2, 0.2)],
        vec![(0, 1.2), (3, 0.1)],
    ] {
        let pc = PreCommitment::new(&game, entries)?;
        let (_, closed) = best_response_a(&pc, &game)?;
        let (_, brute) = best_response_brute(&pc, &game)?;
        out.push(OracleReport::new(
            format!("gl_best_response(targets={})", pc.len()),
            closed,
            brute,
            1e-9,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lotto::{equilibrium_marginal, Player};

    #[test]
    fn grid_spec_validation_and_points() {
        assert!(GridSpec::new(1.0, 0.0, 0.1, 0).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 0).is_err());
        assert!(GridSpec::log(0.0, 1.0, 0.1, 0).is_err());
        let g = GridSpec::new(0.0, 1.0, 0.25, 2).unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!((g.refined_step() - 0.0025).abs() < 1e-15);
        let g = GridSpec::log(1.0, 10.0, 1.0, 0).unwrap();
        assert_eq!(g.points(), vec![1.0, 2.0, 4.0, 8.0, 10.0]);
    }

    #[test]
    fn report_pass_flag() {
        assert!(OracleReport::new("x", 1.0, 1.0 + 1e-7, 1e-6).pass);
        assert!(!OracleReport::new("x", 1.0, 1.1, 1e-6).pass);
    }

    fn gl_marginals(game: &GLInstance) -> (Vec<MarginalCDF>, Vec<MarginalCDF>) {
        let n = game.battlefields();
        (
            (0..n)
                .map(|b| equilibrium_marginal(game, Player::A, b).unwrap())
                .collect(),
            (0..n)
                .map(|b| equilibrium_marginal(game, Player::B, b).unwrap())
                .collect(),
        )
    }

    #[test]
    fn quadrature_examples() {
        let game = GLInstance::new(1.0, 1.0, vec![0.5, 0.5]).unwrap();
        let (fa, fb) = gl_marginals(&game);
        let v = [0.5, 0.5];
        let p = payoff_by_quadrature(&fa, &fb, &v, &v, DEFAULT_PANELS).unwrap();
        assert!((p.payoff_a - 0.5).abs() < 1e-6 && (p.payoff_b - 0.5).abs() < 1e-6);
        let game = GLInstance::new(2.0, 1.0, vec![0.5, 0.5]).unwrap();
        let (fa, fb) = gl_marginals(&game);
        let p = payoff_by_quadrature(&fa, &fb, &v, &v, DEFAULT_PANELS).unwrap();
        assert!((p.payoff_a - 0.75).abs() < 1e-6 && (p.payoff_b - 0.25).abs() < 1e-6);
    }

    #[test]
    fn quadrature_rejects_malformed() {
        let bad = MarginalCDF {
            atom_at_zero: 0.5,
            ramp_slope: 1.0,
            support_upper: 1.0,
        };
        let ok = MarginalCDF::new(0.0, 1.0, 1.0).unwrap();
        assert!(payoff_by_quadrature(&[bad], &[ok], &[1.0], &[1.0], 100).is_err());
        assert!(payoff_by_quadrature(&[ok], &[ok], &[1.0, 1.0], &[1.0], 100).is_err());
    }

    #[test]
    fn unequal_supports_converge() {
        let fa = MarginalCDF::new(0.0, 1.0 / 3.0, 3.0).unwrap();
        let fb = MarginalCDF::new(0.2, 0.8, 1.0).unwrap();
        // exact: 1/3 ∫₀¹ (0.2 + 0.8x) dx + 1/3·2 = 0.2 + 2/3
        let exact = (0.2 + 0.4) / 3.0 + 2.0 / 3.0;
        let mut prev = f64::INFINITY;
        for n in [1_000, 10_000, 100_000] {
            let e = (win_probability_a(&fa, &fb, n) - exact).abs();
            assert!(e <= prev + 1e-13);
            prev = e;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn brute_matches_two_candidates() {
        let game = GLInstance::new(1.0, 2.0, vec![0.6, 0.4]).unwrap();
        let pc = PreCommitment::single(&game, 0, 0.2).unwrap();
        let (resp, u) = best_response_brute(&pc, &game).unwrap();
        let m = 0.6 + 0.4 * share_a(0.8, 1.8);
        let w = 0.4 * share_a(1.0, 1.8);
        assert!((u - m.max(w)).abs() < 1e-15);
        assert_eq!(resp.matched, vec![0]);
    }

    #[test]
    fn brute_infeasible_singletons() {
        let game = GLInstance::new(1.0, 3.0, vec![0.5, 0.3, 0.2]).unwrap();
        let pc = PreCommitment::new(&game, [(0, 1.2), (1, 1.5)]).unwrap();
        let (resp, _) = best_response_brute(&pc, &game).unwrap();
        assert!(resp.matched.is_empty());
    }

    #[test]
    fn brute_cap() {
        let game = GLInstance::new(1.0, 30.0, vec![1.0; 21]).unwrap();
        let pc = PreCommitment::new(&game, (0..21).map(|b| (b, 0.1))).unwrap();
        assert!(matches!(
            best_response_brute(&pc, &game),
            Err(LottoError::EnumerationCap { size: 21, cap: 20 })
        ));
    }

    #[test]
    fn sign_scan_symmetric_alpha_single_bracket() {
        for (xa, xb) in [(1.0, 1.0), (2.0, 1.0), (0.3, 1.9)] {
            let game = GGLInstance::new(xa, xb, 0.5).unwrap();
            let b = zeros_by_sign_scan(&game, &default_scan_grid(&game)).unwrap();
            assert_eq!(b.len(), 1);
        }
    }

    #[test]
    fn sign_scan_three_brackets() {
        let game = GGLInstance::new(1.25, 1.0, 0.1).unwrap();
        let b = zeros_by_sign_scan(&game, &default_scan_grid(&game)).unwrap();
        assert_eq!(b.len(), 3);
    }

    #[test]
    fn weaker_grid_never_beats_nominal() {
        let game = GLInstance::new(2.0, 1.0, vec![0.8, 0.2]).unwrap();
        let grid = GridSpec::new(0.0, 1.0, 1e-3, 3).unwrap();
        let (_, u) = best_precommit_grid_gl(&game, 0, &grid).unwrap();
        assert!(u <= nominal_ub(&game) + 1e-12);
    }

    #[test]
    fn refinement_approaches_supremum_from_below() {
        // γ = 3, v = 0.5: the supremum sits just above X_A
        let game = GLInstance::new(1.0, 3.0, vec![0.5, 0.5]).unwrap();
        let sup = 1.0 - 0.5 * share_a(1.0, 2.0);
        let mut prev = f64::NEG_INFINITY;
        for step in [1e-2, 1e-3, 1e-4] {
            let g = GridSpec::new(0.0, 3.0, step, 0).unwrap();
            let (_, u) = best_precommit_grid_gl(&game, 0, &g).unwrap();
            assert!(u <= sup + 1e-15 && u >= prev - 1e-15);
            prev = u;
        }
        assert!(sup - prev < 1e-4);
    }

    #[test]
    fn default_suite_passes() {
        let reports = verify_suite().unwrap();
        for r in &reports {
            assert!(r.pass, "{r:?}");
        }
    }
}
