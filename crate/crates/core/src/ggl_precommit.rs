//! Single-battlefield pre-commitments in the asymmetric two-battlefield game.
//!
//! B announces `p` on one battlefield. A either matches it, winning that
//! battlefield and playing a one-battlefield game on the other with
//! `(X_A − p, X_B − p)`, or withdraws, conceding it and playing with
//! `(X_A, X_B − p)`.

use crate::error::{LottoError, Result};
use crate::ggl::{count_equilibria, find_zeros, Battlefield, EquilibriumSet, GGLInstance};
use crate::lotto::residual_share_a;
use crate::precommit::{bisect, TIE_TOL};

/// Tolerance passed to the zero finder when benchmarks are needed.
const ZERO_TOL: f64 = 1e-10;
/// Strict-improvement margin used by the benefit verdicts.
const BENEFIT_MARGIN: f64 = 1e-9;
/// Points in the dense grid of [`optimal_precommit_ggl`].
const GRID_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGLPreCommit {
    battlefield: Battlefield,
    amount: f64,
}

impl GGLPreCommit {
    pub fn new(game: &GGLInstance, battlefield: Battlefield, amount: f64) -> Result<Self> {
        if !(amount.is_finite() && amount >= 0.0) {
            return Err(LottoError::InvalidPrecommitment(format!(
                "amount {amount} must be finite and non-negative"
            )));
        }
        if amount > game.budget_b() * (1.0 + 1e-12) {
            return Err(LottoError::InvalidPrecommitment(format!(
                "amount {amount} exceeds X_B = {}",
                game.budget_b()
            )));
        }
        Ok(GGLPreCommit {
            battlefield,
            amount: amount.min(game.budget_b()),
        })
    }

    pub fn battlefield(&self) -> Battlefield {
        self.battlefield
    }

    pub fn amount(&self) -> f64 {
        self.amount
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Response {
    Match,
    Withdraw,
}

fn match_value(game: &GGLInstance, b: Battlefield, p: f64) -> f64 {
    let va = game.value_a(b);
    va + (1.0 - va) * residual_share_a(game.budget_a() - p, game.budget_b() - p)
}

fn withdraw_value(game: &GGLInstance, b: Battlefield, p: f64) -> f64 {
    (1.0 - game.value_a(b)) * residual_share_a(game.budget_a(), game.budget_b() - p)
}

fn respond(game: &GGLInstance, b: Battlefield, p: f64) -> Response {
    if p > game.budget_a() {
        return Response::Withdraw;
    }
    if withdraw_value(game, b, p) >= match_value(game, b, p) - TIE_TOL {
        Response::Withdraw
    } else {
        Response::Match
    }
}

fn value_b(game: &GGLInstance, b: Battlefield, p: f64) -> f64 {
    let vb = game.value_b(b);
    match respond(game, b, p) {
        Response::Match => {
            (1.0 - vb) * (1.0 - residual_share_a(game.budget_a() - p, game.budget_b() - p))
        }
        Response::Withdraw => {
            vb + (1.0 - vb) * (1.0 - residual_share_a(game.budget_a(), game.budget_b() - p))
        }
    }
}

/// A's payoff from matching the pre-commitment.
pub fn ua_match(pc: &GGLPreCommit, game: &GGLInstance) -> Result<f64> {
    if pc.amount > game.budget_a() {
        return Err(LottoError::InfeasibleResponse {
            spent: pc.amount,
            budget: game.budget_a(),
        });
    }
    Ok(match_value(game, pc.battlefield, pc.amount))
}

/// A's payoff from conceding the pre-committed battlefield.
pub fn ua_withdraw(pc: &GGLPreCommit, game: &GGLInstance) -> f64 {
    withdraw_value(game, pc.battlefield, pc.amount)
}

/// A's optimal response; indifference (within `1e-12`) resolves to Withdraw.
pub fn response_a(pc: &GGLPreCommit, game: &GGLInstance) -> Response {
    respond(game, pc.battlefield, pc.amount)
}

/// B's payoff after A's optimal response.
pub fn ub_ggl(pc: &GGLPreCommit, game: &GGLInstance) -> f64 {
    value_b(game, pc.battlefield, pc.amount)
}

/// Points on battlefield 1 where A is indifferent between matching and
/// withdrawing, ascending. Only points with `p ≤ min(X_A, X_B)` are returned.
///
/// With equal budgets the upper root of the weaker-B quadratic is `p = X_B`,
/// where both residual budgets vanish. It marks the switch back to Match but
/// is not a point of equal payoffs, since a tie at zero goes to A.
pub fn indifference_points(game: &GGLInstance) -> Vec<f64> {
    let (xa, xb, al) = (game.budget_a(), game.budget_b(), game.alpha());
    let gamma = xb / xa;
    let a = al / (1.0 - al);
    let mut points = Vec::new();
    if gamma <= 1.0 {
        let lead = gamma + 2.0 * a;
        let radicand = lead * lead - 8.0 * a;
        if radicand >= 0.0 {
            let root = radicand.sqrt();
            points.push(0.5 * xa * (lead - root));
            points.push(0.5 * xa * (lead + root));
        }
    } else if gamma >= (1.0 + al) / (1.0 - al) {
        points.push(2.0 * al * xb / (1.0 + al));
    } else {
        let k = 1.0 - 3.0 * al;
        let om = 1.0 - al;
        let root = (k * k + 4.0 * om * om * (gamma - 1.0)).sqrt();
        points.push(xb - xa / (2.0 * om) * (k + root));
    }
    let cap = xa.min(xb);
    points.retain(|p| *p >= 0.0 && *p <= cap);
    points.dedup();
    points
}

/// Checks numerically that battlefield-2 pre-commitments never reach the
/// lowest equilibrium payoff of a weaker B.
pub fn lemma3_dominated(game: &GGLInstance) -> Result<bool> {
    if game.budget_b() > game.budget_a() {
        return Err(LottoError::Precondition(format!(
            "X_B = {} exceeds X_A = {}; the check applies to a weaker B only",
            game.budget_b(),
            game.budget_a()
        )));
    }
    let set = find_zeros(game, ZERO_TOL)?;
    let floor = set.worst_payoff_b();
    let xb = game.budget_b();
    let best = (0..=1000)
        .map(|k| value_b(game, Battlefield::Second, xb * k as f64 / 1000.0))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(best < floor)
}

/// How a benefit verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictBasis {
    /// From the ratio conditions, with a verified witness.
    Analytic,
    /// From the dense candidate search, outside the analytic region.
    Empirical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenefitReport {
    pub beats_second_best: bool,
    /// `None` when the game has three equilibria.
    pub beats_unique: Option<bool>,
    pub basis: VerdictBasis,
    pub witness: Option<GGLPreCommit>,
    /// B's payoff under the witness, or the best found payoff without one.
    pub guaranteed_ub: f64,
    /// The equilibrium payoff the witness is compared against.
    pub benchmark: f64,
}

/// Lower end of the ratio range where battlefield-1 indifference exists.
pub fn indifference_ratio_bound(alpha: f64) -> f64 {
    let a = alpha / (1.0 - alpha);
    (8.0 * a).sqrt() - 2.0 * a
}

/// Best battlefield-1 pre-commitment among the withdrawal-forcing
/// candidates: indifference points, and `X_A + ε` for a stronger B.
fn forcing_witness(game: &GGLInstance, epsilon: f64) -> Option<(GGLPreCommit, f64)> {
    let mut cands = indifference_points(game);
    if game.budget_b() > game.budget_a() + epsilon {
        cands.push(game.budget_a() + epsilon);
    }
    cands
        .into_iter()
        .filter(|&p| respond(game, Battlefield::First, p) == Response::Withdraw)
        .map(|p| {
            let pc = GGLPreCommit {
                battlefield: Battlefield::First,
                amount: p,
            };
            (pc, ub_ggl(&pc, game))
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

fn default_epsilon(game: &GGLInstance) -> f64 {
    1e-6 * game.budget_a()
}

/// Whether a pre-commitment beats the middle of three equilibrium payoffs.
pub fn beats_second_best(game: &GGLInstance) -> Result<BenefitReport> {
    let set = find_zeros(game, ZERO_TOL)?;
    let Some(second) = set.second_payoff_b() else {
        return Err(LottoError::Precondition(
            "game has a unique equilibrium; use beats_unique".into(),
        ));
    };
    let gamma = game.budget_b() / game.budget_a();
    let in_region = gamma > 1.0 || gamma >= indifference_ratio_bound(game.alpha());
    let witness = forcing_witness(game, default_epsilon(game));
    match witness {
        Some((pc, u)) if in_region && u > second + BENEFIT_MARGIN => Ok(BenefitReport {
            beats_second_best: true,
            beats_unique: None,
            basis: VerdictBasis::Analytic,
            witness: Some(pc),
            guaranteed_ub: u,
            benchmark: second,
        }),
        _ => {
            let (pc, u) = optimal_precommit_ggl(game, default_epsilon(game))?;
            let beats = u > second + BENEFIT_MARGIN;
            Ok(BenefitReport {
                beats_second_best: beats,
                beats_unique: None,
                basis: if in_region {
                    VerdictBasis::Empirical
                } else {
                    VerdictBasis::Analytic
                },
                witness: beats.then_some(pc),
                guaranteed_ub: u,
                benchmark: second,
            })
        }
    }
}

/// Whether a pre-commitment beats the unique equilibrium payoff.
///
/// Inside the sufficient ratio region the verdict comes with a
/// withdrawal-forcing witness; elsewhere it is taken from the dense search.
pub fn beats_unique(game: &GGLInstance) -> Result<BenefitReport> {
    if count_equilibria(game) != 1 {
        return Err(LottoError::Precondition(
            "game has three equilibria; use beats_second_best".into(),
        ));
    }
    let set = find_zeros(game, ZERO_TOL)?;
    let nominal = set.best_payoff_b();
    let al = game.alpha();
    let gamma = game.budget_b() / game.budget_a();
    let upper = 1f64.min(((1.0 - al) / (3.0 * al)).sqrt());
    let lower = indifference_ratio_bound(al);
    if gamma >= lower && gamma < upper {
        if let Some((pc, u)) = forcing_witness(game, default_epsilon(game)) {
            if u > nominal + BENEFIT_MARGIN {
                return Ok(BenefitReport {
                    beats_second_best: false,
                    beats_unique: Some(true),
                    basis: VerdictBasis::Analytic,
                    witness: Some(pc),
                    guaranteed_ub: u,
                    benchmark: nominal,
                });
            }
        }
    }
    let (pc, u) = optimal_precommit_ggl(game, default_epsilon(game))?;
    let beats = u > nominal + BENEFIT_MARGIN;
    Ok(BenefitReport {
        beats_second_best: false,
        beats_unique: Some(beats),
        basis: if gamma < lower && gamma <= 1.0 && !beats {
            VerdictBasis::Analytic
        } else {
            VerdictBasis::Empirical
        },
        witness: beats.then_some(pc),
        guaranteed_ub: u,
        benchmark: nominal,
    })
}

/// Dispatches to [`beats_second_best`] or [`beats_unique`] by equilibrium count.
pub fn benefit_report(game: &GGLInstance) -> Result<(EquilibriumSet, BenefitReport)> {
    let set = find_zeros(game, ZERO_TOL)?;
    let report = if set.count() == 3 {
        beats_second_best(game)?
    } else {
        beats_unique(game)?
    };
    Ok((set, report))
}

/// Maximizes B's payoff over both battlefields and all amounts.
///
/// Candidates are the indifference points, `0`, `X_A`, `X_A + ε`, `X_B` and a
/// grid of step `X_B/10⁴`, refined to `1e-8·X_B` around the best grid cell.
pub fn optimal_precommit_ggl(game: &GGLInstance, epsilon: f64) -> Result<(GGLPreCommit, f64)> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(LottoError::EpsilonTooLarge {
            epsilon,
            limit: game.budget_b(),
        });
    }
    let (xa, xb) = (game.budget_a(), game.budget_b());
    let step = xb / GRID_POINTS as f64;
    let mut best = (Battlefield::First, 0.0, f64::NEG_INFINITY);
    for b in Battlefield::BOTH {
        let mut consider = |p: f64| {
            if (0.0..=xb).contains(&p) {
                let u = value_b(game, b, p);
                if u > best.2 + 1e-15 {
                    best = (b, p, u);
                }
            }
        };
        let mut specials = vec![0.0, xa, xa + epsilon, xb];
        specials.extend(indifference_switches(game, b));
        for p in specials {
            consider(p);
        }
        let values: Vec<f64> = (0..=GRID_POINTS)
            .map(|k| value_b(game, b, k as f64 * step))
            .collect();
        let k = values
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &u)| {
                    if u > acc.1 {
                        (i, u)
                    } else {
                        acc
                    }
                },
            )
            .0;
        consider(k as f64 * step);
        let mut lo = (k as f64 - 1.0).max(0.0) * step;
        let mut hi = ((k + 1) as f64 * step).min(xb);
        let mut h = step;
        while h > 1e-8 * xb {
            h /= 10.0;
            let mut local = (lo, f64::NEG_INFINITY);
            let mut p = lo;
            while p <= hi {
                let u = value_b(game, b, p);
                consider(p);
                if u > local.1 {
                    local = (p, u);
                }
                p += h;
            }
            lo = (local.0 - h).max(0.0);
            hi = (local.0 + h).min(xb);
        }
    }
    let (b, p, u) = best;
    Ok((
        GGLPreCommit {
            battlefield: b,
            amount: p,
        },
        u,
    ))
}

/// Response switch points on one battlefield, located numerically so that
/// battlefield 2 and off-formula cases are covered too.
fn indifference_switches(game: &GGLInstance, b: Battlefield) -> Vec<f64> {
    let cap = game.budget_a().min(game.budget_b());
    let gap = |p: f64| match_value(game, b, p) - withdraw_value(game, b, p);
    let n = 2000;
    let mut out = Vec::new();
    if b == Battlefield::First {
        out.extend(indifference_points(game));
    }
    let mut prev = (0.0, gap(0.0));
    for k in 1..=n {
        let p = cap * k as f64 / n as f64;
        let g = gap(p);
        if (g < 0.0) != (prev.1 < 0.0) {
            out.push(bisect(gap, prev.0, p, prev.1));
        }
        prev = (p, g);
    }
    out
}
