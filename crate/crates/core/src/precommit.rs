//! Public pre-commitments in the symmetric-valuation game.
//!
//! Player B first announces binding amounts `p_b` on a target set `𝒫`.
//! Player A then matches some subset `𝓜 ⊆ 𝒫` (paying `p_b` to take each
//! matched battlefield; ties go to A) and abandons the rest to B. Finally the
//! players contest the untargeted battlefields with what is left:
//!
//! ```text
//! u_A(𝓜) = v_𝓜 + (φ − v_𝒫)·L(X_A − p_𝓜, X_B − p_𝒫)
//! u_B    = φ − max_𝓜 u_A(𝓜)        over 𝓜 with p_𝓜 ≤ X_A
//! ```

use std::collections::BTreeMap;

use crate::error::{LottoError, Result};
use crate::lotto::{nominal_payoffs, residual_share_a, GLInstance};

/// Largest target set [`best_response_a`] will enumerate.
pub const ENUMERATION_CAP: usize = 24;

pub(crate) const TIE_TOL: f64 = 1e-12;

/// Binding amounts announced by player B, keyed by battlefield.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PreCommitment {
    amounts: BTreeMap<usize, f64>,
}

impl PreCommitment {
    /// Builds a pre-commitment and checks it is admissible for `game`.
    pub fn new(game: &GLInstance, entries: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut amounts = BTreeMap::new();
        for (b, p) in entries {
            game.value(b)?;
            if !p.is_finite() || p < 0.0 {
                return Err(LottoError::InvalidPrecommitment(format!(
                    "amount {p} on battlefield {b} must be finite and non-negative"
                )));
            }
            if amounts.insert(b, p).is_some() {
                return Err(LottoError::InvalidPrecommitment(format!(
                    "battlefield {b} listed twice"
                )));
            }
        }
        let pc = PreCommitment { amounts };
        let total = pc.total();
        // summing several amounts that were split from X_B may overshoot by an ulp
        if total > game.budget_b() * (1.0 + 1e-12) {
            return Err(LottoError::InvalidPrecommitment(format!(
                "total {total} exceeds X_B = {}",
                game.budget_b()
            )));
        }
        Ok(pc)
    }

    pub fn empty() -> Self {
        PreCommitment::default()
    }

    pub fn single(game: &GLInstance, battlefield: usize, amount: f64) -> Result<Self> {
        PreCommitment::new(game, [(battlefield, amount)])
    }

    pub fn targets(&self) -> impl Iterator<Item = usize> + '_ {
        self.amounts.keys().copied()
    }

    pub fn amount(&self, battlefield: usize) -> Option<f64> {
        self.amounts.get(&battlefield).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.amounts.iter().map(|(b, p)| (*b, *p))
    }

    pub fn len(&self) -> usize {
        self.amounts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amounts.is_empty()
    }

    /// Total committed `p_𝒫`.
    pub fn total(&self) -> f64 {
        self.amounts.values().sum()
    }

    /// Value `v_𝒫` of the targeted battlefields.
    pub fn target_value(&self, game: &GLInstance) -> f64 {
        self.targets().map(|b| game.valuations()[b]).sum()
    }
}

/// Cap `v̄` on the total value B may pre-commit to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitValue(f64);

impl LimitValue {
    pub fn new(v_bar: f64, phi: f64) -> Result<Self> {
        if v_bar.is_finite() && (0.0..=phi).contains(&v_bar) {
            Ok(LimitValue(v_bar))
        } else {
            Err(LottoError::InvalidValuation(format!(
                "limit value {v_bar} outside [0, {phi}]"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn admits(self, pc: &PreCommitment, game: &GLInstance) -> bool {
        pc.target_value(game) <= self.0 + 1e-12
    }
}

/// Player A's choice of which pre-commitments to match.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchResponse {
    pub matched: Vec<usize>,
    pub spent: f64,
}

/// Player A's payoff from matching exactly `matched`.
pub fn payoff_a_given_match(
    pc: &PreCommitment,
    matched: &[usize],
    game: &GLInstance,
) -> Result<f64> {
    let mut v_m = 0.0;
    let mut p_m = 0.0;
    for (i, &b) in matched.iter().enumerate() {
        if matched[..i].contains(&b) {
            return Err(LottoError::InvalidPrecommitment(format!(
                "battlefield {b} matched twice"
            )));
        }
        let p = pc.amount(b).ok_or(LottoError::NotATarget { index: b })?;
        v_m += game.valuations()[b];
        p_m += p;
    }
    if p_m > game.budget_a() {
        return Err(LottoError::InfeasibleResponse {
            spent: p_m,
            budget: game.budget_a(),
        });
    }
    let v_p = pc.target_value(game);
    Ok(match_payoff(
        v_m,
        p_m,
        v_p,
        pc.total(),
        game.phi(),
        game.budget_a(),
        game.budget_b(),
    ))
}

#[inline]
fn match_payoff(v_m: f64, p_m: f64, v_p: f64, p_p: f64, phi: f64, xa: f64, xb: f64) -> f64 {
    v_m + (phi - v_p) * residual_share_a(xa - p_m, xb - p_p)
}

/// Best subset found by enumeration: `(mask, u_A, v_𝓜, p_𝓜)`.
pub(crate) fn enumerate_response(
    targets: &[(f64, f64)],
    phi: f64,
    xa: f64,
    xb: f64,
) -> (u32, f64, f64, f64) {
    let k = targets.len();
    let v_p: f64 = targets.iter().map(|t| t.0).sum();
    let p_p: f64 = targets.iter().map(|t| t.1).sum();
    let tol = TIE_TOL * phi.max(1.0);
    // withdrawing everywhere is always feasible
    let mut best = (
        0u32,
        match_payoff(0.0, 0.0, v_p, p_p, phi, xa, xb),
        0.0,
        0.0,
    );
    for mask in 1u32..(1u32 << k) {
        let mut v_m = 0.0;
        let mut p_m = 0.0;
        for (i, (v, p)) in targets.iter().enumerate() {
            if mask & (1 << i) != 0 {
                v_m += v;
                p_m += p;
            }
        }
        if p_m > xa {
            continue;
        }
        let u = match_payoff(v_m, p_m, v_p, p_p, phi, xa, xb);
        let more = v_m > best.2 || (v_m == best.2 && mask.count_ones() > best.0.count_ones());
        if u > best.1 + tol || ((u - best.1).abs() <= tol && more) {
            best = (mask, u, v_m, p_m);
        }
    }
    best
}

/// Player A's optimal response by exhaustive enumeration of `𝓜 ⊆ 𝒫`.
///
/// Among responses whose payoffs agree to within `1e-12·φ`, the one that
/// matches more value (then more targets) is preferred; B's payoff is the same either way.
pub fn best_response_a(pc: &PreCommitment, game: &GLInstance) -> Result<(MatchResponse, f64)> {
    if pc.len() > ENUMERATION_CAP {
        return Err(LottoError::EnumerationCap {
            size: pc.len(),
            cap: ENUMERATION_CAP,
        });
    }
    let ids: Vec<usize> = pc.targets().collect();
    let targets: Vec<(f64, f64)> = pc
        .entries()
        .map(|(b, p)| (game.valuations()[b], p))
        .collect();
    let (mask, u_a, _, spent) =
        enumerate_response(&targets, game.phi(), game.budget_a(), game.budget_b());
    let matched = ids
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, b)| *b)
        .collect();
    Ok((MatchResponse { matched, spent }, u_a))
}

/// B's payoff `φ − u_A` after A responds optimally.
pub fn payoff_b(pc: &PreCommitment, game: &GLInstance) -> Result<f64> {
    let (_, u_a) = best_response_a(pc, game)?;
    Ok(game.phi() - u_a)
}

/// Budget comparison that decides which incentive condition applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetRegime {
    /// `X_B < X_A`
    Weaker,
    /// `X_A ≤ X_B < 2·X_A`
    Mid,
    /// `X_B ≥ 2·X_A`
    Strong,
}

impl BudgetRegime {
    pub fn of(xa: f64, xb: f64) -> Self {
        if xb < xa {
            BudgetRegime::Weaker
        } else if xb < 2.0 * xa {
            BudgetRegime::Mid
        } else {
            BudgetRegime::Strong
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncentiveReport {
    pub has_incentive: bool,
    pub threshold: Option<f64>,
    pub regime: BudgetRegime,
}

/// Smallest battlefield value above which a single pre-commitment can beat
/// the nominal payoff; `None` when no value suffices.
///
/// With `γ = X_B/X_A`, the threshold is `(1 − 1/(γ(3 − γ)))·φ` for
/// `1 < γ < 2` and `φ/γ` for `γ ≥ 2`. At `γ = 1` no pre-commitment can exceed
/// `X_A` and force a withdrawal, so the answer is `None` there as well.
pub fn min_beneficial_value(xa: f64, xb: f64, phi: f64) -> Result<Option<f64>> {
    for (name, value) in [("X_A", xa), ("X_B", xb), ("phi", phi)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(LottoError::NonPositiveBudget { name, value });
        }
    }
    if xb <= xa {
        return Ok(None);
    }
    let gamma = xb / xa;
    Ok(Some(match BudgetRegime::of(xa, xb) {
        BudgetRegime::Strong => phi / gamma,
        _ => (1.0 - (xa / xb) / (3.0 - gamma)) * phi,
    }))
}

/// Incentive verdict for a limit value `v_bar`.
pub fn classify_incentive(xa: f64, xb: f64, phi: f64, v_bar: f64) -> Result<IncentiveReport> {
    LimitValue::new(v_bar, phi)?;
    let threshold = min_beneficial_value(xa, xb, phi)?;
    Ok(IncentiveReport {
        has_incentive: threshold.is_some_and(|t| v_bar > t),
        threshold,
        regime: BudgetRegime::of(xa, xb),
    })
}

/// Closed-form point making A indifferent between matching and withdrawing
/// a single pre-commitment on a battlefield of value `v`, when B is the
/// stronger player.
///
/// Low values: `p* = 2v·X_B/(φ + v)` while `p* ≤ X_B − X_A`.
/// Mid values: `p* = X_B − X_A/(2(φ−v))·[(φ−3v) + √((φ−3v)² + 4(φ−v)²(γ−1))]`
/// on `(X_B − X_A, X_A]`.
pub fn closed_form_indifference(xa: f64, xb: f64, phi: f64, v: f64) -> Option<f64> {
    if xb <= xa || v <= 0.0 || v >= phi {
        return None;
    }
    let low = 2.0 * v * xb / (phi + v);
    if low <= xb - xa && low <= xa {
        return Some(low);
    }
    let w = phi - v;
    let gamma = xb / xa;
    let a = phi - 3.0 * v;
    let mid = xb - xa / (2.0 * w) * (a + (a * a + 4.0 * w * w * (gamma - 1.0)).sqrt());
    (mid > xb - xa && mid <= xa).then_some(mid)
}

/// Result of maximizing B's payoff over single pre-commitments `p ∈ [0, X_B]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleOptimum {
    /// Pre-commitment achieving (or ε-approaching) the supremum.
    pub p: f64,
    /// Supremum of B's payoff.
    pub u_b: f64,
    /// Whether `u_b` is attained at `p`; otherwise it is a right-limit at
    /// `p ↘ X_A` and `p = X_A + ε`.
    pub attained: bool,
    /// B's payoff actually obtained at `p`.
    pub achieved_u_b: f64,
    /// Points where A is indifferent between matching and withdrawing.
    pub indifference_points: Vec<f64>,
    pub nominal_u_b: f64,
}

impl SingleOptimum {
    pub fn is_beneficial(&self) -> bool {
        self.u_b > self.nominal_u_b + 1e-9
    }
}

/// Single-battlefield pre-commitment payoffs for a battlefield of value `v`.
#[derive(Debug, Clone, Copy)]
struct SingleModel {
    v: f64,
    phi: f64,
    xa: f64,
    xb: f64,
}

impl SingleModel {
    fn withdraw_a(&self, p: f64) -> f64 {
        (self.phi - self.v) * residual_share_a(self.xa, self.xb - p)
    }

    fn match_a(&self, p: f64) -> f64 {
        self.v + (self.phi - self.v) * residual_share_a(self.xa - p, self.xb - p)
    }

    fn u_b(&self, p: f64) -> f64 {
        let w = self.withdraw_a(p);
        let u_a = if p <= self.xa {
            w.max(self.match_a(p))
        } else {
            w
        };
        self.phi - u_a
    }

    fn gap(&self, p: f64) -> f64 {
        self.match_a(p) - self.withdraw_a(p)
    }
}

const SINGLE_GRID: usize = 10_000;

/// Default `ε` for right-limit optima: `1e-6·X_A`.
pub fn default_epsilon(game: &GLInstance) -> f64 {
    1e-6 * game.budget_a()
}

/// Best single pre-commitment on `battlefield`.
///
/// Searches a candidate set (grid with step `1e-4·X_B`, the endpoints, the
/// kink at `X_B − X_A`, every indifference point) and refines around the best
/// grid cell down to `1e-8·X_B`. B's payoff is piecewise monotone between
/// these candidates, so the maximum over them is the supremum up to the
/// right-limit at `X_A`, which is handled analytically.
pub fn optimal_single_precommit(
    game: &GLInstance,
    battlefield: usize,
    epsilon: f64,
) -> Result<SingleOptimum> {
    let v = game.value(battlefield)?;
    if v <= 0.0 {
        return Err(LottoError::DegenerateBattlefield { index: battlefield });
    }
    let (xa, xb, phi) = (game.budget_a(), game.budget_b(), game.phi());
    if !(epsilon.is_finite() && epsilon > 0.0) || (xb > xa && epsilon >= xb - xa) {
        return Err(LottoError::EpsilonTooLarge {
            epsilon,
            limit: (xb - xa).max(0.0),
        });
    }
    let model = SingleModel { v, phi, xa, xb };
    let nominal_u_b = nominal_payoffs(game)?.payoff_b;

    let h = xb / SINGLE_GRID as f64;
    let grid: Vec<f64> = (0..=SINGLE_GRID).map(|k| k as f64 * h).collect();
    let values: Vec<f64> = grid.iter().map(|&p| model.u_b(p)).collect();

    // indifference points on [0, min(X_A, X_B)]
    let reach = xa.min(xb);
    let mut indifference_points = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &p in grid
        .iter()
        .take_while(|&&p| p <= reach)
        .chain([reach].iter())
    {
        let g = model.gap(p);
        if g == 0.0 {
            indifference_points.push(p);
        } else if let Some((p0, g0)) = prev {
            if g0 != 0.0 && (g0 < 0.0) != (g < 0.0) {
                indifference_points.push(bisect(|s| model.gap(s), p0, p, g0));
            }
        }
        prev = Some((p, g));
    }
    if let Some(p) = closed_form_indifference(xa, xb, phi, v) {
        if model.gap(p).abs() <= 1e-9 * phi
            && !indifference_points
                .iter()
                .any(|q| (q - p).abs() <= 1e-9 * xb)
        {
            indifference_points.push(p);
        }
    }
    indifference_points.sort_by(f64::total_cmp);
    indifference_points.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * xb);

    let mut best_p = 0.0;
    let mut best_u = f64::NEG_INFINITY;
    let mut consider = |p: f64, u: f64| {
        if u > best_u || (u == best_u && p < best_p) {
            best_p = p;
            best_u = u;
        }
    };
    for (&p, &u) in grid.iter().zip(&values) {
        consider(p, u);
    }
    for p in indifference_points
        .iter()
        .copied()
        .chain([xa.min(xb), xb, (xb - xa).max(0.0)])
    {
        consider(p, model.u_b(p));
    }

    // local refinement around the best grid cell
    let k = values
        .iter()
        .enumerate()
        .fold(0, |bk, (k, u)| if *u > values[bk] { k } else { bk });
    let mut lo = grid[k.saturating_sub(1)];
    let mut hi = grid[(k + 1).min(SINGLE_GRID)];
    let mut step = h;
    while step > 1e-8 * xb {
        step /= 10.0;
        let mut local_best = (lo, f64::NEG_INFINITY);
        let mut p = lo;
        while p <= hi {
            let u = model.u_b(p);
            consider(p, u);
            if u > local_best.1 {
                local_best = (p, u);
            }
            p += step;
        }
        lo = (local_best.0 - step).max(0.0);
        hi = (local_best.0 + step).min(xb);
    }

    if xa < xb {
        let limit = phi - model.withdraw_a(xa);
        if limit > best_u {
            let p = xa + epsilon;
            return Ok(SingleOptimum {
                p,
                u_b: limit,
                attained: false,
                achieved_u_b: model.u_b(p),
                indifference_points,
                nominal_u_b,
            });
        }
    }
    Ok(SingleOptimum {
        p: best_p,
        u_b: best_u,
        attained: true,
        achieved_u_b: best_u,
        indifference_points,
        nominal_u_b,
    })
}

/// Root of `f` on `[lo, hi]` given `f(lo) = f_lo` and a sign change.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A single pre-commitment on a merged instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleReduction {
    pub battlefield: usize,
    pub amount: f64,
    pub game: GLInstance,
}

/// Replaces a multi-target pre-commitment by a single one of at least the
/// same value to B.
///
/// The targets are merged into one battlefield of value `v_𝒫` placed first,
/// followed by the untargeted battlefields in their original order. The
/// merged amount is `p_𝒫`, or, when A matches only part of `𝒫` and could
/// afford all of it, `p_𝓜 + s*` where `s*` makes A indifferent between
/// matching and abandoning the unmatched group. The better of the two is
/// kept; `p_𝒫` alone already dominates because both of its responses are
/// available to A in the original game.
pub fn reduce_to_single(pc: &PreCommitment, game: &GLInstance) -> Result<SingleReduction> {
    if pc.is_empty() {
        return Err(LottoError::Precondition(
            "reduction needs at least one target".into(),
        ));
    }
    if pc.len() == 1 {
        let (battlefield, amount) = pc.entries().next().unwrap_or_default();
        return Ok(SingleReduction {
            battlefield,
            amount,
            game: game.clone(),
        });
    }

    let v_p = pc.target_value(game);
    let mut merged = vec![v_p];
    merged.extend(
        game.valuations()
            .iter()
            .enumerate()
            .filter(|(b, _)| pc.amount(*b).is_none())
            .map(|(_, v)| *v),
    );
    let merged_game = GLInstance::new(game.budget_a(), game.budget_b(), merged)?;
    let p_total = pc.total().min(game.budget_b());

    let (response, _) = best_response_a(pc, game)?;
    let uniform = response.matched.is_empty() || response.matched.len() == pc.len();
    let (xa, xb, phi) = (game.budget_a(), game.budget_b(), game.phi());

    let mut amount = p_total;
    if !uniform && p_total <= xa {
        let v1: f64 = response.matched.iter().map(|b| game.valuations()[*b]).sum();
        let p1 = response.spent;
        let v2 = v_p - v1;
        let p2 = (p_total - p1).max(0.0);
        // f: match group 1 only, g: match both groups, against (p1, s)
        let f = |s: f64| match_payoff(v1, p1, v1 + v2, p1 + s, phi, xa, xb);
        let g = |s: f64| match_payoff(v1 + v2, p1 + s, v1 + v2, p1 + s, phi, xa, xb);
        let h = |s: f64| g(s) - f(s);
        let h0 = h(0.0);
        let s_star = if h0 <= 0.0 {
            0.0
        } else if h(p2) >= 0.0 {
            p2
        } else {
            bisect(h, 0.0, p2, h0)
        };
        let candidate = p1 + s_star;
        let u_candidate = payoff_b(
            &PreCommitment::single(&merged_game, 0, candidate)?,
            &merged_game,
        )?;
        let u_total = payoff_b(
            &PreCommitment::single(&merged_game, 0, p_total)?,
            &merged_game,
        )?;
        if u_candidate >= u_total {
            amount = candidate;
        }
    }
    Ok(SingleReduction {
        battlefield: 0,
        amount,
        game: merged_game,
    })
}
