//! Equilibria of the two-battlefield asymmetric game `GGL(X_A, X_B, α)`.
//!
//! Player A values battlefield 1 at `α` and battlefield 2 at `1 − α`; player
//! B's valuations are mirrored. Every equilibrium is indexed by a zero `σ*`
//! of the piecewise solution function
//!
//! ```text
//! S(σ) = σ²[σ·c − r]                                σ ∈ (0, a)
//!      = α²/(1−α)·(σ³ − r) + α·σ·(1 − r·σ)         σ ∈ [a, 1/a)
//!      = σ − r·c                                    σ ≥ 1/a
//! ```
//!
//! with `r = X_A/X_B`, `a = α/(1−α)` and `c = (1−α)²/α + α²/(1−α)`. The
//! outer pieces have closed-form roots; the middle cubic is bracketed at its
//! critical points and bisected. There are either one or three zeros.

use crate::error::{LottoError, Result};
use crate::lotto::MarginalCDF;
use crate::precommit::bisect;

/// One of the two battlefields of the asymmetric game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Battlefield {
    /// Worth `α` to A and `1 − α` to B.
    First,
    /// Worth `1 − α` to A and `α` to B.
    Second,
}

impl Battlefield {
    pub const BOTH: [Battlefield; 2] = [Battlefield::First, Battlefield::Second];

    /// 1-based index.
    pub fn index(self) -> usize {
        match self {
            Battlefield::First => 1,
            Battlefield::Second => 2,
        }
    }

    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            1 => Ok(Battlefield::First),
            2 => Ok(Battlefield::Second),
            _ => Err(LottoError::BattlefieldOutOfRange { index, count: 2 }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GGLInstance {
    budget_a: f64,
    budget_b: f64,
    alpha: f64,
}

impl GGLInstance {
    pub fn new(budget_a: f64, budget_b: f64, alpha: f64) -> Result<Self> {
        for (name, value) in [("X_A", budget_a), ("X_B", budget_b)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(LottoError::NonPositiveBudget { name, value });
            }
        }
        if !(alpha > 0.0 && alpha <= 0.5) {
            return Err(LottoError::InvalidAlpha(alpha));
        }
        Ok(GGLInstance {
            budget_a,
            budget_b,
            alpha,
        })
    }

    pub fn budget_a(&self) -> f64 {
        self.budget_a
    }

    pub fn budget_b(&self) -> f64 {
        self.budget_b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `X_A / X_B`.
    pub fn ratio(&self) -> f64 {
        self.budget_a / self.budget_b
    }

    pub fn value_a(&self, battlefield: Battlefield) -> f64 {
        match battlefield {
            Battlefield::First => self.alpha,
            Battlefield::Second => 1.0 - self.alpha,
        }
    }

    pub fn value_b(&self, battlefield: Battlefield) -> f64 {
        match battlefield {
            Battlefield::First => 1.0 - self.alpha,
            Battlefield::Second => self.alpha,
        }
    }

    /// The breakpoints `α/(1−α)` and `(1−α)/α` of the solution function.
    pub fn breakpoints(&self) -> (f64, f64) {
        let a = self.alpha / (1.0 - self.alpha);
        (a, 1.0 / a)
    }

    /// `(1−α)²/α + α²/(1−α)`.
    pub fn spread(&self) -> f64 {
        let (al, om) = (self.alpha, 1.0 - self.alpha);
        om * om / al + al * al / om
    }

    /// Upper end of the root search interval.
    pub fn search_bound(&self) -> f64 {
        10.0 * self.ratio().max(1.0) * self.spread()
    }

    fn middle_piece(&self, sigma: f64) -> f64 {
        let (al, r) = (self.alpha, self.ratio());
        al * al / (1.0 - al) * (sigma * sigma * sigma - r) + al * sigma * (1.0 - r * sigma)
    }

    fn middle_slope(&self, sigma: f64) -> f64 {
        let (al, r) = (self.alpha, self.ratio());
        3.0 * al * al / (1.0 - al) * sigma * sigma + al * (1.0 - 2.0 * r * sigma)
    }

    fn eval(&self, sigma: f64) -> f64 {
        let (lo, hi) = self.breakpoints();
        let r = self.ratio();
        if sigma < lo {
            sigma * sigma * (sigma * self.spread() - r)
        } else if sigma < hi {
            self.middle_piece(sigma)
        } else {
            sigma - r * self.spread()
        }
    }
}

/// The solution function `S(σ)`.
pub fn solution_function(sigma: f64, game: &GGLInstance) -> Result<f64> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(LottoError::Domain {
            name: "sigma",
            value: sigma,
        });
    }
    Ok(game.eval(sigma))
}

/// Critical points `σ∓` of the middle cubic, or `None` when they are not real.
pub fn critical_points(game: &GGLInstance) -> Option<(f64, f64)> {
    let k = 3.0 * game.alpha / (1.0 - game.alpha);
    let r = game.ratio();
    let radicand = r * r - k;
    if radicand < 0.0 {
        return None;
    }
    let scale = (1.0 - game.alpha) / (3.0 * game.alpha);
    let root = radicand.sqrt();
    Some((scale * (r - root), scale * (r + root)))
}

/// Number of equilibria (1 or 3) from the sign of `S` at the critical points.
pub fn count_equilibria(game: &GGLInstance) -> usize {
    let Some((minus, plus)) = critical_points(game) else {
        return 1;
    };
    let b_weaker = game.budget_b / game.budget_a <= 1.0;
    let three = if b_weaker {
        game.eval(minus) > 0.0
    } else {
        game.eval(plus) < 0.0
    };
    if three {
        3
    } else {
        1
    }
}

/// Zeros of `S` in ascending order with their payoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet {
    pub zeros: Vec<f64>,
    /// `(π_A, π_B)` per zero.
    pub payoffs: Vec<(f64, f64)>,
    /// Set when zeros closer than `1e-8` were merged (tangency).
    pub boundary_degenerate: bool,
}

impl EquilibriumSet {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    /// B's payoffs from best to worst.
    pub fn ranked_payoffs_b(&self) -> Vec<f64> {
        let mut pb: Vec<f64> = self.payoffs.iter().map(|p| p.1).collect();
        pb.sort_by(|a, b| b.total_cmp(a));
        pb
    }

    pub fn best_payoff_b(&self) -> f64 {
        self.ranked_payoffs_b()[0]
    }

    /// Middle-ranked payoff for B when there are three equilibria.
    pub fn second_payoff_b(&self) -> Option<f64> {
        let ranked = self.ranked_payoffs_b();
        (ranked.len() == 3).then(|| ranked[1])
    }

    pub fn worst_payoff_b(&self) -> f64 {
        *self.ranked_payoffs_b().last().unwrap_or(&f64::NAN)
    }
}

const MERGE_GAP: f64 = 1e-8;

/// Locates every zero of `S` to residual `tol`.
pub fn find_zeros(game: &GGLInstance, tol: f64) -> Result<EquilibriumSet> {
    if tol.is_nan() || tol < 1e-14 {
        return Err(LottoError::Precondition(format!(
            "tolerance {tol} is below 1e-14"
        )));
    }
    let (lo, hi) = game.breakpoints();
    let r = game.ratio();
    let c = game.spread();
    let mut zeros = Vec::with_capacity(3);

    let first = r / c;
    if first < lo {
        zeros.push(first);
    }

    if lo < hi {
        let mut marks = vec![lo];
        if let Some((minus, plus)) = critical_points(game) {
            marks.extend([minus, plus].into_iter().filter(|s| *s > lo && *s < hi));
        }
        marks.push(hi);
        for pair in marks.windows(2) {
            let (x0, x1) = (pair[0], pair[1]);
            let (f0, f1) = (game.middle_piece(x0), game.middle_piece(x1));
            if f0 == 0.0 {
                zeros.push(x0);
            } else if f1 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
                zeros.push(polish(
                    game,
                    bisect(|s| game.middle_piece(s), x0, x1, f0),
                    x0,
                    x1,
                ));
            }
        }
    }

    let third = r * c;
    if third >= hi {
        zeros.push(third);
    }

    zeros.sort_by(f64::total_cmp);
    let before = zeros.len();
    zeros.dedup_by(|b, a| (*b - *a).abs() < MERGE_GAP);
    let boundary_degenerate = zeros.len() != before;

    for &z in &zeros {
        let residual = game.eval(z).abs();
        if residual > tol {
            return Err(LottoError::Convergence {
                sigma: z,
                residual,
                iterations: 200,
            });
        }
    }
    let payoffs = zeros.iter().map(|&z| payoffs_unchecked(z, game)).collect();
    Ok(EquilibriumSet {
        zeros,
        payoffs,
        boundary_degenerate,
    })
}

/// One guarded Newton step from the bisection midpoint; kept only if it
/// lowers the residual and stays in the bracket.
fn polish(game: &GGLInstance, sigma: f64, lo: f64, hi: f64) -> f64 {
    let f = game.middle_piece(sigma);
    let d = game.middle_slope(sigma);
    if d == 0.0 || f == 0.0 {
        return sigma;
    }
    let next = sigma - f / d;
    if next > lo && next < hi && game.middle_piece(next).abs() < f.abs() {
        next
    } else {
        sigma
    }
}

fn payoffs_unchecked(sigma: f64, game: &GGLInstance) -> (f64, f64) {
    let al = game.alpha;
    let om = 1.0 - al;
    let (lo, hi) = game.breakpoints();
    let c = game.spread();
    if sigma < lo {
        (0.5 * sigma * c, 1.0 - 0.5 * sigma)
    } else if sigma < hi {
        (
            om - al / (2.0 * sigma) + al * al * sigma / (2.0 * om),
            om - 0.5 * al * sigma + al * al / (2.0 * sigma * om),
        )
    } else {
        (1.0 - 1.0 / (2.0 * sigma), c / (2.0 * sigma))
    }
}

/// Equilibrium payoffs `(π_A, π_B)` at a zero `σ*`.
pub fn equilibrium_payoffs(sigma_star: f64, game: &GGLInstance) -> Result<(f64, f64)> {
    let residual = solution_function(sigma_star, game)?.abs();
    if residual > 1e-8 {
        return Err(LottoError::InvalidEquilibrium {
            sigma: sigma_star,
            residual,
        });
    }
    Ok(payoffs_unchecked(sigma_star, game))
}

/// Equilibrium strategies attached to one zero.
#[derive(Debug, Clone, PartialEq)]
pub struct GGLMarginals {
    /// Battlefields where B competes more aggressively than A.
    pub priority_set: Vec<Battlefield>,
    pub lambda_a: f64,
    pub lambda_b: f64,
    /// `[battlefield 1, battlefield 2]` marginals for A.
    pub marginals_a: [MarginalCDF; 2],
    pub marginals_b: [MarginalCDF; 2],
}

impl GGLMarginals {
    pub fn in_priority_set(&self, battlefield: Battlefield) -> bool {
        self.priority_set.contains(&battlefield)
    }
}

/// Builds the equilibrium marginals for the zero `σ*`.
///
/// Both players share the support bound on each battlefield: `v_{A,b}/λ_A`
/// on priority battlefields and `v_{B,b}/λ_B` elsewhere.
pub fn ggl_marginals(sigma_star: f64, game: &GGLInstance) -> Result<GGLMarginals> {
    equilibrium_payoffs(sigma_star, game)?;
    let sigma = sigma_star;
    let priority_set: Vec<Battlefield> = Battlefield::BOTH
        .into_iter()
        .filter(|b| game.value_b(*b) / game.value_a(*b) >= sigma)
        .collect();
    let (mut inside, mut outside) = (0.0, 0.0);
    for b in Battlefield::BOTH {
        if priority_set.contains(&b) {
            inside += game.value_a(b);
        } else {
            outside += game.value_b(b).powi(2) / game.value_a(b);
        }
    }
    let lambda_a = (inside + outside / (sigma * sigma)) / (2.0 * game.budget_b);
    let lambda_b = sigma * lambda_a;

    let build = |b: Battlefield| -> Result<(MarginalCDF, MarginalCDF)> {
        let (va, vb) = (game.value_a(b), game.value_b(b));
        if priority_set.contains(&b) {
            let upper = va / lambda_a;
            Ok((
                MarginalCDF::new(1.0 - va / vb * sigma, lambda_b / vb, upper)?,
                MarginalCDF::new(0.0, lambda_a / va, upper)?,
            ))
        } else {
            let upper = vb / lambda_b;
            Ok((
                MarginalCDF::new(0.0, lambda_b / vb, upper)?,
                MarginalCDF::new(1.0 - vb / (va * sigma), lambda_a / va, upper)?,
            ))
        }
    };
    let (a1, b1) = build(Battlefield::First)?;
    let (a2, b2) = build(Battlefield::Second)?;
    Ok(GGLMarginals {
        priority_set,
        lambda_a,
        lambda_b,
        marginals_a: [a1, a2],
        marginals_b: [b1, b2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lotto::{nominal_payoffs, GLInstance};

    fn g(alpha: f64, xa: f64, xb: f64) -> GGLInstance {
        GGLInstance::new(xa, xb, alpha).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert!(GGLInstance::new(1.0, 1.0, 0.0).is_err());
        assert!(GGLInstance::new(1.0, 1.0, 0.6).is_err());
        assert!(GGLInstance::new(1.0, 1.0, 0.5).is_ok());
        assert!(GGLInstance::new(-1.0, 1.0, 0.3).is_err());
        let game = g(0.3, 1.0, 1.0);
        assert_eq!(game.value_a(Battlefield::First), 0.3);
        assert_eq!(game.value_b(Battlefield::First), 0.7);
        assert_eq!(game.value_b(Battlefield::Second), 0.3);
        assert!(Battlefield::from_index(3).is_err());
    }

    #[test]
    fn symmetric_alpha_collapses_breakpoints() {
        let game = g(0.5, 1.3, 1.0);
        assert_eq!(game.breakpoints(), (1.0, 1.0));
        assert!((game.spread() - 1.0).abs() < 1e-15);
        for s in [1.0, 1.5, 4.0] {
            let v = solution_function(s, &game).unwrap();
            assert!((v - (s - 1.3)).abs() < 1e-14);
        }
        assert!(solution_function(0.0, &game).is_err());
        assert!(solution_function(-1.0, &game).is_err());
    }

    #[test]
    fn first_piece_closed_form_root() {
        let game = g(0.25, 0.3, 1.0);
        let root = game.ratio() / game.spread();
        assert!(root < game.breakpoints().0);
        assert!(solution_function(root, &game).unwrap().abs() < 1e-15);
    }

    #[test]
    fn critical_point_examples() {
        let (m, p) = critical_points(&g(0.25, 1.0, 1.0)).unwrap();
        assert!((m - 1.0).abs() < 1e-12 && (p - 1.0).abs() < 1e-12);
        // r² = 3α/(1−α) exactly
        let alpha: f64 = 0.1;
        let r = (3.0 * alpha / (1.0 - alpha)).sqrt();
        let (m, p) = critical_points(&g(alpha, r, 1.0)).unwrap();
        assert!((m - p).abs() < 1e-6);
        assert!(critical_points(&g(0.25, 0.9, 1.0)).is_none());
    }

    #[test]
    fn third_piece_example() {
        let game = g(0.25, 2.0, 1.0);
        let set = find_zeros(&game, 1e-12).unwrap();
        assert_eq!(set.count(), 1);
        assert!((set.zeros[0] - 14.0 / 3.0).abs() < 1e-12);
        assert!((set.payoffs[0].1 - 0.25).abs() < 1e-12);
        assert!(solution_function(set.zeros[0], &game).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn first_piece_example() {
        let game = g(0.25, 0.3, 1.0);
        let set = find_zeros(&game, 1e-12).unwrap();
        assert_eq!(set.count(), 1);
        assert!((set.zeros[0] - 0.3 / (2.25 + 1.0 / 12.0)).abs() < 1e-12);
        assert!((set.payoffs[0].0 - 0.15).abs() < 1e-12);
    }

    #[test]
    fn symmetric_equal_budgets() {
        let set = find_zeros(&g(0.5, 1.0, 1.0), 1e-12).unwrap();
        assert_eq!(set.count(), 1);
        let (pa, pb) = set.payoffs[0];
        assert!((pa - 0.5).abs() < 1e-12 && (pb - 0.5).abs() < 1e-12);
    }

    #[test]
    fn three_zeros_are_ranked() {
        // α = 0.1, X_A/X_B = 1.25 lies inside the multi-equilibrium region
        let game = g(0.1, 1.25, 1.0);
        assert_eq!(count_equilibria(&game), 3);
        let set = find_zeros(&game, 1e-10).unwrap();
        assert_eq!(set.count(), 3);
        assert!(set.zeros.windows(2).all(|w| w[0] < w[1]));
        assert!(set
            .payoffs
            .windows(2)
            .all(|w| w[0].1 > w[1].1 && w[0].0 < w[1].0));
        assert_eq!(set.second_payoff_b(), Some(set.payoffs[1].1));
        for z in &set.zeros {
            assert!(game.eval(*z).abs() <= 1e-10);
        }
    }

    #[test]
    fn tolerance_precondition() {
        assert!(find_zeros(&g(0.3, 1.0, 1.0), 1e-15).is_err());
    }

    #[test]
    fn payoffs_reject_non_zero() {
        let game = g(0.25, 2.0, 1.0);
        assert!(matches!(
            equilibrium_payoffs(1.0, &game),
            Err(LottoError::InvalidEquilibrium { .. })
        ));
    }

    #[test]
    fn payoff_branches() {
        let game = g(0.25, 2.0, 1.0);
        let s = 14.0 / 3.0;
        let (pa, _) = equilibrium_payoffs(s, &game).unwrap();
        assert!((pa - (1.0 - 1.0 / (2.0 * s))).abs() < 1e-15);
        let game = g(0.25, 0.3, 1.0);
        let s = 0.3 / game.spread();
        let (_, pb) = equilibrium_payoffs(s, &game).unwrap();
        assert!((pb - (1.0 - s / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn symmetric_alpha_matches_gl() {
        for (xa, xb) in [(1.0, 1.0), (2.0, 1.0), (0.4, 1.7), (3.0, 2.9)] {
            let set = find_zeros(&g(0.5, xa, xb), 1e-12).unwrap();
            assert_eq!(set.count(), 1);
            let gl = nominal_payoffs(&GLInstance::new(xa, xb, vec![0.5, 0.5]).unwrap()).unwrap();
            assert!((set.payoffs[0].0 - gl.payoff_a).abs() < 1e-10);
            assert!((set.payoffs[0].1 - gl.payoff_b).abs() < 1e-10);
        }
    }

    #[test]
    fn marginals_priority_branch_and_normalization() {
        let game = g(0.1, 1.25, 1.0);
        let set = find_zeros(&game, 1e-10).unwrap();
        for &z in &set.zeros {
            let m = ggl_marginals(z, &game).unwrap();
            assert!((m.lambda_b - z * m.lambda_a).abs() < 1e-15);
            for b in Battlefield::BOTH {
                let i = b.index() - 1;
                let (fa, fb) = (m.marginals_a[i], m.marginals_b[i]);
                assert!((fa.end_value() - 1.0).abs() < 1e-12);
                assert!((fb.end_value() - 1.0).abs() < 1e-12);
                assert_eq!(fa.support_upper, fb.support_upper);
                if m.in_priority_set(b) {
                    let atom = 1.0 - game.value_a(b) / game.value_b(b) * z;
                    assert!((fa.atom_at_zero - atom).abs() < 1e-15);
                    assert!((0.0..=1.0).contains(&fa.atom_at_zero));
                }
            }
            // B spends its budget in expectation
            let spend_b: f64 = m.marginals_b.iter().map(|f| f.mean()).sum();
            assert!((spend_b - game.budget_b()).abs() < 1e-10);
            let spend_a: f64 = m.marginals_a.iter().map(|f| f.mean()).sum();
            assert!((spend_a - game.budget_a()).abs() < 1e-10);
        }
    }

    #[test]
    fn symmetric_marginals_reduce_to_gl_form() {
        use crate::lotto::{equilibrium_marginal, Player};
        for (xa, xb) in [(2.0, 1.0), (0.6, 1.5)] {
            let game = g(0.5, xa, xb);
            let set = find_zeros(&game, 1e-12).unwrap();
            let m = ggl_marginals(set.zeros[0], &game).unwrap();
            let gl = GLInstance::new(xa, xb, vec![0.5, 0.5]).unwrap();
            for i in 0..2 {
                let ref_a = equilibrium_marginal(&gl, Player::A, i).unwrap();
                let ref_b = equilibrium_marginal(&gl, Player::B, i).unwrap();
                for k in 0..20 {
                    let x = ref_a.support_upper * k as f64 / 20.0;
                    assert!((m.marginals_a[i].cdf(x) - ref_a.cdf(x)).abs() < 1e-10);
                    assert!((m.marginals_b[i].cdf(x) - ref_b.cdf(x)).abs() < 1e-10);
                }
            }
        }
    }
}
