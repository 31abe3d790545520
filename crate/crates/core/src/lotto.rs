//! The symmetric-valuation General Lotto game `GL(X_A, X_B, v)`.
//!
//! Both players value battlefield `b` at `v_b` and spend their budgets only
//! in expectation. The game has a unique equilibrium payoff: a player with
//! budget `x` facing budget `y` collects the share `L(x, y)` of the total
//! value `φ = Σ v_b`, where
//!
//! ```text
//! L(x, y) = x / (2y)        if x <= y
//!         = 1 - y / (2x)    if x >  y
//! ```
//!
//! Equilibrium marginals are uniform ramps on `[0, 2·X_i·v_b)` for the
//! stronger player; the weaker player mixes the same ramp with an atom at
//! zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LottoError, Result};

/// One of the two players. `B` is the player allowed to pre-commit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

/// Equilibrium payoff share of a player with budget `x_own` against `x_opp`.
///
/// `payoff_fraction(x, y) + payoff_fraction(y, x) == 1` for all positive
/// budgets.
pub fn payoff_fraction(x_own: f64, x_opp: f64) -> Result<f64> {
    check_budget("x_own", x_own)?;
    check_budget("x_opp", x_opp)?;
    Ok(lotto_share(x_own, x_opp))
}

/// `L(x, y)` for strictly positive arguments, unchecked.
#[inline]
pub(crate) fn lotto_share(x_own: f64, x_opp: f64) -> f64 {
    if x_own <= x_opp {
        x_own / (2.0 * x_opp)
    } else {
        1.0 - x_opp / (2.0 * x_own)
    }
}

/// Player A's share of a residual game in which either side may have run out
/// of resources. A side with nothing left loses everything, and a 0–0 tie
/// goes to A. Player B's share is always `1 - residual_share_a(..)`.
#[inline]
pub fn residual_share_a(remaining_a: f64, remaining_b: f64) -> f64 {
    let a = remaining_a.max(0.0);
    let b = remaining_b.max(0.0);
    if b == 0.0 {
        1.0
    } else if a == 0.0 {
        0.0
    } else {
        lotto_share(a, b)
    }
}

fn check_budget(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(LottoError::NonPositiveBudget { name, value })
    }
}

/// A symmetric-valuation game: two budgets and one valuation per battlefield.
#[derive(Debug, Clone, PartialEq)]
pub struct GLInstance {
    budget_a: f64,
    budget_b: f64,
    valuations: Vec<f64>,
    total_value: f64,
}

impl GLInstance {
    pub fn new(budget_a: f64, budget_b: f64, valuations: Vec<f64>) -> Result<Self> {
        check_budget("X_A", budget_a)?;
        check_budget("X_B", budget_b)?;
        if valuations.is_empty() {
            return Err(LottoError::InvalidValuation(
                "at least one battlefield is required".into(),
            ));
        }
        if let Some((i, v)) = valuations
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(LottoError::InvalidValuation(format!(
                "battlefield {i} has value {v}; values must be finite and non-negative"
            )));
        }
        let total_value: f64 = valuations.iter().sum();
        if total_value <= 0.0 {
            return Err(LottoError::InvalidValuation(
                "total value must be positive".into(),
            ));
        }
        Ok(GLInstance {
            budget_a,
            budget_b,
            valuations,
            total_value,
        })
    }

    pub fn budget_a(&self) -> f64 {
        self.budget_a
    }

    pub fn budget_b(&self) -> f64 {
        self.budget_b
    }

    pub fn budget(&self, player: Player) -> f64 {
        match player {
            Player::A => self.budget_a,
            Player::B => self.budget_b,
        }
    }

    pub fn valuations(&self) -> &[f64] {
        &self.valuations
    }

    pub fn value(&self, battlefield: usize) -> Result<f64> {
        self.valuations
            .get(battlefield)
            .copied()
            .ok_or(LottoError::BattlefieldOutOfRange {
                index: battlefield,
                count: self.valuations.len(),
            })
    }

    pub fn battlefields(&self) -> usize {
        self.valuations.len()
    }

    /// Total value `φ`.
    pub fn phi(&self) -> f64 {
        self.total_value
    }

    /// Same game with different budgets.
    pub fn with_budgets(&self, budget_a: f64, budget_b: f64) -> Result<Self> {
        GLInstance::new(budget_a, budget_b, self.valuations.clone())
    }
}

/// Expected payoffs of both players.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffPair {
    pub payoff_a: f64,
    pub payoff_b: f64,
}

impl PayoffPair {
    pub fn of(&self, player: Player) -> f64 {
        match player {
            Player::A => self.payoff_a,
            Player::B => self.payoff_b,
        }
    }

    pub fn total(&self) -> f64 {
        self.payoff_a + self.payoff_b
    }
}

/// Equilibrium payoffs `π_i = φ·L(X_i, X_{-i})` of the nominal game.
pub fn nominal_payoffs(game: &GLInstance) -> Result<PayoffPair> {
    let phi = game.phi();
    let share_a = payoff_fraction(game.budget_a, game.budget_b)?;
    Ok(PayoffPair {
        payoff_a: phi * share_a,
        payoff_b: phi * (1.0 - share_a),
    })
}

/// Marginal allocation distribution on one battlefield: an atom at zero
/// followed by a linear ramp that reaches 1 at `support_upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalCDF {
    pub atom_at_zero: f64,
    pub ramp_slope: f64,
    pub support_upper: f64,
}

impl MarginalCDF {
    pub fn new(atom_at_zero: f64, ramp_slope: f64, support_upper: f64) -> Result<Self> {
        let cdf = MarginalCDF {
            atom_at_zero,
            ramp_slope,
            support_upper,
        };
        cdf.validate()?;
        Ok(cdf)
    }

    /// Checks the atom lies in `[0, 1]` and the ramp ends at exactly 1.
    pub fn validate(&self) -> Result<()> {
        let ok = self.atom_at_zero.is_finite()
            && self.ramp_slope.is_finite()
            && self.support_upper.is_finite()
            && (-1e-12..=1.0 + 1e-12).contains(&self.atom_at_zero)
            && self.ramp_slope >= 0.0
            && self.support_upper >= 0.0
            && (self.end_value() - 1.0).abs() <= 1e-10;
        if ok {
            Ok(())
        } else {
            Err(LottoError::Precondition(format!(
                "malformed marginal: atom {}, slope {}, upper {}",
                self.atom_at_zero, self.ramp_slope, self.support_upper
            )))
        }
    }

    /// CDF value at the right end of the support.
    pub fn end_value(&self) -> f64 {
        self.atom_at_zero + self.ramp_slope * self.support_upper
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else if x >= self.support_upper {
            1.0
        } else {
            self.atom_at_zero + self.ramp_slope * x
        }
    }

    pub fn mean(&self) -> f64 {
        0.5 * self.ramp_slope * self.support_upper * self.support_upper
    }

    /// Inverse CDF for `u ∈ [0, 1)`; never returns `support_upper` itself.
    pub fn quantile(&self, u: f64) -> f64 {
        if u < self.atom_at_zero || self.ramp_slope == 0.0 {
            return 0.0;
        }
        let x = (u - self.atom_at_zero) / self.ramp_slope;
        if x >= self.support_upper {
            self.support_upper.next_down().max(0.0)
        } else {
            x.max(0.0)
        }
    }
}

/// Equilibrium marginal of `player` on `battlefield`.
///
/// Valuations are normalized to total value 1 first, so the per-battlefield
/// means sum to the player's budget for any `φ`.
pub fn equilibrium_marginal(
    game: &GLInstance,
    player: Player,
    battlefield: usize,
) -> Result<MarginalCDF> {
    let v = game.value(battlefield)? / game.phi();
    if v <= 0.0 {
        return Err(LottoError::DegenerateBattlefield { index: battlefield });
    }
    let own = game.budget(player);
    let opp = game.budget(player.opponent());
    let strong = own.max(opp);
    let support_upper = 2.0 * strong * v;
    if own >= opp {
        MarginalCDF::new(0.0, 1.0 / support_upper, support_upper)
    } else {
        MarginalCDF::new(1.0 - own / opp, own / (2.0 * opp * opp * v), support_upper)
    }
}

/// Marginals for every battlefield; zero-value battlefields get `None`.
pub fn equilibrium_marginals(
    game: &GLInstance,
    player: Player,
) -> Result<Vec<Option<MarginalCDF>>> {
    (0..game.battlefields())
        .map(|b| {
            if game.valuations[b] > 0.0 {
                equilibrium_marginal(game, player, b).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect()
}

/// One allocation drawn from independent per-battlefield equilibrium
/// marginals. Zero-value battlefields receive nothing.
pub fn sample_allocation(game: &GLInstance, player: Player, seed: u64) -> Result<Vec<f64>> {
    Ok(sample_allocations(game, player, seed, 1)?
        .pop()
        .unwrap_or_default())
}

/// `count` independent allocations from one seeded stream.
pub fn sample_allocations(
    game: &GLInstance,
    player: Player,
    seed: u64,
    count: usize,
) -> Result<Vec<Vec<f64>>> {
    let marginals = equilibrium_marginals(game, player)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            marginals
                .iter()
                .map(|m| match m {
                    Some(m) => m.quantile(rng.random::<f64>()),
                    None => 0.0,
                })
                .collect()
        })
        .collect())
}
