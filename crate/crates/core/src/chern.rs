//! Chern numbers of Ω¹(log D), the logarithmic BMY inequality and the
//! edge-cone invariants χ_α, σ_α.

use num::{One, Zero};
use serde::Serialize;

use crate::lattice::SurfacePair;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogChernNumbers {
    #[serde(with = "crate::rational::serde_str")]
    pub c1_sq: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub c2: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub chi_d: Rational,
}

/// c₁² = (K + D)², χ(D) = −K·D − D², c₂ = χ − χ(D).
pub fn log_chern(pair: &SurfacePair) -> LogChernNumbers {
    let d = pair.boundary();
    let c1_sq = pair.square(&pair.log_canonical());
    let chi_d = -pair.dot(&pair.canonical, &d) - pair.square(&d);
    let c2 = int(pair.chi) - &chi_d;
    LogChernNumbers { c1_sq, c2, chi_d }
}

/// χ(D) from the components: Σ(2 − 2p_a(Dᵢ)) − 2Σ_{i<j} Dᵢ·Dⱼ.
///
/// Agrees with [`log_chern`]'s χ(D) for any component list, by adjunction.
pub fn chi_d_from_components(pair: &SurfacePair) -> Rational {
    let mut total = Rational::zero();
    for (i, a) in pair.components.iter().enumerate() {
        total += int(2) - int(2) * pair.genus(&a.class);
        for b in &pair.components[i + 1..] {
            total -= int(2) * pair.dot(&a.class, &b.class);
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BmyCheck {
    pub holds: bool,
    #[serde(with = "crate::rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub rhs: Rational,
    pub equality: bool,
}

/// c₁²(Ω¹(log D)) ≤ 3c₂(Ω¹(log D)).
pub fn bmy_check(pair: &SurfacePair) -> BmyCheck {
    let n = log_chern(pair);
    let rhs = int(3) * &n.c2;
    let holds = n.c1_sq <= rhs;
    debug_assert!(
        !noether_holds(pair) || holds == bmy_limit_check(pair).holds,
        "the two forms of the BMY inequality must agree"
    );
    BmyCheck { holds, equality: n.c1_sq == rhs, lhs: n.c1_sq, rhs }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BmyLimitCheck {
    pub holds: bool,
    /// χ − χ(D).
    #[serde(with = "crate::rational::serde_str")]
    pub lhs: Rational,
    /// 3(σ − D²/3).
    #[serde(with = "crate::rational::serde_str")]
    pub rhs: Rational,
}

/// K² = 2χ + 3σ; the two BMY forms coincide exactly when this holds.
pub fn noether_holds(pair: &SurfacePair) -> bool {
    pair.square(&pair.canonical) == int(2 * pair.chi + 3 * pair.sigma)
}

/// The α → 1 form χ − χ(D) ≥ 3(σ − D²/3).
///
/// With K² = 2χ + 3σ and χ(D) = −K·D − D² this is c₁² ≤ 3c₂ rearranged:
/// 3c₂ − c₁² = lhs − rhs.
pub fn bmy_limit_check(pair: &SurfacePair) -> BmyLimitCheck {
    let d = pair.boundary();
    let chi_d = -pair.dot(&pair.canonical, &d) - pair.square(&d);
    let lhs = int(pair.chi) - chi_d;
    let rhs = int(3) * (int(pair.sigma) - pair.square(&d) / int(3));
    BmyLimitCheck { holds: lhs >= rhs, lhs, rhs }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeInvariants {
    #[serde(with = "crate::rational::serde_str")]
    pub alpha: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub chi_alpha: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub sigma_alpha: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub l_alpha_sq: Rational,
    /// The formulas are only established for smooth (single-component) D.
    pub conjectural: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChernError {
    #[error("α = {0} is outside [0, 1]")]
    AlphaOutOfRange(Rational),
    #[error("edge identity fails: 𝓛_α² = {l_sq} but 2χ_α + 3σ_α = {rhs} (K² ≠ 2χ + 3σ?)")]
    IdentityViolated { l_sq: Rational, rhs: Rational },
}

/// χ_α = χ − αχ(D), σ_α = σ − α(2 − α)D²/3.
///
/// α = 0 is accepted as the formal endpoint. The identity
/// 𝓛_α² = 2χ_α + 3σ_α is checked on construction; it holds exactly whenever
/// K² = 2χ + 3σ.
pub fn edge_invariants(pair: &SurfacePair, alpha: &Rational) -> Result<EdgeInvariants, ChernError> {
    if *alpha < Rational::zero() || *alpha > Rational::one() {
        return Err(ChernError::AlphaOutOfRange(alpha.clone()));
    }
    let d = pair.boundary();
    let d_sq = pair.square(&d);
    let chi_d = -pair.dot(&pair.canonical, &d) - &d_sq;
    let chi_alpha = int(pair.chi) - alpha * chi_d;
    let sigma_alpha = int(pair.sigma) - alpha * (int(2) - alpha) * d_sq / int(3);
    let l_alpha_sq = pair.square(&pair.canonical.add_scaled(alpha, &d));
    let rhs = int(2) * &chi_alpha + int(3) * &sigma_alpha;
    if rhs != l_alpha_sq {
        return Err(ChernError::IdentityViolated { l_sq: l_alpha_sq, rhs });
    }
    Ok(EdgeInvariants {
        alpha: alpha.clone(),
        chi_alpha,
        sigma_alpha,
        l_alpha_sq,
        conjectural: pair.components.len() > 1,
    })
}
