//! Structural classification of pairs: D-minimality, semi-stability,
//! log-general type, the nef/ample-near-one verdicts computed two ways, the
//! Reider adjoint search and the β-decomposition.
//!
//! The structural route reads only the catalog and the boundary components.
//! The threshold route uses the full positivity curve set, which also
//! contains lattice-enumerated (−1)- and (−2)-classes. When both routes give
//! a definite answer they must agree; disagreement means the catalog is
//! missing curves and is reported as [`ClassifyError::Inconsistency`].
//!
//! A "yes" for nef near one is further checked against classes that
//! Riemann–Roch forces to be effective (the reference class and the
//! ruling-type classes F² = 0, K·F = −2); a negative one is reported as
//! [`ClassifyError::CatalogGap`].

use num::{One, Zero};
use serde::Serialize;

use crate::lattice::{classes_with_square, validate, BoundaryComponent, CurveRecord, DivisorClass, SurfacePair, ValidationReport};
use crate::positivity::{
    big_on, nef_on, positivity_of_class, square_threshold, threshold_on, AlphaFamily, CurveSet, CurveSource,
    PositivityVerdict, Property, TestCurve, Threshold, ThresholdError,
};
use crate::rational::{int, Rational};
use crate::Tri;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ObstructionReport {
    pub interior_minus2: Vec<CurveRecord>,
    pub boundary_minus2: Vec<BoundaryComponent>,
    pub d_minimality_violations: Vec<CurveRecord>,
    pub semistability_violations: Vec<BoundaryComponent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NullCurveKind {
    /// Not a component; rational with C² = −2 and D·C = 0.
    InteriorMinus2,
    /// Component of arithmetic genus 1 meeting no other component.
    IsolatedElliptic,
    /// Rational component with E² = −2 meeting the rest of D twice.
    BoundaryRational,
}

/// A catalog curve or component with 𝓛·C = 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NullCurve {
    pub class: DivisorClass,
    pub kind: NullCurveKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteVerdict {
    pub nef_near_one: Tri,
    pub ample_near_one: Tri,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThresholdRecords {
    pub nef: Option<Threshold>,
    pub ample: Option<Threshold>,
    pub nef_error: Option<String>,
    pub ample_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationVerdict {
    pub d_minimal: bool,
    pub semistable: bool,
    pub log_general: Tri,
    pub nef_near_one: Tri,
    pub ample_near_one: Tri,
    pub ke_edge_small_angles: Tri,
    pub obstructions: ObstructionReport,
    pub thresholds: ThresholdRecords,
    pub structural: RouteVerdict,
    pub threshold_route: RouteVerdict,
    pub null_curves: Vec<NullCurve>,
    pub catalog_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("pair failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("{property} near one: structural route says {structural}, threshold route says {threshold} (catalog is missing curves)")]
    Inconsistency { property: Property, structural: Tri, threshold: Tri },
    #[error("nef near one was derived, but the effective class {class} has 𝓛_α·C < 0 just below α = 1 (catalog is missing curves)")]
    CatalogGap { class: DivisorClass },
    #[error("curve {0} has 𝓛·C = 0 but fits none of the interior (−2), isolated elliptic or boundary (−2) cases")]
    UnclassifiedNullCurve(DivisorClass),
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Property::Nef => "nef",
            Property::Ample => "ample",
        })
    }
}

/// E·(D − E).
fn meets_rest(pair: &SurfacePair, e: &DivisorClass) -> Rational {
    pair.dot(e, &pair.boundary().sub(e))
}

/// Rational curves E (catalog or components) with E² = −1 and E·D ≤ 1.
pub fn check_d_minimal(pair: &SurfacePair) -> (bool, Vec<CurveRecord>) {
    let d = pair.boundary();
    let mut violations: Vec<CurveRecord> = Vec::new();
    let candidates = pair.catalog.iter().cloned().chain(pair.components.iter().map(CurveRecord::from));
    for c in candidates {
        if c.rational
            && pair.square(&c.class) == -Rational::one()
            && pair.dot(&c.class, &d) <= Rational::one()
            && !violations.iter().any(|v| v.class == c.class)
        {
            violations.push(c);
        }
    }
    (violations.is_empty(), violations)
}

/// Rational components E with E·(D − E) < 2.
pub fn check_semistable(pair: &SurfacePair) -> (bool, Vec<BoundaryComponent>) {
    let violations: Vec<BoundaryComponent> = pair
        .components
        .iter()
        .filter(|e| e.rational && meets_rest(pair, &e.class) < int(2))
        .cloned()
        .collect();
    (violations.is_empty(), violations)
}

/// Interior and boundary (−2)-curves with 𝓛·C = 0.
pub fn minus2_obstructions(pair: &SurfacePair) -> (Vec<CurveRecord>, Vec<BoundaryComponent>) {
    let l = pair.log_canonical();
    let d = pair.boundary();
    let mut interior: Vec<CurveRecord> = Vec::new();
    for c in &pair.catalog {
        if pair.component_index(&c.class).is_none()
            && c.rational
            && pair.square(&c.class) == int(-2)
            && pair.dot(&l, &c.class).is_zero()
            && pair.dot(&d, &c.class).is_zero()
            && !interior.iter().any(|i| i.class == c.class)
        {
            interior.push(c.clone());
        }
    }
    let boundary = pair
        .components
        .iter()
        .filter(|e| e.rational && pair.square(&e.class) == int(-2) && meets_rest(pair, &e.class) == int(2))
        .cloned()
        .collect();
    (interior, boundary)
}

/// Bigness of 𝓛 when it is nef on the curve set; otherwise "unknown".
pub fn log_general(pair: &SurfacePair, set: &CurveSet) -> Tri {
    let fam = AlphaFamily::of_pair(pair);
    let l = fam.log_canonical();
    if nef_on(pair, set, &l).status != Tri::Yes {
        return Tri::Unknown;
    }
    if big_on(pair, set, &l).status == Tri::Yes {
        return Tri::Yes;
    }
    // 𝓛 = 𝓛_α + (1 − α)D; big if some 𝓛_α is.
    crate::positivity::is_big(&fam, &Rational::one(), pair)
        .map(|v| v.status)
        .unwrap_or(Tri::Unknown)
}

fn structural_route(d_minimal: bool, semistable: bool, log_general: Tri, obstructions: &ObstructionReport) -> RouteVerdict {
    let nef = if !d_minimal || !semistable { Tri::No } else { log_general };
    let ample = match nef {
        Tri::Yes if obstructions.interior_minus2.is_empty() && obstructions.boundary_minus2.is_empty() => Tri::Yes,
        Tri::Yes | Tri::No => Tri::No,
        Tri::Unknown => Tri::Unknown,
    };
    RouteVerdict { nef_near_one: nef, ample_near_one: ample }
}

fn threshold_status<T>(r: &Result<T, ThresholdError>) -> Tri {
    match r {
        Ok(_) => Tri::Yes,
        Err(ThresholdError::Undecided) => Tri::Unknown,
        Err(ThresholdError::NotNef(_)) | Err(ThresholdError::Empty { .. }) => Tri::No,
    }
}

fn combine(property: Property, structural: Tri, threshold: Tri) -> Result<Tri, ClassifyError> {
    match (structural, threshold) {
        (Tri::Unknown, t) => Ok(t),
        (s, Tri::Unknown) => Ok(s),
        (s, t) if s == t => Ok(t),
        (s, t) => Err(ClassifyError::Inconsistency { property, structural: s, threshold: t }),
    }
}

/// Tags every catalog curve and component with 𝓛·C = 0.
pub fn tag_null_curves(pair: &SurfacePair) -> Result<Vec<NullCurve>, ClassifyError> {
    let l = pair.log_canonical();
    let d = pair.boundary();
    let mut out: Vec<NullCurve> = Vec::new();
    let records = pair.catalog.iter().cloned().chain(pair.components.iter().map(CurveRecord::from));
    for c in records {
        if !pair.dot(&l, &c.class).is_zero() || out.iter().any(|n| n.class == c.class) {
            continue;
        }
        let square = pair.square(&c.class);
        let kind = match pair.component_index(&c.class) {
            None if c.rational && square == int(-2) && pair.dot(&d, &c.class).is_zero() => NullCurveKind::InteriorMinus2,
            Some(_) if pair.genus(&c.class) == Rational::one() && meets_rest(pair, &c.class).is_zero() => {
                NullCurveKind::IsolatedElliptic
            }
            Some(_) if c.rational && square == int(-2) && meets_rest(pair, &c.class) == int(2) => {
                NullCurveKind::BoundaryRational
            }
            _ => return Err(ClassifyError::UnclassifiedNullCurve(c.class)),
        };
        out.push(NullCurve { class: c.class, kind });
    }
    Ok(out)
}

/// Riemann–Roch: h⁰(C) + h⁰(K − C) ≥ χ(𝒪) + (C² − K·C)/2, and K − C is not
/// effective when h·(K − C) < 0. χ(𝒪) = (e + σ)/4 by Noether.
pub fn forced_effective(pair: &SurfacePair, h: &DivisorClass, c: &DivisorClass) -> bool {
    let chi_o = Rational::new((pair.chi + pair.sigma).into(), 4.into());
    let rr = chi_o + (pair.square(c) - pair.dot(&pair.canonical, c)) / int(2);
    rr >= Rational::one() && pair.dot(h, &pair.canonical.sub(c)) < Rational::zero()
}

/// An effective class (by [`forced_effective`]) on which 𝓛_α is negative for
/// α just below 1: either 𝓛·C < 0, or 𝓛·C = 0 and D·C > 0.
fn effective_negative_class(pair: &SurfacePair) -> Option<DivisorClass> {
    let h = pair.reference_class().ok()?;
    let mut candidates = vec![h.clone()];
    for c in classes_with_square(pair, &h, 0, pair.height_bound).unwrap_or_default() {
        let class = DivisorClass::from_ints(&c.coeffs);
        if c.degree > 0 && pair.dot(&pair.canonical, &class) == int(-2) {
            candidates.push(class);
        }
    }
    let (l, d) = (pair.log_canonical(), pair.boundary());
    candidates.into_iter().find(|c| {
        let at_one = pair.dot(&l, c);
        forced_effective(pair, &h, c) && (at_one < Rational::zero() || (at_one.is_zero() && pair.dot(&d, c) > Rational::zero()))
    })
}

pub fn classify(pair: &SurfacePair) -> Result<ClassificationVerdict, ClassifyError> {
    let report = validate(pair);
    if !report.is_valid() {
        return Err(ClassifyError::Invalid(report));
    }
    let set = CurveSet::for_pair(pair);
    let (d_minimal, d_violations) = check_d_minimal(pair);
    let (semistable, s_violations) = check_semistable(pair);
    let (interior, boundary) = minus2_obstructions(pair);
    let obstructions = ObstructionReport {
        interior_minus2: interior,
        boundary_minus2: boundary,
        d_minimality_violations: d_violations,
        semistability_violations: s_violations,
    };
    let log_general = log_general(pair, &set);
    let structural = structural_route(d_minimal, semistable, log_general, &obstructions);

    let fam = AlphaFamily::of_pair(pair);
    let nef_t = threshold_on(&fam, pair, &set, Property::Nef);
    let ample_t = threshold_on(&fam, pair, &set, Property::Ample);
    let nef_route = match threshold_status(&nef_t) {
        // nef on (ᾱ, 1) and 𝓛_α² > 0 just below 1
        Tri::Yes if square_threshold(&fam, pair).is_none() => Tri::No,
        t => t,
    };
    let threshold_route = RouteVerdict { nef_near_one: nef_route, ample_near_one: threshold_status(&ample_t) };

    let nef_near_one = combine(Property::Nef, structural.nef_near_one, threshold_route.nef_near_one)?;
    let ample_near_one = combine(Property::Ample, structural.ample_near_one, threshold_route.ample_near_one)?;
    if nef_near_one == Tri::Yes {
        if let Some(class) = effective_negative_class(pair) {
            return Err(ClassifyError::CatalogGap { class });
        }
    }
    let null_curves = if nef_near_one == Tri::Yes { tag_null_curves(pair)? } else { Vec::new() };

    let (nef, nef_error) = split(nef_t);
    let (ample, ample_error) = split(ample_t);
    Ok(ClassificationVerdict {
        d_minimal,
        semistable,
        log_general,
        nef_near_one,
        ample_near_one,
        ke_edge_small_angles: ample_near_one,
        obstructions,
        thresholds: ThresholdRecords { nef, ample, nef_error, ample_error },
        structural,
        threshold_route,
        null_curves,
        catalog_hash: set.hash,
    })
}

fn split(r: Result<Threshold, ThresholdError>) -> (Option<Threshold>, Option<String>) {
    match r {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

pub const DEFAULT_N_MAX: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReiderCandidate {
    pub curve: TestCurve,
    #[serde(with = "crate::rational::serde_str")]
    pub adjoint_dot: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub self_int: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedCandidate {
    pub candidate: ReiderCandidate,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReiderResult {
    pub n: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub alpha_n: Rational,
    /// 𝓛̄_n = K + (n − 2)𝓛.
    pub adjoint_class: DivisorClass,
    #[serde(with = "crate::rational::serde_str")]
    pub adjoint_square: Rational,
    pub obstruction_curves: Vec<ReiderCandidate>,
    pub rejected: Vec<RejectedCandidate>,
    pub base_point_free: Tri,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReiderError {
    #[error("pair failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("Reider search needs a D-minimal, semi-stable pair of log-general type ({0})")]
    Precondition(String),
    #[error("no n ≤ {n_max} with 𝓛̄_n nef and 𝓛̄_n² > 4")]
    NoAdmissibleN { n_max: u32 },
}

/// K + (n − 2)𝓛.
pub fn adjoint_class(pair: &SurfacePair, n: u32) -> DivisorClass {
    pair.canonical.add_scaled(&int(i64::from(n) - 2), &pair.log_canonical())
}

/// Reason to discard a Reider candidate on numerical grounds: C² + K·C must
/// be even for an irreducible curve (its arithmetic genus is an integer).
/// In particular every class with K·C = 0, C² = −1 is discarded.
pub fn genus_integrality_rejects(pair: &SurfacePair, c: &DivisorClass) -> Option<String> {
    let twice = pair.square(c) + pair.dot(&pair.canonical, c);
    if twice.is_integer() && (twice.to_integer() % 2u8).is_zero() {
        None
    } else {
        Some(format!("genus integrality: p_a = {} is not an integer", pair.genus(c)))
    }
}

/// Least n ≤ n_max with 𝓛̄_n nef on the curve set and 𝓛̄_n² > 4, then the
/// classes C with (𝓛̄_n·C, C²) ∈ {(0, −1), (1, 0)}.
pub fn reider_search(pair: &SurfacePair, n_max: u32) -> Result<ReiderResult, ReiderError> {
    let report = validate(pair);
    if !report.is_valid() {
        return Err(ReiderError::Invalid(report));
    }
    let set = CurveSet::for_pair(pair);
    let (d_minimal, _) = check_d_minimal(pair);
    let (semistable, _) = check_semistable(pair);
    let lg = log_general(pair, &set);
    if !d_minimal || !semistable || lg != Tri::Yes {
        return Err(ReiderError::Precondition(format!(
            "d_minimal = {d_minimal}, semistable = {semistable}, log_general = {lg}"
        )));
    }
    let (n, adjoint) = (3..=n_max)
        .map(|n| (n, adjoint_class(pair, n)))
        .find(|(_, a)| nef_on(pair, &set, a).status != Tri::No && pair.square(a) > int(4))
        .ok_or(ReiderError::NoAdmissibleN { n_max })?;

    let mut candidates: Vec<TestCurve> = set.curves.clone();
    if let Ok(h) = pair.reference_class() {
        for self_int in [-1, 0] {
            for c in classes_with_square(pair, &h, self_int, pair.height_bound).unwrap_or_default() {
                let class = DivisorClass::from_ints(&c.coeffs);
                if c.degree > 0 && !candidates.iter().any(|t| t.class == class) {
                    let k_dot = pair.dot(&pair.canonical, &class);
                    let k_dot = if k_dot.is_integer() { k_dot.to_integer().try_into().unwrap_or(0) } else { 0 };
                    candidates.push(TestCurve { class, source: CurveSource::Enumerated { self_int, k_dot } });
                }
            }
        }
    }

    let mut obstruction_curves = Vec::new();
    let mut rejected = Vec::new();
    for curve in candidates {
        let adjoint_dot = pair.dot(&adjoint, &curve.class);
        let self_int = pair.square(&curve.class);
        let hit = (adjoint_dot.is_zero() && self_int == -Rational::one())
            || (adjoint_dot == Rational::one() && self_int.is_zero());
        if !hit {
            continue;
        }
        let candidate = ReiderCandidate { curve, adjoint_dot, self_int };
        match genus_integrality_rejects(pair, &candidate.curve.class) {
            Some(reason) => rejected.push(RejectedCandidate { candidate, reason }),
            None => obstruction_curves.push(candidate),
        }
    }
    let base_point_free = if obstruction_curves.is_empty() && set.decisive() { Tri::Yes } else { Tri::Unknown };
    Ok(ReiderResult {
        n,
        alpha_n: Rational::new(i64::from(n - 2).into(), i64::from(n).into()),
        adjoint_square: pair.square(&adjoint),
        adjoint_class: adjoint,
        obstruction_curves,
        rejected,
        base_point_free,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BetaError {
    #[error("ᾱ = {0} must be < 1")]
    AlphaBarTooLarge(Rational),
    #[error("α = {alpha} is outside [{alpha_bar}, 1)")]
    AlphaOutOfRange { alpha: Rational, alpha_bar: Rational },
}

/// (β₁, β₂) with 𝓛_α = β₁𝓛_ᾱ + β₂𝓛, β₁ + β₂ = 1, both ≥ 0.
pub fn beta_decompose(alpha: &Rational, alpha_bar: &Rational) -> Result<(Rational, Rational), BetaError> {
    if *alpha_bar >= Rational::one() {
        return Err(BetaError::AlphaBarTooLarge(alpha_bar.clone()));
    }
    if alpha < alpha_bar || *alpha >= Rational::one() {
        return Err(BetaError::AlphaOutOfRange { alpha: alpha.clone(), alpha_bar: alpha_bar.clone() });
    }
    let span = Rational::one() - alpha_bar;
    Ok(((Rational::one() - alpha) / &span, (alpha - alpha_bar) / span))
}

/// Positivity of −𝓛_α (log Fano type at cone angle 2π(1 − α)).
pub fn check_fano_edge(pair: &SurfacePair, alpha: &Rational) -> PositivityVerdict {
    positivity_of_class(pair, &AlphaFamily::of_pair(pair).negated().at(alpha))
}
