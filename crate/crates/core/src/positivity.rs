//! Catalog-relative positivity of the family 𝓛_α = K + αD.
//!
//! A verdict quantifies over a finite [`CurveSet`]: the catalog curves, the
//! boundary components, and the lattice classes of type (C², K·C) = (−1, −1)
//! or (−2, 0) of positive degree against the reference class. "Yes" therefore
//! means "no curve in this set obstructs", and every verdict records the hash
//! of the set it was computed on.

use num::{One, Signed, Zero};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::lattice::{classes_with_square, DivisorClass, Lattice, LatticeError, SurfacePair};
use crate::rational::{bisect_root, exact_sqrt, int, Rational};
use crate::Tri;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PositivityError {
    #[error("α = {0} is outside (0, 1]")]
    AlphaOutOfRange(Rational),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The affine family α ↦ base + α·boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaFamily {
    pub base: DivisorClass,
    pub boundary: DivisorClass,
}

impl AlphaFamily {
    pub fn new(base: DivisorClass, boundary: DivisorClass) -> Self {
        AlphaFamily { base, boundary }
    }

    /// K + αD for the pair.
    pub fn of_pair(pair: &SurfacePair) -> Self {
        AlphaFamily { base: pair.canonical.clone(), boundary: pair.boundary() }
    }

    pub fn at(&self, alpha: &Rational) -> DivisorClass {
        self.base.add_scaled(alpha, &self.boundary)
    }

    /// The member at α = 1.
    pub fn log_canonical(&self) -> DivisorClass {
        self.base.add(&self.boundary)
    }

    /// α ↦ −(base + α·boundary).
    pub fn negated(&self) -> Self {
        AlphaFamily { base: self.base.neg(), boundary: self.boundary.neg() }
    }

    /// Coefficients (a, b, c) of α ↦ (base + α·boundary)² = aα² + bα + c.
    fn square_coefficients(&self, pair: &SurfacePair) -> (Rational, Rational, Rational) {
        (
            pair.square(&self.boundary),
            int(2) * pair.dot(&self.base, &self.boundary),
            pair.square(&self.base),
        )
    }
}

/// α ↦ at_one + (α − 1)·slope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineInAlpha {
    #[serde(with = "crate::rational::serde_str")]
    pub at_one: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub slope: Rational,
}

impl AffineInAlpha {
    pub fn value(&self, alpha: &Rational) -> Rational {
        &self.at_one + (alpha - Rational::one()) * &self.slope
    }
}

/// 𝓛_α·C as an affine function of α: 𝓛·C + (α − 1)·D·C.
pub fn intersect_alpha(fam: &AlphaFamily, c: &DivisorClass, lattice: &Lattice) -> Result<AffineInAlpha, LatticeError> {
    let l = fam.log_canonical();
    Ok(AffineInAlpha {
        at_one: crate::lattice::pair(&l, c, lattice)?,
        slope: crate::lattice::pair(&fam.boundary, c, lattice)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveSource {
    Catalog { index: usize },
    Component { index: usize },
    Enumerated { self_int: i64, k_dot: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestCurve {
    pub class: DivisorClass,
    pub source: CurveSource,
}

impl TestCurve {
    pub fn label(&self) -> String {
        match &self.source {
            CurveSource::Catalog { index } => format!("curve[{index}] {}", self.class),
            CurveSource::Component { index } => format!("component[{index}] {}", self.class),
            CurveSource::Enumerated { self_int, k_dot } => {
                format!("lattice class {} (C²={self_int}, K·C={k_dot})", self.class)
            }
        }
    }
}

/// Finite set of curve classes against which positivity is tested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSet {
    pub curves: Vec<TestCurve>,
    /// Whether the lattice enumeration ran (it needs a reference class).
    pub enumerated: bool,
    pub catalog_empty: bool,
    pub hash: String,
}

/// Enumerated candidate types: (−1)-classes with K·C = −1 and (−2)-classes
/// with K·C = 0.
pub const CANDIDATE_TYPES: [(i64, i64); 2] = [(-1, -1), (-2, 0)];

impl CurveSet {
    pub fn for_pair(pair: &SurfacePair) -> Self {
        let mut curves: Vec<TestCurve> = Vec::new();
        let push = |curves: &mut Vec<TestCurve>, class: &DivisorClass, source: CurveSource| {
            if !curves.iter().any(|c| c.class == *class) {
                curves.push(TestCurve { class: class.clone(), source });
            }
        };
        for (index, c) in pair.catalog.iter().enumerate() {
            push(&mut curves, &c.class, CurveSource::Catalog { index });
        }
        for (index, c) in pair.components.iter().enumerate() {
            push(&mut curves, &c.class, CurveSource::Component { index });
        }
        let mut enumerated = false;
        if let (Ok(h), Some(k)) = (pair.reference_class(), pair.canonical.to_ints()) {
            enumerated = true;
            for (self_int, k_dot) in CANDIDATE_TYPES {
                let Ok(found) = classes_with_square(pair, &h, self_int, pair.height_bound) else {
                    enumerated = false;
                    continue;
                };
                for c in found.into_iter().filter(|c| c.degree > 0) {
                    let class = DivisorClass::from_ints(&c.coeffs);
                    if pair.dot(&DivisorClass::from_ints(&k), &class) == int(k_dot) {
                        push(&mut curves, &class, CurveSource::Enumerated { self_int, k_dot });
                    }
                }
            }
        }
        let hash = hash_curves(&curves);
        CurveSet { curves, enumerated, catalog_empty: pair.catalog.is_empty(), hash }
    }

    /// Whether a verdict of "yes" over this set is meaningful.
    pub fn decisive(&self) -> bool {
        !self.catalog_empty && self.enumerated
    }
}

fn hash_curves(curves: &[TestCurve]) -> String {
    let mut hasher = Sha256::new();
    for c in curves {
        hasher.update(c.class.to_string().as_bytes());
        hasher.update(b";");
    }
    hex::encode(&hasher.finalize()[..8])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub curve: TestCurve,
    /// The violating intersection number.
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NefVerdict {
    pub status: Tri,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BigCertificate {
    /// Nef with positive self-intersection.
    NefPositiveSquare {
        #[serde(with = "crate::rational::serde_str")]
        square: Rational,
    },
    /// 𝓛_α = 𝓛_α′ + (α − α′)D with 𝓛_α′ big and nef and D effective.
    Propagated {
        #[serde(with = "crate::rational::serde_str")]
        from_alpha: Rational,
        #[serde(with = "crate::rational::serde_str")]
        square: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BigVerdict {
    pub status: Tri,
    pub certificate: Option<BigCertificate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AmpleWitness {
    Curve(Witness),
    Square {
        #[serde(with = "crate::rational::serde_str")]
        square: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmpleVerdict {
    pub status: Tri,
    pub witness: Option<AmpleWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityVerdict {
    pub nef: NefVerdict,
    pub big: BigVerdict,
    pub ample: AmpleVerdict,
    pub catalog_hash: String,
}

fn check_alpha(alpha: &Rational) -> Result<(), PositivityError> {
    if alpha.is_positive() && *alpha <= Rational::one() {
        Ok(())
    } else {
        Err(PositivityError::AlphaOutOfRange(alpha.clone()))
    }
}

/// Nefness of an arbitrary class over a curve set. The witness is the first
/// curve (in set order) with negative intersection.
pub fn nef_on(pair: &SurfacePair, set: &CurveSet, class: &DivisorClass) -> NefVerdict {
    for curve in &set.curves {
        let value = pair.dot(class, &curve.class);
        if value.is_negative() {
            return NefVerdict { status: Tri::No, witness: Some(Witness { curve: curve.clone(), value }) };
        }
    }
    NefVerdict { status: if set.decisive() { Tri::Yes } else { Tri::Unknown }, witness: None }
}

/// Nakai–Moishezon over a curve set: positive square and strictly positive on
/// every curve.
pub fn ample_on(pair: &SurfacePair, set: &CurveSet, class: &DivisorClass) -> AmpleVerdict {
    let square = pair.square(class);
    if !square.is_positive() {
        return AmpleVerdict { status: Tri::No, witness: Some(AmpleWitness::Square { square }) };
    }
    for curve in &set.curves {
        let value = pair.dot(class, &curve.class);
        if !value.is_positive() {
            return AmpleVerdict {
                status: Tri::No,
                witness: Some(AmpleWitness::Curve(Witness { curve: curve.clone(), value })),
            };
        }
    }
    AmpleVerdict { status: if set.decisive() { Tri::Yes } else { Tri::Unknown }, witness: None }
}

/// Big-and-nef test for a fixed class; bigness is only certified for nef
/// classes, so anything else is "unknown".
pub fn big_on(pair: &SurfacePair, set: &CurveSet, class: &DivisorClass) -> BigVerdict {
    let square = pair.square(class);
    if nef_on(pair, set, class).status == Tri::Yes && square.is_positive() {
        BigVerdict { status: Tri::Yes, certificate: Some(BigCertificate::NefPositiveSquare { square }) }
    } else {
        BigVerdict { status: Tri::Unknown, certificate: None }
    }
}

/// All three verdicts for a single class.
pub fn positivity_of_class(pair: &SurfacePair, class: &DivisorClass) -> PositivityVerdict {
    let set = CurveSet::for_pair(pair);
    PositivityVerdict {
        nef: nef_on(pair, &set, class),
        big: big_on(pair, &set, class),
        ample: ample_on(pair, &set, class),
        catalog_hash: set.hash,
    }
}

pub fn is_nef(fam: &AlphaFamily, alpha: &Rational, pair: &SurfacePair) -> Result<NefVerdict, PositivityError> {
    check_alpha(alpha)?;
    Ok(nef_on(pair, &CurveSet::for_pair(pair), &fam.at(alpha)))
}

pub fn is_ample(fam: &AlphaFamily, alpha: &Rational, pair: &SurfacePair) -> Result<AmpleVerdict, PositivityError> {
    check_alpha(alpha)?;
    Ok(ample_on(pair, &CurveSet::for_pair(pair), &fam.at(alpha)))
}

/// Bigness of 𝓛_α: certified when 𝓛_α is nef with positive square, or when
/// some α′ ≤ α has that certificate (adding the effective (α − α′)D keeps it
/// big). Otherwise "unknown".
pub fn is_big(fam: &AlphaFamily, alpha: &Rational, pair: &SurfacePair) -> Result<BigVerdict, PositivityError> {
    check_alpha(alpha)?;
    let set = CurveSet::for_pair(pair);
    let direct = big_on(pair, &set, &fam.at(alpha));
    if direct.status == Tri::Yes {
        return Ok(direct);
    }
    if let Some(from_alpha) = big_nef_point_below(fam, alpha, pair, &set) {
        let square = pair.square(&fam.at(&from_alpha));
        return Ok(BigVerdict {
            status: Tri::Yes,
            certificate: Some(BigCertificate::Propagated { from_alpha, square }),
        });
    }
    Ok(direct)
}

/// Closed interval of α (unbounded ends as `None`) on which every curve of the
/// set meets the family nonnegatively; `None` if that set is empty.
fn nef_interval(
    fam: &AlphaFamily,
    pair: &SurfacePair,
    set: &CurveSet,
) -> Option<(Option<Rational>, Option<Rational>)> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for curve in &set.curves {
        let f = AffineInAlpha {
            at_one: pair.dot(&fam.log_canonical(), &curve.class),
            slope: pair.dot(&fam.boundary, &curve.class),
        };
        if f.slope.is_zero() {
            if f.at_one.is_negative() {
                return None;
            }
            continue;
        }
        // at_one + (α − 1)·slope = 0  ⇔  α = 1 − at_one/slope
        let root = Rational::one() - &f.at_one / &f.slope;
        if f.slope.is_positive() {
            if lo.as_ref().is_none_or(|l| root > *l) {
                lo = Some(root);
            }
        } else if hi.as_ref().is_none_or(|h| root < *h) {
            hi = Some(root);
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    Some((lo, hi))
}

fn eval_quadratic(coeffs: &(Rational, Rational, Rational), x: &Rational) -> Rational {
    &coeffs.0 * x * x + &coeffs.1 * x + &coeffs.2
}

/// Some α′ ∈ (0, α] with 𝓛_α′ nef on the set and 𝓛_α′² > 0.
fn big_nef_point_below(fam: &AlphaFamily, alpha: &Rational, pair: &SurfacePair, set: &CurveSet) -> Option<Rational> {
    if !set.decisive() {
        return None;
    }
    let (lo, hi) = nef_interval(fam, pair, set)?;
    let a = lo.filter(|l| l.is_positive()).unwrap_or_else(Rational::zero);
    let b = match hi {
        Some(h) if h < *alpha => h,
        _ => alpha.clone(),
    };
    if a > b || !b.is_positive() {
        return None;
    }
    let q = fam.square_coefficients(pair);
    let mut candidates = vec![b.clone(), (&a + &b) / int(2)];
    if a.is_positive() {
        candidates.push(a.clone());
    }
    if q.0.is_negative() {
        let vertex = -&q.1 / (int(2) * &q.0);
        if vertex > a && vertex <= b {
            candidates.push(vertex);
        }
    }
    if let Some(x) = candidates.into_iter().find(|x| x.is_positive() && eval_quadratic(&q, x).is_positive()) {
        return Some(x);
    }
    // q(0) > 0 only: shrink towards 0 inside (0, b] when the interval reaches 0.
    if a.is_zero() && eval_quadratic(&q, &a).is_positive() {
        let mut x = b;
        for _ in 0..128 {
            x /= int(2);
            if eval_quadratic(&q, &x).is_positive() {
                return Some(x);
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Nef,
    Ample,
}

impl std::str::FromStr for Property {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nef" => Ok(Property::Nef),
            "ample" => Ok(Property::Ample),
            other => Err(format!("unknown property {other:?} (expected nef or ample)")),
        }
    }
}

/// ᾱ such that the property holds for every α ∈ (ᾱ, 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Threshold {
    pub property: Property,
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
    /// The property also holds at α = value.
    pub attained: bool,
    /// False when `value` is a rational upper bound for an irrational root
    /// of 𝓛_α² (the interval statement still holds for `value`).
    pub exact: bool,
    /// Curves whose affine constraint is tight at `value`, one per ray.
    pub binding_curves: Vec<TestCurve>,
    /// The self-intersection constraint 𝓛_α² > 0 is tight at `value`.
    pub square_binding: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThresholdError {
    #[error("log-canonical class is not nef: {} gives {}", .0.curve.label(), .0.value)]
    NotNef(Witness),
    #[error("no interval (ᾱ, 1) exists: {reason}")]
    Empty { reason: String, witness: Option<Witness> },
    #[error("curve set is not decisive (empty catalog or no reference class)")]
    Undecided,
}

/// Exact nef/ample threshold of the family, intersecting per-curve α-intervals
/// (and, for ampleness, the interval where 𝓛_α² > 0).
pub fn nef_threshold(fam: &AlphaFamily, pair: &SurfacePair, property: Property) -> Result<Threshold, ThresholdError> {
    let set = CurveSet::for_pair(pair);
    threshold_on(fam, pair, &set, property)
}

pub fn threshold_on(
    fam: &AlphaFamily,
    pair: &SurfacePair,
    set: &CurveSet,
    property: Property,
) -> Result<Threshold, ThresholdError> {
    let l = fam.log_canonical();
    let nef = nef_on(pair, set, &l);
    match nef.status {
        Tri::No => return Err(ThresholdError::NotNef(nef.witness.expect("witness on failure"))),
        Tri::Unknown => return Err(ThresholdError::Undecided),
        Tri::Yes => {}
    }

    let mut bound: Option<Rational> = None;
    let mut per_curve: Vec<(TestCurve, Option<Rational>)> = Vec::new();
    for curve in &set.curves {
        let f = AffineInAlpha { at_one: pair.dot(&l, &curve.class), slope: pair.dot(&fam.boundary, &curve.class) };
        let lower = match property {
            Property::Nef if f.slope.is_positive() => {
                if f.at_one.is_zero() {
                    return Err(ThresholdError::Empty {
                        reason: format!("{} has 𝓛·C = 0 and D·C > 0", curve.label()),
                        witness: Some(Witness { curve: curve.clone(), value: f.slope.clone() }),
                    });
                }
                Some(Rational::one() - &f.at_one / &f.slope)
            }
            Property::Nef => None,
            Property::Ample if f.at_one.is_zero() => {
                if !f.slope.is_negative() {
                    return Err(ThresholdError::Empty {
                        reason: format!("{} has 𝓛_α·C = (α−1)·{} ≤ 0 for α < 1", curve.label(), f.slope),
                        witness: Some(Witness { curve: curve.clone(), value: Rational::zero() }),
                    });
                }
                None
            }
            Property::Ample if f.slope.is_positive() => Some(Rational::one() - &f.at_one / &f.slope),
            Property::Ample => None,
        };
        if let Some(x) = &lower {
            if bound.as_ref().is_none_or(|b| x > b) {
                bound = Some(x.clone());
            }
        }
        per_curve.push((curve.clone(), lower));
    }
    let curve_value = bound.filter(|b| b.is_positive()).unwrap_or_else(Rational::zero);

    let mut value = curve_value.clone();
    let mut exact = true;
    let mut square_binding = false;
    if property == Property::Ample {
        let (sq_bound, sq_exact) = square_threshold(fam, pair).ok_or_else(|| ThresholdError::Empty {
            reason: "𝓛_α² is not positive for α close to 1".to_string(),
            witness: None,
        })?;
        if sq_bound > value {
            value = sq_bound.clone();
            exact = sq_exact;
        }
        square_binding = sq_bound.is_positive() && sq_bound == value;
    }

    let mut binding_curves: Vec<TestCurve> = Vec::new();
    if value.is_positive() && curve_value == value {
        for (curve, lower) in per_curve {
            if lower.as_ref() == Some(&value) && !binding_curves.iter().any(|b| b.class.same_ray(&curve.class)) {
                binding_curves.push(curve);
            }
        }
    }

    let attained = value.is_positive()
        && exact
        && match property {
            Property::Nef => nef_on(pair, set, &fam.at(&value)).status == Tri::Yes,
            Property::Ample => ample_on(pair, set, &fam.at(&value)).status == Tri::Yes,
        };

    Ok(Threshold { property, value, attained, exact, binding_curves, square_binding })
}

/// Infimum ᾱ ≥ 0 of {a : 𝓛_α² > 0 on (a, 1)}, with an exactness flag, or
/// `None` when 𝓛_α² is not positive just below α = 1.
///
/// In t = 1 − α: 𝓛_α² = 𝓛² − 2(𝓛·D)t + D²t².
pub fn square_threshold(fam: &AlphaFamily, pair: &SurfacePair) -> Option<(Rational, bool)> {
    let l = fam.log_canonical();
    let c0 = pair.square(&l);
    let c1 = -int(2) * pair.dot(&l, &fam.boundary);
    let c2 = pair.square(&fam.boundary);
    let leading = [&c0, &c1, &c2].into_iter().find(|c| !c.is_zero());
    match leading {
        Some(c) if c.is_positive() => {}
        _ => return None,
    }
    let q = |t: &Rational| &c0 + &c1 * t + &c2 * t * t;
    // smallest root t* > 0, if any
    let (root, exact) = if c2.is_zero() {
        if c1.is_zero() {
            return Some((Rational::zero(), true));
        }
        let t = -&c0 / &c1;
        if !t.is_positive() {
            return Some((Rational::zero(), true));
        }
        (t, true)
    } else {
        let disc = &c1 * &c1 - int(4) * &c2 * &c0;
        if disc.is_negative() {
            return Some((Rational::zero(), true));
        }
        let two_a = int(2) * &c2;
        match exact_sqrt(&disc) {
            Some(s) => {
                let mut roots = [(-&c1 - &s) / &two_a, (-&c1 + &s) / &two_a];
                roots.sort();
                match roots.into_iter().find(|r| r.is_positive()) {
                    Some(r) => (r, true),
                    None => return Some((Rational::zero(), true)),
                }
            }
            None => {
                // Irrational roots, so c0 ≠ 0 and hence c0 > 0. Bracket the
                // smallest positive root with a point where q < 0, then keep
                // the lower (q > 0) end: 1 − t_lo is a conservative threshold.
                let d = crate::rational::to_f64(&disc).sqrt();
                let (b, a2) = (crate::rational::to_f64(&c1), crate::rational::to_f64(&two_a));
                let mut roots = [(-b - d) / a2, (-b + d) / a2];
                roots.sort_by(|x, y| x.total_cmp(y));
                let positive: Vec<f64> = roots.into_iter().filter(|r| *r > 0.0).collect();
                let probe = match positive.as_slice() {
                    [] => return Some((Rational::zero(), true)),
                    [r] => 2.0 * r + 1.0,
                    [r1, r2, ..] => (r1 + r2) / 2.0,
                };
                let hi = Rational::from_float(probe)?;
                if !q(&hi).is_negative() {
                    return None;
                }
                let (t_lo, _) = bisect_root(q, Rational::zero(), hi, 50);
                (t_lo, false)
            }
        }
    };
    let value = Rational::one() - root;
    if value.is_positive() {
        Some((value, exact))
    } else {
        Some((Rational::zero(), exact))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{BoundaryComponent, CurveRecord};
    use crate::rational::ratio;

    pub(crate) fn p2_with_boundary(d: i64) -> SurfacePair {
        let lattice = Lattice::new(vec![vec![1]]).unwrap();
        let comps = if d == 0 {
            vec![]
        } else {
            vec![BoundaryComponent { class: DivisorClass::from_ints(&[d]), smooth: true, rational: d <= 2 }]
        };
        SurfacePair::new(
            lattice,
            DivisorClass::from_ints(&[-3]),
            comps,
            3,
            1,
            vec![
                CurveRecord::smooth_rational(DivisorClass::from_ints(&[1])),
                CurveRecord::smooth_rational(DivisorClass::from_ints(&[2])),
                CurveRecord {
                    class: DivisorClass::from_ints(&[4]),
                    irreducible: true,
                    rational: false,
                    smooth: true,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn affine_intersection_examples() {
        let pair = p2_with_boundary(4);
        let fam = AlphaFamily::of_pair(&pair);
        let f = intersect_alpha(&fam, &DivisorClass::from_ints(&[1]), &pair.lattice).unwrap();
        // 4α − 3
        assert_eq!(f.value(&ratio(1, 2)), int(-1));
        assert_eq!(f.value(&Rational::one()), int(1));
        assert_eq!(f.slope, int(4));
    }

    #[test]
    fn nef_on_quartic() {
        let pair = p2_with_boundary(4);
        let fam = AlphaFamily::of_pair(&pair);
        assert_eq!(is_nef(&fam, &Rational::one(), &pair).unwrap().status, Tri::Yes);
        let v = is_nef(&fam, &ratio(1, 2), &pair).unwrap();
        assert_eq!(v.status, Tri::No);
        let w = v.witness.unwrap();
        assert_eq!(w.curve.class, DivisorClass::from_ints(&[1]));
        assert_eq!(w.value, int(-1));
    }

    #[test]
    fn alpha_range_is_enforced() {
        let pair = p2_with_boundary(4);
        let fam = AlphaFamily::of_pair(&pair);
        assert!(is_nef(&fam, &Rational::zero(), &pair).is_err());
        assert!(is_ample(&fam, &ratio(3, 2), &pair).is_err());
        assert!(is_big(&fam, &int(-1), &pair).is_err());
    }

    #[test]
    fn empty_catalog_is_unknown() {
        let mut pair = p2_with_boundary(4);
        pair.catalog.clear();
        let fam = AlphaFamily::of_pair(&pair);
        assert_eq!(is_nef(&fam, &Rational::one(), &pair).unwrap().status, Tri::Unknown);
        assert_eq!(is_ample(&fam, &Rational::one(), &pair).unwrap().status, Tri::Unknown);
    }

    #[test]
    fn big_examples() {
        let pair = p2_with_boundary(4);
        let fam = AlphaFamily::of_pair(&pair);
        let v = is_big(&fam, &ratio(9, 10), &pair).unwrap();
        assert_eq!(v.status, Tri::Yes);
        assert_eq!(v.certificate, Some(BigCertificate::NefPositiveSquare { square: ratio(9, 25) }));
        assert_eq!(is_big(&fam, &Rational::one(), &pair).unwrap().status, Tri::Yes);

        let cubic = p2_with_boundary(3);
        let fam = AlphaFamily::of_pair(&cubic);
        assert_eq!(is_big(&fam, &Rational::one(), &cubic).unwrap().status, Tri::Unknown);
    }

    #[test]
    fn ample_examples() {
        let pair = p2_with_boundary(4);
        let fam = AlphaFamily::of_pair(&pair);
        assert_eq!(is_ample(&fam, &ratio(7, 8), &pair).unwrap().status, Tri::Yes);
        let v = is_ample(&fam, &ratio(3, 4), &pair).unwrap();
        assert_eq!(v.status, Tri::No);
        assert_eq!(v.witness, Some(AmpleWitness::Square { square: Rational::zero() }));
    }

    #[test]
    fn quartic_thresholds() {
        let pair = p2_with_boundary(4);
        let fam = AlphaFamily::of_pair(&pair);
        let ample = nef_threshold(&fam, &pair, Property::Ample).unwrap();
        assert_eq!(ample.value, ratio(3, 4));
        assert!(!ample.attained);
        assert!(ample.exact);
        assert_eq!(ample.binding_curves.len(), 1);
        assert_eq!(ample.binding_curves[0].class, DivisorClass::from_ints(&[1]));

        let nef = nef_threshold(&fam, &pair, Property::Nef).unwrap();
        assert_eq!(nef.value, ratio(3, 4));
        assert!(nef.attained);
    }

    #[test]
    fn threshold_requires_nef_log_canonical() {
        let pair = p2_with_boundary(2);
        let fam = AlphaFamily::of_pair(&pair);
        match nef_threshold(&fam, &pair, Property::Nef) {
            Err(ThresholdError::NotNef(w)) => assert_eq!(w.value, int(-1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn square_threshold_irrational_root_is_conservative() {
        // Q = diag(1, -1), K = (-3, 1), D = (4, -1): 𝓛 = (1, 0), roots of 𝓛_α² irrational
        let lattice = Lattice::new(vec![vec![1, 0], vec![0, -1]]).unwrap();
        let pair = SurfacePair::new(
            lattice,
            DivisorClass::from_ints(&[-3, 1]),
            vec![BoundaryComponent { class: DivisorClass::from_ints(&[4, -1]), smooth: true, rational: false }],
            4,
            0,
            vec![],
        )
        .unwrap();
        let fam = AlphaFamily::of_pair(&pair);
        let (value, exact) = square_threshold(&fam, &pair).unwrap();
        // 𝓛_α² = (4α−3)² − (1−α)², largest root below 1 is (4 + √... )—check sign pattern
        let sq = |a: &Rational| pair.square(&fam.at(a));
        if !exact {
            assert!(sq(&value).is_positive() || sq(&value).is_zero());
            let just_below = &value - ratio(1, 1 << 20);
            assert!(!sq(&just_below).is_positive());
        }
        let above = (&value + Rational::one()) / int(2);
        assert!(sq(&above).is_positive());
    }
}
