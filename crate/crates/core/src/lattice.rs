//! Néron–Severi lattice data for a logarithmic surface pair.
//!
//! Everything here is exact: classes are vectors of rationals, the
//! intersection form is an integer Gram matrix, and the signature test uses
//! rational congruence diagonalization.

use std::fmt;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::rational::{int, Rational};

/// Default height bound for candidate class enumeration.
pub const DEFAULT_HEIGHT_BOUND: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gram matrix must be square and non-empty")]
    BadShape,
    #[error("class {0} is not integral")]
    NotIntegral(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("no reference class with positive self-intersection is available")]
    MissingReference,
    #[error("reference class has h² = {0} ≤ 0; refusing an unbounded search")]
    Unbounded(Rational),
    #[error("requested self-intersection {0} is not negative")]
    NonNegativeSquare(i64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A divisor class: a rational coefficient vector in the lattice basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(Vec<Rational>);

impl DivisorClass {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        DivisorClass(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        DivisorClass(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![Rational::zero(); rank])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, when integral and within `i64`.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &Rational) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a * s).collect())
    }

    pub fn neg(&self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: &Rational, other: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    /// True when `other = c·self` for some rational `c > 0`.
    pub fn same_ray(&self, other: &DivisorClass) -> bool {
        if self.len() != other.len() || self.is_zero() || other.is_zero() {
            return false;
        }
        let mut ratio: Option<Rational> = None;
        for (a, b) in self.0.iter().zip(&other.0) {
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return false,
                (false, false) => {
                    let r = b / a;
                    match &ratio {
                        None => ratio = Some(r),
                        Some(prev) if *prev != r => return false,
                        _ => {}
                    }
                }
            }
        }
        ratio.is_some_and(|r| r.is_positive())
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// Integral symmetric bilinear form of a Néron–Severi lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
}

/// Inertia of a real symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Lattice {
    /// Builds a lattice from a square Gram matrix. Symmetry and signature are
    /// checked by [`validate`], not here.
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) {
            return Err(LatticeError::BadShape);
        }
        Ok(Lattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetric_entry().is_none()
    }

    fn asymmetric_entry(&self) -> Option<(usize, usize)> {
        let n = self.rank();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.gram[i][j] != self.gram[j][i])
    }

    /// Exact inertia by symmetric congruence elimination over ℚ.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&x| int(x)).collect())
            .collect();
        let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
        let mut k = 0;
        while k < n {
            if let Some(p) = (k..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // All remaining diagonal entries vanish: e_i += e_j makes a_ii = 2a_ij ≠ 0.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
                continue;
            } else {
                sig.zero += n - k;
                break;
            }
            let pivot = a[k][k].clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for i in k + 1..n {
                let factor = &a[i][k] / &pivot;
                if factor.is_zero() {
                    continue;
                }
                for c in k..n {
                    let v = &factor * &a[k][c];
                    a[i][c] -= v;
                }
                for r in k..n {
                    let v = &factor * &a[r][k];
                    a[r][i] -= v;
                }
            }
            k += 1;
        }
        sig
    }

    fn check_len(&self, c: &DivisorClass) -> Result<(), LatticeError> {
        if c.len() == self.rank() {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch { expected: self.rank(), found: c.len() })
        }
    }

    fn dot_unchecked(&self, a: &DivisorClass, b: &DivisorClass) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.coeffs().iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let mut row = Rational::zero();
            for (j, bj) in b.coeffs().iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && !bj.is_zero() {
                    row += bj * int(g);
                }
            }
            acc += ai * row;
        }
        acc
    }

    fn dot_ints(&self, a: &[i64], b: &[i64]) -> i128 {
        let mut acc = 0i128;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row: i128 = b
                .iter()
                .zip(&self.gram[i])
                .map(|(&bj, &g)| bj as i128 * g as i128)
                .sum();
            acc += ai as i128 * row;
        }
        acc
    }
}

/// Intersection number `aᵀ·Q·b`.
pub fn pair(a: &DivisorClass, b: &DivisorClass, lattice: &Lattice) -> Result<Rational, LatticeError> {
    lattice.check_len(a)?;
    lattice.check_len(b)?;
    Ok(lattice.dot_unchecked(a, b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryComponent {
    pub class: DivisorClass,
    pub smooth: bool,
    pub rational: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveRecord {
    pub class: DivisorClass,
    pub irreducible: bool,
    pub rational: bool,
    pub smooth: bool,
}

impl CurveRecord {
    pub fn smooth_rational(class: DivisorClass) -> Self {
        CurveRecord { class, irreducible: true, rational: true, smooth: true }
    }
}

impl From<&BoundaryComponent> for CurveRecord {
    fn from(c: &BoundaryComponent) -> Self {
        CurveRecord { class: c.class.clone(), irreducible: true, rational: c.rational, smooth: c.smooth }
    }
}

/// Lattice-level description of a pair (M̄, D).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePair {
    pub name: Option<String>,
    pub lattice: Lattice,
    pub canonical: DivisorClass,
    pub components: Vec<BoundaryComponent>,
    pub chi: i64,
    pub sigma: i64,
    pub catalog: Vec<CurveRecord>,
    /// Explicit reference class for enumeration; otherwise the first catalog
    /// curve (then component) with positive square is used.
    pub reference: Option<DivisorClass>,
    pub height_bound: u32,
}

impl SurfacePair {
    /// Assembles a pair, checking only that every class has the lattice rank.
    pub fn new(
        lattice: Lattice,
        canonical: DivisorClass,
        components: Vec<BoundaryComponent>,
        chi: i64,
        sigma: i64,
        catalog: Vec<CurveRecord>,
    ) -> Result<Self, LatticeError> {
        lattice.check_len(&canonical)?;
        for c in components.iter().map(|c| &c.class).chain(catalog.iter().map(|c| &c.class)) {
            lattice.check_len(c)?;
        }
        Ok(SurfacePair {
            name: None,
            lattice,
            canonical,
            components,
            chi,
            sigma,
            catalog,
            reference: None,
            height_bound: DEFAULT_HEIGHT_BOUND,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_reference(mut self, reference: DivisorClass) -> Result<Self, LatticeError> {
        self.lattice.check_len(&reference)?;
        self.reference = Some(reference);
        Ok(self)
    }

    pub fn with_height_bound(mut self, bound: u32) -> Self {
        self.height_bound = bound;
        self
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Intersection number of two classes of this pair's rank.
    ///
    /// Panics on a length mismatch; use [`pair`] for unchecked input.
    pub fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> Rational {
        assert_eq!(a.len(), self.rank(), "class length differs from lattice rank");
        assert_eq!(b.len(), self.rank(), "class length differs from lattice rank");
        self.lattice.dot_unchecked(a, b)
    }

    pub fn square(&self, a: &DivisorClass) -> Rational {
        self.dot(a, a)
    }

    /// D = Σ Dᵢ.
    pub fn boundary(&self) -> DivisorClass {
        self.components
            .iter()
            .fold(DivisorClass::zero(self.rank()), |acc, c| acc.add(&c.class))
    }

    /// 𝓛 = K + D.
    pub fn log_canonical(&self) -> DivisorClass {
        self.canonical.add(&self.boundary())
    }

    /// Adjunction genus (C² + K·C)/2 + 1.
    pub fn genus(&self, c: &DivisorClass) -> Rational {
        (self.square(c) + self.dot(&self.canonical, c)) / int(2) + Rational::one()
    }

    /// Index of the component whose class equals `c`, if any.
    pub fn component_index(&self, c: &DivisorClass) -> Option<usize> {
        self.components.iter().position(|comp| comp.class == *c)
    }

    /// Reference class `h` used to bound enumeration.
    pub fn reference_class(&self) -> Result<DivisorClass, EnumerationError> {
        if let Some(h) = &self.reference {
            let sq = self.square(h);
            if !sq.is_positive() {
                return Err(EnumerationError::Unbounded(sq));
            }
            return Ok(h.clone());
        }
        self.catalog
            .iter()
            .map(|c| &c.class)
            .chain(self.components.iter().map(|c| &c.class))
            .find(|c| self.square(c).is_positive())
            .cloned()
            .ok_or(EnumerationError::MissingReference)
    }
}

/// Adjunction genus p_a(C) = (C² + K·C)/2 + 1.
pub fn arithmetic_genus(c: &DivisorClass, pair: &SurfacePair) -> Result<Rational, LatticeError> {
    pair.lattice.check_len(c)?;
    Ok(pair.genus(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    GramSymmetric,
    HodgeSignature,
    CanonicalIntegral,
    CanonicalCharacteristic,
    NoetherIdentity,
    ClassIntegral,
    ClassNonzero,
    GenusNonnegative,
    RationalGenusZero,
    GenusZeroRational,
    Irreducible,
    DistinctCurvesMeetNonnegatively,
    ReferencePositive,
    DistinctComponents,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub invariant: Invariant,
    /// JSON-style path of the offending field, e.g. `.components[1].class`.
    pub path: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, invariant: Invariant, path: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(Finding { invariant, path: path.into(), detail: detail.into() });
    }

    fn warn(&mut self, invariant: Invariant, path: impl Into<String>, detail: impl Into<String>) {
        self.warnings.push(Finding { invariant, path: path.into(), detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.failures {
            writeln!(f, "error at {}: {}", x.path, x.detail)?;
        }
        for x in &self.warnings {
            writeln!(f, "warning at {}: {}", x.path, x.detail)?;
        }
        Ok(())
    }
}

/// Checks every invariant of a [`SurfacePair`]; failures carry the offending
/// field path and witness.
pub fn validate(pair: &SurfacePair) -> ValidationReport {
    let mut report = ValidationReport::default();
    let lattice = &pair.lattice;
    let n = lattice.rank();

    if let Some((i, j)) = lattice.asymmetric_entry() {
        report.fail(
            Invariant::GramSymmetric,
            ".gram",
            format!("Q[{i}][{j}] = {} but Q[{j}][{i}] = {}", lattice.gram[i][j], lattice.gram[j][i]),
        );
    } else {
        let sig = lattice.signature();
        if sig.positive != 1 || sig.negative != n - 1 {
            report.fail(
                Invariant::HodgeSignature,
                ".gram",
                format!(
                    "signature (+{}, -{}, 0×{}) is not (1, {})",
                    sig.positive,
                    sig.negative,
                    sig.zero,
                    n - 1
                ),
            );
        }
    }

    let k = &pair.canonical;
    if !k.is_integral() {
        report.fail(Invariant::CanonicalIntegral, ".K", format!("K = {k} is not integral"));
    } else {
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            let k_dot_e = pair.dot(k, &DivisorClass::from_ints(&e));
            let diff = int(lattice.gram[i][i]) - k_dot_e.clone();
            if !diff.to_integer().is_even() {
                report.fail(
                    Invariant::CanonicalCharacteristic,
                    ".K",
                    format!("Q[{i}][{i}] = {} and K·e{i} = {k_dot_e} differ in parity", lattice.gram[i][i]),
                );
            }
        }
    }

    let k_sq = pair.square(k);
    let noether = int(2 * pair.chi + 3 * pair.sigma);
    if k_sq != noether {
        report.fail(
            Invariant::NoetherIdentity,
            ".sigma",
            format!("K² = {k_sq} but 2χ + 3σ = {noether}"),
        );
    }

    if let Some(h) = &pair.reference {
        let sq = pair.square(h);
        if !sq.is_positive() || !h.is_integral() {
            report.fail(
                Invariant::ReferencePositive,
                ".reference",
                format!("reference class {h} must be integral with positive square (h² = {sq})"),
            );
        }
    }

    for (i, comp) in pair.components.iter().enumerate() {
        let path = format!(".components[{i}]");
        check_curve_class(pair, &comp.class, &path, &mut report);
        if !comp.class.is_integral() || comp.class.is_zero() {
            continue;
        }
        let g = pair.genus(&comp.class);
        if comp.rational && !g.is_zero() {
            report.fail(
                Invariant::RationalGenusZero,
                format!("{path}.rational"),
                format!("rational component {} has arithmetic genus {g}", comp.class),
            );
        }
        if g.is_zero() && !comp.rational {
            report.fail(
                Invariant::GenusZeroRational,
                format!("{path}.rational"),
                format!("component {} has arithmetic genus 0 but is not flagged rational", comp.class),
            );
        }
        for (j, other) in pair.components.iter().enumerate().take(i) {
            if other.class == comp.class {
                report.warn(
                    Invariant::DistinctComponents,
                    format!("{path}.class"),
                    format!("component {i} has the same class as component {j}"),
                );
            }
            let d = pair.dot(&comp.class, &other.class);
            if d.is_negative() {
                report.fail(
                    Invariant::DistinctCurvesMeetNonnegatively,
                    format!("{path}.class"),
                    format!("components {j} and {i} meet with intersection number {d}"),
                );
            }
        }
    }

    for (i, curve) in pair.catalog.iter().enumerate() {
        let path = format!(".curves[{i}]");
        if !curve.irreducible {
            report.fail(Invariant::Irreducible, format!("{path}.irreducible"), "catalog curves must be irreducible");
        }
        check_curve_class(pair, &curve.class, &path, &mut report);
        if !curve.class.is_integral() || curve.class.is_zero() {
            continue;
        }
        let g = pair.genus(&curve.class);
        if curve.rational && curve.smooth && !g.is_zero() {
            report.fail(
                Invariant::RationalGenusZero,
                format!("{path}.rational"),
                format!("smooth rational curve {} has arithmetic genus {g}", curve.class),
            );
        }
        if g.is_zero() && !(curve.rational && curve.smooth) {
            report.fail(
                Invariant::GenusZeroRational,
                format!("{path}.rational"),
                format!("curve {} has arithmetic genus 0 but is not flagged smooth rational", curve.class),
            );
        }
        let mut seen = Vec::new();
        for comp in &pair.components {
            if comp.class != curve.class && !seen.contains(&&comp.class) {
                seen.push(&comp.class);
                let d = pair.dot(&curve.class, &comp.class);
                if d.is_negative() {
                    report.fail(
                        Invariant::DistinctCurvesMeetNonnegatively,
                        format!("{path}.class"),
                        format!("curve {} meets component {} with intersection number {d}", curve.class, comp.class),
                    );
                }
            }
        }
        for (j, other) in pair.catalog.iter().enumerate().take(i) {
            if other.class == curve.class {
                continue;
            }
            let d = pair.dot(&curve.class, &other.class);
            if d.is_negative() {
                report.fail(
                    Invariant::DistinctCurvesMeetNonnegatively,
                    format!("{path}.class"),
                    format!("curves {j} and {i} meet with intersection number {d}"),
                );
            }
        }
    }

    report
}

fn check_curve_class(pair: &SurfacePair, c: &DivisorClass, path: &str, report: &mut ValidationReport) {
    if !c.is_integral() {
        report.fail(Invariant::ClassIntegral, format!("{path}.class"), format!("class {c} is not integral"));
        return;
    }
    if c.is_zero() {
        report.fail(Invariant::ClassNonzero, format!("{path}.class"), "curve class is zero");
        return;
    }
    let g = pair.genus(c);
    if g.is_negative() {
        report.fail(
            Invariant::GenusNonnegative,
            format!("{path}.class"),
            format!("class {c} has negative arithmetic genus {g}"),
        );
    }
}

/// All integral classes C with C² = `self_int`, K·C = `k_dot` and
/// 0 ≤ C·h ≤ `height_bound`, where h is the pair's reference class.
///
/// Classes with C·h = 0 are kept in ± pairs (first nonzero coefficient
/// positive first); classes with C·h < 0 are dropped. The order is by C·h,
/// then lexicographic on the coefficient vector.
pub fn enumerate_negative_classes(
    pair: &SurfacePair,
    self_int: i64,
    k_dot: i64,
    height_bound: u32,
) -> Result<Vec<DivisorClass>, EnumerationError> {
    if self_int >= 0 {
        return Err(EnumerationError::NonNegativeSquare(self_int));
    }
    let h = pair.reference_class()?;
    let k = pair.canonical.to_ints().ok_or_else(|| LatticeError::NotIntegral(pair.canonical.to_string()))?;
    Ok(classes_with_square(pair, &h, self_int, height_bound)?
        .into_iter()
        .filter(|c| pair.lattice.dot_ints(&k, &c.coeffs) == k_dot as i128)
        .map(|c| DivisorClass::from_ints(&c.coeffs))
        .collect())
}

/// An integral class found by the bounded search, with its degree C·h.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedClass {
    pub coeffs: Vec<i64>,
    pub degree: i64,
}

/// Integral classes with C² = `square` and 0 ≤ C·h ≤ `bound`.
///
/// Finite because `2(x·h)²/h² − x²` is positive definite when the form has
/// signature (1, ρ−1) and h² > 0; the search is Fincke–Pohst on that form.
pub fn classes_with_square(
    pair: &SurfacePair,
    h: &DivisorClass,
    square: i64,
    bound: u32,
) -> Result<Vec<BoundedClass>, EnumerationError> {
    let lattice = &pair.lattice;
    let h = h.to_ints().ok_or_else(|| LatticeError::NotIntegral(h.to_string()))?;
    let h_sq = lattice.dot_ints(&h, &h);
    if h_sq <= 0 {
        return Err(EnumerationError::Unbounded(Rational::from_integer(BigInt::from(h_sq))));
    }
    let n = lattice.rank();
    let gh: Vec<i128> = (0..n)
        .map(|i| (0..n).map(|j| lattice.gram[i][j] as i128 * h[j] as i128).sum())
        .collect();
    // h²·P = 2(Gh)(Gh)ᵀ − h²·G
    let form: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (2 * gh[i] * gh[j] - h_sq * lattice.gram[i][j] as i128) as f64)
                .collect()
        })
        .collect();
    let b = bound as i128;
    let budget = (2 * b * b - h_sq * square as i128) as f64;
    let mut out = Vec::new();
    if budget < 0.0 {
        return Ok(out);
    }
    fincke_pohst(&form, budget, &mut |x: &[i64]| {
        if x.iter().all(|&v| v == 0) || lattice.dot_ints(x, x) != square as i128 {
            return;
        }
        let degree: i128 = x.iter().zip(&gh).map(|(&a, &g)| a as i128 * g).sum();
        if (0..=b).contains(&degree) {
            out.push(BoundedClass { coeffs: x.to_vec(), degree: degree as i64 });
        }
    });
    out.sort_by(|a, b| enumeration_key(a).cmp(&enumeration_key(b)));
    Ok(out)
}

fn enumeration_key(c: &BoundedClass) -> (i64, Vec<i64>, bool) {
    let negated = c.coeffs.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0);
    let canonical = if negated { c.coeffs.iter().map(|v| -v).collect() } else { c.coeffs.clone() };
    (c.degree, canonical, negated)
}

/// Visits the integer points with `xᵀ·form·x ≤ budget` for a positive
/// definite `form`. Bounds carry a small slack, so callers re-check exact
/// conditions.
fn fincke_pohst(form: &[Vec<f64>], budget: f64, visit: &mut dyn FnMut(&[i64])) {
    let n = form.len();
    let mut q: Vec<Vec<f64>> = form.to_vec();
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let slack = 1e-7 * (1.0 + budget.abs());
    let mut x = vec![0i64; n];
    search(&q, n, budget + slack, slack, &mut x, visit);
}

fn search(q: &[Vec<f64>], level: usize, remaining: f64, slack: f64, x: &mut [i64], visit: &mut dyn FnMut(&[i64])) {
    if level == 0 {
        visit(x);
        return;
    }
    let i = level - 1;
    let n = q.len();
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let radius = (remaining.max(0.0) / q[i][i]).sqrt();
    let lo = (center - radius).ceil() as i64;
    let hi = (center + radius).floor() as i64;
    for v in lo..=hi {
        x[i] = v;
        let d = v as f64 - center;
        let rest = remaining - q[i][i] * d * d;
        if rest < -slack {
            continue;
        }
        search(q, i, rest, slack, x, visit);
    }
    x[i] = 0;
}

/// Parity of `C² + K·C` for an integral class; zero when K is characteristic.
pub fn adjunction_parity(pair: &SurfacePair, c: &DivisorClass) -> BigInt {
    let v = pair.square(c) + pair.dot(&pair.canonical, c);
    v.to_integer().mod_floor(&BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p2(d: i64, sigma: i64) -> SurfacePair {
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
            sigma,
            vec![
                CurveRecord::smooth_rational(DivisorClass::from_ints(&[1])),
                CurveRecord::smooth_rational(DivisorClass::from_ints(&[2])),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pairing_examples() {
        let p2 = Lattice::new(vec![vec![1]]).unwrap();
        let h = DivisorClass::from_ints(&[1]);
        assert_eq!(pair(&h, &h, &p2).unwrap(), int(1));

        let blowup = Lattice::new(vec![vec![1, 0], vec![0, -1]]).unwrap();
        let e = DivisorClass::from_ints(&[0, 1]);
        assert_eq!(pair(&e, &e, &blowup).unwrap(), int(-1));

        let q = Lattice::new(vec![vec![1, 0], vec![0, -2]]).unwrap();
        let a = DivisorClass::from_ints(&[2, -1]);
        let b = DivisorClass::from_ints(&[0, 1]);
        assert_eq!(pair(&a, &b, &q).unwrap(), int(2));
    }

    #[test]
    fn pairing_rejects_wrong_length() {
        let q = Lattice::new(vec![vec![1, 0], vec![0, -1]]).unwrap();
        let err = pair(&DivisorClass::from_ints(&[1]), &DivisorClass::from_ints(&[1, 0]), &q).unwrap_err();
        assert_eq!(err, LatticeError::DimensionMismatch { expected: 2, found: 1 });
    }

    #[test]
    fn lattice_rejects_ragged_gram() {
        assert_eq!(Lattice::new(vec![vec![1, 0], vec![0]]), Err(LatticeError::BadShape));
        assert_eq!(Lattice::new(vec![]), Err(LatticeError::BadShape));
    }

    #[test]
    fn genus_examples() {
        let pair = p2(4, 1);
        let g = |d: i64| arithmetic_genus(&DivisorClass::from_ints(&[d]), &pair).unwrap();
        assert_eq!(g(1), int(0));
        assert_eq!(g(4), int(3));

        let q = Lattice::new(vec![vec![1, 0], vec![0, -2]]).unwrap();
        let pair = SurfacePair::new(q, DivisorClass::from_ints(&[3, 0]), vec![], 3, 1, vec![]).unwrap();
        assert_eq!(arithmetic_genus(&DivisorClass::from_ints(&[0, 1]), &pair).unwrap(), int(0));
    }

    #[test]
    fn signature_handles_zero_diagonal() {
        // hyperbolic plane U
        let u = Lattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(u.signature(), Signature { positive: 1, negative: 1, zero: 0 });
        let degenerate = Lattice::new(vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(degenerate.signature(), Signature { positive: 1, negative: 0, zero: 1 });
        let e = Lattice::new(vec![vec![2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]).unwrap();
        assert_eq!(e.signature(), Signature { positive: 1, negative: 2, zero: 0 });
    }

    #[test]
    fn validate_p2() {
        assert!(validate(&p2(4, 1)).is_valid());
        let bad = validate(&p2(4, 0));
        assert!(bad.failures.iter().any(|f| f.invariant == Invariant::NoetherIdentity));
    }

    #[test]
    fn validate_rejects_definite_form() {
        let q = Lattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let pair = SurfacePair::new(q, DivisorClass::from_ints(&[1, 1]), vec![], 1, 0, vec![]).unwrap();
        let report = validate(&pair);
        assert!(report.failures.iter().any(|f| f.invariant == Invariant::HodgeSignature));
    }

    #[test]
    fn validate_rejects_asymmetric_gram() {
        let q = Lattice::new(vec![vec![1, 1], vec![0, -1]]).unwrap();
        let pair = SurfacePair::new(q, DivisorClass::from_ints(&[-3, 1]), vec![], 4, 0, vec![]).unwrap();
        let report = validate(&pair);
        assert_eq!(report.failures[0].invariant, Invariant::GramSymmetric);
        assert_eq!(report.failures[0].path, ".gram");
    }

    #[test]
    fn validate_rejects_non_characteristic_canonical() {
        let q = Lattice::new(vec![vec![1]]).unwrap();
        let pair = SurfacePair::new(q, DivisorClass::from_ints(&[2]), vec![], 1, 0, vec![]).unwrap();
        let report = validate(&pair);
        assert!(report.failures.iter().any(|f| f.invariant == Invariant::CanonicalCharacteristic));
    }

    #[test]
    fn validate_flags_wrong_rational_flag() {
        let mut pair = p2(4, 1);
        pair.components[0].rational = true;
        let report = validate(&pair);
        assert!(report.failures.iter().any(|f| f.invariant == Invariant::RationalGenusZero));
    }

    #[test]
    fn validate_flags_non_rational_rational_class() {
        let mut pair = p2(4, 1);
        pair.catalog[0].rational = false;
        let report = validate(&pair);
        assert!(report.failures.iter().any(|f| f.invariant == Invariant::GenusZeroRational));
    }

    #[test]
    fn validate_rejects_fractional_component() {
        let mut pair = p2(4, 1);
        pair.components[0].class = DivisorClass::new(vec![ratio(7, 2)]);
        let report = validate(&pair);
        assert!(report.failures.iter().any(|f| f.invariant == Invariant::ClassIntegral));
    }

    #[test]
    fn duplicate_components_only_warn() {
        let mut pair = p2(1, 1);
        pair.components = vec![
            BoundaryComponent { class: DivisorClass::from_ints(&[1]), smooth: true, rational: true };
            3
        ];
        let report = validate(&pair);
        assert!(report.is_valid(), "{report}");
        assert_eq!(report.warnings.len(), 3);
    }

    #[test]
    fn enumeration_on_p2_is_empty() {
        let pair = p2(4, 1);
        assert!(enumerate_negative_classes(&pair, -2, 0, 10).unwrap().is_empty());
    }

    #[test]
    fn enumeration_minus_two_pair() {
        let q = Lattice::new(vec![vec![1, 0], vec![0, -2]]).unwrap();
        let pair = SurfacePair::new(q, DivisorClass::from_ints(&[3, 0]), vec![], 3, 1, vec![])
            .unwrap()
            .with_reference(DivisorClass::from_ints(&[1, 0]))
            .unwrap();
        let found = enumerate_negative_classes(&pair, -2, 0, 5).unwrap();
        assert_eq!(found, vec![DivisorClass::from_ints(&[0, 1]), DivisorClass::from_ints(&[0, -1])]);
    }

    #[test]
    fn enumeration_finds_exceptional_curve() {
        let q = Lattice::new(vec![vec![1, 0], vec![0, -1]]).unwrap();
        let pair = SurfacePair::new(
            q,
            DivisorClass::from_ints(&[-3, 1]),
            vec![],
            4,
            0,
            vec![CurveRecord::smooth_rational(DivisorClass::from_ints(&[1, 0]))],
        )
        .unwrap();
        let found = enumerate_negative_classes(&pair, -1, -1, 3).unwrap();
        assert!(found.contains(&DivisorClass::from_ints(&[0, 1])));
    }

    #[test]
    fn enumeration_errors() {
        let q = Lattice::new(vec![vec![1, 0], vec![0, -1]]).unwrap();
        let pair = SurfacePair::new(q, DivisorClass::from_ints(&[-3, 1]), vec![], 4, 0, vec![]).unwrap();
        assert_eq!(enumerate_negative_classes(&pair, -1, -1, 3), Err(EnumerationError::MissingReference));
        let pair = pair.with_reference(DivisorClass::from_ints(&[0, 1])).unwrap();
        assert!(matches!(enumerate_negative_classes(&pair, -1, -1, 3), Err(EnumerationError::Unbounded(_))));
        assert_eq!(enumerate_negative_classes(&pair, 0, 0, 3), Err(EnumerationError::NonNegativeSquare(0)));
    }

    #[test]
    fn same_ray() {
        let a = DivisorClass::from_ints(&[1, -1]);
        assert!(a.same_ray(&DivisorClass::from_ints(&[3, -3])));
        assert!(!a.same_ray(&DivisorClass::from_ints(&[-1, 1])));
        assert!(!a.same_ray(&DivisorClass::from_ints(&[1, 0])));
    }
}
