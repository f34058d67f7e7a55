//! Random validated pairs for property tests.
//!
//! Lattices are a handful of fixed Néron–Severi shapes (ℙ², blow-ups of ℙ²
//! in up to three points, ℙ¹×ℙ¹, a rank-2 odd form) with K chosen
//! characteristic and χ, σ satisfying Noether. Components and extra curves
//! are random h-positive classes; anything failing `validate` is resampled.
//!
//! A *complete* sample also carries, as smooth rational catalog curves, every
//! enumerable class that can change a near-one verdict: (−1)-classes E with
//! E·D ≤ 1 and (−2)-classes C with K·C = 0, D·C ≤ 0.

#![allow(dead_code)]

use logpair::lattice::{enumerate_negative_classes, validate};
use logpair::{BoundaryComponent, CurveRecord, DivisorClass, Lattice, Rational, SurfacePair};
use proptest::prelude::RngExt;
use proptest::test_runner::{RngAlgorithm, TestRng};

pub fn rng_from_seed(seed: u64) -> TestRng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    TestRng::from_seed(RngAlgorithm::ChaCha, &bytes)
}

struct Shape {
    gram: Vec<Vec<i64>>,
    k: Vec<i64>,
    chi: i64,
    sigma: i64,
    /// Ample-like reference class: every effective curve has positive degree.
    h: Vec<i64>,
}

fn diag(d: &[i64]) -> Vec<Vec<i64>> {
    (0..d.len()).map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0 }).collect()).collect()
}

fn shape(rng: &mut TestRng) -> Shape {
    match rng.random_range(0..6u32) {
        0 => Shape { gram: diag(&[1]), k: vec![-3], chi: 3, sigma: 1, h: vec![1] },
        1..=3 => {
            // blow-up in k points: H, E₁…E_k; h = −K
            let k = rng.random_range(1..=3usize);
            let mut d = vec![1];
            d.extend(std::iter::repeat_n(-1, k));
            let mut kk = vec![-3];
            kk.extend(std::iter::repeat_n(1, k));
            let mut h = vec![3];
            h.extend(std::iter::repeat_n(-1, k));
            Shape { gram: diag(&d), k: kk, chi: 3 + k as i64, sigma: 1 - k as i64, h }
        }
        4 => Shape { gram: vec![vec![0, 1], vec![1, 0]], k: vec![-2, -2], chi: 4, sigma: 0, h: vec![1, 1] },
        _ => Shape { gram: diag(&[1, -2]), k: vec![3, 0], chi: 3, sigma: 1, h: vec![3, -1] },
    }
}

fn random_class(rng: &mut TestRng, rank: usize) -> Vec<i64> {
    (0..rank)
        .map(|i| if i == 0 { rng.random_range(0..=5) } else { rng.random_range(-2..=2) })
        .collect()
}

fn degree(pair: &SurfacePair, h: &DivisorClass, c: &DivisorClass) -> Rational {
    pair.dot(h, c)
}

/// A random class of positive degree and non-negative genus, or None.
fn random_curve_class(rng: &mut TestRng, pair: &SurfacePair, h: &DivisorClass) -> Option<DivisorClass> {
    let c = DivisorClass::from_ints(&random_class(rng, pair.rank()));
    let deg = degree(pair, h, &c);
    let ok = !c.is_zero()
        && deg > Rational::from_integer(0.into())
        && deg <= Rational::from_integer(12.into())
        && pair.genus(&c) >= Rational::from_integer(0.into());
    ok.then_some(c)
}

fn record(pair: &SurfacePair, c: DivisorClass) -> CurveRecord {
    let rational = pair.genus(&c) == Rational::from_integer(0.into());
    CurveRecord { class: c, irreducible: true, rational, smooth: true }
}

fn one_attempt(rng: &mut TestRng, complete: bool) -> Option<SurfacePair> {
    let s = shape(rng);
    let lattice = Lattice::new(s.gram).ok()?;
    let h = DivisorClass::from_ints(&s.h);
    let bare = SurfacePair::new(lattice, DivisorClass::from_ints(&s.k), vec![], s.chi, s.sigma, vec![])
        .ok()?
        .with_reference(h.clone())
        .ok()?;

    let n_comp = rng.random_range(0..=3);
    let mut components = Vec::new();
    for _ in 0..n_comp {
        let c = random_curve_class(rng, &bare, &h)?;
        let rational = bare.genus(&c) == Rational::from_integer(0.into());
        components.push(BoundaryComponent { class: c, smooth: true, rational });
    }
    let mut pair = bare.clone();
    pair.components = components;

    let mut catalog = Vec::new();
    if pair.genus(&h) >= Rational::from_integer(0.into()) {
        catalog.push(record(&pair, h.clone()));
    }
    for _ in 0..rng.random_range(0..=2) {
        if let Some(c) = random_curve_class(rng, &pair, &h) {
            catalog.push(record(&pair, c));
        }
    }
    if complete {
        let d = pair.boundary();
        let one = Rational::from_integer(1.into());
        let zero = Rational::from_integer(0.into());
        let minus1 = enumerate_negative_classes(&pair, -1, -1, pair.height_bound).ok()?;
        let minus2 = enumerate_negative_classes(&pair, -2, 0, pair.height_bound).ok()?;
        let positive = |c: &DivisorClass| degree(&pair, &h, c) > zero;
        let relevant = minus1
            .into_iter()
            .filter(|e| positive(e))
            .filter(|e| pair.dot(e, &d) <= one)
            .chain(minus2.into_iter().filter(|c| positive(c) && pair.dot(c, &d) <= zero));
        for c in relevant {
            if pair.component_index(&c).is_none() && !catalog.iter().any(|r: &CurveRecord| r.class == c) {
                catalog.push(CurveRecord::smooth_rational(c));
            }
        }
    }
    pair.catalog = catalog;
    validate(&pair).is_valid().then_some(pair)
}

/// A validated pair; `complete` adds every verdict-relevant enumerable class
/// to the catalog.
pub fn random_pair(rng: &mut TestRng, complete: bool) -> SurfacePair {
    loop {
        if let Some(p) = one_attempt(rng, complete) {
            return p;
        }
    }
}

/// A rational in [0, 1] with denominator at most 60.
pub fn random_unit_rational(rng: &mut TestRng) -> Rational {
    let q: i64 = rng.random_range(1..=60);
    let p: i64 = rng.random_range(0..=q);
    Rational::new(p.into(), q.into())
}
