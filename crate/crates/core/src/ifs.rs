//! Similarity systems on the line: validation, the coding map, cylinder
//! weights, Bernoulli masses and the two Moran equations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Interval, Scalar};
use crate::symbolic::SymbolWord;

pub const DEFAULT_TOL: f64 = 1e-12;
const BISECTION_CAP: usize = 200;
const MASS_CONSISTENCY: f64 = 1e-9;

/// `S(x) = ±ratio·x + offset`, minus sign when `reflect`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub ratio: f64,
    pub offset: f64,
    #[serde(default)]
    pub reflect: bool,
}

impl Similarity {
    pub fn new(ratio: f64, offset: f64, reflect: bool) -> Self {
        Self {
            ratio,
            offset,
            reflect,
        }
    }

    fn slope(&self) -> f64 {
        if self.reflect {
            -self.ratio
        } else {
            self.ratio
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        self.slope() * x + self.offset
    }

    pub fn invert(&self, y: f64) -> f64 {
        (y - self.offset) / self.slope()
    }

    pub fn image(&self, k: &Interval<f64>) -> Interval<f64> {
        Interval::spanning(self.apply(k.lo), self.apply(k.hi))
    }
}

/// JSON form: `{ "seed": [lo, hi], "maps": [ { "ratio", "offset", "reflect" } ] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IfsSpec {
    pub seed: [f64; 2],
    pub maps: Vec<Similarity>,
}

/// Contractions `S_1..S_m` with a seed compact `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityIFS {
    seed: Interval<f64>,
    maps: Vec<Similarity>,
    ambient_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IfsFailure {
    TooFewMaps { count: usize },
    RatioOutOfRange { map: usize, ratio: f64 },
    NotContained { map: usize },
    Overlap { i: usize, j: usize, distance: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IfsReport {
    pub valid: bool,
    /// `min_{i≠j} dist(S_i(K), S_j(K))`
    pub gap: f64,
    pub ratios: Vec<f64>,
    pub failures: Vec<IfsFailure>,
}

impl SimilarityIFS {
    pub fn new(seed: Interval<f64>, maps: Vec<Similarity>) -> Self {
        Self {
            seed,
            maps,
            ambient_dim: 1,
        }
    }

    pub fn from_spec(spec: &IfsSpec) -> Result<Self> {
        Ok(Self::new(
            Interval::new(spec.seed[0], spec.seed[1])?,
            spec.maps.clone(),
        ))
    }

    pub fn to_spec(&self) -> IfsSpec {
        IfsSpec {
            seed: [self.seed.lo, self.seed.hi],
            maps: self.maps.clone(),
        }
    }

    /// `x/3` and `x/3 + 2/3` on `[0, 1]`.
    pub fn middle_thirds() -> Self {
        Self::new(
            Interval { lo: 0.0, hi: 1.0 },
            vec![
                Similarity::new(1.0 / 3.0, 0.0, false),
                Similarity::new(1.0 / 3.0, 2.0 / 3.0, false),
            ],
        )
    }

    pub fn m(&self) -> usize {
        self.maps.len()
    }

    pub fn seed(&self) -> &Interval<f64> {
        &self.seed
    }

    pub fn maps(&self) -> &[Similarity] {
        &self.maps
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn ratios(&self) -> Vec<f64> {
        self.maps.iter().map(|s| s.ratio).collect()
    }

    pub fn gap(&self) -> f64 {
        let images: Vec<_> = self.maps.iter().map(|s| s.image(&self.seed)).collect();
        let mut gap = f64::INFINITY;
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                gap = gap.min(images[i].distance(&images[j]));
            }
        }
        gap
    }

    pub fn validate(&self) -> IfsReport {
        let mut failures = Vec::new();
        if self.maps.len() < 2 {
            failures.push(IfsFailure::TooFewMaps {
                count: self.maps.len(),
            });
        }
        let images: Vec<_> = self.maps.iter().map(|s| s.image(&self.seed)).collect();
        for (i, s) in self.maps.iter().enumerate() {
            if !(s.ratio > 0.0 && s.ratio < 1.0) {
                failures.push(IfsFailure::RatioOutOfRange {
                    map: i + 1,
                    ratio: s.ratio,
                });
            }
            if !images[i].is_subset_of(&self.seed) {
                failures.push(IfsFailure::NotContained { map: i + 1 });
            }
        }
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                let distance = images[i].distance(&images[j]);
                if distance <= 0.0 {
                    failures.push(IfsFailure::Overlap {
                        i: i + 1,
                        j: j + 1,
                        distance,
                    });
                }
            }
        }
        let gap = if self.maps.len() < 2 { 0.0 } else { self.gap() };
        IfsReport {
            valid: failures.is_empty(),
            gap,
            ratios: self.ratios(),
            failures,
        }
    }

    fn check_word(&self, w: &SymbolWord) -> Result<()> {
        if w.m() != self.m() {
            return Err(Error::AlphabetMismatch {
                left: w.m(),
                right: self.m(),
            });
        }
        Ok(())
    }

    /// `S_{a_0} ∘ S_{a_1} ∘ … ∘ S_{a_k}(K)`. Longer prefixes of a sequence
    /// give nested intervals shrinking to the coded point.
    pub fn code_point(&self, w: &SymbolWord) -> Result<Interval<f64>> {
        self.check_word(w)?;
        Ok(w.symbols().iter().rev().fold(self.seed.clone(), |k, &a| {
            self.maps[a as usize - 1].image(&k)
        }))
    }

    /// Inverse of the similarity whose image contains `x`: the expanding
    /// dynamics on the attractor.
    pub fn expand(&self, x: f64) -> Option<(usize, f64)> {
        self.maps
            .iter()
            .enumerate()
            .find(|(_, s)| s.image(&self.seed).contains(&x))
            .map(|(i, s)| (i + 1, s.invert(x)))
    }
}

/// Solution of a Moran equation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MoranRoot {
    pub p: f64,
    pub residual: f64,
    pub bracket: [f64; 2],
    pub iterations: usize,
}

fn moran_sum(ratios: &[f64], p: f64) -> f64 {
    ratios.iter().map(|c| c.powf(p)).sum()
}

/// The unique `p >= 0` with `Σ c_i^p = 1`.
///
/// Bisection on the strictly decreasing left side over
/// `[0, ln m / ln(1/max c_i)]`; at the upper end every term is at most
/// `1/m`. Stops once the bracket is narrower than `tol` and the residual is
/// at most `tol`.
pub fn moran_root(ratios: &[f64], tol: f64) -> Result<MoranRoot> {
    if ratios.len() < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 ratios, got {}",
            ratios.len()
        )));
    }
    if let Some(c) = ratios.iter().find(|&&c| !(c > 0.0 && c < 1.0)) {
        return Err(Error::Domain(format!("ratio {c} outside (0, 1)")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let c_max = ratios.iter().copied().fold(0.0, f64::max);
    let upper = (ratios.len() as f64).ln() / (1.0 / c_max).ln();
    let bracket = [0.0, upper];
    let (mut lo, mut hi) = (0.0, upper);
    let mut iterations = 0;
    let mut p = 0.5 * (lo + hi);
    let mut g = moran_sum(ratios, p) - 1.0;
    while iterations < BISECTION_CAP && (hi - lo > tol || g.abs() > tol) {
        if g == 0.0 {
            break;
        }
        if g > 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        p = 0.5 * (lo + hi);
        g = moran_sum(ratios, p) - 1.0;
        iterations += 1;
    }
    if g.abs() > tol {
        return Err(Error::NonConvergence {
            iterations,
            last: p,
        });
    }
    Ok(MoranRoot {
        p,
        residual: g,
        bracket,
        iterations,
    })
}

/// Ratios `(1/λ_1, 1/(λ_1 λ_2), …, 1/(λ_1 λ_m))` of the first-return
/// decomposition of a strict star map.
pub fn star_ratios(lambdas: &[f64]) -> Result<Vec<f64>> {
    if lambdas.len() < 2 {
        return Err(Error::Domain(format!(
            "need at least 2 slopes, got {}",
            lambdas.len()
        )));
    }
    if let Some(l) = lambdas.iter().find(|&&l| !(l > 1.0 && l.is_finite())) {
        return Err(Error::Domain(format!("slope {l} must exceed 1")));
    }
    let l1 = lambdas[0];
    Ok(std::iter::once(1.0 / l1)
        .chain(lambdas[1..].iter().map(|l| 1.0 / (l1 * l)))
        .collect())
}

/// Root of `(1/λ_1)^p + Σ_{i≥2} (1/(λ_1 λ_i))^p = 1`.
pub fn moran_root_star(lambdas: &[f64], tol: f64) -> Result<MoranRoot> {
    moran_root(&star_ratios(lambdas)?, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// `Π c_{w_j}`
    Plain,
    /// `Π c'_{w_j}` with `c'_1 = c_1` and `c'_i = c_i / c_1` otherwise.
    Primed,
}

/// A positive quantity carried in log and linear form. `value` may underflow
/// to zero; `ln` stays exact to rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Weight {
    pub ln: f64,
    pub value: f64,
}

impl Weight {
    fn from_ln(ln: f64) -> Self {
        Self {
            ln,
            value: ln.exp(),
        }
    }
}

fn check_ratios<T: Scalar>(w: &SymbolWord, ratios: &[T]) -> Result<()> {
    if w.m() != ratios.len() {
        return Err(Error::AlphabetMismatch {
            left: w.m(),
            right: ratios.len(),
        });
    }
    if let Some(c) = ratios.iter().find(|c| !(**c > T::zero() && **c < T::one())) {
        return Err(Error::Domain(format!("ratio {c} outside (0, 1)")));
    }
    Ok(())
}

pub fn cylinder_weight(w: &SymbolWord, ratios: &[f64], mode: WeightMode) -> Result<Weight> {
    check_ratios(w, ratios)?;
    let logs: Vec<f64> = ratios.iter().map(|c| c.ln()).collect();
    let ln = w
        .symbols()
        .iter()
        .map(|&a| {
            let i = a as usize - 1;
            match mode {
                WeightMode::Primed if i != 0 => logs[i] - logs[0],
                _ => logs[i],
            }
        })
        .sum();
    Ok(Weight::from_ln(ln))
}

/// [`cylinder_weight`] in the scalar's own arithmetic; exact for rationals.
pub fn cylinder_weight_exact<T: Scalar>(
    w: &SymbolWord,
    ratios: &[T],
    mode: WeightMode,
) -> Result<T> {
    check_ratios(w, ratios)?;
    Ok(w.symbols().iter().fold(T::one(), |acc, &a| {
        let i = a as usize - 1;
        let c = match mode {
            WeightMode::Primed if i != 0 => ratios[i].clone() / ratios[0].clone(),
            _ => ratios[i].clone(),
        };
        acc * c
    }))
}

/// `ν([w]) = Π c_{w_j}^D` for the Bernoulli measure with weights `c_i^D`.
pub fn bernoulli_cylinder_mass(w: &SymbolWord, ratios: &[f64], dimension: f64) -> Result<Weight> {
    check_ratios(w, ratios)?;
    let total = moran_sum(ratios, dimension);
    if (total - 1.0).abs() > MASS_CONSISTENCY {
        return Err(Error::Consistency(format!(
            "probability vector c_i^D sums to {total}, not 1"
        )));
    }
    let plain = cylinder_weight(w, ratios, WeightMode::Plain)?;
    Ok(Weight::from_ln(dimension * plain.ln))
}
