//! Strictly A-coupled-expanding piecewise-affine interval maps.
//!
//! A map has `m` pairwise separated pieces `V_i`, each carried affinely with
//! slope `±λ_i` (`λ_i > 1`) onto an interval covering every `V_j` allowed by
//! row `i` of the transition matrix. Basic sets `Δ_{a_0…a_n}` are computed by
//! pulling `V_{a_n}` back through the inverse branches.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ifs::{moran_root, moran_root_star, MoranRoot};
use crate::matrix::TransitionMatrix;
use crate::numeric::{Interval, Scalar};
use crate::symbolic::{Symbol, SymbolWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match String::deserialize(d)?.as_str() {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            other => Err(serde::de::Error::custom(format!(
                "sign must be \"+\" or \"-\", got {other:?}"
            ))),
        }
    }
}

/// One affine piece `x ↦ ±λ·x + offset` on `interval`.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch<T> {
    pub interval: Interval<T>,
    pub lambda: T,
    pub sign: Sign,
    pub offset: T,
}

impl<T: Scalar> Branch<T> {
    fn slope(&self) -> T {
        match self.sign {
            Sign::Plus => self.lambda.clone(),
            Sign::Minus => -self.lambda.clone(),
        }
    }

    pub fn apply(&self, x: &T) -> T {
        self.slope() * x.clone() + self.offset.clone()
    }

    pub fn invert(&self, y: &T) -> T {
        (y.clone() - self.offset.clone()) / self.slope()
    }

    /// `f(V_i)`
    pub fn image(&self) -> Interval<T> {
        Interval::spanning(self.apply(&self.interval.lo), self.apply(&self.interval.hi))
    }

    /// `(f|_{V_i})^{-1}(J)` without intersecting with `V_i`.
    pub fn preimage(&self, j: &Interval<T>) -> Interval<T> {
        Interval::spanning(self.invert(&j.lo), self.invert(&j.hi))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseExpandingMap<T> {
    domain: Interval<T>,
    branches: Vec<Branch<T>>,
    matrix: TransitionMatrix,
}

/// `Δ_{a_0…a_n} = ⋂_j f^{-j}(V_{a_j})`
#[derive(Clone, Debug, PartialEq)]
pub struct BasicSet<T> {
    pub word: SymbolWord,
    pub interval: Interval<T>,
}

fn check_lengths(m: usize, what: &str, len: usize) -> Result<()> {
    if len != m {
        return Err(Error::Domain(format!(
            "{what} has {len} entries, matrix has m = {m}"
        )));
    }
    Ok(())
}

impl<T: Scalar> PiecewiseExpandingMap<T> {
    /// Builds the map whose branch `i` has slope `±λ_i` and whose image is
    /// centred on the hull of `⋃_{(A)_{ij}=1} V_j`.
    pub fn synthesize(
        matrix: TransitionMatrix,
        domain: Interval<T>,
        layout: Vec<Interval<T>>,
        lambdas: Vec<T>,
        signs: Vec<Sign>,
    ) -> Result<Self> {
        let m = matrix.m();
        check_lengths(m, "layout", layout.len())?;
        check_lengths(m, "lambdas", lambdas.len())?;
        check_lengths(m, "signs", signs.len())?;
        for (i, v) in layout.iter().enumerate() {
            if v.lo >= v.hi {
                return Err(Error::Domain(format!(
                    "piece {} = {v} has no interior",
                    i + 1
                )));
            }
            if !v.is_subset_of(&domain) {
                return Err(Error::Domain(format!(
                    "piece {} = {v} is not inside {domain}",
                    i + 1
                )));
            }
        }
        if let Some(l) = lambdas.iter().find(|l| **l <= T::one()) {
            return Err(Error::Domain(format!("slope {l} must exceed 1")));
        }
        for i in 0..m {
            for j in i + 1..m {
                let gap = layout[i].distance(&layout[j]);
                if gap <= T::zero() {
                    return Err(Error::Separation {
                        i: i + 1,
                        j: j + 1,
                        gap: gap.to_f64(),
                    });
                }
            }
        }
        let two = T::one() + T::one();
        let mut branches = Vec::with_capacity(m);
        for i in 0..m {
            let required = required_hull(&matrix, &layout, i);
            let span = required.len();
            let image_len = lambdas[i].clone() * layout[i].len();
            if image_len < span.clone() - T::slack() {
                return Err(Error::Infeasible {
                    row: i + 1,
                    min_lambda: (span / layout[i].len()).to_f64(),
                });
            }
            let centre = required.midpoint();
            let half = image_len / two.clone();
            let lo = layout[i].lo.clone();
            let offset = match signs[i] {
                Sign::Plus => centre - half - lambdas[i].clone() * lo,
                Sign::Minus => centre + half + lambdas[i].clone() * lo,
            };
            branches.push(Branch {
                interval: layout[i].clone(),
                lambda: lambdas[i].clone(),
                sign: signs[i],
                offset,
            });
        }
        Ok(Self {
            domain,
            branches,
            matrix,
        })
    }

    /// Wraps explicit branches without checking the covering relation; use
    /// [`verify`](Self::verify) to audit the result.
    pub fn from_branches(
        matrix: TransitionMatrix,
        domain: Interval<T>,
        branches: Vec<Branch<T>>,
    ) -> Result<Self> {
        check_lengths(matrix.m(), "branches", branches.len())?;
        Ok(Self {
            domain,
            branches,
            matrix,
        })
    }

    pub fn domain(&self) -> &Interval<T> {
        &self.domain
    }

    pub fn branches(&self) -> &[Branch<T>] {
        &self.branches
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    pub fn m(&self) -> usize {
        self.matrix.m()
    }

    pub fn piece(&self, i: Symbol) -> &Interval<T> {
        &self.branches[i as usize - 1].interval
    }

    pub fn min_lambda(&self) -> T {
        self.branches
            .iter()
            .map(|b| b.lambda.clone())
            .reduce(|a, b| if b < a { b } else { a })
            .expect("m >= 2")
    }

    pub fn lambdas(&self) -> Vec<T> {
        self.branches.iter().map(|b| b.lambda.clone()).collect()
    }

    /// Index (1-based) of the piece containing `x`. Pieces are closed.
    pub fn piece_of(&self, x: &T) -> Option<Symbol> {
        self.branches
            .iter()
            .position(|b| b.interval.contains(x))
            .map(|i| (i + 1) as Symbol)
    }

    pub fn apply(&self, x: &T) -> Option<T> {
        self.piece_of(x)
            .map(|i| self.branches[i as usize - 1].apply(x))
    }

    /// `S_i(J) = (f|_{V_i})^{-1}(J)`.
    pub fn inverse_branch(&self, i: Symbol, j: &Interval<T>) -> Interval<T> {
        self.branches[i as usize - 1].preimage(j)
    }

    pub fn verify(&self) -> VerifyReport {
        let m = self.m();
        let pieces: Vec<&Interval<T>> = self.branches.iter().map(|b| &b.interval).collect();
        let covering: Vec<CoverCheck> = (0..m)
            .map(|i| {
                let image = self.branches[i].image();
                let targets: Vec<usize> = (0..m)
                    .filter(|&j| self.matrix.entry((i + 1) as Symbol, (j + 1) as Symbol))
                    .collect();
                let ok = targets.iter().all(|&j| pieces[j].is_subset_of(&image));
                let required = required_hull(
                    &self.matrix,
                    &self
                        .branches
                        .iter()
                        .map(|b| b.interval.clone())
                        .collect::<Vec<_>>(),
                    i,
                );
                CoverCheck {
                    row: i + 1,
                    image: image.to_f64(),
                    required: required.to_f64(),
                    ok,
                }
            })
            .collect();
        let mut gaps = Vec::new();
        let mut interiors_disjoint = true;
        for i in 0..m {
            for j in i + 1..m {
                let gap = pieces[i].distance(pieces[j]);
                let overlap = pieces[i].intersect(pieces[j]).is_some_and(|o| o.lo < o.hi);
                interiors_disjoint &= !overlap;
                gaps.push(GapCheck {
                    i: i + 1,
                    j: j + 1,
                    gap: gap.to_f64(),
                    ok: gap > T::zero(),
                });
            }
        }
        let expansion: Vec<ExpansionCheck> = self
            .branches
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let v = &b.interval;
                let measured = if v.lo < v.hi {
                    ((b.apply(&v.hi) - b.apply(&v.lo)) / v.len()).abs()
                } else {
                    T::zero()
                };
                let ok = b.lambda > T::one()
                    && (measured.clone() - b.lambda.clone()).abs() <= T::slack();
                ExpansionCheck {
                    branch: i + 1,
                    lambda: b.lambda.to_f64(),
                    measured: measured.to_f64(),
                    ok,
                }
            })
            .collect();
        let within_domain = pieces.iter().all(|p| p.is_subset_of(&self.domain));
        let strictly_separated = gaps.iter().all(|g| g.ok);
        let branching_row = self.matrix.branching_row();
        let irreducible = self.matrix.is_irreducible();
        let passed = covering.iter().all(|c| c.ok)
            && strictly_separated
            && expansion.iter().all(|e| e.ok)
            && within_domain
            && branching_row.is_some()
            && irreducible;
        VerifyReport {
            exact: T::is_exact(),
            covering,
            gaps,
            expansion,
            within_domain,
            interiors_disjoint,
            strictly_separated,
            branching_row,
            irreducible,
            passed,
        }
    }

    /// Pulls `V_{a_n}` back through `(f|_{V_{a_j}})^{-1}`, intersecting with
    /// `V_{a_j}` at each step.
    pub fn basic_set(&self, w: &SymbolWord) -> Result<BasicSet<T>> {
        w.ensure_admissible(&self.matrix)?;
        let symbols = w.symbols();
        let mut current = self.piece(w.last()).clone();
        for &a in symbols[..symbols.len() - 1].iter().rev() {
            let pulled = self.inverse_branch(a, &current);
            current = pulled
                .intersect(self.piece(a))
                .ok_or_else(|| Error::EmptyIntersection {
                    word: w.to_string(),
                })?;
        }
        if current.lo >= current.hi {
            return Err(Error::Consistency(format!(
                "basic set of {w} is the single point {}",
                current.lo
            )));
        }
        Ok(BasicSet {
            word: w.clone(),
            interval: current,
        })
    }

    /// Midpoint of the basic set of `w`, a point whose itinerary starts with `w`.
    pub fn code_to_point(&self, w: &SymbolWord) -> Result<T> {
        Ok(self.basic_set(w)?.interval.midpoint())
    }

    /// All basic sets for admissible words of length `depth`.
    pub fn limit_set_cover(&self, depth: usize, budget: usize) -> Result<Vec<BasicSet<T>>> {
        if depth == 0 {
            return Err(Error::Domain("cover depth must be at least 1".into()));
        }
        self.matrix
            .enumerate_admissible_words(depth, budget)?
            .iter()
            .map(|w| self.basic_set(w))
            .collect()
    }

    /// Itinerary `(a_0, …, a_steps)` of `x`, with `f^j(x) ∈ V_{a_j}`.
    pub fn code_orbit(&self, x: &T, steps: usize) -> Result<SymbolWord> {
        let mut symbols: Vec<Symbol> = Vec::with_capacity(steps + 1);
        let mut point = x.clone();
        for step in 0..=steps {
            let Some(a) = self.piece_of(&point) else {
                return Err(Error::Escape {
                    step,
                    point: point.to_f64(),
                    reason: "outside every piece".into(),
                });
            };
            if let Some(&prev) = symbols.last() {
                if !self.matrix.entry(prev, a) {
                    return Err(Error::Escape {
                        step,
                        point: point.to_f64(),
                        reason: format!("transition {prev} -> {a} is not allowed by the matrix"),
                    });
                }
            }
            symbols.push(a);
            if step < steps {
                point = self.branches[a as usize - 1].apply(&point);
            }
        }
        SymbolWord::new(self.m(), symbols)
    }

    /// Root of the Moran equation attached to this map: the plain equation
    /// for the full shift, the first-return equation for a strict star at
    /// symbol 1.
    pub fn moran_root(&self, tol: f64) -> Result<MoranRoot> {
        let lambdas: Vec<f64> = self.branches.iter().map(|b| b.lambda.to_f64()).collect();
        if self.matrix.is_full() {
            let ratios: Vec<f64> = lambdas.iter().map(|l| 1.0 / l).collect();
            moran_root(&ratios, tol)
        } else if self.matrix.is_star(1, true) {
            moran_root_star(&lambdas, tol)
        } else {
            Err(Error::Domain(format!(
                "no Moran equation for matrix {}: need the full shift or a strict star",
                self.matrix
            )))
        }
    }

    pub fn to_f64(&self) -> PiecewiseExpandingMap<f64> {
        PiecewiseExpandingMap {
            domain: self.domain.to_f64(),
            branches: self
                .branches
                .iter()
                .map(|b| Branch {
                    interval: b.interval.to_f64(),
                    lambda: b.lambda.to_f64(),
                    sign: b.sign,
                    offset: b.offset.to_f64(),
                })
                .collect(),
            matrix: self.matrix.clone(),
        }
    }

    pub fn from_spec(spec: &MapSpec) -> Result<Self> {
        let matrix: TransitionMatrix = spec.matrix.parse()?;
        let parse_iv = |v: &[NumText; 2]| -> Result<Interval<T>> {
            Interval::new(T::parse_text(&v[0].0)?, T::parse_text(&v[1].0)?)
        };
        let domain = parse_iv(&spec.domain)?;
        let explicit = spec.branches.iter().filter(|b| b.offset.is_some()).count();
        if explicit == 0 {
            let layout = spec
                .branches
                .iter()
                .map(|b| parse_iv(&b.interval))
                .collect::<Result<Vec<_>>>()?;
            let lambdas = spec
                .branches
                .iter()
                .map(|b| T::parse_text(&b.lambda.0))
                .collect::<Result<Vec<_>>>()?;
            let signs = spec.branches.iter().map(|b| b.sign).collect();
            Self::synthesize(matrix, domain, layout, lambdas, signs)
        } else if explicit == spec.branches.len() {
            let branches = spec
                .branches
                .iter()
                .map(|b| {
                    Ok(Branch {
                        interval: parse_iv(&b.interval)?,
                        lambda: T::parse_text(&b.lambda.0)?,
                        sign: b.sign,
                        offset: T::parse_text(&b.offset.as_ref().expect("counted").0)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Self::from_branches(matrix, domain, branches)
        } else {
            Err(Error::Parse(
                "either every branch gives an offset or none does".into(),
            ))
        }
    }

    pub fn to_spec(&self) -> MapSpec {
        let iv = |v: &Interval<T>| [NumText(v.lo.to_string()), NumText(v.hi.to_string())];
        MapSpec {
            domain: iv(&self.domain),
            matrix: self.matrix.to_string(),
            branches: self
                .branches
                .iter()
                .map(|b| BranchSpec {
                    interval: iv(&b.interval),
                    lambda: NumText(b.lambda.to_string()),
                    sign: b.sign,
                    offset: Some(NumText(b.offset.to_string())),
                })
                .collect(),
        }
    }
}

fn required_hull<T: Scalar>(
    matrix: &TransitionMatrix,
    layout: &[Interval<T>],
    row: usize,
) -> Interval<T> {
    (0..matrix.m())
        .filter(|&j| matrix.entry((row + 1) as Symbol, (j + 1) as Symbol))
        .map(|j| layout[j].clone())
        .reduce(|a, b| a.hull(&b))
        .expect("every row has a one")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverCheck {
    pub row: usize,
    pub image: Interval<f64>,
    /// Hull of the pieces row `row` must cover.
    pub required: Interval<f64>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapCheck {
    pub i: usize,
    pub j: usize,
    pub gap: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionCheck {
    pub branch: usize,
    pub lambda: f64,
    pub measured: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub exact: bool,
    pub covering: Vec<CoverCheck>,
    pub gaps: Vec<GapCheck>,
    pub expansion: Vec<ExpansionCheck>,
    pub within_domain: bool,
    /// Plain coupled-expanding condition; informational only.
    pub interiors_disjoint: bool,
    pub strictly_separated: bool,
    pub branching_row: Option<usize>,
    pub irreducible: bool,
    pub passed: bool,
}

/// A number kept as its decimal or fractional text so it can be read back
/// exactly. Deserializes from a JSON number or string.
#[derive(Clone, PartialEq, Eq)]
pub struct NumText(pub String);

impl fmt::Debug for NumText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for NumText {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for NumText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = NumText;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a numeric string")
            }
            fn visit_u64<E>(self, v: u64) -> std::result::Result<NumText, E> {
                Ok(NumText(v.to_string()))
            }
            fn visit_i64<E>(self, v: i64) -> std::result::Result<NumText, E> {
                Ok(NumText(v.to_string()))
            }
            // shortest round-trip text recovers the literal as written
            fn visit_f64<E>(self, v: f64) -> std::result::Result<NumText, E> {
                Ok(NumText(format!("{v:?}")))
            }
            fn visit_str<E>(self, v: &str) -> std::result::Result<NumText, E> {
                Ok(NumText(v.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

/// JSON form of a map:
/// `{ "domain": [lo, hi], "matrix": "1,1;1,1", "branches": [ { "interval": [a, b], "lambda": l, "sign": "+" } ] }`.
/// Without offsets the branches are synthesized; with offsets on every
/// branch they are taken as given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub domain: [NumText; 2],
    pub matrix: String,
    pub branches: Vec<BranchSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchSpec {
    pub interval: [NumText; 2],
    pub lambda: NumText,
    pub sign: Sign,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<NumText>,
}

/// The three reference maps used throughout the tests and examples.
pub mod examples {
    use super::*;

    fn r<T: Scalar>(n: i64, d: i64) -> T {
        T::from_ratio(n, d)
    }

    fn iv<T: Scalar>(a: (i64, i64), b: (i64, i64)) -> Interval<T> {
        Interval {
            lo: r(a.0, a.1),
            hi: r(b.0, b.1),
        }
    }

    /// `3x` on `[0, 1/3]`, `3x - 2` on `[2/3, 1]`.
    pub fn middle_thirds<T: Scalar>() -> PiecewiseExpandingMap<T> {
        PiecewiseExpandingMap::synthesize(
            TransitionMatrix::full(2).expect("valid"),
            iv((0, 1), (1, 1)),
            vec![iv((0, 1), (1, 3)), iv((2, 3), (1, 1))],
            vec![r(3, 1), r(3, 1)],
            vec![Sign::Plus, Sign::Plus],
        )
        .expect("feasible")
    }

    /// Full shift with slopes 2 and 4 on `[0, 1/2]` and `[3/4, 1]`.
    pub fn two_four<T: Scalar>() -> PiecewiseExpandingMap<T> {
        PiecewiseExpandingMap::synthesize(
            TransitionMatrix::full(2).expect("valid"),
            iv((0, 1), (1, 1)),
            vec![iv((0, 1), (1, 2)), iv((3, 4), (1, 1))],
            vec![r(2, 1), r(4, 1)],
            vec![Sign::Plus, Sign::Plus],
        )
        .expect("feasible")
    }

    /// Strict star `[[1,1],[1,0]]` with slopes `20/9`, `2` on
    /// `[0, 0.45]`, `[0.55, 1]`.
    pub fn star_two<T: Scalar>() -> PiecewiseExpandingMap<T> {
        PiecewiseExpandingMap::synthesize(
            TransitionMatrix::star(2, true).expect("valid"),
            iv((0, 1), (1, 1)),
            vec![iv((0, 1), (9, 20)), iv((11, 20), (1, 1))],
            vec![r(20, 9), r(2, 1)],
            vec![Sign::Plus, Sign::Plus],
        )
        .expect("feasible")
    }
}
