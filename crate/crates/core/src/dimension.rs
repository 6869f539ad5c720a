//! Box-counting estimates over basic-set covers.
//!
//! Box dimension stands in for Hausdorff dimension. For the self-similar
//! sets with gaps produced here the two agree, which is a classical fact and
//! not something this module checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expanding::PiecewiseExpandingMap;
use crate::ifs::MoranRoot;
use crate::numeric::{Interval, Scalar};

/// Endpoints within this many box widths of a grid line are snapped to it.
const GRID_SLACK: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoxCount {
    pub count: usize,
    /// `ε` exceeded the domain length; the count was clamped to one box.
    pub coarse: bool,
}

/// Number of grid boxes `[lo + kε, lo + (k+1)ε)` anchored at the domain's
/// left endpoint whose interior meets some interval. Endpoints within
/// `1e-6·ε` of a grid line are snapped to it, so an interval that only
/// touches a box at its boundary does not count it.
pub fn box_count(
    intervals: &[Interval<f64>],
    eps: f64,
    domain: &Interval<f64>,
) -> Result<BoxCount> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!(
            "box size must be positive, got {eps}"
        )));
    }
    if intervals.is_empty() {
        return Ok(BoxCount {
            count: 0,
            coarse: false,
        });
    }
    if eps > domain.len() {
        log::warn!("box size {eps} exceeds the domain length {}", domain.len());
        return Ok(BoxCount {
            count: 1,
            coarse: true,
        });
    }
    let snap = |x: f64| {
        let r = x.round();
        if (x - r).abs() <= GRID_SLACK {
            r
        } else {
            x
        }
    };
    let mut ranges: Vec<(i64, i64)> = intervals
        .iter()
        .map(|iv| {
            let a = snap((iv.lo - domain.lo) / eps);
            let b = snap((iv.hi - domain.lo) / eps);
            let first = a.floor() as i64;
            let last = (b.ceil() as i64 - 1).max(first);
            (first, last)
        })
        .collect();
    ranges.sort_unstable();
    let mut count = 0i64;
    let mut covered_to = i64::MIN;
    for (first, last) in ranges {
        let start = first.max(covered_to.saturating_add(1));
        if last >= start {
            count += last - start + 1;
        }
        covered_to = covered_to.max(last);
    }
    Ok(BoxCount {
        count: count as usize,
        coarse: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scale {
    pub depth: usize,
    pub epsilon: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in `ln N`.
    pub residual: f64,
    pub scales: Vec<Scale>,
}

/// Unweighted least squares of `ln N` against `ln(1/ε)`.
pub fn fit_scales(scales: Vec<Scale>) -> Result<DimensionEstimate> {
    if scales.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 scales, got {}",
            scales.len()
        )));
    }
    if let Some(s) = scales.iter().find(|s| s.count == 0) {
        return Err(Error::DegenerateFit(format!(
            "empty cover at depth {}",
            s.depth
        )));
    }
    let xs: Vec<f64> = scales.iter().map(|s| -s.epsilon.ln()).collect();
    let ys: Vec<f64> = scales.iter().map(|s| (s.count as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= f64::EPSILON * n * mx.abs().max(1.0) {
        return Err(Error::DegenerateFit("all scales coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(DimensionEstimate {
        slope,
        intercept,
        residual: (sse / n).sqrt(),
        scales,
    })
}

/// Box-counts the depth-`n` basic-set cover at `ε = diam(D)/(min λ)^n` for
/// each depth and fits the slope.
pub fn estimate_dimension<T: Scalar>(
    f: &PiecewiseExpandingMap<T>,
    depths: impl IntoIterator<Item = usize>,
    budget: usize,
) -> Result<DimensionEstimate> {
    let domain = f.domain().to_f64();
    let diam = domain.len();
    let min_lambda = f.min_lambda().to_f64();
    let mut scales = Vec::new();
    for depth in depths {
        let cover: Vec<Interval<f64>> = f
            .limit_set_cover(depth, budget)?
            .into_iter()
            .map(|b| b.interval.to_f64())
            .collect();
        let epsilon = diam / min_lambda.powi(depth as i32);
        let count = box_count(&cover, epsilon, &domain)?.count;
        scales.push(Scale {
            depth,
            epsilon,
            count,
        });
    }
    fit_scales(scales)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MoranComparison {
    pub slope: f64,
    pub moran_root: f64,
    /// `slope − p`
    pub gap: f64,
    pub tol: f64,
    pub pass: bool,
    /// Dimension of the Li-Yorke pair set, `2p`.
    pub ly_dimension: f64,
}

pub fn compare_to_moran(est: &DimensionEstimate, root: &MoranRoot, tol: f64) -> MoranComparison {
    let gap = est.slope - root.p;
    MoranComparison {
        slope: est.slope,
        moran_root: root.p,
        gap,
        tol,
        pass: gap.abs() <= tol,
        ly_dimension: 2.0 * root.p,
    }
}
