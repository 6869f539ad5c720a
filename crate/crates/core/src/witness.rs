//! Li-Yorke witness sequences for star subshifts.
//!
//! Given a base sequence `s` and gap lengths `N_0, N_1, …`, the witness `t`
//! is laid out in blocks starting at the sync positions
//! `u_0 = 0`, `u_1 = N_0 + 5`, `u_{i+1} = u_i + N_i + i + 6`. Block `i` is
//!
//! ```text
//! s[u_i ..= u_i+i]  1  flip(s[u_i+i+2])  1  payload…  1
//! ```
//!
//! so `t` agrees with `s` on a growing window at every `u_i` and differs
//! from it within two symbols of `u_i + i + 1`. Every position not pinned by
//! the template takes the next payload symbol. Block 0 has `N_0` payload
//! slots and block `i >= 1` has `N_i + 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expanding::PiecewiseExpandingMap;
use crate::ifs::{
    bernoulli_cylinder_mass, cylinder_weight, moran_root, SimilarityIFS, WeightMode, DEFAULT_TOL,
};
use crate::matrix::TransitionMatrix;
use crate::numeric::Scalar;
use crate::symbolic::{
    first_forbidden, metric, phi_inverse_word, phi_word, shift, Provenance, Symbol, SymbolStream,
    SymbolWord,
};

const MAX_SCHEDULE_SCAN: usize = 1 << 20;

/// Cyclic successor on `{1..m}`; never equal to `a`.
pub fn flip(a: Symbol, m: usize) -> Symbol {
    (1 + (a as usize % m)) as Symbol
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapSequence {
    /// `N_n = n^k`
    Power(u32),
    /// `N_n = c`
    Constant(u64),
    /// `N_n` listed explicitly; indices past the end are an error.
    Explicit(Vec<u64>),
}

/// Gap lengths `N_n` and the derived sync positions `u_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSchedule {
    gaps: GapSequence,
}

impl Default for WitnessSchedule {
    /// `N_n = n²`
    fn default() -> Self {
        Self::power(2)
    }
}

impl WitnessSchedule {
    pub fn new(gaps: GapSequence) -> Self {
        Self { gaps }
    }

    pub fn power(k: u32) -> Self {
        Self::new(GapSequence::Power(k))
    }

    pub fn constant(c: u64) -> Self {
        Self::new(GapSequence::Constant(c))
    }

    pub fn explicit(gaps: Vec<u64>) -> Self {
        Self::new(GapSequence::Explicit(gaps))
    }

    /// Accepts `n^k`, a single integer (constant), or a comma separated
    /// explicit list.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || {
            Error::Parse(format!(
                "bad schedule {text:?}: expected n^k, a constant, or a list"
            ))
        };
        if let Some(k) = t.strip_prefix("n^") {
            return Ok(Self::power(k.trim().parse().map_err(|_| bad())?));
        }
        if t.contains(',') {
            let gaps = t
                .split(',')
                .map(|g| g.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::explicit(gaps));
        }
        Ok(Self::constant(t.parse().map_err(|_| bad())?))
    }

    pub fn gaps(&self) -> &GapSequence {
        &self.gaps
    }

    /// `N_n`
    pub fn gap(&self, n: usize) -> Result<usize> {
        let value = match &self.gaps {
            GapSequence::Power(k) => (n as u64).checked_pow(*k),
            GapSequence::Constant(c) => Some(*c),
            GapSequence::Explicit(list) => Some(*list.get(n).ok_or_else(|| {
                Error::Domain(format!(
                    "explicit schedule has {} entries, N_{n} requested",
                    list.len()
                ))
            })?),
        };
        value
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| Error::Domain(format!("N_{n} overflows")))
    }

    /// `u_i`
    pub fn sync(&self, i: usize) -> Result<usize> {
        let mut u = 0usize;
        for n in 0..i {
            let step = if n == 0 { 5 } else { n + 6 };
            u = u
                .checked_add(self.gap(n)?)
                .and_then(|u| u.checked_add(step))
                .ok_or_else(|| Error::Domain(format!("u_{i} overflows")))?;
        }
        Ok(u)
    }

    /// `u_0, …, u_{count-1}`
    pub fn sync_positions(&self, count: usize) -> Result<Vec<usize>> {
        (0..count).map(|i| self.sync(i)).collect()
    }

    /// Number of payload slots in block `i`.
    pub fn capacity(&self, i: usize) -> Result<usize> {
        Ok(self.gap(i)? + usize::from(i > 0))
    }

    /// First payload slot of block `i`.
    fn payload_start(&self, i: usize) -> Result<usize> {
        Ok(self.sync(i)? + i + 4)
    }

    /// `(M+6)² / Σ_{n<M} N_n`, or `None` while the sum is zero. Must tend to
    /// zero for the embedding to carry full dimension.
    pub fn vanishing_ratio(&self, big_m: usize) -> Result<Option<f64>> {
        let mut sum = 0f64;
        for n in 0..big_m {
            sum += self.gap(n)? as f64;
        }
        let top = ((big_m + 6) * (big_m + 6)) as f64;
        Ok((sum > 0.0).then(|| top / sum))
    }

    /// Template position of payload symbol `j`.
    pub fn payload_position(&self, j: usize) -> Result<usize> {
        let mut before = 0usize;
        for block in 0..MAX_SCHEDULE_SCAN {
            let cap = self.capacity(block)?;
            if j < before + cap {
                return Ok(self.payload_start(block)? + (j - before));
            }
            before += cap;
        }
        Err(Error::Domain(format!(
            "schedule never reaches payload symbol {j}"
        )))
    }

    /// Slot kinds for positions `0..horizon`.
    pub fn layout(&self, horizon: usize) -> Result<Vec<Slot>> {
        let mut slots = Vec::with_capacity(horizon);
        let mut payload = 0usize;
        let mut block = 0usize;
        while slots.len() < horizon {
            let u = slots.len();
            let next = self.sync(block + 1)?;
            for p in u..next {
                let offset = p - u;
                let slot = if offset <= block {
                    Slot::Copy
                } else if offset == block + 2 {
                    Slot::Flip
                } else if offset == block + 1 || offset == block + 3 || p == next - 1 {
                    Slot::One
                } else {
                    payload += 1;
                    Slot::Payload(payload - 1)
                };
                slots.push(slot);
            }
            block += 1;
        }
        slots.truncate(horizon);
        Ok(slots)
    }
}

/// What the witness template puts at a position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// `t_p = s_p`
    Copy,
    /// `t_p = 1`
    One,
    /// `t_p = flip(s_p)`
    Flip,
    /// `t_p` is payload symbol `j`
    Payload(usize),
}

fn check_inputs(s: &SymbolStream, a: &TransitionMatrix, payload: &SymbolStream) -> Result<()> {
    for m in [s.m(), payload.m()] {
        if m != a.m() {
            return Err(Error::AlphabetMismatch {
                left: m,
                right: a.m(),
            });
        }
    }
    s.ensure_admissible(a)?;
    payload.ensure_admissible(a)
}

fn fill(
    s: &SymbolStream,
    sched: &WitnessSchedule,
    payload: &SymbolStream,
    stop_on_exhausted_payload: bool,
) -> Result<Vec<Symbol>> {
    let m = s.m();
    let mut out = Vec::with_capacity(s.horizon());
    for (p, slot) in sched.layout(s.horizon())?.into_iter().enumerate() {
        let symbol = match slot {
            Slot::Copy => s.get(p)?,
            Slot::One => 1,
            Slot::Flip => flip(s.get(p)?, m),
            Slot::Payload(j) => match payload.get(j) {
                Ok(x) => x,
                Err(_) if stop_on_exhausted_payload => break,
                Err(_) => return Err(Error::PayloadExhausted { position: p }),
            },
        };
        out.push(symbol);
    }
    Ok(out)
}

fn admissible_output(
    m: usize,
    symbols: Vec<Symbol>,
    a: &TransitionMatrix,
    provenance: Provenance,
) -> Result<SymbolStream> {
    if let Some(p) = first_forbidden(&symbols, a) {
        return Err(Error::NotAdmissible {
            position: p,
            from: symbols[p] as usize,
            to: symbols[p + 1] as usize,
        });
    }
    SymbolStream::with_provenance(m, symbols, provenance)
}

/// A member of the witness set of `s`, with the same horizon as `s`; free
/// positions are taken from `payload` in order.
pub fn build_witness(
    s: &SymbolStream,
    sched: &WitnessSchedule,
    a: &TransitionMatrix,
    payload: &SymbolStream,
) -> Result<SymbolStream> {
    check_inputs(s, a, payload)?;
    let symbols = fill(s, sched, payload, false)?;
    admissible_output(s.m(), symbols, a, Provenance::BuiltByWitness)
}

/// The injection `t ↦ pr(t)`: `t` is interleaved as the payload of the
/// witness template of `s`. The output ends just before the first payload
/// slot `t` cannot fill, or at the horizon of `s`.
pub fn pr_map(
    t: &SymbolStream,
    s: &SymbolStream,
    sched: &WitnessSchedule,
    a: &TransitionMatrix,
) -> Result<SymbolStream> {
    check_inputs(s, a, t)?;
    let symbols = fill(s, sched, t, true)?;
    admissible_output(s.m(), symbols, a, Provenance::BuiltByPr)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SyncRow {
    pub i: usize,
    pub u: usize,
    /// `d(σ^{u_i} s, σ^{u_i} t)`, must be at most `2^{-i}`.
    pub prox: f64,
    /// `d(σ^{u_i+i+1} s, σ^{u_i+i+1} t)`, must be at least `1/2`.
    pub sep: f64,
    pub prox_ok: bool,
    pub sep_ok: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolicReport {
    pub depth: usize,
    pub horizon: usize,
    pub rows: Vec<SyncRow>,
    pub passed: bool,
}

/// Checks proximality and separation at sync blocks `0..=depth`.
pub fn verify_liyorke_symbolic(
    s: &SymbolStream,
    t: &SymbolStream,
    sched: &WitnessSchedule,
    depth: usize,
) -> Result<SymbolicReport> {
    let horizon = s.horizon().min(t.horizon());
    let needed = sched.sync(depth)? + depth + 2;
    if needed >= horizon {
        return Err(Error::HorizonExhausted { needed, horizon });
    }
    let s = s.truncated(horizon)?;
    let t = t.truncated(horizon)?;
    let mut rows = Vec::with_capacity(depth + 1);
    for i in 0..=depth {
        let u = sched.sync(i)?;
        let prox = metric(&shift(&s, u)?, &shift(&t, u)?)?;
        let sep = metric(&shift(&s, u + i + 1)?, &shift(&t, u + i + 1)?)?;
        let prox_ok = prox <= 0.5f64.powi(i as i32);
        let sep_ok = sep >= 0.5;
        rows.push(SyncRow {
            i,
            u,
            prox,
            sep,
            prox_ok,
            sep_ok,
            pass: prox_ok && sep_ok,
        });
    }
    Ok(SymbolicReport {
        depth,
        horizon,
        passed: rows.iter().all(|r| r.pass),
        rows,
    })
}

/// A one-dimensional dynamical system that may leave its domain.
pub trait Dynamics<T> {
    fn step(&self, x: &T) -> Option<T>;
}

impl<T: Scalar> Dynamics<T> for PiecewiseExpandingMap<T> {
    fn step(&self, x: &T) -> Option<T> {
        self.apply(x)
    }
}

/// The expanding map whose inverse branches are the similarities.
impl Dynamics<f64> for SimilarityIFS {
    fn step(&self, x: &f64) -> Option<f64> {
        self.expand(*x).map(|(_, y)| y)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometricThresholds {
    /// The tail minimum must fall below this.
    pub eps_prox: f64,
    /// The tail maximum must exceed this.
    pub eps_sep: f64,
    /// Length of the summary windows.
    pub window: usize,
    /// Number of final steps forming the tail window.
    pub tail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowStat {
    pub start: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometricReport {
    pub horizon: usize,
    pub windows: Vec<WindowStat>,
    pub tail_min: f64,
    pub tail_max: f64,
    pub proximality_witnessed: bool,
    pub separation_witnessed: bool,
    /// Always phrased as finite-horizon evidence.
    pub verdict: String,
}

/// Tracks `|f^n x − f^n y|` for `n < horizon`. liminf and limsup are not
/// decidable from a finite orbit; the report records what was seen.
pub fn verify_liyorke_geometric<T: Scalar, D: Dynamics<T>>(
    f: &D,
    x: &T,
    y: &T,
    horizon: usize,
    thresholds: &GeometricThresholds,
) -> Result<GeometricReport> {
    if horizon == 0 || thresholds.window == 0 || thresholds.tail == 0 || thresholds.tail > horizon {
        return Err(Error::Domain(format!(
            "need 0 < tail <= horizon and a positive window (horizon {horizon}, tail {}, window {})",
            thresholds.tail, thresholds.window
        )));
    }
    let mut distances = Vec::with_capacity(horizon);
    let (mut a, mut b) = (x.clone(), y.clone());
    for n in 0..horizon {
        distances.push((a.clone() - b.clone()).abs().to_f64());
        if n + 1 == horizon {
            break;
        }
        let escape = |p: &T| Error::Escape {
            step: n,
            point: p.to_f64(),
            reason: "orbit left the pieces".into(),
        };
        let next_a = f.step(&a).ok_or_else(|| escape(&a))?;
        let next_b = f.step(&b).ok_or_else(|| escape(&b))?;
        a = next_a;
        b = next_b;
    }
    let windows = distances
        .chunks(thresholds.window)
        .enumerate()
        .map(|(k, c)| WindowStat {
            start: k * thresholds.window,
            min: c.iter().copied().fold(f64::INFINITY, f64::min),
            max: c.iter().copied().fold(0.0, f64::max),
        })
        .collect();
    let tail = &distances[horizon - thresholds.tail..];
    let tail_min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let tail_max = tail.iter().copied().fold(0.0, f64::max);
    let proximality_witnessed = tail_min < thresholds.eps_prox;
    let separation_witnessed = tail_max > thresholds.eps_sep;
    let verdict = if proximality_witnessed && separation_witnessed {
        format!("Li-Yorke behaviour witnessed at horizon {horizon}")
    } else {
        format!("Li-Yorke behaviour not witnessed at horizon {horizon}")
    };
    Ok(GeometricReport {
        horizon,
        windows,
        tail_min,
        tail_max,
        proximality_witnessed,
        separation_witnessed,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub k: usize,
    /// Length of `Φ⁻¹([a_0…a_k])`.
    pub preimage_len: usize,
    /// Length of `pr∘Φ⁻¹([a_0…a_k])`, up to its last payload symbol.
    pub embedded_len: usize,
    pub delta: usize,
    /// `M(k)`: `Σ_{n<M} N_n < 2(k+1) <= Σ_{n<=M} N_n`.
    pub big_m: usize,
    /// `Σ_{n=0}^{M} (n+6)`
    pub sum_bound: usize,
    /// `(M+6)²`
    pub bound: usize,
    /// `(M+6)² / Σ_{n<M} N_n`
    pub ratio_bound: Option<f64>,
}

/// Length overhead of the witness embedding on the cylinder `[a_0…a_k]`.
pub fn delta_k(alpha_prefix: &SymbolWord, sched: &WitnessSchedule) -> Result<DeltaReport> {
    let k = alpha_prefix.len() - 1;
    let preimage_len = phi_inverse_word(alpha_prefix).len();
    let embedded_len = sched.payload_position(preimage_len - 1)? + 1;
    let target = 2 * (k + 1);
    let mut cumulative = 0usize;
    let mut big_m = None;
    for n in 0..MAX_SCHEDULE_SCAN {
        cumulative += sched.gap(n)?;
        if cumulative >= target {
            big_m = Some(n);
            break;
        }
    }
    let big_m = big_m.ok_or_else(|| {
        Error::Domain(format!(
            "schedule never accumulates {target} payload symbols"
        ))
    })?;
    Ok(DeltaReport {
        k,
        preimage_len,
        embedded_len,
        delta: embedded_len - preimage_len,
        big_m,
        sum_bound: (0..=big_m).map(|n| n + 6).sum(),
        bound: (big_m + 6) * (big_m + 6),
        ratio_bound: sched.vanishing_ratio(big_m)?,
    })
}

/// How the full-shift cylinder is carried into the star subshift.
#[derive(Clone, Copy, Debug)]
pub enum Embedding<'a> {
    /// `Φ⁻¹` alone, no overhead.
    Identity,
    /// `pr∘Φ⁻¹` with the witness template of `base`.
    Witness {
        base: &'a SymbolStream,
        schedule: &'a WitnessSchedule,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbePoint {
    pub k: usize,
    /// `ln ν([a_0…a_k])`
    pub log_mass: f64,
    /// `ln diam` of the coded image of the embedded cylinder.
    pub log_diameter: f64,
    pub ratio: f64,
    pub embedded_len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeReport {
    pub dimension: f64,
    pub points: Vec<ProbePoint>,
}

/// Cylinder-level local dimension quotients
/// `ln ν([a_0…a_k]) / ln diam π_A(embedded cylinder)` for each `k`.
pub fn local_dimension_probe(
    ifs: &SimilarityIFS,
    a: &TransitionMatrix,
    alpha: &SymbolStream,
    ks: &[usize],
    embedding: Embedding<'_>,
) -> Result<ProbeReport> {
    let report = ifs.validate();
    if !report.valid {
        return Err(Error::Domain(format!(
            "invalid similarity system: {:?}",
            report.failures
        )));
    }
    if alpha.m() != ifs.m() {
        return Err(Error::AlphabetMismatch {
            left: alpha.m(),
            right: ifs.m(),
        });
    }
    let ratios = ifs.ratios();
    let dimension = moran_root(&ratios, DEFAULT_TOL)?.p;
    let ln_seed = ifs.seed().len().ln();
    let mut points = Vec::with_capacity(ks.len());
    for &k in ks {
        let prefix = alpha.prefix(k + 1)?;
        let log_mass = bernoulli_cylinder_mass(&prefix, &ratios, dimension)?.ln;
        let lifted = phi_inverse_word(&prefix);
        let embedded = match embedding {
            Embedding::Identity => lifted,
            Embedding::Witness { base, schedule } => {
                let len = delta_k(&prefix, schedule)?.embedded_len;
                let payload = lifted.into_stream(Provenance::Free);
                pr_map(&payload, base, schedule, a)?.prefix(len)?
            }
        };
        let coded = phi_word(&embedded, a)?;
        let log_diameter = cylinder_weight(&coded, &ratios, WeightMode::Plain)?.ln + ln_seed;
        if !log_diameter.is_finite() || log_diameter >= 0.0 {
            return Err(Error::NumericGuard(format!(
                "log diameter {log_diameter} at k = {k} is not a usable scale"
            )));
        }
        points.push(ProbePoint {
            k,
            log_mass,
            log_diameter,
            ratio: log_mass / log_diameter,
            embedded_len: embedded.len(),
        });
    }
    Ok(ProbeReport { dimension, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(m: usize) -> TransitionMatrix {
        TransitionMatrix::star(m, true).unwrap()
    }

    #[test]
    fn flips() {
        assert_eq!(flip(2, 3), 3);
        assert_eq!(flip(3, 3), 1);
        assert_eq!(flip(1, 3), 2);
        for m in 2..8 {
            for a in 1..=m as Symbol {
                assert_ne!(flip(a, m), a);
            }
        }
    }

    #[test]
    fn schedules() {
        let sched = WitnessSchedule::default();
        // u_1 = N_0 + 5, u_{i+1} = u_i + N_i + i + 6
        assert_eq!(sched.sync_positions(6).unwrap(), vec![0, 5, 13, 25, 43, 69]);
        assert_eq!(WitnessSchedule::parse("n^2").unwrap(), sched);
        assert_eq!(
            WitnessSchedule::parse("3").unwrap(),
            WitnessSchedule::constant(3)
        );
        assert_eq!(
            WitnessSchedule::parse("1, 2,3").unwrap(),
            WitnessSchedule::explicit(vec![1, 2, 3])
        );
        assert!(WitnessSchedule::parse("n^x").is_err());
        assert!(WitnessSchedule::explicit(vec![1]).gap(1).is_err());
        assert!(
            sched.vanishing_ratio(40).unwrap().unwrap()
                < sched.vanishing_ratio(10).unwrap().unwrap()
        );
        assert_eq!(sched.vanishing_ratio(1).unwrap(), None);
    }

    #[test]
    fn layout_matches_template() {
        let sched = WitnessSchedule::constant(3);
        let slots = sched.layout(20).unwrap();
        use Slot::*;
        // block 0: s0 1 t~ 1 p p p 1 ; u_1 = 8
        assert_eq!(
            &slots[..8],
            &[
                Copy,
                One,
                Flip,
                One,
                Payload(0),
                Payload(1),
                Payload(2),
                One
            ]
        );
        // block 1: s s 1 t~ 1 p p p p 1 ; u_2 = 8 + 3 + 7 = 18
        assert_eq!(
            &slots[8..18],
            &[
                Copy,
                Copy,
                One,
                Flip,
                One,
                Payload(3),
                Payload(4),
                Payload(5),
                Payload(6),
                One
            ]
        );
        assert_eq!(slots[18], Copy);
    }

    #[test]
    fn payload_placement() {
        let sched = WitnessSchedule::constant(3);
        let s = SymbolStream::constant(2, 1, 30).unwrap();
        let payload = SymbolStream::parse(2, "1 2 1 1 2 1 1 1 1 1 1 1").unwrap();
        let t = build_witness(&s, &sched, &star(2), &payload).unwrap();
        assert_eq!(&t.symbols()[4..7], &[1, 2, 1]);
        assert_eq!(t.symbols()[7], 1);
        assert_eq!(t.provenance(), Provenance::BuiltByWitness);
    }

    #[test]
    fn witness_errors() {
        let sched = WitnessSchedule::default();
        let s = SymbolStream::constant(2, 1, 40).unwrap();
        let short = SymbolStream::constant(2, 1, 3).unwrap();
        assert!(matches!(
            build_witness(&s, &sched, &star(2), &short),
            Err(Error::PayloadExhausted { .. })
        ));
        let bad_s = SymbolStream::parse(2, "2 2 1").unwrap();
        assert!(matches!(
            build_witness(&bad_s, &sched, &star(2), &short),
            Err(Error::NotAdmissible { .. })
        ));
        // without (A)_{11} = 1 the forced 1 1 junctions are forbidden
        let zero_diag = TransitionMatrix::star(2, false).unwrap();
        let s = SymbolStream::parse(2, "1 2 1 2 1 2 1 2 1 2 1 2").unwrap();
        let payload = SymbolStream::parse(2, "2 1 2 1 2 1 2 1").unwrap();
        assert!(matches!(
            build_witness(&s, &sched, &zero_diag, &payload),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn pr_agrees_with_build_and_extends_prefixes() {
        let sched = WitnessSchedule::default();
        let a = star(3);
        let s = SymbolStream::parse(3, &"1 2 1 3 1 1 ".repeat(30)).unwrap();
        let long = SymbolStream::parse(3, &"2 1 1 3 1 ".repeat(40)).unwrap();
        let built = build_witness(&s, &sched, &a, &long).unwrap();
        let pr_long = pr_map(&long, &s, &sched, &a).unwrap();
        assert_eq!(pr_long.symbols(), built.symbols());
        assert_eq!(pr_long.provenance(), Provenance::BuiltByPr);
        let short = long.truncated(20).unwrap();
        let pr_short = pr_map(&short, &s, &sched, &a).unwrap();
        assert!(pr_short.horizon() < pr_long.horizon());
        assert_eq!(pr_short.symbols(), &pr_long.symbols()[..pr_short.horizon()]);
    }

    #[test]
    fn symbolic_verification_profiles() {
        let sched = WitnessSchedule::default();
        let a = star(2);
        let h = sched.sync(8).unwrap() + 20;
        let s = SymbolStream::constant(2, 1, h).unwrap();
        let t = build_witness(&s, &sched, &a, &s).unwrap();
        let report = verify_liyorke_symbolic(&s, &t, &sched, 8).unwrap();
        assert!(report.passed, "{report:?}");
        let same = verify_liyorke_symbolic(&s, &s, &sched, 8).unwrap();
        assert!(!same.passed);
        assert!(same.rows.iter().all(|r| r.prox == 0.0 && !r.sep_ok));
        let mut sym = s.symbols().to_vec();
        sym[0] = 2;
        let t0 = SymbolStream::new(2, sym).unwrap();
        let r = verify_liyorke_symbolic(&s, &t0, &sched, 8).unwrap();
        assert_eq!(r.rows[0].prox, 1.0);
        assert!(r.rows[1..].iter().all(|row| row.prox_ok && !row.sep_ok));
        assert!(matches!(
            verify_liyorke_symbolic(&s, &t, &sched, 12),
            Err(Error::HorizonExhausted { .. })
        ));
    }

    #[test]
    fn delta_of_first_cylinder() {
        let sched = WitnessSchedule::default();
        // N_0 = 0: block 0 is s_0 1 t~ 1 1 (5 symbols, no payload); block 1
        // starts with s_5 s_6 1 t~ 1 before its first payload slot at 10.
        let r = delta_k(&SymbolWord::parse(2, "1").unwrap(), &sched).unwrap();
        assert_eq!((r.preimage_len, r.embedded_len, r.delta), (1, 11, 10));
        let r = delta_k(&SymbolWord::parse(2, "2").unwrap(), &sched).unwrap();
        assert_eq!((r.preimage_len, r.embedded_len, r.delta), (2, 12, 10));
        assert_eq!(r.big_m, 2);
        assert_eq!(r.bound, 64);
    }

    #[test]
    fn identity_embedding_has_exact_dimension() {
        let ifs = SimilarityIFS::middle_thirds();
        let alpha = SymbolStream::parse(2, &"1 2 2 1 2 ".repeat(20)).unwrap();
        let r = local_dimension_probe(&ifs, &star(2), &alpha, &[0, 5, 50, 99], Embedding::Identity)
            .unwrap();
        for p in &r.points {
            assert!((p.ratio - r.dimension).abs() < 1e-12, "{p:?}");
        }
    }
}
