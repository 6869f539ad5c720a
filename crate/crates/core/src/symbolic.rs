//! Finite words, finite-horizon one-sided sequences, cylinders, the shift,
//! the sequence metric, and the digit-elimination coding between a star
//! subshift and the full shift.
//!
//! A [`SymbolStream`] is the known prefix of an infinite sequence. Anything
//! that would need a symbol past the horizon fails with
//! [`Error::HorizonExhausted`]; nothing is ever padded.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;

/// A symbol in `1..=m`.
pub type Symbol = u16;

fn check_symbols(m: usize, symbols: &[Symbol]) -> Result<()> {
    if m < 2 {
        return Err(Error::Domain(format!("alphabet size {m} < 2")));
    }
    if symbols.is_empty() {
        return Err(Error::Empty);
    }
    match symbols.iter().find(|&&s| s == 0 || s as usize > m) {
        Some(&s) => Err(Error::SymbolOutOfRange {
            symbol: s as usize,
            m,
        }),
        None => Ok(()),
    }
}

/// Parses `"1 2 1 3"` (whitespace separated decimal symbols).
pub fn parse_symbols(text: &str) -> Result<Vec<Symbol>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<Symbol>()
                .map_err(|_| Error::Parse(format!("bad symbol {tok:?}")))
        })
        .collect()
}

pub fn format_symbols(symbols: &[Symbol]) -> String {
    let parts: Vec<String> = symbols.iter().map(Symbol::to_string).collect();
    parts.join(" ")
}

/// Position of the first pair `(w_j, w_{j+1})` with `(A)_{w_j w_{j+1}} = 0`.
pub(crate) fn first_forbidden(symbols: &[Symbol], a: &TransitionMatrix) -> Option<usize> {
    symbols.windows(2).position(|w| !a.entry(w[0], w[1]))
}

fn admissibility_error(symbols: &[Symbol], a: &TransitionMatrix) -> Result<()> {
    match first_forbidden(symbols, a) {
        Some(p) => Err(Error::NotAdmissible {
            position: p,
            from: symbols[p] as usize,
            to: symbols[p + 1] as usize,
        }),
        None => Ok(()),
    }
}

/// A nonempty finite word over `{1..m}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolWord {
    m: usize,
    symbols: Vec<Symbol>,
}

impl SymbolWord {
    pub fn new(m: usize, symbols: Vec<Symbol>) -> Result<Self> {
        check_symbols(m, &symbols)?;
        Ok(Self { m, symbols })
    }

    pub(crate) fn from_valid(m: usize, symbols: Vec<Symbol>) -> Self {
        debug_assert!(check_symbols(m, &symbols).is_ok());
        Self { m, symbols }
    }

    pub fn parse(m: usize, text: &str) -> Result<Self> {
        Self::new(m, parse_symbols(text)?)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> Symbol {
        self.symbols[0]
    }

    pub fn last(&self) -> Symbol {
        self.symbols[self.symbols.len() - 1]
    }

    /// `self · a`
    pub fn extended(&self, a: Symbol) -> Result<Self> {
        let mut symbols = self.symbols.clone();
        symbols.push(a);
        Self::new(self.m, symbols)
    }

    /// Word with the first symbol removed; `None` for a single symbol.
    pub fn tail(&self) -> Option<Self> {
        (self.len() > 1).then(|| Self::from_valid(self.m, self.symbols[1..].to_vec()))
    }

    pub fn prefix(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > self.len() {
            return Err(Error::HorizonExhausted {
                needed: n - 1,
                horizon: self.len(),
            });
        }
        Ok(Self::from_valid(self.m, self.symbols[..n].to_vec()))
    }

    /// `(A)_{w_j, w_{j+1}} = 1` for all consecutive pairs.
    pub fn is_admissible(&self, a: &TransitionMatrix) -> Result<bool> {
        if a.m() != self.m {
            return Err(Error::AlphabetMismatch {
                left: self.m,
                right: a.m(),
            });
        }
        Ok(first_forbidden(&self.symbols, a).is_none())
    }

    pub fn ensure_admissible(&self, a: &TransitionMatrix) -> Result<()> {
        if !self.is_admissible(a)? {
            return admissibility_error(&self.symbols, a);
        }
        Ok(())
    }

    pub fn into_stream(self, provenance: Provenance) -> SymbolStream {
        SymbolStream {
            m: self.m,
            symbols: self.symbols,
            provenance,
        }
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbols(&self.symbols))
    }
}

impl fmt::Debug for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Where a stream came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Free,
    BuiltByWitness,
    BuiltByPr,
}

/// The first `horizon` symbols of a one-sided infinite sequence.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolStream {
    m: usize,
    symbols: Vec<Symbol>,
    provenance: Provenance,
}

impl SymbolStream {
    pub fn new(m: usize, symbols: Vec<Symbol>) -> Result<Self> {
        Self::with_provenance(m, symbols, Provenance::Free)
    }

    pub fn with_provenance(m: usize, symbols: Vec<Symbol>, provenance: Provenance) -> Result<Self> {
        check_symbols(m, &symbols)?;
        Ok(Self {
            m,
            symbols,
            provenance,
        })
    }

    pub fn parse(m: usize, text: &str) -> Result<Self> {
        Self::new(m, parse_symbols(text)?)
    }

    /// `horizon` copies of symbol `a`.
    pub fn constant(m: usize, a: Symbol, horizon: usize) -> Result<Self> {
        Self::new(m, vec![a; horizon])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn horizon(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn get(&self, k: usize) -> Result<Symbol> {
        self.symbols.get(k).copied().ok_or(Error::HorizonExhausted {
            needed: k,
            horizon: self.horizon(),
        })
    }

    /// First `n` symbols as a word.
    pub fn prefix(&self, n: usize) -> Result<SymbolWord> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if n > self.horizon() {
            return Err(Error::HorizonExhausted {
                needed: n - 1,
                horizon: self.horizon(),
            });
        }
        Ok(SymbolWord::from_valid(self.m, self.symbols[..n].to_vec()))
    }

    /// Keeps the first `n` symbols.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        let w = self.prefix(n)?;
        Ok(Self {
            m: self.m,
            symbols: w.symbols,
            provenance: self.provenance,
        })
    }

    pub fn as_word(&self) -> SymbolWord {
        SymbolWord::from_valid(self.m, self.symbols.clone())
    }

    pub fn is_admissible(&self, a: &TransitionMatrix) -> Result<bool> {
        self.as_word().is_admissible(a)
    }

    pub fn ensure_admissible(&self, a: &TransitionMatrix) -> Result<()> {
        self.as_word().ensure_admissible(a)
    }
}

impl fmt::Display for SymbolStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbols(&self.symbols))
    }
}

impl fmt::Debug for SymbolStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{self}>")
    }
}

/// All streams whose prefix equals `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cylinder {
    pub base: SymbolWord,
}

impl Cylinder {
    pub fn new(base: SymbolWord) -> Self {
        Self { base }
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, s: &SymbolStream) -> Result<bool> {
        if s.m() != self.base.m() {
            return Err(Error::AlphabetMismatch {
                left: s.m(),
                right: self.base.m(),
            });
        }
        Ok(s.prefix(self.len())?.symbols() == self.base.symbols())
    }
}

/// Drops the first `k` symbols.
pub fn shift(s: &SymbolStream, k: usize) -> Result<SymbolStream> {
    if k >= s.horizon() {
        return Err(Error::HorizonExhausted {
            needed: k,
            horizon: s.horizon(),
        });
    }
    Ok(SymbolStream {
        m: s.m,
        symbols: s.symbols[k..].to_vec(),
        provenance: s.provenance,
    })
}

/// `d(s, t) = 2^{-k}` with `k` the first index where the streams differ, and
/// `0` when they agree on the whole horizon. A zero only means agreement
/// within the horizon.
pub fn metric(s: &SymbolStream, t: &SymbolStream) -> Result<f64> {
    if s.m != t.m {
        return Err(Error::AlphabetMismatch {
            left: s.m,
            right: t.m,
        });
    }
    if s.horizon() != t.horizon() {
        return Err(Error::HorizonMismatch {
            left: s.horizon(),
            right: t.horizon(),
        });
    }
    Ok(
        match s.symbols.iter().zip(&t.symbols).position(|(a, b)| a != b) {
            Some(k) => 0.5f64.powi(k as i32),
            None => 0.0,
        },
    )
}

pub fn is_admissible(w: &SymbolWord, a: &TransitionMatrix) -> Result<bool> {
    w.is_admissible(a)
}

/// Warning text when `a` is the zero-diagonal star variant, for which the
/// digit-elimination coding is injective but not onto the full shift.
pub fn coding_warning(a: &TransitionMatrix) -> Option<String> {
    (a.is_zero_diagonal_star()).then(|| {
        format!(
            "matrix {a} has (A)_11 = 0: admissible sequences alternate 1 / non-1, \
             so the digit-elimination coding is not onto the full shift"
        )
    })
}

fn check_coding_matrix(a: &TransitionMatrix) -> Result<()> {
    if a.is_star(1, true) {
        return Ok(());
    }
    if let Some(w) = coding_warning(a) {
        log::warn!("{w}");
        return Ok(());
    }
    Err(Error::NotStar {
        symbol: 1,
        reason: format!("{a} is not a strict star at symbol 1"),
    })
}

/// Deletes the successor of every non-1 symbol. A trailing non-1 symbol has
/// an unknown successor and is rejected.
fn eliminate(symbols: &[Symbol]) -> Result<Vec<Symbol>> {
    let mut out = Vec::with_capacity(symbols.len());
    let mut k = 0;
    while k < symbols.len() {
        let a = symbols[k];
        out.push(a);
        if a != 1 {
            if k + 1 >= symbols.len() {
                return Err(Error::HorizonExhausted {
                    needed: k + 1,
                    horizon: symbols.len(),
                });
            }
            k += 2;
        } else {
            k += 1;
        }
    }
    Ok(out)
}

fn insert_ones(symbols: &[Symbol]) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(2 * symbols.len());
    for &a in symbols {
        out.push(a);
        if a != 1 {
            out.push(1);
        }
    }
    out
}

/// The coding from the star subshift `Σ_m^+(A)` onto the full shift.
pub fn phi(s: &SymbolStream, a: &TransitionMatrix) -> Result<SymbolStream> {
    check_coding_matrix(a)?;
    s.ensure_admissible(a)?;
    Ok(SymbolStream {
        m: s.m,
        symbols: eliminate(&s.symbols)?,
        provenance: s.provenance,
    })
}

/// Inverse coding: a 1 is inserted right after every non-1 symbol.
pub fn phi_inverse(alpha: &SymbolStream) -> SymbolStream {
    SymbolStream {
        m: alpha.m,
        symbols: insert_ones(&alpha.symbols),
        provenance: alpha.provenance,
    }
}

/// [`phi`] on a finite word; the last symbol must be 1 or the word ends in
/// the middle of a forced pair.
pub fn phi_word(w: &SymbolWord, a: &TransitionMatrix) -> Result<SymbolWord> {
    check_coding_matrix(a)?;
    w.ensure_admissible(a)?;
    Ok(SymbolWord::from_valid(w.m, eliminate(&w.symbols)?))
}

/// Base word of the cylinder `Φ⁻¹([w])`: every non-1 symbol, including a
/// trailing one, is followed by its forced 1.
pub fn phi_inverse_word(w: &SymbolWord) -> SymbolWord {
    SymbolWord::from_valid(w.m, insert_ones(&w.symbols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn st(m: usize, text: &str) -> SymbolStream {
        SymbolStream::parse(m, text).unwrap()
    }

    #[test]
    fn rejects_bad_words() {
        assert_eq!(SymbolWord::new(2, vec![]), Err(Error::Empty));
        assert_eq!(
            SymbolWord::new(2, vec![1, 3]),
            Err(Error::SymbolOutOfRange { symbol: 3, m: 2 })
        );
        assert_eq!(
            SymbolWord::new(2, vec![0]),
            Err(Error::SymbolOutOfRange { symbol: 0, m: 2 })
        );
        assert!(matches!(
            SymbolStream::parse(3, "1 x"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn shifting() {
        let s = st(2, "1 2 1 2 1 2");
        assert_eq!(shift(&s, 1).unwrap(), st(2, "2 1 2 1 2"));
        assert_eq!(shift(&s, 0).unwrap(), s);
        assert_eq!(shift(&st(3, "3 1 1 1 3"), 2).unwrap(), st(3, "1 1 3"));
        assert!(matches!(shift(&s, 6), Err(Error::HorizonExhausted { .. })));
    }

    #[test]
    fn metric_values() {
        let s = st(3, "1 2 3 1 1");
        assert_eq!(metric(&s, &s).unwrap(), 0.0);
        assert_eq!(metric(&s, &st(3, "2 2 3 1 1")).unwrap(), 1.0);
        assert_eq!(metric(&s, &st(3, "1 2 3 2 1")).unwrap(), 0.125);
        assert!(matches!(
            metric(&s, &st(3, "1 2")),
            Err(Error::HorizonMismatch { .. })
        ));
        assert!(matches!(
            metric(&s, &st(4, "1 2 3 1 1")),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn admissibility() {
        let star = TransitionMatrix::star(3, true).unwrap();
        assert!(SymbolWord::parse(3, "1 1")
            .unwrap()
            .is_admissible(&star)
            .unwrap());
        assert!(!SymbolWord::parse(3, "2 3")
            .unwrap()
            .is_admissible(&star)
            .unwrap());
        let full = TransitionMatrix::full(3).unwrap();
        assert!(SymbolWord::parse(3, "3 3 2 1 2")
            .unwrap()
            .is_admissible(&full)
            .unwrap());
        assert!(SymbolWord::parse(2, "1")
            .unwrap()
            .is_admissible(&full)
            .is_err());
    }

    #[test]
    fn phi_examples() {
        let star = TransitionMatrix::star(3, true).unwrap();
        assert_eq!(
            phi(&st(3, "1 2 1 1 3 1 2 1"), &star).unwrap(),
            st(3, "1 2 1 3 2")
        );
        assert_eq!(phi(&st(3, "1 1 1 1"), &star).unwrap(), st(3, "1 1 1 1"));
        assert_eq!(phi(&st(3, "2 1 2 1 2 1"), &star).unwrap(), st(3, "2 2 2"));
        assert!(matches!(
            phi(&st(3, "1 2"), &star),
            Err(Error::HorizonExhausted { .. })
        ));
        assert!(matches!(
            phi(&st(3, "2 3"), &star),
            Err(Error::NotAdmissible { .. })
        ));
        let not_star: TransitionMatrix = "0,1,1;1,1,1;1,1,1".parse().unwrap();
        assert!(matches!(
            phi(&st(3, "2 1"), &not_star),
            Err(Error::NotStar { .. })
        ));
        let zero_diag = TransitionMatrix::star(3, false).unwrap();
        assert!(coding_warning(&zero_diag).is_some());
        assert!(coding_warning(&star).is_none());
        assert_eq!(phi(&st(3, "2 1 3 1"), &zero_diag).unwrap(), st(3, "2 3"));
    }

    #[test]
    fn phi_inverse_examples() {
        assert_eq!(phi_inverse(&st(3, "1 2 1 3 2")), st(3, "1 2 1 1 3 1 2 1"));
        assert_eq!(phi_inverse(&st(2, "1 1 1")), st(2, "1 1 1"));
        assert_eq!(phi_inverse(&st(3, "2 2 2")), st(3, "2 1 2 1 2 1"));
    }

    #[test]
    fn cylinder_membership() {
        let c = Cylinder::new(SymbolWord::parse(2, "1 2").unwrap());
        assert!(c.contains(&st(2, "1 2 2 1")).unwrap());
        assert!(!c.contains(&st(2, "1 1 2 1")).unwrap());
        assert!(matches!(
            c.contains(&st(2, "1")),
            Err(Error::HorizonExhausted { .. })
        ));
    }

    fn stream_strategy(m: usize, len: usize) -> impl Strategy<Value = SymbolStream> {
        proptest::collection::vec(1..=m as Symbol, 1..len)
            .prop_map(move |v| SymbolStream::new(m, v).unwrap())
    }

    proptest! {
        #[test]
        fn phi_round_trip(m in prop::sample::select(vec![2usize, 3, 5]), seed in any::<u64>(), len in 1usize..400) {
            let symbols: Vec<Symbol> = (0..len)
                .map(|k| (((seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)) >> 7) % m as u64) as Symbol + 1)
                .collect();
            let alpha = SymbolStream::new(m, symbols).unwrap();
            let star = TransitionMatrix::star(m, true).unwrap();
            let lifted = phi_inverse(&alpha);
            prop_assert!(lifted.is_admissible(&star).unwrap());
            prop_assert_eq!(phi(&lifted, &star).unwrap(), alpha);
        }

        #[test]
        fn metric_is_an_ultrametric(
            (s, t, u) in (1usize..40).prop_flat_map(|h| (
                proptest::collection::vec(1..=3 as Symbol, h),
                proptest::collection::vec(1..=3 as Symbol, h),
                proptest::collection::vec(1..=3 as Symbol, h),
            ))
        ) {
            let s = SymbolStream::new(3, s).unwrap();
            let t = SymbolStream::new(3, t).unwrap();
            let u = SymbolStream::new(3, u).unwrap();
            let st_ = metric(&s, &t).unwrap();
            prop_assert_eq!(st_, metric(&t, &s).unwrap());
            prop_assert_eq!(metric(&s, &s).unwrap(), 0.0);
            prop_assert_eq!(st_ == 0.0, s == t);
            let su = metric(&s, &u).unwrap();
            let tu = metric(&t, &u).unwrap();
            prop_assert!(su <= st_.max(tu));
        }

        #[test]
        fn shifted_agreement_bounds_metric(s in stream_strategy(2, 60), n in 0usize..20, j in 0usize..20) {
            prop_assume!(n + j + 1 < s.horizon());
            // t agrees with s on positions n..=n+j and differs right after
            let mut sym = s.symbols().to_vec();
            let k = n + j + 1;
            sym[k] = if sym[k] == 1 { 2 } else { 1 };
            let t = SymbolStream::new(2, sym).unwrap();
            let d = metric(&shift(&s, n).unwrap(), &shift(&t, n).unwrap()).unwrap();
            prop_assert!(d <= 0.5f64.powi(j as i32));
        }
    }
}
