//! 0/1 transition matrices of subshifts of finite type.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::symbolic::{Symbol, SymbolWord};

const POWER_ITERATION_CAP: usize = 10_000;

/// An `m × m` 0/1 matrix with `m >= 2` and no dead symbols.
///
/// Symbols are 1-based everywhere in the public API: `entry(1, 1)` is the top
/// left entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TransitionMatrix {
    m: usize,
    entries: Vec<bool>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let m = rows.len();
        if m < 2 {
            return Err(Error::InvalidMatrix(format!("alphabet size {m} < 2")));
        }
        if let Some(r) = rows.iter().position(|r| r.len() != m) {
            return Err(Error::InvalidMatrix(format!(
                "row {} has {} entries, expected {m}",
                r + 1,
                rows[r].len()
            )));
        }
        let entries: Vec<bool> = rows.into_iter().flatten().collect();
        let a = Self { m, entries };
        for i in 0..m {
            if !(0..m).any(|j| a.at(i, j)) {
                return Err(Error::InvalidMatrix(format!("row {} is all zero", i + 1)));
            }
            if !(0..m).any(|j| a.at(j, i)) {
                return Err(Error::InvalidMatrix(format!(
                    "column {} is all zero",
                    i + 1
                )));
            }
        }
        Ok(a)
    }

    /// The full shift on `m` symbols.
    pub fn full(m: usize) -> Result<Self> {
        Self::new(vec![vec![true; m]; m])
    }

    /// Strict star matrix: row 1 and column 1 all ones, everything else zero.
    /// `diagonal` sets entry (1,1); the canonical choice is `true`.
    pub fn star(m: usize, diagonal: bool) -> Result<Self> {
        let rows = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == 0 && j == 0 {
                            diagonal
                        } else {
                            i == 0 || j == 0
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(rows)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> bool {
        self.entries[i * self.m + j]
    }

    /// Entry `(A)_{ij}` with 1-based indices.
    pub fn entry(&self, i: Symbol, j: Symbol) -> bool {
        let (i, j) = (i as usize, j as usize);
        assert!((1..=self.m).contains(&i) && (1..=self.m).contains(&j));
        self.at(i - 1, j - 1)
    }

    pub fn row_sum(&self, i: usize) -> usize {
        (0..self.m).filter(|&j| self.at(i - 1, j)).count()
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.entries.chunks(self.m).map(<[bool]>::to_vec).collect()
    }

    /// Every ordered pair `(i, j)` is joined by a path of length `1..=m`.
    /// Decided by breadth-first reachability, so no matrix powers are formed.
    pub fn is_irreducible(&self) -> bool {
        (0..self.m).all(|start| {
            let mut seen = vec![false; self.m];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for (j, visited) in seen.iter_mut().enumerate() {
                    if self.at(v, j) && !*visited {
                        *visited = true;
                        queue.push_back(j);
                    }
                }
            }
            seen.iter().all(|&b| b)
        })
    }

    /// Smallest row (1-based) with at least two ones.
    pub fn branching_row(&self) -> Option<usize> {
        (1..=self.m).find(|&i| self.row_sum(i) >= 2)
    }

    /// Row `i` and column `i` consist of ones. In strict mode every entry
    /// outside that row and column must also be zero.
    pub fn is_star(&self, i: usize, strict: bool) -> bool {
        if !(1..=self.m).contains(&i) {
            return false;
        }
        let c = i - 1;
        let cross = (0..self.m).all(|k| self.at(c, k) && self.at(k, c));
        if !cross || !strict {
            return cross;
        }
        (0..self.m)
            .filter(|&r| r != c)
            .all(|r| (0..self.m).filter(|&k| k != c).all(|k| !self.at(r, k)))
    }

    /// Strict star at symbol 1 except that `(A)_{11}` is zero.
    pub fn is_zero_diagonal_star(&self) -> bool {
        !self.at(0, 0)
            && (1..self.m).all(|k| self.at(0, k) && self.at(k, 0))
            && (1..self.m).all(|r| (1..self.m).all(|k| !self.at(r, k)))
    }

    pub fn is_full(&self) -> bool {
        self.entries.iter().all(|&b| b)
    }

    /// Perron root of an irreducible matrix.
    ///
    /// Power iteration runs on `A + I`, which is primitive whenever `A` is
    /// irreducible and has Perron root `ρ(A) + 1`; this sidesteps periodic
    /// matrices whose plain iterates oscillate. Convergence is declared when
    /// the Collatz–Wielandt bracket `[min (Bx)_i/x_i, max (Bx)_i/x_i]`, which
    /// always contains the Perron root, is narrower than `tol`.
    pub fn spectral_radius(&self, tol: f64) -> Result<f64> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Domain(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        if !self.is_irreducible() {
            return Err(Error::Domain(
                "spectral radius requires an irreducible matrix".into(),
            ));
        }
        let m = self.m;
        let mut x = vec![1.0 / m as f64; m];
        let mut estimate = f64::NAN;
        for _ in 0..POWER_ITERATION_CAP {
            let y: Vec<f64> = (0..m)
                .map(|i| x[i] + (0..m).filter(|&j| self.at(i, j)).map(|j| x[j]).sum::<f64>())
                .collect();
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for i in 0..m {
                let q = y[i] / x[i];
                lo = lo.min(q);
                hi = hi.max(q);
            }
            estimate = 0.5 * (lo + hi) - 1.0;
            if hi - lo < tol {
                return Ok(estimate);
            }
            let norm: f64 = y.iter().sum();
            x = y.into_iter().map(|v| v / norm).collect();
        }
        Err(Error::NonConvergence {
            iterations: POWER_ITERATION_CAP,
            last: estimate,
        })
    }

    /// Exact number of admissible words of length `n`.
    pub fn count_admissible_words(&self, n: usize) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::Domain("word length must be at least 1".into()));
        }
        let mut ending: Vec<BigUint> = vec![BigUint::from(1u8); self.m];
        for _ in 1..n {
            ending = (0..self.m)
                .map(|j| {
                    (0..self.m)
                        .filter(|&i| self.at(i, j))
                        .fold(BigUint::zero(), |acc, i| acc + &ending[i])
                })
                .collect();
        }
        Ok(ending.into_iter().sum())
    }

    /// All admissible words of length `n` in lexicographic order. Fails with
    /// [`Error::BudgetExceeded`] before allocating when the count is over
    /// `budget`.
    pub fn enumerate_admissible_words(&self, n: usize, budget: usize) -> Result<Vec<SymbolWord>> {
        let count = self.count_admissible_words(n)?;
        let fits = count.to_usize().filter(|&c| c <= budget);
        let Some(count) = fits else {
            return Err(Error::BudgetExceeded {
                needed: count.to_string(),
                budget,
            });
        };
        let mut out = Vec::with_capacity(count);
        let mut stack: Vec<usize> = Vec::with_capacity(n);
        self.extend_words(n, &mut stack, &mut out);
        Ok(out)
    }

    fn extend_words(&self, n: usize, prefix: &mut Vec<usize>, out: &mut Vec<SymbolWord>) {
        if prefix.len() == n {
            let symbols = prefix.iter().map(|&s| (s + 1) as Symbol).collect();
            out.push(SymbolWord::from_valid(self.m, symbols));
            return;
        }
        for j in 0..self.m {
            if prefix.last().is_none_or(|&i| self.at(i, j)) {
                prefix.push(j);
                self.extend_words(n, prefix, out);
                prefix.pop();
            }
        }
    }
}

impl fmt::Display for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.entries.chunks(self.m).enumerate() {
            if r > 0 {
                f.write_str(";")?;
            }
            for (c, &b) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(",")?;
                }
                f.write_str(if b { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TransitionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TransitionMatrix({self})")
    }
}

/// Parses the literal format `"1,1,1;1,0,0;1,0,0"`.
impl FromStr for TransitionMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rows = s
            .trim()
            .split(';')
            .map(|row| {
                row.split(',')
                    .map(|e| match e.trim() {
                        "1" => Ok(true),
                        "0" => Ok(false),
                        other => Err(Error::Parse(format!(
                            "matrix entry {other:?} is not 0 or 1"
                        ))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }
}

impl Serialize for TransitionMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TransitionMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(s: &str) -> TransitionMatrix {
        s.parse().unwrap()
    }

    /// Counts by brute force over all `m^n` tuples.
    fn brute_count(a: &TransitionMatrix, n: usize) -> usize {
        let m = a.m();
        (0..m.pow(n as u32))
            .filter(|&code| {
                let digits: Vec<usize> = (0..n)
                    .map(|k| code / m.pow((n - 1 - k) as u32) % m)
                    .collect();
                digits.windows(2).all(|w| a.at(w[0], w[1]))
            })
            .count()
    }

    #[test]
    fn rejects_malformed_matrices() {
        assert!(matches!(
            "1".parse::<TransitionMatrix>(),
            Err(Error::InvalidMatrix(_))
        ));
        assert!(matches!(
            "1,1;0,0".parse::<TransitionMatrix>(),
            Err(Error::InvalidMatrix(_))
        ));
        assert!(matches!(
            "1,0;1,0".parse::<TransitionMatrix>(),
            Err(Error::InvalidMatrix(_))
        ));
        assert!(matches!(
            "1,1;1".parse::<TransitionMatrix>(),
            Err(Error::InvalidMatrix(_))
        ));
        assert!(matches!(
            "1,2;1,1".parse::<TransitionMatrix>(),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn literal_round_trips() {
        let a = mat("1,1,1;1,0,0;1,0,0");
        assert_eq!(a.to_string(), "1,1,1;1,0,0;1,0,0");
        assert_eq!(a, TransitionMatrix::star(3, true).unwrap());
    }

    #[test]
    fn irreducibility() {
        assert!(mat("1,1;1,1").is_irreducible());
        assert!(!mat("1,1;0,1").is_irreducible());
        assert!(mat("1,1,1;1,0,0;1,0,0").is_irreducible());
        assert!(mat("0,1;1,0").is_irreducible());
    }

    #[test]
    fn branching_rows() {
        assert_eq!(mat("1,1;1,1").branching_row(), Some(1));
        assert_eq!(mat("0,1;1,0").branching_row(), None);
        assert_eq!(mat("1,1,1;1,0,0;1,0,0").branching_row(), Some(1));
        assert_eq!(mat("0,1,0;1,1,1;0,1,0").branching_row(), Some(2));
    }

    #[test]
    fn star_predicates() {
        let strict = mat("1,1,1;1,0,0;1,0,0");
        assert!(strict.is_star(1, true));
        let loose = mat("1,1,1;1,0,1;1,1,0");
        assert!(!loose.is_star(1, true));
        assert!(loose.is_star(1, false));
        let perm = mat("0,1;1,0");
        assert!(!perm.is_star(1, true));
        assert!(!perm.is_star(1, false));
        assert!(perm.is_zero_diagonal_star());
        assert!(!strict.is_star(2, false));
        assert!(!strict.is_star(4, false));
    }

    #[test]
    fn spectral_radii() {
        let tol = 1e-10;
        assert!((mat("1,1;1,1").spectral_radius(tol).unwrap() - 2.0).abs() < tol);
        assert!((mat("1,1,1;1,0,0;1,0,0").spectral_radius(tol).unwrap() - 2.0).abs() < tol);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((mat("0,1;1,1").spectral_radius(tol).unwrap() - golden).abs() < tol);
        // periodic: eigenvalues ±sqrt(2), 0
        let zero_diag = TransitionMatrix::star(3, false).unwrap();
        assert!((zero_diag.spectral_radius(tol).unwrap() - 2f64.sqrt()).abs() < tol);
        assert!(matches!(
            mat("1,1;0,1").spectral_radius(tol),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn word_counts() {
        assert_eq!(
            mat("1,1;1,1").count_admissible_words(3).unwrap(),
            BigUint::from(8u8)
        );
        assert_eq!(
            mat("1,1,1;1,0,0;1,0,0").count_admissible_words(2).unwrap(),
            BigUint::from(5u8)
        );
        assert_eq!(
            mat("1,1;1,0").count_admissible_words(4).unwrap(),
            BigUint::from(8u8)
        );
        assert_eq!(
            mat("1,1;1,0").count_admissible_words(1).unwrap(),
            BigUint::from(2u8)
        );
        assert!(mat("1,1;1,0").count_admissible_words(0).is_err());
        for a in [
            "1,1;1,1",
            "1,1;1,0",
            "1,1,1;1,0,0;1,0,0",
            "0,1,1;1,0,1;1,1,0",
        ] {
            let a = mat(a);
            for n in 1..=7 {
                assert_eq!(
                    a.count_admissible_words(n).unwrap(),
                    BigUint::from(brute_count(&a, n)),
                    "{a} n={n}"
                );
            }
        }
    }

    #[test]
    fn enumerations() {
        let show = |a: &str, n| -> Vec<String> {
            mat(a)
                .enumerate_admissible_words(n, 1 << 20)
                .unwrap()
                .iter()
                .map(|w| w.symbols().iter().map(|s| s.to_string()).collect())
                .collect()
        };
        assert_eq!(show("1,1;1,1", 2), ["11", "12", "21", "22"]);
        assert_eq!(show("1,1,1;1,0,0;1,0,0", 2), ["11", "12", "13", "21", "31"]);
        assert_eq!(show("1,1;1,0", 3), ["111", "112", "121", "211", "212"]);
        assert!(matches!(
            mat("1,1;1,1").enumerate_admissible_words(10, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn star_implies_irreducible_and_branching() {
        for m in 3..7 {
            for diag in [true, false] {
                let a = TransitionMatrix::star(m, diag).unwrap();
                if a.is_star(1, true) {
                    assert!(a.is_irreducible());
                    assert_eq!(a.branching_row(), Some(1));
                }
            }
        }
    }
}
