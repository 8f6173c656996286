//! Braid words, their permutations and the component data of their closures.
//!
//! Conventions used throughout the crate:
//!
//! * Letters are read bottom to top. Letter `+i` is `σ_i`, letter `-i` is
//!   `σ_i⁻¹`, and both act on the strands at positions `i` and `i + 1`.
//! * In `σ_i` the strand entering at position `i` passes over the strand at
//!   `i + 1`; this is a positive crossing. In `σ_i⁻¹` the strand entering at
//!   `i + 1` passes over, and the crossing is negative.
//! * Strands are oriented upward and the closure joins top position `j` to
//!   bottom position `j`.
//!
//! Positions are 0-based in the API; the text format and JSON reports use
//! 1-based positions.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BraidError {
    #[error("braid must have at least one strand")]
    NoStrands,
    #[error("letter {letter} is not a generator of B_{strands}")]
    BadLetter { letter: i32, strands: usize },
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("cannot parse braid {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A permutation of `0..len`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn pow(&self, n: usize) -> Permutation {
        let mut acc = Permutation::identity(self.len());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = base.compose(&acc);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// Disjoint cycles `(i, σ(i), σ²(i), …)` starting at each cycle's minimum,
    /// sorted by that minimum. Fixed points are 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.0[i];
            }
            out.push(cycle);
        }
        out
    }
}

/// A word in the Artin generators of `B_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(BraidError::BadLetter { letter: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn empty(strands: usize) -> Result<Self, BraidError> {
        Self::new(strands, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of letter signs.
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|&l| l.signum() as i64).sum()
    }

    /// `σ^β`: bottom position `i` is joined to top position `σ^β(i)`.
    pub fn permutation(&self) -> Permutation {
        // at[p] = bottom position of the strand currently at position p
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut sigma = vec![0; self.strands];
        for (top, &bottom) in at.iter().enumerate() {
            sigma[bottom] = top;
        }
        Permutation(sigma)
    }

    /// `β′β`: `self` is β′ and goes on top of `lower`.
    pub fn compose(&self, lower: &BraidWord) -> Result<BraidWord, BraidError> {
        if self.strands != lower.strands {
            return Err(BraidError::StrandMismatch(self.strands, lower.strands));
        }
        let mut letters = lower.letters.clone();
        letters.extend_from_slice(&self.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    /// `βⁿ` for `n ≥ 1`; `n = 0` gives the empty word.
    pub fn power(&self, n: usize) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.repeat(n),
        }
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&l| -l).collect(),
        }
    }

    /// Includes the word into `B_{m+extra}` on the first `m` strands.
    pub fn widen(&self, extra: usize) -> BraidWord {
        BraidWord {
            strands: self.strands + extra,
            letters: self.letters.clone(),
        }
    }

    /// Markov stabilization: `ι(β) σ_m^{±1}` in `B_{m+1}`.
    pub fn stabilize(&self, positive: bool) -> BraidWord {
        let m = self.strands as i32;
        let mut w = self.widen(1);
        w.letters.push(if positive { m } else { -m });
        w
    }

    pub fn components(&self) -> ComponentData {
        ComponentData::of(self)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    /// Parses `"<m>: l1 l2 … lk"`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| BraidError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let (m, rest) = text.split_once(':').ok_or_else(|| err("expected \"<m>: letters\""))?;
        let strands: usize = m.trim().parse().map_err(|_| err("bad strand count"))?;
        let letters = rest
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|_| err(&format!("bad letter {t:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        BraidWord::new(strands, letters)
    }
}

/// Components of the closure `β^∧`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentData {
    /// Cycles of `σ^β`, each starting at its minimal bottom position.
    pub cycles: Vec<Vec<usize>>,
    /// Signed count of crossings of each component with itself.
    pub self_writhe: Vec<i64>,
    /// Linking numbers; symmetric with zero diagonal.
    pub linking: Vec<Vec<i64>>,
    /// Component of each bottom position.
    pub component_of: Vec<usize>,
}

impl ComponentData {
    fn of(beta: &BraidWord) -> Self {
        let cycles = beta.permutation().cycles();
        let n = cycles.len();
        let mut component_of = vec![0; beta.strands];
        for (t, c) in cycles.iter().enumerate() {
            for &i in c {
                component_of[i] = t;
            }
        }
        let mut self_writhe = vec![0i64; n];
        let mut doubled = vec![vec![0i64; n]; n];
        let mut at: Vec<usize> = (0..beta.strands).collect();
        for &l in &beta.letters {
            let i = l.unsigned_abs() as usize - 1;
            let sign = l.signum() as i64;
            let (a, b) = (component_of[at[i]], component_of[at[i + 1]]);
            if a == b {
                self_writhe[a] += sign;
            } else {
                doubled[a][b] += sign;
                doubled[b][a] += sign;
            }
            at.swap(i, i + 1);
        }
        let linking = doubled
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        debug_assert!(v % 2 == 0, "odd inter-component crossing sum");
                        v / 2
                    })
                    .collect()
            })
            .collect();
        ComponentData {
            cycles,
            self_writhe,
            linking,
            component_of,
        }
    }

    pub fn count(&self) -> usize {
        self.cycles.len()
    }

    /// The bottom position `i(t,1)` of each component.
    pub fn basepoints(&self) -> Vec<usize> {
        self.cycles.iter().map(|c| c[0]).collect()
    }
}
