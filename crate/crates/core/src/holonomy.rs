//! Homomorphisms from the group of a closed braid into a finite group.
//!
//! A homomorphism `π₁(β^∧) → Γ` is determined by the images of the bottom
//! meridians `x_1..x_m` of the braid, and a tuple of labels comes from a
//! homomorphism exactly when the Artin action of `β` fixes it. The labels are
//! pushed upward through each crossing:
//!
//! ```text
//!   σ_i    : (a_i, a_{i+1}) ↦ (a_i a_{i+1} a_i⁻¹, a_i)
//!   σ_i⁻¹  : (a_i, a_{i+1}) ↦ (a_{i+1}, a_{i+1}⁻¹ a_i a_{i+1})
//! ```
//!
//! The over-strand keeps its label; the under-strand's label is conjugated by
//! the over-strand label raised to the crossing sign.

use rayon::prelude::*;
use thiserror::Error;

use crate::braid::{BraidWord, ComponentData};
use crate::group::{Elem, FiniteGroup};

/// Default cap on the number of candidate tuples one enumeration may visit.
pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HolonomyError {
    #[error("tuple has length {got}, braid has {expected} strands")]
    LengthMismatch { expected: usize, got: usize },
    #[error("meridian constraint has length {got}, closure has {expected} components")]
    ConstraintMismatch { expected: usize, got: usize },
    #[error("element index {0} out of range")]
    ElementOutOfRange(Elem),
    #[error("tuple is not fixed by the braid action")]
    NotAFixedPoint,
    #[error("component {component} out of range")]
    NoSuchComponent { component: usize },
    #[error("search space of {candidates} candidates exceeds the cap of {cap}")]
    SearchTooLarge { candidates: u128, cap: u64 },
    #[error("cannot build thread pool: {0}")]
    ThreadPool(String),
}

/// One homomorphism, recorded by its bottom labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HomRecord {
    pub tuple: Vec<Elem>,
    /// Image of the meridian of each component, taken at its basepoint.
    pub meridian: Vec<Elem>,
    /// Image of the 0-framed longitude of each component.
    pub longitude: Vec<Elem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumOptions {
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
    pub cap: u64,
    /// Skip the cap check.
    pub allow_large: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            threads: None,
            cap: DEFAULT_SEARCH_CAP,
            allow_large: false,
        }
    }
}

impl EnumOptions {
    pub fn with_threads(threads: usize) -> Self {
        EnumOptions {
            threads: Some(threads),
            ..Self::default()
        }
    }

    /// Runs `f` on a pool of the configured size.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R, HolonomyError> {
        match self.threads {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .map_err(|e| HolonomyError::ThreadPool(e.to_string()))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Pushes bottom labels `a` up through `beta` and returns the top labels.
pub fn artin_action(beta: &BraidWord, a: &[Elem], group: &FiniteGroup) -> Result<Vec<Elem>, HolonomyError> {
    check_tuple(beta, a, group)?;
    let mut out = a.to_vec();
    act_in_place(beta.letters(), &mut out, group);
    Ok(out)
}

fn check_tuple(beta: &BraidWord, a: &[Elem], group: &FiniteGroup) -> Result<(), HolonomyError> {
    if a.len() != beta.strands() {
        return Err(HolonomyError::LengthMismatch {
            expected: beta.strands(),
            got: a.len(),
        });
    }
    if let Some(&bad) = a.iter().find(|&&g| g as usize >= group.order()) {
        return Err(HolonomyError::ElementOutOfRange(bad));
    }
    Ok(())
}

#[inline]
fn act_in_place(letters: &[i32], labels: &mut [Elem], g: &FiniteGroup) {
    for &l in letters {
        let i = l.unsigned_abs() as usize - 1;
        let (x, y) = (labels[i], labels[i + 1]);
        if l > 0 {
            labels[i] = g.conj(x, y);
            labels[i + 1] = x;
        } else {
            labels[i] = y;
            labels[i + 1] = g.conj(g.inv(y), x);
        }
    }
}

/// Braid plus the data of its closure, reused across many tuples.
#[derive(Debug, Clone)]
pub struct ClosedBraid {
    beta: BraidWord,
    comps: ComponentData,
}

impl ClosedBraid {
    pub fn new(beta: BraidWord) -> Self {
        let comps = beta.components();
        ClosedBraid { beta, comps }
    }

    pub fn braid(&self) -> &BraidWord {
        &self.beta
    }

    pub fn components(&self) -> &ComponentData {
        &self.comps
    }

    pub fn is_fixed(&self, a: &[Elem], group: &FiniteGroup) -> bool {
        let mut top = a.to_vec();
        act_in_place(self.beta.letters(), &mut top, group);
        top == a
    }

    /// Blackboard-framed longitude of every component.
    ///
    /// Walks the word once. Each strand segment (one pass of a component
    /// through the braid) collects the over-strand labels it passes under,
    /// raised to the crossing sign, multiplying on the left; the passes of a
    /// component are then chained in traversal order the same way. With this
    /// ordering the result `λ` satisfies `λ x λ⁻¹ = x` for the basepoint
    /// label `x`.
    fn blackboard_longitudes(&self, a: &[Elem], g: &FiniteGroup) -> Vec<Elem> {
        let m = self.beta.strands();
        let mut labels = a.to_vec();
        // strand[p] = bottom position of the strand now at position p
        let mut strand: Vec<usize> = (0..m).collect();
        let mut pass = vec![g.identity(); m];
        for &l in self.beta.letters() {
            let i = l.unsigned_abs() as usize - 1;
            let (x, y) = (labels[i], labels[i + 1]);
            if l > 0 {
                // strand at i+1 passes under the one at i
                let s = strand[i + 1];
                pass[s] = g.mul(x, pass[s]);
                labels[i] = g.conj(x, y);
                labels[i + 1] = x;
            } else {
                let s = strand[i];
                pass[s] = g.mul(g.inv(y), pass[s]);
                labels[i] = y;
                labels[i + 1] = g.conj(g.inv(y), x);
            }
            strand.swap(i, i + 1);
        }
        self.comps
            .cycles
            .iter()
            .map(|cycle| cycle.iter().fold(g.identity(), |acc, &b| g.mul(pass[b], acc)))
            .collect()
    }

    /// 0-framed longitude images of all components for a fixed tuple.
    fn longitudes_unchecked(&self, a: &[Elem], g: &FiniteGroup) -> Vec<Elem> {
        self.blackboard_longitudes(a, g)
            .into_iter()
            .enumerate()
            .map(|(t, lam)| {
                let x = a[self.comps.cycles[t][0]];
                g.mul(lam, g.power(x, -self.comps.self_writhe[t]))
            })
            .collect()
    }

    pub fn longitude_image(&self, a: &[Elem], t: usize, g: &FiniteGroup) -> Result<Elem, HolonomyError> {
        check_tuple(&self.beta, a, g)?;
        if t >= self.comps.count() {
            return Err(HolonomyError::NoSuchComponent { component: t });
        }
        if !self.is_fixed(a, g) {
            return Err(HolonomyError::NotAFixedPoint);
        }
        Ok(self.longitudes_unchecked(a, g)[t])
    }

    pub fn record(&self, a: Vec<Elem>, g: &FiniteGroup) -> HomRecord {
        let meridian = self.comps.cycles.iter().map(|c| a[c[0]]).collect();
        let longitude = self.longitudes_unchecked(&a, g);
        HomRecord {
            tuple: a,
            meridian,
            longitude,
        }
    }

    /// Candidate labels per bottom position under an optional meridian
    /// prescription. Every label on component `t` is conjugate to `x_t`,
    /// and the basepoint label is `x_t` itself.
    fn candidates(&self, g: &FiniteGroup, constraint: Option<&[Elem]>) -> Result<Vec<Vec<Elem>>, HolonomyError> {
        let m = self.beta.strands();
        let Some(x) = constraint else {
            return Ok(vec![g.elements().collect(); m]);
        };
        if x.len() != self.comps.count() {
            return Err(HolonomyError::ConstraintMismatch {
                expected: self.comps.count(),
                got: x.len(),
            });
        }
        if let Some(&bad) = x.iter().find(|&&e| e as usize >= g.order()) {
            return Err(HolonomyError::ElementOutOfRange(bad));
        }
        let mut out = vec![Vec::new(); m];
        for (t, cycle) in self.comps.cycles.iter().enumerate() {
            out[cycle[0]] = vec![x[t]];
            for &i in &cycle[1..] {
                out[i] = g.class_of(x[t]).members.clone();
            }
        }
        Ok(out)
    }

    /// Number of tuples the enumeration would visit.
    pub fn search_size(&self, g: &FiniteGroup, constraint: Option<&[Elem]>) -> Result<u128, HolonomyError> {
        let cands = self.candidates(g, constraint)?;
        Ok(cands
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
            .unwrap_or(u128::MAX))
    }

    /// All fixed tuples, in lexicographic order, as records.
    pub fn enumerate(
        &self,
        g: &FiniteGroup,
        constraint: Option<&[Elem]>,
        opts: &EnumOptions,
    ) -> Result<Vec<HomRecord>, HolonomyError> {
        let fixed = self.fixed_tuples(g, constraint, opts)?;
        opts.install(|| fixed.into_par_iter().map(|a| self.record(a, g)).collect())
    }

    pub fn count(&self, g: &FiniteGroup, constraint: Option<&[Elem]>, opts: &EnumOptions) -> Result<u64, HolonomyError> {
        let cands = self.candidates(g, constraint)?;
        self.check_cap(&cands, opts)?;
        opts.install(|| {
            self.partition(&cands)
                .into_par_iter()
                .map(|prefix| {
                    let mut n = 0u64;
                    self.scan(g, &cands, &prefix, |_| n += 1);
                    n
                })
                .sum()
        })
    }

    /// Fixed tuples in lexicographic order.
    pub fn fixed_tuples(
        &self,
        g: &FiniteGroup,
        constraint: Option<&[Elem]>,
        opts: &EnumOptions,
    ) -> Result<Vec<Vec<Elem>>, HolonomyError> {
        let cands = self.candidates(g, constraint)?;
        self.check_cap(&cands, opts)?;
        let chunks: Vec<Vec<Vec<Elem>>> = opts.install(|| {
            self.partition(&cands)
                .into_par_iter()
                .map(|prefix| {
                    let mut found = Vec::new();
                    self.scan(g, &cands, &prefix, |a| found.push(a.to_vec()));
                    found
                })
                .collect()
        })?;
        Ok(chunks.into_iter().flatten().collect())
    }

    fn check_cap(&self, cands: &[Vec<Elem>], opts: &EnumOptions) -> Result<(), HolonomyError> {
        let size = cands
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
            .unwrap_or(u128::MAX);
        if !opts.allow_large && size > opts.cap as u128 {
            return Err(HolonomyError::SearchTooLarge {
                candidates: size,
                cap: opts.cap,
            });
        }
        Ok(())
    }

    /// Splits the lexicographic tuple space into prefix blocks, in order.
    fn partition(&self, cands: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        const TARGET_BLOCKS: usize = 256;
        let mut prefixes: Vec<Vec<Elem>> = vec![Vec::new()];
        for c in cands.iter().take(cands.len().saturating_sub(1)) {
            if prefixes.len() >= TARGET_BLOCKS {
                break;
            }
            prefixes = prefixes
                .into_iter()
                .flat_map(|p| {
                    c.iter().map(move |&e| {
                        let mut q = p.clone();
                        q.push(e);
                        q
                    })
                })
                .collect();
        }
        prefixes
    }

    /// Odometer over all completions of `prefix`, calling `hit` on fixed tuples.
    fn scan(&self, g: &FiniteGroup, cands: &[Vec<Elem>], prefix: &[Elem], mut hit: impl FnMut(&[Elem])) {
        let m = cands.len();
        let k = prefix.len();
        let mut digits = vec![0usize; m - k];
        if cands[k..].iter().any(Vec::is_empty) {
            return;
        }
        let mut tuple: Vec<Elem> = prefix.to_vec();
        tuple.extend(cands[k..].iter().map(|c| c[0]));
        let mut work = vec![0 as Elem; m];
        let letters = self.beta.letters();
        loop {
            work.copy_from_slice(&tuple);
            act_in_place(letters, &mut work, g);
            if work == tuple {
                hit(&tuple);
            }
            // advance the odometer, last position fastest
            let mut pos = m - k;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                let c = &cands[k + pos];
                digits[pos] += 1;
                if digits[pos] < c.len() {
                    tuple[k + pos] = c[digits[pos]];
                    break;
                }
                digits[pos] = 0;
                tuple[k + pos] = c[0];
            }
        }
    }
}

/// All homomorphisms `π₁(β^∧) → Γ`, optionally with prescribed meridian images.
pub fn enumerate_homs(
    beta: &BraidWord,
    group: &FiniteGroup,
    constraint: Option<&[Elem]>,
    opts: &EnumOptions,
) -> Result<Vec<HomRecord>, HolonomyError> {
    ClosedBraid::new(beta.clone()).enumerate(group, constraint, opts)
}

pub fn count_homs(
    beta: &BraidWord,
    group: &FiniteGroup,
    constraint: Option<&[Elem]>,
    opts: &EnumOptions,
) -> Result<u64, HolonomyError> {
    ClosedBraid::new(beta.clone()).count(group, constraint, opts)
}

/// 0-framed longitude image of component `t` for a fixed tuple `a`.
pub fn longitude_image(beta: &BraidWord, a: &[Elem], t: usize, group: &FiniteGroup) -> Result<Elem, HolonomyError> {
    ClosedBraid::new(beta.clone()).longitude_image(a, t, group)
}
