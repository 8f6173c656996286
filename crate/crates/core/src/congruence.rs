//! Mod-p congruence between a periodic closed braid and its quotient.
//!
//! For a braid `β` the closure of `β^{p^k}` is `p^k`-periodic with quotient
//! `β^∧`. When every cycle of `σ^β` has length prime to `p`, both closures
//! have the same number of components, and for any finite group Γ of order
//! prime to `p` the class counts satisfy
//!
//! ```text
//!   DW((β^{p^k})^∧)_{x,[h^{p^k}]} ≡ DW(β^∧)_{x,[h]}   (mod p)
//! ```
//!
//! for every meridian tuple `x` and every class tuple `[h]` of the
//! centralizers `Cen(x_t)`. [`verify`] checks this by counting both sides.
//!
//! Components are matched through their bottom basepoints: component `t` of
//! the periodic closure is the cycle of `σ^{p^k}` through the basepoint of
//! component `t` of the quotient.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{BraidError, BraidWord};
use crate::dw::{self, Column, DwError, XScope};
use crate::group::{Elem, FiniteGroup, GroupError};
use crate::holonomy::{ClosedBraid, EnumOptions, HolonomyError};

/// Longest periodic braid word that will be materialized.
pub const MAX_PERIODIC_LETTERS: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent k must be at least 1")]
    BadExponent,
    #[error("p = {p} divides the group order {order}")]
    GroupOrderDivisible { p: u64, order: usize },
    #[error("cycle of length {cycle_length} in the braid permutation is divisible by p = {p}; the periodic closure has more components than the quotient")]
    ComponentMismatch { cycle_length: usize, p: u64 },
    #[error("periodic braid would have {letters} letters (cap {cap})")]
    PeriodTooLarge { letters: u128, cap: usize },
    #[error(transparent)]
    Dw(#[from] DwError),
}

impl From<HolonomyError> for CongruenceError {
    fn from(e: HolonomyError) -> Self {
        CongruenceError::Dw(DwError::Holonomy(e))
    }
}

impl CongruenceError {
    /// True for a violated hypothesis of the congruence.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            CongruenceError::NotPrime(_)
                | CongruenceError::BadExponent
                | CongruenceError::GroupOrderDivisible { .. }
                | CongruenceError::ComponentMismatch { .. }
        )
    }

    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            CongruenceError::PeriodTooLarge { .. }
                | CongruenceError::Dw(DwError::Holonomy(HolonomyError::SearchTooLarge { .. }))
        )
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A validated quotient/periodic pair together with the group.
#[derive(Debug, Clone)]
pub struct CongruenceInstance {
    pub beta: BraidWord,
    pub p: u64,
    pub k: u32,
    pub group: Arc<FiniteGroup>,
    quotient: ClosedBraid,
    periodic: ClosedBraid,
    /// `alignment[t]` is the periodic component matched with quotient component `t`.
    alignment: Vec<usize>,
    /// `p^k mod #Γ`, enough to raise group elements to the `p^k`-th power.
    period_exponent: i64,
}

impl CongruenceInstance {
    pub fn quotient(&self) -> &ClosedBraid {
        &self.quotient
    }

    pub fn periodic(&self) -> &ClosedBraid {
        &self.periodic
    }

    pub fn alignment(&self) -> &[usize] {
        &self.alignment
    }

    pub fn components(&self) -> usize {
        self.quotient.components().count()
    }

    /// `g^{p^k}`.
    pub fn period_power(&self, g: Elem) -> Elem {
        self.group.power(g, self.period_exponent)
    }
}

/// Validates the hypotheses and builds `β^{p^k}`.
pub fn check_preconditions(
    beta: &BraidWord,
    p: u64,
    k: u32,
    group: Arc<FiniteGroup>,
) -> Result<CongruenceInstance, CongruenceError> {
    if !is_prime(p) {
        return Err(CongruenceError::NotPrime(p));
    }
    if k == 0 {
        return Err(CongruenceError::BadExponent);
    }
    if (group.order() as u64).is_multiple_of(p) {
        return Err(CongruenceError::GroupOrderDivisible { p, order: group.order() });
    }
    let quotient = ClosedBraid::new(beta.clone());
    if let Some(c) = quotient.components().cycles.iter().find(|c| (c.len() as u64).is_multiple_of(p)) {
        return Err(CongruenceError::ComponentMismatch { cycle_length: c.len(), p });
    }
    let period = (p as u128).checked_pow(k);
    let letters = period.and_then(|q| q.checked_mul(beta.len() as u128));
    let period = match (period, letters) {
        (Some(q), Some(l)) if l <= MAX_PERIODIC_LETTERS as u128 && q <= u64::MAX as u128 => q as u64,
        _ => {
            return Err(CongruenceError::PeriodTooLarge {
                letters: letters.unwrap_or(u128::MAX),
                cap: MAX_PERIODIC_LETTERS,
            })
        }
    };
    // With an empty word the period only enters through h^{p^k}.
    let periodic = ClosedBraid::new(beta.power(if beta.is_empty() { 1 } else { period as usize }));
    let periodic_of = &periodic.components().component_of;
    let alignment: Vec<usize> = quotient
        .components()
        .basepoints()
        .iter()
        .map(|&b| periodic_of[b])
        .collect();
    debug_assert_eq!(alignment.len(), periodic.components().count());
    let order = group.order() as u64;
    let period_exponent = pow_mod(p, k, order) as i64;
    Ok(CongruenceInstance {
        beta: beta.clone(),
        p,
        k,
        group,
        quotient,
        periodic,
        alignment,
        period_exponent,
    })
}

fn pow_mod(base: u64, exp: u32, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let m = modulus as u128;
    for _ in 0..exp {
        acc = acc * base as u128 % m;
    }
    acc as u64
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Violation {
    pub x: Vec<Elem>,
    pub hclass: Vec<Elem>,
    /// Class representatives of `h^{p^k}` used on the periodic side.
    pub lhs_hclass: Vec<Elem>,
    pub lhs_count: u64,
    pub rhs_count: u64,
}

/// Both sides of the congruence at one `(x, [h])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub x: Vec<Elem>,
    pub hclass: Vec<Elem>,
    pub lhs_hclass: Vec<Elem>,
    pub lhs_count: u64,
    pub rhs_count: u64,
}

#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub braid: BraidWord,
    pub periodic_braid_len: usize,
    pub group: String,
    pub p: u64,
    pub k: u32,
    pub n: usize,
    pub scope: XScope,
    pub cases_checked: u64,
    pub violations: Vec<Violation>,
    /// Every case, in key order; kept only when requested.
    pub cases: Option<Vec<Case>>,
    pub elapsed: f64,
}

impl CongruenceReport {
    pub fn confirmed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Serializable form. Wall time is left out unless asked for so that the
    /// output is byte-stable.
    pub fn to_json(&self, group: &FiniteGroup, with_timing: bool) -> ReportJson {
        let names = |v: &[Elem]| v.iter().map(|&e| group.name(e).to_string()).collect::<Vec<_>>();
        ReportJson {
            braid: self.braid.to_string(),
            periodic_braid: format!("({})^{}^{}", self.braid, self.p, self.k),
            group: self.group.clone(),
            p: self.p,
            k: self.k,
            components: self.n,
            scope: self.scope.as_str(),
            cases_checked: self.cases_checked,
            confirmed: self.confirmed(),
            violations: self
                .violations
                .iter()
                .map(|v| ViolationJson {
                    x: names(&v.x),
                    h_class_reps: names(&v.hclass),
                    lhs_h_class_reps: names(&v.lhs_hclass),
                    lhs_count: v.lhs_count,
                    rhs_count: v.rhs_count,
                })
                .collect(),
            elapsed_seconds: with_timing.then_some(self.elapsed),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationJson {
    pub x: Vec<String>,
    pub h_class_reps: Vec<String>,
    pub lhs_h_class_reps: Vec<String>,
    pub lhs_count: u64,
    pub rhs_count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson {
    pub braid: String,
    pub periodic_braid: String,
    pub group: String,
    pub p: u64,
    pub k: u32,
    pub components: usize,
    pub scope: &'static str,
    pub cases_checked: u64,
    pub confirmed: bool,
    pub violations: Vec<ViolationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_seconds: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    pub scope: XScope,
    pub enumeration: EnumOptions,
    pub keep_cases: bool,
}

fn cases_at(inst: &CongruenceInstance, x: &[Elem], quot: &Column, per: &Column) -> Vec<Case> {
    let g = &inst.group;
    let cen = dw::centralizer_classes(g, x);
    let mut out = Vec::new();
    let mut hclass: Vec<Elem> = Vec::with_capacity(x.len());
    let reps: Vec<Vec<Elem>> = cen.iter().map(|c| c.reps().collect()).collect();
    let mut digits = vec![0usize; x.len()];
    loop {
        hclass.clear();
        hclass.extend(digits.iter().zip(&reps).map(|(&d, r)| r[d]));
        let lhs_hclass: Vec<Elem> = hclass
            .iter()
            .zip(&cen)
            .map(|(&h, c)| c.rep_of(inst.period_power(h)).expect("powers stay in the centralizer"))
            .collect();
        let mut lhs_key = vec![0; x.len()];
        for (t, &pt) in inst.alignment.iter().enumerate() {
            lhs_key[pt] = lhs_hclass[t];
        }
        out.push(Case {
            x: x.to_vec(),
            hclass: hclass.clone(),
            lhs_count: per.classes.get(&lhs_key).copied().unwrap_or(0),
            rhs_count: quot.classes.get(&hclass).copied().unwrap_or(0),
            lhs_hclass,
        });
        let mut t = x.len();
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            digits[t] += 1;
            if digits[t] < reps[t].len() {
                break;
            }
            digits[t] = 0;
        }
    }
}

/// Checks the congruence at every `(x, [h])` in scope.
pub fn verify(inst: &CongruenceInstance, opts: &VerifyOptions) -> Result<CongruenceReport, CongruenceError> {
    let start = Instant::now();
    let g = &*inst.group;
    let n = inst.components();
    let xs = opts.scope.tuples(g, n);
    let inner = EnumOptions {
        threads: None,
        ..opts.enumeration
    };
    // Check the cap for every x before spawning any work.
    for x in &xs {
        for (cb, xx) in [(&inst.quotient, x.clone()), (&inst.periodic, permute_to_periodic(inst, x))] {
            let size = cb.search_size(g, Some(&xx))?;
            if !inner.allow_large && size > inner.cap as u128 {
                return Err(HolonomyError::SearchTooLarge {
                    candidates: size,
                    cap: inner.cap,
                }
                .into());
            }
        }
    }
    let per_x_cases: Vec<Result<Vec<Case>, CongruenceError>> = opts.enumeration.install(|| {
        xs.par_iter()
            .map(|x| {
                let quot = dw::column(&inst.quotient, g, x, &inner)?;
                let per = dw::column(&inst.periodic, g, &permute_to_periodic(inst, x), &inner)?;
                Ok(cases_at(inst, x, &quot, &per))
            })
            .collect()
    })?;
    let mut cases_checked = 0u64;
    let mut violations = Vec::new();
    let mut kept = opts.keep_cases.then(Vec::new);
    for cases in per_x_cases {
        let cases = cases?;
        cases_checked += cases.len() as u64;
        for c in &cases {
            if c.lhs_count % inst.p != c.rhs_count % inst.p {
                violations.push(Violation {
                    x: c.x.clone(),
                    hclass: c.hclass.clone(),
                    lhs_hclass: c.lhs_hclass.clone(),
                    lhs_count: c.lhs_count,
                    rhs_count: c.rhs_count,
                });
            }
        }
        if let Some(k) = kept.as_mut() {
            k.extend(cases);
        }
    }
    violations.sort();
    Ok(CongruenceReport {
        braid: inst.beta.clone(),
        periodic_braid_len: inst.periodic.braid().len(),
        group: g.label().to_string(),
        p: inst.p,
        k: inst.k,
        n,
        scope: opts.scope,
        cases_checked,
        violations,
        cases: kept,
        elapsed: start.elapsed().as_secs_f64(),
    })
}

fn permute_to_periodic(inst: &CongruenceInstance, x: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; x.len()];
    for (t, &pt) in inst.alignment.iter().enumerate() {
        out[pt] = x[t];
    }
    out
}

/// One catalog line: `{"braid": "m: letters", "p": .., "k": .., "group": ".."}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub braid: String,
    pub p: u64,
    pub k: u32,
    pub group: String,
}

impl CatalogEntry {
    pub fn new(braid: &str, p: u64, k: u32, group: &str) -> Self {
        CatalogEntry {
            braid: braid.to_string(),
            p,
            k,
            group: group.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepStatus {
    Pass,
    Violation,
    PreconditionFailed,
    ResourceExceeded,
    InvalidInput,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    #[serde(flatten)]
    pub entry: CatalogEntry,
    pub status: SweepStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    pub cases_checked: u64,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip)]
    pub elapsed: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub entries: Vec<SweepEntry>,
    pub passed: usize,
    pub failed: usize,
}

impl SweepSummary {
    /// 0 when everything passed; 1 on any violation; otherwise 3 if a
    /// resource cap was hit and 2 for rejected inputs.
    pub fn exit_code(&self) -> i32 {
        let has = |s: SweepStatus| self.entries.iter().any(|e| e.status == s);
        if has(SweepStatus::Violation) {
            1
        } else if has(SweepStatus::ResourceExceeded) {
            3
        } else if has(SweepStatus::PreconditionFailed) || has(SweepStatus::InvalidInput) {
            2
        } else {
            0
        }
    }
}

#[derive(Debug, Error)]
enum EntryError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
}

fn run_entry(entry: &CatalogEntry, opts: &VerifyOptions) -> Result<(usize, CongruenceReport), EntryError> {
    let beta: BraidWord = entry.braid.parse()?;
    let group = Arc::new(FiniteGroup::from_spec(&entry.group)?);
    let inst = check_preconditions(&beta, entry.p, entry.k, group)?;
    let report = verify(&inst, opts)?;
    Ok((inst.components(), report))
}

/// Verifies every catalog entry. Errors are recorded per entry.
pub fn sweep(catalog: &[CatalogEntry], opts: &VerifyOptions) -> SweepSummary {
    let mut entries = Vec::with_capacity(catalog.len());
    for entry in catalog {
        let start = Instant::now();
        let mut out = SweepEntry {
            entry: entry.clone(),
            status: SweepStatus::Pass,
            components: None,
            cases_checked: 0,
            violations: 0,
            message: None,
            elapsed: 0.0,
        };
        match run_entry(entry, opts) {
            Ok((n, report)) => {
                out.components = Some(n);
                out.cases_checked = report.cases_checked;
                out.violations = report.violations.len();
                if !report.confirmed() {
                    out.status = SweepStatus::Violation;
                }
            }
            Err(e) => {
                out.status = match &e {
                    EntryError::Congruence(c) if c.is_resource() => SweepStatus::ResourceExceeded,
                    EntryError::Group(GroupError::GroupTooLarge { .. }) => SweepStatus::ResourceExceeded,
                    EntryError::Congruence(c) if c.is_precondition() => SweepStatus::PreconditionFailed,
                    _ => SweepStatus::InvalidInput,
                };
                out.message = Some(e.to_string());
            }
        }
        out.elapsed = start.elapsed().as_secs_f64();
        entries.push(out);
    }
    let passed = entries.iter().filter(|e| e.status == SweepStatus::Pass).count();
    SweepSummary {
        failed: entries.len() - passed,
        passed,
        entries,
    }
}
