//! Finite fields `F_{p^e}` and square matrices over them.
//!
//! A field is `F_p[t] / (f)` for the lexicographically smallest monic
//! irreducible `f` of degree `e`, comparing coefficient lists from the
//! constant term up. Elements are coefficient arrays of length `e`.
//!
//! The main use is [`frobenius_trace_check`], which tests
//! `tr(A^p) = tr(A)^p` (and its iterate with `p^k`) on random matrices.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::congruence::is_prime;

pub const MAX_DEGREE: usize = 12;
/// Largest field order for extension degrees above 1.
pub const MAX_EXTENSION_ORDER: u64 = 1 << 20;
/// Largest prime accepted; keeps products of coefficients inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree {e} over F_{p} is not supported (1 <= e <= {MAX_DEGREE}, p^e <= 2^20 for e > 1)")]
    DegreeTooLarge { p: u64, e: usize },
    #[error("prime {0} exceeds the supported range")]
    PrimeTooLarge(u64),
    #[error("matrix dimensions differ: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("matrix is singular")]
    Singular,
}

/// An element of `F_{p^e}`: coefficients of `1, t, …, t^{e-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fq([u64; MAX_DEGREE]);

impl Fq {
    pub fn coeffs(&self, field: &FqField) -> &[u64] {
        &self.0[..field.e]
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).unwrap_or(0);
        f.debug_list().entries(&self.0[..=last]).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqField {
    p: u64,
    e: usize,
    /// Monic, `e + 1` coefficients from the constant term up.
    modulus: Vec<u64>,
}

impl FqField {
    pub fn new(p: u64, e: usize) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p));
        }
        let too_big = e > 1 && (p as u128).pow(e as u32) > MAX_EXTENSION_ORDER as u128;
        if e == 0 || e > MAX_DEGREE || too_big {
            return Err(FieldError::DegreeTooLarge { p, e });
        }
        let modulus = smallest_irreducible(p, e);
        Ok(FqField { p, e, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.e as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fq {
        Fq([0; MAX_DEGREE])
    }

    pub fn one(&self) -> Fq {
        self.from_int(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fq {
        let mut c = [0; MAX_DEGREE];
        c[0] = n.rem_euclid(self.p as i64) as u64;
        Fq(c)
    }

    /// The element whose base-`p` digits (constant term first) spell `index`.
    pub fn element(&self, mut index: u64) -> Fq {
        let mut c = [0; MAX_DEGREE];
        for slot in c.iter_mut().take(self.e) {
            *slot = index % self.p;
            index /= self.p;
        }
        Fq(c)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn random(&self, rng: &mut impl Rng) -> Fq {
        let mut c = [0; MAX_DEGREE];
        for slot in c.iter_mut().take(self.e) {
            *slot = rng.gen_range(0..self.p);
        }
        Fq(c)
    }

    pub fn is_zero(&self, a: Fq) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let mut c = [0; MAX_DEGREE];
        for (i, ci) in c.iter_mut().enumerate().take(self.e) {
            *ci = (a.0[i] + b.0[i]) % self.p;
        }
        Fq(c)
    }

    pub fn neg(&self, a: Fq) -> Fq {
        let mut c = [0; MAX_DEGREE];
        for (ci, &ai) in c.iter_mut().zip(&a.0).take(self.e) {
            *ci = (self.p - ai) % self.p;
        }
        Fq(c)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p;
        let e = self.e;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..e {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..e {
                prod[i + j] = (prod[i + j] + a.0[i] * b.0[j]) % p;
            }
        }
        // t^e = -(m_0 + … + m_{e-1} t^{e-1})
        for d in (e..2 * e - 1).rev() {
            let top = prod[d];
            if top == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..e {
                let sub = top * self.modulus[i] % p;
                let k = d - e + i;
                prod[k] = (prod[k] + p - sub) % p;
            }
        }
        let mut c = [0; MAX_DEGREE];
        c[..e].copy_from_slice(&prod[..e]);
        Fq(c)
    }

    pub fn pow(&self, a: Fq, mut n: u64) -> Fq {
        let mut acc = self.one();
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// `a⁻¹ = a^{q-2}`; `None` for zero.
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        (!self.is_zero(a)).then(|| self.pow(a, self.order() - 2))
    }

    /// `λ ↦ λ^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p)
    }
}

/// Remainder of `a` modulo the monic `m`, coefficients mod `p`, truncated to
/// `deg m` entries.
fn poly_rem_in_place(a: &mut Vec<u64>, m: &[u64], p: u64) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let top = a.pop().expect("nonempty");
        if top == 0 {
            continue;
        }
        let shift = a.len() - dm;
        for (ak, &mi) in a[shift..].iter_mut().zip(&m[..dm]) {
            *ak = (*ak + p - top * mi % p) % p;
        }
    }
}

fn divides(d: &[u64], f: &[u64], p: u64) -> bool {
    let mut r = f.to_vec();
    poly_rem_in_place(&mut r, d, p);
    r.iter().all(|&c| c == 0)
}

/// Base-`p` digits of `index`, most significant first, as `len` coefficients
/// from the constant term up. Counting up therefore walks coefficient lists
/// in lexicographic order.
fn lex_coeffs(mut index: u64, p: u64, len: usize) -> Vec<u64> {
    let mut c = vec![0; len];
    for slot in c.iter_mut().rev() {
        *slot = index % p;
        index /= p;
    }
    c
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len() - 1;
    for d in 1..=e / 2 {
        for idx in 0..p.pow(d as u32) {
            let mut div = lex_coeffs(idx, p, d);
            div.push(1);
            if divides(&div, f, p) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u64, e: usize) -> Vec<u64> {
    (0..p.pow(e as u32))
        .map(|idx| {
            let mut f = lex_coeffs(idx, p, e);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

/// Square matrix over a finite field, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: Arc<FqField>,
    dim: usize,
    entries: Vec<Fq>,
}

impl FqMatrix {
    pub fn zero(field: Arc<FqField>, dim: usize) -> Self {
        let z = field.zero();
        FqMatrix {
            field,
            dim,
            entries: vec![z; dim * dim],
        }
    }

    pub fn identity(field: Arc<FqField>, dim: usize) -> Self {
        let mut m = Self::zero(field, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = m.field.one();
        }
        m
    }

    /// Rows of integer entries, reduced into the prime field.
    pub fn from_ints(field: Arc<FqField>, rows: &[Vec<i64>]) -> Result<Self, FieldError> {
        let dim = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(FieldError::DimMismatch(dim, r.len()));
        }
        let entries = rows.iter().flatten().map(|&v| field.from_int(v)).collect();
        Ok(FqMatrix { field, dim, entries })
    }

    pub fn random(field: Arc<FqField>, dim: usize, rng: &mut impl Rng) -> Self {
        let entries = (0..dim * dim).map(|_| field.random(rng)).collect();
        FqMatrix { field, dim, entries }
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.entries[i * self.dim + j] = v;
    }

    fn compatible(&self, other: &FqMatrix) -> Result<(), FieldError> {
        if self.field != other.field {
            return Err(FieldError::FieldMismatch);
        }
        if self.dim != other.dim {
            return Err(FieldError::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix, FieldError> {
        self.compatible(other)?;
        let f = &*self.field;
        let n = self.dim;
        let mut out = Self::zero(self.field.clone(), n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..n {
                    let cell = &mut out.entries[i * n + j];
                    *cell = f.add(*cell, f.mul(a, other.entries[k * n + j]));
                }
            }
        }
        Ok(out)
    }

    /// `A^n` by binary exponentiation; `A^0 = I`.
    pub fn pow(&self, mut n: u64) -> FqMatrix {
        let mut acc = Self::identity(self.field.clone(), self.dim);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).expect("same field and size");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same field and size");
            }
        }
        acc
    }

    pub fn trace(&self) -> Fq {
        let f = &*self.field;
        (0..self.dim).fold(f.zero(), |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<FqMatrix, FieldError> {
        let f = &*self.field;
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(self.field.clone(), n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !f.is_zero(a.get(r, col))).ok_or(FieldError::Singular)?;
            for j in 0..n {
                a.entries.swap(col * n + j, pivot * n + j);
                inv.entries.swap(col * n + j, pivot * n + j);
            }
            let s = f.inv(a.get(col, col)).expect("nonzero pivot");
            for j in 0..n {
                a.set(col, j, f.mul(s, a.get(col, j)));
                inv.set(col, j, f.mul(s, inv.get(col, j)));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if f.is_zero(factor) {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, f.sub(a.get(r, j), f.mul(factor, a.get(col, j))));
                    inv.set(r, j, f.sub(inv.get(r, j), f.mul(factor, inv.get(col, j))));
                }
            }
        }
        Ok(inv)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobReport {
    pub p: u64,
    pub e: usize,
    pub modulus: Vec<u64>,
    pub dim: usize,
    pub trials: usize,
    /// Trials where `tr(A^p) = tr(A)^p`.
    pub passed: usize,
    /// `iterated_passed[k-1]` counts trials where `tr(A^{p^k}) = tr(A)^{p^k}`.
    pub iterated_passed: Vec<usize>,
    /// Trials where every check held.
    pub all_passed: usize,
}

impl FrobReport {
    pub fn ok(&self) -> bool {
        self.all_passed == self.trials
    }
}

pub const ITERATED_DEPTH: u32 = 3;

/// Tests `tr(A^{p^k}) = tr(A)^{p^k}` for `k = 1..=3` on `trials` random
/// `dim × dim` matrices drawn from a generator seeded with `seed`.
pub fn frobenius_trace_check(field: &Arc<FqField>, dim: usize, trials: usize, seed: u64) -> FrobReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = &**field;
    let p = f.characteristic();
    let mut passed = 0;
    let mut iterated = vec![0; ITERATED_DEPTH as usize];
    let mut all = 0;
    for _ in 0..trials {
        let a = FqMatrix::random(field.clone(), dim, &mut rng);
        let tr = a.trace();
        let mut every = true;
        let mut power = a.clone();
        let mut tr_pow = tr;
        for k in 1..=ITERATED_DEPTH {
            // A^{p^k} = (A^{p^{k-1}})^p, and likewise for the trace
            power = power.pow(p);
            tr_pow = f.frobenius(tr_pow);
            let holds = power.trace() == tr_pow;
            if holds {
                iterated[k as usize - 1] += 1;
                if k == 1 {
                    passed += 1;
                }
            }
            every &= holds;
        }
        all += usize::from(every);
    }
    FrobReport {
        p,
        e: f.degree(),
        modulus: f.modulus().to_vec(),
        dim,
        trials,
        passed,
        iterated_passed: iterated,
        all_passed: all,
    }
}
