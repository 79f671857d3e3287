//! Closed forms for the extremal edge function `ex_m` and the boundary
//! function `xi_m` of `Q_n` and `Q_{n,2}`.
//!
//! Every formula is driven by the binary decomposition
//! `m = 2^{t_0} + 2^{t_1} + ... + 2^{t_s}` with `t_0 > t_1 > ... > t_s`.
//! All arithmetic is exact integer arithmetic; values are returned as `u128`
//! because `ex_m` reaches roughly `n * 2^n`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::graph::{GraphSpec, MAX_FORMULA_DIM};

/// Set-bit exponents of `m`, strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    exponents: Vec<u32>,
}

impl Decomposition {
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Index of the last term, `s`.
    pub fn last_index(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn value(&self) -> u64 {
        self.exponents.iter().map(|&t| 1u64 << t).sum()
    }

    /// Sum of the first `len` terms.
    pub fn prefix_value(&self, len: usize) -> u64 {
        self.exponents[..len].iter().map(|&t| 1u64 << t).sum()
    }
}

pub fn binary_decomposition(m: u64) -> Result<Decomposition> {
    if m == 0 {
        return domain("binary decomposition needs m >= 1");
    }
    let exponents = (0..u64::BITS).rev().filter(|&t| m >> t & 1 == 1).collect();
    Ok(Decomposition { exponents })
}

fn check_dim(n: u32) -> Result<()> {
    if n == 0 || n > MAX_FORMULA_DIM {
        return domain(format!("dimension n = {n} outside 1..={MAX_FORMULA_DIM}"));
    }
    Ok(())
}

fn check_cardinality(n: u32, m: u64) -> Result<()> {
    check_dim(n)?;
    if m == 0 || m > 1u64 << n {
        return domain(format!("m = {m} outside 1..=2^{n}"));
    }
    Ok(())
}

fn hypercube_sum(d: &Decomposition) -> u128 {
    d.exponents
        .iter()
        .enumerate()
        .map(|(i, &t)| (u128::from(t) + 2 * i as u128) << t)
        .sum()
}

/// `ex_m(Q_n) = sum t_i 2^{t_i} + sum 2 i 2^{t_i}`, which is also
/// `2 |E(Q_n[L_m^n])|`.
pub fn ex_hypercube(n: u32, m: u64) -> Result<u128> {
    check_cardinality(n, m)?;
    Ok(hypercube_sum(&binary_decomposition(m)?))
}

/// `ex_m(Q_{n,2}) = ex_m(Q_n) + q 2^{n-1} + 2 [m - q 2^{n-1} - 2^{n-2}]^+`
/// where `q = floor(m / 2^{n-1})`. Defined for the whole range `1..=2^n`.
pub fn ex_enhanced(n: u32, m: u64) -> Result<u128> {
    check_cardinality(n, m)?;
    if n < 3 {
        return domain(format!("Q_{{n,2}} closed form needs n >= 3, got {n}"));
    }
    let half = 1u128 << (n - 1);
    let quarter = 1u128 << (n - 2);
    let m = u128::from(m);
    let whole_halves = m / half * half;
    let excess = (m - whole_halves).saturating_sub(quarter);
    Ok(ex_hypercube(n, m as u64)? + whole_halves + 2 * excess)
}

/// Which closed form applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `Q_n`, degree `n`.
    Hypercube,
    /// `Q_{n,2}`, degree `n + 1`.
    Enhanced2,
}

/// A family member for which `ex` and `xi` have closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Family {
    kind: FamilyKind,
    n: u32,
}

impl Family {
    pub fn hypercube(n: u32) -> Result<Self> {
        check_dim(n)?;
        Ok(Self {
            kind: FamilyKind::Hypercube,
            n,
        })
    }

    pub fn enhanced(n: u32) -> Result<Self> {
        check_dim(n)?;
        if n < 3 {
            return domain(format!("Q_{{n,2}} closed form needs n >= 3, got {n}"));
        }
        Ok(Self {
            kind: FamilyKind::Enhanced2,
            n,
        })
    }

    /// Maps a graph selector onto a closed-form family, if there is one.
    pub fn from_spec(spec: GraphSpec) -> Result<Self> {
        match spec.k() {
            None => Self::hypercube(spec.n()),
            Some(2) => Self::enhanced(spec.n()),
            Some(k) => domain(format!(
                "no closed form for k = {k}; only Q_n and Q_{{n,2}}"
            )),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u32 {
        match self.kind {
            FamilyKind::Hypercube => self.n,
            FamilyKind::Enhanced2 => self.n + 1,
        }
    }

    /// Largest `m` for which `xi_m` is defined, `2^{n-1}`.
    pub fn half(&self) -> u64 {
        1u64 << (self.n - 1)
    }

    pub fn graph_spec(&self) -> GraphSpec {
        let k = match self.kind {
            FamilyKind::Hypercube => None,
            FamilyKind::Enhanced2 => Some(2),
        };
        GraphSpec::new(self.n, k).expect("family dimensions are validated on construction")
    }

    pub fn ex(&self, m: u64) -> Result<u128> {
        match self.kind {
            FamilyKind::Hypercube => ex_hypercube(self.n, m),
            FamilyKind::Enhanced2 => ex_enhanced(self.n, m),
        }
    }
}

/// `xi_m = d m - ex_m` for `1 <= m <= 2^{n-1}`.
pub fn xi(family: Family, m: u64) -> Result<u128> {
    if m == 0 || m > family.half() {
        return domain(format!(
            "xi needs 1 <= m <= 2^(n-1) = {}, got {m}",
            family.half()
        ));
    }
    Ok(u128::from(family.degree()) * u128::from(m) - family.ex(m)?)
}

/// Split `m = m1 + m2` after term `a` of the binary decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitWitness {
    pub a: usize,
    pub m1: u64,
    pub m2: u64,
}

impl SplitWitness {
    pub fn new(m: u64, a: usize) -> Result<Self> {
        let d = binary_decomposition(m)?;
        if a >= d.last_index() {
            return domain(format!(
                "split index a = {a} needs a < s = {} for m = {m}",
                d.last_index()
            ));
        }
        let m1 = d.prefix_value(a + 1);
        Ok(Self { a, m1, m2: m - m1 })
    }
}

/// Both sides of the `Q_{n,2}` split identities for one split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCheck {
    pub split: SplitWitness,
    /// `ex_m(Q_{n,2})` evaluated directly.
    pub lhs: u128,
    /// `ex_{m1} + ex_{m2} + 2(a+1) m2` below `2^{n-2}`, and
    /// `ex_{m1} + ex_{m2} + 2 m1 + 2(a+1) m2` above it.
    pub rhs_statement: u128,
    /// `ex_{m1} + ex_{m2} + 2(a+1) m2` below `2^{n-2}`, and
    /// `ex_{m1} + ex_{m2} + 2(a+2) m2` above it.
    pub rhs_proof: u128,
}

impl SplitCheck {
    pub fn statement_holds(&self) -> bool {
        self.lhs == self.rhs_statement
    }

    pub fn proof_holds(&self) -> bool {
        self.lhs == self.rhs_proof
    }
}

/// Evaluates the split identities for `ex_m(Q_{n,2})`. The two upper-range
/// variants disagree in general; both are reported so callers can see which
/// one holds. Nothing downstream relies on either.
pub fn split_identity_check(n: u32, m: u64, a: usize) -> Result<SplitCheck> {
    check_cardinality(n, m)?;
    if n < 3 {
        return domain(format!("Q_{{n,2}} closed form needs n >= 3, got {n}"));
    }
    if m > 1u64 << (n - 1) {
        return domain(format!("split identities need m <= 2^(n-1), got {m}"));
    }
    let split = SplitWitness::new(m, a)?;
    let lhs = ex_enhanced(n, m)?;
    let base = ex_enhanced(n, split.m1)? + ex_enhanced(n, split.m2)?;
    let a1 = split.a as u128 + 1;
    let (m1, m2) = (u128::from(split.m1), u128::from(split.m2));
    let (rhs_statement, rhs_proof) = if m <= 1u64 << (n - 2) {
        let rhs = base + 2 * a1 * m2;
        (rhs, rhs)
    } else {
        (base + 2 * m1 + 2 * a1 * m2, base + 2 * (a1 + 1) * m2)
    };
    Ok(SplitCheck {
        split,
        lhs,
        rhs_statement,
        rhs_proof,
    })
}

/// `ex_m(Q_n) <= t m` and `ex_m(Q_{n,2}) <= (t + 1) m` for `1 <= m <= 2^t`.
pub fn ex_upper_bound_check(n: u32, t: u32, m: u64) -> Result<bool> {
    if t > n {
        return domain(format!("t = {t} exceeds n = {n}"));
    }
    check_cardinality(n, m)?;
    if m > 1u64 << t {
        return domain(format!("m = {m} exceeds 2^t = {}", 1u64 << t));
    }
    let m128 = u128::from(m);
    let t = u128::from(t);
    Ok(ex_hypercube(n, m)? <= t * m128 && ex_enhanced(n, m)? <= (t + 1) * m128)
}
