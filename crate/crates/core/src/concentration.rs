//! `lambda_h` profiles and the concentration interval of `Q_{n,2}`.
//!
//! `lambda_h = min { xi_m : h <= m <= 2^{n-1} }`. For `n >= 9` the profile is
//! constant at `2^{n-1}` on `[ceil(11 * 2^{n-1} / 48), 2^{n-1}]`, and equals
//! `xi_h` there only at the breakpoints `m_{n,r}`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::extremal::{xi, Family, FamilyKind};

/// Largest dimension whose full profile is materialized.
pub const MAX_PROFILE_DIM: u32 = 26;

/// `xi_m` and `lambda_m` for `1 <= m <= 2^{n-1}`. Entries fit in `u32`
/// because `xi_m <= (n + 1) 2^{n-1} < 2^32` for `n <= 26`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiProfile {
    pub family: Family,
    values: Vec<u32>,
    lambda: Vec<u32>,
}

impl XiProfile {
    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `xi_m`, 1-based.
    pub fn xi(&self, m: u64) -> u32 {
        self.values[(m - 1) as usize]
    }

    /// `lambda_h`, 1-based.
    pub fn lambda(&self, h: u64) -> u32 {
        self.lambda[(h - 1) as usize]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn lambdas(&self) -> &[u32] {
        &self.lambda
    }

    pub fn is_optimal(&self, h: u64) -> bool {
        self.xi(h) == self.lambda(h)
    }

    /// `(h, xi_h, lambda_h)` rows in increasing `h`.
    pub fn rows(&self) -> impl Iterator<Item = (u64, u32, u32)> + '_ {
        self.values
            .iter()
            .zip(&self.lambda)
            .enumerate()
            .map(|(i, (&x, &l))| (i as u64 + 1, x, l))
    }
}

pub fn lambda_profile(family: Family) -> Result<XiProfile> {
    if family.n() > MAX_PROFILE_DIM {
        return Err(Error::Resource(format!(
            "profile for n = {} has 2^{} entries; cap is n <= {MAX_PROFILE_DIM}, use lambda_at",
            family.n(),
            family.n() - 1
        )));
    }
    let values = (1..=family.half())
        .map(|m| xi(family, m).map(|v| v as u32))
        .collect::<Result<Vec<_>>>()?;
    let mut lambda = values.clone();
    for i in (0..lambda.len().saturating_sub(1)).rev() {
        lambda[i] = lambda[i].min(lambda[i + 1]);
    }
    Ok(XiProfile {
        family,
        values,
        lambda,
    })
}

/// `lambda_h` without storing the profile. Linear in `2^{n-1} - h`.
pub fn lambda_at(family: Family, h: u64) -> Result<u128> {
    if h == 0 || h > family.half() {
        return domain(format!("h must lie in 1..={}, got {h}", family.half()));
    }
    let mut best = xi(family, h)?;
    for m in h + 1..=family.half() {
        best = best.min(xi(family, m)?);
    }
    Ok(best)
}

/// The breakpoint sequence `m_{n,1} < ... < m_{n, ceil(n/2) - 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakpoints {
    pub n: u32,
    /// `n mod 2`.
    pub f: u32,
    pub values: Vec<u64>,
}

impl Breakpoints {
    pub fn contains(&self, m: u64) -> bool {
        self.values.binary_search(&m).is_ok()
    }
}

/// `ceil(11 * 2^{n-1} / 48)`.
pub fn h_min(n: u32) -> Result<u64> {
    if !(4..=62).contains(&n) {
        return domain(format!("h_min needs 4 <= n <= 62, got {n}"));
    }
    Ok(((11u128 << (n - 1)).div_ceil(48)) as u64)
}

/// `m_{n,r}` for `n >= 9` from the four-case definition.
pub fn breakpoints(n: u32) -> Result<Breakpoints> {
    if n < 9 {
        return domain(format!(
            "the breakpoint formula needs n >= 9, got {n}; use table2_breakpoints for 4 <= n <= 8"
        ));
    }
    if n > 62 {
        return domain(format!("breakpoints need n <= 62, got {n}"));
    }
    let f = n % 2;
    let half_up = n.div_ceil(2);
    let values = (1..half_up)
        .map(|r| {
            if r + 4 <= half_up {
                let head: u64 = (0..=2).map(|i| 1u64 << (n - 4 - i)).sum();
                let tail: u64 = (0..=half_up - 4 - r).map(|i| 1u64 << (n - 8 - 2 * i)).sum();
                head + tail + (1u64 << (2 * r - 1 - f))
            } else if r + 3 == half_up {
                (0..=3).map(|i| 1u64 << (n - 4 - i)).sum()
            } else if r + 2 == half_up {
                1u64 << (n - 3)
            } else {
                1u64 << (n - 1)
            }
        })
        .collect();
    Ok(Breakpoints { n, f, values })
}

/// Breakpoints for `4 <= n <= 8`, where the general definition does not
/// apply. The values are tabulated, not derived.
pub fn table2_breakpoints(n: u32) -> Result<Breakpoints> {
    let values: &[u64] = match n {
        4 => &[1],
        5 => &[4, 16],
        6 => &[8, 32],
        7 => &[15, 16, 64],
        8 => &[30, 32, 128],
        _ => return domain(format!("tabulated breakpoints cover 4 <= n <= 8, got {n}")),
    };
    Ok(Breakpoints {
        n,
        f: n % 2,
        values: values.to_vec(),
    })
}

/// Lower-end tightness witness: `lambda` just below `h_min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tightness {
    pub h: u64,
    pub lambda: u64,
    /// `2^{n-1} - lambda`: 1 for even `n`, 2 for odd `n`.
    pub gap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub n: u32,
    pub h_min: u64,
    pub h_max: u64,
    pub constant: u64,
    pub breakpoints: Vec<u64>,
    /// `h` in `[h_min, h_max]` with `lambda_h == xi_h`.
    pub optimal_h: Vec<u64>,
    pub tightness: Tightness,
}

fn verification<T>(h: u64, reason: impl Into<String>) -> Result<T> {
    Err(Error::Verification {
        h,
        reason: reason.into(),
    })
}

/// Checks the concentration theorem against the full `Q_{n,2}` profile.
pub fn concentration_report(n: u32) -> Result<ConcentrationReport> {
    if !(9..=MAX_PROFILE_DIM).contains(&n) {
        return domain(format!(
            "concentration report needs 9 <= n <= {MAX_PROFILE_DIM}, got {n}"
        ));
    }
    let profile = lambda_profile(Family::enhanced(n)?)?;
    report_from_profile(&profile)
}

pub(crate) fn report_from_profile(profile: &XiProfile) -> Result<ConcentrationReport> {
    let n = profile.family.n();
    debug_assert_eq!(profile.family.kind(), FamilyKind::Enhanced2);
    let lo = h_min(n)?;
    let hi = profile.family.half();
    let constant = hi;
    let bps = breakpoints(n)?;

    let mut optimal_h = Vec::new();
    for h in lo..=hi {
        let lambda = u64::from(profile.lambda(h));
        if lambda != constant {
            return verification(h, format!("lambda = {lambda}, expected {constant}"));
        }
        if profile.is_optimal(h) {
            optimal_h.push(h);
        }
        if profile.is_optimal(h) != bps.contains(h) {
            return verification(
                h,
                format!(
                    "xi = {}, lambda = {lambda}, breakpoint = {}",
                    profile.xi(h),
                    bps.contains(h)
                ),
            );
        }
    }

    let below = lo - 1;
    let lambda = u64::from(profile.lambda(below));
    let expected_gap = if n.is_multiple_of(2) { 1 } else { 2 };
    if lambda + expected_gap != constant {
        return verification(
            below,
            format!("lambda = {lambda}, expected {}", constant - expected_gap),
        );
    }

    Ok(ConcentrationReport {
        n,
        h_min: lo,
        h_max: hi,
        constant,
        breakpoints: bps.values,
        optimal_h,
        tightness: Tightness {
            h: below,
            lambda,
            gap: constant - lambda,
        },
    })
}

/// One row of the `g(n)`, `R(n)` table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: u32,
    /// Number of `h <= 2^{n-1}` with `lambda_h = 2^{n-1}`.
    pub g: u64,
    /// Denominator of `R(n) = g / 2^{n-1}`.
    pub denominator: u64,
    /// `100 R(n)` truncated toward zero to six fractional digits.
    pub r_percent: String,
}

/// `100 num / den` truncated to `digits` fractional digits.
pub fn truncated_percent(num: u64, den: u64, digits: u32) -> String {
    let scale = 10u128.pow(digits);
    let scaled = u128::from(num) * 100 * scale / u128::from(den);
    let (int, frac) = (scaled / scale, scaled % scale);
    if digits == 0 {
        return int.to_string();
    }
    format!("{int}.{frac:0width$}", width = digits as usize)
}

pub fn ratio_row(n: u32) -> Result<RatioRow> {
    let lo = h_min(n)?;
    let denominator = 1u64 << (n - 1);
    let g = denominator - lo + 1;
    Ok(RatioRow {
        n,
        g,
        denominator,
        r_percent: truncated_percent(g, denominator, 6),
    })
}

pub fn ratio_table(n_min: u32, n_max: u32) -> Result<Vec<RatioRow>> {
    if !(4 <= n_min && n_min <= n_max && n_max <= 62) {
        return domain(format!(
            "ratio table needs 4 <= n_min <= n_max <= 62, got {n_min}..{n_max}"
        ));
    }
    (n_min..=n_max).map(ratio_row).collect()
}
