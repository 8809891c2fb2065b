//! Finite levels `J_K^p / P_K^(p^m)` of the profinite group attached to a
//! prime, the index chain `h_m`, and the trace-range label `Z[1/p]`.
//!
//! `h_m` is computed exactly by brute force for `Q` and quadratic fields
//! ([`oracle`]); for other fields only the growth `h_(m+1)/h_m = p^f`
//! (m >= 1) is available, and it is marked as asserted.

pub mod oracle;
pub mod quadratic;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numberfield::{NumberField, PrimeIdeal};

pub use oracle::{LevelCount, OracleRun, OracleSetup};
pub use quadratic::{QuadIdeal, QuadOrder};

fn prime_power(p: u64, e: u64) -> Result<u128> {
    u32::try_from(e)
        .ok()
        .and_then(|e| (p as u128).checked_pow(e))
        .ok_or_else(|| Error::InvalidArgument(format!("{p}^{e} exceeds 128 bits")))
}

/// `|U^(m) / U^(m+1)|` for `m = 0..=max_level`: `p^f - 1`, then `p^f`.
pub fn local_unit_filtration(prime: &PrimeIdeal, max_level: u32) -> Result<Vec<u128>> {
    let q = prime_power(prime.p, prime.residue_degree as u64)?;
    Ok((0..=max_level)
        .map(|m| if m == 0 { q - 1 } else { q })
        .collect())
}

/// `|(O/p^m)^*| = (p^f - 1) p^(f(m-1))` for `m >= 1`, and 1 at `m = 0`.
pub fn local_unit_order(prime: &PrimeIdeal, m: u32) -> Result<u128> {
    if m == 0 {
        return Ok(1);
    }
    let f = prime.residue_degree as u64;
    let q = prime_power(prime.p, f)?;
    (q - 1)
        .checked_mul(prime_power(prime.p, f * (m as u64 - 1))?)
        .ok_or_else(|| Error::InvalidArgument("local unit order exceeds 128 bits".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainMode {
    Oracle,
    Formula,
}

impl std::str::FromStr for ChainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(ChainMode::Oracle),
            "formula" => Ok(ChainMode::Formula),
            _ => Err(Error::InvalidArgument(format!("unknown chain mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSummary {
    pub p: u64,
    pub f: u32,
    pub e: u32,
}

impl From<&PrimeIdeal> for PrimeSummary {
    fn from(q: &PrimeIdeal) -> Self {
        PrimeSummary {
            p: q.p,
            f: q.residue_degree,
            e: q.ramification,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayLevel {
    pub m: u32,
    /// `None` in formula mode.
    pub h: Option<u64>,
    pub local_unit_order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelRatio {
    /// The ratio is `h_(m+1) / h_m`.
    pub m: u32,
    /// Exact quotient, `None` if `h_m` does not divide `h_(m+1)`.
    pub value: Option<u128>,
    pub expected: u128,
    /// Taken from the closed form rather than computed.
    pub asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayClassChain {
    pub prime: PrimeSummary,
    pub mode: ChainMode,
    pub levels: Vec<RayLevel>,
    /// Ratios for `m >= 1` only.
    pub ratios: Vec<LevelRatio>,
    /// Every ratio was computed and equals `p^f`.
    pub growth_certified: bool,
    /// Enumeration bound at which the oracle counts saturated.
    pub enumeration_bound: Option<u64>,
    /// Observations contradicting the expected growth, verbatim.
    pub discrepancies: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub start_bound: u64,
    pub max_bound: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            start_bound: 64,
            max_bound: 1 << 22,
        }
    }
}

/// Order of `J^p / P^(p^m)` by enumeration up to `bound`; fails with
/// [`Error::SaturationFailure`] if doubling the bound changes the count.
pub fn ray_class_oracle(
    field: &NumberField,
    prime: &PrimeIdeal,
    m: u32,
    bound: u64,
) -> Result<u64> {
    let setup = OracleSetup::new(field, prime)?;
    let r = oracle::run(&setup, &[m], bound)?;
    let l = r.levels[0];
    if !r.saturated() {
        return Err(Error::SaturationFailure {
            level: m,
            bound,
            at_bound: l.at_bound,
            at_double: l.at_double,
        });
    }
    Ok(l.at_bound)
}

/// `h_0..h_M` with ratio checks, by oracle or by the closed-form growth.
pub fn chain(
    field: &NumberField,
    prime: &PrimeIdeal,
    max_level: u32,
    mode: ChainMode,
    opts: &OracleOptions,
) -> Result<RayClassChain> {
    let expected = prime_power(prime.p, prime.residue_degree as u64)?;
    let mut levels = Vec::new();
    for m in 0..=max_level {
        levels.push(RayLevel {
            m,
            h: None,
            local_unit_order: local_unit_order(prime, m)?,
        });
    }
    let mut enumeration_bound = None;
    if mode == ChainMode::Oracle {
        let setup = OracleSetup::new(field, prime)?;
        let ms: Vec<u32> = (0..=max_level).collect();
        let run = oracle::run_until_saturated(&setup, &ms, opts.start_bound, opts.max_bound)?;
        for (lv, c) in levels.iter_mut().zip(&run.levels) {
            lv.h = Some(c.at_bound);
        }
        enumeration_bound = Some(run.bound);
    }
    let mut ratios = Vec::new();
    let mut discrepancies = Vec::new();
    for m in 1..max_level {
        let ratio = match mode {
            ChainMode::Formula => LevelRatio {
                m,
                value: Some(expected),
                expected,
                asserted: true,
            },
            ChainMode::Oracle => {
                let lo = levels[m as usize].h.expect("oracle level") as u128;
                let hi = levels[m as usize + 1].h.expect("oracle level") as u128;
                let value = (lo != 0 && hi % lo == 0).then(|| hi / lo);
                match value {
                    None => discrepancies.push(format!(
                        "h_{} = {hi} is not a multiple of h_{m} = {lo}",
                        m + 1
                    )),
                    Some(v) if v != expected => discrepancies.push(format!(
                        "h_{}/h_{m} = {v}, expected p^f = {expected}",
                        m + 1
                    )),
                    _ => {}
                }
                LevelRatio {
                    m,
                    value,
                    expected,
                    asserted: false,
                }
            }
        };
        ratios.push(ratio);
    }
    if mode == ChainMode::Oracle {
        let h0 = levels[0].h.unwrap_or(0);
        for lv in &levels[1..] {
            let h = lv.h.unwrap_or(0);
            if h0 == 0 || h % h0 != 0 {
                discrepancies.push(format!("h_0 = {h0} does not divide h_{} = {h}", lv.m));
            }
        }
    }
    let growth_certified = mode == ChainMode::Oracle && discrepancies.is_empty();
    Ok(RayClassChain {
        prime: prime.into(),
        mode,
        levels,
        ratios,
        growth_certified,
        enumeration_bound,
        discrepancies,
    })
}

/// Label `Z[1/p]` of the trace range attached to a prime. Equality depends
/// on the rational prime only.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRangeDescriptor {
    pub prime: PrimeSummary,
    pub label: String,
    /// The label was re-derived from computed index ratios.
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<RayClassChain>,
}

impl TraceRangeDescriptor {
    pub fn rational_prime(&self) -> u64 {
        self.prime.p
    }
}

impl PartialEq for TraceRangeDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.prime.p == other.prime.p
    }
}

impl Eq for TraceRangeDescriptor {}

pub fn label_for(p: u64) -> String {
    format!("Z[1/{p}]")
}

/// Primes dividing the computed ratios `h_(m+1)/h_m`, `m >= 1`.
pub fn ratio_support(chain: &RayClassChain) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for r in chain.ratios.iter().filter(|r| !r.asserted) {
        let Some(mut v) = r.value else { continue };
        let mut q = 2u128;
        while q * q <= v {
            while v % q == 0 {
                out.insert(q as u64);
                v /= q;
            }
            q += 1;
        }
        if v > 1 {
            out.insert(v as u64);
        }
    }
    out
}

pub fn trace_range(prime: &PrimeIdeal) -> TraceRangeDescriptor {
    TraceRangeDescriptor {
        prime: prime.into(),
        label: label_for(prime.p),
        certified: false,
        chain: None,
    }
}

/// Attaches a chain as evidence. The label is certified when the computed
/// ratios are all powers of `p` and there is at least one of them.
pub fn trace_range_with_chain(
    prime: &PrimeIdeal,
    chain: RayClassChain,
) -> Result<TraceRangeDescriptor> {
    if chain.prime != PrimeSummary::from(prime) {
        return Err(Error::InvalidArgument(
            "chain belongs to a different prime".into(),
        ));
    }
    let support = ratio_support(&chain);
    let certified = support == BTreeSet::from([prime.p]);
    Ok(TraceRangeDescriptor {
        prime: prime.into(),
        label: label_for(prime.p),
        certified,
        chain: Some(chain),
    })
}
