//! Combinatorial model of the primitive ideal space over a finite set of
//! primes: strata `P_S` indexed by subsets `S`, containment, the
//! second-maximal strata `{p}^c`, and the components of `I_2`.
//!
//! A [`PrimeUniverse`] stands in for the set of all finite primes. Subsets
//! are stored as a finite set or as the complement of one, whichever is
//! smaller, so `{p}^c` and the full set are cheap. Fibers are opaque labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::numberfield::{prime_ideals_up_to, split_prime, NumberField, PrimeIdeal};
use crate::rayclass::{label_for, trace_range, PrimeSummary, TraceRangeDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UniverseKind {
    /// Prime ideals of norm `<= B`.
    ByNorm,
    /// Every prime ideal above a rational prime `p <= B`.
    OverPrimes,
}

#[derive(Clone, Debug)]
pub struct PrimeUniverse {
    key: String,
    bound: u64,
    kind: UniverseKind,
    primes: Vec<PrimeIdeal>,
    /// Rational primes whose ideals are missing (Z[theta] not p-maximal).
    skipped: BTreeSet<u64>,
}

impl PrimeUniverse {
    fn build(
        field: &NumberField,
        bound: u64,
        kind: UniverseKind,
        primes: Vec<PrimeIdeal>,
        skipped: BTreeSet<u64>,
    ) -> Self {
        let key = format!("{}|{}|{:?}|{}", field.label(), field.poly(), kind, bound);
        PrimeUniverse {
            key,
            bound,
            kind,
            primes,
            skipped,
        }
    }

    /// All prime ideals of norm `<= bound`; every `p <= bound` must be p-maximal.
    pub fn by_norm(field: &NumberField, bound: u64) -> Result<Self> {
        let primes = prime_ideals_up_to(field, bound)?;
        Ok(Self::build(
            field,
            bound,
            UniverseKind::ByNorm,
            primes,
            BTreeSet::new(),
        ))
    }

    /// Like [`PrimeUniverse::by_norm`], but rational primes failing the
    /// Dedekind criterion are recorded in `skipped` instead of failing.
    pub fn by_norm_skipping(field: &NumberField, bound: u64) -> Result<Self> {
        let mut u = Self::over_primes(field, bound, true)?;
        let bound_big = BigUint::from(bound);
        u.primes.retain(|q| q.norm <= bound_big);
        u.kind = UniverseKind::ByNorm;
        u.key = format!("{}|{}|{:?}|{}", field.label(), field.poly(), u.kind, bound);
        Ok(u)
    }

    /// All prime ideals above rational primes `p <= bound`. With `skip`,
    /// primes failing the Dedekind criterion are recorded instead of failing.
    pub fn over_primes(field: &NumberField, bound: u64, skip: bool) -> Result<Self> {
        if bound < 2 {
            return Err(Error::InvalidArgument("prime bound must be >= 2".into()));
        }
        let mut primes = Vec::new();
        let mut skipped = BTreeSet::new();
        for p in arith::primes_up_to(bound) {
            match split_prime(field, p) {
                Ok(s) => primes.extend(s.primes),
                Err(Error::NotPMaximal { p }) if skip => {
                    skipped.insert(p);
                }
                Err(e) => return Err(e),
            }
        }
        primes.sort();
        Ok(Self::build(
            field,
            bound,
            UniverseKind::OverPrimes,
            primes,
            skipped,
        ))
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn kind(&self) -> UniverseKind {
        self.kind
    }

    pub fn primes(&self) -> &[PrimeIdeal] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn skipped(&self) -> &BTreeSet<u64> {
        &self.skipped
    }

    pub fn point(
        &self,
        members: impl IntoIterator<Item = usize>,
        fiber: &str,
    ) -> Result<SpectrumPoint> {
        let set: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&i) = set.iter().next_back() {
            if i >= self.len() {
                return Err(Error::InvalidArgument(format!(
                    "prime index {i} outside a universe of {} primes",
                    self.len()
                )));
            }
        }
        Ok(SpectrumPoint {
            universe: self.key.clone(),
            size: self.len(),
            set: Stratum::canonical(set, self.len()),
            fiber: fiber.to_string(),
        })
    }

    pub fn full(&self, fiber: &str) -> SpectrumPoint {
        self.point(0..self.len(), fiber).expect("indices in range")
    }

    pub fn empty(&self, fiber: &str) -> SpectrumPoint {
        self.point([], fiber).expect("indices in range")
    }

    /// `P_{{p}^c}` for the prime at `index`.
    pub fn complement_of(&self, index: usize, fiber: &str) -> Result<SpectrumPoint> {
        self.point((0..self.len()).filter(|&i| i != index), fiber)
    }
}

/// Subset of an `n`-element universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "encoding", content = "indices", rename_all = "snake_case")]
pub enum Stratum {
    Finite(BTreeSet<usize>),
    /// Everything except the listed indices.
    Cofinite(BTreeSet<usize>),
}

impl Stratum {
    /// Complement encoding iff the complement is strictly smaller.
    pub fn canonical(set: BTreeSet<usize>, n: usize) -> Self {
        if n - set.len() < set.len() {
            Stratum::Cofinite((0..n).filter(|i| !set.contains(i)).collect())
        } else {
            Stratum::Finite(set)
        }
    }

    pub fn members(&self, n: usize) -> BTreeSet<usize> {
        match self {
            Stratum::Finite(s) => s.clone(),
            Stratum::Cofinite(c) => (0..n).filter(|i| !c.contains(i)).collect(),
        }
    }

    pub fn contains_index(&self, i: usize) -> bool {
        match self {
            Stratum::Finite(s) => s.contains(&i),
            Stratum::Cofinite(c) => !c.contains(&i),
        }
    }

    pub fn len(&self, n: usize) -> usize {
        match self {
            Stratum::Finite(s) => s.len(),
            Stratum::Cofinite(c) => n - c.len(),
        }
    }

    /// `self ⊆ other` within an `n`-element universe.
    pub fn is_subset(&self, other: &Stratum, n: usize) -> bool {
        match (self, other) {
            (Stratum::Finite(a), Stratum::Finite(b)) => a.is_subset(b),
            (Stratum::Finite(a), Stratum::Cofinite(b)) => a.is_disjoint(b),
            (Stratum::Cofinite(a), Stratum::Cofinite(b)) => b.is_subset(a),
            (Stratum::Cofinite(a), Stratum::Finite(b)) => {
                // complement of a is small; it must fit inside b
                b.len() + a.len() >= n && (0..n).all(|i| a.contains(&i) || b.contains(&i))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpectrumPoint {
    #[serde(skip)]
    universe: String,
    #[serde(skip)]
    size: usize,
    pub set: Stratum,
    /// Stands for a point of the fiber over `S`; never computed.
    pub fiber: String,
}

impl SpectrumPoint {
    pub fn members(&self) -> BTreeSet<usize> {
        self.set.members(self.size)
    }
}

impl fmt::Display for SpectrumPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show =
            |s: &BTreeSet<usize>| s.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match &self.set {
            Stratum::Finite(s) => write!(f, "P_{{{}}}", show(s)),
            Stratum::Cofinite(c) if c.is_empty() => write!(f, "P_full"),
            Stratum::Cofinite(c) => write!(f, "P_{{{}}}^c", show(c)),
        }
    }
}

/// `P_S ⊆ P_T` iff `S ⊆ T`, for points over the same universe and fiber.
pub fn contains(s: &SpectrumPoint, t: &SpectrumPoint) -> Result<bool> {
    if s.universe != t.universe || s.fiber != t.fiber {
        return Err(Error::CrossUniverse);
    }
    Ok(s.set.is_subset(&t.set, s.size))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "prime_index")]
pub enum Classification {
    Maximal,
    /// `S = {p}^c`, carrying the index of `p`.
    SecondMaximal(usize),
    Other,
}

pub fn classify(point: &SpectrumPoint) -> Classification {
    match &point.set {
        Stratum::Cofinite(c) if c.is_empty() => Classification::Maximal,
        Stratum::Cofinite(c) if c.len() == 1 => {
            Classification::SecondMaximal(*c.iter().next().expect("one element"))
        }
        // a one-prime universe: {p}^c is empty
        Stratum::Finite(s) if s.is_empty() && point.size == 1 => Classification::SecondMaximal(0),
        Stratum::Finite(s) if s.len() == point.size => Classification::Maximal,
        Stratum::Finite(s) if point.size >= 1 && s.len() + 1 == point.size => {
            let missing = (0..point.size)
                .find(|i| !s.contains(i))
                .expect("one missing");
            Classification::SecondMaximal(missing)
        }
        _ => Classification::Other,
    }
}

/// Points above `point`: itself, every `{q}^c ⊇ S`, and the full set.
pub fn closure(universe: &PrimeUniverse, point: &SpectrumPoint) -> Result<Vec<SpectrumPoint>> {
    if point.universe != universe.key {
        return Err(Error::CrossUniverse);
    }
    let mut out = vec![point.clone()];
    for q in 0..universe.len() {
        if point.set.contains_index(q) {
            continue;
        }
        let c = universe.complement_of(q, &point.fiber)?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    let full = universe.full(&point.fiber);
    if !out.contains(&full) {
        out.push(full);
    }
    Ok(out)
}

/// A connected component `C_p` of `I_2`, with `∩ C_p = P_{{p}^c}`.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub index: usize,
    pub prime: PrimeSummary,
    pub generator: String,
    pub norm: String,
    pub label: String,
    #[serde(skip)]
    pub descriptor: TraceRangeDescriptor,
}

pub fn components_of_i2(universe: &PrimeUniverse) -> Vec<Component> {
    universe
        .primes
        .iter()
        .enumerate()
        .map(|(index, q)| {
            let descriptor = trace_range(q);
            Component {
                index,
                prime: q.into(),
                generator: q.generator_string(),
                norm: q.norm.to_string(),
                label: descriptor.label.clone(),
                descriptor,
            }
        })
        .collect()
}

/// Number of components carrying the label `Z[1/p]`, for each `p` that occurs.
pub fn count_by_label(components: &[Component]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for c in components {
        *out.entry(c.label.clone()).or_insert(0) += 1;
    }
    out
}

/// Components whose label is `Z[1/p]`.
pub fn components_labelled(components: &[Component], p: u64) -> usize {
    let want = label_for(p);
    components.iter().filter(|c| c.label == want).count()
}
