//! Exact integer calculator for the generator rank of homogeneous and
//! subhomogeneous C*-algebras described by the dimensions of the pieces of
//! their primitive ideal space.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(u64),
    Infinite,
}

impl ExtNat {
    pub const ZERO: ExtNat = ExtNat::Finite(0);

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Finite(v) => Some(v),
            ExtNat::Infinite => None,
        }
    }

    /// `ceil((self + offset) / denom)`, infinity absorbing.
    fn shifted_ceil_div(self, offset: u64, denom: u64) -> ExtNat {
        match self {
            ExtNat::Finite(v) => ExtNat::Finite((v + offset).div_ceil(denom)),
            ExtNat::Infinite => ExtNat::Infinite,
        }
    }

    fn double(self) -> ExtNat {
        self + self
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinite) => Ordering::Less,
            (ExtNat::Infinite, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinite, ExtNat::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ExtNat {
    type Output = ExtNat;
    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(v: u64) -> Self {
        ExtNat::Finite(v)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for ExtNat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(ExtNat::Infinite),
            t => t
                .parse()
                .map(ExtNat::Finite)
                .map_err(|_| format!("expected a nonnegative integer or \"inf\", got {s:?}")),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtNat::Finite(v) => s.serialize_u64(*v),
            ExtNat::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::Num(v) => Ok(ExtNat::Finite(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Generator rank of a `d`-homogeneous algebra with spectrum `X`:
/// `locdim(X x X)` for `d = 1`, `ceil((locdim(X) + 1) / (2d - 2))` otherwise.
pub fn gr_homogeneous(d: usize, locdim_x: ExtNat, locdim_xx: Option<ExtNat>) -> Result<ExtNat> {
    match d {
        0 => Err(Error::PreconditionViolated("d must be >= 1".into())),
        1 => locdim_xx.ok_or(Error::MissingSquareDimension),
        _ => Ok(locdim_x.shifted_ceil_div(1, 2 * d as u64 - 2)),
    }
}

/// Per-representation-dimension data of a subhomogeneous algebra: the local
/// dimension of each nonempty `X_d`, plus `locdim(X_1 x X_1)` when `X_1` is
/// nonempty. Absent keys are empty pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionProfile {
    dims: BTreeMap<usize, ExtNat>,
    x1_square: Option<ExtNat>,
    square_defaulted: bool,
}

impl DimensionProfile {
    pub fn new(dims: BTreeMap<usize, ExtNat>, x1_square: Option<ExtNat>) -> Result<Self> {
        let p = Self {
            dims,
            x1_square,
            square_defaulted: false,
        };
        p.validate()?;
        Ok(p)
    }

    /// Like [`DimensionProfile::new`] but fills a missing `locdim(X_1 x X_1)`
    /// with the basic-type value `2 locdim(X_1)` and records that it did so.
    pub fn with_basic_default(dims: BTreeMap<usize, ExtNat>, x1_square: Option<ExtNat>) -> Result<Self> {
        let defaulted = x1_square.is_none() && dims.contains_key(&1);
        let square = x1_square.or_else(|| dims.get(&1).map(|x| x.double()));
        let mut p = Self::new(dims, square)?;
        p.square_defaulted = defaulted;
        Ok(p)
    }

    pub fn homogeneous(d: usize, locdim: ExtNat, square: Option<ExtNat>) -> Result<Self> {
        Self::new(BTreeMap::from([(d, locdim)]), square)
    }

    fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if self.dims.contains_key(&0) {
            return Err(Error::InvalidProfile("representation dimension 0".into()));
        }
        match (self.dims.get(&1), self.x1_square) {
            (Some(_), None) => return Err(Error::MissingSquareDimension),
            (None, Some(_)) => {
                return Err(Error::InvalidProfile(
                    "square dimension given but X_1 is empty".into(),
                ))
            }
            (Some(&x), Some(sq)) => {
                if sq < x || sq > x.double() {
                    return Err(Error::InvalidProfile(format!(
                        "locdim(X_1 x X_1) = {sq} outside [{x}, {}]",
                        x.double()
                    )));
                }
            }
            (None, None) => {}
        }
        Ok(())
    }

    pub fn dims(&self) -> &BTreeMap<usize, ExtNat> {
        &self.dims
    }

    pub fn x1_square(&self) -> Option<ExtNat> {
        self.x1_square
    }

    pub fn square_defaulted(&self) -> bool {
        self.square_defaulted
    }

    pub fn max_d(&self) -> usize {
        *self.dims.keys().next_back().expect("validated nonempty")
    }

    /// Profile of `A ⊕ B`: local dimension of a disjoint union is the max.
    pub fn merge(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        for (&d, &x) in &other.dims {
            dims.entry(d).and_modify(|v| *v = (*v).max(x)).or_insert(x);
        }
        let x1_square = match (self.x1_square, other.x1_square) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        Self {
            dims,
            x1_square,
            square_defaulted: self.square_defaulted || other.square_defaulted,
        }
    }

    /// Splits into the top-dimensional piece (an ideal) and the rest (the
    /// quotient), which may be empty.
    pub fn split_top(&self) -> (Self, Option<Self>) {
        let top = self.max_d();
        let mut rest = self.dims.clone();
        let x = rest.remove(&top).expect("present");
        let square_for = |dims: &BTreeMap<usize, ExtNat>| {
            if dims.contains_key(&1) {
                self.x1_square
            } else {
                None
            }
        };
        let ideal_dims = BTreeMap::from([(top, x)]);
        let ideal = Self {
            x1_square: square_for(&ideal_dims),
            dims: ideal_dims,
            square_defaulted: self.square_defaulted,
        };
        let quotient = (!rest.is_empty()).then(|| Self {
            x1_square: square_for(&rest),
            dims: rest,
            square_defaulted: self.square_defaulted,
        });
        (ideal, quotient)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: RawProfile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(RawProfile::from(self)).expect("serialisable")
    }
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    locdim: Option<ExtNat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    square: Option<ExtNat>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    empty: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    dims: BTreeMap<String, RawEntry>,
}

impl TryFrom<RawProfile> for DimensionProfile {
    type Error = Error;

    fn try_from(raw: RawProfile) -> Result<Self> {
        let mut dims = BTreeMap::new();
        let mut square = None;
        for (key, entry) in raw.dims {
            let d: usize = key
                .trim()
                .parse()
                .map_err(|_| Error::InvalidProfile(format!("bad dimension key {key:?}")))?;
            if entry.empty {
                if entry.locdim.is_some() || entry.square.is_some() {
                    return Err(Error::InvalidProfile(format!(
                        "entry {d} is marked empty but carries dimensions"
                    )));
                }
                continue;
            }
            let locdim = entry
                .locdim
                .ok_or_else(|| Error::InvalidProfile(format!("entry {d} lacks locdim")))?;
            if entry.square.is_some() && d != 1 {
                return Err(Error::InvalidProfile(format!(
                    "square dimension only applies to d = 1, found at d = {d}"
                )));
            }
            if d == 1 {
                square = entry.square;
            }
            dims.insert(d, locdim);
        }
        DimensionProfile::with_basic_default(dims, square)
    }
}

impl From<&DimensionProfile> for RawProfile {
    fn from(p: &DimensionProfile) -> Self {
        RawProfile {
            dims: p
                .dims
                .iter()
                .map(|(&d, &x)| {
                    (
                        d.to_string(),
                        RawEntry {
                            locdim: Some(x),
                            square: if d == 1 { p.x1_square } else { None },
                            empty: false,
                        },
                    )
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub gr: ExtNat,
    /// Contribution of each nonempty `X_d`, keyed by `d`.
    pub per_d_contributions: BTreeMap<usize, ExtNat>,
    /// Smallest `d` whose contribution attains `gr`.
    pub dominating_d: usize,
    /// Whether `locdim(X_1 x X_1)` was filled in as `2 locdim(X_1)`.
    pub square_defaulted: bool,
}

/// Generator rank (equal to the non-unital rank for subhomogeneous algebras)
/// as the maximum over all nonempty pieces of the homogeneous formula.
pub fn gr_subhomogeneous(p: &DimensionProfile) -> Result<RankResult> {
    if p.dims.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let mut per_d = BTreeMap::new();
    for (&d, &x) in &p.dims {
        per_d.insert(d, gr_homogeneous(d, x, p.x1_square)?);
    }
    let gr = *per_d.values().max().expect("nonempty");
    let dominating_d = *per_d
        .iter()
        .find(|(_, &v)| v == gr)
        .expect("max attained")
        .0;
    Ok(RankResult {
        gr,
        per_d_contributions: per_d,
        dominating_d,
        square_defaulted: p.square_defaulted,
    })
}

/// `gr(A ⊕ B) = max(gr(A), gr(B))` for subhomogeneous summands.
pub fn gr_direct_sum(a: &RankResult, b: &RankResult) -> ExtNat {
    a.gr.max(b.gr)
}

/// Ranks of `C([0,1]^m, M_d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CubeBundleRanks {
    /// Minimal number of self-adjoint generators.
    pub gen: u64,
    /// Real rank.
    pub rr: u64,
    /// Generator rank.
    pub gr: u64,
}

pub fn cube_bundle_table(m: u64, d: u64) -> Result<CubeBundleRanks> {
    if m < 1 || d < 2 {
        return Err(Error::PreconditionViolated(format!(
            "need m >= 1 and d >= 2, got m = {m}, d = {d}"
        )));
    }
    Ok(CubeBundleRanks {
        gen: (m - 1).div_ceil(d * d) + 1,
        rr: m.div_ceil(2 * d - 1),
        gr: (m + 1).div_ceil(2 * d - 2),
    })
}

/// Bounds on `gr(A)` from an ideal `I` and its quotient `A/I`:
/// `max(gr(I), gr(A/I)) <= gr(A) <= gr(I) + gr(A/I) + 1`.
pub fn extension_bounds(gr_ideal: ExtNat, gr_quotient: ExtNat) -> (ExtNat, ExtNat) {
    (
        gr_ideal.max(gr_quotient),
        gr_ideal + gr_quotient + ExtNat::Finite(1),
    )
}

/// `gr = max(rr, gr_0)`.
pub fn gr_from_gr0_rr(gr0: ExtNat, rr: ExtNat) -> ExtNat {
    gr0.max(rr)
}

/// Whether a claimed triple satisfies `gr = max(rr, gr_0) <= gr_0 + 1`.
pub fn gr_relation_holds(gr0: ExtNat, rr: ExtNat, gr: ExtNat) -> bool {
    gr == gr_from_gr0_rr(gr0, rr) && gr <= gr0 + ExtNat::Finite(1)
}
