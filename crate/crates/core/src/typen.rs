//! Topologies on EI categories of type ℕ, described by their d-functions.
//!
//! Nonempty sieves on `n` are `S(n, r)`, all morphisms out of `n` of degree
//! at least `r`. A topology is recorded by `d_n`, the largest `r` with
//! `S(n, r)` covering; `−∞` marks objects where the empty sieve covers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{trunc_fi, FiniteCategory, Mor, Obj};
use crate::sieves::{all_sieves, Sieve};
use crate::topology::CoverRule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DValue {
    NegInf,
    Fin(u64),
    Inf,
}

impl fmt::Display for DValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DValue::NegInf => write!(f, "-inf"),
            DValue::Fin(k) => write!(f, "{k}"),
            DValue::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for DValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DValue::Fin(k) => s.serialize_u64(*k),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl DValue {
    pub fn parse(s: &str) -> Result<DValue> {
        match s.trim() {
            "inf" | "∞" => Ok(DValue::Inf),
            "-inf" | "−∞" | "-∞" => Ok(DValue::NegInf),
            t => t.parse().map(DValue::Fin).map_err(|_| Error::Document(format!("bad d-value {t:?}"))),
        }
    }

    fn positive(self) -> bool {
        matches!(self, DValue::Inf) || matches!(self, DValue::Fin(k) if k > 0)
    }
}

/// An eventually constant d-sequence: explicit values, then `tail` forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSequence {
    pub prefix: Vec<DValue>,
    pub tail: DValue,
}

impl DSequence {
    pub fn get(&self, n: usize) -> DValue {
        self.prefix.get(n).copied().unwrap_or(self.tail)
    }

    /// Parses `2,1,0` with an optional `;tail`, e.g. `1,0;-inf`. The default tail is `0`.
    pub fn parse(s: &str) -> Result<DSequence> {
        let (body, tail) = match s.split_once(';') {
            Some((b, t)) => (b, DValue::parse(t)?),
            None => (s, DValue::Fin(0)),
        };
        let prefix =
            body.split(',').filter(|t| !t.trim().is_empty()).map(DValue::parse).collect::<Result<Vec<_>>>()?;
        Ok(DSequence { prefix, tail })
    }

    /// Horizon past which every value equals the tail and any descending
    /// piece started in the prefix has finished.
    fn horizon(&self) -> usize {
        let longest = self.prefix.iter().map(|v| if let DValue::Fin(k) = v { *k as usize } else { 0 }).max().unwrap_or(0);
        self.prefix.len() + longest + 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecKind {
    Generic,
    Nongeneric,
}

/// A topology given by an indicator word. For generic specs, `f(n) = 1`
/// marks `d_n > 0`, and `tail` repeats forever. For nongeneric specs the
/// word is padded with zeros up to `cutoff`, and `d_n = −∞` from there on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DSpec {
    pub kind: SpecKind,
    pub indicator: Vec<u8>,
    pub tail: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
}

impl DSpec {
    pub fn generic(indicator: Vec<u8>, tail: u8) -> DSpec {
        DSpec { kind: SpecKind::Generic, indicator, tail, cutoff: None }
    }

    pub fn nongeneric(indicator: Vec<u8>, cutoff: usize) -> DSpec {
        DSpec { kind: SpecKind::Nongeneric, indicator, tail: 0, cutoff: Some(cutoff) }
    }

    pub fn from_json(text: &str) -> Result<DSpec> {
        Ok(serde_json::from_str(text)?)
    }

    fn bit(&self, n: usize) -> u8 {
        match self.kind {
            SpecKind::Generic => self.indicator.get(n).copied().unwrap_or(self.tail),
            SpecKind::Nongeneric => self.indicator.get(n).copied().unwrap_or(0),
        }
    }

    fn cutoff(&self) -> usize {
        self.cutoff.unwrap_or(usize::MAX)
    }

    /// Malformed fields, independent of the d-sequence conditions.
    fn shape_error(&self) -> Option<String> {
        if self.indicator.iter().any(|&b| b > 1) || self.tail > 1 {
            return Some("indicator bits must be 0 or 1".into());
        }
        match (self.kind, self.cutoff) {
            (SpecKind::Generic, Some(_)) => Some("generic specs have no cutoff".into()),
            (SpecKind::Nongeneric, None) => Some("nongeneric specs need a cutoff".into()),
            (SpecKind::Nongeneric, Some(m)) => {
                if self.tail != 0 {
                    Some("nongeneric specs have a zero tail".into())
                } else if self.indicator.iter().skip(m).any(|&b| b == 1) {
                    Some(format!("indicator is set at or past the cutoff {m}"))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// The d-sequence: `d_n` is the length of the run of ones starting at
    /// `n`, infinite if the run never ends.
    pub fn d_sequence(&self) -> DSequence {
        let len = match self.kind {
            SpecKind::Generic => self.indicator.len(),
            SpecKind::Nongeneric => self.cutoff(),
        };
        let mut prefix = Vec::with_capacity(len);
        for n in 0..len {
            prefix.push(d_value(self, n));
        }
        let tail = match self.kind {
            SpecKind::Generic if self.tail == 1 => DValue::Inf,
            SpecKind::Generic => DValue::Fin(0),
            SpecKind::Nongeneric => DValue::NegInf,
        };
        DSequence { prefix, tail }
    }
}

pub fn d_value(spec: &DSpec, n: usize) -> DValue {
    if n >= spec.cutoff() {
        return DValue::NegInf;
    }
    let mut run = 0u64;
    let mut k = n;
    while k < spec.cutoff() && spec.bit(k) == 1 {
        run += 1;
        k += 1;
        if spec.kind == SpecKind::Generic && k >= spec.indicator.len() && spec.tail == 1 {
            return DValue::Inf;
        }
    }
    DValue::Fin(run)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecValidation {
    pub valid: bool,
    /// The piece decomposition succeeded.
    pub pieces_ok: bool,
    /// Re-deriving the sequence from its indicator word gives it back.
    pub indicator_ok: bool,
    pub first_violation: Option<(usize, String)>,
}

/// Splits the sequence into pieces `(0)`, `(r, …, 1, 0)` and a constant
/// infinite tail; `−∞` and `∞` tails may not both occur.
fn piece_check(d: &DSequence) -> std::result::Result<(), (usize, String)> {
    if let DValue::Fin(k) = d.tail {
        if k > 0 {
            return Err((d.prefix.len(), format!("tail {k} cannot repeat forever")));
        }
    }
    let horizon = d.horizon();
    let mut n = 0;
    while n < horizon {
        match d.get(n) {
            DValue::Fin(0) => n += 1,
            DValue::Fin(r) => {
                for i in 1..=r {
                    let want = DValue::Fin(r - i);
                    let got = d.get(n + i as usize);
                    if got != want {
                        return Err((n + i as usize, format!("piece from {n} expects {want}, found {got}")));
                    }
                }
                n += r as usize + 1;
            }
            inf => {
                for k in n..horizon {
                    if d.get(k) != inf {
                        return Err((k, format!("{inf} at {n} must continue forever, found {}", d.get(k))));
                    }
                }
                if d.tail != inf {
                    return Err((horizon, "infinite piece does not reach the tail".into()));
                }
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Rebuilds the sequence from its indicator word `f(n) = [d_n > 0]`. When
/// some `d_n = −∞`, the word is cut after the last zero of `d`.
fn indicator_check(d: &DSequence) -> std::result::Result<(), (usize, String)> {
    let horizon = d.horizon();
    let nongeneric = (0..horizon).any(|n| d.get(n) == DValue::NegInf);
    let spec = if nongeneric {
        let m = (0..horizon).rev().find(|&n| d.get(n) == DValue::Fin(0)).map_or(0, |z| z + 1);
        DSpec::nongeneric((0..m).map(|n| d.get(n).positive() as u8).collect(), m)
    } else {
        DSpec::generic(
            (0..horizon).map(|n| d.get(n).positive() as u8).collect(),
            d.tail.positive() as u8,
        )
    };
    let rebuilt = spec.d_sequence();
    for n in 0..horizon {
        if rebuilt.get(n) != d.get(n) {
            return Err((n, format!("expected {} from the indicator word, found {}", rebuilt.get(n), d.get(n))));
        }
    }
    if rebuilt.tail != d.tail {
        return Err((horizon, format!("tail {} does not match {}", d.tail, rebuilt.tail)));
    }
    Ok(())
}

/// Runs the piece decomposition and the indicator round trip on a d-sequence.
pub fn validate_sequence(d: &DSequence) -> SpecValidation {
    let pieces = piece_check(d);
    let indicator = indicator_check(d);
    let first_violation = match (&pieces, &indicator) {
        (Err(e), _) | (Ok(()), Err(e)) => Some(e.clone()),
        _ => None,
    };
    SpecValidation {
        valid: pieces.is_ok() && indicator.is_ok(),
        pieces_ok: pieces.is_ok(),
        indicator_ok: indicator.is_ok(),
        first_violation,
    }
}

pub fn validate_spec(spec: &DSpec) -> SpecValidation {
    if let Some(e) = spec.shape_error() {
        return SpecValidation { valid: false, pieces_ok: false, indicator_ok: false, first_violation: Some((0, e)) };
    }
    validate_sequence(&spec.d_sequence())
}

/// No object has `d_n = ∞`.
pub fn rigid_spec(spec: &DSpec) -> bool {
    match spec.kind {
        SpecKind::Nongeneric => true,
        SpecKind::Generic => spec.tail == 0,
    }
}

/// Objects below `horizon` with `d_n ∈ {0, ∞}`.
pub fn dense_objects(spec: &DSpec, horizon: usize) -> Vec<usize> {
    (0..horizon).filter(|&n| matches!(d_value(spec, n), DValue::Fin(0) | DValue::Inf)).collect()
}

/// Objects below `horizon` whose only cover is the maximal sieve.
pub fn irreducible_indices(spec: &DSpec, horizon: usize) -> Vec<usize> {
    (0..horizon).filter(|&n| d_value(spec, n) == DValue::Fin(0)).collect()
}

/// `S(object, rank)`, or the empty sieve when `rank` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicSieve {
    pub object: usize,
    pub rank: Option<usize>,
}

impl fmt::Display for SymbolicSieve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rank {
            Some(r) => write!(f, "S({}, {r})", self.object),
            None => write!(f, "∅ on {}", self.object),
        }
    }
}

/// Pullback of `S(m, r)` along a morphism of degree `deg`.
pub fn symbolic_pullback(s: SymbolicSieve, deg: usize) -> SymbolicSieve {
    let object = s.object + deg;
    let rank = s.rank.map(|r| r.saturating_sub(deg));
    SymbolicSieve { object, rank }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub generic: Vec<DSpec>,
    pub nongeneric: Vec<DSpec>,
    pub all_valid: bool,
}

/// Generic specs with indicator support in `[0, N)` and zero tail, and
/// nongeneric specs with cutoff at most `N`. The latter correspond to the
/// finite subsets `Z ⊆ [0, N)` of objects with `d_n = 0`: the cutoff is
/// `max Z + 1`, and below it the indicator is the complement of `Z`.
pub fn spec_census(n: usize) -> Census {
    let mut generic = Vec::with_capacity(1 << n);
    let mut nongeneric = Vec::with_capacity(1 << n);
    for mask in 0u64..(1u64 << n) {
        let word: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
        generic.push(DSpec::generic(word, 0));
        let cutoff = (0..n).rev().find(|&i| (mask >> i) & 1 == 1).map_or(0, |m| m + 1);
        let word: Vec<u8> = (0..cutoff).map(|i| 1 - ((mask >> i) & 1) as u8).collect();
        nongeneric.push(DSpec::nongeneric(word, cutoff));
    }
    let all_valid = generic.iter().chain(&nongeneric).all(|s| validate_spec(s).valid);
    Census { generic, nongeneric, all_valid }
}

/// Degree of a morphism in a truncation whose objects are named `0..=N`.
fn degree(cat: &FiniteCategory, f: Mor) -> Result<usize> {
    let level = |x: Obj| {
        cat.obj_name(x).parse::<usize>().map_err(|_| Error::PreconditionFails("objects must be named 0..=N".into()))
    };
    Ok(level(cat.cod(f))? - level(cat.dom(f))?)
}

fn level_object(cat: &FiniteCategory, n: usize) -> Result<Obj> {
    cat.obj(&n.to_string())
}

/// The sieve `S(m, r)` inside a truncation.
pub fn realize(cat: &FiniteCategory, s: SymbolicSieve) -> Result<Sieve> {
    let x = level_object(cat, s.object)?;
    let Some(r) = s.rank else { return Ok(Sieve::empty(x)) };
    let mut members = Vec::new();
    for &f in cat.out_of(x) {
        if degree(cat, f)? >= r {
            members.push(f);
        }
    }
    Sieve::from_members(cat, x, &members)
}

/// The rule of `spec` restricted to the truncation: `S(m, r)` for
/// `r ≤ min(d_m, N − m)`, and every sieve where `d_m = −∞`.
pub fn truncated_rule(cat: &FiniteCategory, spec: &DSpec) -> Result<CoverRule> {
    let top = cat.num_objects() - 1;
    let mut covers = Vec::new();
    for m in 0..=top {
        let x = level_object(cat, m)?;
        let list = match d_value(spec, m) {
            DValue::NegInf => all_sieves(cat, x)?,
            d => {
                let bound = match d {
                    DValue::Fin(k) => (k as usize).min(top - m),
                    _ => top - m,
                };
                (0..=bound).map(|r| realize(cat, SymbolicSieve { object: m, rank: Some(r) })).collect::<Result<_>>()?
            }
        };
        covers.push(list);
    }
    // Covers are indexed by object order; levels are sorted the same way.
    CoverRule::new(cat, covers)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub horizon: usize,
    pub sieve_inventory_ok: bool,
    pub pullback_ok: bool,
    pub stability_ok: bool,
    /// Always `skipped`: covers near the top of the window are cut off.
    pub transitivity: String,
    pub failures: Vec<String>,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.sieve_inventory_ok && self.pullback_ok && self.stability_ok
    }
}

pub fn truncation_crosscheck(spec: &DSpec, n: usize) -> Result<CrosscheckReport> {
    if n > 4 {
        return Err(Error::SizeBudgetExceeded(format!("truncation at {n} is larger than 4")));
    }
    truncation_crosscheck_on(&trunc_fi(n)?, spec)
}

/// Runs the checks on any truncated type-ℕ category with objects `0..=N`.
pub fn truncation_crosscheck_on(cat: &FiniteCategory, spec: &DSpec) -> Result<CrosscheckReport> {
    let top = cat.num_objects() - 1;
    let mut failures = Vec::new();

    let mut inventory = true;
    for m in 0..=top {
        let x = level_object(cat, m)?;
        let mut expected: Vec<Sieve> = (0..=top - m)
            .map(|r| realize(cat, SymbolicSieve { object: m, rank: Some(r) }))
            .collect::<Result<_>>()?;
        expected.push(Sieve::empty(x));
        expected.sort();
        expected.dedup();
        let actual = all_sieves(cat, x)?;
        if actual != expected || expected.len() != top - m + 2 {
            inventory = false;
            failures.push(format!("object {m}: {} sieves, expected {}", actual.len(), top - m + 2));
        }
    }

    let mut pullbacks = true;
    for f in cat.morphisms() {
        let m: usize = cat.obj_name(cat.dom(f)).parse().expect("checked above");
        let deg = degree(cat, f)?;
        let ranks = (0..=top - m).map(Some).chain([None]);
        for rank in ranks {
            let s = SymbolicSieve { object: m, rank };
            let direct = realize(cat, s)?.pullback(cat, f)?;
            let symbolic = realize(cat, symbolic_pullback(s, deg))?;
            if direct != symbolic {
                pullbacks = false;
                failures.push(format!("pullback of {s} along {} disagrees", cat.mor_name(f)));
            }
        }
    }

    let mut stability = true;
    let rule = truncated_rule(cat, spec)?;
    for x in cat.objects() {
        for s in rule.covers(x) {
            for &f in cat.out_of(x) {
                if !rule.contains(&s.pullback(cat, f)?) {
                    stability = false;
                    failures.push(format!("pullback of {} along {} does not cover", s.display(cat), cat.mor_name(f)));
                }
            }
        }
    }

    Ok(CrosscheckReport {
        horizon: top,
        sieve_inventory_ok: inventory,
        pullback_ok: pullbacks,
        stability_ok: stability,
        transitivity: "skipped".into(),
        failures,
    })
}
