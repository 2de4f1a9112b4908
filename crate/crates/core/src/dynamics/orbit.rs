//! Critical orbits, the escape criterion and semigroup orbit closure.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{GeneratorSet, Ring, SequenceCoding};
use crate::algebra::IntPolynomial;
use crate::error::{Error, Result};

/// `gamma_1(0), ..., gamma_n(0)` where `gamma_k = theta_1 o ... o theta_k`.
///
/// Each level is evaluated innermost first: `z_0 = 0`, `z_m = theta_{k-m+1}(z_{m-1})`.
pub fn critical_orbit(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    n: usize,
) -> Result<Vec<IntPolynomial>> {
    orbit_from(set, coding, &IntPolynomial::zero(), n)
}

/// `gamma_1(a), ..., gamma_n(a)`.
pub fn orbit_from(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    a: &IntPolynomial,
    n: usize,
) -> Result<Vec<IntPolynomial>> {
    if n == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    coding.validate(set.len())?;
    let word = coding.word(n);
    Ok((1..=n)
        .map(|k| {
            word[..k]
                .iter()
                .rev()
                .fold(a.clone(), |z, &i| set.maps()[i].apply(&z))
        })
        .collect())
}

/// `gamma_n` as a polynomial in `x` over the integers.
pub fn gamma_polynomial(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    n: usize,
) -> Result<IntPolynomial> {
    if set.ring() != Ring::Integers {
        return Err(Error::UnsupportedRing("gamma_n as a polynomial needs integer maps".into()));
    }
    coding.validate(set.len())?;
    let word = coding.word(n);
    Ok(word.iter().rev().fold(IntPolynomial::variable(), |g, &i| {
        set.maps()[i].compose_integer(&g).expect("integer ring")
    }))
}

/// `|c_i^2 + c_j| > max_k |c_k|` for every ordered pair; when true, `Orb_S(0)`
/// contains no finite orbit point.
pub fn escape_criterion(set: &GeneratorSet) -> Result<bool> {
    let cs = set.integer_constants()?;
    let bound = cs.iter().map(BigInt::abs).max().unwrap_or_default();
    Ok(cs
        .iter()
        .all(|ci| cs.iter().all(|cj| (ci * ci + cj).abs() > bound)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitCaps {
    /// Stop with `Unknown` once this many points have been visited.
    pub size_cap: usize,
    /// Escape is only declared above this height (absolute value or degree).
    pub height_cap: u64,
}

impl Default for OrbitCaps {
    fn default() -> Self {
        OrbitCaps {
            size_cap: 100_000,
            height_cap: 1_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitStatus {
    /// The full orbit, sorted canonically; closed under every generator.
    Closed(Vec<IntPolynomial>),
    /// Two consecutive breadth-first frontiers lie above the escape height
    /// with strictly increasing minima; `level` is the depth reached.
    Escaping(usize),
    /// Caps reached; the points visited so far.
    Unknown(Vec<IntPolynomial>),
}

/// Integers by value; otherwise by degree, then coefficients from the top.
pub fn canonical_cmp(a: &IntPolynomial, b: &IntPolynomial) -> Ordering {
    if let (Some(x), Some(y)) = (a.as_constant(), b.as_constant()) {
        return x.cmp(&y);
    }
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

/// Growth key: `(0, |v|)` over the integers, `(degree, height)` over `Z[t]`.
fn height_key(ring: Ring, v: &IntPolynomial) -> (usize, BigInt) {
    match ring {
        Ring::Integers => (0, v.as_constant().unwrap_or_default().abs()),
        Ring::IntPolynomials => (v.degree().map_or(0, |d| d + 1), v.height()),
    }
}

/// A height beyond which every generator strictly increases the height, or
/// `None` if some map has degree below 2 in `x`.
///
/// Over the integers `|v| > 1 + sum |a_i|` (non-leading `a_i`) forces
/// `|f(v)| > |v|`; over `Z[t]` `deg v > max deg a_i` forces `deg f(v) > deg v`.
pub(crate) fn escape_height(set: &GeneratorSet) -> Option<(usize, BigInt)> {
    if set.maps().iter().any(|m| m.degree() < 2) {
        return None;
    }
    match set.ring() {
        Ring::Integers => {
            let r = set
                .maps()
                .iter()
                .map(|m| {
                    let d = m.degree();
                    m.coeffs()[..d]
                        .iter()
                        .map(|c| c.as_constant().unwrap().abs())
                        .sum::<BigInt>()
                })
                .max()
                .unwrap();
            Some((0, r + 1))
        }
        Ring::IntPolynomials => {
            let d = set.maps().iter().map(|m| m.max_coefficient_degree()).max().unwrap();
            // key (deg + 1, height) with height unbounded: compare degree only
            Some((d + 1, BigInt::zero()))
        }
    }
}

fn above(key: &(usize, BigInt), bound: &(usize, BigInt), ring: Ring) -> bool {
    match ring {
        Ring::Integers => key.1 > bound.1,
        Ring::IntPolynomials => key.0 > bound.0,
    }
}

/// Breadth-first closure of `{p}` under every generator.
pub fn semigroup_orbit(set: &GeneratorSet, p: &IntPolynomial, caps: OrbitCaps) -> OrbitStatus {
    let ring = set.ring();
    let escape = escape_height(set).map(|(d, r)| match ring {
        Ring::Integers => (0, r.max(BigInt::from(caps.height_cap))),
        Ring::IntPolynomials => (d.max(caps.height_cap as usize + 1), BigInt::zero()),
    });
    let mut visited: HashSet<IntPolynomial> = HashSet::from([p.clone()]);
    let mut frontier = vec![p.clone()];
    let mut prev_min: Option<(usize, BigInt)> = None;
    let mut level = 0;
    loop {
        let mut next = Vec::new();
        for v in &frontier {
            for m in set.maps() {
                let w = m.apply(v);
                if visited.insert(w.clone()) {
                    next.push(w);
                }
            }
        }
        level += 1;
        if next.is_empty() {
            let mut all: Vec<_> = visited.into_iter().collect();
            all.sort_by(canonical_cmp);
            return OrbitStatus::Closed(all);
        }
        let min = next.iter().map(|v| height_key(ring, v)).min().unwrap();
        if let Some(bound) = &escape {
            let all_above = next.iter().all(|v| above(&height_key(ring, v), bound, ring));
            if all_above && prev_min.as_ref().is_some_and(|pm| above(pm, bound, ring) && *pm < min) {
                return OrbitStatus::Escaping(level);
            }
        }
        prev_min = Some(min);
        if visited.len() > caps.size_cap {
            let mut all: Vec<_> = visited.into_iter().collect();
            all.sort_by(canonical_cmp);
            return OrbitStatus::Unknown(all);
        }
        frontier = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteOrbitVerdict {
    /// `witness` lies in `Orb_S(p)` (or is `p`) and has a finite orbit.
    Yes(IntPolynomial),
    No,
    Unknown,
}

/// Points reachable from `p` (including `p`) in breadth-first order, pruning
/// any point above `bound`; `None` if more than `cap` points survive.
fn bounded_orbit(
    set: &GeneratorSet,
    p: &IntPolynomial,
    bound: &BigInt,
    cap: usize,
) -> Option<Vec<IntPolynomial>> {
    let small = |v: &IntPolynomial| v.as_constant().unwrap_or_default().abs() <= *bound;
    let mut seen: HashSet<IntPolynomial> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(v) = queue.pop_front() {
        if !small(&v) || !seen.insert(v.clone()) {
            continue;
        }
        order.push(v.clone());
        if order.len() > cap {
            return None;
        }
        for m in set.maps() {
            queue.push_back(m.apply(&v));
        }
    }
    Some(order)
}

/// Whether `Orb_S(p) ∪ {p}` contains a point whose own orbit is finite.
///
/// Over the integers with every map of degree at least 2 the search is exact:
/// a point above the escape height has an infinite orbit, so only the finitely
/// many points below it need checking. Otherwise points are tried in
/// breadth-first order with [`semigroup_orbit`], answering `No` only through
/// [`escape_criterion`] when `p = 0`.
pub fn orbit_contains_finite_orbit_point(
    set: &GeneratorSet,
    p: &IntPolynomial,
    caps: OrbitCaps,
) -> FiniteOrbitVerdict {
    if set.ring() == Ring::Integers {
        if let Some((_, r)) = escape_height(set) {
            let Some(candidates) = bounded_orbit(set, p, &r, caps.size_cap) else {
                return FiniteOrbitVerdict::Unknown;
            };
            for q in candidates {
                if bounded_orbit(set, &q, &r, caps.size_cap)
                    .is_some_and(|orb| orb.iter().all(|v| set.maps().iter().all(|m| orb.contains(&m.apply(v)))))
                {
                    return FiniteOrbitVerdict::Yes(q);
                }
            }
            return FiniteOrbitVerdict::No;
        }
    }
    let critical_zero = p.is_zero() && set.is_critical() && set.ring() == Ring::Integers;
    if critical_zero && escape_criterion(set).unwrap_or(false) {
        return FiniteOrbitVerdict::No;
    }
    let mut seen: HashSet<IntPolynomial> = HashSet::new();
    let mut queue = VecDeque::from([p.clone()]);
    let inner = OrbitCaps {
        size_cap: caps.size_cap.min(10_000),
        ..caps
    };
    while let Some(v) = queue.pop_front() {
        if !seen.insert(v.clone()) {
            continue;
        }
        if seen.len() > caps.size_cap.min(1_000) {
            break;
        }
        if let OrbitStatus::Closed(_) = semigroup_orbit(set, &v, inner) {
            return FiniteOrbitVerdict::Yes(v);
        }
        for m in set.maps() {
            queue.push_back(m.apply(&v));
        }
    }
    FiniteOrbitVerdict::Unknown
}
