//! Primes dividing some nonzero `gamma_n(a_0)` for an eventually periodic
//! coding over the integers, and their density up to a cutoff.
//!
//! With prefix `P` (length `m`) and cycle `C` (length `L`), every
//! `n = m + kL + r` (`0 <= r < L`) gives
//! `gamma_n(a_0) = gamma_P(gamma_C^k(b_r))` with `b_r = gamma_{C[..r]}(a_0)`.
//! For each `r` the sequence `y_k = gamma_C^k(b_r)` is a forward orbit, so
//! mod `p` it is eventually periodic and membership is decided by cycle
//! detection.
//!
//! Exact zeros are found without big numbers: a value above the escape
//! radius `R` stays above it under every map, so only values in `[-R, R]`
//! can lead to zero, and those orbits are finite.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::modular::{inv_mod, mul_mod};
use crate::algebra::{mod_u64, Rational};
use crate::dynamics::{escape_height, GeneratorSet, Ring, SequenceCoding};
use crate::error::{Error, Result};
use crate::galois_process::{fpp_f64, fpp_full_binary, EXACT_FPP_MAX};
use crate::serde_util::display;

pub const PRIME_SCAN_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanOptions {
    /// Maximum exact steps spent resolving which `gamma_n(a_0)` vanish.
    pub zero_cap: usize,
    /// Maximum states visited per prime and residue before giving up.
    pub visit_cap: u64,
    /// Largest admissible cutoff.
    pub max_cutoff: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            zero_cap: 64,
            visit_cap: 1 << 20,
            max_cutoff: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Membership {
    /// `p` divides the nonzero `gamma_n(a_0)` for this smallest `n`.
    Yes { n: u64 },
    No,
    /// `p` divides the denominator of `a_0`.
    Excluded,
    /// The cycle search exceeded its visit cap.
    Undecided,
}

/// Which `k` have `gamma_P(y_k) = 0` exactly, for one residue `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum ZeroPattern {
    /// No zero at any `k`.
    None,
    /// Zeros only among these `k`, all below `horizon`; `y_k` escapes from
    /// `horizon` on.
    Finite { zeros: Vec<u64>, horizon: u64 },
    /// `y_k` is exactly periodic after `tail` with period `period`; zeros
    /// listed for `k < tail + period`.
    Periodic { zeros: Vec<u64>, tail: u64, period: u64 },
}

/// The orbit data shared by every prime.
#[derive(Clone, Debug)]
pub struct OrbitPlan {
    constants: Vec<BigInt>,
    prefix: Vec<usize>,
    cycle: Vec<usize>,
    a0: Rational,
    /// Levels `n < m` whose value is exactly zero.
    prefix_zeros: Vec<bool>,
    patterns: Vec<ZeroPattern>,
}

/// `theta_{w_1} o ... o theta_{w_j}` applied to an exact rational; `None`
/// once a value leaves `[-R, R]`, after which it never returns.
fn apply_word(cs: &[BigInt], word: &[usize], z: &Rational, r: &BigInt) -> Option<Rational> {
    let mut z = z.clone();
    let bound = Rational::from_integer(r.clone());
    if z.abs() > bound {
        return None;
    }
    for &i in word.iter().rev() {
        z = &z * &z + Rational::from_integer(cs[i].clone());
        if z.abs() > bound {
            return None;
        }
    }
    Some(z)
}

impl OrbitPlan {
    pub fn new(set: &GeneratorSet, coding: &SequenceCoding, a0: &Rational, zero_cap: usize) -> Result<Self> {
        if set.ring() != Ring::Integers {
            return Err(Error::UnsupportedRing("prime scans need integer constants".into()));
        }
        let constants = set.integer_constants()?;
        coding.validate(set.len())?;
        let (_, r) = escape_height(set).expect("quadratic maps");
        let prefix = coding.prefix().to_vec();
        let cycle = coding.cycle().to_vec();
        let exact_zero = |word: &[usize], z: &Rational| {
            apply_word(&constants, word, z, &r).is_some_and(|v| v.is_zero())
        };
        let prefix_zeros = (0..prefix.len()).map(|n| exact_zero(&prefix[..n], a0)).collect();
        let mut patterns = Vec::with_capacity(cycle.len());
        for rr in 0..cycle.len() {
            let pattern = if !a0.is_integer() {
                // denominators square at each step and never clear
                ZeroPattern::None
            } else {
                let b = apply_word(&constants, &cycle[..rr], a0, &r);
                Self::pattern(&constants, &prefix, &cycle, b, &r, zero_cap)?
            };
            patterns.push(pattern);
        }
        Ok(OrbitPlan {
            constants,
            prefix,
            cycle,
            a0: a0.clone(),
            prefix_zeros,
            patterns,
        })
    }

    fn pattern(
        cs: &[BigInt],
        prefix: &[usize],
        cycle: &[usize],
        mut y: Option<Rational>,
        r: &BigInt,
        cap: usize,
    ) -> Result<ZeroPattern> {
        let mut seen: HashMap<Rational, u64> = HashMap::new();
        let mut zeros = Vec::new();
        for k in 0..cap as u64 {
            let Some(v) = y else {
                return Ok(if zeros.is_empty() {
                    ZeroPattern::None
                } else {
                    ZeroPattern::Finite { zeros, horizon: k }
                });
            };
            if let Some(&first) = seen.get(&v) {
                return Ok(ZeroPattern::Periodic {
                    zeros,
                    tail: first,
                    period: k - first,
                });
            }
            if apply_word(cs, prefix, &v, r).is_some_and(|w| w.is_zero()) {
                zeros.push(k);
            }
            y = apply_word(cs, cycle, &v, r);
            seen.insert(v, k);
        }
        Err(Error::Precondition(format!(
            "exact zeros not resolved within {cap} steps"
        )))
    }

    /// Primes dividing a denominator.
    pub fn excludes(&self, p: u64) -> bool {
        mod_u64(self.a0.denom(), p) == 0
    }

    fn step(&self, word: &[usize], z: u64, cs: &[u64], p: u64) -> u64 {
        word.iter()
            .rev()
            .fold(z, |z, &i| (mul_mod(z, z, p) + cs[i]) % p)
    }

    pub fn membership(&self, p: u64, visit_cap: u64) -> Membership {
        if self.excludes(p) {
            return Membership::Excluded;
        }
        let cs: Vec<u64> = self.constants.iter().map(|c| mod_u64(c, p)).collect();
        let a0 = mul_mod(mod_u64(self.a0.numer(), p), inv_mod(mod_u64(self.a0.denom(), p), p), p);
        let m = self.prefix.len() as u64;
        for n in 0..self.prefix.len() {
            if !self.prefix_zeros[n] && self.step(&self.prefix[..n], a0, &cs, p) == 0 {
                return Membership::Yes { n: n as u64 };
            }
        }
        let l = self.cycle.len() as u64;
        let mut best: Option<u64> = None;
        for (r, pattern) in self.patterns.iter().enumerate() {
            let b = self.step(&self.cycle[..r], a0, &cs, p);
            let hit = |y: u64| self.step(&self.prefix, y, &cs, p) == 0;
            let f = |y: u64| self.step(&self.cycle, y, &cs, p);
            let k = match pattern {
                ZeroPattern::Periodic { zeros, tail, period } => {
                    // mod p the sequence repeats with the exact one
                    scan(b, f, 0, tail + period, |k, y| hit(y) && !zeros.contains(&k))
                }
                ZeroPattern::None | ZeroPattern::Finite { .. } => {
                    let (zeros, horizon) = match pattern {
                        ZeroPattern::Finite { zeros, horizon } => (zeros.as_slice(), *horizon),
                        _ => (&[][..], 0),
                    };
                    let Some((mu, lambda)) = brent(b, f, visit_cap) else {
                        return Membership::Undecided;
                    };
                    scan(b, f, 0, horizon.max(mu) + lambda, |k, y| hit(y) && !zeros.contains(&k))
                }
            };
            if let Some(k) = k {
                let n = m + k * l + r as u64;
                best = Some(best.map_or(n, |b| b.min(n)));
            }
        }
        best.map_or(Membership::No, |n| Membership::Yes { n })
    }
}

/// First `k` in `[from, to)` with `pred(k, f^k(x0))`.
fn scan(
    x0: u64,
    f: impl Fn(u64) -> u64,
    from: u64,
    to: u64,
    pred: impl Fn(u64, u64) -> bool,
) -> Option<u64> {
    let mut y = x0;
    for k in 0..to {
        if k >= from && pred(k, y) {
            return Some(k);
        }
        y = f(y);
    }
    None
}

/// Brent's cycle detection: `(tail, period)` of `x0, f(x0), ...`.
fn brent(x0: u64, f: impl Fn(u64) -> u64, cap: u64) -> Option<(u64, u64)> {
    let (mut power, mut lambda) = (1u64, 1u64);
    let mut tortoise = x0;
    let mut hare = f(x0);
    let mut visits = 1u64;
    while tortoise != hare {
        if power == lambda {
            tortoise = hare;
            power *= 2;
            lambda = 0;
        }
        hare = f(hare);
        lambda += 1;
        visits += 1;
        if visits > cap {
            return None;
        }
    }
    let (mut tortoise, mut hare) = (x0, x0);
    for _ in 0..lambda {
        hare = f(hare);
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = f(tortoise);
        hare = f(hare);
        mu += 1;
    }
    Some((mu, lambda))
}

/// Whether `p` divides some nonzero `gamma_n(a_0)`, `n >= 0`.
pub fn prime_divides_orbit(
    p: u64,
    set: &GeneratorSet,
    coding: &SequenceCoding,
    a0: &Rational,
) -> Result<Membership> {
    if !crate::algebra::modular::is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let opts = ScanOptions::default();
    let plan = OrbitPlan::new(set, coding, a0, opts.zero_cap)?;
    match plan.membership(p, opts.visit_cap) {
        Membership::Excluded => Err(Error::ExcludedPrime(p)),
        m => Ok(m),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutoffRow {
    pub x: u64,
    pub in_p: u64,
    pub pi_x: u64,
    #[serde(serialize_with = "display")]
    pub ratio: Rational,
    pub ratio_decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeScanReport {
    pub schema_version: u32,
    pub set: String,
    #[serde(serialize_with = "display")]
    pub coding: SequenceCoding,
    #[serde(serialize_with = "display")]
    pub a0: Rational,
    pub rows: Vec<CutoffRow>,
    pub excluded: Vec<u64>,
    /// Primes whose search hit the visit cap; counted as not in the set.
    pub undecided: Vec<u64>,
}

impl PrimeScanReport {
    /// `x,in_P_count,pi_x,ratio_decimal_12dp`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,in_P_count,pi_x,ratio_decimal_12dp\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{}", r.x, r.in_p, r.pi_x, r.ratio_decimal);
        }
        out
    }
}

/// `q` rounded to 12 decimal places, for `0 <= q <= 1`.
fn decimal12(q: &Rational) -> String {
    let scaled = (q * Rational::from_integer(BigInt::from(10u64.pow(12)))).round().to_integer();
    let (int, frac) = scaled.div_rem(&BigInt::from(10u64.pow(12)));
    format!("{int}.{:012}", frac.to_u64().unwrap_or(0))
}

pub fn density_profile(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    a0: &Rational,
    cutoffs: &[u64],
    opts: &ScanOptions,
) -> Result<PrimeScanReport> {
    if cutoffs.is_empty() || cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("cutoffs must be nonempty and increasing".into()));
    }
    let max = *cutoffs.last().unwrap();
    if max > opts.max_cutoff {
        return Err(Error::InvalidArgument(format!(
            "cutoff {max} exceeds the budget {}",
            opts.max_cutoff
        )));
    }
    let plan = OrbitPlan::new(set, coding, a0, opts.zero_cap)?;
    let primes: Vec<u64> = primal::Primes::all()
        .take_while(|&p| p as u64 <= max)
        .map(|p| p as u64)
        .collect();
    let verdicts: Vec<Membership> = primes
        .par_iter()
        .map(|&p| plan.membership(p, opts.visit_cap))
        .collect();
    let mut rows = Vec::with_capacity(cutoffs.len());
    let (mut in_p, mut pi_x, mut i) = (0u64, 0u64, 0usize);
    for &x in cutoffs {
        while i < primes.len() && primes[i] <= x {
            pi_x += 1;
            in_p += u64::from(matches!(verdicts[i], Membership::Yes { .. }));
            i += 1;
        }
        let ratio = if pi_x == 0 {
            Rational::zero()
        } else {
            Rational::new(in_p.into(), pi_x.into())
        };
        rows.push(CutoffRow {
            x,
            in_p,
            pi_x,
            ratio_decimal: decimal12(&ratio),
            ratio,
        });
    }
    let pick = |want: fn(&Membership) -> bool| {
        primes
            .iter()
            .zip(&verdicts)
            .filter(|(_, v)| want(v))
            .map(|(&p, _)| p)
            .collect::<Vec<_>>()
    };
    Ok(PrimeScanReport {
        schema_version: PRIME_SCAN_SCHEMA_VERSION,
        set: set.render(),
        coding: coding.clone(),
        a0: a0.clone(),
        rows,
        excluded: pick(|v| *v == Membership::Excluded),
        undecided: pick(|v| *v == Membership::Undecided),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FppLevel {
    pub n: usize,
    /// Exact up to the exact-value cap, decimal beyond.
    pub fpp: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FppComparison {
    pub cutoff: CutoffRow,
    pub fpp: Vec<FppLevel>,
}

/// The empirical ratio at `cutoff` beside `FPP(G_n)` of the full group for
/// `n <= depth`. Informational: the inequality concerns limits.
pub fn fpp_comparison(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    a0: &Rational,
    depth: usize,
    cutoff: u64,
    opts: &ScanOptions,
) -> Result<FppComparison> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    let report = density_profile(set, coding, a0, &[cutoff], opts)?;
    let fpp = (1..=depth)
        .map(|n| FppLevel {
            n,
            fpp: if n <= EXACT_FPP_MAX {
                fpp_full_binary(n).map(|f| f.to_string()).unwrap_or_default()
            } else {
                fpp_f64(n).to_string()
            },
        })
        .collect();
    Ok(FppComparison {
        cutoff: report.rows.into_iter().next().unwrap(),
        fpp,
    })
}

/// Direct check by exact big-integer orbit values, `n <= n_max`; used as an
/// oracle in tests. Integer `a_0` only.
pub fn brute_force_membership(
    p: u64,
    set: &GeneratorSet,
    coding: &SequenceCoding,
    a0: &BigInt,
    n_max: usize,
) -> Result<Option<u64>> {
    let cs = set.integer_constants()?;
    let word = coding.word(n_max.max(1));
    for n in 0..=n_max {
        let v = word[..n]
            .iter()
            .rev()
            .fold(a0.clone(), |z, &i| &z * &z + &cs[i]);
        if !v.is_zero() && (&v % BigInt::from(p)).is_zero() {
            return Ok(Some(n as u64));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn int(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn x2p1() -> GeneratorSet {
        GeneratorSet::critical_i64(&[1]).unwrap()
    }

    #[test]
    fn documented_memberships() {
        let c = SequenceCoding::constant(0);
        let s = x2p1();
        assert_eq!(prime_divides_orbit(5, &s, &c, &int(0)).unwrap(), Membership::Yes { n: 3 });
        assert_eq!(prime_divides_orbit(3, &s, &c, &int(0)).unwrap(), Membership::No);
        assert_eq!(prime_divides_orbit(2, &s, &c, &int(0)).unwrap(), Membership::Yes { n: 2 });
        assert!(prime_divides_orbit(4, &s, &c, &int(0)).is_err());
        let a = Rational::new(1.into(), 6.into());
        assert!(matches!(prime_divides_orbit(3, &s, &c, &a), Err(Error::ExcludedPrime(3))));
    }

    #[test]
    fn exact_zeros_are_skipped() {
        let c = SequenceCoding::constant(0);
        // {x^2}: every term is 0
        let s = GeneratorSet::critical_i64(&[0]).unwrap();
        assert_eq!(prime_divides_orbit(7, &s, &c, &int(0)).unwrap(), Membership::No);
        // {x^2-1}: 0, -1, 0, -1, ... forever
        let s = GeneratorSet::critical_i64(&[-1]).unwrap();
        assert_eq!(prime_divides_orbit(3, &s, &c, &int(0)).unwrap(), Membership::No);
        // {x^2-2}: 0, -2, 2, 2, ...: every odd prime is out, 2 divides 2
        let s = GeneratorSet::critical_i64(&[-2]).unwrap();
        assert_eq!(prime_divides_orbit(2, &s, &c, &int(0)).unwrap(), Membership::Yes { n: 1 });
        assert_eq!(prime_divides_orbit(5, &s, &c, &int(0)).unwrap(), Membership::No);
    }

    #[test]
    fn brent_finds_rho() {
        // 0 -> 1 -> 2 -> 3 -> 1
        let f = |x: u64| if x == 3 { 1 } else { x + 1 };
        assert_eq!(brent(0, f, 100), Some((1, 3)));
        assert_eq!(brent(5, |x| x, 100), Some((0, 1)));
        assert_eq!(brent(0, |x| x + 1, 100), None);
    }

    #[test]
    fn agrees_with_exact_orbits() {
        let sets = [
            (vec![1], "|1"),
            (vec![-2], "|1"),
            (vec![-1], "|1"),
            (vec![3, -4], "1|2"),
            (vec![2, -1, 5], "2,3|1,3"),
            (vec![0, -3], "|1,2"),
        ];
        for (cs, code) in sets {
            let s = GeneratorSet::critical_i64(&cs).unwrap();
            let c: SequenceCoding = code.parse().unwrap();
            for a0 in [-1i64, 0, 2] {
                let plan = OrbitPlan::new(&s, &c, &int(a0), 64).unwrap();
                for p in primal::Primes::all().take_while(|&p| p <= 200).map(|p| p as u64) {
                    let fast = plan.membership(p, 1 << 20);
                    let slow = brute_force_membership(p, &s, &c, &a0.into(), 12).unwrap();
                    match (fast, slow) {
                        (Membership::Yes { n }, Some(m)) => assert_eq!(n, m, "{cs:?} {code} a0={a0} p={p}"),
                        (Membership::Yes { n }, None) => assert!(n > 12, "{cs:?} {code} a0={a0} p={p}"),
                        (Membership::No, None) => {}
                        other => panic!("{cs:?} {code} a0={a0} p={p}: {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn excluded_primes_are_denominator_primes() {
        let a = Rational::new(1.into(), 6.into());
        let r = density_profile(&x2p1(), &SequenceCoding::constant(0), &a, &[100], &ScanOptions::default()).unwrap();
        assert_eq!(r.excluded, vec![2, 3]);
    }

    #[test]
    fn profile_is_monotone_and_deterministic() {
        let c = SequenceCoding::constant(0);
        let opts = ScanOptions::default();
        let r = density_profile(&x2p1(), &c, &int(0), &[100, 1000, 10_000], &opts).unwrap();
        for w in r.rows.windows(2) {
            assert!(w[0].in_p <= w[1].in_p && w[0].pi_x <= w[1].pi_x);
        }
        assert_eq!(r.rows[0].pi_x, 25);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| density_profile(&x2p1(), &c, &int(0), &[100, 1000, 10_000], &opts).unwrap());
        assert_eq!(r, single);
        assert!(r.to_csv().starts_with("x,in_P_count,pi_x,ratio_decimal_12dp\n100,"));
        assert!(density_profile(&x2p1(), &c, &int(0), &[10, 5], &opts).is_err());
        assert!(density_profile(&x2p1(), &c, &int(0), &[10_000_000], &opts).is_err());
    }

    #[test]
    fn polynomial_sets_rejected() {
        let s = GeneratorSet::parse_critical("t", Ring::IntPolynomials).unwrap();
        let c = SequenceCoding::constant(0);
        assert!(fpp_comparison(&s, &c, &int(0), 3, 100, &ScanOptions::default()).is_err());
        let cmp = fpp_comparison(&x2p1(), &c, &int(0), 1, 1000, &ScanOptions::default()).unwrap();
        assert_eq!(cmp.fpp[0].fpp, "1/2");
    }

    #[test]
    fn decimals() {
        assert_eq!(decimal12(&Rational::new(1.into(), 3.into())), "0.333333333333");
        assert_eq!(decimal12(&Rational::one()), "1.000000000000");
    }
}
