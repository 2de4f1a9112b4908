//! Stability and maximality certificates for finite prefixes of a sequence
//! of quadratic maps over `Q` or `Q(t)`.
//!
//! Stability at level `n` rests on square tests: `-gamma_1(0)` and then each
//! `gamma_n(0)` must be non-squares, each level building on the previous one.
//! Over `Q(t)`, when `c_{theta_1}` reduces mod 2 to a polynomial of
//! derivative 1, no value `±gamma_n(0)` can be a square and every level is
//! certified at once. Over `Q`, a failed square test falls back to
//! Eisenstein at 2 on `gamma_n` or `gamma_n(x+1)`.
//!
//! Maximality at level `n >= 2` is certified only through the sufficient
//! criterion: a place dividing `gamma_n(0)` to odd order and dividing no
//! earlier `gamma_m(0)` (over `Q` the place must be an odd prime). Level 2
//! additionally has an exact test in the explicit quadratic field `K_1`.

mod checks;
mod maximality;

use rayon::prelude::*;
use serde::Serialize;

pub use checks::{
    degree_law_check, discriminant_identity_check, discriminant_identity_sides, level2_oracle,
    tool_conditions, ToolConditions,
};
pub use maximality::{
    maximality_by_primitive_odd_prime, maximality_qt, verify_witness, CriterionOutcome,
    PrimeWitness,
};

use crate::algebra::{is_square, FactorBudget, IntPolynomial, RatPolynomial, Rational};
use crate::dynamics::{
    critical_orbit, eisenstein_on, gamma_polynomial, EisensteinCase, GeneratorSet, Ring,
    SequenceCoding,
};
use crate::error::{Error, Result};
use crate::serde_util::display;

pub const CHAIN_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stability {
    /// The tested value (`-gamma_1(0)` at level 1, else `gamma_n(0)`) is not
    /// a square and the previous level is certified.
    NonSquare {
        #[serde(serialize_with = "display")]
        value: IntPolynomial,
    },
    /// `gamma_n` itself is irreducible by Eisenstein at 2.
    Eisenstein {
        case: EisensteinCase,
        /// A polynomial in `x`.
        #[serde(serialize_with = "display_in_x")]
        tested: IntPolynomial,
    },
    /// `c_{theta_1}` has derivative 1 mod 2; holds at every level.
    DerivativeTrick,
    Failed { reason: String },
    Inconclusive { reason: String },
}

impl Stability {
    pub fn is_certified(&self) -> bool {
        matches!(
            self,
            Stability::NonSquare { .. } | Stability::Eisenstein { .. } | Stability::DerivativeTrick
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Maximality {
    PrimitiveOddPrime { witness: PrimeWitness },
    /// Level 1: `[K_1 : K] = 2` follows from level-1 stability.
    Level1Quadratic,
    /// Level 2 exact test, used when the sufficient criterion fails.
    Level2Oracle { maximal: bool },
    /// No primitive odd place to odd order exists; maximality is undecided.
    CriterionFails,
    NotAttempted { reason: String },
}

impl Maximality {
    pub fn is_maximal(&self) -> bool {
        matches!(
            self,
            Maximality::PrimitiveOddPrime { .. }
                | Maximality::Level1Quadratic
                | Maximality::Level2Oracle { maximal: true }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCertificate {
    pub level: usize,
    /// 1-based generator index of `theta_n`.
    pub theta_index: usize,
    #[serde(serialize_with = "display")]
    pub orbit_value: IntPolynomial,
    pub stability: Stability,
    pub maximality: Maximality,
    /// Maximality at this level is guaranteed by the tool conditions.
    pub tool_guaranteed: bool,
}

/// Tool conditions with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToolSummary {
    pub derivative: Vec<usize>,
    pub leading: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainSummary {
    /// Largest `n` such that levels `1..=n` are all certified stable.
    pub stable_through: usize,
    pub maximal_levels: Vec<usize>,
    /// `theta_1` meets the derivative condition and some `c_k` the leading
    /// one, so every level with `theta_n = c_k` is maximal.
    pub tool_guarantee: bool,
    pub tool_conditions: Option<ToolSummary>,
    /// Some level is inconclusive.
    pub inconclusive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateChain {
    pub schema_version: u32,
    pub ring: Ring,
    pub set: String,
    #[serde(serialize_with = "display")]
    pub coding: SequenceCoding,
    pub depth: usize,
    pub levels: Vec<LevelCertificate>,
    pub summary: ChainSummary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub budget: FactorBudget,
    /// Highest level at which the Eisenstein fallback builds `gamma_n`.
    pub eisenstein_cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            budget: FactorBudget::default(),
            eisenstein_cap: 8,
        }
    }
}

fn display_in_x<S: serde::Serializer>(f: &IntPolynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.display_with("x"))
}

fn tested_value(orbit: &[IntPolynomial], n: usize) -> IntPolynomial {
    if n == 1 {
        -&orbit[0]
    } else {
        orbit[n - 1].clone()
    }
}

fn value_is_square(ring: Ring, v: &IntPolynomial) -> bool {
    match ring {
        Ring::Integers => is_square(&Rational::from_integer(v.as_constant().unwrap_or_default())),
        Ring::IntPolynomials => is_square(&RatPolynomial::from(v.clone())),
    }
}

fn stability_levels(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    orbit: &[IntPolynomial],
    tool: Option<&ToolConditions>,
    opts: &CertifyOptions,
) -> Result<Vec<Stability>> {
    let depth = orbit.len();
    if tool.is_some_and(|t| t.derivative.contains(&coding.index(1))) {
        return Ok(vec![Stability::DerivativeTrick; depth]);
    }
    let ring = set.ring();
    let squares: Vec<bool> = (1..=depth)
        .into_par_iter()
        .map(|n| value_is_square(ring, &tested_value(orbit, n)))
        .collect();
    let mut out: Vec<Stability> = Vec::with_capacity(depth);
    for n in 1..=depth {
        let prev_ok = n == 1 || out[n - 2].is_certified();
        if prev_ok && !squares[n - 1] {
            out.push(Stability::NonSquare {
                value: tested_value(orbit, n),
            });
            continue;
        }
        if ring == Ring::Integers && n <= opts.eisenstein_cap {
            let e = eisenstein_on(&gamma_polynomial(set, coding, n)?);
            if e.case != EisensteinCase::Failure {
                out.push(Stability::Eisenstein {
                    case: e.case,
                    tested: e.tested,
                });
                continue;
            }
        }
        out.push(if squares[n - 1] {
            let what = if n == 1 { "-gamma_1(0)" } else { "gamma_n(0)" };
            Stability::Failed {
                reason: format!("{what} = {} is a square", tested_value(orbit, n)),
            }
        } else {
            Stability::Inconclusive {
                reason: format!("level {} is not certified", n - 1),
            }
        });
    }
    Ok(out)
}

fn maximality_level(
    ring: Ring,
    orbit: &[IntPolynomial],
    n: usize,
    stable_through: usize,
    budget: &FactorBudget,
) -> Result<Maximality> {
    if stable_through < n.max(2) - 1 {
        return Ok(Maximality::NotAttempted {
            reason: format!("stability is certified only through level {stable_through}"),
        });
    }
    if n == 1 {
        return Ok(Maximality::Level1Quadratic);
    }
    let values = &orbit[..n];
    let outcome = if values[n - 1].is_zero() {
        CriterionOutcome::Fails
    } else {
        match ring {
            Ring::Integers => {
                let ints: Vec<_> = values
                    .iter()
                    .map(|v| v.as_constant().unwrap_or_default())
                    .collect();
                maximality::integer_criterion(&ints, budget)?
            }
            Ring::IntPolynomials => maximality::polynomial_criterion(values)?,
        }
    };
    Ok(match outcome {
        CriterionOutcome::Witness(witness) => Maximality::PrimitiveOddPrime { witness },
        CriterionOutcome::Fails if n == 2 => Maximality::Level2Oracle {
            maximal: checks::oracle_from_orbit(ring, &orbit[0], &orbit[1])?,
        },
        CriterionOutcome::Fails => Maximality::CriterionFails,
    })
}

fn stable_through(stab: &[Stability]) -> usize {
    stab.iter().take_while(|s| s.is_certified()).count()
}

fn assemble(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    orbit: Vec<IntPolynomial>,
    stability: Vec<Stability>,
    maximality: Vec<Maximality>,
    tool: Option<ToolConditions>,
) -> CertificateChain {
    let depth = orbit.len();
    let guarantee = tool
        .as_ref()
        .is_some_and(|t| t.holds() && t.derivative.contains(&coding.index(1)));
    let levels: Vec<LevelCertificate> = orbit
        .into_iter()
        .zip(stability)
        .zip(maximality)
        .enumerate()
        .map(|(i, ((orbit_value, stability), maximality))| {
            let n = i + 1;
            let k = coding.index(n);
            LevelCertificate {
                level: n,
                theta_index: k + 1,
                orbit_value,
                stability,
                maximality,
                tool_guaranteed: guarantee
                    && tool.as_ref().is_some_and(|t| t.leading.contains(&k)),
            }
        })
        .collect();
    let st = levels.iter().take_while(|l| l.stability.is_certified()).count();
    let summary = ChainSummary {
        stable_through: st,
        maximal_levels: levels
            .iter()
            .filter(|l| l.maximality.is_maximal())
            .map(|l| l.level)
            .collect(),
        tool_guarantee: guarantee,
        tool_conditions: tool.map(|t| ToolSummary {
            derivative: t.derivative.iter().map(|i| i + 1).collect(),
            leading: t.leading.iter().map(|i| i + 1).collect(),
        }),
        inconclusive: levels
            .iter()
            .any(|l| matches!(l.stability, Stability::Inconclusive { .. })),
    };
    CertificateChain {
        schema_version: CHAIN_SCHEMA_VERSION,
        ring: set.ring(),
        set: set.render(),
        coding: coding.clone(),
        depth,
        levels,
        summary,
    }
}

fn prepare(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    depth: usize,
) -> Result<(Vec<IntPolynomial>, Option<ToolConditions>)> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    set.critical_constants()?;
    let orbit = critical_orbit(set, coding, depth)?;
    let tool = match set.ring() {
        Ring::IntPolynomials => Some(tool_conditions(set)?),
        Ring::Integers => None,
    };
    Ok((orbit, tool))
}

/// The stability side of [`certify_chain`]; maximality is not attempted.
pub fn stability_certificate(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    depth: usize,
) -> Result<CertificateChain> {
    let opts = CertifyOptions::default();
    let (orbit, tool) = prepare(set, coding, depth)?;
    let stability = stability_levels(set, coding, &orbit, tool.as_ref(), &opts)?;
    let maximality = vec![
        Maximality::NotAttempted {
            reason: "stability only".into()
        };
        depth
    ];
    Ok(assemble(set, coding, orbit, stability, maximality, tool))
}

pub fn certify_chain(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    depth: usize,
) -> Result<CertificateChain> {
    certify_chain_with(set, coding, depth, &CertifyOptions::default())
}

/// Stability, then per-level maximality evaluated in parallel. Levels the
/// tool conditions guarantee are cross-checked against the computed
/// verdict; a disagreement is an internal error.
pub fn certify_chain_with(
    set: &GeneratorSet,
    coding: &SequenceCoding,
    depth: usize,
    opts: &CertifyOptions,
) -> Result<CertificateChain> {
    let (orbit, tool) = prepare(set, coding, depth)?;
    let stability = stability_levels(set, coding, &orbit, tool.as_ref(), opts)?;
    let st = stable_through(&stability);
    let maximality = (1..=depth)
        .into_par_iter()
        .map(|n| maximality_level(set.ring(), &orbit, n, st, &opts.budget))
        .collect::<Result<Vec<_>>>()?;
    let chain = assemble(set, coding, orbit, stability, maximality, tool);
    for l in chain.levels.iter().filter(|l| l.tool_guaranteed) {
        let agrees = match l.level {
            1 => l.maximality == Maximality::Level1Quadratic,
            _ => matches!(l.maximality, Maximality::PrimitiveOddPrime { .. }),
        };
        if !agrees {
            return Err(Error::Consistency(format!(
                "level {} is tool-guaranteed maximal but the criterion gives {:?}",
                l.level, l.maximality
            )));
        }
    }
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::algebra::squarefree_decomposition;

    fn qt(src: &str) -> GeneratorSet {
        GeneratorSet::parse_critical(src, Ring::IntPolynomials).unwrap()
    }

    fn constant() -> SequenceCoding {
        SequenceCoding::constant(0)
    }

    #[test]
    fn stability_examples() {
        let s = GeneratorSet::critical_i64(&[1]).unwrap();
        let c = stability_certificate(&s, &constant(), 4).unwrap();
        assert_eq!(c.summary.stable_through, 4);
        let values: Vec<String> = c
            .levels
            .iter()
            .map(|l| match &l.stability {
                Stability::NonSquare { value } => value.to_string(),
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        assert_eq!(values, ["-1", "2", "5", "26"]);

        let s = GeneratorSet::critical_i64(&[0]).unwrap();
        let c = stability_certificate(&s, &constant(), 3).unwrap();
        assert!(matches!(c.levels[0].stability, Stability::Failed { .. }));
        assert_eq!(c.summary.stable_through, 0);

        let c = stability_certificate(&qt("t"), &constant(), 7).unwrap();
        assert!(c.levels.iter().all(|l| l.stability == Stability::DerivativeTrick));
    }

    #[test]
    fn eisenstein_rescues_a_square_value() {
        // gamma_2 = (x^2+2)^2+5 has gamma_2(0) = 9, yet gamma_2(x+1) is Eisenstein
        let s = GeneratorSet::critical_i64(&[5, 2]).unwrap();
        let c = stability_certificate(&s, &"1|2".parse().unwrap(), 2).unwrap();
        assert_eq!(c.summary.stable_through, 2);
        assert!(matches!(
            c.levels[1].stability,
            Stability::Eisenstein {
                case: EisensteinCase::Shifted,
                ..
            }
        ));
        // x^2 - 9 is reducible, so nothing rescues it
        let s = GeneratorSet::critical_i64(&[-9]).unwrap();
        let c = stability_certificate(&s, &constant(), 1).unwrap();
        assert!(matches!(c.levels[0].stability, Stability::Failed { .. }));
    }

    #[test]
    fn chain_examples() {
        let c = certify_chain(&qt("t"), &constant(), 6).unwrap();
        assert_eq!(c.summary.maximal_levels, vec![1, 2, 3, 4, 5, 6]);
        assert!(c.summary.tool_guarantee);
        assert!(c.levels.iter().all(|l| l.tool_guaranteed));

        let s = qt("t^4+5t; -(7t^4+3)");
        let c = certify_chain(&s, &"1|2".parse().unwrap(), 5).unwrap();
        assert_eq!(c.summary.stable_through, 5);
        assert!(c.summary.tool_guarantee);
        for l in &c.levels {
            assert!(l.tool_guaranteed);
            assert!(l.maximality.is_maximal());
        }

        let s = GeneratorSet::critical_i64(&[-2]).unwrap();
        let c = certify_chain(&s, &constant(), 4).unwrap();
        assert_eq!(c.summary.stable_through, 4);
        assert_eq!(c.levels[2].maximality, Maximality::CriterionFails);
        assert_eq!(c.levels[3].maximality, Maximality::CriterionFails);
        assert!(!c.summary.tool_guarantee);
    }

    #[test]
    fn chain_over_integers() {
        let s = GeneratorSet::critical_i64(&[1]).unwrap();
        let c = certify_chain(&s, &constant(), 5).unwrap();
        assert_eq!(c.levels[0].maximality, Maximality::Level1Quadratic);
        // gamma_2(0) = 2 has no odd prime, so the exact level-2 test decides
        assert_eq!(c.levels[1].maximality, Maximality::Level2Oracle { maximal: true });
        assert_eq!(c.summary.maximal_levels, vec![1, 2, 3, 4, 5]);
        assert!(c.summary.tool_conditions.is_none());
    }

    #[test]
    fn unstable_levels_skip_maximality() {
        let s = GeneratorSet::critical_i64(&[0]).unwrap();
        let c = certify_chain(&s, &constant(), 3).unwrap();
        assert!(c
            .levels
            .iter()
            .all(|l| matches!(l.maximality, Maximality::NotAttempted { .. })));
        assert!(certify_chain(&s, &constant(), 0).is_err());
    }

    #[test]
    fn chain_serializes_with_stable_names() {
        let s = GeneratorSet::critical_i64(&[1]).unwrap();
        let c = certify_chain(&s, &constant(), 3).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["ring"], "integers");
        assert_eq!(v["coding"], "|1");
        assert_eq!(v["levels"][2]["maximality"]["kind"], "primitive_odd_prime");
        assert_eq!(v["levels"][2]["maximality"]["witness"]["p"], "5");
        assert_eq!(v["levels"][0]["stability"]["value"], "-1");
    }

    fn small_poly() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-4i64..=4, 1..=5).prop_map(|v| IntPolynomial::from_i64s(&v))
    }

    fn qt_set() -> impl Strategy<Value = GeneratorSet> {
        prop::collection::vec(small_poly(), 1..=3).prop_filter_map("distinct", |cs| {
            GeneratorSet::critical(cs, Ring::IntPolynomials).ok()
        })
    }

    fn coding(len: usize) -> impl Strategy<Value = SequenceCoding> {
        (
            prop::collection::vec(0..len, 0..3),
            prop::collection::vec(0..len, 1..3),
        )
            .prop_map(|(p, c)| SequenceCoding::new(p, c).unwrap())
    }

    fn with_coding(set: impl Strategy<Value = GeneratorSet>) -> impl Strategy<Value = (GeneratorSet, SequenceCoding)> {
        set.prop_flat_map(|s| {
            let n = s.len();
            (Just(s), coding(n))
        })
    }

    fn int_set() -> impl Strategy<Value = GeneratorSet> {
        prop::collection::vec(-12i64..=12, 1..=3)
            .prop_filter_map("distinct", |cs| GeneratorSet::critical_i64(&cs).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        // a witness at level 2 implies the exact test says maximal
        #[test]
        fn witness_implies_oracle((s, c) in prop_oneof![with_coding(int_set()), with_coding(qt_set())]) {
            let orbit = critical_orbit(&s, &c, 2).unwrap();
            let m = -&orbit[0];
            prop_assume!(!m.is_zero() && !value_is_square(s.ring(), &m) && !orbit[1].is_zero());
            let ring = s.ring();
            let witness = match ring {
                Ring::Integers => maximality_by_primitive_odd_prime(&s, &c, 2, &FactorBudget::default()).unwrap(),
                Ring::IntPolynomials => maximality_qt(&s, &c, 2).unwrap(),
            };
            if let Some(w) = witness.witness() {
                prop_assert!(verify_witness(&orbit, w));
                prop_assert!(level2_oracle(&s, &c).unwrap());
            }
        }

        // tool conditions force gamma_n(0) square-free
        #[test]
        fn tool_levels_are_squarefree((s, c) in with_coding(qt_set()), n in 1usize..=5) {
            let t = tool_conditions(&s).unwrap();
            prop_assume!(t.derivative.contains(&c.index(1)) && t.leading.contains(&c.index(n)));
            let orbit = critical_orbit(&s, &c, n).unwrap();
            let f = RatPolynomial::from(orbit[n - 1].clone());
            prop_assert!(f.gcd(&f.derivative()).is_constant());
        }

        #[test]
        fn chains_are_consistent((s, c) in with_coding(qt_set()), depth in 1usize..=4) {
            let chain = certify_chain(&s, &c, depth).unwrap();
            prop_assert_eq!(chain.levels.len(), depth);
            for l in &chain.levels {
                if let Maximality::PrimitiveOddPrime { witness } = &l.maximality {
                    let orbit = critical_orbit(&s, &c, l.level).unwrap();
                    prop_assert!(verify_witness(&orbit, witness));
                }
            }
        }

        // z^2 + c is square-free when c' = 1 mod 2 and the leading coefficient is odd
        #[test]
        fn derivative_trick_squarefree(z in small_poly(), c in small_poly()) {
            prop_assume!(crate::algebra::reduce_mod2(&c).derivative().is_one());
            let f = &z.square() + &c;
            prop_assume!(f.leading_coefficient().is_some_and(num_integer::Integer::is_odd));
            let dec = squarefree_decomposition(&RatPolynomial::from(f)).unwrap();
            prop_assert!(dec.factors.iter().all(|(_, e)| *e == 1));
        }
    }
}
