//! Generator sets, sequence codings, orbits, finite orbit points and the
//! exceptional-set classifier.

mod classify;
mod coding;
mod lemmas;
mod orbit;
mod set;

pub use classify::{
    classify_finite_orbit_obstruction, classify_set, pair_family_matches, pair_family_membership,
    Classification, PairFamily,
};
pub use coding::SequenceCoding;
pub use lemmas::{
    eisenstein_stability, is_eisenstein_at_2, valuation_lemma_check, EisensteinCase,
    EisensteinOutcome,
};
pub(crate) use lemmas::eisenstein_on;
pub use orbit::{
    canonical_cmp, critical_orbit, escape_criterion, gamma_polynomial,
    orbit_contains_finite_orbit_point, orbit_from, semigroup_orbit, FiniteOrbitVerdict,
    OrbitCaps, OrbitStatus,
};
pub(crate) use orbit::escape_height;
pub use set::{GeneratorSet, Map, Ring};
