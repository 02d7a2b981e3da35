//! Randomized cross-validation of the whole identity battery over the
//! named root data.  Each trial draws a structured inertial character
//! datum — a cyclic group with a wild part at the smallest allowed
//! residue characteristic and a tame part of coprime order — and runs
//! every registered identity on it, accumulating pass/fail/skip counts
//! and the first counterexample per check.  The sweep is deterministic
//! in its seed, and the parallel runner is required to produce the same
//! summary as the sequential one.

use crate::blocks::{chain_check, BlockData, EnhancementOverrides};
use crate::centralizers::{centralizer_root_indices, discrete_component_group, torus_subset_pi0};
use crate::parameters::{principal_cocharacter, Parameter};
use crate::ramification::{
    conductors, filtration_function, stabilizer_decomposition, unramified_subsystem,
    ConductorData, FiltrationFunction, InertialDatum, StabilizerSplit, Subsystem, TorsionPoint,
};
use crate::rootdata::condition::{classify, condition_report, smallest_allowed_prime, Component};
use crate::rootdata::named::{named_datum, Lattice};
use crate::rootdata::weyl::WeylGroup;
use crate::rootdata::BasedRootDatum;
use crate::scalars::{rational_pow, Monomial, Rational, Scalar, TorsionValue};
use crate::volumes::volume_report;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

/// Default Weyl enumeration cap for the sweep.  Larger than the
/// per-block default because a rank-8 run needs the 362880-element
/// symmetric group (which costs roughly half a gigabyte to tabulate).
pub const DEFAULT_SUITE_WEYL_LIMIT: usize = 400_000;

/// Which character lattice to take for each named type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeChoice {
    SimplyConnected,
    Adjoint,
}

impl LatticeChoice {
    pub fn as_lattice(self) -> Lattice {
        match self {
            LatticeChoice::SimplyConnected => Lattice::SimplyConnected,
            LatticeChoice::Adjoint => Lattice::Adjoint,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            LatticeChoice::SimplyConnected => "sc",
            LatticeChoice::Adjoint => "ad",
        }
    }
}

impl FromStr for LatticeChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "sc" => Ok(LatticeChoice::SimplyConnected),
            "ad" => Ok(LatticeChoice::Adjoint),
            other => Err(format!("unknown lattice {other:?}; expected \"sc\" or \"ad\"")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Named types up to this rank enter the sweep (capped at 8).
    pub max_rank: usize,
    pub lattices: Vec<LatticeChoice>,
    /// Trials per datum.  Zero means an empty summary.
    pub trials: usize,
    pub seed: u64,
    pub weyl_limit: usize,
}

impl SuiteOptions {
    pub fn new(max_rank: usize, lattices: Vec<LatticeChoice>, trials: usize, seed: u64) -> Self {
        SuiteOptions {
            max_rank,
            lattices,
            trials,
            seed,
            weyl_limit: DEFAULT_SUITE_WEYL_LIMIT,
        }
    }
}

/// The registered identities.  The declaration order is the report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckId {
    /// Enumerated Weyl order against the classical count for the type.
    WeylOrder,
    /// Rebuilding the datum from its explicit root lists preserves the
    /// classification, the root count, and the centre invariants.
    RebuildInvariance,
    /// Duality swaps types B and C and leaves the rest alone.
    DualClassification,
    /// Iwahori volume ratio equals the modulus of the ramified root number.
    VolumeRatio,
    /// Filtration values on a root and its negative sum to the conductor.
    FiltrationPairSum,
    /// The floored filtration profile is concave.
    FiltrationConcavity,
    /// The capped-rule divergence list is exactly the high-conductor
    /// negative roots.
    DisplayedShortcut,
    /// The unramified subsystem sits on the conductor-zero roots and
    /// classifies as a genuine type.
    SubsystemStructure,
    /// The character stabilizer factors as subsystem reflections times
    /// the diagram part.
    StabilizerFactorization,
    /// The diagram part is abelian.
    DiagramAbelian,
    /// With a connected centre and a cyclic inertial image the diagram
    /// part is trivial.
    ConnectedCenter,
    /// The dual-side centralizer subsystem and component count agree
    /// with the conductor-side computation.
    DualIdentification,
    /// The adjoint gamma modulus factors through the unramified
    /// subsystem up to the ramified root number.
    GammaFactorization,
    /// The component-group order factors through the subsystem times the
    /// diagram part.
    ComponentFactorization,
    /// The four-clause identity chain on the assembled block.
    IdentityChain,
    /// Fixed demonstration: a wild character at an excluded prime breaks
    /// concavity, and the condition report says so.
    BadPrimeSharpness,
    /// Fixed demonstration: a noncyclic two-torsion image has a
    /// nontrivial diagram part despite a connected centre.
    NoncyclicSharpness,
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CheckId::WeylOrder => "Weyl order matches the classical count",
            CheckId::RebuildInvariance => "rebuild from explicit root lists",
            CheckId::DualClassification => "classification swaps B and C under duality",
            CheckId::VolumeRatio => "volume ratio equals the root-number modulus",
            CheckId::FiltrationPairSum => "filtration pair sums equal conductors",
            CheckId::FiltrationConcavity => "floored filtration profile is concave",
            CheckId::DisplayedShortcut => "capped-rule divergences are tracked",
            CheckId::SubsystemStructure => "unramified subsystem structure",
            CheckId::StabilizerFactorization => "stabilizer factorization",
            CheckId::DiagramAbelian => "diagram part is abelian",
            CheckId::ConnectedCenter => "connected centre forces a trivial diagram part",
            CheckId::DualIdentification => "dual-side centralizer identification",
            CheckId::GammaFactorization => "gamma modulus factors through the subsystem",
            CheckId::ComponentFactorization => "component order factors through the subsystem",
            CheckId::IdentityChain => "assembled identity chain",
            CheckId::BadPrimeSharpness => "excluded prime breaks concavity",
            CheckId::NoncyclicSharpness => "noncyclic image defeats the connectedness bound",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    pub passes: u64,
    pub failures: u64,
    pub skips: u64,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: usize,
    pub datum_labels: Vec<String>,
    pub stats: BTreeMap<CheckId, CheckStats>,
}

impl SuiteSummary {
    pub fn has_failures(&self) -> bool {
        self.stats.values().any(|s| s.failures > 0)
    }

    /// Total `(passes, failures, skips)` over all checks.
    pub fn totals(&self) -> (u64, u64, u64) {
        self.stats.values().fold((0, 0, 0), |(p, f, s), c| {
            (p + c.passes, f + c.failures, s + c.skips)
        })
    }

    /// A fixed-layout text report.  Identical inputs produce identical
    /// strings, so two runs with the same seed can be compared bytewise.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.stats.is_empty() {
            let _ = writeln!(out, "identity sweep: no trials requested");
            return out;
        }
        let _ = writeln!(
            out,
            "identity sweep: {} data, {} trials each, seed {}",
            self.datum_labels.len(),
            self.trials,
            self.seed
        );
        let width = self
            .stats
            .keys()
            .map(|id| id.to_string().len())
            .max()
            .unwrap_or(0);
        let _ = writeln!(out, "  {:width$}   pass   fail   skip", "check");
        for (id, stats) in &self.stats {
            let _ = writeln!(
                out,
                "  {:width$}  {:5}  {:5}  {:5}",
                id.to_string(),
                stats.passes,
                stats.failures,
                stats.skips
            );
        }
        let failed: Vec<_> = self
            .stats
            .iter()
            .filter(|(_, s)| s.failures > 0)
            .collect();
        if failed.is_empty() {
            let _ = writeln!(out, "all checks passed");
        } else {
            let _ = writeln!(out, "first counterexamples:");
            for (id, stats) in failed {
                if let Some(msg) = &stats.first_failure {
                    let _ = writeln!(out, "  {id}: {msg}");
                }
            }
        }
        out
    }
}

enum Outcome {
    Pass,
    Skip,
    Fail(String),
}

impl Outcome {
    fn of(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail(detail())
        }
    }
}

type TrialRecord = Vec<(CheckId, Outcome)>;

struct DatumContext {
    /// Position in the generated datum list; part of the trial seed, so
    /// a datum whose setup fails does not shift its neighbours' draws.
    index: usize,
    label: String,
    datum: BasedRootDatum,
    weyl: WeylGroup,
    prime: u64,
    /// Tame orders coprime to the structural prime, drawn uniformly.
    tame_orders: Vec<i64>,
}

struct Prepared {
    contexts: Vec<DatumContext>,
    labels: Vec<String>,
    setup: Vec<(String, CheckId, Outcome)>,
}

fn type_labels(max_rank: usize) -> Vec<String> {
    let max = max_rank.min(8);
    let mut labels: Vec<String> = (1..=max).map(|n| format!("A{n}")).collect();
    for n in 2..=max.min(4) {
        labels.push(format!("B{n}"));
    }
    for n in 2..=max.min(4) {
        labels.push(format!("C{n}"));
    }
    if max >= 4 {
        labels.push("D4".into());
    }
    if max >= 2 {
        labels.push("G2".into());
    }
    if max >= 4 {
        labels.push("F4".into());
    }
    labels
}

/// The (type, lattice) pairs of the sweep.  G2 and F4 are self-dual with
/// both lattices equal, so only the first requested lattice is kept for
/// them.
fn sweep_data(options: &SuiteOptions) -> Vec<(String, LatticeChoice)> {
    let mut lattices: Vec<LatticeChoice> = Vec::new();
    for &l in &options.lattices {
        if !lattices.contains(&l) {
            lattices.push(l);
        }
    }
    let mut out = Vec::new();
    for label in type_labels(options.max_rank) {
        let self_dual = label == "G2" || label == "F4";
        for (k, &lat) in lattices.iter().enumerate() {
            if self_dual && k > 0 {
                break;
            }
            out.push((label.clone(), lat));
        }
    }
    out
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn classical_weyl_order(components: &[Component]) -> Result<u64, String> {
    let mut order: u64 = 1;
    for c in components {
        let factor = match c.kind {
            'A' => factorial(c.rank as u64 + 1),
            'B' | 'C' => (1u64 << c.rank) * factorial(c.rank as u64),
            'D' => (1u64 << (c.rank - 1)) * factorial(c.rank as u64),
            'G' => 12,
            'F' => 1152,
            kind => return Err(format!("no classical Weyl order tabulated for type {kind}")),
        };
        order *= factor;
    }
    Ok(order)
}

/// Expected classification label of the dual component: B and C swap
/// from rank three on; everything else (including the ambiguous rank-two
/// case, which classifies as B2 either way) is unchanged.
fn dual_component_label(c: &Component) -> String {
    match c.kind {
        'B' if c.rank >= 3 => format!("C{}", c.rank),
        'C' if c.rank >= 3 => format!("B{}", c.rank),
        _ => c.label.clone(),
    }
}

fn rebuild_outcome(datum: &BasedRootDatum) -> Outcome {
    let rebuilt =
        match BasedRootDatum::from_explicit(datum.roots().to_vec(), datum.coroots().to_vec()) {
            Ok(d) => d,
            Err(e) => return Outcome::Fail(format!("rebuild failed: {e}")),
        };
    let original = match classify(datum) {
        Ok(c) => c.label(),
        Err(e) => return Outcome::Fail(format!("classification failed: {e}")),
    };
    let again = match classify(&rebuilt) {
        Ok(c) => c.label(),
        Err(e) => return Outcome::Fail(format!("rebuilt classification failed: {e}")),
    };
    Outcome::of(
        original == again
            && rebuilt.num_roots() == datum.num_roots()
            && rebuilt.semisimple_rank() == datum.semisimple_rank()
            && rebuilt.center_is_connected() == datum.center_is_connected(),
        || format!("rebuild changed {original} into {again}"),
    )
}

fn duality_outcome(datum: &BasedRootDatum) -> Outcome {
    let dual = datum.dual();
    if dual.roots() != datum.coroots() || dual.coroots() != datum.roots() {
        return Outcome::Fail("dual does not swap the two root lists".into());
    }
    let (original, dualized) = match (classify(datum), classify(&dual)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            return Outcome::Fail(format!("classification failed: {e}"))
        }
    };
    let mut expected: Vec<String> = original.components.iter().map(dual_component_label).collect();
    let mut actual: Vec<String> = dualized.components.iter().map(|c| c.label.clone()).collect();
    expected.sort();
    actual.sort();
    Outcome::of(expected == actual, || {
        format!("expected dual components {expected:?}, classified {actual:?}")
    })
}

fn prepare(options: &SuiteOptions) -> Prepared {
    let mut contexts = Vec::new();
    let mut labels = Vec::new();
    let mut setup = Vec::new();
    for (index, (type_label, lat)) in sweep_data(options).into_iter().enumerate() {
        let label = format!("{type_label}-{}", lat.tag());
        labels.push(label.clone());
        let datum = named_datum(&type_label, &lat.as_lattice())
            .expect("the sweep only emits labels the named table covers");
        let prime = smallest_allowed_prime(&datum)
            .expect("named data classify, so they have a smallest allowed prime");

        let weyl_outcome = match classify(&datum) {
            Err(e) => Outcome::Fail(format!("classification failed: {e}")),
            Ok(cls) => match classical_weyl_order(&cls.components) {
                Err(e) => Outcome::Fail(e),
                Ok(expected) => match WeylGroup::enumerate(&datum, options.weyl_limit) {
                    Err(e) => Outcome::Fail(format!("enumeration failed: {e}")),
                    Ok(weyl) => {
                        let outcome = Outcome::of(weyl.order() as u64 == expected, || {
                            format!("enumerated order {}, classical order {expected}", weyl.order())
                        });
                        setup.push((label.clone(), CheckId::RebuildInvariance, rebuild_outcome(&datum)));
                        setup.push((label.clone(), CheckId::DualClassification, duality_outcome(&datum)));
                        let tame_orders: Vec<i64> = [1, 2, 3, 4, 6]
                            .into_iter()
                            .filter(|m| m % (prime as i64) != 0)
                            .collect();
                        contexts.push(DatumContext {
                            index,
                            label: label.clone(),
                            datum,
                            weyl,
                            prime,
                            tame_orders,
                        });
                        outcome
                    }
                },
            },
        };
        setup.push((label, CheckId::WeylOrder, weyl_outcome));
    }
    Prepared { contexts, labels, setup }
}

fn trial_seed(seed: u64, datum_index: usize, trial: usize) -> [u8; 32] {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&(datum_index as u64).to_le_bytes());
    bytes[16..24].copy_from_slice(&(trial as u64).to_le_bytes());
    bytes[24..].copy_from_slice(b"sweep/v1");
    bytes
}

/// Residue cardinalities cycled over the trials: small primes, a prime
/// power (whose square root collapses to an integer), and a proper
/// fraction to keep the identities honest about staying polynomial in q.
fn q_for_trial(trial: usize) -> Rational {
    const Q: [(i64, i64); 5] = [(2, 1), (3, 1), (4, 1), (5, 2), (7, 1)];
    let (n, d) = Q[trial % Q.len()];
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// One structured inertial datum: a single generator `wild + tame` with
/// the wild part of order dividing `p^depth` and the tame part of order
/// coprime to `p`, plus the wild filtration levels underneath it.  The
/// image is cyclic because the two orders are coprime.
fn draw_inertial(ctx: &DatumContext, rng: &mut ChaCha8Rng) -> InertialDatum {
    let rank = ctx.datum.rank();
    let p = ctx.prime as i64;
    let depth: u32 = rng.gen_range(0..=3);
    let wild_mod = p.pow(depth);
    let wild: TorsionPoint = (0..rank)
        .map(|_| TorsionValue::of(rng.gen_range(0..wild_mod), wild_mod))
        .collect();
    let tame_mod = ctx.tame_orders[rng.gen_range(0..ctx.tame_orders.len())];
    let tame: TorsionPoint = (0..rank)
        .map(|_| TorsionValue::of(rng.gen_range(0..tame_mod), tame_mod))
        .collect();
    let generator: TorsionPoint = wild.iter().zip(&tame).map(|(a, b)| a.add(b)).collect();
    let mut levels = vec![vec![generator]];
    for j in 1..=depth {
        levels.push(vec![wild
            .iter()
            .map(|a| a.scaled(p.pow(j - 1)))
            .collect()]);
    }
    InertialDatum::new(rank, levels).expect("structured levels are nested by construction")
}

fn filtration_pair_sum(
    datum: &BasedRootDatum,
    cond: &ConductorData,
    filt: &FiltrationFunction,
) -> Outcome {
    for i in 0..datum.num_roots() {
        let neg = datum.negation(i);
        if filt.values[i] + filt.values[neg] != cond.values[i] as i64 {
            return Outcome::Fail(format!(
                "root {:?}: {} + {} against conductor {}",
                datum.root(i),
                filt.values[i],
                filt.values[neg],
                cond.values[i]
            ));
        }
    }
    Outcome::Pass
}

/// First failure of `profile(a + b) <= profile(a) + profile(b)` over
/// pairs of roots whose sum is again a root.
fn concavity_violation(datum: &BasedRootDatum, profile: &[i64]) -> Option<(usize, usize, usize)> {
    for i in 0..datum.num_roots() {
        for j in 0..datum.num_roots() {
            let sum: Vec<i64> = datum
                .root(i)
                .iter()
                .zip(datum.root(j))
                .map(|(a, b)| a + b)
                .collect();
            if let Some(k) = datum.index_of_root(&sum) {
                if profile[k] > profile[i] + profile[j] {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// The filtration with its negative values floored at the Iwahori depth:
/// the profile of the actual compact open subgroup, whose negative root
/// groups never exceed depth-zero anyway.
fn floored_profile(datum: &BasedRootDatum, filt: &FiltrationFunction) -> Vec<i64> {
    (0..datum.num_roots())
        .map(|i| {
            if datum.is_positive(i) {
                filt.values[i]
            } else {
                filt.values[i].max(1)
            }
        })
        .collect()
}

fn filtration_concavity(datum: &BasedRootDatum, filt: &FiltrationFunction) -> Outcome {
    let profile = floored_profile(datum, filt);
    match concavity_violation(datum, &profile) {
        None => Outcome::Pass,
        Some((i, j, k)) => Outcome::Fail(format!(
            "{:?} + {:?}: profile {} over {} + {}",
            datum.root(i),
            datum.root(j),
            profile[k],
            profile[i],
            profile[j]
        )),
    }
}

fn displayed_shortcut(
    datum: &BasedRootDatum,
    cond: &ConductorData,
    filt: &FiltrationFunction,
) -> Outcome {
    let expected: Vec<usize> = (0..datum.num_roots())
        .filter(|&i| !datum.is_positive(i) && cond.values[i] >= 3)
        .collect();
    Outcome::of(filt.displayed_rule_divergences == expected, || {
        format!(
            "tracked {:?}, expected the high-conductor negatives {:?}",
            filt.displayed_rule_divergences, expected
        )
    })
}

fn subsystem_structure(
    cond: &ConductorData,
    sub: &Result<Option<Subsystem>, crate::ramification::RamificationError>,
) -> Outcome {
    let unramified = cond.unramified_indices();
    match sub {
        Err(e) => Outcome::Fail(format!("construction failed: {e}")),
        Ok(None) => Outcome::of(unramified.is_empty(), || {
            format!("no subsystem despite {} unramified roots", unramified.len())
        }),
        Ok(Some(s)) => {
            if s.parent_indices != unramified {
                return Outcome::Fail(format!(
                    "subsystem sits on {:?}, conductors vanish on {unramified:?}",
                    s.parent_indices
                ));
            }
            if s.datum.num_roots() != unramified.len() {
                return Outcome::Fail(format!(
                    "{} subsystem roots against {} unramified indices",
                    s.datum.num_roots(),
                    unramified.len()
                ));
            }
            match classify(&s.datum) {
                Ok(_) => Outcome::Pass,
                Err(e) => Outcome::Fail(format!("subsystem does not classify: {e}")),
            }
        }
    }
}

fn stabilizer_outcomes(
    ctx: &DatumContext,
    inertial: &InertialDatum,
    sub: Option<&Subsystem>,
    weyl_limit: usize,
) -> (Outcome, Option<StabilizerSplit>) {
    let split = match stabilizer_decomposition(&ctx.datum, &ctx.weyl, inertial, sub) {
        Ok(split) => split,
        Err(e) => return (Outcome::Fail(format!("decomposition failed: {e}")), None),
    };
    if split.reflection_part.len() * split.diagram_part.len() != split.stabilizer.len() {
        let detail = format!(
            "{} x {} != {}",
            split.reflection_part.len(),
            split.diagram_part.len(),
            split.stabilizer.len()
        );
        return (Outcome::Fail(detail), Some(split));
    }
    // The reflection part must be the subsystem's own Weyl group.  When
    // the subsystem is everything, its group is already enumerated.
    let expected = match sub {
        None => 1,
        Some(s) if s.datum.num_roots() == ctx.datum.num_roots() => ctx.weyl.order(),
        Some(s) => match WeylGroup::enumerate(&s.datum, weyl_limit) {
            Ok(w) => w.order(),
            Err(e) => {
                return (
                    Outcome::Fail(format!("subsystem enumeration failed: {e}")),
                    Some(split),
                )
            }
        },
    };
    let outcome = Outcome::of(split.reflection_part.len() == expected, || {
        format!(
            "reflection part has order {}, subsystem Weyl group {expected}",
            split.reflection_part.len()
        )
    });
    (outcome, Some(split))
}

fn diagram_abelian(ctx: &DatumContext, split: &StabilizerSplit) -> Outcome {
    for &a in &split.diagram_part {
        for &b in &split.diagram_part {
            if ctx.weyl.multiply(a, b) != ctx.weyl.multiply(b, a) {
                return Outcome::Fail(format!("elements {a} and {b} do not commute"));
            }
        }
    }
    Outcome::Pass
}

fn dual_identification(
    ctx: &DatumContext,
    inertial: &InertialDatum,
    cond: &ConductorData,
    split: Option<&StabilizerSplit>,
) -> Outcome {
    let gens = inertial.generators();
    let indices = centralizer_root_indices(&ctx.datum, gens, &[]);
    if indices != cond.unramified_indices() {
        return Outcome::Fail(format!(
            "centralizer roots {indices:?} against conductor-zero roots {:?}",
            cond.unramified_indices()
        ));
    }
    let Some(split) = split else {
        return Outcome::Skip;
    };
    let pi0 = torus_subset_pi0(&ctx.datum, &ctx.weyl, gens, &[]);
    Outcome::of(pi0.weyl_reps.len() == split.diagram_part.len(), || {
        format!(
            "dual-side component count {}, diagram part {}",
            pi0.weyl_reps.len(),
            split.diagram_part.len()
        )
    })
}

fn gamma_factorization(
    ctx: &DatumContext,
    inertial: &InertialDatum,
    cond: &ConductorData,
    sub: &Subsystem,
    q: &Rational,
) -> Outcome {
    let rank = ctx.datum.rank();
    let s = vec![Monomial::one(); rank];
    let h = principal_cocharacter(&sub.datum);
    let full = Parameter::new(
        ctx.datum.clone(),
        inertial.clone(),
        s.clone(),
        h.clone(),
        q.clone(),
    );
    let partner = Parameter::new(
        sub.datum.clone(),
        InertialDatum::unramified(rank),
        s,
        h,
        q.clone(),
    );
    let (full, partner) = match (full, partner) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::Fail(format!("construction failed: {e}")),
    };
    if !full.is_discrete() {
        return Outcome::Fail("principal arc of a full-rank subsystem is not discrete".into());
    }
    if full.strands() != partner.strands() {
        return Outcome::Fail(format!(
            "strings {:?} against {:?}",
            full.strands(),
            partner.strands()
        ));
    }
    let (gamma_full, gamma_sub) = match (full.gamma_abs_sq(), partner.gamma_abs_sq()) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::Fail(format!("gamma evaluation failed: {e}")),
    };
    let artin_power = Scalar::from_rational(
        rational_pow(q, cond.artin_exponent() as i64),
        q.clone(),
    );
    Outcome::of(gamma_full == gamma_sub.mul(&artin_power), || {
        format!(
            "|gamma|^2 = {gamma_full} is not q^{} times {gamma_sub}",
            cond.artin_exponent()
        )
    })
}

fn component_factorization(
    ctx: &DatumContext,
    inertial: &InertialDatum,
    sub: &Subsystem,
    split: &StabilizerSplit,
    weyl_limit: usize,
) -> Outcome {
    let s = vec![Monomial::one(); ctx.datum.rank()];
    let full = discrete_component_group(&ctx.datum, weyl_limit, inertial.generators(), &s);
    let part = discrete_component_group(&sub.datum, weyl_limit, &[], &s);
    let (full, part) = match (full, part) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::Fail(format!("computation failed: {e}")),
    };
    if !full.description.is_finite() || !part.description.is_finite() {
        return Outcome::Fail("component group is not finite".into());
    }
    let diagram = split.diagram_part.len() as i64;
    Outcome::of(full.order() == part.order() * diagram, || {
        format!(
            "{} against {} x {diagram}",
            full.order(),
            part.order()
        )
    })
}

fn identity_chain(ctx: &DatumContext, inertial: &InertialDatum, q: &Rational, weyl_limit: usize) -> Outcome {
    let block = BlockData {
        datum: ctx.datum.clone(),
        inertial: inertial.clone(),
        q: q.clone(),
        p: Some(ctx.prime),
        parameter: None,
        overrides: EnhancementOverrides::default(),
        weyl_limit,
    };
    match chain_check(&block) {
        Ok(_) => Outcome::Pass,
        Err(e) => Outcome::Fail(format!("{e}")),
    }
}

fn run_trial(ctx: &DatumContext, trial: usize, options: &SuiteOptions) -> TrialRecord {
    let mut rng = ChaCha8Rng::from_seed(trial_seed(options.seed, ctx.index, trial));
    let inertial = draw_inertial(ctx, &mut rng);
    let q = q_for_trial(trial);
    let datum = &ctx.datum;

    let cond = conductors(datum, &inertial);
    let filt = filtration_function(datum, &cond);
    let sub_result = unramified_subsystem(datum, &cond);
    let sub = sub_result.as_ref().ok().and_then(|o| o.as_ref());

    let mut record: TrialRecord = Vec::with_capacity(12);
    record.push((
        CheckId::VolumeRatio,
        match volume_report(datum, sub, &cond, &filt) {
            Ok(v) => Outcome::of(v.ratio_matches_epsilon(), || {
                format!("ratio {} against modulus {}", v.ratio, v.epsilon_abs)
            }),
            Err(e) => Outcome::Fail(format!("report failed: {e}")),
        },
    ));
    record.push((CheckId::FiltrationPairSum, filtration_pair_sum(datum, &cond, &filt)));
    record.push((CheckId::FiltrationConcavity, filtration_concavity(datum, &filt)));
    record.push((CheckId::DisplayedShortcut, displayed_shortcut(datum, &cond, &filt)));
    record.push((
        CheckId::SubsystemStructure,
        subsystem_structure(&cond, &sub_result),
    ));

    let (stab_outcome, split) = stabilizer_outcomes(ctx, &inertial, sub, options.weyl_limit);
    record.push((CheckId::StabilizerFactorization, stab_outcome));
    record.push((
        CheckId::DiagramAbelian,
        match &split {
            Some(split) => diagram_abelian(ctx, split),
            None => Outcome::Skip,
        },
    ));
    record.push((
        CheckId::ConnectedCenter,
        match &split {
            Some(split) if datum.center_is_connected() => {
                Outcome::of(split.diagram_part.len() == 1, || {
                    format!("diagram part has order {}", split.diagram_part.len())
                })
            }
            _ => Outcome::Skip,
        },
    ));
    record.push((
        CheckId::DualIdentification,
        dual_identification(ctx, &inertial, &cond, split.as_ref()),
    ));

    let full_rank = sub
        .map(|s| s.datum.semisimple_rank() == datum.semisimple_rank())
        .unwrap_or(false);
    record.push((
        CheckId::GammaFactorization,
        match sub {
            Some(s) if full_rank => gamma_factorization(ctx, &inertial, &cond, s, &q),
            _ => Outcome::Skip,
        },
    ));
    record.push((
        CheckId::ComponentFactorization,
        match (sub, &split) {
            (Some(s), Some(split)) if full_rank => {
                component_factorization(ctx, &inertial, s, split, options.weyl_limit)
            }
            _ => Outcome::Skip,
        },
    ));
    record.push((
        CheckId::IdentityChain,
        identity_chain(ctx, &inertial, &q, options.weyl_limit),
    ));
    record
}

/// A wild depth-one character of the rank-two exceptional type at its
/// excluded prime 3: the conductors come out as (0, 0, 2) on a chain
/// alpha, alpha + beta, 2 alpha + beta of short positive roots (in the
/// subsystem's own indexing), and the floored profile jumps by two where
/// concavity allows at most zero.  The condition report refuses the
/// prime, which is the point: the concavity the sweep relies on is a
/// consequence of the allowed-prime hypothesis, not a general fact.
fn bad_prime_demonstration() -> Outcome {
    let datum = match named_datum("G2", &Lattice::SimplyConnected) {
        Ok(d) => d,
        Err(e) => return Outcome::Fail(format!("datum construction failed: {e}")),
    };
    let wild: TorsionPoint = vec![TorsionValue::zero(), TorsionValue::of(1, 3)];
    let inertial = match InertialDatum::new(2, vec![vec![wild.clone()], vec![wild]]) {
        Ok(i) => i,
        Err(e) => return Outcome::Fail(format!("inertial construction failed: {e}")),
    };
    let cond = conductors(&datum, &inertial);
    let filt = filtration_function(&datum, &cond);
    let profile = floored_profile(&datum, &filt);
    if concavity_violation(&datum, &profile).is_none() {
        return Outcome::Fail("expected a concavity failure at the excluded prime".into());
    }
    match condition_report(&datum, Some(3)) {
        Ok(report) => Outcome::of(report.satisfied == Some(false), || {
            "the condition report accepted the excluded prime".into()
        }),
        Err(e) => Outcome::Fail(format!("condition report failed: {e}")),
    }
}

/// The full two-torsion of the rank-two exceptional torus: two
/// independent involutions.  Every root is ramified, so the reflection
/// part is trivial, yet the negation element survives in the stabilizer
/// and the diagram part has order two — with a connected centre.  This
/// is why the connectedness bound in the sweep insists on a cyclic
/// image.
fn noncyclic_demonstration(weyl_limit: usize) -> Outcome {
    let datum = match named_datum("G2", &Lattice::SimplyConnected) {
        Ok(d) => d,
        Err(e) => return Outcome::Fail(format!("datum construction failed: {e}")),
    };
    if !datum.center_is_connected() {
        return Outcome::Fail("expected a connected centre".into());
    }
    let gens = vec![
        vec![TorsionValue::of(1, 2), TorsionValue::zero()],
        vec![TorsionValue::zero(), TorsionValue::of(1, 2)],
    ];
    let inertial = match InertialDatum::new(2, vec![gens]) {
        Ok(i) => i,
        Err(e) => return Outcome::Fail(format!("inertial construction failed: {e}")),
    };
    let cond = conductors(&datum, &inertial);
    if !cond.unramified_indices().is_empty() {
        return Outcome::Fail("expected every root to be ramified".into());
    }
    let weyl = match WeylGroup::enumerate(&datum, weyl_limit) {
        Ok(w) => w,
        Err(e) => return Outcome::Fail(format!("enumeration failed: {e}")),
    };
    match stabilizer_decomposition(&datum, &weyl, &inertial, None) {
        Ok(split) => Outcome::of(split.diagram_part.len() == 2, || {
            format!("diagram part has order {}", split.diagram_part.len())
        }),
        Err(e) => Outcome::Fail(format!("decomposition failed: {e}")),
    }
}

fn merge(summary: &mut SuiteSummary, origin: &str, id: CheckId, outcome: &Outcome) {
    let stats = summary.stats.entry(id).or_default();
    match outcome {
        Outcome::Pass => stats.passes += 1,
        Outcome::Skip => stats.skips += 1,
        Outcome::Fail(msg) => {
            stats.failures += 1;
            if stats.first_failure.is_none() {
                stats.first_failure = Some(format!("{origin}: {msg}"));
            }
        }
    }
}

fn empty_summary(options: &SuiteOptions) -> SuiteSummary {
    SuiteSummary {
        seed: options.seed,
        trials: options.trials,
        datum_labels: Vec::new(),
        stats: BTreeMap::new(),
    }
}

fn finish(
    mut summary: SuiteSummary,
    prepared: &Prepared,
    records: Vec<(usize, usize, TrialRecord)>,
    options: &SuiteOptions,
) -> SuiteSummary {
    summary.datum_labels = prepared.labels.clone();
    for (label, id, outcome) in &prepared.setup {
        merge(&mut summary, label, *id, outcome);
    }
    for (ci, trial, record) in &records {
        let origin = format!("{} trial {trial}", prepared.contexts[*ci].label);
        for (id, outcome) in record {
            merge(&mut summary, &origin, *id, outcome);
        }
    }
    merge(
        &mut summary,
        "wild rank-two demonstration",
        CheckId::BadPrimeSharpness,
        &bad_prime_demonstration(),
    );
    merge(
        &mut summary,
        "two-torsion demonstration",
        CheckId::NoncyclicSharpness,
        &noncyclic_demonstration(options.weyl_limit),
    );
    summary
}

fn trial_specs(prepared: &Prepared, trials: usize) -> Vec<(usize, usize)> {
    let mut specs = Vec::with_capacity(prepared.contexts.len() * trials);
    for ci in 0..prepared.contexts.len() {
        for t in 0..trials {
            specs.push((ci, t));
        }
    }
    specs
}

/// Run every trial on the current thread, in datum-then-trial order.
pub fn run_suite_sequential(options: &SuiteOptions) -> SuiteSummary {
    let summary = empty_summary(options);
    if options.trials == 0 {
        return summary;
    }
    let prepared = prepare(options);
    let records: Vec<(usize, usize, TrialRecord)> = trial_specs(&prepared, options.trials)
        .into_iter()
        .map(|(ci, t)| (ci, t, run_trial(&prepared.contexts[ci], t, options)))
        .collect();
    finish(summary, &prepared, records, options)
}

/// Run the trials on the rayon pool.  Each trial seeds its own
/// generator, and the records are merged in the same datum-then-trial
/// order as the sequential runner, so the summaries agree bytewise.
#[cfg(feature = "parallel")]
pub fn run_suite_parallel(options: &SuiteOptions) -> SuiteSummary {
    let summary = empty_summary(options);
    if options.trials == 0 {
        return summary;
    }
    let prepared = prepare(options);
    let records: Vec<(usize, usize, TrialRecord)> = trial_specs(&prepared, options.trials)
        .into_par_iter()
        .map(|(ci, t)| (ci, t, run_trial(&prepared.contexts[ci], t, options)))
        .collect();
    finish(summary, &prepared, records, options)
}

/// The sweep, parallel when the `parallel` feature is on.
pub fn run_suite(options: &SuiteOptions) -> SuiteSummary {
    #[cfg(feature = "parallel")]
    {
        run_suite_parallel(options)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_suite_sequential(options)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both() -> Vec<LatticeChoice> {
        vec![LatticeChoice::SimplyConnected, LatticeChoice::Adjoint]
    }

    #[test]
    fn lattice_choices_parse() {
        assert_eq!("sc".parse::<LatticeChoice>().unwrap(), LatticeChoice::SimplyConnected);
        assert_eq!("ad".parse::<LatticeChoice>().unwrap(), LatticeChoice::Adjoint);
        assert!("iso".parse::<LatticeChoice>().is_err());
    }

    #[test]
    fn sweep_list_deduplicates_self_dual_types() {
        let options = SuiteOptions::new(4, both(), 1, 0);
        let data = sweep_data(&options);
        let g2: Vec<_> = data.iter().filter(|(l, _)| l == "G2").collect();
        assert_eq!(g2.len(), 1);
        assert_eq!(g2[0].1, LatticeChoice::SimplyConnected);
        let b3: Vec<_> = data.iter().filter(|(l, _)| l == "B3").collect();
        assert_eq!(b3.len(), 2);
    }

    #[test]
    fn zero_trials_give_an_empty_summary() {
        let options = SuiteOptions::new(2, both(), 0, 7);
        let summary = run_suite_sequential(&options);
        assert!(summary.stats.is_empty());
        assert!(!summary.has_failures());
        assert!(summary.render().contains("no trials requested"));
    }

    #[test]
    fn rank_two_sweep_is_clean() {
        let options = SuiteOptions::new(2, both(), 50, 7);
        let summary = run_suite_sequential(&options);
        assert!(!summary.has_failures(), "{}", summary.render());
        // A1, A2, B2, C2 with both lattices, G2 once.
        assert_eq!(summary.datum_labels.len(), 9);
        let volume = &summary.stats[&CheckId::VolumeRatio];
        assert_eq!(volume.passes, 9 * 50);
        assert_eq!(summary.stats[&CheckId::WeylOrder].passes, 9);
        assert_eq!(summary.stats[&CheckId::BadPrimeSharpness].passes, 1);
        assert_eq!(summary.stats[&CheckId::NoncyclicSharpness].passes, 1);
        // Some draws are fully ramified and some are rank-deficient, so
        // the gated checks must have skipped at least once.
        assert!(summary.stats[&CheckId::GammaFactorization].skips > 0);
        assert!(summary.stats[&CheckId::GammaFactorization].passes > 0);
    }

    #[test]
    fn summaries_are_reproducible() {
        let options = SuiteOptions::new(2, vec![LatticeChoice::Adjoint], 6, 3);
        let first = run_suite_sequential(&options);
        let second = run_suite_sequential(&options);
        assert_eq!(first, second);
        assert_eq!(first.render(), second.render());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_runner_matches_sequential() {
        let options = SuiteOptions::new(2, both(), 10, 11);
        let sequential = run_suite_sequential(&options);
        let parallel = run_suite_parallel(&options);
        assert_eq!(sequential, parallel);
        assert_eq!(sequential.render(), parallel.render());
    }
}
