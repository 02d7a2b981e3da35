//! Ramification data of a tame-to-wild character of a maximal torus, seen
//! through the dual torus: a descending chain of finite subgroups (the
//! images of the ramification filtration), the conductor it induces on
//! each root, and the subgroup structure that the conductors carve out of
//! the Weyl group.

use crate::rootdata::weyl::WeylGroup;
use crate::rootdata::{BasedRootDatum, RootDataError};
use crate::scalars::TorsionValue;
use std::collections::HashSet;

/// Cap on the size of any single filtration subgroup when it has to be
/// enumerated (only containment validation needs this).
pub const GROUP_ENUMERATION_LIMIT: usize = 100_000;

/// A torsion point of the dual torus in character-side coordinates: the
/// value on a cocharacter `v` is the dot product with `v` in `Q/Z`.
pub type TorsionPoint = Vec<TorsionValue>;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RamificationError {
    #[error("invalid filtration levels: {0}")]
    InvalidLevels(String),
    #[error("filtration subgroup exceeds the enumeration bound {0}")]
    GroupTooLarge(usize),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("stabilizer does not factor over the subsystem reflections: {0}")]
    Factorization(String),
}

/// Value of the point on a coroot.
pub fn evaluate_coroot(point: &[TorsionValue], coroot: &[i64]) -> TorsionValue {
    point
        .iter()
        .zip(coroot)
        .fold(TorsionValue::zero(), |acc, (t, &c)| acc.add(&t.scaled(c)))
}

fn is_trivial_point(p: &[TorsionValue]) -> bool {
    p.iter().all(|t| t.is_zero())
}

/// Additive closure of a generator list, bounded.
fn enumerate_group(
    rank: usize,
    gens: &[TorsionPoint],
    limit: usize,
) -> Result<Vec<TorsionPoint>, RamificationError> {
    let zero: TorsionPoint = vec![TorsionValue::zero(); rank];
    let mut seen: HashSet<TorsionPoint> = HashSet::from([zero.clone()]);
    let mut queue = vec![zero];
    let mut head = 0;
    while head < queue.len() {
        let base = queue[head].clone();
        head += 1;
        for g in gens {
            let next: TorsionPoint = base.iter().zip(g).map(|(a, b)| a.add(b)).collect();
            if !seen.contains(&next) {
                if seen.len() >= limit {
                    return Err(RamificationError::GroupTooLarge(limit));
                }
                seen.insert(next.clone());
                queue.push(next);
            }
        }
    }
    Ok(queue)
}

/// The image of the ramification filtration in the dual torus: level 0
/// generates the whole inertial image, deeper levels the wild subgroups.
/// Levels beyond the last listed one are trivial.
#[derive(Clone, Debug)]
pub struct InertialDatum {
    rank: usize,
    levels: Vec<Vec<TorsionPoint>>,
}

impl InertialDatum {
    pub fn new(
        rank: usize,
        levels: Vec<Vec<TorsionPoint>>,
    ) -> Result<Self, RamificationError> {
        for (j, level) in levels.iter().enumerate() {
            for p in level {
                if p.len() != rank {
                    return Err(RamificationError::InvalidLevels(format!(
                        "level {j} has a point of length {} in rank {rank}",
                        p.len()
                    )));
                }
            }
        }
        // Containment: each level must generate a subgroup of the previous.
        for j in 1..levels.len() {
            let prev = enumerate_group(rank, &levels[j - 1], GROUP_ENUMERATION_LIMIT)?;
            let prev_set: HashSet<&TorsionPoint> = prev.iter().collect();
            for g in &levels[j] {
                if !prev_set.contains(g) {
                    return Err(RamificationError::InvalidLevels(format!(
                        "level {j} generator {g:?} is outside level {}",
                        j - 1
                    )));
                }
            }
        }
        Ok(InertialDatum { rank, levels })
    }

    /// The trivial (unramified) datum.
    pub fn unramified(rank: usize) -> Self {
        InertialDatum { rank, levels: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn levels(&self) -> &[Vec<TorsionPoint>] {
        &self.levels
    }

    /// Generators of the full inertial image (level 0; containment makes
    /// them generate every deeper level as well).
    pub fn generators(&self) -> &[TorsionPoint] {
        self.levels.first().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Largest level carrying a nontrivial subgroup.
    pub fn depth(&self) -> Option<usize> {
        (0..self.levels.len())
            .rev()
            .find(|&j| self.levels[j].iter().any(|p| !is_trivial_point(p)))
    }

    pub fn is_unramified(&self) -> bool {
        self.depth().is_none()
    }

    /// All elements of the level-`j` subgroup.
    pub fn enumerate_level(&self, j: usize) -> Result<Vec<TorsionPoint>, RamificationError> {
        let gens = self.levels.get(j).map(Vec::as_slice).unwrap_or(&[]);
        enumerate_group(self.rank, gens, GROUP_ENUMERATION_LIMIT)
    }
}

/// The conductor of the character composed with each coroot, indexed like
/// the datum's root list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConductorData {
    pub values: Vec<u32>,
}

/// Conductors from the filtration: a root is unramified (conductor 0)
/// when its coroot kills the whole inertial image, and otherwise has
/// conductor one more than the last level its coroot detects.  Checking
/// generators suffices because evaluation is a homomorphism.
pub fn conductors(datum: &BasedRootDatum, inertial: &InertialDatum) -> ConductorData {
    assert_eq!(datum.rank(), inertial.rank(), "rank mismatch");
    let values = datum
        .coroots()
        .iter()
        .map(|av| {
            let detected: Vec<usize> = (0..inertial.levels().len())
                .filter(|&j| {
                    inertial.levels()[j]
                        .iter()
                        .any(|p| !evaluate_coroot(p, av).is_zero())
                })
                .collect();
            match detected.last() {
                None => 0,
                Some(&j) => 1 + j as u32,
            }
        })
        .collect();
    ConductorData { values }
}

impl ConductorData {
    /// Sum of conductors over the positive roots.
    pub fn sum_over_positive(&self, datum: &BasedRootDatum) -> u64 {
        datum
            .positive_indices()
            .iter()
            .map(|&i| u64::from(self.values[i]))
            .sum()
    }

    /// Number of ramified positive roots.
    pub fn ramified_positive_count(&self, datum: &BasedRootDatum) -> usize {
        datum
            .positive_indices()
            .iter()
            .filter(|&&i| self.values[i] != 0)
            .count()
    }

    /// Artin conductor of the ramified part of the adjoint representation:
    /// each ramified root line contributes its conductor plus one.
    pub fn artin_exponent(&self) -> u64 {
        self.values
            .iter()
            .filter(|&&c| c != 0)
            .map(|&c| u64::from(c) + 1)
            .sum()
    }

    /// Indices of the unramified roots.
    pub fn unramified_indices(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i] == 0)
            .collect()
    }
}

/// The filtration jump attached to each root: half the conductor, rounded
/// down on positive roots and up on negative ones.
#[derive(Clone, Debug)]
pub struct FiltrationFunction {
    pub values: Vec<i64>,
    /// Root indices where this differs from the commonly printed shortcut
    /// `min(1, floor((c+1)/2))` for negative roots; that shortcut caps the
    /// jump at 1 and so undercounts once a conductor reaches 3.
    pub displayed_rule_divergences: Vec<usize>,
}

pub fn filtration_function(datum: &BasedRootDatum, cond: &ConductorData) -> FiltrationFunction {
    let mut values = Vec::with_capacity(datum.num_roots());
    let mut divergences = Vec::new();
    for i in 0..datum.num_roots() {
        let c = i64::from(cond.values[i]);
        if datum.is_positive(i) {
            values.push(c.div_euclid(2));
        } else {
            values.push((c + 1).div_euclid(2));
            let displayed = 1.min((c + 1).div_euclid(2));
            if displayed != (c + 1).div_euclid(2) {
                divergences.push(i);
            }
        }
    }
    FiltrationFunction { values, displayed_rule_divergences: divergences }
}

/// The unramified roots as a datum in the ambient lattices, remembering
/// where each of its roots sits in the parent.
#[derive(Clone, Debug)]
pub struct Subsystem {
    pub datum: BasedRootDatum,
    pub parent_indices: Vec<usize>,
}

pub fn unramified_subsystem(
    datum: &BasedRootDatum,
    cond: &ConductorData,
) -> Result<Option<Subsystem>, RamificationError> {
    let idx = cond.unramified_indices();
    if idx.is_empty() {
        return Ok(None);
    }
    let (sub, parent_indices) = datum.sub_datum(&idx)?;
    Ok(Some(Subsystem { datum: sub, parent_indices }))
}

/// The stabilizer of the character inside the Weyl group, split into the
/// reflection subgroup of the unramified roots and the complementary
/// subgroup preserving their positive system.
#[derive(Clone, Debug)]
pub struct StabilizerSplit {
    pub stabilizer: Vec<usize>,
    pub reflection_part: Vec<usize>,
    pub diagram_part: Vec<usize>,
}

pub fn stabilizer_decomposition(
    datum: &BasedRootDatum,
    weyl: &WeylGroup,
    inertial: &InertialDatum,
    subsystem: Option<&Subsystem>,
) -> Result<StabilizerSplit, RamificationError> {
    let stabilizer = weyl.pointwise_stabilizer_torsion(inertial.generators());
    let stab_set: HashSet<usize> = stabilizer.iter().copied().collect();

    let reflection_part = match subsystem {
        None => vec![weyl.identity()],
        Some(sub) => {
            let gens: Vec<usize> = sub
                .parent_indices
                .iter()
                .map(|&i| weyl.reflection(datum, i))
                .collect();
            weyl.subgroup_closure(&gens)
        }
    };
    for &w in &reflection_part {
        if !stab_set.contains(&w) {
            return Err(RamificationError::Factorization(
                "a subsystem reflection moves the character".into(),
            ));
        }
    }

    let positive_vectors: Vec<Vec<i64>> = match subsystem {
        None => vec![],
        Some(sub) => sub
            .datum
            .positive_indices()
            .iter()
            .map(|&i| sub.datum.root(i).to_vec())
            .collect(),
    };
    let diagram_part: Vec<usize> = stabilizer
        .iter()
        .copied()
        .filter(|&w| weyl.permutes_set(w, &positive_vectors))
        .collect();

    let refl_set: HashSet<usize> = reflection_part.iter().copied().collect();
    let both: Vec<usize> = diagram_part
        .iter()
        .copied()
        .filter(|w| refl_set.contains(w))
        .collect();
    if both != vec![weyl.identity()] {
        return Err(RamificationError::Factorization(format!(
            "reflection and diagram parts share {} elements",
            both.len()
        )));
    }
    if reflection_part.len() * diagram_part.len() != stabilizer.len() {
        return Err(RamificationError::Factorization(format!(
            "orders {} * {} != {}",
            reflection_part.len(),
            diagram_part.len(),
            stabilizer.len()
        )));
    }
    Ok(StabilizerSplit { stabilizer, reflection_part, diagram_part })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::named::{named_datum, Lattice};
    use crate::rootdata::weyl::DEFAULT_WEYL_LIMIT;

    fn tv(a: i64, b: i64) -> TorsionValue {
        TorsionValue::of(a, b)
    }

    fn tame(rank: usize, gens: Vec<TorsionPoint>) -> InertialDatum {
        InertialDatum::new(rank, vec![gens, vec![]]).unwrap()
    }

    #[test]
    fn two_torsion_character_on_symplectic_rank_two() {
        let d = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        let inertial = tame(2, vec![vec![tv(1, 2), tv(1, 2)]]);
        let cond = conductors(&d, &inertial);
        // The long roots are ramified with conductor one, the short ones
        // unramified.
        for i in 0..d.num_roots() {
            let len: i64 = d.root(i).iter().map(|c| c * c).sum();
            assert_eq!(cond.values[i], u32::from(len == 4), "root {:?}", d.root(i));
        }
        assert_eq!(cond.sum_over_positive(&d), 2);
        assert_eq!(cond.ramified_positive_count(&d), 2);
        assert_eq!(cond.artin_exponent(), 8);

        let sub = unramified_subsystem(&d, &cond).unwrap().unwrap();
        assert_eq!(sub.datum.num_roots(), 4);
        assert_eq!(sub.datum.simple_indices().len(), 2);

        let w = WeylGroup::enumerate(&d, DEFAULT_WEYL_LIMIT).unwrap();
        let split = stabilizer_decomposition(&d, &w, &inertial, Some(&sub)).unwrap();
        assert_eq!(split.stabilizer.len(), 8);
        assert_eq!(split.reflection_part.len(), 4);
        assert_eq!(split.diagram_part.len(), 2);
        // The nontrivial diagram element is the sign change in the second
        // coordinate, which swaps the two unramified simple roots.
        let flip = split
            .diagram_part
            .iter()
            .find(|&&x| x != w.identity())
            .unwrap();
        assert_eq!(w.act_vec(*flip, &[1, -1]), vec![1, 1]);
    }

    #[test]
    fn filtration_function_and_its_divergence() {
        let d = named_datum("A1", &Lattice::SimplyConnected).unwrap();
        // Wild datum of depth 2 on a cubic character: conductor 3.
        let g = vec![tv(1, 3)];
        let inertial = InertialDatum::new(
            1,
            vec![vec![g.clone()], vec![g.clone()], vec![g], vec![]],
        )
        .unwrap();
        assert_eq!(inertial.depth(), Some(2));
        let cond = conductors(&d, &inertial);
        assert_eq!(cond.values, vec![3, 3]);
        let f = filtration_function(&d, &cond);
        let pos = d.positive_indices()[0];
        let neg = d.negation(pos);
        assert_eq!(f.values[pos], 1);
        assert_eq!(f.values[neg], 2);
        assert_eq!(f.displayed_rule_divergences, vec![neg]);
        // Tame data never diverge.
        let t = tame(1, vec![vec![tv(1, 2)]]);
        let f = filtration_function(&d, &conductors(&d, &t));
        assert!(f.displayed_rule_divergences.is_empty());
        assert_eq!(f.values[pos], 0);
        assert_eq!(f.values[neg], 1);
    }

    #[test]
    fn unramified_datum_keeps_everything() {
        let d = named_datum("A2", &Lattice::Adjoint).unwrap();
        let inertial = InertialDatum::unramified(2);
        assert!(inertial.is_unramified());
        let cond = conductors(&d, &inertial);
        assert!(cond.values.iter().all(|&c| c == 0));
        assert_eq!(cond.artin_exponent(), 0);
        let sub = unramified_subsystem(&d, &cond).unwrap().unwrap();
        assert_eq!(sub.datum.num_roots(), d.num_roots());
        let w = WeylGroup::enumerate(&d, DEFAULT_WEYL_LIMIT).unwrap();
        let split = stabilizer_decomposition(&d, &w, &inertial, Some(&sub)).unwrap();
        assert_eq!(split.stabilizer.len(), 6);
        assert_eq!(split.reflection_part.len(), 6);
        assert_eq!(split.diagram_part, vec![w.identity()]);
    }

    #[test]
    fn fully_ramified_two_torsion_has_diagram_stabilizer() {
        // All of the two-torsion on the rank-two exceptional datum: every
        // root is ramified, yet minus the identity survives in the
        // stabilizer.  A connected center therefore does not force the
        // diagram part to be trivial for artificial subgroup data; what
        // rules this out for characters of actual local tori is that their
        // tame image is cyclic.
        let d = named_datum("G2", &Lattice::SimplyConnected).unwrap();
        assert!(d.center_is_connected());
        let inertial = tame(2, vec![vec![tv(1, 2), tv(0, 1)], vec![tv(0, 1), tv(1, 2)]]);
        let cond = conductors(&d, &inertial);
        assert!(cond.values.iter().all(|&c| c == 1));
        assert!(unramified_subsystem(&d, &cond).unwrap().is_none());
        let w = WeylGroup::enumerate(&d, DEFAULT_WEYL_LIMIT).unwrap();
        let split = stabilizer_decomposition(&d, &w, &inertial, None).unwrap();
        assert_eq!(split.stabilizer.len(), 2);
        assert_eq!(split.reflection_part.len(), 1);
        assert_eq!(split.diagram_part.len(), 2);
    }

    #[test]
    fn conductors_are_not_concave_for_artificial_wild_data() {
        // A depth-one cubic character on the rank-two exceptional datum
        // kills the two short simple-adjacent coroots but detects their
        // sum's long coroot, so the conductor jumps on a sum of two
        // conductor-zero roots.  Random testing must generate filtrations
        // shaped like actual wild inertia (prime-power torsion compatible
        // with the residue condition) to avoid this.
        let d = named_datum("G2", &Lattice::SimplyConnected).unwrap();
        let g = vec![tv(0, 1), tv(1, 3)];
        let inertial =
            InertialDatum::new(2, vec![vec![g.clone()], vec![g], vec![]]).unwrap();
        let cond = conductors(&d, &inertial);
        let a = d.index_of_root(&[2, -1]).unwrap(); // short simple
        let b = d.index_of_root(&[1, 0]).unwrap(); // short, sum below is a root
        let sum = d.index_of_root(&[3, -1]).unwrap(); // long
        assert_eq!(cond.values[a], 0);
        assert_eq!(cond.values[b], 0);
        assert_eq!(cond.values[sum], 2);
    }

    #[test]
    fn level_containment_is_enforced() {
        let bad = InertialDatum::new(
            1,
            vec![vec![vec![tv(1, 2)]], vec![vec![tv(1, 3)]]],
        );
        assert!(matches!(bad, Err(RamificationError::InvalidLevels(_))));
        let ok = InertialDatum::new(
            1,
            vec![vec![vec![tv(1, 6)]], vec![vec![tv(1, 3)]], vec![]],
        );
        assert!(ok.is_ok());
        let bad_dim = InertialDatum::new(2, vec![vec![vec![tv(1, 2)]]]);
        assert!(matches!(bad_dim, Err(RamificationError::InvalidLevels(_))));
    }

    #[test]
    fn oversized_subgroups_are_rejected() {
        let gens = vec![vec![tv(1, 7)], vec![tv(1, 11)], vec![tv(1, 13)], vec![tv(1, 101)]];
        let bad = InertialDatum::new(1, vec![gens, vec![vec![tv(0, 1)]]]);
        assert!(matches!(bad, Err(RamificationError::GroupTooLarge(_))));
    }

    #[test]
    fn inconsistent_conductor_sets_are_caught() {
        // Conductor zero exactly on the long roots of the rank-two
        // symplectic datum: reflection-stable, but the coroot sums land on
        // short roots, so no character produces this pattern.
        let d = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        let values: Vec<u32> = (0..d.num_roots())
            .map(|i| {
                let len: i64 = d.root(i).iter().map(|c| c * c).sum();
                u32::from(len == 2)
            })
            .collect();
        let cond = ConductorData { values };
        assert!(matches!(
            unramified_subsystem(&d, &cond),
            Err(RamificationError::RootData(RootDataError::NotClosed(_)))
        ));
    }

    #[test]
    fn group_enumeration_matches_orders() {
        let i = tame(2, vec![vec![tv(1, 2), tv(0, 1)], vec![tv(0, 1), tv(1, 2)]]);
        assert_eq!(i.enumerate_level(0).unwrap().len(), 4);
        assert_eq!(i.enumerate_level(1).unwrap().len(), 1);
        assert_eq!(i.enumerate_level(7).unwrap().len(), 1);
        let c = tame(1, vec![vec![tv(1, 6)], vec![tv(1, 10)]]);
        assert_eq!(c.enumerate_level(0).unwrap().len(), 30);
    }
}
