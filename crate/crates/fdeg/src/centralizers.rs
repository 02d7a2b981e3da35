//! Component groups of centralizers in the dual group.
//!
//! Centralizers of torus subsets have identity component generated by
//! the dual torus and the root subgroups vanishing on the subset; their
//! components are counted by Weyl stabilizer cosets, one per coset
//! representative preserving the positive roots of the subsystem.  For a
//! discrete parameter the centralizer inside the derived subgroup of the
//! dual group is finite: a diagonalizable part read off from lattice
//! invariants times the same kind of Weyl contribution, computed in the
//! quotient datum whose dual is that derived subgroup.

use crate::parameters::evaluate_monomial;
use crate::ramification::{evaluate_coroot, Subsystem};
use crate::rootdata::snf;
use crate::rootdata::weyl::WeylGroup;
use crate::rootdata::{BasedRootDatum, DerivedQuotient, RootDataError};
use crate::scalars::{Monomial, Rational, TorsionValue};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CentralizerError {
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("point does not descend to the derived-group torus: {0}")]
    CentralTwist(String),
}

/// Component data of a centralizer: Weyl coset representatives (indices
/// into the group they were computed in), elementary divisors of the
/// diagonalizable part, and the dimension of any leftover torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0Description {
    pub weyl_reps: Vec<usize>,
    pub torus_invariants: Vec<i64>,
    pub free_rank: usize,
}

impl Pi0Description {
    pub fn weyl_order(&self) -> i64 {
        self.weyl_reps.len() as i64
    }

    pub fn torsion_order(&self) -> i64 {
        self.torus_invariants.iter().product()
    }

    /// Number of components; meaningful as a group order only when the
    /// description is finite.
    pub fn order(&self) -> i64 {
        self.weyl_order() * self.torsion_order()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }
}

/// Indices of the roots whose coroots are trivial on every given point.
pub fn centralizer_root_indices(
    datum: &BasedRootDatum,
    torsion_points: &[Vec<TorsionValue>],
    monomial_points: &[Vec<Monomial>],
) -> Vec<usize> {
    (0..datum.num_roots())
        .filter(|&i| {
            let av = datum.coroot(i);
            torsion_points
                .iter()
                .all(|p| evaluate_coroot(p, av).is_zero())
                && monomial_points
                    .iter()
                    .all(|p| evaluate_monomial(p, av).is_one())
        })
        .collect()
}

/// The root subsystem of the connected centralizer of a torus subset,
/// or `None` when no root vanishes on it.
pub fn connected_centralizer_subsystem(
    datum: &BasedRootDatum,
    torsion_points: &[Vec<TorsionValue>],
    monomial_points: &[Vec<Monomial>],
) -> Result<Option<Subsystem>, RootDataError> {
    let idx = centralizer_root_indices(datum, torsion_points, monomial_points);
    if idx.is_empty() {
        return Ok(None);
    }
    let (sub, parent_indices) = datum.sub_datum(&idx)?;
    Ok(Some(Subsystem { datum: sub, parent_indices }))
}

/// Invariants of the quotient of the full cocharacter-side lattice by
/// the coroots at the given root indices: the character group of the
/// centre of the corresponding dual-side subgroup.
pub fn pi0_diagonalizable(datum: &BasedRootDatum, indices: &[usize]) -> snf::QuotientInvariants {
    let gens: Vec<Vec<i64>> = indices.iter().map(|&i| datum.coroot(i).to_vec()).collect();
    snf::quotient_invariants(&gens, datum.rank())
}

/// Components of the centralizer of a torus subset in the full dual
/// group.  The dual torus sits inside the identity component, so the
/// count is purely a Weyl computation: pointwise stabilizer elements
/// that preserve the positive roots of the centralizer subsystem.
pub fn torus_subset_pi0(
    datum: &BasedRootDatum,
    weyl: &WeylGroup,
    torsion_points: &[Vec<TorsionValue>],
    monomial_points: &[Vec<Monomial>],
) -> Pi0Description {
    let idx = centralizer_root_indices(datum, torsion_points, monomial_points);
    let positives: Vec<Vec<i64>> = idx
        .iter()
        .filter(|&&i| datum.is_positive(i))
        .map(|&i| datum.root(i).to_vec())
        .collect();
    let stab_t = weyl.pointwise_stabilizer_torsion(torsion_points);
    let weyl_reps = stab_t
        .into_iter()
        .filter(|&w| {
            monomial_points
                .iter()
                .all(|p| weyl.act_monomial(w, p) == *p)
                && weyl.permutes_set(w, &positives)
        })
        .collect();
    Pi0Description {
        weyl_reps,
        torus_invariants: vec![],
        free_rank: 0,
    }
}

/// The component group of a discrete parameter's centralizer in the
/// derived subgroup of the dual group.
#[derive(Clone, Debug)]
pub struct SSharpData {
    pub description: Pi0Description,
    /// Root indices of the centralizer subsystem inside the quotient
    /// datum the computation ran in.
    pub subsystem_indices: Vec<usize>,
    pub quotient_rank: usize,
}

impl SSharpData {
    pub fn order(&self) -> i64 {
        self.description.order()
    }
}

fn project_torsion(
    dq: &DerivedQuotient,
    point: &[TorsionValue],
) -> Result<Vec<TorsionValue>, CentralizerError> {
    let fracs: Vec<Rational> = point.iter().map(|t| t.fraction().clone()).collect();
    let full = dq.transform_rational(&fracs);
    for extra in &full[dq.semisimple_rank..] {
        if !extra.is_integer() {
            return Err(CentralizerError::CentralTwist(format!(
                "torsion point {point:?} has central component {extra}"
            )));
        }
    }
    Ok(full[..dq.semisimple_rank]
        .iter()
        .map(|f| TorsionValue::new(f.clone()))
        .collect())
}

fn project_monomial(
    dq: &DerivedQuotient,
    point: &[Monomial],
) -> Result<Vec<Monomial>, CentralizerError> {
    let rows = dq.coordinate_functionals();
    for row in &rows[dq.semisimple_rank..] {
        let tail = evaluate_monomial(point, row);
        if !tail.is_one() {
            return Err(CentralizerError::CentralTwist(format!(
                "monomial point has central component {tail}"
            )));
        }
    }
    Ok(rows[..dq.semisimple_rank]
        .iter()
        .map(|row| evaluate_monomial(point, row))
        .collect())
}

/// Component group of the centralizer, inside the derived subgroup of
/// the dual group, of the subgroup generated by the given inertial
/// generators, the Frobenius torus part, and a principal arc of the
/// centralizer subsystem.  Points with a nontrivial component along the
/// central torus do not live in the derived subgroup's torus and are
/// rejected.
pub fn discrete_component_group(
    datum: &BasedRootDatum,
    weyl_limit: usize,
    torsion_gens: &[Vec<TorsionValue>],
    s: &[Monomial],
) -> Result<SSharpData, CentralizerError> {
    let dq = datum.derived_quotient();
    let quotient = &dq.datum;
    let gens: Vec<Vec<TorsionValue>> = torsion_gens
        .iter()
        .map(|g| project_torsion(&dq, g))
        .collect::<Result<_, _>>()?;
    let s_proj = project_monomial(&dq, s)?;
    let idx = centralizer_root_indices(quotient, &gens, std::slice::from_ref(&s_proj));
    let diag = pi0_diagonalizable(quotient, &idx);
    let weyl = WeylGroup::enumerate(quotient, weyl_limit)?;
    let positives: Vec<Vec<i64>> = idx
        .iter()
        .filter(|&&i| quotient.is_positive(i))
        .map(|&i| quotient.root(i).to_vec())
        .collect();
    let weyl_reps: Vec<usize> = weyl
        .pointwise_stabilizer_torsion(&gens)
        .into_iter()
        .filter(|&w| weyl.act_monomial(w, &s_proj) == s_proj && weyl.permutes_set(w, &positives))
        .collect();
    Ok(SSharpData {
        description: Pi0Description {
            weyl_reps,
            torus_invariants: diag.torsion,
            free_rank: diag.free_rank,
        },
        subsystem_indices: idx,
        quotient_rank: dq.semisimple_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::named::{named_datum, Lattice};
    use crate::rootdata::weyl::DEFAULT_WEYL_LIMIT;

    fn one() -> Monomial {
        Monomial::one()
    }

    fn half() -> TorsionValue {
        TorsionValue::of(1, 2)
    }

    #[test]
    fn rank_one_component_groups() {
        // Adjoint datum: dual is simply connected, centre of order 2.
        let pgl = named_datum("A1", &Lattice::Adjoint).unwrap();
        let d = discrete_component_group(&pgl, DEFAULT_WEYL_LIMIT, &[], &[one()]).unwrap();
        assert_eq!(d.description.torus_invariants, vec![2]);
        assert_eq!(d.description.weyl_order(), 1);
        assert_eq!(d.order(), 2);
        assert!(d.description.is_finite());

        // Simply connected datum: dual is adjoint, trivial centre.
        let sl = named_datum("A1", &Lattice::SimplyConnected).unwrap();
        let d = discrete_component_group(&sl, DEFAULT_WEYL_LIMIT, &[], &[one()]).unwrap();
        assert_eq!(d.order(), 1);
    }

    #[test]
    fn general_linear_rank_two() {
        let gl = BasedRootDatum::from_explicit(
            vec![vec![1, -1], vec![-1, 1]],
            vec![vec![1, -1], vec![-1, 1]],
        )
        .unwrap();
        let d =
            discrete_component_group(&gl, DEFAULT_WEYL_LIMIT, &[], &[one(), one()]).unwrap();
        assert_eq!(d.quotient_rank, 1);
        assert_eq!(d.order(), 2);

        // A Frobenius part with a central half-power of q does not lie in
        // the derived subgroup's torus.
        let twisted = vec![Monomial::new(1, TorsionValue::zero()), one()];
        assert!(matches!(
            discrete_component_group(&gl, DEFAULT_WEYL_LIMIT, &[], &twisted),
            Err(CentralizerError::CentralTwist(_))
        ));
    }

    #[test]
    fn symplectic_rank_two_factorization() {
        let c2 = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        let gens = vec![vec![half(), half()]];
        let s = vec![Monomial::new(0, half()), Monomial::new(0, half())];

        let full = discrete_component_group(&c2, DEFAULT_WEYL_LIMIT, &gens, &s).unwrap();
        assert_eq!(full.description.torus_invariants, vec![2]);
        assert_eq!(full.description.weyl_order(), 2);
        assert_eq!(full.order(), 4);

        // Factor through the unramified subsystem: the subsystem value
        // times the diagram part of the stabilizer recovers the total.
        let weyl = WeylGroup::enumerate(&c2, DEFAULT_WEYL_LIMIT).unwrap();
        let c_part = torus_subset_pi0(&c2, &weyl, &gens, &[]);
        assert_eq!(c_part.order(), 2);
        let sub = connected_centralizer_subsystem(&c2, &gens, &[])
            .unwrap()
            .unwrap();
        let inner =
            discrete_component_group(&sub.datum, DEFAULT_WEYL_LIMIT, &[], &s).unwrap();
        assert_eq!(inner.order(), 2);
        assert_eq!(full.order(), inner.order() * c_part.order());
    }

    #[test]
    fn diagonalizable_invariants_from_adjoint_input() {
        // With the adjoint lattice the coroots span an index-3 sublattice:
        // the dual-side subgroup is simply connected with centre Z/3.
        let a2 = named_datum("A2", &Lattice::Adjoint).unwrap();
        let all: Vec<usize> = (0..a2.num_roots()).collect();
        let inv = pi0_diagonalizable(&a2, &all);
        assert_eq!(inv.torsion, vec![3]);
        assert_eq!(inv.free_rank, 0);

        let sc = named_datum("A2", &Lattice::SimplyConnected).unwrap();
        let inv = pi0_diagonalizable(&sc, &all);
        assert!(inv.is_trivial());
    }

    #[test]
    fn two_torsion_point_on_the_symplectic_torus() {
        let c2 = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        let weyl = WeylGroup::enumerate(&c2, DEFAULT_WEYL_LIMIT).unwrap();
        let point = vec![vec![half(), TorsionValue::zero()]];
        let pi0 = torus_subset_pi0(&c2, &weyl, &point, &[]);
        // Stabilizer of order 4 (both sign changes), one long root pair
        // survives, and exactly the y-sign change preserves its positive.
        assert_eq!(pi0.order(), 2);
        let sub = connected_centralizer_subsystem(&c2, &point, &[])
            .unwrap()
            .unwrap();
        assert_eq!(sub.datum.num_roots(), 2);
    }

    #[test]
    fn empty_subset_gives_trivial_pi0() {
        let a2 = named_datum("A2", &Lattice::SimplyConnected).unwrap();
        let weyl = WeylGroup::enumerate(&a2, DEFAULT_WEYL_LIMIT).unwrap();
        // No constraints: the centralizer is the whole group, pi0 trivial.
        let pi0 = torus_subset_pi0(&a2, &weyl, &[], &[]);
        assert_eq!(pi0.order(), 1);
        assert!(connected_centralizer_subsystem(&a2, &[], &[])
            .unwrap()
            .is_some());
    }
}
