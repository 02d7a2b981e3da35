//! End-to-end analysis of a principal-series block: a based root datum,
//! an inertial character datum, and a residue cardinality.  This module
//! assembles the per-block reports (conductors, stabilizers, volumes)
//! and runs the identity chain connecting the volume ratio, the adjoint
//! gamma value, and the component-group bookkeeping to the conjectured
//! formal-degree formula.

use crate::centralizers::{
    connected_centralizer_subsystem, discrete_component_group, CentralizerError,
};
use crate::parameters::{
    is_principal_for, principal_cocharacter, GammaError, Parameter, TorusElement,
};
use crate::ramification::{
    conductors, filtration_function, stabilizer_decomposition, unramified_subsystem,
    ConductorData, FiltrationFunction, InertialDatum, RamificationError, Subsystem,
};
use crate::rootdata::condition::{condition_report, ConditionReport};
use crate::rootdata::weyl::{WeylGroup, DEFAULT_WEYL_LIMIT};
use crate::rootdata::{BasedRootDatum, RootDataError};
use crate::scalars::{rational_pow, Monomial, Rational, Scalar};
use crate::volumes::{volume_report, QPower, VolumeError, VolumeReport};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChainClause {
    VolumeRatio,
    GammaFactorization,
    ComponentFactorization,
    AssembledIdentity,
}

impl fmt::Display for ChainClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ChainClause::VolumeRatio => "volume ratio",
            ChainClause::GammaFactorization => "gamma factorization",
            ChainClause::ComponentFactorization => "component-group factorization",
            ChainClause::AssembledIdentity => "assembled identity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum HiiError {
    #[error("identity violation ({clause}): {detail}")]
    IdentityViolation { clause: ChainClause, detail: String },
    #[error("a non-principal parameter needs enhancement data: {0}")]
    MissingEnhancement(String),
    #[error("parameter is not discrete: {0}")]
    NotDiscrete(String),
    #[error("the identity chain needs a principal-arc parameter: {0}")]
    NotPrincipal(String),
    #[error("invalid enhancement overrides: {0}")]
    InvalidOverrides(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Ramification(#[from] RamificationError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
    #[error(transparent)]
    Centralizer(#[from] CentralizerError),
}

impl HiiError {
    /// True exactly for a failed identity, the one condition that is a
    /// mathematical finding rather than an input or resource problem.
    pub fn is_identity_violation(&self) -> bool {
        matches!(self, HiiError::IdentityViolation { .. })
    }
}

/// How the block picks its parameter: the principal arc of the
/// unramified subsystem, or explicit Frobenius data.
#[derive(Clone, Debug)]
pub enum ParameterChoice {
    Steinberg,
    Explicit { s: TorusElement, h: Vec<i64> },
}

/// Enhancement data for parameters the principal path cannot label.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnhancementOverrides {
    pub dim_rho: Option<i64>,
    pub s_sharp: Option<i64>,
    pub c_nu_order: Option<i64>,
    pub dim_rho_nu: Option<i64>,
}

impl EnhancementOverrides {
    pub fn is_empty(&self) -> bool {
        *self == EnhancementOverrides::default()
    }
}

/// A fully resolved block.
#[derive(Clone, Debug)]
pub struct BlockData {
    pub datum: BasedRootDatum,
    pub inertial: InertialDatum,
    pub q: Rational,
    pub p: Option<u64>,
    pub parameter: Option<ParameterChoice>,
    pub overrides: EnhancementOverrides,
    pub weyl_limit: usize,
}

impl BlockData {
    pub fn new(datum: BasedRootDatum, inertial: InertialDatum, q: Rational) -> Self {
        BlockData {
            datum,
            inertial,
            q,
            p: None,
            parameter: None,
            overrides: EnhancementOverrides::default(),
            weyl_limit: DEFAULT_WEYL_LIMIT,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SubsystemSummary {
    pub name: String,
    pub rank: usize,
    pub positive_count: usize,
    pub parent_indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct StabilizerSummary {
    pub full_order: usize,
    pub reflection_order: usize,
    pub diagram_order: usize,
}

#[derive(Clone, Debug)]
pub struct AnalyzeReport {
    pub datum_name: String,
    pub rank: usize,
    pub positive_count: usize,
    pub conductors: ConductorData,
    pub filtration: FiltrationFunction,
    pub subsystem: Option<SubsystemSummary>,
    pub stabilizer: StabilizerSummary,
    pub volumes: VolumeReport,
    pub condition: Option<ConditionReport>,
}

/// Conductors, filtration, stabilizer split, and volumes for one block.
pub fn analyze(block: &BlockData) -> Result<AnalyzeReport, HiiError> {
    let cond = conductors(&block.datum, &block.inertial);
    let filt = filtration_function(&block.datum, &cond);
    let sub = unramified_subsystem(&block.datum, &cond)?;
    let volumes = volume_report(&block.datum, sub.as_ref(), &cond, &filt)?;
    let weyl = WeylGroup::enumerate(&block.datum, block.weyl_limit)?;
    let split = stabilizer_decomposition(&block.datum, &weyl, &block.inertial, sub.as_ref())?;
    let condition = match block.p {
        Some(p) => Some(condition_report(&block.datum, Some(p))?),
        None => None,
    };
    Ok(AnalyzeReport {
        datum_name: block.datum.name().to_string(),
        rank: block.datum.rank(),
        positive_count: block.datum.positive_indices().len(),
        conductors: cond,
        filtration: filt,
        subsystem: sub.map(|s| SubsystemSummary {
            name: s.datum.name().to_string(),
            rank: s.datum.semisimple_rank(),
            positive_count: s.datum.positive_indices().len(),
            parent_indices: s.parent_indices,
        }),
        stabilizer: StabilizerSummary {
            full_order: split.stabilizer.len(),
            reflection_order: split.reflection_part.len(),
            diagram_order: split.diagram_part.len(),
        },
        volumes,
        condition,
    })
}

/// The resolved parameter together with how it was obtained.
struct ResolvedParameter {
    parameter: Parameter,
    principal: bool,
}

fn resolve_parameter(
    block: &BlockData,
    sub: Option<&Subsystem>,
) -> Result<ResolvedParameter, HiiError> {
    let rank = block.datum.rank();
    match block.parameter.as_ref().unwrap_or(&ParameterChoice::Steinberg) {
        ParameterChoice::Steinberg => {
            let sub = sub.ok_or_else(|| {
                HiiError::NotDiscrete(
                    "every root is ramified, so the block has no principal arc".into(),
                )
            })?;
            let s = vec![Monomial::one(); rank];
            let h = principal_cocharacter(&sub.datum);
            let parameter = Parameter::new(
                block.datum.clone(),
                block.inertial.clone(),
                s,
                h,
                block.q.clone(),
            )?;
            Ok(ResolvedParameter { parameter, principal: true })
        }
        ParameterChoice::Explicit { s, h } => {
            let fixed = connected_centralizer_subsystem(
                &block.datum,
                block.inertial.generators(),
                std::slice::from_ref(s),
            )?;
            let principal = match &fixed {
                Some(sys) => is_principal_for(h, &sys.datum),
                None => false,
            };
            let parameter = Parameter::new(
                block.datum.clone(),
                block.inertial.clone(),
                s.clone(),
                h.clone(),
                block.q.clone(),
            )?;
            Ok(ResolvedParameter { parameter, principal })
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormalDegreeReport {
    pub strands: Vec<(Monomial, u32)>,
    pub principal: bool,
    pub dim_rho: i64,
    pub s_sharp_order: i64,
    pub gamma_abs_sq: Scalar,
    pub rhs_sq: Scalar,
}

/// The conjectured right-hand side, squared to stay in the exact ring:
/// `(dim rho / |S| * |gamma(0)|)^2`.
pub fn assemble_rhs(
    dim_rho: i64,
    s_sharp_order: i64,
    gamma_abs_sq: &Scalar,
) -> Result<Scalar, HiiError> {
    if dim_rho <= 0 || s_sharp_order <= 0 {
        return Err(HiiError::InvalidOverrides(format!(
            "dimension {dim_rho} and component order {s_sharp_order} must be positive"
        )));
    }
    let ratio = Rational::new(num::BigInt::from(dim_rho), num::BigInt::from(s_sharp_order));
    Ok(gamma_abs_sq.scale(&(&ratio * &ratio)))
}

/// The formal-degree right-hand side for the block's parameter.
pub fn formal_degree_rhs(block: &BlockData) -> Result<FormalDegreeReport, HiiError> {
    let cond = conductors(&block.datum, &block.inertial);
    let sub = unramified_subsystem(&block.datum, &cond)?;
    let resolved = resolve_parameter(block, sub.as_ref())?;

    let dim_rho = if resolved.principal {
        if !block.overrides.is_empty() {
            return Err(HiiError::InvalidOverrides(
                "principal-arc parameters fix their enhancement; drop the overrides".into(),
            ));
        }
        1
    } else {
        // An explicit non-principal parameter carries no computable
        // labelling; the caller must say which member it is.
        resolve_override_dimension(block)?
    };

    let parameter = &resolved.parameter;
    if !parameter.is_discrete() {
        return Err(HiiError::NotDiscrete(format!(
            "{} trivial strings against a central torus of dimension {}",
            parameter.invariant_line_count(),
            block.datum.rank() - block.datum.semisimple_rank()
        )));
    }

    let s_sharp_order = match block.overrides.s_sharp {
        Some(n) if n > 0 => n,
        Some(n) => {
            return Err(HiiError::InvalidOverrides(format!(
                "component order {n} must be positive"
            )))
        }
        None => discrete_component_group(
            &block.datum,
            block.weyl_limit,
            block.inertial.generators(),
            parameter.frobenius_torus(),
        )?
        .order(),
    };

    let gamma_abs_sq = parameter.gamma_abs_sq()?;
    let rhs_sq = assemble_rhs(dim_rho, s_sharp_order, &gamma_abs_sq)?;
    Ok(FormalDegreeReport {
        strands: parameter.strands().to_vec(),
        principal: resolved.principal,
        dim_rho,
        s_sharp_order,
        gamma_abs_sq,
        rhs_sq,
    })
}

fn resolve_override_dimension(block: &BlockData) -> Result<i64, HiiError> {
    let ov = &block.overrides;
    if let Some(d) = ov.dim_rho {
        if d <= 0 {
            return Err(HiiError::InvalidOverrides(format!(
                "dimension {d} must be positive"
            )));
        }
        if ov.c_nu_order.is_some() || ov.dim_rho_nu.is_some() {
            return Err(HiiError::InvalidOverrides(
                "give either dim_rho or the (c_nu_order, dim_rho_nu) pair, not both".into(),
            ));
        }
        return Ok(d);
    }
    let c_nu = ov.c_nu_order.ok_or_else(|| {
        HiiError::MissingEnhancement(
            "need dim_rho, or c_nu_order with optional dim_rho_nu".into(),
        )
    })?;
    let dim_nu = ov.dim_rho_nu.unwrap_or(1);
    if c_nu <= 0 || dim_nu <= 0 {
        return Err(HiiError::InvalidOverrides(
            "enhancement orders must be positive".into(),
        ));
    }
    let weyl = WeylGroup::enumerate(&block.datum, block.weyl_limit)?;
    let cond = conductors(&block.datum, &block.inertial);
    let sub = unramified_subsystem(&block.datum, &cond)?;
    let split = stabilizer_decomposition(&block.datum, &weyl, &block.inertial, sub.as_ref())?;
    let c_chi = split.diagram_part.len() as i64;
    if c_chi % c_nu != 0 {
        return Err(HiiError::InvalidOverrides(format!(
            "c_nu_order {c_nu} does not divide the diagram-part order {c_chi}"
        )));
    }
    Ok((c_chi / c_nu) * dim_nu)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainOutcome {
    Verified,
    /// The unramified subsystem has lower rank than the group, so the
    /// block carries no discrete parameter; only the volume clause
    /// applies.
    NoDiscreteParameters,
}

#[derive(Clone, Debug)]
pub struct ChainDetails {
    pub strands: Vec<(Monomial, u32)>,
    pub gamma_abs_sq: Scalar,
    pub subsystem_gamma_abs_sq: Scalar,
    pub s_sharp_order: i64,
    pub subsystem_s_sharp_order: i64,
    pub diagram_order: i64,
    pub rhs_sq: Scalar,
}

#[derive(Clone, Debug)]
pub struct ChainReport {
    pub outcome: ChainOutcome,
    pub ratio: QPower,
    pub artin_exponent: u64,
    pub details: Option<ChainDetails>,
}

/// Run the four-clause identity chain on a block.
///
/// 1. the Iwahori volume ratio equals the modulus of the ramified root
///    number;
/// 2. the adjoint gamma modulus factors through the unramified
///    subsystem, with equal string data on both sides;
/// 3. the parameter's component group is the subsystem component group
///    extended by the diagram part of the stabilizer;
/// 4. the assembled right-hand sides agree.
pub fn chain_check(block: &BlockData) -> Result<ChainReport, HiiError> {
    let cond = conductors(&block.datum, &block.inertial);
    let filt = filtration_function(&block.datum, &cond);
    let sub = unramified_subsystem(&block.datum, &cond)?;
    let volumes = volume_report(&block.datum, sub.as_ref(), &cond, &filt)?;
    if !volumes.ratio_matches_epsilon() {
        return Err(HiiError::IdentityViolation {
            clause: ChainClause::VolumeRatio,
            detail: format!(
                "ratio {} against root-number modulus {}",
                volumes.ratio, volumes.epsilon_abs
            ),
        });
    }

    let full_rank = sub
        .as_ref()
        .map(|s| s.datum.semisimple_rank() == block.datum.semisimple_rank())
        .unwrap_or(false);
    if !full_rank {
        return Ok(ChainReport {
            outcome: ChainOutcome::NoDiscreteParameters,
            ratio: volumes.ratio,
            artin_exponent: volumes.artin_exponent,
            details: None,
        });
    }
    let sub = sub.expect("full rank implies a subsystem");

    let resolved = resolve_parameter(block, Some(&sub))?;
    if !resolved.principal {
        return Err(HiiError::NotPrincipal(
            "the chain compares against the subsystem's principal arc".into(),
        ));
    }
    let parameter = &resolved.parameter;
    if !parameter.is_discrete() {
        return Err(HiiError::NotDiscrete(
            "the resolved parameter has extra trivial strings".into(),
        ));
    }

    // Clause 2: same strings over the subsystem, and the gamma moduli
    // differ exactly by the ramified root number.
    let partner = Parameter::new(
        sub.datum.clone(),
        InertialDatum::unramified(block.datum.rank()),
        parameter.frobenius_torus().to_vec(),
        parameter.monodromy_cocharacter().to_vec(),
        block.q.clone(),
    )?;
    if parameter.strands() != partner.strands() {
        return Err(HiiError::IdentityViolation {
            clause: ChainClause::GammaFactorization,
            detail: format!(
                "string data differs: {:?} against {:?}",
                parameter.strands(),
                partner.strands()
            ),
        });
    }
    let gamma_g = parameter.gamma_abs_sq()?;
    let gamma_h = partner.gamma_abs_sq()?;
    let artin_power = Scalar::from_rational(
        rational_pow(&block.q, volumes.artin_exponent as i64),
        block.q.clone(),
    );
    if gamma_g != gamma_h.mul(&artin_power) {
        return Err(HiiError::IdentityViolation {
            clause: ChainClause::GammaFactorization,
            detail: format!("{gamma_g} is not q^{} times {gamma_h}", volumes.artin_exponent),
        });
    }

    // Clause 3: component orders.
    let weyl = WeylGroup::enumerate(&block.datum, block.weyl_limit)?;
    let split = stabilizer_decomposition(&block.datum, &weyl, &block.inertial, Some(&sub))?;
    let diagram_order = split.diagram_part.len() as i64;
    let s_sharp = discrete_component_group(
        &block.datum,
        block.weyl_limit,
        block.inertial.generators(),
        parameter.frobenius_torus(),
    )?;
    let s_sharp_sub = discrete_component_group(
        &sub.datum,
        block.weyl_limit,
        &[],
        parameter.frobenius_torus(),
    )?;
    if !s_sharp.description.is_finite() || !s_sharp_sub.description.is_finite() {
        return Err(HiiError::NotDiscrete(
            "component computation found a positive-dimensional centralizer".into(),
        ));
    }
    if s_sharp.order() != s_sharp_sub.order() * diagram_order {
        return Err(HiiError::IdentityViolation {
            clause: ChainClause::ComponentFactorization,
            detail: format!(
                "{} against {} * {}",
                s_sharp.order(),
                s_sharp_sub.order(),
                diagram_order
            ),
        });
    }

    // Clause 4: both assembled sides, built from independently computed
    // ingredients.  Principal-arc labelling: trivial subsystem
    // enhancement, full diagram stabilizer.
    let lhs = assemble_rhs(1, s_sharp.order(), &gamma_g)?;
    let rhs = assemble_rhs(1, s_sharp_sub.order() * diagram_order, &gamma_h)?
        .mul(&artin_power);
    if lhs != rhs {
        return Err(HiiError::IdentityViolation {
            clause: ChainClause::AssembledIdentity,
            detail: format!("{lhs} against {rhs}"),
        });
    }

    Ok(ChainReport {
        outcome: ChainOutcome::Verified,
        ratio: volumes.ratio,
        artin_exponent: volumes.artin_exponent,
        details: Some(ChainDetails {
            strands: parameter.strands().to_vec(),
            gamma_abs_sq: gamma_g,
            subsystem_gamma_abs_sq: gamma_h,
            s_sharp_order: s_sharp.order(),
            subsystem_s_sharp_order: s_sharp_sub.order(),
            diagram_order,
            rhs_sq: lhs,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::named::{named_datum, Lattice};
    use crate::scalars::TorsionValue;
    use crate::volumes::q_of;
    use num::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn half() -> TorsionValue {
        TorsionValue::of(1, 2)
    }

    fn symplectic_block(q: i64) -> BlockData {
        let datum = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        let inertial = InertialDatum::new(2, vec![vec![vec![half(), half()]]]).unwrap();
        BlockData::new(datum, inertial, q_of(q))
    }

    #[test]
    fn symplectic_block_analysis() {
        let block = symplectic_block(3);
        let report = analyze(&block).unwrap();
        assert_eq!(report.rank, 2);
        assert_eq!(report.positive_count, 4);
        // The four long roots are tamely ramified.
        assert_eq!(report.conductors.values.iter().sum::<u32>(), 4);
        assert_eq!(report.volumes.index_exponent, 2);
        assert_eq!(report.volumes.artin_exponent, 8);
        assert_eq!(report.stabilizer.full_order, 8);
        assert_eq!(report.stabilizer.reflection_order, 4);
        assert_eq!(report.stabilizer.diagram_order, 2);
        let sub = report.subsystem.unwrap();
        assert_eq!(sub.rank, 2);
        assert_eq!(sub.positive_count, 2);
    }

    #[test]
    fn symplectic_chain_verifies() {
        let block = symplectic_block(3);
        let report = chain_check(&block).unwrap();
        assert_eq!(report.outcome, ChainOutcome::Verified);
        let details = report.details.unwrap();
        assert_eq!(details.s_sharp_order, 4);
        assert_eq!(details.subsystem_s_sharp_order, 2);
        assert_eq!(details.diagram_order, 2);
        // rhs^2 = (1/4)^2 * q^8 * (q^2/(q+1))^4 at q = 3.
        assert_eq!(
            details.rhs_sq,
            Scalar::from_rational(rat(43046721, 4096), q_of(3))
        );
    }

    #[test]
    fn rank_one_formal_degrees() {
        // Unramified principal block of the adjoint rank-one group.
        let datum = named_datum("A1", &Lattice::Adjoint).unwrap();
        let block = BlockData::new(datum, InertialDatum::unramified(1), q_of(3));
        let report = formal_degree_rhs(&block).unwrap();
        assert_eq!(report.dim_rho, 1);
        assert_eq!(report.s_sharp_order, 2);
        assert_eq!(report.rhs_sq, Scalar::from_rational(rat(81, 64), q_of(3)));

        let datum = named_datum("A1", &Lattice::SimplyConnected).unwrap();
        let block = BlockData::new(datum, InertialDatum::unramified(1), q_of(3));
        let report = formal_degree_rhs(&block).unwrap();
        assert_eq!(report.s_sharp_order, 1);
        assert_eq!(report.rhs_sq, Scalar::from_rational(rat(81, 16), q_of(3)));
    }

    #[test]
    fn rank_deficient_subsystem_has_no_discrete_parameters() {
        let datum = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        let inertial =
            InertialDatum::new(2, vec![vec![vec![half(), TorsionValue::zero()]]]).unwrap();
        let block = BlockData::new(datum, inertial, q_of(3));
        let report = chain_check(&block).unwrap();
        assert_eq!(report.outcome, ChainOutcome::NoDiscreteParameters);
        assert!(report.details.is_none());
        // Six ramified roots, conductor 1 each.
        assert_eq!(report.artin_exponent, 12);
        assert!(formal_degree_rhs(&block).is_err());
    }

    #[test]
    fn missing_enhancement_is_reported_before_discreteness() {
        let datum = named_datum("A2", &Lattice::SimplyConnected).unwrap();
        let mut block = BlockData::new(datum, InertialDatum::unramified(2), q_of(3));
        // Trivial monodromy: not principal and not discrete.
        block.parameter = Some(ParameterChoice::Explicit {
            s: vec![Monomial::one(), Monomial::one()],
            h: vec![0, 0],
        });
        assert!(matches!(
            formal_degree_rhs(&block),
            Err(HiiError::MissingEnhancement(_))
        ));
        // Once labelled, the actual obstruction surfaces.
        block.overrides.c_nu_order = Some(1);
        assert!(matches!(
            formal_degree_rhs(&block),
            Err(HiiError::NotDiscrete(_))
        ));
    }

    #[test]
    fn principal_parameters_reject_overrides() {
        let mut block = symplectic_block(3);
        block.overrides.dim_rho = Some(2);
        assert!(matches!(
            formal_degree_rhs(&block),
            Err(HiiError::InvalidOverrides(_))
        ));
    }

    #[test]
    fn explicit_principal_parameter_matches_the_default_path() {
        let mut block = symplectic_block(3);
        let base = formal_degree_rhs(&block).unwrap();
        block.parameter = Some(ParameterChoice::Explicit {
            s: vec![Monomial::one(), Monomial::one()],
            h: vec![2, 0],
        });
        let explicit = formal_degree_rhs(&block).unwrap();
        assert!(explicit.principal);
        assert_eq!(explicit.rhs_sq, base.rhs_sq);
        // Chain accepts it as well.
        assert_eq!(chain_check(&block).unwrap().outcome, ChainOutcome::Verified);
    }

    #[test]
    fn central_torus_blocks_fail_operationally() {
        let gl = BasedRootDatum::from_explicit(
            vec![vec![1, -1], vec![-1, 1]],
            vec![vec![1, -1], vec![-1, 1]],
        )
        .unwrap();
        let block = BlockData::new(gl, InertialDatum::unramified(2), q_of(3));
        let err = formal_degree_rhs(&block).unwrap_err();
        assert!(matches!(err, HiiError::Gamma(GammaError::PoleFlag { .. })));
        assert!(!err.is_identity_violation());
    }

    #[test]
    fn assembler_is_homogeneous() {
        let gamma = Scalar::from_rational(rat(7, 5), q_of(2));
        let a = assemble_rhs(1, 2, &gamma).unwrap();
        let b = assemble_rhs(3, 6, &gamma).unwrap();
        assert_eq!(a, b);
        assert!(assemble_rhs(0, 2, &gamma).is_err());
        assert!(assemble_rhs(1, -1, &gamma).is_err());
    }

    #[test]
    fn condition_report_round_trip() {
        let datum = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        let mut block = BlockData::new(datum, InertialDatum::unramified(2), q_of(3));
        block.p = Some(3);
        let report = analyze(&block).unwrap();
        let condition = report.condition.unwrap();
        assert_eq!(condition.satisfied, Some(true));
        assert_eq!(condition.excluded_primes, vec![2]);
    }
}
