//! JSON input formats.
//!
//! Rationals travel as `"a/b"` strings (plain integers also accepted).
//! A datum is either named, `{"type":"B2","lattice":"sc"}`, with an
//! optional sublattice `{"basis":[[...]]}`, or explicit,
//! `{"roots":[[...]],"coroots":[[...]]}`.  An inertial datum lists its
//! filtration levels as tuples of rationals; a torus coordinate is a
//! monomial `{"qhalf":"k/2","zeta":"a/b"}`.

use crate::blocks::{BlockData, EnhancementOverrides, ParameterChoice};
use crate::parameters::{GammaError, Parameter, TorusElement};
use crate::ramification::{InertialDatum, RamificationError};
use crate::rootdata::named::{named_datum, Lattice};
use crate::rootdata::{BasedRootDatum, RootDataError};
use crate::scalars::{Monomial, Rational, TorsionValue};
use num::{BigInt, Signed, Zero};
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Ramification(#[from] RamificationError),
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

/// Parse `"a/b"` or `"a"`.
pub fn parse_rational(text: &str) -> Result<Rational, InputError> {
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| InputError::Parse(format!("bad numerator in {text:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| InputError::Parse(format!("bad denominator in {text:?}")))?;
    if d.is_zero() {
        return Err(InputError::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Render a rational in the same `"a/b"` form (integers without the slash).
pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Accepts `3` as well as `"3"` or `"3/2"`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum NumberOrString {
    Int(i64),
    Text(String),
}

impl NumberOrString {
    fn to_rational(&self) -> Result<Rational, InputError> {
        match self {
            NumberOrString::Int(n) => Ok(Rational::from(BigInt::from(*n))),
            NumberOrString::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum LatticeSpec {
    Label(String),
    Basis { basis: Vec<Vec<i64>> },
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum DatumSpec {
    Named {
        #[serde(rename = "type")]
        kind: String,
        lattice: Option<LatticeSpec>,
    },
    Explicit {
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
    },
}

pub fn datum_from_spec(spec: &DatumSpec) -> Result<BasedRootDatum, InputError> {
    match spec {
        DatumSpec::Named { kind, lattice } => {
            let lattice = match lattice {
                None => Lattice::SimplyConnected,
                Some(LatticeSpec::Label(label)) => match label.as_str() {
                    "sc" | "simply-connected" => Lattice::SimplyConnected,
                    "ad" | "adjoint" => Lattice::Adjoint,
                    other => {
                        return Err(InputError::Parse(format!(
                            "unknown lattice label {other:?} (use \"sc\", \"ad\", or a basis)"
                        )))
                    }
                },
                Some(LatticeSpec::Basis { basis }) => Lattice::Basis(basis.clone()),
            };
            Ok(named_datum(kind, &lattice)?)
        }
        DatumSpec::Explicit { roots, coroots } => {
            Ok(BasedRootDatum::from_explicit(roots.clone(), coroots.clone())?)
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct InertialSpec {
    pub levels: Vec<Vec<Vec<String>>>,
}

pub fn inertial_from_spec(spec: &InertialSpec, rank: usize) -> Result<InertialDatum, InputError> {
    let mut levels = Vec::with_capacity(spec.levels.len());
    for level in &spec.levels {
        let mut points = Vec::with_capacity(level.len());
        for point in level {
            if point.len() != rank {
                return Err(InputError::Parse(format!(
                    "inertial point {point:?} does not have rank {rank}"
                )));
            }
            let coords: Vec<TorsionValue> = point
                .iter()
                .map(|c| parse_rational(c).map(TorsionValue::new))
                .collect::<Result<_, _>>()?;
            points.push(coords);
        }
        levels.push(points);
    }
    Ok(InertialDatum::new(rank, levels)?)
}

#[derive(Debug, Deserialize)]
pub struct MonomialSpec {
    #[serde(default)]
    pub qhalf: Option<NumberOrString>,
    #[serde(default)]
    pub zeta: Option<String>,
}

fn monomial_from_spec(spec: &MonomialSpec) -> Result<Monomial, InputError> {
    let half_exp = match &spec.qhalf {
        None => 0,
        Some(NumberOrString::Int(k)) => 2 * k,
        Some(NumberOrString::Text(s)) => {
            let r = parse_rational(s)?;
            let doubled = &r * Rational::from(BigInt::from(2));
            if !doubled.is_integer() {
                return Err(InputError::Parse(format!(
                    "q exponent {s:?} must be a half-integer"
                )));
            }
            i64::try_from(doubled.to_integer())
                .map_err(|_| InputError::Parse(format!("q exponent {s:?} out of range")))?
        }
    };
    let zeta = match &spec.zeta {
        None => TorsionValue::zero(),
        Some(s) => TorsionValue::new(parse_rational(s)?),
    };
    Ok(Monomial::new(half_exp, zeta))
}

fn torus_element_from_specs(
    specs: &[MonomialSpec],
    rank: usize,
) -> Result<TorusElement, InputError> {
    if specs.len() != rank {
        return Err(InputError::Parse(format!(
            "torus element has {} coordinates, expected {rank}",
            specs.len()
        )));
    }
    specs.iter().map(monomial_from_spec).collect()
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ParameterFieldSpec {
    Keyword(String),
    Explicit {
        s: Vec<MonomialSpec>,
        h: Vec<i64>,
    },
}

#[derive(Debug, Default, Deserialize)]
pub struct OverridesSpec {
    pub dim_rho: Option<i64>,
    pub s_sharp: Option<i64>,
    pub c_nu_order: Option<i64>,
    pub dim_rho_nu: Option<i64>,
}

#[derive(Debug, Deserialize)]
pub struct BlockSpec {
    pub datum: DatumSpec,
    pub inertial: Option<InertialSpec>,
    pub q: NumberOrString,
    pub p: Option<u64>,
    pub parameter: Option<ParameterFieldSpec>,
    pub overrides: Option<OverridesSpec>,
}

pub fn block_from_spec(spec: &BlockSpec) -> Result<BlockData, InputError> {
    let datum = datum_from_spec(&spec.datum)?;
    let rank = datum.rank();
    let inertial = match &spec.inertial {
        Some(i) => inertial_from_spec(i, rank)?,
        None => InertialDatum::unramified(rank),
    };
    let q = spec.q.to_rational()?;
    if !q.is_positive() {
        return Err(InputError::Parse(format!(
            "residue cardinality {} must be positive",
            q
        )));
    }
    let parameter = match &spec.parameter {
        None => None,
        Some(ParameterFieldSpec::Keyword(word)) if word == "steinberg" => {
            Some(ParameterChoice::Steinberg)
        }
        Some(ParameterFieldSpec::Keyword(word)) => {
            return Err(InputError::Parse(format!(
                "unknown parameter keyword {word:?} (use \"steinberg\" or give s and h)"
            )))
        }
        Some(ParameterFieldSpec::Explicit { s, h }) => {
            if h.len() != rank {
                return Err(InputError::Parse(format!(
                    "cocharacter h has {} coordinates, expected {rank}",
                    h.len()
                )));
            }
            Some(ParameterChoice::Explicit {
                s: torus_element_from_specs(s, rank)?,
                h: h.clone(),
            })
        }
    };
    let overrides = match &spec.overrides {
        None => EnhancementOverrides::default(),
        Some(o) => EnhancementOverrides {
            dim_rho: o.dim_rho,
            s_sharp: o.s_sharp,
            c_nu_order: o.c_nu_order,
            dim_rho_nu: o.dim_rho_nu,
        },
    };
    let mut block = BlockData::new(datum, inertial, q);
    block.p = spec.p;
    block.parameter = parameter;
    block.overrides = overrides;
    Ok(block)
}

pub fn block_from_json(text: &str) -> Result<BlockData, InputError> {
    let spec: BlockSpec = serde_json::from_str(text)?;
    block_from_spec(&spec)
}

#[derive(Debug, Deserialize)]
pub struct ParameterFileSpec {
    pub datum: DatumSpec,
    pub inertial: Option<InertialSpec>,
    pub s: Vec<MonomialSpec>,
    pub h: Vec<i64>,
    pub q: NumberOrString,
}

pub fn parameter_from_spec(spec: &ParameterFileSpec) -> Result<Parameter, InputError> {
    let datum = datum_from_spec(&spec.datum)?;
    let rank = datum.rank();
    let inertial = match &spec.inertial {
        Some(i) => inertial_from_spec(i, rank)?,
        None => InertialDatum::unramified(rank),
    };
    let s = torus_element_from_specs(&spec.s, rank)?;
    let q = spec.q.to_rational()?;
    Ok(Parameter::new(datum, inertial, s, spec.h.clone(), q)?)
}

pub fn parameter_from_json(text: &str) -> Result<Parameter, InputError> {
    let spec: ParameterFileSpec = serde_json::from_str(text)?;
    parameter_from_spec(&spec)
}
