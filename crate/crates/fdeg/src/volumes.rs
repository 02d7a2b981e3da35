//! Volumes of the compact open subgroups entering the formal-degree
//! normalization.  Every quantity here is a monomial `q^a * (q-1)^b`, so
//! it is carried symbolically and only specialized to a rational when a
//! residue cardinality is supplied.

use crate::ramification::{ConductorData, FiltrationFunction, Subsystem};
use crate::rootdata::BasedRootDatum;
use crate::scalars::{rational_pow, Rational, Scalar};
use num::{pow::Pow, BigInt, One};
use std::fmt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum VolumeError {
    #[error("volume formulas disagree: {0}")]
    FormulaMismatch(String),
}

/// A value of the form `q^a * (q-1)^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QPower {
    pub q_exp: i64,
    pub qm1_exp: u32,
}

impl QPower {
    pub fn one() -> Self {
        QPower { q_exp: 0, qm1_exp: 0 }
    }

    pub fn q_to(e: i64) -> Self {
        QPower { q_exp: e, qm1_exp: 0 }
    }

    pub fn times(&self, other: &QPower) -> QPower {
        QPower {
            q_exp: self.q_exp + other.q_exp,
            qm1_exp: self.qm1_exp + other.qm1_exp,
        }
    }

    /// Quotient, defined when the `(q-1)` exponent does not go negative.
    pub fn divided_by(&self, other: &QPower) -> Option<QPower> {
        Some(QPower {
            q_exp: self.q_exp - other.q_exp,
            qm1_exp: self.qm1_exp.checked_sub(other.qm1_exp)?,
        })
    }

    /// Exact value at a given residue cardinality.
    pub fn to_scalar(&self, q: &Rational) -> Scalar {
        let qm1 = q - Rational::one();
        let value = rational_pow(q, self.q_exp) * Pow::pow(&qm1, self.qm1_exp as usize);
        Scalar::from_rational(value, q.clone())
    }

    pub fn to_rational(&self, q: &Rational) -> Rational {
        let qm1 = q - Rational::one();
        rational_pow(q, self.q_exp) * Pow::pow(&qm1, self.qm1_exp as usize)
    }
}

impl fmt::Display for QPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.q_exp != 0 {
            parts.push(format!("q^{}", self.q_exp));
        }
        match self.qm1_exp {
            0 => {}
            1 => parts.push("(q-1)".to_string()),
            e => parts.push(format!("(q-1)^{e}")),
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Volume of the Iwahori subgroup of a group with the given rank and
/// number of positive roots, for the Haar measure giving a hyperspecial
/// maximal compact volume one: `q^-(l + N) * (q-1)^l`.
pub fn iwahori_volume(rank: usize, positive_count: usize) -> QPower {
    QPower {
        q_exp: -((rank + positive_count) as i64),
        qm1_exp: rank as u32,
    }
}

/// All the volume data attached to one character's ramification pattern.
#[derive(Clone, Debug)]
pub struct VolumeReport {
    /// Iwahori volume of the ambient group.
    pub iwahori: QPower,
    /// Iwahori volume of the unramified-subsystem group on the same torus.
    pub unramified_iwahori: QPower,
    /// Volume of the character's compact open subgroup.
    pub compact_open: QPower,
    /// `log_q` of its index in the Iwahori subgroup.
    pub index_exponent: u64,
    /// `unramified_iwahori / compact_open`.
    pub ratio: QPower,
    /// Artin conductor of the ramified part of the adjoint representation.
    pub artin_exponent: u64,
    /// Absolute value of the corresponding root number, `q^(artin/2)`.
    pub epsilon_abs: QPower,
}

/// Assemble the volume report and run the internal cross-checks: the
/// subgroup index computed from conductors must match the one computed
/// from the filtration jumps, and the volume ratio must equal the
/// absolute value of the ramified root number.
pub fn volume_report(
    datum: &BasedRootDatum,
    subsystem: Option<&Subsystem>,
    cond: &ConductorData,
    filtration: &FiltrationFunction,
) -> Result<VolumeReport, VolumeError> {
    let rank = datum.rank();
    let iwahori = iwahori_volume(rank, datum.positive_indices().len());
    let sub_positive = subsystem
        .map(|s| s.datum.positive_indices().len())
        .unwrap_or(0);
    let unramified_iwahori = iwahori_volume(rank, sub_positive);

    let index_exponent = cond.sum_over_positive(datum);
    let filtration_total: i64 = filtration.values.iter().sum();
    if filtration_total != index_exponent as i64 {
        return Err(VolumeError::FormulaMismatch(format!(
            "index exponent {index_exponent} from conductors, {filtration_total} from filtration jumps"
        )));
    }
    let compact_open = iwahori.times(&QPower::q_to(-(index_exponent as i64)));

    let ram_pos = cond.ramified_positive_count(datum) as i64;
    let ratio = unramified_iwahori
        .divided_by(&compact_open)
        .expect("torus factors cancel");
    if ratio.q_exp != ram_pos + index_exponent as i64 || ratio.qm1_exp != 0 {
        return Err(VolumeError::FormulaMismatch(format!(
            "volume ratio {ratio} is not q^(ramified + index) = q^{}",
            ram_pos + index_exponent as i64
        )));
    }

    let artin_exponent = cond.artin_exponent();
    if artin_exponent % 2 != 0 {
        return Err(VolumeError::FormulaMismatch(format!(
            "odd adjoint Artin conductor {artin_exponent}"
        )));
    }
    let epsilon_abs = QPower::q_to((artin_exponent / 2) as i64);
    Ok(VolumeReport {
        iwahori,
        unramified_iwahori,
        compact_open,
        index_exponent,
        ratio,
        artin_exponent,
        epsilon_abs,
    })
}

impl VolumeReport {
    /// The volume identity: the Iwahori-volume ratio equals the absolute
    /// value of the ramified root number.
    pub fn ratio_matches_epsilon(&self) -> bool {
        self.ratio == self.epsilon_abs
    }

    /// Specialized summary values at a concrete residue cardinality.
    pub fn ratio_value(&self, q: &Rational) -> Rational {
        self.ratio.to_rational(q)
    }
}

/// Convenience: `q` as a `Rational` from an integer.
pub fn q_of(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}
