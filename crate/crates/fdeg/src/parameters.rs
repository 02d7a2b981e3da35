//! Langlands parameters for principal series: an inertial datum, a
//! Frobenius torus part with monomial coordinates, and a monodromy
//! cocharacter.  The adjoint action of such a parameter decomposes into
//! ramified root lines and an unramified part built from strings; the
//! local factors at the origin are computed exactly from that data.

use crate::ramification::{conductors, ConductorData, InertialDatum};
use crate::rootdata::{dot, BasedRootDatum};
use crate::scalars::{rational_pow, Monomial, Rational, Scalar, ScalarError, TorsionValue};
use num::{BigInt, Signed};
use std::collections::BTreeMap;

/// A point of the dual torus whose coordinates are roots of unity times
/// half-integer powers of q, in character-side coordinates.
pub type TorusElement = Vec<Monomial>;

pub const POLE_AT_ORIGIN: &str = "L(0, adjoint)";
pub const POLE_AT_DUAL_ONE: &str = "L(1, dual adjoint)";

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum GammaError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("weight multiset does not decompose into strings: {0}")]
    InconsistentStrings(String),
    #[error("pole of the local factor at {location}")]
    PoleFlag { location: String },
    #[error("evaluation point must be a half-integer, got {0}")]
    NonHalfInteger(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Value of a cocharacter on a monomial torus point.
pub fn evaluate_monomial(point: &[Monomial], cochar: &[i64]) -> Monomial {
    point
        .iter()
        .zip(cochar)
        .fold(Monomial::one(), |acc, (m, &c)| acc.times(&m.pow(c)))
}

/// The sum of the positive roots: the cocharacter of the dual-side
/// principal arc, pairing to 2 with every simple coroot.
pub fn principal_cocharacter(datum: &BasedRootDatum) -> Vec<i64> {
    let mut out = vec![0i64; datum.rank()];
    for &i in datum.positive_indices() {
        for (o, &c) in out.iter_mut().zip(datum.root(i)) {
            *o += c;
        }
    }
    out
}

/// Decompose a multiset of (Frobenius class, weight) pairs into strings:
/// each string of weight `m` accounts for one pair at every weight
/// `m, m-2, ..., -m` in its class.
pub fn peel_strings(pairs: &[(Monomial, i64)]) -> Result<Vec<(Monomial, u32)>, GammaError> {
    let mut by_class: BTreeMap<Monomial, BTreeMap<i64, usize>> = BTreeMap::new();
    for (class, w) in pairs {
        *by_class
            .entry(class.clone())
            .or_default()
            .entry(*w)
            .or_default() += 1;
    }
    let mut strands = Vec::new();
    for (class, mut weights) in by_class {
        while let Some((&top, _)) = weights.iter().next_back() {
            if top < 0 {
                return Err(GammaError::InconsistentStrings(format!(
                    "negative weight {top} left over in class {class}"
                )));
            }
            let mut k = top;
            while k >= -top {
                match weights.get_mut(&k) {
                    Some(c) if *c > 0 => {
                        *c -= 1;
                        if *c == 0 {
                            weights.remove(&k);
                        }
                    }
                    _ => {
                        return Err(GammaError::InconsistentStrings(format!(
                            "missing weight {k} for a string of weight {top} in class {class}"
                        )));
                    }
                }
                k -= 2;
            }
            strands.push((class.clone(), top as u32));
        }
    }
    strands.sort();
    Ok(strands)
}

/// The adjoint representation of a parameter, split along the inertial
/// conductors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointRep {
    /// Ramified root lines with their Frobenius eigenvalues (no inertial
    /// invariants; they feed the conductor and root number only).
    pub ramified: Vec<(usize, Monomial)>,
    /// Frobenius data on the inertia-fixed part before string peeling:
    /// `(class, weight)` for every unramified root plus one zero pair per
    /// torus dimension.
    pub unramified_pairs: Vec<(Monomial, i64)>,
    /// The strings, sorted by class then weight.
    pub strands: Vec<(Monomial, u32)>,
}

/// A principal-series parameter over a fixed datum.
#[derive(Clone, Debug)]
pub struct Parameter {
    datum: BasedRootDatum,
    inertial: InertialDatum,
    s: TorusElement,
    h: Vec<i64>,
    q: Rational,
    cond: ConductorData,
    adjoint: AdjointRep,
}

impl Parameter {
    pub fn new(
        datum: BasedRootDatum,
        inertial: InertialDatum,
        s: TorusElement,
        h: Vec<i64>,
        q: Rational,
    ) -> Result<Self, GammaError> {
        if s.len() != datum.rank() || h.len() != datum.rank() {
            return Err(GammaError::InvalidParameter(format!(
                "torus part and cocharacter must have length {}",
                datum.rank()
            )));
        }
        if inertial.rank() != datum.rank() {
            return Err(GammaError::InvalidParameter(
                "inertial datum rank does not match".into(),
            ));
        }
        if !q.is_positive() {
            return Err(GammaError::InvalidParameter(
                "residue cardinality must be positive".into(),
            ));
        }
        let cond = conductors(&datum, &inertial);
        let mut ramified = Vec::new();
        let mut unramified_pairs = Vec::new();
        for i in 0..datum.num_roots() {
            let av = datum.coroot(i);
            let class = evaluate_monomial(&s, av);
            let weight = dot(&h, av);
            if cond.values[i] != 0 {
                ramified.push((i, class.times(&Monomial::new(weight, TorsionValue::zero()))));
            } else {
                unramified_pairs.push((class, weight));
            }
        }
        for _ in 0..datum.rank() {
            unramified_pairs.push((Monomial::one(), 0));
        }
        let strands = peel_strings(&unramified_pairs)?;
        let adjoint = AdjointRep { ramified, unramified_pairs, strands };
        Ok(Parameter { datum, inertial, s, h, q, cond, adjoint })
    }

    pub fn datum(&self) -> &BasedRootDatum {
        &self.datum
    }

    pub fn inertial(&self) -> &InertialDatum {
        &self.inertial
    }

    pub fn frobenius_torus(&self) -> &[Monomial] {
        &self.s
    }

    pub fn monodromy_cocharacter(&self) -> &[i64] {
        &self.h
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn conductor_data(&self) -> &ConductorData {
        &self.cond
    }

    pub fn adjoint(&self) -> &AdjointRep {
        &self.adjoint
    }

    pub fn strands(&self) -> &[(Monomial, u32)] {
        &self.adjoint.strands
    }

    /// Number of trivial strings: the dimension of the centralizer of the
    /// parameter in the dual group.
    pub fn invariant_line_count(&self) -> usize {
        self.adjoint
            .strands
            .iter()
            .filter(|(class, w)| *w == 0 && class.is_one())
            .count()
    }

    /// Discrete means the centralizer is no bigger than the unavoidable
    /// central torus of the dual group.
    pub fn is_discrete(&self) -> bool {
        let central = self.datum.rank() - self.datum.semisimple_rank();
        self.invariant_line_count() == central
    }

    /// The gamma value of the inertia-fixed part at the origin,
    /// epsilon-term included.  For inertially unramified parameters this
    /// is the full adjoint gamma value; in general the ramified root
    /// number (a scalar of known modulus but unspecified phase) still
    /// multiplies it.
    pub fn gamma_unramified_part(&self) -> Result<Scalar, GammaError> {
        let mut num = Scalar::one(self.q.clone());
        let mut den = Scalar::one(self.q.clone());
        let mut dets = Scalar::one(self.q.clone());
        for (class, w) in &self.adjoint.strands {
            let (x, y, det) = strand_local_data(class, *w);
            num = num.mul(&Scalar::one(self.q.clone()).sub(&Scalar::from_monomial(&x, self.q.clone())));
            den = den.mul(&Scalar::one(self.q.clone()).sub(&Scalar::from_monomial(&y, self.q.clone())));
            dets = dets.mul(&Scalar::from_monomial(&det, self.q.clone()));
        }
        if den.is_zero() {
            return Err(GammaError::PoleFlag { location: POLE_AT_DUAL_ONE.into() });
        }
        if num.is_zero() {
            return Err(GammaError::PoleFlag { location: POLE_AT_ORIGIN.into() });
        }
        Ok(dets.mul(&num).mul(&den.inv()?))
    }

    /// The squared absolute value of the full adjoint gamma value at the
    /// origin: the ramified part contributes the modulus of its root
    /// number, `q` to the Artin conductor.
    pub fn gamma_abs_sq(&self) -> Result<Scalar, GammaError> {
        let mut num = Scalar::one(self.q.clone());
        let mut den = Scalar::one(self.q.clone());
        let mut det_exp: i64 = 0;
        for (class, w) in &self.adjoint.strands {
            let (x, y, det) = strand_local_data(class, *w);
            num = num.mul(
                &Scalar::one(self.q.clone())
                    .sub(&Scalar::from_monomial(&x, self.q.clone()))
                    .abs_sq(),
            );
            den = den.mul(
                &Scalar::one(self.q.clone())
                    .sub(&Scalar::from_monomial(&y, self.q.clone()))
                    .abs_sq(),
            );
            det_exp += det.abs_sq_exponent();
        }
        if den.is_zero() {
            return Err(GammaError::PoleFlag { location: POLE_AT_DUAL_ONE.into() });
        }
        if num.is_zero() {
            return Err(GammaError::PoleFlag { location: POLE_AT_ORIGIN.into() });
        }
        let power = rational_pow(&self.q, det_exp + self.cond.artin_exponent() as i64);
        Ok(Scalar::from_rational(power, self.q.clone())
            .mul(&num)
            .mul(&den.inv()?))
    }
}

/// Local data of one string of weight `w` in class `mu`: the Frobenius
/// eigenvalue on its monodromy-invariant line (`x`), the same for the
/// dual string shifted by one (`y`), and the determinant of minus
/// Frobenius on the complementary quotient.
fn strand_local_data(mu: &Monomial, w: u32) -> (Monomial, Monomial, Monomial) {
    let m = w as i64;
    let x = mu.times(&Monomial::new(-m, TorsionValue::zero()));
    let y = mu
        .inverse()
        .times(&Monomial::new(-m - 2, TorsionValue::zero()));
    let det = mu
        .pow(m)
        .times(&Monomial::new(m, TorsionValue::of(m, 2)));
    (x, y, det)
}

/// The local L-value of a strand multiset at a half-integer point,
/// optionally for the dual representation.
pub fn l_value(
    strands: &[(Monomial, u32)],
    s0: &Rational,
    dualize: bool,
    q: &Rational,
) -> Result<Scalar, GammaError> {
    let doubled = s0 * Rational::from(BigInt::from(2));
    if !doubled.is_integer() {
        return Err(GammaError::NonHalfInteger(s0.to_string()));
    }
    let shift = i64::try_from(doubled.to_integer())
        .map_err(|_| GammaError::NonHalfInteger(s0.to_string()))?;
    let mut prod = Scalar::one(q.clone());
    for (class, w) in strands {
        let base = if dualize { class.inverse() } else { class.clone() };
        let x = base.times(&Monomial::new(-(*w as i64) - shift, TorsionValue::zero()));
        let factor = Scalar::one(q.clone()).sub(&Scalar::from_monomial(&x, q.clone()));
        if factor.is_zero() {
            return Err(GammaError::PoleFlag {
                location: format!(
                    "L({s0}, {})",
                    if dualize { "dual adjoint" } else { "adjoint" }
                ),
            });
        }
        prod = prod.mul(&factor);
    }
    Ok(prod.inv()?)
}

/// Whether the monodromy cocharacter is principal for the given
/// subsystem, i.e. equals the sum of its positive roots.
pub fn is_principal_for(h: &[i64], subsystem: &BasedRootDatum) -> bool {
    h == principal_cocharacter(subsystem).as_slice()
}
