//! Scalar domains for exact computation: roots of unity as elements of
//! `Q/Z`, monomials `zeta * q^(k/2)`, and the ring `Q(zeta_N)(sqrt q)` in
//! which gamma factors and volume ratios are evaluated.
//!
//! Elements of `Q(zeta_N)` are stored in the power basis `1, zeta, ...,
//! zeta^(phi(N)-1)` and reduced modulo the N-th cyclotomic polynomial, so
//! representations are canonical for a fixed conductor and equality across
//! conductors is decided by rescaling to the least common one.

use num::{BigInt, BigRational, One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

/// Exact rational numbers with arbitrary-precision integer parts.
pub type Rational = BigRational;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    /// Division by zero, or by a zero divisor of the formal extension
    /// (possible when `sqrt q` already lies in the cyclotomic field).
    #[error("division by zero in the scalar ring")]
    DivisionByZero,
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    assert!(n >= 1, "euler_phi is defined for n >= 1");
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

static CYCLOTOMIC_CACHE: Lazy<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
///
/// Computed by dividing `x^n - 1` by the cyclotomic polynomials of the
/// proper divisors of n; results are memoized process-wide.
pub fn cyclotomic(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic polynomials are indexed by n >= 1");
    if let Some(p) = CYCLOTOMIC_CACHE.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut poly = vec![BigInt::zero(); n as usize + 1];
    poly[0] = -BigInt::one();
    poly[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic(d);
            poly = int_poly_div_exact(&poly, &phi_d);
        }
    }
    let arc = Arc::new(poly);
    CYCLOTOMIC_CACHE
        .lock()
        .unwrap()
        .insert(n, arc.clone());
    arc
}

/// Exact division of integer polynomials by a monic divisor; panics if the
/// division leaves a remainder (which would indicate a bug, not bad input).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for i in (dd..num.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            rem[i - dd + j] -= &c * dc;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

/// Remainder of a rational polynomial modulo a monic integer polynomial.
fn poly_rem(mut num: Vec<Rational>, den: &[BigInt]) -> Vec<Rational> {
    let dd = den.len() - 1;
    while num.len() > dd {
        let c = num.pop().unwrap();
        if c.is_zero() {
            continue;
        }
        let base = num.len() - dd;
        for (j, dc) in den.iter().take(dd).enumerate() {
            num[base + j] -= &c * Rational::from(dc.clone());
        }
    }
    num.resize(dd, Rational::zero());
    num
}

/// A point of `Q/Z`, normalized into `[0, 1)`.  Values of characters of
/// finite order and coordinates of torsion points of dual tori live here.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TorsionValue(Rational);

impl TorsionValue {
    pub fn new(r: Rational) -> Self {
        let f = r.floor();
        TorsionValue(r - f)
    }

    /// Convenience constructor from a literal fraction a/b.
    pub fn of(a: i64, b: i64) -> Self {
        assert!(b != 0);
        TorsionValue::new(Rational::new(BigInt::from(a), BigInt::from(b)))
    }

    pub fn zero() -> Self {
        TorsionValue(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        TorsionValue::new(&self.0 + &other.0)
    }

    pub fn neg(&self) -> Self {
        TorsionValue::new(-&self.0)
    }

    /// Integer multiple, e.g. the value of a character raised to a power.
    pub fn scaled(&self, k: i64) -> Self {
        TorsionValue::new(&self.0 * Rational::from(BigInt::from(k)))
    }

    /// Multiplicative order as a root of unity (the reduced denominator).
    pub fn order(&self) -> u32 {
        u32::try_from(self.0.denom()).expect("torsion order too large")
    }

    pub fn fraction(&self) -> &Rational {
        &self.0
    }
}

impl fmt::Display for TorsionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A monomial `zeta * q^(k/2)` with `zeta` a root of unity recorded
/// additively and the half-integer exponent stored as `k`.  Frobenius
/// eigenvalues on the adjoint representation take this shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    /// Twice the exponent of q.
    pub half_exp: i64,
    /// The root-of-unity factor, as an element of `Q/Z`.
    pub zeta: TorsionValue,
}

impl Monomial {
    pub fn new(half_exp: i64, zeta: TorsionValue) -> Self {
        Monomial { half_exp, zeta }
    }

    pub fn one() -> Self {
        Monomial { half_exp: 0, zeta: TorsionValue::zero() }
    }

    pub fn is_one(&self) -> bool {
        self.half_exp == 0 && self.zeta.is_zero()
    }

    pub fn times(&self, other: &Self) -> Self {
        Monomial {
            half_exp: self.half_exp + other.half_exp,
            zeta: self.zeta.add(&other.zeta),
        }
    }

    pub fn inverse(&self) -> Self {
        Monomial { half_exp: -self.half_exp, zeta: self.zeta.neg() }
    }

    pub fn conj(&self) -> Self {
        Monomial { half_exp: self.half_exp, zeta: self.zeta.neg() }
    }

    pub fn pow(&self, k: i64) -> Self {
        Monomial {
            half_exp: self.half_exp * k,
            zeta: self.zeta.scaled(k),
        }
    }

    /// `|m|^2 = q^e` for a root of unity times `q^(e/2)`; returns `e`.
    pub fn abs_sq_exponent(&self) -> i64 {
        self.half_exp
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.zeta.is_zero() {
            parts.push(format!("zeta({})", self.zeta));
        }
        if self.half_exp != 0 {
            if self.half_exp % 2 == 0 {
                parts.push(format!("q^{}", self.half_exp / 2));
            } else {
                parts.push(format!("q^({}/2)", self.half_exp));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// An element of `Q(zeta_N) + Q(zeta_N) * sqrt(q)` for a fixed positive
/// rational `q`.  When `q` happens to be the square of a rational the
/// formal square root collapses to that rational and the `sqrt` component
/// is kept identically zero.
#[derive(Clone, Debug)]
pub struct Scalar {
    conductor: u32,
    /// Power-basis coordinates of the rational-field component.
    re: Vec<Rational>,
    /// Power-basis coordinates of the `sqrt(q)` component.
    sq: Vec<Rational>,
    q: Rational,
}

/// The exact square root of a nonnegative rational, when it exists.
fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

impl Scalar {
    fn raw(conductor: u32, re: Vec<Rational>, sq: Vec<Rational>, q: Rational) -> Self {
        let phi = euler_phi(conductor) as usize;
        debug_assert_eq!(re.len(), phi);
        debug_assert_eq!(sq.len(), phi);
        let mut s = Scalar { conductor, re, sq, q };
        if let Some(root) = sqrt_exact(&s.q) {
            for i in 0..phi {
                let folded = std::mem::replace(&mut s.sq[i], Rational::zero());
                s.re[i] += folded * &root;
            }
        }
        s
    }

    pub fn zero(q: Rational) -> Self {
        assert!(q.is_positive(), "the residue parameter q must be positive");
        Scalar::raw(1, vec![Rational::zero()], vec![Rational::zero()], q)
    }

    pub fn one(q: Rational) -> Self {
        Scalar::from_rational(Rational::one(), q)
    }

    pub fn from_rational(r: Rational, q: Rational) -> Self {
        assert!(q.is_positive(), "the residue parameter q must be positive");
        Scalar::raw(1, vec![r], vec![Rational::zero()], q)
    }

    pub fn from_int(n: i64, q: Rational) -> Self {
        Scalar::from_rational(Rational::from(BigInt::from(n)), q)
    }

    /// The root of unity `e^(2 pi i t)` for `t` in `Q/Z`.
    pub fn root_of_unity(t: &TorsionValue, q: Rational) -> Self {
        assert!(q.is_positive(), "the residue parameter q must be positive");
        let n = t.order();
        let k = u32::try_from(t.fraction().numer()).expect("normalized numerator");
        let mut buf = vec![Rational::zero(); n as usize];
        buf[k as usize] = Rational::one();
        let re = reduce_to_power_basis(buf, n);
        let phi = euler_phi(n) as usize;
        Scalar::raw(n, re, vec![Rational::zero(); phi], q)
    }

    /// The formal `sqrt(q)` itself.
    pub fn sqrt_q(q: Rational) -> Self {
        assert!(q.is_positive(), "the residue parameter q must be positive");
        Scalar::raw(1, vec![Rational::zero()], vec![Rational::one()], q)
    }

    /// The value of a monomial `zeta * q^(k/2)` as a ring element.
    pub fn from_monomial(m: &Monomial, q: Rational) -> Self {
        let t = m.half_exp.div_euclid(2);
        let r = m.half_exp.rem_euclid(2);
        let mut out = Scalar::root_of_unity(&m.zeta, q.clone());
        out = out.scale(&rational_pow(&q, t));
        if r == 1 {
            out = out.mul(&Scalar::sqrt_q(q));
        }
        out
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.re.iter().all(|c| c.is_zero()) && self.sq.iter().all(|c| c.is_zero())
    }

    /// The value as a plain rational, if it is one.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.sq.iter().all(|c| c.is_zero()) && self.re[1..].iter().all(|c| c.is_zero()) {
            Some(self.re[0].clone())
        } else {
            None
        }
    }

    /// Reexpress at a conductor that the current one divides.
    fn rescaled(&self, n: u32) -> Scalar {
        if n == self.conductor {
            return self.clone();
        }
        assert_eq!(n % self.conductor, 0);
        let step = (n / self.conductor) as usize;
        let lift = |v: &[Rational]| {
            let mut buf = vec![Rational::zero(); n as usize];
            for (i, c) in v.iter().enumerate() {
                buf[i * step] += c;
            }
            reduce_to_power_basis(buf, n)
        };
        Scalar::raw(n, lift(&self.re), lift(&self.sq), self.q.clone())
    }

    fn common(&self, other: &Scalar) -> (Scalar, Scalar) {
        assert_eq!(
            self.q, other.q,
            "scalars from different residue fields cannot be combined"
        );
        let n = num::integer::lcm(self.conductor, other.conductor);
        (self.rescaled(n), other.rescaled(n))
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let (mut a, b) = self.common(other);
        for i in 0..a.re.len() {
            a.re[i] += &b.re[i];
            a.sq[i] += &b.sq[i];
        }
        Scalar::raw(a.conductor, a.re, a.sq, a.q)
    }

    pub fn neg(&self) -> Scalar {
        let re = self.re.iter().map(|c| -c).collect();
        let sq = self.sq.iter().map(|c| -c).collect();
        Scalar::raw(self.conductor, re, sq, self.q.clone())
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    /// Multiplication by a rational, cheaper than building a full scalar.
    pub fn scale(&self, r: &Rational) -> Scalar {
        let re = self.re.iter().map(|c| c * r).collect();
        let sq = self.sq.iter().map(|c| c * r).collect();
        Scalar::raw(self.conductor, re, sq, self.q.clone())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let (a, b) = self.common(other);
        let n = a.conductor;
        // (x + y s)(u + v s) = (xu + q yv) + (xv + yu) s  with  s^2 = q.
        let xu = cyclo_mul(&a.re, &b.re, n);
        let yv = cyclo_mul(&a.sq, &b.sq, n);
        let xv = cyclo_mul(&a.re, &b.sq, n);
        let yu = cyclo_mul(&a.sq, &b.re, n);
        let re: Vec<Rational> = xu
            .into_iter()
            .zip(yv)
            .map(|(p, r)| p + r * &a.q)
            .collect();
        let sq: Vec<Rational> = xv.into_iter().zip(yu).map(|(p, r)| p + r).collect();
        Scalar::raw(n, re, sq, a.q)
    }

    /// Complex conjugation: inverts the roots of unity and fixes `sqrt(q)`.
    pub fn conj(&self) -> Scalar {
        let n = self.conductor;
        let map = |v: &[Rational]| {
            let mut buf = vec![Rational::zero(); n as usize];
            for (i, c) in v.iter().enumerate() {
                buf[(i * (n as usize - 1)) % n as usize] += c;
            }
            reduce_to_power_basis(buf, n)
        };
        Scalar::raw(n, map(&self.re), map(&self.sq), self.q.clone())
    }

    /// `x * conj(x)`, the squared absolute value under any complex
    /// embedding sending `sqrt(q)` to the positive square root.
    pub fn abs_sq(&self) -> Scalar {
        self.mul(&self.conj())
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        // (a + b s)^(-1) = (a - b s) / (a^2 - q b^2); the denominator is a
        // cyclotomic element inverted by the extended Euclidean algorithm.
        let n = self.conductor;
        let a2 = cyclo_mul(&self.re, &self.re, n);
        let b2 = cyclo_mul(&self.sq, &self.sq, n);
        let norm: Vec<Rational> = a2
            .into_iter()
            .zip(b2)
            .map(|(p, r)| p - r * &self.q)
            .collect();
        let ninv = cyclo_inverse(&norm, n).ok_or(ScalarError::DivisionByZero)?;
        let re = cyclo_mul(&self.re, &ninv, n);
        let sq = cyclo_mul(&self.sq, &ninv, n)
            .into_iter()
            .map(|c| -c)
            .collect();
        Ok(Scalar::raw(n, re, sq, self.q.clone()))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one(self.q.clone());
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.q != other.q {
            return false;
        }
        let (a, b) = self.common(other);
        a.re == b.re && a.sq == b.sq
    }
}

impl Eq for Scalar {}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{}", r);
        }
        let poly = |v: &[Rational]| -> String {
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| match i {
                    0 => format!("{}", c),
                    _ if c.is_one() => format!("zeta{}^{}", self.conductor, i),
                    _ => format!("{}*zeta{}^{}", c, self.conductor, i),
                })
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join(" + ")
            }
        };
        let re_zero = self.re.iter().all(|c| c.is_zero());
        let sq_zero = self.sq.iter().all(|c| c.is_zero());
        match (re_zero, sq_zero) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", poly(&self.re)),
            (true, false) => write!(f, "({})*sqrt(q)", poly(&self.sq)),
            (false, false) => write!(f, "{} + ({})*sqrt(q)", poly(&self.re), poly(&self.sq)),
        }
    }
}

/// Integer power of a rational with negative exponents allowed.
pub fn rational_pow(r: &Rational, e: i64) -> Rational {
    let e32 = i32::try_from(e).expect("exponent out of range");
    if e32 >= 0 {
        num::pow::Pow::pow(r, e32 as u32)
    } else {
        num::pow::Pow::pow(&r.recip(), e32.unsigned_abs())
    }
}

/// Reduce a coefficient buffer indexed by exponents `0..len` into the power
/// basis of `Q(zeta_n)`: fold exponents modulo n, then reduce modulo the
/// cyclotomic polynomial.
fn reduce_to_power_basis(buf: Vec<Rational>, n: u32) -> Vec<Rational> {
    let mut folded = vec![Rational::zero(); n as usize];
    for (i, c) in buf.into_iter().enumerate() {
        folded[i % n as usize] += c;
    }
    poly_rem(folded, &cyclotomic(n))
}

/// Product of two power-basis vectors in `Q(zeta_n)`.
fn cyclo_mul(a: &[Rational], b: &[Rational], n: u32) -> Vec<Rational> {
    let mut conv = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            conv[i + j] += ca * cb;
        }
    }
    reduce_to_power_basis(conv, n)
}

/// Inverse in `Q(zeta_n)` via the extended Euclidean algorithm against the
/// cyclotomic polynomial; `None` for the zero element.
fn cyclo_inverse(a: &[Rational], n: u32) -> Option<Vec<Rational>> {
    if a.iter().all(|c| c.is_zero()) {
        return None;
    }
    let phi: Vec<Rational> = cyclotomic(n)
        .iter()
        .map(|c| Rational::from(c.clone()))
        .collect();
    // Invariant: r0 = s0 * a (mod phi), r1 = s1 * a (mod phi).
    let mut r0 = phi;
    let mut r1: Vec<Rational> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0 = vec![];
    let mut s1 = vec![Rational::one()];
    while !r1.is_empty() {
        let (quot, rem) = poly_divmod(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&quot, &s1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
    }
    // The cyclotomic polynomial is irreducible, so the gcd is a nonzero
    // constant and s0 / r0[0] inverts a.
    assert_eq!(r0.len(), 1, "cyclotomic polynomial must be irreducible");
    let c = r0[0].recip();
    let mut inv: Vec<Rational> = s0.iter().map(|x| x * &c).collect();
    inv.resize(euler_phi(n) as usize, Rational::zero());
    Some(poly_rem(inv, &cyclotomic(n)))
}

fn trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let dd = den.len() - 1;
    let lead = den[dd].recip();
    let mut rem: Vec<Rational> = num.to_vec();
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = &rem[i] * &lead;
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dc) in den.iter().enumerate() {
            let sub = &c * dc;
            rem[i - dd + j] -= sub;
        }
    }
    rem.truncate(dd);
    trim(&mut rem);
    (quot, rem)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(&mut out);
    out
}
