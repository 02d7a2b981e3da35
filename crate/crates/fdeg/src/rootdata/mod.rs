//! Based root data with explicit character and cocharacter lattices.
//!
//! A datum stores every root with its coroot in fixed `Z^n` coordinates;
//! the pairing is the dot product.  Duality swaps the two sides.  Beyond
//! construction (by name, by explicit root list, or by restriction to a
//! sublattice) this module provides the subsystem and quotient operations
//! that the ramification and centralizer computations are built on.

pub mod condition;
pub mod named;
pub mod snf;
pub mod weyl;

use crate::scalars::Rational;
use num::{BigInt, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid root datum: {0}")]
    Invalid(String),
    #[error("not a reflection-stable subsystem: {0}")]
    NotClosed(String),
    #[error("enumeration limit of {0} elements exceeded")]
    SizeLimitExceeded(usize),
    #[error("unrecognized type: {0}")]
    UnknownType(String),
}

/// The canonical pairing between character and cocharacter coordinates.
pub fn dot(x: &[i64], v: &[i64]) -> i64 {
    x.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// A root datum with a chosen positive system.  Roots and coroots are
/// parallel lists; `simple` and `positive` index into them.
#[derive(Clone, Debug)]
pub struct BasedRootDatum {
    rank: usize,
    roots: Vec<Vec<i64>>,
    coroots: Vec<Vec<i64>>,
    simple: Vec<usize>,
    positive: Vec<usize>,
    neg_of: Vec<usize>,
    positive_flag: Vec<bool>,
    root_index: HashMap<Vec<i64>, usize>,
    name: String,
}

impl BasedRootDatum {
    /// Generate the full system from a linearly independent simple system
    /// by closing under the simple reflections.
    pub fn from_simple_system(
        rank: usize,
        simples: &[(Vec<i64>, Vec<i64>)],
        name: impl Into<String>,
    ) -> Result<Self, RootDataError> {
        let s = simples.len();
        if s == 0 {
            return Err(RootDataError::Invalid("empty simple system".into()));
        }
        for (a, av) in simples {
            if a.len() != rank || av.len() != rank {
                return Err(RootDataError::Invalid(
                    "root length does not match rank".into(),
                ));
            }
            if dot(a, av) != 2 {
                return Err(RootDataError::Invalid(format!(
                    "root {a:?} does not pair to 2 with its coroot"
                )));
            }
        }
        for i in 0..s {
            for j in 0..s {
                if i == j {
                    continue;
                }
                let p = dot(&simples[i].0, &simples[j].1);
                let q = dot(&simples[j].0, &simples[i].1);
                if p > 0 || q > 0 || p * q >= 4 {
                    return Err(RootDataError::Invalid(format!(
                        "simple pairings ({p}, {q}) are not crystallographic"
                    )));
                }
            }
        }

        // Orbit of the simples under the simple reflections.
        const CLOSURE_LIMIT: usize = 1024;
        let mut roots: Vec<Vec<i64>> = Vec::new();
        let mut coroots: Vec<Vec<i64>> = Vec::new();
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        let mut queue: Vec<usize> = Vec::new();
        for (a, av) in simples {
            if seen.contains_key(a) {
                return Err(RootDataError::Invalid("duplicate simple root".into()));
            }
            seen.insert(a.clone(), roots.len());
            queue.push(roots.len());
            roots.push(a.clone());
            coroots.push(av.clone());
        }
        let mut head = 0;
        while head < queue.len() {
            let idx = queue[head];
            head += 1;
            for (a, av) in simples {
                let b = &roots[idx];
                let bv = &coroots[idx];
                let k = dot(b, av);
                let kv = dot(a, bv);
                let rb: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - k * y).collect();
                let rbv: Vec<i64> = bv.iter().zip(av).map(|(x, y)| x - kv * y).collect();
                match seen.get(&rb) {
                    Some(&j) => {
                        if coroots[j] != rbv {
                            return Err(RootDataError::Invalid(
                                "reflection produced conflicting coroots".into(),
                            ));
                        }
                    }
                    None => {
                        if roots.len() >= CLOSURE_LIMIT {
                            return Err(RootDataError::SizeLimitExceeded(CLOSURE_LIMIT));
                        }
                        seen.insert(rb.clone(), roots.len());
                        queue.push(roots.len());
                        roots.push(rb);
                        coroots.push(rbv);
                    }
                }
            }
        }

        // A functional positive on every simple root splits the system.
        let ones = vec![1i64; s];
        let simple_mat: Vec<Vec<i64>> = simples.iter().map(|(a, _)| a.clone()).collect();
        let v = rational_solve(&simple_mat, &ones).ok_or_else(|| {
            RootDataError::Invalid("simple roots are linearly dependent".into())
        })?;
        let positive_flag: Vec<bool> = roots
            .iter()
            .map(|r| {
                let val: Rational = r
                    .iter()
                    .zip(&v)
                    .map(|(&c, x)| x * Rational::from(BigInt::from(c)))
                    .sum();
                val.is_positive()
            })
            .collect();
        let simple_idx: Vec<usize> = (0..s).collect();
        Self::assemble(rank, roots, coroots, simple_idx, positive_flag, name.into())
    }

    /// Build a datum from the full lists of roots and coroots, choosing
    /// the lexicographic positive system and its indecomposable base.
    pub fn from_explicit(
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
    ) -> Result<Self, RootDataError> {
        if roots.is_empty() || roots.len() != coroots.len() {
            return Err(RootDataError::Invalid(
                "need equally many roots and coroots, at least one each".into(),
            ));
        }
        let rank = roots[0].len();
        for (a, av) in roots.iter().zip(&coroots) {
            if a.len() != rank || av.len() != rank {
                return Err(RootDataError::Invalid("inconsistent vector lengths".into()));
            }
        }
        let positive_flag: Vec<bool> = roots.iter().map(|r| lex_positive(r)).collect();
        // The base is recovered below; classification gives the name.
        let mut datum = Self::assemble(
            rank,
            roots,
            coroots,
            vec![],
            positive_flag,
            String::new(),
        )?;
        datum.name = condition::classify(&datum)
            .map(|c| c.label())
            .unwrap_or_else(|_| "explicit".into());
        Ok(datum)
    }

    /// Common construction path: derives negations, the base (when not
    /// supplied), and runs structural validation.
    fn assemble(
        rank: usize,
        roots: Vec<Vec<i64>>,
        coroots: Vec<Vec<i64>>,
        simple: Vec<usize>,
        positive_flag: Vec<bool>,
        name: String,
    ) -> Result<Self, RootDataError> {
        let mut root_index = HashMap::new();
        for (i, r) in roots.iter().enumerate() {
            if r.iter().all(|&c| c == 0) {
                return Err(RootDataError::Invalid("zero vector listed as root".into()));
            }
            if root_index.insert(r.clone(), i).is_some() {
                return Err(RootDataError::Invalid(format!("duplicate root {r:?}")));
            }
        }
        let mut neg_of = vec![usize::MAX; roots.len()];
        for (i, r) in roots.iter().enumerate() {
            let neg: Vec<i64> = r.iter().map(|&c| -c).collect();
            let j = *root_index.get(&neg).ok_or_else(|| {
                RootDataError::Invalid(format!("missing negative of root {r:?}"))
            })?;
            if coroots[j].iter().zip(&coroots[i]).any(|(a, b)| a + b != 0) {
                return Err(RootDataError::Invalid(
                    "coroot of the negative root is not the negative coroot".into(),
                ));
            }
            neg_of[i] = j;
            // Reducedness: twice a root is never a root.
            let dbl: Vec<i64> = r.iter().map(|&c| 2 * c).collect();
            if root_index.contains_key(&dbl) {
                return Err(RootDataError::Invalid("root system is not reduced".into()));
            }
        }
        for (i, (r, rv)) in roots.iter().zip(&coroots).enumerate() {
            if dot(r, rv) != 2 {
                return Err(RootDataError::Invalid(format!(
                    "root {r:?} pairs to {} with its coroot",
                    dot(r, rv)
                )));
            }
            if positive_flag[i] == positive_flag[neg_of[i]] {
                return Err(RootDataError::Invalid(
                    "positivity must split each pair of opposite roots".into(),
                ));
            }
        }
        // Reflection closure, checked on both sides at once.
        for (a, av) in roots.iter().zip(&coroots) {
            for (i, (b, bv)) in roots.iter().zip(&coroots).enumerate() {
                let k = dot(b, av);
                let kv = dot(a, bv);
                let rb: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - k * y).collect();
                let rbv: Vec<i64> = bv.iter().zip(av).map(|(x, y)| x - kv * y).collect();
                match root_index.get(&rb) {
                    Some(&j) if coroots[j] == rbv => {}
                    _ => {
                        return Err(RootDataError::Invalid(format!(
                            "reflection of root {} leaves the system",
                            i
                        )));
                    }
                }
            }
        }

        let positive: Vec<usize> = (0..roots.len()).filter(|&i| positive_flag[i]).collect();
        let simple = if simple.is_empty() {
            indecomposables(&roots, &positive)
        } else {
            simple
        };
        for &i in &simple {
            if !positive_flag[i] {
                return Err(RootDataError::Invalid("simple root is not positive".into()));
            }
        }
        Ok(BasedRootDatum {
            rank,
            roots,
            coroots,
            simple,
            positive,
            neg_of,
            positive_flag,
            root_index,
            name,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn coroots(&self) -> &[Vec<i64>] {
        &self.coroots
    }

    pub fn root(&self, i: usize) -> &[i64] {
        &self.roots[i]
    }

    pub fn coroot(&self, i: usize) -> &[i64] {
        &self.coroots[i]
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn positive_indices(&self) -> &[usize] {
        &self.positive
    }

    pub fn is_positive(&self, i: usize) -> bool {
        self.positive_flag[i]
    }

    pub fn negation(&self, i: usize) -> usize {
        self.neg_of[i]
    }

    pub fn index_of_root(&self, r: &[i64]) -> Option<usize> {
        self.root_index.get(r).copied()
    }

    /// Rank of the span of the roots; the corank is the dimension of the
    /// central torus.
    pub fn semisimple_rank(&self) -> usize {
        snf::row_rank(&self.roots, self.rank)
    }

    /// Whether the quotient of the character lattice by the root lattice
    /// is torsion-free, i.e. the center of the group is connected.
    pub fn center_is_connected(&self) -> bool {
        snf::quotient_invariants(&self.roots, self.rank)
            .torsion
            .is_empty()
    }

    /// Invariants of the cocharacter lattice modulo the coroot lattice:
    /// the component group data of the center of the dual group.
    pub fn dual_center_invariants(&self) -> snf::QuotientInvariants {
        snf::quotient_invariants(&self.coroots, self.rank)
    }

    /// Swap the two sides.  The coroots of the chosen positive roots form
    /// the positive system of the dual.
    pub fn dual(&self) -> BasedRootDatum {
        let root_index = self
            .coroots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        BasedRootDatum {
            rank: self.rank,
            roots: self.coroots.clone(),
            coroots: self.roots.clone(),
            simple: self.simple.clone(),
            positive: self.positive.clone(),
            neg_of: self.neg_of.clone(),
            positive_flag: self.positive_flag.clone(),
            root_index,
            name: format!("{}^", self.name),
        }
    }

    /// Whether the indexed subset is literally closed: stable under
    /// negation and under addition of roots inside the parent system.
    pub fn is_closed_subsystem(&self, indices: &[usize]) -> bool {
        let set: std::collections::HashSet<usize> = indices.iter().copied().collect();
        for &i in indices {
            if !set.contains(&self.neg_of[i]) {
                return false;
            }
            for &j in indices {
                let sum: Vec<i64> = self.roots[i]
                    .iter()
                    .zip(&self.roots[j])
                    .map(|(a, b)| a + b)
                    .collect();
                if let Some(&k) = self.root_index.get(&sum) {
                    if !set.contains(&k) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Restrict to a subset of the roots, keeping the ambient lattices.
    ///
    /// The subset must be stable under negation and under its own
    /// reflections, and closed on the coroot side: if a sum of two of its
    /// coroots is a coroot of the parent, that root must belong to the
    /// subset.  (Root-side sums may leave the subset; that happens for
    /// genuine centralizer subsystems.)  Returns the sub-datum together
    /// with the map from its root indices back to the parent's.
    pub fn sub_datum(
        &self,
        indices: &[usize],
    ) -> Result<(BasedRootDatum, Vec<usize>), RootDataError> {
        let mut sorted: Vec<usize> = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let set: std::collections::HashSet<usize> = sorted.iter().copied().collect();
        for &i in &sorted {
            if !set.contains(&self.neg_of[i]) {
                return Err(RootDataError::NotClosed(format!(
                    "negative of root {i} is missing"
                )));
            }
            for &j in &sorted {
                let sumv: Vec<i64> = self.coroots[i]
                    .iter()
                    .zip(&self.coroots[j])
                    .map(|(a, b)| a + b)
                    .collect();
                if let Some(k) = self
                    .coroots
                    .iter()
                    .position(|cv| *cv == sumv)
                {
                    if !set.contains(&k) {
                        return Err(RootDataError::NotClosed(format!(
                            "coroot sum of roots {i} and {j} leaves the subset"
                        )));
                    }
                }
                // Reflection stability.
                let k = dot(&self.roots[j], &self.coroots[i]);
                let refl: Vec<i64> = self.roots[j]
                    .iter()
                    .zip(&self.roots[i])
                    .map(|(x, y)| x - k * y)
                    .collect();
                let ridx = self.root_index[&refl];
                if !set.contains(&ridx) {
                    return Err(RootDataError::NotClosed(format!(
                        "reflection of root {j} in root {i} leaves the subset"
                    )));
                }
            }
        }
        let roots: Vec<Vec<i64>> = sorted.iter().map(|&i| self.roots[i].clone()).collect();
        let coroots: Vec<Vec<i64>> = sorted.iter().map(|&i| self.coroots[i].clone()).collect();
        let positive_flag: Vec<bool> = sorted.iter().map(|&i| self.positive_flag[i]).collect();
        let sub = Self::assemble(
            self.rank,
            roots,
            coroots,
            vec![],
            positive_flag,
            format!("{} sub", self.name),
        )?;
        Ok((sub, sorted))
    }

    /// Block-diagonal juxtaposition.
    pub fn product(parts: &[BasedRootDatum]) -> BasedRootDatum {
        let rank: usize = parts.iter().map(|p| p.rank).sum();
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        let mut simple = Vec::new();
        let mut positive_flag = Vec::new();
        let mut offset = 0usize;
        let mut index_base = 0usize;
        for p in parts {
            let embed = |v: &[i64]| {
                let mut out = vec![0i64; rank];
                out[offset..offset + p.rank].copy_from_slice(v);
                out
            };
            for (r, rv) in p.roots.iter().zip(&p.coroots) {
                roots.push(embed(r));
                coroots.push(embed(rv));
            }
            simple.extend(p.simple.iter().map(|&i| i + index_base));
            positive_flag.extend_from_slice(&p.positive_flag);
            offset += p.rank;
            index_base += p.roots.len();
        }
        let name = parts
            .iter()
            .map(|p| p.name.as_str())
            .collect::<Vec<_>>()
            .join("x");
        Self::assemble(rank, roots, coroots, simple, positive_flag, name)
            .expect("product of valid data is valid")
    }

    /// Reexpress the datum on a sublattice of the current character
    /// lattice spanned by the given basis rows.  The sublattice must
    /// contain every root; coroots land in the dual lattice automatically.
    pub fn with_basis(&self, basis: &[Vec<i64>]) -> Result<BasedRootDatum, RootDataError> {
        if basis.len() != self.rank || basis.iter().any(|r| r.len() != self.rank) {
            return Err(RootDataError::Invalid(
                "lattice basis must be square of full rank".into(),
            ));
        }
        let bt = snf::transpose(basis);
        let roots: Vec<Vec<i64>> = self
            .roots
            .iter()
            .map(|r| {
                solve_integer(&bt, r).ok_or_else(|| {
                    RootDataError::Invalid(format!(
                        "root {r:?} does not lie in the chosen lattice"
                    ))
                })
            })
            .collect::<Result<_, _>>()?;
        let coroots: Vec<Vec<i64>> = self
            .coroots
            .iter()
            .map(|rv| snf::mat_vec(basis, rv))
            .collect();
        Self::assemble(
            self.rank,
            roots,
            coroots,
            self.simple.clone(),
            self.positive_flag.clone(),
            format!("{} (custom lattice)", self.name),
        )
    }

    /// The quotient datum obtained by dividing out the subtorus on which
    /// all roots vanish; its dual is the derived group of the dual group.
    pub fn derived_quotient(&self) -> DerivedQuotient {
        let simple_rows: Vec<Vec<i64>> = self.simple.iter().map(|&i| self.roots[i].clone()).collect();
        let s = snf::smith_normal_form(&simple_rows, self.rank);
        let r = s.rank;
        let v_inv = snf::invert_unimodular(&s.v);
        let vt = snf::transpose(&s.v);
        let project_char = |x: &[i64]| -> Vec<i64> {
            let full = snf::mat_vec(&vt, x);
            debug_assert!(full[r..].iter().all(|&c| c == 0));
            full[..r].to_vec()
        };
        let roots: Vec<Vec<i64>> = self.roots.iter().map(|x| project_char(x)).collect();
        let coroots: Vec<Vec<i64>> = self
            .coroots
            .iter()
            .map(|x| snf::mat_vec(&v_inv, x)[..r].to_vec())
            .collect();
        let datum = Self::assemble(
            r,
            roots,
            coroots,
            self.simple.clone(),
            self.positive_flag.clone(),
            format!("{}/center", self.name),
        )
        .expect("quotient of a valid datum is valid");
        DerivedQuotient {
            datum,
            v: s.v,
            v_transpose: vt,
            semisimple_rank: r,
            ambient_rank: self.rank,
        }
    }
}

impl fmt::Display for BasedRootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (rank {}, {} roots)",
            self.name,
            self.rank,
            self.roots.len()
        )
    }
}

/// The coordinate data of the quotient by the central torus.  Characters
/// of the quotient are the ambient characters with vanishing tail in the
/// transformed coordinates; points of the smaller dual torus are ambient
/// points whose tail coordinates are trivial.
#[derive(Clone, Debug)]
pub struct DerivedQuotient {
    pub datum: BasedRootDatum,
    /// Column basis from the Smith decomposition of the simple roots; the
    /// last `ambient_rank - semisimple_rank` columns span the root kernel.
    pub v: Vec<Vec<i64>>,
    v_transpose: Vec<Vec<i64>>,
    pub semisimple_rank: usize,
    pub ambient_rank: usize,
}

impl DerivedQuotient {
    /// Transformed coordinates of a character-side rational vector; the
    /// first `semisimple_rank` entries survive in the quotient, the rest
    /// measure the component along the central torus.
    pub fn transform_rational(&self, x: &[Rational]) -> Vec<Rational> {
        self.v_transpose
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .map(|(&c, val)| val * Rational::from(BigInt::from(c)))
                    .sum()
            })
            .collect()
    }

    /// Same transformation for integer vectors (cocharacter-side data is
    /// instead handled during construction of the quotient datum).
    pub fn transform_integer(&self, x: &[i64]) -> Vec<i64> {
        snf::mat_vec(&self.v_transpose, x)
    }

    /// Rows of the coordinate change: entry `i` of a transformed vector
    /// is the dot product with row `i`.  Rows past `semisimple_rank`
    /// are the central directions.
    pub fn coordinate_functionals(&self) -> &[Vec<i64>] {
        &self.v_transpose
    }
}

/// Positive first nonzero coordinate.
fn lex_positive(v: &[i64]) -> bool {
    v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
}

/// Indices of positive roots that are not sums of two positive roots.
fn indecomposables(roots: &[Vec<i64>], positive: &[usize]) -> Vec<usize> {
    let pos_set: std::collections::HashSet<&Vec<i64>> =
        positive.iter().map(|&i| &roots[i]).collect();
    positive
        .iter()
        .copied()
        .filter(|&i| {
            !positive.iter().any(|&j| {
                let diff: Vec<i64> = roots[i]
                    .iter()
                    .zip(&roots[j])
                    .map(|(a, b)| a - b)
                    .collect();
                j != i && pos_set.contains(&diff)
            })
        })
        .collect()
}

/// Coefficients of `target` in the (independent) spanning rows, if the
/// vector lies in their rational span.
pub(crate) fn rational_solve_for(rows: &[Vec<i64>], target: &[i64]) -> Option<Vec<Rational>> {
    rational_solve(&snf::transpose(rows), target)
}

/// One rational solution of `a * x = b` (rows of `a` independent), if any.
fn rational_solve(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            row.iter()
                .map(|&c| Rational::from(BigInt::from(c)))
                .chain(std::iter::once(Rational::from(BigInt::from(rhs))))
                .collect()
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].recip();
        for x in m[rank].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != rank && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=cols {
                    let delta = &f * &m[rank][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    if m[rank..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// The integer solution of a nonsingular square system, if the unique
/// rational solution is integral (Cramer's rule in `i128`).
fn solve_integer(m: &[Vec<i64>], rhs: &[i64]) -> Option<Vec<i64>> {
    let n = m.len();
    let d = snf::det(m);
    if d == 0 {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    for col in 0..n {
        let replaced: Vec<Vec<i64>> = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| if j == col { rhs[i] } else { x })
                    .collect()
            })
            .collect();
        let dc = snf::det(&replaced);
        if dc % d != 0 {
            return None;
        }
        out.push(i64::try_from(dc / d).expect("solution out of range"));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::named::{named_datum, Lattice};
    use super::*;

    #[test]
    fn explicit_rank_two_symplectic_system() {
        // Long and short roots of the rank-two symplectic system in its
        // standard plane.
        let roots = vec![
            vec![1, -1], vec![-1, 1], vec![1, 1], vec![-1, -1],
            vec![2, 0], vec![-2, 0], vec![0, 2], vec![0, -2],
        ];
        let coroots = vec![
            vec![1, -1], vec![-1, 1], vec![1, 1], vec![-1, -1],
            vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1],
        ];
        let d = BasedRootDatum::from_explicit(roots, coroots).unwrap();
        assert_eq!(d.positive_indices().len(), 4);
        assert_eq!(d.simple_indices().len(), 2);
        let simples: Vec<&[i64]> = d.simple_indices().iter().map(|&i| d.root(i)).collect();
        assert!(simples.contains(&&[1, -1][..]));
        assert!(simples.contains(&&[0, 2][..]));
        assert_eq!(d.semisimple_rank(), 2);
    }

    #[test]
    fn explicit_validation_rejects_broken_systems() {
        // Missing negation.
        let e = BasedRootDatum::from_explicit(vec![vec![2]], vec![vec![1]]);
        assert!(matches!(e, Err(RootDataError::Invalid(_))));
        // Bad pairing.
        let e = BasedRootDatum::from_explicit(
            vec![vec![1], vec![-1]],
            vec![vec![1], vec![-1]],
        );
        assert!(matches!(e, Err(RootDataError::Invalid(_))));
        // Not reflection-closed: two independent reflections generate more.
        let e = BasedRootDatum::from_explicit(
            vec![vec![1, -1], vec![-1, 1], vec![0, 1], vec![0, -1]],
            vec![vec![1, -1], vec![-1, 1], vec![0, 2], vec![0, -2]],
        );
        assert!(matches!(e, Err(RootDataError::Invalid(_))));
    }

    #[test]
    fn duality_is_an_involution() {
        let d = named_datum("B2", &Lattice::Adjoint).unwrap();
        let dd = d.dual().dual();
        assert_eq!(d.roots(), dd.roots());
        assert_eq!(d.coroots(), dd.coroots());
        assert_eq!(d.positive_indices(), dd.positive_indices());
    }

    #[test]
    fn closed_subsystem_examples() {
        let d = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        // The empty set is closed.
        assert!(d.is_closed_subsystem(&[]));
        // The long roots +-2e1, +-2e2 form a closed subsystem.
        let long: Vec<usize> = (0..d.num_roots())
            .filter(|&i| d.root(i).iter().map(|c| c * c).sum::<i64>() == 4)
            .collect();
        assert_eq!(long.len(), 4);
        assert!(d.is_closed_subsystem(&long));
        // A single root without its negative is not.
        let one = d.index_of_root(&[1, -1]).unwrap();
        assert!(!d.is_closed_subsystem(&[one]));
    }

    #[test]
    fn sub_datum_of_short_roots_in_c2() {
        let d = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        // Short roots +-e1+-e2: reflection-stable and coroot-closed, but
        // the root-side sum (e1-e2) + (e1+e2) = 2e1 leaves the subset.
        let short: Vec<usize> = (0..d.num_roots())
            .filter(|&i| d.root(i).iter().map(|c| c * c).sum::<i64>() == 2)
            .collect();
        assert!(!d.is_closed_subsystem(&short));
        let (sub, map) = d.sub_datum(&short).unwrap();
        assert_eq!(sub.num_roots(), 4);
        assert_eq!(sub.simple_indices().len(), 2);
        assert_eq!(map.len(), 4);
        // Giving only the long roots of one length class through e1 fails
        // coroot closure: (2e1)^ + (2e2)^ = e1 + e2 is a coroot of C2.
        let long: Vec<usize> = (0..d.num_roots())
            .filter(|&i| d.root(i).iter().map(|c| c * c).sum::<i64>() == 4)
            .collect();
        assert!(matches!(
            d.sub_datum(&long),
            Err(RootDataError::NotClosed(_))
        ));
    }

    #[test]
    fn product_of_two_lines() {
        let a = named_datum("A1", &Lattice::SimplyConnected).unwrap();
        let p = BasedRootDatum::product(&[a.clone(), a]);
        assert_eq!(p.rank(), 2);
        assert_eq!(p.num_roots(), 4);
        assert_eq!(p.simple_indices().len(), 2);
        assert_eq!(p.semisimple_rank(), 2);
        assert!(p.is_closed_subsystem(&(0..4).collect::<Vec<_>>()));
    }

    #[test]
    fn basis_change_interpolates_between_lattices() {
        // In the simply connected rank-3 special linear datum, the root
        // lattice has index 4; passing to it must reproduce the adjoint
        // coordinates up to the recorded pairing values.
        let sc = named_datum("A3", &Lattice::SimplyConnected).unwrap();
        let basis: Vec<Vec<i64>> = sc
            .simple_indices()
            .iter()
            .map(|&i| sc.root(i).to_vec())
            .collect();
        let ad_like = sc.with_basis(&basis).unwrap();
        assert!(ad_like.center_is_connected());
        let ad = named_datum("A3", &Lattice::Adjoint).unwrap();
        assert_eq!(
            snf::quotient_invariants(ad_like.roots(), 3),
            snf::quotient_invariants(ad.roots(), 3)
        );
        // A lattice missing the roots is rejected.
        let bad = vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]];
        assert!(sc.with_basis(&bad).is_err());
    }

    #[test]
    fn center_connectivity_by_isogeny_type() {
        assert!(named_datum("A2", &Lattice::Adjoint).unwrap().center_is_connected());
        assert!(!named_datum("A2", &Lattice::SimplyConnected)
            .unwrap()
            .center_is_connected());
        // Dual-center invariants mirror this on the other side: the dual
        // of the adjoint rank-one datum is simply connected with center of
        // order two, while the dual of the simply connected one is adjoint.
        let pgl2 = named_datum("A1", &Lattice::Adjoint).unwrap();
        assert_eq!(pgl2.dual_center_invariants().torsion, vec![2]);
        assert_eq!(pgl2.dual_center_invariants().free_rank, 0);
        let sl2 = named_datum("A1", &Lattice::SimplyConnected).unwrap();
        assert!(sl2.dual_center_invariants().is_trivial());
    }

    #[test]
    fn derived_quotient_of_gl2_like_datum() {
        // Rank-two datum with a one-dimensional central torus: roots
        // +-(e1 - e2) with coroots +-(e1 - e2).
        let d = BasedRootDatum::from_explicit(
            vec![vec![1, -1], vec![-1, 1]],
            vec![vec![1, -1], vec![-1, 1]],
        )
        .unwrap();
        let q = d.derived_quotient();
        assert_eq!(q.semisimple_rank, 1);
        assert_eq!(q.datum.rank(), 1);
        // The quotient is the projective line datum: the coroot becomes
        // primitive and the root twice a generator, or vice versa
        // depending on orientation; the pairing stays 2.
        let r = &q.datum.roots()[0];
        let rv = &q.datum.coroots()[0];
        assert_eq!(dot(r, rv), 2);
        assert_eq!((r[0] * rv[0]).abs(), 2);
        // Coroot is primitive mod center: the dual center is connected.
        assert!(q
            .datum
            .dual_center_invariants()
            .torsion
            .iter()
            .all(|&t| t == 2));
    }

    #[test]
    fn lex_positive_system_is_consistent() {
        let d = named_datum("G2", &Lattice::SimplyConnected).unwrap();
        for &i in d.positive_indices() {
            assert!(!d.is_positive(d.negation(i)));
        }
        assert_eq!(d.positive_indices().len(), 6);
    }
}
