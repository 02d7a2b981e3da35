//! Weyl groups as explicit matrix groups acting on the character lattice.
//!
//! Elements are enumerated once by breadth-first closure of the simple
//! reflections, which yields a reduced word for each element as a side
//! effect.  The same matrices drive every action in the crate: on
//! characters, on rational and torsion points of the dual torus, and on
//! monomial coordinates of Frobenius-twisted points.

use super::{snf, BasedRootDatum, RootDataError};
use crate::scalars::{Monomial, TorsionValue};
use std::collections::{HashMap, HashSet};

/// Default cap on the group order during enumeration.
pub const DEFAULT_WEYL_LIMIT: usize = 51_840;

#[derive(Clone, Debug)]
pub struct WeylElement {
    /// Matrix of the action on character coordinates (column convention).
    pub matrix: Vec<Vec<i64>>,
    /// A reduced word in the simple reflections, leftmost applied last.
    pub word: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    rank: usize,
    elements: Vec<WeylElement>,
    index: HashMap<Vec<i64>, usize>,
    generators: Vec<usize>,
}

fn flatten(m: &[Vec<i64>]) -> Vec<i64> {
    m.iter().flatten().copied().collect()
}

impl WeylGroup {
    /// Enumerate the full group of the datum, failing once `limit`
    /// elements have been found.
    pub fn enumerate(datum: &BasedRootDatum, limit: usize) -> Result<Self, RootDataError> {
        let rank = datum.rank();
        let gens: Vec<Vec<Vec<i64>>> = datum
            .simple_indices()
            .iter()
            .map(|&s| {
                let a = datum.root(s);
                let av = datum.coroot(s);
                (0..rank)
                    .map(|i| {
                        (0..rank)
                            .map(|j| i64::from(i == j) - a[i] * av[j])
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let id: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut elements = vec![WeylElement { matrix: id.clone(), word: vec![] }];
        let mut index = HashMap::from([(flatten(&id), 0usize)]);
        let mut head = 0;
        while head < elements.len() {
            let (matrix, word) = {
                let e = &elements[head];
                (e.matrix.clone(), e.word.clone())
            };
            head += 1;
            for (g, gm) in gens.iter().enumerate() {
                let product = snf::mat_mul(gm, &matrix);
                let key = flatten(&product);
                if !index.contains_key(&key) {
                    if elements.len() >= limit {
                        return Err(RootDataError::SizeLimitExceeded(limit));
                    }
                    let mut w = vec![g as u8];
                    w.extend_from_slice(&word);
                    index.insert(key, elements.len());
                    elements.push(WeylElement { matrix: product, word: w });
                }
            }
        }
        let generators = gens.iter().map(|gm| index[&flatten(gm)]).collect();
        Ok(WeylGroup { rank, elements, index, generators })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn element(&self, i: usize) -> &WeylElement {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn index_of(&self, matrix: &[Vec<i64>]) -> Option<usize> {
        self.index.get(&flatten(matrix)).copied()
    }

    pub fn multiply(&self, i: usize, j: usize) -> usize {
        let m = snf::mat_mul(&self.elements[i].matrix, &self.elements[j].matrix);
        self.index[&flatten(&m)]
    }

    pub fn inverse(&self, i: usize) -> usize {
        let inv = snf::invert_unimodular(&self.elements[i].matrix);
        self.index[&flatten(&inv)]
    }

    pub fn act_vec(&self, i: usize, v: &[i64]) -> Vec<i64> {
        snf::mat_vec(&self.elements[i].matrix, v)
    }

    /// Action on a torsion point of the dual torus given in character-side
    /// coordinates.
    pub fn act_torsion(&self, i: usize, point: &[TorsionValue]) -> Vec<TorsionValue> {
        self.elements[i]
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(point)
                    .fold(TorsionValue::zero(), |acc, (&c, t)| acc.add(&t.scaled(c)))
            })
            .collect()
    }

    /// Action on a dual-torus point with monomial coordinates.
    pub fn act_monomial(&self, i: usize, point: &[Monomial]) -> Vec<Monomial> {
        self.elements[i]
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(point)
                    .fold(Monomial::one(), |acc, (&c, m)| acc.times(&m.pow(c)))
            })
            .collect()
    }

    /// Whether the element maps the given set of root vectors onto itself.
    pub fn permutes_set(&self, i: usize, roots: &[Vec<i64>]) -> bool {
        let set: HashSet<&Vec<i64>> = roots.iter().collect();
        roots.iter().all(|r| set.contains(&self.act_vec(i, r)))
    }

    /// Element indices of the subgroup generated by the given elements.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen: HashSet<usize> = HashSet::from([self.identity()]);
        let mut queue = vec![self.identity()];
        let mut head = 0;
        while head < queue.len() {
            let w = queue[head];
            head += 1;
            for &g in gens {
                let x = self.multiply(g, w);
                if seen.insert(x) {
                    queue.push(x);
                }
            }
        }
        let mut out: Vec<usize> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Elements fixing every listed torsion point.
    pub fn pointwise_stabilizer_torsion(&self, points: &[Vec<TorsionValue>]) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| points.iter().all(|p| &self.act_torsion(i, p) == p))
            .collect()
    }

    /// Elements fixing every listed monomial point.
    pub fn pointwise_stabilizer_monomial(&self, points: &[Vec<Monomial>]) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| points.iter().all(|p| &self.act_monomial(i, p) == p))
            .collect()
    }

    /// The reflection in the given root of the datum, as an element index.
    pub fn reflection(&self, datum: &BasedRootDatum, root_idx: usize) -> usize {
        let a = datum.root(root_idx);
        let av = datum.coroot(root_idx);
        let m: Vec<Vec<i64>> = (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| i64::from(i == j) - a[i] * av[j])
                    .collect()
            })
            .collect();
        self.index[&flatten(&m)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::named::{named_datum, Lattice};

    fn group(label: &str, lattice: Lattice) -> (BasedRootDatum, WeylGroup) {
        let d = named_datum(label, &lattice).unwrap();
        let w = WeylGroup::enumerate(&d, DEFAULT_WEYL_LIMIT).unwrap();
        (d, w)
    }

    #[test]
    fn orders_of_small_groups() {
        for (label, order) in [
            ("A1", 2usize),
            ("A2", 6),
            ("A3", 24),
            ("C2", 8),
            ("B3", 48),
            ("G2", 12),
            ("A1xA1", 4),
            ("D4", 192),
            ("F4", 1152),
        ] {
            let (_, w) = group(label, Lattice::SimplyConnected);
            assert_eq!(w.order(), order, "group order for {label}");
        }
    }

    #[test]
    fn enumeration_respects_the_limit() {
        let d = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        assert!(matches!(
            WeylGroup::enumerate(&d, 5),
            Err(RootDataError::SizeLimitExceeded(5))
        ));
    }

    #[test]
    fn words_are_reduced_and_longest_element_exists(){
        let (_, w) = group("A2", Lattice::Adjoint);
        let max = (0..w.order()).map(|i| w.element(i).word.len()).max();
        assert_eq!(max, Some(3));
        // Word lengths count each length class correctly for A2:
        // 1 identity, 2 simple reflections, 2 of length two, 1 of length 3.
        let mut counts = [0usize; 4];
        for i in 0..w.order() {
            counts[w.element(i).word.len()] += 1;
        }
        assert_eq!(counts, [1, 2, 2, 1]);
    }

    #[test]
    fn group_axioms_spot_check() {
        let (_, w) = group("C2", Lattice::SimplyConnected);
        for i in 0..w.order() {
            let inv = w.inverse(i);
            assert_eq!(w.multiply(i, inv), w.identity());
            assert_eq!(w.multiply(inv, i), w.identity());
        }
    }

    #[test]
    fn action_permutes_roots_and_preserves_length_classes() {
        let (d, w) = group("C2", Lattice::SimplyConnected);
        let long: Vec<Vec<i64>> = d
            .roots()
            .iter()
            .filter(|r| r.iter().map(|c| c * c).sum::<i64>() == 4)
            .cloned()
            .collect();
        let all: Vec<Vec<i64>> = d.roots().to_vec();
        for i in 0..w.order() {
            assert!(w.permutes_set(i, &all));
            assert!(w.permutes_set(i, &long));
        }
    }

    #[test]
    fn torsion_action_through_a_reflection() {
        let (d, w) = group("C2", Lattice::SimplyConnected);
        // Reflection in 2e1 negates the first coordinate.
        let r = d.index_of_root(&[2, 0]).unwrap();
        let s = w.reflection(&d, r);
        let p = vec![TorsionValue::of(1, 4), TorsionValue::of(1, 3)];
        let moved = w.act_torsion(s, &p);
        assert_eq!(moved, vec![TorsionValue::of(3, 4), TorsionValue::of(1, 3)]);
    }

    #[test]
    fn monomial_action_through_a_reflection() {
        let (d, w) = group("C2", Lattice::SimplyConnected);
        let r = d.index_of_root(&[1, -1]).unwrap();
        let s = w.reflection(&d, r);
        // Reflection in e1 - e2 swaps the two coordinates.
        let p = vec![
            Monomial::new(1, TorsionValue::zero()),
            Monomial::new(0, TorsionValue::of(1, 2)),
        ];
        let moved = w.act_monomial(s, &p);
        assert_eq!(moved, vec![p[1].clone(), p[0].clone()]);
    }

    #[test]
    fn stabilizers_and_subgroups() {
        let (d, w) = group("C2", Lattice::SimplyConnected);
        // The two-torsion point (1/2, 0) is fixed exactly by the sign
        // changes of the coordinates, the subgroup of order 4 generated by
        // the reflections in the two long roots.
        let p = vec![TorsionValue::of(1, 2), TorsionValue::zero()];
        let stab = w.pointwise_stabilizer_torsion(&[p]);
        assert_eq!(stab.len(), 4);
        let r1 = w.reflection(&d, d.index_of_root(&[2, 0]).unwrap());
        let r2 = w.reflection(&d, d.index_of_root(&[0, 2]).unwrap());
        assert!(stab.contains(&r1) && stab.contains(&r2));
        let closure = w.subgroup_closure(&[r1, r2]);
        assert_eq!(closure, stab);
        // A generic point is fixed by the identity alone.
        let generic = vec![TorsionValue::of(1, 5), TorsionValue::of(1, 7)];
        assert_eq!(w.pointwise_stabilizer_torsion(&[generic]), vec![0]);
    }
}
