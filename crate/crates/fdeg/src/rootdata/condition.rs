//! Classification of a datum's irreducible components by Cartan type, and
//! the residue-characteristic condition under which the tame analysis of
//! principal series applies: `p` must avoid a finite set of small primes
//! determined by the types that occur.

use super::{dot, BasedRootDatum, RootDataError};
use num::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub label: String,
    pub kind: char,
    pub rank: usize,
    /// Indices (into the datum's root list) of the roots of this component.
    pub root_indices: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub components: Vec<Component>,
}

impl Classification {
    pub fn label(&self) -> String {
        self.components
            .iter()
            .map(|c| c.label.as_str())
            .collect::<Vec<_>>()
            .join("x")
    }

    /// Union of the primes excluded by each component.
    pub fn excluded_primes(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .components
            .iter()
            .flat_map(|c| excluded_for(c.kind, c.rank))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

fn excluded_for(kind: char, rank: usize) -> Vec<u64> {
    match kind {
        'A' => small_primes_through(rank as u64 + 1),
        'B' | 'C' | 'D' => vec![2],
        'F' => vec![2, 3],
        'G' => vec![2, 3, 5],
        'E' => match rank {
            6 => vec![2, 3, 5],
            _ => vec![2, 3, 5, 7],
        },
        _ => unreachable!("kinds are assigned by classify"),
    }
}

fn small_primes_through(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Identify the isomorphism type of every irreducible component.
pub fn classify(datum: &BasedRootDatum) -> Result<Classification, RootDataError> {
    let simples = datum.simple_indices();
    let s = simples.len();
    // Connected components of the Dynkin diagram.
    let mut comp_of = vec![usize::MAX; s];
    let mut count = 0;
    for start in 0..s {
        if comp_of[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp_of[start] = count;
        while let Some(i) = stack.pop() {
            for j in 0..s {
                if comp_of[j] == usize::MAX
                    && dot(datum.root(simples[i]), datum.coroot(simples[j])) != 0
                {
                    comp_of[j] = count;
                    stack.push(j);
                }
            }
        }
        count += 1;
    }

    // Assign each root to the component carrying its simple support.
    let simple_rows: Vec<Vec<i64>> = simples.iter().map(|&i| datum.root(i).to_vec()).collect();
    let mut roots_by_comp = vec![Vec::new(); count];
    for i in 0..datum.num_roots() {
        let coeffs = super::rational_solve_for(&simple_rows, datum.root(i)).ok_or_else(|| {
            RootDataError::Invalid("root outside the span of the simple roots".into())
        })?;
        let support: Vec<usize> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| comp_of[j])
            .collect();
        let c0 = support[0];
        if support.iter().any(|&c| c != c0) {
            return Err(RootDataError::Invalid(
                "root supported on several components".into(),
            ));
        }
        roots_by_comp[c0].push(i);
    }

    // Squared lengths under the canonical invariant form.
    let norm = |r: &[i64]| -> i64 {
        datum
            .coroots()
            .iter()
            .map(|av| {
                let v = dot(r, av);
                v * v
            })
            .sum()
    };

    let mut components = Vec::new();
    for c in 0..count {
        let idxs = &roots_by_comp[c];
        let n = (0..s).filter(|&j| comp_of[j] == c).count();
        let total = idxs.len();
        let norms: Vec<i64> = idxs.iter().map(|&i| norm(datum.root(i))).collect();
        let max = *norms.iter().max().unwrap();
        let min = *norms.iter().min().unwrap();
        debug_assert_eq!(max % min, 0);
        let ratio = max / min;
        let long = norms.iter().filter(|&&x| x == max).count();
        let (kind, label) = match ratio {
            1 => {
                if total == n * (n + 1) {
                    ('A', format!("A{n}"))
                } else if n >= 4 && total == 2 * n * (n - 1) {
                    ('D', format!("D{n}"))
                } else if (n, total) == (6, 72) || (n, total) == (7, 126) || (n, total) == (8, 240)
                {
                    ('E', format!("E{n}"))
                } else {
                    return Err(RootDataError::Invalid(format!(
                        "unrecognized simply laced component ({n} simples, {total} roots)"
                    )));
                }
            }
            2 => {
                if (n, total) == (4, 48) {
                    ('F', "F4".into())
                } else if n == 2 && total == 8 {
                    ('B', "B2".into())
                } else if total == 2 * n * n && long == 2 * n {
                    ('C', format!("C{n}"))
                } else if total == 2 * n * n && long == 2 * n * (n - 1) {
                    ('B', format!("B{n}"))
                } else {
                    return Err(RootDataError::Invalid(format!(
                        "unrecognized two-length component ({n} simples, {total} roots)"
                    )));
                }
            }
            3 if n == 2 && total == 12 => ('G', "G2".into()),
            _ => {
                return Err(RootDataError::Invalid(format!(
                    "unrecognized length ratio {ratio}"
                )))
            }
        };
        components.push(Component {
            label,
            kind,
            rank: n,
            root_indices: idxs.clone(),
        });
    }
    Ok(Classification { components })
}

/// The outcome of checking a residue characteristic against the types
/// present in the datum.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub components: Vec<String>,
    pub excluded_primes: Vec<u64>,
    pub prime: Option<u64>,
    /// `Some(true)` iff a prime was supplied and is allowed.
    pub satisfied: Option<bool>,
}

pub fn condition_report(
    datum: &BasedRootDatum,
    prime: Option<u64>,
) -> Result<ConditionReport, RootDataError> {
    let cls = classify(datum)?;
    let excluded = cls.excluded_primes();
    if let Some(p) = prime {
        if !is_prime(p) {
            return Err(RootDataError::Invalid(format!(
                "{p} is not a prime number"
            )));
        }
    }
    Ok(ConditionReport {
        components: cls.components.iter().map(|c| c.label.clone()).collect(),
        excluded_primes: excluded.clone(),
        prime,
        satisfied: prime.map(|p| !excluded.contains(&p)),
    })
}

/// Smallest prime admissible for the datum, used when generating random
/// ramification data that must satisfy the residue condition.
pub fn smallest_allowed_prime(datum: &BasedRootDatum) -> Result<u64, RootDataError> {
    let excluded = classify(datum)?.excluded_primes();
    Ok((2..).filter(|&p| is_prime(p)).find(|p| !excluded.contains(p)).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::named::{named_datum, Lattice};

    fn label_of(type_label: &str, lattice: Lattice) -> String {
        let d = named_datum(type_label, &lattice).unwrap();
        classify(&d).unwrap().label()
    }

    #[test]
    fn classification_round_trips_named_types() {
        assert_eq!(label_of("A1", Lattice::SimplyConnected), "A1");
        assert_eq!(label_of("A3", Lattice::Adjoint), "A3");
        assert_eq!(label_of("B3", Lattice::Adjoint), "B3");
        assert_eq!(label_of("C3", Lattice::SimplyConnected), "C3");
        assert_eq!(label_of("D4", Lattice::SimplyConnected), "D4");
        assert_eq!(label_of("G2", Lattice::SimplyConnected), "G2");
        assert_eq!(label_of("F4", Lattice::Adjoint), "F4");
        assert_eq!(label_of("A1xA1", Lattice::SimplyConnected), "A1xA1");
        assert_eq!(label_of("A2xB2", Lattice::Adjoint), "A2xB2");
    }

    #[test]
    fn rank_two_symplectic_and_orthogonal_coincide() {
        // The rank-two symplectic and odd orthogonal systems are abstractly
        // equal; both classify under the orthogonal name.
        assert_eq!(label_of("C2", Lattice::SimplyConnected), "B2");
        assert_eq!(label_of("B2", Lattice::Adjoint), "B2");
    }

    #[test]
    fn excluded_primes_by_type() {
        let d = named_datum("A2", &Lattice::SimplyConnected).unwrap();
        assert_eq!(classify(&d).unwrap().excluded_primes(), vec![2, 3]);
        let d = named_datum("A4", &Lattice::SimplyConnected).unwrap();
        assert_eq!(classify(&d).unwrap().excluded_primes(), vec![2, 3, 5]);
        let d = named_datum("G2", &Lattice::Adjoint).unwrap();
        assert_eq!(classify(&d).unwrap().excluded_primes(), vec![2, 3, 5]);
        let d = named_datum("B2xA1", &Lattice::Adjoint).unwrap();
        assert_eq!(classify(&d).unwrap().excluded_primes(), vec![2]);
        let d = named_datum("F4", &Lattice::SimplyConnected).unwrap();
        assert_eq!(classify(&d).unwrap().excluded_primes(), vec![2, 3]);
    }

    #[test]
    fn condition_reports() {
        let d = named_datum("A2", &Lattice::SimplyConnected).unwrap();
        let r = condition_report(&d, Some(5)).unwrap();
        assert_eq!(r.satisfied, Some(true));
        let r = condition_report(&d, Some(3)).unwrap();
        assert_eq!(r.satisfied, Some(false));
        assert!(condition_report(&d, Some(4)).is_err());
        let r = condition_report(&d, None).unwrap();
        assert_eq!(r.satisfied, None);
        assert_eq!(r.components, vec!["A2".to_string()]);
    }

    #[test]
    fn smallest_allowed_primes() {
        let cases = [
            ("A1", 3u64),
            ("A2", 5),
            ("A3", 5),
            ("B2", 3),
            ("C3", 3),
            ("G2", 7),
        ];
        for (label, p) in cases {
            let d = named_datum(label, &Lattice::SimplyConnected).unwrap();
            assert_eq!(smallest_allowed_prime(&d).unwrap(), p, "for {label}");
        }
    }
}
