//! Construction of root data by Cartan type and isogeny lattice.
//!
//! Two realizations are used.  Most types are built straight from the
//! Cartan matrix: simply connected data put the weights on the standard
//! basis (each simple root is a row of the matrix, each simple coroot a
//! standard basis vector), adjoint data put the roots there instead.  The
//! two families whose computations are traditionally read off in the
//! "orthogonal plane" coordinates — simply connected symplectic data and
//! adjoint odd orthogonal data — are pinned to those coordinates so that
//! roots look like `e_i - e_j` or `2 e_n` on the page.

use super::{BasedRootDatum, RootDataError};

/// Choice of character lattice for a named type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lattice {
    SimplyConnected,
    Adjoint,
    /// Rows are a basis of an intermediate lattice, written in the
    /// coordinates of the simply connected realization.
    Basis(Vec<Vec<i64>>),
}

fn cartan_matrix(kind: char, n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
    }
    let mut chain = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match kind {
        'A' => {
            for i in 0..n.saturating_sub(1) {
                chain(i, i + 1);
            }
        }
        'B' => {
            for i in 0..n - 1 {
                chain(i, i + 1);
            }
            c[n - 2][n - 1] = -2;
        }
        'C' => {
            for i in 0..n - 1 {
                chain(i, i + 1);
            }
            c[n - 1][n - 2] = -2;
        }
        'D' => {
            for i in 0..n - 2 {
                chain(i, i + 1);
            }
            chain(n - 3, n - 1);
        }
        'G' => {
            c[0][1] = -1;
            c[1][0] = -3;
        }
        'F' => {
            for i in 0..3 {
                chain(i, i + 1);
            }
            c[1][2] = -2;
        }
        _ => unreachable!("unvalidated type kind"),
    }
    c
}

fn basis_vector(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0i64; n];
    v[i] = 1;
    v
}

/// Simple (root, coroot) pairs for one irreducible factor.
fn simple_pairs(
    kind: char,
    n: usize,
    simply_connected: bool,
) -> Vec<(Vec<i64>, Vec<i64>)> {
    // The two coordinate-pinned cases first.
    if kind == 'C' && simply_connected {
        return (0..n)
            .map(|i| {
                if i + 1 < n {
                    let mut a = vec![0i64; n];
                    a[i] = 1;
                    a[i + 1] = -1;
                    (a.clone(), a)
                } else {
                    let mut a = vec![0i64; n];
                    a[n - 1] = 2;
                    let mut av = vec![0i64; n];
                    av[n - 1] = 1;
                    (a, av)
                }
            })
            .collect();
    }
    if kind == 'B' && !simply_connected {
        return (0..n)
            .map(|i| {
                if i + 1 < n {
                    let mut a = vec![0i64; n];
                    a[i] = 1;
                    a[i + 1] = -1;
                    (a.clone(), a)
                } else {
                    let mut a = vec![0i64; n];
                    a[n - 1] = 1;
                    let mut av = vec![0i64; n];
                    av[n - 1] = 2;
                    (a, av)
                }
            })
            .collect();
    }
    let c = cartan_matrix(kind, n);
    if simply_connected {
        (0..n).map(|i| (c[i].clone(), basis_vector(n, i))).collect()
    } else {
        (0..n)
            .map(|i| {
                let col: Vec<i64> = (0..n).map(|j| c[j][i]).collect();
                (basis_vector(n, i), col)
            })
            .collect()
    }
}

fn parse_factor(label: &str) -> Result<(char, usize), RootDataError> {
    let mut chars = label.chars();
    let kind = chars
        .next()
        .ok_or_else(|| RootDataError::UnknownType("empty type label".into()))?;
    let rank: usize = chars
        .as_str()
        .parse()
        .map_err(|_| RootDataError::UnknownType(label.into()))?;
    let ok = match kind {
        'A' => (1..=8).contains(&rank),
        'B' | 'C' => (2..=4).contains(&rank),
        'D' => rank == 4,
        'G' => rank == 2,
        'F' => rank == 4,
        _ => false,
    };
    if !ok {
        let hint = match (kind, rank) {
            ('D', 2) => " (isomorphic to A1xA1; use that label)",
            ('D', 3) => " (isomorphic to A3; use that label)",
            _ => "",
        };
        return Err(RootDataError::UnknownType(format!("{label}{hint}")));
    }
    Ok((kind, rank))
}

/// Build the datum for a (possibly product) type label such as `"B2"` or
/// `"A1xA1"` on the requested lattice.
pub fn named_datum(label: &str, lattice: &Lattice) -> Result<BasedRootDatum, RootDataError> {
    let simply_connected = !matches!(lattice, Lattice::Adjoint);
    let mut factors = Vec::new();
    for part in label.split('x') {
        let (kind, rank) = parse_factor(part)?;
        let pairs = simple_pairs(kind, rank, simply_connected);
        let suffix = if simply_connected { "sc" } else { "ad" };
        factors.push(BasedRootDatum::from_simple_system(
            rank,
            &pairs,
            format!("{part}-{suffix}"),
        )?);
    }
    let datum = if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        BasedRootDatum::product(&factors)
    };
    match lattice {
        Lattice::Basis(rows) => datum.with_basis(rows),
        _ => Ok(datum),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::snf;

    #[test]
    fn rank_one_isogeny_types() {
        let sc = named_datum("A1", &Lattice::SimplyConnected).unwrap();
        assert_eq!(sc.roots(), &[vec![2], vec![-2]]);
        assert_eq!(sc.coroots(), &[vec![1], vec![-1]]);
        let ad = named_datum("A1", &Lattice::Adjoint).unwrap();
        assert_eq!(ad.roots(), &[vec![1], vec![-1]]);
        assert_eq!(ad.coroots(), &[vec![2], vec![-2]]);
    }

    #[test]
    fn symplectic_rank_two_in_plane_coordinates() {
        let d = named_datum("C2", &Lattice::SimplyConnected).unwrap();
        assert_eq!(d.num_roots(), 8);
        for (r, rv) in [
            (vec![1i64, -1], vec![1i64, -1]),
            (vec![1, 1], vec![1, 1]),
            (vec![2, 0], vec![1, 0]),
            (vec![0, 2], vec![0, 1]),
        ] {
            let i = d.index_of_root(&r).expect("root present");
            assert_eq!(d.coroot(i), &rv);
        }
        // Fundamental group of the symplectic group has order two.
        assert_eq!(
            snf::quotient_invariants(d.roots(), 2).torsion,
            vec![2]
        );
    }

    #[test]
    fn odd_orthogonal_adjoint_in_plane_coordinates() {
        let d = named_datum("B2", &Lattice::Adjoint).unwrap();
        assert_eq!(d.num_roots(), 8);
        let i = d.index_of_root(&[0, 1]).unwrap();
        assert_eq!(d.coroot(i), &[0, 2]);
        let i = d.index_of_root(&[1, 1]).unwrap();
        assert_eq!(d.coroot(i), &[1, 1]);
        assert!(d.center_is_connected());
    }

    #[test]
    fn exceptional_types() {
        let g = named_datum("G2", &Lattice::SimplyConnected).unwrap();
        assert_eq!(g.num_roots(), 12);
        let s = g.simple_indices();
        assert_eq!(
            crate::rootdata::dot(g.root(s[0]), g.coroot(s[1])),
            -1,
            "first simple root is short"
        );
        assert_eq!(crate::rootdata::dot(g.root(s[1]), g.coroot(s[0])), -3);
        // Both lattice labels give the same self-dual lattice.
        let g2 = named_datum("G2", &Lattice::Adjoint).unwrap();
        assert_eq!(g.num_roots(), g2.num_roots());
        let f = named_datum("F4", &Lattice::SimplyConnected).unwrap();
        assert_eq!(f.num_roots(), 48);
    }

    #[test]
    fn even_orthogonal_rank_four() {
        let d = named_datum("D4", &Lattice::SimplyConnected).unwrap();
        assert_eq!(d.num_roots(), 24);
        assert_eq!(
            snf::quotient_invariants(d.roots(), 4).torsion,
            vec![2, 2]
        );
    }

    #[test]
    fn special_linear_center_orders() {
        for (n, order) in [(2usize, 3i64), (3, 4)] {
            let d = named_datum(&format!("A{n}"), &Lattice::SimplyConnected).unwrap();
            assert_eq!(d.num_roots(), n * (n + 1));
            let q = snf::quotient_invariants(d.roots(), n);
            assert_eq!(q.torsion_order(), order);
        }
    }

    #[test]
    fn product_labels() {
        let d = named_datum("A1xA1", &Lattice::SimplyConnected).unwrap();
        assert_eq!(d.rank(), 2);
        assert_eq!(d.num_roots(), 4);
        assert_eq!(d.name(), "A1-scxA1-sc");
        let d = named_datum("B2xA1", &Lattice::Adjoint).unwrap();
        assert_eq!(d.rank(), 3);
        assert_eq!(d.num_roots(), 10);
    }

    #[test]
    fn rejected_labels() {
        for bad in ["D2", "D3", "B5", "E6", "H3", "A0", "A9", "Q1", ""] {
            assert!(
                matches!(
                    named_datum(bad, &Lattice::SimplyConnected),
                    Err(RootDataError::UnknownType(_))
                ),
                "{bad} should be rejected"
            );
        }
    }

    #[test]
    fn intermediate_lattice_of_rank_three_special_linear() {
        // Index-two sublattice of the weight lattice of A3: the kernel of
        // the central character of order two.  Its center quotient drops
        // from Z/4 to Z/2.
        let rows = vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 2]];
        let d = named_datum("A3", &Lattice::Basis(rows)).unwrap();
        let q = snf::quotient_invariants(d.roots(), 3);
        assert_eq!(q.torsion_order(), 2);
    }
}
