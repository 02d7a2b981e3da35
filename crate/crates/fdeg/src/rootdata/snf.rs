//! Integer linear algebra over lattices: Smith normal form, determinants,
//! kernels and quotient invariants.  Matrices are small (bounded by the
//! rank of a root datum), so the classical pivoting algorithm in `i128` is
//! exact and fast enough.

/// A decomposition `u * m * v = d` with `u`, `v` unimodular and `d`
/// diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: Vec<Vec<i64>>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
    pub rank: usize,
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub invariants: Vec<i64>,
}

/// Torsion and free parts of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientInvariants {
    /// Orders of the nontrivial cyclic torsion factors, each dividing the next.
    pub torsion: Vec<i64>,
    pub free_rank: usize,
}

impl QuotientInvariants {
    pub fn torsion_order(&self) -> i64 {
        self.torsion.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

/// Quotient leaving the remainder of least magnitude (|r| <= |d|/2).
/// Euclidean division is correct here too, but its one-sided remainders
/// let the transform entries compound much faster; balanced remainders
/// keep `u` and `v` small enough to downcast safely.
fn balanced_div(n: i128, d: i128) -> i128 {
    let q = n.div_euclid(d);
    let r = n - q * d;
    if 2 * r.abs() > d.abs() {
        q + d.signum()
    } else {
        q
    }
}

/// Extended gcd: `(g, x, y)` with `x * a + y * b = g > 0`, `a` nonzero.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - k * r1);
        (x0, x1) = (x1, x0 - k * x1);
        (y0, y1) = (y1, y0 - k * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

fn downcast(m: Vec<Vec<i128>>) -> Vec<Vec<i64>> {
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| i64::try_from(x).expect("matrix entry out of range"))
                .collect()
        })
        .collect()
}

/// Smith normal form of an integer matrix with `cols` columns (passed
/// separately so the empty matrix is unambiguous).
pub fn smith_normal_form(mat: &[Vec<i64>], cols: usize) -> SmithForm {
    let rows = mat.len();
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols);
            r.iter().map(|&x| i128::from(x)).collect()
        })
        .collect();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: a nonzero entry of smallest magnitude in the submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }

        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let k = balanced_div(a[i][t], a[t][t]);
                    for j in 0..cols {
                        let s = k * a[t][j];
                        a[i][j] -= s;
                    }
                    for j in 0..rows {
                        let s = k * u[t][j];
                        u[i][j] -= s;
                    }
                    if a[i][t] != 0 {
                        a.swap(t, i);
                        u.swap(t, i);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let k = balanced_div(a[t][j], a[t][t]);
                    for row in a.iter_mut() {
                        let s = k * row[t];
                        row[j] -= s;
                    }
                    for row in v.iter_mut() {
                        let s = k * row[t];
                        row[j] -= s;
                    }
                    if a[t][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        for row in v.iter_mut() {
                            row.swap(t, j);
                        }
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        // Size-reduce the rows and columns still in play against each
        // other before the next stage. Left alone, the block entries
        // square at every stage and the transforms overflow on dense
        // inputs; reduction keeps them near the scale of the lattice
        // they generate. The first passes do nearly all the shrinking,
        // and near-parallel vectors can make further passes arbitrarily
        // slow, so the count is capped rather than run to a fixed point.
        for _ in 0..4 + rows + cols {
            let mut shrunk = false;
            for i in t + 1..rows {
                for j in t + 1..rows {
                    if i == j {
                        continue;
                    }
                    let dot: i128 = (t + 1..cols).map(|k| a[i][k] * a[j][k]).sum();
                    let norm: i128 = (t + 1..cols).map(|k| a[j][k] * a[j][k]).sum();
                    if norm == 0 {
                        continue;
                    }
                    let c = balanced_div(dot, norm);
                    if c != 0 {
                        for k in 0..cols {
                            let s = c * a[j][k];
                            a[i][k] -= s;
                        }
                        for k in 0..rows {
                            let s = c * u[j][k];
                            u[i][k] -= s;
                        }
                        shrunk = true;
                    }
                }
            }
            for i in t + 1..cols {
                for j in t + 1..cols {
                    if i == j {
                        continue;
                    }
                    let dot: i128 = (t + 1..rows).map(|k| a[k][i] * a[k][j]).sum();
                    let norm: i128 = (t + 1..rows).map(|k| a[k][j] * a[k][j]).sum();
                    if norm == 0 {
                        continue;
                    }
                    let c = balanced_div(dot, norm);
                    if c != 0 {
                        for row in a.iter_mut() {
                            let s = c * row[j];
                            row[i] -= s;
                        }
                        for row in v.iter_mut() {
                            let s = c * row[j];
                            row[i] -= s;
                        }
                        shrunk = true;
                    }
                }
            }
            if !shrunk {
                break;
            }
        }
        t += 1;
    }

    // The matrix is diagonal; enforce the divisibility chain pairwise.
    // For entries a, b with a not dividing b, the Bezout transform
    // turns diag(a, b) into diag(gcd, +/-lcm). Its coefficients are
    // bounded by the entries themselves, so unlike re-running the
    // elimination this cannot inflate the transforms.
    let n = rows.min(cols);
    loop {
        let mut fixed = false;
        for i in 0..n {
            for j in i + 1..n {
                let (p, q) = (a[i][i], a[j][j]);
                if p == 0 || q % p == 0 {
                    continue;
                }
                let (g, x, y) = ext_gcd(p, q);
                // Row pair (i, j) gets [[x, y], [-q/g, p/g]]; the
                // compensating column pair is [[1, -y*q/g], [1, x*p/g]].
                for k in 0..cols {
                    let (ri, rj) = (a[i][k], a[j][k]);
                    a[i][k] = x * ri + y * rj;
                    a[j][k] = (p / g) * rj - (q / g) * ri;
                }
                for k in 0..rows {
                    let (ri, rj) = (u[i][k], u[j][k]);
                    u[i][k] = x * ri + y * rj;
                    u[j][k] = (p / g) * rj - (q / g) * ri;
                }
                for row in a.iter_mut() {
                    let (ci, cj) = (row[i], row[j]);
                    row[i] = ci + cj;
                    row[j] = (x * p / g) * cj - (y * q / g) * ci;
                }
                for row in v.iter_mut() {
                    let (ci, cj) = (row[i], row[j]);
                    row[i] = ci + cj;
                    row[j] = (x * p / g) * cj - (y * q / g) * ci;
                }
                fixed = true;
            }
        }
        if !fixed {
            break;
        }
    }

    for i in 0..rows.min(cols) {
        if a[i][i] < 0 {
            for j in 0..cols {
                a[i][j] = -a[i][j];
            }
            for j in 0..rows {
                u[i][j] = -u[i][j];
            }
        }
    }

    let rank = (0..rows.min(cols)).take_while(|&i| a[i][i] != 0).count();
    let invariants = (0..rank)
        .map(|i| i64::try_from(a[i][i]).expect("invariant factor out of range"))
        .collect();
    SmithForm {
        d: downcast(a),
        u: downcast(u),
        v: downcast(v),
        rank,
        invariants,
    }
}

/// Determinant of a square integer matrix (fraction-free Bareiss scheme).
pub fn det(mat: &[Vec<i64>]) -> i128 {
    let n = mat.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = mat
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n);
            r.iter().map(|&x| i128::from(x)).collect()
        })
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Inverse of a unimodular integer matrix; panics if the determinant is
/// not a unit (callers only invert basis-change matrices).
pub fn invert_unimodular(mat: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = mat.len();
    let s = smith_normal_form(mat, n);
    assert!(
        s.rank == n && s.invariants.iter().all(|&d| d == 1),
        "matrix is not unimodular"
    );
    // u * m * v = 1, so m^(-1) = v * u.
    mat_mul(&s.v, &s.u)
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if m.is_empty() {
        return vec![];
    }
    let cols = m[0].len();
    (0..cols)
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

/// Invariants of the quotient of `Z^ambient` by the subgroup generated by
/// the rows of `gens`.
pub fn quotient_invariants(gens: &[Vec<i64>], ambient: usize) -> QuotientInvariants {
    let s = smith_normal_form(gens, ambient);
    QuotientInvariants {
        torsion: s.invariants.into_iter().filter(|&d| d > 1).collect(),
        free_rank: ambient - s.rank,
    }
}

/// A basis of the integer solutions of `mat * x = 0`; the returned basis
/// spans a saturated sublattice (the full kernel, not a finite-index part).
pub fn kernel_basis(mat: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let s = smith_normal_form(mat, cols);
    (s.rank..cols)
        .map(|j| (0..cols).map(|i| s.v[i][j]).collect())
        .collect()
}

/// Rank of the row span over the rationals.
pub fn row_rank(mat: &[Vec<i64>], cols: usize) -> usize {
    smith_normal_form(mat, cols).rank
}
