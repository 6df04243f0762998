//! Dense reference implementations used to cross-check the sparse path.
//!
//! Everything here favors simplicity over speed: textbook Smith normal form
//! on dense matrices, and homology assembled generator by generator from the
//! single-generator differential. Keep this module independent of the sparse
//! eliminator.

use crate::braid::BraidDiagram;
use crate::chain::{differential, generators, ComplexOptions, Generator, NormContext};
use crate::error::Result;
use crate::homology::{AbelianGroup, GradedHomology};
use crate::matrix::SparseIntMatrix;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap};

/// Textbook dense Smith normal form; returns the full diagonal d1 | d2 | ...
pub fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    'outer: while t < rows && t < cols {
        // locate a minimal-magnitude nonzero entry in the submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.map_or(true, |(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => break,
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            // clear column t
            let mut dirty = false;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = rounded_quotient(&a[i][t], &a[t][t]);
                    for j in t..cols {
                        let v = &a[t][j] * &q;
                        a[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i); // strictly smaller remainder becomes pivot
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // clear row t
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = rounded_quotient(&a[t][j], &a[t][t]);
                    for i in t..rows {
                        let v = &a[i][t] * &q;
                        a[i][j] -= v;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // enforce divisibility into the remaining submatrix
            let mut fixed = true;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &a[t][t]).is_zero() {
                        for jj in t..cols {
                            let v = a[i][jj].clone();
                            a[t][jj] += v;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
        if t >= rows || t >= cols {
            break 'outer;
        }
    }
    diag
}

fn rounded_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let mut q = a / p;
    let r = a - &q * p;
    if BigInt::from(2) * r.abs() > p.abs() {
        q += r.signum() * p.signum();
    }
    q
}

/// Dense SNF of a sparse matrix, for direct comparison in tests.
pub fn dense_snf_of(m: &SparseIntMatrix) -> Vec<BigInt> {
    let mut a = vec![vec![BigInt::zero(); m.cols()]; m.rows()];
    for (r, c, v) in m.entries() {
        a[r][c] = v.clone();
    }
    dense_snf(a)
}

/// Brute-force integral homology of a cube, assembled generator by generator
/// and reduced with the dense Smith normal form.
pub fn dense_homology(
    diagram: &BraidDiagram,
    ctx: NormContext,
    opts: &ComplexOptions,
) -> Result<GradedHomology> {
    let bases = generators(diagram, ctx, opts)?;
    let index: HashMap<(i32, i32), HashMap<Generator, usize>> = bases
        .iter()
        .map(|(&k, basis)| {
            (
                k,
                basis.iter().enumerate().map(|(i, &g)| (g, i)).collect(),
            )
        })
        .collect();
    // dense boundary matrix out of each graded piece
    let mut mats: BTreeMap<(i32, i32), Vec<Vec<BigInt>>> = BTreeMap::new();
    for (&(h, q), basis) in &bases {
        let target = match bases.get(&(h + 1, q)) {
            Some(t) => t,
            None => continue,
        };
        let tindex = &index[&(h + 1, q)];
        let mut mat = vec![vec![BigInt::zero(); basis.len()]; target.len()];
        for (col, &g) in basis.iter().enumerate() {
            for (coeff, img) in differential(diagram, g, opts.sign)? {
                if let Some(&row) = tindex.get(&img) {
                    mat[row][col] += BigInt::from(coeff);
                }
            }
        }
        mats.insert((h, q), mat);
    }
    let snfs: BTreeMap<(i32, i32), Vec<BigInt>> = mats
        .into_iter()
        .map(|(k, m)| (k, dense_snf(m)))
        .collect();
    let rank = |k: &(i32, i32)| {
        snfs.get(k)
            .map_or(0, |d| d.iter().filter(|v| !v.is_zero()).count())
    };
    let mut out = GradedHomology::default();
    for (&(h, q), basis) in &bases {
        let rank_out = rank(&(h, q));
        let rank_in = rank(&(h - 1, q));
        let torsion: Vec<u64> = snfs
            .get(&(h - 1, q))
            .map(|d| {
                d.iter()
                    .filter(|v| **v > BigInt::from(1))
                    .map(|v| u64::try_from(v).expect("oracle torsion fits u64"))
                    .collect()
            })
            .unwrap_or_default();
        let group = AbelianGroup {
            free_rank: basis.len() - rank_out - rank_in,
            invariant_factors: torsion,
        };
        if !group.is_trivial() {
            out.groups.insert((h, q), group);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{torus_braid, BraidSpec};
    use crate::chain::{complex, NormContext};
    use crate::homology::homology;
    use crate::snf::smith_normal_form;
    use rand::{Rng, SeedableRng};

    #[test]
    fn dense_snf_basics() {
        let d = dense_snf(vec![
            vec![BigInt::from(2), BigInt::from(4)],
            vec![BigInt::from(6), BigInt::from(8)],
        ]);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn sparse_matches_dense_on_random_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=8);
            let cols = rng.gen_range(1..=8);
            let mut m = SparseIntMatrix::new(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.5) {
                        m.set(r, c, BigInt::from(rng.gen_range(-9i64..=9)));
                    }
                }
            }
            let sparse = smith_normal_form(&m);
            let dense: Vec<BigInt> = dense_snf_of(&m)
                .into_iter()
                .filter(|v| !v.is_zero())
                .collect();
            assert_eq!(sparse.invariant_factors, dense);
        }
    }

    #[test]
    fn oracle_matches_sparse_homology_small_diagrams() {
        for (n, m) in [(2, 2), (2, 3), (3, 2)] {
            let d = torus_braid(BraidSpec::new(n, m).unwrap()).unwrap();
            let ctx = NormContext::ambient(&d);
            let opts = ComplexOptions::default();
            let sparse = homology(&complex(&d, ctx, &opts).unwrap()).unwrap();
            let dense = dense_homology(&d, ctx, &opts).unwrap();
            assert_eq!(sparse, dense, "n={n} m={m}");
        }
    }
}
