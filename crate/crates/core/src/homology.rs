//! Exact homology of bigraded integer chain complexes.

use crate::chain::GradedChainComplex;
use crate::error::{KhError, Result};
use crate::matrix::SparseIntMatrix;
use crate::snf::{rank_mod_p, smith_normal_form};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// A finitely generated abelian group: free rank plus invariant factors
/// d1 | d2 | ... with each factor at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            invariant_factors: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Dimension after tensoring with F_p (universal coefficients uses the
    /// torsion of the next degree as well; this is only the Tor-free part).
    pub fn dim_mod_p(&self, p: u64) -> usize {
        self.free_rank
            + self
                .invariant_factors
                .iter()
                .filter(|d| *d % p == 0)
                .count()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join("⊕"))
    }
}

/// Map (h, q) -> abelian group; absent entries are trivial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct GradedHomology {
    // serialized as a sorted entry list: JSON maps need string keys
    #[serde(with = "groups_serde")]
    pub groups: BTreeMap<(i32, i32), AbelianGroup>,
}

mod groups_serde {
    use super::AbelianGroup;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(i32, i32), AbelianGroup>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        let entries: Vec<(i32, i32, &AbelianGroup)> =
            map.iter().map(|(&(h, q), g)| (h, q, g)).collect();
        entries.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<(i32, i32), AbelianGroup>, D::Error> {
        let entries = Vec::<(i32, i32, AbelianGroup)>::deserialize(de)?;
        Ok(entries.into_iter().map(|(h, q, g)| ((h, q), g)).collect())
    }
}

impl GradedHomology {
    pub fn group(&self, h: i32, q: i32) -> AbelianGroup {
        self.groups.get(&(h, q)).cloned().unwrap_or_default()
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.is_empty()
    }

    /// The column at a fixed q-degree, by homological degree.
    pub fn column(&self, q: i32) -> BTreeMap<i32, AbelianGroup> {
        self.groups
            .iter()
            .filter(|(&(_, qq), _)| qq == q)
            .map(|(&(h, _), g)| (h, g.clone()))
            .collect()
    }

    pub fn q_degrees(&self) -> Vec<i32> {
        let mut qs: Vec<i32> = self.groups.keys().map(|&(_, q)| q).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    /// Minimal q with a nonzero group, if any.
    pub fn min_q(&self) -> Option<i32> {
        self.groups.keys().map(|&(_, q)| q).min()
    }

    /// Graded Euler characteristic: coefficients of q^j.
    pub fn euler_polynomial(&self) -> BTreeMap<i32, i64> {
        let mut out: BTreeMap<i32, i64> = BTreeMap::new();
        for (&(h, q), g) in &self.groups {
            let sign = if h % 2 == 0 { 1 } else { -1 };
            *out.entry(q).or_default() += sign * g.free_rank as i64;
        }
        out.retain(|_, v| *v != 0);
        out
    }
}

fn factor_to_u64(d: &BigInt) -> u64 {
    u64::try_from(d).expect("invariant factor exceeds u64")
}

/// Integral homology via per-(h,q) Smith normal forms.
///
/// Convention: at bidegree (h, q), free rank = dim ker d_h - rank d_{h-1},
/// and torsion is the nontrivial invariant factors of the incoming map
/// d_{h-1}, recorded at degree h.
pub fn homology(complex: &GradedChainComplex) -> Result<GradedHomology> {
    complex.check_d_squared()?;
    // SNF of every boundary matrix, in parallel
    let keys: Vec<(i32, i32)> = complex.boundaries.keys().copied().collect();
    let snfs: BTreeMap<(i32, i32), crate::snf::SmithNormalForm> = keys
        .par_iter()
        .map(|&k| (k, smith_normal_form(&complex.boundaries[&k])))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let mut out = GradedHomology::default();
    for (&(h, q), basis) in &complex.bases {
        let dim = basis.len();
        let rank_out = snfs.get(&(h, q)).map_or(0, |s| s.rank);
        let (rank_in, torsion) = match snfs.get(&(h - 1, q)) {
            Some(s) => (
                s.rank,
                s.nontrivial_factors().iter().map(factor_to_u64).collect(),
            ),
            None => (0, Vec::new()),
        };
        if dim < rank_out + rank_in {
            return Err(KhError::Internal(format!(
                "rank accounting failed at (h={h}, q={q})"
            )));
        }
        let group = AbelianGroup {
            free_rank: dim - rank_out - rank_in,
            invariant_factors: torsion,
        };
        if !group.is_trivial() {
            out.groups.insert((h, q), group);
        }
    }
    Ok(out)
}

/// Graded dimensions over F_p.
pub fn homology_mod(complex: &GradedChainComplex, p: u64) -> Result<BTreeMap<(i32, i32), usize>> {
    let keys: Vec<(i32, i32)> = complex.boundaries.keys().copied().collect();
    let ranks: Result<Vec<((i32, i32), usize)>> = keys
        .par_iter()
        .map(|&k| Ok((k, rank_mod_p(&complex.boundaries[&k], p)?)))
        .collect();
    let ranks: BTreeMap<(i32, i32), usize> = ranks?.into_iter().collect();
    let mut out = BTreeMap::new();
    for (&(h, q), basis) in &complex.bases {
        let dim = basis.len();
        let rank_out = ranks.get(&(h, q)).copied().unwrap_or(0);
        let rank_in = ranks.get(&(h - 1, q)).copied().unwrap_or(0);
        let d = dim - rank_out - rank_in;
        if d > 0 {
            out.insert((h, q), d);
        }
    }
    Ok(out)
}

/// Universal coefficients: expected F_p dimension at (h, q) from the
/// integral answer (free rank + p-torsion here + p-torsion one degree up).
pub fn expected_dim_mod_p(homology: &GradedHomology, h: i32, q: i32, p: u64) -> usize {
    let here = homology.group(h, q);
    let up = homology.group(h + 1, q);
    here.free_rank
        + here.invariant_factors.iter().filter(|d| *d % p == 0).count()
        + up.invariant_factors.iter().filter(|d| *d % p == 0).count()
}

/// Sparse-matrix boundary map d_{h-1} lookup helper for tests.
pub fn boundary<'a>(
    complex: &'a GradedChainComplex,
    h: i32,
    q: i32,
) -> Option<&'a SparseIntMatrix> {
    complex.boundaries.get(&(h, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{torus_braid, BraidSpec};
    use crate::chain::{complex, ComplexOptions, NormContext};

    fn kh(n: usize, m: usize) -> GradedHomology {
        let d = torus_braid(BraidSpec::new(n, m).unwrap()).unwrap();
        let c = complex(&d, NormContext::ambient(&d), &ComplexOptions::default()).unwrap();
        homology(&c).unwrap()
    }

    #[test]
    fn unknot() {
        let h = kh(2, 0);
        assert_eq!(h.group(0, -2), AbelianGroup::free(1));
        assert_eq!(h.group(0, 0), AbelianGroup::free(2));
        assert_eq!(h.group(0, 2), AbelianGroup::free(1));
        assert_eq!(h.groups.len(), 3);
    }

    #[test]
    fn unknot_with_kink() {
        // T(2,1) is the unknot; homology must be Z at (0, -1) and (0, 1)
        let h = kh(2, 1);
        assert_eq!(h.group(0, -1), AbelianGroup::free(1));
        assert_eq!(h.group(0, 1), AbelianGroup::free(1));
        assert_eq!(h.groups.len(), 2);
    }

    #[test]
    fn hopf_link() {
        let h = kh(2, 2);
        assert_eq!(h.group(0, 0), AbelianGroup::free(1));
        assert_eq!(h.group(0, 2), AbelianGroup::free(1));
        assert_eq!(h.group(2, 4), AbelianGroup::free(1));
        assert_eq!(h.group(2, 6), AbelianGroup::free(1));
        assert_eq!(h.groups.len(), 4);
    }

    #[test]
    fn trefoil_table() {
        let h = kh(2, 3);
        assert_eq!(h.group(0, 1), AbelianGroup::free(1));
        assert_eq!(h.group(0, 3), AbelianGroup::free(1));
        assert_eq!(h.group(2, 5), AbelianGroup::free(1));
        assert_eq!(
            h.group(3, 7),
            AbelianGroup {
                free_rank: 0,
                invariant_factors: vec![2]
            }
        );
        assert_eq!(h.group(3, 9), AbelianGroup::free(1));
        assert_eq!(h.groups.len(), 5);
    }

    #[test]
    fn trefoil_invariance_across_diagrams() {
        assert_eq!(kh(2, 3), kh(3, 2));
    }

    #[test]
    fn trefoil_euler_is_jones() {
        let h = kh(2, 3);
        let euler = h.euler_polynomial();
        let expected: BTreeMap<i32, i64> =
            [(1, 1), (3, 1), (5, 1), (9, -1)].into_iter().collect();
        assert_eq!(euler, expected);
    }

    #[test]
    fn mod_p_dimensions_match_universal_coefficients() {
        for (n, m) in [(2, 3), (2, 4), (3, 2)] {
            let d = torus_braid(BraidSpec::new(n, m).unwrap()).unwrap();
            let c = complex(&d, NormContext::ambient(&d), &ComplexOptions::default()).unwrap();
            let hz = homology(&c).unwrap();
            for p in [2u64, 3] {
                let hp = homology_mod(&c, p).unwrap();
                let mut keys: std::collections::BTreeSet<(i32, i32)> =
                    hz.groups.keys().copied().collect();
                keys.extend(hp.keys().copied());
                for (h, q) in keys {
                    assert_eq!(
                        hp.get(&(h, q)).copied().unwrap_or(0),
                        expected_dim_mod_p(&hz, h, q, p),
                        "n={n} m={m} p={p} at ({h},{q})"
                    );
                }
            }
        }
    }

    #[test]
    fn trefoil_mod2_at_top() {
        let d = torus_braid(BraidSpec::new(2, 3).unwrap()).unwrap();
        let c = complex(&d, NormContext::ambient(&d), &ComplexOptions::default()).unwrap();
        let hp = homology_mod(&c, 2).unwrap();
        assert_eq!(hp.get(&(2, 7)).copied().unwrap_or(0), 1);
        assert_eq!(hp.get(&(3, 7)).copied().unwrap_or(0), 1);
    }

    #[test]
    fn euler_characteristic_independent_of_p() {
        let d = torus_braid(BraidSpec::new(3, 2).unwrap()).unwrap();
        let c = complex(&d, NormContext::ambient(&d), &ComplexOptions::default()).unwrap();
        let hz = homology(&c).unwrap();
        for p in [2u64, 3, 5] {
            let hp = homology_mod(&c, p).unwrap();
            let mut by_q_p: BTreeMap<i32, i64> = BTreeMap::new();
            for (&(h, q), &dim) in &hp {
                *by_q_p.entry(q).or_default() += if h % 2 == 0 { dim as i64 } else { -(dim as i64) };
            }
            by_q_p.retain(|_, v| *v != 0);
            assert_eq!(by_q_p, hz.euler_polynomial());
        }
    }
}
