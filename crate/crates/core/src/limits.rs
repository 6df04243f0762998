//! Limiting homology of the infinite-twist torus link, one stable q-degree at
//! a time, with closed-form answers on two strands.

use crate::braid::{torus_braid, BraidSpec};
use crate::chain::{complex, generators, ComplexOptions, NormContext};
use crate::error::{KhError, Result};
use crate::homology::{homology, AbelianGroup};
use crate::stabilization::homology_column;
use std::collections::BTreeMap;

/// A wedge summand of a space whose reduced integral cohomology describes one
/// stable column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Summand {
    /// Sphere S^d: reduced cohomology Z in degree d.
    Sphere(i32),
    /// Mod-2 Moore space M(Z/2, d): reduced cohomology Z/2 in degree d
    /// (cohomological convention: the torsion sits where the relation is).
    MooreZ2(i32),
    /// A point: no reduced cohomology.
    Point,
}

/// A finite wedge of the summands above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumDescription {
    pub summands: Vec<Summand>,
}

impl SpectrumDescription {
    pub fn point() -> Self {
        SpectrumDescription {
            summands: vec![Summand::Point],
        }
    }

    /// Reduced integral cohomology by degree; absent degrees are trivial.
    pub fn reduced_cohomology(&self) -> BTreeMap<i32, AbelianGroup> {
        let mut out: BTreeMap<i32, AbelianGroup> = BTreeMap::new();
        for s in &self.summands {
            match *s {
                Summand::Sphere(d) => out.entry(d).or_default().free_rank += 1,
                Summand::MooreZ2(d) => out.entry(d).or_default().invariant_factors.push(2),
                Summand::Point => {}
            }
        }
        out.retain(|_, g| !g.is_trivial());
        out
    }
}

impl std::fmt::Display for SpectrumDescription {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| match s {
                Summand::Sphere(d) => format!("S^{d}"),
                Summand::MooreZ2(d) => format!("M(Z/2,{d})"),
                Summand::Point => "pt".to_string(),
            })
            .collect();
        write!(f, "{}", parts.join(" v "))
    }
}

/// One stable column of the infinite-twist limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitResult {
    pub n: usize,
    /// Stable q-degree label.
    pub j: i32,
    /// Finite twist count at which the column has stabilized.
    pub m_hat: usize,
    /// q-degree of Kh(T(n, m_hat)) realizing the stable column.
    pub a_hat: i32,
    /// The stable column by homological degree.
    pub homology: BTreeMap<i32, AbelianGroup>,
    /// Closed form when available (two strands).
    pub closed_form: Option<SpectrumDescription>,
}

fn ceil_div(x: i64, y: i64) -> i64 {
    -((-x).div_euclid(y))
}

/// Smallest twist count m_hat and matching q-degree a_hat at which the stable
/// column labeled j is already realized by Kh(T(n, m_hat)).
pub fn limit_onset(n: usize, j: i32) -> Result<(i32, usize)> {
    let jj = j as i64;
    let nn = n as i64;
    match n {
        0 | 1 => Err(KhError::InvalidInput(format!(
            "strand count must be at least 2, got {n}"
        ))),
        2 => {
            if j < -2 {
                Ok((j, 0))
            } else {
                let m_hat = ceil_div(jj + 1, 2).max(0);
                Ok(((m_hat + jj) as i32, m_hat as usize))
            }
        }
        3 => {
            if j < -3 {
                Ok((j, 0))
            } else if j % 2 == 0 {
                // even labels appear from j = -2 on
                if j < -2 {
                    return Err(KhError::InvalidInput(format!(
                        "no stable column labeled j={j} on three strands"
                    )));
                }
                Ok((2 * j + 2, ((j + 2) / 2) as usize))
            } else {
                Ok((2 * j + 3, ((j + 3) / 2) as usize))
            }
        }
        _ => {
            if j >= 1 {
                Ok((
                    (nn * jj + (nn - 1) * (nn - 1)) as i32,
                    (jj + nn - 1) as usize,
                ))
            } else {
                Ok(((jj + nn * (nn - 1)) as i32, n))
            }
        }
    }
}

/// Closed form for the stable columns on two strands.
pub fn n2_closed_form(j: i32) -> SpectrumDescription {
    let summands = if j == -2 || j == 0 {
        vec![Summand::Sphere(0)]
    } else if j == 2 {
        vec![Summand::Sphere(2)]
    } else if j >= 4 && j % 4 == 0 {
        vec![Summand::MooreZ2(j / 2 + 1)]
    } else if j >= 6 && j.rem_euclid(4) == 2 {
        vec![Summand::Sphere(j / 2), Summand::Sphere(j / 2 + 1)]
    } else {
        vec![Summand::Point]
    };
    SpectrumDescription { summands }
}

/// Compute the stable column labeled j for the infinite-twist limit on n
/// strands. When `verify_stability` is set, the next diagram in the tower is
/// computed as well and the two columns are required to agree.
pub fn limit_homology(
    n: usize,
    j: i32,
    verify_stability: bool,
    opts: &ComplexOptions,
) -> Result<LimitResult> {
    if n < 2 {
        return Err(KhError::InvalidInput(format!(
            "strand count must be at least 2, got {n}"
        )));
    }
    let closed_form = (n == 2).then(|| n2_closed_form(j));
    // below the lowest q-degree of the identity braid closure the column is
    // empty at every level of the tower
    if j < -(n as i32) {
        return Ok(LimitResult {
            n,
            j,
            m_hat: 0,
            a_hat: j,
            homology: BTreeMap::new(),
            closed_form,
        });
    }
    let (a_hat, m_hat) = limit_onset(n, j)?;
    let column = homology_column(n, m_hat, a_hat, opts)?;
    if verify_stability {
        let next = homology_column(n, m_hat + 1, a_hat + n as i32 - 1, opts)?;
        if next != column {
            return Err(KhError::Verification(format!(
                "column labeled j={j} on {n} strands not stable at m={m_hat}"
            )));
        }
    }
    if let Some(cf) = &closed_form {
        if cf.reduced_cohomology() != column {
            return Err(KhError::Verification(format!(
                "closed form disagrees with computed column at n={n}, j={j}"
            )));
        }
    }
    Ok(LimitResult {
        n,
        j,
        m_hat,
        a_hat,
        homology: column,
        closed_form,
    })
}

/// Outcome of a sweep of structural checks.
#[derive(Debug, Clone, Default)]
pub struct FactReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl FactReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Structural facts about the two-strand tower, checked for m = 0..=m_max:
/// q-parity, thinness on the two diagonals, and the shape of the top column.
pub fn verify_t2_facts(m_max: usize, opts: &ComplexOptions) -> Result<FactReport> {
    let mut report = FactReport::default();
    for m in 0..=m_max {
        let d = torus_braid(BraidSpec::new(2, m)?)?;
        let c = complex(&d, NormContext::ambient(&d), opts)?;
        let h = homology(&c)?;
        report.checked += 1;
        for &(hh, q) in h.groups.keys() {
            if (q - m as i32) % 2 != 0 {
                report
                    .failures
                    .push(format!("T(2,{m}): group at ({hh},{q}) breaks q parity"));
            }
            if m >= 1 {
                let delta = q - 2 * hh;
                if delta != m as i32 - 2 && delta != m as i32 {
                    report.failures.push(format!(
                        "T(2,{m}): group at ({hh},{q}) off the thin diagonals"
                    ));
                }
            }
        }
        let top_q = 3 * m as i32 - 2;
        if m >= 3 && m % 2 == 1 {
            let col = h.column(top_q);
            let want: BTreeMap<i32, AbelianGroup> = [(
                m as i32,
                AbelianGroup {
                    free_rank: 0,
                    invariant_factors: vec![2],
                },
            )]
            .into_iter()
            .collect();
            if col != want {
                report
                    .failures
                    .push(format!("T(2,{m}): top column at q={top_q} is not Z/2"));
            }
        }
        if m >= 4 && m % 2 == 0 {
            let col = h.column(top_q);
            let want: BTreeMap<i32, AbelianGroup> = [
                (m as i32 - 1, AbelianGroup::free(1)),
                (m as i32, AbelianGroup::free(1)),
            ]
            .into_iter()
            .collect();
            if col != want {
                report.failures.push(format!(
                    "T(2,{m}): top column at q={top_q} is not Z in degrees {} and {m}",
                    m - 1
                ));
            }
        }
    }
    Ok(report)
}

/// On three strands every generator sits in odd q-degree, so the homology
/// vanishes in even q. Checked at chain level for m = 0..=m_max.
pub fn verify_t3_parity(m_max: usize, opts: &ComplexOptions) -> Result<FactReport> {
    let mut report = FactReport::default();
    for m in 0..=m_max {
        let d = torus_braid(BraidSpec::new(3, m)?)?;
        let gens = generators(&d, NormContext::ambient(&d), opts)?;
        report.checked += 1;
        for &(h, q) in gens.keys() {
            if q % 2 == 0 {
                report
                    .failures
                    .push(format!("T(3,{m}): generator in even q-degree at ({h},{q})"));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn onset_examples() {
        assert_eq!(limit_onset(2, 3).unwrap(), (5, 2));
        assert_eq!(limit_onset(2, -2).unwrap(), (-2, 0));
        assert_eq!(limit_onset(2, -5).unwrap(), (-5, 0));
        assert_eq!(limit_onset(3, 2).unwrap(), (6, 2));
        assert_eq!(limit_onset(3, 3).unwrap(), (9, 3));
        assert_eq!(limit_onset(3, -3).unwrap(), (-3, 0));
        assert_eq!(limit_onset(4, 1).unwrap(), (13, 4));
        assert_eq!(limit_onset(4, 0).unwrap(), (12, 4));
        assert_eq!(limit_onset(4, -4).unwrap(), (8, 4));
        assert!(limit_onset(1, 0).is_err());
    }

    #[test]
    fn closed_form_table() {
        assert_eq!(n2_closed_form(0).summands, vec![Summand::Sphere(0)]);
        assert_eq!(n2_closed_form(-2).summands, vec![Summand::Sphere(0)]);
        assert_eq!(n2_closed_form(2).summands, vec![Summand::Sphere(2)]);
        assert_eq!(n2_closed_form(4).summands, vec![Summand::MooreZ2(3)]);
        assert_eq!(n2_closed_form(8).summands, vec![Summand::MooreZ2(5)]);
        assert_eq!(
            n2_closed_form(6).summands,
            vec![Summand::Sphere(3), Summand::Sphere(4)]
        );
        assert_eq!(n2_closed_form(1).summands, vec![Summand::Point]);
        assert_eq!(n2_closed_form(-1).summands, vec![Summand::Point]);
        assert_eq!(n2_closed_form(-4).summands, vec![Summand::Point]);
    }

    #[test]
    fn reduced_cohomology_of_descriptions() {
        let moore = SpectrumDescription {
            summands: vec![Summand::MooreZ2(3)],
        };
        let want: BTreeMap<i32, AbelianGroup> = [(
            3,
            AbelianGroup {
                free_rank: 0,
                invariant_factors: vec![2],
            },
        )]
        .into_iter()
        .collect();
        assert_eq!(moore.reduced_cohomology(), want);
        assert!(SpectrumDescription::point().reduced_cohomology().is_empty());
    }

    #[test]
    fn two_strand_limits_match_closed_form() {
        let opts = ComplexOptions::default();
        for j in -4..=8 {
            let r = limit_homology(2, j, true, &opts).unwrap();
            let cf = r.closed_form.clone().unwrap();
            assert_eq!(r.homology, cf.reduced_cohomology(), "j={j}");
        }
    }

    #[test]
    fn three_strand_stable_column() {
        let opts = ComplexOptions::default();
        let r = limit_homology(3, 3, true, &opts).unwrap();
        assert_eq!((r.a_hat, r.m_hat), (9, 3));
        let want: BTreeMap<i32, AbelianGroup> = [
            (
                3,
                AbelianGroup {
                    free_rank: 0,
                    invariant_factors: vec![2],
                },
            ),
            (4, AbelianGroup::free(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(r.homology, want);
    }

    #[test]
    fn deep_negative_labels_are_empty() {
        let r = limit_homology(3, -7, false, &ComplexOptions::default()).unwrap();
        assert!(r.homology.is_empty());
        assert_eq!(r.m_hat, 0);
    }

    #[test]
    fn structural_facts_hold() {
        let opts = ComplexOptions::default();
        let t2 = verify_t2_facts(6, &opts).unwrap();
        assert!(t2.is_ok(), "{:?}", t2.failures);
        assert_eq!(t2.checked, 7);
        let t3 = verify_t3_parity(3, &opts).unwrap();
        assert!(t3.is_ok(), "{:?}", t3.failures);
    }
}
