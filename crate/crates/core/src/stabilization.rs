//! The D/E resolution ladder with its grading bookkeeping, onset bounds for
//! stabilization, acyclicity certification, and end-to-end verification that
//! homology columns repeat when the twist count grows.

use crate::braid::{ladder_diagram, BraidDiagram, BraidSpec, LadderKind};
use crate::chain::{complex, grading, split_at, ComplexOptions, NormContext};
use crate::error::{KhError, Result};
use crate::homology::{homology, AbelianGroup, GradedHomology};
use std::collections::BTreeMap;

/// One rung of the ladder from T(n, m+1) down to T(n, m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderStep {
    pub i: usize,
    /// Shifted q-degree of the D_i part: a + n - 1 - i.
    pub a_i: i32,
    /// Negative crossing count of E_i, when known.
    pub c_i: Option<u32>,
    /// Shifted q-degree of the E_i part: a + n - 2 - i - 3 c_i.
    pub alpha_i: Option<i32>,
    /// Crossing count of the reduced diagram (0 for n in {2, 3}).
    pub x_i: Option<u32>,
    /// Lower bound -n + 1 + m(n-1) - 2 c_i on the minimal homology q-degree
    /// of E_i, when c_i is known.
    pub min_q_bound: Option<i32>,
    /// Direct check: the E_i piece has no homology in ambient q-degree a0.
    pub acyclic: bool,
}

/// Verdict of one passage from T(n, m) to T(n, m+1) at a fixed q-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationReport {
    pub n: usize,
    pub m: usize,
    pub a: i32,
    pub steps: Vec<LadderStep>,
    /// Column of Kh(T(n, m+1)) at q = a + n - 1, by homological degree.
    pub lhs: BTreeMap<i32, AbelianGroup>,
    /// Column of Kh(T(n, m)) at q = a, by homological degree.
    pub rhs: BTreeMap<i32, AbelianGroup>,
    pub equal: bool,
    pub bound_satisfied: bool,
}

fn floor_div(x: i64, y: i64) -> i64 {
    x.div_euclid(y)
}

fn ceil_div(x: i64, y: i64) -> i64 {
    -((-x).div_euclid(y))
}

/// Minimal twist count M beyond which stabilization at q-degree `a` is
/// guaranteed for all m >= M.
pub fn onset_bound(n: usize, a: i32) -> Result<i64> {
    let a = a as i64;
    let nn = n as i64;
    match n {
        0 | 1 => Err(KhError::InvalidInput(format!(
            "strand count must be at least 2, got {n}"
        ))),
        2 => Ok((floor_div(a, 3) + 1).max(0)),
        3 => Ok(ceil_div(a + 2, 4).max(0)),
        _ => Ok(ceil_div(a + nn - 1, nn).max(nn)),
    }
}

/// m >= max((a + n - 1)/n, n), compared exactly over the rationals.
fn meets_f(n: i64, a: i64, m: i64) -> bool {
    m >= n && m * n >= a + n - 1
}

/// The onset bound propagates: m >= f(a, n) implies m+1 >= f(a + n - 1, n).
pub fn bound_monotone(n: usize, a: i32, m: i64) -> bool {
    assert!(n >= 4);
    let nn = n as i64;
    !meets_f(nn, a as i64, m) || meets_f(nn, a as i64 + nn - 1, m + 1)
}

/// Closed-form negative crossing counts of E_i for two and three strands.
pub fn c_closed_form(n: usize, m: usize, i: usize) -> Result<u32> {
    match (n, i) {
        (2, 1) => Ok(m as u32),
        (3, 1) | (3, 2) => {
            let k = (m / 3) as u32;
            Ok(match (m % 3, i) {
                (0, _) => 4 * k,
                (1, 1) => 4 * k + 2,
                (1, 2) => 4 * k + 1,
                (2, _) => 4 * k + 3,
                _ => unreachable!(),
            })
        }
        _ => Err(KhError::InvalidInput(format!(
            "no closed form for c_i with n={n}, i={i}"
        ))),
    }
}

fn c_for(n: usize, m: usize, i: usize, overrides: Option<&BTreeMap<usize, u32>>) -> Option<u32> {
    if let Some(map) = overrides {
        if let Some(&c) = map.get(&i) {
            return Some(c);
        }
    }
    c_closed_form(n, m, i).ok()
}

/// Build the full ladder for the passage T(n, m) -> T(n, m+1) at q-degree a,
/// certifying acyclicity of each E_i piece directly in ambient gradings.
pub fn ladder(
    n: usize,
    m: usize,
    a: i32,
    c_overrides: Option<&BTreeMap<usize, u32>>,
    opts: &ComplexOptions,
) -> Result<Vec<LadderStep>> {
    let spec = BraidSpec::new(n, m + 1)?;
    let a0 = a + n as i32 - 1;
    let mut steps = Vec::new();
    for i in 1..=n - 1 {
        let e = ladder_diagram(spec, i, LadderKind::E)?;
        let e_opts = ComplexOptions {
            q: Some(a0),
            ..*opts
        };
        let c = complex(&e, NormContext::ambient(&e), &e_opts)?;
        let acyclic = homology(&c)?.is_trivial();
        let c_i = c_for(n, m, i, c_overrides);
        let a_i = a + n as i32 - 1 - i as i32;
        let alpha_i = c_i.map(|c| a + n as i32 - 2 - i as i32 - 3 * c as i32);
        let min_q_bound =
            c_i.map(|c| -(n as i32) + 1 + (m as i32) * (n as i32 - 1) - 2 * c as i32);
        let x_i = (n <= 3).then_some(0);
        steps.push(LadderStep {
            i,
            a_i,
            c_i,
            alpha_i,
            x_i,
            min_q_bound,
            acyclic,
        });
    }
    Ok(steps)
}

/// Outcome of attempting to collapse the 1-resolution part at a crossing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CollapseVerdict {
    /// Sub part acyclic and quotient homology matches the total.
    Collapsed,
    /// Sub part has homology; no collapse claim can be made.
    NotApplicable,
    /// Sub part acyclic but the quotient disagrees with the total; the
    /// offending bidegrees are listed. This would contradict the long exact
    /// sequence and signals an internal fault.
    Mismatch { bidegrees: Vec<(i32, i32)> },
}

/// Split the ambient complex at a free crossing and check the collapse:
/// if the 1-resolution subcomplex is acyclic, the quotient must carry the
/// full homology.
pub fn verify_collapse(
    diagram: &BraidDiagram,
    free_index: usize,
    opts: &ComplexOptions,
) -> Result<CollapseVerdict> {
    let total = complex(diagram, NormContext::ambient(diagram), opts)?;
    let (sub, quotient) = split_at(&total, free_index)?;
    if !homology(&sub)?.is_trivial() {
        return Ok(CollapseVerdict::NotApplicable);
    }
    let h_total = homology(&total)?;
    let h_quot = homology(&quotient)?;
    if h_total == h_quot {
        Ok(CollapseVerdict::Collapsed)
    } else {
        let mut bad: Vec<(i32, i32)> = h_total
            .groups
            .iter()
            .chain(h_quot.groups.iter())
            .filter(|(&k, _)| h_total.group(k.0, k.1) != h_quot.group(k.0, k.1))
            .map(|(&k, _)| k)
            .collect();
        bad.sort_unstable();
        bad.dedup();
        Ok(CollapseVerdict::Mismatch { bidegrees: bad })
    }
}

/// Column of Kh(T(n, m)) at one q-degree, by homological degree.
pub fn homology_column(
    n: usize,
    m: usize,
    q: i32,
    opts: &ComplexOptions,
) -> Result<BTreeMap<i32, AbelianGroup>> {
    let d = crate::braid::torus_braid(BraidSpec::new(n, m)?)?;
    let slice = ComplexOptions { q: Some(q), ..*opts };
    let c = complex(&d, NormContext::ambient(&d), &slice)?;
    Ok(homology(&c)?.column(q))
}

/// Compare Kh^{a+k(n-1)}(T(n, m+k)) against its predecessor for k = 1..k_max,
/// with ladder acyclicity evidence for each passage.
pub fn verify_stabilization(
    n: usize,
    m: usize,
    a: i32,
    k_max: usize,
    opts: &ComplexOptions,
) -> Result<Vec<StabilizationReport>> {
    let mut reports = Vec::new();
    for k in 1..=k_max {
        let m_prev = m + k - 1;
        let a_prev = a + ((k - 1) * (n - 1)) as i32;
        let a_next = a_prev + n as i32 - 1;
        let steps = ladder(n, m_prev, a_prev, None, opts)?;
        let lhs = homology_column(n, m_prev + 1, a_next, opts)?;
        let rhs = homology_column(n, m_prev, a_prev, opts)?;
        let bound_satisfied = (m_prev as i64) >= onset_bound(n, a_prev)?;
        let equal = lhs == rhs;
        reports.push(StabilizationReport {
            n,
            m: m_prev,
            a: a_prev,
            steps,
            lhs,
            rhs,
            equal,
            bound_satisfied,
        });
    }
    Ok(reports)
}

/// Standalone homology of the E_i diagram, graded with c_i of its free
/// crossings negative.
pub fn standalone_e_homology(
    n: usize,
    m: usize,
    i: usize,
    c_i: u32,
    opts: &ComplexOptions,
) -> Result<GradedHomology> {
    let e = ladder_diagram(BraidSpec::new(n, m + 1)?, i, LadderKind::E)?;
    let c = complex(&e, NormContext::standalone(&e, c_i), opts)?;
    homology(&c)
}

/// Generator-wise grading shift between the ambient and standalone views of
/// E_i inside T(n, m+1): q shifts by 1 + i + 3 c_i and h by 1 + c_i,
/// constants independent of the generator.
pub fn verify_shift_law(n: usize, m: usize, i: usize, c_i: u32) -> Result<()> {
    let e = ladder_diagram(BraidSpec::new(n, m + 1)?, i, LadderKind::E)?;
    let ambient = NormContext::ambient(&e);
    let standalone = NormContext::standalone(&e, c_i);
    let opts = ComplexOptions::default();
    let gens = crate::chain::generators(&e, ambient, &opts)?;
    let expected_q = 1 + i as i32 + 3 * c_i as i32;
    let expected_h = 1 + c_i as i32;
    for basis in gens.values() {
        for &g in basis {
            let state = crate::braid::smooth(&e, g.res);
            let ga = grading(&e, ambient, g, &state);
            let gs = grading(&e, standalone, g, &state);
            if ga.q - gs.q != expected_q || ga.h - gs.h != expected_h {
                return Err(KhError::Verification(format!(
                    "shift law fails for n={n} m={m} i={i}: ambient ({},{}) standalone ({},{})",
                    ga.h, ga.q, gs.h, gs.q
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{torus_braid, Resolution};
    use crate::chain::Generator;

    #[test]
    fn onset_bounds() {
        assert_eq!(onset_bound(3, 3).unwrap(), 2);
        assert_eq!(onset_bound(4, 3).unwrap(), 4);
        assert_eq!(onset_bound(2, 3).unwrap(), 2);
        assert_eq!(onset_bound(2, -5).unwrap(), 0);
        assert_eq!(onset_bound(3, -9).unwrap(), 0);
        assert_eq!(onset_bound(5, 2).unwrap(), 5);
        assert!(onset_bound(1, 0).is_err());
    }

    #[test]
    fn monotonicity_sweep() {
        assert!(bound_monotone(4, 3, 4));
        assert!(bound_monotone(5, -10, 5));
        for n in 4..=6 {
            for a in -20..=20 {
                let m = onset_bound(n, a).unwrap();
                assert!(bound_monotone(n, a, m), "n={n} a={a} m={m}");
            }
        }
    }

    #[test]
    fn closed_form_c() {
        assert_eq!(c_closed_form(3, 4, 1).unwrap(), 6);
        assert_eq!(c_closed_form(3, 4, 2).unwrap(), 5);
        assert_eq!(c_closed_form(2, 5, 1).unwrap(), 5);
        assert_eq!(c_closed_form(3, 1, 1).unwrap(), 2);
        assert_eq!(c_closed_form(3, 1, 2).unwrap(), 1);
        assert_eq!(c_closed_form(3, 3, 1).unwrap(), 4);
        assert_eq!(c_closed_form(3, 3, 2).unwrap(), 4);
        assert_eq!(c_closed_form(3, 5, 1).unwrap(), 7);
        assert_eq!(c_closed_form(3, 5, 2).unwrap(), 7);
        assert!(c_closed_form(4, 3, 1).is_err());
        assert!(c_closed_form(2, 3, 2).is_err());
    }

    #[test]
    fn worked_ladder_small_twist() {
        // the simplest nontrivial passage: three strands, one twist, a = 3
        let steps = ladder(3, 1, 3, None, &ComplexOptions::default()).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps[0].a_i, 4);
        assert_eq!(steps[1].a_i, 3);
        assert_eq!(steps[0].alpha_i, Some(-3));
        assert_eq!(steps[1].alpha_i, Some(-1));
        assert_eq!(steps[0].c_i, Some(2));
        assert_eq!(steps[1].c_i, Some(1));
        assert!(steps[0].acyclic, "unknot has no homology at q = -3");
        assert!(!steps[1].acyclic, "unknot does have homology at q = -1");
    }

    #[test]
    fn ladder_collapses_beyond_bound() {
        // three strands, m = 2 >= onset for a = 3; both rungs acyclic
        let steps = ladder(3, 2, 3, None, &ComplexOptions::default()).unwrap();
        assert!(steps.iter().all(|s| s.acyclic));
    }

    #[test]
    fn two_strand_ladder() {
        let steps = ladder(2, 2, 3, None, &ComplexOptions::default()).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].c_i, Some(2));
        assert_eq!(steps[0].alpha_i, Some(3 - 6 - 1));
        assert!(steps[0].acyclic);
    }

    #[test]
    fn collapse_verdicts() {
        let d = torus_braid(BraidSpec::new(3, 2).unwrap()).unwrap();
        // ambient q = 5 (a = 3): the 1-resolution part at the last crossing
        // is acyclic and the quotient carries the homology
        let v = verify_collapse(&d, 3, &ComplexOptions::at_q(5)).unwrap();
        assert_eq!(v, CollapseVerdict::Collapsed);
        // at ambient q = -1 - 8 = ... pick a q-degree where the sub part has
        // homology: the E_2-style split at crossing 2 in ambient q = 5 after
        // first fixing nothing; instead use a degree with sub homology
        let d21 = torus_braid(BraidSpec::new(2, 1).unwrap()).unwrap();
        let v = verify_collapse(&d21, 0, &ComplexOptions::at_q(1)).unwrap();
        // sub part of the single crossing: one circle at h=1; not acyclic
        assert_eq!(v, CollapseVerdict::NotApplicable);
    }

    #[test]
    fn collapse_with_empty_sub_part() {
        // pick a q so high that the 1-resolution part is empty
        let d = torus_braid(BraidSpec::new(2, 2).unwrap()).unwrap();
        let total = complex(&d, NormContext::ambient(&d), &ComplexOptions::at_q(6)).unwrap();
        let (sub, _) = split_at(&total, 0).unwrap();
        if sub.total_generators() == 0 {
            let v = verify_collapse(&d, 0, &ComplexOptions::at_q(6)).unwrap();
            assert_eq!(v, CollapseVerdict::Collapsed);
        }
    }

    #[test]
    fn stabilization_two_strands() {
        let reports =
            verify_stabilization(2, 2, 4, 3, &ComplexOptions::default()).unwrap();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert!(r.bound_satisfied);
            assert!(r.equal, "k step at m={} a={}", r.m, r.a);
        }
    }

    #[test]
    fn stabilization_below_bound_reports_honestly() {
        let reports =
            verify_stabilization(3, 1, 3, 1, &ComplexOptions::default()).unwrap();
        assert!(!reports[0].bound_satisfied);
        // bound violated: the report carries the non-acyclic rung
        assert!(!reports[0].steps[1].acyclic);
    }

    #[test]
    fn bound_implies_acyclic_and_equal() {
        for a in [-2, 0, 3, 5] {
            let m = onset_bound(3, a).unwrap().max(1) as usize;
            if m + 1 > 4 {
                continue;
            }
            let reports = verify_stabilization(3, m, a, 1, &ComplexOptions::default()).unwrap();
            let r = &reports[0];
            assert!(r.bound_satisfied);
            assert!(r.steps.iter().all(|s| s.acyclic), "a={a} m={m}");
            assert!(r.equal, "a={a} m={m}");
        }
    }

    #[test]
    fn shift_law_examples() {
        // worked case: ambient (3,5) vs standalone (0,-3) with c_1 = 2
        verify_shift_law(3, 1, 1, 2).unwrap();
        verify_shift_law(3, 1, 2, 1).unwrap();
        verify_shift_law(2, 2, 1, 2).unwrap();
    }

    #[test]
    fn worked_generator_views() {
        // the same generator read in three diagrams: ambient, D_1, E-free
        let spec = BraidSpec::new(3, 2).unwrap();
        let d1 = ladder_diagram(spec, 1, LadderKind::D).unwrap();
        // x = v_minus on the single circle of 1100; in D_1 the free
        // crossings are 0,1,3 so the residual resolution is 110
        let res = Resolution::parse("110").unwrap();
        let state = crate::braid::smooth(&d1, res);
        assert_eq!(state.circle_count(), 1);
        let x = Generator { res, labels: 1 };
        let g_amb = grading(&d1, NormContext::ambient(&d1), x, &state);
        assert_eq!((g_amb.h, g_amb.q), (2, 5));
        let g_d1 = grading(&d1, NormContext::standalone(&d1, 0), x, &state);
        assert_eq!((g_d1.h, g_d1.q), (2, 4));
    }

    #[test]
    fn standalone_e_is_unknot_for_two_strands() {
        // E_1 on two strands is an unknot diagram with m negative twists
        for m in 1..=3 {
            let h = standalone_e_homology(2, m, 1, m as u32, &ComplexOptions::default()).unwrap();
            assert_eq!(h.group(0, -1), AbelianGroup::free(1));
            assert_eq!(h.group(0, 1), AbelianGroup::free(1));
            assert_eq!(h.groups.len(), 2, "m={m}");
            assert_eq!(h.min_q(), Some(-1));
        }
    }
}
