//! The golden verification suite behind the `paper-check` subcommand.
//!
//! Every check is named for what it verifies and reports failures in terms of
//! the computed objects themselves.

use std::collections::BTreeMap;
use torkh::braid::{ladder_diagram, smooth, torus_braid, LadderKind, Resolution};
use torkh::chain::Generator;
use torkh::limits::{verify_t2_facts, verify_t3_parity};
use torkh::stabilization::{standalone_e_homology, verify_shift_law, verify_stabilization};
use torkh::{
    complex, grading, homology, ladder, AbelianGroup, BraidSpec, ComplexOptions, GradedHomology,
    NormContext,
};

pub type Check = (&'static str, fn() -> Result<(), String>);

fn kh(n: usize, m: usize) -> Result<GradedHomology, String> {
    let d = torus_braid(BraidSpec::new(n, m).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let c = complex(&d, NormContext::ambient(&d), &ComplexOptions::default())
        .map_err(|e| e.to_string())?;
    homology(&c).map_err(|e| e.to_string())
}

fn expect_group(h: &GradedHomology, hh: i32, q: i32, want: AbelianGroup) -> Result<(), String> {
    let got = h.group(hh, q);
    if got == want {
        Ok(())
    } else {
        Err(format!("at ({hh},{q}): got {got}, want {want}"))
    }
}

fn torsion2() -> AbelianGroup {
    AbelianGroup {
        free_rank: 0,
        invariant_factors: vec![2],
    }
}

fn ladder_shifts_three_strands_one_twist() -> Result<(), String> {
    let steps = ladder(3, 1, 3, None, &ComplexOptions::default()).map_err(|e| e.to_string())?;
    let facts = [
        (steps[0].a_i, 4, "shifted q-degree of the first 0-resolved step"),
        (steps[1].a_i, 3, "shifted q-degree of the second 0-resolved step"),
        (
            steps[0].alpha_i.ok_or("missing alpha_1")?,
            -3,
            "shifted q-degree of the first 1-resolved piece",
        ),
        (
            steps[1].alpha_i.ok_or("missing alpha_2")?,
            -1,
            "shifted q-degree of the second 1-resolved piece",
        ),
        (
            steps[0].c_i.ok_or("missing c_1")? as i32,
            2,
            "negative crossings of the first 1-resolved piece",
        ),
        (
            steps[1].c_i.ok_or("missing c_2")? as i32,
            1,
            "negative crossings of the second 1-resolved piece",
        ),
    ];
    for (got, want, what) in facts {
        if got != want {
            return Err(format!("{what}: got {got}, want {want}"));
        }
    }
    if !steps[0].acyclic {
        return Err("first 1-resolved piece should be acyclic at the ambient degree".into());
    }
    if steps[1].acyclic {
        return Err("second 1-resolved piece should carry homology at the ambient degree".into());
    }
    Ok(())
}

fn generator_readings_across_views() -> Result<(), String> {
    let spec = BraidSpec::new(3, 2).map_err(|e| e.to_string())?;
    // x: the sole circle of resolution 1100 labeled v_minus, read in the
    // once-0-resolved diagram
    let d1 = ladder_diagram(spec, 1, LadderKind::D).map_err(|e| e.to_string())?;
    let res = Resolution::parse("110").map_err(|e| e.to_string())?;
    let state = smooth(&d1, res);
    let x = Generator { res, labels: 1 };
    let amb = grading(&d1, NormContext::ambient(&d1), x, &state);
    if (amb.h, amb.q) != (2, 5) {
        return Err(format!("x ambient reading: got ({},{})", amb.h, amb.q));
    }
    let own = grading(&d1, NormContext::standalone(&d1, 0), x, &state);
    if (own.h, own.q) != (2, 4) {
        return Err(format!("x standalone reading: got ({},{})", own.h, own.q));
    }
    // y: both circles of resolution 1101 labeled v_minus, read in the
    // once-1-resolved diagram with its two negative crossings
    let e1 = ladder_diagram(spec, 1, LadderKind::E).map_err(|e| e.to_string())?;
    let res = Resolution::parse("101").map_err(|e| e.to_string())?;
    let state = smooth(&e1, res);
    if state.circle_count() != 2 {
        return Err(format!("y lives on {} circles, want 2", state.circle_count()));
    }
    let y = Generator { res, labels: 0b11 };
    let amb = grading(&e1, NormContext::ambient(&e1), y, &state);
    if (amb.h, amb.q) != (3, 5) {
        return Err(format!("y ambient reading: got ({},{})", amb.h, amb.q));
    }
    let own = grading(&e1, NormContext::standalone(&e1, 2), y, &state);
    if (own.h, own.q) != (0, -3) {
        return Err(format!("y standalone reading: got ({},{})", own.h, own.q));
    }
    Ok(())
}

fn trefoil_table_and_diagram_independence() -> Result<(), String> {
    let h23 = kh(2, 3)?;
    expect_group(&h23, 0, 1, AbelianGroup::free(1))?;
    expect_group(&h23, 0, 3, AbelianGroup::free(1))?;
    expect_group(&h23, 2, 5, AbelianGroup::free(1))?;
    expect_group(&h23, 3, 7, torsion2())?;
    expect_group(&h23, 3, 9, AbelianGroup::free(1))?;
    if h23.groups.len() != 5 {
        return Err(format!("trefoil table has {} entries, want 5", h23.groups.len()));
    }
    let h32 = kh(3, 2)?;
    if h23 != h32 {
        return Err("two-strand and three-strand trefoil diagrams disagree".into());
    }
    // independent dense reduction of the same cube
    let d = torus_braid(BraidSpec::new(2, 3).unwrap()).unwrap();
    let dense = torkh::oracle::dense_homology(
        &d,
        NormContext::ambient(&d),
        &ComplexOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    if dense != h23 {
        return Err("dense reference reduction disagrees with the sparse path".into());
    }
    Ok(())
}

fn hopf_and_unlink_tables() -> Result<(), String> {
    let hopf = kh(2, 2)?;
    for (h, q) in [(0, 0), (0, 2), (2, 4), (2, 6)] {
        expect_group(&hopf, h, q, AbelianGroup::free(1))?;
    }
    if hopf.groups.len() != 4 {
        return Err("extra groups in the Hopf link table".into());
    }
    let unlink = kh(3, 0)?;
    let want: BTreeMap<(i32, i32), AbelianGroup> = [
        ((0, -3), AbelianGroup::free(1)),
        ((0, -1), AbelianGroup::free(3)),
        ((0, 1), AbelianGroup::free(3)),
        ((0, 3), AbelianGroup::free(1)),
    ]
    .into_iter()
    .collect();
    if unlink.groups != want {
        return Err("three-component unlink table is off".into());
    }
    Ok(())
}

fn two_strand_tower_structure() -> Result<(), String> {
    let r = verify_t2_facts(6, &ComplexOptions::default()).map_err(|e| e.to_string())?;
    if r.is_ok() {
        Ok(())
    } else {
        Err(r.failures.join("; "))
    }
}

fn three_strand_odd_q() -> Result<(), String> {
    let r = verify_t3_parity(4, &ComplexOptions::default()).map_err(|e| e.to_string())?;
    if r.is_ok() {
        Ok(())
    } else {
        Err(r.failures.join("; "))
    }
}

fn unknot_table() -> BTreeMap<(i32, i32), AbelianGroup> {
    [((0, -1), AbelianGroup::free(1)), ((0, 1), AbelianGroup::free(1))]
        .into_iter()
        .collect()
}

fn two_unlink_table() -> BTreeMap<(i32, i32), AbelianGroup> {
    [
        ((0, -2), AbelianGroup::free(1)),
        ((0, 0), AbelianGroup::free(2)),
        ((0, 2), AbelianGroup::free(1)),
    ]
    .into_iter()
    .collect()
}

fn e_piece_closed_forms() -> Result<(), String> {
    // residue-class table on three strands: c values, the link each 1-resolved
    // piece simplifies to, and the generator-wise grading shifts
    let cases = [
        (3usize, 1usize, 4u32, unknot_table()),
        (3, 2, 4, two_unlink_table()),
        (4, 1, 6, unknot_table()),
        (4, 2, 5, unknot_table()),
    ];
    for (m, i, c, want) in cases {
        let got_c = torkh::c_closed_form(3, m, i).map_err(|e| e.to_string())?;
        if got_c != c {
            return Err(format!("c for m={m}, i={i}: got {got_c}, want {c}"));
        }
        let h = standalone_e_homology(3, m, i, c, &ComplexOptions::default())
            .map_err(|e| e.to_string())?;
        if h.groups != want {
            return Err(format!(
                "standalone homology of the 1-resolved piece m={m}, i={i} does not match its unknotted form"
            ));
        }
        verify_shift_law(3, m, i, c).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn stabilization_at_bound() -> Result<(), String> {
    let at = verify_stabilization(3, 2, 3, 1, &ComplexOptions::default())
        .map_err(|e| e.to_string())?;
    let r = &at[0];
    if !r.bound_satisfied || !r.equal || !r.steps.iter().all(|s| s.acyclic) {
        return Err("three-strand passage at the bound failed to stabilize".into());
    }
    let below = verify_stabilization(3, 1, 3, 1, &ComplexOptions::default())
        .map_err(|e| e.to_string())?;
    let r = &below[0];
    if r.bound_satisfied {
        return Err("one twist should sit below the onset bound at q-degree 3".into());
    }
    if r.steps[1].acyclic {
        return Err("below the bound the second 1-resolved piece must carry homology".into());
    }
    Ok(())
}

fn two_strand_limits() -> Result<(), String> {
    for j in -3..=8 {
        let r = torkh::limit_homology(2, j, true, &ComplexOptions::default())
            .map_err(|e| e.to_string())?;
        let cf = r.closed_form.as_ref().ok_or("missing closed form")?;
        if r.homology != cf.reduced_cohomology() {
            return Err(format!(
                "stable column j={j}: computed groups disagree with the closed form {cf}"
            ));
        }
    }
    Ok(())
}

fn three_strand_stable_class() -> Result<(), String> {
    let r = torkh::limit_homology(3, 3, true, &ComplexOptions::default())
        .map_err(|e| e.to_string())?;
    if (r.a_hat, r.m_hat) != (9, 3) {
        return Err(format!("onset: got ({}, {})", r.a_hat, r.m_hat));
    }
    let want: BTreeMap<i32, AbelianGroup> = [(3, torsion2()), (4, AbelianGroup::free(1))]
        .into_iter()
        .collect();
    if r.homology != want {
        return Err("stable column j=3 on three strands is not Z/2 then Z".into());
    }
    Ok(())
}

fn single_q_column_of_hopf() -> Result<(), String> {
    let col = torkh::homology_column(2, 2, 4, &ComplexOptions::default())
        .map_err(|e| e.to_string())?;
    let want: BTreeMap<i32, AbelianGroup> = [(2, AbelianGroup::free(1))].into_iter().collect();
    if col == want {
        Ok(())
    } else {
        Err("q=4 column of the Hopf link should be a single Z at h=2".into())
    }
}

/// The full suite, in execution order.
pub fn all_checks() -> Vec<Check> {
    vec![
        ("ladder-shifts-three-strands-one-twist", ladder_shifts_three_strands_one_twist),
        ("generator-readings-across-views", generator_readings_across_views),
        ("trefoil-table-and-diagram-independence", trefoil_table_and_diagram_independence),
        ("hopf-and-unlink-tables", hopf_and_unlink_tables),
        ("single-q-column-of-hopf", single_q_column_of_hopf),
        ("two-strand-tower-structure", two_strand_tower_structure),
        ("three-strand-odd-q", three_strand_odd_q),
        ("e-piece-closed-forms", e_piece_closed_forms),
        ("stabilization-at-bound", stabilization_at_bound),
        ("two-strand-limits", two_strand_limits),
        ("three-strand-stable-class", three_strand_stable_class),
    ]
}

/// Run the suite; returns (passed, failures with messages).
pub fn run_all() -> (usize, Vec<(String, String)>) {
    let mut passed = 0;
    let mut failures = Vec::new();
    for (name, f) in all_checks() {
        match f() {
            Ok(()) => passed += 1,
            Err(msg) => failures.push((name.to_string(), msg)),
        }
    }
    (passed, failures)
}
