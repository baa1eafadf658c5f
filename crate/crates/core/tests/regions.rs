use approx::assert_abs_diff_eq;
use coordsim::channel::joint_from_chain;
use coordsim::joint::info_terms;
use coordsim::prob::{binary_entropy, conditional_entropy, mutual_information_between, JointPmf, Pmf};
use coordsim::regions::*;
use coordsim::{Dmc, Error};
use proptest::prelude::*;

fn h2(q: f64) -> f64 {
    binary_entropy(q).unwrap()
}

fn chain_design(p1: f64, p_o: f64, alpha: f64, beta: f64) -> JointPmf<f64> {
    let spec = example_chain_matrices::<f64>(p1, p_o, alpha, beta).unwrap();
    example_design_joint(&joint_from_chain(&spec).unwrap()).unwrap()
}

fn rates(ro: f64, rho1: f64, rho2: f64, rc: f64, ra: f64) -> RateTuple {
    RateTuple {
        ro,
        rho1,
        rho2,
        rc,
        ra,
        delta1: 0.0,
        delta2: 0.0,
    }
}

/// Rates `margin` above every lower bound of the joint region, with `Rc`
/// midway between `I(X;C)` and `I(B;C)` and `Ra = 0`.
fn interior_tuple(design: &JointPmf<f64>, margin: f64) -> RateTuple {
    let t = info_terms(design).unwrap();
    let rc = 0.5 * (t.i_x_c + t.i_b_c);
    let ro = (t.i_xy_ac - rc).max(t.i_xy_c - rc).max(0.0) + margin;
    rates(ro, (rc - t.i_x_ac).max(0.0) + margin, t.h_y_bc + margin, rc, 0.0)
}

#[test]
fn design_joint_matches_factorized_design() {
    let from_chain = chain_design(0.25, 0.05, 0.2, 0.2);
    let direct = example_design::<f64>(0.25, 0.05, 0.2, 0.2).unwrap().joint().unwrap();
    assert_eq!(from_chain.dims_vec(), vec![2, 2, 2, 2, 2]);
    for (a, b) in from_chain.probs().iter().zip(direct.probs()) {
        assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
    }
}

#[test]
fn theorem1_examples() {
    let design = chain_design(0.25, 0.05, 0.2, 0.2);
    let t = info_terms(&design).unwrap();
    let good = interior_tuple(&design, 0.1);
    let report = theorem1_member(&good, &design).unwrap();
    assert!(report.member, "{:?}", report.failing());
    assert_eq!(report.constraints.len(), 7);

    let no_comm = RateTuple { rc: 0.0, ..good };
    let r = theorem1_member(&no_comm, &design).unwrap();
    assert!(!r.member);
    assert!(r.failing().contains(&"independence-c"));

    let too_fast = RateTuple { rc: t.i_b_c, ..good };
    let r = theorem1_member(&too_fast, &design).unwrap();
    assert!(r.failing().contains(&"decodability"));
    assert!(
        !theorem1_member(
            &RateTuple {
                rc: t.i_b_c + 0.1,
                ..good
            },
            &design
        )
        .unwrap()
        .member
    );
}

#[test]
fn theorem1_rejects_non_factorized_joint() {
    let mut probs = chain_design(0.25, 0.05, 0.2, 0.2).probs().to_vec();
    probs.swap(0, 1);
    let bad = JointPmf::from_dims(&[2, 2, 2, 2, 2], probs).unwrap();
    assert!(matches!(
        theorem1_member(&interior_tuple(&chain_design(0.25, 0.05, 0.2, 0.2), 0.1), &bad),
        Err(Error::Factorization(_))
    ));
}

#[test]
fn theorem1_boundary_is_rejected() {
    let design = chain_design(0.25, 0.05, 0.2, 0.2);
    let t = info_terms(&design).unwrap();
    let on_edge = RateTuple {
        rho2: t.h_y_bc,
        ..interior_tuple(&design, 0.1)
    };
    assert_eq!(
        theorem1_member(&on_edge, &design).unwrap().failing(),
        vec!["local-randomness-y"]
    );
}

#[test]
fn theorem2_examples() {
    let p_xyu = example_separate_design::<f64>(0.1, 0.375).unwrap();
    let uniform = Pmf::<f64>::from_f64(&[0.5, 0.5]).unwrap();
    let noiseless = Dmc::bsc(0.0).unwrap();
    let t = separate_terms(&p_xyu, &noiseless, &uniform).unwrap();
    assert_eq!(t.h_z, 0.0);
    let base = rates(t.i_xy_u, 0.0, t.h_y_u, t.i_x_u + 1e-3, 0.0);
    let base = RateTuple {
        ro: t.i_xy_u - base.rc + 1e-3,
        rho1: 1e-3,
        ..base
    };
    assert!(theorem2_member(&base, &p_xyu, &noiseless, &uniform).unwrap().member);
    let short = RateTuple {
        rho2: t.h_y_u - 1e-3,
        ..base
    };
    assert_eq!(
        theorem2_member(&short, &p_xyu, &noiseless, &uniform).unwrap().failing(),
        vec!["local-randomness-y"]
    );

    let bsc = Dmc::bsc(0.1).unwrap();
    let t = separate_terms(&p_xyu, &bsc, &uniform).unwrap();
    let over = RateTuple { rc: t.i_a_b, ..base };
    assert!(theorem2_member(&over, &p_xyu, &bsc, &uniform)
        .unwrap()
        .failing()
        .contains(&"decodability"));
}

#[test]
fn theorem2_minimal_randomness_of_the_example() {
    let p = 0.4;
    let p1 = 0.1;
    let p2 = (p - p1) / (1.0 - 2.0 * p1);
    let p_xyu = example_separate_design::<f64>(p1, p2).unwrap();
    let t = separate_terms(&p_xyu, &Dmc::bsc(0.1).unwrap(), &Pmf::from_f64(&[0.5, 0.5]).unwrap()).unwrap();
    let min = theorem2_min_randomness(&t).unwrap();
    assert_abs_diff_eq!(min, h2(0.4) - h2(0.1), epsilon = 1e-9);
    assert_abs_diff_eq!(min, 0.5020, epsilon = 1e-4);
}

#[test]
fn theorem2_minimum_is_approached_by_members() {
    let (p, p1) = (0.4, 0.12);
    let p_xyu = example_separate_design::<f64>(p1, (p - p1) / (1.0 - 2.0 * p1)).unwrap();
    let ch = Dmc::bsc(0.1).unwrap();
    let u = Pmf::from_f64(&[0.5, 0.5]).unwrap();
    let t = separate_terms(&p_xyu, &ch, &u).unwrap();
    let min = theorem2_min_randomness(&t).unwrap();
    let rc = t.i_x_u + 1e-6;
    let tuple = rates(t.i_xy_u - rc + 1e-6, 1e-6, (t.h_y_u - t.h_z).max(0.0), rc, 0.0);
    assert!(theorem2_member(&tuple, &p_xyu, &ch, &u).unwrap().member);
    assert_abs_diff_eq!(tuple.ro + tuple.rho1 + tuple.rho2, min, epsilon = 1e-5);
    let below = RateTuple {
        ro: tuple.ro - 1e-3,
        ..tuple
    };
    assert!(!theorem2_member(&below, &p_xyu, &ch, &u).unwrap().member);
    // Past the channel's capacity no communication rate is admissible.
    let p_xyu = example_separate_design::<f64>(0.05, (p - 0.05) / 0.9).unwrap();
    assert!(theorem2_min_randomness(&separate_terms(&p_xyu, &ch, &u).unwrap()).is_none());
}

#[test]
fn theorem2_rejects_non_markov_design() {
    let copies = JointPmf::<f64>::from_dims(&[2, 2, 2], vec![0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5]).unwrap();
    // X = Y with U independent of both.
    let indep = JointPmf::<f64>::from_dims(&[2, 2, 2], vec![0.25, 0.25, 0.0, 0.0, 0.0, 0.0, 0.25, 0.25]).unwrap();
    let ch = Dmc::bsc(0.1).unwrap();
    let u = Pmf::from_f64(&[0.5, 0.5]).unwrap();
    assert!(separate_terms(&copies, &ch, &u).is_ok());
    assert!(matches!(separate_terms(&indep, &ch, &u), Err(Error::Factorization(_))));
    let nonadditive = Dmc::from_f64(&[&[0.9, 0.1], &[0.3, 0.7]]).unwrap();
    assert!(matches!(
        separate_terms(&copies, &nonadditive, &u),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn separate_region_examples() {
    let r = example_separate_region(0.4, 0.0).unwrap();
    assert_abs_diff_eq!(r.min_sum_rate, h2(0.4), epsilon = 1e-12);
    let r = example_separate_region(0.4, 0.1).unwrap();
    assert_abs_diff_eq!(r.min_sum_rate, 0.9710 - 0.4690, epsilon = 1e-4);
    assert_abs_diff_eq!(r.min_rc, 0.5310, epsilon = 1e-4);
    assert!(example_separate_region(0.5, 0.1).is_err());
    assert!(example_separate_region(0.4, 0.5).is_err());
}

#[test]
fn joint_optimizer_examples() {
    let o = example_joint_optimize(0.4, 0.0, 1e-3).unwrap();
    assert_abs_diff_eq!(o.min_sum_rate, h2(0.4), epsilon = 1e-9);
    let o = example_joint_optimize(0.4, 0.1, 1e-3).unwrap();
    assert!(o.feasible);
    assert_abs_diff_eq!(
        o.min_sum_rate,
        example_separate_region(0.4, 0.1).unwrap().min_sum_rate,
        epsilon = 2e-3
    );
    let o = example_joint_optimize(0.4, 0.35, 1e-3).unwrap();
    assert!(o.min_sum_rate >= h2(0.4) - h2(0.35) + 1e-3);
}

#[test]
fn joint_optimizer_reports_consistent_argmin() {
    let o = example_joint_optimize(0.4, 0.2, 1e-3).unwrap();
    let e = ExampleParams::from_design(o.p1, 0.2, o.alpha, o.beta).unwrap();
    assert_abs_diff_eq!(e.p, 0.4, epsilon = 1e-9);
    assert_abs_diff_eq!(e.p2, o.p2, epsilon = 1e-12);
    assert!(h2(o.p1) >= h2(0.2) - 1e-9);
    assert_abs_diff_eq!(o.min_rc, 1.0 - h2(o.p1), epsilon = 1e-12);
}

#[test]
fn joint_optimizer_is_resolution_invariant() {
    for p_o in [0.05, 0.15, 0.25, 0.3, 0.35] {
        let a = example_joint_optimize(0.4, p_o, 1e-3).unwrap();
        let b = example_joint_optimize(0.4, p_o, 5e-4).unwrap();
        assert!((a.min_sum_rate - b.min_sum_rate).abs() <= 2e-3, "p_o {p_o}");
    }
}

#[test]
fn threshold_examples() {
    assert_eq!(threshold_po(0.0).unwrap(), 0.0);
    assert_eq!(threshold_po(0.5).unwrap(), 0.5);
    assert_abs_diff_eq!(threshold_po(0.4).unwrap(), 0.2763932, epsilon = 1e-7);
    assert!(matches!(threshold_po(0.6), Err(Error::Domain(_))));
}

#[test]
fn chain_matrix_examples() {
    let spec = example_chain_matrices::<f64>(0.3, 0.1, 0.0, 0.0).unwrap();
    let y_given_cb = &spec.stages()[2].channel;
    for s in 0..4 {
        assert!(y_given_cb.row(s).contains(&1.0));
        assert_eq!(y_given_cb.row(s)[s / 2], 1.0);
    }
    let joint = joint_from_chain(&spec).unwrap();
    let split = joint.split_axis(1, &[2, 2]).unwrap();
    assert_abs_diff_eq!(
        mutual_information_between(&split, &[0], &[1]).unwrap(),
        1.0 - h2(0.3),
        epsilon = 1e-9
    );
    let d = chain_design(0.3, 0.1, 0.15, 0.4);
    assert_abs_diff_eq!(
        conditional_entropy(&d, &[1], &[3, 4]).unwrap(),
        0.1 * h2(0.4) + 0.9 * h2(0.15),
        epsilon = 1e-9
    );
    assert!(example_chain_matrices::<f64>(1.2, 0.1, 0.0, 0.0).is_err());
}

#[test]
fn closed_forms_match_numerics_on_grid() {
    let grid: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
    for p_o in [0.05, 0.2] {
        for &p1 in &grid {
            for &alpha in &grid {
                for &beta in &grid {
                    let d = chain_design(p1, p_o, alpha, beta);
                    let t = info_terms(&d).unwrap();
                    let c = example_closed_forms(p1, p_o, alpha, beta).unwrap();
                    for (got, want) in [
                        (t.i_x_c, c.i_x_c),
                        (t.i_x_ac, c.i_x_c),
                        (t.i_xy_c, c.i_xy_c),
                        (t.i_xy_ac, c.i_xy_c),
                        (t.i_b_c, c.i_b_c),
                        (t.h_y_bc, c.h_y_bc),
                    ] {
                        assert!(
                            (got - want).abs() < 1e-9,
                            "({p1}, {p_o}, {alpha}, {beta}): {got} vs {want}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn figure3_examples() {
    let g = grid(0.0, 0.5, 0.05).unwrap();
    let rows = figure3_curve(0.4, &g, 1e-3).unwrap();
    assert_eq!(rows.len(), 10);
    assert_abs_diff_eq!(rows[0].joint_sum, h2(0.4), epsilon = 1e-9);
    assert_abs_diff_eq!(rows[0].sep_ext_sum, h2(0.4), epsilon = 1e-12);
    assert_abs_diff_eq!(rows[0].sep_basic_sum, h2(0.4), epsilon = 1e-12);
    let th = threshold_po(0.4).unwrap();
    for r in &rows {
        if !r.sep_ext_sum.is_nan() {
            assert!(r.sep_ext_sum <= r.sep_basic_sum + 1e-12);
        }
        if r.p_o <= th {
            assert!((r.joint_sum - r.sep_ext_sum).abs() < 2e-3, "{r:?}");
        }
    }
    assert!(figure3_curve(0.4, &[0.2, 0.1], 1e-3).is_err());
    assert!(figure3_curve(0.4, &[0.6], 1e-3).is_err());
}

#[test]
fn figure4_examples() {
    let g = grid(0.0, 0.5, 0.05).unwrap();
    let rows = figure4_curve(0.4, &g, 1e-3).unwrap();
    assert_abs_diff_eq!(rows[0].sep_ext_rc, 1.0, epsilon = 1e-12);
    let th = threshold_po(0.4).unwrap();
    for r in &rows {
        if r.p_o <= th {
            assert!(r.joint_rc <= r.sep_ext_rc + 1e-12, "{r:?}");
        }
        if !r.joint_rc.is_nan() {
            assert!(r.joint_rc < 1.0 - h2(r.p_o) + 1e-9, "{r:?}");
        }
    }
}

#[test]
fn csv_is_deterministic() {
    let g = grid(0.0, 0.3, 0.1).unwrap();
    let meta = vec![("p".to_string(), "0.4".to_string())];
    let a = fig3_csv(&figure3_curve(0.4, &g, 1e-3).unwrap(), &meta);
    let b = fig3_csv(&figure3_curve(0.4, &g, 1e-3).unwrap(), &meta);
    assert_eq!(a, b);
    assert!(a.starts_with("# p: 0.4\np_o,joint_sum,sep_ext_sum,sep_basic_sum\n0.000000,"));
    assert_eq!(a.lines().count(), 5);
}

fn arb_tuple() -> impl Strategy<Value = RateTuple> {
    (
        0.0f64..1.0,
        0.0f64..1.0,
        0.0f64..1.0,
        0.0f64..0.8,
        0.0f64..0.5,
        0.0f64..0.2,
        0.0f64..0.2,
    )
        .prop_map(|(ro, rho1, rho2, rc, ra, delta1, delta2)| RateTuple {
            ro,
            rho1,
            rho2,
            rc,
            ra,
            delta1,
            delta2,
        })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 400,
        max_global_rejects: 50_000,
        ..ProptestConfig::default()
    })]

    #[test]
    fn theorem1_is_monotone(t in arb_tuple(), bump in 0.0f64..0.5, which in 0usize..4) {
        let design = chain_design(0.25, 0.05, 0.2, 0.2);
        let before = theorem1_member(&t, &design).unwrap();
        prop_assume!(before.member);
        let mut up = t;
        match which {
            0 => up.ro += bump,
            1 => up.rho1 += bump,
            2 => up.rho2 += bump,
            _ => up.rc += bump,
        }
        let after = theorem1_member(&up, &design).unwrap();
        if which < 3 {
            prop_assert!(after.member);
        } else if !after.member {
            for name in after.failing() {
                prop_assert!(name == "decodability" || name == "local-randomness-x", "{}", name);
            }
        }
    }

    #[test]
    fn theorem2_is_monotone(t in arb_tuple(), bump in 0.0f64..0.5, which in 0usize..4) {
        let p_xyu = example_separate_design::<f64>(0.1, 0.375).unwrap();
        let ch = Dmc::bsc(0.05).unwrap();
        let u = Pmf::from_f64(&[0.5, 0.5]).unwrap();
        let before = theorem2_member(&t, &p_xyu, &ch, &u).unwrap();
        prop_assume!(before.member);
        let mut up = t;
        match which {
            0 => up.ro += bump,
            1 => up.rho1 += bump,
            2 => up.rho2 += bump,
            _ => up.rc += bump,
        }
        let after = theorem2_member(&up, &p_xyu, &ch, &u).unwrap();
        if which < 3 {
            prop_assert!(after.member);
        } else if !after.member {
            for name in after.failing() {
                prop_assert!(name == "decodability" || name == "local-randomness-x", "{}", name);
            }
        }
    }

    #[test]
    fn rate_transfer_through_delta1(margin in 0.01f64..0.3, t in 0.0f64..0.3, frac in 0.0f64..=1.0) {
        let design = chain_design(0.25, 0.05, 0.2, 0.2);
        let base = interior_tuple(&design, margin);
        prop_assert!(theorem1_member(&base, &design).unwrap().member);
        let shift = (t * frac).min(base.rho1);
        let moved = RateTuple {
            ro: base.ro + t,
            rho1: base.rho1 - shift,
            delta1: base.delta1 + shift,
            ..base
        };
        prop_assert!(theorem1_member(&moved, &design).unwrap().member);
    }
}
